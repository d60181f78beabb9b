//! Mechanical verifiers for the structure of geodesic orbit Lorentz
//! nilmanifolds.
//!
//! Two cases split on whether the metric restricted to the commutator ideal
//! `[n, n]` is nondegenerate:
//!
//! * nondegenerate: the nilpotency class must lie in `{1, 2, 4}` (never 3),
//!   and when some complement generator acts nontrivially on `[n, n]` the
//!   generator actions are pinned to a canonical nilpotent pair — a single
//!   3-step Jordan block for one generator, a paired row/column form for a
//!   second, zero for all others, and zero for every commutator;
//! * degenerate: the class is at most 2 and `n` splits orthogonally into
//!   two definite pieces and a hyperbolic plane spanned by the radical
//!   direction and a null partner, with every complement generator acting
//!   trivially on `[n, n]`.
//!
//! The verifiers check these conclusions on a concrete input presumed
//! geodesic orbit; they do not re-certify the geodesic orbit property
//! itself (that is `geodesic::go_certify`, with its own evidence levels).
//! All checks are exact; every failed check appends a violation naming the
//! identity that broke, so reports are independently re-checkable.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::bilinear::{BilinearForm, SignatureReport};
use crate::canon;
use crate::homspace::ReductiveSpace;
use crate::lie::{LieAlgebra, NilpotencyClass};
use crate::linalg::{invert, unit_vec, zero_vec, Matrix, Rat, Subspace};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HypothesisError {
    #[error("m is not closed under the bracket; it must be the nilpotent part")]
    MNotSubalgebra,
    #[error("the nilpotent part is not nilpotent")]
    NotNilpotent,
    #[error("metric on m is neither Lorentz (either convention) nor definite")]
    MetricNotLorentz,
    #[error("metric is degenerate on [n,n]; run the degenerate-case verifier (verify-thm42)")]
    CommutatorDegenerate,
    #[error(
        "metric is nondegenerate on [n,n]; run the nondegenerate-case verifier (verify-thm41)"
    )]
    CommutatorNondegenerate,
}

/// Identity that a failed check names. Codes are stable strings in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationCode {
    /// `⟨[ξ,η],ζ⟩ + ⟨η,[ξ,ζ]⟩ = 0` for ξ in the complement, η,ζ in `[n,n]`.
    DerivedIdealInvariance,
    /// Nonzero nilpotent skew action on a definite commutator form.
    NilpotentSkewOnDefinite,
    /// Commutator restriction of unusable signature for the structured branch.
    CommutatorSignature,
    /// Generator action not of the paired row/column shape.
    GeneratorAdShape,
    /// A generator beyond the first two acts nontrivially on `[n,n]`.
    SecondaryGeneratorAdNonzero,
    /// `ad([y,z])` nonzero on `[n,n]` for some basis pair.
    CommutatorAdNonzero,
    /// The canonical third direction is not generated by the brackets.
    DerivedGeneration,
    /// Nilpotency class 3, or above 4.
    ClassExcluded,
    /// Trivial complement action but class above 2.
    AdTrivialClassBound,
    /// Image chain of the witnessed forms did not end on the null direction.
    ImageChainShape,
    /// Radical of the commutator restriction is not one-dimensional.
    RadicalDimension,
    /// A part that must be definite is not.
    DefinitePart,
    /// The plane of the radical direction and its partner is not split `(1,1)`.
    PartnerSignature,
    /// A complement vector acts nontrivially on `[n,n]` (degenerate case).
    AdOnDerivedNonzero,
    /// Degenerate case: class above 2.
    ClassBound,
    /// `[n,n]` is not central although the class bound asserts it.
    DerivedCentrality,
    /// The isotropy does not preserve a required splitting.
    IsotropyInvariance,
}

impl ViolationCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ViolationCode::DerivedIdealInvariance => "DERIVED_IDEAL_INVARIANCE",
            ViolationCode::NilpotentSkewOnDefinite => "NILPOTENT_SKEW_ON_DEFINITE",
            ViolationCode::CommutatorSignature => "COMMUTATOR_SIGNATURE",
            ViolationCode::GeneratorAdShape => "GENERATOR_AD_SHAPE",
            ViolationCode::SecondaryGeneratorAdNonzero => "SECONDARY_GENERATOR_AD_NONZERO",
            ViolationCode::CommutatorAdNonzero => "COMMUTATOR_AD_NONZERO",
            ViolationCode::DerivedGeneration => "DERIVED_GENERATION",
            ViolationCode::ClassExcluded => "CLASS_EXCLUDED",
            ViolationCode::AdTrivialClassBound => "AD_TRIVIAL_CLASS_BOUND",
            ViolationCode::ImageChainShape => "IMAGE_CHAIN_SHAPE",
            ViolationCode::RadicalDimension => "RADICAL_DIMENSION",
            ViolationCode::DefinitePart => "DEFINITE_PART",
            ViolationCode::PartnerSignature => "PARTNER_SIGNATURE",
            ViolationCode::AdOnDerivedNonzero => "AD_ON_DERIVED_NONZERO",
            ViolationCode::ClassBound => "CLASS_BOUND",
            ViolationCode::DerivedCentrality => "DERIVED_CENTRALITY",
            ViolationCode::IsotropyInvariance => "ISOTROPY_INVARIANCE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub code: ViolationCode,
    pub detail: String,
}

fn violation(code: ViolationCode, detail: impl Into<String>) -> Violation {
    Violation {
        code,
        detail: detail.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    AdTrivial,
    Structured,
}

/// Witness basis for the structured branch, all in m coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisWitness {
    pub x: Vec<Rat>,
    pub secondary: Vec<Vec<Rat>>,
    pub commutator_basis: Vec<Vec<Rat>>,
}

/// Report of the nondegenerate-commutator verifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NondegenerateReport {
    pub hypothesis_ok: bool,
    pub branch: Branch,
    pub class: usize,
    pub basis_witness: Option<BasisWitness>,
    /// Canonical-basis matrices of the first and second generator actions.
    pub ad_forms: Option<(Matrix, Option<Matrix>)>,
    pub chain_dims: Option<Vec<usize>>,
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl NondegenerateReport {
    pub fn pass(&self) -> bool {
        self.hypothesis_ok && self.violations.is_empty()
    }
}

/// Report of the degenerate-commutator verifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerateReport {
    pub hypothesis_ok: bool,
    /// Bases (in m coordinates) of the splitting: definite part of `[n,n]`,
    /// the radical direction, the null partner, and the outer definite part.
    pub v1_basis: Vec<Vec<Rat>>,
    pub null_direction: Vec<Rat>,
    pub null_partner: Option<Vec<Rat>>,
    pub v2_basis: Vec<Vec<Rat>>,
    pub signature_w: Option<SignatureReport>,
    pub ad_vanishing: bool,
    pub class: usize,
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl DegenerateReport {
    pub fn pass(&self) -> bool {
        self.hypothesis_ok && self.violations.is_empty()
    }
}

// ---------------------------------------------------------------------------
// pinned generator forms

/// The paired row/column form of the second generator action: row 0 carries
/// `a` on the trailing columns, column 2 carries the same `a` on the
/// trailing rows, all else zero. `(p+3) × (p+3)` with `p = a.len()`.
pub fn secondary_generator_form(a: &[Rat]) -> Matrix {
    let zeros = zero_vec(a.len());
    constrained_generator_matrix(&Rat::zero(), a, &zeros)
}

/// The constrained generator action with vanishing corner entries: an
/// upper band `(0,1) = (1,2) = a12`, rows `b1`, `b2` in the trailing block
/// and the skew-forced trailing column `(-b2, b1)`.
pub fn constrained_generator_matrix(a12: &Rat, b1: &[Rat], b2: &[Rat]) -> Matrix {
    assert_eq!(b1.len(), b2.len());
    let p = b1.len();
    let mut m = Matrix::zeros(p + 3, p + 3);
    m[(0, 1)] = a12.clone();
    m[(1, 2)] = a12.clone();
    for t in 0..p {
        m[(0, 3 + t)] = b1[t].clone();
        m[(1, 3 + t)] = b2[t].clone();
        m[(3 + t, 1)] = -b2[t].clone();
        m[(3 + t, 2)] = b1[t].clone();
    }
    m
}

// ---------------------------------------------------------------------------
// adjoint image chain

/// `S₀ = V`, `S_{k+1} = Σ_i maps_i(S_k)`, until stabilization. Returns the
/// chain of subspaces; dims weakly decrease and reach 0 exactly when the
/// joint action is nilpotent.
pub fn adjoint_image_chain(maps: &[Matrix], dim: usize) -> Vec<Subspace> {
    for m in maps {
        assert_eq!(m.rows(), dim, "map dimension mismatch");
        assert_eq!(m.cols(), dim, "maps must be square");
    }
    let mut chain = vec![Subspace::full(dim)];
    loop {
        let cur = chain.last().unwrap();
        let mut gens = Vec::new();
        for m in maps {
            for b in cur.basis() {
                gens.push(m.mul_vec(b));
            }
        }
        let next = Subspace::from_generators(dim, gens);
        if &next == cur {
            return chain;
        }
        let done = next.is_zero();
        chain.push(next);
        if done {
            return chain;
        }
    }
}

pub fn chain_dims(chain: &[Subspace]) -> Vec<usize> {
    chain.iter().map(|s| s.dim()).collect()
}

// ---------------------------------------------------------------------------
// shared hypothesis processing

struct NilpotentPart {
    algebra: LieAlgebra,
    metric: BilinearForm,
    class: usize,
    commutator: Subspace,
    metric_negated: bool,
}

fn nilpotent_part(space: &ReductiveSpace) -> Result<NilpotentPart, HypothesisError> {
    // structure constants of m in the user's m basis
    let dm = space.dim_m();
    let mut algebra = LieAlgebra::new(dm);
    for i in 0..dm {
        for j in i + 1..dm {
            let br = space
                .algebra()
                .bracket(&space.m_basis()[i], &space.m_basis()[j]);
            if !space.m_span().contains(&br) {
                return Err(HypothesisError::MNotSubalgebra);
            }
            let coords = space.m_coefficients(&br);
            let coeffs: Vec<(usize, Rat)> = coords
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            algebra.set_bracket(i, j, coeffs).expect("indices in range");
        }
    }
    let class = match algebra.lower_central_series().class {
        NilpotencyClass::Nilpotent(s) => s,
        NilpotencyClass::NonNilpotent => return Err(HypothesisError::NotNilpotent),
    };
    // normalize to at most one negative direction; the identities checked
    // below are invariant under a global sign flip of the metric. Definite
    // metrics are accepted: they are the Riemannian specialization, where
    // the nondegenerate-case verifier reduces to the 2-step conclusion.
    let sig = space.metric().signature();
    if sig.null != 0 {
        return Err(HypothesisError::MetricNotLorentz);
    }
    let (metric, metric_negated) = if sig.negative <= 1 {
        (space.metric().clone(), false)
    } else if sig.positive <= 1 {
        let neg = BilinearForm::new(space.metric().gram().scale(&-Rat::one()))
            .expect("negation preserves symmetry");
        (neg, true)
    } else {
        return Err(HypothesisError::MetricNotLorentz);
    };
    let commutator = algebra.derived_subalgebra();
    Ok(NilpotentPart {
        algebra,
        metric,
        class,
        commutator,
        metric_negated,
    })
}

// ---------------------------------------------------------------------------
// nondegenerate case

/// Verifies the nondegenerate-commutator conclusions on `space`, whose m
/// part is taken as the nilpotent factor. Errors on hypothesis failures
/// (redirecting degenerate inputs to `verify_degenerate`); conclusion
/// failures are collected as violations in the report.
pub fn verify_nondegenerate(
    space: &ReductiveSpace,
) -> Result<NondegenerateReport, HypothesisError> {
    let part = nilpotent_part(space)?;
    let NilpotentPart {
        algebra,
        metric,
        class,
        commutator,
        metric_negated,
    } = part;
    let mut notes = Vec::new();
    if metric_negated {
        notes.push("metric negated internally to the mostly-plus convention".to_string());
    }
    let mut violations = Vec::new();

    let restricted = metric
        .restrict(&commutator)
        .expect("commutator in m coords");
    if !commutator.is_zero() && restricted.is_degenerate() {
        return Err(HypothesisError::CommutatorDegenerate);
    }

    if commutator.is_zero() {
        // abelian: the zero form is nondegenerate by convention
        check_commutator_pairs(&algebra, &commutator, &mut violations);
        check_class_excluded(class, &mut violations);
        return Ok(NondegenerateReport {
            hypothesis_ok: true,
            branch: Branch::AdTrivial,
            class,
            basis_witness: None,
            ad_forms: None,
            chain_dims: None,
            violations,
            notes,
        });
    }

    // complement of the commutator ideal inside m
    let complement = metric
        .orthocomplement(&commutator)
        .expect("same coordinates");

    // invariance identity: complement vectors act skewly on [n,n]
    let mut invariance_ok = true;
    for (xi_idx, xi) in complement.basis().iter().enumerate() {
        for (ei, eta) in commutator.basis().iter().enumerate() {
            for (zi, zeta) in commutator.basis().iter().enumerate().skip(ei) {
                let t = metric.eval(&algebra.bracket(xi, eta), zeta)
                    + metric.eval(eta, &algebra.bracket(xi, zeta));
                if !t.is_zero() {
                    invariance_ok = false;
                    violations.push(violation(
                        ViolationCode::DerivedIdealInvariance,
                        format!(
                            "complement vector #{xi_idx} with commutator basis pair ({ei}, {zi}): residual {}",
                            crate::linalg::format_rat(&t)
                        ),
                    ));
                }
            }
        }
    }

    // generator actions on the commutator
    let ad_mats: Vec<Matrix> = complement
        .basis()
        .iter()
        .map(|xi| {
            algebra
                .ad_restricted(xi, &commutator)
                .expect("[n,n] is an ideal")
        })
        .collect();
    let all_trivial = ad_mats.iter().all(|m| m.is_zero());

    let (branch, basis_witness, ad_forms, chain) = if all_trivial {
        if class > 2 {
            violations.push(violation(
                ViolationCode::AdTrivialClassBound,
                format!("complement acts trivially on [n,n] but class is {class}"),
            ));
        }
        (Branch::AdTrivial, None, None, None)
    } else {
        let res = structured_branch(
            &algebra,
            &commutator,
            &complement,
            &ad_mats,
            &restricted,
            invariance_ok,
            &mut violations,
            &mut notes,
        );
        (Branch::Structured, res.0, res.1, res.2)
    };

    check_commutator_pairs(&algebra, &commutator, &mut violations);
    check_class_excluded(class, &mut violations);

    Ok(NondegenerateReport {
        hypothesis_ok: true,
        branch,
        class,
        basis_witness,
        ad_forms,
        chain_dims: chain,
        violations,
        notes,
    })
}

fn check_class_excluded(class: usize, violations: &mut Vec<Violation>) {
    if class == 3 || class > 4 {
        violations.push(violation(
            ViolationCode::ClassExcluded,
            format!("nilpotency class {class} is excluded (allowed: 1, 2, 4)"),
        ));
    }
}

/// `ad([y, z])` must vanish on `[n,n]` for every basis pair of n.
fn check_commutator_pairs(
    algebra: &LieAlgebra,
    commutator: &Subspace,
    violations: &mut Vec<Violation>,
) {
    if commutator.is_zero() {
        return;
    }
    let n = algebra.dim();
    for y in 0..n {
        for z in y + 1..n {
            let u = algebra.bracket_basis(y, z);
            if crate::linalg::is_zero_vec(&u) {
                continue;
            }
            let m = algebra
                .ad_restricted(&u, commutator)
                .expect("[n,n] is an ideal");
            if !m.is_zero() {
                violations.push(violation(
                    ViolationCode::CommutatorAdNonzero,
                    format!("ad([e{y}, e{z}]) is nonzero on [n,n]"),
                ));
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn structured_branch(
    algebra: &LieAlgebra,
    commutator: &Subspace,
    complement: &Subspace,
    ad_mats: &[Matrix],
    restricted: &BilinearForm,
    invariance_ok: bool,
    violations: &mut Vec<Violation>,
    notes: &mut Vec<String>,
) -> (
    Option<BasisWitness>,
    Option<(Matrix, Option<Matrix>)>,
    Option<Vec<usize>>,
) {
    let dc = commutator.dim();
    let first_nonzero = ad_mats
        .iter()
        .position(|m| !m.is_zero())
        .expect("branch condition");

    if restricted.is_definite() {
        violations.push(violation(
            ViolationCode::NilpotentSkewOnDefinite,
            format!(
                "complement vector #{first_nonzero} acts nontrivially although the commutator form is definite"
            ),
        ));
        return (None, None, None);
    }
    let sig = restricted.signature();
    let lorentz_type = sig.null == 0 && (sig.negative == 1 || sig.positive == 1);
    if !lorentz_type {
        violations.push(violation(
            ViolationCode::CommutatorSignature,
            format!(
                "commutator restriction has signature ({}, {}, {})",
                sig.positive, sig.negative, sig.null
            ),
        ));
        return (None, None, None);
    }
    if !invariance_ok || dc < 3 {
        // the canonical machinery needs the skew identity and a null triple
        return (None, None, None);
    }

    // mostly-plus restriction expected here; a mostly-minus restriction of a
    // mostly-plus ambient form cannot occur (at most one minus overall)
    let m_x = &ad_mats[first_nonzero];
    let cf = match canon::nilpotent_witness_basis(m_x, restricted) {
        Ok(cf) => cf,
        Err(e) => {
            violations.push(violation(
                ViolationCode::GeneratorAdShape,
                format!("canonical form construction failed: {e}"),
            ));
            return (None, None, None);
        }
    };
    let p_inv = invert(&cf.witness).expect("witness invertible");
    let canonical_x = cf.canonical_matrix.clone();
    let p = dc - 3;

    // witness commutator basis in m coordinates
    let commutator_basis: Vec<Vec<Rat>> = (0..dc)
        .map(|j| {
            let mut v = zero_vec(algebra.dim());
            for (i, b) in commutator.basis().iter().enumerate() {
                crate::linalg::axpy(&mut v, &cf.witness[(i, j)], b);
            }
            v
        })
        .collect();

    // primary generator and transformed secondaries
    let x_vec = complement.basis()[first_nonzero].clone();
    let mut secondary: Vec<Vec<Rat>> = Vec::new();
    let mut secondary_mats: Vec<Matrix> = Vec::new();
    for (i, xi) in complement.basis().iter().enumerate() {
        if i == first_nonzero {
            continue;
        }
        let transformed = p_inv.mul(&ad_mats[i]).mul(&cf.witness);
        let a_val = transformed[(0, 1)].clone();
        let mut gen = xi.clone();
        if !a_val.is_zero() {
            crate::linalg::axpy(&mut gen, &-a_val.clone(), &x_vec);
        }
        let mat = transformed.sub(&canonical_x.scale(&a_val));
        secondary.push(gen);
        secondary_mats.push(mat);
    }

    // the third canonical direction must be generated by x against some
    // secondary generator; reorder and eliminate third components
    let third_component = |gen: &Vec<Rat>| -> Rat {
        let br = algebra.bracket(&x_vec, gen);
        let coords = commutator.coords_of(&br).expect("[n,n] is an ideal");
        let canonical = p_inv.mul_vec(&coords);
        canonical[2].clone()
    };
    let lead = secondary.iter().position(|g| !third_component(g).is_zero());
    match lead {
        None => {
            // with the pinned shapes no other bracket can reach the third
            // canonical direction, so it would fall outside [n,n]
            violations.push(violation(
                ViolationCode::DerivedGeneration,
                "no generator pairs with the primary one onto the third canonical direction"
                    .to_string(),
            ));
        }
        Some(l) => {
            secondary.swap(0, l);
            secondary_mats.swap(0, l);
            let lead_third = third_component(&secondary[0]);
            for i in 1..secondary.len() {
                let c = third_component(&secondary[i]);
                if !c.is_zero() {
                    let f = &c / &lead_third;
                    let lead_gen = secondary[0].clone();
                    crate::linalg::axpy(&mut secondary[i], &-f.clone(), &lead_gen);
                    let adj = secondary_mats[0].scale(&f);
                    secondary_mats[i] = secondary_mats[i].sub(&adj);
                }
            }
        }
    }

    // shape checks: the leading secondary carries the paired row/column
    // form, all later ones vanish identically
    for (i, mat) in secondary_mats.iter().enumerate() {
        if i == 0 {
            check_paired_shape(mat, p, violations);
        } else if !mat.is_zero() {
            violations.push(violation(
                ViolationCode::SecondaryGeneratorAdNonzero,
                format!("secondary generator #{i} acts nontrivially on [n,n]"),
            ));
        }
    }
    if secondary.len() <= 1 {
        notes.push(
            "single secondary generator: pairwise commutation checks are vacuous".to_string(),
        );
    }

    // image chain of the witnessed forms ends on the null direction
    let mut maps = vec![canonical_x.clone()];
    maps.extend(secondary_mats.iter().cloned());
    let chain = adjoint_image_chain(&maps, dc);
    let dims = chain_dims(&chain);
    if dims.last() == Some(&0) && chain.len() >= 2 {
        let last_nonzero = &chain[chain.len() - 2];
        if last_nonzero.dim() != 1 || !last_nonzero.contains(&unit_vec(dc, 0)) {
            violations.push(violation(
                ViolationCode::ImageChainShape,
                format!("iterated image chain {dims:?} does not end on the null direction"),
            ));
        }
    }

    let witness = BasisWitness {
        x: x_vec,
        secondary,
        commutator_basis,
    };
    let second_form = secondary_mats.first().cloned();
    (Some(witness), Some((canonical_x, second_form)), Some(dims))
}

fn check_paired_shape(mat: &Matrix, p: usize, violations: &mut Vec<Violation>) {
    let n = p + 3;
    for i in 0..n {
        for j in 0..n {
            let in_row = i == 0 && j >= 3;
            let in_col = j == 2 && i >= 3;
            if !(in_row || in_col) && !mat[(i, j)].is_zero() {
                violations.push(violation(
                    ViolationCode::GeneratorAdShape,
                    format!("unexpected nonzero entry at ({i}, {j})"),
                ));
            }
        }
    }
    for t in 0..p {
        if mat[(0, 3 + t)] != mat[(3 + t, 2)] {
            violations.push(violation(
                ViolationCode::GeneratorAdShape,
                format!("row/column coupling mismatch at offset {t}"),
            ));
        }
    }
}

// ---------------------------------------------------------------------------
// invariant complements

/// Deterministic invariant complement of `small` inside `big`, both assumed
/// invariant under every map in `actions` (ambient coordinates). Candidate
/// complements are graphs over the pivot complement; since `small` is
/// invariant the equivariance condition is a linear Sylvester system, which
/// is solved exactly. `None` means no invariant complement exists.
fn invariant_complement(actions: &[Matrix], big: &Subspace, small: &Subspace) -> Option<Subspace> {
    let ambient = big.ambient_dim();
    let b = big.dim();
    let r = small.dim();
    if r == 0 {
        return Some(big.clone());
    }
    let q = b - r;
    if q == 0 {
        return Some(Subspace::zero(ambient));
    }
    // coordinates of small inside big, echelonized to find pivot columns
    let small_in_big: Vec<Vec<Rat>> = small
        .basis()
        .iter()
        .map(|v| big.coords_of(v).expect("small inside big"))
        .collect();
    let small_coords = Subspace::from_generators(b, small_in_big);
    let pivots: Vec<usize> = small_coords
        .basis()
        .iter()
        .map(|row| row.iter().position(|x| !x.is_zero()).expect("nonzero row"))
        .collect();
    let free: Vec<usize> = (0..b).filter(|j| !pivots.contains(j)).collect();

    // change of basis on big coordinates: small basis first, then the free
    // unit vectors
    let mut t = Matrix::zeros(b, b);
    for (j, s_vec) in small_coords.basis().iter().enumerate() {
        for i in 0..b {
            t[(i, j)] = s_vec[i].clone();
        }
    }
    for (j, &f) in free.iter().enumerate() {
        t[(f, r + j)] = Rat::one();
    }
    let t_inv = invert(&t).expect("basis change invertible");

    // restricted actions in the block basis; small invariance means the
    // lower-left block vanishes
    let mut blocks = Vec::with_capacity(actions.len());
    for a in actions {
        let mut m = Matrix::zeros(b, b);
        for j in 0..b {
            // action of a on the j-th big basis vector, in big coordinates
            let mut ambient_vec = zero_vec(ambient);
            for (i, bb) in big.basis().iter().enumerate() {
                crate::linalg::axpy(&mut ambient_vec, &t[(i, j)], bb);
            }
            let img = a.mul_vec(&ambient_vec);
            let coords = big.coords_of(&img)?;
            for i in 0..b {
                m[(i, j)] = coords[i].clone();
            }
        }
        let m = t_inv.mul(&m);
        for i in r..b {
            for j in 0..r {
                if !m[(i, j)].is_zero() {
                    return None; // small not invariant after all
                }
            }
        }
        blocks.push(m);
    }

    // unknown X (r×q): for each action, A_ss·X - X·A_qq + A_sq = 0
    let unknowns = r * q;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    for m in &blocks {
        for i in 0..r {
            for j in 0..q {
                let mut row = zero_vec(unknowns);
                for k in 0..r {
                    // A_ss[i][k] · X[k][j]
                    row[k * q + j] += &m[(i, k)];
                }
                for k in 0..q {
                    // - X[i][k] · A_qq[k][j]
                    row[i * q + k] -= &m[(r + k, r + j)];
                }
                rows.push(row);
                rhs.push(-m[(i, r + j)].clone());
            }
        }
    }
    let x = if rows.is_empty() {
        zero_vec(unknowns)
    } else {
        let sys = Matrix::from_rows(unknowns, rows);
        crate::linalg::solve_linear(&sys, &rhs)
            .expect("system shape")?
            .particular
    };

    // assemble complement vectors w_j = free_j + Σ_k X[k][j]·small_k
    let mut gens = Vec::with_capacity(q);
    for j in 0..q {
        let mut coords = zero_vec(b);
        coords[free[j]] = Rat::one();
        for k in 0..r {
            let c = &x[k * q + j];
            if !c.is_zero() {
                for (slot, sv) in small_coords.basis()[k].iter().enumerate() {
                    coords[slot] += c * sv;
                }
            }
        }
        let mut ambient_vec = zero_vec(ambient);
        for (i, bb) in big.basis().iter().enumerate() {
            crate::linalg::axpy(&mut ambient_vec, &coords[i], bb);
        }
        gens.push(ambient_vec);
    }
    Some(Subspace::from_generators(ambient, gens))
}

// ---------------------------------------------------------------------------
// degenerate case

/// Verifies the degenerate-commutator conclusions: one-dimensional radical,
/// definite inner and outer parts, a split `(1,1)` partner plane, trivial
/// complement action on `[n,n]`, and class at most 2.
pub fn verify_degenerate(space: &ReductiveSpace) -> Result<DegenerateReport, HypothesisError> {
    let part = nilpotent_part(space)?;
    let NilpotentPart {
        algebra,
        metric,
        class,
        commutator,
        metric_negated,
    } = part;
    let mut notes = vec![
        "complete reducibility of the isotropy is not checked directly; the splittings it \
         produces are verified instead"
            .to_string(),
    ];
    if metric_negated {
        notes.push("metric negated internally to the mostly-plus convention".to_string());
    }

    let restricted = metric
        .restrict(&commutator)
        .expect("commutator in m coords");
    if commutator.is_zero() || !restricted.is_degenerate() {
        return Err(HypothesisError::CommutatorNondegenerate);
    }

    let mut violations = Vec::new();
    let dm = algebra.dim();

    // radical of the restriction, lifted to m coordinates
    let rad = restricted.radical();
    if rad.dim() != 1 {
        violations.push(violation(
            ViolationCode::RadicalDimension,
            format!(
                "radical of the commutator restriction has dimension {}",
                rad.dim()
            ),
        ));
    }
    let lift = |coords: &[Rat]| -> Vec<Rat> {
        let mut v = zero_vec(dm);
        for (c, b) in coords.iter().zip(commutator.basis()) {
            crate::linalg::axpy(&mut v, c, b);
        }
        v
    };
    let null_direction = lift(&rad.basis()[0]);

    let rad_line = Subspace::from_generators(dm, vec![null_direction.clone()]);
    // isotropy actions on m, for the invariant-complement construction
    let actions: Vec<Matrix> = space
        .h_basis()
        .iter()
        .map(|eta| {
            let mut m = Matrix::zeros(dm, dm);
            for j in 0..dm {
                let img = space.m_coefficients(
                    &space
                        .algebra()
                        .bracket(eta, &space.vector_from_m_coefficients(&unit_vec(dm, j))),
                );
                for i in 0..dm {
                    m[(i, j)] = img[i].clone();
                }
            }
            m
        })
        .collect();

    // inner definite part: an isotropy-invariant complement of the radical
    // line inside [n,n] (the induced form on any complement is the same, so
    // definiteness does not depend on the choice)
    let mut v1_basis = Vec::new();
    match invariant_complement(&actions, &commutator, &rad_line) {
        None => violations.push(violation(
            ViolationCode::IsotropyInvariance,
            "no isotropy-invariant complement of the radical inside [n,n]".to_string(),
        )),
        Some(c) => {
            let form = metric.restrict(&c).expect("same coordinates");
            if !form.is_positive_definite() && c.dim() > 0 {
                violations.push(violation(
                    ViolationCode::DefinitePart,
                    "inner definite part is not positive definite".to_string(),
                ));
            }
            v1_basis = c.basis().to_vec();
        }
    }

    // outer part: orthocomplement of the commutator, same treatment (its
    // restricted form has the same radical line)
    let outer = metric
        .orthocomplement(&commutator)
        .expect("same coordinates");
    let mut v2_basis = Vec::new();
    match invariant_complement(&actions, &outer, &rad_line) {
        None => violations.push(violation(
            ViolationCode::IsotropyInvariance,
            "no isotropy-invariant complement of the radical in the outer part".to_string(),
        )),
        Some(c) => {
            let form = metric.restrict(&c).expect("same coordinates");
            if !form.is_positive_definite() && c.dim() > 0 {
                violations.push(violation(
                    ViolationCode::DefinitePart,
                    "outer definite part is not positive definite".to_string(),
                ));
            }
            v2_basis = c.basis().to_vec();
        }
    }

    // partner plane: orthocomplement of both definite parts
    let mut definite_gens = v1_basis.clone();
    definite_gens.extend(v2_basis.clone());
    let definite_span = Subspace::from_generators(dm, definite_gens);
    let w_plane = metric
        .orthocomplement(&definite_span)
        .expect("same coordinates");
    let mut signature_w = None;
    let mut null_partner = None;
    if w_plane.dim() != 2 || !w_plane.contains(&null_direction) {
        violations.push(violation(
            ViolationCode::PartnerSignature,
            format!(
                "partner plane has dimension {} (expected 2 containing the radical direction)",
                w_plane.dim()
            ),
        ));
    } else {
        let w_form = metric.restrict(&w_plane).expect("same coordinates");
        let sig = w_form.signature();
        signature_w = Some(sig);
        if !(sig.positive == 1 && sig.negative == 1 && sig.null == 0) {
            violations.push(violation(
                ViolationCode::PartnerSignature,
                format!(
                    "partner plane has signature ({}, {}, {})",
                    sig.positive, sig.negative, sig.null
                ),
            ));
        } else {
            // first solution of ⟨e_null, v0⟩ = 1 inside the plane, then the
            // self-norm correction along the null direction
            let b0 = &w_plane.basis()[0];
            let b1 = &w_plane.basis()[1];
            let c0 = metric.eval(&null_direction, b0);
            let c1 = metric.eval(&null_direction, b1);
            let sys = Matrix::from_rows(2, vec![vec![c0, c1]]);
            match crate::linalg::solve_linear(&sys, &[Rat::one()]).expect("shapes match") {
                None => violations.push(violation(
                    ViolationCode::PartnerSignature,
                    "no partner with unit pairing against the radical direction".to_string(),
                )),
                Some(sol) => {
                    let mut v0 = zero_vec(dm);
                    crate::linalg::axpy(&mut v0, &sol.particular[0], b0);
                    crate::linalg::axpy(&mut v0, &sol.particular[1], b1);
                    let self_norm = metric.eval(&v0, &v0);
                    if !self_norm.is_zero() {
                        let corr = -self_norm / (Rat::one() + Rat::one());
                        crate::linalg::axpy(&mut v0, &corr, &null_direction);
                    }
                    debug_assert!(metric.eval(&v0, &v0).is_zero());
                    debug_assert!(metric.eval(&null_direction, &v0).is_one());
                    null_partner = Some(v0);
                }
            }
        }
    }

    // complement action on [n,n] must vanish
    let mut ad_vanishing = true;
    let mut complement_basis: Vec<(String, Vec<Rat>)> = Vec::new();
    if let Some(v0) = &null_partner {
        complement_basis.push(("null partner".to_string(), v0.clone()));
    }
    for (i, v) in v2_basis.iter().enumerate() {
        complement_basis.push((format!("outer definite vector #{i}"), v.clone()));
    }
    for (name, v) in &complement_basis {
        let m = algebra
            .ad_restricted(v, &commutator)
            .expect("[n,n] is an ideal");
        if !m.is_zero() {
            ad_vanishing = false;
            violations.push(violation(
                ViolationCode::AdOnDerivedNonzero,
                format!("{name} acts nontrivially on [n,n]"),
            ));
        }
    }
    // centrality: with class ≤ 2 every basis vector must act trivially
    for i in 0..dm {
        let m = algebra
            .ad_restricted(&unit_vec(dm, i), &commutator)
            .expect("[n,n] is an ideal");
        if !m.is_zero() {
            violations.push(violation(
                ViolationCode::DerivedCentrality,
                format!("basis vector e{i} acts nontrivially on [n,n]"),
            ));
        }
    }

    if class > 2 {
        violations.push(violation(
            ViolationCode::ClassBound,
            format!("nilpotency class {class} exceeds 2"),
        ));
    }

    // isotropy invariance of the splittings
    let v1_span = Subspace::from_generators(dm, v1_basis.clone());
    let v2_span = Subspace::from_generators(dm, v2_basis.clone());
    let null_span = Subspace::from_generators(dm, vec![null_direction.clone()]);
    for (hi, eta) in space.h_basis().iter().enumerate() {
        let act = |v: &[Rat]| -> Vec<Rat> {
            let vg = space.vector_from_m_coefficients(v);
            space.m_coefficients(&space.algebra().bracket(eta, &vg))
        };
        let checks: Vec<(&str, &Subspace, Vec<Vec<Rat>>)> = vec![
            ("inner definite part", &v1_span, v1_basis.clone()),
            ("outer definite part", &v2_span, v2_basis.clone()),
            (
                "radical direction",
                &null_span,
                vec![null_direction.clone()],
            ),
        ];
        for (name, span, basis) in checks {
            for b in basis {
                if !span.contains(&act(&b)) {
                    violations.push(violation(
                        ViolationCode::IsotropyInvariance,
                        format!("isotropy vector #{hi} does not preserve the {name}"),
                    ));
                }
            }
        }
        if let Some(v0) = &null_partner {
            let img = act(v0);
            let v0_span = Subspace::from_generators(dm, vec![v0.clone()]);
            if !v0_span.contains(&img) {
                violations.push(violation(
                    ViolationCode::IsotropyInvariance,
                    format!("isotropy vector #{hi} does not preserve the null partner line"),
                ));
            }
        }
    }

    Ok(DegenerateReport {
        hypothesis_ok: true,
        v1_basis,
        null_direction,
        null_partner,
        v2_basis,
        signature_w,
        ad_vanishing,
        class,
        violations,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homspace::heisenberg_rotation_space;
    use crate::lie::{filiform, heisenberg3};
    use crate::linalg::{rint, unit_vec};

    #[test]
    fn chain_on_pinned_pair() {
        let maps = vec![
            canon::canonical_nilpotent_matrix(2),
            secondary_generator_form(&[rint(1), rint(1)]),
        ];
        let chain = adjoint_image_chain(&maps, 5);
        assert_eq!(chain_dims(&chain), vec![5, 3, 1, 0]);
        let last = &chain[chain.len() - 2];
        assert_eq!(last.basis(), &[unit_vec(5, 0)]);
    }

    #[test]
    fn chain_on_zero_map() {
        let chain = adjoint_image_chain(&[Matrix::zeros(4, 4)], 4);
        assert_eq!(chain_dims(&chain), vec![4, 0]);
    }

    #[test]
    fn chain_on_jordan_block() {
        let j3 = canon::canonical_nilpotent_matrix(0);
        let chain = adjoint_image_chain(&[j3], 3);
        assert_eq!(chain_dims(&chain), vec![3, 2, 1, 0]);
    }

    #[test]
    fn trace_identity_example() {
        // p = 1, a12 = 2, b1 = (3), b2 = (1): trace of the square is -2
        let m = constrained_generator_matrix(&rint(2), &[rint(3)], &[rint(1)]);
        assert_eq!(m.mul(&m).trace(), rint(-2));
    }

    fn build_trivial_h(algebra: LieAlgebra, gram: Matrix) -> ReductiveSpace {
        let n = algebra.dim();
        ReductiveSpace::build(
            algebra,
            vec![],
            (0..n).map(|i| unit_vec(n, i)).collect(),
            gram,
        )
        .unwrap()
    }

    #[test]
    fn nondegenerate_heisenberg_passes() {
        // Heisenberg with trivial isotropy and a Lorentz metric whose time
        // direction stays off the commutator
        let mut g = Matrix::identity(3);
        g[(0, 0)] = rint(-1);
        let space = build_trivial_h(heisenberg3(), g);
        let rep = verify_nondegenerate(&space).unwrap();
        assert!(rep.pass(), "violations: {:?}", rep.violations);
        assert_eq!(rep.branch, Branch::AdTrivial);
        assert_eq!(rep.class, 2);
    }

    #[test]
    fn nondegenerate_riemannian_rotation_space_passes() {
        // definite metrics are the Riemannian specialization: the rotation
        // space with the identity metric verifies as 2-step, trivial branch
        let s = heisenberg_rotation_space();
        let rep = verify_nondegenerate(&s).unwrap();
        assert!(rep.pass(), "violations: {:?}", rep.violations);
        assert_eq!(rep.branch, Branch::AdTrivial);
        assert_eq!(rep.class, 2);
    }

    #[test]
    fn nondegenerate_heisenberg_rotation_with_isotropy() {
        // mostly-minus Lorentz metric diag(-1,-1,1) on the rotation space:
        // the verifier normalizes the sign internally and notes it
        let s = heisenberg_rotation_space();
        let mut gram = Matrix::identity(3);
        gram[(0, 0)] = rint(-1);
        gram[(1, 1)] = rint(-1);
        let space = ReductiveSpace::build(
            s.algebra().clone(),
            s.h_basis().to_vec(),
            s.m_basis().to_vec(),
            gram,
        )
        .unwrap();
        let rep = verify_nondegenerate(&space).unwrap();
        assert!(rep.pass(), "violations: {:?}", rep.violations);
        assert!(rep.notes.iter().any(|n| n.contains("negated")));
        assert_eq!(rep.branch, Branch::AdTrivial);
        assert_eq!(rep.class, 2);
    }

    #[test]
    fn nondegenerate_abelian_passes() {
        let space = build_trivial_h(
            crate::lie::LieAlgebra::abelian(2),
            Matrix::from_i64(&[&[1, 0], &[0, -1]]),
        );
        let rep = verify_nondegenerate(&space).unwrap();
        assert!(rep.pass());
        assert_eq!(rep.class, 1);
        assert_eq!(rep.branch, Branch::AdTrivial);
    }

    #[test]
    fn nondegenerate_filiform_fails_with_named_violations() {
        // class-3 filiform with nondegenerate commutator: the invariance
        // identity and the class exclusion must both be flagged
        let mut g = Matrix::identity(4);
        g[(1, 1)] = rint(-1);
        let space = build_trivial_h(filiform(4), g);
        let rep = verify_nondegenerate(&space).unwrap();
        assert!(!rep.pass());
        assert!(rep
            .violations
            .iter()
            .any(|v| v.code == ViolationCode::DerivedIdealInvariance));
        assert!(rep
            .violations
            .iter()
            .any(|v| v.code == ViolationCode::ClassExcluded));
        assert_eq!(rep.class, 3);
    }

    #[test]
    fn degenerate_redirects_to_nondegenerate_verifier() {
        let space = build_trivial_h(
            crate::lie::LieAlgebra::abelian(2),
            Matrix::from_i64(&[&[1, 0], &[0, -1]]),
        );
        assert_eq!(
            verify_degenerate(&space).unwrap_err(),
            HypothesisError::CommutatorNondegenerate
        );
    }

    fn degenerate_dim4_space() -> ReductiveSpace {
        // basis (x1, x2, u, w): [x1, x2] = u; x1, x2 orthonormal;
        // u, w null with ⟨u, w⟩ = 1
        let mut alg = crate::lie::LieAlgebra::new(4);
        alg.set_simple_bracket(0, 1, 2, rint(1));
        let gram = Matrix::from_i64(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
        build_trivial_h(alg, gram)
    }

    #[test]
    fn degenerate_dim4_passes() {
        let rep = verify_degenerate(&degenerate_dim4_space()).unwrap();
        assert!(rep.pass(), "violations: {:?}", rep.violations);
        assert_eq!(rep.class, 2);
        assert_eq!(
            rep.signature_w,
            Some(SignatureReport {
                positive: 1,
                negative: 1,
                null: 0
            })
        );
        assert!(rep.ad_vanishing);
        assert!(rep.v1_basis.is_empty()); // p = 0
        assert_eq!(rep.v2_basis.len(), 2);
        assert_eq!(rep.null_direction, vec![rint(0), rint(0), rint(1), rint(0)]);
        assert_eq!(
            rep.null_partner,
            Some(vec![rint(0), rint(0), rint(0), rint(1)])
        );
    }

    #[test]
    fn degenerate_perturbed_redirects() {
        // making u unit turns the commutator nondegenerate
        let mut alg = crate::lie::LieAlgebra::new(4);
        alg.set_simple_bracket(0, 1, 2, rint(1));
        let gram = Matrix::from_i64(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 1], &[0, 0, 1, 0]]);
        let space = build_trivial_h(alg, gram);
        assert_eq!(
            verify_degenerate(&space).unwrap_err(),
            HypothesisError::CommutatorNondegenerate
        );
    }

    #[test]
    fn degenerate_filiform_fails() {
        // filiform(4) with a metric that degenerates the commutator: class 3
        // and a nontrivial action must both be flagged
        let gram = Matrix::from_i64(&[&[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0], &[0, 1, 0, 0]]);
        let space = build_trivial_h(filiform(4), gram);
        let rep = verify_degenerate(&space).unwrap();
        assert!(!rep.pass());
        assert!(rep
            .violations
            .iter()
            .any(|v| v.code == ViolationCode::ClassBound));
        assert!(rep
            .violations
            .iter()
            .any(|v| v.code == ViolationCode::AdOnDerivedNonzero
                || v.code == ViolationCode::DerivedCentrality));
    }

    #[test]
    fn invariant_complement_solves_the_sylvester_system() {
        // swap action: the coordinate complement of span{(1,1)} is not
        // invariant, the eigenline span{(1,-1)} is; the solver must find it
        let big = Subspace::full(2);
        let small = Subspace::from_generators(2, vec![vec![rint(1), rint(1)]]);
        let a = Matrix::from_i64(&[&[0, 1], &[1, 0]]);
        let c = invariant_complement(&[a.clone()], &big, &small).unwrap();
        assert_eq!(c.dim(), 1);
        let w = &c.basis()[0];
        assert!(c.contains(&a.mul_vec(w)));
        assert!(!small.contains(w));
        // a Jordan block admits no invariant complement of its image line
        let j = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        let line = Subspace::from_generators(2, vec![unit_vec(2, 0)]);
        assert_eq!(invariant_complement(&[j], &big, &line), None);
    }

    #[test]
    fn degenerate_with_rotation_isotropy_passes() {
        // adjoin the plane rotation as isotropy: it preserves every piece
        // of the splitting, so the invariance checks all run and pass
        let mut alg = crate::lie::LieAlgebra::new(5);
        alg.set_simple_bracket(0, 1, 2, rint(1)); // [x1, x2] = u
        alg.set_simple_bracket(4, 0, 1, rint(1)); // [D, x1] = x2
        alg.set_simple_bracket(4, 1, 0, rint(-1)); // [D, x2] = -x1
        assert_eq!(alg.validate(), Ok(()));
        let gram = Matrix::from_i64(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
        let space = ReductiveSpace::build(
            alg,
            vec![unit_vec(5, 4)],
            (0..4).map(|i| unit_vec(5, i)).collect(),
            gram,
        )
        .unwrap();
        let rep = verify_degenerate(&space).unwrap();
        assert!(rep.pass(), "violations: {:?}", rep.violations);
        assert_eq!(rep.class, 2);
    }

    #[test]
    fn degenerate_with_splitting_breaking_isotropy_fails() {
        // an isotropy vector mixing the outer definite part with the null
        // partner line breaks the invariance of the splitting
        let mut alg = crate::lie::LieAlgebra::new(5);
        alg.set_simple_bracket(0, 1, 2, rint(1)); // [x1, x2] = u
        alg.set_simple_bracket(4, 0, 2, rint(1)); // [D, x1] = u
        assert_eq!(alg.validate(), Ok(()));
        let gram = Matrix::from_i64(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
        // metric skewness: <[D,x1], zeta> + <x1, [D,zeta]> = <u, zeta>;
        // nonzero for zeta = w, so this build must be rejected — the bad
        // isotropy never reaches the verifier
        let err = ReductiveSpace::build(
            alg,
            vec![unit_vec(5, 4)],
            (0..4).map(|i| unit_vec(5, i)).collect(),
            gram,
        )
        .unwrap_err();
        assert_eq!(
            err,
            crate::homspace::BuildError::MetricNotInvariant {
                eta: 0,
                xi: 0,
                zeta: 3
            }
        );
    }

    #[test]
    fn verifiers_are_deterministic() {
        let s = degenerate_dim4_space();
        assert_eq!(
            verify_degenerate(&s).unwrap(),
            verify_degenerate(&s).unwrap()
        );
        let mut g = Matrix::identity(3);
        g[(0, 0)] = rint(-1);
        let s2 = build_trivial_h(heisenberg3(), g);
        assert_eq!(
            verify_nondegenerate(&s2).unwrap(),
            verify_nondegenerate(&s2).unwrap()
        );
    }

    #[test]
    fn structured_branch_on_pinned_family() {
        let space =
            crate::structure::pinned_family_space(1, &[rint(1)], &rint(0), &rint(1), 0).unwrap();
        let rep = verify_nondegenerate(&space).unwrap();
        assert!(rep.pass(), "violations: {:?}", rep.violations);
        assert_eq!(rep.branch, Branch::Structured);
        assert_eq!(rep.class, 4);
        let dims = rep.chain_dims.unwrap();
        assert_eq!(dims.last(), Some(&0));
        let forms = rep.ad_forms.unwrap();
        assert_eq!(forms.0, canon::canonical_nilpotent_matrix(1));
        assert_eq!(forms.1.unwrap(), secondary_generator_form(&[rint(1)]));
    }
}

/// Builds the nilpotent algebra whose two generators act on a `(p+3)`-dim
/// abelian ideal by the canonical nilpotent pair, with `[x, x̃₁] = c2·e1 +
/// c3·e2` inside the ideal and `extra` additional generators acting
/// trivially. Metric: canonical Gram on the ideal, identity on the
/// generator block, blocks orthogonal. Class is 4 when `c3 ≠ 0`.
pub fn pinned_family_space(
    p: usize,
    a: &[Rat],
    c2: &Rat,
    c3: &Rat,
    extra: usize,
) -> Result<ReductiveSpace, crate::homspace::BuildError> {
    assert_eq!(a.len(), p);
    let ideal = p + 3;
    let dim = ideal + 2 + extra;
    let mut alg = LieAlgebra::new(dim);
    let x = ideal;
    let y = ideal + 1;
    // ad(x) on the ideal: 3-step Jordan block
    alg.set_simple_bracket(x, 1, 0, Rat::one());
    alg.set_simple_bracket(x, 2, 1, Rat::one());
    // ad(x̃₁): paired row/column form with coefficients a
    for t in 0..p {
        alg.set_simple_bracket(y, 3 + t, 0, a[t].clone());
    }
    let col: Vec<(usize, Rat)> = (0..p).map(|t| (3 + t, a[t].clone())).collect();
    alg.set_bracket(y, 2, col).expect("indices in range");
    // completion inside the ideal
    let mut completion = Vec::new();
    if !c2.is_zero() {
        completion.push((1usize, c2.clone()));
    }
    if !c3.is_zero() {
        completion.push((2usize, c3.clone()));
    }
    alg.set_bracket(x, y, completion).expect("indices in range");

    let mut gram = canon::canonical_gram(p);
    let tail = Matrix::identity(2 + extra);
    gram = gram.block_diag(&tail);
    let m_basis = (0..dim).map(|i| unit_vec(dim, i)).collect();
    ReductiveSpace::build(alg, vec![], m_basis, gram)
}
