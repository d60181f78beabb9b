//! Parallel hunt over parametrized nilpotent families with Lorentz metrics
//! for a 4-step geodesic orbit candidate.
//!
//! Candidate specs are pure data: `(family, dim, params, h_strategy)`
//! reproduce the run bit for bit, including each spec's sampling seed,
//! which is derived from the base seed and the spec index alone so results
//! do not depend on scheduling. Scan output is a JSONL stream ordered by
//! spec index plus a summary; a checkpoint file records the last completed
//! index for `--resume`.
//!
//! A `sampled_pass` at class 4 is a research lead, never a proof. The
//! theorem cross-check runs the other way: a class-3 pass with a
//! nondegenerate commutator and an invariant Lorentz metric at 1000+
//! samples contradicts the structure theory and is flagged loudly.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::bilinear::{BilinearForm, SignConvention};
use crate::geodesic::{go_certify, GoStatus, GoVerdict};
use crate::homspace::ReductiveSpace;
use crate::lie::{filiform, LieAlgebra, NilpotencyClass};
use crate::linalg::{
    format_rat, kernel_basis, parse_rat, rint, solve_linear, unit_vec, zero_vec, Matrix, Rat,
};
use crate::report;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Maximal-class standard filiform algebras with enumerated Lorentz Grams.
    Filiform,
    /// Algebras whose two generators act on an abelian ideal by the
    /// canonical nilpotent pair; 4-step by construction when the bracket of
    /// the generators meets the third canonical direction.
    CanonicalPair,
    /// Free 2-generator nilpotent algebras of class 3 or 4, optionally
    /// quotiented by a central direction in the top grade.
    FreeNilpotentQuotient,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Filiform => "filiform",
            Family::CanonicalPair => "canonical-pair",
            Family::FreeNilpotentQuotient => "free-nilpotent",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "filiform" => Some(Family::Filiform),
            "canonical-pair" => Some(Family::CanonicalPair),
            "free-nilpotent" => Some(Family::FreeNilpotentQuotient),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HStrategy {
    /// Trivial isotropy.
    None,
    /// Adjoin the full space of metric-skew derivations as the isotropy;
    /// maximizes the `α` freedom available to the geodesic solver.
    SkewDerivations,
}

impl HStrategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            HStrategy::None => "none",
            HStrategy::SkewDerivations => "skew-derivations",
        }
    }

    pub fn parse(s: &str) -> Option<HStrategy> {
        match s {
            "none" => Some(HStrategy::None),
            "skew-derivations" => Some(HStrategy::SkewDerivations),
            _ => None,
        }
    }
}

/// One candidate: instantiates to a reductive space or a structured
/// rejection. `h_dim` is filled at instantiation time (0 until then) and is
/// echoed into scan records for re-checking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSpec {
    pub family: Family,
    pub dim: usize,
    pub params: Vec<Rat>,
    pub h_strategy: HStrategy,
    pub h_dim: usize,
}

impl CandidateSpec {
    pub fn to_json(&self) -> Value {
        json!({
            "family": self.family.as_str(),
            "dim": self.dim,
            "params": report::vec_json(&self.params),
            "h_strategy": self.h_strategy.as_str(),
            "h_dim": self.h_dim,
        })
    }

    pub fn from_json(v: &Value) -> Option<CandidateSpec> {
        let family = Family::parse(v.get("family")?.as_str()?)?;
        let dim = v.get("dim")?.as_u64()? as usize;
        let h_strategy = HStrategy::parse(v.get("h_strategy")?.as_str()?)?;
        let h_dim = v.get("h_dim")?.as_u64()? as usize;
        let params = v
            .get("params")?
            .as_array()?
            .iter()
            .map(|x| x.as_str().and_then(|s| parse_rat(s).ok()))
            .collect::<Option<Vec<_>>>()?;
        Some(CandidateSpec {
            family,
            dim,
            params,
            h_strategy,
            h_dim,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    BadParams(String),
    JacobiFail {
        triple: (usize, usize, usize),
    },
    NonLorentz {
        positive: usize,
        negative: usize,
        null: usize,
    },
    NonNilpotent,
    BuildFail(String),
}

impl Rejection {
    fn describe(&self) -> String {
        match self {
            Rejection::BadParams(s) => format!("bad params: {s}"),
            Rejection::JacobiFail { triple } => {
                format!("Jacobi identity fails on triple {:?}", triple)
            }
            Rejection::NonLorentz {
                positive,
                negative,
                null,
            } => {
                format!("metric signature ({positive}, {negative}, {null}) is not Lorentz")
            }
            Rejection::NonNilpotent => "algebra is not nilpotent".to_string(),
            Rejection::BuildFail(s) => format!("build failed: {s}"),
        }
    }
}

pub struct Instantiated {
    pub space: ReductiveSpace,
    pub class: usize,
    pub commutator_nondegenerate: bool,
    pub h_dim: usize,
}

// ---------------------------------------------------------------------------
// gram enumeration shared by the simple families

/// Upper-triangle entries (row-major, diagonal included) of the enumerated
/// Lorentz Gram patterns for dimension `d`: one timelike axis, or one
/// hyperbolic pair, over the positive/negative values of the grid.
fn gram_patterns(d: usize, grid: &[Rat]) -> Vec<Vec<Rat>> {
    let neg: Vec<&Rat> = grid.iter().filter(|v| v.is_negative()).collect();
    let pos: Vec<&Rat> = grid.iter().filter(|v| v.is_positive()).collect();
    let mut out = Vec::new();
    // diagonal with a single timelike axis
    for tau in 0..d {
        for a in &neg {
            for b in &pos {
                let mut g = Matrix::identity(d);
                for i in 0..d {
                    g[(i, i)] = if i == tau { (*a).clone() } else { (*b).clone() };
                }
                out.push(upper_triangle(&g));
            }
        }
    }
    // hyperbolic pair (i, j), remaining axes spacelike
    for i in 0..d {
        for j in i + 1..d {
            for t in &pos {
                for b in &pos {
                    let mut g = Matrix::identity(d);
                    for k in 0..d {
                        g[(k, k)] = (*b).clone();
                    }
                    g[(i, i)] = Rat::zero();
                    g[(j, j)] = Rat::zero();
                    g[(i, j)] = (*t).clone();
                    g[(j, i)] = (*t).clone();
                    out.push(upper_triangle(&g));
                }
            }
        }
    }
    out
}

fn upper_triangle(g: &Matrix) -> Vec<Rat> {
    let d = g.rows();
    let mut v = Vec::with_capacity(d * (d + 1) / 2);
    for i in 0..d {
        for j in i..d {
            v.push(g[(i, j)].clone());
        }
    }
    v
}

fn gram_from_upper_triangle(d: usize, entries: &[Rat]) -> Option<Matrix> {
    if entries.len() != d * (d + 1) / 2 {
        return None;
    }
    let mut g = Matrix::zeros(d, d);
    let mut it = entries.iter();
    for i in 0..d {
        for j in i..d {
            let e = it.next().unwrap().clone();
            g[(i, j)] = e.clone();
            g[(j, i)] = e;
        }
    }
    Some(g)
}

// ---------------------------------------------------------------------------
// candidate generation

/// Deterministic enumeration (lexicographic over grid indices) of candidate
/// specs for a family over a dimension range. The default grid is the small
/// rationals `{-2, -1, 0, 1, 2}`.
pub fn generate_candidates(
    family: Family,
    dims: std::ops::RangeInclusive<usize>,
    grid: &[Rat],
    h_strategy: HStrategy,
) -> Vec<CandidateSpec> {
    let mut specs = Vec::new();
    match family {
        Family::Filiform => {
            for d in dims {
                if d < 3 {
                    continue;
                }
                for entries in gram_patterns(d, grid) {
                    specs.push(CandidateSpec {
                        family,
                        dim: d,
                        params: entries,
                        h_strategy,
                        h_dim: 0,
                    });
                }
            }
        }
        Family::CanonicalPair => {
            let nonzero: Vec<&Rat> = grid.iter().filter(|v| !v.is_zero()).collect();
            for p in 1..=2usize {
                for extra in 0..=1usize {
                    let dim = p + 5 + extra;
                    if !dims.contains(&dim) {
                        continue;
                    }
                    let mut a_choices: Vec<Vec<Rat>> = vec![Vec::new()];
                    for _ in 0..p {
                        let mut next = Vec::new();
                        for prefix in &a_choices {
                            for v in &nonzero {
                                let mut c = prefix.clone();
                                c.push((*v).clone());
                                next.push(c);
                            }
                        }
                        a_choices = next;
                    }
                    for a in &a_choices {
                        for c2 in grid {
                            for c3 in &nonzero {
                                let mut params = vec![rint(p as i64)];
                                params.extend(a.iter().cloned());
                                params.push(c2.clone());
                                params.push((*c3).clone());
                                params.push(rint(extra as i64));
                                specs.push(CandidateSpec {
                                    family,
                                    dim,
                                    params,
                                    h_strategy,
                                    h_dim: 0,
                                });
                            }
                        }
                    }
                }
            }
        }
        Family::FreeNilpotentQuotient => {
            // class 3 (dim 5) and class 4 (dim 8), optionally killing one
            // central top-grade direction with grid coefficients
            for class in [3usize, 4] {
                let (full_dim, top) = if class == 3 { (5, 2) } else { (8, 3) };
                let mut kill_choices: Vec<Vec<Rat>> = vec![Vec::new()]; // no quotient
                                                                        // quotient by (1, q, ...) with q from the grid
                let mut combos: Vec<Vec<Rat>> = vec![vec![Rat::one()]];
                for _ in 1..top {
                    let mut next = Vec::new();
                    for prefix in &combos {
                        for v in grid {
                            let mut c = prefix.clone();
                            c.push(v.clone());
                            next.push(c);
                        }
                    }
                    combos = next;
                }
                kill_choices.extend(combos);
                for kill in &kill_choices {
                    let k = usize::from(!kill.is_empty());
                    let dim = full_dim - k;
                    if !dims.contains(&dim) {
                        continue;
                    }
                    for entries in gram_patterns(dim, grid) {
                        let mut params = vec![rint(class as i64), rint(k as i64)];
                        params.extend(kill.iter().cloned());
                        params.extend(entries);
                        specs.push(CandidateSpec {
                            family,
                            dim,
                            params,
                            h_strategy,
                            h_dim: 0,
                        });
                    }
                }
            }
        }
    }
    specs
}

// ---------------------------------------------------------------------------
// instantiation

/// Free 2-generator nilpotent algebra of class 3 (dim 5) or 4 (dim 8).
fn free_nilpotent_2(class: usize) -> LieAlgebra {
    match class {
        3 => {
            let mut l = LieAlgebra::new(5);
            l.set_simple_bracket(0, 1, 2, Rat::one());
            l.set_simple_bracket(0, 2, 3, Rat::one());
            l.set_simple_bracket(1, 2, 4, Rat::one());
            l
        }
        4 => {
            let mut l = LieAlgebra::new(8);
            l.set_simple_bracket(0, 1, 2, Rat::one());
            l.set_simple_bracket(0, 2, 3, Rat::one());
            l.set_simple_bracket(1, 2, 4, Rat::one());
            l.set_simple_bracket(0, 3, 5, Rat::one());
            l.set_simple_bracket(1, 3, 6, Rat::one());
            l.set_simple_bracket(0, 4, 6, Rat::one());
            l.set_simple_bracket(1, 4, 7, Rat::one());
            l
        }
        _ => panic!("unsupported free nilpotent class"),
    }
}

/// Quotient of `l` by the central line spanned by `w`. The surviving basis
/// is the original one with the pivot coordinate of `w` eliminated.
fn central_quotient(l: &LieAlgebra, w: &[Rat]) -> Option<LieAlgebra> {
    let n = l.dim();
    // w must be central
    for i in 0..n {
        if !crate::linalg::is_zero_vec(&l.bracket(&unit_vec(n, i), w)) {
            return None;
        }
    }
    let pivot = w.iter().position(|c| !c.is_zero())?;
    let keep: Vec<usize> = (0..n).filter(|&i| i != pivot).collect();
    // projection: e_pivot ↦ -(1/w_pivot)·Σ_{i≠pivot} w_i e_i
    let project = |v: &[Rat]| -> Vec<Rat> {
        let mut out: Vec<Rat> = keep.iter().map(|&i| v[i].clone()).collect();
        if !v[pivot].is_zero() {
            let f = &v[pivot] / &w[pivot];
            for (slot, &i) in keep.iter().enumerate() {
                let adj = &out[slot] - &f * &w[i];
                out[slot] = adj;
            }
        }
        out
    };
    let mut q = LieAlgebra::new(n - 1);
    for (ai, &i) in keep.iter().enumerate() {
        for (aj, &j) in keep.iter().enumerate().skip(ai + 1) {
            let br = project(&l.bracket_basis(i, j));
            let coeffs: Vec<(usize, Rat)> = br
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            q.set_bracket(ai, aj, coeffs).ok()?;
        }
    }
    Some(q)
}

/// The space of metric-skew derivations of `l`: matrices `D` with
/// `D[x,y] = [Dx,y] + [x,Dy]` and `Dᵀ·G + G·D = 0`, as a kernel basis.
pub fn skew_derivations(l: &LieAlgebra, gram: &Matrix) -> Vec<Matrix> {
    let n = l.dim();
    if n == 0 {
        return Vec::new();
    }
    // unknowns: D[(r, c)] flattened row-major
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    // derivation constraints per basis pair (i < j), one row per output
    // coordinate k
    for i in 0..n {
        for j in i + 1..n {
            let bij = l.bracket_basis(i, j);
            for k in 0..n {
                let mut row = zero_vec(n * n);
                // D [e_i, e_j] term: Σ_m bij_m D[(k, m)]
                for (m, c) in bij.iter().enumerate() {
                    if !c.is_zero() {
                        row[k * n + m] += c;
                    }
                }
                // -[D e_i, e_j]: D e_i = Σ_r D[(r,i)] e_r, bracket with e_j
                for r in 0..n {
                    let brj = l.bracket_basis(r, j);
                    if !brj[k].is_zero() {
                        row[r * n + i] -= &brj[k];
                    }
                    let bir = l.bracket_basis(i, r);
                    if !bir[k].is_zero() {
                        row[r * n + j] -= &bir[k];
                    }
                }
                rows.push(row);
            }
        }
    }
    // skew constraints: (DᵀG + GD)[(i, j)] = Σ_r D[(r,i)] G[(r,j)] + G[(i,r)] D[(r,j)]
    for i in 0..n {
        for j in i..n {
            let mut row = zero_vec(n * n);
            for r in 0..n {
                row[r * n + i] += &gram[(r, j)];
                row[r * n + j] += &gram[(i, r)];
            }
            rows.push(row);
        }
    }
    let sys = Matrix::from_rows(n * n, rows);
    kernel_basis(&sys)
        .into_iter()
        .map(|flat| {
            let mut d = Matrix::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    d[(r, c)] = flat[r * n + c].clone();
                }
            }
            d
        })
        .collect()
}

/// Semidirect product of a nilpotent algebra with its metric-skew
/// derivations adjoined as the isotropy, returned with the matching bases.
fn adjoin_derivations(
    l: &LieAlgebra,
    gram: &Matrix,
) -> Result<(LieAlgebra, Vec<Vec<Rat>>, Vec<Vec<Rat>>), Rejection> {
    let n = l.dim();
    let ders = skew_derivations(l, gram);
    let r = ders.len();
    let total = n + r;
    let mut g = LieAlgebra::new(total);
    for ((i, j), coeffs) in l.bracket_entries() {
        g.set_bracket(*i, *j, coeffs.clone())
            .map_err(|e| Rejection::BuildFail(e.to_string()))?;
    }
    // [D_a, e_j] = D_a e_j
    for (a, d) in ders.iter().enumerate() {
        for j in 0..n {
            let col = d.col(j);
            let coeffs: Vec<(usize, Rat)> = col
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            g.set_bracket(n + a, j, coeffs)
                .map_err(|e| Rejection::BuildFail(e.to_string()))?;
        }
    }
    // [D_a, D_b] expressed in the derivation basis
    if r > 0 {
        let mut basis_cols = Matrix::zeros(n * n, r);
        for (c, d) in ders.iter().enumerate() {
            for (i, v) in d.flatten().into_iter().enumerate() {
                basis_cols[(i, c)] = v;
            }
        }
        for a in 0..r {
            for b in a + 1..r {
                let comm = ders[a].mul(&ders[b]).sub(&ders[b].mul(&ders[a]));
                let sol = solve_linear(&basis_cols, &comm.flatten())
                    .expect("shape")
                    .ok_or_else(|| {
                        Rejection::BuildFail(
                            "derivation commutator left the skew-derivation space".into(),
                        )
                    })?;
                let coeffs: Vec<(usize, Rat)> = sol
                    .particular
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (n + k, c))
                    .collect();
                g.set_bracket(n + a, n + b, coeffs)
                    .map_err(|e| Rejection::BuildFail(e.to_string()))?;
            }
        }
    }
    let m_basis = (0..n).map(|i| unit_vec(total, i)).collect();
    let h_basis = (0..r).map(|i| unit_vec(total, n + i)).collect();
    Ok((g, h_basis, m_basis))
}

/// Builds the reductive space a spec describes, or explains why it cannot.
pub fn instantiate(spec: &CandidateSpec) -> Result<Instantiated, Rejection> {
    let (algebra, gram) = match spec.family {
        Family::Filiform => {
            let d = spec.dim;
            if d < 3 {
                return Err(Rejection::BadParams("filiform needs dim >= 3".into()));
            }
            let gram = gram_from_upper_triangle(d, &spec.params)
                .ok_or_else(|| Rejection::BadParams("gram entry count".into()))?;
            (filiform(d), gram)
        }
        Family::CanonicalPair => {
            let p = spec
                .params
                .first()
                .and_then(|r| {
                    if r.denom().is_one() {
                        Some(r.numer().clone())
                    } else {
                        None
                    }
                })
                .and_then(|n| usize::try_from(n).ok())
                .ok_or_else(|| Rejection::BadParams("leading parameter must be p".into()))?;
            if spec.params.len() != p + 4 {
                return Err(Rejection::BadParams("parameter count".into()));
            }
            let a = spec.params[1..=p].to_vec();
            let c2 = spec.params[p + 1].clone();
            let c3 = spec.params[p + 2].clone();
            let extra = usize::try_from(spec.params[p + 3].numer().clone())
                .map_err(|_| Rejection::BadParams("extra generator count".into()))?;
            if spec.dim != p + 5 + extra {
                return Err(Rejection::BadParams("dim does not match parameters".into()));
            }
            let space = crate::structure::pinned_family_space(p, &a, &c2, &c3, extra)
                .map_err(|e| Rejection::BuildFail(e.to_string()))?;
            // the pinned family builds its own metric; route directly
            return finish_instantiation(
                spec,
                space.algebra().clone(),
                space.metric().gram().clone(),
            );
        }
        Family::FreeNilpotentQuotient => {
            let class = usize::try_from(spec.params[0].numer().clone())
                .map_err(|_| Rejection::BadParams("class".into()))?;
            let k = usize::try_from(spec.params[1].numer().clone())
                .map_err(|_| Rejection::BadParams("quotient count".into()))?;
            let (full_dim, top) = match class {
                3 => (5usize, 2usize),
                4 => (8, 3),
                _ => return Err(Rejection::BadParams("class must be 3 or 4".into())),
            };
            let mut l = free_nilpotent_2(class);
            let mut offset = 2;
            if k == 1 {
                let coeffs = &spec.params[offset..offset + top];
                offset += top;
                let mut w = zero_vec(full_dim);
                for (t, c) in coeffs.iter().enumerate() {
                    w[full_dim - top + t] = c.clone();
                }
                l = central_quotient(&l, &w)
                    .ok_or_else(|| Rejection::BadParams("quotient direction not central".into()))?;
            } else if k != 0 {
                return Err(Rejection::BadParams("quotient count must be 0 or 1".into()));
            }
            if l.dim() != spec.dim {
                return Err(Rejection::BadParams("dim does not match parameters".into()));
            }
            let gram = gram_from_upper_triangle(spec.dim, &spec.params[offset..])
                .ok_or_else(|| Rejection::BadParams("gram entry count".into()))?;
            (l, gram)
        }
    };
    finish_instantiation(spec, algebra, gram)
}

fn finish_instantiation(
    spec: &CandidateSpec,
    algebra: LieAlgebra,
    gram: Matrix,
) -> Result<Instantiated, Rejection> {
    if let Err(fail) = algebra.validate() {
        return Err(Rejection::JacobiFail {
            triple: fail.triple,
        });
    }
    let series = algebra.lower_central_series();
    let class = match series.class {
        NilpotencyClass::Nilpotent(c) => c,
        NilpotencyClass::NonNilpotent => return Err(Rejection::NonNilpotent),
    };
    let form = BilinearForm::new(gram.clone()).map_err(|e| Rejection::BadParams(e.to_string()))?;
    if !form.is_lorentz_with(SignConvention::MostlyPlus)
        && !form.is_lorentz_with(SignConvention::MostlyMinus)
    {
        let sig = form.signature();
        return Err(Rejection::NonLorentz {
            positive: sig.positive,
            negative: sig.negative,
            null: sig.null,
        });
    }
    let commutator = algebra.derived_subalgebra();
    let commutator_nondegenerate = if commutator.is_zero() {
        true
    } else {
        !form
            .restrict(&commutator)
            .expect("same coords")
            .is_degenerate()
    };
    let (g, h_basis, m_basis) = match spec.h_strategy {
        HStrategy::None => {
            let n = algebra.dim();
            (
                algebra,
                Vec::new(),
                (0..n).map(|i| unit_vec(n, i)).collect::<Vec<_>>(),
            )
        }
        HStrategy::SkewDerivations => adjoin_derivations(&algebra, &gram)?,
    };
    let h_dim = h_basis.len();
    let space = ReductiveSpace::build(g, h_basis, m_basis, gram)
        .map_err(|e| Rejection::BuildFail(e.to_string()))?;
    Ok(Instantiated {
        space,
        class,
        commutator_nondegenerate,
        h_dim,
    })
}

// ---------------------------------------------------------------------------
// scanning

#[derive(Debug, Clone)]
pub struct GoParams {
    pub samples: usize,
    pub seed: u64,
    pub grid_depth: Option<u32>,
    /// Run the geodesic certifier on every class, not only class 4;
    /// feeds the theorem cross-check.
    pub all_classes: bool,
}

impl Default for GoParams {
    fn default() -> Self {
        GoParams {
            samples: 64,
            seed: 0,
            grid_depth: None,
            all_classes: false,
        }
    }
}

/// Counter-based per-spec seed: independent of scheduling and job count.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScanOutcome {
    Rejected {
        reason: String,
    },
    Evaluated {
        class: usize,
        h_dim: usize,
        commutator_nondegenerate: bool,
        go: Option<GoVerdict>,
        go_skipped: Option<String>,
        hit: bool,
        theorem_contradiction: bool,
    },
    Failed {
        error: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRecord {
    pub index: usize,
    pub spec: CandidateSpec,
    pub outcome: ScanOutcome,
}

impl ScanRecord {
    pub fn to_json(&self) -> Value {
        let outcome = match &self.outcome {
            ScanOutcome::Rejected { reason } => json!({
                "kind": "rejected",
                "reason": reason,
            }),
            ScanOutcome::Evaluated {
                class,
                h_dim,
                commutator_nondegenerate,
                go,
                go_skipped,
                hit,
                theorem_contradiction,
            } => json!({
                "kind": "evaluated",
                "class": class,
                "h_dim": h_dim,
                "commutator_nondegenerate": commutator_nondegenerate,
                "go": go.as_ref().map(report::go_verdict_json),
                "go_skipped": go_skipped,
                "hit": hit,
                "theorem_contradiction": theorem_contradiction,
            }),
            ScanOutcome::Failed { error } => json!({
                "kind": "failed",
                "error": error,
            }),
        };
        json!({
            "index": self.index,
            "spec": self.spec.to_json(),
            "outcome": outcome,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScanSummary {
    pub total: usize,
    pub rejected: usize,
    pub evaluated: usize,
    pub failed: usize,
    pub by_class: BTreeMap<usize, usize>,
    pub verdicts: BTreeMap<String, usize>,
    pub hits: Vec<usize>,
    pub contradictions: Vec<usize>,
}

impl ScanSummary {
    fn fold(&mut self, rec_index: usize, outcome_json: &Value) {
        self.total += 1;
        match outcome_json.get("kind").and_then(Value::as_str) {
            Some("rejected") => self.rejected += 1,
            Some("failed") => self.failed += 1,
            Some("evaluated") => {
                self.evaluated += 1;
                if let Some(c) = outcome_json.get("class").and_then(Value::as_u64) {
                    *self.by_class.entry(c as usize).or_insert(0) += 1;
                }
                let verdict = outcome_json
                    .get("go")
                    .and_then(|g| g.get("status"))
                    .and_then(|s| s.get("kind"))
                    .and_then(Value::as_str)
                    .unwrap_or("skipped");
                *self.verdicts.entry(verdict.to_string()).or_insert(0) += 1;
                if outcome_json.get("hit") == Some(&Value::Bool(true)) {
                    self.hits.push(rec_index);
                }
                if outcome_json.get("theorem_contradiction") == Some(&Value::Bool(true)) {
                    self.contradictions.push(rec_index);
                }
            }
            _ => {}
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "total": self.total,
            "rejected": self.rejected,
            "evaluated": self.evaluated,
            "failed": self.failed,
            "by_class": self.by_class.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
            "verdicts": self.verdicts.iter().map(|(k, v)| (k.clone(), json!(v))).collect::<serde_json::Map<_, _>>(),
            "hits": self.hits,
            "theorem_contradictions": self.contradictions,
        })
    }
}

fn process_spec(index: usize, spec: &CandidateSpec, params: &GoParams) -> ScanRecord {
    let result = catch_unwind(AssertUnwindSafe(|| match instantiate(spec) {
        Err(rej) => {
            let mut spec = spec.clone();
            spec.h_dim = 0;
            ScanRecord {
                index,
                spec,
                outcome: ScanOutcome::Rejected {
                    reason: rej.describe(),
                },
            }
        }
        Ok(inst) => {
            let mut spec = spec.clone();
            spec.h_dim = inst.h_dim;
            let lorentz = inst.space.metric().is_lorentz()
                || inst
                    .space
                    .metric()
                    .is_lorentz_with(SignConvention::MostlyMinus);
            let gate_open =
                params.all_classes || (inst.class == 4 && lorentz && inst.commutator_nondegenerate);
            let (go, go_skipped) = if gate_open {
                let seed = derive_seed(params.seed, index as u64);
                (
                    Some(go_certify(
                        &inst.space,
                        params.samples,
                        seed,
                        params.grid_depth,
                    )),
                    None,
                )
            } else {
                (
                    None,
                    Some(format!(
                        "class {} gated out (run with all classes to include it)",
                        inst.class
                    )),
                )
            };
            let sampled_pass = matches!(
                go.as_ref().map(|g| &g.status),
                Some(GoStatus::SampledPass { .. })
            );
            let hit = inst.class == 4 && sampled_pass;
            let theorem_contradiction = inst.class == 3
                && inst.commutator_nondegenerate
                && lorentz
                && sampled_pass
                && params.samples >= 1000;
            ScanRecord {
                index,
                spec,
                outcome: ScanOutcome::Evaluated {
                    class: inst.class,
                    h_dim: inst.h_dim,
                    commutator_nondegenerate: inst.commutator_nondegenerate,
                    go,
                    go_skipped,
                    hit,
                    theorem_contradiction,
                },
            }
        }
    }));
    result.unwrap_or_else(|panic| {
        let msg = panic
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| panic.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "worker panicked".to_string());
        ScanRecord {
            index,
            spec: spec.clone(),
            outcome: ScanOutcome::Failed { error: msg },
        }
    })
}

/// Runs the scan over `specs`, streaming one JSON record per line to `out`
/// in spec-index order regardless of `jobs`, and returns the summary.
/// With `resume`, records already present in `existing` (indices at or
/// below the checkpoint) are folded into the summary and skipped.
pub fn scan<W: Write>(
    specs: &[CandidateSpec],
    params: &GoParams,
    jobs: usize,
    out: &mut W,
    checkpoint: Option<&Path>,
    resume: bool,
    existing: Option<&str>,
) -> std::io::Result<ScanSummary> {
    let mut summary = ScanSummary::default();
    let mut start_index = 0usize;
    if resume {
        if let Some(cp) = checkpoint {
            if let Ok(text) = std::fs::read_to_string(cp) {
                if let Ok(v) = serde_json::from_str::<Value>(&text) {
                    if let Some(last) = v.get("last_completed_index").and_then(Value::as_u64) {
                        start_index = last as usize + 1;
                    }
                }
            }
        }
        if let Some(prev) = existing {
            for line in prev.lines().filter(|l| !l.trim().is_empty()) {
                if let Ok(v) = serde_json::from_str::<Value>(line) {
                    if let (Some(idx), Some(outcome)) =
                        (v.get("index").and_then(Value::as_u64), v.get("outcome"))
                    {
                        summary.fold(idx as usize, outcome);
                    }
                }
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    let chunk_size = (jobs.max(1) * 8).max(16);
    let work: Vec<(usize, &CandidateSpec)> = specs.iter().enumerate().skip(start_index).collect();
    for chunk in work.chunks(chunk_size) {
        let records: Vec<ScanRecord> = pool.install(|| {
            use rayon::prelude::*;
            chunk
                .par_iter()
                .map(|(i, s)| process_spec(*i, s, params))
                .collect()
        });
        for rec in &records {
            let v = rec.to_json();
            summary.fold(rec.index, v.get("outcome").unwrap());
            writeln!(out, "{}", serde_json::to_string(&v).unwrap())?;
        }
        if let Some(cp) = checkpoint {
            if let Some(last) = records.last() {
                let text =
                    serde_json::to_string(&json!({ "last_completed_index": last.index })).unwrap();
                std::fs::write(cp, text)?;
            }
        }
    }
    Ok(summary)
}

/// Convenience for tests: scan into a string buffer.
pub fn scan_to_string(
    specs: &[CandidateSpec],
    params: &GoParams,
    jobs: usize,
) -> (String, ScanSummary) {
    let mut buf = Vec::new();
    let summary = scan(specs, params, jobs, &mut buf, None, false, None).expect("in-memory io");
    (String::from_utf8(buf).expect("utf8"), summary)
}

/// Reads scan records back from a JSONL reader (used by `--resume` and by
/// re-check tooling).
pub fn read_records<R: BufRead>(reader: R) -> Vec<Value> {
    reader
        .lines()
        .map_while(Result::ok)
        .filter(|l| !l.trim().is_empty())
        .filter_map(|l| serde_json::from_str(&l).ok())
        .collect()
}

pub fn default_grid() -> Vec<Rat> {
    [-2i64, -1, 0, 1, 2].iter().map(|&v| rint(v)).collect()
}

pub fn parse_grid(s: &str) -> Result<Vec<Rat>, String> {
    s.split(',')
        .map(|t| parse_rat(t.trim()).map_err(|e| format!("grid value `{}`: {e}", t.trim())))
        .collect()
}

pub fn grid_to_string(grid: &[Rat]) -> String {
    grid.iter().map(format_rat).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filiform_generation_is_deterministic() {
        let grid = default_grid();
        let a = generate_candidates(Family::Filiform, 4..=5, &grid, HStrategy::SkewDerivations);
        let b = generate_candidates(Family::Filiform, 4..=5, &grid, HStrategy::SkewDerivations);
        assert_eq!(a, b);
        assert_eq!(a.len(), 100); // 40 for dim 4, 60 for dim 5
    }

    #[test]
    fn filiform_dim4_single_grid_instantiates() {
        let grid: Vec<Rat> = [-1i64, 1].iter().map(|&v| rint(v)).collect();
        let specs = generate_candidates(Family::Filiform, 4..=4, &grid, HStrategy::None);
        assert!(!specs.is_empty());
        let inst = instantiate(&specs[0]).unwrap();
        assert_eq!(inst.class, 3);
        assert_eq!(inst.h_dim, 0);
    }

    #[test]
    fn canonical_pair_instantiates_to_class_4() {
        let grid = default_grid();
        let specs = generate_candidates(Family::CanonicalPair, 6..=6, &grid, HStrategy::None);
        assert!(!specs.is_empty());
        let inst = instantiate(&specs[0]).unwrap();
        assert_eq!(inst.class, 4);
        assert!(inst.commutator_nondegenerate);
    }

    #[test]
    fn free_nilpotent_class3_is_class3() {
        let l = free_nilpotent_2(3);
        assert_eq!(l.validate(), Ok(()));
        assert_eq!(
            l.lower_central_series().class,
            NilpotencyClass::Nilpotent(3)
        );
        let l4 = free_nilpotent_2(4);
        assert_eq!(l4.validate(), Ok(()));
        assert_eq!(
            l4.lower_central_series().class,
            NilpotencyClass::Nilpotent(4)
        );
    }

    #[test]
    fn central_quotient_drops_dimension() {
        let l = free_nilpotent_2(3);
        let mut w = zero_vec(5);
        w[3] = Rat::one();
        w[4] = rint(-1);
        let q = central_quotient(&l, &w).unwrap();
        assert_eq!(q.dim(), 4);
        assert_eq!(q.validate(), Ok(()));
        // non-central direction is refused
        let mut bad = zero_vec(5);
        bad[0] = Rat::one();
        assert!(central_quotient(&l, &bad).is_none());
    }

    #[test]
    fn skew_derivations_of_heisenberg() {
        let l = crate::lie::heisenberg3();
        let ders = skew_derivations(&l, &Matrix::identity(3));
        // the rotation in the (v1, v2) plane survives
        assert!(!ders.is_empty());
        for d in &ders {
            // derivation identity on the only bracket
            let lhs = d.mul_vec(&l.bracket_basis(0, 1));
            let mut rhs = l.bracket(&d.col(0), &unit_vec(3, 1));
            for (a, b) in rhs.iter_mut().zip(l.bracket(&unit_vec(3, 0), &d.col(1))) {
                *a += b;
            }
            assert_eq!(lhs, rhs);
            // skewness
            assert!(d.transpose().add(d).is_zero());
        }
    }

    #[test]
    fn spec_json_roundtrip() {
        let grid = default_grid();
        let specs = generate_candidates(Family::Filiform, 4..=4, &grid, HStrategy::SkewDerivations);
        let v = specs[7].to_json();
        assert_eq!(CandidateSpec::from_json(&v).unwrap(), specs[7]);
    }

    #[test]
    fn scan_deterministic_across_jobs() {
        let grid: Vec<Rat> = [-1i64, 1].iter().map(|&v| rint(v)).collect();
        let specs = generate_candidates(Family::Filiform, 4..=4, &grid, HStrategy::SkewDerivations);
        let params = GoParams {
            samples: 8,
            seed: 3,
            grid_depth: None,
            all_classes: false,
        };
        let (out1, sum1) = scan_to_string(&specs, &params, 1);
        let (out8, sum8) = scan_to_string(&specs, &params, 8);
        assert_eq!(out1, out8);
        assert_eq!(sum1, sum8);
    }

    #[test]
    fn derive_seed_spreads() {
        let a = derive_seed(7, 0);
        let b = derive_seed(7, 1);
        let c = derive_seed(8, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
    }
}
