//! Canonical forms of skew operators of a Lorentz form.
//!
//! An operator `B` with `Bᵀ·G + G·B = 0` for a Lorentz Gram `G` is either
//! semisimple (detected over ℚ by a squarefree minimal polynomial, with a
//! single real eigenvalue pair `±μ`) or not; a nonzero nilpotent such `B`
//! has nilindex exactly 3 and rank 2, and admits a basis in which `B` is a
//! single 3-step Jordan block padded by zeros while the Gram becomes a null
//! triple block plus a Euclidean complement. `nilpotent_witness_basis`
//! constructs that change of basis exactly and verifies both identities
//! before returning.
//!
//! Exactness boundary: unit normalization can require square roots that do
//! not exist in ℚ. When `⟨Bv, Bv⟩` is a rational square the triple is
//! normalized exactly; otherwise the scaled Gram is returned together with a
//! `NonunitScale` flag, and likewise for complement directions that resist
//! exact unit normalization. The operator block is unaffected either way.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::bilinear::BilinearForm;
use crate::linalg::{
    invert, kernel_basis, minimal_polynomial, nilpotency_index, rank, rational_sqrt, rint,
    scale_vec, zero_vec, Matrix, Rat,
};

#[derive(Debug, Error, PartialEq)]
pub enum CanonError {
    #[error("gram matrix is degenerate")]
    DegenerateGram,
    #[error("gram matrix is not Lorentz")]
    NotLorentz,
    #[error("operator is not skew with respect to the form")]
    NotSkew,
    #[error("operator and form dimensions differ")]
    DimensionMismatch,
    #[error("operator is zero; no witness basis to construct")]
    ZeroOperator,
    #[error("structural inconsistency: {0}")]
    Structural(String),
    #[error("semisimple with irrational eigenvalue pair; minimal polynomial retained")]
    UndecidedExact {
        min_poly: Vec<Rat>,
        mu_estimate: f64,
    },
}

/// Coarse type of a skew operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OperatorKind {
    Zero,
    /// Diagonalizable over ℂ; `mu ≤ 0` is the real eigenvalue pair when it
    /// exists (0 when all eigenvalues are purely imaginary).
    Semisimple {
        mu: Rat,
        c_block_dim: usize,
    },
    NonSemisimple {
        c_block_dim: usize,
    },
}

/// Witnessed canonical form: `P⁻¹·B·P = canonical_matrix` and
/// `Pᵀ·G·P = canonical_gram`, exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalForm {
    pub kind: OperatorKind,
    pub witness: Matrix,
    pub canonical_matrix: Matrix,
    pub canonical_gram: Matrix,
    /// Set when the null-triple block carries scale `q` instead of 1
    /// because `√q ∉ ℚ`.
    pub triple_scale: Option<Rat>,
    /// Set when some complement directions carry non-unit diagonal entries.
    pub complement_diag: Option<Vec<Rat>>,
}

/// Membership in the skew algebra of `G`: `Bᵀ·G + G·B = 0` exactly.
/// Degenerate `G` is an input error.
pub fn check_skew(b: &Matrix, g: &BilinearForm) -> Result<bool, CanonError> {
    if b.rows() != b.cols() || b.rows() != g.dim() {
        return Err(CanonError::DimensionMismatch);
    }
    if g.is_degenerate() {
        return Err(CanonError::DegenerateGram);
    }
    Ok(b.transpose().mul(g.gram()).add(&g.gram().mul(b)).is_zero())
}

/// The 3-step Jordan block padded by a `p`-dimensional zero block.
pub fn canonical_nilpotent_matrix(p: usize) -> Matrix {
    let mut m = Matrix::zeros(p + 3, p + 3);
    m[(0, 1)] = Rat::one();
    m[(1, 2)] = Rat::one();
    m
}

/// The matching Gram: null pair `⟨e0, e2⟩ = -1` around a unit `e1`, plus a
/// Euclidean identity block.
pub fn canonical_gram(p: usize) -> Matrix {
    let mut g = Matrix::identity(p + 3);
    g[(0, 0)] = Rat::zero();
    g[(2, 2)] = Rat::zero();
    g[(0, 2)] = rint(-1);
    g[(2, 0)] = rint(-1);
    g
}

// ---------------------------------------------------------------------------
// polynomial helpers over ℚ (ascending coefficients)

fn poly_trim(p: &mut Vec<Rat>) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_deg(p: &[Rat]) -> usize {
    p.len().saturating_sub(1)
}

fn poly_derivative(p: &[Rat]) -> Vec<Rat> {
    if p.len() <= 1 {
        return vec![Rat::zero()];
    }
    let mut d: Vec<Rat> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * rint(i as i64))
        .collect();
    poly_trim(&mut d);
    d
}

fn poly_is_zero(p: &[Rat]) -> bool {
    p.iter().all(|c| c.is_zero())
}

/// Remainder of `a / b` (b nonzero).
fn poly_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = poly_deg(b);
    let lb = b[db].clone();
    while !poly_is_zero(&r) && poly_deg(&r) >= db {
        let dr = poly_deg(&r);
        let f = &r[dr] / &lb;
        for i in 0..=db {
            let idx = dr - db + i;
            let v = &r[idx] - &f * &b[i];
            r[idx] = v;
        }
        poly_trim(&mut r);
        if dr == 0 {
            break;
        }
    }
    r
}

fn poly_monic(p: &[Rat]) -> Vec<Rat> {
    let d = poly_deg(p);
    let lc = p[d].clone();
    if lc.is_zero() || lc.is_one() {
        return p.to_vec();
    }
    p.iter().map(|c| c / &lc).collect()
}

fn poly_gcd_monic(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !poly_is_zero(&y) {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
        poly_trim(&mut y);
    }
    poly_monic(&x)
}

pub(crate) fn poly_is_squarefree(p: &[Rat]) -> bool {
    let g = poly_gcd_monic(p, &poly_derivative(p));
    poly_deg(&g) == 0
}

fn poly_eval(p: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Exact division by `t` (valid when the constant coefficient vanishes).
fn poly_div_t(p: &[Rat]) -> Vec<Rat> {
    debug_assert!(p[0].is_zero());
    let mut q: Vec<Rat> = p[1..].to_vec();
    if q.is_empty() {
        q.push(Rat::zero());
    }
    q
}

fn sign_of(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn sign_variations(signs: &[i32]) -> usize {
    let mut v = 0;
    let mut last = 0;
    for &s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

/// Number of real roots of squarefree `p` in the open interval `(0, ∞)`,
/// by a Sturm chain evaluated at `0` and at `+∞` (leading signs).
fn positive_root_count(p: &[Rat]) -> usize {
    let mut chain: Vec<Vec<Rat>> = vec![p.to_vec(), poly_derivative(p)];
    loop {
        let n = chain.len();
        let r = poly_rem(&chain[n - 2], &chain[n - 1]);
        if poly_is_zero(&r) {
            break;
        }
        chain.push(r.iter().map(|c| -c).collect());
    }
    let at_zero: Vec<i32> = chain
        .iter()
        .map(|q| sign_of(&poly_eval(q, &Rat::zero())))
        .collect();
    let at_inf: Vec<i32> = chain.iter().map(|q| sign_of(&q[poly_deg(q)])).collect();
    sign_variations(&at_zero).saturating_sub(sign_variations(&at_inf))
}

/// Cauchy bound on the positive roots of `p`.
fn root_bound(p: &[Rat]) -> Rat {
    let d = poly_deg(p);
    let lc = p[d].clone();
    let mut m = Rat::zero();
    for c in &p[..d] {
        let a = (c / &lc).abs();
        if a > m {
            m = a;
        }
    }
    m + rint(1)
}

/// Bisects the sign change of `p` on `(0, bound]` down to `iters` halvings.
/// Assumes exactly one root in the interval.
fn bisect_positive_root(p: &[Rat], iters: usize) -> (Rat, Rat) {
    let mut lo = Rat::zero();
    let mut hi = root_bound(p);
    let s_lo = sign_of(&poly_eval(p, &lo));
    for _ in 0..iters {
        let mid = (&lo + &hi) / rint(2);
        let s_mid = sign_of(&poly_eval(p, &mid));
        if s_mid == 0 {
            return (mid.clone(), mid);
        }
        if s_mid == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Tries to recognize the unique positive root of squarefree `p` as a
/// rational, using the fact that its denominator divides the cleared
/// leading coefficient.
fn rational_positive_root(p: &[Rat]) -> Option<Rat> {
    use num_bigint::BigInt;
    // clear denominators
    let mut lcm = BigInt::one();
    for c in p {
        lcm = num_integer::lcm(lcm, c.denom().clone());
    }
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| (c * Rat::from_integer(lcm.clone())).to_integer())
        .collect();
    let lead = ints[poly_deg(p)].magnitude().clone();
    let denominators = bounded_divisors(&BigInt::from_biguint(num_bigint::Sign::Plus, lead));
    let (lo, hi) = bisect_positive_root(p, 128);
    let approx = (&lo + &hi) / rint(2);
    for b in denominators {
        let scaled = &approx * Rat::from_integer(b.clone());
        let rounded = scaled.round().to_integer();
        for delta in [-1i64, 0, 1] {
            let num = &rounded + BigInt::from(delta);
            if num.is_positive() {
                let cand = Rat::new(num, b.clone());
                if poly_eval(p, &cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

/// Divisors of `n` from trial division up to 10^6; an unfactored cofactor is
/// treated as one extra prime, so very large rough parts may be missed
/// (callers fall back to an undecided result in that case).
fn bounded_divisors(n: &num_bigint::BigInt) -> Vec<num_bigint::BigInt> {
    use num_bigint::BigInt;
    let mut m = n.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u64);
    while &d * &d <= m && d <= limit {
        let mut e = 0u32;
        while (&m % &d).is_zero() {
            m /= &d;
            e += 1;
        }
        if e > 0 {
            factors.push((d.clone(), e));
        }
        d += 1u32;
    }
    if m > BigInt::one() {
        factors.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::new();
        for old in &divs {
            let mut pe = BigInt::one();
            for _ in 0..=e {
                next.push(old * &pe);
                pe *= &p;
            }
        }
        next.sort();
        next.dedup();
        divs = next;
    }
    divs.sort();
    divs
}

// ---------------------------------------------------------------------------
// classification

/// Classifies a skew operator of a Lorentz form by its minimal polynomial:
/// squarefree means semisimple. For the semisimple case the real eigenvalue
/// pair `±μ` is extracted exactly when rational (reported sign-normalized
/// `μ ≤ 0`); an irrational pair yields `UndecidedExact` carrying the minimal
/// polynomial and a bisection estimate flagged as non-exact.
pub fn classify(b: &Matrix, g: &BilinearForm) -> Result<OperatorKind, CanonError> {
    if !check_skew(b, g)? {
        return Err(CanonError::NotSkew);
    }
    if !g.is_lorentz() {
        return Err(CanonError::NotLorentz);
    }
    let n = b.rows();
    if b.is_zero() {
        return Ok(OperatorKind::Zero);
    }
    let p = minimal_polynomial(b).expect("square by construction");
    if !poly_is_squarefree(&p) {
        return Ok(OperatorKind::NonSemisimple {
            c_block_dim: n.saturating_sub(3),
        });
    }
    // strip the root at 0, if present, to count nonzero real eigenvalues
    let q = if p[0].is_zero() {
        poly_div_t(&p)
    } else {
        p.clone()
    };
    let positives = if poly_deg(&q) == 0 {
        0
    } else {
        positive_root_count(&q)
    };
    match positives {
        0 => Ok(OperatorKind::Semisimple {
            mu: Rat::zero(),
            c_block_dim: n - 2,
        }),
        1 => match rational_positive_root(&q) {
            Some(r) => Ok(OperatorKind::Semisimple {
                mu: -r,
                c_block_dim: n - 2,
            }),
            None => {
                let (lo, hi) = bisect_positive_root(&q, 64);
                let mid = (&lo + &hi) / rint(2);
                let est = mid.numer().to_string().parse::<f64>().unwrap_or(f64::NAN)
                    / mid.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
                Err(CanonError::UndecidedExact {
                    min_poly: p,
                    mu_estimate: est,
                })
            }
        },
        _ => Err(CanonError::Structural(format!(
            "skew operator with {positives} positive real eigenvalues"
        ))),
    }
}

// ---------------------------------------------------------------------------
// exact unit normalization of positive definite forms

/// Searches for `u` with `uᵀAu = 1`: first among the congruence-diagonal
/// basis vectors (square pivots scale exactly), then over integer
/// coefficient shells of bounded height whose norms happen to be rational
/// squares.
/// Splits a positive rational as `r = k·m²` with `k` of small height: the
/// square part is extracted by trial division (plus a final perfect-square
/// check on the rough cofactor), so `k` represents the square class of `r`
/// with all discoverable square factors removed.
fn squarefree_scale(r: &Rat) -> (Rat, Rat) {
    use num_bigint::BigInt;
    fn split_u128(n: u128) -> (u128, u128) {
        let mut rest = n;
        let mut square_root = 1u128;
        let mut k = 1u128;
        let mut d = 2u128;
        while d * d <= rest && d <= 10_000 {
            let mut e = 0u32;
            while rest % d == 0 {
                rest /= d;
                e += 1;
            }
            for _ in 0..e / 2 {
                square_root *= d;
            }
            if e % 2 == 1 {
                k *= d;
            }
            d += if d == 2 { 1 } else { 2 };
        }
        let s = isqrt_u128(rest);
        if s * s == rest {
            square_root *= s;
        } else {
            k *= rest;
        }
        (k, square_root)
    }
    fn split_int(n: &BigInt) -> (BigInt, BigInt) {
        if let Ok(small) = u128::try_from(n.clone()) {
            let (k, m) = split_u128(small);
            return (BigInt::from(k), BigInt::from(m));
        }
        let mut rest = n.clone();
        let mut square_root = BigInt::one();
        let mut k = BigInt::one();
        let mut d = BigInt::from(2u32);
        let limit = BigInt::from(10_000u32);
        while &d * &d <= rest && d <= limit {
            let mut e = 0u32;
            while (&rest % &d).is_zero() {
                rest /= &d;
                e += 1;
            }
            for _ in 0..e / 2 {
                square_root *= &d;
            }
            if e % 2 == 1 {
                k *= &d;
            }
            d += 1u32;
        }
        // rough cofactor: absorb it if it happens to be a perfect square
        let s = rest.sqrt();
        if &s * &s == rest {
            square_root *= s;
        } else {
            k *= rest;
        }
        (k, square_root)
    }
    let (kn, mn) = split_int(r.numer());
    let (kd, md) = split_int(r.denom());
    // r = (kn/kd)·(mn/md)² = (kn·kd)·(mn/(md·kd))²
    let k = Rat::from_integer(&kn * &kd);
    let m = Rat::new(mn, md * kd);
    (k, m)
}

/// Scales a rational vector to a primitive integer vector (content 1).
fn primitive_integer_vector(v: &[Rat]) -> Vec<Rat> {
    use num_bigint::BigInt;
    let mut lcm = BigInt::one();
    for x in v {
        lcm = num_integer::lcm(lcm, x.denom().clone());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rat::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut gcd = BigInt::zero();
    for i in &ints {
        gcd = num_integer::gcd(gcd, i.clone());
    }
    if gcd.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|i| Rat::from_integer(i / &gcd))
        .collect()
}

fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u128 + 2;
    while x * x > n {
        x = (x + n / x) / 2;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Complete solver for `a·x² + b·y² = r²` with `a`, `b` squarefree positive
/// integers: any solvable instance has a solution inside the Holzer box, so
/// exhausting it is a decision procedure. Returns a nontrivial `(x, y, r)`.
fn binary_square_representation(a: u128, b: u128) -> Option<(u128, u128, u128)> {
    let g = num_integer::gcd(a, b);
    let big_a = a / g;
    let big_b = b / g;
    // a·x² + b·y² = r²  ⟺  A·x² + B·y² = g·z² with r = g·z
    let bx = isqrt_u128(big_b * g) + 1;
    let by = isqrt_u128(big_a * g) + 1;
    let bz = isqrt_u128(big_a * big_b) + 1;
    // enumerate the cheapest pair of variables, solve for the third
    let px = by.saturating_mul(bz);
    let py = bx.saturating_mul(bz);
    let pz = bx.saturating_mul(by);
    let budget = 400_000u128;
    if pz <= px && pz <= py && pz <= budget {
        for x in 0..=bx {
            for y in 0..=by {
                if x == 0 && y == 0 {
                    continue;
                }
                let lhs = big_a * x * x + big_b * y * y;
                if lhs % g == 0 {
                    let z2 = lhs / g;
                    let z = isqrt_u128(z2);
                    if z * z == z2 {
                        return Some((x, y, g * z));
                    }
                }
            }
        }
    } else if px <= py && px <= budget {
        for y in 0..=by {
            for z in 1..=bz {
                let rhs = g * z * z;
                let term = big_b * y * y;
                if rhs < term {
                    break;
                }
                let num = rhs - term;
                if num % big_a == 0 {
                    let x2 = num / big_a;
                    let x = isqrt_u128(x2);
                    if x * x == x2 && (x > 0 || y > 0) {
                        return Some((x, y, g * z));
                    }
                }
            }
        }
    } else if py <= budget {
        for x in 0..=bx {
            for z in 1..=bz {
                let rhs = g * z * z;
                let term = big_a * x * x;
                if rhs < term {
                    break;
                }
                let num = rhs - term;
                if num % big_b == 0 {
                    let y2 = num / big_b;
                    let y = isqrt_u128(y2);
                    if y * y == y2 && (x > 0 || y > 0) {
                        return Some((x, y, g * z));
                    }
                }
            }
        }
    }
    None
}

/// Searches for norm-1 vectors of the reduced diagonal directions. The
/// form is diagonal, so signs never matter and only nonnegative integer
/// coefficient vectors need enumeration; clearing denominators once turns
/// the square test into machine-integer arithmetic. Collects up to `want`
/// distinct solutions.
fn diagonal_unit_search(
    dirs: &[Vec<Rat>],
    keys: &[Rat],
    want: usize,
    complete_pairs: bool,
) -> Vec<Vec<Rat>> {
    use num_bigint::BigInt;
    let p = dirs.len();
    let mut found: Vec<Vec<Rat>> = Vec::new();
    for (i, k) in keys.iter().enumerate() {
        if k.is_one() {
            found.push(dirs[i].clone());
            if found.len() >= want {
                return found;
            }
        }
    }
    if p < 2 {
        return found;
    }
    let mut lcm = BigInt::one();
    for k in keys {
        lcm = num_integer::lcm(lcm, k.denom().clone());
    }
    let d2 = Rat::from_integer(&lcm * &lcm);
    let weights_big: Vec<BigInt> = keys.iter().map(|k| (k * &d2).to_integer()).collect();
    let weights: Option<Vec<u128>> = weights_big
        .iter()
        .map(|w| u128::try_from(w.clone()).ok())
        .collect();
    let Some(weights) = weights else { return found };
    if weights.iter().any(|&w| w > 1 << 80) {
        return found;
    }
    // complete pass over pairs: the Holzer-bounded solver decides each
    // binary subproblem outright (bounded work, so only run when asked)
    if complete_pairs && lcm.is_one() {
        for i in 0..p {
            for j in i + 1..p {
                let (wi, wj) = (weights[i], weights[j]);
                if wi >= (1 << 40) || wj >= (1 << 40) {
                    continue;
                }
                if let Some((x, y, r)) = binary_square_representation(wi, wj) {
                    let mut v = zero_vec(dirs[0].len());
                    if x > 0 {
                        crate::linalg::axpy(&mut v, &rint(x as i64), &dirs[i]);
                    }
                    if y > 0 {
                        crate::linalg::axpy(&mut v, &rint(y as i64), &dirs[j]);
                    }
                    let u = scale_vec(&(Rat::one() / Rat::from_integer(BigInt::from(r))), &v);
                    if !found.contains(&u) {
                        found.push(u);
                        if found.len() >= want {
                            return found;
                        }
                    }
                }
            }
        }
    }
    let height: u64 = match p {
        2 => 320,
        3 => 70,
        4 => 25,
        5 => 13,
        6 => 8,
        7 => 6,
        _ => 4,
    };
    let mut s = vec![0u64; p];
    loop {
        let mut slot = p;
        loop {
            if slot == 0 {
                return found;
            }
            slot -= 1;
            if s[slot] < height {
                s[slot] += 1;
                for t in s.iter_mut().skip(slot + 1) {
                    *t = 0;
                }
                break;
            }
        }
        let mut norm: u128 = 0;
        for (si, wi) in s.iter().zip(&weights) {
            norm += (*si as u128) * (*si as u128) * wi;
        }
        let r = isqrt_u128(norm);
        if r * r == norm && r > 0 {
            let mut v = zero_vec(dirs[0].len());
            for (si, dir) in s.iter().zip(dirs) {
                if *si > 0 {
                    crate::linalg::axpy(&mut v, &rint(*si as i64), dir);
                }
            }
            let scale = Rat::from_integer(lcm.clone()) / Rat::from_integer(BigInt::from(r));
            let u = scale_vec(&scale, &v);
            if !found.contains(&u) {
                found.push(u);
                if found.len() >= want {
                    return found;
                }
            }
        }
    }
}

/// Collects up to `want` exact unit vectors of a positive definite form:
/// congruence-diagonalize, reduce square factors, search integer
/// combinations; on a dry attempt remix the basis deterministically and
/// try again with fresh square classes.
fn unit_norm_candidates(a: &Matrix, want: usize) -> Vec<Vec<Rat>> {
    let p = a.rows();
    let mut found: Vec<Vec<Rat>> = Vec::new();
    if p == 0 {
        return found;
    }
    let form = BilinearForm::new(a.clone()).expect("symmetric");
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6F_u64);
    let mut mix = Matrix::identity(p);
    for attempt in 0..6 {
        let mixed = mix.transpose().mul(a).mul(&mix);
        let mixed_form = BilinearForm::new(mixed).expect("congruence keeps symmetry");
        let (diag_basis, diag) = mixed_form.congruence_diagonalize();
        let mut dirs = Vec::with_capacity(p);
        let mut keys = Vec::with_capacity(p);
        for (i, d) in diag.iter().enumerate() {
            let (k, m) = squarefree_scale(d);
            dirs.push(scale_vec(
                &(Rat::one() / m),
                &mix.mul_vec(&diag_basis.col(i)),
            ));
            keys.push(k);
        }
        for u in diagonal_unit_search(&dirs, &keys, want, attempt == 0) {
            debug_assert!(form.eval(&u, &u).is_one());
            let u = normalize_unit_sign(u);
            if !found.contains(&u) {
                found.push(u);
            }
        }
        if found.len() >= want {
            found.truncate(want);
            return found;
        }
        if attempt >= 2 && !found.is_empty() {
            // enough variety; deeper remixing rarely adds more
            return found;
        }
        for _ in 0..3 {
            if p == 1 {
                break;
            }
            let i = rng.gen_range(0..p);
            let mut j = rng.gen_range(0..p);
            while j == i {
                j = rng.gen_range(0..p);
            }
            let c = rint([-2i64, -1, 1, 2][rng.gen_range(0..4)]);
            for row in 0..p {
                let v = &mix[(row, i)] + &c * &mix[(row, j)];
                mix[(row, i)] = v;
            }
        }
    }
    if found.is_empty() {
        // last resort: bounded shell walk in the original coordinates
        let height: i64 = match p {
            1 => 0,
            2 => 60,
            3 => 12,
            4 => 6,
            _ => 3,
        };
        for h in 1..=height {
            if let Some(u) = search_shell(p, h, &form) {
                found.push(u);
                break;
            }
        }
    }
    found
}

fn normalize_unit_sign(mut v: Vec<Rat>) -> Vec<Rat> {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    v
}

/// Walks the max-norm shell of radius `h` in lexicographic order and returns
/// the first primitive vector whose `A`-norm is a rational square, scaled to
/// unit norm.
fn search_shell(p: usize, h: i64, form: &BilinearForm) -> Option<Vec<Rat>> {
    let mut y = vec![-h; p];
    loop {
        let on_shell = y.iter().any(|&c| c.abs() == h);
        if on_shell && primitive_positive(&y) {
            let v: Vec<Rat> = y.iter().map(|&c| rint(c)).collect();
            let n = form.eval(&v, &v);
            if let Some(t) = rational_sqrt(&n) {
                if !t.is_zero() {
                    return Some(scale_vec(&(Rat::one() / t), &v));
                }
            }
        }
        // odometer increment; done when every slot has wrapped
        let mut slot = p;
        loop {
            if slot == 0 {
                return None;
            }
            slot -= 1;
            if y[slot] < h {
                y[slot] += 1;
                for s in slot + 1..p {
                    y[s] = -h;
                }
                break;
            }
        }
    }
}

fn primitive_positive(v: &[i64]) -> bool {
    let first = match v.iter().find(|&&x| x != 0) {
        None => return false,
        Some(&x) => x,
    };
    if first < 0 {
        return false;
    }
    let mut g: i64 = 0;
    for &x in v {
        g = num_integer::gcd(g, x.abs());
    }
    g == 1
}

/// Exact orthonormalization of a positive definite rational form: returns
/// `R` with `Rᵀ·A·R = I` when unit vectors can be split off all the way
/// down, backtracking over candidate unit vectors at each level. Fails
/// (returns `None`) when the form is not equivalent to the identity over ℚ
/// or the search budget runs out.
pub fn orthonormalize_positive_definite(a: &Matrix) -> Option<Matrix> {
    let mut budget = 60usize;
    orthonormalize_rec(a, &mut budget)
}

fn orthonormalize_rec(a: &Matrix, budget: &mut usize) -> Option<Matrix> {
    let p = a.rows();
    if p == 0 {
        return Some(Matrix::zeros(0, 0));
    }
    if *budget == 0 {
        return None;
    }
    *budget -= 1;
    let form = BilinearForm::new(a.clone()).expect("symmetric");
    for u in unit_norm_candidates(a, 5) {
        if p == 1 {
            return Some(Matrix::from_rows(1, vec![u]));
        }
        let mut constraint = Matrix::zeros(1, p);
        let au = a.mul_vec(&u);
        for j in 0..p {
            constraint[(0, j)] = au[j].clone();
        }
        let comp: Vec<Vec<Rat>> = kernel_basis(&constraint)
            .iter()
            .map(|v| primitive_integer_vector(v))
            .collect();
        debug_assert_eq!(comp.len(), p - 1);
        let sub = form.restrict_to_rows(&comp).expect("restriction symmetric");
        let Some(r_sub) = orthonormalize_rec(sub.gram(), budget) else {
            continue;
        };
        let mut r = Matrix::zeros(p, p);
        for i in 0..p {
            r[(i, 0)] = u[i].clone();
        }
        for j in 0..p - 1 {
            let mut col = zero_vec(p);
            for (i, c) in comp.iter().enumerate() {
                crate::linalg::axpy(&mut col, &r_sub[(i, j)], c);
            }
            for i in 0..p {
                r[(i, j + 1)] = col[i].clone();
            }
        }
        return Some(r);
    }
    None
}

// ---------------------------------------------------------------------------
// witness construction

/// Constructs the canonical basis for a nonzero nilpotent skew operator of a
/// Lorentz form. Deterministic choices throughout: the cyclic vector is the
/// first standard basis vector not killed by `B²`.
pub fn nilpotent_witness_basis(b: &Matrix, g: &BilinearForm) -> Result<CanonicalForm, CanonError> {
    if b.rows() != b.cols() || b.rows() != g.dim() {
        return Err(CanonError::DimensionMismatch);
    }
    if !check_skew(b, g)? {
        return Err(CanonError::NotSkew);
    }
    if !g.is_lorentz() {
        return Err(CanonError::NotLorentz);
    }
    if b.is_zero() {
        return Err(CanonError::ZeroOperator);
    }
    let n = b.rows();
    match nilpotency_index(b).expect("square") {
        Some(3) => {}
        Some(_) | None => {
            return Err(CanonError::Structural(
                "nonzero nilpotent skew operator of a Lorentz form must have nilindex 3".into(),
            ))
        }
    }
    if rank(b) != 2 {
        return Err(CanonError::Structural(
            "nonzero nilpotent skew operator of a Lorentz form must have rank 2".into(),
        ));
    }
    let b2 = b.mul(b);
    let v_idx = (0..n)
        .find(|&i| !crate::linalg::is_zero_vec(&b2.col(i)))
        .expect("B² is nonzero");
    let v = crate::linalg::unit_vec(n, v_idx);
    let bv = b.mul_vec(&v);
    let q = g.eval(&bv, &bv);
    if !q.is_positive() {
        return Err(CanonError::Structural(
            "⟨Bv, Bv⟩ must be positive for a Lorentz form".into(),
        ));
    }
    let (scale, triple_scale) = match rational_sqrt(&q) {
        Some(r) => (Rat::one() / r, None),
        None => (Rat::one(), Some(q.clone())),
    };
    let e2 = scale_vec(&scale, &bv);
    let e1 = b.mul_vec(&e2);
    let mut e3 = scale_vec(&scale, &v);
    let qq = g.eval(&e2, &e2); // 1 in the exact case, q otherwise
                               // self-norm correction inside span{e1, e2, v}: e3 += (c / 2qq)·e1 keeps
                               // B·e3 = e2 and ⟨e2, e3⟩ = 0 while zeroing ⟨e3, e3⟩
    let c = g.eval(&e3, &e3);
    if !c.is_zero() {
        let coeff = &c / (rint(2) * &qq);
        crate::linalg::axpy(&mut e3, &coeff, &e1);
    }

    // complement = orthocomplement of the triple
    let triple = Matrix::from_rows(n, vec![e1.clone(), e2.clone(), e3.clone()]);
    let comp: Vec<Vec<Rat>> = kernel_basis(&triple.mul(g.gram()))
        .iter()
        .map(|v| primitive_integer_vector(v))
        .collect();
    debug_assert_eq!(comp.len(), n - 3);
    let comp_form = g
        .restrict_to_rows(&comp)
        .map_err(|_| CanonError::DegenerateGram)?;
    if !comp_form.is_positive_definite() {
        return Err(CanonError::Structural(
            "complement of the null triple is not positive definite".into(),
        ));
    }

    let p_dim = n - 3;
    let (comp_vectors, comp_gram, complement_diag) =
        match orthonormalize_positive_definite(comp_form.gram()) {
            Some(r) => {
                let mut vs = Vec::with_capacity(p_dim);
                for j in 0..p_dim {
                    let mut col = zero_vec(n);
                    for (i, cv) in comp.iter().enumerate() {
                        crate::linalg::axpy(&mut col, &r[(i, j)], cv);
                    }
                    vs.push(col);
                }
                (vs, Matrix::identity(p_dim), None)
            }
            None => {
                // diagonal fallback: exact congruence diagonalization with
                // square pivots scaled to 1
                let (pc, diag) = comp_form.congruence_diagonalize();
                let mut vs = Vec::with_capacity(p_dim);
                let mut entries = Vec::with_capacity(p_dim);
                for j in 0..p_dim {
                    let mut col = zero_vec(n);
                    for (i, cv) in comp.iter().enumerate() {
                        crate::linalg::axpy(&mut col, &pc[(i, j)], cv);
                    }
                    let mut d = diag[j].clone();
                    if let Some(r) = rational_sqrt(&d) {
                        col = scale_vec(&(Rat::one() / r), &col);
                        d = Rat::one();
                    }
                    entries.push(d);
                    vs.push(col);
                }
                let mut dg = Matrix::zeros(p_dim, p_dim);
                for j in 0..p_dim {
                    dg[(j, j)] = entries[j].clone();
                }
                let all_units = entries.iter().all(|d| d.is_one());
                (vs, dg, if all_units { None } else { Some(entries) })
            }
        };

    // assemble the witness: columns e1, e2, e3, complement
    let mut witness = Matrix::zeros(n, n);
    for (j, col) in [&e1, &e2, &e3]
        .into_iter()
        .chain(comp_vectors.iter())
        .enumerate()
    {
        for i in 0..n {
            witness[(i, j)] = col[i].clone();
        }
    }

    let mut triple_gram = Matrix::zeros(3, 3);
    triple_gram[(0, 2)] = -qq.clone();
    triple_gram[(2, 0)] = -qq.clone();
    triple_gram[(1, 1)] = qq.clone();
    let canonical_gram_full = triple_gram.block_diag(&comp_gram);
    let canonical_matrix = canonical_nilpotent_matrix(p_dim);

    let w_inv = invert(&witness)
        .ok_or_else(|| CanonError::Structural("witness basis is singular".into()))?;
    if w_inv.mul(b).mul(&witness) != canonical_matrix {
        return Err(CanonError::Structural(
            "witness verification failed: operator identity".into(),
        ));
    }
    if witness.transpose().mul(g.gram()).mul(&witness) != canonical_gram_full {
        return Err(CanonError::Structural(
            "witness verification failed: gram identity".into(),
        ));
    }

    Ok(CanonicalForm {
        kind: OperatorKind::NonSemisimple { c_block_dim: p_dim },
        witness,
        canonical_matrix,
        canonical_gram: canonical_gram_full,
        triple_scale,
        complement_diag,
    })
}
