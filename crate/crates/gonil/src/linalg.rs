//! Exact rational linear algebra.
//!
//! Everything in this crate computes over `BigRational`; no floating point
//! enters any decision path. Elimination uses first-nonzero-column,
//! topmost-row pivoting so that particular solutions, kernel bases and
//! echelon forms are reproducible byte for byte.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact scalar used everywhere: arbitrary-precision rational, always in
/// lowest terms with positive denominator.
pub type Rat = BigRational;

/// Shorthand for a rational from an integer pair.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an integer rational.
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRatError {
    #[error("floats forbidden; write 1/2 instead of 0.5")]
    FloatForbidden,
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `"p/q"` or `"p"`. Decimal points are rejected outright: the file
/// formats ban floats so that no rounding can sneak in at the boundary.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseRatError::Empty);
    }
    if t.contains('.') || t.contains('e') || t.contains('E') {
        return Err(ParseRatError::FloatForbidden);
    }
    match t.split_once('/') {
        None => t
            .parse::<BigInt>()
            .map(Rat::from_integer)
            .map_err(|_| ParseRatError::Invalid(t.to_string())),
        Some((num, den)) => {
            let n = num
                .trim()
                .parse::<BigInt>()
                .map_err(|_| ParseRatError::Invalid(t.to_string()))?;
            let d = den
                .trim()
                .parse::<BigInt>()
                .map_err(|_| ParseRatError::Invalid(t.to_string()))?;
            if d.is_zero() {
                return Err(ParseRatError::ZeroDenominator(t.to_string()));
            }
            Ok(Rat::new(n, d))
        }
    }
}

/// Canonical string form: `"p"` when the denominator is 1, else `"p/q"`.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// True iff `r` is the square of a rational; returns the nonnegative root.
pub fn rational_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// vectors

pub fn zero_vec(n: usize) -> Vec<Rat> {
    vec![Rat::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Rat> {
    let mut v = zero_vec(n);
    v[i] = Rat::one();
    v
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn add_vec(u: &[Rat], v: &[Rat]) -> Vec<Rat> {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

pub fn sub_vec(u: &[Rat], v: &[Rat]) -> Vec<Rat> {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub fn scale_vec(c: &Rat, v: &[Rat]) -> Vec<Rat> {
    v.iter().map(|a| c * a).collect()
}

pub fn axpy(acc: &mut [Rat], c: &Rat, v: &[Rat]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += c * b;
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

// ---------------------------------------------------------------------------
// matrices

/// Dense row-major matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    /// Builds a matrix from row vectors; `cols` disambiguates the empty case.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rat>>) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            entries.extend(r);
        }
        Matrix {
            rows: nrows,
            cols,
            entries,
        }
    }

    /// Convenience constructor from i64 entries, mostly for tests.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| rint(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.cols {
                    let a = &self[(i, j)];
                    if !a.is_zero() {
                        acc += a * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn scale(&self, c: &Rat) -> Matrix {
        let entries = self.entries.iter().map(|a| a * c).collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn pow(&self, mut e: usize) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return false;
                }
            }
        }
        true
    }

    pub fn trace(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self[(i, i)].clone()).sum()
    }

    /// Flattens to a single row-major vector (used for power iterations).
    pub fn flatten(&self) -> Vec<Rat> {
        self.entries.clone()
    }

    /// Direct sum `self ⊕ other` as a block-diagonal matrix.
    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.entries[i * self.cols + j]
    }
}

// ---------------------------------------------------------------------------
// elimination

/// Reduced row echelon form together with the pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // first nonzero entry in column c at or below row r
        let pivot_row = (r..rows).find(|&i| !a[(i, c)].is_zero());
        let Some(p) = pivot_row else { continue };
        if p != r {
            for j in 0..cols {
                let t = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = t;
            }
        }
        let inv = {
            let piv = a[(r, c)].clone();
            Rat::one() / piv
        };
        for j in 0..cols {
            let v = &a[(r, j)] * &inv;
            a[(r, j)] = v;
        }
        for i in 0..rows {
            if i != r && !a[(i, c)].is_zero() {
                let f = a[(i, c)].clone();
                for j in 0..cols {
                    let v = &a[(i, j)] - &f * &a[(r, j)];
                    a[(i, j)] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).1.len()
}

/// A consistent linear system's deterministic solution: the particular
/// solution with all free variables set to zero, plus the reduced echelon
/// free-variable kernel basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinSolution {
    pub particular: Vec<Rat>,
    pub kernel: Vec<Vec<Rat>>,
}

/// Solves `A x = b` exactly. `Ok(None)` means inconsistent.
pub fn solve_linear(a: &Matrix, b: &[Rat]) -> Result<Option<LinSolution>, LinalgError> {
    if a.rows != b.len() {
        return Err(LinalgError::DimensionMismatch(format!(
            "A has {} rows but b has length {}",
            a.rows,
            b.len()
        )));
    }
    let mut aug = Matrix::zeros(a.rows, a.cols + 1);
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, a.cols)] = b[i].clone();
    }
    let (e, pivots) = rref(&aug);
    if pivots.contains(&a.cols) {
        return Ok(None); // a pivot in the augmented column: inconsistent
    }
    let mut particular = zero_vec(a.cols);
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = e[(r, a.cols)].clone();
    }
    let kernel = kernel_from_rref(&e, &pivots, a.cols);
    Ok(Some(LinSolution { particular, kernel }))
}

fn kernel_from_rref(e: &Matrix, pivots: &[usize], cols: usize) -> Vec<Vec<Rat>> {
    let mut kernel = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = zero_vec(cols);
        v[free] = Rat::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -e[(r, free)].clone();
        }
        kernel.push(v);
    }
    kernel
}

/// Deterministic reduced-echelon basis of `{v : Av = 0}`.
pub fn kernel_basis(a: &Matrix) -> Vec<Vec<Rat>> {
    let (e, pivots) = rref(a);
    kernel_from_rref(&e, &pivots, a.cols)
}

/// Exact inverse, or `None` when singular.
pub fn invert(a: &Matrix) -> Option<Matrix> {
    if a.rows != a.cols {
        return None;
    }
    let n = a.rows;
    let mut aug = Matrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n + i)] = Rat::one();
    }
    let (e, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    let mut inv = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv[(i, j)] = e[(i, n + j)].clone();
        }
    }
    Some(inv)
}

// ---------------------------------------------------------------------------
// minimal polynomial and nilpotency

/// Monic minimal polynomial of a square matrix, ascending coefficients
/// (`p[i]` multiplies `t^i`). Found as the first linear dependence among
/// `I, A, A², …`.
pub fn minimal_polynomial(a: &Matrix) -> Result<Vec<Rat>, LinalgError> {
    if a.rows != a.cols {
        return Err(LinalgError::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    let n = a.rows;
    if n == 0 {
        return Ok(vec![Rat::one()]);
    }
    let mut powers: Vec<Matrix> = vec![Matrix::identity(n)];
    loop {
        let next = powers.last().unwrap().mul(a);
        // columns of the dependence system are the flattened earlier powers
        let m = powers.len();
        let mut sys = Matrix::zeros(n * n, m);
        for (j, p) in powers.iter().enumerate() {
            for (i, v) in p.flatten().into_iter().enumerate() {
                sys[(i, j)] = v;
            }
        }
        let target = next.flatten();
        if let Some(sol) = solve_linear(&sys, &target)? {
            // A^m = sum c_i A^i  =>  t^m - sum c_i t^i
            let mut coeffs: Vec<Rat> = sol.particular.iter().map(|c| -c.clone()).collect();
            coeffs.push(Rat::one());
            return Ok(coeffs);
        }
        powers.push(next);
    }
}

/// Evaluates a polynomial (ascending coefficients) at a square matrix.
pub fn eval_poly_matrix(p: &[Rat], a: &Matrix) -> Matrix {
    let n = a.rows();
    let mut acc = Matrix::zeros(n, n);
    for c in p.iter().rev() {
        acc = acc.mul(a);
        for i in 0..n {
            acc[(i, i)] += c;
        }
    }
    acc
}

/// `Some(m)` with the least `m` such that `A^m = 0`, or `None` if `A` is not
/// nilpotent (decided exactly by `A^n`).
pub fn nilpotency_index(a: &Matrix) -> Result<Option<usize>, LinalgError> {
    if a.rows != a.cols {
        return Err(LinalgError::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    let n = a.rows;
    if n == 0 {
        return Ok(Some(0));
    }
    let mut p = Matrix::identity(n);
    for m in 0..=n {
        if p.is_zero() {
            return Ok(Some(m));
        }
        if m == n {
            break;
        }
        p = p.mul(a);
    }
    Ok(if p.is_zero() { Some(n) } else { None })
}

// ---------------------------------------------------------------------------
// subspaces

/// A subspace of ℚⁿ held as its unique reduced-echelon basis, so two values
/// are equal as subspaces iff they are equal entry-wise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rat>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::from_generators(
            ambient,
            (0..ambient).map(|i| unit_vec(ambient, i)).collect(),
        )
    }

    pub fn from_generators(ambient: usize, gens: Vec<Vec<Rat>>) -> Self {
        for g in &gens {
            assert_eq!(g.len(), ambient, "generator length mismatch");
        }
        let m = Matrix::from_rows(ambient, gens);
        let (e, pivots) = rref(&m);
        let basis = (0..pivots.len()).map(|i| e.row(i).to_vec()).collect();
        Subspace { ambient, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_rows(self.ambient, self.basis.clone())
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.coords_of(v).is_some()
    }

    /// Coefficients of `v` in the echelon basis, if `v` lies in the span.
    pub fn coords_of(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(v.len(), self.ambient);
        // echelon structure: peel off pivot coordinates
        let mut rem = v.to_vec();
        let mut coords = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            // pivot column = first nonzero entry (1 in reduced echelon form)
            let pivot = b
                .iter()
                .position(|x| !x.is_zero())
                .expect("no zero basis rows");
            let c = rem[pivot].clone();
            if !c.is_zero() {
                for (r, bv) in rem.iter_mut().zip(b) {
                    *r -= &c * bv;
                }
            }
            coords.push(c);
        }
        if is_zero_vec(&rem) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut gens = self.basis.clone();
        gens.extend(other.basis.clone());
        Subspace::from_generators(self.ambient, gens)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let r = self.dim();
        let s = other.dim();
        if r == 0 || s == 0 {
            return Subspace::zero(self.ambient);
        }
        // solve a·U - b·V = 0 over the coefficient space
        let mut m = Matrix::zeros(self.ambient, r + s);
        for (j, u) in self.basis.iter().enumerate() {
            for i in 0..self.ambient {
                m[(i, j)] = u[i].clone();
            }
        }
        for (j, v) in other.basis.iter().enumerate() {
            for i in 0..self.ambient {
                m[(i, r + j)] = -v[i].clone();
            }
        }
        let gens = kernel_basis(&m)
            .into_iter()
            .map(|ab| {
                let mut w = zero_vec(self.ambient);
                for (j, u) in self.basis.iter().enumerate() {
                    axpy(&mut w, &ab[j], u);
                }
                w
            })
            .collect();
        Subspace::from_generators(self.ambient, gens)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parse_and_format() {
        assert_eq!(parse_rat("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-4/2").unwrap(), rint(-2));
        assert_eq!(parse_rat("7").unwrap(), rint(7));
        assert_eq!(parse_rat("0.5"), Err(ParseRatError::FloatForbidden));
        assert_eq!(
            parse_rat("1/0"),
            Err(ParseRatError::ZeroDenominator("1/0".into()))
        );
        assert_eq!(format_rat(&rat(-6, 4)), "-3/2");
        assert_eq!(format_rat(&rint(5)), "5");
    }

    #[test]
    fn solve_identity_case() {
        let a = Matrix::identity(2);
        let sol = solve_linear(&a, &[rint(3), rint(5)]).unwrap().unwrap();
        assert_eq!(sol.particular, vec![rint(3), rint(5)]);
        assert!(sol.kernel.is_empty());
    }

    #[test]
    fn solve_one_free_variable() {
        let a = Matrix::from_i64(&[&[1, 1]]);
        let sol = solve_linear(&a, &[rint(2)]).unwrap().unwrap();
        assert_eq!(sol.particular, vec![rint(2), rint(0)]);
        assert_eq!(sol.kernel, vec![vec![rint(-1), rint(1)]]);
    }

    #[test]
    fn solve_inconsistent() {
        let a = Matrix::from_i64(&[&[1, 1], &[1, 1]]);
        assert_eq!(solve_linear(&a, &[rint(0), rint(1)]).unwrap(), None);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let a = Matrix::identity(2);
        assert!(solve_linear(&a, &[rint(1)]).is_err());
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&Matrix::identity(2)).is_empty());
        assert_eq!(
            kernel_basis(&Matrix::from_i64(&[&[0, 0]])),
            vec![vec![rint(1), rint(0)], vec![rint(0), rint(1)]]
        );
        assert_eq!(
            kernel_basis(&Matrix::from_i64(&[&[1, 2]])),
            vec![vec![rint(-2), rint(1)]]
        );
    }

    #[test]
    fn rank_plus_kernel_is_cols() {
        let a = Matrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&a) + kernel_basis(&a).len(), a.cols());
    }

    fn jordan3() -> Matrix {
        Matrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]])
    }

    #[test]
    fn minimal_polynomials() {
        // zero 3x3 -> t
        let z = Matrix::zeros(3, 3);
        assert_eq!(minimal_polynomial(&z).unwrap(), vec![rint(0), rint(1)]);
        // J3 -> t^3
        assert_eq!(
            minimal_polynomial(&jordan3()).unwrap(),
            vec![rint(0), rint(0), rint(0), rint(1)]
        );
        // diag(1,-1) -> t^2 - 1
        let d = Matrix::from_i64(&[&[1, 0], &[0, -1]]);
        assert_eq!(
            minimal_polynomial(&d).unwrap(),
            vec![rint(-1), rint(0), rint(1)]
        );
    }

    #[test]
    fn minimal_polynomial_annihilates() {
        let a = Matrix::from_i64(&[&[2, 1, 0], &[0, 2, 0], &[1, 0, 3]]);
        let p = minimal_polynomial(&a).unwrap();
        assert!(eval_poly_matrix(&p, &a).is_zero());
    }

    #[test]
    fn nilpotency() {
        assert_eq!(nilpotency_index(&jordan3()).unwrap(), Some(3));
        assert_eq!(nilpotency_index(&Matrix::identity(2)).unwrap(), None);
    }

    #[test]
    fn nilpotent_iff_minpoly_pure_power() {
        for m in [
            jordan3(),
            Matrix::identity(2),
            Matrix::from_i64(&[&[0, 2], &[0, 0]]),
        ] {
            let p = minimal_polynomial(&m).unwrap();
            let pure_power = p[..p.len() - 1].iter().all(|c| c.is_zero());
            assert_eq!(nilpotency_index(&m).unwrap().is_some(), pure_power);
        }
    }

    #[test]
    fn subspace_echelon_equality() {
        let s1 = Subspace::from_generators(
            3,
            vec![
                vec![rint(1), rint(1), rint(0)],
                vec![rint(0), rint(0), rint(1)],
            ],
        );
        let s2 = Subspace::from_generators(
            3,
            vec![
                vec![rint(2), rint(2), rint(2)],
                vec![rint(0), rint(0), rint(-1)],
            ],
        );
        assert_eq!(s1, s2);
        assert!(s1.contains(&[rint(3), rint(3), rint(7)]));
        assert!(!s1.contains(&[rint(1), rint(0), rint(0)]));
    }

    #[test]
    fn subspace_intersection() {
        let s = Subspace::from_generators(3, vec![unit_vec(3, 0), unit_vec(3, 1)]);
        let t = Subspace::from_generators(3, vec![unit_vec(3, 1), unit_vec(3, 2)]);
        let i = s.intersect(&t);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&unit_vec(3, 1)));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = invert(&a).unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(invert(&Matrix::from_i64(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn rational_square_detection() {
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&rint(2)), None);
        assert_eq!(rational_sqrt(&rint(-4)), None);
    }
}
