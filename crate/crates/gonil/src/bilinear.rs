//! Symmetric bilinear forms: signatures by exact congruence, radicals,
//! orthocomplements and restrictions.
//!
//! Signatures are computed by simultaneous row/column elimination entirely
//! over the rationals (Sylvester's law makes eigenvalues unnecessary), with a
//! hyperbolic pivot step for the case where every diagonal entry of the
//! active block vanishes.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{kernel_basis, Matrix, Rat, Subspace};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormError {
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("gram matrix is not square")]
    NotSquare,
    #[error("subspace ambient dimension {got} does not match form dimension {dim}")]
    AmbientMismatch { got: usize, dim: usize },
}

/// Signs of a diagonalized form: `positive + negative + null = dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignatureReport {
    pub positive: usize,
    pub negative: usize,
    pub null: usize,
}

/// Which sign carries the single "time" direction of a Lorentz form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignConvention {
    /// Lorentz means signature `(n-1, 1, 0)`: one negative direction.
    #[default]
    MostlyPlus,
    /// Lorentz means signature `(1, n-1, 0)`: one positive direction.
    MostlyMinus,
}

/// Symmetric bilinear form on the coordinates of a stated ambient basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearForm {
    gram: Matrix,
}

impl BilinearForm {
    pub fn new(gram: Matrix) -> Result<Self, FormError> {
        if gram.rows() != gram.cols() {
            return Err(FormError::NotSquare);
        }
        if !gram.is_symmetric() {
            return Err(FormError::NotSymmetric);
        }
        Ok(BilinearForm { gram })
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn eval(&self, u: &[Rat], v: &[Rat]) -> Rat {
        let gv = self.gram.mul_vec(v);
        u.iter().zip(&gv).map(|(a, b)| a * b).sum()
    }

    /// Exact congruence diagonalization: returns `(P, d)` with
    /// `Pᵀ · G · P = diag(d)`. Deterministic pivot order: the first usable
    /// diagonal entry, else the lexicographically first off-diagonal entry
    /// (hyperbolic case, handled by adding one basis vector to another).
    pub fn congruence_diagonalize(&self) -> (Matrix, Vec<Rat>) {
        let n = self.dim();
        let mut g = self.gram.clone();
        let mut p = Matrix::identity(n);

        // column operation e_a := e_a + c·e_b applied congruently
        fn add_col(g: &mut Matrix, p: &mut Matrix, a: usize, b: usize, c: &Rat) {
            let n = g.rows();
            for i in 0..n {
                let v = &g[(i, a)] + c * &g[(i, b)];
                g[(i, a)] = v;
            }
            for j in 0..n {
                let v = &g[(a, j)] + c * &g[(b, j)];
                g[(a, j)] = v;
            }
            for i in 0..n {
                let v = &p[(i, a)] + c * &p[(i, b)];
                p[(i, a)] = v;
            }
        }

        fn swap_cols(g: &mut Matrix, p: &mut Matrix, a: usize, b: usize) {
            let n = g.rows();
            for i in 0..n {
                let t = g[(i, a)].clone();
                g[(i, a)] = g[(i, b)].clone();
                g[(i, b)] = t;
            }
            for j in 0..n {
                let t = g[(a, j)].clone();
                g[(a, j)] = g[(b, j)].clone();
                g[(b, j)] = t;
            }
            for i in 0..n {
                let t = p[(i, a)].clone();
                p[(i, a)] = p[(i, b)].clone();
                p[(i, b)] = t;
            }
        }

        for k in 0..n {
            if g[(k, k)].is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !g[(j, j)].is_zero()) {
                    swap_cols(&mut g, &mut p, k, j);
                } else {
                    // all remaining diagonal entries vanish; look for an
                    // off-diagonal entry and fold it onto the diagonal
                    let mut found = None;
                    'outer: for i in k..n {
                        for j in i + 1..n {
                            if !g[(i, j)].is_zero() {
                                found = Some((i, j));
                                break 'outer;
                            }
                        }
                    }
                    match found {
                        None => break, // active block is zero
                        Some((i, j)) => {
                            add_col(&mut g, &mut p, i, j, &Rat::one());
                            if i != k {
                                swap_cols(&mut g, &mut p, k, i);
                            }
                        }
                    }
                }
            }
            let pivot = g[(k, k)].clone();
            for j in k + 1..n {
                if !g[(k, j)].is_zero() {
                    let f = -&g[(k, j)] / &pivot;
                    add_col(&mut g, &mut p, j, k, &f);
                }
            }
        }
        let diag = (0..n).map(|i| g[(i, i)].clone()).collect();
        (p, diag)
    }

    pub fn signature(&self) -> SignatureReport {
        let (_, diag) = self.congruence_diagonalize();
        let mut rep = SignatureReport {
            positive: 0,
            negative: 0,
            null: 0,
        };
        for d in diag {
            if d.is_zero() {
                rep.null += 1;
            } else if d.is_positive() {
                rep.positive += 1;
            } else {
                rep.negative += 1;
            }
        }
        rep
    }

    /// Kernel of the Gram matrix as an echelon basis; its dimension always
    /// equals the null count of the signature.
    pub fn radical(&self) -> Subspace {
        Subspace::from_generators(self.dim(), kernel_basis(&self.gram))
    }

    pub fn is_degenerate(&self) -> bool {
        !self.radical().is_zero()
    }

    /// `{v : ⟨v, s⟩ = 0 for all s ∈ S}` inside the form's coordinate space.
    pub fn orthocomplement(&self, s: &Subspace) -> Result<Subspace, FormError> {
        if s.ambient_dim() != self.dim() {
            return Err(FormError::AmbientMismatch {
                got: s.ambient_dim(),
                dim: self.dim(),
            });
        }
        if s.dim() == 0 {
            return Ok(Subspace::full(self.dim()));
        }
        let constraints = s.basis_matrix().mul(&self.gram);
        Ok(Subspace::from_generators(
            self.dim(),
            kernel_basis(&constraints),
        ))
    }

    /// Gram matrix of the form pulled back to the basis of `S`.
    pub fn restrict(&self, s: &Subspace) -> Result<BilinearForm, FormError> {
        if s.ambient_dim() != self.dim() {
            return Err(FormError::AmbientMismatch {
                got: s.ambient_dim(),
                dim: self.dim(),
            });
        }
        self.restrict_to_rows(s.basis())
    }

    /// Restriction to an arbitrary (not necessarily echelon) list of vectors.
    pub fn restrict_to_rows(&self, rows: &[Vec<Rat>]) -> Result<BilinearForm, FormError> {
        let r = rows.len();
        let mut gram = Matrix::zeros(r, r);
        for i in 0..r {
            for j in i..r {
                let v = self.eval(&rows[i], &rows[j]);
                gram[(i, j)] = v.clone();
                gram[(j, i)] = v;
            }
        }
        BilinearForm::new(gram)
    }

    pub fn is_lorentz_with(&self, conv: SignConvention) -> bool {
        let sig = self.signature();
        if sig.null != 0 || self.dim() == 0 {
            return false;
        }
        match conv {
            SignConvention::MostlyPlus => sig.negative == 1,
            SignConvention::MostlyMinus => sig.positive == 1,
        }
    }

    /// Lorentz under the default mostly-plus convention `(n-1, 1, 0)`.
    pub fn is_lorentz(&self) -> bool {
        self.is_lorentz_with(SignConvention::MostlyPlus)
    }

    pub fn is_positive_definite(&self) -> bool {
        let sig = self.signature();
        sig.negative == 0 && sig.null == 0
    }

    pub fn is_definite(&self) -> bool {
        let sig = self.signature();
        sig.null == 0 && (sig.positive == 0 || sig.negative == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rint, unit_vec};

    fn diag(entries: &[i64]) -> BilinearForm {
        let n = entries.len();
        let mut m = Matrix::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = rint(e);
        }
        BilinearForm::new(m).unwrap()
    }

    #[test]
    fn signature_examples() {
        assert_eq!(
            diag(&[1, 1, -1]).signature(),
            SignatureReport {
                positive: 2,
                negative: 1,
                null: 0
            }
        );
        // hyperbolic pair plus unit vector
        let w =
            BilinearForm::new(Matrix::from_i64(&[&[0, 0, -1], &[0, 1, 0], &[-1, 0, 0]])).unwrap();
        assert_eq!(
            w.signature(),
            SignatureReport {
                positive: 2,
                negative: 1,
                null: 0
            }
        );
        let deg = BilinearForm::new(Matrix::from_i64(&[&[0, 0], &[0, 1]])).unwrap();
        assert_eq!(
            deg.signature(),
            SignatureReport {
                positive: 1,
                negative: 0,
                null: 1
            }
        );
    }

    #[test]
    fn congruence_identity_holds() {
        let g = BilinearForm::new(Matrix::from_i64(&[&[0, 1, 2], &[1, 0, 3], &[2, 3, 0]])).unwrap();
        let (p, d) = g.congruence_diagonalize();
        let lhs = p.transpose().mul(g.gram()).mul(&p);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { d[i].clone() } else { rint(0) };
                assert_eq!(lhs[(i, j)], expect);
            }
        }
    }

    #[test]
    fn non_symmetric_rejected() {
        assert_eq!(
            BilinearForm::new(Matrix::from_i64(&[&[0, 1], &[2, 0]])),
            Err(FormError::NotSymmetric)
        );
    }

    #[test]
    fn radical_examples() {
        assert!(diag(&[1, -1]).radical().is_zero());
        let deg = BilinearForm::new(Matrix::from_i64(&[&[0, 0], &[0, 1]])).unwrap();
        assert_eq!(deg.radical().basis(), &[unit_vec(2, 0)]);
        // nondegenerate 4-dim split form: I_1 ⊕ hyperbolic ⊕ I_1
        let g = BilinearForm::new(Matrix::from_i64(&[
            &[1, 0, 0, 0],
            &[0, 0, 1, 0],
            &[0, 1, 0, 0],
            &[0, 0, 0, 1],
        ]))
        .unwrap();
        assert!(g.radical().is_zero());
    }

    #[test]
    fn orthocomplement_examples() {
        let e = diag(&[1, 1, 1]);
        let s = Subspace::from_generators(3, vec![unit_vec(3, 2)]);
        let c = e.orthocomplement(&s).unwrap();
        assert_eq!(c.basis(), &[unit_vec(3, 0), unit_vec(3, 1)]);

        let h = BilinearForm::new(Matrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap();
        let line = Subspace::from_generators(2, vec![unit_vec(2, 0)]);
        let c = h.orthocomplement(&line).unwrap();
        assert_eq!(c.basis(), &[unit_vec(2, 0)]); // null line is self-orthogonal
    }

    #[test]
    fn degenerate_commutator_contains_itself() {
        // a null direction is inside its own orthocomplement
        let g = BilinearForm::new(Matrix::from_i64(&[
            &[1, 0, 0, 0],
            &[0, 0, 0, 1],
            &[0, 0, 1, 0],
            &[0, 1, 0, 0],
        ]))
        .unwrap();
        let s = Subspace::from_generators(4, vec![unit_vec(4, 1)]);
        let c = g.orthocomplement(&s).unwrap();
        assert!(s.is_subspace_of(&c));
    }

    #[test]
    fn restrict_examples() {
        let g = diag(&[1, 1, -1]);
        let s = Subspace::from_generators(3, vec![unit_vec(3, 0), unit_vec(3, 2)]);
        let r = g.restrict(&s).unwrap();
        assert_eq!(r.gram(), &Matrix::from_i64(&[&[1, 0], &[0, -1]]));

        let w =
            BilinearForm::new(Matrix::from_i64(&[&[0, 0, -1], &[0, 1, 0], &[-1, 0, 0]])).unwrap();
        let e2 = Subspace::from_generators(3, vec![unit_vec(3, 1)]);
        assert_eq!(w.restrict(&e2).unwrap().gram(), &Matrix::from_i64(&[&[1]]));

        let empty = g.restrict(&Subspace::zero(3)).unwrap();
        assert_eq!(empty.dim(), 0);
    }

    #[test]
    fn lorentz_examples() {
        assert!(diag(&[1, 1, -1]).is_lorentz());
        assert!(!diag(&[1, -1, -1]).is_lorentz());
        assert!(diag(&[1, -1, -1]).is_lorentz_with(SignConvention::MostlyMinus));
        let h = BilinearForm::new(Matrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap();
        assert!(h.is_lorentz());
        assert!(!diag(&[0, 1]).is_lorentz());
    }

    #[test]
    fn radical_dim_matches_null_count() {
        let g = BilinearForm::new(Matrix::from_i64(&[&[1, 1, 0], &[1, 1, 0], &[0, 0, 2]])).unwrap();
        assert_eq!(g.radical().dim(), g.signature().null);
    }
}
