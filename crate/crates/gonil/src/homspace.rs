//! Reductive homogeneous-space data: the splitting `g = m ⊕ h`, the metric
//! on `m`, and the certificates that make the Geodesic Lemma applicable.
//!
//! `build` verifies all four structural invariants exactly and caches the
//! coordinate projectors. Failures carry basis-index witnesses so a bad
//! input can be diagnosed by hand.

use num_traits::Zero;
use thiserror::Error;

use crate::bilinear::BilinearForm;
use crate::lie::LieAlgebra;
use crate::linalg::{add_vec, invert, zero_vec, Matrix, Rat, Subspace};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("h and m bases do not span g as a direct sum")]
    NotDirectSum,
    #[error("basis vector length {got} does not match algebra dimension {dim}")]
    VectorLength { got: usize, dim: usize },
    #[error("h is not a subalgebra: [h_{i}, h_{j}] leaves h")]
    NotSubalgebra { i: usize, j: usize },
    #[error("decomposition is not reductive: [h_{eta}, m_{xi}] leaves m")]
    NotReductive { eta: usize, xi: usize },
    #[error("metric gram must be symmetric of size dim(m)")]
    BadMetric,
    #[error("metric is not ad(h)-skew: witness triple (h_{eta}, m_{xi}, m_{zeta})")]
    MetricNotInvariant { eta: usize, xi: usize, zeta: usize },
}

/// Result of the naturally-reductive test: on failure, the first basis
/// triple `(ξ, ζ, η)` (indices into the m basis) violating
/// `⟨[ξ,ζ]_m, η⟩ + ⟨ζ, [ξ,η]_m⟩ = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatRedResult {
    pub naturally_reductive: bool,
    pub witness: Option<(usize, usize, usize)>,
}

/// The tuple `(g, h, m, ⟨·,·⟩ on m)` with verified invariants. Immutable
/// after `build`; all methods are pure.
#[derive(Debug, Clone)]
pub struct ReductiveSpace {
    algebra: LieAlgebra,
    h_basis: Vec<Vec<Rat>>,
    m_basis: Vec<Vec<Rat>>,
    metric: BilinearForm,
    /// rows = coefficients of the m part of a g-vector in `m_basis`
    m_coord: Matrix,
    /// rows = coefficients of the h part of a g-vector in `h_basis`
    h_coord: Matrix,
    m_span: Subspace,
    h_span: Subspace,
}

impl ReductiveSpace {
    pub fn build(
        algebra: LieAlgebra,
        h_basis: Vec<Vec<Rat>>,
        m_basis: Vec<Vec<Rat>>,
        metric_gram: Matrix,
    ) -> Result<ReductiveSpace, BuildError> {
        let n = algebra.dim();
        for v in h_basis.iter().chain(m_basis.iter()) {
            if v.len() != n {
                return Err(BuildError::VectorLength {
                    got: v.len(),
                    dim: n,
                });
            }
        }
        if h_basis.len() + m_basis.len() != n {
            return Err(BuildError::NotDirectSum);
        }

        // invariant 1: g = m ⊕ h as vector spaces
        let mut change = Matrix::zeros(n, n);
        for (j, v) in m_basis.iter().chain(h_basis.iter()).enumerate() {
            for i in 0..n {
                change[(i, j)] = v[i].clone();
            }
        }
        let inv = invert(&change).ok_or(BuildError::NotDirectSum)?;
        let dm = m_basis.len();
        let mut m_coord = Matrix::zeros(dm, n);
        let mut h_coord = Matrix::zeros(h_basis.len(), n);
        for j in 0..n {
            for i in 0..dm {
                m_coord[(i, j)] = inv[(i, j)].clone();
            }
            for i in 0..h_basis.len() {
                h_coord[(i, j)] = inv[(dm + i, j)].clone();
            }
        }

        let m_span = Subspace::from_generators(n, m_basis.clone());
        let h_span = Subspace::from_generators(n, h_basis.clone());

        // invariant 3: h is a subalgebra
        for i in 0..h_basis.len() {
            for j in i + 1..h_basis.len() {
                let br = algebra.bracket(&h_basis[i], &h_basis[j]);
                if !h_span.contains(&br) {
                    return Err(BuildError::NotSubalgebra { i, j });
                }
            }
        }

        // invariant 2: [h, m] ⊆ m
        for (eta, hv) in h_basis.iter().enumerate() {
            for (xi, mv) in m_basis.iter().enumerate() {
                let br = algebra.bracket(hv, mv);
                if !m_span.contains(&br) {
                    return Err(BuildError::NotReductive { eta, xi });
                }
            }
        }

        if metric_gram.rows() != dm || metric_gram.cols() != dm || !metric_gram.is_symmetric() {
            return Err(BuildError::BadMetric);
        }
        let metric = BilinearForm::new(metric_gram).map_err(|_| BuildError::BadMetric)?;

        let space = ReductiveSpace {
            algebra,
            h_basis,
            m_basis,
            metric,
            m_coord,
            h_coord,
            m_span,
            h_span,
        };

        // invariant 4: metric is ad(h)-skew
        for eta in 0..space.h_basis.len() {
            for xi in 0..space.dim_m() {
                for zeta in 0..space.dim_m() {
                    let b1 = space
                        .algebra
                        .bracket(&space.h_basis[eta], &space.m_basis[xi]);
                    let b2 = space
                        .algebra
                        .bracket(&space.h_basis[eta], &space.m_basis[zeta]);
                    let t = space.metric_eval(&b1, &space.m_basis[zeta])
                        + space.metric_eval(&space.m_basis[xi], &b2);
                    if !t.is_zero() {
                        return Err(BuildError::MetricNotInvariant { eta, xi, zeta });
                    }
                }
            }
        }

        Ok(space)
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn dim_g(&self) -> usize {
        self.algebra.dim()
    }

    pub fn dim_m(&self) -> usize {
        self.m_basis.len()
    }

    pub fn dim_h(&self) -> usize {
        self.h_basis.len()
    }

    pub fn m_basis(&self) -> &[Vec<Rat>] {
        &self.m_basis
    }

    pub fn h_basis(&self) -> &[Vec<Rat>] {
        &self.h_basis
    }

    pub fn m_span(&self) -> &Subspace {
        &self.m_span
    }

    pub fn h_span(&self) -> &Subspace {
        &self.h_span
    }

    /// The metric's Gram matrix is over `m_basis` coordinates.
    pub fn metric(&self) -> &BilinearForm {
        &self.metric
    }

    /// Coordinate projector `g → g` onto the m summand along h:
    /// `projector_to_m() + projector_to_h()` is the identity and the two
    /// compose to zero.
    pub fn projector_to_m(&self) -> Matrix {
        let n = self.dim_g();
        let mut p = Matrix::zeros(n, n);
        for (coeff_row, basis) in self.m_coord.row_vecs().iter().zip(&self.m_basis) {
            for i in 0..n {
                for j in 0..n {
                    p[(i, j)] += &basis[i] * &coeff_row[j];
                }
            }
        }
        p
    }

    pub fn projector_to_h(&self) -> Matrix {
        let n = self.dim_g();
        let mut p = Matrix::zeros(n, n);
        for (coeff_row, basis) in self.h_coord.row_vecs().iter().zip(&self.h_basis) {
            for i in 0..n {
                for j in 0..n {
                    p[(i, j)] += &basis[i] * &coeff_row[j];
                }
            }
        }
        p
    }

    /// Coefficients of the m part of a g-vector in `m_basis`.
    pub fn m_coefficients(&self, xi: &[Rat]) -> Vec<Rat> {
        self.m_coord.mul_vec(xi)
    }

    /// Coefficients of the h part of a g-vector in `h_basis`.
    pub fn h_coefficients(&self, xi: &[Rat]) -> Vec<Rat> {
        self.h_coord.mul_vec(xi)
    }

    /// Splits `ξ = ξ_m + ξ_h` exactly, both parts as g-vectors.
    pub fn project(&self, xi: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
        let mc = self.m_coefficients(xi);
        let mut xi_m = zero_vec(self.dim_g());
        for (c, b) in mc.iter().zip(&self.m_basis) {
            crate::linalg::axpy(&mut xi_m, c, b);
        }
        let hc = self.h_coefficients(xi);
        let mut xi_h = zero_vec(self.dim_g());
        for (c, b) in hc.iter().zip(&self.h_basis) {
            crate::linalg::axpy(&mut xi_h, c, b);
        }
        (xi_m, xi_h)
    }

    /// `π_m [u, v]` as a g-vector.
    pub fn bracket_m(&self, u: &[Rat], v: &[Rat]) -> Vec<Rat> {
        let br = self.algebra.bracket(u, v);
        self.project(&br).0
    }

    /// Metric value on the m parts of two g-vectors.
    pub fn metric_eval(&self, u: &[Rat], v: &[Rat]) -> Rat {
        self.metric
            .eval(&self.m_coefficients(u), &self.m_coefficients(v))
    }

    /// Builds a g-vector from m-basis coefficients.
    pub fn vector_from_m_coefficients(&self, coeffs: &[Rat]) -> Vec<Rat> {
        assert_eq!(coeffs.len(), self.dim_m());
        let mut v = zero_vec(self.dim_g());
        for (c, b) in coeffs.iter().zip(&self.m_basis) {
            crate::linalg::axpy(&mut v, c, b);
        }
        v
    }

    /// Builds a g-vector from h-basis coefficients.
    pub fn vector_from_h_coefficients(&self, coeffs: &[Rat]) -> Vec<Rat> {
        assert_eq!(coeffs.len(), self.dim_h());
        let mut v = zero_vec(self.dim_g());
        for (c, b) in coeffs.iter().zip(&self.h_basis) {
            crate::linalg::axpy(&mut v, c, b);
        }
        v
    }

    /// Tests `⟨[ξ,ζ]_m, η⟩ + ⟨ζ, [ξ,η]_m⟩ = 0` over all m-basis triples.
    /// Trilinearity makes the basis check exhaustive.
    pub fn is_naturally_reductive(&self) -> NatRedResult {
        for i in 0..self.dim_m() {
            for j in 0..self.dim_m() {
                for k in 0..self.dim_m() {
                    let b_ij = self.bracket_m(&self.m_basis[i], &self.m_basis[j]);
                    let b_ik = self.bracket_m(&self.m_basis[i], &self.m_basis[k]);
                    let t = self.metric_eval(&b_ij, &self.m_basis[k])
                        + self.metric_eval(&self.m_basis[j], &b_ik);
                    if !t.is_zero() {
                        return NatRedResult {
                            naturally_reductive: false,
                            witness: Some((i, j, k)),
                        };
                    }
                }
            }
        }
        NatRedResult {
            naturally_reductive: true,
            witness: None,
        }
    }

    /// Matrix of `π_m ∘ ad(η)|_m` in the m basis, for `η` a g-vector.
    pub fn ad_m_matrix(&self, eta: &[Rat]) -> Matrix {
        let dm = self.dim_m();
        let mut m = Matrix::zeros(dm, dm);
        for j in 0..dm {
            let img = self.algebra.bracket(eta, &self.m_basis[j]);
            let coords = self.m_coefficients(&img);
            for i in 0..dm {
                m[(i, j)] = coords[i].clone();
            }
        }
        m
    }

    /// Sum of m and h parts reproduces the input exactly.
    pub fn check_projection(&self, xi: &[Rat]) -> bool {
        let (m, h) = self.project(xi);
        add_vec(&m, &h) == xi
    }
}

// ---------------------------------------------------------------------------
// stock spaces used by tests

/// Heisenberg group with a rotation isotropy: dim-4 algebra on
/// `(v1, v2, z, a)` with `[v1,v2]=z`, `[a,v1]=v2`, `[a,v2]=-v1`;
/// `h = span(a)`, `m = span(v1,v2,z)`, metric `diag(1,1,1)`.
#[cfg(test)]
pub fn heisenberg_rotation_space() -> ReductiveSpace {
    use crate::linalg::{rint, unit_vec};
    let mut g = LieAlgebra::new(4);
    g.set_simple_bracket(0, 1, 2, rint(1)); // [v1, v2] = z
    g.set_simple_bracket(3, 0, 1, rint(1)); // [a, v1] = v2
    g.set_simple_bracket(3, 1, 0, rint(-1)); // [a, v2] = -v1
    ReductiveSpace::build(
        g,
        vec![unit_vec(4, 3)],
        vec![unit_vec(4, 0), unit_vec(4, 1), unit_vec(4, 2)],
        Matrix::identity(3),
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::heisenberg3;
    use crate::linalg::{rint, unit_vec};

    #[test]
    fn heisenberg_rotation_builds() {
        let s = heisenberg_rotation_space();
        assert_eq!(s.dim_m(), 3);
        assert_eq!(s.dim_h(), 1);
    }

    #[test]
    fn non_invariant_metric_witnessed() {
        use crate::linalg::rat;
        let mut g = LieAlgebra::new(4);
        g.set_simple_bracket(0, 1, 2, rint(1));
        g.set_simple_bracket(3, 0, 1, rint(1));
        g.set_simple_bracket(3, 1, 0, rint(-1));
        let mut gram = Matrix::identity(3);
        gram[(1, 1)] = rat(2, 1);
        let err = ReductiveSpace::build(
            g,
            vec![unit_vec(4, 3)],
            vec![unit_vec(4, 0), unit_vec(4, 1), unit_vec(4, 2)],
            gram,
        )
        .unwrap_err();
        // witness (a, v1, v2): <[a,v1],v2> + <v1,[a,v2]> = 2 - 1 = 1
        assert_eq!(
            err,
            BuildError::MetricNotInvariant {
                eta: 0,
                xi: 0,
                zeta: 1
            }
        );
    }

    #[test]
    fn abelian_any_metric_builds() {
        let g = LieAlgebra::abelian(3);
        let m_basis = (0..3).map(|i| unit_vec(3, i)).collect();
        let mut gram = Matrix::identity(3);
        gram[(0, 2)] = rint(5);
        gram[(2, 0)] = rint(5);
        assert!(ReductiveSpace::build(g, vec![], m_basis, gram).is_ok());
    }

    #[test]
    fn projection_examples() {
        let s = heisenberg_rotation_space();
        // xi = v1 + a
        let xi = vec![rint(1), rint(0), rint(0), rint(1)];
        let (m, h) = s.project(&xi);
        assert_eq!(m, vec![rint(1), rint(0), rint(0), rint(0)]);
        assert_eq!(h, vec![rint(0), rint(0), rint(0), rint(1)]);
        // xi in m
        let xi = vec![rint(0), rint(2), rint(3), rint(0)];
        let (m, h) = s.project(&xi);
        assert_eq!(m, xi);
        assert!(crate::linalg::is_zero_vec(&h));
        // zero
        let z = crate::linalg::zero_vec(4);
        let (m, h) = s.project(&z);
        assert!(crate::linalg::is_zero_vec(&m) && crate::linalg::is_zero_vec(&h));
        assert!(s.check_projection(&vec![rint(1), rint(2), rint(3), rint(4)]));
    }

    #[test]
    fn natred_abelian_true() {
        let g = LieAlgebra::abelian(2);
        let s = ReductiveSpace::build(
            g,
            vec![],
            vec![unit_vec(2, 0), unit_vec(2, 1)],
            Matrix::from_i64(&[&[1, 0], &[0, -1]]),
        )
        .unwrap();
        assert!(s.is_naturally_reductive().naturally_reductive);
    }

    #[test]
    fn natred_heisenberg_false_with_witness() {
        let s = ReductiveSpace::build(
            heisenberg3(),
            vec![],
            (0..3).map(|i| unit_vec(3, i)).collect(),
            Matrix::identity(3),
        )
        .unwrap();
        let r = s.is_naturally_reductive();
        assert!(!r.naturally_reductive);
        // first lex violation: (v1, v2, z)
        assert_eq!(r.witness, Some((0, 1, 2)));
    }

    #[test]
    fn natred_heisenberg_rotation_false() {
        let s = heisenberg_rotation_space();
        let r = s.is_naturally_reductive();
        assert!(!r.naturally_reductive);
        assert_eq!(r.witness, Some((0, 1, 2)));
    }

    #[test]
    fn ad_h_matrix_is_metric_skew() {
        let s = heisenberg_rotation_space();
        let m = s.ad_m_matrix(&unit_vec(4, 3));
        let g = s.metric().gram();
        assert!(m.transpose().mul(g).add(&g.mul(&m)).is_zero());
    }

    #[test]
    fn projectors_are_idempotent_and_complementary() {
        // oblique (non-coordinate) h and m bases over an abelian algebra
        let g = LieAlgebra::abelian(4);
        let h = vec![vec![rint(1), rint(0), rint(0), rint(2)]];
        let m = vec![
            vec![rint(1), rint(0), rint(0), rint(0)],
            vec![rint(1), rint(1), rint(0), rint(0)],
            vec![rint(0), rint(0), rint(1), rint(0)],
        ];
        let s = ReductiveSpace::build(g, h, m, Matrix::identity(3)).unwrap();
        let pm = s.projector_to_m();
        let ph = s.projector_to_h();
        assert_eq!(pm.add(&ph), Matrix::identity(4));
        assert!(pm.mul(&ph).is_zero());
        assert_eq!(pm.mul(&pm), pm);
        assert_eq!(ph.mul(&ph), ph);
    }
}
