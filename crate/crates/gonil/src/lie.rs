//! Lie algebras presented by structure constants.
//!
//! Brackets are stored sparsely for `i < j` only; antisymmetry is built into
//! the accessors. Index convention is 0-based everywhere, matching the file
//! formats. Nilpotency classes are counted so that an abelian algebra is
//! 1-step nilpotent.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::linalg::{is_zero_vec, unit_vec, zero_vec, Matrix, Rat, Subspace};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LieError {
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("vector length {got} does not match algebra dimension {dim}")]
    VectorLength { got: usize, dim: usize },
    #[error("subspace is not invariant under ad(x); violating basis vector #{basis_index}")]
    NotInvariant { basis_index: usize },
    #[error("subspace is not closed under the bracket; violating pair ({i}, {j})")]
    NotClosed { i: usize, j: usize },
}

/// First Jacobi failure, reported on the lexicographically least triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiFailure {
    pub triple: (usize, usize, usize),
    pub residual: Vec<Rat>,
}

/// Lie algebra of dimension `dim` with sparse structure constants:
/// `[e_i, e_j] = Σ_k c_{ij}^k e_k` stored for `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    brackets: BTreeMap<(usize, usize), Vec<(usize, Rat)>>,
    basis_names: Option<Vec<String>>,
}

impl LieAlgebra {
    pub fn new(dim: usize) -> Self {
        LieAlgebra {
            dim,
            brackets: BTreeMap::new(),
            basis_names: None,
        }
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra::new(dim)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.dim);
        self.basis_names = Some(names);
        self
    }

    /// Sets `[e_i, e_j]` (any order of `i`, `j`; the sign is handled).
    pub fn set_bracket(
        &mut self,
        i: usize,
        j: usize,
        coeffs: Vec<(usize, Rat)>,
    ) -> Result<(), LieError> {
        for &idx in [i, j].iter() {
            if idx >= self.dim {
                return Err(LieError::IndexOutOfRange {
                    index: idx,
                    dim: self.dim,
                });
            }
        }
        for (k, _) in &coeffs {
            if *k >= self.dim {
                return Err(LieError::IndexOutOfRange {
                    index: *k,
                    dim: self.dim,
                });
            }
        }
        if i == j {
            return Ok(()); // [e_i, e_i] = 0, nothing to store
        }
        let (key, flip) = if i < j {
            ((i, j), false)
        } else {
            ((j, i), true)
        };
        let mut map: BTreeMap<usize, Rat> = BTreeMap::new();
        for (k, c) in coeffs {
            let c = if flip { -c } else { c };
            *map.entry(k).or_insert_with(Rat::zero) += c;
        }
        let entry: Vec<(usize, Rat)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if entry.is_empty() {
            self.brackets.remove(&key);
        } else {
            self.brackets.insert(key, entry);
        }
        Ok(())
    }

    /// Convenience for tests and fixtures: `[e_i, e_j] = c · e_k`.
    pub fn set_simple_bracket(&mut self, i: usize, j: usize, k: usize, c: Rat) {
        self.set_bracket(i, j, vec![(k, c)])
            .expect("index in range");
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> Option<&[String]> {
        self.basis_names.as_deref()
    }

    pub fn bracket_entries(&self) -> &BTreeMap<(usize, usize), Vec<(usize, Rat)>> {
        &self.brackets
    }

    /// `[e_i, e_j]` as a dense vector, any index order.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rat> {
        let mut out = zero_vec(self.dim);
        if i == j {
            return out;
        }
        let (key, flip) = if i < j {
            ((i, j), false)
        } else {
            ((j, i), true)
        };
        if let Some(coeffs) = self.brackets.get(&key) {
            for (k, c) in coeffs {
                out[*k] = if flip { -c.clone() } else { c.clone() };
            }
        }
        out
    }

    /// Bilinear antisymmetric extension of the structure constants.
    pub fn bracket(&self, u: &[Rat], v: &[Rat]) -> Vec<Rat> {
        assert_eq!(u.len(), self.dim, "bracket arg length");
        assert_eq!(v.len(), self.dim, "bracket arg length");
        let mut out = zero_vec(self.dim);
        for ((i, j), coeffs) in &self.brackets {
            // coefficient of [e_i, e_j] in [u, v] is u_i v_j - u_j v_i
            let w = &u[*i] * &v[*j] - &u[*j] * &v[*i];
            if w.is_zero() {
                continue;
            }
            for (k, c) in coeffs {
                out[*k] += &w * c;
            }
        }
        out
    }

    /// Checks the Jacobi identity exactly on all basis triples, returning the
    /// first failure in lexicographic order.
    pub fn validate(&self) -> Result<(), JacobiFailure> {
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in j + 1..self.dim {
                    let ei = unit_vec(self.dim, i);
                    let ej = unit_vec(self.dim, j);
                    let ek = unit_vec(self.dim, k);
                    let mut res = self.bracket(&ei, &self.bracket(&ej, &ek));
                    for (a, b) in res
                        .iter_mut()
                        .zip(self.bracket(&ej, &self.bracket(&ek, &ei)))
                    {
                        *a += b;
                    }
                    for (a, b) in res
                        .iter_mut()
                        .zip(self.bracket(&ek, &self.bracket(&ei, &ej)))
                    {
                        *a += b;
                    }
                    if !is_zero_vec(&res) {
                        return Err(JacobiFailure {
                            triple: (i, j, k),
                            residual: res,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Matrix of `ad(x)` on the whole algebra in the ambient basis.
    pub fn ad_matrix(&self, x: &[Rat]) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let img = self.bracket(x, &unit_vec(self.dim, j));
            for i in 0..self.dim {
                m[(i, j)] = img[i].clone();
            }
        }
        m
    }

    /// Matrix of `ad(x)` restricted to an invariant subspace, in the
    /// subspace's echelon basis. Errors when the subspace is not invariant.
    pub fn ad_restricted(&self, x: &[Rat], s: &Subspace) -> Result<Matrix, LieError> {
        if x.len() != self.dim {
            return Err(LieError::VectorLength {
                got: x.len(),
                dim: self.dim,
            });
        }
        let r = s.dim();
        let mut m = Matrix::zeros(r, r);
        for (j, b) in s.basis().iter().enumerate() {
            let img = self.bracket(x, b);
            match s.coords_of(&img) {
                Some(coords) => {
                    for i in 0..r {
                        m[(i, j)] = coords[i].clone();
                    }
                }
                None => return Err(LieError::NotInvariant { basis_index: j }),
            }
        }
        Ok(m)
    }

    /// Span of all `[e_i, e_j]` (equals the second term of the lower central
    /// series), as a deterministic echelon basis.
    pub fn derived_subalgebra(&self) -> Subspace {
        let gens = self
            .brackets
            .keys()
            .map(|&(i, j)| self.bracket_basis(i, j))
            .collect();
        Subspace::from_generators(self.dim, gens)
    }

    /// `[L, s]` as a subspace.
    pub fn bracket_subspace(&self, s: &Subspace) -> Subspace {
        let mut gens = Vec::new();
        for i in 0..self.dim {
            let ei = unit_vec(self.dim, i);
            for b in s.basis() {
                gens.push(self.bracket(&ei, b));
            }
        }
        Subspace::from_generators(self.dim, gens)
    }

    pub fn lower_central_series(&self) -> SeriesReport {
        let mut chain = vec![Subspace::full(self.dim)];
        let mut dims = vec![self.dim];
        loop {
            let next = self.bracket_subspace(chain.last().unwrap());
            if &next == chain.last().unwrap() {
                let class = if next.dim() == 0 {
                    // the previous stage was already 0 (abelian of dim 0 edge)
                    NilpotencyClass::Nilpotent(dims.iter().filter(|&&d| d > 0).count())
                } else {
                    NilpotencyClass::NonNilpotent
                };
                return SeriesReport { chain, dims, class };
            }
            dims.push(next.dim());
            chain.push(next.clone());
            if next.dim() == 0 {
                let class = NilpotencyClass::Nilpotent(dims.iter().filter(|&&d| d > 0).count());
                return SeriesReport { chain, dims, class };
            }
        }
    }

    /// Structure constants of a bracket-closed subspace in its echelon basis.
    pub fn subalgebra(&self, s: &Subspace) -> Result<LieAlgebra, LieError> {
        let mut sub = LieAlgebra::new(s.dim());
        for i in 0..s.dim() {
            for j in i + 1..s.dim() {
                let br = self.bracket(&s.basis()[i], &s.basis()[j]);
                let coords = s.coords_of(&br).ok_or(LieError::NotClosed { i, j })?;
                let coeffs: Vec<(usize, Rat)> = coords
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                sub.set_bracket(i, j, coeffs)?;
            }
        }
        Ok(sub)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NilpotencyClass {
    /// s-step nilpotent; 1 means abelian.
    Nilpotent(usize),
    NonNilpotent,
}

impl NilpotencyClass {
    pub fn step(&self) -> Option<usize> {
        match self {
            NilpotencyClass::Nilpotent(s) => Some(*s),
            NilpotencyClass::NonNilpotent => None,
        }
    }
}

/// Lower central series `C¹ = L ⊇ C² = [L, L] ⊇ …` with its dimension
/// profile and nilpotency class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesReport {
    pub chain: Vec<Subspace>,
    pub dims: Vec<usize>,
    pub class: NilpotencyClass,
}

// ---------------------------------------------------------------------------
// stock algebras used across tests and fixtures

/// Heisenberg algebra h3: `[e0, e1] = e2`.
pub fn heisenberg3() -> LieAlgebra {
    let mut l = LieAlgebra::new(3);
    l.set_simple_bracket(0, 1, 2, crate::linalg::rint(1));
    l
}

/// Standard filiform algebra of dimension `d`: `[e0, e_i] = e_{i+1}`
/// for `1 ≤ i ≤ d-2`.
pub fn filiform(d: usize) -> LieAlgebra {
    let mut l = LieAlgebra::new(d);
    for i in 1..d - 1 {
        l.set_simple_bracket(0, i, i + 1, crate::linalg::rint(1));
    }
    l
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, rint};

    #[test]
    fn heisenberg_validates() {
        assert_eq!(heisenberg3().validate(), Ok(()));
    }

    #[test]
    fn jacobi_failure_reported_on_first_triple() {
        // [e0,e1]=e2, [e0,e2]=e0 fails Jacobi with residual e2
        let mut l = LieAlgebra::new(3);
        l.set_simple_bracket(0, 1, 2, rint(1));
        l.set_simple_bracket(0, 2, 0, rint(1));
        let err = l.validate().unwrap_err();
        assert_eq!(err.triple, (0, 1, 2));
        assert_eq!(err.residual, vec![rint(0), rint(0), rint(1)]);
    }

    #[test]
    fn abelian_validates() {
        assert_eq!(LieAlgebra::abelian(4).validate(), Ok(()));
    }

    #[test]
    fn bracket_examples() {
        let l = heisenberg3();
        // [e0 + e2, e1] = e2
        let u = vec![rint(1), rint(0), rint(1)];
        let v = unit_vec(3, 1);
        assert_eq!(l.bracket(&u, &v), vec![rint(0), rint(0), rint(1)]);
        // [v, v] = 0
        assert!(is_zero_vec(&l.bracket(&u, &u)));
        // bilinearity: [2e0, 3e1] = 6e2
        let a = vec![rint(2), rint(0), rint(0)];
        let b = vec![rint(0), rint(3), rint(0)];
        assert_eq!(l.bracket(&a, &b), vec![rint(0), rint(0), rint(6)]);
    }

    #[test]
    fn bracket_index_errors() {
        let mut l = LieAlgebra::new(2);
        assert_eq!(
            l.set_bracket(0, 2, vec![]),
            Err(LieError::IndexOutOfRange { index: 2, dim: 2 })
        );
        assert_eq!(
            l.set_bracket(0, 1, vec![(5, rint(1))]),
            Err(LieError::IndexOutOfRange { index: 5, dim: 2 })
        );
    }

    #[test]
    fn series_heisenberg() {
        let rep = heisenberg3().lower_central_series();
        assert_eq!(rep.dims, vec![3, 1, 0]);
        assert_eq!(rep.class, NilpotencyClass::Nilpotent(2));
    }

    #[test]
    fn series_abelian() {
        let rep = LieAlgebra::abelian(5).lower_central_series();
        assert_eq!(rep.dims, vec![5, 0]);
        assert_eq!(rep.class, NilpotencyClass::Nilpotent(1));
    }

    #[test]
    fn series_filiform4() {
        let rep = filiform(4).lower_central_series();
        assert_eq!(rep.dims, vec![4, 2, 1, 0]);
        assert_eq!(rep.class, NilpotencyClass::Nilpotent(3));
    }

    #[test]
    fn series_non_nilpotent() {
        // [e0, e1] = e1 is solvable, not nilpotent
        let mut l = LieAlgebra::new(2);
        l.set_simple_bracket(0, 1, 1, rint(1));
        let rep = l.lower_central_series();
        assert_eq!(rep.class, NilpotencyClass::NonNilpotent);
    }

    #[test]
    fn derived_subalgebra_examples() {
        assert_eq!(
            heisenberg3().derived_subalgebra().basis(),
            &[unit_vec(3, 2)]
        );
        assert!(LieAlgebra::abelian(3).derived_subalgebra().is_zero());
        let d = filiform(4).derived_subalgebra();
        assert_eq!(d.basis(), &[unit_vec(4, 2), unit_vec(4, 3)]);
    }

    #[test]
    fn ad_restricted_examples() {
        let h = heisenberg3();
        let center = Subspace::from_generators(3, vec![unit_vec(3, 2)]);
        let m = h.ad_restricted(&unit_vec(3, 0), &center).unwrap();
        assert!(m.is_zero());

        let f = filiform(4);
        let derived = f.derived_subalgebra();
        let m = f.ad_restricted(&unit_vec(4, 0), &derived).unwrap();
        assert_eq!(m, Matrix::from_i64(&[&[0, 0], &[1, 0]]));

        let span_e1 = Subspace::from_generators(3, vec![unit_vec(3, 1)]);
        assert_eq!(
            h.ad_restricted(&unit_vec(3, 0), &span_e1),
            Err(LieError::NotInvariant { basis_index: 0 })
        );
    }

    #[test]
    fn ad_on_derived_is_nilpotent_for_nilpotent_algebras() {
        use crate::linalg::nilpotency_index;
        for l in [heisenberg3(), filiform(4), filiform(6)] {
            let d = l.derived_subalgebra();
            for i in 0..l.dim() {
                let m = l.ad_restricted(&unit_vec(l.dim(), i), &d).unwrap();
                assert!(nilpotency_index(&m).unwrap().is_some());
            }
        }
    }

    #[test]
    fn random_jacobi_samples_on_validated_algebra() {
        // bilinear-extension sanity: cyclic sum vanishes on random vectors
        use rand::{Rng, SeedableRng};
        let l = filiform(5);
        assert!(l.validate().is_ok());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let rv = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<Rat> {
                (0..5)
                    .map(|_| rat(rng.gen_range(-3..=3), rng.gen_range(1..=2)))
                    .collect()
            };
            let (u, v, w) = (rv(&mut rng), rv(&mut rng), rv(&mut rng));
            let mut s = l.bracket(&u, &l.bracket(&v, &w));
            for (a, b) in s.iter_mut().zip(l.bracket(&v, &l.bracket(&w, &u))) {
                *a += b;
            }
            for (a, b) in s.iter_mut().zip(l.bracket(&w, &l.bracket(&u, &v))) {
                *a += b;
            }
            assert!(is_zero_vec(&s));
        }
    }

    #[test]
    fn subalgebra_structure_constants() {
        let f = filiform(4);
        let d = f.derived_subalgebra();
        let sub = f.subalgebra(&d).unwrap();
        assert_eq!(sub.dim(), 2);
        assert!(sub.bracket_entries().is_empty()); // derived part is abelian here
    }
}
