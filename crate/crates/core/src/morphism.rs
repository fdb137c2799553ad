//! Graded morphisms between nilpotent Lie algebras and the Jordan-Hölder
//! basis they induce on their image.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::lie::{Covector, NilpotentLieAlgebra, Vector};
use crate::linalg::{EchelonBasis, Matrix};
use crate::scalar::Scalar;

/// Linear map `source → target` given by a `target.dim() × source.dim()` matrix.
#[derive(Clone, Debug)]
pub struct GradedMorphism<S> {
    source: NilpotentLieAlgebra<S>,
    target: NilpotentLieAlgebra<S>,
    matrix: Matrix<S>,
}

/// Outcome of [`GradedMorphism::check`]. Indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismReport {
    /// Source basis vectors whose image is not in the target layer of the same weight.
    pub weight_violations: Vec<usize>,
    /// Source pairs `(a, b)` with `φ([X_a, X_b]) != [φ(X_a), φ(X_b)]`.
    pub bracket_violations: Vec<(usize, usize)>,
    pub rank: usize,
    pub surjective: bool,
}

impl MorphismReport {
    /// Weight and bracket preservation hold (surjectivity is reported separately).
    pub fn is_valid(&self) -> bool {
        self.weight_violations.is_empty() && self.bracket_violations.is_empty()
    }
}

/// Jordan-Hölder basis of the target extracted from the images `Y_i = φ(X_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedBasis {
    /// 1-based source indices `i_1 < ... < i_m` with `Y_{i_1}, ..., Y_{i_m}` a basis of the target.
    pub indices: Vec<usize>,
    /// `u[i - 1] = max{k : i_k <= i}` for `i = 1..=n` (0 when no index qualifies).
    pub u: Vec<usize>,
}

impl InducedBasis {
    /// `σ(k) = i_k`, applied elementwise to a set of 1-based indices.
    pub fn sigma(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        set.iter().map(|&k| self.indices[k - 1]).collect()
    }
}

impl<S: Scalar> GradedMorphism<S> {
    pub fn new(source: NilpotentLieAlgebra<S>, target: NilpotentLieAlgebra<S>, matrix: Matrix<S>) -> Result<Self> {
        if matrix.rows() != target.dim() {
            return Err(Error::DimensionMismatch { expected: target.dim(), found: matrix.rows() });
        }
        if matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch { expected: source.dim(), found: matrix.cols() });
        }
        Ok(GradedMorphism { source, target, matrix })
    }

    /// Builds the morphism from the images of the source basis vectors.
    pub fn from_images(
        source: NilpotentLieAlgebra<S>,
        target: NilpotentLieAlgebra<S>,
        images: &[Vector<S>],
    ) -> Result<Self> {
        if images.len() != source.dim() {
            return Err(Error::DimensionMismatch { expected: source.dim(), found: images.len() });
        }
        for img in images {
            if img.len() != target.dim() {
                return Err(Error::DimensionMismatch { expected: target.dim(), found: img.len() });
            }
        }
        let columns: Vec<Vec<S>> = images.iter().map(|v| v.0.clone()).collect();
        let matrix = Matrix::from_columns(target.dim(), &columns);
        Self::new(source, target, matrix)
    }

    pub fn identity(algebra: &NilpotentLieAlgebra<S>) -> Self {
        GradedMorphism {
            source: algebra.clone(),
            target: algebra.clone(),
            matrix: Matrix::identity(algebra.dim()),
        }
    }

    pub fn source(&self) -> &NilpotentLieAlgebra<S> {
        &self.source
    }

    pub fn target(&self) -> &NilpotentLieAlgebra<S> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    /// Image `φ(X_i)` of a source basis vector.
    pub fn image(&self, i: usize) -> Vector<S> {
        Vector(self.matrix.column(i))
    }

    pub fn apply(&self, v: &Vector<S>) -> Result<Vector<S>> {
        if v.len() != self.source.dim() {
            return Err(Error::DimensionMismatch { expected: self.source.dim(), found: v.len() });
        }
        Ok(Vector(self.matrix.mul_vec(v)))
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }

    /// Basis of the kernel, as source vectors.
    pub fn kernel(&self) -> Vec<Vector<S>> {
        self.matrix.nullspace().into_iter().map(Vector).collect()
    }

    /// Checks weight and bracket preservation on basis vectors, and reports surjectivity.
    pub fn check(&self) -> MorphismReport {
        let n = self.source.dim();
        let mut weight_violations = Vec::new();
        for i in 0..n {
            let img = self.image(i);
            let w = self.source.weight(i);
            if img.iter().enumerate().any(|(k, c)| !c.is_zero() && self.target.weight(k) != w) {
                weight_violations.push(i + 1);
            }
        }
        let images: Vec<Vector<S>> = (0..n).map(|i| self.image(i)).collect();
        let mut bracket_violations = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                let mut lhs = vec![S::zero(); self.target.dim()];
                for (k, c) in self.source.basis_bracket(a, b) {
                    for (l, x) in lhs.iter_mut().enumerate() {
                        *x = x.clone() + c.clone() * self.matrix.get(l, *k).clone();
                    }
                }
                let rhs = self.target.bracket(&images[a], &images[b]).expect("images have target dimension");
                if lhs != rhs.0 {
                    bracket_violations.push((a + 1, b + 1));
                }
            }
        }
        let rank = self.rank();
        MorphismReport { weight_violations, bracket_violations, rank, surjective: rank == self.target.dim() }
    }

    /// Greedy extraction `i_{k+1} = min{i : Y_i ∉ span(Y_{i_1}, ..., Y_{i_k})}` together with `u`.
    pub fn induced_jh_basis(&self) -> Result<InducedBasis> {
        let rank = self.rank();
        if rank != self.target.dim() {
            return Err(Error::NotSurjective { rank, target_dim: self.target.dim() });
        }
        let mut span = EchelonBasis::new(self.target.dim());
        let mut indices = Vec::new();
        let mut u = Vec::with_capacity(self.source.dim());
        for i in 0..self.source.dim() {
            if span.insert(self.matrix.column(i)) {
                indices.push(i + 1);
            }
            u.push(indices.len());
        }
        Ok(InducedBasis { indices, u })
    }

    /// The target algebra re-expressed in the induced basis `Y_{i_1}, ..., Y_{i_m}`.
    pub fn target_in_induced_basis(&self, basis: &InducedBasis) -> Result<NilpotentLieAlgebra<S>> {
        let vectors: Vec<Vector<S>> = basis.indices.iter().map(|&i| self.image(i - 1)).collect();
        let label = format!("{} (induced basis)", self.target.label());
        self.target.rebase(label, &vectors)
    }

    /// Coordinates of a target covector in the dual of the induced basis: `ξ'_k = ξ(Y_{i_k})`.
    pub fn covector_in_induced_basis(&self, basis: &InducedBasis, xi: &Covector<S>) -> Result<Covector<S>> {
        self.check_target_covector(xi)?;
        Ok(Covector(
            basis
                .indices
                .iter()
                .map(|&i| dot(&self.matrix.column(i - 1), xi))
                .collect(),
        ))
    }

    /// Transpose map `ξ ↦ ξ ∘ φ` from the target dual to the source dual.
    pub fn dual_pullback(&self, xi: &Covector<S>) -> Result<Covector<S>> {
        self.check_target_covector(xi)?;
        Ok(Covector(self.matrix.vec_mul(xi)))
    }

    fn check_target_covector(&self, xi: &Covector<S>) -> Result<()> {
        if xi.len() != self.target.dim() {
            return Err(Error::DimensionMismatch { expected: self.target.dim(), found: xi.len() });
        }
        Ok(())
    }
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_ratio(n, 1)
    }

    #[test]
    fn identity_is_valid_and_surjective() {
        let e = catalog::engel::<Rational>();
        let id = GradedMorphism::identity(&e);
        let report = id.check();
        assert!(report.is_valid() && report.surjective);
        let basis = id.induced_jh_basis().unwrap();
        assert_eq!(basis.indices, vec![1, 2, 3, 4]);
        assert_eq!(basis.u, vec![1, 2, 3, 4]);
        let xi = Covector(vec![q(1), q(-2), q(3), q(5)]);
        assert_eq!(id.dual_pullback(&xi).unwrap(), xi);
        assert!(id.dual_pullback(&Covector::zeros(4)).unwrap().is_zero());
    }

    #[test]
    fn engel_center_quotient() {
        let phi = catalog::filiform_center_quotient::<Rational>(1);
        assert_eq!(phi.source().dim(), 4);
        assert_eq!(phi.target().dim(), 3);
        let report = phi.check();
        assert!(report.is_valid() && report.surjective, "{report:?}");
        let basis = phi.induced_jh_basis().unwrap();
        assert_eq!(basis.indices, vec![2, 3, 4]);
        assert_eq!(basis.u, vec![0, 1, 2, 3]);
        // the pullback of a flat-orbit covector of H3 has no V-component
        let pulled = phi.dual_pullback(&Covector(vec![q(1), q(2), q(3)])).unwrap();
        assert_eq!(pulled, Covector(vec![q(0), q(1), q(2), q(3)]));
    }

    #[test]
    fn bracket_and_weight_failures_are_reported() {
        let h = catalog::heisenberg::<Rational>(1);
        // X ↦ Y, Y ↦ Y is weight preserving but kills the bracket on the image side only.
        let images = vec![
            Vector(vec![q(1), q(0), q(0)]),
            Vector(vec![q(0), q(1), q(0)]),
            Vector(vec![q(0), q(1), q(0)]),
        ];
        let phi = GradedMorphism::from_images(h.clone(), h.clone(), &images).unwrap();
        let report = phi.check();
        assert_eq!(report.bracket_violations, vec![(2, 3)]);
        assert!(report.weight_violations.is_empty());
        assert!(!report.surjective);
        assert!(matches!(phi.induced_jh_basis(), Err(Error::NotSurjective { rank: 2, target_dim: 3 })));

        let images = vec![
            Vector(vec![q(0), q(1), q(0)]),
            Vector(vec![q(0), q(1), q(0)]),
            Vector(vec![q(0), q(0), q(1)]),
        ];
        let phi = GradedMorphism::from_images(h.clone(), h, &images).unwrap();
        assert_eq!(phi.check().weight_violations, vec![1]);
    }
}
