//! Graded nilpotent Lie algebras with exact structure constants.
//!
//! Basis vectors are ordered by non-increasing weight (the center-most layer
//! first). With that ordering every leading span `span(X_1, ..., X_j)` is an
//! ideal, so the basis is a Jordan-Hölder basis compatible with the grading.
//!
//! Indices are 0-based in the API; validation reports and jump sets use the
//! 1-based numbering customary for Jordan-Hölder bases.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Coordinates of a Lie algebra element in the basis `X_1, ..., X_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector<S>(pub Vec<S>);

/// Coordinates of a linear form in the dual basis `X_1^*, ..., X_n^*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Covector<S>(pub Vec<S>);

macro_rules! coords_newtype {
    ($t:ident) => {
        impl<S: Scalar> $t<S> {
            pub fn zeros(n: usize) -> Self {
                $t(vec![S::zero(); n])
            }

            /// The `i`-th basis element (0-based).
            pub fn unit(n: usize, i: usize) -> Self {
                let mut v = Self::zeros(n);
                v.0[i] = S::one();
                v
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(|x| x.is_zero())
            }

            pub fn scaled(&self, factor: &S) -> Self {
                $t(self.0.iter().map(|x| x.clone() * factor.clone()).collect())
            }

            pub fn add(&self, other: &Self) -> Self {
                $t(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() + b.clone()).collect())
            }

            pub fn sub(&self, other: &Self) -> Self {
                $t(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() - b.clone()).collect())
            }
        }

        impl<S> Deref for $t<S> {
            type Target = [S];
            fn deref(&self) -> &[S] {
                &self.0
            }
        }

        impl<S> DerefMut for $t<S> {
            fn deref_mut(&mut self) -> &mut [S] {
                &mut self.0
            }
        }

        impl<S> From<Vec<S>> for $t<S> {
            fn from(v: Vec<S>) -> Self {
                $t(v)
            }
        }
    };
}

coords_newtype!(Vector);
coords_newtype!(Covector);

/// One violated identity, with 1-based basis indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    ZeroWeight { index: usize },
    WeightOrder { index: usize },
    IndexOutOfRange { i: usize, j: usize, k: usize },
    Antisymmetry { i: usize, j: usize, k: usize },
    Grading { i: usize, j: usize, k: usize },
    Jacobi { i: usize, j: usize, k: usize, component: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroWeight { index } => write!(f, "weight of X{index} must be positive"),
            Violation::WeightOrder { index } => {
                write!(f, "weights must be non-increasing; X{index} is heavier than its predecessor")
            }
            Violation::IndexOutOfRange { i, j, k } => write!(f, "structure constant ({i},{j},{k}) out of range"),
            Violation::Antisymmetry { i, j, k } => write!(f, "antisymmetry fails at ({i},{j},{k})"),
            Violation::Grading { i, j, k } => write!(f, "grading fails at ({i},{j},{k}): weight(k) != weight(i) + weight(j)"),
            Violation::Jacobi { i, j, k, component } => {
                write!(f, "Jacobi identity fails for ({i},{j},{k}) in component {component}")
            }
        }
    }
}

/// Outcome of [`NilpotentLieAlgebra::validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Sparse bracket entry `(k, c)` meaning `c X_k`.
pub type Term<S> = (usize, S);

/// Finite-dimensional graded nilpotent Lie algebra over `S`.
#[derive(Clone, Debug, PartialEq)]
pub struct NilpotentLieAlgebra<S> {
    label: String,
    weights: Vec<u32>,
    /// `[X_i, X_j]` for every ordered pair with a nonzero bracket.
    table: BTreeMap<(usize, usize), Vec<Term<S>>>,
}

impl<S: Scalar> NilpotentLieAlgebra<S> {
    /// Builds and validates an algebra from brackets `[X_i, X_j] = sum c X_k` given for `i < j`.
    pub fn new<I>(label: impl Into<String>, weights: Vec<u32>, upper: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize, S)>,
    {
        let algebra = Self::from_upper_unchecked(label, weights, upper)?;
        let report = algebra.validate();
        if report.is_valid() {
            Ok(algebra)
        } else {
            Err(Error::InvalidAlgebra(report))
        }
    }

    /// Fills in the antisymmetric partners without checking any invariant.
    pub fn from_upper_unchecked<I>(label: impl Into<String>, weights: Vec<u32>, upper: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize, S)>,
    {
        let n = weights.len();
        let mut raw = Vec::new();
        for (i, j, k, c) in upper {
            if i >= j {
                return Err(Error::Format(format!("bracket entry ({i},{j}) must satisfy i < j")));
            }
            if i >= n || j >= n || k >= n {
                return Err(Error::IndexOutOfRange { index: i.max(j).max(k), dim: n });
            }
            raw.push((j, i, k, -c.clone()));
            raw.push((i, j, k, c));
        }
        Ok(Self::from_raw(label, weights, raw))
    }

    /// Raw structure table; entries for the same `(i, j, k)` are summed. No invariant is checked.
    pub fn from_raw<I>(label: impl Into<String>, weights: Vec<u32>, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, usize, S)>,
    {
        let mut acc: BTreeMap<(usize, usize), BTreeMap<usize, S>> = BTreeMap::new();
        for (i, j, k, c) in entries {
            let slot = acc.entry((i, j)).or_default().entry(k).or_insert_with(S::zero);
            *slot = slot.clone() + c;
        }
        let table = acc
            .into_iter()
            .filter_map(|(key, terms)| {
                let terms: Vec<Term<S>> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                (!terms.is_empty()).then_some((key, terms))
            })
            .collect();
        NilpotentLieAlgebra { label: label.into(), weights, table }
    }

    pub fn abelian(label: impl Into<String>, weights: Vec<u32>) -> Result<Self> {
        Self::new(label, weights, std::iter::empty())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    /// Largest weight (the nilpotency depth bound).
    pub fn depth(&self) -> u32 {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    /// Dimension of each weight layer, indexed by weight `1..=depth`.
    pub fn layer_dims(&self) -> Vec<usize> {
        (1..=self.depth()).map(|w| self.weights.iter().filter(|&&x| x == w).count()).collect()
    }

    /// Indices (0-based) of the basis vectors of the given weight.
    pub fn layer(&self, weight: u32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.weights[i] == weight).collect()
    }

    /// `[X_i, X_j]` as sparse terms.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[Term<S>] {
        self.table.get(&(i, j)).map_or(&[], |v| v.as_slice())
    }

    /// Nonzero brackets `(i, j, k, c)` with `i < j`.
    pub fn upper_entries(&self) -> Vec<(usize, usize, usize, S)> {
        self.table
            .iter()
            .filter(|((i, j), _)| i < j)
            .flat_map(|(&(i, j), terms)| terms.iter().map(move |(k, c)| (i, j, *k, c.clone())))
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.table.is_empty()
    }

    /// Checks antisymmetry, Jacobi, grading and weight ordering.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim();
        let mut violations = Vec::new();
        for (i, &w) in self.weights.iter().enumerate() {
            if w == 0 {
                violations.push(Violation::ZeroWeight { index: i + 1 });
            }
            if i > 0 && w > self.weights[i - 1] {
                violations.push(Violation::WeightOrder { index: i + 1 });
            }
        }
        let mut in_range = true;
        for (&(i, j), terms) in &self.table {
            for (k, _) in terms {
                if i >= n || j >= n || *k >= n {
                    violations.push(Violation::IndexOutOfRange { i: i + 1, j: j + 1, k: k + 1 });
                    in_range = false;
                }
            }
        }
        if !in_range {
            return ValidationReport { violations };
        }
        for &(i, j) in self.table.keys() {
            if i > j {
                continue;
            }
            let forward = self.dense_bracket(i, j);
            let backward = self.dense_bracket(j, i);
            for k in 0..n {
                if !(forward[k].clone() + backward[k].clone()).is_zero() || (i == j && !forward[k].is_zero()) {
                    violations.push(Violation::Antisymmetry { i: i + 1, j: j + 1, k: k + 1 });
                }
            }
        }
        for &(i, j) in self.table.keys() {
            if i < j && !self.table.contains_key(&(j, i)) {
                for (k, _) in self.basis_bracket(i, j) {
                    violations.push(Violation::Antisymmetry { i: i + 1, j: j + 1, k: k + 1 });
                }
            }
        }
        for (&(i, j), terms) in &self.table {
            if i >= j {
                continue;
            }
            for (k, _) in terms {
                if self.weights[*k] != self.weights[i] + self.weights[j] {
                    violations.push(Violation::Grading { i: i + 1, j: j + 1, k: k + 1 });
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let mut total = vec![S::zero(); n];
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for (m, coeff) in self.basis_bracket(b, c) {
                            for (l, inner) in self.basis_bracket(a, *m) {
                                total[*l] = total[*l].clone() + coeff.clone() * inner.clone();
                            }
                        }
                    }
                    for (l, value) in total.iter().enumerate() {
                        if !value.is_zero() {
                            violations.push(Violation::Jacobi { i: i + 1, j: j + 1, k: k + 1, component: l + 1 });
                        }
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    fn dense_bracket(&self, i: usize, j: usize) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim()];
        for (k, c) in self.basis_bracket(i, j) {
            out[*k] = c.clone();
        }
        out
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: len });
        }
        Ok(())
    }

    /// Bilinear bracket `[v, w]`.
    pub fn bracket(&self, v: &Vector<S>, w: &Vector<S>) -> Result<Vector<S>> {
        self.check_len(v.len())?;
        self.check_len(w.len())?;
        let mut out = vec![S::zero(); self.dim()];
        for (&(i, j), terms) in &self.table {
            if v[i].is_zero() || w[j].is_zero() {
                continue;
            }
            let scale = v[i].clone() * w[j].clone();
            for (k, c) in terms {
                out[*k] = out[*k].clone() + scale.clone() * c.clone();
            }
        }
        Ok(Vector(out))
    }

    /// Matrix of `ad_X`: column `k` holds the coordinates of `[X, X_k]`.
    pub fn ad_matrix(&self, x: &Vector<S>) -> Result<Matrix<S>> {
        self.check_len(x.len())?;
        let n = self.dim();
        let mut m = Matrix::<S>::zeros(n, n);
        for (&(i, k), terms) in &self.table {
            if x[i].is_zero() {
                continue;
            }
            for (l, c) in terms {
                let v = m.get(*l, k).clone() + x[i].clone() * c.clone();
                m.set(*l, k, v);
            }
        }
        Ok(m)
    }

    /// `ξ ∘ ad_X`, i.e. the linear form `Y ↦ ξ([X, Y])`.
    pub fn coadjoint_derivative(&self, x: &Vector<S>, xi: &Covector<S>) -> Result<Covector<S>> {
        self.check_len(xi.len())?;
        Ok(Covector(self.ad_matrix(x)?.vec_mul(xi)))
    }

    /// Coadjoint flow `Ad^*_{exp X} ξ = ξ ∘ exp(ad_X)`.
    ///
    /// The exponential series is summed until the nilpotent power vanishes.
    /// The result satisfies `Ad^*_{exp(tX)} Z^* = Z^* + t Y^*` for `[X, Y] = Z`,
    /// and `Ad^*_{exp(-X)}` inverts `Ad^*_{exp X}`.
    pub fn coadjoint_exp(&self, x: &Vector<S>, xi: &Covector<S>) -> Result<Covector<S>> {
        self.check_len(xi.len())?;
        let ad = self.ad_matrix(x)?;
        let mut term = xi.0.clone();
        let mut result = xi.0.clone();
        let mut m = 1usize;
        loop {
            term = ad.vec_mul(&term);
            if term.iter().all(|t| t.is_zero()) {
                break;
            }
            let denom = S::from_count(m);
            for (r, t) in result.iter_mut().zip(term.iter_mut()) {
                *t = t.clone() / denom.clone();
                *r = r.clone() + t.clone();
            }
            m += 1;
            if m > self.dim() + 1 {
                // ad_X is nilpotent of order <= dim; reaching here means the table is not nilpotent.
                break;
            }
        }
        Ok(Covector(result))
    }

    /// Coefficients `c_m` of the polynomial `t ↦ Ad^*_{exp(t X_i)} ξ = Σ_m c_m t^m`.
    pub fn coadjoint_flow_polynomial(&self, index: usize, xi: &Covector<S>) -> Result<Vec<Covector<S>>> {
        if index >= self.dim() {
            return Err(Error::IndexOutOfRange { index, dim: self.dim() });
        }
        self.coadjoint_flow_polynomial_along(&Vector::unit(self.dim(), index), xi)
    }

    /// Coefficients `c_m` of the polynomial `t ↦ Ad^*_{exp(t X)} ξ = Σ_m c_m t^m`.
    pub fn coadjoint_flow_polynomial_along(&self, x: &Vector<S>, xi: &Covector<S>) -> Result<Vec<Covector<S>>> {
        self.check_len(xi.len())?;
        let ad = self.ad_matrix(x)?;
        let mut coeffs = vec![xi.clone()];
        let mut term = xi.0.clone();
        for m in 1..=self.dim() + 1 {
            term = ad.vec_mul(&term);
            if term.iter().all(|t| t.is_zero()) {
                break;
            }
            let denom = S::from_count(m);
            for t in term.iter_mut() {
                *t = t.clone() / denom.clone();
            }
            coeffs.push(Covector(term.clone()));
        }
        Ok(coeffs)
    }

    /// Inhomogeneous dilation `δ_λ`: coordinate `i` scaled by `λ^{ν_i}`.
    pub fn dilate(&self, lambda: &S, v: &Vector<S>) -> Result<Vector<S>> {
        self.check_len(v.len())?;
        Ok(Vector(self.scale_by_weight(lambda, v)?))
    }

    /// Transpose dilation on the dual (`ξ ∘ δ_λ`); same power law on dual coordinates.
    pub fn dilate_dual(&self, lambda: &S, xi: &Covector<S>) -> Result<Covector<S>> {
        self.check_len(xi.len())?;
        Ok(Covector(self.scale_by_weight(lambda, xi)?))
    }

    fn scale_by_weight(&self, lambda: &S, coords: &[S]) -> Result<Vec<S>> {
        if !lambda.is_positive() {
            return Err(Error::NonPositiveDilation);
        }
        Ok(coords.iter().zip(&self.weights).map(|(c, &w)| c.clone() * lambda.pow_u32(w)).collect())
    }

    /// Re-expresses the algebra in a new basis given by column vectors (old coordinates).
    ///
    /// Every new basis vector must be homogeneous and the weights must stay non-increasing.
    pub fn rebase(&self, label: impl Into<String>, basis: &[Vector<S>]) -> Result<Self> {
        let n = self.dim();
        if basis.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: basis.len() });
        }
        let mut weights = Vec::with_capacity(n);
        for (idx, b) in basis.iter().enumerate() {
            self.check_len(b.len())?;
            weights.push(self.homogeneous_weight(b).ok_or_else(|| {
                Error::InvalidBasis(format!("basis vector {} is zero or not homogeneous", idx + 1))
            })?);
        }
        let columns: Vec<Vec<S>> = basis.iter().map(|b| b.0.clone()).collect();
        let change = Matrix::from_columns(n, &columns);
        if change.rank() != n {
            return Err(Error::InvalidBasis("vectors are linearly dependent".into()));
        }
        let mut entries = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                let br = self.bracket(&basis[a], &basis[b])?;
                if br.is_zero() {
                    continue;
                }
                let coords = change.solve(&br).expect("full-rank change of basis");
                for (k, c) in coords.into_iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((a, b, k, c));
                    }
                }
            }
        }
        Self::new(label, weights, entries)
    }

    /// Weight of a nonzero homogeneous vector.
    pub fn homogeneous_weight(&self, v: &[S]) -> Option<u32> {
        let mut weight = None;
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match weight {
                None => weight = Some(self.weights[i]),
                Some(w) if w != self.weights[i] => return None,
                _ => {}
            }
        }
        weight
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn v(xs: &[i64]) -> Vector<Rational> {
        Vector(xs.iter().map(|&x| q(x, 1)).collect())
    }

    fn cv(xs: &[i64]) -> Covector<Rational> {
        Covector(xs.iter().map(|&x| q(x, 1)).collect())
    }

    #[test]
    fn heisenberg_is_valid() {
        let h = catalog::heisenberg::<Rational>(1);
        assert!(h.validate().is_valid());
        assert_eq!(h.weights(), &[2, 1, 1]);
    }

    #[test]
    fn antisymmetry_violation_is_reported() {
        let bad = NilpotentLieAlgebra::from_raw(
            "bad",
            vec![2, 1, 1],
            vec![(0, 1, 2, q(1, 1)), (1, 0, 2, q(1, 1))],
        );
        let report = bad.validate();
        assert!(report.violations.contains(&Violation::Antisymmetry { i: 1, j: 2, k: 3 }));
    }

    #[test]
    fn weight_order_is_enforced() {
        let err = NilpotentLieAlgebra::<Rational>::new("up", vec![1, 1, 2], vec![(0, 1, 2, q(1, 1))]);
        match err {
            Err(Error::InvalidAlgebra(report)) => {
                assert!(report.violations.contains(&Violation::WeightOrder { index: 3 }))
            }
            other => panic!("expected invalid algebra, got {other:?}"),
        }
    }

    #[test]
    fn jacobi_failure_is_reported() {
        // [X3,X4]=X2 and [X2,X5]=X1 break Jacobi on (X3,X4,X5).
        let a = NilpotentLieAlgebra::from_upper_unchecked(
            "broken",
            vec![3, 2, 1, 1, 1],
            vec![(2, 3, 1, q(1, 1)), (1, 4, 0, q(1, 1))],
        )
        .unwrap();
        let report = a.validate();
        assert!(report.violations.contains(&Violation::Jacobi { i: 3, j: 4, k: 5, component: 1 }));
    }

    #[test]
    fn engel_brackets() {
        let e = catalog::engel::<Rational>();
        assert!(e.validate().is_valid());
        // order (V, Z, Y, X)
        assert_eq!(e.bracket(&v(&[0, 0, 0, 1]), &v(&[0, 0, 1, 0])).unwrap(), v(&[0, 1, 0, 0]));
        assert_eq!(e.bracket(&v(&[0, 0, 1, 0]), &v(&[0, 1, 0, 0])).unwrap(), v(&[0, 0, 0, 0]));
        assert!(e.bracket(&v(&[1, 2]), &v(&[1, 2, 3, 4])).is_err());
    }

    #[test]
    fn heisenberg_flow_matches_closed_form() {
        let h = catalog::heisenberg::<Rational>(1);
        let t = q(3, 2);
        // order (Z, Y, X): exp(tX) sends Z* to Z* + t Y*
        let out = h.coadjoint_exp(&Vector(vec![q(0, 1), q(0, 1), t.clone()]), &cv(&[1, 0, 0])).unwrap();
        assert_eq!(out, Covector(vec![q(1, 1), t.clone(), q(0, 1)]));
        let out = h.coadjoint_exp(&Vector(vec![q(0, 1), t.clone(), q(0, 1)]), &cv(&[1, 0, 0])).unwrap();
        assert_eq!(out, Covector(vec![q(1, 1), q(0, 1), -t]));
    }

    #[test]
    fn dilation_law() {
        let h = catalog::heisenberg::<Rational>(1);
        assert_eq!(h.dilate_dual(&q(2, 1), &cv(&[1, 1, 1])).unwrap(), cv(&[4, 2, 2]));
        assert_eq!(h.dilate(&q(1, 1), &v(&[5, 6, 7])).unwrap(), v(&[5, 6, 7]));
        assert!(matches!(h.dilate(&q(0, 1), &v(&[1, 1, 1])), Err(Error::NonPositiveDilation)));
        assert!(matches!(h.dilate(&q(-1, 1), &v(&[1, 1, 1])), Err(Error::NonPositiveDilation)));
    }

    #[test]
    fn rebase_swaps_generators() {
        let h = catalog::heisenberg::<Rational>(1);
        let swapped = h.rebase("h3-swapped", &[v(&[1, 0, 0]), v(&[0, 0, 1]), v(&[0, 1, 0])]).unwrap();
        // order (Z, X, Y): [X, Y] = Z
        assert_eq!(swapped.basis_bracket(1, 2), &[(0, q(1, 1))]);
        assert!(h.rebase("bad", &[v(&[1, 0, 0]), v(&[0, 1, 1]), v(&[0, 1, 0])]).is_ok());
        assert!(h.rebase("bad", &[v(&[1, 1, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]).is_err());
    }
}
