//! Fine (Pedersen) and coarse (Pukanszky) stratification of the dual of a
//! nilpotent Lie algebra with a fixed Jordan-Hölder basis.
//!
//! For `ξ ∈ g*` the skew form `M(ξ)[a][b] = ξ([X_a, X_b])` determines the
//! numbers `d_{j,i}` (rank of the top-left `j × i` block) and the jump sets
//! `J_i = {j <= i : d_{j,i} = d_{j-1,i} + 1}`. All index sets here are 1-based.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lie::{Covector, NilpotentLieAlgebra, Vector};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// `M(ξ)[a][b] = ξ([X_a, X_b])`.
pub fn skew_matrix<S: Scalar>(algebra: &NilpotentLieAlgebra<S>, xi: &Covector<S>) -> Result<Matrix<S>> {
    let n = algebra.dim();
    if xi.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: xi.len() });
    }
    let mut m = Matrix::zeros(n, n);
    for a in 0..n {
        for b in (a + 1)..n {
            let value = algebra
                .basis_bracket(a, b)
                .iter()
                .fold(S::zero(), |acc, (k, c)| acc + c.clone() * xi[*k].clone());
            if !value.is_zero() {
                m.set(b, a, -value.clone());
                m.set(a, b, value);
            }
        }
    }
    Ok(m)
}

/// The table `d_{j,i}` for `0 <= j, i <= n` (row and column 0 are zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimMatrix {
    d: Vec<Vec<usize>>,
}

/// A failed structural property of a [`DimMatrix`]; indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DimViolation {
    /// `d_{i,j} != d_{j,i}`
    Symmetry { j: usize, i: usize },
    /// `d_{j,i} - d_{j-1,i} ∉ {0, 1}`
    RowStep { j: usize, i: usize },
    /// `d_{j,j} - d_{j-1,j-1} ∉ {0, 2}`
    DiagonalStep { j: usize },
    /// `d_{j,i} = d_{j-1,i}` but `d_{j,k} != d_{j-1,k}` for some `k <= i`
    Propagation { j: usize, i: usize, k: usize },
    /// `d_{i,i} = d_{i-1,i} + 1` does not match `d_{i,i} = d_{i-1,i-1} + 2`
    Coupling { i: usize },
}

impl DimMatrix {
    pub fn from_skew<S: Scalar>(m: &Matrix<S>) -> Self {
        DimMatrix { d: m.leading_ranks() }
    }

    /// Size `n` of the underlying algebra.
    pub fn n(&self) -> usize {
        self.d.len() - 1
    }

    /// `d_{j,i}` for `0 <= j, i <= n`.
    pub fn get(&self, j: usize, i: usize) -> usize {
        self.d[j][i]
    }

    /// Orbit dimension `d_{n,n}`.
    pub fn orbit_dim(&self) -> usize {
        self.d[self.n()][self.n()]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.d
    }

    /// Checks the five structural properties of the table.
    pub fn violations(&self) -> Vec<DimViolation> {
        let n = self.n();
        let d = |j: usize, i: usize| self.d[j][i] as i64;
        let mut out = Vec::new();
        for j in 1..=n {
            for i in 1..=n {
                if d(j, i) != d(i, j) && j < i {
                    out.push(DimViolation::Symmetry { j, i });
                }
                let step = d(j, i) - d(j - 1, i);
                if step != 0 && step != 1 {
                    out.push(DimViolation::RowStep { j, i });
                }
                if step == 0 {
                    if let Some(k) = (1..=i).find(|&k| d(j, k) != d(j - 1, k)) {
                        out.push(DimViolation::Propagation { j, i, k });
                    }
                }
            }
            let diag = d(j, j) - d(j - 1, j - 1);
            if diag != 0 && diag != 2 {
                out.push(DimViolation::DiagonalStep { j });
            }
            if (d(j, j) == d(j - 1, j) + 1) != (d(j, j) == d(j - 1, j - 1) + 2) {
                out.push(DimViolation::Coupling { i: j });
            }
        }
        out
    }
}

/// `d_{j,i}(ξ)`.
pub fn dim_matrix<S: Scalar>(algebra: &NilpotentLieAlgebra<S>, xi: &Covector<S>) -> Result<DimMatrix> {
    Ok(DimMatrix::from_skew(&skew_matrix(algebra, xi)?))
}

/// A subset of `{1, ..., n}` ordered by `I ≺ I' ⇔ min(I \ I') <= min(I' \ I)`, with `min(∅) = +∞`.
///
/// Equivalently the smallest element of the symmetric difference decides: the set
/// containing it comes first. The empty set is the largest element.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct JumpSet(pub BTreeSet<usize>);

impl JumpSet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.contains(&j)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl<const N: usize> From<[usize; N]> for JumpSet {
    fn from(items: [usize; N]) -> Self {
        JumpSet(items.into_iter().collect())
    }
}

impl FromIterator<usize> for JumpSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        JumpSet(iter.into_iter().collect())
    }
}

impl Ord for JumpSet {
    fn cmp(&self, other: &Self) -> Ordering {
        subset_order(&self.0, &other.0)
    }
}

impl PartialOrd for JumpSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for JumpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|j| j.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// The order `≺` on index sets.
pub fn subset_order(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> Ordering {
    let first_a = a.difference(b).next();
    let first_b = b.difference(a).next();
    match (first_a, first_b) {
        (None, None) => Ordering::Equal,
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (Some(x), Some(y)) => x.cmp(y),
    }
}

/// `𝒥(ξ) = (J_n, ..., J_1)`, compared lexicographically with `≺` on each slot.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JumpInvariant {
    /// `sets[0] = J_n`, ..., `sets[n-1] = J_1`.
    sets: Vec<JumpSet>,
}

impl JumpInvariant {
    /// Builds the invariant from `J_1, ..., J_n` in increasing order of `i`.
    pub fn from_ascending(sets: Vec<JumpSet>) -> Self {
        let mut sets = sets;
        sets.reverse();
        JumpInvariant { sets }
    }

    pub fn from_dim_matrix(d: &DimMatrix) -> Self {
        let n = d.n();
        let ascending = (1..=n)
            .map(|i| (1..=i).filter(|&j| d.get(j, i) == d.get(j - 1, i) + 1).collect())
            .collect();
        Self::from_ascending(ascending)
    }

    pub fn n(&self) -> usize {
        self.sets.len()
    }

    /// `J_i` for `1 <= i <= n`.
    pub fn j(&self, i: usize) -> &JumpSet {
        &self.sets[self.sets.len() - i]
    }

    /// The tuple `(J_n, ..., J_1)`.
    pub fn fine(&self) -> &[JumpSet] {
        &self.sets
    }

    /// The coarse invariant `J_n`.
    pub fn coarse(&self) -> &JumpSet {
        &self.sets[0]
    }

    pub fn orbit_dim(&self) -> usize {
        self.coarse().len()
    }

    /// Rebuilds `d_{j,i}`: `|J_i ∩ [1, j]|` for `j <= i`, and by symmetry otherwise.
    pub fn to_dim_matrix(&self) -> DimMatrix {
        let n = self.n();
        let mut d = vec![vec![0; n + 1]; n + 1];
        for (j, row) in d.iter_mut().enumerate().skip(1) {
            for (i, cell) in row.iter_mut().enumerate().skip(1) {
                let (small, big) = if j <= i { (j, i) } else { (i, j) };
                *cell = self.j(big).iter().filter(|&x| x <= small).count();
            }
        }
        DimMatrix { d }
    }
}

impl fmt::Display for JumpInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sets.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Lexicographic comparison of fine invariants.
pub fn invariant_order(a: &JumpInvariant, b: &JumpInvariant) -> Ordering {
    a.cmp(b)
}

pub fn jump_invariant<S: Scalar>(algebra: &NilpotentLieAlgebra<S>, xi: &Covector<S>) -> Result<JumpInvariant> {
    Ok(JumpInvariant::from_dim_matrix(&dim_matrix(algebra, xi)?))
}

/// Points sharing one fine invariant.
#[derive(Clone, Debug)]
pub struct StratumBucket<S> {
    pub invariant: JumpInvariant,
    pub members: Vec<Covector<S>>,
}

impl<S> StratumBucket<S> {
    pub fn orbit_dim(&self) -> usize {
        self.invariant.orbit_dim()
    }
}

/// Points sharing one coarse invariant, with the fine invariants they carry.
#[derive(Clone, Debug)]
pub struct CoarseBucket<S> {
    pub jump_set: JumpSet,
    pub members: Vec<Covector<S>>,
    pub fine: Vec<JumpInvariant>,
}

/// Fine and coarse buckets, each sorted ascending.
#[derive(Clone, Debug)]
pub struct Classification<S> {
    pub fine: Vec<StratumBucket<S>>,
    pub coarse: Vec<CoarseBucket<S>>,
}

/// Groups points by fine and by coarse invariant.
pub fn classify_points<S: Scalar>(
    algebra: &NilpotentLieAlgebra<S>,
    points: &[Covector<S>],
) -> Result<Classification<S>> {
    let invariants: Vec<JumpInvariant> =
        points.par_iter().map(|xi| jump_invariant(algebra, xi)).collect::<Result<_>>()?;
    let mut fine: BTreeMap<JumpInvariant, Vec<Covector<S>>> = BTreeMap::new();
    let mut coarse: BTreeMap<JumpSet, (Vec<Covector<S>>, BTreeSet<JumpInvariant>)> = BTreeMap::new();
    for (xi, inv) in points.iter().zip(invariants) {
        let entry = coarse.entry(inv.coarse().clone()).or_default();
        entry.0.push(xi.clone());
        entry.1.insert(inv.clone());
        fine.entry(inv).or_default().push(xi.clone());
    }
    Ok(Classification {
        fine: fine.into_iter().map(|(invariant, members)| StratumBucket { invariant, members }).collect(),
        coarse: coarse
            .into_iter()
            .map(|(jump_set, (members, fine))| CoarseBucket { jump_set, members, fine: fine.into_iter().collect() })
            .collect(),
    })
}

/// Applies `Ad^*_{exp(t X_i)}` for each `(i, t)` in turn (0-based `i`).
pub fn orbit_point<S: Scalar>(
    algebra: &NilpotentLieAlgebra<S>,
    xi: &Covector<S>,
    flows: &[(usize, S)],
) -> Result<Covector<S>> {
    let n = algebra.dim();
    let mut current = xi.clone();
    for (i, t) in flows {
        if *i >= n {
            return Err(Error::IndexOutOfRange { index: *i, dim: n });
        }
        current = algebra.coadjoint_exp(&Vector::unit(n, *i).scaled(t), &current)?;
    }
    Ok(current)
}

/// The point of the coadjoint orbit of `ξ` whose coordinates at `J_n(ξ)` vanish.
///
/// Jump indices are handled in increasing order. For each one we look for a flow
/// along which that coordinate is a non-constant affine function of the time while
/// the already cleared coordinates stay constant, and move to its root. Basis
/// vectors are tried first, in order; failing those, the first element of the
/// subspace fixing the cleared coordinates to first order that moves the current
/// one. The result is checked to vanish on `J_n` and to keep the invariant;
/// otherwise an error is returned.
pub fn canonical_representative<S: Scalar>(
    algebra: &NilpotentLieAlgebra<S>,
    xi: &Covector<S>,
) -> Result<Covector<S>> {
    let invariant = jump_invariant(algebra, xi)?;
    let n = algebra.dim();
    let mut current = xi.clone();
    let mut cleared: Vec<usize> = Vec::new();
    for j in invariant.coarse().iter() {
        let jj = j - 1;
        if !current[jj].is_zero() {
            let (x, t) = clearing_flow(algebra, &current, jj, &cleared)?.ok_or_else(|| Error::Canonicalization {
                index: j,
                reason: "no flow moves this coordinate affinely while fixing earlier jump coordinates".into(),
            })?;
            current = algebra.coadjoint_exp(&x.scaled(&t), &current)?;
        }
        cleared.push(jj);
    }
    if let Some(j) = invariant.coarse().iter().find(|&j| !current[j - 1].is_zero()) {
        return Err(Error::Canonicalization { index: j, reason: "coordinate did not stay at zero".into() });
    }
    if jump_invariant(algebra, &current)? != invariant {
        return Err(Error::Canonicalization { index: n, reason: "jump invariant changed along the flows".into() });
    }
    Ok(current)
}

/// A direction `X` and time `t` with `(Ad^*_{exp(tX)} ξ)_j = 0` and the cleared coordinates unchanged.
fn clearing_flow<S: Scalar>(
    algebra: &NilpotentLieAlgebra<S>,
    xi: &Covector<S>,
    j: usize,
    cleared: &[usize],
) -> Result<Option<(Vector<S>, S)>> {
    let n = algebra.dim();
    let try_flow = |x: &Vector<S>| -> Result<Option<S>> {
        let coeffs = algebra.coadjoint_flow_polynomial_along(x, xi)?;
        let moving = coeffs.iter().skip(1).any(|c| !c[j].is_zero());
        let affine = coeffs.iter().skip(2).all(|c| c[j].is_zero());
        let keeps_cleared = cleared.iter().all(|&p| coeffs.iter().skip(1).all(|c| c[p].is_zero()));
        Ok((moving && affine && keeps_cleared).then(|| -coeffs[0][j].clone() / coeffs[1][j].clone()))
    };
    for i in 0..n {
        let x = Vector::unit(n, i);
        if let Some(t) = try_flow(&x)? {
            return Ok(Some((x, t)));
        }
    }
    // first-order velocities: column a is d/dt Ad^*_{exp(t X_a)} ξ at t = 0
    let velocities: Vec<Covector<S>> =
        (0..n).map(|a| algebra.coadjoint_derivative(&Vector::unit(n, a), xi)).collect::<Result<_>>()?;
    let constraints = Matrix::from_rows(n, cleared.iter().map(|&p| velocities.iter().map(|v| v[p].clone()).collect()).collect());
    let candidates =
        if cleared.is_empty() { (0..n).map(|a| Vector::<S>::unit(n, a).0).collect() } else { constraints.nullspace() };
    for y in candidates {
        let speed = y.iter().zip(&velocities).fold(S::zero(), |acc, (c, v)| acc + c.clone() * v[j].clone());
        if speed.is_zero() {
            continue;
        }
        let x = Vector(y);
        if let Some(t) = try_flow(&x)? {
            return Ok(Some((x, t)));
        }
    }
    Ok(None)
}

/// Whether two covectors lie on the same coadjoint orbit.
pub fn orbit_equal<S: Scalar>(
    algebra: &NilpotentLieAlgebra<S>,
    xi: &Covector<S>,
    eta: &Covector<S>,
) -> Result<bool> {
    if jump_invariant(algebra, xi)? != jump_invariant(algebra, eta)? {
        return Ok(false);
    }
    Ok(canonical_representative(algebra, xi)? == canonical_representative(algebra, eta)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn cv(xs: &[i64]) -> Covector<Rational> {
        Covector(xs.iter().map(|&x| q(x, 1)).collect())
    }

    fn set(items: &[usize]) -> JumpSet {
        items.iter().copied().collect()
    }

    #[test]
    fn heisenberg_skew_form_and_jumps() {
        let h = catalog::heisenberg::<Rational>(1);
        let xi = cv(&[5, 2, 3]);
        let m = skew_matrix(&h, &xi).unwrap();
        assert_eq!(m.get(1, 2), &q(-5, 1));
        assert_eq!(m.get(2, 1), &q(5, 1));
        assert_eq!(m.get(0, 1), &q(0, 1));
        let d = dim_matrix(&h, &xi).unwrap();
        assert_eq!((d.get(3, 3), d.get(2, 3), d.get(1, 3)), (2, 1, 0));
        let inv = jump_invariant(&h, &xi).unwrap();
        assert_eq!(inv.j(3), &set(&[2, 3]));
        assert!(inv.j(2).is_empty() && inv.j(1).is_empty());
        let zero = jump_invariant(&h, &cv(&[0, 0, 0])).unwrap();
        assert!(zero.fine().iter().all(|s| s.is_empty()));
        assert!(dim_matrix(&h, &cv(&[0, 0, 0])).unwrap().rows().iter().flatten().all(|&x| x == 0));
    }

    #[test]
    fn engel_skew_form() {
        let e = catalog::engel::<Rational>();
        let m = skew_matrix(&e, &cv(&[7, 11, 0, 0])).unwrap();
        assert_eq!(m.get(1, 3), &q(-7, 1));
        assert_eq!(m.get(2, 3), &q(-11, 1));
        assert_eq!(m.get(3, 1), &q(7, 1));
        assert_eq!(jump_invariant(&e, &cv(&[1, 0, 0, 0])).unwrap().coarse(), &set(&[2, 4]));
    }

    #[test]
    fn subset_order_examples() {
        assert_eq!(subset_order(&set(&[2, 3]).0, &set(&[]).0), Ordering::Less);
        assert_eq!(subset_order(&set(&[1, 2]).0, &set(&[1, 3]).0), Ordering::Less);
        assert_eq!(subset_order(&set(&[1, 3]).0, &set(&[1, 3]).0), Ordering::Equal);
        assert_eq!(subset_order(&set(&[3]).0, &set(&[1, 2]).0), Ordering::Greater);
    }

    #[test]
    fn engel_strata_order() {
        let e = catalog::engel::<Rational>();
        let generic = jump_invariant(&e, &cv(&[1, 0, 0, 0])).unwrap();
        let middle = jump_invariant(&e, &cv(&[0, 1, 0, 0])).unwrap();
        let character = jump_invariant(&e, &cv(&[0, 0, 1, 1])).unwrap();
        assert!(generic < middle && middle < character);
        assert_eq!(invariant_order(&generic, &generic), Ordering::Equal);
    }

    #[test]
    fn canonical_forms() {
        let h = catalog::heisenberg::<Rational>(1);
        assert_eq!(canonical_representative(&h, &cv(&[3, 5, -2])).unwrap(), cv(&[3, 0, 0]));
        assert_eq!(canonical_representative(&h, &cv(&[0, 5, -2])).unwrap(), cv(&[0, 5, -2]));
        let e = catalog::engel::<Rational>();
        // (v, z, y, x) = (1, 1, 1, 1)
        let rep = canonical_representative(&e, &cv(&[1, 1, 1, 1])).unwrap();
        assert_eq!(rep, Covector(vec![q(1, 1), q(0, 1), q(1, 2), q(0, 1)]));
        assert!(orbit_equal(&e, &cv(&[1, 1, 1, 1]), &rep).unwrap());
        assert!(!orbit_equal(&h, &cv(&[1, 0, 0]), &cv(&[2, 0, 0])).unwrap());
    }

    #[test]
    fn engel_orbit_parametrization() {
        let e = catalog::engel::<Rational>();
        let (x, y, z, v) = (q(2, 1), q(-1, 3), q(5, 1), q(3, 2));
        let (u, s, t) = (q(1, 2), q(-2, 1), q(7, 5));
        let xi = Covector(vec![v.clone(), z.clone(), y.clone(), x.clone()]);
        // the group element exp(uX) exp(sY) exp(tZ): its rightmost factor acts first
        let out = orbit_point(&e, &xi, &[(1, t.clone()), (2, s.clone()), (3, u.clone())]).unwrap();
        let expected = Covector(vec![
            v.clone(),
            z.clone() + u.clone() * v.clone(),
            y + u.clone() * z.clone() + u.clone() * u * v.clone() / q(2, 1),
            x - t * v - s * z,
        ]);
        assert_eq!(out, expected);
        assert_eq!(orbit_point(&e, &xi, &[]).unwrap(), xi);
    }

    #[test]
    fn filiform_flow() {
        let n = 4;
        let l = catalog::filiform::<Rational>(n);
        // order (Z_4, Z_3, Z_2, Z_1, Z_0, X); Z_k^* has index n - k
        let t = q(3, 2);
        for k in 0..=n {
            let xi = Covector::unit(n + 2, n - k);
            let out = orbit_point(&l, &xi, &[(n + 1, t.clone())]).unwrap();
            for j in 0..=n {
                let expected = if j <= k {
                    t.pow_u32((k - j) as u32) / crate::scalar::factorial::<Rational>(k - j)
                } else {
                    q(0, 1)
                };
                assert_eq!(out[n - j], expected, "k={k} j={j}");
            }
        }
    }

    #[test]
    fn classification_buckets() {
        let h = catalog::heisenberg::<Rational>(1);
        let mut points = Vec::new();
        for a in -1..=1 {
            for b in -1..=1 {
                for c in -1..=1 {
                    points.push(cv(&[a, b, c]));
                }
            }
        }
        let cls = classify_points(&h, &points).unwrap();
        assert_eq!(cls.fine.len(), 2);
        assert_eq!(cls.fine[0].members.len(), 18);
        assert_eq!(cls.fine[0].orbit_dim(), 2);
        assert_eq!(cls.coarse.len(), 2);
        let ab = catalog::abelian::<Rational>(vec![1, 1, 1]);
        assert_eq!(classify_points(&ab, &points).unwrap().fine.len(), 1);
        assert!(classify_points(&ab, &[]).unwrap().fine.is_empty());
    }

    #[test]
    fn invariant_round_trip() {
        let e = catalog::engel::<Rational>();
        for xi in [cv(&[1, 2, 3, 4]), cv(&[0, 1, 0, 3]), cv(&[0, 0, 1, 0])] {
            let d = dim_matrix(&e, &xi).unwrap();
            assert!(d.violations().is_empty());
            assert_eq!(jump_invariant(&e, &xi).unwrap().to_dim_matrix(), d);
        }
    }
}
