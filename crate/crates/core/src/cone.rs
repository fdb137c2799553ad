//! Singular Lie filtrations given by weighted polynomial vector fields, their
//! osculating algebras, and exact Helffer-Nourrigat cone elements obtained as
//! limits along rational curves.
//!
//! A filtration carries a graded basis `g` with a linear map `β : g → X(Q^n)`.
//! By default `g` is the free graded nilpotent algebra on the weighted
//! generators and `β` sends a Lyndon word to the iterated bracket of vector
//! fields given by its standard factorization. A smaller inline algebra may be
//! supplied instead; it is accepted when `β` vanishes on the kernel of the
//! surjection from the free algebra.
//!
//! Curves are parametrized by `s > 0` with base point `x(s)` (polynomial in `s`)
//! and time `t = s^e`, so `Φ(s) = β_{x(s)} ∘ δ_{s^e}`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::free::{free_algebra, morphism_from_generators, FreeAlgebra, WeightedAlphabet};
use crate::lie::{Covector, NilpotentLieAlgebra, Vector};
use crate::linalg::{EchelonBasis, Matrix};
use crate::morphism::GradedMorphism;
use crate::poly::{Laurent, VectorField};
use crate::sample::{rng_for, SparseSampler};
use crate::scalar::Scalar;

/// A weighted generator of the filtration.
#[derive(Clone, Debug)]
pub struct Generator<S> {
    pub field: VectorField<S>,
    pub weight: u32,
}

/// Iterated brackets `X_I` for the Lyndon basis of the free algebra on the generators.
#[derive(Clone, Debug)]
pub struct BracketTable<S> {
    pub free: FreeAlgebra<S>,
    pub fields: Vec<VectorField<S>>,
}

/// `X_I` for every Lyndon word `I` of weight `<= depth`, in the free algebra's basis order.
pub fn build_bracket_table<S: Scalar>(generators: &[Generator<S>], depth: u32) -> Result<BracketTable<S>> {
    let alphabet = WeightedAlphabet::new(generators.iter().map(|g| g.weight).collect())?;
    let free = free_algebra::<S>(&alphabet, depth)?;
    let n = free.algebra().dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| free.words()[i].len());
    let mut fields: Vec<Option<VectorField<S>>> = vec![None; n];
    for i in order {
        let field = match free.factor_indices(i) {
            None => generators[free.words()[i][0]].field.clone(),
            Some((a, b)) => {
                let left = fields[a].as_ref().expect("shorter words come first");
                let right = fields[b].as_ref().expect("shorter words come first");
                left.bracket(right)
            }
        };
        fields[i] = Some(field);
    }
    Ok(BracketTable { free, fields: fields.into_iter().map(|f| f.expect("all words visited")).collect() })
}

/// How the graded basis was specified.
#[derive(Clone, Debug)]
pub enum BasisSpec<S> {
    Free,
    /// An algebra and, for each generator, the 0-based index of the basis vector it maps to.
    Inline { algebra: NilpotentLieAlgebra<S>, names: Vec<String>, generators: Vec<usize> },
}

/// The graded algebra `g` with `β(e_a)` for each basis vector.
#[derive(Clone, Debug)]
pub struct GradedBasis<S> {
    algebra: NilpotentLieAlgebra<S>,
    names: Vec<String>,
    fields: Vec<VectorField<S>>,
    inline: bool,
}

impl<S: Scalar> GradedBasis<S> {
    pub fn algebra(&self) -> &NilpotentLieAlgebra<S> {
        &self.algebra
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// `β(e_a)`.
    pub fn fields(&self) -> &[VectorField<S>] {
        &self.fields
    }

    pub fn is_inline(&self) -> bool {
        self.inline
    }
}

/// A finitely generated singular Lie filtration on `Q^n`.
#[derive(Clone, Debug)]
pub struct SingularFiltration<S> {
    label: String,
    variables: Vec<String>,
    depth: u32,
    generators: Vec<Generator<S>>,
    table: BracketTable<S>,
    basis: GradedBasis<S>,
}

/// Per-weight comparison of fiber ranks with generic ranks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regularity {
    pub fiber_ranks: Vec<usize>,
    pub generic_ranks: Vec<usize>,
    pub per_weight: Vec<bool>,
    pub regular: bool,
}

/// `gr_x(F)` with the surjection `gr(β)_x : g → gr_x(F)`.
#[derive(Clone, Debug)]
pub struct OsculatingAlgebra<S> {
    pub algebra: NilpotentLieAlgebra<S>,
    pub morphism: GradedMorphism<S>,
    /// 0-based basis index in `g` of the representative of each basis vector of `gr_x(F)`.
    pub representatives: Vec<usize>,
    /// Names of the representatives.
    pub names: Vec<String>,
}

/// A subspace of `g*` in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspacePoint<S> {
    basis: Matrix<S>,
}

impl<S: Scalar> SubspacePoint<S> {
    /// Row space of the given vectors.
    pub fn span(ambient: usize, rows: Vec<Vec<S>>) -> Self {
        let m = Matrix::from_rows(ambient, rows);
        let (r, pivots) = m.rref();
        let rows = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        SubspacePoint { basis: Matrix::from_rows(ambient, rows) }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<S> {
        &self.basis
    }

    pub fn contains(&self, v: &[S]) -> bool {
        let mut e = EchelonBasis::new(self.ambient_dim());
        for r in self.basis.row_vecs() {
            e.insert(r);
        }
        e.contains(v)
    }
}

/// Base curve `x(s)`, time `t = s^e`, and optionally a covector curve `ξ(s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCurve<S> {
    pub base: Vec<Laurent<S>>,
    pub time_exponent: u32,
    pub covector: Option<Vec<Laurent<S>>>,
}

impl<S: Scalar> RationalCurve<S> {
    /// The straight line `x0 + s v` with time `t = s`.
    pub fn line(x0: &[S], direction: &[S]) -> Self {
        let base = x0
            .iter()
            .zip(direction)
            .map(|(a, v)| Laurent::constant(a.clone()).add(&Laurent::monomial(v.clone(), 1)))
            .collect();
        RationalCurve { base, time_exponent: 1, covector: None }
    }

    pub fn constant(x0: &[S]) -> Self {
        RationalCurve { base: x0.iter().map(|a| Laurent::constant(a.clone())).collect(), time_exponent: 1, covector: None }
    }

    pub fn with_covector(mut self, covector: Vec<Laurent<S>>) -> Self {
        self.covector = Some(covector);
        self
    }

    pub fn base_point(&self) -> Vec<S> {
        self.base.iter().map(|p| p.coeff(0)).collect()
    }

    /// The same curve run `μ` times faster, `s ↦ μ s`.
    pub fn rescaled(&self, mu: &S) -> Self {
        RationalCurve {
            base: self.base.iter().map(|p| p.rescale(mu)).collect(),
            time_exponent: self.time_exponent,
            covector: self.covector.as_ref().map(|c| c.iter().map(|p| p.rescale(mu)).collect()),
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.base.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.base.len() });
        }
        if self.time_exponent == 0 {
            return Err(Error::DegenerateCurve("time exponent must be positive".into()));
        }
        if self.base.iter().any(|p| p.valuation().is_some_and(|v| v < 0)) {
            return Err(Error::DegenerateCurve("base curve must be defined at s = 0".into()));
        }
        if let Some(c) = &self.covector {
            if c.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: c.len() });
            }
        }
        Ok(())
    }
}

/// Limit of `im(ᵗΦ(s))` as `s → 0+`, with the data needed to build witnesses.
#[derive(Clone, Debug)]
pub struct CurveLimit<S> {
    pub subspace: SubspacePoint<S>,
    /// Leading coefficient vectors, a basis of the limit.
    pub leading: Vec<Vec<S>>,
    /// Valuation of each adapted row.
    pub valuations: Vec<i32>,
    /// Each adapted row as a combination of the rows of `Φ(s)` (a covector curve on `Q^n`).
    pub transforms: Vec<Vec<Laurent<S>>>,
}

impl<S: Scalar> CurveLimit<S> {
    /// `ξ(s) = Σ c_i s^{-v_i} A_i`, whose image converges to `Σ c_i leading_i`.
    pub fn witness(&self, c: &[S]) -> Vec<Laurent<S>> {
        let n = self.transforms.first().map_or(0, Vec::len);
        let mut xi = vec![Laurent::zero(); n];
        for ((ci, v), a) in c.iter().zip(&self.valuations).zip(&self.transforms) {
            for (x, ak) in xi.iter_mut().zip(a) {
                *x = x.add(&ak.shift(-v).scale(ci));
            }
        }
        xi
    }

    pub fn combine(&self, c: &[S]) -> Vec<S> {
        let dim = self.subspace.ambient_dim();
        let mut out = vec![S::zero(); dim];
        for (ci, row) in c.iter().zip(&self.leading) {
            for (o, x) in out.iter_mut().zip(row) {
                *o = o.clone() + ci.clone() * x.clone();
            }
        }
        out
    }
}

/// Settings for [`SingularFiltration::cone_sample`].
#[derive(Clone, Debug)]
pub struct ConeConfig {
    pub budget: usize,
    pub degree_bound: u32,
    /// Largest allowed pole order of a witness covector curve; `None` means the default `max_time_exponent * depth`.
    pub pole_bound: Option<u32>,
    pub max_time_exponent: u32,
    pub seed: u64,
}

impl Default for ConeConfig {
    fn default() -> Self {
        ConeConfig { budget: 64, degree_bound: 3, pole_bound: None, max_time_exponent: 6, seed: 0 }
    }
}

/// A certified cone element with its witness curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSample<S> {
    pub covector: Covector<S>,
    pub witness: RationalCurve<S>,
}

const GENERIC_RANK_POINTS: u64 = 8;

impl<S: Scalar> SingularFiltration<S> {
    pub fn new(
        label: impl Into<String>,
        variables: Vec<String>,
        depth: u32,
        generators: Vec<Generator<S>>,
        spec: BasisSpec<S>,
    ) -> Result<Self> {
        let n = variables.len();
        if generators.is_empty() {
            return Err(Error::InvalidFiltration("no generators".into()));
        }
        for (k, g) in generators.iter().enumerate() {
            if g.field.dim() != n {
                return Err(Error::InvalidFiltration(format!(
                    "generator {} has {} components, expected {n}",
                    k + 1,
                    g.field.dim()
                )));
            }
            if g.weight == 0 || g.weight > depth {
                return Err(Error::InvalidFiltration(format!("generator {} has weight {} outside 1..={depth}", k + 1, g.weight)));
            }
        }
        let table = build_bracket_table(&generators, depth)?;
        let basis = match spec {
            BasisSpec::Free => GradedBasis {
                algebra: table.free.algebra().clone(),
                names: table.free.word_strings(),
                fields: table.fields.clone(),
                inline: false,
            },
            BasisSpec::Inline { algebra, names, generators: gens } => inline_basis(&table, algebra, names, &gens, depth)?,
        };
        Ok(SingularFiltration { label: label.into(), variables, depth, generators, table, basis })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn ambient_dim(&self) -> usize {
        self.variables.len()
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn generators(&self) -> &[Generator<S>] {
        &self.generators
    }

    pub fn bracket_table(&self) -> &BracketTable<S> {
        &self.table
    }

    pub fn basis(&self) -> &GradedBasis<S> {
        &self.basis
    }

    pub fn algebra(&self) -> &NilpotentLieAlgebra<S> {
        &self.basis.algebra
    }

    fn check_point(&self, x: &[S]) -> Result<()> {
        if x.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), found: x.len() });
        }
        Ok(())
    }

    /// Rank of the fields `β(e_a)` of weight `<= j` evaluated at `x`.
    pub fn fiber_rank(&self, j: u32, x: &[S]) -> Result<usize> {
        self.check_point(x)?;
        let g = self.algebra();
        let columns: Vec<Vec<S>> =
            (0..g.dim()).filter(|&a| g.weight(a) <= j).map(|a| self.basis.fields[a].eval(x)).collect();
        if columns.is_empty() {
            return Ok(0);
        }
        Ok(Matrix::from_columns(self.ambient_dim(), &columns).rank())
    }

    /// Whether the filtration reaches the full tangent space at `x`.
    pub fn hormander_at(&self, x: &[S]) -> Result<bool> {
        Ok(self.fiber_rank(self.depth, x)? == self.ambient_dim())
    }

    /// Generic fiber ranks for `j = 1..=depth`: the largest rank over a fixed set of seeded rational points.
    pub fn generic_ranks(&self) -> Vec<usize> {
        let sampler = SparseSampler { zero_densities: vec![0.0], max_numerator: 97, max_denominator: 13 };
        let mut rng = rng_for(0x5eed, 0);
        let points: Vec<Vec<S>> =
            (0..GENERIC_RANK_POINTS).map(|_| sampler.vector(&mut rng, self.ambient_dim())).collect();
        (1..=self.depth)
            .map(|j| points.iter().map(|p| self.fiber_rank(j, p).expect("point has ambient dimension")).max().unwrap_or(0))
            .collect()
    }

    pub fn is_regular(&self, x: &[S]) -> Result<Regularity> {
        let fiber_ranks = (1..=self.depth).map(|j| self.fiber_rank(j, x)).collect::<Result<Vec<_>>>()?;
        let generic_ranks = self.generic_ranks();
        let per_weight: Vec<bool> = fiber_ranks.iter().zip(&generic_ranks).map(|(a, b)| a == b).collect();
        let regular = per_weight.iter().all(|&b| b);
        Ok(Regularity { fiber_ranks, generic_ranks, per_weight, regular })
    }

    /// `gr_x(F) = ⊕_j F^j / (F^{j-1} + I_x F^j)` computed from module fibers.
    ///
    /// With `u = x' - x`, the kernel of `g_j → gr_j` is bracketed from both sides.
    /// Polynomial identities with multipliers `u^α`, `|α| <= D`, give a lower bound;
    /// the same test on jets modulo `I_x^K` gives an upper bound for every `K`.
    /// `D` grows from 0 until the two agree, failing with [`Error::Undetermined`]
    /// past `degree_cap`; `K = D + 2` is refreshed whenever `D + 1` is a power of two.
    pub fn osculating_algebra(&self, x: &[S], degree_cap: u32) -> Result<OsculatingAlgebra<S>> {
        self.check_point(x)?;
        let g = self.algebra().clone();
        let dim = g.dim();
        let shifted: Vec<VectorField<S>> = self.basis.fields.iter().map(|f| f.shift(x)).collect();
        let depth = self.depth;

        // kernel of g_j → gr_j, as vectors in g
        let mut kernels: BTreeMap<u32, Vec<Vec<S>>> = BTreeMap::new();
        for j in 1..=depth {
            let layer = g.layer(j);
            let mut certified = None;
            let mut upper = usize::MAX;
            for d in 0..=degree_cap {
                if (d + 1).is_power_of_two() {
                    upper = upper.min(fiber_relations(&g, &shifted, j, d + 1, Some(d + 2)).len());
                }
                let lower = fiber_relations(&g, &shifted, j, d, None);
                if lower.len() == upper {
                    certified = Some(lower);
                    break;
                }
            }
            let relations = certified.ok_or(Error::Undetermined { weight: j, bound: degree_cap })?;
            let mut basis = EchelonBasis::new(dim);
            for rel in relations {
                let mut v = vec![S::zero(); dim];
                for (c, &a) in rel.into_iter().zip(&layer) {
                    v[a] = c;
                }
                basis.insert(v);
            }
            kernels.insert(j, basis.rows().map(|r| r.to_vec()).collect());
        }

        // representatives: greedy in basis order
        let mut representatives = Vec::new();
        let mut spans: BTreeMap<u32, EchelonBasis<S>> = BTreeMap::new();
        for j in 1..=depth {
            let mut e = EchelonBasis::new(dim);
            for k in &kernels[&j] {
                e.insert(k.clone());
            }
            for &a in &g.layer(j) {
                if e.insert(Vector::<S>::unit(dim, a).0) {
                    representatives.push(a);
                }
            }
            spans.insert(j, e);
        }
        representatives.sort();
        let weights: Vec<u32> = representatives.iter().map(|&a| g.weight(a)).collect();
        let quotient_dim = representatives.len();

        let project = |v: &[S], j: u32| -> Result<Vec<S>> {
            let reps: Vec<usize> = (0..quotient_dim).filter(|&k| weights[k] == j).collect();
            let mut columns: Vec<Vec<S>> = reps.iter().map(|&k| Vector::<S>::unit(dim, representatives[k]).0).collect();
            columns.extend(kernels[&j].iter().cloned());
            let m = Matrix::from_columns(dim, &columns);
            let sol = m.solve(v).ok_or_else(|| {
                Error::InconsistentBracket(format!("vector of weight {j} is not in the span of representatives and kernel"))
            })?;
            let mut out = vec![S::zero(); quotient_dim];
            for (i, &k) in reps.iter().enumerate() {
                out[k] = sol[i].clone();
            }
            Ok(out)
        };

        // K must be an ideal for the bracket of g to descend
        for j in 1..=depth {
            for k in &kernels[&j] {
                for a in 0..dim {
                    let w = j + g.weight(a);
                    if w > depth {
                        continue;
                    }
                    let br = g.bracket(&Vector::unit(dim, a), &Vector(k.clone()))?;
                    if !spans[&w].contains(&br) || !project(&br, w)?.iter().all(|c| c.is_zero()) {
                        return Err(Error::InconsistentBracket(format!(
                            "the kernel of weight {j} is not an ideal (bracket with basis vector {})",
                            a + 1
                        )));
                    }
                }
            }
        }

        let mut entries = Vec::new();
        for p in 0..quotient_dim {
            for q in (p + 1)..quotient_dim {
                let w = weights[p] + weights[q];
                if w > depth {
                    continue;
                }
                let br = g.bracket(&Vector::unit(dim, representatives[p]), &Vector::unit(dim, representatives[q]))?;
                for (k, c) in project(&br, w)?.into_iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((p, q, k, c));
                    }
                }
            }
        }
        let point: Vec<String> = x.iter().map(|c| c.to_string()).collect();
        let label = format!("gr({}) at ({})", self.label, point.join(", "));
        let algebra = NilpotentLieAlgebra::new(label, weights.clone(), entries)
            .map_err(|e| Error::InconsistentBracket(format!("induced structure constants are invalid: {e}")))?;
        let mut images = Vec::with_capacity(dim);
        for a in 0..dim {
            images.push(Vector(project(&Vector::<S>::unit(dim, a).0, g.weight(a))?));
        }
        let morphism = GradedMorphism::from_images(g, algebra.clone(), &images)?;
        let names = representatives.iter().map(|&a| self.basis.names[a].clone()).collect();
        Ok(OsculatingAlgebra { algebra, morphism, representatives, names })
    }

    /// `Φ(x, t)`: column `a` is `t^{wt(a)} β(e_a)(x)`.
    pub fn phi_matrix(&self, x: &[S], t: &S) -> Result<Matrix<S>> {
        self.check_point(x)?;
        let g = self.algebra();
        let columns: Vec<Vec<S>> = (0..g.dim())
            .map(|a| {
                let scale = t.pow_u32(g.weight(a));
                self.basis.fields[a].eval(x).into_iter().map(|c| c * scale.clone()).collect()
            })
            .collect();
        Ok(Matrix::from_columns(self.ambient_dim(), &columns))
    }

    /// `im(ᵗΦ(x, t)) ⊂ g*`, the row space of `Φ(x, t)`.
    pub fn image_dual_subspace(&self, x: &[S], t: &S) -> Result<SubspacePoint<S>> {
        if !t.is_positive() {
            return Err(Error::DegenerateCurve("time parameter must be positive".into()));
        }
        let phi = self.phi_matrix(x, t)?;
        Ok(SubspacePoint::span(phi.cols(), phi.row_vecs()))
    }

    /// `Φ(s)` along a curve: entry `(k, a)` is `s^{e wt(a)} β(e_a)_k(x(s))`.
    pub fn phi_along(&self, curve: &RationalCurve<S>) -> Result<Vec<Vec<Laurent<S>>>> {
        curve.check(self.ambient_dim())?;
        let g = self.algebra();
        let columns: Vec<Vec<Laurent<S>>> = (0..g.dim())
            .map(|a| {
                let shift = (curve.time_exponent * g.weight(a)) as i32;
                self.basis.fields[a].compose(&curve.base).into_iter().map(|p| p.shift(shift)).collect()
            })
            .collect();
        Ok((0..self.ambient_dim()).map(|k| columns.iter().map(|c| c[k].clone()).collect()).collect())
    }

    /// Grassmannian limit of `im(ᵗΦ(s))` as `s → 0+`.
    ///
    /// Rows of `Φ(s)` independent over `Q(s)` are kept; then, while the lowest-order
    /// coefficient vectors are dependent, the row of largest valuation in a
    /// dependency is replaced by the combination that cancels its lowest term.
    pub fn limit_subspace(&self, curve: &RationalCurve<S>) -> Result<CurveLimit<S>> {
        let rows = self.phi_along(curve)?;
        let n = self.ambient_dim();
        let dim = self.algebra().dim();
        let mut kept: Vec<Vec<Laurent<S>>> = Vec::new();
        let mut transforms: Vec<Vec<Laurent<S>>> = Vec::new();
        for (k, row) in rows.into_iter().enumerate() {
            let mut candidate = kept.clone();
            candidate.push(row.clone());
            if laurent_rank(&candidate) > kept.len() {
                kept.push(row);
                let mut a = vec![Laurent::zero(); n];
                a[k] = Laurent::one();
                transforms.push(a);
            }
        }
        if kept.is_empty() {
            return Err(Error::DegenerateCurve("Φ vanishes identically along the curve".into()));
        }
        let valuation = |row: &[Laurent<S>]| row.iter().filter_map(Laurent::valuation).min().expect("row is non-zero");
        let leading = |row: &[Laurent<S>], v: i32| row.iter().map(|p| p.coeff(v)).collect::<Vec<S>>();
        for _ in 0..10_000 {
            let vals: Vec<i32> = kept.iter().map(|r| valuation(r)).collect();
            let lcs: Vec<Vec<S>> = kept.iter().zip(&vals).map(|(r, &v)| leading(r, v)).collect();
            let relation = Matrix::from_columns(dim, &lcs).nullspace().into_iter().next();
            let Some(a) = relation else {
                return Ok(CurveLimit { subspace: SubspacePoint::span(dim, lcs.clone()), leading: lcs, valuations: vals, transforms });
            };
            let top = (0..kept.len()).filter(|&i| !a[i].is_zero()).max_by_key(|&i| vals[i]).expect("relation is non-zero");
            let mut row = vec![Laurent::zero(); dim];
            let mut tr = vec![Laurent::zero(); n];
            for i in 0..kept.len() {
                if a[i].is_zero() {
                    continue;
                }
                let shift = vals[top] - vals[i];
                for (r, x) in row.iter_mut().zip(&kept[i]) {
                    *r = r.add(&x.shift(shift).scale(&a[i]));
                }
                for (r, x) in tr.iter_mut().zip(&transforms[i]) {
                    *r = r.add(&x.shift(shift).scale(&a[i]));
                }
            }
            kept[top] = row;
            transforms[top] = tr;
        }
        Err(Error::DegenerateCurve("valuation elimination did not terminate".into()))
    }

    /// `lim_{s→0+} ᵗΦ(s) ξ(s)`, computed exactly as Laurent polynomials.
    pub fn limit_covector(&self, curve: &RationalCurve<S>) -> Result<Covector<S>> {
        let xi = curve
            .covector
            .as_ref()
            .ok_or_else(|| Error::DegenerateCurve("curve has no covector component".into()))?;
        let rows = self.phi_along(curve)?;
        let dim = self.algebra().dim();
        let mut out = Vec::with_capacity(dim);
        for a in 0..dim {
            let value = rows.iter().zip(xi).fold(Laurent::zero(), |acc, (row, x)| acc.add(&row[a].mul(x)));
            if let Some(v) = value.valuation() {
                if v < 0 {
                    return Err(Error::Divergent { component: a + 1, order: -v });
                }
            }
            out.push(value.coeff(0));
        }
        Ok(Covector(out))
    }

    /// Random certified cone elements at `x`. Sound but not complete.
    pub fn cone_sample(&self, x: &[S], config: &ConeConfig) -> Result<Vec<ConeSample<S>>> {
        self.check_point(x)?;
        let sampler = SparseSampler::default();
        let pole_bound = config.pole_bound.unwrap_or(config.max_time_exponent * self.depth) as i32;
        let samples: Vec<Option<ConeSample<S>>> = (0..config.budget)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_for(config.seed, i as u64);
                let time_exponent = rand::Rng::gen_range(&mut rng, 1..=config.max_time_exponent.max(1));
                let base: Vec<Laurent<S>> = x
                    .iter()
                    .map(|x0| {
                        let mut coeffs = vec![x0.clone()];
                        coeffs.extend(sampler.vector::<S, _>(&mut rng, config.degree_bound as usize));
                        Laurent::from_coeffs(coeffs)
                    })
                    .collect();
                let curve = RationalCurve { base, time_exponent, covector: None };
                let limit = self.limit_subspace(&curve).ok()?;
                let c: Vec<S> = sampler.nonzero_vector(&mut rng, limit.leading.len());
                let witness = limit.witness(&c);
                let poles = witness.iter().filter_map(Laurent::valuation).min().unwrap_or(0);
                if -poles > pole_bound {
                    return None;
                }
                let target = Covector(limit.combine(&c));
                let curve = curve.with_covector(witness);
                match self.limit_covector(&curve) {
                    Ok(l) if l == target => Some(ConeSample { covector: l, witness: curve }),
                    _ => None,
                }
            })
            .collect();
        Ok(samples.into_iter().flatten().collect())
    }
}

fn inline_basis<S: Scalar>(
    table: &BracketTable<S>,
    algebra: NilpotentLieAlgebra<S>,
    names: Vec<String>,
    generators: &[usize],
    depth: u32,
) -> Result<GradedBasis<S>> {
    let dim = algebra.dim();
    if names.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: names.len() });
    }
    if algebra.depth() > depth {
        return Err(Error::InvalidFiltration(format!(
            "graded basis has depth {} above the filtration depth {depth}",
            algebra.depth()
        )));
    }
    if generators.len() != table.free.alphabet().len() {
        return Err(Error::DimensionMismatch { expected: table.free.alphabet().len(), found: generators.len() });
    }
    if let Some(&bad) = generators.iter().find(|&&i| i >= dim) {
        return Err(Error::IndexOutOfRange { index: bad, dim });
    }
    let images: Vec<Vector<S>> = generators.iter().map(|&i| Vector::unit(dim, i)).collect();
    let phi = morphism_from_generators(&table.free, &algebra, &images)?;
    let induced = phi.induced_jh_basis().map_err(|_| {
        Error::InvalidFiltration("graded basis is not generated by the images of the generators".into())
    })?;
    for v in phi.kernel() {
        let image = v
            .iter()
            .zip(&table.fields)
            .filter(|(c, _)| !c.is_zero())
            .fold(VectorField::zero(table.fields[0].dim()), |acc, (c, f)| acc.add(&f.scale(c)));
        if !image.is_zero() {
            return Err(Error::InvalidFiltration(
                "bracket relations of the graded basis do not hold for the vector fields".into(),
            ));
        }
    }
    let columns: Vec<Vec<S>> = induced.indices.iter().map(|&i| phi.image(i - 1).0).collect();
    let p = Matrix::from_columns(dim, &columns);
    let mut fields = Vec::with_capacity(dim);
    for a in 0..dim {
        let c = p.solve(&Vector::<S>::unit(dim, a).0).expect("induced vectors form a basis");
        let field = c
            .iter()
            .zip(&induced.indices)
            .filter(|(x, _)| !x.is_zero())
            .fold(VectorField::zero(table.fields[0].dim()), |acc, (x, &i)| acc.add(&table.fields[i - 1].scale(x)));
        fields.push(field);
    }
    Ok(GradedBasis { algebra, names, fields, inline: true })
}

/// Exponent vectors in `n` variables of total degree `<= d`.
fn monomials_up_to(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; n]];
    let mut frontier = out.clone();
    for _ in 0..d {
        let mut next = Vec::new();
        for m in &frontier {
            let last = m.iter().rposition(|&k| k > 0).unwrap_or(0);
            for i in last..n {
                let mut e = m.clone();
                e[i] += 1;
                next.push(e);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Monomial key of a vector field coefficient: degree first, so pivots are leading terms.
type TermKey = (u32, Vec<u32>, usize);

type SparseRow<S> = BTreeMap<TermKey, S>;

fn field_row<S: Scalar>(field: &VectorField<S>, multiplier: &[u32], truncate: Option<u32>) -> SparseRow<S> {
    let mut row = BTreeMap::new();
    for (k, p) in field.components().iter().enumerate() {
        for (e, c) in p.terms() {
            let exps: Vec<u32> = e.iter().zip(multiplier).map(|(a, b)| a + b).collect();
            let degree: u32 = exps.iter().sum();
            if truncate.is_some_and(|t| degree >= t) {
                continue;
            }
            row.insert((degree, exps, k), c.clone());
        }
    }
    row
}

/// Span of sparse rows kept in echelon form by leading (largest) key.
struct SparseSpan<S> {
    pivots: BTreeMap<TermKey, SparseRow<S>>,
}

impl<S: Scalar> SparseSpan<S> {
    fn new() -> Self {
        SparseSpan { pivots: BTreeMap::new() }
    }

    fn eliminate(row: &mut SparseRow<S>, key: &TermKey, pivot: &SparseRow<S>) {
        let factor = row[key].clone() / pivot[key].clone();
        for (k, c) in pivot {
            let entry = row.entry(k.clone()).or_insert_with(S::zero);
            *entry = entry.clone() - factor.clone() * c.clone();
            if entry.is_zero() {
                row.remove(k);
            }
        }
    }

    fn insert(&mut self, mut row: SparseRow<S>) {
        while let Some(key) = row.keys().next_back().cloned() {
            match self.pivots.get(&key) {
                Some(pivot) => Self::eliminate(&mut row, &key, pivot),
                None => {
                    self.pivots.insert(key, row);
                    return;
                }
            }
        }
    }

    /// Unique representative of `row` modulo the span.
    fn normal_form(&self, mut row: SparseRow<S>) -> SparseRow<S> {
        let mut cursor: Option<TermKey> = None;
        loop {
            let next = match &cursor {
                None => row.keys().rev().find(|k| self.pivots.contains_key(*k)).cloned(),
                Some(c) => row.range(..c.clone()).rev().map(|(k, _)| k).find(|k| self.pivots.contains_key(*k)).cloned(),
            };
            let Some(key) = next else { return row };
            Self::eliminate(&mut row, &key, &self.pivots[&key]);
            cursor = Some(key);
        }
    }
}

/// Coefficient vectors `c` on the weight-`j` layer with `Σ c_a β(e_a)` in the span of
/// `u^α β(e_b)` for `wt(b) < j`, `|α| <= bound`, and `wt(b) = j`, `1 <= |α| <= bound`,
/// optionally computed on jets of order `< truncate`.
fn fiber_relations<S: Scalar>(
    g: &NilpotentLieAlgebra<S>,
    shifted: &[VectorField<S>],
    j: u32,
    bound: u32,
    truncate: Option<u32>,
) -> Vec<Vec<S>> {
    let layer = g.layer(j);
    let n = shifted.first().map_or(0, VectorField::dim);
    let monomials = monomials_up_to(n, bound);
    let mut span = SparseSpan::new();
    for b in 0..g.dim() {
        let w = g.weight(b);
        if w > j {
            continue;
        }
        for m in &monomials {
            if w == j && m.iter().all(|&e| e == 0) {
                continue;
            }
            if truncate.is_some_and(|t| m.iter().sum::<u32>() >= t) {
                continue;
            }
            span.insert(field_row(&shifted[b], m, truncate));
        }
    }
    let zero = vec![0; n];
    let forms: Vec<SparseRow<S>> =
        layer.iter().map(|&a| span.normal_form(field_row(&shifted[a], &zero, truncate))).collect();
    let mut keys: BTreeMap<&TermKey, usize> = BTreeMap::new();
    for f in &forms {
        for k in f.keys() {
            let next = keys.len();
            keys.entry(k).or_insert(next);
        }
    }
    if keys.is_empty() {
        return (0..layer.len()).map(|i| Vector::<S>::unit(layer.len(), i).0).collect();
    }
    let columns: Vec<Vec<S>> = forms
        .iter()
        .map(|f| {
            let mut col = vec![S::zero(); keys.len()];
            for (k, c) in f {
                col[keys[k]] = c.clone();
            }
            col
        })
        .collect();
    Matrix::from_columns(keys.len(), &columns).nullspace()
}

/// Rank over `Q(s)` by fraction-free elimination.
pub fn laurent_rank<S: Scalar>(rows: &[Vec<Laurent<S>>]) -> usize {
    let mut m: Vec<Vec<Laurent<S>>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = Laurent::one();
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in (rank + 1)..m.len() {
            let factor = m[r][c].clone();
            for k in 0..cols {
                let value = pivot.mul(&m[r][k]).sub(&factor.mul(&m[rank][k]));
                m[r][k] = value.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = pivot;
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}
