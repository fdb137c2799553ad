//! Stratified Helffer-Nourrigat cone reports and the ideal-chain skeleton of the
//! symbol algebra.
//!
//! Cone samples at each base point are sorted into the fine strata of the graded
//! basis `g`, put in canonical form and normalized modulo dilations. The strata
//! met anywhere, listed in ascending order, index a chain of ideals
//! `0 = J_0 ◁ J_1 ◁ ... ◁ J_d` whose subquotients carry compact operators of
//! infinite dimension for `k < d` and of dimension one for `k = d`.

use std::collections::{BTreeMap, BTreeSet};

use crate::cone::{ConeConfig, ConeSample, Regularity, SingularFiltration};
use crate::error::{Error, Result};
use crate::lie::{Covector, NilpotentLieAlgebra};
use crate::linalg::EchelonBasis;
use crate::sample::random_covectors;
use crate::scalar::{lcm_all, Scalar};
use crate::stratification::{canonical_representative, jump_invariant, Classification, JumpInvariant};

pub const REPORT_SCHEMA: &str = "coadstrat-report/1";

/// The `R*_+` class of a nonzero covector.
///
/// With `W = lcm(weights)` the quasi-norm is `Q(ξ) = Σ |ξ_i|^{2W/ν_i}`, homogeneous of
/// degree `2W` under dilations. The class is determined by the signs of the
/// coordinates together with the dilation invariant ratios `|ξ_i|^{2W/ν_i} / Q(ξ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasiNormClass<S> {
    pub ratios: Vec<S>,
    pub signs: Vec<i8>,
}

/// Result of [`quotient_normalize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Normalized<S> {
    /// The dilate with quasi-norm 1.
    Exact(Covector<S>),
    /// The normalizing factor is irrational; only the class is returned.
    Class(QuasiNormClass<S>),
}

impl<S: Scalar> Normalized<S> {
    pub fn class(&self, algebra: &NilpotentLieAlgebra<S>) -> QuasiNormClass<S> {
        match self {
            Normalized::Exact(xi) => quasi_norm_class(algebra, xi).expect("normalized covectors are nonzero"),
            Normalized::Class(c) => c.clone(),
        }
    }
}

/// `Σ |ξ_i|^{2W/ν_i}` together with `W`.
pub fn quasi_norm<S: Scalar>(algebra: &NilpotentLieAlgebra<S>, xi: &Covector<S>) -> Result<(S, u32)> {
    if xi.len() != algebra.dim() {
        return Err(Error::DimensionMismatch { expected: algebra.dim(), found: xi.len() });
    }
    let w = lcm_all(algebra.weights());
    let terms = quasi_norm_terms(algebra, xi, w);
    Ok((terms.into_iter().fold(S::zero(), |a, b| a + b), w))
}

fn quasi_norm_terms<S: Scalar>(algebra: &NilpotentLieAlgebra<S>, xi: &Covector<S>, w: u32) -> Vec<S> {
    xi.iter().zip(algebra.weights()).map(|(c, &nu)| c.abs().pow_u32(2 * w / nu)).collect()
}

pub fn quasi_norm_class<S: Scalar>(algebra: &NilpotentLieAlgebra<S>, xi: &Covector<S>) -> Result<QuasiNormClass<S>> {
    let (q, w) = quasi_norm(algebra, xi)?;
    if q.is_zero() {
        return Err(Error::ZeroCovector);
    }
    let ratios = quasi_norm_terms(algebra, xi, w).into_iter().map(|t| t / q.clone()).collect();
    let signs = xi.iter().map(|c| if c.is_zero() { 0 } else if c.is_positive() { 1 } else { -1 }).collect();
    Ok(QuasiNormClass { ratios, signs })
}

/// The dilate `ᵗδ_λ ξ` of quasi-norm 1, or its class when `λ` is irrational.
pub fn quotient_normalize<S: Scalar>(algebra: &NilpotentLieAlgebra<S>, xi: &Covector<S>) -> Result<Normalized<S>> {
    let (q, w) = quasi_norm(algebra, xi)?;
    if q.is_zero() {
        return Err(Error::ZeroCovector);
    }
    match q.exact_root(2 * w) {
        Some(root) => Ok(Normalized::Exact(algebra.dilate_dual(&(S::one() / root), xi)?)),
        None => Ok(Normalized::Class(quasi_norm_class(algebra, xi)?)),
    }
}

/// Settings for [`stratify_cone`].
#[derive(Clone, Debug)]
pub struct ReportConfig {
    pub cone: ConeConfig,
    /// Cap on the multiplier degree used for osculating algebras.
    pub osculating_cap: u32,
    /// Number of random covectors of `gr_x(F)*` pulled back at regular points.
    pub reference_samples: usize,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig { cone: ConeConfig::default(), osculating_cap: 24, reference_samples: 200 }
    }
}

#[derive(Clone, Debug)]
pub struct FiberBucket<S> {
    pub invariant: JumpInvariant,
    pub count: usize,
    pub canonical: Vec<Covector<S>>,
    /// Normalized canonical representatives; `None` for the zero covector.
    pub normalized: Vec<Option<Normalized<S>>>,
}

/// At a regular point the cone fiber is the image of `gr_x(F)*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularCheck {
    /// Every sample lies in the image of the dual of the osculating surjection.
    pub in_image: bool,
    /// Invariants of pulled back random covectors of `gr_x(F)*`.
    pub reference: BTreeSet<JumpInvariant>,
    pub realized_subset: bool,
    pub equal: bool,
}

impl RegularCheck {
    pub fn consistent(&self) -> bool {
        self.in_image && self.realized_subset
    }
}

#[derive(Clone, Debug)]
pub struct FiberReport<S> {
    pub point: Vec<S>,
    pub regularity: Regularity,
    pub samples: Vec<ConeSample<S>>,
    /// Buckets in ascending invariant order.
    pub buckets: Vec<FiberBucket<S>>,
    pub regular_check: Option<RegularCheck>,
}

impl<S> FiberReport<S> {
    pub fn realized(&self) -> BTreeSet<JumpInvariant> {
        self.buckets.iter().map(|b| b.invariant.clone()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct StratifiedConeReport<S> {
    pub filtration_label: String,
    pub algebra_label: String,
    pub config: ReportConfig,
    pub fibers: Vec<FiberReport<S>>,
    /// Strata met by some fiber, ascending.
    pub strata: Vec<JumpInvariant>,
}

fn bucket_samples<S: Scalar>(algebra: &NilpotentLieAlgebra<S>, covectors: &[Covector<S>]) -> Result<Vec<FiberBucket<S>>> {
    let mut buckets: BTreeMap<JumpInvariant, FiberBucket<S>> = BTreeMap::new();
    for xi in covectors {
        let invariant = jump_invariant(algebra, xi)?;
        let canonical = canonical_representative(algebra, xi)?;
        let normalized = if canonical.is_zero() { None } else { Some(quotient_normalize(algebra, &canonical)?) };
        let bucket = buckets.entry(invariant.clone()).or_insert_with(|| FiberBucket {
            invariant,
            count: 0,
            canonical: Vec::new(),
            normalized: Vec::new(),
        });
        bucket.count += 1;
        if !bucket.canonical.contains(&canonical) {
            bucket.canonical.push(canonical);
            bucket.normalized.push(normalized);
        }
    }
    Ok(buckets.into_values().collect())
}

fn regular_check<S: Scalar>(
    f: &SingularFiltration<S>,
    x: &[S],
    samples: &[ConeSample<S>],
    realized: &BTreeSet<JumpInvariant>,
    config: &ReportConfig,
) -> Result<RegularCheck> {
    let gr = f.osculating_algebra(x, config.osculating_cap)?;
    let g = f.algebra();
    let mut image = EchelonBasis::new(g.dim());
    for k in 0..gr.algebra.dim() {
        image.insert(gr.morphism.dual_pullback(&Covector::unit(gr.algebra.dim(), k))?.0);
    }
    let in_image = samples.iter().all(|s| image.contains(&s.covector));
    let mut reference = BTreeSet::new();
    for eta in random_covectors::<S>(gr.algebra.dim(), config.reference_samples, config.cone.seed) {
        reference.insert(jump_invariant(g, &gr.morphism.dual_pullback(&eta)?)?);
    }
    let realized_subset = realized.is_subset(&reference);
    let equal = *realized == reference;
    Ok(RegularCheck { in_image, reference, realized_subset, equal })
}

/// Samples the cone fiber at each point and stratifies the samples.
pub fn stratify_cone<S: Scalar>(
    f: &SingularFiltration<S>,
    points: &[Vec<S>],
    config: &ReportConfig,
) -> Result<StratifiedConeReport<S>> {
    let g = f.algebra();
    let mut fibers = Vec::with_capacity(points.len());
    let mut strata = BTreeSet::new();
    for x in points {
        let regularity = f.is_regular(x)?;
        let samples = f.cone_sample(x, &config.cone)?;
        let covectors: Vec<Covector<S>> = samples.iter().map(|s| s.covector.clone()).collect();
        let buckets = bucket_samples(g, &covectors)?;
        let fiber = FiberReport { point: x.clone(), regularity, samples, buckets, regular_check: None };
        let realized = fiber.realized();
        let regular_check =
            if fiber.regularity.regular { Some(regular_check(f, x, &fiber.samples, &realized, config)?) } else { None };
        strata.extend(realized);
        fibers.push(FiberReport { regular_check, ..fiber });
    }
    Ok(StratifiedConeReport {
        filtration_label: f.label().to_string(),
        algebra_label: g.label().to_string(),
        config: config.clone(),
        fibers,
        strata: strata.into_iter().collect(),
    })
}

/// Dimension of the algebra of compact operators in a subquotient of the chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompactDimension {
    Infinite,
    One,
}

#[derive(Clone, Debug)]
pub struct SkeletonLink<S> {
    /// 1-based position `k` of the ideal `J_k` in the chain.
    pub index: usize,
    pub stratum: JumpInvariant,
    pub orbit_dim: usize,
    pub sample_count: usize,
    /// Sampled points of `Ω_k / R*_+`, as normalized canonical representatives.
    pub spectrum: Vec<Normalized<S>>,
    pub compact_dimension: CompactDimension,
}

impl<S> SkeletonLink<S> {
    pub fn ideal_label(&self) -> String {
        format!("J_{}", self.index)
    }
}

/// The chain `0 = J_0 ◁ J_1 ◁ ... ◁ J_d` with `J_k / J_{k-1} ≅ C_0(Ω_k / R*_+, K_k)`.
#[derive(Clone, Debug)]
pub struct SolvabilitySkeleton<S> {
    pub algebra_label: String,
    pub links: Vec<SkeletonLink<S>>,
}

impl<S: Scalar> SolvabilitySkeleton<S> {
    fn from_strata(algebra_label: &str, strata: Vec<(JumpInvariant, usize, Vec<Normalized<S>>)>) -> Self {
        let d = strata.len();
        let links = strata
            .into_iter()
            .enumerate()
            .map(|(k, (stratum, sample_count, spectrum))| SkeletonLink {
                index: k + 1,
                orbit_dim: stratum.orbit_dim(),
                stratum,
                sample_count,
                spectrum,
                compact_dimension: if k + 1 < d { CompactDimension::Infinite } else { CompactDimension::One },
            })
            .collect();
        SolvabilitySkeleton { algebra_label: algebra_label.to_string(), links }
    }

    pub fn from_report(report: &StratifiedConeReport<S>) -> Result<Self> {
        if report.fibers.is_empty() {
            return Err(Error::Format("report has no fibers".into()));
        }
        let mut merged: BTreeMap<JumpInvariant, (usize, Vec<Normalized<S>>)> = BTreeMap::new();
        for fiber in &report.fibers {
            for b in &fiber.buckets {
                let entry = merged.entry(b.invariant.clone()).or_default();
                entry.0 += b.count;
                entry.1.extend(b.normalized.iter().flatten().cloned());
            }
        }
        let strata = merged.into_iter().map(|(i, (c, s))| (i, c, s)).collect();
        Ok(Self::from_strata(&report.algebra_label, strata))
    }

    /// The skeleton for the full dual of the algebra, from a classification of sample points.
    pub fn from_classification(algebra: &NilpotentLieAlgebra<S>, classification: &Classification<S>) -> Result<Self> {
        let mut strata = Vec::with_capacity(classification.fine.len());
        for bucket in &classification.fine {
            let mut spectrum = Vec::new();
            for xi in bucket.members.iter().take(8) {
                let rep = canonical_representative(algebra, xi)?;
                if !rep.is_zero() {
                    spectrum.push(quotient_normalize(algebra, &rep)?);
                }
            }
            strata.push((bucket.invariant.clone(), bucket.members.len(), spectrum));
        }
        Ok(Self::from_strata(algebra.label(), strata))
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn flags(&self) -> Vec<CompactDimension> {
        self.links.iter().map(|l| l.compact_dimension).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::sample::random_covectors;
    use crate::scalar::Rational;
    use crate::stratification::classify_points;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn cov(v: &[i64]) -> Covector<Rational> {
        Covector(v.iter().map(|&x| q(x, 1)).collect())
    }

    #[test]
    fn heisenberg_normalization() {
        let h = catalog::heisenberg::<Rational>(1);
        assert_eq!(quotient_normalize(&h, &cov(&[4, 0, 0])).unwrap(), Normalized::Exact(cov(&[1, 0, 0])));
        assert_eq!(quotient_normalize(&h, &cov(&[1, 0, 0])).unwrap(), Normalized::Exact(cov(&[1, 0, 0])));
        assert!(matches!(quotient_normalize(&h, &cov(&[0, 0, 0])), Err(Error::ZeroCovector)));
    }

    #[test]
    fn irrational_normalization_keeps_the_class() {
        let h = catalog::heisenberg::<Rational>(1);
        let xi = cov(&[2, 0, 0]);
        let Normalized::Class(class) = quotient_normalize(&h, &xi).unwrap() else { panic!("2^(1/4) is irrational") };
        let dilated = h.dilate_dual(&q(3, 7), &xi).unwrap();
        assert_eq!(quotient_normalize(&h, &dilated).unwrap(), Normalized::Class(class));
    }

    #[test]
    fn skeleton_flags() {
        let e = catalog::engel::<Rational>();
        let cls = classify_points(&e, &random_covectors(4, 300, 2)).unwrap();
        let sk = SolvabilitySkeleton::from_classification(&e, &cls).unwrap();
        assert_eq!(sk.flags(), vec![CompactDimension::Infinite, CompactDimension::Infinite, CompactDimension::One]);
        assert_eq!(sk.links[2].ideal_label(), "J_3");
    }
}
