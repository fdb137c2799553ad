//! The bundled corpus of worked examples and a runner that re-derives each
//! expected table from the library.
//!
//! A fixture is either an algebra, whose dual is classified on seeded random
//! points, or a filtration, whose cone fibers are sampled and stratified at the
//! listed base points. Expected values live only in the JSON files.

use std::collections::BTreeSet;
use std::fmt;

use serde::Deserialize;

use crate::cone::ConeConfig;
use crate::error::{Error, Result};
use crate::io::{AlgebraFile, FiltrationFile, ScalarText};
use crate::lie::{Covector, NilpotentLieAlgebra};
use crate::poly::Poly;
use crate::report::{stratify_cone, CompactDimension, ReportConfig, SolvabilitySkeleton};
use crate::sample::random_covectors;
use crate::scalar::Rational;
use crate::stratification::{canonical_representative, classify_points, JumpInvariant};

macro_rules! corpus {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../fixtures/", $name, ".json")))),*]
    };
}

/// `(name, json)` for every bundled fixture.
pub const CORPUS: &[(&str, &str)] = corpus!(
    "abelian",
    "heisenberg-3",
    "heisenberg-5",
    "complex-heisenberg-imaginary-first",
    "complex-heisenberg-real-first",
    "complex-heisenberg-mixed",
    "engel",
    "filiform-1",
    "filiform-2",
    "filiform-3",
    "filiform-4",
    "filiform-5",
    "l6-21",
    "martinet",
    "grushin-1",
    "grushin-2",
    "grushin-3",
    "grushin-4",
    "l6-21-distribution",
    "abelian-semialgebraic",
    "line-three-weights",
);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Ne,
    Ge,
    Le,
    Gt,
    Lt,
}

/// `lhs rel rhs` with polynomial sides.
#[derive(Clone, Debug)]
pub struct Predicate {
    text: String,
    difference: Poly<Rational>,
    relation: Relation,
}

impl Predicate {
    pub fn parse(text: &str, names: &[&str]) -> Result<Self> {
        const OPS: [(&str, Relation); 6] = [
            ("!=", Relation::Ne),
            (">=", Relation::Ge),
            ("<=", Relation::Le),
            ("=", Relation::Eq),
            (">", Relation::Gt),
            ("<", Relation::Lt),
        ];
        let (pos, op, relation) = OPS
            .iter()
            .find_map(|&(op, rel)| text.find(op).map(|p| (p, op, rel)))
            .ok_or_else(|| Error::Format(format!("predicate \"{text}\" has no relation")))?;
        let lhs = Poly::parse(&text[..pos], names)?;
        let rhs = Poly::parse(&text[pos + op.len()..], names)?;
        Ok(Predicate { text: text.to_string(), difference: lhs.sub(&rhs), relation })
    }

    pub fn holds(&self, values: &[Rational]) -> bool {
        let v = self.difference.eval(values);
        let zero = Rational::from_integer(0.into());
        match self.relation {
            Relation::Eq => v == zero,
            Relation::Ne => v != zero,
            Relation::Ge => v >= zero,
            Relation::Le => v <= zero,
            Relation::Gt => v > zero,
            Relation::Lt => v < zero,
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

fn parse_predicates(texts: &[String], names: &[&str]) -> Result<Vec<Predicate>> {
    texts.iter().map(|t| Predicate::parse(t, names)).collect()
}

#[derive(Clone, Debug, Deserialize)]
pub struct Sampling {
    pub count: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct PatternSpec {
    /// 1-based position in the ascending list of strata.
    pub stratum: usize,
    pub predicates: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct CanonicalExample {
    pub point: Vec<ScalarText>,
    pub canonical: Vec<ScalarText>,
}

#[derive(Clone, Debug, Default, Deserialize)]
pub struct AlgebraExpect {
    pub stratum_count: Option<usize>,
    pub coarse_count: Option<usize>,
    pub generic_jump_set: Option<Vec<usize>>,
    #[serde(default)]
    pub canonical_patterns: Vec<PatternSpec>,
    #[serde(default)]
    pub characterizations: Vec<PatternSpec>,
    #[serde(default)]
    pub canonical_examples: Vec<CanonicalExample>,
    pub skeleton_length: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct AlgebraFixture {
    pub name: String,
    pub anchor: String,
    pub algebra: AlgebraFile,
    pub sampling: Sampling,
    #[serde(default)]
    pub expect: AlgebraExpect,
}

#[derive(Clone, Debug, Default, Deserialize)]
pub struct ConeSpec {
    pub budget: Option<usize>,
    pub seed: Option<u64>,
    pub degree_bound: Option<u32>,
    pub pole_bound: Option<u32>,
    pub max_time_exponent: Option<u32>,
}

impl ConeSpec {
    pub fn config(&self) -> ConeConfig {
        let d = ConeConfig::default();
        ConeConfig {
            budget: self.budget.unwrap_or(d.budget),
            degree_bound: self.degree_bound.unwrap_or(d.degree_bound),
            pole_bound: self.pole_bound.or(d.pole_bound),
            max_time_exponent: self.max_time_exponent.unwrap_or(d.max_time_exponent),
            seed: self.seed.unwrap_or(d.seed),
        }
    }
}

/// A stratum named by its position in the sampled strata of `g`, or by its invariant.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum StratumRef {
    Index(usize),
    Invariant(String),
}

#[derive(Clone, Debug, Default, Deserialize)]
pub struct OsculatingExpect {
    pub dim: Option<usize>,
    pub abelian: Option<bool>,
    pub algebra: Option<AlgebraFile>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct FiberExpect {
    pub point: Vec<ScalarText>,
    pub regular: Option<bool>,
    pub osculating: Option<OsculatingExpect>,
    pub realized: Option<Vec<StratumRef>>,
    #[serde(default)]
    pub sample_predicates: Vec<String>,
    #[serde(default)]
    pub canonical_patterns: Vec<PatternSpec>,
}

#[derive(Clone, Debug, Default, Deserialize)]
pub struct FiltrationExpect {
    pub stratum_count: Option<usize>,
    pub skeleton_length: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct FiltrationFixture {
    pub name: String,
    pub anchor: String,
    pub filtration: FiltrationFile,
    /// Names of the dual coordinates used in predicates; defaults to the basis names.
    pub coordinates: Option<Vec<String>>,
    #[serde(default)]
    pub cone: ConeSpec,
    pub strata_sampling: Option<Sampling>,
    pub fibers: Vec<FiberExpect>,
    #[serde(default)]
    pub expect: FiltrationExpect,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Fixture {
    Algebra(AlgebraFixture),
    Filtration(FiltrationFixture),
}

impl Fixture {
    pub fn name(&self) -> &str {
        match self {
            Fixture::Algebra(f) => &f.name,
            Fixture::Filtration(f) => &f.name,
        }
    }

    pub fn anchor(&self) -> &str {
        match self {
            Fixture::Algebra(f) => &f.anchor,
            Fixture::Filtration(f) => &f.anchor,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Fixture::Algebra(_) => "algebra",
            Fixture::Filtration(_) => "filtration",
        }
    }
}

pub fn parse_fixture(text: &str) -> Result<Fixture> {
    serde_json::from_str(text).map_err(|e| Error::Format(format!("line {}, column {}: {e}", e.line(), e.column())))
}

pub fn load(name: &str) -> Result<Fixture> {
    let (_, text) = CORPUS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Format(format!("unknown fixture \"{name}\"")))?;
    parse_fixture(text)
}

pub fn load_all() -> Result<Vec<Fixture>> {
    CORPUS.iter().map(|(_, text)| parse_fixture(text)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct FixtureOutcome {
    pub name: String,
    pub anchor: String,
    pub checks: Vec<Check>,
}

impl FixtureOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    fn equal<T: PartialEq + fmt::Debug>(&mut self, name: impl Into<String>, expected: T, found: T) {
        let passed = expected == found;
        self.push(name, passed, format!("expected {expected:?}, found {found:?}"));
    }
}

fn scalars(values: &[ScalarText], context: &str) -> Result<Vec<Rational>> {
    values.iter().map(|v| v.parse(context)).collect()
}

fn basis_names(file: &AlgebraFile) -> Vec<String> {
    file.names.clone().unwrap_or_else(|| (1..=file.dim).map(|k| format!("X{k}")).collect())
}

/// Checks every predicate on every covector; the detail names the first failure.
fn predicates_hold<'a>(predicates: &[Predicate], covectors: impl IntoIterator<Item = &'a Covector<Rational>>) -> (bool, String) {
    let mut count = 0;
    for xi in covectors {
        count += 1;
        if let Some(p) = predicates.iter().find(|p| !p.holds(xi)) {
            let coords: Vec<String> = xi.iter().map(|c| c.to_string()).collect();
            return (false, format!("\"{p}\" fails at ({})", coords.join(", ")));
        }
    }
    (true, format!("{count} covectors"))
}

fn sampled_strata(algebra: &NilpotentLieAlgebra<Rational>, sampling: &Sampling) -> Result<Vec<JumpInvariant>> {
    let points = random_covectors(algebra.dim(), sampling.count, sampling.seed);
    Ok(classify_points(algebra, &points)?.fine.into_iter().map(|b| b.invariant).collect())
}

fn check_skeleton_flags(checks: &mut Checks, skeleton: &SolvabilitySkeleton<Rational>) {
    let d = skeleton.len();
    let rule = skeleton
        .flags()
        .iter()
        .enumerate()
        .all(|(k, &f)| f == if k + 1 < d { CompactDimension::Infinite } else { CompactDimension::One });
    checks.push("skeleton flags", rule, format!("{:?}", skeleton.flags()));
}

pub fn run_algebra(f: &AlgebraFixture) -> Result<Vec<Check>> {
    let algebra = f.algebra.to_algebra()?;
    let names = basis_names(&f.algebra);
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let points = random_covectors(algebra.dim(), f.sampling.count, f.sampling.seed);
    let cls = classify_points(&algebra, &points)?;
    let strata: Vec<JumpInvariant> = cls.fine.iter().map(|b| b.invariant.clone()).collect();
    let mut checks = Checks::default();
    let e = &f.expect;
    if let Some(n) = e.stratum_count {
        checks.equal("stratum count", n, strata.len());
    }
    if let Some(n) = e.coarse_count {
        checks.equal("coarse stratum count", n, cls.coarse.len());
    }
    if let Some(set) = &e.generic_jump_set {
        let expected: BTreeSet<usize> = set.iter().copied().collect();
        let found = strata.first().map(|s| s.coarse().0.clone()).unwrap_or_default();
        checks.equal("generic jump set", expected, found);
    }
    for p in &e.canonical_patterns {
        let predicates = parse_predicates(&p.predicates, &name_refs)?;
        let Some(bucket) = cls.fine.get(p.stratum - 1) else {
            checks.push(format!("canonical pattern of stratum {}", p.stratum), false, "stratum not found");
            continue;
        };
        let reps = bucket
            .members
            .iter()
            .take(200)
            .map(|xi| canonical_representative(&algebra, xi))
            .collect::<Result<Vec<_>>>()?;
        let (ok, detail) = predicates_hold(&predicates, &reps);
        checks.push(format!("canonical pattern of stratum {}", p.stratum), ok, detail);
    }
    for p in &e.characterizations {
        let predicates = parse_predicates(&p.predicates, &name_refs)?;
        let name = format!("characterization of stratum {}", p.stratum);
        let Some(target) = strata.get(p.stratum - 1) else {
            checks.push(name, false, "stratum not found");
            continue;
        };
        let mut failure = None;
        for bucket in &cls.fine {
            for xi in &bucket.members {
                let inside = bucket.invariant == *target;
                if inside != predicates.iter().all(|q| q.holds(xi)) {
                    failure.get_or_insert_with(|| xi.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "));
                }
            }
        }
        match failure {
            None => checks.push(name, true, format!("{} points", points.len())),
            Some(at) => checks.push(name, false, format!("disagreement at ({at})")),
        }
    }
    for ex in &e.canonical_examples {
        let point = Covector(scalars(&ex.point, "point")?);
        let expected = Covector(scalars(&ex.canonical, "canonical")?);
        let found = canonical_representative(&algebra, &point)?;
        checks.equal("canonical representative", expected, found);
    }
    if let Some(n) = e.skeleton_length {
        let skeleton = SolvabilitySkeleton::from_classification(&algebra, &cls)?;
        checks.equal("skeleton length", n, skeleton.len());
        check_skeleton_flags(&mut checks, &skeleton);
    }
    Ok(checks.0)
}

pub fn run_filtration(f: &FiltrationFixture) -> Result<Vec<Check>> {
    let filtration = f.filtration.to_filtration()?;
    let g = filtration.algebra();
    let coordinates = f.coordinates.clone().unwrap_or_else(|| filtration.basis().names().to_vec());
    if coordinates.len() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: coordinates.len() });
    }
    let names: Vec<&str> = coordinates.iter().map(String::as_str).collect();
    let mut checks = Checks::default();
    let strata = match &f.strata_sampling {
        Some(s) => sampled_strata(g, s)?,
        None => Vec::new(),
    };
    if let Some(n) = f.expect.stratum_count {
        checks.equal("strata of the graded basis", n, strata.len());
    }
    let resolve = |r: &StratumRef| -> Result<String> {
        match r {
            StratumRef::Index(k) => strata
                .get(k.wrapping_sub(1))
                .map(JumpInvariant::to_string)
                .ok_or_else(|| Error::Format(format!("stratum {k} not among the sampled strata"))),
            StratumRef::Invariant(s) => Ok(s.clone()),
        }
    };
    let points = f.fibers.iter().map(|fb| scalars(&fb.point, "point")).collect::<Result<Vec<_>>>()?;
    let config = ReportConfig { cone: f.cone.config(), ..ReportConfig::default() };
    let report = stratify_cone(&filtration, &points, &config)?;
    for (fb, fiber) in f.fibers.iter().zip(&report.fibers) {
        let at = format!("({})", fiber.point.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "));
        if let Some(r) = fb.regular {
            checks.equal(format!("regularity at {at}"), r, fiber.regularity.regular);
        }
        if let Some(check) = &fiber.regular_check {
            checks.push(
                format!("regular fiber is the image of the osculating dual at {at}"),
                check.consistent(),
                format!("in image: {}, realized within reference: {}", check.in_image, check.realized_subset),
            );
        }
        if let Some(o) = &fb.osculating {
            let osc = filtration.osculating_algebra(&fiber.point, config.osculating_cap)?;
            checks.push(
                format!("osculating surjection at {at}"),
                osc.morphism.is_surjective() && osc.morphism.check().is_valid(),
                format!("rank {}", osc.morphism.rank()),
            );
            if let Some(d) = o.dim {
                checks.equal(format!("osculating dimension at {at}"), d, osc.algebra.dim());
            }
            if let Some(a) = o.abelian {
                checks.equal(format!("osculating algebra abelian at {at}"), a, osc.algebra.is_abelian());
            }
            if let Some(file) = &o.algebra {
                let expected = file.to_algebra()?;
                let same = expected.weights() == osc.algebra.weights()
                    && expected.upper_entries() == osc.algebra.upper_entries();
                checks.push(
                    format!("osculating algebra at {at} is {}", expected.label()),
                    same,
                    format!("weights {:?}", osc.algebra.weights()),
                );
            }
        }
        if let Some(refs) = &fb.realized {
            let expected = refs.iter().map(&resolve).collect::<Result<BTreeSet<String>>>()?;
            let found: BTreeSet<String> = fiber.realized().iter().map(JumpInvariant::to_string).collect();
            checks.equal(format!("realized strata at {at}"), expected, found);
        }
        if !fb.sample_predicates.is_empty() {
            let predicates = parse_predicates(&fb.sample_predicates, &names)?;
            let (ok, detail) = predicates_hold(&predicates, fiber.samples.iter().map(|s| &s.covector));
            checks.push(format!("sample predicates at {at}"), ok && !fiber.samples.is_empty(), detail);
        }
        for p in &fb.canonical_patterns {
            let predicates = parse_predicates(&p.predicates, &names)?;
            let target = resolve(&StratumRef::Index(p.stratum))?;
            let name = format!("canonical pattern of stratum {} at {at}", p.stratum);
            match fiber.buckets.iter().find(|b| b.invariant.to_string() == target) {
                Some(b) => {
                    let (ok, detail) = predicates_hold(&predicates, &b.canonical);
                    checks.push(name, ok, detail);
                }
                None => checks.push(name, false, "stratum not realized"),
            }
        }
    }
    if let Some(n) = f.expect.skeleton_length {
        let skeleton = SolvabilitySkeleton::from_report(&report)?;
        checks.equal("skeleton length", n, skeleton.len());
        check_skeleton_flags(&mut checks, &skeleton);
    }
    Ok(checks.0)
}

pub fn run(fixture: &Fixture) -> Result<FixtureOutcome> {
    let checks = match fixture {
        Fixture::Algebra(f) => run_algebra(f)?,
        Fixture::Filtration(f) => run_filtration(f)?,
    };
    Ok(FixtureOutcome { name: fixture.name().to_string(), anchor: fixture.anchor().to_string(), checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_parses_with_neutral_anchors() {
        let all = load_all().unwrap();
        assert_eq!(all.len(), CORPUS.len());
        for (f, (name, _)) in all.iter().zip(CORPUS) {
            assert_eq!(f.name(), *name);
            assert!(!f.anchor().is_empty());
        }
    }

    #[test]
    fn predicates() {
        let p = Predicate::parse("a*c - b^2 = 0", &["a", "b", "c"]).unwrap();
        let q = |v: &[i64]| v.iter().map(|&x| Rational::from_integer(x.into())).collect::<Vec<_>>();
        assert!(p.holds(&q(&[1, 2, 4])));
        assert!(!p.holds(&q(&[1, 2, 3])));
        let p = Predicate::parse("a*b >= 0", &["a", "b"]).unwrap();
        assert!(p.holds(&q(&[0, -3])));
        assert!(!p.holds(&q(&[1, -3])));
        assert!(Predicate::parse("a != 0", &["a"]).unwrap().holds(&q(&[2])));
        assert!(Predicate::parse("a + 1", &["a"]).is_err());
    }

    #[test]
    fn heisenberg_fixture_passes() {
        let outcome = run(&load("heisenberg-3").unwrap()).unwrap();
        assert!(outcome.passed(), "{:?}", outcome.checks);
    }
}
