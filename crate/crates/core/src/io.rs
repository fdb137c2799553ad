//! JSON formats. Every scalar is written as a `"p/q"` string; integers and
//! finite decimals are also accepted on input.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;
use serde_json::{json, Value};

use crate::cone::{
    BasisSpec, ConeConfig, ConeSample, CurveLimit, Generator, OsculatingAlgebra, RationalCurve, SingularFiltration,
    SubspacePoint,
};
use crate::error::{Error, Result};
use crate::lie::{Covector, NilpotentLieAlgebra};
use crate::linalg::Matrix;
use crate::morphism::MorphismReport;
use crate::poly::{default_names, Laurent, VectorField};
use crate::report::{
    CompactDimension, FiberBucket, Normalized, RegularCheck, SolvabilitySkeleton, StratifiedConeReport, REPORT_SCHEMA,
};
use crate::scalar::{parse_rational, Rational};
use crate::stratification::{canonical_representative, Classification, JumpInvariant};

/// Name of the curve parameter in curve files.
pub const CURVE_VARIABLE: &str = "s";

fn format_error(err: serde_json::Error) -> Error {
    Error::Format(format!("line {}, column {}: {}", err.line(), err.column(), err))
}

/// A scalar given as a string or a JSON number.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Text(String),
    Integer(i64),
}

impl ScalarText {
    pub fn parse(&self, context: &str) -> Result<Rational> {
        match self {
            ScalarText::Text(t) => {
                parse_rational(t).ok_or_else(|| Error::Format(format!("{context}: invalid rational \"{t}\"")))
            }
            ScalarText::Integer(n) => Ok(Rational::from_integer((*n).into())),
        }
    }
}

fn parse_scalars(values: &[ScalarText], context: &str) -> Result<Vec<Rational>> {
    values.iter().enumerate().map(|(i, v)| v.parse(&format!("{context}[{i}]"))).collect()
}

pub fn scalars_json(values: &[Rational]) -> Value {
    Value::Array(values.iter().map(|c| Value::String(c.to_string())).collect())
}

fn matrix_json(m: &Matrix<Rational>) -> Value {
    Value::Array(m.row_vecs().iter().map(|r| scalars_json(r)).collect())
}

#[derive(Clone, Debug, Deserialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<String, ScalarText>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct AlgebraFile {
    pub label: String,
    pub dim: usize,
    pub weights: Vec<u32>,
    #[serde(default)]
    pub names: Option<Vec<String>>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    #[serde(default)]
    pub words: Option<Vec<String>>,
}

impl AlgebraFile {
    /// Structure constants without validation, so that violations can be reported.
    pub fn to_algebra_unchecked(&self) -> Result<NilpotentLieAlgebra<Rational>> {
        if self.weights.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: self.weights.len() });
        }
        if let Some(names) = &self.names {
            if names.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: names.len() });
            }
        }
        let mut entries = Vec::new();
        for (n, b) in self.brackets.iter().enumerate() {
            if b.i == 0 || b.j == 0 || b.i > self.dim || b.j > self.dim {
                return Err(Error::Format(format!("brackets[{n}]: indices are 1-based and at most {}", self.dim)));
            }
            if b.i == b.j {
                return Err(Error::Format(format!("brackets[{n}]: i and j must differ")));
            }
            for (k, c) in &b.coeffs {
                let k: usize = k
                    .parse()
                    .ok()
                    .filter(|&k| k >= 1 && k <= self.dim)
                    .ok_or_else(|| Error::Format(format!("brackets[{n}]: invalid index \"{k}\"")))?;
                let c = c.parse(&format!("brackets[{n}].coeffs.{k}"))?;
                entries.push((b.i - 1, b.j - 1, k - 1, c));
            }
        }
        // a pair listed in both orders is kept as given so that validation sees it
        let given: BTreeSet<(usize, usize)> = entries.iter().map(|&(i, j, _, _)| (i, j)).collect();
        let partners: Vec<_> = entries
            .iter()
            .filter(|&&(i, j, _, _)| !given.contains(&(j, i)))
            .map(|(i, j, k, c)| (*j, *i, *k, -c.clone()))
            .collect();
        entries.extend(partners);
        Ok(NilpotentLieAlgebra::from_raw(self.label.clone(), self.weights.clone(), entries))
    }

    pub fn to_algebra(&self) -> Result<NilpotentLieAlgebra<Rational>> {
        let algebra = self.to_algebra_unchecked()?;
        let report = algebra.validate();
        if report.is_valid() {
            Ok(algebra)
        } else {
            Err(Error::InvalidAlgebra(report))
        }
    }
}

pub fn parse_algebra_file(text: &str) -> Result<AlgebraFile> {
    serde_json::from_str(text).map_err(format_error)
}

pub fn parse_algebra(text: &str) -> Result<NilpotentLieAlgebra<Rational>> {
    parse_algebra_file(text)?.to_algebra()
}

pub fn algebra_json(algebra: &NilpotentLieAlgebra<Rational>, names: Option<&[String]>, words: Option<&[String]>) -> Value {
    let brackets: Vec<Value> = group_upper(algebra)
        .into_iter()
        .map(|((i, j), terms)| {
            let coeffs: serde_json::Map<String, Value> =
                terms.into_iter().map(|(k, c)| ((k + 1).to_string(), Value::String(c.to_string()))).collect();
            json!({"i": i + 1, "j": j + 1, "coeffs": coeffs})
        })
        .collect();
    let mut out = json!({
        "label": algebra.label(),
        "dim": algebra.dim(),
        "weights": algebra.weights(),
        "brackets": brackets,
    });
    if let Some(names) = names {
        out["names"] = json!(names);
    }
    if let Some(words) = words {
        out["words"] = json!(words);
    }
    out
}

fn group_upper(algebra: &NilpotentLieAlgebra<Rational>) -> BTreeMap<(usize, usize), Vec<(usize, Rational)>> {
    let mut grouped: BTreeMap<(usize, usize), Vec<(usize, Rational)>> = BTreeMap::new();
    for (i, j, k, c) in algebra.upper_entries() {
        grouped.entry((i, j)).or_default().push((k, c));
    }
    grouped
}

#[derive(Clone, Debug, Deserialize)]
pub struct GeneratorEntry {
    pub weight: u32,
    pub components: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct InlineBasis {
    pub algebra: AlgebraFile,
    /// 1-based basis index of the image of each generator.
    pub generators: Vec<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum GradedBasisEntry {
    Keyword(String),
    Inline(InlineBasis),
}

#[derive(Clone, Debug, Deserialize)]
pub struct FiltrationFile {
    pub label: String,
    pub ambient_dim: usize,
    #[serde(default)]
    pub variables: Option<Vec<String>>,
    pub depth: u32,
    pub generators: Vec<GeneratorEntry>,
    #[serde(default = "free_keyword")]
    pub graded_basis: GradedBasisEntry,
}

fn free_keyword() -> GradedBasisEntry {
    GradedBasisEntry::Keyword("free".into())
}

impl FiltrationFile {
    pub fn to_filtration(&self) -> Result<SingularFiltration<Rational>> {
        let variables = match &self.variables {
            Some(v) if v.len() != self.ambient_dim => {
                return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: v.len() })
            }
            Some(v) => v.clone(),
            None => default_names(self.ambient_dim),
        };
        let names: Vec<&str> = variables.iter().map(String::as_str).collect();
        let mut generators = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let comps: Vec<&str> = g.components.iter().map(String::as_str).collect();
            if comps.len() != self.ambient_dim {
                return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: comps.len() });
            }
            generators.push(Generator { field: VectorField::parse(&comps, &names)?, weight: g.weight });
        }
        let spec = match &self.graded_basis {
            GradedBasisEntry::Keyword(k) if k == "free" => BasisSpec::Free,
            GradedBasisEntry::Keyword(k) => {
                return Err(Error::Format(format!("graded_basis must be \"free\" or an inline basis, found \"{k}\"")))
            }
            GradedBasisEntry::Inline(b) => {
                let algebra = b.algebra.to_algebra()?;
                let names = b
                    .algebra
                    .names
                    .clone()
                    .unwrap_or_else(|| (1..=algebra.dim()).map(|k| format!("X{k}")).collect());
                if b.generators.iter().any(|&k| k == 0 || k > algebra.dim()) {
                    return Err(Error::Format("graded_basis.generators are 1-based basis indices".into()));
                }
                BasisSpec::Inline { algebra, names, generators: b.generators.iter().map(|k| k - 1).collect() }
            }
        };
        SingularFiltration::new(self.label.clone(), variables, self.depth, generators, spec)
    }
}

pub fn parse_filtration(text: &str) -> Result<SingularFiltration<Rational>> {
    serde_json::from_str::<FiltrationFile>(text).map_err(format_error)?.to_filtration()
}

#[derive(Clone, Debug, Deserialize)]
pub struct CurveFile {
    pub base: Vec<String>,
    #[serde(default = "one")]
    pub time_exponent: u32,
    #[serde(default)]
    pub covector: Option<Vec<String>>,
}

fn one() -> u32 {
    1
}

impl CurveFile {
    pub fn to_curve(&self) -> Result<RationalCurve<Rational>> {
        let parse = |v: &[String]| -> Result<Vec<Laurent<Rational>>> {
            v.iter().map(|t| Laurent::parse(t, CURVE_VARIABLE)).collect()
        };
        let base = parse(&self.base)?;
        let covector = self.covector.as_deref().map(parse).transpose()?;
        Ok(RationalCurve { base, time_exponent: self.time_exponent, covector })
    }
}

pub fn parse_curve(text: &str) -> Result<RationalCurve<Rational>> {
    serde_json::from_str::<CurveFile>(text).map_err(format_error)?.to_curve()
}

pub fn curve_json(curve: &RationalCurve<Rational>) -> Value {
    let show = |v: &[Laurent<Rational>]| -> Vec<String> { v.iter().map(|p| p.display_with(CURVE_VARIABLE)).collect() };
    let mut out = json!({"base": show(&curve.base), "time_exponent": curve.time_exponent});
    if let Some(c) = &curve.covector {
        out["covector"] = json!(show(c));
    }
    out
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum PointsFile {
    Bare(Vec<Vec<ScalarText>>),
    Wrapped { points: Vec<Vec<ScalarText>> },
}

/// A list of rational vectors, as a bare array or as `{"points": [...]}`.
pub fn parse_points(text: &str) -> Result<Vec<Vec<Rational>>> {
    let file: PointsFile = serde_json::from_str(text).map_err(format_error)?;
    let rows = match file {
        PointsFile::Bare(r) | PointsFile::Wrapped { points: r } => r,
    };
    rows.iter().enumerate().map(|(i, r)| parse_scalars(r, &format!("points[{i}]"))).collect()
}

/// A single rational vector given as a JSON array or as comma separated text.
pub fn parse_vector(text: &str) -> Result<Vec<Rational>> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        let values: Vec<ScalarText> = serde_json::from_str(trimmed).map_err(format_error)?;
        return parse_scalars(&values, "vector");
    }
    trimmed
        .split(',')
        .map(|t| parse_rational(t.trim()).ok_or_else(|| Error::Format(format!("invalid rational \"{}\"", t.trim()))))
        .collect()
}

pub fn classification_json(
    algebra: &NilpotentLieAlgebra<Rational>,
    classification: &Classification<Rational>,
    max_reps: usize,
) -> Result<Value> {
    let mut strata = Vec::new();
    for bucket in &classification.fine {
        let mut reps: Vec<Covector<Rational>> = Vec::new();
        for xi in &bucket.members {
            if reps.len() >= max_reps {
                break;
            }
            let rep = canonical_representative(algebra, xi)?;
            if !reps.contains(&rep) {
                reps.push(rep);
            }
        }
        strata.push(json!({
            "fine_invariant": bucket.invariant.to_string(),
            "coarse_invariant": bucket.invariant.coarse().to_string(),
            "orbit_dim": bucket.orbit_dim(),
            "count": bucket.members.len(),
            "canonical_reps": reps.iter().map(|r| scalars_json(r)).collect::<Vec<_>>(),
        }));
    }
    let coarse: Vec<Value> = classification
        .coarse
        .iter()
        .map(|c| {
            json!({
                "coarse_invariant": c.jump_set.to_string(),
                "count": c.members.len(),
                "fine_invariants": c.fine.iter().map(JumpInvariant::to_string).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({
        "algebra_label": algebra.label(),
        "strata": strata,
        "coarse": coarse,
        "order": "ascending",
    }))
}

pub fn subspace_json(subspace: &SubspacePoint<Rational>) -> Value {
    json!({"dim": subspace.dim(), "ambient_dim": subspace.ambient_dim(), "basis": matrix_json(subspace.basis())})
}

pub fn curve_limit_json(limit: &CurveLimit<Rational>) -> Value {
    json!({"subspace": subspace_json(&limit.subspace), "valuations": limit.valuations})
}

pub fn cone_samples_json(point: &[Rational], samples: &[ConeSample<Rational>]) -> Value {
    let covectors: Vec<Value> = samples
        .iter()
        .map(|s| json!({"coords": scalars_json(&s.covector), "witness_curve": curve_json(&s.witness)}))
        .collect();
    json!({"point": scalars_json(point), "covectors": covectors})
}

pub fn osculating_json(osc: &OsculatingAlgebra<Rational>) -> Value {
    json!({
        "algebra": algebra_json(&osc.algebra, Some(&osc.names), None),
        "representatives": osc.representatives.iter().map(|r| r + 1).collect::<Vec<_>>(),
        "morphism": matrix_json(osc.morphism.matrix()),
    })
}

pub fn morphism_report_json(report: &MorphismReport) -> Value {
    json!({
        "valid": report.is_valid(),
        "weight_violations": report.weight_violations,
        "bracket_violations": report.bracket_violations,
        "rank": report.rank,
        "surjective": report.surjective,
    })
}

fn normalized_json(n: &Option<Normalized<Rational>>) -> Value {
    match n {
        None => Value::Null,
        Some(Normalized::Exact(xi)) => json!({"exact": scalars_json(xi)}),
        Some(Normalized::Class(c)) => json!({"class": {"ratios": scalars_json(&c.ratios), "signs": c.signs}}),
    }
}

fn bucket_json(b: &FiberBucket<Rational>) -> Value {
    json!({
        "fine_invariant": b.invariant.to_string(),
        "coarse_invariant": b.invariant.coarse().to_string(),
        "orbit_dim": b.invariant.orbit_dim(),
        "count": b.count,
        "canonical_reps": b.canonical.iter().map(|r| scalars_json(r)).collect::<Vec<_>>(),
        "normalized_reps": b.normalized.iter().map(normalized_json).collect::<Vec<_>>(),
    })
}

fn regular_check_json(c: &RegularCheck) -> Value {
    json!({
        "in_image": c.in_image,
        "reference_invariants": c.reference.iter().map(JumpInvariant::to_string).collect::<Vec<_>>(),
        "realized_subset": c.realized_subset,
        "equal": c.equal,
    })
}

pub fn cone_config_json(c: &ConeConfig) -> Value {
    json!({
        "budget": c.budget,
        "degree_bound": c.degree_bound,
        "pole_bound": c.pole_bound,
        "max_time_exponent": c.max_time_exponent,
        "seed": c.seed,
    })
}

pub fn skeleton_json(s: &SolvabilitySkeleton<Rational>) -> Value {
    let mut chain = vec!["J_0".to_string()];
    chain.extend(s.links.iter().map(|l| l.ideal_label()));
    let subquotients: Vec<Value> = s
        .links
        .iter()
        .map(|l| {
            json!({
                "ideal": l.ideal_label(),
                "stratum": l.stratum.to_string(),
                "orbit_dim": l.orbit_dim,
                "sample_count": l.sample_count,
                "spectrum": l.spectrum.iter().map(|n| normalized_json(&Some(n.clone()))).collect::<Vec<_>>(),
                "compact_dimension": match l.compact_dimension {
                    CompactDimension::Infinite => "infinite",
                    CompactDimension::One => "one",
                },
            })
        })
        .collect();
    json!({"algebra_label": s.algebra_label, "chain": chain, "subquotients": subquotients})
}

pub fn report_json(report: &StratifiedConeReport<Rational>, skeleton: Option<&SolvabilitySkeleton<Rational>>) -> Value {
    let fibers: Vec<Value> = report
        .fibers
        .iter()
        .map(|f| {
            json!({
                "point": scalars_json(&f.point),
                "regular": f.regularity.regular,
                "fiber_ranks": f.regularity.fiber_ranks,
                "generic_ranks": f.regularity.generic_ranks,
                "strata": f.buckets.iter().map(bucket_json).collect::<Vec<_>>(),
                "regular_check": f.regular_check.as_ref().map(regular_check_json),
                "samples": cone_samples_json(&f.point, &f.samples)["covectors"].clone(),
            })
        })
        .collect();
    let mut config = cone_config_json(&report.config.cone);
    config["osculating_cap"] = json!(report.config.osculating_cap);
    config["reference_samples"] = json!(report.config.reference_samples);
    let mut out = json!({
        "schema": REPORT_SCHEMA,
        "filtration_label": report.filtration_label,
        "algebra_label": report.algebra_label,
        "seed": report.config.cone.seed,
        "config": config,
        "fibers": fibers,
        "strata": report.strata.iter().map(JumpInvariant::to_string).collect::<Vec<_>>(),
        "order": "ascending",
    });
    if let Some(s) = skeleton {
        out["skeleton"] = skeleton_json(s);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar::Scalar;

    #[test]
    fn algebra_round_trip() {
        let e = catalog::engel::<Rational>();
        let names: Vec<String> = ["V", "Z", "Y", "X"].iter().map(|s| s.to_string()).collect();
        let text = algebra_json(&e, Some(&names), None).to_string();
        let back = parse_algebra(&text).unwrap();
        assert_eq!(back.upper_entries(), e.upper_entries());
        assert_eq!(back.weights(), e.weights());
    }

    #[test]
    fn parse_errors_cite_position() {
        let err = parse_algebra("{\"label\": \"x\",\n \"dim\": }").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        let err = parse_algebra(r#"{"label":"x","dim":2,"weights":[1,1],"brackets":[{"i":1,"j":2,"coeffs":{"1":"a"}}]}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("invalid rational"), "{err}");
    }

    #[test]
    fn invalid_algebra_is_reported() {
        let text = r#"{"label":"bad","dim":3,"weights":[1,1,1],"brackets":[{"i":1,"j":2,"coeffs":{"3":"1"}}]}"#;
        let file = parse_algebra_file(text).unwrap();
        assert!(!file.to_algebra_unchecked().unwrap().validate().is_valid());
        assert!(matches!(file.to_algebra(), Err(Error::InvalidAlgebra(_))));
    }

    #[test]
    fn curves_and_points() {
        let c = parse_curve(r#"{"base": ["1", "2*s + s^2"], "time_exponent": 2, "covector": ["s^-2", "0"]}"#).unwrap();
        assert_eq!(c.time_exponent, 2);
        assert_eq!(parse_curve(&curve_json(&c).to_string()).unwrap(), c);
        let pts = parse_points(r#"{"points": [["1/2", 3], ["0", "-1"]]}"#).unwrap();
        assert_eq!(pts[0][0], Rational::from_ratio(1, 2));
        assert!(parse_points("[]").unwrap().is_empty());
        assert_eq!(parse_vector("1, 1/2").unwrap().len(), 2);
    }
}
