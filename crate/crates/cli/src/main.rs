use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use coadstrat::fixtures::{self, Fixture};
use coadstrat::io;
use coadstrat::report::ReportConfig;
use coadstrat::sample::random_covectors;
use coadstrat::{
    canonical_representative, classify_points, free_algebra, jump_invariant, stratify_cone, ConeConfig, Covector,
    Error, Rational, SolvabilitySkeleton, WeightedAlphabet,
};

/// Exact Pedersen stratifications and Helffer–Nourrigat cones.
///
/// All numbers are exact rationals written as "p/q" strings. Output is JSON.
#[derive(Parser)]
#[command(name = "coadstrat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Args, Clone)]
struct GlobalArgs {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of random curves tried per cone fiber.
    #[arg(long, global = true, default_value_t = 64)]
    budget: usize,
    /// Degree bound of the random base curves.
    #[arg(long, global = true, default_value_t = 3)]
    degree_bound: u32,
    /// Largest pole order allowed in a witness covector curve [default: time exponent times depth].
    #[arg(long, global = true)]
    pole_bound: Option<u32>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check an algebra, filtration or fixture file.
    Validate { path: PathBuf },
    /// Bucket covectors by fine and coarse jump invariants.
    Classify {
        algebra: PathBuf,
        /// JSON file with an array of covectors.
        #[arg(long, conflicts_with_all = ["grid", "random"])]
        points: Option<PathBuf>,
        /// All integer covectors with entries in [-r, r].
        #[arg(long, conflicts_with = "random")]
        grid: Option<i64>,
        /// This many seeded random covectors [default when no source is given: 200].
        #[arg(long)]
        random: Option<usize>,
        /// Canonical representatives listed per stratum.
        #[arg(long, default_value_t = 5)]
        max_reps: usize,
    },
    /// Canonical representative of a covector's orbit.
    Canonicalize {
        algebra: PathBuf,
        /// Covector as "a,b,c" or a JSON array.
        covector: String,
    },
    /// Free graded nilpotent algebra on weighted generators.
    Free {
        /// Generator weights, e.g. "1,1" or "1,2".
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u32>,
        #[arg(long)]
        depth: u32,
    },
    /// Osculating algebra of a filtration at a point.
    Osculating {
        filtration: PathBuf,
        /// Point as "x,y,..." or a JSON array.
        point: String,
        /// Largest multiplier degree used to certify the fibers.
        #[arg(long, default_value_t = 24)]
        cap: u32,
    },
    /// Limit covector, or limit subspace when the curve has no covector, along a curve.
    HnLimit { filtration: PathBuf, curve: PathBuf },
    /// Stratified cone report with its solvability skeleton.
    Report {
        filtration: PathBuf,
        /// JSON file with an array of base points.
        #[arg(long, required_unless_present = "point")]
        points: Option<PathBuf>,
        /// A base point as "x,y,..."; may be repeated.
        #[arg(long)]
        point: Vec<String>,
    },
    /// The bundled fixture corpus.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Subcommand)]
enum FixtureAction {
    /// Names and descriptions of the bundled fixtures.
    List,
    /// Run fixtures (all when no names are given).
    Run { names: Vec<String> },
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Format(_) | Error::PolyParse { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type CmdResult = Result<(Value, bool), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = run(&cli.command, &cli.global).and_then(|(value, ok)| {
        emit(&value, &cli.global)?;
        Ok(ok)
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn emit(value: &Value, global: &GlobalArgs) -> Result<(), Failure> {
    let Format::Json = global.format;
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Domain(e.to_string()))?;
    text.push('\n');
    match &global.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn in_file(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| match Failure::from(e) {
        Failure::Usage(m) => Failure::Usage(format!("{}: {m}", path.display())),
        other => other,
    }
}

fn cone_config(global: &GlobalArgs) -> ConeConfig {
    ConeConfig {
        budget: global.budget,
        degree_bound: global.degree_bound,
        pole_bound: global.pole_bound,
        seed: global.seed,
        ..ConeConfig::default()
    }
}

fn run(command: &Command, global: &GlobalArgs) -> CmdResult {
    match command {
        Command::Validate { path } => validate(path),
        Command::Classify { algebra, points, grid, random, max_reps } => {
            let alg = io::parse_algebra(&read(algebra)?).map_err(in_file(algebra))?;
            let n = alg.dim();
            let covectors: Vec<Covector<Rational>> = if let Some(p) = points {
                let pts = io::parse_points(&read(p)?).map_err(in_file(p))?;
                if let Some(bad) = pts.iter().position(|v| v.len() != n) {
                    return Err(Failure::Usage(format!("point {} has length {}, expected {n}", bad + 1, pts[bad].len())));
                }
                pts.into_iter().map(Covector).collect()
            } else if let Some(r) = grid {
                grid_points(n, *r)?
            } else {
                random_covectors(n, random.unwrap_or(200), global.seed)
            };
            let cls = classify_points(&alg, &covectors)?;
            Ok((io::classification_json(&alg, &cls, *max_reps)?, true))
        }
        Command::Canonicalize { algebra, covector } => {
            let alg = io::parse_algebra(&read(algebra)?).map_err(in_file(algebra))?;
            let xi = Covector(io::parse_vector(covector)?);
            if xi.len() != alg.dim() {
                return Err(Failure::Usage(format!("covector has length {}, expected {}", xi.len(), alg.dim())));
            }
            let invariant = jump_invariant(&alg, &xi)?;
            let canonical = canonical_representative(&alg, &xi)?;
            Ok((
                json!({
                    "input": io::scalars_json(&xi),
                    "fine_invariant": invariant.to_string(),
                    "canonical": io::scalars_json(&canonical),
                }),
                true,
            ))
        }
        Command::Free { weights, depth } => {
            let alphabet = WeightedAlphabet::new(weights.clone())?;
            let free = free_algebra::<Rational>(&alphabet, *depth)?;
            Ok((io::algebra_json(free.algebra(), None, Some(&free.word_strings())), true))
        }
        Command::Osculating { filtration, point, cap } => {
            let f = io::parse_filtration(&read(filtration)?).map_err(in_file(filtration))?;
            let x = io::parse_vector(point)?;
            let osc = f.osculating_algebra(&x, *cap)?;
            Ok((io::osculating_json(&osc), true))
        }
        Command::HnLimit { filtration, curve } => {
            let f = io::parse_filtration(&read(filtration)?).map_err(in_file(filtration))?;
            let c = io::parse_curve(&read(curve)?).map_err(in_file(curve))?;
            if c.covector.is_some() {
                let xi = f.limit_covector(&c)?;
                Ok((json!({"covector": io::scalars_json(&xi)}), true))
            } else {
                Ok((io::curve_limit_json(&f.limit_subspace(&c)?), true))
            }
        }
        Command::Report { filtration, points, point } => {
            let f = io::parse_filtration(&read(filtration)?).map_err(in_file(filtration))?;
            let mut xs = match points {
                Some(p) => io::parse_points(&read(p)?).map_err(in_file(p))?,
                None => Vec::new(),
            };
            for p in point {
                xs.push(io::parse_vector(p)?);
            }
            let config = ReportConfig { cone: cone_config(global), ..ReportConfig::default() };
            let report = stratify_cone(&f, &xs, &config)?;
            let skeleton = if report.fibers.is_empty() { None } else { Some(SolvabilitySkeleton::from_report(&report)?) };
            Ok((io::report_json(&report, skeleton.as_ref()), true))
        }
        Command::Fixtures { action: FixtureAction::List } => {
            let list: Vec<Value> = fixtures::load_all()?
                .iter()
                .map(|f| {
                    let kind = match f {
                        Fixture::Algebra(_) => "algebra",
                        Fixture::Filtration(_) => "filtration",
                    };
                    json!({"name": f.name(), "kind": kind, "anchor": f.anchor()})
                })
                .collect();
            Ok((Value::Array(list), true))
        }
        Command::Fixtures { action: FixtureAction::Run { names } } => {
            let selected: Vec<Fixture> = if names.is_empty() {
                fixtures::load_all()?
            } else {
                names.iter().map(|n| fixtures::load(n)).collect::<Result<_, _>>()?
            };
            let mut rows = Vec::new();
            let mut all = true;
            for f in &selected {
                let outcome = fixtures::run(f)?;
                all &= outcome.passed();
                let checks: Vec<Value> = outcome
                    .checks
                    .iter()
                    .map(|c| json!({"check": c.name, "passed": c.passed, "detail": c.detail}))
                    .collect();
                rows.push(json!({
                    "name": outcome.name,
                    "anchor": outcome.anchor,
                    "passed": outcome.passed(),
                    "checks": checks,
                }));
            }
            Ok((json!({"passed": all, "fixtures": rows}), all))
        }
    }
}

fn validate(path: &Path) -> CmdResult {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if value.get("kind").is_some() {
        let f = fixtures::parse_fixture(&text).map_err(in_file(path))?;
        return Ok((json!({"kind": "fixture", "name": f.name(), "valid": true}), true));
    }
    if value.get("generators").is_some() {
        let f = io::parse_filtration(&text).map_err(in_file(path))?;
        let ranks = f.generic_ranks();
        return Ok((
            json!({
                "kind": "filtration",
                "label": f.label(),
                "valid": true,
                "graded_basis_dim": f.algebra().dim(),
                "generic_ranks": ranks,
            }),
            true,
        ));
    }
    let file = io::parse_algebra_file(&text).map_err(in_file(path))?;
    let algebra = file.to_algebra_unchecked().map_err(in_file(path))?;
    let report = algebra.validate();
    let violations: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
    Ok((
        json!({
            "kind": "algebra",
            "label": algebra.label(),
            "dim": algebra.dim(),
            "valid": report.is_valid(),
            "violations": violations,
        }),
        report.is_valid(),
    ))
}

fn grid_points(n: usize, r: i64) -> Result<Vec<Covector<Rational>>, Failure> {
    if r < 0 {
        return Err(Failure::Usage("grid radius must be non-negative".into()));
    }
    let side = (2 * r + 1) as u128;
    if side.checked_pow(n as u32).map_or(true, |c| c > 1_000_000) {
        return Err(Failure::Usage(format!("grid of radius {r} in dimension {n} has more than 10^6 points")));
    }
    let mut out = vec![Vec::with_capacity(n)];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<Rational>| {
                (-r..=r).map(move |k| {
                    let mut q = p.clone();
                    q.push(Rational::from_integer(k.into()));
                    q
                })
            })
            .collect();
    }
    Ok(out.into_iter().map(Covector).collect())
}
