//! Batch driver: argument parsing, dispatch and the report envelope.
//!
//! Exit codes: `0` success, `1` verification failure (nonempty failures),
//! `2` configuration error, `3` cap exceeded.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::hull::{hull_contains_fast, weyl_group_order, weyl_orbit, HullError, HullOracle, HullQuery};
use crate::krtoric::{kr_sweep, verify_kr_rank1, KrToricReport};
use crate::report::parse_rational;
use crate::rootsys::{build_root_system, Family, LatticeVector, RationalVector, RootError, RootSystem, RootSystemType, Vector};
use crate::shift::{
    chain_start_pairs, defect_bound, defect_sweep, dominance_chain, make_instance, verify_theorem_sweep, LemmaInstance,
    ShiftError,
};

pub const SCHEMA: &str = "weylkit/1";
pub const DEFAULT_CAP: usize = 1_000_000;
pub const CAP_ENV: &str = "WEYLKIT_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "weylkit", version, about = "Exact Weyl-orbit hull, reflection-chain and wall-lifting checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Root system family (`A`..`G`) or full label such as `G2`.
    #[arg(long = "type")]
    pub root_type: String,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Cap on orbit sizes, group orders and scanned box volumes.
    #[arg(long, env = CAP_ENV, default_value_t = DEFAULT_CAP, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    pub cap: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct Bound {
    /// Coordinatewise bound on the dominant weight.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(i64).range(1..))]
    pub bound: i64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cartan matrix, Weyl group order and chain-start pairs.
    Info {
        #[command(flatten)]
        common: Common,
    },
    /// Weyl orbit of a lattice vector.
    Orbit {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: String,
    },
    /// Membership of a rational point in Conv(W·x), by both routes.
    Membership {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: String,
        #[arg(long)]
        v: String,
    },
    /// Reflection chain for a single instance (x, z, i0); i0 is 1-based.
    Chain {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: String,
        #[arg(long)]
        z: String,
        #[arg(long)]
        i0: usize,
    },
    /// Maximum chain length over the bounded sweep.
    Defect {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        bound: Bound,
    },
    /// Exhaustive membership and chain checks over the bounded sweep.
    VerifyTheorem {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        bound: Bound,
    },
    /// Wall-lifting deficit for one (mu, i0) or every dominant mu ≤ bound.
    KrVerify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        bound: Bound,
        #[arg(long)]
        mu: Option<String>,
        #[arg(long)]
        i0: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Info,
    Orbit,
    Membership,
    Chain,
    Defect,
    VerifyTheorem,
    KrVerify,
}

impl CommandKind {
    fn is_verification(self) -> bool {
        matches!(self, CommandKind::Chain | CommandKind::VerifyTheorem | CommandKind::KrVerify)
    }
}

/// A fully resolved run; echoed verbatim in the report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub root_type: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    pub bound: i64,
    pub cap: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i0: Option<usize>,
}

impl RunConfig {
    fn base(command: CommandKind, common: Common, bound: i64) -> Self {
        RunConfig {
            command,
            root_type: common.root_type,
            rank: common.rank,
            bound,
            cap: common.cap,
            output: common.output,
            format: common.format,
            x: None,
            v: None,
            z: None,
            mu: None,
            i0: None,
        }
    }
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        match cli.command {
            Command::Info { common } => RunConfig::base(CommandKind::Info, common, 1),
            Command::Orbit { common, x } => RunConfig {
                x: Some(x),
                ..RunConfig::base(CommandKind::Orbit, common, 1)
            },
            Command::Membership { common, x, v } => RunConfig {
                x: Some(x),
                v: Some(v),
                ..RunConfig::base(CommandKind::Membership, common, 1)
            },
            Command::Chain { common, x, z, i0 } => RunConfig {
                x: Some(x),
                z: Some(z),
                i0: Some(i0),
                ..RunConfig::base(CommandKind::Chain, common, 1)
            },
            Command::Defect { common, bound } => RunConfig::base(CommandKind::Defect, common, bound.bound),
            Command::VerifyTheorem { common, bound } => RunConfig::base(CommandKind::VerifyTheorem, common, bound.bound),
            Command::KrVerify { common, bound, mu, i0 } => RunConfig {
                mu,
                i0,
                ..RunConfig::base(CommandKind::KrVerify, common, bound.bound)
            },
        }
    }
}

#[derive(Debug)]
enum RunError {
    Config(String),
    Cap(String),
    Kernel(String),
}

impl From<RootError> for RunError {
    fn from(e: RootError) -> Self {
        RunError::Config(e.to_string())
    }
}

impl From<HullError> for RunError {
    fn from(e: HullError) -> Self {
        match e {
            HullError::CapExceeded { .. } => RunError::Cap(e.to_string()),
            HullError::Root(r) => r.into(),
            HullError::NotDominant(_) => RunError::Config(e.to_string()),
        }
    }
}

impl From<ShiftError> for RunError {
    fn from(e: ShiftError) -> Self {
        match e {
            ShiftError::Root(r) => r.into(),
            ShiftError::Hull(h) => h.into(),
            ShiftError::NoChainStart(_)
            | ShiftError::ChainStepNotUnique { .. }
            | ShiftError::ChainDidNotTerminate { .. } => RunError::Kernel(e.to_string()),
            _ => RunError::Config(e.to_string()),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ReportEnvelope {
    pub schema: &'static str,
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub timing_ms: u128,
    pub result: Value,
    pub failures: Vec<Value>,
}

struct Payload {
    result: Value,
    failures: Vec<Value>,
    csv: Option<Vec<Vec<String>>>,
}

/// Outcome of a run: exit code, serialized report (if any) and a message
/// for stderr.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Option<String>,
    pub message: Option<String>,
}

pub fn resolve_type(root_type: &str, rank: Option<usize>) -> Result<RootSystemType, RootError> {
    let s = root_type.trim();
    let split = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
    let family: Family = s[..split].parse()?;
    let embedded = &s[split..];
    let n = match (embedded.is_empty(), rank) {
        (false, r) => {
            let n: usize = embedded.parse().map_err(|_| RootError::UnknownFamily(s.to_string()))?;
            if r.is_some_and(|r| r != n) {
                return Err(RootError::InadmissibleRank { family, rank: r.unwrap_or(n) });
            }
            n
        }
        (true, Some(r)) => r,
        (true, None) => match family {
            Family::F => 4,
            Family::G => 2,
            _ => return Err(RootError::UnknownFamily(format!("{s} (rank required)"))),
        },
    };
    RootSystemType::new(family, n)
}

fn parse_lattice(spec: &RootSystem, name: &str, s: &str) -> Result<LatticeVector, RunError> {
    let coords = s
        .split(',')
        .map(|c| c.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| RunError::Config(format!("--{name}: expected comma-separated integers, got `{s}`")))?;
    let v = Vector::new(coords);
    spec.check_dim(&v)?;
    Ok(v)
}

fn parse_rational_vec(spec: &RootSystem, name: &str, s: &str) -> Result<RationalVector, RunError> {
    let coords = s
        .split(',')
        .map(parse_rational)
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| RunError::Config(format!("--{name}: expected comma-separated rationals, got `{s}`")))?;
    let v = Vector::new(coords);
    spec.check_dim(&v)?;
    Ok(v)
}

fn required<'a>(v: &'a Option<String>, name: &str) -> Result<&'a str, RunError> {
    v.as_deref().ok_or_else(|| RunError::Config(format!("--{name} is required")))
}

fn index(spec: &RootSystem, label: usize) -> Result<usize, RunError> {
    if label == 0 || label > spec.rank() {
        Err(RunError::Config(format!("index {label} out of range 1..={}", spec.rank())))
    } else {
        Ok(label - 1)
    }
}

fn labels(idx: &[usize]) -> String {
    idx.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ")
}

fn coords<T: std::fmt::Display>(c: &[T]) -> String {
    c.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}

fn execute(cfg: &RunConfig) -> Result<Payload, RunError> {
    let ty = resolve_type(&cfg.root_type, cfg.rank)?;
    let spec = build_root_system(ty);
    if cfg.format == Format::Csv
        && !matches!(cfg.command, CommandKind::Defect | CommandKind::VerifyTheorem | CommandKind::KrVerify)
    {
        return Err(RunError::Config("csv output is available for defect, verify-theorem and kr-verify".into()));
    }
    let cap = cfg.cap;
    match cfg.command {
        CommandKind::Info => {
            let order = weyl_group_order(&spec, cap)?;
            let pairs: Vec<[usize; 2]> = chain_start_pairs(&spec).into_iter().map(|(a, b)| [a + 1, b + 1]).collect();
            Ok(Payload {
                result: json!({
                    "root_type": ty.to_string(),
                    "family": ty.family().to_string(),
                    "rank": ty.rank(),
                    "simply_laced": ty.family().is_simply_laced(),
                    "cartan": spec.cartan().rows(),
                    "weyl_order": order,
                    "chain_start_pairs": pairs,
                    "defect_bound": defect_bound(ty),
                }),
                failures: vec![],
                csv: None,
            })
        }
        CommandKind::Orbit => {
            let x = parse_lattice(&spec, "x", required(&cfg.x, "x")?)?;
            let orbit = weyl_orbit(&spec, &x, cap)?;
            let bx = orbit.bounding_box();
            Ok(Payload {
                result: json!({
                    "root_type": ty.to_string(),
                    "x": to_value(&x),
                    "dominant": to_value(&orbit.base),
                    "size": orbit.len(),
                    "box": { "lo": bx.lo, "hi": bx.hi },
                    "members": to_value(&orbit.members.iter().collect::<Vec<_>>()),
                }),
                failures: vec![],
                csv: None,
            })
        }
        CommandKind::Membership => {
            let x = parse_lattice(&spec, "x", required(&cfg.x, "x")?)?;
            let v = parse_rational_vec(&spec, "v", required(&cfg.v, "v")?)?;
            let q = HullQuery::new(&spec, x, v)?;
            let fast = hull_contains_fast(&spec, &q);
            let oracle = HullOracle::new(&spec, cap)?;
            let brute = oracle.contains(&q);
            let (dom, word) = spec.dominant_representative(&q.v);
            let word: Vec<usize> = word.iter().map(|i| i + 1).collect();
            let failures = if fast == brute {
                vec![]
            } else {
                vec![json!({ "reason": "fast and oracle membership disagree" })]
            };
            Ok(Payload {
                result: json!({
                    "root_type": ty.to_string(),
                    "x": to_value(&q.x),
                    "v": to_value(&q.v),
                    "dominant_representative": to_value(&dom),
                    "word": word,
                    "fast": fast,
                    "oracle": brute,
                    "weyl_order": oracle.group().order(),
                }),
                failures,
                csv: None,
            })
        }
        CommandKind::Chain => {
            let x = parse_lattice(&spec, "x", required(&cfg.x, "x")?)?;
            let z = parse_lattice(&spec, "z", required(&cfg.z, "z")?)?;
            let i0 = index(&spec, cfg.i0.ok_or_else(|| RunError::Config("--i0 is required".into()))?)?;
            let inst = LemmaInstance::new(make_instance(&spec, x, z, i0)?)?;
            let mut failures = vec![];
            let result = match dominance_chain(&inst) {
                Ok(r) => {
                    if !(r.flags.all() && r.dominant && r.membership && r.strict_on_chain && r.below_x) {
                        failures.push(json!({ "reason": "chain report violates its invariants" }));
                    }
                    json!({
                        "root_type": ty.to_string(),
                        "x": to_value(&inst.x),
                        "z": to_value(&inst.z),
                        "y": to_value(&inst.y),
                        "report": to_value(&r),
                    })
                }
                Err(e) => {
                    failures.push(json!({ "reason": e.to_string() }));
                    json!({ "root_type": ty.to_string(), "error": e.to_string() })
                }
            };
            Ok(Payload {
                result,
                failures,
                csv: None,
            })
        }
        CommandKind::Defect => {
            let s = defect_sweep(&spec, cfg.bound, cap)?;
            let w = s.witness.as_ref();
            let csv = vec![
                vec![
                    "root_type", "bound", "instances", "max_defect", "structural_bound", "witness_x", "witness_z",
                    "witness_i0", "witness_chain",
                ]
                .into_iter()
                .map(String::from)
                .collect(),
                vec![
                    s.root_type.clone(),
                    s.bound.to_string(),
                    s.instances.to_string(),
                    s.max_defect.to_string(),
                    s.structural_bound.to_string(),
                    w.map_or(String::new(), |w| coords(w.x.coords())),
                    w.map_or(String::new(), |w| coords(w.z.coords())),
                    w.map_or(String::new(), |w| (w.report.i0 + 1).to_string()),
                    w.map_or(String::new(), |w| labels(&w.report.chain)),
                ],
            ];
            Ok(Payload {
                result: json!({
                    "root_type": s.root_type,
                    "bound": s.bound,
                    "instances": s.instances,
                    "defect": s.max_defect,
                    "structural_bound": s.structural_bound,
                    "witness": to_value(&s.witness),
                }),
                failures: vec![],
                csv: Some(csv),
            })
        }
        CommandKind::VerifyTheorem => {
            let r = verify_theorem_sweep(&spec, cfg.bound, cap)?;
            let csv = vec![
                ["root_type", "bound", "weyl_order", "instances", "strict_checks", "max_defect", "failures"]
                    .into_iter()
                    .map(String::from)
                    .collect(),
                vec![
                    r.root_type.clone(),
                    r.bound.to_string(),
                    r.weyl_order.to_string(),
                    r.instances.to_string(),
                    r.strict_checks.to_string(),
                    r.max_defect.to_string(),
                    r.failures.len().to_string(),
                ],
            ];
            let failures = r.failures.iter().map(to_value).collect();
            let mut result = to_value(&r);
            if let Value::Object(m) = &mut result {
                m.remove("failures");
            }
            Ok(Payload {
                result,
                failures,
                csv: Some(csv),
            })
        }
        CommandKind::KrVerify => {
            let reports: Vec<KrToricReport>;
            let result;
            let failures: Vec<Value>;
            match (&cfg.mu, cfg.i0) {
                (Some(mu), i0) => {
                    let mu = parse_lattice(&spec, "mu", mu)?;
                    let idx: Vec<usize> = match i0 {
                        Some(l) => vec![index(&spec, l)?],
                        None => (0..spec.rank()).collect(),
                    };
                    reports = idx
                        .into_iter()
                        .map(|i| verify_kr_rank1(&spec, &mu, i, cap))
                        .collect::<Result<_, _>>()?;
                    failures = reports
                        .iter()
                        .filter(|r| !r.verdict || !r.bridge_failures.is_empty())
                        .map(to_value)
                        .collect();
                    result = json!({ "root_type": ty.to_string(), "reports": to_value(&reports) });
                }
                (None, Some(_)) => return Err(RunError::Config("--i0 requires --mu".into())),
                (None, None) => {
                    let s = kr_sweep(&spec, cfg.bound, cap)?;
                    failures = s.failures.iter().map(to_value).collect();
                    result = json!({
                        "root_type": s.root_type,
                        "bound": s.bound,
                        "cases": s.cases,
                        "max_h1": s.max_h1,
                        "reports": to_value(&s.reports),
                    });
                    reports = s.reports;
                }
            }
            let mut csv: Vec<Vec<String>> = vec![[
                "root_type", "mu", "i0", "h0_total", "h0_wall", "image", "h1", "verdict",
            ]
            .into_iter()
            .map(String::from)
            .collect()];
            csv.extend(reports.iter().map(|r| {
                vec![
                    r.root_type.clone(),
                    coords(r.mu.coords()),
                    (r.i0 + 1).to_string(),
                    r.h0_total.to_string(),
                    r.h0_wall.to_string(),
                    r.image.to_string(),
                    r.h1.to_string(),
                    r.verdict.to_string(),
                ]
            }));
            Ok(Payload {
                result,
                failures,
                csv: Some(csv),
            })
        }
    }
}

fn render_csv(rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(row).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv is utf-8")
}

/// Dispatches `cfg` and serializes the report. Does not touch the filesystem.
pub fn run(cfg: &RunConfig) -> Outcome {
    let start = Instant::now();
    match execute(cfg) {
        Ok(payload) => {
            let failed = !payload.failures.is_empty();
            let code = if failed && (cfg.command.is_verification() || cfg.command == CommandKind::Membership) {
                1
            } else {
                0
            };
            let report = match (cfg.format, &payload.csv) {
                (Format::Csv, Some(rows)) => render_csv(rows),
                _ => {
                    let env = ReportEnvelope {
                        schema: SCHEMA,
                        tool: "weylkit",
                        version: env!("CARGO_PKG_VERSION"),
                        config: cfg.clone(),
                        timing_ms: start.elapsed().as_millis(),
                        result: payload.result,
                        failures: payload.failures,
                    };
                    let mut s = serde_json::to_string_pretty(&env).expect("envelope serializes");
                    s.push('\n');
                    s
                }
            };
            Outcome {
                code,
                report: Some(report),
                message: failed.then(|| "verification failures found".to_string()),
            }
        }
        Err(RunError::Config(m)) => Outcome {
            code: 2,
            report: None,
            message: Some(format!("config error: {m}")),
        },
        Err(RunError::Cap(m)) => Outcome {
            code: 3,
            report: None,
            message: Some(format!("cap exceeded: {m}")),
        },
        Err(RunError::Kernel(m)) => Outcome {
            code: 1,
            report: None,
            message: Some(format!("kernel failure: {m}")),
        },
    }
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
