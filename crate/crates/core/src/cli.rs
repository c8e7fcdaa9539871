//! The `mpp` command surface. Every command reads a workspace file and, with
//! `--json`, writes one back with its output under `result`.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::adams::{shift_alpha, RootNumberTable};
use crate::corpus;
use crate::discrete::DiscreteParam;
use crate::error::{Error, ErrorKind, Result};
use crate::format::{character_record, parameter_record, xms_record, Workspace};
use crate::half::HalfInteger;
use crate::inventory::Inventory;
use crate::nonvanish::{row_exchange, Criterion, Rule};
use crate::packets::{enumerate, enumerate_all};
use crate::suites::{self, SuiteReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

/// Colon-separated directories searched for a relative `--inventory` path.
pub const INVENTORY_PATH_VAR: &str = "MPP_INVENTORY_PATH";

#[derive(Parser, Debug)]
#[command(
    name = "mpp",
    version,
    about = "Local Arthur packets via extended multi-segments"
)]
struct Cli {
    /// Emit a workspace document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Workspace file whose inventory is used when the input has none.
    #[arg(long, global = true, value_name = "PATH")]
    inventory: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load and validate a workspace.
    Validate { file: PathBuf },
    /// Good parity, discreteness, temperedness and the DDR shape of ψ.
    Classify { file: PathBuf },
    /// Whether the discrete parameter (φ, ε) is cuspidal.
    Cuspidal { file: PathBuf },
    /// The parameter-level Jacquet module Jac_x.
    Jac {
        file: PathBuf,
        #[arg(long)]
        rho: String,
        /// Twice the exponent x.
        #[arg(long, allow_hyphen_values = true)]
        x2: i64,
    },
    /// Enumerate the packet of ψ, restricted to ε when one is given.
    Packet { file: PathBuf },
    /// Run the non-vanishing criterion on the workspace XMS.
    Nonvanish { file: PathBuf },
    /// Exchange positions k−1 and k of one row.
    Rowex {
        file: PathBuf,
        #[arg(long)]
        rho: String,
        #[arg(long)]
        k: usize,
    },
    /// The Adams shift of the workspace XMS.
    Adams {
        file: PathBuf,
        #[arg(long)]
        alpha: i64,
    },
    /// Every good-parity ψ with 2n ≤ max-n, one record per (ψ, ε).
    Atlas {
        #[arg(long)]
        max_n: u64,
    },
    /// Run a verification suite; exit 3 on any violation.
    Check {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 10)]
        max_n: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Rowex,
    Ddr,
    Adams,
    CuspidalOracle,
    Tempered,
    Ato,
    Multiplicity,
}

/// Runs one suite over the corpus of dimension at most `max_n`.
pub fn run_suite(inv: &Arc<Inventory>, suite: Suite, max_n: u64) -> Result<SuiteReport> {
    match suite {
        Suite::Rowex => suites::rowex(inv, max_n),
        Suite::Ddr => suites::ddr(inv, max_n, Rule::Standard),
        Suite::Adams => suites::adams(inv, max_n, &RootNumberTable::from_inventory(inv)),
        Suite::CuspidalOracle => Ok(suites::cuspidal_oracle(inv, max_n)),
        Suite::Tempered => suites::tempered(inv, max_n),
        Suite::Ato => suites::ato(inv, max_n),
        Suite::Multiplicity => suites::multiplicity(inv, max_n),
    }
}

struct Output {
    text: String,
    result: Value,
    code: i32,
}

impl Output {
    fn ok(text: String, result: Value) -> Self {
        Output {
            text,
            result,
            code: EXIT_OK,
        }
    }
}

fn read_source(path: &Path) -> Result<String> {
    let mut text = String::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Error::Schema {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    Ok(text)
}

fn resolve_inventory_path(path: &Path) -> PathBuf {
    if path.is_absolute() || path.exists() {
        return path.to_path_buf();
    }
    if let Some(dirs) = std::env::var_os(INVENTORY_PATH_VAR) {
        for dir in std::env::split_paths(&dirs) {
            let candidate = dir.join(path);
            if candidate.exists() {
                return candidate;
            }
        }
    }
    path.to_path_buf()
}

fn load_inventory(path: Option<&Path>) -> Result<Arc<Inventory>> {
    match path {
        None => Ok(Arc::new(Inventory::standard())),
        Some(p) => {
            let text = read_source(&resolve_inventory_path(p))?;
            Ok(Workspace::parse(&text, None)?.inventory)
        }
    }
}

fn need<'a, T>(v: &'a Option<T>, what: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| Error::Schema {
        path: what.to_string(),
        reason: "missing".into(),
    })
}

fn report_value(rep: &SuiteReport) -> Value {
    serde_json::to_value(rep).expect("report serializes")
}

fn execute(cli: &Cli, ws: Option<&mut Workspace>, inv: Arc<Inventory>) -> Result<Output> {
    match &cli.command {
        Command::Atlas { max_n } => {
            let params = corpus::good_parity(&inv, *max_n);
            let packets: Vec<_> = params
                .par_iter()
                .map(enumerate_all)
                .collect::<Result<_>>()?;
            let mut text = String::new();
            let mut records = Vec::new();
            for p in &packets {
                let c = p.psi.classify();
                for (eps, members) in &p.members {
                    let label = eps
                        .iter()
                        .map(|(_, s)| s.to_string())
                        .collect::<Vec<_>>()
                        .join("");
                    text.push_str(&format!(
                        "{}  [{}]  {}\n",
                        p.psi.display(),
                        label,
                        members.len()
                    ));
                    records.push(json!({
                        "parameter": parameter_record(&p.psi),
                        "character": character_record(&inv, eps),
                        "members": members.iter().map(xms_record).collect::<Vec<_>>(),
                        "diagnostics": {
                            "count": members.len(),
                            "tempered": c.tempered,
                            "nonneg_ddr": c.nonneg_ddr,
                        },
                    }));
                }
            }
            text.push_str(&format!(
                "{} parameters, {} records\n",
                packets.len(),
                records.len()
            ));
            Ok(Output::ok(
                text,
                json!({"command": "atlas", "max_n": max_n, "records": records}),
            ))
        }
        Command::Check { suite, max_n } => {
            let rep = run_suite(&inv, *suite, *max_n)?;
            let mut text = rep.summary();
            text.push('\n');
            for v in rep.violations.iter().take(20) {
                text.push_str(&format!("  {}\n", v));
            }
            if rep.violations.len() > 20 {
                text.push_str(&format!("  ... {} more\n", rep.violations.len() - 20));
            }
            let code = if rep.passed() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            };
            Ok(Output {
                text,
                result: json!({"command": "check", "max_n": max_n, "report": report_value(&rep)}),
                code,
            })
        }
        _ => execute_on(cli, ws.expect("file commands carry a workspace")),
    }
}

fn execute_on(cli: &Cli, ws: &mut Workspace) -> Result<Output> {
    let inv = ws.inventory.clone();
    match &cli.command {
        Command::Validate { .. } => {
            let mut text = format!("valid: {} labels", inv.len());
            if let Some(p) = &ws.parameter {
                text.push_str(&format!(", parameter of dimension {}", p.dimension()));
            }
            if ws.character.is_some() {
                text.push_str(", character");
            }
            if let Some(e) = &ws.xms {
                text.push_str(&format!(", xms with {} segments", e.segment_count()));
            }
            text.push('\n');
            Ok(Output::ok(
                text,
                json!({
                    "command": "validate",
                    "labels": inv.len(),
                    "parameter": ws.parameter.is_some(),
                    "character": ws.character.is_some(),
                    "xms": ws.xms.is_some(),
                }),
            ))
        }
        Command::Classify { .. } => {
            let psi = need(&ws.parameter, "parameter")?;
            let c = psi.classify();
            let labels = |v: &[crate::param::JordanBlock]| {
                v.iter().map(|b| b.label(&inv)).collect::<Vec<_>>()
            };
            let text = format!(
                "good parity: {}\ndiscrete: {}\ntempered: {}\nmultiplicity-free: {}\nnon-negative DDR: {}\n",
                c.good_parity, c.discrete, c.tempered, c.multiplicity_free, c.nonneg_ddr
            );
            Ok(Output::ok(
                text,
                json!({
                    "command": "classify",
                    "good_parity": c.good_parity,
                    "discrete": c.discrete,
                    "tempered": c.tempered,
                    "multiplicity_free": c.multiplicity_free,
                    "nonneg_ddr": c.nonneg_ddr,
                    "good": labels(&c.good),
                    "bad": labels(&c.bad),
                    "s_psi": character_record(&inv, &psi.s_psi()),
                }),
            ))
        }
        Command::Cuspidal { .. } => {
            let phi = DiscreteParam::new(
                need(&ws.parameter, "parameter")?.clone(),
                need(&ws.character, "character")?.clone(),
            )?;
            let c = phi.is_cuspidal();
            Ok(Output::ok(
                format!("cuspidal: {}\n", c),
                json!({"command": "cuspidal", "cuspidal": c}),
            ))
        }
        Command::Jac { rho, x2, .. } => {
            let phi = DiscreteParam::new(
                need(&ws.parameter, "parameter")?.clone(),
                need(&ws.character, "character")?.clone(),
            )?;
            let r = inv.lookup(rho)?;
            match phi.jac(r, HalfInteger::from_twice(*x2)) {
                None => Ok(Output::ok(
                    "jac: zero\n".into(),
                    json!({"command": "jac", "nonzero": false}),
                )),
                Some(j) => Ok(Output::ok(
                    format!(
                        "jac: {} with [{}]\n",
                        j.phi.display(),
                        j.eps
                            .iter()
                            .map(|(_, s)| s.to_string())
                            .collect::<Vec<_>>()
                            .join("")
                    ),
                    json!({
                        "command": "jac",
                        "nonzero": true,
                        "parameter": parameter_record(&j.phi),
                        "character": character_record(&inv, &j.eps),
                    }),
                )),
            }
        }
        Command::Packet { .. } => {
            let psi = need(&ws.parameter, "parameter")?;
            let groups: Vec<(crate::param::SignMap, Vec<crate::xms::Xms>)> = match &ws.character {
                Some(eps) => vec![(eps.clone(), enumerate(psi, eps)?)],
                None => enumerate_all(psi)?.members.into_iter().collect(),
            };
            let mut text = String::new();
            let mut out = Vec::new();
            let mut total = 0;
            for (eps, members) in &groups {
                total += members.len();
                let label = eps
                    .iter()
                    .map(|(_, s)| s.to_string())
                    .collect::<Vec<_>>()
                    .join("");
                text.push_str(&format!("[{}]: {} member(s)\n", label, members.len()));
                for m in members {
                    text.push_str(&format!("  {}\n", m.display()));
                }
                out.push(json!({
                    "character": character_record(&inv, eps),
                    "members": members.iter().map(xms_record).collect::<Vec<_>>(),
                }));
            }
            text.push_str(&format!("total: {}\n", total));
            Ok(Output::ok(
                text,
                json!({"command": "packet", "total": total, "packets": out}),
            ))
        }
        Command::Nonvanish { .. } => {
            let e = need(&ws.xms, "xms")?;
            let v = Criterion::default().evaluate(e)?;
            let failure = v
                .failure
                .as_ref()
                .map(|f| json!({"rho": inv.id(f.rho), "order": f.order, "k": f.k}));
            let mut text = format!("nonvanishing: {}\n", v.nonzero);
            if !v.star {
                text.push_str("condition (star) fails\n");
            }
            if let Some(f) = &v.failure {
                text.push_str(&format!(
                    "adjacent conditions fail in row {} at k = {} for order {:?}\n",
                    inv.id(f.rho),
                    f.k,
                    f.order
                ));
            }
            Ok(Output::ok(
                text,
                json!({
                    "command": "nonvanish",
                    "nonzero": v.nonzero,
                    "star": v.star,
                    "shift": v.shift,
                    "states": v.states,
                    "failure": failure,
                }),
            ))
        }
        Command::Rowex { rho, k, .. } => {
            let e = need(&ws.xms, "xms")?;
            let r = row_exchange(e, inv.lookup(rho)?, *k)?;
            let text = format!("{}\n", r.display());
            Ok(Output::ok(
                text,
                json!({"command": "rowex", "xms": xms_record(&r)}),
            ))
        }
        Command::Adams { alpha, .. } => {
            let e = need(&ws.xms, "xms")?;
            let s = shift_alpha(e, *alpha, &RootNumberTable::from_inventory(&inv))?;
            Ok(Output::ok(
                format!("{}\ncentral sign: {}\n", s.xms.display(), s.central_sign),
                json!({
                    "command": "adams",
                    "xms": xms_record(&s.xms),
                    "central_sign": s.central_sign.to_i8(),
                }),
            ))
        }
        Command::Atlas { .. } | Command::Check { .. } => unreachable!(),
    }
}

fn exit_code(err: &Error) -> i32 {
    match err.kind() {
        ErrorKind::Input => EXIT_INPUT,
        ErrorKind::Precondition => EXIT_PRECONDITION,
    }
}

fn file_of(cmd: &Command) -> Option<&Path> {
    match cmd {
        Command::Validate { file }
        | Command::Classify { file }
        | Command::Cuspidal { file }
        | Command::Jac { file, .. }
        | Command::Packet { file }
        | Command::Nonvanish { file }
        | Command::Rowex { file, .. }
        | Command::Adams { file, .. } => Some(file),
        Command::Atlas { .. } | Command::Check { .. } => None,
    }
}

fn run_parsed(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let inv = load_inventory(cli.inventory.as_deref())?;
    let mut ws = match file_of(&cli.command) {
        Some(path) => Some(Workspace::parse(&read_source(path)?, Some(inv.clone()))?),
        None => None,
    };
    let output = execute(cli, ws.as_mut(), inv.clone())?;
    if cli.json {
        let mut doc = ws.unwrap_or_else(|| Workspace::new(inv));
        doc.result = Some(output.result);
        let _ = out.write_all(doc.emit().as_bytes());
    } else {
        let _ = out.write_all(output.text.as_bytes());
    }
    Ok(output.code)
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as K;
            let shown = e.render().to_string();
            return match e.kind() {
                K::DisplayHelp | K::DisplayVersion => {
                    let _ = out.write_all(shown.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(shown.as_bytes());
                    EXIT_INPUT
                }
            };
        }
    };
    match run_parsed(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            exit_code(&e)
        }
    }
}
