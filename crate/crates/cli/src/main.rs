//! `recsum`: solve `u_n + u_m = w p_1^z_1 ... p_s^z_s` for a binary recurrence
//! and emit a completeness certificate.
//!
//! Exit codes: 0 complete (or a requested plain search), 2 exceptional
//! instance, 3 hypothesis violation, 1 malformed input or internal error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use recsum_core::bounds::initial_bounds;
use recsum_core::json::parse_bigint;
use recsum_core::recurrence::{check_exceptional, Instance, Recurrence};
use recsum_core::solver::{
    brute_force, certify, exceptional_limit, search_only, solve, Certified, Solution, SolutionSet, SolveConfig, Status,
};

/// Options an instance file may carry; command-line flags take precedence.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileOptions {
    precision_bits: Option<u32>,
    #[serde(rename = "lattice_C", default, with = "recsum_core::json::opt_bigint")]
    lattice_c: Option<BigInt>,
    max_rounds: Option<usize>,
    #[serde(default)]
    brute_force_only: bool,
    max_n: Option<u64>,
}

/// On-disk instance: `{"A":1,"B":1,"u0":0,"u1":1,"w":1,"primes":[2,3],"options":{...}}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    #[serde(rename = "A", with = "recsum_core::json::bigint")]
    a: BigInt,
    #[serde(rename = "B", with = "recsum_core::json::bigint")]
    b: BigInt,
    #[serde(with = "recsum_core::json::bigint")]
    u0: BigInt,
    #[serde(with = "recsum_core::json::bigint")]
    u1: BigInt,
    #[serde(with = "recsum_core::json::bigint")]
    w: BigInt,
    primes: Vec<u64>,
    #[serde(default)]
    options: FileOptions,
    #[serde(default)]
    #[allow(dead_code)]
    description: Option<String>,
}

impl InstanceFile {
    fn instance(&self) -> Instance {
        Instance {
            recurrence: Recurrence { a: self.a.clone(), b: self.b.clone(), u0: self.u0.clone(), u1: self.u1.clone() },
            w: self.w.clone(),
            primes: self.primes.clone(),
        }
    }
}

#[derive(Parser)]
#[command(name = "recsum", version, about = "Sums of two terms of a binary recurrence equal to S-units")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Instance JSON file.
    instance: PathBuf,
    /// Write the result here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Tuning {
    /// Extra p-adic working precision in bits.
    #[arg(long)]
    precision_bits: Option<u32>,
    /// First approximation-lattice constant C (e.g. `10^6300`).
    #[arg(long = "lattice-C", value_parser = parse_big)]
    lattice_c: Option<BigInt>,
    /// Maximum number of real/p-adic reduction rounds.
    #[arg(long)]
    max_rounds: Option<usize>,
    /// Refuse to search exhaustively beyond this index.
    #[arg(long, default_value_t = SolveConfig::default().max_search)]
    max_search: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Find every solution and write the completeness certificate.
    Solve {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        tuning: Tuning,
        /// Write the certificate to a separate file instead of embedding it.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Write the ledger of initial constants.
    Bounds {
        #[command(flatten)]
        common: Common,
    },
    /// List every solution with `n <= max-n` by exhaustive search.
    BruteForce {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_n: u64,
    },
    /// Run the bound reductions only and write the certificate.
    Reduce {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Validate the hypotheses and test for exceptional families; with
    /// `--result`, also re-verify a result file by exact arithmetic.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        result: Option<PathBuf>,
    },
}

fn parse_big(s: &str) -> Result<BigInt, String> {
    parse_bigint(s).ok_or_else(|| format!("not an integer: {s}"))
}

/// Failure with the exit code it maps to.
struct Failure(u8, String);

impl From<recsum_core::Error> for Failure {
    fn from(e: recsum_core::Error) -> Self {
        match e {
            recsum_core::Error::HypothesisViolated(_) | recsum_core::Error::DegenerateSequence(_) => {
                Failure(3, e.to_string())
            }
            _ => Failure(1, e.to_string()),
        }
    }
}

fn load_instance(path: &Path) -> Result<InstanceFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(1, format!("{}: {e}", path.display())))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path_s = e.path().to_string();
        let inner = e.into_inner();
        Failure(1, format!("{}: field `{path_s}`: {inner}", path.display()))
    })
}

fn write_json(path: Option<&Path>, v: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Failure(1, e.to_string()))? + "\n";
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure(1, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_value<T: Serialize>(t: &T) -> Result<Value, Failure> {
    serde_json::to_value(t).map_err(|e| Failure(1, e.to_string()))
}

fn config_of(tuning: &Tuning, opts: &FileOptions) -> SolveConfig {
    let d = SolveConfig::default();
    SolveConfig {
        precision_bits: tuning.precision_bits.or(opts.precision_bits).unwrap_or(d.precision_bits),
        lattice_c: tuning.lattice_c.clone().or_else(|| opts.lattice_c.clone()),
        max_rounds: tuning.max_rounds.or(opts.max_rounds).unwrap_or(d.max_rounds),
        max_search: tuning.max_search,
    }
}

fn exit_for(status: Status) -> u8 {
    match status {
        Status::Complete | Status::Searched => 0,
        Status::Exceptional => 2,
        Status::HypothesisViolated => 3,
    }
}

fn result_value(inst: &Instance, set: &SolutionSet, embed_certificate: bool) -> Result<Value, Failure> {
    let mut v = json!({
        "instance": to_value(inst)?,
        "status": to_value(&set.status)?,
        "solution_count": set.solutions.len(),
        "solutions": to_value(&set.solutions)?,
    });
    if let Some(m) = &set.message {
        v["message"] = json!(m);
    }
    if let Some(e) = &set.exceptional {
        v["exceptional"] = to_value(e)?;
    }
    if embed_certificate {
        if let Some(c) = &set.certificate {
            v["certificate"] = to_value(c)?;
        }
    }
    Ok(v)
}

fn verify_result(inst: &Instance, path: &Path) -> Result<usize, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(1, format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure(1, format!("{}: {e}", path.display())))?;
    let sols = v
        .get("solutions")
        .cloned()
        .ok_or_else(|| Failure(1, format!("{}: missing field `solutions`", path.display())))?;
    let sols: Vec<Solution> =
        serde_json::from_value(sols).map_err(|e| Failure(1, format!("{}: field `solutions`: {e}", path.display())))?;
    if let Some(c) = v.get("solution_count").and_then(Value::as_u64) {
        if c as usize != sols.len() {
            return Err(Failure(1, format!("solution_count {c} does not match {} listed solutions", sols.len())));
        }
    }
    if let Some(bad) = sols.iter().find(|s| !s.verify(inst)) {
        return Err(Failure(1, format!("solution (n={}, m={}, z={:?}) does not verify", bad.n, bad.m, bad.z)));
    }
    Ok(sols.len())
}

fn run(cli: Cli) -> Result<u8, Failure> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().map_err(|e| Failure(1, e.to_string()))?;
    }
    match cli.command {
        Command::Solve { common, tuning, certificate } => {
            let file = load_instance(&common.instance)?;
            let inst = file.instance();
            let set = if file.options.brute_force_only {
                let n =
                    file.options.max_n.ok_or_else(|| Failure(1, "brute_force_only requires options.max_n".into()))?;
                search_only(&inst, n)?
            } else {
                let mut cfg = config_of(&tuning, &file.options);
                if let Some(n) = file.options.max_n {
                    cfg.max_search = cfg.max_search.max(n);
                }
                solve(&inst, &cfg)?
            };
            if let (Some(path), Some(c)) = (&certificate, &set.certificate) {
                write_json(Some(path), &to_value(c)?)?;
            }
            write_json(common.output.as_deref(), &result_value(&inst, &set, certificate.is_none())?)?;
            Ok(exit_for(set.status))
        }
        Command::Bounds { common } => {
            let inst = load_instance(&common.instance)?.instance();
            let bd = inst.validate()?;
            let ib = initial_bounds(&inst, &bd)?;
            let v = json!({
                "instance": to_value(&inst)?,
                "constants": to_value(&ib.ledger)?,
                "bounds": to_value(&ib.state)?,
            });
            write_json(common.output.as_deref(), &v)?;
            Ok(0)
        }
        Command::BruteForce { common, max_n } => {
            let inst = load_instance(&common.instance)?.instance();
            inst.validate()?;
            let sols = brute_force(&inst, max_n)?;
            let v = json!({
                "instance": to_value(&inst)?,
                "max_n": max_n,
                "solution_count": sols.len(),
                "solutions": to_value(&sols)?,
            });
            write_json(common.output.as_deref(), &v)?;
            Ok(0)
        }
        Command::Reduce { common, tuning } => {
            let file = load_instance(&common.instance)?;
            let inst = file.instance();
            match certify(&inst, &config_of(&tuning, &file.options))? {
                Certified::Bound(c) => {
                    write_json(
                        common.output.as_deref(),
                        &json!({ "instance": to_value(&inst)?, "certificate": to_value(&c)? }),
                    )?;
                    Ok(0)
                }
                Certified::Verdict(set) => {
                    write_json(common.output.as_deref(), &result_value(&inst, &set, false)?)?;
                    Ok(exit_for(set.status))
                }
            }
        }
        Command::Check { common, result } => {
            let inst = load_instance(&common.instance)?.instance();
            let limit = exceptional_limit(&inst);
            let mut v = json!({ "instance": to_value(&inst)? });
            let code = match inst.validate().and_then(|_| check_exceptional(&inst, limit)) {
                Err(e) => {
                    let f = Failure::from(e);
                    v["status"] = json!(if f.0 == 3 { "hypothesis_violated" } else { "error" });
                    v["message"] = json!(f.1);
                    f.0
                }
                Ok(report) if report.is_exceptional() => {
                    v["status"] = json!("exceptional");
                    v["message"] = json!(report.families.join("; "));
                    v["exceptional"] = to_value(&report)?;
                    2
                }
                Ok(report) => {
                    v["status"] = json!("ok");
                    v["exceptional"] = to_value(&report)?;
                    0
                }
            };
            if let Some(path) = result {
                let n = verify_result(&inst, &path)?;
                v["verified_solutions"] = json!(n);
            }
            write_json(common.output.as_deref(), &v)?;
            Ok(code)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("recsum: {msg}");
            ExitCode::from(code)
        }
    }
}
