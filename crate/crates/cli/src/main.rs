//! Subset-sum lattice toolkit command line.
//!
//! Exit codes: 0 success/accept, 1 reject/none, 2 usage or input error,
//! 3 invariant failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use latsum::instance::{density, gen_instance, PlantSpec, PolicyKind, RangePolicy};
use latsum::lo_classic::{solve_classic, LoConfig};
use latsum::modular::{build_tester, rejection_check, select_prime, PrimeSizing};
use latsum::reduction::ReductionParams;
use latsum::truncated::solve_truncated;

use latsum_cli::error::{HarnessError, Result};
use latsum_cli::experiment::{run_experiment, Check, ExperimentConfig, Method};
use latsum_cli::files::{
    parse_bigint, parse_rational_str, read_json, write_json, InstanceFile, TesterFile,
};
use latsum_cli::oracle::brute_force_oracle;
use latsum_cli::verify::verify_file;

#[derive(Parser)]
#[command(name = "latsum", version, about = "Lattice-based subset-sum toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Lovasz parameter as a fraction, e.g. 99/100.
    #[arg(long)]
    delta: Option<String>,
    /// Size-reduction bound as a fraction, e.g. 1/2.
    #[arg(long)]
    mu: Option<String>,
}

impl ParamArgs {
    fn params(&self) -> Result<ReductionParams> {
        let parse = |s: &Option<String>, name: &str, default: (u64, u64)| match s {
            Some(text) => parse_rational_str(text)
                .ok_or_else(|| HarnessError::Usage(format!("--{name} expects P/Q, got {text:?}"))),
            None => Ok(num_rational::BigRational::new(
                default.0.into(),
                default.1.into(),
            )),
        };
        let delta = parse(&self.delta, "delta", (99, 100))?;
        let mu = parse(&self.mu, "mu", (1, 2))?;
        ReductionParams::new(delta, mu).map_err(HarnessError::from)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance and write it as JSON.
    Gen {
        #[arg(long)]
        n: usize,
        /// One of bits:B, modular, classic, truncated.
        #[arg(long)]
        policy: String,
        #[arg(long)]
        seed: u64,
        /// Plant a solution of this weight.
        #[arg(long)]
        plant_weight: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 8)]
        slack_bits: u32,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Solve one target of a stored instance.
    Solve {
        /// One of classic, modular, truncated, oracle.
        #[arg(long)]
        method: String,
        #[arg(long)]
        instance: PathBuf,
        /// Decimal target value.
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Build or query multi-target testers.
    Tester {
        #[command(subcommand)]
        cmd: TesterCmd,
    },
    /// Run seeded trials and write a CSV of per-trial records.
    Experiment {
        #[arg(long)]
        method: String,
        /// Comma-separated dimensions, e.g. 8,12,16.
        #[arg(long)]
        n: String,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Comma-separated: gso-profile, babai-gap, spurious-count,
        /// oracle-equivalence.
        #[arg(long)]
        checks: Option<String>,
        #[arg(long)]
        csv: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Re-check the invariants of a stored instance or tester.
    Verify {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum TesterCmd {
    Build {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Prime of this bit length instead of the derived size.
        #[arg(long, conflicts_with = "prime_scale")]
        prime_bits: Option<u64>,
        /// Rational scale on the derived prime size.
        #[arg(long)]
        prime_scale: Option<String>,
        #[command(flatten)]
        params: ParamArgs,
    },
    Query {
        #[arg(long)]
        tester: PathBuf,
        /// Decimal target; repeatable.
        #[arg(long = "target", required = true, allow_hyphen_values = true)]
        targets: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Gen {
            n,
            policy,
            seed,
            plant_weight,
            out,
            slack_bits,
            params,
        } => {
            let params = params.params()?;
            let mut policy = parse_policy(&policy)?;
            policy.params = params;
            policy.slack_bits = slack_bits;
            let plant = match plant_weight {
                Some(w) => PlantSpec::Weight(w),
                None => PlantSpec::None,
            };
            let inst = gen_instance(n, &policy, seed, plant)?;
            write_json(&InstanceFile::from_instance(&inst), &out)?;
            println!(
                "wrote {} (n={}, {} weight bits, density {})",
                out.display(),
                inst.n,
                inst.weights.iter().map(|w| w.bits()).max().unwrap_or(0),
                density(&inst)
            );
            Ok(0)
        }
        Command::Solve {
            method,
            instance,
            target,
            params,
        } => {
            let params = params.params()?;
            let file: InstanceFile = read_json(&instance)?;
            let inst = file.to_instance(&instance)?;
            inst.check_invariants()?;
            let target: BigInt = parse_bigint(&target, &instance, "target")?;
            let config = LoConfig::new(params.clone());
            let witness = match method.as_str() {
                "classic" => solve_classic(&inst.weights, &target, &config)?,
                "truncated" => solve_truncated(&inst.weights, &target, &config)?,
                "oracle" => brute_force_oracle(&inst.weights, &target)?,
                "modular" => {
                    let p = select_prime(inst.n, &params, &PrimeSizing::Auto);
                    let tester = build_tester(&inst.weights, &p, &params)?;
                    if !tester.is_usable() {
                        return Err(HarnessError::Invariant(format!(
                            "tester certificate failed: {:?}",
                            tester.cert()
                        )));
                    }
                    tester.query(&target)?.witness().map(<[u8]>::to_vec)
                }
                other => {
                    return Err(HarnessError::Usage(format!(
                        "unknown method {other:?}; expected classic, modular, truncated or oracle"
                    )));
                }
            };
            match witness {
                Some(e) => {
                    println!("{}", serde_json::json!({ "e": e }));
                    Ok(0)
                }
                None => {
                    println!("none");
                    Ok(1)
                }
            }
        }
        Command::Tester { cmd } => run_tester(cmd),
        Command::Experiment {
            method,
            n,
            trials,
            seed,
            checks,
            csv,
            params,
        } => {
            let config = ExperimentConfig {
                method: Method::parse(&method)?,
                n_list: parse_n_list(&n)?,
                trials,
                seed,
                checks: match checks {
                    Some(list) => Check::parse_list(&list)?,
                    None => Default::default(),
                },
                params: params.params()?,
            };
            let report = run_experiment(&config)?;
            std::fs::write(&csv, report.to_csv()).map_err(|source| HarnessError::Io {
                path: csv.clone(),
                source,
            })?;
            println!("wrote {} ({} records)", csv.display(), report.records.len());
            print!("{}", report.table());
            Ok(0)
        }
        Command::Verify { file } => {
            let outcomes = verify_file(&file)?;
            let mut all_ok = true;
            for o in &outcomes {
                println!(
                    "{} {}: {}",
                    if o.ok { "ok  " } else { "FAIL" },
                    o.name,
                    o.detail
                );
                all_ok &= o.ok;
            }
            Ok(if all_ok { 0 } else { 3 })
        }
    }
}

fn run_tester(cmd: TesterCmd) -> Result<u8> {
    match cmd {
        TesterCmd::Build {
            instance,
            out,
            prime_bits,
            prime_scale,
            params,
        } => {
            let params = params.params()?;
            let file: InstanceFile = read_json(&instance)?;
            let inst = file.to_instance(&instance)?;
            inst.check_invariants()?;
            let sizing = match (prime_bits, prime_scale) {
                (Some(bits), _) => PrimeSizing::Bits(bits),
                (None, Some(scale)) => {
                    PrimeSizing::Scale(parse_rational_str(&scale).ok_or_else(|| {
                        HarnessError::Usage(format!("--prime-scale expects P/Q, got {scale:?}"))
                    })?)
                }
                (None, None) => PrimeSizing::Auto,
            };
            let p = select_prime(inst.n, &params, &sizing);
            if let Err(reason) = rejection_check(&inst.weights, &inst.range_bound, &p) {
                eprintln!("note: sampling sanity check failed: {reason}");
            }
            let tester = build_tester(&inst.weights, &p, &params)?;
            write_json(&TesterFile::from_tester(&tester), &out)?;
            if tester.is_usable() {
                println!(
                    "wrote {} (p has {} bits, {} reduction swaps)",
                    out.display(),
                    p.bits(),
                    tester.reduction_stats().swaps
                );
                Ok(0)
            } else {
                let l1: Vec<String> = tester
                    .l1_norms()
                    .iter()
                    .map(|l| latsum_cli::experiment::format_ratio(&(l * 2u32), &p))
                    .collect();
                eprintln!(
                    "tester certificate failed: l1_ok={:?} full_rank={} l1/(p/2)={l1:?}",
                    tester.cert().l1_ok,
                    tester.cert().full_rank
                );
                Ok(3)
            }
        }
        TesterCmd::Query { tester, targets } => {
            let file: TesterFile = read_json(&tester)?;
            let t = file.to_tester(&tester)?;
            if !t.is_usable() {
                return Err(HarnessError::Core(latsum::Error::UnusableTester));
            }
            let mut all_accept = true;
            for raw in &targets {
                let target = parse_bigint(raw, &tester, "target")?;
                match t.query(&target)? {
                    latsum::modular::QueryResult::Accept { witness } => {
                        println!("{target} accept {}", serde_json::json!({ "e": witness }));
                    }
                    latsum::modular::QueryResult::Reject => {
                        println!("{target} reject");
                        all_accept = false;
                    }
                }
            }
            Ok(if all_accept { 0 } else { 1 })
        }
    }
}

fn parse_policy(s: &str) -> Result<RangePolicy> {
    let kind =
        match s {
            "modular" => PolicyKind::ModularTheorem,
            "classic" => PolicyKind::ClassicLo,
            "truncated" => PolicyKind::TruncatedLo,
            other => match other.strip_prefix("bits:") {
                Some(bits) => PolicyKind::ExplicitBits(bits.parse().map_err(|_| {
                    HarnessError::Usage(format!("bad bit count in policy {other:?}"))
                })?),
                None => {
                    return Err(HarnessError::Usage(format!(
                        "unknown policy {other:?}; expected bits:B, modular, classic or truncated"
                    )));
                }
            },
        };
    Ok(RangePolicy::new(kind))
}

fn parse_n_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| HarnessError::Usage(format!("bad dimension {t:?}")))
        })
        .collect()
}
