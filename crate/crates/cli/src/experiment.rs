//! Seeded experiment runner: per-trial records, CSV output and aggregate
//! statistics for every probabilistic claim the solvers make.
//!
//! CSV output contains only seed-deterministic columns, so a fixed
//! configuration reproduces the file byte for byte; wall-clock timings
//! feed the aggregate table instead.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};

use latsum::gso::gram_schmidt;
use latsum::instance::{derive_trial_seed, gen_instance, PlantSpec, PolicyKind, RangePolicy};
use latsum::lo_classic::{count_spurious, solve_classic_detailed, LoConfig};
use latsum::modular::{build_tester, gso_profile_ok, ModularTester};
use latsum::reduction::ReductionParams;
use latsum::truncated::{check_babai_gap, solve_truncated_detailed};

use crate::error::{HarnessError, Result};
use crate::oracle::{all_subset_sums, brute_force_oracle, MAX_ENUM_N, MAX_MITM_N};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Classic,
    Modular,
    Truncated,
}

impl Method {
    pub fn parse(s: &str) -> Result<Method> {
        match s {
            "classic" => Ok(Method::Classic),
            "modular" => Ok(Method::Modular),
            "truncated" => Ok(Method::Truncated),
            other => Err(HarnessError::Usage(format!(
                "unknown method {other:?}; expected classic, modular or truncated"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Classic => "classic",
            Method::Modular => "modular",
            Method::Truncated => "truncated",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    GsoProfile,
    BabaiGap,
    SpuriousCount,
    OracleEquivalence,
}

impl Check {
    pub fn parse_list(s: &str) -> Result<BTreeSet<Check>> {
        let mut out = BTreeSet::new();
        for item in s.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let check = match item {
                "gso-profile" => Check::GsoProfile,
                "babai-gap" => Check::BabaiGap,
                "spurious-count" => Check::SpuriousCount,
                "oracle-equivalence" => Check::OracleEquivalence,
                other => {
                    return Err(HarnessError::Usage(format!("unknown check {other:?}")));
                }
            };
            out.insert(check);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub method: Method,
    pub n_list: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub checks: BTreeSet<Check>,
    pub params: ReductionParams,
}

impl ExperimentConfig {
    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(HarnessError::Usage("trials must be at least 1".into()));
        }
        if self.n_list.is_empty() {
            return Err(HarnessError::Usage("need at least one dimension".into()));
        }
        if self.checks.contains(&Check::OracleEquivalence) {
            if let Some(&n) = self.n_list.iter().find(|&&n| n > MAX_MITM_N) {
                return Err(HarnessError::Usage(format!(
                    "oracle-equivalence not available at n = {n} (max {MAX_MITM_N})"
                )));
            }
        }
        Ok(())
    }
}

/// One trial's outcome. Timing fields stay out of the CSV.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub build_success: Option<bool>,
    pub recovered: Option<bool>,
    pub gso_profile_pass: Option<bool>,
    pub babai_gap_pass: Option<bool>,
    pub spurious_count: Option<usize>,
    pub oracle_agree: Option<bool>,
    /// Per-row `l1 / (p/2)` ratios, six decimals; below one passes.
    pub l1_margins: Vec<String>,
    pub solve_ms: f64,
    pub query_mean_ms: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Aggregate {
    pub n: usize,
    pub trials: usize,
    pub build_rate: Option<f64>,
    pub recovery_rate: Option<f64>,
    pub gso_profile_rate: Option<f64>,
    pub babai_gap_rate: Option<f64>,
    pub mean_spurious: Option<f64>,
    pub oracle_rate: Option<f64>,
    pub solve_ms_p50: f64,
    pub solve_ms_p90: f64,
    pub query_mean_ms_p50: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub method: Method,
    pub records: Vec<TrialRecord>,
    pub aggregates: Vec<Aggregate>,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let mut records = Vec::with_capacity(config.n_list.len() * config.trials);
    for &n in &config.n_list {
        for trial in 0..config.trials {
            let seed = derive_trial_seed(config.seed, n, trial);
            let record = match config.method {
                Method::Classic => run_classic_trial(config, n, trial, seed)?,
                Method::Modular => run_modular_trial(config, n, trial, seed)?,
                Method::Truncated => run_truncated_trial(config, n, trial, seed)?,
            };
            records.push(record);
        }
    }
    records.sort_by_key(|r| (r.n, r.trial));
    let aggregates = aggregate(&records, &config.n_list, config.trials);
    Ok(ExperimentReport {
        method: config.method,
        records,
        aggregates,
    })
}

fn policy_for(config: &ExperimentConfig, kind: PolicyKind) -> RangePolicy {
    let mut policy = RangePolicy::new(kind);
    policy.params = config.params.clone();
    policy
}

fn run_classic_trial(
    config: &ExperimentConfig,
    n: usize,
    trial: usize,
    seed: u64,
) -> Result<TrialRecord> {
    let policy = policy_for(config, PolicyKind::ClassicLo);
    let inst = gen_instance(n, &policy, seed, PlantSpec::DefaultWeight)?;
    let planted = inst.planted.as_ref().expect("planted by construction");
    let target = BigInt::from(planted.target.clone());

    let solver_config = LoConfig::new(config.params.clone());
    let start = Instant::now();
    let outcome = solve_classic_detailed(&inst.weights, &target, &solver_config)?;
    let solve_ms = start.elapsed().as_secs_f64() * 1e3;

    let spurious_count = if config.checks.contains(&Check::SpuriousCount) {
        outcome
            .reduced
            .as_ref()
            .map(|reduced| count_spurious(reduced, &planted.e, &solver_config.resolve_scale(n)))
    } else {
        None
    };
    let oracle_agree = oracle_confirms(
        &config.checks,
        &inst.weights,
        &target,
        outcome.solution.as_deref(),
    )?;

    Ok(TrialRecord {
        n,
        trial,
        seed,
        build_success: None,
        recovered: Some(outcome.solution.is_some()),
        gso_profile_pass: None,
        babai_gap_pass: None,
        spurious_count,
        oracle_agree,
        l1_margins: Vec::new(),
        solve_ms,
        query_mean_ms: None,
    })
}

fn run_truncated_trial(
    config: &ExperimentConfig,
    n: usize,
    trial: usize,
    seed: u64,
) -> Result<TrialRecord> {
    let policy = policy_for(config, PolicyKind::TruncatedLo);
    let inst = gen_instance(n, &policy, seed, PlantSpec::DefaultWeight)?;
    let planted = inst.planted.as_ref().expect("planted by construction");
    let target = BigInt::from(planted.target.clone());

    let solver_config = LoConfig::new(config.params.clone());
    let start = Instant::now();
    let outcome = solve_truncated_detailed(&inst.weights, &target, &solver_config)?;
    let solve_ms = start.elapsed().as_secs_f64() * 1e3;

    let babai_gap_pass = if config.checks.contains(&Check::BabaiGap) {
        outcome
            .reduced
            .as_ref()
            .map(|(basis, gso)| check_babai_gap(basis, gso, &config.params).all_ok())
    } else {
        None
    };
    let oracle_agree = oracle_confirms(
        &config.checks,
        &inst.weights,
        &target,
        outcome.solution.as_deref(),
    )?;

    Ok(TrialRecord {
        n,
        trial,
        seed,
        build_success: None,
        recovered: Some(outcome.solution.is_some()),
        gso_profile_pass: None,
        babai_gap_pass,
        spurious_count: None,
        oracle_agree,
        l1_margins: Vec::new(),
        solve_ms,
        query_mean_ms: None,
    })
}

fn run_modular_trial(
    config: &ExperimentConfig,
    n: usize,
    trial: usize,
    seed: u64,
) -> Result<TrialRecord> {
    let policy = policy_for(config, PolicyKind::ModularTheorem);
    let p = policy.prime_for(n).expect("modular policy carries a prime");
    let inst = gen_instance(n, &policy, seed, PlantSpec::DefaultWeight)?;
    let planted = inst.planted.as_ref().expect("planted by construction");

    let start = Instant::now();
    let tester = build_tester(&inst.weights, &p, &config.params)?;
    let solve_ms = start.elapsed().as_secs_f64() * 1e3;

    let l1_margins = tester
        .l1_norms()
        .iter()
        .map(|l1| format_ratio(&(l1 * 2u32), tester.spec().prime()))
        .collect();

    let build_success = tester.is_usable();
    let mut recovered = None;
    let mut gso_profile_pass = None;
    let mut oracle_agree = None;
    let mut query_mean_ms = None;

    if build_success {
        let target = BigInt::from(planted.target.clone());
        let start = Instant::now();
        let result = tester.query(&target)?;
        let mut queries = 1u32;
        recovered = Some(result.is_accept());

        if config.checks.contains(&Check::GsoProfile) {
            let gso = gram_schmidt(tester.residue_matrix())?;
            gso_profile_pass = Some(gso_profile_ok(&gso, &config.params));
        }
        if config.checks.contains(&Check::OracleEquivalence) {
            let (agree, q) = oracle_equivalence(&tester, &inst.weights, seed)?;
            oracle_agree = Some(agree);
            queries += q;
        }
        query_mean_ms = Some(start.elapsed().as_secs_f64() * 1e3 / queries as f64);
    }

    Ok(TrialRecord {
        n,
        trial,
        seed,
        build_success: Some(build_success),
        recovered,
        gso_profile_pass,
        babai_gap_pass: None,
        spurious_count: None,
        oracle_agree,
        l1_margins,
        solve_ms,
        query_mean_ms,
    })
}

/// Confirms any returned witness against the brute-force oracle.
fn oracle_confirms(
    checks: &BTreeSet<Check>,
    weights: &[BigUint],
    target: &BigInt,
    witness: Option<&[u8]>,
) -> Result<Option<bool>> {
    if !checks.contains(&Check::OracleEquivalence) || witness.is_none() {
        return Ok(None);
    }
    let feasible = brute_force_oracle(weights, target)?.is_some();
    Ok(Some(feasible))
}

/// Compares tester decisions against ground truth: for `n <= 20` every
/// subset sum must accept and perturbed non-sums must reject; above that
/// a seeded sample of targets is checked with meet-in-the-middle.
fn oracle_equivalence(
    tester: &ModularTester,
    weights: &[BigUint],
    seed: u64,
) -> Result<(bool, u32)> {
    let n = weights.len();
    let mut queries = 0u32;
    if n <= MAX_ENUM_N {
        let table = all_subset_sums(weights)?;
        for sum in table.keys() {
            queries += 1;
            if !tester.query(sum)?.is_accept() {
                return Ok((false, queries));
            }
        }
        for sum in table.keys() {
            for delta in [1i64, -1] {
                let probe = sum + BigInt::from(delta);
                if !table.contains_key(&probe) {
                    queries += 1;
                    if tester.query(&probe)?.is_accept() {
                        return Ok((false, queries));
                    }
                }
            }
        }
        Ok((true, queries))
    } else {
        // sampled masks from a splitmix-style walk; decisions checked
        // both ways against meet-in-the-middle
        let mut state = seed | 1;
        for _ in 0..32 {
            state = state
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add(0xBF58_476D_1CE4_E5B9);
            let mask = state >> (64 - n as u32);
            let sum: BigUint = weights
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, w)| w.clone())
                .sum();
            for delta in [0i64, 1] {
                let target = BigInt::from(sum.clone()) + BigInt::from(delta);
                queries += 1;
                let decision = tester.query(&target)?.is_accept();
                let truth = brute_force_oracle(weights, &target)?.is_some();
                if decision != truth {
                    return Ok((false, queries));
                }
            }
        }
        Ok((true, queries))
    }
}

/// `num/den` to six decimal places by exact integer division.
pub fn format_ratio(num: &BigUint, den: &BigUint) -> String {
    let scaled = num * 1_000_000u64 / den;
    let int = &scaled / 1_000_000u64;
    let frac = &scaled % 1_000_000u64;
    format!("{int}.{frac:06}")
}

fn aggregate(records: &[TrialRecord], n_list: &[usize], trials: usize) -> Vec<Aggregate> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &n in n_list {
        if !seen.insert(n) {
            continue;
        }
        let rows: Vec<&TrialRecord> = records.iter().filter(|r| r.n == n).collect();
        let rate = |f: &dyn Fn(&TrialRecord) -> Option<bool>| -> Option<f64> {
            let hits: Vec<bool> = rows.iter().filter_map(|r| f(r)).collect();
            if hits.is_empty() {
                None
            } else {
                Some(hits.iter().filter(|&&b| b).count() as f64 / hits.len() as f64)
            }
        };
        let spurious: Vec<usize> = rows.iter().filter_map(|r| r.spurious_count).collect();
        let mean_spurious = if spurious.is_empty() {
            None
        } else {
            Some(spurious.iter().sum::<usize>() as f64 / spurious.len() as f64)
        };
        let mut solve_times: Vec<f64> = rows.iter().map(|r| r.solve_ms).collect();
        solve_times.sort_by(f64::total_cmp);
        let mut query_times: Vec<f64> = rows.iter().filter_map(|r| r.query_mean_ms).collect();
        query_times.sort_by(f64::total_cmp);

        out.push(Aggregate {
            n,
            trials,
            build_rate: rate(&|r| r.build_success),
            recovery_rate: rate(&|r| r.recovered),
            gso_profile_rate: rate(&|r| r.gso_profile_pass),
            babai_gap_rate: rate(&|r| r.babai_gap_pass),
            mean_spurious,
            oracle_rate: rate(&|r| r.oracle_agree),
            solve_ms_p50: percentile(&solve_times, 0.5),
            solve_ms_p90: percentile(&solve_times, 0.9),
            query_mean_ms_p50: if query_times.is_empty() {
                None
            } else {
                Some(percentile(&query_times, 0.5))
            },
        });
    }
    out
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let idx = ((sorted.len() as f64 - 1.0) * q).round() as usize;
    sorted[idx.min(sorted.len() - 1)]
}

impl ExperimentReport {
    /// Deterministic CSV: schema header row, then one row per trial
    /// sorted by `(n, trial)`.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record([
                "method",
                "n",
                "trial",
                "seed",
                "build_success",
                "recovered",
                "gso_profile_pass",
                "babai_gap_pass",
                "spurious_count",
                "oracle_agree",
                "l1_margins",
            ])
            .expect("csv write to memory cannot fail");
        let opt_bool = |b: Option<bool>| b.map(|v| v.to_string()).unwrap_or_default();
        for r in &self.records {
            writer
                .write_record([
                    self.method.name().to_string(),
                    r.n.to_string(),
                    r.trial.to_string(),
                    r.seed.to_string(),
                    opt_bool(r.build_success),
                    opt_bool(r.recovered),
                    opt_bool(r.gso_profile_pass),
                    opt_bool(r.babai_gap_pass),
                    r.spurious_count.map(|c| c.to_string()).unwrap_or_default(),
                    opt_bool(r.oracle_agree),
                    r.l1_margins.join(";"),
                ])
                .expect("csv write to memory cannot fail");
        }
        String::from_utf8(writer.into_inner().expect("csv flush")).expect("csv is utf8")
    }

    /// Human-readable aggregate table with timing percentiles.
    pub fn table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "method={} | n trials build recover gso-profile babai-gap spurious oracle solve-p50ms solve-p90ms query-p50ms\n",
            self.method.name()
        ));
        let pct = |v: Option<f64>| match v {
            Some(x) => format!("{:.1}%", x * 100.0),
            None => "-".into(),
        };
        let num = |v: Option<f64>| match v {
            Some(x) => format!("{x:.2}"),
            None => "-".into(),
        };
        for a in &self.aggregates {
            out.push_str(&format!(
                "{:>4} {:>6} {:>6} {:>8} {:>11} {:>9} {:>8} {:>6} {:>11.2} {:>11.2} {:>11}\n",
                a.n,
                a.trials,
                pct(a.build_rate),
                pct(a.recovery_rate),
                pct(a.gso_profile_rate),
                pct(a.babai_gap_rate),
                num(a.mean_spurious),
                pct(a.oracle_rate),
                a.solve_ms_p50,
                a.solve_ms_p90,
                num(a.query_mean_ms_p50),
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(method: Method, n: usize, trials: usize, checks: &str) -> ExperimentConfig {
        ExperimentConfig {
            method,
            n_list: vec![n],
            trials,
            seed: 7,
            checks: Check::parse_list(checks).unwrap(),
            params: ReductionParams::default(),
        }
    }

    #[test]
    fn csv_is_deterministic() {
        let cfg = config(Method::Classic, 6, 2, "spurious-count,oracle-equivalence");
        let a = run_experiment(&cfg).unwrap().to_csv();
        let b = run_experiment(&cfg).unwrap().to_csv();
        assert_eq!(a, b);
        assert!(a.starts_with("method,n,trial,seed,"));
        assert_eq!(a.lines().count(), 3);
    }

    #[test]
    fn modular_run_produces_margins_and_agreement() {
        let cfg = config(Method::Modular, 8, 2, "gso-profile,oracle-equivalence");
        let report = run_experiment(&cfg).unwrap();
        for r in &report.records {
            assert_eq!(r.l1_margins.len(), 8);
            if r.build_success == Some(true) {
                assert_eq!(r.recovered, Some(true));
                assert_eq!(r.oracle_agree, Some(true));
            }
        }
        assert_eq!(report.aggregates.len(), 1);
    }

    #[test]
    fn truncated_run_reports_gap() {
        let cfg = config(Method::Truncated, 6, 2, "babai-gap");
        let report = run_experiment(&cfg).unwrap();
        assert!(report.records.iter().all(|r| r.babai_gap_pass.is_some()));
    }

    #[test]
    fn rejects_oversized_oracle_equivalence() {
        let cfg = config(Method::Modular, 41, 1, "oracle-equivalence");
        assert!(run_experiment(&cfg).is_err());
    }

    #[test]
    fn ratio_formatting() {
        assert_eq!(
            format_ratio(&BigUint::from(1u32), &BigUint::from(2u32)),
            "0.500000"
        );
        assert_eq!(
            format_ratio(&BigUint::from(7u32), &BigUint::from(3u32)),
            "2.333333"
        );
    }
}
