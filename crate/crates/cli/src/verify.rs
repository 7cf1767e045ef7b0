//! Re-checks every stored invariant of instance and tester files.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;

use latsum::gso::{gram_schmidt, lattice_volume};
use latsum::instance::density;
use latsum::matrix::RatMatrix;
use latsum::primes::is_prime;
use latsum::reduction::is_lll_reduced;

use crate::error::Result;
use crate::files::{read_json, sniff_kind, FileKind, InstanceFile, TesterFile};

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: &'static str, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name,
            ok: true,
            detail: detail.into(),
        }
    }

    fn fail(name: &'static str, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name,
            ok: false,
            detail: detail.into(),
        }
    }
}

pub fn verify_file(path: &Path) -> Result<Vec<CheckOutcome>> {
    match sniff_kind(path)? {
        FileKind::Instance => verify_instance(path),
        FileKind::Tester => verify_tester(path),
    }
}

fn verify_instance(path: &Path) -> Result<Vec<CheckOutcome>> {
    let file: InstanceFile = read_json(path)?;
    let mut checks = Vec::new();
    match file.to_instance(path) {
        Ok(inst) => match inst.check_invariants() {
            Ok(()) => checks.push(CheckOutcome::pass(
                "instance-invariants",
                format!("n={} density={}", inst.n, density(&inst)),
            )),
            Err(e) => checks.push(CheckOutcome::fail("instance-invariants", e.to_string())),
        },
        Err(e) => checks.push(CheckOutcome::fail("instance-parse", e.to_string())),
    }
    Ok(checks)
}

fn verify_tester(path: &Path) -> Result<Vec<CheckOutcome>> {
    let file: TesterFile = read_json(path)?;
    let mut checks = Vec::new();

    let tester = match file.to_tester(path) {
        Ok(t) => t,
        Err(e) => {
            checks.push(CheckOutcome::fail("tester-parse", e.to_string()));
            return Ok(checks);
        }
    };

    let p = tester.spec().prime();
    if is_prime(p) && p % 2u32 == 1u32.into() {
        checks.push(CheckOutcome::pass(
            "prime",
            format!("p has {} bits", p.bits()),
        ));
    } else {
        checks.push(CheckOutcome::fail(
            "prime",
            format!("{p} is not an odd prime"),
        ));
    }

    for (i, mu) in tester.multipliers().iter().enumerate() {
        if mu >= p {
            checks.push(CheckOutcome::fail(
                "multiplier-range",
                format!("mu[{i}] = {mu} not in [0, p)"),
            ));
        }
    }
    if !checks.iter().any(|c| c.name == "multiplier-range") {
        checks.push(CheckOutcome::pass(
            "multiplier-range",
            "all residues in [0, p)",
        ));
    }

    // row encoding: the stored matrix must be exactly the multiplier rows
    let recomputed = tester.residue_matrix();
    let stored: Vec<Vec<String>> = file.m_p.clone();
    let matches = stored.len() == recomputed.num_rows()
        && stored.iter().enumerate().all(|(i, row)| {
            row.len() == recomputed.ambient_dim()
                && row
                    .iter()
                    .zip(recomputed.row(i))
                    .all(|(s, x)| s == &x.to_string())
        });
    checks.push(if matches {
        CheckOutcome::pass("row-encoding", "stored matrix equals encoded multipliers")
    } else {
        CheckOutcome::fail(
            "row-encoding",
            "stored matrix differs from encoded multipliers",
        )
    });

    // certificate flags must match a fresh recomputation and all hold
    let cert = tester.cert();
    if file.cert.l1_ok == cert.l1_ok && file.cert.full_rank == cert.full_rank {
        checks.push(CheckOutcome::pass(
            "cert-consistent",
            "stored flags match recomputation",
        ));
    } else {
        checks.push(CheckOutcome::fail(
            "cert-consistent",
            format!(
                "stored {:?}/{} vs recomputed {:?}/{}",
                file.cert.l1_ok, file.cert.full_rank, cert.l1_ok, cert.full_rank
            ),
        ));
    }
    checks.push(if tester.is_usable() {
        CheckOutcome::pass("cert-usable", "l1 bounds and rank hold")
    } else {
        CheckOutcome::fail("cert-usable", format!("{:?}", cert))
    });

    // exact inverse round-trip
    if let Some(inv) = tester.inverse() {
        let product = RatMatrix::from_basis(recomputed)
            .mul(inv)
            .expect("shape match");
        checks.push(if product.is_identity() {
            CheckOutcome::pass("inverse", "M_p * M_inv = I exactly")
        } else {
            CheckOutcome::fail("inverse", "M_p * M_inv differs from identity")
        });
    }

    // the multiplier rows are an LLL output, so they must certify as
    // reduced and span a lattice of volume p^{n-1}
    match file.params(path) {
        Ok(params) => match is_lll_reduced(recomputed, &params) {
            Ok(report) => checks.push(if report.is_reduced() {
                CheckOutcome::pass("reducedness", "size reduction and Lovasz hold")
            } else {
                CheckOutcome::fail(
                    "reducedness",
                    format!("violation at {:?}", report.first_violation),
                )
            }),
            Err(e) => checks.push(CheckOutcome::fail("reducedness", e.to_string())),
        },
        Err(e) => checks.push(CheckOutcome::fail("params", e.to_string())),
    }

    match gram_schmidt(recomputed) {
        Ok(gso) => {
            let vol_sq = lattice_volume(&gso).sq().clone();
            let n = tester.spec().n();
            let expected =
                BigRational::from_integer(BigInt::from(p.clone()).pow(2 * (n as u32 - 1)));
            checks.push(if vol_sq == expected {
                CheckOutcome::pass("volume", "Vol^2 = p^{2(n-1)}")
            } else {
                CheckOutcome::fail("volume", "Vol^2 differs from p^{2(n-1)}")
            });
        }
        Err(e) => checks.push(CheckOutcome::fail("volume", e.to_string())),
    }

    Ok(checks)
}
