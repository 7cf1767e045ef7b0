//! JSON schemas for instances and testers.
//!
//! Every integer travels as a decimal string so arbitrary-precision values
//! survive any JSON reader; rationals are `"num/den"`. Serialization is
//! deterministic (fixed field order, two-space indent), which makes
//! round-trips byte-exact.

use std::path::Path;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use latsum::instance::{Planted, SubsetSumInstance};
use latsum::modular::ModularTester;
use latsum::reduction::ReductionParams;

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct InstanceFile {
    pub n: usize,
    pub a: Vec<String>,
    #[serde(rename = "R")]
    pub range_bound: String,
    pub seed: u64,
    pub planted: Option<PlantedFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PlantedFile {
    pub e: Vec<u8>,
    #[serde(rename = "T")]
    pub target: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TesterFile {
    pub n: usize,
    pub a: Vec<String>,
    pub p: String,
    pub delta: String,
    pub mu_bound: String,
    pub multipliers: Vec<String>,
    pub m_p: Vec<Vec<String>>,
    pub m_inv: Option<Vec<Vec<String>>>,
    pub cert: CertFile,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertFile {
    pub l1_ok: Vec<bool>,
    pub full_rank: bool,
}

impl InstanceFile {
    pub fn from_instance(inst: &SubsetSumInstance) -> Self {
        InstanceFile {
            n: inst.n,
            a: inst.weights.iter().map(|w| w.to_string()).collect(),
            range_bound: inst.range_bound.to_string(),
            seed: inst.seed,
            planted: inst.planted.as_ref().map(|p| PlantedFile {
                e: p.e.clone(),
                target: p.target.to_string(),
            }),
        }
    }

    pub fn to_instance(&self, path: &Path) -> Result<SubsetSumInstance> {
        let weights = self
            .a
            .iter()
            .enumerate()
            .map(|(i, s)| parse_biguint(s, path, &format!("a[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let range_bound = parse_biguint(&self.range_bound, path, "R")?;
        let planted = match &self.planted {
            Some(p) => Some(Planted {
                e: p.e.clone(),
                target: parse_biguint(&p.target, path, "planted.T")?,
            }),
            None => None,
        };
        Ok(SubsetSumInstance {
            n: self.n,
            weights,
            range_bound,
            planted,
            seed: self.seed,
        })
    }
}

impl TesterFile {
    pub fn from_tester(tester: &ModularTester) -> Self {
        TesterFile {
            n: tester.spec().n(),
            a: tester
                .spec()
                .weights()
                .iter()
                .map(|w| w.to_string())
                .collect(),
            p: tester.spec().prime().to_string(),
            delta: rational_string(tester.params().delta()),
            mu_bound: rational_string(tester.params().mu_bound()),
            multipliers: tester.multipliers().iter().map(|m| m.to_string()).collect(),
            m_p: tester
                .residue_matrix()
                .rows()
                .iter()
                .map(|row| row.iter().map(|x| x.to_string()).collect())
                .collect(),
            m_inv: tester.inverse().map(|inv| {
                (0..inv.num_rows())
                    .map(|i| inv.row(i).iter().map(rational_string).collect())
                    .collect()
            }),
            cert: CertFile {
                l1_ok: tester.cert().l1_ok.clone(),
                full_rank: tester.cert().full_rank,
            },
        }
    }

    /// Reconstructs a tester from the essential fields, recomputing the
    /// matrix, certificate and inverse rather than trusting the file.
    pub fn to_tester(&self, path: &Path) -> Result<ModularTester> {
        let weights = self
            .a
            .iter()
            .enumerate()
            .map(|(i, s)| parse_biguint(s, path, &format!("a[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let p = parse_biguint(&self.p, path, "p")?;
        let params = self.params(path)?;
        let multipliers = self
            .multipliers
            .iter()
            .enumerate()
            .map(|(i, s)| parse_biguint(s, path, &format!("multipliers[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        ModularTester::from_parts(&weights, &p, &params, &multipliers).map_err(HarnessError::from)
    }

    pub fn params(&self, path: &Path) -> Result<ReductionParams> {
        let delta = parse_rational(&self.delta, path, "delta")?;
        let mu = parse_rational(&self.mu_bound, path, "mu_bound")?;
        ReductionParams::new(delta, mu).map_err(HarnessError::from)
    }
}

pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_biguint(s: &str, path: &Path, field: &str) -> Result<BigUint> {
    s.parse().map_err(|e| HarnessError::Parse {
        path: path.to_path_buf(),
        detail: format!("field {field}: {e}"),
    })
}

pub fn parse_bigint(s: &str, path: &Path, field: &str) -> Result<BigInt> {
    s.parse().map_err(|e| HarnessError::Parse {
        path: path.to_path_buf(),
        detail: format!("field {field}: {e}"),
    })
}

pub fn parse_rational(s: &str, path: &Path, field: &str) -> Result<BigRational> {
    parse_rational_str(s).ok_or_else(|| HarnessError::Parse {
        path: path.to_path_buf(),
        detail: format!("field {field}: expected P or P/Q, got {s:?}"),
    })
}

pub fn parse_rational_str(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse().ok()?, d.trim().parse().ok()?),
        None => (s.trim().parse().ok()?, BigInt::from(1)),
    };
    if den == BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(num, den))
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let body = to_json_string(value);
    std::fs::write(path, body).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut body = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    body.push('\n');
    body
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| HarnessError::Parse {
        path: path.to_path_buf(),
        detail: format!("line {}, column {}: {e}", e.line(), e.column()),
    })
}

/// Peek at a JSON file to tell instances from testers.
pub fn sniff_kind(path: &Path) -> Result<FileKind> {
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| HarnessError::Parse {
            path: path.to_path_buf(),
            detail: format!("line {}, column {}: {e}", e.line(), e.column()),
        })?;
    if value.get("multipliers").is_some() {
        Ok(FileKind::Tester)
    } else if value.get("a").is_some() {
        Ok(FileKind::Instance)
    } else {
        Err(HarnessError::Parse {
            path: path.to_path_buf(),
            detail: "neither an instance nor a tester file".into(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Instance,
    Tester,
}
