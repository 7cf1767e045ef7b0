//! Multi-target subset-sum testing through modular arithmetic.
//!
//! One reduction of the lattice generated by the weight vector and the
//! scaled unit vectors modulo a prime `p` yields multipliers
//! `mu_1, ..., mu_n` whose symmetric-residue rows form a full-rank matrix
//! with small row sums. Once that matrix and its exact inverse are in
//! hand, any target `T` is decided by a single exact linear solve plus an
//! arithmetic re-check: whenever every row satisfies `l1 < p/2`, a `{0,1}`
//! solution of the integer equation is also the unique solution of the
//! modular system, so the decision is exact for every target.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::basis::IntBasis;
use crate::error::{Error, Result};
use crate::lo_classic::{validate_weights, weighted_sum};
use crate::matrix::{rational_rank, RatMatrix};
use crate::primes::{is_prime, next_odd_prime};
use crate::reduction::{lll_reduce, ReductionParams, ReductionStats};
use crate::residue::{in_symmetric_box, mod_inverse, symmetric_residue};

/// Weights with their modular scaffolding: an odd prime `p`, the inverse
/// of the first weight, and the normalized residues `alpha_i = a_i / a_1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularLatticeSpec {
    weights: Vec<BigUint>,
    p: BigUint,
    /// `alpha[0] = 1`, `alpha[i] = a_{i+1} * a_1^{-1} mod p`.
    alpha: Vec<BigUint>,
    a1_inv: BigUint,
}

impl ModularLatticeSpec {
    pub fn new(weights: &[BigUint], p: &BigUint) -> Result<Self> {
        validate_weights(weights)?;
        if !is_prime(p) || (p % 2u32).is_zero() {
            return Err(Error::Precondition(format!("{p} is not an odd prime")));
        }
        let p_int = BigInt::from(p.clone());
        let a1 = BigInt::from(weights[0].clone());
        if (&a1 % &p_int).is_zero() {
            return Err(Error::Precondition("p divides a1".into()));
        }
        let a1_inv = mod_inverse(&a1, &p_int)?;
        let alpha = weights
            .iter()
            .map(|w| {
                (BigInt::from(w.clone()) * &a1_inv)
                    .mod_floor(&p_int)
                    .magnitude()
                    .clone()
            })
            .collect();
        Ok(ModularLatticeSpec {
            weights: weights.to_vec(),
            p: p.clone(),
            alpha,
            a1_inv: a1_inv.magnitude().clone(),
        })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[BigUint] {
        &self.weights
    }

    pub fn prime(&self) -> &BigUint {
        &self.p
    }

    pub fn alpha(&self) -> &[BigUint] {
        &self.alpha
    }

    pub fn a1_inv(&self) -> &BigUint {
        &self.a1_inv
    }
}

/// How to size the prime for [`select_prime`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimeSizing {
    /// `p >= ceil(gamma^{n^2/2} * n^{2n})`.
    Auto,
    /// `p >= ceil(c * gamma^{n^2/2} * n^{2n})` for a rational scale `c`.
    Scale(BigRational),
    /// `p >= 2^{bits-1}`.
    Bits(u64),
}

/// Smallest odd prime at or above the sizing target.
///
/// The auto target `gamma^{n^2/2} * n^{2n}` is evaluated exactly through
/// fourth powers (so odd `n` needs no irrational intermediate), then
/// rounded up with integer fourth-root bounds.
pub fn select_prime(n: usize, params: &ReductionParams, sizing: &PrimeSizing) -> BigUint {
    let target = match sizing {
        PrimeSizing::Bits(bits) => {
            let shift = bits.saturating_sub(1);
            return next_odd_prime(&(BigUint::one() << shift));
        }
        PrimeSizing::Auto => ceil_auto_target(n, params, &BigRational::one()),
        PrimeSizing::Scale(c) => ceil_auto_target(n, params, c),
    };
    next_odd_prime(&target)
}

/// `ceil(c * gamma^{n^2/2} * n^{2n})` via `t^4 >= c^4 * (gamma^2)^{n^2} * n^{8n}`.
fn ceil_auto_target(n: usize, params: &ReductionParams, scale: &BigRational) -> BigUint {
    let n_u = n as u64;
    let fourth = params.gamma_sq_pow(n_u * n_u)
        * crate::numutil::rat_pow(scale, 4)
        * BigRational::from_integer(BigInt::from(n).pow(8 * n as u32));
    debug_assert!(fourth.is_positive());
    let num = fourth.numer().magnitude().clone();
    let den = fourth.denom().magnitude().clone();
    let mut t = (&num / &den).nth_root(4);
    while (&t * &t * &t * &t) * &den < num {
        t += 1u32;
    }
    t
}

/// The `n x n` row basis of the modular lattice: `(1, alpha_2, ..., alpha_n)`
/// followed by `p * e_i`. Its volume is `p^{n-1}`.
pub fn build_modular_basis(spec: &ModularLatticeSpec) -> IntBasis {
    let n = spec.n();
    let p = BigInt::from(spec.p.clone());
    let mut rows = Vec::with_capacity(n);
    rows.push(
        spec.alpha
            .iter()
            .map(|x| BigInt::from(x.clone()))
            .collect::<Vec<_>>(),
    );
    for i in 1..n {
        let mut row = vec![BigInt::zero(); n];
        row[i] = p.clone();
        rows.push(row);
    }
    IntBasis::new(rows).expect("modular basis rows are well formed")
}

/// `(<mu a_1>_p, ..., <mu a_n>_p)`; always a vector of the modular lattice.
pub fn encode_multiplier(mu: &BigInt, spec: &ModularLatticeSpec) -> Vec<BigInt> {
    let p = BigInt::from(spec.p.clone());
    spec.weights
        .iter()
        .map(|a| {
            symmetric_residue(&(mu * BigInt::from(a.clone())), &p).expect("p >= 3 by construction")
        })
        .collect()
}

/// Recovers the unique residue `mu' = v_1 * a_1^{-1} mod p` from a lattice
/// vector inside the symmetric coordinate box, and verifies it reproduces
/// `v` under [`encode_multiplier`]. Failure signals a violated
/// precondition, not a bug.
pub fn decode_multiplier(v: &[BigInt], spec: &ModularLatticeSpec) -> Result<BigUint> {
    if v.len() != spec.n() {
        return Err(Error::DimensionMismatch {
            expected: spec.n(),
            found: v.len(),
        });
    }
    let p = BigInt::from(spec.p.clone());
    for (i, x) in v.iter().enumerate() {
        if !in_symmetric_box(x, &p) {
            return Err(Error::DecodeFailure { coord: i });
        }
    }
    let mu = (&v[0] * BigInt::from(spec.a1_inv.clone())).mod_floor(&p);
    let encoded = encode_multiplier(&mu, spec);
    if let Some(i) = (0..v.len()).find(|&i| encoded[i] != v[i]) {
        return Err(Error::DecodeFailure { coord: i });
    }
    Ok(mu.magnitude().clone())
}

/// Per-row and rank flags certifying that a tester is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TesterCert {
    /// `|row_i|_1 < p/2`, and the row decoded back to its multiplier.
    pub l1_ok: Vec<bool>,
    pub full_rank: bool,
}

impl TesterCert {
    pub fn all_ok(&self) -> bool {
        self.full_rank && self.l1_ok.iter().all(|&b| b)
    }
}

/// Decision for one target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryResult {
    Accept { witness: Vec<u8> },
    Reject,
}

impl QueryResult {
    pub fn is_accept(&self) -> bool {
        matches!(self, QueryResult::Accept { .. })
    }

    pub fn witness(&self) -> Option<&[u8]> {
        match self {
            QueryResult::Accept { witness } => Some(witness),
            QueryResult::Reject => None,
        }
    }
}

/// Multipliers, their residue matrix, its exact inverse and the
/// certificate. Immutable once built; queries are pure.
#[derive(Debug, Clone)]
pub struct ModularTester {
    spec: ModularLatticeSpec,
    params: ReductionParams,
    multipliers: Vec<BigUint>,
    m_p: IntBasis,
    m_inv: Option<RatMatrix>,
    /// `adjugate / det` equals `m_inv`; integer form for the query path.
    adjugate: Vec<Vec<BigInt>>,
    det: BigInt,
    cert: TesterCert,
    l1_norms: Vec<BigUint>,
    reduction_stats: ReductionStats,
}

impl ModularTester {
    pub fn spec(&self) -> &ModularLatticeSpec {
        &self.spec
    }

    pub fn params(&self) -> &ReductionParams {
        &self.params
    }

    pub fn multipliers(&self) -> &[BigUint] {
        &self.multipliers
    }

    pub fn residue_matrix(&self) -> &IntBasis {
        &self.m_p
    }

    pub fn inverse(&self) -> Option<&RatMatrix> {
        self.m_inv.as_ref()
    }

    pub fn cert(&self) -> &TesterCert {
        &self.cert
    }

    /// Observed `|row|_1` per row, for failure diagnostics.
    pub fn l1_norms(&self) -> &[BigUint] {
        &self.l1_norms
    }

    pub fn reduction_stats(&self) -> &ReductionStats {
        &self.reduction_stats
    }

    pub fn is_usable(&self) -> bool {
        self.cert.all_ok() && self.m_inv.is_some()
    }

    /// Decide one target: build `t_p = (<mu_i T>_p)_i`, solve exactly, and
    /// accept only a `{0,1}` solution that re-verifies in the integers.
    ///
    /// The solve is the single matrix-vector product `adjugate * t_p`
    /// followed by the division by `det`, the integer form of applying the
    /// stored exact inverse; a coordinate is in `{0,1}` exactly when the
    /// product entry is `0` or `det`.
    pub fn query(&self, target: &BigInt) -> Result<QueryResult> {
        if !self.is_usable() {
            return Err(Error::UnusableTester);
        }
        let total = BigInt::from(self.spec.weights.iter().sum::<BigUint>());
        if target.is_negative() || target > &total {
            return Ok(QueryResult::Reject);
        }

        let p = BigInt::from(self.spec.p.clone());
        let t_p: Vec<BigInt> = self
            .multipliers
            .iter()
            .map(|mu| {
                symmetric_residue(&(BigInt::from(mu.clone()) * target), &p)
                    .expect("p >= 3 by construction")
            })
            .collect();

        let mut witness = Vec::with_capacity(t_p.len());
        for row in &self.adjugate {
            let u: BigInt = row.iter().zip(&t_p).map(|(a, b)| a * b).sum();
            if u.is_zero() {
                witness.push(0u8);
            } else if u == self.det {
                witness.push(1u8);
            } else {
                return Ok(QueryResult::Reject);
            }
        }
        // the final arithmetic check is mandatory: the modular solve alone
        // does not certify the integer equation
        if &weighted_sum(&self.spec.weights, &witness) == target {
            Ok(QueryResult::Accept { witness })
        } else {
            Ok(QueryResult::Reject)
        }
    }
}

impl ModularTester {
    /// Rebuilds a tester from its serialized essence: weights, prime,
    /// parameters and multipliers. The residue matrix, certificate and
    /// inverse are recomputed rather than trusted.
    pub fn from_parts(
        weights: &[BigUint],
        p: &BigUint,
        params: &ReductionParams,
        multipliers: &[BigUint],
    ) -> Result<ModularTester> {
        let spec = ModularLatticeSpec::new(weights, p)?;
        if multipliers.len() != spec.n() {
            return Err(Error::DimensionMismatch {
                expected: spec.n(),
                found: multipliers.len(),
            });
        }
        let rows: Vec<Vec<BigInt>> = multipliers
            .iter()
            .map(|mu| encode_multiplier(&BigInt::from(mu.clone()), &spec))
            .collect();
        let m_p = IntBasis::new(rows)?;

        let mut l1_ok = Vec::with_capacity(spec.n());
        let mut l1_norms = Vec::with_capacity(spec.n());
        for row in m_p.rows() {
            let l1: BigUint = row.iter().map(|x| x.magnitude().clone()).sum();
            l1_ok.push((&l1 * 2u32) < *p);
            l1_norms.push(l1);
        }
        let full_rank = rational_rank(&m_p) == spec.n();
        let (m_inv, adjugate, det) = invert_with_adjugate(&m_p, full_rank)?;

        Ok(ModularTester {
            spec,
            params: params.clone(),
            multipliers: multipliers.to_vec(),
            m_p,
            m_inv,
            adjugate,
            det,
            cert: TesterCert { l1_ok, full_rank },
            l1_norms,
            reduction_stats: ReductionStats::default(),
        })
    }
}

/// One lattice reduction, then decode every reduced row to a multiplier
/// and certify the `l1` bounds and full rank.
///
/// A tester whose certificate fails is still returned (with its
/// diagnostics) but refuses queries; retry policy belongs to the caller.
pub fn build_tester(
    weights: &[BigUint],
    p: &BigUint,
    params: &ReductionParams,
) -> Result<ModularTester> {
    let spec = ModularLatticeSpec::new(weights, p)?;
    let gcd = weights.iter().fold(BigUint::zero(), |acc, w| acc.gcd(w));
    if !gcd.is_one() {
        return Err(Error::Precondition(format!(
            "gcd of weights is {gcd}, expected 1"
        )));
    }

    let reduction = lll_reduce(&build_modular_basis(&spec), params)?;
    let n = spec.n();
    let p_big = &spec.p;

    let mut multipliers = Vec::with_capacity(n);
    let mut l1_ok = Vec::with_capacity(n);
    let mut l1_norms = Vec::with_capacity(n);
    for row in reduction.basis.rows() {
        let l1: BigUint = row.iter().map(|x| x.magnitude().clone()).sum();
        let bound_ok = (&l1 * 2u32) < *p_big;
        let decoded = decode_multiplier(row, &spec);
        match decoded {
            Ok(mu) => {
                multipliers.push(mu);
                l1_ok.push(bound_ok);
            }
            Err(_) => {
                // fall back to the raw residue so diagnostics stay total
                let p_int = BigInt::from(p_big.clone());
                let mu = (&row[0] * BigInt::from(spec.a1_inv.clone())).mod_floor(&p_int);
                multipliers.push(mu.magnitude().clone());
                l1_ok.push(false);
            }
        }
        l1_norms.push(l1);
    }

    let full_rank = rational_rank(&reduction.basis) == n;
    let (m_inv, adjugate, det) = invert_with_adjugate(&reduction.basis, full_rank)?;

    Ok(ModularTester {
        spec,
        params: params.clone(),
        multipliers,
        m_p: reduction.basis,
        m_inv,
        adjugate,
        det,
        cert: TesterCert { l1_ok, full_rank },
        l1_norms,
        reduction_stats: reduction.stats,
    })
}

/// Exact inverse of an integer matrix plus its integer form
/// `adjugate / det`; empty when not full rank.
fn invert_with_adjugate(
    m_p: &IntBasis,
    full_rank: bool,
) -> Result<(Option<RatMatrix>, Vec<Vec<BigInt>>, BigInt)> {
    if !full_rank {
        return Ok((None, Vec::new(), BigInt::zero()));
    }
    let rat = RatMatrix::from_basis(m_p);
    let det = rat.determinant()?;
    debug_assert!(det.is_integer());
    let det = det.to_integer();
    let inv = rat.inverse()?;
    let n = m_p.num_rows();
    let adjugate = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let scaled = inv.get(i, j) * BigRational::from_integer(det.clone());
                    debug_assert!(scaled.is_integer());
                    scaled.to_integer()
                })
                .collect()
        })
        .collect();
    Ok((Some(inv), adjugate, det))
}

/// The shortness profile a reduced modular basis shows on random
/// instances: `|b_n*|^2 <= Vol^{2/n} <= |b_1*|^2` and every
/// `|b_k*|^2 <= gamma^{n-1} * Vol^{2/n}`, compared exactly at the `n`-th
/// power level. A probabilistic claim, so callers aggregate pass rates.
pub fn gso_profile_ok(gso: &crate::gso::GsoData, params: &ReductionParams) -> bool {
    let n = gso.num_rows();
    if n == 0 {
        return true;
    }
    let vol_sq = crate::gso::lattice_volume(gso).sq().clone();
    let first = crate::numutil::rat_pow(gso.norm_sq(0), n as u64);
    let last = crate::numutil::rat_pow(gso.norm_sq(n - 1), n as u64);
    if !(last <= vol_sq && vol_sq <= first) {
        return false;
    }
    let gamma_factor = params.gamma_sq_pow((n * (n - 1) / 2) as u64);
    gso.norms_sq()
        .iter()
        .all(|s| crate::numutil::rat_pow(s, n as u64) <= &gamma_factor * &vol_sq)
}

/// Size-reduction norm bound on a reduced basis: `|b_i|^2 <= n^2 * max_k
/// |b_k*|^2`, the squared form of the triangle-inequality bound.
pub fn size_reduction_norm_bound_ok(basis: &IntBasis, gso: &crate::gso::GsoData) -> bool {
    let n = basis.num_rows();
    let max_star = gso
        .norms_sq()
        .iter()
        .max()
        .expect("basis is nonempty")
        .clone();
    let factor = BigRational::from_integer(BigInt::from(n * n));
    (0..n).all(|i| BigRational::from_integer(basis.row_norm_sq(i)) <= &factor * &max_star)
}

/// Why a weight vector fails the sampling sanity checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectionFailure {
    /// `a_i` exceeds the largest multiple of `p` below the range bound.
    ExceedsSigma {
        index: usize,
    },
    DividesA1,
    CommonFactor(BigUint),
}

impl std::fmt::Display for RejectionFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RejectionFailure::ExceedsSigma { index } => {
                write!(f, "weight {} exceeds sigma_p", index + 1)
            }
            RejectionFailure::DividesA1 => write!(f, "p divides a1"),
            RejectionFailure::CommonFactor(g) => write!(f, "gcd of weights is {g}"),
        }
    }
}

/// Sampling sanity check: every `a_i <= sigma_p = p * floor(R / p)`,
/// `p` does not divide `a_1`, and the weights are coprime.
pub fn rejection_check(
    weights: &[BigUint],
    range_bound: &BigUint,
    p: &BigUint,
) -> std::result::Result<(), RejectionFailure> {
    let sigma = p * (range_bound / p);
    for (i, w) in weights.iter().enumerate() {
        if w > &sigma {
            return Err(RejectionFailure::ExceedsSigma { index: i });
        }
    }
    if weights.first().is_some_and(|a1| (a1 % p).is_zero()) {
        return Err(RejectionFailure::DividesA1);
    }
    let gcd = weights.iter().fold(BigUint::zero(), |acc, w| acc.gcd(w));
    if !gcd.is_one() {
        return Err(RejectionFailure::CommonFactor(gcd));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gso::{gram_schmidt, lattice_volume};

    fn weights(xs: &[u64]) -> Vec<BigUint> {
        xs.iter().map(|&x| BigUint::from(x)).collect()
    }

    fn params_gamma2() -> ReductionParams {
        ReductionParams::from_u64((3, 4), (1, 2)).unwrap()
    }

    #[test]
    fn select_prime_examples() {
        // n=2, gamma^2=2: ceil(2 * 16) = 32 -> 37
        assert_eq!(
            select_prime(2, &params_gamma2(), &PrimeSizing::Auto),
            BigUint::from(37u32)
        );
        // n=1: ceil(2^{1/2}) = 2 -> 3
        assert_eq!(
            select_prime(1, &params_gamma2(), &PrimeSizing::Auto),
            BigUint::from(3u32)
        );
        // bit-length override
        assert_eq!(
            select_prime(5, &params_gamma2(), &PrimeSizing::Bits(17)),
            BigUint::from(65537u32)
        );
    }

    #[test]
    fn modular_basis_example() {
        let spec = ModularLatticeSpec::new(&weights(&[2, 6]), &BigUint::from(7u32)).unwrap();
        // a1_inv = 4 (2*4=8=1 mod 7), alpha_2 = 6*4 = 24 = 3 mod 7
        let b = build_modular_basis(&spec);
        assert_eq!(b, IntBasis::from_i64(&[&[1, 3], &[0, 7]]).unwrap());
    }

    #[test]
    fn modular_basis_volume_is_prime_power() {
        let p = BigUint::from(101u32);
        let spec = ModularLatticeSpec::new(&weights(&[17, 23, 55]), &p).unwrap();
        let basis = build_modular_basis(&spec);
        let vol = lattice_volume(&gram_schmidt(&basis).unwrap());
        // Vol^2 = p^{2(n-1)}
        let expected = BigRational::from_integer(BigInt::from(p.pow(4)));
        assert_eq!(vol.sq(), &expected);
    }

    #[test]
    fn scaled_unit_vector_is_in_lattice() {
        // p*e_1 = p*row_0 - sum alpha_i * (p e_i): check by exact solve
        let p = BigUint::from(101u32);
        let spec = ModularLatticeSpec::new(&weights(&[17, 23, 55]), &p).unwrap();
        let basis = build_modular_basis(&spec);
        let m = RatMatrix::from_basis(&basis).transpose();
        let target: Vec<BigRational> = vec![
            BigRational::from_integer(BigInt::from(101)),
            BigRational::zero(),
            BigRational::zero(),
        ];
        let coeffs = m.solve(&target).unwrap();
        assert!(coeffs.iter().all(|c| c.is_integer()));
    }

    #[test]
    fn encode_examples() {
        let p = BigUint::from(11u32);
        let spec = ModularLatticeSpec::new(&weights(&[3, 4, 5]), &p).unwrap();
        assert!(encode_multiplier(&BigInt::zero(), &spec)
            .iter()
            .all(|x| x.is_zero()));
        assert_eq!(
            encode_multiplier(&BigInt::one(), &spec),
            vec![BigInt::from(3), BigInt::from(4), BigInt::from(5)]
        );
        assert!(encode_multiplier(&BigInt::from(11), &spec)
            .iter()
            .all(|x| x.is_zero()));
    }

    #[test]
    fn decode_round_trips() {
        let p = BigUint::from(23u32);
        let spec = ModularLatticeSpec::new(&weights(&[5, 7, 9]), &p).unwrap();
        for mu in 0u32..23 {
            let v = encode_multiplier(&BigInt::from(mu), &spec);
            assert_eq!(decode_multiplier(&v, &spec).unwrap(), BigUint::from(mu));
        }
        let zero = vec![BigInt::zero(); 3];
        assert_eq!(decode_multiplier(&zero, &spec).unwrap(), BigUint::zero());
    }

    #[test]
    fn decode_rejects_out_of_box() {
        let p = BigUint::from(23u32);
        let spec = ModularLatticeSpec::new(&weights(&[5, 7, 9]), &p).unwrap();
        let bad = vec![BigInt::from(40), BigInt::zero(), BigInt::zero()];
        assert_eq!(
            decode_multiplier(&bad, &spec).unwrap_err(),
            Error::DecodeFailure { coord: 0 }
        );
    }

    #[test]
    fn builds_usable_tester_with_generous_prime() {
        // weights far above p, so their residues scatter mod p
        let a = weights(&[
            7046029254386353131,
            2718281828459045235,
            3141592653589793239,
        ]);
        let p = select_prime(3, &ReductionParams::default(), &PrimeSizing::Bits(24));
        let tester = build_tester(&a, &p, &ReductionParams::default()).unwrap();
        assert!(tester.is_usable(), "cert: {:?}", tester.cert());
        for (i, mu) in tester.multipliers().iter().enumerate() {
            let enc = encode_multiplier(&BigInt::from(mu.clone()), tester.spec());
            assert_eq!(enc, tester.residue_matrix().row(i));
        }
    }

    #[test]
    fn tiny_weights_fail_the_l1_cert_with_diagnostics() {
        // (2,3,5) is itself a lattice vector far shorter than the volume
        // heuristic expects, which provably forces a long third row; the
        // build must surface that per row instead of failing silently
        let a = weights(&[2, 3, 5]);
        let p = select_prime(3, &ReductionParams::default(), &PrimeSizing::Bits(24));
        let tester = build_tester(&a, &p, &ReductionParams::default()).unwrap();
        assert!(!tester.is_usable());
        assert!(tester.cert().l1_ok.iter().any(|&ok| !ok));
        assert_eq!(tester.l1_norms().len(), 3);
        for (ok, l1) in tester.cert().l1_ok.iter().zip(tester.l1_norms()) {
            assert_eq!(*ok, (l1 * 2u32) < *tester.spec().prime());
        }
        assert!(matches!(
            tester.query(&BigInt::from(5)),
            Err(Error::UnusableTester)
        ));
    }

    #[test]
    fn rejects_a1_divisible_by_p() {
        let p = BigUint::from(13u32);
        let a = weights(&[13, 3, 5]);
        assert!(matches!(
            build_tester(&a, &p, &ReductionParams::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn query_decides_every_target_exactly() {
        let a = weights(&[
            9007199254740997123,
            7046029254386353131,
            2718281828459045235,
            3141592653589793239,
            1414213562373095048,
            1732050807568877293,
        ]);
        let p = select_prime(6, &ReductionParams::default(), &PrimeSizing::Bits(40));
        let tester = build_tester(&a, &p, &ReductionParams::default()).unwrap();
        assert!(tester.is_usable(), "cert: {:?}", tester.cert());

        // enumerate all 2^6 subset sums as ground truth
        let mut feasible = std::collections::HashSet::new();
        for mask in 0u32..64 {
            let sum: BigUint = (0..6)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| a[i].clone())
                .sum();
            feasible.insert(BigInt::from(sum));
        }

        // every exact subset sum accepts with a verified witness
        for s in &feasible {
            let result = tester.query(s).unwrap();
            assert!(result.is_accept(), "target {s}");
            if let QueryResult::Accept { witness } = &result {
                assert_eq!(&weighted_sum(&a, witness), s);
            }
        }
        // perturbed targets that are not sums reject
        for s in &feasible {
            for delta in [1i64, -1, 7] {
                let probe = s + BigInt::from(delta);
                if !feasible.contains(&probe) {
                    assert_eq!(tester.query(&probe).unwrap(), QueryResult::Reject);
                }
            }
        }
    }

    #[test]
    fn query_rejects_out_of_range_immediately() {
        let a = weights(&[
            7046029254386353131,
            2718281828459045235,
            3141592653589793239,
        ]);
        let p = select_prime(3, &ReductionParams::default(), &PrimeSizing::Bits(24));
        let tester = build_tester(&a, &p, &ReductionParams::default()).unwrap();
        let total = BigInt::from(a.iter().sum::<BigUint>());
        assert_eq!(tester.query(&(total + 1)).unwrap(), QueryResult::Reject);
        assert_eq!(
            tester.query(&BigInt::from(-1)).unwrap(),
            QueryResult::Reject
        );
    }

    #[test]
    fn reduced_rows_satisfy_norm_bound() {
        let a = weights(&[
            7046029254386353131,
            2718281828459045235,
            3141592653589793239,
        ]);
        let p = select_prime(3, &ReductionParams::default(), &PrimeSizing::Bits(24));
        let tester = build_tester(&a, &p, &ReductionParams::default()).unwrap();
        let gso = gram_schmidt(tester.residue_matrix()).unwrap();
        assert!(size_reduction_norm_bound_ok(tester.residue_matrix(), &gso));
    }

    #[test]
    fn rejection_check_cases() {
        let p = BigUint::from(13u32);
        let big_r = BigUint::from(10_000u32);
        assert!(rejection_check(&weights(&[5, 7, 9]), &big_r, &p).is_ok());
        assert_eq!(
            rejection_check(&weights(&[26, 7, 9]), &big_r, &p),
            Err(RejectionFailure::DividesA1)
        );
        assert_eq!(
            rejection_check(&weights(&[2, 4, 6]), &big_r, &p),
            Err(RejectionFailure::CommonFactor(BigUint::from(2u32)))
        );
        // sigma_p = 13 * floor(20/13) = 13; 19 > 13
        assert_eq!(
            rejection_check(&weights(&[5, 19]), &BigUint::from(20u32), &p),
            Err(RejectionFailure::ExceedsSigma { index: 1 })
        );
    }
}
