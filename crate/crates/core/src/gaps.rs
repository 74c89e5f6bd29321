//! Gap certificates and their verification against the enumeration oracle.
//!
//! For an irrational pair `p₁ < p₂` with stabilization terms `(k_j, x₂(k_j))`,
//! every open interval
//!
//! ```text
//! ( p₂^(k_j + t) , p₁^x₂(k_j) · p₂^t ),   0 ≤ t < k_{j+1} − k_j
//! ```
//!
//! contains no element of `⟨p₁, p₂⟩`, and its width is at least `p₂^t`.
//! Certificates hold only exponents; values are expanded during verification,
//! and only under a budget.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactcmp::cmp_power;
use crate::projgeom::is_irrational_pair;
use crate::semigroup::{
    factor, first_interior_element_with_budget, estimate_count, FactoredInteger, GeneratorSet,
    DEFAULT_ENUMERATION_BUDGET,
};
use crate::sequences::{stab_prefix, StabRecord};

/// Scan limit used when a certificate count is requested instead of a `k` bound.
pub const DEFAULT_MAX_K: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Unverified,
    Verified,
    Refused,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapCertificate {
    pub p1: u64,
    pub p2: u64,
    /// 1-based index of the stabilization term `k_j`.
    pub j: usize,
    pub t: u64,
    pub k_j: u64,
    pub x2_j: u64,
    pub left: FactoredInteger,
    pub right: FactoredInteger,
    pub width_floor: FactoredInteger,
    pub status: Status,
}

/// Wire form of a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub pair: [u64; 2],
    pub j: usize,
    pub t: u64,
    pub left: FactoredInteger,
    pub right: FactoredInteger,
    pub width_floor: FactoredInteger,
    pub status: Status,
}

impl GapCertificate {
    fn build(p1: u64, p2: u64, j: usize, k_j: u64, x2_j: u64, t: u64) -> Result<Self> {
        let f1 = factor(p1)?;
        let f2 = factor(p2)?;
        Ok(GapCertificate {
            p1,
            p2,
            j,
            t,
            k_j,
            x2_j,
            left: f2.pow(k_j + t),
            right: f1.pow(x2_j).mul(&f2.pow(t)),
            width_floor: f2.pow(t),
            status: Status::Unverified,
        })
    }

    pub fn generators(&self) -> GeneratorSet {
        GeneratorSet::new([self.p1, self.p2]).expect("pair is validated at construction")
    }

    /// `right − left ≥ p₂^t`: by exact subtraction when both values fit in
    /// 128 bits, otherwise through the equivalent `p₁^x₂ > p₂^k`, since
    /// `right − left = p₂^t·(p₁^x₂ − p₂^k)`.
    pub fn check_width_floor(&self) -> bool {
        match (self.right.checked_value::<u128>(), self.left.checked_value::<u128>()) {
            (Some(r), Some(l)) => {
                let floor = self.width_floor.checked_value::<u128>().expect("floor divides right");
                r > l && r - l >= floor
            }
            _ => cmp_power(self.p1, self.x2_j as i64, self.p2, self.k_j as i64) == Ordering::Greater,
        }
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            pair: [self.p1, self.p2],
            j: self.j,
            t: self.t,
            left: self.left.clone(),
            right: self.right.clone(),
            width_floor: self.width_floor.clone(),
            status: self.status,
        }
    }
}

/// Certificates from stabilization terms already computed.
pub fn certificates_from_record(record: &StabRecord, widest_only: bool) -> Result<Vec<GapCertificate>> {
    let mut out = Vec::new();
    for (idx, w) in record.terms.windows(2).enumerate() {
        let (cur, next) = (w[0], w[1]);
        let span = next.k - cur.k;
        let ts = if widest_only { span - 1..span } else { 0..span };
        for t in ts {
            out.push(GapCertificate::build(record.p1, record.p2, idx + 1, cur.k, cur.x2, t)?);
        }
    }
    Ok(out)
}

/// Gap certificates from the first `terms` stabilization terms of `(p1, p2)`.
///
/// The pair is normalized so that `p1 < p2`. With `widest_only`, each
/// consecutive pair of terms yields only `t = k_{j+1} − k_j − 1`.
pub fn gap_certificates(p1: u64, p2: u64, terms: usize, widest_only: bool) -> Result<Vec<GapCertificate>> {
    let (p1, p2) = (p1.min(p2), p1.max(p2));
    if p1 <= 1 {
        return Err(Error::Degenerate(format!("generator {p1} must be at least 2")));
    }
    if !is_irrational_pair(p1, p2) {
        return Err(Error::LogRationalPair { p1, p2 });
    }
    let record = stab_prefix(p1, p2, terms, DEFAULT_MAX_K)?;
    certificates_from_record(&record, widest_only)
}

/// The interval `(f^j, f^{j+1})` of a singly generated semigroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerGap {
    pub base: u64,
    pub j: u64,
    pub left: FactoredInteger,
    pub right: FactoredInteger,
}

pub fn singly_generated_gaps(f: u64, count: u64) -> Result<Vec<PowerGap>> {
    if f <= 1 {
        return Err(Error::Degenerate(format!("base {f} must be at least 2")));
    }
    let ff = factor(f)?;
    Ok((1..=count)
        .map(|j| PowerGap { base: f, j, left: ff.pow(j), right: ff.pow(j + 1) })
        .collect())
}

/// `∏ n_i^{a_i}` with `a_i = ⌈log_{n_i} K⌉`: no element of `⟨gens⟩` lies in
/// `(left, left + K)`.
///
/// The left end point is kept over the generators, not over primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AppendixCertificate {
    pub gens: Vec<u64>,
    pub exponents: Vec<u64>,
    pub guarantee: u64,
}

impl AppendixCertificate {
    pub fn left_value(&self) -> BigUint {
        self.gens
            .iter()
            .zip(&self.exponents)
            .fold(BigUint::one(), |acc, (&g, &a)| acc * crate::exactcmp::pow_big(g, a))
    }

    pub fn left_factored(&self) -> Result<FactoredInteger> {
        let mut acc = FactoredInteger::one();
        for (&g, &a) in self.gens.iter().zip(&self.exponents) {
            acc = acc.mul(&factor(g)?.pow(a));
        }
        Ok(acc)
    }

    /// `left + K`, the right end point, with its factorization unknown.
    pub fn right_value(&self) -> BigUint {
        self.left_value() + BigUint::from(self.guarantee)
    }
}

/// Least `a` with `n^a ≥ k`.
fn ceil_log(n: u64, k: u64) -> u64 {
    if k <= 1 {
        return 0;
    }
    let mut a = ((k as f64).ln() / (n as f64).ln()).ceil().max(0.0) as u64;
    while cmp_power(n, a as i64, k, 1) == Ordering::Less {
        a += 1;
    }
    while a > 0 && cmp_power(n, a as i64 - 1, k, 1) != Ordering::Less {
        a -= 1;
    }
    a
}

pub fn appendix_certificate(gens: &GeneratorSet, k: u64) -> Result<AppendixCertificate> {
    if k == 0 {
        return Err(Error::OutOfRange("K must be at least 1".into()));
    }
    let exponents = gens.gens().iter().map(|&n| ceil_log(n, k)).collect();
    Ok(AppendixCertificate { gens: gens.gens().to_vec(), exponents, guarantee: k })
}

/// Limits on oracle verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyBudget {
    pub max_elements: u128,
    /// Right end points needing more bits than this are refused.
    pub max_right_bits: u64,
}

impl Default for VerifyBudget {
    fn default() -> Self {
        VerifyBudget { max_elements: DEFAULT_ENUMERATION_BUDGET, max_right_bits: 63 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    Verified,
    Refused(String),
    /// A semigroup element found strictly inside the interval.
    Failed(BigUint),
}

impl Verification {
    pub fn status(&self) -> Status {
        match self {
            Verification::Verified => Status::Verified,
            Verification::Refused(_) => Status::Refused,
            Verification::Failed(_) => Status::Failed,
        }
    }
}

/// Checks with the enumeration oracle that `(left, right)` holds no element of `⟨gens⟩`.
pub fn verify_values(gens: &GeneratorSet, left: &BigUint, right: &BigUint, budget: &VerifyBudget) -> Verification {
    let limit = budget.max_right_bits.min(127);
    if right.bits() > limit {
        return Verification::Refused(format!("right end point has {} bits, limit is {limit}", right.bits()));
    }
    if left >= right {
        return Verification::Refused("interval is empty or reversed".into());
    }
    let estimate = estimate_count(gens, right.bits() as f64);
    if estimate > budget.max_elements {
        return Verification::Refused(format!(
            "enumeration needs about {estimate} elements, budget is {}",
            budget.max_elements
        ));
    }
    let l = u128::try_from(left).expect("left < right fits");
    let r = u128::try_from(right).expect("checked bit length");
    match first_interior_element_with_budget(gens, &l, &r, budget.max_elements) {
        Ok(None) => Verification::Verified,
        Ok(Some(m)) => Verification::Failed(BigUint::from(m)),
        Err(e) => Verification::Refused(e.to_string()),
    }
}

pub fn verify_interval(
    gens: &GeneratorSet,
    left: &FactoredInteger,
    right: &FactoredInteger,
    budget: &VerifyBudget,
) -> Verification {
    // refuse before expanding anything astronomically large
    if right.log2_upper() > budget.max_right_bits as f64 + 1.0 {
        return Verification::Refused(format!(
            "right end point {right} exceeds {} bits",
            budget.max_right_bits
        ));
    }
    verify_values(gens, &left.value(), &right.value(), budget)
}

/// Verifies a certificate against `⟨p₁, p₂⟩`.
pub fn verify_certificate(cert: &GapCertificate, budget: &VerifyBudget) -> Verification {
    verify_interval(&cert.generators(), &cert.left, &cert.right, budget)
}

/// Verifies an appendix certificate: `(left, left + K)` must be free of `⟨gens⟩`.
pub fn verify_appendix(cert: &AppendixCertificate, budget: &VerifyBudget) -> Verification {
    let gens = GeneratorSet::new(cert.gens.iter().copied()).expect("validated at construction");
    verify_values(&gens, &cert.left_value(), &cert.right_value(), budget)
}
