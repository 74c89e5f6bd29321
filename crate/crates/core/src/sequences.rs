//! Approximate inverses of `p mod q` and the stabilization sequence of an
//! irrational pair `(p₁, p₂)`.
//!
//! The two are linked: for `γ = log_{p₂}(p₁)`, the stabilization sequence lists
//! the indices `k_j` where `z_k = x₂(k)·γ − k` reaches a strict new minimum,
//! together with `x₂(k_j) = ⌈k_j/γ⌉`. Running the approximate-inverse scan on
//! the terminal fraction `k_J / x₂(k_J)` reproduces the `x₂` values, which
//! [`crosscheck_routes`] confirms.

use std::cmp::Ordering;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactcmp::{cmp_power, cmp_zfrac, x2, FracTerm};
use crate::scalar::Natural;

/// One strict new minimum of the residue `(l+1)·p mod q`.
///
/// `(l+1)·p − j·q = residue`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApproxInvEntry<T> {
    pub j: T,
    pub l: T,
    pub residue: T,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApproxInvRecord<T> {
    pub p: T,
    pub q: T,
    pub entries: Vec<ApproxInvEntry<T>>,
}

impl<T: Natural> ApproxInvRecord<T> {
    /// The approximate inverses `l + 1`, ending at `p⁻¹ mod q`.
    pub fn inverses(&self) -> Vec<T> {
        self.entries.iter().map(|e| e.l.clone() + T::one()).collect()
    }

    pub fn final_inverse(&self) -> T {
        self.entries.last().map(|e| e.l.clone() + T::one()).expect("record is never empty")
    }
}

/// Scans `l = 0, 1, …` recording every strict new minimum of `(l+1)·p mod q`
/// until the residue reaches 1.
pub fn approx_inverse_seq<T: Natural>(p: T, q: T) -> Result<ApproxInvRecord<T>> {
    if p.is_zero() || p >= q {
        return Err(Error::OutOfRange(format!("need 1 ≤ p < q, got p = {p}, q = {q}")));
    }
    if !p.gcd(&q).is_one() {
        return Err(Error::NotCoprime { p: p.to_string(), q: q.to_string() });
    }
    let mut entries = Vec::new();
    let mut residue = p.clone();
    let mut j = T::zero();
    let mut l = T::zero();
    let mut best: Option<T> = None;
    loop {
        if best.as_ref().is_none_or(|b| residue < *b) {
            entries.push(ApproxInvEntry { j: j.clone(), l: l.clone(), residue: residue.clone() });
            if residue.is_one() {
                break;
            }
            best = Some(residue.clone());
        }
        // residue < q, p < q, so the sum stays below 2q
        residue = residue + p.clone();
        if residue >= q {
            residue = residue - q.clone();
            j = j + T::one();
        }
        l = l + T::one();
    }
    Ok(ApproxInvRecord { p, q, entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StabTerm {
    pub k: u64,
    pub x2: u64,
}

/// Stabilization terms `(k_j, x₂(k_j))` of an irrational pair `p₁ < p₂`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabRecord {
    pub p1: u64,
    pub p2: u64,
    pub terms: Vec<StabTerm>,
}

impl StabRecord {
    pub fn ks(&self) -> Vec<u64> {
        self.terms.iter().map(|t| t.k).collect()
    }

    pub fn x2s(&self) -> Vec<u64> {
        self.terms.iter().map(|t| t.x2).collect()
    }

    /// Re-checks the record's invariants with exact comparisons: `k` strictly
    /// increasing from 1, `p₂^k < p₁^{x₂} < p₂^{k+1}`, and `p₁^{x₂}/p₂^k`
    /// strictly decreasing. Returns the first violated term index.
    pub fn check_invariants(&self) -> std::result::Result<(), usize> {
        let (p1, p2) = (self.p1, self.p2);
        for (idx, t) in self.terms.iter().enumerate() {
            let (k, x) = (t.k as i64, t.x2 as i64);
            let bracketed = cmp_power(p2, k, p1, x) == Ordering::Less
                && cmp_power(p1, x, p2, k + 1) == Ordering::Less;
            let ordered = match idx {
                0 => t.k == 1,
                _ => {
                    let prev = self.terms[idx - 1];
                    // p1^x/p2^k < p1^x'/p2^k'  <=>  p1^(x-x') < p2^(k-k')
                    prev.k < t.k
                        && cmp_power(p1, x - prev.x2 as i64, p2, k - prev.k as i64) == Ordering::Less
                }
            };
            if !(bracketed && ordered) {
                return Err(idx);
            }
        }
        Ok(())
    }
}

fn check_pair(p1: u64, p2: u64) -> Result<()> {
    if p1 <= 1 {
        return Err(Error::Degenerate(format!("p1 = {p1} generates nothing")));
    }
    if p1 >= p2 {
        return Err(Error::OutOfRange(format!("need p1 < p2, got ({p1}, {p2})")));
    }
    Ok(())
}

fn scan(p1: u64, p2: u64, max_k: u64, want: Option<usize>) -> Result<StabRecord> {
    check_pair(p1, p2)?;
    if max_k == 0 {
        return Err(Error::OutOfRange("max_k must be at least 1".into()));
    }
    let mut terms = Vec::new();
    let mut best: Option<FracTerm> = None;
    for i in 1..=max_k {
        let x = x2(p1, p2, i)?;
        let cur = FracTerm::new(x, i);
        let better = match best {
            None => true,
            Some(b) => cmp_zfrac(p1, p2, cur, b)? == Ordering::Less,
        };
        if better {
            best = Some(cur);
            terms.push(StabTerm { k: i, x2: x });
            if want == Some(terms.len()) {
                break;
            }
        }
    }
    Ok(StabRecord { p1, p2, terms })
}

/// All stabilization terms with `k ≤ max_k`.
pub fn stab_sequence(p1: u64, p2: u64, max_k: u64) -> Result<StabRecord> {
    scan(p1, p2, max_k, None)
}

/// The first `count` stabilization terms, scanning no further than `max_k`.
pub fn stab_prefix(p1: u64, p2: u64, count: usize, max_k: u64) -> Result<StabRecord> {
    if count == 0 {
        return Err(Error::OutOfRange("need at least one term".into()));
    }
    let record = scan(p1, p2, max_k, Some(count))?;
    if record.terms.len() < count {
        return Err(Error::OutOfRange(format!(
            "only {} terms with k ≤ {max_k}, {count} requested",
            record.terms.len()
        )));
    }
    Ok(record)
}

/// Outcome of comparing the two routes to the `x₂` values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrosscheckReport {
    /// The terminal fraction `k_J / x₂(k_J)` in lowest terms.
    pub numerator: u64,
    pub denominator: u64,
    /// Whether `k_J / x₂(k_J)` was already in lowest terms.
    pub reduced: bool,
    pub inverses: Vec<u64>,
    /// Length of the common prefix of `inverses[1..]` and the record's `x₂` list.
    pub prefix_len: usize,
    pub mismatch: Option<Mismatch>,
    pub final_inverse: Option<u64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub index: usize,
    pub from_inverses: Option<u64>,
    pub from_record: Option<u64>,
}

/// Runs the approximate-inverse scan on the terminal fraction of `record` and
/// compares it against the record's `x₂` values.
///
/// Failure to build the inverse sequence is reported, not raised.
pub fn crosscheck_routes(record: &StabRecord) -> Result<CrosscheckReport> {
    if record.terms.len() < 2 {
        return Err(Error::OutOfRange("crosscheck needs at least two terms".into()));
    }
    let last = record.terms.last().expect("non-empty");
    let g = last.k.gcd(&last.x2);
    let (num, den) = (last.k / g, last.x2 / g);
    let mut report = CrosscheckReport {
        numerator: num,
        denominator: den,
        reduced: g == 1,
        inverses: Vec::new(),
        prefix_len: 0,
        mismatch: None,
        final_inverse: None,
        error: None,
    };
    let seq = match approx_inverse_seq(num, den) {
        Ok(seq) => seq,
        Err(e) => {
            report.error = Some(e.to_string());
            return Ok(report);
        }
    };
    report.inverses = seq.inverses();
    report.final_inverse = Some(seq.final_inverse());
    let tail = &report.inverses[1..];
    let x2s = record.x2s();
    let prefix = tail.iter().zip(&x2s).take_while(|(a, b)| a == b).count();
    report.prefix_len = prefix;
    if prefix < tail.len().max(x2s.len()) {
        report.mismatch = Some(Mismatch {
            index: prefix,
            from_inverses: tail.get(prefix).copied(),
            from_record: x2s.get(prefix).copied(),
        });
    }
    Ok(report)
}
