//! Minima sequence for three or more primes.
//!
//! With primes `p_1 < … < p_l`, base `p_l` and sub-semigroup `S = ⟨p_1, …, p_{l−1}⟩`,
//! let `m_k` be the least element of `S` in `(p_l^k, p_l^{k+1})`. The indices
//! where `m_k / p_l^k` reaches a strict new minimum play the role of the
//! stabilization indices of the two-generator case, but their differences
//! need not grow monotonically.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::semigroup::{is_prime, FactoredInteger, DEFAULT_ENUMERATION_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimaTerm {
    pub k: u64,
    /// Exponents over the sub-generators.
    pub rep: Vec<u64>,
    pub m: FactoredInteger,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimaRecord {
    pub sub_generators: Vec<u64>,
    pub base: u64,
    pub terms: Vec<MinimaTerm>,
}

impl MinimaRecord {
    pub fn ks(&self) -> Vec<u64> {
        self.terms.iter().map(|t| t.k).collect()
    }

    /// `k_{j+1} − k_j` along the retained terms.
    pub fn differences(&self) -> Vec<u64> {
        self.terms.windows(2).map(|w| w[1].k - w[0].k).collect()
    }

    pub fn differences_nondecreasing(&self) -> bool {
        self.differences().windows(2).all(|w| w[0] <= w[1])
    }
}

struct Search<'a> {
    gens: &'a [BigUint],
    lower: &'a BigUint,
    upper: &'a BigUint,
    best: Option<(BigUint, Vec<u64>)>,
    exps: Vec<u64>,
    visited: u128,
    budget: u128,
}

impl Search<'_> {
    fn descend(&mut self, idx: usize, partial: BigUint) -> Result<()> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::EnumerationBudgetExceeded { estimate: self.visited, budget: self.budget });
        }
        let g = &self.gens[idx];
        if idx + 1 == self.gens.len() {
            // least exponent pushing the product past the lower end
            let mut v = partial;
            let mut e = 0;
            while v <= *self.lower {
                v *= g;
                e += 1;
            }
            let improves = v < *self.upper && self.best.as_ref().is_none_or(|(b, _)| v < *b);
            if improves {
                self.exps[idx] = e;
                self.best = Some((v, self.exps.clone()));
            }
            self.exps[idx] = 0;
            return Ok(());
        }
        let mut v = partial;
        let mut e = 0;
        loop {
            self.exps[idx] = e;
            self.descend(idx + 1, v.clone())?;
            if v > *self.lower || self.best.as_ref().is_some_and(|(b, _)| v >= *b) {
                break;
            }
            v *= g;
            e += 1;
        }
        self.exps[idx] = 0;
        Ok(())
    }
}

/// Least element of `⟨gens⟩` strictly between `lower` and `upper`, with its
/// exponent vector.
pub fn least_element_between(gens: &[u64], lower: &BigUint, upper: &BigUint, budget: u128) -> Result<Option<(BigUint, Vec<u64>)>> {
    let big: Vec<BigUint> = gens.iter().map(|&g| BigUint::from(g)).collect();
    let mut search = Search { gens: &big, lower, upper, best: None, exps: vec![0; gens.len()], visited: 0, budget };
    search.descend(0, BigUint::one())?;
    Ok(search.best)
}

/// Minima sequence of `primes` (ascending; the last one is the base) for
/// `k = 0..=k_max`.
pub fn minima_sequence(primes: &[u64], k_max: u64) -> Result<MinimaRecord> {
    if primes.len() < 3 {
        return Err(Error::OutOfRange(format!("need at least three primes, got {}", primes.len())));
    }
    if primes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::OutOfRange("primes must be strictly ascending".into()));
    }
    if let Some(&p) = primes.iter().find(|&&p| !is_prime(p)) {
        return Err(Error::OutOfRange(format!("{p} is not prime")));
    }
    let (sub, base) = primes.split_at(primes.len() - 1);
    let base = base[0];
    let b = BigUint::from(base);
    let mut lower = BigUint::one();
    let mut terms: Vec<MinimaTerm> = Vec::new();
    // best ratio so far as (m, base^k)
    let mut best: Option<(BigUint, BigUint)> = None;
    for k in 0..=k_max {
        let upper = &lower * &b;
        if let Some((m, rep)) = least_element_between(sub, &lower, &upper, DEFAULT_ENUMERATION_BUDGET)? {
            // m/lower < bm/bl  <=>  m·bl < bm·lower
            let better = best.as_ref().is_none_or(|(bm, bl)| &m * bl < bm * &lower);
            if better {
                let factored = FactoredInteger::from_factors(sub.iter().copied().zip(rep.iter().copied()))?;
                terms.push(MinimaTerm { k, rep, m: factored });
                best = Some((m, lower.clone()));
            }
        }
        lower = upper;
    }
    Ok(MinimaRecord { sub_generators: sub.to_vec(), base, terms })
}
