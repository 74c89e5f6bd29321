//! Factored integers, generator sets, and the brute-force enumeration oracle.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{from_u64, Natural};

/// Default cap on the number of elements an enumeration may produce.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 10_000_000;

/// A natural number as ascending `(prime, exponent)` pairs; empty means 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FactoredInteger {
    factors: Vec<(u64, u64)>,
}

impl FactoredInteger {
    pub fn one() -> Self {
        FactoredInteger::default()
    }

    /// Builds from `(prime, exponent)` pairs in any order; zero exponents are
    /// dropped and repeated primes merged.
    pub fn from_factors(pairs: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let mut merged: Vec<(u64, u64)> = Vec::new();
        let mut pairs: Vec<_> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        pairs.sort_unstable();
        for (p, e) in pairs {
            if !is_prime(p) {
                return Err(Error::OutOfRange(format!("{p} is not prime")));
            }
            match merged.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => merged.push((p, e)),
            }
        }
        Ok(FactoredInteger { factors: merged })
    }

    pub fn factors(&self) -> &[(u64, u64)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn value(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, &(p, e)| acc * crate::exactcmp::pow_big(p, e))
    }

    /// The value when it fits the scalar type, else `None`.
    pub fn checked_value<T: Natural>(&self) -> Option<T> {
        let mut acc = T::one();
        for &(p, e) in &self.factors {
            let p: T = T::from_u64(p)?;
            for _ in 0..e {
                acc = acc.checked_mul(&p)?;
            }
        }
        Some(acc)
    }

    /// Upper bound on `log2(value)`, cheap to compute for huge exponents.
    pub fn log2_upper(&self) -> f64 {
        self.factors.iter().map(|&(p, e)| e as f64 * (p as f64).log2()).sum::<f64>() * (1.0 + 1e-12)
    }

    pub fn mul(&self, other: &FactoredInteger) -> FactoredInteger {
        let pairs = self.factors.iter().chain(other.factors.iter()).copied();
        // primes are already certified
        let mut all: Vec<_> = pairs.collect();
        all.sort_unstable();
        let mut merged: Vec<(u64, u64)> = Vec::with_capacity(all.len());
        for (p, e) in all {
            match merged.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => merged.push((p, e)),
            }
        }
        FactoredInteger { factors: merged }
    }

    pub fn pow(&self, k: u64) -> FactoredInteger {
        if k == 0 {
            return FactoredInteger::one();
        }
        FactoredInteger { factors: self.factors.iter().map(|&(p, e)| (p, e * k)).collect() }
    }

    pub fn exponent_of(&self, prime: u64) -> u64 {
        self.factors
            .binary_search_by_key(&prime, |&(p, _)| p)
            .map_or(0, |i| self.factors[i].1)
    }
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (idx, &(p, e)) in self.factors.iter().enumerate() {
            if idx > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Parses the canonical text form: `1`, or `p` / `p^e` terms joined by `*`
/// with primes strictly ascending and exponents `≥ 2` written explicitly.
impl FromStr for FactoredInteger {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("`{s}`: {why}"));
        if s == "1" {
            return Ok(FactoredInteger::one());
        }
        let mut factors: Vec<(u64, u64)> = Vec::new();
        for term in s.split('*') {
            let (p, e) = match term.split_once('^') {
                None => (term, None),
                Some((p, e)) => (p, Some(e)),
            };
            let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit()) && !t.starts_with('0');
            if !digits(p) {
                return Err(bad("malformed prime"));
            }
            let p: u64 = p.parse().map_err(|_| bad("prime out of range"))?;
            let e = match e {
                None => 1,
                Some(e) if digits(e) => {
                    let e: u64 = e.parse().map_err(|_| bad("exponent out of range"))?;
                    if e < 2 {
                        return Err(bad("exponent 1 must be omitted"));
                    }
                    e
                }
                Some(_) => return Err(bad("malformed exponent")),
            };
            if !is_prime(p) {
                return Err(bad("base is not prime"));
            }
            if factors.last().is_some_and(|&(q, _)| q >= p) {
                return Err(bad("primes must be strictly ascending"));
            }
            factors.push((p, e));
        }
        Ok(FactoredInteger { factors })
    }
}

impl Serialize for FactoredInteger {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FactoredInteger {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Factorization by trial division on a mod-30 wheel.
pub fn factor(n: u64) -> Result<FactoredInteger> {
    if n == 0 {
        return Err(Error::OutOfRange("0 has no factorization".into()));
    }
    let mut n = n;
    let mut factors = Vec::new();
    let mut take = |n: &mut u64, p: u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    for p in [2, 3, 5] {
        take(&mut n, p);
    }
    const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut d = 7u64;
    let mut w = 0;
    let mut changed = true;
    while n > 1 {
        if changed && is_prime(n) {
            break;
        }
        if d.checked_mul(d).is_none_or(|dd| dd > n) {
            break;
        }
        changed = n.is_multiple_of(d);
        take(&mut n, d);
        d += WHEEL[w];
        w = (w + 1) % WHEEL.len();
    }
    if n > 1 {
        let rest = n;
        take(&mut n, rest);
    }
    Ok(FactoredInteger { factors })
}

/// [`factor`] for any scalar, refusing values beyond `u64`.
pub fn factor_natural<T: Natural>(n: &T) -> Result<FactoredInteger> {
    match n.to_u64() {
        Some(v) => factor(v),
        None => Err(Error::FactoringBoundExceeded { n: n.to_string() }),
    }
}

/// Ascending, duplicate-free list of generators, each at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct GeneratorSet {
    gens: Vec<u64>,
}

impl GeneratorSet {
    pub fn new(gens: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut gens: Vec<u64> = gens.into_iter().collect();
        if let Some(&g) = gens.iter().find(|&&g| g < 2) {
            return Err(Error::Degenerate(format!("generator {g} must be at least 2")));
        }
        gens.sort_unstable();
        gens.dedup();
        if gens.is_empty() {
            return Err(Error::Degenerate("empty generator set".into()));
        }
        Ok(GeneratorSet { gens })
    }

    pub fn gens(&self) -> &[u64] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }
}

/// Upper bound on the number of products `≤ 2^log2_bound`.
///
/// Each exponent vector with `Σ e_i·w_i ≤ L` owns the unit cube above it,
/// which lies inside the simplex `Σ x_i·w_i ≤ L + Σ w_i` (`w_i = log2 g_i`).
pub fn estimate_count(gens: &GeneratorSet, log2_bound: f64) -> u128 {
    let weights: Vec<f64> = gens.gens.iter().map(|&g| (g as f64).log2()).collect();
    let reach = log2_bound.max(0.0) + weights.iter().sum::<f64>();
    let mut est = 1.0f64;
    for (k, w) in weights.iter().enumerate() {
        est *= reach / w / (k as f64 + 1.0);
    }
    if est >= u128::MAX as f64 {
        u128::MAX
    } else {
        est.ceil() as u128
    }
}

/// All elements of `⟨gens⟩` up to `bound`, ascending, 1 included.
pub fn enumerate_upto<T: Natural>(gens: &GeneratorSet, bound: T) -> Result<Vec<T>> {
    enumerate_upto_with_budget(gens, bound, DEFAULT_ENUMERATION_BUDGET)
}

pub fn enumerate_upto_with_budget<T: Natural>(gens: &GeneratorSet, bound: T, budget: u128) -> Result<Vec<T>> {
    if bound.is_zero() {
        return Err(Error::OutOfRange("bound must be at least 1".into()));
    }
    let log2 = bound.to_f64().map_or(f64::INFINITY, |b| b.log2());
    let estimate = estimate_count(gens, log2);
    if estimate > budget {
        return Err(Error::EnumerationBudgetExceeded { estimate, budget });
    }
    let gens: Vec<T> = gens.gens.iter().map(|&g| from_u64(g)).collect();
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(T::one()));
    let mut out: Vec<T> = Vec::new();
    while let Some(Reverse(x)) = heap.pop() {
        if out.last() == Some(&x) {
            continue;
        }
        for g in &gens {
            if let Some(y) = x.checked_mul(g) {
                if y <= bound {
                    heap.push(Reverse(y));
                }
            }
        }
        out.push(x);
        if out.len() as u128 > budget {
            return Err(Error::EnumerationBudgetExceeded { estimate: out.len() as u128, budget });
        }
    }
    Ok(out)
}

/// Least element of `⟨gens⟩` strictly between `left` and `right`, if any.
pub fn first_interior_element<T: Natural>(gens: &GeneratorSet, left: &T, right: &T) -> Result<Option<T>> {
    first_interior_element_with_budget(gens, left, right, DEFAULT_ENUMERATION_BUDGET)
}

pub fn first_interior_element_with_budget<T: Natural>(
    gens: &GeneratorSet,
    left: &T,
    right: &T,
    budget: u128,
) -> Result<Option<T>> {
    if left >= right {
        return Err(Error::OutOfRange(format!("empty interval ({left}, {right})")));
    }
    let elems = enumerate_upto_with_budget(gens, right.clone(), budget)?;
    Ok(elems.into_iter().find(|m| m > left && m < right))
}

/// True iff no element of `⟨gens⟩` lies strictly between `left` and `right`.
pub fn interior_empty<T: Natural>(gens: &GeneratorSet, left: T, right: T) -> Result<bool> {
    Ok(first_interior_element(gens, &left, &right)?.is_none())
}

/// One exponent vector over `gens` whose product is `n`, if `n ∈ ⟨gens⟩`.
pub fn is_member<T: Natural>(gens: &GeneratorSet, n: T) -> Option<Vec<u64>> {
    if n.is_zero() {
        return None;
    }
    let gens: Vec<T> = gens.gens.iter().map(|&g| from_u64(g)).collect();
    let mut memo: HashMap<(T, usize), bool> = HashMap::new();
    let mut exps = vec![0u64; gens.len()];
    if member_search(&gens, n, 0, &mut memo, &mut exps) {
        Some(exps)
    } else {
        None
    }
}

fn member_search<T: Natural>(
    gens: &[T],
    n: T,
    idx: usize,
    memo: &mut HashMap<(T, usize), bool>,
    exps: &mut [u64],
) -> bool {
    if n.is_one() {
        exps[idx..].iter_mut().for_each(|e| *e = 0);
        return true;
    }
    if idx == gens.len() {
        return false;
    }
    if memo.get(&(n.clone(), idx)) == Some(&false) {
        return false;
    }
    let g = &gens[idx];
    let mut rest = n.clone();
    let mut e = 0;
    loop {
        exps[idx] = e;
        if member_search(gens, rest.clone(), idx + 1, memo, exps) {
            return true;
        }
        let (q, r) = rest.div_rem(g);
        if !r.is_zero() {
            break;
        }
        rest = q;
        e += 1;
    }
    memo.insert((n, idx), false);
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gs(v: &[u64]) -> GeneratorSet {
        GeneratorSet::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn factor_examples() {
        assert_eq!(factor(12).unwrap().factors(), &[(2, 2), (3, 1)]);
        assert!(factor(1).unwrap().is_one());
        assert_eq!(factor(45).unwrap().factors(), &[(3, 2), (5, 1)]);
        assert_eq!(factor(u64::MAX).unwrap().value(), BigUint::from(u64::MAX));
        let n = 1000003u64 * 1000033u64;
        assert_eq!(factor(n).unwrap().factors(), &[(1000003, 1), (1000033, 1)]);
        assert_eq!(factor(1 << 63).unwrap().factors(), &[(2, 63)]);
        assert!(factor(0).is_err());
        assert!(matches!(
            factor_natural(&(u64::MAX as u128 + 1)),
            Err(Error::FactoringBoundExceeded { .. })
        ));
    }

    #[test]
    fn text_format() {
        let f: FactoredInteger = "2^5*3".parse().unwrap();
        assert_eq!(f.value(), BigUint::from(96u32));
        assert_eq!(f.to_string(), "2^5*3");
        assert_eq!("3^16".parse::<FactoredInteger>().unwrap().to_string(), "3^16");
        assert_eq!(FactoredInteger::one().to_string(), "1");
        for bad in ["", "2^1", "3*2", "2*2", "4", "2^", "2^0", "02", "2**3", " 2", "1*2"] {
            assert!(bad.parse::<FactoredInteger>().is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_upto(&gs(&[2, 3]), 20u64).unwrap(), vec![1, 2, 3, 4, 6, 8, 9, 12, 16, 18]);
        assert_eq!(enumerate_upto(&gs(&[5]), 30u64).unwrap(), vec![1, 5, 25]);
        assert_eq!(enumerate_upto(&gs(&[45, 20]), 1000u64).unwrap(), vec![1, 20, 45, 400, 900]);
        let big = enumerate_upto(&gs(&[2, 3]), BigUint::from(20u32)).unwrap();
        assert_eq!(big.len(), 10);
    }

    #[test]
    fn enumeration_refuses_over_budget() {
        let err = enumerate_upto_with_budget(&gs(&[2, 3]), u64::MAX, 100).unwrap_err();
        assert!(matches!(err, Error::EnumerationBudgetExceeded { budget: 100, .. }));
    }

    #[test]
    fn interior_examples() {
        let g = gs(&[2, 3]);
        assert_eq!(interior_empty(&g, 9u64, 12), Ok(true));
        assert_eq!(interior_empty(&g, 8u64, 9), Ok(true));
        assert_eq!(interior_empty(&g, 80u64, 100), Ok(false));
        assert_eq!(first_interior_element(&g, &80u64, &100), Ok(Some(81)));
        assert!(interior_empty(&g, 12u64, 9).is_err());
    }

    #[test]
    fn membership_examples() {
        assert_eq!(is_member(&gs(&[45, 20]), 900u64), Some(vec![1, 1]));
        assert_eq!(is_member(&gs(&[45, 20]), 30u64), None);
        assert_eq!(is_member(&gs(&[7]), 1u64), Some(vec![0]));
        let w = is_member(&gs(&[4, 6]), 96u64).unwrap();
        assert_eq!(4u64.pow(w[0] as u32) * 6u64.pow(w[1] as u32), 96);
    }

    #[test]
    fn generator_set_rules() {
        assert_eq!(gs(&[3, 2, 3]).gens(), &[2, 3]);
        assert!(GeneratorSet::new([1, 2]).is_err());
        assert!(GeneratorSet::new([0]).is_err());
        assert!(GeneratorSet::new(Vec::<u64>::new()).is_err());
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751));
    }
}
