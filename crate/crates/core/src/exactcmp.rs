//! Exact comparison of powers `a^x` versus `b^y`.
//!
//! Every inequality in a logarithm `γ = log_b(a)` of the form `x·γ ⋚ y` is a
//! comparison of the integers `a^x` and `b^y`. The comparison is settled on
//! a precision ladder: hardware floats with a conservative error bound, then
//! directed-rounding bounds on the powers at doubling precision, and finally
//! the exact big-integer powers. Whatever stage settles it, the answer is the
//! exact ordering.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Precision of the first interval stage, in bits.
pub const INTERVAL_START_BITS: u64 = 256;

/// Relative error allowed for each `ln` product in the float stage.
/// Far above the actual libm error (≤ 1 ulp = 2⁻⁵²).
const FLOAT_REL_ERR: f64 = 1.0 / (1u64 << 46) as f64;

/// Which rung of the ladder decided a comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Decided without any arithmetic on the powers (zero exponents, signs).
    Trivial,
    Float,
    /// Decided by directed-rounding bounds with the given mantissa width.
    Interval(u64),
    Exact,
}

/// Exact ordering of `base_a^exp_a` against `base_b^exp_b`.
///
/// Negative exponents denote reciprocals. Bases must be at least 1.
///
/// ```
/// use std::cmp::Ordering;
/// use semigaps::cmp_power;
/// assert_eq!(cmp_power(2, 19, 3, 12), Ordering::Less);
/// ```
pub fn cmp_power(base_a: u64, exp_a: i64, base_b: u64, exp_b: i64) -> Ordering {
    cmp_power_traced(base_a, exp_a, base_b, exp_b).0
}

/// [`cmp_power`] that also reports the deciding stage.
pub fn cmp_power_traced(base_a: u64, exp_a: i64, base_b: u64, exp_b: i64) -> (Ordering, Stage) {
    assert!(base_a >= 1 && base_b >= 1, "bases must be positive");
    // 1^x = 1 = b^0
    let exp_a = if base_a == 1 { 0 } else { exp_a };
    let exp_b = if base_b == 1 { 0 } else { exp_b };
    match (exp_a < 0, exp_b < 0) {
        // a^x < 1 ≤ b^y
        (true, false) => (Ordering::Less, Stage::Trivial),
        (false, true) => (Ordering::Greater, Stage::Trivial),
        // a^-x' vs b^-y'  <=>  b^y' vs a^x'
        (true, true) => cmp_nonneg(base_b, exp_b.unsigned_abs(), base_a, exp_a.unsigned_abs()),
        (false, false) => cmp_nonneg(base_a, exp_a as u64, base_b, exp_b as u64),
    }
}

fn cmp_nonneg(a: u64, x: u64, b: u64, y: u64) -> (Ordering, Stage) {
    match (x == 0 || a == 1, y == 0 || b == 1) {
        (true, true) => return (Ordering::Equal, Stage::Trivial),
        (true, false) => return (Ordering::Less, Stage::Trivial),
        (false, true) => return (Ordering::Greater, Stage::Trivial),
        (false, false) => {}
    }
    if a == b {
        return (x.cmp(&y), Stage::Trivial);
    }
    if let Some(ord) = cmp_float(a, x, b, y) {
        return (ord, Stage::Float);
    }
    let exact_bits = (x as u128 * bit_len(a) as u128).max(y as u128 * bit_len(b) as u128);
    let mut prec = INTERVAL_START_BITS;
    while (prec as u128) < exact_bits {
        if let Some(ord) = cmp_interval(a, x, b, y, prec) {
            return (ord, Stage::Interval(prec));
        }
        prec *= 2;
    }
    (cmp_exact(a, x, b, y), Stage::Exact)
}

fn bit_len(v: u64) -> u64 {
    64 - v.leading_zeros() as u64
}

/// Float stage: sign of `x·ln a − y·ln b` when it clears the error bound.
pub fn cmp_float(a: u64, x: u64, b: u64, y: u64) -> Option<Ordering> {
    let lhs = x as f64 * (a as f64).ln();
    let rhs = y as f64 * (b as f64).ln();
    let bound = (lhs.abs() + rhs.abs()) * FLOAT_REL_ERR + f64::MIN_POSITIVE;
    let diff = lhs - rhs;
    if diff > bound {
        Some(Ordering::Greater)
    } else if diff < -bound {
        Some(Ordering::Less)
    } else {
        None
    }
}

/// `lo·2^shift ≤ value ≤ hi·2^shift`.
#[derive(Debug, Clone)]
struct PowBounds {
    lo: BigUint,
    hi: BigUint,
    shift: u64,
}

impl PowBounds {
    fn truncate(&mut self, prec: u64) {
        let bits = self.hi.bits();
        if bits <= prec {
            return;
        }
        let k = bits - prec;
        self.lo >>= k as usize;
        let mask_hit = self.hi.trailing_zeros().is_some_and(|tz| tz < k);
        self.hi >>= k as usize;
        if mask_hit {
            self.hi += 1u32;
        }
        self.shift += k;
    }

    fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

fn pow_bounds(base: u64, exp: u64, prec: u64) -> PowBounds {
    let mut acc = PowBounds { lo: BigUint::one(), hi: BigUint::one(), shift: 0 };
    let b = BigUint::from(base);
    for bit in (0..64 - exp.leading_zeros()).rev() {
        acc.lo = &acc.lo * &acc.lo;
        acc.hi = &acc.hi * &acc.hi;
        acc.shift *= 2;
        acc.truncate(prec);
        if (exp >> bit) & 1 == 1 {
            acc.lo *= &b;
            acc.hi *= &b;
            acc.truncate(prec);
        }
    }
    acc
}

/// Order of `m·2^s` against `n·2^t` for positive mantissas.
fn cmp_scaled(m: &BigUint, s: u64, n: &BigUint, t: u64) -> Ordering {
    let (lm, ln) = (m.bits() + s, n.bits() + t);
    if lm != ln {
        return lm.cmp(&ln);
    }
    if s >= t {
        (m << (s - t) as usize).cmp(n)
    } else {
        m.cmp(&(n << (t - s) as usize))
    }
}

/// Interval stage at a fixed mantissa width; `None` when the bounds overlap.
pub fn cmp_interval(a: u64, x: u64, b: u64, y: u64, prec: u64) -> Option<Ordering> {
    let pa = pow_bounds(a, x, prec);
    let pb = pow_bounds(b, y, prec);
    if cmp_scaled(&pa.hi, pa.shift, &pb.lo, pb.shift) == Ordering::Less {
        return Some(Ordering::Less);
    }
    if cmp_scaled(&pa.lo, pa.shift, &pb.hi, pb.shift) == Ordering::Greater {
        return Some(Ordering::Greater);
    }
    if pa.is_exact() && pb.is_exact() {
        return Some(cmp_scaled(&pa.lo, pa.shift, &pb.lo, pb.shift));
    }
    None
}

/// Exact stage: expand both powers.
pub fn cmp_exact(a: u64, x: u64, b: u64, y: u64) -> Ordering {
    pow_big(a, x).cmp(&pow_big(b, y))
}

pub(crate) fn pow_big(base: u64, exp: u64) -> BigUint {
    let exp = u32::try_from(exp).expect("exponent too large to expand");
    BigUint::from(base).pow(exp)
}

/// A quantity `x·γ − i` with `γ = log_{p₂}(p₁)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FracTerm {
    pub x: u64,
    pub i: u64,
}

impl FracTerm {
    pub fn new(x: u64, i: u64) -> Self {
        FracTerm { x, i }
    }
}

fn signed_diff(a: u64, b: u64) -> i64 {
    i64::try_from(a as i128 - b as i128).expect("exponent difference overflows i64")
}

/// Least `x` with `p1^x > p2^i`, i.e. `⌈i/γ⌉` for irrational `γ = log_{p₂}(p₁)`.
pub fn x2(p1: u64, p2: u64, i: u64) -> Result<u64> {
    if p1 < 2 || p2 < 2 {
        return Err(Error::Degenerate(format!("bases must be at least 2, got ({p1}, {p2})")));
    }
    let ie = i64::try_from(i).map_err(|_| Error::OutOfRange(format!("index {i} too large")))?;
    let guess = (i as f64 * (p2 as f64).ln() / (p1 as f64).ln()).ceil();
    let mut x = if guess.is_finite() && guess > 0.0 { guess as u64 } else { 0 };
    let rational = || Error::LogRationalPair { p1, p2 };
    loop {
        match cmp_power(p1, x as i64, p2, ie) {
            Ordering::Greater => break,
            Ordering::Equal => return Err(rational()),
            Ordering::Less => x += 1,
        }
    }
    while x > 0 {
        match cmp_power(p1, x as i64 - 1, p2, ie) {
            Ordering::Less => break,
            Ordering::Equal => return Err(rational()),
            Ordering::Greater => x -= 1,
        }
    }
    Ok(x)
}

/// Ordering of `z_a = x_a·γ − i_a` against `z_b = x_b·γ − i_b`.
///
/// Distinct terms that compare equal prove `γ` rational.
pub fn cmp_zfrac(p1: u64, p2: u64, a: FracTerm, b: FracTerm) -> Result<Ordering> {
    if a == b {
        return Ok(Ordering::Equal);
    }
    match cmp_power(p1, signed_diff(a.x, b.x), p2, signed_diff(a.i, b.i)) {
        Ordering::Equal => Err(Error::LogRationalPair { p1, p2 }),
        ord => Ok(ord),
    }
}
