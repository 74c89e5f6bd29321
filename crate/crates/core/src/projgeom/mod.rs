//! Projective points of integers and the geometry of generator sets.
//!
//! An integer `n ≥ 2` with prime exponent vector `r` maps to the point `r /
//! gcd(r)`; two integers share a point exactly when one logarithm of the
//! other is rational. Two distinct points span a plane `V`; the integers whose
//! exponent vectors lie in `V ∩ ℤ^r_{≥0}` form a monoid whose Hilbert basis
//! decides whether the line is doubly multiplicatively closed (basis of size
//! two) or not.
//!
//! "Points on the line" is read as all non-negative lattice points of the
//! saturated plane, so a line is doubly closed iff that monoid is free on
//! two generators.

pub mod lattice;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaps::{gap_certificates, singly_generated_gaps, GapCertificate, PowerGap};
use crate::scalar::Whole;
use crate::semigroup::{factor, FactoredInteger, GeneratorSet};
use lattice::{column_reduce, det2, hilbert_basis_2d, minor_gcd, primitive2};

/// Normalized exponent vector: ascending `(prime, exponent)` with gcd 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    coords: Vec<(u64, u64)>,
}

impl ProjectivePoint {
    pub fn coords(&self) -> &[(u64, u64)] {
        &self.coords
    }

    /// The least integer mapping to this point.
    pub fn representative(&self) -> FactoredInteger {
        FactoredInteger::from_factors(self.coords.iter().copied()).expect("coordinates are over primes")
    }

    pub fn exponent(&self, prime: u64) -> u64 {
        self.coords.iter().find(|&&(p, _)| p == prime).map_or(0, |&(_, e)| e)
    }

    fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.coords.iter().map(|&(p, _)| p)
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.representative().fmt(f)
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The point of a factored integer; 1 has none.
pub fn point_of(f: &FactoredInteger) -> Result<ProjectivePoint> {
    let g = f.factors().iter().fold(0u64, |g, &(_, e)| g.gcd(&e));
    if g == 0 {
        return Err(Error::UnitHasNoPoint);
    }
    Ok(ProjectivePoint { coords: f.factors().iter().map(|&(p, e)| (p, e / g)).collect() })
}

pub fn to_point(n: u64) -> Result<ProjectivePoint> {
    if n == 1 {
        return Err(Error::UnitHasNoPoint);
    }
    point_of(&factor(n)?)
}

/// Whether `log_{g1}(g2)` is rational.
pub fn same_point(g1: u64, g2: u64) -> Result<bool> {
    Ok(to_point(g1)? == to_point(g2)?)
}

/// `(n, m)` with `g1^n = g2^m` and `gcd(n, m) = 1`, when the logarithm is rational.
pub fn power_relation(g1: u64, g2: u64) -> Result<Option<(u64, u64)>> {
    let (f1, f2) = (factor(g1)?, factor(g2)?);
    let (p1, p2) = (point_of(&f1)?, point_of(&f2)?);
    if p1 != p2 {
        return Ok(None);
    }
    // g1 = f^a, g2 = f^b  =>  g1^b = g2^a
    let (lead, e) = p1.coords[0];
    let a = f1.exponent_of(lead) / e;
    let b = f2.exponent_of(lead) / e;
    let g = a.gcd(&b);
    Ok(Some((b / g, a / g)))
}

/// Both at least 2 and on distinct points.
pub fn is_irrational_pair(p1: u64, p2: u64) -> bool {
    if p1 <= 1 || p2 <= 1 {
        return false;
    }
    !same_point(p1, p2).expect("inputs are at least 2")
}

/// Saturated rank-two lattice `V ∩ ℤ^r` over a fixed list of primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneLattice<T> {
    pub primes: Vec<u64>,
    pub basis: [Vec<T>; 2],
}

impl<T: Whole> PlaneLattice<T> {
    /// Saturates the integer span of two independent exponent vectors.
    ///
    /// Also returns the coordinates of `u` and `v` in the new basis.
    #[allow(clippy::type_complexity)]
    pub fn through(primes: Vec<u64>, u: &[T], v: &[T]) -> Option<(Self, (T, T), (T, T))> {
        let red = column_reduce(&[u.to_vec(), v.to_vec()]);
        if red.rank != 2 {
            return None;
        }
        let basis = [red.w_inv[0].clone(), red.w_inv[1].clone()];
        let cu = (red.h[0][0].clone(), red.h[0][1].clone());
        let cv = (red.h[1][0].clone(), red.h[1][1].clone());
        Some((PlaneLattice { primes, basis }, cu, cv))
    }

    pub fn minor_gcd(&self) -> T {
        minor_gcd(&self.basis[0], &self.basis[1])
    }

    pub fn is_saturated(&self) -> bool {
        self.minor_gcd().is_one()
    }

    pub fn point(&self, c: &(T, T)) -> Vec<T> {
        self.basis[0]
            .iter()
            .zip(&self.basis[1])
            .map(|(s, t)| s.clone() * c.0.clone() + t.clone() * c.1.clone())
            .collect()
    }

    /// Coordinates of `w` in the basis, if `w` lies in the lattice.
    pub fn coordinates(&self, w: &[T]) -> Option<(T, T)> {
        let (s, t) = (&self.basis[0], &self.basis[1]);
        let n = s.len();
        let (i, j, m) = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, s[i].clone() * t[j].clone() - s[j].clone() * t[i].clone()))
            .find(|(_, _, m)| !m.is_zero())?;
        let a_num = w[i].clone() * t[j].clone() - w[j].clone() * t[i].clone();
        let b_num = s[i].clone() * w[j].clone() - s[j].clone() * w[i].clone();
        if !a_num.is_multiple_of(&m) || !b_num.is_multiple_of(&m) {
            return None;
        }
        let c = (a_num / m.clone(), b_num / m);
        (self.point(&c).as_slice() == w).then_some(c)
    }

    /// The two extreme rays of the plane's intersection with the non-negative
    /// orthant, as primitive lattice coordinates.
    fn extreme_rays(&self) -> Vec<(T, T)> {
        let (s, t) = (&self.basis[0], &self.basis[1]);
        let mut rays: Vec<(T, T)> = Vec::new();
        for (si, ti) in s.iter().zip(t) {
            if si.is_zero() && ti.is_zero() {
                continue;
            }
            for dir in [(-ti.clone(), si.clone()), (ti.clone(), -si.clone())] {
                let dir = primitive2(dir);
                let inside = s.iter().zip(t).all(|(a, b)| !(a.clone() * dir.0.clone() + b.clone() * dir.1.clone()).is_negative());
                if inside && !rays.contains(&dir) {
                    rays.push(dir);
                }
            }
        }
        rays
    }
}

/// The plane through two points and the Hilbert basis of its non-negative part.
#[derive(Debug, Clone)]
pub struct LineGeometry {
    pub lattice: PlaneLattice<BigInt>,
    /// Exponent vectors over `lattice.primes`, ordered from the ray on the
    /// first point's side to the other ray.
    pub hilbert_basis: Vec<Vec<u64>>,
}

impl LineGeometry {
    pub fn integers(&self) -> Vec<FactoredInteger> {
        self.hilbert_basis.iter().map(|v| integer_of(&self.lattice.primes, v)).collect()
    }
}

fn integer_of(primes: &[u64], v: &[u64]) -> FactoredInteger {
    FactoredInteger::from_factors(primes.iter().copied().zip(v.iter().copied())).expect("primes")
}

fn vector_over(primes: &[u64], f: impl Fn(u64) -> u64) -> Vec<BigInt> {
    primes.iter().map(|&p| BigInt::from(f(p))).collect()
}

fn to_u64_vec(v: &[BigInt]) -> Vec<u64> {
    v.iter().map(|x| x.to_u64().expect("cone points are non-negative")).collect()
}

pub fn line_geometry(p1: &ProjectivePoint, p2: &ProjectivePoint) -> Option<LineGeometry> {
    let primes: Vec<u64> = p1.support().chain(p2.support()).collect::<BTreeSet<_>>().into_iter().collect();
    let u = vector_over(&primes, |p| p1.exponent(p));
    let v = vector_over(&primes, |p| p2.exponent(p));
    let (lattice, cu, _cv) = PlaneLattice::through(primes, &u, &v)?;
    let mut rays = lattice.extreme_rays();
    debug_assert_eq!(rays.len(), 2, "pointed planar cone has two rays");
    rays.sort_by_key(|r| det2(&cu, r));
    let basis = hilbert_basis_2d(&rays[0], &rays[1]);
    let hilbert_basis = basis.iter().map(|c| to_u64_vec(&lattice.point(c))).collect();
    Some(LineGeometry { lattice, hilbert_basis })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassificationResult {
    SinglePoint { f: FactoredInteger },
    DoublyClosed { q1: FactoredInteger, q2: FactoredInteger },
    NotDoublyClosed { primes: Vec<u64>, hilbert_basis: Vec<Vec<u64>> },
    HigherRank { rank: usize },
}

impl ClassificationResult {
    pub fn hilbert_integers(&self) -> Vec<FactoredInteger> {
        match self {
            ClassificationResult::NotDoublyClosed { primes, hilbert_basis } => {
                hilbert_basis.iter().map(|v| integer_of(primes, v)).collect()
            }
            ClassificationResult::DoublyClosed { q1, q2 } => vec![q1.clone(), q2.clone()],
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for ClassificationResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassificationResult::SinglePoint { f: g } => write!(f, "SinglePoint({g})"),
            ClassificationResult::DoublyClosed { q1, q2 } => write!(f, "DoublyClosed({q1}, {q2})"),
            ClassificationResult::NotDoublyClosed { .. } => {
                let ints: Vec<String> = self.hilbert_integers().iter().map(|x| x.to_string()).collect();
                write!(f, "NotDoublyClosed(hilbert basis: {})", ints.join(", "))
            }
            ClassificationResult::HigherRank { rank } => write!(f, "HigherRank({rank})"),
        }
    }
}

/// Classifies the line through two points.
pub fn classify_line(p1: &ProjectivePoint, p2: &ProjectivePoint) -> ClassificationResult {
    let Some(geom) = line_geometry(p1, p2) else {
        return ClassificationResult::SinglePoint { f: p1.representative() };
    };
    if geom.hilbert_basis.len() == 2 {
        let ints = geom.integers();
        ClassificationResult::DoublyClosed { q1: ints[0].clone(), q2: ints[1].clone() }
    } else {
        ClassificationResult::NotDoublyClosed { primes: geom.lattice.primes, hilbert_basis: geom.hilbert_basis }
    }
}

/// A generator written over the reduced generators: `g = ∏ b_i^{e_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub generator: u64,
    pub exponents: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub classification: ClassificationResult,
    pub witnesses: Vec<Witness>,
}

/// Solves `w = a·x + b·y` over ℤ_{≥0}.
fn nonneg_combination(x: &[BigInt], y: &[BigInt], w: &[BigInt]) -> Option<(u64, u64)> {
    let n = w.len();
    let (i, j, m) = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, &x[i] * &y[j] - &x[j] * &y[i]))
        .find(|(_, _, m)| !m.is_zero())?;
    let a_num = &w[i] * &y[j] - &w[j] * &y[i];
    let b_num = &x[i] * &w[j] - &x[j] * &w[i];
    if !a_num.is_multiple_of(&m) || !b_num.is_multiple_of(&m) {
        return None;
    }
    let (a, b) = (a_num / &m, b_num / m);
    if a.is_negative() || b.is_negative() {
        return None;
    }
    let ok = (0..n).all(|k| &x[k] * &a + &y[k] * &b == w[k]);
    ok.then(|| (a.to_u64().expect("small"), b.to_u64().expect("small")))
}

fn pair_witnesses(q1: &FactoredInteger, q2: &FactoredInteger, gens: &[FactoredInteger], values: &[u64], primes: &[u64]) -> Result<Vec<Witness>, u64> {
    let x = vector_over(primes, |p| q1.exponent_of(p));
    let y = vector_over(primes, |p| q2.exponent_of(p));
    gens.iter()
        .zip(values)
        .map(|(g, &value)| {
            let w = vector_over(primes, |p| g.exponent_of(p));
            nonneg_combination(&x, &y, &w)
                .map(|(a, b)| Witness { generator: value, exponents: vec![a, b] })
                .ok_or(value)
        })
        .collect()
}

/// Reduces a generator set to one or two generators of a containing semigroup.
pub fn reduce_generators(gens: &GeneratorSet) -> Result<Reduction> {
    let factored: Vec<FactoredInteger> = gens.gens().iter().map(|&g| factor(g)).collect::<Result<_>>()?;
    let points: Vec<ProjectivePoint> = factored.iter().map(point_of).collect::<Result<_>>()?;
    let primes: Vec<u64> = points.iter().flat_map(|p| p.support()).collect::<BTreeSet<_>>().into_iter().collect();
    let rows: Vec<Vec<BigInt>> = factored.iter().map(|f| vector_over(&primes, |p| f.exponent_of(p))).collect();
    let rank = column_reduce(&rows).rank;
    match rank {
        1 => {
            let f = points[0].representative();
            let (lead, e) = points[0].coords[0];
            let witnesses = factored
                .iter()
                .zip(gens.gens())
                .map(|(g, &value)| Witness { generator: value, exponents: vec![g.exponent_of(lead) / e] })
                .collect();
            Ok(Reduction { classification: ClassificationResult::SinglePoint { f }, witnesses })
        }
        2 => {
            let other = points.iter().find(|p| **p != points[0]).expect("rank two has two points");
            let classification = classify_line(&points[0], other);
            let witnesses = match &classification {
                ClassificationResult::DoublyClosed { q1, q2 } => {
                    pair_witnesses(q1, q2, &factored, gens.gens(), &primes)
                        .map_err(|generator| Error::MembershipFailure { generator })?
                }
                _ => Vec::new(),
            };
            Ok(Reduction { classification, witnesses })
        }
        r => Ok(Reduction { classification: ClassificationResult::HigherRank { rank: r }, witnesses: Vec::new() }),
    }
}

/// Gaps of `⟨gens⟩`, read off a singly or doubly generated superset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorGaps {
    Powers(Vec<PowerGap>),
    Pair { q1: u64, q2: u64, certificates: Vec<GapCertificate> },
}

fn as_word(f: &FactoredInteger) -> Result<u64> {
    f.checked_value::<u64>().ok_or_else(|| Error::OutOfRange(format!("reduced generator {f} exceeds u64")))
}

/// Gap intervals for `⟨gens⟩` from the containing semigroup found by
/// [`reduce_generators`]; `terms` counts powers or stabilization terms.
///
/// When the line is not doubly closed but every generator already lies in the
/// semigroup of the two extreme-ray integers (always the case for two
/// generators), that pair is used.
pub fn gaps_for_generators(gens: &GeneratorSet, terms: usize) -> Result<GeneratorGaps> {
    let reduction = reduce_generators(gens)?;
    let (q1, q2) = match &reduction.classification {
        ClassificationResult::SinglePoint { f } => {
            return Ok(GeneratorGaps::Powers(singly_generated_gaps(as_word(f)?, terms as u64)?));
        }
        ClassificationResult::DoublyClosed { q1, q2 } => (q1.clone(), q2.clone()),
        ClassificationResult::NotDoublyClosed { primes, hilbert_basis } => {
            let r1 = integer_of(primes, &hilbert_basis[0]);
            let r2 = integer_of(primes, hilbert_basis.last().expect("non-empty"));
            let factored: Vec<FactoredInteger> = gens.gens().iter().map(|&g| factor(g)).collect::<Result<_>>()?;
            if pair_witnesses(&r1, &r2, &factored, gens.gens(), primes).is_err() {
                return Err(Error::NotReducible(reduction.classification.to_string()));
            }
            (r1, r2)
        }
        ClassificationResult::HigherRank { .. } => {
            return Err(Error::NotReducible(reduction.classification.to_string()));
        }
    };
    let (a, b) = (as_word(&q1)?, as_word(&q2)?);
    let certificates = gap_certificates(a, b, terms, true)?;
    Ok(GeneratorGaps::Pair { q1: a.min(b), q2: a.max(b), certificates })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(n: u64) -> ProjectivePoint {
        to_point(n).unwrap()
    }

    #[test]
    fn points() {
        assert_eq!(pt(36).coords(), &[(2, 1), (3, 1)]);
        assert_eq!(pt(45).coords(), &[(3, 2), (5, 1)]);
        assert_eq!(pt(8).coords(), &[(2, 1)]);
        assert_eq!(pt(10).to_string(), "2*5");
        assert_eq!(to_point(1), Err(Error::UnitHasNoPoint));
    }

    #[test]
    fn log_rationality() {
        assert_eq!(same_point(4, 8), Ok(true));
        assert_eq!(same_point(2, 3), Ok(false));
        assert_eq!(same_point(7, 7), Ok(true));
        assert_eq!(power_relation(4, 8), Ok(Some((3, 2))));
        assert_eq!(power_relation(2, 3), Ok(None));
        assert!(is_irrational_pair(2, 3));
        assert!(!is_irrational_pair(1, 5));
        assert!(is_irrational_pair(12, 18));
        assert!(!is_irrational_pair(9, 27));
    }

    #[test]
    fn classify_examples() {
        let f = |s: &str| s.parse::<FactoredInteger>().unwrap();
        assert_eq!(
            classify_line(&pt(10), &pt(15)),
            ClassificationResult::DoublyClosed { q1: f("2*5"), q2: f("3*5") }
        );
        assert_eq!(
            classify_line(&pt(45), &pt(20)),
            ClassificationResult::NotDoublyClosed {
                primes: vec![2, 3, 5],
                hilbert_basis: vec![vec![0, 2, 1], vec![1, 1, 1], vec![2, 0, 1]]
            }
        );
        assert_eq!(classify_line(&pt(2), &pt(3)), ClassificationResult::DoublyClosed { q1: f("2"), q2: f("3") });
        // the line through 6 and 12 is the whole (2,3)-plane
        assert_eq!(classify_line(&pt(6), &pt(12)), ClassificationResult::DoublyClosed { q1: f("3"), q2: f("2") });
    }

    #[test]
    fn reduce_examples() {
        let r = reduce_generators(&GeneratorSet::new([4, 8]).unwrap()).unwrap();
        assert_eq!(r.classification, ClassificationResult::SinglePoint { f: "2".parse().unwrap() });
        assert_eq!(r.witnesses.iter().map(|w| w.exponents[0]).collect::<Vec<_>>(), vec![2, 3]);

        let r = reduce_generators(&GeneratorSet::new([10, 15, 150]).unwrap()).unwrap();
        assert!(matches!(r.classification, ClassificationResult::DoublyClosed { .. }));
        assert_eq!(r.witnesses[2], Witness { generator: 150, exponents: vec![1, 1] });

        let r = reduce_generators(&GeneratorSet::new([45, 20, 30]).unwrap()).unwrap();
        assert!(matches!(r.classification, ClassificationResult::NotDoublyClosed { .. }));

        let r = reduce_generators(&GeneratorSet::new([2, 3, 5]).unwrap()).unwrap();
        assert_eq!(r.classification, ClassificationResult::HigherRank { rank: 3 });
    }

    #[test]
    fn gaps_for_generator_sets() {
        match gaps_for_generators(&GeneratorSet::new([4, 8]).unwrap(), 3).unwrap() {
            GeneratorGaps::Powers(g) => assert_eq!(g[0].left.to_string(), "2"),
            other => panic!("{other:?}"),
        }
        match gaps_for_generators(&GeneratorSet::new([2, 3]).unwrap(), 3).unwrap() {
            GeneratorGaps::Pair { q1: 2, q2: 3, certificates } => assert_eq!(certificates[1].left.to_string(), "3^4"),
            other => panic!("{other:?}"),
        }
        match gaps_for_generators(&GeneratorSet::new([45, 20]).unwrap(), 3).unwrap() {
            GeneratorGaps::Pair { q1: 20, q2: 45, .. } => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            gaps_for_generators(&GeneratorSet::new([45, 20, 30]).unwrap(), 3),
            Err(Error::NotReducible(_))
        ));
        assert!(matches!(
            gaps_for_generators(&GeneratorSet::new([2, 3, 5]).unwrap(), 3),
            Err(Error::NotReducible(_))
        ));
    }

    #[test]
    fn lattice_generic_agrees() {
        let u = [0i64, 2, 1];
        let v = [2i64, 0, 1];
        let (small, _, _) = PlaneLattice::through(vec![2, 3, 5], &u, &v).unwrap();
        let ub: Vec<BigInt> = u.iter().map(|&x| x.into()).collect();
        let vb: Vec<BigInt> = v.iter().map(|&x| x.into()).collect();
        let (big, _, _) = PlaneLattice::through(vec![2, 3, 5], &ub, &vb).unwrap();
        assert!(small.is_saturated() && big.is_saturated());
        let small_b: Vec<Vec<BigInt>> = small.basis.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
        assert_eq!(small_b, big.basis.to_vec());
        assert!(small.coordinates(&[1, 1, 1]).is_some());
        assert_eq!(small.coordinates(&[1, 0, 0]), None);
    }
}
