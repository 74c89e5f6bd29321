//! Explicit gap intervals in finitely generated multiplicative semigroups of ℕ.
//!
//! Given generators `d_1, …, d_n`, the set `⟨d_1, …, d_n⟩` of all their products
//! (including the empty product 1) has arbitrarily large gaps. This crate
//! constructs such gaps with exactly factored end points, checks them against
//! a brute-force enumeration oracle, and decides when a generator set can be
//! embedded into a semigroup with at most two generators.
//!
//! Module map:
//!
//! - [`exactcmp`]: exact sign decisions for `a^x` versus `b^y`.
//! - [`sequences`]: approximate inverses of `p mod q` and the stabilization
//!   sequence `(k_j, x₂(k_j))` of an irrational pair.
//! - [`semigroup`]: factored integers, generator sets, the enumeration oracle.
//! - [`gaps`]: gap certificates and their verification.
//! - [`projgeom`]: projective points of integers, plane lattices, line
//!   classification and generator reduction.
//! - [`multigen`]: the minima sequence for three or more primes.
//! - [`cli`]: the command-line front end.
//!
//! The integer-valued algorithms are generic over the scalar types described
//! in [`scalar`]; the aliases below fix the common instantiations.

pub mod cli;
pub mod error;
pub mod exactcmp;
pub mod gaps;
pub mod multigen;
pub mod projgeom;
pub mod scalar;
pub mod semigroup;
pub mod sequences;

pub use error::{Error, Result};
pub use exactcmp::{cmp_power, cmp_zfrac, x2, FracTerm};
pub use gaps::{
    appendix_certificate, gap_certificates, singly_generated_gaps, verify_certificate,
    verify_interval, AppendixCertificate, GapCertificate, PowerGap, Verification, VerifyBudget,
};
pub use multigen::{minima_sequence, MinimaRecord};
pub use projgeom::{
    classify_line, gaps_for_generators, is_irrational_pair, reduce_generators, same_point,
    to_point, ClassificationResult, PlaneLattice, ProjectivePoint,
};
pub use semigroup::{enumerate_upto, factor, interior_empty, is_member, FactoredInteger, GeneratorSet};
pub use sequences::{approx_inverse_seq, crosscheck_routes, stab_prefix, stab_sequence, ApproxInvRecord, StabRecord};

use num_bigint::{BigInt, BigUint};

/// Approximate-inverse record over machine words.
pub type ApproxInv = ApproxInvRecord<u64>;
/// Approximate-inverse record over arbitrary-size naturals.
pub type BigApproxInv = ApproxInvRecord<BigUint>;
/// Saturated plane lattice with machine-word coordinates.
pub type Lattice = PlaneLattice<i64>;
/// Saturated plane lattice with arbitrary-size coordinates.
pub type BigLattice = PlaneLattice<BigInt>;
