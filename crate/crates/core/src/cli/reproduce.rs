//! Reproduction of the bundled (2, 3) example against transcribed values.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaps::{certificates_from_record, verify_certificate, GapCertificate, Verification, VerifyBudget, DEFAULT_MAX_K};
use crate::semigroup::FactoredInteger;
use crate::sequences::{crosscheck_routes, stab_prefix, CrosscheckReport, StabRecord};

pub const BUNDLED_EXPECTED: &str = include_str!("../../data/example_main.txt");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedValues {
    pub k: Vec<u64>,
    pub x2: Vec<u64>,
    pub approx_inv: Vec<u64>,
    pub gaps: Vec<(FactoredInteger, FactoredInteger)>,
}

fn numbers(key: &str, s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|v| v.trim().parse().map_err(|_| Error::Parse(format!("{key}: bad number `{v}`"))))
        .collect()
}

impl ExpectedValues {
    pub fn parse(text: &str) -> Result<Self> {
        let (mut k, mut x2, mut approx_inv, mut gaps) = (None, None, None, None);
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (key, value) = line.split_once(':').ok_or_else(|| Error::Parse(format!("no key in `{line}`")))?;
            match key.trim() {
                "k" => k = Some(numbers("k", value)?),
                "x2" => x2 = Some(numbers("x2", value)?),
                "approx_inv" => approx_inv = Some(numbers("approx_inv", value)?),
                "gaps" => {
                    let parsed = value
                        .split(',')
                        .map(|pair| {
                            let mut it = pair.split_whitespace();
                            match (it.next(), it.next(), it.next()) {
                                (Some(l), Some(r), None) => Ok((l.parse()?, r.parse()?)),
                                _ => Err(Error::Parse(format!("gaps: bad interval `{pair}`"))),
                            }
                        })
                        .collect::<Result<Vec<_>>>()?;
                    gaps = Some(parsed);
                }
                other => return Err(Error::Parse(format!("unknown key `{other}`"))),
            }
        }
        let missing = |name: &str| Error::Parse(format!("missing key `{name}`"));
        Ok(ExpectedValues {
            k: k.ok_or_else(|| missing("k"))?,
            x2: x2.ok_or_else(|| missing("x2"))?,
            approx_inv: approx_inv.ok_or_else(|| missing("approx_inv"))?,
            gaps: gaps.ok_or_else(|| missing("gaps"))?,
        })
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_EXPECTED).expect("bundled file parses")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifiedGap {
    pub left: FactoredInteger,
    pub right: FactoredInteger,
    pub outcome: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproductionReport {
    pub terms: usize,
    pub k_matched: usize,
    pub x2_matched: usize,
    pub gaps_matched: usize,
    pub approx_inv_compared: usize,
    pub approx_inv_matched: usize,
    pub computed_final_inverse: Option<u64>,
    pub published_terminal: Option<u64>,
    pub crosscheck: CrosscheckReport,
    pub verified: Vec<VerifiedGap>,
    pub diffs: Vec<String>,
    #[serde(skip)]
    pub record: StabRecord,
    #[serde(skip)]
    pub certificates: Vec<GapCertificate>,
}

fn diff_lists(name: &str, got: &[u64], want: &[u64], diffs: &mut Vec<String>) -> usize {
    let mut matched = 0;
    for i in 0..got.len().max(want.len()) {
        match (got.get(i), want.get(i)) {
            (Some(g), Some(w)) if g == w => matched += 1,
            (g, w) => diffs.push(format!("{name}[{i}]: computed {g:?}, expected {w:?}")),
        }
    }
    matched
}

/// Recomputes the example and diffs it against `expected`.
pub fn reproduce(expected: &ExpectedValues, budget: &VerifyBudget) -> Result<ReproductionReport> {
    let record = stab_prefix(2, 3, expected.k.len(), DEFAULT_MAX_K)?;
    let mut diffs = Vec::new();
    let k_matched = diff_lists("k", &record.ks(), &expected.k, &mut diffs);
    let x2_matched = diff_lists("x2", &record.x2s(), &expected.x2, &mut diffs);

    let certificates = certificates_from_record(&record, true)?;
    let mut gaps_matched = 0;
    for i in 0..certificates.len().max(expected.gaps.len()) {
        let got = certificates.get(i).map(|c| (c.left.clone(), c.right.clone()));
        match (got, expected.gaps.get(i)) {
            (Some(g), Some(w)) if &g == w => gaps_matched += 1,
            (g, w) => diffs.push(format!("gaps[{i}]: computed {g:?}, expected {w:?}")),
        }
    }

    let crosscheck = crosscheck_routes(&record)?;
    let published = &expected.approx_inv;
    let compared = published.len().saturating_sub(1);
    let got = &crosscheck.inverses;
    let approx_inv_matched = diff_lists(
        "approx_inv",
        &got[..got.len().min(compared)],
        &published[..compared],
        &mut diffs,
    );

    let verified = certificates
        .iter()
        .map(|c| {
            let outcome = match verify_certificate(c, budget) {
                Verification::Verified => "verified".to_string(),
                Verification::Refused(why) => format!("refused: {why}"),
                Verification::Failed(m) => {
                    diffs.push(format!("certificate ({}, {}) contains {m}", c.left, c.right));
                    format!("failed: {m}")
                }
            };
            VerifiedGap { left: c.left.clone(), right: c.right.clone(), outcome }
        })
        .collect();

    Ok(ReproductionReport {
        terms: record.terms.len(),
        k_matched,
        x2_matched,
        gaps_matched,
        approx_inv_compared: compared,
        approx_inv_matched,
        computed_final_inverse: crosscheck.final_inverse,
        published_terminal: published.last().copied(),
        crosscheck,
        verified,
        diffs,
        record,
        certificates,
    })
}
