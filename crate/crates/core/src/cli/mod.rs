//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input, 3 verification refused (budget),
//! 4 verification failed, 5 reproduction differs from the expected values.

pub mod reproduce;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gaps::{
    appendix_certificate, gap_certificates, verify_appendix, verify_certificate, verify_interval,
    CertificateJson, GapCertificate, Status, Verification, VerifyBudget,
};
use crate::multigen::minima_sequence;
use crate::projgeom::{classify_line, gaps_for_generators, reduce_generators, to_point, GeneratorGaps};
use crate::semigroup::{enumerate_upto_with_budget, factor, FactoredInteger, GeneratorSet};
use crate::sequences::{approx_inverse_seq, crosscheck_routes, stab_prefix, stab_sequence};
use reproduce::{reproduce, ExpectedValues};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;
pub const EXIT_FAILED: i32 = 4;
pub const EXIT_DIFF: i32 = 5;

/// Environment variable overriding the enumeration budget.
pub const BUDGET_ENV: &str = "SEMIGAPS_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "semigaps", version, about = "Gap certificates for multiplicative semigroups of the naturals")]
pub struct RunConfig {
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Maximum number of elements an oracle enumeration may produce.
    #[arg(long, env = BUDGET_ENV, default_value_t = 10_000_000, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    /// Right end points with more bits than this are refused by the oracle.
    #[arg(long, default_value_t = 63, global = true, value_parser = clap::value_parser!(u64).range(1..=127))]
    pub max_bits: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Generators {
    #[arg(required = true, num_args = 1..)]
    pub gens: Vec<u64>,
}

impl Generators {
    fn set(&self) -> Result<GeneratorSet> {
        GeneratorSet::new(self.gens.iter().copied())
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Approximate inverses of p modulo q.
    ApproxInv { p: u64, q: u64 },
    /// Stabilization terms (k_j, x2(k_j)) of an irrational pair.
    Stab {
        p1: u64,
        p2: u64,
        #[arg(long, default_value_t = 1000)]
        max_k: u64,
        /// Stop after this many terms instead of scanning to --max-k.
        #[arg(long)]
        terms: Option<usize>,
        /// Also run the approximate-inverse crosscheck.
        #[arg(long)]
        crosscheck: bool,
    },
    /// Gap certificates for a pair, or for a generator set via reduction.
    Gaps {
        #[command(flatten)]
        gens: Generators,
        /// Number of stabilization terms (powers, for a single point).
        #[arg(long, default_value_t = 5)]
        terms: usize,
        /// Emit every offset t, not only the widest certificate per term.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        verify: bool,
    },
    /// The gap (left, left + K) with left = ∏ n_i^⌈log_{n_i} K⌉.
    AppendixGap {
        #[command(flatten)]
        gens: Generators,
        #[arg(long = "k")]
        k: u64,
        #[arg(long)]
        verify: bool,
    },
    /// Classify the line through the generators' projective points.
    Classify {
        #[command(flatten)]
        gens: Generators,
    },
    /// Reduce a generator set to at most two generators.
    Reduce {
        #[command(flatten)]
        gens: Generators,
        /// Also list gap intervals from this many terms.
        #[arg(long)]
        gaps: Option<usize>,
    },
    /// List all semigroup elements up to a bound.
    Enumerate {
        #[command(flatten)]
        gens: Generators,
        #[arg(long)]
        bound: u64,
    },
    /// Check an interval or a certificate file with the enumeration oracle.
    Verify {
        /// JSON certificate file (a single object or an array).
        #[arg(long, conflicts_with_all = ["gens", "left", "right"])]
        cert: Option<PathBuf>,
        #[arg(long, num_args = 1..)]
        gens: Vec<u64>,
        /// Left end point, decimal or factored (`2^8*3^11`).
        #[arg(long, value_parser = parse_endpoint)]
        left: Option<FactoredInteger>,
        #[arg(long, value_parser = parse_endpoint)]
        right: Option<FactoredInteger>,
    },
    /// Minima sequence for three or more primes.
    Lemma235 {
        #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 15)]
        k_max: u64,
    },
    /// Recompute the (2, 3) example and diff it against the expected values.
    ReproduceExampleMain {
        /// Expected-values file; the bundled transcription by default.
        #[arg(long)]
        expected: Option<PathBuf>,
    },
}

/// Rendered result of one subcommand.
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub code: i32,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { text, json, code: EXIT_OK }
    }
}

fn worst(codes: impl IntoIterator<Item = Status>) -> i32 {
    codes.into_iter().fold(EXIT_OK, |acc, s| match s {
        Status::Failed => EXIT_FAILED,
        Status::Refused if acc != EXIT_FAILED => EXIT_REFUSED,
        _ => acc,
    })
}

fn budget(cfg: &RunConfig) -> VerifyBudget {
    VerifyBudget { max_elements: cfg.budget as u128, max_right_bits: cfg.max_bits }
}

fn verification_json(v: &Verification) -> Value {
    match v {
        Verification::Verified => json!({ "status": "verified" }),
        Verification::Refused(why) => json!({ "status": "refused", "reason": why }),
        Verification::Failed(m) => json!({ "status": "failed", "counterexample": m.to_string() }),
    }
}

fn verification_text(v: &Verification) -> String {
    match v {
        Verification::Verified => "verified".into(),
        Verification::Refused(why) => format!("refused ({why})"),
        Verification::Failed(m) => format!("FAILED: {m} lies inside"),
    }
}

fn certificates_outcome(certs: &mut [GapCertificate], verify: bool, budget: &VerifyBudget) -> Outcome {
    let mut text = String::new();
    let _ = writeln!(text, "{:>4} {:>8}  {:<28} {:<28} status", "j", "t", "left", "right");
    for c in certs.iter_mut() {
        if verify {
            c.status = verify_certificate(c, budget).status();
        }
        let status = serde_json::to_value(c.status).expect("status serializes");
        let _ = writeln!(
            text,
            "{:>4} {:>8}  {:<28} {:<28} {}",
            c.j,
            c.t,
            c.left.to_string(),
            c.right.to_string(),
            status.as_str().unwrap_or_default()
        );
    }
    let json: Vec<CertificateJson> = certs.iter().map(GapCertificate::to_json).collect();
    Outcome {
        text,
        json: serde_json::to_value(json).expect("certificates serialize"),
        code: worst(certs.iter().map(|c| c.status)),
    }
}

fn execute(cfg: &RunConfig) -> Result<Outcome> {
    let budget = budget(cfg);
    match &cfg.command {
        Command::ApproxInv { p, q } => {
            let rec = approx_inverse_seq(*p, *q)?;
            let mut text = format!("approximate inverses of {p} mod {q}\n{:>10} {:>10} {:>10}\n", "l+1", "j", "residue");
            for e in &rec.entries {
                let _ = writeln!(text, "{:>10} {:>10} {:>10}", e.l + 1, e.j, e.residue);
            }
            let json = json!({ "p": p, "q": q, "inverses": rec.inverses(), "entries": rec.entries });
            Ok(Outcome::ok(text, json))
        }
        Command::Stab { p1, p2, max_k, terms, crosscheck } => {
            let rec = match terms {
                Some(n) => stab_prefix(*p1, *p2, *n, *max_k)?,
                None => stab_sequence(*p1, *p2, *max_k)?,
            };
            let mut text = format!("{:>10} {:>10}\n", "k", "x2");
            for t in &rec.terms {
                let _ = writeln!(text, "{:>10} {:>10}", t.k, t.x2);
            }
            let mut json = json!({ "pair": [p1, p2], "terms": rec.terms });
            if *crosscheck {
                let report = crosscheck_routes(&rec)?;
                let _ = writeln!(
                    text,
                    "crosscheck {}/{}: common prefix {} of {} terms, final inverse {:?}",
                    report.numerator,
                    report.denominator,
                    report.prefix_len,
                    rec.terms.len(),
                    report.final_inverse
                );
                json["crosscheck"] = serde_json::to_value(&report).expect("report serializes");
            }
            Ok(Outcome::ok(text, json))
        }
        Command::Gaps { gens, terms, all, verify } => {
            let set = gens.set()?;
            if set.len() == 2 && !*all {
                if let Ok(mut certs) = gap_certificates(set.gens()[0], set.gens()[1], *terms, true) {
                    return Ok(certificates_outcome(&mut certs, *verify, &budget));
                }
            }
            if set.len() == 2 {
                let (a, b) = (set.gens()[0], set.gens()[1]);
                if crate::projgeom::is_irrational_pair(a, b) {
                    let mut certs = gap_certificates(a, b, *terms, !*all)?;
                    return Ok(certificates_outcome(&mut certs, *verify, &budget));
                }
            }
            match gaps_for_generators(&set, *terms)? {
                GeneratorGaps::Pair { mut certificates, .. } => {
                    let mut out = certificates_outcome(&mut certificates, false, &budget);
                    if *verify {
                        // gaps of the superset are checked against the original set
                        let mut statuses = Vec::new();
                        let mut text = String::new();
                        let mut json = Vec::new();
                        for c in &certificates {
                            let v = verify_interval(&set, &c.left, &c.right, &budget);
                            statuses.push(v.status());
                            let _ = writeln!(text, "({}, {}) {}", c.left, c.right, verification_text(&v));
                            let mut j = serde_json::to_value(c.to_json()).expect("serializes");
                            j["status"] = serde_json::to_value(v.status()).expect("serializes");
                            json.push(j);
                        }
                        out = Outcome { text, json: Value::Array(json), code: worst(statuses) };
                    }
                    Ok(out)
                }
                GeneratorGaps::Powers(gaps) => {
                    let mut text = String::new();
                    let mut rows = Vec::new();
                    let mut statuses = Vec::new();
                    for g in &gaps {
                        let mut row = json!({ "base": g.base, "j": g.j, "left": g.left, "right": g.right });
                        let mut line = format!("({}, {})", g.left, g.right);
                        if *verify {
                            let v = verify_interval(&set, &g.left, &g.right, &budget);
                            statuses.push(v.status());
                            row["verification"] = verification_json(&v);
                            let _ = write!(line, " {}", verification_text(&v));
                        }
                        let _ = writeln!(text, "{line}");
                        rows.push(row);
                    }
                    Ok(Outcome { text, json: Value::Array(rows), code: worst(statuses) })
                }
            }
        }
        Command::AppendixGap { gens, k, verify } => {
            let set = gens.set()?;
            let cert = appendix_certificate(&set, *k)?;
            let left = cert.left_value();
            let terms: Vec<String> = cert.gens.iter().zip(&cert.exponents).map(|(g, a)| format!("{g}^{a}")).collect();
            let mut text = format!("left = {} = {left}\nno element of ⟨{}⟩ in ({left}, {})\n", terms.join("*"), join(set.gens()), cert.right_value());
            let mut json = json!({
                "gens": cert.gens,
                "exponents": cert.exponents,
                "left": left.to_string(),
                "left_factored": cert.left_factored()?,
                "guarantee": cert.guarantee,
            });
            let mut code = EXIT_OK;
            if *verify {
                let v = verify_appendix(&cert, &budget);
                let _ = writeln!(text, "{}", verification_text(&v));
                json["verification"] = verification_json(&v);
                code = worst([v.status()]);
            }
            Ok(Outcome { text, json, code })
        }
        Command::Classify { gens } => {
            let set = gens.set()?;
            let classification = if set.len() == 2 {
                classify_line(&to_point(set.gens()[0])?, &to_point(set.gens()[1])?)
            } else {
                reduce_generators(&set)?.classification
            };
            let text = format!("{classification}\n");
            Ok(Outcome::ok(text, serde_json::to_value(&classification).expect("serializes")))
        }
        Command::Reduce { gens, gaps } => {
            let set = gens.set()?;
            let red = reduce_generators(&set)?;
            let mut text = format!("{}\n", red.classification);
            for w in &red.witnesses {
                let _ = writeln!(text, "  {} = exponents {:?}", w.generator, w.exponents);
            }
            let mut json = serde_json::to_value(&red).expect("serializes");
            if let Some(n) = gaps {
                match gaps_for_generators(&set, *n)? {
                    GeneratorGaps::Pair { q1, q2, certificates } => {
                        let _ = writeln!(text, "gaps from ⟨{q1}, {q2}⟩:");
                        for c in &certificates {
                            let _ = writeln!(text, "  ({}, {})", c.left, c.right);
                        }
                        json["gaps"] = serde_json::to_value(certificates.iter().map(|c| c.to_json()).collect::<Vec<_>>()).expect("serializes");
                    }
                    GeneratorGaps::Powers(p) => {
                        for g in &p {
                            let _ = writeln!(text, "  ({}, {})", g.left, g.right);
                        }
                        json["gaps"] = serde_json::to_value(&p).expect("serializes");
                    }
                }
            }
            Ok(Outcome::ok(text, json))
        }
        Command::Enumerate { gens, bound } => {
            let set = gens.set()?;
            let elems = enumerate_upto_with_budget(&set, *bound, budget.max_elements)?;
            let text = elems.iter().map(u64::to_string).collect::<Vec<_>>().join("\n") + "\n";
            Ok(Outcome::ok(text, json!(elems)))
        }
        Command::Verify { cert, gens, left, right } => {
            let items: Vec<(GeneratorSet, FactoredInteger, FactoredInteger, Option<CertificateJson>)> = match cert {
                Some(path) => {
                    let raw = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                    let value: Value = serde_json::from_str(&raw).map_err(|e| Error::Parse(e.to_string()))?;
                    let list = match value {
                        Value::Array(v) => v,
                        other => vec![other],
                    };
                    list.into_iter()
                        .map(|v| {
                            let c: CertificateJson = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
                            Ok((GeneratorSet::new(c.pair)?, c.left.clone(), c.right.clone(), Some(c)))
                        })
                        .collect::<Result<_>>()?
                }
                None => {
                    let (Some(l), Some(r)) = (left, right) else {
                        return Err(Error::OutOfRange("verify needs --cert or --gens/--left/--right".into()));
                    };
                    vec![(GeneratorSet::new(gens.iter().copied())?, l.clone(), r.clone(), None)]
                }
            };
            let mut text = String::new();
            let mut out = Vec::new();
            let mut statuses = Vec::new();
            for (set, l, r, c) in items {
                let v = verify_interval(&set, &l, &r, &budget);
                statuses.push(v.status());
                let _ = writeln!(text, "⟨{}⟩ ({l}, {r}) {}", join(set.gens()), verification_text(&v));
                match c {
                    Some(mut c) => {
                        c.status = v.status();
                        let mut j = serde_json::to_value(&c).expect("serializes");
                        if let Verification::Failed(m) = &v {
                            j["counterexample"] = Value::String(m.to_string());
                        }
                        out.push(j);
                    }
                    None => {
                        let mut j = verification_json(&v);
                        j["gens"] = json!(set.gens());
                        j["left"] = json!(l);
                        j["right"] = json!(r);
                        out.push(j);
                    }
                }
            }
            Ok(Outcome { text, json: Value::Array(out), code: worst(statuses) })
        }
        Command::Lemma235 { primes, k_max } => {
            let rec = minima_sequence(primes, *k_max)?;
            let diffs = rec.differences();
            let mut text = format!("{:>4} {:<24} {:>6}\n", "k", "m", "diff");
            for (i, t) in rec.terms.iter().enumerate() {
                let d = if i == 0 { "-".to_string() } else { diffs[i - 1].to_string() };
                let _ = writeln!(text, "{:>4} {:<24} {:>6}", t.k, t.m.to_string(), d);
            }
            let _ = writeln!(text, "differences nondecreasing: {}", rec.differences_nondecreasing());
            let rows: Vec<Value> = rec
                .terms
                .iter()
                .enumerate()
                .map(|(i, t)| json!({ "k": t.k, "m": t.m, "rep": t.rep, "diff": if i == 0 { None } else { Some(diffs[i - 1]) } }))
                .collect();
            let json = json!({
                "sub_generators": rec.sub_generators,
                "base": rec.base,
                "terms": rows,
                "differences": diffs,
                "nondecreasing": rec.differences_nondecreasing(),
            });
            Ok(Outcome::ok(text, json))
        }
        Command::ReproduceExampleMain { expected } => {
            let expected = match expected {
                Some(path) => ExpectedValues::parse(
                    &std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?,
                )?,
                None => ExpectedValues::bundled(),
            };
            let rep = reproduce(&expected, &budget)?;
            let mut text = String::new();
            let _ = writeln!(text, "k:          {}/{} match", rep.k_matched, expected.k.len());
            let _ = writeln!(text, "x2:         {}/{} match", rep.x2_matched, expected.x2.len());
            let _ = writeln!(text, "gaps:       {}/{} match", rep.gaps_matched, expected.gaps.len());
            let _ = writeln!(text, "approx_inv: {}/{} match", rep.approx_inv_matched, rep.approx_inv_compared);
            let _ = writeln!(
                text,
                "final approximate inverse computed: {:?}; published terminal entry {:?} equals the modulus and is not compared",
                rep.computed_final_inverse, rep.published_terminal
            );
            let _ = writeln!(text, "crosscheck common prefix: {} of {} terms", rep.crosscheck.prefix_len, rep.terms);
            for v in rep.verified.iter().filter(|v| v.outcome == "verified") {
                let _ = writeln!(text, "oracle verified ({}, {})", v.left, v.right);
            }
            for d in &rep.diffs {
                let _ = writeln!(text, "DIFF {d}");
            }
            let code = if rep.diffs.is_empty() { EXIT_OK } else { EXIT_DIFF };
            Ok(Outcome { text, json: serde_json::to_value(&rep).expect("serializes"), code })
        }
    }
}

fn parse_endpoint(s: &str) -> Result<FactoredInteger> {
    if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
        let n: u64 = s.parse().map_err(|_| Error::Parse(format!("`{s}` does not fit in 64 bits; write it factored")))?;
        return factor(n);
    }
    s.parse()
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
}

/// Parses `argv` (program name first), runs it and writes the report to
/// `out` (or `--output`). Returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let outcome = match execute(&cfg) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INVALID;
        }
    };
    let body = match cfg.format {
        Format::Text => outcome.text,
        Format::Json => serde_json::to_string_pretty(&outcome.json).expect("json renders") + "\n",
    };
    let written = match &cfg.output {
        Some(path) => std::fs::write(path, body.as_bytes()),
        None => out.write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return EXIT_INVALID;
    }
    outcome.code
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
