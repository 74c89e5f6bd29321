//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::cmp::Ordering;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Integer;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use semigaps::cli::reproduce::ExpectedValues;
use semigaps::exactcmp::cmp_power;
use semigaps::gaps::{certificates_from_record, verify_appendix, Status};
use semigaps::projgeom::GeneratorGaps;
use semigaps::*;

const PUBLISHED_K: [u64; 37] = [
    1, 3, 5, 17, 29, 41, 94, 147, 200, 253, 306, 971, 1636, 2301, 2966, 3631, 4296, 4961, 5626, 6291, 6956, 7621, 8286,
    8951, 9616, 10281, 10946, 11611, 12276, 12941, 13606, 14271, 14936, 15601, 47468, 79335, 190537,
];

const PUBLISHED_X2: [u64; 37] = [
    2, 5, 8, 27, 46, 65, 149, 233, 317, 401, 485, 1539, 2593, 3647, 4701, 5755, 6809, 7863, 8917, 9971, 11025, 12079,
    13133, 14187, 15241, 16295, 17349, 18403, 19457, 20511, 21565, 22619, 23673, 24727, 75235, 125743, 301994,
];

const PUBLISHED_APPROX_INV: [u64; 38] = [
    1, 2, 5, 8, 27, 46, 65, 149, 233, 317, 401, 485, 1539, 2593, 3647, 4701, 5755, 6809, 7863, 8917, 9971, 11025, 12079,
    13133, 14187, 15241, 16295, 17349, 18403, 19457, 20511, 21565, 22619, 23673, 24727, 75235, 125743, 301994,
];

fn two_three() -> &'static (StabRecord, Duration) {
    static RECORD: OnceLock<(StabRecord, Duration)> = OnceLock::new();
    RECORD.get_or_init(|| {
        let start = Instant::now();
        let rec = stab_sequence(2, 3, 190_537).expect("scan succeeds");
        (rec, start.elapsed())
    })
}

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn c1_k_sequence() -> Result<String, String> {
    let (rec, elapsed) = two_three();
    ensure(rec.ks() == PUBLISHED_K, || format!("computed {:?}", rec.ks()))?;
    ensure(*elapsed <= Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!("37 k values equal, scan took {:.2?}", elapsed))
}

fn c2_x2_sequence() -> Result<String, String> {
    let (rec, _) = two_three();
    ensure(rec.x2s() == PUBLISHED_X2, || format!("computed {:?}", rec.x2s()))?;
    Ok("37 x2 values equal".into())
}

fn c3_gap_table() -> Result<String, String> {
    let (rec, _) = two_three();
    let certs = certificates_from_record(rec, true).map_err(|e| e.to_string())?;
    let published = ExpectedValues::bundled().gaps;
    let got: Vec<(String, String)> = certs.iter().map(|c| (c.left.to_string(), c.right.to_string())).collect();
    let want: Vec<(String, String)> = published.iter().map(|(l, r)| (l.to_string(), r.to_string())).collect();
    ensure(got == want, || format!("computed {got:?}"))?;
    for (l, r) in [("3^970", "2^485*3^664"), ("3^190536", "2^125743*3^111201")] {
        ensure(got.contains(&(l.to_string(), r.to_string())), || format!("({l}, {r}) missing"))?;
    }
    Ok(format!("{} widest certificates equal the published table", got.len()))
}

fn c4_approx_inverse() -> Result<String, String> {
    let rec = approx_inverse_seq(190_537u64, 301_994).map_err(|e| e.to_string())?;
    let inv = rec.inverses();
    let n = PUBLISHED_APPROX_INV.len() - 1;
    ensure(inv.len() >= n && inv[..n] == PUBLISHED_APPROX_INV[..n], || format!("computed {inv:?}"))?;
    let last = rec.final_inverse();
    ensure((last as u128 * 190_537) % 301_994 == 1, || format!("{last} is not an inverse"))?;
    ensure(PUBLISHED_APPROX_INV[n] == 301_994, || "published terminal entry changed".into())?;
    let (stab, _) = two_three();
    let report = crosscheck_routes(stab).map_err(|e| e.to_string())?;
    ensure(report.final_inverse == Some(last), || format!("crosscheck final {:?}", report.final_inverse))?;
    Ok(format!(
        "{n} published entries match; computed final inverse {last}; published terminal 301994 equals q"
    ))
}

fn c5_oracle_verification() -> Result<String, String> {
    let start = Instant::now();
    let rec = stab_prefix(2, 3, 8, 1000).map_err(|e| e.to_string())?;
    let certs = certificates_from_record(&rec, false).map_err(|e| e.to_string())?;
    let budget = VerifyBudget::default();
    let limit = BigUint::from(50_000_000u64);
    let mut verified = Vec::new();
    for c in certs.iter().filter(|c| c.right.value() <= limit) {
        let v = verify_certificate(c, &budget);
        ensure(v == Verification::Verified, || format!("({}, {}) gave {v:?}", c.left, c.right))?;
        verified.push((c.left.to_string(), c.right.to_string()));
    }
    for (l, r) in [("3^2", "2^2*3"), ("3^4", "2^5*3"), ("3^16", "2^8*3^11")] {
        ensure(verified.contains(&(l.to_string(), r.to_string())), || format!("({l}, {r}) not checked"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("{} certificates verified in {:.2?}", verified.len(), elapsed))
}

fn c6_approx_inverse_properties() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(6);
    let mut done = 0;
    while done < 200 {
        let q = rng.gen_range(2..=5000u64);
        let p = rng.gen_range(1..q);
        if p.gcd(&q) != 1 {
            continue;
        }
        let rec = approx_inverse_seq(p, q).map_err(|e| format!("({p}, {q}): {e}"))?;
        let e = &rec.entries;
        ensure(e.windows(2).all(|w| w[1].residue < w[0].residue), || format!("({p}, {q}) residues not decreasing"))?;
        ensure(e.last().map(|x| x.residue) == Some(1), || format!("({p}, {q}) does not end at 1"))?;
        for x in e {
            ensure(((x.l + 1) * p) % q == x.residue, || format!("({p}, {q}) residue mismatch at l = {}", x.l))?;
        }
        let diffs: Vec<u64> = e.windows(2).map(|w| w[1].l - w[0].l).collect();
        ensure(diffs.windows(2).all(|w| w[0] <= w[1]), || format!("({p}, {q}) l-differences {diffs:?}"))?;
        ensure((rec.final_inverse() * p) % q == 1, || format!("({p}, {q}) final inverse wrong"))?;
        done += 1;
    }
    Ok("200 coprime pairs, zero failures".into())
}

fn random_irrational_pairs() -> &'static Vec<(u64, u64)> {
    static PAIRS: OnceLock<Vec<(u64, u64)>> = OnceLock::new();
    PAIRS.get_or_init(|| {
        let mut rng = StdRng::seed_from_u64(7);
        let mut out = Vec::new();
        while out.len() < 20 {
            let p2 = rng.gen_range(3..=30u64);
            let p1 = rng.gen_range(2..p2);
            if is_irrational_pair(p1, p2) && !out.contains(&(p1, p2)) {
                out.push((p1, p2));
            }
        }
        out
    })
}

fn c7_stabilization_properties() -> Result<String, String> {
    let mut min_terms = usize::MAX;
    for &(p1, p2) in random_irrational_pairs() {
        let rec = stab_sequence(p1, p2, 20_000).map_err(|e| format!("({p1}, {p2}): {e}"))?;
        min_terms = min_terms.min(rec.terms.len());
        for t in &rec.terms {
            let (k, x) = (t.k as i64, t.x2 as i64);
            ensure(
                cmp_power(p2, k, p1, x) == Ordering::Less && cmp_power(p1, x, p2, k + 1) == Ordering::Less,
                || format!("({p1}, {p2}) term ({k}, {x}) out of bracket"),
            )?;
        }
        for w in rec.terms.windows(2) {
            let ord = cmp_power(p1, w[1].x2 as i64 - w[0].x2 as i64, p2, w[1].k as i64 - w[0].k as i64);
            ensure(ord == Ordering::Less, || format!("({p1}, {p2}) ratio not decreasing at k = {}", w[1].k))?;
        }
        if rec.terms.len() >= 2 {
            let report = crosscheck_routes(&rec).map_err(|e| e.to_string())?;
            ensure(report.prefix_len + 1 >= rec.terms.len(), || {
                format!("({p1}, {p2}) prefix {} of {} terms", report.prefix_len, rec.terms.len())
            })?;
        }
    }
    Ok(format!("20 pairs, at least {min_terms} terms each, crosscheck prefixes ≥ terms − 1"))
}

fn c8_lemma235() -> Result<String, String> {
    let rec = minima_sequence(&[2, 3, 5], 15).map_err(|e| e.to_string())?;
    ensure(rec.ks() == [0, 1, 2, 3, 7, 8, 13, 14], || format!("k = {:?}", rec.ks()))?;
    let reps: Vec<String> = rec.terms.iter().map(|t| t.m.to_string()).collect();
    ensure(reps[4..] == ["2^2*3^9", "2^17*3", "2^8*3^14", "2^23*3^6"], || format!("reps {reps:?}"))?;
    ensure(reps[..4] == ["2", "2*3", "3^3", "2^7"], || format!("reps {reps:?}"))?;
    ensure(rec.differences() == [1, 1, 1, 4, 1, 5, 1], || format!("diffs {:?}", rec.differences()))?;
    ensure(!rec.differences_nondecreasing(), || "reported monotone".into())?;
    Ok("k = {0,1,2,3,7,8,13,14}, differences {1,1,1,4,1,5,1}".into())
}

fn c9_classification() -> Result<String, String> {
    let pt = |n| to_point(n).unwrap();
    let c = classify_line(&pt(10), &pt(15));
    let want = ClassificationResult::DoublyClosed { q1: factor(10).unwrap(), q2: factor(15).unwrap() };
    ensure(c == want, || format!("(10, 15) gave {c}"))?;
    let thirty = factor(30).unwrap();
    for gens in [vec![45u64, 20], vec![45, 20, 30]] {
        let set = GeneratorSet::new(gens.clone()).unwrap();
        let c = reduce_generators(&set).map_err(|e| e.to_string())?.classification;
        let basis = c.hilbert_integers();
        ensure(
            matches!(c, ClassificationResult::NotDoublyClosed { .. }) && basis.len() == 3 && basis.contains(&thirty),
            || format!("{gens:?} gave {c}"),
        )?;
    }
    let set = GeneratorSet::new([45, 20]).unwrap();
    ensure(is_member(&set, 30u64).is_none(), || "30 reported present".into())?;
    ensure(is_member(&set, 900u64) == Some(vec![1, 1]), || "900 not 20·45".into())?;
    Ok("(10,15) doubly closed; (45,20), (45,20,30) not, basis contains 30; 30 ∉, 900 ∈ ⟨45,20⟩".into())
}

fn c10_appendix() -> Result<String, String> {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(10);
    let budget = VerifyBudget { max_right_bits: 127, ..VerifyBudget::default() };
    for case in 0..100 {
        let n = rng.gen_range(1..=4);
        let gens: Vec<u64> = (0..n).map(|_| rng.gen_range(2..=50)).collect();
        let k = rng.gen_range(1..=10_000u64);
        let set = GeneratorSet::new(gens.clone()).unwrap();
        let cert = appendix_certificate(&set, k).map_err(|e| e.to_string())?;
        let v = verify_appendix(&cert, &budget);
        ensure(v == Verification::Verified, || format!("case {case}: {gens:?}, K = {k}: {v:?}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("100 cases verified in {:.2?}", elapsed))
}

fn c11_reduction() -> Result<String, String> {
    let set = GeneratorSet::new([10, 15, 150]).unwrap();
    let GeneratorGaps::Pair { q1, q2, certificates } = gaps_for_generators(&set, 10).map_err(|e| e.to_string())? else {
        return Err("not reduced to a pair".into());
    };
    ensure((q1, q2) == (10, 15), || format!("reduced to ({q1}, {q2})"))?;
    let budget = VerifyBudget::default();
    let limit = BigUint::from(10_000_000u64);
    let mut count = 0;
    for c in certificates.iter().filter(|c| c.right.value() <= limit) {
        ensure((c.p1, c.p2) == (10, 15), || "certificate of another pair".into())?;
        let v = verify_interval(&set, &c.left, &c.right, &budget);
        ensure(v == Verification::Verified, || format!("({}, {}) gave {v:?}", c.left, c.right))?;
        count += 1;
    }
    ensure(count > 0, || "no certificate within 10^7".into())?;
    Ok(format!("{count} certificates of (10,15) verified against ⟨10,15,150⟩"))
}

fn width_floor_exact(c: &GapCertificate) -> bool {
    let (l, r, f) = (c.left.value(), c.right.value(), c.width_floor.value());
    r > l && r - l >= f
}

fn c12_width_floor() -> Result<String, String> {
    let mut certs = certificates_from_record(&two_three().0, true).map_err(|e| e.to_string())?;
    certs.extend(gap_certificates(2, 3, 12, false).map_err(|e| e.to_string())?);
    certs.extend(gap_certificates(10, 15, 10, false).map_err(|e| e.to_string())?);
    for &(p1, p2) in random_irrational_pairs() {
        certs.extend(gap_certificates(p1, p2, 6, false).map_err(|e| e.to_string())?);
    }
    let mut by_exponent = 0;
    for c in &certs {
        ensure(c.check_width_floor(), || format!("({}, {}) fails the floor check", c.left, c.right))?;
        if c.right.checked_value::<u128>().is_none() {
            by_exponent += 1;
            let ord = cmp_power(c.p1, c.x2_j as i64, c.p2, c.k_j as i64);
            ensure(ord == Ordering::Greater, || format!("({}, {}) exponent comparison", c.left, c.right))?;
        }
        ensure(width_floor_exact(c), || format!("({}, {}) narrower than {}", c.left, c.right, c.width_floor))?;
        ensure(c.status == Status::Unverified, || "fresh certificate has a status".into())?;
    }
    Ok(format!("{} certificates, {} beyond 128 bits checked by exponent comparison", certs.len(), by_exponent))
}

fn main() {
    let checks: [(&str, Check); 12] = [
        ("k-sequence", c1_k_sequence),
        ("x2-sequence", c2_x2_sequence),
        ("gap table", c3_gap_table),
        ("approximate-inverse crosscheck", c4_approx_inverse),
        ("oracle verification", c5_oracle_verification),
        ("approximate-inverse properties", c6_approx_inverse_properties),
        ("stabilization properties", c7_stabilization_properties),
        ("three-prime minima", c8_lemma235),
        ("classification", c9_classification),
        ("appendix constructor", c10_appendix),
        ("reduction pipeline", c11_reduction),
        ("width floor", c12_width_floor),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
