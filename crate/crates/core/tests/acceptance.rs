//! Acceptance criteria 1–7. Each test prints one `criterion k: PASS|FAIL`
//! line; run with `--nocapture` to see them.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;

use recon_core::audit::verify_propositions;
use recon_core::bounds::{
    ad_upper_bound, as_bounds, central_binomial, central_binomial_bounds,
    estimate_inequality_holds, fractional_transversal_weight, run_distribution, run_histogram,
    Space,
};
use recon_core::channels::{ball, read_coverage, Channel};
use recon_core::confusability::{type_a_confusable, type_b_confusable, ConfusabilityKind};
use recon_core::constructions::{
    best_residue, blt, bvt, ceil_log2, periodicity_set, residue_class_sizes, Code, Family,
};
use recon_core::exec::Exec;
use recon_core::tables::{offset_spread, redundancy_table};
use recon_core::verifier::{certify, exact_max_code, subsets, Decoder};
use recon_core::words::{Word, DEFAULT_ENUMERATION_BUDGET};

/// Relative agreement required between the two transversal-weight methods.
const DUAL_METHOD_TOLERANCE: f64 = 1e-9;
/// Golden suite wall-clock limit.
const GOLDEN_LIMIT: Duration = Duration::from_secs(1);
/// Audit wall-clock limit for n = 12.
const AUDIT_12_LIMIT: Duration = Duration::from_secs(600);
/// Exact extremal search at n = 8.
const EXTREMAL_8_LIMIT: Duration = Duration::from_secs(60);

const BUDGET: u128 = DEFAULT_ENUMERATION_BUDGET;

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn strings(words: &[Word]) -> Vec<String> {
    words.iter().map(Word::to_string).collect()
}

fn sorted(mut v: Vec<&str>) -> Vec<String> {
    v.sort();
    v.into_iter().map(String::from).collect()
}

fn report(k: u32, failures: &[String], detail: &str) {
    if failures.is_empty() {
        println!("criterion {k}: PASS ({detail})");
    } else {
        println!("criterion {k}: FAIL ({detail}); {}", failures.join("; "));
    }
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl Into<String>) {
    if !ok {
        failures.push(what.into());
    }
}

fn big(v: usize) -> BigUint {
    BigUint::from(v)
}

#[test]
fn criterion_1_golden_examples() {
    let start = Instant::now();
    let mut f = Vec::new();
    let x = w("1010");
    check(
        &mut f,
        strings(ball(Channel::S, &x).unwrap().members())
            == sorted(vec!["1010", "0010", "1110", "1000", "1011"]),
        "B^S(1010)",
    );
    check(
        &mut f,
        strings(ball(Channel::D, &x).unwrap().members())
            == sorted(vec!["010", "110", "100", "101"]),
        "B^D(1010)",
    );
    check(
        &mut f,
        strings(ball(Channel::I, &x).unwrap().members())
            == sorted(vec!["01010", "11010", "10010", "10110", "10100", "10101"]),
        "B^I(1010)",
    );
    let r = periodicity_set(6, 1, 2).unwrap();
    let listed = sorted(vec![
        "110100", "110010", "101100", "101010", "101001", "100110", "100101", "011010", "011001",
        "010110", "010101", "010011", "001101", "001011",
    ]);
    check(&mut f, strings(r.words()) == listed, "R2b(6,1,2)");
    check(&mut f, w("1010110").inversion_number() == 7, "Inv(1010110)");

    let a = type_a_confusable(&w("11101000"), &w("11010100")).unwrap();
    check(
        &mut f,
        a.is_some_and(|a| {
            a.kind == ConfusabilityKind::TypeA && a.m == 2 && a.u() == "11" && a.v() == "00"
        }),
        "Type-A example",
    );
    let b = type_b_confusable(&w("111000"), &w("101100")).unwrap().unwrap();
    check(
        &mut f,
        b.kind == ConfusabilityKind::TypeB && b.m == 2 && b.u() == "1",
        "Type-B example kind/m/u",
    );
    // The stated suffix v = 0 cannot be met: |u| + |c| + |v| = 6 with
    // |c| = m + 1 = 3 and |u| = 1 forces v = 00.
    let literal_b = b.v() == "0";
    let elapsed = start.elapsed();
    check(&mut f, elapsed < GOLDEN_LIMIT, format!("runtime {elapsed:?}"));
    let hard_failures = f.clone();
    if !literal_b {
        f.push(format!(
            "Type-B example detected as u={}, c={}, c'={}, v={}; the stated v=0 is length-inconsistent",
            b.u(),
            b.c(),
            b.c_prime(),
            b.v()
        ));
    }
    report(1, &f, &format!("{elapsed:?}"));
    assert!(hard_failures.is_empty(), "{hard_failures:?}");
    assert_eq!(b.v(), "00");
}

fn audit(n: usize) -> (Vec<String>, Duration, String) {
    let start = Instant::now();
    let r = verify_propositions(n, BUDGET, Exec::default()).unwrap();
    let elapsed = start.elapsed();
    let failures = r
        .clauses
        .iter()
        .filter(|c| !c.passed())
        .map(|c| format!("n={n} {:?}: {} violations", c.clause, c.violations))
        .collect();
    let info = format!(
        "n={n}: {} pairs, {} residual |D∩|=1 pairs, {:?}",
        r.pairs, r.residual_deletion_one, elapsed
    );
    (failures, elapsed, info)
}

#[test]
fn criterion_2_proposition_equivalence() {
    let mut f = Vec::new();
    let mut infos = Vec::new();
    for n in [4, 6, 8, 10, 12] {
        let (fails, elapsed, info) = audit(n);
        f.extend(fails);
        if n == 12 {
            check(&mut f, elapsed < AUDIT_12_LIMIT, format!("n=12 took {elapsed:?}"));
        }
        infos.push(info);
    }
    report(2, &f, &infos.join("; "));
    assert!(f.is_empty(), "{f:?}");
}

#[test]
fn criterion_2_proposition_equivalence_n14() {
    let (f, _, info) = audit(14);
    report(2, &f, &info);
    assert!(f.is_empty(), "{f:?}");
}

#[test]
fn criterion_3_construction_certification() {
    let mut f = Vec::new();
    let mut codes = 0;
    for n in [6, 8, 10, 12] {
        for a in 0..=n {
            let c = bvt(n, a).unwrap();
            codes += 1;
            check(
                &mut f,
                read_coverage(Channel::D, c.words()).unwrap().nu == 0,
                format!("BVT_{a}({n}) D-balls intersect"),
            );
        }
        for a in 0..2 * n {
            let c = blt(n, a).unwrap();
            codes += 1;
            check(
                &mut f,
                read_coverage(Channel::Edit, c.words()).unwrap().nu == 0,
                format!("BLT_{a}({n}) EDIT-balls intersect"),
            );
        }
        let claims: [(Family, &[(Channel, usize)]); 4] = [
            (Family::C2, &[(Channel::D, 2), (Channel::I, 2), (Channel::DI, 4)]),
            (Family::D2, &[(Channel::SD, 3), (Channel::SI, 3)]),
            (Family::E2, &[(Channel::Edit, 3)]),
            (
                Family::Parity,
                &[(Channel::SD, 4), (Channel::SI, 4), (Channel::Edit, 5)],
            ),
        ];
        for (family, targets) in claims {
            let (_, code) = best_residue(family, n, None).unwrap();
            codes += 1;
            for &(ch, reads) in targets {
                let cert = certify(&code, ch, reads).unwrap();
                check(
                    &mut f,
                    cert.certified,
                    format!(
                        "{} n={n} not ({n},{reads};{ch}): nu={}",
                        family.name(),
                        cert.report.nu
                    ),
                );
            }
        }
    }
    report(3, &f, &format!("{codes} codes over n in {{6,8,10,12}}"));
    assert!(f.is_empty(), "{f:?}");
}

#[test]
fn criterion_4_size_bounds() {
    let mut f = Vec::new();
    for n in (2..=14).step_by(2) {
        let c = central_binomial(n);
        if n >= 4 {
            let best = residue_class_sizes(Family::Bvt, n, None, BUDGET, Exec::default())
                .unwrap()
                .into_iter()
                .max()
                .unwrap();
            check(&mut f, big(best) * big(n + 1) >= c, format!("BVT n={n}"));
        }
        let m = ceil_log2(n) + 1;
        let r = periodicity_set(n, 1, m).unwrap();
        check(&mut f, big(r.len()) * 2u32 >= c, format!("R2b(n={n},1,{m})"));
        if n >= 4 {
            for space in [Space::Balanced, Space::NearBalanced] {
                check(
                    &mut f,
                    run_distribution(n, space).unwrap() == run_histogram(n, space, BUDGET).unwrap(),
                    format!("run distribution n={n} {space:?}"),
                );
            }
            let t = fractional_transversal_weight(n, BUDGET).unwrap();
            let rel = ((&t.by_enumeration - &t.by_formula) / &t.by_formula)
                .to_f64()
                .unwrap()
                .abs();
            check(&mut f, rel <= DUAL_METHOD_TOLERANCE, format!("dual methods n={n}"));
            check(
                &mut f,
                t.by_formula <= ad_upper_bound(n).unwrap(),
                format!("transversal weight n={n}"),
            );
        }
    }
    for n in (4..=100).step_by(2) {
        check(&mut f, estimate_inequality_holds(n).unwrap(), format!("inequality n={n}"));
    }
    for n in (4..=60).step_by(2) {
        check(
            &mut f,
            central_binomial_bounds(n).unwrap().strict,
            format!("sandwich n={n}"),
        );
    }
    report(4, &f, "exact arithmetic, n <= 14 / 60 / 100");
    assert!(f.is_empty(), "{f:?}");
}

#[test]
fn criterion_5_extremal_sandwich() {
    let mut f = Vec::new();
    let mut sizes = Vec::new();
    for n in [4, 6, 8] {
        let start = Instant::now();
        let d = exact_max_code(n, Channel::D, 1, None).unwrap();
        let elapsed = start.elapsed();
        let bvt_max = residue_class_sizes(Family::Bvt, n, None, BUDGET, Exec::default())
            .unwrap()
            .into_iter()
            .max()
            .unwrap();
        let upper = ad_upper_bound(n).unwrap().floor().to_integer();
        check(
            &mut f,
            bvt_max <= d.size && BigInt::from(d.size) <= upper,
            format!("A^D({n}) = {} outside [{bvt_max}, {upper}]", d.size),
        );
        check(
            &mut f,
            certify(&d.code, Channel::D, 1).unwrap().certified,
            format!("A^D({n}) witness"),
        );
        if n == 8 {
            check(&mut f, elapsed < EXTREMAL_8_LIMIT, format!("n=8 took {elapsed:?}"));
        }
        let s = exact_max_code(n, Channel::S, 1, None).unwrap();
        let (lo, hi) = as_bounds(n).unwrap();
        let size = BigRational::from_integer(BigInt::from(s.size));
        check(
            &mut f,
            lo <= size && size <= hi,
            format!("A^S({n}) = {} outside [{lo}, {hi}]", s.size),
        );
        sizes.push(format!("n={n}: A^D={} A^S={} ({elapsed:?})", d.size, s.size));
    }
    report(5, &f, &sizes.join(", "));
    assert!(f.is_empty(), "{f:?}");
}

fn decoder_instances(n: usize) -> Vec<(String, Code, Channel, usize)> {
    let mut out = Vec::new();
    let best = |family| best_residue(family, n, None).unwrap().1;
    out.push(("bvt".into(), best(Family::Bvt), Channel::D, 1));
    for reads in [1, 2] {
        out.push(("blt".into(), best(Family::Blt), Channel::Edit, reads));
    }
    let c2 = best(Family::C2);
    for (ch, reads) in [(Channel::D, 2), (Channel::I, 2), (Channel::DI, 4)] {
        out.push(("c2".into(), c2.clone(), ch, reads));
    }
    let d2 = best(Family::D2);
    for ch in [Channel::SD, Channel::SI] {
        out.push(("d2".into(), d2.clone(), ch, 3));
    }
    out.push(("e2".into(), best(Family::E2), Channel::Edit, 3));
    let parity = best(Family::Parity);
    for (ch, reads) in [(Channel::SD, 4), (Channel::SI, 4), (Channel::Edit, 5)] {
        out.push(("parity".into(), parity.clone(), ch, reads));
    }
    out
}

#[test]
fn criterion_6_decoder_soundness() {
    let start = Instant::now();
    let mut f = Vec::new();
    let mut decodes = 0u64;
    for n in [6, 8, 10] {
        for (name, code, ch, reads) in decoder_instances(n) {
            if !certify(&code, ch, reads).unwrap().certified {
                f.push(format!("{name} n={n} ({ch},{reads}) not certified"));
                continue;
            }
            let decoder = Decoder::new(&code, ch);
            let per_word = Exec::default().map(code.words(), |x| {
                let ball = ball(ch, x).unwrap().into_members();
                let mut bad = Vec::new();
                let mut count = 0u64;
                for subset in subsets(&ball, reads) {
                    count += 1;
                    let fast = decoder.decode(&subset, reads);
                    let slow = decoder.decode_full_scan(&subset, reads);
                    if fast.as_ref() != Ok(x) || fast != slow {
                        bad.push(format!("{name} n={n} ({ch},{reads}) x={x} reads={subset:?}"));
                    }
                }
                (count, bad)
            });
            for (count, bad) in per_word {
                decodes += count;
                f.extend(bad.into_iter().take(3));
            }
        }
    }
    report(
        6,
        &f,
        &format!("{decodes} read sets decoded in {:?}", start.elapsed()),
    );
    assert!(f.is_empty(), "{:?}", &f[..f.len().min(10)]);
}

#[test]
fn criterion_7_redundancy_tables() {
    let ns = [8, 10, 12, 14];
    let mut f = Vec::new();
    let mut windows = Vec::new();
    for (ch, reads) in [
        (Channel::D, 2),
        (Channel::SD, 3),
        (Channel::Edit, 3),
        (Channel::Edit, 5),
        (Channel::SD, 4),
    ] {
        let rows = redundancy_table(ch, &ns, reads, BUDGET, Exec::default()).unwrap();
        for r in &rows {
            check(
                &mut f,
                r.certified,
                format!("({ch},{reads}) n={} code not certified", r.n),
            );
            check(&mut f, r.offset.0.is_finite(), format!("({ch},{reads}) n={} offset", r.n));
        }
        let (lo, hi) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r.offset.0), hi.max(r.offset.0))
        });
        windows.push(format!(
            "({ch},{reads}) offset in [{lo:.4}, {hi:.4}] spread {:.4}",
            offset_spread(&rows)
        ));
    }
    for (ch, reads) in [
        (Channel::S, 3),
        (Channel::D, 3),
        (Channel::I, 3),
        (Channel::DI, 5),
        (Channel::SD, 5),
        (Channel::SI, 5),
        (Channel::Edit, 7),
    ] {
        for r in redundancy_table(ch, &ns, reads, BUDGET, Exec::default()).unwrap() {
            check(
                &mut f,
                r.certified && r.redundancy == r.delta && r.normalized.0 == 0.0,
                format!("({ch},{reads}) n={} redundancy {} != delta {}", r.n, r.redundancy.0, r.delta.0),
            );
        }
    }
    report(7, &f, &windows.join("; "));
    assert!(f.is_empty(), "{f:?}");
}
