//! Acceptance suite: one test per criterion, each printing a PASS line.
//! Criteria 1 and 3 drive the installed binary; the rest go through the
//! library so failures point at the exact prime and entry.

use fqsums_core::hsums::{eval_naive, eval_sum, PrefixTables, SumSpec, SumVariant};
use fqsums_core::identities::{Catalog, PrimeEvaluator, Status};
use fqsums_core::modmath::{self, inv_mod, mul_mod, ModContext};
use fqsums_core::quotients;
use fqsums_core::scanner;
use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fqsums"))
}

#[test]
fn criterion_1_catalog_soundness_over_full_range() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("verify.csv");
    let started = Instant::now();
    let result = binary()
        .args([
            "verify", "--min", "5", "--max", "10000", "--jobs", "4", "--format", "csv", "--out",
        ])
        .arg(&out)
        .output()
        .expect("running fqsums verify");
    let elapsed = started.elapsed();
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(
        result.status.success(),
        "verify exited {:?}: {stderr}",
        result.status.code()
    );
    assert!(
        stderr.contains("fail 0"),
        "summary reports failures: {stderr}"
    );
    let body = std::fs::read_to_string(&out).unwrap();
    let ok = body.lines().filter(|l| l.contains(",ok,")).count();
    let fail = body.lines().filter(|l| l.contains(",fail,")).count();
    assert_eq!(fail, 0, "failing records in the report");
    assert!(ok > 50_000, "only {ok} verified records");
    assert!(
        elapsed.as_secs() < 300,
        "sweep took {elapsed:?}, budget is five minutes"
    );
    println!(
        "ACCEPTANCE 1 (catalog soundness, p in [5, 10000]): PASS \
         ({ok} ok records, 0 failures, {elapsed:?})"
    );
}

#[test]
fn criterion_2_mod_p3_entries_to_2000() {
    let catalog = Catalog::standard();
    let m3a = catalog.concrete().iter().find(|i| i.id == "M3a").unwrap();
    let m3b = catalog.concrete().iter().find(|i| i.id == "M3b").unwrap();
    let mut checked = 0u64;
    for p in modmath::primes_in(5, 2000) {
        let mut evaluator = PrimeEvaluator::new(p);
        for ident in [m3a, m3b] {
            let record = evaluator.evaluate(ident);
            assert_eq!(
                record.status,
                Status::Ok,
                "{} at p={p}: residual {}",
                ident.id,
                record.residual
            );
        }
        checked += 1;
    }
    assert_eq!(checked, 301, "primes in [5, 2000]");
    println!("ACCEPTANCE 2 (mod-p^3 entries, p in [5, 2000]): PASS ({checked} primes)");
}

#[test]
fn criterion_3_wieferich_reproduction_to_ten_million() {
    let started = Instant::now();
    let result = binary()
        .args([
            "wieferich",
            "--max",
            "10000000",
            "--base",
            "2",
            "--jobs",
            "4",
        ])
        .output()
        .expect("running fqsums wieferich");
    let elapsed = started.elapsed();
    assert!(result.status.success());
    let stdout = String::from_utf8_lossy(&result.stdout);
    let primes: Vec<&str> = stdout.split_whitespace().collect();
    assert_eq!(primes, ["1093", "3511"], "got {stdout:?}");
    println!("ACCEPTANCE 3 (wieferich --max 10000000): PASS ({elapsed:?})");
}

#[test]
fn criterion_4_consistent_vanishing_is_the_table_closure() {
    let star = [SumVariant::Alternating];
    let catalog = Catalog::standard();
    let mut want: BTreeSet<(SumVariant, u32, u32)> = BTreeSet::new();
    for (k, n, _) in catalog.q2_table_rows() {
        want.insert((SumVariant::Alternating, k, n));
        want.insert((SumVariant::Alternating, n - 1 - k, n));
    }
    assert_eq!(want.len(), 10);

    let at_46 = scanner::consistent_vanishing(&[1093, 3511], 46, &star).unwrap();
    assert_eq!(at_46, want, "N <= 46 intersection");

    // raising the cap to floor(p/3) (the smaller prime's) adds nothing
    let cap = 1093 / 3;
    let at_p3 = scanner::consistent_vanishing(&[1093, 3511], cap as u32, &star).unwrap();
    assert_eq!(at_p3, want, "N <= {cap} intersection");

    // catalog-predicted zeros stay a subset when scanning both variants
    let both = scanner::consistent_vanishing(
        &[1093, 3511],
        46,
        &[SumVariant::Plain, SumVariant::Alternating],
    )
    .unwrap();
    for pair in &want {
        assert!(
            both.contains(pair),
            "{pair:?} missing from two-variant scan"
        );
    }
    for (k, n) in [(0u32, 1u32), (0, 2), (1, 2), (1, 4), (2, 4)] {
        assert!(
            both.contains(&(SumVariant::Plain, k, n)),
            "plain q_2 window ({k},{n}) missing"
        );
    }
    println!(
        "ACCEPTANCE 4 (consistent vanishing at 1093 & 3511 = table closure, \
         stable to N <= {cap}): PASS"
    );
}

#[test]
fn criterion_5_three_term_audit_to_200() {
    let report = scanner::three_term_audit(200);
    assert!(
        report.counterexamples.is_empty(),
        "short vanishing windows: {:?}",
        report.counterexamples
    );
    assert!(report.windows_checked > 500_000);
    println!(
        "ACCEPTANCE 5 (three-term audit, p <= 200, N <= p): PASS \
         ({} windows, {} structural centered zeros)",
        report.windows_checked, report.structural_zeros
    );
}

#[test]
fn criterion_6_oracle_equivalence_exhaustive() {
    let mut checked = 0u64;
    for p in modmath::primes_in(5, 500) {
        let tables = PrefixTables::build(p);
        for n in 1..=50u32 {
            for k in 0..n {
                for variant in SumVariant::ALL {
                    let spec = SumSpec::new(variant, k, n).unwrap();
                    let fast = eval_sum(&spec, &tables);
                    let slow = eval_naive(&spec, p);
                    assert_eq!(fast, slow, "{spec} at p={p}");
                    checked += 1;
                }
            }
        }
    }
    println!("ACCEPTANCE 6 (prefix tables = naive oracle): PASS ({checked} evaluations)");
}

#[test]
fn criterion_7_quotient_formulas_to_ten_thousand() {
    let catalog = Catalog::standard();
    let w5 = catalog.concrete().iter().find(|i| i.id == "W5").unwrap();
    let l5 = catalog.concrete().iter().find(|i| i.id == "L5").unwrap();
    let mut checked = 0u64;
    for p in modmath::primes_in(7, 10_000) {
        if p == 5 {
            continue;
        }
        let mut evaluator = PrimeEvaluator::new(p);
        for ident in [w5, l5] {
            let record = evaluator.evaluate(ident);
            assert_eq!(
                record.status,
                Status::Ok,
                "{} at p={p}: residual {}",
                ident.id,
                record.residual
            );
        }
        checked += 1;
    }
    assert_eq!(checked, 1226, "primes in [7, 10000]");
    println!("ACCEPTANCE 7 (Fibonacci- and Lucas-quotient forms): PASS ({checked} primes)");
}

#[test]
fn criterion_8_property_suites() {
    let primes = modmath::primes_in(5, 500);
    let windows: Vec<(u32, u32)> = vec![
        (0, 1),
        (0, 2),
        (1, 3),
        (1, 4),
        (2, 5),
        (3, 7),
        (4, 9),
        (5, 12),
        (7, 15),
        (11, 23),
    ];

    // mirror rules
    let mut mirrors = 0u64;
    for &p in &primes {
        let t = PrefixTables::build(p);
        for &(k, n) in &windows {
            if u64::from(n) % p == 0 {
                continue;
            }
            let plain = |k, n| eval_sum(&SumSpec::new(SumVariant::Plain, k, n).unwrap(), &t);
            let star = |k, n| eval_sum(&SumSpec::new(SumVariant::Alternating, k, n).unwrap(), &t);
            assert!(
                (plain(k, n) + plain(n - 1 - k, n)).is_zero(),
                "p={p} ({k},{n})"
            );
            assert_eq!(star(k, n), star(n - 1 - k, n), "p={p} ({k},{n})");
            mirrors += 1;
        }
    }
    assert!(mirrors >= 100);

    // decomposition and halving rules
    let mut decompositions = 0u64;
    for &p in &primes {
        let t = PrefixTables::build(p);
        let half = ModContext::new(p, 1)
            .unwrap()
            .residue(inv_mod(2, p).unwrap());
        for &(k, n) in &windows {
            let get = |v, k, n| eval_sum(&SumSpec::new(v, k, n).unwrap(), &t);
            let s = get(SumVariant::Plain, k, n);
            let st = get(SumVariant::Alternating, k, n);
            let so = get(SumVariant::OddTerms, k, n);
            let se = get(SumVariant::EvenTerms, k, n);
            assert_eq!(so + se, s);
            assert_eq!(se - so, st);
            assert_eq!(s - so - so, st);
            assert_eq!(se + se - s, st);
            assert_eq!(se, get(SumVariant::Plain, k, 2 * n) * half, "halving p={p}");
            decompositions += 1;
        }
    }
    assert!(decompositions >= 100);

    // Fermat quotient precision coherence
    let mut coherent = 0u64;
    for p in modmath::primes_in(5, 300) {
        for e in 2..=3u32 {
            let hi = quotients::fermat_quotient(2, &ModContext::new(p, e).unwrap())
                .unwrap()
                .value();
            let lo = quotients::fermat_quotient(2, &ModContext::new(p, e - 1).unwrap())
                .unwrap()
                .value();
            assert_eq!(hi % ModContext::new(p, e - 1).unwrap().modulus(), lo);
            coherent += 1;
        }
    }
    assert!(coherent >= 100);

    // Bernoulli residues against the exact rationals B_0..B_12
    let exact: [(i64, u64); 13] = [
        (1, 1),
        (-1, 2),
        (1, 6),
        (0, 1),
        (-1, 30),
        (0, 1),
        (1, 42),
        (0, 1),
        (-1, 30),
        (0, 1),
        (5, 66),
        (0, 1),
        (-691, 2730),
    ];
    let mut bernoulli = 0u64;
    for p in modmath::primes_in(5, 50) {
        for n in 0..=12u32 {
            if u64::from(n) + 1 >= p {
                continue;
            }
            let got = quotients::bernoulli_mod(n, p).unwrap().value();
            let (num, den) = exact[n as usize];
            let want = mul_mod(
                num.rem_euclid(p as i64) as u64,
                inv_mod(den % p, p).unwrap(),
                p,
            );
            assert_eq!(got, want, "B_{n} mod {p}");
            bernoulli += 1;
        }
    }
    assert!(bernoulli >= 100);

    println!(
        "ACCEPTANCE 8 (property suites): PASS \
         (mirrors {mirrors}, decompositions {decompositions}, \
         precision {coherent}, bernoulli {bernoulli})"
    );
}
