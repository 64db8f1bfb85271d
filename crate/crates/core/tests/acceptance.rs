//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use sierpinski_weyl::catalog::{Catalog, EigenLabel};
use sierpinski_weyl::decimation::{phi, psi, Generator, Sign};
use sierpinski_weyl::graph::CLOSURE_TOL;
use sierpinski_weyl::verify::{self, Suite, SuiteReport, VerifyConfig};
use sierpinski_weyl::weyl::{base_intervals, PROBES};

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_report(r: &SuiteReport, keep: impl Fn(&str) -> bool) -> Outcome {
    let checks: Vec<_> = r.checks.iter().filter(|c| keep(&c.name)).collect();
    let bad: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
    let mut detail = format!("{}/{} checks", checks.len() - bad.len(), checks.len());
    if let Some(c) = bad.first() {
        detail.push_str(&format!(
            "; first failure {} at {}: expected {}, got {}",
            c.name, c.inputs, c.expected, c.actual
        ));
    }
    Outcome {
        passed: bad.is_empty() && !checks.is_empty(),
        detail,
    }
}

/// `N~(t)` by summing multiplicities of listed lines, without the
/// catalog's own counting routine.
fn recount(catalog: &Catalog, t: f64, cycles: usize) -> u64 {
    let lines = catalog.spectrum(cycles).unwrap();
    assert!(
        lines.last().unwrap().value > t * (1.0 + 1e-9),
        "listing too short for t = {t}"
    );
    lines
        .iter()
        .filter(|l| l.value <= t * (1.0 + 1e-12))
        .map(|l| l.mult_tilde)
        .sum()
}

fn counting_anchors(catalog: &Catalog) -> Outcome {
    let lambda = |power| {
        catalog
            .eigenvalue(EigenLabel {
                generator: Generator::Three,
                rank: 1,
                power,
            })
            .unwrap()
    };
    let mut cases = vec![(2u32, 27u64), (3, 81)];
    cases.extend((0..=4).map(|j| (j + 2, 3u64.pow(j + 3))));
    let mut failures = Vec::new();
    for &(power, want) in &cases {
        let t = lambda(power);
        let got = catalog.count(t).unwrap().n_tilde;
        let listed = recount(catalog, t, 64);
        if got != want || listed != want {
            failures.push(format!(
                "5^{power}: count {got}, listing {listed}, want {want}"
            ));
        }
    }
    Outcome {
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            format!(
                "{} anchors exact, cross-checked against the listing",
                cases.len()
            )
        } else {
            failures.join("; ")
        },
    }
}

fn numeric_identities() -> Outcome {
    let tol = 1e-10;
    let mut worst_conj = 0.0f64;
    let mut worst_psi = 0.0f64;
    let points = verify::sample_points(0.0, 6.25, 1000);
    for &t in &points {
        for sign in [Sign::Minus, Sign::Plus] {
            let y = phi(sign, t).unwrap();
            let err = (y * (5.0 - y) - t).abs() / t.max(f64::MIN_POSITIVE);
            worst_conj = worst_conj.max(err);
        }
    }
    for x in verify::sample_points(0.0, 5.0, 1000) {
        let rhs = psi(x).unwrap();
        let lhs = 5.0 * psi(phi(Sign::Minus, x).unwrap()).unwrap();
        let err = if rhs == 0.0 {
            lhs.abs()
        } else {
            (lhs - rhs).abs() / rhs.abs()
        };
        worst_psi = worst_psi.max(err);
    }
    Outcome {
        passed: worst_conj <= tol && worst_psi <= tol,
        detail: format!(
            "1000 points each; max relative error conjugacy {worst_conj:.2e}, psi scaling {worst_psi:.2e}"
        ),
    }
}

fn g1_values(catalog: &Catalog) -> Outcome {
    let mut seen = Vec::new();
    for ell in 1..=32 {
        let (a, a_prime) = base_intervals(catalog, ell).unwrap();
        for iv in [a, a_prime] {
            for n in -3..=3 {
                let iv = iv.scaled(n);
                for &f in &PROBES {
                    let t = iv.probe(f) * 5f64.powi(iv.m0 as i32);
                    let c = catalog.count(t).unwrap();
                    let g1 = (c.n_neumann as f64 - c.n_dirichlet as f64) / 2.0;
                    if !seen.contains(&g1) {
                        seen.push(g1);
                    }
                }
            }
        }
    }
    seen.sort_by(f64::total_cmp);
    Outcome {
        passed: seen == [0.0, 1.5],
        detail: format!("(N_N - N_D)/2 at 5^m0 times each interior probe takes {seen:?}"),
    }
}

fn both(a: Outcome, b: Outcome) -> Outcome {
    Outcome {
        passed: a.passed && b.passed,
        detail: format!("{}; {}", a.detail, b.detail),
    }
}

fn main() -> ExitCode {
    let catalog = Catalog::default();
    let config = VerifyConfig {
        samples: 1000,
        n_max: 64,
        j_max: 6,
        k_max: 64,
        l_max: 32,
        scale: 3,
        m_max: 6,
        julia_depth: 30,
        exhaustion_depth: 20,
        exhaustion_tol: 1e-10,
        oracle_level: 5,
        oracle_tol: 1e-5,
        ..VerifyConfig::default()
    };
    let suite = |s| verify::run(s, &config, &catalog).unwrap();

    type Criterion<'a> = (&'a str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("counting anchors", Box::new(|| counting_anchors(&catalog))),
        (
            "lemma n <= 64, j <= 6",
            Box::new(|| from_report(&suite(Suite::Lemma), |_| true)),
        ),
        (
            "exact counts on A_l, A'_l for l <= 32, n in -3..3, m <= 6",
            Box::new(|| {
                both(
                    from_report(&suite(Suite::Theorem), |_| true),
                    g1_values(&catalog),
                )
            }),
        ),
        (
            "table consistency k <= 64",
            Box::new(|| from_report(&suite(Suite::Table), |_| true)),
        ),
        (
            "cover measure bound m <= 30, exhaustion m <= 20 at 1e-10",
            Box::new(|| {
                from_report(&suite(Suite::Julia), |n| {
                    matches!(n, "measure-bound" | "exhaustion")
                })
            }),
        ),
        (
            "graph oracle levels 2..5",
            Box::new(|| {
                assert_eq!(CLOSURE_TOL, 1e-7);
                from_report(&suite(Suite::Oracle), |_| true)
            }),
        ),
        (
            "conjugacy and psi scaling at 1e-10 over 1000 points",
            Box::new(|| {
                both(
                    numeric_identities(),
                    from_report(&suite(Suite::Identities), |_| true),
                )
            }),
        ),
    ];

    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        all &= outcome.passed;
        println!(
            "{} criterion {}: {name} ({:.1}s) {}",
            if outcome.passed { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64(),
            outcome.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
