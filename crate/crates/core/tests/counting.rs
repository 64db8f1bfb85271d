use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sierpinski_weyl::weyl::{Locator, Membership};
use sierpinski_weyl::{alpha, Catalog};

fn log_uniform(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

#[test]
fn neumann_and_dirichlet_split_the_double_cover() {
    let catalog = Catalog::default();
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..1000 {
        let t = log_uniform(&mut rng, 1e-3, 1e7);
        let c = catalog.count(t).unwrap();
        assert_eq!(c.n_neumann + c.n_dirichlet, c.n_tilde, "t = {t}");
        let d = c.n_neumann as i64 - c.n_dirichlet as i64;
        assert!((0..=3).contains(&d), "N_N - N_D = {d} at t = {t}");
    }
}

#[test]
fn counts_jump_by_the_listed_multiplicity() {
    let catalog = Catalog::default();
    let lines = catalog.spectrum(40).unwrap();
    let mut before = (1, 0, 1);
    for (i, line) in lines.iter().enumerate().skip(1) {
        let below = catalog.count(line.value * (1.0 - 1e-7)).unwrap();
        let at = catalog.count(line.value).unwrap();
        assert!(at.at_eigenvalue && !below.at_eigenvalue, "line {i}");
        assert_eq!(
            (below.n_neumann, below.n_dirichlet, below.n_tilde),
            before,
            "count moved before line {i}"
        );
        assert_eq!(at.n_tilde, below.n_tilde + line.mult_tilde, "line {i}");
        assert_eq!(
            at.n_neumann,
            below.n_neumann + line.mult_neumann,
            "line {i}"
        );
        assert_eq!(
            at.n_dirichlet,
            below.n_dirichlet + line.mult_dirichlet,
            "line {i}"
        );
        // Halfway to the next line nothing changes.
        if let Some(next) = lines.get(i + 1) {
            let mid = catalog.count(0.5 * (line.value + next.value)).unwrap();
            assert_eq!(mid.n_tilde, at.n_tilde);
        }
        before = (at.n_neumann, at.n_dirichlet, at.n_tilde);
    }
}

/// Away from the exceptional set, `N~(5^m t) / (5^m t)^alpha` equals `2 G(t)`
/// once `m >= m0`, and `G` is invariant under `t -> 5t`.
#[test]
fn weyl_ratio_is_exactly_periodic_on_located_points() {
    let catalog = Catalog::default();
    let locator = Locator::with_default_depth(&catalog).unwrap();
    let mut rng = StdRng::seed_from_u64(11);
    let a = alpha();
    let mut located = 0;
    let (mut g_min, mut g_max) = (f64::INFINITY, 0.0f64);
    for _ in 0..1000 {
        let t = log_uniform(&mut rng, 1.0, 5f64.powi(6));
        let Membership::Located { interval } = locator.locate(t).unwrap() else {
            continue;
        };
        located += 1;
        let g = locator.g(t).unwrap();
        g_min = g_min.min(g);
        g_max = g_max.max(g);
        let g5 = locator.g(5.0 * t).unwrap();
        assert!(
            (g5 - g).abs() <= 1e-12 * g,
            "G(5t) = {g5}, G(t) = {g} at t = {t}"
        );
        assert_eq!(locator.g1(5.0 * t).unwrap(), locator.g1(t).unwrap());
        for m in interval.m0..interval.m0 + 3 {
            let s = t * 5f64.powi(m as i32);
            let c = catalog.count(s).unwrap();
            let ratio = c.n_tilde as f64 / s.powf(a);
            assert!((ratio - 2.0 * g).abs() <= 1e-11 * g, "m = {m}, t = {t}");
            let twice_g1 = c.n_neumann as f64 - c.n_dirichlet as f64;
            assert_eq!(twice_g1, 2.0 * interval.g1(), "m = {m}, t = {t}");
        }
    }
    assert!(located >= 950, "only {located} of 1000 points located");
    assert!(
        0.1 < g_min && g_max < 0.2,
        "G ranged over [{g_min}, {g_max}]"
    );
}

#[test]
fn weyl_ratio_stays_bounded_on_the_scan() {
    let catalog = Catalog::default();
    let locator = Locator::with_default_depth(&catalog).unwrap();
    let samples = locator
        .weyl_ratio_scan(&catalog, 20.0, 5f64.powi(6), 400)
        .unwrap();
    assert_eq!(samples.len(), 400);
    for s in &samples {
        assert!(
            (0.15..=0.5).contains(&s.weyl_ratio),
            "ratio {} at t = {}",
            s.weyl_ratio,
            s.t
        );
        assert!((s.ratio_neumann + s.ratio_dirichlet - s.weyl_ratio).abs() <= 1e-12);
    }
}

#[test]
fn unlocated_points_and_bad_input() {
    let catalog = Catalog::default();
    let locator = Locator::with_default_depth(&catalog).unwrap();
    let lambda = catalog.spectrum(1).unwrap()[3].value;
    // Eigenvalues are interval endpoints or lie in the exceptional set.
    assert!(locator.g(lambda).is_err());
    assert!(locator.locate(0.0).is_err());
    assert!(locator.locate(f64::NAN).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn count_is_monotone(a in 0.0f64..1e6, b in 0.0f64..1e6) {
        let catalog = Catalog::default();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let cl = catalog.count(lo).unwrap();
        let ch = catalog.count(hi).unwrap();
        prop_assert!(cl.n_tilde <= ch.n_tilde);
        prop_assert!(cl.n_neumann <= ch.n_neumann);
        prop_assert!(cl.n_dirichlet <= ch.n_dirichlet);
    }
}
