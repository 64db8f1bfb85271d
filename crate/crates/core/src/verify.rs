//! Verification suites: each runs a family of identities and records every
//! check with its inputs, so a failure names exactly what broke.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::catalog::{decompose, Catalog, DIFFERENCE_PROFILE, ROWS_PER_CYCLE};
use crate::decimation::{phi, psi, Generator, Sign};
use crate::error::{Error, Result};
use crate::graph::{self, ClosureReport};
use crate::julia;
use crate::weyl::{base_intervals, Locator, PROBES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Identities,
    Lemma,
    Theorem,
    Table,
    Julia,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Identities,
        Suite::Lemma,
        Suite::Theorem,
        Suite::Table,
        Suite::Julia,
        Suite::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Lemma => "lemma",
            Suite::Theorem => "theorem",
            Suite::Table => "table",
            Suite::Julia => "julia",
            Suite::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Identity sample points.
    pub samples: usize,
    /// Lemma: ranks `n <= n_max` and powers `j <= j_max`.
    pub n_max: u64,
    pub j_max: u32,
    /// Cycles covered by the table checks and the induction-step identities.
    pub k_max: u64,
    /// Theorem: intervals `l <= l_max`, scales `n in -scale..=scale`,
    /// powers up to `m_max`.
    pub l_max: usize,
    pub scale: i32,
    pub m_max: u32,
    /// Depth of the measure-decay run.
    pub julia_depth: u32,
    /// Depth of the exhaustion identity.
    pub exhaustion_depth: u32,
    pub exhaustion_tol: f64,
    /// Pairs checked against the gap intervals.
    pub correspondence_l_max: u64,
    pub correspondence_tol: f64,
    /// Highest graph level diagonalized.
    pub oracle_level: u32,
    pub oracle_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
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
            correspondence_l_max: 32,
            correspondence_tol: 1e-9,
            oracle_level: 5,
            oracle_tol: 1e-5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The identity being tested, written out.
    pub identity: String,
    pub inputs: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        Self {
            suite,
            checks: Vec::new(),
        }
    }

    fn push(
        &mut self,
        name: &str,
        identity: &str,
        inputs: String,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
        passed: bool,
    ) {
        self.checks.push(Check {
            name: name.into(),
            identity: identity.into(),
            inputs,
            expected: expected.to_string(),
            actual: actual.to_string(),
            passed,
        });
    }

    fn exact<T: PartialEq + fmt::Display>(
        &mut self,
        name: &str,
        identity: &str,
        inputs: String,
        expected: T,
        actual: T,
    ) {
        let ok = expected == actual;
        self.push(name, identity, inputs, expected, actual, ok);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Passed checks grouped by name, in first-seen order.
    pub fn tally(&self) -> Vec<(String, usize, usize)> {
        let mut out: Vec<(String, usize, usize)> = Vec::new();
        for c in &self.checks {
            match out.iter_mut().find(|(n, _, _)| *n == c.name) {
                Some(e) => {
                    e.1 += usize::from(c.passed);
                    e.2 += 1;
                }
                None => out.push((c.name.clone(), usize::from(c.passed), 1)),
            }
        }
        out
    }
}

pub fn run(suite: Suite, config: &VerifyConfig, catalog: &Catalog) -> Result<SuiteReport> {
    match suite {
        Suite::Identities => identities(config),
        Suite::Lemma => lemma(config, catalog),
        Suite::Theorem => theorem(config, catalog),
        Suite::Table => table(config, catalog),
        Suite::Julia => julia_suite(config, catalog),
        Suite::Oracle => oracle(config, catalog),
    }
}

pub fn run_all(config: &VerifyConfig, catalog: &Catalog) -> Result<Vec<SuiteReport>> {
    Suite::ALL
        .iter()
        .map(|&s| run(s, config, catalog))
        .collect()
}

/// `count` evenly spread, irrational-step points in `[lo, hi]`.
pub fn sample_points(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let step = (5f64.sqrt() - 1.0) / 2.0;
    (0..count)
        .map(|i| lo + (hi - lo) * ((i as f64 + 0.5) * step).fract())
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

pub fn identities(config: &VerifyConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Identities);
    let tol = 1e-10;
    for t in sample_points(0.0, 6.25, config.samples) {
        for sign in [Sign::Minus, Sign::Plus] {
            let y = phi(sign, t)?;
            let back = y * (5.0 - y);
            let err = if t == 0.0 { back.abs() } else { rel(back, t) };
            r.push(
                "conjugacy",
                "phi(t) (5 - phi(t)) = t",
                format!("sign = {}, t = {t:e}", sign.as_char()),
                format!("{t:e}"),
                format!("{back:e}"),
                err <= tol,
            );
        }
    }
    for x in sample_points(0.0, 5.0, config.samples) {
        let lhs = 5.0 * psi(phi(Sign::Minus, x)?)?;
        let rhs = psi(x)?;
        r.push(
            "psi-scaling",
            "5 psi(phi_minus(x)) = psi(x)",
            format!("x = {x:e}"),
            format!("{rhs:e}"),
            format!("{lhs:e}"),
            rel(lhs, rhs) <= tol,
        );
    }
    Ok(r)
}

fn n_tilde_at(catalog: &Catalog, power: u32, rank: u64) -> Result<u64> {
    let v = 5f64.powi(power as i32) * catalog.primitive(Generator::Three, rank)?;
    Ok(catalog.count(v)?.n_tilde)
}

pub fn lemma(config: &VerifyConfig, catalog: &Catalog) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Lemma);
    r.exact(
        "anchor",
        "N~(5^2 lambda3_1) = 27",
        "".into(),
        27,
        n_tilde_at(catalog, 2, 1)?,
    );
    r.exact(
        "anchor",
        "N~(5^3 lambda3_1) = 81",
        "".into(),
        81,
        n_tilde_at(catalog, 3, 1)?,
    );
    for j in 0..=4u32 {
        r.exact(
            "anchor",
            "N~(5^(j+2) lambda3_1) = 3^(j+3)",
            format!("j = {j}"),
            3u64.pow(j + 3),
            n_tilde_at(catalog, j + 2, 1)?,
        );
    }
    for n in 1..=config.n_max {
        let base = n_tilde_at(catalog, 2, n)?;
        for j in 0..=config.j_max {
            r.exact(
                "lemma",
                "N~(5^(j+2) lambda3_n) = 3^j N~(5^2 lambda3_n)",
                format!("n = {n}, j = {j}"),
                3u64.pow(j) * base,
                n_tilde_at(catalog, j + 2, n)?,
            );
        }
    }
    // Induction steps: cycle k against cycle k - 1.
    for k in 2..=config.k_max {
        let d = decompose(k)?;
        let prev = decompose(k - 1)?;
        if d.j == 0 {
            let (l, lp, jp) = (d.ell, prev.ell, prev.j);
            let rhs = n_tilde_at(catalog, 2, l)? - n_tilde_at(catalog, jp + 2, lp)?;
            r.exact(
                "induction-odd",
                "N~(5^2 lambda3_l) - N~(5^(j'+2) lambda3_l') = 3^(j'+1) + 27",
                format!("k = {k}, l = {l}, l' = {lp}, j' = {jp}"),
                3u64.pow(jp + 1) + 27,
                rhs,
            );
            let lhs = n_tilde_at(catalog, 3, l)? - n_tilde_at(catalog, jp + 3, lp)?;
            r.exact(
                "induction-odd",
                "N~(5^3 lambda3_l) - N~(5^(j'+3) lambda3_l') = 3^(j'+2) + 81",
                format!("k = {k}, l = {l}, l' = {lp}, j' = {jp}"),
                3u64.pow(jp + 2) + 81,
                lhs,
            );
        } else {
            let (l, j, lp) = (d.ell, d.j, prev.ell);
            let rhs = n_tilde_at(catalog, j + 2, l)? - n_tilde_at(catalog, 2, lp)?;
            r.exact(
                "induction-even",
                "N~(5^(j+2) lambda3_l) - N~(5^2 lambda3_l') = 18 + 3^(j+1) + 3^(j+2)",
                format!("k = {k}, l = {l}, l' = {lp}, j = {j}"),
                18 + 3u64.pow(j + 1) + 3u64.pow(j + 2),
                rhs,
            );
            let lhs = n_tilde_at(catalog, j + 3, l)? - n_tilde_at(catalog, 3, lp)?;
            r.exact(
                "induction-even",
                "N~(5^(j+3) lambda3_l) - N~(5^3 lambda3_l') = 3 (18 + 3^(j+1) + 3^(j+2))",
                format!("k = {k}, l = {l}, l' = {lp}, j = {j}"),
                3 * rhs,
                lhs,
            );
        }
    }
    Ok(r)
}

pub fn theorem(config: &VerifyConfig, catalog: &Catalog) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Theorem);
    let locator = Locator::new(catalog, config.l_max)?;
    for ell in 1..=config.l_max {
        let (a, a_prime) = base_intervals(catalog, ell)?;
        let below = catalog.count(a.probe(PROBES[0]))?.n_tilde;
        let above = catalog.count(a_prime.probe(PROBES[2]))?.n_tilde;
        r.exact(
            "middle-jump",
            "N~(A'_l probe) - N~(A_l probe) = 9",
            format!("l = {ell}"),
            9,
            above - below,
        );
        for base in [a, a_prime] {
            for n in -config.scale..=config.scale {
                let iv = base.scaled(n);
                for &f in &PROBES {
                    let t = iv.probe(f);
                    let inputs = format!("{} l = {ell}, n = {n}, t = {t:e}", base.kind);
                    let report = match locator.verify_theorem(catalog, t, config.m_max.max(iv.m0)) {
                        Ok(rep) => rep,
                        Err(e) => {
                            r.push("exact-count", "t is located", inputs, "located", e, false);
                            continue;
                        }
                    };
                    r.exact(
                        "location",
                        "locate(t) = (kind, l, n)",
                        inputs.clone(),
                        format!("{} {ell} {n}", base.kind),
                        format!(
                            "{} {} {}",
                            report.interval.kind, report.interval.ell, report.interval.scale_n
                        ),
                    );
                    r.exact(
                        "m0",
                        "m0(t) = max(-n, 0)",
                        inputs.clone(),
                        n.min(0).unsigned_abs(),
                        report.interval.m0,
                    );
                    let g1 = locator.g1(t)?;
                    r.push(
                        "g1-values",
                        "G1 = 0 on A and 3/2 on A'",
                        inputs.clone(),
                        base.g1(),
                        g1,
                        g1 == base.g1() && (g1 == 0.0 || g1 == 1.5),
                    );
                    for row in &report.rows {
                        let inputs = format!("{inputs}, m = {}", row.m);
                        r.exact(
                            "exact-count",
                            "N~(5^m t) = 3^(m+n) g",
                            inputs.clone(),
                            row.expected_tilde,
                            row.n_tilde,
                        );
                        r.exact(
                            "exact-difference",
                            "N_N(5^m t) - N_D(5^m t) = 2 G1",
                            inputs.clone(),
                            row.expected_difference,
                            row.difference,
                        );
                        r.push(
                            "half-integer",
                            "2 N_N = 3^(m+n) g + 2 G1 and 2 N_D = 3^(m+n) g - 2 G1",
                            inputs,
                            "both",
                            format!("N_N = {}, N_D = {}", row.n_neumann, row.n_dirichlet),
                            row.passed,
                        );
                    }
                }
            }
        }
    }
    Ok(r)
}

pub fn table(config: &VerifyConfig, catalog: &Catalog) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Table);
    let first: Vec<u64> = catalog
        .cycle_rows(1)?
        .iter()
        .map(|l| l.mult_tilde)
        .collect();
    r.exact(
        "first-cycle",
        "M~ column of C_1 = 1,2,2,3,2,2,1,4,9,4",
        "k = 1".into(),
        format!("{:?}", [1, 2, 2, 3, 2, 2, 1, 4, 9, 4]),
        format!("{first:?}"),
    );
    let zero = catalog.totals_through(0, 1)?;
    r.exact(
        "zero",
        "(N_N, N_D, N~)(0) = (1, 0, 1)",
        "".into(),
        "(1, 0, 1)".to_string(),
        format!(
            "({}, {}, {})",
            zero.n_neumann, zero.n_dirichlet, zero.n_tilde
        ),
    );
    let mut prev_top = 0.0;
    for k in 1..=config.k_max {
        let d = decompose(k)?;
        let rows = catalog.cycle_rows(k)?;
        let inputs = format!("k = {k}, j = {}", d.j);
        let split_ok = rows
            .iter()
            .all(|l| l.mult_tilde == l.mult_neumann + l.mult_dirichlet);
        r.push(
            "split",
            "M~ = M_N + M_D on every row",
            inputs.clone(),
            true,
            split_ok,
            split_ok,
        );
        let profile = catalog.difference_profile(k)?;
        r.exact(
            "difference-profile",
            "N_N - N_D at the rows of C_k = 0,2,0,3,1,3,2,0,3,1",
            inputs.clone(),
            format!("{DIFFERENCE_PROFILE:?}"),
            format!("{profile:?}"),
        );
        let in_range = profile.iter().all(|d| (0..=3).contains(d));
        r.push(
            "difference-range",
            "0 <= N_N - N_D <= 3",
            inputs.clone(),
            true,
            in_range,
            in_range,
        );
        let mass: u64 = rows.iter().map(|l| l.mult_tilde).sum();
        r.exact(
            "cycle-mass",
            "sum M~ over C_k = 15 + 5 3^(j+1)",
            inputs.clone(),
            15 + 5 * 3u64.pow(d.j + 1),
            mass,
        );
        let p1 = 3u64.pow(d.j + 1);
        let p2 = 3u64.pow(d.j + 2);
        let tail = [
            (rows[7].mult_neumann, rows[7].mult_dirichlet),
            (rows[8].mult_neumann, rows[8].mult_dirichlet),
            (rows[9].mult_neumann, rows[9].mult_dirichlet),
        ];
        r.exact(
            "tail-multiplicities",
            "rows 8-10 (M_N, M_D) = ((3^(j+1)-1)/2, (3^(j+1)+3)/2), ((3^(j+2)+3)/2, (3^(j+2)-3)/2), row 8 again",
            inputs.clone(),
            format!("{:?}", [((p1 - 1) / 2, (p1 + 3) / 2), ((p2 + 3) / 2, (p2 - 3) / 2), ((p1 - 1) / 2, (p1 + 3) / 2)]),
            format!("{tail:?}"),
        );
        let increasing = rows.iter().all(|l| {
            let ok = l.value > prev_top;
            prev_top = l.value;
            ok
        });
        r.push(
            "ordering",
            "values strictly increase across rows and cycles",
            inputs,
            true,
            increasing,
            increasing,
        );
    }
    debug_assert_eq!(ROWS_PER_CYCLE, 10);
    Ok(r)
}

pub fn julia_suite(config: &VerifyConfig, catalog: &Catalog) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Julia);
    let measures = julia::cover_measures(config.julia_depth)?;
    for (m, &c) in measures.iter().enumerate() {
        let bound = julia::cover_measure_bound(m as u32);
        r.push(
            "measure-bound",
            "cover_measure(m) <= 5 (2/sqrt 5)^m",
            format!("m = {m}"),
            format!("<= {bound:e}"),
            format!("{c:e}"),
            c <= bound,
        );
        if m > 0 {
            let ratio = c / measures[m - 1];
            r.push(
                "measure-decay",
                "cover_measure(m) / cover_measure(m-1) < 0.95",
                format!("m = {m}"),
                "< 0.95",
                format!("{ratio:.12}"),
                ratio < 0.95,
            );
        }
    }
    if config.julia_depth >= 30 {
        let last = measures[30];
        r.push(
            "measure-small",
            "cover_measure(30) < 0.1",
            "m = 30".into(),
            "< 0.1",
            format!("{last:e}"),
            last < 0.1,
        );
    }
    for m in 0..=config.exhaustion_depth {
        let e = julia::exhaustion(m)?;
        r.push(
            "exhaustion",
            "cover_measure(m) + sum_{l < 2^m} |B_l| = 5",
            format!("m = {m}"),
            format!("|defect| <= {:e}", config.exhaustion_tol),
            format!("{:e}", e.defect),
            e.defect.abs() <= config.exhaustion_tol,
        );
    }
    let nest_depth = config.exhaustion_depth.min(12);
    let mut parents = julia::cover(0)?;
    for m in 1..=nest_depth {
        let children = julia::cover(m)?;
        let nested = children.iter().all(|c| {
            parents
                .iter()
                .any(|p| p.interval.lo <= c.interval.lo && c.interval.hi <= p.interval.hi)
        });
        let disjoint = children
            .windows(2)
            .all(|w| w[0].interval.hi < w[1].interval.lo);
        r.push(
            "nesting",
            "cover(m) intervals are disjoint and each lies in a cover(m-1) interval",
            format!("m = {m}"),
            true,
            nested && disjoint,
            nested && disjoint,
        );
        parents = children;
    }
    for ell in 1..=config.correspondence_l_max {
        let c = julia::correspondence(catalog, ell)?;
        r.push(
            "correspondence",
            "(5 lambda5_{2l-1}, 5 lambda5_{2l}) = 5^e psi(B_h)",
            format!("l = {ell}, h = {}, e = {}", c.gap_index, c.exponent),
            format!("<= {:e}", config.correspondence_tol),
            format!("{:e}", c.max_relative_error),
            c.passed(config.correspondence_tol),
        );
    }
    Ok(r)
}

/// Graph-side checks on levels `0..=oracle_level`; the renormalized limits
/// use levels 3 and up.
pub fn oracle(config: &VerifyConfig, catalog: &Catalog) -> Result<SuiteReport> {
    if config.oracle_level < 3 {
        return Err(Error::InvalidArgument(format!(
            "the oracle suite needs levels up to at least 3, got {}",
            config.oracle_level
        )));
    }
    let mut r = SuiteReport::new(Suite::Oracle);
    let mut spectra = Vec::new();
    for level in 0..=config.oracle_level {
        spectra.push(graph::level_spectra(level)?);
    }
    let report = ClosureReport {
        levels: (1..spectra.len())
            .map(|m| graph::summarize_level(&spectra[m], Some(&spectra[m - 1])))
            .collect(),
    };
    for l in &report.levels {
        let inputs = format!("level {}", l.level);
        r.exact(
            "vertex-count",
            "eigenvalue count = vertex count = 3^(m+1)",
            inputs.clone(),
            3usize.pow(l.level + 1),
            l.eigen_count,
        );
        r.exact(
            "vertex-count",
            "vertex count = 3^(m+1)",
            inputs.clone(),
            3usize.pow(l.level + 1),
            l.vertex_count,
        );
        if l.level >= 2 {
            let bad: Vec<String> = l
                .groups
                .iter()
                .filter(|(_, s)| !s.passed())
                .map(|(g, _)| format!("{:e}", g.value))
                .collect();
            r.push(
                "closure",
                "mu in {2, 5, 6} or mu (5 - mu) is a level m-1 eigenvalue (1e-7)",
                inputs.clone(),
                "no failures",
                if bad.is_empty() {
                    "none".to_string()
                } else {
                    bad.join(" ")
                },
                bad.is_empty(),
            );
        }
        r.push(
            "union",
            "Neumann and Dirichlet spectra together = double-cover spectrum",
            inputs.clone(),
            true,
            l.union_matches,
            l.union_matches,
        );
        let (lo, hi) = l.nd_difference_range;
        r.push(
            "nd-difference",
            "0 <= #Neumann(<= t) - #Dirichlet(<= t) <= 3 at every eigenvalue t",
            inputs.clone(),
            "[0, 3]",
            format!("[{lo}, {hi}]"),
            lo >= 0 && hi <= 3,
        );
        r.push(
            "residual",
            "||L v - mu v|| <= 1e-8 ||L|| on sampled eigenpairs",
            inputs,
            "<= 1e-8",
            format!("{:e}", l.max_relative_residual),
            l.max_relative_residual <= 1e-8,
        );
    }
    for s in &spectra {
        let spread = [&s.double_cover, &s.neumann, &s.dirichlet]
            .iter()
            .map(|g| g.max_group_spread())
            .fold(0.0, f64::max);
        r.push(
            "group-spread",
            "no eigenvalue group spans more than 1e-6",
            format!("level {}", s.double_cover.level),
            "<= 1e-6",
            format!("{spread:e}"),
            spread <= 1e-6,
        );
    }
    for j in 0..=config.oracle_level.saturating_sub(2) {
        r.exact(
            "vertex-identity",
            "eigenvalue count at level j+2 = N~(5^(j+2) lambda3_1) = 3^(j+3)",
            format!("j = {j}"),
            n_tilde_at(catalog, j + 2, 1)? as usize,
            spectra[j as usize + 2].double_cover.eigenvalues.len(),
        );
    }
    for s in &spectra[1..] {
        for spectrum in [&s.double_cover, &s.neumann, &s.dirichlet] {
            let a = graph::catalog_agreement(catalog, spectrum)?;
            r.push(
                "catalog-agreement",
                "graph eigenvalues pushed to the fractal = catalog eigenvalues below 5^(m+1) psi(3)",
                format!("level {}, {}", a.level, a.condition),
                format!("{} values, gap <= 1e-8", a.catalog_count),
                format!("{} values, gap {:e}", a.graph_count, a.max_relative_gap),
                a.passed(1e-8),
            );
        }
    }
    let lines = catalog.spectrum(1)?;
    let start = 3u32;
    let levels = &spectra[start as usize..];
    for (which, exact) in [(1usize, lines[1].value), (2, lines[2].value)] {
        let mus: Vec<f64> = levels
            .iter()
            .map(|s| s.double_cover.eigenvalues[which])
            .collect();
        let estimate = graph::fractal_limit_estimate(start, &mus)?;
        r.push(
            "limit",
            "renormalized graph eigenvalue limit = catalog eigenvalue (1e-5 relative)",
            format!(
                "eigenvalue #{which}, levels {start}..={}",
                config.oracle_level
            ),
            format!("{exact:e}"),
            format!("{estimate:e}"),
            rel(estimate, exact) <= config.oracle_tol,
        );
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig {
            samples: 50,
            n_max: 4,
            j_max: 3,
            k_max: 16,
            l_max: 3,
            scale: 1,
            m_max: 3,
            julia_depth: 12,
            exhaustion_depth: 8,
            correspondence_l_max: 4,
            oracle_level: 3,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn small_suites_pass() {
        let catalog = Catalog::default();
        for report in run_all(&small(), &catalog).unwrap() {
            let bad: Vec<_> = report.failures().collect();
            assert!(bad.is_empty(), "{}: {bad:?}", report.suite);
            assert!(!report.checks.is_empty());
        }
    }

    #[test]
    fn tally_groups_by_name() {
        let catalog = Catalog::default();
        let r = lemma(&small(), &catalog).unwrap();
        let tally = r.tally();
        assert_eq!(tally[0], ("anchor".to_string(), 7, 7));
        assert_eq!(tally[1], ("lemma".to_string(), 16, 16));
    }

    #[test]
    fn sample_points_stay_in_range() {
        let pts = sample_points(1.0, 2.0, 100);
        assert!(pts.iter().all(|&x| (1.0..2.0).contains(&x)));
        assert_eq!(pts, sample_points(1.0, 2.0, 100));
    }

    #[test]
    fn oracle_needs_three_levels() {
        let catalog = Catalog::default();
        let cfg = VerifyConfig {
            oracle_level: 2,
            ..small()
        };
        assert!(oracle(&cfg, &catalog).is_err());
    }
}
