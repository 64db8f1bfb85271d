//! The open set of scales on which the double-cover counting function is
//! exactly `2 G(t) t^alpha`, the periodic functions `G` and `G1`, and the
//! integer form of the exactness statement.
//!
//! For each `l >= 1` the eigenvalue `25 lambda^(3)_l` has two neighbouring
//! gaps in the spectrum:
//!
//! ```text
//! A_l  = (5 lambda^(5)_{2l-1}, 25 lambda^(3)_l)
//! A'_l = (25 lambda^(3)_l,     5 lambda^(5)_{2l})
//! ```
//!
//! These are rows 8, 9, 10 of cycle `2l - 1`. The counting function is
//! constant on each: `g` on `A'_l` and `g - 9` on `A_l`, with
//! `g = N~(25 lambda^(3)_l)`. Multiplying by `5^m` multiplies every count by
//! `3^m`, so on `5^n A_l` and `5^n A'_l`
//!
//! ```text
//! N~(5^m t) = 3^(m+n) g_coefficient,   N_N(5^m t) - N_D(5^m t) = 2 G1
//! ```
//!
//! for all `m >= max(-n, 0)`, where `G1` is 0 on `A` and 3/2 on `A'`.
//! Every check here compares integers; floating `G t^alpha` products are only
//! produced for plotting.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::alpha;
use crate::catalog::{Catalog, CountingResult};
use crate::decimation::Generator;
use crate::error::{Error, Result};
use crate::export;

pub const DEFAULT_L_MAX: usize = 1024;
/// Relative positions of the constancy probes inside an interval.
pub const PROBES: [f64; 3] = [0.25, 0.5, 0.75];
/// Multiplicity of `25 lambda^(3)_l`, the jump between `A_l` and `A'_l`.
pub const MIDDLE_JUMP: u64 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntervalKind {
    A,
    APrime,
}

impl IntervalKind {
    /// `2 G1`, i.e. `N_N - N_D` on intervals of this kind.
    pub fn g1_twice(self) -> u64 {
        match self {
            IntervalKind::A => 0,
            IntervalKind::APrime => 3,
        }
    }
}

impl fmt::Display for IntervalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IntervalKind::A => "A",
            IntervalKind::APrime => "A'",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylInterval {
    pub kind: IntervalKind,
    pub ell: usize,
    /// The interval is `5^scale_n` times the base interval.
    pub scale_n: i32,
    pub lo: f64,
    pub hi: f64,
    /// `N~` on the base interval.
    pub g_coefficient: u64,
    pub m0: u32,
}

impl WeylInterval {
    pub fn g1(&self) -> f64 {
        self.kind.g1_twice() as f64 / 2.0
    }

    pub fn probe(&self, fraction: f64) -> f64 {
        self.lo + fraction * (self.hi - self.lo)
    }

    pub fn midpoint(&self) -> f64 {
        self.probe(0.5)
    }

    /// Same interval moved to `5^n` times the base.
    pub fn scaled(&self, n: i32) -> WeylInterval {
        let f = 5f64.powi(n - self.scale_n);
        WeylInterval {
            scale_n: n,
            lo: self.lo * f,
            hi: self.hi * f,
            m0: n.min(0).unsigned_abs(),
            ..*self
        }
    }

    /// `G(t) = g_coefficient / 2 * (t 5^-n)^-alpha` for `t` in this interval.
    pub fn g(&self, t: f64) -> f64 {
        0.5 * self.g_coefficient as f64 * (t * 5f64.powi(-self.scale_n)).powf(-alpha())
    }
}

fn check_ell(ell: usize) -> Result<()> {
    if ell == 0 {
        return Err(Error::InvalidArgument("interval index starts at 1".into()));
    }
    Ok(())
}

fn probe_counts(catalog: &Catalog, iv: &WeylInterval) -> Result<Vec<CountingResult>> {
    PROBES.iter().map(|&f| catalog.count(iv.probe(f))).collect()
}

/// `(A_l, A'_l)` at scale 0, with the counts on both checked at the probes.
pub fn base_intervals(catalog: &Catalog, ell: usize) -> Result<(WeylInterval, WeylInterval)> {
    check_ell(ell)?;
    let k = 2 * ell as u64 - 1;
    let rows = catalog.cycle_rows(k)?;
    let lo = 5.0 * catalog.primitive(Generator::Five, 2 * ell as u64 - 1)?;
    let mid = 25.0 * catalog.primitive(Generator::Three, ell as u64)?;
    let hi = 5.0 * catalog.primitive(Generator::Five, 2 * ell as u64)?;
    for (row, want) in [(8, lo), (9, mid), (10, hi)] {
        let got = rows[row - 1].value;
        if got != want {
            return Err(Error::InvalidArgument(format!(
                "row {row} of cycle {k} is {got}, expected {want}"
            )));
        }
    }
    if !(lo < mid && mid < hi) {
        return Err(Error::Ordering {
            lower: lo,
            upper: hi,
            context: format!("interval pair {ell} around {mid}"),
        });
    }
    let g = catalog.totals_through(k, 9)?.n_tilde;
    let a = WeylInterval {
        kind: IntervalKind::A,
        ell,
        scale_n: 0,
        lo,
        hi: mid,
        g_coefficient: g - MIDDLE_JUMP,
        m0: 0,
    };
    let a_prime = WeylInterval {
        kind: IntervalKind::APrime,
        lo: mid,
        hi,
        g_coefficient: g,
        ..a
    };
    for iv in [&a, &a_prime] {
        for c in probe_counts(catalog, iv)? {
            let diff = c.n_neumann as i64 - c.n_dirichlet as i64;
            if c.at_eigenvalue || c.n_tilde != iv.g_coefficient || diff != iv.kind.g1_twice() as i64
            {
                return Err(Error::NotConstant {
                    kind: if iv.kind == IntervalKind::A { "A" } else { "A'" },
                    ell,
                    detail: format!(
                        "at t = {}: counts (N, D, tilde) = ({}, {}, {}), expected tilde {} and difference {}",
                        c.t,
                        c.n_neumann,
                        c.n_dirichlet,
                        c.n_tilde,
                        iv.g_coefficient,
                        iv.kind.g1_twice()
                    ),
                });
            }
        }
    }
    Ok((a, a_prime))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum Membership {
    Located {
        interval: WeylInterval,
    },
    /// `t` is in none of the intervals with `l <= l_max`: it is an endpoint,
    /// lies in the exceptional Cantor set, or needs a larger `l_max`.
    NotLocated {
        t: f64,
        l_max: usize,
    },
}

impl Membership {
    pub fn interval(&self) -> Option<&WeylInterval> {
        match self {
            Membership::Located { interval } => Some(interval),
            Membership::NotLocated { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct WindowEntry {
    lo: f64,
    hi: f64,
    shift: i32,
    base: WeylInterval,
}

/// Finds the `(kind, l, n)` with `t in 5^n (A_l or A'_l)`.
///
/// Every pair `A''_l = A_l u {25 lambda^(3)_l} u A'_l` has exactly one
/// `5`-power translate inside the window `[w, 5w)` with
/// `w = 5 lambda^(5)_1`, the left end of `A_1`. The translates are sorted
/// once; a query is scaled into the window and bisected.
#[derive(Debug, Clone)]
pub struct Locator {
    l_max: usize,
    window: f64,
    tol: f64,
    entries: Vec<WindowEntry>,
}

impl Locator {
    pub fn new(catalog: &Catalog, l_max: usize) -> Result<Self> {
        check_ell(l_max)?;
        let window = 5.0 * catalog.primitive(Generator::Five, 1)?;
        let mut entries = Vec::with_capacity(2 * l_max);
        for ell in 1..=l_max {
            let (a, a_prime) = base_intervals(catalog, ell)?;
            let mut shift = 0i32;
            while a.lo * 5f64.powi(-shift) >= 5.0 * window * (1.0 - 1e-12) {
                shift += 1;
            }
            let f = 5f64.powi(-shift);
            if a_prime.hi * f > 5.0 * window * (1.0 + 1e-12) {
                return Err(Error::Ordering {
                    lower: a_prime.hi * f,
                    upper: 5.0 * window,
                    context: format!("interval pair {ell} straddles the scaling window"),
                });
            }
            for base in [a, a_prime] {
                entries.push(WindowEntry {
                    lo: base.lo * f,
                    hi: base.hi * f,
                    shift,
                    base,
                });
            }
        }
        entries.sort_by(|x, y| x.lo.total_cmp(&y.lo));
        for w in entries.windows(2) {
            if w[0].hi > w[1].lo * (1.0 + 1e-12) {
                return Err(Error::Ordering {
                    lower: w[1].lo,
                    upper: w[0].hi,
                    context: format!(
                        "intervals {} {} and {} {} overlap in the window",
                        w[0].base.kind, w[0].base.ell, w[1].base.kind, w[1].base.ell
                    ),
                });
            }
        }
        Ok(Self {
            l_max,
            window,
            tol: catalog.config().comparison_tol,
            entries,
        })
    }

    pub fn with_default_depth(catalog: &Catalog) -> Result<Self> {
        Self::new(catalog, DEFAULT_L_MAX)
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    /// Left end of the canonical window `[w, 5w)`.
    pub fn window(&self) -> f64 {
        self.window
    }

    /// `t` scaled into the window, with the power of 5 removed.
    pub fn normalize(&self, t: f64) -> (f64, i32) {
        let mut s = ((t / self.window).ln() / 5f64.ln()).floor() as i32;
        let mut x = t * 5f64.powi(-s);
        while x < self.window {
            s -= 1;
            x = t * 5f64.powi(-s);
        }
        while x >= 5.0 * self.window {
            s += 1;
            x = t * 5f64.powi(-s);
        }
        (x, s)
    }

    /// Membership of `t` in the open set. Points within the comparison
    /// tolerance of an interval endpoint are not located.
    pub fn locate(&self, t: f64) -> Result<Membership> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "locate needs a finite positive point, got {t}"
            )));
        }
        let not_located = Membership::NotLocated {
            t,
            l_max: self.l_max,
        };
        let (x, s) = self.normalize(t);
        let i = self.entries.partition_point(|e| e.lo < x);
        let Some(e) = i.checked_sub(1).map(|i| self.entries[i]) else {
            return Ok(not_located);
        };
        if !(x > e.lo * (1.0 + self.tol) && x < e.hi * (1.0 - self.tol)) {
            return Ok(not_located);
        }
        Ok(Membership::Located {
            interval: e.base.scaled(s - e.shift),
        })
    }

    fn located(&self, t: f64) -> Result<WeylInterval> {
        match self.locate(t)? {
            Membership::Located { interval } => Ok(interval),
            Membership::NotLocated { .. } => Err(Error::OutsideA {
                t,
                l_max: self.l_max,
            }),
        }
    }

    /// The multiplicatively periodic `G(t)`.
    pub fn g(&self, t: f64) -> Result<f64> {
        Ok(self.located(t)?.g(t))
    }

    /// `G1(t)`, either 0 or 3/2.
    pub fn g1(&self, t: f64) -> Result<f64> {
        Ok(self.located(t)?.g1())
    }

    /// Checks the exact identities at `5^m t` for `m = m0(t) ..= m_max`.
    pub fn verify_theorem(&self, catalog: &Catalog, t: f64, m_max: u32) -> Result<TheoremReport> {
        let interval = self.located(t)?;
        if m_max < interval.m0 {
            return Err(Error::InvalidArgument(format!(
                "m_max = {m_max} is below m0 = {} for t = {t}",
                interval.m0
            )));
        }
        let mut rows = Vec::new();
        for m in interval.m0..=m_max {
            let e = (m as i32 + interval.scale_n) as u32;
            let power = 3u64.pow(e);
            let c = catalog.count(t * 5f64.powi(m as i32))?;
            let expected_tilde = power * interval.g_coefficient;
            let g1_twice = interval.kind.g1_twice();
            let twice_n = 2 * c.n_neumann;
            let twice_d = 2 * c.n_dirichlet;
            let neumann_ok = twice_n == expected_tilde + g1_twice;
            let dirichlet_ok = twice_d + g1_twice == expected_tilde;
            rows.push(TheoremRow {
                m,
                n_tilde: c.n_tilde,
                expected_tilde,
                n_neumann: c.n_neumann,
                n_dirichlet: c.n_dirichlet,
                difference: c.n_neumann as i64 - c.n_dirichlet as i64,
                expected_difference: g1_twice as i64,
                passed: !c.at_eigenvalue
                    && c.n_tilde == expected_tilde
                    && neumann_ok
                    && dirichlet_ok,
            });
        }
        Ok(TheoremReport { t, interval, rows })
    }

    /// Logarithmically spaced Weyl ratios on `[t_lo, t_hi]`, with membership.
    pub fn weyl_ratio_scan(
        &self,
        catalog: &Catalog,
        t_lo: f64,
        t_hi: f64,
        samples: usize,
    ) -> Result<Vec<WeylSample>> {
        if !(t_lo > 0.0 && t_lo < t_hi && t_hi.is_finite()) || samples == 0 {
            return Err(Error::InvalidArgument(format!(
                "scan needs 0 < t_lo < t_hi and samples >= 1, got [{t_lo}, {t_hi}] x {samples}"
            )));
        }
        let a = alpha();
        let (l0, l1) = (t_lo.ln(), t_hi.ln());
        (0..samples)
            .map(|i| {
                let t = if samples == 1 {
                    t_lo
                } else {
                    (l0 + (l1 - l0) * i as f64 / (samples - 1) as f64).exp()
                };
                let c = catalog.count(t)?;
                let ta = t.powf(a);
                let interval = self.locate(t)?.interval().copied();
                Ok(WeylSample {
                    t,
                    weyl_ratio: c.n_tilde as f64 / ta,
                    ratio_neumann: c.n_neumann as f64 / ta,
                    ratio_dirichlet: c.n_dirichlet as f64 / ta,
                    g_value: interval.map(|iv| iv.g(t)),
                    g1_value: interval.map(|iv| iv.g1()),
                    interval,
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoremRow {
    pub m: u32,
    pub n_tilde: u64,
    pub expected_tilde: u64,
    pub n_neumann: u64,
    pub n_dirichlet: u64,
    pub difference: i64,
    pub expected_difference: i64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub t: f64,
    pub interval: WeylInterval,
    pub rows: Vec<TheoremRow>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylSample {
    pub t: f64,
    /// `N~(t) / t^alpha`.
    pub weyl_ratio: f64,
    pub ratio_neumann: f64,
    pub ratio_dirichlet: f64,
    pub interval: Option<WeylInterval>,
    pub g_value: Option<f64>,
    pub g1_value: Option<f64>,
}

impl WeylSample {
    pub fn membership_label(&self) -> String {
        match &self.interval {
            Some(iv) => format!("{}:{}:{}", iv.kind, iv.ell, iv.scale_n),
            None => "none".into(),
        }
    }
}

/// Writes `t,weyl_ratio_tilde,ratio_N,ratio_D,membership,G,G1`; `G` and `G1`
/// are empty outside the located set.
pub fn write_scan_csv<W: Write>(out: &mut W, samples: &[WeylSample]) -> std::io::Result<()> {
    export::record(
        out,
        &[
            "t",
            "weyl_ratio_tilde",
            "ratio_N",
            "ratio_D",
            "membership",
            "G",
            "G1",
        ],
    )?;
    for s in samples {
        export::record(
            out,
            &[
                export::float(s.t),
                export::float(s.weyl_ratio),
                export::float(s.ratio_neumann),
                export::float(s.ratio_dirichlet),
                s.membership_label(),
                s.g_value.map(export::float).unwrap_or_default(),
                s.g1_value.map(export::float).unwrap_or_default(),
            ],
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(l_max: usize) -> (Catalog, Locator) {
        let catalog = Catalog::default();
        let locator = Locator::new(&catalog, l_max).unwrap();
        (catalog, locator)
    }

    #[test]
    fn first_pair() {
        let catalog = Catalog::default();
        let (a, ap) = base_intervals(&catalog, 1).unwrap();
        assert_eq!((a.g_coefficient, ap.g_coefficient), (18, 27));
        assert_eq!((a.g1(), ap.g1()), (0.0, 1.5));
        assert_eq!(a.hi, ap.lo);
        let c = catalog.count(ap.midpoint()).unwrap();
        assert_eq!(c.n_tilde, 27);
        assert!(base_intervals(&catalog, 0).is_err());
    }

    #[test]
    fn coefficients_for_small_ell() {
        let catalog = Catalog::default();
        let got: Vec<u64> = (1..=4)
            .map(|l| base_intervals(&catalog, l).unwrap().1.g_coefficient)
            .collect();
        assert_eq!(got, vec![27, 117, 297, 387]);
    }

    #[test]
    fn locate_examples() {
        let (catalog, loc) = setup(16);
        let (a, ap) = base_intervals(&catalog, 1).unwrap();
        let m = loc.locate(ap.midpoint()).unwrap();
        let iv = m.interval().unwrap();
        assert_eq!((iv.kind, iv.ell, iv.scale_n), (IntervalKind::APrime, 1, 0));

        let t = 125.0 * a.midpoint();
        let iv = *loc.locate(t).unwrap().interval().unwrap();
        assert_eq!(
            (iv.kind, iv.ell, iv.scale_n, iv.m0),
            (IntervalKind::A, 1, 3, 0)
        );

        assert!(matches!(
            loc.locate(ap.lo).unwrap(),
            Membership::NotLocated { .. }
        ));
        assert!(matches!(loc.g(ap.lo), Err(Error::OutsideA { .. })));
        assert!(loc.locate(0.0).is_err());

        let small = ap.midpoint() / 25.0;
        let iv = *loc.locate(small).unwrap().interval().unwrap();
        assert_eq!((iv.scale_n, iv.m0), (-2, 2));
    }

    #[test]
    fn g_closed_forms() {
        let (catalog, loc) = setup(8);
        let (a, ap) = base_intervals(&catalog, 1).unwrap();
        let t = ap.midpoint();
        assert!((loc.g(t).unwrap() - 13.5 * t.powf(-alpha())).abs() < 1e-15);
        let t = a.midpoint();
        assert!((loc.g(t).unwrap() - 9.0 * t.powf(-alpha())).abs() < 1e-15);
        assert_eq!(loc.g1(t).unwrap(), 0.0);
        let g5 = loc.g(5.0 * t).unwrap();
        assert!((g5 - loc.g(t).unwrap()).abs() <= 1e-13 * g5);
    }

    #[test]
    fn theorem_examples() {
        let (catalog, loc) = setup(8);
        let (a, ap) = base_intervals(&catalog, 1).unwrap();
        let r = loc.verify_theorem(&catalog, ap.midpoint(), 4).unwrap();
        assert!(r.passed());
        let tildes: Vec<u64> = r.rows.iter().map(|r| r.n_tilde).collect();
        assert_eq!(tildes, vec![27, 81, 243, 729, 2187]);
        assert!(r.rows.iter().all(|r| r.difference == 3));

        let r = loc.verify_theorem(&catalog, a.midpoint(), 3).unwrap();
        let tildes: Vec<u64> = r.rows.iter().map(|r| r.n_tilde).collect();
        assert_eq!(tildes, vec![18, 54, 162, 486]);
        assert!(r.passed());

        let r = loc
            .verify_theorem(&catalog, ap.midpoint() / 25.0, 5)
            .unwrap();
        assert_eq!(r.interval.m0, 2);
        assert_eq!(r.rows.first().unwrap().m, 2);
        assert!(r.passed());
        assert!(loc
            .verify_theorem(&catalog, ap.midpoint() / 25.0, 1)
            .is_err());
    }

    #[test]
    fn normalization_window() {
        let (_, loc) = setup(4);
        let w = loc.window();
        for t in [1e-6, 0.3, 1.0, w, 5.0 * w, 7.7e9] {
            let (x, s) = loc.normalize(t);
            assert!(w <= x && x < 5.0 * w, "{t} -> {x}");
            assert!((x * 5f64.powi(s) - t).abs() <= 1e-14 * t);
        }
    }

    #[test]
    fn scan_csv_layout() {
        let (catalog, loc) = setup(16);
        let samples = loc.weyl_ratio_scan(&catalog, 1.0, 625.0, 9).unwrap();
        assert_eq!(samples.len(), 9);
        assert!((samples[8].t - 625.0).abs() < 1e-9);
        let mut buf = Vec::new();
        write_scan_csv(&mut buf, &samples).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,weyl_ratio_tilde,ratio_N,ratio_D,membership,G,G1\n"));
        assert_eq!(text.lines().count(), 10);
        assert!(loc.weyl_ratio_scan(&catalog, 2.0, 1.0, 3).is_err());
    }
}
