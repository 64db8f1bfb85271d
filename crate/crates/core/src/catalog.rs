//! The full spectrum of the double cover, organized in cycles of ten distinct
//! eigenvalues, and the three counting functions.
//!
//! After the zero eigenvalue the spectrum is the concatenation of cycles
//! `C_1, C_2, ...`. Writing `k = 2^j (2l - 1)`, cycle `C_k` holds, in
//! increasing order:
//!
//! | row | eigenvalue                  | M_N             | M_D             | M~          |
//! |-----|-----------------------------|-----------------|-----------------|-------------|
//! | 1   | `lambda(2)_{2k-1}`          | 0               | 1               | 1           |
//! | 2   | `lambda(3)_{2k-1}`          | 2               | 0               | 2           |
//! | 3   | `lambda(5)_{2k-1}`          | 0               | 2               | 2           |
//! | 4   | `5 lambda(3)_k`             | 3               | 0               | 3           |
//! | 5   | `lambda(5)_{2k}`            | 0               | 2               | 2           |
//! | 6   | `lambda(3)_{2k}`            | 2               | 0               | 2           |
//! | 7   | `lambda(2)_{2k}`            | 0               | 1               | 1           |
//! | 8   | `5^(j+1) lambda(5)_{2l-1}`  | `(3^(j+1)-1)/2` | `(3^(j+1)+3)/2` | `3^(j+1)+1` |
//! | 9   | `5^(j+2) lambda(3)_l`       | `(3^(j+2)+3)/2` | `(3^(j+2)-3)/2` | `3^(j+2)`   |
//! | 10  | `5^(j+1) lambda(5)_{2l}`    | `(3^(j+1)-1)/2` | `(3^(j+1)+3)/2` | `3^(j+1)+1` |
//!
//! Row 10 is the companion `lambda(5)_{2l}` of row 8; with it the catalog
//! reproduces the brute-force graph spectra (see `graph`) eigenvalue for
//! eigenvalue.

use std::fmt;
use std::io::{self, Write};
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::decimation::{family_slot, Generator, PrimitiveEigenvalue, PrimitiveFamily, PsiConfig};
use crate::error::{Error, Result};
use crate::export;

pub const ROWS_PER_CYCLE: usize = 10;

/// `N_N - N_D` at each row of every cycle.
pub const DIFFERENCE_PROFILE: [i64; ROWS_PER_CYCLE] = [0, 2, 0, 3, 1, 3, 2, 0, 3, 1];

/// `k = 2^j (2 ell - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleDecomposition {
    pub k: u64,
    pub j: u32,
    pub ell: u64,
}

pub fn decompose(k: u64) -> Result<CycleDecomposition> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "cycle index must be at least 1".into(),
        ));
    }
    let j = k.trailing_zeros();
    let odd = k >> j;
    Ok(CycleDecomposition {
        k,
        j,
        ell: odd.div_ceil(2),
    })
}

/// `5^power * lambda^(generator)_rank`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EigenLabel {
    pub generator: Generator,
    pub rank: u64,
    pub power: u32,
}

impl fmt::Display for EigenLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.power > 0 {
            write!(f, "5^{}*", self.power)?;
        }
        write!(f, "lambda({})_{}", self.generator, self.rank)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralLine {
    pub value: f64,
    pub mult_neumann: u64,
    pub mult_dirichlet: u64,
    pub mult_tilde: u64,
    /// 0 for the zero eigenvalue.
    pub cycle: u64,
    /// 1..=10 within the cycle, 0 for the zero eigenvalue.
    pub row: u8,
    /// `None` for the zero eigenvalue.
    pub label: Option<EigenLabel>,
}

impl SpectralLine {
    pub fn zero() -> Self {
        Self {
            value: 0.0,
            mult_neumann: 1,
            mult_dirichlet: 0,
            mult_tilde: 1,
            cycle: 0,
            row: 0,
            label: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Totals {
    pub n_neumann: u64,
    pub n_dirichlet: u64,
    pub n_tilde: u64,
}

impl Totals {
    fn add(self, line: &SpectralLine) -> Self {
        Self {
            n_neumann: self.n_neumann + line.mult_neumann,
            n_dirichlet: self.n_dirichlet + line.mult_dirichlet,
            n_tilde: self.n_tilde + line.mult_tilde,
        }
    }

    pub fn difference(&self) -> i64 {
        self.n_neumann as i64 - self.n_dirichlet as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountingResult {
    pub t: f64,
    pub n_neumann: u64,
    pub n_dirichlet: u64,
    pub n_tilde: u64,
    /// Set when `t` lies within the comparison tolerance of an eigenvalue;
    /// that eigenvalue is counted.
    pub at_eigenvalue: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatalogConfig {
    pub psi: PsiConfig,
    /// Relative tolerance under which a query point equals an eigenvalue.
    pub comparison_tol: f64,
    pub max_cycles: usize,
}

impl Default for CatalogConfig {
    fn default() -> Self {
        Self {
            psi: PsiConfig::default(),
            comparison_tol: 1e-9,
            max_cycles: 1 << 17,
        }
    }
}

#[derive(Debug)]
struct State {
    families: [PrimitiveFamily; 3],
    // lines[0] is the zero eigenvalue; cycle k occupies 10(k-1)+1 ..= 10k.
    lines: Vec<SpectralLine>,
    totals: Vec<Totals>,
}

impl State {
    fn new(psi: PsiConfig) -> Self {
        let zero = SpectralLine::zero();
        Self {
            families: Generator::ALL.map(|g| PrimitiveFamily::with_config(g, psi)),
            lines: vec![zero],
            totals: vec![Totals::default().add(&zero)],
        }
    }

    fn cycles(&self) -> usize {
        (self.lines.len() - 1) / ROWS_PER_CYCLE
    }

    fn primitive(&mut self, generator: Generator, rank: u64) -> Result<f64> {
        self.families[family_slot(generator)].value(rank as usize)
    }

    fn build_cycle(&mut self, k: u64) -> Result<[SpectralLine; ROWS_PER_CYCLE]> {
        use Generator::{Five, Three, Two};

        let CycleDecomposition { j, ell, .. } = decompose(k)?;
        let p1 = 3u64.pow(j + 1);
        let p2 = 3u64.pow(j + 2);
        // (generator, rank, power, M_N, M_D)
        let layout: [(Generator, u64, u32, u64, u64); ROWS_PER_CYCLE] = [
            (Two, 2 * k - 1, 0, 0, 1),
            (Three, 2 * k - 1, 0, 2, 0),
            (Five, 2 * k - 1, 0, 0, 2),
            (Three, k, 1, 3, 0),
            (Five, 2 * k, 0, 0, 2),
            (Three, 2 * k, 0, 2, 0),
            (Two, 2 * k, 0, 0, 1),
            (Five, 2 * ell - 1, j + 1, (p1 - 1) / 2, (p1 + 3) / 2),
            (Three, ell, j + 2, (p2 + 3) / 2, (p2 - 3) / 2),
            (Five, 2 * ell, j + 1, (p1 - 1) / 2, (p1 + 3) / 2),
        ];
        let mut rows = [SpectralLine::zero(); ROWS_PER_CYCLE];
        for (i, &(generator, rank, power, mult_neumann, mult_dirichlet)) in layout.iter().enumerate()
        {
            let value = 5f64.powi(power as i32) * self.primitive(generator, rank)?;
            rows[i] = SpectralLine {
                value,
                mult_neumann,
                mult_dirichlet,
                mult_tilde: mult_neumann + mult_dirichlet,
                cycle: k,
                row: i as u8 + 1,
                label: Some(EigenLabel {
                    generator,
                    rank,
                    power,
                }),
            };
        }
        Ok(rows)
    }

    fn extend_to(&mut self, cycles: usize) -> Result<()> {
        while self.cycles() < cycles {
            let k = self.cycles() as u64 + 1;
            let rows = self.build_cycle(k)?;
            let mut prev = *self.lines.last().expect("zero line present");
            for row in rows {
                if !(prev.value < row.value) {
                    return Err(Error::Ordering {
                        lower: prev.value,
                        upper: row.value,
                        context: format!(
                            "cycle {k} row {} against cycle {} row {}",
                            row.row, prev.cycle, prev.row
                        ),
                    });
                }
                let total = self.totals.last().expect("totals present").add(&row);
                self.lines.push(row);
                self.totals.push(total);
                prev = row;
            }
        }
        Ok(())
    }
}

/// Memoized spectral catalog.
///
/// Readers share the generated prefix; extension takes the write lock, so one
/// catalog can serve many threads.
#[derive(Debug)]
pub struct Catalog {
    config: CatalogConfig,
    state: RwLock<State>,
}

impl Default for Catalog {
    fn default() -> Self {
        Self::new(CatalogConfig::default())
    }
}

fn line_index(cycle: u64, row: u8) -> usize {
    (cycle as usize - 1) * ROWS_PER_CYCLE + row as usize
}

impl Catalog {
    pub fn new(config: CatalogConfig) -> Self {
        Self {
            config,
            state: RwLock::new(State::new(config.psi)),
        }
    }

    pub fn config(&self) -> &CatalogConfig {
        &self.config
    }

    pub fn cycles(&self) -> usize {
        self.read().cycles()
    }

    fn read(&self) -> std::sync::RwLockReadGuard<'_, State> {
        self.state.read().unwrap_or_else(|e| e.into_inner())
    }

    fn write(&self) -> std::sync::RwLockWriteGuard<'_, State> {
        self.state.write().unwrap_or_else(|e| e.into_inner())
    }

    /// Makes sure cycles `1..=cycles` are generated.
    pub fn ensure_cycles(&self, cycles: usize) -> Result<()> {
        if self.read().cycles() >= cycles {
            return Ok(());
        }
        if cycles > self.config.max_cycles {
            return Err(Error::CatalogExhausted {
                t: f64::NAN,
                cap: self.config.max_cycles,
            });
        }
        self.write().extend_to(cycles)
    }

    /// Extends until the largest generated eigenvalue exceeds `t` (with the
    /// comparison tolerance). Because generation checks the global ordering,
    /// every eigenvalue not yet generated is then above `t`.
    fn ensure_covers(&self, t: f64) -> Result<()> {
        let bound = t * (1.0 + self.config.comparison_tol);
        let covered = |s: &State| s.lines.last().is_some_and(|l| l.value > bound);
        if covered(&self.read()) {
            return Ok(());
        }
        let mut state = self.write();
        while !covered(&state) {
            let have = state.cycles();
            if have >= self.config.max_cycles {
                return Err(Error::CatalogExhausted {
                    t,
                    cap: self.config.max_cycles,
                });
            }
            let want = (have * 2).max(16).min(self.config.max_cycles);
            state.extend_to(want)?;
        }
        Ok(())
    }

    /// `lambda^(p)_rank`.
    pub fn primitive(&self, generator: Generator, rank: u64) -> Result<f64> {
        if rank == 0 {
            return Err(Error::InvalidArgument("family ranks start at 1".into()));
        }
        if let Some(e) = self.read().families[family_slot(generator)].get(rank as usize) {
            return Ok(e.value);
        }
        self.write().primitive(generator, rank)
    }

    /// `lambda^(p)_rank` together with the sign word it descends along.
    pub fn primitive_member(&self, generator: Generator, rank: u64) -> Result<PrimitiveEigenvalue> {
        self.primitive(generator, rank)?;
        let state = self.read();
        Ok(*state.families[family_slot(generator)]
            .get(rank as usize)
            .expect("member generated above"))
    }

    /// `5^power * lambda^(p)_rank`.
    pub fn eigenvalue(&self, label: EigenLabel) -> Result<f64> {
        Ok(5f64.powi(label.power as i32) * self.primitive(label.generator, label.rank)?)
    }

    /// The ten rows of `C_k` in increasing order.
    pub fn cycle_rows(&self, k: u64) -> Result<[SpectralLine; ROWS_PER_CYCLE]> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "cycle index must be at least 1".into(),
            ));
        }
        self.ensure_cycles(k as usize)?;
        let state = self.read();
        let start = line_index(k, 1);
        let mut rows = [SpectralLine::zero(); ROWS_PER_CYCLE];
        rows.copy_from_slice(&state.lines[start..start + ROWS_PER_CYCLE]);
        Ok(rows)
    }

    /// The zero eigenvalue followed by cycles `C_1 ..= C_cycles`.
    pub fn spectrum(&self, cycles: usize) -> Result<Vec<SpectralLine>> {
        if cycles == 0 {
            return Err(Error::InvalidArgument("need at least one cycle".into()));
        }
        self.ensure_cycles(cycles)?;
        Ok(self.read().lines[..=cycles * ROWS_PER_CYCLE].to_vec())
    }

    /// Cumulative multiplicities through (and including) `row` of `C_cycle`.
    /// `cycle = 0` addresses the zero eigenvalue.
    pub fn totals_through(&self, cycle: u64, row: u8) -> Result<Totals> {
        if cycle == 0 {
            return Ok(self.read().totals[0]);
        }
        if !(1..=ROWS_PER_CYCLE as u8).contains(&row) {
            return Err(Error::InvalidArgument(format!("row {row} outside 1..=10")));
        }
        self.ensure_cycles(cycle as usize)?;
        Ok(self.read().totals[line_index(cycle, row)])
    }

    /// `(N_N(t), N_D(t), N~(t))`, inclusive at eigenvalues.
    pub fn count(&self, t: f64) -> Result<CountingResult> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "counting point must be finite and nonnegative, got {t}"
            )));
        }
        self.ensure_covers(t)?;
        let tol = self.config.comparison_tol;
        let state = self.read();
        let bound = t * (1.0 + tol);
        let idx = state.lines.partition_point(|l| l.value <= bound);
        let near = |i: usize| {
            state
                .lines
                .get(i)
                .is_some_and(|l| (l.value - t).abs() <= tol * t.max(l.value))
        };
        let at_eigenvalue = (idx > 0 && near(idx - 1)) || near(idx);
        // idx >= 1 always: the zero line satisfies 0 <= bound.
        let totals = state.totals[idx - 1];
        Ok(CountingResult {
            t,
            n_neumann: totals.n_neumann,
            n_dirichlet: totals.n_dirichlet,
            n_tilde: totals.n_tilde,
            at_eigenvalue,
        })
    }

    /// Cumulative `N_N - N_D` at each eigenvalue of `C_k`, accumulated from
    /// the zero eigenvalue.
    pub fn difference_profile(&self, k: u64) -> Result<[i64; ROWS_PER_CYCLE]> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "cycle index must be at least 1".into(),
            ));
        }
        self.ensure_cycles(k as usize)?;
        let state = self.read();
        let start = line_index(k, 1);
        let mut out = [0; ROWS_PER_CYCLE];
        for (o, t) in out
            .iter_mut()
            .zip(&state.totals[start..start + ROWS_PER_CYCLE])
        {
            *o = t.difference();
        }
        Ok(out)
    }

    /// Runs `f` over the generated lines without copying them.
    pub fn with_lines<R>(&self, f: impl FnOnce(&[SpectralLine]) -> R) -> R {
        f(&self.read().lines)
    }

    /// Writes `spectrum(cycles)` as `value,cycle,row,mult_N,mult_D,mult_tilde,label`.
    pub fn write_csv<W: Write>(&self, out: &mut W, cycles: usize) -> Result<()> {
        let lines = self.spectrum(cycles)?;
        Ok(write_lines_csv(out, &lines)?)
    }
}

pub fn write_lines_csv<W: Write>(out: &mut W, lines: &[SpectralLine]) -> io::Result<()> {
    export::record(
        out,
        &[
            "value",
            "cycle",
            "row",
            "mult_N",
            "mult_D",
            "mult_tilde",
            "label",
        ],
    )?;
    for l in lines {
        let label = l.label.map_or_else(|| "0".to_string(), |x| x.to_string());
        export::record(
            out,
            &[
                export::float(l.value),
                l.cycle.to_string(),
                l.row.to_string(),
                l.mult_neumann.to_string(),
                l.mult_dirichlet.to_string(),
                l.mult_tilde.to_string(),
                label,
            ],
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decimation::psi;

    #[test]
    fn decompose_examples() {
        let d = |k| {
            let c = decompose(k).unwrap();
            (c.j, c.ell)
        };
        assert_eq!(d(1), (0, 1));
        assert_eq!(d(6), (1, 2));
        assert_eq!(d(12), (2, 2));
        assert!(decompose(0).is_err());
        for k in 1..=4096u64 {
            let c = decompose(k).unwrap();
            assert_eq!(2u64.pow(c.j) * (2 * c.ell - 1), k);
        }
    }

    #[test]
    fn first_cycle_multiplicities() {
        let cat = Catalog::default();
        let rows = cat.cycle_rows(1).unwrap();
        let m: Vec<u64> = rows.iter().map(|r| r.mult_tilde).collect();
        assert_eq!(m, vec![1, 2, 2, 3, 2, 2, 1, 4, 9, 4]);
        assert_eq!(m.iter().sum::<u64>(), 30);
    }

    #[test]
    fn second_cycle_tail() {
        let cat = Catalog::default();
        let rows = cat.cycle_rows(2).unwrap();
        let tail: Vec<u64> = rows[7..].iter().map(|r| r.mult_tilde).collect();
        assert_eq!(tail, vec![10, 27, 10]);
        assert_eq!(rows[..9].iter().map(|r| r.mult_tilde).sum::<u64>(), 50);
    }

    #[test]
    fn row_relations_and_mass() {
        let cat = Catalog::default();
        for k in 1..=64u64 {
            let j = decompose(k).unwrap().j;
            let rows = cat.cycle_rows(k).unwrap();
            for r in &rows {
                assert_eq!(r.mult_tilde, r.mult_neumann + r.mult_dirichlet);
            }
            let mass: u64 = rows.iter().map(|r| r.mult_tilde).sum();
            assert_eq!(mass, 15 + 5 * 3u64.pow(j + 1), "k = {k}");
        }
    }

    #[test]
    fn spectrum_shape() {
        let cat = Catalog::default();
        let s = cat.spectrum(1).unwrap();
        assert_eq!(s.len(), 11);
        assert_eq!(s[0], SpectralLine::zero());
        assert!(cat.spectrum(0).is_err());
        let s = cat.spectrum(50).unwrap();
        assert!(s.windows(2).all(|w| w[0].value < w[1].value));
    }

    #[test]
    fn lemma_proof_anchors() {
        let cat = Catalog::default();
        assert_eq!(cat.totals_through(1, 9).unwrap().n_tilde, 27);
        assert_eq!(cat.totals_through(2, 9).unwrap().n_tilde, 81);
    }

    #[test]
    fn count_at_first_row_nine() {
        let cat = Catalog::default();
        let t = 25.0 * cat.primitive(Generator::Three, 1).unwrap();
        let c = cat.count(t).unwrap();
        assert_eq!((c.n_tilde, c.n_neumann, c.n_dirichlet), (27, 15, 12));
        assert!(c.at_eigenvalue);
    }

    #[test]
    fn count_below_first_eigenvalue() {
        let cat = Catalog::default();
        let c = cat.count(1e-9).unwrap();
        assert_eq!((c.n_neumann, c.n_dirichlet, c.n_tilde), (1, 0, 1));
        assert!(!c.at_eigenvalue);
        let first = 5.0 * psi(2.0).unwrap();
        let c = cat.count(first * 0.999).unwrap();
        assert_eq!(c.n_tilde, 1);
        assert!(cat.count(-1.0).is_err());
        assert!(cat.count(f64::INFINITY).is_err());
    }

    #[test]
    fn difference_profile_repeats() {
        let cat = Catalog::default();
        for k in 1..=64 {
            let p = cat.difference_profile(k).unwrap();
            assert_eq!(p, DIFFERENCE_PROFILE, "k = {k}");
        }
    }

    #[test]
    fn exhaustion_reported() {
        let cat = Catalog::new(CatalogConfig {
            max_cycles: 4,
            ..CatalogConfig::default()
        });
        assert!(matches!(
            cat.count(1e9),
            Err(Error::CatalogExhausted { cap: 4, .. })
        ));
        assert!(cat.cycle_rows(5).is_err());
        assert!(cat.cycle_rows(4).is_ok());
    }

    #[test]
    fn labels_render() {
        let cat = Catalog::default();
        let rows = cat.cycle_rows(2).unwrap();
        assert_eq!(rows[0].label.unwrap().to_string(), "lambda(2)_3");
        assert_eq!(rows[8].label.unwrap().to_string(), "5^3*lambda(3)_1");
        let mut buf = Vec::new();
        cat.write_csv(&mut buf, 1).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 12);
        assert_eq!(lines[0], "value,cycle,row,mult_N,mult_D,mult_tilde,label");
        assert!(lines[1].ends_with(",0,0,1,0,1,0"));
    }

    #[test]
    fn concurrent_readers_extend_consistently() {
        let cat = Catalog::default();
        let lemma_points: Vec<f64> = (0..8)
            .map(|i| 5f64.powi(i + 2) * psi(3.0).unwrap() * 5.0)
            .collect();
        let counts: Vec<Vec<u64>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..4)
                .map(|_| {
                    s.spawn(|| {
                        lemma_points
                            .iter()
                            .map(|&t| cat.count(t).unwrap().n_tilde)
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for c in &counts {
            assert_eq!(c, &counts[0]);
        }
        assert_eq!(counts[0][0], 27);
    }
}
