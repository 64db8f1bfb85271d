//! Brute-force oracle: the level-`m` graph approximations of the gasket and
//! its double cover, their dense Laplacian spectra, and the checks that tie
//! those spectra back to the decimation catalog.
//!
//! The Laplacian is the positive semidefinite `(L u)(x) = sum_{y~x} (u(x) - u(y))`,
//! so every spectrum sits in `[0, 6]` and consecutive levels are related by
//! `mu_{m-1} = mu_m (5 - mu_m)`.
//!
//! Boundary conditions on the gasket graph:
//!
//! - `Dirichlet` deletes the three boundary rows and columns.
//! - `Neumann` gives each boundary vertex half the mass of an interior one,
//!   i.e. diagonalizes `M^{-1/2} L M^{-1/2}` with `M = diag(1/2 on the
//!   boundary, 1 elsewhere)`. Even extension across the gluing then maps
//!   Neumann eigenvectors to double-cover eigenvectors with the same
//!   eigenvalue, exactly as on the fractal. The unweighted graph Laplacian
//!   does not have this property.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::catalog::Catalog;
use crate::decimation::{phi, psi, Sign};
use crate::eigen::{self, SymmetricEigen};
use crate::error::{Error, Result};
use crate::export;

pub const MAX_LEVEL: u32 = 6;
pub const GROUPING_TOL: f64 = 1e-8;
pub const CLOSURE_TOL: f64 = 1e-7;
/// Graph eigenvalues that are born at a level rather than descending from
/// the level below.
pub const INITIAL_VALUES: [f64; 3] = [2.0, 5.0, 6.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Space {
    Gasket,
    DoubleCover,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::Gasket => "gasket",
            Space::DoubleCover => "double-cover",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// Plain graph Laplacian.
    Free,
    Neumann,
    Dirichlet,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Free => "free",
            Condition::Neumann => "neumann",
            Condition::Dirichlet => "dirichlet",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphApprox {
    pub level: u32,
    pub space: Space,
    vertex_count: usize,
    /// Undirected, possibly repeated (the level-0 double cover doubles every
    /// edge of the triangle).
    edges: Vec<(usize, usize)>,
    boundary: Vec<usize>,
}

impl GraphApprox {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Empty for the double cover.
    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == self.vertex_count
    }

    /// Dense unweighted Laplacian.
    pub fn laplacian(&self) -> Vec<f64> {
        let n = self.vertex_count;
        let mut m = vec![0.0; n * n];
        for &(a, b) in &self.edges {
            m[a * n + a] += 1.0;
            m[b * n + b] += 1.0;
            m[a * n + b] -= 1.0;
            m[b * n + a] -= 1.0;
        }
        m
    }

    /// The symmetric operator diagonalized for `condition`, with its
    /// dimension.
    pub fn operator(&self, condition: Condition) -> Result<(Vec<f64>, usize)> {
        let n = self.vertex_count;
        let lap = self.laplacian();
        match (self.space, condition) {
            (_, Condition::Free) => Ok((lap, n)),
            (Space::DoubleCover, c) => Err(Error::InvalidArgument(format!(
                "{c} condition needs a boundary; the double cover has none"
            ))),
            (Space::Gasket, Condition::Neumann) => {
                let mut w = vec![1.0; n];
                for &b in &self.boundary {
                    w[b] = std::f64::consts::SQRT_2;
                }
                let mut m = lap;
                for i in 0..n {
                    for j in 0..n {
                        m[i * n + j] *= w[i] * w[j];
                    }
                }
                Ok((m, n))
            }
            (Space::Gasket, Condition::Dirichlet) => {
                let interior: Vec<usize> = (0..n).filter(|v| !self.boundary.contains(v)).collect();
                let k = interior.len();
                let mut m = vec![0.0; k * k];
                for (i, &a) in interior.iter().enumerate() {
                    for (j, &b) in interior.iter().enumerate() {
                        m[i * k + j] = lap[a * n + b];
                    }
                }
                Ok((m, k))
            }
        }
    }
}

/// Builds the level-`level` approximation by triple replication of the
/// triangle on the integer lattice of side `2^level`; the double cover glues
/// two copies along their three corners.
pub fn build_gamma(level: u32, space: Space) -> Result<GraphApprox> {
    if level > MAX_LEVEL {
        return Err(Error::LevelCap {
            level,
            cap: MAX_LEVEL,
        });
    }
    let side = 1u32 << level;
    let mut ids: HashMap<(u32, u32), usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut cells = vec![(0u32, 0u32, side)];
    while let Some((x, y, s)) = cells.pop() {
        if s == 1 {
            let mut id = |p: (u32, u32)| {
                let next = ids.len();
                *ids.entry(p).or_insert(next)
            };
            let a = id((x, y));
            let b = id((x + 1, y));
            let c = id((x, y + 1));
            edges.extend([(a, b), (b, c), (a, c)]);
        } else {
            let h = s / 2;
            // pushed in reverse so cells are visited in a fixed order
            cells.extend([(x, y + h, h), (x + h, y, h), (x, y, h)]);
        }
    }
    let boundary = vec![ids[&(0, 0)], ids[&(side, 0)], ids[&(0, side)]];
    let n = ids.len();

    match space {
        Space::Gasket => Ok(GraphApprox {
            level,
            space,
            vertex_count: n,
            edges,
            boundary,
        }),
        Space::DoubleCover => {
            let mut twin = vec![0; n];
            let mut next = n;
            for (v, slot) in twin.iter_mut().enumerate() {
                if boundary.contains(&v) {
                    *slot = v;
                } else {
                    *slot = next;
                    next += 1;
                }
            }
            let copy: Vec<(usize, usize)> =
                edges.iter().map(|&(a, b)| (twin[a], twin[b])).collect();
            edges.extend(copy);
            Ok(GraphApprox {
                level,
                space,
                vertex_count: next,
                edges,
                boundary: Vec::new(),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenGroup {
    pub value: f64,
    pub multiplicity: usize,
    /// Largest minus smallest member.
    pub spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSpectrum {
    pub level: u32,
    pub space: Space,
    pub condition: Condition,
    /// Ascending, with multiplicity.
    pub eigenvalues: Vec<f64>,
    pub groups: Vec<EigenGroup>,
    /// Worst `||L v - mu v|| / ||L||_F` over the sampled eigenpairs.
    pub max_relative_residual: f64,
    pub sweeps: usize,
}

impl GraphSpectrum {
    pub fn max_group_spread(&self) -> f64 {
        self.groups.iter().map(|g| g.spread).fold(0.0, f64::max)
    }

    /// Number of eigenvalues `<= t`.
    pub fn count(&self, t: f64) -> usize {
        self.eigenvalues.partition_point(|&x| x <= t)
    }
}

pub fn group_eigenvalues(sorted: &[f64], tol: f64) -> Vec<EigenGroup> {
    let mut groups: Vec<(f64, f64, usize, f64)> = Vec::new(); // (first, last, count, sum)
    for &x in sorted {
        match groups.last_mut() {
            Some(g) if x - g.1 <= tol => {
                g.1 = x;
                g.2 += 1;
                g.3 += x;
            }
            _ => groups.push((x, x, 1, x)),
        }
    }
    groups
        .into_iter()
        .map(|(first, last, count, sum)| EigenGroup {
            value: sum / count as f64,
            multiplicity: count,
            spread: last - first,
        })
        .collect()
}

/// Dense eigensolve of the graph operator under `condition`. Ten eigenpairs,
/// spread evenly through the spectrum, are residual-checked.
pub fn graph_spectrum(g: &GraphApprox, condition: Condition) -> Result<GraphSpectrum> {
    graph_spectrum_with(g, condition, GROUPING_TOL)
}

/// As [`graph_spectrum`] with an explicit multiplicity grouping tolerance.
pub fn graph_spectrum_with(
    g: &GraphApprox,
    condition: Condition,
    grouping_tol: f64,
) -> Result<GraphSpectrum> {
    if !(grouping_tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "grouping tolerance must be positive, got {grouping_tol}"
        )));
    }
    let (matrix, n) = g.operator(condition)?;
    let SymmetricEigen {
        values,
        vectors,
        sweeps,
        ..
    } = eigen::symmetric_eigen(&matrix, n, true)?;
    let norm = eigen::norm_bound(&matrix).max(f64::MIN_POSITIVE);
    let samples = n.min(10);
    let mut worst = 0.0_f64;
    for s in 0..samples {
        let i = if samples > 1 {
            s * (n - 1) / (samples - 1)
        } else {
            0
        };
        let r = eigen::residual(&matrix, n, values[i], &vectors[i * n..(i + 1) * n]);
        worst = worst.max(r / norm);
    }
    let groups = group_eigenvalues(&values, grouping_tol);
    Ok(GraphSpectrum {
        level: g.level,
        space: g.space,
        condition,
        eigenvalues: values,
        groups,
        max_relative_residual: worst,
        sweeps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ClosureStatus {
    Zero,
    /// Born at this level with one of the values 2, 5, 6.
    Initial,
    /// `mu (5 - mu)` is an eigenvalue one level down.
    Descends {
        parent: f64,
    },
    /// No level below to compare against.
    Unchecked,
    Failed {
        image: f64,
    },
}

impl ClosureStatus {
    pub fn passed(&self) -> bool {
        !matches!(self, ClosureStatus::Failed { .. })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            ClosureStatus::Zero => "zero",
            ClosureStatus::Initial => "initial",
            ClosureStatus::Descends { .. } => "descends",
            ClosureStatus::Unchecked => "unchecked",
            ClosureStatus::Failed { .. } => "FAILED",
        }
    }
}

/// Classifies every eigenvalue group of `upper` against the spectrum one
/// level below.
pub fn closure_statuses(
    upper: &GraphSpectrum,
    lower: Option<&GraphSpectrum>,
) -> Vec<ClosureStatus> {
    upper
        .groups
        .iter()
        .map(|g| {
            let mu = g.value;
            if mu.abs() <= GROUPING_TOL {
                return ClosureStatus::Zero;
            }
            if INITIAL_VALUES
                .iter()
                .any(|&v| (mu - v).abs() <= GROUPING_TOL)
            {
                return ClosureStatus::Initial;
            }
            let Some(lower) = lower else {
                return ClosureStatus::Unchecked;
            };
            let image = mu * (5.0 - mu);
            let i = lower
                .eigenvalues
                .partition_point(|&x| x < image - CLOSURE_TOL);
            match lower.eigenvalues.get(i) {
                Some(&p) if (p - image).abs() <= CLOSURE_TOL => {
                    ClosureStatus::Descends { parent: p }
                }
                _ => ClosureStatus::Failed { image },
            }
        })
        .collect()
}

/// The fractal eigenvalue a level-`level` graph eigenvalue continues to.
///
/// Values in `[0, 5]` continue along the lower branch, giving
/// `5^level psi(mu)`. The value 6 has no lower-branch continuation; it
/// continues through `phi_plus(6) = 3` at the next level, giving
/// `5^(level+1) psi(3)`.
pub fn fractal_image(level: u32, mu: f64) -> Result<f64> {
    let scale = 5f64.powi(level as i32);
    if (mu - 6.0).abs() <= GROUPING_TOL {
        return Ok(5.0 * scale * psi(phi(Sign::Plus, 6.0)?)?);
    }
    if mu <= 5.0 + GROUPING_TOL {
        return Ok(scale * psi(mu.clamp(0.0, 5.0))?);
    }
    Err(Error::InvalidArgument(format!(
        "graph eigenvalue {mu} at level {level} lies strictly between 5 and 6"
    )))
}

/// Renormalized limit of a graph eigenvalue sequence observed at consecutive
/// levels `start_level, start_level + 1, ...`.
///
/// Each step must follow the lower branch (`mu_{k+1} = phi_minus(mu_k)` to
/// within `CLOSURE_TOL` relative). The tail beyond the last observed level is
/// summed by `psi`, so the estimate is exact up to eigensolver error.
pub fn fractal_limit_estimate(start_level: u32, mus: &[f64]) -> Result<f64> {
    let Some(&last) = mus.last() else {
        return Err(Error::InvalidArgument("empty eigenvalue sequence".into()));
    };
    for (i, w) in mus.windows(2).enumerate() {
        let expect = phi(Sign::Minus, w[0])?;
        if (w[1] - expect).abs() > CLOSURE_TOL * expect.abs().max(f64::MIN_POSITIVE) {
            return Err(Error::NotDecimationConsistent {
                index: i + 1,
                detail: format!("{} is not phi_minus({}) = {expect}", w[1], w[0]),
            });
        }
    }
    let level = start_level + mus.len() as u32 - 1;
    Ok(5f64.powi(level as i32) * psi(last.clamp(0.0, 5.0))?)
}

/// Comparison of one graph spectrum with the catalog below
/// `5^(level+1) psi(3)`, the image of the top graph eigenvalue 6.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogAgreement {
    pub level: u32,
    pub condition: Condition,
    pub threshold: f64,
    pub graph_count: usize,
    pub catalog_count: u64,
    /// Worst relative gap between the sorted fractal images of the graph
    /// eigenvalues and the catalog eigenvalues (with multiplicity); infinite
    /// when the counts differ.
    pub max_relative_gap: f64,
}

impl CatalogAgreement {
    pub fn passed(&self, tol: f64) -> bool {
        self.graph_count as u64 == self.catalog_count && self.max_relative_gap <= tol
    }
}

pub fn catalog_agreement(catalog: &Catalog, spectrum: &GraphSpectrum) -> Result<CatalogAgreement> {
    let level = spectrum.level;
    let threshold = 5f64.powi(level as i32 + 1) * psi(3.0)?;
    let mult: fn(&crate::catalog::SpectralLine) -> u64 = match (spectrum.space, spectrum.condition)
    {
        (Space::DoubleCover, Condition::Free) => |l| l.mult_tilde,
        (Space::Gasket, Condition::Neumann) => |l| l.mult_neumann,
        (Space::Gasket, Condition::Dirichlet) => |l| l.mult_dirichlet,
        (space, condition) => {
            return Err(Error::InvalidArgument(format!(
                "no catalog counterpart for {space} with {condition} condition"
            )))
        }
    };
    let counted = catalog.count(threshold)?;
    let tol = catalog.config().comparison_tol;
    let catalog_values: Vec<f64> = catalog.with_lines(|lines| {
        lines
            .iter()
            .take_while(|l| l.value <= threshold * (1.0 + tol))
            .flat_map(|l| std::iter::repeat_n(l.value, mult(l) as usize))
            .collect()
    });
    let mut images = spectrum
        .eigenvalues
        .iter()
        .map(|&mu| fractal_image(level, mu))
        .collect::<Result<Vec<_>>>()?;
    images.sort_by(f64::total_cmp);

    let max_relative_gap = if images.len() == catalog_values.len() {
        images
            .iter()
            .zip(&catalog_values)
            .map(|(a, b)| {
                if *b == 0.0 {
                    a.abs()
                } else {
                    (a - b).abs() / b
                }
            })
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let catalog_count = match spectrum.condition {
        Condition::Free => counted.n_tilde,
        Condition::Neumann => counted.n_neumann,
        Condition::Dirichlet => counted.n_dirichlet,
    };
    Ok(CatalogAgreement {
        level,
        condition: spectrum.condition,
        threshold,
        graph_count: images.len(),
        catalog_count,
        max_relative_gap,
    })
}

/// Per-level summary of the decimation structure of the double cover and
/// its Neumann/Dirichlet halves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelClosure {
    pub level: u32,
    pub vertex_count: usize,
    pub eigen_count: usize,
    pub groups: Vec<(EigenGroup, ClosureStatus)>,
    pub closure_passed: bool,
    pub neumann_count: usize,
    pub dirichlet_count: usize,
    /// Neumann and Dirichlet spectra together equal the double-cover
    /// spectrum (with multiplicity, within the grouping tolerance).
    pub union_matches: bool,
    /// Largest and smallest `N_N(t) - N_D(t)` over all eigenvalue thresholds.
    pub nd_difference_range: (i64, i64),
    pub max_relative_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub levels: Vec<LevelClosure>,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.levels.iter().all(|l| {
            l.closure_passed
                && l.union_matches
                && l.nd_difference_range.0 >= 0
                && l.nd_difference_range.1 <= 3
                && l.eigen_count == l.vertex_count
        })
    }
}

/// Spectra for levels `0..=m_max` of the double cover (free) and the gasket
/// (Neumann, Dirichlet).
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSpectra {
    pub double_cover: GraphSpectrum,
    pub neumann: GraphSpectrum,
    pub dirichlet: GraphSpectrum,
    pub vertex_count: usize,
}

pub fn level_spectra(level: u32) -> Result<LevelSpectra> {
    let dc = build_gamma(level, Space::DoubleCover)?;
    let sg = build_gamma(level, Space::Gasket)?;
    Ok(LevelSpectra {
        double_cover: graph_spectrum(&dc, Condition::Free)?,
        neumann: graph_spectrum(&sg, Condition::Neumann)?,
        dirichlet: graph_spectrum(&sg, Condition::Dirichlet)?,
        vertex_count: dc.vertex_count(),
    })
}

fn multiset_eq(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn nd_range(neumann: &GraphSpectrum, dirichlet: &GraphSpectrum) -> (i64, i64) {
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    for &t in neumann.eigenvalues.iter().chain(&dirichlet.eigenvalues) {
        let d = neumann.count(t + GROUPING_TOL) as i64 - dirichlet.count(t + GROUPING_TOL) as i64;
        lo = lo.min(d);
        hi = hi.max(d);
    }
    (lo, hi)
}

pub fn summarize_level(current: &LevelSpectra, previous: Option<&LevelSpectra>) -> LevelClosure {
    let dc = &current.double_cover;
    let statuses = closure_statuses(dc, previous.map(|p| &p.double_cover));
    let mut union: Vec<f64> = current
        .neumann
        .eigenvalues
        .iter()
        .chain(&current.dirichlet.eigenvalues)
        .copied()
        .collect();
    union.sort_by(f64::total_cmp);
    LevelClosure {
        level: dc.level,
        vertex_count: current.vertex_count,
        eigen_count: dc.eigenvalues.len(),
        closure_passed: statuses.iter().all(ClosureStatus::passed),
        groups: dc.groups.iter().copied().zip(statuses).collect(),
        neumann_count: current.neumann.eigenvalues.len(),
        dirichlet_count: current.dirichlet.eigenvalues.len(),
        union_matches: multiset_eq(&union, &dc.eigenvalues, GROUPING_TOL),
        nd_difference_range: nd_range(&current.neumann, &current.dirichlet),
        max_relative_residual: [&current.double_cover, &current.neumann, &current.dirichlet]
            .iter()
            .map(|s| s.max_relative_residual)
            .fold(0.0, f64::max),
    }
}

/// Runs the closure test on levels `1..=m_max` (level 0 is computed as the
/// base of the recursion).
pub fn decimation_closure_report(m_max: u32) -> Result<ClosureReport> {
    if m_max > MAX_LEVEL {
        return Err(Error::LevelCap {
            level: m_max,
            cap: MAX_LEVEL,
        });
    }
    let mut levels = Vec::new();
    let mut previous = level_spectra(0)?;
    for level in 1..=m_max {
        let current = level_spectra(level)?;
        levels.push(summarize_level(&current, Some(&previous)));
        previous = current;
    }
    Ok(ClosureReport { levels })
}

/// Writes `level,space,condition,eigenvalue,multiplicity,closure-status`.
pub fn write_spectrum_csv<W: Write>(
    out: &mut W,
    rows: &[(&GraphSpectrum, Vec<ClosureStatus>)],
) -> std::io::Result<()> {
    export::record(
        out,
        &[
            "level",
            "space",
            "condition",
            "eigenvalue",
            "multiplicity",
            "closure-status",
        ],
    )?;
    for (spectrum, statuses) in rows {
        for (g, status) in spectrum.groups.iter().zip(statuses) {
            export::record(
                out,
                &[
                    spectrum.level.to_string(),
                    spectrum.space.to_string(),
                    spectrum.condition.to_string(),
                    export::float(g.value),
                    g.multiplicity.to_string(),
                    status.tag().to_string(),
                ],
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_counts_and_degrees() {
        for m in 0..=5u32 {
            let dc = build_gamma(m, Space::DoubleCover).unwrap();
            assert_eq!(dc.vertex_count(), 3usize.pow(m + 1));
            assert!(dc.degrees().iter().all(|&d| d == 4));
            assert!(dc.boundary().is_empty());
            assert!(dc.is_connected());

            let sg = build_gamma(m, Space::Gasket).unwrap();
            assert_eq!(sg.vertex_count(), (3usize.pow(m + 1) + 3) / 2);
            for (v, d) in sg.degrees().into_iter().enumerate() {
                let want = if sg.boundary().contains(&v) { 2 } else { 4 };
                assert_eq!(d, want);
            }
            assert_eq!(sg.boundary().len(), 3);
            assert!(sg.is_connected());
        }
        assert_eq!(
            build_gamma(1, Space::DoubleCover).unwrap().vertex_count(),
            9
        );
        assert_eq!(build_gamma(1, Space::Gasket).unwrap().vertex_count(), 6);
        assert!(matches!(
            build_gamma(7, Space::Gasket),
            Err(Error::LevelCap { level: 7, cap: 6 })
        ));
    }

    #[test]
    fn level_one_spectrum() {
        let g = build_gamma(1, Space::DoubleCover).unwrap();
        let s = graph_spectrum(&g, Condition::Free).unwrap();
        let got: Vec<(i64, usize)> = s
            .groups
            .iter()
            .map(|g| (g.value.round() as i64, g.multiplicity))
            .collect();
        assert_eq!(got, vec![(0, 1), (2, 1), (3, 2), (5, 2), (6, 3)]);
        assert!(s.eigenvalues[0].abs() < 1e-12);
        assert!(s.max_relative_residual < 1e-12);
    }

    #[test]
    fn boundary_conditions_need_a_boundary() {
        let g = build_gamma(1, Space::DoubleCover).unwrap();
        assert!(g.operator(Condition::Neumann).is_err());
        assert!(g.operator(Condition::Dirichlet).is_err());
        let sg = build_gamma(2, Space::Gasket).unwrap();
        assert_eq!(
            sg.operator(Condition::Dirichlet).unwrap().1,
            sg.vertex_count() - 3
        );
    }

    #[test]
    fn neumann_and_dirichlet_make_up_the_cover() {
        let prev = level_spectra(1).unwrap();
        let cur = level_spectra(2).unwrap();
        let summary = summarize_level(&cur, Some(&prev));
        assert!(summary.union_matches);
        assert!(summary.closure_passed);
        assert_eq!(summary.nd_difference_range, (0, 3));
        assert_eq!(summary.neumann_count - summary.dirichlet_count, 3);
    }

    #[test]
    fn unweighted_neumann_breaks_the_union() {
        let sg = build_gamma(2, Space::Gasket).unwrap();
        let dc = graph_spectrum(
            &build_gamma(2, Space::DoubleCover).unwrap(),
            Condition::Free,
        )
        .unwrap();
        let plain = graph_spectrum(&sg, Condition::Free).unwrap();
        let dir = graph_spectrum(&sg, Condition::Dirichlet).unwrap();
        let mut union: Vec<f64> = plain
            .eigenvalues
            .iter()
            .chain(&dir.eigenvalues)
            .copied()
            .collect();
        union.sort_by(f64::total_cmp);
        assert!(!multiset_eq(&union, &dc.eigenvalues, GROUPING_TOL));
    }

    #[test]
    fn limit_of_lower_branch_sequence() {
        let mut mus = vec![3.0];
        for _ in 0..3 {
            mus.push(phi(Sign::Minus, *mus.last().unwrap()).unwrap());
        }
        let direct = 5.0 * psi(3.0).unwrap();
        let est = fractal_limit_estimate(1, &mus).unwrap();
        assert!((est - direct).abs() / direct < 1e-12);
        assert!((fractal_limit_estimate(1, &[3.0]).unwrap() - direct).abs() / direct < 1e-15);
        assert!(matches!(
            fractal_limit_estimate(1, &[3.0, 3.0]),
            Err(Error::NotDecimationConsistent { index: 1, .. })
        ));
        assert!(fractal_limit_estimate(1, &[]).is_err());
    }

    #[test]
    fn image_of_six_and_forbidden_gap() {
        let a = fractal_image(2, 6.0).unwrap();
        assert!((a - 125.0 * psi(3.0).unwrap()).abs() / a < 1e-14);
        assert!(fractal_image(2, 5.5).is_err());
    }

    #[test]
    fn grouping() {
        let g = group_eigenvalues(&[0.0, 1.0, 1.0 + 1e-9, 2.0], 1e-8);
        assert_eq!(g.len(), 3);
        assert_eq!(g[1].multiplicity, 2);
        assert!(g[1].spread < 2e-9);
    }

    #[test]
    fn spectrum_dump_format() {
        let s = graph_spectrum(
            &build_gamma(1, Space::DoubleCover).unwrap(),
            Condition::Free,
        )
        .unwrap();
        let statuses = closure_statuses(&s, None);
        let mut buf = Vec::new();
        write_spectrum_csv(&mut buf, &[(&s, statuses)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "level,space,condition,eigenvalue,multiplicity,closure-status"
        );
        assert_eq!(lines.len(), 6);
        assert!(lines[1].ends_with(",1,zero"));
        assert!(lines[2].ends_with(",1,initial"));
        assert!(lines[3].ends_with(",2,unchecked"));
    }
}
