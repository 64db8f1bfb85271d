//! `sgweyl`: spectra, counting functions, exact Weyl checks and the
//! graph oracle for the Sierpinski gasket and its double cover.

mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sierpinski_weyl::catalog::{write_lines_csv, EigenLabel};
use sierpinski_weyl::decimation::primitive_list;
use sierpinski_weyl::export::{float, record};
use sierpinski_weyl::graph::{self, ClosureStatus, Condition, GraphSpectrum};
use sierpinski_weyl::julia::{self, Classification};
use sierpinski_weyl::verify::{self, Suite, SuiteReport};
use sierpinski_weyl::weyl::{self, Locator, Membership};
use sierpinski_weyl::{Catalog, Generator};

use crate::config::{Format, RunConfig};
use crate::output::{sink, write_json};

#[derive(Parser, Debug)]
#[command(
    name = "sgweyl",
    version,
    about = "Spectral decimation and exact Weyl counting on the Sierpinski gasket"
)]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write `<dir>/<command>.<ext>` instead of standard output.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    psi_tol: Option<f64>,
    #[arg(long, global = true)]
    comparison_tol: Option<f64>,
    #[arg(long, global = true)]
    max_cycles: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Primitive eigenvalue families or the cycle catalog.
    Eigs(EigsArgs),
    /// Counting functions (N_N, N_D, N~) at a point.
    Count(CountArgs),
    /// Run a verification suite; exits 1 if any check fails.
    Verify(VerifyArgs),
    /// Weyl-ratio scan, or the exactness check at one point.
    Weyl(WeylArgs),
    /// Gap intervals and the cover of the exceptional set.
    Julia {
        #[command(subcommand)]
        command: JuliaCommand,
    },
    /// Graph-approximation spectra with the closure report.
    Oracle(OracleArgs),
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("what").required(true).args(["family", "all_families", "cycles"])))]
struct EigsArgs {
    /// Generator of the family: 2, 3 or 5.
    #[arg(long)]
    family: Option<u8>,
    #[arg(long)]
    all_families: bool,
    /// Members per family.
    #[arg(long, default_value_t = 8)]
    count: usize,
    /// The zero eigenvalue followed by cycles C_1 ..= C_K.
    #[arg(long)]
    cycles: Option<usize>,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("point").required(true).args(["t", "at_eigenvalue"])))]
struct CountArgs {
    t: Option<f64>,
    /// Evaluate at `5^power * lambda^(p)_n`, given as `p,n`.
    #[arg(long, value_name = "P,N")]
    at_eigenvalue: Option<String>,
    #[arg(long, default_value_t = 0, requires = "at_eigenvalue")]
    power: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Identities,
    Lemma,
    Theorem,
    Table,
    Julia,
    Oracle,
    All,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: SuiteArg,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    n_max: Option<u64>,
    #[arg(long)]
    j_max: Option<u32>,
    #[arg(long)]
    k_max: Option<u64>,
    #[arg(long)]
    l_max: Option<usize>,
    /// Scales `n` run over `-scale..=scale`.
    #[arg(long)]
    scale: Option<i32>,
    #[arg(long)]
    m_max: Option<u32>,
    /// Depth of the cover-measure run.
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long)]
    exhaustion_depth: Option<u32>,
    /// Highest graph level for the oracle suite.
    #[arg(long)]
    level: Option<u32>,
}

#[derive(Args, Debug)]
struct WeylArgs {
    #[arg(long, default_value_t = 1.0)]
    t_lo: f64,
    #[arg(long, default_value_t = 15625.0)]
    t_hi: f64,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Largest interval index searched by the locator.
    #[arg(long)]
    l_max: Option<usize>,
    /// Locate this point and check the exact counts at `5^m t`.
    #[arg(long)]
    at: Option<f64>,
    #[arg(long, default_value_t = 6)]
    m_max: u32,
}

#[derive(Subcommand, Debug)]
enum JuliaCommand {
    /// The `2^depth` intervals `phi_delta([0, 5])`.
    Cover {
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Total cover length at each depth, with the derivative bound.
    Measure {
        #[arg(long, default_value_t = 20)]
        depth: u32,
    },
    /// Gap intervals `B_1 ..= B_{2^depth - 1}`.
    Gaps {
        #[arg(long)]
        depth: Option<u32>,
        /// Sort left to right instead of by index.
        #[arg(long)]
        by_position: bool,
    },
    /// Gap or residual cover interval containing `t`.
    Classify {
        t: f64,
        #[arg(long, default_value_t = 20)]
        depth: u32,
    },
    /// Match the interval pairs against gaps pushed through `5^e psi`.
    Correspondence {
        #[arg(long, default_value_t = 32)]
        l_max: u64,
    },
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    level: Option<u32>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// A reader such as `head` closed standard output early.
fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<std::io::Error>()
            .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
    })
}

fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(d) = &cli.output_dir {
        cfg.output_dir = Some(d.clone());
    }
    if let Some(x) = cli.psi_tol {
        cfg.psi_tol = x;
    }
    if let Some(x) = cli.comparison_tol {
        cfg.comparison_tol = x;
    }
    if let Some(x) = cli.max_cycles {
        cfg.max_cycles = x;
    }
    match &cli.command {
        Command::Verify(a) => {
            let v = &mut cfg.verify;
            let set = |slot: &mut u32, x: Option<u32>| {
                if let Some(x) = x {
                    *slot = x;
                }
            };
            v.samples = a.samples.unwrap_or(v.samples);
            v.n_max = a.n_max.unwrap_or(v.n_max);
            v.k_max = a.k_max.unwrap_or(v.k_max);
            v.l_max = a.l_max.unwrap_or(v.l_max);
            v.scale = a.scale.unwrap_or(v.scale);
            set(&mut v.j_max, a.j_max);
            set(&mut v.m_max, a.m_max);
            set(&mut v.julia_depth, a.depth);
            set(&mut v.exhaustion_depth, a.exhaustion_depth);
            set(&mut v.oracle_level, a.level);
        }
        Command::Weyl(a) => cfg.l_max = a.l_max.unwrap_or(cfg.l_max),
        Command::Oracle(a) => cfg.oracle_level = a.level.unwrap_or(cfg.oracle_level),
        Command::Julia {
            command:
                JuliaCommand::Cover { depth: Some(d) } | JuliaCommand::Gaps { depth: Some(d), .. },
        } => cfg.cover_depth = *d,
        _ => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = resolve_config(&cli)?;
    let catalog = Catalog::new(cfg.catalog_config());
    match cli.command {
        Command::Eigs(a) => eigs(&cfg, &catalog, a),
        Command::Count(a) => count(&cfg, &catalog, a),
        Command::Verify(a) => verify_cmd(&cfg, &catalog, a.suite),
        Command::Weyl(a) => weyl_cmd(&cfg, &catalog, a),
        Command::Julia { command } => julia_cmd(&cfg, &catalog, command),
        Command::Oracle(_) => oracle(&cfg, &catalog),
    }
}

#[derive(Serialize)]
struct FamilyRow {
    family: u8,
    rank: usize,
    word: String,
    value: f64,
}

fn eigs(cfg: &RunConfig, catalog: &Catalog, a: EigsArgs) -> Result<bool> {
    let mut out = sink(cfg, "eigs")?;
    if let Some(k) = a.cycles {
        let lines = catalog.spectrum(k)?;
        match cfg.format {
            Format::Csv => write_lines_csv(&mut out, &lines)?,
            Format::Json => write_json(&mut out, &lines)?,
        }
        out.flush()?;
        return Ok(true);
    }
    let families = match a.family {
        Some(p) => vec![Generator::try_from(p)?],
        None => Generator::ALL.to_vec(),
    };
    let mut rows = Vec::new();
    for g in families {
        for e in primitive_list(g, a.count)? {
            rows.push(FamilyRow {
                family: g.as_u8(),
                rank: e.rank,
                word: e.word.to_string(),
                value: e.value,
            });
        }
    }
    match cfg.format {
        Format::Csv => {
            record(&mut out, &["family", "rank", "word", "value"])?;
            for r in &rows {
                record(
                    &mut out,
                    &[
                        r.family.to_string(),
                        r.rank.to_string(),
                        r.word.clone(),
                        float(r.value),
                    ],
                )?;
            }
        }
        Format::Json => write_json(&mut out, &rows)?,
    }
    out.flush()?;
    Ok(true)
}

fn parse_label(text: &str, power: u32) -> Result<EigenLabel> {
    let (p, n) = text
        .split_once(',')
        .with_context(|| format!("expected P,N, got {text:?}"))?;
    let generator = Generator::try_from(p.trim().parse::<u8>().context("family generator")?)?;
    let rank: u64 = n.trim().parse().context("rank")?;
    Ok(EigenLabel {
        generator,
        rank,
        power,
    })
}

fn count(cfg: &RunConfig, catalog: &Catalog, a: CountArgs) -> Result<bool> {
    let t = match (&a.at_eigenvalue, a.t) {
        (Some(label), _) => catalog.eigenvalue(parse_label(label, a.power)?)?,
        (None, Some(t)) => t,
        (None, None) => bail!("give a point or --at-eigenvalue"),
    };
    let c = catalog.count(t)?;
    let mut out = sink(cfg, "count")?;
    match cfg.format {
        Format::Csv => {
            record(
                &mut out,
                &["t", "n_neumann", "n_dirichlet", "n_tilde", "at_eigenvalue"],
            )?;
            record(
                &mut out,
                &[
                    float(c.t),
                    c.n_neumann.to_string(),
                    c.n_dirichlet.to_string(),
                    c.n_tilde.to_string(),
                    c.at_eigenvalue.to_string(),
                ],
            )?;
        }
        Format::Json => write_json(&mut out, &c)?,
    }
    out.flush()?;
    Ok(true)
}

fn report_summary(report: &SuiteReport) {
    let total = report.checks.len();
    let passed = report.checks.iter().filter(|c| c.passed).count();
    eprintln!("suite {}: {passed}/{total} checks passed", report.suite);
    for (name, ok, n) in report.tally() {
        eprintln!("  {name}: {ok}/{n}");
    }
    for c in report.failures() {
        eprintln!(
            "  FAILED {} [{}] at {}: expected {}, got {}",
            c.name, c.identity, c.inputs, c.expected, c.actual
        );
    }
}

fn verify_cmd(cfg: &RunConfig, catalog: &Catalog, suite: SuiteArg) -> Result<bool> {
    let suites: Vec<Suite> = match suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::Identities => vec![Suite::Identities],
        SuiteArg::Lemma => vec![Suite::Lemma],
        SuiteArg::Theorem => vec![Suite::Theorem],
        SuiteArg::Table => vec![Suite::Table],
        SuiteArg::Julia => vec![Suite::Julia],
        SuiteArg::Oracle => vec![Suite::Oracle],
    };
    // Suites run concurrently; reports are assembled in suite order.
    let reports = std::thread::scope(|scope| {
        let handles: Vec<_> = suites
            .iter()
            .map(|&s| scope.spawn(move || verify::run(s, &cfg.verify, catalog)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verification thread panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?;
    for r in &reports {
        report_summary(r);
    }
    let mut out = sink(cfg, "verify")?;
    match cfg.format {
        Format::Csv => {
            record(
                &mut out,
                &[
                    "suite", "check", "identity", "inputs", "expected", "actual", "passed",
                ],
            )?;
            for r in &reports {
                for c in &r.checks {
                    record(
                        &mut out,
                        &[
                            r.suite.to_string(),
                            c.name.clone(),
                            csv_field(&c.identity),
                            csv_field(&c.inputs),
                            csv_field(&c.expected),
                            csv_field(&c.actual),
                            c.passed.to_string(),
                        ],
                    )?;
                }
            }
        }
        Format::Json => write_json(&mut out, &reports)?,
    }
    out.flush()?;
    Ok(reports.iter().all(SuiteReport::passed))
}

/// Quotes a field holding commas or quotes.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Serialize)]
struct LocateReport {
    t: f64,
    membership: Membership,
    g: Option<f64>,
    g1: Option<f64>,
    rows: Vec<weyl::TheoremRow>,
    passed: bool,
}

fn weyl_cmd(cfg: &RunConfig, catalog: &Catalog, a: WeylArgs) -> Result<bool> {
    let locator = Locator::new(catalog, cfg.l_max)?;
    let mut out = sink(cfg, "weyl")?;
    let Some(t) = a.at else {
        let samples = locator.weyl_ratio_scan(catalog, a.t_lo, a.t_hi, a.samples)?;
        match cfg.format {
            Format::Csv => weyl::write_scan_csv(&mut out, &samples)?,
            Format::Json => write_json(&mut out, &samples)?,
        }
        out.flush()?;
        return Ok(true);
    };

    let membership = locator.locate(t)?;
    let report = match membership.interval() {
        Some(iv) => {
            let m_max = a.m_max.max(iv.m0);
            let theorem = locator.verify_theorem(catalog, t, m_max)?;
            LocateReport {
                t,
                membership,
                g: Some(iv.g(t)),
                g1: Some(iv.g1()),
                passed: theorem.passed(),
                rows: theorem.rows,
            }
        }
        None => LocateReport {
            t,
            membership,
            g: None,
            g1: None,
            rows: Vec::new(),
            passed: true,
        },
    };
    match cfg.format {
        Format::Csv => {
            record(
                &mut out,
                &[
                    "t",
                    "kind",
                    "ell",
                    "n",
                    "m0",
                    "G",
                    "G1",
                    "m",
                    "n_tilde",
                    "expected_tilde",
                    "n_neumann",
                    "n_dirichlet",
                    "difference",
                    "expected_difference",
                    "passed",
                ],
            )?;
            match membership.interval() {
                None => record(&mut out, &[float(t), "none".to_string()])?,
                Some(iv) => {
                    for r in &report.rows {
                        record(
                            &mut out,
                            &[
                                float(t),
                                iv.kind.to_string(),
                                iv.ell.to_string(),
                                iv.scale_n.to_string(),
                                iv.m0.to_string(),
                                float(iv.g(t)),
                                float(iv.g1()),
                                r.m.to_string(),
                                r.n_tilde.to_string(),
                                r.expected_tilde.to_string(),
                                r.n_neumann.to_string(),
                                r.n_dirichlet.to_string(),
                                r.difference.to_string(),
                                r.expected_difference.to_string(),
                                r.passed.to_string(),
                            ],
                        )?;
                    }
                }
            }
        }
        Format::Json => write_json(&mut out, &report)?,
    }
    out.flush()?;
    if membership.interval().is_none() {
        eprintln!("t = {t} is not located with l <= {}", cfg.l_max);
    }
    Ok(report.passed)
}

#[derive(Serialize)]
struct MeasureRow {
    depth: u32,
    measure: f64,
    bound: f64,
    ratio: Option<f64>,
}

fn julia_cmd(cfg: &RunConfig, catalog: &Catalog, command: JuliaCommand) -> Result<bool> {
    let mut ok = true;
    match command {
        JuliaCommand::Cover { .. } => {
            let depth = cfg.cover_depth;
            let cover = julia::cover(depth)?;
            let mut out = sink(cfg, "julia-cover")?;
            match cfg.format {
                Format::Csv => julia::write_cover_csv(&mut out, depth, &cover)?,
                Format::Json => write_json(&mut out, &cover)?,
            }
            out.flush()?;
        }
        JuliaCommand::Measure { depth } => {
            let measures = julia::cover_measures(depth)?;
            let rows: Vec<MeasureRow> = measures
                .iter()
                .enumerate()
                .map(|(m, &x)| MeasureRow {
                    depth: m as u32,
                    measure: x,
                    bound: julia::cover_measure_bound(m as u32),
                    ratio: (m > 0).then(|| x / measures[m - 1]),
                })
                .collect();
            ok = rows.iter().all(|r| r.measure <= r.bound);
            let mut out = sink(cfg, "julia-measure")?;
            match cfg.format {
                Format::Csv => {
                    record(&mut out, &["depth", "measure", "bound", "ratio"])?;
                    for r in &rows {
                        record(
                            &mut out,
                            &[
                                r.depth.to_string(),
                                float(r.measure),
                                float(r.bound),
                                r.ratio.map(float).unwrap_or_default(),
                            ],
                        )?;
                    }
                }
                Format::Json => write_json(&mut out, &rows)?,
            }
            out.flush()?;
        }
        JuliaCommand::Gaps { by_position, .. } => {
            let depth = cfg.cover_depth;
            let gaps = if by_position {
                julia::b_intervals_by_position(depth)?
            } else {
                julia::b_intervals(depth)?
            };
            let mut out = sink(cfg, "julia-gaps")?;
            match cfg.format {
                Format::Csv => {
                    record(&mut out, &["index", "word", "lo", "hi", "length"])?;
                    for g in &gaps {
                        record(
                            &mut out,
                            &[
                                g.index.to_string(),
                                g.word.to_string(),
                                float(g.interval.lo),
                                float(g.interval.hi),
                                float(g.interval.length),
                            ],
                        )?;
                    }
                }
                Format::Json => write_json(&mut out, &gaps)?,
            }
            out.flush()?;
        }
        JuliaCommand::Classify { t, depth } => {
            let c = julia::classify(t, depth)?;
            let mut out = sink(cfg, "julia-classify")?;
            match cfg.format {
                Format::Csv => {
                    record(
                        &mut out,
                        &["t", "depth", "result", "index", "word", "lo", "hi"],
                    )?;
                    let (result, index, word, iv) = match c {
                        Classification::Gap { index, interval } => (
                            "gap",
                            index.to_string(),
                            julia::gap_word(index)?.to_string(),
                            interval,
                        ),
                        Classification::Residual { word, interval } => {
                            ("residual", String::new(), word.to_string(), interval)
                        }
                    };
                    record(
                        &mut out,
                        &[
                            float(t),
                            depth.to_string(),
                            result.to_string(),
                            index,
                            word,
                            float(iv.lo),
                            float(iv.hi),
                        ],
                    )?;
                }
                Format::Json => write_json(&mut out, &c)?,
            }
            out.flush()?;
        }
        JuliaCommand::Correspondence { l_max } => {
            let tol = cfg.verify.correspondence_tol;
            let rows = (1..=l_max)
                .map(|l| julia::correspondence(catalog, l))
                .collect::<Result<Vec<_>, _>>()?;
            ok = rows.iter().all(|c| c.passed(tol));
            let mut out = sink(cfg, "julia-correspondence")?;
            match cfg.format {
                Format::Csv => {
                    record(
                        &mut out,
                        &[
                            "ell",
                            "gap_index",
                            "exponent",
                            "lower_word",
                            "upper_word",
                            "lo",
                            "hi",
                            "image_lo",
                            "image_hi",
                            "max_relative_error",
                            "passed",
                        ],
                    )?;
                    for c in &rows {
                        record(
                            &mut out,
                            &[
                                c.ell.to_string(),
                                c.gap_index.to_string(),
                                c.exponent.to_string(),
                                c.lower_word.to_string(),
                                c.upper_word.to_string(),
                                float(c.lo),
                                float(c.hi),
                                float(c.image_lo),
                                float(c.image_hi),
                                float(c.max_relative_error),
                                c.passed(tol).to_string(),
                            ],
                        )?;
                    }
                }
                Format::Json => write_json(&mut out, &rows)?,
            }
            out.flush()?;
        }
    }
    Ok(ok)
}

#[derive(Serialize)]
struct OracleDump<'a> {
    spectra: Vec<&'a GraphSpectrum>,
    statuses: Vec<Vec<ClosureStatus>>,
    levels: graph::ClosureReport,
}

fn oracle(cfg: &RunConfig, catalog: &Catalog) -> Result<bool> {
    let top = cfg.oracle_level;
    let mut spectra = Vec::new();
    for level in 0..=top {
        let dc = graph::build_gamma(level, graph::Space::DoubleCover)?;
        let sg = graph::build_gamma(level, graph::Space::Gasket)?;
        spectra.push(graph::LevelSpectra {
            double_cover: graph::graph_spectrum_with(&dc, Condition::Free, cfg.grouping_tol)?,
            neumann: graph::graph_spectrum_with(&sg, Condition::Neumann, cfg.grouping_tol)?,
            dirichlet: graph::graph_spectrum_with(&sg, Condition::Dirichlet, cfg.grouping_tol)?,
            vertex_count: dc.vertex_count(),
        });
    }
    let report = graph::ClosureReport {
        levels: (1..spectra.len())
            .map(|m| graph::summarize_level(&spectra[m], Some(&spectra[m - 1])))
            .collect(),
    };
    let mut ok = report.passed();
    for l in &report.levels {
        eprintln!(
            "level {}: {} vertices, closure {}, union {}, N-D range [{}, {}]",
            l.level,
            l.vertex_count,
            if l.closure_passed { "ok" } else { "FAILED" },
            if l.union_matches { "ok" } else { "FAILED" },
            l.nd_difference_range.0,
            l.nd_difference_range.1
        );
    }
    for s in &spectra[1..] {
        for spectrum in [&s.double_cover, &s.neumann, &s.dirichlet] {
            let a = graph::catalog_agreement(catalog, spectrum)?;
            let passed = a.passed(1e-8);
            ok &= passed;
            eprintln!(
                "level {} {}: {} graph values vs {} catalog values, gap {:.3e}{}",
                a.level,
                a.condition,
                a.graph_count,
                a.catalog_count,
                a.max_relative_gap,
                if passed { "" } else { " FAILED" }
            );
        }
    }

    let mut rows: Vec<(&GraphSpectrum, Vec<ClosureStatus>)> = Vec::new();
    for (m, s) in spectra.iter().enumerate() {
        let prev = m.checked_sub(1).map(|p| &spectra[p]);
        rows.push((
            &s.double_cover,
            graph::closure_statuses(&s.double_cover, prev.map(|p| &p.double_cover)),
        ));
        rows.push((
            &s.neumann,
            graph::closure_statuses(&s.neumann, prev.map(|p| &p.neumann)),
        ));
        rows.push((
            &s.dirichlet,
            graph::closure_statuses(&s.dirichlet, prev.map(|p| &p.dirichlet)),
        ));
    }
    let mut out = sink(cfg, "oracle")?;
    match cfg.format {
        Format::Csv => graph::write_spectrum_csv(&mut out, &rows)?,
        Format::Json => {
            let (spectra, statuses) = rows.into_iter().unzip();
            write_json(
                &mut out,
                &OracleDump {
                    spectra,
                    statuses,
                    levels: report,
                },
            )?
        }
    }
    out.flush()?;
    Ok(ok)
}
