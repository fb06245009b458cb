//! `ahp` command line.
//!
//! Exit codes: 0 success, 1 usage or server failure, 2 input/parse error,
//! 3 numeric error.

use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::{DEFAULT_RI_SAMPLES, DEFAULT_SEED};
use crate::consistency::{consistency_report, consistency_report_with_ri};
use crate::error::Error;
use crate::group::{aggregate_mean, partition, per_respondent_weights, AggregationPolicy, Group, PartitionBy};
use crate::ingest::{
    parse_matrix_csv, parse_responses_csv_with, write_grid_csv, write_ranking_json, write_ri_csv,
    write_stats_report_json, ResponseFormat, StatsEntry, StatsReport,
};
use crate::ranking::rank_criteria;
use crate::scale::JudgmentScale;
use crate::simulate::{ri_table_with, SimulationConfig};
use crate::stats::{
    anova_from_summary, correlation_matrix, one_way_anova, t_test_from_summary, t_test_pooled, t_test_welch,
    welch_from_summary, Summary,
};
use crate::weights::{derive_weights, principal_eigenpair, WeightMethod};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ahp", version, about = "Analytic Hierarchy Process weights, consistency and survey statistics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Rowsum,
    Eigenvector,
}

impl From<MethodArg> for WeightMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Rowsum => WeightMethod::Rowsum,
            MethodArg::Eigenvector => WeightMethod::Eigenvector,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PolicyArg {
    Triangle,
    Both,
    Geometric,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PartitionArg {
    Committee,
    Rank,
    Group,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestArg {
    T,
    Welch,
    Anova,
    Correlation,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank the items of a comparison matrix CSV and report its consistency.
    Rank {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "rowsum")]
        method: MethodArg,
        /// Random index to use instead of the table (required above order 15).
        #[arg(long)]
        ri: Option<f64>,
    },
    /// Cell-mean aggregate of a respondent CSV, written as a matrix CSV.
    Aggregate {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "triangle")]
        policy: PolicyArg,
        /// Comma-separated criteria (defaults to the twelve admission criteria).
        #[arg(long, value_delimiter = ',')]
        criteria: Option<Vec<String>>,
        #[arg(long, default_value = "study")]
        scale: String,
    },
    /// Per-respondent weights, partitioned, run through the requested tests.
    Stats {
        /// Respondent CSV (omit when using --summary).
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "committee")]
        partition: PartitionArg,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "t")]
        tests: Vec<TestArg>,
        #[arg(long, value_enum, default_value = "rowsum")]
        method: MethodArg,
        /// Keep the blank-metadata group in between-group tests.
        #[arg(long)]
        include_blank: bool,
        #[arg(long, value_delimiter = ',')]
        criteria: Option<Vec<String>>,
        #[arg(long, default_value = "study")]
        scale: String,
        /// Group summary `n,mean,sd`; repeat for each group.
        #[arg(long, conflicts_with = "file")]
        summary: Vec<String>,
    },
    /// Monte Carlo random index table as CSV.
    Ri {
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        #[arg(long, default_value_t = DEFAULT_RI_SAMPLES)]
        samples: usize,
        #[arg(long, env = "AHP_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, default_value = "saaty")]
        scale: String,
    },
    /// HTTP session API for interactive elicitation.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        #[arg(long)]
        static_dir: Option<PathBuf>,
        /// Directory for per-session JSON-lines journals.
        #[arg(long)]
        journal: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergence { .. } | Error::UnsupportedOrder(_) | Error::UndefinedCorrelation(_) => EXIT_NUMERIC,
        _ => EXIT_PARSE,
    }
}

fn read(path: &PathBuf) -> Result<Vec<u8>, Error> {
    std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn response_format(criteria: Option<Vec<String>>, scale: &str) -> Result<ResponseFormat, Error> {
    let mut f = ResponseFormat { scale: JudgmentScale::by_name(scale)?, ..ResponseFormat::default() };
    if let Some(c) = criteria {
        f.criteria = c.into_iter().map(|s| s.trim().to_string()).collect();
    }
    Ok(f)
}

/// Runs one command, writing results to `out` and diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Rank { file, method, ri } => cmd_rank(&file, method.into(), ri, out, err),
        Command::Aggregate { file, policy, criteria, scale } => cmd_aggregate(&file, policy, criteria, &scale, out),
        Command::Stats { file, partition, tests, method, include_blank, criteria, scale, summary } => {
            let opts = StatsOptions { partition, tests, method: method.into(), include_blank };
            match (file, summary.is_empty()) {
                (Some(f), true) => response_format(criteria, &scale)
                    .and_then(|fmt| cmd_stats(&f, &fmt, &opts, out, err)),
                (None, false) => cmd_stats_summary(&summary, &opts, out),
                _ => {
                    let _ = writeln!(err, "error: give a respondent CSV or at least two --summary groups");
                    return EXIT_USAGE;
                }
            }
        }
        Command::Ri { max_n, samples, seed, workers, scale } => {
            JudgmentScale::by_name(&scale).and_then(|scale| {
                let cfg = SimulationConfig { samples, seed, scale, workers };
                cmd_ri(max_n, &cfg, out)
            })
        }
        Command::Serve { port, host, static_dir, journal } => {
            let rt = match tokio::runtime::Runtime::new() {
                Ok(rt) => rt,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_USAGE;
                }
            };
            return match rt.block_on(crate::service::serve(SocketAddr::new(host, port), static_dir, journal)) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

pub fn cmd_rank(
    file: &PathBuf,
    method: WeightMethod,
    ri: Option<f64>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Error> {
    let m = parse_matrix_csv(&read(file)?)?;
    let report = match ri {
        Some(ri) => consistency_report_with_ri(&m, ri)?,
        None => consistency_report(&m)?,
    };
    let weights = match method {
        WeightMethod::Eigenvector => principal_eigenpair(&m)?.1,
        other => derive_weights(&m, other)?,
    };
    let table = rank_criteria(&weights);
    writeln!(out, "{}", write_ranking_json(&table, &report, method)).map_err(io)?;
    writeln!(
        err,
        "lambda_max={:.10} CI={:.7} RI={} CR={:.7} ({})",
        report.lambda_max,
        report.ci,
        report.ri,
        report.cr,
        if report.consistent { "consistent" } else { "inconsistent" }
    )
    .map_err(io)?;
    Ok(())
}

pub fn cmd_aggregate(
    file: &PathBuf,
    policy: PolicyArg,
    criteria: Option<Vec<String>>,
    scale: &str,
    out: &mut dyn Write,
) -> Result<(), Error> {
    let fmt = response_format(criteria, scale)?;
    let ds = parse_responses_csv_with(&read(file)?, &fmt)?;
    let policy = match policy {
        PolicyArg::Triangle => AggregationPolicy::TriangleReciprocal,
        PolicyArg::Both => AggregationPolicy::MeanBothDirections,
        PolicyArg::Geometric => AggregationPolicy::Geometric,
    };
    let agg = aggregate_mean(&ds, policy)?;
    write!(out, "{}", write_grid_csv(agg.labels(), agg.entries())).map_err(io)
}

pub struct StatsOptions {
    pub partition: PartitionArg,
    pub tests: Vec<TestArg>,
    pub method: WeightMethod,
    pub include_blank: bool,
}

impl StatsOptions {
    fn wants(&self, t: TestArg) -> bool {
        self.tests.contains(&t) || self.tests.contains(&TestArg::All)
    }
}

fn group_entries(
    criteria: &[String],
    groups: &[&Group],
    opts: &StatsOptions,
    report: &mut StatsReport,
) -> Result<(), Error> {
    for (c, name) in criteria.iter().enumerate() {
        for (a, ga) in groups.iter().enumerate() {
            for gb in &groups[a + 1..] {
                let pair = vec![ga.name.clone(), gb.name.clone()];
                let sizes = vec![ga.size(), gb.size()];
                for (flag, f) in [(TestArg::T, t_test_pooled as fn(&[f64], &[f64]) -> _), (TestArg::Welch, t_test_welch)] {
                    if !opts.wants(flag) {
                        continue;
                    }
                    match f(&ga.samples[c], &gb.samples[c]) {
                        Ok(t) => report.push(StatsEntry::new(name, pair.clone(), sizes.clone(), &t)),
                        Err(e) => report.notes.push(format!("{name} {} vs {}: {e}", ga.name, gb.name)),
                    }
                }
            }
        }
        if opts.wants(TestArg::Anova) && groups.len() >= 2 {
            let samples: Vec<&[f64]> = groups.iter().map(|g| g.samples[c].as_slice()).collect();
            match one_way_anova(&samples) {
                Ok(t) => report.push(StatsEntry::new(
                    name,
                    groups.iter().map(|g| g.name.clone()).collect(),
                    groups.iter().map(|g| g.size()).collect(),
                    &t,
                )),
                Err(e) => report.notes.push(format!("{name} ANOVA: {e}")),
            }
        }
    }
    Ok(())
}

pub fn cmd_stats(
    file: &PathBuf,
    fmt: &ResponseFormat,
    opts: &StatsOptions,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Error> {
    let ds = parse_responses_csv_with(&read(file)?, fmt)?;
    let weights = per_respondent_weights(&ds, opts.method);
    for s in &weights.skipped {
        writeln!(err, "skipped respondent {}: {}", s.id, s.reason).map_err(io)?;
    }
    let by = match opts.partition {
        PartitionArg::Committee => PartitionBy::Committee,
        PartitionArg::Rank => PartitionBy::Rank,
        PartitionArg::Group => PartitionBy::ProgramGroup,
    };
    let mut report = StatsReport {
        method: Some(opts.method),
        partition: Some(by.to_string()),
        skipped: weights.skipped.clone(),
        ..StatsReport::default()
    };
    let groups = partition(&weights.records, by);
    let selected: Vec<&Group> = groups.iter().filter(|g| opts.include_blank || !g.is_blank()).collect();
    group_entries(ds.criteria(), &selected, opts, &mut report)?;

    if opts.wants(TestArg::Correlation) {
        let n_criteria = ds.criteria().len();
        let samples: Vec<Vec<f64>> = (0..n_criteria)
            .map(|c| weights.records.iter().map(|r| r.weights.weights()[c]).collect())
            .collect();
        match correlation_matrix(ds.criteria(), &samples) {
            Ok(cm) => {
                for i in 0..n_criteria {
                    for j in (i + 1)..n_criteria {
                        if let Some(t) = &cm.tests[i][j] {
                            let label = format!("{}~{}", ds.criteria()[i], ds.criteria()[j]);
                            report.push(StatsEntry::new(label, vec!["all".into()], vec![weights.records.len()], t));
                        }
                    }
                }
                for issue in cm.issues {
                    report.notes.push(format!(
                        "{}~{}: {}",
                        ds.criteria()[issue.row],
                        ds.criteria()[issue.col],
                        issue.reason
                    ));
                }
            }
            Err(e) => report.notes.push(format!("correlation: {e}")),
        }
    }
    writeln!(out, "{}", write_stats_report_json(&report)).map_err(io)
}

fn parse_summary(s: &str) -> Result<Summary, Error> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Error::parse(0, 0, format!("summary `{s}` must be n,mean,sd"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let n = parts[0].parse().map_err(|_| bad())?;
    let mean = parts[1].parse().map_err(|_| bad())?;
    let sd = parts[2].parse().map_err(|_| bad())?;
    Summary::new(n, mean, sd)
}

pub fn cmd_stats_summary(summaries: &[String], opts: &StatsOptions, out: &mut dyn Write) -> Result<(), Error> {
    let groups = summaries.iter().map(|s| parse_summary(s)).collect::<Result<Vec<_>, _>>()?;
    let names: Vec<String> = (1..=groups.len()).map(|k| format!("g{k}")).collect();
    let sizes: Vec<usize> = groups.iter().map(|g| g.n).collect();
    let mut report = StatsReport::default();
    if groups.len() < 2 {
        return Err(Error::Domain("summary mode needs at least two groups".into()));
    }
    for a in 0..groups.len() {
        for b in (a + 1)..groups.len() {
            let pair = vec![names[a].clone(), names[b].clone()];
            let sz = vec![sizes[a], sizes[b]];
            if opts.wants(TestArg::T) {
                report.push(StatsEntry::new("summary", pair.clone(), sz.clone(), &t_test_from_summary(groups[a], groups[b])?));
            }
            if opts.wants(TestArg::Welch) {
                report.push(StatsEntry::new("summary", pair, sz, &welch_from_summary(groups[a], groups[b])?));
            }
        }
    }
    if opts.wants(TestArg::Anova) {
        report.push(StatsEntry::new("summary", names, sizes, &anova_from_summary(&groups)?));
    }
    writeln!(out, "{}", write_stats_report_json(&report)).map_err(io)
}

pub fn cmd_ri(max_n: usize, cfg: &SimulationConfig, out: &mut dyn Write) -> Result<(), Error> {
    let rows = ri_table_with(max_n, cfg)?;
    write!(out, "{}", write_ri_csv(&rows)).map_err(io)
}
