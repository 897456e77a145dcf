//! Command-line front end. Every subcommand writes one table to stdout as CSV
//! (header row, `\n` line endings) or as a JSON array of objects keyed by the
//! same column names. Summaries and diagnostics go to stderr.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain error, 3 oracle mismatch.

use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;

use crate::diagnostics::{
    convergence_sweep, convergence_sweep_closed_i1, ks_to_geometric,
    scaled_mean_exponential_check,
};
use crate::dist::{cdf_scaled_closed_i1, limit_cdf, limit_pmf, DistributionTable, ModelParams};
use crate::error::SpacingError;
use crate::oracle::{parse_rational, OracleCheck, Rational};
use crate::sampler::{collect_empirical, inter_arrival_stream, pooled_spacings, RngSeed};
use crate::sequences::{farey, rotation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

/// Caps rayon worker threads when set.
pub const THREADS_ENV: &str = "SPACINGS_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "spacings",
    version,
    about = "Spacing laws of Bernoulli-thinned grids: exact tables, oracle checks and Monte Carlo"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Conditional mass of the i-th scaled spacing: d,pmf,cdf,limit_cdf
    Pmf {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 1)]
        i: usize,
        #[arg(long)]
        d_max: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// CDF of the i-th scaled spacing: d,cdf,limit_cdf
    Cdf {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 1)]
        i: usize,
        #[arg(long)]
        d_max: Option<usize>,
        /// Use the closed form (i = 1 only)
        #[arg(long)]
        closed_form: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Geometric limit law: d,limit_pmf,limit_cdf
    Limit {
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 20)]
        d_max: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Monte Carlo histogram on the grid: d,count,empirical_mass,limit_pmf
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 1)]
        i: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Inter-arrival times of the Bernoulli process: k,m
    Stream {
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Exact distance to the geometric limit per grid size: n,sup_distance
    Sweep {
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 1)]
        i: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long)]
        d_max: usize,
        /// Use the closed-form CDF (i = 1 only)
        #[arg(long)]
        closed_form: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Exact enumeration against the closed form: d,mass then MATCH or MISMATCH
    Oracle {
        #[arg(long)]
        n: usize,
        /// Fraction a/b
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 1)]
        i: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Thin a Farey or rotation sequence and compare mean-scaled spacings with
    /// the unit exponential: sequence,points,spacings,mean_spacing,ks,tv
    SeqSample {
        /// Farey order
        #[arg(long = "Q", conflicts_with_all = ["alpha", "count"])]
        q: Option<u64>,
        #[arg(long, requires = "count", allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long, requires = "alpha")]
        count: Option<usize>,
        #[arg(long)]
        p: String,
        /// Independent thinnings pooled together
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(SpacingError),
}

impl From<SpacingError> for CliError {
    fn from(e: SpacingError) -> Self {
        CliError::Domain(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Usage(format!("write failed: {e}"))
    }
}

/// Probability flag: decimal or `a/b`.
#[derive(Debug, Clone)]
struct ProbArg {
    value: f64,
    exact: Option<Rational>,
}

fn parse_prob(raw: &str) -> Result<ProbArg, CliError> {
    if raw.contains('/') {
        let exact = parse_rational(raw).map_err(|_| CliError::Usage(format!("--p: cannot parse '{raw}' as a fraction")))?;
        let value = exact.to_f64().unwrap_or(f64::NAN);
        Ok(ProbArg {
            value,
            exact: Some(exact),
        })
    } else {
        let value: f64 = raw
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("--p: cannot parse '{raw}' as a probability")))?;
        Ok(ProbArg { value, exact: None })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            // shortest representation that round-trips
            Cell::Float(v) => format!("{v:?}"),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Int(v) => serde_json::Value::from(*v),
            Cell::Float(v) => serde_json::Number::from_f64(*v)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
            Cell::Text(s) => serde_json::Value::String(s.clone()),
        }
    }
}

#[derive(Debug, Clone)]
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::Any(b'\n'))
                    .from_writer(&mut *out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::render))?;
                }
                w.flush()?;
            }
            Format::Json => {
                let records: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let map = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(k, c)| (k.to_string(), c.json()))
                            .collect();
                        serde_json::Value::Object(map)
                    })
                    .collect();
                serde_json::to_writer(&mut *out, &records)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };

    let pool = match thread_pool() {
        Ok(pool) => pool,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let (mut buf_out, mut buf_err) = (Vec::new(), Vec::new());
    let result = match pool {
        Some(pool) => pool.install(|| execute(cli.command, &mut buf_out, &mut buf_err)),
        None => execute(cli.command, &mut buf_out, &mut buf_err),
    };
    if out.write_all(&buf_out).and(out.flush()).is_err() || err.write_all(&buf_err).is_err() {
        return EXIT_USAGE;
    }
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Domain(e)) => {
            let _ = writeln!(err, "error: {}", describe(&e));
            EXIT_DOMAIN
        }
    }
}

fn describe(e: &SpacingError) -> String {
    match e {
        SpacingError::Domain { name, value, reason } => format!("--{name} {value}: {reason}"),
        other => other.to_string(),
    }
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>, String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got '{raw}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map(Some)
        .map_err(|e| e.to_string())
}

fn support_end(n: usize, d_max: Option<usize>) -> Result<usize, CliError> {
    match d_max {
        Some(0) => Err(CliError::Usage("--d-max must be at least 1".into())),
        Some(d) => Ok(d.min(n)),
        None => Ok(n),
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Pmf { n, p, i, d_max, out: o } => {
            let p = parse_prob(&p)?.value;
            let table = DistributionTable::new(ModelParams::new(n, p, i)?)?;
            let cdf = table.cdf_values();
            let mut t = Table::new(&["d", "pmf", "cdf", "limit_cdf"]);
            for d in 1..=support_end(n, d_max)? {
                t.push(vec![
                    Cell::Int(d as u64),
                    Cell::Float(table.mass(d)),
                    Cell::Float(cdf[d - 1]),
                    Cell::Float(limit_cdf(p, d)?),
                ]);
            }
            t.write(o.format, out)?;
        }
        Command::Cdf { n, p, i, d_max, closed_form, out: o } => {
            let p = parse_prob(&p)?.value;
            let params = ModelParams::new(n, p, i)?;
            let end = support_end(n, d_max)?;
            let values: Vec<f64> = if closed_form {
                if i != 1 {
                    return Err(SpacingError::domain("i", i, "the closed form covers i = 1 only").into());
                }
                (1..=end).map(|d| cdf_scaled_closed_i1(n, p, d)).collect::<Result<_, _>>()?
            } else {
                DistributionTable::new(params)?.cdf_values()
            };
            let mut t = Table::new(&["d", "cdf", "limit_cdf"]);
            for d in 1..=end {
                t.push(vec![
                    Cell::Int(d as u64),
                    Cell::Float(values[d - 1]),
                    Cell::Float(limit_cdf(p, d)?),
                ]);
            }
            t.write(o.format, out)?;
        }
        Command::Limit { p, d_max, out: o } => {
            let p = parse_prob(&p)?.value;
            let mut t = Table::new(&["d", "limit_pmf", "limit_cdf"]);
            for d in 1..=d_max {
                t.push(vec![
                    Cell::Int(d as u64),
                    Cell::Float(limit_pmf(p, d)?),
                    Cell::Float(limit_cdf(p, d)?),
                ]);
            }
            t.write(o.format, out)?;
        }
        Command::Sample { n, p, i, trials, seed, out: o } => {
            let p = parse_prob(&p)?.value;
            let collected = collect_empirical(n, p, i, trials, RngSeed(seed))?;
            let emp = &collected.empirical;
            let mut t = Table::new(&["d", "count", "empirical_mass", "limit_pmf"]);
            for d in 1..=emp.max_value().unwrap_or(0) {
                t.push(vec![
                    Cell::Int(d),
                    Cell::Int(emp.count(d)),
                    Cell::Float(emp.mass(d)),
                    Cell::Float(limit_pmf(p, d as usize)?),
                ]);
            }
            t.write(o.format, out)?;
            write!(err, "retained={} discarded={}", emp.total(), collected.discarded)?;
            if emp.total() > 0 {
                let r = ks_to_geometric(emp, p)?;
                write!(err, " ks={:?} tv={:?}", r.ks, r.tv)?;
            }
            writeln!(err)?;
        }
        Command::Stream { p, count, seed, out: o } => {
            let p = parse_prob(&p)?.value;
            let stream = inter_arrival_stream(p, RngSeed(seed), count)?;
            let mut t = Table::new(&["k", "m"]);
            for (k, &m) in stream.iter().enumerate() {
                t.push(vec![Cell::Int(k as u64 + 1), Cell::Int(m)]);
            }
            t.write(o.format, out)?;
            let emp = stream.iter().copied().collect();
            let r = ks_to_geometric(&emp, p)?;
            writeln!(err, "mean={:?} ks={:?}", emp.mean(), r.ks)?;
        }
        Command::Sweep { p, i, n_list, d_max, closed_form, out: o } => {
            let p = parse_prob(&p)?.value;
            let rows = if closed_form {
                if i != 1 {
                    return Err(SpacingError::domain("i", i, "the closed form covers i = 1 only").into());
                }
                convergence_sweep_closed_i1(p, &n_list, d_max)?
            } else {
                convergence_sweep(p, i, &n_list, d_max)?
            };
            let mut t = Table::new(&["n", "sup_distance"]);
            for r in rows {
                t.push(vec![Cell::Int(r.n as u64), Cell::Float(r.sup_distance)]);
            }
            t.write(o.format, out)?;
        }
        Command::Oracle { n, p, i, out: o } => {
            let Some(exact) = parse_prob(&p)?.exact else {
                return Err(CliError::Usage(format!("--p: oracle needs a fraction a/b, got '{p}'")));
            };
            let check = OracleCheck::run(n, &exact, i)?;
            let mut t = Table::new(&["d", "mass"]);
            for (d, m) in check.enumerated.iter() {
                t.push(vec![Cell::Int(d as u64), Cell::Text(m.to_string())]);
            }
            t.write(o.format, out)?;
            let verdict = if check.matches() { "MATCH" } else { "MISMATCH" };
            match o.format {
                Format::Csv => writeln!(out, "{verdict}")?,
                Format::Json => writeln!(err, "{verdict}")?,
            }
            if !check.matches() {
                return Ok(EXIT_MISMATCH);
            }
        }
        Command::SeqSample { q, alpha, count, p, trials, seed, out: o } => {
            let p = parse_prob(&p)?.value;
            let points = match (q, alpha, count) {
                (Some(order), None, None) => farey(order)?,
                (None, Some(alpha), Some(count)) => rotation(alpha, count)?,
                _ => return Err(CliError::Usage("give either --Q or both --alpha and --count".into())),
            };
            let spacings = pooled_spacings(&points, p, RngSeed(seed), trials)?;
            let report = scaled_mean_exponential_check(&spacings)?;
            let mean = spacings.iter().sum::<f64>() / spacings.len() as f64;
            let mut t = Table::new(&["sequence", "points", "spacings", "mean_spacing", "ks", "tv"]);
            t.push(vec![
                Cell::Text(points.descriptor().to_string()),
                Cell::Int(points.len() as u64),
                Cell::Int(spacings.len() as u64),
                Cell::Float(mean),
                Cell::Float(report.ks),
                Cell::Float(report.tv),
            ]);
            t.write(o.format, out)?;
        }
    }
    Ok(EXIT_OK)
}
