//! The `ekz` command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::filter::{apply_direct, apply_iterated};
use crate::io::{read_timeseries, write_table_as, write_table_to, ColumnRef, ColumnSpec, Format, Table};
use crate::recipe::read_recipe;
use crate::simulate::{run_experiment, SimulationRecipe, DEFAULT_SEED, DESK_SCALE_N};
use crate::spectral::{
    cutoff_half_power, etf_closed_form_curve, etf_exact, frequency_grid, periodogram,
    DEFAULT_GRID_POINTS,
};
use crate::window::{ekz_coefficients, BoundaryPolicy, FilterSpec};

#[derive(Debug, Parser)]
#[command(name = "ekz", version, about = "Extended Kolmogorov-Zurbenko filtering toolkit")]
pub struct Cli {
    /// Output file (a directory for `simulate`); stdout when omitted.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Suppress progress messages on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Boundary {
    Missing,
    Renorm,
}

impl From<Boundary> for BoundaryPolicy {
    fn from(b: Boundary) -> Self {
        match b {
            Boundary::Missing => BoundaryPolicy::Missing,
            Boundary::Renorm => BoundaryPolicy::Renormalize,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the coefficient window a_u of EKZ(m, k).
    Coeffs {
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Add a column with weights divided by m^k.
        #[arg(long)]
        normalized: bool,
    },
    /// Filter one column of a CSV file.
    Filter {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, value_enum, default_value_t = Boundary::Missing)]
        boundary: Boundary,
        /// Apply the single-pass window k times instead of the full window once.
        #[arg(long)]
        iterated: bool,
        #[command(flatten)]
        columns: ColumnArgs,
    },
    /// Emit energy transfer curves, one column per (m, k) pair.
    Etf {
        /// Window lengths: values, comma lists, `a..b` or `a..b:step`. Repeatable.
        #[arg(long, required = true, allow_hyphen_values = true)]
        m: Vec<String>,
        /// Iteration counts, same syntax as --m.
        #[arg(long, default_value = "1")]
        k: Vec<String>,
        /// Squared response of the actual coefficients (default).
        #[arg(long, conflicts_with = "closed_form")]
        exact: bool,
        /// The sin-ratio closed form.
        #[arg(long)]
        closed_form: bool,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid: usize,
        /// Do not add the frequencies j/m to the evenly spaced grid.
        #[arg(long)]
        no_harmonics: bool,
    },
    /// Print the approximate half-power frequency of EKZ(m, k).
    Cutoff {
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Periodogram of one column of a CSV file.
    Periodogram {
        #[arg(long)]
        input: PathBuf,
        /// Natural log of max(power, floor).
        #[arg(long)]
        log: bool,
        #[arg(long, default_value = "1e-300")]
        floor: f64,
        #[command(flatten)]
        columns: ColumnArgs,
    },
    /// Run a simulation experiment and write its tables.
    Simulate {
        #[arg(long, conflicts_with = "figure", required_unless_present = "figure")]
        recipe: Option<PathBuf>,
        /// Built-in experiment: 4 filters white noise with EKZ(2,1) and EKZ(2,2), 5 with EKZ(1/0.26,1).
        #[arg(long, value_parser = clap::value_parser!(u8).range(4..=5))]
        figure: Option<u8>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Args)]
pub struct ColumnArgs {
    /// Value column, by header name or zero-based index. Defaults to the last column.
    #[arg(long)]
    pub value_col: Option<String>,
    /// Time column used to validate the grid.
    #[arg(long)]
    pub time_col: Option<String>,
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
    /// The first row is data, not a header.
    #[arg(long)]
    pub no_header: bool,
    /// Token read as missing; repeatable. Defaults to "", "NA" and "NaN".
    #[arg(long = "missing-token")]
    pub missing_tokens: Vec<String>,
}

impl ColumnArgs {
    fn to_spec(&self) -> Result<ColumnSpec> {
        let mut spec = ColumnSpec::default();
        if !self.delimiter.is_ascii() {
            return Err(Error::Usage("delimiter must be a single ASCII character".into()));
        }
        spec.delimiter = self.delimiter as u8;
        spec.header = !self.no_header;
        spec.value_column = self.value_col.as_deref().map(ColumnRef::parse);
        spec.time_column = self.time_col.as_deref().map(ColumnRef::parse);
        if !self.missing_tokens.is_empty() {
            spec.missing_tokens = self.missing_tokens.clone();
        }
        Ok(spec)
    }
}

/// Parses `args` (program name first) and runs the command. Data goes to
/// `stdout` unless `--output` names a file; progress goes to stderr.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                write!(stdout, "{e}").map_err(|err| Error::io("<stdout>", err))?;
                return Ok(());
            }
            return Err(Error::Usage(first_line(&e.to_string())));
        }
    };
    execute(&cli, stdout)
}

fn first_line(msg: &str) -> String {
    let line = msg.lines().find(|l| !l.trim().is_empty()).unwrap_or(msg);
    line.trim_start_matches("error: ").trim().to_string()
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let format = Format::from(cli.format);
    match &cli.command {
        Command::Coeffs { m, k, normalized } => {
            let w = ekz_coefficients(*m, *k)?;
            let mut t = Table::new()
                .with_integers("offset", w.iter().map(|(u, _)| u as i64).collect())
                .with_reals("weight", w.weights().to_vec());
            if *normalized {
                t = t.with_reals("normalized", w.normalized());
            }
            emit(cli, stdout, &t, format)
        }
        Command::Filter {
            input,
            m,
            k,
            boundary,
            iterated,
            columns,
        } => {
            let spec = FilterSpec::new(*m, *k)?.with_boundary((*boundary).into());
            let x = read_timeseries(input, &columns.to_spec()?)?;
            let y = if *iterated {
                apply_iterated(&x, &spec)?
            } else {
                apply_direct(&x, &spec)?
            };
            let index = (0..y.len() as i64).map(|i| y.origin() + i).collect();
            let t = Table::new()
                .with_integers("index", index)
                .with_optional("value", y.to_options());
            emit(cli, stdout, &t, format)
        }
        Command::Etf {
            m,
            k,
            closed_form,
            grid,
            no_harmonics,
            ..
        } => {
            let ms = parse_list(m, "--m")?;
            let ks = parse_list(k, "--k")?
                .into_iter()
                .map(|v| {
                    if v.fract() == 0.0 && v >= 1.0 && v <= u32::MAX as f64 {
                        Ok(v as u32)
                    } else {
                        Err(Error::domain(format!("--k values must be positive integers, got {v}")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let specs = ms
                .iter()
                .flat_map(|&m| ks.iter().map(move |&k| (m, k)))
                .map(|(m, k)| FilterSpec::new(m, k))
                .collect::<Result<Vec<_>>>()?;
            let freqs = etf_grid(&specs, *grid, !*no_harmonics)?;
            let mut t = Table::new().with_reals("frequency", freqs.clone());
            for spec in &specs {
                let (name, curve) = if *closed_form {
                    (
                        format!("etf_closed_m{}_k{}", spec.m_r(), spec.k()),
                        etf_closed_form_curve(spec.m_r(), spec.k(), &freqs)?,
                    )
                } else {
                    (
                        format!("etf_m{}_k{}", spec.m_r(), spec.k()),
                        etf_exact(&spec.coefficients()?, &freqs)?,
                    )
                };
                t = t.with_reals(name, curve.values);
            }
            emit(cli, stdout, &t, format)
        }
        Command::Cutoff { m, k } => {
            let c = cutoff_half_power(*m, *k)?;
            let t = Table::new()
                .with_reals("m", vec![*m])
                .with_integers("k", vec![*k as i64])
                .with_reals("cutoff", vec![c]);
            emit(cli, stdout, &t, format)
        }
        Command::Periodogram {
            input,
            log,
            floor,
            columns,
        } => {
            let x = read_timeseries(input, &columns.to_spec()?)?;
            let p = periodogram(&x)?;
            let t = if *log {
                let l = p.to_log(*floor)?;
                Table::new()
                    .with_reals("frequency", l.frequencies)
                    .with_reals("log_power", l.power)
            } else {
                Table::new()
                    .with_reals("frequency", p.frequencies)
                    .with_reals("power", p.power)
            };
            emit(cli, stdout, &t, format)
        }
        Command::Simulate {
            recipe,
            figure,
            n,
            seed,
        } => {
            let mut r = match (recipe, figure) {
                (Some(path), _) => read_recipe(path)?,
                (None, Some(4)) => SimulationRecipe::figure4(DESK_SCALE_N, DEFAULT_SEED)?,
                (None, Some(5)) => SimulationRecipe::figure5(DESK_SCALE_N, DEFAULT_SEED)?,
                _ => return Err(Error::Usage("give --recipe or --figure 4|5".into())),
            };
            if let Some(n) = n {
                r.n = *n;
            }
            if let Some(seed) = seed {
                r.seed = *seed;
            }
            let report = run_experiment(&r)?;
            emit_tables(cli, stdout, &report.tables(), format)
        }
    }
}

fn emit(cli: &Cli, stdout: &mut dyn Write, table: &Table, format: Format) -> Result<()> {
    match &cli.output {
        Some(path) => {
            write_table_as(path, table, format)?;
            note(cli, path, table);
            Ok(())
        }
        None => write_table_to(stdout, table, format).map_err(|e| Error::io("<stdout>", e)),
    }
}

fn emit_tables(cli: &Cli, stdout: &mut dyn Write, tables: &[(String, Table)], format: Format) -> Result<()> {
    if let Some(dir) = &cli.output {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (name, table) in tables {
            let path = dir.join(format!("{name}.{}", format.extension()));
            write_table_as(&path, table, format)?;
            note(cli, &path, table);
        }
        return Ok(());
    }
    let io_err = |e| Error::io("<stdout>", e);
    match format {
        Format::Csv => {
            for (i, (name, table)) in tables.iter().enumerate() {
                if i > 0 {
                    writeln!(stdout).map_err(io_err)?;
                }
                writeln!(stdout, "# {name}").map_err(io_err)?;
                write_table_to(stdout, table, format).map_err(io_err)?;
            }
        }
        Format::Json => {
            let all: Vec<serde_json::Value> = tables
                .iter()
                .map(|(name, t)| {
                    let mut v = crate::io::table_json(t);
                    v["name"] = serde_json::json!(name);
                    v
                })
                .collect();
            serde_json::to_writer(&mut *stdout, &serde_json::json!({ "tables": all }))
                .map_err(|e| io_err(e.into()))?;
            writeln!(stdout).map_err(io_err)?;
        }
    }
    Ok(())
}

fn note(cli: &Cli, path: &Path, table: &Table) {
    if !cli.quiet {
        let rows = table.rows().unwrap_or(0);
        eprintln!("wrote {rows} rows to {}", path.display());
    }
}

/// Evenly spaced grid, plus every `j / m_r <= 0.5` when `harmonics` is set.
fn etf_grid(specs: &[FilterSpec], points: usize, harmonics: bool) -> Result<Vec<f64>> {
    let mut freqs = frequency_grid(points)?;
    if harmonics {
        for spec in specs {
            let m = spec.m_r();
            let mut j = 1.0;
            while j / m <= 0.5 {
                freqs.push(j / m);
                j += 1.0;
            }
        }
        freqs.sort_by(f64::total_cmp);
        freqs.dedup();
    }
    Ok(freqs)
}

/// Expands `--m`/`--k` arguments: `x`, `a,b,c`, `a..b` (step 1) or `a..b:step`,
/// ends inclusive.
pub fn parse_list(items: &[String], flag: &str) -> Result<Vec<f64>> {
    let bad = |s: &str| Error::Usage(format!("invalid {flag} value {s:?}"));
    let mut out = Vec::new();
    for item in items {
        for part in item.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if let Some((start, rest)) = part.split_once("..") {
                let (end, step) = match rest.split_once(':') {
                    Some((e, s)) => (e, s.parse::<f64>().map_err(|_| bad(part))?),
                    None => (rest, 1.0),
                };
                let start: f64 = start.parse().map_err(|_| bad(part))?;
                let end: f64 = end.parse().map_err(|_| bad(part))?;
                if step.is_nan() || step <= 0.0 || !start.is_finite() || !end.is_finite() || end < start {
                    return Err(bad(part));
                }
                let count = ((end - start) / step + 1e-9).floor() as usize;
                if count > 100_000 {
                    return Err(bad(part));
                }
                out.extend((0..=count).map(|i| start + i as f64 * step));
            } else {
                out.push(part.parse().map_err(|_| bad(part))?);
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Usage(format!("{flag} needs at least one value")));
    }
    Ok(out)
}
