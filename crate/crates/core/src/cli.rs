//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a
//! convolution set has no unique minimum/maximum (or they are not the
//! product and Demazure product) or a verification property fails.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::convolution::{self, ConvolutionError, ConvolutionReport, ReportJson};
use crate::coxeter::{CoxeterError, CoxeterSystem, Element, ElementSet, MatrixEntry, SystemSpec};
use crate::geometry::{GeometryError, PrimeField};
use crate::verify::{self, CoxeterSummary, GeometrySummary, PropertyResult, SweepConfig, VerifyError};

#[derive(Parser, Debug)]
#[command(name = "weylconv", version, about = "Convolution of Bruhat cells in Coxeter groups and flag varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, env = "WEYLCONV_JOBS", global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: Option<u16>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The convolution set x1 * x2 with its exhaustion report.
    Conv {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        x1: String,
        #[arg(long)]
        x2: String,
    },
    /// The Demazure product x1 ⋆ x2 alongside the group product.
    Demazure {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        x1: String,
        #[arg(long)]
        x2: String,
    },
    /// Whether u ≤ w in the Bruhat order.
    Bruhat {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        u: String,
        #[arg(long)]
        w: String,
    },
    /// Exhaustion reports for every ordered pair of a finite group.
    Report {
        #[command(flatten)]
        system: SystemArgs,
        /// Refuse groups of larger order.
        #[arg(long, default_value_t = 400, value_parser = clap::value_parser!(u64).range(1..))]
        max_order: u64,
    },
    /// Runs the invariant suite on a finite Coxeter group.
    VerifyCoxeter {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Runs the flag-variety checks for GL_n over F_p.
    VerifyGeometry {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u8,
        #[command(flatten)]
        sweep: SweepArgs,
    },
}

/// A Coxeter system: `--type`/`--rank`/`--m`, a `--matrix`, or a JSON `--system`.
#[derive(Args, Debug, Clone)]
pub struct SystemArgs {
    /// A, B (= C), D or I2.
    #[arg(long = "type", conflicts_with_all = ["matrix", "system"])]
    pub kind: Option<String>,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Dihedral order for type I2; `inf` for ∞.
    #[arg(long)]
    pub m: Option<String>,
    /// Coxeter matrix as JSON, e.g. `[[1,3],[3,1]]`.
    #[arg(long, conflicts_with = "system")]
    pub matrix: Option<String>,
    /// A full system description as JSON.
    #[arg(long)]
    pub system: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    /// Sweep all pairs up to this group order; sample beyond it.
    #[arg(long, default_value_t = SweepConfig::default().full_sweep_max, value_parser = positive)]
    pub full_sweep_max: usize,
    #[arg(long, default_value_t = SweepConfig::default().samples, value_parser = positive)]
    pub samples: usize,
    #[arg(long, default_value_t = SweepConfig::default().seed)]
    pub seed: u64,
    /// Reduced words of x2 tried per pair.
    #[arg(long, default_value_t = SweepConfig::default().max_reduced_words, value_parser = positive)]
    pub max_reduced_words: usize,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

impl SweepArgs {
    fn config(&self) -> SweepConfig {
        SweepConfig {
            full_sweep_max: self.full_sweep_max,
            samples: self.samples,
            seed: self.seed,
            max_reduced_words: self.max_reduced_words,
            ..SweepConfig::default()
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Convolution(#[from] ConvolutionError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("verification failed")]
    Failed,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Convolution(e) if e.is_theorem_violation() => 2,
            CliError::Failed => 2,
            _ => 1,
        }
    }
}

fn parse_entry(text: &str) -> Result<MatrixEntry, CliError> {
    serde_json::from_str(text)
        .or_else(|_| serde_json::from_str(&format!("\"{text}\"")))
        .map_err(|_| CliError::Usage(format!("invalid --m {text:?}; expected an integer or inf")))
}

impl SystemArgs {
    pub fn spec(&self) -> Result<SystemSpec, CliError> {
        if let Some(json) = &self.system {
            return Ok(SystemSpec::parse_json(json)?);
        }
        if let Some(json) = &self.matrix {
            return Ok(SystemSpec::parse_json(&format!("{{\"matrix\":{json}}}"))?);
        }
        let kind = self
            .kind
            .clone()
            .ok_or_else(|| CliError::Usage("give --type, --matrix or --system".into()))?;
        let m = self.m.as_deref().map(parse_entry).transpose()?;
        Ok(SystemSpec::Named { kind, rank: self.rank, m })
    }

    pub fn build(&self) -> Result<CoxeterSystem, CliError> {
        Ok(CoxeterSystem::from_spec(&self.spec()?)?)
    }
}

pub type SetMutator = dyn Fn(&CoxeterSystem, &mut ElementSet) + Sync;

/// Test seams: lets a harness tamper with computed convolution sets before
/// they are checked.
#[derive(Default)]
pub struct Hooks<'a> {
    pub mutate_set: Option<&'a SetMutator>,
}

/// Result of one invocation: the exit code and what would be printed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I, hooks: &Hooks) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 1, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let result = match cli.jobs {
        Some(jobs) => match rayon::ThreadPoolBuilder::new().num_threads(jobs as usize).build() {
            Ok(pool) => pool.install(|| execute(&cli, hooks)),
            Err(e) => Err(CliError::Usage(format!("cannot start {jobs} workers: {e}"))),
        },
        None => execute(&cli, hooks),
    };
    let mut out = Outcome { code: 0, stdout: String::new(), stderr: String::new() };
    let failure = match result {
        Err(e) => Some(e),
        // A failed sweep still emits its summary.
        Ok(rendered) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &rendered.text)
                    .map_err(|source| CliError::Io { path: path.clone(), source }),
                None => {
                    out.stdout = rendered.text;
                    Ok(())
                }
            };
            match written {
                Err(e) => Some(e),
                Ok(()) => (!rendered.ok).then_some(CliError::Failed),
            }
        }
    };
    if let Some(e) = failure {
        out.code = e.exit_code();
        out.stderr = format!("error: {e}\n");
    }
    out
}

pub fn main() -> ExitCode {
    let outcome = run_args(std::env::args_os(), &Hooks::default());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    ExitCode::from(outcome.code)
}

/// Rendered output plus whether the command's checks all held.
struct Rendered {
    text: String,
    ok: bool,
}

fn execute(cli: &Cli, hooks: &Hooks) -> Result<Rendered, CliError> {
    let rendered = match &cli.command {
        Command::Conv { system, x1, x2 } => {
            let sys = system.build()?;
            let (x1, x2) = (sys.parse_element(x1)?, sys.parse_element(x2)?);
            let report = conv_report(&sys, &x1, &x2, hooks)?;
            Rendered { text: render(cli.format, &report, || conv_table(&report))?, ok: true }
        }
        Command::Demazure { system, x1, x2 } => {
            let sys = system.build()?;
            let (x1, x2) = (sys.parse_element(x1)?, sys.parse_element(x2)?);
            let out = DemazureOut {
                x1: x1.to_string(),
                x2: x2.to_string(),
                product: sys.multiply(&x1, &x2)?.to_string(),
                demazure: convolution::demazure(&sys, &x1, &x2)?.to_string(),
            };
            let text = render(cli.format, &out, || {
                table(&[
                    vec!["x1".into(), table_word(&out.x1)],
                    vec!["x2".into(), table_word(&out.x2)],
                    vec!["product".into(), table_word(&out.product)],
                    vec!["demazure".into(), table_word(&out.demazure)],
                ])
            })?;
            Rendered { text, ok: true }
        }
        Command::Bruhat { system, u, w } => {
            let sys = system.build()?;
            let (u, w) = (sys.parse_element(u)?, sys.parse_element(w)?);
            let out = BruhatOut { u: u.to_string(), w: w.to_string(), leq: sys.bruhat_leq(&u, &w)? };
            let text = render(cli.format, &out, || {
                table(&[
                    vec!["u".into(), table_word(&out.u)],
                    vec!["w".into(), table_word(&out.w)],
                    vec!["u <= w".into(), out.leq.to_string()],
                ])
            })?;
            Rendered { text, ok: true }
        }
        Command::Report { system, max_order } => {
            let sys = system.build()?;
            let order = sys.order().ok_or(CoxeterError::InfiniteGroup)?;
            if order > *max_order as u128 {
                return Err(CliError::Usage(format!(
                    "group order {order} exceeds --max-order {max_order}"
                )));
            }
            let elements = sys.elements()?;
            let mut reports = Vec::with_capacity(elements.len() * elements.len());
            for x1 in elements.iter() {
                for x2 in elements.iter() {
                    reports.push(ReportJson::from(&conv_report(&sys, x1, x2, hooks)?));
                }
            }
            let out = ReportsOut { system: sys.matrix().to_string(), order, reports };
            Rendered { text: render(cli.format, &out, || reports_table(&out.reports))?, ok: true }
        }
        Command::VerifyCoxeter { system, sweep } => {
            let sys = system.build()?;
            let summary = verify::verify_coxeter(&sys, &sweep.config())?;
            let text = render(cli.format, &summary, || coxeter_table(&summary))?;
            Rendered { text, ok: summary.ok }
        }
        Command::VerifyGeometry { n, p, sweep } => {
            let field = PrimeField::new(*p)?;
            let summary = verify::verify_geometry(*n, field, &sweep.config())?;
            let text = render(cli.format, &summary, || geometry_table(&summary))?;
            Rendered { text, ok: summary.ok }
        }
    };
    Ok(rendered)
}

fn conv_report(
    sys: &CoxeterSystem,
    x1: &Element,
    x2: &Element,
    hooks: &Hooks,
) -> Result<ConvolutionReport, CliError> {
    let mut set = convolution::convolve(sys, x1, x2)?;
    if let Some(mutate) = hooks.mutate_set {
        mutate(sys, &mut set);
    }
    Ok(convolution::report_from_set(sys, x1, x2, set)?)
}

#[derive(Serialize)]
struct DemazureOut {
    x1: String,
    x2: String,
    product: String,
    demazure: String,
}

#[derive(Serialize)]
struct BruhatOut {
    u: String,
    w: String,
    leq: bool,
}

#[derive(Serialize)]
struct ReportsOut {
    system: String,
    order: u128,
    reports: Vec<ReportJson>,
}

fn render<T: Serialize>(format: Format, value: &T, table: impl FnOnce() -> String) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string(value).expect("plain data serializes");
            s.push('\n');
            s
        }
        Format::Table => table(),
    })
}

fn table_word(w: &str) -> String {
    if w.is_empty() {
        "e".into()
    } else {
        w.to_string()
    }
}

fn table_set(words: &[String]) -> String {
    let words: Vec<String> = words.iter().map(|w| table_word(w)).collect();
    format!("{{{}}}", words.join(", "))
}

/// Left-aligned columns padded to the widest cell, two spaces apart.
fn table(rows: &[Vec<String>]) -> String {
    let columns = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..columns)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c + 1 == row.len() {
                line.push_str(cell);
            } else {
                let pad = widths[c] - cell.chars().count();
                let _ = write!(line, "{cell}{}  ", " ".repeat(pad));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn conv_table(r: &ConvolutionReport) -> String {
    let j = ReportJson::from(r);
    table(&[
        vec!["x1".into(), table_word(&j.x1)],
        vec!["x2".into(), table_word(&j.x2)],
        vec!["set".into(), table_set(&j.set)],
        vec!["min".into(), table_word(&j.min)],
        vec!["max".into(), table_word(&j.max)],
        vec!["interval".into(), table_set(&j.interval)],
        vec!["missing".into(), table_set(&j.missing)],
    ])
}

fn reports_table(reports: &[ReportJson]) -> String {
    let mut rows = vec![["x1", "x2", "min", "max", "set", "missing"].map(String::from).to_vec()];
    for r in reports {
        rows.push(vec![
            table_word(&r.x1),
            table_word(&r.x2),
            table_word(&r.min),
            table_word(&r.max),
            table_set(&r.set),
            table_set(&r.missing),
        ]);
    }
    table(&rows)
}

fn property_rows(props: &[PropertyResult]) -> Vec<Vec<String>> {
    let mut rows = vec![["property", "status", "checked", "passed", "detail"].map(String::from).to_vec()];
    for p in props {
        let status = serde_json::to_value(p.status).expect("status serializes");
        let detail = p.first_failure.clone().or_else(|| p.note.clone()).unwrap_or_default();
        rows.push(vec![
            p.name.clone(),
            status.as_str().unwrap_or_default().to_string(),
            p.checked.to_string(),
            p.passed.to_string(),
            detail,
        ]);
    }
    rows
}

fn coxeter_table(s: &CoxeterSummary) -> String {
    let mut head = vec![
        vec!["system".into(), s.system.clone()],
        vec!["order".into(), s.order.to_string()],
        vec!["pairs".into(), s.pairs.to_string()],
    ];
    if let Some(seed) = s.seed {
        head.push(vec!["seed".into(), seed.to_string()]);
    }
    head.push(vec!["ok".into(), s.ok.to_string()]);
    format!("{}\n{}", table(&head), table(&property_rows(&s.properties)))
}

fn geometry_table(s: &GeometrySummary) -> String {
    let head = vec![
        vec!["n".into(), s.n.to_string()],
        vec!["p".into(), s.p.to_string()],
        vec!["flags".into(), s.flags.to_string()],
        vec!["pairs".into(), s.pairs.to_string()],
        vec!["ok".into(), s.ok.to_string()],
    ];
    format!("{}\n{}", table(&head), table(&property_rows(&s.properties)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Outcome {
        let mut full = vec!["weylconv"];
        full.extend_from_slice(args);
        run_args(full, &Hooks::default())
    }

    #[test]
    fn conv_json() {
        let o = run(&["conv", "--type", "A", "--rank", "2", "--x1", "1 2", "--x2", "2 1"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let j: ReportJson = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(j.set, vec!["", "1", "1 2 1"]);
        assert!(j.missing.contains(&"2".to_string()));
    }

    #[test]
    fn conv_table_uses_e() {
        let o = run(&["conv", "--type", "A", "--rank", "2", "--x1", "1", "--x2", "1", "--format", "table"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("set       {e, 1}"), "{}", o.stdout);
        assert!(o.stdout.contains("min       e"));
    }

    #[test]
    fn usage_errors_exit_1() {
        assert_eq!(run(&["conv", "--type", "A", "--rank", "2", "--x1", "1 9", "--x2", ""]).code, 1);
        assert_eq!(run(&["conv", "--x1", "1", "--x2", ""]).code, 1);
        assert_eq!(run(&["frobnicate"]).code, 1);
        assert_eq!(run(&["verify-geometry", "--n", "3", "--p", "7"]).code, 1);
        assert_eq!(run(&["verify-coxeter", "--type", "A", "--rank", "2", "--samples", "0"]).code, 1);
        assert_eq!(run(&["--help"]).code, 0);
    }

    #[test]
    fn injected_violation_exits_2() {
        let drop_min = |sys: &CoxeterSystem, set: &mut ElementSet| {
            set.remove(&sys.identity());
        };
        let hooks = Hooks { mutate_set: Some(&drop_min) };
        let o = run_args(
            ["weylconv", "conv", "--type", "A", "--rank", "2", "--x1", "1 2", "--x2", "2 1"],
            &hooks,
        );
        assert_eq!(o.code, 2, "{}", o.stderr);
    }

    #[test]
    fn system_forms_agree() {
        let a = run(&["demazure", "--type", "I2", "--m", "5", "--x1", "1 2", "--x2", "1"]);
        let b = run(&["demazure", "--matrix", "[[1,5],[5,1]]", "--x1", "1 2", "--x2", "1"]);
        let c = run(&["demazure", "--system", r#"{"type":"I2","m":5}"#, "--x1", "1 2", "--x2", "1"]);
        assert_eq!(a.code, 0, "{}", a.stderr);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.stdout, c.stdout);
        assert_eq!(a.stdout, "{\"x1\":\"1 2\",\"x2\":\"1\",\"product\":\"1 2 1\",\"demazure\":\"1 2 1\"}\n");
    }

    #[test]
    fn bruhat_command() {
        let o = run(&["bruhat", "--type", "A", "--rank", "2", "--u", "1", "--w", "2 1"]);
        assert_eq!(o.stdout, "{\"u\":\"1\",\"w\":\"2 1\",\"leq\":true}\n");
        let o = run(&["bruhat", "--type", "I2", "--m", "inf", "--u", "1 2", "--w", "2 1"]);
        assert_eq!(o.stdout, "{\"u\":\"1 2\",\"w\":\"2 1\",\"leq\":false}\n");
    }
}
