use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, Outcome, RunOptions, Table};
use crate::config::{CaseConfig, Format};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "qcbound", version, about = "Dirichlet eigenvalue bounds for divergence-form operators")]
pub struct Cli {
    /// Case configuration (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for the data-parallel loops.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for sampling-based validators.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert a coefficient matrix to its dilatation or back.
    Convert(ConvertArgs),
    /// Evaluate the requested bounds.
    Bounds,
    /// Evaluate bounds and check them against FEM eigenvalues.
    Verify,
    /// Print the Poincare, stability and quasidisc constants.
    Constants(ConstantsArgs),
    /// Export the mesh of the configured domain.
    Mesh(MeshArgs),
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a11: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a12: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a22: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu_im: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long, default_value_t = std::f64::consts::PI)]
    pub area: f64,
}

#[derive(Debug, Args)]
pub struct MeshArgs {
    /// Refinement level (0 is the initial mesh).
    #[arg(long, default_value_t = 0)]
    pub level: usize,
}

/// What a command produced: text for the output sink and an exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Response {
    pub body: String,
    pub exit_code: i32,
    pub diagnostic: Option<String>,
}

impl Response {
    fn ok(body: String) -> Self {
        Self { body, exit_code: 0, diagnostic: None }
    }

    fn failed(e: CliError) -> Self {
        Self { body: String::new(), exit_code: e.exit_code(), diagnostic: Some(e.to_string()) }
    }
}

fn load(cli: &Cli) -> CliResult<CaseConfig> {
    let path = cli.config.as_ref().ok_or_else(|| CliError::config("this command needs --config"))?;
    CaseConfig::load(path)
}

fn format_for(cli: &Cli, cfg: Option<&CaseConfig>) -> Option<Format> {
    cli.format.or_else(|| cfg.and_then(|c| c.output.as_ref()).and_then(|o| o.format))
}

fn render_table(t: &Table, format: Option<Format>) -> String {
    match format {
        Some(Format::Json) => commands::table_json(t),
        Some(Format::Csv) => commands::table_csv(t),
        None => commands::table_text(t),
    }
}

fn render_report(o: &Outcome, format: Option<Format>) -> Response {
    let body = match format {
        Some(Format::Csv) => o.report.to_csv(),
        _ => o.report.to_json(),
    };
    match &o.failure {
        None => Response::ok(body),
        Some(e) => Response { body, exit_code: e.exit_code(), diagnostic: Some(e.to_string()) },
    }
}

fn dispatch(cli: &Cli) -> CliResult<(Response, Option<PathBuf>)> {
    let opts = RunOptions { seed: cli.seed, ..RunOptions::default() };
    let mut sink = cli.output.clone();
    let resp = match &cli.command {
        Command::Convert(a) => {
            let matrix = match (a.a11, a.a12, a.a22) {
                (Some(x), Some(y), Some(z)) => Some([x, y, z]),
                (None, None, None) => None,
                _ => return Err(CliError::config("a matrix needs all of --a11, --a12, --a22")),
            };
            let mu = match (a.mu_re, a.mu_im) {
                (None, None) => None,
                (re, im) => Some([re.unwrap_or(0.0), im.unwrap_or(0.0)]),
            };
            Response::ok(render_table(&commands::convert(matrix, mu)?, cli.format))
        }
        Command::Constants(a) => Response::ok(render_table(&commands::constants(a.r, a.beta, a.k, a.area)?, cli.format)),
        Command::Mesh(a) => {
            let cfg = load(cli)?;
            sink = sink.or_else(|| cfg.output.as_ref().and_then(|o| o.path.clone()));
            Response::ok(commands::mesh(&cfg, a.level)?)
        }
        Command::Bounds | Command::Verify => {
            let cfg = load(cli)?;
            sink = sink.or_else(|| cfg.output.as_ref().and_then(|o| o.path.clone()));
            let outcome = if matches!(cli.command, Command::Verify) {
                commands::verify(&cfg, opts)?
            } else {
                Outcome { report: commands::bounds(&cfg, opts)?, failure: None }
            };
            render_report(&outcome, format_for(cli, Some(&cfg)))
        }
    };
    Ok((resp, sink))
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(CliError::config("--threads must be at least 1")),
        #[cfg(feature = "parallel")]
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::config(format!("cannot start thread pool: {e}")))?;
            Ok(pool.install(f))
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(f()),
    }
}

/// Runs a parsed command line; writes the body to the chosen sink.
pub fn run(cli: &Cli) -> Response {
    let result = with_threads(cli.threads, || dispatch(cli)).and_then(|r| r);
    let (resp, sink) = match result {
        Ok(x) => x,
        Err(e) => return Response::failed(e),
    };
    if let Some(path) = sink {
        if let Err(e) = std::fs::write(&path, &resp.body) {
            return Response::failed(CliError::config(format!("cannot write {}: {e}", path.display())));
        }
        return Response { body: String::new(), ..resp };
    }
    resp
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let resp = run(&cli);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(resp.body.as_bytes());
    if let Some(d) = &resp.diagnostic {
        eprintln!("error: {d}");
    }
    resp.exit_code
}
