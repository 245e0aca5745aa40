use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use yamabif::family::ProductFamily;
use yamabif::rational::{parse_rational, BigRational};
use yamabif::report::{analyze, diagram_rows, write_diagram_csv, FactorSource};
use yamabif::Error;

#[derive(Parser)]
#[command(
    name = "yamabif",
    version,
    about = "Bifurcation analysis of Yamabe product families g0 + lambda*g1"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degeneracy instants, index jumps and rigidity intervals over a window.
    Analyze {
        #[command(flatten)]
        pair: PairArgs,
        /// Add Yamabe obstruction certificates at instants and interval midpoints.
        #[arg(long)]
        obstruction: bool,
        /// Output path for the JSON report (stdout if omitted).
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Sample the sigma branches for plotting; writes CSV.
    Diagram {
        #[command(flatten)]
        pair: PairArgs,
        /// Number of lambda samples across the window.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Only branches with i, j <= this index.
        #[arg(long)]
        max_index: Option<usize>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Write a catalog spectrum (sphere:n:count or rp:n:count) as a spectrum file.
    Spectrum {
        descriptor: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PairArgs {
    /// Factor 0: catalog descriptor (sphere:n:count, rp:n:count) or spectrum file.
    factor0: String,
    /// Factor 1, scaled by lambda.
    factor1: String,
    /// Window bounds as exact rationals, e.g. --window 1/10 3.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], required = true, allow_hyphen_values = true)]
    window: Vec<String>,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        Failure { code: 1, err }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::DegeneratePair => 2,
        Error::InsufficientTruncation { .. } => 3,
        _ => 1,
    }
}

/// Maps a library error to its exit code, adding the catalog count hint for
/// truncation failures.
fn engine_failure(err: Error, sources: &[FactorSource; 2]) -> Failure {
    let code = exit_code(&err);
    let hint = match &err {
        Error::InsufficientTruncation { factor, .. } => sources[*factor].truncation_hint(&err),
        _ => None,
    };
    let err = match hint {
        Some(h) => anyhow::Error::new(err).context(h),
        None => anyhow::Error::new(err),
    };
    Failure { code, err }
}

struct Pair {
    sources: [FactorSource; 2],
    family: ProductFamily,
    lo: BigRational,
    hi: BigRational,
}

fn load_pair(args: &PairArgs) -> Result<Pair, Failure> {
    let sources = [
        FactorSource::parse(&args.factor0).map_err(anyhow::Error::new)?,
        FactorSource::parse(&args.factor1).map_err(anyhow::Error::new)?,
    ];
    let f0 = sources[0]
        .load()
        .with_context(|| format!("loading factor 0 from {}", args.factor0))?;
    let f1 = sources[1]
        .load()
        .with_context(|| format!("loading factor 1 from {}", args.factor1))?;
    let family = ProductFamily::new(f0, f1).map_err(anyhow::Error::new)?;
    let lo = parse_rational(&args.window[0]).context("window lower bound")?;
    let hi = parse_rational(&args.window[1]).context("window upper bound")?;
    Ok(Pair {
        sources,
        family,
        lo,
        hi,
    })
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match output {
        Some(p) => write_atomic(p, bytes),
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze {
            pair,
            obstruction,
            output,
        } => {
            let p = load_pair(&pair)?;
            let report = analyze(&p.family, &p.lo, &p.hi, obstruction)
                .map_err(|e| engine_failure(e, &p.sources))?;
            let json = report.to_json().map_err(anyhow::Error::new)?;
            emit(output.as_deref(), json.as_bytes())?;
        }
        Command::Diagram {
            pair,
            samples,
            max_index,
            output,
        } => {
            let p = load_pair(&pair)?;
            let rows = diagram_rows(&p.family, &p.lo, &p.hi, samples, max_index)
                .map_err(|e| engine_failure(e, &p.sources))?;
            let mut buf = Vec::new();
            write_diagram_csv(&rows, &mut buf).map_err(anyhow::Error::new)?;
            emit(output.as_deref(), &buf)?;
        }
        Command::Spectrum { descriptor, output } => {
            let source = FactorSource::parse(&descriptor).map_err(anyhow::Error::new)?;
            if !matches!(source, FactorSource::Catalog { .. }) {
                return Err(anyhow::anyhow!(
                    "expected a catalog descriptor like sphere:3:10 or rp:2:5, got {descriptor:?}"
                )
                .into());
            }
            let spectrum = source.load().map_err(anyhow::Error::new)?;
            let mut json = spectrum.to_json().map_err(anyhow::Error::new)?;
            json.push('\n');
            emit(output.as_deref(), json.as_bytes())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, err }) => {
            eprintln!("error: {err:#}");
            ExitCode::from(code)
        }
    }
}
