use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use xxrect::config::{parse_config, ConfigError, RunConfig};
use xxrect::oracle::run_equivalence_suite;
use xxrect::sweep::{self, format_float};
use xxrect::{spectral, transport, Error};

#[derive(Parser)]
#[command(name = "xxrect", version, about = "Heat transport and rectification in XX spin chains")]
struct Cli {
    /// JSON run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write results here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for sweeps
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mode energies and boundary weights
    Spectrum,
    /// Steady-state mode occupations
    Steady,
    /// Particle and energy current
    Current,
    /// Forward and reversed heat current and the rectification factor
    Rectify,
    /// Evaluate the configured two-parameter grid
    Sweep,
    /// Cross-check the mode formulas against the dense Liouvillian
    Verify {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Random chains per chain length
        #[arg(long, default_value_t = 20)]
        draws: usize,
        /// Chain lengths to test (at most 6)
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3])]
        sizes: Vec<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let category = e.category();
            eprintln!("error[{}]: {e}", category.name());
            ExitCode::from(category.exit_code() as u8)
        }
    }
}

fn load(cli: &Cli) -> Result<RunConfig, Error> {
    let path = cli.config.as_ref().ok_or_else(|| ConfigError::Schema {
        field: "--config".into(),
        message: "this subcommand needs a configuration file".into(),
    })?;
    let text = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_config(&text)?)
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Error::io(p, e))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_all(path: Option<&Path>, text: &str) -> Result<(), Error> {
    let target = path.map(Path::to_path_buf).unwrap_or_else(|| "<stdout>".into());
    let mut out = open_output(path)?;
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(target, e))
}

fn run(cli: &Cli) -> Result<(), Error> {
    let output = cli.output.as_deref();
    match &cli.command {
        Command::Verify { seed, draws, sizes } => verify(*seed, *draws, sizes, output),
        Command::Sweep => {
            let config = load(cli)?;
            let threads = cli
                .threads
                .or(config.threads)
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let rows = sweep::run_sweep(&config, threads)?;
            let path = output.or(config.output.as_deref());
            let target = path.map(Path::to_path_buf).unwrap_or_else(|| "<stdout>".into());
            sweep::emit_csv(&rows, open_output(path)?).map_err(|e| Error::io(target, e))
        }
        Command::Spectrum => {
            let (chain, _) = load(cli)?.point(&[])?;
            let data = spectral::diagonalize(&chain)?;
            let mut text = String::from("k,eps,g_left,g_right\n");
            for k in 0..data.len() {
                text += &format!(
                    "{k},{},{},{}\n",
                    format_float(data.eps[k]),
                    format_float(data.g_left[k]),
                    format_float(data.g_right[k])
                );
            }
            for w in &data.warnings {
                eprintln!("warning: {w:?}");
            }
            write_all(output, &text)
        }
        Command::Steady => {
            let (chain, baths) = load(cli)?.point(&[])?;
            let modes = spectral::diagonalize(&chain)?;
            let occupations = transport::steady_occupations(&modes, baths);
            let mut text = String::from("k,eps,occupation\n");
            for (k, n) in occupations.iter().enumerate() {
                let n = n.map_or("nan".to_string(), format_float);
                text += &format!("{k},{},{n}\n", format_float(modes.eps[k]));
            }
            write_all(output, &text)
        }
        Command::Current => {
            let (chain, baths) = load(cli)?.point(&[])?;
            let modes = spectral::boundary_modes(&chain)?;
            let t = transport::transport(&modes, baths, chain.gamma());
            let text = format!(
                "J_N,J_E\n{},{}\n",
                format_float(t.particle_current),
                format_float(t.energy_current)
            );
            write_all(output, &text)
        }
        Command::Rectify => {
            let (chain, baths) = load(cli)?.point(&[])?;
            let r = transport::rectify(&chain, baths)?;
            let flags: Vec<&str> = sweep::flags(&r).iter().map(|f| f.token()).collect();
            let text = format!(
                "J_fwd,J_rev,R,flags\n{},{},{},{}\n",
                format_float(r.j_fwd),
                format_float(r.j_rev),
                format_float(r.r.unwrap_or(f64::NAN)),
                flags.join(";")
            );
            write_all(output, &text)
        }
    }
}

fn verify(seed: u64, draws: usize, sizes: &[usize], output: Option<&Path>) -> Result<(), Error> {
    let report = run_equivalence_suite(seed, sizes, draws)?;
    let mut text = format!(
        "seed {seed}, {} random chains (N in {sizes:?})\n{:<28} {:>6} {:>12} {:>10}\n",
        report.draws, "check", "result", "max error", "tolerance"
    );
    for c in &report.checks {
        text += &format!(
            "{:<28} {:>6} {:>12.3e} {:>10.0e}\n",
            c.name,
            if c.passed() { "PASS" } else { "FAIL" },
            c.max_error,
            c.tolerance
        );
    }
    write_all(output, &text)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Error::Check("oracle equivalence failed".into()))
    }
}
