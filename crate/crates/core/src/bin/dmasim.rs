use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dma_core::experiments;
use dma_core::output::{Format, Report};
use dma_core::scenario::Scenario;
use dma_core::{Error, Exec};

#[derive(Parser)]
#[command(name = "dmasim", about = "Frequency-selective DMA beamforming simulator")]
struct Cli {
    /// Scenario file; reference values are used for missing keys.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    /// Worker threads (0 lets rayon decide).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Overrides `sweep.attenuation` from the scenario.
    #[arg(long, global = true, value_enum)]
    attenuation: Option<Switch>,
    /// Run single-threaded regardless of the build features.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Resolve the sector design and write the resolved scenario.
    Design,
    /// Maximum full-gain half-angle versus tuning range.
    Coverage,
    /// Gain versus frequency at the planned operating point.
    FreqResponse {
        /// Azimuth in degrees.
        #[arg(long, allow_hyphen_values = true, default_value_t = -18.0)]
        phi: f64,
    },
    /// Planned, fixed-frequency and binary gains versus azimuth.
    GainSweep,
    /// Codebook and single-shot training sweep.
    Train {
        /// Single azimuth in degrees instead of the sweep.
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<f64>,
    },
    /// Achievable rates of the four strategies.
    Rate,
    /// Cross-check the solvers against the oracles.
    Verify,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) => 2,
        Error::InfeasibleDesign(_)
        | Error::CoverageInfeasible { .. }
        | Error::NoCrossover { .. }
        | Error::SectorEdge { .. }
        | Error::InfeasibleElement { .. } => 3,
        _ => 1,
    }
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let mut scenario = match &cli.scenario {
        Some(path) => Scenario::load(path)?,
        None => Scenario::default(),
    };
    if let Some(switch) = cli.attenuation {
        scenario.with_attenuation = matches!(switch, Switch::On);
    }
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };

    #[cfg(feature = "parallel")]
    if cli.threads > 0 {
        // Fails only if a pool already exists, which is harmless here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }

    let report = match &cli.command {
        Command::Design => experiments::design(&scenario)?,
        Command::Coverage => experiments::coverage(&scenario)?,
        Command::FreqResponse { phi } => experiments::freq_response(&scenario, phi.to_radians())?,
        Command::GainSweep => experiments::gain_sweep(&scenario, exec)?,
        Command::Train { phi } => experiments::train(&scenario, phi.map(f64::to_radians), exec)?,
        Command::Rate => experiments::rate(&scenario, exec)?,
        Command::Verify => experiments::verify(&scenario, exec)?,
    };
    let format = match cli.format {
        OutFormat::Csv => Format::Csv,
        OutFormat::Json => Format::Json,
    };
    for path in report.write(&cli.out, format, &scenario.fingerprint())? {
        println!("wrote {}", path.display());
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) if experiments::passed(&report) => ExitCode::SUCCESS,
        Ok(_) => {
            eprintln!("verification failed");
            ExitCode::from(4)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
