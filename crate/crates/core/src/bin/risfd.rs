use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use risfd::experiment::{self, Mode, Overrides, Preset, RunError, Sweep};

/// Monte Carlo and analytic error rates for RIS-assisted full-duplex SSK.
///
/// Settings are layered: preset defaults first, then the config file, then
/// any flag given here.
#[derive(Debug, Parser)]
#[command(name = "risfd", version)]
struct Args {
    /// mc, analytic, asymptotic or all
    #[arg(long, value_parser = parse_with::<Mode>)]
    mode: Option<Mode>,
    /// gcq-convergence, gcq-accuracy, clt-validation, li-sweep or sic-sweep
    #[arg(long, value_parser = parse_with::<Preset>)]
    preset: Option<Preset>,
    /// key = value file; `#` starts a comment
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of RIS elements
    #[arg(long = "L")]
    elements: Option<usize>,
    /// Number of transmit antennas (power of two)
    #[arg(long = "nt")]
    tx_antennas: Option<usize>,
    /// Residual self-interference level in [0, 1]
    #[arg(long)]
    kappa: Option<f64>,
    /// Loop-interference power
    #[arg(long = "omega")]
    omega_i: Option<f64>,
    /// SNR grid in dB: start:step:stop or a comma list
    #[arg(long, allow_hyphen_values = true)]
    snr: Option<String>,
    /// Monte Carlo trials per point
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Chebyshev–Gauss quadrature order
    #[arg(long = "gcq-order")]
    gcq_order: Option<usize>,
    /// Sweep one parameter, e.g. kappa=0,0.05,0.1 or L=36,64
    #[arg(long, allow_hyphen_values = true, value_parser = parse_with::<Sweep>)]
    sweep: Option<Sweep>,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for the Monte Carlo engine
    #[arg(long)]
    threads: Option<usize>,
}

fn parse_with<T: std::str::FromStr<Err = RunError>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: RunError| e.to_string())
}

impl Args {
    fn overrides(&self) -> Result<Overrides, RunError> {
        Ok(Overrides {
            mode: self.mode,
            preset: self.preset,
            elements: self.elements,
            tx_antennas: self.tx_antennas,
            kappa: self.kappa,
            omega_i: self.omega_i,
            snr_grid: self.snr.as_deref().map(experiment::parse_grid).transpose()?,
            trials: self.trials,
            seed: self.seed,
            gcq_order: self.gcq_order,
            sweep: self.sweep.clone(),
            output_path: self.out.clone(),
            workers: self.threads,
        })
    }
}

fn run(args: Args) -> Result<(), RunError> {
    let file = match &args.config {
        Some(path) => Overrides::from_config(&std::fs::read_to_string(path)?)?,
        None => Overrides::default(),
    };
    let spec = args.overrides()?.or(file).into_spec()?;
    let rows = experiment::run(&spec)?;
    experiment::emit_csv(&rows, spec.output_path.as_deref())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("risfd: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
