//! `entwave`: wavelet inspection, transforms, verification suites and state
//! sampling from the command line.
//!
//! Exit status: 0 success, 1 a verification tolerance was missed, 2 an input
//! file is malformed or unreadable, 3 a parameter or precondition is invalid.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use entwave::ccwt::{inverse_with, transform};
use entwave::fock::StateDescriptor;
use entwave::format::{load_coefficients, load_field, save_coefficients, save_field, write_atomic};
use entwave::verify::{report_csv, report_table, run_suite, Suite};
use entwave::wavelets::{c_psi_1d, RadialProfile};
use entwave::{Error, Field, MotherWavelet, WaveletKind};

use config::{Overrides, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "entwave", version, about = "Complex-plane continuous wavelet transforms")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// key=value settings applied before the flags below
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    grid_n: Option<usize>,
    #[arg(long, global = true)]
    grid_extent: Option<f64>,
    /// number of log-spaced scales
    #[arg(long, global = true)]
    scales: Option<usize>,
    #[arg(long, global = true)]
    mu_min: Option<f64>,
    #[arg(long, global = true)]
    mu_max: Option<f64>,
    /// emhw, lg or mexican-hat-1d
    #[arg(long, global = true)]
    kind: Option<String>,
    /// Laguerre coefficients K_0,K_1,...
    #[arg(long, global = true, allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// direct or fft
    #[arg(long, global = true)]
    engine: Option<String>,
    #[arg(long, short, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// ewg or csv, for field outputs
    #[arg(long, global = true)]
    format: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect a mother wavelet
    Wavelet {
        #[command(subcommand)]
        action: WaveletCmd,
    },
    /// Forward or inverse transform of a file
    Ccwt {
        #[command(subcommand)]
        action: CcwtCmd,
    },
    /// Run a verification suite: parseval, kernel, constants, oracles or all
    Verify {
        suite: String,
        /// same as --config
        config_path: Option<PathBuf>,
    },
    /// Two-mode states in the entangled representation
    Fock {
        #[command(subcommand)]
        action: FockCmd,
    },
}

#[derive(Subcommand, Debug)]
enum WaveletCmd {
    /// Print kind, coefficients, admissibility defect and C'psi
    Info,
}

#[derive(Subcommand, Debug)]
enum CcwtCmd {
    /// Field (EWG1 or CSV) to coefficients (EWC1)
    Forward { input: PathBuf },
    /// Coefficients (EWC1) to a field on the coefficient grid
    Inverse {
        input: PathBuf,
        /// field to compare the reconstruction against
        #[arg(long, value_name = "PATH")]
        reference: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum FockCmd {
    /// Sample `number:m,n` or `coherent:re1,im1,re2,im2` on the grid
    Sample { descriptor: String },
}

enum Failure {
    Tolerance,
    Input(String),
    Precondition(String),
}

impl Failure {
    fn input(path: &Path, e: Error) -> Self {
        Failure::Input(format!("{}: {e}", path.display()))
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Tolerance => 1,
            Failure::Input(_) => 2,
            Failure::Precondition(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Format(_) | Error::Io(_) => Failure::Input(e.to_string()),
            _ => Failure::Precondition(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Input(m) | Failure::Precondition(m) => eprintln!("error: {m}"),
                Failure::Tolerance => eprintln!("error: verification tolerances not met"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn configure_threads() -> Outcome {
    let Ok(v) = std::env::var("ENTWAVE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Precondition(format!("ENTWAVE_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Precondition(format!("thread pool: {e}")))
}

fn load_config(cli: &Cli, extra: Option<&PathBuf>) -> std::result::Result<RunConfig, Failure> {
    let mut cfg = RunConfig::default();
    for path in [cli.common.config.as_ref(), extra].into_iter().flatten() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::input(path, e.into()))?;
        cfg.apply_text(&text).map_err(|e| Failure::Precondition(format!("{}: {e}", path.display())))?;
    }
    let c = &cli.common;
    cfg.apply_overrides(&Overrides {
        grid_n: c.grid_n,
        grid_extent: c.grid_extent,
        scales: c.scales,
        mu_min: c.mu_min,
        mu_max: c.mu_max,
        kind: c.kind.clone(),
        coeffs: c.coeffs.clone(),
        engine: c.engine.clone(),
        format: c.format.clone(),
        output: c.output.clone(),
    })
    .map_err(|e| Failure::Precondition(e.to_string()))?;
    Ok(cfg)
}

fn run(cli: Cli) -> Outcome {
    configure_threads()?;
    match &cli.command {
        Command::Wavelet { action: WaveletCmd::Info } => wavelet_info(&load_config(&cli, None)?),
        Command::Ccwt { action } => {
            let cfg = load_config(&cli, None)?;
            match action {
                CcwtCmd::Forward { input } => ccwt_forward(&cfg, input),
                CcwtCmd::Inverse { input, reference } => ccwt_inverse(&cfg, input, reference.as_deref()),
            }
        }
        Command::Verify { suite, config_path } => {
            let suite: Suite = suite.parse().map_err(|e: Error| {
                Failure::Precondition(format!("{e}\nusage: entwave verify <{}> [CONFIG_PATH]", Suite::NAMES.join("|")))
            })?;
            verify(&load_config(&cli, config_path.as_ref())?, suite)
        }
        Command::Fock { action: FockCmd::Sample { descriptor } } => fock_sample(&load_config(&cli, None)?, descriptor),
    }
}

fn wavelet_info(cfg: &RunConfig) -> Outcome {
    let w = cfg.wavelet()?;
    if w.kind() == WaveletKind::MexicanHat1D {
        let profile = RadialProfile::from_fn(1e-3, 1e-3, 12_000, |p| w.fourier_1d(p).unwrap_or(0.0))?;
        println!("kind: {}", w.kind());
        println!("C_psi: {:.9}", c_psi_1d(&profile)?);
        return Ok(());
    }
    // the two-term family member with K = (1/2, 1/2) is the entangled Mexican hat
    let kind = if w.coeffs() == MotherWavelet::emhw().coeffs() { WaveletKind::Emhw } else { w.kind() };
    let coeffs: Vec<String> = w.coeffs().iter().map(|c| format!("{c:?}")).collect();
    let defect = w.admissibility_defect().norm();
    println!("kind: {kind}");
    println!("coeffs: {}", coeffs.join(","));
    println!("admissibility defect: {defect:.6e}");
    match w.c_psi_prime() {
        Ok(c) => println!("C'psi: {c:.9}"),
        Err(Error::NonAdmissible { defect }) => {
            println!("C'psi: undefined");
            eprintln!("warning: NonAdmissible: defect {defect:.6e}");
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn ccwt_forward(cfg: &RunConfig, input: &Path) -> Outcome {
    let w = cfg.wavelet()?;
    let scales = cfg.scales()?;
    let out = cfg.output()?;
    let g = load_field(input).map_err(|e| Failure::input(input, e))?;
    let coeffs = transform(&g, &w, &scales, cfg.engine)?;
    save_coefficients(&out, &coeffs)?;
    let k = coeffs.kappa_grid();
    println!(
        "wrote {} scales on [{}, {}] x {}x{} kappa nodes ({} engine) to {}",
        scales.len(),
        scales.mu_min(),
        scales.mu_max(),
        k.nx,
        k.ny,
        cfg.engine,
        out.display()
    );
    Ok(())
}

fn ccwt_inverse(cfg: &RunConfig, input: &Path, reference: Option<&Path>) -> Outcome {
    let w = cfg.wavelet()?;
    let out = cfg.output()?;
    let coeffs = load_coefficients(input).map_err(|e| Failure::input(input, e))?;
    let reference = match reference {
        Some(p) => Some(load_field(p).map_err(|e| Failure::input(p, e))?),
        None => None,
    };
    let c_prime = w.c_psi_prime()?;
    let g = inverse_with(&coeffs, &w, c_prime, coeffs.kappa_grid(), cfg.engine)?;
    save_field(&out, &g, cfg.format)?;
    println!("wrote reconstruction to {}", out.display());
    if let Some(r) = reference {
        if !r.grid().same_nodes(g.grid()) {
            return Err(Failure::Precondition("reference field is on a different grid".into()));
        }
        let diff: Vec<_> = g.values().iter().zip(r.values()).map(|(a, b)| a - b).collect();
        let err = Field::new(*g.grid(), diff)?.l2_norm() / r.l2_norm().max(f64::MIN_POSITIVE);
        println!("relative L2 error vs reference: {err:.6e}");
    }
    Ok(())
}

fn verify(cfg: &RunConfig, suite: Suite) -> Outcome {
    let out = cfg.output.clone().unwrap_or_else(|| PathBuf::from(format!("verify-{suite}.csv")));
    let rows = run_suite(suite, &cfg.suite)?;
    write_atomic(&out, report_csv(&rows).as_bytes())?;
    print!("{}", report_table(&rows));
    println!("report written to {}", out.display());
    if rows.iter().all(|r| r.passed()) {
        Ok(())
    } else {
        Err(Failure::Tolerance)
    }
}

fn fock_sample(cfg: &RunConfig, descriptor: &str) -> Outcome {
    let state: StateDescriptor = descriptor.parse()?;
    let out = cfg.output()?;
    let field = state.sample(&cfg.grid()?)?;
    save_field(&out, &field, cfg.format)?;
    println!("wrote {state} on a {}x{} grid to {}", field.grid().nx, field.grid().ny, out.display());
    Ok(())
}
