//! `ginlab`: sample non-Hermitian ensembles, tabulate exact curves and run
//! Monte Carlo verification suites.
//!
//! Exit codes: 0 success or pass, 1 statistical failure, 2 usage error,
//! 3 I/O failure.

mod args;
mod exact;
mod output;

use std::process::ExitCode;

use clap::Parser;
use ginlab::config::{Dim, OutputFormat, RunConfig, SEED_ENV};
use ginlab::ensembles::{sample_spectra, SamplerConfig, Spectrum};
use ginlab::mc_verify::{run_suites, Suite, SuiteOptions, DEFAULT_Z_THRESHOLD};
use ginlab::Error;

use args::{Cli, Command, SuiteArg};
use output::{Header, Sink};

/// Errors split by the exit code they map to.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Statistical(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Statistical(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Statistical(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidArgument(_) | Error::Parse(_) | Error::Overflow(_) | Error::Json(_) => Failure::Usage(msg),
            Error::Io(_) => Failure::Io(msg),
            Error::Sample { source, .. } if matches!(*source, Error::Io(_)) => Failure::Io(msg),
            _ => Failure::Statistical(msg),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn load_config(common: &args::Common) -> Outcome<RunConfig> {
    let file = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("cannot read config file {}: {e}", path.display())))?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::default(),
    };
    let env = std::env::var(SEED_ENV).ok();
    let cfg = file.overlay(common.to_config()).with_env_seed(env.as_deref())?;
    if let Some(t) = cfg.tau {
        if !t.is_finite() {
            return Err(Failure::Usage("tau must be finite".into()));
        }
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Outcome<u8> {
    match cli.command {
        Command::Sample { common } => {
            let cfg = load_config(&common)?;
            cmd_sample(&cfg)
        }
        Command::Exact { curve, common } => {
            let cfg = load_config(&common)?;
            let header = Header::new(&cfg);
            let table = exact::tabulate(curve, &cfg)?;
            let mut sink = Sink::open(cfg.out.as_deref())?;
            match cfg.format.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Csv => sink.write_table_csv(&header, &table)?,
                OutputFormat::Json => sink.write_json(&header, "table", &table.to_json())?,
            }
            sink.finish()?;
            Ok(0)
        }
        Command::Verify { suite, common } => {
            let cfg = load_config(&common)?;
            cmd_verify(suite, &cfg)
        }
    }
}

fn cmd_sample(cfg: &RunConfig) -> Outcome<u8> {
    let spec = cfg.ensemble()?;
    let samples = cfg.samples()?;
    let sampler = SamplerConfig::new(cfg.seed()).with_workers(cfg.workers()?);
    let spectra: Vec<Spectrum> = sample_spectra(&spec, samples, &sampler)?.collect::<ginlab::Result<_>>()?;

    let header = Header::new(cfg);
    let to_stdout = cfg.out.is_none();
    let mut sink = Sink::open(cfg.out.as_deref())?;
    match cfg.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => sink.write_spectra_csv(&header, &spectra)?,
        OutputFormat::Json => sink.write_json(&header, "rows", &output::spectra_rows_json(&spectra))?,
    }
    sink.finish()?;

    let n = spectra.len() as f64;
    let mean_real = spectra.iter().map(|s| s.real_count() as f64).sum::<f64>() / n;
    let mean_radius = spectra.iter().map(|s| s.spectral_radius()).sum::<f64>() / n;
    let max_radius = spectra.iter().map(|s| s.spectral_radius()).fold(0.0, f64::max);
    let summary = format!(
        "samples={} mean_real_count={mean_real:?} mean_spectral_radius={mean_radius:?} max_spectral_radius={max_radius:?}",
        spectra.len()
    );
    // keep stdout clean when it carries the CSV
    if to_stdout {
        eprintln!("{summary}");
    } else {
        println!("{summary}");
    }
    Ok(0)
}

fn cmd_verify(suite: SuiteArg, cfg: &RunConfig) -> Outcome<u8> {
    if cfg.dim() == Dim::Infinite {
        return Err(Failure::Usage("verify needs a finite dim".into()));
    }
    let spec = cfg.ensemble()?;
    let suites: Vec<Suite> = match suite {
        SuiteArg::All => Suite::ALL.into_iter().filter(|s| s.supports(&spec)).collect(),
        SuiteArg::Density => vec![Suite::Density],
        SuiteArg::RealCount => vec![Suite::RealCount],
        SuiteArg::Pair => vec![Suite::Pair],
        SuiteArg::Gap => vec![Suite::Gap],
    };
    let opts = SuiteOptions {
        seed: cfg.seed(),
        samples: cfg.samples()?,
        workers: cfg.workers()?,
        step: cfg.step,
        extent: cfg.s_max,
        threshold: cfg.z_threshold.unwrap_or(DEFAULT_Z_THRESHOLD),
    };
    let reports = run_suites(&spec, &suites, &opts)?;
    let pass = reports.iter().all(|r| r.pass);

    let header = Header::new(cfg);
    let mut sink = Sink::open(cfg.out.as_deref())?;
    match cfg.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => {
            let body = serde_json::json!({ "pass": pass, "reports": reports });
            sink.write_json(&header, "verification", &body)?
        }
        OutputFormat::Csv => sink.write_reports_csv(&header, &reports)?,
    }
    sink.finish()?;
    for r in &reports {
        eprintln!(
            "{}: {} (max |z| = {:.3}, bins = {})",
            r.statistic,
            if r.pass { "pass" } else { "FAIL" },
            r.max_abs_z(),
            r.z.len()
        );
    }
    Ok(if pass { 0 } else { 1 })
}
