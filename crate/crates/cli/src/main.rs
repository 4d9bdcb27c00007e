//! `exres`: Betti tables, generic initial ideals and resonance of exterior
//! algebra ideals from JSON input files.
//!
//! Exit codes: 0 success, 1 computation failure or failed checks, 2 usage
//! or input errors.

mod commands;
mod input;

use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use exterior_resonance::initial::GinOptions;
use exterior_resonance::resolution::ResolutionOptions;
use exterior_resonance::scalar::FieldChoice;
use exterior_resonance::Error;

use commands::{BettiArgs, Output, ResonanceArgs};

/// Soft limit for resolution commands; matrices grow like C(n, d).
const WARN_VARS: usize = 10;

#[derive(Parser)]
#[command(name = "exres", version, about = "Graded ideals in exterior algebras")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Compute {
    /// Field: rational, prime, or prime:<p>.
    #[arg(long, default_value = "rational", value_parser = parse_field)]
    field: FieldChoice,
    /// Seed for every random choice.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent coordinate changes that must agree for gin.
    #[arg(long, default_value_t = 3)]
    trials: usize,
    /// Largest matrix dimension the resolution may build.
    #[arg(long, default_value_t = 4_000)]
    max_dim: usize,
}

impl Compute {
    fn resolution(&self) -> ResolutionOptions {
        ResolutionOptions {
            field: self.field,
            max_dimension: self.max_dim,
            ..Default::default()
        }
    }

    fn gin(&self) -> GinOptions {
        GinOptions {
            seed: self.seed,
            trials: self.trials,
            field: self.field,
            ..Default::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Orlik-Solomon ideal of an arrangement or matroid file.
    OsIdeal { file: String },
    /// Graded Betti table of an ideal, arrangement, matroid or graph file.
    Betti {
        file: String,
        /// Last homological step.
        #[arg(long, default_value_t = 4)]
        imax: usize,
        /// Report E/J instead of J.
        #[arg(long)]
        quotient: bool,
        /// Also compute the regularity and cross-check it against gin.
        #[arg(long)]
        regularity: bool,
        #[command(flatten)]
        compute: Compute,
    },
    /// Generic initial ideal with its agreement report.
    Gin {
        file: String,
        #[command(flatten)]
        compute: Compute,
    },
    /// Resonance variety R^p of the quotient E/J.
    Resonance {
        file: String,
        /// Cohomological degree.
        #[arg(long, default_value_t = 1)]
        p: usize,
        /// Sampled 1-forms when no structural result applies.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Last homological step for the 2-linear criterion.
        #[arg(long, default_value_t = 4)]
        imax: usize,
        #[command(flatten)]
        compute: Compute,
    },
    /// Linear strand against the prediction from resonance components.
    ConjectureB {
        file: String,
        /// Homological range, like 0..3 (inclusive).
        #[arg(long, default_value = "0..3", value_parser = parse_range)]
        irange: RangeInclusive<usize>,
        #[command(flatten)]
        compute: Compute,
    },
    /// Recompute every worked example and print a pass/fail ledger.
    #[command(name = "paper-demo")]
    Demo {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[command(flatten)]
        compute: Compute,
    },
}

fn parse_field(s: &str) -> Result<FieldChoice, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected a range like 0..3, got {s:?}");
    let (a, b) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .or_else(|| s.split_once('-'))
        .ok_or_else(bad)?;
    let (a, b) = (a.trim().parse::<usize>().map_err(|_| bad())?, b.trim().parse::<usize>().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn warn_size(subject: &input::Subject) {
    if let Ok(j) = subject.ideal() {
        if j.n() > WARN_VARS {
            eprintln!("warning: n = {} > {WARN_VARS}; matrices grow like C(n, d)", j.n());
        }
    }
}

fn run(cli: &Cli) -> Result<Output, Error> {
    match &cli.command {
        Command::OsIdeal { file } => commands::os_ideal(&input::load(file)?),
        Command::Betti { file, imax, quotient, regularity, compute } => {
            let subject = input::load(file)?;
            warn_size(&subject);
            let args = BettiArgs {
                i_max: *imax,
                quotient: *quotient,
                regularity: *regularity,
                opts: compute.resolution(),
                gin_opts: compute.gin(),
            };
            commands::betti(&subject, &args)
        }
        Command::Gin { file, compute } => {
            let subject = input::load(file)?;
            warn_size(&subject);
            commands::gin_cmd(&subject, &compute.gin())
        }
        Command::Resonance { file, p, samples, imax, compute } => {
            let subject = input::load(file)?;
            warn_size(&subject);
            let args = ResonanceArgs {
                p: *p,
                samples: *samples,
                seed: compute.seed,
                i_max: *imax,
                opts: compute.resolution(),
                gin_opts: compute.gin(),
            };
            commands::resonance(&subject, &args)
        }
        Command::ConjectureB { file, irange, compute } => {
            let subject = input::load(file)?;
            warn_size(&subject);
            commands::conjecture_b(&subject, irange.clone(), &compute.resolution())
        }
        Command::Demo { samples, compute } => {
            commands::demo(&compute.gin(), &compute.resolution(), *samples, compute.seed)
        }
    }
}

/// Input problems exit with 2, failed computations with 1.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::InvalidArgument(_)
        | Error::DimensionMismatch { .. }
        | Error::NonEssential { .. }
        | Error::ProportionalForms(..)
        | Error::Dependent => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("values serialize"));
            } else {
                print!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
