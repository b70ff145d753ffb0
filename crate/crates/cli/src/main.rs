//! `dgreen`: Green's functions, step propagation and stability diagnostics
//! for dispersive convolution schemes.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 invalid configuration,
//! 3 inadmissible scheme, 4 spectral memory budget exceeded, 5 failed check
//! under `--strict`.

mod commands;
mod config;
mod failure;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Run, DEFAULT_GROWTH_TOLERANCE};
use config::{parse_n_list, OutputArgs, RunConfig, SchemeArgs};
use failure::Failure;

#[derive(Parser, Debug)]
#[command(name = "dgreen", version, about = "Green's functions of dispersive convolution schemes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stencil, expansion coefficients and admissibility.
    Coeffs {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Green's function with both explicit approximations.
    Green {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Propagates the step `1_{|x| <= half-width}` up to time t.
    Evolve {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, allow_negative_numbers = true)]
        dx: f64,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        half_width: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// `‖𝒢ⁿ‖₁ / n^{1/8}` against its limit.
    Growth {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value = "1000,10000,100000")]
        n_list: String,
        /// Largest accepted final relative error.
        #[arg(long, default_value_t = DEFAULT_GROWTH_TOLERANCE)]
        tolerance: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Generalized-Gaussian envelope constants and one-sided sums.
    Bounds {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value = "250,500,1000,2000")]
        n_list: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Uniform bound of the scheme on Heaviside data.
    Bv {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value = "100,1000,10000")]
        n_list: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn run(cli: Cli) -> Result<(), Failure> {
    let make = |name: &'static str, scheme: &SchemeArgs, output: &OutputArgs| -> Result<Run, Failure> {
        let mut config = RunConfig::new(name, scheme)?;
        config.method = output.method;
        Ok(Run {
            config,
            output: output.clone(),
            require_admissible: scheme.require_admissible,
        })
    };
    match cli.command {
        Command::Coeffs { scheme, output } => commands::coeffs(&make("coeffs", &scheme, &output)?),
        Command::Green { scheme, n, output } => {
            if n == 0 {
                return Err(Failure::invalid("--n must be a positive integer"));
            }
            let mut r = make("green", &scheme, &output)?;
            r.config.n = Some(n);
            commands::green_cmd(&r, n)
        }
        Command::Evolve { scheme, dx, t, half_width, output } => {
            let mut r = make("evolve", &scheme, &output)?;
            r.config.dx = Some(dx);
            r.config.t = Some(t);
            r.config.half_width = Some(half_width);
            commands::evolve_cmd(&r, dx, t, half_width)
        }
        Command::Growth { scheme, n_list, tolerance, output } => {
            let mut r = make("growth", &scheme, &output)?;
            let list = parse_n_list(&n_list)?;
            r.config.n_list = Some(list.clone());
            r.config.tolerance = Some(tolerance);
            commands::growth_cmd(&r, &list, tolerance)
        }
        Command::Bounds { scheme, n_list, output } => {
            let mut r = make("bounds", &scheme, &output)?;
            let list = parse_n_list(&n_list)?;
            r.config.n_list = Some(list.clone());
            commands::bounds_cmd(&r, &list)
        }
        Command::Bv { scheme, n_list, output } => {
            let mut r = make("bv", &scheme, &output)?;
            let list = parse_n_list(&n_list)?;
            r.config.n_list = Some(list.clone());
            commands::bv_cmd(&r, &list)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("dgreen: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
