use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use esmix_cli::{
    execute, parse_config_with, parse_plot_spec, write_outputs, CliError, Command, ConfigError, Overrides,
};
use esmix_core::solver::Integrator;
use esmix_core::Variant;

#[derive(Parser)]
#[command(name = "esmix", version, about = "Two-species BGK / ES-BGK mixture relaxation and Chapman-Enskog tables")]
struct Args {
    #[command(subcommand)]
    command: Cmd,

    /// JSON run configuration
    #[arg(short = 'c', long = "config", global = true)]
    config: Option<PathBuf>,

    /// Output directory (CSV goes to stdout when omitted)
    #[arg(short = 'o', long = "out", global = true)]
    out: Option<PathBuf>,

    /// Time integrator: rk4 or exp
    #[arg(long, global = true)]
    integrator: Option<Integrator>,

    /// Relaxation operator: bgk, es-self, es-full-a or es-full-b
    #[arg(long, global = true)]
    variant: Option<Variant>,

    /// Plot column Y against column X as SVG; repeatable
    #[arg(long = "plot", value_name = "X,Y", global = true)]
    plots: Vec<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Check the parameter bundle
    Validate,
    /// Homogeneous relaxation run
    Relax,
    /// Periodic 1D shear or density wave run
    Wave,
    /// Chapman-Enskog constants, prefactors and rates
    Coeffs,
    /// Persistence-of-velocity table
    Persistence,
    /// Measured vs analytic rates over a delta or alpha sweep
    Scan,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Validate => Command::Validate,
            Cmd::Relax => Command::Relax,
            Cmd::Wave => Command::Wave,
            Cmd::Coeffs => Command::Coeffs,
            Cmd::Persistence => Command::Persistence,
            Cmd::Scan => Command::Scan,
        }
    }
}

fn run(args: Args) -> Result<(), CliError> {
    let cmd = Command::from(args.command);
    let path = args.config.ok_or_else(|| CliError::Usage("a config file is required (-c <config>)".into()))?;
    let text = fs::read_to_string(&path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let plots = args.plots.iter().map(|p| parse_plot_spec(p)).collect::<Result<Vec<_>, _>>()?;
    let overrides = Overrides { variant: args.variant, integrator: args.integrator, output: args.out };
    let cfg = match parse_config_with(&text, &overrides) {
        Err(ConfigError::ValidationFailure(v)) if cmd == Command::Validate => {
            for x in &v {
                println!("{x}");
            }
            return Err(ConfigError::ValidationFailure(v).into());
        }
        other => other?,
    };
    match execute(cmd, &cfg)? {
        None => println!("ok: parameters admissible"),
        Some(table) => {
            let (stdout, written) = write_outputs(cmd, &table, cfg.output.as_deref(), &plots)?;
            if let Some(csv) = stdout {
                print!("{csv}");
            }
            for p in written {
                eprintln!("wrote {}", p.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
