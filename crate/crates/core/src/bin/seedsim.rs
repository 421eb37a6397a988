use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use seedsim::config::{load_config, load_orientation_matrix, preset_config, Preset};
use seedsim::experiment::run_experiment;
use seedsim::fiber::{acg_moment, build_tensors, d2_over_d1, restrict_2d};
use seedsim::model::ParameterSet;

/// Cell seeding simulations in porous scaffolds.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// Overrides `output_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one of the reproduction presets: fig2, fig3, fig4, fig5.
    Preset {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the moment matrix and diffusion tensors for an ACG matrix file.
    Tensor { a_file: PathBuf },
    /// Resolve and validate a config file and print the effective values.
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// Writes to stdout, tolerating a closed pipe (e.g. `| head`).
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn execute(cmd: Command) -> seedsim::Result<()> {
    match cmd {
        Command::Run { config, out } => {
            let mut cfg = load_config(&config)?;
            if let Some(out) = out {
                cfg.output_dir = out;
            }
            emit(&run_experiment(&cfg)?.to_string());
        }
        Command::Preset { name, out } => {
            let mut cfg = preset_config(name.parse::<Preset>()?)?;
            if let Some(out) = out {
                cfg.output_dir = out;
            }
            emit(&run_experiment(&cfg)?.to_string());
        }
        Command::Tensor { a_file } => {
            let a = load_orientation_matrix(&a_file)?;
            let p = ParameterSet::table1();
            let t = build_tensors(&acg_moment(&a)?, &p);
            emit(&format!(
                "A ={}\nM (trace {:.12}) ={}\nD1 = s1^2/lambda10 * M [um^2/h] ={}\n\
                 D2 = {} * D1 [um^2/h] ={}\nplanar D1 ={}",
                a.matrix(),
                t.moment.trace(),
                t.moment,
                t.d1,
                d2_over_d1(&p),
                t.d2,
                restrict_2d(&t.d1)
            ));
        }
        Command::Validate { config } => {
            let cfg = load_config(&config)?;
            emit(&cfg.echo());
        }
    }
    Ok(())
}
