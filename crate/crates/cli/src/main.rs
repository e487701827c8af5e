//! `charkern` — scoring probabilistic forecasts with kernel scores, deciding
//! whether kernels are characteristic or universal, dumping spectra, and
//! generating self-certifying counterexample distribution pairs.

mod commands;
mod errors;
mod io;
mod table;

use clap::{Parser, Subcommand};


#[derive(Parser)]
#[command(
    name = "charkern",
    version,
    about = "Kernel scores, kernel mean distances, and characteristic/universal kernel verdicts"
)]
struct Cli {
    /// Emit machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score forecast records against observations with a kernel score.
    Score(commands::score::ScoreArgs),
    /// Decide characteristic/universal for a Gram-matrix kernel.
    Verdict(commands::verdict::VerdictArgs),
    /// Decide characteristic/universal for a translation-invariant group kernel.
    GroupVerdict(commands::group_verdict::GroupVerdictArgs),
    /// Decide characteristic/universal/strictly-PD for an isotropic sphere kernel.
    SphereVerdict(commands::sphere_verdict::SphereVerdictArgs),
    /// Dump the eigen-expansion of a kernel.
    Spectrum(commands::spectrum::SpectrumArgs),
    /// Generate distribution pairs the kernel metric cannot distinguish.
    Counterexample(commands::counterexample::CounterexampleArgs),
    /// Embed a perturbation density and dump its harmonic blocks.
    SphereEmbed(commands::sphere_embed::SphereEmbedArgs),
}

fn main() {
    init_thread_pool();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    std::process::exit(0);
                }
                _ => {
                    eprint!("{err}");
                    std::process::exit(1);
                }
            }
        }
    };
    let json = cli.json;
    let result = match cli.command {
        Command::Score(args) => commands::score::run(args, json),
        Command::Verdict(args) => commands::verdict::run(args, json),
        Command::GroupVerdict(args) => commands::group_verdict::run(args, json),
        Command::SphereVerdict(args) => commands::sphere_verdict::run(args, json),
        Command::Spectrum(args) => commands::spectrum::run(args, json),
        Command::Counterexample(args) => commands::counterexample::run(args, json),
        Command::SphereEmbed(args) => commands::sphere_embed::run(args, json),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}

/// Honors CHARKERN_THREADS as a cap on worker parallelism.
fn init_thread_pool() {
    if let Ok(value) = std::env::var("CHARKERN_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build_global();
        }
    }
}
