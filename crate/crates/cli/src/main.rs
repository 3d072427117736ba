use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use surrender_core::convergence::{PsiSchedule, SweepFamily};
use surrender_core::scenario::{self, MonteCarloSpec, Output, ScenarioSpec, SweepSpec};

#[derive(Parser)]
#[command(
    name = "surrender",
    version,
    about = "Reserve-dependent surrender reserving engine"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Grid step in years (overrides the scenario's step).
    #[arg(long, global = true)]
    step: Option<f64>,

    /// Output directory; each scenario writes into <out>/<name>/.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in scenarios and surrender models.
    List,
    /// Run scenario files or built-in scenarios; several run concurrently.
    Run {
        /// Paths to JSON scenario files.
        specs: Vec<PathBuf>,
        /// Built-in scenario name; may be repeated.
        #[arg(long)]
        builtin: Vec<String>,
        /// Also value every model by Monte Carlo with this many paths.
        #[arg(long)]
        mc_paths: Option<u64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Sweep the rationality parameter and report the distance to the worst case.
    Sweep {
        spec: Option<PathBuf>,
        #[arg(long, conflicts_with = "spec")]
        builtin: Option<String>,
        #[arg(long, value_enum, default_value_t = Family::Indicator)]
        family: Family,
        /// Fixed ψ for the exponential family.
        #[arg(long, default_value_t = 0.05)]
        psi: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        thetas: Vec<f64>,
    },
    /// Print a built-in scenario as JSON.
    Show { builtin: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Indicator,
    Exponential,
}

fn load(spec: Option<PathBuf>, builtin: Option<String>) -> Result<ScenarioSpec> {
    match (spec, builtin) {
        (Some(path), None) => ScenarioSpec::load(&path)
            .with_context(|| format!("reading scenario {}", path.display())),
        (None, Some(name)) => match scenario::builtin(&name) {
            Some(s) => Ok(s),
            None => bail!("unknown built-in scenario {name:?}; see `surrender list`"),
        },
        _ => bail!("give either a scenario file or --builtin <name>"),
    }
}

fn execute(spec: &ScenarioSpec, out: &Path) -> Result<()> {
    let files = scenario::run(spec, out)?;
    for f in files {
        println!("{}", f.display());
    }
    Ok(())
}

fn execute_batch(specs: &[ScenarioSpec], out: &Path) -> Result<()> {
    let mut failed = 0;
    for (spec, outcome) in specs.iter().zip(scenario::run_batch(specs, out)?) {
        match outcome {
            Ok(files) => files.iter().for_each(|f| println!("{}", f.display())),
            Err(e) => {
                eprintln!("scenario {}: {e}", spec.name);
                failed += 1;
            }
        }
    }
    if failed > 0 {
        bail!("{failed} of {} scenarios failed", specs.len());
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            let catalog = scenario::list_builtins();
            println!("scenarios:");
            for (name, desc) in &catalog.examples {
                println!("  {name:<10} {desc}");
            }
            println!("models:");
            for (name, _, desc) in &catalog.models {
                println!("  {name:<10} {desc}");
            }
        }
        Command::Run {
            specs,
            builtin,
            mc_paths,
            seed,
        } => {
            if specs.is_empty() && builtin.is_empty() {
                bail!("give at least one scenario file or --builtin <name>");
            }
            let mut all = specs
                .into_iter()
                .map(|p| load(Some(p), None))
                .chain(builtin.into_iter().map(|b| load(None, Some(b))))
                .collect::<Result<Vec<_>>>()?;
            for spec in &mut all {
                if let Some(step) = cli.step {
                    spec.step = step;
                }
                if let Some(paths) = mc_paths {
                    spec.monte_carlo = Some(MonteCarloSpec {
                        paths,
                        seed,
                        time_step: spec.monte_carlo.map_or(1.0, |m| m.time_step),
                    });
                    if !spec.outputs.contains(&Output::MonteCarlo) {
                        spec.outputs.push(Output::MonteCarlo);
                    }
                }
            }
            execute_batch(&all, &cli.out)?;
        }
        Command::Sweep {
            spec,
            builtin,
            family,
            psi,
            thetas,
        } => {
            let mut spec = load(spec, builtin)?;
            if let Some(step) = cli.step {
                spec.step = step;
            }
            let family = match family {
                Family::Indicator => SweepFamily::Indicator,
                Family::Exponential => SweepFamily::Exponential {
                    psi: PsiSchedule::Fixed(psi),
                },
            };
            spec.sweep = Some(SweepSpec { family, thetas });
            spec.outputs = vec![Output::ThetaSweep];
            execute(&spec, &cli.out)?;
        }
        Command::Show { builtin } => {
            let spec = load(None, Some(builtin))?;
            println!("{}", spec.to_json()?);
        }
    }
    Ok(())
}
