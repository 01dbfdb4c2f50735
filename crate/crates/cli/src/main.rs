use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{ArgAction, Args, Parser, Subcommand};
use pwlmbqi::mbqi::{Mode, Outcome};
use pwlmbqi::print_model;

use pwlmbqi_cli::bench::{markdown_table, run_bench, write_csv};
use pwlmbqi_cli::diff::diff_file;
use pwlmbqi_cli::{
    collect_problems, read_script, solve_script, write_fragments, HarnessConfig, EXIT_DEFINITIVE, EXIT_UNKNOWN,
    EXIT_USAGE, EXIT_WARNING,
};

#[derive(Parser, Debug)]
#[command(name = "pwlmbqi", version, about = "MBQI for UFLIA with piecewise-linear model learning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one SMT-LIB problem.
    Solve {
        path: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Print the model after `sat`.
        #[arg(long)]
        model: bool,
        /// Print iteration statistics to stderr.
        #[arg(long)]
        stats: bool,
    },
    /// Write the k-symbol fragments of a problem.
    Fragment {
        path: PathBuf,
        #[arg(short, long, default_value_t = 2)]
        k: usize,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Maximum number of symbol subsets to consider.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Run a directory of problems under one or more modes.
    Bench {
        path: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Modes to run; repeat or separate with commas.
        #[arg(long = "modes", value_delimiter = ',', default_values_t = Mode::ALL.map(|m| m.to_string()))]
        modes: Vec<String>,
        /// Worker threads; defaults to the number of logical cores.
        #[arg(long)]
        jobs: Option<usize>,
        /// Directory for `results.csv` and `summary.md`; stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the verdict with an external solver.
    Diff {
        path: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

#[derive(Args, Debug)]
struct SolverArgs {
    #[arg(long, default_value = "smart")]
    mode: String,
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
    /// Seconds per problem.
    #[arg(long, default_value_t = 30.0)]
    timeout: f64,
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    greedy_stop_on_first_unsat: bool,
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    verify_models: bool,
    /// Command line of an external solver; the problem path is appended.
    #[arg(long, env = "PWLMBQI_EXTERNAL_SOLVER")]
    external_solver: Option<String>,
}

impl SolverArgs {
    fn config(&self) -> Result<HarnessConfig> {
        if !(self.timeout > 0.0 && self.timeout.is_finite()) {
            bail!("--timeout must be positive");
        }
        if self.max_iters == 0 {
            bail!("--max-iters must be positive");
        }
        Ok(HarnessConfig {
            mode: self.mode.parse().map_err(anyhow::Error::msg)?,
            max_iters: self.max_iters,
            timeout: Duration::from_secs_f64(self.timeout),
            stop_on_first_unsat: self.greedy_stop_on_first_unsat,
            verify_models: self.verify_models,
            external: self.external_solver.clone(),
        })
    }
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Solve { path, solver, model, stats } => {
            let cfg = solver.config()?;
            let script = read_script(&path)?;
            let r = solve_script(&script, &cfg, cfg.mode);
            let mut out = io::stdout().lock();
            writeln!(out, "{}", r.outcome.verdict())?;
            if stats {
                eprintln!(
                    "; iterations {} instantiations {} time {} ms",
                    r.stats.iterations,
                    r.stats.instantiations,
                    r.stats.elapsed.as_millis()
                );
            }
            Ok(match r.outcome {
                Outcome::Sat(m) => {
                    if model {
                        writeln!(out, "{}", print_model(&m))?;
                    }
                    EXIT_DEFINITIVE
                }
                Outcome::Unsat(_) => EXIT_DEFINITIVE,
                Outcome::Unknown(reason) => {
                    eprintln!("; {reason}");
                    EXIT_UNKNOWN
                }
                Outcome::ResourceOut => {
                    eprintln!("; timeout");
                    EXIT_UNKNOWN
                }
            })
        }
        Command::Fragment { path, k, out, cap } => {
            let written = write_fragments(&path, k, &out, cap)?;
            for p in &written {
                println!("{}", p.display());
            }
            eprintln!("{} fragments written to {}", written.len(), out.display());
            Ok(if written.is_empty() { EXIT_WARNING } else { EXIT_DEFINITIVE })
        }
        Command::Bench { path, solver, modes, jobs, out } => {
            let cfg = solver.config()?;
            let modes: Vec<Mode> =
                modes.iter().map(|m| m.parse()).collect::<Result<_, String>>().map_err(anyhow::Error::msg)?;
            let problems = collect_problems(&path)?;
            let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let records = run_bench(&problems, &modes, &cfg, jobs);
            let table = markdown_table(&records, &modes);
            match out {
                Some(dir) => {
                    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                    write_csv(&records, fs::File::create(dir.join("results.csv"))?)?;
                    fs::write(dir.join("summary.md"), &table)?;
                    print!("{table}");
                }
                None => {
                    write_csv(&records, io::stdout().lock())?;
                    println!();
                    print!("{table}");
                }
            }
            Ok(EXIT_DEFINITIVE)
        }
        Command::Diff { path, solver } => {
            let cfg = solver.config()?;
            let Some(external) = cfg.external.clone() else {
                bail!("no external solver: pass --external-solver or set PWLMBQI_EXTERNAL_SOLVER");
            };
            let report = diff_file(&path, &cfg, &external)?;
            println!("{report}");
            Ok(report.exit_code())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
