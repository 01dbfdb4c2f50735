//! Harness around the solver: single runs, fragment generation, benchmark
//! batches and differential runs against an external solver.

pub mod bench;
pub mod diff;
pub mod external;
pub mod fuzz;

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{Context, Result};
use pwlmbqi::fragment::enumerate_fragments;
use pwlmbqi::mbqi::{self, Config, Mode, SolveResult};
use pwlmbqi::pwl::RecursiveFitOptions;
use pwlmbqi::smtlib::print_script;
use pwlmbqi::{parse_script, Script};

/// Exit status for a definitive answer.
pub const EXIT_DEFINITIVE: i32 = 0;
/// Exit status when fragment generation wrote nothing.
pub const EXIT_WARNING: i32 = 1;
/// Exit status for `unknown` or a timeout.
pub const EXIT_UNKNOWN: i32 = 2;
/// Exit status for usage and input errors.
pub const EXIT_USAGE: i32 = 3;
/// Exit status for a differential mismatch.
pub const EXIT_MISMATCH: i32 = 4;

/// Settings shared by the subcommands.
#[derive(Clone, Debug)]
pub struct HarnessConfig {
    pub mode: Mode,
    pub max_iters: usize,
    pub timeout: Duration,
    pub stop_on_first_unsat: bool,
    pub verify_models: bool,
    pub external: Option<String>,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            mode: Mode::Smart,
            max_iters: 500,
            timeout: Duration::from_secs(30),
            stop_on_first_unsat: true,
            verify_models: true,
            external: None,
        }
    }
}

impl HarnessConfig {
    pub fn solver_config(&self, mode: Mode) -> Config {
        Config {
            mode,
            max_iters: self.max_iters,
            timeout: Some(self.timeout),
            fit: RecursiveFitOptions { stop_on_first_unsat: self.stop_on_first_unsat },
            verify_models: self.verify_models,
            ..Config::default()
        }
    }
}

pub fn read_script(path: &Path) -> Result<Script> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_script(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn solve_script(script: &Script, cfg: &HarnessConfig, mode: Mode) -> SolveResult {
    mbqi::solve(script, &cfg.solver_config(mode))
}

/// Writes one file per non-empty `k`-fragment of the script at `path`,
/// skipping fragments whose text equals an earlier one, and returns the
/// written paths.
pub fn write_fragments(path: &Path, k: usize, out_dir: &Path, cap: Option<usize>) -> Result<Vec<PathBuf>> {
    let script = read_script(path)?;
    let base = path.file_stem().and_then(|s| s.to_str()).unwrap_or("fragment");
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let mut seen = HashSet::new();
    let mut written = Vec::new();
    for (symbols, fragment) in enumerate_fragments(&script, k, cap)? {
        let text = print_script(&fragment);
        if !seen.insert(text.clone()) {
            log::info!("fragment {} duplicates an earlier one", symbols.join("-"));
            continue;
        }
        let target = out_dir.join(format!("{base}.{}.smt2", symbols.join("-")));
        fs::write(&target, text).with_context(|| format!("writing {}", target.display()))?;
        written.push(target);
    }
    Ok(written)
}

/// `.smt2` files directly inside `dir`, sorted by name; a file argument is
/// returned as is.
pub fn collect_problems(path: &Path) -> Result<Vec<PathBuf>> {
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut out: Vec<PathBuf> = fs::read_dir(path)
        .with_context(|| format!("listing {}", path.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "smt2"))
        .collect();
    out.sort();
    Ok(out)
}
