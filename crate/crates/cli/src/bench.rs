//! Benchmark batches: every problem under every mode on a worker pool, with
//! records kept in input order.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Instant;

use anyhow::Result;
use pwlmbqi::mbqi::{Mode, Outcome};
use serde::Serialize;

use crate::{read_script, solve_script, HarnessConfig};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BenchRecord {
    pub path: String,
    pub mode: String,
    pub verdict: String,
    pub wall_ms: u128,
    pub iterations: usize,
    pub instantiations: usize,
}

impl BenchRecord {
    pub fn solved(&self) -> bool {
        self.verdict == "sat" || self.verdict == "unsat"
    }
}

fn run_one(path: &Path, mode: Mode, cfg: &HarnessConfig) -> BenchRecord {
    let start = Instant::now();
    let (verdict, iterations, instantiations) = match read_script(path) {
        Ok(script) => {
            let r = solve_script(&script, cfg, mode);
            let verdict = match r.outcome {
                Outcome::ResourceOut => "timeout",
                Outcome::Unknown(_) => "unknown",
                ref o => o.verdict(),
            };
            (verdict, r.stats.iterations, r.stats.instantiations)
        }
        Err(e) => {
            log::warn!("{e:#}");
            ("error", 0, 0)
        }
    };
    BenchRecord {
        path: path.display().to_string(),
        mode: mode.to_string(),
        verdict: verdict.to_string(),
        wall_ms: start.elapsed().as_millis(),
        iterations,
        instantiations,
    }
}

/// One record per (problem, mode), ordered by problem then by `modes`.
pub fn run_bench(problems: &[PathBuf], modes: &[Mode], cfg: &HarnessConfig, jobs: usize) -> Vec<BenchRecord> {
    let tasks: Vec<(&PathBuf, Mode)> = problems.iter().flat_map(|p| modes.iter().map(move |&m| (p, m))).collect();
    let results: Mutex<Vec<Option<BenchRecord>>> = Mutex::new(vec![None; tasks.len()]);
    let next = AtomicUsize::new(0);
    thread::scope(|s| {
        for _ in 0..jobs.max(1).min(tasks.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(path, mode)) = tasks.get(i) else { break };
                let record = run_one(path, mode, cfg);
                log::info!("{} [{}]: {}", record.path, record.mode, record.verdict);
                results.lock().expect("results lock")[i] = Some(record);
            });
        }
    });
    results.into_inner().expect("results lock").into_iter().map(|r| r.expect("every task ran")).collect()
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record(["path", "mode", "verdict", "wall_ms", "iterations", "instantiations"])?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Solved counts per mode.
pub fn summary(records: &[BenchRecord], modes: &[Mode]) -> Vec<(Mode, usize, usize)> {
    modes
        .iter()
        .map(|&m| {
            let name = m.to_string();
            let count = |v: &str| records.iter().filter(|r| r.mode == name && r.verdict == v).count();
            (m, count("sat"), count("unsat"))
        })
        .collect()
}

pub fn markdown_table(records: &[BenchRecord], modes: &[Mode]) -> String {
    let mut out = String::from("| solver | solved: SAT | solved: UNSAT | solved: total |\n|---|---:|---:|---:|\n");
    if records.is_empty() {
        return out;
    }
    for (mode, sat, unsat) in summary(records, modes) {
        out += &format!("| {mode} | {sat} | {unsat} | {} |\n", sat + unsat);
    }
    out
}
