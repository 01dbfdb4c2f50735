//! Comparing verdicts with an external solver. Only `sat` against `unsat`
//! counts as a disagreement; anything unknown is inconclusive.

use std::fmt;
use std::path::Path;

use pwlmbqi::mbqi::Outcome;

use crate::external::{run_external, ExternalVerdict};
use crate::{read_script, solve_script, HarnessConfig, EXIT_DEFINITIVE, EXIT_MISMATCH, EXIT_UNKNOWN};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiffStatus {
    Ok,
    Inconclusive,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffReport {
    pub status: DiffStatus,
    pub ours: String,
    pub theirs: String,
}

impl DiffReport {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            DiffStatus::Ok => EXIT_DEFINITIVE,
            DiffStatus::Inconclusive => EXIT_UNKNOWN,
            DiffStatus::Mismatch => EXIT_MISMATCH,
        }
    }
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            DiffStatus::Ok => "ok",
            DiffStatus::Inconclusive => "inconclusive",
            DiffStatus::Mismatch => "MISMATCH",
        };
        write!(f, "{status} (ours: {}, external: {})", self.ours, self.theirs)
    }
}

pub fn compare(ours: &str, theirs: &ExternalVerdict) -> DiffStatus {
    match (ours, theirs) {
        ("sat", ExternalVerdict::Sat) | ("unsat", ExternalVerdict::Unsat) => DiffStatus::Ok,
        ("sat", ExternalVerdict::Unsat) | ("unsat", ExternalVerdict::Sat) => DiffStatus::Mismatch,
        _ => DiffStatus::Inconclusive,
    }
}

/// Runs both solvers on the problem at `path`. Input errors are returned;
/// external solver failures end up in the report.
pub fn diff_file(path: &Path, cfg: &HarnessConfig, external: &str) -> anyhow::Result<DiffReport> {
    let script = read_script(path)?;
    let result = solve_script(&script, cfg, cfg.mode);
    let ours = match &result.outcome {
        Outcome::Unknown(reason) => format!("unknown ({reason})"),
        Outcome::ResourceOut => "unknown (timeout)".to_string(),
        o => o.verdict().to_string(),
    };
    let theirs = match run_external(external, path, cfg.timeout) {
        Ok(v) => v,
        Err(e) => ExternalVerdict::Unknown(format!("error: {e:#}")),
    };
    let theirs_text = match &theirs {
        ExternalVerdict::Sat => "sat".to_string(),
        ExternalVerdict::Unsat => "unsat".to_string(),
        ExternalVerdict::Timeout => "timeout".to_string(),
        ExternalVerdict::Unknown(s) if s.is_empty() => "unknown".to_string(),
        ExternalVerdict::Unknown(s) => format!("unknown ({s})"),
    };
    Ok(DiffReport { status: compare(result.outcome.verdict(), &theirs), ours, theirs: theirs_text })
}
