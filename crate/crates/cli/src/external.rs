//! Running an external SMT solver as a child process with a deadline.

use std::io::Read;
use std::path::Path;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExternalVerdict {
    Sat,
    Unsat,
    Unknown(String),
    Timeout,
}

/// Splits the command on whitespace and appends the problem path.
pub fn run_external(command: &str, problem: &Path, timeout: Duration) -> Result<ExternalVerdict> {
    let mut words = command.split_whitespace();
    let Some(program) = words.next() else { bail!("empty external solver command") };
    let mut child = Command::new(program)
        .args(words)
        .arg(problem)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .with_context(|| format!("starting `{command}`"))?;
    let mut stdout = child.stdout.take().expect("piped stdout");
    let reader = thread::spawn(move || {
        let mut out = String::new();
        let _ = stdout.read_to_string(&mut out);
        out
    });
    let deadline = Instant::now() + timeout;
    loop {
        if child.try_wait()?.is_some() {
            break;
        }
        if Instant::now() >= deadline {
            let _ = child.kill();
            let _ = child.wait();
            return Ok(ExternalVerdict::Timeout);
        }
        thread::sleep(Duration::from_millis(5));
    }
    let out = reader.join().unwrap_or_default();
    Ok(parse_verdict(&out))
}

/// Reads the first token of the first non-empty output line.
pub fn parse_verdict(output: &str) -> ExternalVerdict {
    let first = output.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
    match first.split_whitespace().next() {
        Some("sat") => ExternalVerdict::Sat,
        Some("unsat") => ExternalVerdict::Unsat,
        _ => ExternalVerdict::Unknown(first.to_string()),
    }
}
