//! Acceptance checks, one line per criterion.
//!
//! Runs without the libtest harness so that the verdict lines always show up
//! in `cargo test` output.

use std::collections::BTreeMap;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::thread;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pwlmbqi::diophantine::EquationSystem;
use pwlmbqi::feasibility::InequalitySystem;
use pwlmbqi::fragment::enumerate_fragments;
use pwlmbqi::ground::GroundConfig;
use pwlmbqi::mbqi::{self, replay_certificate, verify_model, Config, Mode, Outcome, Problem};
use pwlmbqi::pwl::{
    fit_function, fit_predicate_greedy, fit_predicate_recursive, formal_params, FunctionPoint, Halfspace, PwlTerm,
};
use pwlmbqi::smtlib::{parse_model, print_script};
use pwlmbqi::term::{evaluate, Interpretation, NoSymbols, Sort, Term, Valuation, Value};
use pwlmbqi::{parse_script, relax_sorts, Script};
use pwlmbqi_cli::external::{run_external, ExternalVerdict};
use pwlmbqi_cli::fuzz::random_ground_problem;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const SUCCESSOR: &str = "(set-logic UFLIA)(declare-fun f (Int) Int)(assert (forall ((x Int)) (> (f x) x)))";
const EQUALITY: &str = "(set-logic UFLIA)(declare-fun R (Int Int) Bool)
    (assert (forall ((x Int) (y Int)) (=> (R x y) (= x y))))
    (assert (forall ((x Int) (y Int)) (=> (= x y) (R x y))))";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pwlmbqi"))
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pwlmbqi-acceptance-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn solve_text(text: &str, cfg: &Config) -> (Script, mbqi::SolveResult) {
    let s = parse_script(text).unwrap();
    let r = mbqi::solve(&s, cfg);
    (s, r)
}

fn problem_of(s: &Script) -> Problem {
    mbqi::preprocess(&relax_sorts(s).assertions).unwrap()
}

fn int(v: i64) -> Value {
    Value::Int(v.into())
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn criterion_1() -> Check {
    let mut notes = Vec::new();
    for mode in [Mode::Smart, Mode::NonSmart] {
        let start = Instant::now();
        let (s, r) = solve_text(SUCCESSOR, &Config { mode, ..Config::default() });
        let wall = start.elapsed();
        let Outcome::Sat(m) = &r.outcome else { return Err(format!("{mode}: {:?}", r.outcome)) };
        ensure!(r.stats.iterations <= 10, "{mode}: {} iterations", r.stats.iterations);
        ensure!(wall < Duration::from_secs(1), "{mode}: took {wall:?}");
        for a in -100i64..=100 {
            let v = m.apply("f", &[int(a)]);
            ensure!(v.as_ref().and_then(Value::as_int).is_some_and(|v| *v > BigInt::from(a)), "{mode}: f({a}) = {v:?}");
        }
        verify_model(&problem_of(&s), m, &GroundConfig::default())?;
        notes.push(format!("{mode}: sat in {} iterations", r.stats.iterations));
    }

    // The command line gives the same answer and a readable model.
    let dir = scratch("c1");
    let path = dir.join("successor.smt2");
    fs::write(&path, SUCCESSOR).unwrap();
    let out = bin().args(["solve", "--mode", "smart", "--model"]).arg(&path).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    ensure!(out.status.code() == Some(0) && text.starts_with("sat\n"), "cli: {text}");
    let defs = parse_model(&text["sat\n".len()..], &parse_script(SUCCESSOR).unwrap()).map_err(|e| e.to_string())?;
    for a in -100i64..=100 {
        let v = defs.apply("f", &[int(a)]).and_then(|v| v.as_int().cloned());
        ensure!(v.is_some_and(|v| v > BigInt::from(a)), "printed model fails at {a}");
    }

    let (_, r) = solve_text(SUCCESSOR, &Config { mode: Mode::Off, max_iters: 20, ..Config::default() });
    ensure!(matches!(r.outcome, Outcome::Unknown(_)), "off: {:?}", r.outcome);
    ensure!(r.stats.iterations == 20, "off: {} iterations", r.stats.iterations);
    let cexes: Vec<Value> =
        r.stats.rounds.iter().flat_map(|round| round.counterexamples.iter().map(|(_, c)| c["x"].clone())).collect();
    let expected: Vec<Value> = (0..20).map(int).collect();
    ensure!(cexes == expected, "off counterexamples {cexes:?}");
    let out = bin().args(["solve", "--mode", "off", "--max-iters", "20"]).arg(&path).output().unwrap();
    ensure!(out.status.code() == Some(2) && out.stdout.starts_with(b"unknown"), "cli off: {out:?}");
    notes.push("off: unknown after 20 iterations, counterexamples 0..19".into());
    Ok(notes.join("; "))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let (s, r) = solve_text(EQUALITY, &Config { timeout: Some(Duration::from_secs(5)), ..Config::default() });
    let wall = start.elapsed();
    let Outcome::Sat(m) = &r.outcome else { return Err(format!("smart: {:?}", r.outcome)) };
    ensure!(wall < Duration::from_secs(5), "smart took {wall:?}");
    let mut agree = 0;
    for a in -10i64..=10 {
        for b in -10i64..=10 {
            ensure!(m.apply("R", &[int(a), int(b)]) == Some(Value::Bool(a == b)), "R({a},{b}) wrong");
            agree += 1;
        }
    }
    verify_model(&problem_of(&s), m, &GroundConfig::default())?;
    let cfg = Config { mode: Mode::NonSmart, timeout: Some(Duration::from_secs(5)), ..Config::default() };
    let (_, ns) = solve_text(EQUALITY, &cfg);
    let ns_text = match &ns.outcome {
        Outcome::ResourceOut => "timeout".to_string(),
        o => o.verdict().to_string(),
    };
    Ok(format!(
        "smart: sat in {} iterations, {:?}, {agree}/441 grid agreement; non-smart: {ns_text} after {} iterations",
        r.stats.iterations, wall, ns.stats.iterations
    ))
}

fn criterion_3() -> Check {
    let mut pts = Vec::new();
    for p in [[0, 0], [1, 1], [-1, -1]] {
        pts.push(FunctionPoint::new(big(&p), true));
    }
    for p in [[-1, 0], [0, 1], [1, 0], [1, 2]] {
        pts.push(FunctionPoint::new(big(&p), false));
    }
    let t = fit_predicate_recursive(2, &pts, Default::default()).map_err(|e| e.to_string())?;
    for p in &pts {
        ensure!(t.eval(&p.args) == Ok(Value::Bool(p.value)), "wrong at {:?}", p.args);
    }
    let reference = PwlTerm::ite_halfspace(
        Halfspace::new(big(&[1, -1]), BigInt::from(0)),
        PwlTerm::ite_halfspace(Halfspace::new(big(&[-1, 1]), BigInt::from(0)), PwlTerm::Const(true), PwlTerm::Const(false)),
        PwlTerm::Const(false),
    );
    let printed = pwlmbqi::print_term(&t.to_term(&formal_params(2)));
    ensure!(t == reference, "shape differs: {printed}");
    Ok(format!("exact on 7 points, reference shape {printed}"))
}

/// Random consistent point set: `n` in 1..=3, at most 40 distinct points.
fn point_set<V>(rng: &mut ChaCha8Rng, mut label: impl FnMut(&mut ChaCha8Rng) -> V) -> (usize, Vec<FunctionPoint<V>>) {
    let n = rng.gen_range(1..=3);
    let mut seen = BTreeMap::new();
    for _ in 0..rng.gen_range(0..=40) {
        let args: Vec<i64> = (0..n).map(|_| rng.gen_range(-30..=30)).collect();
        let v = label(rng);
        seen.entry(args).or_insert(v);
    }
    (n, seen.into_iter().map(|(a, v)| FunctionPoint::new(big(&a), v)).collect())
}

/// Evaluates both the tree and its rendered term at `args`.
fn evaluate_fit(t: &PwlTerm, args: &[BigInt]) -> Result<Value, String> {
    let direct = t.eval(args).map_err(|e| e.to_string())?;
    let params = formal_params(args.len());
    let env: Valuation = params.iter().cloned().zip(args.iter().map(|a| Value::Int(a.clone()))).collect();
    let rendered = evaluate(&t.to_term(&params), &env, &NoSymbols).map_err(|e| e.to_string())?;
    if direct != rendered {
        return Err(format!("tree and term disagree at {args:?}"));
    }
    Ok(direct)
}

fn criterion_4() -> Check {
    const SETS: usize = 200;
    const PROBES: usize = 5;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xf17);
    let mut exact = 0usize;
    let mut probes = 0usize;
    let probe = |rng: &mut ChaCha8Rng, n: usize| -> Vec<BigInt> { (0..n).map(|_| BigInt::from(rng.gen_range(-60..=60))).collect() };
    for _ in 0..SETS {
        let (n, pts) = point_set(&mut rng, |r| BigInt::from(r.gen_range(-50..=50)));
        let t = fit_function(n, &pts).map_err(|e| e.to_string())?;
        for p in &pts {
            ensure!(evaluate_fit(&t, &p.args)? == Value::Int(p.value.clone()), "function fit wrong at {:?}", p.args);
            exact += 1;
        }
        for _ in 0..PROBES {
            ensure!(matches!(evaluate_fit(&t, &probe(&mut rng, n))?, Value::Int(_)), "function fit not total");
            probes += 1;
        }
    }
    for recursive in [false, true] {
        for _ in 0..SETS {
            let (n, pts) = point_set(&mut rng, |r| r.gen_bool(0.5));
            let t = if recursive {
                fit_predicate_recursive(n, &pts, Default::default())
            } else {
                fit_predicate_greedy(n, &pts)
            }
            .map_err(|e| e.to_string())?;
            for p in &pts {
                ensure!(evaluate_fit(&t, &p.args)? == Value::Bool(p.value), "predicate fit wrong at {:?}", p.args);
                exact += 1;
            }
            for _ in 0..PROBES {
                ensure!(matches!(evaluate_fit(&t, &probe(&mut rng, n))?, Value::Bool(_)), "predicate fit not total");
                probes += 1;
            }
        }
    }
    let wall = start.elapsed();
    ensure!(wall < Duration::from_secs(30), "took {wall:?}");
    Ok(format!("3 fitters x {SETS} sets, {exact} points exact, {probes} off-sample evaluations total, {wall:.1?}"))
}

fn dot(a: &[i64], y: &[i64]) -> i64 {
    a.iter().zip(y).map(|(a, y)| a * y).sum()
}

fn any_slope(n: usize, bound: i64, mut f: impl FnMut(&[i64]) -> bool) -> bool {
    let mut y = vec![-bound; n];
    loop {
        if f(&y) {
            return true;
        }
        let Some(i) = (0..n).find(|&i| y[i] < bound) else { return false };
        y[i] += 1;
        for v in &mut y[..i] {
            *v = -bound;
        }
    }
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd10f);
    let (mut sat, mut unsat, mut open) = (0, 0, 0);
    for case in 0..500 {
        let n = rng.gen_range(1..=3);
        let hidden: Vec<i64> = (0..=n).map(|_| rng.gen_range(-8..=8)).collect();
        let planted = rng.gen_bool(0.5);
        let rows: Vec<(Vec<i64>, i64)> = (0..rng.gen_range(1..=5))
            .map(|_| {
                let a: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
                let v = if planted { dot(&a, &hidden[..n]) + hidden[n] } else { rng.gen_range(-30..=30) };
                (a, v)
            })
            .collect();
        let mut sys = EquationSystem::new(n);
        for (a, v) in &rows {
            sys = sys.push_equation(&big(a), &BigInt::from(*v)).map_err(|e| e.to_string())?;
        }
        let found = any_slope(n, 50, |y| {
            let c = rows[0].1 - dot(&rows[0].0, y);
            c.abs() <= 50 && rows.iter().all(|(a, v)| dot(a, y) + c == *v)
        });
        ensure!(!found || sys.is_sat(), "case {case}: box solution exists for {rows:?}");
        match sys.solve() {
            Ok((y, c)) => {
                for (a, v) in &rows {
                    let lhs: BigInt = big(a).iter().zip(&y).map(|(a, y)| a * y).sum::<BigInt>() + &c;
                    ensure!(lhs == BigInt::from(*v), "case {case}: witness fails");
                }
                if found {
                    sat += 1
                } else {
                    open += 1
                }
            }
            Err(_) => unsat += 1,
        }
    }
    Ok(format!("500 systems: {sat} sat, {unsat} unsat, {open} outside the box; no disagreement"))
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xfea5);
    let (mut sat, mut unsat, mut open) = (0, 0, 0);
    for case in 0..300 {
        let n = rng.gen_range(1..=3);
        let rows: Vec<(Vec<i64>, bool)> = (0..rng.gen_range(1..=8))
            .map(|_| ((0..n).map(|_| rng.gen_range(-5..=5)).collect(), rng.gen_bool(0.5)))
            .collect();
        let mut sys = InequalitySystem::new(n);
        for (a, pos) in &rows {
            sys = sys.push_ineq(&big(a), *pos).map_err(|e| e.to_string())?;
        }
        let found = any_slope(n, 20, |y| {
            let hi = rows.iter().filter(|r| r.1).map(|(a, _)| dot(a, y)).min().unwrap_or(20).min(20);
            let lo = rows.iter().filter(|r| !r.1).map(|(a, _)| dot(a, y) + 1).max().unwrap_or(-20).max(-20);
            lo <= hi
        });
        ensure!(!found || sys.is_sat(), "case {case}: box solution exists for {rows:?}");
        match sys.solve() {
            Ok((y, c)) => {
                ensure!(sys.rows().iter().all(|r| r.holds(&y, &c)), "case {case}: witness fails");
                if found {
                    sat += 1
                } else {
                    open += 1
                }
            }
            Err(_) => unsat += 1,
        }
    }
    Ok(format!("300 systems: {sat} sat, {unsat} unsat, {open} outside the box; no disagreement"))
}

fn criterion_7() -> Check {
    let mut problems: Vec<(String, String)> = vec![
        ("successor".into(), SUCCESSOR.into()),
        ("equality".into(), EQUALITY.into()),
        ("successor+clash".into(), format!("{SUCCESSOR}(assert (<= (f 5) 2))")),
    ];
    for p in pwlmbqi_cli::collect_problems(&corpus_dir()).map_err(|e| e.to_string())? {
        problems.push((p.display().to_string(), fs::read_to_string(&p).unwrap()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57);
    for i in 0..60 {
        problems.push((format!("random ground #{i}"), random_ground_problem(&mut rng)));
    }
    let tasks: Vec<(&(String, String), Mode)> =
        problems.iter().flat_map(|p| Mode::ALL.into_iter().map(move |m| (p, m))).collect();
    let results: Vec<Result<(usize, usize), String>> = thread::scope(|s| {
        let chunks: Vec<_> = tasks
            .chunks(tasks.len().div_ceil(8))
            .map(|chunk| {
                s.spawn(move || {
                    chunk
                        .iter()
                        .map(|((name, text), mode)| {
                            let cfg = Config { mode: *mode, timeout: Some(Duration::from_secs(5)), ..Config::default() };
                            let (s, r) = solve_text(text, &cfg);
                            let p = problem_of(&s);
                            match &r.outcome {
                                Outcome::Sat(m) => verify_model(&p, m, &GroundConfig::default())
                                    .map(|_| (1, 0))
                                    .map_err(|e| format!("{name} [{mode}]: {e}")),
                                Outcome::Unsat(cert) => {
                                    if replay_certificate(&p, cert, &GroundConfig::default()).is_unsat() {
                                        Ok((0, 1))
                                    } else {
                                        Err(format!("{name} [{mode}]: certificate does not replay"))
                                    }
                                }
                                _ => Ok((0, 0)),
                            }
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        chunks.into_iter().flat_map(|h| h.join().unwrap()).collect()
    });
    let (mut sat, mut unsat) = (0, 0);
    for r in results {
        let (s, u) = r?;
        sat += s;
        unsat += u;
    }
    Ok(format!("{} runs: {sat} sat models re-verified, {unsat} unsat certificates replayed", tasks.len()))
}

const FIVE: &str = "(set-logic UFLIA)
(declare-sort U 0)
(declare-fun f (Int) Int)
(declare-fun g (Int) Int)
(declare-fun p (U) Bool)
(declare-fun c () Int)
(declare-fun u () U)
(assert (forall ((x Int)) (> (f x) c)))
(assert (= (f (g 1)) 3))
(assert (forall ((x U)) (=> (p x) (> (g 0) c))))
(assert (p u))
(assert (> c 4))
";

fn only_int_bool(s: &Script) -> bool {
    let mut ok = s.sorts.is_empty();
    for d in &s.declarations {
        ok &= d.arg_sorts.iter().chain([&d.sort]).all(|s| matches!(s, Sort::Int | Sort::Bool));
    }
    for a in &s.assertions {
        a.visit(&mut |t| match t {
            Term::Forall(bs, _) | Term::Exists(bs, _) => ok &= bs.iter().all(|(_, s)| matches!(s, Sort::Int | Sort::Bool)),
            _ => ok &= matches!(t.sort(), Sort::Int | Sort::Bool),
        });
    }
    ok
}

fn criterion_8() -> Check {
    // Rows: assertions 1..5. Columns: {f,g}, {f,p}, {g,p}.
    // 1 uses f; 2 uses f,g; 3 uses g,p; 4 uses p; 5 uses only the constant c.
    let expected = [
        [true, true, false],
        [true, false, false],
        [false, false, true],
        [false, true, true],
        [false, false, false],
    ];
    let s = parse_script(FIVE).map_err(|e| e.to_string())?;
    let relaxed = relax_sorts(&s);
    let frags = enumerate_fragments(&s, 2, None).map_err(|e| e.to_string())?;
    let names: Vec<String> = frags.iter().map(|(n, _)| n.join("-")).collect();
    ensure!(names == ["f-g", "f-p", "g-p"], "subsets {names:?}");
    for (col, (_, f)) in frags.iter().enumerate() {
        for (row, a) in relaxed.assertions.iter().enumerate() {
            ensure!(f.assertions.contains(a) == expected[row][col], "assertion {} in {}", row + 1, names[col]);
        }
        let reparsed = parse_script(&print_script(f)).map_err(|e| e.to_string())?;
        ensure!(only_int_bool(&reparsed), "{} keeps a non-Int/Bool sort", names[col]);
    }

    let dir = scratch("c8");
    let src = dir.join("five.smt2");
    fs::write(&src, FIVE).unwrap();
    let out = bin().args(["fragment", "-k", "2", "--out"]).arg(dir.join("out")).arg(&src).output().unwrap();
    ensure!(out.status.code() == Some(0), "fragment exit {:?}", out.status.code());
    let mut files: Vec<String> = fs::read_dir(dir.join("out"))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    files.sort();
    ensure!(files == ["five.f-g.smt2", "five.f-p.smt2", "five.g-p.smt2"], "files {files:?}");
    for f in &files {
        let text = fs::read_to_string(dir.join("out").join(f)).unwrap();
        let s = parse_script(&text).map_err(|e| format!("{f}: {e}"))?;
        ensure!(only_int_bool(&s), "{f} keeps a non-Int/Bool sort");
    }
    Ok("keep/drop table matches for {f,g}, {f,p}, {g,p}; 3 files re-parse with Int/Bool only".into())
}

fn criterion_9() -> Option<Check> {
    let external = std::env::var("PWLMBQI_EXTERNAL_SOLVER").ok().filter(|s| !s.trim().is_empty())?;
    Some((|| {
        let dir = scratch("c9");
        let mut rng = ChaCha8Rng::seed_from_u64(0xd1ff);
        let (mut agree, mut open) = (0, 0);
        for i in 0..200 {
            let text = random_ground_problem(&mut rng);
            let path = dir.join(format!("fuzz{i:03}.smt2"));
            fs::write(&path, &text).unwrap();
            let (_, r) = solve_text(&text, &Config { timeout: Some(Duration::from_secs(10)), ..Config::default() });
            let theirs = run_external(&external, &path, Duration::from_secs(10)).map_err(|e| format!("{e:#}"))?;
            match (r.outcome.verdict(), &theirs) {
                ("sat", ExternalVerdict::Unsat) | ("unsat", ExternalVerdict::Sat) => {
                    return Err(format!("mismatch on {}: ours {}, external {theirs:?}", path.display(), r.outcome.verdict()))
                }
                ("sat", ExternalVerdict::Sat) | ("unsat", ExternalVerdict::Unsat) => agree += 1,
                _ => open += 1,
            }
        }
        Ok(format!("200 instances against `{external}`: {agree} agree, {open} inconclusive, 0 mismatches"))
    })())
}

fn criterion_10() -> Check {
    let dir = scratch("c10");
    let out = bin()
        .args(["bench", "--modes", "smart,non-smart,off", "--timeout", "5", "--out"])
        .arg(&dir)
        .arg(corpus_dir())
        .output()
        .unwrap();
    ensure!(out.status.code() == Some(0), "bench exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
    let table = fs::read_to_string(dir.join("summary.md")).unwrap();
    let mut lines = table.lines();
    ensure!(
        lines.next() == Some("| solver | solved: SAT | solved: UNSAT | solved: total |"),
        "header: {table}"
    );
    let csv = fs::read_to_string(dir.join("results.csv")).unwrap();
    let problems = pwlmbqi_cli::collect_problems(&corpus_dir()).unwrap().len();
    ensure!(problems == 10, "corpus has {problems} problems");
    ensure!(csv.lines().count() == 1 + 3 * problems, "csv rows: {}", csv.lines().count());
    let mut totals = BTreeMap::new();
    for line in lines.skip(1) {
        let cells: Vec<&str> = line.trim_matches('|').split('|').map(str::trim).collect();
        totals.insert(cells[0].to_string(), cells[3].parse::<usize>().unwrap());
    }
    let (s, n, o) = (totals["smart"], totals["non-smart"], totals["off"]);
    ensure!(s >= n && n >= o, "ordering violated: smart {s}, non-smart {n}, off {o}");
    Ok(format!("table layout ok; solved smart {s}, non-smart {n}, off {o} of {problems}"))
}

fn run(n: usize, check: impl FnOnce() -> Check) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
        let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    });
    match outcome {
        Ok(detail) => {
            println!("criterion {n}: PASS ({detail})");
            true
        }
        Err(detail) => {
            println!("criterion {n}: FAIL ({detail})");
            false
        }
    }
}

fn main() {
    let mut ok = true;
    ok &= run(1, criterion_1);
    ok &= run(2, criterion_2);
    ok &= run(3, criterion_3);
    ok &= run(4, criterion_4);
    ok &= run(5, criterion_5);
    ok &= run(6, criterion_6);
    ok &= run(7, criterion_7);
    ok &= run(8, criterion_8);
    match criterion_9() {
        Some(result) => ok &= run(9, || result),
        None => println!("criterion 9: SKIP (no external solver configured; set PWLMBQI_EXTERNAL_SOLVER)"),
    }
    ok &= run(10, criterion_10);
    if !ok {
        std::process::exit(1);
    }
}
