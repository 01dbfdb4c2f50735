//! Model-based quantifier instantiation with learned piecewise-linear
//! candidate models.
//!
//! Each round solves the ground part, fits an interpretation for every
//! symbol from the ground model's function points, and looks for a
//! counterexample to every quantified assertion under that interpretation.
//! Counterexamples become ground instances for the next round.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;

use crate::ground::{self, extract_points, GroundConfig, GroundResult, GroundModel};
use crate::model::CandidateModel;
use crate::pwl::{
    fit_function, fit_predicate_greedy, fit_predicate_recursive, fit_table, FitError, FunctionPoint,
    RecursiveFitOptions,
};
use crate::smtlib::{print_model, relax_sorts, Declaration, Script};
use crate::term::{
    evaluate, instantiate, negate_for_check, push_not, simplify, substitute, substitute_model, Sort, Term, Valuation,
    Value,
};

/// How predicates are learned. Functions always use the greedy segment fit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Decision trees over halfspaces.
    Smart,
    /// One halfspace per lexicographic segment.
    NonSmart,
    /// No learning: value tables with a default, as in plain MBQI.
    Off,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Smart, Mode::NonSmart, Mode::Off];
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Smart => "smart",
            Mode::NonSmart => "non-smart",
            Mode::Off => "off",
        })
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "smart" => Ok(Mode::Smart),
            "non-smart" => Ok(Mode::NonSmart),
            "off" => Ok(Mode::Off),
            _ => Err(format!("unknown mode `{s}` (expected smart, non-smart or off)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub mode: Mode,
    pub max_iters: usize,
    pub timeout: Option<Duration>,
    pub fit: RecursiveFitOptions,
    /// Re-check every `sat` model from scratch before returning it.
    pub verify_models: bool,
    pub ground: GroundConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            mode: Mode::Smart,
            max_iters: 500,
            timeout: None,
            fit: RecursiveFitOptions::default(),
            verify_models: true,
            ground: GroundConfig::default(),
        }
    }
}

/// Ground instances whose conjunction with the ground assertions is
/// unsatisfiable.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Certificate {
    pub instantiations: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Sat(CandidateModel),
    Unsat(Certificate),
    Unknown(String),
    ResourceOut,
}

impl Outcome {
    pub fn verdict(&self) -> &'static str {
        match self {
            Outcome::Sat(_) => "sat",
            Outcome::Unsat(_) => "unsat",
            Outcome::Unknown(_) | Outcome::ResourceOut => "unknown",
        }
    }
}

/// One round of the loop.
#[derive(Clone, Debug, PartialEq)]
pub struct Round {
    /// The candidate model, printed.
    pub candidate: String,
    /// Counterexamples found, as (index into quantified assertions, binder values).
    pub counterexamples: Vec<(usize, Valuation)>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Stats {
    pub iterations: usize,
    pub instantiations: usize,
    pub fits: usize,
    pub elapsed: Duration,
    pub rounds: Vec<Round>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub outcome: Outcome,
    pub stats: Stats,
}

/// Assertions split into the ground part and prenex universal blocks.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Problem {
    pub ground: Vec<Term>,
    pub quantified: Vec<Term>,
}

/// Splits conjunctions, merges directly nested universals and turns `¬∃`
/// into `∀¬`. Any other quantifier placement is rejected.
pub fn preprocess(assertions: &[Term]) -> Result<Problem, String> {
    let mut p = Problem::default();
    let mut stack: Vec<Term> = assertions.iter().rev().cloned().collect();
    while let Some(t) = stack.pop() {
        match t {
            Term::And(args) => stack.extend(args.into_iter().rev()),
            Term::Forall(..) => p.quantified.push(prenex_universal(t)?),
            Term::Not(inner) if matches!(*inner, Term::Exists(..)) => {
                let Term::Exists(bs, body) = *inner else { unreachable!() };
                stack.push(Term::Forall(bs, Box::new(push_not(&body))));
            }
            t if t.is_quantifier_free() => p.ground.push(t),
            _ => return Err("unsupported quantifier structure".into()),
        }
    }
    Ok(p)
}

fn prenex_universal(t: Term) -> Result<Term, String> {
    let Term::Forall(mut binders, body) = t else { unreachable!() };
    let mut body = *body;
    while let Term::Forall(inner, b) = body {
        let mut map = HashMap::new();
        for (name, sort) in inner {
            if binders.iter().any(|(n, _)| *n == name) {
                let fresh = crate::term::fresh_name(&name, |c| binders.iter().any(|(n, _)| n == c));
                map.insert(name, Term::Var(fresh.clone(), sort.clone()));
                binders.push((fresh, sort));
            } else {
                binders.push((name, sort));
            }
        }
        body = substitute(&b, &map);
    }
    if !body.is_quantifier_free() {
        return Err("unsupported quantifier structure".into());
    }
    Ok(Term::Forall(binders, Box::new(body)))
}

fn int_points(points: Vec<FunctionPoint<Value>>) -> Vec<FunctionPoint<BigInt>> {
    points
        .into_iter()
        .map(|p| FunctionPoint::new(p.args, p.value.as_int().cloned().expect("integer result")))
        .collect()
}

fn bool_points(points: Vec<FunctionPoint<Value>>) -> Vec<FunctionPoint<bool>> {
    points
        .into_iter()
        .map(|p| FunctionPoint::new(p.args, p.value.as_bool().expect("boolean result")))
        .collect()
}

/// Fits an interpretation for every declared symbol from the ground model.
pub fn build_candidate(
    gm: &GroundModel,
    decls: &[Declaration],
    mode: Mode,
    fit: RecursiveFitOptions,
) -> Result<CandidateModel, FitError> {
    let mut m = CandidateModel::default();
    for d in decls {
        let points = extract_points(gm, &d.name);
        let n = d.arity();
        let body = match (mode, &d.sort) {
            (Mode::Off, sort) => fit_table(n, &points, &Value::default_for(sort))?,
            (_, Sort::Bool) if mode == Mode::Smart => fit_predicate_recursive(n, &bool_points(points), fit)?,
            (_, Sort::Bool) => fit_predicate_greedy(n, &bool_points(points))?,
            (_, _) => fit_function(n, &int_points(points))?,
        };
        m.insert(&d.name, d.arg_sorts.clone(), d.sort.clone(), body);
    }
    Ok(m)
}

/// Binder values falsifying `q` under `m`, if any.
pub fn find_counterexample(m: &CandidateModel, q: &Term, cfg: &GroundConfig) -> Result<Option<Valuation>, String> {
    let (binders, negated) = negate_for_check(q).map_err(|e| e.to_string())?;
    let check = simplify(&substitute_model(&negated, m));
    match ground::check(&[check], cfg).map_err(|e| e.to_string())? {
        GroundResult::Unsat => Ok(None),
        GroundResult::Unknown(reason) => Err(reason),
        GroundResult::Sat(gm) => Ok(Some(
            binders
                .iter()
                .map(|(name, sort)| {
                    let v = gm.vars().get(name).cloned().unwrap_or_else(|| Value::default_for(sort));
                    (name.clone(), v)
                })
                .collect(),
        )),
    }
}

/// Independent check of a `sat` answer: ground assertions evaluate to true
/// and no quantified assertion has a counterexample.
pub fn verify_model(problem: &Problem, m: &CandidateModel, cfg: &GroundConfig) -> Result<(), String> {
    for g in &problem.ground {
        match evaluate(g, &Valuation::new(), m) {
            Ok(Value::Bool(true)) => {}
            other => return Err(format!("ground assertion {g} evaluates to {other:?}")),
        }
    }
    for q in &problem.quantified {
        if let Some(c) = find_counterexample(m, q, cfg)? {
            return Err(format!("{q} has counterexample {c:?}"));
        }
    }
    Ok(())
}

/// Re-checks an `unsat` certificate against the ground assertions.
pub fn replay_certificate(problem: &Problem, cert: &Certificate, cfg: &GroundConfig) -> GroundResult {
    let mut all = problem.ground.clone();
    all.extend(cert.instantiations.iter().cloned());
    ground::check(&all, cfg).unwrap_or_else(|e| GroundResult::Unknown(e.to_string()))
}

pub fn solve(script: &Script, cfg: &Config) -> SolveResult {
    let start = Instant::now();
    let deadline = cfg.timeout.map(|t| start + t);
    let mut stats = Stats::default();
    let outcome = run(script, cfg, deadline, &mut stats);
    stats.elapsed = start.elapsed();
    SolveResult { outcome, stats }
}

fn run(script: &Script, cfg: &Config, deadline: Option<Instant>, stats: &mut Stats) -> Outcome {
    let script = relax_sorts(script);
    let problem = match preprocess(&script.assertions) {
        Ok(p) => p,
        Err(reason) => return Outcome::Unknown(reason),
    };
    let gcfg = GroundConfig { deadline, ..cfg.ground.clone() };
    let expired = || deadline.is_some_and(|d| Instant::now() >= d);
    let mut instances: Vec<Term> = Vec::new();
    let mut seen: BTreeSet<(usize, Vec<Value>)> = BTreeSet::new();
    for _ in 0..cfg.max_iters {
        if expired() {
            return Outcome::ResourceOut;
        }
        stats.iterations += 1;
        let mut phi = problem.ground.clone();
        phi.extend(instances.iter().cloned());
        let gm = match ground::check(&phi, &gcfg) {
            Err(e) => return Outcome::Unknown(e.to_string()),
            Ok(GroundResult::Unsat) => {
                return Outcome::Unsat(Certificate { instantiations: instances });
            }
            Ok(GroundResult::Unknown(_)) if expired() => return Outcome::ResourceOut,
            Ok(GroundResult::Unknown(reason)) => return Outcome::Unknown(reason),
            Ok(GroundResult::Sat(gm)) => gm,
        };
        stats.fits += script.declarations.len();
        let candidate = match build_candidate(&gm, &script.declarations, cfg.mode, cfg.fit) {
            Ok(c) => c,
            Err(e) => return Outcome::Unknown(format!("internal error: {e}")),
        };
        let mut round = Round { candidate: print_model(&candidate), counterexamples: Vec::new() };
        for (i, q) in problem.quantified.iter().enumerate() {
            match find_counterexample(&candidate, q, &gcfg) {
                Ok(None) => {}
                Ok(Some(c)) => round.counterexamples.push((i, c)),
                Err(_) if expired() => return Outcome::ResourceOut,
                Err(reason) => return Outcome::Unknown(reason),
            }
        }
        log::debug!("round {}: {} counterexamples", stats.iterations, round.counterexamples.len());
        if round.counterexamples.is_empty() {
            stats.rounds.push(round);
            if cfg.verify_models {
                if let Err(e) = verify_model(&problem, &candidate, &gcfg) {
                    if expired() {
                        return Outcome::ResourceOut;
                    }
                    log::error!("candidate model failed re-verification: {e}");
                    return Outcome::Unknown(format!("internal error: model re-verification failed: {e}"));
                }
            }
            return Outcome::Sat(candidate);
        }
        for (i, c) in &round.counterexamples {
            let q = &problem.quantified[*i];
            if !seen.insert((*i, c.values().cloned().collect())) {
                log::error!("counterexample {c:?} for {q} repeated");
                return Outcome::Unknown("internal error: repeated counterexample".into());
            }
            instances.push(instantiate(q, c).expect("counterexample covers every binder"));
            stats.instantiations += 1;
        }
        stats.rounds.push(round);
    }
    Outcome::Unknown("iteration limit".into())
}
