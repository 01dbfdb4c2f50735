//! Decision procedure for quantifier-free UFLIA.
//!
//! Terms are purified into clauses over linear atoms (see `encode`), searched
//! by a small DPLL(T) loop (see `sat`), and uninterpreted symbols are kept
//! functional by model-driven congruence lemmas: whenever a candidate
//! assignment gives two applications of one symbol equal arguments but
//! different results, the lemma `args equal ⇒ results equal` is added and the
//! search restarts. Only finitely many such lemmas exist, so this terminates.
//!
//! Every `Sat` answer is checked by evaluating the input under the model.

mod encode;
mod sat;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_bigint::BigInt;
use thiserror::Error;

use crate::pwl::FunctionPoint;
use crate::term::{evaluate, Interpretation, Term, Valuation, Value};
use encode::{AppValue, Encoder, FreeVar};
use sat::{search, Limits, Outcome};

#[derive(Clone, Debug)]
pub struct GroundConfig {
    pub deadline: Option<Instant>,
    /// Boolean decisions per search before giving up.
    pub max_decisions: u64,
    /// Branch-and-bound nodes per integer check.
    pub bb_nodes: u64,
}

impl Default for GroundConfig {
    fn default() -> Self {
        GroundConfig { deadline: None, max_decisions: 1_000_000, bb_nodes: 20_000 }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroundError {
    #[error("ground check given a quantified term")]
    NotGround,
}

/// Values of free variables and of every application that occurred in the
/// checked terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroundModel {
    vars: Valuation,
    apps: BTreeMap<String, BTreeMap<Vec<Value>, Value>>,
}

impl GroundModel {
    pub fn vars(&self) -> &Valuation {
        &self.vars
    }

    pub fn table(&self, symbol: &str) -> Option<&BTreeMap<Vec<Value>, Value>> {
        self.apps.get(symbol)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &String> {
        self.apps.keys()
    }

    /// Value of a free variable or of a 0-ary symbol.
    pub fn constant(&self, name: &str) -> Option<&Value> {
        self.vars.get(name).or_else(|| self.apps.get(name)?.get(&[][..]))
    }
}

impl Interpretation for GroundModel {
    fn apply(&self, symbol: &str, args: &[Value]) -> Option<Value> {
        self.apps.get(symbol)?.get(args).cloned()
    }
}

/// Applied instances of `symbol`, lexicographically ordered by arguments.
pub fn extract_points(m: &GroundModel, symbol: &str) -> Vec<FunctionPoint<Value>> {
    let Some(table) = m.table(symbol) else {
        return Vec::new();
    };
    table
        .iter()
        .map(|(args, v)| {
            let args = args.iter().map(|a| a.as_int().cloned().expect("integer arguments")).collect();
            FunctionPoint::new(args, v.clone())
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroundResult {
    Sat(GroundModel),
    Unsat,
    Unknown(String),
}

impl GroundResult {
    pub fn is_unsat(&self) -> bool {
        matches!(self, GroundResult::Unsat)
    }
}

/// Decides the conjunction of `assertions`.
pub fn check(assertions: &[Term], cfg: &GroundConfig) -> Result<GroundResult, GroundError> {
    if assertions.iter().any(|a| !a.is_quantifier_free()) {
        return Err(GroundError::NotGround);
    }
    let mut enc = Encoder::new();
    for a in assertions {
        if let Err(e) = enc.assert(a) {
            return Ok(GroundResult::Unknown(format!("unsupported: {}", e.0)));
        }
    }
    let limits = Limits { deadline: cfg.deadline, max_decisions: cfg.max_decisions, bb_nodes: cfg.bb_nodes };
    let mut lemmas: BTreeSet<(usize, usize)> = BTreeSet::new();
    loop {
        let (bools, ints) = match search(&enc, &limits) {
            Outcome::Unsat => return Ok(GroundResult::Unsat),
            Outcome::Unknown(reason) => return Ok(GroundResult::Unknown(reason)),
            Outcome::Sat { bools, ints } => (bools, ints),
        };
        let app_args: Vec<Vec<BigInt>> =
            enc.apps.iter().map(|a| a.args.iter().map(|l| l.eval(&ints)).collect()).collect();
        let app_value = |v: AppValue| match v {
            AppValue::Int(i) => Value::Int(ints[i].clone()),
            AppValue::Bool(b) => Value::Bool(bools[b]),
        };
        let mut first: BTreeMap<(&str, &[BigInt]), usize> = BTreeMap::new();
        let mut fresh_lemmas = Vec::new();
        for (j, app) in enc.apps.iter().enumerate() {
            match first.get(&(app.symbol.as_str(), app_args[j].as_slice())) {
                None => {
                    first.insert((app.symbol.as_str(), app_args[j].as_slice()), j);
                }
                Some(&i) => {
                    if app_value(enc.apps[i].value) != app_value(app.value) && lemmas.insert((i, j)) {
                        fresh_lemmas.push((i, j));
                    }
                }
            }
        }
        if !fresh_lemmas.is_empty() {
            log::trace!("adding {} congruence lemmas", fresh_lemmas.len());
            for (i, j) in fresh_lemmas {
                enc.congruence_lemma(i, j);
            }
            continue;
        }
        let mut model = GroundModel::default();
        for (name, v) in &enc.free {
            let value = match v {
                FreeVar::Int(i) => Value::Int(ints[*i].clone()),
                FreeVar::Bool(b) => Value::Bool(bools[*b]),
            };
            model.vars.insert(name.clone(), value);
        }
        for (app, args) in enc.apps.iter().zip(app_args) {
            let args = args.into_iter().map(Value::Int).collect();
            model.apps.entry(app.symbol.clone()).or_default().insert(args, app_value(app.value));
        }
        for a in assertions {
            if evaluate(a, &model.vars, &model) != Ok(Value::Bool(true)) {
                log::error!("ground model fails assertion {a}");
                return Ok(GroundResult::Unknown("internal error: model check failed".into()));
            }
        }
        return Ok(GroundResult::Sat(model));
    }
}
