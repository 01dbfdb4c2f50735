//! DPLL search over the encoded clauses with two-watched-literal propagation
//! and chronological backtracking. The arithmetic theory is consulted at
//! every propagation fixpoint (rational relaxation) and on complete
//! assignments (integer branch-and-bound).

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;

use super::encode::{AtomKind, Encoder, Lit};
use crate::simplex::{integer_search, Budget, Feasibility, IntOutcome, Simplex};

#[derive(Clone, Debug)]
pub(crate) struct Limits {
    pub deadline: Option<Instant>,
    pub max_decisions: u64,
    pub bb_nodes: u64,
}

pub(crate) enum Outcome {
    Sat { bools: Vec<bool>, ints: Vec<BigInt> },
    Unsat,
    Unknown(String),
}

/// Simplex with one slack row per distinct atom left-hand side and no bounds.
struct Theory {
    base: Simplex,
    /// Simplex variable constrained by each atom.
    target: Vec<usize>,
}

impl Theory {
    fn new(enc: &Encoder) -> Theory {
        let mut base = Simplex::new(enc.num_int);
        let mut rows: HashMap<&[(usize, BigInt)], usize> = HashMap::new();
        let target = enc
            .atoms
            .iter()
            .map(|a| match a.coeffs.as_slice() {
                [(v, k)] if *k == BigInt::from(1) => *v,
                coeffs => *rows.entry(coeffs).or_insert_with(|| base.add_row(coeffs)),
            })
            .collect();
        Theory { base, target }
    }

    fn load(&self, enc: &Encoder, value: &[Option<bool>]) -> Simplex {
        let mut s = self.base.clone();
        for (atom, &var) in enc.atoms.iter().zip(&self.target) {
            match (atom.kind, value[atom.var]) {
                (_, None) | (AtomKind::Eq, Some(false)) => {}
                (AtomKind::Le, Some(true)) => s.set_upper_int(var, &atom.bound),
                (AtomKind::Le, Some(false)) => s.set_lower_int(var, &(&atom.bound + 1)),
                (AtomKind::Eq, Some(true)) => {
                    s.set_lower_int(var, &atom.bound);
                    s.set_upper_int(var, &atom.bound);
                }
            }
        }
        s
    }
}

struct Level {
    trail_start: usize,
    decision: Lit,
    flipped: bool,
}

struct Search<'a> {
    enc: &'a Encoder,
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    value: Vec<Option<bool>>,
    trail: Vec<Lit>,
    qhead: usize,
    levels: Vec<Level>,
}

impl<'a> Search<'a> {
    fn lit_value(&self, l: Lit) -> Option<bool> {
        self.value[l.var()].map(|v| v == l.positive())
    }

    fn assign(&mut self, l: Lit) {
        self.value[l.var()] = Some(l.positive());
        self.trail.push(l);
    }

    /// Unit propagation; returns `false` on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let falsified = !self.trail[self.qhead];
            self.qhead += 1;
            let watching = std::mem::take(&mut self.watches[falsified.code()]);
            let mut keep = Vec::with_capacity(watching.len());
            let mut conflict = false;
            for (idx, &ci) in watching.iter().enumerate() {
                if conflict {
                    keep.extend_from_slice(&watching[idx..]);
                    break;
                }
                let clause = &mut self.clauses[ci];
                if clause[0] == falsified {
                    clause.swap(0, 1);
                }
                let other = clause[0];
                if self.value[other.var()].map(|v| v == other.positive()) == Some(true) {
                    keep.push(ci);
                    continue;
                }
                let replacement = (2..clause.len())
                    .find(|&k| self.value[clause[k].var()].map(|v| v == clause[k].positive()) != Some(false));
                if let Some(k) = replacement {
                    clause.swap(1, k);
                    let w = clause[1];
                    self.watches[w.code()].push(ci);
                    continue;
                }
                keep.push(ci);
                match self.lit_value(other) {
                    Some(false) => conflict = true,
                    _ => self.assign(other),
                }
            }
            self.watches[falsified.code()] = keep;
            if conflict {
                return false;
            }
        }
        true
    }

    /// Undoes the most recent unflipped decision and asserts its negation.
    /// Returns `false` when no decision is left to flip.
    fn backtrack(&mut self) -> bool {
        while let Some(level) = self.levels.pop() {
            for l in self.trail.drain(level.trail_start..) {
                self.value[l.var()] = None;
            }
            self.qhead = self.trail.len();
            if !level.flipped {
                let flipped = !level.decision;
                self.levels.push(Level { trail_start: self.trail.len(), decision: flipped, flipped: true });
                self.assign(flipped);
                return true;
            }
        }
        false
    }
}

pub(crate) fn search(enc: &Encoder, limits: &Limits) -> Outcome {
    let n = enc.num_bool;
    let mut s = Search {
        enc,
        clauses: Vec::new(),
        watches: vec![Vec::new(); 2 * n],
        value: vec![None; n],
        trail: Vec::new(),
        qhead: 0,
        levels: Vec::new(),
    };
    // Level-zero units and empty clauses.
    for c in &enc.clauses {
        match c.as_slice() {
            [] => return Outcome::Unsat,
            [l] => match s.lit_value(*l) {
                Some(false) => return Outcome::Unsat,
                Some(true) => {}
                None => s.assign(*l),
            },
            _ => {
                let ci = s.clauses.len();
                s.watches[c[0].code()].push(ci);
                s.watches[c[1].code()].push(ci);
                s.clauses.push(c.clone());
            }
        }
    }
    let theory = Theory::new(enc);
    let mut decisions = 0u64;
    let mut incomplete = false;
    let mut next_var = 0;
    loop {
        let mut ok = s.propagate();
        if ok {
            ok = s.enc.atoms.is_empty() || theory.load(s.enc, &s.value).check() == Feasibility::Feasible;
        }
        if ok {
            while next_var < n && s.value[next_var].is_some() {
                next_var += 1;
            }
            if next_var < n {
                decisions += 1;
                if decisions > limits.max_decisions {
                    return Outcome::Unknown("decision limit reached".into());
                }
                if decisions.is_multiple_of(256) && limits.deadline.is_some_and(|d| Instant::now() >= d) {
                    return Outcome::Unknown("timeout".into());
                }
                let l = Lit::new(next_var, false);
                s.levels.push(Level { trail_start: s.trail.len(), decision: l, flipped: false });
                s.assign(l);
                continue;
            }
            let mut budget = Budget::new(limits.bb_nodes, limits.deadline);
            match integer_search(theory.load(s.enc, &s.value), &mut budget) {
                IntOutcome::Sat(mut ints) => {
                    ints.truncate(enc.num_int);
                    let bools = s.value.iter().map(|v| v.unwrap_or(false)).collect();
                    return Outcome::Sat { bools, ints };
                }
                IntOutcome::Unsat => {}
                IntOutcome::Unknown => {
                    if limits.deadline.is_some_and(|d| Instant::now() >= d) {
                        return Outcome::Unknown("timeout".into());
                    }
                    incomplete = true;
                }
            }
        }
        if !s.backtrack() {
            return if incomplete {
                Outcome::Unknown("integer search budget exhausted".into())
            } else {
                Outcome::Unsat
            };
        }
        next_var = 0;
    }
}
