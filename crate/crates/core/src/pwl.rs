//! Piecewise-linear interpretations learned from finitely many function
//! points.
//!
//! * [`fit_function`] covers lexicographically sorted points with as few
//!   integer linear segments as the greedy scan allows, splitting between
//!   segments on a lexicographic-order condition.
//! * [`fit_predicate_greedy`] is the same scan with separating halfspaces as
//!   segments.
//! * [`fit_predicate_recursive`] builds a decision tree whose internal nodes
//!   are arbitrary halfspaces, so every leaf is a convex polyhedron holding
//!   points of a single label.
//!
//! Every fitter reproduces its input points exactly and yields a term that is
//! total on `ℤⁿ`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::diophantine::EquationSystem;
use crate::feasibility::InequalitySystem;
use crate::term::{evaluate, substitute, CmpOp, NoSymbols, Sort, Term, TermError, Valuation, Value};

/// One sampled evaluation `f(args) = value`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionPoint<V> {
    pub args: Vec<BigInt>,
    pub value: V,
}

impl<V> FunctionPoint<V> {
    pub fn new(args: Vec<BigInt>, value: V) -> Self {
        FunctionPoint { args, value }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FitError {
    #[error("conflicting values for arguments {0:?}")]
    Conflict(Vec<BigInt>),
    #[error("point has {got} arguments, expected {expected}")]
    Arity { expected: usize, got: usize },
    #[error("split points must be distinct and lexicographically ordered")]
    BadSplit,
    #[error("ordering needs both a positive and a negative point")]
    SingleLabel,
}

/// Formal parameter names used for an `n`-ary symbol body.
pub fn formal_params(n: usize) -> Vec<String> {
    match n {
        0..=3 => ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect(),
        _ => (0..n).map(|i| format!("x{i}")).collect(),
    }
}

/// `λx. sᵀx + c`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub slopes: Vec<BigInt>,
    pub intercept: BigInt,
}

impl LinearForm {
    pub fn new(slopes: Vec<BigInt>, intercept: BigInt) -> Self {
        LinearForm { slopes, intercept }
    }

    pub fn constant(arity: usize, c: BigInt) -> Self {
        LinearForm { slopes: vec![BigInt::zero(); arity], intercept: c }
    }

    pub fn eval(&self, args: &[BigInt]) -> BigInt {
        dot(&self.slopes, args) + &self.intercept
    }

    pub fn to_term(&self, params: &[String]) -> Term {
        linear_sum(&self.slopes, &self.intercept, params)
    }
}

/// The halfspace test `sᵀx ≥ bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub slopes: Vec<BigInt>,
    pub bound: BigInt,
}

impl Halfspace {
    pub fn new(slopes: Vec<BigInt>, bound: BigInt) -> Self {
        Halfspace { slopes, bound }
    }

    pub fn contains(&self, args: &[BigInt]) -> bool {
        dot(&self.slopes, args) >= self.bound
    }

    pub fn to_term(&self, params: &[String]) -> Term {
        let lhs = linear_sum(&self.slopes, &BigInt::zero(), params);
        Term::cmp(CmpOp::Ge, lhs, Term::Int(self.bound.clone()))
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Renders `Σ sᵢxᵢ + c` as `(- positives negatives)` so that, e.g., slopes
/// `(1, −1)` print as `(- x y)`.
fn linear_sum(slopes: &[BigInt], constant: &BigInt, params: &[String]) -> Term {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (k, p) in slopes.iter().zip(params) {
        if k.is_zero() {
            continue;
        }
        let var = Term::Var(p.clone(), Sort::Int);
        let mag = k.abs();
        let t = if mag.is_one() { var } else { Term::MulConst(mag, Box::new(var)) };
        if k.is_positive() {
            pos.push(t);
        } else {
            neg.push(t);
        }
    }
    if constant.is_positive() {
        pos.push(Term::Int(constant.clone()));
    } else if constant.is_negative() {
        neg.push(Term::Int(-constant));
    }
    let sum = |mut v: Vec<Term>| if v.len() == 1 { v.pop().unwrap() } else { Term::Add(v) };
    match (pos.is_empty(), neg.is_empty()) {
        (true, true) => Term::int(0),
        (false, true) => sum(pos),
        (true, false) => match neg.as_slice() {
            [Term::Int(c)] => Term::Int(-c),
            _ => Term::Neg(Box::new(sum(neg))),
        },
        (false, false) => Term::Sub(Box::new(sum(pos)), Box::new(sum(neg))),
    }
}

/// Condition of an internal node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Guard {
    Halfspace(Halfspace),
    /// Arbitrary condition over [`formal_params`] of the fit's arity.
    Formula(Term),
}

/// If-then-else tree of linear pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PwlTerm {
    Linear(LinearForm),
    Const(bool),
    /// Predicate leaf that is itself a halfspace test.
    Halfspace(Halfspace),
    Ite(Guard, Box<PwlTerm>, Box<PwlTerm>),
}

impl PwlTerm {
    pub fn ite(guard: Guard, then: PwlTerm, els: PwlTerm) -> PwlTerm {
        PwlTerm::Ite(guard, Box::new(then), Box::new(els))
    }

    pub fn ite_halfspace(h: Halfspace, then: PwlTerm, els: PwlTerm) -> PwlTerm {
        PwlTerm::ite(Guard::Halfspace(h), then, els)
    }

    pub fn sort(&self) -> Sort {
        match self {
            PwlTerm::Linear(_) => Sort::Int,
            PwlTerm::Const(_) | PwlTerm::Halfspace(_) => Sort::Bool,
            PwlTerm::Ite(_, t, _) => t.sort(),
        }
    }

    /// Number of leaves.
    pub fn pieces(&self) -> usize {
        match self {
            PwlTerm::Ite(_, t, e) => t.pieces() + e.pieces(),
            _ => 1,
        }
    }

    pub fn eval(&self, args: &[BigInt]) -> Result<Value, TermError> {
        let mut node = self;
        loop {
            match node {
                PwlTerm::Linear(l) => return Ok(Value::Int(l.eval(args))),
                PwlTerm::Const(b) => return Ok(Value::Bool(*b)),
                PwlTerm::Halfspace(h) => return Ok(Value::Bool(h.contains(args))),
                PwlTerm::Ite(guard, t, e) => {
                    let taken = match guard {
                        Guard::Halfspace(h) => h.contains(args),
                        Guard::Formula(cond) => {
                            let env: Valuation = formal_params(args.len())
                                .into_iter()
                                .zip(args.iter().map(|a| Value::Int(a.clone())))
                                .collect();
                            evaluate(cond, &env, &NoSymbols)?.as_bool().ok_or(TermError::SortMismatch)?
                        }
                    };
                    node = if taken { t } else { e };
                }
            }
        }
    }

    pub fn to_term(&self, params: &[String]) -> Term {
        match self {
            PwlTerm::Linear(l) => l.to_term(params),
            PwlTerm::Const(b) => Term::Bool(*b),
            PwlTerm::Halfspace(h) => h.to_term(params),
            PwlTerm::Ite(guard, t, e) => {
                let cond = match guard {
                    Guard::Halfspace(h) => h.to_term(params),
                    Guard::Formula(f) => rename_params(f, params),
                };
                Term::ite(cond, t.to_term(params), e.to_term(params))
            }
        }
    }
}

fn rename_params(t: &Term, params: &[String]) -> Term {
    let formal = formal_params(params.len());
    if formal == params {
        return t.clone();
    }
    let map: HashMap<String, Term> = formal
        .into_iter()
        .zip(params.iter().map(|p| Term::Var(p.clone(), Sort::Int)))
        .collect();
    substitute(t, &map)
}

/// Sorts lexicographically by arguments, drops exact duplicates and rejects
/// conflicting ones.
fn normalize<V: Clone + PartialEq>(arity: usize, points: &[FunctionPoint<V>]) -> Result<Vec<FunctionPoint<V>>, FitError> {
    if let Some(p) = points.iter().find(|p| p.args.len() != arity) {
        return Err(FitError::Arity { expected: arity, got: p.args.len() });
    }
    let mut sorted: Vec<FunctionPoint<V>> = points.to_vec();
    sorted.sort_by(|a, b| a.args.cmp(&b.args));
    let mut out: Vec<FunctionPoint<V>> = Vec::with_capacity(sorted.len());
    for p in sorted {
        match out.last() {
            Some(last) if last.args == p.args => {
                if last.value != p.value {
                    return Err(FitError::Conflict(p.args));
                }
            }
            _ => out.push(p),
        }
    }
    Ok(out)
}

/// Condition true on every point lexicographically `≤ last_covered` and false
/// on every point `≥ first_uncovered`:
/// `x₀ < a'₀ ∨ (x₀ = a'₀ ∧ x₁ < a'₁) ∨ …`, cut after the first coordinate
/// where the two points differ.
pub fn split_condition(last_covered: &[BigInt], first_uncovered: &[BigInt]) -> Result<Term, FitError> {
    if last_covered.len() != first_uncovered.len() {
        return Err(FitError::Arity { expected: last_covered.len(), got: first_uncovered.len() });
    }
    if last_covered >= first_uncovered {
        return Err(FitError::BadSplit);
    }
    let params = formal_params(last_covered.len());
    let var = |i: usize| Term::Var(params[i].clone(), Sort::Int);
    let first_diff = last_covered
        .iter()
        .zip(first_uncovered)
        .position(|(a, b)| a != b)
        .expect("points differ");
    let mut disjuncts = Vec::with_capacity(first_diff + 1);
    for j in 0..=first_diff {
        let mut conj: Vec<Term> = (0..j)
            .map(|k| Term::cmp(CmpOp::Eq, var(k), Term::Int(first_uncovered[k].clone())))
            .collect();
        conj.push(Term::cmp(CmpOp::Lt, var(j), Term::Int(first_uncovered[j].clone())));
        disjuncts.push(if conj.len() == 1 { conj.pop().unwrap() } else { Term::And(conj) });
    }
    Ok(if disjuncts.len() == 1 { disjuncts.pop().unwrap() } else { Term::Or(disjuncts) })
}

/// Chains segments right-nested: `ite(split₁, seg₁, ite(split₂, seg₂, …))`.
fn chain(mut segments: Vec<(Option<Term>, PwlTerm)>) -> PwlTerm {
    let (_, mut acc) = segments.pop().expect("at least one segment");
    while let Some((cond, seg)) = segments.pop() {
        acc = PwlTerm::ite(Guard::Formula(cond.expect("inner segments carry a split")), seg, acc);
    }
    acc
}

/// Greedy piecewise-linear function construction.
pub fn fit_function(arity: usize, points: &[FunctionPoint<BigInt>]) -> Result<PwlTerm, FitError> {
    let pts = normalize(arity, points)?;
    if pts.is_empty() {
        return Ok(PwlTerm::Linear(LinearForm::constant(arity, BigInt::zero())));
    }
    let mut segments = Vec::new();
    let mut start = 0;
    while start < pts.len() {
        let mut sys = EquationSystem::new(arity);
        let mut end = start;
        while end < pts.len() {
            let next = sys.push_equation(&pts[end].args, &pts[end].value).expect("arity checked");
            if !next.is_sat() {
                break;
            }
            sys = next;
            end += 1;
        }
        let (s, c) = sys.solve().expect("a single equation is always solvable");
        let cond = (end < pts.len())
            .then(|| split_condition(&pts[end - 1].args, &pts[end].args))
            .transpose()?;
        segments.push((cond, PwlTerm::Linear(LinearForm::new(s, c))));
        start = end;
    }
    Ok(chain(segments))
}

fn halfspace_leaf(s: Vec<BigInt>, c: BigInt) -> PwlTerm {
    if s.iter().all(Zero::is_zero) {
        PwlTerm::Const(!c.is_positive())
    } else {
        PwlTerm::Halfspace(Halfspace::new(s, c))
    }
}

/// Greedy predicate construction where each segment is one halfspace.
pub fn fit_predicate_greedy(arity: usize, points: &[FunctionPoint<bool>]) -> Result<PwlTerm, FitError> {
    let pts = normalize(arity, points)?;
    if pts.is_empty() {
        return Ok(PwlTerm::Const(false));
    }
    let mut segments = Vec::new();
    let mut start = 0;
    while start < pts.len() {
        let mut sys = InequalitySystem::new(arity);
        let mut end = start;
        while end < pts.len() {
            let next = sys.push_ineq(&pts[end].args, pts[end].value).expect("arity checked");
            if !next.is_sat() {
                break;
            }
            sys = next;
            end += 1;
        }
        let (s, c) = sys.solve().expect("a single point is always separable");
        let cond = (end < pts.len())
            .then(|| split_condition(&pts[end - 1].args, &pts[end].args))
            .transpose()?;
        segments.push((cond, halfspace_leaf(s, c)));
        start = end;
    }
    Ok(chain(segments))
}

/// Options for [`fit_predicate_recursive`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RecursiveFitOptions {
    /// Stop accumulating constraints at the first infeasible one instead of
    /// skipping it and continuing.
    pub stop_on_first_unsat: bool,
}

impl Default for RecursiveFitOptions {
    fn default() -> Self {
        RecursiveFitOptions { stop_on_first_unsat: true }
    }
}

/// Decision tree over halfspaces.
pub fn fit_predicate_recursive(
    arity: usize,
    points: &[FunctionPoint<bool>],
    opts: RecursiveFitOptions,
) -> Result<PwlTerm, FitError> {
    let pts = normalize(arity, points)?;
    Ok(split_recursively(arity, pts, opts))
}

fn split_recursively(arity: usize, pts: Vec<FunctionPoint<bool>>, opts: RecursiveFitOptions) -> PwlTerm {
    if pts.iter().all(|p| !p.value) {
        return PwlTerm::Const(false);
    }
    if pts.iter().all(|p| p.value) {
        return PwlTerm::Const(true);
    }
    let order = order_points(&pts).expect("both labels present");
    let mut sys = InequalitySystem::new(arity);
    for p in &order {
        let next = sys.push_ineq(&p.args, p.value).expect("arity checked");
        if next.is_sat() {
            sys = next;
        } else if opts.stop_on_first_unsat {
            break;
        }
    }
    let (s, c) = sys.solve().expect("accumulated system is satisfiable");
    let mut h = Halfspace::new(s, c);
    if !separates(&h, &pts) {
        let (pos, neg) = if order[0].value { (&order[0], &order[1]) } else { (&order[1], &order[0]) };
        let s: Vec<BigInt> = pos.args.iter().zip(&neg.args).map(|(a, b)| a - b).collect();
        let c = dot(&s, &pos.args);
        h = Halfspace::new(s, c);
    }
    let (inside, outside): (Vec<_>, Vec<_>) = pts.into_iter().partition(|p| h.contains(&p.args));
    let then = split_recursively(arity, inside, opts);
    let els = split_recursively(arity, outside, opts);
    PwlTerm::ite_halfspace(h, then, els)
}

/// Whether `h` keeps at least one positive inside and one negative outside.
fn separates(h: &Halfspace, pts: &[FunctionPoint<bool>]) -> bool {
    pts.iter().any(|p| p.value && h.contains(&p.args)) && pts.iter().any(|p| !p.value && !h.contains(&p.args))
}

/// Tolerance for treating two information gains as equal.
const GAIN_EPSILON: f64 = 1e-12;

/// Constraint order for the recursive fitter: the adjacent differently
/// labelled pair with the highest information gain, then the points to its
/// right (left to right), then the points to its left (right to left).
pub fn order_points(points: &[FunctionPoint<bool>]) -> Result<Vec<FunctionPoint<bool>>, FitError> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.args.cmp(&b.args));
    let labels: Vec<bool> = sorted.iter().map(|p| p.value).collect();
    let mut best: Option<(usize, f64)> = None;
    for i in 0..labels.len().saturating_sub(1) {
        if labels[i] == labels[i + 1] {
            continue;
        }
        let gain = information_gain(&labels[..=i], &labels[i + 1..]);
        if best.is_none_or(|(_, g)| gain > g + GAIN_EPSILON) {
            best = Some((i, gain));
        }
    }
    let (i, _) = best.ok_or(FitError::SingleLabel)?;
    let mut out = Vec::with_capacity(sorted.len());
    out.push(sorted[i].clone());
    out.extend(sorted[i + 1..].iter().cloned());
    out.extend(sorted[..i].iter().rev().cloned());
    Ok(out)
}

fn binary_entropy(labels: &[bool]) -> f64 {
    if labels.is_empty() {
        return 0.0;
    }
    let p = labels.iter().filter(|&&b| b).count() as f64 / labels.len() as f64;
    if p == 0.0 || p == 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// Entropy reduction of splitting `left ∪ right` into the two parts.
pub fn information_gain(left: &[bool], right: &[bool]) -> f64 {
    let all: Vec<bool> = left.iter().chain(right).copied().collect();
    if all.is_empty() {
        return 0.0;
    }
    let n = all.len() as f64;
    binary_entropy(&all)
        - (left.len() as f64 / n) * binary_entropy(left)
        - (right.len() as f64 / n) * binary_entropy(right)
}

/// Value-table interpretation: exact argument tests for each point, with
/// `default` everywhere else.
pub fn fit_table(arity: usize, points: &[FunctionPoint<Value>], default: &Value) -> Result<PwlTerm, FitError> {
    let pts = normalize(arity, points)?;
    let leaf = |v: &Value| match v {
        Value::Int(n) => PwlTerm::Linear(LinearForm::constant(arity, n.clone())),
        Value::Bool(b) => PwlTerm::Const(*b),
    };
    let params = formal_params(arity);
    let mut acc = leaf(default);
    for p in pts.iter().rev() {
        let mut tests: Vec<Term> = params
            .iter()
            .zip(&p.args)
            .map(|(x, a)| Term::cmp(CmpOp::Eq, Term::Var(x.clone(), Sort::Int), Term::Int(a.clone())))
            .collect();
        let cond = match tests.len() {
            0 => Term::Bool(true),
            1 => tests.pop().unwrap(),
            _ => Term::And(tests),
        };
        acc = PwlTerm::ite(Guard::Formula(cond), leaf(&p.value), acc);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }
    fn ip(args: &[i64], v: i64) -> FunctionPoint<BigInt> {
        FunctionPoint::new(bv(args), BigInt::from(v))
    }
    fn bp(args: &[i64], v: bool) -> FunctionPoint<bool> {
        FunctionPoint::new(bv(args), v)
    }
    fn x(i: usize, n: usize) -> Term {
        Term::Var(formal_params(n)[i].clone(), Sort::Int)
    }

    #[test]
    fn two_points_one_segment() {
        let t = fit_function(1, &[ip(&[0], 2), ip(&[1], 3)]).unwrap();
        assert_eq!(t, PwlTerm::Linear(LinearForm::new(bv(&[1]), BigInt::from(2))));
        assert_eq!(crate::smtlib::print_term(&t.to_term(&formal_params(1))), "(+ x 2)");
    }

    #[test]
    fn single_point_constant() {
        let t = fit_function(1, &[ip(&[5], 7)]).unwrap();
        assert_eq!(t, PwlTerm::Linear(LinearForm::new(bv(&[0]), BigInt::from(7))));
    }

    #[test]
    fn three_points_two_segments() {
        let t = fit_function(1, &[ip(&[0], 0), ip(&[1], 1), ip(&[2], 4)]).unwrap();
        let expected = PwlTerm::ite(
            Guard::Formula(Term::cmp(CmpOp::Lt, x(0, 1), Term::int(2))),
            PwlTerm::Linear(LinearForm::new(bv(&[1]), BigInt::zero())),
            PwlTerm::Linear(LinearForm::new(bv(&[0]), BigInt::from(4))),
        );
        assert_eq!(t, expected);
        for (a, v) in [(0, 0), (1, 1), (2, 4)] {
            assert_eq!(t.eval(&bv(&[a])).unwrap(), Value::Int(BigInt::from(v)));
        }
    }

    #[test]
    fn empty_and_conflicts() {
        assert_eq!(fit_function(2, &[]).unwrap(), PwlTerm::Linear(LinearForm::constant(2, BigInt::zero())));
        assert_eq!(fit_function(1, &[ip(&[1], 1), ip(&[1], 2)]), Err(FitError::Conflict(bv(&[1]))));
        assert_eq!(fit_function(1, &[ip(&[1], 1), ip(&[1], 1)]).unwrap().pieces(), 1);
        assert_eq!(fit_predicate_recursive(1, &[], Default::default()).unwrap(), PwlTerm::Const(false));
        assert_eq!(fit_function(2, &[ip(&[1], 1)]), Err(FitError::Arity { expected: 2, got: 1 }));
    }

    #[test]
    fn split_condition_examples() {
        let t = split_condition(&bv(&[1, 5]), &bv(&[2, 0])).unwrap();
        assert_eq!(t, Term::cmp(CmpOp::Lt, x(0, 2), Term::int(2)));

        let t = split_condition(&bv(&[0, 0]), &bv(&[0, 1])).unwrap();
        let expected = Term::Or(vec![
            Term::cmp(CmpOp::Lt, x(0, 2), Term::int(0)),
            Term::And(vec![
                Term::cmp(CmpOp::Eq, x(0, 2), Term::int(0)),
                Term::cmp(CmpOp::Lt, x(1, 2), Term::int(1)),
            ]),
        ]);
        assert_eq!(t, expected);

        let t = split_condition(&bv(&[3]), &bv(&[5])).unwrap();
        assert_eq!(t, Term::cmp(CmpOp::Lt, x(0, 1), Term::int(5)));

        assert_eq!(split_condition(&bv(&[1]), &bv(&[1])), Err(FitError::BadSplit));
    }

    #[test]
    fn split_condition_classifies_by_enumeration() {
        let params = formal_params(2);
        for (a, b) in [([1, 5], [2, 0]), ([0, 0], [0, 1]), ([-3, 4], [-3, 9]), ([2, 2], [3, -7])] {
            let cond = split_condition(&bv(&a), &bv(&b)).unwrap();
            for p in -10..=10 {
                for q in -10..=10 {
                    let pt = bv(&[p, q]);
                    let env: Valuation =
                        params.iter().cloned().zip(pt.iter().map(|v| Value::Int(v.clone()))).collect();
                    let holds = evaluate(&cond, &env, &NoSymbols).unwrap().as_bool().unwrap();
                    if pt <= bv(&a) {
                        assert!(holds, "{pt:?} <= {a:?}");
                    }
                    if pt >= bv(&b) {
                        assert!(!holds, "{pt:?} >= {b:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn greedy_predicate_examples() {
        let t = fit_predicate_greedy(1, &[bp(&[0], true), bp(&[4], true)]).unwrap();
        assert_eq!(t, PwlTerm::Const(true));

        let t = fit_predicate_greedy(1, &[bp(&[0], false), bp(&[1], true), bp(&[2], true)]).unwrap();
        assert_eq!(t, PwlTerm::Halfspace(Halfspace::new(bv(&[1]), BigInt::one())));
        // brute-force separator search agrees that x ≥ 1 separates
        let found = (-3i64..=3).flat_map(|s| (-3i64..=3).map(move |c| (s, c))).any(|(s, c)| {
            let h = Halfspace::new(bv(&[s]), BigInt::from(c));
            !h.contains(&bv(&[0])) && h.contains(&bv(&[1])) && h.contains(&bv(&[2]))
        });
        assert!(found);
    }

    fn equality_samples() -> Vec<FunctionPoint<bool>> {
        let mut pts = vec![];
        for p in [[0, 0], [1, 1], [-1, -1]] {
            pts.push(bp(&p, true));
        }
        for p in [[-1, 0], [0, 1], [1, 0], [1, 2]] {
            pts.push(bp(&p, false));
        }
        pts
    }

    #[test]
    fn greedy_predicate_is_exact_on_equality_samples() {
        let pts = equality_samples();
        let t = fit_predicate_greedy(2, &pts).unwrap();
        assert!(t.pieces() > 1);
        for p in &pts {
            assert_eq!(t.eval(&p.args).unwrap(), Value::Bool(p.value));
        }
    }

    #[test]
    fn recursive_learns_equality() {
        let t = fit_predicate_recursive(2, &equality_samples(), Default::default()).unwrap();
        let expected = PwlTerm::ite_halfspace(
            Halfspace::new(bv(&[1, -1]), BigInt::zero()),
            PwlTerm::ite_halfspace(
                Halfspace::new(bv(&[-1, 1]), BigInt::zero()),
                PwlTerm::Const(true),
                PwlTerm::Const(false),
            ),
            PwlTerm::Const(false),
        );
        assert_eq!(t, expected);
    }

    #[test]
    fn recursive_base_cases_and_single_split() {
        let all_neg = [bp(&[0], false), bp(&[3], false)];
        assert_eq!(fit_predicate_recursive(1, &all_neg, Default::default()).unwrap(), PwlTerm::Const(false));
        let t = fit_predicate_recursive(1, &[bp(&[0], true), bp(&[1], false)], Default::default()).unwrap();
        let PwlTerm::Ite(Guard::Halfspace(h), then, els) = &t else { panic!("{t:?}") };
        assert!(h.contains(&bv(&[0])) && !h.contains(&bv(&[1])));
        assert_eq!((then.as_ref(), els.as_ref()), (&PwlTerm::Const(true), &PwlTerm::Const(false)));
    }

    #[test]
    fn order_examples() {
        let pts = |labels: &[bool]| -> Vec<FunctionPoint<bool>> {
            labels.iter().enumerate().map(|(i, &l)| bp(&[i as i64], l)).collect()
        };
        // [F,F,T,T]: seed pair is (2,3) in 1-based indexing, gain exactly 1 bit
        let ordered = order_points(&pts(&[false, false, true, true])).unwrap();
        let xs: Vec<i64> = ordered.iter().map(|p| i64::try_from(&p.args[0]).unwrap()).collect();
        assert_eq!(xs, vec![1, 2, 3, 0]);
        assert!((information_gain(&[false, false], &[true, true]) - 1.0).abs() < 1e-12);

        let ordered = order_points(&pts(&[false, true])).unwrap();
        assert_eq!(ordered.len(), 2);
        assert!((information_gain(&[false], &[true]) - 1.0).abs() < 1e-12);

        // [F,T,F]: both pairs have the same gain; the leftmost wins
        let g1 = information_gain(&[false], &[true, false]);
        let g2 = information_gain(&[false, true], &[false]);
        let h = |p: f64| -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
        assert!((g1 - (h(1.0 / 3.0) - 2.0 / 3.0)).abs() < 1e-12);
        assert!((g1 - g2).abs() < 1e-12);
        let ordered = order_points(&pts(&[false, true, false])).unwrap();
        let xs: Vec<i64> = ordered.iter().map(|p| i64::try_from(&p.args[0]).unwrap()).collect();
        assert_eq!(xs, vec![0, 1, 2]);

        assert_eq!(order_points(&pts(&[true, true])), Err(FitError::SingleLabel));
    }

    #[test]
    fn gain_degenerate_cases() {
        assert_eq!(information_gain(&[false], &[false]), 0.0);
        assert!(information_gain(&[false, true], &[false, true]).abs() < 1e-12);
    }

    #[test]
    fn value_table_shape() {
        let t = fit_table(1, &[FunctionPoint::new(bv(&[0]), Value::Int(BigInt::one()))], &Value::Int(BigInt::zero()))
            .unwrap();
        let expected = PwlTerm::ite(
            Guard::Formula(Term::cmp(CmpOp::Eq, x(0, 1), Term::int(0))),
            PwlTerm::Linear(LinearForm::constant(1, BigInt::one())),
            PwlTerm::Linear(LinearForm::constant(1, BigInt::zero())),
        );
        assert_eq!(t, expected);
        assert_eq!(crate::smtlib::print_term(&t.to_term(&formal_params(1))), "(ite (= x 0) 1 0)");
    }
}
