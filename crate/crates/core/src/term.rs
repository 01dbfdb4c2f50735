//! Term representation shared by every other module: a sorted AST for
//! linear integer arithmetic with uninterpreted symbols and quantifiers.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::model::CandidateModel;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Int,
    Bool,
    Uninterpreted(String),
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Int => f.write_str("Int"),
            Sort::Bool => f.write_str("Bool"),
            Sort::Uninterpreted(name) => f.write_str(name),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CmpOp {
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    /// The operator of the complementary comparison over the integers.
    /// `Eq` has no single complement and is returned as `None`.
    pub fn negated(self) -> Option<CmpOp> {
        match self {
            CmpOp::Eq => None,
            CmpOp::Lt => Some(CmpOp::Ge),
            CmpOp::Le => Some(CmpOp::Gt),
            CmpOp::Gt => Some(CmpOp::Le),
            CmpOp::Ge => Some(CmpOp::Lt),
        }
    }

    pub fn holds(self, lhs: &BigInt, rhs: &BigInt) -> bool {
        match self {
            CmpOp::Eq => lhs == rhs,
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Ge => lhs >= rhs,
        }
    }
}

pub type Binder = (String, Sort);

/// Abstract syntax of terms.
///
/// `App` carries the result sort of the applied symbol so that sort
/// information survives without a symbol table. Uninterpreted constants are
/// zero-argument applications; `Var` is reserved for quantifier-bound (or
/// free, in counterexample checks) variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Int(BigInt),
    Bool(bool),
    Var(String, Sort),
    App(String, Vec<Term>, Sort),
    Add(Vec<Term>),
    Sub(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    MulConst(BigInt, Box<Term>),
    Div(Box<Term>, Box<Term>),
    Mod(Box<Term>, Box<Term>),
    Cmp(CmpOp, Box<Term>, Box<Term>),
    Not(Box<Term>),
    And(Vec<Term>),
    Or(Vec<Term>),
    Implies(Box<Term>, Box<Term>),
    Iff(Box<Term>, Box<Term>),
    Ite(Box<Term>, Box<Term>, Box<Term>),
    Forall(Vec<Binder>, Box<Term>),
    Exists(Vec<Binder>, Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Int(BigInt),
    Bool(bool),
}

impl Value {
    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Value::Int(n) => Some(n),
            Value::Bool(_) => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            Value::Int(_) => None,
        }
    }

    pub fn to_term(&self) -> Term {
        match self {
            Value::Int(n) => Term::Int(n.clone()),
            Value::Bool(b) => Term::Bool(*b),
        }
    }

    pub fn default_for(sort: &Sort) -> Value {
        match sort {
            Sort::Bool => Value::Bool(false),
            _ => Value::Int(BigInt::zero()),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

/// Assignment of values to variable names.
pub type Valuation = BTreeMap<String, Value>;

/// Source of meanings for uninterpreted symbols during evaluation.
pub trait Interpretation {
    /// Value of `symbol` applied to `args`, or `None` if the symbol (or that
    /// particular argument tuple) is not interpreted.
    fn apply(&self, symbol: &str, args: &[Value]) -> Option<Value>;
}

/// Interprets nothing; evaluation of any application fails.
pub struct NoSymbols;

impl Interpretation for NoSymbols {
    fn apply(&self, _symbol: &str, _args: &[Value]) -> Option<Value> {
        None
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("no interpretation for `{0}`")]
    Uninterpreted(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot evaluate a quantified term")]
    Quantified,
    #[error("sort mismatch while evaluating")]
    SortMismatch,
    #[error("expected a universally quantified term")]
    NotUniversal,
    #[error("missing value for binder `{0}`")]
    MissingBinder(String),
    #[error("unsupported quantifier structure")]
    NestedQuantifier,
}

impl Term {
    pub fn int(n: impl Into<BigInt>) -> Term {
        Term::Int(n.into())
    }

    pub fn int_var(name: &str) -> Term {
        Term::Var(name.to_string(), Sort::Int)
    }

    pub fn app(symbol: &str, args: Vec<Term>, sort: Sort) -> Term {
        Term::App(symbol.to_string(), args, sort)
    }

    pub fn cmp(op: CmpOp, lhs: Term, rhs: Term) -> Term {
        Term::Cmp(op, Box::new(lhs), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(t: Term) -> Term {
        Term::Not(Box::new(t))
    }

    pub fn implies(a: Term, b: Term) -> Term {
        Term::Implies(Box::new(a), Box::new(b))
    }

    pub fn ite(c: Term, t: Term, e: Term) -> Term {
        Term::Ite(Box::new(c), Box::new(t), Box::new(e))
    }

    pub fn sort(&self) -> Sort {
        match self {
            Term::Int(_)
            | Term::Add(_)
            | Term::Sub(..)
            | Term::Neg(_)
            | Term::MulConst(..)
            | Term::Div(..)
            | Term::Mod(..) => Sort::Int,
            Term::Bool(_)
            | Term::Cmp(..)
            | Term::Not(_)
            | Term::And(_)
            | Term::Or(_)
            | Term::Implies(..)
            | Term::Iff(..)
            | Term::Forall(..)
            | Term::Exists(..) => Sort::Bool,
            Term::Var(_, s) | Term::App(_, _, s) => s.clone(),
            Term::Ite(_, t, _) => t.sort(),
        }
    }

    /// Immediate subterms, in order.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Int(_) | Term::Bool(_) | Term::Var(..) => vec![],
            Term::App(_, args, _) | Term::Add(args) | Term::And(args) | Term::Or(args) => {
                args.iter().collect()
            }
            Term::Neg(a) | Term::MulConst(_, a) | Term::Not(a) => vec![a],
            Term::Forall(_, b) | Term::Exists(_, b) => vec![b],
            Term::Sub(a, b)
            | Term::Div(a, b)
            | Term::Mod(a, b)
            | Term::Cmp(_, a, b)
            | Term::Implies(a, b)
            | Term::Iff(a, b) => vec![a, b],
            Term::Ite(c, t, e) => vec![c, t, e],
        }
    }

    /// Rebuilds this node with its children mapped through `f`.
    pub fn map_children(&self, mut f: impl FnMut(&Term) -> Term) -> Term {
        let b = |t: &Term, f: &mut dyn FnMut(&Term) -> Term| Box::new(f(t));
        match self {
            Term::Int(_) | Term::Bool(_) | Term::Var(..) => self.clone(),
            Term::App(s, args, sort) => Term::App(s.clone(), args.iter().map(f).collect(), sort.clone()),
            Term::Add(args) => Term::Add(args.iter().map(f).collect()),
            Term::And(args) => Term::And(args.iter().map(f).collect()),
            Term::Or(args) => Term::Or(args.iter().map(f).collect()),
            Term::Neg(a) => Term::Neg(b(a, &mut f)),
            Term::MulConst(k, a) => Term::MulConst(k.clone(), b(a, &mut f)),
            Term::Not(a) => Term::Not(b(a, &mut f)),
            Term::Sub(x, y) => Term::Sub(b(x, &mut f), b(y, &mut f)),
            Term::Div(x, y) => Term::Div(b(x, &mut f), b(y, &mut f)),
            Term::Mod(x, y) => Term::Mod(b(x, &mut f), b(y, &mut f)),
            Term::Cmp(op, x, y) => Term::Cmp(*op, b(x, &mut f), b(y, &mut f)),
            Term::Implies(x, y) => Term::Implies(b(x, &mut f), b(y, &mut f)),
            Term::Iff(x, y) => Term::Iff(b(x, &mut f), b(y, &mut f)),
            Term::Ite(c, t, e) => Term::Ite(b(c, &mut f), b(t, &mut f), b(e, &mut f)),
            Term::Forall(bs, body) => Term::Forall(bs.clone(), b(body, &mut f)),
            Term::Exists(bs, body) => Term::Exists(bs.clone(), b(body, &mut f)),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Term::Forall(..) | Term::Exists(..) => false,
            _ => self.children().into_iter().all(Term::is_quantifier_free),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_free_vars(self, &mut Vec::new(), &mut out);
        out
    }

    /// Names of uninterpreted symbols applied anywhere in the term, including
    /// zero-argument constants, with their arity.
    pub fn symbols(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        self.visit(&mut |t| {
            if let Term::App(s, args, _) = t {
                out.insert(s.clone(), args.len());
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }
}

fn collect_free_vars(t: &Term, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(name, _) => {
            if !bound.contains(name) {
                out.insert(name.clone());
            }
        }
        Term::Forall(bs, body) | Term::Exists(bs, body) => {
            let depth = bound.len();
            bound.extend(bs.iter().map(|(n, _)| n.clone()));
            collect_free_vars(body, bound, out);
            bound.truncate(depth);
        }
        _ => {
            for c in t.children() {
                collect_free_vars(c, bound, out);
            }
        }
    }
}

/// Euclidean division as in SMT-LIB: the remainder is always non-negative.
pub fn euclid_div_mod(a: &BigInt, b: &BigInt) -> Option<(BigInt, BigInt)> {
    if b.is_zero() {
        return None;
    }
    let r = a.mod_floor(&b.abs());
    let q = (a - &r) / b;
    Some((q, r))
}

/// Evaluates a quantifier-free term.
pub fn evaluate(t: &Term, env: &Valuation, interp: &dyn Interpretation) -> Result<Value, TermError> {
    let int = |t: &Term| -> Result<BigInt, TermError> {
        match evaluate(t, env, interp)? {
            Value::Int(n) => Ok(n),
            Value::Bool(_) => Err(TermError::SortMismatch),
        }
    };
    let boolean = |t: &Term| -> Result<bool, TermError> {
        match evaluate(t, env, interp)? {
            Value::Bool(b) => Ok(b),
            Value::Int(_) => Err(TermError::SortMismatch),
        }
    };
    Ok(match t {
        Term::Int(n) => Value::Int(n.clone()),
        Term::Bool(b) => Value::Bool(*b),
        Term::Var(name, _) => env
            .get(name)
            .cloned()
            .ok_or_else(|| TermError::UnboundVariable(name.clone()))?,
        Term::App(sym, args, _) => {
            let vals = args
                .iter()
                .map(|a| evaluate(a, env, interp))
                .collect::<Result<Vec<_>, _>>()?;
            interp
                .apply(sym, &vals)
                .ok_or_else(|| TermError::Uninterpreted(sym.clone()))?
        }
        Term::Add(args) => {
            let mut sum = BigInt::zero();
            for a in args {
                sum += int(a)?;
            }
            Value::Int(sum)
        }
        Term::Sub(a, b) => Value::Int(int(a)? - int(b)?),
        Term::Neg(a) => Value::Int(-int(a)?),
        Term::MulConst(k, a) => Value::Int(k * int(a)?),
        Term::Div(a, b) => {
            let (q, _) = euclid_div_mod(&int(a)?, &int(b)?).ok_or(TermError::DivisionByZero)?;
            Value::Int(q)
        }
        Term::Mod(a, b) => {
            let (_, r) = euclid_div_mod(&int(a)?, &int(b)?).ok_or(TermError::DivisionByZero)?;
            Value::Int(r)
        }
        Term::Cmp(op, a, b) => {
            let (x, y) = (evaluate(a, env, interp)?, evaluate(b, env, interp)?);
            match (x, y) {
                (Value::Int(x), Value::Int(y)) => Value::Bool(op.holds(&x, &y)),
                (Value::Bool(x), Value::Bool(y)) if *op == CmpOp::Eq => Value::Bool(x == y),
                _ => return Err(TermError::SortMismatch),
            }
        }
        Term::Not(a) => Value::Bool(!boolean(a)?),
        Term::And(args) => {
            for a in args {
                if !boolean(a)? {
                    return Ok(Value::Bool(false));
                }
            }
            Value::Bool(true)
        }
        Term::Or(args) => {
            for a in args {
                if boolean(a)? {
                    return Ok(Value::Bool(true));
                }
            }
            Value::Bool(false)
        }
        Term::Implies(a, b) => Value::Bool(!boolean(a)? || boolean(b)?),
        Term::Iff(a, b) => Value::Bool(boolean(a)? == boolean(b)?),
        Term::Ite(c, a, b) => {
            if boolean(c)? {
                evaluate(a, env, interp)?
            } else {
                evaluate(b, env, interp)?
            }
        }
        Term::Forall(..) | Term::Exists(..) => return Err(TermError::Quantified),
    })
}

/// Capture-avoiding simultaneous substitution of variables by terms.
pub fn substitute(t: &Term, map: &HashMap<String, Term>) -> Term {
    if map.is_empty() {
        return t.clone();
    }
    match t {
        Term::Var(name, _) => map.get(name).cloned().unwrap_or_else(|| t.clone()),
        Term::Forall(bs, body) | Term::Exists(bs, body) => {
            let mut inner: HashMap<String, Term> = map
                .iter()
                .filter(|(k, _)| !bs.iter().any(|(b, _)| b == *k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            let incoming: BTreeSet<String> = inner.values().flat_map(|v| v.free_vars()).collect();
            let mut new_bs = Vec::with_capacity(bs.len());
            for (name, sort) in bs {
                if incoming.contains(name) {
                    let fresh = fresh_name(name, |c| incoming.contains(c) || body.free_vars().contains(c));
                    inner.insert(name.clone(), Term::Var(fresh.clone(), sort.clone()));
                    new_bs.push((fresh, sort.clone()));
                } else {
                    new_bs.push((name.clone(), sort.clone()));
                }
            }
            let body = Box::new(substitute(body, &inner));
            match t {
                Term::Forall(..) => Term::Forall(new_bs, body),
                _ => Term::Exists(new_bs, body),
            }
        }
        _ => t.map_children(|c| substitute(c, map)),
    }
}

pub(crate) fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    (1..)
        .map(|i| format!("{base}!{i}"))
        .find(|c| !taken(c))
        .expect("unbounded search")
}

/// Instantiates a prenex universal with concrete binder values.
pub fn instantiate(q: &Term, c: &Valuation) -> Result<Term, TermError> {
    let Term::Forall(binders, body) = q else {
        return Err(TermError::NotUniversal);
    };
    let mut map = HashMap::new();
    for (name, _) in binders {
        let v = c.get(name).ok_or_else(|| TermError::MissingBinder(name.clone()))?;
        map.insert(name.clone(), v.to_term());
    }
    Ok(substitute(body, &map))
}

/// Splits `∀x. φ` into the binders and `¬φ`, with the negation pushed through
/// the top connective.
pub fn negate_for_check(q: &Term) -> Result<(Vec<Binder>, Term), TermError> {
    let Term::Forall(binders, body) = q else {
        return Err(TermError::NotUniversal);
    };
    if !body.is_quantifier_free() {
        return Err(TermError::NestedQuantifier);
    }
    Ok((binders.clone(), push_not(body)))
}

/// Negation pushed over the outermost connective only.
pub fn push_not(t: &Term) -> Term {
    match t {
        Term::Bool(b) => Term::Bool(!b),
        Term::Not(a) => (**a).clone(),
        Term::And(args) => Term::Or(args.iter().map(|a| Term::not(a.clone())).collect()),
        Term::Or(args) => Term::And(args.iter().map(|a| Term::not(a.clone())).collect()),
        Term::Implies(a, b) => Term::And(vec![(**a).clone(), Term::not((**b).clone())]),
        Term::Cmp(op, a, b) if a.sort() == Sort::Int => match op.negated() {
            Some(neg) => Term::Cmp(neg, a.clone(), b.clone()),
            None => Term::not(t.clone()),
        },
        _ => Term::not(t.clone()),
    }
}

/// Replaces every application of a modelled symbol by the model's
/// piecewise-linear body, leaving no uninterpreted symbols behind.
pub fn substitute_model(t: &Term, m: &CandidateModel) -> Term {
    match t {
        Term::App(sym, args, _) => {
            let args: Vec<Term> = args.iter().map(|a| substitute_model(a, m)).collect();
            match m.definition(sym) {
                Some((params, body)) => {
                    let map = params.iter().cloned().zip(args).collect();
                    substitute(body, &map)
                }
                None => Term::App(sym.clone(), args, t.sort()),
            }
        }
        _ => t.map_children(|c| substitute_model(c, m)),
    }
}

/// Integer linear combination of atomic terms plus a constant.
///
/// Atoms are any integer terms that are not themselves arithmetic
/// combinations: variables, applications, `div`/`mod`, and integer `ite`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinExpr {
    pub coeffs: BTreeMap<Term, BigInt>,
    pub constant: BigInt,
}

impl LinExpr {
    pub fn constant(c: BigInt) -> Self {
        LinExpr { coeffs: BTreeMap::new(), constant: c }
    }

    pub fn atom(t: Term) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(t, BigInt::one());
        LinExpr { coeffs, constant: BigInt::zero() }
    }

    pub fn add_scaled(&mut self, other: &LinExpr, k: &BigInt) {
        for (t, c) in &other.coeffs {
            let e = self.coeffs.entry(t.clone()).or_insert_with(BigInt::zero);
            *e += c * k;
            if e.is_zero() {
                self.coeffs.remove(t);
            }
        }
        self.constant += &other.constant * k;
    }

    pub fn scale(&mut self, k: &BigInt) {
        if k.is_zero() {
            self.coeffs.clear();
            self.constant = BigInt::zero();
            return;
        }
        for c in self.coeffs.values_mut() {
            *c *= k;
        }
        self.constant *= k;
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn to_term(&self) -> Term {
        let mut parts: Vec<Term> = self
            .coeffs
            .iter()
            .map(|(t, k)| if k.is_one() { t.clone() } else { Term::MulConst(k.clone(), Box::new(t.clone())) })
            .collect();
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push(Term::Int(self.constant.clone()));
        }
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Term::Add(parts)
        }
    }
}

/// Linear view of an integer term.
pub fn linearize(t: &Term) -> LinExpr {
    match t {
        Term::Int(n) => LinExpr::constant(n.clone()),
        Term::Add(args) => {
            let mut acc = LinExpr::default();
            for a in args {
                acc.add_scaled(&linearize(a), &BigInt::one());
            }
            acc
        }
        Term::Sub(a, b) => {
            let mut acc = linearize(a);
            acc.add_scaled(&linearize(b), &-BigInt::one());
            acc
        }
        Term::Neg(a) => {
            let mut acc = linearize(a);
            acc.scale(&-BigInt::one());
            acc
        }
        Term::MulConst(k, a) => {
            let mut acc = linearize(a);
            acc.scale(k);
            acc
        }
        _ => LinExpr::atom(t.clone()),
    }
}

/// Canonical comparison `Σ kᵢ·xᵢ ⋈ c` with `⋈ ∈ {≤, =}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonicalAtom {
    Const(bool),
    Le(LinExpr),
    Eq(LinExpr),
}

/// Brings `lhs ⋈ rhs` (integer sides) into canonical form. The constant of
/// the returned `LinExpr` is the right-hand side bound.
pub fn canonical_atom(op: CmpOp, lhs: &Term, rhs: &Term) -> CanonicalAtom {
    let mut e = linearize(lhs);
    e.add_scaled(&linearize(rhs), &-BigInt::one());
    canonicalize_comparison(op, e)
}

/// `e ⋈ 0` in canonical form.
pub fn canonicalize_comparison(op: CmpOp, mut e: LinExpr) -> CanonicalAtom {
    let one = BigInt::one();
    // Move the constant to the right: Σ ⋈ -const.
    let mut rhs = -std::mem::take(&mut e.constant);
    let is_eq = match op {
        CmpOp::Eq => true,
        CmpOp::Le => false,
        CmpOp::Lt => {
            rhs -= &one;
            false
        }
        CmpOp::Ge | CmpOp::Gt => {
            e.scale(&-one.clone());
            rhs = -rhs;
            if op == CmpOp::Gt {
                rhs -= &one;
            }
            false
        }
    };
    if e.coeffs.is_empty() {
        let zero = BigInt::zero();
        return CanonicalAtom::Const(if is_eq { zero == rhs } else { zero <= rhs });
    }
    let g = e.coeffs.values().fold(BigInt::zero(), |g, k| g.gcd(k));
    if is_eq {
        if !rhs.is_multiple_of(&g) {
            return CanonicalAtom::Const(false);
        }
        let mut g = g;
        if e.coeffs.values().next().is_some_and(|k| k.is_negative()) {
            g = -g;
        }
        for k in e.coeffs.values_mut() {
            *k = &*k / &g;
        }
        e.constant = rhs / &g;
        CanonicalAtom::Eq(e)
    } else {
        for k in e.coeffs.values_mut() {
            *k = &*k / &g;
        }
        e.constant = rhs.div_floor(&g);
        CanonicalAtom::Le(e)
    }
}

impl CanonicalAtom {
    pub fn to_term(&self) -> Term {
        match self {
            CanonicalAtom::Const(b) => Term::Bool(*b),
            CanonicalAtom::Le(e) | CanonicalAtom::Eq(e) => {
                let op = if matches!(self, CanonicalAtom::Le(_)) { CmpOp::Le } else { CmpOp::Eq };
                let mut lhs = e.clone();
                let rhs = std::mem::take(&mut lhs.constant);
                Term::cmp(op, lhs.to_term(), Term::Int(rhs))
            }
        }
    }
}

/// Semantics-preserving cleanup: constant folding, flattening of `and`/`or`,
/// trivial `ite` elimination and canonical linear atoms.
pub fn simplify(t: &Term) -> Term {
    match t {
        Term::Int(_) | Term::Bool(_) | Term::Var(..) => t.clone(),
        Term::App(..) => t.map_children(simplify),
        Term::Add(_) | Term::Sub(..) | Term::Neg(_) | Term::MulConst(..) => {
            linearize(&t.map_children(simplify)).to_term()
        }
        Term::Div(a, b) | Term::Mod(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            let is_div = matches!(t, Term::Div(..));
            if let (Term::Int(x), Term::Int(y)) = (&a, &b) {
                if let Some((q, r)) = euclid_div_mod(x, y) {
                    return Term::Int(if is_div { q } else { r });
                }
            }
            if let Term::Int(y) = &b {
                if y.is_one() {
                    return if is_div { a } else { Term::int(0) };
                }
            }
            if is_div {
                Term::Div(Box::new(a), Box::new(b))
            } else {
                Term::Mod(Box::new(a), Box::new(b))
            }
        }
        Term::Cmp(op, a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            if a.sort() == Sort::Bool {
                return simplify_iff(a, b);
            }
            canonical_atom(*op, &a, &b).to_term()
        }
        Term::Not(a) => negate_simplified(simplify(a)),
        Term::And(args) | Term::Or(args) => {
            let is_and = matches!(t, Term::And(_));
            let mut out: Vec<Term> = Vec::new();
            let mut stack: Vec<Term> = args.iter().rev().map(simplify).collect();
            while let Some(a) = stack.pop() {
                match a {
                    Term::Bool(b) if b == is_and => {}
                    Term::Bool(_) => return Term::Bool(!is_and),
                    Term::And(inner) if is_and => stack.extend(inner.into_iter().rev()),
                    Term::Or(inner) if !is_and => stack.extend(inner.into_iter().rev()),
                    a => {
                        if !out.contains(&a) {
                            out.push(a);
                        }
                    }
                }
            }
            match out.len() {
                0 => Term::Bool(is_and),
                1 => out.pop().unwrap(),
                _ if is_and => Term::And(out),
                _ => Term::Or(out),
            }
        }
        Term::Implies(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            match (&a, &b) {
                (Term::Bool(false), _) | (_, Term::Bool(true)) => Term::Bool(true),
                (Term::Bool(true), _) => b,
                (_, Term::Bool(false)) => negate_simplified(a),
                _ if a == b => Term::Bool(true),
                _ => Term::Implies(Box::new(a), Box::new(b)),
            }
        }
        Term::Iff(a, b) => simplify_iff(simplify(a), simplify(b)),
        Term::Ite(c, a, b) => {
            let c = simplify(c);
            match c {
                Term::Bool(true) => return simplify(a),
                Term::Bool(false) => return simplify(b),
                _ => {}
            }
            let (a, b) = (simplify(a), simplify(b));
            if a == b {
                return a;
            }
            match (&a, &b) {
                (Term::Bool(true), Term::Bool(false)) => c,
                (Term::Bool(false), Term::Bool(true)) => negate_simplified(c),
                _ => Term::ite(c, a, b),
            }
        }
        Term::Forall(bs, body) | Term::Exists(bs, body) => {
            let body = simplify(body);
            if let Term::Bool(_) = body {
                return body;
            }
            match t {
                Term::Forall(..) => Term::Forall(bs.clone(), Box::new(body)),
                _ => Term::Exists(bs.clone(), Box::new(body)),
            }
        }
    }
}

fn simplify_iff(a: Term, b: Term) -> Term {
    match (&a, &b) {
        (Term::Bool(x), Term::Bool(y)) => Term::Bool(x == y),
        (Term::Bool(true), _) => b,
        (_, Term::Bool(true)) => a,
        (Term::Bool(false), _) => negate_simplified(b),
        (_, Term::Bool(false)) => negate_simplified(a),
        _ if a == b => Term::Bool(true),
        _ => Term::Iff(Box::new(a), Box::new(b)),
    }
}

/// Negation of an already simplified term, kept in simplified form.
fn negate_simplified(a: Term) -> Term {
    match a {
        Term::Bool(b) => Term::Bool(!b),
        Term::Not(inner) => *inner,
        Term::Cmp(CmpOp::Le, lhs, rhs) if lhs.sort() == Sort::Int => {
            // ¬(e ≤ c)  ⇔  e ≥ c + 1
            canonical_atom(CmpOp::Gt, &lhs, &rhs).to_term()
        }
        a => Term::not(a),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::smtlib::print_term(self))
    }
}
