//! Flattening of ground terms into clauses over boolean variables, some of
//! which stand for canonical linear atoms over integer unknowns.
//!
//! Integer unknowns are free variables, applications of uninterpreted
//! symbols (one per distinct symbol and argument vector) and fresh variables
//! introduced for `ite`, `div` and `mod`.

use std::collections::{BTreeMap, HashMap};
use std::ops::Not;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::term::{CmpOp, Sort, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Lit(u32);

impl Lit {
    pub fn new(var: usize, positive: bool) -> Lit {
        Lit(((var as u32) << 1) | u32::from(!positive))
    }

    pub fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn code(self) -> usize {
        self.0 as usize
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

/// Linear combination of integer unknowns plus a constant.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Lin {
    pub coeffs: BTreeMap<usize, BigInt>,
    pub constant: BigInt,
}

impl Lin {
    pub fn constant(c: BigInt) -> Lin {
        Lin { coeffs: BTreeMap::new(), constant: c }
    }

    pub fn var(v: usize) -> Lin {
        Lin { coeffs: BTreeMap::from([(v, BigInt::one())]), constant: BigInt::zero() }
    }

    pub fn add_scaled(&mut self, other: &Lin, k: &BigInt) {
        for (v, c) in &other.coeffs {
            let e = self.coeffs.entry(*v).or_insert_with(BigInt::zero);
            *e += c * k;
            if e.is_zero() {
                self.coeffs.remove(v);
            }
        }
        self.constant += &other.constant * k;
    }

    pub fn minus(&self, other: &Lin) -> Lin {
        let mut out = self.clone();
        out.add_scaled(other, &-BigInt::one());
        out
    }

    pub fn eval(&self, values: &[BigInt]) -> BigInt {
        self.coeffs.iter().map(|(v, k)| k * &values[*v]).sum::<BigInt>() + &self.constant
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum AtomKind {
    Le,
    Eq,
}

/// `Σ coeffs ≤ bound` or `Σ coeffs = bound`.
#[derive(Clone, Debug)]
pub(crate) struct ArithAtom {
    pub kind: AtomKind,
    pub coeffs: Vec<(usize, BigInt)>,
    pub bound: BigInt,
    pub var: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum AppValue {
    Int(usize),
    Bool(usize),
}

#[derive(Clone, Debug)]
pub(crate) struct AppInstance {
    pub symbol: String,
    pub args: Vec<Lin>,
    pub value: AppValue,
}

/// What a free variable of the input was mapped to.
#[derive(Clone, Copy, Debug)]
pub(crate) enum FreeVar {
    Int(usize),
    Bool(usize),
}

#[derive(Debug)]
pub(crate) struct Unsupported(pub String);

/// Kind, coefficients and bound of a canonical atom.
type AtomKey = (AtomKind, Vec<(usize, BigInt)>, BigInt);

#[derive(Default)]
pub(crate) struct Encoder {
    pub num_bool: usize,
    pub num_int: usize,
    pub clauses: Vec<Vec<Lit>>,
    pub atoms: Vec<ArithAtom>,
    /// Boolean variable → index into `atoms`.
    pub atom_of: HashMap<usize, usize>,
    pub apps: Vec<AppInstance>,
    pub free: BTreeMap<String, FreeVar>,
    atom_memo: HashMap<AtomKey, usize>,
    app_memo: HashMap<(String, Vec<Lin>), usize>,
    lit_memo: HashMap<Term, Lit>,
    int_memo: HashMap<Term, usize>,
    divmod_memo: HashMap<(Lin, BigInt), (usize, usize)>,
}

fn is_int_like(s: &Sort) -> bool {
    !matches!(s, Sort::Bool)
}

impl Encoder {
    pub fn new() -> Self {
        let mut e = Encoder::default();
        let t = e.fresh_bool();
        e.clauses.push(vec![Lit::new(t, true)]);
        e
    }

    pub fn true_lit(&self) -> Lit {
        Lit::new(0, true)
    }

    fn const_lit(&self, b: bool) -> Lit {
        if b {
            self.true_lit()
        } else {
            !self.true_lit()
        }
    }

    fn fresh_bool(&mut self) -> usize {
        self.num_bool += 1;
        self.num_bool - 1
    }

    fn fresh_int(&mut self) -> usize {
        self.num_int += 1;
        self.num_int - 1
    }

    fn clause(&mut self, lits: Vec<Lit>) {
        let t = self.true_lit();
        if lits.contains(&t) {
            return;
        }
        let mut out: Vec<Lit> = Vec::with_capacity(lits.len());
        for l in lits {
            if out.contains(&!l) {
                return;
            }
            if l != !t && !out.contains(&l) {
                out.push(l);
            }
        }
        self.clauses.push(out);
    }

    /// Adds a top-level assertion.
    pub fn assert(&mut self, t: &Term) -> Result<(), Unsupported> {
        match t {
            Term::And(args) => args.iter().try_for_each(|a| self.assert(a)),
            Term::Or(args) => {
                let lits = args.iter().map(|a| self.lit(a)).collect::<Result<Vec<_>, _>>()?;
                self.clause(lits);
                Ok(())
            }
            _ => {
                let l = self.lit(t)?;
                self.clause(vec![l]);
                Ok(())
            }
        }
    }

    /// Literal for `e ⋈ 0`.
    pub fn cmp_lit(&mut self, op: CmpOp, e: &Lin) -> Lit {
        let mut rhs = -&e.constant;
        let mut coeffs: Vec<(usize, BigInt)> = e.coeffs.iter().map(|(v, k)| (*v, k.clone())).collect();
        let one = BigInt::one();
        match op {
            CmpOp::Eq => return self.eq_atom(coeffs, rhs),
            CmpOp::Le => {}
            CmpOp::Lt => rhs -= &one,
            CmpOp::Ge | CmpOp::Gt => {
                for (_, k) in &mut coeffs {
                    *k = -&*k;
                }
                rhs = -rhs;
                if op == CmpOp::Gt {
                    rhs -= &one;
                }
            }
        }
        self.le_atom(coeffs, rhs)
    }

    fn le_atom(&mut self, mut coeffs: Vec<(usize, BigInt)>, rhs: BigInt) -> Lit {
        if coeffs.is_empty() {
            return self.const_lit(!rhs.is_negative());
        }
        let g = coeffs.iter().fold(BigInt::zero(), |g, (_, k)| g.gcd(k));
        for (_, k) in &mut coeffs {
            *k = &*k / &g;
        }
        let rhs = rhs.div_floor(&g);
        if coeffs[0].1.is_negative() {
            // Σ ≤ c  ⇔  ¬(−Σ ≤ −c − 1)
            for (_, k) in &mut coeffs {
                *k = -&*k;
            }
            return !self.atom(AtomKind::Le, coeffs, -rhs - 1);
        }
        self.atom(AtomKind::Le, coeffs, rhs)
    }

    fn eq_atom(&mut self, mut coeffs: Vec<(usize, BigInt)>, mut rhs: BigInt) -> Lit {
        if coeffs.is_empty() {
            return self.const_lit(rhs.is_zero());
        }
        let mut g = coeffs.iter().fold(BigInt::zero(), |g, (_, k)| g.gcd(k));
        if !rhs.is_multiple_of(&g) {
            return self.const_lit(false);
        }
        if coeffs[0].1.is_negative() {
            g = -g;
        }
        for (_, k) in &mut coeffs {
            *k = &*k / &g;
        }
        rhs /= &g;
        self.atom(AtomKind::Eq, coeffs, rhs)
    }

    fn atom(&mut self, kind: AtomKind, coeffs: Vec<(usize, BigInt)>, bound: BigInt) -> Lit {
        let key = (kind, coeffs, bound);
        if let Some(&v) = self.atom_memo.get(&key) {
            return Lit::new(v, true);
        }
        let var = self.fresh_bool();
        let (kind, coeffs, bound) = key.clone();
        self.atom_memo.insert(key, var);
        self.atom_of.insert(var, self.atoms.len());
        self.atoms.push(ArithAtom { kind, coeffs: coeffs.clone(), bound: bound.clone(), var });
        if kind == AtomKind::Eq {
            // Σ = c  ∨  Σ ≤ c − 1  ∨  ¬(Σ ≤ c)
            let below = self.atom(AtomKind::Le, coeffs.clone(), &bound - 1);
            let at_most = self.atom(AtomKind::Le, coeffs, bound);
            self.clause(vec![Lit::new(var, true), below, !at_most]);
        }
        Lit::new(var, true)
    }

    /// Literal equivalent to the boolean term `t`.
    pub fn lit(&mut self, t: &Term) -> Result<Lit, Unsupported> {
        if let Some(&l) = self.lit_memo.get(t) {
            return Ok(l);
        }
        let l = match t {
            Term::Bool(b) => self.const_lit(*b),
            Term::Var(name, Sort::Bool) => match self.free.get(name) {
                Some(FreeVar::Bool(v)) => Lit::new(*v, true),
                _ => {
                    let v = self.fresh_bool();
                    self.free.insert(name.clone(), FreeVar::Bool(v));
                    Lit::new(v, true)
                }
            },
            Term::App(sym, args, Sort::Bool) => match self.app(sym, args, &Sort::Bool)? {
                AppValue::Bool(v) => Lit::new(v, true),
                AppValue::Int(_) => unreachable!("boolean application"),
            },
            Term::Cmp(op, a, b) if a.sort() == Sort::Bool => {
                if *op != CmpOp::Eq {
                    return Err(Unsupported(format!("ordering on booleans: {t}")));
                }
                let (a, b) = (self.lit(a)?, self.lit(b)?);
                self.iff(a, b)
            }
            Term::Cmp(op, a, b) => {
                let e = self.lin(a)?.minus(&self.lin(b)?);
                self.cmp_lit(*op, &e)
            }
            Term::Not(a) => !self.lit(a)?,
            Term::And(args) => {
                let lits = args.iter().map(|a| self.lit(a)).collect::<Result<Vec<_>, _>>()?;
                self.and(lits)
            }
            Term::Or(args) => {
                let lits = args.iter().map(|a| self.lit(a).map(|l| !l)).collect::<Result<Vec<_>, _>>()?;
                !self.and(lits)
            }
            Term::Implies(a, b) => {
                let (a, b) = (self.lit(a)?, self.lit(b)?);
                !self.and(vec![a, !b])
            }
            Term::Iff(a, b) => {
                let (a, b) = (self.lit(a)?, self.lit(b)?);
                self.iff(a, b)
            }
            Term::Ite(c, a, b) => {
                let (c, a, b) = (self.lit(c)?, self.lit(a)?, self.lit(b)?);
                let v = Lit::new(self.fresh_bool(), true);
                self.clause(vec![!v, !c, a]);
                self.clause(vec![!v, c, b]);
                self.clause(vec![v, !c, !a]);
                self.clause(vec![v, c, !b]);
                v
            }
            Term::Forall(..) | Term::Exists(..) => return Err(Unsupported("quantified subterm".into())),
            _ => return Err(Unsupported(format!("not a boolean term: {t}"))),
        };
        self.lit_memo.insert(t.clone(), l);
        Ok(l)
    }

    fn and(&mut self, lits: Vec<Lit>) -> Lit {
        let t = self.true_lit();
        let lits: Vec<Lit> = lits.into_iter().filter(|&l| l != t).collect();
        if lits.contains(&!t) {
            return !t;
        }
        match lits.as_slice() {
            [] => return t,
            [l] => return *l,
            _ => {}
        }
        let v = Lit::new(self.fresh_bool(), true);
        for &l in &lits {
            self.clause(vec![!v, l]);
        }
        let mut long: Vec<Lit> = lits.iter().map(|&l| !l).collect();
        long.push(v);
        self.clause(long);
        v
    }

    fn iff(&mut self, a: Lit, b: Lit) -> Lit {
        let t = self.true_lit();
        if a == t {
            return b;
        }
        if b == t {
            return a;
        }
        if a == !t {
            return !b;
        }
        if b == !t {
            return !a;
        }
        if a == b {
            return t;
        }
        let v = Lit::new(self.fresh_bool(), true);
        self.clause(vec![!v, !a, b]);
        self.clause(vec![!v, a, !b]);
        self.clause(vec![v, a, b]);
        self.clause(vec![v, !a, !b]);
        v
    }

    /// Linear form of an integer term.
    pub fn lin(&mut self, t: &Term) -> Result<Lin, Unsupported> {
        Ok(match t {
            Term::Int(n) => Lin::constant(n.clone()),
            Term::Var(name, sort) if is_int_like(sort) => match self.free.get(name) {
                Some(FreeVar::Int(v)) => Lin::var(*v),
                _ => {
                    let v = self.fresh_int();
                    self.free.insert(name.clone(), FreeVar::Int(v));
                    Lin::var(v)
                }
            },
            Term::App(sym, args, sort) if is_int_like(sort) => match self.app(sym, args, sort)? {
                AppValue::Int(v) => Lin::var(v),
                AppValue::Bool(_) => unreachable!("integer application"),
            },
            Term::Add(args) => {
                let mut acc = Lin::default();
                for a in args {
                    acc.add_scaled(&self.lin(a)?, &BigInt::one());
                }
                acc
            }
            Term::Sub(a, b) => self.lin(a)?.minus(&self.lin(b)?),
            Term::Neg(a) => Lin::default().minus(&self.lin(a)?),
            Term::MulConst(k, a) => {
                let mut acc = Lin::default();
                acc.add_scaled(&self.lin(a)?, k);
                acc
            }
            Term::Div(a, b) | Term::Mod(a, b) => {
                let Term::Int(k) = &**b else {
                    return Err(Unsupported(format!("non-constant divisor in {t}")));
                };
                if k.is_zero() {
                    return Err(Unsupported("division by zero".into()));
                }
                let a = self.lin(a)?;
                let (q, r) = self.divmod(a, k);
                Lin::var(if matches!(t, Term::Div(..)) { q } else { r })
            }
            Term::Ite(c, a, b) => {
                if let Some(&v) = self.int_memo.get(t) {
                    return Ok(Lin::var(v));
                }
                let c = self.lit(c)?;
                let (a, b) = (self.lin(a)?, self.lin(b)?);
                let v = self.fresh_int();
                let then_eq = self.cmp_lit(CmpOp::Eq, &Lin::var(v).minus(&a));
                let else_eq = self.cmp_lit(CmpOp::Eq, &Lin::var(v).minus(&b));
                self.clause(vec![!c, then_eq]);
                self.clause(vec![c, else_eq]);
                self.int_memo.insert(t.clone(), v);
                Lin::var(v)
            }
            _ => return Err(Unsupported(format!("not an integer term: {t}"))),
        })
    }

    /// Fresh `q`, `r` with `a = k·q + r` and `0 ≤ r < |k|`.
    fn divmod(&mut self, a: Lin, k: &BigInt) -> (usize, usize) {
        let key = (a, k.clone());
        if let Some(&qr) = self.divmod_memo.get(&key) {
            return qr;
        }
        let (q, r) = (self.fresh_int(), self.fresh_int());
        let mut def = Lin::default();
        def.add_scaled(&Lin::var(q), k);
        def.add_scaled(&Lin::var(r), &BigInt::one());
        let def = def.minus(&key.0);
        let eq = self.cmp_lit(CmpOp::Eq, &def);
        let lo = self.cmp_lit(CmpOp::Ge, &Lin::var(r));
        let mut hi = Lin::var(r);
        hi.constant = -k.abs();
        let hi = self.cmp_lit(CmpOp::Lt, &hi);
        for l in [eq, lo, hi] {
            self.clause(vec![l]);
        }
        self.divmod_memo.insert(key, (q, r));
        (q, r)
    }

    fn app(&mut self, sym: &str, args: &[Term], sort: &Sort) -> Result<AppValue, Unsupported> {
        let mut lins = Vec::with_capacity(args.len());
        for a in args {
            if a.sort() == Sort::Bool {
                return Err(Unsupported(format!("boolean argument to `{sym}`")));
            }
            lins.push(self.lin(a)?);
        }
        let key = (sym.to_string(), lins);
        if let Some(&i) = self.app_memo.get(&key) {
            return Ok(self.apps[i].value);
        }
        let value = if *sort == Sort::Bool { AppValue::Bool(self.fresh_bool()) } else { AppValue::Int(self.fresh_int()) };
        let (symbol, args) = key.clone();
        self.app_memo.insert(key, self.apps.len());
        self.apps.push(AppInstance { symbol, args, value });
        Ok(value)
    }

    /// Functional-consistency lemma for two applications of one symbol.
    pub fn congruence_lemma(&mut self, i: usize, j: usize) {
        let (a, b) = (self.apps[i].clone(), self.apps[j].clone());
        let mut premise = Vec::new();
        for (x, y) in a.args.iter().zip(&b.args) {
            let eq = self.cmp_lit(CmpOp::Eq, &x.minus(y));
            if eq == !self.true_lit() {
                return;
            }
            premise.push(!eq);
        }
        match (a.value, b.value) {
            (AppValue::Int(u), AppValue::Int(v)) => {
                let same = self.cmp_lit(CmpOp::Eq, &Lin::var(u).minus(&Lin::var(v)));
                let mut c = premise;
                c.push(same);
                self.clause(c);
            }
            (AppValue::Bool(u), AppValue::Bool(v)) => {
                let (u, v) = (Lit::new(u, true), Lit::new(v, true));
                let mut c1 = premise.clone();
                c1.extend([!u, v]);
                let mut c2 = premise;
                c2.extend([u, !v]);
                self.clause(c1);
                self.clause(c2);
            }
            _ => unreachable!("one symbol has one result sort"),
        }
    }
}
