//! SMT-LIB 2 front end for the UFLIA subset: lexer, s-expression reader,
//! sort-checking elaboration into [`Term`]s, and printers.
//!
//! `define-fun` and `let` are expanded at parse time, so the resulting
//! [`Script`] never mentions either. `div` and `mod` keep their SMT-LIB
//! (Euclidean) meaning and need a constant divisor.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::model::CandidateModel;
use crate::term::{evaluate, fresh_name, substitute, Binder, CmpOp, Interpretation, NoSymbols, Sort, Term, Valuation, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Unsupported,
    Sort,
    Symbol,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub kind: ErrorKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

type Result<T> = std::result::Result<T, ParseError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

fn err<T>(kind: ErrorKind, pos: Pos, message: impl Into<String>) -> Result<T> {
    Err(ParseError { kind, line: pos.line, col: pos.col, message: message.into() })
}

// ---------------------------------------------------------------------------
// Lexing and s-expressions

#[derive(Clone, Debug, PartialEq)]
enum Atom {
    Num(BigInt),
    Sym(String),
    Key(String),
    Str(String),
}

#[derive(Clone, Debug)]
enum SExpr {
    Atom(Atom, Pos),
    List(Vec<SExpr>, Pos),
}

impl SExpr {
    fn pos(&self) -> Pos {
        match self {
            SExpr::Atom(_, p) | SExpr::List(_, p) => *p,
        }
    }

    fn sym(&self) -> Option<&str> {
        match self {
            SExpr::Atom(Atom::Sym(s), _) => Some(s),
            _ => None,
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

fn is_symbol_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c)
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        Reader { chars: text.chars().peekable(), line: 1, col: 1 }
    }

    fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.col }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn read_all(&mut self) -> Result<Vec<SExpr>> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            if self.chars.peek().is_none() {
                return Ok(out);
            }
            out.push(self.read()?);
        }
    }

    fn read(&mut self) -> Result<SExpr> {
        self.skip_trivia();
        let pos = self.pos();
        let Some(&c) = self.chars.peek() else {
            return err(ErrorKind::Syntax, pos, "unexpected end of input");
        };
        match c {
            '(' => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return err(ErrorKind::Syntax, pos, "unclosed parenthesis"),
                        Some(')') => {
                            self.bump();
                            return Ok(SExpr::List(items, pos));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            ')' => err(ErrorKind::Syntax, pos, "unexpected `)`"),
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return err(ErrorKind::Syntax, pos, "unterminated string literal"),
                        Some('"') if self.chars.peek() == Some(&'"') => {
                            self.bump();
                            s.push('"');
                        }
                        Some('"') => return Ok(SExpr::Atom(Atom::Str(s), pos)),
                        Some(c) => s.push(c),
                    }
                }
            }
            '|' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return err(ErrorKind::Syntax, pos, "unterminated quoted symbol"),
                        Some('|') => return Ok(SExpr::Atom(Atom::Sym(s), pos)),
                        Some(c) => s.push(c),
                    }
                }
            }
            ':' => {
                self.bump();
                let word = self.word();
                if word.is_empty() {
                    return err(ErrorKind::Syntax, pos, "empty keyword");
                }
                Ok(SExpr::Atom(Atom::Key(word), pos))
            }
            '#' => err(ErrorKind::Unsupported, pos, "unsupported feature: bit-vector literal"),
            c if c.is_ascii_digit() => {
                let word = self.word();
                if word.chars().all(|c| c.is_ascii_digit()) {
                    if word.len() > 1 && word.starts_with('0') {
                        return err(ErrorKind::Syntax, pos, format!("numeral with leading zero `{word}`"));
                    }
                    Ok(SExpr::Atom(Atom::Num(word.parse().expect("digits")), pos))
                } else if word.chars().all(|c| c.is_ascii_digit() || c == '.') {
                    err(ErrorKind::Unsupported, pos, format!("unsupported feature: decimal `{word}`"))
                } else {
                    err(ErrorKind::Syntax, pos, format!("malformed numeral `{word}`"))
                }
            }
            c if is_symbol_char(c) => Ok(SExpr::Atom(Atom::Sym(self.word()), pos)),
            c => err(ErrorKind::Syntax, pos, format!("unexpected character `{c}`")),
        }
    }

    fn word(&mut self) -> String {
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if !is_symbol_char(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }
}

// ---------------------------------------------------------------------------
// Scripts

/// Signature of an uninterpreted symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Declaration {
    pub name: String,
    pub arg_sorts: Vec<Sort>,
    pub sort: Sort,
}

impl Declaration {
    pub fn arity(&self) -> usize {
        self.arg_sorts.len()
    }
}

/// A parsed problem: its meaning is the conjunction of `assertions`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Script {
    pub logic: Option<String>,
    /// Declared uninterpreted sorts.
    pub sorts: Vec<String>,
    pub declarations: Vec<Declaration>,
    pub assertions: Vec<Term>,
    /// `set-info` pairs, kept verbatim.
    pub metadata: Vec<(String, String)>,
}

impl Script {
    pub fn declaration(&self, name: &str) -> Option<&Declaration> {
        self.declarations.iter().find(|d| d.name == name)
    }

    /// Declarations with at least one argument.
    pub fn functions(&self) -> impl Iterator<Item = &Declaration> {
        self.declarations.iter().filter(|d| d.arity() > 0)
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_script(self))
    }
}

struct Macro {
    params: Vec<Binder>,
    body: Term,
}

#[derive(Default)]
struct Elaborator {
    script: Script,
    macros: HashMap<String, Macro>,
    /// Variables visible in the current term: name → replacement term.
    scope: Vec<(String, Term)>,
    /// Names of quantifier-bound variables currently in scope.
    bound: Vec<String>,
}

const RESERVED: &[&str] = &[
    "true", "false", "not", "and", "or", "=>", "xor", "=", "distinct", "ite", "+", "-", "*", "div", "mod", "abs", "<",
    "<=", ">", ">=", "let", "forall", "exists", "!", "_", "as", "match",
];

/// Parses an SMT-LIB 2 script.
pub fn parse_script(text: &str) -> Result<Script> {
    let exprs = Reader::new(text).read_all()?;
    let mut el = Elaborator::default();
    for e in &exprs {
        el.command(e)?;
    }
    Ok(el.script)
}

/// Parses a single term against the declarations of `script`.
pub fn parse_term(text: &str, script: &Script) -> Result<Term> {
    let exprs = Reader::new(text).read_all()?;
    let [e] = exprs.as_slice() else {
        return err(ErrorKind::Syntax, Pos { line: 1, col: 1 }, "expected exactly one term");
    };
    let mut el = Elaborator { script: script.clone(), ..Default::default() };
    el.term(e)
}

impl Elaborator {
    fn command(&mut self, e: &SExpr) -> Result<()> {
        let SExpr::List(items, pos) = e else {
            return err(ErrorKind::Syntax, e.pos(), "expected a command");
        };
        let pos = *pos;
        let Some(head) = items.first().and_then(SExpr::sym) else {
            return err(ErrorKind::Syntax, pos, "expected a command name");
        };
        let args = &items[1..];
        match head {
            "set-logic" => {
                let [name] = args else { return err(ErrorKind::Syntax, pos, "set-logic takes one symbol") };
                let logic = name.sym().ok_or(()).or_else(|_| err(ErrorKind::Syntax, name.pos(), "expected logic name"))?;
                if !matches!(logic, "UFLIA" | "LIA" | "QF_UFLIA" | "QF_LIA" | "UF" | "QF_UF" | "ALL") {
                    log::warn!("logic {logic} is not UFLIA; only the term language is checked");
                }
                self.script.logic = Some(logic.to_string());
            }
            "set-info" => {
                let key = match args.first() {
                    Some(SExpr::Atom(Atom::Key(k), _)) => k.clone(),
                    _ => return err(ErrorKind::Syntax, pos, "set-info expects a keyword"),
                };
                let value = args.get(1).map(render_sexpr).unwrap_or_default();
                self.script.metadata.push((key, value));
            }
            "set-option" | "check-sat" | "get-model" | "exit" | "get-info" => {}
            "declare-sort" => {
                let (Some(name), arity) = (args.first().and_then(SExpr::sym), args.get(1)) else {
                    return err(ErrorKind::Syntax, pos, "declare-sort expects a name");
                };
                if let Some(SExpr::Atom(Atom::Num(n), p)) = arity {
                    if !n.is_zero() {
                        return err(ErrorKind::Unsupported, *p, "unsupported feature: parametric sort");
                    }
                }
                self.fresh_symbol(name, pos)?;
                self.script.sorts.push(name.to_string());
            }
            "declare-fun" => {
                let [name, params, result] = args else {
                    return err(ErrorKind::Syntax, pos, "declare-fun expects name, argument sorts and result sort");
                };
                let name = name.sym().ok_or(()).or_else(|_| err(ErrorKind::Syntax, name.pos(), "expected symbol"))?;
                let SExpr::List(ps, _) = params else {
                    return err(ErrorKind::Syntax, params.pos(), "expected argument sort list");
                };
                let arg_sorts = ps.iter().map(|p| self.sort(p)).collect::<Result<Vec<_>>>()?;
                let sort = self.sort(result)?;
                self.declare(name, arg_sorts, sort, pos)?;
            }
            "declare-const" => {
                let [name, result] = args else {
                    return err(ErrorKind::Syntax, pos, "declare-const expects name and sort");
                };
                let name = name.sym().ok_or(()).or_else(|_| err(ErrorKind::Syntax, name.pos(), "expected symbol"))?;
                let sort = self.sort(result)?;
                self.declare(name, vec![], sort, pos)?;
            }
            "define-fun" => {
                let [name, params, result, body] = args else {
                    return err(ErrorKind::Syntax, pos, "define-fun expects name, parameters, sort and body");
                };
                let name = name.sym().ok_or(()).or_else(|_| err(ErrorKind::Syntax, name.pos(), "expected symbol"))?;
                let params = self.binders(params)?;
                let sort = self.sort(result)?;
                let body = self.with_binders(&params, |el, _| el.term(body))?;
                self.check_sort(&body, &sort, pos)?;
                self.fresh_symbol(name, pos)?;
                self.macros.insert(name.to_string(), Macro { params, body });
            }
            "assert" => {
                let [t] = args else { return err(ErrorKind::Syntax, pos, "assert takes one term") };
                let t = self.term(t)?;
                self.check_sort(&t, &Sort::Bool, pos)?;
                self.script.assertions.push(t);
            }
            other => return err(ErrorKind::Unsupported, pos, format!("unsupported feature: command `{other}`")),
        }
        Ok(())
    }

    fn fresh_symbol(&self, name: &str, pos: Pos) -> Result<()> {
        if RESERVED.contains(&name)
            || self.script.declaration(name).is_some()
            || self.macros.contains_key(name)
            || self.script.sorts.iter().any(|s| s == name)
        {
            return err(ErrorKind::Symbol, pos, format!("symbol `{name}` already declared"));
        }
        Ok(())
    }

    fn declare(&mut self, name: &str, arg_sorts: Vec<Sort>, sort: Sort, pos: Pos) -> Result<()> {
        self.fresh_symbol(name, pos)?;
        self.script.declarations.push(Declaration { name: name.to_string(), arg_sorts, sort });
        Ok(())
    }

    fn sort(&self, e: &SExpr) -> Result<Sort> {
        match e.sym() {
            Some("Int") => Ok(Sort::Int),
            Some("Bool") => Ok(Sort::Bool),
            Some(s) if self.script.sorts.iter().any(|d| d == s) => Ok(Sort::Uninterpreted(s.to_string())),
            Some(s) if s == "Real" || s == "String" => {
                err(ErrorKind::Unsupported, e.pos(), format!("unsupported feature: sort `{s}`"))
            }
            Some(s) => err(ErrorKind::Sort, e.pos(), format!("unknown sort `{s}`")),
            None => err(ErrorKind::Unsupported, e.pos(), "unsupported feature: compound sort"),
        }
    }

    fn binders(&self, e: &SExpr) -> Result<Vec<Binder>> {
        let SExpr::List(items, _) = e else {
            return err(ErrorKind::Syntax, e.pos(), "expected a binder list");
        };
        items
            .iter()
            .map(|b| match b {
                SExpr::List(pair, _) if pair.len() == 2 && pair[0].sym().is_some() => {
                    Ok((pair[0].sym().unwrap().to_string(), self.sort(&pair[1])?))
                }
                _ => err(ErrorKind::Syntax, b.pos(), "expected `(name sort)`"),
            })
            .collect()
    }

    /// Runs `f` with quantifier binders in scope, renaming any binder that
    /// would shadow an enclosing bound variable. `f` receives the binders
    /// under their final names.
    fn with_binders<T>(&mut self, binders: &[Binder], f: impl FnOnce(&mut Self, Vec<Binder>) -> Result<T>) -> Result<T> {
        let (scope_len, bound_len) = (self.scope.len(), self.bound.len());
        let mut renamed = Vec::with_capacity(binders.len());
        for (name, sort) in binders {
            let out = if self.bound.contains(name) {
                fresh_name(name, |c| self.bound.iter().any(|b| b == c) || binders.iter().any(|(b, _)| b == c))
            } else {
                name.clone()
            };
            self.scope.push((name.clone(), Term::Var(out.clone(), sort.clone())));
            self.bound.push(out.clone());
            renamed.push((out, sort.clone()));
        }
        let result = f(self, renamed);
        self.scope.truncate(scope_len);
        self.bound.truncate(bound_len);
        result
    }

    fn check_sort(&self, t: &Term, expected: &Sort, pos: Pos) -> Result<()> {
        let got = t.sort();
        if &got != expected {
            return err(ErrorKind::Sort, pos, format!("expected sort {expected}, found {got}"));
        }
        Ok(())
    }

    fn int_arg(&mut self, e: &SExpr) -> Result<Term> {
        let t = self.term(e)?;
        self.check_sort(&t, &Sort::Int, e.pos())?;
        Ok(t)
    }

    fn bool_arg(&mut self, e: &SExpr) -> Result<Term> {
        let t = self.term(e)?;
        self.check_sort(&t, &Sort::Bool, e.pos())?;
        Ok(t)
    }

    fn term(&mut self, e: &SExpr) -> Result<Term> {
        match e {
            SExpr::Atom(Atom::Num(n), _) => Ok(Term::Int(n.clone())),
            SExpr::Atom(Atom::Sym(s), pos) => self.symbol(s, *pos),
            SExpr::Atom(Atom::Key(_), pos) => err(ErrorKind::Syntax, *pos, "unexpected keyword"),
            SExpr::Atom(Atom::Str(_), pos) => err(ErrorKind::Unsupported, *pos, "unsupported feature: string literal"),
            SExpr::List(items, pos) => self.application(items, *pos),
        }
    }

    fn symbol(&mut self, s: &str, pos: Pos) -> Result<Term> {
        if let Some((_, t)) = self.scope.iter().rev().find(|(n, _)| n == s) {
            return Ok(t.clone());
        }
        match s {
            "true" => return Ok(Term::Bool(true)),
            "false" => return Ok(Term::Bool(false)),
            _ => {}
        }
        if let Some(m) = self.macros.get(s) {
            if !m.params.is_empty() {
                return err(ErrorKind::Sort, pos, format!("`{s}` expects {} arguments", m.params.len()));
            }
            return Ok(m.body.clone());
        }
        match self.script.declaration(s) {
            Some(d) if d.arity() == 0 => Ok(Term::App(s.to_string(), vec![], d.sort.clone())),
            Some(d) => err(ErrorKind::Sort, pos, format!("`{s}` expects {} arguments", d.arity())),
            None => err(ErrorKind::Symbol, pos, format!("undeclared symbol `{s}`")),
        }
    }

    fn application(&mut self, items: &[SExpr], pos: Pos) -> Result<Term> {
        let Some(head) = items.first() else {
            return err(ErrorKind::Syntax, pos, "empty application");
        };
        let args = &items[1..];
        let Some(op) = head.sym() else {
            return match head {
                SExpr::List(inner, p) if inner.first().and_then(SExpr::sym) == Some("_") => {
                    err(ErrorKind::Unsupported, *p, "unsupported feature: indexed identifier")
                }
                SExpr::List(inner, p) if inner.first().and_then(SExpr::sym) == Some("as") => {
                    err(ErrorKind::Unsupported, *p, "unsupported feature: qualified identifier")
                }
                _ => err(ErrorKind::Syntax, head.pos(), "expected an operator"),
            };
        };
        if self.scope.iter().any(|(n, _)| n == op) {
            return err(ErrorKind::Sort, pos, format!("variable `{op}` cannot be applied"));
        }
        let arity = |n: usize| -> Result<()> {
            if args.len() != n {
                return err(ErrorKind::Sort, pos, format!("`{op}` expects {n} arguments, got {}", args.len()));
            }
            Ok(())
        };
        let at_least = |n: usize| -> Result<()> {
            if args.len() < n {
                return err(ErrorKind::Sort, pos, format!("`{op}` expects at least {n} arguments"));
            }
            Ok(())
        };
        match op {
            "let" => {
                arity(2)?;
                let SExpr::List(bindings, _) = &args[0] else {
                    return err(ErrorKind::Syntax, args[0].pos(), "expected let bindings");
                };
                let mut values = Vec::with_capacity(bindings.len());
                for b in bindings {
                    match b {
                        SExpr::List(pair, _) if pair.len() == 2 && pair[0].sym().is_some() => {
                            values.push((pair[0].sym().unwrap().to_string(), self.term(&pair[1])?));
                        }
                        _ => return err(ErrorKind::Syntax, b.pos(), "expected `(name term)`"),
                    }
                }
                let depth = self.scope.len();
                self.scope.extend(values);
                let body = self.term(&args[1]);
                self.scope.truncate(depth);
                body
            }
            "forall" | "exists" => {
                arity(2)?;
                let binders = self.binders(&args[0])?;
                if binders.is_empty() {
                    return err(ErrorKind::Syntax, args[0].pos(), "quantifier without binders");
                }
                let body_expr = &args[1];
                self.with_binders(&binders, |el, renamed| {
                    let body = el.bool_arg(body_expr)?;
                    Ok(if op == "forall" {
                        Term::Forall(renamed, Box::new(body))
                    } else {
                        Term::Exists(renamed, Box::new(body))
                    })
                })
            }
            "!" => {
                at_least(1)?;
                self.term(&args[0])
            }
            "match" => err(ErrorKind::Unsupported, pos, "unsupported feature: match"),
            "not" => {
                arity(1)?;
                Ok(Term::not(self.bool_arg(&args[0])?))
            }
            "and" | "or" => {
                let ts = args.iter().map(|a| self.bool_arg(a)).collect::<Result<Vec<_>>>()?;
                Ok(match (ts.len(), op) {
                    (0, "and") => Term::Bool(true),
                    (0, _) => Term::Bool(false),
                    (1, _) => ts.into_iter().next().unwrap(),
                    (_, "and") => Term::And(ts),
                    _ => Term::Or(ts),
                })
            }
            "=>" => {
                at_least(2)?;
                let mut ts = args.iter().map(|a| self.bool_arg(a)).collect::<Result<Vec<_>>>()?;
                let mut acc = ts.pop().unwrap();
                while let Some(t) = ts.pop() {
                    acc = Term::implies(t, acc);
                }
                Ok(acc)
            }
            "xor" => {
                at_least(2)?;
                let mut ts = args.iter().map(|a| self.bool_arg(a)).collect::<Result<Vec<_>>>()?.into_iter();
                let mut acc = ts.next().unwrap();
                for t in ts {
                    acc = Term::not(Term::Iff(Box::new(acc), Box::new(t)));
                }
                Ok(acc)
            }
            "=" | "distinct" => {
                at_least(2)?;
                let ts = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>>>()?;
                let sort = ts[0].sort();
                for (t, a) in ts.iter().zip(args) {
                    self.check_sort(t, &sort, a.pos())?;
                }
                let eq = |a: &Term, b: &Term| {
                    if sort == Sort::Bool {
                        Term::Iff(Box::new(a.clone()), Box::new(b.clone()))
                    } else {
                        Term::cmp(CmpOp::Eq, a.clone(), b.clone())
                    }
                };
                let mut parts = Vec::new();
                if op == "=" {
                    for w in ts.windows(2) {
                        parts.push(eq(&w[0], &w[1]));
                    }
                } else {
                    for i in 0..ts.len() {
                        for j in i + 1..ts.len() {
                            parts.push(Term::not(eq(&ts[i], &ts[j])));
                        }
                    }
                }
                Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Term::And(parts) })
            }
            "ite" => {
                arity(3)?;
                let c = self.bool_arg(&args[0])?;
                let t = self.term(&args[1])?;
                let e = self.term(&args[2])?;
                self.check_sort(&e, &t.sort(), args[2].pos())?;
                Ok(Term::ite(c, t, e))
            }
            "<" | "<=" | ">" | ">=" => {
                at_least(2)?;
                let cmp = match op {
                    "<" => CmpOp::Lt,
                    "<=" => CmpOp::Le,
                    ">" => CmpOp::Gt,
                    _ => CmpOp::Ge,
                };
                let ts = args.iter().map(|a| self.int_arg(a)).collect::<Result<Vec<_>>>()?;
                let mut parts: Vec<Term> = ts.windows(2).map(|w| Term::cmp(cmp, w[0].clone(), w[1].clone())).collect();
                Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Term::And(parts) })
            }
            "+" => {
                at_least(1)?;
                let mut ts = args.iter().map(|a| self.int_arg(a)).collect::<Result<Vec<_>>>()?;
                Ok(if ts.len() == 1 { ts.pop().unwrap() } else { Term::Add(ts) })
            }
            "-" => {
                at_least(1)?;
                let ts = args.iter().map(|a| self.int_arg(a)).collect::<Result<Vec<_>>>()?;
                if ts.len() == 1 {
                    return Ok(negate(ts.into_iter().next().unwrap()));
                }
                let mut it = ts.into_iter();
                let mut acc = it.next().unwrap();
                for t in it {
                    acc = Term::Sub(Box::new(acc), Box::new(t));
                }
                Ok(acc)
            }
            "*" => {
                at_least(1)?;
                let ts = args.iter().map(|a| self.int_arg(a)).collect::<Result<Vec<_>>>()?;
                let mut k = BigInt::one();
                let mut factor: Option<Term> = None;
                for t in ts {
                    match t {
                        Term::Int(n) => k *= n,
                        t if factor.is_none() => factor = Some(t),
                        _ => return err(ErrorKind::Unsupported, pos, "unsupported feature: nonlinear multiplication"),
                    }
                }
                Ok(match factor {
                    None => Term::Int(k),
                    Some(t) if args.len() == 1 => t,
                    Some(t) => Term::MulConst(k, Box::new(t)),
                })
            }
            "div" | "mod" => {
                arity(2)?;
                let a = self.int_arg(&args[0])?;
                let b = self.int_arg(&args[1])?;
                if !matches!(b, Term::Int(_)) {
                    return err(ErrorKind::Unsupported, args[1].pos(), "unsupported feature: non-constant divisor");
                }
                Ok(if op == "div" { Term::Div(Box::new(a), Box::new(b)) } else { Term::Mod(Box::new(a), Box::new(b)) })
            }
            "abs" => {
                arity(1)?;
                let t = self.int_arg(&args[0])?;
                if let Term::Int(n) = t {
                    return Ok(Term::Int(n.abs()));
                }
                Ok(Term::ite(Term::cmp(CmpOp::Ge, t.clone(), Term::int(0)), t.clone(), Term::Neg(Box::new(t))))
            }
            _ => self.user_application(op, args, pos),
        }
    }

    fn user_application(&mut self, op: &str, args: &[SExpr], pos: Pos) -> Result<Term> {
        let ts = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>>>()?;
        let expected: Vec<Sort> = if let Some(m) = self.macros.get(op) {
            m.params.iter().map(|(_, s)| s.clone()).collect()
        } else if let Some(d) = self.script.declaration(op) {
            d.arg_sorts.clone()
        } else {
            return err(ErrorKind::Symbol, pos, format!("undeclared symbol `{op}`"));
        };
        if expected.len() != ts.len() {
            return err(ErrorKind::Sort, pos, format!("`{op}` expects {} arguments, got {}", expected.len(), ts.len()));
        }
        for ((t, s), a) in ts.iter().zip(&expected).zip(args) {
            self.check_sort(t, s, a.pos())?;
        }
        if let Some(m) = self.macros.get(op) {
            let map = m.params.iter().map(|(n, _)| n.clone()).zip(ts).collect();
            return Ok(substitute(&m.body, &map));
        }
        let sort = self.script.declaration(op).unwrap().sort.clone();
        Ok(Term::App(op.to_string(), ts, sort))
    }
}

/// Unary minus, folding literals.
fn negate(t: Term) -> Term {
    match t {
        Term::Int(n) => Term::Int(-n),
        t => Term::Neg(Box::new(t)),
    }
}

fn render_sexpr(e: &SExpr) -> String {
    match e {
        SExpr::Atom(Atom::Num(n), _) => n.to_string(),
        SExpr::Atom(Atom::Sym(s), _) => print_symbol(s),
        SExpr::Atom(Atom::Key(k), _) => format!(":{k}"),
        SExpr::Atom(Atom::Str(s), _) => format!("\"{}\"", s.replace('"', "\"\"")),
        SExpr::List(items, _) => format!("({})", items.iter().map(render_sexpr).collect::<Vec<_>>().join(" ")),
    }
}

// ---------------------------------------------------------------------------
// Sort relaxation

/// Replaces every uninterpreted sort by `Int` and drops the sort
/// declarations.
pub fn relax_sorts(s: &Script) -> Script {
    let mut out = s.clone();
    out.sorts.clear();
    for d in &mut out.declarations {
        d.arg_sorts = d.arg_sorts.iter().map(relax_sort).collect();
        d.sort = relax_sort(&d.sort);
    }
    out.assertions = s.assertions.iter().map(relax_term).collect();
    out
}

fn relax_sort(s: &Sort) -> Sort {
    match s {
        Sort::Uninterpreted(_) => Sort::Int,
        s => s.clone(),
    }
}

fn relax_term(t: &Term) -> Term {
    let relax_binders = |bs: &[Binder]| bs.iter().map(|(n, s)| (n.clone(), relax_sort(s))).collect();
    match t {
        Term::Var(n, s) => Term::Var(n.clone(), relax_sort(s)),
        Term::App(f, args, s) => Term::App(f.clone(), args.iter().map(relax_term).collect(), relax_sort(s)),
        Term::Forall(bs, body) => Term::Forall(relax_binders(bs), Box::new(relax_term(body))),
        Term::Exists(bs, body) => Term::Exists(relax_binders(bs), Box::new(relax_term(body))),
        _ => t.map_children(relax_term),
    }
}

// ---------------------------------------------------------------------------
// Printing

fn print_symbol(s: &str) -> String {
    let simple = !s.is_empty()
        && !s.starts_with(|c: char| c.is_ascii_digit())
        && s.chars().all(is_symbol_char);
    if simple {
        s.to_string()
    } else {
        format!("|{s}|")
    }
}

fn print_int(n: &BigInt) -> String {
    if n.is_negative() {
        format!("(- {})", -n)
    } else {
        n.to_string()
    }
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

fn write_list(out: &mut String, head: &str, args: &[&Term]) {
    out.push('(');
    out.push_str(head);
    for a in args {
        out.push(' ');
        write_term(a, out);
    }
    out.push(')');
}

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Int(n) => out.push_str(&print_int(n)),
        Term::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Term::Var(n, _) => out.push_str(&print_symbol(n)),
        Term::App(f, args, _) if args.is_empty() => out.push_str(&print_symbol(f)),
        Term::App(f, args, _) => write_list(out, &print_symbol(f), &args.iter().collect::<Vec<_>>()),
        Term::Add(args) => write_list(out, "+", &args.iter().collect::<Vec<_>>()),
        Term::Sub(a, b) => write_list(out, "-", &[a, b]),
        Term::Neg(a) => write_list(out, "-", &[a]),
        Term::MulConst(k, a) => {
            out.push_str("(* ");
            out.push_str(&print_int(k));
            out.push(' ');
            write_term(a, out);
            out.push(')');
        }
        Term::Div(a, b) => write_list(out, "div", &[a, b]),
        Term::Mod(a, b) => write_list(out, "mod", &[a, b]),
        Term::Cmp(op, a, b) => write_list(out, op.symbol(), &[a, b]),
        Term::Not(a) => write_list(out, "not", &[a]),
        Term::And(args) if args.is_empty() => out.push_str("true"),
        Term::Or(args) if args.is_empty() => out.push_str("false"),
        Term::And(args) => write_list(out, "and", &args.iter().collect::<Vec<_>>()),
        Term::Or(args) => write_list(out, "or", &args.iter().collect::<Vec<_>>()),
        Term::Implies(a, b) => write_list(out, "=>", &[a, b]),
        Term::Iff(a, b) => write_list(out, "=", &[a, b]),
        Term::Ite(c, a, b) => write_list(out, "ite", &[c, a, b]),
        Term::Forall(bs, body) | Term::Exists(bs, body) => {
            out.push_str(if matches!(t, Term::Forall(..)) { "(forall (" } else { "(exists (" });
            let binders: Vec<String> = bs.iter().map(|(n, s)| format!("({} {s})", print_symbol(n))).collect();
            out.push_str(&binders.join(" "));
            out.push_str(") ");
            write_term(body, out);
            out.push(')');
        }
    }
}

fn print_sorts(sorts: &[Sort]) -> String {
    sorts.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn print_script(s: &Script) -> String {
    let mut out = String::new();
    if let Some(logic) = &s.logic {
        out.push_str(&format!("(set-logic {logic})\n"));
    }
    for (k, v) in &s.metadata {
        if v.is_empty() {
            out.push_str(&format!("(set-info :{k})\n"));
        } else {
            out.push_str(&format!("(set-info :{k} {v})\n"));
        }
    }
    for sort in &s.sorts {
        out.push_str(&format!("(declare-sort {} 0)\n", print_symbol(sort)));
    }
    for d in &s.declarations {
        out.push_str(&format!("(declare-fun {} ({}) {})\n", print_symbol(&d.name), print_sorts(&d.arg_sorts), d.sort));
    }
    for a in &s.assertions {
        out.push_str(&format!("(assert {})\n", print_term(a)));
    }
    out.push_str("(check-sat)\n");
    out
}

/// `get-model` style response with one `define-fun` per symbol.
pub fn print_model(m: &CandidateModel) -> String {
    let mut out = String::from("(\n");
    for (name, def) in m.iter() {
        let params: Vec<String> =
            def.params().iter().zip(&def.arg_sorts).map(|(p, s)| format!("({} {s})", print_symbol(p))).collect();
        out.push_str(&format!(
            "  (define-fun {} ({}) {} {})\n",
            print_symbol(name),
            params.join(" "),
            def.sort,
            print_term(def.term())
        ));
    }
    out.push(')');
    out
}

/// One `define-fun` read back from a model.
#[derive(Clone, Debug, PartialEq)]
pub struct Definition {
    pub params: Vec<Binder>,
    pub sort: Sort,
    pub body: Term,
}

/// Symbol definitions read back from printed model text.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Definitions {
    pub defs: BTreeMap<String, Definition>,
}

impl Interpretation for Definitions {
    fn apply(&self, symbol: &str, args: &[Value]) -> Option<Value> {
        let d = self.defs.get(symbol)?;
        if d.params.len() != args.len() {
            return None;
        }
        let env: Valuation = d.params.iter().map(|(n, _)| n.clone()).zip(args.iter().cloned()).collect();
        evaluate(&d.body, &env, &NoSymbols).ok()
    }
}

/// Reads a model printed by [`print_model`] (or any `define-fun` list,
/// optionally wrapped in `(model …)`), checking every definition against the
/// declarations of `script`.
pub fn parse_model(text: &str, script: &Script) -> Result<Definitions> {
    let exprs = Reader::new(text).read_all()?;
    let mut items: Vec<&SExpr> = Vec::new();
    for e in &exprs {
        match e {
            SExpr::List(inner, _) if inner.first().and_then(SExpr::sym) == Some("define-fun") => items.push(e),
            SExpr::List(inner, _) => {
                let skip = usize::from(inner.first().and_then(SExpr::sym) == Some("model"));
                items.extend(inner[skip..].iter());
            }
            _ => return err(ErrorKind::Syntax, e.pos(), "expected a model"),
        }
    }
    let declared: BTreeSet<String> = script.sorts.iter().cloned().collect();
    let mut el = Elaborator::default();
    el.script.sorts = declared.into_iter().collect();
    let mut out = Definitions::default();
    for item in items {
        let SExpr::List(parts, pos) = item else {
            return err(ErrorKind::Syntax, item.pos(), "expected define-fun");
        };
        let [head, name, params, result, body] = parts.as_slice() else {
            return err(ErrorKind::Syntax, *pos, "malformed define-fun");
        };
        if head.sym() != Some("define-fun") {
            return err(ErrorKind::Syntax, head.pos(), "expected define-fun");
        }
        let name = name.sym().ok_or(()).or_else(|_| err(ErrorKind::Syntax, name.pos(), "expected symbol"))?;
        let Some(decl) = script.declaration(name) else {
            return err(ErrorKind::Symbol, *pos, format!("model defines undeclared symbol `{name}`"));
        };
        let params = el.binders(params)?;
        let sort = el.sort(result)?;
        let arg_sorts: Vec<Sort> = params.iter().map(|(_, s)| s.clone()).collect();
        if arg_sorts != decl.arg_sorts || sort != decl.sort {
            return err(ErrorKind::Sort, *pos, format!("definition of `{name}` does not match its declaration"));
        }
        let body = el.with_binders(&params, |el, _| el.term(body))?;
        el.check_sort(&body, &sort, *pos)?;
        out.defs.insert(name.to_string(), Definition { params, sort, body });
    }
    Ok(out)
}
