use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::pwl::{formal_params, PwlTerm};
use crate::term::{Interpretation, Sort, Term, Value};

/// Interpretation of one uninterpreted symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolInterpretation {
    pub arg_sorts: Vec<Sort>,
    pub sort: Sort,
    pub body: PwlTerm,
    params: Vec<String>,
    term: Term,
}

impl SymbolInterpretation {
    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// The body as a term over [`Self::params`].
    pub fn term(&self) -> &Term {
        &self.term
    }
}

/// Total piecewise-linear interpretation of uninterpreted symbols.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CandidateModel {
    symbols: BTreeMap<String, SymbolInterpretation>,
}

impl CandidateModel {
    pub fn insert(&mut self, name: &str, arg_sorts: Vec<Sort>, sort: Sort, body: PwlTerm) {
        let params = formal_params(arg_sorts.len());
        let term = body.to_term(&params);
        self.symbols.insert(name.to_string(), SymbolInterpretation { arg_sorts, sort, body, params, term });
    }

    pub fn get(&self, name: &str) -> Option<&SymbolInterpretation> {
        self.symbols.get(name)
    }

    pub fn definition(&self, name: &str) -> Option<(&[String], &Term)> {
        self.symbols.get(name).map(|s| (s.params.as_slice(), &s.term))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &SymbolInterpretation)> {
        self.symbols.iter()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

impl Interpretation for CandidateModel {
    fn apply(&self, symbol: &str, args: &[Value]) -> Option<Value> {
        let def = self.symbols.get(symbol)?;
        if def.arg_sorts.len() != args.len() {
            return None;
        }
        let ints: Option<Vec<BigInt>> = args.iter().map(|a| a.as_int().cloned()).collect();
        def.body.eval(&ints?).ok()
    }
}
