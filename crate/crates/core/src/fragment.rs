//! Fragments of a script keyed on a set of uninterpreted symbols.
//!
//! The fragment for a symbol set keeps the user assertions that mention at
//! least one chosen symbol and no other uninterpreted function or predicate.
//! Constants never count either way.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::smtlib::{relax_sorts, Script};
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FragmentError {
    #[error("`{0}` is not an uninterpreted function of the script")]
    UnknownSymbol(String),
    #[error("fragment size must be positive")]
    ZeroK,
}

/// Names of declared symbols with at least one argument, sorted.
pub fn function_symbols(s: &Script) -> Vec<String> {
    let names: BTreeSet<String> = s.functions().map(|d| d.name.clone()).collect();
    names.into_iter().collect()
}

/// Uninterpreted symbols of positive arity applied in `t`.
pub fn applied_functions(t: &Term) -> BTreeSet<String> {
    t.symbols().into_iter().filter(|(_, n)| *n > 0).map(|(s, _)| s).collect()
}

/// Whether an assertion belongs to the fragment for `chosen`.
pub fn keeps(assertion: &Term, chosen: &BTreeSet<String>) -> bool {
    let used = applied_functions(assertion);
    !used.is_disjoint(chosen) && used.is_subset(chosen)
}

pub fn fragment(s: &Script, symbols: &BTreeSet<String>) -> Result<Script, FragmentError> {
    let functions = function_symbols(s);
    if let Some(bad) = symbols.iter().find(|f| !functions.contains(f)) {
        return Err(FragmentError::UnknownSymbol(bad.clone()));
    }
    let assertions: Vec<Term> = s.assertions.iter().filter(|a| keeps(a, symbols)).cloned().collect();
    let used: BTreeSet<String> = assertions.iter().flat_map(|a| a.symbols().into_keys()).collect();
    let out = Script {
        logic: s.logic.clone(),
        sorts: s.sorts.clone(),
        declarations: s.declarations.iter().filter(|d| used.contains(&d.name)).cloned().collect(),
        assertions,
        // The source status no longer applies.
        metadata: s.metadata.iter().filter(|(k, _)| k != ":status" && k != "status").cloned().collect(),
    };
    Ok(relax_sorts(&out))
}

/// One fragment per `k`-subset of the function symbols, in lexicographic
/// subset order, skipping empty fragments. `cap` bounds the number of
/// subsets considered.
pub fn enumerate_fragments(
    s: &Script,
    k: usize,
    cap: Option<usize>,
) -> Result<Vec<(Vec<String>, Script)>, FragmentError> {
    if k == 0 {
        return Err(FragmentError::ZeroK);
    }
    let functions = function_symbols(s);
    let mut out = Vec::new();
    for subset in combinations(functions.len(), k).take(cap.unwrap_or(usize::MAX)) {
        let chosen: Vec<String> = subset.iter().map(|&i| functions[i].clone()).collect();
        let f = fragment(s, &chosen.iter().cloned().collect())?;
        if !f.assertions.is_empty() {
            out.push((chosen, f));
        }
    }
    Ok(out)
}

/// `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut next = (k <= n).then(|| (0..k).collect::<Vec<_>>());
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        if let Some(i) = (0..k).rev().find(|&i| succ[i] < n - k + i) {
            succ[i] += 1;
            for j in i + 1..k {
                succ[j] = succ[j - 1] + 1;
            }
            next = Some(succ);
        }
        Some(cur)
    })
}
