//! Model-based quantifier instantiation for UFLIA that learns piecewise-linear
//! interpretations of uninterpreted functions and predicates.
//!
//! Layout, bottom-up:
//!
//! * [`term`]: terms, evaluation, substitution, simplification.
//! * [`smtlib`]: SMT-LIB 2 parsing and printing.
//! * [`diophantine`], [`simplex`], [`feasibility`]: exact integer kernels.
//! * [`pwl`]: fitting piecewise-linear terms to function points.
//! * [`ground`]: decision procedure for quantifier-free UFLIA.
//! * [`mbqi`]: the instantiation loop.
//! * [`fragment`]: benchmark fragment extraction.

pub mod diophantine;
pub mod feasibility;
pub mod fragment;
pub mod ground;
pub mod mbqi;
pub mod model;
pub mod pwl;
pub mod simplex;
pub mod smtlib;
pub mod term;

pub use model::CandidateModel;
pub use smtlib::{parse_script, print_model, print_term, relax_sorts, Script};
pub use term::{Sort, Term, Value};
