//! Properties of simplification, printing, parsing and sort relaxation on
//! random terms.

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use pwlmbqi::pwl::{fit_function, fit_predicate_recursive, FunctionPoint};
use pwlmbqi::smtlib::{parse_model, parse_script, parse_term, print_script};
use pwlmbqi::term::{evaluate, simplify, CmpOp, Interpretation, Sort, Term, Valuation, Value};
use pwlmbqi::{print_model, print_term, relax_sorts, CandidateModel};

const DECLS: &str = "(declare-fun a () Int)(declare-fun b () Int)
    (declare-fun f (Int) Int)(declare-fun p (Int) Bool)";

/// `a`, `b` and `x`, `y` from the environment, `f(v) = 2v - 1`, `p(v) = v even`.
struct Fixed;

impl Interpretation for Fixed {
    fn apply(&self, symbol: &str, args: &[Value]) -> Option<Value> {
        let arg = |i: usize| args.get(i).and_then(Value::as_int).cloned();
        match (symbol, args.len()) {
            ("a", 0) => Some(Value::Int(BigInt::from(7))),
            ("b", 0) => Some(Value::Int(BigInt::from(-3))),
            ("f", 1) => Some(Value::Int(arg(0)? * 2 - 1)),
            ("p", 1) => Some(Value::Bool(arg(0)?.is_even())),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Leaves {
    /// Bound variables `x`, `y`.
    Vars,
    /// Declared constants `a`, `b`.
    Consts,
}

fn int_leaf(leaves: Leaves) -> BoxedStrategy<Term> {
    let names = match leaves {
        Leaves::Vars => ["x", "y"],
        Leaves::Consts => ["a", "b"],
    };
    let sym = proptest::sample::select(names.to_vec()).prop_map(move |n| match leaves {
        Leaves::Vars => Term::int_var(n),
        Leaves::Consts => Term::app(n, vec![], Sort::Int),
    });
    prop_oneof![(-20i64..=20).prop_map(Term::int), sym].boxed()
}

fn nonzero() -> impl Strategy<Value = i64> {
    prop_oneof![-5i64..=-1, 1i64..=5]
}

fn cmp_op() -> impl Strategy<Value = CmpOp> {
    proptest::sample::select(vec![CmpOp::Eq, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge])
}

fn int_term(depth: u32, leaves: Leaves) -> BoxedStrategy<Term> {
    if depth == 0 {
        return int_leaf(leaves);
    }
    let i = move || int_term(depth - 1, leaves);
    let b = move || bool_term(depth - 1, leaves);
    prop_oneof![
        int_leaf(leaves),
        proptest::collection::vec(i(), 1..=3).prop_map(Term::Add),
        (i(), i()).prop_map(|(x, y)| Term::Sub(Box::new(x), Box::new(y))),
        i().prop_map(|x| Term::Neg(Box::new(x))),
        (-4i64..=4, i()).prop_map(|(k, x)| Term::MulConst(k.into(), Box::new(x))),
        (i(), nonzero()).prop_map(|(x, k)| Term::Div(Box::new(x), Box::new(Term::int(k)))),
        (i(), nonzero()).prop_map(|(x, k)| Term::Mod(Box::new(x), Box::new(Term::int(k)))),
        (b(), i(), i()).prop_map(|(c, t, e)| Term::ite(c, t, e)),
        i().prop_map(|x| Term::app("f", vec![x], Sort::Int)),
    ]
    .boxed()
}

fn bool_term(depth: u32, leaves: Leaves) -> BoxedStrategy<Term> {
    let i = move || int_term(depth.saturating_sub(1), leaves);
    let atom = prop_oneof![
        any::<bool>().prop_map(Term::Bool),
        (cmp_op(), i(), i()).prop_map(|(op, x, y)| Term::cmp(op, x, y)),
        i().prop_map(|x| Term::app("p", vec![x], Sort::Bool)),
    ];
    if depth == 0 {
        return atom.boxed();
    }
    let b = move || bool_term(depth - 1, leaves);
    prop_oneof![
        atom,
        b().prop_map(Term::not),
        proptest::collection::vec(b(), 1..=3).prop_map(Term::And),
        proptest::collection::vec(b(), 1..=3).prop_map(Term::Or),
        (b(), b()).prop_map(|(x, y)| Term::implies(x, y)),
        (b(), b()).prop_map(|(x, y)| Term::Iff(Box::new(x), Box::new(y))),
        (b(), b(), b()).prop_map(|(c, t, e)| Term::ite(c, t, e)),
    ]
    .boxed()
}

fn any_term(leaves: Leaves) -> BoxedStrategy<Term> {
    prop_oneof![int_term(3, leaves), bool_term(3, leaves)].boxed()
}

fn env(x: i64, y: i64) -> Valuation {
    [("x".to_string(), Value::Int(x.into())), ("y".to_string(), Value::Int(y.into()))].into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn simplify_preserves_value(t in any_term(Leaves::Vars), x in -10i64..=10, y in -10i64..=10) {
        let s = simplify(&t);
        let e = env(x, y);
        prop_assert_eq!(evaluate(&s, &e, &Fixed).unwrap(), evaluate(&t, &e, &Fixed).unwrap(), "{} ~> {}", t, s);
        prop_assert_eq!(simplify(&s).sort(), t.sort());
    }

    #[test]
    fn print_parse_roundtrip(t in any_term(Leaves::Consts)) {
        let script = parse_script(DECLS).unwrap();
        let printed = print_term(&t);
        let parsed = parse_term(&printed, &script).unwrap();
        let e = Valuation::new();
        prop_assert_eq!(evaluate(&parsed, &e, &Fixed).unwrap(), evaluate(&t, &e, &Fixed).unwrap());
        // Printing the elaborated form is a fixpoint.
        let again = parse_term(&print_term(&parsed), &script).unwrap();
        prop_assert_eq!(&again, &parsed);
    }

    #[test]
    fn script_roundtrip(ts in proptest::collection::vec(bool_term(3, Leaves::Consts), 0..4)) {
        let mut script = parse_script(DECLS).unwrap();
        script.assertions = ts;
        let reparsed = parse_script(&print_script(&script)).unwrap();
        let e = Valuation::new();
        prop_assert_eq!(reparsed.assertions.len(), script.assertions.len());
        for (a, b) in reparsed.assertions.iter().zip(&script.assertions) {
            prop_assert_eq!(evaluate(a, &e, &Fixed).unwrap(), evaluate(b, &e, &Fixed).unwrap());
        }
        prop_assert_eq!(relax_sorts(&reparsed), reparsed);
    }

    #[test]
    fn model_roundtrip(vals in proptest::collection::btree_map(-15i64..=15, (-20i64..=20, any::<bool>()), 0..12)) {
        let script = parse_script(DECLS).unwrap();
        let fpts: Vec<_> = vals.iter().map(|(k, (v, _))| FunctionPoint::new(vec![(*k).into()], BigInt::from(*v))).collect();
        let ppts: Vec<_> = vals.iter().map(|(k, (_, b))| FunctionPoint::new(vec![(*k).into()], *b)).collect();
        let mut m = CandidateModel::default();
        m.insert("f", vec![Sort::Int], Sort::Int, fit_function(1, &fpts).unwrap());
        m.insert("p", vec![Sort::Int], Sort::Bool, fit_predicate_recursive(1, &ppts, Default::default()).unwrap());
        let defs = parse_model(&print_model(&m), &script).unwrap();
        for v in -20i64..=20 {
            let arg = [Value::Int(v.into())];
            prop_assert_eq!(defs.apply("f", &arg), m.apply("f", &arg));
            prop_assert_eq!(defs.apply("p", &arg), m.apply("p", &arg));
        }
    }
}

#[test]
fn relaxation_is_idempotent() {
    let s = parse_script(
        "(declare-sort U 0)(declare-sort V 0)(declare-fun g (U Int) V)(declare-fun u () U)
         (assert (forall ((x U) (y V)) (not (= (g x 1) y))))(assert (= (g u 2) (g u 3)))",
    )
    .unwrap();
    let once = relax_sorts(&s);
    assert!(once.sorts.is_empty());
    assert_eq!(once.declaration("g").unwrap().arg_sorts, vec![Sort::Int, Sort::Int]);
    assert_eq!(relax_sorts(&once), once);
    let reparsed = parse_script(&print_script(&once)).unwrap();
    assert_eq!(reparsed, once);
}
