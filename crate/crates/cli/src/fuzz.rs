//! Random quantifier-free UFLIA problems for differential runs.

use rand::seq::SliceRandom;
use rand::Rng;

const INT_TERMS: [&str; 7] = ["a", "b", "c", "(f a)", "(f b)", "(f (f a))", "(g a b)"];

fn num(v: i64) -> String {
    if v < 0 {
        format!("(- {})", -v)
    } else {
        v.to_string()
    }
}

fn atom<R: Rng>(rng: &mut R) -> String {
    match rng.gen_range(0..6) {
        0 => format!("(p {})", INT_TERMS.choose(rng).unwrap()),
        1 => format!("(= {} {})", INT_TERMS.choose(rng).unwrap(), INT_TERMS.choose(rng).unwrap()),
        _ => {
            let op = ["<=", "<", "=", ">=", ">", "distinct"].choose(rng).unwrap();
            let terms: Vec<String> = (0..rng.gen_range(1..=3))
                .map(|_| format!("(* {} {})", num(rng.gen_range(-3..=3)), INT_TERMS.choose(rng).unwrap()))
                .collect();
            format!("({op} (+ {} 0) {})", terms.join(" "), num(rng.gen_range(-6..=6)))
        }
    }
}

fn literal<R: Rng>(rng: &mut R) -> String {
    let a = atom(rng);
    if rng.gen_bool(0.4) {
        format!("(not {a})")
    } else {
        a
    }
}

/// A ground problem over constants `a b c`, functions `f`, `g` and predicate
/// `p`, with a handful of clause-shaped assertions.
pub fn random_ground_problem<R: Rng>(rng: &mut R) -> String {
    let mut s = String::from(
        "(set-logic QF_UFLIA)\n(declare-fun a () Int)\n(declare-fun b () Int)\n(declare-fun c () Int)\n\
         (declare-fun f (Int) Int)\n(declare-fun g (Int Int) Int)\n(declare-fun p (Int) Bool)\n",
    );
    for _ in 0..rng.gen_range(1..=6) {
        let lits: Vec<String> = (0..rng.gen_range(1..=3)).map(|_| literal(rng)).collect();
        let body = if lits.len() == 1 { lits[0].clone() } else { format!("(or {})", lits.join(" ")) };
        s += &format!("(assert {body})\n");
    }
    s += "(check-sat)\n";
    s
}
