//! Exact rational simplex over bounded variables, with branch-and-bound for
//! integrality.
//!
//! The tableau follows the general-simplex formulation used in SMT solvers:
//! every constraint row introduces a slack variable equal to a linear
//! combination of the original variables, and all constraints become bounds.
//! The tableau is `rows × nonbasic`, so its width stays at the number of
//! original variables no matter how many rows are added. Pivoting uses
//! Bland's rule (smallest variable index), which guarantees termination.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Basic(usize),
    Nonbasic(usize),
}

#[derive(Clone, Debug)]
pub struct Simplex {
    lower: Vec<Option<BigRational>>,
    upper: Vec<Option<BigRational>>,
    value: Vec<BigRational>,
    slot: Vec<Slot>,
    /// `rows[r][k]`: coefficient of `nonbasic[k]` in the definition of `basic[r]`.
    rows: Vec<Vec<BigRational>>,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    num_original: usize,
    /// Some variable has crossing bounds.
    inconsistent: bool,
}

/// Result of a feasibility check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    Infeasible,
}

impl Simplex {
    /// A problem over `n` unbounded variables with no rows.
    pub fn new(n: usize) -> Self {
        Simplex {
            lower: vec![None; n],
            upper: vec![None; n],
            value: vec![BigRational::zero(); n],
            slot: (0..n).map(Slot::Nonbasic).collect(),
            rows: Vec::new(),
            basic: Vec::new(),
            nonbasic: (0..n).collect(),
            num_original: n,
            inconsistent: false,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.value.len()
    }

    pub fn num_original(&self) -> usize {
        self.num_original
    }

    /// Adds a slack variable `s = Σ coeffs` and returns its index.
    pub fn add_row(&mut self, coeffs: &[(usize, BigInt)]) -> usize {
        let var = self.value.len();
        let mut row = vec![BigRational::zero(); self.nonbasic.len()];
        let mut val = BigRational::zero();
        for (x, k) in coeffs {
            let k = BigRational::from_integer(k.clone());
            val += &k * &self.value[*x];
            match self.slot[*x] {
                Slot::Nonbasic(col) => row[col] += &k,
                Slot::Basic(r) => {
                    for (acc, c) in row.iter_mut().zip(&self.rows[r]) {
                        *acc += &k * c;
                    }
                }
            }
        }
        self.lower.push(None);
        self.upper.push(None);
        self.value.push(val);
        self.slot.push(Slot::Basic(self.rows.len()));
        self.rows.push(row);
        self.basic.push(var);
        var
    }

    pub fn value(&self, var: usize) -> &BigRational {
        &self.value[var]
    }

    pub fn values(&self) -> &[BigRational] {
        &self.value[..self.num_original]
    }

    /// Tightens the lower bound of `var` to `bound` (never loosens it).
    pub fn set_lower(&mut self, var: usize, bound: BigRational) {
        if self.lower[var].as_ref().is_some_and(|l| *l >= bound) {
            return;
        }
        self.lower[var] = Some(bound.clone());
        if self.upper[var].as_ref().is_some_and(|u| *u < bound) {
            self.inconsistent = true;
        }
        if let Slot::Nonbasic(_) = self.slot[var] {
            if self.value[var] < bound {
                self.update_nonbasic(var, bound);
            }
        }
    }

    /// Tightens the upper bound of `var` to `bound` (never loosens it).
    pub fn set_upper(&mut self, var: usize, bound: BigRational) {
        if self.upper[var].as_ref().is_some_and(|u| *u <= bound) {
            return;
        }
        self.upper[var] = Some(bound.clone());
        if self.lower[var].as_ref().is_some_and(|l| *l > bound) {
            self.inconsistent = true;
        }
        if let Slot::Nonbasic(_) = self.slot[var] {
            if self.value[var] > bound {
                self.update_nonbasic(var, bound);
            }
        }
    }

    pub fn set_lower_int(&mut self, var: usize, bound: &BigInt) {
        self.set_lower(var, BigRational::from_integer(bound.clone()));
    }

    pub fn set_upper_int(&mut self, var: usize, bound: &BigInt) {
        self.set_upper(var, BigRational::from_integer(bound.clone()));
    }

    fn update_nonbasic(&mut self, var: usize, target: BigRational) {
        let Slot::Nonbasic(col) = self.slot[var] else { unreachable!() };
        let delta = &target - &self.value[var];
        for (r, &b) in self.basic.iter().enumerate() {
            let k = &self.rows[r][col];
            if !k.is_zero() {
                self.value[b] += k * &delta;
            }
        }
        self.value[var] = target;
    }

    fn below_lower(&self, var: usize) -> bool {
        self.lower[var].as_ref().is_some_and(|l| self.value[var] < *l)
    }

    fn above_upper(&self, var: usize) -> bool {
        self.upper[var].as_ref().is_some_and(|u| self.value[var] > *u)
    }

    fn can_increase(&self, var: usize) -> bool {
        self.upper[var].as_ref().is_none_or(|u| self.value[var] < *u)
    }

    fn can_decrease(&self, var: usize) -> bool {
        self.lower[var].as_ref().is_none_or(|l| self.value[var] > *l)
    }

    /// Restores all bounds by pivoting, or proves them inconsistent.
    pub fn check(&mut self) -> Feasibility {
        if self.inconsistent {
            return Feasibility::Infeasible;
        }
        loop {
            let violated = self
                .basic
                .iter()
                .enumerate()
                .filter(|&(_, &b)| self.below_lower(b) || self.above_upper(b))
                .min_by_key(|&(_, &b)| b)
                .map(|(r, &b)| (r, b));
            let Some((row, var)) = violated else {
                return Feasibility::Feasible;
            };
            let increase = self.below_lower(var);
            let entering = self
                .nonbasic
                .iter()
                .enumerate()
                .filter(|&(col, &nb)| {
                    let k = &self.rows[row][col];
                    if k.is_zero() {
                        return false;
                    }
                    if increase == k.is_positive() {
                        self.can_increase(nb)
                    } else {
                        self.can_decrease(nb)
                    }
                })
                .min_by_key(|&(_, &nb)| nb)
                .map(|(col, _)| col);
            let Some(col) = entering else {
                return Feasibility::Infeasible;
            };
            let target = if increase {
                self.lower[var].clone().unwrap()
            } else {
                self.upper[var].clone().unwrap()
            };
            self.pivot_and_update(row, col, target);
        }
    }

    fn pivot_and_update(&mut self, row: usize, col: usize, target: BigRational) {
        let leaving = self.basic[row];
        let entering = self.nonbasic[col];
        let a = self.rows[row][col].clone();
        let theta = (&target - &self.value[leaving]) / &a;
        self.value[leaving] = target;
        self.value[entering] += &theta;
        for (r, &b) in self.basic.iter().enumerate() {
            if r != row {
                let k = &self.rows[r][col];
                if !k.is_zero() {
                    self.value[b] += k * &theta;
                }
            }
        }

        // Solve the pivot row for the entering variable.
        let inv = a.recip();
        let mut pivot_row = std::mem::take(&mut self.rows[row]);
        for (k, c) in pivot_row.iter_mut().enumerate() {
            *c = if k == col { inv.clone() } else { -(&*c) * &inv };
        }
        for (r, other) in self.rows.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let factor = std::mem::take(&mut other[col]);
            if factor.is_zero() {
                continue;
            }
            for (k, c) in other.iter_mut().enumerate() {
                let p = &pivot_row[k];
                if !p.is_zero() {
                    *c += &factor * p;
                }
            }
        }
        self.rows[row] = pivot_row;
        self.basic[row] = entering;
        self.nonbasic[col] = leaving;
        self.slot[entering] = Slot::Basic(row);
        self.slot[leaving] = Slot::Nonbasic(col);
    }
}

/// Work limits for branch-and-bound.
#[derive(Clone, Debug)]
pub struct Budget {
    pub nodes_left: u64,
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn new(nodes: u64, deadline: Option<Instant>) -> Self {
        Budget { nodes_left: nodes, deadline }
    }

    fn tick(&mut self) -> bool {
        if self.nodes_left == 0 || self.deadline.is_some_and(|d| Instant::now() >= d) {
            return false;
        }
        self.nodes_left -= 1;
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntOutcome {
    Sat(Vec<BigInt>),
    Unsat,
    /// Budget or deadline exhausted before a verdict.
    Unknown,
}

pub fn is_integral(q: &BigRational) -> bool {
    q.denom().is_one()
}

/// Depth-first branch-and-bound on the original variables: branch on the
/// lowest-index fractional variable, lower branch first.
pub fn branch_and_bound(simplex: Simplex, budget: &mut Budget) -> IntOutcome {
    let mut stack = vec![simplex];
    while let Some(mut node) = stack.pop() {
        if !budget.tick() {
            return IntOutcome::Unknown;
        }
        if node.check() == Feasibility::Infeasible {
            continue;
        }
        let fractional = (0..node.num_original).find(|&v| !is_integral(&node.value[v]));
        let Some(var) = fractional else {
            let values = node.values().iter().map(|q| q.to_integer()).collect();
            return IntOutcome::Sat(values);
        };
        let floor = node.value[var].floor().to_integer();
        let mut high = node.clone();
        high.set_lower_int(var, &(&floor + BigInt::one()));
        node.set_upper_int(var, &floor);
        // Stack order: the lower branch is explored first.
        stack.push(high);
        stack.push(node);
    }
    IntOutcome::Unsat
}

/// Box radii for [`integer_search`].
const BOX_RADII: [u32; 4] = [4, 32, 256, 2048];

/// Branch-and-bound that falls back to boxed searches when the unboxed one
/// runs out of budget.
///
/// Depth-first branching can chase an unbounded direction forever; inside a
/// box every search terminates, so small solutions are still found. A quarter
/// of the budget goes to the unboxed search, which alone can prove `Unsat`;
/// the rest is shared by boxes of growing radius.
pub fn integer_search(simplex: Simplex, budget: &mut Budget) -> IntOutcome {
    let total = budget.nodes_left;
    let mut first = Budget::new(total / 4, budget.deadline);
    let outcome = branch_and_bound(simplex.clone(), &mut first);
    budget.nodes_left -= total / 4 - first.nodes_left;
    if outcome != IntOutcome::Unknown {
        return outcome;
    }
    for (i, radius) in BOX_RADII.iter().enumerate() {
        let share = budget.nodes_left / (BOX_RADII.len() - i) as u64;
        let mut part = Budget::new(share, budget.deadline);
        let mut boxed = simplex.clone();
        let r = BigInt::from(*radius);
        for v in 0..boxed.num_original {
            boxed.set_lower_int(v, &-&r);
            boxed.set_upper_int(v, &r);
        }
        let outcome = branch_and_bound(boxed, &mut part);
        budget.nodes_left -= share - part.nodes_left;
        if let IntOutcome::Sat(values) = outcome {
            return IntOutcome::Sat(values);
        }
    }
    IntOutcome::Unknown
}

/// Least common multiple of the denominators.
pub fn common_denominator(values: &[BigRational]) -> BigInt {
    values.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn boxes_rescue_unbounded_equalities() {
        // -2a + 3b - 3c = 2 and 2d <= 0: unbounded directions, small solutions.
        let mut s = Simplex::new(4);
        let r = s.add_row(&[(0, b(-2)), (1, b(3)), (2, b(-3))]);
        s.set_lower_int(r, &b(2));
        s.set_upper_int(r, &b(2));
        s.set_upper_int(3, &b(0));
        let IntOutcome::Sat(v) = integer_search(s, &mut Budget::new(2_000, None)) else { panic!() };
        assert_eq!(-2 * &v[0] + 3 * &v[1] - 3 * &v[2], b(2));
        let mut s = Simplex::new(1);
        let r = s.add_row(&[(0, b(2))]);
        s.set_lower_int(r, &b(1));
        s.set_upper_int(r, &b(1));
        assert_eq!(integer_search(s, &mut Budget::new(100, None)), IntOutcome::Unsat);
    }

    #[test]
    fn crossing_bounds_on_nonbasic() {
        let mut s = Simplex::new(1);
        s.set_lower_int(0, &b(5));
        s.set_upper_int(0, &b(3));
        assert_eq!(s.check(), Feasibility::Infeasible);
    }

    #[test]
    fn simple_bounds() {
        // x + y ≥ 3, x ≤ 1, y ≤ 1 is infeasible
        let mut s = Simplex::new(2);
        let r = s.add_row(&[(0, b(1)), (1, b(1))]);
        s.set_lower_int(r, &b(3));
        s.set_upper_int(0, &b(1));
        s.set_upper_int(1, &b(1));
        assert_eq!(s.check(), Feasibility::Infeasible);
    }

    #[test]
    fn feasible_keeps_zero_defaults() {
        // x ≥ 2, y unconstrained: y stays 0.
        let mut s = Simplex::new(2);
        let r = s.add_row(&[(0, b(1)), (1, b(0))]);
        s.set_lower_int(r, &b(2));
        assert_eq!(s.check(), Feasibility::Feasible);
        assert_eq!(s.values()[0], BigRational::from_integer(b(2)));
        assert!(s.values()[1].is_zero());
    }

    #[test]
    fn rows_added_after_pivots() {
        let mut s = Simplex::new(2);
        let r1 = s.add_row(&[(0, b(1)), (1, b(1))]);
        s.set_lower_int(r1, &b(4));
        assert_eq!(s.check(), Feasibility::Feasible);
        let r2 = s.add_row(&[(0, b(1)), (1, b(-1))]);
        s.set_lower_int(r2, &b(2));
        s.set_upper_int(r2, &b(2));
        assert_eq!(s.check(), Feasibility::Feasible);
        let v: Vec<_> = s.values().to_vec();
        assert_eq!(&v[0] - &v[1], BigRational::from_integer(b(2)));
        assert!(&v[0] + &v[1] >= BigRational::from_integer(b(4)));
    }

    #[test]
    fn integer_gap() {
        // 2x = 2y + 1 is rationally feasible but has no integer solution.
        let mut s = Simplex::new(2);
        let r = s.add_row(&[(0, b(2)), (1, b(-2))]);
        s.set_lower_int(r, &b(1));
        s.set_upper_int(r, &b(1));
        for v in 0..2 {
            s.set_lower_int(v, &b(-5));
            s.set_upper_int(v, &b(5));
        }
        assert_eq!(branch_and_bound(s, &mut Budget::new(10_000, None)), IntOutcome::Unsat);
    }

    #[test]
    fn integer_point_found() {
        // 3x + 2y = 7, x, y ≥ 0  →  (1, 2)
        let mut s = Simplex::new(2);
        let r = s.add_row(&[(0, b(3)), (1, b(2))]);
        s.set_lower_int(r, &b(7));
        s.set_upper_int(r, &b(7));
        s.set_lower_int(0, &b(0));
        s.set_lower_int(1, &b(0));
        match branch_and_bound(s, &mut Budget::new(10_000, None)) {
            IntOutcome::Sat(v) => assert_eq!(b(3) * &v[0] + b(2) * &v[1], b(7)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn budget_exhaustion_is_unknown() {
        let mut s = Simplex::new(2);
        let r = s.add_row(&[(0, b(2)), (1, b(-2))]);
        s.set_lower_int(r, &b(1));
        s.set_upper_int(r, &b(1));
        assert_eq!(branch_and_bound(s, &mut Budget::new(50, None)), IntOutcome::Unknown);
    }
}
