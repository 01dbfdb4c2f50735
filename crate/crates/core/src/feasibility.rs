//! Feasibility of separating-hyperplane systems `aᵀy ≥ c` / `aᵀy < c` over
//! integer unknowns `(y, c)`.
//!
//! Every row has the shape `L(y, c) ≥ 0` or `L(y, c) ≤ −1` with `L` linear and
//! homogeneous, so any rational solution scaled by its common denominator is
//! an integer solution. Feasibility is therefore decided exactly by the
//! rational relaxation, which is maintained incrementally.
//!
//! Witnesses are searched with slopes of small L1 norm first: for each radius
//! of a fixed schedule the system is intersected with `‖y‖₁ ≤ R` and a box on
//! `c` that cannot cut off any solution of that radius, and branch-and-bound
//! looks for an integer point. If the schedule runs out, the scaled rational
//! vertex is returned.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::simplex::{branch_and_bound, common_denominator, Budget, Feasibility, IntOutcome, Simplex};

/// L1 radii tried for the slope vector, in order.
pub const SLOPE_RADII: &[u64] = &[0, 1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 64, 128, 256, 512, 1024];

/// Node limit for one bounded branch-and-bound attempt.
const ATTEMPT_NODES: u64 = 4_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FeasibilityError {
    #[error("point has {got} coordinates, system arity is {expected}")]
    Arity { expected: usize, got: usize },
    #[error("system has no integer solution")]
    Unsat,
}

/// One accumulated constraint: `aᵀy ≥ c` when `positive`, else `aᵀy ≤ c − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IneqRow {
    pub point: Vec<BigInt>,
    pub positive: bool,
}

impl IneqRow {
    pub fn holds(&self, slopes: &[BigInt], c: &BigInt) -> bool {
        let dot: BigInt = self.point.iter().zip(slopes).map(|(a, s)| a * s).sum();
        if self.positive {
            dot >= *c
        } else {
            dot < *c
        }
    }
}

/// Persistent inequality system over `(y, c) ∈ ℤⁿ⁺¹`.
#[derive(Clone, Debug)]
pub struct InequalitySystem {
    arity: usize,
    rows: Vec<IneqRow>,
    /// Feasible rational relaxation; `None` once infeasible.
    relaxation: Option<Simplex>,
}

impl InequalitySystem {
    pub fn new(arity: usize) -> Self {
        InequalitySystem { arity, rows: Vec::new(), relaxation: Some(Simplex::new(arity + 1)) }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn rows(&self) -> &[IneqRow] {
        &self.rows
    }

    /// Returns a new system with the row for point `a`: `aᵀy ≥ c` for a
    /// positive point, `aᵀy < c` for a negative one.
    pub fn push_ineq(&self, a: &[BigInt], positive: bool) -> Result<InequalitySystem, FeasibilityError> {
        if a.len() != self.arity {
            return Err(FeasibilityError::Arity { expected: self.arity, got: a.len() });
        }
        let mut next = self.clone();
        next.rows.push(IneqRow { point: a.to_vec(), positive });
        if let Some(mut simplex) = next.relaxation.take() {
            add_point_row(&mut simplex, self.arity, a, positive);
            if simplex.check() == Feasibility::Feasible {
                next.relaxation = Some(simplex);
            }
        }
        Ok(next)
    }

    pub fn is_sat(&self) -> bool {
        self.relaxation.is_some()
    }

    /// An integer witness `(s, c)` satisfying every row.
    pub fn solve(&self) -> Result<(Vec<BigInt>, BigInt), FeasibilityError> {
        let relaxation = self.relaxation.as_ref().ok_or(FeasibilityError::Unsat)?;
        let max_coord = self
            .rows
            .iter()
            .flat_map(|r| r.point.iter())
            .map(|a| a.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        for &radius in SLOPE_RADII {
            if let Some(w) = self.solve_within(&BigInt::from(radius), &max_coord) {
                return Ok(w);
            }
        }
        // Scale the rational vertex; valid because every row is homogeneous.
        let values = relaxation.values();
        let scale = BigRational::from_integer(common_denominator(values));
        let mut ints: Vec<BigInt> = values.iter().map(|q| (q * &scale).to_integer()).collect();
        let c = ints.pop().expect("intercept column");
        Ok((ints, c))
    }

    /// Integer witness with `‖s‖₁ ≤ radius`, if one exists and is found within
    /// the node limit.
    fn solve_within(&self, radius: &BigInt, max_coord: &BigInt) -> Option<(Vec<BigInt>, BigInt)> {
        let n = self.arity;
        // Variables: y₀..yₙ₋₁, c, t₀..tₙ₋₁ with tᵢ ≥ |yᵢ|.
        let mut simplex = Simplex::new(2 * n + 1);
        for row in &self.rows {
            add_point_row(&mut simplex, n, &row.point, row.positive);
        }
        let one = BigInt::from(1);
        for i in 0..n {
            simplex.set_lower_int(i, &-radius);
            simplex.set_upper_int(i, radius);
            let t = n + 1 + i;
            simplex.set_lower_int(t, &BigInt::zero());
            simplex.set_upper_int(t, radius);
            let plus = simplex.add_row(&[(t, one.clone()), (i, one.clone())]);
            simplex.set_lower_int(plus, &BigInt::zero());
            let minus = simplex.add_row(&[(t, one.clone()), (i, -&one)]);
            simplex.set_lower_int(minus, &BigInt::zero());
        }
        if n > 0 {
            let norm: Vec<(usize, BigInt)> = (0..n).map(|i| (n + 1 + i, one.clone())).collect();
            let r = simplex.add_row(&norm);
            simplex.set_upper_int(r, radius);
        }
        let c_box = radius * max_coord + &one;
        simplex.set_lower_int(n, &-&c_box);
        simplex.set_upper_int(n, &c_box);
        match branch_and_bound(simplex, &mut Budget::new(ATTEMPT_NODES, None)) {
            IntOutcome::Sat(mut v) => {
                v.truncate(n + 1);
                let c = v.pop().unwrap();
                Some((v, c))
            }
            IntOutcome::Unsat | IntOutcome::Unknown => None,
        }
    }
}

/// Adds `aᵀy − c ≥ 0` (positive) or `aᵀy − c ≤ −1` (negative); `y` occupies
/// variables `0..n` and `c` is variable `n`.
fn add_point_row(simplex: &mut Simplex, n: usize, a: &[BigInt], positive: bool) -> usize {
    let mut coeffs: Vec<(usize, BigInt)> = a
        .iter()
        .enumerate()
        .filter(|(_, k)| !k.is_zero())
        .map(|(i, k)| (i, k.clone()))
        .collect();
    coeffs.push((n, BigInt::from(-1)));
    let var = simplex.add_row(&coeffs);
    if positive {
        simplex.set_lower_int(var, &BigInt::zero());
    } else {
        simplex.set_upper_int(var, &BigInt::from(-1));
    }
    var
}
