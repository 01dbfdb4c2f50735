//! Incremental integer solving of `aᵀy + c = v` systems.
//!
//! The solution set of the rows seen so far is kept as an affine lattice
//! `u = U·w`, where `U` is unimodular, some coordinates of `w` are pinned
//! (one per independent row) and the rest are free. A new row is mapped
//! through `U`; its free part is reduced to a single column by unimodular
//! column operations (extended Euclid), which either pins a new coordinate,
//! proves the row redundant, or proves the system infeasible. This is
//! column-style Hermite reduction done one row at a time.
//!
//! Unknown order inside the lattice is `(c, y₁, …, yₙ)`; putting the intercept
//! first makes a single point fit as a constant function.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiophantineError {
    #[error("row has {got} coefficients, system arity is {expected}")]
    Arity { expected: usize, got: usize },
    #[error("system has no integer solution")]
    Unsat,
}

#[derive(Clone, Debug)]
struct Lattice {
    /// Columns of the unimodular transform, `columns[j][i] = U[i][j]`.
    columns: Vec<Vec<BigInt>>,
    /// Pinned value of each `w` coordinate, `None` while free.
    pinned: Vec<Option<BigInt>>,
}

/// Persistent system of linear Diophantine equations over the unknown slope
/// vector `y ∈ ℤⁿ` and intercept `c ∈ ℤ`.
#[derive(Clone, Debug)]
pub struct EquationSystem {
    arity: usize,
    rows: Vec<(Vec<BigInt>, BigInt)>,
    /// `None` once a row made the system infeasible.
    lattice: Option<Lattice>,
}

impl EquationSystem {
    pub fn new(arity: usize) -> Self {
        let dim = arity + 1;
        let columns = (0..dim)
            .map(|j| (0..dim).map(|i| BigInt::from((i == j) as u8)).collect())
            .collect();
        EquationSystem { arity, rows: Vec::new(), lattice: Some(Lattice { columns, pinned: vec![None; dim] }) }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn rows(&self) -> &[(Vec<BigInt>, BigInt)] {
        &self.rows
    }

    /// Returns a new system that additionally requires `aᵀy + c = v`.
    pub fn push_equation(&self, a: &[BigInt], v: &BigInt) -> Result<EquationSystem, DiophantineError> {
        if a.len() != self.arity {
            return Err(DiophantineError::Arity { expected: self.arity, got: a.len() });
        }
        let mut next = self.clone();
        next.rows.push((a.to_vec(), v.clone()));
        if let Some(lattice) = next.lattice.take() {
            next.lattice = lattice.constrain(a, v);
        }
        Ok(next)
    }

    pub fn is_sat(&self) -> bool {
        self.lattice.is_some()
    }

    /// The canonical solution: free lattice coordinates set to zero.
    pub fn solve(&self) -> Result<(Vec<BigInt>, BigInt), DiophantineError> {
        let lattice = self.lattice.as_ref().ok_or(DiophantineError::Unsat)?;
        let dim = self.arity + 1;
        let mut u = vec![BigInt::zero(); dim];
        for (col, w) in lattice.columns.iter().zip(&lattice.pinned) {
            if let Some(w) = w {
                for (ui, ci) in u.iter_mut().zip(col) {
                    *ui += ci * w;
                }
            }
        }
        let c = u.remove(0);
        Ok((u, c))
    }
}

impl Lattice {
    fn constrain(mut self, a: &[BigInt], v: &BigInt) -> Option<Lattice> {
        // Row over (c, y): intercept coefficient is 1.
        let row: Vec<BigInt> = std::iter::once(BigInt::from(1)).chain(a.iter().cloned()).collect();
        let mut image: Vec<BigInt> = self
            .columns
            .iter()
            .map(|col| col.iter().zip(&row).map(|(u, r)| u * r).sum())
            .collect();
        let mut residual = v.clone();
        for (img, w) in image.iter().zip(&self.pinned) {
            if let Some(w) = w {
                residual -= img * w;
            }
        }
        let free: Vec<usize> = (0..image.len()).filter(|&j| self.pinned[j].is_none()).collect();
        loop {
            let live: Vec<usize> = free.iter().copied().filter(|&j| !image[j].is_zero()).collect();
            let Some(&pivot) = live.iter().min_by(|&&p, &&q| image[p].abs().cmp(&image[q].abs()).then(p.cmp(&q)))
            else {
                // Row is a combination of earlier rows.
                return residual.is_zero().then_some(self);
            };
            if live.len() == 1 {
                let g = &image[pivot];
                if !residual.is_multiple_of(g) {
                    return None;
                }
                self.pinned[pivot] = Some(&residual / g);
                return Some(self);
            }
            for &k in &live {
                if k == pivot {
                    continue;
                }
                let q = &image[k] / &image[pivot];
                let pivot_col = self.columns[pivot].clone();
                for (ck, cp) in self.columns[k].iter_mut().zip(&pivot_col) {
                    *ck -= &q * cp;
                }
                let delta = &q * &image[pivot];
                image[k] -= delta;
            }
        }
    }
}
