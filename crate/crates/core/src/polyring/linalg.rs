//! Exact linear algebra: fraction-free (Bareiss) elimination over the
//! integers, with rational back-substitution for particular solutions and
//! kernel bases. Pivoting is deterministic: columns left to right, first
//! nonzero row.

use num::{BigInt, BigRational, Integer, One, Zero};

pub struct LinearSystem {
    pub cols: usize,
    /// rows as (coefficients, rhs)
    rows: Vec<(Vec<BigInt>, BigInt)>,
}

impl LinearSystem {
    pub fn new(cols: usize) -> Self {
        LinearSystem { cols, rows: Vec::new() }
    }

    /// Adds an equation with rational coefficients, clearing denominators.
    pub fn add_row(&mut self, coeffs: Vec<BigRational>, rhs: BigRational) {
        debug_assert_eq!(coeffs.len(), self.cols);
        let mut lcm = BigInt::one();
        for c in coeffs.iter().chain(std::iter::once(&rhs)) {
            lcm = lcm.lcm(c.denom());
        }
        let row: Vec<BigInt> = coeffs.iter().map(|c| (c * &lcm).to_integer()).collect();
        let r = (&rhs * &lcm).to_integer();
        self.rows.push((row, r));
    }

    fn echelon(mut self) -> Echelon {
        let cols = self.cols;
        let mut pivot_cols = Vec::new();
        let mut rank = 0usize;
        let mut prev = BigInt::one();
        for c in 0..cols {
            if rank == self.rows.len() {
                break;
            }
            let Some(pr) = (rank..self.rows.len()).find(|&r| !self.rows[r].0[c].is_zero())
            else {
                continue;
            };
            self.rows.swap(rank, pr);
            let pivot = self.rows[rank].0[c].clone();
            let (done, rest) = self.rows.split_at_mut(rank + 1);
            let pivot_row = &done[rank];
            for (row, rhs) in rest.iter_mut() {
                let factor = row[c].clone();
                for j in 0..cols {
                    row[j] = (&row[j] * &pivot - &factor * &pivot_row.0[j]) / &prev;
                }
                *rhs = (&*rhs * &pivot - &factor * &pivot_row.1) / &prev;
            }
            prev = pivot;
            pivot_cols.push(c);
            rank += 1;
        }
        Echelon { cols, rows: self.rows, pivot_cols }
    }

    /// One solution with free variables set to 0, or None when inconsistent.
    pub fn particular_solution(self) -> Option<Vec<BigRational>> {
        let ech = self.echelon();
        ech.check_consistent()?;
        Some(ech.back_substitute(&vec![BigRational::zero(); ech.cols]))
    }

    /// A basis of the homogeneous kernel (rhs ignored).
    pub fn kernel_basis(mut self) -> Vec<Vec<BigRational>> {
        for (_, rhs) in self.rows.iter_mut() {
            *rhs = BigInt::zero();
        }
        let ech = self.echelon();
        let mut basis = Vec::new();
        let pivot_set: std::collections::HashSet<usize> =
            ech.pivot_cols.iter().copied().collect();
        for free in 0..ech.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut assign = vec![BigRational::zero(); ech.cols];
            assign[free] = BigRational::one();
            basis.push(ech.back_substitute(&assign));
        }
        basis
    }
}

struct Echelon {
    cols: usize,
    rows: Vec<(Vec<BigInt>, BigInt)>,
    pivot_cols: Vec<usize>,
}

impl Echelon {
    fn check_consistent(&self) -> Option<()> {
        for (r, (row, rhs)) in self.rows.iter().enumerate() {
            if r >= self.pivot_cols.len() && !rhs.is_zero() && row.iter().all(Zero::is_zero) {
                return None;
            }
        }
        Some(())
    }

    /// Solves pivots bottom-up given values for the free variables.
    fn back_substitute(&self, free_assign: &[BigRational]) -> Vec<BigRational> {
        let mut x = free_assign.to_vec();
        for (r, &pc) in self.pivot_cols.iter().enumerate().rev() {
            let (row, rhs) = &self.rows[r];
            let mut acc = BigRational::from_integer(rhs.clone());
            for j in (pc + 1)..self.cols {
                if !row[j].is_zero() {
                    acc -= BigRational::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[pc] = acc / BigRational::from_integer(row[pc].clone());
        }
        x
    }
}

#[cfg(test)]
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_square_system() {
        // x + 2y = 5, 3x - y = 1  =>  x = 1, y = 2
        let mut sys = LinearSystem::new(2);
        sys.add_row(vec![rat(1, 1), rat(2, 1)], rat(5, 1));
        sys.add_row(vec![rat(3, 1), rat(-1, 1)], rat(1, 1));
        let sol = sys.particular_solution().unwrap();
        assert_eq!(sol, vec![rat(1, 1), rat(2, 1)]);
    }

    #[test]
    fn detects_inconsistency() {
        let mut sys = LinearSystem::new(1);
        sys.add_row(vec![rat(1, 1)], rat(1, 1));
        sys.add_row(vec![rat(1, 1)], rat(2, 1));
        assert!(sys.particular_solution().is_none());
    }

    #[test]
    fn kernel_of_rank_one() {
        // x + y + z = 0: kernel has dimension 2
        let mut sys = LinearSystem::new(3);
        sys.add_row(vec![rat(1, 1), rat(1, 1), rat(1, 1)], rat(0, 1));
        let basis = sys.kernel_basis();
        assert_eq!(basis.len(), 2);
        for v in &basis {
            let sum: BigRational = v.iter().cloned().sum();
            assert!(sum.is_zero());
        }
    }

    #[test]
    fn fractional_input() {
        // (1/2)x = 3/4 => x = 3/2
        let mut sys = LinearSystem::new(1);
        sys.add_row(vec![rat(1, 2)], rat(3, 4));
        assert_eq!(sys.particular_solution().unwrap(), vec![rat(3, 2)]);
    }
}
