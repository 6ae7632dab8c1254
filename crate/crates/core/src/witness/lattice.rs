//! Integer row echelon form for subgroups of `ℤᵈ`.

use crate::error::{Error, Result};

fn overflow() -> Error {
    Error::PreconditionFailed("lattice arithmetic overflow".into())
}

/// Rows in echelon form: row `i` has its first nonzero entry (positive) at
/// `pivots[i]`, strictly increasing in `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    rows: Vec<Vec<i128>>,
    pivots: Vec<usize>,
}

fn axpy(target: &mut [i128], q: i128, row: &[i128]) -> Result<()> {
    for (t, &r) in target.iter_mut().zip(row) {
        *t = q.checked_mul(r).and_then(|p| t.checked_sub(p)).ok_or_else(overflow)?;
    }
    Ok(())
}

impl Lattice {
    pub fn new(dim: usize, generators: &[Vec<i64>]) -> Result<Self> {
        let mut pending: Vec<Vec<i128>> = generators
            .iter()
            .map(|v| v.iter().map(|&x| i128::from(x)).collect::<Vec<_>>())
            .filter(|v| v.iter().any(|&x| x != 0))
            .collect();
        let (mut rows, mut pivots) = (Vec::new(), Vec::new());
        for col in 0..dim {
            loop {
                let live: Vec<usize> = (0..pending.len()).filter(|&i| pending[i][col] != 0).collect();
                if live.len() <= 1 {
                    break;
                }
                let best = *live.iter().min_by_key(|&&i| pending[i][col].unsigned_abs()).unwrap();
                let pivot_row = pending[best].clone();
                for &i in &live {
                    if i != best {
                        let q = pending[i][col].div_euclid(pivot_row[col]);
                        axpy(&mut pending[i], q, &pivot_row)?;
                    }
                }
            }
            if let Some(i) = pending.iter().position(|v| v[col] != 0) {
                let mut row = pending.swap_remove(i);
                if row[col] < 0 {
                    row.iter_mut().for_each(|x| *x = -*x);
                }
                rows.push(row);
                pivots.push(col);
            }
            pending.retain(|v| v.iter().any(|&x| x != 0));
        }
        Ok(Self { dim, rows, pivots })
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, v: &[i64]) -> Result<bool> {
        if v.len() != self.dim {
            return Ok(false);
        }
        let mut rest: Vec<i128> = v.iter().map(|&x| i128::from(x)).collect();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if rest[..p].iter().any(|&x| x != 0) {
                return Ok(false);
            }
            if rest[p] % row[p] != 0 {
                return Ok(false);
            }
            let q = rest[p] / row[p];
            axpy(&mut rest, q, row)?;
        }
        Ok(rest.iter().all(|&x| x == 0))
    }
}
