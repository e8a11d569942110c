//! Dense matrices over Q_p and valuation-pivoted Gaussian elimination.

use num_rational::BigRational;

use super::number::{power_of_prime, PAdic, PrecisionPolicy, Prime};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicMatrix {
    prime: Prime,
    rows: usize,
    cols: usize,
    entries: Vec<PAdic>,
}

impl PAdicMatrix {
    /// Row-major construction; every entry must share `prime`.
    pub fn new(prime: Prime, rows: usize, cols: usize, entries: Vec<PAdic>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidConfig("matrix dimensions must be positive".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        if let Some(bad) = entries.iter().find(|e| e.prime() != prime) {
            return Err(Error::PrimeMismatch {
                left: prime.get(),
                right: bad.prime().get(),
            });
        }
        Ok(PAdicMatrix {
            prime,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(
        prime: Prime,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> PAdic,
    ) -> Result<Self> {
        let entries = (0..rows * cols).map(|i| f(i / cols, i % cols)).collect();
        PAdicMatrix::new(prime, rows, cols, entries)
    }

    pub fn identity(prime: Prime, n: usize, policy: PrecisionPolicy) -> Result<Self> {
        PAdicMatrix::from_fn(prime, n, n, |r, c| {
            PAdic::from_integer((r == c) as i64, prime, policy)
        })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &PAdic {
        &self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[PAdic] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<PAdic> {
        (0..self.rows).map(|r| self.get(r, col).clone()).collect()
    }

    pub fn mul(&self, other: &PAdicMatrix) -> Result<PAdicMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: other.rows,
            });
        }
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch {
                left: self.prime.get(),
                right: other.prime.get(),
            });
        }
        PAdicMatrix::from_fn(self.prime, self.rows, other.cols, |r, c| {
            dot(self.row(r), (0..self.cols).map(|k| other.get(k, c)), self.prime)
        })
    }

    pub fn mul_vec(&self, v: &[PAdic]) -> Result<Vec<PAdic>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: v.len(),
            });
        }
        if let Some(bad) = v.iter().find(|e| e.prime() != self.prime) {
            return Err(Error::PrimeMismatch {
                left: self.prime.get(),
                right: bad.prime().get(),
            });
        }
        Ok((0..self.rows)
            .map(|r| dot(self.row(r), v.iter(), self.prime))
            .collect())
    }

    fn require_square(&self) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                actual: self.cols,
            });
        }
        Ok(())
    }

    fn to_rows(&self) -> Vec<Vec<PAdic>> {
        self.entries.chunks(self.cols).map(|r| r.to_vec()).collect()
    }

    /// Solves `self * w = b` by Gaussian elimination with maximum-norm pivoting.
    pub fn solve(&self, b: &[PAdic]) -> Result<Vec<PAdic>> {
        self.require_square()?;
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                actual: b.len(),
            });
        }
        if let Some(bad) = b.iter().find(|e| e.prime() != self.prime) {
            return Err(Error::PrimeMismatch {
                left: self.prime.get(),
                right: bad.prime().get(),
            });
        }
        let mut m = self.to_rows();
        let mut rhs = b.to_vec();
        eliminate(&mut m, Some(&mut rhs))?;

        let n = self.rows;
        let mut w = vec![PAdic::exact_zero(self.prime); n];
        for i in (0..n).rev() {
            let mut acc = rhs[i].clone();
            for j in i + 1..n {
                acc = &acc - &(&m[i][j] * &w[j]);
            }
            w[i] = acc.checked_div(&m[i][i])?;
        }
        Ok(w)
    }

    /// Valuation of the determinant: the sum of pivot valuations.
    pub fn det_valuation(&self) -> Result<i64> {
        self.require_square()?;
        let mut m = self.to_rows();
        let pivots = eliminate(&mut m, None)?;
        Ok(pivots.iter().sum())
    }

    /// `|det A|_p` as an exact rational.
    pub fn det_norm(&self) -> Result<BigRational> {
        Ok(power_of_prime(self.prime, -self.det_valuation()?))
    }

    /// The determinant itself, as the signed product of the pivots.
    pub fn determinant(&self) -> Result<PAdic> {
        self.require_square()?;
        let mut m = self.to_rows();
        let (swaps, _) = eliminate_tracking(&mut m, None)?;
        let mut det = m[0][0].clone();
        for (i, row) in m.iter().enumerate().skip(1) {
            det = &det * &row[i];
        }
        if swaps % 2 == 1 {
            det = -det;
        }
        Ok(det)
    }
}

fn dot<'a>(row: &[PAdic], col: impl Iterator<Item = &'a PAdic>, prime: Prime) -> PAdic {
    row.iter()
        .zip(col)
        .fold(PAdic::exact_zero(prime), |acc, (a, b)| &acc + &(a * b))
}

/// Forward elimination in place; returns the pivot valuations.
fn eliminate(m: &mut [Vec<PAdic>], rhs: Option<&mut Vec<PAdic>>) -> Result<Vec<i64>> {
    eliminate_tracking(m, rhs).map(|(_, pivots)| pivots)
}

fn eliminate_tracking(
    m: &mut [Vec<PAdic>],
    mut rhs: Option<&mut Vec<PAdic>>,
) -> Result<(usize, Vec<i64>)> {
    let n = m.len();
    let mut swaps = 0;
    let mut pivots = Vec::with_capacity(n);
    for col in 0..n {
        // minimum valuation = maximum norm; ties go to the lowest row
        let pivot_row = (col..n)
            .filter_map(|r| m[r][col].valuation().map(|v| (v, r)))
            .min()
            .map(|(_, r)| r)
            .ok_or(Error::Singular { column: col })?;
        if pivot_row != col {
            m.swap(pivot_row, col);
            if let Some(b) = rhs.as_deref_mut() {
                b.swap(pivot_row, col);
            }
            swaps += 1;
        }
        let pivot = m[col][col].clone();
        pivots.push(pivot.valuation().expect("pivot is nonzero"));
        for r in col + 1..n {
            if m[r][col].is_exact_zero() {
                continue;
            }
            let factor = m[r][col].checked_div(&pivot)?;
            let (upper, lower) = m.split_at_mut(r);
            let pivot_row = &upper[col];
            for c in col + 1..n {
                let t = &factor * &pivot_row[c];
                lower[0][c] = &lower[0][c] - &t;
            }
            lower[0][col] = PAdic::exact_zero(pivot.prime());
            if let Some(b) = rhs.as_deref_mut() {
                let t = &factor * &b[col];
                b[r] = &b[r] - &t;
            }
        }
    }
    Ok((swaps, pivots))
}
