use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major integer matrix with at least one row and one column.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<BigInt>>", into = "Vec<Vec<BigInt>>")]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::Dimension("matrix needs at least one row".into()));
        }
        let n = rows[0].len();
        if n == 0 {
            return Err(Error::Dimension("matrix needs at least one column".into()));
        }
        let mut data = Vec::with_capacity(m * n);
        for (j, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!(
                    "row {j} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(IntMatrix {
            rows: m,
            cols: n,
            data,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigInt::from(1);
        }
        IntMatrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, j: usize, i: usize) -> &BigInt {
        &self.data[j * self.cols + i]
    }

    /// Row `j`, written a^(j).
    pub fn row(&self, j: usize) -> &[BigInt] {
        &self.data[j * self.cols..(j + 1) * self.cols]
    }

    /// Column `i`, written A_i.
    pub fn column(&self, i: usize) -> Vec<BigInt> {
        (0..self.rows).map(|j| self.get(j, i).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|j| self.row(j).to_vec()).collect()
    }

    /// Largest absolute entry, Δ.
    pub fn max_abs(&self) -> BigInt {
        self.data
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn row_l1(&self, j: usize) -> BigInt {
        self.row(j).iter().map(|v| v.abs()).sum()
    }

    pub fn row_l2_squared(&self, j: usize) -> BigInt {
        self.row(j).iter().map(|v| v * v).sum()
    }

    pub fn col_l1(&self, i: usize) -> BigInt {
        (0..self.rows).map(|j| self.get(j, i).abs()).sum()
    }

    /// The submatrix `A[S]` keeping the listed columns in order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        if cols.is_empty() {
            return Err(Error::Invalid("empty column selection".into()));
        }
        if let Some(&bad) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(Error::Dimension(format!(
                "column {bad} out of range for {} columns",
                self.cols
            )));
        }
        let rows = (0..self.rows)
            .map(|j| cols.iter().map(|&i| self.get(j, i).clone()).collect())
            .collect();
        Self::from_rows(rows)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|&j| self.row(j).to_vec()).collect())
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|j| self.row(j).iter().zip(x).map(|(a, v)| a * v).sum())
            .collect())
    }

    /// The Gram matrix `A Aᵀ`.
    pub fn gram(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|p| {
                (0..self.rows)
                    .map(|q| {
                        self.row(p)
                            .iter()
                            .zip(self.row(q))
                            .map(|(a, b)| a * b)
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }

    /// `true` when every entry of column `i` has the same strict sign or is zero.
    pub fn column_sign_uniform(&self, i: usize) -> bool {
        let col = self.column(i);
        col.iter().all(|v| !v.is_negative()) || col.iter().all(|v| !v.is_positive())
    }
}

impl TryFrom<Vec<Vec<BigInt>>> for IntMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        IntMatrix::from_rows(rows)
    }
}

impl From<IntMatrix> for Vec<Vec<BigInt>> {
    fn from(m: IntMatrix) -> Self {
        m.to_rows()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.rows {
            let row: Vec<String> = self.row(j).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}
