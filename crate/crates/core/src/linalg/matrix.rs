use std::fmt;

use super::field::Fp;
use crate::error::{Error, Result};

/// A vector over F_p, stored as residues in `[0, p)`.
pub type FpVector = Vec<u32>;

/// Dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    field: Fp,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix(p={}, {}x{})", self.field.p(), self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

impl FpMatrix {
    pub fn new(field: Fp, rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for a {}x{} matrix", entries.len(), rows, cols)));
        }
        if let Some(&e) = entries.iter().find(|&&e| e >= field.p()) {
            return Err(Error::Dimension(format!("entry {e} not reduced mod {}", field.p())));
        }
        Ok(FpMatrix { field, rows, cols, entries })
    }

    pub fn zeros(field: Fp, rows: usize, cols: usize) -> Self {
        FpMatrix { field, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(field: Fp, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    /// Build from rows; every row must have length `cols`.
    pub fn from_rows(field: Fp, cols: usize, rows: &[FpVector]) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row of length {} in {} columns", r.len(), cols)));
            }
            entries.extend_from_slice(r);
        }
        Self::new(field, rows.len(), cols, entries)
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: Fp, rows: usize, cols: &[FpVector]) -> Result<Self> {
        Ok(Self::from_rows(field, rows, cols)?.transpose())
    }

    /// Reduce arbitrary signed integers mod p.
    pub fn from_i64(field: Fp, rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        Self::new(field, rows, cols, entries.iter().map(|&e| field.reduce(e)).collect())
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.entries[i * self.cols + j] = v % self.field.p();
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.p() != other.p() {
            return Err(Error::ModulusMismatch(self.p(), other.p()));
        }
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let (lo, hi) = (i * other.cols, (i + 1) * other.cols);
                f.axpy(&mut out.entries[lo..hi], a, other.row(k));
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[u32]) -> Result<FpVector> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        let f = self.field;
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))).collect())
    }

    /// Reduced row echelon form together with the pivot column of each
    /// nonzero row.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, piv);
            let inv = f.inv(m.get(r, c));
            let cols = m.cols;
            f.scale(&mut m.entries[r * cols..(r + 1) * cols], inv);
            let pivot_row = m.row(r).to_vec();
            for i in 0..m.rows {
                if i != r {
                    let a = m.get(i, c);
                    if a != 0 {
                        f.axpy(&mut m.entries[i * cols..(i + 1) * cols], f.neg(a), &pivot_row);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn image_dim(&self) -> usize {
        self.rank()
    }

    /// Basis of the right null space `{v : M v = 0}`, one vector per free
    /// column, in increasing order of free column.
    pub fn kernel_basis(&self) -> Vec<FpVector> {
        let f = self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0; self.cols];
                v[free] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(i, free));
                }
                v
            })
            .collect()
    }
}

/// `ambient - sub`; fails when the subspace claims to be larger than the
/// space containing it.
pub fn quotient_dim(ambient: usize, sub: usize) -> Result<usize> {
    ambient.checked_sub(sub).ok_or(Error::QuotientTooLarge { ambient, sub })
}
