//! Dense exact matrices over the scalar ring.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{Ring, Scalar, ScalarJson};

#[derive(Clone, Debug)]
pub struct Matrix {
    ring: Arc<Ring>,
    rows: Vec<Vec<Scalar>>,
    cols: usize,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Matrix) -> bool {
        self.cols == other.cols && self.rows == other.rows
    }
}

impl Eq for Matrix {}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<ScalarJson>>,
}

impl Matrix {
    pub fn from_rows(ring: &Arc<Ring>, rows: Vec<Vec<Scalar>>) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix { ring: ring.clone(), rows, cols }
    }

    pub fn zeros(ring: &Arc<Ring>, n: usize, m: usize) -> Matrix {
        Matrix { ring: ring.clone(), rows: vec![vec![Scalar::zero(ring); m]; n], cols: m }
    }

    pub fn identity(ring: &Arc<Ring>, n: usize) -> Matrix {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.rows[i][i] = Scalar::one(ring);
        }
        m
    }

    pub fn diagonal(ring: &Arc<Ring>, d: Vec<Scalar>) -> Matrix {
        let n = d.len();
        let mut m = Matrix::zeros(ring, n, n);
        for (i, x) in d.into_iter().enumerate() {
            m.rows[i][i] = x;
        }
        m
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.rows[i][j] = x;
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.nrows() {
            return Err(Error::Internal(format!(
                "shape mismatch {}x{} * {}x{}",
                self.nrows(),
                self.cols,
                other.nrows(),
                other.cols
            )));
        }
        let ring = &self.ring;
        let rows: Vec<Vec<Scalar>> = self
            .rows
            .par_iter()
            .map(|row| {
                let mut out = vec![Scalar::zero(ring); other.cols];
                for (k, x) in row.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in other.rows[k].iter().enumerate() {
                        if !y.is_zero() {
                            out[j] += &(x * y);
                        }
                    }
                }
                out
            })
            .collect();
        Ok(Matrix { ring: ring.clone(), rows, cols: other.cols })
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.rows
            .iter()
            .map(|row| {
                let mut acc = Scalar::zero(&self.ring);
                for (x, y) in row.iter().zip(v) {
                    if !x.is_zero() && !y.is_zero() {
                        acc += &(x * y);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let rows = self.rows.iter().map(|r| r.iter().map(|x| x * s).collect()).collect();
        Matrix { ring: self.ring.clone(), rows, cols: self.cols }
    }

    pub fn transpose(&self) -> Matrix {
        let rows = (0..self.cols).map(|j| self.rows.iter().map(|r| r[j].clone()).collect()).collect();
        Matrix { ring: self.ring.clone(), rows, cols: self.nrows() }
    }

    pub fn trace(&self) -> Scalar {
        let mut acc = Scalar::zero(&self.ring);
        for i in 0..self.nrows().min(self.cols) {
            acc += &self.rows[i][i];
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Result<Matrix> {
        let mut acc = Matrix::identity(&self.ring, self.nrows());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotInvertible);
        }
        let n = self.nrows();
        let mut a = self.rows.clone();
        let mut inv = Matrix::identity(&self.ring, n).rows;
        for col in 0..n {
            let piv = (col..n).find(|&i| !a[i][col].is_zero()).ok_or(Error::NotInvertible)?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col].inv()?;
            for x in a[col].iter_mut() {
                *x = &*x * &p;
            }
            for x in inv[col].iter_mut() {
                *x = &*x * &p;
            }
            let (pa, pi) = (a[col].clone(), inv[col].clone());
            for i in 0..n {
                if i == col || a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].clone();
                for j in 0..n {
                    if !pa[j].is_zero() {
                        let v = &f * &pa[j];
                        a[i][j] -= &v;
                    }
                    if !pi[j].is_zero() {
                        let v = &f * &pi[j];
                        inv[i][j] -= &v;
                    }
                }
            }
        }
        Ok(Matrix { ring: self.ring.clone(), rows: inv, cols: n })
    }

    pub fn is_identity(&self) -> bool {
        self.scalar_multiple().is_some_and(|s| s.is_one())
    }

    /// `Some(s)` when the matrix is `s` times the identity.
    pub fn scalar_multiple(&self) -> Option<Scalar> {
        if !self.is_square() {
            return None;
        }
        let n = self.nrows();
        if n == 0 {
            return Some(Scalar::one(&self.ring));
        }
        let s = self.rows[0][0].clone();
        for i in 0..n {
            for j in 0..n {
                let x = &self.rows[i][j];
                if (i == j && *x != s) || (i != j && !x.is_zero()) {
                    return None;
                }
            }
        }
        Some(s)
    }

    /// `Some(s)` with `self = s * other`, `s` nonzero.
    pub fn proportional_to(&self, other: &Matrix) -> Option<Scalar> {
        if self.nrows() != other.nrows() || self.cols != other.cols {
            return None;
        }
        let mut ratio: Option<Scalar> = None;
        for (ra, rb) in self.rows.iter().zip(&other.rows) {
            for (x, y) in ra.iter().zip(rb) {
                match (x.is_zero(), y.is_zero()) {
                    (true, true) => {}
                    (false, false) => {
                        let q = x.checked_div(y).ok()?;
                        match &ratio {
                            None => ratio = Some(q),
                            Some(r) if *r == q => {}
                            Some(_) => return None,
                        }
                    }
                    _ => return None,
                }
            }
        }
        ratio
    }

    pub fn embed(&self) -> Vec<Vec<Complex64>> {
        self.rows.iter().map(|r| r.iter().map(|x| x.embed()).collect()).collect()
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            rows: self.nrows(),
            cols: self.cols,
            entries: self.rows.iter().map(|r| r.iter().map(|x| x.to_json()).collect()).collect(),
        }
    }
}

/// Block-diagonal assembly: `blocks[b]` acts on the basis indices `index[b]`.
pub fn assemble(ring: &Arc<Ring>, n: usize, blocks: &[(Vec<usize>, Matrix)]) -> Matrix {
    let mut m = Matrix::zeros(ring, n, n);
    for (index, block) in blocks {
        for (i, &gi) in index.iter().enumerate() {
            for (j, &gj) in index.iter().enumerate() {
                m.rows[gi][gj] = block.rows[i][j].clone();
            }
        }
    }
    m
}
