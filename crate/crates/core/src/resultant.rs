//! Sylvester matrices, resultants and principal subresultant coefficients.

use crate::error::AlgebraError;
use crate::poly::{Polynomial, VarOrder};

/// Dense matrix of polynomials sharing one variable order.
#[derive(Clone, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl Matrix {
    pub fn zeros(vars: &VarOrder, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![Polynomial::zero(vars); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        self.entries[i * self.cols + j] = p;
    }

    /// Leading `k x k` block.
    pub fn leading_minor(&self, k: usize) -> Matrix {
        let rows = (0..k).map(|i| (0..k).map(|j| self.get(i, j).clone()).collect()).collect();
        Matrix::from_rows(rows)
    }

    /// Determinant by fraction-free (Bareiss) elimination. The empty matrix has determinant 1.
    pub fn determinant(&self, vars: &VarOrder) -> Polynomial {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Polynomial::one(vars);
        }
        let mut m: Vec<Vec<Polynomial>> =
            (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut negate = false;
        let mut prev = Polynomial::one(vars);
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return Polynomial::zero(vars);
                };
                m.swap(k, swap);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
                }
                m[i][k] = Polynomial::zero(vars);
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if negate {
            -d
        } else {
            d
        }
    }
}

/// Sylvester matrix of `a` (degree m) and `b` (degree n) in `v`: n shifted
/// rows of a's coefficients (highest first) followed by m rows of b's.
pub fn sylvester_matrix(a: &Polynomial, b: &Polynomial, v: usize) -> Matrix {
    let ca = a.coefficients_in(v);
    let cb = b.coefficients_in(v);
    let m = ca.len() - 1;
    let n = cb.len() - 1;
    let size = m + n;
    let mut mat = Matrix::zeros(a.vars(), size, size);
    for i in 0..n {
        for (k, c) in ca.iter().rev().enumerate() {
            mat.set(i, i + k, c.clone());
        }
    }
    for i in 0..m {
        for (k, c) in cb.iter().rev().enumerate() {
            mat.set(n + i, i + k, c.clone());
        }
    }
    mat
}

/// Resultant of `a` and `b` with respect to `v`, as the Sylvester determinant.
pub fn sylvester_resultant(a: &Polynomial, b: &Polynomial, v: usize) -> Result<Polynomial, AlgebraError> {
    psc(a, b, v, 0)
}

/// `l`-th principal subresultant coefficient: the determinant of the Sylvester
/// matrix with the last `l` rows of each coefficient block and the last `2l`
/// columns deleted.
pub fn psc(a: &Polynomial, b: &Polynomial, v: usize, l: usize) -> Result<Polynomial, AlgebraError> {
    if a.vars() != b.vars() {
        return Err(AlgebraError::VarOrderMismatch {
            left: a.vars().names().to_vec(),
            right: b.vars().names().to_vec(),
        });
    }
    if a.is_zero() || b.is_zero() {
        return Err(AlgebraError::ConstantInVariable);
    }
    let m = a.degree_in(v) as usize;
    let n = b.degree_in(v) as usize;
    if m == 0 && n == 0 {
        return Err(AlgebraError::ConstantInVariable);
    }
    let max = m.min(n);
    if l > max {
        return Err(AlgebraError::PscIndex { index: l, max });
    }
    let full = sylvester_matrix(a, b, v);
    let size = m + n - 2 * l;
    let keep_rows: Vec<usize> = (0..n - l).chain(n..n + m - l).collect();
    let rows = keep_rows.iter().map(|&i| (0..size).map(|j| full.get(i, j).clone()).collect()).collect();
    Ok(Matrix::from_rows(rows).determinant(a.vars()))
}
