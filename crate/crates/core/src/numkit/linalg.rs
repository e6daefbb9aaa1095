//! Small dense linear algebra over complex numbers and over jets.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

use super::jet::CJet;
use crate::error::{Error, Result};

/// Relative pivot threshold for `lu_solve`.
pub const PIVOT_THRESHOLD: f64 = 1e-13;

/// Field-like element of a dense system. Jets pivot on their value coefficient.
pub trait Scalar:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn magnitude(&self) -> f64;
}

impl Scalar for C64 {
    fn zero_like(&self) -> Self {
        C64::new(0.0, 0.0)
    }
    fn one_like(&self) -> Self {
        C64::new(1.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Scalar for CJet {
    fn zero_like(&self) -> Self {
        CJet::zero(self.orders())
    }
    fn one_like(&self) -> Self {
        CJet::constant(C64::new(1.0, 0.0), self.orders())
    }
    fn magnitude(&self) -> f64 {
        self.value().norm()
    }
}

fn row_norm<T: Scalar>(row: &[T]) -> f64 {
    row.iter().map(Scalar::magnitude).fold(0.0, f64::max)
}

/// Gaussian elimination with partial pivoting. A pivot is rejected when its
/// magnitude drops below `PIVOT_THRESHOLD` times the largest original row norm.
pub fn solve_dense<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Result<Vec<T>> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n) && b.len() == n, "square system");
    let scale = a.iter().map(|r| row_norm(r)).fold(0.0, f64::max);
    for col in 0..n {
        let (p, best) = (col..n)
            .map(|r| (r, a[r][col].magnitude()))
            .fold((col, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if !(best > PIVOT_THRESHOLD * scale) {
            return Err(Error::Singular { pivot: col });
        }
        a.swap(col, p);
        b.swap(col, p);
        let pivot = a[col][col].clone();
        for r in (col + 1)..n {
            let factor = a[r][col].clone() / pivot.clone();
            for c in col..n {
                let sub = factor.clone() * a[col][c].clone();
                a[r][c] = a[r][c].clone() - sub;
            }
            let sub = factor * b[col].clone();
            b[r] = b[r].clone() - sub;
        }
    }
    let mut x: Vec<T> = b.iter().map(|v| v.zero_like()).collect();
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in (r + 1)..n {
            acc = acc - a[r][c].clone() * x[c].clone();
        }
        x[r] = acc / a[r][r].clone();
    }
    Ok(x)
}

/// Determinant as the signed product of partial-pivoting LU pivots. An
/// exactly vanishing pivot column yields zero.
pub fn det_dense<T: Scalar>(mut a: Vec<Vec<T>>, unit: &T) -> T {
    let n = a.len();
    let mut det = unit.one_like();
    for col in 0..n {
        let (p, best) = (col..n)
            .map(|r| (r, a[r][col].magnitude()))
            .fold((col, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if best == 0.0 {
            return unit.zero_like();
        }
        if p != col {
            a.swap(col, p);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det = det * pivot.clone();
        for r in (col + 1)..n {
            let factor = a[r][col].clone() / pivot.clone();
            for c in col..n {
                let sub = factor.clone() * a[col][c].clone();
                a[r][c] = a[r][c].clone() - sub;
            }
        }
    }
    det
}

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        ComplexMatrix {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "square matrix");
        ComplexMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        self.data.chunks(self.n).map(<[C64]>::to_vec).collect()
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        self.data
            .chunks(self.n)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                for j in 0..n {
                    out.data[i * n + j] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn lu_solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        solve_dense(self.rows(), b.to_vec())
    }

    pub fn determinant(&self) -> C64 {
        det_dense(self.rows(), &C64::new(1.0, 0.0))
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_solve_returns_rhs() {
        let b = vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 1.0)];
        let x = ComplexMatrix::identity(3).lu_solve(&b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn permutation_solve() {
        let m = ComplexMatrix::from_rows(vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]);
        let x = m.lu_solve(&[c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert_eq!(x, vec![c(2.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(m.determinant(), c(-1.0, 0.0));
        assert_eq!(ComplexMatrix::identity(4).determinant(), c(1.0, 0.0));
    }

    #[test]
    fn singular_reports_pivot() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 0.0)],
        ]);
        assert_eq!(m.lu_solve(&[c(1.0, 0.0), c(1.0, 0.0)]), Err(Error::Singular { pivot: 1 }));
        assert!(m.determinant().norm() < 1e-15);
        assert_eq!(ComplexMatrix::zeros(3).determinant(), c(0.0, 0.0));
    }
}
