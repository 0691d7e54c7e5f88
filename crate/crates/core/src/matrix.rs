//! Dense square matrices: exact rational, and complex at MPFR precision.

use std::fmt;
use std::ops::{Index, IndexMut};

use rug::{Float, Rational};

use crate::numeric::Complex;
use crate::{Error, Result};

/// Square matrix of exact rationals, row-major, 0-based indexing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    dim: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(dim: usize) -> Self {
        RationalMatrix {
            dim,
            data: vec![Rational::new(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Rational::from(1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::Arity {
                    what: "matrix row",
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(RationalMatrix { dim, data })
    }

    /// Convenience for tests and fixtures.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| Rational::from(v)).collect())
            .collect();
        Self::from_rows(rows).expect("square integer fixture")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.data.chunks(self.dim.max(1))
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|q| *q.denom() == 1)
    }

    pub fn mul(&self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = RationalMatrix::zeros(n);
        let mut acc = Rational::new();
        for i in 0..n {
            for j in 0..n {
                acc.assign_zero();
                for k in 0..n {
                    let a = &self.data[i * n + k];
                    if *a.numer() == 0 {
                        continue;
                    }
                    acc += Rational::from(a * &rhs.data[k * n + j]);
                }
                out.data[i * n + j] = acc.clone();
            }
        }
        out
    }

    pub fn add(&self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| Rational::from(a + b))
            .collect();
        RationalMatrix { dim: self.dim, data }
    }

    pub fn scale(&self, s: &Rational) -> RationalMatrix {
        let data = self.data.iter().map(|a| Rational::from(a * s)).collect();
        RationalMatrix { dim: self.dim, data }
    }

    /// Naive repeated multiplication. Kept as the reference path for the
    /// binary exponentiation in `powers`.
    pub fn pow_naive(&self, n: u64) -> RationalMatrix {
        let mut acc = RationalMatrix::identity(self.dim);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact determinant by Gaussian elimination over Q.
    pub fn det(&self) -> Rational {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = Rational::from(1);
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| *a[r * n + col].numer() != 0) else {
                return Rational::new();
            };
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det *= &p;
            for r in col + 1..n {
                if *a[r * n + col].numer() == 0 {
                    continue;
                }
                let factor = Rational::from(&a[r * n + col] / &p);
                for k in col..n {
                    let sub = Rational::from(&factor * &a[col * n + k]);
                    a[r * n + k] -= sub;
                }
            }
        }
        det
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.dim).map(|i| self[(i, j)].clone()).collect()
    }
}

trait AssignZero {
    fn assign_zero(&mut self);
}

impl AssignZero for Rational {
    fn assign_zero(&mut self) {
        *self = Rational::new();
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.dim + j]
    }
}

/// Row-major CSV, one matrix row per line.
impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|q| q.to_string()).collect();
            writeln!(f, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// Square complex matrix used for the Vandermonde machinery.
#[derive(Clone, Debug)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize, prec: u32) -> Self {
        ComplexMatrix {
            dim,
            data: vec![Complex::zero(prec); dim * dim],
        }
    }

    pub fn identity(dim: usize, prec: u32) -> Self {
        let mut m = Self::zeros(dim, prec);
        for i in 0..dim {
            m[(i, i)] = Complex::real(Float::with_val(prec, 1));
        }
        m
    }

    pub fn from_rational(m: &RationalMatrix, prec: u32) -> Self {
        let n = m.dim();
        let mut out = Self::zeros(n, prec);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = Complex::from_rational(&m[(i, j)], prec);
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let n = self.dim;
        let prec = self.data.first().map_or(64, Complex::prec);
        let mut out = ComplexMatrix::zeros(n, prec);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex::zero(prec);
                for k in 0..n {
                    acc = &acc + &(&self[(i, k)] * &rhs[(k, j)]);
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// Gauss-Jordan inverse with partial pivoting. `None` when a pivot
    /// vanishes exactly.
    pub fn inverse(&self) -> Option<ComplexMatrix> {
        let n = self.dim;
        let prec = self.data.first().map_or(64, Complex::prec);
        let mut a = self.clone();
        let mut inv = ComplexMatrix::identity(n, prec);
        for col in 0..n {
            let pivot = (col..n).max_by(|&r, &s| {
                a[(r, col)]
                    .abs()
                    .partial_cmp(&a[(s, col)].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })?;
            if a[(pivot, col)].is_zero() {
                return None;
            }
            if pivot != col {
                for k in 0..n {
                    a.data.swap(pivot * n + k, col * n + k);
                    inv.data.swap(pivot * n + k, col * n + k);
                }
            }
            let p_inv = a[(col, col)].recip();
            for k in 0..n {
                a[(col, k)] = &a[(col, k)] * &p_inv;
                inv[(col, k)] = &inv[(col, k)] * &p_inv;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for k in 0..n {
                    let t = &factor * &a[(col, k)];
                    a[(r, k)] = &a[(r, k)] - &t;
                    let t = &factor * &inv[(col, k)];
                    inv[(r, k)] = &inv[(r, k)] - &t;
                }
            }
        }
        Some(inv)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> Float {
        let prec = self.data.first().map_or(64, Complex::prec);
        self.data
            .iter()
            .map(Complex::abs)
            .fold(Float::new(prec), |m, v| if v > m { v } else { m })
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        ComplexMatrix { dim: self.dim, data }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.dim + j]
    }
}
