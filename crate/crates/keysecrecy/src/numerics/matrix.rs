//! Dense complex matrices, validated Hermitian operators, and probability vectors.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance;

/// Dense row-major complex matrix. General container; carries no invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self { data, ..*self }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self { data, ..*self }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let data = self.data.iter().map(|a| a * factor).collect();
        Self { data, ..*self }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `(M + M†)/2`. Used to scrub the anti-Hermitian noise off products that
    /// are Hermitian in exact arithmetic.
    pub fn hermitian_part(&self) -> HermitianMatrix {
        assert_eq!(self.rows, self.cols);
        let m = Self::from_fn(self.rows, self.cols, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        });
        HermitianMatrix(m)
    }

    /// Returns the first entry pair violating conjugate symmetry, if any.
    pub fn hermitian_violation(&self, tol: f64) -> Option<(usize, usize)> {
        if self.rows != self.cols {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for j in i..self.cols {
                if (self.get(i, j) - self.get(j, i).conj()).norm() > tol {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// Square complex matrix known to be Hermitian within [`tolerance::HERMITIAN`].
///
/// Construction validates; arithmetic is restricted to Hermitian-closed
/// operations. Use [`Self::matrix`] to escape into general arithmetic and
/// [`ComplexMatrix::hermitian_part`] to come back.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::NotSquare {
                rows: m.rows,
                cols: m.cols,
            });
        }
        if let Some((i, j)) = m.hermitian_violation(tolerance::HERMITIAN) {
            return Err(Error::NotHermitian {
                i,
                j,
                a: m.get(i, j),
                b: m.get(j, i),
                tol: tolerance::HERMITIAN,
            });
        }
        Ok(Self(m))
    }

    /// Build from real diagonal entries.
    pub fn diagonal(entries: &[f64]) -> Self {
        let mut m = ComplexMatrix::zeros(entries.len(), entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m.set(i, i, Complex64::new(x, 0.0));
        }
        Self(m)
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(ComplexMatrix::zeros(dim, dim))
    }

    /// Rank-one projector `|v><v| / <v|v>`.
    pub fn projector(v: &[Complex64]) -> Self {
        let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let m = ComplexMatrix::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj() / norm_sq);
        Self(m)
    }

    /// Unnormalized outer product `|v><v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        let m = ComplexMatrix::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj());
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0.get(i, j)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.add(&other.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.sub(&other.0))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self(self.0.scale(Complex64::new(factor, 0.0)))
    }

    /// `B · self · B†`, Hermitian for any `B`.
    pub fn sandwich(&self, b: &ComplexMatrix) -> Self {
        b.matmul(&self.0).matmul(&b.adjoint()).hermitian_part()
    }

    /// Real trace. The imaginary part of a Hermitian trace is zero by construction.
    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.0.max_abs_entry()
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> ComplexMatrix {
        self.0.matmul(&other.0).sub(&other.0.matmul(&self.0))
    }

    /// Serialize entries as nested `[re, im]` pairs (row-major).
    pub fn to_nested(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.dim())
            .map(|i| {
                (0..self.dim())
                    .map(|j| {
                        let z = self.get(i, j);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect()
    }

    pub fn from_nested(rows: &[Vec<[f64; 2]>]) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: r.len(),
                });
            }
        }
        let m = ComplexMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1]));
        Self::new(m)
    }
}

impl Serialize for HermitianMatrix {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.to_nested().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HermitianMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(deserializer)?;
        Self::from_nested(&rows).map_err(serde::de::Error::custom)
    }
}

/// Finite probability distribution: non-negative entries summing to 1
/// within [`tolerance::PROBABILITY`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        for (index, &value) in probs.iter().enumerate() {
            if value < -tolerance::PROBABILITY {
                return Err(Error::NegativeProbability { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > tolerance::PROBABILITY {
            return Err(Error::NotNormalized {
                sum,
                tol: tolerance::PROBABILITY,
            });
        }
        Ok(Self(probs))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// The corresponding diagonal operator.
    pub fn to_diagonal(&self) -> HermitianMatrix {
        HermitianMatrix::diagonal(&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hermitian_rejects_asymmetric_entry() {
        let mut m = ComplexMatrix::zeros(2, 2);
        m.set(0, 1, c(1.0, 0.5));
        m.set(1, 0, c(1.0, 0.5)); // should be (1.0, -0.5)
        let err = HermitianMatrix::new(m).unwrap_err();
        match err {
            Error::NotHermitian { i, j, .. } => assert_eq!((i, j), (0, 1)),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn hermitian_accepts_conjugate_pair() {
        let mut m = ComplexMatrix::zeros(2, 2);
        m.set(0, 1, c(1.0, 0.5));
        m.set(1, 0, c(1.0, -0.5));
        assert!(HermitianMatrix::new(m).is_ok());
    }

    #[test]
    fn sandwich_is_hermitian() {
        let h = HermitianMatrix::diagonal(&[1.0, -2.0]);
        let mut b = ComplexMatrix::zeros(2, 2);
        b.set(0, 0, c(0.3, 0.7));
        b.set(0, 1, c(-1.0, 0.2));
        b.set(1, 0, c(0.0, 1.1));
        b.set(1, 1, c(0.5, 0.0));
        let s = h.sandwich(&b);
        assert!(s.matrix().hermitian_violation(1e-15).is_none());
    }

    #[test]
    fn probability_vector_rejects_bad_sum() {
        assert!(ProbabilityVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbabilityVector::new(vec![0.5, -0.1, 0.6]).is_err());
        assert!(ProbabilityVector::new(vec![0.25; 4]).is_ok());
    }

    #[test]
    fn matmul_identity() {
        let id = ComplexMatrix::identity(3);
        let m = ComplexMatrix::from_fn(3, 3, |i, j| c((i + 2 * j) as f64, (i * j) as f64));
        assert_eq!(id.matmul(&m), m);
        assert_eq!(m.matmul(&id), m);
    }
}
