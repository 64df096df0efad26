//! 2×2 matrices over [`ApPoly`].

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::appoly::{ApPoly, Side};
use crate::frequency::Frequency;

pub type Matrix2 = [[Complex64; 2]; 2];

#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ApMatrix(pub [[ApPoly; 2]; 2]);

impl ApMatrix {
    pub fn new(a11: ApPoly, a12: ApPoly, a21: ApPoly, a22: ApPoly) -> Self {
        ApMatrix([[a11, a12], [a21, a22]])
    }

    pub fn identity() -> Self {
        Self::new(ApPoly::one(), ApPoly::zero(), ApPoly::zero(), ApPoly::one())
    }

    pub fn diagonal(d1: ApPoly, d2: ApPoly) -> Self {
        Self::new(d1, ApPoly::zero(), ApPoly::zero(), d2)
    }

    /// `diag(e_{δ1}, e_{δ2})`.
    pub fn exp_diagonal(delta1: Frequency, delta2: Frequency) -> Self {
        Self::diagonal(ApPoly::exp(delta1), ApPoly::exp(delta2))
    }

    pub fn constant(m: Matrix2) -> Self {
        Self::new(
            ApPoly::constant(m[0][0]),
            ApPoly::constant(m[0][1]),
            ApPoly::constant(m[1][0]),
            ApPoly::constant(m[1][1]),
        )
    }

    pub fn entry(&self, row: usize, col: usize) -> &ApPoly {
        &self.0[row][col]
    }

    pub fn column(&self, col: usize) -> [ApPoly; 2] {
        [self.0[0][col].clone(), self.0[1][col].clone()]
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &ApPoly)> {
        (0..2).flat_map(move |i| (0..2).map(move |j| ((i, j), &self.0[i][j])))
    }

    pub fn det(&self) -> ApPoly {
        let m = &self.0;
        &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])
    }

    /// `[[d, -b], [-c, a]]`; equals the inverse when `det == 1`.
    pub fn adjugate(&self) -> Self {
        let m = &self.0;
        Self::new(m[1][1].clone(), -&m[0][1], -&m[1][0], m[0][0].clone())
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Self::new(m[0][0].clone(), m[1][0].clone(), m[0][1].clone(), m[1][1].clone())
    }

    pub fn scale(&self, k: Complex64) -> Self {
        ApMatrix(self.0.clone().map(|row| row.map(|e| e.scale(k))))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let a = &self.0;
        let b = &other.0;
        Self::new(&a[0][0] - &b[0][0], &a[0][1] - &b[0][1], &a[1][0] - &b[1][0], &a[1][1] - &b[1][1])
    }

    pub fn spectra_on_side(&self, side: Side) -> bool {
        self.entries().all(|(_, e)| e.spectrum_on_side(side))
    }

    /// Largest coefficient modulus over all entries.
    pub fn max_abs_coefficient(&self) -> f64 {
        self.entries().map(|(_, e)| e.max_abs_coefficient()).fold(0.0, f64::max)
    }

    pub fn is_constant(&self) -> bool {
        self.entries().all(|(_, e)| e.is_constant())
    }

    /// The zero-frequency coefficients.
    pub fn mean_values(&self) -> Matrix2 {
        let m = &self.0;
        [[m[0][0].mean_value(), m[0][1].mean_value()], [m[1][0].mean_value(), m[1][1].mean_value()]]
    }

    pub fn eval(&self, z: Complex64) -> Matrix2 {
        let m = &self.0;
        [[m[0][0].eval(z), m[0][1].eval(z)], [m[1][0].eval(z), m[1][1].eval(z)]]
    }

    pub fn eval_real(&self, x: f64) -> Matrix2 {
        let m = &self.0;
        [[m[0][0].eval_real(x), m[0][1].eval_real(x)], [m[1][0].eval_real(x), m[1][1].eval_real(x)]]
    }
}

impl Mul for &ApMatrix {
    type Output = ApMatrix;
    fn mul(self, rhs: &ApMatrix) -> ApMatrix {
        let a = &self.0;
        let b = &rhs.0;
        let cell = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
        ApMatrix::new(cell(0, 0), cell(0, 1), cell(1, 0), cell(1, 1))
    }
}

impl Mul for ApMatrix {
    type Output = ApMatrix;
    fn mul(self, rhs: ApMatrix) -> ApMatrix {
        &self * &rhs
    }
}

impl fmt::Debug for ApMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

/// Dense complex 2×2 helpers for pointwise checks.
pub mod dense {
    use super::Matrix2;
    use num_complex::Complex64;

    pub fn mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        out
    }

    pub fn det(a: &Matrix2) -> Complex64 {
        a[0][0] * a[1][1] - a[0][1] * a[1][0]
    }

    /// Inverse, or `None` when `|det| < min_det`.
    pub fn inverse(a: &Matrix2, min_det: f64) -> Option<Matrix2> {
        let d = det(a);
        if d.norm() < min_det {
            return None;
        }
        Some([[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]])
    }

    /// Max-entry norm of `a - b`.
    pub fn max_diff(a: &Matrix2, b: &Matrix2) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                m = m.max((a[i][j] - b[i][j]).norm());
            }
        }
        m
    }
}
