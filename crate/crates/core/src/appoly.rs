//! Almost periodic polynomials: finite sums `Σ c_j e_{λ_j}` with complex
//! coefficients and exact rational frequencies, where `e_λ(x) = exp(iλx)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::frequency::{Frequency, FrequencyError};

/// Coefficients with modulus below this value are dropped after every
/// arithmetic operation.
pub const ZERO_THRESHOLD: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AppolyError {
    #[error(transparent)]
    Frequency(#[from] FrequencyError),
    #[error("not a dominant binomial: {0}")]
    NotDominantBinomial(String),
    #[error("Neumann series needs {needed} terms, budget is {budget}")]
    TruncationBudgetExceeded { needed: usize, budget: usize },
}

/// Which half-line a spectrum is required to sit in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Spectrum in `[0, ∞)`: analytic and bounded in the upper half-plane.
    Plus,
    /// Spectrum in `(-∞, 0]`: analytic and bounded in the lower half-plane.
    Minus,
}

impl Side {
    pub fn admits(self, freq: Frequency) -> bool {
        match self {
            Side::Plus => !freq.is_negative(),
            Side::Minus => !freq.is_positive(),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Plus => "plus",
            Side::Minus => "minus",
        })
    }
}

/// An almost periodic polynomial. Terms are kept strictly increasing in
/// frequency with no negligible coefficients; the empty list is zero.
#[derive(Clone, Default, PartialEq)]
pub struct ApPoly {
    terms: Vec<(Frequency, Complex64)>,
}

/// The two halves of [`ApPoly::split_at`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitResult {
    pub upper: ApPoly,
    pub lower: ApPoly,
}

fn negligible(c: Complex64) -> bool {
    c.norm() < ZERO_THRESHOLD
}

impl ApPoly {
    pub fn zero() -> Self {
        ApPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(Frequency::ZERO, c)
    }

    /// `e_λ`.
    pub fn exp(freq: Frequency) -> Self {
        Self::monomial(freq, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(freq: Frequency, c: Complex64) -> Self {
        if negligible(c) {
            Self::zero()
        } else {
            ApPoly { terms: vec![(freq, c)] }
        }
    }

    /// Builds a polynomial from arbitrary terms, summing repeated frequencies.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Frequency, Complex64)>,
    {
        let mut acc: BTreeMap<Frequency, Complex64> = BTreeMap::new();
        for (f, c) in terms {
            *acc.entry(f).or_default() += c;
        }
        Self::from_sorted_map(acc)
    }

    /// Real-coefficient shorthand: `from_real(&[(λ, c), ...])`.
    pub fn from_real(terms: &[(Frequency, f64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(f, c)| (f, Complex64::new(c, 0.0))))
    }

    fn from_sorted_map(map: BTreeMap<Frequency, Complex64>) -> Self {
        ApPoly { terms: map.into_iter().filter(|(_, c)| !negligible(*c)).collect() }
    }

    pub fn terms(&self) -> &[(Frequency, Complex64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn spectrum(&self) -> impl Iterator<Item = Frequency> + '_ {
        self.terms.iter().map(|(f, _)| *f)
    }

    pub fn contains_frequency(&self, freq: Frequency) -> bool {
        self.terms.binary_search_by(|(f, _)| f.cmp(&freq)).is_ok()
    }

    /// `M(e_{-λ} p)`: the coefficient at `freq`, zero if absent.
    pub fn bohr_coefficient(&self, freq: Frequency) -> Complex64 {
        match self.terms.binary_search_by(|(f, _)| f.cmp(&freq)) {
            Ok(i) => self.terms[i].1,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// `M(p)`, the zero-frequency coefficient.
    pub fn mean_value(&self) -> Complex64 {
        self.bohr_coefficient(Frequency::ZERO)
    }

    pub fn min_frequency(&self) -> Option<Frequency> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_frequency(&self) -> Option<Frequency> {
        self.terms.last().map(|t| t.0)
    }

    pub fn spectrum_bounds(&self) -> (Option<Frequency>, Option<Frequency>) {
        (self.min_frequency(), self.max_frequency())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(f, _)| f.is_zero())
    }

    /// A single term `c e_λ` with `c != 0`.
    pub fn as_single_exponential(&self) -> Option<(Frequency, Complex64)> {
        match self.terms.as_slice() {
            [t] => Some(*t),
            _ => None,
        }
    }

    pub fn spectrum_on_side(&self, side: Side) -> bool {
        self.terms.iter().all(|(f, _)| side.admits(*f))
    }

    /// `Σ |c_j|`, an upper bound for the sup norm on the real line.
    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, |a, b| a + b)
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    /// Evaluates the entire extension `Σ c_j exp(iλ_j z)`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        self.terms.iter().map(|(f, c)| c * (i * f.to_f64() * z).exp()).sum()
    }

    pub fn eval_real(&self, x: f64) -> Complex64 {
        self.terms.iter().map(|(f, c)| c * Complex64::from_polar(1.0, f.to_f64() * x)).sum()
    }

    pub fn try_shift(&self, gamma: Frequency) -> Result<Self, AppolyError> {
        let terms = self
            .terms
            .iter()
            .map(|(f, c)| Ok((f.checked_add(gamma)?, *c)))
            .collect::<Result<Vec<_>, FrequencyError>>()?;
        Ok(ApPoly { terms })
    }

    /// Multiplication by `e_γ`.
    pub fn shift(&self, gamma: Frequency) -> Self {
        self.try_shift(gamma).expect("frequency arithmetic overflow")
    }

    pub fn scale(&self, k: Complex64) -> Self {
        ApPoly { terms: self.terms.iter().map(|(f, c)| (*f, c * k)).filter(|(_, c)| !negligible(*c)).collect() }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AppolyError> {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let next = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) if a.0 == b.0 => {
                    i += 1;
                    j += 1;
                    (a.0, a.1 + b.1)
                }
                (Some(a), Some(b)) if a.0 < b.0 => {
                    i += 1;
                    *a
                }
                (Some(_), Some(b)) | (None, Some(b)) => {
                    j += 1;
                    *b
                }
                (Some(a), None) => {
                    i += 1;
                    *a
                }
                (None, None) => unreachable!(),
            };
            if !negligible(next.1) {
                out.push(next);
            }
        }
        Ok(ApPoly { terms: out })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AppolyError> {
        let mut acc: BTreeMap<Frequency, Complex64> = BTreeMap::new();
        for (f, c) in &self.terms {
            for (g, d) in &other.terms {
                *acc.entry(f.checked_add(*g)?).or_default() += c * d;
            }
        }
        Ok(Self::from_sorted_map(acc))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = ApPoly::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Splits the spectrum at `tau`: `upper` gets frequencies `> tau`
    /// (or `>= tau` when `boundary_in_upper`), `lower` gets the rest.
    pub fn split_at(&self, tau: Frequency, boundary_in_upper: bool) -> SplitResult {
        let in_upper = |f: Frequency| if boundary_in_upper { f >= tau } else { f > tau };
        let (upper, lower): (Vec<_>, Vec<_>) = self.terms.iter().partition(|(f, _)| in_upper(*f));
        SplitResult { upper: ApPoly { terms: upper }, lower: ApPoly { terms: lower } }
    }

    /// Truncated geometric-series inverse of a dominant binomial
    /// `c1 e_{α1} + c2 e_{α2}` with `|c2| < |c1|`:
    ///
    /// `q = c1^{-1} e_{-α1} Σ_{n=0}^{N} (-c2/c1)^n e_{n(α2-α1)}`
    ///
    /// with `N` the smallest index whose tail bound `r^{N+1}/(1-r)` is at most
    /// `tol`, `r = |c2/c1|`. Then `sup_ℝ |p q - 1| = r^{N+1} <= tol`.
    pub fn neumann_inverse(&self, tol: f64, max_terms: usize) -> Result<Self, AppolyError> {
        let [a, b] = match self.terms.as_slice() {
            [a, b] => [*a, *b],
            _ => return Err(AppolyError::NotDominantBinomial(format!("{} term(s)", self.len()))),
        };
        let ((alpha1, c1), (alpha2, c2)) = if a.1.norm() >= b.1.norm() { (a, b) } else { (b, a) };
        let r = c2.norm() / c1.norm();
        if r >= 1.0 {
            return Err(AppolyError::NotDominantBinomial("coefficients have equal modulus".into()));
        }
        let mut last = 0usize;
        while r.powi(last as i32 + 1) / (1.0 - r) > tol {
            last += 1;
            if last + 1 > max_terms {
                return Err(AppolyError::TruncationBudgetExceeded { needed: last + 1, budget: max_terms });
            }
        }
        let step = alpha2.checked_sub(alpha1)?;
        let ratio = -c2 / c1;
        let inv_c1 = c1.inv();
        let mut terms = Vec::with_capacity(last + 1);
        let mut coeff = inv_c1;
        for n in 0..=last {
            let freq = step.checked_mul_int(n as i64)?.checked_sub(alpha1)?;
            terms.push((freq, coeff));
            coeff *= ratio;
        }
        Ok(Self::from_terms(terms))
    }
}

impl Add for &ApPoly {
    type Output = ApPoly;
    fn add(self, rhs: &ApPoly) -> ApPoly {
        self.try_add(rhs).expect("frequency arithmetic overflow")
    }
}

impl Sub for &ApPoly {
    type Output = ApPoly;
    fn sub(self, rhs: &ApPoly) -> ApPoly {
        self + &(-rhs)
    }
}

impl Mul for &ApPoly {
    type Output = ApPoly;
    fn mul(self, rhs: &ApPoly) -> ApPoly {
        self.try_mul(rhs).expect("frequency arithmetic overflow")
    }
}

impl Neg for &ApPoly {
    type Output = ApPoly;
    fn neg(self) -> ApPoly {
        ApPoly { terms: self.terms.iter().map(|(f, c)| (*f, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for ApPoly {
            type Output = ApPoly;
            fn $method(self, rhs: ApPoly) -> ApPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ApPoly> for ApPoly {
            type Output = ApPoly;
            fn $method(self, rhs: &ApPoly) -> ApPoly {
                (&self).$method(rhs)
            }
        }
        impl $trait<ApPoly> for &ApPoly {
            type Output = ApPoly;
            fn $method(self, rhs: ApPoly) -> ApPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ApPoly {
    type Output = ApPoly;
    fn neg(self) -> ApPoly {
        -&self
    }
}

fn fmt_coeff(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else {
        format!("({}{:+}i)", c.re, c.im)
    }
}

impl fmt::Display for ApPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (freq, c)) in self.terms.iter().enumerate() {
            let mut c = *c;
            if k > 0 {
                // negative reals read as subtraction
                if c.im == 0.0 && c.re < 0.0 {
                    c = -c;
                    f.write_str(" - ")?;
                } else {
                    f.write_str(" + ")?;
                }
            }
            let unit = c == Complex64::new(1.0, 0.0);
            match (freq.is_zero(), unit) {
                (true, _) => f.write_str(&fmt_coeff(c))?,
                (false, true) => write!(f, "e_{{{freq}}}")?,
                (false, false) => write!(f, "{}·e_{{{freq}}}", fmt_coeff(c))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ApPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ApPoly[{self}]")
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    freq: Frequency,
    re: f64,
    im: f64,
}

impl Serialize for ApPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr: Vec<TermRepr> =
            // `+ 0.0` maps -0.0 to 0.0, so emitted JSON is a fixed point of parsing
            self.terms.iter().map(|(f, c)| TermRepr { freq: *f, re: c.re + 0.0, im: c.im + 0.0 }).collect();
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ApPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = Vec::<TermRepr>::deserialize(d)?;
        Ok(ApPoly::from_terms(repr.into_iter().map(|t| (t.freq, Complex64::new(t.re, t.im)))))
    }
}
