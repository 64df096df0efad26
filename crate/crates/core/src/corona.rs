//! Corona conditions for solution vectors and explicit corona pairs.
//!
//! A pair `(ω1, ω2)` of upper (lower) half-plane functions satisfies the
//! corona condition when `inf (|ω1| + |ω2|) > 0` over that half-plane;
//! equivalently `ω1 h1 + ω2 h2 = 1` for some bounded analytic `h`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::appoly::{ApPoly, AppolyError, Side};
use crate::frequency::{Frequency, FrequencyError};
use crate::matrix::ApMatrix;
use crate::symbol::{CriterionCase, GapData, Truth};
use crate::verify::StripSampler;

/// Largest Sylvester system assembled for the polynomial Bezout rule.
pub const MAX_BEZOUT_DEGREE: usize = 400;
/// Residual accepted for pairs built by exact (non-truncating) rules.
pub const EXACT_RESIDUAL: f64 = 1e-12;
/// Term budget for truncated geometric-series inverses.
pub const MAX_NEUMANN_TERMS: usize = 4096;
/// Relative tolerance when comparing the two sides of the binomial criterion.
pub const BINOMIAL_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoronaError {
    #[error("no constructive rule applies: {0}")]
    Unsupported(String),
    #[error("corona condition fails: {0}")]
    CoronaConditionFails(String),
    #[error("{0} has spectrum on the wrong side for the requested half-plane")]
    WrongSide(String),
    #[error("not a binomial: {0}")]
    NotBinomial(String),
    #[error("det H - 1 has size {deviation:.3e}, above the allowed {allowed:.3e}")]
    DeterminantNotOne { deviation: f64, allowed: f64 },
    #[error("entry {0} of H has spectrum on the wrong side")]
    SpectrumSignViolation(String),
    #[error(transparent)]
    Appoly(#[from] AppolyError),
    #[error(transparent)]
    Frequency(#[from] FrequencyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
    Unknown,
}

impl From<Truth> for Status {
    fn from(t: Truth) -> Self {
        match t {
            Truth::Yes => Status::Holds,
            Truth::No => Status::Fails,
            Truth::Unknown => Status::Unknown,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionTag {
    /// One of the exact endpoint conditions, labelled by criterion case.
    Case(CriterionCase),
    SingleExponential,
    BinomialCriterion,
    NumericSample,
}

/// Verdicts for the two half-planes. `fired_conditions` lists the
/// conditions that decided a `Holds`, or every refuted condition for a
/// `Fails`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoronaVerdict {
    pub plus: Status,
    pub minus: Status,
    pub fired_conditions: Vec<ConditionTag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<f64>,
}

impl CoronaVerdict {
    fn both(status: Status, fired_conditions: Vec<ConditionTag>) -> Self {
        CoronaVerdict { plus: status, minus: status, fired_conditions, evidence: None }
    }

    /// The common verdict when both sides agree, `Unknown` otherwise.
    pub fn overall(&self) -> Status {
        if self.plus == self.minus {
            self.plus
        } else {
            Status::Unknown
        }
    }
}

fn ratio(n: u32, d: u32) -> Frequency {
    Frequency::ratio(n as i64, d as i64)
}

/// The exact endpoint condition of `case`, in three-valued logic.
pub fn endpoint_condition(gap: &GapData, n: u32, lambda: Frequency, case: CriterionCase) -> Truth {
    let eq = |a, b| Truth::from_bool(a == b);
    let nf = Frequency::integer(n as i64);
    let (e1p, e1m, e2p, e2m) = (gap.eta1_plus, gap.eta1_minus, gap.eta2_plus, gap.eta2_minus);
    match case {
        CriterionCase::ExactGap => Truth::all([
            Truth::from_bool(n == 1),
            e1p.in_spectrum(),
            e1m.in_spectrum(),
            eq(gap.eta1_sum(), lambda.into()),
        ]),
        _ if n <= 1 => Truth::No,
        CriterionCase::InnerSum => {
            Truth::all([e1p.in_spectrum(), e1m.in_spectrum(), eq(gap.eta1_sum(), (lambda / nf).into())])
        }
        CriterionCase::PlusRatio => {
            Truth::all([e1p.in_spectrum(), e2p.in_spectrum(), eq(e2p.value, e1p.value.scale(ratio(n, n - 1)))])
        }
        CriterionCase::MinusRatio => {
            Truth::all([e1m.in_spectrum(), e2m.in_spectrum(), eq(e2m.value, e1m.value.scale(ratio(n, n - 1)))])
        }
        CriterionCase::OuterSum => Truth::all([
            e2p.in_spectrum(),
            e2m.in_spectrum(),
            eq(e2p.value + e2m.value, (lambda / Frequency::integer(n as i64 - 1)).into()),
        ]),
    }
}

/// Exact endpoint conditions for the structured solution to satisfy the
/// corona condition on both sides (the strip condition for `N > 1` is
/// separate, see [`strip_condition`]).
pub fn spectral_corona_check(gap: &GapData, n: u32, lambda: Frequency) -> CoronaVerdict {
    let cases: &[CriterionCase] = if n == 1 {
        &[CriterionCase::ExactGap]
    } else {
        &[CriterionCase::InnerSum, CriterionCase::PlusRatio, CriterionCase::MinusRatio, CriterionCase::OuterSum]
    };
    let results: Vec<(CriterionCase, Truth)> =
        cases.iter().map(|&c| (c, endpoint_condition(gap, n, lambda, c))).collect();
    let holding: Vec<ConditionTag> =
        results.iter().filter(|(_, t)| *t == Truth::Yes).map(|(c, _)| ConditionTag::Case(*c)).collect();
    if !holding.is_empty() {
        return CoronaVerdict::both(Status::Holds, holding);
    }
    if results.iter().all(|(_, t)| *t == Truth::No) {
        return CoronaVerdict::both(Status::Fails, results.iter().map(|(c, _)| ConditionTag::Case(*c)).collect());
    }
    CoronaVerdict::both(Status::Unknown, Vec::new())
}

/// `inf (|g_+| + |g_-|) > 0` on every horizontal strip around the real line.
pub fn strip_condition(g_minus: &ApPoly, g_plus: &ApPoly) -> CoronaVerdict {
    if g_minus.as_single_exponential().is_some() || g_plus.as_single_exponential().is_some() {
        return CoronaVerdict::both(Status::Holds, vec![ConditionTag::SingleExponential]);
    }
    if g_minus.len() == 2 && g_plus.len() == 2 {
        if let Ok(v) = binomial_strip_criterion(g_minus, g_plus, false) {
            return v;
        }
    }
    let (estimate, _) = StripSampler::default().minimum(&[g_minus, g_plus]);
    CoronaVerdict {
        plus: Status::Unknown,
        minus: Status::Unknown,
        fired_conditions: vec![ConditionTag::NumericSample],
        evidence: Some(estimate),
    }
}

fn approx_eq(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= BINOMIAL_REL_TOL * a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

/// Strip condition for `g_- = c_{-2} e_{-η2-} + c_{-1} e_{-η1-}` and
/// `g_+ = c_1 e_{η1+} + c_2 e_{η2+}`. With `(η2+ - η1+)/(η2- - η1-) = p/q`
/// in lowest terms it fails iff `(-c_1/c_2)^q = (-c_{-2}/c_{-1})^p`.
/// `irrational_ratio` forces the branch for incommensurable widths, which
/// fails iff `|c_1/c_2|^{η2- - η1-} = |c_{-2}/c_{-1}|^{η2+ - η1+}`.
pub fn binomial_strip_criterion(
    g_minus: &ApPoly,
    g_plus: &ApPoly,
    irrational_ratio: bool,
) -> Result<CoronaVerdict, CoronaError> {
    let binomial = |p: &ApPoly, name: &str| match p.terms() {
        [a, b] => Ok((*a, *b)),
        _ => Err(CoronaError::NotBinomial(format!("{name} has {} term(s)", p.len()))),
    };
    // terms are sorted by frequency
    let ((fm2, cm2), (fm1, cm1)) = binomial(g_minus, "g_-")?;
    let ((fp1, c1), (fp2, c2)) = binomial(g_plus, "g_+")?;
    let width_plus = fp2 - fp1;
    let width_minus = fm1 - fm2;

    let fails = if irrational_ratio {
        let lhs = (c1 / c2).norm().powf(width_minus.to_f64());
        let rhs = (cm2 / cm1).norm().powf(width_plus.to_f64());
        approx_eq(lhs.into(), rhs.into())
    } else {
        let r = width_plus.checked_div(width_minus)?;
        let (p, q) = (r.numer(), r.denom());
        let (p, q) = (i32::try_from(p), i32::try_from(q));
        let (Ok(p), Ok(q)) = (p, q) else {
            return Err(CoronaError::Unsupported("width ratio too large for the power test".into()));
        };
        approx_eq((-c1 / c2).powi(q), (-cm2 / cm1).powi(p))
    };
    let status = if fails { Status::Fails } else { Status::Holds };
    Ok(CoronaVerdict::both(status, vec![ConditionTag::BinomialCriterion]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairRule {
    Constant,
    Neumann,
    Bezout,
}

/// `h` with `ω1 h1 + ω2 h2 = 1` up to `residual_bound`, which bounds the
/// sup over the real line (the l1 norm of the symbolic residual).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoronaPair {
    pub h1: ApPoly,
    pub h2: ApPoly,
    pub residual_bound: f64,
    pub rule: PairRule,
}

impl CoronaPair {
    pub fn residual(&self, omega: [&ApPoly; 2]) -> ApPoly {
        &(&(omega[0] * &self.h1) + &(omega[1] * &self.h2)) - &ApPoly::one()
    }

    pub fn is_exact(&self) -> bool {
        self.rule != PairRule::Neumann
    }

    fn build(h1: ApPoly, h2: ApPoly, omega: [&ApPoly; 2], rule: PairRule) -> Self {
        let mut pair = CoronaPair { h1, h2, residual_bound: 0.0, rule };
        pair.residual_bound = pair.residual(omega).l1_norm();
        pair
    }
}

fn oriented(f: Frequency, side: Side) -> Frequency {
    match side {
        Side::Plus => f,
        Side::Minus => -f,
    }
}

/// Coefficients of `p` as a polynomial in `w = e_{±1/d}`.
fn as_polynomial(p: &ApPoly, d: i64, side: Side) -> Result<Vec<Complex64>, CoronaError> {
    let degree = p.terms().iter().map(|(f, _)| oriented(*f, side).checked_mul_int(d)).try_fold(0i64, |m, k| {
        let k = k?;
        Ok::<_, FrequencyError>(m.max(k.numer()))
    })?;
    let degree = usize::try_from(degree).map_err(|_| CoronaError::WrongSide("polynomial".into()))?;
    if degree > MAX_BEZOUT_DEGREE {
        return Err(CoronaError::Unsupported(format!("degree {degree} exceeds the Bezout cap")));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
    for (f, c) in p.terms() {
        coeffs[oriented(*f, side).checked_mul_int(d)?.numer() as usize] = *c;
    }
    Ok(coeffs)
}

fn from_polynomial(coeffs: &[Complex64], d: i64, side: Side) -> ApPoly {
    ApPoly::from_terms(coeffs.iter().enumerate().map(|(k, c)| (oriented(Frequency::ratio(k as i64, d), side), *c)))
}

/// Exact polynomial Bezout identity in `w = e_{±1/d}` via the Sylvester
/// system. Fails when the polynomials share a root or the system is too
/// large or ill-conditioned.
fn bezout_pair(omega: [&ApPoly; 2], side: Side) -> Result<CoronaPair, CoronaError> {
    let d = omega.iter().flat_map(|p| p.spectrum()).fold(1i64, |acc, f| acc.lcm(&f.denom()));
    let p1 = as_polynomial(omega[0], d, side)?;
    let p2 = as_polynomial(omega[1], d, side)?;
    let (n1, n2) = (p1.len() - 1, p2.len() - 1);
    let size = n1 + n2;
    if size == 0 || n1 == 0 || n2 == 0 || size > MAX_BEZOUT_DEGREE {
        return Err(CoronaError::Unsupported(format!("Sylvester system of size {size}")));
    }
    // columns 0..n2 multiply p1 by w^k, columns n2..size multiply p2 by w^k
    let m = DMatrix::from_fn(size, size, |row, col| {
        let (poly, k) = if col < n2 { (&p1, col) } else { (&p2, col - n2) };
        row.checked_sub(k).and_then(|i| poly.get(i)).copied().unwrap_or_default()
    });
    let mut rhs = DVector::from_element(size, Complex64::new(0.0, 0.0));
    rhs[0] = Complex64::new(1.0, 0.0);
    let sol = m.lu().solve(&rhs).ok_or_else(|| CoronaError::Unsupported("components share a common root".into()))?;
    let h1 = from_polynomial(&sol.as_slice()[..n2], d, side);
    let h2 = from_polynomial(&sol.as_slice()[n2..], d, side);
    let pair = CoronaPair::build(h1, h2, omega, PairRule::Bezout);
    if pair.residual_bound.is_nan() || pair.residual_bound > EXACT_RESIDUAL {
        return Err(CoronaError::Unsupported(format!(
            "Bezout solve is ill-conditioned (residual {:.3e})",
            pair.residual_bound
        )));
    }
    Ok(pair)
}

/// A corona pair for `(ω1, ω2)` on `side`, by the first applicable rule:
/// a constant component, a dominant binomial whose dominant term sits at
/// frequency 0, or an exact polynomial Bezout identity.
pub fn corona_pair(omega1: &ApPoly, omega2: &ApPoly, side: Side, tol: f64) -> Result<CoronaPair, CoronaError> {
    let omega = [omega1, omega2];
    for (i, w) in omega.iter().enumerate() {
        if !w.spectrum_on_side(side) {
            return Err(CoronaError::WrongSide(format!("omega{}", i + 1)));
        }
    }
    if !omega.iter().any(|w| w.contains_frequency(Frequency::ZERO)) {
        return Err(CoronaError::CoronaConditionFails(format!(
            "no component has a mean value, so both vanish deep in the {side} half-plane"
        )));
    }
    let place = |i: usize, h: ApPoly| if i == 0 { (h, ApPoly::zero()) } else { (ApPoly::zero(), h) };

    if let Some(i) = omega.iter().position(|w| w.is_constant() && !w.is_zero()) {
        let (h1, h2) = place(i, ApPoly::constant(omega[i].mean_value().inv()));
        return Ok(CoronaPair::build(h1, h2, omega, PairRule::Constant));
    }
    for (i, w) in omega.iter().enumerate() {
        if let [a, b] = w.terms() {
            let (dominant, other) = if a.1.norm() >= b.1.norm() { (a, b) } else { (b, a) };
            if dominant.0.is_zero() && other.1.norm() < dominant.1.norm() {
                let (h1, h2) = place(i, w.neumann_inverse(tol, MAX_NEUMANN_TERMS)?);
                return Ok(CoronaPair::build(h1, h2, omega, PairRule::Neumann));
            }
        }
    }
    bezout_pair(omega, side)
}

/// Like [`corona_pair`], but tries the exact Bezout rule before the
/// truncated Neumann series, which then runs at `tol`.
pub fn exact_first_pair(omega1: &ApPoly, omega2: &ApPoly, side: Side, tol: f64) -> Result<CoronaPair, CoronaError> {
    let omega = [omega1, omega2];
    let constant = omega.iter().any(|w| w.is_constant() && !w.is_zero());
    let has_mean = omega.iter().any(|w| w.contains_frequency(Frequency::ZERO));
    let all_on_side = omega.iter().all(|w| w.spectrum_on_side(side));
    if !constant && has_mean && all_on_side {
        if let Ok(pair) = bezout_pair(omega, side) {
            return Ok(pair);
        }
    }
    corona_pair(omega1, omega2, side, tol)
}

/// `H_+ = [[e_{-δ̃} ψ1, -h2], [e_{-δ̃} ψ2, h1]]` or `H_- = [[ψ1, -h2], [ψ2, h1]]`,
/// checked to have determinant 1 and entries on the correct side.
pub fn build_h(psi: [&ApPoly; 2], h: &CoronaPair, delta_tilde: Frequency, side: Side) -> Result<ApMatrix, CoronaError> {
    let (c1, c2) = match side {
        Side::Plus => (psi[0].shift(-delta_tilde), psi[1].shift(-delta_tilde)),
        Side::Minus => (psi[0].clone(), psi[1].clone()),
    };
    let hm = ApMatrix::new(c1, -&h.h2, c2, h.h1.clone());
    let deviation = (&hm.det() - &ApPoly::one()).l1_norm();
    let allowed = if h.is_exact() { EXACT_RESIDUAL } else { h.residual_bound.max(1e-10) };
    if deviation.is_nan() || deviation > allowed {
        return Err(CoronaError::DeterminantNotOne { deviation, allowed });
    }
    if let Some(((i, j), _)) = hm.entries().find(|(_, e)| !e.spectrum_on_side(side)) {
        return Err(CoronaError::SpectrumSignViolation(format!("({},{})", i + 1, j + 1)));
    }
    Ok(hm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{decompose, TriangularSymbol};

    fn f(n: i64) -> Frequency {
        Frequency::integer(n)
    }

    fn e(n: i64) -> ApPoly {
        ApPoly::exp(f(n))
    }

    fn c(re: f64) -> ApPoly {
        ApPoly::constant(Complex64::new(re, 0.0))
    }

    fn gap(lambda: i64, g: ApPoly) -> GapData {
        decompose(&TriangularSymbol::new(f(lambda), g).unwrap()).unwrap()
    }

    #[test]
    fn spectral_check_examples() {
        let v = spectral_corona_check(&gap(2, e(-1) + e(1)), 1, f(2));
        assert_eq!(v.overall(), Status::Holds);
        assert_eq!(v.fired_conditions, vec![ConditionTag::Case(CriterionCase::ExactGap)]);

        let v = spectral_corona_check(&gap(4, e(-1) + e(1)), 2, f(4));
        assert_eq!(v.overall(), Status::Holds);
        assert!(v.fired_conditions.contains(&ConditionTag::Case(CriterionCase::InnerSum)));

        let v = spectral_corona_check(&gap(3, e(-2) + e(2)), 1, f(3));
        assert_eq!(v.overall(), Status::Fails);
        assert!(!v.fired_conditions.is_empty());
    }

    #[test]
    fn strip_condition_examples() {
        assert_eq!(strip_condition(&e(-1), &(e(1) + e(3))).overall(), Status::Holds);
        assert_eq!(strip_condition(&(e(-2) + e(-1)), &(e(1) + e(2))).overall(), Status::Fails);
        let gp = e(1) + e(2) + e(3);
        let gm = e(-2) + e(-1) + ApPoly::exp(Frequency::ratio(-1, 2));
        let v = strip_condition(&gm, &gp);
        assert_eq!(v.overall(), Status::Unknown);
        assert_eq!(v.fired_conditions, vec![ConditionTag::NumericSample]);
        assert!(v.evidence.is_some());
    }

    #[test]
    fn binomial_criterion_examples() {
        let gm = e(-2) + e(-1);
        let v = binomial_strip_criterion(&gm, &(e(1) + e(2)), false).unwrap();
        assert_eq!(v.overall(), Status::Fails);
        let gp = e(1) + ApPoly::monomial(f(2), Complex64::new(2.0, 0.0));
        assert_eq!(binomial_strip_criterion(&gm, &gp, false).unwrap().overall(), Status::Holds);
        assert!(matches!(binomial_strip_criterion(&gm, &e(1), false), Err(CoronaError::NotBinomial(_))));
    }

    #[test]
    fn binomial_criterion_irrational_branch() {
        // |c1/c2|^{1} vs |c_{-2}/c_{-1}|^{1}: equal moduli fail, unequal hold
        let gm = e(-2) + e(-1);
        assert_eq!(binomial_strip_criterion(&gm, &(e(1) - e(2)), true).unwrap().overall(), Status::Fails);
        let gp = e(1) + ApPoly::monomial(f(2), Complex64::new(2.0, 0.0));
        assert_eq!(binomial_strip_criterion(&gm, &gp, true).unwrap().overall(), Status::Holds);
    }

    #[test]
    fn corona_pair_rules() {
        let pair = corona_pair(&(e(3) - e(1)), &c(-1.0), Side::Plus, 1e-6).unwrap();
        assert_eq!((pair.h1.clone(), pair.h2.clone()), (ApPoly::zero(), c(-1.0)));
        assert_eq!(pair.residual_bound, 0.0);

        let dom = c(1.0) + ApPoly::monomial(f(1), Complex64::new(0.5, 0.0));
        let pair = corona_pair(&e(2), &dom, Side::Plus, 1e-6).unwrap();
        assert_eq!(pair.rule, PairRule::Neumann);
        assert!(pair.h1.is_zero());
        assert!(pair.residual_bound <= 1e-6);

        assert!(matches!(corona_pair(&e(1), &e(2), Side::Plus, 1e-6), Err(CoronaError::CoronaConditionFails(_))));
        assert!(matches!(corona_pair(&e(-1), &c(1.0), Side::Plus, 1e-6), Err(CoronaError::WrongSide(_))));
    }

    #[test]
    fn bezout_rule() {
        // e_2 h1 - (1 + e_2) h2 = 1 is solved by h = (1, -1)
        let pair = corona_pair(&e(2), &-(c(1.0) + e(2)), Side::Plus, 1e-10).unwrap();
        assert_eq!(pair.rule, PairRule::Bezout);
        assert!(pair.residual_bound <= EXACT_RESIDUAL);
        assert!(pair.h1.spectrum_on_side(Side::Plus) && pair.h2.spectrum_on_side(Side::Plus));

        let w1 = e(-1) + ApPoly::exp(Frequency::ratio(-3, 2));
        let w2 = c(2.0) + e(-1) + ApPoly::exp(Frequency::ratio(-5, 2));
        let pair = corona_pair(&w1, &w2, Side::Minus, 1e-10).unwrap();
        assert!(pair.residual_bound <= EXACT_RESIDUAL);
        assert!(pair.h1.spectrum_on_side(Side::Minus) && pair.h2.spectrum_on_side(Side::Minus));

        // 1 + w and w^2 - 1 share the root w = -1
        let err = corona_pair(&(c(1.0) + e(1)), &(e(2) - c(1.0)), Side::Plus, 1e-10);
        assert!(matches!(err, Err(CoronaError::Unsupported(_))));
    }

    #[test]
    fn build_h_examples() {
        let pair = CoronaPair { h1: ApPoly::zero(), h2: c(-1.0), residual_bound: 0.0, rule: PairRule::Constant };
        let hp = build_h([&e(1), &c(-1.0)], &pair, f(0), Side::Plus).unwrap();
        assert_eq!(hp, ApMatrix::new(e(1), c(1.0), c(-1.0), ApPoly::zero()));

        let pair = CoronaPair { h1: ApPoly::zero(), h2: c(1.0), residual_bound: 0.0, rule: PairRule::Constant };
        let hm = build_h([&e(-1), &c(1.0)], &pair, f(0), Side::Minus).unwrap();
        assert_eq!(hm, ApMatrix::new(e(-1), c(-1.0), c(1.0), ApPoly::zero()));

        let bad = CoronaPair { h1: ApPoly::zero(), h2: c(1.0), residual_bound: 0.0, rule: PairRule::Constant };
        assert!(matches!(
            build_h([&e(1), &c(-1.0)], &bad, f(0), Side::Plus),
            Err(CoronaError::DeterminantNotOne { .. })
        ));
    }
}
