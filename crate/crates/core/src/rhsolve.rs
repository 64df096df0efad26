//! Explicit solutions of the homogeneous Riemann–Hilbert problem
//! `G φ_+ = φ_-` with `φ_+` analytic in the upper half-plane and `φ_-`
//! in the lower one.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::appoly::{ApPoly, Side};
use crate::frequency::{Extended, Frequency};
use crate::symbol::{ClassMembership, GapData, SymbolError, TriangularSymbol};
use crate::verify::{Check, VerificationReport};

/// Per-coefficient tolerance for the symbolic identity checks.
pub const IDENTITY_TOL: f64 = 1e-12;
const SPOT_CHECK_POINTS: usize = 32;
const SPOT_CHECK_SEED: u64 = 0x005e_ed0f_5011;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RhError {
    #[error("solution invariant violated: {0}")]
    InvariantViolation(String),
    #[error("nu = {nu} outside the big-gap range [{min}, {max}]")]
    NuOutOfRange { nu: Frequency, min: Frequency, max: Frequency },
    #[error("not a big-gap symbol: eta1+ + eta1- = {sum} < lambda = {lambda}")]
    NotBigGap { sum: Extended, lambda: Frequency },
    #[error("g has no zero-frequency term")]
    NoZeroFrequency,
    #[error("zero-frequency symbol with spectrum on both sides inside (-lambda, lambda)")]
    NotOneSided,
    #[error("solution is identically zero")]
    ZeroSolution,
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    StructuredN,
    BigGap,
    OneSided,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhSolution {
    pub phi1_plus: ApPoly,
    pub phi2_plus: ApPoly,
    pub phi1_minus: ApPoly,
    pub phi2_minus: ApPoly,
    pub provenance: Provenance,
    pub used_nu: Frequency,
}

impl RhSolution {
    pub fn plus(&self) -> [ApPoly; 2] {
        [self.phi1_plus.clone(), self.phi2_plus.clone()]
    }

    pub fn minus(&self) -> [ApPoly; 2] {
        [self.phi1_minus.clone(), self.phi2_minus.clone()]
    }

    pub fn is_zero(&self) -> bool {
        [&self.phi1_plus, &self.phi2_plus, &self.phi1_minus, &self.phi2_minus].iter().all(|p| p.is_zero())
    }

    /// `(e_{-λ} φ_{1+} - φ_{1-},  g φ_{1+} + e_λ φ_{2+} - φ_{2-})`.
    pub fn row_residuals(&self, lambda: Frequency, g: &ApPoly) -> [ApPoly; 2] {
        let r1 = &self.phi1_plus.shift(-lambda) - &self.phi1_minus;
        let r2 = &(&(g * &self.phi1_plus) + &self.phi2_plus.shift(lambda)) - &self.phi2_minus;
        [r1, r2]
    }

    fn check(&self, lambda: Frequency, g: &ApPoly) -> Result<(), RhError> {
        for (row, r) in self.row_residuals(lambda, g).iter().enumerate() {
            if r.max_abs_coefficient() > IDENTITY_TOL {
                return Err(RhError::InvariantViolation(format!("row {} identity: residual {r}", row + 1)));
            }
        }
        if let Some(name) = self.sign_violation() {
            return Err(RhError::InvariantViolation(format!("{name} has spectrum on the wrong side")));
        }
        Ok(())
    }

    fn sign_violation(&self) -> Option<&'static str> {
        [
            ("phi1_plus", &self.phi1_plus, Side::Plus),
            ("phi2_plus", &self.phi2_plus, Side::Plus),
            ("phi1_minus", &self.phi1_minus, Side::Minus),
            ("phi2_minus", &self.phi2_minus, Side::Minus),
        ]
        .into_iter()
        .find(|(_, p, side)| !p.spectrum_on_side(*side))
        .map(|(name, _, _)| name)
    }
}

fn alternating_sum(n: u32, term: impl Fn(u32) -> ApPoly) -> ApPoly {
    (0..n).fold(ApPoly::zero(), |acc, j| if j % 2 == 0 { acc + term(j) } else { acc - term(j) })
}

/// `φ_{1+}` as a sum of products of upper half-plane factors:
/// `Σ_j (-1)^j a_+^{N-1-j} b_+^j e_{β - jβ/(N-1)} e_{λ - (j+1)λ/N}`.
pub fn phi1_plus_regrouped(m: &ClassMembership) -> Option<ApPoly> {
    let b_plus = m.b_plus.as_ref()?;
    let n = m.n;
    let k = Frequency::integer(n as i64 - 1);
    let nn = Frequency::integer(n as i64);
    Some(alternating_sum(n, |j| {
        let jf = Frequency::integer(j as i64);
        let shift = (m.beta - jf * m.beta / k) + (m.lambda - (jf + Frequency::ONE) * m.lambda / nn);
        (&m.a_plus.pow(n - 1 - j) * &b_plus.pow(j)).shift(shift)
    }))
}

/// `φ_{1-}` as a sum of products of lower half-plane factors:
/// `Σ_j (-1)^j b_-^{N-1-j} a_-^j e_{-j(ν/(N-1) + λ/N)}`.
pub fn phi1_minus_regrouped(m: &ClassMembership) -> Option<ApPoly> {
    let b_minus = m.b_minus.as_ref()?;
    let n = m.n;
    let step = m.chosen_nu / Frequency::integer(n as i64 - 1) + m.lambda / Frequency::integer(n as i64);
    Some(alternating_sum(n, |j| (&b_minus.pow(n - 1 - j) * &m.a_minus.pow(j)).shift(-(step * j as i64))))
}

/// The solution built from a class representation:
///
/// ```text
///   φ_{1+} = e_{λ-ν} Σ_{j<N} (-1)^j a_+^{N-1-j} a_-^j e_{-jλ/N}
///   φ_{2+} = -a_+^N
///   φ_{1-} = e_{-λ} φ_{1+}
///   φ_{2-} = (-1)^{N-1} a_-^N
/// ```
pub fn solve_structured(m: &ClassMembership) -> Result<RhSolution, RhError> {
    let (n, lambda, nu) = (m.n, m.lambda, m.chosen_nu);
    let lam_n = lambda / Frequency::integer(n as i64);
    let sum = alternating_sum(n, |j| (&m.a_plus.pow(n - 1 - j) * &m.a_minus.pow(j)).shift(-(lam_n * j as i64)));
    let phi1_plus = sum.shift(lambda - nu);
    let phi2_minus = if n % 2 == 1 { m.a_minus.pow(n) } else { -m.a_minus.pow(n) };
    let sol = RhSolution {
        phi1_minus: phi1_plus.shift(-lambda),
        phi1_plus,
        phi2_plus: -m.a_plus.pow(n),
        phi2_minus,
        provenance: Provenance::StructuredN,
        used_nu: nu,
    };
    if n > 1 {
        let witnesses = [
            (phi1_plus_regrouped(m), &sol.phi1_plus, "phi1_plus"),
            (phi1_minus_regrouped(m), &sol.phi1_minus, "phi1_minus"),
        ];
        for (w, phi, name) in witnesses {
            let w = w.ok_or_else(|| RhError::InvariantViolation("b_± missing for N > 1".into()))?;
            if (&w - phi).max_abs_coefficient() > IDENTITY_TOL {
                return Err(RhError::InvariantViolation(format!("{name} disagrees with its regrouped expansion")));
            }
        }
    }
    sol.check(lambda, &m.represented_g())?;
    Ok(sol)
}

/// `[max{0, λ-η_{1-}}, min{η_{1+}, λ}]`, the admissible `ν` in the big-gap case.
pub fn biggap_nu_range(gap: &GapData, lambda: Frequency) -> (Frequency, Frequency) {
    let lo = (Extended::from(lambda) - gap.eta1_minus.value).max(Extended::ZERO);
    let hi = gap.eta1_plus.value.min(lambda.into());
    // both ends are finite: lo <= λ and hi <= λ, lo >= 0 and hi >= 0
    (lo.finite().unwrap_or(Frequency::ZERO), hi.finite().unwrap_or(lambda))
}

/// `φ_+ = (e_{λ-ν}, -e_{-ν} g_+)`, `φ_- = (e_{-ν}, e_{λ-ν} g_-)`.
pub fn solve_biggap(gap: &GapData, lambda: Frequency, nu: Frequency) -> Result<RhSolution, RhError> {
    let sum = gap.eta1_sum();
    if sum < lambda {
        return Err(RhError::NotBigGap { sum, lambda });
    }
    if gap.has_zero_frequency {
        return Err(SymbolError::ZeroFrequencyPresent.into());
    }
    let (min, max) = biggap_nu_range(gap, lambda);
    if nu < min || nu > max {
        return Err(RhError::NuOutOfRange { nu, min, max });
    }
    let sol = RhSolution {
        phi1_plus: ApPoly::exp(lambda - nu),
        phi2_plus: -gap.g_plus.shift(-nu),
        phi1_minus: ApPoly::exp(-nu),
        phi2_minus: gap.g_minus.shift(lambda - nu),
        provenance: Provenance::BigGap,
        used_nu: nu,
    };
    sol.check(lambda, &gap.reassemble())?;
    Ok(sol)
}

/// Solutions for `g` with a zero-frequency term. If the negative part of
/// `g` sits in `(-∞, -λ]`: `φ_+ = (e_λ, -a_+)`, `φ_- = (1, a_-)` with
/// `a_+` the part at frequencies `>= 0` and `a_- = e_λ (g - a_+)`.
/// Otherwise, if the positive part sits in `[λ, ∞)`: `φ_+ = (1, -a_+)`,
/// `φ_- = (e_{-λ}, a_-)` with `a_-` the part at frequencies `<= 0` and
/// `a_+ = e_{-λ}(g - a_-)`.
pub fn solve_one_sided(sym: &TriangularSymbol) -> Result<RhSolution, RhError> {
    let g = sym.g();
    let lambda = sym.lambda();
    if !g.contains_frequency(Frequency::ZERO) {
        return Err(RhError::NoZeroFrequency);
    }
    let split_nonneg = g.split_at(Frequency::ZERO, true);
    let split_nonpos = g.split_at(Frequency::ZERO, false);
    let sol = if split_nonneg.lower.max_frequency().is_none_or(|f| f <= -lambda) {
        RhSolution {
            phi1_plus: ApPoly::exp(lambda),
            phi2_plus: -split_nonneg.upper,
            phi1_minus: ApPoly::one(),
            phi2_minus: split_nonneg.lower.shift(lambda),
            provenance: Provenance::OneSided,
            used_nu: Frequency::ZERO,
        }
    } else if split_nonpos.upper.min_frequency().is_none_or(|f| f >= lambda) {
        RhSolution {
            phi1_plus: ApPoly::one(),
            phi2_plus: -split_nonpos.upper.shift(-lambda),
            phi1_minus: ApPoly::exp(-lambda),
            phi2_minus: split_nonpos.lower,
            provenance: Provenance::OneSided,
            used_nu: lambda,
        }
    } else {
        return Err(RhError::NotOneSided);
    };
    sol.check(lambda, g)?;
    Ok(sol)
}

/// `φ_+ = e_{μ1} ψ̃_+`, `φ_- = e_{-μ2} ψ_-` with each ψ touching frequency 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reduction {
    pub mu1: Frequency,
    pub mu2: Frequency,
    pub psi_plus: [ApPoly; 2],
    pub psi_minus: [ApPoly; 2],
}

impl Reduction {
    /// The candidate index `μ1 + μ2`.
    pub fn mu(&self) -> Frequency {
        self.mu1 + self.mu2
    }
}

pub fn exponential_reduction(sol: &RhSolution) -> Result<Reduction, RhError> {
    let min_of = |v: &[ApPoly; 2]| v.iter().filter_map(ApPoly::min_frequency).min();
    let max_of = |v: &[ApPoly; 2]| v.iter().filter_map(ApPoly::max_frequency).max();
    let (plus, minus) = (sol.plus(), sol.minus());
    let (Some(mu1), Some(top)) = (min_of(&plus), max_of(&minus)) else {
        return Err(RhError::ZeroSolution);
    };
    let mu2 = -top;
    Ok(Reduction { mu1, mu2, psi_plus: plus.map(|p| p.shift(-mu1)), psi_minus: minus.map(|p| p.shift(mu2)) })
}

/// Symbolic identity and spectrum checks plus an advisory numeric spot
/// check at 32 pseudo-random points of `[-50, 50]`.
pub fn verify_solution(sym: &TriangularSymbol, sol: &RhSolution) -> VerificationReport {
    let lambda = sym.lambda();
    let mut checks = Vec::new();
    for (row, r) in sol.row_residuals(lambda, sym.g()).iter().enumerate() {
        let worst = r.terms().iter().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()));
        let (passed, detail) = match worst {
            Some((f, c)) if c.norm() > IDENTITY_TOL => {
                (false, format!("coefficient mismatch {:.3e} at frequency {f}", c.norm()))
            }
            Some((f, c)) => (true, format!("max coefficient error {:.3e} at frequency {f}", c.norm())),
            None => (true, "exact".to_string()),
        };
        checks.push(Check::new(format!("row{}_identity", row + 1), passed, detail));
    }
    let sign = sol.sign_violation();
    checks.push(Check::new(
        "spectrum_signs",
        sign.is_none(),
        sign.map_or("all components on the correct side".into(), |n| format!("{n} on the wrong side")),
    ));
    if sol.is_zero() {
        checks.push(Check::new("trivial", true, "zero solution"));
    }

    let g = sym.matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(SPOT_CHECK_SEED);
    let mut max_residual = 0.0f64;
    let mut worst_point = Complex64::new(0.0, 0.0);
    for _ in 0..SPOT_CHECK_POINTS {
        let x: f64 = rng.random_range(-50.0..=50.0);
        let gx = g.eval_real(x);
        let (p1, p2) = (sol.phi1_plus.eval_real(x), sol.phi2_plus.eval_real(x));
        let r1 = (gx[0][0] * p1 + gx[0][1] * p2 - sol.phi1_minus.eval_real(x)).norm();
        let r2 = (gx[1][0] * p1 + gx[1][1] * p2 - sol.phi2_minus.eval_real(x)).norm();
        let r = r1.max(r2);
        if r > max_residual {
            max_residual = r;
            worst_point = Complex64::new(x, 0.0);
        }
    }
    checks.push(Check::advisory(
        "numeric_spot_check",
        max_residual <= IDENTITY_TOL,
        format!("max |G phi_+ - phi_-| = {max_residual:.3e} over {SPOT_CHECK_POINTS} points"),
    ));
    VerificationReport { max_residual, sample_count: SPOT_CHECK_POINTS, worst_point, checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{classify, decompose, Classification};

    fn f(n: i64) -> Frequency {
        Frequency::integer(n)
    }

    fn e(n: i64) -> ApPoly {
        ApPoly::exp(f(n))
    }

    fn member(lambda: i64, g: ApPoly) -> ClassMembership {
        match classify(&TriangularSymbol::new(f(lambda), g).unwrap()).unwrap() {
            Classification::Member(m) => m,
            other => panic!("not a member: {other:?}"),
        }
    }

    #[test]
    fn structured_lambda4() {
        let sol = solve_structured(&member(4, e(-1) + e(1))).unwrap();
        assert_eq!(sol.phi1_plus, e(3) - e(1));
        assert_eq!(sol.phi2_plus, -ApPoly::one());
        assert_eq!(sol.phi1_minus, e(-1) - e(-3));
        assert_eq!(sol.phi2_minus, -ApPoly::one());
        assert_eq!(sol.provenance, Provenance::StructuredN);
    }

    #[test]
    fn structured_lambda2_collapsed() {
        let sol = solve_structured(&member(2, e(-1) + e(1))).unwrap();
        assert_eq!(sol.plus(), [e(1), -ApPoly::one()]);
        assert_eq!(sol.minus(), [e(-1), ApPoly::one()]);
    }

    #[test]
    fn structured_lambda3_nu1() {
        let m = member(3, e(-1) + e(1)).with_nu(f(1)).unwrap();
        assert_eq!(m.beta, Frequency::ratio(1, 2));
        let sol = solve_structured(&m).unwrap();
        assert_eq!(sol.plus(), [e(2) - ApPoly::one(), -ApPoly::one()]);
        assert_eq!(sol.minus(), [e(-1) - e(-3), -e(-1)]);
        let red = exponential_reduction(&sol).unwrap();
        assert_eq!((red.mu1, red.mu2, red.mu()), (f(0), f(1), f(1)));
    }

    #[test]
    fn regrouped_expansions_agree() {
        let m = member(3, e(-1) + e(1));
        assert_eq!(phi1_plus_regrouped(&m).unwrap(), solve_structured(&m).unwrap().phi1_plus);
        assert_eq!(phi1_minus_regrouped(&m).unwrap(), solve_structured(&m).unwrap().phi1_minus);
        assert!(phi1_plus_regrouped(&member(2, e(-1) + e(1))).is_none());
    }

    #[test]
    fn corrupted_membership_is_caught() {
        let mut m = member(4, e(-1) + e(1));
        m.a_plus = e(2);
        assert!(matches!(solve_structured(&m), Err(RhError::InvariantViolation(_))));
    }

    #[test]
    fn biggap_examples() {
        let sym = TriangularSymbol::new(f(3), e(-2) + e(2)).unwrap();
        let gap = decompose(&sym).unwrap();
        let sol = solve_biggap(&gap, f(3), f(1)).unwrap();
        assert_eq!(sol.plus(), [e(2), -e(1)]);
        assert_eq!(sol.minus(), [e(-1), ApPoly::one()]);
        let red = exponential_reduction(&sol).unwrap();
        assert_eq!((red.mu1, red.mu2), (f(1), f(0)));
        assert_eq!(red.psi_plus, [e(1), -ApPoly::one()]);

        let err = solve_biggap(&gap, f(3), Frequency::ratio(7, 2)).unwrap_err();
        assert!(matches!(err, RhError::NuOutOfRange { .. }));

        let gap4 = decompose(&TriangularSymbol::new(f(4), e(-1) + e(1)).unwrap()).unwrap();
        assert!(matches!(solve_biggap(&gap4, f(4), f(1)), Err(RhError::NotBigGap { .. })));
    }

    #[test]
    fn reduction_of_canonical_solution() {
        let sol = solve_structured(&member(4, e(-1) + e(1))).unwrap();
        let red = exponential_reduction(&sol).unwrap();
        assert_eq!((red.mu1, red.mu2), (f(0), f(0)));
        let zero = RhSolution {
            phi1_plus: ApPoly::zero(),
            phi2_plus: ApPoly::zero(),
            phi1_minus: ApPoly::zero(),
            phi2_minus: ApPoly::zero(),
            provenance: Provenance::BigGap,
            used_nu: f(0),
        };
        assert_eq!(exponential_reduction(&zero), Err(RhError::ZeroSolution));
    }

    #[test]
    fn one_sided_forms() {
        let sym = TriangularSymbol::new(f(2), ApPoly::one() + e(2)).unwrap();
        let sol = solve_one_sided(&sym).unwrap();
        assert_eq!(sol.plus(), [e(2), -(ApPoly::one() + e(2))]);
        assert_eq!(sol.minus(), [ApPoly::one(), ApPoly::zero()]);

        let sym = TriangularSymbol::new(f(2), ApPoly::one() + e(-1) + e(3)).unwrap();
        let sol = solve_one_sided(&sym).unwrap();
        assert_eq!(sol.plus(), [ApPoly::one(), -e(1)]);
        assert_eq!(sol.minus(), [e(-2), ApPoly::one() + e(-1)]);

        let sym = TriangularSymbol::new(f(2), ApPoly::one() + e(-1) + e(1)).unwrap();
        assert_eq!(solve_one_sided(&sym), Err(RhError::NotOneSided));
    }

    #[test]
    fn verify_flags_perturbation() {
        let sym = TriangularSymbol::new(f(4), e(-1) + e(1)).unwrap();
        let sol = solve_structured(&member(4, e(-1) + e(1))).unwrap();
        let report = verify_solution(&sym, &sol);
        assert!(report.passed());
        assert!(report.max_residual < 1e-12);

        let mut bad = sol.clone();
        bad.phi2_plus = &bad.phi2_plus + &ApPoly::constant(Complex64::new(1e-6, 0.0));
        let report = verify_solution(&sym, &bad);
        assert!(!report.passed());
        let row2 = report.checks.iter().find(|c| c.name == "row2_identity").unwrap();
        assert!(!row2.passed && row2.detail.contains("frequency 4"));
    }

    #[test]
    fn verify_zero_solution_is_trivial() {
        let sym = TriangularSymbol::new(f(4), e(-1) + e(1)).unwrap();
        let zero = RhSolution {
            phi1_plus: ApPoly::zero(),
            phi2_plus: ApPoly::zero(),
            phi1_minus: ApPoly::zero(),
            phi2_minus: ApPoly::zero(),
            provenance: Provenance::StructuredN,
            used_nu: f(0),
        };
        let report = verify_solution(&sym, &zero);
        assert!(report.passed());
        assert!(report.checks.iter().any(|c| c.name == "trivial"));
    }
}
