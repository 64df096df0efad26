//! Triangular symbols
//!
//! ```text
//!     G = [ e_{-λ}   0   ]
//!         [   g     e_λ  ]
//! ```
//!
//! their spectral gap data around zero, and membership in the classes
//! `S_{λ,N}` of off-diagonal entries admitting a representation
//! `g = a_- e_{-β} + a_+ e_ν` with `λ/(ν+β) = N`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::appoly::{ApPoly, Side};
use crate::frequency::{Extended, Frequency};
use crate::matrix::ApMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymbolError {
    #[error("lambda must be positive, got {0}")]
    NonPositiveLambda(Frequency),
    #[error("inconsistent spectral declaration: {0}")]
    InconsistentDeclaration(String),
    #[error("g has a zero-frequency term; the one-sided path applies instead of classification")]
    ZeroFrequencyPresent,
    #[error("g is identically zero")]
    ZeroSymbol,
    #[error("g does not have the form c e_{{-σ}} + g_+: {0}")]
    FormMismatch(String),
    #[error("nu = {nu} lies outside the admissible interval [{min}, {max}]")]
    NuOutOfInterval { nu: Extended, min: Frequency, max: Frequency },
    #[error("invalid class membership: {0}")]
    InvalidMembership(String),
}

/// Whether a spectral endpoint belongs to the Bohr–Fourier spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndpointStatus {
    Attained,
    NotAttained,
    /// Declared without an attainment flag and not decidable from the terms.
    Undecided,
}

impl EndpointStatus {
    pub fn truth(self) -> Truth {
        match self {
            EndpointStatus::Attained => Truth::Yes,
            EndpointStatus::NotAttained => Truth::No,
            EndpointStatus::Undecided => Truth::Unknown,
        }
    }
}

/// Three-valued logic for conditions that may depend on undecided
/// endpoint memberships.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truth {
    Yes,
    No,
    Unknown,
}

impl Truth {
    pub fn from_bool(b: bool) -> Truth {
        if b {
            Truth::Yes
        } else {
            Truth::No
        }
    }

    pub fn and(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::No, _) | (_, Truth::No) => Truth::No,
            (Truth::Yes, Truth::Yes) => Truth::Yes,
            _ => Truth::Unknown,
        }
    }

    pub fn or(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::Yes, _) | (_, Truth::Yes) => Truth::Yes,
            (Truth::No, Truth::No) => Truth::No,
            _ => Truth::Unknown,
        }
    }

    pub fn all<I: IntoIterator<Item = Truth>>(it: I) -> Truth {
        it.into_iter().fold(Truth::Yes, Truth::and)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Endpoint {
    pub value: Extended,
    pub status: EndpointStatus,
}

impl Endpoint {
    fn attained(value: Frequency) -> Self {
        Endpoint { value: value.into(), status: EndpointStatus::Attained }
    }

    fn empty() -> Self {
        Endpoint { value: Extended::PosInf, status: EndpointStatus::NotAttained }
    }

    pub fn in_spectrum(&self) -> Truth {
        self.status.truth()
    }
}

/// Spectral endpoint declarations for a truncated APW entry whose full
/// Bohr–Fourier spectrum is not captured by the represented terms. Every
/// field is optional; undeclared endpoints are read off the terms.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeclaredSpectrum {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta1_minus: Option<Extended>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta1_minus_attained: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta2_minus: Option<Extended>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta2_minus_attained: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta1_plus: Option<Extended>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta1_plus_attained: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta2_plus: Option<Extended>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta2_plus_attained: Option<bool>,
}

/// The symbol `G` above, given by `λ > 0` and its off-diagonal entry `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SymbolRepr", into = "SymbolRepr")]
pub struct TriangularSymbol {
    lambda: Frequency,
    g: ApPoly,
    declared_gaps: Option<DeclaredSpectrum>,
}

#[derive(Serialize, Deserialize)]
struct SymbolRepr {
    lambda: Frequency,
    g: ApPoly,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    declared_gaps: Option<DeclaredSpectrum>,
}

impl TryFrom<SymbolRepr> for TriangularSymbol {
    type Error = SymbolError;
    fn try_from(r: SymbolRepr) -> Result<Self, SymbolError> {
        match r.declared_gaps {
            Some(d) => TriangularSymbol::with_declarations(r.lambda, r.g, d),
            None => TriangularSymbol::new(r.lambda, r.g),
        }
    }
}

impl From<TriangularSymbol> for SymbolRepr {
    fn from(s: TriangularSymbol) -> Self {
        SymbolRepr { lambda: s.lambda, g: s.g, declared_gaps: s.declared_gaps }
    }
}

impl TriangularSymbol {
    pub fn new(lambda: Frequency, g: ApPoly) -> Result<Self, SymbolError> {
        if !lambda.is_positive() {
            return Err(SymbolError::NonPositiveLambda(lambda));
        }
        Ok(TriangularSymbol { lambda, g, declared_gaps: None })
    }

    pub fn with_declarations(lambda: Frequency, g: ApPoly, declared: DeclaredSpectrum) -> Result<Self, SymbolError> {
        let mut sym = Self::new(lambda, g)?;
        sym.declared_gaps = Some(declared);
        decompose(&sym)?;
        Ok(sym)
    }

    pub fn lambda(&self) -> Frequency {
        self.lambda
    }

    pub fn g(&self) -> &ApPoly {
        &self.g
    }

    pub fn declared_gaps(&self) -> Option<&DeclaredSpectrum> {
        self.declared_gaps.as_ref()
    }

    /// True when `g` is a plain almost periodic polynomial with no
    /// declared (truncated) spectral data.
    pub fn is_native(&self) -> bool {
        self.declared_gaps.is_none()
    }

    pub fn matrix(&self) -> ApMatrix {
        ApMatrix::new(ApPoly::exp(-self.lambda), ApPoly::zero(), self.g.clone(), ApPoly::exp(self.lambda))
    }

    /// `G^{-T}`, the transpose of the inverse.
    pub fn inverse_transpose(&self) -> ApMatrix {
        // det G = 1, so G^{-1} = adj G.
        self.matrix().adjugate().transpose()
    }
}

/// `g = g_- + (zero term) + g_+` together with the endpoints
/// `η_{1-} = -sup Ω(g_-)`, `η_{2-} = -inf Ω(g_-)`, `η_{1+} = inf Ω(g_+)`,
/// `η_{2+} = sup Ω(g_+)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapData {
    pub g_minus: ApPoly,
    pub g_plus: ApPoly,
    pub eta1_minus: Endpoint,
    pub eta2_minus: Endpoint,
    pub eta1_plus: Endpoint,
    pub eta2_plus: Endpoint,
    pub has_zero_frequency: bool,
    pub zero_term: Complex64,
}

impl GapData {
    pub fn eta1_sum(&self) -> Extended {
        self.eta1_plus.value + self.eta1_minus.value
    }

    pub fn is_big_gap(&self, lambda: Frequency) -> bool {
        self.eta1_sum() >= lambda
    }

    /// True when every endpoint is attained, as for plain polynomials
    /// with both halves nonzero.
    pub fn all_attained(&self) -> bool {
        [self.eta1_minus, self.eta2_minus, self.eta1_plus, self.eta2_plus]
            .iter()
            .all(|e| e.status == EndpointStatus::Attained)
    }

    /// `g_- + M(g) + g_+`, which is `g` again.
    pub fn reassemble(&self) -> ApPoly {
        &(&self.g_minus + &ApPoly::constant(self.zero_term)) + &self.g_plus
    }
}

fn declared_endpoint(
    name: &str,
    value: Option<Extended>,
    attained: Option<bool>,
    represented: Option<Frequency>,
    half: &ApPoly,
    side: Side,
) -> Result<Endpoint, SymbolError> {
    let bad = |msg: String| Err(SymbolError::InconsistentDeclaration(format!("{name}: {msg}")));
    let derived = represented.map(Endpoint::attained).unwrap_or_else(Endpoint::empty);
    let Some(value) = value else {
        if attained.is_some() {
            return bad("attainment flag given without a value".into());
        }
        return Ok(derived);
    };
    if value < Extended::ZERO {
        return bad(format!("negative endpoint {value}"));
    }
    let represented_here = value.finite().is_some_and(|v| {
        let freq = if side == Side::Plus { v } else { -v };
        half.contains_frequency(freq)
    });
    let status = match attained {
        Some(true) if !value.is_finite() => return bad("an infinite endpoint cannot be attained".into()),
        Some(true) => EndpointStatus::Attained,
        Some(false) if represented_here => return bad(format!("{value} is a represented frequency")),
        Some(false) => EndpointStatus::NotAttained,
        None if represented_here => EndpointStatus::Attained,
        None => EndpointStatus::Undecided,
    };
    Ok(Endpoint { value, status })
}

/// Splits `g` around frequency zero and computes its gap endpoints,
/// declarations taking precedence over the represented terms.
pub fn decompose(sym: &TriangularSymbol) -> Result<GapData, SymbolError> {
    let g = &sym.g;
    let g_plus = g.split_at(Frequency::ZERO, false).upper;
    let g_minus = g.split_at(Frequency::ZERO, true).lower;
    let zero_term = g.mean_value();
    let has_zero_frequency = g.contains_frequency(Frequency::ZERO);

    let d = sym.declared_gaps.clone().unwrap_or_default();
    let eta1_minus = declared_endpoint(
        "eta1_minus",
        d.eta1_minus,
        d.eta1_minus_attained,
        g_minus.max_frequency().map(|f| -f),
        &g_minus,
        Side::Minus,
    )?;
    let eta2_minus = declared_endpoint(
        "eta2_minus",
        d.eta2_minus,
        d.eta2_minus_attained,
        g_minus.min_frequency().map(|f| -f),
        &g_minus,
        Side::Minus,
    )?;
    let eta1_plus =
        declared_endpoint("eta1_plus", d.eta1_plus, d.eta1_plus_attained, g_plus.min_frequency(), &g_plus, Side::Plus)?;
    let eta2_plus =
        declared_endpoint("eta2_plus", d.eta2_plus, d.eta2_plus_attained, g_plus.max_frequency(), &g_plus, Side::Plus)?;

    for (lo, hi, half, name) in [(eta1_minus, eta2_minus, &g_minus, "minus"), (eta1_plus, eta2_plus, &g_plus, "plus")] {
        if half.is_zero() {
            continue;
        }
        if lo.value > hi.value {
            return Err(SymbolError::InconsistentDeclaration(format!(
                "{name} side: eta1 = {} > eta2 = {}",
                lo.value, hi.value
            )));
        }
        for f in half.spectrum() {
            let dist: Extended = f.abs().into();
            if dist < lo.value || dist > hi.value {
                return Err(SymbolError::InconsistentDeclaration(format!(
                    "represented frequency {f} lies outside the declared {name} range [{}, {}]",
                    lo.value, hi.value
                )));
            }
        }
    }

    Ok(GapData { g_minus, g_plus, eta1_minus, eta2_minus, eta1_plus, eta2_plus, has_zero_frequency, zero_term })
}

/// Data of a representation `g = a_- e_{-β} + a_+ e_ν` with
/// `λ/(ν+β) = N`, plus the admissible interval `[nu_min, nu_max]` for `ν`
/// and, for `N > 1`, `b_+ = e_{β/(N-1)} a_-`, `b_- = e_{-ν/(N-1)} a_+`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMembership {
    pub lambda: Frequency,
    pub n: u32,
    pub nu_min: Frequency,
    pub nu_max: Frequency,
    pub chosen_nu: Frequency,
    pub beta: Frequency,
    pub a_minus: ApPoly,
    pub a_plus: ApPoly,
    pub b_minus: Option<ApPoly>,
    pub b_plus: Option<ApPoly>,
    pub gap: GapData,
}

/// Which condition of the class test failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    /// `η_{1+} + η_{1-} = 0`: no spectral gap at all.
    NoGap,
    /// `η_{1-} < (N-1)/N η_{2-}`.
    MinusSpread,
    /// `η_{1+} < (N-1)/N η_{2+}`.
    PlusSpread,
    /// `η_{2+} + η_{2-} > λ/(N-1)`.
    WidthBound,
    /// No `ν` satisfies the exponential-form conditions for any `N`.
    NoAdmissibleNu,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NotInClass {
    pub n: Option<u32>,
    pub violated: Violation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Classification {
    Member(ClassMembership),
    NotInClass(NotInClass),
}

impl Classification {
    pub fn member(&self) -> Option<&ClassMembership> {
        match self {
            Classification::Member(m) => Some(m),
            Classification::NotInClass(_) => None,
        }
    }

    pub fn into_member(self) -> Option<ClassMembership> {
        match self {
            Classification::Member(m) => Some(m),
            Classification::NotInClass(_) => None,
        }
    }
}

/// The case of the invertibility criterion whose proof fixes `ν`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionCase {
    /// `N = 1`, both inner endpoints attained, gap length exactly `λ`.
    ExactGap,
    /// `N > 1`, both inner endpoints attained, `η_{1+} + η_{1-} = λ/N`.
    InnerSum,
    /// `N > 1`, `η_{1+}, η_{2+} ∈ Ω(g_+)`, `η_{2+} = N/(N-1) η_{1+}`.
    PlusRatio,
    /// `N > 1`, `-η_{1-}, -η_{2-} ∈ Ω(g_-)`, `η_{2-} = N/(N-1) η_{1-}`.
    MinusRatio,
    /// `N > 1`, outer endpoints attained, `η_{2+} + η_{2-} = λ/(N-1)`.
    OuterSum,
}

impl fmt::Display for CriterionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CriterionCase::ExactGap => "exact_gap",
            CriterionCase::InnerSum => "inner_sum",
            CriterionCase::PlusRatio => "plus_ratio",
            CriterionCase::MinusRatio => "minus_ratio",
            CriterionCase::OuterSum => "outer_sum",
        };
        f.write_str(s)
    }
}

fn ratio(n: u32, d: u32) -> Frequency {
    Frequency::ratio(n as i64, d as i64)
}

/// `[M, m]` with `M = max{λ/N - η_{1-}, (N-1)/N η_{2+}}` and
/// `m = min{η_{1+}, (λ - (N-1)η_{2-})/N}`. For `N = 1` this reduces to
/// `[max{0, λ-η_{1-}}, min{η_{1+}, λ}]`.
pub fn nu_interval(lambda: Frequency, n: u32, gap: &GapData) -> (Extended, Extended) {
    let lam_n: Extended = (lambda / Frequency::integer(n as i64)).into();
    let lower = (lam_n - gap.eta1_minus.value).max(gap.eta2_plus.value.scale(ratio(n - 1, n)));
    let upper_right = (Extended::from(lambda) - gap.eta2_minus.value.scale_int(n as i64 - 1)).scale(ratio(1, n));
    let upper = gap.eta1_plus.value.min(upper_right);
    (lower, upper)
}

fn build_membership(
    lambda: Frequency,
    n: u32,
    nu: Frequency,
    gap: GapData,
    interval: (Frequency, Frequency),
) -> ClassMembership {
    let beta = lambda / Frequency::integer(n as i64) - nu;
    let a_plus = gap.g_plus.shift(-nu);
    let a_minus = gap.g_minus.shift(beta);
    let (b_plus, b_minus) = if n > 1 {
        let k = Frequency::integer(n as i64 - 1);
        (Some(a_minus.shift(beta / k)), Some(a_plus.shift(-(nu / k))))
    } else {
        (None, None)
    };
    ClassMembership {
        lambda,
        n,
        nu_min: interval.0,
        nu_max: interval.1,
        chosen_nu: nu,
        beta,
        a_minus,
        a_plus,
        b_minus,
        b_plus,
        gap,
    }
}

fn finite_interval(lower: Extended, upper: Extended) -> Option<(Frequency, Frequency)> {
    match (lower.finite(), upper.finite()) {
        (Some(l), Some(u)) if l <= u => Some((l, u)),
        _ => None,
    }
}

fn classification_inputs(sym: &TriangularSymbol) -> Result<GapData, SymbolError> {
    let gap = decompose(sym)?;
    if gap.has_zero_frequency {
        return Err(SymbolError::ZeroFrequencyPresent);
    }
    if gap.g_minus.is_zero() && gap.g_plus.is_zero() {
        return Err(SymbolError::ZeroSymbol);
    }
    Ok(gap)
}

/// Decides membership of `g` in `S_{λ,N}` and builds the representation
/// with `ν` at the left end of its admissible interval.
pub fn classify(sym: &TriangularSymbol) -> Result<Classification, SymbolError> {
    let gap = classification_inputs(sym)?;
    let lambda = sym.lambda;
    let sum = gap.eta1_sum();

    let n = if sum >= lambda {
        1
    } else {
        let Some(s) = sum.finite().filter(|s| s.is_positive()) else {
            return Ok(Classification::NotInClass(NotInClass { n: None, violated: Violation::NoGap }));
        };
        (lambda / s).ceil() as u32
    };

    if n > 1 {
        let spread = ratio(n - 1, n);
        let checks = [
            (gap.eta1_minus.value >= gap.eta2_minus.value.scale(spread), Violation::MinusSpread),
            (gap.eta1_plus.value >= gap.eta2_plus.value.scale(spread), Violation::PlusSpread),
            (
                gap.eta2_plus.value + gap.eta2_minus.value <= lambda / Frequency::integer(n as i64 - 1),
                Violation::WidthBound,
            ),
        ];
        if let Some((_, violated)) = checks.iter().find(|(ok, _)| !ok) {
            return Ok(Classification::NotInClass(NotInClass { n: Some(n), violated: *violated }));
        }
    }

    let (lo, hi) = nu_interval(lambda, n, &gap);
    let interval = finite_interval(lo, hi)
        .ok_or_else(|| SymbolError::InvalidMembership(format!("empty nu interval [{lo}, {hi}] for N = {n}")))?;
    Ok(Classification::Member(build_membership(lambda, n, interval.0, gap, interval)))
}

impl ClassMembership {
    /// A membership from explicit representation data. Only the
    /// representation conditions are checked; `N` need not be minimal.
    pub fn from_parts(
        lambda: Frequency,
        n: u32,
        nu: Frequency,
        beta: Frequency,
        a_minus: ApPoly,
        a_plus: ApPoly,
    ) -> Result<Self, SymbolError> {
        if n == 0 {
            return Err(SymbolError::InvalidMembership("N must be positive".into()));
        }
        let g = &a_minus.shift(-beta) + &a_plus.shift(nu);
        let sym = TriangularSymbol::new(lambda, g)?;
        let gap = classification_inputs(&sym)?;
        let (lo, hi) = nu_interval(lambda, n, &gap);
        let interval = finite_interval(lo, hi)
            .ok_or_else(|| SymbolError::InvalidMembership(format!("empty nu interval [{lo}, {hi}]")))?;
        let mut m = build_membership(lambda, n, nu, gap, interval);
        // keep the caller's a_± exactly (they agree with the rebuilt ones)
        m.beta = beta;
        m.validate()?;
        Ok(m)
    }

    pub fn symbol(&self) -> TriangularSymbol {
        TriangularSymbol::new(self.lambda, self.gap.reassemble()).expect("lambda validated on construction")
    }

    /// `g = a_- e_{-β} + a_+ e_ν`.
    pub fn represented_g(&self) -> ApPoly {
        &self.a_minus.shift(-self.beta) + &self.a_plus.shift(self.chosen_nu)
    }

    /// Checks every representation invariant.
    pub fn validate(&self) -> Result<(), SymbolError> {
        let bad = |msg: &str| Err(SymbolError::InvalidMembership(msg.to_string()));
        let (nu, beta, lambda) = (self.chosen_nu, self.beta, self.lambda);
        if nu.is_negative() || beta.is_negative() || nu > lambda || beta > lambda || !(nu + beta).is_positive() {
            return bad("need 0 <= nu, beta <= lambda and nu + beta > 0");
        }
        if lambda / (nu + beta) != Frequency::integer(self.n as i64) {
            return bad("lambda / (nu + beta) != N");
        }
        if !self.a_plus.spectrum_on_side(Side::Plus) || !self.a_minus.spectrum_on_side(Side::Minus) {
            return bad("a_± spectra on the wrong side");
        }
        if self.n > 1 {
            match (&self.b_plus, &self.b_minus) {
                (Some(bp), Some(bm)) if bp.spectrum_on_side(Side::Plus) && bm.spectrum_on_side(Side::Minus) => {}
                _ => return bad("b_± missing or with spectra on the wrong side"),
            }
        }
        if nu < self.nu_min || nu > self.nu_max {
            return bad("nu outside [M, m]");
        }
        if self.represented_g() != self.gap.reassemble() {
            return bad("a_- e_{-beta} + a_+ e_nu does not reproduce g");
        }
        Ok(())
    }

    /// Rebinds `ν` inside `[M, m]` and rebuilds `β`, `a_±`, `b_±`.
    pub fn with_nu(&self, nu: Frequency) -> Result<ClassMembership, SymbolError> {
        if nu < self.nu_min || nu > self.nu_max {
            return Err(SymbolError::NuOutOfInterval { nu: nu.into(), min: self.nu_min, max: self.nu_max });
        }
        Ok(build_membership(self.lambda, self.n, nu, self.gap.clone(), (self.nu_min, self.nu_max)))
    }

    /// The `ν` that the invertibility argument uses for `case`.
    pub fn case_nu(&self, case: CriterionCase) -> Extended {
        let gap = &self.gap;
        let n = self.n;
        match case {
            CriterionCase::ExactGap => gap.eta1_plus.value.min(self.lambda.into()),
            CriterionCase::InnerSum | CriterionCase::PlusRatio => gap.eta1_plus.value,
            CriterionCase::MinusRatio => {
                Extended::from(self.lambda / Frequency::integer(n as i64)) - gap.eta1_minus.value
            }
            CriterionCase::OuterSum => gap.eta2_plus.value.scale(ratio(n.saturating_sub(1), n)),
        }
    }
}

/// Rebinds `ν` to the value fixed for `case`.
pub fn choose_nu(membership: &ClassMembership, case: CriterionCase) -> Result<ClassMembership, SymbolError> {
    let nu = membership.case_nu(case);
    match nu.finite() {
        Some(v) => membership.with_nu(v),
        None => Err(SymbolError::NuOutOfInterval { nu, min: membership.nu_min, max: membership.nu_max }),
    }
}

/// Membership test for `g = c e_{-σ} + g_+` by direct search over `N` for
/// an admissible `ν` with `ν <= η_{1+}`, `N/(N-1) ν >= η_{2+}` (for `N > 1`)
/// and `λ/N - σ <= ν <= λ/N - (N-1)/N σ`.
pub fn classify_exp_form(sym: &TriangularSymbol, sigma: Frequency) -> Result<Classification, SymbolError> {
    let gap = decompose(sym)?;
    if gap.has_zero_frequency {
        return Err(SymbolError::ZeroFrequencyPresent);
    }
    match gap.g_minus.as_single_exponential() {
        Some((f, _)) if f == -sigma && sigma.is_positive() => {}
        Some((f, _)) => return Err(SymbolError::FormMismatch(format!("g_- sits at {f}, expected -{sigma}"))),
        None => return Err(SymbolError::FormMismatch(format!("g_- has {} terms", gap.g_minus.len()))),
    }
    if gap.g_plus.is_zero() {
        return Err(SymbolError::FormMismatch("g_+ is zero".into()));
    }
    let lambda = sym.lambda;
    let sigma_x: Extended = sigma.into();
    // Feasibility forces N <= 1 + λ/(η_{2+} + σ).
    let n_max = match (gap.eta2_plus.value + sigma_x).finite() {
        Some(w) => (Frequency::ONE + lambda / w).floor().max(1) as u32,
        None => 1,
    };
    for n in 1..=n_max {
        let lam_n: Extended = (lambda / Frequency::integer(n as i64)).into();
        let spread = ratio(n - 1, n);
        let lo = (lam_n - sigma_x).max(gap.eta2_plus.value.scale(spread)).max(Extended::ZERO);
        let hi = (lam_n - sigma_x.scale(spread)).min(gap.eta1_plus.value).min(lambda.into());
        if let Some(interval) = finite_interval(lo, hi) {
            return Ok(Classification::Member(build_membership(lambda, n, interval.0, gap, interval)));
        }
    }
    Ok(Classification::NotInClass(NotInClass { n: None, violated: Violation::NoAdmissibleNu }))
}
