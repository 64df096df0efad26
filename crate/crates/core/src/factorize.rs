//! Partial AP indices, Toeplitz verdicts and explicit factorizations
//! `G = G_- D G_+^{-1}` with `D = diag(e_{-μ}, e_μ)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::appoly::{ApPoly, Side};
use crate::corona::{self, CoronaError, CoronaPair, CoronaVerdict, Status};
use crate::frequency::{Extended, Frequency};
use crate::matrix::{ApMatrix, Matrix2};
use crate::par::Exec;
use crate::rhsolve::{self, Reduction, RhError, RhSolution};
use crate::symbol::{self, ClassMembership, Classification, GapData, SymbolError, TriangularSymbol, Truth};
use crate::verify::{self, Check, VerificationReport, VerifyError};

/// Sample count for the reconstruction check inside construction.
pub const RECONSTRUCTION_POINTS: usize = 100;
/// Bound on the nonconstant part of `Z` in [`canonical_equivalence`].
pub const EQUIVALENCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FactorizeError {
    #[error("not a big-gap symbol")]
    NotBigGap,
    #[error("corona pair construction failed: {0}")]
    CoronaUnsupported(#[from] CoronaError),
    #[error("reconstruction residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    ReconstructionFailure { residual: f64, tol: f64 },
    #[error("factorization invariant violated: {0}")]
    InvariantViolation(String),
    #[error("factorizations are not equivalent: {0}")]
    NotEquivalent(String),
    #[error("no factorization route for this symbol: {0}")]
    NoRoute(String),
    #[error(transparent)]
    Solve(#[from] RhError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexStatus {
    Canonical,
    NonCanonical,
    NotApFactorable,
    Unknown,
}

/// Which index formula produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexCase {
    BigGap,
    /// Both inner endpoints attained, `λ` above both thresholds.
    InnerEndpoints,
    /// Both plus endpoints attained, `λ` between the thresholds.
    PlusEndpoints,
    /// Both minus endpoints attained, `λ` between the thresholds.
    MinusEndpoints,
    /// Both outer endpoints attained, `λ` below both thresholds.
    OuterEndpoints,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexResult {
    pub status: IndexStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Frequency>,
    /// `(δ1, δ2) = (-μ, μ)` when factorable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partial_indices: Option<(Frequency, Frequency)>,
    pub cases: Vec<IndexCase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_columns: Option<([ApPoly; 2], [ApPoly; 2])>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl IndexResult {
    fn factorable(mu: Frequency, cases: Vec<IndexCase>) -> Self {
        IndexResult {
            status: if mu.is_zero() { IndexStatus::Canonical } else { IndexStatus::NonCanonical },
            mu: Some(mu),
            partial_indices: Some((-mu, mu)),
            cases,
            first_columns: None,
            detail: String::new(),
        }
    }

    fn unfactorable(status: IndexStatus, detail: impl Into<String>) -> Self {
        IndexResult {
            status,
            mu: None,
            partial_indices: None,
            cases: Vec::new(),
            first_columns: None,
            detail: detail.into(),
        }
    }

    pub fn is_factorable(&self) -> bool {
        matches!(self.status, IndexStatus::Canonical | IndexStatus::NonCanonical)
    }
}

/// Index of a big-gap symbol: factorable iff on each side the inner
/// endpoint is attained or at least `λ`, and then
/// `μ = min{λ, η_{1+}, η_{1-}, η_{1+} + η_{1-} - λ}`.
pub fn indices_biggap(gap: &GapData, lambda: Frequency) -> Result<IndexResult, FactorizeError> {
    if !gap.is_big_gap(lambda) {
        return Err(FactorizeError::NotBigGap);
    }
    let side_ok = |e: symbol::Endpoint| e.in_spectrum().or(Truth::from_bool(e.value >= lambda));
    match side_ok(gap.eta1_plus).and(side_ok(gap.eta1_minus)) {
        Truth::No => {
            let side = if side_ok(gap.eta1_plus) == Truth::No { "plus" } else { "minus" };
            Ok(IndexResult::unfactorable(
                IndexStatus::NotApFactorable,
                format!("{side} inner endpoint is neither attained nor >= lambda"),
            ))
        }
        Truth::Unknown => Ok(IndexResult::unfactorable(IndexStatus::Unknown, "inner endpoint attainment undecided")),
        Truth::Yes => {
            let lam: Extended = lambda.into();
            let mu = lam.min(gap.eta1_plus.value).min(gap.eta1_minus.value).min(gap.eta1_sum() - lam);
            let mu = mu.finite().expect("bounded by lambda");
            Ok(IndexResult::factorable(mu, vec![IndexCase::BigGap]))
        }
    }
}

/// The four candidate values whose minimum is the index for `N > 1`:
/// `N(η1+ + η1-) - λ`, `Nη1+ - (N-1)η2+`, `Nη1- - (N-1)η2-`,
/// `λ - (N-1)(η2+ + η2-)`.
pub fn structured_index_candidates(gap: &GapData, lambda: Frequency, n: u32) -> Option<[Frequency; 4]> {
    let (e1p, e1m) = (gap.eta1_plus.value.finite()?, gap.eta1_minus.value.finite()?);
    let (e2p, e2m) = (gap.eta2_plus.value.finite()?, gap.eta2_minus.value.finite()?);
    let (nn, k) = (n as i64, n as i64 - 1);
    Some([(e1p + e1m) * nn - lambda, e1p * nn - e2p * k, e1m * nn - e2m * k, lambda - (e2p + e2m) * k])
}

/// Index for `g ∈ S_{λ,N}`, `N > 1`, given the strip verdict.
pub fn indices_structured(gap: &GapData, lambda: Frequency, n: u32, strip: &CoronaVerdict) -> IndexResult {
    if strip.overall() != Status::Holds {
        return IndexResult::unfactorable(IndexStatus::Unknown, "strip condition not established");
    }
    let Some(candidates) = structured_index_candidates(gap, lambda, n) else {
        return IndexResult::unfactorable(IndexStatus::Unknown, "infinite outer endpoint");
    };
    let (nn, k) = (n as i64, n as i64 - 1);
    let (e1p, e1m) = (gap.eta1_plus.value.finite().unwrap(), gap.eta1_minus.value.finite().unwrap());
    let (e2p, e2m) = (gap.eta2_plus.value.finite().unwrap(), gap.eta2_minus.value.finite().unwrap());
    let a = e1p * nn + e2m * k;
    let b = e1m * nn + e2p * k;
    let (s1p, s1m, s2p, s2m) = (
        gap.eta1_plus.in_spectrum(),
        gap.eta1_minus.in_spectrum(),
        gap.eta2_plus.in_spectrum(),
        gap.eta2_minus.in_spectrum(),
    );
    let t = Truth::from_bool;
    let cases = [
        (IndexCase::InnerEndpoints, s1p.and(s1m).and(t(lambda >= a.max(b))), candidates[0]),
        (IndexCase::PlusEndpoints, s1p.and(s2p).and(t(a <= lambda && lambda <= b)), candidates[1]),
        (IndexCase::MinusEndpoints, s1m.and(s2m).and(t(b <= lambda && lambda <= a)), candidates[2]),
        (IndexCase::OuterEndpoints, s2p.and(s2m).and(t(lambda <= a.min(b))), candidates[3]),
    ];
    let min = candidates.into_iter().min().expect("four candidates");
    let fired: Vec<_> = cases.iter().filter(|(_, truth, _)| *truth == Truth::Yes).collect();
    if fired.is_empty() {
        let detail = if cases.iter().any(|(_, truth, _)| *truth == Truth::Unknown) {
            "index case undecided"
        } else {
            "no index case applies"
        };
        return IndexResult::unfactorable(IndexStatus::Unknown, detail);
    }
    if let Some((case, _, mu)) = fired.iter().find(|(_, _, mu)| *mu != min) {
        return IndexResult::unfactorable(
            IndexStatus::Unknown,
            format!("case {case:?} gives {mu}, but the minimum of the candidates is {min}"),
        );
    }
    IndexResult::factorable(min, fired.iter().map(|(c, _, _)| *c).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Invertible,
    FactorableNonCanonical,
    NotSemiFredholm,
    NotApFactorable,
    Unknown,
}

/// What a single argument concluded; `NotInvertible` only appears in
/// justifications.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Finding {
    Invertible,
    NotInvertible,
    FactorableNonCanonical,
    NotSemiFredholm,
    NotApFactorable,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArgumentTag {
    /// Zero-frequency term: explicit solutions with constant components.
    OneSided,
    /// `g = c e_{-σ} + e_μ a_+` with `μ + σ >= λ`.
    ExponentialBigGap,
    /// Big-gap index formula.
    BigGapIndex,
    /// Endpoint conditions (and strip condition for `N > 1`).
    InvertibilityCriterion,
    /// Index formula for `N > 1`.
    StructuredIndex,
    /// `g = c e_{-σ} + e_ν a_+` in `S_{λ,N}` with shifted `a_+` on one side.
    ExponentialStructured,
    /// Nonzero partial indices give infinite kernel and cokernel (the
    /// transposed inverse is conjugate to `G`).
    Transposition,
    /// Membership test.
    Classification,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Justification {
    pub tag: ArgumentTag,
    pub finding: Finding,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToeplitzVerdict {
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Frequency>,
    pub not_semi_fredholm: bool,
    /// True when negative conclusions carry "only if" strength (APW input).
    pub apw: bool,
    pub justifications: Vec<Justification>,
}

impl ToeplitzVerdict {
    pub fn fired(&self, tag: ArgumentTag) -> Option<&Justification> {
        self.justifications.iter().find(|j| j.tag == tag)
    }
}

struct VerdictBuilder {
    apw: bool,
    mu: Option<Frequency>,
    justifications: Vec<Justification>,
}

impl VerdictBuilder {
    fn push(&mut self, tag: ArgumentTag, finding: Finding, detail: impl Into<String>) {
        let mut detail = detail.into();
        if !self.apw && finding == Finding::NotInvertible {
            detail.push_str(" (necessity assumes APW data)");
        }
        self.justifications.push(Justification { tag, finding, detail });
    }

    fn has(&self, finding: Finding) -> bool {
        self.justifications.iter().any(|j| j.finding == finding)
    }

    fn record_index(&mut self, tag: ArgumentTag, idx: &IndexResult) {
        match idx.status {
            IndexStatus::Canonical => {
                self.mu = idx.mu;
                self.push(tag, Finding::Invertible, format!("canonical, mu = 0, cases {:?}", idx.cases));
            }
            IndexStatus::NonCanonical => {
                let mu = idx.mu.expect("factorable");
                self.mu = Some(mu);
                self.push(
                    tag,
                    Finding::FactorableNonCanonical,
                    format!("partial indices ±{mu}, cases {:?}", idx.cases),
                );
                self.push(
                    ArgumentTag::Transposition,
                    Finding::NotSemiFredholm,
                    format!("nonzero partial indices ±{mu}: infinite kernel for G and for G^-T"),
                );
            }
            IndexStatus::NotApFactorable => self.push(tag, Finding::NotApFactorable, idx.detail.clone()),
            IndexStatus::Unknown => self.push(tag, Finding::Undetermined, idx.detail.clone()),
        }
    }

    fn finish(self) -> ToeplitzVerdict {
        let verdict = if self.has(Finding::Invertible) {
            Verdict::Invertible
        } else if self.has(Finding::FactorableNonCanonical) {
            Verdict::FactorableNonCanonical
        } else if self.has(Finding::NotApFactorable) {
            Verdict::NotApFactorable
        } else if self.has(Finding::NotSemiFredholm) {
            Verdict::NotSemiFredholm
        } else {
            Verdict::Unknown
        };
        let mu = if verdict == Verdict::Invertible { Some(Frequency::ZERO) } else { self.mu };
        ToeplitzVerdict {
            verdict,
            mu,
            not_semi_fredholm: self.has(Finding::NotSemiFredholm),
            apw: self.apw,
            justifications: self.justifications,
        }
    }
}

/// `Some(σ)` when `g_-` is exactly `c e_{-σ}` with both minus endpoints attained at `σ`.
fn single_exponential_minus(gap: &GapData) -> Option<Frequency> {
    let (f, _) = gap.g_minus.as_single_exponential()?;
    let sigma = -f;
    let pinned = |e: symbol::Endpoint| e.value == sigma && e.status == symbol::EndpointStatus::Attained;
    (pinned(gap.eta1_minus) && pinned(gap.eta2_minus)).then_some(sigma)
}

fn classify_big_gap(b: &mut VerdictBuilder, gap: &GapData, lambda: Frequency) {
    let spectral = corona::spectral_corona_check(gap, 1, lambda);
    match spectral.overall() {
        Status::Holds => {
            b.push(ArgumentTag::InvertibilityCriterion, Finding::Invertible, "inner endpoints attained, gap = lambda")
        }
        Status::Fails => {
            b.push(ArgumentTag::InvertibilityCriterion, Finding::NotInvertible, "endpoint condition fails for N = 1")
        }
        Status::Unknown => {}
    }

    if let (Some(sigma), false) = (single_exponential_minus(gap), gap.g_plus.is_zero()) {
        let mu = gap.eta1_plus.value;
        let sum = mu + Extended::from(sigma);
        if sum == lambda {
            match gap.eta1_plus.in_spectrum() {
                Truth::Yes => b.push(
                    ArgumentTag::ExponentialBigGap,
                    Finding::Invertible,
                    format!("mu + sigma = {lambda}, a_+ has a mean value"),
                ),
                Truth::No => b.push(
                    ArgumentTag::ExponentialBigGap,
                    Finding::NotInvertible,
                    "mu + sigma = lambda but a_+ has no mean value",
                ),
                Truth::Unknown => {}
            }
        } else if sum > lambda {
            b.push(
                ArgumentTag::ExponentialBigGap,
                Finding::NotSemiFredholm,
                format!("mu + sigma = {sum} > lambda = {lambda}"),
            );
        }
    }

    let idx = indices_biggap(gap, lambda).expect("big gap checked by caller");
    b.record_index(ArgumentTag::BigGapIndex, &idx);
}

/// Conditions under which a symbol `c e_{-σ} + e_ν a_+ ∈ S_{λ,N}` is not
/// semi-Fredholm: `σ + ν > λ/N` with `e_{-ν/(N-1)} a_+` strictly inside
/// the lower class (tested at `ν = m`), or `(N-1)σ/N + ν < λ/N` with `a_+`
/// strictly inside the upper class (tested at `ν = M`).
fn exponential_structured_nsf(sym: &TriangularSymbol, gap: &GapData, sigma: Frequency) -> Option<String> {
    let m = symbol::classify_exp_form(sym, sigma).ok()?.into_member()?;
    if m.n < 2 {
        return None;
    }
    let lambda = sym.lambda();
    let (nn, k) = (Frequency::integer(m.n as i64), Frequency::integer(m.n as i64 - 1));
    let eta2p = gap.eta2_plus.value;
    let eta1p = gap.eta1_plus.value;
    let hi = m.nu_max;
    if sigma + hi > lambda / nn && eta2p < Extended::from(hi * nn / k) {
        return Some(format!("sigma + nu > lambda/N at nu = {hi}"));
    }
    let lo = m.nu_min;
    if sigma * k / nn + lo < lambda / nn && eta1p > Extended::from(lo) {
        return Some(format!("(N-1)sigma/N + nu < lambda/N at nu = {lo}"));
    }
    None
}

fn classify_structured(b: &mut VerdictBuilder, sym: &TriangularSymbol, gap: &GapData) {
    let lambda = sym.lambda();
    let m = match symbol::classify(sym) {
        Ok(Classification::Member(m)) => m,
        Ok(Classification::NotInClass(nc)) => {
            b.push(ArgumentTag::Classification, Finding::Undetermined, format!("not in any class: {:?}", nc.violated));
            return;
        }
        Err(e) => {
            b.push(ArgumentTag::Classification, Finding::Undetermined, e.to_string());
            return;
        }
    };
    let spectral = corona::spectral_corona_check(gap, m.n, lambda);
    let strip = corona::strip_condition(&gap.g_minus, &gap.g_plus);
    match (spectral.overall(), strip.overall()) {
        (Status::Holds, Status::Holds) => b.push(
            ArgumentTag::InvertibilityCriterion,
            Finding::Invertible,
            format!("N = {}, endpoint conditions {:?} and strip condition hold", m.n, spectral.fired_conditions),
        ),
        (Status::Fails, _) | (_, Status::Fails) => b.push(
            ArgumentTag::InvertibilityCriterion,
            Finding::NotInvertible,
            format!("N = {}, endpoint {:?} / strip {:?}", m.n, spectral.overall(), strip.overall()),
        ),
        _ => {}
    }
    b.record_index(ArgumentTag::StructuredIndex, &indices_structured(gap, lambda, m.n, &strip));
    if let Some(sigma) = single_exponential_minus(gap) {
        if let Some(detail) = exponential_structured_nsf(sym, gap, sigma) {
            b.push(ArgumentTag::ExponentialStructured, Finding::NotSemiFredholm, detail);
        }
    }
}

/// Toeplitz operator verdict for `T_G`. Native (undeclared) input is
/// treated as APW regardless of `apw_flag`.
pub fn classify_toeplitz(sym: &TriangularSymbol, apw_flag: bool) -> ToeplitzVerdict {
    let mut b = VerdictBuilder { apw: apw_flag || sym.is_native(), mu: None, justifications: Vec::new() };
    let gap = match symbol::decompose(sym) {
        Ok(gap) => gap,
        Err(e) => {
            b.push(ArgumentTag::Classification, Finding::Undetermined, e.to_string());
            return b.finish();
        }
    };
    if gap.has_zero_frequency {
        match rhsolve::solve_one_sided(sym) {
            Ok(sol) => {
                b.mu = Some(Frequency::ZERO);
                b.push(
                    ArgumentTag::OneSided,
                    Finding::Invertible,
                    format!(
                        "phi_+ = ({}, {}), phi_- = ({}, {}) with a constant component on each side",
                        sol.phi1_plus, sol.phi2_plus, sol.phi1_minus, sol.phi2_minus
                    ),
                );
            }
            Err(e) => b.push(ArgumentTag::OneSided, Finding::Undetermined, e.to_string()),
        }
    } else if gap.g_minus.is_zero() && gap.g_plus.is_zero() {
        b.push(ArgumentTag::Classification, Finding::Undetermined, "g is identically zero");
    } else if gap.is_big_gap(sym.lambda()) {
        classify_big_gap(&mut b, &gap, sym.lambda());
    } else {
        classify_structured(&mut b, sym, &gap);
    }
    b.finish()
}

/// `G = G_- diag(e_{δ1}, e_{δ2}) G_+^{-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Factorization {
    pub g_minus: ApMatrix,
    pub g_plus: ApMatrix,
    pub d_exponents: (Frequency, Frequency),
    /// Zero for exact constructions; otherwise a sup bound on the
    /// truncation error of the corona pairs.
    pub truncation_residual: f64,
}

impl Factorization {
    pub fn middle_factor(&self) -> ApMatrix {
        ApMatrix::exp_diagonal(self.d_exponents.0, self.d_exponents.1)
    }

    pub fn mu(&self) -> Frequency {
        self.d_exponents.1
    }

    pub fn is_canonical(&self) -> bool {
        self.d_exponents.0.is_zero() && self.d_exponents.1.is_zero()
    }

    pub fn is_exact(&self) -> bool {
        self.truncation_residual == 0.0
    }

    /// `G_- D adj(G_+) / det G_+`, using the mean value of `det G_+`.
    pub fn reconstruct(&self) -> ApMatrix {
        let det = self.g_plus.det().mean_value();
        (&(&self.g_minus * &self.middle_factor()) * &self.g_plus.adjugate()).scale(det.inv())
    }

    /// Structural and symbolic checks.
    pub fn audit(&self, sym: &TriangularSymbol) -> Vec<Check> {
        let mut checks = Vec::new();
        for (name, m, side) in [("g_plus", &self.g_plus, Side::Plus), ("g_minus", &self.g_minus, Side::Minus)] {
            let audit = verify::spectrum_sign_audit(m, side);
            let bad: Vec<_> = audit.failures().map(|c| c.name.clone()).collect();
            checks.push(Check::new(format!("{name}_spectrum"), bad.is_empty(), format!("offending entries: {bad:?}")));
            let det = m.det();
            let c = det.mean_value();
            let drift = (&det - &ApPoly::constant(c)).l1_norm();
            let allowed = self.truncation_residual.max(1e-12) * 4.0;
            checks.push(Check::new(
                format!("{name}_det_constant"),
                c.norm() > 1e-12 && drift <= allowed,
                format!("det = {:.6}{:+.6}i, nonconstant part of size {drift:.3e}", c.re, c.im + 0.0),
            ));
        }
        let diff = self.reconstruct().sub(&sym.matrix()).max_abs_coefficient();
        let allowed = if self.is_exact() { 1e-12 } else { 4.0 * self.truncation_residual.max(1e-12) };
        checks.push(Check::new(
            "symbolic_reconstruction",
            diff <= allowed,
            format!("max coefficient error {diff:.3e}"),
        ));
        checks
    }
}

/// Factorization through a solution of the homogeneous problem:
/// reduce to `ψ̃_+`, `ψ_-`, complete them to unimodular `H_±`, read the
/// remaining off-diagonal entry from `H_-^{-1} G H_+` and split it.
pub fn construct_factorization(
    sym: &TriangularSymbol,
    sol: &RhSolution,
    tol: f64,
) -> Result<Factorization, FactorizeError> {
    construct_factorization_with_pairs(sym, sol, tol, None)
}

/// As [`construct_factorization`], optionally with caller-supplied corona
/// pairs `(plus, minus)` for the reduced vectors.
pub fn construct_factorization_with_pairs(
    sym: &TriangularSymbol,
    sol: &RhSolution,
    tol: f64,
    pairs: Option<(CoronaPair, CoronaPair)>,
) -> Result<Factorization, FactorizeError> {
    let red = rhsolve::exponential_reduction(sol)?;
    let mu = red.mu();
    let [p1, p2] = &red.psi_plus;
    let [m1, m2] = &red.psi_minus;
    let (pair_plus, pair_minus) = match pairs {
        Some(p) => p,
        None => {
            // truncation error is amplified by the factor entries, so leave headroom
            let pair_tol = (tol * 1e-3).max(1e-15);
            (
                corona::exact_first_pair(p1, p2, Side::Plus, pair_tol)?,
                corona::exact_first_pair(m1, m2, Side::Minus, pair_tol)?,
            )
        }
    };
    let psi_plus = red.psi_plus.clone().map(|p| p.shift(mu));
    let h_plus = corona::build_h([&psi_plus[0], &psi_plus[1]], &pair_plus, mu, Side::Plus)?;
    let h_minus = corona::build_h([m1, m2], &pair_minus, Frequency::ZERO, Side::Minus)?;

    let g1 = &(&h_minus.adjugate() * &sym.matrix()) * &h_plus;
    let split = g1.entry(0, 1).shift(mu).split_at(Frequency::ZERO, true);
    let g_plus_part = split.upper;
    let g_minus_part = split.lower.shift(-(mu + mu));
    let l_minus = ApMatrix::new(ApPoly::one(), g_minus_part, ApPoly::zero(), ApPoly::one());
    let l_plus = ApMatrix::new(ApPoly::one(), -g_plus_part, ApPoly::zero(), ApPoly::one());

    let truncation_residual =
        [&pair_plus, &pair_minus].iter().filter(|p| !p.is_exact()).map(|p| p.residual_bound).fold(0.0, f64::max);
    let fac = Factorization {
        g_minus: &h_minus * &l_minus,
        g_plus: &h_plus * &l_plus,
        d_exponents: (-mu, mu),
        truncation_residual,
    };

    if let Some(bad) = fac.audit(sym).into_iter().find(|c| !c.passed) {
        return Err(FactorizeError::InvariantViolation(format!("{}: {}", bad.name, bad.detail)));
    }
    let report = verify::grid_residual(sym, &fac, RECONSTRUCTION_POINTS, 0, Exec::Sequential)?;
    if report.max_residual.is_nan() || report.max_residual > tol.max(1e-12) {
        return Err(FactorizeError::ReconstructionFailure { residual: report.max_residual, tol });
    }
    Ok(fac)
}

/// The constant `Z` with `f2.G_± = f1.G_± Z` for two canonical factorizations.
pub fn canonical_equivalence(f1: &Factorization, f2: &Factorization) -> Result<Matrix2, FactorizeError> {
    if !f1.is_canonical() || !f2.is_canonical() {
        return Err(FactorizeError::NotEquivalent("both factorizations must be canonical".into()));
    }
    let quotient = |a: &ApMatrix, b: &ApMatrix, name: &str| -> Result<Matrix2, FactorizeError> {
        let det = a.det().mean_value();
        if det.norm() < 1e-12 {
            return Err(FactorizeError::NotEquivalent(format!("{name} of the first factorization is singular")));
        }
        let z = (&a.adjugate() * b).scale(det.inv());
        for ((i, j), e) in z.entries() {
            let nonconstant = (e - &ApPoly::constant(e.mean_value())).max_abs_coefficient();
            if nonconstant >= EQUIVALENCE_TOL {
                return Err(FactorizeError::NotEquivalent(format!(
                    "entry ({},{}) of the {name} quotient is not constant: {e}",
                    i + 1,
                    j + 1
                )));
            }
        }
        Ok(z.mean_values())
    };
    let zp = quotient(&f1.g_plus, &f2.g_plus, "G_+")?;
    let zm = quotient(&f1.g_minus, &f2.g_minus, "G_-")?;
    let gap = crate::matrix::dense::max_diff(&zp, &zm);
    if gap >= EQUIVALENCE_TOL {
        return Err(FactorizeError::NotEquivalent(format!("G_+ and G_- quotients differ by {gap:.3e}")));
    }
    Ok(zp)
}

/// Partial indices add up to the mean motion of `det G = 1`, which is 0.
pub fn mean_motion_balance(result: &IndexResult) -> bool {
    result.partial_indices.is_some_and(|(d1, d2)| (d1 + d2).is_zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorizeOptions {
    pub tol: f64,
    pub apw: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu_override: Option<Frequency>,
    pub seed: u64,
    pub points: usize,
}

impl Default for FactorizeOptions {
    fn default() -> Self {
        FactorizeOptions { tol: 1e-10, apw: false, nu_override: None, seed: 0, points: RECONSTRUCTION_POINTS }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub symbol: TriangularSymbol,
    pub verdict: ToeplitzVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<IndexResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub membership: Option<ClassMembership>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<RhSolution>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factorization: Option<Factorization>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residuals: Option<VerificationReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// The solution used to build a factorization, with the membership
/// data when the symbol lies in some `S_{λ,N}`.
pub fn select_solution(
    sym: &TriangularSymbol,
    nu_override: Option<Frequency>,
) -> Result<(RhSolution, Option<ClassMembership>), FactorizeError> {
    let gap = symbol::decompose(sym)?;
    if gap.has_zero_frequency {
        return Ok((rhsolve::solve_one_sided(sym)?, None));
    }
    let lambda = sym.lambda();
    if gap.is_big_gap(lambda) {
        let nu = nu_override.unwrap_or(rhsolve::biggap_nu_range(&gap, lambda).0);
        let membership = symbol::classify(sym)?.into_member();
        return Ok((rhsolve::solve_biggap(&gap, lambda, nu)?, membership));
    }
    match symbol::classify(sym)? {
        Classification::Member(m) => {
            let m = match nu_override {
                Some(nu) => m.with_nu(nu)?,
                None => m,
            };
            Ok((rhsolve::solve_structured(&m)?, Some(m)))
        }
        Classification::NotInClass(nc) => Err(FactorizeError::NoRoute(format!("not in any class: {:?}", nc.violated))),
    }
}

fn index_from_verdict(v: &ToeplitzVerdict) -> Option<IndexResult> {
    match v.verdict {
        Verdict::Invertible => Some(IndexResult::factorable(Frequency::ZERO, Vec::new())),
        Verdict::FactorableNonCanonical => v.mu.map(|mu| IndexResult::factorable(mu, Vec::new())),
        Verdict::NotApFactorable => Some(IndexResult::unfactorable(IndexStatus::NotApFactorable, "")),
        _ => None,
    }
}

/// Verdict, index and (for native symbols) an explicit verified factorization.
pub fn factorize_symbol(sym: &TriangularSymbol, opts: &FactorizeOptions) -> FactorizationReport {
    let verdict = classify_toeplitz(sym, opts.apw);
    let mut index = index_from_verdict(&verdict);
    if let Some(idx) = index.as_mut() {
        // structured cases are filled in below
        if verdict.fired(ArgumentTag::BigGapIndex).is_some() {
            idx.cases = vec![IndexCase::BigGap];
        }
    }
    let mut report = FactorizationReport {
        symbol: sym.clone(),
        verdict,
        index,
        membership: None,
        solution: None,
        factorization: None,
        residuals: None,
        notes: Vec::new(),
    };
    if let Ok(gap) = symbol::decompose(sym) {
        if !gap.has_zero_frequency && !gap.is_big_gap(sym.lambda()) {
            if let Ok(Classification::Member(m)) = symbol::classify(sym) {
                let strip = corona::strip_condition(&gap.g_minus, &gap.g_plus);
                let structured = indices_structured(&gap, sym.lambda(), m.n, &strip);
                if let Some(idx) = report.index.as_mut() {
                    idx.cases = structured.cases;
                }
            }
        }
    }

    let factorable = matches!(report.verdict.verdict, Verdict::Invertible | Verdict::FactorableNonCanonical);
    if !sym.is_native() {
        report.notes.push("declared spectral data: no explicit factorization is built for truncated input".into());
        return report;
    }
    if !factorable {
        return report;
    }
    let (sol, membership) = match select_solution(sym, opts.nu_override) {
        Ok(s) => s,
        Err(e) => {
            report.notes.push(format!("no solution: {e}"));
            return report;
        }
    };
    report.membership = membership;
    if let Ok(red) = rhsolve::exponential_reduction(&sol) {
        attach_first_columns(&mut report, &red);
    }
    match construct_factorization(sym, &sol, opts.tol) {
        Ok(fac) => {
            if let Some(mu) = report.verdict.mu {
                if mu != fac.mu() {
                    report
                        .notes
                        .push(format!("constructed factorization has mu = {}, index formula gives {mu}", fac.mu()));
                }
            }
            match verify::grid_residual(sym, &fac, opts.points, opts.seed, Exec::default()) {
                Ok(mut r) => {
                    r.checks.extend(fac.audit(sym));
                    report.residuals = Some(r);
                }
                Err(e) => report.notes.push(e.to_string()),
            }
            report.factorization = Some(fac);
        }
        Err(e) => report.notes.push(format!("factorization not constructed: {e}")),
    }
    report.solution = Some(sol);
    report
}

fn attach_first_columns(report: &mut FactorizationReport, red: &Reduction) {
    if let Some(idx) = report.index.as_mut() {
        idx.first_columns = Some((red.psi_plus.clone(), red.psi_minus.clone()));
    }
}

/// Complex helper for tests and callers building scaled factorizations.
pub fn diag(a: Complex64, b: Complex64) -> Matrix2 {
    let z = Complex64::new(0.0, 0.0);
    [[a, z], [z, b]]
}
