//! Report rendering.

use std::fmt::Write;

use apfact::factorize::{Factorization, FactorizationReport};
use apfact::symbol::{self, Classification};
use apfact::verify::{self, VerificationReport};

use crate::job::OutputFormat;
use crate::report::{ClassifyOutcome, Outcome, Report};

pub const CSV_HEADER: &str = "x,abs_g_minus,abs_g_plus,residual";
/// CSV samples `x = -50, -49.5, ..., 50`.
const CSV_WINDOW: f64 = 50.0;
const CSV_POINTS: usize = 201;

pub fn emit_report(report: &Report, format: OutputFormat) -> Vec<u8> {
    match format {
        OutputFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report).expect("reports serialize");
            out.push(b'\n');
            out
        }
        OutputFormat::Text => text(report).into_bytes(),
        OutputFormat::Csv => csv(report).into_bytes(),
    }
}

fn text(report: &Report) -> String {
    let mut s = String::new();
    if let Some(sym) = &report.symbol {
        let _ = writeln!(s, "symbol: lambda = {}, g = {}", sym.lambda(), sym.g());
    }
    match &report.outcome {
        Outcome::Classify(c) => classify_text(&mut s, c),
        Outcome::Solve(o) => {
            let sol = &o.solution;
            let _ = writeln!(s, "solution ({:?}, nu = {}):", sol.provenance, sol.used_nu);
            let _ = writeln!(s, "  phi_plus  = ({}, {})", sol.phi1_plus, sol.phi2_plus);
            let _ = writeln!(s, "  phi_minus = ({}, {})", sol.phi1_minus, sol.phi2_minus);
            checks_text(&mut s, &o.verification);
        }
        Outcome::Factorize(r) => factorize_text(&mut s, r),
        Outcome::Verify(v) => {
            factors_text(&mut s, &v.factorization);
            checks_text(&mut s, &v.residuals);
        }
        Outcome::Suite(rows) => {
            let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
            for r in rows {
                let mark = if r.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(s, "{mark}  {:width$}  expected {}; observed {}", r.name, r.expected, r.observed);
            }
            let passed = rows.iter().filter(|r| r.passed).count();
            let _ = writeln!(s, "{passed}/{} passed", rows.len());
        }
    }
    s
}

fn classify_text(s: &mut String, c: &ClassifyOutcome) {
    let g = &c.gap;
    let _ = writeln!(
        s,
        "gap: eta1- = {}, eta2- = {}, eta1+ = {}, eta2+ = {}",
        g.eta1_minus.value, g.eta2_minus.value, g.eta1_plus.value, g.eta2_plus.value
    );
    match &c.classification {
        Some(Classification::Member(m)) => {
            let _ = writeln!(
                s,
                "class: N = {}, nu = {} in [{}, {}], beta = {}",
                m.n, m.chosen_nu, m.nu_min, m.nu_max, m.beta
            );
            let _ = writeln!(s, "  a_minus = {}", m.a_minus);
            let _ = writeln!(s, "  a_plus  = {}", m.a_plus);
        }
        Some(Classification::NotInClass(nc)) => {
            let _ = writeln!(s, "not in any class: {:?}", nc.violated);
        }
        None => {}
    }
    for n in &c.notes {
        let _ = writeln!(s, "note: {n}");
    }
}

fn factorize_text(s: &mut String, r: &FactorizationReport) {
    let v = &r.verdict;
    let _ = write!(s, "verdict: {:?}", v.verdict);
    if let Some(mu) = v.mu {
        let _ = write!(s, ", mu = {mu}");
    }
    if v.not_semi_fredholm && v.verdict != apfact::factorize::Verdict::NotSemiFredholm {
        let _ = write!(s, " (not semi-Fredholm)");
    }
    let _ = writeln!(s);
    if let Some(idx) = &r.index {
        let cases: Vec<String> = idx.cases.iter().map(|c| format!("{c:?}")).collect();
        let _ = writeln!(s, "index: {:?}, cases [{}]", idx.status, cases.join(", "));
    }
    for j in &v.justifications {
        let _ = writeln!(s, "  [{:?}] {:?}: {}", j.tag, j.finding, j.detail);
    }
    if let Some(f) = &r.factorization {
        factors_text(s, f);
    }
    if let Some(res) = &r.residuals {
        checks_text(s, res);
    }
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
}

fn factors_text(s: &mut String, f: &Factorization) {
    let (d1, d2) = f.d_exponents;
    let _ = writeln!(s, "D = diag(e_{{{d1}}}, e_{{{d2}}}), mu = {}", f.mu());
    for (name, m) in [("G_minus", &f.g_minus), ("G_plus", &f.g_plus)] {
        let _ =
            writeln!(s, "{name} = [[{}, {}], [{}, {}]]", m.entry(0, 0), m.entry(0, 1), m.entry(1, 0), m.entry(1, 1));
    }
}

fn checks_text(s: &mut String, r: &VerificationReport) {
    let _ = writeln!(s, "max residual {:.3e} over {} points", r.max_residual, r.sample_count);
    for c in &r.checks {
        let mark = match (c.passed, c.advisory) {
            (true, _) => "ok",
            (false, true) => "advisory",
            (false, false) => "FAILED",
        };
        let _ = writeln!(s, "  {mark:>8} {}: {}", c.name, c.detail);
    }
}

/// `|g_-(x)|`, `|g_+(x)|` and, when a factorization is present, the
/// reconstruction residual, on a uniform grid.
fn csv(report: &Report) -> String {
    let mut s = format!("{CSV_HEADER}\n");
    let Some(sym) = &report.symbol else { return s };
    let Ok(gap) = symbol::decompose(sym) else { return s };
    let fac = report.factorization();
    let g = sym.matrix();
    for i in 0..CSV_POINTS {
        let x = -CSV_WINDOW + 2.0 * CSV_WINDOW * i as f64 / (CSV_POINTS - 1) as f64;
        let residual =
            fac.and_then(|f| verify::pointwise_residual(&g, f, x).ok()).map_or(String::new(), |r| format!("{r:e}"));
        let _ =
            writeln!(s, "{x},{:e},{:e},{residual}", gap.g_minus.eval_real(x).norm(), gap.g_plus.eval_real(x).norm());
    }
    s
}
