//! A curated battery of worked symbols with known verdicts.

use apfact::factorize::{self, FactorizationReport, FactorizeOptions, Verdict};
use apfact::symbol::{self, DeclaredSpectrum};
use apfact::{ApPoly, Exec, Frequency, TriangularSymbol};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteRow {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy)]
enum Expect {
    /// Class index `N` and the chosen `ν`.
    Class {
        n: u32,
        nu: (i64, i64),
    },
    Verdict {
        verdict: Verdict,
        mu: Option<i64>,
        not_semi_fredholm: bool,
        exact: bool,
    },
}

struct Case {
    name: &'static str,
    symbol: TriangularSymbol,
    expect: Expect,
}

fn e(num: i64, den: i64) -> ApPoly {
    ApPoly::exp(Frequency::ratio(num, den))
}

fn sym(lambda: i64, g: ApPoly) -> TriangularSymbol {
    TriangularSymbol::new(Frequency::integer(lambda), g).expect("positive lambda")
}

fn verdict(verdict: Verdict, mu: Option<i64>) -> Expect {
    Expect::Verdict { verdict, mu, not_semi_fredholm: false, exact: false }
}

fn cases() -> Vec<Case> {
    let declared = DeclaredSpectrum {
        eta1_plus: Some(Frequency::integer(2).into()),
        eta1_plus_attained: Some(false),
        ..Default::default()
    };
    let truncated = TriangularSymbol::with_declarations(Frequency::integer(3), e(-2, 1) + e(5, 2), declared)
        .expect("consistent declaration");
    vec![
        Case {
            name: "class_lambda4_binomial",
            symbol: sym(4, e(-1, 1) + e(1, 1)),
            expect: Expect::Class { n: 2, nu: (1, 1) },
        },
        Case {
            name: "invertible_lambda4_binomial",
            symbol: sym(4, e(-1, 1) + e(1, 1)),
            expect: verdict(Verdict::Invertible, Some(0)),
        },
        Case {
            name: "canonical_lambda2_binomial",
            symbol: sym(2, e(-1, 1) + e(1, 1)),
            expect: Expect::Verdict {
                verdict: Verdict::Invertible,
                mu: Some(0),
                not_semi_fredholm: false,
                exact: true,
            },
        },
        Case {
            name: "noncanonical_lambda3_wide",
            symbol: sym(3, e(-2, 1) + e(2, 1)),
            expect: Expect::Verdict {
                verdict: Verdict::FactorableNonCanonical,
                mu: Some(1),
                not_semi_fredholm: true,
                exact: false,
            },
        },
        Case {
            name: "noncanonical_lambda3_narrow",
            symbol: sym(3, e(-1, 1) + e(1, 1)),
            expect: Expect::Verdict {
                verdict: Verdict::FactorableNonCanonical,
                mu: Some(1),
                not_semi_fredholm: true,
                exact: false,
            },
        },
        Case {
            name: "invertible_lambda4_wide",
            symbol: sym(4, e(-2, 1) + e(2, 1)),
            expect: verdict(Verdict::Invertible, Some(0)),
        },
        Case {
            name: "unfactorable_declared_gap",
            symbol: truncated,
            expect: Expect::Verdict {
                verdict: Verdict::NotApFactorable,
                mu: None,
                not_semi_fredholm: true,
                exact: false,
            },
        },
    ]
}

fn check(case: &Case) -> SuiteRow {
    let (expected, observed, passed) = match case.expect {
        Expect::Class { n, nu } => {
            let nu = Frequency::ratio(nu.0, nu.1);
            let expected = format!("N = {n}, nu = {nu}");
            match symbol::classify(&case.symbol).ok().and_then(|c| c.into_member()) {
                Some(m) => (expected, format!("N = {}, nu = {}", m.n, m.chosen_nu), m.n == n && m.chosen_nu == nu),
                None => (expected, "not in any class".into(), false),
            }
        }
        Expect::Verdict { verdict, mu, not_semi_fredholm, exact } => {
            let r = factorize::factorize_symbol(&case.symbol, &FactorizeOptions::default());
            let mu = mu.map(Frequency::integer);
            let expected = describe(verdict, mu, not_semi_fredholm);
            let observed = describe(r.verdict.verdict, r.verdict.mu, r.verdict.not_semi_fredholm);
            let passed = expected == observed && (!exact || exact_reconstruction(&r));
            (expected, observed, passed)
        }
    };
    SuiteRow { name: case.name.to_string(), expected, observed, passed }
}

fn describe(v: Verdict, mu: Option<Frequency>, not_semi_fredholm: bool) -> String {
    let mut s = format!("{v:?}");
    if let Some(mu) = mu {
        s.push_str(&format!(" mu = {mu}"));
    }
    if not_semi_fredholm {
        s.push_str(" + NotSemiFredholm");
    }
    s
}

fn exact_reconstruction(r: &FactorizationReport) -> bool {
    let exact = r.factorization.as_ref().is_some_and(|f| f.is_exact() && f.reconstruct() == r.symbol.matrix());
    exact && r.residuals.as_ref().is_some_and(|v| v.passed() && v.max_residual < 1e-12)
}

/// Every battery case, each checked independently.
pub fn run_suite(exec: Exec) -> Vec<SuiteRow> {
    exec.map(&cases(), check)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_passes_in_both_modes() {
        let seq = run_suite(Exec::Sequential);
        assert!(seq.iter().all(|r| r.passed), "{seq:#?}");
        assert_eq!(seq, run_suite(Exec::Parallel));
    }
}
