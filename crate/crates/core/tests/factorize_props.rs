mod common;

use apfact::factorize::{self, ArgumentTag, Factorization, Finding, Verdict};
use apfact::rhsolve;
use apfact::symbol;
use apfact::{ApMatrix, ApPoly, Frequency, Side, TriangularSymbol};
use common::{admissible_parts, big_gap_symbol, eval, real_points};
use num_complex::Complex64;
use proptest::prelude::*;

/// `max |G(x) - G_-(x) D(x) G_+(x)^{-1}|` with the inverse written out.
#[allow(clippy::needless_range_loop)]
fn oracle_residual(sym: &TriangularSymbol, fac: &Factorization, points: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for &x in points {
        let z = Complex64::new(x, 0.0);
        let at = |m: &ApMatrix, i, j| eval(m.entry(i, j), z);
        let (a, b, c, d) = (at(&fac.g_plus, 0, 0), at(&fac.g_plus, 0, 1), at(&fac.g_plus, 1, 0), at(&fac.g_plus, 1, 1));
        let det = a * d - b * c;
        let inv = [[d / det, -b / det], [-c / det, a / det]];
        let mid = [
            (Complex64::i() * fac.d_exponents.0.to_f64() * x).exp(),
            (Complex64::i() * fac.d_exponents.1.to_f64() * x).exp(),
        ];
        let g = sym.matrix();
        for i in 0..2 {
            for j in 0..2 {
                let r: Complex64 = (0..2).map(|k| at(&fac.g_minus, i, k) * mid[k] * inv[k][j]).sum();
                worst = worst.max((r - at(&g, i, j)).norm());
            }
        }
    }
    worst
}

fn check_factorization(sym: &TriangularSymbol, fac: &Factorization) -> Result<(), TestCaseError> {
    for (m, side) in [(&fac.g_plus, Side::Plus), (&fac.g_minus, Side::Minus)] {
        for (_, e) in m.entries() {
            prop_assert!(e.spectrum_on_side(side), "{} off the {} side", e, side);
        }
        let det = m.det();
        prop_assert!(det.mean_value().norm() > 1e-12);
        prop_assert!((&det - &ApPoly::constant(det.mean_value())).max_abs_coefficient() <= 1e-10);
    }
    prop_assert!(fac.d_exponents.0 + fac.d_exponents.1 == Frequency::ZERO);
    if fac.is_exact() {
        prop_assert!(fac.reconstruct().sub(&sym.matrix()).max_abs_coefficient() <= 1e-12);
    }
    let r = oracle_residual(sym, fac, &real_points(100, 50.0, 5));
    prop_assert!(r <= 1e-10, "residual {:.3e}", r);
    Ok(())
}

/// `J^{-1} G J` with `J = [[0, -1], [1, 0]]`.
fn conjugate(m: &ApMatrix) -> ApMatrix {
    let (a, b, c, d) = (m.entry(0, 0), m.entry(0, 1), m.entry(1, 0), m.entry(1, 1));
    ApMatrix::new(d.clone(), -c, -b, a.clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn big_gap_factorizations_are_sound(sym in big_gap_symbol()) {
        let (sol, _) = factorize::select_solution(&sym, None).unwrap();
        let verdict = factorize::classify_toeplitz(&sym, false);
        match factorize::construct_factorization(&sym, &sol, 1e-10) {
            Ok(fac) => {
                check_factorization(&sym, &fac)?;
                let red = rhsolve::exponential_reduction(&sol).unwrap();
                prop_assert_eq!(fac.g_plus.column(0), red.psi_plus.clone());
                prop_assert_eq!(fac.g_minus.column(0), red.psi_minus.clone());
                prop_assert_eq!(verdict.mu, Some(fac.mu()));
                let canonical = verdict.verdict == Verdict::Invertible;
                prop_assert_eq!(canonical, fac.is_canonical());
            }
            Err(e) => prop_assert!(
                verdict.verdict != Verdict::Invertible && verdict.verdict != Verdict::FactorableNonCanonical,
                "verdict {:?} but construction failed: {}", verdict.verdict, e
            ),
        }
    }

    #[test]
    fn structured_factorizations_are_sound(parts in admissible_parts(4, 2)) {
        let sym = parts.symbol();
        let Ok((sol, _)) = factorize::select_solution(&sym, None) else { return Ok(()) };
        if let Ok(fac) = factorize::construct_factorization(&sym, &sol, 1e-10) {
            check_factorization(&sym, &fac)?;
            let red = rhsolve::exponential_reduction(&sol).unwrap();
            prop_assert_eq!(fac.g_plus.column(0), red.psi_plus.clone());
            prop_assert_eq!(fac.g_minus.column(0), red.psi_minus.clone());
        }
    }

    #[test]
    fn canonical_factorizations_differ_by_a_constant(sym in big_gap_symbol()) {
        let gap = symbol::decompose(&sym).unwrap();
        let (lo, hi) = rhsolve::biggap_nu_range(&gap, sym.lambda());
        let build = |nu| {
            let sol = rhsolve::solve_biggap(&gap, sym.lambda(), nu).ok()?;
            factorize::construct_factorization(&sym, &sol, 1e-10).ok()
        };
        if let (Some(f1), Some(f2)) = (build(lo), build(hi)) {
            if f1.is_canonical() {
                let z = factorize::canonical_equivalence(&f1, &f2);
                prop_assert!(z.is_ok(), "{:?}", z);
            }
        }
    }

    #[test]
    fn transposition_symmetry(sym in big_gap_symbol()) {
        prop_assert_eq!(conjugate(&sym.matrix()), sym.inverse_transpose());
        let v = factorize::classify_toeplitz(&sym, false);
        let transposed = v.fired(ArgumentTag::Transposition).map(|j| j.finding);
        let expected = (v.verdict == Verdict::FactorableNonCanonical).then_some(Finding::NotSemiFredholm);
        prop_assert_eq!(transposed, expected);
        if v.verdict == Verdict::FactorableNonCanonical {
            prop_assert!(v.not_semi_fredholm);
        }
    }

    #[test]
    fn partial_indices_balance(sym in big_gap_symbol()) {
        let gap = symbol::decompose(&sym).unwrap();
        let idx = factorize::indices_biggap(&gap, sym.lambda()).unwrap();
        prop_assert_eq!(idx.is_factorable(), factorize::mean_motion_balance(&idx));
    }
}
