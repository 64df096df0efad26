mod common;

use apfact::corona::{self, CoronaPair, Status};
use apfact::rhsolve;
use apfact::symbol::{Endpoint, EndpointStatus, GapData};
use apfact::{ApPoly, Frequency, Side};
use common::{admissible_parts, big_gap_symbol, eval, nonzero_coef, real_points};
use num_complex::Complex64;
use proptest::prelude::*;

fn status() -> impl Strategy<Value = EndpointStatus> {
    prop::sample::select(vec![EndpointStatus::Attained, EndpointStatus::NotAttained, EndpointStatus::Undecided])
}

fn endpoint_pair() -> impl Strategy<Value = (Endpoint, Endpoint)> {
    (1i64..=8, 0i64..=6, status(), status()).prop_map(|(a, w, s1, s2)| {
        let lo = Frequency::ratio(a, 2);
        let hi = lo + Frequency::ratio(w, 2);
        (Endpoint { value: lo.into(), status: s1 }, Endpoint { value: hi.into(), status: s2 })
    })
}

fn gap_data() -> impl Strategy<Value = GapData> {
    (endpoint_pair(), endpoint_pair()).prop_map(|((m1, m2), (p1, p2))| GapData {
        g_minus: ApPoly::zero(),
        g_plus: ApPoly::zero(),
        eta1_minus: m1,
        eta2_minus: m2,
        eta1_plus: p1,
        eta2_plus: p2,
        has_zero_frequency: false,
        zero_term: Complex64::default(),
    })
}

fn endpoints_mut(gap: &mut GapData) -> [&mut Endpoint; 4] {
    [&mut gap.eta1_minus, &mut gap.eta2_minus, &mut gap.eta1_plus, &mut gap.eta2_plus]
}

fn side_poly(side: Side) -> impl Strategy<Value = ApPoly> {
    let sign = if side == Side::Plus { 1 } else { -1 };
    prop::collection::vec((0i64..=8, nonzero_coef()), 1..=3)
        .prop_map(move |ts| ApPoly::from_terms(ts.into_iter().map(|(r, c)| (Frequency::ratio(sign * r, 2), c))))
}

fn sampled_residual(pair: &CoronaPair, w: [&ApPoly; 2], points: &[f64]) -> f64 {
    points
        .iter()
        .map(|&x| {
            let z = Complex64::new(x, 0.0);
            (eval(w[0], z) * eval(&pair.h1, z) + eval(w[1], z) * eval(&pair.h2, z) - 1.0).norm()
        })
        .fold(0.0, f64::max)
}

fn check_h(h: &apfact::ApMatrix, side: Side) -> Result<(), TestCaseError> {
    let det = h.det();
    prop_assert!((&det - &ApPoly::one()).max_abs_coefficient() <= 1e-10, "det = {}", det);
    for (_, e) in h.entries() {
        prop_assert!(e.spectrum_on_side(side), "{} off the {} side", e, side);
    }
    Ok(())
}

proptest! {
    #[test]
    fn endpoint_check_is_monotone(
        gap in gap_data(),
        n in 1u32..=4,
        lambda in 1i64..=16,
        refine in prop::collection::vec(any::<bool>(), 4),
    ) {
        let lambda = Frequency::ratio(lambda, 2);
        let before = corona::spectral_corona_check(&gap, n, lambda).overall();
        let mut refined = gap.clone();
        for (e, attained) in endpoints_mut(&mut refined).into_iter().zip(&refine) {
            if e.status == EndpointStatus::Undecided {
                e.status = if *attained { EndpointStatus::Attained } else { EndpointStatus::NotAttained };
            }
        }
        let after = corona::spectral_corona_check(&refined, n, lambda).overall();
        prop_assert!(before == Status::Unknown || before == after, "{:?} -> {:?}", before, after);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn corona_pairs_meet_their_residual_bound(
        w1 in side_poly(Side::Plus),
        w2 in side_poly(Side::Plus),
        minus in any::<bool>(),
    ) {
        let (side, w1, w2) = if minus {
            let flip = |p: &ApPoly| ApPoly::from_terms(p.terms().iter().map(|(f, c)| (-*f, *c)));
            (Side::Minus, flip(&w1), flip(&w2))
        } else {
            (Side::Plus, w1, w2)
        };
        if let Ok(pair) = corona::corona_pair(&w1, &w2, side, 1e-8) {
            prop_assert!(pair.h1.spectrum_on_side(side) && pair.h2.spectrum_on_side(side));
            let r = sampled_residual(&pair, [&w1, &w2], &real_points(10_000, 200.0, 3));
            prop_assert!(r <= pair.residual_bound + 1e-12, "sampled {:.3e} > bound {:.3e}", r, pair.residual_bound);
        }
    }

    #[test]
    fn constructed_h_is_unimodular(parts in admissible_parts(4, 3)) {
        let sol = rhsolve::solve_structured(&parts.membership()).unwrap();
        let red = rhsolve::exponential_reduction(&sol).unwrap();
        let mu = red.mu();
        if let Ok(pair) = corona::corona_pair(&red.psi_plus[0], &red.psi_plus[1], Side::Plus, 1e-12) {
            let shifted = red.psi_plus.clone().map(|p| p.shift(mu));
            if let Ok(h) = corona::build_h([&shifted[0], &shifted[1]], &pair, mu, Side::Plus) {
                check_h(&h, Side::Plus)?;
                prop_assert_eq!(h.column(0), red.psi_plus.clone());
            }
        }
        if let Ok(pair) = corona::corona_pair(&red.psi_minus[0], &red.psi_minus[1], Side::Minus, 1e-12) {
            if let Ok(h) = corona::build_h([&red.psi_minus[0], &red.psi_minus[1]], &pair, Frequency::ZERO, Side::Minus) {
                check_h(&h, Side::Minus)?;
            }
        }
    }

    #[test]
    fn big_gap_pairs_are_exact_or_obstructed(sym in big_gap_symbol()) {
        let gap = apfact::symbol::decompose(&sym).unwrap();
        let (nu, _) = rhsolve::biggap_nu_range(&gap, sym.lambda());
        let sol = rhsolve::solve_biggap(&gap, sym.lambda(), nu).unwrap();
        let red = rhsolve::exponential_reduction(&sol).unwrap();
        for (psi, side) in [(&red.psi_plus, Side::Plus), (&red.psi_minus, Side::Minus)] {
            match corona::corona_pair(&psi[0], &psi[1], side, 1e-12) {
                Ok(pair) => prop_assert!(pair.residual_bound <= 1e-10),
                // a constant-free pair, or a common root, is a genuine obstruction
                Err(e) => prop_assert!(
                    matches!(e, corona::CoronaError::CoronaConditionFails(_) | corona::CoronaError::Unsupported(_)),
                    "{}", e
                ),
            }
        }
    }
}
