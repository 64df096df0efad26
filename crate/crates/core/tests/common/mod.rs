//! Generators and oracles shared by the property suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use apfact::symbol::ClassMembership;
use apfact::{ApPoly, Frequency, Side, TriangularSymbol};
use num_complex::Complex64;
use proptest::prelude::*;

pub fn freq_on_grid(max_num: i64) -> impl Strategy<Value = Frequency> {
    (-max_num..=max_num, prop::sample::select(vec![1i64, 2, 3, 4, 6])).prop_map(|(n, d)| Frequency::ratio(n, d))
}

pub fn int_coef() -> impl Strategy<Value = Complex64> {
    (-3i32..=3, -3i32..=3).prop_map(|(a, b)| Complex64::new(a as f64, b as f64))
}

/// Small Gaussian-integer coefficients keep ring identities exact.
pub fn int_poly(max_terms: usize) -> impl Strategy<Value = ApPoly> {
    prop::collection::vec((freq_on_grid(12), int_coef()), 0..=max_terms).prop_map(ApPoly::from_terms)
}

pub fn nonzero_coef() -> impl Strategy<Value = Complex64> {
    (prop::sample::select(vec![-2.0, -1.0, 1.0, 2.0]), -2i32..=2).prop_map(|(a, b)| Complex64::new(a, b as f64))
}

/// `Σ c_r e_{±width·r/6}`, `r ∈ 0..=6`, with at least one term.
fn side_poly(width: Frequency, side: Side, terms: &[(i64, Complex64)]) -> ApPoly {
    let sign = if side == Side::Plus { 1 } else { -1 };
    let dedup: BTreeMap<i64, Complex64> = terms.iter().copied().collect();
    ApPoly::from_terms(dedup.into_iter().map(|(r, c)| (width * Frequency::ratio(sign * r, 6), c)))
}

#[derive(Debug, Clone)]
pub struct Parts {
    pub lambda: Frequency,
    pub n: u32,
    pub nu: Frequency,
    pub beta: Frequency,
    pub a_minus: ApPoly,
    pub a_plus: ApPoly,
}

impl Parts {
    pub fn g(&self) -> ApPoly {
        &self.a_minus.shift(-self.beta) + &self.a_plus.shift(self.nu)
    }

    pub fn symbol(&self) -> TriangularSymbol {
        TriangularSymbol::new(self.lambda, self.g()).expect("positive lambda")
    }

    pub fn membership(&self) -> ClassMembership {
        ClassMembership::from_parts(self.lambda, self.n, self.nu, self.beta, self.a_minus.clone(), self.a_plus.clone())
            .expect("admissible by construction")
    }
}

/// Admissible class data built constructively: pick `N`, `ν`, `β` with
/// `λ = N(ν + β)`, then `a_±` whose spectra respect the widths
/// `ν/(N-1)`, `β/(N-1)` that keep `b_±` on the right side.
pub fn admissible_parts(max_n: u32, max_terms: usize) -> impl Strategy<Value = Parts> {
    let terms = move || prop::collection::vec((0i64..=6, nonzero_coef()), 1..=max_terms);
    (1..=max_n, 1i64..=3, (2i64..=6).prop_flat_map(|q| (Just(q), 1..q)), terms(), terms()).prop_map(
        |(n, l, (q, p), minus, plus)| {
            let nu = Frequency::ratio(l * p, q);
            let beta = Frequency::integer(l) - nu;
            let (wp, wm) = if n == 1 {
                (Frequency::integer(l), Frequency::integer(l))
            } else {
                let k = Frequency::integer(n as i64 - 1);
                (nu / k, beta / k)
            };
            Parts {
                lambda: Frequency::integer(l * n as i64),
                n,
                nu,
                beta,
                a_minus: side_poly(wm, Side::Minus, &minus),
                a_plus: side_poly(wp, Side::Plus, &plus),
            }
        },
    )
}

/// A big-gap symbol: every frequency sits at distance at least `λ/2`
/// from zero, so `η_{1+} + η_{1-} >= λ`.
pub fn big_gap_symbol() -> impl Strategy<Value = TriangularSymbol> {
    let side = || prop::collection::vec((0i64..=6, nonzero_coef()), 1..=3);
    (1i64..=4, side(), side()).prop_map(|(l, minus, plus)| {
        let lambda = Frequency::integer(l);
        let half = lambda / Frequency::integer(2);
        let g_minus = side_poly(Frequency::integer(l), Side::Minus, &minus).shift(-half);
        let g_plus = side_poly(Frequency::integer(l), Side::Plus, &plus).shift(half);
        TriangularSymbol::new(lambda, &g_minus + &g_plus).expect("positive lambda")
    })
}

/// `Σ c e^{i f z}` evaluated term by term.
pub fn eval(p: &ApPoly, z: Complex64) -> Complex64 {
    p.terms().iter().map(|(f, c)| c * (Complex64::i() * z * f.to_f64()).exp()).sum()
}

pub fn real_points(n: usize, window: f64, seed: u64) -> Vec<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(-window..window)).collect()
}
