//! Wiener–Hopf factorization of triangular almost-periodic matrix symbols
//!
//! ```text
//!     G = [ e_{-λ}   0   ]        e_α(x) = exp(iαx)
//!         [   g     e_λ  ]
//! ```
//!
//! where `g` is an almost periodic polynomial with rational frequencies.
//! The crate classifies `g`, solves the associated Riemann–Hilbert
//! problem in closed form, checks the corona condition, builds explicit
//! factorizations `G = G_- D G_+^{-1}` and verifies them numerically.

pub mod appoly;
pub mod corona;
pub mod factorize;
pub mod frequency;
pub mod matrix;
pub mod par;
pub mod rhsolve;
pub mod symbol;
pub mod verify;

pub use appoly::{ApPoly, Side};
pub use frequency::{Extended, Frequency};
pub use matrix::ApMatrix;
pub use par::Exec;
pub use symbol::TriangularSymbol;
