//! Zeta-regularized and regularized Fredholm determinants of self-adjoint
//! operators with discrete spectrum.
//!
//! An operator enters as a [`models::SpectrumModel`]: an eigenvalue law, a
//! Schatten order p, and the declared heat-trace expansion
//! tr e^{-tL} ~ Σ A^H_{αk} t^α log^k t. From that the crate computes the
//! meromorphically continued zeta function ζ(s; L+z) and its pole data
//! ([`zeta`]), the determinant det_ζ(L+z) = exp(-ζ'(0; L+z)) by two
//! independent routes, the Weierstrass products det_{N+1}(I + z·L^{-1})
//! ([`fredholm`]), and the large-z expansions tying the two together
//! ([`asymptotics`]), with end-to-end identity checks in [`verify`].
//!
//! The expansion calculus ([`expansion`]) carries exact coefficients in
//! Q[√π, 1/√π] beside the floating values, so predicted expansions and the
//! heat ↔ resolvent round trip are exact on the built-in catalog.

pub mod asymptotics;
pub mod compare;
pub mod error;
pub mod exact;
pub mod expansion;
pub mod fredholm;
pub mod models;
pub mod numeric;
pub mod oracles;
pub mod poly;
pub mod quad;
pub mod regint;
pub mod special;
pub mod verify;
pub mod zeta;
