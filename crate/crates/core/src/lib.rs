//! Numerics for gauge theory on the noncommutative 3-torus.
//!
//! Elements of `M_N(A_θ)` are stored as finitely supported Fourier series
//! `Σ_p a_p U₁^{p₁}U₂^{p₂}U₃^{p₃}` with `N×N` complex coefficients. On top of the
//! twisted-convolution algebra ([`algebra`]) sit the Chern–Simons and winding
//! functionals ([`gauge`]), the Powers–Rieffel projection ([`powers_rieffel`]),
//! heat-trace and Pauli-trace checks ([`spectral`]), and a clock-and-shift
//! representation used as a brute-force oracle ([`oracle`]).

pub mod algebra;
pub mod error;
pub mod gauge;
pub mod io;
pub mod oracle;
pub mod powers_rieffel;
pub mod random;
pub mod selftest;
pub mod spectral;

pub use algebra::{Block, DeformationMatrix, MultiIndex, TorusElement};
pub use error::{Error, Result};
pub use num_complex::Complex64;
