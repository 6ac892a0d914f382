//! Seeded generators for property suites and the gauge check.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Block, DeformationMatrix, MultiIndex, TorusElement};

pub type SuiteRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_block<R: Rng>(rng: &mut R, n: usize) -> Block {
    let data = (0..n * n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    Block::from_row_major(n, data).expect("block size")
}

fn random_mode<R: Rng>(rng: &mut R, radius: i64) -> MultiIndex {
    MultiIndex([
        rng.random_range(-radius..=radius),
        rng.random_range(-radius..=radius),
        rng.random_range(-radius..=radius),
    ])
}

/// Up to `terms` random modes with `|p_i| ≤ radius` and entries uniform in the unit square.
pub fn random_element<R: Rng>(
    rng: &mut R,
    theta: DeformationMatrix,
    n: usize,
    radius: i64,
    terms: usize,
) -> TorusElement {
    let coeffs: Vec<_> = (0..terms)
        .map(|_| (random_mode(rng, radius), random_block(rng, n)))
        .collect();
    TorusElement::from_coeffs(theta, n, coeffs).expect("valid random coefficients")
}

/// `(x + x*)/2` for a random `x`.
pub fn random_hermitian<R: Rng>(
    rng: &mut R,
    theta: DeformationMatrix,
    n: usize,
    radius: i64,
    terms: usize,
) -> TorusElement {
    let x = random_element(rng, theta, n, radius, terms);
    x.add(&x.adjoint()).expect("same algebra").scale_re(0.5)
}

/// `e^{iφ} · M(p)` with random phase and `|p_i| ≤ radius`.
pub fn random_monomial_unitary<R: Rng>(rng: &mut R, theta: DeformationMatrix, n: usize, radius: i64) -> TorusElement {
    let p = random_mode(rng, radius);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    TorusElement::monomial(theta, n, p, Complex64::from_polar(1.0, phi))
}
