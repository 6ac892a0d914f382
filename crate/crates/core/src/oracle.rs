//! Clock-and-shift representation of `A_θ` for rational `θ₁₂ = m/n_rep`
//! with `θ₁₃ = θ₂₃ = 0`.
//!
//! `U₁ ↦ C` (diagonal, `C_jj = e^{2iπ jm/n_rep}`), `U₂ ↦ S` (cyclic shift
//! `S e_j = e_{j+1}`), `U₃ ↦ e^{2iπφ}·I`. Then `CS = e^{2iπ m/n_rep} SC`. The
//! module never calls the twisted product; it multiplies dense matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::TorusElement;
use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Allowed gap between `θ₁₂` and `m/n_rep` when checking an element's algebra.
const THETA_MATCH_TOL: f64 = 1e-14;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug)]
pub struct ClockShiftRep {
    n_rep: usize,
    m: i64,
    phi: f64,
    clock: CMatrix,
    shift: CMatrix,
}

impl ClockShiftRep {
    pub fn new(n_rep: usize, m: i64, phi: f64) -> Result<Self> {
        if n_rep == 0 {
            return Err(Error::Argument("representation dimension must be positive".into()));
        }
        if gcd(m, n_rep as i64) != 1 {
            return Err(Error::Argument(format!("gcd({m}, {n_rep}) must be 1")));
        }
        let d = n_rep;
        let clock = CMatrix::from_fn(d, d, |r, c| {
            if r == c {
                Complex64::from_polar(1.0, std::f64::consts::TAU * (r as f64) * (m as f64) / d as f64)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let shift = CMatrix::from_fn(d, d, |r, c| {
            if r == (c + 1) % d {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Ok(ClockShiftRep {
            n_rep,
            m,
            phi,
            clock,
            shift,
        })
    }

    pub fn n_rep(&self) -> usize {
        self.n_rep
    }

    pub fn theta12(&self) -> f64 {
        self.m as f64 / self.n_rep as f64
    }

    pub fn with_phi(&self, phi: f64) -> Self {
        ClockShiftRep { phi, ..self.clone() }
    }

    pub fn clock(&self) -> &CMatrix {
        &self.clock
    }

    pub fn shift(&self) -> &CMatrix {
        &self.shift
    }

    /// Image of `M(p) = U₁^{p₁}U₂^{p₂}U₃^{p₃}`: entry `(r, c)` of `C^{p₁}S^{p₂}`
    /// is `e^{2iπ p₁ r m/n_rep}` when `r ≡ c + p₂` and zero otherwise.
    pub fn monomial(&self, p: [i64; 3]) -> CMatrix {
        let d = self.n_rep as i64;
        let u3 = Complex64::from_polar(1.0, std::f64::consts::TAU * self.phi * p[2] as f64);
        CMatrix::from_fn(self.n_rep, self.n_rep, |r, c| {
            if (r as i64 - c as i64 - p[1]).rem_euclid(d) == 0 {
                let k = (p[0] * r as i64 * self.m).rem_euclid(d);
                Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / d as f64) * u3
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    fn check_theta(&self, a: &TorusElement) -> Result<()> {
        let t = a.theta();
        let gap = (t.theta12() - self.theta12()).abs() + t.theta13().abs() + t.theta23().abs();
        if gap > THETA_MATCH_TOL {
            return Err(Error::Precondition {
                what: format!("element deformation does not match θ₁₂ = {}/{}", self.m, self.n_rep),
                value: gap,
                allowed: THETA_MATCH_TOL,
            });
        }
        Ok(())
    }

    /// `Σ_p a_p ⊗ M(p)` as an `(n·n_rep)`-square matrix; block `(r, c)` is `a_p[r][c]·M(p)`.
    pub fn represent(&self, a: &TorusElement) -> Result<CMatrix> {
        self.check_theta(a)?;
        let n = a.n();
        let d = self.n_rep;
        let mut out = CMatrix::zeros(n * d, n * d);
        for (p, block) in a.iter() {
            let mp = self.monomial(p.0);
            for r in 0..n {
                for c in 0..n {
                    let z = block.get(r, c);
                    if z == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let mut view = out.view_mut((r * d, c * d), (d, d));
                    view += &mp * z;
                }
            }
        }
        Ok(out)
    }

    /// Normalized matrix trace of `represent(a)`, averaged over `n_rep`
    /// equispaced values of the `U₃` phase. Equals `a.trace()` when no mode
    /// aliases onto the constant mode.
    pub fn oracle_trace(&self, a: &TorusElement) -> Result<Complex64> {
        self.check_theta(a)?;
        let limit = self.n_rep as i64;
        if let Some((p, _)) = a.iter().find(|(p, _)| p.0.iter().any(|x| x.abs() >= limit)) {
            return Err(Error::Precondition {
                what: format!("mode {p} aliases in a representation of dimension {}", self.n_rep),
                value: p.radius() as f64,
                allowed: (limit - 1) as f64,
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..self.n_rep {
            let rep = self.with_phi(j as f64 / self.n_rep as f64);
            acc += rep.represent(a)?.trace();
        }
        Ok(acc / (self.n_rep * self.n_rep) as f64)
    }
}

/// Largest entry modulus of `a − b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
