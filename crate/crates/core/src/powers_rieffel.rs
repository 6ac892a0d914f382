//! The Powers–Rieffel projection `e = (U₁f(U₂))* + g(U₂) + U₁f(U₂)` in the
//! algebra with `θ₁₂ = α`, and the unitary
//! `U = (U₃+U₃*)/2 + (2e−1)(U₃−U₃*)/2` built from it.
//!
//! `g` and `f` come from a `C^∞` ramp `ψ(x) = σ(x)/(σ(x)+σ(1−x))`,
//! `σ(x) = e^{−1/x}`. Expanding `e²` in powers of `U₁` with
//! `U₁ h(U₂) U₁* = h(· + s)(U₂)` (see [`conjugation_shift`]) gives
//!
//! * grade 2: `f(t) f(t − s) = 0`
//! * grade 1: `f(t) (g(t) + g(t − s) − 1) = 0`
//! * grade 0: `g(t)² + f(t)² + f(t + s)² = g(t)`
//!
//! `g` rises on `[0, ε]`, equals 1 on `[ε, α]` and falls on `[α, α+ε]` with
//! `g(t) = 1 − g(t − α)`. The conditions then force `f = √(g − g²)` on the
//! window `[s, s + ε]`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::algebra::{DeformationMatrix, MultiIndex, TorusElement};
use crate::error::{Error, Result};

/// Default bound on `l1(e² − e)` accepted by [`build_unitary`].
pub const DEFAULT_TOL_PROJECTION: f64 = 1e-3;

/// Shift `s` with `U₁ h(U₂) U₁* = h(· + s)(U₂)` when `θ₁₂ = alpha`.
///
/// `U₁U₂^k = e^{2iπαk} U₂^k U₁`, so conjugating `Σ ĥ(k)U₂^k` by `U₁`
/// multiplies `ĥ(k)` by `e^{2iπαk}`, which is translation by `+α`.
pub fn conjugation_shift(alpha: f64) -> f64 {
    alpha
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PRConfig {
    pub alpha: f64,
    pub eps: f64,
    pub trunc: usize,
    pub samples: usize,
}

impl Default for PRConfig {
    fn default() -> Self {
        PRConfig {
            alpha: 0.25,
            eps: 0.125,
            trunc: 64,
            samples: 1024,
        }
    }
}

impl PRConfig {
    pub fn with_trunc(self, trunc: usize) -> Self {
        PRConfig {
            trunc,
            samples: self.samples.max(8 * trunc),
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let PRConfig {
            alpha,
            eps,
            trunc,
            samples,
        } = *self;
        if !(alpha > 0.0 && alpha < 0.5) {
            return Err(Error::Config(format!("alpha must lie in (0, 1/2), got {alpha}")));
        }
        if !(eps > 0.0 && eps <= alpha && eps < 1.0 - 2.0 * alpha) {
            return Err(Error::Config(format!(
                "eps must lie in (0, min(alpha, 1 - 2 alpha)), got {eps} for alpha {alpha}"
            )));
        }
        if trunc == 0 {
            return Err(Error::Config("trunc must be positive".into()));
        }
        if samples < 8 * trunc {
            return Err(Error::Config(format!(
                "samples must be at least 8 * trunc = {}, got {samples}",
                8 * trunc
            )));
        }
        Ok(())
    }
}

/// A function on the circle, `h(t) = Σ_k ĥ(k) e^{2iπkt}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleFunction {
    coeffs: BTreeMap<i64, Complex64>,
}

impl CircleFunction {
    pub fn from_coeffs<I: IntoIterator<Item = (i64, Complex64)>>(coeffs: I) -> Self {
        CircleFunction {
            coeffs: coeffs.into_iter().collect(),
        }
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(k, z)| (*k, *z))
    }

    /// `ĥ(−k) = conj(ĥ(k))` for every stored mode.
    pub fn is_real(&self, tol: f64) -> bool {
        self.coeffs
            .iter()
            .all(|(k, z)| (self.coeff(-k) - z.conj()).norm() <= tol)
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(k, z)| z * Complex64::from_polar(1.0, TAU * (*k as f64) * t))
            .sum()
    }

    /// `h(U₂)` in the algebra.
    pub fn of_u2(&self, theta: DeformationMatrix) -> Result<TorusElement> {
        TorusElement::from_scalars(theta, self.iter().map(|(k, z)| (MultiIndex::new(0, k, 0), z)))
    }
}

fn sigma(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// Smooth step: 0 for `x ≤ 0`, 1 for `x ≥ 1`.
pub fn smooth_step(x: f64) -> f64 {
    let (a, b) = (sigma(x), sigma(1.0 - x));
    a / (a + b)
}

/// `√(ψ(x)(1 − ψ(x)))`, evaluated without cancellation.
fn step_amplitude(x: f64) -> f64 {
    let (a, b) = (sigma(x), sigma(1.0 - x));
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    (a * b).sqrt() / (a + b)
}

/// Closed-form `g` and `f` on the circle.
#[derive(Clone, Copy, Debug)]
pub struct RampProfile {
    alpha: f64,
    eps: f64,
    shift: f64,
}

impl RampProfile {
    pub fn new(cfg: &PRConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(RampProfile {
            alpha: cfg.alpha,
            eps: cfg.eps,
            shift: conjugation_shift(cfg.alpha),
        })
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn g(&self, t: f64) -> f64 {
        let t = t.rem_euclid(1.0);
        if t < self.eps {
            smooth_step(t / self.eps)
        } else if t <= self.alpha {
            1.0
        } else if t < self.alpha + self.eps {
            1.0 - smooth_step((t - self.alpha) / self.eps)
        } else {
            0.0
        }
    }

    pub fn f(&self, t: f64) -> f64 {
        let x = (t - self.shift).rem_euclid(1.0) / self.eps;
        if x < 1.0 {
            step_amplitude(x)
        } else {
            0.0
        }
    }

    /// Largest pointwise residual of the three idempotent conditions on an
    /// equispaced grid of `samples` points.
    pub fn projection_residual(&self, samples: usize) -> f64 {
        let s = self.shift;
        (0..samples)
            .map(|j| {
                let t = j as f64 / samples as f64;
                let (g, f) = (self.g(t), self.f(t));
                let grade0 = g * g + f * f + self.f(t + s).powi(2) - g;
                let grade1 = f * (g + self.g(t - s) - 1.0);
                let grade2 = f * self.f(t - s);
                grade0.abs().max(grade1.abs()).max(grade2.abs())
            })
            .fold(0.0, f64::max)
    }
}

/// Discrete Fourier coefficients `ĥ(k)`, `|k| ≤ trunc`, of a real function
/// from `samples` equispaced values; `ĥ(−k) = conj(ĥ(k))` exactly.
fn real_fourier<F: Fn(f64) -> f64>(h: F, trunc: usize, samples: usize) -> BTreeMap<i64, Complex64> {
    let values: Vec<f64> = (0..samples).map(|j| h(j as f64 / samples as f64)).collect();
    let mut out = BTreeMap::new();
    for k in 0..=trunc {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, v) in values.iter().enumerate() {
            if *v == 0.0 {
                continue;
            }
            let idx = (k * j) % samples;
            acc += Complex64::from_polar(*v, -TAU * idx as f64 / samples as f64);
        }
        let z = acc / samples as f64;
        out.insert(k as i64, z);
        if k > 0 {
            out.insert(-(k as i64), z.conj());
        }
    }
    out
}

/// Fourier truncations of `g` and `f`. The constant mode of `g` is set to its
/// exact mean `α`.
pub fn build_bump(cfg: &PRConfig) -> Result<(CircleFunction, CircleFunction)> {
    let profile = RampProfile::new(cfg)?;
    let mut g = real_fourier(|t| profile.g(t), cfg.trunc, cfg.samples);
    // ψ(x) + ψ(1−x) = 1 makes the two ramps contribute exactly ε, so the mean is α.
    g.insert(0, Complex64::new(cfg.alpha, 0.0));
    let f = real_fourier(|t| profile.f(t), cfg.trunc, cfg.samples);
    Ok((CircleFunction { coeffs: g }, CircleFunction { coeffs: f }))
}

/// The projection over `θ₁₂ = α`, `N = 1`.
pub fn build_projection(cfg: &PRConfig) -> Result<TorusElement> {
    let (g, f) = build_bump(cfg)?;
    let theta = DeformationMatrix::planar(cfg.alpha)?;
    let u1f = TorusElement::from_scalars(theta, f.iter().map(|(k, z)| (MultiIndex::new(1, k, 0), z)))?;
    g.of_u2(theta)?.add(&u1f)?.add(&u1f.adjoint())
}

/// `l1(e² − e)`.
pub fn projection_defect(e: &TorusElement) -> Result<f64> {
    Ok(e.mul(e)?.sub(e)?.l1())
}

/// `U = (U₃+U₃*)/2 + (2e−1)(U₃−U₃*)/2`, guarded by `l1(e² − e) ≤ tol_proj`.
pub fn build_unitary(e: &TorusElement, tol_proj: f64) -> Result<TorusElement> {
    let herm = e.hermitian_defect();
    if herm > 1e-12 {
        return Err(Error::Precondition {
            what: "projection is not hermitian".into(),
            value: herm,
            allowed: 1e-12,
        });
    }
    let defect = projection_defect(e)?;
    if defect > tol_proj {
        return Err(Error::Precondition {
            what: "projection defect l1(e^2 - e) too large".into(),
            value: defect,
            allowed: tol_proj,
        });
    }
    let u3 = TorusElement::generator(*e.theta(), e.n(), 3)?;
    let u3s = u3.adjoint();
    let one = TorusElement::one(*e.theta(), e.n());
    let even = u3.add(&u3s)?.scale_re(0.5);
    let odd = u3.sub(&u3s)?.scale_re(0.5);
    let reflection = e.scale_re(2.0).sub(&one)?;
    even.add(&reflection.mul(&odd)?)
}

/// `uⁿ` by binary exponentiation, `n ≥ 1`.
pub fn power(u: &TorusElement, n: u32) -> Result<TorusElement> {
    if n == 0 {
        return Err(Error::Argument("power must be positive".into()));
    }
    let mut base = u.clone();
    let mut acc: Option<TorusElement> = None;
    let mut k = n;
    loop {
        if k & 1 == 1 {
            acc = Some(match acc {
                Some(a) => a.mul(&base)?,
                None => base.clone(),
            });
        }
        k >>= 1;
        if k == 0 {
            break;
        }
        base = base.mul(&base)?;
    }
    Ok(acc.expect("n >= 1"))
}

#[cfg(test)]
mod tests;
