use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Antisymmetric real 3×3 matrix of commutation phases:
/// `U_i U_j = e^{2iπ θ_ij} U_j U_i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeformationMatrix {
    theta: [[f64; 3]; 3],
}

impl DeformationMatrix {
    pub fn new(theta12: f64, theta13: f64, theta23: f64) -> Result<Self> {
        if !(theta12.is_finite() && theta13.is_finite() && theta23.is_finite()) {
            return Err(Error::Argument("deformation entries must be finite".into()));
        }
        Ok(DeformationMatrix {
            theta: [
                [0.0, theta12, theta13],
                [-theta12, 0.0, theta23],
                [-theta13, -theta23, 0.0],
            ],
        })
    }

    /// The commutative torus.
    pub fn zero() -> Self {
        DeformationMatrix { theta: [[0.0; 3]; 3] }
    }

    /// Only `θ₁₂ = α` nonzero.
    pub fn planar(alpha: f64) -> Result<Self> {
        Self::new(alpha, 0.0, 0.0)
    }

    #[allow(clippy::needless_range_loop)]
    pub fn from_matrix(theta: [[f64; 3]; 3]) -> Result<Self> {
        for i in 0..3 {
            for j in 0..3 {
                if !theta[i][j].is_finite() || theta[i][j] != -theta[j][i] {
                    return Err(Error::Argument(format!(
                        "deformation matrix is not antisymmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(DeformationMatrix { theta })
    }

    /// Entry `θ_ij` with 1-based axes.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.theta[i - 1][j - 1]
    }

    pub fn theta12(&self) -> f64 {
        self.theta[0][1]
    }

    pub fn theta13(&self) -> f64 {
        self.theta[0][2]
    }

    pub fn theta23(&self) -> f64 {
        self.theta[1][2]
    }

    /// Phase of `M(p)·M(q) = phase · M(p+q)` for canonical monomials
    /// `M(p) = U₁^{p₁}U₂^{p₂}U₃^{p₃}`: `exp(2iπ Σ_{i>j} θ_ij p_i q_j)`.
    pub fn product_phase(&self, p: [i64; 3], q: [i64; 3]) -> Complex64 {
        let t = &self.theta;
        cis_turns(t[1][0] * (p[1] * q[0]) as f64 + t[2][0] * (p[2] * q[0]) as f64 + t[2][1] * (p[2] * q[1]) as f64)
    }

    /// Phase `ω(p)` with `M(p)* = ω(p) · M(−p)`.
    pub fn adjoint_phase(&self, p: [i64; 3]) -> Complex64 {
        // M(p)·M(-p) = product_phase(p, -p), so M(p)^{-1} = conj(product_phase(p, -p)) M(-p).
        self.product_phase(p, [-p[0], -p[1], -p[2]]).conj()
    }
}

/// `exp(2iπ x)` with the argument reduced to `[-1/2, 1/2]` first.
#[inline]
pub fn cis_turns(x: f64) -> Complex64 {
    let r = x - x.round();
    if r == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    Complex64::from_polar(1.0, 2.0 * PI * r)
}
