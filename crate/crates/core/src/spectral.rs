//! Heat trace and zeta residue of the flat torus Laplacian, and the Pauli
//! trace identities behind the reduction of the local index cochains.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::levi_civita;
use crate::error::{Error, Result};

/// Heat-trace tail left out by [`LaplaceSpectrum::cutoff_for`].
pub const TAIL_TOL: f64 = 1e-15;

/// `Γ(3/2) = √π / 2`.
pub const GAMMA_THREE_HALVES: f64 = 0.886_226_925_452_758;

/// Default fit grid: one decade inside the asymptotic regime.
pub const DEFAULT_T_GRID: [f64; 4] = [0.01, 0.005, 0.002, 0.001];

/// `1/(4π²)`.
pub fn expected_residue() -> f64 {
    1.0 / (4.0 * PI * PI)
}

/// Spectrum `λ_k = scale · 4π²|k|²`, `k ∈ Z³ \ {0}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaplaceSpectrum {
    scale: f64,
}

impl Default for LaplaceSpectrum {
    fn default() -> Self {
        LaplaceSpectrum { scale: 1.0 }
    }
}

impl LaplaceSpectrum {
    pub fn scaled(scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Argument(format!(
                "eigenvalue scale must be positive, got {scale}"
            )));
        }
        Ok(LaplaceSpectrum { scale })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn eigenvalue(&self, k: [i64; 3]) -> f64 {
        let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
        self.scale * 4.0 * PI * PI * k2
    }

    /// Smallest `R` whose omitted modes contribute less than [`TAIL_TOL`].
    pub fn cutoff_for(&self, t: f64) -> usize {
        let c = self.scale * 4.0 * PI * PI * t;
        // Σ_{|k|>R} e^{-ck²} ≤ 2e^{-c(R+1)²}/(1 - e^{-c}); the 3-D tail is at most
        // 3·(1-D total)² times that. 1e-2 absorbs those prefactors for t ≥ 1e-6.
        let target = (TAIL_TOL * 1e-2 * (1.0 - (-c).exp())).ln();
        (((-target) / c).sqrt()).ceil() as usize
    }

    /// `Σ_{k≠0} e^{-t λ_k}`.
    pub fn heat_trace(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Argument(format!("heat time must be positive, got {t}")));
        }
        Ok(self.heat_trace_with_cutoff(t, self.cutoff_for(t)))
    }

    /// Direct lattice sum over the cube `|k_i| ≤ cutoff`, accumulated in
    /// fixed order of `k₁`.
    pub fn heat_trace_with_cutoff(&self, t: f64, cutoff: usize) -> f64 {
        let r = cutoff as i64;
        let partial: Vec<f64> = (-r..=r)
            .into_par_iter()
            .map(|k1| {
                let mut s = 0.0;
                for k2 in -r..=r {
                    for k3 in -r..=r {
                        if k1 == 0 && k2 == 0 && k3 == 0 {
                            continue;
                        }
                        s += (-t * self.eigenvalue([k1, k2, k3])).exp();
                    }
                }
                s
            })
            .collect();
        partial.iter().sum()
    }

    /// Residue at `s = 3/2` of `ζ(s) = Σ λ_k^{-s}`, estimated from the heat
    /// trace: a fixed-slope (−3/2) least-squares fit of
    /// `log(heat_trace(t) + 1)` against `log t` gives `a` in `a·t^{-3/2}`; the
    /// residue is `a / Γ(3/2)`. The `+1` restores the excluded zero mode,
    /// whose constant contribution carries no `t^{-3/2}` weight.
    pub fn residue_estimate(&self, grid: &[f64]) -> Result<f64> {
        check_grid(grid)?;
        let mut acc = 0.0;
        for &t in grid {
            acc += (self.heat_trace(t)? + 1.0).ln() + 1.5 * t.ln();
        }
        Ok((acc / grid.len() as f64).exp() / GAMMA_THREE_HALVES)
    }

    /// Free two-parameter fit `log(heat_trace(t) + 1) = b + s·log t`; returns `(s, b)`.
    pub fn loglog_fit(&self, grid: &[f64]) -> Result<(f64, f64)> {
        check_grid(grid)?;
        let pts: Vec<(f64, f64)> = grid
            .iter()
            .map(|&t| Ok((t.ln(), (self.heat_trace(t)? + 1.0).ln())))
            .collect::<Result<_>>()?;
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let slope = sxy / sxx;
        Ok((slope, my - slope * mx))
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::Argument("t grid needs at least two points".into()));
    }
    if grid.iter().any(|&t| !(t > 0.0 && t <= 0.1)) {
        return Err(Error::Argument("t grid must lie in (0, 0.1]".into()));
    }
    let lo = grid.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = grid.iter().cloned().fold(0.0, f64::max);
    if hi / lo < 10.0 * (1.0 - 1e-12) {
        return Err(Error::Argument(format!(
            "t grid spans {:.3} decades, need at least one",
            (hi / lo).log10()
        )));
    }
    Ok(())
}

pub fn heat_trace(t: f64) -> Result<f64> {
    LaplaceSpectrum::default().heat_trace(t)
}

pub fn residue_estimate(grid: &[f64]) -> Result<f64> {
    LaplaceSpectrum::default().residue_estimate(grid)
}

pub type Mat2 = [[Complex64; 2]; 2];

/// Pauli matrix `σ_axis`.
pub fn pauli(axis: usize) -> Result<Mat2> {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match axis {
        1 => Ok([[z, one], [one, z]]),
        2 => Ok([[z, -i], [i, z]]),
        3 => Ok([[one, z], [z, -one]]),
        _ => Err(Error::Argument(format!("Pauli index {axis} is outside 1..=3"))),
    }
}

fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

pub fn pauli_trace1(axis: usize) -> Result<Complex64> {
    let s = pauli(axis)?;
    Ok(s[0][0] + s[1][1])
}

/// `tr(σ_λ σ_μ σ_ν)`, equal to `2i ε_{λμν}`.
pub fn pauli_trace3(l: usize, m: usize, n: usize) -> Result<Complex64> {
    let p = mat2_mul(&mat2_mul(&pauli(l)?, &pauli(m)?), &pauli(n)?);
    Ok(p[0][0] + p[1][1])
}

/// `2i ε_{λμν}` for comparison.
pub fn two_i_epsilon(l: usize, m: usize, n: usize) -> Complex64 {
    Complex64::new(0.0, 2.0 * levi_civita(l, m, n) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Poisson summation: `Σ_k e^{-4π²tk²} = (4πt)^{-1/2} Σ_m e^{-m²/(4t)}`.
    fn theta_dual(t: f64) -> f64 {
        let s: f64 = (-20i64..=20).map(|m| (-(m * m) as f64 / (4.0 * t)).exp()).sum();
        s / (4.0 * PI * t).sqrt()
    }

    #[test]
    fn large_t_is_dominated_by_six_unit_modes() {
        let h = heat_trace(1.0).unwrap();
        let six = 6.0 * (-4.0 * PI * PI).exp();
        assert!(h > six && (h - six) / six < 1e-15);
    }

    #[test]
    fn matches_poisson_dual_and_small_t_asymptotic() {
        for t in [0.5, 0.1, 0.01, 0.003, 0.001] {
            let oracle = theta_dual(t).powi(3) - 1.0;
            let h = heat_trace(t).unwrap();
            assert!((h - oracle).abs() <= 1e-13 * oracle + 1e-15, "t = {t}: {h} vs {oracle}");
        }
        let t = 0.01;
        let asym = (4.0 * PI * t).powf(-1.5) - 1.0;
        assert!((heat_trace(t).unwrap() - asym).abs() / asym < 1e-3);
    }

    #[test]
    fn monotone_in_t() {
        let ts = [0.001, 0.003, 0.01, 0.05, 0.2, 1.0];
        for w in ts.windows(2) {
            assert!(heat_trace(w[0]).unwrap() > heat_trace(w[1]).unwrap());
        }
    }

    #[test]
    fn approaches_leading_power_with_zero_mode_restored() {
        let t = 1e-3;
        let h = heat_trace(t).unwrap();
        let norm = (4.0 * PI * t).powf(1.5);
        assert!(((h + 1.0) * norm - 1.0).abs() < 1e-3);
        // Without the zero mode the constant −1 alone shifts the ratio by (4πt)^{3/2}.
        assert!((h * norm - 1.0 + norm).abs() < 1e-10);
        let t = 1e-4;
        let norm = (4.0 * PI * t).powf(1.5);
        assert!((heat_trace(t).unwrap() * norm - 1.0).abs() < 1e-3);
    }

    #[test]
    fn rejects_nonpositive_time_and_bad_grids() {
        assert!(heat_trace(0.0).is_err());
        assert!(heat_trace(-1.0).is_err());
        assert!(residue_estimate(&[0.01]).is_err());
        assert!(residue_estimate(&[0.01, 0.005]).is_err());
        assert!(residue_estimate(&[0.2, 0.01]).is_err());
    }

    #[test]
    fn residue_default_grid() {
        let r = residue_estimate(&DEFAULT_T_GRID).unwrap();
        assert!((r - expected_residue()).abs() / expected_residue() < 1e-2);
        assert!((expected_residue() - 0.025_330_295_91).abs() < 1e-11);
    }

    #[test]
    fn residue_scales_with_eigenvalues() {
        let base = residue_estimate(&DEFAULT_T_GRID).unwrap();
        let doubled = LaplaceSpectrum::scaled(2.0)
            .unwrap()
            .residue_estimate(&DEFAULT_T_GRID)
            .unwrap();
        // Exact up to the e^{-1/(8t)} corrections at the coarse end of the rescaled grid.
        assert!((doubled / base / 2f64.powf(-1.5) - 1.0).abs() < 1e-5);
    }

    #[test]
    fn free_fit_recovers_exponent() {
        let (slope, _) = LaplaceSpectrum::default().loglog_fit(&DEFAULT_T_GRID).unwrap();
        assert!((slope + 1.5).abs() < 0.01);
    }

    #[test]
    fn disjoint_grids_agree() {
        let a = residue_estimate(&[0.02, 0.01, 0.005, 0.002]).unwrap();
        let b = residue_estimate(&[0.001, 0.0005, 0.0002, 0.0001]).unwrap();
        assert!((a - b).abs() / b < 5e-3);
    }

    #[test]
    fn pauli_traces() {
        assert_eq!(pauli_trace3(1, 2, 3).unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(pauli_trace3(1, 1, 2).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(pauli_trace3(2, 1, 3).unwrap(), Complex64::new(0.0, -2.0));
        for l in 1..=3 {
            assert_eq!(pauli_trace1(l).unwrap(), Complex64::new(0.0, 0.0));
            for m in 1..=3 {
                for n in 1..=3 {
                    let tr = pauli_trace3(l, m, n).unwrap();
                    assert_eq!(tr.re, 0.0);
                    assert_eq!(tr.im as i64, 2 * levi_civita(l, m, n) as i64);
                    assert_eq!(tr, two_i_epsilon(l, m, n));
                }
            }
        }
        assert!(pauli_trace3(0, 1, 2).is_err());
        assert!(pauli_trace3(1, 2, 4).is_err());
    }
}
