//! Gauge potentials over `M_N(A_θ)`, the Chern–Simons action, gauge
//! transformations, curvature and the winding and Chern pairings.
//!
//! The inverse of a unitary is always taken as its adjoint, guarded by
//! [`TorusElement::defect_unitary`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::{TorusElement, EPSILON_TERMS};
use crate::error::{Error, Result};

/// Default bound on `defect_unitary` for gauge transformations and winding.
pub const DEFAULT_TOL_UNITARY: f64 = 1e-10;

/// Hermiticity tolerance checked when a potential is constructed.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coupling(f64);

impl Coupling {
    pub fn new(k: f64) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::Argument(format!("coupling must be finite, got {k}")));
        }
        Ok(Coupling(k))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Triple `(A₁, A₂, A₃)` of hermitian elements sharing one algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugePotential {
    components: [TorusElement; 3],
}

impl GaugePotential {
    pub fn new(components: [TorusElement; 3]) -> Result<Self> {
        Self::with_tolerance(components, HERMITIAN_TOL)
    }

    pub fn with_tolerance(components: [TorusElement; 3], tol: f64) -> Result<Self> {
        components[0].check_compatible(&components[1])?;
        components[0].check_compatible(&components[2])?;
        for (mu, a) in components.iter().enumerate() {
            let defect = a.hermitian_defect();
            if defect > tol {
                return Err(Error::Precondition {
                    what: format!("component A{} is not hermitian", mu + 1),
                    value: defect,
                    allowed: tol,
                });
            }
        }
        Ok(GaugePotential { components })
    }

    /// Any compatible triple, hermitian or not. Gauge transforms land here:
    /// `u ∂_μ(u*)` is anti-hermitian for unitary `u`.
    pub fn general(components: [TorusElement; 3]) -> Result<Self> {
        components[0].check_compatible(&components[1])?;
        components[0].check_compatible(&components[2])?;
        Ok(GaugePotential { components })
    }

    /// Largest `l1(A_μ − A_μ*)`.
    pub fn hermitian_defect(&self) -> f64 {
        self.components
            .iter()
            .map(TorusElement::hermitian_defect)
            .fold(0.0, f64::max)
    }

    pub fn zero(theta: crate::DeformationMatrix, n: usize) -> Self {
        let z = TorusElement::zero(theta, n);
        GaugePotential {
            components: [z.clone(), z.clone(), z],
        }
    }

    /// Component `A_μ`, `μ ∈ 1..=3`.
    pub fn component(&self, mu: usize) -> &TorusElement {
        &self.components[mu - 1]
    }

    pub fn components(&self) -> &[TorusElement; 3] {
        &self.components
    }

    /// Sum of the ℓ¹ norms of the components.
    pub fn l1(&self) -> f64 {
        self.components.iter().map(TorusElement::l1).sum()
    }
}

/// `S_CS[A] = (k/4π) Σ ε_{λμν} tr(A_λ ∂_μA_ν + (2/3) A_λA_μA_ν)`.
pub fn cs_action(a: &GaugePotential, k: Coupling) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for &(l, m, n, sign) in &EPSILON_TERMS {
        let al = a.component(l);
        let quad = al.trace_mul(&a.component(n).derive(m)?)?;
        let cubic = al.mul(a.component(m))?.trace_mul(a.component(n))?;
        acc += (quad + cubic * (2.0 / 3.0)) * sign;
    }
    Ok(acc * (k.value() / (4.0 * PI)))
}

/// `F_{μν} = ∂_μA_ν − ∂_νA_μ + [A_μ, A_ν]`, indexed 1-based.
#[derive(Clone, Debug)]
pub struct Curvature {
    f: [[TorusElement; 3]; 3],
}

impl Curvature {
    pub fn get(&self, mu: usize, nu: usize) -> &TorusElement {
        &self.f[mu - 1][nu - 1]
    }
}

pub fn curvature(a: &GaugePotential) -> Result<Curvature> {
    let zero = TorusElement::zero(*a.component(1).theta(), a.component(1).n());
    let mut f: [[TorusElement; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| zero.clone()));
    for mu in 1..=3 {
        for nu in (mu + 1)..=3 {
            let (am, an) = (a.component(mu), a.component(nu));
            let fmn = an.derive(mu)?.sub(&am.derive(nu)?)?.add(&am.commutator(an)?)?;
            f[nu - 1][mu - 1] = fmn.scale_re(-1.0);
            f[mu - 1][nu - 1] = fmn;
        }
    }
    Ok(Curvature { f })
}

fn require_unitary(u: &TorusElement, tol: f64) -> Result<f64> {
    let defect = u.defect_unitary();
    if defect > tol {
        return Err(Error::Precondition {
            what: "gauge transformation is not unitary".into(),
            value: defect,
            allowed: tol,
        });
    }
    Ok(defect)
}

/// `A_μ ↦ u A_μ u* + u ∂_μ(u*)`.
pub fn gauge_transform(a: &GaugePotential, u: &TorusElement, tol_u: f64) -> Result<GaugePotential> {
    a.component(1).check_compatible(u)?;
    require_unitary(u, tol_u)?;
    let ustar = u.adjoint();
    let mut out = Vec::with_capacity(3);
    for mu in 1..=3 {
        let conj = u.mul(a.component(mu))?.mul(&ustar)?;
        out.push(conj.add(&u.mul(&ustar.derive(mu)?)?)?);
    }
    GaugePotential::general(out.try_into().expect("three components"))
}

/// `W[u] = (1/24π²) Σ ε_{λμν} tr(u ∂_λ(u*) ∂_μu ∂_ν(u*))`; an integer for unitary `u`.
pub fn winding(u: &TorusElement, tol_u: f64) -> Result<Complex64> {
    require_unitary(u, tol_u)?;
    Ok(winding_unchecked(u)? / (24.0 * PI * PI))
}

/// The ε-contracted trace `Σ ε tr(u ∂_λu* ∂_μu ∂_νu*)` without the unitarity guard.
pub fn winding_unchecked(u: &TorusElement) -> Result<Complex64> {
    let ustar = u.adjoint();
    let du: Vec<TorusElement> = (1..=3).map(|i| u.derive(i)).collect::<Result<_>>()?;
    let dus: Vec<TorusElement> = (1..=3).map(|i| ustar.derive(i)).collect::<Result<_>>()?;
    let left: Vec<TorusElement> = dus.iter().map(|d| u.mul(d)).collect::<Result<_>>()?;
    let mut acc = Complex64::new(0.0, 0.0);
    for &(l, m, n, sign) in &EPSILON_TERMS {
        let right = du[m - 1].mul(&dus[n - 1])?;
        acc += left[l - 1].trace_mul(&right)? * sign;
    }
    Ok(acc)
}

/// Gauge variation `Γ[u] = (k/12π) Σ ε_{λμν} tr(u ∂_λ(u*) ∂_μu ∂_ν(u*))`,
/// which equals `S_CS[u ∂(u*)]` and `2πk · W[u]`.
pub fn gamma(u: &TorusElement, k: Coupling) -> Result<Complex64> {
    Ok(winding_unchecked(u)? * (k.value() / (12.0 * PI)))
}

/// `|S_CS[A^u] − S_CS[A] − Γ[u]|`.
pub fn gauge_variation_defect(a: &GaugePotential, u: &TorusElement, k: Coupling, tol_u: f64) -> Result<f64> {
    let transformed = gauge_transform(a, u, tol_u)?;
    let lhs = cs_action(&transformed, k)?;
    Ok((lhs - cs_action(a, k)? - gamma(u, k)?).norm())
}

/// Size against which [`gauge_variation_defect`] is compared: `s³` with
/// `s = 1 + |k|/4π · (max_μ l1(A_μ) + max_μ l1(∂_μu))`, bounding every term of
/// the action of `A` and of `A^u`.
pub fn variation_scale(a: &GaugePotential, u: &TorusElement, k: Coupling) -> Result<f64> {
    let la = a.components().iter().map(TorusElement::l1).fold(0.0, f64::max);
    let mut lu: f64 = 0.0;
    for mu in 1..=3 {
        lu = lu.max(u.derive(mu)?.l1());
    }
    let s = 1.0 + k.value().abs() / (4.0 * PI) * (la + lu);
    Ok(s.powi(3))
}

/// `(1/2iπ) tr(e(∂₁e∂₂e − ∂₂e∂₁e))`.
pub fn chern2(e: &TorusElement) -> Result<Complex64> {
    let d1 = e.derive(1)?;
    let d2 = e.derive(2)?;
    let comm = d1.mul(&d2)?.sub(&d2.mul(&d1)?)?;
    Ok(e.trace_mul(&comm)? / Complex64::new(0.0, 2.0 * PI))
}

/// Degree-`degree` Taylor polynomial of `exp(2iπ t h)`.
pub fn exp_trunc(h: &TorusElement, t: f64, degree: usize) -> Result<TorusElement> {
    let x = h.scale(Complex64::new(0.0, 2.0 * PI * t));
    let mut term = TorusElement::one(*h.theta(), h.n());
    let mut sum = term.clone();
    for j in 1..=degree {
        term = term.mul(&x)?.scale_re(1.0 / j as f64);
        sum = sum.add(&term)?;
    }
    Ok(sum)
}
