//! The algebra `M_N(A_θ)`: finitely supported matrix-valued Fourier series
//! over `Z³` with the twisted product, star, trace and derivations.

mod block;
mod kernel;
mod theta;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use block::Block;
pub use theta::{cis_turns, DeformationMatrix};

/// Coefficients whose Frobenius norm falls to this fraction of the
/// operation's scale are dropped.
pub const PRUNE_REL: f64 = 1e-15;

/// Fourier mode `(p₁, p₂, p₃)` of the monomial `U₁^{p₁}U₂^{p₂}U₃^{p₃}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub [i64; 3]);

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex([0, 0, 0]);

    pub fn new(p1: i64, p2: i64, p3: i64) -> Self {
        MultiIndex([p1, p2, p3])
    }

    pub fn radius(self) -> i64 {
        self.0.iter().map(|x| x.abs()).max().unwrap()
    }
}

impl std::ops::Neg for MultiIndex {
    type Output = MultiIndex;

    fn neg(self) -> Self {
        MultiIndex([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// An element of `M_N(A_θ)`. Immutable value; every operation returns a new
/// element. Stored coefficients are never the zero matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusElement {
    theta: DeformationMatrix,
    n: usize,
    coeffs: BTreeMap<MultiIndex, Block>,
}

fn check_axis(axis: usize) -> Result<()> {
    if (1..=3).contains(&axis) {
        Ok(())
    } else {
        Err(Error::Argument(format!("axis {axis} is outside 1..=3")))
    }
}

impl TorusElement {
    pub fn zero(theta: DeformationMatrix, n: usize) -> Self {
        assert!(n > 0, "matrix size must be positive");
        TorusElement {
            theta,
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(theta: DeformationMatrix, n: usize) -> Self {
        Self::monomial(theta, n, MultiIndex::ZERO, Complex64::new(1.0, 0.0))
    }

    /// `z · I_n · M(p)`.
    pub fn monomial(theta: DeformationMatrix, n: usize, p: MultiIndex, z: Complex64) -> Self {
        let mut el = Self::zero(theta, n);
        if z != Complex64::new(0.0, 0.0) {
            el.coeffs.insert(p, Block::scalar(n, z));
        }
        el
    }

    /// The generator `U_axis ⊗ I_n`.
    pub fn generator(theta: DeformationMatrix, n: usize, axis: usize) -> Result<Self> {
        check_axis(axis)?;
        let mut p = [0; 3];
        p[axis - 1] = 1;
        Ok(Self::monomial(theta, n, MultiIndex(p), Complex64::new(1.0, 0.0)))
    }

    /// Builds an element from explicit coefficients. Repeated modes are
    /// summed; zero blocks are dropped.
    pub fn from_coeffs<I>(theta: DeformationMatrix, n: usize, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Block)>,
    {
        if n == 0 {
            return Err(Error::Argument("matrix size must be positive".into()));
        }
        let mut map: BTreeMap<MultiIndex, Block> = BTreeMap::new();
        for (p, b) in coeffs {
            if b.n() != n {
                return Err(Error::Argument(format!(
                    "coefficient at {p} has size {}, expected {n}",
                    b.n()
                )));
            }
            if b.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::Argument(format!("non-finite coefficient at {p}")));
            }
            match map.get_mut(&p) {
                Some(acc) => acc.add_assign(&b),
                None => {
                    map.insert(p, b);
                }
            }
        }
        map.retain(|_, b| !b.is_zero());
        Ok(TorusElement { theta, n, coeffs: map })
    }

    /// Scalar coefficients (`n = 1`).
    pub fn from_scalars<I>(theta: DeformationMatrix, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        Self::from_coeffs(theta, 1, coeffs.into_iter().map(|(p, z)| (p, Block::scalar(1, z))))
    }

    pub fn theta(&self) -> &DeformationMatrix {
        &self.theta
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, p: MultiIndex) -> Option<&Block> {
        self.coeffs.get(&p)
    }

    /// Scalar coefficient at `p` for `n = 1` elements, or entry `(0,0)` otherwise.
    pub fn scalar_at(&self, p: MultiIndex) -> Complex64 {
        self.coeffs.get(&p).map_or(Complex64::new(0.0, 0.0), |b| b.get(0, 0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Block)> {
        self.coeffs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|p_i|` over the support (0 for the zero element).
    pub fn radius(&self) -> i64 {
        self.coeffs.keys().map(|p| p.radius()).max().unwrap_or(0)
    }

    pub fn check_compatible(&self, other: &TorusElement) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Composability(format!(
                "matrix sizes differ ({} vs {})",
                self.n, other.n
            )));
        }
        if self.theta != other.theta {
            return Err(Error::Composability(format!(
                "deformations differ ({:?} vs {:?})",
                self.theta, other.theta
            )));
        }
        Ok(())
    }

    fn max_frobenius(&self) -> f64 {
        self.coeffs.values().map(Block::frobenius).fold(0.0, f64::max)
    }

    fn with_coeffs(&self, coeffs: BTreeMap<MultiIndex, Block>) -> Self {
        TorusElement {
            theta: self.theta,
            n: self.n,
            coeffs,
        }
    }

    fn pruned<I: IntoIterator<Item = (MultiIndex, Block)>>(&self, items: I, scale: f64) -> Self {
        let cut = PRUNE_REL * scale;
        let coeffs = items
            .into_iter()
            .filter(|(_, b)| !b.is_zero() && b.frobenius() > cut)
            .collect();
        self.with_coeffs(coeffs)
    }

    pub fn add(&self, other: &TorusElement) -> Result<Self> {
        self.combine(other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &TorusElement) -> Result<Self> {
        self.combine(other, Complex64::new(-1.0, 0.0))
    }

    /// `self + z·other`, pruning cancellations relative to each mode's inputs.
    fn combine(&self, other: &TorusElement, z: Complex64) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = BTreeMap::new();
        let zn = z.norm();
        for (p, a) in &self.coeffs {
            match other.coeffs.get(p) {
                Some(b) => {
                    let mut s = a.clone();
                    s.add_assign(&b.scaled(z));
                    let cut = PRUNE_REL * (a.frobenius() + zn * b.frobenius());
                    if !s.is_zero() && s.frobenius() > cut {
                        out.insert(*p, s);
                    }
                }
                None => {
                    out.insert(*p, a.clone());
                }
            }
        }
        for (p, b) in &other.coeffs {
            if !self.coeffs.contains_key(p) {
                let s = b.scaled(z);
                if !s.is_zero() {
                    out.insert(*p, s);
                }
            }
        }
        Ok(self.with_coeffs(out))
    }

    pub fn scale(&self, z: Complex64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(p, b)| (*p, b.scaled(z)))
            .filter(|(_, b)| !b.is_zero())
            .collect();
        self.with_coeffs(coeffs)
    }

    pub fn scale_re(&self, x: f64) -> Self {
        self.scale(Complex64::new(x, 0.0))
    }

    /// Left-multiplies every coefficient by the constant matrix `m`.
    pub fn left_mul_block(&self, m: &Block) -> Result<Self> {
        if m.n() != self.n {
            return Err(Error::Composability("constant block size mismatch".into()));
        }
        let coeffs = self.coeffs.iter().map(|(p, b)| (*p, m.matmul(b)));
        Ok(self.pruned(coeffs, m.frobenius() * self.max_frobenius()))
    }

    /// Twisted product `(a·b)_r = Σ_{p+q=r} phase(p,q) a_p b_q`.
    pub fn mul(&self, other: &TorusElement) -> Result<Self> {
        self.mul_impl(other, None)
    }

    /// Product with a hard support cutoff: modes with any `|r_i| > radius` are dropped.
    pub fn mul_truncated(&self, other: &TorusElement, radius: i64) -> Result<Self> {
        self.mul_impl(other, Some(radius))
    }

    fn mul_impl(&self, other: &TorusElement, radius: Option<i64>) -> Result<Self> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.with_coeffs(BTreeMap::new()));
        }
        let items = kernel::twisted_product(&self.theta, self.n, &self.coeffs, &other.coeffs, radius);
        Ok(self.pruned(items, self.max_frobenius() * other.max_frobenius()))
    }

    /// Drops modes with any `|p_i| > radius`.
    pub fn truncated(&self, radius: i64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(p, _)| p.radius() <= radius)
            .map(|(p, b)| (*p, b.clone()))
            .collect();
        self.with_coeffs(coeffs)
    }

    /// `[a, b] = ab − ba`.
    pub fn commutator(&self, other: &TorusElement) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Star involution: `(a*)_p = ω(p) · (a_{−p})^†` with `M(p)* = ω(p) M(−p)`.
    pub fn adjoint(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(p, b)| {
                let q = -*p;
                (q, b.dagger().scaled(self.theta.adjoint_phase(p.0)))
            })
            .collect();
        self.with_coeffs(coeffs)
    }

    /// `∂_axis`, multiplying the mode-`p` coefficient by `2iπ p_axis`.
    pub fn derive(&self, axis: usize) -> Result<Self> {
        check_axis(axis)?;
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(p, _)| p.0[axis - 1] != 0)
            .map(|(p, b)| (*p, b.scaled(Complex64::new(0.0, 2.0 * PI * p.0[axis - 1] as f64))))
            .collect();
        Ok(self.with_coeffs(coeffs))
    }

    /// Matrix trace of the constant mode; `trace(one) = n`.
    pub fn trace(&self) -> Complex64 {
        self.coeffs
            .get(&MultiIndex::ZERO)
            .map_or(Complex64::new(0.0, 0.0), Block::trace)
    }

    /// `trace(self · other)` without forming the product.
    pub fn trace_mul(&self, other: &TorusElement) -> Result<Complex64> {
        self.check_compatible(other)?;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut tmp = Block::zeros(self.n);
        for (p, a) in &self.coeffs {
            if let Some(b) = other.coeffs.get(&-*p) {
                let phase = self.theta.product_phase(p.0, (-*p).0);
                tmp.as_mut_slice()
                    .iter_mut()
                    .for_each(|z| *z = Complex64::new(0.0, 0.0));
                block::mul_acc(self.n, tmp.as_mut_slice(), a.as_slice(), b.as_slice(), phase);
                acc += tmp.trace();
            }
        }
        Ok(acc)
    }

    /// `(ℓ¹, ℓ^∞)` of the coefficient operator norms. The ℓ¹ value bounds the
    /// C*-norm from above.
    pub fn norms(&self) -> (f64, f64) {
        self.coeffs
            .values()
            .map(Block::op_norm)
            .fold((0.0, 0.0), |(s, m), x| (s + x, m.max(x)))
    }

    pub fn l1(&self) -> f64 {
        self.norms().0
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    /// `l1(a − a*)`.
    pub fn hermitian_defect(&self) -> f64 {
        self.sub(&self.adjoint()).expect("same algebra").l1()
    }

    /// `max(l1(a a* − 1), l1(a* a − 1))`.
    pub fn defect_unitary(&self) -> f64 {
        let one = TorusElement::one(self.theta, self.n);
        let star = self.adjoint();
        let left = self.mul(&star).and_then(|x| x.sub(&one)).expect("same algebra");
        let right = star.mul(self).and_then(|x| x.sub(&one)).expect("same algebra");
        left.l1().max(right.l1())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.defect_unitary() <= tol
    }
}

/// Levi-Civita symbol on 1-based axes, `ε₁₂₃ = 1`.
pub fn levi_civita(l: usize, m: usize, n: usize) -> i32 {
    match (l, m, n) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1,
        (1, 3, 2) | (3, 2, 1) | (2, 1, 3) => -1,
        _ => 0,
    }
}

/// The six `(λ, μ, ν, ε_{λμν})` with nonzero sign, in lexicographic order.
pub const EPSILON_TERMS: [(usize, usize, usize, f64); 6] = [
    (1, 2, 3, 1.0),
    (1, 3, 2, -1.0),
    (2, 1, 3, -1.0),
    (2, 3, 1, 1.0),
    (3, 1, 2, 1.0),
    (3, 2, 1, -1.0),
];
