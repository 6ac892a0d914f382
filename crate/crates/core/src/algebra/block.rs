use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense `n×n` complex matrix, row-major. The coefficient type of a
/// [`TorusElement`](super::TorusElement).
#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    n: usize,
    data: Vec<Complex64>,
}

impl Block {
    pub fn zeros(n: usize) -> Self {
        Block {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn scalar(n: usize, z: Complex64) -> Self {
        let mut b = Block::zeros(n);
        for i in 0..n {
            b.data[i * n + i] = z;
        }
        b
    }

    pub fn identity(n: usize) -> Self {
        Block::scalar(n, Complex64::new(1.0, 0.0))
    }

    pub fn from_row_major(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::Argument(format!(
                "block of size {n} needs {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        Ok(Block { n, data })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.n + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, z: Complex64) {
        self.data[row * self.n + col] = z;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> f64 {
        if self.n == 1 {
            return self.data[0].norm();
        }
        let m = DMatrix::from_row_slice(self.n, self.n, &self.data);
        m.singular_values().max()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Block {
        let n = self.n;
        let mut out = Block::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        out
    }

    pub fn scaled(&self, z: Complex64) -> Block {
        Block {
            n: self.n,
            data: self.data.iter().map(|x| x * z).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Block) {
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += y;
        }
    }

    pub fn matmul(&self, other: &Block) -> Block {
        let mut out = Block::zeros(self.n);
        mul_acc(self.n, &mut out.data, &self.data, &other.data, Complex64::new(1.0, 0.0));
        out
    }
}

/// `out += z · a · b` on raw row-major `n×n` slices.
#[inline]
pub(crate) fn mul_acc(n: usize, out: &mut [Complex64], a: &[Complex64], b: &[Complex64], z: Complex64) {
    if n == 1 {
        out[0] += z * a[0] * b[0];
        return;
    }
    for r in 0..n {
        for k in 0..n {
            let x = a[r * n + k];
            if x.re == 0.0 && x.im == 0.0 {
                continue;
            }
            let x = x * z;
            for c in 0..n {
                out[r * n + c] += x * b[k * n + c];
            }
        }
    }
}
