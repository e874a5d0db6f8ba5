//! Dense complex linear algebra on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub fn to_complex(a: &DMatrix<f64>) -> CMatrix {
    a.map(|x| Complex64::new(x, 0.0))
}

/// Largest eigenvalue of a Hermitian matrix and a unit eigenvector for it.
pub fn hermitian_max(h: &CMatrix) -> Result<(f64, CVector)> {
    let eig = nalgebra::linalg::SymmetricEigen::try_new(h.clone(), 1e-15, 10_000)
        .ok_or(Error::EigenFailure)?;
    let (imax, lmax) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .ok_or(Error::EigenFailure)?;
    if !lmax.is_finite() {
        return Err(Error::EigenFailure);
    }
    Ok((lmax, eig.eigenvectors.column(imax).into_owned()))
}

/// Largest singular value.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    a.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// `A = X diag(values) X^{-1}`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<Complex64>,
    pub vectors: CMatrix,
    pub inverse: CMatrix,
    /// 2-norm condition number of `vectors`.
    pub condition: f64,
}

impl Eigen {
    /// `X diag(f(lambda)) X^{-1} v`.
    pub fn apply_fn<F: Fn(Complex64) -> Complex64>(&self, f: F, v: &CVector) -> CVector {
        let mut y = &self.inverse * v;
        for (yi, &l) in y.iter_mut().zip(&self.values) {
            *yi *= f(l);
        }
        &self.vectors * y
    }

    /// Relative reconstruction residual `|X L X^{-1} - A| / |A|` (Frobenius).
    pub fn residual(&self, a: &CMatrix) -> f64 {
        let mut xl = self.vectors.clone();
        for (j, &l) in self.values.iter().enumerate() {
            for i in 0..xl.nrows() {
                xl[(i, j)] *= l;
            }
        }
        let r = xl * &self.inverse - a;
        r.norm() / a.norm()
    }
}

/// Eigendecomposition of a general complex matrix via the complex Schur form.
///
/// Eigenvectors of the triangular factor come from back substitution; the
/// inverse of the eigenvector matrix is formed by LU.
pub fn eigen_decompose(a: &CMatrix) -> Result<Eigen> {
    let n = a.nrows();
    let schur =
        nalgebra::linalg::Schur::try_new(a.clone(), 1e-15, 100_000).ok_or(Error::EigenFailure)?;
    let (q, t) = schur.unpack();
    let scale = t.norm().max(f64::MIN_POSITIVE);
    let mut y = CMatrix::zeros(n, n);
    for k in 0..n {
        let lk = t[(k, k)];
        y[(k, k)] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for j in i + 1..=k {
                s += t[(i, j)] * y[(j, k)];
            }
            let mut d = t[(i, i)] - lk;
            if d.norm() < f64::EPSILON * scale {
                d = Complex64::new(f64::EPSILON * scale, 0.0);
            }
            y[(i, k)] = -s / d;
        }
        let nrm = y.column(k).norm();
        y.column_mut(k).unscale_mut(nrm);
    }
    let x = q * y;
    let inverse = x.clone().try_inverse().ok_or(Error::EigenFailure)?;
    let sv = x.clone().singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let values = (0..n).map(|k| t[(k, k)]).collect();
    Ok(Eigen {
        values,
        vectors: x,
        inverse,
        condition: if smin > 0.0 {
            smax / smin
        } else {
            f64::INFINITY
        },
    })
}
