//! Indefinite integration operators `(J+ g)(t) = int_0^t g` and
//! `(J- g)(t) = int_t^beta g` on `(0, beta)`, their norms and numerical ranges.
//!
//! Two discretisations:
//!
//! * `Trapezoid`: midpoint grid `t_i = (i - 1/2) h`, `J+ = h (L + I/2)` with `L`
//!   the strictly lower triangular ones matrix, `J- = J+^T`. Exactly
//!   triangular; `J+ 1 = t` holds exactly, and `J+ + J+^T = h 1 1^T`, so
//!   `Re (J+ g, g) = |sum w g|^2 / 2` holds to rounding.
//! * `Sinc`: nodes `x_k = beta e^{kh} / (1 + e^{kh})`, `J+ = h I^(-1) D` with
//!   `I^(-1)_{jk} = 1/2 + Si(pi (j - k)) / pi` and `D = diag(x (beta - x) / beta)`.
//!   Its spectrum stays away from the origin, which matrix functions need.
//!
//! Inner products are weighted by the quadrature weights of the grid, so the
//! Euclidean counterpart of an operator `A` is `W^{1/2} A W^{-1/2}`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{self, CMatrix, CVector};
use crate::quadrule::{self, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    Jplus,
    Jminus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Trapezoid,
    Sinc,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteOperator {
    pub matrix: DMatrix<f64>,
    pub grid: Vec<f64>,
    pub weights: Vec<f64>,
    pub beta: f64,
    pub kind: OpKind,
    pub scheme: Scheme,
}

/// `Si(x) = int_0^x sin(t)/t dt`.
pub fn sine_integral(x: f64) -> f64 {
    if x < 0.0 {
        return -sine_integral(-x);
    }
    if x == 0.0 {
        return 0.0;
    }
    let panels = (x / PI).ceil().max(1.0) as usize;
    let rule = quadrule::composite_gauss(0.0, x, panels, 20);
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&t, &w)| w * if t == 0.0 { 1.0 } else { t.sin() / t })
        .sum()
}

pub fn build_j(kind: OpKind, scheme: Scheme, beta: f64, n: usize) -> Result<DiscreteOperator> {
    if n < 8 {
        return Err(Error::InvalidInput(format!("n = {n}; need n >= 8")));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidInput(format!("beta = {beta}; need beta > 0")));
    }
    let (matrix, grid, weights) = match scheme {
        Scheme::Trapezoid => {
            let h = beta / n as f64;
            let grid: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * h).collect();
            let m = DMatrix::from_fn(n, n, |i, j| {
                let (row, col) = match kind {
                    OpKind::Jplus => (i, j),
                    OpKind::Jminus => (j, i),
                };
                if col < row {
                    h
                } else if col == row {
                    0.5 * h
                } else {
                    0.0
                }
            });
            (m, grid, vec![h; n])
        }
        Scheme::Sinc => {
            let nn = (n - 1) / 2;
            let mm = n - 1 - nn;
            let h = PI / ((2 * mm.min(nn)) as f64).sqrt();
            let grid: Vec<f64> = (0..n)
                .map(|i| {
                    let k = i as f64 - mm as f64;
                    // beta e^{kh} / (1 + e^{kh}) written to avoid overflow
                    beta / (1.0 + (-k * h).exp())
                })
                .collect();
            let d: Vec<f64> = grid.iter().map(|&x| x * (beta - x) / beta).collect();
            let si: Vec<f64> = (0..n).map(|l| sine_integral(PI * l as f64) / PI).collect();
            let e = |l: i64| -> f64 {
                if l >= 0 {
                    0.5 + si[l as usize]
                } else {
                    0.5 - si[(-l) as usize]
                }
            };
            let m = DMatrix::from_fn(n, n, |i, j| {
                let l = match kind {
                    OpKind::Jplus => i as i64 - j as i64,
                    OpKind::Jminus => j as i64 - i as i64,
                };
                h * e(l) * d[j]
            });
            let weights = d.iter().map(|&v| h * v).collect();
            (m, grid, weights)
        }
    };
    Ok(DiscreteOperator {
        matrix,
        grid,
        weights,
        beta,
        kind,
        scheme,
    })
}

impl DiscreteOperator {
    pub fn n(&self) -> usize {
        self.grid.len()
    }

    pub fn apply(&self, g: &[f64]) -> Vec<f64> {
        let v = nalgebra::DVector::from_column_slice(g);
        (&self.matrix * v).iter().copied().collect()
    }

    pub fn apply_c(&self, g: &CVector) -> CVector {
        linalg::to_complex(&self.matrix) * g
    }

    /// `W^{1/2} A W^{-1/2}`: the operator in Euclidean coordinates.
    pub fn weighted_real(&self) -> DMatrix<f64> {
        let s: Vec<f64> = self.weights.iter().map(|w| w.sqrt()).collect();
        DMatrix::from_fn(self.n(), self.n(), |i, j| s[i] * self.matrix[(i, j)] / s[j])
    }

    pub fn weighted(&self) -> CMatrix {
        linalg::to_complex(&self.weighted_real())
    }

    /// Eigenvalues; read off the diagonal when the matrix is triangular.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        if self.scheme == Scheme::Trapezoid {
            return Ok((0..self.n())
                .map(|i| Complex64::new(self.matrix[(i, i)], 0.0))
                .collect());
        }
        Ok(linalg::eigen_decompose(&self.weighted())?.values)
    }
}

/// L2(0, beta) operator norm of the discretisation.
pub fn operator_norm(op: &DiscreteOperator) -> f64 {
    op.weighted_real()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// `(f, Tf) / (f, f)` in the grid-weighted inner product `(u, v) = sum w conj(u) v`.
///
/// For real operators this is the complex conjugate of the `int conj(Tf) f`
/// convention; real parts agree.
pub fn rayleigh(op: &DiscreteOperator, f: &[Complex64]) -> Result<Complex64> {
    let ff: f64 = f
        .iter()
        .zip(&op.weights)
        .map(|(x, w)| w * x.norm_sqr())
        .sum();
    if ff == 0.0 {
        return Err(Error::ZeroVector);
    }
    let tf = op.apply_c(&CVector::from_column_slice(f));
    let num: Complex64 = f
        .iter()
        .zip(tf.iter())
        .zip(&op.weights)
        .map(|((x, y), w)| x.conj() * y * *w)
        .sum();
    Ok(num / ff)
}

/// Euclidean Rayleigh quotient `v* B v / v* v`.
pub fn rayleigh_matrix(b: &CMatrix, v: &CVector) -> Result<Complex64> {
    let vv = v.norm_squared();
    if vv == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(v.dotc(&(b * v)) / vv)
}

/// Field of values traced by rotation.
///
/// For each angle `theta`, `lambda_max(theta)` is the largest eigenvalue of the
/// Hermitian part of `e^{i theta} B`: the support function of the set in
/// direction `e^{-i theta}`. Its eigenvector gives a boundary point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FovBoundary {
    pub angles: Vec<f64>,
    pub support_points: Vec<Complex64>,
    pub support_values: Vec<f64>,
    pub rayleigh_samples: Vec<Complex64>,
}

impl FovBoundary {
    /// `max_theta [Re(e^{i theta} z) - lambda_max(theta)]`; `<= 0` inside the traced polygon.
    pub fn excess(&self, z: Complex64) -> f64 {
        self.angles
            .iter()
            .zip(&self.support_values)
            .map(|(&th, &l)| (Complex64::from_polar(1.0, th) * z).re - l)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        self.excess(z) <= tol
    }

    pub fn min_re(&self) -> f64 {
        self.support_points
            .iter()
            .map(|z| z.re)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_re(&self) -> f64 {
        self.support_points
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub const FOV_SEED: u64 = 0x5eed_f0f0;

/// Field of values of a square complex matrix in the Euclidean inner product.
pub fn field_of_values(
    b: &CMatrix,
    n_angles: usize,
    n_samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<FovBoundary> {
    if n_angles < 8 {
        return Err(Error::InvalidInput("need at least 8 angles".into()));
    }
    if b.nrows() != b.ncols() || b.nrows() == 0 {
        return Err(Error::InvalidInput(
            "matrix must be square and non-empty".into(),
        ));
    }
    let angles: Vec<f64> = (0..n_angles)
        .map(|j| TAU * j as f64 / n_angles as f64)
        .collect();
    let per_angle = exec.map(&angles, |&th| -> Result<(f64, Complex64)> {
        let r = b * Complex64::from_polar(1.0, th);
        let h = (&r + r.adjoint()) * Complex64::new(0.5, 0.0);
        let (l, v) = linalg::hermitian_max(&h)?;
        Ok((l, rayleigh_matrix(b, &v)?))
    });
    let mut support_values = Vec::with_capacity(n_angles);
    let mut support_points = Vec::with_capacity(n_angles);
    for r in per_angle {
        let (l, p) = r?;
        support_values.push(l);
        support_points.push(p);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = b.nrows();
    let mut rayleigh_samples = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let v = CVector::from_fn(n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        rayleigh_samples.push(rayleigh_matrix(b, &v)?);
    }
    Ok(FovBoundary {
        angles,
        support_points,
        support_values,
        rayleigh_samples,
    })
}

/// Field of values of a discretised operator in its weighted inner product.
pub fn operator_field_of_values(
    op: &DiscreteOperator,
    n_angles: usize,
    exec: Exec,
) -> Result<FovBoundary> {
    field_of_values(&op.weighted(), n_angles, 100, FOV_SEED, exec)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem35Result {
    pub a: f64,
    pub b: f64,
    pub kernel_id: String,
    pub sigma: Option<f64>,
}

/// `a = -pi int_0^inf y k(y)^2 dy`, `b = (int_0^inf k)^2 / 2`.
pub fn theorem35_ab<K: Fn(f64) -> f64>(
    k: K,
    kernel_id: &str,
    sigma: Option<f64>,
    cfg: &QuadConfig,
) -> Result<Theorem35Result> {
    let m1 = quadrule::integrate_semiinf(
        |y| {
            let v = k(y);
            Complex64::new(if v == 0.0 { 0.0 } else { y * v * v }, 0.0)
        },
        cfg,
    )?;
    let m0 = quadrule::integrate_semiinf(|y| Complex64::new(k(y), 0.0), cfg)?;
    Ok(Theorem35Result {
        a: -PI * m1.value.re,
        b: 0.5 * m0.value.re * m0.value.re,
        kernel_id: kernel_id.to_string(),
        sigma,
    })
}

/// Samples of `int_0^inf e^{i x y} k(y) dy` on an equispaced grid `xs[j] = j dx`.
///
/// A composite Gauss rule in `y` fine enough for the largest `x`, combined
/// with the phase recurrence `e^{i x_{j+1} y} = e^{i x_j y} e^{i dx y}`.
pub fn fourier_samples<K: Fn(f64) -> f64 + Sync>(
    k: K,
    dx: f64,
    n: usize,
    exec: Exec,
) -> Vec<Complex64> {
    let kmax = (0..=800)
        .map(|i| k(0.25 * i as f64).abs())
        .fold(0.0, f64::max);
    let last = (0..=800)
        .rev()
        .find(|&i| k(0.25 * i as f64).abs() > 1e-17 * kmax)
        .unwrap_or(0);
    let ymax = 0.25 * last as f64 + 0.5;
    let xmax = dx * (n.max(1) - 1) as f64;
    let width = (TAU / xmax.max(1.0)).min(0.5);
    let panels = (ymax / width).ceil() as usize;
    let rule = quadrule::composite_gauss(0.0, ymax, panels, 20);
    let wk: Vec<(f64, f64)> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&y, &w)| (y, w * k(y)))
        .collect();
    let chunks: Vec<&[(f64, f64)]> = wk.chunks(2048).collect();
    let partial = exec.map(&chunks, |chunk| {
        let mut acc = vec![Complex64::new(0.0, 0.0); n];
        for &(y, wkv) in chunk.iter() {
            if wkv == 0.0 {
                continue;
            }
            let step = Complex64::from_polar(1.0, dx * y);
            let mut ph = Complex64::new(wkv, 0.0);
            for (j, a) in acc.iter_mut().enumerate() {
                if j % 256 == 0 {
                    // refresh to keep the recurrence error bounded
                    ph = Complex64::from_polar(wkv, dx * j as f64 * y);
                }
                *a += ph;
                ph *= step;
            }
        }
        acc
    });
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for p in partial {
        for (o, v) in out.iter_mut().zip(p) {
            *o += v;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crosscheck {
    /// `int_0^X conj(i khat'(x)) khat(x) dx` on the sample grid.
    pub lhs: Complex64,
    /// `a + i b` from the closed quadratures.
    pub rhs: Complex64,
    /// `|Im lhs - b|` (hard check).
    pub residual_im: f64,
    /// `|Re lhs - a|` (diagnostic only).
    pub residual_re: f64,
    /// `|khat(X)|^2 >= 1e-10 |khat|^2`: the grid does not reach the decay region.
    pub truncation_warning: bool,
}

pub fn theorem35_crosscheck<K: Fn(f64) -> f64 + Sync>(
    k: K,
    x_max: f64,
    n: usize,
    cfg: &QuadConfig,
    exec: Exec,
) -> Result<Crosscheck> {
    if n < 512 || !(x_max > 0.0) {
        return Err(Error::InvalidInput(
            "crosscheck needs n >= 512 and X > 0".into(),
        ));
    }
    let dx = x_max / (n - 1) as f64;
    let kh = fourier_samples(&k, dx, n, exec);
    // khat'(x) = int i y e^{ixy} k(y) dy, transformed directly
    let d: Vec<Complex64> = fourier_samples(|y| y * k(y), dx, n, exec)
        .into_iter()
        .map(|v| Complex64::i() * v)
        .collect();
    let i = Complex64::i();
    let mut lhs = Complex64::new(0.0, 0.0);
    let mut norm2 = 0.0;
    for j in 0..n {
        let w = if j == 0 || j == n - 1 { 0.5 * dx } else { dx };
        lhs += (i * d[j]).conj() * kh[j] * w;
        norm2 += kh[j].norm_sqr() * w;
    }
    let ab = theorem35_ab(&k, "crosscheck", None, cfg)?;
    Ok(Crosscheck {
        lhs,
        rhs: Complex64::new(ab.a, ab.b),
        residual_im: (lhs.im - ab.b).abs(),
        residual_re: (lhs.re - ab.a).abs(),
        truncation_warning: kh[n - 1].norm_sqr() >= 1e-10 * norm2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sine_integral_values() {
        // Si(pi) = 1.851937051982466, Si(inf) = pi/2
        assert!((sine_integral(PI) - 1.851_937_051_982_466).abs() < 1e-15);
        assert!((sine_integral(200.0 * PI) - PI / 2.0).abs() < 2e-3);
        assert_eq!(sine_integral(0.0), 0.0);
    }

    #[test]
    fn jplus_of_one_is_t() {
        for scheme in [Scheme::Trapezoid, Scheme::Sinc] {
            let op = build_j(OpKind::Jplus, scheme, 1.0, 64).unwrap();
            let r = op.apply(&vec![1.0; 64]);
            let err = r
                .iter()
                .zip(&op.grid)
                .map(|(a, t)| (a - t).abs())
                .fold(0.0, f64::max);
            assert!(err < 1e-3, "{scheme:?} {err}");
        }
        let op = build_j(OpKind::Jplus, Scheme::Trapezoid, 1.0, 64).unwrap();
        let r = op.apply(&vec![1.0; 64]);
        assert!(r.iter().zip(&op.grid).all(|(a, t)| (a - t).abs() < 1e-15));
    }

    #[test]
    fn jminus_of_one_is_beta_minus_t() {
        for scheme in [Scheme::Trapezoid, Scheme::Sinc] {
            let op = build_j(OpKind::Jminus, scheme, 1.0, 64).unwrap();
            let r = op.apply(&vec![1.0; 64]);
            let err = r
                .iter()
                .zip(&op.grid)
                .map(|(a, t)| (a - (1.0 - t)).abs())
                .fold(0.0, f64::max);
            assert!(err < 1e-3, "{scheme:?} {err}");
        }
    }

    #[test]
    fn trapezoid_is_second_order() {
        let err = |n: usize| {
            let op = build_j(OpKind::Jplus, Scheme::Trapezoid, 1.0, n).unwrap();
            let g: Vec<f64> = op.grid.iter().map(|t| t.sin()).collect();
            op.apply(&g)
                .iter()
                .zip(&op.grid)
                .map(|(a, t)| (a - (1.0 - t.cos())).abs())
                .fold(0.0, f64::max)
        };
        for n in [32, 64, 128] {
            let ratio = err(n) / err(2 * n);
            assert!((ratio - 4.0).abs() < 0.2, "n={n} ratio={ratio}");
        }
    }

    #[test]
    fn structure() {
        let p = build_j(OpKind::Jplus, Scheme::Trapezoid, 1.0, 16).unwrap();
        let m = build_j(OpKind::Jminus, Scheme::Trapezoid, 1.0, 16).unwrap();
        assert_eq!(p.matrix.transpose(), m.matrix);
        for i in 0..16 {
            for j in i + 1..16 {
                assert_eq!(p.matrix[(i, j)], 0.0);
            }
        }
        let s = build_j(OpKind::Jplus, Scheme::Sinc, 1.0, 33).unwrap();
        assert!(s.grid.windows(2).all(|w| w[1] > w[0]));
        assert!(s.grid.iter().all(|&x| x > 0.0 && x < 1.0));
        assert!(s.weights.iter().all(|&w| w > 0.0));
        assert!(build_j(OpKind::Jplus, Scheme::Sinc, 1.0, 4).is_err());
        assert!(build_j(OpKind::Jplus, Scheme::Sinc, -1.0, 16).is_err());
    }

    #[test]
    fn norm_values() {
        let n1 = operator_norm(&build_j(OpKind::Jplus, Scheme::Trapezoid, 1.0, 512).unwrap());
        assert!((n1 - 2.0 / PI).abs() < 1e-3, "{n1}");
        assert!(n1 <= 1.0 / 2f64.sqrt());
        let n2 = operator_norm(&build_j(OpKind::Jplus, Scheme::Trapezoid, 2.0, 512).unwrap());
        assert!((n2 - 2.0 * n1).abs() < 1e-6 * n1);
    }

    #[test]
    fn fov_trivial_matrices() {
        let id = CMatrix::identity(5, 5);
        let f = field_of_values(&id, 36, 100, 1, Exec::Sequential).unwrap();
        assert!(f
            .support_points
            .iter()
            .all(|p| (p - c(1.0, 0.0)).norm() < 1e-14));
        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)]));
        let f = field_of_values(&d, 36, 100, 1, Exec::Sequential).unwrap();
        assert!(f
            .support_points
            .iter()
            .all(|p| p.im.abs() < 1e-14 && p.re > -1e-14 && p.re < 1.0 + 1e-14));
        assert!((f.min_re()).abs() < 1e-14 && (f.max_re() - 1.0).abs() < 1e-14);
        assert!(f.contains(c(0.5, 0.0), 1e-12));
        assert!(!f.contains(c(0.5, 0.1), 1e-12));
    }

    #[test]
    fn fov_jplus_right_half_plane() {
        let op = build_j(OpKind::Jplus, Scheme::Trapezoid, 1.0, 128).unwrap();
        let f = operator_field_of_values(&op, 360, Exec::Parallel).unwrap();
        assert!(f.min_re() >= -1e-12, "{}", f.min_re());
        for s in &f.rayleigh_samples {
            assert!(f.contains(*s, 1e-10));
        }
        for l in op.eigenvalues().unwrap() {
            assert!(f.contains(l, 1e-8));
        }
    }

    #[test]
    fn rayleigh_identities() {
        let op = build_j(OpKind::Jplus, Scheme::Trapezoid, 1.0, 64).unwrap();
        let f: Vec<Complex64> = op
            .grid
            .iter()
            .map(|t| c((3.0 * t).cos() + t, 0.0))
            .collect();
        let r = rayleigh(&op, &f).unwrap();
        let s: f64 = f.iter().zip(&op.weights).map(|(x, w)| w * x.re).sum();
        let ff: f64 = f
            .iter()
            .zip(&op.weights)
            .map(|(x, w)| w * x.norm_sqr())
            .sum();
        assert!((r.re - 0.5 * s * s / ff).abs() < 1e-14);
        // mean-zero vector
        let g: Vec<Complex64> = op.grid.iter().map(|t| c((TAU * t).cos(), 0.0)).collect();
        assert!(rayleigh(&op, &g).unwrap().re.abs() < 1e-8);
        assert!(matches!(
            rayleigh(&op, &vec![c(0.0, 0.0); 64]),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn theorem35_closed_forms() {
        let cfg = QuadConfig::default();
        let r = theorem35_ab(|y| (-y).exp(), "exp1", None, &cfg).unwrap();
        assert!((r.a + PI / 4.0).abs() < 1e-10 && (r.b - 0.5).abs() < 1e-10);
        let r = theorem35_ab(|y| (-2.0 * y).exp(), "exp2", None, &cfg).unwrap();
        assert!((r.a + PI / 16.0).abs() < 1e-10 && (r.b - 0.125).abs() < 1e-10);
    }

    #[test]
    fn crosscheck_imaginary_side() {
        let cfg = QuadConfig::default();
        let r = theorem35_crosscheck(|y| (-y).exp(), 200.0, 4096, &cfg, Exec::Parallel).unwrap();
        assert!(r.residual_im < 1e-3, "{r:?}");
        assert!(r.truncation_warning);
        let z = theorem35_crosscheck(
            |y| (-y).exp() - 2.0 * (-2.0 * y).exp(),
            200.0,
            4096,
            &cfg,
            Exec::Parallel,
        )
        .unwrap();
        assert!(z.lhs.im.abs() < 1e-3, "{z:?}");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(20))]
            #[test]
            fn positive_kernels_have_a_negative_b_positive(
                c1 in 0.1f64..2.0, c2 in 0.0f64..2.0, l1 in 0.2f64..3.0, l2 in 0.2f64..3.0
            ) {
                let r = theorem35_ab(move |y| c1 * (-l1 * y).exp() + c2 * y * (-l2 * y).exp(), "rand", None, &QuadConfig::default()).unwrap();
                prop_assert!(r.a < 0.0 && r.b > 0.0);
            }

            #[test]
            fn re_jplus_identity(seed in any::<u64>()) {
                let op = build_j(OpKind::Jplus, Scheme::Trapezoid, 1.0, 48).unwrap();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let g: Vec<f64> = (0..48).map(|_| rng.random_range(-1.0..1.0)).collect();
                let jg = op.apply(&g);
                let lhs: f64 = jg.iter().zip(&g).zip(&op.weights).map(|((a, b), w)| w * a * b).sum();
                let s: f64 = g.iter().zip(&op.weights).map(|(a, w)| w * a).sum();
                prop_assert!((lhs - 0.5 * s * s).abs() < 1e-10);
            }

            #[test]
            fn fov_midpoints_inside(seed in any::<u64>()) {
                let op = build_j(OpKind::Jplus, Scheme::Sinc, 1.0, 24).unwrap();
                let b = op.weighted();
                let f = field_of_values(&b, 90, 20, seed, Exec::Sequential).unwrap();
                for w in f.rayleigh_samples.windows(2) {
                    prop_assert!(f.contains(0.5 * (w[0] + w[1]), 1e-8));
                }
            }
        }
    }
}
