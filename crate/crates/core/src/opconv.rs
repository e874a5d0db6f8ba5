//! Convolution, Fourier inversion and resolvent identities through functions
//! of the discretised integration operators.
//!
//! With `khat(y) = int_{R+} k(t) e^{ity} dt`, the Volterra convolution
//! `q(t) = int_0^t k(t - y) g(y) dy` equals `khat(i / J+) g`, and `k` itself is
//! `(1/J+) khat(i / J+) 1`. The minus side is the reflection: `k-(t) = k+(-t)`,
//! `khat-(y) = khat+(-y)`, `q- = khat-(-i / J-) g = khat+(i / J-) g`.
//!
//! Matrix functions are taken by diagonalising the Sinc discretisation in its
//! symmetrising inner product. The trapezoid matrix is triangular with a single
//! repeated eigenvalue and cannot be diagonalised.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::intops::{DiscreteOperator, OpKind, Scheme};
use crate::linalg::{self, CMatrix, CVector, Eigen};
use crate::quadrule::{self, QuadConfig};

type RealFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Minus,
    Plus,
}

/// A kernel on a half line together with its Fourier transform.
///
/// `k` accepts complex arguments so that transforms can be computed along
/// rotated rays; on its half line it must be real.
#[derive(Clone)]
pub struct TransformPair {
    pub id: String,
    pub side: Side,
    k: RealFn,
    khat: RealFn,
}

impl fmt::Debug for TransformPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransformPair")
            .field("id", &self.id)
            .field("side", &self.side)
            .finish()
    }
}

/// Transform of a plus-side kernel by quadrature, for `Im y >= 0`.
///
/// Moderate `|y|`: Gauss panels on `[0, cutoff]` resolving the oscillation.
/// Large `|y|`: the ray `t = r e^{i theta}`, `theta = pi/2 - arg y`, on which
/// `e^{ity} = e^{-|y| r}`; requires `k` analytic near the origin.
pub fn numeric_khat<K: Fn(Complex64) -> Complex64>(k: K, cutoff: f64, y: Complex64) -> Complex64 {
    if y.norm() <= 50.0 {
        let width = (2.0 / y.norm().max(1.0)).min(0.125);
        let panels = (cutoff / width).ceil() as usize;
        let rule = quadrule::composite_gauss(0.0, cutoff, panels, 30);
        let iy = Complex64::i() * y;
        return rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&t, &w)| k(Complex64::new(t, 0.0)) * (iy * t).exp() * w)
            .sum();
    }
    let e = Complex64::from_polar(1.0, PI / 2.0 - y.arg());
    let r_max = 45.0 / y.norm();
    let rule = quadrule::composite_gauss(0.0, r_max, 40, 30);
    let s: Complex64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&r, &w)| k(e * r) * (-y.norm() * r).exp() * w)
        .sum();
    s * e
}

impl TransformPair {
    pub fn new<K, H>(id: &str, side: Side, k: K, khat: H) -> Self
    where
        K: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        H: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        TransformPair {
            id: id.to_string(),
            side,
            k: Arc::new(k),
            khat: Arc::new(khat),
        }
    }

    /// `e^{-rate t}` on `R+`, `khat(y) = 1 / (rate - i y)`.
    pub fn exponential(rate: f64) -> Self {
        TransformPair::new(
            &format!("exp{rate}"),
            Side::Plus,
            move |t| (-rate * t).exp(),
            move |y| 1.0 / (rate - Complex64::i() * y),
        )
    }

    /// `t e^{-t}` on `R+`, `khat(y) = 1 / (1 - i y)^2`.
    pub fn t_exponential() -> Self {
        TransformPair::new(
            "texp",
            Side::Plus,
            |t| t * (-t).exp(),
            |y| {
                let d = 1.0 - Complex64::i() * y;
                1.0 / (d * d)
            },
        )
    }

    /// `e^{-t^2}` restricted to `R+`; numeric transform.
    pub fn truncated_gaussian() -> Self {
        let k = |t: Complex64| (-t * t).exp();
        TransformPair::new("gauss", Side::Plus, k, move |y| numeric_khat(k, 6.5, y))
    }

    /// `kappa+(sigma, t) = e^{sigma t} / (1 + e^{e^t})` on `R+`; numeric transform.
    pub fn kappa_plus(sigma: f64) -> Self {
        let k = move |t: Complex64| (sigma * t).exp() / (1.0 + t.exp().exp());
        TransformPair::new(&format!("kappa+({sigma})"), Side::Plus, k, move |y| {
            numeric_khat(k, 5.0, y)
        })
    }

    /// `k-(t) = k+(-t)` on `R-`, `khat-(y) = khat+(-y)`.
    pub fn reflect(&self) -> Self {
        let (k, h) = (self.k.clone(), self.khat.clone());
        TransformPair {
            id: format!("{}~", self.id),
            side: match self.side {
                Side::Plus => Side::Minus,
                Side::Minus => Side::Plus,
            },
            k: Arc::new(move |t| k(-t)),
            khat: Arc::new(move |y| h(-y)),
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        let (k, h) = (self.k.clone(), self.khat.clone());
        TransformPair {
            id: format!("{c}*{}", self.id),
            side: self.side,
            k: Arc::new(move |t| k(t) * c),
            khat: Arc::new(move |y| h(y) * c),
        }
    }

    pub fn k(&self, t: f64) -> f64 {
        (self.k)(Complex64::new(t, 0.0)).re
    }

    pub fn khat(&self, y: Complex64) -> Complex64 {
        (self.khat)(y)
    }

    /// `khat(-i/lambda)` on the minus side, `khat(i/lambda)` on the plus side.
    fn symbol(&self, lambda: Complex64) -> Complex64 {
        let s = match self.side {
            Side::Minus => -1.0,
            Side::Plus => 1.0,
        };
        self.khat(Complex64::new(0.0, s) / lambda)
    }
}

/// The four kernels used for the path-equivalence checks.
pub fn builtin_kernels() -> Vec<TransformPair> {
    vec![
        TransformPair::exponential(1.0),
        TransformPair::exponential(2.0),
        TransformPair::t_exponential(),
        TransformPair::truncated_gaussian(),
    ]
}

fn side_of(kind: OpKind) -> Side {
    match kind {
        OpKind::Jminus => Side::Minus,
        OpKind::Jplus => Side::Plus,
    }
}

/// `q(t_i)` by adaptive quadrature of the convolution integral.
pub fn convolve_direct<G: Fn(f64) -> f64>(
    pair: &TransformPair,
    g: G,
    grid: &[f64],
    beta: f64,
) -> Result<Vec<f64>> {
    grid.iter()
        .map(|&t| {
            let f = |y: f64| pair.k(t - y) * g(y);
            let (v, _) = match pair.side {
                Side::Plus => quadrule::gauss_kronrod(f, 0.0, t, &[], 1e-13, 1e-15)?,
                Side::Minus => quadrule::gauss_kronrod(f, t, beta, &[], 1e-13, 1e-15)?,
            };
            Ok(v)
        })
        .collect()
}

pub const ILL_CONDITIONED: f64 = 1e12;
/// Target for `|X L X^{-1} - B| / |B|`; see [`MatrixFunctionPlan::reconstruction_residual`].
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

/// Diagonalisation of a Sinc operator in its weighted inner product.
#[derive(Debug, Clone)]
pub struct MatrixFunctionPlan {
    pub op: DiscreteOperator,
    pub eigen: Eigen,
    pub condition_estimate: f64,
    pub reconstruction_residual: f64,
    sqrt_w: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorResult {
    pub values: Vec<Complex64>,
    pub ill_conditioned: bool,
}

impl MatrixFunctionPlan {
    pub fn new(op: DiscreteOperator) -> Result<Self> {
        if op.scheme != Scheme::Sinc {
            return Err(Error::Precondition(
                "matrix functions need the Sinc scheme; the trapezoid matrix is defective".into(),
            ));
        }
        let b = op.weighted();
        let eigen = linalg::eigen_decompose(&b)?;
        if let Some(l) = eigen.values.iter().find(|l| l.norm() < 1e-12) {
            return Err(Error::SingularEigenvalue(l.norm()));
        }
        // Bounded below by roughly eps * condition; at n = 64 this is ~1e-6
        // for any backward-stable eigensolver, so it is reported, not enforced.
        let reconstruction_residual = eigen.residual(&b);
        if !reconstruction_residual.is_finite() || !eigen.condition.is_finite() {
            return Err(Error::EigenFailure);
        }
        let sqrt_w = op.weights.iter().map(|w| w.sqrt()).collect();
        Ok(MatrixFunctionPlan {
            condition_estimate: eigen.condition,
            reconstruction_residual,
            op,
            eigen,
            sqrt_w,
        })
    }

    pub fn reconstruction_ok(&self) -> bool {
        self.reconstruction_residual < RECONSTRUCTION_TOL
    }

    pub fn ill_conditioned(&self) -> bool {
        self.condition_estimate > ILL_CONDITIONED
    }

    /// `phi(J) v` in grid coordinates.
    pub fn apply<F: Fn(Complex64) -> Complex64>(&self, phi: F, v: &[f64]) -> OperatorResult {
        let x = CVector::from_iterator(
            v.len(),
            v.iter()
                .zip(&self.sqrt_w)
                .map(|(a, s)| Complex64::new(a * s, 0.0)),
        );
        let y = self.eigen.apply_fn(phi, &x);
        OperatorResult {
            values: y.iter().zip(&self.sqrt_w).map(|(a, s)| a / s).collect(),
            ill_conditioned: self.ill_conditioned(),
        }
    }

    fn check_side(&self, pair: &TransformPair) -> Result<()> {
        if side_of(self.op.kind) != pair.side {
            return Err(Error::Precondition(format!(
                "kernel side {:?} does not match operator {:?}",
                pair.side, self.op.kind
            )));
        }
        Ok(())
    }
}

/// `q = khat(+-i / J) g` via the plan.
pub fn convolve_operator<G: Fn(f64) -> f64>(
    pair: &TransformPair,
    g: G,
    plan: &MatrixFunctionPlan,
) -> Result<OperatorResult> {
    plan.check_side(pair)?;
    let gv: Vec<f64> = plan.op.grid.iter().map(|&t| g(t)).collect();
    Ok(plan.apply(|l| pair.symbol(l), &gv))
}

/// `k = (1/J) khat(+-i / J) 1`, the reciprocal applied on the spectrum.
pub fn fourier_invert(pair: &TransformPair, plan: &MatrixFunctionPlan) -> Result<OperatorResult> {
    plan.check_side(pair)?;
    let ones = vec![1.0; plan.op.n()];
    Ok(plan.apply(|l| pair.symbol(l) / l, &ones))
}

/// Weighted relative L2 distance `|u - v| / |v|`.
pub fn rel_l2(u: &[Complex64], v: &[f64], weights: &[f64]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for ((a, b), w) in u.iter().zip(v).zip(weights) {
        num += w * (a - b).norm_sqr();
        den += w * b * b;
    }
    (num / den).sqrt()
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `max_i |(J^n 1)(t_i) - tau_i^n / n!|` with `tau = t` for `J+`, `beta - t` for `J-`.
pub fn monomial_identity(n: u32, op: &DiscreteOperator) -> Result<f64> {
    if n > 6 {
        return Err(Error::InvalidInput(format!("power {n} outside 0..=6")));
    }
    let mut v = vec![1.0; op.n()];
    for _ in 0..n {
        v = op.apply(&v);
    }
    let nf = factorial(n);
    Ok(v.iter()
        .zip(&op.grid)
        .map(|(a, &t)| {
            let tau = match op.kind {
                OpKind::Jplus => t,
                OpKind::Jminus => op.beta - t,
            };
            (a - tau.powi(n as i32) / nf).abs()
        })
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolventCheck {
    pub u: Vec<Complex64>,
    pub error: f64,
}

fn orientation(op: &DiscreteOperator) -> (f64, Vec<f64>) {
    match op.kind {
        OpKind::Jplus => (1.0, op.grid.clone()),
        OpKind::Jminus => (-1.0, op.grid.iter().map(|t| op.beta - t).collect()),
    }
}

/// Solves `(I + s i y J) u = 1` (`s = +1` for `J+`, `-1` for `J-`) and compares
/// with `e^{-s i y tau}`.
pub fn resolvent_exp_identity(y: f64, op: &DiscreteOperator) -> Result<ResolventCheck> {
    if !(y.abs() <= 50.0) {
        return Err(Error::InvalidInput(format!("|y| = {} exceeds 50", y.abs())));
    }
    let (s, tau) = orientation(op);
    let n = op.n();
    let a = CMatrix::identity(n, n) + linalg::to_complex(&op.matrix) * Complex64::new(0.0, s * y);
    let lu = a.lu();
    let u = lu
        .solve(&CVector::from_element(n, Complex64::new(1.0, 0.0)))
        .ok_or(Error::SingularResolvent(y))?;
    if u.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularResolvent(y));
    }
    let u: Vec<Complex64> = u.iter().copied().collect();
    let error = u
        .iter()
        .zip(&tau)
        .map(|(v, &t)| (v - Complex64::new(0.0, -s * y * t).exp()).norm())
        .fold(0.0, f64::max);
    Ok(ResolventCheck { u, error })
}

/// `max |sum_{n <= terms} (-s i y J)^n 1 - u|` against the solved resolvent.
pub fn series_consistency(y: f64, op: &DiscreteOperator, terms: usize) -> Result<f64> {
    if y.abs() > 2.0 {
        return Err(Error::InvalidInput(format!("|y| = {} exceeds 2", y.abs())));
    }
    let (s, _) = orientation(op);
    let solved = resolvent_exp_identity(y, op)?;
    let m = linalg::to_complex(&op.matrix) * Complex64::new(0.0, -s * y);
    let mut term = CVector::from_element(op.n(), Complex64::new(1.0, 0.0));
    let mut sum = term.clone();
    for _ in 0..terms {
        term = &m * term;
        sum += &term;
    }
    Ok(sum
        .iter()
        .zip(&solved.u)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CauchyCheck {
    pub direct: Complex64,
    /// `+-1/(2 pi i) int_R khat(t) / (t - z) dt` over the whole line.
    pub cauchy: Complex64,
    pub residual: f64,
    /// The same integral restricted to the kernel's own half line; diagnostic.
    pub half_line: Complex64,
    pub half_line_residual: f64,
}

/// Cauchy representation of `khat` at `z` in its half plane of analyticity.
pub fn cauchy_rep_check(
    pair: &TransformPair,
    z: Complex64,
    cfg: &QuadConfig,
) -> Result<CauchyCheck> {
    let s = match pair.side {
        Side::Minus => -1.0,
        Side::Plus => 1.0,
    };
    if !(s * z.im > 1e-8) {
        return Err(Error::Precondition(format!(
            "z = {z} is not inside the half plane where the {:?} transform is analytic",
            pair.side
        )));
    }
    let direct = pair.khat(z);
    let f = |t: f64| pair.khat(Complex64::new(t, 0.0)) / (t - z);
    let whole = quadrule::integrate_line_algebraic(f, cfg)?;
    let half = quadrule::integrate_semiinf(|t| f(s * t) * s, cfg)?;
    let c = Complex64::new(0.0, 2.0 * PI);
    let cauchy = whole.value * s / c;
    let half_line = half.value * s / c;
    let rel = |v: Complex64| (v - direct).norm() / direct.norm();
    Ok(CauchyCheck {
        direct,
        cauchy,
        residual: rel(cauchy),
        half_line,
        half_line_residual: rel(half_line),
    })
}
