//! The G-function `G(z) = int_0^inf xi^{z-1} / (e^xi + 1) dxi = Gamma(z) eta(z)`,
//! its kernels and its half-line pieces.
//!
//! Along `Re z = sigma` the value is of size `exp(-pi |t| / 2)` while the
//! integrand on the real axis is of size one, so a real-axis quadrature loses
//! everything to cancellation. Both evaluation routes therefore move the path
//! of integration to angle `phi = sign(t) (pi/2 - eps)`, `eps = min(pi/2, C/|t|)`,
//! which pulls the factor `exp(-|t| phi)` out analytically. The integrand has
//! poles at `xi = i pi (2k+1)`, i.e. at `Im y = +-pi/2` in `y = ln xi`, so the
//! path stays a distance of order `eps` from the nearest pole.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::quadrule::{self, QuadConfig, QuadResult};
use crate::specialfun;

/// `C` in `eps = C / |t|`.
const SHIFT_C: f64 = 4.0;
/// The y-line remainder decays like `e^{(1+sigma) y}`; it is cut at `-LEFT_CUT/(1+sigma)`.
const LEFT_CUT: f64 = 40.0;
/// Right truncation of the positive half-line: `exp(-exp(y)) < e^{-60}` beyond.
const RIGHT_CUT: f64 = 4.094_344_562_222_1; // ln 60

/// A point of the critical strip `0 < sigma < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripPoint {
    pub sigma: f64,
    pub t: f64,
}

impl StripPoint {
    pub fn new(sigma: f64, t: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma < 1.0) || !t.is_finite() {
            return Err(Error::InvalidInput(format!(
                "({sigma}, {t}) is not in the critical strip"
            )));
        }
        Ok(Self { sigma, t })
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }

    pub fn conj(&self) -> Self {
        Self {
            sigma: self.sigma,
            t: -self.t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelSide {
    Minus,
    Plus,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Rotated ray in the original variable `xi`.
    Direct,
    /// Shifted line in `y = ln xi`.
    #[default]
    Fourier,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GValue {
    pub value: Complex64,
    pub error: f64,
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// `kappa(sigma, y) = e^{sigma y} / (1 + exp(e^y))`; exactly 0 once `exp(e^y)` leaves the exponent range.
pub fn kappa(sigma: f64, y: f64) -> f64 {
    let ey = y.exp();
    if ey > 800.0 {
        return 0.0;
    }
    (sigma * y - softplus(ey)).exp()
}

/// `kappa^-(sigma, y) = kappa(sigma, -y)` and `kappa^+ = kappa` on `y >= 0`, zero for `y < 0`.
pub fn kappa_side(sigma: f64, y: f64, side: KernelSide) -> f64 {
    match side {
        KernelSide::Full => kappa(sigma, y),
        _ if y < 0.0 => 0.0,
        KernelSide::Minus => kappa(sigma, -y),
        KernelSide::Plus => kappa(sigma, y),
    }
}

/// `1 / (1 + e^w)` for complex `w`, overflow-safe.
fn fermi(w: Complex64) -> Complex64 {
    if w.re > 0.0 {
        if w.re > 745.0 {
            return Complex64::new(0.0, 0.0);
        }
        let e = (-w).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + w.exp())
    }
}

fn check_z(z: Complex64) -> Result<()> {
    if !(z.re > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidInput(format!(
            "Re z must be positive, got z = {z}"
        )));
    }
    Ok(())
}

fn check_strip(z: Complex64) -> Result<()> {
    StripPoint::new(z.re, z.im).map(|_| ())
}

/// Path angle and its distance `eps` from `pi/2`.
fn path_angle(t: f64) -> (f64, f64) {
    let at = t.abs();
    if at * FRAC_PI_2 <= SHIFT_C {
        (0.0, FRAC_PI_2)
    } else {
        let eps = SHIFT_C / at;
        (t.signum() * (FRAC_PI_2 - eps), eps)
    }
}

/// Taylor coefficients of `1/(1 + e^x)` at 0, from `f' = f^2 - f`.
fn fermi_taylor() -> &'static [f64] {
    static COEF: OnceLock<Vec<f64>> = OnceLock::new();
    COEF.get_or_init(|| {
        let n = 64;
        let mut a = vec![0.0; n];
        a[0] = 0.5;
        for k in 0..n - 1 {
            let conv: f64 = (0..=k).map(|j| a[j] * a[k - j]).sum();
            a[k + 1] = (conv - a[k]) / (k as f64 + 1.0);
        }
        a
    })
}

/// `int_0^inf m(xi) xi^{z-1} / (e^xi + 1) dxi` along `xi = r e^{i phi}`,
/// with `m = 1` or `m = ln xi`.
fn direct_ray(z: Complex64, log_moment: bool, cfg: &QuadConfig) -> Result<GValue> {
    let (phi, _) = path_angle(z.im);
    let rot = Complex64::from_polar(1.0, phi);
    let iphi = Complex64::new(0.0, phi);
    // r in (0, 1]: termwise integration of the Taylor series (radius pi)
    let mut series = Complex64::new(0.0, 0.0);
    let mut rk = Complex64::new(1.0, 0.0);
    for (k, &a) in fermi_taylor().iter().enumerate() {
        if a != 0.0 {
            let zk = z + k as f64;
            let term = if log_moment {
                iphi / zk - 1.0 / (zk * zk)
            } else {
                1.0 / zk
            };
            series += a * rk * term;
        }
        rk *= rot;
    }
    // r in [1, inf)
    let zm1 = z - 1.0;
    let tail = quadrule::integrate_semiinf(
        |x| {
            let r = 1.0 + x;
            let lr = r.ln();
            let v = (zm1 * lr).exp() * fermi(rot * r);
            if log_moment {
                v * (lr + iphi)
            } else {
                v
            }
        },
        cfg,
    )?;
    let front = (iphi * z).exp();
    Ok(GValue {
        value: front * (series + tail.value),
        error: front.norm() * tail.error,
    })
}

/// `pi / sin(pi z)` without overflow for large `|Im z|`.
fn pi_over_sin(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return pi_over_sin(z.conj()).conj();
    }
    // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z})
    let i = Complex64::i();
    let q = (i * PI * z).exp();
    -2.0 * i * PI * q / (1.0 - q * q)
}

/// `int_R e^{zy} / (1 + e^y)^3 dy = B(z, 3 - z)` and its `z`-derivative, `0 < Re z < 3`.
fn beta3(z: Complex64) -> (Complex64, Complex64) {
    if z.im == 0.0 && (z.re == 1.0 || z.re == 2.0) {
        // removable singularities: B(1,2) = B(2,1) = 1/2, B' = B (psi(z) - psi(3-z)) = -+1/2
        let d = if z.re == 1.0 { -0.5 } else { 0.5 };
        return (Complex64::new(0.5, 0.0), Complex64::new(d, 0.0));
    }
    let p = (1.0 - z) * (2.0 - z) * 0.5;
    let b = p * pi_over_sin(z);
    // d/dz ln B = -1/(1-z) - 1/(2-z) - pi cot(pi z)
    let cot = pi_cot(z);
    let dlog = -1.0 / (1.0 - z) - 1.0 / (2.0 - z) - cot;
    (b, b * dlog)
}

/// `pi cot(pi z)` without overflow.
fn pi_cot(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return pi_cot(z.conj()).conj();
    }
    let i = Complex64::i();
    let q2 = (2.0 * i * PI * z).exp();
    i * PI * (1.0 + q2) / (q2 - 1.0)
}

/// `int_R m(y) e^{zy} / (1 + exp(e^y)) dy` along `Im y = phi`, with `m = 1` or `m = y`.
///
/// The slowly decaying left tail is removed by subtracting
/// `e^{zy} / (2 (1 + e^y)^3)`, whose integral is a Beta function; the
/// remainder decays like `e^{(1+sigma) y}` on the left and `e^{(sigma-3) y}`
/// on the right. Valid for `0 < Re z < 3`.
fn fourier_line(z: Complex64, moment: bool, cfg: &QuadConfig) -> Result<GValue> {
    if z.re >= 3.0 {
        return Err(Error::InvalidInput("the y-line form needs Re z < 3".into()));
    }
    let (phi, eps) = path_angle(z.im);
    let rot = Complex64::from_polar(1.0, phi);
    let iphi = Complex64::new(0.0, phi);
    let lo = -LEFT_CUT.min(cfg.fourier_truncation_l) / (1.0 + z.re);
    let hi = ((60.0 / phi.cos()).ln()).max(40.0 / (3.0 - z.re));
    let h0 = 0.5 * eps.min(1.0);
    let base = ((hi - lo) / h0).ceil() as usize;
    let res = quadrule::integrate_uniform(
        |y| {
            let w = rot * y.exp();
            let v = (z * y).exp() * (fermi(w) - 0.5 / ((1.0 + w) * (1.0 + w) * (1.0 + w)));
            if moment {
                v * (y + iphi)
            } else {
                v
            }
        },
        lo,
        hi,
        base,
        cfg,
    )?;
    let (b, db) = beta3(z);
    let closed = 0.5 * if moment { db } else { b };
    // the integrand above carried e^{z y}; the path point is y + i phi
    let front = (iphi * z).exp();
    Ok(GValue {
        value: front * res.value + closed,
        error: front.norm() * res.error,
    })
}

/// `G(z)` for `Re z > 0`.
pub fn g(z: Complex64, method: Method, cfg: &QuadConfig) -> Result<GValue> {
    check_z(z)?;
    let mut v = match method {
        Method::Direct => direct_ray(z, false, cfg)?,
        Method::Fourier => fourier_line(z, false, cfg)?,
    };
    if z.im == 0.0 {
        v.value.im = 0.0;
    }
    Ok(v)
}

/// `G(z)` along with the path details used for it.
pub fn g_point(p: StripPoint, cfg: &QuadConfig) -> Result<Complex64> {
    g(p.z(), Method::Fourier, cfg).map(|v| v.value)
}

/// Positive half-line piece `int_0^inf m(y) kappa(sigma,y) e^{i t y} dy` on `[0, ln 60]`.
fn plus_piece(z: Complex64, moment: bool, cfg: &QuadConfig) -> Result<QuadResult> {
    let (sigma, t) = (z.re, z.im);
    quadrule::integrate_interval(
        |y| {
            let v = Complex64::from_polar(kappa(sigma, y), t * y);
            if moment {
                v * y
            } else {
                v
            }
        },
        0.0,
        RIGHT_CUT,
        cfg,
    )
}

/// Negative half-line piece `int_0^inf m(u) kappa^-(sigma,u) e^{-i t u} du`
/// along the ray `u = r e^{-i arg z}`, on which `e^{-z u}` is real and decaying.
fn minus_piece(z: Complex64, moment: bool, cfg: &QuadConfig) -> Result<Complex64> {
    let theta = z.arg();
    let dir = Complex64::from_polar(1.0, -theta);
    let mz = z.norm();
    let r = quadrule::integrate_semiinf(
        |r| {
            let u = dir * r;
            let v = (-mz * r).exp() * fermi((-u).exp());
            if moment {
                -v * u
            } else {
                v
            }
        },
        cfg,
    )?;
    Ok(dir * r.value)
}

/// `G^-` or `G^+` (or the full `G` for `KernelSide::Full`).
pub fn g_side(z: Complex64, side: KernelSide, cfg: &QuadConfig) -> Result<GValue> {
    check_strip(z)?;
    let mut v = match side {
        KernelSide::Full => return g(z, Method::Fourier, cfg),
        KernelSide::Minus => GValue {
            value: minus_piece(z, false, cfg)?,
            error: 0.0,
        },
        KernelSide::Plus => {
            let r = plus_piece(z, false, cfg)?;
            GValue {
                value: r.value,
                error: r.error,
            }
        }
    };
    if z.im == 0.0 {
        v.value.im = 0.0;
    }
    Ok(v)
}

/// `d/dsigma` of `G`, `G^-` or `G^+` by differentiating under the integral.
pub fn g_sigma(z: Complex64, side: KernelSide, cfg: &QuadConfig) -> Result<GValue> {
    check_z(z)?;
    let mut v = match side {
        KernelSide::Full => fourier_line(z, true, cfg)?,
        KernelSide::Minus => {
            check_strip(z)?;
            GValue {
                value: minus_piece(z, true, cfg)?,
                error: 0.0,
            }
        }
        KernelSide::Plus => {
            check_strip(z)?;
            let r = plus_piece(z, true, cfg)?;
            GValue {
                value: r.value,
                error: r.error,
            }
        }
    };
    if z.im == 0.0 {
        v.value.im = 0.0;
    }
    Ok(v)
}

/// `G_sigma` by a chosen method (full kernel only).
pub fn g_sigma_method(z: Complex64, method: Method, cfg: &QuadConfig) -> Result<GValue> {
    check_z(z)?;
    match method {
        Method::Direct => direct_ray(z, true, cfg),
        Method::Fourier => fourier_line(z, true, cfg),
    }
}

/// Evaluate `G` on many points, preserving order.
pub fn g_grid(
    points: &[Complex64],
    method: Method,
    cfg: &QuadConfig,
    exec: Exec,
) -> Vec<Result<GValue>> {
    exec.map(points, |&z| g(z, method, cfg))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalEquation {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

/// Both sides of
/// `pi^{-z/2} Gamma(1 - z/2) G(z) / (2 - 2^z) = pi^{-(1-z)/2} Gamma(1 - (1-z)/2) G(1-z) / (2 - 2^{1-z})`.
pub fn functional_equation(z: Complex64, cfg: &QuadConfig) -> Result<FunctionalEquation> {
    check_strip(z)?;
    let side = |u: Complex64| -> Result<Complex64> {
        let den = 2.0 - (u * std::f64::consts::LN_2).exp();
        if den.norm() < 1e-12 {
            return Err(Error::SingularFactor {
                what: "2 - 2^z",
                value: den.norm(),
            });
        }
        let gv = g(u, Method::Fourier, cfg)?.value;
        Ok((-0.5 * u * PI.ln()).exp() * specialfun::gamma(1.0 - 0.5 * u)? * gv / den)
    };
    let lhs = side(z)?;
    let rhs = side(1.0 - z)?;
    Ok(FunctionalEquation {
        lhs,
        rhs,
        residual: (lhs - rhs).norm() / (lhs.norm() + rhs.norm() + 1e-300),
    })
}

pub fn functional_equation_residual(z: Complex64, cfg: &QuadConfig) -> Result<f64> {
    functional_equation(z, cfg).map(|f| f.residual)
}

/// Least-squares slope of `ys` against `ts`.
pub fn fit_slope(ts: &[f64], ys: &[f64]) -> f64 {
    let n = ts.len() as f64;
    let mt = ts.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = ts.iter().zip(ys).map(|(t, y)| (t - mt) * (y - my)).sum();
    let den: f64 = ts.iter().map(|t| (t - mt) * (t - mt)).sum();
    num / den
}

/// Slope of `ln|G(sigma + i t)|` over `n` equispaced `t` in `[t_lo, t_hi]`.
pub fn decay_slope(sigma: f64, t_lo: f64, t_hi: f64, n: usize, cfg: &QuadConfig) -> Result<f64> {
    StripPoint::new(sigma, t_lo)?;
    if !(10.0 <= t_lo && t_lo < t_hi && t_hi <= 60.0) || n < 2 {
        return Err(Error::InvalidInput(
            "decay_slope needs 10 <= t_lo < t_hi <= 60 and n >= 2".into(),
        ));
    }
    let ts: Vec<f64> = (0..n)
        .map(|i| t_lo + (t_hi - t_lo) * i as f64 / (n - 1) as f64)
        .collect();
    let vals = Exec::default().map(&ts, |&t| g(Complex64::new(sigma, t), Method::Fourier, cfg));
    let mut ys = Vec::with_capacity(n);
    for v in vals {
        ys.push(v?.value.norm().ln());
    }
    Ok(fit_slope(&ts, &ys))
}

/// `int_0^inf kappa^side(sigma,y)^2 e^{eps y} dy`; converges for `eps < 2 sigma` on the minus side.
pub fn kernel_weighted_norm(
    sigma: f64,
    eps: f64,
    side: KernelSide,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    StripPoint::new(sigma, 0.0)?;
    if side == KernelSide::Full {
        return Err(Error::InvalidInput("kernel norm is per side".into()));
    }
    quadrule::integrate_semiinf(
        |y| {
            let k = kappa_side(sigma, y, side);
            if k == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            Complex64::new(k * k * (eps * y).exp(), 0.0)
        },
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, LN_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    #[test]
    fn kappa_values() {
        assert!((kappa(0.3, 0.0) - 1.0 / (1.0 + E)).abs() < 1e-16);
        assert!((kappa(0.5, 1.0) - 0.102_061_068_840_810_95).abs() < 1e-16);
        assert_eq!(kappa(0.5, 50.0), 0.0);
        assert!((kappa_side(0.5, 1.0, KernelSide::Minus) - 0.248_103_502_887_343_93).abs() < 1e-16);
        for side in [KernelSide::Minus, KernelSide::Plus] {
            assert_eq!(kappa_side(0.5, -3.0, side), 0.0);
        }
        assert!((kappa(0.3, -2.0) - kappa_side(0.3, 2.0, KernelSide::Minus)).abs() < 1e-15);
    }

    #[test]
    fn fermi_taylor_coefficients() {
        let a = fermi_taylor();
        assert_eq!(a[0], 0.5);
        assert!((a[1] + 0.25).abs() < 1e-17);
        assert!(a[2].abs() < 1e-17);
        assert!((a[3] - 1.0 / 48.0).abs() < 1e-17);
        assert!((a[5] + 1.0 / 480.0).abs() < 1e-17);
    }

    #[test]
    fn closed_forms_both_methods() {
        for m in [Method::Direct, Method::Fourier] {
            let g1 = g(c(1.0, 0.0), m, &cfg()).unwrap().value;
            let g2 = g(c(2.0, 0.0), m, &cfg()).unwrap().value;
            assert!((g1.re - LN_2).abs() < 1e-13, "{m:?} {g1}");
            assert!((g2.re - PI * PI / 12.0).abs() < 1e-13, "{m:?} {g2}");
        }
    }

    // Gamma(z) eta(z) at 30 digits
    const REF_G: [((f64, f64), (f64, f64)); 5] = [
        (
            (0.5, 14.0),
            (-1.506_142_067_662_568_9e-10, 9.521_934_682_307_519e-11),
        ),
        (
            (0.3, -7.0),
            (4.356_442_782_752_598_6e-5, 3.576_999_291_699_686e-5),
        ),
        (
            (0.8, 60.0),
            (-7.909_085_742_225_572e-41, -6.004_609_913_051_039e-41),
        ),
        (
            (0.5, 60.0),
            (-3.747_839_084_399_967e-41, -1.011_180_463_501e-41),
        ),
        ((0.3 + 0.0, 0.0), (f64::NAN, f64::NAN)),
    ];

    #[test]
    fn reference_values_both_methods() {
        for &(z, gv) in REF_G.iter().take(4) {
            let exact = c(gv.0, gv.1);
            for m in [Method::Direct, Method::Fourier] {
                let v = g(c(z.0, z.1), m, &cfg()).unwrap().value;
                let rel = (v - exact).norm() / exact.norm();
                assert!(rel < 1e-10, "{z:?} {m:?}: {rel}");
            }
        }
    }

    #[test]
    fn first_zero_is_small() {
        let v = g(c(0.5, 14.134_725_141_734_694), Method::Fourier, &cfg()).unwrap();
        assert!(v.value.norm() < 1e-7);
        // relative to the local scale |Gamma| ~ 5.7e-10 it is at roundoff level
        assert!(v.value.norm() < 1e-8 * 5.7e-10);
    }

    #[test]
    fn quadrule_line_matches_g_at_half() {
        let direct = quadrule::integrate_line(|y| c(kappa(0.5, y), 0.0), &cfg()).unwrap();
        let other = g(c(0.5, 0.0), Method::Direct, &cfg()).unwrap().value;
        assert!((direct.value - other).norm() < 1e-10);
    }

    #[test]
    fn split_identity() {
        for z in [c(0.5, 5.0), c(0.3, -12.0), c(0.8, 40.0), c(0.2, 0.0)] {
            let full = g(z, Method::Fourier, &cfg()).unwrap().value;
            let m = g_side(z, KernelSide::Minus, &cfg()).unwrap().value;
            let p = g_side(z, KernelSide::Plus, &cfg()).unwrap().value;
            assert!(
                (full - m - p).norm() < 1e-12,
                "{z}: {}",
                (full - m - p).norm()
            );
        }
    }

    #[test]
    fn sides_real_positive_at_t_zero() {
        for side in [KernelSide::Minus, KernelSide::Plus] {
            let v = g_side(c(0.5, 0.0), side, &cfg()).unwrap().value;
            assert!(v.re > 0.0 && v.im == 0.0);
        }
    }

    #[test]
    fn sides_conjugate_relation() {
        for side in [KernelSide::Minus, KernelSide::Plus] {
            let a = g_side(c(0.4, 3.0), side, &cfg()).unwrap().value;
            let b = g_side(c(0.4, -3.0), side, &cfg()).unwrap().value;
            assert!((b - a.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn g_sigma_matches_finite_difference() {
        let h = 1e-5;
        for z in [c(0.5, 2.0), c(0.3, 17.0)] {
            let an = g_sigma(z, KernelSide::Full, &cfg()).unwrap().value;
            let fd = (g(z + h, Method::Fourier, &cfg()).unwrap().value
                - g(z - h, Method::Fourier, &cfg()).unwrap().value)
                / (2.0 * h);
            assert!((an - fd).norm() / an.norm() < 1e-6, "{z}");
            let dir = g_sigma_method(z, Method::Direct, &cfg()).unwrap().value;
            assert!((an - dir).norm() / an.norm() < 1e-10, "{z}");
        }
    }

    #[test]
    fn g_sigma_sides() {
        let z = c(0.3, 4.0);
        let full = g_sigma(z, KernelSide::Full, &cfg()).unwrap().value;
        let m = g_sigma(z, KernelSide::Minus, &cfg()).unwrap().value;
        let p = g_sigma(z, KernelSide::Plus, &cfg()).unwrap().value;
        assert!((full - m - p).norm() < 1e-10);
        let h = 1e-5;
        for side in [KernelSide::Minus, KernelSide::Plus] {
            let an = g_sigma(z, side, &cfg()).unwrap().value;
            let fd = (g_side(z + h, side, &cfg()).unwrap().value
                - g_side(z - h, side, &cfg()).unwrap().value)
                / (2.0 * h);
            assert!((an - fd).norm() / an.norm() < 1e-6, "{side:?}");
        }
        let r = g_sigma(c(0.7, 0.0), KernelSide::Full, &cfg())
            .unwrap()
            .value;
        assert!(r.im.abs() < 1e-14);
    }

    #[test]
    fn g_sigma_at_first_zero_matches_oracle() {
        // |G'(rho_1)| = 1.0748007e-9
        let v = g_sigma(c(0.5, 14.134_725_141_734_694), KernelSide::Full, &cfg()).unwrap();
        assert!((v.value.norm() - 1.074_800_7e-9).abs() < 1e-15);
    }

    #[test]
    fn functional_equation_points() {
        for z in [c(0.3, 5.0), c(0.5, 10.0), c(0.5, 0.0)] {
            let fe = functional_equation(z, &cfg()).unwrap();
            assert!(fe.residual < 1e-9, "{z}: {}", fe.residual);
        }
        let a = functional_equation(c(0.5, 10.0), &cfg()).unwrap();
        let b = functional_equation(c(0.5, -10.0), &cfg()).unwrap();
        assert!((a.lhs.conj() - b.lhs).norm() < 1e-12 * a.lhs.norm());
        let r = functional_equation(c(0.5, 0.0), &cfg()).unwrap();
        assert!(r.lhs.im == 0.0 && r.rhs.im == 0.0);
    }

    #[test]
    fn g_sigma_methods_agree_at_integers() {
        for x in [1.0, 2.0] {
            let f = g_sigma_method(c(x, 0.0), Method::Fourier, &cfg())
                .unwrap()
                .value;
            let d = g_sigma_method(c(x, 0.0), Method::Direct, &cfg())
                .unwrap()
                .value;
            assert!((f - d).norm() < 1e-12, "{x}: {f} {d}");
        }
    }

    #[test]
    fn slope_calibration() {
        let ts: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let ys: Vec<f64> = ts.iter().map(|t| -t).collect();
        assert_eq!(fit_slope(&ts, &ys), -1.0);
    }

    #[test]
    fn strip_validation() {
        assert!(StripPoint::new(0.0, 1.0).is_err());
        assert!(StripPoint::new(1.0, 1.0).is_err());
        assert!(g_side(c(1.5, 1.0), KernelSide::Minus, &cfg()).is_err());
        assert!(g(c(-0.5, 1.0), Method::Fourier, &cfg()).is_err());
    }

    #[test]
    fn kernel_membership_converges() {
        for sigma in [0.2, 0.5, 0.9] {
            for side in [KernelSide::Minus, KernelSide::Plus] {
                let r = kernel_weighted_norm(sigma, sigma / 2.0, side, &cfg()).unwrap();
                assert!(r.value.re.is_finite() && r.value.re > 0.0);
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]
            #[test]
            fn schwarz_reflection(s in 0.05f64..0.95, t in 0.0f64..50.0) {
                let a = g(c(s, t), Method::Fourier, &cfg()).unwrap().value;
                let b = g(c(s, -t), Method::Fourier, &cfg()).unwrap().value;
                prop_assert!((b - a.conj()).norm() <= 1e-12 * a.norm().max(1e-300));
            }

            #[test]
            fn methods_agree_and_match_oracle(s in 0.1f64..0.9, t in -45.0f64..45.0) {
                let z = c(s, t);
                let f = g(z, Method::Fourier, &cfg()).unwrap().value;
                let d = g(z, Method::Direct, &cfg()).unwrap().value;
                let o = specialfun::gamma(z).unwrap() * specialfun::eta(z, &Default::default()).unwrap();
                // near a zero of eta the relative error is measured against |Gamma|
                let scale = o.norm().max(1e-3 * specialfun::gamma(z).unwrap().norm());
                prop_assert!((f - d).norm() <= 1e-10 * scale, "methods {}", (f - d).norm() / scale);
                prop_assert!((f - o).norm() <= 1e-10 * scale, "oracle {}", (f - o).norm() / scale);
            }
        }
    }
}
