//! Range numbers `c-/+`, the segment `L(s)` and the four curves built from it.
//!
//! With `kappa-(y) = kappa(sigma, -y)`, `kappa+(y) = kappa(sigma, y)` on `y > 0`:
//!
//! ```text
//! a = -pi int y kappa^2,   b = (int kappa)^2 / 2,   c = a + i b
//! L(s) = -(1 - s) c- + s c+
//! C(s)    = int kappa- (1 - y/(y + L)) + int kappa+ (1 - y/(y - L))
//! C_s(s)  = -int y kappa- (1 - y/(y + L)) + int y kappa+ (1 - y/(y - L))
//! C'(s)   = int kappa- (1 - y/(y - L)) + int kappa+ (1 - y/(y + L))
//! C'_s(s) = -int y kappa- (1 - y/(y - L)) + int y kappa+ (1 - y/(y + L))
//! ```
//!
//! The imaginary parts of `C_s` and `C'_s` are also evaluated in Poisson form,
//! as real integrals with Lorentzian weights centred at `y = -+Re L`.
//!
//! Since `Im L(0) = -b- < 0 < b+ = Im L(1)`, `Im L` vanishes at
//! `s* = b- / (b- + b+)`. The half-plane assertions are reported as observed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gfunc::{self, KernelSide};
use crate::quadrule::{self, QuadConfig};

/// Beyond this `kappa+` underflows to zero.
const PLUS_CUT: f64 = 7.0;
const REL_TOL: f64 = 1e-13;
const ABS_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeNumbers {
    pub sigma: f64,
    pub a_minus: f64,
    pub b_minus: f64,
    pub a_plus: f64,
    pub b_plus: f64,
    pub c_minus: Complex64,
    pub c_plus: Complex64,
}

impl RangeNumbers {
    /// `-c-` strictly in the fourth quadrant and `c+` strictly in the second.
    pub fn quadrants_hold(&self, margin: f64) -> bool {
        self.a_minus < -margin
            && self.b_minus > margin
            && self.a_plus < -margin
            && self.b_plus > margin
    }

    /// Zero of `Im L(s)`.
    pub fn s_star(&self) -> f64 {
        self.b_minus / (self.b_minus + self.b_plus)
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::InvalidInput(format!(
            "sigma = {sigma} outside (0, 1)"
        )));
    }
    Ok(())
}

fn upper(side: KernelSide) -> f64 {
    match side {
        KernelSide::Plus => PLUS_CUT,
        _ => f64::INFINITY,
    }
}

fn kap(sigma: f64, side: KernelSide) -> impl Fn(f64) -> f64 {
    move |y| gfunc::kappa_side(sigma, y, side)
}

fn gk(f: impl Fn(f64) -> f64, b: f64, breaks: &[f64]) -> Result<f64> {
    Ok(quadrule::gauss_kronrod(f, 0.0, b, breaks, REL_TOL, ABS_TOL)?.0)
}

fn gk_complex(f: impl Fn(f64) -> Complex64, b: f64, breaks: &[f64]) -> Result<Complex64> {
    let re = gk(|y| f(y).re, b, breaks)?;
    let im = gk(|y| f(y).im, b, breaks)?;
    Ok(Complex64::new(re, im))
}

/// Adaptive Gauss-Kronrod evaluation of `a-/+` and `b-/+`.
pub fn range_numbers(sigma: f64) -> Result<RangeNumbers> {
    check_sigma(sigma)?;
    let ab = |side| -> Result<(f64, f64)> {
        let k = kap(sigma, side);
        let m1 = gk(
            |y| {
                let v = k(y);
                if v == 0.0 {
                    0.0
                } else {
                    y * v * v
                }
            },
            upper(side),
            &[1.0],
        )?;
        let m0 = gk(&k, upper(side), &[1.0])?;
        Ok((-PI * m1, 0.5 * m0 * m0))
    };
    let (a_minus, b_minus) = ab(KernelSide::Minus)?;
    let (a_plus, b_plus) = ab(KernelSide::Plus)?;
    Ok(RangeNumbers {
        sigma,
        a_minus,
        b_minus,
        a_plus,
        b_plus,
        c_minus: Complex64::new(a_minus, b_minus),
        c_plus: Complex64::new(a_plus, b_plus),
    })
}

pub fn l_segment(rn: &RangeNumbers, s: f64) -> Complex64 {
    -(1.0 - s) * rn.c_minus + s * rn.c_plus
}

/// `int_{R+} kappa_side(sigma, y) / (y - zeta) dy`.
pub fn stieltjes(sigma: f64, zeta: Complex64, side: KernelSide) -> Result<Complex64> {
    let k = kap(sigma, side);
    let mut breaks = vec![1.0];
    if zeta.re > 0.0 {
        let w = zeta.im.abs();
        breaks.extend(
            [zeta.re - 4.0 * w, zeta.re, zeta.re + 4.0 * w]
                .into_iter()
                .filter(|&b| b > 0.0),
        );
    }
    gk_complex(|y| k(y) / (y - zeta), upper(side), &breaks)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PValue {
    /// `int_{R+} G^(+-)(sigma + i t) e^{-+ i zeta t} dt`.
    pub fourier_form: Complex64,
    /// `+-i int_{R+} kappa^(+-)(sigma, y) / (y - zeta) dy`.
    pub cauchy_form: Complex64,
    pub residual: f64,
}

/// `P-(zeta)` (needs `Im zeta < 0`) pairs `G+` with `kappa+`; `P+(zeta)`
/// (needs `Im zeta > 0`) pairs `G-` with `kappa-`.
pub fn p_side(sigma: f64, zeta: Complex64, side: KernelSide, cfg: &QuadConfig) -> Result<PValue> {
    check_sigma(sigma)?;
    if zeta.im.abs() < 1e-8 {
        return Err(Error::OnRealAxis(zeta.im.abs()));
    }
    let (s, partner) = match side {
        KernelSide::Minus => (1.0, KernelSide::Plus),
        KernelSide::Plus => (-1.0, KernelSide::Minus),
        KernelSide::Full => return Err(Error::InvalidInput("P needs a side".into())),
    };
    if !(s * zeta.im < 0.0) {
        return Err(Error::Precondition(format!(
            "zeta = {zeta} outside the {side:?} half plane"
        )));
    }
    let cauchy_form = Complex64::new(0.0, s) * stieltjes(sigma, zeta, partner)?;
    let err = std::cell::RefCell::new(None);
    let four = quadrule::integrate_semiinf(
        |t| {
            if err.borrow().is_some() {
                return Complex64::new(0.0, 0.0);
            }
            let ph = (Complex64::new(0.0, -s) * zeta * t).exp();
            if ph.norm() < 1e-300 {
                return Complex64::new(0.0, 0.0);
            }
            match gfunc::g_side(Complex64::new(sigma, t), partner, cfg) {
                Ok(g) => g.value * ph,
                Err(e) => {
                    *err.borrow_mut() = Some(e);
                    Complex64::new(0.0, 0.0)
                }
            }
        },
        cfg,
    );
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    let fourier_form = four?.value;
    Ok(PValue {
        fourier_form,
        cauchy_form,
        residual: (fourier_form - cauchy_form).norm() / cauchy_form.norm().max(f64::MIN_POSITIVE),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub s: f64,
    pub l: Complex64,
    pub c: Complex64,
    pub c_sigma: Complex64,
    pub c_prime: Complex64,
    pub c_prime_sigma: Complex64,
    pub im_c_sigma_poisson: f64,
    pub im_c_prime_sigma_poisson: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignSummary {
    pub c0_upper: bool,
    pub c1_lower: bool,
    pub c_prime0_lower: bool,
    pub c_prime1_upper: bool,
    pub c_sigma_all_lower: bool,
    pub c_prime_sigma_all_upper: bool,
}

impl SignSummary {
    pub fn all(&self) -> bool {
        self.c0_upper
            && self.c1_lower
            && self.c_prime0_lower
            && self.c_prime1_upper
            && self.c_sigma_all_lower
            && self.c_prime_sigma_all_upper
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub sigma: f64,
    pub t_context: Option<f64>,
    pub range: RangeNumbers,
    pub s_star: f64,
    pub samples: Vec<CurveSample>,
    pub sign_summary: SignSummary,
    /// `Im L(s) > 0` on every sampled `s`.
    pub im_l_positive_all: bool,
    pub min_abs_c: f64,
    pub argmin_c: f64,
    pub min_abs_c_prime: f64,
    pub argmin_c_prime: f64,
    /// `max_s` of the Poisson/direct mismatch over both primed and unprimed curves.
    pub max_poisson_mismatch: f64,
}

/// `n` uniform points on `[0, 1]`.
pub fn s_grid(n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|k| k as f64 / (n - 1) as f64).collect()
}

/// Breakpoints around the near-pole of `1 / (y + eps L)` on `y > 0`.
fn pole_breaks(l: Complex64, eps: f64) -> Vec<f64> {
    let y0 = -eps * l.re;
    let w = l.im.abs();
    let mut b = vec![1.0];
    if y0 > 0.0 {
        for d in [-16.0, -4.0, -1.0, 0.0, 1.0, 4.0, 16.0] {
            let v = y0 + d * w;
            if v > 0.0 {
                b.push(v);
            }
        }
    }
    b
}

fn sample(sigma: f64, rn: &RangeNumbers, s: f64) -> Result<CurveSample> {
    let l = l_segment(rn, s);
    if l.im.abs() < 1e-10 {
        return Err(Error::DenominatorNearRealAxis { s, im: l.im.abs() });
    }
    // int y^m kappa_side (1 - y / (y + eps L)) dy, integrand as written
    let direct = |side: KernelSide, eps: f64, m: i32| -> Result<Complex64> {
        let k = kap(sigma, side);
        gk_complex(
            |y| {
                let v = k(y);
                if v == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                y.powi(m) * v * (1.0 - y / (y + eps * l))
            },
            upper(side),
            &pole_breaks(l, eps),
        )
    };
    // int y^2 kappa_side L_i / ((y + eps L_r)^2 + L_i^2) dy
    let poisson = |side: KernelSide, eps: f64| -> Result<f64> {
        let k = kap(sigma, side);
        gk(
            |y| {
                let d = y + eps * l.re;
                y * y * k(y) * l.im / (d * d + l.im * l.im)
            },
            upper(side),
            &pole_breaks(l, eps),
        )
    };
    use KernelSide::{Minus, Plus};
    let c = direct(Minus, 1.0, 0)? + direct(Plus, -1.0, 0)?;
    let c_sigma = -direct(Minus, 1.0, 1)? + direct(Plus, -1.0, 1)?;
    let c_prime = direct(Minus, -1.0, 0)? + direct(Plus, 1.0, 0)?;
    let c_prime_sigma = -direct(Minus, -1.0, 1)? + direct(Plus, 1.0, 1)?;
    let im_c_sigma_poisson = -poisson(Minus, 1.0)? - poisson(Plus, -1.0)?;
    let im_c_prime_sigma_poisson = poisson(Minus, -1.0)? + poisson(Plus, 1.0)?;
    Ok(CurveSample {
        s,
        l,
        c,
        c_sigma,
        c_prime,
        c_prime_sigma,
        im_c_sigma_poisson,
        im_c_prime_sigma_poisson,
    })
}

fn argmin(samples: &[CurveSample], f: impl Fn(&CurveSample) -> f64) -> (f64, f64) {
    samples
        .iter()
        .map(|p| (f(p), p.s))
        .fold(
            (f64::INFINITY, f64::NAN),
            |a, b| if b.0 < a.0 { b } else { a },
        )
}

pub fn curve_eval(
    sigma: f64,
    s_values: &[f64],
    t_context: Option<f64>,
    exec: Exec,
) -> Result<CurveReport> {
    check_sigma(sigma)?;
    if s_values.is_empty() || s_values.iter().any(|s| !(0.0..=1.0).contains(s)) {
        return Err(Error::InvalidInput("s values must lie in [0, 1]".into()));
    }
    let rn = range_numbers(sigma)?;
    let samples = exec
        .map(s_values, |&s| sample(sigma, &rn, s))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let first = samples.first().unwrap();
    let last = samples.last().unwrap();
    let sign_summary = SignSummary {
        c0_upper: first.c.im > 0.0,
        c1_lower: last.c.im < 0.0,
        c_prime0_lower: first.c_prime.im < 0.0,
        c_prime1_upper: last.c_prime.im > 0.0,
        c_sigma_all_lower: samples.iter().all(|p| p.c_sigma.im < 0.0),
        c_prime_sigma_all_upper: samples.iter().all(|p| p.c_prime_sigma.im > 0.0),
    };
    let (min_abs_c, argmin_c) = argmin(&samples, |p| p.c.norm());
    let (min_abs_c_prime, argmin_c_prime) = argmin(&samples, |p| p.c_prime.norm());
    let max_poisson_mismatch = samples
        .iter()
        .map(|p| {
            (p.c_sigma.im - p.im_c_sigma_poisson)
                .abs()
                .max((p.c_prime_sigma.im - p.im_c_prime_sigma_poisson).abs())
        })
        .fold(0.0, f64::max);
    Ok(CurveReport {
        sigma,
        t_context,
        s_star: rn.s_star(),
        range: rn,
        im_l_positive_all: samples.iter().all(|p| p.l.im > 0.0),
        samples,
        sign_summary,
        min_abs_c,
        argmin_c,
        min_abs_c_prime,
        argmin_c_prime,
        max_poisson_mismatch,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub reports: Vec<CurveReport>,
    pub min_abs_im_c_sigma: f64,
    pub min_im_c_prime_sigma: f64,
    /// `min |Im C_sigma| > 0` over all samples.
    pub c_sigma_nonvanishing: bool,
    /// `min Im C'_sigma > 0` over all samples.
    pub c_prime_sigma_positive: bool,
}

pub fn sigma_sweep(
    t_context: Option<f64>,
    sigmas: &[f64],
    s_values: &[f64],
    exec: Exec,
) -> Result<SweepReport> {
    let reports = sigmas
        .iter()
        .map(|&sg| curve_eval(sg, s_values, t_context, exec))
        .collect::<Result<Vec<_>>>()?;
    let all = || reports.iter().flat_map(|r| r.samples.iter());
    let min_abs_im_c_sigma = all()
        .map(|p| p.c_sigma.im.abs())
        .fold(f64::INFINITY, f64::min);
    let min_im_c_prime_sigma = all()
        .map(|p| p.c_prime_sigma.im)
        .fold(f64::INFINITY, f64::min);
    Ok(SweepReport {
        c_sigma_nonvanishing: min_abs_im_c_sigma > 0.0,
        c_prime_sigma_positive: min_im_c_prime_sigma > 0.0,
        min_abs_im_c_sigma,
        min_im_c_prime_sigma,
        reports,
    })
}

/// `{0.1, 0.15, ..., 0.9}`.
pub fn sigma_grid_17() -> Vec<f64> {
    (0..17).map(|k| 0.1 + 0.05 * k as f64).collect()
}

/// `{0.1, 0.2, ..., 0.9}`.
pub fn sigma_grid_9() -> Vec<f64> {
    (1..=9).map(|k| k as f64 / 10.0).collect()
}
