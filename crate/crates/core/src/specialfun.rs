//! Reference Gamma, Dirichlet eta and zeta.
//!
//! These share no code with the integral representations in [`crate::gfunc`],
//! so agreement between the two is a genuine check.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// Lanczos approximation, g = 607/128, 15 terms.
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_049e-4,
    2.174_396_181_152_126_4e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162_5e-6,
];

/// A value together with a flag saying whether the input was inside the
/// region where the accuracy contract has been validated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Checked<T> {
    pub value: T,
    pub validated: bool,
}

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `ln Gamma(z)` for `Re z >= 1/2`, principal branch up to multiples of `2 pi i`.
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let x = z - 1.0;
    let mut a = Complex64::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + k as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (x + 0.5) * t.ln() - t + a.ln()
}

/// `ln sin(w)` up to multiples of `2 pi i`, without overflow for large `|Im w|`.
fn ln_sin(w: Complex64) -> Complex64 {
    if w.im < 0.0 {
        return ln_sin(w.conj()).conj();
    }
    // sin w = (i/2) e^{-iw} (1 - e^{2iw}), |e^{2iw}| <= 1
    let i = Complex64::i();
    let e2 = (2.0 * i * w).exp();
    (i * 0.5).ln() - i * w + (1.0 - e2).ln()
}

/// `ln Gamma(z)` on the whole plane minus the poles (branch unspecified).
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::PoleError(z.re));
    }
    if z.re >= 0.5 {
        Ok(ln_gamma_right(z))
    } else {
        // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        Ok(PI.ln() - ln_sin(PI * z) - ln_gamma_right(1.0 - z))
    }
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re > 0.0 && z.re <= 20.0 && z.re == z.re.round() {
        // exact factorials
        let n = z.re as u32;
        let v: f64 = (1..n).map(f64::from).product();
        return Ok(Complex64::new(v, 0.0));
    }
    let v = ln_gamma(z)?.exp();
    if z.im == 0.0 {
        Ok(Complex64::new(v.re, 0.0))
    } else {
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EtaSeriesConfig {
    pub terms: usize,
    pub acceleration_order: usize,
}

impl Default for EtaSeriesConfig {
    fn default() -> Self {
        Self {
            // 64/32 leaves ~1e-10 error at |Im z| = 60
            terms: 96,
            acceleration_order: 48,
        }
    }
}

impl EtaSeriesConfig {
    pub fn validate(&self) -> Result<()> {
        if self.acceleration_order < 8 || self.terms < self.acceleration_order {
            return Err(Error::InvalidInput(
                "eta series needs terms >= acceleration_order >= 8".into(),
            ));
        }
        Ok(())
    }
}

/// `n^{-z}` for integer `n >= 1`.
fn npow(n: usize, z: Complex64) -> Complex64 {
    (-z * (n as f64).ln()).exp()
}

/// Sum of `(-1)^k a_k`, `k >= 0`, by the Cohen-Villegas-Zagier weights of order `n`.
fn cvz_alternating<F: Fn(usize) -> Complex64>(a: F, n: usize) -> Complex64 {
    let mut d = (3.0 + 8f64.sqrt()).powi(n as i32);
    d = 0.5 * (d + 1.0 / d);
    let mut b = -1.0;
    let mut c = -d;
    let mut s = Complex64::new(0.0, 0.0);
    for k in 0..n {
        c = b - c;
        s += a(k) * c;
        let kf = k as f64;
        let nf = n as f64;
        b *= (kf + nf) * (kf - nf) / ((kf + 0.5) * (kf + 1.0));
    }
    s / d
}

fn eta_series(z: Complex64, cfg: &EtaSeriesConfig) -> Complex64 {
    let direct = cfg.terms - cfg.acceleration_order;
    let mut head = Complex64::new(0.0, 0.0);
    for m in 1..=direct {
        let term = npow(m, z);
        if m % 2 == 1 {
            head += term;
        } else {
            head -= term;
        }
    }
    // tail: sum_{m > direct} (-1)^{m-1} m^{-z} = (-1)^direct sum_k (-1)^k (direct+1+k)^{-z}
    let tail = cvz_alternating(|k| npow(direct + 1 + k, z), cfg.acceleration_order);
    if direct.is_multiple_of(2) {
        head + tail
    } else {
        head - tail
    }
}

/// Dirichlet eta `sum (-1)^{n-1} n^{-z}`.
///
/// Validated for `0 <= Re z <= 10`, `|Im z| <= 60`; outside that the value is
/// still returned but `validated` is false.
pub fn eta_checked(z: Complex64, cfg: &EtaSeriesConfig) -> Result<Checked<Complex64>> {
    cfg.validate()?;
    let mut v = eta_series(z, cfg);
    if z.im == 0.0 {
        v.im = 0.0;
    }
    let validated = z.re >= 0.0 && z.re <= 10.0 && z.im.abs() <= 60.0;
    Ok(Checked {
        value: v,
        validated,
    })
}

pub fn eta(z: Complex64, cfg: &EtaSeriesConfig) -> Result<Complex64> {
    eta_checked(z, cfg).map(|c| c.value)
}

/// `1 - 2^{1-z}`.
pub fn one_minus_pow2(z: Complex64) -> Complex64 {
    1.0 - ((1.0 - z) * LN_2).exp()
}

/// `zeta(z) = eta(z) / (1 - 2^{1-z})`.
pub fn zeta_reference_checked(z: Complex64, cfg: &EtaSeriesConfig) -> Result<Checked<Complex64>> {
    let f = one_minus_pow2(z);
    if f.norm() < 1e-12 {
        return Err(Error::SingularFactor {
            what: "1 - 2^(1-z)",
            value: f.norm(),
        });
    }
    let e = eta_checked(z, cfg)?;
    Ok(Checked {
        value: e.value / f,
        validated: e.validated && z.re > 0.0,
    })
}

pub fn zeta_reference(z: Complex64) -> Result<Complex64> {
    zeta_reference_checked(z, &EtaSeriesConfig::default()).map(|c| c.value)
}

/// `w(z) = (1 - 2^{1-z}) Gamma(z)`, the factor with `G = w zeta`.
pub fn w_factor(z: Complex64) -> Result<Complex64> {
    Ok(one_minus_pow2(z) * gamma(z)?)
}

/// Relative residual of `pi^{-z/2} Gamma(z/2) zeta(z) = pi^{-(1-z)/2} Gamma((1-z)/2) zeta(1-z)`.
pub fn zeta_functional_residual(z: Complex64) -> Result<f64> {
    let side = |u: Complex64| -> Result<Complex64> {
        Ok((-0.5 * u * PI.ln()).exp() * gamma(0.5 * u)? * zeta_reference(u)?)
    };
    let l = side(z)?;
    let r = side(1.0 - z)?;
    Ok((l - r).norm() / (l.norm() + r.norm() + 1e-300))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    // 30-digit reference values
    #[allow(clippy::type_complexity)]
    const REF: [((f64, f64), (f64, f64), (f64, f64), (f64, f64)); 7] = [
        (
            (0.5, 14.0),
            (-4.053_703_078_037_281_5e-10, -5.773_299_834_553_605e-10),
            (0.012_220_891_770_754_763, -0.252_299_766_652_899_83),
            (0.022_241_142_609_993_59, -0.103_258_123_266_450_06),
        ),
        (
            (0.3, -7.0),
            (2.848_757_995_501_135e-5, -7.728_963_574_508_43e-7),
            (1.494_076_452_958_233_8, 1.296_170_444_227_074_1),
            (1.017_131_498_895_093_7, -0.439_444_006_896_340_6),
        ),
        (
            (2.5, 40.0),
            (-1.593_913_997_194_985_6e-24, -1.321_119_186_283_563_6e-24),
            (1.209_338_674_034_354_2, 0.045_031_618_452_065_58),
            (0.915_584_955_506_402_3, -0.095_058_510_567_124_65),
        ),
        (
            (0.8, 60.0),
            (-7.144_385_917_166_853e-41, -7.037_908_182_712_855e-41),
            (0.982_013_835_973_842, -0.126_912_698_893_261_14),
            (0.476_592_156_217_417_44, 0.133_285_797_407_505_17),
        ),
        (
            (0.5, 60.0),
            (-2.798_647_966_373_748_3e-41, -8.884_724_694_223_934e-42),
            (1.320_753_212_827_399_6, -0.057_982_428_282_174_67),
            (0.541_200_835_146_348_1, 0.227_183_922_368_268_73),
        ),
        (
            (-1.5, 3.0),
            (-0.002_096_038_160_539_319, 0.000_692_225_954_663_543_9),
            (0.275_970_668_282_691, 1.359_493_774_757_277_8),
            (0.201_328_830_542_150_33, 0.097_149_743_015_620_04),
        ),
        (
            (3.0, 0.5),
            (1.702_424_277_118_899_7, 0.853_171_603_816_532_2),
            (0.905_686_044_638_287_6, 0.029_527_961_075_220_51),
            (1.173_928_724_638_746_8, -0.091_730_267_113_479_45),
        ),
    ];

    #[test]
    fn gamma_reference_points() {
        for &(z, g, _, _) in &REF {
            let v = gamma(c(z.0, z.1)).unwrap();
            assert!(
                rel(v, c(g.0, g.1)) < 1e-13,
                "{z:?}: {}",
                rel(v, c(g.0, g.1))
            );
        }
    }

    #[test]
    fn gamma_closed_forms() {
        assert_eq!(gamma(c(1.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert!((gamma(c(0.5, 0.0)).unwrap().re - PI.sqrt()).abs() < 1e-15);
        assert!((gamma(c(5.0, 0.0)).unwrap().re - 24.0).abs() < 1e-13);
        assert!((gamma(c(-0.5, 0.0)).unwrap().re + 2.0 * PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn gamma_poles() {
        for n in 0..5 {
            assert!(matches!(
                gamma(c(-(n as f64), 0.0)),
                Err(Error::PoleError(_))
            ));
        }
    }

    #[test]
    fn gamma_reflection_residual() {
        let z = c(0.3, 7.0);
        let r = gamma(z).unwrap() * gamma(1.0 - z).unwrap() * (PI * z).sin() / PI - 1.0;
        assert!(r.norm() < 1e-12);
    }

    #[test]
    fn gamma_large_imaginary() {
        // |Gamma(1/2 + i t)|^2 = pi / cosh(pi t)
        for t in [10.0, 50.0, 100.0] {
            let g = gamma(c(0.5, t)).unwrap();
            let exact = (PI / (PI * t).cosh()).sqrt();
            assert!((g.norm() - exact).abs() / exact < 1e-13, "t={t}");
        }
    }

    #[test]
    fn eta_reference_points() {
        let cfg = EtaSeriesConfig::default();
        for &(z, _, e, _) in &REF {
            let v = eta_checked(c(z.0, z.1), &cfg).unwrap();
            let err = rel(v.value, c(e.0, e.1));
            if z.0 >= 0.0 {
                assert!(v.validated);
                assert!(err < 1e-12, "{z:?}: {err}");
            } else {
                assert!(!v.validated);
            }
        }
    }

    #[test]
    fn eta_closed_forms() {
        let cfg = EtaSeriesConfig::default();
        assert!((eta(c(1.0, 0.0), &cfg).unwrap().re - LN_2).abs() < 1e-14);
        assert!((eta(c(2.0, 0.0), &cfg).unwrap().re - PI * PI / 12.0).abs() < 1e-14);
        assert!((eta(c(0.0, 0.0), &cfg).unwrap().re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn eta_config_validation() {
        assert!(EtaSeriesConfig {
            terms: 16,
            acceleration_order: 4
        }
        .validate()
        .is_err());
        assert!(EtaSeriesConfig {
            terms: 16,
            acceleration_order: 20
        }
        .validate()
        .is_err());
    }

    #[test]
    fn zeta_reference_points() {
        for &(z, _, _, zz) in &REF {
            if z.0 <= 0.0 {
                continue;
            }
            let v = zeta_reference(c(z.0, z.1)).unwrap();
            assert!(rel(v, c(zz.0, zz.1)) < 1e-11, "{z:?}");
        }
        assert!((zeta_reference(c(2.0, 0.0)).unwrap().re - PI * PI / 6.0).abs() < 1e-13);
    }

    #[test]
    fn zeta_first_zero_and_region_flag() {
        let v = zeta_reference(c(0.5, 14.134_725_141_734_694)).unwrap();
        assert!(v.norm() < 1e-8);
        let far = zeta_reference_checked(c(-2.0, 0.0), &EtaSeriesConfig::default()).unwrap();
        assert!(!far.validated);
        assert!(matches!(
            zeta_reference(c(1.0, 0.0)),
            Err(Error::SingularFactor { .. })
        ));
    }

    #[test]
    fn w_factor_values() {
        assert!((w_factor(c(2.0, 0.0)).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(w_factor(c(1.0, 0.0)).unwrap().norm(), 0.0);
        for i in 1..=9 {
            for j in 0..9 {
                let z = c(i as f64 / 10.0, -40.0 + 10.0 * j as f64);
                assert!(w_factor(z).unwrap().norm() > 0.0);
            }
        }
    }

    #[test]
    fn zeta_functional_equation() {
        for z in [c(0.3, 5.0), c(0.7, -12.0), c(0.5, 30.0), c(0.2, 45.0)] {
            assert!(zeta_functional_residual(z).unwrap() < 1e-10, "{z}");
        }
    }

    #[test]
    fn oracle_consistency_is_bitwise() {
        let cfg = EtaSeriesConfig::default();
        let z = c(0.4, 17.0);
        let e = eta(z, &cfg).unwrap();
        let zr = zeta_reference(z).unwrap();
        assert_eq!(zr, e / one_minus_pow2(z));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn conjugate_symmetry(s in 0.05f64..3.0, t in -60.0f64..60.0) {
                let z = c(s, t);
                let g = gamma(z).unwrap();
                let gc = gamma(z.conj()).unwrap();
                prop_assert!((gc - g.conj()).norm() <= 1e-13 * g.norm());
                let cfg = EtaSeriesConfig::default();
                let e = eta(z, &cfg).unwrap();
                let ec = eta(z.conj(), &cfg).unwrap();
                prop_assert!((ec - e.conj()).norm() <= 1e-13 * e.norm().max(1e-300));
            }

            #[test]
            fn gamma_recurrence(s in 0.1f64..8.0, t in -50.0f64..50.0) {
                let z = c(s, t);
                let lhs = gamma(z + 1.0).unwrap();
                let rhs = z * gamma(z).unwrap();
                prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm());
            }
        }
    }
}
