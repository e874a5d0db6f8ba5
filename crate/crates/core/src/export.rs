//! CSV writers for curves, field-of-values boundaries and zero lists.
//!
//! Numbers use 17 significant digits in scientific notation, `,` separators
//! and LF line endings, so equal inputs give equal bytes.

use csv::{Terminator, WriterBuilder};

use crate::curves::CurveReport;
use crate::error::{Error, Result};
use crate::intops::FovBoundary;
use crate::zerofind::ZeroRecord;

/// `x` with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_rows(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<String> {
    let mut w = WriterBuilder::new()
        .terminator(Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidInput(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
}

pub const CURVE_COLUMNS: [&str; 13] = [
    "s",
    "L_re",
    "L_im",
    "C_re",
    "C_im",
    "C_sigma_re",
    "C_sigma_im",
    "C_prime_re",
    "C_prime_im",
    "C_prime_sigma_re",
    "C_prime_sigma_im",
    "C_sigma_im_poisson",
    "C_prime_sigma_im_poisson",
];

pub fn curves_csv(r: &CurveReport) -> Result<String> {
    write_rows(
        &CURVE_COLUMNS,
        r.samples.iter().map(|p| {
            [
                p.s,
                p.l.re,
                p.l.im,
                p.c.re,
                p.c.im,
                p.c_sigma.re,
                p.c_sigma.im,
                p.c_prime.re,
                p.c_prime.im,
                p.c_prime_sigma.re,
                p.c_prime_sigma.im,
                p.im_c_sigma_poisson,
                p.im_c_prime_sigma_poisson,
            ]
            .into_iter()
            .map(num)
            .collect()
        }),
    )
}

pub fn fov_csv(f: &FovBoundary) -> Result<String> {
    write_rows(
        &["theta", "re", "im", "lambda_max"],
        f.angles
            .iter()
            .zip(&f.support_points)
            .zip(&f.support_values)
            .map(|((a, z), l)| vec![num(*a), num(z.re), num(z.im), num(*l)]),
    )
}

pub const ZERO_COLUMNS: [&str; 8] = [
    "sigma",
    "t",
    "abs_G",
    "G_sigma_re",
    "G_sigma_im",
    "multiplicity",
    "on_line",
    "zeta_residual",
];

pub fn zeros_csv(records: &[ZeroRecord]) -> Result<String> {
    write_rows(
        &ZERO_COLUMNS,
        records.iter().map(|r| {
            vec![
                num(r.z.sigma),
                num(r.z.t),
                num(r.abs_g),
                num(r.g_deriv.re),
                num(r.g_deriv.im),
                r.multiplicity_estimate.to_string(),
                r.on_critical_line.to_string(),
                num(r.zeta_residual),
            ]
        }),
    )
}
