// NaN must fail validation, hence `!(x > 0.0)` rather than `x <= 0.0`
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod config;
pub mod curves;
pub mod error;
pub mod exec;
pub mod export;
pub mod gfunc;
pub mod intops;
pub mod linalg;
pub mod opconv;
pub mod quadrule;
pub mod specialfun;
pub mod verify;
pub mod zerofind;
