// `!(a <= b)` is used on purpose: NaN must fail the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod density;
pub mod error;
pub mod geoharmonic;
pub mod identities;
pub mod operator;
pub mod orthopoly;
pub mod quadrature;
pub mod reducer;
pub mod specfun;

pub use error::{Error, Result};
