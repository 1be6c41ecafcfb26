#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod cli;
pub mod currents;
pub mod error;
pub mod fuchsian;
pub mod geom;
pub mod intersect;
pub mod limitset;
pub mod oracle;

pub use error::{Error, Result};
