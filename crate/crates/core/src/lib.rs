#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod linalg;
pub mod orthopoly;
pub mod quadrature;
pub mod rng;
pub mod sketch;
pub mod solvers;
pub mod spectral;

pub use error::{Error, Result};
