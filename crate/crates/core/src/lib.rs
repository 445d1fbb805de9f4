#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod basis;
pub mod curve;
pub mod experiments;
pub mod green;
pub mod hcp;
pub mod kv;
pub mod linalg;
pub mod lp;
pub mod markov;
pub mod poly;
pub mod quadrature;
pub mod regression;
pub mod rng;
