#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod characterization;
pub mod cli;
pub mod distributions;
pub mod entropies;
pub mod error;
pub mod format;
pub mod identities;
pub mod numerics;
pub mod transforms;
