//! Exact symbolic verification of recursion-operator geometries.

// tensor code reads better with explicit index loops
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod expr;
pub mod geom;
pub mod hverify;
pub mod wdvv;
