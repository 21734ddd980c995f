#![allow(clippy::needless_range_loop)]

pub mod born;
pub mod cli;
pub mod cyclotomic;
pub mod dynamics;
pub mod error;
pub mod gates;
pub mod matrix;
pub mod permgroup;
pub mod rational;
pub mod repr;
