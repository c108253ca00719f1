//! Exact certification of vexillar designs.

pub mod catalog;
pub mod combinatorics;
pub mod config;
pub mod design;
pub mod detpoly;
pub mod error;
pub mod extremality;
pub mod flags;
pub mod groups;
pub mod lattice;
pub mod linalg;
pub mod rational;
pub mod zonal;

pub use config::Config;
pub use error::{Error, Result};
