//! Exact and numerical tools for rational Dunkl analysis.

pub mod dunkl;
pub mod area;
pub mod boundary;
pub mod datum;
pub mod error;
pub mod field;
pub mod intertwine;
pub mod means;
pub mod poisson;
pub mod poly;
pub mod quadrature;
pub mod rootsys;
pub mod special;

pub use error::{Error, Result};
