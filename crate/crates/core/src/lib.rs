//! Discrete differential geometry toolkit: multidimensionally consistent
//! quad equations and nets, discrete complex analysis, and integrable
//! circle patterns, with exact-rational and floating verification at desk
//! scale.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats and the CLI
//! live in the companion `ddg-cli` crate.

#![no_std]
#![allow(clippy::too_many_arguments)]

extern crate alloc;

pub mod grid;
pub mod scalar;
pub mod linalg;
pub mod elliptic;
pub mod quadcomplex;
pub mod quadeq;
pub mod nets;
pub mod dca;
pub mod patterns;
pub mod ybmaps;
pub mod hypsys;

pub use scalar::{Field, GaussRational};
