//! Core kernels for leaf-image enhancement benchmarking: noise injection,
//! denoising filters, CLAHE, and full-reference quality metrics.
//!
//! Everything in this crate is a pure function of its inputs. Random streams
//! are fully specified (SplitMix64-seeded xoshiro256++ with Box-Muller
//! Gaussians) and all transcendental math goes through [`libm`], so results
//! are bit-identical across runs and platforms.
//!
//! The crate is `no_std` (with `alloc`); decoding, file formats, and the CLI
//! live in the companion `leafbench` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod clahe;
pub mod error;
mod math;
pub mod metrics;
pub mod noise;
pub mod pipeline;
pub mod raster;
pub mod rng;

pub mod filters;

pub use error::{Error, Result};
pub use raster::{ColorSpace, Plane, Raster};
