//! expanderlab: a numerical laboratory for self-expanding solutions of the
//! mean curvature flow.
//!
//! The crate constructs self-expanders (hyperplanes, shot planar curves and
//! their cylinders, rotationally symmetric profiles), computes the bottom of
//! the spectrum of the drifted Laplacian L = Delta + 1/2 <x, grad .> and of
//! the stability operator L + |A|^2 - 1/2 on them, and runs the spectral
//! inequality and rigidity checks against those geometries. Everything is
//! deterministic: identical configurations produce byte-identical output
//! files.

pub mod error;
pub mod generators;
pub mod geometry;
pub mod jsonio;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
