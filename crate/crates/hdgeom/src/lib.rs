//! Hyper-dual number and vector algebra with its line-geometry
//! correspondences.
//!
//! The crate builds up in layers:
//!
//! - [`scalar`]: dual and hyper-dual scalars. One evaluation at the seed
//!   `t + ε + ε*` yields a value with exact first and second derivatives.
//! - [`vector`]: dual and hyper-dual 3-vectors, inner/cross products and
//!   norms, and the sphere/tangent-bundle membership predicates.
//! - [`expr`]: a small expression language in `t`, evaluated over any
//!   scalar kind, so curves defined as text get exact derivatives.
//! - [`curve`]: parametric curves with exact jets, Frenet and adapted
//!   frames, hyper-dual curve assembly, and hyper-dual arc length.
//! - [`study`]: oriented lines as unit dual vectors, curves on the
//!   hyper-dual sphere as ruled surfaces, developability tests, the paired
//!   surfaces with a common base curve, and the inverse construction.
//! - [`mesh`]: grid sampling of ruled surfaces, OBJ/CSV export, and
//!   developability reports.
//! - [`cli`]: the `hdgeom` command-line interface over all of the above.

pub mod cli;
pub mod curve;
pub mod expr;
pub mod mesh;
pub mod scalar;
pub mod study;
pub mod vector;

pub use curve::{Curve3, Frame3, FrameField, FrameKind, HyperDualCurve};
pub use scalar::{DualScalar, HyperDualScalar};
pub use vector::{DualVec3, HyperDualVec3, Vec3};
