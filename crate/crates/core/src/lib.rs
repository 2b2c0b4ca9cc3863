//! Continuous piecewise-linear approximation on planar lattices.
//!
//! A lattice is the integer span of two unit directions scaled so every
//! cell has area T^2. Shifting a linear hat spline over the lattice spans a
//! space of continuous piecewise-linear functions; this crate quantifies
//! how well that space approximates smooth functions in L2 and how the
//! answer depends on the lattice shape:
//!
//! - [`lattice`]: grid matrices, validation, point and index enumeration.
//! - [`boxspline`]: the hat spline, its warped translates, its Fourier
//!   transform.
//! - [`spectral`]: the translate autocorrelation (a seven-point stencil),
//!   its Fourier symbol, and the periodic error kernel driving all
//!   fine-stepsize behavior.
//! - [`testfn`]: a registry of analytic test functions carrying Hessians,
//!   Fourier transforms, and closed-form norms.
//! - [`asymptotics`]: the direction constants (alpha, beta, gamma), the
//!   lattice figure of merit C, landscape sweeps over the angle plane, and
//!   the leading error term evaluated on either side of Parseval.
//! - [`projection`]: numerical minimum-L2 projection onto the spline space
//!   (seven-point Gram system solved by conjugate gradients), empirical
//!   error measurement, and rate studies.
//! - [`relunet`]: exact two-hidden-layer ReLU network form of axis-grid
//!   splines on the unit square, with a flat-text export.
//!
//! Support modules: [`geom`] (points, 2x2 matrices, rectangles), [`quad`]
//! (Gauss-Legendre rules over rectangles, triangles, and disks), [`exec`]
//! (data-parallel loops), [`error`] (the shared error type).
//!
//! # Parallelism
//!
//! With the default `parallel` feature, bulk loops (sweeps, quadrature,
//! load assembly, matrix-vector products, batch evaluation) run on the
//! rayon thread pool. Disabling the feature compiles the same API to
//! sequential loops. Reductions always run in a fixed pairwise order, so
//! results are bit-identical for any thread count, including one.

pub mod asymptotics;
pub mod boxspline;
pub mod error;
pub mod exec;
pub mod geom;
pub mod lattice;
pub mod projection;
pub mod quad;
pub mod relunet;
pub mod spectral;
pub mod testfn;

pub use error::{Error, Result};
pub use geom::{Mat2, Point, Rect};
pub use lattice::{IndexBox, LatticeKind, LatticeSpec};
