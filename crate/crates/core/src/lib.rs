//! Equilibrium, stability and bifurcation analysis of the ratio-dependent
//! Bazykin predator–prey system
//!
//! ```text
//! u' = u(1−u)(u+v) − Quv
//! v' = Cuv − v(u+v)(M+Nv)
//! ```
//!
//! Every routine is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the usual double-precision instantiation.

// `!(a > b)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bifurcation;
pub mod dynamics;
pub mod equilibria;
pub mod error;
pub mod model;
pub mod scalar;

pub use error::{Error, Result};
pub use model::{DimensionalParams, Eigenvalues, Mat2, Params, State};
pub use scalar::Scalar;

pub type Params64 = Params<f64>;
pub type Params32 = Params<f32>;
pub type State64 = State<f64>;
pub type State32 = State<f32>;
pub type DimensionalParams64 = DimensionalParams<f64>;
pub type SigmaSet64 = equilibria::SigmaSet<f64>;
pub type Equilibrium64 = equilibria::Equilibrium<f64>;
pub type HopfData64 = bifurcation::HopfData<f64>;
pub type BtData64 = bifurcation::BtData<f64>;
pub type BifDiagram64 = bifurcation::BifDiagram<f64>;
pub type Trajectory64 = dynamics::Trajectory<f64>;
pub type LimitCycle64 = dynamics::LimitCycle<f64>;
pub type BasinRaster64 = dynamics::BasinRaster<f64>;
