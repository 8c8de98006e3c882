//! Simulation and analysis toolkit for quantum causal hypothesis testing.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the crate root
//! exposes `f64` aliases for everyday use.

pub mod causal;
pub mod circuit;
pub mod density;
pub mod error;
pub mod error_model;
pub mod experiment;
pub mod gate;
pub mod layout;
pub mod metrics;
pub mod output;
pub mod random;
pub mod scalar;
pub mod state;
pub mod strategy;

pub use causal::{
    build_alternate_oracle, build_null_oracle, build_u_in, build_u_per, count_controlled_bell,
    ResourceCount,
};
pub use error::{Error, Result};
pub use gate::{Control, GateKind};
pub use layout::{LayoutDims, RegisterLayout};
pub use scalar::{Complex, Scalar};
pub use strategy::{PermutationStrategy, StrategyKind};

pub type StateVector = state::StateVector<f64>;
pub type StateVectorF32 = state::StateVector<f32>;
pub type DensityMatrix = density::DensityMatrix<f64>;
pub type DensityMatrixF32 = density::DensityMatrix<f32>;
pub type GateOp = gate::GateOp<f64>;
pub type GateOpF32 = gate::GateOp<f32>;
pub type Circuit = circuit::Circuit<f64>;
pub type CircuitF32 = circuit::Circuit<f32>;
