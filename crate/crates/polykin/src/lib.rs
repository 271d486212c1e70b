//! Numerical library for the polyatomic Boltzmann collision model with a
//! continuous internal-energy variable: collision operator and kinematics,
//! collision frequency and integral kernels, Galerkin spectral analysis of
//! the linearized operator, and desk-scale kinetic solvers.

pub mod collision;
pub mod error;
pub mod grid;
pub mod kernel;
pub mod lapack;

pub mod model;
pub mod quadrature;

pub mod special;

pub use error::{Error, Result};
pub use grid::{DistributionGrid, Spatial, VelocityAxis};
pub use model::{DefectMoments, ModelParams, PhasePoint};
pub use quadrature::QuadratureSpec;
