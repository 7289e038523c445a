//! Linear thermopiezoelectricity of nonsimple (strain-gradient) materials
//! with rate-type heat conduction: constitutive tensors and their symmetry
//! classes, the 1D mixed initial-boundary value problem, the convolution
//! reformulation that absorbs initial conditions into the field equations,
//! and numerical certification of the structural theorems (reciprocity,
//! uniqueness energy identity, variational stationarity).

pub mod banded;
pub mod constitutive;
pub mod convolution;
pub mod error;
pub mod expr;
pub mod kinematics;
pub mod manufactured;
pub mod scenario;
pub mod solver1d;
pub mod tensors;
pub mod theorems;

pub use error::{Error, Result};
