//! Pointwise geometry of the product twistor space `Z ×_M Z` of an oriented
//! Riemannian 4-manifold.
//!
//! Everything here lives in a single tangent space: the fibre algebra of
//! compatible complex structures, the Hodge splitting of 2-vectors in
//! dimension four, algebraic curvature operators, the closed-form covariant
//! derivative / differential / codifferential of the fundamental 2-forms of
//! the four almost Hermitian structures `(H_t, J^n)`, their Nijenhuis tensors,
//! and a seeded sampler that detects Gray-Hervella classes from those tensors.
//!
//! The crate is `no_std` (it needs `alloc`). File formats and the command line
//! front end live in the `twistor-tool` crate.

#![no_std]

extern crate alloc;

pub mod consistency;
pub mod curvature;
mod error;
pub mod fibre;
pub mod four_dim;
pub mod gh;
pub mod linalg;
pub mod sampling;
pub mod theorems;
pub mod twistor;

pub use curvature::{CurvatureBlocks, CurvatureOperator, ModelName, ModelParams};
pub use error::{Error, Result};
pub use four_dim::{OrientedComplexStructure4, Sign, TwoVector};
pub use gh::{ClassReport, Condition, GhClass, SamplingConfig};
pub use theorems::{TheoremId, TheoremOutcome};
pub use twistor::{
    Component, GTangent, Params, ProductTwistorPoint, StructureIndex, TwistorTensors,
    VerticalVector,
};
