//! Second- and fourth-rank tensor algebra in three dimensions with several
//! double-contraction conventions, isotropic tensors, tensor derivatives and
//! conversion between derivative layouts.
//!
//! Every type is generic over [`Scalar`]; the aliases below fix the common
//! choices.

pub mod basis;
pub mod bridge;
pub mod calculus;
pub mod error;
pub mod invariants;
pub mod iso;
pub mod json;
pub mod products;
pub mod report;
pub mod sample;
mod scalar;
pub mod suite;
mod tensor;

pub use error::{Error, Result};
pub use products::{Dot, DoubleDot, Scheme};
pub use scalar::Scalar;
pub use tensor::{AnyTensor, Tensor2, Tensor4, DIM};

pub type Ten2 = Tensor2<f64>;
pub type Ten4 = Tensor4<f64>;
pub type Ten2F32 = Tensor2<f32>;
pub type Ten4F32 = Tensor4<f32>;
/// Exact rational components.
pub type Ten2Exact = Tensor2<num_rational::Rational64>;
pub type Ten4Exact = Tensor4<num_rational::Rational64>;
