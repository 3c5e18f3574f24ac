//! Orthogonally `a`-Jensen mappings on finite-dimensional Hilbert C*-modules.
//!
//! The algebra is a direct sum of full matrix algebras, the module is the
//! free module `A^m` with `<x, y> = sum_i x_i y_i*`, and mappings are
//! evaluable expression trees. [`jensen_core`] checks the functional
//! equation `f(a x + (1 - a) y) = a f(x) + (1 - a) f(y)` for orthogonal
//! `x, y`, its consequences, and the decomposition
//! `f(x) = A(x) + B(x, x) + f(0)` on sampled inputs.
//!
//! Everything is generic over the real scalar ([`Real`]: `f32` or `f64`);
//! the aliases below fix `f64`.

pub mod cstar_algebra;
mod error;
pub mod hilbert_module;
pub mod jensen_core;
pub mod mapping_kit;
mod scalar;

pub use error::{Error, PairCondition, Result};
pub use scalar::Real;

pub use cstar_algebra::Shape as AlgebraShape;

pub type AlgebraElement = cstar_algebra::Element<f64>;
pub type Coefficient = cstar_algebra::Coeff<f64>;
pub type ModuleVector = hilbert_module::Vector<f64>;
pub type OrthoSamplerMode = hilbert_module::OrthoSampler<f64>;
pub type Mapping = mapping_kit::Map<f64>;
pub type AdditivePair = mapping_kit::Pair<f64>;
pub type KernelSolution = mapping_kit::Kernel<f64>;
pub type Decomposition = jensen_core::Decomposed<f64>;

pub type AlgebraElementF32 = cstar_algebra::Element<f32>;
pub type CoefficientF32 = cstar_algebra::Coeff<f32>;
pub type ModuleVectorF32 = hilbert_module::Vector<f32>;
pub type MappingF32 = mapping_kit::Map<f32>;
