use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real field underlying the complex entries of algebra elements.
///
/// Implemented for `f32` and `f64`. Numerical thresholds that depend on the
/// working precision live here as associated constants so that the algebra
/// code stays precision-agnostic.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Relative floor on the smallest singular value of a block, measured
    /// against the block norm, below which the block counts as singular.
    const SINGULAR_RTOL: f64;
    /// Relative bound on `|x - x*|`, measured against `1 + |x|`.
    const SELF_ADJOINT_RTOL: f64;

    /// Converts an `f64` literal into this type.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const SINGULAR_RTOL: f64 = 1e-10;
    const SELF_ADJOINT_RTOL: f64 = 1e-10;
}

impl Real for f32 {
    const SINGULAR_RTOL: f64 = 1e-5;
    const SELF_ADJOINT_RTOL: f64 = 1e-5;
}
