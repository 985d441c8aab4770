//! Generic scalar abstraction for the numeric core.
//!
//! Graph forms, incidence rows, sketches and the Laplacian solver are generic
//! over [`Scalar`]; the pipelines instantiate the `f64` aliases exported from
//! the crate root, where every tolerance in the contracts is stated.

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable by the numeric core.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + std::fmt::Debug + std::fmt::Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used for constants and RNG output.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts into any Scalar")
    }

    /// Lossy conversion to `f64` for reporting and cross-type checks.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("Scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
