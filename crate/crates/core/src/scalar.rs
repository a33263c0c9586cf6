//! Scalar abstraction for the geometric modules.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point scalar used by the geometry, Čech and stratification code.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Default width of the band that decides whether a Čech radius is zero.
    fn default_eps() -> Self;

    /// Default tolerance below which two points are considered equal.
    fn default_delta() -> Self;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal fits the scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn default_eps() -> Self {
        1e-9
    }
    fn default_delta() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn default_eps() -> Self {
        1e-5
    }
    fn default_delta() -> Self {
        1e-5
    }
}
