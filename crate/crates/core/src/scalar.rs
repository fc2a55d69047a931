//! Floating-point scalar abstraction.

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the toolkit is generic over: `f32` or `f64`.
///
/// The stated accuracy targets (1e-12 on Gamma, 1e-10 on Mittag-Leffler)
/// hold for `f64`; `f32` gets whatever single precision can carry.
pub trait Real:
    Float + FromPrimitive + core::fmt::Debug + core::fmt::Display + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal must convert into every Real type")
    }

    /// Converts a count into `Self`.
    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize must convert into every Real type")
    }
}

impl Real for f32 {}
impl Real for f64 {}
