//! Scalar abstraction for the numeric core.
//!
//! Rates, probabilities, LP arithmetic, and run statistics are generic over
//! [`Real`], instantiated as `f32` or `f64`. Tolerances are scalar-dependent:
//! the defaults that make sense in double precision are unreachable in single
//! precision.

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + std::iter::Sum
    + std::fmt::Debug
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Tolerance for probability-vector normalization checks.
    fn prob_tol() -> Self;

    /// Pivot and feasibility tolerance for the LP solver and certificates.
    fn lp_tol() -> Self;
}

impl Real for f64 {
    fn prob_tol() -> Self {
        1e-12
    }

    fn lp_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn prob_tol() -> Self {
        1e-5
    }

    fn lp_tol() -> Self {
        1e-4
    }
}

/// Converts an `f64` literal into the working scalar.
pub fn real<R: Real>(v: f64) -> R {
    R::from_f64(v).expect("literal not representable in scalar type")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_conversion_round_trips() {
        assert_eq!(real::<f64>(0.55), 0.55);
        assert_eq!(real::<f32>(0.5), 0.5f32);
    }

    #[test]
    fn tolerances_are_positive_and_type_dependent() {
        assert!(f64::lp_tol() > 0.0 && f64::lp_tol() < f32::lp_tol() as f64);
        assert!(f32::prob_tol() > 0.0);
    }
}
