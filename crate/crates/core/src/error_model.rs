//! Closed-form error probabilities for coherent superpositions of `r`
//! equivalent configurations, and the extremum classification in `theta`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default half-width, in radians, of the window around multiples of pi.
pub const DEFAULT_THETA_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ErrorModelParams {
    r: u64,
    d: u64,
    n: u32,
}

impl ErrorModelParams {
    pub fn new(r: u64, d: u64, n: u32) -> Result<Self> {
        if r < 1 || d < 2 || n < 1 {
            return Err(Error::InvalidParameter(format!(
                "error model needs r >= 1, d >= 2, N >= 1 (got r={r}, d={d}, N={n})"
            )));
        }
        Ok(ErrorModelParams { r, d, n })
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `d^N`.
    pub fn dimension<T: Scalar>(&self) -> T {
        T::lit(self.d as f64).powi(self.n as i32)
    }
}

/// `r / (2 d^N) * (1 - sqrt(1 - r^-2))`.
///
/// The bracket is evaluated as `r^-2 / (1 + sqrt(1 - r^-2))`, which stays
/// accurate for large `r`.
pub fn p_err_limiting<T: Scalar>(params: &ErrorModelParams) -> T {
    let r = T::lit(params.r as f64);
    let inv2 = T::one() / (r * r);
    let bracket = inv2 / (T::one() + (T::one() - inv2).sqrt());
    r / (T::lit(2.0) * params.dimension::<T>()) * bracket
}

/// Large-`r` limit `1 / (4 r d^N)`.
pub fn p_err_asymptotic<T: Scalar>(params: &ErrorModelParams) -> T {
    T::one() / (T::lit(4.0) * T::lit(params.r as f64) * params.dimension::<T>())
}

/// Limiting error scaled by the process distance `delta` between the two oracles.
pub fn p_err_practical<T: Scalar>(params: &ErrorModelParams, delta: T) -> Result<T> {
    if !matches!(delta.partial_cmp(&T::zero()), Some(Ordering::Greater | Ordering::Equal)) {
        return Err(Error::InvalidParameter(format!(
            "process distance must be non-negative, got {delta}"
        )));
    }
    Ok(p_err_limiting::<T>(params) * delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ThetaClass {
    /// Odd multiple of pi.
    Min,
    /// Even multiple of pi.
    Max,
    Intermediate,
}

impl ThetaClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ThetaClass::Min => "MIN",
            ThetaClass::Max => "MAX",
            ThetaClass::Intermediate => "INTERMEDIATE",
        }
    }
}

impl fmt::Display for ThetaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify_theta<T: Scalar>(theta: T, tol: T) -> ThetaClass {
    let pi = T::pi();
    let m = (theta / pi).round();
    if (theta - m * pi).abs() > tol {
        return ThetaClass::Intermediate;
    }
    let even = (m / T::lit(2.0)).fract() == T::zero();
    if even {
        ThetaClass::Max
    } else {
        ThetaClass::Min
    }
}
