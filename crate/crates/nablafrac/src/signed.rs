//! Sign-and-log-magnitude arithmetic for gamma ratios.
//!
//! Gamma ratios on a grid of span n involve factorials of order n, so they
//! are composed in log space and exponentiated once at the end. The sign is
//! tracked separately because gamma is negative on alternating intervals of
//! the negative axis.

/// Tolerance for snapping a real argument to a nonpositive integer pole.
pub const POLE_SNAP: f64 = 1e-9;

/// A real number stored as `sign * exp(log_abs)`.
///
/// `sign == 0` encodes exact zero; `log_abs` is irrelevant in that case.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedLogMagnitude {
    sign: i8,
    log_abs: f64,
}

impl SignedLogMagnitude {
    pub fn zero() -> Self {
        SignedLogMagnitude {
            sign: 0,
            log_abs: f64::NEG_INFINITY,
        }
    }

    pub fn new(sign: i8, log_abs: f64) -> Self {
        debug_assert!(sign == -1 || sign == 0 || sign == 1);
        if sign == 0 {
            Self::zero()
        } else {
            SignedLogMagnitude { sign, log_abs }
        }
    }

    /// ln Gamma(x) with its sign, for non-pole x. Negative non-integer
    /// arguments go through the reflection formula inside `lgamma_r`.
    pub fn from_gamma(x: f64) -> Self {
        let (log_abs, sign) = libm::lgamma_r(x);
        SignedLogMagnitude {
            sign: if sign < 0 { -1 } else { 1 },
            log_abs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn mul(self, other: Self) -> Self {
        if self.sign == 0 || other.sign == 0 {
            return Self::zero();
        }
        SignedLogMagnitude {
            sign: self.sign * other.sign,
            log_abs: self.log_abs + other.log_abs,
        }
    }

    /// Quotient; caller guarantees the divisor is nonzero.
    pub fn div(self, other: Self) -> Self {
        debug_assert!(other.sign != 0, "division by exact zero");
        if self.sign == 0 {
            return Self::zero();
        }
        SignedLogMagnitude {
            sign: self.sign * other.sign,
            log_abs: self.log_abs - other.log_abs,
        }
    }

    pub fn value(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.log_abs.exp()
        }
    }
}

/// True when `x` is within `POLE_SNAP` of a nonpositive integer, i.e. a pole
/// of the gamma function.
pub fn is_nonpositive_integer(x: f64) -> bool {
    let r = x.round();
    r <= 0.0 && (x - r).abs() < POLE_SNAP
}
