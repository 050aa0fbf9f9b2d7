//! Coefficient rings used throughout the crate.
//!
//! Everything that carries tensor components implements [`Ring`]; exact rationals and `f64`
//! additionally implement [`Field`]. Polynomials over a field (see [`crate::poly`]) are a ring,
//! which is what lets the tensor and curvature code run unchanged on chart-valued fields.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;

/// Exact rational number used as the default coefficient domain.
pub type Q = BigRational;

/// Builds the rational `p/q`.
pub fn q(p: i64, den: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(den))
}

/// Builds the integer rational `p`.
pub fn qi(p: i64) -> Q {
    Q::from_integer(BigInt::from(p))
}

/// Formats a rational as `"p/q"` (or `"p"` when integral).
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                return None;
            }
            Some(Q::new(a, b))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

/// A commutative ring with unit whose elements can be scaled by small rationals.
pub trait Ring: Clone + Debug + PartialEq + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_ratio(p: i64, den: i64) -> Self;
    /// Embeds an exact rational.
    fn from_q(x: &Q) -> Self;
    /// Multiplies by the rational constant `p/den`.
    fn scale_ratio(&self, p: i64, den: i64) -> Self {
        self.mul(&Self::from_ratio(p, den))
    }
    /// Multiplies by an exact rational constant.
    fn scale_q(&self, x: &Q) -> Self {
        self.mul(&Self::from_q(x))
    }
    fn add_assign(&mut self, o: &Self) {
        *self = self.add(o);
    }
    /// Size measure used for residual reporting (largest absolute coefficient).
    fn magnitude(&self) -> f64;
    /// True if the value is zero within the tolerance appropriate for the domain.
    fn is_negligible(&self, tol: f64) -> bool {
        self.is_zero() || self.magnitude() <= tol
    }
    /// Text form used in reports (`"p/q"` for rationals).
    fn render(&self) -> String;
}

/// A field: a ring with inverses and an embedding of the rationals.
pub trait Field: Ring {
    fn inv(&self) -> Self;
    fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }
    /// True for exact domains; float domains compare against a tolerance.
    const EXACT: bool;
}

impl Ring for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_ratio(p: i64, den: i64) -> Self {
        q(p, den)
    }
    fn from_q(x: &Q) -> Self {
        x.clone()
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
    fn is_negligible(&self, _tol: f64) -> bool {
        Zero::is_zero(self)
    }
    fn render(&self) -> String {
        fmt_q(self)
    }
}

impl Field for Q {
    fn inv(&self) -> Self {
        self.recip()
    }
    const EXACT: bool = true;
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_ratio(p: i64, den: i64) -> Self {
        p as f64 / den as f64
    }
    fn from_q(x: &Q) -> Self {
        x.to_f64().unwrap_or(f64::NAN)
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn render(&self) -> String {
        format!("{self:e}")
    }
}

impl Field for f64 {
    fn inv(&self) -> Self {
        1.0 / self
    }
    const EXACT: bool = false;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "-7/2", "0", "5/10"] {
            let x = parse_q(s).unwrap();
            assert_eq!(parse_q(&fmt_q(&x)).unwrap(), x);
        }
        assert_eq!(fmt_q(&q(5, 10)), "1/2");
        assert!(parse_q("1/0").is_none());
        assert!(parse_q("x").is_none());
    }

    #[test]
    fn ratio_scaling() {
        assert_eq!(qi(6).scale_ratio(1, 4), q(3, 2));
        assert!((3.0f64.scale_ratio(1, 4) - 0.75).abs() < 1e-15);
    }
}
