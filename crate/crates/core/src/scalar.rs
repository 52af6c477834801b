use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::Rational;

/// Coefficient field for operators, sequences and polynomials.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Parse the textual form produced by [`Scalar::to_text`].
    fn from_text(s: &str) -> Result<Self>;

    fn to_text(&self) -> String {
        self.to_string()
    }

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer embeds into every scalar field")
    }

    /// `(-1)^p`.
    fn sign_power(p: i64) -> Self {
        if p.rem_euclid(2) == 0 {
            Self::one()
        } else {
            -Self::one()
        }
    }

    /// `self^p` for any integer `p`; panics on `0^p` with `p < 0`.
    fn pow_int(&self, p: i64) -> Self {
        let base = if p < 0 { Self::one() / self.clone() } else { self.clone() };
        num_traits::pow(base, p.unsigned_abs() as usize)
    }
}

/// Marker for fields with exact arithmetic, where equality tests are
/// meaningful and polynomial division is exact.
pub trait ExactField: Scalar {}

impl Scalar for Rational {
    fn from_text(s: &str) -> Result<Self> {
        s.trim()
            .parse::<Rational>()
            .map_err(|e| Error::Parse(format!("invalid rational {s:?}: {e}")))
    }
}

impl ExactField for Rational {}

impl Scalar for f64 {
    fn from_text(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(v) = s.parse::<f64>() {
            return Ok(v);
        }
        // Accept "p/q" too, so exact files can be read numerically.
        Rational::from_text(s)?
            .to_f64()
            .ok_or_else(|| Error::Parse(format!("value {s:?} out of range")))
    }
}

impl Scalar for f32 {
    fn from_text(s: &str) -> Result<Self> {
        f64::from_text(s).map(|v| v as f32)
    }
}

/// Converts a scalar of one field into another through `f64` or exactly
/// when both sides are rational.
pub fn to_f64<T: Scalar>(x: &T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};

    #[test]
    fn rational_text_round_trip() {
        for v in [ratio(-3, 7), rat(0), rat(12), ratio(1, 2)] {
            assert_eq!(Rational::from_text(&v.to_text()).unwrap(), v);
        }
        assert_eq!(ratio(-3, 7).to_text(), "-3/7");
        assert_eq!(Rational::from_text("6/4").unwrap(), ratio(3, 2));
        assert!(Rational::from_text("x").is_err());
    }

    #[test]
    fn integer_powers() {
        assert_eq!(ratio(2, 3).pow_int(-2), ratio(9, 4));
        assert_eq!(rat(5).pow_int(0), rat(1));
        assert_eq!(Rational::sign_power(-3), rat(-1));
        assert_eq!(Scalar::pow_int(&2.0f64, 3), 8.0);
    }

    #[test]
    fn float_accepts_fraction_text() {
        assert_eq!(f64::from_text("1/4").unwrap(), 0.25);
        assert_eq!(f64::from_text("-2.5").unwrap(), -2.5);
    }
}
