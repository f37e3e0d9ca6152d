//! Base-10 logarithmic encoding of huge positive reals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

/// A positive real stored as its base-10 logarithm.
///
/// Products become sums of the `log10` fields; ordering follows the
/// represented value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogMagnitude {
    pub log10: f64,
}

impl LogMagnitude {
    pub const ONE: LogMagnitude = LogMagnitude { log10: 0.0 };

    pub fn from_log10(log10: f64) -> Self {
        debug_assert!(log10.is_finite());
        Self { log10 }
    }

    /// `mantissa * 10^exponent`, the way the bounds are usually written.
    pub fn sci(mantissa: f64, exponent: i64) -> Self {
        assert!(mantissa > 0.0);
        Self::from_log10(mantissa.log10() + exponent as f64)
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(x > 0.0 && x.is_finite(), "LogMagnitude needs a positive finite value");
        Self::from_log10(x.log10())
    }

    pub fn from_u64(x: u64) -> Self {
        Self::from_f64(x as f64)
    }

    pub fn from_biguint(x: &BigUint) -> Self {
        assert!(x.bits() > 0, "LogMagnitude of zero");
        let bits = x.bits();
        if bits <= 1000 {
            let f: f64 = num_traits::ToPrimitive::to_f64(x).unwrap();
            return Self::from_f64(f);
        }
        let shift = bits - 64;
        let top: BigUint = x >> shift;
        let f: f64 = num_traits::ToPrimitive::to_f64(&top).unwrap();
        Self::from_log10(f.log10() + shift as f64 * std::f64::consts::LOG10_2)
    }

    /// Natural log of the represented value.
    pub fn ln(self) -> f64 {
        self.log10 * std::f64::consts::LN_10
    }

    pub fn powf(self, e: f64) -> Self {
        Self::from_log10(self.log10 * e)
    }

    pub fn root(self, k: f64) -> Self {
        Self::from_log10(self.log10 / k)
    }

    /// The value itself when it fits in an `f64`.
    pub fn to_f64(self) -> Option<f64> {
        if self.log10 < 308.0 {
            Some(10f64.powf(self.log10))
        } else {
            None
        }
    }

    /// `(mantissa, exponent)` with `1 <= mantissa < 10`.
    pub fn mantissa_exponent(self) -> (f64, i64) {
        let e = self.log10.floor();
        let mut m = 10f64.powf(self.log10 - e);
        let mut e = e as i64;
        if m >= 10.0 {
            m /= 10.0;
            e += 1;
        }
        (m, e)
    }

    /// Relative error between the log10 fields.
    pub fn rel_log_error(self, reference: LogMagnitude) -> f64 {
        ((self.log10 - reference.log10) / reference.log10).abs()
    }

    /// Scientific string with `digits` significant digits after the point, e.g. `8.261e1320`.
    pub fn to_sci_string(self, digits: usize) -> String {
        let (m, e) = self.mantissa_exponent();
        let s = format!("{:.*}", digits, m);
        // rounding may carry into a new digit
        if s.starts_with("10") {
            format!("{:.*}e{}", digits, 1.0, e + 1)
        } else {
            format!("{}e{}", s, e)
        }
    }
}

impl Mul for LogMagnitude {
    type Output = LogMagnitude;
    fn mul(self, rhs: Self) -> Self {
        Self::from_log10(self.log10 + rhs.log10)
    }
}

impl Div for LogMagnitude {
    type Output = LogMagnitude;
    fn div(self, rhs: Self) -> Self {
        Self::from_log10(self.log10 - rhs.log10)
    }
}

impl PartialOrd for LogMagnitude {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.log10.partial_cmp(&other.log10)
    }
}

impl fmt::Display for LogMagnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci_string(f.precision().unwrap_or(4)))
    }
}

/// Parses `6.18e718`, `4413000000` or `1e9`; exponents may exceed the `f64` range.
impl std::str::FromStr for LogMagnitude {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        let bad = || crate::error::Error::InvalidArgument(format!("not a positive number: {s:?}"));
        let t = s.trim();
        let (mant, exp) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
            None => (t, 0),
        };
        let m: f64 = mant.parse().map_err(|_| bad())?;
        if !(m > 0.0 && m.is_finite()) {
            return Err(bad());
        }
        Ok(LogMagnitude::from_log10(m.log10() + exp as f64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sci_round_trip() {
        let x = LogMagnitude::sci(6.18, 718);
        let (m, e) = x.mantissa_exponent();
        assert_eq!(e, 718);
        assert!((m - 6.18).abs() < 1e-9);
        assert_eq!(x.to_sci_string(2), "6.18e718");
    }

    #[test]
    fn product_is_sum_of_logs() {
        let a = LogMagnitude::from_u64(1000);
        let b = LogMagnitude::from_u64(100);
        assert!(((a * b).log10 - 5.0).abs() < 1e-12);
        assert!(a > b);
    }

    #[test]
    fn bigint_conversion() {
        let x = BigUint::from(10u32).pow(1500);
        assert!((LogMagnitude::from_biguint(&x).log10 - 1500.0).abs() < 1e-9);
        let y = BigUint::from(823542u32);
        assert!((LogMagnitude::from_biguint(&y).log10 - 823542f64.log10()).abs() < 1e-12);
    }

    #[test]
    fn carry_in_formatting() {
        let x = LogMagnitude::from_log10(2.99999999);
        assert_eq!(x.to_sci_string(3), "1.000e3");
    }

    #[test]
    fn parse_large_exponents() {
        let x: LogMagnitude = "6.18e718".parse().unwrap();
        assert!((x.log10 - LogMagnitude::sci(6.18, 718).log10).abs() < 1e-12);
        let y: LogMagnitude = "4413000000".parse().unwrap();
        assert!((y.to_f64().unwrap() / 4.413e9 - 1.0).abs() < 1e-12);
        assert!("-1".parse::<LogMagnitude>().is_err());
        assert!("abc".parse::<LogMagnitude>().is_err());
    }
}
