//! Fixed-point edge weights.
//!
//! Weights are stored as integer milli-units, so `3.141` is held as `3141`.
//! Every textual weight in the instance and LP formats carries exactly three
//! fraction digits, which keeps parsing, arithmetic and printing exact.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Number of milli-units in one whole unit.
pub const SCALE: u64 = 1000;

/// A non-negative decimal quantity with three fraction digits.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(u64);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightParseError {
    #[error("`{0}` is not a decimal with exactly 3 fraction digits")]
    Malformed(String),
    #[error("`{0}` is negative")]
    Negative(String),
    #[error("`{0}` does not fit in 64 bits of milli-units")]
    Overflow(String),
}

impl Weight {
    pub const ZERO: Weight = Weight(0);

    #[inline]
    pub const fn from_milli(milli: u64) -> Self {
        Weight(milli)
    }

    #[inline]
    pub const fn milli(self) -> u64 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn checked_add(self, rhs: Weight) -> Option<Weight> {
        self.0.checked_add(rhs.0).map(Weight)
    }

    /// Rounds a floating-point value to the nearest milli-unit.
    ///
    /// Returns `None` for NaN, infinities and values below `-0.0005`.
    pub fn from_f64_rounded(value: f64) -> Option<Weight> {
        if !value.is_finite() {
            return None;
        }
        let milli = (value * SCALE as f64).round();
        if milli < 0.0 {
            // -0.0004 rounds to -0.0 which compares equal to zero
            return None;
        }
        if milli >= u64::MAX as f64 {
            return None;
        }
        Some(Weight(milli as u64))
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / SCALE as f64
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:03}", self.0 / SCALE, self.0 % SCALE)
    }
}

impl FromStr for Weight {
    type Err = WeightParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || WeightParseError::Malformed(s.to_owned());
        if s.starts_with('-') {
            return Err(WeightParseError::Negative(s.to_owned()));
        }
        let (int_part, frac_part) = s.split_once('.').ok_or_else(malformed)?;
        if int_part.is_empty()
            || frac_part.len() != 3
            || !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(malformed());
        }
        let overflow = || WeightParseError::Overflow(s.to_owned());
        let whole: u64 = int_part.parse().map_err(|_| overflow())?;
        let frac: u64 = frac_part.parse().map_err(|_| malformed())?;
        whole
            .checked_mul(SCALE)
            .and_then(|w| w.checked_add(frac))
            .map(Weight)
            .ok_or_else(overflow)
    }
}

impl Add for Weight {
    type Output = Weight;

    #[inline]
    fn add(self, rhs: Weight) -> Weight {
        Weight(self.0 + rhs.0)
    }
}

impl AddAssign for Weight {
    #[inline]
    fn add_assign(&mut self, rhs: Weight) {
        self.0 += rhs.0;
    }
}

impl Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a Weight> for Weight {
    fn sum<I: Iterator<Item = &'a Weight>>(iter: I) -> Weight {
        iter.copied().sum()
    }
}

// Serialized as the decimal string so JSON consumers never see a float.
impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_three_decimal_values() {
        assert_eq!("3.000".parse::<Weight>(), Ok(Weight::from_milli(3000)));
        assert_eq!("9.999".parse::<Weight>(), Ok(Weight::from_milli(9999)));
        assert_eq!("0.001".parse::<Weight>(), Ok(Weight::from_milli(1)));
        assert_eq!("0.000".parse::<Weight>(), Ok(Weight::ZERO));
    }

    #[test]
    fn rejects_other_precisions() {
        for bad in ["3", "3.0", "3.0001", ".500", "3.", "1e3", "+1.000", "1.00a", ""] {
            assert!(
                matches!(bad.parse::<Weight>(), Err(WeightParseError::Malformed(_))),
                "{bad:?} should be malformed"
            );
        }
        assert!(matches!(
            "-1.000".parse::<Weight>(),
            Err(WeightParseError::Negative(_))
        ));
        assert!(matches!(
            "99999999999999999999.000".parse::<Weight>(),
            Err(WeightParseError::Overflow(_))
        ));
    }

    #[test]
    fn rounding_from_float() {
        assert_eq!(Weight::from_f64_rounded(7.9999999), Some(Weight::from_milli(8000)));
        assert_eq!(Weight::from_f64_rounded(-1e-9), Some(Weight::ZERO));
        assert_eq!(Weight::from_f64_rounded(-0.01), None);
        assert_eq!(Weight::from_f64_rounded(f64::NAN), None);
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(milli in any::<u64>()) {
            let w = Weight::from_milli(milli);
            let text = w.to_string();
            prop_assert_eq!(text.split_once('.').unwrap().1.len(), 3);
            prop_assert_eq!(text.parse::<Weight>(), Ok(w));
        }
    }
}
