use std::fmt;
use std::ops::{Add, Div, Mul};
use std::str::FromStr;

use num_rational::Ratio;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// Exact non-negative rational, printed as `num/den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fraction(Ratio<u64>);

impl Fraction {
    /// Panics if `den == 0`.
    pub fn new(num: u64, den: u64) -> Self {
        Fraction(Ratio::new(num, den))
    }

    pub fn int(v: u64) -> Self {
        Fraction(Ratio::from_integer(v))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn ratio(&self) -> Ratio<u64> {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl From<u64> for Fraction {
    fn from(v: u64) -> Self {
        Fraction::int(v)
    }
}

impl Add for Fraction {
    type Output = Fraction;
    fn add(self, rhs: Self) -> Self {
        Fraction(self.0 + rhs.0)
    }
}

impl Mul for Fraction {
    type Output = Fraction;
    fn mul(self, rhs: Self) -> Self {
        Fraction(self.0 * rhs.0)
    }
}

impl Div for Fraction {
    type Output = Fraction;
    fn div(self, rhs: Self) -> Self {
        Fraction(self.0 / rhs.0)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Fraction {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        let n: u64 = n.trim().parse().map_err(|e| format!("bad numerator in `{s}`: {e}"))?;
        let d: u64 = d.trim().parse().map_err(|e| format!("bad denominator in `{s}`: {e}"))?;
        if d == 0 {
            return Err(format!("zero denominator in `{s}`"));
        }
        Ok(Fraction::new(n, d))
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_prints() {
        assert_eq!(Fraction::new(14, 2).to_string(), "7/1");
        assert_eq!(Fraction::new(23, 11).to_string(), "23/11");
        assert_eq!("6/4".parse::<Fraction>().unwrap(), Fraction::new(3, 2));
        assert_eq!("5".parse::<Fraction>().unwrap(), Fraction::int(5));
        assert!("1/0".parse::<Fraction>().is_err());
        assert!(Fraction::new(1, 3) < Fraction::new(1, 2));
    }

    #[test]
    fn serde_as_string() {
        let j = serde_json::to_string(&Fraction::new(5, 1)).unwrap();
        assert_eq!(j, "\"5/1\"");
        let back: Fraction = serde_json::from_str(&j).unwrap();
        assert_eq!(back, Fraction::int(5));
    }
}
