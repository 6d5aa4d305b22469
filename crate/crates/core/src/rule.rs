//! Threshold update rules and the exact rational α they use.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A fraction `num/den` with `0 < num/den < 1`, kept in lowest terms.
///
/// Threshold comparisons are done in integers (`k·den ≥ num·d`) so that a node
/// sitting exactly on the α boundary is classified without rounding error.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Alpha {
    num: u64,
    den: u64,
}

impl Alpha {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num == 0 || num >= den {
            return Err(Error::InvalidParameter(format!(
                "alpha must satisfy 0 < alpha < 1, got {num}/{den}"
            )));
        }
        let g = num.gcd(&den);
        Ok(Alpha {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// 1 − α.
    pub fn complement(self) -> Alpha {
        Alpha::new(self.den - self.num, self.den).expect("complement of a valid alpha is valid")
    }

    /// `count ≥ α·total`, evaluated exactly.
    #[inline]
    pub fn reached(self, count: usize, total: usize) -> bool {
        count as u128 * self.den as u128 >= self.num as u128 * total as u128
    }

    /// ⌈α·k⌉.
    pub fn ceil_mul(self, k: usize) -> usize {
        let p = self.num as u128 * k as u128;
        p.div_ceil(self.den as u128) as usize
    }

    /// ⌊α·k⌋.
    pub fn floor_mul(self, k: usize) -> usize {
        (self.num as u128 * k as u128 / self.den as u128) as usize
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alpha({self})")
    }
}

/// Accepts `p/q` or a terminating decimal such as `0.25`.
impl FromStr for Alpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidParameter(format!("cannot parse alpha {s:?}; expected p/q or a decimal"));
        if let Some((p, q)) = s.split_once('/') {
            let p = p.trim().parse().map_err(|_| bad())?;
            let q = q.trim().parse().map_err(|_| bad())?;
            return Alpha::new(p, q);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let den = 10u64.pow(frac.len() as u32);
        let frac_val: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let num = int
            .checked_mul(den)
            .and_then(|x| x.checked_add(frac_val))
            .ok_or_else(bad)?;
        Alpha::new(num, den)
    }
}

impl TryFrom<String> for Alpha {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Alpha> for String {
    fn from(a: Alpha) -> String {
        a.to_string()
    }
}

/// The synchronous update rule: a node turns blue next round iff it has at
/// least `r` blue neighbors, or at least an α fraction of blue neighbors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ThresholdRule {
    RThreshold { r: usize },
    AlphaThreshold { alpha: Alpha },
}

impl ThresholdRule {
    pub fn r(r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParameter("r must be at least 1".into()));
        }
        Ok(ThresholdRule::RThreshold { r })
    }

    pub fn alpha(alpha: Alpha) -> Self {
        ThresholdRule::AlphaThreshold { alpha }
    }

    /// Whether a node with `blue` blue neighbors out of `degree` turns blue.
    #[inline]
    pub fn turns_blue(self, blue: usize, degree: usize) -> bool {
        match self {
            ThresholdRule::RThreshold { r } => blue >= r,
            ThresholdRule::AlphaThreshold { alpha } => alpha.reached(blue, degree),
        }
    }

    /// Minimum number of blue neighbors a node of degree `degree` needs:
    /// `r`, or `⌈α·degree⌉`.
    pub fn required(self, degree: usize) -> usize {
        match self {
            ThresholdRule::RThreshold { r } => r,
            ThresholdRule::AlphaThreshold { alpha } => alpha.ceil_mul(degree),
        }
    }
}

impl fmt::Display for ThresholdRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdRule::RThreshold { r } => write!(f, "r={r}"),
            ThresholdRule::AlphaThreshold { alpha } => write!(f, "alpha={alpha}"),
        }
    }
}

/// Parses `r=3` or `alpha=1/2`.
impl FromStr for ThresholdRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().split_once('=') {
            Some(("r", v)) => {
                let r = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad r in {s:?}")))?;
                ThresholdRule::r(r)
            }
            Some(("alpha", v)) => Ok(ThresholdRule::alpha(v.parse()?)),
            _ => Err(Error::InvalidParameter(format!(
                "cannot parse rule {s:?}; expected r=K or alpha=P/Q"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_alpha() {
        assert_eq!("1/2".parse::<Alpha>().unwrap(), Alpha::new(1, 2).unwrap());
        assert_eq!("2/4".parse::<Alpha>().unwrap(), Alpha::new(1, 2).unwrap());
        assert_eq!("0.25".parse::<Alpha>().unwrap(), Alpha::new(1, 4).unwrap());
        assert_eq!(".5".parse::<Alpha>().unwrap(), Alpha::new(1, 2).unwrap());
        for bad in ["0", "1", "1/1", "3/2", "0/5", "x", "1/0", "-0.5", "1.5"] {
            assert!(bad.parse::<Alpha>().is_err(), "{bad}");
        }
    }

    #[test]
    fn alpha_tie_is_inclusive() {
        let half = Alpha::new(1, 2).unwrap();
        assert!(half.reached(2, 4));
        assert!(!half.reached(1, 4));
        let third = Alpha::new(1, 3).unwrap();
        assert!(third.reached(1, 3));
        assert_eq!(third.ceil_mul(4), 2);
        assert_eq!(Alpha::new(1, 2).unwrap().ceil_mul(3), 2);
        assert_eq!(Alpha::new(2, 3).unwrap().ceil_mul(3), 2);
        assert_eq!(Alpha::new(2, 3).unwrap().floor_mul(4), 2);
    }

    #[test]
    fn parse_rule() {
        assert_eq!(
            "r=3".parse::<ThresholdRule>().unwrap(),
            ThresholdRule::RThreshold { r: 3 }
        );
        assert_eq!(
            "alpha=1/2".parse::<ThresholdRule>().unwrap(),
            ThresholdRule::alpha(Alpha::new(1, 2).unwrap())
        );
        assert!("r=0".parse::<ThresholdRule>().is_err());
        assert!("beta=2".parse::<ThresholdRule>().is_err());
        let json = serde_json::to_string(&"alpha=2/3".parse::<ThresholdRule>().unwrap()).unwrap();
        assert_eq!(json, r#"{"rule":"alpha_threshold","alpha":"2/3"}"#);
    }
}
