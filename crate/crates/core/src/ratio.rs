//! Exact nonnegative rationals for comparing integer cut weights against
//! thresholds such as `gamma * lambda_k / k`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use serde::{Serialize, Serializer};

/// Denominator used when a decimal multiplier such as `1.99` is read in.
const DECIMAL_SCALE: u128 = 1_000_000_000;

/// A nonnegative rational `num / den` with `den > 0`.
#[derive(Debug, Clone, Copy)]
pub struct Ratio {
    num: u128,
    den: u128,
}

impl Ratio {
    pub fn new(num: u128, den: u128) -> Self {
        assert!(den > 0, "zero denominator");
        let g = gcd(num, den);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn integer(v: u64) -> Self {
        Ratio::new(v as u128, 1)
    }

    /// Reads a finite nonnegative float, rounded to nine decimal places.
    /// `1.99` becomes exactly `199/100`.
    pub fn from_decimal(x: f64) -> Option<Self> {
        if !x.is_finite() || x < 0.0 {
            return None;
        }
        let scaled = (x * DECIMAL_SCALE as f64).round();
        if scaled > u64::MAX as f64 {
            return None;
        }
        Some(Ratio::new(scaled as u128, DECIMAL_SCALE))
    }

    pub fn numer(&self) -> u128 {
        self.num
    }

    pub fn denom(&self) -> u128 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Compares the integer `w` against this value.
    pub fn cmp_int(&self, w: u64) -> Ordering {
        (w as u128 * self.den).cmp(&self.num)
    }

    /// `w < self`
    pub fn exceeds(&self, w: u64) -> bool {
        self.cmp_int(w) == Ordering::Less
    }

    /// `w <= self`
    pub fn covers(&self, w: u64) -> bool {
        self.cmp_int(w) != Ordering::Greater
    }

    /// Smallest integer `>= self`.
    pub fn ceil(&self) -> u128 {
        self.num.div_ceil(self.den)
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

impl Mul for Ratio {
    type Output = Ratio;

    fn mul(self, other: Ratio) -> Ratio {
        let g1 = gcd(self.num, other.den);
        let g2 = gcd(other.num, self.den);
        Ratio::new(
            (self.num / g1.max(1)) * (other.num / g2.max(1)),
            (self.den / g2.max(1)) * (other.den / g1.max(1)),
        )
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.to_f64())
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}
