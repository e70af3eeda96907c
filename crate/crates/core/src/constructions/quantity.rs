//! Exact integers that fall back to an approximate magnitude once they grow
//! past what can reasonably be written down.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Values above `2^EXACT_BITS_LIMIT` are tracked only by magnitude.
pub const EXACT_BITS_LIMIT: u64 = 1 << 20;

const LIMIT: f64 = 1e18;

/// A positive real `exp2^level(x)`: `level` iterated powers of two applied to `x`.
///
/// Normalised so that `x ≤ 1e18`, and `x > log2(1e18)` whenever `level > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Magnitude {
    pub level: u32,
    pub x: f64,
}

impl Magnitude {
    pub fn new(level: u32, x: f64) -> Self {
        let (mut level, mut x) = (level, x);
        loop {
            if x > LIMIT {
                level += 1;
                x = x.log2();
            } else if level > 0 && x <= LIMIT.log2() {
                level -= 1;
                x = x.exp2();
            } else {
                return Magnitude { level, x };
            }
        }
    }

    pub fn from_int(n: &BigUint) -> Self {
        let bits = n.bits();
        if bits <= 60 {
            return Magnitude::new(0, n.to_u64().unwrap_or(1) as f64);
        }
        let shift = bits - 64;
        let top = (n >> shift).to_u64().expect("64 leading bits");
        Magnitude::new(1, shift as f64 + (top as f64).log2())
    }

    pub fn log2(self) -> Self {
        match self.level {
            0 => Magnitude::new(0, self.x.log2()),
            l => Magnitude::new(l - 1, self.x),
        }
    }

    pub fn exp2(self) -> Self {
        Magnitude::new(self.level + 1, self.x)
    }

    pub fn add(self, other: Self) -> Self {
        if self.level == 0 && other.level == 0 {
            return Magnitude::new(0, self.x + other.x);
        }
        let (hi, lo) = if self >= other { (self, other) } else { (other, self) };
        if hi.level >= 2 {
            return hi;
        }
        let lo_log = lo.log2();
        if lo_log.level > 0 {
            return hi;
        }
        Magnitude::new(1, hi.x + (1.0 + (lo_log.x - hi.x).exp2()).log2())
    }

    pub fn mul(self, other: Self) -> Self {
        if self.level == 0 && other.level == 0 && self.x * other.x <= LIMIT {
            return Magnitude::new(0, self.x * other.x);
        }
        self.log2().add(other.log2()).exp2()
    }

    /// `self / other` for `self` far larger than `other`.
    pub fn div(self, other: Self) -> Self {
        if self.level == 0 {
            return Magnitude::new(0, self.x / other.x);
        }
        let a = self.log2();
        let b = other.log2();
        if a.level > 0 || b.level > 0 {
            return self;
        }
        Magnitude::new(0, a.x - b.x).exp2()
    }

    pub fn pow(self, exponent: Self) -> Self {
        exponent.mul(self.log2()).exp2()
    }

    /// Approximate `log2` of the value, when it fits in an `f64`.
    pub fn log2_f64(self) -> Option<f64> {
        match self.level {
            0 => Some(self.x.log2()),
            1 => Some(self.x),
            _ => None,
        }
    }
}

impl PartialOrd for Magnitude {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.level.cmp(&other.level) {
            Ordering::Equal => self.x.partial_cmp(&other.x),
            o => Some(o),
        }
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l10 = std::f64::consts::LOG10_2;
        match self.level {
            0 => write!(f, "≈{:.4e}", self.x),
            1 => write!(f, "≈10^{:.4e}", self.x * l10),
            2 => write!(f, "≈10^10^{:.4}", self.x * l10 + l10.log10()),
            l => write!(f, "≈2^^{l}({:.4})", self.x),
        }
    }
}

/// An exact non-negative integer, or the magnitude of one too large to store.
#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    Exact(BigUint),
    Approx(Magnitude),
}

impl Quantity {
    pub fn from_u64(v: u64) -> Self {
        Quantity::Exact(BigUint::from(v))
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            Quantity::Exact(v) => Some(v),
            Quantity::Approx(_) => None,
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.exact().and_then(ToPrimitive::to_u64)
    }

    pub fn magnitude(&self) -> Magnitude {
        match self {
            Quantity::Exact(v) => Magnitude::from_int(v),
            Quantity::Approx(m) => *m,
        }
    }

    fn settle(m: Magnitude, exact: impl FnOnce() -> BigUint) -> Self {
        match m.log2_f64() {
            Some(bits) if bits < EXACT_BITS_LIMIT as f64 => Quantity::Exact(exact()),
            _ => Quantity::Approx(m),
        }
    }

    pub fn add(&self, other: &Quantity) -> Quantity {
        match (self, other) {
            (Quantity::Exact(a), Quantity::Exact(b)) => Quantity::Exact(a + b),
            _ => Quantity::Approx(self.magnitude().add(other.magnitude())),
        }
    }

    pub fn add_u64(&self, v: u64) -> Quantity {
        self.add(&Quantity::from_u64(v))
    }

    pub fn mul_u64(&self, v: u64) -> Quantity {
        match self {
            Quantity::Exact(a) => Quantity::Exact(a * v),
            Quantity::Approx(m) => Quantity::Approx(m.mul(Magnitude::new(0, v as f64))),
        }
    }

    /// `base^exponent`.
    pub fn pow(base: u64, exponent: &Quantity) -> Quantity {
        let b = Quantity::from_u64(base);
        Self::pow_q(&b, exponent)
    }

    fn pow_q(base: &Quantity, exponent: &Quantity) -> Quantity {
        let m = base.magnitude().pow(exponent.magnitude());
        if let (Quantity::Exact(b), Quantity::Exact(e)) = (base, exponent) {
            if b.is_zero() || b.is_one() {
                return Quantity::Exact(b.clone());
            }
            if let Some(e32) = e.to_u32() {
                return Self::settle(m, || b.pow(e32));
            }
        }
        Quantity::Approx(m)
    }

    /// `(w^(h+1) - 1) / (w - 1)`, the vertex count of a complete `w`-ary tree of
    /// height `h`; `h + 1` when `w = 1`.
    pub fn geometric_sum(w: &Quantity, h: &Quantity) -> Quantity {
        let one = BigUint::one();
        if let Quantity::Exact(wv) = w {
            if wv.is_one() {
                return h.add_u64(1);
            }
        }
        let top = Self::pow_q(w, &h.add_u64(1));
        match (&top, w) {
            (Quantity::Exact(t), Quantity::Exact(wv)) => Quantity::Exact((t - &one) / (wv - &one)),
            _ => Quantity::Approx(top.magnitude().div(w.magnitude())),
        }
    }
}

impl PartialOrd for Quantity {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Quantity::Exact(a), Quantity::Exact(b)) => Some(a.cmp(b)),
            _ => match self.magnitude().partial_cmp(&other.magnitude()) {
                Some(Ordering::Equal) => None,
                o => o,
            },
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Exact(v) => write!(f, "{v}"),
            Quantity::Approx(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum QuantityJson {
    Decimal(String),
    Approx { approx: String, level: u32, x: f64 },
}

impl Serialize for Quantity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Quantity::Exact(v) => QuantityJson::Decimal(v.to_str_radix(10)),
            Quantity::Approx(m) => QuantityJson::Approx { approx: m.to_string(), level: m.level, x: m.x },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quantity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match QuantityJson::deserialize(d)? {
            QuantityJson::Decimal(s) => BigUint::parse_bytes(s.as_bytes(), 10)
                .map(Quantity::Exact)
                .ok_or_else(|| serde::de::Error::custom(format!("not a decimal integer: {s}"))),
            QuantityJson::Approx { level, x, .. } => Ok(Quantity::Approx(Magnitude { level, x })),
        }
    }
}
