use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ring::LatticeInt;
use super::SymmetryOrder;
use crate::error::{Error, Result};

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Orientation of the order-3 series; orders 4 and 6 only use `Positive`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleSign {
    Positive,
    Negative,
}

/// Exact tangent `num/den`, optionally times `√3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TanValue {
    pub num: i64,
    pub den: i64,
    pub sqrt3: bool,
}

impl TanValue {
    fn new(num: i64, den: i64, sqrt3: bool) -> Self {
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        TanValue {
            num: s * num / g,
            den: s * den / g,
            sqrt3,
        }
    }

    pub fn to_f64(self) -> f64 {
        let r = self.num as f64 / self.den as f64;
        if self.sqrt3 {
            r * 3f64.sqrt()
        } else {
            r
        }
    }
}

impl fmt::Display for TanValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.sqrt3 {
            return write!(f, "{}/{}", self.num, self.den);
        }
        match self.num {
            1 => write!(f, "√3/{}", self.den),
            -1 => write!(f, "-√3/{}", self.den),
            k => write!(f, "{k}√3/{}", self.den),
        }
    }
}

/// Rotation with rational entries, stored as the ring element `num/den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactRotation {
    pub num: LatticeInt,
    pub den: i64,
}

impl ExactRotation {
    /// Image of a lattice vector, when it is again a lattice vector.
    pub fn apply(&self, v: LatticeInt) -> Option<LatticeInt> {
        let p = self.num.mul(v);
        (p.a % self.den == 0 && p.b % self.den == 0).then(|| LatticeInt {
            a: p.a / self.den,
            b: p.b / self.den,
            ..p
        })
    }

    pub fn cos_sin(&self) -> (f64, f64) {
        let v = self.num.to_vec();
        (v.x / self.den as f64, v.y / self.den as f64)
    }
}

/// A commensurate rotation angle, authoritative as the integer pair `(m, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagicAngle {
    pub m: i64,
    pub n: i64,
    pub m0: i64,
    pub n0: i64,
    pub symmetry: SymmetryOrder,
    pub sign: AngleSign,
    pub tan_value: TanValue,
    pub angle_radians: f64,
}

/// Reduced pair `(m0, n0)` governing the minimal period and the
/// equivalence-lattice step.
pub fn reduce_pair(m: i64, n: i64, symmetry: SymmetryOrder) -> Result<(i64, i64)> {
    if !(m > n && n >= 0) {
        return Err(Error::InvalidInput(format!("need m > n >= 0, got ({m}, {n})")));
    }
    if gcd(m, n) != 1 {
        return Err(Error::NotCoprime { m, n });
    }
    Ok(if symmetry.is_square() {
        if m % 2 != 0 && n % 2 != 0 {
            ((m + n) / 2, (m - n) / 2)
        } else {
            (m, n)
        }
    } else if (m - n) % 3 == 0 {
        ((2 * n + m) / 3, (m - n) / 3)
    } else {
        (m, n)
    })
}

impl MagicAngle {
    pub fn new(symmetry: SymmetryOrder, m: i64, n: i64, sign: AngleSign) -> Result<Self> {
        if sign == AngleSign::Negative && symmetry != SymmetryOrder::Three {
            return Err(Error::InvalidInput(
                "the negative series exists only for order-3 symmetry".into(),
            ));
        }
        // n = 0 would give ±π/3, which lies on the boundary of the
        // order-3 range; every admissible angle needs n ≥ 1.
        if n < 1 {
            return Err(Error::InvalidInput(format!("need n >= 1, got n = {n}")));
        }
        let (m0, n0) = reduce_pair(m, n, symmetry)?;
        let tan_value = if symmetry.is_square() {
            TanValue::new(m * m - n * n, 2 * m * n, false)
        } else {
            TanValue::new(m * m - n * n, m * m + n * n + 4 * m * n, true)
        };
        let mut angle = Self {
            m,
            n,
            m0,
            n0,
            symmetry,
            sign,
            tan_value,
            angle_radians: 0.0,
        };
        let (c, s) = angle.exact_rotation().cos_sin();
        angle.angle_radians = s.atan2(c);
        if sign == AngleSign::Negative {
            angle.tan_value.num = -angle.tan_value.num;
        }
        Ok(angle)
    }

    pub fn positive(symmetry: SymmetryOrder, m: i64, n: i64) -> Result<Self> {
        Self::new(symmetry, m, n, AngleSign::Positive)
    }

    /// `e_{m,n}` as a ring element.
    pub fn source(&self) -> LatticeInt {
        LatticeInt::new(self.symmetry, self.m, self.n)
    }

    /// `e_{n,m}` as a ring element.
    pub fn target(&self) -> LatticeInt {
        LatticeInt::new(self.symmetry, self.n, self.m)
    }

    /// Whether the period pair built from `(m, n)` is not minimal.
    pub fn is_reduced(&self) -> bool {
        (self.m0, self.n0) != (self.m, self.n)
    }

    /// Common factor of source and target: `1`, `1+i` or `1+ω`.
    pub fn common_factor(&self) -> LatticeInt {
        if self.is_reduced() {
            LatticeInt::new(self.symmetry, 1, 1)
        } else {
            LatticeInt::new(self.symmetry, 1, 0)
        }
    }

    /// `m0² + n0²` (square) or `m0² + n0² + m0·n0` (triangular).
    pub fn reduced_norm(&self) -> i64 {
        self.symmetry.norm_sq([self.m0, self.n0])
    }

    /// The rotation as a rational ring element; maps `e_{m,n}` to `e_{n,m}`
    /// (positive series) or `e_{n,m}` to `e_{m,n}` (negative series).
    pub fn exact_rotation(&self) -> ExactRotation {
        let (from, to) = match self.sign {
            AngleSign::Positive => (self.source(), self.target()),
            AngleSign::Negative => (self.target(), self.source()),
        };
        let num = to.mul(from.conj());
        let den = from.norm();
        let g = gcd(gcd(num.a, num.b), den).max(1);
        ExactRotation {
            num: LatticeInt {
                a: num.a / g,
                b: num.b / g,
                ..num
            },
            den: den / g,
        }
    }

    fn ratio_cmp(&self, other: &Self) -> Ordering {
        (self.m as i128 * other.n as i128).cmp(&(other.m as i128 * self.n as i128))
    }
}

impl Eq for MagicAngle {}

impl PartialOrd for MagicAngle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by angle, exactly: the tangent is increasing in `m/n`.
impl Ord for MagicAngle {
    fn cmp(&self, other: &Self) -> Ordering {
        use AngleSign::*;
        match (self.sign, other.sign) {
            (Negative, Positive) => Ordering::Less,
            (Positive, Negative) => Ordering::Greater,
            (Positive, Positive) => self.ratio_cmp(other),
            (Negative, Negative) => other.ratio_cmp(self),
        }
    }
}

/// Every magic angle with `m ≤ max_m`, sorted by angle.
pub fn enumerate_magic_angles(symmetry: SymmetryOrder, max_m: i64) -> Vec<MagicAngle> {
    let mut out = Vec::new();
    for m in 2..=max_m {
        for n in 1..m {
            if gcd(m, n) != 1 {
                continue;
            }
            out.push(MagicAngle::positive(symmetry, m, n).expect("valid pair"));
            if symmetry == SymmetryOrder::Three {
                out.push(MagicAngle::new(symmetry, m, n, AngleSign::Negative).expect("valid pair"));
            }
        }
    }
    out.sort();
    out
}
