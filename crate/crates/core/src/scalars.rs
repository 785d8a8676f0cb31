//! Exact points of `C^x` of the form `q^a * e^{2 pi i t}`.
//!
//! `q` stays symbolic (an indeterminate with `q > 1`); a numeric value only
//! enters through [`QScalar::to_complex`]. The exponent `a` and the turn `t`
//! are rationals, and the turn is always reduced into `[0, 1)`, so structural
//! equality is equality of the underlying complex numbers.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};

pub type Rational = Rational64;

/// A point `q^{q_exp} * e^{2 pi i turn}` of the multiplicative group.
///
/// Ordering is lexicographic on `(q_exp, turn)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QScalar {
    q_exp: Rational,
    turn: Rational,
}

impl QScalar {
    pub fn new(q_exp: Rational, turn: Rational) -> Self {
        QScalar {
            q_exp,
            turn: reduce_turn(turn),
        }
    }

    pub fn one() -> Self {
        QScalar::new(Rational::zero(), Rational::zero())
    }

    /// `q^a` for a rational `a`.
    pub fn q_power(a: Rational) -> Self {
        QScalar::new(a, Rational::zero())
    }

    /// The unit `e^{2 pi i t}`.
    pub fn unit(turn: Rational) -> Self {
        QScalar::new(Rational::zero(), turn)
    }

    pub fn q_exp(&self) -> Rational {
        self.q_exp
    }

    pub fn turn(&self) -> Rational {
        self.turn
    }

    pub fn inv(self) -> QScalar {
        QScalar::new(-self.q_exp, -self.turn)
    }

    /// `z / |z|`: drops the modulus, keeps the angle.
    pub fn unit_part(self) -> QScalar {
        QScalar {
            q_exp: Rational::zero(),
            turn: self.turn,
        }
    }

    /// Multiplication by `q^h`.
    pub fn q_shift(self, h: Rational) -> QScalar {
        QScalar {
            q_exp: self.q_exp + h,
            turn: self.turn,
        }
    }

    pub fn is_unitary(&self) -> bool {
        self.q_exp.is_zero()
    }

    /// Numeric value for a concrete `q > 1`.
    pub fn to_complex(self, q: f64) -> Result<Complex64> {
        if q.is_nan() || q <= 1.0 || !q.is_finite() {
            return Err(invalid(format!(
                "q must be a finite real number > 1, got {q}"
            )));
        }
        let modulus = q.powf(ratio_to_f64(self.q_exp));
        let angle = std::f64::consts::TAU * ratio_to_f64(self.turn);
        Ok(Complex64::from_polar(modulus, angle))
    }
}

impl Default for QScalar {
    fn default() -> Self {
        QScalar::one()
    }
}

impl std::ops::Mul for QScalar {
    type Output = QScalar;

    fn mul(self, rhs: QScalar) -> QScalar {
        QScalar::new(self.q_exp + rhs.q_exp, self.turn + rhs.turn)
    }
}

fn reduce_turn(t: Rational) -> Rational {
    t - t.floor()
}

fn ratio_to_f64(r: Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Formats a rational as a `p/r` string.
pub fn format_ratio(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/r` or a bare integer `p`.
pub fn parse_ratio(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((p, r)) => {
            let p: i64 = p
                .trim()
                .parse()
                .map_err(|_| invalid(format!("bad rational '{s}'")))?;
            let r: i64 = r
                .trim()
                .parse()
                .map_err(|_| invalid(format!("bad rational '{s}'")))?;
            if r == 0 {
                return Err(invalid(format!("zero denominator in '{s}'")));
            }
            Rational::new(p, r)
        }
        None => Rational::from_integer(
            s.parse()
                .map_err(|_| invalid(format!("bad rational '{s}'")))?,
        ),
    };
    Ok(parsed)
}

/// Serde adapter for rationals encoded as `"p/r"` strings.
pub mod ratio_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_ratio(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Str(s) => parse_ratio(&s).map_err(serde::de::Error::custom),
            Raw::Int(i) => Ok(Rational::from_integer(i)),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct QScalarRecord {
    #[serde(with = "ratio_str")]
    q_exp: Rational,
    #[serde(with = "ratio_str", default = "Rational::zero")]
    turn: Rational,
}

impl Serialize for QScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QScalarRecord {
            q_exp: self.q_exp,
            turn: self.turn,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Record(QScalarRecord),
            Compact(String),
        }
        match Raw::deserialize(d)? {
            Raw::Record(r) => Ok(QScalar::new(r.q_exp, r.turn)),
            Raw::Compact(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Compact notation: `1`, `q`, `q^-1`, `q^1/2`, `e(1/4)`, `q^{3/2}*e(1/3)`, `-1`.
impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let modulus = if self.q_exp.is_zero() {
            None
        } else if self.q_exp.is_one() {
            Some("q".to_string())
        } else {
            Some(format!("q^{}", self.q_exp))
        };
        let angle = (!self.turn.is_zero()).then(|| format!("e({})", self.turn));
        match (modulus, angle) {
            (None, None) => write!(f, "1"),
            (Some(m), None) => write!(f, "{m}"),
            (None, Some(a)) => write!(f, "{a}"),
            (Some(m), Some(a)) => write!(f, "{m}*{a}"),
        }
    }
}

impl FromStr for QScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(invalid("empty scalar"));
        }
        let mut acc = QScalar::one();
        for factor in s.split('*') {
            let factor = factor.trim();
            let next = match factor {
                "1" => QScalar::one(),
                "-1" => QScalar::unit(Rational::new(1, 2)),
                "q" => QScalar::q_power(Rational::one()),
                _ => {
                    if let Some(exp) = factor.strip_prefix("q^") {
                        QScalar::q_power(parse_ratio(strip_brackets(exp))?)
                    } else if let Some(t) =
                        factor.strip_prefix("e(").and_then(|t| t.strip_suffix(')'))
                    {
                        QScalar::unit(parse_ratio(t)?)
                    } else {
                        return Err(invalid(format!("cannot parse scalar factor '{factor}'")));
                    }
                }
            };
            acc = acc * next;
        }
        Ok(acc)
    }
}

fn strip_brackets(s: &str) -> &str {
    let s = s.trim();
    s.strip_prefix('{')
        .and_then(|x| x.strip_suffix('}'))
        .or_else(|| s.strip_prefix('(').and_then(|x| x.strip_suffix(')')))
        .unwrap_or(s)
}
