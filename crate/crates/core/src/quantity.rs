//! Exact nonnegative-rational resource quantities.

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A rational number used for resource levels, requirements and deltas.
///
/// Integral values serialize as JSON integers, everything else as a
/// `"num/den"` string, so `2` and `"5/2"` are both valid on input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Quantity(pub Rational64);

impl Quantity {
    pub const ZERO: Quantity = Quantity(Rational64::new_raw(0, 1));

    pub fn from_int(value: i64) -> Self {
        Quantity(Rational64::from_integer(value))
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `max(0, self - other)`
    pub fn shortfall_to(self, required: Quantity) -> Quantity {
        let diff = required.0 - self.0;
        if diff.is_negative() {
            Quantity::ZERO
        } else {
            Quantity(diff)
        }
    }
}

impl From<i64> for Quantity {
    fn from(value: i64) -> Self {
        Quantity::from_int(value)
    }
}

impl Add for Quantity {
    type Output = Quantity;
    fn add(self, rhs: Quantity) -> Quantity {
        Quantity(self.0 + rhs.0)
    }
}

impl Sub for Quantity {
    type Output = Quantity;
    fn sub(self, rhs: Quantity) -> Quantity {
        Quantity(self.0 - rhs.0)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid quantity literal `{0}`")]
pub struct QuantityParseError(pub String);

impl FromStr for Quantity {
    type Err = QuantityParseError;

    /// Accepts integers, decimals (`2.5`) and fractions (`5/2`), with an
    /// optional leading sign.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || QuantityParseError(s.to_string());
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        if body.is_empty() {
            return Err(err());
        }
        let value = if let Some((n, d)) = body.split_once('/') {
            let n: i64 = n.parse().map_err(|_| err())?;
            let d: i64 = d.parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            Rational64::new(n, d)
        } else if let Some((int, frac)) = body.split_once('.') {
            if frac.is_empty() && int.is_empty() {
                return Err(err());
            }
            if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(err());
            }
            let digits = format!("{int}{frac}");
            let numer: i64 = digits.parse().map_err(|_| err())?;
            let denom = 10i64.checked_pow(frac.len() as u32).ok_or_else(err)?;
            Rational64::new(numer, denom)
        } else {
            if !body.chars().all(|c| c.is_ascii_digit()) {
                return Err(err());
            }
            Rational64::from_integer(body.parse().map_err(|_| err())?)
        };
        Ok(Quantity(if neg { -value } else { value }))
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            serializer.serialize_i64(*self.0.numer())
        } else {
            serializer.collect_str(self)
        }
    }
}

impl<'de> Deserialize<'de> for Quantity {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(v) => Ok(Quantity::from_int(v)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl schemars::JsonSchema for Quantity {
    fn schema_name() -> String {
        "Quantity".to_string()
    }

    fn json_schema(_gen: &mut schemars::gen::SchemaGenerator) -> schemars::schema::Schema {
        use schemars::schema::{InstanceType, SchemaObject, SingleOrVec, StringValidation};
        SchemaObject {
            instance_type: Some(SingleOrVec::Vec(vec![InstanceType::Integer, InstanceType::String])),
            string: Some(Box::new(StringValidation {
                pattern: Some(r"^-?[0-9]+(/[0-9]+)?$".to_string()),
                ..Default::default()
            })),
            ..Default::default()
        }
        .into()
    }
}
