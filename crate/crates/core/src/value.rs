//! Typed scalar values exchanged between federates and stored as attributes.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::Real;

/// Wire-level data type of a federate variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataType {
    Real,
    Integer,
    Boolean,
    String,
}

impl fmt::Display for DataType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DataType::Real => "real",
            DataType::Integer => "integer",
            DataType::Boolean => "boolean",
            DataType::String => "string",
        };
        f.write_str(s)
    }
}

/// A scalar value. JSON representation uses the native JSON type.
///
/// Variant order matters for deserialization: booleans and integers must be
/// tried before reals so that `true` and `1` keep their type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarValue {
    Boolean(bool),
    Integer(i64),
    Real(Real),
    String(String),
}

impl ScalarValue {
    pub fn data_type(&self) -> DataType {
        match self {
            ScalarValue::Real(_) => DataType::Real,
            ScalarValue::Integer(_) => DataType::Integer,
            ScalarValue::Boolean(_) => DataType::Boolean,
            ScalarValue::String(_) => DataType::String,
        }
    }

    /// Numeric view: reals as-is, integers widened. `None` for the rest.
    pub fn as_real(&self) -> Option<Real> {
        match self {
            ScalarValue::Real(v) => Some(*v),
            ScalarValue::Integer(v) => Some(*v as Real),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<i64> {
        match self {
            ScalarValue::Integer(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_boolean(&self) -> Option<bool> {
        match self {
            ScalarValue::Boolean(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            ScalarValue::String(s) => Some(s),
            _ => None,
        }
    }

    /// Whether `self` can be assigned to a variable declared with `ty`.
    /// Integers are accepted where reals are expected.
    pub fn matches(&self, ty: DataType) -> bool {
        self.data_type() == ty || (ty == DataType::Real && self.data_type() == DataType::Integer)
    }

    /// Absolute change between two values, used for loop convergence checks.
    /// Non-numeric values contribute zero when equal and infinity otherwise,
    /// so a flapping discrete signal can never be accepted as converged.
    pub fn residual_to(&self, other: &ScalarValue) -> Real {
        match (self.as_real(), other.as_real()) {
            (Some(a), Some(b)) => (a - b).abs(),
            _ => {
                if self == other {
                    0.0
                } else {
                    Real::INFINITY
                }
            }
        }
    }

    /// Default value for a data type, used when no start value is declared.
    pub fn default_for(ty: DataType) -> ScalarValue {
        match ty {
            DataType::Real => ScalarValue::Real(0.0),
            DataType::Integer => ScalarValue::Integer(0),
            DataType::Boolean => ScalarValue::Boolean(false),
            DataType::String => ScalarValue::String(String::new()),
        }
    }
}

impl fmt::Display for ScalarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarValue::Real(v) => write!(f, "{v}"),
            ScalarValue::Integer(v) => write!(f, "{v}"),
            ScalarValue::Boolean(v) => write!(f, "{v}"),
            ScalarValue::String(v) => f.write_str(v),
        }
    }
}

impl From<Real> for ScalarValue {
    fn from(v: Real) -> Self {
        ScalarValue::Real(v)
    }
}

impl From<i64> for ScalarValue {
    fn from(v: i64) -> Self {
        ScalarValue::Integer(v)
    }
}

impl From<bool> for ScalarValue {
    fn from(v: bool) -> Self {
        ScalarValue::Boolean(v)
    }
}

impl From<&str> for ScalarValue {
    fn from(v: &str) -> Self {
        ScalarValue::String(v.to_string())
    }
}
