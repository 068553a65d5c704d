//! Non-negative integers that may only be known from below.

use std::cmp::Ordering;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

/// A non-negative integer that is either known exactly or only bounded
/// from below.
///
/// Truncated computations (a residue known modulo `p^K`, a series known
/// modulo `t^D`) cannot certify vanishing; they report `AtLeast(K)` or
/// `AtLeast(D)` instead of infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtInt {
    Exact(u64),
    AtLeast(u64),
}

impl ExtInt {
    pub fn is_exact(self) -> bool {
        matches!(self, ExtInt::Exact(_))
    }

    pub fn exact(self) -> Option<u64> {
        match self {
            ExtInt::Exact(v) => Some(v),
            ExtInt::AtLeast(_) => None,
        }
    }

    /// The exact value, or the lower bound.
    pub fn floor(self) -> u64 {
        match self {
            ExtInt::Exact(v) | ExtInt::AtLeast(v) => v,
        }
    }

    /// Adds a known quantity, keeping the bound kind.
    pub fn offset(self, by: u64) -> ExtInt {
        match self {
            ExtInt::Exact(v) => ExtInt::Exact(v + by),
            ExtInt::AtLeast(v) => ExtInt::AtLeast(v + by),
        }
    }
}

impl std::ops::Add for ExtInt {
    type Output = ExtInt;

    fn add(self, rhs: ExtInt) -> ExtInt {
        match (self, rhs) {
            (ExtInt::Exact(a), ExtInt::Exact(b)) => ExtInt::Exact(a + b),
            (a, b) => ExtInt::AtLeast(a.floor() + b.floor()),
        }
    }
}

/// Orders by value; at equal value an exact entry sorts before a bound.
impl Ord for ExtInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.floor()
            .cmp(&other.floor())
            .then_with(|| other.is_exact().cmp(&self.is_exact()))
    }
}

impl PartialOrd for ExtInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::Exact(v) => write!(f, "{v}"),
            ExtInt::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

/// Exact values serialize as plain numbers, bounds as `{"lower_bound": n}`.
impl Serialize for ExtInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtInt::Exact(v) => serializer.serialize_u64(*v),
            ExtInt::AtLeast(v) => {
                let mut map = serializer.serialize_map(Some(1))?;
                map.serialize_entry("lower_bound", v)?;
                map.end()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_puts_exact_first_on_ties() {
        let mut v = vec![
            ExtInt::AtLeast(3),
            ExtInt::Exact(5),
            ExtInt::Exact(3),
            ExtInt::Exact(1),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                ExtInt::Exact(1),
                ExtInt::Exact(3),
                ExtInt::AtLeast(3),
                ExtInt::Exact(5)
            ]
        );
    }

    #[test]
    fn serializes_bounds_as_objects() {
        assert_eq!(serde_json::to_string(&ExtInt::Exact(4)).unwrap(), "4");
        assert_eq!(
            serde_json::to_string(&ExtInt::AtLeast(10)).unwrap(),
            r#"{"lower_bound":10}"#
        );
    }

    #[test]
    fn sum_degrades_to_bound() {
        assert_eq!(ExtInt::Exact(2) + ExtInt::Exact(3), ExtInt::Exact(5));
        assert_eq!(ExtInt::Exact(2) + ExtInt::AtLeast(3), ExtInt::AtLeast(5));
    }
}
