//! Exact half-integer arithmetic for connectivity values.
//!
//! Connectivity of a chain-group is defined as half of an integer and is
//! only guaranteed to be an integer in the Lagrangian case, so width
//! machinery carries the doubled value around exactly.

use serde::{Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Sub};

/// An exact multiple of 1/2.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Half {
    twice: i64,
}

impl Half {
    pub const ZERO: Half = Half { twice: 0 };

    pub fn from_int(n: i64) -> Half {
        Half { twice: 2 * n }
    }

    /// Build from the doubled value.
    pub fn from_twice(twice: i64) -> Half {
        Half { twice }
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn integer(self) -> Option<i64> {
        if self.is_integer() {
            Some(self.twice / 2)
        } else {
            None
        }
    }
}

impl Add for Half {
    type Output = Half;
    fn add(self, rhs: Half) -> Half {
        Half {
            twice: self.twice + rhs.twice,
        }
    }
}

impl Sub for Half {
    type Output = Half;
    fn sub(self, rhs: Half) -> Half {
        Half {
            twice: self.twice - rhs.twice,
        }
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.integer() {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "{}/2", self.twice),
        }
    }
}

impl Serialize for Half {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.integer() {
            Some(n) => s.serialize_i64(n),
            None => s.serialize_f64(self.twice as f64 / 2.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_and_display() {
        let one = Half::from_int(1);
        let half = Half::from_twice(1);
        let three_halves = Half::from_twice(3);
        assert!(half < one && one < three_halves);
        assert_eq!(one.to_string(), "1");
        assert_eq!(three_halves.to_string(), "3/2");
        assert_eq!(half + half, one);
        assert_eq!((three_halves - half).integer(), Some(1));
        assert!(!three_halves.is_integer());
    }
}
