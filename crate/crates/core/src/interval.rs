use std::fmt;

use crate::rational::Rational;

/// Closed interval `[lower, upper]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lower: Rational,
    pub upper: Rational,
}

impl Interval {
    pub fn new(lower: Rational, upper: Rational) -> Self {
        debug_assert!(lower <= upper, "interval bounds out of order");
        Interval { lower, upper }
    }

    pub fn length(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lower <= other.lower && other.upper <= self.upper
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}
