use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// An integer point; ordered lexicographically so point sets are canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntPoint(pub Vec<BigInt>);

impl IntPoint {
    pub fn new(coords: Vec<BigInt>) -> Self {
        IntPoint(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        IntPoint(coords.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        IntPoint(vec![BigInt::zero(); n])
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Indices of the nonzero coordinates.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn support_size(&self) -> usize {
        self.0.iter().filter(|v| !v.is_zero()).count()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|v| !v.is_negative())
    }

    pub fn add(&self, other: &IntPoint) -> IntPoint {
        IntPoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &IntPoint) -> IntPoint {
        IntPoint(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for IntPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_examples() {
        assert!(IntPoint::from_i64(&[0, 0, 0]).support().is_empty());
        assert_eq!(IntPoint::from_i64(&[1, 0, -2]).support(), vec![0, 2]);
        assert_eq!(IntPoint::from_i64(&[1, 1, 1, 1]).support(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn display_and_order() {
        let a = IntPoint::from_i64(&[1, 3, 0]);
        let b = IntPoint::from_i64(&[3, 0, 1]);
        assert!(a < b);
        assert_eq!(a.to_string(), "(1,3,0)");
        assert!(!IntPoint::from_i64(&[1, -1]).is_nonnegative());
    }
}
