use std::fmt;

use super::LatticeError;
use super::int::{Int, gcd_all};

/// A point of Z^r. The rank is the length, which is never zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector(Vec<Int>);

impl LatticeVector {
    pub fn new(coords: Vec<Int>) -> Result<Self, LatticeError> {
        if coords.is_empty() {
            return Err(LatticeError::EmptyVector);
        }
        Ok(Self(coords))
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        assert!(!coords.is_empty(), "lattice vectors have positive rank");
        Self(coords.iter().map(|&x| Int::from(x)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        assert!(rank > 0, "lattice vectors have positive rank");
        Self(vec![Int::ZERO; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = Int::ONE;
        v
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<Int>) -> Self {
        debug_assert!(!coords.is_empty());
        Self(coords)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Int] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Int> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    /// gcd of the entries; zero for the zero vector.
    pub fn content(&self) -> Int {
        gcd_all(&self.0)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// The primitive vector on the same ray. The zero vector maps to itself.
    pub fn primitive_part(&self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        Self(self.0.iter().map(|x| x / &g).collect())
    }

    pub fn dot(&self, other: &[Int]) -> Int {
        debug_assert_eq!(self.rank(), other.len());
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: &Int) -> Self {
        Self(self.0.iter().map(|x| x * k).collect())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}
