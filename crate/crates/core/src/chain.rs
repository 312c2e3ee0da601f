//! Chains of `P_{n,m}`, which double as faces of the order complex.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signvec::SignVector;

/// A strictly increasing sequence of sign vectors of a common length,
/// listed bottom to top. The empty chain is the empty face.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Chain {
    n: usize,
    vectors: Vec<SignVector>,
}

impl Chain {
    pub fn new(n: usize, vectors: Vec<SignVector>) -> Result<Self> {
        for v in &vectors {
            if v.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: v.len() });
            }
        }
        for pair in vectors.windows(2) {
            if !pair[0].lt(&pair[1]) {
                return Err(Error::Chain(format!("{} is not below {}", pair[0], pair[1])));
            }
        }
        Ok(Chain { n, vectors })
    }

    pub fn empty(n: usize) -> Self {
        Chain { n, vectors: Vec::new() }
    }

    /// Caller guarantees the vectors form a chain of length-`n` vectors.
    pub(crate) fn new_unchecked(n: usize, vectors: Vec<SignVector>) -> Self {
        debug_assert!(vectors.windows(2).all(|p| p[0].lt(&p[1])));
        Chain { n, vectors }
    }

    /// Parses comma-separated sign vectors, bottom first. Input order does
    /// not matter; the vectors are sorted by weight before validation.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut vectors = text
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse::<SignVector>)
            .collect::<Result<Vec<_>>>()?;
        vectors.sort_by_key(|v| v.wt());
        Self::new(n, vectors)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// `len - 1`; the empty face has dimension `-1`.
    pub fn dim(&self) -> isize {
        self.vectors.len() as isize - 1
    }

    pub fn vectors(&self) -> &[SignVector] {
        &self.vectors
    }

    pub fn top(&self) -> Option<&SignVector> {
        self.vectors.last()
    }

    pub fn weights(&self) -> Vec<usize> {
        self.vectors.iter().map(SignVector::wt).collect()
    }

    pub fn max_var(&self) -> usize {
        self.vectors.iter().map(SignVector::var).max().unwrap_or(0)
    }

    /// Removes the element at the 1-indexed position `i`.
    pub fn without(&self, i: usize) -> Result<Chain> {
        self.without_set(&[i])
    }

    /// Removes every element whose 1-indexed position is listed.
    pub fn without_set(&self, positions: &[usize]) -> Result<Chain> {
        let len = self.len();
        if let Some(&index) = positions.iter().find(|&&i| i == 0 || i > len) {
            return Err(Error::IndexOutOfRange { index, len });
        }
        let vectors = self
            .vectors
            .iter()
            .enumerate()
            .filter(|(k, _)| !positions.contains(&(k + 1)))
            .map(|(_, v)| *v)
            .collect();
        Ok(Chain::new_unchecked(self.n, vectors))
    }

    /// Set inclusion of faces.
    pub fn is_subchain_of(&self, other: &Chain) -> bool {
        let mut it = other.vectors.iter();
        self.n == other.n && self.vectors.iter().all(|v| it.any(|w| w == v))
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vectors.is_empty() {
            return write!(f, "()");
        }
        for (k, v) in self.vectors.iter().enumerate() {
            if k > 0 {
                write!(f, " < ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chain[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_validate() {
        let c = Chain::parse(9, "0+-00000+,0+-0-+00+,0+---+-++").unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.weights(), vec![3, 5, 8]);
        assert!(Chain::parse(2, "+0,0+").is_err());
        assert!(Chain::parse(3, "+0").is_err());
        assert!(Chain::parse(2, "").unwrap().is_empty());
    }

    #[test]
    fn removal_and_inclusion() {
        let c = Chain::parse(3, "0+0,0++,+++").unwrap();
        let d = c.without(2).unwrap();
        assert_eq!(d.to_string(), "0+0 < +++");
        assert!(d.is_subchain_of(&c));
        assert!(!c.is_subchain_of(&d));
        assert!(Chain::empty(3).is_subchain_of(&c));
        assert!(matches!(c.without(4), Err(Error::IndexOutOfRange { index: 4, len: 3 })));
        assert!(c.without_set(&[1, 2, 3]).unwrap().is_empty());
    }
}
