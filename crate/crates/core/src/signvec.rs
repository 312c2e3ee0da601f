//! Projective sign vectors.
//!
//! A sign vector of length `n` is stored as two bit masks: `support` marks
//! the nonzero positions and `neg` marks which of those are negative. Bit
//! `i - 1` stands for the 1-indexed position `i`. Every value is kept in its
//! canonical projective form, where the first nonzero entry is `+`, so
//! equality of classes is equality of masks.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_params, Error, Result};

/// Largest supported vector length.
pub const MAX_N: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl Sign {
    pub fn as_char(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Zero => '0',
            Sign::Plus => '+',
        }
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Zero => Sign::Zero,
            Sign::Plus => Sign::Minus,
        }
    }
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// A nonzero sign vector up to global negation.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignVector {
    n: u8,
    support: u32,
    neg: u32,
}

impl SignVector {
    /// Builds the canonical representative from raw masks. `neg` bits
    /// outside `support` are ignored.
    pub fn from_masks(n: usize, support: u32, neg: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if n > MAX_N {
            return Err(Error::TooLong(n));
        }
        let support = support & full_mask(n);
        if support == 0 {
            return Err(Error::AllZero);
        }
        Ok(Self::canonical(n, support, neg & support))
    }

    #[inline]
    pub(crate) fn canonical(n: usize, support: u32, neg: u32) -> Self {
        debug_assert!(support != 0 && neg & !support == 0);
        let low = support & support.wrapping_neg();
        let neg = if neg & low != 0 { neg ^ support } else { neg };
        SignVector { n: n as u8, support, neg }
    }

    pub fn from_signs(entries: &[Sign]) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty);
        }
        if entries.len() > MAX_N {
            return Err(Error::TooLong(entries.len()));
        }
        let (mut support, mut neg) = (0u32, 0u32);
        for (i, s) in entries.iter().enumerate() {
            match s {
                Sign::Plus => support |= 1 << i,
                Sign::Minus => {
                    support |= 1 << i;
                    neg |= 1 << i;
                }
                Sign::Zero => {}
            }
        }
        Self::from_masks(entries.len(), support, neg)
    }

    /// The vector with every position equal to `+`.
    pub fn all_plus(n: usize) -> Result<Self> {
        Self::from_masks(n, full_mask(n), 0)
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn support(&self) -> u32 {
        self.support
    }

    pub fn neg_mask(&self) -> u32 {
        self.neg
    }

    /// Entry at the 1-indexed position `i`.
    pub fn entry(&self, i: usize) -> Sign {
        assert!(i >= 1 && i <= self.len(), "position {i} out of range");
        let bit = 1u32 << (i - 1);
        if self.support & bit == 0 {
            Sign::Zero
        } else if self.neg & bit != 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn entries(&self) -> Vec<Sign> {
        (1..=self.len()).map(|i| self.entry(i)).collect()
    }

    /// Number of nonzero entries.
    pub fn wt(&self) -> usize {
        self.support.count_ones() as usize
    }

    /// Rank in `P_{n,m}`, i.e. `wt - 1`.
    pub fn rank(&self) -> usize {
        self.wt() - 1
    }

    /// Number of sign changes once zeros are deleted.
    pub fn var(&self) -> usize {
        let mut changes = 0;
        let mut last: Option<bool> = None;
        let mut bits = self.support;
        while bits != 0 {
            let b = bits & bits.wrapping_neg();
            let negative = self.neg & b != 0;
            if last.is_some_and(|l| l != negative) {
                changes += 1;
            }
            last = Some(negative);
            bits ^= b;
        }
        changes
    }

    /// Positions of cyclic sign flips: nonzero positions whose nearest
    /// nonzero predecessor, reading indices cyclically, has the other sign.
    pub fn bar(&self) -> FlipSet {
        FlipSet(flip_mask(self.len(), self.support, self.neg))
    }

    /// `self <= other` in the poset: `self` is obtained from `±other` by
    /// zeroing some entries.
    pub fn leq(&self, other: &SignVector) -> bool {
        if self.n != other.n || self.support & !other.support != 0 {
            return false;
        }
        let restricted = other.neg & self.support;
        restricted == self.neg || restricted == self.neg ^ self.support
    }

    /// Strict order.
    pub fn lt(&self, other: &SignVector) -> bool {
        self.support != other.support && self.leq(other)
    }

    /// Zeroes every position outside `mask`; `None` if nothing remains.
    pub fn restrict(&self, mask: u32) -> Option<SignVector> {
        let support = self.support & mask;
        (support != 0).then(|| Self::canonical(self.len(), support, self.neg & support))
    }

    fn code(&self, i: usize) -> u8 {
        // text order: '+' < '-' < '0'
        match self.entry(i) {
            Sign::Plus => 0,
            Sign::Minus => 1,
            Sign::Zero => 2,
        }
    }
}

/// Flip positions of an arbitrary (not necessarily canonical) sign vector.
pub fn flip_mask(n: usize, support: u32, neg: u32) -> u32 {
    if support == 0 {
        return 0;
    }
    let top = 31 - support.leading_zeros();
    let mut last_neg = neg & (1 << top) != 0;
    let mut flips = 0u32;
    for i in 0..n {
        let b = 1u32 << i;
        if support & b != 0 {
            let here = neg & b != 0;
            if here != last_neg {
                flips |= b;
            }
            last_neg = here;
        }
    }
    flips
}

/// Cyclic sign flips computed directly on a raw entry sequence.
pub fn bar_of_entries(entries: &[Sign]) -> FlipSet {
    let (mut support, mut neg) = (0u32, 0u32);
    for (i, s) in entries.iter().enumerate() {
        if *s != Sign::Zero {
            support |= 1 << i;
        }
        if *s == Sign::Minus {
            neg |= 1 << i;
        }
    }
    FlipSet(flip_mask(entries.len(), support, neg))
}

impl Ord for SignVector {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.len().min(other.len());
        for i in 1..=n {
            match self.code(i).cmp(&other.code(i)) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.len().cmp(&other.len())
    }
}

impl PartialOrd for SignVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.len() {
            write!(f, "{}", self.entry(i).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignVector({self})")
    }
}

impl FromStr for SignVector {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Empty);
        }
        let signs = text
            .chars()
            .enumerate()
            .map(|(pos, ch)| match ch {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                '0' => Ok(Sign::Zero),
                _ => Err(Error::IllegalChar { ch, pos: pos + 1 }),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_signs(&signs)
    }
}

impl Serialize for SignVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SignVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A set of 1-indexed positions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct FlipSet(u32);

impl FlipSet {
    pub fn from_positions(positions: &[usize]) -> Self {
        FlipSet(positions.iter().fold(0, |acc, &p| acc | 1 << (p - 1)))
    }

    pub fn mask(&self) -> u32 {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, position: usize) -> bool {
        (1..=32).contains(&position) && self.0 & (1 << (position - 1)) != 0
    }

    pub fn positions(&self) -> Vec<usize> {
        (0..32).filter(|i| self.0 & (1 << i) != 0).map(|i| i + 1).collect()
    }
}

impl fmt::Debug for FlipSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.positions()).finish()
    }
}

/// All elements of `P_{n,m}`, sorted by their canonical text.
pub fn enumerate_pv(n: usize, m: usize) -> Result<Vec<SignVector>> {
    check_params(n, m)?;
    if n > 20 {
        return Err(Error::Params { n, m });
    }
    let mut out = Vec::new();
    for support in 1..=full_mask(n) {
        let low = support & support.wrapping_neg();
        let rest = support ^ low;
        // walk every submask of `rest` as the negative set
        let mut neg = rest;
        loop {
            let v = SignVector::canonical(n, support, neg);
            if v.var() <= m {
                out.push(v);
            }
            if neg == 0 {
                break;
            }
            neg = (neg - 1) & rest;
        }
    }
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(s: &str) -> SignVector {
        s.parse().unwrap()
    }

    #[test]
    fn parse_canonicalizes() {
        assert_eq!(sv("0+-").to_string(), "0+-");
        assert_eq!(sv("0-+").to_string(), "0+-");
        assert_eq!("000".parse::<SignVector>(), Err(Error::AllZero));
        assert_eq!("".parse::<SignVector>(), Err(Error::Empty));
        assert_eq!(
            "+x-".parse::<SignVector>(),
            Err(Error::IllegalChar { ch: 'x', pos: 2 })
        );
        assert!(matches!(
            "+".repeat(33).parse::<SignVector>(),
            Err(Error::TooLong(33))
        ));
    }

    #[test]
    fn var_and_wt() {
        assert_eq!(sv("+-0-+").var(), 2);
        assert_eq!(sv("+++").var(), 0);
        assert_eq!(sv("+--++").var(), 2);
        assert_eq!(sv("0+0-").wt(), 2);
        assert_eq!(sv("+--++").wt(), 5);
        assert_eq!(sv("000+0").wt(), 1);
    }

    #[test]
    fn bar_examples() {
        assert_eq!(sv("0+--0+-").bar().positions(), vec![2, 3, 6, 7]);
        assert!(sv("+++").bar().is_empty());
        assert_eq!(sv("+--++").bar().positions(), vec![2, 4]);
        assert_eq!(sv("0+---+-++").bar().positions(), vec![3, 6, 7, 8]);
        assert_eq!(sv("0+---+-+-").bar().positions(), vec![2, 3, 6, 7, 8, 9]);
    }

    #[test]
    fn leq_examples() {
        assert!(sv("0+0-").leq(&sv("+++-")));
        assert!(sv("0+0-").leq(&sv("+--+")));
        assert!(!sv("+0").leq(&sv("0+")));
        assert!(!sv("+-").leq(&sv("++")));
        assert!(sv("++").leq(&sv("++")));
        assert!(!sv("++").lt(&sv("++")));
    }

    #[test]
    fn enumerate_small() {
        let p21: Vec<String> = enumerate_pv(2, 1).unwrap().iter().map(|v| v.to_string()).collect();
        assert_eq!(p21, vec!["++", "+-", "+0", "0+"]);
        assert_eq!(enumerate_pv(1, 0).unwrap().len(), 1);
        assert_eq!(enumerate_pv(3, 2).unwrap().len(), 13);
        assert!(enumerate_pv(3, 3).is_err());
        assert!(enumerate_pv(0, 0).is_err());
    }

    #[test]
    fn restrict_recanonicalizes() {
        let top = sv("+--++");
        assert_eq!(top.restrict(0b11110).unwrap().to_string(), "0++--");
        assert_eq!(top.restrict(0), None);
    }
}
