//! Signed permutations, type-D descents, and the saturated chain attached to
//! an even signed permutation.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::Chain;
use crate::error::{Error, Result};
use crate::signvec::{full_mask, FlipSet, SignVector, MAX_N};

/// A signed permutation of `[n]` in window notation.
///
/// The pair view `(word, X)` is the absolute-value word together with the
/// set of values carried with a negative sign.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignedPerm {
    window: Vec<i32>,
}

impl SignedPerm {
    pub fn new(window: Vec<i32>) -> Result<Self> {
        let n = window.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        if n > MAX_N {
            return Err(Error::TooLong(n));
        }
        let mut seen = 0u64;
        for &a in &window {
            if a == 0 {
                return Err(Error::Window("zero entry".into()));
            }
            let v = a.unsigned_abs() as usize;
            if v > n {
                return Err(Error::Window(format!("entry {a} out of range for n = {n}")));
            }
            if seen & (1 << v) != 0 {
                return Err(Error::Window(format!("repeated absolute value {v}")));
            }
            seen |= 1 << v;
        }
        Ok(SignedPerm { window })
    }

    pub fn identity(n: usize) -> Self {
        SignedPerm { window: (1..=n as i32).collect() }
    }

    /// Builds `(word, X)`: `word` is an ordinary permutation in one-line
    /// notation, `negatives` the values that receive a minus sign.
    pub fn from_pair(word: &[usize], negatives: &[usize]) -> Result<Self> {
        let window = word
            .iter()
            .map(|&v| if negatives.contains(&v) { -(v as i32) } else { v as i32 })
            .collect();
        Self::new(window)
    }

    pub(crate) fn from_word_mask(word: &[u8], neg: u32) -> Self {
        let window = word
            .iter()
            .map(|&v| {
                let v = v as i32;
                if neg & (1 << (v - 1)) != 0 {
                    -v
                } else {
                    v
                }
            })
            .collect();
        SignedPerm { window }
    }

    pub fn n(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[i32] {
        &self.window
    }

    pub fn abs_word(&self) -> Vec<usize> {
        self.window.iter().map(|a| a.unsigned_abs() as usize).collect()
    }

    /// The set `X` of absolute values appearing with a negative sign.
    pub fn negatives(&self) -> FlipSet {
        FlipSet::from_positions(
            &self
                .window
                .iter()
                .filter(|&&a| a < 0)
                .map(|a| a.unsigned_abs() as usize)
                .collect::<Vec<_>>(),
        )
    }

    pub fn neg_count(&self) -> usize {
        self.window.iter().filter(|&&a| a < 0).count()
    }

    pub fn is_even_signed(&self) -> bool {
        self.neg_count() % 2 == 0
    }

    pub fn descent_data(&self) -> DescentData {
        DescentData::of_window(&self.window)
    }

    pub fn des(&self) -> usize {
        self.descent_data().des
    }

    /// Compact rendering with a combining overline on negative letters,
    /// e.g. `2̄3154̄`. Letters above 9 are separated by spaces.
    pub fn to_barred_string(&self) -> String {
        let sep = if self.n() > 9 { " " } else { "" };
        self.window
            .iter()
            .map(|&a| {
                if a < 0 {
                    format!("{}\u{0304}", -a)
                } else {
                    a.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join(sep)
    }

    fn neg_mask(&self) -> u32 {
        self.negatives().mask()
    }
}

impl Ord for SignedPerm {
    /// Lexicographic on the absolute word, then on the sign set read as a
    /// bit mask (bit `v - 1` for value `v`).
    fn cmp(&self, other: &Self) -> Ordering {
        self.n()
            .cmp(&other.n())
            .then_with(|| self.abs_word().cmp(&other.abs_word()))
            .then_with(|| self.neg_mask().cmp(&other.neg_mask()))
    }
}

impl PartialOrd for SignedPerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, a) in self.window.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for SignedPerm {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim().trim_start_matches('[').trim_end_matches(']');
        if text.trim().is_empty() {
            return Err(Error::Empty);
        }
        let window = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i32>()
                    .map_err(|_| Error::Window(format!("not an integer: {:?}", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(window)
    }
}

impl Serialize for SignedPerm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SignedPerm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Descents of `(0, π(1), ..., π(n))`. Bit `i` of `set` is descent `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct DescentData {
    pub set: u64,
    pub des: usize,
}

impl DescentData {
    pub fn of_window(window: &[i32]) -> Self {
        let mut set = 0u64;
        let mut prev = 0;
        for (i, &a) in window.iter().enumerate() {
            if prev > a {
                set |= 1 << i;
            }
            prev = a;
        }
        DescentData { set, des: set.count_ones() as usize }
    }

    pub fn contains(&self, i: usize) -> bool {
        i < 64 && self.set & (1 << i) != 0
    }

    pub fn positions(&self) -> Vec<usize> {
        (0..64).filter(|&i| self.contains(i)).collect()
    }
}

fn next_permutation(word: &mut [u8]) -> bool {
    let n = word.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && word[i - 1] >= word[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while word[j] <= word[i - 1] {
        j -= 1;
    }
    word.swap(i - 1, j);
    word[i..].reverse();
    true
}

/// Stream over `S^D_{n,m}` in lexicographic order of (absolute word, sign
/// mask). `max_neg = None` streams all of `S^D_n`.
pub struct EvenSignedPerms {
    word: Vec<u8>,
    masks: Vec<u32>,
    next_mask: usize,
    done: bool,
}

impl EvenSignedPerms {
    pub fn new(n: usize, max_neg: Option<usize>) -> Result<Self> {
        if n == 0 || n > 12 {
            return Err(Error::Params { n, m: max_neg.unwrap_or(n) });
        }
        if let Some(m) = max_neg {
            if m > n {
                return Err(Error::Params { n, m });
            }
        }
        let limit = max_neg.unwrap_or(n);
        let masks = (0..=full_mask(n))
            .filter(|x| x.count_ones() % 2 == 0 && x.count_ones() as usize <= limit)
            .collect();
        Ok(EvenSignedPerms {
            word: (1..=n as u8).collect(),
            masks,
            next_mask: 0,
            done: false,
        })
    }
}

impl Iterator for EvenSignedPerms {
    type Item = SignedPerm;

    fn next(&mut self) -> Option<SignedPerm> {
        if self.done {
            return None;
        }
        if self.next_mask == self.masks.len() {
            if !next_permutation(&mut self.word) {
                self.done = true;
                return None;
            }
            self.next_mask = 0;
        }
        let p = SignedPerm::from_word_mask(&self.word, self.masks[self.next_mask]);
        self.next_mask += 1;
        Some(p)
    }
}

/// Every even signed permutation with at most `max_neg` negative entries.
pub fn enumerate_sdn(n: usize, max_neg: Option<usize>) -> Result<EvenSignedPerms> {
    EvenSignedPerms::new(n, max_neg)
}

/// Histogram of `des` over `S^D_{n,m}`, indexed `0..=n`.
pub fn descent_histogram(n: usize, max_neg: Option<usize>) -> Result<Vec<u64>> {
    // validate through the iterator constructor
    EvenSignedPerms::new(n, max_neg)?;
    let limit = max_neg.unwrap_or(n);
    let masks: Vec<u32> = (0..=full_mask(n))
        .filter(|x| x.count_ones() % 2 == 0 && x.count_ones() as usize <= limit)
        .collect();
    // split by leading letter; each worker walks the permutations that start with it
    let hist = (1..=n as u8)
        .into_par_iter()
        .map(|first| {
            let mut hist = vec![0u64; n + 1];
            let mut word: Vec<u8> = std::iter::once(first)
                .chain((1..=n as u8).filter(|&v| v != first))
                .collect();
            let mut signed = vec![0i32; n];
            loop {
                for &mask in &masks {
                    for (slot, &v) in signed.iter_mut().zip(&word) {
                        let v = v as i32;
                        *slot = if mask & (1 << (v - 1)) != 0 { -v } else { v };
                    }
                    hist[DescentData::of_window(&signed).des] += 1;
                }
                if !next_permutation(&mut word[1..]) {
                    break;
                }
            }
            hist
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(hist)
}

/// `D(n, k)` for `k = 0..=n`, by exhaustive descent counting over `S^D_n`.
pub fn eulerian_d(n: usize) -> Result<Vec<u64>> {
    descent_histogram(n, None)
}

/// The saturated chain `C^π`.
///
/// The top is the zero-free vector whose cyclic sign flips are the negated
/// values of `p`. Going down, the support loses `|π(1)|`, then `|π(2)|`,
/// and so on; the bottom element has support `{|π(n)|}`.
pub fn chain_of_perm(p: &SignedPerm) -> Result<Chain> {
    if !p.is_even_signed() {
        return Err(Error::NotEven(p.to_string()));
    }
    let n = p.n();
    let flips = p.neg_mask();
    let (mut neg, mut negative) = (0u32, false);
    for i in 1..n {
        if flips & (1 << i) != 0 {
            negative = !negative;
        }
        if negative {
            neg |= 1 << i;
        }
    }
    let top = SignVector::canonical(n, full_mask(n), neg);
    debug_assert_eq!(top.bar().mask(), flips);
    let mut support = 0u32;
    let vectors = p
        .abs_word()
        .iter()
        .rev()
        .map(|&v| {
            support |= 1 << (v - 1);
            top.restrict(support).expect("nonempty support")
        })
        .collect();
    Ok(Chain::new_unchecked(n, vectors))
}

/// `C_π`: the elements of `C^π` whose weight is `n - i` for a descent `i`.
pub fn bottom_chain(p: &SignedPerm) -> Result<Chain> {
    let full = chain_of_perm(p)?;
    let n = p.n();
    let des = p.descent_data();
    let vectors = full
        .vectors()
        .iter()
        .filter(|v| des.contains(n - v.wt()))
        .copied()
        .collect();
    Ok(Chain::new_unchecked(n, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: &str) -> SignedPerm {
        s.parse().unwrap()
    }

    #[test]
    fn window_parsing() {
        let p = sp("-2,3,4,-1");
        assert_eq!(p.abs_word(), vec![2, 3, 4, 1]);
        assert_eq!(p.negatives().positions(), vec![1, 2]);
        assert_eq!(sp("1,2,3"), SignedPerm::identity(3));
        let q = sp("-2,3,1,5,-4");
        assert_eq!(q.abs_word(), vec![2, 3, 1, 5, 4]);
        assert_eq!(q.negatives().positions(), vec![2, 4]);
        assert_eq!(q, SignedPerm::from_pair(&[2, 3, 1, 5, 4], &[2, 4]).unwrap());
        assert_eq!(q.to_barred_string(), "2\u{304}3154\u{304}");
        assert!("1,1".parse::<SignedPerm>().is_err());
        assert!("1,3".parse::<SignedPerm>().is_err());
        assert!("0,1".parse::<SignedPerm>().is_err());
        assert!("1,x".parse::<SignedPerm>().is_err());
    }

    #[test]
    fn even_signed() {
        assert!(sp("-2,3,4,-1").is_even_signed());
        assert!(SignedPerm::identity(4).is_even_signed());
        assert!(!sp("-1,2,3").is_even_signed());
    }

    #[test]
    fn descents() {
        assert_eq!(sp("-2,3,1,5,-4").descent_data().positions(), vec![0, 2, 4]);
        assert_eq!(SignedPerm::identity(6).des(), 0);
        assert_eq!(sp("-1,-2").descent_data().positions(), vec![0, 1]);
    }

    #[test]
    fn enumeration_order_and_counts() {
        let all: Vec<String> = enumerate_sdn(2, None).unwrap().map(|p| p.to_string()).collect();
        assert_eq!(all, vec!["1,2", "-1,-2", "2,1", "-2,-1"]);
        assert_eq!(enumerate_sdn(3, None).unwrap().count(), 24);
        assert_eq!(enumerate_sdn(2, Some(0)).unwrap().count(), 2);
        assert_eq!(enumerate_sdn(4, Some(2)).unwrap().count(), 24 * 7);
        assert!(enumerate_sdn(2, Some(3)).is_err());
        let v: Vec<SignedPerm> = enumerate_sdn(4, None).unwrap().collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn eulerian_small() {
        assert_eq!(eulerian_d(1).unwrap(), vec![1, 0]);
        assert_eq!(eulerian_d(2).unwrap(), vec![1, 2, 1]);
        assert_eq!(eulerian_d(3).unwrap(), vec![1, 10, 13, 0]);
    }

    #[test]
    fn chain_of_example_perm() {
        let c = chain_of_perm(&sp("-2,3,1,5,-4")).unwrap();
        let text: Vec<String> = c.vectors().iter().map(|v| v.to_string()).collect();
        assert_eq!(text, vec!["000+0", "000++", "+00++", "+0-++", "+--++"]);
        let supports: Vec<u32> = c.vectors().iter().map(|v| v.support()).collect();
        assert_eq!(supports, vec![0b01000, 0b11000, 0b11001, 0b11101, 0b11111]);
        let b = bottom_chain(&sp("-2,3,1,5,-4")).unwrap();
        assert_eq!(b.to_string(), "000+0 < +00++ < +--++");
    }

    #[test]
    fn chain_small_cases() {
        assert_eq!(chain_of_perm(&SignedPerm::identity(2)).unwrap().to_string(), "0+ < ++");
        assert!(bottom_chain(&SignedPerm::identity(4)).unwrap().is_empty());
        let p = sp("-1,-2");
        assert_eq!(bottom_chain(&p).unwrap(), chain_of_perm(&p).unwrap());
        assert!(matches!(chain_of_perm(&sp("-1,2")), Err(Error::NotEven(_))));
    }
}
