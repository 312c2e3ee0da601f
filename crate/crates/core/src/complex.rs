//! The order complex `Δ_{n,m}` of `P_{n,m}`.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::Chain;
use crate::error::{Error, Result};
use crate::poset::RankedPoset;

/// Default cap on the number of enumerated faces.
pub const DEFAULT_FACE_CAP: usize = 5_000_000;

/// A face stored as poset element IDs listed bottom to top.
pub type Face = Box<[u32]>;

#[derive(Clone, Debug)]
pub struct OrderComplex {
    poset: RankedPoset,
    /// `faces_by_dim[k + 1]` holds the `k`-dimensional faces.
    faces_by_dim: Vec<Vec<Face>>,
}

/// Flag counts for one rank set `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagEntry {
    pub flag_f: u64,
    pub flag_h: i64,
}

impl OrderComplex {
    /// Enumerates every chain of `P_{n,m}`, the empty chain included.
    pub fn build(n: usize, m: usize, cap: usize) -> Result<Self> {
        Self::from_poset(RankedPoset::build(n, m)?, cap)
    }

    pub fn from_poset(poset: RankedPoset, cap: usize) -> Result<Self> {
        let len = poset.len();
        let closure = poset.transitive_closure();
        // strict down-sets
        let below: Vec<Vec<u32>> = (0..len)
            .map(|x| (0..len as u32).filter(|&y| y as usize != x && closure[y as usize][x]).collect())
            .collect();
        let count = AtomicUsize::new(1);
        let per_top: Vec<Option<Vec<Face>>> = (0..len as u32)
            .into_par_iter()
            .map(|top| {
                let mut out = Vec::new();
                let mut stack: Vec<Vec<u32>> = vec![vec![top]];
                while let Some(desc) = stack.pop() {
                    let lowest = *desc.last().unwrap() as usize;
                    for &y in below[lowest].iter().rev() {
                        let mut next = desc.clone();
                        next.push(y);
                        stack.push(next);
                    }
                    let mut face = desc;
                    face.reverse();
                    out.push(face.into_boxed_slice());
                    if count.fetch_add(1, Ordering::Relaxed) + 1 > cap {
                        return None;
                    }
                }
                Some(out)
            })
            .collect();
        let total = count.load(Ordering::Relaxed);
        if total > cap || per_top.iter().any(Option::is_none) {
            return Err(Error::CapExceeded { cap, partial: total.min(cap) });
        }
        let mut faces_by_dim: Vec<Vec<Face>> = vec![vec![Vec::new().into_boxed_slice()]];
        for face in per_top.into_iter().flatten().flatten() {
            if faces_by_dim.len() <= face.len() {
                faces_by_dim.resize_with(face.len() + 1, Vec::new);
            }
            faces_by_dim[face.len()].push(face);
        }
        for level in &mut faces_by_dim {
            level.sort_unstable();
        }
        Ok(OrderComplex { poset, faces_by_dim })
    }

    /// Reassembles a complex from stored faces; callers vouch that the
    /// faces are exactly the chains of `poset`.
    pub(crate) fn from_parts(poset: RankedPoset, faces_by_dim: Vec<Vec<Face>>) -> Self {
        OrderComplex { poset, faces_by_dim }
    }

    pub fn n(&self) -> usize {
        self.poset.n()
    }

    pub fn m(&self) -> usize {
        self.poset.m()
    }

    pub fn poset(&self) -> &RankedPoset {
        &self.poset
    }

    /// Dimension of the complex (largest face dimension).
    pub fn dim(&self) -> isize {
        self.faces_by_dim.len() as isize - 2
    }

    /// Faces of dimension `k`, for `k >= -1`.
    pub fn faces(&self, k: isize) -> &[Face] {
        self.faces_by_dim.get((k + 1) as usize).map_or(&[], Vec::as_slice)
    }

    pub fn faces_by_dim(&self) -> &[Vec<Face>] {
        &self.faces_by_dim
    }

    pub fn all_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces_by_dim.iter().flatten()
    }

    pub fn face_count(&self) -> usize {
        self.faces_by_dim.iter().map(Vec::len).sum()
    }

    pub fn facets(&self) -> &[Face] {
        self.faces_by_dim.last().map_or(&[], Vec::as_slice)
    }

    pub fn to_chain(&self, face: &[u32]) -> Chain {
        Chain::new_unchecked(self.n(), face.iter().map(|&id| self.poset.element(id)).collect())
    }

    /// `(f_{-1}, f_0, ..., f_dim)`.
    pub fn f_vector(&self) -> Vec<u64> {
        self.faces_by_dim.iter().map(|l| l.len() as u64).collect()
    }

    pub fn h_vector(&self) -> Vec<i64> {
        let f = self.f_vector();
        let d = f.len() - 1;
        h_vector(&f, d).expect("f-vector length matches")
    }

    pub fn reduced_euler(&self) -> i64 {
        reduced_euler(&self.f_vector())
    }

    /// Flag f- and h-numbers keyed by rank set `S` (bit `r` for rank `r`).
    pub fn flag_vectors(&self) -> BTreeMap<u32, FlagEntry> {
        let ranks = self.n();
        let mut flag_f = vec![0u64; 1 << ranks];
        for face in self.all_faces() {
            let s = face.iter().fold(0usize, |acc, &id| acc | 1 << self.poset.rank(id));
            flag_f[s] += 1;
        }
        let mut out = BTreeMap::new();
        for s in 0..1usize << ranks {
            let mut h = 0i64;
            let mut t = s;
            loop {
                let sign = if (s ^ t).count_ones() % 2 == 0 { 1 } else { -1 };
                h += sign * flag_f[t] as i64;
                if t == 0 {
                    break;
                }
                t = (t - 1) & s;
            }
            out.insert(s as u32, FlagEntry { flag_f: flag_f[s], flag_h: h });
        }
        out
    }
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

pub(crate) fn binom(n: usize, k: usize) -> i64 {
    binomial(n as i64, k as i64)
}

/// `h_k = Σ_{i=0}^{k} (-1)^{k-i} C(d-i, k-i) f_{i-1}` for `k = 0..=d`, where
/// `d` is the number of vertices of a facet and `f = (f_{-1}, ..., f_{d-1})`.
pub fn h_vector(f: &[u64], d: usize) -> Result<Vec<i64>> {
    if f.len() != d + 1 {
        return Err(Error::LengthMismatch { expected: d + 1, got: f.len() });
    }
    let d = d as i64;
    Ok((0..=d)
        .map(|k| {
            (0..=k)
                .map(|i| {
                    let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
                    sign * binomial(d - i, k - i) * f[i as usize] as i64
                })
                .sum()
        })
        .collect())
}

/// `Σ_{i >= -1} (-1)^i f_i`, with `f[0] = f_{-1}`.
pub fn reduced_euler(f: &[u64]) -> i64 {
    f.iter()
        .enumerate()
        .map(|(k, &c)| if k % 2 == 0 { -(c as i64) } else { c as i64 })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_complexes() {
        let k = OrderComplex::build(2, 1, DEFAULT_FACE_CAP).unwrap();
        assert_eq!(k.f_vector(), vec![1, 4, 4]);
        assert_eq!(k.h_vector(), vec![1, 2, 1]);
        assert_eq!(k.reduced_euler(), -1);
        let k = OrderComplex::build(3, 2, DEFAULT_FACE_CAP).unwrap();
        assert_eq!(k.f_vector(), vec![1, 13, 36, 24]);
        assert_eq!(k.reduced_euler(), 0);
        let point = OrderComplex::build(1, 0, DEFAULT_FACE_CAP).unwrap();
        assert_eq!(point.f_vector(), vec![1, 1]);
        assert_eq!(point.reduced_euler(), 0);
        assert_eq!(point.dim(), 0);
    }

    #[test]
    fn h_formula() {
        assert_eq!(h_vector(&[1, 4, 4], 2).unwrap(), vec![1, 2, 1]);
        assert_eq!(h_vector(&[1, 13, 36, 24], 3).unwrap(), vec![1, 10, 13, 0]);
        assert_eq!(h_vector(&[1, 1], 1).unwrap(), vec![1, 0]);
        assert!(h_vector(&[1, 1], 2).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        match OrderComplex::build(3, 2, 20) {
            Err(Error::CapExceeded { cap: 20, partial }) => assert!(partial <= 20),
            other => panic!("expected cap error, got {other:?}"),
        }
        assert!(OrderComplex::build(3, 2, 74).is_ok());
        assert!(OrderComplex::build(3, 2, 73).is_err());
    }

    #[test]
    fn flag_examples() {
        let k = OrderComplex::build(2, 1, DEFAULT_FACE_CAP).unwrap();
        let flag = k.flag_vectors();
        assert_eq!(flag[&0], FlagEntry { flag_f: 1, flag_h: 1 });
        assert_eq!(flag[&0b01].flag_f, 2);
        assert_eq!(flag[&0b11].flag_f, 4);
    }

    #[test]
    fn faces_are_chains() {
        let k = OrderComplex::build(3, 1, DEFAULT_FACE_CAP).unwrap();
        for face in k.all_faces() {
            let c = k.to_chain(face);
            assert!(Chain::new(3, c.vectors().to_vec()).is_ok());
            assert!(c.max_var() <= 1);
        }
    }
}
