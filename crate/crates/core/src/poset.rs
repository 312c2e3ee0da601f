//! The ranked poset `P_{n,m}` with its Hasse diagram.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::Result;
use crate::signvec::{enumerate_pv, SignVector};

/// `P_{n,m}` with elements indexed in canonical text order.
#[derive(Clone, Debug)]
pub struct RankedPoset {
    n: usize,
    m: usize,
    elements: Vec<SignVector>,
    index: HashMap<SignVector, u32>,
    covers: Vec<Vec<u32>>,
    cocovers: Vec<Vec<u32>>,
    by_rank: Vec<Vec<u32>>,
}

/// A closed interval `[bottom, top]` of a [`RankedPoset`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub bottom: u32,
    pub top: u32,
    pub members: Vec<u32>,
}

impl RankedPoset {
    pub fn build(n: usize, m: usize) -> Result<Self> {
        let elements = enumerate_pv(n, m)?;
        let index: HashMap<SignVector, u32> =
            elements.iter().enumerate().map(|(i, v)| (*v, i as u32)).collect();
        let mut by_rank = vec![Vec::new(); n];
        for (i, v) in elements.iter().enumerate() {
            by_rank[v.rank()].push(i as u32);
        }
        let mut covers = vec![Vec::new(); elements.len()];
        let mut cocovers = vec![Vec::new(); elements.len()];
        for r in 0..n.saturating_sub(1) {
            for &lo in &by_rank[r] {
                for &hi in &by_rank[r + 1] {
                    if elements[lo as usize].leq(&elements[hi as usize]) {
                        covers[lo as usize].push(hi);
                        cocovers[hi as usize].push(lo);
                    }
                }
            }
        }
        Ok(RankedPoset { n, m, elements, index, covers, cocovers, by_rank })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[SignVector] {
        &self.elements
    }

    pub fn element(&self, id: u32) -> SignVector {
        self.elements[id as usize]
    }

    pub fn id_of(&self, v: &SignVector) -> Option<u32> {
        self.index.get(v).copied()
    }

    pub fn rank(&self, id: u32) -> usize {
        self.elements[id as usize].rank()
    }

    pub fn rank_level(&self, r: usize) -> &[u32] {
        &self.by_rank[r]
    }

    /// Elements covering `id`.
    pub fn covers(&self, id: u32) -> &[u32] {
        &self.covers[id as usize]
    }

    /// Elements covered by `id`.
    pub fn cocovers(&self, id: u32) -> &[u32] {
        &self.cocovers[id as usize]
    }

    pub fn leq(&self, a: u32, b: u32) -> bool {
        self.element(a).leq(&self.element(b))
    }

    /// Order relation rebuilt from cover relations alone, as a row of
    /// up-sets per element.
    pub fn transitive_closure(&self) -> Vec<Vec<bool>> {
        let len = self.len();
        let mut up = vec![vec![false; len]; len];
        for r in (0..self.n).rev() {
            for &x in &self.by_rank[r] {
                let x = x as usize;
                up[x][x] = true;
                for &y in &self.covers[x] {
                    let row = up[y as usize].clone();
                    up[x].iter_mut().zip(row).for_each(|(a, b)| *a |= b);
                }
            }
        }
        up
    }

    pub fn interval(&self, bottom: u32, top: u32) -> Option<Interval> {
        if !self.leq(bottom, top) {
            return None;
        }
        let members = (0..self.len() as u32)
            .filter(|&z| self.leq(bottom, z) && self.leq(z, top))
            .collect();
        Some(Interval { bottom, top, members })
    }

    /// Number of maximal chains, counted bottom-up through the covers.
    pub fn count_maximal_chains(&self) -> u128 {
        let mut ways = vec![0u128; self.len()];
        for r in 0..self.n {
            for &x in &self.by_rank[r] {
                ways[x as usize] = if r == 0 {
                    1
                } else {
                    self.cocovers(x).iter().map(|&y| ways[y as usize]).sum()
                };
            }
        }
        self.covers
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_empty())
            .map(|(x, _)| ways[x])
            .sum()
    }

    /// Hasse diagram in Graphviz DOT, bottom rank first.
    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph P_{}_{} {{\n  rankdir=BT;\n", self.n, self.m);
        for (i, v) in self.elements.iter().enumerate() {
            let _ = writeln!(out, "  v{i} [label=\"{v}\"];");
        }
        for (i, cs) in self.covers.iter().enumerate() {
            for c in cs {
                let _ = writeln!(out, "  v{i} -> v{c};");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Whether `members` is exactly the Boolean interval of all sets `G` with
/// `bottom ⊆ G ⊆ top`. Sets are slices without repeated elements.
pub fn is_boolean<T: PartialEq>(bottom: &[T], top: &[T], members: &[&[T]]) -> bool {
    if !is_subset(bottom, top) {
        return false;
    }
    let free = top.len() - bottom.len();
    if free >= 64 || members.len() as u64 != 1u64 << free {
        return false;
    }
    let mut seen = vec![false; members.len()];
    let free_elems: Vec<&T> = top.iter().filter(|t| !bottom.contains(t)).collect();
    for g in members {
        if !is_subset(bottom, g) || !is_subset(g, top) {
            return false;
        }
        // index of g among the subsets of the free elements
        let code = free_elems
            .iter()
            .enumerate()
            .filter(|(_, e)| g.contains(e))
            .fold(0usize, |acc, (k, _)| acc | 1 << k);
        if std::mem::replace(&mut seen[code], true) {
            return false;
        }
    }
    true
}

fn is_subset<T: PartialEq>(small: &[T], big: &[T]) -> bool {
    small.iter().all(|s| big.contains(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hasse_of_p21() {
        let p = RankedPoset::build(2, 1).unwrap();
        let id = |s: &str| p.id_of(&s.parse().unwrap()).unwrap();
        for lo in ["+0", "0+"] {
            let mut up = p.covers(id(lo)).to_vec();
            up.sort();
            assert_eq!(up, vec![id("++"), id("+-")]);
        }
        assert!(p.covers(id("++")).is_empty());
        assert_eq!(p.count_maximal_chains(), 4);
    }

    #[test]
    fn sizes() {
        assert_eq!(RankedPoset::build(1, 0).unwrap().len(), 1);
        let p = RankedPoset::build(3, 2).unwrap();
        assert_eq!(p.len(), 13);
        assert_eq!(
            (p.rank_level(0).len(), p.rank_level(1).len(), p.rank_level(2).len()),
            (3, 6, 4)
        );
    }

    #[test]
    fn interval_members() {
        let p = RankedPoset::build(3, 2).unwrap();
        let id = |s: &str| p.id_of(&s.parse().unwrap()).unwrap();
        let iv = p.interval(id("0+0"), id("+++")).unwrap();
        assert_eq!(iv.members.len(), 4);
        assert!(p.interval(id("+++"), id("0+0")).is_none());
    }

    #[test]
    fn boolean_checks() {
        let top = [1, 2, 3];
        let subsets: Vec<Vec<i32>> = (0..8u32)
            .map(|m| top.iter().enumerate().filter(|(k, _)| m & (1 << k) != 0).map(|(_, v)| *v).collect())
            .collect();
        let refs: Vec<&[i32]> = subsets.iter().map(Vec::as_slice).collect();
        assert!(is_boolean(&[], &top, &refs));
        assert!(!is_boolean(&[], &top, &refs[..7]));
        assert!(is_boolean(&top, &top, &[&top[..]]));
        let dup: Vec<&[i32]> = vec![&[], &[]];
        assert!(!is_boolean(&[], &[1], &dup));
    }
}
