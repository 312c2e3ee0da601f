//! Reduced rational Betti numbers of an order complex.
//!
//! Boundary maps use the chain order of each face: removing the vertex at
//! position `j` (bottom = 0) carries the sign `(-1)^j`. The augmentation
//! `∂_0` sends every vertex to the empty face.
//!
//! Ranks are computed by sparse column reduction. Up to `exact_limit`
//! nonzero entries the reduction runs over the integers (fraction-free,
//! content-normalized, `i128` with a `BigInt` restart on overflow), which
//! gives the rank over `Q` exactly. Larger matrices are reduced modulo
//! [`PRIME`]; that rank can only undercount the rational rank, and the
//! report records which mode was used.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::{Face, OrderComplex};
use crate::error::{Error, Result};

pub const PRIME: u64 = (1 << 61) - 1;
pub const DEFAULT_EXACT_LIMIT: usize = 2_000_000;
pub const DEFAULT_ENTRY_CAP: usize = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankMode {
    Exact,
    ModPrime,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    /// Reduced Betti numbers in degrees `0..=dim`.
    pub betti: Vec<u64>,
    /// `rank ∂_k` for `k = 0..=dim`.
    pub boundary_ranks: Vec<u64>,
    pub mode: RankMode,
}

impl HomologyReport {
    /// Euler–Poincaré: `Σ (-1)^k b̃_k`.
    pub fn euler_from_betti(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }
}

type SparseCol = Vec<(u32, i64)>;

/// Columns of `∂_k` (one per `k`-face), rows indexed by `(k-1)`-faces.
fn boundary_columns(k: &OrderComplex, dim: isize) -> Vec<SparseCol> {
    let lower: HashMap<&[u32], u32> = k
        .faces(dim - 1)
        .iter()
        .enumerate()
        .map(|(i, f)| (&f[..], i as u32))
        .collect();
    k.faces(dim)
        .iter()
        .map(|face: &Face| {
            let mut col: SparseCol = (0..face.len())
                .map(|j| {
                    let sub: Vec<u32> =
                        face.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &v)| v).collect();
                    let row = lower[&sub[..]];
                    (row, if j % 2 == 0 { 1 } else { -1 })
                })
                .collect();
            col.sort_unstable_by_key(|e| e.0);
            col
        })
        .collect()
}

pub fn homology_ranks(k: &OrderComplex, exact_limit: usize, entry_cap: usize) -> Result<HomologyReport> {
    let dim = k.dim();
    if dim < 0 {
        return Ok(HomologyReport { betti: vec![], boundary_ranks: vec![], mode: RankMode::Exact });
    }
    let entries: usize = (0..=dim).map(|d| k.faces(d).len() * (d as usize + 1)).sum();
    if entries > entry_cap {
        return Err(Error::CapExceeded { cap: entry_cap, partial: entries });
    }
    let mut mode = RankMode::Exact;
    let mut ranks = Vec::with_capacity(dim as usize + 1);
    for d in 0..=dim {
        let cols = boundary_columns(k, d);
        let nnz = cols.len() * (d as usize + 1);
        let r = if nnz <= exact_limit {
            rank_exact(cols)
        } else {
            mode = RankMode::ModPrime;
            rank_mod_prime(cols)
        };
        ranks.push(r as u64);
    }
    let betti = (0..=dim as usize)
        .map(|d| {
            let next = ranks.get(d + 1).copied().unwrap_or(0);
            k.faces(d as isize).len() as u64 - ranks[d] - next
        })
        .collect();
    Ok(HomologyReport { betti, boundary_ranks: ranks, mode })
}

/// Rank over `Q` by integer column reduction.
pub fn rank_exact(cols: Vec<SparseCol>) -> usize {
    let wide: Vec<Vec<(u32, i128)>> =
        cols.iter().map(|c| c.iter().map(|&(r, v)| (r, v as i128)).collect()).collect();
    match reduce_i128(wide) {
        Some(r) => r,
        None => reduce_big(
            cols.into_iter()
                .map(|c| c.into_iter().map(|(r, v)| (r, BigInt::from(v))).collect())
                .collect(),
        ),
    }
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `None` on overflow.
fn reduce_i128(cols: Vec<Vec<(u32, i128)>>) -> Option<usize> {
    let mut pivots: HashMap<u32, Vec<(u32, i128)>> = HashMap::new();
    for mut col in cols {
        while let Some(&(low, a)) = col.last() {
            let Some(piv) = pivots.get(&low) else { break };
            let p = piv.last().unwrap().1;
            // col <- p*col - a*piv, then divide out the content
            let mut out = Vec::with_capacity(col.len() + piv.len());
            let (mut i, mut j) = (0, 0);
            while i < col.len() || j < piv.len() {
                let (r, v) = match (col.get(i), piv.get(j)) {
                    (Some(&(rc, vc)), Some(&(rp, vp))) if rc == rp => {
                        i += 1;
                        j += 1;
                        (rc, p.checked_mul(vc)?.checked_sub(a.checked_mul(vp)?)?)
                    }
                    (Some(&(rc, vc)), Some(&(rp, _))) if rc < rp => {
                        i += 1;
                        (rc, p.checked_mul(vc)?)
                    }
                    (Some(&(rc, vc)), None) => {
                        i += 1;
                        (rc, p.checked_mul(vc)?)
                    }
                    (_, Some(&(rp, vp))) => {
                        j += 1;
                        (rp, a.checked_mul(vp)?.checked_neg()?)
                    }
                    (None, None) => unreachable!(),
                };
                if v != 0 {
                    out.push((r, v));
                }
            }
            let g = out.iter().fold(0, |g, &(_, v)| gcd_i128(g, v));
            if g > 1 {
                out.iter_mut().for_each(|e| e.1 /= g);
            }
            col = out;
        }
        if let Some(&(low, _)) = col.last() {
            pivots.insert(low, col);
        }
    }
    Some(pivots.len())
}

fn reduce_big(cols: Vec<Vec<(u32, BigInt)>>) -> usize {
    let mut pivots: HashMap<u32, Vec<(u32, BigInt)>> = HashMap::new();
    for mut col in cols {
        while let Some((low, a)) = col.last().cloned() {
            let Some(piv) = pivots.get(&low) else { break };
            let p = piv.last().unwrap().1.clone();
            let mut merged: std::collections::BTreeMap<u32, BigInt> =
                col.iter().map(|(r, v)| (*r, &p * v)).collect();
            for (r, v) in piv {
                *merged.entry(*r).or_insert_with(BigInt::zero) -= &a * v;
            }
            let mut out: Vec<(u32, BigInt)> = merged.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            let g = out.iter().fold(BigInt::zero(), |g, (_, v)| num_integer_gcd(&g, v));
            if g > BigInt::from(1) {
                out.iter_mut().for_each(|e| e.1 = &e.1 / &g);
            }
            col = out;
        }
        if let Some((low, _)) = col.last() {
            pivots.insert(*low, col);
        }
    }
    pivots.len()
}

fn num_integer_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a, mut b) = (a.abs(), b.abs());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        e >>= 1;
    }
    acc
}

/// Rank over `Z/PRIME`.
pub fn rank_mod_prime(cols: Vec<SparseCol>) -> usize {
    let to_field = |v: i64| v.rem_euclid(PRIME as i64) as u64;
    let mut pivots: HashMap<u32, Vec<(u32, u64)>> = HashMap::new();
    for col in cols {
        let mut col: Vec<(u32, u64)> = col.into_iter().map(|(r, v)| (r, to_field(v))).collect();
        while let Some(&(low, a)) = col.last() {
            let Some(piv) = pivots.get(&low) else { break };
            // pivot columns are normalized to end in 1
            let factor = PRIME - a;
            let mut merged: std::collections::BTreeMap<u32, u64> = col.iter().copied().collect();
            for &(r, v) in piv {
                let e = merged.entry(r).or_insert(0);
                *e = (*e + mul_mod(factor, v)) % PRIME;
            }
            col = merged.into_iter().filter(|&(_, v)| v != 0).collect();
        }
        if let Some(&(low, a)) = col.last() {
            let inv = pow_mod(a, PRIME - 2);
            col.iter_mut().for_each(|e| e.1 = mul_mod(e.1, inv));
            pivots.insert(low, col);
        }
    }
    pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::DEFAULT_FACE_CAP;

    fn betti(n: usize, m: usize) -> Vec<u64> {
        let k = OrderComplex::build(n, m, DEFAULT_FACE_CAP).unwrap();
        homology_ranks(&k, DEFAULT_EXACT_LIMIT, DEFAULT_ENTRY_CAP).unwrap().betti
    }

    #[test]
    fn small_cases() {
        assert_eq!(betti(1, 0), vec![0]);
        assert_eq!(betti(2, 1), vec![0, 1]);
        assert_eq!(betti(3, 2), vec![0, 0, 0]);
    }

    #[test]
    fn rank_agrees_across_modes() {
        // dense-ish integer matrix with a known rank of 2
        let cols: Vec<SparseCol> = vec![
            vec![(0, 1), (1, 2), (2, 3)],
            vec![(0, 2), (1, 4), (2, 6)],
            vec![(0, 1), (2, 1)],
            vec![(1, 2), (2, 2)],
        ];
        assert_eq!(rank_exact(cols.clone()), 2);
        assert_eq!(rank_mod_prime(cols.clone()), 2);
        let big: Vec<Vec<(u32, BigInt)>> = cols
            .into_iter()
            .map(|c| c.into_iter().map(|(r, v)| (r, BigInt::from(v))).collect())
            .collect();
        assert_eq!(reduce_big(big), 2);
    }

    #[test]
    fn forced_modular_mode_matches() {
        let k = OrderComplex::build(3, 2, DEFAULT_FACE_CAP).unwrap();
        let exact = homology_ranks(&k, usize::MAX, DEFAULT_ENTRY_CAP).unwrap();
        let modular = homology_ranks(&k, 0, DEFAULT_ENTRY_CAP).unwrap();
        assert_eq!(exact.mode, RankMode::Exact);
        assert_eq!(modular.mode, RankMode::ModPrime);
        assert_eq!(exact.betti, modular.betti);
        assert!(homology_ranks(&k, 0, 10).is_err());
    }
}
