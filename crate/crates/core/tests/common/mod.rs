#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use signvar::{Chain, SignVector};

/// A face of `Δ_{n,m}`: a random subset of a random saturated chain below
/// a random zero-free top with at most `m` sign changes.
pub fn random_face<R: Rng>(rng: &mut R, n: usize, m: usize) -> Chain {
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let top = loop {
        let v = SignVector::from_masks(n, full, rng.random::<u32>()).unwrap();
        if v.var() <= m {
            break v;
        }
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut support = 0u32;
    let vectors = order
        .into_iter()
        .filter_map(|i| {
            support |= 1 << i;
            let v = top.restrict(support).unwrap();
            rng.random_bool(0.5).then_some(v)
        })
        .collect();
    Chain::new(n, vectors).unwrap()
}

/// `m` values for which the partition theorem applies.
pub fn cm_values(n: usize) -> Vec<usize> {
    (0..n).filter(|&m| m % 2 == 0 || m + 1 == n).collect()
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}
