//! The map from faces of `Δ_{n,m}` to even signed permutations, and the
//! verified decomposition of the face poset into Boolean intervals
//! `[C_π, C^π]`.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::Chain;
use crate::complex::{Face, OrderComplex};
use crate::error::{Error, Result};
use crate::poset::is_boolean;
use crate::signvec::{full_mask, SignVector};
use crate::sperm::{bottom_chain, chain_of_perm, descent_histogram, SignedPerm};

/// Output of [`phi`] on a chain `ω(1) < ... < ω(r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiResult {
    pub perm: SignedPerm,
    /// `blocks[s - 1]` is the word `ω'_s` for `s = 1..=r+1`; block `r+1`
    /// holds the zero positions of the top and may be empty.
    pub blocks: Vec<Vec<i32>>,
    /// `lengths[i] = ℓ(C, i)` for `i = 0..=r+1`.
    pub lengths: Vec<usize>,
}

/// Labels a chain with an even signed permutation.
///
/// Step `s` collects the positions that become nonzero at `ω(s)`, bars those
/// that are cyclic sign flips of the top vector, and sorts them as signed
/// integers. The zero positions of the top form a final unbarred block, and
/// the permutation is the blocks read from last to first.
pub fn phi(chain: &Chain) -> PhiResult {
    let n = chain.n();
    let flips = chain.top().map_or(0, |t| t.bar().mask());
    let mut prev = 0u32;
    let mut sets: Vec<u32> = chain
        .vectors()
        .iter()
        .map(|v| {
            let new = v.support() & !prev;
            prev = v.support();
            new
        })
        .collect();
    sets.push(full_mask(n) & !prev);

    let blocks: Vec<Vec<i32>> = sets
        .iter()
        .map(|&set| {
            let mut word: Vec<i32> = (0..n)
                .filter(|i| set & (1 << i) != 0)
                .map(|i| if flips & (1 << i) != 0 { -(i as i32 + 1) } else { i as i32 + 1 })
                .collect();
            word.sort_unstable();
            word
        })
        .collect();

    let mut lengths = vec![0usize; blocks.len() + 1];
    for i in (0..blocks.len()).rev() {
        lengths[i] = lengths[i + 1] + blocks[i].len();
    }
    let window = blocks.iter().rev().flatten().copied().collect();
    let perm = SignedPerm::new(window).expect("blocks partition [n]");
    PhiResult { perm, blocks, lengths }
}

/// Whether removing the `i`-th element (1-indexed) leaves `Φ` unchanged,
/// by recomputing `Φ` on the shorter chain.
pub fn check_removal(chain: &Chain, i: usize) -> Result<bool> {
    if chain.is_empty() {
        return Err(Error::Chain("cannot remove from the empty chain".into()));
    }
    Ok(phi(&chain.without(i)?).perm == phi(chain).perm)
}

/// Whether removing every listed element leaves `Φ` unchanged, by direct
/// recomputation.
pub fn check_subset_removal(chain: &Chain, positions: &[usize]) -> Result<bool> {
    Ok(phi(&chain.without_set(positions)?).perm == phi(chain).perm)
}

fn bar_mask(v: Option<&SignVector>) -> u32 {
    v.map_or(0, |v| v.bar().mask())
}

/// Descent criterion for single removals: `ℓ(C, i)` must not be a descent of
/// `Φ(C)`, and when the top is removed the cyclic sign flips of the new top
/// (none, for the empty chain) must agree with the old ones.
pub fn removal_criterion(chain: &Chain, i: usize) -> Result<bool> {
    subset_removal_criterion(chain, &[i])
}

/// Set version of [`removal_criterion`]: no `ℓ(C, i)` with `i` removed is a
/// descent, and the top of the remaining chain keeps the same flips.
pub fn subset_removal_criterion(chain: &Chain, positions: &[usize]) -> Result<bool> {
    let rest = chain.without_set(positions)?;
    let res = phi(chain);
    let des = res.perm.descent_data();
    let descent_free = positions.iter().all(|&i| !des.contains(res.lengths[i]));
    Ok(descent_free && bar_mask(rest.top()) == bar_mask(chain.top()))
}

/// Outcome of one certificate check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail { reason: String, witness: String },
    NotApplicable { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    #[serde(flatten)]
    pub status: CheckStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Failed { check: String, reason: String, witness: String },
}

/// Interval bounds for one permutation in the image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalBounds {
    pub bottom: Chain,
    pub top: Chain,
    pub des: usize,
    pub fiber_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCertificate {
    pub n: usize,
    pub m: usize,
    pub face_count: usize,
    pub h_from_f: Vec<i64>,
    /// Number of image elements with `des = j`.
    pub h_from_partition: Vec<u64>,
    /// Number of intervals whose bottom has `j` elements.
    pub bottom_sizes: Vec<u64>,
    pub intervals: BTreeMap<SignedPerm, IntervalBounds>,
    pub checks: Vec<CheckOutcome>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fibers: Option<BTreeMap<SignedPerm, Vec<Chain>>>,
}

impl PartitionCertificate {
    pub fn is_verified(&self) -> bool {
        self.verdict == Verdict::Verified
    }
}

/// Per-permutation results; failures carry `(reason, witness)`.
struct PermCheck {
    perm: SignedPerm,
    bounds: IntervalBounds,
    fiber_fail: Option<(String, String)>,
    interval_fail: Option<(String, String)>,
}

/// Builds `Δ_{n,m}` and certifies the partition.
pub fn partition(n: usize, m: usize, cap: usize, keep_fibers: bool) -> Result<PartitionCertificate> {
    let k = OrderComplex::build(n, m, cap)?;
    Ok(partition_complex(&k, keep_fibers))
}

/// Certifies the Boolean-interval partition of an already built complex.
///
/// Checks, in order: every label is even signed and the fibers account for
/// every face exactly once; each fiber equals `{C : C_π ⊆ C ⊆ C^π}`; each
/// such interval lies in the face poset and is Boolean; the image is
/// `S^D_{n,m}` (`m` even) or `S^D_n` (`m = n - 1`); and the h-vector from
/// the f-vector matches the descent counts of the image.
pub fn partition_complex(k: &OrderComplex, keep_fibers: bool) -> PartitionCertificate {
    let (n, m) = (k.n(), k.m());
    let faces: Vec<&Face> = k.all_faces().collect();
    let labels: Vec<SignedPerm> = faces.par_iter().map(|f| phi(&k.to_chain(f)).perm).collect();

    let mut fibers: BTreeMap<SignedPerm, Vec<usize>> = BTreeMap::new();
    for (idx, p) in labels.iter().enumerate() {
        fibers.entry(p.clone()).or_default().push(idx);
    }
    let mut checks = Vec::new();

    // (a) labels even, fibers disjoint and covering
    let odd = labels.iter().position(|p| !p.is_even_signed());
    let covered: usize = fibers.values().map(Vec::len).sum();
    checks.push(CheckOutcome {
        name: "disjoint_cover".into(),
        status: match odd {
            Some(i) => CheckStatus::Fail {
                reason: "label is not even signed".into(),
                witness: format!("{} -> {}", k.to_chain(faces[i]), labels[i]),
            },
            None if covered != faces.len() => CheckStatus::Fail {
                reason: format!("fibers cover {covered} of {} faces", faces.len()),
                witness: String::new(),
            },
            None => CheckStatus::Pass,
        },
    });

    let face_set: HashSet<&[u32]> = faces.iter().map(|f| &f[..]).collect();
    let per_perm: Vec<PermCheck> = fibers
        .par_iter()
        .map(|(p, members)| {
            let top = chain_of_perm(p).expect("labels are even signed");
            let bottom = bottom_chain(p).expect("labels are even signed");
            let des = p.des();
            let bounds = IntervalBounds { bottom: bottom.clone(), top: top.clone(), des, fiber_size: members.len() };
            // (b) fiber equals the set-theoretic interval
            let fiber_chains: Vec<Vec<SignVector>> =
                members.iter().map(|&i| k.to_chain(faces[i]).vectors().to_vec()).collect();
            let refs: Vec<&[SignVector]> = fiber_chains.iter().map(Vec::as_slice).collect();
            let fiber_fail = if members.len() != 1 << (n - des) {
                Some((format!("fiber has {} faces, expected 2^{}", members.len(), n - des), p.to_string()))
            } else if !is_boolean(bottom.vectors(), top.vectors(), &refs) {
                Some(("fiber differs from [C_pi, C^pi]".into(), p.to_string()))
            } else {
                None
            };
            // (c) the interval lives in the face poset and is Boolean
            let ids: Option<Vec<u32>> = top.vectors().iter().map(|v| k.poset().id_of(v)).collect();
            let interval_fail = match ids {
                None => Some(("C^pi is not a chain of the poset".into(), p.to_string())),
                Some(ids) => {
                    let keep: Vec<bool> = top.vectors().iter().map(|v| bottom.vectors().contains(v)).collect();
                    let free: Vec<usize> = (0..ids.len()).filter(|&j| !keep[j]).collect();
                    let subs: Vec<Vec<SignVector>> = (0..1usize << free.len())
                        .map(|mask| {
                            (0..ids.len())
                                .filter(|&j| {
                                    keep[j] || free.iter().position(|&f| f == j).is_some_and(|b| mask & (1 << b) != 0)
                                })
                                .map(|j| top.vectors()[j])
                                .collect()
                        })
                        .collect();
                    let missing = subs.iter().find(|s| {
                        let key: Vec<u32> = s.iter().map(|v| k.poset().id_of(v).unwrap()).collect();
                        !face_set.contains(&key[..])
                    });
                    let refs: Vec<&[SignVector]> = subs.iter().map(Vec::as_slice).collect();
                    if let Some(s) = missing {
                        Some(("interval member is not a face".into(), format!("{p}: {s:?}")))
                    } else if !is_boolean(bottom.vectors(), top.vectors(), &refs) {
                        Some(("interval is not Boolean".into(), p.to_string()))
                    } else {
                        None
                    }
                }
            };
            PermCheck { perm: p.clone(), bounds, fiber_fail, interval_fail }
        })
        .collect();

    for (name, fail) in [
        ("fiber_is_interval", per_perm.iter().find_map(|e| e.fiber_fail.clone())),
        ("interval_is_boolean", per_perm.iter().find_map(|e| e.interval_fail.clone())),
    ] {
        checks.push(CheckOutcome {
            name: name.into(),
            status: match fail {
                Some((reason, witness)) => CheckStatus::Fail { reason, witness },
                None => CheckStatus::Pass,
            },
        });
    }

    // (d) image
    let expected_neg = if m % 2 == 0 {
        Some(Some(m))
    } else if m == n - 1 {
        Some(None)
    } else {
        None
    };
    checks.push(CheckOutcome {
        name: "image".into(),
        status: match expected_neg {
            None => CheckStatus::NotApplicable { reason: format!("m = {m} is odd and below n - 1") },
            Some(limit) => {
                let expected: Vec<SignedPerm> = crate::sperm::enumerate_sdn(n, limit).expect("n in range").collect();
                let mut sorted = expected.clone();
                sorted.sort();
                let image: Vec<&SignedPerm> = fibers.keys().collect();
                if image.len() == sorted.len() && image.iter().zip(&sorted).all(|(a, b)| *a == b) {
                    CheckStatus::Pass
                } else {
                    let witness = sorted
                        .iter()
                        .find(|p| !fibers.contains_key(p))
                        .map(|p| format!("missing {p}"))
                        .or_else(|| fibers.keys().find(|p| sorted.binary_search(p).is_err()).map(|p| format!("extra {p}")))
                        .unwrap_or_default();
                    CheckStatus::Fail {
                        reason: format!("image has {} elements, expected {}", image.len(), sorted.len()),
                        witness,
                    }
                }
            }
        },
    });

    // (e) h-vector
    let h_from_f = k.h_vector();
    let mut h_from_partition = vec![0u64; n + 1];
    let mut bottom_sizes = vec![0u64; n + 1];
    let mut intervals = BTreeMap::new();
    for PermCheck { perm, bounds, .. } in per_perm {
        h_from_partition[bounds.des] += 1;
        bottom_sizes[bounds.bottom.len()] += 1;
        intervals.insert(perm, bounds);
    }
    let h_match = h_from_f.len() == h_from_partition.len()
        && h_from_f.iter().zip(&h_from_partition).all(|(a, &b)| *a == b as i64);
    checks.push(CheckOutcome {
        name: "h_vector".into(),
        status: if h_match {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail {
                reason: "h from f differs from descent counts of the image".into(),
                witness: format!("{h_from_f:?} vs {h_from_partition:?}"),
            }
        },
    });

    let verdict = checks
        .iter()
        .find_map(|c| match &c.status {
            CheckStatus::Fail { reason, witness } => Some(Verdict::Failed {
                check: c.name.clone(),
                reason: reason.clone(),
                witness: witness.clone(),
            }),
            _ => None,
        })
        .unwrap_or(Verdict::Verified);

    let fibers = keep_fibers.then(|| {
        fibers
            .into_iter()
            .map(|(p, members)| {
                let mut chains: Vec<Chain> = members.iter().map(|&i| k.to_chain(faces[i])).collect();
                chains.sort();
                (p, chains)
            })
            .collect()
    });

    PartitionCertificate {
        n,
        m,
        face_count: faces.len(),
        h_from_f,
        h_from_partition,
        bottom_sizes,
        intervals,
        checks,
        verdict,
        fibers,
    }
}

/// Descent counts of `S^D_{n,m}` (`m` even) or `S^D_n` (`m = n - 1`),
/// enumerated independently of any complex.
pub fn expected_descent_counts(n: usize, m: usize) -> Option<Result<Vec<u64>>> {
    if m % 2 == 0 {
        Some(descent_histogram(n, Some(m)))
    } else if m + 1 == n {
        Some(descent_histogram(n, None))
    } else {
        None
    }
}
