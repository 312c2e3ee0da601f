//! Numerical instances of the Dehn–Sommerville relations and of the
//! h-vector/descent identities.

use serde::{Deserialize, Serialize};

use crate::complex::{binom, OrderComplex};
use crate::error::{Error, Result};
use crate::partition::{expected_descent_counts, partition_complex};
use crate::sperm::eulerian_d;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub j: Option<usize>,
    pub lhs: i64,
    pub rhs: i64,
    pub pass: bool,
}

impl IdentityReport {
    pub fn new(name: &str, n: Option<usize>, m: Option<usize>, j: Option<usize>, lhs: i64, rhs: i64) -> Self {
        IdentityReport { name: name.into(), n, m, j, lhs, rhs, pass: lhs == rhs }
    }
}

fn sign(j: usize) -> i64 {
    if j % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Klee's relation `h_{d-j} - h_j = (-1)^j C(d,j) ((-1)^{d-1} χ̃ - 1)` for
/// `j = 0..=d`, with `h = (h_0, ..., h_d)`.
pub fn dehn_sommerville(h: &[i64], d: usize, euler_reduced: i64) -> Result<Vec<IdentityReport>> {
    if h.len() != d + 1 {
        return Err(Error::LengthMismatch { expected: d + 1, got: h.len() });
    }
    let factor = sign(d + 1) * euler_reduced - 1;
    Ok((0..=d)
        .map(|j| {
            let lhs = h[d - j] - h[j];
            let rhs = sign(j) * binom(d, j) * factor;
            IdentityReport::new("dehn_sommerville", None, None, Some(j), lhs, rhs)
        })
        .collect())
}

/// `D(n,j) = D(n,n-j)` for even `n` and `D(n,j) = D(n,n-j) + (-1)^j C(n,j)`
/// for odd `n`, with `D` counted exhaustively.
pub fn corollary_ds(n: usize) -> Result<Vec<IdentityReport>> {
    let d = eulerian_d(n)?;
    Ok((0..=n)
        .map(|j| {
            let correction = if n % 2 == 1 { sign(j) * binom(n, j) } else { 0 };
            IdentityReport::new("eulerian_d_symmetry", Some(n), None, Some(j), d[j] as i64, d[n - j] as i64 + correction)
        })
        .collect())
}

/// Compares `χ̃(Δ_{n,n-1})` computed from faces with `-1` (even `n`) or `0`
/// (odd `n`).
pub fn euler_parity(n: usize, euler_reduced: i64) -> IdentityReport {
    let expected = if n % 2 == 0 { -1 } else { 0 };
    IdentityReport::new("reduced_euler_parity", Some(n), Some(n - 1), None, euler_reduced, expected)
}

/// Three-way h-vector comparison for `Δ_{n,m}` with `m` even or `m = n-1`:
/// h from the f-vector against descent counts of `S^D_{n,m}` (or `S^D_n`)
/// and against the bottom sizes `|C_π|` of the certified partition. For
/// `m = n-1` the h-vector is also compared with `D(n, ·)`.
pub fn cross_check(k: &OrderComplex) -> Result<Vec<IdentityReport>> {
    let (n, m) = (k.n(), k.m());
    let Some(expected) = expected_descent_counts(n, m) else {
        return Err(Error::Unsupported(format!("m = {m} is odd and below n - 1 = {}", n - 1)));
    };
    let expected = expected?;
    let cert = partition_complex(k, false);
    let h = k.h_vector();
    let eulerian = if m + 1 == n { Some(eulerian_d(n)?) } else { None };
    let mut out = Vec::new();
    for (j, &hj) in h.iter().enumerate() {
        let (n, m) = (Some(n), Some(m));
        out.push(IdentityReport::new("h_vs_descents", n, m, Some(j), hj, expected[j] as i64));
        out.push(IdentityReport::new("h_vs_partition_bottoms", n, m, Some(j), hj, cert.bottom_sizes[j] as i64));
        if let Some(d) = &eulerian {
            out.push(IdentityReport::new("h_vs_eulerian_d", n, m, Some(j), hj, d[j] as i64));
        }
    }
    out.push(IdentityReport::new(
        "partition_verified",
        Some(n),
        Some(m),
        None,
        cert.is_verified() as i64,
        1,
    ));
    Ok(out)
}
