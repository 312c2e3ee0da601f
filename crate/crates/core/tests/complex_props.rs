mod common;

use std::collections::HashSet;

use signvar::cache;
use signvar::complex::DEFAULT_FACE_CAP;
use signvar::homology::{homology_ranks, DEFAULT_ENTRY_CAP, DEFAULT_EXACT_LIMIT};
use signvar::partition::partition_complex;
use signvar::OrderComplex;

fn grid(max_n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=max_n).flat_map(|n| (0..n).map(move |m| (n, m)))
}

#[test]
fn h_vector_basics() {
    for (n, m) in grid(5) {
        let k = OrderComplex::build(n, m, DEFAULT_FACE_CAP).unwrap();
        let h = k.h_vector();
        assert_eq!(h[0], 1);
        assert_eq!(h.iter().sum::<i64>(), k.facets().len() as i64);
        assert_eq!(k.dim(), n as isize - 1);
        if m + 1 == n {
            assert_eq!(k.facets().len() as u64, (1 << (n - 1)) * common::factorial(n));
        }
    }
}

#[test]
fn closed_under_subsets() {
    for (n, m) in grid(4) {
        let k = OrderComplex::build(n, m, DEFAULT_FACE_CAP).unwrap();
        let faces: HashSet<&[u32]> = k.all_faces().map(|f| &f[..]).collect();
        assert_eq!(faces.len(), k.face_count());
        for face in k.all_faces() {
            for mask in 0..1usize << face.len() {
                let sub: Vec<u32> = face.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &v)| v).collect();
                assert!(faces.contains(&sub[..]));
            }
        }
    }
}

#[test]
fn euler_poincare() {
    for (n, m) in grid(4).chain([(5, 2), (5, 4)]) {
        let k = OrderComplex::build(n, m, DEFAULT_FACE_CAP).unwrap();
        let hom = homology_ranks(&k, DEFAULT_EXACT_LIMIT, DEFAULT_ENTRY_CAP).unwrap();
        assert_eq!(hom.euler_from_betti(), k.reduced_euler(), "n={n} m={m}");
    }
}

#[test]
fn flag_marginals() {
    for (n, m) in grid(5) {
        let k = OrderComplex::build(n, m, DEFAULT_FACE_CAP).unwrap();
        let flag = k.flag_vectors();
        let f = k.f_vector();
        let h = k.h_vector();
        for size in 0..=n {
            let ff: u64 = flag.iter().filter(|(s, _)| s.count_ones() as usize == size).map(|(_, e)| e.flag_f).sum();
            let fh: i64 = flag.iter().filter(|(s, _)| s.count_ones() as usize == size).map(|(_, e)| e.flag_h).sum();
            assert_eq!(ff, f[size], "n={n} m={m} size={size}");
            assert_eq!(fh, h[size], "n={n} m={m} size={size}");
        }
    }
}

#[test]
fn cache_round_trip_preserves_everything() {
    let dir = std::env::temp_dir().join(format!("signvar-cache-test-{}", std::process::id()));
    for (n, m) in [(3, 2), (4, 3), (4, 1)] {
        let k = OrderComplex::build(n, m, DEFAULT_FACE_CAP).unwrap();
        let path = cache::cache_file(&dir, n, m);
        cache::store(&path, &k).unwrap();
        let back = cache::load(&path, n, m).unwrap();
        assert_eq!(back.f_vector(), k.f_vector());
        assert_eq!(back.h_vector(), k.h_vector());
        assert_eq!(back.flag_vectors(), k.flag_vectors());
        assert_eq!(partition_complex(&back, true), partition_complex(&k, true));
    }
    std::fs::remove_dir_all(dir).unwrap();
}
