#![allow(dead_code)]

use std::path::PathBuf;

use finq::cyclotomic::Cyclotomic;
use finq::matrix::CycMatrix;
use finq::permgroup::{ClosureOptions, FiniteGroup, Perm};
use serde_json::Value;

pub fn fixture_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

pub fn fixture(rel: &str) -> Value {
    let text = std::fs::read_to_string(fixture_path(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"));
    serde_json::from_str(&text).unwrap()
}

/// A permutation of `degree` points from `[[1,2,3],[4,5]]`-style cycle lists.
pub fn perm_from_cycles(degree: usize, cycles: &Value) -> Perm {
    let cs: Vec<Vec<usize>> = cycles
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as usize).collect())
        .collect();
    let refs: Vec<&[usize]> = cs.iter().map(Vec::as_slice).collect();
    Perm::from_cycles(degree, &refs).unwrap()
}

pub fn s3() -> FiniteGroup {
    let gens = [Perm::from_one_based(&[2, 1, 3]).unwrap(), Perm::from_one_based(&[2, 3, 1]).unwrap()];
    FiniteGroup::closure(&gens, ClosureOptions::default()).unwrap()
}

/// Parses `"0"`, `"1"`, `"-1"`, `"w"`, `"w2"` with `w` a primitive cube root of unity.
pub fn omega_entry(s: &str) -> Cyclotomic {
    match s {
        "w" => Cyclotomic::root(3, 1).unwrap(),
        "w2" => Cyclotomic::root(3, 2).unwrap(),
        n => Cyclotomic::from_int(n.parse().unwrap()),
    }
}

pub fn omega_matrix(v: &Value) -> CycMatrix {
    let rows = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(|e| omega_entry(e.as_str().unwrap())).collect())
        .collect();
    CycMatrix::from_rows(rows).unwrap()
}

pub fn int_matrix(v: &Value) -> CycMatrix {
    let rows = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(|e| Cyclotomic::from_int(e.as_i64().unwrap())).collect())
        .collect();
    CycMatrix::from_rows(rows).unwrap()
}

/// Schoolbook product, independent of the library's multiplication.
pub fn naive_product(a: &CycMatrix, b: &CycMatrix) -> CycMatrix {
    assert_eq!(a.cols(), b.rows());
    CycMatrix::from_fn(a.rows(), b.cols(), |i, j| {
        (0..a.cols()).fold(Cyclotomic::zero(), |acc, k| &acc + &(a.get(i, k) * b.get(k, j)))
    })
}

/// Leibniz-formula determinant over integer polynomials in `λ` of `P - λI`.
pub fn brute_charpoly(p: &Perm) -> Vec<i64> {
    let n = p.degree();
    // entry(i, j) as a polynomial: [constant, λ coefficient]
    let entry = |i: usize, j: usize| -> [i64; 2] {
        let c = i64::from(p.apply(i) == j);
        if i == j {
            [c, -1]
        } else {
            [c, 0]
        }
    };
    let mut total = vec![0i64; n + 1];
    let mut sigma: Vec<usize> = (0..n).collect();
    permute(&mut sigma, 0, &mut |s| {
        let sign = permutation_sign(s);
        let mut poly = vec![0i64; n + 1];
        poly[0] = sign;
        for (i, &j) in s.iter().enumerate() {
            let e = entry(i, j);
            let mut next = vec![0i64; n + 1];
            for (k, &c) in poly.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                next[k] += c * e[0];
                if k < n {
                    next[k + 1] += c * e[1];
                }
            }
            poly = next;
            if poly.iter().all(|&c| c == 0) {
                return;
            }
        }
        for (t, c) in total.iter_mut().zip(&poly) {
            *t += c;
        }
    });
    while total.len() > 1 && total.last() == Some(&0) {
        total.pop();
    }
    total
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

fn permutation_sign(s: &[usize]) -> i64 {
    let inversions =
        (0..s.len()).flat_map(|i| (i + 1..s.len()).map(move |j| (i, j))).filter(|&(i, j)| s[i] > s[j]).count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}
