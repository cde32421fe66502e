//! Independent oracles for the tests: homology from a hand-rolled Smith
//! diagonalization over i128 and ranks by fraction-free elimination. Only
//! the raw matrix entries are taken from the library.

#![allow(dead_code)]

use std::collections::BTreeMap;

use gysin::complexes::ChainComplex;
use gysin::exactlin::{IntMatrix, Ring};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

pub type Mat = Vec<Vec<i128>>;

pub fn to_mat(m: &IntMatrix) -> Mat {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_i128().expect("small entry")).collect())
        .collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Nonzero invariant factors of an integer matrix, as a divisibility chain.
pub fn invariant_factors(m: &Mat, cols: usize) -> Vec<i128> {
    let mut a = m.clone();
    let rows = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        let piv = a[t][t];
        for i in t + 1..rows {
            let q = a[i][t] / piv;
            if q != 0 {
                for j in t..cols {
                    a[i][j] = a[i][j].checked_sub(q * a[t][j]).expect("oracle overflow");
                }
            }
            if a[i][t] != 0 {
                clean = false;
            }
        }
        for j in t + 1..cols {
            let q = a[t][j] / piv;
            if q != 0 {
                for row in a.iter_mut().skip(t) {
                    row[j] = row[j].checked_sub(q * row[t]).expect("oracle overflow");
                }
            }
            if a[t][j] != 0 {
                clean = false;
            }
        }
        if clean {
            diag.push(piv.abs());
            t += 1;
        }
    }
    // normalize to a divisibility chain
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = gcd(diag[i], diag[j]);
            let l = diag[i] / g * diag[j];
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

/// Rank over `Q` by Bareiss elimination on big integers.
pub fn rank_q(m: &Mat, cols: usize) -> usize {
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let rows = a.len();
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(rank, p);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = &a[rank][c] * &a[i][j] - &a[i][c] * &a[rank][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

/// Rank over `F_p`.
pub fn rank_mod(m: &Mat, cols: usize, p: i128) -> usize {
    let mut a: Mat = m.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let rows = a.len();
    let inv = |x: i128| -> i128 {
        let (mut r, mut e, mut b) = (1i128, p - 2, x);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, piv);
        let s = inv(a[rank][c]);
        for i in rank + 1..rows {
            let f = a[i][c] * s % p;
            if f != 0 {
                for j in c..cols {
                    a[i][j] = (a[i][j] - f * a[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn rank_in(ring: Ring, m: &Mat, cols: usize) -> usize {
    match ring {
        Ring::Integers | Ring::Rationals => rank_q(m, cols),
        Ring::PrimeField(p) => rank_mod(m, cols, p as i128),
    }
}

/// Homology over `Z` from ranks and differentials: `(free rank, torsion)` per
/// degree. `diffs[k]` is the differential out of degree `k`.
pub fn homology_z(ranks: &BTreeMap<i64, usize>, diffs: &BTreeMap<i64, Mat>) -> BTreeMap<i64, (usize, Vec<i128>)> {
    let mut out = BTreeMap::new();
    let rk = |k: i64| ranks.get(&k).copied().unwrap_or(0);
    for (&k, &n) in ranks {
        let out_rank = diffs.get(&k).map_or(0, |d| rank_q(d, rk(k)));
        let (in_rank, torsion) = match diffs.get(&(k + 1)) {
            Some(d) => {
                let f = invariant_factors(d, rk(k + 1));
                (f.len(), f.into_iter().filter(|&x| x > 1).collect())
            }
            None => (0, Vec::new()),
        };
        out.insert(k, (n - out_rank - in_rank, torsion));
    }
    out
}

fn parts(c: &ChainComplex) -> (BTreeMap<i64, usize>, BTreeMap<i64, Mat>) {
    let mut ranks = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    if !c.is_empty_range() {
        for k in c.degrees() {
            ranks.insert(k, c.rank(k));
            diffs.insert(k, to_mat(&c.diff(k)));
        }
    }
    (ranks, diffs)
}

/// Integral homology of a library complex, computed by the oracle.
pub fn oracle_homology_z(c: &ChainComplex) -> BTreeMap<i64, (usize, Vec<i128>)> {
    let (r, d) = parts(c);
    homology_z(&r, &d)
}

/// Betti numbers over the complex's ring (a field), by the oracle.
pub fn oracle_betti(c: &ChainComplex) -> BTreeMap<i64, usize> {
    let (ranks, diffs) = parts(c);
    let rk = |k: i64| ranks.get(&k).copied().unwrap_or(0);
    ranks
        .iter()
        .map(|(&k, &n)| {
            let o = diffs.get(&k).map_or(0, |d| rank_in(c.ring(), d, rk(k)));
            let i = diffs.get(&(k + 1)).map_or(0, |d| rank_in(c.ring(), d, rk(k + 1)));
            (k, n - o - i)
        })
        .collect()
}

/// `(free rank, torsion)` of a library group, for comparison with the oracle.
pub fn group_parts(g: &gysin::exactlin::FGAbelianGroup) -> (usize, Vec<i128>) {
    (g.free_rank, g.torsion.iter().map(|t| t.to_i128().unwrap()).collect())
}
