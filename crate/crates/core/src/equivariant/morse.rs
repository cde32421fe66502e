use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::complexes::ChainComplex;
use crate::error::{Error, Result};
use crate::exactlin::{IntMatrix, Ring};

/// A critical circle of an S^1-invariant Morse-Bott function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circle {
    pub index: i64,
    pub label: Option<String>,
}

/// Critical circles with their indices and the signed counts
/// `n(upper, lower)` between circles whose indices differ by one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct S1MorseDatum {
    pub ring: Ring,
    pub circles: Vec<Circle>,
    /// `(upper, lower, count)`, indices into `circles`.
    pub counts: Vec<(usize, usize, BigInt)>,
}

impl S1MorseDatum {
    pub fn new(ring: Ring, indices: &[i64], counts: Vec<(usize, usize, BigInt)>) -> Self {
        let circles = indices.iter().map(|&index| Circle { index, label: None }).collect();
        S1MorseDatum { ring, circles, counts }
    }

    pub fn label(&self, i: usize) -> String {
        self.circles[i].label.clone().unwrap_or_else(|| format!("S{i}"))
    }

    /// Circle positions inside their degree: `(degree, position)` per circle.
    fn layout(&self) -> (BTreeMap<i64, Vec<usize>>, Vec<(i64, usize)>) {
        let mut by_deg: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, c) in self.circles.iter().enumerate() {
            by_deg.entry(c.index).or_default().push(i);
        }
        let mut pos = vec![(0, 0); self.circles.len()];
        for (&k, list) in &by_deg {
            for (j, &i) in list.iter().enumerate() {
                pos[i] = (k, j);
            }
        }
        (by_deg, pos)
    }
}

/// The equivariant Morse complex: one generator per circle in degree equal
/// to its index, differential given by the counts. Generators inside a
/// degree keep the order of `circles`.
pub fn assemble_s1_morse(d: &S1MorseDatum) -> Result<ChainComplex> {
    d.ring.validate()?;
    let n = d.circles.len();
    if n == 0 {
        return Ok(ChainComplex::zero(d.ring));
    }
    let (by_deg, pos) = d.layout();
    let mut seen = std::collections::BTreeSet::new();
    for (u, l, _) in &d.counts {
        if *u >= n || *l >= n {
            return Err(Error::BadParams(format!("count ({u}, {l}) refers to a missing circle")));
        }
        if d.circles[*u].index - d.circles[*l].index != 1 {
            return Err(Error::BadParams(format!(
                "count ({u}, {l}) between circles of index {} and {}",
                d.circles[*u].index, d.circles[*l].index
            )));
        }
        if !seen.insert((*u, *l)) {
            return Err(Error::BadParams(format!("count ({u}, {l}) given twice")));
        }
    }
    let lo = *by_deg.keys().next().unwrap();
    let hi = *by_deg.keys().last().unwrap();
    let rank = |k: i64| by_deg.get(&k).map_or(0, |v| v.len());
    let ranks: Vec<usize> = (lo..=hi).map(rank).collect();
    let mut diffs: BTreeMap<i64, IntMatrix> = (lo..=hi)
        .map(|k| (k, IntMatrix::zeros(rank(k - 1), rank(k))))
        .collect();
    for (u, l, v) in &d.counts {
        let (k, j) = pos[*u];
        let (_, i) = pos[*l];
        diffs.get_mut(&k).unwrap().set(i, j, v.clone());
    }
    // report a witnessing pair before the generic check
    for k in lo + 1..=hi {
        let dd = d.ring.reduce_matrix(&diffs[&(k - 1)].mul(&diffs[&k]));
        if let Some((i, j, _)) = dd.to_triples().into_iter().find(|t| !t.2.is_zero()) {
            let upper = by_deg[&k][j];
            let lower = by_deg[&(k - 2)][i];
            return Err(Error::DSquaredNonzero(format!(
                "{} -> {} has nonzero coefficient in d^2",
                d.label(upper),
                d.label(lower)
            )));
        }
    }
    let labels = (lo..=hi)
        .map(|k| by_deg.get(&k).map_or(Vec::new(), |v| v.iter().map(|&i| d.label(i)).collect()))
        .collect();
    ChainComplex::new(d.ring, lo, ranks, diffs)?.with_labels(labels)
}

/// Compares the equivariant Morse complex with a Morse complex of the
/// quotient. When the quotient carries labels, generators are matched by
/// label; otherwise positionally.
pub fn matches_quotient(d: &S1MorseDatum, quotient: &ChainComplex) -> Result<bool> {
    let c = assemble_s1_morse(d)?;
    let Some(ql) = quotient.all_labels() else {
        return Ok(c.clone().without_labels() == quotient.clone().without_labels());
    };
    if c.ring() != quotient.ring() || c.degrees() != quotient.degrees() || c.ranks() != quotient.ranks() {
        return Ok(false);
    }
    // permutation taking quotient positions to ours, per degree
    let mut perm: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (off, k) in c.degrees().enumerate() {
        let ours = c.labels(k).unwrap_or(&[]);
        let mut p = Vec::new();
        for name in &ql[off] {
            match ours.iter().position(|x| x == name) {
                Some(i) => p.push(i),
                None => return Ok(false),
            }
        }
        perm.insert(k, p);
    }
    for k in c.degrees() {
        let a = c.diff(k);
        let b = quotient.diff(k);
        let (src, tgt) = (&perm[&k], perm.get(&(k - 1)));
        for j in 0..b.cols() {
            for i in 0..b.rows() {
                let ti = tgt.expect("rows exist")[i];
                if a.get(ti, src[j]) != b.get(i, j) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
