//! Graded chain complexes with degree -1 differentials, their homology,
//! shifts and tensor products.

mod map;

pub use map::ChainMap;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactlin::{FGAbelianGroup, IntMatrix, Ring, Span, Subquotient};

/// A bounded chain complex of free modules.
///
/// Degrees run over `lo..=hi` (empty when `lo > hi`). `diff(k)` is the
/// `rank(k-1) x rank(k)` matrix of the differential out of degree `k`;
/// everything outside the range is zero. Entries are stored reduced in the
/// ring, and `d^2 = 0` is checked on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ring: Ring,
    lo: i64,
    hi: i64,
    ranks: Vec<usize>,
    labels: Option<Vec<Vec<String>>>,
    diffs: Vec<IntMatrix>,
}

impl ChainComplex {
    /// Builds and validates a complex. `ranks[i]` is the rank in degree
    /// `lo + i`; `diffs` maps a degree `k` to the differential out of it.
    /// Missing differentials are zero.
    pub fn new(ring: Ring, lo: i64, ranks: Vec<usize>, diffs: BTreeMap<i64, IntMatrix>) -> Result<Self> {
        ring.validate()?;
        let hi = lo + ranks.len() as i64 - 1;
        let rank = |k: i64| -> usize {
            if k < lo || k > hi {
                0
            } else {
                ranks[(k - lo) as usize]
            }
        };
        for (&k, m) in &diffs {
            if m.shape() != (rank(k - 1), rank(k)) {
                return Err(Error::Shape(format!(
                    "differential out of degree {k} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    rank(k - 1),
                    rank(k)
                )));
            }
            if (k < lo || k > hi) && !m.is_zero() {
                return Err(Error::Shape(format!("nonzero differential outside the degree range at {k}")));
            }
        }
        let ds: Vec<IntMatrix> = (lo..=hi)
            .map(|k| match diffs.get(&k) {
                Some(m) => ring.reduce_matrix(m),
                None => IntMatrix::zeros(rank(k - 1), rank(k)),
            })
            .collect();
        let c = ChainComplex {
            ring,
            lo,
            hi,
            ranks,
            labels: None,
            diffs: ds,
        };
        c.validate()?;
        Ok(c)
    }

    /// Builds a complex from a list of differentials `d_lo, ..., d_hi`.
    pub fn from_diffs(ring: Ring, lo: i64, ranks: Vec<usize>, diffs: Vec<IntMatrix>) -> Result<Self> {
        let map = diffs
            .into_iter()
            .enumerate()
            .map(|(i, m)| (lo + i as i64, m))
            .collect();
        ChainComplex::new(ring, lo, ranks, map)
    }

    /// The complex with no generators.
    pub fn zero(ring: Ring) -> Self {
        ChainComplex {
            ring,
            lo: 0,
            hi: -1,
            ranks: Vec::new(),
            labels: None,
            diffs: Vec::new(),
        }
    }

    /// The ring itself, concentrated in degree 0.
    pub fn point(ring: Ring) -> Self {
        ChainComplex::new(ring, 0, vec![1], BTreeMap::new()).expect("valid")
    }

    /// Complex with zero differential and the given ranks.
    pub fn with_zero_differential(ring: Ring, lo: i64, ranks: Vec<usize>) -> Self {
        ChainComplex::new(ring, lo, ranks, BTreeMap::new()).expect("zero differential is valid")
    }

    /// Attaches generator names, one list per degree in range.
    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.ranks.len() || labels.iter().zip(&self.ranks).any(|(l, &r)| l.len() != r) {
            return Err(Error::Shape("labels do not match the ranks".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    fn validate(&self) -> Result<()> {
        for k in self.lo + 1..=self.hi {
            let dd = self.diff(k - 1).mul(&self.diff(k));
            if !self.ring.matrix_is_zero(&dd) {
                return Err(Error::InvalidComplex { degree: k });
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn is_empty_range(&self) -> bool {
        self.lo > self.hi
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    pub fn rank(&self, k: i64) -> usize {
        if k < self.lo || k > self.hi {
            0
        } else {
            self.ranks[(k - self.lo) as usize]
        }
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// Differential out of degree `k`.
    pub fn diff(&self, k: i64) -> IntMatrix {
        if k < self.lo || k > self.hi {
            IntMatrix::zeros(self.rank(k - 1), self.rank(k))
        } else {
            self.diffs[(k - self.lo) as usize].clone()
        }
    }

    pub fn labels(&self, k: i64) -> Option<&[String]> {
        let l = self.labels.as_ref()?;
        if k < self.lo || k > self.hi {
            None
        } else {
            Some(&l[(k - self.lo) as usize])
        }
    }

    pub fn all_labels(&self) -> Option<&Vec<Vec<String>>> {
        self.labels.as_ref()
    }

    /// Name of generator `i` in degree `k`.
    pub fn label(&self, k: i64, i: usize) -> String {
        match self.labels(k) {
            Some(l) => l[i].clone(),
            None => format!("e{k}_{i}"),
        }
    }

    /// Degrees in range with nonzero rank, as `(min, max)`.
    pub fn support(&self) -> Option<(i64, i64)> {
        let ks: Vec<i64> = self.degrees().filter(|&k| self.rank(k) > 0).collect();
        Some((*ks.first()?, *ks.last()?))
    }

    pub fn cycles(&self, k: i64) -> Span {
        Span::kernel(self.ring, &self.diff(k))
    }

    pub fn boundaries(&self, k: i64) -> Span {
        Span::new(self.ring, &self.diff(k + 1))
    }

    /// `H_k` with its generators.
    pub fn homology_sq(&self, k: i64) -> Subquotient {
        Subquotient::new(self.cycles(k), self.boundaries(k)).expect("boundaries are cycles")
    }

    pub fn homology(&self, k: i64) -> FGAbelianGroup {
        self.homology_sq(k).group()
    }

    /// Homology in every degree of the range.
    pub fn homology_all(&self) -> Vec<(i64, FGAbelianGroup)> {
        self.degrees().map(|k| (k, self.homology(k))).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.degrees().all(|k| self.homology(k).is_zero())
    }

    /// `C[k]`: degree `n` holds `C_{n+k}` and the differential is multiplied
    /// by `(-1)^k`.
    pub fn shift(&self, k: i64) -> ChainComplex {
        let sign_neg = k.rem_euclid(2) == 1;
        let diffs = self
            .diffs
            .iter()
            .map(|d| {
                let d = if sign_neg { d.neg() } else { d.clone() };
                self.ring.reduce_matrix(&d)
            })
            .collect();
        ChainComplex {
            ring: self.ring,
            lo: self.lo - k,
            hi: self.hi - k,
            ranks: self.ranks.clone(),
            labels: self.labels.clone(),
            diffs,
        }
    }

    /// Tensor product with the Koszul sign `d(x (x) y) = dx (x) y +
    /// (-1)^{|x|} x (x) dy`. In each total degree the basis is ordered by the
    /// degree of the left factor, then left index, then right index.
    pub fn tensor(&self, other: &ChainComplex) -> Result<ChainComplex> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, other.ring)));
        }
        if self.is_empty_range() || other.is_empty_range() {
            return Ok(ChainComplex::zero(self.ring));
        }
        let lo = self.lo + other.lo;
        let hi = self.hi + other.hi;
        let layout = |n: i64| -> Vec<(i64, usize)> {
            // (left degree, offset) blocks of total degree n
            let mut out = Vec::new();
            let mut off = 0;
            for i in self.lo..=self.hi {
                let j = n - i;
                let r = self.rank(i) * other.rank(j);
                if r > 0 {
                    out.push((i, off));
                    off += r;
                }
            }
            out
        };
        let total = |n: i64| -> usize {
            (self.lo..=self.hi).map(|i| self.rank(i) * other.rank(n - i)).sum()
        };
        let ranks: Vec<usize> = (lo..=hi).map(total).collect();
        let mut diffs = BTreeMap::new();
        for n in lo..=hi {
            let mut m = IntMatrix::zeros(total(n - 1), total(n));
            let tgt_blocks: BTreeMap<i64, usize> = layout(n - 1).into_iter().collect();
            for (i, off) in layout(n) {
                let j = n - i;
                let rj = other.rank(j);
                // dx (x) y lands in block (i-1, j)
                if let Some(&toff) = tgt_blocks.get(&(i - 1)) {
                    let dx = self.diff(i);
                    for a in 0..self.rank(i) {
                        for a2 in 0..self.rank(i - 1) {
                            let v = dx.get(a2, a);
                            if v.is_zero() {
                                continue;
                            }
                            for b in 0..rj {
                                m.set(toff + a2 * rj + b, off + a * rj + b, v.clone());
                            }
                        }
                    }
                }
                // (-1)^i x (x) dy lands in block (i, j-1)
                if let Some(&toff) = tgt_blocks.get(&i) {
                    let dy = other.diff(j);
                    let rj1 = other.rank(j - 1);
                    let neg = i.rem_euclid(2) == 1;
                    for a in 0..self.rank(i) {
                        for b in 0..rj {
                            for b2 in 0..rj1 {
                                let v = dy.get(b2, b);
                                if v.is_zero() {
                                    continue;
                                }
                                let v = if neg { -v } else { v.clone() };
                                m.set(toff + a * rj1 + b2, off + a * rj + b, v);
                            }
                        }
                    }
                }
            }
            diffs.insert(n, m);
        }
        let mut c = ChainComplex::new(self.ring, lo, ranks, diffs)?;
        if self.labels.is_some() || other.labels.is_some() {
            let labels = (lo..=hi)
                .map(|n| {
                    let mut out = Vec::new();
                    for i in self.lo..=self.hi {
                        for a in 0..self.rank(i) {
                            for b in 0..other.rank(n - i) {
                                out.push(format!("{}*{}", self.label(i, a), other.label(n - i, b)));
                            }
                        }
                    }
                    out
                })
                .collect();
            c = c.with_labels(labels)?;
        }
        Ok(c)
    }

    /// Direct sum; in each degree the generators of `self` come first.
    pub fn direct_sum(&self, other: &ChainComplex) -> Result<ChainComplex> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, other.ring)));
        }
        if self.is_empty_range() {
            return Ok(other.clone());
        }
        if other.is_empty_range() {
            return Ok(self.clone());
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi.max(other.hi);
        let ranks = (lo..=hi).map(|k| self.rank(k) + other.rank(k)).collect();
        let diffs = (lo..=hi)
            .map(|k| (k, IntMatrix::block_diag(&self.diff(k), &other.diff(k))))
            .collect();
        ChainComplex::new(self.ring, lo, ranks, diffs)
    }

    /// Same complex read over another ring (entries reduced).
    pub fn change_ring(&self, ring: Ring) -> Result<ChainComplex> {
        let diffs = self.degrees().map(|k| (k, self.diff(k))).collect();
        let mut c = ChainComplex::new(ring, self.lo, self.ranks.clone(), diffs)?;
        c.labels = self.labels.clone();
        Ok(c)
    }

    /// Space-separated homology table, e.g. `H0=Z H1=0 H2=Z`.
    pub fn homology_table(&self) -> String {
        self.homology_all()
            .iter()
            .map(|(k, g)| format!("H{k}={g}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for ChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "complex over {} in degrees {}..{}", self.ring, self.lo, self.hi)?;
        for k in self.degrees() {
            write!(f, "  C{k}: rank {}", self.rank(k))?;
            let d = self.diff(k);
            if !d.is_zero() {
                write!(f, ", d = {d}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp2() -> ChainComplex {
        ChainComplex::from_diffs(
            Ring::Integers,
            0,
            vec![1, 1, 1],
            vec![IntMatrix::zeros(0, 1), IntMatrix::zeros(1, 1), IntMatrix::from_i64(1, 1, &[2])],
        )
        .unwrap()
    }

    #[test]
    fn rp2_homology() {
        assert_eq!(rp2().homology_table(), "H0=Z H1=Z/2 H2=0");
    }

    #[test]
    fn d_squared_is_checked() {
        let e = ChainComplex::from_diffs(
            Ring::Integers,
            0,
            vec![1, 1, 1],
            vec![IntMatrix::zeros(0, 1), IntMatrix::from_i64(1, 1, &[1]), IntMatrix::from_i64(1, 1, &[1])],
        );
        assert_eq!(e, Err(Error::InvalidComplex { degree: 2 }));
        // over F_2 the entry 2 vanishes
        let c = ChainComplex::from_diffs(
            Ring::PrimeField(2),
            0,
            vec![1, 1, 1],
            vec![IntMatrix::zeros(0, 1), IntMatrix::from_i64(1, 1, &[2]), IntMatrix::from_i64(1, 1, &[1])],
        );
        assert!(c.is_ok());
    }

    #[test]
    fn shift_round_trip_and_sign() {
        let c = rp2();
        let s1 = c.shift(1);
        assert_eq!(s1.diff(1), IntMatrix::from_i64(1, 1, &[-2]));
        assert_eq!(s1.homology(0), c.homology(1));
        assert_eq!(c.shift(2).diff(0), c.diff(2));
        assert_eq!(s1.shift(-1), c);
    }

    #[test]
    fn empty_complex() {
        let z = ChainComplex::zero(Ring::Integers);
        assert!(z.homology(3).is_zero());
        assert!(z.is_acyclic());
        assert_eq!(z.shift(4).shift(-4), z);
    }

    #[test]
    fn tensor_examples() {
        let circle = ChainComplex::with_zero_differential(Ring::Rationals, 0, vec![1, 1]);
        let t = circle.tensor(&circle).unwrap();
        let dims: Vec<usize> = t.homology_all().iter().map(|(_, g)| g.dim()).collect();
        assert_eq!(dims, vec![1, 2, 1]);
        let c = rp2().change_ring(Ring::PrimeField(2)).unwrap();
        let t = c.tensor(&c).unwrap();
        let dims: Vec<usize> = t.homology_all().iter().map(|(_, g)| g.dim()).collect();
        assert_eq!(dims, vec![1, 2, 3, 2, 1]);
        let p = ChainComplex::point(Ring::Integers);
        assert_eq!(rp2().tensor(&p).unwrap().without_labels(), rp2());
        assert!(matches!(
            rp2().tensor(&circle),
            Err(Error::RingMismatch(_))
        ));
    }
}
