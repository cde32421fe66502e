use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactlin::{induced_map, IntMatrix, RatMatrix, Ring};

use super::ChainComplex;

/// A degree-0 chain map `A -> T[s]`, i.e. matrices `mats(k): A_k -> T_{k+s}`
/// with `f d_A = (-1)^s d_T f`.
///
/// Built with [`ChainMap::graded`] the chain condition is not enforced; that
/// is how homotopies and other plain graded maps are represented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    shift: i64,
    mats: Vec<IntMatrix>,
}

impl ChainMap {
    /// Checked constructor. Missing degrees are zero.
    pub fn new(source: ChainComplex, target: ChainComplex, shift: i64, mats: BTreeMap<i64, IntMatrix>) -> Result<Self> {
        let f = ChainMap::graded(source, target, shift, mats)?;
        f.check_chain()?;
        Ok(f)
    }

    /// Unchecked graded map (shapes are still validated).
    pub fn graded(source: ChainComplex, target: ChainComplex, shift: i64, mats: BTreeMap<i64, IntMatrix>) -> Result<Self> {
        if source.ring() != target.ring() {
            return Err(Error::RingMismatch(format!("{} vs {}", source.ring(), target.ring())));
        }
        let ring = source.ring();
        for (&k, m) in &mats {
            let want = (target.rank(k + shift), source.rank(k));
            if m.shape() != want {
                return Err(Error::Shape(format!(
                    "map component at degree {k} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    want.0,
                    want.1
                )));
            }
            if !source.degrees().contains(&k) && !m.is_zero() {
                return Err(Error::Shape(format!("nonzero component outside the source range at {k}")));
            }
        }
        let ms = source
            .degrees()
            .map(|k| match mats.get(&k) {
                Some(m) => ring.reduce_matrix(m),
                None => IntMatrix::zeros(target.rank(k + shift), source.rank(k)),
            })
            .collect();
        Ok(ChainMap {
            source,
            target,
            shift,
            mats: ms,
        })
    }

    pub fn from_list(source: ChainComplex, target: ChainComplex, shift: i64, mats: Vec<IntMatrix>) -> Result<Self> {
        let lo = source.lo();
        let map = mats
            .into_iter()
            .enumerate()
            .map(|(i, m)| (lo + i as i64, m))
            .collect();
        ChainMap::new(source, target, shift, map)
    }

    pub fn zero(source: ChainComplex, target: ChainComplex, shift: i64) -> Result<Self> {
        ChainMap::new(source, target, shift, BTreeMap::new())
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let mats = c.degrees().map(|k| (k, IntMatrix::identity(c.rank(k)))).collect();
        ChainMap::new(c.clone(), c.clone(), 0, mats).expect("identity is a chain map")
    }

    /// Verifies `f_{k-1} d_A(k) = (-1)^s d_T(k+s) f_k` in every degree.
    pub fn check_chain(&self) -> Result<()> {
        let ring = self.ring();
        let sign_neg = self.shift.rem_euclid(2) == 1;
        let lo = self.source.lo().min(self.source.hi());
        for k in lo..=self.source.hi() + 1 {
            let left = self.mat(k - 1).mul(&self.source.diff(k));
            let mut right = self.target.diff(k + self.shift).mul(&self.mat(k));
            if sign_neg {
                right = right.neg();
            }
            if !ring.matrix_is_zero(&left.sub(&right)) {
                return Err(Error::InvalidChainMap { degree: k });
            }
        }
        Ok(())
    }

    pub fn is_chain_map(&self) -> bool {
        self.check_chain().is_ok()
    }

    pub fn ring(&self) -> Ring {
        self.source.ring()
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Component `A_k -> T_{k+s}`.
    pub fn mat(&self, k: i64) -> IntMatrix {
        if self.source.degrees().contains(&k) {
            self.mats[(k - self.source.lo()) as usize].clone()
        } else {
            IntMatrix::zeros(self.target.rank(k + self.shift), self.source.rank(k))
        }
    }

    /// `g . f`; the shifts add.
    pub fn compose(g: &ChainMap, f: &ChainMap) -> Result<ChainMap> {
        if f.target != g.source {
            return Err(Error::Shape("composition: target of f is not the source of g".into()));
        }
        let mats = f
            .source
            .degrees()
            .map(|k| (k, g.mat(k + f.shift).mul(&f.mat(k))))
            .collect();
        ChainMap::graded(f.source.clone(), g.target.clone(), f.shift + g.shift, mats)
    }

    fn combine(&self, other: &ChainMap, neg: bool) -> Result<ChainMap> {
        if self.source != other.source || self.target != other.target || self.shift != other.shift {
            return Err(Error::Shape("maps have different source, target or shift".into()));
        }
        let mats = self
            .source
            .degrees()
            .map(|k| {
                let m = if neg {
                    self.mat(k).sub(&other.mat(k))
                } else {
                    self.mat(k).add(&other.mat(k))
                };
                (k, m)
            })
            .collect();
        ChainMap::graded(self.source.clone(), self.target.clone(), self.shift, mats)
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        self.combine(other, true)
    }

    /// `d_T K + K d_A` for a graded map `K` of shift `s` (plain
    /// differentials, no shift signs); the result has shift `s - 1`. A chain
    /// homotopy between shift-0 maps `f` and `g` has shift 1 and satisfies
    /// `f - g = d K + K d`.
    pub fn boundary_of_homotopy(&self) -> Result<ChainMap> {
        let s = self.shift;
        let mats = self
            .source
            .degrees()
            .map(|k| {
                let dk = self.target.diff(k + s).mul(&self.mat(k));
                (k, dk.add(&self.mat(k - 1).mul(&self.source.diff(k))))
            })
            .collect();
        ChainMap::graded(self.source.clone(), self.target.clone(), s - 1, mats)
    }

    /// The map `H_k(A) -> H_{k+s}(T)` on homology generators.
    pub fn induced(&self, k: i64) -> Result<RatMatrix> {
        let src = self.source.homology_sq(k);
        let tgt = self.target.homology_sq(k + self.shift);
        induced_map(&src, &tgt, &self.mat(k))
    }

    /// Whether every component is injective / surjective / zero.
    pub fn is_zero(&self) -> bool {
        let ring = self.ring();
        self.mats.iter().all(|m| ring.matrix_is_zero(m))
    }
}
