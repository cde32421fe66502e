//! Mapping cones, short exact sequences of complexes, their long exact
//! homology sequences, and the 3x3 grid attached to a morphism of short
//! exact sequences.

mod grid;
mod les;

pub(crate) use grid::shift_map;
pub use grid::{grid_lemma57, ses_grid, GridReport, SesGrid, SesMorphism};
pub use les::{LesSlot, LongExactSequence};

use std::collections::BTreeMap;

use crate::complexes::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::exactlin::span::{apply_in, rank_in, solve_in};
use crate::exactlin::{IntMatrix, RatMatrix, Span};

/// The cone of `f: A -> T[s]`.
///
/// In degree `k` it is `T_{k+s+1} + A_k` (target block first) with
/// differential `[[(-1)^{s+1} d_T, f], [0, d_A]]`, i.e. `T[s+1] + A` with
/// the usual cone differential. For `s = 0` this is `[[-d_T, f], [0, d_A]]`.
pub fn cone(f: &ChainMap) -> Result<ChainComplex> {
    f.check_chain()?;
    let a = f.source();
    let t = f.target();
    let s = f.shift();
    let ts = t.shift(s + 1);
    let (lo, hi) = span_of(&[a, &ts]);
    let ranks: Vec<usize> = (lo..=hi).map(|k| ts.rank(k) + a.rank(k)).collect();
    let mut diffs = BTreeMap::new();
    for k in lo..=hi {
        let top = ts.diff(k).hstack(&f.mat(k));
        let bottom = IntMatrix::zeros(a.rank(k - 1), ts.rank(k)).hstack(&a.diff(k));
        diffs.insert(k, top.vstack(&bottom));
    }
    let mut c = ChainComplex::new(a.ring(), lo, ranks, diffs)?;
    if a.all_labels().is_some() || t.all_labels().is_some() {
        let labels = (lo..=hi)
            .map(|k| {
                let mut l: Vec<String> = (0..ts.rank(k)).map(|i| ts.label(k, i)).collect();
                l.extend((0..a.rank(k)).map(|i| a.label(k, i)));
                l
            })
            .collect();
        c = c.with_labels(labels)?;
    }
    Ok(c)
}

/// Smallest degree window containing all the given complexes.
pub(crate) fn span_of(cs: &[&ChainComplex]) -> (i64, i64) {
    let nonempty: Vec<&&ChainComplex> = cs.iter().filter(|c| !c.is_empty_range()).collect();
    if nonempty.is_empty() {
        return (0, -1);
    }
    let lo = nonempty.iter().map(|c| c.lo()).min().unwrap();
    let hi = nonempty.iter().map(|c| c.hi()).max().unwrap();
    (lo, hi)
}

/// `0 -> T[s+1] -> C(f) -> A -> 0` for `f: A -> T[s]`.
pub fn cone_ses(f: &ChainMap) -> Result<ShortExactSequence> {
    let c = cone(f)?;
    let a = f.source().clone();
    let ts = f.target().shift(f.shift() + 1);
    let mut imats = BTreeMap::new();
    let mut pmats = BTreeMap::new();
    for k in ts.degrees() {
        let m = IntMatrix::identity(ts.rank(k)).vstack(&IntMatrix::zeros(a.rank(k), ts.rank(k)));
        imats.insert(k, m);
    }
    for k in a.degrees() {
        let m = IntMatrix::zeros(a.rank(k), ts.rank(k)).hstack(&IntMatrix::identity(a.rank(k)));
        pmats.insert(k, m);
    }
    let i = ChainMap::new(ts, c.clone(), 0, imats)?;
    let p = ChainMap::new(c, a, 0, pmats)?;
    ShortExactSequence::new(i, p)
}

/// `0 -> A -i-> B -p-> C -> 0`, validated degreewise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortExactSequence {
    i: ChainMap,
    p: ChainMap,
}

impl ShortExactSequence {
    pub fn new(i: ChainMap, p: ChainMap) -> Result<Self> {
        if i.shift() != 0 || p.shift() != 0 {
            return Err(Error::Shape("maps of a short exact sequence have shift 0".into()));
        }
        if i.target() != p.source() {
            return Err(Error::Shape("the middle complexes differ".into()));
        }
        i.check_chain()?;
        p.check_chain()?;
        let ring = i.ring();
        let b = i.target();
        let (lo, hi) = span_of(&[i.source(), b, p.target()]);
        for k in lo..=hi {
            let ik = i.mat(k);
            let pk = p.mat(k);
            if !ring.matrix_is_zero(&pk.mul(&ik)) {
                return Err(Error::ExactnessFailure(format!("p.i != 0 in degree {k}")));
            }
            if rank_in(ring, &ik) != ik.cols() {
                return Err(Error::ExactnessFailure(format!("i is not injective in degree {k}")));
            }
            if Span::new(ring, &pk) != Span::full(ring, pk.rows()) {
                return Err(Error::ExactnessFailure(format!("p is not surjective in degree {k}")));
            }
            if Span::kernel(ring, &pk) != Span::new(ring, &ik) {
                return Err(Error::ExactnessFailure(format!("ker p != im i in degree {k}")));
            }
        }
        Ok(ShortExactSequence { i, p })
    }

    pub fn i(&self) -> &ChainMap {
        &self.i
    }

    pub fn p(&self) -> &ChainMap {
        &self.p
    }

    pub fn a(&self) -> &ChainComplex {
        self.i.source()
    }

    pub fn b(&self) -> &ChainComplex {
        self.i.target()
    }

    pub fn c(&self) -> &ChainComplex {
        self.p.target()
    }

    /// Connecting map `H_k(C) -> H_{k-1}(A)` by the zig-zag: lift a cycle
    /// along `p`, apply `d_B`, pull back along `i`.
    pub fn connecting(&self, k: i64) -> Result<RatMatrix> {
        let ring = self.i.ring();
        let hc = self.c().homology_sq(k);
        let ha = self.a().homology_sq(k - 1);
        let pk = self.p.mat(k);
        let dk = self.b().diff(k);
        let ik = self.i.mat(k - 1);
        let mut cols = Vec::with_capacity(hc.ngens());
        for g in 0..hc.ngens() {
            let z = hc.generator(g);
            let b = solve_in(ring, &pk, &z)
                .ok_or_else(|| Error::ExactnessFailure(format!("p is not onto in degree {k}")))?;
            let db = apply_in(ring, &dk, &b);
            let a = solve_in(ring, &ik, &db).ok_or_else(|| {
                Error::ExactnessFailure(format!("boundary of a lift is not in the image of i in degree {}", k - 1))
            })?;
            cols.push(ha.coords(&a)?);
        }
        Ok(RatMatrix::from_columns(&cols, ha.ngens()).expect("column length"))
    }

    /// The homology long exact sequence, from the top degree down. Slots are
    /// labelled with `names` (for A, B, C).
    pub fn les_named(&self, names: [&str; 3]) -> Result<LongExactSequence> {
        let (lo, hi) = span_of(&[self.a(), self.b(), self.c()]);
        let mut slots = Vec::new();
        let mut maps = Vec::new();
        let mut map_names = Vec::new();
        let cx = [self.a(), self.b(), self.c()];
        for k in (lo..=hi).rev() {
            for (j, c) in cx.iter().enumerate() {
                let sq = c.homology_sq(k);
                slots.push(LesSlot {
                    label: names[j].to_string(),
                    degree: k,
                    group: sq.group(),
                    sq,
                });
            }
            maps.push(self.i.induced(k)?);
            map_names.push(format!("i_{k}"));
            maps.push(self.p.induced(k)?);
            map_names.push(format!("p_{k}"));
            if k > lo {
                maps.push(self.connecting(k)?);
                map_names.push(format!("delta_{k}"));
            }
        }
        let les = LongExactSequence::new(slots, maps, map_names)?;
        les.verify_exact()?;
        Ok(les)
    }
}

/// Homology long exact sequence of a short exact sequence, connecting maps
/// by the zig-zag; exactness is verified.
pub fn snake_les(ses: &ShortExactSequence) -> Result<LongExactSequence> {
    ses.les_named(["A", "B", "C"])
}

/// Maps `H_k(A) -> H_{k+s}(T)` from a chain map, on the same generators the
/// snake sequence of its cone uses.
pub fn induced_on_homology(f: &ChainMap, k: i64) -> Result<RatMatrix> {
    f.induced(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use crate::exactlin::Ring;

    fn ratvec(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    fn times(n: i64) -> ChainMap {
        let a = ChainComplex::with_zero_differential(Ring::Integers, 0, vec![1]);
        ChainMap::from_list(a.clone(), a, 0, vec![IntMatrix::from_i64(1, 1, &[n])]).unwrap()
    }

    #[test]
    fn cone_of_two() {
        let c = cone(&times(2)).unwrap();
        assert_eq!(c.homology(-1).to_string(), "Z/2");
        assert!(c.homology(0).is_zero());
        let ses = cone_ses(&times(2)).unwrap();
        let d = ses.connecting(0).unwrap();
        assert_eq!(d, RatMatrix::from_columns(&[ratvec(&[2])], 1).unwrap());
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = crate::exactlin::IntMatrix::from_i64(1, 1, &[3]);
        let x = ChainComplex::from_diffs(Ring::Integers, 0, vec![1, 1], vec![IntMatrix::zeros(0, 1), c]).unwrap();
        assert!(cone(&ChainMap::identity(&x)).unwrap().is_acyclic());
    }

    #[test]
    fn zero_map_splits() {
        let les = snake_les(&cone_ses(&times(0)).unwrap()).unwrap();
        for (i, m) in les.maps.iter().enumerate() {
            if les.map_names[i].starts_with("delta") {
                assert!(m.is_zero());
            }
        }
    }
}
