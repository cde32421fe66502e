use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::complexes::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::exactlin::span::maps_equal;
use crate::exactlin::{determinant, IntMatrix, Ring};
use crate::spectra::{FilteredComplex, GysinSequence, TwoLineComplex};

/// Which side of the action split an orbit lies on. `Minus` orbits span a
/// subcomplex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ActionSign {
    Minus,
    Plus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub weight: i64,
    pub sign: Option<ActionSign>,
    pub label: Option<String>,
}

impl Orbit {
    pub fn new(weight: i64) -> Self {
        Orbit {
            weight,
            sign: None,
            label: None,
        }
    }

    pub fn signed(weight: i64, sign: ActionSign) -> Self {
        Orbit {
            weight,
            sign: Some(sign),
            label: None,
        }
    }
}

/// Critical S^1-orbits with weights and the signed counts of the two
/// differential components: `d1` lowers the weight by one, `d2` by two.
/// Counts are `(target, source, value)` triples of orbit indices.
///
/// Each orbit `p` contributes `M_p` in degree `k_p` and `m_p` in degree
/// `k_p + 1`, both at filtration level `k_p`. The total differential is
/// `d1` on the `M` line, `-d1` on the `m` line, and `d2` from `M` to `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseBottS1Datum {
    pub ring: Ring,
    pub orbits: Vec<Orbit>,
    pub d1: Vec<(usize, usize, BigInt)>,
    pub d2: Vec<(usize, usize, BigInt)>,
}

impl MorseBottS1Datum {
    pub fn new(ring: Ring, orbits: Vec<Orbit>, d1: Vec<(usize, usize, BigInt)>, d2: Vec<(usize, usize, BigInt)>) -> Result<Self> {
        let d = MorseBottS1Datum { ring, orbits, d1, d2 };
        d.validate()?;
        Ok(d)
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn name(&self, p: usize) -> String {
        self.orbits[p].label.clone().unwrap_or_else(|| p.to_string())
    }

    pub fn has_split(&self) -> bool {
        self.orbits.iter().any(|o| o.sign.is_some())
    }

    fn square(&self, triples: &[(usize, usize, BigInt)]) -> IntMatrix {
        let n = self.orbits.len();
        let mut m = IntMatrix::zeros(n, n);
        for (t, s, v) in triples {
            m.set(*t, *s, v.clone());
        }
        m
    }

    /// `d1` as an orbit-by-orbit matrix.
    pub fn d1_matrix(&self) -> IntMatrix {
        self.square(&self.d1)
    }

    pub fn d2_matrix(&self) -> IntMatrix {
        self.square(&self.d2)
    }

    pub fn validate(&self) -> Result<()> {
        self.ring.validate()?;
        let n = self.orbits.len();
        for (name, list, drop) in [("d1", &self.d1, 1), ("d2", &self.d2, 2)] {
            let mut seen = BTreeSet::new();
            for (t, s, _) in list {
                if *t >= n || *s >= n {
                    return Err(Error::BadParams(format!("{name} entry ({t}, {s}) refers to a missing orbit")));
                }
                if !seen.insert((*t, *s)) {
                    return Err(Error::BadParams(format!("{name} entry ({t}, {s}) given twice")));
                }
                let w = self.orbits[*s].weight - self.orbits[*t].weight;
                if w != drop {
                    return Err(Error::BadParams(format!(
                        "{name} entry ({t}, {s}) drops the weight by {w}, expected {drop}"
                    )));
                }
            }
        }
        let d1 = self.d1_matrix();
        let d2 = self.d2_matrix();
        let ring = self.ring;
        let dd = ring.reduce_matrix(&d1.mul(&d1));
        if let Some((t, s, _)) = dd.to_triples().into_iter().find(|x| !x.2.is_zero()) {
            return Err(Error::DSquaredNonzero(format!(
                "d1 d1 has a nonzero coefficient from orbit {} to {}",
                self.name(s),
                self.name(t)
            )));
        }
        let comm = ring.reduce_matrix(&d1.mul(&d2).sub(&d2.mul(&d1)));
        if let Some((t, s, _)) = comm.to_triples().into_iter().find(|x| !x.2.is_zero()) {
            return Err(Error::DSquaredNonzero(format!(
                "d1 d2 != d2 d1 from orbit {} to {}",
                self.name(s),
                self.name(t)
            )));
        }
        let signed = self.orbits.iter().filter(|o| o.sign.is_some()).count();
        if signed != 0 && signed != n {
            return Err(Error::BadParams("either every orbit or no orbit carries an action sign".into()));
        }
        if signed == n {
            for (name, list) in [("d1", &self.d1), ("d2", &self.d2)] {
                for (t, s, v) in list {
                    if ring.int_is_zero(v) {
                        continue;
                    }
                    if self.orbits[*s].sign == Some(ActionSign::Minus) && self.orbits[*t].sign == Some(ActionSign::Plus) {
                        return Err(Error::SubcomplexViolation(format!(
                            "{name} maps the Minus orbit {} to the Plus orbit {}",
                            self.name(*s),
                            self.name(*t)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Orbits of each weight, in input order, and each orbit's position.
    pub(crate) fn layout_of(&self, keep: impl Fn(usize) -> bool) -> (BTreeMap<i64, Vec<usize>>, BTreeMap<usize, usize>) {
        let mut by_w: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, o) in self.orbits.iter().enumerate() {
            if keep(i) {
                by_w.entry(o.weight).or_default().push(i);
            }
        }
        let mut pos = BTreeMap::new();
        for list in by_w.values() {
            for (j, &i) in list.iter().enumerate() {
                pos.insert(i, j);
            }
        }
        (by_w, pos)
    }

    /// The complex spanned by the orbits selected by `keep`, graded by
    /// weight, with the part of `d1` between them. Generators are labelled
    /// `{prefix}_{name}`.
    pub(crate) fn line(&self, keep: impl Fn(usize) -> bool + Copy, prefix: &str) -> Result<ChainComplex> {
        let (by_w, pos) = self.layout_of(keep);
        if by_w.is_empty() {
            return Ok(ChainComplex::zero(self.ring));
        }
        let lo = *by_w.keys().next().unwrap();
        let hi = *by_w.keys().last().unwrap();
        let rank = |k: i64| by_w.get(&k).map_or(0, |v| v.len());
        let mut diffs: BTreeMap<i64, IntMatrix> = (lo..=hi).map(|k| (k, IntMatrix::zeros(rank(k - 1), rank(k)))).collect();
        for (t, s, v) in &self.d1 {
            if keep(*t) && keep(*s) {
                let k = self.orbits[*s].weight;
                diffs.get_mut(&k).unwrap().set(pos[t], pos[s], v.clone());
            }
        }
        let labels = (lo..=hi)
            .map(|k| by_w.get(&k).map_or(Vec::new(), |v| v.iter().map(|&i| format!("{prefix}_{}", self.name(i))).collect()))
            .collect();
        ChainComplex::new(self.ring, lo, (lo..=hi).map(rank).collect(), diffs)?.with_labels(labels)
    }

    /// The equivariant complex: one generator per orbit in degree equal to
    /// its weight, differential `d1`.
    pub fn equivariant_complex(&self) -> Result<ChainComplex> {
        self.line(|_| true, "S")
    }

    /// `d2` restricted to the selected orbits, as matrices `A_k -> A'_{k-2}`.
    pub(crate) fn d2_mats(&self, keep: impl Fn(usize) -> bool + Copy) -> BTreeMap<i64, IntMatrix> {
        let (by_w, pos) = self.layout_of(keep);
        let rank = |k: i64| by_w.get(&k).map_or(0, |v| v.len());
        let mut mats: BTreeMap<i64, IntMatrix> = by_w.keys().map(|&k| (k, IntMatrix::zeros(rank(k - 2), rank(k)))).collect();
        for (t, s, v) in &self.d2 {
            if keep(*t) && keep(*s) {
                let k = self.orbits[*s].weight;
                mats.get_mut(&k).unwrap().set(pos[t], pos[s], v.clone());
            }
        }
        mats
    }

    /// The two-line complex with `A` the `M` line, `A'` the `m` line (both
    /// carrying `d1`) and `f = d2`.
    pub fn two_line(&self) -> Result<TwoLineComplex> {
        self.validate()?;
        let a = self.line(|_| true, "M")?;
        let ap = self.line(|_| true, "m")?;
        TwoLineComplex::from_parts(a, ap, self.d2_mats(|_| true))
    }
}

/// The filtered Morse-Bott complex of the datum.
pub fn assemble_morse_bott(d: &MorseBottS1Datum) -> Result<FilteredComplex> {
    let fc = d.two_line()?.filtered();
    let drops = filtration_drops(&fc);
    if drops.iter().any(|&x| x != 1 && x != 2) {
        return Err(Error::InvalidFiltration(format!("differential has filtration drops {drops:?}")));
    }
    Ok(fc)
}

/// The set of level drops `level(source) - level(target)` over all nonzero
/// differential entries.
pub fn filtration_drops(fc: &FilteredComplex) -> BTreeSet<i64> {
    let c = fc.complex();
    let mut out = BTreeSet::new();
    for k in c.degrees() {
        for (i, j, v) in c.diff(k).to_triples() {
            if !c.ring().int_is_zero(&v) {
                out.insert(fc.level(k, j) - fc.level(k - 1, i));
            }
        }
    }
    out
}

/// The identification of the first page with `SC (x) H(S^1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiReport {
    /// `E^1` with differential `d^1`, on the page generators.
    pub e1: ChainComplex,
    /// Filtration level of every `E^1` generator, per degree.
    pub e1_levels: Vec<Vec<i64>>,
    /// `SC (x) H(S^1)` with `H(S^1)` spanned by `M` (degree 0) and `m`
    /// (degree 1).
    pub model: ChainComplex,
    /// The chain isomorphism `e1 -> model`.
    pub phi: ChainMap,
}

fn is_unit(ring: Ring, x: &BigInt) -> bool {
    match ring {
        Ring::Integers => x.magnitude().is_one(),
        _ => !ring.int_is_zero(x),
    }
}

/// Builds `E^1` of the assembled complex and checks that
/// `M_p -> S_p (x) M`, `m_p -> (-1)^{k_p + 1} S_p (x) m` is a degree- and
/// filtration-preserving chain isomorphism onto `SC (x) H(S^1)`. The sign
/// on the `m` line compensates for its `-d1`.
pub fn phi_e1(d: &MorseBottS1Datum) -> Result<PhiReport> {
    let fc = assemble_morse_bott(d)?;
    let tot = fc.complex().clone();
    let ring = d.ring;
    // no filtration-preserving part: E^0 = E^1
    for (p, n) in fc.positions() {
        if !fc.page_differential(0, p, n)?.is_zero() {
            return Err(Error::Mismatch(format!("d^0 is nonzero at ({p}, {})", n - p)));
        }
    }
    let mut positions: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    for (p, n) in fc.positions() {
        positions.entry(n).or_default().push(p);
    }
    // page generators in each degree, projected onto their level
    let mut gens: BTreeMap<i64, IntMatrix> = BTreeMap::new();
    let mut levels: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    let mut offsets: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for n in tot.degrees() {
        let mut cols: Vec<Vec<BigInt>> = Vec::new();
        let mut lv = Vec::new();
        for &p in positions.get(&n).map(|v| v.as_slice()).unwrap_or(&[]) {
            let e = fc.entry(1, p, n);
            offsets.insert((p, n), cols.len());
            let g = e.generators();
            for j in 0..g.cols() {
                let col = (0..g.rows())
                    .map(|i| if fc.level(n, i) == p { g.get(i, j).clone() } else { BigInt::zero() })
                    .collect();
                cols.push(col);
                lv.push(p);
            }
        }
        let m = IntMatrix::from_fn(tot.rank(n), cols.len(), |i, j| cols[j][i].clone());
        gens.insert(n, m);
        levels.insert(n, lv);
    }
    let rank_e1 = |n: i64| gens.get(&n).map_or(0, |m| m.cols());
    let mut diffs = BTreeMap::new();
    for n in tot.degrees() {
        let mut m = IntMatrix::zeros(rank_e1(n - 1), rank_e1(n));
        for &p in positions.get(&n).map(|v| v.as_slice()).unwrap_or(&[]) {
            let dm = fc.page_differential(1, p, n)?;
            if dm.rows() == 0 || dm.cols() == 0 {
                continue;
            }
            let dm = dm
                .to_integer()
                .ok_or_else(|| Error::Mismatch(format!("d^1 is not integral at ({p}, {})", n - p)))?;
            let so = offsets[&(p, n)];
            let to = offsets[&(p - 1, n - 1)];
            for (i, j, v) in dm.to_triples() {
                m.set(to + i, so + j, v);
            }
        }
        diffs.insert(n, m);
    }
    let (lo, hi) = (tot.lo(), tot.hi());
    let e1 = if tot.is_empty_range() {
        ChainComplex::zero(ring)
    } else {
        ChainComplex::new(ring, lo, (lo..=hi).map(rank_e1).collect(), diffs)?
    };
    let e1_levels: Vec<Vec<i64>> = tot.degrees().map(|n| levels[&n].clone()).collect();

    let sc = d.equivariant_complex()?;
    let circle = ChainComplex::with_zero_differential(ring, 0, vec![1, 1])
        .with_labels(vec![vec!["M".into()], vec!["m".into()]])?;
    let model = sc.tensor(&circle)?;

    // chain-level Phi on the total complex, generator by generator
    let t = d.two_line()?;
    let (by_w, pos) = d.layout_of(|_| true);
    let model_index = |x: usize, which: usize| -> (i64, usize) {
        // S_x (x) M or S_x (x) m; left degree ascending, left index, right index
        let k = d.orbits[x].weight;
        let n = k + which as i64;
        let mut off = 0;
        for (&i, list) in &by_w {
            if i == k {
                return (n, off + pos[&x]);
            }
            let r = circle.rank(n - i);
            off += list.len() * r;
        }
        unreachable!("orbit weight is present")
    };
    let mut mats = BTreeMap::new();
    for n in tot.degrees() {
        let mut phi_tot = IntMatrix::zeros(model.rank(n), tot.rank(n));
        // total_n = A'_{n-1} (m line) + A_n (M line)
        let m_line = t.aprime().rank(n - 1);
        for (x, o) in d.orbits.iter().enumerate() {
            if o.weight == n - 1 {
                let (_, row) = model_index(x, 1);
                let sign = if (o.weight + 1).rem_euclid(2) == 0 { 1 } else { -1 };
                phi_tot.set(row, pos[&x], BigInt::from(sign));
            }
            if o.weight == n {
                let (_, row) = model_index(x, 0);
                phi_tot.set(row, m_line + pos[&x], BigInt::one());
            }
        }
        let phi = phi_tot.mul(&gens[&n]);
        // filtration: level of S_x (x) y is the weight of x
        for (i, j, v) in phi.to_triples() {
            if ring.int_is_zero(&v) {
                continue;
            }
            let src_level = levels[&n][j];
            let tgt_level = model_level(&model, n, i, &by_w, &circle);
            if src_level != tgt_level {
                return Err(Error::Mismatch(format!("Phi changes the level of a generator in degree {n}")));
            }
        }
        if phi.rows() != phi.cols() || !is_unit(ring, &ring.reduce_int(&determinant(&phi))) {
            return Err(Error::Mismatch(format!("Phi is not invertible in degree {n}")));
        }
        mats.insert(n, phi);
    }
    let phi = ChainMap::new(e1.clone(), model.clone(), 0, mats).map_err(|e| match e {
        Error::InvalidChainMap { degree } => Error::Mismatch(format!("Phi does not intertwine d^1 with the model differential in degree {degree}")),
        e => e,
    })?;
    Ok(PhiReport {
        e1,
        e1_levels,
        model,
        phi,
    })
}

fn model_level(model: &ChainComplex, n: i64, row: usize, by_w: &BTreeMap<i64, Vec<usize>>, circle: &ChainComplex) -> i64 {
    let mut off = 0;
    for (&i, list) in by_w {
        let r = list.len() * circle.rank(n - i);
        if row < off + r {
            return i;
        }
        off += r;
    }
    unreachable!("row {row} out of range for degree {n} of rank {}", model.rank(n))
}

/// The Gysin sequence of the datum. Slots are `H(m)` (the `m` line),
/// `H(tot)` and `H(M)`; maps are renamed `M_p: H_{p-1}(m) -> H_p(tot)`,
/// `E_p: H_p(tot) -> H_p(M)` and `D_p: H_p(M) -> H_{p-2}(m)`.
pub fn gysin_theorem11(d: &MorseBottS1Datum) -> Result<GysinSequence> {
    let mut g = d.two_line()?.gysin()?;
    for s in &mut g.les.slots {
        s.label = match s.label.as_str() {
            "A'" => "m".to_string(),
            "A" => "M".to_string(),
            other => other.to_string(),
        };
    }
    for n in &mut g.les.map_names {
        let renamed = if let Some(rest) = n.strip_prefix("I_") {
            format!("M_{rest}")
        } else if let Some(rest) = n.strip_prefix("P_") {
            format!("E_{rest}")
        } else if let Some(rest) = n.strip_prefix("d2_") {
            format!("D_{rest}")
        } else {
            n.clone()
        };
        *n = renamed;
    }
    Ok(g)
}

/// The chain-level operator `(x, y) -> (y, 0)` and its checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BvReport {
    /// Degree +1 map on the total complex; it anti-commutes with `d`.
    pub delta: ChainMap,
    /// Induced maps `H_k(tot) -> H_{k+1}(tot)`.
    pub induced: BTreeMap<i64, crate::exactlin::RatMatrix>,
    /// Degrees where the induced map was compared with `M E`.
    pub degrees: Vec<i64>,
}

/// Builds the chain-level BV operator on `A'_{k-1} + A_k`, checks that it
/// is a (shift +1) chain map with square zero, and that on homology it
/// equals `M_{k+1} E_k` from the Gysin sequence.
pub fn bv_delta(d: &MorseBottS1Datum) -> Result<BvReport> {
    let t = d.two_line()?;
    let tot = t.total();
    let mut mats = BTreeMap::new();
    for k in tot.degrees() {
        let ra = t.a().rank(k);
        let mut m = IntMatrix::zeros(tot.rank(k + 1), tot.rank(k));
        // y in A_k (after the A'_{k-1} block) goes to A'_k, the first block
        let off = t.aprime().rank(k - 1);
        for i in 0..ra {
            m.set(i, off + i, BigInt::one());
        }
        mats.insert(k, m);
    }
    let delta = ChainMap::new(tot.clone(), tot.clone(), 1, mats)?;
    let sq = ChainMap::compose(&delta, &delta)?;
    if !sq.is_zero() {
        return Err(Error::Mismatch("the BV operator does not square to zero".into()));
    }
    let g = t.gysin()?;
    let mut report = BvReport {
        delta: delta.clone(),
        induced: BTreeMap::new(),
        degrees: Vec::new(),
    };
    for k in tot.degrees() {
        let ind = delta.induced(k)?;
        let h_next = tot.homology_sq(k + 1);
        let me = match (g.i_maps.get(&(k + 1)), g.p_maps.get(&k)) {
            (Some(i), Some(p)) => i.mul(p),
            _ => crate::exactlin::RatMatrix::zeros(h_next.ngens(), tot.homology_sq(k).ngens()),
        };
        if !maps_equal(&h_next, &ind, &me) {
            return Err(Error::Mismatch(format!("induced BV operator differs from M E in degree {k}")));
        }
        report.induced.insert(k, ind);
        report.degrees.push(k);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Signed;

    pub(crate) fn hopf_datum() -> MorseBottS1Datum {
        MorseBottS1Datum::new(Ring::Integers, vec![Orbit::new(2), Orbit::new(0)], vec![], vec![(1, 0, 1.into())]).unwrap()
    }

    #[test]
    fn empty_and_single_orbit() {
        let e = MorseBottS1Datum::new(Ring::Integers, vec![], vec![], vec![]).unwrap();
        assert!(assemble_morse_bott(&e).unwrap().complex().is_empty_range());
        let one = MorseBottS1Datum::new(Ring::Integers, vec![Orbit::new(3)], vec![], vec![]).unwrap();
        let fc = assemble_morse_bott(&one).unwrap();
        assert_eq!(fc.complex().homology_table(), "H3=Z H4=Z");
    }

    #[test]
    fn hopf_pattern() {
        let d = hopf_datum();
        let fc = assemble_morse_bott(&d).unwrap();
        assert_eq!(fc.complex().homology_table(), "H0=Z H1=0 H2=0 H3=Z");
        assert_eq!(filtration_drops(&fc), [2].into_iter().collect());
        let g = gysin_theorem11(&d).unwrap();
        assert!(g.les.map_names.iter().any(|n| n == "D_2"));
        assert_eq!(g.d_maps[&2].get(0, 0).abs(), BigRational::one());
        bv_delta(&d).unwrap();
        phi_e1(&d).unwrap();
    }

    #[test]
    fn phi_with_a_three() {
        let d = MorseBottS1Datum::new(Ring::Integers, vec![Orbit::new(1), Orbit::new(0)], vec![(1, 0, 3.into())], vec![]).unwrap();
        let r = phi_e1(&d).unwrap();
        assert_eq!(r.e1.homology_table(), r.model.homology_table());
        assert_eq!(r.model.homology_table(), "H0=Z/3 H1=Z/3 H2=0");
    }

    #[test]
    fn rejects_bad_data() {
        let bad = MorseBottS1Datum::new(Ring::Integers, vec![Orbit::new(2), Orbit::new(0)], vec![(1, 0, 1.into())], vec![]);
        assert!(matches!(bad, Err(Error::BadParams(_))));
        let sub = MorseBottS1Datum::new(
            Ring::Integers,
            vec![Orbit::signed(1, ActionSign::Minus), Orbit::signed(0, ActionSign::Plus)],
            vec![(1, 0, 1.into())],
            vec![],
        );
        assert!(matches!(sub, Err(Error::SubcomplexViolation(_))));
        let nc = MorseBottS1Datum::new(
            Ring::Integers,
            vec![Orbit::new(3), Orbit::new(1), Orbit::new(0)],
            vec![(2, 1, 1.into())],
            vec![(1, 0, 1.into())],
        );
        assert!(matches!(nc, Err(Error::DSquaredNonzero(_))));
    }

    #[test]
    fn split_when_d2_vanishes() {
        let d = MorseBottS1Datum::new(Ring::Rationals, vec![Orbit::new(0), Orbit::new(2)], vec![], vec![]).unwrap();
        let g = gysin_theorem11(&d).unwrap();
        assert!(g.d_maps.values().all(|m| m.is_zero()));
        let bv = bv_delta(&d).unwrap();
        // H_0(tot) = <M_0> goes to <m_0> in degree 1
        assert!(!bv.induced[&0].is_zero());
    }
}
