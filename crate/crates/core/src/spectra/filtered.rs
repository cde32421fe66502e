use std::collections::BTreeMap;

use crate::complexes::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::exactlin::span::{identity_on, image_lattice, kernel_lattice, maps_equal};
use crate::exactlin::{induced_map, FGAbelianGroup, RatMatrix, Span, Subquotient};

/// A chain complex with an increasing filtration given by one integer level
/// per generator. The differential never raises the level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    complex: ChainComplex,
    levels: Vec<Vec<i64>>,
}

impl FilteredComplex {
    /// `levels[i]` lists the levels of the generators in degree `lo + i`.
    pub fn new(complex: ChainComplex, levels: Vec<Vec<i64>>) -> Result<Self> {
        if levels.len() != complex.ranks().len() {
            return Err(Error::InvalidFiltration(format!(
                "levels given for {} degrees, the complex has {}",
                levels.len(),
                complex.ranks().len()
            )));
        }
        for (i, (l, &r)) in levels.iter().zip(complex.ranks()).enumerate() {
            if l.len() != r {
                return Err(Error::InvalidFiltration(format!(
                    "degree {} has {r} generators but {} levels",
                    complex.lo() + i as i64,
                    l.len()
                )));
            }
        }
        let fc = FilteredComplex { complex, levels };
        fc.validate()?;
        Ok(fc)
    }

    /// Level equal to degree (the "stupid" filtration).
    pub fn tautological(complex: ChainComplex) -> Self {
        let levels = complex
            .degrees()
            .map(|k| vec![k; complex.rank(k)])
            .collect();
        FilteredComplex { complex, levels }
    }

    fn validate(&self) -> Result<()> {
        let ring = self.complex.ring();
        for k in self.complex.degrees() {
            let d = self.complex.diff(k);
            for (i, j, v) in d.to_triples() {
                if ring.int_is_zero(&v) {
                    continue;
                }
                let (src, tgt) = (self.level(k, j), self.level(k - 1, i));
                if tgt > src {
                    return Err(Error::InvalidFiltration(format!(
                        "differential raises the level of generator {j} in degree {k} from {src} to {tgt}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn level(&self, k: i64, i: usize) -> i64 {
        self.levels[(k - self.complex.lo()) as usize][i]
    }

    pub fn levels(&self, k: i64) -> &[i64] {
        if self.complex.degrees().contains(&k) {
            &self.levels[(k - self.complex.lo()) as usize]
        } else {
            &[]
        }
    }

    pub fn all_levels(&self) -> &[Vec<i64>] {
        &self.levels
    }

    /// `(min, max)` of all levels, `None` for a complex without generators.
    pub fn level_range(&self) -> Option<(i64, i64)> {
        let all: Vec<i64> = self.levels.iter().flatten().copied().collect();
        Some((*all.iter().min()?, *all.iter().max()?))
    }

    /// Page from which on nothing changes.
    pub fn r_infinity(&self) -> usize {
        match self.level_range() {
            Some((lo, hi)) => (hi - lo) as usize + 2,
            None => 0,
        }
    }

    /// `F_p C_n`.
    pub fn fspan(&self, p: i64, n: i64) -> Span {
        let idx: Vec<usize> = self
            .levels(n)
            .iter()
            .enumerate()
            .filter(|(_, &l)| l <= p)
            .map(|(i, _)| i)
            .collect();
        Span::axes(self.complex.ring(), self.complex.rank(n), &idx)
    }

    /// `Z^r_p C_n = F_p C_n` intersected with `d^{-1}(F_{p-r} C_{n-1})`.
    pub fn z(&self, r: i64, p: i64, n: i64) -> Span {
        let fp = self.fspan(p, n);
        let pre = Span::preimage(&self.complex.diff(n), &self.fspan(p - r, n - 1));
        fp.intersect(&pre)
    }

    /// `E^r_p` in total degree `n`:
    /// `Z^r_p / (Z^{r-1}_{p-1} + d Z^{r-1}_{p+r-1})`.
    pub fn entry(&self, r: usize, p: i64, n: i64) -> Subquotient {
        let r = r as i64;
        let num = self.z(r, p, n);
        let lower = self.z(r - 1, p - 1, n);
        let bd = self.z(r - 1, p + r - 1, n + 1).image(&self.complex.diff(n + 1));
        Subquotient::new(num, lower.sum(&bd)).expect("page denominators lie in the numerators")
    }

    /// `d^r: E^r_p(n) -> E^r_{p-r}(n-1)`.
    pub fn page_differential(&self, r: usize, p: i64, n: i64) -> Result<RatMatrix> {
        let src = self.entry(r, p, n);
        let tgt = self.entry(r, p - r as i64, n - 1);
        induced_map(&src, &tgt, &self.complex.diff(n))
    }

    /// Homology positions `(p, n)` that can carry something: some
    /// generator of degree `n` has level `p`.
    pub fn positions(&self) -> Vec<(i64, i64)> {
        let mut out = std::collections::BTreeSet::new();
        for n in self.complex.degrees() {
            for &l in self.levels(n) {
                out.insert((l, n));
            }
        }
        out.into_iter().collect()
    }

    /// Pages `0..=r_max` with their differentials.
    pub fn spectral_pages(&self, r_max: usize) -> Result<SpectralPages> {
        let mut entries = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        let positions = self.positions();
        for r in 0..=r_max {
            for &(p, n) in &positions {
                entries.insert((r, p, n - p), self.entry(r, p, n));
            }
            for &(p, n) in &positions {
                diffs.insert((r, p, n - p), self.page_differential(r, p, n)?);
            }
        }
        let rinf = self.r_infinity();
        let einf = positions
            .iter()
            .map(|&(p, n)| ((p, n - p), self.entry(rinf, p, n)))
            .collect();
        Ok(SpectralPages {
            fc: self.clone(),
            r_max,
            r_inf: rinf,
            entries,
            diffs,
            e_infinity: einf,
        })
    }

    /// The filtration induced on `H_n`: graded pieces
    /// `(F_p Z + B) / (F_{p-1} Z + B)` as subquotients of the chains.
    pub fn homology_graded_piece(&self, p: i64, n: i64) -> Subquotient {
        let cyc = self.complex.cycles(n);
        let bd = self.complex.boundaries(n);
        let num = self.fspan(p, n).intersect(&cyc).sum(&bd);
        let den = self.fspan(p - 1, n).intersect(&cyc).sum(&bd);
        Subquotient::new(num, den).expect("nested")
    }
}

/// Pages of the spectral sequence of a filtered complex. Entries are keyed
/// by `(r, p, q)` with total degree `n = p + q`.
#[derive(Clone, Debug)]
pub struct SpectralPages {
    fc: FilteredComplex,
    pub r_max: usize,
    pub r_inf: usize,
    pub entries: BTreeMap<(usize, i64, i64), Subquotient>,
    pub diffs: BTreeMap<(usize, i64, i64), RatMatrix>,
    pub e_infinity: BTreeMap<(i64, i64), Subquotient>,
}

impl SpectralPages {
    pub fn filtered_complex(&self) -> &FilteredComplex {
        &self.fc
    }

    pub fn group(&self, r: usize, p: i64, q: i64) -> FGAbelianGroup {
        match self.entries.get(&(r, p, q)) {
            Some(sq) => sq.group(),
            None => FGAbelianGroup::zero(self.fc.complex.ring()),
        }
    }

    /// `H(E^r, d^r)` at `(p, q)`, computed from the presentations of the
    /// page groups and the page differentials alone.
    pub fn page_homology(&self, r: usize, p: i64, q: i64) -> FGAbelianGroup {
        let ring = self.fc.complex.ring();
        let Some(here) = self.entries.get(&(r, p, q)) else {
            return FGAbelianGroup::zero(ring);
        };
        let ri = r as i64;
        let out = self.diffs.get(&(r, p, q));
        let ker = match (out, self.entries.get(&(r, p - ri, q + ri - 1))) {
            (Some(d), Some(tgt)) => kernel_lattice(tgt, d),
            _ => Span::full(ring, here.ngens()),
        };
        let inc = self.diffs.get(&(r, p + ri, q - ri + 1));
        let im = match inc {
            Some(d) => image_lattice(here, d),
            None => here.relations(),
        };
        Subquotient::new(ker, im).expect("d^2 = 0 on pages").group()
    }

    /// Checks `H(E^r, d^r) = E^{r+1}` at every position for `r < r_max`.
    pub fn check_recursion(&self) -> Result<()> {
        for r in 0..self.r_max {
            for &(rr, p, q) in self.entries.keys() {
                if rr != r {
                    continue;
                }
                let h = self.page_homology(r, p, q);
                let next = self.group(r + 1, p, q);
                if h != next {
                    return Err(Error::Mismatch(format!(
                        "H(E^{r}) = {h} but E^{} = {next} at (p, q) = ({p}, {q})",
                        r + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Checks that `E^inf` matches the filtration induced on homology: over
    /// a field, total dimensions agree; over any ring, each `E^inf_{p,q}`
    /// equals the graded piece `F_p H_n / F_{p-1} H_n` as a group, and the
    /// underlying lattices agree.
    pub fn check_convergence(&self) -> Result<()> {
        let fc = &self.fc;
        let c = &fc.complex;
        for n in c.degrees() {
            let h = c.homology(n);
            let mut total = 0;
            for (&(p, q), e) in &self.e_infinity {
                if p + q != n {
                    continue;
                }
                total += e.group().dim();
                let piece = fc.homology_graded_piece(p, n);
                if piece.group() != e.group() {
                    return Err(Error::Mismatch(format!(
                        "E^inf_({p},{q}) = {} but the graded piece of H_{n} is {}",
                        e.group(),
                        piece.group()
                    )));
                }
                // E^inf numerator is F_p Z; its denominator must be
                // F_p Z intersected with (F_{p-1} Z + B)
                let fpz = fc.fspan(p, n).intersect(&c.cycles(n));
                let lower = fc.fspan(p - 1, n).intersect(&c.cycles(n)).sum(&c.boundaries(n));
                if e.num() != &fpz || e.den() != &fpz.intersect(&lower) {
                    return Err(Error::Mismatch(format!("E^inf lattices differ from the homology filtration at ({p},{q})")));
                }
            }
            if c.ring().is_field() && total != h.dim() {
                return Err(Error::Mismatch(format!(
                    "sum of E^inf dimensions in degree {n} is {total}, H_{n} has dimension {}",
                    h.dim()
                )));
            }
        }
        Ok(())
    }

    /// Whether all differentials from page `r` on vanish.
    pub fn degenerates_from(&self, r: usize) -> bool {
        self.diffs
            .iter()
            .filter(|(&(rr, _, _), _)| rr >= r)
            .all(|(_, m)| m.is_zero())
    }

    /// One line per nonzero entry: `E^r_{p,q} = G`.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for (&(r, p, q), sq) in &self.entries {
            if sq.is_trivial() {
                continue;
            }
            out.push_str(&format!("E^{r}_({p},{q}) = {}", sq.group()));
            let d = &self.diffs[&(r, p, q)];
            if !d.is_zero() {
                out.push_str(&format!("   d^{r} = {d}"));
            }
            out.push('\n');
        }
        for (&(p, q), sq) in &self.e_infinity {
            if !sq.is_trivial() {
                out.push_str(&format!("E^inf_({p},{q}) = {}\n", sq.group()));
            }
        }
        out
    }
}

/// Smallest `k >= 0` with `K(F_l) in F_{l+k}` for a graded map between
/// filtered complexes. Finite filtrations always give a finite order.
pub fn filtered_order(k: &ChainMap, source: &FilteredComplex, target: &FilteredComplex) -> usize {
    let ring = k.ring();
    let mut order = 0i64;
    for d in k.source().degrees() {
        for (i, j, v) in k.mat(d).to_triples() {
            if ring.int_is_zero(&v) {
                continue;
            }
            let rise = target.level(d + k.shift(), i) - source.level(d, j);
            order = order.max(rise);
        }
    }
    order as usize
}

/// A filtration-preserving chain map between filtered complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredMap {
    pub map: ChainMap,
    pub source: FilteredComplex,
    pub target: FilteredComplex,
}

impl FilteredMap {
    pub fn new(map: ChainMap, source: FilteredComplex, target: FilteredComplex) -> Result<Self> {
        if map.source() != source.complex() || map.target() != target.complex() {
            return Err(Error::Shape("filtered map does not match its complexes".into()));
        }
        map.check_chain()?;
        let ord = filtered_order(&map, &source, &target);
        if ord != 0 {
            return Err(Error::InvalidFiltration(format!("map raises filtration by {ord}")));
        }
        Ok(FilteredMap { map, source, target })
    }

    /// The map `E^r_p(n) -> E^r_p(n + s)`.
    pub fn page_map(&self, r: usize, p: i64, n: i64) -> Result<RatMatrix> {
        let src = self.source.entry(r, p, n);
        let tgt = self.target.entry(r, p, n + self.map.shift());
        induced_map(&src, &tgt, &self.map.mat(n))
    }

    pub fn compose(g: &FilteredMap, f: &FilteredMap) -> Result<FilteredMap> {
        let m = ChainMap::compose(&g.map, &f.map)?;
        FilteredMap::new(m, f.source.clone(), g.target.clone())
    }
}

fn check_homotopy(f: &ChainMap, g: &ChainMap, k: &ChainMap) -> Result<()> {
    if k.shift() != f.shift() + 1 || k.source() != f.source() || k.target() != f.target() {
        return Err(Error::Shape("homotopy has the wrong source, target or shift".into()));
    }
    let diff = f.sub(g)?;
    let dk = k.boundary_of_homotopy()?;
    let ring = f.ring();
    for d in f.source().degrees() {
        if !ring.matrix_is_zero(&diff.mat(d).sub(&dk.mat(d))) {
            return Err(Error::NotAHomotopy { degree: d });
        }
    }
    Ok(())
}

/// Whether `f` and `g` induce the same maps on page `r`, given a homotopy
/// `K` with `f - g = dK + Kd`. For `K` of order `k` the maps agree on every
/// page `r > k`.
pub fn homotopy_page_agreement(f: &FilteredMap, g: &FilteredMap, k: &ChainMap, r: usize) -> Result<bool> {
    check_homotopy(&f.map, &g.map, k)?;
    for (p, n) in f.source.positions() {
        let a = f.page_map(r, p, n)?;
        let b = g.page_map(r, p, n)?;
        let tgt = f.target.entry(r, p, n + f.map.shift());
        if !maps_equal(&tgt, &a, &b) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Page-2 matrices of a filtered homotopy equivalence, certified to be
/// mutually inverse isomorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoReport {
    /// `(p, q)` to the page-2 matrix of `sigma12`.
    pub forward: BTreeMap<(i64, i64), RatMatrix>,
    /// `(p, q)` to the page-2 matrix of `sigma21`.
    pub backward: BTreeMap<(i64, i64), RatMatrix>,
}

/// Given `sigma12: C1 -> C2`, `sigma21: C2 -> C1` and homotopies of order at
/// most one with `sigma21 sigma12 - id = dK1 + K1 d` and
/// `sigma12 sigma21 - id = dK2 + K2 d`, returns the page-2 maps and checks
/// that they are inverse to each other.
pub fn page_iso_from_filtered_homotopy_equivalence(
    s12: &FilteredMap,
    s21: &FilteredMap,
    k1: &ChainMap,
    k2: &ChainMap,
) -> Result<IsoReport> {
    let c1 = &s12.source;
    let c2 = &s12.target;
    if &s21.source != c2 || &s21.target != c1 {
        return Err(Error::Shape("the two maps do not go back and forth".into()));
    }
    let comp1 = ChainMap::compose(&s21.map, &s12.map)?;
    let comp2 = ChainMap::compose(&s12.map, &s21.map)?;
    check_homotopy(&comp1, &ChainMap::identity(c1.complex()), k1)?;
    check_homotopy(&comp2, &ChainMap::identity(c2.complex()), k2)?;
    for (k, c) in [(k1, c1), (k2, c2)] {
        let o = filtered_order(k, c, c);
        if o > 1 {
            return Err(Error::OrderTooHigh { found: o, allowed: 1 });
        }
    }
    let mut report = IsoReport {
        forward: BTreeMap::new(),
        backward: BTreeMap::new(),
    };
    let mut positions = c1.positions();
    positions.extend(c2.positions());
    positions.sort();
    positions.dedup();
    for (p, n) in positions {
        let e1 = c1.entry(2, p, n);
        let e2 = c2.entry(2, p, n);
        let a = s12.page_map(2, p, n)?;
        let b = s21.page_map(2, p, n)?;
        if !maps_equal(&e1, &b.mul(&a), &identity_on(&e1)) || !maps_equal(&e2, &a.mul(&b), &identity_on(&e2)) {
            return Err(Error::Mismatch(format!("page-2 maps are not inverse at ({p}, {})", n - p)));
        }
        report.forward.insert((p, n - p), a);
        report.backward.insert((p, n - p), b);
    }
    Ok(report)
}
