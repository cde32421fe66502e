//! Seeded random instances. Complexes are built from a canonical form
//! (free generators plus pairs `d b = t c`) and then conjugated by random
//! unimodular, filtration-preserving basis changes, so `d^2 = 0` holds by
//! construction and no rejection sampling of differentials is needed.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complexes::{ChainComplex, ChainMap};
use crate::cones::{cone_ses, shift_map, SesMorphism};
use crate::equivariant::{ActionSign, MorseBottS1Datum, Orbit};
use crate::error::Result;
use crate::exactlin::{IntMatrix, Ring};
use crate::spectra::{FilteredComplex, FilteredMap, TwoLineComplex};

/// The generator behind every random instance.
pub type Prng = ChaCha8Rng;

pub fn prng(seed: u64) -> Prng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Largest absolute entry the generators aim for.
pub const ENTRY_BOUND: i64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Free,
    Top { partner: usize, t: i64 },
    Bottom,
}

/// Shape of a random complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplexParams {
    /// Total number of generators.
    pub size: usize,
    /// Number of degrees, starting at `lo`.
    pub degrees: usize,
    pub lo: i64,
    /// Number of filtration levels; 1 means unfiltered.
    pub levels: usize,
    /// Whether the differential must lower the level strictly.
    pub strict: bool,
    /// Largest torsion coefficient in the canonical form.
    pub max_torsion: i64,
}

impl ComplexParams {
    pub fn new(size: usize) -> Self {
        ComplexParams {
            size,
            degrees: 3,
            lo: 0,
            levels: 1,
            strict: false,
            max_torsion: 3,
        }
    }
}

/// A random complex with the basis change from its canonical form:
/// `d_k = P_{k-1} d^canon_k P_k^{-1}`.
#[derive(Clone, Debug)]
pub struct RandomComplex {
    pub complex: ChainComplex,
    /// Filtration level of every generator, per degree.
    pub levels: Vec<Vec<i64>>,
    kinds: Vec<Vec<Kind>>,
    canon: Vec<IntMatrix>,
    p: Vec<IntMatrix>,
    pinv: Vec<IntMatrix>,
}

impl RandomComplex {
    fn idx(&self, k: i64) -> Option<usize> {
        let lo = self.complex.lo();
        if self.complex.is_empty_range() || k < lo || k > self.complex.hi() {
            None
        } else {
            Some((k - lo) as usize)
        }
    }

    fn rank(&self, k: i64) -> usize {
        self.complex.rank(k)
    }

    fn canon_diff(&self, k: i64) -> IntMatrix {
        match self.idx(k) {
            Some(i) => self.canon[i].clone(),
            None => IntMatrix::zeros(self.rank(k - 1), self.rank(k)),
        }
    }

    fn p(&self, k: i64) -> IntMatrix {
        self.idx(k).map_or_else(|| IntMatrix::identity(0), |i| self.p[i].clone())
    }

    fn pinv(&self, k: i64) -> IntMatrix {
        self.idx(k).map_or_else(|| IntMatrix::identity(0), |i| self.pinv[i].clone())
    }

    pub fn filtered(&self) -> FilteredComplex {
        FilteredComplex::new(self.complex.clone(), self.levels.clone()).expect("generated filtration is valid")
    }
}

fn small(rng: &mut Prng) -> i64 {
    *[-1i64, 1].choose(rng).unwrap()
}

fn within(m: &IntMatrix, bound: i64) -> bool {
    m.entries().iter().all(|x| x.abs() <= BigInt::from(bound))
}

/// A random complex over `ring` (entries generated over `Z`, then reduced).
pub fn random_complex_with_basis(rng: &mut Prng, params: ComplexParams, ring: Ring) -> RandomComplex {
    let nd = params.degrees.max(1);
    let nl = params.levels.max(1) as i64;
    let strict = params.strict && nl >= 2;
    let mut kinds: Vec<Vec<Kind>> = vec![Vec::new(); nd];
    let mut levels: Vec<Vec<i64>> = vec![Vec::new(); nd];
    let mut left = params.size;
    while left > 0 {
        if left >= 2 && nd >= 2 && rng.gen_bool(0.55) {
            let k = rng.gen_range(1..nd);
            let t = if params.max_torsion <= 1 || rng.gen_bool(0.6) {
                1
            } else {
                rng.gen_range(2..=params.max_torsion)
            };
            let (lb, lc) = if strict {
                let lb = rng.gen_range(1..nl);
                (lb, rng.gen_range(0..lb))
            } else {
                let lb = rng.gen_range(0..nl);
                (lb, rng.gen_range(0..=lb))
            };
            let c_pos = kinds[k - 1].len();
            kinds[k - 1].push(Kind::Bottom);
            levels[k - 1].push(lc);
            kinds[k].push(Kind::Top { partner: c_pos, t });
            levels[k].push(lb);
            left -= 2;
        } else {
            let k = rng.gen_range(0..nd);
            kinds[k].push(Kind::Free);
            levels[k].push(rng.gen_range(0..nl));
            left -= 1;
        }
    }
    let ranks: Vec<usize> = kinds.iter().map(|v| v.len()).collect();
    let rank = |i: isize| -> usize {
        if i < 0 || i as usize >= nd {
            0
        } else {
            ranks[i as usize]
        }
    };
    let mut canon: Vec<IntMatrix> = (0..nd).map(|i| IntMatrix::zeros(rank(i as isize - 1), ranks[i])).collect();
    for (i, list) in kinds.iter().enumerate() {
        for (j, kd) in list.iter().enumerate() {
            if let Kind::Top { partner, t } = kd {
                canon[i].set(*partner, j, BigInt::from(*t));
            }
        }
    }
    let mut p: Vec<IntMatrix> = ranks.iter().map(|&r| IntMatrix::identity(r)).collect();
    let mut pinv = p.clone();
    let mut d = canon.clone();
    let bound = ENTRY_BOUND.max(params.max_torsion);

    // elementary operations x_i += c x_j (needs level(i) <= level(j))
    let ops = 3 * params.size;
    for _ in 0..ops {
        let k = rng.gen_range(0..nd);
        let r = ranks[k];
        if r < 2 {
            continue;
        }
        let i = rng.gen_range(0..r);
        let j = rng.gen_range(0..r);
        if i == j || levels[k][i] > levels[k][j] {
            continue;
        }
        let c = BigInt::from(small(rng));
        // d_k <- d_k E^{-1}: column j -= c column i
        let mut dk = d[k].clone();
        for row in 0..dk.rows() {
            let v = dk.get(row, j) - &c * dk.get(row, i);
            dk.set(row, j, v);
        }
        // d_{k+1} <- E d_{k+1}: row i += c row j
        let mut dk1 = if k + 1 < nd { Some(d[k + 1].clone()) } else { None };
        if let Some(m) = dk1.as_mut() {
            for col in 0..m.cols() {
                let v = m.get(i, col) + &c * m.get(j, col);
                m.set(i, col, v);
            }
        }
        if !within(&dk, bound) || dk1.as_ref().is_some_and(|m| !within(m, bound)) {
            continue;
        }
        d[k] = dk;
        if let Some(m) = dk1 {
            d[k + 1] = m;
        }
        for col in 0..r {
            let v = p[k].get(i, col) + &c * p[k].get(j, col);
            p[k].set(i, col, v);
        }
        for row in 0..r {
            let v = pinv[k].get(row, j) - &c * pinv[k].get(row, i);
            pinv[k].set(row, j, v);
        }
    }
    // shuffle generators inside each degree, flipping some signs
    for k in 0..nd {
        let r = ranks[k];
        let mut perm: Vec<usize> = (0..r).collect();
        perm.shuffle(rng);
        let signs: Vec<i64> = (0..r).map(|_| if rng.gen_bool(0.25) { -1 } else { 1 }).collect();
        // new coordinate perm[a] = sign * old coordinate a
        let mut q = IntMatrix::zeros(r, r);
        let mut qinv = IntMatrix::zeros(r, r);
        for a in 0..r {
            q.set(perm[a], a, BigInt::from(signs[a]));
            qinv.set(a, perm[a], BigInt::from(signs[a]));
        }
        p[k] = q.mul(&p[k]);
        pinv[k] = pinv[k].mul(&qinv);
        d[k] = d[k].mul(&qinv);
        if k + 1 < nd {
            d[k + 1] = q.mul(&d[k + 1]);
        }
        let mut new_levels = vec![0; r];
        for a in 0..r {
            new_levels[perm[a]] = levels[k][a];
        }
        levels[k] = new_levels;
    }
    let diffs: BTreeMap<i64, IntMatrix> = d
        .iter()
        .enumerate()
        .map(|(i, m)| (params.lo + i as i64, m.clone()))
        .collect();
    let complex = ChainComplex::new(ring, params.lo, ranks, diffs).expect("conjugated complex squares to zero");
    RandomComplex {
        complex,
        levels,
        kinds,
        canon,
        p,
        pinv,
    }
}

pub fn random_complex(rng: &mut Prng, size: usize, ring: Ring) -> ChainComplex {
    let mut params = ComplexParams::new(size);
    params.degrees = rng.gen_range(1..=4);
    random_complex_with_basis(rng, params, ring).complex
}

/// A bounded filtered complex with at most `levels` filtration levels.
pub fn random_filtered_complex(rng: &mut Prng, size: usize, levels: usize, ring: Ring) -> FilteredComplex {
    let mut params = ComplexParams::new(size);
    params.degrees = rng.gen_range(2..=4);
    params.levels = levels;
    random_complex_with_basis(rng, params, ring).filtered()
}

fn sparse_vec(rng: &mut Prng, n: usize, density: f64) -> Vec<BigInt> {
    (0..n)
        .map(|_| if rng.gen_bool(density) { BigInt::from(small(rng)) } else { BigInt::zero() })
        .collect()
}

/// A random chain map `x -> y[shift]`: a part built on the canonical forms
/// (free generators to cycles, pairs to pairs) plus a null-homotopic part
/// `dH + (-1)^s H d`.
pub fn random_chain_map(rng: &mut Prng, x: &RandomComplex, y: &RandomComplex, shift: i64) -> ChainMap {
    let xs = &x.complex;
    let ys = &y.complex;
    let sign = if shift.rem_euclid(2) == 0 { BigInt::one() } else { -BigInt::one() };
    let mut mats: BTreeMap<i64, IntMatrix> = xs
        .degrees()
        .map(|k| (k, IntMatrix::zeros(ys.rank(k + shift), xs.rank(k))))
        .collect();
    if xs.is_empty_range() {
        return ChainMap::new(xs.clone(), ys.clone(), shift, mats).expect("empty map");
    }
    for attempt in 0..12 {
        let density = 0.5 / (1.0 + attempt as f64);
        let mut canon: BTreeMap<i64, IntMatrix> = mats.iter().map(|(&k, m)| (k, IntMatrix::zeros(m.rows(), m.cols()))).collect();
        for k in xs.degrees() {
            let ki = (k - xs.lo()) as usize;
            let tk = k + shift;
            let ry = ys.rank(tk);
            let cycles: Vec<usize> = match y.idx(tk) {
                Some(yi) => (0..ry).filter(|&a| !matches!(y.kinds[yi][a], Kind::Top { .. })).collect(),
                None => Vec::new(),
            };
            for (j, kd) in x.kinds[ki].iter().enumerate() {
                match kd {
                    Kind::Free => {
                        for &a in &cycles {
                            if rng.gen_bool(density) {
                                canon.get_mut(&k).unwrap().set(a, j, BigInt::from(small(rng)));
                            }
                        }
                    }
                    Kind::Top { partner, t } => {
                        if ry == 0 {
                            continue;
                        }
                        let yv = sparse_vec(rng, ry, density);
                        let dy = y.canon_diff(tk).mul_vec(&yv);
                        for a in 0..ry {
                            canon.get_mut(&k).unwrap().set(a, j, &yv[a] * BigInt::from(*t));
                        }
                        if let Some(m) = canon.get_mut(&(k - 1)) {
                            for (a, v) in dy.iter().enumerate() {
                                m.set(a, *partner, &sign * v);
                            }
                        }
                    }
                    Kind::Bottom => {}
                }
            }
        }
        let conj: BTreeMap<i64, IntMatrix> = canon
            .iter()
            .map(|(&k, m)| (k, y.p(k + shift).mul(m).mul(&x.pinv(k))))
            .collect();
        if conj.values().all(|m| within(m, ENTRY_BOUND)) {
            mats = conj;
            break;
        }
    }
    // null-homotopic part
    for attempt in 0..8 {
        let density = 0.3 / (1.0 + attempt as f64);
        let h: BTreeMap<i64, IntMatrix> = xs
            .degrees()
            .map(|k| {
                let (r, c) = (ys.rank(k + shift + 1), xs.rank(k));
                (k, IntMatrix::from_fn(r, c, |_, _| if rng.gen_bool(density) { BigInt::from(small(rng)) } else { BigInt::zero() }))
            })
            .collect();
        let hm = |k: i64| h.get(&k).cloned().unwrap_or_else(|| IntMatrix::zeros(ys.rank(k + shift + 1), xs.rank(k)));
        let cand: BTreeMap<i64, IntMatrix> = mats
            .iter()
            .map(|(&k, m)| {
                let dh = ys.diff(k + shift + 1).mul(&hm(k));
                let hd = hm(k - 1).mul(&xs.diff(k)).scale(&sign);
                (k, m.add(&dh).add(&hd))
            })
            .collect();
        if cand.values().all(|m| within(m, ENTRY_BOUND)) {
            mats = cand;
            break;
        }
    }
    ChainMap::new(xs.clone(), ys.clone(), shift, mats).expect("generated map is a chain map")
}

fn line_params(rng: &mut Prng, size: usize) -> ComplexParams {
    let mut p = ComplexParams::new(size);
    p.degrees = rng.gen_range(2..=4);
    p
}

/// Random chain map between two random complexes of at most `size`
/// generators each.
pub fn random_map_between(rng: &mut Prng, size: usize, shift: i64, ring: Ring) -> ChainMap {
    let sa = rng.gen_range(1..=size.max(1));
    let st = rng.gen_range(1..=size.max(1));
    let pa = line_params(rng, sa);
    let mut pt = line_params(rng, st);
    pt.lo = rng.gen_range(-1..=1);
    let a = random_complex_with_basis(rng, pa, ring);
    let t = random_complex_with_basis(rng, pt, ring);
    random_chain_map(rng, &a, &t, shift)
}

/// Two-line complex with at most `size` generators per line.
pub fn random_two_line(rng: &mut Prng, size: usize, ring: Ring) -> TwoLineComplex {
    let sa = rng.gen_range(1..=size.max(1));
    let mut pa = line_params(rng, sa);
    pa.lo = 0;
    let sb = rng.gen_range(1..=size.max(1));
    let mut pb = line_params(rng, sb);
    pb.lo = rng.gen_range(-2..=0);
    let a = random_complex_with_basis(rng, pa, ring);
    let b = random_complex_with_basis(rng, pb, ring);
    TwoLineComplex::new(random_chain_map(rng, &a, &b, -2)).expect("valid two-line complex")
}

/// A morphism `(b[1], b + a, a)` from the cone sequence of `u a` to the cone
/// sequence of `b u`, for random chain maps `a: X0 -> X`, `u: X -> Y`,
/// `b: Y -> Y2`. Each of the four complexes has at most `size / 2`
/// generators.
pub fn random_ses_morphism(rng: &mut Prng, size: usize, ring: Ring) -> SesMorphism {
    let part = (size / 2).max(1);
    let mk = |rng: &mut Prng| {
        let s = rng.gen_range(1..=part);
        let p = line_params(rng, s);
        random_complex_with_basis(rng, p, ring)
    };
    let x0 = mk(rng);
    let x = mk(rng);
    let y = mk(rng);
    let y2 = mk(rng);
    let a = random_chain_map(rng, &x0, &x, 0);
    let u = random_chain_map(rng, &x, &y, 0);
    let b = random_chain_map(rng, &y, &y2, 0);
    let top = cone_ses(&ChainMap::compose(&u, &a).expect("composable")).expect("cone sequence");
    let bottom = cone_ses(&ChainMap::compose(&b, &u).expect("composable")).expect("cone sequence");
    let f = shift_map(&b, 1).expect("shifted map");
    let mats = top
        .b()
        .degrees()
        .map(|k| (k, IntMatrix::block_diag(&b.mat(k + 1), &a.mat(k))))
        .collect();
    let g = ChainMap::new(top.b().clone(), bottom.b().clone(), 0, mats).expect("block map is a chain map");
    let h = a.clone();
    SesMorphism::new(top, bottom, f, g, h).expect("generated morphism commutes")
}

struct Piece {
    weights: Vec<i64>,
    d1: IntMatrix,
    d2: IntMatrix,
}

/// A piece `C (x) CP^n` with `d2` the cap product plus `d1 H + H d1`.
fn random_mb_piece(rng: &mut Prng, max_orbits: usize) -> Piece {
    let n = if max_orbits >= 3 { rng.gen_range(0..=2usize.min(max_orbits / 2)) } else { 0 };
    let base = (max_orbits / (n + 1)).max(1);
    let mut params = ComplexParams::new(rng.gen_range(1..=base));
    params.degrees = rng.gen_range(1..=3);
    params.max_torsion = 2;
    let c = random_complex_with_basis(rng, params, Ring::Integers).complex;
    // orbits (x, m) in order of x then m
    let mut gens: Vec<(i64, usize)> = Vec::new();
    for k in c.degrees() {
        for a in 0..c.rank(k) {
            gens.push((k, a));
        }
    }
    let index = |g: usize, m: usize| g * (n + 1) + m;
    let total = gens.len() * (n + 1);
    let mut weights = vec![0; total];
    let mut d1 = IntMatrix::zeros(total, total);
    let mut d2 = IntMatrix::zeros(total, total);
    for (g, &(k, a)) in gens.iter().enumerate() {
        for m in 0..=n {
            weights[index(g, m)] = k + 2 * m as i64;
            let dk = c.diff(k);
            for (g2, &(k2, a2)) in gens.iter().enumerate() {
                if k2 == k - 1 {
                    let v = dk.get(a2, a);
                    if !v.is_zero() {
                        d1.set(index(g2, m), index(g, m), v.clone());
                    }
                }
            }
            if m >= 1 {
                d2.set(index(g, m - 1), index(g, m), BigInt::one());
            }
        }
    }
    for attempt in 0..5 {
        let density = 0.25 / (1.0 + attempt as f64);
        let h = IntMatrix::from_fn(total, total, |i, j| {
            if weights[j] - weights[i] == 1 && rng.gen_bool(density) {
                BigInt::from(small(rng))
            } else {
                BigInt::zero()
            }
        });
        let cand = d2.add(&d1.mul(&h)).add(&h.mul(&d1));
        if within(&cand, ENTRY_BOUND) {
            d2 = cand;
            break;
        }
    }
    Piece { weights, d1, d2 }
}

/// A split Morse-Bott datum with at most `size` orbits: a `Minus` piece, a
/// `Plus` piece, and a cone of the identity of a third piece whose `Minus`
/// half receives `d1` from its `Plus` half.
pub fn random_mb_datum(rng: &mut Prng, size: usize, ring: Ring) -> MorseBottS1Datum {
    let size = size.max(1);
    let s_minus = rng.gen_range(0..=size / 3);
    let s_plus = rng.gen_range(0..=(size - s_minus) / 2);
    let s_cone = (size - s_minus - s_plus) / 2;
    let mut orbits: Vec<Orbit> = Vec::new();
    let mut d1 = Vec::new();
    let mut d2 = Vec::new();
    let add = |piece: &Piece, sign: ActionSign, orbits: &mut Vec<Orbit>, d1: &mut Vec<_>, d2: &mut Vec<_>| -> usize {
        let off = orbits.len();
        for &w in &piece.weights {
            orbits.push(Orbit::signed(w, sign));
        }
        for (i, j, v) in piece.d1.to_triples() {
            d1.push((off + i, off + j, v));
        }
        for (i, j, v) in piece.d2.to_triples() {
            d2.push((off + i, off + j, v));
        }
        off
    };
    if s_minus > 0 {
        let p = random_mb_piece(rng, s_minus);
        add(&p, ActionSign::Minus, &mut orbits, &mut d1, &mut d2);
    }
    if s_plus > 0 {
        let p = random_mb_piece(rng, s_plus);
        add(&p, ActionSign::Plus, &mut orbits, &mut d1, &mut d2);
    }
    if s_cone > 0 {
        let p = random_mb_piece(rng, s_cone);
        let mu = add(&p, ActionSign::Minus, &mut orbits, &mut d1, &mut d2);
        let plus = Piece {
            weights: p.weights.iter().map(|w| w + 1).collect(),
            d1: p.d1.neg(),
            d2: p.d2.clone(),
        };
        let nu = add(&plus, ActionSign::Plus, &mut orbits, &mut d1, &mut d2);
        for x in 0..p.weights.len() {
            d1.push((mu + x, nu + x, BigInt::one()));
        }
    }
    if orbits.is_empty() {
        orbits.push(Orbit::signed(0, ActionSign::Minus));
    }
    MorseBottS1Datum::new(ring, orbits, d1, d2).expect("generated datum is valid")
}

/// A filtered chain map `f` on a random complex whose differential lowers
/// the level strictly, a homotopy `K` of the given order, and
/// `g = f - (dK + Kd)`, so that `f - g = dK + Kd`.
#[derive(Clone, Debug)]
pub struct HomotopyInstance {
    pub f: FilteredMap,
    pub g: FilteredMap,
    pub k: ChainMap,
    pub order: usize,
}

pub fn random_homotopy_instance(rng: &mut Prng, size: usize, order: usize, ring: Ring) -> HomotopyInstance {
    let mut params = ComplexParams::new(size);
    params.degrees = rng.gen_range(2..=4);
    params.levels = 4;
    params.strict = true;
    let rc = random_complex_with_basis(rng, params, ring);
    let fc = rc.filtered();
    let c = fc.complex().clone();
    let graded = |rng: &mut Prng, rise: i64, density: f64| -> BTreeMap<i64, IntMatrix> {
        c.degrees()
            .map(|k| {
                let m = IntMatrix::from_fn(c.rank(k + 1), c.rank(k), |i, j| {
                    let up = fc.level(k + 1, i) - fc.level(k, j);
                    if up <= rise && rng.gen_bool(density) {
                        BigInt::from(small(rng))
                    } else {
                        BigInt::zero()
                    }
                });
                (k, m)
            })
            .collect()
    };
    // f = a id + dH + Hd with H of order 0
    let a = BigInt::from(rng.gen_range(1..=2));
    let h0 = ChainMap::graded(c.clone(), c.clone(), 1, graded(rng, 0, 0.2)).expect("shapes");
    let id = ChainMap::identity(&c);
    let scaled = ChainMap::new(c.clone(), c.clone(), 0, c.degrees().map(|k| (k, id.mat(k).scale(&a))).collect()).expect("scalar map");
    let f = scaled.add(&h0.boundary_of_homotopy().expect("shapes")).expect("same shape");
    let k = ChainMap::graded(c.clone(), c.clone(), 1, graded(rng, order as i64, 0.35)).expect("shapes");
    let g = f.sub(&k.boundary_of_homotopy().expect("shapes")).expect("same shape");
    let f = FilteredMap::new(f, fc.clone(), fc.clone()).expect("f preserves the filtration");
    let g = FilteredMap::new(g, fc.clone(), fc.clone()).expect("g preserves the filtration");
    HomotopyInstance { f, g, k, order }
}

/// `C` and a conjugate `P C P^{-1}` by a random filtered unimodular `P`,
/// with the maps `P` and `P^{-1}` between them.
pub fn random_filtered_equivalence(rng: &mut Prng, size: usize, ring: Ring) -> Result<(FilteredMap, FilteredMap)> {
    let mut params = ComplexParams::new(size);
    params.degrees = rng.gen_range(2..=4);
    params.levels = 3;
    let rc = random_complex_with_basis(rng, params, ring);
    let c1 = rc.filtered();
    // a second round of filtered basis changes on top of the first
    let c = c1.complex();
    let mut p: BTreeMap<i64, IntMatrix> = c.degrees().map(|k| (k, IntMatrix::identity(c.rank(k)))).collect();
    let mut pinv = p.clone();
    for _ in 0..2 * size {
        let k = rng.gen_range(c.lo()..=c.hi());
        let r = c.rank(k);
        if r < 2 {
            continue;
        }
        let (i, j) = (rng.gen_range(0..r), rng.gen_range(0..r));
        if i == j || c1.level(k, i) > c1.level(k, j) {
            continue;
        }
        let cf = BigInt::from(small(rng));
        let pk = p.get_mut(&k).unwrap();
        for col in 0..r {
            let v = pk.get(i, col) + &cf * pk.get(j, col);
            pk.set(i, col, v);
        }
        let qk = pinv.get_mut(&k).unwrap();
        for row in 0..r {
            let v = qk.get(row, j) - &cf * qk.get(row, i);
            qk.set(row, j, v);
        }
    }
    let diffs = c
        .degrees()
        .map(|k| (k, p.get(&(k - 1)).cloned().unwrap_or_else(|| IntMatrix::identity(0)).mul(&c.diff(k)).mul(&pinv[&k])))
        .collect();
    let c2 = ChainComplex::new(ring, c.lo(), c.ranks().to_vec(), diffs)?;
    let c2 = FilteredComplex::new(c2, c1.all_levels().to_vec())?;
    let s12 = ChainMap::new(c.clone(), c2.complex().clone(), 0, p)?;
    let s21 = ChainMap::new(c2.complex().clone(), c.clone(), 0, pinv)?;
    Ok((FilteredMap::new(s12, c1.clone(), c2.clone())?, FilteredMap::new(s21, c2, c1)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = random_complex(&mut prng(7), 10, Ring::Integers);
        let b = random_complex(&mut prng(7), 10, Ring::Integers);
        assert_eq!(a, b);
        assert_eq!(a.total_rank(), 10);
    }

    #[test]
    fn generated_objects_are_valid() {
        for seed in 0..20 {
            let mut rng = prng(seed);
            let f = random_map_between(&mut rng, 6, 0, Ring::Integers);
            assert!(f.is_chain_map());
            let t = random_two_line(&mut rng, 6, Ring::Integers);
            assert_eq!(t.f().shift(), -2);
            random_ses_morphism(&mut rng, 8, Ring::Integers);
            let d = random_mb_datum(&mut rng, 10, Ring::Integers);
            assert!(d.len() <= 10);
            let h = random_homotopy_instance(&mut rng, 8, 1, Ring::Integers);
            assert!(crate::spectra::filtered_order(&h.k, &h.f.source, &h.f.target) <= 1);
            random_filtered_equivalence(&mut rng, 8, Ring::Integers).unwrap();
        }
    }

    #[test]
    fn entries_stay_small() {
        for seed in 0..20 {
            let f = random_map_between(&mut prng(seed), 6, 0, Ring::Integers);
            for k in f.source().degrees() {
                assert!(within(&f.mat(k), ENTRY_BOUND));
                assert!(within(&f.source().diff(k), ENTRY_BOUND));
            }
        }
    }
}
