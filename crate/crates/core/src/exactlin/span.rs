//! Submodules of `R^n` and their quotients.
//!
//! A [`Span`] stores a canonical (Hermite-reduced) basis, so two spans over
//! the same ring are equal exactly when their bases are. A [`Subquotient`]
//! `N/D` carries explicit generators adapted to the Smith form of `D` inside
//! `N`; maps between subquotients are matrices on those generators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::engine::{self, Rows};
use super::group::FGAbelianGroup;
use super::ring::Scalars;
use super::{IntMatrix, Matrix, RatMatrix, Ring};
use crate::error::{Error, Result};
use crate::with_scalars;

/// Matrices whose entries can be read into any coefficient ring.
pub trait Entries {
    fn shape(&self) -> (usize, usize);
    fn entry_in<S: Scalars>(&self, s: &S, i: usize, j: usize) -> S::E;
}

impl Entries for IntMatrix {
    fn shape(&self) -> (usize, usize) {
        Matrix::shape(self)
    }
    fn entry_in<S: Scalars>(&self, s: &S, i: usize, j: usize) -> S::E {
        s.from_int(self.get(i, j))
    }
}

impl Entries for RatMatrix {
    fn shape(&self) -> (usize, usize) {
        Matrix::shape(self)
    }
    fn entry_in<S: Scalars>(&self, s: &S, i: usize, j: usize) -> S::E {
        s.from_rational(self.get(i, j))
            .expect("entry has no image in the coefficient ring")
    }
}

fn columns_of<S: Scalars, M: Entries>(s: &S, m: &M) -> Rows<S::E> {
    let (r, c) = m.shape();
    (0..c)
        .map(|j| (0..r).map(|i| m.entry_in(s, i, j)).collect())
        .collect()
}

fn vector_in<S: Scalars>(s: &S, v: &[BigRational]) -> Vec<S::E> {
    v.iter()
        .map(|x| s.from_rational(x).expect("vector entry has no image in the ring"))
        .collect()
}

fn vector_out<S: Scalars>(s: &S, v: &[S::E]) -> Vec<BigRational> {
    v.iter().map(|x| s.to_rational(x)).collect()
}

fn int_columns(ambient: usize, cols: Vec<Vec<BigInt>>) -> IntMatrix {
    IntMatrix::from_columns(&cols, ambient).expect("column lengths agree")
}

/// A submodule of `R^n`, stored by a canonical basis (the columns of
/// `basis`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Span {
    ring: Ring,
    ambient: usize,
    basis: IntMatrix,
}

impl Span {
    fn from_canonical_rows<S: Scalars>(s: &S, ring: Ring, ambient: usize, rows: Rows<S::E>) -> Span {
        let cols: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| engine::primitive_int_vector(s, r))
            .collect();
        Span {
            ring,
            ambient,
            basis: int_columns(ambient, cols),
        }
    }

    /// Span of the columns of `gens`.
    pub fn new<M: Entries>(ring: Ring, gens: &M) -> Span {
        let ambient = gens.shape().0;
        with_scalars!(ring, s => {
            let rows = engine::canonical_rows(s, columns_of(s, gens), ambient);
            Span::from_canonical_rows(s, ring, ambient, rows)
        })
    }

    pub fn zero(ring: Ring, ambient: usize) -> Span {
        Span {
            ring,
            ambient,
            basis: IntMatrix::zeros(ambient, 0),
        }
    }

    pub fn full(ring: Ring, ambient: usize) -> Span {
        Span::new(ring, &IntMatrix::identity(ambient))
    }

    /// Span of the given coordinate axes.
    pub fn axes(ring: Ring, ambient: usize, idx: &[usize]) -> Span {
        let m = IntMatrix::identity(ambient).select_columns(idx);
        Span::new(ring, &m)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Canonical basis as matrix columns.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn sum(&self, other: &Span) -> Span {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        Span::new(self.ring, &self.basis.hstack(&other.basis))
    }

    pub fn contains_vector(&self, v: &[BigRational]) -> bool {
        self.solve(v).is_some()
    }

    /// Whether every element of `other` lies in `self`.
    pub fn contains(&self, other: &Span) -> bool {
        self.sum(other) == *self
    }

    /// Coefficients `c` with `basis * c = v`.
    pub fn solve(&self, v: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(v.len(), self.ambient, "vector length");
        with_scalars!(self.ring, s => {
            let ech = engine::echelon(s, columns_of(s, &self.basis), self.ambient, true);
            engine::solve_combination(s, &ech, &vector_in(s, v)).map(|c| vector_out(s, &c))
        })
    }

    /// Image of this span under `m` (a `k x ambient` matrix).
    pub fn image<M: Entries>(&self, m: &M) -> Span {
        let (k, n) = m.shape();
        assert_eq!(n, self.ambient, "map does not start at this ambient");
        with_scalars!(self.ring, s => {
            let b = columns_of(s, &self.basis);
            let imgs: Vec<_> = b
                .iter()
                .map(|v| apply(s, m, v))
                .collect();
            let rows = engine::canonical_rows(s, imgs, k);
            Span::from_canonical_rows(s, self.ring, k, rows)
        })
    }

    /// Kernel of `m` as a span in its source.
    pub fn kernel<M: Entries>(ring: Ring, m: &M) -> Span {
        let (r, c) = m.shape();
        with_scalars!(ring, s => {
            let rows = engine::left_kernel(s, columns_of(s, m), r);
            Span::from_canonical_rows(s, ring, c, rows)
        })
    }

    /// `{x : m x in target}`.
    pub fn preimage<M: Entries>(m: &M, target: &Span) -> Span {
        let (r, c) = m.shape();
        assert_eq!(r, target.ambient, "map does not land in the target ambient");
        let ring = target.ring;
        with_scalars!(ring, s => {
            let mut rows = columns_of(s, m);
            rows.extend(columns_of(s, &target.basis));
            let ker = engine::left_kernel(s, rows, r);
            let proj: Vec<Vec<_>> = ker.into_iter().map(|v| v[..c].to_vec()).collect();
            let rows = engine::canonical_rows(s, proj, c);
            Span::from_canonical_rows(s, ring, c, rows)
        })
    }

    pub fn intersect(&self, other: &Span) -> Span {
        let coeffs = Span::preimage(&self.basis, other);
        coeffs.image(&self.basis)
    }
}

/// `m * v` over the ring.
fn apply<S: Scalars, M: Entries>(s: &S, m: &M, v: &[S::E]) -> Vec<S::E> {
    let (r, c) = m.shape();
    (0..r)
        .map(|i| {
            let mut acc = s.zero();
            for (j, vj) in v.iter().enumerate().take(c) {
                if !s.is_zero(vj) {
                    acc = s.add(&acc, &s.mul(&m.entry_in(s, i, j), vj));
                }
            }
            acc
        })
        .collect()
}

/// `m * v` with the result read in the ring.
pub fn apply_in<M: Entries>(ring: Ring, m: &M, v: &[BigRational]) -> Vec<BigRational> {
    with_scalars!(ring, s => vector_out(s, &apply(s, m, &vector_in(s, v))))
}

/// Some `x` with `m x = v` over the ring, if one exists.
pub fn solve_in<M: Entries>(ring: Ring, m: &M, v: &[BigRational]) -> Option<Vec<BigRational>> {
    let (r, _) = m.shape();
    assert_eq!(v.len(), r, "right-hand side length");
    with_scalars!(ring, s => {
        let ech = engine::echelon(s, columns_of(s, m), r, true);
        engine::solve_combination(s, &ech, &vector_in(s, v)).map(|c| vector_out(s, &c))
    })
}

/// Rank of a matrix over the ring.
pub fn rank_in<M: Entries>(ring: Ring, m: &M) -> usize {
    let (r, _) = m.shape();
    with_scalars!(ring, s => engine::echelon(s, columns_of(s, m), r, false).rank())
}

/// The quotient `num / den` of two spans with `den` inside `num`, together
/// with generators adapted to the Smith form of the inclusion.
///
/// Generators are listed torsion first (orders `d_1 | d_2 | ...`), then
/// free (order recorded as 0). Over a field there is no torsion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subquotient {
    ring: Ring,
    num: Span,
    den: Span,
    /// Full adapted basis of `num`; the first `n_trivial` columns lie in `den`.
    adapted: IntMatrix,
    n_trivial: usize,
    orders: Vec<BigInt>,
}

impl Subquotient {
    pub fn new(num: Span, den: Span) -> Result<Subquotient> {
        if num.ambient != den.ambient || num.ring != den.ring {
            return Err(Error::Shape("numerator and denominator live in different modules".into()));
        }
        let ring = num.ring;
        let rn = num.rank();
        let rd = den.rank();
        with_scalars!(ring, s => {
            let nb = columns_of(s, &num.basis);
            let ech = engine::echelon(s, nb.clone(), num.ambient, true);
            // express den in the basis of num
            let mut coeff = vec![vec![s.zero(); rd]; rn];
            for (j, d) in columns_of(s, &den.basis).iter().enumerate() {
                let c = engine::solve_combination(s, &ech, d).ok_or_else(|| {
                    Error::NotASublattice(format!("denominator generator {j} is not in the numerator"))
                })?;
                for (i, ci) in c.into_iter().enumerate() {
                    coeff[i][j] = ci;
                }
            }
            let sm = engine::smith(s, coeff, rn, rd);
            // adapted basis: num * uinv
            let mut cols = Vec::with_capacity(rn);
            for j in 0..rn {
                let mut v = vec![s.zero(); num.ambient];
                for (k, b) in nb.iter().enumerate() {
                    let c = &sm.uinv[k][j];
                    if s.is_zero(c) {
                        continue;
                    }
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi = s.add(vi, &s.mul(c, bi));
                    }
                }
                cols.push(engine::primitive_int_vector(s, &v));
            }
            let n_trivial = sm.diag.iter().filter(|d| s.is_unit(d)).count();
            let mut orders: Vec<BigInt> = sm.diag[n_trivial..]
                .iter()
                .map(|d| engine::int_of(s, d))
                .collect();
            orders.extend(std::iter::repeat_with(BigInt::zero).take(rn - sm.diag.len()));
            Ok(Subquotient {
                ring,
                adapted: int_columns(num.ambient, cols),
                num,
                den,
                n_trivial,
                orders,
            })
        })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn ambient(&self) -> usize {
        self.num.ambient
    }

    pub fn num(&self) -> &Span {
        &self.num
    }

    pub fn den(&self) -> &Span {
        &self.den
    }

    /// Number of generators (torsion and free).
    pub fn ngens(&self) -> usize {
        self.orders.len()
    }

    /// Order of each generator; 0 marks a free generator.
    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    /// Generators as columns of an ambient matrix.
    pub fn generators(&self) -> IntMatrix {
        let idx: Vec<usize> = (self.n_trivial..self.adapted.cols()).collect();
        self.adapted.select_columns(&idx)
    }

    pub fn generator(&self, i: usize) -> Vec<BigRational> {
        self.adapted
            .column(self.n_trivial + i)
            .into_iter()
            .map(BigRational::from_integer)
            .collect()
    }

    pub fn group(&self) -> FGAbelianGroup {
        let free = self.orders.iter().filter(|o| o.is_zero()).count();
        let torsion = self.orders.iter().filter(|o| !o.is_zero()).cloned().collect();
        FGAbelianGroup::new(self.ring, free, torsion)
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    /// Reduces a coordinate vector: torsion coordinates modulo their order,
    /// everything into canonical representatives of the ring.
    pub fn reduce(&self, c: &[BigRational]) -> Vec<BigRational> {
        c.iter()
            .zip(&self.orders)
            .map(|(x, o)| {
                let x = normalize(self.ring, x);
                if o.is_zero() {
                    x
                } else {
                    BigRational::from_integer(x.to_integer().mod_floor(o))
                }
            })
            .collect()
    }

    /// Coordinates of the class of `v` on the generators. Fails when `v`
    /// is not in the numerator.
    pub fn coords(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        let mut out = self.coords_many(std::slice::from_ref(&v.to_vec()))?;
        Ok(out.pop().expect("one vector in, one out"))
    }

    pub fn coords_many(&self, vs: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>> {
        with_scalars!(self.ring, s => {
            let ech = engine::echelon(s, columns_of(s, &self.adapted), self.ambient(), true);
            vs.iter()
                .map(|v| {
                    let c = engine::solve_combination(s, &ech, &vector_in(s, v)).ok_or_else(|| {
                        Error::NotASublattice("vector is not a cycle of this subquotient".into())
                    })?;
                    Ok(self.reduce(&vector_out(s, &c[self.n_trivial..])))
                })
                .collect()
        })
    }

    /// Whether `v` (in the numerator) represents zero.
    pub fn is_zero_class(&self, v: &[BigRational]) -> Result<bool> {
        Ok(self.coords(v)?.iter().all(|x| x.is_zero()))
    }

    /// Ambient representative of a coordinate vector.
    pub fn lift(&self, c: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(c.len(), self.ngens(), "coordinate length");
        let mut v = vec![BigRational::zero(); self.ambient()];
        for (k, ck) in c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            for (vi, gi) in v.iter_mut().zip(self.generator(k)) {
                *vi += ck * gi;
            }
        }
        v.iter().map(|x| normalize(self.ring, x)).collect()
    }

    /// Reduces every column of a matrix landing in this subquotient.
    pub fn reduce_matrix(&self, m: &RatMatrix) -> RatMatrix {
        let cols: Vec<Vec<BigRational>> = m.columns().iter().map(|c| self.reduce(c)).collect();
        RatMatrix::from_columns(&cols, self.ngens()).expect("column length")
    }

    /// Relation lattice of the presentation `R^g / relations`.
    pub fn relations(&self) -> Span {
        let g = self.ngens();
        let m = IntMatrix::from_fn(g, g, |i, j| {
            if i == j {
                self.orders[i].clone()
            } else {
                BigInt::zero()
            }
        });
        Span::new(self.ring, &m)
    }
}

/// Canonical representative of a rational in the ring.
pub fn normalize(ring: Ring, x: &BigRational) -> BigRational {
    with_scalars!(ring, s => s.to_rational(&s.from_rational(x).expect("element has no image in the ring")))
}

/// The map on subquotients induced by an ambient map `chain`
/// (`tgt.ambient x src.ambient`), as a matrix on generators.
///
/// Fails with `NotWellDefined` when `chain` does not carry numerator into
/// numerator and denominator into denominator.
pub fn induced_map<M: Entries>(src: &Subquotient, tgt: &Subquotient, chain: &M) -> Result<RatMatrix> {
    let (r, c) = chain.shape();
    if r != tgt.ambient() || c != src.ambient() {
        return Err(Error::Shape(format!(
            "map is {r}x{c}, expected {}x{}",
            tgt.ambient(),
            src.ambient()
        )));
    }
    let num_img = src.num.image(chain);
    if !tgt.num.contains(&num_img) {
        return Err(Error::NotWellDefined("cycles are not mapped to cycles".into()));
    }
    let den_img = src.den.image(chain);
    if !tgt.den.contains(&den_img) {
        return Err(Error::NotWellDefined("boundaries are not mapped to boundaries".into()));
    }
    let imgs: Vec<Vec<BigRational>> = (0..src.ngens())
        .map(|k| apply_in(src.ring, chain, &src.generator(k)))
        .collect();
    let cols = tgt.coords_many(&imgs)?;
    Ok(RatMatrix::from_columns(&cols, tgt.ngens()).expect("column length"))
}

/// Composite `b . a` of maps on subquotients, reduced in the target `tgt`.
pub fn compose(tgt: &Subquotient, b: &RatMatrix, a: &RatMatrix) -> RatMatrix {
    tgt.reduce_matrix(&b.mul(a))
}

/// Whether two maps into `tgt` agree after reduction.
pub fn maps_equal(tgt: &Subquotient, a: &RatMatrix, b: &RatMatrix) -> bool {
    a.shape() == b.shape() && tgt.reduce_matrix(a) == tgt.reduce_matrix(b)
}

/// Image of `alpha: X -> Y` as a submodule of the presentation of `Y`.
pub fn image_lattice(y: &Subquotient, alpha: &RatMatrix) -> Span {
    Span::new(y.ring, alpha).sum(&y.relations())
}

/// Kernel of `beta: Y -> Z` as a submodule of the presentation of `Y`.
pub fn kernel_lattice(z: &Subquotient, beta: &RatMatrix) -> Span {
    Span::preimage(beta, &z.relations())
}

/// Whether `X -alpha-> Y -beta-> Z` is exact at `Y`. Either map may be
/// absent, standing for a map from or to the zero module.
pub fn exact_at(y: &Subquotient, alpha: Option<&RatMatrix>, beta: Option<(&Subquotient, &RatMatrix)>) -> bool {
    let g = y.ngens();
    let im = match alpha {
        Some(a) => image_lattice(y, a),
        None => y.relations(),
    };
    let ker = match beta {
        Some((z, b)) => kernel_lattice(z, b),
        None => Span::full(y.ring, g),
    };
    im == ker
}

/// Whether a map between subquotients is an isomorphism.
pub fn is_iso(src: &Subquotient, tgt: &Subquotient, m: &RatMatrix) -> bool {
    // injective: kernel equals the relations of src; surjective: image plus
    // relations is everything.
    let ker = kernel_lattice(tgt, m);
    let inj = ker == src.relations();
    let surj = image_lattice(tgt, m) == Span::full(tgt.ring, tgt.ngens());
    inj && surj
}

/// Matrix with entries one on the diagonal; convenient for identity maps on
/// generators.
pub fn identity_on(q: &Subquotient) -> RatMatrix {
    let g = q.ngens();
    RatMatrix::from_fn(g, g, |i, j| {
        if i == j {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(r: usize, c: usize, e: &[i64]) -> IntMatrix {
        IntMatrix::from_i64(r, c, e)
    }

    #[test]
    fn span_equality_is_lattice_equality() {
        let a = Span::new(Ring::Integers, &ints(2, 2, &[2, 6, 4, 8]));
        let b = Span::new(Ring::Integers, &ints(2, 2, &[2, 0, 0, 4]));
        assert_eq!(a, b);
        let c = Span::new(Ring::Rationals, &ints(2, 2, &[2, 6, 4, 8]));
        assert_eq!(c, Span::full(Ring::Rationals, 2));
    }

    #[test]
    fn intersection_and_preimage() {
        let a = Span::new(Ring::Integers, &ints(2, 1, &[2, 0]));
        let b = Span::new(Ring::Integers, &ints(2, 1, &[3, 0]));
        let i = a.intersect(&b);
        assert_eq!(i, Span::new(Ring::Integers, &ints(2, 1, &[6, 0])));
        let m = ints(1, 2, &[2, 1]);
        let target = Span::new(Ring::Integers, &ints(1, 1, &[4]));
        let p = Span::preimage(&m, &target);
        assert!(p.contains_vector(&[BigRational::from_integer(2.into()), BigRational::zero()]));
        assert!(!p.contains_vector(&[BigRational::one(), BigRational::zero()]));
    }

    #[test]
    fn subquotient_orders() {
        let num = Span::full(Ring::Integers, 2);
        let den = Span::new(Ring::Integers, &ints(2, 2, &[2, 0, 0, 3]));
        let q = Subquotient::new(num, den).unwrap();
        assert_eq!(q.orders(), &[BigInt::from(6)]);
        let bad = Subquotient::new(
            Span::new(Ring::Integers, &ints(1, 1, &[2])),
            Span::full(Ring::Integers, 1),
        );
        assert!(matches!(bad, Err(Error::NotASublattice(_))));
    }

    #[test]
    fn coordinates_reduce_mod_torsion() {
        let num = Span::full(Ring::Integers, 1);
        let den = Span::new(Ring::Integers, &ints(1, 1, &[2]));
        let q = Subquotient::new(num, den).unwrap();
        let c = q.coords(&[BigRational::from_integer(3.into())]).unwrap();
        assert_eq!(c, vec![BigRational::one()]);
    }
}
