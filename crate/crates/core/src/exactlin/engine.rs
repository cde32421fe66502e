//! Ring-generic elimination: Hermite (row-echelon) form with transform,
//! linear solving, kernels and Smith normal form.
//!
//! Matrices here are plain `Vec<Vec<E>>` row lists; the public, ring-tagged
//! wrappers live in [`super::span`] and [`super::smith`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::ring::Scalars;
use super::IntMatrix;

pub(crate) type Rows<E> = Vec<Vec<E>>;

pub(crate) fn rows_from_int<S: Scalars>(s: &S, m: &IntMatrix) -> Rows<S::E> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|v| s.from_int(v)).collect())
        .collect()
}

/// Integer representative of a ring element. Over the rationals the element
/// must be integral.
pub(crate) fn int_of<S: Scalars>(s: &S, v: &S::E) -> BigInt {
    let q = s.to_rational(v);
    assert!(q.is_integer(), "non-integral element where an integer was expected");
    q.to_integer()
}

/// Integer vector spanning the same line as `v` over the ring. Over Z and
/// F_p this is the plain representative; over Q the vector is cleared of
/// denominators and made primitive.
pub(crate) fn primitive_int_vector<S: Scalars>(s: &S, v: &[S::E]) -> Vec<BigInt> {
    let qs: Vec<_> = v.iter().map(|x| s.to_rational(x)).collect();
    if qs.iter().all(|q| q.is_integer()) {
        // Z or F_p: representatives are already what we want.
        return qs.iter().map(|q| q.to_integer()).collect();
    }
    let mut lcm = BigInt::one();
    for q in &qs {
        lcm = lcm.lcm(q.denom());
    }
    let ints: Vec<BigInt> = qs
        .iter()
        .map(|q| (q * num_rational::BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() || g.is_one() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Row-echelon form with optional transform.
///
/// `rows` holds the echelon rows (nonzero rows first), `pivots[i]` the
/// pivot column of row `i`, and `transform` the invertible matrix `T` with
/// `T * input = rows`. Pivots are normalized (positive over Z, one over a
/// field) and every entry above a pivot is reduced, so for a fixed row span
/// the nonzero rows are canonical.
pub(crate) struct Echelon<E> {
    pub rows: Rows<E>,
    pub pivots: Vec<usize>,
    pub transform: Option<Rows<E>>,
}

impl<E> Echelon<E> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn row_axpy<S: Scalars>(s: &S, rows: &mut [Vec<S::E>], target: usize, src: usize, q: &S::E) {
    // rows[target] -= q * rows[src]
    if s.is_zero(q) {
        return;
    }
    let (t, sr) = if target < src {
        let (a, b) = rows.split_at_mut(src);
        (&mut a[target], &b[0])
    } else {
        let (a, b) = rows.split_at_mut(target);
        (&mut b[0], &a[src])
    };
    for (x, y) in t.iter_mut().zip(sr.iter()) {
        if !s.is_zero(y) {
            *x = s.sub(x, &s.mul(q, y));
        }
    }
}

fn row_scale<S: Scalars>(s: &S, row: &mut [S::E], u: &S::E) {
    for x in row.iter_mut() {
        *x = s.mul(x, u);
    }
}

pub(crate) fn echelon<S: Scalars>(s: &S, mut rows: Rows<S::E>, ncols: usize, track: bool) -> Echelon<S::E> {
    let m = rows.len();
    let mut t: Option<Rows<S::E>> = track.then(|| {
        (0..m)
            .map(|i| (0..m).map(|j| if i == j { s.one() } else { s.zero() }).collect())
            .collect()
    });
    let mut pivots = Vec::new();
    let mut r0 = 0;
    for c in 0..ncols {
        if r0 == m {
            break;
        }
        let mut found = false;
        loop {
            let mut best: Option<usize> = None;
            for i in r0..m {
                if !s.is_zero(&rows[i][c]) {
                    best = match best {
                        Some(b) if !s.smaller(&rows[i][c], &rows[b][c]) => Some(b),
                        _ => Some(i),
                    };
                }
            }
            let Some(b) = best else { break };
            found = true;
            rows.swap(r0, b);
            if let Some(t) = t.as_mut() {
                t.swap(r0, b);
            }
            let mut clean = true;
            for i in r0 + 1..m {
                if s.is_zero(&rows[i][c]) {
                    continue;
                }
                let (q, r) = s.div_rem(&rows[i][c], &rows[r0][c]);
                row_axpy(s, &mut rows, i, r0, &q);
                if let Some(t) = t.as_mut() {
                    row_axpy(s, t, i, r0, &q);
                }
                if !s.is_zero(&r) {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        let (u, _) = s.normalizing_unit(&rows[r0][c]);
        row_scale(s, &mut rows[r0], &u);
        if let Some(t) = t.as_mut() {
            row_scale(s, &mut t[r0], &u);
        }
        for i in 0..r0 {
            if s.is_zero(&rows[i][c]) {
                continue;
            }
            let (q, _) = s.div_rem(&rows[i][c], &rows[r0][c]);
            row_axpy(s, &mut rows, i, r0, &q);
            if let Some(t) = t.as_mut() {
                row_axpy(s, t, i, r0, &q);
            }
        }
        pivots.push(c);
        r0 += 1;
    }
    Echelon {
        rows,
        pivots,
        transform: t,
    }
}

/// Given the echelon form of `A` (rows `a_1..a_m`, with transform), finds `c`
/// with `sum_i c_i a_i = v`, if one exists over the ring.
pub(crate) fn solve_combination<S: Scalars>(s: &S, ech: &Echelon<S::E>, v: &[S::E]) -> Option<Vec<S::E>> {
    let t = ech.transform.as_ref().expect("solve needs the transform");
    let m = t.len();
    let mut y: Vec<S::E> = vec![s.zero(); m];
    let mut residual: Vec<S::E> = v.to_vec();
    for (i, &p) in ech.pivots.iter().enumerate() {
        if s.is_zero(&residual[p]) {
            continue;
        }
        let (q, r) = s.div_rem(&residual[p], &ech.rows[i][p]);
        if !s.is_zero(&r) {
            return None;
        }
        for (x, a) in residual.iter_mut().zip(&ech.rows[i]) {
            if !s.is_zero(a) {
                *x = s.sub(x, &s.mul(&q, a));
            }
        }
        y[i] = q;
    }
    if residual.iter().any(|x| !s.is_zero(x)) {
        return None;
    }
    // c^T = y^T T
    let mut c = vec![s.zero(); m];
    for (i, yi) in y.iter().enumerate() {
        if s.is_zero(yi) {
            continue;
        }
        for (cj, tij) in c.iter_mut().zip(&t[i]) {
            if !s.is_zero(tij) {
                *cj = s.add(cj, &s.mul(yi, tij));
            }
        }
    }
    Some(c)
}

/// Basis of `{x : sum_j x_j a_j = 0}` where `a_j` are the given row
/// vectors, returned in canonical echelon form.
pub(crate) fn left_kernel<S: Scalars>(s: &S, rows: Rows<S::E>, ncols: usize) -> Rows<S::E> {
    let m = rows.len();
    let ech = echelon(s, rows, ncols, true);
    let t = ech.transform.expect("tracked");
    let kernel: Rows<S::E> = t.into_iter().skip(ech.pivots.len()).collect();
    canonical_rows(s, kernel, m)
}

/// Canonical basis (nonzero echelon rows) of the span of the given rows.
pub(crate) fn canonical_rows<S: Scalars>(s: &S, rows: Rows<S::E>, ncols: usize) -> Rows<S::E> {
    let ech = echelon(s, rows, ncols, false);
    let r = ech.rank();
    ech.rows.into_iter().take(r).collect()
}

/// Smith normal form data: `diag` lists the nonzero invariant factors in
/// order, and `u * M * v = S`, `u * uinv = 1`.
pub(crate) struct Smith<E> {
    pub diag: Vec<E>,
    pub u: Rows<E>,
    pub uinv: Rows<E>,
    pub v: Rows<E>,
}

fn ident<S: Scalars>(s: &S, n: usize) -> Rows<S::E> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { s.one() } else { s.zero() }).collect())
        .collect()
}

pub(crate) fn smith<S: Scalars>(s: &S, mut a: Rows<S::E>, nrows: usize, ncols: usize) -> Smith<S::E> {
    let mut u = ident(s, nrows);
    let mut uinv = ident(s, nrows);
    let mut v = ident(s, ncols);
    let mut diag = Vec::new();

    // Row op: row_i -= q row_j, applied to a and u; uinv gets col_j += q col_i.
    fn row_op<S: Scalars>(s: &S, a: &mut Rows<S::E>, u: &mut Rows<S::E>, uinv: &mut Rows<S::E>, i: usize, j: usize, q: &S::E) {
        row_axpy(s, a, i, j, q);
        row_axpy(s, u, i, j, q);
        for row in uinv.iter_mut() {
            if !s.is_zero(&row[i]) {
                let add = s.mul(q, &row[i]);
                row[j] = s.add(&row[j], &add);
            }
        }
    }
    // Column op: col_i -= q col_j, applied to a and v.
    fn col_op<S: Scalars>(s: &S, a: &mut Rows<S::E>, v: &mut Rows<S::E>, i: usize, j: usize, q: &S::E) {
        for row in a.iter_mut().chain(v.iter_mut()) {
            if !s.is_zero(&row[j]) {
                let sub = s.mul(q, &row[j]);
                row[i] = s.sub(&row[i], &sub);
            }
        }
    }
    fn swap_rows<E>(a: &mut Rows<E>, u: &mut Rows<E>, uinv: &mut Rows<E>, i: usize, j: usize) {
        a.swap(i, j);
        u.swap(i, j);
        for row in uinv.iter_mut() {
            row.swap(i, j);
        }
    }
    fn swap_cols<E>(a: &mut Rows<E>, v: &mut Rows<E>, i: usize, j: usize) {
        for row in a.iter_mut().chain(v.iter_mut()) {
            row.swap(i, j);
        }
    }

    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if s.is_zero(&a[i][j]) {
                    continue;
                }
                best = match best {
                    Some((bi, bj)) if !s.smaller(&a[i][j], &a[bi][bj]) => Some((bi, bj)),
                    _ => Some((i, j)),
                };
            }
        }
        let Some((bi, bj)) = best else { break };
        swap_rows(&mut a, &mut u, &mut uinv, t, bi);
        swap_cols(&mut a, &mut v, t, bj);

        loop {
            let mut dirty = false;
            for i in t + 1..nrows {
                if s.is_zero(&a[i][t]) {
                    continue;
                }
                let (q, r) = s.div_rem(&a[i][t], &a[t][t]);
                row_op(s, &mut a, &mut u, &mut uinv, i, t, &q);
                if !s.is_zero(&r) {
                    dirty = true;
                }
            }
            for j in t + 1..ncols {
                if s.is_zero(&a[t][j]) {
                    continue;
                }
                let (q, r) = s.div_rem(&a[t][j], &a[t][t]);
                col_op(s, &mut a, &mut v, j, t, &q);
                if !s.is_zero(&r) {
                    dirty = true;
                }
            }
            if dirty {
                // a remainder survived in row t or column t: move the
                // smallest one onto the diagonal and go again
                let mut best = (t, t);
                for i in t + 1..nrows {
                    if !s.is_zero(&a[i][t]) && s.smaller(&a[i][t], &a[best.0][best.1]) {
                        best = (i, t);
                    }
                }
                for j in t + 1..ncols {
                    if !s.is_zero(&a[t][j]) && s.smaller(&a[t][j], &a[best.0][best.1]) {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    swap_rows(&mut a, &mut u, &mut uinv, t, best.0);
                }
                if best.1 != t {
                    swap_cols(&mut a, &mut v, t, best.1);
                }
                continue;
            }
            // divisibility of the trailing block
            let mut offender = None;
            'outer: for i in t + 1..nrows {
                for j in t + 1..ncols {
                    if s.is_zero(&a[i][j]) {
                        continue;
                    }
                    let (_, r) = s.div_rem(&a[i][j], &a[t][t]);
                    if !s.is_zero(&r) {
                        offender = Some(i);
                        break 'outer;
                    }
                }
            }
            match offender {
                Some(i) => {
                    // row_t += row_i
                    let minus_one = s.neg(&s.one());
                    row_op(s, &mut a, &mut u, &mut uinv, t, i, &minus_one);
                }
                None => break,
            }
        }
        let (unit, unit_inv) = s.normalizing_unit(&a[t][t]);
        row_scale(s, &mut a[t], &unit);
        row_scale(s, &mut u[t], &unit);
        for row in uinv.iter_mut() {
            row[t] = s.mul(&row[t], &unit_inv);
        }
        diag.push(a[t][t].clone());
        t += 1;
    }
    Smith { diag, u, uinv, v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::ring::{Integers, PrimeField, Rationals};

    fn ints(rows: &[&[i64]]) -> Rows<BigInt> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn hermite_rows_are_canonical() {
        let s = Integers;
        let a = canonical_rows(&s, ints(&[&[2, 4], &[6, 8]]), 2);
        let b = canonical_rows(&s, ints(&[&[2, 0], &[0, 4]]), 2);
        // span{(2,4),(6,8)} = span{(2,0),(0,4)}
        assert_eq!(a, b);
    }

    #[test]
    fn solve_finds_integer_combination() {
        let s = Integers;
        let rows = ints(&[&[2, 0], &[0, 3]]);
        let ech = echelon(&s, rows, 2, true);
        let c = solve_combination(&s, &ech, &[BigInt::from(4), BigInt::from(-3)]).unwrap();
        assert_eq!(c, vec![BigInt::from(2), BigInt::from(-1)]);
        assert!(solve_combination(&s, &ech, &[BigInt::from(1), BigInt::from(0)]).is_none());
    }

    #[test]
    fn left_kernel_over_rings() {
        let rows = ints(&[&[1, 2], &[2, 4], &[0, 1]]);
        let k = left_kernel(&Integers, rows.clone(), 2);
        assert_eq!(k, ints(&[&[2, -1, 0]]));
        let q = Rationals;
        let rq: Rows<_> = rows.iter().map(|r| r.iter().map(|x| q.from_int(x)).collect()).collect();
        assert_eq!(left_kernel(&q, rq, 2).len(), 1);
        let f = PrimeField::new(2);
        let rf: Rows<_> = rows.iter().map(|r| r.iter().map(|x| f.from_int(x)).collect()).collect();
        // mod 2 the first two rows vanish-ish: (1,0),(0,0),(0,1)
        assert_eq!(left_kernel(&f, rf, 2).len(), 1);
    }

    #[test]
    fn smith_small() {
        let s = Integers;
        let sm = smith(&s, ints(&[&[2, 4], &[6, 8]]), 2, 2);
        assert_eq!(sm.diag, vec![BigInt::from(2), BigInt::from(4)]);
        let sm = smith(&s, ints(&[&[2, 0], &[0, 3]]), 2, 2);
        assert_eq!(sm.diag, vec![BigInt::from(1), BigInt::from(6)]);
    }
}
