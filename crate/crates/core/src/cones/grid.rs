use std::collections::BTreeMap;

use crate::complexes::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::exactlin::span::maps_equal;
use crate::exactlin::{IntMatrix, RatMatrix, Subquotient};

use super::{cone, cone_ses, span_of, ShortExactSequence};

/// A morphism `(f, g, h)` from the sequence `top: A -> B -> C` to
/// `bottom: A' -> B' -> C'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SesMorphism {
    pub top: ShortExactSequence,
    pub bottom: ShortExactSequence,
    pub f: ChainMap,
    pub g: ChainMap,
    pub h: ChainMap,
}

impl SesMorphism {
    /// Validates that `g i = i' f` and `h p = p' g`.
    pub fn new(top: ShortExactSequence, bottom: ShortExactSequence, f: ChainMap, g: ChainMap, h: ChainMap) -> Result<Self> {
        for (name, m, s, t) in [
            ("f", &f, top.a(), bottom.a()),
            ("g", &g, top.b(), bottom.b()),
            ("h", &h, top.c(), bottom.c()),
        ] {
            if m.shift() != 0 || m.source() != s || m.target() != t {
                return Err(Error::NotAMorphism(format!("{name} does not connect the two rows")));
            }
        }
        let ring = f.ring();
        let (lo, hi) = span_of(&[top.a(), top.b(), top.c()]);
        for k in lo..=hi {
            let gi = g.mat(k).mul(&top.i().mat(k));
            let if_ = bottom.i().mat(k).mul(&f.mat(k));
            if !ring.matrix_is_zero(&gi.sub(&if_)) {
                return Err(Error::NotAMorphism(format!("g i != i' f in degree {k}")));
            }
            let hp = h.mat(k).mul(&top.p().mat(k));
            let pg = bottom.p().mat(k).mul(&g.mat(k));
            if !ring.matrix_is_zero(&hp.sub(&pg)) {
                return Err(Error::NotAMorphism(format!("h p != p' g in degree {k}")));
            }
        }
        Ok(SesMorphism {
            top,
            bottom,
            f,
            g,
            h,
        })
    }
}

/// Outcome of the grid check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GridReport {
    /// Number of individual squares checked (one per family and degree).
    pub squares_checked: usize,
    /// Degrees at which the marked square was checked.
    pub marked_degrees: Vec<i64>,
    /// Human-readable description of every failed check.
    pub failures: Vec<String>,
}

impl GridReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Shifts both ends of a shift-0 map, keeping its matrices.
pub(crate) fn shift_map(m: &ChainMap, k: i64) -> Result<ChainMap> {
    let src = m.source().shift(k);
    let tgt = m.target().shift(k);
    let mats = m.source().degrees().map(|d| (d - k, m.mat(d))).collect();
    ChainMap::new(src, tgt, 0, mats)
}

/// `alpha + beta` between cones, block diagonal (target block first).
fn cone_map(src: &ChainComplex, tgt: &ChainComplex, top: &ChainMap, bottom: &ChainMap) -> Result<ChainMap> {
    // top: X'[1] -> Y'[1], bottom: X -> Y
    let (lo, hi) = span_of(&[src]);
    let mut mats = BTreeMap::new();
    for k in lo..=hi {
        mats.insert(k, IntMatrix::block_diag(&top.mat(k), &bottom.mat(k)));
    }
    ChainMap::new(src.clone(), tgt.clone(), 0, mats)
}

/// The 3x3 grid of a morphism of short exact sequences. `rows[0]` is the
/// bottom sequence shifted by one, `rows[1]` the sequence of cones,
/// `rows[2]` the top sequence; `cols[j]` is the cone sequence of the `j`-th
/// vertical map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SesGrid {
    pub rows: [ShortExactSequence; 3],
    pub cols: [ShortExactSequence; 3],
}

/// Builds the 3x3 grid of complexes obtained by taking cones down the
/// columns of the morphism, forms every row and column long exact sequence,
/// and checks all squares between them: those coming from the first two
/// rows and from the morphism commute, and the square
/// `H_k(C) -> H_{k-1}(A)` over `h_*`, `f_*` anti-commutes, i.e.
/// `f_* d_B + d_{B'[1]} h_* = 0`.
pub fn grid_lemma57(m: &SesMorphism) -> Result<GridReport> {
    let grid = ses_grid(m)?;
    let mut report = GridReport::default();

    // every row and column sequence must be exact
    for r in &grid.rows {
        r.les_named(["X", "Y", "Z"])?;
    }
    for c in &grid.cols {
        c.les_named(["T", "M", "S"])?;
    }

    let (lo, hi) = span_of(&[
        grid.rows[0].a(),
        grid.rows[0].b(),
        grid.rows[0].c(),
        grid.rows[1].a(),
        grid.rows[1].b(),
        grid.rows[1].c(),
        grid.rows[2].a(),
        grid.rows[2].b(),
        grid.rows[2].c(),
    ]);

    // Vertical maps between rows r and r+1 for each column, at degree k.
    // Strip 1: row 0 -> row 1 via the inclusions of the column sequences;
    // strip 2: row 1 -> row 2 via the projections; strip 3: row 2 -> row 0
    // one degree lower via the connecting maps.
    for k in lo..=hi + 1 {
        for strip in 0..3 {
            let vert = |col: usize, deg: i64| -> Result<RatMatrix> {
                let c = &grid.cols[col];
                match strip {
                    0 => c.i().induced(deg),
                    1 => c.p().induced(deg),
                    _ => c.connecting(deg),
                }
            };
            let (upper, lower, lower_shift) = match strip {
                0 => (&grid.rows[0], &grid.rows[1], 0),
                1 => (&grid.rows[1], &grid.rows[2], 0),
                _ => (&grid.rows[2], &grid.rows[0], -1),
            };
            let hs = |ses: &ShortExactSequence, j: usize, deg: i64| -> Subquotient {
                match j {
                    0 => ses.a().homology_sq(deg),
                    1 => ses.b().homology_sq(deg),
                    _ => ses.c().homology_sq(deg),
                }
            };
            // i-square: X -> Y
            {
                let top = upper.i().induced(k)?;
                let bot = lower.i().induced(k + lower_shift)?;
                let left = vert(0, k)?;
                let right = vert(1, k)?;
                let tgt = hs(lower, 1, k + lower_shift);
                report.squares_checked += 1;
                if !maps_equal(&tgt, &right.mul(&top), &bot.mul(&left)) {
                    report.failures.push(format!("strip {} i-square at degree {k}", strip + 1));
                }
            }
            // p-square: Y -> Z
            {
                let top = upper.p().induced(k)?;
                let bot = lower.p().induced(k + lower_shift)?;
                let left = vert(1, k)?;
                let right = vert(2, k)?;
                let tgt = hs(lower, 2, k + lower_shift);
                report.squares_checked += 1;
                if !maps_equal(&tgt, &right.mul(&top), &bot.mul(&left)) {
                    report.failures.push(format!("strip {} p-square at degree {k}", strip + 1));
                }
            }
            // connecting square: Z_k -> X_{k-1}
            {
                let top = upper.connecting(k)?;
                let bot = lower.connecting(k + lower_shift)?;
                let left = vert(2, k)?;
                let right = vert(0, k - 1)?;
                let tgt = hs(lower, 0, k - 1 + lower_shift);
                report.squares_checked += 1;
                let a = right.mul(&top);
                let b = bot.mul(&left);
                if strip == 2 {
                    report.marked_degrees.push(k);
                    if !maps_equal(&tgt, &a, &b.neg()) {
                        report.failures.push(format!("marked square does not anti-commute at degree {k}"));
                    }
                } else if !maps_equal(&tgt, &a, &b) {
                    report.failures.push(format!("strip {} connecting square at degree {k}", strip + 1));
                }
            }
        }
    }
    Ok(report)
}

/// Builds the grid of complexes obtained by taking cones down the columns.
pub fn ses_grid(m: &SesMorphism) -> Result<SesGrid> {
    let cf = cone_ses(&m.f)?;
    let cg = cone_ses(&m.g)?;
    let ch = cone_ses(&m.h)?;
    let row0 = ShortExactSequence::new(shift_map(m.bottom.i(), 1)?, shift_map(m.bottom.p(), 1)?)?;
    let cone_f = cone(&m.f)?;
    let cone_g = cone(&m.g)?;
    let cone_h = cone(&m.h)?;
    let i_row = cone_map(&cone_f, &cone_g, &shift_map(m.bottom.i(), 1)?, m.top.i())?;
    let p_row = cone_map(&cone_g, &cone_h, &shift_map(m.bottom.p(), 1)?, m.top.p())?;
    let row1 = ShortExactSequence::new(i_row, p_row)?;
    let row2 = m.top.clone();
    Ok(SesGrid {
        rows: [row0, row1, row2],
        cols: [cf, cg, ch],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Ring;

    fn sample() -> ShortExactSequence {
        let a = ChainComplex::from_diffs(
            Ring::Integers,
            0,
            vec![1, 2],
            vec![IntMatrix::zeros(0, 1), IntMatrix::from_i64(1, 2, &[2, 0])],
        )
        .unwrap();
        let f = ChainMap::from_list(a.clone(), a, 0, vec![IntMatrix::from_i64(1, 1, &[3]), IntMatrix::from_i64(2, 2, &[3, 0, 1, 1])]).unwrap();
        cone_ses(&f).unwrap()
    }

    #[test]
    fn identity_and_zero_morphisms() {
        let s = sample();
        let ids = (ChainMap::identity(s.a()), ChainMap::identity(s.b()), ChainMap::identity(s.c()));
        let m = SesMorphism::new(s.clone(), s.clone(), ids.0, ids.1, ids.2).unwrap();
        let r = grid_lemma57(&m).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert!(!r.marked_degrees.is_empty());
        let zs = (
            ChainMap::zero(s.a().clone(), s.a().clone(), 0).unwrap(),
            ChainMap::zero(s.b().clone(), s.b().clone(), 0).unwrap(),
            ChainMap::zero(s.c().clone(), s.c().clone(), 0).unwrap(),
        );
        let m = SesMorphism::new(s.clone(), s.clone(), zs.0, zs.1, zs.2).unwrap();
        assert!(grid_lemma57(&m).unwrap().passed());
    }

    #[test]
    fn non_commuting_morphism_is_rejected() {
        let s = sample();
        let two = |c: &ChainComplex| {
            let mats = c.degrees().map(|k| (k, IntMatrix::identity(c.rank(k)).scale(&2.into()))).collect();
            ChainMap::new(c.clone(), c.clone(), 0, mats).unwrap()
        };
        let m = SesMorphism::new(s.clone(), s.clone(), ChainMap::identity(s.a()), two(s.b()), ChainMap::identity(s.c()));
        assert!(matches!(m, Err(Error::NotAMorphism(_))));
    }
}
