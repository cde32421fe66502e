use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::complexes::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::exactlin::span::{is_iso, maps_equal};
use crate::exactlin::{FGAbelianGroup, IntMatrix, RatMatrix, Ring};
use crate::spectra::TwoLineComplex;

/// Cellular complex of `CP^n`: one cell in each even degree `0..=2n`.
pub fn cpn_complex(ring: Ring, n: usize) -> ChainComplex {
    let ranks = (0..=2 * n).map(|k| usize::from(k % 2 == 0)).collect();
    let labels = (0..=2 * n)
        .map(|k| if k % 2 == 0 { vec![format!("u{}", k / 2)] } else { Vec::new() })
        .collect();
    ChainComplex::with_zero_differential(ring, 0, ranks)
        .with_labels(labels)
        .expect("labels match")
}

/// Position of `x_a (x) u_m` in degree `i + 2m` of `C (x) CP^n`.
fn borel_index(c: &ChainComplex, cp: &ChainComplex, i: i64, a: usize, m: usize) -> usize {
    let n = i + 2 * m as i64;
    let mut off = 0;
    for j in c.lo()..i {
        off += c.rank(j) * cp.rank(n - j);
    }
    off + a
}

/// `C (x) CP^n` as a two-line complex with `f = id (x) (u_m -> u_{m-1})`,
/// the cap product with the generator of `H^2(CP^n)`.
pub fn borel_two_line(c: &ChainComplex, n: usize) -> Result<TwoLineComplex> {
    let cp = cpn_complex(c.ring(), n);
    let model = c.tensor(&cp)?;
    let mut mats = BTreeMap::new();
    for k in model.degrees() {
        let mut m = IntMatrix::zeros(model.rank(k - 2), model.rank(k));
        if !c.is_empty_range() {
            for i in c.degrees() {
                let rest = k - i;
                if rest < 2 || rest % 2 != 0 || rest > 2 * n as i64 {
                    continue;
                }
                let mm = (rest / 2) as usize;
                for a in 0..c.rank(i) {
                    m.set(borel_index(c, &cp, i, a, mm - 1), borel_index(c, &cp, i, a, mm), BigInt::one());
                }
            }
        }
        mats.insert(k, m);
    }
    let f = ChainMap::new(model.clone(), model, -2, mats)?;
    TwoLineComplex::new(f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorelReport {
    /// `H_k` of the model, each equal to the sum of `H_{k-2m}(C)`.
    pub homology: Vec<(i64, FGAbelianGroup)>,
    /// Degrees where the Gysin `D` map was checked to be the shift
    /// `z (x) u_m -> z (x) u_{m-1}` that kills `m = 0`.
    pub d_map_degrees: Vec<i64>,
    /// Degrees where `H_k` was checked to agree with the model for `n + 1`.
    pub stable_degrees: Vec<i64>,
}

/// The Borel model `C (x) CP^n` of a trivial circle action. Checks the
/// splitting `H_k = sum_{m=0}^{n} H_{k-2m}(C)` including torsion, that the
/// Gysin `D` map (over a field; `Q` when `C` is over `Z`) is the projection
/// pattern, and that `H_k` does not change with `n` for
/// `k <= 2n + lo(C)`.
pub fn borel_trivial_action(c: &ChainComplex, n: usize) -> Result<(ChainComplex, BorelReport)> {
    let cp = cpn_complex(c.ring(), n);
    let model = c.tensor(&cp)?;
    let mut report = BorelReport {
        homology: Vec::new(),
        d_map_degrees: Vec::new(),
        stable_degrees: Vec::new(),
    };
    for k in model.degrees() {
        let got = model.homology(k);
        let mut want = FGAbelianGroup::zero(c.ring());
        for m in 0..=n as i64 {
            want = want.sum(&c.homology(k - 2 * m));
        }
        if got != want {
            return Err(Error::Mismatch(format!("H_{k} of the Borel model is {got}, expected {want}")));
        }
        report.homology.push((k, got));
    }

    // stabilization against n + 1
    let bigger = c.tensor(&cpn_complex(c.ring(), n + 1))?;
    if !c.is_empty_range() {
        for k in model.degrees() {
            if k <= 2 * n as i64 + c.lo() {
                if model.homology(k) != bigger.homology(k) {
                    return Err(Error::Mismatch(format!("H_{k} changes from n = {n} to n = {}", n + 1)));
                }
                report.stable_degrees.push(k);
            }
        }
    }

    // the D map over a field
    let field = if c.ring().is_field() { c.ring() } else { Ring::Rationals };
    let cf = c.change_ring(field)?;
    let t = borel_two_line(&cf, n)?;
    let g = t.gysin()?;
    let cpf = cpn_complex(field, n);
    for (&k, dmap) in &g.d_maps {
        let src = t.a().homology_sq(k);
        let tgt = t.aprime().homology_sq(k - 2);
        let lift = |z: &[BigRational], i: i64, m: usize, ambient: usize| -> Vec<BigRational> {
            let mut v = vec![BigRational::zero(); ambient];
            for (a, x) in z.iter().enumerate() {
                v[borel_index(&cf, &cpf, i, a, m)] = x.clone();
            }
            v
        };
        let mut cols = Vec::new();
        let mut images = Vec::new();
        for m in 0..=n {
            let i = k - 2 * m as i64;
            let hc = cf.homology_sq(i);
            for gi in 0..hc.ngens() {
                let z = hc.generator(gi);
                cols.push(src.coords(&lift(&z, i, m, t.a().rank(k)))?);
                images.push(if m == 0 {
                    vec![BigRational::zero(); tgt.ngens()]
                } else {
                    tgt.coords(&lift(&z, i, m - 1, t.aprime().rank(k - 2)))?
                });
            }
        }
        let basis = RatMatrix::from_columns(&cols, src.ngens())?;
        if !is_iso(&src, &src, &basis) {
            return Err(Error::Mismatch(format!("the classes z (x) u_m do not form a basis of H_{k}")));
        }
        let expected = RatMatrix::from_columns(&images, tgt.ngens())?;
        if !maps_equal(&tgt, &dmap.mul(&basis), &expected) {
            return Err(Error::Mismatch(format!("D is not the projection pattern in degree {k}")));
        }
        report.d_map_degrees.push(k);
    }
    Ok((model, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_gives_cpn() {
        let (m, r) = borel_trivial_action(&ChainComplex::point(Ring::Integers), 3).unwrap();
        assert_eq!(m.homology_table(), "H0=Z H1=0 H2=Z H3=0 H4=Z H5=0 H6=Z");
        assert_eq!(r.stable_degrees, (0..=6).collect::<Vec<_>>());
    }

    #[test]
    fn circle_n1() {
        let s1 = ChainComplex::with_zero_differential(Ring::Rationals, 0, vec![1, 1]);
        let (m, r) = borel_trivial_action(&s1, 1).unwrap();
        let dims: Vec<usize> = m.homology_all().iter().map(|(_, g)| g.dim()).collect();
        assert_eq!(dims, vec![1, 1, 1, 1]);
        assert!(!r.d_map_degrees.is_empty());
    }

    #[test]
    fn torsion_survives() {
        let rp2 = ChainComplex::from_diffs(
            Ring::Integers,
            0,
            vec![1, 1, 1],
            vec![IntMatrix::zeros(0, 1), IntMatrix::zeros(1, 1), IntMatrix::from_i64(1, 1, &[2])],
        )
        .unwrap();
        let (m, _) = borel_trivial_action(&rp2, 2).unwrap();
        assert_eq!(m.homology(3).to_string(), "Z/2");
        assert_eq!(m.homology(4).to_string(), "Z");
    }
}
