use serde::{Deserialize, Serialize};

use crate::cones::LongExactSequence;
use crate::error::{Error, Result};
use crate::exactlin::span::rank_in;

/// What is known about a map of a partially specified exact sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapStatus {
    Unknown,
    Zero,
    Injective,
    Surjective,
    Iso,
    Rank(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialSlot {
    pub name: String,
    #[serde(default)]
    pub dim: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialMap {
    pub name: String,
    pub status: MapStatus,
}

/// A stretch of an exact sequence of vector spaces, `maps[i]` going from
/// `slots[i]` to `slots[i + 1]`. With `bounded` the stretch is flanked by
/// zeros on both sides.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialLes {
    pub slots: Vec<PartialSlot>,
    pub maps: Vec<PartialMap>,
    /// Pairs of slots known to have the same dimension.
    #[serde(default)]
    pub equal_dims: Vec<(usize, usize)>,
    #[serde(default)]
    pub bounded: bool,
}

impl PartialLes {
    /// Every dimension unknown, every map unknown.
    pub fn blank(names: &[String], map_names: &[String], bounded: bool) -> Self {
        PartialLes {
            slots: names.iter().map(|n| PartialSlot { name: n.clone(), dim: None }).collect(),
            maps: map_names
                .iter()
                .map(|n| PartialMap {
                    name: n.clone(),
                    status: MapStatus::Unknown,
                })
                .collect(),
            equal_dims: Vec::new(),
            bounded,
        }
    }

    /// Skeleton of a computed sequence (dimensions and maps left unknown).
    pub fn skeleton_of(les: &LongExactSequence) -> Self {
        let names: Vec<String> = (0..les.len()).map(|i| les.slot_name(i)).collect();
        PartialLes::blank(&names, &les.map_names, true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deduction {
    pub rule: String,
    pub statement: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolvedReport {
    pub dims: Vec<Option<usize>>,
    pub ranks: Vec<Option<usize>>,
    pub statuses: Vec<MapStatus>,
    pub deductions: Vec<Deduction>,
}

impl SolvedReport {
    pub fn is_iso(&self, map: usize) -> bool {
        self.statuses[map] == MapStatus::Iso
    }
}

struct Eqn {
    terms: Vec<(usize, i64)>,
    rhs: i64,
    tag: &'static str,
}

/// Propagates dimensions and ranks through a partially known exact sequence
/// over a field. Rules: (R1) a slot flanked by zero maps is zero; (R2) a
/// zero slot makes the map before it zero, the map after it zero, and
/// hence the next maps out injective resp. surjective; (R3) a bounded
/// sequence has alternating dimension sum zero. Exactness at every slot is
/// `dim = rank(in) + rank(out)`.
pub fn les_solver(input: &PartialLes) -> Result<SolvedReport> {
    let n = input.slots.len();
    if n == 0 {
        return Ok(SolvedReport {
            dims: vec![],
            ranks: vec![],
            statuses: vec![],
            deductions: vec![],
        });
    }
    if input.maps.len() + 1 != n {
        return Err(Error::Shape(format!("{n} slots need {} maps, got {}", n - 1, input.maps.len())));
    }
    // variables: d_0..d_{n-1}, r_0..r_{n-2}, r_in, r_out
    let d = |i: usize| i;
    let r = |j: usize| n + j;
    let r_in = 2 * n - 1;
    let r_out = 2 * n;
    let nvars = 2 * n + 1;
    let mut val: Vec<Option<i64>> = vec![None; nvars];
    let mut deductions = Vec::new();
    let var_name = |v: usize| -> String {
        if v < n {
            format!("dim {}", input.slots[v].name)
        } else if v < 2 * n - 1 {
            format!("rank {}", input.maps[v - n].name)
        } else if v == r_in {
            "rank of the map into the first slot".to_string()
        } else {
            "rank of the map out of the last slot".to_string()
        }
    };
    for (i, s) in input.slots.iter().enumerate() {
        val[d(i)] = s.dim.map(|x| x as i64);
    }
    if input.bounded {
        val[r_in] = Some(0);
        val[r_out] = Some(0);
    }
    let mut eqs: Vec<Eqn> = Vec::new();
    for i in 0..n {
        let before = if i == 0 { r_in } else { r(i - 1) };
        let after = if i == n - 1 { r_out } else { r(i) };
        eqs.push(Eqn {
            terms: vec![(d(i), 1), (before, -1), (after, -1)],
            rhs: 0,
            tag: "exactness",
        });
    }
    for &(a, b) in &input.equal_dims {
        if a >= n || b >= n {
            return Err(Error::Shape(format!("equal_dims refers to slot {} of {n}", a.max(b))));
        }
        eqs.push(Eqn {
            terms: vec![(d(a), 1), (d(b), -1)],
            rhs: 0,
            tag: "equal",
        });
    }
    if input.bounded {
        eqs.push(Eqn {
            terms: (0..n).map(|i| (d(i), if i % 2 == 0 { 1 } else { -1 })).collect(),
            rhs: 0,
            tag: "R3",
        });
    }
    for (j, m) in input.maps.iter().enumerate() {
        let mut push = |terms: Vec<(usize, i64)>, rhs: i64| {
            eqs.push(Eqn {
                terms,
                rhs,
                tag: "given",
            })
        };
        match m.status {
            MapStatus::Unknown => {}
            MapStatus::Zero => push(vec![(r(j), 1)], 0),
            MapStatus::Rank(k) => push(vec![(r(j), 1)], k as i64),
            MapStatus::Injective => push(vec![(r(j), 1), (d(j), -1)], 0),
            MapStatus::Surjective => push(vec![(r(j), 1), (d(j + 1), -1)], 0),
            MapStatus::Iso => {
                push(vec![(r(j), 1), (d(j), -1)], 0);
                push(vec![(r(j), 1), (d(j + 1), -1)], 0);
            }
        }
    }

    let mut changed = true;
    while changed {
        changed = false;
        // R2: a zero slot kills both adjacent maps
        for i in 0..n {
            if val[d(i)] == Some(0) {
                let before = if i == 0 { r_in } else { r(i - 1) };
                let after = if i == n - 1 { r_out } else { r(i) };
                for v in [before, after] {
                    match val[v] {
                        None => {
                            val[v] = Some(0);
                            changed = true;
                            deductions.push(Deduction {
                                rule: "R2".into(),
                                statement: format!("{} = 0 since {} = 0", var_name(v), input.slots[i].name),
                            });
                        }
                        Some(0) => {}
                        Some(x) => {
                            return Err(Error::Contradiction(format!(
                                "{} = {x} but {} is zero",
                                var_name(v),
                                input.slots[i].name
                            )))
                        }
                    }
                }
            }
        }
        for e in &eqs {
            let unknown: Vec<&(usize, i64)> = e.terms.iter().filter(|(v, _)| val[*v].is_none()).collect();
            let known: i64 = e
                .terms
                .iter()
                .filter_map(|(v, c)| val[*v].map(|x| x * c))
                .sum();
            match unknown.len() {
                0 => {
                    if known != e.rhs {
                        let desc: Vec<String> = e.terms.iter().map(|(v, _)| var_name(*v)).collect();
                        return Err(Error::Contradiction(format!(
                            "{} relation violated among {}",
                            e.tag,
                            desc.join(", ")
                        )));
                    }
                }
                1 => {
                    let (v, c) = *unknown[0];
                    let x = (e.rhs - known) * c; // c is +-1
                    if x < 0 {
                        return Err(Error::Contradiction(format!("{} would be {x}", var_name(v))));
                    }
                    val[v] = Some(x);
                    changed = true;
                    let rule = if e.tag == "exactness" && v < n && x == 0 {
                        "R1"
                    } else if e.tag == "exactness" && v >= n {
                        "R2"
                    } else {
                        e.tag
                    };
                    deductions.push(Deduction {
                        rule: rule.into(),
                        statement: format!("{} = {x}", var_name(v)),
                    });
                }
                _ => {}
            }
        }
        // ranks never exceed the dimensions on either side
        for j in 0..n - 1 {
            if let Some(rk) = val[r(j)] {
                for s in [j, j + 1] {
                    if let Some(dm) = val[d(s)] {
                        if rk > dm {
                            return Err(Error::Contradiction(format!(
                                "rank {} = {rk} exceeds dim {} = {dm}",
                                input.maps[j].name, input.slots[s].name
                            )));
                        }
                    }
                }
            }
        }
    }

    let rank_of = |v: usize| val[v];
    let mut statuses = Vec::with_capacity(n - 1);
    for j in 0..n - 1 {
        let rk = rank_of(r(j));
        let before = if j == 0 { r_in } else { r(j - 1) };
        let after = if j + 1 == n - 1 { r_out } else { r(j + 1) };
        let zero = rk == Some(0);
        let inj = rank_of(before) == Some(0) || (rk.is_some() && rk == val[d(j)]);
        let sur = rank_of(after) == Some(0) || (rk.is_some() && rk == val[d(j + 1)]);
        let st = if inj && sur {
            MapStatus::Iso
        } else if zero {
            MapStatus::Zero
        } else if inj {
            MapStatus::Injective
        } else if sur {
            MapStatus::Surjective
        } else if let Some(k) = rk {
            MapStatus::Rank(k as usize)
        } else {
            MapStatus::Unknown
        };
        if st != input.maps[j].status && st != MapStatus::Unknown {
            deductions.push(Deduction {
                rule: if inj || sur { "R2".into() } else { "exactness".into() },
                statement: format!("{} is {:?}", input.maps[j].name, st),
            });
        }
        statuses.push(st);
    }
    Ok(SolvedReport {
        dims: (0..n).map(|i| val[d(i)].map(|x| x as usize)).collect(),
        ranks: (0..n - 1).map(|j| val[r(j)].map(|x| x as usize)).collect(),
        statuses,
        deductions,
    })
}

/// Fills a partial sequence with the dimensions and ranks of a computed
/// one (over a field) and checks the solver accepts it.
pub fn check_against(les: &LongExactSequence) -> Result<SolvedReport> {
    let mut p = PartialLes::skeleton_of(les);
    for (i, s) in les.slots.iter().enumerate() {
        p.slots[i].dim = Some(s.group.dim());
    }
    for (j, m) in les.maps.iter().enumerate() {
        let ring = les.slots[j].sq.ring();
        p.maps[j].status = MapStatus::Rank(rank_in(ring, m));
    }
    les_solver(&p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slots(dims: &[Option<usize>]) -> Vec<PartialSlot> {
        dims.iter()
            .enumerate()
            .map(|(i, &dim)| PartialSlot { name: format!("X{i}"), dim })
            .collect()
    }

    fn maps(st: &[MapStatus]) -> Vec<PartialMap> {
        st.iter()
            .enumerate()
            .map(|(i, &status)| PartialMap { name: format!("f{i}"), status })
            .collect()
    }

    #[test]
    fn two_term_sequence() {
        let p = PartialLes {
            slots: slots(&[Some(3), None]),
            maps: maps(&[MapStatus::Unknown]),
            equal_dims: vec![],
            bounded: true,
        };
        let r = les_solver(&p).unwrap();
        assert_eq!(r.dims, vec![Some(3), Some(3)]);
        assert!(r.is_iso(0));
    }

    #[test]
    fn zero_slots_force_isos() {
        // 0 -> A -> X -> B -> 0 with X = 0 ... here the middle map of
        // Z -> A -> B -> Z with both Z zero
        let p = PartialLes {
            slots: slots(&[Some(0), None, None, Some(0)]),
            maps: maps(&[MapStatus::Unknown; 3]),
            equal_dims: vec![],
            bounded: false,
        };
        let r = les_solver(&p).unwrap();
        assert!(r.is_iso(1));
        assert!(r.deductions.iter().any(|d| d.rule == "R2"));
    }

    #[test]
    fn flanking_zero_maps() {
        let p = PartialLes {
            slots: slots(&[None, None, None]),
            maps: maps(&[MapStatus::Zero, MapStatus::Zero]),
            equal_dims: vec![],
            bounded: false,
        };
        let r = les_solver(&p).unwrap();
        assert_eq!(r.dims[1], Some(0));
        assert!(r.deductions.iter().any(|d| d.rule == "R1"));
    }

    #[test]
    fn alternating_sum() {
        let p = PartialLes {
            slots: slots(&[Some(1), Some(3), None, Some(2)]),
            maps: maps(&[MapStatus::Unknown; 3]),
            equal_dims: vec![],
            bounded: true,
        };
        let r = les_solver(&p).unwrap();
        assert_eq!(r.dims[2], Some(4));
    }

    #[test]
    fn contradiction() {
        let p = PartialLes {
            slots: slots(&[Some(1), Some(2)]),
            maps: maps(&[MapStatus::Unknown]),
            equal_dims: vec![],
            bounded: true,
        };
        assert!(matches!(les_solver(&p), Err(Error::Contradiction(_))));
    }
}
