//! The JSON document format. Every document is one object with
//! `schema_version`, `kind` and `ring`; integers that may grow large are
//! written as decimal strings. The schema lives in `schema/document.schema.json`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::complexes::{ChainComplex, ChainMap};
use crate::cones::{LongExactSequence, SesMorphism, ShortExactSequence};
use crate::equivariant::{ActionSign, Circle, MapStatus, MorseBottS1Datum, Orbit, PartialLes, PartialMap, PartialSlot, S1MorseDatum};
use crate::error::{Error, Result};
use crate::exactlin::span::rank_in;
use crate::exactlin::{FGAbelianGroup, IntMatrix, RatMatrix, Ring};
use crate::spectra::{FilteredComplex, TwoLineComplex};

pub const SCHEMA_VERSION: u64 = 1;

pub const KINDS: &[&str] = &[
    "complex",
    "filtered_complex",
    "two_line",
    "chain_map",
    "s1_morse_datum",
    "mb_datum",
    "ses_morphism",
    "les",
];

fn doc_err(msg: impl Into<String>) -> Error {
    Error::Document(msg.into())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum RingDoc {
    Name(String),
    Zp {
        #[serde(rename = "Zp")]
        zp: u64,
    },
}

fn ring_from(doc: &RingDoc) -> Result<Ring> {
    match doc {
        RingDoc::Name(s) if s == "Z" => Ok(Ring::Integers),
        RingDoc::Name(s) if s == "Q" => Ok(Ring::Rationals),
        RingDoc::Name(s) => Err(doc_err(format!("unknown ring '{s}' (expected \"Z\", \"Q\" or {{\"Zp\": p}})"))),
        RingDoc::Zp { zp } => Ring::prime_field(*zp),
    }
}

fn ring_to(ring: Ring) -> RingDoc {
    match ring {
        Ring::Integers => RingDoc::Name("Z".into()),
        Ring::Rationals => RingDoc::Name("Q".into()),
        Ring::PrimeField(p) => RingDoc::Zp { zp: p },
    }
}

/// Parses a ring the way the `--ring` flag spells it: `Z`, `Q`, `Zp:5`, `F5`
/// or `Z5`.
pub fn parse_ring(s: &str) -> Result<Ring> {
    let s = s.trim();
    match s {
        "Z" | "z" => Ok(Ring::Integers),
        "Q" | "q" => Ok(Ring::Rationals),
        _ => {
            let digits = s
                .strip_prefix("Zp:")
                .or_else(|| s.strip_prefix("Zp"))
                .or_else(|| s.strip_prefix('F'))
                .or_else(|| s.strip_prefix('Z'))
                .ok_or_else(|| Error::InvalidRing(format!("cannot parse ring '{s}'")))?;
            let p = digits
                .parse::<u64>()
                .map_err(|_| Error::InvalidRing(format!("cannot parse ring '{s}'")))?;
            Ring::prime_field(p)
        }
    }
}

/// An integer, accepted as a decimal string or a JSON number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum IntValue {
    Str(String),
    Num(i64),
}

impl IntValue {
    fn to_big(&self) -> Result<BigInt> {
        match self {
            IntValue::Str(s) => s.trim().parse().map_err(|_| doc_err(format!("'{s}' is not an integer"))),
            IntValue::Num(n) => Ok(BigInt::from(*n)),
        }
    }

    fn of(v: &BigInt) -> Self {
        IntValue::Str(v.to_string())
    }
}

type Triple = (usize, usize, IntValue);

fn triples_of(m: &IntMatrix) -> Vec<Triple> {
    m.to_triples().iter().map(|(i, j, v)| (*i, *j, IntValue::of(v))).collect()
}

fn matrix_of(rows: usize, cols: usize, t: &[Triple], what: &str) -> Result<IntMatrix> {
    let big: Vec<(usize, usize, BigInt)> = t
        .iter()
        .map(|(i, j, v)| Ok((*i, *j, v.to_big()?)))
        .collect::<Result<_>>()?;
    IntMatrix::from_triples(rows, cols, &big).map_err(|e| doc_err(format!("{what}: {e}")))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexBody {
    degrees: BTreeMap<i64, usize>,
    #[serde(default)]
    differentials: BTreeMap<i64, Vec<Triple>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<BTreeMap<i64, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    filtration: Option<BTreeMap<i64, Vec<i64>>>,
}

fn body_of(c: &ChainComplex) -> ComplexBody {
    let mut body = ComplexBody::default();
    if c.is_empty_range() {
        return body;
    }
    for k in c.degrees() {
        body.degrees.insert(k, c.rank(k));
        let d = c.diff(k);
        if !d.is_zero() {
            body.differentials.insert(k, triples_of(&d));
        }
    }
    if let Some(labels) = c.all_labels() {
        body.labels = Some(c.degrees().zip(labels.iter().cloned()).collect());
    }
    body
}

fn filtered_body_of(fc: &FilteredComplex) -> ComplexBody {
    let mut body = body_of(fc.complex());
    let c = fc.complex();
    if !c.is_empty_range() {
        body.filtration = Some(c.degrees().map(|k| (k, fc.levels(k).to_vec())).collect());
    }
    body
}

fn complex_of(ring: Ring, body: &ComplexBody, what: &str) -> Result<ChainComplex> {
    let (lo, hi) = match (body.degrees.keys().next(), body.degrees.keys().next_back()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => {
            if body.differentials.values().any(|t| !t.is_empty()) {
                return Err(doc_err(format!("{what}: differentials given for an empty complex")));
            }
            return Ok(ChainComplex::zero(ring));
        }
    };
    let rank = |k: i64| body.degrees.get(&k).copied().unwrap_or(0);
    let ranks: Vec<usize> = (lo..=hi).map(rank).collect();
    let mut diffs = BTreeMap::new();
    for (&k, t) in &body.differentials {
        if t.is_empty() {
            continue;
        }
        if k < lo || k > hi {
            return Err(doc_err(format!("{what}: differential out of degree {k}, outside the degree range")));
        }
        diffs.insert(k, matrix_of(rank(k - 1), rank(k), t, &format!("{what}: differential out of degree {k}"))?);
    }
    let mut c = ChainComplex::new(ring, lo, ranks, diffs)?;
    if let Some(labels) = &body.labels {
        let mut per = Vec::new();
        for k in lo..=hi {
            match labels.get(&k) {
                Some(l) => per.push(l.clone()),
                None if rank(k) == 0 => per.push(Vec::new()),
                None => return Err(doc_err(format!("{what}: no labels for degree {k}"))),
            }
        }
        if let Some(k) = labels.keys().find(|k| **k < lo || **k > hi) {
            return Err(doc_err(format!("{what}: labels for degree {k}, outside the degree range")));
        }
        c = c.with_labels(per).map_err(|e| doc_err(format!("{what}: {e}")))?;
    }
    Ok(c)
}

fn filtered_of(ring: Ring, body: &ComplexBody, what: &str) -> Result<Option<FilteredComplex>> {
    let c = complex_of(ring, body, what)?;
    let Some(f) = &body.filtration else { return Ok(None) };
    if c.is_empty_range() {
        return Ok(Some(FilteredComplex::new(c, Vec::new())?));
    }
    let mut levels = Vec::new();
    for k in c.degrees() {
        match f.get(&k) {
            Some(l) => levels.push(l.clone()),
            None if c.rank(k) == 0 => levels.push(Vec::new()),
            None => return Err(doc_err(format!("{what}: no filtration levels for degree {k}"))),
        }
    }
    Ok(Some(FilteredComplex::new(c, levels)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapBody {
    source: ComplexBody,
    target: ComplexBody,
    shift: i64,
    #[serde(default)]
    matrices: BTreeMap<i64, Vec<Triple>>,
}

fn map_body_of(m: &ChainMap) -> MapBody {
    let mut matrices = BTreeMap::new();
    if !m.source().is_empty_range() {
        for k in m.source().degrees() {
            let a = m.mat(k);
            if !a.is_zero() {
                matrices.insert(k, triples_of(&a));
            }
        }
    }
    MapBody {
        source: body_of(m.source()),
        target: body_of(m.target()),
        shift: m.shift(),
        matrices,
    }
}

fn map_mats(s: &ChainComplex, t: &ChainComplex, shift: i64, mats: &BTreeMap<i64, Vec<Triple>>, what: &str) -> Result<BTreeMap<i64, IntMatrix>> {
    let mut out = BTreeMap::new();
    for (&k, tr) in mats {
        if tr.is_empty() {
            continue;
        }
        if s.rank(k) == 0 {
            return Err(doc_err(format!("{what}: entries in degree {k}, where the source is zero")));
        }
        out.insert(k, matrix_of(t.rank(k + shift), s.rank(k), tr, &format!("{what}: degree {k}"))?);
    }
    for k in s.degrees() {
        out.entry(k).or_insert_with(|| IntMatrix::zeros(t.rank(k + shift), s.rank(k)));
    }
    Ok(out)
}

fn map_of(ring: Ring, b: &MapBody, what: &str) -> Result<ChainMap> {
    let s = complex_of(ring, &b.source, &format!("{what} source"))?;
    let t = complex_of(ring, &b.target, &format!("{what} target"))?;
    let mats = if s.is_empty_range() { BTreeMap::new() } else { map_mats(&s, &t, b.shift, &b.matrices, what)? };
    ChainMap::new(s, t, b.shift, mats)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TwoLineBody {
    a: ComplexBody,
    aprime: ComplexBody,
    #[serde(default)]
    f: BTreeMap<i64, Vec<Triple>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircleDoc {
    index: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct S1MorseBody {
    circles: Vec<CircleDoc>,
    /// `[upper, lower, count]`
    #[serde(default)]
    counts: Vec<Triple>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrbitDoc {
    weight: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sign: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MbBody {
    orbits: Vec<OrbitDoc>,
    /// `[target, source, value]`
    #[serde(default)]
    d1: Vec<Triple>,
    #[serde(default)]
    d2: Vec<Triple>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SesBody {
    i: MapBody,
    p: MapBody,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SesMorphismBody {
    top: SesBody,
    bottom: SesBody,
    f: MapBody,
    g: MapBody,
    h: MapBody,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub free_rank: usize,
    #[serde(default)]
    torsion: Vec<IntValue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LesSlotDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LesMapDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<MapStatus>,
    /// Rows of rational entries such as `"3"` or `"-1/2"`, on the generators
    /// of the groups.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
}

/// A stretch of an exact sequence: either computed (groups and matrices) or
/// partially specified for the solver (dimensions and map statuses).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LesDoc {
    pub slots: Vec<LesSlotDoc>,
    pub maps: Vec<LesMapDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub equal_dims: Vec<(usize, usize)>,
    #[serde(default)]
    pub bounded: bool,
}

fn group_doc(g: &FGAbelianGroup) -> GroupDoc {
    GroupDoc {
        free_rank: g.free_rank,
        torsion: g.torsion.iter().map(IntValue::of).collect(),
    }
}

fn rat_rows(m: &RatMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect()
}

fn parse_rat(s: &str) -> Result<BigRational> {
    s.trim().parse().map_err(|_| doc_err(format!("'{s}' is not a rational number")))
}

impl LesDoc {
    pub fn from_les(les: &LongExactSequence) -> Self {
        LesDoc {
            slots: les
                .slots
                .iter()
                .map(|s| LesSlotDoc {
                    name: s.label.clone(),
                    degree: Some(s.degree),
                    dim: Some(s.group.dim()),
                    group: Some(group_doc(&s.group)),
                })
                .collect(),
            maps: les
                .maps
                .iter()
                .zip(&les.map_names)
                .map(|(m, n)| LesMapDoc {
                    name: n.clone(),
                    status: None,
                    matrix: Some(rat_rows(m)),
                })
                .collect(),
            equal_dims: Vec::new(),
            bounded: true,
        }
    }

    pub fn from_partial(p: &PartialLes) -> Self {
        LesDoc {
            slots: p
                .slots
                .iter()
                .map(|s| LesSlotDoc {
                    name: s.name.clone(),
                    degree: None,
                    dim: s.dim,
                    group: None,
                })
                .collect(),
            maps: p
                .maps
                .iter()
                .map(|m| LesMapDoc {
                    name: m.name.clone(),
                    status: Some(m.status),
                    matrix: None,
                })
                .collect(),
            equal_dims: p.equal_dims.clone(),
            bounded: p.bounded,
        }
    }

    fn slot_dim(&self, i: usize) -> Option<usize> {
        let s = &self.slots[i];
        s.dim.or_else(|| s.group.as_ref().map(|g| g.free_rank + g.torsion.len()))
    }

    /// The solver input: dimensions from `dim` (or the group), statuses from
    /// `status` (or the rank of the matrix over `Q`).
    pub fn to_partial(&self) -> Result<PartialLes> {
        let mut maps = Vec::new();
        for m in &self.maps {
            let status = match (&m.status, &m.matrix) {
                (Some(s), _) => *s,
                (None, Some(rows)) => MapStatus::Rank(rank_in(Ring::Rationals, &rat_matrix(rows)?)),
                (None, None) => MapStatus::Unknown,
            };
            maps.push(PartialMap {
                name: m.name.clone(),
                status,
            });
        }
        Ok(PartialLes {
            slots: (0..self.slots.len())
                .map(|i| PartialSlot {
                    name: self.slots[i].name.clone(),
                    dim: self.slot_dim(i),
                })
                .collect(),
            maps,
            equal_dims: self.equal_dims.clone(),
            bounded: self.bounded,
        })
    }

    /// Shapes, and exactness wherever all data is present over a field.
    fn validate(&self, ring: Ring) -> Result<()> {
        if !self.slots.is_empty() && self.maps.len() + 1 != self.slots.len() {
            return Err(doc_err(format!("{} slots need {} maps, got {}", self.slots.len(), self.slots.len() - 1, self.maps.len())));
        }
        if self.slots.is_empty() && !self.maps.is_empty() {
            return Err(doc_err("maps without slots"));
        }
        for (a, b) in &self.equal_dims {
            if *a >= self.slots.len() || *b >= self.slots.len() {
                return Err(doc_err(format!("equal_dims refers to slot ({a}, {b}) out of range")));
            }
        }
        let ngens = |i: usize| -> Option<usize> {
            let s = &self.slots[i];
            s.group.as_ref().map(|g| g.free_rank + g.torsion.len()).or(s.dim)
        };
        let mut ranks = Vec::new();
        for (i, m) in self.maps.iter().enumerate() {
            let Some(rows) = &m.matrix else {
                ranks.push(None);
                continue;
            };
            let mat = rat_matrix(rows)?;
            if let (Some(c), Some(r)) = (ngens(i), ngens(i + 1)) {
                let want = (r, c);
                if (mat.rows(), mat.cols()) != want && !(mat.rows() == 0 && (r == 0 || c == 0)) {
                    return Err(Error::Shape(format!(
                        "map '{}' is {}x{}, expected {}x{}",
                        m.name,
                        mat.rows(),
                        mat.cols(),
                        r,
                        c
                    )));
                }
            }
            ranks.push(Some(rank_in(Ring::Rationals, &mat)));
        }
        if ring.is_field() {
            for i in 0..self.slots.len() {
                let Some(dim) = self.slot_dim(i) else { continue };
                let before = if i == 0 { if self.bounded { Some(0) } else { None } } else { ranks[i - 1] };
                let after = if i + 1 == self.slots.len() { if self.bounded { Some(0) } else { None } } else { ranks[i] };
                if let (Some(b), Some(a)) = (before, after) {
                    if a + b != dim {
                        return Err(Error::ExactnessFailure(format!("slot {i} ('{}')", self.slots[i].name)));
                    }
                }
            }
        }
        Ok(())
    }
}

fn rat_matrix(rows: &[Vec<String>]) -> Result<RatMatrix> {
    let cols = rows.first().map_or(0, |r| r.len());
    let parsed: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    RatMatrix::from_rows(parsed, cols)
}

/// A decoded document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Complex(ChainComplex),
    FilteredComplex(FilteredComplex),
    TwoLine(TwoLineComplex),
    /// A chain map, with filtrations on both ends when both were given.
    ChainMap {
        map: ChainMap,
        filtrations: Option<(FilteredComplex, FilteredComplex)>,
    },
    S1MorseDatum(S1MorseDatum),
    MbDatum(MorseBottS1Datum),
    SesMorphism(SesMorphism),
    Les { ring: Ring, les: LesDoc },
}

fn sign_name(s: ActionSign) -> &'static str {
    match s {
        ActionSign::Minus => "minus",
        ActionSign::Plus => "plus",
    }
}

fn big_triples(t: &[Triple]) -> Result<Vec<(usize, usize, BigInt)>> {
    t.iter().map(|(i, j, v)| Ok((*i, *j, v.to_big()?))).collect()
}

fn big_to_triples(t: &[(usize, usize, BigInt)]) -> Vec<Triple> {
    t.iter().filter(|(_, _, v)| !v.is_zero()).map(|(i, j, v)| (*i, *j, IntValue::of(v))).collect()
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Complex(_) => "complex",
            Document::FilteredComplex(_) => "filtered_complex",
            Document::TwoLine(_) => "two_line",
            Document::ChainMap { .. } => "chain_map",
            Document::S1MorseDatum(_) => "s1_morse_datum",
            Document::MbDatum(_) => "mb_datum",
            Document::SesMorphism(_) => "ses_morphism",
            Document::Les { .. } => "les",
        }
    }

    pub fn ring(&self) -> Ring {
        match self {
            Document::Complex(c) => c.ring(),
            Document::FilteredComplex(f) => f.complex().ring(),
            Document::TwoLine(t) => t.ring(),
            Document::ChainMap { map, .. } => map.ring(),
            Document::S1MorseDatum(d) => d.ring,
            Document::MbDatum(d) => d.ring,
            Document::SesMorphism(m) => m.f.ring(),
            Document::Les { ring, .. } => *ring,
        }
    }

    pub fn to_value(&self) -> Value {
        let body = match self {
            Document::Complex(c) => serde_json::to_value(body_of(c)),
            Document::FilteredComplex(f) => serde_json::to_value(filtered_body_of(f)),
            Document::TwoLine(t) => {
                let mb = map_body_of(t.f());
                serde_json::to_value(TwoLineBody {
                    a: mb.source,
                    aprime: mb.target,
                    f: mb.matrices,
                })
            }
            Document::ChainMap { map, filtrations } => {
                let mut mb = map_body_of(map);
                if let Some((s, t)) = filtrations {
                    mb.source = filtered_body_of(s);
                    mb.target = filtered_body_of(t);
                }
                serde_json::to_value(mb)
            }
            Document::S1MorseDatum(d) => serde_json::to_value(S1MorseBody {
                circles: d
                    .circles
                    .iter()
                    .map(|c| CircleDoc {
                        index: c.index,
                        label: c.label.clone(),
                    })
                    .collect(),
                counts: big_to_triples(&d.counts),
            }),
            Document::MbDatum(d) => serde_json::to_value(MbBody {
                orbits: d
                    .orbits
                    .iter()
                    .map(|o| OrbitDoc {
                        weight: o.weight,
                        sign: o.sign.map(|s| sign_name(s).to_string()),
                        label: o.label.clone(),
                    })
                    .collect(),
                d1: big_to_triples(&d.d1),
                d2: big_to_triples(&d.d2),
            }),
            Document::SesMorphism(m) => serde_json::to_value(SesMorphismBody {
                top: SesBody {
                    i: map_body_of(m.top.i()),
                    p: map_body_of(m.top.p()),
                },
                bottom: SesBody {
                    i: map_body_of(m.bottom.i()),
                    p: map_body_of(m.bottom.p()),
                },
                f: map_body_of(&m.f),
                g: map_body_of(&m.g),
                h: map_body_of(&m.h),
            }),
            Document::Les { les, .. } => serde_json::to_value(les),
        }
        .expect("document bodies serialize");
        let mut obj = match body {
            Value::Object(o) => o,
            _ => unreachable!("bodies are objects"),
        };
        obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
        obj.insert("kind".into(), json!(self.kind()));
        obj.insert("ring".into(), serde_json::to_value(ring_to(self.ring())).expect("ring"));
        Value::Object(obj)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("serializable") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Document> {
        let v: Value = serde_json::from_str(text).map_err(|e| doc_err(format!("not valid JSON: {e}")))?;
        Document::from_value(v)
    }

    /// Decodes and re-validates every invariant of the decoded type.
    pub fn from_value(v: Value) -> Result<Document> {
        let Value::Object(mut obj) = v else {
            return Err(doc_err("a document must be a JSON object"));
        };
        let version = obj.remove("schema_version").ok_or_else(|| doc_err("missing schema_version"))?;
        if version.as_u64() != Some(SCHEMA_VERSION) {
            return Err(doc_err(format!("unsupported schema_version {version}, expected {SCHEMA_VERSION}")));
        }
        let kind = match obj.remove("kind") {
            Some(Value::String(s)) => s,
            _ => return Err(doc_err("missing or non-string kind")),
        };
        let ring_v = obj.remove("ring").ok_or_else(|| doc_err("missing ring"))?;
        let ring_doc: RingDoc = serde_json::from_value(ring_v).map_err(|e| doc_err(format!("bad ring: {e}")))?;
        let ring = ring_from(&ring_doc)?;
        let rest = Value::Object(obj);
        fn body<T: for<'de> Deserialize<'de>>(v: Value, kind: &str) -> Result<T> {
            serde_json::from_value(v).map_err(|e| doc_err(format!("bad {kind} document: {e}")))
        }
        Ok(match kind.as_str() {
            "complex" => {
                let b: ComplexBody = body(rest, &kind)?;
                if b.filtration.is_some() {
                    return Err(doc_err("a complex document has no filtration; use kind filtered_complex"));
                }
                Document::Complex(complex_of(ring, &b, "complex")?)
            }
            "filtered_complex" => {
                let b: ComplexBody = body(rest, &kind)?;
                match filtered_of(ring, &b, "filtered complex")? {
                    Some(f) => Document::FilteredComplex(f),
                    None => return Err(doc_err("filtered_complex needs a filtration")),
                }
            }
            "two_line" => {
                let b: TwoLineBody = body(rest, &kind)?;
                let mb = MapBody {
                    source: b.a,
                    target: b.aprime,
                    shift: -2,
                    matrices: b.f,
                };
                Document::TwoLine(TwoLineComplex::new(map_of(ring, &mb, "two-line map")?)?)
            }
            "chain_map" => {
                let b: MapBody = body(rest, &kind)?;
                let map = map_of(ring, &b, "chain map")?;
                let fs = filtered_of(ring, &b.source, "chain map source")?;
                let ft = filtered_of(ring, &b.target, "chain map target")?;
                let filtrations = match (fs, ft) {
                    (Some(s), Some(t)) => Some((s, t)),
                    (None, None) => None,
                    _ => return Err(doc_err("give a filtration on both ends of the chain map or on neither")),
                };
                Document::ChainMap { map, filtrations }
            }
            "s1_morse_datum" => {
                let b: S1MorseBody = body(rest, &kind)?;
                let d = S1MorseDatum {
                    ring,
                    circles: b
                        .circles
                        .iter()
                        .map(|c| Circle {
                            index: c.index,
                            label: c.label.clone(),
                        })
                        .collect(),
                    counts: big_triples(&b.counts)?,
                };
                // assembling checks every invariant of the datum
                crate::equivariant::assemble_s1_morse(&d)?;
                Document::S1MorseDatum(d)
            }
            "mb_datum" => {
                let b: MbBody = body(rest, &kind)?;
                let orbits = b
                    .orbits
                    .iter()
                    .map(|o| {
                        let sign = match o.sign.as_deref() {
                            None => None,
                            Some("minus") | Some("-") => Some(ActionSign::Minus),
                            Some("plus") | Some("+") => Some(ActionSign::Plus),
                            Some(s) => return Err(doc_err(format!("orbit sign '{s}' is not minus or plus"))),
                        };
                        Ok(Orbit {
                            weight: o.weight,
                            sign,
                            label: o.label.clone(),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Document::MbDatum(MorseBottS1Datum::new(ring, orbits, big_triples(&b.d1)?, big_triples(&b.d2)?)?)
            }
            "ses_morphism" => {
                let b: SesMorphismBody = body(rest, &kind)?;
                let top = ShortExactSequence::new(map_of(ring, &b.top.i, "top i")?, map_of(ring, &b.top.p, "top p")?)?;
                let bottom = ShortExactSequence::new(map_of(ring, &b.bottom.i, "bottom i")?, map_of(ring, &b.bottom.p, "bottom p")?)?;
                Document::SesMorphism(SesMorphism::new(
                    top,
                    bottom,
                    map_of(ring, &b.f, "f")?,
                    map_of(ring, &b.g, "g")?,
                    map_of(ring, &b.h, "h")?,
                )?)
            }
            "les" => {
                let les: LesDoc = body(rest, &kind)?;
                les.validate(ring)?;
                Document::Les { ring, les }
            }
            other => return Err(doc_err(format!("unknown kind '{other}'; expected one of {}", KINDS.join(", ")))),
        })
    }
}

impl From<crate::corpus::Generated> for Document {
    fn from(g: crate::corpus::Generated) -> Self {
        use crate::corpus::Generated;
        match g {
            Generated::Complex(c) => Document::Complex(c),
            Generated::TwoLine(t) => Document::TwoLine(t),
            Generated::SesMorphism(m) => Document::SesMorphism(m),
            Generated::MbDatum(d) => Document::MbDatum(d),
        }
    }
}

/// Serializes a group for reports.
pub fn group_value(g: &FGAbelianGroup) -> Value {
    json!({
        "free_rank": g.free_rank,
        "torsion": g.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "display": g.to_string(),
    })
}

pub fn rat_matrix_value(m: &RatMatrix) -> Value {
    json!(rat_rows(m))
}
