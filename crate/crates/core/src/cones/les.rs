use std::fmt;

use crate::error::{Error, Result};
use crate::exactlin::span::{compose, exact_at};
use crate::exactlin::{FGAbelianGroup, RatMatrix, Subquotient};

/// One group of a long exact sequence, with the generators its maps are
/// written on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesSlot {
    pub label: String,
    pub degree: i64,
    pub group: FGAbelianGroup,
    pub sq: Subquotient,
}

/// A finite stretch of a long exact sequence. `maps[i]` goes from
/// `slots[i]` to `slots[i + 1]`; both ends are understood to be flanked by
/// zero modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LongExactSequence {
    pub slots: Vec<LesSlot>,
    pub maps: Vec<RatMatrix>,
    pub map_names: Vec<String>,
}

impl LongExactSequence {
    pub fn new(slots: Vec<LesSlot>, maps: Vec<RatMatrix>, map_names: Vec<String>) -> Result<Self> {
        if !slots.is_empty() && maps.len() + 1 != slots.len() {
            return Err(Error::Shape("a sequence of n groups needs n-1 maps".into()));
        }
        for (i, m) in maps.iter().enumerate() {
            let want = (slots[i + 1].sq.ngens(), slots[i].sq.ngens());
            if m.shape() != want {
                return Err(Error::Shape(format!(
                    "map {} is {}x{}, expected {}x{}",
                    map_names[i],
                    m.rows(),
                    m.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        Ok(LongExactSequence {
            slots,
            maps,
            map_names,
        })
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Index of the slot with this label and degree.
    pub fn find(&self, label: &str, degree: i64) -> Option<usize> {
        self.slots
            .iter()
            .position(|s| s.label == label && s.degree == degree)
    }

    /// Checks that consecutive composites vanish and that the image equals
    /// the kernel at every slot (as lattices over Z).
    pub fn verify_exact(&self) -> Result<()> {
        for i in 0..self.slots.len() {
            if i >= 1 && i + 1 < self.slots.len() {
                let c = compose(&self.slots[i + 1].sq, &self.maps[i], &self.maps[i - 1]);
                if !c.is_zero() {
                    return Err(Error::ExactnessFailure(format!(
                        "composite into {} is nonzero",
                        self.slot_name(i + 1)
                    )));
                }
            }
            let alpha = (i >= 1).then(|| &self.maps[i - 1]);
            let beta = (i + 1 < self.slots.len()).then(|| (&self.slots[i + 1].sq, &self.maps[i]));
            if !exact_at(&self.slots[i].sq, alpha, beta) {
                return Err(Error::ExactnessFailure(self.slot_name(i)));
            }
        }
        Ok(())
    }

    pub fn is_exact(&self) -> bool {
        self.verify_exact().is_ok()
    }

    pub fn slot_name(&self, i: usize) -> String {
        let s = &self.slots[i];
        format!("H{}({})", s.degree, s.label)
    }

    /// Plain-text rendering: one line per group and map.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.slots.iter().enumerate() {
            out.push_str(&format!("{:<16} {}\n", self.slot_name(i), s.group));
            if i < self.maps.len() {
                let m = &self.maps[i];
                if m.rows() > 0 && m.cols() > 0 {
                    out.push_str(&format!("   | {} = {}\n", self.map_names[i], m));
                } else {
                    out.push_str(&format!("   | {}\n", self.map_names[i]));
                }
            }
        }
        out
    }
}

impl fmt::Display for LongExactSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.table())
    }
}
