//! Encoding functions and distinguishability.
//!
//! A vertex v is distinguishable under ω when no neighbor u of v has another
//! neighbor x of v's color with ω(x) = ω(v). Two ⊥ values count as equal.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::complex::{ChromaticComplex, Simplex, Vid};
use crate::error::{Error, Result};

/// Register content: ⊥ or a non-negative code.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "Option<u32>", into = "Option<u32>")]
pub enum EncodingValue {
    Bottom,
    Code(u32),
}

impl EncodingValue {
    pub fn code(self) -> Option<u32> {
        match self {
            EncodingValue::Bottom => None,
            EncodingValue::Code(k) => Some(k),
        }
    }

    pub fn is_bottom(self) -> bool {
        self == EncodingValue::Bottom
    }
}

impl From<Option<u32>> for EncodingValue {
    fn from(o: Option<u32>) -> Self {
        o.map_or(EncodingValue::Bottom, EncodingValue::Code)
    }
}

impl From<EncodingValue> for Option<u32> {
    fn from(v: EncodingValue) -> Self {
        v.code()
    }
}

/// Map from vertices to codes; vertices without an entry are ⊥.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingFunction {
    pub assignment: BTreeMap<Vid, EncodingValue>,
}

impl EncodingFunction {
    /// All vertices of `c` mapped to ⊥.
    pub fn bottom_on(c: &ChromaticComplex) -> Self {
        Self { assignment: c.vertex_ids().into_iter().map(|v| (v, EncodingValue::Bottom)).collect() }
    }

    /// Every vertex of `c` gets `code`.
    pub fn constant(c: &ChromaticComplex, code: u32) -> Self {
        Self {
            assignment: c.vertex_ids().into_iter().map(|v| (v, EncodingValue::Code(code))).collect(),
        }
    }

    pub fn from_codes(codes: impl IntoIterator<Item = (Vid, u32)>) -> Self {
        Self { assignment: codes.into_iter().map(|(v, k)| (v, EncodingValue::Code(k))).collect() }
    }

    pub fn get(&self, v: Vid) -> EncodingValue {
        self.assignment.get(&v).copied().unwrap_or(EncodingValue::Bottom)
    }

    pub fn set(&mut self, v: Vid, value: EncodingValue) {
        self.assignment.insert(v, value);
    }

    pub fn is_coded(&self, v: Vid) -> bool {
        !self.get(v).is_bottom()
    }

    pub fn codes(&self) -> BTreeSet<u32> {
        self.assignment.values().filter_map(|x| x.code()).collect()
    }

    pub fn image_size(&self) -> usize {
        self.codes().len()
    }

    pub fn fits_budget(&self, b: u32) -> bool {
        (self.image_size() as u128) <= code_budget(b)
    }

    /// Same function with ⊥ listed explicitly for every vertex of `c`.
    pub fn total_on(mut self, c: &ChromaticComplex) -> Self {
        for v in c.vertex_ids() {
            self.assignment.entry(v).or_insert(EncodingValue::Bottom);
        }
        self
    }
}

/// 2^b - 1, saturating.
pub fn code_budget(b: u32) -> u128 {
    if b >= 127 {
        u128::MAX
    } else {
        (1u128 << b) - 1
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EncodingSequence {
    pub functions: Vec<EncodingFunction>,
}

impl EncodingSequence {
    pub fn new(functions: Vec<EncodingFunction>) -> Self {
        Self { functions }
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &EncodingFunction> {
        self.functions.iter()
    }

    pub fn fits_budget(&self, b: u32) -> bool {
        self.functions.iter().all(|f| f.fits_budget(b))
    }
}

fn distinguishable_unchecked(c: &ChromaticComplex, v: Vid, w: &EncodingFunction) -> bool {
    let col = c.color(v);
    let code = w.get(v);
    c.neighbors(v).iter().all(|&u| {
        c.neighbors(u).iter().all(|&x| x == v || c.color(x) != col || w.get(x) != code)
    })
}

pub fn is_vertex_distinguishable(c: &ChromaticComplex, v: Vid, w: &EncodingFunction) -> Result<bool> {
    if !c.has_vertex(v) {
        return Err(Error::VertexNotInComplex(v));
    }
    Ok(distinguishable_unchecked(c, v, w))
}

pub fn is_subcomplex_distinguishable(
    c: &ChromaticComplex,
    sub: &ChromaticComplex,
    w: &EncodingFunction,
) -> Result<bool> {
    if !sub.is_subcomplex_of(c) {
        return Err(Error::NotASubcomplex);
    }
    Ok(sub.vertex_ids().into_iter().all(|v| distinguishable_unchecked(c, v, w)))
}

/// Vertices of `c` distinguishable under `w`.
pub fn distinguishable_vertices(c: &ChromaticComplex, w: &EncodingFunction) -> BTreeSet<Vid> {
    c.vertex_ids().into_iter().filter(|&v| distinguishable_unchecked(c, v, w)).collect()
}

/// Vertices of `c` that are coded and distinguishable under `w`.
pub fn coded_distinguishable_vertices(c: &ChromaticComplex, w: &EncodingFunction) -> BTreeSet<Vid> {
    c.vertex_ids()
        .into_iter()
        .filter(|&v| w.is_coded(v) && distinguishable_unchecked(c, v, w))
        .collect()
}

fn union_of_restrictions<'a>(
    c: &ChromaticComplex,
    sets: impl Iterator<Item = BTreeSet<Vid>> + 'a,
) -> ChromaticComplex {
    let mut faces = Vec::new();
    for good in sets {
        for f in c.facets() {
            let s = Simplex::new(f.iter().filter(|v| good.contains(v)));
            if !s.is_empty() {
                faces.push(s);
            }
        }
    }
    ChromaticComplex::from_faces(c.n(), c.shared_table(), faces)
}

/// Union over the sequence of the faces whose vertices are all distinguishable.
pub fn distinguishable_subcomplex(c: &ChromaticComplex, seq: &EncodingSequence) -> ChromaticComplex {
    union_of_restrictions(c, seq.iter().map(|w| distinguishable_vertices(c, w)))
}

/// Like [`distinguishable_subcomplex`] but a face counts only when every one of
/// its vertices also carries a code. This is what a reader can actually decode.
pub fn coded_distinguishable_subcomplex(
    c: &ChromaticComplex,
    seq: &EncodingSequence,
) -> ChromaticComplex {
    union_of_restrictions(c, seq.iter().map(|w| coded_distinguishable_vertices(c, w)))
}

/// ⌈maxdeg / (n (2^b - 1))⌉ with n the number of colors used by `c`, at least 1.
pub fn lower_bound_rounds(c: &ChromaticComplex, b: u32) -> Result<usize> {
    if b == 0 {
        return Err(Error::InvalidParameters("bit budget must be at least 1".into()));
    }
    if c.is_empty() {
        return Err(Error::InvalidParameters("complex is empty".into()));
    }
    let colors: BTreeSet<_> = c.vertex_ids().into_iter().map(|v| c.color(v)).collect();
    let per_round = (colors.len() as u128).saturating_mul(code_budget(b));
    let maxdeg = c.max_degree() as u128;
    Ok((maxdeg.div_ceil(per_round) as usize).max(1))
}
