//! Pure chromatic simplicial complexes.
//!
//! A complex is stored as its facet family over a dense vertex table. Faces are
//! derived from the facets on demand. Subcomplexes produced by [`ChromaticComplex::star`],
//! [`ChromaticComplex::link`] and [`ChromaticComplex::intersect`] share the vertex
//! table of the complex they came from, so vids stay comparable between them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex identifier, dense within a vertex table.
pub type Vid = usize;

/// Process identifier attached to every vertex.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Color(pub usize);

impl Color {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub color: Color,
    pub label: String,
}

impl Vertex {
    pub fn new(color: Color, label: impl Into<String>) -> Self {
        Self { color, label: label.into() }
    }
}

/// A set of vids, kept sorted and deduplicated.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<Vid>);

impl Simplex {
    pub fn new(vids: impl IntoIterator<Item = Vid>) -> Self {
        let mut v: Vec<Vid> = vids.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }

    pub fn vertex(v: Vid) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[Vid] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|vertices| - 1`; `None` for the empty simplex.
    pub fn dim(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn contains(&self, v: Vid) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &Simplex) -> bool {
        // both sorted
        let mut it = other.0.iter();
        'outer: for v in &self.0 {
            for w in it.by_ref() {
                if w == v {
                    continue 'outer;
                }
                if w > v {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn intersection(&self, other: &Simplex) -> Simplex {
        Simplex(self.0.iter().copied().filter(|v| other.contains(*v)).collect())
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        Simplex::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn without(&self, v: Vid) -> Simplex {
        Simplex(self.0.iter().copied().filter(|&w| w != v).collect())
    }

    /// All nonempty subsets.
    pub fn nonempty_subsets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let k = self.0.len();
        assert!(k < usize::BITS as usize);
        (1usize..(1 << k)).map(move |mask| {
            Simplex((0..k).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect())
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = Vid> + '_ {
        self.0.iter().copied()
    }
}

impl From<Vec<Vid>> for Simplex {
    fn from(v: Vec<Vid>) -> Self {
        Simplex::new(v)
    }
}

impl<const N: usize> From<[Vid; N]> for Simplex {
    fn from(v: [Vid; N]) -> Self {
        Simplex::new(v)
    }
}

/// Face counts per dimension; entry k is the number of k-dimensional faces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVector {
    pub counts: Vec<usize>,
}

impl FVector {
    pub fn euler_characteristic(&self) -> i64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    pub fn to_csv(&self) -> String {
        self.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// A pure chromatic simplicial complex given by its facets.
#[derive(Clone)]
pub struct ChromaticComplex {
    n: usize,
    table: Arc<Vec<Vertex>>,
    facets: Vec<Simplex>,
    adjacency: OnceLock<Arc<BTreeMap<Vid, BTreeSet<Vid>>>>,
}

impl fmt::Debug for ChromaticComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChromaticComplex")
            .field("n", &self.n)
            .field("vertices", &self.table.len())
            .field("facets", &self.facets)
            .finish()
    }
}

impl PartialEq for ChromaticComplex {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.table == other.table && self.facets == other.facets
    }
}

impl Eq for ChromaticComplex {}

impl ChromaticComplex {
    /// Validating constructor. Every facet must be rainbow, reference existing
    /// vertices, and not be contained in another listed facet.
    pub fn new(n: usize, vertices: Vec<Vertex>, facets: Vec<Vec<Vid>>) -> Result<Self> {
        for v in &vertices {
            if v.color.0 >= n {
                return Err(Error::ColorOutOfRange { color: v.color, n });
            }
        }
        let mut simplices = Vec::with_capacity(facets.len());
        for raw in facets {
            let mut seen = BTreeSet::new();
            for &vid in &raw {
                let vx = vertices.get(vid).ok_or(Error::DanglingVertexReference(vid))?;
                if !seen.insert(vx.color) {
                    return Err(Error::DuplicateColorInFacet { facet: raw.clone(), color: vx.color });
                }
            }
            if raw.is_empty() {
                continue;
            }
            simplices.push(Simplex::new(raw));
        }
        for (i, a) in simplices.iter().enumerate() {
            for (j, b) in simplices.iter().enumerate() {
                if i != j && a.is_subset(b) && (a != b || i < j) {
                    return Err(Error::FacetContainment {
                        inner: a.vertices().to_vec(),
                        outer: b.vertices().to_vec(),
                    });
                }
            }
        }
        simplices.sort();
        Ok(Self::from_sorted(n, Arc::new(vertices), simplices))
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Arc::new(Vec::new()), Vec::new())
    }

    fn from_sorted(n: usize, table: Arc<Vec<Vertex>>, facets: Vec<Simplex>) -> Self {
        Self { n, table, facets, adjacency: OnceLock::new() }
    }

    /// Builds a complex over an existing vertex table from any family of rainbow
    /// simplices, keeping only the maximal ones.
    pub(crate) fn from_faces(
        n: usize,
        table: Arc<Vec<Vertex>>,
        faces: impl IntoIterator<Item = Simplex>,
    ) -> Self {
        let mut all: Vec<Simplex> = faces.into_iter().filter(|s| !s.is_empty()).collect();
        all.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        all.dedup();
        let mut kept: Vec<Simplex> = Vec::new();
        for s in all {
            if !kept.iter().any(|k| s.is_subset(k)) {
                kept.push(s);
            }
        }
        kept.sort();
        Self::from_sorted(n, table, kept)
    }

    /// Facets known to be rainbow and pairwise non-nested.
    pub(crate) fn from_facets_unchecked(
        n: usize,
        table: Arc<Vec<Vertex>>,
        mut facets: Vec<Simplex>,
    ) -> Self {
        facets.sort();
        facets.dedup();
        Self::from_sorted(n, table, facets)
    }

    /// Subcomplex of `self` generated by `faces`, sharing this vertex table.
    pub fn subcomplex(&self, faces: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let faces: Vec<Simplex> = faces.into_iter().collect();
        for f in &faces {
            if !self.contains_face(f) {
                return Err(Error::SimplexNotInComplex(f.vertices().to_vec()));
            }
        }
        Ok(Self::from_faces(self.n, self.table.clone(), faces))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_table(&self) -> &[Vertex] {
        &self.table
    }

    pub(crate) fn shared_table(&self) -> Arc<Vec<Vertex>> {
        self.table.clone()
    }

    pub fn shares_vertex_space(&self, other: &Self) -> bool {
        self.n == other.n && (Arc::ptr_eq(&self.table, &other.table) || self.table == other.table)
    }

    pub fn vertex(&self, v: Vid) -> &Vertex {
        &self.table[v]
    }

    pub fn color(&self, v: Vid) -> Color {
        self.table[v].color
    }

    pub fn label(&self, v: Vid) -> &str {
        &self.table[v].label
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    /// Dimension of the largest facet.
    pub fn dim(&self) -> Option<usize> {
        self.facets.iter().filter_map(Simplex::dim).max()
    }

    /// V(c): vertices that belong to at least one facet, ascending.
    pub fn vertex_ids(&self) -> Vec<Vid> {
        let set: BTreeSet<Vid> = self.facets.iter().flat_map(|f| f.iter()).collect();
        set.into_iter().collect()
    }

    pub fn has_vertex(&self, v: Vid) -> bool {
        self.facets.iter().any(|f| f.contains(v))
    }

    pub fn colors_of(&self, s: &Simplex) -> BTreeSet<Color> {
        s.iter().map(|v| self.color(v)).collect()
    }

    pub fn is_rainbow(&self, s: &Simplex) -> bool {
        self.colors_of(s).len() == s.len()
    }

    pub fn contains_face(&self, s: &Simplex) -> bool {
        !s.is_empty() && self.facets.iter().any(|f| s.is_subset(f))
    }

    pub fn is_facet(&self, s: &Simplex) -> bool {
        self.facets.binary_search(s).is_ok()
    }

    /// All faces (nonempty subsets of facets), deduplicated.
    pub fn faces(&self) -> BTreeSet<Simplex> {
        let mut out = BTreeSet::new();
        for f in &self.facets {
            out.extend(f.nonempty_subsets());
        }
        out
    }

    pub fn f_vector(&self) -> FVector {
        let Some(d) = self.dim() else {
            return FVector { counts: Vec::new() };
        };
        let mut counts = vec![0; d + 1];
        for face in self.faces() {
            counts[face.len() - 1] += 1;
        }
        FVector { counts }
    }

    /// Closed star: the facets containing `s` together with all their faces.
    pub fn star(&self, s: &Simplex) -> Result<Self> {
        if !self.contains_face(s) {
            return Err(Error::SimplexNotInComplex(s.vertices().to_vec()));
        }
        let facets = self.facets.iter().filter(|f| s.is_subset(f)).cloned().collect();
        Ok(Self::from_sorted(self.n, self.table.clone(), facets))
    }

    pub fn vertex_star(&self, v: Vid) -> Result<Self> {
        if !self.has_vertex(v) {
            return Err(Error::VertexNotInComplex(v));
        }
        self.star(&Simplex::vertex(v))
    }

    /// Faces σ with v ∉ σ and σ ∪ {v} a face.
    pub fn link(&self, v: Vid) -> Result<Self> {
        if !self.has_vertex(v) {
            return Err(Error::VertexNotInComplex(v));
        }
        let faces = self.facets.iter().filter(|f| f.contains(v)).map(|f| f.without(v));
        Ok(Self::from_faces(self.n, self.table.clone(), faces))
    }

    fn adjacency_map(&self) -> &Arc<BTreeMap<Vid, BTreeSet<Vid>>> {
        self.adjacency.get_or_init(|| {
            let mut adj: BTreeMap<Vid, BTreeSet<Vid>> = BTreeMap::new();
            for f in &self.facets {
                for u in f.iter() {
                    let entry = adj.entry(u).or_default();
                    entry.extend(f.iter().filter(|&w| w != u));
                }
            }
            Arc::new(adj)
        })
    }

    /// Vertices u with {u, v} a face. Empty if v is not in the complex.
    pub fn neighbors(&self, v: Vid) -> &BTreeSet<Vid> {
        static EMPTY: BTreeSet<Vid> = BTreeSet::new();
        self.adjacency_map().get(&v).unwrap_or(&EMPTY)
    }

    pub fn are_adjacent(&self, u: Vid, v: Vid) -> bool {
        self.neighbors(u).contains(&v)
    }

    pub fn degree(&self, v: Vid) -> Result<usize> {
        if !self.has_vertex(v) {
            return Err(Error::VertexNotInComplex(v));
        }
        Ok(self.neighbors(v).len())
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency_map().values().map(BTreeSet::len).max().unwrap_or(0)
    }

    /// 1-skeleton edges (u < v), ascending.
    pub fn edges(&self) -> Vec<(Vid, Vid)> {
        let mut out = Vec::new();
        for (&u, ns) in self.adjacency_map().iter() {
            out.extend(ns.iter().filter(|&&w| w > u).map(|&w| (u, w)));
        }
        out
    }

    /// Complex whose faces are Faces(self) ∩ Faces(other).
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        if !self.shares_vertex_space(other) {
            return Err(Error::IncompatibleVertexSpaces);
        }
        let mut faces = Vec::new();
        for a in &self.facets {
            for b in &other.facets {
                let s = a.intersection(b);
                if !s.is_empty() {
                    faces.push(s);
                }
            }
        }
        Ok(Self::from_faces(self.n, self.table.clone(), faces))
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        if !self.shares_vertex_space(other) {
            return Err(Error::IncompatibleVertexSpaces);
        }
        let faces = self.facets.iter().chain(other.facets.iter()).cloned();
        Ok(Self::from_faces(self.n, self.table.clone(), faces))
    }

    pub fn is_subcomplex_of(&self, other: &Self) -> bool {
        self.shares_vertex_space(other) && self.facets.iter().all(|f| other.contains_face(f))
    }

    /// Same faces; vertex tables must agree.
    pub fn same_faces(&self, other: &Self) -> bool {
        self.shares_vertex_space(other) && self.facets == other.facets
    }
}

/// Re-expresses complexes over one common vertex table, identifying vertices
/// with equal (color, label). Table order follows first appearance.
pub fn unify_vertex_spaces(cs: &[&ChromaticComplex]) -> Vec<ChromaticComplex> {
    let mut ids: BTreeMap<(Color, &str), Vid> = BTreeMap::new();
    let mut table: Vec<Vertex> = Vec::new();
    let mut remaps: Vec<Vec<Vid>> = Vec::with_capacity(cs.len());
    for c in cs {
        let mut remap = Vec::with_capacity(c.table.len());
        for v in c.table.iter() {
            let id = *ids.entry((v.color, v.label.as_str())).or_insert_with(|| {
                table.push(v.clone());
                table.len() - 1
            });
            remap.push(id);
        }
        remaps.push(remap);
    }
    let n = cs.iter().map(|c| c.n).max().unwrap_or(0);
    let table = Arc::new(table);
    cs.iter()
        .zip(remaps)
        .map(|(c, remap)| {
            let facets = c.facets.iter().map(|f| Simplex::new(f.iter().map(|v| remap[v]))).collect();
            ChromaticComplex::from_facets_unchecked(n, table.clone(), facets)
        })
        .collect()
}

/// Incremental construction with caller-assigned vertices.
#[derive(Debug, Default)]
pub struct ComplexBuilder {
    n: usize,
    vertices: Vec<Vertex>,
    facets: Vec<Vec<Vid>>,
}

impl ComplexBuilder {
    pub fn new(n: usize) -> Self {
        Self { n, ..Default::default() }
    }

    pub fn add_vertex(&mut self, color: usize, label: impl Into<String>) -> Vid {
        self.vertices.push(Vertex::new(Color(color), label));
        self.vertices.len() - 1
    }

    pub fn add_facet(&mut self, vids: impl IntoIterator<Item = Vid>) -> &mut Self {
        self.facets.push(vids.into_iter().collect());
        self
    }

    pub fn build(self) -> Result<ChromaticComplex> {
        ChromaticComplex::new(self.n, self.vertices, self.facets)
    }
}

/// Builds a complex from facets listed as (color, label) tuples. Vertices with
/// equal (color, label) are identified across facets.
pub fn build_complex(n: usize, facets: &[Vec<(usize, &str)>]) -> Result<ChromaticComplex> {
    let mut builder = ComplexBuilder::new(n);
    let mut ids: BTreeMap<(usize, String), Vid> = BTreeMap::new();
    for facet in facets {
        let mut vids = Vec::with_capacity(facet.len());
        for &(color, label) in facet {
            let key = (color, label.to_string());
            let vid = match ids.get(&key) {
                Some(&v) => v,
                None => {
                    let v = builder.add_vertex(color, label);
                    ids.insert(key, v);
                    v
                }
            };
            vids.push(vid);
        }
        builder.add_facet(vids);
    }
    builder.build()
}

/// Δ^d with one vertex per color 0..=d and labels "v0".."vd".
pub fn standard_simplex(d: usize) -> ChromaticComplex {
    let mut b = ComplexBuilder::new(d + 1);
    let vids: Vec<Vid> = (0..=d).map(|c| b.add_vertex(c, format!("v{c}"))).collect();
    b.add_facet(vids);
    b.build().expect("standard simplex is valid")
}

/// Two triangles α = {a1, p1, p2} and β = {a2, p1, p2} glued along {p1, p2};
/// vids are a1 = 0, a2 = 1, p1 = 2, p2 = 3.
pub fn two_triangles() -> ChromaticComplex {
    crate::generators::glued_fan(2).expect("glued fan of 2")
}
