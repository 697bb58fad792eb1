//! Color-preserving isomorphism of chromatic complexes.
//!
//! Vertices of both complexes are refined jointly (color, then repeated
//! signatures over incident facets) and the search backtracks within classes,
//! checking edges and completed facets as it goes.

use std::collections::{BTreeMap, HashMap};

use crate::complex::{ChromaticComplex, Simplex, Vid};

/// Vertex bijection from the first complex onto the second.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub map: BTreeMap<Vid, Vid>,
}

impl Isomorphism {
    pub fn image(&self, v: Vid) -> Option<Vid> {
        self.map.get(&v).copied()
    }

    pub fn apply(&self, s: &Simplex) -> Simplex {
        Simplex::new(s.iter().map(|v| self.map[&v]))
    }
}

pub fn is_isomorphic(a: &ChromaticComplex, b: &ChromaticComplex) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Returns a witness bijection when `a` and `b` are color-isomorphic.
pub fn find_isomorphism(a: &ChromaticComplex, b: &ChromaticComplex) -> Option<Isomorphism> {
    let va = a.vertex_ids();
    let vb = b.vertex_ids();
    if va.len() != vb.len() || a.facets().len() != b.facets().len() {
        return None;
    }
    if a.f_vector() != b.f_vector() {
        return None;
    }

    let (la, lb) = refine(a, &va, b, &vb)?;

    // order: rarest classes first, then grow along edges
    let mut class_size: HashMap<usize, usize> = HashMap::new();
    for l in la.values() {
        *class_size.entry(*l).or_default() += 1;
    }
    let mut order: Vec<Vid> = Vec::with_capacity(va.len());
    let mut placed: HashMap<Vid, bool> = va.iter().map(|&v| (v, false)).collect();
    while order.len() < va.len() {
        let frontier = order
            .iter()
            .flat_map(|&u| a.neighbors(u).iter().copied())
            .filter(|v| !placed[v])
            .min_by_key(|v| (class_size[&la[v]], *v));
        let next = frontier.unwrap_or_else(|| {
            *va.iter().filter(|v| !placed[v]).min_by_key(|v| (class_size[&la[v]], **v)).unwrap()
        });
        placed.insert(next, true);
        order.push(next);
    }

    let mut by_label: HashMap<usize, Vec<Vid>> = HashMap::new();
    for &v in &vb {
        by_label.entry(lb[&v]).or_default().push(v);
    }

    let mut incident: HashMap<Vid, Vec<&Simplex>> = HashMap::new();
    for f in a.facets() {
        for v in f.iter() {
            incident.entry(v).or_default().push(f);
        }
    }

    let mut search = Search {
        a,
        b,
        order: &order,
        la: &la,
        by_label: &by_label,
        incident: &incident,
        map: HashMap::new(),
        used: HashMap::new(),
    };
    if search.extend(0) {
        Some(Isomorphism { map: search.map.into_iter().collect() })
    } else {
        None
    }
}

type Labels = HashMap<Vid, usize>;

fn refine(
    a: &ChromaticComplex,
    va: &[Vid],
    b: &ChromaticComplex,
    vb: &[Vid],
) -> Option<(Labels, Labels)> {
    let mut dict: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut intern = |sig: Vec<usize>| {
        let next = dict.len();
        *dict.entry(sig).or_insert(next)
    };
    let initial = |c: &ChromaticComplex, v: Vid| vec![c.color(v).0, c.neighbors(v).len()];
    let mut la: Labels = va.iter().map(|&v| (v, intern(initial(a, v)))).collect();
    let mut lb: Labels = vb.iter().map(|&v| (v, intern(initial(b, v)))).collect();
    let mut classes = 0;
    loop {
        if histogram(&la) != histogram(&lb) {
            return None;
        }
        let count = histogram(&la).len();
        if count == classes {
            return Some((la, lb));
        }
        classes = count;
        let sa = signatures(a, &la);
        let sb = signatures(b, &lb);
        la = sa.into_iter().map(|(v, s)| (v, intern(s))).collect();
        lb = sb.into_iter().map(|(v, s)| (v, intern(s))).collect();
    }
}

fn histogram(l: &Labels) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for &x in l.values() {
        *h.entry(x).or_insert(0) += 1;
    }
    h
}

// (own label, sorted facet signatures flattened with separators)
fn signatures(c: &ChromaticComplex, l: &Labels) -> Vec<(Vid, Vec<usize>)> {
    let mut per_vertex: HashMap<Vid, Vec<Vec<usize>>> = HashMap::new();
    for f in c.facets() {
        let mut fs: Vec<usize> = f.iter().map(|v| l[&v]).collect();
        fs.sort_unstable();
        for v in f.iter() {
            per_vertex.entry(v).or_default().push(fs.clone());
        }
    }
    let mut out = Vec::with_capacity(l.len());
    for (&v, &own) in l {
        let mut facets = per_vertex.remove(&v).unwrap_or_default();
        facets.sort();
        let mut sig = vec![own];
        for f in facets {
            sig.push(usize::MAX);
            sig.extend(f);
        }
        out.push((v, sig));
    }
    out
}

struct Search<'a> {
    a: &'a ChromaticComplex,
    b: &'a ChromaticComplex,
    order: &'a [Vid],
    la: &'a Labels,
    by_label: &'a HashMap<usize, Vec<Vid>>,
    incident: &'a HashMap<Vid, Vec<&'a Simplex>>,
    map: HashMap<Vid, Vid>,
    used: HashMap<Vid, Vid>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        let Some(&v) = self.order.get(depth) else {
            return true;
        };
        let candidates = &self.by_label[&self.la[&v]];
        for &w in candidates {
            if self.used.contains_key(&w) || !self.consistent(v, w) {
                continue;
            }
            self.map.insert(v, w);
            self.used.insert(w, v);
            if self.facets_ok(v) && self.extend(depth + 1) {
                return true;
            }
            self.map.remove(&v);
            self.used.remove(&w);
        }
        false
    }

    fn consistent(&self, v: Vid, w: Vid) -> bool {
        self.map.iter().all(|(&u, &x)| self.a.are_adjacent(v, u) == self.b.are_adjacent(w, x))
    }

    fn facets_ok(&self, v: Vid) -> bool {
        self.incident[&v].iter().all(|f| {
            let img: Option<Vec<Vid>> = f.iter().map(|u| self.map.get(&u).copied()).collect();
            match img {
                Some(img) => self.b.is_facet(&Simplex::new(img)),
                None => true,
            }
        })
    }
}
