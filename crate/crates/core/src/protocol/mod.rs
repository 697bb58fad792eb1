//! Full-information protocol complexes for iterated collect (IC), iterated
//! atomic snapshot (IAS) and iterated immediate snapshot (IIS).
//!
//! One round maps a facet to the set of global views reachable from it. The
//! closed forms below are checked against [`schedule_oracle`] in the tests.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{unify_vertex_spaces, ChromaticComplex, Color, Simplex, Vid};
use crate::error::{Error, Result};
use crate::subdivision::{materialize_states, ordered_partitions};

pub mod schedule;

pub use schedule::{schedule_oracle, Event, Schedule};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pattern {
    IC,
    IAS,
    IIS,
}

impl Pattern {
    pub const ALL: [Pattern; 3] = [Pattern::IC, Pattern::IAS, Pattern::IIS];
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pattern::IC => "ic",
            Pattern::IAS => "ias",
            Pattern::IIS => "iis",
        })
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ic" => Ok(Pattern::IC),
            "ias" => Ok(Pattern::IAS),
            "iis" => Ok(Pattern::IIS),
            other => Err(Error::InvalidParameters(format!("unknown pattern {other}"))),
        }
    }
}

/// What every process of one facet saw in one round: process color to the set
/// of input vids it observed (its own included).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GlobalView {
    pub views: BTreeMap<Color, BTreeSet<Vid>>,
}

impl GlobalView {
    pub(crate) fn from_masks(c: &ChromaticComplex, vs: &[Vid], masks: &[u32]) -> Self {
        let views = masks
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let seen = (0..vs.len()).filter(|j| m >> j & 1 == 1).map(|j| vs[j]).collect();
                (c.color(vs[i]), seen)
            })
            .collect();
        GlobalView { views }
    }

    /// The facet this view contributes, as (color, carrier) states.
    pub fn states(&self) -> Vec<(Color, Simplex)> {
        self.views.iter().map(|(c, s)| (*c, Simplex::new(s.iter().copied()))).collect()
    }
}

fn self_inclusive_assignments(k: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for p in 0..k {
        let mut next = Vec::new();
        for partial in &out {
            for m in 0u32..(1 << k) {
                if m >> p & 1 == 1 {
                    let mut v: Vec<u32> = partial.clone();
                    v.push(m);
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out
}

fn comparable(a: u32, b: u32) -> bool {
    a & b == a || a & b == b
}

// misses digraph: p -> q iff q not in view_p
fn misses_acyclic(views: &[u32]) -> bool {
    let k = views.len();
    let mut remaining: u32 = (1 << k) - 1;
    // repeatedly strip processes with no outgoing miss inside the remaining set
    loop {
        if remaining == 0 {
            return true;
        }
        let sink = (0..k)
            .filter(|p| remaining >> p & 1 == 1)
            .find(|&p| remaining & !views[p] == 0);
        match sink {
            Some(p) => remaining &= !(1 << p),
            None => return false,
        }
    }
}

/// Closed-form view masks of one round over k processes, indexed by position.
pub fn view_masks(k: usize, p: Pattern) -> Vec<Vec<u32>> {
    match p {
        Pattern::IIS => ordered_partitions(k)
            .into_iter()
            .map(|ranks| {
                (0..k)
                    .map(|i| (0..k).filter(|&j| ranks[j] <= ranks[i]).fold(0u32, |m, j| m | 1 << j))
                    .collect()
            })
            .collect(),
        Pattern::IAS => self_inclusive_assignments(k)
            .into_iter()
            .filter(|v| v.iter().all(|&a| v.iter().all(|&b| comparable(a, b))))
            .collect(),
        Pattern::IC => {
            self_inclusive_assignments(k).into_iter().filter(|v| misses_acyclic(v)).collect()
        }
    }
}

/// Global views reachable in one round from the facet `facet` of `c`.
pub fn round_views(c: &ChromaticComplex, facet: &Simplex, p: Pattern) -> Result<BTreeSet<GlobalView>> {
    if !c.is_facet(facet) {
        return Err(Error::NotAFacet(facet.vertices().to_vec()));
    }
    let vs = facet.vertices();
    Ok(view_masks(vs.len(), p).iter().map(|m| GlobalView::from_masks(c, vs, m)).collect())
}

fn round_count(c: &ChromaticComplex, p: Pattern) -> usize {
    let mut cache: BTreeMap<usize, usize> = BTreeMap::new();
    c.facets()
        .iter()
        .map(|f| *cache.entry(f.len()).or_insert_with(|| view_masks(f.len(), p).len()))
        .fold(0usize, usize::saturating_add)
}

/// One round of the full-information protocol over every facet of `c`.
pub fn protocol_round(c: &ChromaticComplex, p: Pattern) -> ChromaticComplex {
    let mut cache: BTreeMap<usize, Vec<Vec<u32>>> = BTreeMap::new();
    let mut facets = Vec::new();
    for f in c.facets() {
        let masks = cache.entry(f.len()).or_insert_with(|| view_masks(f.len(), p));
        for m in masks.iter() {
            facets.push(GlobalView::from_masks(c, f.vertices(), m).states());
        }
    }
    materialize_states(c, facets)
}

/// r rounds of the full-information protocol starting from `c`.
pub fn protocol_complex(
    c: &ChromaticComplex,
    p: Pattern,
    r: usize,
    max_facets: usize,
) -> Result<ChromaticComplex> {
    Ok(protocol_complexes_shared(&[c], p, r, max_facets)?.remove(0))
}

/// Runs the protocol on several complexes, re-identifying equal states after
/// every round so the outputs share one vertex table.
pub fn protocol_complexes_shared(
    cs: &[&ChromaticComplex],
    p: Pattern,
    r: usize,
    max_facets: usize,
) -> Result<Vec<ChromaticComplex>> {
    if r == 0 {
        return Err(Error::InvalidParameters("rounds must be at least 1".into()));
    }
    let mut cur: Vec<ChromaticComplex> =
        if cs.len() == 1 { vec![cs[0].clone()] } else { unify_vertex_spaces(cs) };
    for _ in 0..r {
        for c in &cur {
            let count = round_count(c, p);
            if count > max_facets {
                return Err(Error::ResourceLimit { what: "facets", count, limit: max_facets });
            }
        }
        let next: Vec<ChromaticComplex> = cur.iter().map(|c| protocol_round(c, p)).collect();
        cur = if next.len() == 1 { next } else { unify_vertex_spaces(&next.iter().collect::<Vec<_>>()) };
    }
    Ok(cur)
}

/// No edge of one round joins two solo states.
pub fn check_no_input_edges(c: &ChromaticComplex, p: Pattern) -> bool {
    let xi = protocol_round(c, p);
    let base = c.vertex_table().len();
    xi.edges().iter().all(|&(u, w)| u >= base || w >= base)
}

/// Ξ(a) ∩ Ξ(b) = Ξ(a ∩ b) after r rounds. `a` and `b` must share a vertex space.
pub fn intersection_preserved(
    a: &ChromaticComplex,
    b: &ChromaticComplex,
    p: Pattern,
    r: usize,
    max_facets: usize,
) -> Result<bool> {
    let ab = a.intersect(b)?;
    let out = protocol_complexes_shared(&[a, b, &ab], p, r, max_facets)?;
    let lhs = out[0].intersect(&out[1])?;
    Ok(lhs.same_faces(&out[2]))
}

/// Random subcomplex: each facet kept with probability 1/2, sometimes cut down
/// to a random proper face.
pub fn random_subcomplex(c: &ChromaticComplex, rng: &mut impl Rng) -> ChromaticComplex {
    let mut faces = Vec::new();
    for f in c.facets() {
        if rng.gen_bool(0.5) {
            continue;
        }
        if f.len() > 1 && rng.gen_bool(1.0 / 3.0) {
            let keep: Vec<Vid> = f.iter().filter(|_| rng.gen_bool(0.5)).collect();
            if !keep.is_empty() && keep.len() < f.len() {
                faces.push(Simplex::new(keep));
                continue;
            }
        }
        faces.push(f.clone());
    }
    c.subcomplex(faces).expect("faces taken from c")
}

/// Intersection preservation on `trials` seeded random pairs of subcomplexes.
pub fn check_intersection_preserving(
    c: &ChromaticComplex,
    p: Pattern,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let a = random_subcomplex(c, &mut rng);
        let b = random_subcomplex(c, &mut rng);
        if !intersection_preserved(&a, &b, p, 1, crate::subdivision::DEFAULT_MAX_FACETS)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{standard_simplex, two_triangles};
    use crate::subdivision::{chromatic_subdivide, iterate_subdivide, DEFAULT_MAX_FACETS};

    fn only_facet(c: &ChromaticComplex) -> Simplex {
        c.facets()[0].clone()
    }

    #[test]
    fn closed_form_counts() {
        assert_eq!(view_masks(2, Pattern::IIS).len(), 3);
        assert_eq!(view_masks(3, Pattern::IIS).len(), 13);
        assert_eq!(view_masks(3, Pattern::IC).len(), 25);
        assert_eq!(view_masks(2, Pattern::IAS).len(), 3);
        let ias = view_masks(3, Pattern::IAS).len();
        assert!(13 < ias && ias < 25);
    }

    #[test]
    fn edge_views_iis() {
        let d1 = standard_simplex(1);
        let views = round_views(&d1, &only_facet(&d1), Pattern::IIS).unwrap();
        let expect: BTreeSet<GlobalView> = [
            (vec![0], vec![0, 1]),
            (vec![0, 1], vec![1]),
            (vec![0, 1], vec![0, 1]),
        ]
        .into_iter()
        .map(|(a, b)| GlobalView {
            views: [(Color(0), a.into_iter().collect()), (Color(1), b.into_iter().collect())]
                .into_iter()
                .collect(),
        })
        .collect();
        assert_eq!(views, expect);
    }

    #[test]
    fn closed_forms_match_oracle() {
        for d in 0..3 {
            let c = standard_simplex(d);
            let f = only_facet(&c);
            for p in Pattern::ALL {
                let oracle: BTreeSet<GlobalView> =
                    schedule_oracle(&c, &f, p).unwrap().into_keys().collect();
                assert_eq!(round_views(&c, &f, p).unwrap(), oracle, "{p} on simplex {d}");
            }
        }
    }

    #[test]
    fn iis_is_subdivision() {
        let d2 = standard_simplex(2);
        let xi = protocol_complex(&d2, Pattern::IIS, 1, DEFAULT_MAX_FACETS).unwrap();
        assert_eq!(xi, chromatic_subdivide(&d2));
        let xi2 = protocol_complex(&d2, Pattern::IIS, 2, DEFAULT_MAX_FACETS).unwrap();
        assert_eq!(xi2.facets().len(), 169);
        assert_eq!(xi2, iterate_subdivide(&d2, 2, DEFAULT_MAX_FACETS).unwrap());
    }

    #[test]
    fn point_is_fixed() {
        let d0 = standard_simplex(0);
        for p in Pattern::ALL {
            let xi = protocol_complex(&d0, p, 3, DEFAULT_MAX_FACETS).unwrap();
            assert_eq!(xi.f_vector().counts, vec![1]);
        }
    }

    #[test]
    fn no_solo_edges() {
        assert!(check_no_input_edges(&standard_simplex(2), Pattern::IC));
        assert!(check_no_input_edges(&standard_simplex(1), Pattern::IIS));
        assert!(check_no_input_edges(&two_triangles(), Pattern::IAS));
    }

    #[test]
    fn glued_intersection() {
        let c = two_triangles();
        let alpha = c.subcomplex([Simplex::from([0, 2, 3])]).unwrap();
        let beta = c.subcomplex([Simplex::from([1, 2, 3])]).unwrap();
        let a0 = c.subcomplex([Simplex::from([0])]).unwrap();
        let a1 = c.subcomplex([Simplex::from([1])]).unwrap();
        for p in Pattern::ALL {
            assert!(intersection_preserved(&alpha, &beta, p, 1, DEFAULT_MAX_FACETS).unwrap());
            assert!(intersection_preserved(&alpha, &beta, p, 2, DEFAULT_MAX_FACETS).unwrap());
            assert!(intersection_preserved(&alpha, &alpha, p, 1, DEFAULT_MAX_FACETS).unwrap());
            assert!(intersection_preserved(&a0, &a1, p, 1, DEFAULT_MAX_FACETS).unwrap());
            assert!(check_intersection_preserving(&c, p, 10, 3).unwrap());
        }
    }

    #[test]
    fn pattern_names() {
        assert_eq!("IAS".parse::<Pattern>().unwrap(), Pattern::IAS);
        assert!("foo".parse::<Pattern>().is_err());
        assert_eq!(serde_json::to_string(&Pattern::IIS).unwrap(), "\"iis\"");
    }
}
