//! Set-cover instances as covering problems for ⊥/1 encodings, and an exact
//! minimum-length search over that encoding family.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::complex::{ChromaticComplex, ComplexBuilder, Vid};
use crate::encoding::{EncodingFunction, EncodingSequence};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetCoverInstance {
    pub universe: BTreeSet<usize>,
    pub subsets: Vec<BTreeSet<usize>>,
}

impl SetCoverInstance {
    pub fn validate(&self) -> Result<()> {
        if self.universe.is_empty() {
            return Err(Error::InvalidParameters("empty universe".into()));
        }
        for s in &self.subsets {
            if s.is_empty() {
                return Err(Error::InvalidParameters("empty subset".into()));
            }
            if !s.is_subset(&self.universe) {
                return Err(Error::InvalidParameters(format!("subset {s:?} leaves the universe")));
            }
        }
        Ok(())
    }

    pub fn covers(&self) -> bool {
        let union: BTreeSet<usize> = self.subsets.iter().flatten().copied().collect();
        union == self.universe
    }

    /// Minimal subsets of size ≥ 2 not contained in any member.
    pub fn uncovered_minimal(&self) -> Vec<BTreeSet<usize>> {
        let elems: Vec<usize> = self.universe.iter().copied().collect();
        let m = elems.len();
        assert!(m < 20, "universe too large");
        let inside = |t: &BTreeSet<usize>| self.subsets.iter().any(|s| t.is_subset(s));
        let mut out: Vec<BTreeSet<usize>> = Vec::new();
        let mut masks: Vec<u32> = (1u32..(1 << m)).filter(|x| x.count_ones() >= 2).collect();
        masks.sort_by_key(|x| (x.count_ones(), *x));
        for mask in masks {
            let t: BTreeSet<usize> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| elems[i]).collect();
            if inside(&t) || out.iter().any(|o| o.is_subset(&t)) {
                continue;
            }
            out.push(t);
        }
        out
    }
}

/// Direct set-cover optimum, `None` when the members do not cover the universe.
pub fn brute_force_set_cover(inst: &SetCoverInstance) -> Option<usize> {
    if !inst.covers() {
        return None;
    }
    let k = inst.subsets.len();
    (0..=k).find(|&size| {
        (0u32..(1 << k)).filter(|m| m.count_ones() as usize == size).any(|m| {
            let u: BTreeSet<usize> =
                (0..k).filter(|i| m >> i & 1 == 1).flat_map(|i| inst.subsets[i].iter().copied()).collect();
            u == inst.universe
        })
    })
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub complex: ChromaticComplex,
    /// element of the universe per facet, in facet-construction order
    pub facet_elements: Vec<(usize, Vec<Vid>)>,
    pub explain: Vec<String>,
}

/// One facet of dimension |U| per element. Every minimal uncovered set of two
/// or more elements gets one shared vertex of its own color, placed in the
/// facets of its elements; the other slots of a facet are private vertices.
pub fn set_cover_reduce(inst: &SetCoverInstance) -> Result<Reduction> {
    inst.validate()?;
    let m = inst.universe.len();
    let n = m + 1;
    let glue = inst.uncovered_minimal();
    if glue.len() > n {
        return Err(Error::InvalidParameters(format!(
            "{} shared vertices need more than {n} colors",
            glue.len()
        )));
    }
    let mut explain = vec![format!(
        "{m} elements -> {m} facets with {n} colors; {} uncovered minimal sets",
        glue.len()
    )];
    let mut b = ComplexBuilder::new(n);
    // reserved colors count down from n - 1
    let mut shared: Vec<(usize, Vid, &BTreeSet<usize>)> = Vec::new();
    for (i, s) in glue.iter().enumerate() {
        let color = n - 1 - i;
        let label = format!("g{}", s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("_"));
        let v = b.add_vertex(color, label.clone());
        explain.push(format!("{label}: color {color}, shared by the facets of {s:?}"));
        shared.push((color, v, s));
    }
    let mut facet_elements = Vec::new();
    for &u in &inst.universe {
        let mut vids = Vec::with_capacity(n);
        let mut taken: BTreeSet<usize> = BTreeSet::new();
        for (color, v, s) in &shared {
            if s.contains(&u) {
                vids.push(*v);
                taken.insert(*color);
            }
        }
        for color in 0..n {
            if !taken.contains(&color) {
                vids.push(b.add_vertex(color, format!("e{u}c{color}")));
            }
        }
        explain.push(format!("facet for {u}: {} shared, {} private", taken.len(), n - taken.len()));
        b.add_facet(vids.iter().copied());
        facet_elements.push((u, vids));
    }
    Ok(Reduction { complex: b.build()?, facet_elements, explain })
}

pub const EXACT_MAX_VERTICES: usize = 12;

/// Fewest ⊥/1 encoding functions whose decodable faces cover `c`. A facet is
/// decodable in a round when all its vertices carry 1 and no two vertices
/// carrying 1 have the same color and a common neighbor.
pub fn exact_min_sequence(c: &ChromaticComplex) -> Result<(usize, EncodingSequence)> {
    let vs = c.vertex_ids();
    if vs.len() > EXACT_MAX_VERTICES {
        return Err(Error::ResourceLimit {
            what: "vertices for exact search",
            count: vs.len(),
            limit: EXACT_MAX_VERTICES,
        });
    }
    let pos: BTreeMap<Vid, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let k = vs.len();
    // clash[i]: same-colored vertices sharing a neighbor with vs[i]
    let clash: Vec<u32> = vs
        .iter()
        .map(|&x| {
            c.neighbors(x)
                .iter()
                .flat_map(|&u| c.neighbors(u).iter().copied())
                .filter(|&y| y != x && c.color(y) == c.color(x))
                .fold(0u32, |m, y| m | 1 << pos[&y])
        })
        .collect();
    let facet_masks: Vec<u32> =
        c.facets().iter().map(|f| f.iter().fold(0u32, |m, v| m | 1 << pos[&v])).collect();
    let nf = facet_masks.len();
    assert!(nf < 32, "too many facets for exact search");
    let all_facets: u32 = if nf == 0 { 0 } else { (1u32 << nf) - 1 };

    // best coded set per achievable covered-facet mask
    let mut rounds: BTreeMap<u32, u32> = BTreeMap::new();
    for coded in 0u32..(1 << k) {
        let clean = (0..k).all(|i| coded >> i & 1 == 0 || clash[i] & coded == 0);
        if !clean {
            continue;
        }
        let covered = (0..nf).filter(|&j| facet_masks[j] & !coded == 0).fold(0u32, |m, j| m | 1 << j);
        if covered != 0 {
            rounds.entry(covered).or_insert(coded);
        }
    }
    let maximal: Vec<(u32, u32)> = rounds
        .iter()
        .filter(|(m, _)| !rounds.keys().any(|o| o != *m && *o & **m == **m))
        .map(|(m, c)| (*m, *c))
        .collect();

    // breadth-first over covered-facet masks
    let mut prev: BTreeMap<u32, (u32, u32)> = BTreeMap::new();
    let mut queue = VecDeque::from([0u32]);
    prev.insert(0, (0, 0));
    while let Some(cur) = queue.pop_front() {
        if cur == all_facets {
            break;
        }
        for &(m, coded) in &maximal {
            let next = cur | m;
            if let std::collections::btree_map::Entry::Vacant(e) = prev.entry(next) {
                e.insert((cur, coded));
                queue.push_back(next);
            }
        }
    }
    if !prev.contains_key(&all_facets) {
        return Err(Error::InvalidParameters("complex cannot be covered".into()));
    }
    let mut functions = Vec::new();
    let mut cur = all_facets;
    while cur != 0 {
        let (p, coded) = prev[&cur];
        let codes = (0..k).filter(|i| coded >> i & 1 == 1).map(|i| (vs[i], 1));
        functions.push(EncodingFunction::from_codes(codes).total_on(c));
        cur = p;
    }
    functions.reverse();
    Ok((functions.len(), EncodingSequence::new(functions)))
}

/// Every set-cover instance on {1..m} whose members cover the universe.
pub fn covering_instances(m: usize) -> Vec<SetCoverInstance> {
    let universe: BTreeSet<usize> = (1..=m).collect();
    let nonempty: Vec<BTreeSet<usize>> = (1u32..(1 << m))
        .map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect())
        .collect();
    let mut out = Vec::new();
    for fam in 1u64..(1 << nonempty.len()) {
        let subsets: Vec<BTreeSet<usize>> =
            (0..nonempty.len()).filter(|i| fam >> i & 1 == 1).map(|i| nonempty[i].clone()).collect();
        let inst = SetCoverInstance { universe: universe.clone(), subsets };
        if inst.covers() {
            out.push(inst);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{standard_simplex, two_triangles};
    use crate::greedy::verify_coded_cover;

    fn inst(m: usize, subsets: &[&[usize]]) -> SetCoverInstance {
        SetCoverInstance {
            universe: (1..=m).collect(),
            subsets: subsets.iter().map(|s| s.iter().copied().collect()).collect(),
        }
    }

    #[test]
    fn exact_small() {
        assert_eq!(exact_min_sequence(&standard_simplex(2)).unwrap().0, 1);
        let (len, seq) = exact_min_sequence(&two_triangles()).unwrap();
        assert_eq!(len, 2);
        assert!(verify_coded_cover(&two_triangles(), &seq));
        assert!(seq.iter().all(|w| w.codes().iter().all(|&k| k == 1)));
    }

    #[test]
    fn reductions() {
        let r = set_cover_reduce(&inst(1, &[&[1]])).unwrap();
        assert_eq!(r.complex.facets().len(), 1);
        assert_eq!(r.complex.vertex_ids().len(), 2);

        let r = set_cover_reduce(&inst(2, &[&[1], &[2]])).unwrap();
        assert_eq!(r.complex.facets().len(), 2);
        assert_eq!(r.complex.vertex_ids().len(), 5);
        assert_eq!(exact_min_sequence(&r.complex).unwrap().0, 2);

        let r = set_cover_reduce(&inst(2, &[&[1, 2]])).unwrap();
        assert_eq!(exact_min_sequence(&r.complex).unwrap().0, 1);
    }

    #[test]
    fn malformed() {
        let bad = SetCoverInstance { universe: BTreeSet::from([1]), subsets: vec![BTreeSet::new()] };
        assert!(matches!(set_cover_reduce(&bad), Err(Error::InvalidParameters(_))));
    }

    #[test]
    fn brute_force_oracle() {
        assert_eq!(brute_force_set_cover(&inst(3, &[&[1, 2], &[2, 3], &[1, 3]])), Some(2));
        assert_eq!(brute_force_set_cover(&inst(3, &[&[1, 2]])), None);
        assert_eq!(covering_instances(1).len(), 1);
        assert_eq!(covering_instances(2).len(), 5);
    }

    #[test]
    fn minimal_uncovered() {
        let i = inst(3, &[&[1, 2], &[2, 3], &[1, 3]]);
        assert_eq!(i.uncovered_minimal(), vec![BTreeSet::from([1, 2, 3])]);
        let i = inst(3, &[&[1], &[2, 3]]);
        assert_eq!(i.uncovered_minimal(), vec![BTreeSet::from([1, 2]), BTreeSet::from([1, 3])]);
    }
}
