//! Greedy Star covers and their splitting into bit-budgeted rounds.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::complex::{ChromaticComplex, Color, Simplex, Vid};
use crate::encoding::{
    code_budget, coded_distinguishable_subcomplex, coded_distinguishable_vertices,
    distinguishable_subcomplex, lower_bound_rounds, EncodingFunction, EncodingSequence,
    EncodingValue,
};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRound {
    /// star centers selected this round, in selection order
    pub centers: Vec<Vid>,
    /// facets of the union of the selected stars
    pub covered: Vec<Simplex>,
    pub encoding: EncodingFunction,
    /// the candidate set had run dry and was refilled before this round
    pub refilled: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StarCoverTrace {
    pub rounds: Vec<TraceRound>,
}

/// Same-colored vertices that share a neighbor with `x` (x excluded).
fn conflicts(c: &ChromaticComplex, x: Vid) -> BTreeSet<Vid> {
    let col = c.color(x);
    c.neighbors(x)
        .iter()
        .flat_map(|&u| c.neighbors(u).iter().copied())
        .filter(|&y| y != x && c.color(y) == col)
        .collect()
}

/// Smallest code in `from..=to` unused by the coded conflicts of `x`.
fn free_code(c: &ChromaticComplex, w: &EncodingFunction, x: Vid, from: u32, to: u32) -> Option<u32> {
    let taken: BTreeSet<u32> = conflicts(c, x).into_iter().filter_map(|y| w.get(y).code()).collect();
    (from..=to).find(|k| !taken.contains(k))
}

/// Covers `c` by vertex stars, one encoding function per round.
///
/// Candidates are scanned in ascending vid. A star joins the round only if no
/// star of its vertices meets what the round already covers; its vertices then
/// get the smallest code not used by a same-colored coded vertex of the star or
/// by one sharing a neighbor with it. Vertices of selected stars leave the
/// candidate set; if it runs dry before everything is covered it is refilled
/// with the vertices whose stars are not yet covered.
pub fn greedy_star(c: &ChromaticComplex) -> (EncodingSequence, StarCoverTrace) {
    let mut seq = EncodingSequence::default();
    let mut trace = StarCoverTrace::default();
    let all: Vec<Vid> = c.vertex_ids();
    let mut covered: BTreeSet<Simplex> = BTreeSet::new();
    let mut candidates: BTreeSet<Vid> = all.iter().copied().collect();
    let total = c.facets().len();

    while covered.len() < total {
        let mut refilled = false;
        if candidates.is_empty() {
            candidates = all
                .iter()
                .copied()
                .filter(|&x| c.facets().iter().any(|f| f.contains(x) && !covered.contains(f)))
                .collect();
            refilled = true;
        }
        let mut w = EncodingFunction::bottom_on(c);
        let mut round_vertices: BTreeSet<Vid> = BTreeSet::new();
        let mut round_facets: BTreeSet<Simplex> = BTreeSet::new();
        let mut used: BTreeSet<Vid> = BTreeSet::new();
        let mut centers = Vec::new();
        for &v in &candidates {
            let star: Vec<Vid> = std::iter::once(v).chain(c.neighbors(v).iter().copied()).collect();
            // St(w) meets the round's cover iff w's closed neighborhood does
            let clear = star.iter().all(|&x| {
                !round_vertices.contains(&x) && c.neighbors(x).iter().all(|y| !round_vertices.contains(y))
            });
            if !clear {
                continue;
            }
            centers.push(v);
            let mut in_star: BTreeSet<Vid> = star.iter().copied().collect();
            let mut by_color: BTreeMap<Color, BTreeSet<u32>> = BTreeMap::new();
            for &x in &in_star {
                let taken = by_color.entry(c.color(x)).or_default();
                let mut k = free_code(c, &w, x, 0, u32::MAX).expect("codes available");
                while taken.contains(&k) {
                    k += 1;
                }
                taken.insert(k);
                w.set(x, EncodingValue::Code(k));
            }
            round_vertices.append(&mut in_star);
            for f in c.facets().iter().filter(|f| f.contains(v)) {
                round_facets.insert(f.clone());
            }
            used.extend(star);
        }
        for x in &used {
            candidates.remove(x);
        }
        covered.extend(round_facets.iter().cloned());
        trace.rounds.push(TraceRound {
            centers,
            covered: round_facets.into_iter().collect(),
            encoding: w.clone(),
            refilled,
        });
        seq.functions.push(w);
    }
    (seq, trace)
}

/// Rewrites each function whose image exceeds 2^b - 1 codes as several
/// functions within the budget.
///
/// The faces a function decodes (its coded distinguishable facets) are packed
/// greedily into sub-rounds. A sub-round gives every vertex of a packed face a
/// code in 1..=2^b-1 unused by coded same-colored vertices sharing a neighbor;
/// a face that does not fit waits for the next sub-round.
pub fn split_to_budget(seq: &EncodingSequence, c: &ChromaticComplex, b: u32) -> EncodingSequence {
    let top = code_budget(b).min(u32::MAX as u128) as u32;
    let mut out = Vec::new();
    for w in seq.iter() {
        if w.fits_budget(b) {
            out.push(w.clone());
            continue;
        }
        let single = EncodingSequence::new(vec![w.clone()]);
        let mut pending: Vec<Simplex> =
            coded_distinguishable_subcomplex(c, &single).facets().to_vec();
        while !pending.is_empty() {
            let mut sub = EncodingFunction::bottom_on(c);
            let mut deferred = Vec::new();
            for face in pending {
                let mut fresh = Vec::new();
                let mut fits = true;
                for x in face.iter() {
                    if sub.is_coded(x) {
                        continue;
                    }
                    match free_code(c, &sub, x, 1, top) {
                        Some(k) => {
                            sub.set(x, EncodingValue::Code(k));
                            fresh.push(x);
                        }
                        None => {
                            fits = false;
                            break;
                        }
                    }
                }
                if !fits {
                    for x in fresh {
                        sub.set(x, EncodingValue::Bottom);
                    }
                    deferred.push(face);
                }
            }
            out.push(sub);
            pending = deferred;
        }
    }
    EncodingSequence::new(out)
}

/// 4 · ⌈maxdeg / (n (2^b - 1))⌉.
pub fn upper_bound_rounds(c: &ChromaticComplex, b: u32) -> Result<usize> {
    Ok(4 * lower_bound_rounds(c, b)?)
}

/// The sequence makes every face of `c` distinguishable.
pub fn verify_cover(c: &ChromaticComplex, seq: &EncodingSequence) -> bool {
    distinguishable_subcomplex(c, seq).same_faces(c)
}

/// Every face of `c` is decodable: distinguishable with all vertices coded in
/// some function of the sequence.
pub fn verify_coded_cover(c: &ChromaticComplex, seq: &EncodingSequence) -> bool {
    coded_distinguishable_subcomplex(c, seq).same_faces(c)
}

/// Each star selected in a round is decodable under that round's function.
pub fn stars_sound(c: &ChromaticComplex, trace: &StarCoverTrace) -> bool {
    trace.rounds.iter().all(|r| {
        let good = coded_distinguishable_vertices(c, &r.encoding);
        r.covered.iter().all(|f| f.iter().all(|v| good.contains(&v)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{standard_simplex, two_triangles, ComplexBuilder};
    use crate::generators::{path_of_facets, random_complex};

    // k triangles {z, x_i, y_i} around the center z
    fn fan(k: usize) -> ChromaticComplex {
        let mut b = ComplexBuilder::new(3);
        let z = b.add_vertex(0, "z");
        for i in 0..k {
            let x = b.add_vertex(1, format!("x{i}"));
            let y = b.add_vertex(2, format!("y{i}"));
            b.add_facet([z, x, y]);
        }
        b.build().unwrap()
    }

    #[test]
    fn simplex_needs_one_round() {
        let d2 = standard_simplex(2);
        let (seq, trace) = greedy_star(&d2);
        assert_eq!(seq.len(), 1);
        assert_eq!(trace.rounds[0].centers, vec![0]);
        assert!(verify_cover(&d2, &seq));
        let (seq, _) = greedy_star(&standard_simplex(0));
        assert_eq!(seq.len(), 1);
        assert_eq!(seq.functions[0].get(0), EncodingValue::Code(0));
    }

    #[test]
    fn two_triangles_hand_trace() {
        let c = two_triangles();
        let (seq, trace) = greedy_star(&c);
        assert_eq!(seq.len(), 2);
        assert_eq!(trace.rounds[0].centers, vec![0]);
        assert_eq!(trace.rounds[0].covered, vec![Simplex::from([0, 2, 3])]);
        assert_eq!(trace.rounds[1].centers, vec![1]);
        assert_eq!(trace.rounds[1].covered, vec![Simplex::from([1, 2, 3])]);
        assert!(!trace.rounds[1].refilled);
        assert!(verify_cover(&c, &seq));
        assert!(stars_sound(&c, &trace));
    }

    #[test]
    fn covers_generated_complexes() {
        for m in 1..6 {
            let c = path_of_facets(m).unwrap();
            let (seq, trace) = greedy_star(&c);
            assert!(verify_coded_cover(&c, &seq), "path {m}");
            assert!(stars_sound(&c, &trace));
        }
        for seed in 0..10 {
            let c = random_complex(seed, 3, 6).unwrap();
            let (seq, trace) = greedy_star(&c);
            assert!(verify_coded_cover(&c, &seq), "seed {seed}");
            assert!(stars_sound(&c, &trace));
            assert!(seq.len() <= c.vertex_ids().len());
        }
    }

    #[test]
    fn split_counts() {
        let c = fan(4);
        let (seq, _) = greedy_star(&c);
        assert_eq!(seq.len(), 1);
        assert_eq!(seq.functions[0].image_size(), 4);
        assert_eq!(split_to_budget(&seq, &c, 3), seq);
        let one = split_to_budget(&seq, &c, 1);
        assert_eq!(one.len(), 4);
        assert!(one.fits_budget(1));
        assert!(verify_coded_cover(&c, &one));

        let c5 = fan(5);
        let (seq5, _) = greedy_star(&c5);
        assert_eq!(seq5.functions[0].image_size(), 5);
        let two = split_to_budget(&seq5, &c5, 2);
        assert_eq!(two.len(), 2);
        assert!(two.fits_budget(2));
        assert!(verify_cover(&c5, &two));
    }

    #[test]
    fn bounds_relation() {
        let d2 = standard_simplex(2);
        assert_eq!(upper_bound_rounds(&d2, 1).unwrap(), 4);
        assert_eq!(upper_bound_rounds(&two_triangles(), 1).unwrap(), 4);
    }

    #[test]
    fn cover_edge_cases() {
        let d2 = standard_simplex(2);
        assert!(!verify_cover(&d2, &EncodingSequence::default()));
        assert!(verify_cover(&d2, &EncodingSequence::new(vec![EncodingFunction::constant(&d2, 1)])));
    }

    #[test]
    fn deterministic() {
        let c = random_complex(11, 3, 6).unwrap();
        assert_eq!(greedy_star(&c), greedy_star(&c));
    }
}
