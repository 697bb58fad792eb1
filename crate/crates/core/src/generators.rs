//! Deterministic test complexes.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{standard_simplex, ChromaticComplex, ComplexBuilder, Simplex, Vid};
use crate::error::{Error, Result};

pub fn simplex(d: usize) -> ChromaticComplex {
    standard_simplex(d)
}

/// k triangles {a_i, p1, p2} sharing the edge {p1, p2}. The a_i have color 0
/// and vids 0..k; p1 (color 1) and p2 (color 2) follow.
pub fn glued_fan(k: usize) -> Result<ChromaticComplex> {
    if k == 0 {
        return Err(Error::InvalidParameters("glued fan needs at least one triangle".into()));
    }
    let mut b = ComplexBuilder::new(3);
    let private: Vec<Vid> = (1..=k).map(|i| b.add_vertex(0, format!("a{i}"))).collect();
    let p1 = b.add_vertex(1, "p1");
    let p2 = b.add_vertex(2, "p2");
    for a in private {
        b.add_facet([a, p1, p2]);
    }
    b.build()
}

/// m triangles in a strip: vertex i has color i mod 3 and facet i is
/// {v_i, v_i+1, v_i+2}.
pub fn path_of_facets(m: usize) -> Result<ChromaticComplex> {
    if m == 0 {
        return Err(Error::InvalidParameters("path needs at least one facet".into()));
    }
    let mut b = ComplexBuilder::new(3);
    let vs: Vec<Vid> = (0..m + 2).map(|i| b.add_vertex(i % 3, format!("v{i}"))).collect();
    for i in 0..m {
        b.add_facet([vs[i], vs[i + 1], vs[i + 2]]);
    }
    b.build()
}

/// Seeded random pure complex with n colors and the given number of facets of
/// dimension n - 1. Every new facet shares at least one vertex with the
/// complex built so far.
pub fn random_complex(seed: u64, n: usize, facets: usize) -> Result<ChromaticComplex> {
    if n == 0 || facets == 0 {
        return Err(Error::InvalidParameters("random complex needs n >= 1 and facets >= 1".into()));
    }
    if n == 1 {
        // facets of a 1-colored complex are isolated points
        let mut b = ComplexBuilder::new(1);
        for i in 0..facets {
            let v = b.add_vertex(0, format!("x{i}"));
            b.add_facet([v]);
        }
        return b.build();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut colors: Vec<usize> = Vec::new();
    let mut by_color: Vec<Vec<Vid>> = vec![Vec::new(); n];
    let fresh = |c: usize, colors: &mut Vec<usize>, by_color: &mut Vec<Vec<Vid>>| {
        colors.push(c);
        let v = colors.len() - 1;
        by_color[c].push(v);
        v
    };
    let mut made: Vec<Vec<Vid>> = Vec::new();
    let mut seen: BTreeSet<Simplex> = BTreeSet::new();
    let first: Vec<Vid> = (0..n).map(|c| fresh(c, &mut colors, &mut by_color)).collect();
    seen.insert(Simplex::new(first.iter().copied()));
    made.push(first);

    let mut attempts = 0;
    while made.len() < facets {
        attempts += 1;
        if attempts > 1000 * facets {
            return Err(Error::InvalidParameters("could not place distinct facets".into()));
        }
        let anchor = made.choose(&mut rng).expect("nonempty").clone();
        let keep = rng.gen_range(1..n);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let kept: BTreeSet<usize> = order[..keep].iter().copied().collect();
        // slots are indexed by color; anchor[c] has color c
        let mut plan: Vec<Option<Vid>> = (0..n).map(|c| kept.contains(&c).then(|| anchor[c])).collect();
        for (c, slot) in plan.iter_mut().enumerate() {
            if slot.is_none() && rng.gen_bool(0.4) {
                let pool = &by_color[c];
                let pick = pool[rng.gen_range(0..pool.len())];
                if pick != anchor[c] {
                    *slot = Some(pick);
                }
            }
        }
        let probe: Vec<Option<Vid>> = plan.clone();
        if probe.iter().all(Option::is_some) {
            let s = Simplex::new(probe.iter().flatten().copied());
            if seen.contains(&s) {
                continue;
            }
        }
        let facet: Vec<Vid> = plan
            .into_iter()
            .enumerate()
            .map(|(c, slot)| slot.unwrap_or_else(|| fresh(c, &mut colors, &mut by_color)))
            .collect();
        seen.insert(Simplex::new(facet.iter().copied()));
        made.push(facet);
    }

    let mut b = ComplexBuilder::new(n);
    for (i, &c) in colors.iter().enumerate() {
        b.add_vertex(c, format!("x{i}"));
    }
    for f in made {
        b.add_facet(f);
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn glued_two_is_the_pair_of_triangles() {
        let c = glued_fan(2).unwrap();
        assert_eq!(c.vertex_ids().len(), 4);
        assert_eq!(c.facets().len(), 2);
        assert_eq!(c.label(0), "a1");
        assert_eq!(c.label(2), "p1");
        assert_eq!(c.intersect(&c).unwrap(), c);
    }

    #[test]
    fn path() {
        let c = path_of_facets(4).unwrap();
        assert_eq!(c.facets().len(), 4);
        assert_eq!(c.f_vector().counts, vec![6, 9, 4]);
    }

    #[test]
    fn random_is_reproducible() {
        let a = random_complex(7, 3, 5).unwrap();
        let b = random_complex(7, 3, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.facets().len(), 5);
        assert!(a.facets().iter().all(|f| f.len() == 3));
        assert_ne!(random_complex(8, 3, 5).unwrap(), a);
    }

    #[test]
    fn bad_parameters() {
        assert!(glued_fan(0).is_err());
        assert!(random_complex(1, 0, 3).is_err());
    }
}
