use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use itermem::complex::unify_vertex_spaces;
use itermem::encoding::{
    coded_distinguishable_subcomplex, distinguishable_vertices, is_subcomplex_distinguishable,
};
use itermem::generators::{glued_fan, path_of_facets, random_complex};
use itermem::greedy::{stars_sound, verify_coded_cover};
use itermem::io::{from_json, to_dot, to_json};
use itermem::protocol::random_subcomplex;
use itermem::setcover::{exact_min_sequence, EXACT_MAX_VERTICES};
use itermem::sim::bounded_facet_views;
use itermem::subdivision::{ordered_bell, DEFAULT_MAX_FACETS};
use itermem::*;

fn small_complex() -> impl Strategy<Value = ChromaticComplex> {
    (any::<u64>(), 2usize..=3, 1usize..=5).prop_map(|(seed, n, f)| random_complex(seed, n, f).unwrap())
}

fn random_encoding(c: &ChromaticComplex, seed: u64, max_code: u32) -> EncodingFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = EncodingFunction::default();
    for v in c.vertex_ids() {
        let x = rng.gen_range(0..=max_code + 1);
        w.set(v, if x == 0 { EncodingValue::Bottom } else { EncodingValue::Code(x - 1) });
    }
    w
}

/// Color-preserving bijections tried exhaustively.
fn brute_isomorphic(a: &ChromaticComplex, b: &ChromaticComplex) -> bool {
    let va = a.vertex_ids();
    let vb = b.vertex_ids();
    if va.len() != vb.len() || a.facets().len() != b.facets().len() {
        return false;
    }
    let target: BTreeSet<Simplex> = b.facets().iter().cloned().collect();
    let mut map: BTreeMap<Vid, Vid> = BTreeMap::new();
    let mut used: BTreeSet<Vid> = BTreeSet::new();
    fn rec(
        i: usize,
        va: &[Vid],
        vb: &[Vid],
        a: &ChromaticComplex,
        b: &ChromaticComplex,
        target: &BTreeSet<Simplex>,
        map: &mut BTreeMap<Vid, Vid>,
        used: &mut BTreeSet<Vid>,
    ) -> bool {
        if i == va.len() {
            return a.facets().iter().all(|f| target.contains(&Simplex::new(f.iter().map(|v| map[&v]))));
        }
        for &w in vb {
            if used.contains(&w) || a.color(va[i]) != b.color(w) {
                continue;
            }
            map.insert(va[i], w);
            used.insert(w);
            if rec(i + 1, va, vb, a, b, target, map, used) {
                return true;
            }
            used.remove(&w);
            map.remove(&va[i]);
        }
        false
    }
    rec(0, &va, &vb, a, b, &target, &mut map, &mut used)
}

/// Faces of Ch(c) straight from the definition: rainbow sets of (color, carrier)
/// states whose carriers form a chain, with a process that appears in another's
/// carrier seeing a smaller carrier, all inside one facet of c. States are
/// rendered as "color:{vids}".
fn ch_faces_by_definition(c: &ChromaticComplex) -> BTreeSet<BTreeSet<String>> {
    let mut out = BTreeSet::new();
    for f in c.facets() {
        let carriers: Vec<Simplex> = f.nonempty_subsets().collect();
        let states: Vec<(Vid, Simplex)> = carriers
            .iter()
            .flat_map(|s| s.iter().map(move |v| (v, s.clone())))
            .collect();
        let k = states.len();
        for mask in 1u64..(1 << k) {
            let pick: Vec<&(Vid, Simplex)> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| &states[i]).collect();
            if pick.len() > f.len() {
                continue;
            }
            let ok = pick.iter().enumerate().all(|(i, (vi, si))| {
                pick.iter().enumerate().all(|(j, (vj, sj))| {
                    i == j
                        || (c.color(*vi) != c.color(*vj)
                            && (si.is_subset(sj) || sj.is_subset(si))
                            && (!sj.contains(*vi) || si.is_subset(sj)))
                })
            });
            if ok {
                let face = pick
                    .iter()
                    .map(|(v, s)| {
                        let inner: Vec<String> = s.iter().map(|x| x.to_string()).collect();
                        format!("{}:{{{}}}", c.color(*v), inner.join(","))
                    })
                    .collect();
                out.insert(face);
            }
        }
    }
    out
}

fn labelled_faces(c: &ChromaticComplex) -> BTreeSet<BTreeSet<String>> {
    c.faces().iter().map(|f| f.iter().map(|v| c.label(v).to_string()).collect()).collect()
}

#[test]
fn ch_of_triangle_matches_definition() {
    let d2 = standard_simplex(2);
    let oracle = ch_faces_by_definition(&d2);
    let mut counts = [0usize; 3];
    for f in &oracle {
        counts[f.len() - 1] += 1;
    }
    assert_eq!(counts, [12, 24, 13]);
    assert_eq!(labelled_faces(&chromatic_subdivide(&d2)), oracle);
}

#[test]
fn subdivision_facet_counts_follow_ordered_bell() {
    for n in 1..=3 {
        let base = standard_simplex(n - 1);
        for r in 1..=2 {
            let expected = ordered_bell(n).pow(r as u32);
            let ch = iterate_subdivide(&base, r, DEFAULT_MAX_FACETS).unwrap();
            assert_eq!(ch.facets().len(), expected);
            let xi = protocol_complex(&base, Pattern::IIS, r, DEFAULT_MAX_FACETS).unwrap();
            assert_eq!(xi.facets().len(), expected);
        }
    }
}

#[test]
fn iterated_subdivision_is_a_disk() {
    for r in 1..=3 {
        let ch = iterate_subdivide(&standard_simplex(2), r, DEFAULT_MAX_FACETS).unwrap();
        assert_eq!(ch.f_vector().euler_characteristic(), 1);
    }
}

#[test]
fn isomorphism_is_an_equivalence_on_a_pool() {
    let mut pool = vec![standard_simplex(2), two_triangles(), glued_fan(3).unwrap(), path_of_facets(2).unwrap()];
    for seed in 0..8 {
        pool.push(random_complex(seed, 3, 3).unwrap());
    }
    for a in &pool {
        assert!(is_isomorphic(a, a));
        for b in &pool {
            assert_eq!(is_isomorphic(a, b), is_isomorphic(b, a));
            for c in &pool {
                if is_isomorphic(a, b) && is_isomorphic(b, c) {
                    assert!(is_isomorphic(a, c));
                }
            }
        }
    }
}

#[test]
fn greedy_is_never_shorter_than_exact() {
    let mut compared = 0;
    for seed in 0..40u64 {
        let c = random_complex(seed, 3, 1 + seed as usize % 4).unwrap();
        if c.vertex_ids().len() > EXACT_MAX_VERTICES {
            continue;
        }
        let (exact, _) = exact_min_sequence(&c).unwrap();
        // one bit leaves a single code, the family the exact search ranges over
        let greedy = split_to_budget(&greedy_star(&c).0, &c, 1);
        assert!(greedy.len() >= exact, "seed {seed}: greedy {} < exact {exact}", greedy.len());
        compared += 1;
        if compared == 10 {
            break;
        }
    }
    assert_eq!(compared, 10);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn faces_are_rainbow_and_closed(c in small_complex()) {
        let faces = c.faces();
        for f in &faces {
            prop_assert!(c.is_rainbow(f));
            for s in f.nonempty_subsets() {
                prop_assert!(faces.contains(&s));
            }
        }
        let fv = c.f_vector();
        prop_assert_eq!(fv.counts.iter().sum::<usize>(), faces.len());
    }

    #[test]
    fn star_is_the_cone_over_the_link(c in small_complex()) {
        for v in c.vertex_ids() {
            let star: BTreeSet<Simplex> = c.vertex_star(v).unwrap().faces();
            let link = c.link(v).unwrap().faces();
            let mut expected: BTreeSet<Simplex> = link.iter().map(|t| t.union(&Simplex::vertex(v))).collect();
            expected.insert(Simplex::vertex(v));
            expected.extend(link.iter().cloned());
            prop_assert_eq!(star, expected);
        }
    }

    #[test]
    fn euler_characteristic_matches_alternating_sum(c in small_complex()) {
        let faces = c.faces();
        let chi: i64 = faces.iter().map(|f| if f.len() % 2 == 1 { 1 } else { -1 }).sum();
        prop_assert_eq!(c.f_vector().euler_characteristic(), chi);
    }

    #[test]
    fn isomorphism_agrees_with_brute_force(s1 in any::<u64>(), s2 in any::<u64>(), f in 1usize..=4, perm in any::<u64>()) {
        let a = random_complex(s1, 3, f).unwrap();
        prop_assume!(a.vertex_ids().len() <= 8);
        let b = random_complex(s2, 3, f).unwrap();
        if b.vertex_ids().len() <= 8 {
            prop_assert_eq!(is_isomorphic(&a, &b), brute_isomorphic(&a, &b));
        }
        // a relabelled copy must be found
        let mut rng = ChaCha8Rng::seed_from_u64(perm);
        let mut order = a.vertex_ids();
        use rand::seq::SliceRandom;
        order.shuffle(&mut rng);
        let pos: BTreeMap<Vid, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let table = order.iter().map(|&v| a.vertex(v).clone()).collect();
        let facets = a.facets().iter().map(|f| f.iter().map(|v| pos[&v]).collect()).collect();
        let copy = ChromaticComplex::new(a.n(), table, facets).unwrap();
        prop_assert!(is_isomorphic(&a, &copy));
        let iso = find_isomorphism(&a, &copy).unwrap();
        for f in a.facets() {
            prop_assert!(copy.is_facet(&iso.apply(f)));
        }
    }

    #[test]
    fn ch_matches_definition(c in small_complex()) {
        prop_assume!(c.n() == 3 || c.facets().len() <= 4);
        prop_assert_eq!(labelled_faces(&chromatic_subdivide(&c)), ch_faces_by_definition(&c));
    }

    #[test]
    fn subdivision_preserves_intersections(c in small_complex(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_subcomplex(&c, &mut rng);
        let b = random_subcomplex(&c, &mut rng);
        let ab = a.intersect(&b).unwrap();
        let chs = [chromatic_subdivide(&a), chromatic_subdivide(&b), chromatic_subdivide(&ab)];
        let u = unify_vertex_spaces(&chs.iter().collect::<Vec<_>>());
        prop_assert!(u[0].intersect(&u[1]).unwrap().same_faces(&u[2]));
    }

    #[test]
    fn views_include_self(c in small_complex()) {
        for p in Pattern::ALL {
            for f in c.facets() {
                for g in round_views(&c, f, p).unwrap() {
                    for v in f.iter() {
                        prop_assert!(g.views[&c.color(v)].contains(&v));
                    }
                }
            }
        }
    }

    #[test]
    fn distinguishability_is_monotone_on_faces(c in small_complex(), seed in any::<u64>()) {
        let w = random_encoding(&c, seed, 2);
        for f in c.faces() {
            let sub = c.subcomplex([f.clone()]).unwrap();
            if is_subcomplex_distinguishable(&c, &sub, &w).unwrap() {
                for s in f.nonempty_subsets() {
                    let part = c.subcomplex([s]).unwrap();
                    prop_assert!(is_subcomplex_distinguishable(&c, &part, &w).unwrap());
                }
            }
        }
    }

    #[test]
    fn more_functions_never_shrink_the_cover(c in small_complex(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let one = EncodingSequence::new(vec![random_encoding(&c, s1, 2)]);
        let two = EncodingSequence::new(vec![random_encoding(&c, s1, 2), random_encoding(&c, s2, 2)]);
        prop_assert!(distinguishable_subcomplex(&c, &one).is_subcomplex_of(&distinguishable_subcomplex(&c, &two)));
    }

    #[test]
    fn renaming_codes_changes_nothing(c in small_complex(), seed in any::<u64>()) {
        let w = random_encoding(&c, seed, 3);
        let mut renamed = EncodingFunction::default();
        for (&v, &x) in &w.assignment {
            renamed.set(v, match x {
                EncodingValue::Bottom => EncodingValue::Bottom,
                EncodingValue::Code(k) => EncodingValue::Code(3 * k + 7),
            });
        }
        prop_assert_eq!(distinguishable_vertices(&c, &w), distinguishable_vertices(&c, &renamed));
    }

    #[test]
    fn greedy_star_covers_soundly_and_deterministically(c in small_complex()) {
        let (seq, trace) = greedy_star(&c);
        prop_assert!(verify_cover(&c, &seq));
        prop_assert!(verify_coded_cover(&c, &seq));
        prop_assert!(stars_sound(&c, &trace));
        prop_assert_eq!(greedy_star(&c), (seq.clone(), trace));
        for b in 1..=3 {
            let split = split_to_budget(&seq, &c, b);
            prop_assert!(split.fits_budget(b));
            prop_assert!(coded_distinguishable_subcomplex(&c, &split).same_faces(&c));
        }
    }

    #[test]
    fn bounded_runs_reach_exactly_the_collect_views(c in small_complex(), b in 1u32..=2) {
        prop_assume!(c.n() == 3);
        let (seq, _) = greedy_star(&c);
        let seq = split_to_budget(&seq, &c, b);
        for f in c.facets() {
            let bounded = bounded_facet_views(&c, f, &seq).unwrap();
            let fi = round_views(&c, f, Pattern::IC).unwrap();
            prop_assert_eq!(bounded, fi);
        }
    }

    #[test]
    fn exports_round_trip(c in small_complex()) {
        let back = from_json(&to_json(&c)).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(to_dot(&back), to_dot(&c));
        prop_assert_eq!(to_dot(&c).matches(" -- ").count(), c.edges().len());
    }

    #[test]
    fn seeded_generation_is_reproducible(seed in any::<u64>(), n in 1usize..=4, f in 1usize..=6) {
        prop_assert_eq!(random_complex(seed, n, f).unwrap(), random_complex(seed, n, f).unwrap());
    }
}
