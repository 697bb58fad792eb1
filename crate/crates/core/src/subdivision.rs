//! Standard chromatic subdivision and its iterates.
//!
//! A vertex of `Ch(c)` is a pair (color, carrier) where the carrier is a face of
//! `c` holding a vertex of that color. A facet of `Ch(F)` for a facet `F` is an
//! ordered partition of `F`: each process's carrier is the union of its block
//! and every earlier block.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use crate::complex::{ChromaticComplex, Color, Simplex, Vertex, Vid};
use crate::error::{Error, Result};
use crate::scalar::{factorial, ratio, Scalar};

pub const DEFAULT_MAX_FACETS: usize = 1_000_000;

/// Number of ordered set partitions of a k-set.
pub fn ordered_bell(k: usize) -> usize {
    // a(k) = sum_{i=1..k} C(k,i) a(k-i)
    let mut a = vec![1usize; k + 1];
    for m in 1..=k {
        let mut binom = 1usize;
        let mut s = 0usize;
        for i in 1..=m {
            binom = binom * (m - i + 1) / i;
            s += binom * a[m - i];
        }
        a[m] = s;
    }
    a[k]
}

/// Every ordered partition of `0..k`, as a block rank per element. Ranks used
/// by one partition are exactly `0..blocks`.
pub(crate) fn ordered_partitions(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut ranks = vec![0usize; k];
    fn rec(i: usize, ranks: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let k = ranks.len();
        if i == k {
            let mut used = vec![false; k];
            for &r in ranks.iter() {
                used[r] = true;
            }
            let blocks = used.iter().take_while(|u| **u).count();
            if used[blocks..].iter().all(|u| !u) {
                out.push(ranks.clone());
            }
            return;
        }
        for r in 0..k {
            ranks[i] = r;
            rec(i + 1, ranks, out);
        }
    }
    if k > 0 {
        rec(0, &mut ranks, &mut out);
    }
    out
}

pub(crate) fn state_label(color: Color, carrier: &Simplex) -> String {
    let inner: Vec<String> = carrier.iter().map(|v| v.to_string()).collect();
    format!("{}:{{{}}}", color, inner.join(","))
}

/// Builds a complex whose vertices are (color, carrier) states over the faces of
/// `base`. The state (color(v), {v}) keeps vid v; other states follow in order
/// of (carrier size, carrier, color).
pub(crate) fn materialize_states(
    base: &ChromaticComplex,
    facets: Vec<Vec<(Color, Simplex)>>,
) -> ChromaticComplex {
    let base_table = base.vertex_table();
    let mut ids: BTreeMap<(Color, Simplex), Vid> = BTreeMap::new();
    let mut table: Vec<Vertex> = Vec::with_capacity(base_table.len());
    for (v, vx) in base_table.iter().enumerate() {
        let key = (vx.color, Simplex::vertex(v));
        table.push(Vertex::new(vx.color, state_label(key.0, &key.1)));
        ids.insert(key, v);
    }
    let mut rest: BTreeSet<(usize, Simplex, Color)> = BTreeSet::new();
    for f in &facets {
        for (c, s) in f {
            if !ids.contains_key(&(*c, s.clone())) {
                rest.insert((s.len(), s.clone(), *c));
            }
        }
    }
    for (_, s, c) in rest {
        table.push(Vertex::new(c, state_label(c, &s)));
        ids.insert((c, s), table.len() - 1);
    }
    let simplices =
        facets.into_iter().map(|f| Simplex::new(f.into_iter().map(|k| ids[&k]))).collect();
    ChromaticComplex::from_facets_unchecked(base.n(), Arc::new(table), simplices)
}

/// The facets of `Ch(F)` for one base facet, as (color, carrier) tuples.
pub(crate) fn subdivided_facet(c: &ChromaticComplex, f: &Simplex) -> Vec<Vec<(Color, Simplex)>> {
    let vs = f.vertices();
    ordered_partitions(vs.len())
        .into_iter()
        .map(|ranks| {
            (0..vs.len())
                .map(|i| {
                    let carrier =
                        Simplex::new((0..vs.len()).filter(|&j| ranks[j] <= ranks[i]).map(|j| vs[j]));
                    (c.color(vs[i]), carrier)
                })
                .collect()
        })
        .collect()
}

pub fn chromatic_subdivide(c: &ChromaticComplex) -> ChromaticComplex {
    let facets = c.facets().iter().flat_map(|f| subdivided_facet(c, f)).collect();
    materialize_states(c, facets)
}

/// Facet count of `Ch(c)` without building it.
pub fn subdivided_facet_count(c: &ChromaticComplex) -> usize {
    c.facets().iter().map(|f| ordered_bell(f.len())).fold(0usize, usize::saturating_add)
}

/// `Ch^r(c)`; fails before any level whose facet count would exceed `max_facets`.
pub fn iterate_subdivide(c: &ChromaticComplex, r: usize, max_facets: usize) -> Result<ChromaticComplex> {
    if r == 0 {
        return Err(Error::InvalidParameters("rounds must be at least 1".into()));
    }
    let mut cur = c.clone();
    for _ in 0..r {
        let count = subdivided_facet_count(&cur);
        if count > max_facets {
            return Err(Error::ResourceLimit { what: "facets", count, limit: max_facets });
        }
        cur = chromatic_subdivide(&cur);
    }
    Ok(cur)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow<S> {
    pub r: usize,
    pub max_degree: usize,
    /// max degree at r divided by max degree at r - 1
    pub ratio: Option<S>,
    /// (d!)^{r-1} · 2^d · d for dimension d, the shape the degrees follow
    pub template: S,
}

/// Exact max vertex degree of `Ch^r Δ^dim` for r = 1..=r_max.
pub fn degree_growth_table<S: Scalar>(
    dim: usize,
    r_max: usize,
    max_facets: usize,
) -> Result<Vec<GrowthRow<S>>> {
    if dim == 0 || r_max == 0 {
        return Err(Error::InvalidParameters("dimension and r_max must be positive".into()));
    }
    let mut rows: Vec<GrowthRow<S>> = Vec::with_capacity(r_max);
    let mut cur = crate::complex::standard_simplex(dim);
    for r in 1..=r_max {
        cur = iterate_subdivide(&cur, 1, max_facets)?;
        let max_degree = cur.max_degree();
        let ratio = rows.last().and_then(|p| ratio::<S>(max_degree, p.max_degree));
        let mut template = S::pow2(dim as i64) * S::from_count(dim);
        for _ in 1..r {
            template = template * factorial::<S>(dim);
        }
        rows.push(GrowthRow { r, max_degree, ratio, template });
    }
    Ok(rows)
}
