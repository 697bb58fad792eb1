//! Bounded-register execution of iterated collect under an encoding sequence.
//!
//! Each round a process writes the code of its input vertex (⊥ when uncoded),
//! reads every register, and decodes what it read back into vertices of the
//! input complex. A process whose vertex is ⊥ in a round keeps its state.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::complex::{unify_vertex_spaces, ChromaticComplex, Color, ComplexBuilder, Simplex, Vid};
use crate::encoding::{EncodingFunction, EncodingSequence, EncodingValue};
use crate::error::{Error, Result};
use crate::greedy::{greedy_star, split_to_budget};
use crate::iso::is_isomorphic;
use crate::protocol::{protocol_complex, schedule_oracle, Event, GlobalView, Pattern, Schedule};
use crate::subdivision::{materialize_states, DEFAULT_MAX_FACETS};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimProcessState {
    pub color: Color,
    pub input_vertex: Vid,
    /// decoded input vertices, own included
    pub knowledge: BTreeSet<Vid>,
}

impl SimProcessState {
    pub fn new(c: &ChromaticComplex, input_vertex: Vid) -> Self {
        Self { color: c.color(input_vertex), input_vertex, knowledge: BTreeSet::from([input_vertex]) }
    }
}

/// One layer of single-writer registers, all ⊥ initially.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MemoryLayer {
    cells: BTreeMap<Color, EncodingValue>,
}

impl MemoryLayer {
    pub fn write(&mut self, p: Color, value: EncodingValue) -> Result<()> {
        if self.cells.insert(p, value).is_some() {
            return Err(Error::InvalidSchedule(format!("register {p} written twice")));
        }
        Ok(())
    }

    pub fn read(&self, p: Color) -> EncodingValue {
        self.cells.get(&p).copied().unwrap_or(EncodingValue::Bottom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundedRun {
    pub input_facet: Simplex,
    pub encodings: EncodingSequence,
    pub schedules: Vec<Schedule>,
    pub result: GlobalView,
}

/// The unique vertex of color `source` with code `value` in the closed
/// neighborhood of the reader's input vertex. ⊥ decodes to nothing.
pub fn decode(
    reader: &SimProcessState,
    source: Color,
    value: EncodingValue,
    w: &EncodingFunction,
    c: &ChromaticComplex,
) -> Result<Option<Vid>> {
    let Some(code) = value.code() else {
        return Ok(None);
    };
    let home = reader.input_vertex;
    let candidates: Vec<Vid> = std::iter::once(home)
        .chain(c.neighbors(home).iter().copied())
        .filter(|&x| c.color(x) == source && w.get(x) == value)
        .collect();
    match candidates.as_slice() {
        [x] => Ok(Some(*x)),
        _ => Err(Error::AmbiguousDecode { reader: home, source_color: source, code, candidates }),
    }
}

/// One bounded round: writes, reads and decodes per the schedule.
fn bounded_round(
    c: &ChromaticComplex,
    states: &mut [SimProcessState],
    w: &EncodingFunction,
    schedule: &Schedule,
) -> Result<()> {
    let index: BTreeMap<Color, usize> = states.iter().enumerate().map(|(i, s)| (s.color, i)).collect();
    let procs: Vec<Color> = index.keys().copied().collect();
    if schedule.pattern != Pattern::IC {
        return Err(Error::InvalidSchedule("bounded runs use iterated collect".into()));
    }
    schedule.validate(&procs)?;
    let mut mem = MemoryLayer::default();
    for e in &schedule.events {
        match e {
            Event::Write(p) => {
                let s = &states[index[p]];
                mem.write(*p, w.get(s.input_vertex))?;
            }
            Event::Read { reader, register } => {
                let s = &states[index[reader]];
                if w.get(s.input_vertex).is_bottom() {
                    continue;
                }
                if let Some(x) = decode(s, *register, mem.read(*register), w, c)? {
                    states[index[reader]].knowledge.insert(x);
                }
            }
            other => return Err(Error::InvalidSchedule(format!("unexpected event {other:?}"))),
        }
    }
    Ok(())
}

fn view_of(states: &[SimProcessState]) -> GlobalView {
    GlobalView { views: states.iter().map(|s| (s.color, s.knowledge.clone())).collect() }
}

/// Runs the bounded protocol on one input facet, one schedule per round.
pub fn run_bounded(
    c: &ChromaticComplex,
    facet: &Simplex,
    seq: &EncodingSequence,
    schedules: &[Schedule],
) -> Result<GlobalView> {
    Ok(run_bounded_recorded(c, facet, seq, schedules)?.result)
}

pub fn run_bounded_recorded(
    c: &ChromaticComplex,
    facet: &Simplex,
    seq: &EncodingSequence,
    schedules: &[Schedule],
) -> Result<BoundedRun> {
    if !c.is_facet(facet) {
        return Err(Error::NotAFacet(facet.vertices().to_vec()));
    }
    if schedules.len() != seq.len() {
        return Err(Error::InvalidParameters(format!(
            "{} schedules for {} encoding functions",
            schedules.len(),
            seq.len()
        )));
    }
    let mut states: Vec<SimProcessState> = facet.iter().map(|v| SimProcessState::new(c, v)).collect();
    for (w, s) in seq.iter().zip(schedules) {
        bounded_round(c, &mut states, w, s)?;
    }
    Ok(BoundedRun {
        input_facet: facet.clone(),
        encodings: seq.clone(),
        schedules: schedules.to_vec(),
        result: view_of(&states),
    })
}

/// Round outcomes depend only on which reads follow which writes, so one
/// witness schedule per one-round view covers every behavior.
fn witness_schedules(c: &ChromaticComplex, facet: &Simplex) -> Result<Vec<Schedule>> {
    Ok(schedule_oracle(c, facet, Pattern::IC)?.into_values().collect())
}

/// Reachable final views of the bounded protocol on one facet.
pub fn bounded_facet_views(
    c: &ChromaticComplex,
    facet: &Simplex,
    seq: &EncodingSequence,
) -> Result<BTreeSet<GlobalView>> {
    let schedules = witness_schedules(c, facet)?;
    let start: Vec<SimProcessState> = facet.iter().map(|v| SimProcessState::new(c, v)).collect();
    let mut frontier: BTreeMap<Vec<BTreeSet<Vid>>, Vec<SimProcessState>> = BTreeMap::new();
    frontier.insert(start.iter().map(|s| s.knowledge.clone()).collect(), start);
    for w in seq.iter() {
        let mut next = BTreeMap::new();
        for states in frontier.values() {
            for s in &schedules {
                let mut t = states.clone();
                bounded_round(c, &mut t, w, s)?;
                next.insert(t.iter().map(|x| x.knowledge.clone()).collect(), t);
            }
        }
        frontier = next;
    }
    Ok(frontier.values().map(|s| view_of(s)).collect())
}

/// Protocol complex of the bounded protocol: final states of every facet and
/// schedule combination, glued on equal (color, knowledge) states.
pub fn bounded_protocol_complex(c: &ChromaticComplex, seq: &EncodingSequence) -> Result<ChromaticComplex> {
    let mut facets = Vec::new();
    for f in c.facets() {
        for view in bounded_facet_views(c, f, seq)? {
            facets.push(view.states());
        }
    }
    Ok(materialize_states(c, facets))
}

/// Every bounded outcome is a one-round full-information collect view.
pub fn bounded_views_sound(c: &ChromaticComplex, seq: &EncodingSequence) -> Result<bool> {
    for f in c.facets() {
        let fi = crate::protocol::round_views(c, f, Pattern::IC)?;
        if !bounded_facet_views(c, f, seq)?.is_subset(&fi) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MergeEvidence {
    /// process color and its raw observation, reachable from both facets
    pub merged_color: Color,
    pub merged_state: String,
    pub reachable_from_alpha: bool,
    pub reachable_from_beta: bool,
    pub reachable_from_shared_edge: bool,
    pub intersection_preserved: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EqualCodeCounterexample {
    #[serde(serialize_with = "ser_complex")]
    pub complex: ChromaticComplex,
    pub encodings: EncodingSequence,
    pub evidence: Option<MergeEvidence>,
    pub repaired: EncodingSequence,
    /// states of the repaired raw protocol still preserve intersections
    pub repaired_intersection_preserved: bool,
    pub repaired_isomorphic_to_collect: bool,
}

fn ser_complex<S: serde::Serializer>(c: &ChromaticComplex, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&crate::io::ComplexJson::from(c), s)
}

/// Complex of raw observations: a state is the input vertex together with the
/// (register, value) pairs it read, before any decoding.
pub fn raw_observation_complex(c: &ChromaticComplex, seq: &EncodingSequence) -> Result<ChromaticComplex> {
    let mut b = ComplexBuilder::new(c.n());
    let mut ids: BTreeMap<(Color, String), Vid> = BTreeMap::new();
    for f in c.facets() {
        let schedules = witness_schedules(c, f)?;
        let mut outcomes: BTreeSet<Vec<(Color, String)>> = BTreeSet::new();
        let mut frontier: BTreeSet<Vec<(Vid, BTreeSet<(usize, u32)>)>> =
            BTreeSet::from([f.iter().map(|v| (v, BTreeSet::new())).collect()]);
        for w in seq.iter() {
            let mut next = BTreeSet::new();
            for st in &frontier {
                for s in &schedules {
                    next.insert(raw_round(c, st, w, s));
                }
            }
            frontier = next;
        }
        for st in frontier {
            outcomes.insert(
                st.iter()
                    .map(|(v, obs)| {
                        let o: Vec<String> = obs.iter().map(|(p, k)| format!("{p}:{k}")).collect();
                        (c.color(*v), format!("{}|{}", c.label(*v), o.join(",")))
                    })
                    .collect(),
            );
        }
        for facet in outcomes {
            let vids: Vec<Vid> = facet
                .into_iter()
                .map(|(col, label)| {
                    *ids.entry((col, label.clone())).or_insert_with(|| b.add_vertex(col.0, label))
                })
                .collect();
            b.add_facet(vids);
        }
    }
    b.build()
}

fn raw_round(
    c: &ChromaticComplex,
    st: &[(Vid, BTreeSet<(usize, u32)>)],
    w: &EncodingFunction,
    s: &Schedule,
) -> Vec<(Vid, BTreeSet<(usize, u32)>)> {
    let index: BTreeMap<Color, usize> = st.iter().enumerate().map(|(i, (v, _))| (c.color(*v), i)).collect();
    let mut out = st.to_vec();
    let mut mem = MemoryLayer::default();
    for e in &s.events {
        match e {
            Event::Write(p) => {
                let _ = mem.write(*p, w.get(st[index[p]].0));
            }
            Event::Read { reader, register } => {
                let i = index[reader];
                if w.get(st[i].0).is_bottom() {
                    continue;
                }
                if let Some(k) = mem.read(*register).code() {
                    out[i].1.insert((register.0, k));
                }
            }
            _ => {}
        }
    }
    out
}

fn raw_intersection(
    c: &ChromaticComplex,
    seq: &EncodingSequence,
) -> Result<(ChromaticComplex, ChromaticComplex, ChromaticComplex)> {
    let alpha = c.subcomplex([c.facets()[0].clone()])?;
    let beta = c.subcomplex([c.facets()[1].clone()])?;
    let sigma = alpha.intersect(&beta)?;
    let ra = raw_observation_complex(&alpha, seq)?;
    let rb = raw_observation_complex(&beta, seq)?;
    let rs = raw_observation_complex(&sigma, seq)?;
    let mut u = unify_vertex_spaces(&[&ra, &rb, &rs]);
    let rs = u.pop().expect("three");
    let rb = u.pop().expect("three");
    let ra = u.pop().expect("three");
    let lhs = ra.intersect(&rb)?;
    Ok((lhs, rs, ra))
}

/// Two triangles glued on an edge, with one encoding that gives both private
/// vertices the same code. A shared-edge process that reads that code ends in
/// the same state under either input, which the shared edge alone never
/// produces. Distinct codes remove the merge.
pub fn equal_code_counterexample() -> Result<EqualCodeCounterexample> {
    let c = crate::generators::glued_fan(2)?;
    // a1 = 0, a2 = 1, p1 = 2, p2 = 3
    let bad = EncodingSequence::new(vec![EncodingFunction::from_codes([(0, 1), (1, 1), (2, 1), (3, 1)])]);
    let repaired =
        EncodingSequence::new(vec![EncodingFunction::from_codes([(0, 1), (1, 2), (2, 1), (3, 1)])]);

    let (lhs, rs, _) = raw_intersection(&c, &bad)?;
    let evidence = lhs
        .vertex_ids()
        .into_iter()
        .find(|&v| !rs.has_vertex(v))
        .map(|v| MergeEvidence {
            merged_color: lhs.color(v),
            merged_state: lhs.label(v).to_string(),
            reachable_from_alpha: true,
            reachable_from_beta: true,
            reachable_from_shared_edge: false,
            intersection_preserved: lhs.same_faces(&rs),
        });

    let (lhs2, rs2, _) = raw_intersection(&c, &repaired)?;
    let fi = protocol_complex(&c, Pattern::IC, 1, DEFAULT_MAX_FACETS)?;
    let gs = bounded_protocol_complex(&c, &repaired)?;
    Ok(EqualCodeCounterexample {
        complex: c,
        encodings: bad,
        evidence,
        repaired,
        repaired_intersection_preserved: lhs2.same_faces(&rs2),
        repaired_isomorphic_to_collect: is_isomorphic(&gs, &fi),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IterationStats {
    pub facets: usize,
    pub max_degree: usize,
    pub greedy_rounds: usize,
    pub budgeted_rounds: usize,
}

#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub complex: ChromaticComplex,
    pub total_rounds: usize,
    pub iterations: Vec<IterationStats>,
}

/// r full-information collect iterations, each simulated with b-bit registers.
pub fn iterate_pipeline(c: &ChromaticComplex, r: usize, b: u32, max_facets: usize) -> Result<PipelineResult> {
    if r == 0 || b == 0 {
        return Err(Error::InvalidParameters("rounds and bits must be at least 1".into()));
    }
    let mut cur = c.clone();
    let mut total = 0;
    let mut iterations = Vec::with_capacity(r);
    for _ in 0..r {
        let estimate = cur.facets().len().saturating_mul(25);
        if estimate > max_facets {
            return Err(Error::ResourceLimit { what: "facets", count: estimate, limit: max_facets });
        }
        let (seq, _) = greedy_star(&cur);
        let budgeted = split_to_budget(&seq, &cur, b);
        let next = bounded_protocol_complex(&cur, &budgeted)?;
        iterations.push(IterationStats {
            facets: cur.facets().len(),
            max_degree: cur.max_degree(),
            greedy_rounds: seq.len(),
            budgeted_rounds: budgeted.len(),
        });
        total += budgeted.len();
        cur = next;
    }
    Ok(PipelineResult { complex: cur, total_rounds: total, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{standard_simplex, two_triangles};

    fn tt(a1: u32, a2: u32) -> EncodingFunction {
        EncodingFunction::from_codes([(0, a1), (1, a2), (2, 1), (3, 1)])
    }

    #[test]
    fn decoding() {
        let c = two_triangles();
        let reader = SimProcessState::new(&c, 2);
        assert_eq!(decode(&reader, Color(0), EncodingValue::Code(1), &tt(1, 2), &c), Ok(Some(0)));
        assert_eq!(decode(&reader, Color(0), EncodingValue::Bottom, &tt(1, 2), &c), Ok(None));
        assert!(matches!(
            decode(&reader, Color(0), EncodingValue::Code(1), &tt(1, 1), &c),
            Err(Error::AmbiguousDecode { .. })
        ));
    }

    fn sequential(order: &[usize]) -> Schedule {
        let n = order.len();
        let mut events = Vec::new();
        for &p in order {
            events.push(Event::Write(Color(p)));
            for q in 0..n {
                events.push(Event::Read { reader: Color(p), register: Color(q) });
            }
        }
        Schedule { pattern: Pattern::IC, events }
    }

    #[test]
    fn sequential_run_on_simplex() {
        let d2 = standard_simplex(2);
        let (seq, _) = greedy_star(&d2);
        let f = d2.facets()[0].clone();
        let view = run_bounded(&d2, &f, &seq, &[sequential(&[0, 1, 2])]).unwrap();
        assert_eq!(view.views[&Color(0)], BTreeSet::from([0]));
        assert_eq!(view.views[&Color(2)], BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn concurrent_run_on_edge() {
        let d1 = standard_simplex(1);
        let (seq, _) = greedy_star(&d1);
        let f = d1.facets()[0].clone();
        let s = Schedule {
            pattern: Pattern::IC,
            events: vec![
                Event::Write(Color(0)),
                Event::Write(Color(1)),
                Event::Read { reader: Color(0), register: Color(0) },
                Event::Read { reader: Color(0), register: Color(1) },
                Event::Read { reader: Color(1), register: Color(0) },
                Event::Read { reader: Color(1), register: Color(1) },
            ],
        };
        let view = run_bounded(&d1, &f, &seq, &[s]).unwrap();
        assert!(view.views.values().all(|v| v.len() == 2));
    }

    #[test]
    fn schedule_count_must_match() {
        let d1 = standard_simplex(1);
        let (seq, _) = greedy_star(&d1);
        let f = d1.facets()[0].clone();
        assert!(run_bounded(&d1, &f, &seq, &[]).is_err());
    }

    #[test]
    fn bounded_matches_collect() {
        let fi_cases = [standard_simplex(1), standard_simplex(2), two_triangles()];
        for c in fi_cases {
            let fi = protocol_complex(&c, Pattern::IC, 1, DEFAULT_MAX_FACETS).unwrap();
            for b in 1..=3 {
                let (seq, _) = greedy_star(&c);
                let seq = split_to_budget(&seq, &c, b);
                let gs = bounded_protocol_complex(&c, &seq).unwrap();
                assert!(bounded_views_sound(&c, &seq).unwrap());
                assert!(is_isomorphic(&gs, &fi), "b = {b}");
            }
        }
    }

    #[test]
    fn counterexample() {
        let ce = equal_code_counterexample().unwrap();
        assert_eq!(ce.complex.vertex_ids().len(), 4);
        let ev = ce.evidence.expect("merged state");
        assert!(!ev.intersection_preserved);
        assert_ne!(ev.merged_color, Color(0));
        assert!(ce.repaired_intersection_preserved);
        assert!(ce.repaired_isomorphic_to_collect);
    }

    #[test]
    fn pipeline_one_iteration() {
        let d2 = standard_simplex(2);
        let out = iterate_pipeline(&d2, 1, 8, DEFAULT_MAX_FACETS).unwrap();
        let fi = protocol_complex(&d2, Pattern::IC, 1, DEFAULT_MAX_FACETS).unwrap();
        assert!(is_isomorphic(&out.complex, &fi));
        assert_eq!(out.total_rounds, 1);
    }

    #[test]
    fn pipeline_two_iterations_on_edge() {
        let d1 = standard_simplex(1);
        let out = iterate_pipeline(&d1, 2, 1, DEFAULT_MAX_FACETS).unwrap();
        let fi = protocol_complex(&d1, Pattern::IC, 2, DEFAULT_MAX_FACETS).unwrap();
        assert!(is_isomorphic(&out.complex, &fi));
    }
}
