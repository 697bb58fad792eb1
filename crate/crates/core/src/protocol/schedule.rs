//! Schedules of one round and the brute-force interleaving oracle.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::{GlobalView, Pattern};
use crate::complex::{ChromaticComplex, Color, Simplex};
use crate::error::{Error, Result};

/// One atomic step of a round.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Event {
    Write(Color),
    Read { reader: Color, register: Color },
    Snapshot(Color),
    /// A concurrency class: all members write, then all members snapshot.
    Immediate(Vec<Color>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Schedule {
    pub pattern: Pattern,
    pub events: Vec<Event>,
}

impl Schedule {
    /// Checks program order and event shapes for the processes in `procs`.
    pub fn validate(&self, procs: &[Color]) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSchedule(m));
        let known: BTreeSet<Color> = procs.iter().copied().collect();
        let mut wrote: BTreeSet<Color> = BTreeSet::new();
        let mut reads: BTreeMap<Color, BTreeSet<Color>> = BTreeMap::new();
        let mut snapped: BTreeSet<Color> = BTreeSet::new();
        for e in &self.events {
            match (self.pattern, e) {
                (Pattern::IC | Pattern::IAS, Event::Write(p)) => {
                    if !known.contains(p) || !wrote.insert(*p) {
                        return bad(format!("write by {p} is unknown or repeated"));
                    }
                }
                (Pattern::IC, Event::Read { reader, register }) => {
                    if !wrote.contains(reader) {
                        return bad(format!("{reader} reads before writing"));
                    }
                    if !known.contains(register)
                        || !reads.entry(*reader).or_default().insert(*register)
                    {
                        return bad(format!("{reader} reads register {register} twice or unknown"));
                    }
                }
                (Pattern::IAS, Event::Snapshot(p)) => {
                    if !wrote.contains(p) || !snapped.insert(*p) {
                        return bad(format!("snapshot by {p} out of order"));
                    }
                }
                (Pattern::IIS, Event::Immediate(group)) => {
                    if group.is_empty() {
                        return bad("empty concurrency class".into());
                    }
                    for p in group {
                        if !known.contains(p) || !wrote.insert(*p) {
                            return bad(format!("{p} appears in two classes"));
                        }
                    }
                }
                (pat, ev) => return bad(format!("event {ev:?} not allowed under {pat}")),
            }
        }
        let complete = match self.pattern {
            Pattern::IC => procs.iter().all(|p| reads.get(p).map_or(0, |r| r.len()) == procs.len()),
            Pattern::IAS => snapped.len() == procs.len(),
            Pattern::IIS => wrote.len() == procs.len(),
        };
        if !complete || wrote.len() != procs.len() {
            return bad("schedule is incomplete".into());
        }
        Ok(())
    }

    /// Outcome of running the full-information round on `facet`.
    pub fn evaluate(&self, c: &ChromaticComplex, facet: &Simplex) -> Result<GlobalView> {
        let by_color: BTreeMap<Color, usize> = facet.iter().map(|v| (c.color(v), v)).collect();
        let procs: Vec<Color> = by_color.keys().copied().collect();
        self.validate(&procs)?;
        let mut written: BTreeSet<usize> = BTreeSet::new();
        let mut views: BTreeMap<Color, BTreeSet<usize>> = BTreeMap::new();
        for e in &self.events {
            match e {
                Event::Write(p) => {
                    written.insert(by_color[p]);
                }
                Event::Read { reader, register } => {
                    let v = by_color[register];
                    if written.contains(&v) {
                        views.entry(*reader).or_default().insert(v);
                    }
                }
                Event::Snapshot(p) => {
                    views.insert(*p, written.clone());
                }
                Event::Immediate(group) => {
                    written.extend(group.iter().map(|p| by_color[p]));
                    for p in group {
                        views.insert(*p, written.clone());
                    }
                }
            }
        }
        Ok(GlobalView { views })
    }
}

// Per-process progress, packed for memoization.
#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    wrote: u32,
    // IC: registers already read per process; IAS: bit 0 marks the snapshot
    done: Vec<u32>,
    views: Vec<u32>,
}

/// Exhaustive enumeration of one round over `facet`, deduplicated by outcome.
/// Each outcome keeps the first schedule that produced it.
pub fn schedule_oracle(
    c: &ChromaticComplex,
    facet: &Simplex,
    pattern: Pattern,
) -> Result<BTreeMap<GlobalView, Schedule>> {
    if !c.is_facet(facet) {
        return Err(Error::NotAFacet(facet.vertices().to_vec()));
    }
    let k = facet.len();
    let limit = if pattern == Pattern::IC { 3 } else { 4 };
    if k > limit {
        return Err(Error::ResourceLimit { what: "schedule oracle processes", count: k, limit });
    }
    let colors: Vec<Color> = facet.iter().map(|v| c.color(v)).collect();
    let mut walk = Walk {
        k,
        pattern,
        colors: &colors,
        seen: HashSet::new(),
        trail: Vec::new(),
        found: BTreeMap::new(),
    };
    let start = State { wrote: 0, done: vec![0; k], views: vec![0; k] };
    walk.dfs(start);
    let vs = facet.vertices();
    Ok(walk
        .found
        .into_iter()
        .map(|(masks, events)| (GlobalView::from_masks(c, vs, &masks), Schedule { pattern, events }))
        .collect())
}

struct Walk<'a> {
    k: usize,
    pattern: Pattern,
    colors: &'a [Color],
    seen: HashSet<State>,
    trail: Vec<Event>,
    found: BTreeMap<Vec<u32>, Vec<Event>>,
}

impl Walk<'_> {
    fn dfs(&mut self, s: State) {
        if !self.seen.insert(s.clone()) {
            return;
        }
        let full = (1u32 << self.k) - 1;
        let finished = match self.pattern {
            Pattern::IC => s.done.iter().all(|&d| d == full),
            Pattern::IAS => s.done.iter().all(|&d| d == 1),
            Pattern::IIS => s.wrote == full,
        };
        if finished {
            self.found.entry(s.views.clone()).or_insert_with(|| self.trail.clone());
            return;
        }
        match self.pattern {
            Pattern::IC => {
                for p in 0..self.k {
                    if s.wrote >> p & 1 == 0 {
                        let mut t = s.clone();
                        t.wrote |= 1 << p;
                        self.step(Event::Write(self.colors[p]), t);
                        continue;
                    }
                    for q in 0..self.k {
                        if s.done[p] >> q & 1 == 0 {
                            let mut t = s.clone();
                            t.done[p] |= 1 << q;
                            t.views[p] |= s.wrote & (1 << q);
                            let ev = Event::Read { reader: self.colors[p], register: self.colors[q] };
                            self.step(ev, t);
                        }
                    }
                }
            }
            Pattern::IAS => {
                for p in 0..self.k {
                    if s.wrote >> p & 1 == 0 {
                        let mut t = s.clone();
                        t.wrote |= 1 << p;
                        self.step(Event::Write(self.colors[p]), t);
                    } else if s.done[p] == 0 {
                        let mut t = s.clone();
                        t.done[p] = 1;
                        t.views[p] = s.wrote;
                        self.step(Event::Snapshot(self.colors[p]), t);
                    }
                }
            }
            Pattern::IIS => {
                let remaining = full & !s.wrote;
                let mut group = remaining;
                while group != 0 {
                    let mut t = s.clone();
                    t.wrote |= group;
                    for p in 0..self.k {
                        if group >> p & 1 == 1 {
                            t.views[p] = t.wrote;
                        }
                    }
                    let members = (0..self.k).filter(|p| group >> p & 1 == 1).map(|p| self.colors[p]);
                    self.step(Event::Immediate(members.collect()), t);
                    group = (group - 1) & remaining;
                }
            }
        }
    }

    fn step(&mut self, e: Event, t: State) {
        self.trail.push(e);
        self.dfs(t);
        self.trail.pop();
    }
}
