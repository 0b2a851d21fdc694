//! Secant classes between events, film-frames and trivial trisecants.

use std::collections::HashSet;

use num_traits::{One, Zero};

use crate::braid::Orientation;
use crate::error::{Error, Result};
use crate::geometry::Sign;
use crate::trisecant::TrisecantEvent;
use crate::EventTime;

pub type ClassId = usize;

/// One maximal interval of a directed pair between events on its surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SecantClass {
    pub id: ClassId,
    pub pair: (usize, usize),
    /// 0 abuts `t = 0`.
    pub interval: usize,
    /// Event that opened this interval, `None` at `t = 0`.
    pub opened_by: Option<usize>,
}

/// The six directed classes meeting at an event `(a, b, c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EventIncidence {
    pub ab: ClassId,
    pub ba: ClassId,
    pub bc: ClassId,
    pub cb: ClassId,
    pub ac_before: ClassId,
    pub ac_after: ClassId,
    pub ca_before: ClassId,
    pub ca_after: ClassId,
}

#[derive(Clone, Debug)]
pub struct SecantTrace {
    strands: usize,
    events: Vec<TrisecantEvent>,
    classes: Vec<SecantClass>,
    /// Per directed pair: `(opening event, class)` in time order.
    per_pair: Vec<Vec<(Option<usize>, ClassId)>>,
    incidence: Vec<EventIncidence>,
}

impl SecantTrace {
    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn events(&self) -> &[TrisecantEvent] {
        &self.events
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class(&self, id: ClassId) -> &SecantClass {
        &self.classes[id]
    }

    pub fn classes(&self) -> &[SecantClass] {
        &self.classes
    }

    fn pair_index(&self, i: usize, j: usize) -> usize {
        assert!(i != j && i < self.strands && j < self.strands, "bad pair ({i}, {j})");
        i * (self.strands - 1) + if j < i { j } else { j - 1 }
    }

    /// Class ids of `(i, j)` in time order.
    pub fn classes_of(&self, i: usize, j: usize) -> Vec<ClassId> {
        self.per_pair[self.pair_index(i, j)].iter().map(|&(_, c)| c).collect()
    }

    pub fn initial_class(&self, i: usize, j: usize) -> ClassId {
        self.per_pair[self.pair_index(i, j)][0].1
    }

    pub fn final_class(&self, i: usize, j: usize) -> ClassId {
        self.per_pair[self.pair_index(i, j)].last().expect("nonempty").1
    }

    /// Class of `(i, j)` just before event `k`.
    pub fn class_before(&self, i: usize, j: usize, k: usize) -> ClassId {
        let list = &self.per_pair[self.pair_index(i, j)];
        let n = list.partition_point(|&(e, _)| e.is_none_or(|e| e < k));
        list[n - 1].1
    }

    /// Class of `(i, j)` just after event `k`.
    pub fn class_after(&self, i: usize, j: usize, k: usize) -> ClassId {
        let list = &self.per_pair[self.pair_index(i, j)];
        let n = list.partition_point(|&(e, _)| e.is_none_or(|e| e <= k));
        list[n - 1].1
    }

    pub fn incidence(&self, k: usize) -> &EventIncidence {
        &self.incidence[k]
    }

    /// Directed pairs in lexicographic order, matching the base class ids.
    pub fn ordered_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.strands;
        (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect()
    }
}

/// Splits every directed pair at the events on its surface.
///
/// Base ids `0..n(n−1)` are the `t = 0` classes in lexicographic pair order;
/// event `k` then opens `(a, c)` and `(c, a)` with the next two ids.
pub fn build_secant_trace(events: &[TrisecantEvent], n: usize) -> Result<SecantTrace> {
    let mut classes = Vec::new();
    let mut per_pair = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let id = classes.len();
                classes.push(SecantClass { id, pair: (i, j), interval: 0, opened_by: None });
                per_pair.push(vec![(None, id)]);
            }
        }
    }
    let mut trace = SecantTrace { strands: n, events: events.to_vec(), classes, per_pair, incidence: Vec::new() };
    for (k, e) in events.iter().enumerate() {
        let (a, b, c) = e.triple;
        if a >= n || b >= n || c >= n || a == b || b == c || a == c {
            return Err(Error::InconsistentEvents(format!("event {k} references strands {:?} with n={n}", e.triple)));
        }
        if k > 0 && events[k - 1].time >= e.time {
            return Err(Error::InconsistentEvents(format!("event {k} is not after event {}", k - 1)));
        }
        let ac_before = trace.final_class(a, c);
        let ca_before = trace.final_class(c, a);
        for (i, j) in [(a, c), (c, a)] {
            let id = trace.classes.len();
            let p = trace.pair_index(i, j);
            let interval = trace.per_pair[p].len();
            trace.classes.push(SecantClass { id, pair: (i, j), interval, opened_by: Some(k) });
            trace.per_pair[p].push((Some(k), id));
        }
        let inc = EventIncidence {
            ab: trace.final_class(a, b),
            ba: trace.final_class(b, a),
            bc: trace.final_class(b, c),
            cb: trace.final_class(c, b),
            ac_before,
            ac_after: trace.final_class(a, c),
            ca_before,
            ca_after: trace.final_class(c, a),
        };
        trace.incidence.push(inc);
    }
    Ok(trace)
}

/// A maximal span of a ruled surface free of events on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilmFrame {
    pub surface: (usize, usize),
    pub from: EventTime,
    pub to: EventTime,
    /// Events bounding the span; `None` marks an end of `[0, 1]`.
    pub after_event: Option<usize>,
    pub before_event: Option<usize>,
}

fn unordered(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

/// Film-frames of `surface`, in time order.
pub fn film_frames(events: &[TrisecantEvent], surface: (usize, usize)) -> Vec<FilmFrame> {
    let surface = unordered(surface.0, surface.1);
    let mut frames = Vec::new();
    let mut from = EventTime::zero();
    let mut after_event = None;
    for (k, e) in events.iter().enumerate() {
        if unordered(e.triple.0, e.triple.2) == surface {
            frames.push(FilmFrame {
                surface,
                from: from.clone(),
                to: e.time.clone(),
                after_event,
                before_event: Some(k),
            });
            from = e.time.clone();
            after_event = Some(k);
        }
    }
    frames.push(FilmFrame { surface, from, to: EventTime::one(), after_event, before_event: None });
    frames
}

/// Which quandle operation an event applies for the reading `a → c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuandleOp {
    /// `∘`
    Act,
    /// `/`
    Div,
}

impl QuandleOp {
    pub fn from_sign(s: Sign) -> Self {
        match s {
            Sign::Pos => QuandleOp::Act,
            Sign::Neg => QuandleOp::Div,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            QuandleOp::Act => QuandleOp::Div,
            QuandleOp::Div => QuandleOp::Act,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            QuandleOp::Act => 'o',
            QuandleOp::Div => '/',
        }
    }
}

/// Sign of event `e` along the orientation of its middle strand.
pub fn effective_sign(e: &TrisecantEvent, orientation: &[Orientation]) -> Sign {
    match orientation[e.middle()] {
        Orientation::Up => e.sign,
        Orientation::Down => e.sign.flip(),
    }
}

/// What the classifier knows beyond the trace: the e-classes, the
/// identification of classes and the strand orientations.
#[derive(Clone, Debug)]
pub struct TrivialityContext {
    /// Representative of every class id.
    pub root: Vec<ClassId>,
    /// Representatives lying in `E`.
    pub e_set: HashSet<ClassId>,
    pub orientation: Vec<Orientation>,
}

impl TrivialityContext {
    /// No identifications, empty `E`, every strand up: the braid setting.
    pub fn braid(trace: &SecantTrace) -> Self {
        Self {
            root: (0..trace.class_count()).collect(),
            e_set: HashSet::new(),
            orientation: vec![Orientation::Up; trace.strands()],
        }
    }

    pub fn same(&self, x: ClassId, y: ClassId) -> bool {
        self.root[x] == self.root[y]
    }

    pub fn in_e(&self, x: ClassId) -> bool {
        self.e_set.contains(&self.root[x])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Type2Variant {
    /// The same middle strand crosses the surface twice.
    SameMiddle,
    /// Distinct middles joined by an e-class over the gap.
    MiddleSecant { witness: ClassId },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TrivialityMark {
    Type1 { event: usize, witness: ClassId },
    Type2Pair { first: usize, second: usize, variant: Type2Variant },
    None { event: usize },
}

/// Marks Type-1 events and Type-2 pairs; every event in neither gets `None`.
///
/// Type 1: the `ab` or `bc` class of the event lies in `E`.
///
/// Type 2: consecutive events on one surface `{a, c}` with opposite
/// effective operations, whose `(a, b)` and `(c, b)` classes at the two
/// events are identified, and whose middles coincide or are joined by a
/// `(b₀, b₁)` class in `E` that is constant over the gap.
pub fn classify_trivial(trace: &SecantTrace, ctx: &TrivialityContext) -> Vec<TrivialityMark> {
    let events = trace.events();
    let mut marks = Vec::new();
    let mut marked = vec![false; events.len()];
    for k in 0..events.len() {
        let inc = trace.incidence(k);
        let witness = [inc.ab, inc.bc].into_iter().find(|&c| ctx.in_e(c));
        if let Some(witness) = witness {
            marks.push(TrivialityMark::Type1 { event: k, witness });
            marked[k] = true;
        }
    }
    let mut last_on: std::collections::HashMap<(usize, usize), usize> = Default::default();
    for (k2, e2) in events.iter().enumerate() {
        let surf = e2.surface();
        if let Some(&k1) = last_on.get(&surf) {
            if let Some(variant) = type2_pair(trace, ctx, k1, k2) {
                marks.push(TrivialityMark::Type2Pair { first: k1, second: k2, variant });
                marked[k1] = true;
                marked[k2] = true;
            }
        }
        last_on.insert(surf, k2);
    }
    for (k, m) in marked.iter().enumerate() {
        if !m {
            marks.push(TrivialityMark::None { event: k });
        }
    }
    marks
}

fn type2_pair(trace: &SecantTrace, ctx: &TrivialityContext, k1: usize, k2: usize) -> Option<Type2Variant> {
    let (e1, e2) = (&trace.events()[k1], &trace.events()[k2]);
    let b0 = e1.middle();
    let b1 = e2.middle();
    let s1 = effective_sign(e1, &ctx.orientation);
    let s2 = effective_sign(e2, &ctx.orientation);
    if s1 == s2 {
        return None;
    }
    let (i1, i2) = (trace.incidence(k1), trace.incidence(k2));
    if !ctx.same(i1.ab, i2.ab) || !ctx.same(i1.cb, i2.cb) {
        return None;
    }
    if b0 == b1 {
        return Some(Type2Variant::SameMiddle);
    }
    let gap = trace.class_after(b0, b1, k1);
    (gap == trace.class_before(b0, b1, k2) && ctx.in_e(gap))
        .then_some(Type2Variant::MiddleSecant { witness: gap })
}
