//! Exact enumeration of horizontal trisecant events.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::exact::{quadratic_roots, Point2, RootSet};
use crate::geometry::{event_sign, realize_braid, GeometricBraid, LayoutParams, Sign};
use crate::{EventTime, Rational};

/// One collinearity event. Strands are 0-based; `triple = (a, b, c)` has `b`
/// in the middle and `a < c`; `sign` belongs to the reading `a → c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrisecantEvent {
    pub time: EventTime,
    pub piece: usize,
    pub triple: (usize, usize, usize),
    pub sign: Sign,
}

impl TrisecantEvent {
    /// The ruled surface `{a, c}` the middle strand crosses.
    pub fn surface(&self) -> (usize, usize) {
        (self.triple.0, self.triple.2)
    }

    pub fn middle(&self) -> usize {
        self.triple.1
    }

    pub fn involves(&self, s: usize) -> bool {
        let (a, b, c) = self.triple;
        a == s || b == s || c == s
    }
}

impl fmt::Display for TrisecantEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, c) = self.triple;
        write!(
            f,
            "t={} piece={} triple=({},{},{}) sign={} surface={{{},{}}}",
            self.time,
            self.piece,
            a + 1,
            b + 1,
            c + 1,
            self.sign,
            a + 1,
            c + 1
        )
    }
}

/// Parses one trace-dump line back into an event.
pub fn parse_event_line(line: &str) -> Result<TrisecantEvent> {
    let bad = || Error::Syntax(format!("bad event line: {line:?}"));
    let mut time = None;
    let mut piece = None;
    let mut triple = None;
    let mut sign = None;
    for field in line.split_whitespace() {
        let (key, val) = field.split_once('=').ok_or_else(bad)?;
        match key {
            "t" => time = Some(parse_time(val).ok_or_else(bad)?),
            "piece" => piece = Some(val.parse::<usize>().map_err(|_| bad())?),
            "triple" => {
                let inner = val.strip_prefix('(').and_then(|v| v.strip_suffix(')')).ok_or_else(bad)?;
                let xs: Vec<usize> = inner
                    .split(',')
                    .map(|x| x.parse::<usize>().ok().filter(|&v| v > 0).map(|v| v - 1))
                    .collect::<Option<_>>()
                    .ok_or_else(bad)?;
                if xs.len() != 3 {
                    return Err(bad());
                }
                triple = Some((xs[0], xs[1], xs[2]));
            }
            "sign" => {
                sign = Some(match val {
                    "+1" => Sign::Pos,
                    "-1" => Sign::Neg,
                    _ => return Err(bad()),
                })
            }
            "surface" => {}
            _ => return Err(bad()),
        }
    }
    Ok(TrisecantEvent {
        time: time.ok_or_else(bad)?,
        piece: piece.ok_or_else(bad)?,
        triple: triple.ok_or_else(bad)?,
        sign: sign.ok_or_else(bad)?,
    })
}

fn parse_time(s: &str) -> Option<EventTime> {
    let (rat, surd) = match s.split_once('+') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let (p, r) = rat.split_once('/')?;
    let p: BigInt = p.parse().ok()?;
    let r: BigInt = r.parse().ok()?;
    let (q, d) = match surd {
        None => (BigInt::from(0), BigInt::from(0)),
        Some(t) => {
            let (q, rest) = t.split_once("*sqrt(")?;
            let (d, r2) = rest.split_once(")/")?;
            if r2.parse::<BigInt>().ok()? != r {
                return None;
            }
            (q.parse().ok()?, d.parse().ok()?)
        }
    };
    if r == BigInt::from(0) || d < BigInt::from(0) {
        return None;
    }
    Some(EventTime::new(p, q, r, d))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenericityViolation {
    /// Double root of a triple's collinearity polynomial inside a piece.
    Tangency { piece: usize, strands: [usize; 3], time: EventTime },
    /// Three strands collinear throughout a piece.
    PersistentCollinear { piece: usize, strands: [usize; 3] },
    /// Collinearity at a piece breakpoint.
    BoundaryEvent { piece: usize, strands: [usize; 3], time: EventTime },
    /// Two events at the same instant.
    EqualTime { time: EventTime, first: (usize, usize, usize), second: (usize, usize, usize) },
    /// Four or more strands on one line.
    Quadrisecant { time: EventTime, strands: Vec<usize> },
}

impl fmt::Display for GenericityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tri = |s: &[usize; 3]| format!("({},{},{})", s[0] + 1, s[1] + 1, s[2] + 1);
        let tup = |s: &(usize, usize, usize)| format!("({},{},{})", s.0 + 1, s.1 + 1, s.2 + 1);
        match self {
            GenericityViolation::Tangency { piece, strands, time } => {
                write!(f, "tangency t={time} piece={piece} strands={}", tri(strands))
            }
            GenericityViolation::PersistentCollinear { piece, strands } => {
                write!(f, "persistent-collinear piece={piece} strands={}", tri(strands))
            }
            GenericityViolation::BoundaryEvent { piece, strands, time } => {
                write!(f, "boundary t={time} piece={piece} strands={}", tri(strands))
            }
            GenericityViolation::EqualTime { time, first, second } => {
                write!(f, "equal-time t={time} triples={} {}", tup(first), tup(second))
            }
            GenericityViolation::Quadrisecant { time, strands } => {
                let s: Vec<String> = strands.iter().map(|x| (x + 1).to_string()).collect();
                write!(f, "quadrisecant t={time} strands={{{}}}", s.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GenericityReport {
    pub violations: Vec<GenericityViolation>,
}

impl GenericityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Coefficients `(c2, c1, c0)` of `det(P_j − P_i, P_l − P_i)` as a polynomial
/// in the local parameter of piece `k`.
pub fn collinearity_poly(
    g: &GeometricBraid<Rational>,
    k: usize,
    (i, j, l): (usize, usize, usize),
) -> (Rational, Rational, Rational) {
    let p = g.start_of_piece(k);
    let d = g.piece_delta(k);
    let u0 = p[j].sub(&p[i]);
    let u1 = d[j].sub(&d[i]);
    let w0 = p[l].sub(&p[i]);
    let w1 = d[l].sub(&d[i]);
    (u1.cross(&w1), u0.cross(&w1) + u1.cross(&w0), u0.cross(&w0))
}

fn lift(p: &Point2<Rational>) -> Point2<EventTime> {
    p.map(EventTime::from_ratio)
}

/// Positions of all strands at parameter `s` of piece `k`.
pub fn positions_at(g: &GeometricBraid<Rational>, k: usize, s: &EventTime) -> Vec<Point2<EventTime>> {
    g.start_of_piece(k)
        .iter()
        .zip(g.piece_delta(k))
        .map(|(a, d)| lift(a).add(&lift(&d).scale(s)))
        .collect()
}

/// Global time of local parameter `s` on piece `k`.
pub fn global_time(g: &GeometricBraid<Rational>, k: usize, s: &EventTime) -> EventTime {
    let (t0, t1) = g.piece_span(k);
    s.mul_ratio(&(t1 - t0)).add_ratio(t0)
}

/// Orders three collinear points along their line and returns `(a, b, c)`
/// with `b` in the middle and `a < c`.
fn order_on_line(idx: [usize; 3], pts: &[Point2<EventTime>]) -> (usize, usize, usize) {
    let key = |s: usize| {
        let p = &pts[s];
        (p.x.clone(), p.y.clone())
    };
    let mut v = idx;
    let xs_equal = pts[idx[0]].x == pts[idx[1]].x && pts[idx[1]].x == pts[idx[2]].x;
    v.sort_by(|&a, &b| {
        let (ka, kb) = (key(a), key(b));
        if xs_equal {
            ka.1.cmp(&kb.1)
        } else {
            ka.0.cmp(&kb.0)
        }
    });
    let (a, b, c) = (v[0], v[1], v[2]);
    if a < c {
        (a, b, c)
    } else {
        (c, b, a)
    }
}

/// Sign of the event `(a, b, c)` at parameter `s` of piece `k`.
///
/// Uses the velocity of `b` relative to the point of segment `ac` it meets,
/// scaled by `|ac|²` to stay polynomial.
pub fn sign_at(
    g: &GeometricBraid<Rational>,
    k: usize,
    s: &EventTime,
    (a, b, c): (usize, usize, usize),
) -> Result<Sign> {
    let pts = positions_at(g, k, s);
    let vel: Vec<Point2<EventTime>> = g.piece_delta(k).iter().map(lift).collect();
    let ac = pts[c].sub(&pts[a]);
    let ab = pts[b].sub(&pts[a]);
    let len = ac.dot(&ac);
    let gamma = ab.dot(&ac);
    let rel = vel[b]
        .scale(&len)
        .sub(&vel[a].scale(&(len.clone() - gamma.clone())))
        .sub(&vel[c].scale(&gamma));
    event_sign(&ac, &rel)
}

fn piece_events(
    g: &GeometricBraid<Rational>,
    k: usize,
) -> (Vec<TrisecantEvent>, Vec<GenericityViolation>) {
    let n = g.strands();
    let zero = Rational::from_integer(0.into());
    let one = Rational::from_integer(1.into());
    let (lo, hi) = (EventTime::from_ratio(&zero), EventTime::from_ratio(&one));
    let mut events = Vec::new();
    let mut bad = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                let strands = [i, j, l];
                let (c2, c1, c0) = collinearity_poly(g, k, (i, j, l));
                match quadratic_roots(&c2, &c1, &c0, &zero, &one) {
                    RootSet::All => bad.push(GenericityViolation::PersistentCollinear { piece: k, strands }),
                    RootSet::Double(s) => bad.push(GenericityViolation::Tangency {
                        piece: k,
                        strands,
                        time: global_time(g, k, &s),
                    }),
                    RootSet::Simple(roots) => {
                        for s in roots {
                            let time = global_time(g, k, &s);
                            if s == lo || s == hi {
                                bad.push(GenericityViolation::BoundaryEvent { piece: k, strands, time });
                                continue;
                            }
                            let pts = positions_at(g, k, &s);
                            let triple = order_on_line(strands, &pts);
                            match sign_at(g, k, &s, triple) {
                                Ok(sign) => events.push(TrisecantEvent { time, piece: k, triple, sign }),
                                Err(_) => bad.push(GenericityViolation::Tangency { piece: k, strands, time }),
                            }
                        }
                    }
                }
            }
        }
    }
    (events, bad)
}

/// All events of `g` sorted by time, with the per-piece violations
/// (tangencies, persistent collinearity, boundary events). Time-level
/// checks are left to [`check_genericity`].
pub fn raw_trisecants(g: &GeometricBraid<Rational>) -> (Vec<TrisecantEvent>, Vec<GenericityViolation>) {
    let parts: Vec<_> = (0..g.piece_count()).into_par_iter().map(|k| piece_events(g, k)).collect();
    let mut events = Vec::new();
    let mut bad = Vec::new();
    for (e, b) in parts {
        events.extend(e);
        bad.extend(b);
    }
    events.sort_by(|x, y| x.time.cmp(&y.time).then(x.triple.cmp(&y.triple)));
    (events, bad)
}

/// Equal-time and quadrisecant violations in a sorted event list.
fn time_violations(events: &[TrisecantEvent]) -> Vec<GenericityViolation> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < events.len() {
        let mut j = i + 1;
        while j < events.len() && events[j].time == events[i].time {
            j += 1;
        }
        let group = &events[i..j];
        if group.len() > 1 {
            let set = |e: &TrisecantEvent| [e.triple.0, e.triple.1, e.triple.2];
            let mut on_line: Vec<usize> = Vec::new();
            for (x, e) in group.iter().enumerate() {
                for f in &group[x + 1..] {
                    let shared = set(e).iter().filter(|s| set(f).contains(s)).count();
                    if shared == 2 {
                        on_line.extend(set(e));
                        on_line.extend(set(f));
                    } else {
                        out.push(GenericityViolation::EqualTime {
                            time: e.time.clone(),
                            first: e.triple,
                            second: f.triple,
                        });
                    }
                }
            }
            if !on_line.is_empty() {
                on_line.sort_unstable();
                on_line.dedup();
                out.push(GenericityViolation::Quadrisecant { time: group[0].time.clone(), strands: on_line });
            }
        }
        i = j;
    }
    out
}

/// Full genericity check of `g` together with an event list produced from it.
pub fn check_genericity(g: &GeometricBraid<Rational>, events: &[TrisecantEvent]) -> GenericityReport {
    let (_, mut violations) = raw_trisecants(g);
    let mut sorted = events.to_vec();
    sorted.sort_by(|x, y| x.time.cmp(&y.time));
    violations.extend(time_violations(&sorted));
    GenericityReport { violations }
}

/// Events of a generic braid, strictly increasing in time.
pub fn enumerate_trisecants(g: &GeometricBraid<Rational>) -> Result<Vec<TrisecantEvent>> {
    let (events, mut bad) = raw_trisecants(g);
    bad.extend(time_violations(&events));
    if bad.is_empty() {
        Ok(events)
    } else {
        Err(Error::Genericity(bad))
    }
}

/// A generic realization with its events.
#[derive(Clone, Debug)]
pub struct Realization {
    pub word: BraidWord,
    pub layout: LayoutParams<Rational>,
    pub geometry: GeometricBraid<Rational>,
    pub events: Vec<TrisecantEvent>,
    /// Number of failed attempts before this one.
    pub retries: usize,
}

fn attempt_seed(seed: u64, attempt: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (attempt as u64).wrapping_mul(0xD1B5_4A32_D192_ED03)
}

/// Realizes `w` on `layout`, falling back to up to `retries` jittered layouts
/// derived from `seed` while the realization is degenerate or non-generic.
pub fn perturb_and_retry(
    w: &BraidWord,
    layout: &LayoutParams<Rational>,
    seed: u64,
    retries: usize,
) -> Result<Realization> {
    let mut last = String::new();
    for attempt in 0..=retries {
        let lay = if attempt == 0 {
            layout.clone()
        } else {
            layout.jittered(attempt_seed(seed, attempt), w.len())
        };
        let outcome = realize_braid(w, &lay).and_then(|g| enumerate_trisecants(&g).map(|ev| (g, ev)));
        match outcome {
            Ok((geometry, events)) => {
                return Ok(Realization { word: w.clone(), layout: lay, geometry, events, retries: attempt })
            }
            Err(e @ (Error::Genericity(_) | Error::DegenerateLayout(_))) => last = e.to_string(),
            Err(e) => return Err(e),
        }
    }
    Err(Error::GenericityExhausted { attempts: retries + 1, last })
}

/// Realization on the jittered parabola for `seed`; seed 0 is the plain
/// parabola with detour 1/4.
pub fn realize_generic(w: &BraidWord, seed: u64, retries: usize) -> Result<Realization> {
    let base = LayoutParams::<Rational>::parabola(w.strands());
    let layout = if seed == 0 { base } else { base.jittered(seed, w.len()) };
    perturb_and_retry(w, &layout, seed, retries)
}

/// Sign of a determinant's derivative at a root, used as an independent route
/// to the event sign: for `f(s) = det(B − A, C − A)` with roles `(a, b, c)`,
/// `sign(f'(s*))` equals the event sign.
pub fn sign_by_derivative(
    g: &GeometricBraid<Rational>,
    e: &TrisecantEvent,
) -> Ordering {
    let (a, b, c) = e.triple;
    let (c2, c1, _) = collinearity_poly(g, e.piece, (a, b, c));
    let (t0, t1) = g.piece_span(e.piece);
    let s = (e.time.clone() - EventTime::from_ratio(t0)).mul_ratio(&(Rational::from_integer(1.into()) / (t1 - t0)));
    let two = Rational::from_integer(2.into());
    s.mul_ratio(&(c2 * two)).add_ratio(&c1).signum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_braid_word;
    use crate::geometry::InitialLayout;
    use num_traits::Zero;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn events(text: &str) -> Vec<TrisecantEvent> {
        let w = parse_braid_word(text).unwrap();
        let g = realize_braid(&w, &LayoutParams::parabola(w.strands())).unwrap();
        enumerate_trisecants(&g).unwrap()
    }

    #[test]
    fn small_cases() {
        assert!(events("2: 1").is_empty());
        assert!(events("3:").is_empty());
        assert!(!events("3: 1").is_empty());
    }

    #[test]
    fn events_are_exact_and_between() {
        for text in ["3: 1", "3: 1 2 1", "4: 1 -2 3 2", "5: 2 4 -1 3"] {
            let w = parse_braid_word(text).unwrap();
            let g = realize_braid(&w, &LayoutParams::parabola(w.strands())).unwrap();
            let ev = enumerate_trisecants(&g).unwrap();
            assert!(ev.windows(2).all(|p| p[0].time < p[1].time));
            for e in &ev {
                let (t0, t1) = g.piece_span(e.piece);
                let s = (e.time.clone() - EventTime::from_ratio(t0))
                    .mul_ratio(&(r(1, 1) / (t1 - t0)));
                let pts = positions_at(&g, e.piece, &s);
                let (a, b, c) = e.triple;
                let ab = pts[b].sub(&pts[a]);
                let ac = pts[c].sub(&pts[a]);
                assert!(ab.cross(&ac).is_zero(), "{e}");
                let lambda_num = ab.dot(&ac);
                let len = ac.dot(&ac);
                assert!(lambda_num > EventTime::from_ratio(&r(0, 1)));
                assert!(lambda_num < len);
                assert_eq!(sign_by_derivative(&g, e), if e.sign == Sign::Pos {
                    Ordering::Greater
                } else {
                    Ordering::Less
                });
            }
        }
    }

    #[test]
    fn dump_round_trip() {
        for e in events("4: 1 2 -3 1") {
            let line = e.to_string();
            assert_eq!(parse_event_line(&line).unwrap(), e, "{line}");
        }
    }

    #[test]
    fn duplicated_time_is_reported() {
        let w = parse_braid_word("3: 1").unwrap();
        let g = realize_braid(&w, &LayoutParams::parabola(3)).unwrap();
        let mut ev = enumerate_trisecants(&g).unwrap();
        assert!(check_genericity(&g, &ev).passed());
        let mut dup = ev[0].clone();
        dup.triple = (dup.triple.2, dup.triple.0, dup.triple.1);
        ev.push(dup);
        let rep = check_genericity(&g, &ev);
        assert!(rep.violations.iter().any(|v| v.to_string().starts_with("equal-time")));
    }

    #[test]
    fn handcrafted_quadrisecant() {
        // strand 0 sweeps across the line y = 0 carrying strands 1, 2, 3
        let p = |x: i64, y: i64| Point2::new(r(x, 1), r(y, 1));
        let start = vec![p(0, -1), p(-2, 0), p(1, 0), p(3, 0)];
        let end = vec![p(0, 1), p(-2, 0), p(1, 0), p(3, 0)];
        let g = GeometricBraid::from_breakpoints(vec![r(0, 1), r(1, 1)], vec![start, end]).unwrap();
        // the stationary three are collinear throughout
        let (ev, bad) = raw_trisecants(&g);
        assert!(bad.iter().any(|v| matches!(v, GenericityViolation::PersistentCollinear { .. })));
        let rep = check_genericity(&g, &ev);
        assert!(rep.violations.iter().any(|v| v.to_string().starts_with("quadrisecant")), "{rep:?}");
    }

    #[test]
    fn handcrafted_quadrisecant_mid_piece() {
        // two pairs cross at the same instant along the x-axis
        let p = |x: i64, y: i64| Point2::new(r(x, 1), r(y, 1));
        let start = vec![p(-3, -1), p(-1, 1), p(1, -1), p(3, 1)];
        let end = vec![p(-3, 1), p(-1, -1), p(1, 1), p(3, -1)];
        let g = GeometricBraid::from_breakpoints(vec![r(0, 1), r(1, 1)], vec![start, end]).unwrap();
        let (ev, _) = raw_trisecants(&g);
        let rep = check_genericity(&g, &ev);
        assert!(rep.violations.iter().any(|v| v.to_string().starts_with("quadrisecant")), "{rep:?}");
        assert!(enumerate_trisecants(&g).is_err());
    }

    #[test]
    fn retries_rescue_degenerate_layout() {
        let w = parse_braid_word("3: 1").unwrap();
        let collinear = LayoutParams {
            initial: InitialLayout::Points(vec![
                Point2::new(r(0, 1), r(0, 1)),
                Point2::new(r(1, 1), r(1, 1)),
                Point2::new(r(2, 1), r(2, 1)),
            ]),
            detours: vec![r(1, 4)],
        };
        let ok = perturb_and_retry(&w, &collinear, 1, 1).unwrap();
        assert_eq!(ok.retries, 1);
        assert!(check_genericity(&ok.geometry, &ok.events).passed());
        assert!(matches!(
            perturb_and_retry(&w, &collinear, 1, 0),
            Err(Error::GenericityExhausted { .. })
        ));
        let id = parse_braid_word("4:").unwrap();
        for seed in 0..5 {
            assert_eq!(realize_generic(&id, seed, 0).unwrap().retries, 0);
        }
    }
}
