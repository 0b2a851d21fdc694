#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use secant_quandle::exact::Quad2Real;
use secant_quandle::trisecant::Realization;
use secant_quandle::{Rational, Sign};

pub const SAMPLES: i128 = 10_000;

/// An event seen by dense sampling: a sign change of the orientation of a
/// triple between samples `m - 1` and `m` (or an exact zero at `m`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sampled {
    pub piece: usize,
    pub sample: i128,
    pub exact_zero: bool,
    pub triple: (usize, usize, usize),
    pub sign: Sign,
}

fn to_i128(x: &BigInt) -> i128 {
    x.to_i128().expect("coordinate fits in i128")
}

/// Scales a piece to integer coordinates: returns `D·start` and `D·(end - start)`.
fn integer_piece(start: &[secant_quandle::RationalPoint], end: &[secant_quandle::RationalPoint]) -> (Vec<(i128, i128)>, Vec<(i128, i128)>) {
    let mut d = BigInt::one();
    for p in start.iter().chain(end) {
        d = d.lcm(p.x.denom()).lcm(p.y.denom());
    }
    let dr = Rational::from_integer(d);
    let scale = |v: &Rational| to_i128(&(v * &dr).to_integer());
    let s: Vec<_> = start.iter().map(|p| (scale(&p.x), scale(&p.y))).collect();
    let e: Vec<_> = end.iter().map(|p| (scale(&p.x), scale(&p.y))).collect();
    let v = s.iter().zip(&e).map(|(a, b)| (b.0 - a.0, b.1 - a.1)).collect();
    (s, v)
}

fn big(p: (i128, i128)) -> (BigInt, BigInt) {
    (p.0.into(), p.1.into())
}

fn det(a: (i128, i128), b: (i128, i128), c: (i128, i128)) -> i128 {
    let fast = || {
        let (bx, by) = (b.0.checked_sub(a.0)?, b.1.checked_sub(a.1)?);
        let (cx, cy) = (c.0.checked_sub(a.0)?, c.1.checked_sub(a.1)?);
        bx.checked_mul(cy)?.checked_sub(by.checked_mul(cx)?)
    };
    fast().map(i128::signum).unwrap_or_else(|| {
        let (a, b, c) = (big(a), big(b), big(c));
        let d = (&b.0 - &a.0) * (&c.1 - &a.1) - (&b.1 - &a.1) * (&c.0 - &a.0);
        d.signum().to_i128().unwrap()
    })
}

/// Compares squared distances `|a - b|²` and `|c - d|²`.
fn cmp_dist(a: (i128, i128), b: (i128, i128), c: (i128, i128), d: (i128, i128)) -> std::cmp::Ordering {
    let sq = |p: (i128, i128), q: (i128, i128)| {
        let (p, q) = (big(p), big(q));
        (&p.0 - &q.0).pow(2) + (&p.1 - &q.1).pow(2)
    };
    sq(a, b).cmp(&sq(c, d))
}

/// Every sign change of every triple's orientation at `SAMPLES` steps per piece.
pub fn sample_events(r: &Realization) -> Vec<Sampled> {
    let g = &r.geometry;
    let n = g.strands();
    let mut out = Vec::new();
    for k in 0..g.piece_count() {
        let (s, v) = integer_piece(g.start_of_piece(k), g.end_of_piece(k));
        let at = |i: usize, m: i128| (SAMPLES * s[i].0 + m * v[i].0, SAMPLES * s[i].1 + m * v[i].1);
        for i in 0..n {
            for j in i + 1..n {
                for l in j + 1..n {
                    let mut prev = det(at(i, 0), at(j, 0), at(l, 0)).signum();
                    assert_ne!(prev, 0, "collinear at piece start");
                    for m in 1..=SAMPLES {
                        let (a, b, c) = (at(i, m), at(j, m), at(l, m));
                        let cur = det(a, b, c).signum();
                        if cur == prev || (cur == 0 && m == SAMPLES) {
                            continue;
                        }
                        let exact_zero = cur == 0;
                        // middle: the point outside the farthest pair
                        use std::cmp::Ordering::Less;
                        let middle = if cmp_dist(a, c, a, b) != Less && cmp_dist(a, c, b, c) != Less {
                            j
                        } else if cmp_dist(a, b, b, c) != Less {
                            l
                        } else {
                            i
                        };
                        let (lo, hi) = match middle {
                            x if x == i => (j, l),
                            x if x == j => (i, l),
                            _ => (i, j),
                        };
                        // orientation in role order (lo, middle, hi) differs from (i, j, l) by a transposition unless j is the middle
                        let parity = if middle == j { 1 } else { -1 };
                        let rising = if exact_zero {
                            let next = det(at(i, m + 1), at(j, m + 1), at(l, m + 1)).signum();
                            next > prev
                        } else {
                            cur > prev
                        };
                        let sign = if rising == (parity > 0) { Sign::Pos } else { Sign::Neg };
                        out.push(Sampled { piece: k, sample: m, exact_zero, triple: (lo, middle, hi), sign });
                        prev = if exact_zero { -prev } else { cur };
                    }
                }
            }
        }
    }
    out.sort_by_key(|e| (e.piece, e.sample));
    out
}

/// Compares enumerated events against the sampling oracle: count, piece,
/// triple, sign, sampling interval and time order.
pub fn oracle_agrees(r: &Realization) -> std::result::Result<(), String> {
    let sampled = sample_events(r);
    if sampled.len() != r.events.len() {
        return Err(format!("[{}]: {} events, oracle {}", r.word, r.events.len(), sampled.len()));
    }
    let g = &r.geometry;
    let mut used = vec![false; sampled.len()];
    let mut last_key = (0usize, 0i128);
    for e in &r.events {
        let (t0, t1) = g.piece_span(e.piece);
        let span = t1 - t0;
        let local = |m: i128| Quad2Real::from_ratio(&(t0 + &span * Rational::new(m.into(), SAMPLES.into())));
        let found = sampled.iter().enumerate().find(|(x, s)| {
            !used[*x]
                && s.piece == e.piece
                && s.triple == e.triple
                && if s.exact_zero { e.time == local(s.sample) } else { local(s.sample - 1) < e.time && e.time < local(s.sample) }
        });
        let Some((x, s)) = found else {
            return Err(format!("[{}]: no oracle match for {e}", r.word));
        };
        if s.sign != e.sign {
            return Err(format!("[{}]: sign {} vs oracle {} for {e}", r.word, e.sign, s.sign));
        }
        let key = (s.piece, s.sample);
        if key < last_key {
            return Err(format!("[{}]: order differs at {e}", r.word));
        }
        last_key = key;
        used[x] = true;
    }
    Ok(())
}

/// Smallest local-time gap between two events of one strand set in one piece.
pub fn min_root_gap(r: &Realization) -> f64 {
    let set = |t: (usize, usize, usize)| {
        let mut v = [t.0, t.1, t.2];
        v.sort_unstable();
        v
    };
    let mut gap = f64::INFINITY;
    for (x, a) in r.events.iter().enumerate() {
        for b in &r.events[x + 1..] {
            if a.piece == b.piece && set(a.triple) == set(b.triple) {
                let (t0, t1) = r.geometry.piece_span(a.piece);
                let span = (t1 - t0).to_f64().unwrap_or(1.0);
                gap = gap.min((b.time.to_f64() - a.time.to_f64()).abs() / span);
            }
        }
    }
    gap
}
