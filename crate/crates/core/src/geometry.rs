//! Piecewise-linear realizations of braid words as motions of planar points.

use std::ops::Div;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::exact::{Point2, Scalar};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn times(self, o: Sign) -> Sign {
        if self == o {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Pos => "+1",
            Sign::Neg => "-1",
        })
    }
}

/// Sign of `det(AC, Oz, (v, 1))` for a horizontal secant `AC` and a middle
/// strand moving with planar velocity `v`.
///
/// Cofactor expansion along the `Oz = (0, 0, 1)` row leaves
/// `AC.y * v.x - AC.x * v.y`.
///
/// The trisecant pipeline passes `v` relative to the point of `AC` the middle
/// strand meets, which makes this the intersection sign of the strand with the
/// ruled surface swept by `AC`.
pub fn event_sign<T: Scalar>(ac: &Point2<T>, velocity: &Point2<T>) -> Result<Sign> {
    let v = ac.y.clone() * velocity.x.clone() - ac.x.clone() * velocity.y.clone();
    if v > T::zero() {
        Ok(Sign::Pos)
    } else if v < T::zero() {
        Ok(Sign::Neg)
    } else {
        Err(Error::Tangency)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialLayout<T> {
    /// Points `(x, x²)` for strictly increasing abscissas.
    Parabola(Vec<T>),
    Points(Vec<Point2<T>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LayoutParams<T> {
    pub initial: InitialLayout<T>,
    /// Detour offsets as a fraction of the swapped slots' distance; letter `k`
    /// uses entry `k % len`.
    pub detours: Vec<T>,
}

impl<T: Scalar + FromPrimitive + Div<Output = T>> LayoutParams<T> {
    /// Slots at `(k, k²)`, `k = 1..=n`, detour 1/4.
    pub fn parabola(n: usize) -> Self {
        Self {
            initial: InitialLayout::Parabola(
                (1..=n).map(|k| T::from_usize(k).expect("small integer")).collect(),
            ),
            detours: vec![T::one() / T::from_u8(4).unwrap()],
        }
    }

    pub fn points(&self) -> Vec<Point2<T>> {
        match &self.initial {
            InitialLayout::Parabola(xs) => {
                xs.iter().map(|x| Point2::new(x.clone(), x.clone() * x.clone())).collect()
            }
            InitialLayout::Points(ps) => ps.clone(),
        }
    }

    pub fn detour(&self, letter: usize) -> T {
        self.detours[letter % self.detours.len()].clone()
    }
}

fn jitter(rng: &mut ChaCha8Rng, scale: &Rational) -> Rational {
    // uniform in [-scale, scale] on a 1/4096 grid
    let k: i64 = rng.gen_range(-4096..=4096);
    scale * Rational::new(BigInt::from(k), BigInt::from(4096))
}

impl LayoutParams<Rational> {
    /// A small deterministic perturbation keyed by `seed`.
    ///
    /// Parabola abscissas move by at most 1/8 of the smallest gap; explicit
    /// points by 1/16 of the smallest coordinate gap; detours by ±1/8 relative.
    /// One detour per letter of a word of length `letters` is emitted.
    pub fn jittered(&self, seed: u64, letters: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let initial = match &self.initial {
            InitialLayout::Parabola(xs) => {
                let gap = xs
                    .windows(2)
                    .map(|w| &w[1] - &w[0])
                    .min()
                    .unwrap_or_else(|| Rational::from_integer(1.into()));
                let scale = gap / Rational::from_integer(8.into());
                InitialLayout::Parabola(xs.iter().map(|x| x + jitter(&mut rng, &scale)).collect())
            }
            InitialLayout::Points(ps) => {
                let mut gap: Option<Rational> = None;
                for (i, a) in ps.iter().enumerate() {
                    for b in &ps[i + 1..] {
                        for d in [(&a.x - &b.x).abs(), (&a.y - &b.y).abs()] {
                            if d.is_positive() && gap.as_ref().is_none_or(|g| d < *g) {
                                gap = Some(d);
                            }
                        }
                    }
                }
                let scale = gap.unwrap_or_else(|| Rational::from_integer(1.into()))
                    / Rational::from_integer(16.into());
                InitialLayout::Points(
                    ps.iter()
                        .map(|p| {
                            Point2::new(&p.x + jitter(&mut rng, &scale), &p.y + jitter(&mut rng, &scale))
                        })
                        .collect(),
                )
            }
        };
        let eighth = Rational::new(1.into(), 8.into());
        let detours = (0..letters.max(1))
            .map(|k| {
                let base = self.detour(k);
                let rel = jitter(&mut rng, &eighth);
                &base + &base * rel
            })
            .collect();
        Self { initial, detours }
    }
}

/// Strands moving linearly between global breakpoints.
///
/// `times[k]` is the `k`-th breakpoint and `positions[k][s]` the position of
/// strand `s` there; piece `k` spans `[times[k], times[k+1]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometricBraid<T> {
    strands: usize,
    times: Vec<T>,
    positions: Vec<Vec<Point2<T>>>,
    /// Letter index of each piece, `None` for the constant piece of an empty word.
    piece_letter: Vec<Option<usize>>,
}

impl<T: Scalar> GeometricBraid<T> {
    /// Builds a braid from explicit breakpoints, checking monotone times and
    /// that no two strands ever coincide.
    pub fn from_breakpoints(times: Vec<T>, positions: Vec<Vec<Point2<T>>>) -> Result<Self>
    where
        T: Div<Output = T>,
    {
        if times.len() < 2 || positions.len() != times.len() {
            return Err(Error::DegenerateLayout("need at least one piece".into()));
        }
        let strands = positions[0].len();
        if positions.iter().any(|row| row.len() != strands) {
            return Err(Error::DegenerateLayout("ragged position table".into()));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::DegenerateLayout("breakpoints must increase".into()));
        }
        let pieces = times.len() - 1;
        let g = Self { strands, times, positions, piece_letter: vec![None; pieces] };
        g.check_no_coincidence()?;
        Ok(g)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn piece_count(&self) -> usize {
        self.times.len() - 1
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.times
    }

    pub fn piece_span(&self, k: usize) -> (&T, &T) {
        (&self.times[k], &self.times[k + 1])
    }

    pub fn piece_letter(&self, k: usize) -> Option<usize> {
        self.piece_letter[k]
    }

    pub fn start_of_piece(&self, k: usize) -> &[Point2<T>] {
        &self.positions[k]
    }

    pub fn end_of_piece(&self, k: usize) -> &[Point2<T>] {
        &self.positions[k + 1]
    }

    /// Displacement of every strand over piece `k`.
    pub fn piece_delta(&self, k: usize) -> Vec<Point2<T>> {
        self.positions[k + 1]
            .iter()
            .zip(&self.positions[k])
            .map(|(b, a)| b.sub(a))
            .collect()
    }

    pub fn initial_positions(&self) -> &[Point2<T>] {
        &self.positions[0]
    }

    pub fn final_positions(&self) -> &[Point2<T>] {
        self.positions.last().expect("nonempty")
    }

    /// `(time, position)` breakpoints of one strand.
    pub fn strand_path(&self, s: usize) -> Vec<(T, Point2<T>)> {
        self.times
            .iter()
            .zip(&self.positions)
            .map(|(t, row)| (t.clone(), row[s].clone()))
            .collect()
    }

    /// Position of strand `s` at local parameter `u ∈ [0, 1]` of piece `k`.
    pub fn position_in_piece(&self, k: usize, s: usize, u: &T) -> Point2<T> {
        let a = &self.positions[k][s];
        let b = &self.positions[k + 1][s];
        a.add(&b.sub(a).scale(u))
    }

    fn check_no_coincidence(&self) -> Result<()>
    where
        T: Div<Output = T>,
    {
        for k in 0..self.piece_count() {
            let delta = self.piece_delta(k);
            for i in 0..self.strands {
                for j in i + 1..self.strands {
                    let d0 = self.positions[k][i].sub(&self.positions[k][j]);
                    let d1 = delta[i].sub(&delta[j]);
                    if coincide_on_unit_interval(&d0, &d1) {
                        return Err(Error::DegenerateLayout(format!(
                            "strands {} and {} coincide during piece {k}",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Whether `d0 + u d1 = 0` for some `u ∈ [0, 1]`.
fn coincide_on_unit_interval<T: Scalar + Div<Output = T>>(d0: &Point2<T>, d1: &Point2<T>) -> bool {
    if d1.is_zero() {
        return d0.is_zero();
    }
    // d0 and d1 must be parallel with u = -d0/d1 in range
    if !d0.cross(d1).is_zero() {
        return false;
    }
    let u = if !d1.x.is_zero() {
        -(d0.x.clone()) / d1.x.clone()
    } else {
        -(d0.y.clone()) / d1.y.clone()
    };
    u >= T::zero() && u <= T::one()
}

fn check_initial_layout<T: Scalar>(pts: &[Point2<T>]) -> Result<()> {
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            if pts[i] == pts[j] {
                return Err(Error::DegenerateLayout(format!(
                    "slots {} and {} coincide",
                    i + 1,
                    j + 1
                )));
            }
            for k in j + 1..n {
                if pts[j].sub(&pts[i]).cross(&pts[k].sub(&pts[i])).is_zero() {
                    return Err(Error::DegenerateLayout(format!(
                        "slots {}, {}, {} are collinear",
                        i + 1,
                        j + 1,
                        k + 1
                    )));
                }
            }
        }
    }
    // convex position: no slot inside a triangle of three others
    for p in 0..n {
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if [i, j, k].contains(&p) {
                        continue;
                    }
                    let s1 = pts[j].sub(&pts[i]).cross(&pts[p].sub(&pts[i]));
                    let s2 = pts[k].sub(&pts[j]).cross(&pts[p].sub(&pts[j]));
                    let s3 = pts[i].sub(&pts[k]).cross(&pts[p].sub(&pts[k]));
                    let z = T::zero();
                    let inside = (s1 > z && s2 > z && s3 > z) || (s1 < z && s2 < z && s3 < z);
                    if inside {
                        return Err(Error::DegenerateLayout(format!(
                            "slot {} is not in convex position",
                            p + 1
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Realizes `w` on the given layout.
///
/// Letter `k` of `L` occupies the slab `[k/L, (k+1)/L]`, split at its midpoint.
/// For `σ_i^{±1}` with slots `P`, `Q` and midpoint `M`, the strand at `P`
/// travels `P → M ± ε·rot(Q − P) → Q` and its partner the point-reflected
/// path through `M`, where `rot(x, y) = (y, -x)`; with slots in
/// counterclockwise convex order, `+` is a counterclockwise half-turn.
pub fn realize_braid<T>(w: &BraidWord, layout: &LayoutParams<T>) -> Result<GeometricBraid<T>>
where
    T: Scalar + FromPrimitive + Div<Output = T>,
{
    let n = w.strands();
    let slots = layout.points();
    if slots.len() != n {
        return Err(Error::DegenerateLayout(format!(
            "layout has {} slots for {n} strands",
            slots.len()
        )));
    }
    if let InitialLayout::Parabola(xs) = &layout.initial {
        if xs.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::DegenerateLayout("abscissas must increase".into()));
        }
    }
    check_initial_layout(&slots)?;
    if layout.detours.is_empty() || layout.detours.iter().any(|e| *e <= T::zero()) {
        return Err(Error::DegenerateLayout("detours must be positive".into()));
    }

    let len = w.len();
    if len == 0 {
        let g = GeometricBraid {
            strands: n,
            times: vec![T::zero(), T::one()],
            positions: vec![slots.clone(), slots],
            piece_letter: vec![None],
        };
        return Ok(g);
    }

    let total = T::from_usize(2 * len).expect("small integer");
    let mut times = Vec::with_capacity(2 * len + 1);
    let mut positions = Vec::with_capacity(2 * len + 1);
    let mut piece_letter = Vec::with_capacity(2 * len);
    // occupant[slot] = strand
    let mut occupant: Vec<usize> = (0..n).collect();
    let place = |occ: &[usize]| {
        let mut row = vec![Point2::zero(); n];
        for (slot, &s) in occ.iter().enumerate() {
            row[s] = slots[slot].clone();
        }
        row
    };
    times.push(T::zero());
    positions.push(place(&occupant));

    let half = T::one() / T::from_u8(2).unwrap();
    for (k, &g) in w.letters().iter().enumerate() {
        let i = g.unsigned_abs() as usize - 1;
        let (p, q) = (&slots[i], &slots[i + 1]);
        let d = q.sub(p);
        let mid = p.add(q).scale(&half);
        let mut off = Point2::new(d.y.clone(), -d.x.clone()).scale(&layout.detour(k));
        if g < 0 {
            off = off.scale(&-T::one());
        }
        let (a, b) = (occupant[i], occupant[i + 1]);
        let mut row = positions.last().cloned().expect("nonempty");
        row[a] = mid.add(&off);
        row[b] = mid.sub(&off);
        times.push(T::from_usize(2 * k + 1).unwrap() / total.clone());
        positions.push(row);
        piece_letter.push(Some(k));

        occupant.swap(i, i + 1);
        times.push(T::from_usize(2 * k + 2).unwrap() / total.clone());
        positions.push(place(&occupant));
        piece_letter.push(Some(k));
    }
    let g = GeometricBraid { strands: n, times, positions, piece_letter };
    g.check_no_coincidence()?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_braid_word;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn det3(m: [[Rational; 3]; 3]) -> Rational {
        let minor = |a: &Rational, b: &Rational, c: &Rational, d: &Rational| a * d - b * c;
        &m[0][0] * minor(&m[1][1], &m[1][2], &m[2][1], &m[2][2])
            - &m[0][1] * minor(&m[1][0], &m[1][2], &m[2][0], &m[2][2])
            + &m[0][2] * minor(&m[1][0], &m[1][1], &m[2][0], &m[2][1])
    }

    fn sign_by_3x3(ac: (i64, i64), v: (i64, i64)) -> i8 {
        let z = r(0, 1);
        let one = r(1, 1);
        let d = det3([
            [r(ac.0, 1), r(ac.1, 1), z.clone()],
            [z.clone(), z.clone(), one.clone()],
            [r(v.0, 1), r(v.1, 1), one],
        ]);
        if d.is_positive() {
            1
        } else if d.is_negative() {
            -1
        } else {
            0
        }
    }

    #[test]
    fn event_sign_examples_match_direct_determinant() {
        let cases = [((1, 0), (0, 1), -1), ((1, 0), (0, -1), 1), ((0, 2), (3, 0), 1)];
        for (ac, v, expect) in cases {
            assert_eq!(sign_by_3x3(ac, v), expect);
            let s = event_sign(
                &Point2::new(r(ac.0, 1), r(ac.1, 1)),
                &Point2::new(r(v.0, 1), r(v.1, 1)),
            )
            .unwrap();
            assert_eq!(s.as_i8(), expect);
        }
    }

    #[test]
    fn event_sign_reduction_matches_3x3_everywhere() {
        for ax in -3..=3 {
            for ay in -3..=3 {
                for vx in -3..=3 {
                    for vy in -3..=3 {
                        if ax == 0 && ay == 0 {
                            continue;
                        }
                        let direct = sign_by_3x3((ax, ay), (vx, vy));
                        let reduced = event_sign(
                            &Point2::new(r(ax, 1), r(ay, 1)),
                            &Point2::new(r(vx, 1), r(vy, 1)),
                        );
                        match reduced {
                            Ok(s) => assert_eq!(s.as_i8(), direct),
                            Err(Error::Tangency) => assert_eq!(direct, 0),
                            Err(e) => panic!("{e}"),
                        }
                    }
                }
            }
        }
        // also generic over f64
        assert_eq!(event_sign(&Point2::new(1.0, 0.0), &Point2::new(0.0, 1.0)).unwrap(), Sign::Neg);
    }

    #[test]
    fn identity_is_constant() {
        let w = parse_braid_word("3:").unwrap();
        let g = realize_braid(&w, &LayoutParams::<Rational>::parabola(3)).unwrap();
        assert_eq!(g.piece_count(), 1);
        assert!(g.piece_delta(0).iter().all(Point2::is_zero));
        assert_eq!(g.piece_letter(0), None);
    }

    #[test]
    fn single_letter_detours_through_opposite_offsets() {
        let w = parse_braid_word("2: 1").unwrap();
        let g = realize_braid(&w, &LayoutParams::<Rational>::parabola(2)).unwrap();
        assert_eq!(g.piece_count(), 2);
        assert_eq!(g.breakpoints(), &[r(0, 1), r(1, 2), r(1, 1)]);
        // P = (1,1), Q = (2,4), M = (3/2, 5/2), rot(Q-P) = (3,-1), ε = 1/4
        let mid = g.end_of_piece(0);
        assert_eq!(mid[0], Point2::new(r(9, 4), r(9, 4)));
        assert_eq!(mid[1], Point2::new(r(3, 4), r(11, 4)));
        // counterclockwise about M: (P - M) × (X - M) > 0
        let m = Point2::new(r(3, 2), r(5, 2));
        let p = Point2::new(r(1, 1), r(1, 1));
        assert!(p.sub(&m).cross(&mid[0].sub(&m)).is_positive());
        assert_eq!(g.final_positions()[0], Point2::new(r(2, 1), r(4, 1)));
    }

    #[test]
    fn endpoints_follow_the_permutation() {
        let w = parse_braid_word("3: 1").unwrap();
        let g = realize_braid(&w, &LayoutParams::<Rational>::parabola(3)).unwrap();
        let init = g.initial_positions().to_vec();
        let fin = g.final_positions();
        assert_eq!(fin[0], init[1]);
        assert_eq!(fin[1], init[0]);
        assert_eq!(fin[2], init[2]);

        let w = parse_braid_word("4: 1 2 -3 2 1").unwrap();
        let g = realize_braid(&w, &LayoutParams::<Rational>::parabola(4)).unwrap();
        let perm = w.permutation();
        for (slot, &s) in perm.iter().enumerate() {
            assert_eq!(g.final_positions()[s], g.initial_positions()[slot]);
        }
    }

    #[test]
    fn degenerate_layouts_rejected() {
        let w = parse_braid_word("3: 1").unwrap();
        let collinear = LayoutParams {
            initial: InitialLayout::Points(vec![
                Point2::new(r(0, 1), r(0, 1)),
                Point2::new(r(1, 1), r(1, 1)),
                Point2::new(r(2, 1), r(2, 1)),
            ]),
            detours: vec![r(1, 4)],
        };
        assert!(matches!(realize_braid(&w, &collinear), Err(Error::DegenerateLayout(_))));
        let nonconvex = LayoutParams {
            initial: InitialLayout::Points(vec![
                Point2::new(r(0, 1), r(0, 1)),
                Point2::new(r(4, 1), r(0, 1)),
                Point2::new(r(0, 1), r(4, 1)),
                Point2::new(r(1, 1), r(1, 1)),
            ]),
            detours: vec![r(1, 4)],
        };
        let w4 = parse_braid_word("4:").unwrap();
        assert!(matches!(realize_braid(&w4, &nonconvex), Err(Error::DegenerateLayout(_))));
    }

    #[test]
    fn jitter_is_deterministic_and_small() {
        let base = LayoutParams::<Rational>::parabola(4);
        let a = base.jittered(7, 3);
        assert_eq!(a, base.jittered(7, 3));
        assert_ne!(a, base.jittered(8, 3));
        let InitialLayout::Parabola(xs) = &a.initial else { panic!() };
        for (k, x) in xs.iter().enumerate() {
            let d = (x - r(k as i64 + 1, 1)).abs();
            assert!(d <= r(1, 8));
        }
        assert_eq!(a.detours.len(), 3);
    }

    #[test]
    fn realization_is_generic_over_f64() {
        let w = parse_braid_word("3: 1 -2").unwrap();
        let g = realize_braid(&w, &LayoutParams::<f64>::parabola(3)).unwrap();
        assert_eq!(g.piece_count(), 4);
        assert_eq!(g.final_positions()[0], Point2::new(3.0, 9.0));
    }
}
