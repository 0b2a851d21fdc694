//! Scalars, planar points and exact quadratic irrationals.
//!
//! [`Scalar`] is the ring interface the geometry is written against; it is
//! satisfied by `f64`, exact rationals and [`Quad2Real`] values sharing a
//! radicand. Event times live in `Q(√d)` and compare exactly across radicands.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub trait Scalar:
    Clone + PartialOrd + Zero + One + Neg<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone + PartialOrd + Zero + One + Neg<Output = T> + Sub<Output = T> + Mul<Output = T>
{
}

/// Integer types usable as coefficients of [`Quad2Real`].
pub trait ExactInt: Integer + Signed + Clone + Roots + From<u8> + fmt::Display {}

impl<T> ExactInt for T where T: Integer + Signed + Clone + Roots + From<u8> + fmt::Display {}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }
}

impl<T: Scalar> Point2<T> {
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.x.clone() + o.x.clone(), self.y.clone() + o.y.clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.x.clone() - o.x.clone(), self.y.clone() - o.y.clone())
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.x.clone() * k.clone(), self.y.clone() * k.clone())
    }

    /// `self.x * o.y - self.y * o.x`
    pub fn cross(&self, o: &Self) -> T {
        self.x.clone() * o.y.clone() - self.y.clone() * o.x.clone()
    }

    pub fn dot(&self, o: &Self) -> T {
        self.x.clone() * o.x.clone() + self.y.clone() * o.y.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Point2<U> {
        Point2::new(f(&self.x), f(&self.y))
    }
}

impl<T: fmt::Display> fmt::Display for Point2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Sign of `a + b√d` for integers, `d ≥ 0`.
pub fn sign_of_surd<I: ExactInt>(a: &I, b: &I, d: &I) -> Ordering {
    let sa = a.cmp(&I::zero());
    let sb = if d.is_zero() { Ordering::Equal } else { b.cmp(&I::zero()) };
    match (sa, sb) {
        (s, Ordering::Equal) => s,
        (Ordering::Equal, s) => s,
        (x, y) if x == y => x,
        _ => {
            let diff = a.clone() * a.clone() - b.clone() * b.clone() * d.clone();
            match diff.cmp(&I::zero()) {
                Ordering::Equal => Ordering::Equal,
                Ordering::Greater => sa,
                Ordering::Less => sb,
            }
        }
    }
}

/// Sign of `a + b√d1 + c√d2`.
pub fn sign_of_two_surds<I: ExactInt>(a: &I, b: &I, d1: &I, c: &I, d2: &I) -> Ordering {
    if d1 == d2 {
        return sign_of_surd(a, &(b.clone() + c.clone()), d1);
    }
    let s1 = sign_of_surd(a, b, d1);
    let s2 = if d2.is_zero() { Ordering::Equal } else { c.cmp(&I::zero()) };
    match (s1, s2) {
        (s, Ordering::Equal) => s,
        (Ordering::Equal, s) => s,
        (x, y) if x == y => x,
        _ => {
            // Compare |a + b√d1| with |c|√d2 by squaring both.
            let two = I::from(2u8);
            let ra = a.clone() * a.clone() + b.clone() * b.clone() * d1.clone()
                - c.clone() * c.clone() * d2.clone();
            let rb = two * a.clone() * b.clone();
            match sign_of_surd(&ra, &rb, d1) {
                Ordering::Equal => Ordering::Equal,
                Ordering::Greater => s1,
                Ordering::Less => s2,
            }
        }
    }
}

const SMALL_PRIMES_LIMIT: u32 = 2000;

fn small_primes() -> &'static [u32] {
    static PRIMES: std::sync::OnceLock<Vec<u32>> = std::sync::OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut sieve = vec![true; SMALL_PRIMES_LIMIT as usize + 1];
        let mut out = Vec::new();
        for p in 2..=SMALL_PRIMES_LIMIT as usize {
            if sieve[p] {
                out.push(p as u32);
                let mut k = p * p;
                while k <= SMALL_PRIMES_LIMIT as usize {
                    sieve[k] = false;
                    k += p;
                }
            }
        }
        out
    })
}

fn int_from_u32<I: ExactInt>(v: u32) -> I {
    let base = I::from(128u8) * I::from(2u8);
    let mut out = I::zero();
    for byte in v.to_be_bytes() {
        out = out * base.clone() + I::from(byte);
    }
    out
}

/// Splits `d ≥ 0` into `(k, d')` with `d = k² d'`.
///
/// Square factors are removed for primes below a fixed bound and for a
/// perfect-square cofactor; a square of a large prime times another large
/// prime can survive, which only affects the printed form (values compare
/// exactly regardless).
fn extract_square<I: ExactInt>(d: &I) -> (I, I) {
    if d.is_zero() {
        return (I::one(), I::zero());
    }
    let mut rest = d.clone();
    let mut k = I::one();
    for &p in small_primes() {
        let p = int_from_u32::<I>(p);
        let p2 = p.clone() * p.clone();
        if p2 > rest {
            break;
        }
        while (rest.clone() % p2.clone()).is_zero() {
            rest = rest / p2.clone();
            k = k * p.clone();
        }
    }
    let s = rest.sqrt();
    if s.clone() * s.clone() == rest {
        return (k * s, I::one());
    }
    (k, rest)
}

/// `(p + q√d) / r` with integer coefficients.
///
/// Invariants: `r > 0`, `gcd(p, q, r) = 1`, `d` square-free (up to the bound
/// in [`extract_square`]) and never a perfect square, `q = 0 ⇔ d = 0`.
#[derive(Clone, Debug)]
pub struct Quad2Real<I> {
    p: I,
    q: I,
    r: I,
    d: I,
}

impl<I: ExactInt> Quad2Real<I> {
    pub fn new(p: I, q: I, r: I, d: I) -> Self {
        assert!(!r.is_zero(), "zero denominator");
        assert!(!d.is_negative(), "negative radicand");
        let (k, d) = extract_square(&d);
        let (mut p, mut q) = (p, q * k);
        let mut d = d;
        if d.is_one() {
            p = p + q;
            q = I::zero();
        }
        if q.is_zero() {
            d = I::zero();
        }
        let (mut p, mut q, mut r) = if r.is_negative() { (-p, -q, -r) } else { (p, q, r) };
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() {
            p = p / g.clone();
            q = q / g.clone();
            r = r / g;
        }
        Self { p, q, r, d }
    }

    pub fn from_ratio(r: &Ratio<I>) -> Self {
        Self::new(r.numer().clone(), I::zero(), r.denom().clone(), I::zero())
    }

    /// `a + b√D` for rationals `a`, `b`, `D ≥ 0`.
    pub fn from_surd(a: &Ratio<I>, b: &Ratio<I>, disc: &Ratio<I>) -> Self {
        // √(n/m) = √(n m) / m
        let rad = disc.numer().clone() * disc.denom().clone();
        let b = b / Ratio::from_integer(disc.denom().clone());
        let den = a.denom().clone().lcm(b.denom());
        let p = a.numer().clone() * (den.clone() / a.denom().clone());
        let q = b.numer().clone() * (den.clone() / b.denom().clone());
        Self::new(p, q, den, rad)
    }

    pub fn p(&self) -> &I {
        &self.p
    }

    pub fn q(&self) -> &I {
        &self.q
    }

    pub fn r(&self) -> &I {
        &self.r
    }

    pub fn d(&self) -> &I {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn to_ratio(&self) -> Option<Ratio<I>> {
        self.is_rational()
            .then(|| Ratio::new(self.p.clone(), self.r.clone()))
    }

    pub fn signum(&self) -> Ordering {
        sign_of_surd(&self.p, &self.q, &self.d)
    }

    fn radicand_with(&self, o: &Self) -> I {
        if self.d.is_zero() {
            o.d.clone()
        } else if o.d.is_zero() || o.d == self.d {
            self.d.clone()
        } else {
            panic!("arithmetic across distinct radicands √{} and √{}", self.d, o.d)
        }
    }

    pub fn add_ratio(&self, a: &Ratio<I>) -> Self {
        self.clone() + Self::from_ratio(a)
    }

    pub fn mul_ratio(&self, a: &Ratio<I>) -> Self {
        self.clone() * Self::from_ratio(a)
    }

    pub fn to_f64(&self) -> f64
    where
        I: num_traits::ToPrimitive,
    {
        let f = |v: &I| v.to_f64().unwrap_or(f64::NAN);
        (f(&self.p) + f(&self.q) * f(&self.d).sqrt()) / f(&self.r)
    }
}

impl<I: ExactInt> PartialEq for Quad2Real<I> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<I: ExactInt> Eq for Quad2Real<I> {}

impl<I: ExactInt> PartialOrd for Quad2Real<I> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<I: ExactInt> Ord for Quad2Real<I> {
    fn cmp(&self, o: &Self) -> Ordering {
        // r1 r2 (x - y) = (p1 r2 - p2 r1) + q1 r2 √d1 - q2 r1 √d2
        let a = self.p.clone() * o.r.clone() - o.p.clone() * self.r.clone();
        let b = self.q.clone() * o.r.clone();
        let c = -(o.q.clone() * self.r.clone());
        sign_of_two_surds(&a, &b, &self.d, &c, &o.d)
    }
}

impl<I: ExactInt> Add for Quad2Real<I> {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        let d = self.radicand_with(&o);
        Self::new(
            self.p * o.r.clone() + o.p * self.r.clone(),
            self.q * o.r.clone() + o.q * self.r.clone(),
            self.r * o.r,
            d,
        )
    }
}

impl<I: ExactInt> Sub for Quad2Real<I> {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<I: ExactInt> Neg for Quad2Real<I> {
    type Output = Self;

    fn neg(self) -> Self {
        Self { p: -self.p, q: -self.q, r: self.r, d: self.d }
    }
}

impl<I: ExactInt> Mul for Quad2Real<I> {
    type Output = Self;

    fn mul(self, o: Self) -> Self {
        let d = self.radicand_with(&o);
        let p = self.p.clone() * o.p.clone() + self.q.clone() * o.q.clone() * d.clone();
        let q = self.p * o.q + self.q * o.p;
        Self::new(p, q, self.r * o.r, d)
    }
}

impl<I: ExactInt> Zero for Quad2Real<I> {
    fn zero() -> Self {
        Self { p: I::zero(), q: I::zero(), r: I::one(), d: I::zero() }
    }

    fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }
}

impl<I: ExactInt> One for Quad2Real<I> {
    fn one() -> Self {
        Self { p: I::one(), q: I::zero(), r: I::one(), d: I::zero() }
    }
}

impl<I: ExactInt> fmt::Display for Quad2Real<I> {
    /// `p/r` or `p/r+q*sqrt(d)/r`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.r)?;
        if !self.q.is_zero() {
            write!(f, "+{}*sqrt({})/{}", self.q, self.d, self.r)?;
        }
        Ok(())
    }
}

/// Real roots of `c2 s² + c1 s + c0` that lie in the closed interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootSet<I: ExactInt> {
    /// The polynomial vanishes identically.
    All,
    /// A double root.
    Double(Quad2Real<I>),
    /// Simple roots in increasing order.
    Simple(Vec<Quad2Real<I>>),
}

pub fn quadratic_roots<I: ExactInt>(
    c2: &Ratio<I>,
    c1: &Ratio<I>,
    c0: &Ratio<I>,
    lo: &Ratio<I>,
    hi: &Ratio<I>,
) -> RootSet<I> {
    let lo_q = Quad2Real::from_ratio(lo);
    let hi_q = Quad2Real::from_ratio(hi);
    let inside = |x: &Quad2Real<I>| *x >= lo_q && *x <= hi_q;
    if c2.is_zero() {
        if c1.is_zero() {
            return if c0.is_zero() { RootSet::All } else { RootSet::Simple(vec![]) };
        }
        let root = Quad2Real::from_ratio(&(-c0 / c1));
        return RootSet::Simple(if inside(&root) { vec![root] } else { vec![] });
    }
    let four = Ratio::from_integer(I::from(4u8));
    let two = Ratio::from_integer(I::from(2u8));
    let disc = c1 * c1 - four * c2 * c0;
    if disc.is_negative() {
        return RootSet::Simple(vec![]);
    }
    let a = -c1 / (two.clone() * c2);
    if disc.is_zero() {
        let root = Quad2Real::from_ratio(&a);
        return if inside(&root) { RootSet::Double(root) } else { RootSet::Simple(vec![]) };
    }
    let b = Ratio::one() / (two * c2);
    let mut roots = vec![
        Quad2Real::from_surd(&a, &b, &disc),
        Quad2Real::from_surd(&a, &-b, &disc),
    ];
    roots.sort();
    roots.retain(inside);
    RootSet::Simple(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type Q = Quad2Real<BigInt>;

    fn q(p: i64, qq: i64, r: i64, d: i64) -> Q {
        Q::new(p.into(), qq.into(), r.into(), d.into())
    }

    fn rat(n: i64, d: i64) -> Ratio<BigInt> {
        Ratio::new(n.into(), d.into())
    }

    #[test]
    fn normalizes() {
        let x = q(2, 2, 4, 8); // (2 + 2√8)/4 = (1 + 2√2)/2
        assert_eq!((x.p().clone(), x.q().clone(), x.r().clone(), x.d().clone()),
            (1.into(), 2.into(), 2.into(), 2.into()));
        let y = q(1, 1, 1, 9); // 1 + 3
        assert!(y.is_rational());
        assert_eq!(y.to_ratio(), Some(rat(4, 1)));
        let z = q(1, 1, -2, 3);
        assert!(z.r() > &BigInt::from(0));
        assert_eq!(z.to_string(), "-1/2+-1*sqrt(3)/2");
    }

    #[test]
    fn cross_radicand_comparison() {
        // √2 < 3/2 < √3
        let s2 = q(0, 1, 1, 2);
        let s3 = q(0, 1, 1, 3);
        let mid = q(3, 0, 2, 0);
        assert!(s2 < mid && mid < s3);
        // 1 + √2 vs √5 + 1/5: 2.414 vs 2.436
        assert!(q(1, 1, 1, 2) < q(1, 5, 5, 5));
        // √8 = 2√2
        assert_eq!(q(0, 1, 1, 8), q(0, 2, 1, 2));
    }

    #[test]
    fn roots_satisfy_polynomial() {
        // s² - s - 1/4 on [0,1]: roots (1 ± √2)/2, only (1 - √2)/2 < 0 is dropped.
        let (c2, c1, c0) = (rat(1, 1), rat(-1, 1), rat(-1, 4));
        let RootSet::Simple(roots) = quadratic_roots(&c2, &c1, &c0, &rat(-1, 1), &rat(2, 1)) else {
            panic!()
        };
        assert_eq!(roots.len(), 2);
        for r in roots {
            let v = r.clone() * r.clone() * Q::from_ratio(&c2)
                + r.clone() * Q::from_ratio(&c1)
                + Q::from_ratio(&c0);
            assert!(v.is_zero());
        }
    }

    #[test]
    fn double_and_degenerate_roots() {
        let r = quadratic_roots(&rat(1, 1), &rat(-1, 1), &rat(1, 4), &rat(0, 1), &rat(1, 1));
        assert_eq!(r, RootSet::Double(q(1, 0, 2, 0)));
        let z = rat(0, 1);
        assert_eq!(quadratic_roots(&z, &z, &z, &z, &rat(1, 1)), RootSet::All);
        assert_eq!(
            quadratic_roots(&z, &z, &rat(3, 1), &z, &rat(1, 1)),
            RootSet::Simple(vec![])
        );
    }

    proptest! {
        #[test]
        fn order_agrees_with_floats(
            a in -50i64..50, b in -50i64..50, r in 1i64..20, d in 0i64..30,
            a2 in -50i64..50, b2 in -50i64..50, r2 in 1i64..20, d2 in 0i64..30,
        ) {
            let x = q(a, b, r, d);
            let y = q(a2, b2, r2, d2);
            let (fx, fy) = (x.to_f64(), y.to_f64());
            if (fx - fy).abs() > 1e-9 {
                prop_assert_eq!(x.cmp(&y), fx.partial_cmp(&fy).unwrap());
            }
            prop_assert_eq!(x.cmp(&y), y.cmp(&x).reverse());
            prop_assert_eq!((x.clone() - x.clone()).signum(), Ordering::Equal);
        }

        #[test]
        fn field_ops_agree_with_floats(
            a in -30i64..30, b in -30i64..30, r in 1i64..10,
            a2 in -30i64..30, b2 in -30i64..30, r2 in 1i64..10, d in 2i64..12,
        ) {
            let x = q(a, b, r, d);
            let y = q(a2, b2, r2, d);
            let tol = 1e-6 * (1.0 + x.to_f64().abs() * y.to_f64().abs());
            prop_assert!(((x.clone() * y.clone()).to_f64() - x.to_f64() * y.to_f64()).abs() < tol);
            prop_assert!(((x.clone() + y.clone()).to_f64() - x.to_f64() - y.to_f64()).abs() < tol);
        }
    }
}
