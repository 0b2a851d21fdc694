//! The free quandle as conjugates `u⁻¹ x u` in a free group.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::trace::QuandleOp;

/// A free-group letter `g` or `g⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Self { generator: self.generator, inverse: !self.inverse }
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inv()) {
        out.pop();
    } else {
        out.push(l);
    }
}

/// Free reduction of a word.
pub fn reduce(word: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out = Vec::new();
    for l in word {
        push_reduced(&mut out, l);
    }
    out
}

pub fn invert(word: &[Letter]) -> Vec<Letter> {
    word.iter().rev().map(|l| l.inv()).collect()
}

/// The element `u⁻¹ x u`, with `u` reduced and not starting with `x^{±1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeQuandleWord {
    base: usize,
    conjugator: Vec<Letter>,
}

impl FreeQuandleWord {
    pub fn generator(base: usize) -> Self {
        Self { base, conjugator: Vec::new() }
    }

    /// `u⁻¹ x u` for an arbitrary word `u`.
    pub fn conjugate(base: usize, u: impl IntoIterator<Item = Letter>) -> Self {
        let mut conjugator = reduce(u);
        let strip = conjugator.iter().take_while(|l| l.generator == base).count();
        conjugator.drain(..strip);
        Self { base, conjugator }
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn conjugator(&self) -> &[Letter] {
        &self.conjugator
    }

    /// The free-group element `u⁻¹ x u`, reduced.
    pub fn group_word(&self) -> Vec<Letter> {
        let mut w = invert(&self.conjugator);
        w.push(Letter::new(self.base, false));
        w.extend_from_slice(&self.conjugator);
        reduce(w)
    }

    /// `self ∘ g` for a generator `g`.
    pub fn act_by_generator(&self, g: usize, inverse: bool) -> Self {
        let mut u = self.conjugator.clone();
        u.push(Letter::new(g, inverse));
        Self::conjugate(self.base, u)
    }

    /// Generators occurring in the word.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = std::iter::once(self.base)
            .chain(self.conjugator.iter().map(|l| l.generator))
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Replaces every generator by a word; used to compose top-maps.
    pub fn substitute(&self, f: &impl Fn(usize) -> FreeQuandleWord) -> Self {
        // u⁻¹ x u with x ↦ X = v⁻¹ y v and each letter g^{±} ↦ the group element of f(g)
        let x = f(self.base);
        let mut u = x.conjugator.clone();
        for l in &self.conjugator {
            let img = f(l.generator).group_word();
            if l.inverse {
                u.extend(invert(&img));
            } else {
                u.extend(img);
            }
        }
        Self::conjugate(x.base, u)
    }
}

/// `a ∘ b` (conjugation of `a` by `b`) or `a / b`.
pub fn fq_op(a: &FreeQuandleWord, b: &FreeQuandleWord, op: QuandleOp) -> FreeQuandleWord {
    let mut y = b.group_word();
    if op == QuandleOp::Div {
        y = invert(&y);
    }
    let mut u = a.conjugator.clone();
    u.extend(y);
    FreeQuandleWord::conjugate(a.base, u)
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}{}", self.generator, if self.inverse { '-' } else { '+' })
    }
}

impl fmt::Display for FreeQuandleWord {
    /// Postfix: `g3 g1+ g2-` is `(g3 ∘ g1) / g2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.base)?;
        for l in &self.conjugator {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

impl FromStr for FreeQuandleWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Syntax(format!("bad quandle word: {s:?}"));
        let mut toks = s.split_whitespace();
        let base = toks
            .next()
            .and_then(|t| t.strip_prefix('g'))
            .and_then(|t| t.parse().ok())
            .ok_or_else(bad)?;
        let mut u = Vec::new();
        for t in toks {
            let t = t.strip_prefix('g').ok_or_else(bad)?;
            let (num, inverse) = if let Some(n) = t.strip_suffix('+') {
                (n, false)
            } else if let Some(n) = t.strip_suffix('-') {
                (n, true)
            } else {
                return Err(bad());
            };
            u.push(Letter::new(num.parse().map_err(|_| bad())?, inverse));
        }
        Ok(FreeQuandleWord::conjugate(base, u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(i: usize) -> FreeQuandleWord {
        FreeQuandleWord::generator(i)
    }

    /// Free-group conjugation computed directly from the group words.
    fn conj_oracle(a: &[Letter], b: &[Letter]) -> Vec<Letter> {
        let mut w = invert(b);
        w.extend_from_slice(a);
        w.extend_from_slice(b);
        reduce(w)
    }

    #[test]
    fn examples() {
        let (x, y, z) = (g(0), g(1), g(2));
        assert_eq!(fq_op(&x, &x, QuandleOp::Act), x);
        let xy = fq_op(&x, &y, QuandleOp::Act);
        assert_eq!(fq_op(&xy, &y, QuandleOp::Div), x);
        let lhs = fq_op(&xy, &z, QuandleOp::Act);
        let rhs = fq_op(&fq_op(&x, &z, QuandleOp::Act), &fq_op(&y, &z, QuandleOp::Act), QuandleOp::Act);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.group_word(), conj_oracle(&xy.group_word(), &z.group_word()));
    }

    #[test]
    fn text_round_trip() {
        let w: FreeQuandleWord = "g3 g1+ g2-".parse().unwrap();
        assert_eq!(w.to_string(), "g3 g1+ g2-");
        assert_eq!(w, fq_op(&fq_op(&g(3), &g(1), QuandleOp::Act), &g(2), QuandleOp::Div));
        assert_eq!("g3 g3+ g1+".parse::<FreeQuandleWord>().unwrap().to_string(), "g3 g1+");
        assert!("3 g1+".parse::<FreeQuandleWord>().is_err());
        assert!("g3 g1".parse::<FreeQuandleWord>().is_err());
    }

    fn word() -> impl Strategy<Value = FreeQuandleWord> {
        (0usize..4, prop::collection::vec((0usize..4, any::<bool>()), 0..6)).prop_map(|(b, u)| {
            FreeQuandleWord::conjugate(b, u.into_iter().map(|(g, i)| Letter::new(g, i)))
        })
    }

    fn op() -> impl Strategy<Value = QuandleOp> {
        prop_oneof![Just(QuandleOp::Act), Just(QuandleOp::Div)]
    }

    proptest! {
        #[test]
        fn quandle_axioms(a in word(), b in word(), c in word(), o in op()) {
            prop_assert_eq!(fq_op(&a, &a, o), a.clone());
            prop_assert_eq!(fq_op(&fq_op(&a, &b, o), &b, o.opposite()), a.clone());
            let lhs = fq_op(&fq_op(&a, &b, o), &c, QuandleOp::Act);
            let rhs = fq_op(&fq_op(&a, &c, QuandleOp::Act), &fq_op(&b, &c, QuandleOp::Act), o);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn equality_matches_group_words(a in word(), b in word()) {
            prop_assert_eq!(a == b, a.group_word() == b.group_word());
            prop_assert_eq!(
                fq_op(&a, &b, QuandleOp::Act).group_word(),
                conj_oracle(&a.group_word(), &b.group_word())
            );
        }

        #[test]
        fn display_round_trips(a in word()) {
            prop_assert_eq!(a.to_string().parse::<FreeQuandleWord>().unwrap(), a);
        }

        #[test]
        fn substitution_is_a_homomorphism(a in word(), b in word(), o in op(), imgs in prop::collection::vec(word(), 4)) {
            let f = |i: usize| imgs[i].clone();
            prop_assert_eq!(
                fq_op(&a, &b, o).substitute(&f),
                fq_op(&a.substitute(&f), &b.substitute(&f), o)
            );
        }
    }
}
