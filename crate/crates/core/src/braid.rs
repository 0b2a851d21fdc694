//! Braid words, rewriting moves and plat-closure bookkeeping.
//!
//! Generators are 1-based (`σ_1 … σ_{n-1}`), strands and slots are 0-based.
//! A word is read left to right, top (`t = 0`) to bottom (`t = 1`); `σ_i`
//! exchanges whatever strands currently occupy slots `i` and `i + 1`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::Syntax("strand count must be positive".into()));
        }
        for &g in &letters {
            if g == 0 {
                return Err(Error::Syntax("generator 0 is not allowed".into()));
            }
            if g.unsigned_abs() as usize >= strands {
                return Err(Error::OutOfRange { generator: g, strands });
            }
        }
        Ok(Self { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        Self::new(strands, Vec::new()).expect("positive strand count")
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `perm[slot]` is the strand occupying `slot` at `t = 1`.
    pub fn permutation(&self) -> Vec<usize> {
        let mut slots: Vec<usize> = (0..self.strands).collect();
        for &g in &self.letters {
            let i = g.unsigned_abs() as usize - 1;
            slots.swap(i, i + 1);
        }
        slots
    }

    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.strands != other.strands {
            return Err(Error::Incomparable(format!(
                "cannot stack braids on {} and {} strands",
                self.strands, other.strands
            )));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { strands: self.strands, letters })
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.strands)?;
        for g in &self.letters {
            write!(f, " {g}")?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_braid_word(s)
    }
}

/// Parses `n: g1 g2 … gk`.
pub fn parse_braid_word(text: &str) -> Result<BraidWord> {
    let text = text.strip_suffix('\n').unwrap_or(text);
    let text = text.strip_suffix('\r').unwrap_or(text);
    let (head, tail) = text
        .split_once(':')
        .ok_or_else(|| Error::Syntax(format!("missing ':' in {text:?}")))?;
    let strands: usize = head
        .trim()
        .parse()
        .map_err(|_| Error::Syntax(format!("bad strand count {head:?}")))?;
    let letters = tail
        .split_whitespace()
        .map(|tok| {
            tok.parse::<i32>()
                .map_err(|_| Error::Syntax(format!("bad generator {tok:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    BraidWord::new(strands, letters)
}

/// Generators of the subgroup `K_{2n}` that fixes the plat closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KGenerator {
    /// `σ_1`
    Sigma1,
    /// `σ_2 σ_1² σ_2`
    Twist,
    /// `σ_{2k} σ_{2k-1} σ_{2k+1} σ_{2k}`, `k ≥ 1`
    Exchange(usize),
}

impl KGenerator {
    pub fn letters(self) -> Vec<i32> {
        match self {
            KGenerator::Sigma1 => vec![1],
            KGenerator::Twist => vec![2, 1, 1, 2],
            KGenerator::Exchange(k) => {
                let k = k as i32;
                vec![2 * k, 2 * k - 1, 2 * k + 1, 2 * k]
            }
        }
    }

    /// Letters of the generator raised to `±1`.
    pub fn power(self, inverse: bool) -> Vec<i32> {
        let mut l = self.letters();
        if inverse {
            l.reverse();
            for g in &mut l {
                *g = -*g;
            }
        }
        l
    }

    /// Script id: `1` for σ_1, `2` for the twist, `2 + k` for exchange `k`.
    pub fn id(self) -> usize {
        match self {
            KGenerator::Sigma1 => 1,
            KGenerator::Twist => 2,
            KGenerator::Exchange(k) => 2 + k,
        }
    }

    pub fn from_id(id: usize) -> Result<Self> {
        match id {
            0 => Err(Error::Syntax("K-generator id must be positive".into())),
            1 => Ok(KGenerator::Sigma1),
            2 => Ok(KGenerator::Twist),
            k => Ok(KGenerator::Exchange(k - 2)),
        }
    }

    pub fn fits(self, strands: usize) -> bool {
        self.letters()
            .iter()
            .all(|g| (g.unsigned_abs() as usize) < strands)
    }

    /// All generators available on `strands` (even) strands.
    pub fn all_for(strands: usize) -> Vec<KGenerator> {
        let mut out = vec![KGenerator::Sigma1, KGenerator::Twist];
        let mut k = 1;
        while 2 * k + 1 < strands {
            out.push(KGenerator::Exchange(k));
            k += 1;
        }
        out.retain(|g| g.fits(strands));
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    /// Delete `g g⁻¹` at `pos`.
    FreeCancel { pos: usize },
    /// Insert `letter, -letter` before `pos`.
    FreeInsert { pos: usize, letter: i32 },
    /// `σ_i σ_{i+1} σ_i ↔ σ_{i+1} σ_i σ_{i+1}` (all letters of one sign).
    Coxeter { pos: usize },
    /// Swap two adjacent letters with `|i - j| ≥ 2`.
    FarCommute { pos: usize },
    /// Prepend a `K_{2n}` generator (or its inverse).
    KLeft { generator: KGenerator, inverse: bool },
    /// Append a `K_{2n}` generator (or its inverse).
    KRight { generator: KGenerator, inverse: bool },
    /// Remove a prefix equal to the given `K_{2n}` generator power.
    KLeftUndo { generator: KGenerator, inverse: bool },
    /// Remove a suffix equal to the given `K_{2n}` generator power.
    KRightUndo { generator: KGenerator, inverse: bool },
    /// `β ∈ B_{2n} ↦ β σ_{2n} ∈ B_{2n+2}`.
    PlatStabilize,
    /// Inverse of [`Move::PlatStabilize`].
    PlatDestabilize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveKind {
    FreeCancel,
    Coxeter,
    FarCommute,
    KLeft,
    KRight,
    PlatStabilize,
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::FreeCancel { .. } | Move::FreeInsert { .. } => MoveKind::FreeCancel,
            Move::Coxeter { .. } => MoveKind::Coxeter,
            Move::FarCommute { .. } => MoveKind::FarCommute,
            Move::KLeft { .. } | Move::KLeftUndo { .. } => MoveKind::KLeft,
            Move::KRight { .. } | Move::KRightUndo { .. } => MoveKind::KRight,
            Move::PlatStabilize | Move::PlatDestabilize => MoveKind::PlatStabilize,
        }
    }

    /// True for moves that keep the braid group element (not just the plat).
    pub fn preserves_braid(&self) -> bool {
        matches!(
            self.kind(),
            MoveKind::FreeCancel | MoveKind::Coxeter | MoveKind::FarCommute
        )
    }

    /// The move undoing `self` when `self` is applied to `before`.
    pub fn inverse(&self, before: &BraidWord) -> Move {
        match *self {
            Move::FreeCancel { pos } => Move::FreeInsert { pos, letter: before.letters[pos] },
            Move::FreeInsert { pos, .. } => Move::FreeCancel { pos },
            Move::Coxeter { pos } => Move::Coxeter { pos },
            Move::FarCommute { pos } => Move::FarCommute { pos },
            Move::KLeft { generator, inverse } => Move::KLeftUndo { generator, inverse },
            Move::KRight { generator, inverse } => Move::KRightUndo { generator, inverse },
            Move::KLeftUndo { generator, inverse } => Move::KLeft { generator, inverse },
            Move::KRightUndo { generator, inverse } => Move::KRight { generator, inverse },
            Move::PlatStabilize => Move::PlatDestabilize,
            Move::PlatDestabilize => Move::PlatStabilize,
        }
    }
}

fn signed_gen_id(generator: KGenerator, inverse: bool) -> i64 {
    let id = generator.id() as i64;
    if inverse {
        -id
    } else {
        id
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Move::FreeCancel { pos } => write!(f, "CANCEL {pos}"),
            Move::FreeInsert { pos, letter } => write!(f, "INSERT {pos} {letter}"),
            Move::Coxeter { pos } => write!(f, "COXETER {pos}"),
            Move::FarCommute { pos } => write!(f, "FARCOMM {pos}"),
            Move::KLeft { generator, inverse } => {
                write!(f, "KLEFT {}", signed_gen_id(generator, inverse))
            }
            Move::KRight { generator, inverse } => {
                write!(f, "KRIGHT {}", signed_gen_id(generator, inverse))
            }
            Move::KLeftUndo { generator, inverse } => {
                write!(f, "UNKLEFT {}", signed_gen_id(generator, inverse))
            }
            Move::KRightUndo { generator, inverse } => {
                write!(f, "UNKRIGHT {}", signed_gen_id(generator, inverse))
            }
            Move::PlatStabilize => write!(f, "STAB"),
            Move::PlatDestabilize => write!(f, "UNSTAB"),
        }
    }
}

impl FromStr for Move {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let num = |i: usize| -> Result<i64> {
            toks.get(i)
                .ok_or_else(|| Error::Syntax(format!("missing argument in {line:?}")))?
                .parse::<i64>()
                .map_err(|_| Error::Syntax(format!("bad number in {line:?}")))
        };
        let pos = |i: usize| -> Result<usize> {
            usize::try_from(num(i)?).map_err(|_| Error::Syntax(format!("negative position in {line:?}")))
        };
        let kgen = |i: usize| -> Result<(KGenerator, bool)> {
            let id = num(i)?;
            Ok((KGenerator::from_id(id.unsigned_abs() as usize)?, id < 0))
        };
        let (arity, mv) = match toks.first().copied() {
            Some("CANCEL") => (2, Move::FreeCancel { pos: pos(1)? }),
            Some("INSERT") => {
                let letter = i32::try_from(num(2)?)
                    .map_err(|_| Error::Syntax(format!("bad letter in {line:?}")))?;
                (3, Move::FreeInsert { pos: pos(1)?, letter })
            }
            Some("COXETER") => (2, Move::Coxeter { pos: pos(1)? }),
            Some("FARCOMM") => (2, Move::FarCommute { pos: pos(1)? }),
            Some("KLEFT") => {
                let (generator, inverse) = kgen(1)?;
                (2, Move::KLeft { generator, inverse })
            }
            Some("KRIGHT") => {
                let (generator, inverse) = kgen(1)?;
                (2, Move::KRight { generator, inverse })
            }
            Some("UNKLEFT") => {
                let (generator, inverse) = kgen(1)?;
                (2, Move::KLeftUndo { generator, inverse })
            }
            Some("UNKRIGHT") => {
                let (generator, inverse) = kgen(1)?;
                (2, Move::KRightUndo { generator, inverse })
            }
            Some("STAB") => (1, Move::PlatStabilize),
            Some("UNSTAB") => (1, Move::PlatDestabilize),
            _ => return Err(Error::Syntax(format!("unknown move {line:?}"))),
        };
        if toks.len() != arity {
            return Err(Error::Syntax(format!("wrong number of arguments in {line:?}")));
        }
        Ok(mv)
    }
}

/// Parses a move script: one move per line, blank lines and `#` comments ignored.
pub fn parse_move_script(text: &str) -> Result<Vec<Move>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::parse)
        .collect()
}

fn not_applicable(m: &Move, w: &BraidWord) -> Error {
    Error::NotApplicable(format!("{m} on {w}"))
}

fn require_even(w: &BraidWord, m: &Move) -> Result<()> {
    if w.strands % 2 != 0 {
        Err(Error::Parity(format!("{m} needs an even strand count, got {}", w.strands)))
    } else {
        Ok(())
    }
}

pub fn apply_move(w: &BraidWord, m: Move) -> Result<BraidWord> {
    let l = &w.letters;
    let mut out = l.clone();
    let mut strands = w.strands;
    match m {
        Move::FreeCancel { pos } => {
            if pos + 1 >= l.len() || l[pos] != -l[pos + 1] {
                return Err(not_applicable(&m, w));
            }
            out.drain(pos..pos + 2);
        }
        Move::FreeInsert { pos, letter } => {
            if pos > l.len() || letter == 0 || letter.unsigned_abs() as usize >= w.strands {
                return Err(not_applicable(&m, w));
            }
            out.splice(pos..pos, [letter, -letter]);
        }
        Move::Coxeter { pos } => {
            if pos + 2 >= l.len() {
                return Err(not_applicable(&m, w));
            }
            let (a, b, c) = (l[pos], l[pos + 1], l[pos + 2]);
            let same_sign = (a > 0) == (b > 0);
            let adjacent = (a.abs() - b.abs()).abs() == 1;
            if a != c || !same_sign || !adjacent {
                return Err(not_applicable(&m, w));
            }
            out[pos] = b;
            out[pos + 1] = a;
            out[pos + 2] = b;
        }
        Move::FarCommute { pos } => {
            if pos + 1 >= l.len() || (l[pos].abs() - l[pos + 1].abs()).abs() < 2 {
                return Err(not_applicable(&m, w));
            }
            out.swap(pos, pos + 1);
        }
        Move::KLeft { generator, inverse } | Move::KRight { generator, inverse } => {
            require_even(w, &m)?;
            if !generator.fits(w.strands) {
                return Err(not_applicable(&m, w));
            }
            let g = generator.power(inverse);
            if matches!(m, Move::KLeft { .. }) {
                out.splice(0..0, g);
            } else {
                out.extend(g);
            }
        }
        Move::KLeftUndo { generator, inverse } => {
            require_even(w, &m)?;
            let g = generator.power(inverse);
            if !l.starts_with(&g) {
                return Err(not_applicable(&m, w));
            }
            out.drain(..g.len());
        }
        Move::KRightUndo { generator, inverse } => {
            require_even(w, &m)?;
            let g = generator.power(inverse);
            if !l.ends_with(&g) {
                return Err(not_applicable(&m, w));
            }
            out.truncate(l.len() - g.len());
        }
        Move::PlatStabilize => {
            require_even(w, &m)?;
            out.push(w.strands as i32);
            strands += 2;
        }
        Move::PlatDestabilize => {
            require_even(w, &m)?;
            let top = w.strands as i32 - 2;
            let ok = w.strands >= 4
                && l.last() == Some(&top)
                && l[..l.len() - 1].iter().all(|g| g.abs() < top);
            if !ok {
                return Err(not_applicable(&m, w));
            }
            out.pop();
            strands -= 2;
        }
    }
    BraidWord::new(strands, out)
}

/// Every move applicable to `w` (K-moves only when `plat` is set).
pub fn applicable_moves(w: &BraidWord, plat: bool) -> Vec<Move> {
    let mut cands = Vec::new();
    for pos in 0..w.len() {
        cands.push(Move::FreeCancel { pos });
        cands.push(Move::Coxeter { pos });
        cands.push(Move::FarCommute { pos });
    }
    if plat && w.strands % 2 == 0 {
        for generator in KGenerator::all_for(w.strands) {
            for inverse in [false, true] {
                cands.push(Move::KLeft { generator, inverse });
                cands.push(Move::KRight { generator, inverse });
                cands.push(Move::KLeftUndo { generator, inverse });
                cands.push(Move::KRightUndo { generator, inverse });
            }
        }
        cands.push(Move::PlatStabilize);
        cands.push(Move::PlatDestabilize);
    }
    cands.retain(|m| apply_move(w, *m).is_ok());
    cands
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Traversed with increasing `t` (tangent `(v, +1)`).
    Up,
    /// Traversed with decreasing `t`.
    Down,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Up => Orientation::Down,
            Orientation::Down => Orientation::Up,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlatStructure {
    /// Strand pairs capped at `t = 0` (slots `2j, 2j+1`).
    pub top_pairs: Vec<(usize, usize)>,
    /// Strand pairs capped at `t = 1`, i.e. the strands in slots `2j, 2j+1` at the bottom.
    pub bottom_pairs: Vec<(usize, usize)>,
    pub orientation: Vec<Orientation>,
    /// Link components, each listed in traversal order starting at its lowest strand.
    pub components: Vec<Vec<usize>>,
}

impl PlatStructure {
    pub fn strands(&self) -> usize {
        self.orientation.len()
    }

    pub fn top_partner(&self, s: usize) -> usize {
        s ^ 1
    }

    pub fn bottom_partner(&self, s: usize) -> usize {
        self.bottom_pairs
            .iter()
            .find_map(|&(a, b)| {
                if a == s {
                    Some(b)
                } else if b == s {
                    Some(a)
                } else {
                    None
                }
            })
            .expect("every strand has a bottom cap")
    }

    pub fn component_of(&self, s: usize) -> usize {
        self.components
            .iter()
            .position(|c| c.contains(&s))
            .expect("every strand lies on a component")
    }
}

/// Caps, components and a traversal orientation of the plat closure of `w`.
///
/// Each component is entered at its lowest unvisited strand, oriented [`Orientation::Up`].
pub fn plat_structure(w: &BraidWord) -> Result<PlatStructure> {
    let n = w.strands;
    if n % 2 != 0 {
        return Err(Error::Parity(format!("plat closure needs an even strand count, got {n}")));
    }
    let perm = w.permutation();
    let top_pairs: Vec<_> = (0..n / 2).map(|j| (2 * j, 2 * j + 1)).collect();
    let bottom_pairs: Vec<_> = (0..n / 2).map(|j| (perm[2 * j], perm[2 * j + 1])).collect();
    let mut bottom_partner = vec![0; n];
    for &(a, b) in &bottom_pairs {
        bottom_partner[a] = b;
        bottom_partner[b] = a;
    }

    let mut orientation = vec![None; n];
    let mut components = Vec::new();
    for start in 0..n {
        if orientation[start].is_some() {
            continue;
        }
        let mut comp = Vec::new();
        let mut s = start;
        let mut dir = Orientation::Up;
        while orientation[s].is_none() {
            orientation[s] = Some(dir);
            comp.push(s);
            // Up ends at t = 1 and continues through the bottom cap.
            s = match dir {
                Orientation::Up => bottom_partner[s],
                Orientation::Down => s ^ 1,
            };
            dir = dir.flip();
        }
        components.push(comp);
    }
    Ok(PlatStructure {
        top_pairs,
        bottom_pairs,
        orientation: orientation.into_iter().map(Option::unwrap).collect(),
        components,
    })
}
