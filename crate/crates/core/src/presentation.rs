//! Quandle presentations of braids and plat closures.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use petgraph::unionfind::UnionFind;

use crate::braid::{Orientation, PlatStructure};
use crate::error::{Error, Result};
use crate::free_quandle::{fq_op, FreeQuandleWord};
use crate::geometry::Sign;
use crate::trace::{effective_sign, ClassId, QuandleOp, SecantTrace};

/// `target = left ⋆ right`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub target: ClassId,
    pub left: ClassId,
    pub op: QuandleOp,
    pub right: ClassId,
    /// Event the relation came from, if any.
    pub event: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuandlePresentation {
    /// Generator ids, sorted.
    pub generators: Vec<ClassId>,
    pub relations: Vec<Relation>,
    pub identifications: Vec<(ClassId, ClassId)>,
    /// Generators acting trivially on everything.
    pub e_set: Vec<ClassId>,
}

/// Union-find over a sparse id set; each class is named by its least member.
#[derive(Clone, Debug)]
pub struct Classes {
    index: HashMap<ClassId, usize>,
    ids: Vec<ClassId>,
    uf: UnionFind<usize>,
}

impl Classes {
    pub fn new(ids: &[ClassId]) -> Self {
        Self {
            index: ids.iter().enumerate().map(|(k, &id)| (id, k)).collect(),
            ids: ids.to_vec(),
            uf: UnionFind::new(ids.len()),
        }
    }

    fn ix(&self, id: ClassId) -> usize {
        *self.index.get(&id).unwrap_or_else(|| panic!("unknown generator {id}"))
    }

    pub fn contains(&self, id: ClassId) -> bool {
        self.index.contains_key(&id)
    }

    pub fn union(&mut self, a: ClassId, b: ClassId) -> bool {
        let (x, y) = (self.ix(a), self.ix(b));
        self.uf.union(x, y)
    }

    pub fn same(&self, a: ClassId, b: ClassId) -> bool {
        self.uf.equiv(self.ix(a), self.ix(b))
    }

    /// `id ↦ least member of its class`.
    pub fn roots(&self) -> HashMap<ClassId, ClassId> {
        let mut least: HashMap<usize, ClassId> = HashMap::new();
        for (k, &id) in self.ids.iter().enumerate() {
            let r = self.uf.find(k);
            least.entry(r).and_modify(|m| *m = (*m).min(id)).or_insert(id);
        }
        self.ids
            .iter()
            .enumerate()
            .map(|(k, &id)| (id, least[&self.uf.find(k)]))
            .collect()
    }
}

impl QuandlePresentation {
    pub fn classes(&self) -> Classes {
        let mut c = Classes::new(&self.generators);
        for &(a, b) in &self.identifications {
            c.union(a, b);
        }
        c
    }

    /// Generator ids after identification, each named by its least member.
    pub fn identified_generators(&self) -> Vec<ClassId> {
        let roots = self.classes().roots();
        let set: BTreeSet<ClassId> = roots.values().copied().collect();
        set.into_iter().collect()
    }

    /// Identified generators not defined by any relation.
    pub fn base_generators(&self) -> Vec<ClassId> {
        let roots = self.classes().roots();
        let defined: BTreeSet<ClassId> = self.relations.iter().map(|r| roots[&r.target]).collect();
        self.identified_generators().into_iter().filter(|g| !defined.contains(g)).collect()
    }

    /// Checks that every id used is a generator.
    pub fn validate(&self) -> Result<()> {
        let known: BTreeSet<ClassId> = self.generators.iter().copied().collect();
        let mut used: Vec<ClassId> = self.e_set.clone();
        used.extend(self.identifications.iter().flat_map(|&(a, b)| [a, b]));
        used.extend(self.relations.iter().flat_map(|r| [r.target, r.left, r.right]));
        match used.into_iter().find(|u| !known.contains(u)) {
            Some(u) => Err(Error::Syntax(format!("id {u} is not a declared generator"))),
            None => Ok(()),
        }
    }

    /// Parses the text produced by `Display`; `TOP` and `#` lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = QuandlePresentation::default();
        for (lineno, line) in text.lines().enumerate() {
            let bad = || Error::Syntax(format!("line {}: {line:?}", lineno + 1));
            let toks: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<ClassId>().map_err(|_| bad());
            match toks.as_slice() {
                [] => {}
                [t, ..] if t.starts_with('#') || *t == "TOP" => {}
                ["GEN", id] => p.generators.push(num(id)?),
                ["E", id] => p.e_set.push(num(id)?),
                ["IDENT", a, b] => p.identifications.push((num(a)?, num(b)?)),
                ["REL", t, "=", l, op, r] => {
                    let op = match *op {
                        "o" => QuandleOp::Act,
                        "/" => QuandleOp::Div,
                        _ => return Err(bad()),
                    };
                    p.relations.push(Relation {
                        target: num(t)?,
                        left: num(l)?,
                        op,
                        right: num(r)?,
                        event: None,
                    });
                }
                _ => return Err(bad()),
            }
        }
        p.generators.sort_unstable();
        p.generators.dedup();
        p.validate()?;
        Ok(p)
    }
}

impl fmt::Display for QuandlePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.generators {
            writeln!(f, "GEN {g}")?;
        }
        for e in &self.e_set {
            writeln!(f, "E {e}")?;
        }
        for (a, b) in &self.identifications {
            writeln!(f, "IDENT {a} {b}")?;
        }
        for r in &self.relations {
            writeln!(f, "REL {} = {} {} {}", r.target, r.left, r.op.symbol(), r.right)?;
        }
        Ok(())
    }
}

/// The two relations of event `k` with effective sign `s`.
fn event_relations(trace: &SecantTrace, k: usize, s: Sign) -> [Relation; 2] {
    let inc = trace.incidence(k);
    let op = QuandleOp::from_sign(s);
    [
        Relation { target: inc.ac_after, left: inc.ac_before, op, right: inc.ab, event: Some(k) },
        Relation { target: inc.ca_after, left: inc.ca_before, op: op.opposite(), right: inc.cb, event: Some(k) },
    ]
}

fn all_classes(trace: &SecantTrace) -> Vec<ClassId> {
    (0..trace.class_count()).collect()
}

/// A braid's presentation together with its top-map.
#[derive(Clone, Debug)]
pub struct BraidSq {
    pub strands: usize,
    pub presentation: QuandlePresentation,
    /// Every class as a word over the base generators.
    pub words: Vec<FreeQuandleWord>,
    /// Final class of each directed strand pair.
    pub top_map: BTreeMap<(usize, usize), FreeQuandleWord>,
}

impl BraidSq {
    /// `TOP (i,j) = word` lines with 1-based strands.
    pub fn top_lines(&self) -> Vec<String> {
        self.top_map
            .iter()
            .map(|(&(i, j), w)| format!("TOP ({},{}) = {w}", i + 1, j + 1))
            .collect()
    }
}

impl fmt::Display for BraidSq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.presentation)?;
        for l in self.top_lines() {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

/// SQ of a braid: base generators are the `t = 0` classes, each event gives
/// `AC⁺ = AC⁻ ⋆ AB` and `CA⁺ = CA⁻ ⋆̄ CB` with `⋆ = ∘` for a positive sign.
pub fn build_braid_sq(trace: &SecantTrace) -> BraidSq {
    let n = trace.strands();
    let mut relations = Vec::new();
    for (k, e) in trace.events().iter().enumerate() {
        relations.extend(event_relations(trace, k, e.sign));
    }
    let mut words: Vec<Option<FreeQuandleWord>> = vec![None; trace.class_count()];
    for (i, j) in trace.ordered_pairs() {
        let id = trace.initial_class(i, j);
        words[id] = Some(FreeQuandleWord::generator(id));
    }
    for r in &relations {
        let l = words[r.left].as_ref().expect("operands precede targets");
        let x = words[r.right].as_ref().expect("operands precede targets");
        words[r.target] = Some(fq_op(l, x, r.op));
    }
    let words: Vec<FreeQuandleWord> = words.into_iter().map(|w| w.expect("every class is reached")).collect();
    let top_map = trace
        .ordered_pairs()
        .into_iter()
        .map(|(i, j)| ((i, j), words[trace.final_class(i, j)].clone()))
        .collect();
    BraidSq {
        strands: n,
        presentation: QuandlePresentation {
            generators: all_classes(trace),
            relations,
            identifications: Vec::new(),
            e_set: Vec::new(),
        },
        words,
        top_map,
    }
}

/// SQ of the plat closure.
///
/// Caps at both ends give identifications: for two distinct cap pairs `P`,
/// `Q`, the four directed classes from `P` to `Q` are merged, and the two
/// directions of each cap's own secant are merged. The cap secants form `E`.
/// Event operations follow the middle strand's orientation.
pub fn build_plat_presentation(trace: &SecantTrace, plat: &PlatStructure) -> Result<QuandlePresentation> {
    let n = trace.strands();
    if n % 2 != 0 || plat.strands() != n {
        return Err(Error::Parity(format!(
            "plat with {} strands does not match a trace on {n} strands",
            plat.strands()
        )));
    }
    let mut identifications = Vec::new();
    let mut e_set = Vec::new();
    let ends: [(&[(usize, usize)], &dyn Fn(usize, usize) -> ClassId); 2] = [
        (&plat.top_pairs, &|i, j| trace.initial_class(i, j)),
        (&plat.bottom_pairs, &|i, j| trace.final_class(i, j)),
    ];
    for (pairs, class) in ends {
        for &(p0, p1) in pairs {
            e_set.push(class(p0, p1));
            e_set.push(class(p1, p0));
            identifications.push((class(p0, p1), class(p1, p0)));
        }
        for (x, &(p0, p1)) in pairs.iter().enumerate() {
            for (y, &(q0, q1)) in pairs.iter().enumerate() {
                if x == y {
                    continue;
                }
                let anchor = class(p0, q0);
                for (i, j) in [(p0, q1), (p1, q0), (p1, q1)] {
                    identifications.push((anchor, class(i, j)));
                }
            }
        }
    }
    let mut relations = Vec::new();
    for (k, e) in trace.events().iter().enumerate() {
        relations.extend(event_relations(trace, k, effective_sign(e, &plat.orientation)));
    }
    e_set.sort_unstable();
    e_set.dedup();
    Ok(QuandlePresentation { generators: all_classes(trace), relations, identifications, e_set })
}

/// Orientations with every strand up, the braid convention.
pub fn all_up(n: usize) -> Vec<Orientation> {
    vec![Orientation::Up; n]
}

/// Count-preserving reduction.
///
/// Repeats until stable:
/// - `T = L ⋆ R` with `R ∈ E`, `R ≍ T` or `R ≍ L` becomes `T ≍ L`;
/// - `T₂ = T₁ ⋆̄ R'` after `T₁ = L ⋆ R` with `R' ≍ R` becomes `T₂ ≍ L`;
/// - relations with equal right-hand sides identify their targets;
/// - a target occurring nowhere else, and not in `E`, is dropped with its relation.
///
/// The result names each class by its least member and has no identifications.
pub fn simplify(p: &QuandlePresentation) -> QuandlePresentation {
    let mut classes = p.classes();
    let mut rels: Vec<Relation> = p.relations.clone();
    let mut dropped: BTreeSet<ClassId> = BTreeSet::new();
    loop {
        let roots = classes.roots();
        let root = |x: ClassId| roots[&x];
        let e_roots: BTreeSet<ClassId> = p.e_set.iter().map(|&e| root(e)).collect();
        let mut changed = false;

        let mut keep = Vec::with_capacity(rels.len());
        for r in rels.drain(..) {
            let (t, l, x) = (root(r.target), root(r.left), root(r.right));
            if e_roots.contains(&x) || x == t || x == l {
                classes.union(t, l);
                changed = true;
            } else {
                keep.push(r);
            }
        }
        rels = keep;
        if changed {
            continue;
        }

        let mut by_rhs: HashMap<(ClassId, QuandleOp, ClassId), ClassId> = HashMap::new();
        let mut by_target: HashMap<ClassId, Vec<Relation>> = HashMap::new();
        for r in &rels {
            by_target.entry(root(r.target)).or_default().push(*r);
        }
        let mut keep = Vec::with_capacity(rels.len());
        for r in rels.drain(..) {
            // one rewrite per pass, so every dropped relation follows from kept ones
            if changed {
                keep.push(r);
                continue;
            }
            let (t, l, x) = (root(r.target), root(r.left), root(r.right));
            if let Some(&t0) = by_rhs.get(&(l, r.op, x)) {
                classes.union(t, t0);
                changed = true;
                continue;
            }
            let cancels = by_target.get(&l).and_then(|defs| {
                defs.iter()
                    .find(|d| d.op == r.op.opposite() && root(d.right) == x)
                    .map(|d| root(d.left))
            });
            if let Some(l0) = cancels {
                classes.union(t, l0);
                changed = true;
                continue;
            }
            by_rhs.insert((l, r.op, x), t);
            keep.push(r);
        }
        rels = keep;
        if changed {
            continue;
        }

        let mut uses: HashMap<ClassId, usize> = HashMap::new();
        for r in &rels {
            for v in [r.target, r.left, r.right] {
                *uses.entry(root(v)).or_default() += 1;
            }
        }
        let mut keep = Vec::with_capacity(rels.len());
        for r in rels.drain(..) {
            let t = root(r.target);
            if uses[&t] == 1 && !e_roots.contains(&t) {
                dropped.insert(t);
                changed = true;
            } else {
                keep.push(r);
            }
        }
        rels = keep;
        if !changed {
            break;
        }
    }
    let roots = classes.roots();
    let root = |x: ClassId| roots[&x];
    let generators: BTreeSet<ClassId> = p.generators.iter().map(|&g| root(g)).filter(|g| !dropped.contains(g)).collect();
    let e_set: BTreeSet<ClassId> = p.e_set.iter().map(|&e| root(e)).collect();
    let relations = rels
        .into_iter()
        .map(|r| Relation { target: root(r.target), left: root(r.left), op: r.op, right: root(r.right), event: r.event })
        .collect();
    QuandlePresentation {
        generators: generators.into_iter().collect(),
        relations,
        identifications: Vec::new(),
        e_set: e_set.into_iter().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{parse_braid_word, plat_structure};
    use crate::trace::build_secant_trace;
    use crate::trisecant::realize_generic;

    fn trace_of(text: &str) -> SecantTrace {
        let w = parse_braid_word(text).unwrap();
        let r = realize_generic(&w, 0, 5).unwrap();
        build_secant_trace(&r.events, w.strands()).unwrap()
    }

    #[test]
    fn identity_top_map() {
        let sq = build_braid_sq(&trace_of("3:"));
        assert_eq!(sq.top_map.len(), 6);
        for (k, ((_, _), w)) in sq.top_map.iter().enumerate() {
            assert_eq!(*w, FreeQuandleWord::generator(k));
        }
    }

    #[test]
    fn coxeter_top_maps_agree() {
        let a = build_braid_sq(&trace_of("3: 1 2 1"));
        let b = build_braid_sq(&trace_of("3: 2 1 2"));
        assert_eq!(a.top_lines(), b.top_lines());
        let c = build_braid_sq(&trace_of("3: 1 2"));
        assert_ne!(a.top_lines(), c.top_lines());
    }

    #[test]
    fn plat_of_two_strands() {
        let t = trace_of("2:");
        let p = build_plat_presentation(&t, &plat_structure(&parse_braid_word("2:").unwrap()).unwrap()).unwrap();
        assert_eq!(p.generators, vec![0, 1]);
        assert_eq!(p.e_set, vec![0, 1]);
        assert!(p.relations.is_empty());
    }

    #[test]
    fn plat_of_four_strands_merges_cross_cap_classes() {
        let w = parse_braid_word("4:").unwrap();
        let t = trace_of("4:");
        let p = build_plat_presentation(&t, &plat_structure(&w).unwrap()).unwrap();
        let c = p.classes();
        let id = |i: usize, j: usize| t.initial_class(i, j);
        for (i, j) in [(0, 3), (1, 2), (1, 3)] {
            assert!(c.same(id(0, 2), id(i, j)));
        }
        assert!(c.same(id(2, 0), id(3, 1)));
        assert!(!c.same(id(0, 2), id(2, 0)));
        assert!(!c.same(id(0, 2), id(0, 1)));
        assert_eq!(p.identified_generators().len(), 4);
    }

    #[test]
    fn text_round_trip() {
        let w = parse_braid_word("4: 2 -1 3").unwrap();
        let t = trace_of("4: 2 -1 3");
        let p = build_plat_presentation(&t, &plat_structure(&w).unwrap()).unwrap();
        let mut q = QuandlePresentation::parse(&p.to_string()).unwrap();
        for r in &mut q.relations {
            r.event = None;
        }
        let mut p2 = p.clone();
        for r in &mut p2.relations {
            r.event = None;
        }
        assert_eq!(q, p2);
        assert!(QuandlePresentation::parse("GEN 0\nREL 0 = 0 o 1\n").is_err());
    }

    #[test]
    fn simplify_examples() {
        // one Type-1 relation
        let p = QuandlePresentation {
            generators: vec![0, 1, 2, 3],
            relations: vec![Relation { target: 3, left: 0, op: QuandleOp::Act, right: 1, event: None }],
            identifications: vec![(2, 0)],
            e_set: vec![1],
        };
        let s = simplify(&p);
        assert_eq!(s.generators, vec![0, 1]);
        // a cancelling pair
        let p = QuandlePresentation {
            generators: vec![0, 1, 2, 3],
            relations: vec![
                Relation { target: 2, left: 0, op: QuandleOp::Act, right: 1, event: None },
                Relation { target: 3, left: 2, op: QuandleOp::Div, right: 1, event: None },
            ],
            identifications: vec![],
            e_set: vec![],
        };
        let s = simplify(&p);
        assert_eq!(s.generators, vec![0, 1]);
        assert!(s.relations.is_empty());
        assert_eq!(simplify(&s), s);
    }
}
