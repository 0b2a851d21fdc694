//! Finite quandles and coloring counts.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::free_quandle::FreeQuandleWord;
use crate::presentation::QuandlePresentation;
use crate::trace::{ClassId, QuandleOp};

/// Largest supported quandle; domains are 64-bit masks.
pub const MAX_ORDER: usize = 64;

const TETRAHEDRAL: &str = include_str!("../data/tetrahedral4.txt");

/// A quandle on `0..m` given by its `∘` table (`op[a * m + b] = a ∘ b`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuandle {
    name: String,
    order: usize,
    op: Vec<usize>,
    /// `a / b`, or `None` where the column of `b` is not a bijection.
    inv: Vec<Option<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    Idempotence,
    RightInvertibility,
    SelfDistributivity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomCheck {
    Pass,
    Violation { axiom: Axiom, witness: Vec<usize> },
}

impl AxiomCheck {
    pub fn passed(&self) -> bool {
        matches!(self, AxiomCheck::Pass)
    }
}

impl fmt::Display for AxiomCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomCheck::Pass => f.write_str("pass"),
            AxiomCheck::Violation { axiom, witness } => write!(f, "{axiom:?} fails at {witness:?}"),
        }
    }
}

impl FiniteQuandle {
    /// Builds a quandle from rows `table[a][b] = a ∘ b`; axioms are not checked.
    pub fn from_table(name: impl Into<String>, table: &[Vec<usize>]) -> Result<Self> {
        let m = table.len();
        if m == 0 || m > MAX_ORDER {
            return Err(Error::Syntax(format!("quandle order must be in 1..={MAX_ORDER}, got {m}")));
        }
        if table.iter().any(|row| row.len() != m || row.iter().any(|&v| v >= m)) {
            return Err(Error::Syntax("table must be m×m with entries below m".into()));
        }
        let op: Vec<usize> = table.iter().flatten().copied().collect();
        let mut inv = vec![None; m * m];
        for b in 0..m {
            for a in 0..m {
                let c = op[a * m + b];
                inv[c * m + b] = Some(a);
            }
            let hits = (0..m).filter(|&c| inv[c * m + b].is_some()).count();
            if hits != m {
                for c in 0..m {
                    inv[c * m + b] = None;
                }
            }
        }
        Ok(Self { name: name.into(), order: m, op, inv })
    }

    /// `a ∘ b = 2b − a mod m`.
    pub fn dihedral(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Syntax(format!("dihedral quandle needs m ≥ 2, got {m}")));
        }
        let t: Vec<Vec<usize>> = (0..m).map(|a| (0..m).map(|b| (2 * b + m - a) % m).collect()).collect();
        Self::from_table(format!("dihedral:{m}"), &t)
    }

    /// `a ∘ b = a`.
    pub fn trivial(m: usize) -> Result<Self> {
        let t: Vec<Vec<usize>> = (0..m).map(|a| vec![a; m]).collect();
        Self::from_table(format!("trivial:{m}"), &t)
    }

    /// The Alexander quandle on the field of four elements with `t = ω`.
    pub fn tetrahedral() -> Self {
        Self::parse_table("tetrahedral", TETRAHEDRAL).expect("bundled table is well formed")
    }

    /// Table text: `m` on the first line, then `m` rows of `m` integers.
    pub fn parse_table(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let m: usize = lines
            .next()
            .and_then(|l| l.parse().ok())
            .ok_or_else(|| Error::Syntax("missing quandle order".into()))?;
        let rows: Vec<Vec<usize>> = lines
            .map(|l| l.split_whitespace().map(|x| x.parse().map_err(|_| Error::Syntax(format!("bad entry {x:?}")))).collect())
            .collect::<Result<_>>()?;
        if rows.len() != m {
            return Err(Error::Syntax(format!("expected {m} rows, found {}", rows.len())));
        }
        Self::from_table(name, &rows)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_table(path.display().to_string(), &text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.op[a * self.order + b]
    }

    /// `a / b`; panics when the column of `b` is not a bijection.
    pub fn div(&self, a: usize, b: usize) -> usize {
        self.inv[a * self.order + b].expect("column is a bijection")
    }

    pub fn apply(&self, a: usize, op: QuandleOp, b: usize) -> usize {
        match op {
            QuandleOp::Act => self.op(a, b),
            QuandleOp::Div => self.div(a, b),
        }
    }

    /// Value of a free-quandle word under a coloring of its generators.
    pub fn eval(&self, w: &FreeQuandleWord, color: &impl Fn(usize) -> usize) -> usize {
        let mut x = color(w.base());
        for l in w.conjugator() {
            let op = if l.inverse { QuandleOp::Div } else { QuandleOp::Act };
            x = self.apply(x, op, color(l.generator));
        }
        x
    }

    /// The same quandle with element `a` renamed `perm[a]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let m = self.order;
        let mut t = vec![vec![0; m]; m];
        for a in 0..m {
            for b in 0..m {
                t[perm[a]][perm[b]] = perm[self.op(a, b)];
            }
        }
        Self::from_table(format!("{}~", self.name), &t)
    }

    pub fn verify_axioms(&self) -> AxiomCheck {
        let m = self.order;
        for a in 0..m {
            if self.op(a, a) != a {
                return AxiomCheck::Violation { axiom: Axiom::Idempotence, witness: vec![a] };
            }
        }
        for b in 0..m {
            let mut seen = vec![None; m];
            for a in 0..m {
                let c = self.op(a, b);
                if let Some(a0) = seen[c] {
                    return AxiomCheck::Violation { axiom: Axiom::RightInvertibility, witness: vec![a0, a, b] };
                }
                seen[c] = Some(a);
            }
        }
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if self.op(self.op(a, b), c) != self.op(self.op(a, c), self.op(b, c)) {
                        return AxiomCheck::Violation { axiom: Axiom::SelfDistributivity, witness: vec![a, b, c] };
                    }
                }
            }
        }
        AxiomCheck::Pass
    }

    /// `fix[c]` has bit `a` set when `a ∘ c = a`.
    fn fixed_masks(&self) -> Vec<u64> {
        (0..self.order)
            .map(|c| (0..self.order).filter(|&a| self.op(a, c) == a).fold(0, |m, a| m | 1 << a))
            .collect()
    }
}

/// `dihedral:m`, `trivial:m`, `tetrahedral`, or a table file.
pub fn parse_quandle_spec(spec: &str) -> Result<FiniteQuandle> {
    let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Syntax(format!("bad quandle order in {spec:?}")));
    if let Some(m) = spec.strip_prefix("dihedral:") {
        FiniteQuandle::dihedral(num(m)?)
    } else if let Some(m) = spec.strip_prefix("trivial:") {
        FiniteQuandle::trivial(num(m)?)
    } else if spec == "tetrahedral" {
        Ok(FiniteQuandle::tetrahedral())
    } else {
        FiniteQuandle::load(Path::new(spec))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringReport {
    pub quandle: String,
    pub count: u128,
    pub elapsed: Duration,
    pub search_nodes: u64,
}

impl fmt::Display for ColoringReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.quandle, self.count)
    }
}

/// A presentation compiled to dense variables, one per identified generator.
#[derive(Clone, Debug)]
struct Problem {
    var_of: HashMap<ClassId, usize>,
    /// `(target, left, op, right)`.
    rels: Vec<(usize, usize, QuandleOp, usize)>,
    /// Relations touching each variable.
    touching: Vec<Vec<usize>>,
    is_e: Vec<bool>,
    order: Vec<usize>,
}

impl Problem {
    fn new(p: &QuandlePresentation) -> Self {
        let roots = p.classes().roots();
        let mut var_of_root: BTreeMap<ClassId, usize> = BTreeMap::new();
        for g in &p.generators {
            let n = var_of_root.len();
            var_of_root.entry(roots[g]).or_insert(n);
        }
        let var_of: HashMap<ClassId, usize> = p.generators.iter().map(|g| (*g, var_of_root[&roots[g]])).collect();
        let nv = var_of_root.len();
        let rels: Vec<_> =
            p.relations.iter().map(|r| (var_of[&r.target], var_of[&r.left], r.op, var_of[&r.right])).collect();
        let mut touching = vec![Vec::new(); nv];
        for (k, &(t, l, _, x)) in rels.iter().enumerate() {
            for v in [t, l, x] {
                if !touching[v].contains(&k) {
                    touching[v].push(k);
                }
            }
        }
        let mut is_e = vec![false; nv];
        for e in &p.e_set {
            is_e[var_of[e]] = true;
        }
        let mut order: Vec<usize> = (0..nv).collect();
        let degree = |v: usize| touching[v].len() + if is_e[v] { nv } else { 0 };
        order.sort_by_key(|&v| (std::cmp::Reverse(degree(v)), v));
        Self { var_of, rels, touching, is_e, order }
    }

    fn vars(&self) -> usize {
        self.touching.len()
    }
}

#[derive(Clone)]
struct State<'a> {
    q: &'a FiniteQuandle,
    pb: &'a Problem,
    fix: &'a [u64],
    color: Vec<Option<usize>>,
    domain: Vec<u64>,
    trail: Vec<(usize, Option<usize>, u64)>,
    nodes: u64,
}

impl<'a> State<'a> {
    fn new(q: &'a FiniteQuandle, pb: &'a Problem, fix: &'a [u64]) -> Self {
        let full = if q.order() == 64 { u64::MAX } else { (1u64 << q.order()) - 1 };
        Self { q, pb, fix, color: vec![None; pb.vars()], domain: vec![full; pb.vars()], trail: Vec::new(), nodes: 0 }
    }

    fn set(&mut self, v: usize, c: usize, queue: &mut Vec<usize>) -> bool {
        match self.color[v] {
            Some(old) => old == c,
            None => {
                if self.domain[v] & (1 << c) == 0 {
                    return false;
                }
                self.trail.push((v, None, self.domain[v]));
                self.color[v] = Some(c);
                self.domain[v] = 1 << c;
                queue.push(v);
                true
            }
        }
    }

    fn restrict(&mut self, v: usize, mask: u64) -> bool {
        let d = self.domain[v] & mask;
        if d == 0 {
            return false;
        }
        if d != self.domain[v] {
            self.trail.push((v, self.color[v], self.domain[v]));
            self.domain[v] = d;
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (v, c, d) = self.trail.pop().expect("nonempty");
            self.color[v] = c;
            self.domain[v] = d;
        }
    }

    /// Assigns `v = c` and propagates; `false` on contradiction.
    fn assign(&mut self, v: usize, c: usize) -> bool {
        let mut queue = Vec::new();
        if !self.set(v, c, &mut queue) {
            return false;
        }
        while let Some(v) = queue.pop() {
            let cv = self.color[v].expect("queued variables are colored");
            if self.pb.is_e[v] {
                for u in 0..self.pb.vars() {
                    if !self.restrict(u, self.fix[cv]) {
                        return false;
                    }
                }
            }
            for &k in &self.pb.touching[v] {
                let (t, l, op, x) = self.pb.rels[k];
                match (self.color[t], self.color[l], self.color[x]) {
                    (ct, Some(cl), Some(cx)) => {
                        let want = self.q.apply(cl, op, cx);
                        if ct.is_some_and(|ct| ct != want) || !self.set(t, want, &mut queue) {
                            return false;
                        }
                    }
                    (Some(ct), None, Some(cx)) => {
                        let want = self.q.apply(ct, opposite(op), cx);
                        if !self.set(l, want, &mut queue) {
                            return false;
                        }
                    }
                    _ => {}
                }
            }
        }
        true
    }

    fn count_from(&mut self, depth: usize, visit: &mut impl FnMut(&[Option<usize>])) -> u128 {
        self.nodes += 1;
        let Some(&v) = self.pb.order[depth..].iter().find(|&&v| self.color[v].is_none()) else {
            visit(&self.color);
            return 1;
        };
        let mut total = 0;
        let dom = self.domain[v];
        for c in 0..self.q.order() {
            if dom & (1 << c) == 0 {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(v, c) {
                total += self.count_from(depth, visit);
            }
            self.undo(mark);
        }
        total
    }
}

fn opposite(op: QuandleOp) -> QuandleOp {
    op.opposite()
}

fn require_quandle(q: &FiniteQuandle) -> Result<()> {
    match q.verify_axioms() {
        AxiomCheck::Pass => Ok(()),
        v => Err(Error::Axiom(format!("{}: {v}", q.name()))),
    }
}

/// Number of colorings of `p` by `q`: assignments to the identified
/// generators satisfying every relation, and `a ∘ e = a` for every
/// generator `a` and every `e ∈ E`.
pub fn count_colorings(p: &QuandlePresentation, q: &FiniteQuandle) -> Result<ColoringReport> {
    require_quandle(q)?;
    let start = Instant::now();
    let pb = Problem::new(p);
    let fix = q.fixed_masks();
    let (count, nodes) = match pb.order.first() {
        None => (1, 1),
        Some(&v0) => {
            let parts: Vec<(u128, u64)> = (0..q.order())
                .into_par_iter()
                .map(|c| {
                    let mut st = State::new(q, &pb, &fix);
                    if !st.assign(v0, c) {
                        return (0, 1);
                    }
                    let n = st.count_from(0, &mut |_| {});
                    (n, st.nodes)
                })
                .collect();
            parts.into_iter().fold((0, 1), |(a, b), (c, d)| (a + c, b + d))
        }
    };
    Ok(ColoringReport { quandle: q.name().to_string(), count, elapsed: start.elapsed(), search_nodes: nodes })
}

/// A complete coloring, readable by any generator id.
#[derive(Clone, Debug)]
pub struct Coloring<'a> {
    var_of: &'a HashMap<ClassId, usize>,
    colors: Vec<usize>,
}

impl Coloring<'_> {
    pub fn color(&self, id: ClassId) -> usize {
        self.colors[self.var_of[&id]]
    }
}

/// Calls `f` on every coloring of `p` by `q`.
pub fn for_each_coloring(p: &QuandlePresentation, q: &FiniteQuandle, mut f: impl FnMut(&Coloring)) -> Result<u128> {
    require_quandle(q)?;
    let pb = Problem::new(p);
    let fix = q.fixed_masks();
    let mut st = State::new(q, &pb, &fix);
    let var_of = &pb.var_of;
    let n = st.count_from(0, &mut |cols| {
        let colors = cols.iter().map(|c| c.expect("complete")).collect();
        f(&Coloring { var_of, colors });
    });
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Relation;

    /// Exhaustive count over every assignment of every identified generator.
    fn brute(p: &QuandlePresentation, q: &FiniteQuandle) -> u128 {
        let roots = p.classes().roots();
        let vars: Vec<ClassId> = p.identified_generators();
        let ix: HashMap<ClassId, usize> = vars.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let col = |a: &[usize], id: ClassId| a[ix[&roots[&id]]];
        let m = q.order();
        let mut count = 0;
        let mut a = vec![0; vars.len()];
        loop {
            let ok = p.relations.iter().all(|r| col(&a, r.target) == q.apply(col(&a, r.left), r.op, col(&a, r.right)))
                && p.e_set.iter().all(|&e| vars.iter().all(|&g| q.op(col(&a, g), col(&a, e)) == col(&a, g)));
            count += ok as u128;
            let mut k = 0;
            while k < a.len() {
                a[k] += 1;
                if a[k] < m {
                    break;
                }
                a[k] = 0;
                k += 1;
            }
            if k == a.len() {
                return count;
            }
        }
    }

    #[test]
    fn dihedral_examples() {
        let d3 = FiniteQuandle::dihedral(3).unwrap();
        assert_eq!(d3.op(0, 1), 2);
        assert_eq!(d3.op(1, 1), 1);
        assert_eq!(FiniteQuandle::dihedral(4).unwrap().op(2, 3), 0);
        assert!(FiniteQuandle::dihedral(5).unwrap().verify_axioms().passed());
        for m in 1..6 {
            assert!(FiniteQuandle::trivial(m).unwrap().verify_axioms().passed());
        }
        assert!(FiniteQuandle::tetrahedral().verify_axioms().passed());
    }

    #[test]
    fn constant_column_fails() {
        let q = FiniteQuandle::from_table("bad", &[vec![0, 1], vec![0, 1]]).unwrap();
        assert!(matches!(
            q.verify_axioms(),
            AxiomCheck::Violation { axiom: Axiom::RightInvertibility, .. }
        ));
        let p = QuandlePresentation { generators: vec![0], ..Default::default() };
        assert!(matches!(count_colorings(&p, &q), Err(Error::Axiom(_))));
    }

    #[test]
    fn specs() {
        assert_eq!(parse_quandle_spec("dihedral:3").unwrap().name(), "dihedral:3");
        assert_eq!(parse_quandle_spec("trivial:2").unwrap().order(), 2);
        assert!(parse_quandle_spec("dihedral:x").is_err());
        assert!(parse_quandle_spec("/nonexistent/table").is_err());
    }

    #[test]
    fn unknot_and_unlink() {
        let unknot = QuandlePresentation { generators: vec![0, 1], relations: vec![], identifications: vec![], e_set: vec![0, 1] };
        let d3 = FiniteQuandle::dihedral(3).unwrap();
        assert_eq!(brute(&unknot, &d3), 3);
        assert_eq!(count_colorings(&unknot, &d3).unwrap().count, 3);
        let one = FiniteQuandle::trivial(1).unwrap();
        assert_eq!(count_colorings(&unknot, &one).unwrap().count, 1);
    }

    fn random_presentation(seed: u64) -> QuandlePresentation {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let base = rng.gen_range(1..=6);
        let extra = rng.gen_range(0..=6);
        let n = base + extra;
        let mut relations = Vec::new();
        for t in base..n {
            relations.push(Relation {
                target: t,
                left: rng.gen_range(0..t),
                op: if rng.gen() { QuandleOp::Act } else { QuandleOp::Div },
                right: rng.gen_range(0..t),
                event: None,
            });
        }
        for _ in 0..rng.gen_range(0..3) {
            let t = rng.gen_range(0..n);
            relations.push(Relation {
                target: t,
                left: rng.gen_range(0..n),
                op: QuandleOp::Act,
                right: rng.gen_range(0..n),
                event: None,
            });
        }
        let identifications = (0..rng.gen_range(0..3)).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
        let e_set = (0..rng.gen_range(0..2)).map(|_| rng.gen_range(0..n)).collect();
        QuandlePresentation { generators: (0..n).collect(), relations, identifications, e_set }
    }

    #[test]
    fn pruned_search_matches_brute_force() {
        let targets = [
            FiniteQuandle::dihedral(3).unwrap(),
            FiniteQuandle::dihedral(4).unwrap(),
            FiniteQuandle::trivial(2).unwrap(),
            FiniteQuandle::tetrahedral(),
        ];
        for seed in 0..150 {
            let p = random_presentation(seed);
            for q in &targets {
                let fast = count_colorings(&p, q).unwrap().count;
                assert_eq!(fast, brute(&p, q), "seed {seed} {}", q.name());
                let mut seen = 0;
                for_each_coloring(&p, q, |c| {
                    for r in &p.relations {
                        assert_eq!(c.color(r.target), q.apply(c.color(r.left), r.op, c.color(r.right)));
                    }
                    seen += 1;
                })
                .unwrap();
                assert_eq!(seen, fast);
            }
        }
    }

    #[test]
    fn counts_invariant_under_automorphisms() {
        let d3 = FiniteQuandle::dihedral(3).unwrap();
        let mut autos = 0;
        for u in [1, 2] {
            for s in 0..3 {
                let perm: Vec<usize> = (0..3).map(|a| (u * a + s) % 3).collect();
                let r = d3.relabel(&perm).unwrap();
                assert_eq!(r.op, d3.op, "affine maps are automorphisms");
                autos += 1;
            }
        }
        assert_eq!(autos, 6);
        // a non-automorphism relabeling still yields an isomorphic quandle with equal counts
        let r = d3.relabel(&[1, 0, 2]).unwrap();
        for seed in 0..40 {
            let p = random_presentation(seed);
            assert_eq!(count_colorings(&p, &d3).unwrap().count, count_colorings(&p, &r).unwrap().count);
        }
    }
}
