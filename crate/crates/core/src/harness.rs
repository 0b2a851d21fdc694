//! End-to-end pipelines, invariance comparisons and lemma-level checks.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::braid::{apply_move, applicable_moves, plat_structure, BraidWord, Move, PlatStructure};
use crate::error::{Error, Result};
use crate::finite::{count_colorings, for_each_coloring, parse_quandle_spec, Coloring, FiniteQuandle};
use crate::free_quandle::{fq_op, FreeQuandleWord};
use crate::presentation::{build_braid_sq, build_plat_presentation, BraidSq, QuandlePresentation};
use crate::trace::{build_secant_trace, classify_trivial, effective_sign, ClassId, QuandleOp, SecantTrace, TrivialityContext, TrivialityMark};
use crate::trisecant::{realize_generic, Realization};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PipelineOptions {
    pub seed: u64,
    pub retries: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self { seed: 0, retries: 5 }
    }
}

impl PipelineOptions {
    fn other(self) -> Self {
        Self { seed: self.seed.wrapping_add(0x51_7CC1_B727), ..self }
    }
}

#[derive(Clone, Debug)]
pub struct BraidPipeline {
    pub realization: Realization,
    pub trace: SecantTrace,
    pub sq: BraidSq,
}

pub fn run_braid(w: &BraidWord, opts: PipelineOptions) -> Result<BraidPipeline> {
    let realization = realize_generic(w, opts.seed, opts.retries)?;
    let trace = build_secant_trace(&realization.events, w.strands())?;
    let sq = build_braid_sq(&trace);
    Ok(BraidPipeline { realization, trace, sq })
}

#[derive(Clone, Debug)]
pub struct PlatPipeline {
    pub realization: Realization,
    pub trace: SecantTrace,
    pub plat: PlatStructure,
    pub presentation: QuandlePresentation,
}

impl PlatPipeline {
    /// Classifier context: identifications, `E` and orientations of this closure.
    pub fn context(&self) -> TrivialityContext {
        let roots = self.presentation.classes().roots();
        let root: Vec<ClassId> = (0..self.trace.class_count()).map(|c| roots[&c]).collect();
        let e_set = self.presentation.e_set.iter().map(|e| root[*e]).collect();
        TrivialityContext { root, e_set, orientation: self.plat.orientation.clone() }
    }
}

pub fn run_plat(w: &BraidWord, opts: PipelineOptions) -> Result<PlatPipeline> {
    let plat = plat_structure(w)?;
    let realization = realize_generic(w, opts.seed, opts.retries)?;
    let trace = build_secant_trace(&realization.events, w.strands())?;
    let presentation = build_plat_presentation(&trace, &plat)?;
    Ok(PlatPipeline { realization, trace, plat, presentation })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvariantKind {
    TopMap,
    ColoringCounts,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A directed strand pair (0-based) with differing words.
    Pair { pair: (usize, usize), left: FreeQuandleWord, right: FreeQuandleWord },
    Counts { quandle: String, left: u128, right: u128 },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Pair { pair, left, right } => {
                write!(f, "pair ({},{}): {left} vs {right}", pair.0 + 1, pair.1 + 1)
            }
            Witness::Counts { quandle, left, right } => write!(f, "{quandle}: {left} vs {right}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    Unequal(Witness),
}

#[derive(Clone, Debug)]
pub struct ComparisonResult {
    pub inputs: (BraidWord, BraidWord),
    pub kind: InvariantKind,
    pub verdict: Verdict,
    pub events: (usize, usize),
    pub retries: (usize, usize),
}

impl ComparisonResult {
    pub fn equal(&self) -> bool {
        self.verdict == Verdict::Equal
    }
}

impl fmt::Display for ComparisonResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] vs [{}]: ", self.inputs.0, self.inputs.1)?;
        match &self.verdict {
            Verdict::Equal => f.write_str("equal"),
            Verdict::Unequal(w) => write!(f, "unequal ({w})"),
        }
    }
}

/// Compares braid top-maps over independent realizations.
pub fn compare_braids(w1: &BraidWord, w2: &BraidWord, opts: PipelineOptions) -> Result<ComparisonResult> {
    if w1.strands() != w2.strands() || w1.permutation() != w2.permutation() {
        return Err(Error::Incomparable(format!("[{w1}] and [{w2}] induce different permutations")));
    }
    let a = run_braid(w1, opts)?;
    let b = run_braid(w2, opts.other())?;
    let verdict = a
        .sq
        .top_map
        .iter()
        .zip(&b.sq.top_map)
        .find(|((_, x), (_, y))| x != y)
        .map_or(Verdict::Equal, |((&pair, x), (_, y))| {
            Verdict::Unequal(Witness::Pair { pair, left: x.clone(), right: y.clone() })
        });
    Ok(ComparisonResult {
        inputs: (w1.clone(), w2.clone()),
        kind: InvariantKind::TopMap,
        verdict,
        events: (a.realization.events.len(), b.realization.events.len()),
        retries: (a.realization.retries, b.realization.retries),
    })
}

/// Compares coloring counts of two plat closures into every target.
pub fn compare_plats(
    w1: &BraidWord,
    w2: &BraidWord,
    targets: &[FiniteQuandle],
    opts: PipelineOptions,
) -> Result<ComparisonResult> {
    let a = run_plat(w1, opts)?;
    let b = run_plat(w2, opts.other())?;
    let mut verdict = Verdict::Equal;
    for q in targets {
        let x = count_colorings(&a.presentation, q)?.count;
        let y = count_colorings(&b.presentation, q)?.count;
        if x != y {
            verdict = Verdict::Unequal(Witness::Counts { quandle: q.name().to_string(), left: x, right: y });
            break;
        }
    }
    Ok(ComparisonResult {
        inputs: (w1.clone(), w2.clone()),
        kind: InvariantKind::ColoringCounts,
        verdict,
        events: (a.realization.events.len(), b.realization.events.len()),
        retries: (a.realization.retries, b.realization.retries),
    })
}

/// Coloring counts after reversing each component in turn, compared with
/// the seeded orientation. One entry per component.
pub fn orientation_flips(w: &BraidWord, targets: &[FiniteQuandle], opts: PipelineOptions) -> Result<Vec<Verdict>> {
    let p = run_plat(w, opts)?;
    let base: Vec<u128> = targets.iter().map(|q| count_colorings(&p.presentation, q).map(|r| r.count)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for comp in &p.plat.components {
        let mut plat = p.plat.clone();
        for &s in comp {
            plat.orientation[s] = plat.orientation[s].flip();
        }
        let flipped = build_plat_presentation(&p.trace, &plat)?;
        let mut verdict = Verdict::Equal;
        for (q, &x) in targets.iter().zip(&base) {
            let y = count_colorings(&flipped, q)?.count;
            if x != y {
                verdict = Verdict::Unequal(Witness::Counts { quandle: q.name().to_string(), left: x, right: y });
                break;
            }
        }
        out.push(verdict);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkKind {
    Braid,
    Plat,
}

/// A uniformly random word with `len` letters on `strands` strands.
pub fn random_word(rng: &mut impl Rng, strands: usize, len: usize) -> BraidWord {
    let letters = (0..len)
        .map(|_| {
            let g = rng.gen_range(1..strands as i32);
            if rng.gen() {
                g
            } else {
                -g
            }
        })
        .collect();
    BraidWord::new(strands, letters).expect("letters in range")
}

/// Applies `steps` random moves to `w`.
///
/// Each step draws uniformly among the applicable moves plus one random
/// insertion of a cancelling pair; plat walks add the K-moves and
/// (de)stabilization. Returns the start, the end and the move log.
pub fn random_equivalent_pair(
    w: &BraidWord,
    kind: WalkKind,
    steps: usize,
    seed: u64,
) -> Result<(BraidWord, BraidWord, Vec<Move>)> {
    let plat = kind == WalkKind::Plat;
    if plat && w.strands() % 2 != 0 {
        return Err(Error::Parity(format!("plat walk on {} strands", w.strands())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = w.clone();
    let mut log = Vec::with_capacity(steps);
    for _ in 0..steps {
        let mut cands = applicable_moves(&cur, plat);
        if cur.strands() >= 2 {
            let g = rng.gen_range(1..cur.strands() as i32);
            let letter = if rng.gen() { g } else { -g };
            cands.push(Move::FreeInsert { pos: rng.gen_range(0..=cur.len()), letter });
        }
        if cands.is_empty() {
            break;
        }
        let m = cands[rng.gen_range(0..cands.len())];
        cur = apply_move(&cur, m)?;
        log.push(m);
    }
    Ok((w.clone(), cur, log))
}

/// Replays a move log.
pub fn replay(w: &BraidWord, log: &[Move]) -> Result<BraidWord> {
    log.iter().try_fold(w.clone(), |cur, m| apply_move(&cur, *m))
}

/// A quandle expression over secant classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Class(ClassId),
    Op(Box<Expr>, QuandleOp, Box<Expr>),
}

impl Expr {
    fn op(a: Expr, op: QuandleOp, b: Expr) -> Expr {
        Expr::Op(Box::new(a), op, Box::new(b))
    }

    fn eval_word(&self, words: &[FreeQuandleWord]) -> FreeQuandleWord {
        match self {
            Expr::Class(c) => words[*c].clone(),
            Expr::Op(a, op, b) => fq_op(&a.eval_word(words), &b.eval_word(words), *op),
        }
    }

    fn eval_color(&self, q: &FiniteQuandle, col: &Coloring) -> usize {
        match self {
            Expr::Class(c) => col.color(*c),
            Expr::Op(a, op, b) => q.apply(a.eval_color(q, col), *op, b.eval_color(q, col)),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Class(c) => write!(f, "{c}"),
            Expr::Op(a, op, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LemmaKind {
    /// A Type-1 event leaves its changed classes fixed.
    Type1,
    /// A Type-2 pair restores the classes it changed.
    Type2,
    /// The word identities of a tetrahedral (four-strand) window.
    Tetra,
}

/// An equality the lemmas predict.
#[derive(Clone, Debug)]
pub struct Claim {
    pub kind: LemmaKind,
    pub events: Vec<usize>,
    pub lhs: Expr,
    pub rhs: Expr,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at events {:?}: {} = {}", self.kind, self.events, self.lhs, self.rhs)
    }
}

/// One tetrahedral window: `ijl, ijk, jkl, ikl` in time order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TetraWindow {
    /// Strands `(i, j, k, l)`.
    pub strands: (usize, usize, usize, usize),
    pub events: [usize; 4],
}

/// Operation of event `k` read from strand `from` across its surface.
fn reading_op(trace: &SecantTrace, ctx: &TrivialityContext, k: usize, from: usize) -> QuandleOp {
    let e = &trace.events()[k];
    let s = effective_sign(e, &ctx.orientation);
    let s = if from == e.triple.0 { s } else { s.flip() };
    QuandleOp::from_sign(s)
}

fn unordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Tetrahedral windows with no other event on any of the six surfaces of
/// `{i, j, k, l}` between the first and last event.
pub fn tetra_windows(trace: &SecantTrace) -> Vec<TetraWindow> {
    let ev = trace.events();
    let mut out = Vec::new();
    let mut next_on: std::collections::HashMap<(usize, usize), Vec<usize>> = Default::default();
    for (k, e) in ev.iter().enumerate() {
        next_on.entry(e.surface()).or_default().push(k);
    }
    for list in next_on.values() {
        for pair in list.windows(2) {
            let (e1, e4) = (pair[0], pair[1]);
            let (x, y) = ev[e1].surface();
            let (j, k) = (ev[e1].middle(), ev[e4].middle());
            if j == k {
                continue;
            }
            for (i, l) in [(x, y), (y, x)] {
                let quad = [i, j, k, l];
                let between: Vec<usize> = (e1 + 1..e4)
                    .filter(|&m| {
                        let (a, _, c) = ev[m].triple;
                        quad.contains(&a) && quad.contains(&c)
                    })
                    .collect();
                if between.len() != 2 {
                    continue;
                }
                let (e2, e3) = (between[0], between[1]);
                let ok2 = ev[e2].surface() == unordered(i, k) && ev[e2].middle() == j;
                let ok3 = ev[e3].surface() == unordered(j, l) && ev[e3].middle() == k;
                if ok2 && ok3 {
                    out.push(TetraWindow { strands: (i, j, k, l), events: [e1, e2, e3, e4] });
                }
            }
        }
    }
    out.sort_by_key(|w| w.events);
    out
}

/// Every equality predicted by the trivial-trisecant lemmas and by tetrahedral windows,
/// plus the structural problems found while collecting them.
pub fn lemma_claims(trace: &SecantTrace, ctx: &TrivialityContext) -> (Vec<Claim>, Vec<String>) {
    let mut claims = Vec::new();
    let mut problems = Vec::new();
    let c = Expr::Class;
    for mark in classify_trivial(trace, ctx) {
        match mark {
            TrivialityMark::Type1 { event, .. } => {
                let inc = trace.incidence(event);
                for (lhs, rhs) in [(inc.ac_after, inc.ac_before), (inc.ca_after, inc.ca_before)] {
                    claims.push(Claim { kind: LemmaKind::Type1, events: vec![event], lhs: c(lhs), rhs: c(rhs) });
                }
            }
            TrivialityMark::Type2Pair { first, second, .. } => {
                let (i1, i2) = (trace.incidence(first), trace.incidence(second));
                for (lhs, rhs) in [(i2.ac_after, i1.ac_before), (i2.ca_after, i1.ca_before)] {
                    claims.push(Claim { kind: LemmaKind::Type2, events: vec![first, second], lhs: c(lhs), rhs: c(rhs) });
                }
            }
            TrivialityMark::None { .. } => {}
        }
    }
    for w in tetra_windows(trace) {
        let (i, j, k, l) = w.strands;
        let [e1, e2, e3, e4] = w.events;
        let star = reading_op(trace, ctx, e1, i);
        let star2 = reading_op(trace, ctx, e2, i);
        let ast = reading_op(trace, ctx, e4, i);
        let ast3 = reading_op(trace, ctx, e3, j);
        if star != star2 || ast != ast3 {
            problems.push(format!(
                "tetrahedral window at events {:?}: operations differ ({}{} / {}{})",
                w.events,
                star.symbol(),
                star2.symbol(),
                ast3.symbol(),
                ast.symbol()
            ));
        }
        let il_minus = trace.class_after(i, l, e4);
        let il_plus = trace.class_before(i, l, e1);
        let ik_plus = trace.class_before(i, k, e2);
        let ij = trace.class_before(i, j, e1);
        claims.push(Claim {
            kind: LemmaKind::Tetra,
            events: w.events.to_vec(),
            lhs: c(il_minus),
            rhs: Expr::op(Expr::op(c(il_plus), ast, c(ik_plus)), star, c(ij)),
        });
        let jl_minus = trace.class_after(j, l, e4);
        let jl_plus = trace.class_before(j, l, e1);
        let jk = trace.class_before(j, k, e3);
        claims.push(Claim {
            kind: LemmaKind::Tetra,
            events: w.events.to_vec(),
            lhs: c(jl_minus),
            rhs: Expr::op(c(jl_plus), ast3, c(jk)),
        });
    }
    (claims, problems)
}

#[derive(Clone, Debug, Default)]
pub struct LemmaReport {
    pub type1: usize,
    pub type2: usize,
    pub tetra: usize,
    pub violations: Vec<String>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn tally(&mut self, claims: &[Claim]) {
        for cl in claims {
            match cl.kind {
                LemmaKind::Type1 => self.type1 += 1,
                LemmaKind::Type2 => self.type2 += 1,
                LemmaKind::Tetra => self.tetra += 1,
            }
        }
    }

    pub fn merge(&mut self, o: LemmaReport) {
        self.type1 += o.type1;
        self.type2 += o.type2;
        self.tetra += o.tetra;
        self.violations.extend(o.violations);
    }
}

/// Checks the claims of a braid as reduced free-quandle words.
pub fn check_braid_lemmas(p: &BraidPipeline) -> LemmaReport {
    let ctx = TrivialityContext::braid(&p.trace);
    let (claims, problems) = lemma_claims(&p.trace, &ctx);
    let mut rep = LemmaReport { violations: problems, ..Default::default() };
    rep.tally(&claims);
    for cl in &claims {
        let (l, r) = (cl.lhs.eval_word(&p.sq.words), cl.rhs.eval_word(&p.sq.words));
        if l != r {
            rep.violations.push(format!("{cl}: {l} vs {r}"));
        }
    }
    rep
}

/// Checks the claims of a plat closure in every coloring by every target.
pub fn check_plat_lemmas(p: &PlatPipeline, targets: &[FiniteQuandle]) -> Result<LemmaReport> {
    let ctx = p.context();
    let (claims, problems) = lemma_claims(&p.trace, &ctx);
    let mut rep = LemmaReport { violations: problems, ..Default::default() };
    rep.tally(&claims);
    for q in targets {
        let mut failed = vec![false; claims.len()];
        for_each_coloring(&p.presentation, q, |col| {
            for (k, cl) in claims.iter().enumerate() {
                if !failed[k] && cl.lhs.eval_color(q, col) != cl.rhs.eval_color(q, col) {
                    failed[k] = true;
                }
            }
        })?;
        for (k, cl) in claims.iter().enumerate() {
            if failed[k] {
                rep.violations.push(format!("{cl}: fails in some {} coloring", q.name()));
            }
        }
    }
    Ok(rep)
}

/// Harness settings, read from `key=value` lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarnessConfig {
    pub seeds: Vec<u64>,
    pub steps: usize,
    pub targets: Vec<String>,
    pub max_strands: usize,
    pub max_word_len: usize,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            seeds: (0..10).collect(),
            steps: 5,
            targets: vec!["dihedral:3".into(), "dihedral:5".into(), "trivial:2".into()],
            max_strands: 5,
            max_word_len: 8,
        }
    }
}

fn parse_seeds(v: &str) -> Result<Vec<u64>> {
    let bad = || Error::Syntax(format!("bad seeds {v:?}"));
    let mut out = Vec::new();
    for part in v.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b): (u64, u64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            out.extend(a..b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}

impl FromStr for HarnessConfig {
    type Err = Error;

    /// `seeds` takes a list such as `0,3,7` or a range `0..20`; `targets` a
    /// comma-separated list of quandle specs.
    fn from_str(text: &str) -> Result<Self> {
        let mut c = HarnessConfig::default();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Syntax(format!("expected key=value: {line:?}")))?;
            let (k, v) = (k.trim(), v.trim());
            let num = || v.parse::<usize>().map_err(|_| Error::Syntax(format!("bad value for {k}: {v:?}")));
            match k {
                "seeds" => c.seeds = parse_seeds(v)?,
                "steps" => c.steps = num()?,
                "targets" => c.targets = v.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect(),
                "max_strands" => c.max_strands = num()?,
                "max_word_len" => c.max_word_len = num()?,
                _ => return Err(Error::Syntax(format!("unknown key {k:?}"))),
            }
        }
        if c.max_strands < 2 {
            return Err(Error::Syntax("max_strands must be at least 2".into()));
        }
        Ok(c)
    }
}

/// One line of the verify table.
#[derive(Clone, Debug)]
pub struct CheckRow {
    pub check: String,
    pub seed: u64,
    pub input: String,
    pub passed: bool,
    pub detail: String,
}

/// Braid and plat invariance, realization independence and lemma checks
/// for every configured seed.
pub fn run_verify(cfg: &HarnessConfig, opts: PipelineOptions) -> Result<Vec<CheckRow>> {
    let targets: Vec<FiniteQuandle> = cfg.targets.iter().map(|t| parse_quandle_spec(t)).collect::<Result<_>>()?;
    let rows: Vec<Result<Vec<CheckRow>>> =
        cfg.seeds.par_iter().map(|&seed| verify_seed(cfg, &targets, seed, opts)).collect();
    let mut out = Vec::new();
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}

fn row(check: &str, seed: u64, input: String, res: Result<(bool, String)>) -> Result<CheckRow> {
    let (passed, detail) = match res {
        Ok(x) => x,
        Err(e @ Error::GenericityExhausted { .. }) => return Err(e),
        Err(e) => (false, e.to_string()),
    };
    Ok(CheckRow { check: check.into(), seed, input, passed, detail })
}

fn verify_seed(cfg: &HarnessConfig, targets: &[FiniteQuandle], seed: u64, opts: PipelineOptions) -> Result<Vec<CheckRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let n = rng.gen_range(3..=cfg.max_strands.max(3));
    let len = rng.gen_range(0..=cfg.max_word_len);
    let w = random_word(&mut rng, n, len);
    let opts = PipelineOptions { seed: opts.seed ^ seed, ..opts };

    let (_, w2, log) = random_equivalent_pair(&w, WalkKind::Braid, cfg.steps, seed)?;
    rows.push(row("braid", seed, format!("[{w}] -> [{w2}] ({} moves)", log.len()), compare_braids(&w, &w2, opts).map(|c| (c.equal(), c.to_string())))?);

    let independent = run_braid(&w, opts).and_then(|a| {
        let b = run_braid(&w, PipelineOptions { seed: opts.seed.wrapping_add(1), ..opts })?;
        Ok((a.sq.top_map == b.sq.top_map, format!("{} / {} events", a.realization.events.len(), b.realization.events.len())))
    });
    rows.push(row("realization", seed, format!("[{w}]"), independent)?);

    let lemmas = run_braid(&w, opts).map(|p| {
        let r = check_braid_lemmas(&p);
        (r.passed(), lemma_detail(&r))
    });
    rows.push(row("lemmas-braid", seed, format!("[{w}]"), lemmas)?);

    let pn = (n / 2 * 2).max(2);
    let pw = random_word(&mut rng, pn, len);
    let (_, pw2, log) = random_equivalent_pair(&pw, WalkKind::Plat, cfg.steps, seed)?;
    rows.push(row(
        "plat",
        seed,
        format!("[{pw}] -> [{pw2}] ({} moves)", log.len()),
        compare_plats(&pw, &pw2, targets, opts).map(|c| (c.equal(), c.to_string())),
    )?);
    let plat_lemmas = run_plat(&pw, opts).and_then(|p| check_plat_lemmas(&p, targets)).map(|r| (r.passed(), lemma_detail(&r)));
    rows.push(row("lemmas-plat", seed, format!("[{pw}]"), plat_lemmas)?);
    let flips = orientation_flips(&pw, targets, opts).map(|vs| {
        let bad = vs.iter().find(|v| **v != Verdict::Equal);
        (bad.is_none(), bad.map_or(format!("{} components", vs.len()), |v| format!("{v:?}")))
    });
    rows.push(row("orientation", seed, format!("[{pw}]"), flips)?);
    Ok(rows)
}

fn lemma_detail(r: &LemmaReport) -> String {
    let mut s = format!("type1={} type2={} tetra={}", r.type1, r.type2, r.tetra);
    if let Some(v) = r.violations.first() {
        s.push_str(&format!("; {v}"));
    }
    s
}

/// Hand-picked words plus seeded random ones, used by the lemma and
/// genericity checks.
pub fn corpus() -> Vec<BraidWord> {
    let fixed = [
        "2:", "2: 1", "3:", "3: 1", "3: 1 2 1", "3: 2 1 2", "3: 1 -2", "3: 1 1 1", "3: 1 -1",
        "4: 2 2 2", "4: 2 1 1 2", "4: 1 3", "4: 2 1 3 2", "4: 1 2 3 2 1", "4: -2 1 -3 2",
        "5: 1 2 3 4", "5: 2 -3 1 4 -2", "6: 2 4 3 1 5", "6: 2 2 2 4",
    ];
    let mut out: Vec<BraidWord> = fixed.iter().map(|t| t.parse().expect("valid corpus word")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..40 {
        let n = 3 + k % 4;
        let len = rng.gen_range(1..=8);
        out.push(random_word(&mut rng, n, len));
    }
    out
}
