//! Exact solving: classical reducts and fixpoints, the communicating reduct,
//! answer-set checking, and bounded enumeration of communicating answer sets.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{
    CommunicatingProgram, ComponentName, Interpretation, Literal, ProgramClass, SituatedLiteral,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("candidate universe has {size} literals, exceeding the bound of {bound}")]
    BoundExceeded { size: usize, bound: usize },
    #[error("fixpoint derives both {0} and its classical negation")]
    InconsistentFixpoint(SituatedLiteral),
    #[error("operation requires a {expected} program, got a {found} one")]
    ClassMismatch {
        expected: ProgramClass,
        found: ProgramClass,
    },
    #[error("unknown component `{0}`")]
    UnknownComponent(ComponentName),
    #[error("brave and cautious queries require a literal")]
    MissingQueryLiteral,
}

/// Tuning knobs for enumeration and answer-set checking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineOptions {
    /// Maximum size of the enumerated candidate universe (hard cap 64).
    pub bound: usize,
    /// Restrict the candidate universe to head-supported literals. Every
    /// answer set projection is a reduct fixpoint or minimal model, hence
    /// made of rule heads, so pruning is lossless; switching it off
    /// enumerates over the full base `HB ∪ ¬HB` instead.
    pub prune: bool,
    /// For disjunctive programs, require each projection to be the *unique*
    /// minimal model of its reduct rather than *a* minimal model.
    pub strict_unique_disjunctive: bool,
    /// Worker threads for enumeration. Results are identical for any value.
    pub jobs: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            bound: 24,
            prune: true,
            strict_unique_disjunctive: false,
            jobs: 1,
        }
    }
}

/// Largest representable candidate universe (one bit per literal).
pub const MAX_BOUND: usize = 64;

/// A rule over plain literals, as obtained by grounding a component against
/// an interpretation or by flattening a network into one universe.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ClassicalRule {
    pub head: BTreeSet<Literal>,
    pub body_pos: BTreeSet<Literal>,
    pub body_neg: BTreeSet<Literal>,
}

impl ClassicalRule {
    pub fn new(
        head: impl IntoIterator<Item = Literal>,
        body_pos: impl IntoIterator<Item = Literal>,
        body_neg: impl IntoIterator<Item = Literal>,
    ) -> Self {
        ClassicalRule {
            head: head.into_iter().collect(),
            body_pos: body_pos.into_iter().collect(),
            body_neg: body_neg.into_iter().collect(),
        }
    }
}

/// A non-communicating program: a bag of [`ClassicalRule`]s.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassicalProgram {
    pub rules: Vec<ClassicalRule>,
}

impl ClassicalProgram {
    pub fn new(rules: impl IntoIterator<Item = ClassicalRule>) -> Self {
        ClassicalProgram {
            rules: rules.into_iter().collect(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.rules.iter().all(|r| r.body_neg.is_empty())
    }

    pub fn is_nondisjunctive(&self) -> bool {
        self.rules.iter().all(|r| r.head.len() <= 1)
    }

    /// All literals occurring in rule heads.
    pub fn head_literals(&self) -> BTreeSet<Literal> {
        self.rules
            .iter()
            .flat_map(|r| r.head.iter().cloned())
            .collect()
    }
}

/// The Gelfond-Lifschitz reduct of a classical program: drops rules blocked
/// by `I` under negation-as-failure and strips the remaining naf literals.
pub fn classical_reduct(p: &ClassicalProgram, i: &BTreeSet<Literal>) -> ClassicalProgram {
    ClassicalProgram::new(p.rules.iter().filter_map(|r| {
        if r.body_neg.iter().any(|l| i.contains(l)) {
            None
        } else {
            Some(ClassicalRule {
                head: r.head.clone(),
                body_pos: r.body_pos.clone(),
                body_neg: BTreeSet::new(),
            })
        }
    }))
}

/// Least fixpoint of the immediate-consequence operator of a positive,
/// non-disjunctive program. Fails if the fixpoint is classically
/// inconsistent (the offending literal is reported situated at `at` by
/// callers; here it is returned bare).
pub fn classical_fixpoint(p: &ClassicalProgram) -> Result<BTreeSet<Literal>, Literal> {
    debug_assert!(p.is_positive() && p.is_nondisjunctive());
    let set = raw_fixpoint(p);
    for l in &set {
        if l.positive && set.contains(&l.negated()) {
            return Err(l.clone());
        }
    }
    Ok(set)
}

/// Least fixpoint without the consistency check.
pub fn raw_fixpoint(p: &ClassicalProgram) -> BTreeSet<Literal> {
    let mut set: BTreeSet<Literal> = BTreeSet::new();
    loop {
        let mut changed = false;
        for r in &p.rules {
            if r.body_pos.iter().all(|l| set.contains(l)) {
                for h in &r.head {
                    changed |= set.insert(h.clone());
                }
            }
        }
        if !changed {
            return set;
        }
    }
}

fn is_classical_model(p: &ClassicalProgram, i: &BTreeSet<Literal>) -> bool {
    p.rules.iter().all(|r| {
        !r.body_pos.iter().all(|l| i.contains(l))
            || r.body_neg.iter().any(|l| i.contains(l))
            || r.head.iter().any(|l| i.contains(l))
    })
}

fn is_consistent(i: &BTreeSet<Literal>) -> bool {
    i.iter().all(|l| !l.positive || !i.contains(&l.negated()))
}

/// All ⊆-minimal consistent models of a positive program. Minimal models
/// consist of head literals only, so the search space is the powerset of the
/// head-literal set.
pub fn minimal_models(p: &ClassicalProgram) -> Vec<BTreeSet<Literal>> {
    debug_assert!(p.is_positive());
    let heads: Vec<Literal> = p.head_literals().into_iter().collect();
    assert!(
        heads.len() < MAX_BOUND,
        "minimal-model search space too large"
    );
    let mut models: Vec<BTreeSet<Literal>> = Vec::new();
    for mask in 0u64..(1u64 << heads.len()) {
        let cand: BTreeSet<Literal> = heads
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, l)| l.clone())
            .collect();
        if is_consistent(&cand) && is_classical_model(p, &cand) {
            models.push(cand);
        }
    }
    models
        .iter()
        .filter(|m| !models.iter().any(|o| o != *m && o.is_subset(m)))
        .cloned()
        .collect()
}

/// The communicating reduct of component `q` with respect to `i`: rules
/// blocked by a satisfied naf literal or by an absent non-local positive
/// literal are dropped, and the surviving bodies keep only their local
/// positive part. The result is a positive program over `q`-local literals.
pub fn communicating_reduct(
    p: &CommunicatingProgram,
    q: &ComponentName,
    i: &Interpretation,
) -> Result<ClassicalProgram, EngineError> {
    let comp = p
        .component(q)
        .ok_or_else(|| EngineError::UnknownComponent(q.clone()))?;
    Ok(ClassicalProgram::new(comp.rules().iter().filter_map(|r| {
        if r.body_neg.iter().any(|l| i.contains(l)) {
            return None;
        }
        let foreign_absent = r
            .body_pos
            .iter()
            .any(|l| !l.is_local_to(q) && !i.contains(l));
        if foreign_absent {
            return None;
        }
        Some(ClassicalRule {
            head: r.head.iter().map(|l| l.literal.clone()).collect(),
            body_pos: r
                .body_pos
                .iter()
                .filter(|l| l.is_local_to(q))
                .map(|l| l.literal.clone())
                .collect(),
            body_neg: BTreeSet::new(),
        })
    })))
}

/// Whether a projection is a ⊆-minimal model of a positive program.
/// A minimal model contains only head literals, so it suffices to check
/// model-hood and the absence of a proper sub-model within `m`.
fn is_minimal_model(p: &ClassicalProgram, m: &BTreeSet<Literal>) -> bool {
    if !is_classical_model(p, m) {
        return false;
    }
    let heads = p.head_literals();
    if !m.iter().all(|l| heads.contains(l)) {
        return false;
    }
    let elems: Vec<&Literal> = m.iter().collect();
    assert!(
        elems.len() < MAX_BOUND,
        "minimal-model check space too large"
    );
    for mask in 0u64..(1u64 << elems.len()) - 1 {
        let sub: BTreeSet<Literal> = elems
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, l)| (*l).clone())
            .collect();
        if is_classical_model(p, &sub) {
            return false;
        }
    }
    true
}

/// Checks the answer-set condition: for every component `q`, the projection
/// of `i` on `q` must be an answer set of the reduct of `q` with respect to
/// `i` — the reduct's least fixpoint for simple and normal programs, one of
/// its minimal models (or its unique minimal model, under
/// `strict_unique_disjunctive`) for disjunctive ones.
pub fn is_answer_set(
    p: &CommunicatingProgram,
    i: &Interpretation,
    opts: &EngineOptions,
) -> Result<bool, EngineError> {
    for sl in i.literals() {
        if p.component(&sl.component).is_none() {
            return Err(EngineError::UnknownComponent(sl.component.clone()));
        }
    }
    for comp in p.components() {
        let m = i.project(&comp.name);
        let reduct = communicating_reduct(p, &comp.name, i)?;
        let ok = match p.class() {
            ProgramClass::Simple | ProgramClass::Normal => {
                matches!(classical_fixpoint(&reduct), Ok(fp) if fp == m)
            }
            ProgramClass::Disjunctive => {
                if opts.strict_unique_disjunctive {
                    minimal_models(&reduct) == vec![m]
                } else {
                    is_minimal_model(&reduct, &m)
                }
            }
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One application of the immediate-consequence operator over situated
/// literals: the heads of all rules whose positive body lies inside `i` and
/// whose naf body misses it.
pub fn tp_step(
    p: &CommunicatingProgram,
    i: &BTreeSet<SituatedLiteral>,
) -> BTreeSet<SituatedLiteral> {
    p.rules()
        .filter(|r| {
            r.body_pos.iter().all(|l| i.contains(l)) && !r.body_neg.iter().any(|l| i.contains(l))
        })
        .flat_map(|r| r.head.iter().cloned())
        .collect()
}

/// Least fixpoint of a simple communicating program: its unique ⊆-minimal
/// answer set, computed in polynomial time without enumeration.
pub fn communicating_fixpoint(p: &CommunicatingProgram) -> Result<Interpretation, EngineError> {
    if p.class() != ProgramClass::Simple {
        return Err(EngineError::ClassMismatch {
            expected: ProgramClass::Simple,
            found: p.class(),
        });
    }
    let mut set = BTreeSet::new();
    loop {
        let next = tp_step(p, &set);
        // tp_step is inflationary on simple programs only when unioned
        let next: BTreeSet<SituatedLiteral> = next.union(&set).cloned().collect();
        if next == set {
            break;
        }
        set = next;
    }
    for sl in &set {
        if sl.literal.positive && set.contains(&sl.negated()) {
            return Err(EngineError::InconsistentFixpoint(sl.clone()));
        }
    }
    Ok(Interpretation::new(set).expect("checked consistent"))
}

/// The candidate universe that enumeration ranges over: head-supported
/// situated literals when pruning, otherwise the signed Herbrand base.
pub fn candidate_universe(p: &CommunicatingProgram, prune: bool) -> Vec<SituatedLiteral> {
    let set: BTreeSet<SituatedLiteral> = if prune {
        p.rules().flat_map(|r| r.head.iter().cloned()).collect()
    } else {
        p.herbrand_base()
            .into_iter()
            .flat_map(|sl| [sl.negated(), sl])
            .collect()
    };
    set.into_iter().collect()
}

/// Per-rule bitmasks over the candidate universe, used to discard candidate
/// sets that fail to be classical models (a necessary condition for the
/// answer-set property) as early as possible during the subset search.
struct RuleMasks {
    pos: u64,
    neg: u64,
    head: u64,
}

impl RuleMasks {
    fn violated_by(&self, mask: u64) -> bool {
        mask & self.pos == self.pos && mask & self.neg == 0 && mask & self.head == 0
    }
}

struct Search<'a> {
    p: &'a CommunicatingProgram,
    opts: &'a EngineOptions,
    universe: &'a [SituatedLiteral],
    /// Bit index of each literal's classical complement, where present.
    complement: Vec<Option<usize>>,
    /// Rule masks grouped by the highest bit they mention: checked as soon
    /// as that bit is decided.
    by_depth: Vec<Vec<RuleMasks>>,
    /// Rules violated by every candidate (e.g. a fact whose head fell
    /// outside the universe): the search space is empty.
    unsatisfiable: bool,
}

impl<'a> Search<'a> {
    fn new(
        p: &'a CommunicatingProgram,
        opts: &'a EngineOptions,
        universe: &'a [SituatedLiteral],
    ) -> Self {
        let index = |sl: &SituatedLiteral| universe.binary_search(sl).ok();
        let complement = universe.iter().map(|sl| index(&sl.negated())).collect();
        let mut by_depth: Vec<Vec<RuleMasks>> = (0..universe.len()).map(|_| Vec::new()).collect();
        let mut unsatisfiable = false;
        'rules: for r in p.rules() {
            let mut masks = RuleMasks {
                pos: 0,
                neg: 0,
                head: 0,
            };
            let mut depth = 0usize;
            for l in &r.body_pos {
                match index(l) {
                    // a positive body literal outside the universe can never
                    // hold, so the rule can never be violated
                    None => continue 'rules,
                    Some(k) => {
                        masks.pos |= 1 << k;
                        depth = depth.max(k);
                    }
                }
            }
            for l in &r.body_neg {
                if let Some(k) = index(l) {
                    masks.neg |= 1 << k;
                    depth = depth.max(k);
                }
            }
            for l in &r.head {
                if let Some(k) = index(l) {
                    masks.head |= 1 << k;
                    depth = depth.max(k);
                }
            }
            if masks.pos == 0 && masks.neg == 0 && masks.head == 0 {
                unsatisfiable = true;
            } else {
                by_depth[depth].push(masks);
            }
        }
        Search {
            p,
            opts,
            universe,
            complement,
            by_depth,
            unsatisfiable,
        }
    }

    /// Whether setting/clearing bit `depth` keeps the partial assignment
    /// viable.
    fn viable(&self, mask: u64, depth: usize) -> bool {
        if mask >> depth & 1 == 1 {
            if let Some(c) = self.complement[depth] {
                if c < depth && mask >> c & 1 == 1 {
                    return false;
                }
            }
        }
        !self.by_depth[depth].iter().any(|r| r.violated_by(mask))
    }

    /// Depth-first search over the remaining bits, collecting verified
    /// answer sets.
    fn dfs(
        &self,
        depth: usize,
        mask: u64,
        out: &mut Vec<Interpretation>,
    ) -> Result<(), EngineError> {
        if depth == self.universe.len() {
            let i = Interpretation::new(
                self.universe
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, sl)| sl.clone()),
            )
            .expect("complement pruning keeps candidates consistent");
            if is_answer_set(self.p, &i, self.opts)? {
                out.push(i);
            }
            return Ok(());
        }
        for bit in [0u64, 1] {
            let next = mask | bit << depth;
            if self.viable(next, depth) {
                self.dfs(depth + 1, next, out)?;
            }
        }
        Ok(())
    }
}

/// Enumerates all communicating answer sets, in canonical order.
///
/// The candidate universe must fit the configured bound; candidates are
/// explored by backtracking over one bit per literal, discarding partial
/// assignments that already violate a rule or pair a literal with its
/// classical complement, and each surviving candidate is verified with
/// [`is_answer_set`].
pub fn enumerate_answer_sets(
    p: &CommunicatingProgram,
    opts: &EngineOptions,
) -> Result<Vec<Interpretation>, EngineError> {
    let universe = candidate_universe(p, opts.prune);
    let bound = opts.bound.min(MAX_BOUND);
    if universe.len() > bound {
        return Err(EngineError::BoundExceeded {
            size: universe.len(),
            bound,
        });
    }
    let search = Search::new(p, opts, &universe);
    if search.unsatisfiable {
        return Ok(Vec::new());
    }

    let jobs = opts.jobs.max(1);
    let mut out: Vec<Interpretation> = Vec::new();
    if jobs == 1 || universe.len() < 2 {
        search.dfs(0, 0, &mut out)?;
    } else {
        // Partition the search on the first few bits and join the pieces;
        // each prefix is validated before descending.
        let split = (usize::BITS - (jobs - 1).leading_zeros()) as usize;
        let split = split.min(universe.len());
        let prefixes: Vec<u64> = (0..1u64 << split)
            .filter(|&prefix| (0..split).all(|d| search.viable(prefix, d)))
            .collect();
        let results = std::thread::scope(|scope| {
            let search = &search;
            let handles: Vec<_> = (0..jobs)
                .map(|w| {
                    let chunk: Vec<u64> = prefixes.iter().copied().skip(w).step_by(jobs).collect();
                    scope.spawn(move || {
                        let mut found = Vec::new();
                        for prefix in chunk {
                            search.dfs(split, prefix, &mut found)?;
                        }
                        Ok::<_, EngineError>(found)
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("enumeration worker panicked"))
                .collect::<Result<Vec<_>, _>>()
        })?;
        out = results.into_iter().flatten().collect();
    }
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryMode {
    /// Does the program have any answer set?
    Exists,
    /// Does some answer set contain the literal?
    Brave,
    /// Do all answer sets contain the literal? (Vacuously true when there
    /// are none.)
    Cautious,
}

/// Answers a boolean query over the full set of answer sets.
pub fn query(
    p: &CommunicatingProgram,
    mode: QueryMode,
    literal: Option<&SituatedLiteral>,
    opts: &EngineOptions,
) -> Result<bool, EngineError> {
    let sets = enumerate_answer_sets(p, opts)?;
    match mode {
        QueryMode::Exists => Ok(!sets.is_empty()),
        QueryMode::Brave => {
            let l = literal.ok_or(EngineError::MissingQueryLiteral)?;
            Ok(sets.iter().any(|i| i.contains(l)))
        }
        QueryMode::Cautious => {
            let l = literal.ok_or(EngineError::MissingQueryLiteral)?;
            Ok(sets.iter().all(|i| i.contains(l)))
        }
    }
}
