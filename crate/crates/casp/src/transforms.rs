//! Program compilers: constraint desugaring, negation-as-failure elimination
//! into a communicating simple program (with the totality extension and the
//! lift/project maps between the two answer-set pools), flattening a
//! communicating normal program into one classical normal program, and the
//! QBF-to-program compilation.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::engine::{raw_fixpoint, ClassicalProgram, ClassicalRule, QueryMode};
use crate::model::{
    Atom, CommunicatingProgram, ComponentName, ComponentProgram, ExtendedSituatedLiteral,
    FocusSequence, Interpretation, Literal, ProgramClass, Rule, RuleDraft, SituatedLiteral,
};
use crate::qbf::Qbf;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("cannot project back: fresh atom of {0} is undecided (the simulation answer set is not total)")]
    NotTotal(SituatedLiteral),
    #[error("cannot project back: total marker {0} is missing")]
    MarkerMissing(SituatedLiteral),
    #[error("cannot project back: projection derives {0} and its classical negation")]
    Inconsistent(SituatedLiteral),
}

/// Replaces each constraint (empty-head draft) of a component with the
/// standard odd-loop simulation `__fail :- not __fail, body`.
pub fn desugar_constraints(component: &ComponentName, drafts: Vec<RuleDraft>) -> Vec<RuleDraft> {
    let fail = SituatedLiteral::new(
        component.clone(),
        Literal::pos(Atom::new("__fail").expect("reserved atom")),
    );
    drafts
        .into_iter()
        .map(|mut d| {
            if d.head.is_empty() {
                d.head.push(fail.clone());
                d.body.push(ExtendedSituatedLiteral {
                    inner: fail.clone(),
                    naf: true,
                });
            }
            d
        })
        .collect()
}

/// The fresh vocabulary introduced for one naf-mentioned situated literal:
/// the fresh atom standing for the literal and the cover atom that records
/// it has been decided either way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreshAtoms {
    pub fresh: Atom,
    pub cover: Atom,
}

/// Bookkeeping produced by [`simulate_naf`], carrying everything needed to
/// move answer sets between the source and the simulation: the component
/// renamings, the fresh vocabulary per naf-mentioned literal, the rewritten
/// positive rule groups, and the totality markers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreshLiteralMap {
    /// Source component -> its rewritten twin (`Q` -> `Q__P`).
    pub primed: BTreeMap<ComponentName, ComponentName>,
    /// Source component -> its negative-world companion (`Q` -> `Q__N`).
    pub negworld: BTreeMap<ComponentName, ComponentName>,
    /// The naf-mentioned situated literals, each with its fresh vocabulary.
    pub fresh: BTreeMap<SituatedLiteral, FreshAtoms>,
    /// The rewritten positive rule group of each source component, used to
    /// recover source answer sets in [`project_back`].
    pub positive_rules: BTreeMap<ComponentName, Vec<Rule>>,
    /// One `__total` marker per negative-world component; an answer set of
    /// the simulation corresponds to a source answer set exactly when it
    /// contains them all.
    pub total_markers: Vec<SituatedLiteral>,
}

fn fresh_atom(lit: &Literal) -> Atom {
    let prefix = if lit.positive { "__f_" } else { "__nf_" };
    Atom::new(format!("{prefix}{}", lit.atom)).expect("reserved atom")
}

fn cover_atom(lit: &Literal) -> Atom {
    let prefix = if lit.positive { "__c_f_" } else { "__c_nf_" };
    Atom::new(format!("{prefix}{}", lit.atom)).expect("reserved atom")
}

fn suffixed(name: &ComponentName, suffix: &str) -> ComponentName {
    ComponentName::new(format!("{name}{suffix}")).expect("valid component name")
}

/// Eliminates negation-as-failure from a communicating normal program,
/// producing an equivalent communicating simple program over a doubled
/// component set.
///
/// Each source component `Q` is rewritten into `Q__P` (its rules with naf
/// literals rerouted through fresh atoms) and paired with a negative world
/// `Q__N` whose mutual rules simulate the choice that naf induces. The
/// negative worlds additionally derive a cover atom per fresh atom and a
/// `__total` marker once every fresh atom is decided; simulation answer sets
/// carrying all markers are exactly the images of source answer sets under
/// [`lift_answer_set`].
pub fn simulate_naf(
    p: &CommunicatingProgram,
) -> (CommunicatingProgram, FreshLiteralMap, Vec<SituatedLiteral>) {
    assert!(
        p.class() != ProgramClass::Disjunctive,
        "naf elimination requires a simple or normal program"
    );
    let primed: BTreeMap<ComponentName, ComponentName> = p
        .component_names()
        .map(|n| (n.clone(), suffixed(n, "__P")))
        .collect();
    let negworld: BTreeMap<ComponentName, ComponentName> = p
        .component_names()
        .map(|n| (n.clone(), suffixed(n, "__N")))
        .collect();

    // the naf-mentioned situated literals, each assigned fresh vocabulary
    let fresh: BTreeMap<SituatedLiteral, FreshAtoms> = p
        .rules()
        .flat_map(|r| r.body_neg.iter())
        .map(|sl| {
            (
                sl.clone(),
                FreshAtoms {
                    fresh: fresh_atom(&sl.literal),
                    cover: cover_atom(&sl.literal),
                },
            )
        })
        .collect();

    let neg_fresh = |sl: &SituatedLiteral| {
        SituatedLiteral::new(
            negworld[&sl.component].clone(),
            Literal::neg(fresh[sl].fresh.clone()),
        )
    };

    let mut positive_rules: BTreeMap<ComponentName, Vec<Rule>> = BTreeMap::new();
    let mut components: BTreeMap<ComponentName, Vec<Rule>> = BTreeMap::new();
    for name in p.component_names() {
        components.insert(primed[name].clone(), Vec::new());
        components.insert(negworld[name].clone(), Vec::new());
    }

    for comp in p.components() {
        let qp = &primed[&comp.name];
        for r in comp.rules() {
            // rewritten rule: positives renamed to the primed twins, naf
            // literals replaced by the negated fresh atom in the matching
            // negative world
            let head: Vec<SituatedLiteral> = r
                .head
                .iter()
                .map(|l| SituatedLiteral::new(qp.clone(), l.literal.clone()))
                .collect();
            let body: Vec<SituatedLiteral> = r
                .body_pos
                .iter()
                .map(|l| SituatedLiteral::new(primed[&l.component].clone(), l.literal.clone()))
                .chain(r.body_neg.iter().map(&neg_fresh))
                .collect();
            let rule = Rule::new(head, body, []);
            components.get_mut(qp).unwrap().push(rule.clone());
            positive_rules
                .entry(comp.name.clone())
                .or_default()
                .push(rule);
        }
        positive_rules.entry(comp.name.clone()).or_default();
    }

    for (sl, atoms) in &fresh {
        let qp = &primed[&sl.component];
        let nw = &negworld[&sl.component];
        let qp_nf = SituatedLiteral::new(qp.clone(), Literal::neg(atoms.fresh.clone()));
        let nw_nf = SituatedLiteral::new(nw.clone(), Literal::neg(atoms.fresh.clone()));
        let nw_f = SituatedLiteral::new(nw.clone(), Literal::pos(atoms.fresh.clone()));
        let qp_b = SituatedLiteral::new(qp.clone(), sl.literal.clone());
        let nw_cover = SituatedLiteral::new(nw.clone(), Literal::pos(atoms.cover.clone()));
        // the mutual loop carrying the "assume absent" choice
        components
            .get_mut(qp)
            .unwrap()
            .push(Rule::new([qp_nf.clone()], [nw_nf.clone()], []));
        components
            .get_mut(nw)
            .unwrap()
            .push(Rule::new([nw_nf.clone()], [qp_nf], []));
        // the clash rule firing when the literal is actually derived
        components
            .get_mut(nw)
            .unwrap()
            .push(Rule::new([nw_f.clone()], [qp_b], []));
        // covers: the fresh atom has been decided one way or the other
        components
            .get_mut(nw)
            .unwrap()
            .push(Rule::new([nw_cover.clone()], [nw_f], []));
        components
            .get_mut(nw)
            .unwrap()
            .push(Rule::new([nw_cover], [nw_nf], []));
    }

    // one totality marker per negative world; a fact when it has no fresh
    // atoms to cover
    let total = Atom::new("__total").expect("reserved atom");
    let mut total_markers = Vec::new();
    for name in p.component_names() {
        let nw = &negworld[name];
        let marker = SituatedLiteral::new(nw.clone(), Literal::pos(total.clone()));
        let covers: Vec<SituatedLiteral> = fresh
            .iter()
            .filter(|(sl, _)| &sl.component == name)
            .map(|(_, atoms)| SituatedLiteral::new(nw.clone(), Literal::pos(atoms.cover.clone())))
            .collect();
        components
            .get_mut(nw)
            .unwrap()
            .push(Rule::new([marker.clone()], covers, []));
        total_markers.push(marker);
    }

    let out = CommunicatingProgram::new(
        components
            .into_iter()
            .map(|(name, rules)| ComponentProgram::new(name, rules)),
    );
    debug_assert_eq!(out.class(), ProgramClass::Simple);
    let map = FreshLiteralMap {
        primed,
        negworld,
        fresh,
        positive_rules,
        total_markers: total_markers.clone(),
    };
    (out, map, total_markers)
}

/// Maps an answer set of the source program onto the corresponding answer
/// set of its naf-free simulation: members move to the primed twin, each
/// naf-mentioned literal contributes its fresh atom (positively when the
/// literal holds, negated in both worlds when it does not), and the cover
/// atoms and totality markers are always derivable.
pub fn lift_answer_set(m: &Interpretation, map: &FreshLiteralMap) -> Interpretation {
    let mut out: BTreeSet<SituatedLiteral> = m
        .literals()
        .iter()
        .map(|sl| SituatedLiteral::new(map.primed[&sl.component].clone(), sl.literal.clone()))
        .collect();
    for (sl, atoms) in &map.fresh {
        let qp = &map.primed[&sl.component];
        let nw = &map.negworld[&sl.component];
        if m.contains(sl) {
            out.insert(SituatedLiteral::new(
                nw.clone(),
                Literal::pos(atoms.fresh.clone()),
            ));
        } else {
            out.insert(SituatedLiteral::new(
                qp.clone(),
                Literal::neg(atoms.fresh.clone()),
            ));
            out.insert(SituatedLiteral::new(
                nw.clone(),
                Literal::neg(atoms.fresh.clone()),
            ));
        }
        out.insert(SituatedLiteral::new(
            nw.clone(),
            Literal::pos(atoms.cover.clone()),
        ));
    }
    out.extend(map.total_markers.iter().cloned());
    Interpretation::new(out).expect("lift of a consistent set is consistent")
}

/// Recovers the source answer set from a total answer set of the
/// simulation: the fixpoint of the rewritten positive rules, reduced with
/// respect to `m'`, read back in the source alphabet. Refuses interpretations
/// that are not total on their negative worlds.
pub fn project_back(
    m: &Interpretation,
    map: &FreshLiteralMap,
) -> Result<Interpretation, TransformError> {
    for (sl, atoms) in &map.fresh {
        let nw = &map.negworld[&sl.component];
        let f = SituatedLiteral::new(nw.clone(), Literal::pos(atoms.fresh.clone()));
        if !m.contains(&f) && !m.contains(&f.negated()) {
            return Err(TransformError::NotTotal(f));
        }
    }
    for marker in &map.total_markers {
        if !m.contains(marker) {
            return Err(TransformError::MarkerMissing(marker.clone()));
        }
    }
    let mut out: BTreeSet<SituatedLiteral> = BTreeSet::new();
    for (source, rules) in &map.positive_rules {
        let qp = &map.primed[source];
        // reduce the rewritten positive rules: a rule survives when its
        // foreign body literals are all in m', keeping only the local part
        let reduced = ClassicalProgram::new(rules.iter().filter_map(|r| {
            if r.body_pos
                .iter()
                .any(|l| !l.is_local_to(qp) && !m.contains(l))
            {
                return None;
            }
            Some(ClassicalRule::new(
                r.head.iter().map(|l| l.literal.clone()),
                r.body_pos
                    .iter()
                    .filter(|l| l.is_local_to(qp))
                    .map(|l| l.literal.clone()),
                [],
            ))
        }));
        for lit in raw_fixpoint(&reduced) {
            out.insert(SituatedLiteral::new(source.clone(), lit));
        }
    }
    Interpretation::new(out).map_err(|_| {
        let bad = map
            .positive_rules
            .keys()
            .next()
            .expect("nonempty program")
            .clone();
        TransformError::Inconsistent(SituatedLiteral::new(
            bad,
            Literal::pos(Atom::new("__total").unwrap()),
        ))
    })
}

/// Decodes the flat atoms introduced by [`to_normal`] back into situated
/// literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlattenMap {
    /// Encoded atom -> the (positive) situated literal it stands for.
    pub decode: BTreeMap<Atom, SituatedLiteral>,
}

impl FlattenMap {
    /// Reads a model of the flattened program back as an interpretation of
    /// the source network, ignoring the guess/bookkeeping atoms.
    pub fn project(&self, m: &BTreeSet<Literal>) -> Interpretation {
        Interpretation::new(m.iter().filter_map(|l| {
            self.decode
                .get(&l.atom)
                .map(|sl| if l.positive { sl.clone() } else { sl.negated() })
        }))
        .expect("injective encoding keeps consistent models consistent")
    }
}

fn situated_atom(sl: &SituatedLiteral) -> Atom {
    Atom::new(format!("__s_{}__{}", sl.component, sl.literal.atom)).expect("reserved atom")
}

fn encode(sl: &SituatedLiteral) -> Literal {
    Literal {
        atom: situated_atom(sl),
        positive: sl.literal.positive,
    }
}

fn guess_atoms(sl: &SituatedLiteral) -> (Atom, Atom) {
    let polarity = if sl.literal.positive { "p" } else { "n" };
    let make = |kind: &str| {
        Atom::new(format!(
            "__{kind}{polarity}_{}__{}",
            sl.component, sl.literal.atom
        ))
        .expect("reserved atom")
    };
    (make("g"), make("ng"))
}

/// Flattens a communicating normal program into one classical normal
/// program over encoded situated atoms. Non-local positive body literals are
/// replaced by stable guesses: a guess/no-guess pair chooses whether the
/// literal holds, and two constraints (desugared through a `__fail` loop)
/// force the guess to match what is actually derived. Restricting the
/// flattened answer sets to the encoded atoms gives exactly the answer sets
/// of the source.
pub fn to_normal(p: &CommunicatingProgram) -> (ClassicalProgram, FlattenMap) {
    assert!(
        p.class() != ProgramClass::Disjunctive,
        "flattening requires a simple or normal program"
    );
    let fail = Literal::pos(Atom::new("__fail").expect("reserved atom"));
    let mut rules: Vec<ClassicalRule> = Vec::new();

    // every non-local positive body occurrence needs a guess
    let guessed: BTreeSet<SituatedLiteral> = p
        .components()
        .iter()
        .flat_map(|c| {
            c.rules()
                .iter()
                .flat_map(|r| r.body_pos.iter())
                .filter(|l| !l.is_local_to(&c.name))
                .cloned()
        })
        .collect();
    for sl in &guessed {
        let (g, ng) = guess_atoms(sl);
        let g = Literal::pos(g);
        let ng = Literal::pos(ng);
        let s = encode(sl);
        rules.push(ClassicalRule::new([g.clone()], [], [ng.clone()]));
        rules.push(ClassicalRule::new([ng.clone()], [], [g.clone()]));
        // guessed but not derived, or derived but not guessed: fail
        rules.push(ClassicalRule::new(
            [fail.clone()],
            [g.clone()],
            [fail.clone(), s.clone()],
        ));
        rules.push(ClassicalRule::new([fail.clone()], [ng, s], [fail.clone()]));
    }

    for comp in p.components() {
        for r in comp.rules() {
            let body_pos = r.body_pos.iter().map(|l| {
                if l.is_local_to(&comp.name) {
                    encode(l)
                } else {
                    Literal::pos(guess_atoms(l).0)
                }
            });
            rules.push(ClassicalRule::new(
                r.head.iter().map(encode),
                body_pos,
                r.body_neg.iter().map(encode),
            ));
        }
    }

    let decode = p
        .herbrand_base()
        .into_iter()
        .map(|sl| (situated_atom(&sl), sl))
        .collect();
    (ClassicalProgram::new(rules), FlattenMap { decode })
}

/// The result of compiling a QBF: the program, the focus sequence over the
/// auxiliary components, and the query that decides validity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QbfCompilation {
    pub program: CommunicatingProgram,
    pub focus: FocusSequence,
    pub mode: QueryMode,
    pub literal: SituatedLiteral,
}

/// Compiles a prenex-DNF QBF with `n` alternating blocks into a
/// communicating normal program `{Q0..Q(n-1)}`.
///
/// `Q0` guesses a truth assignment for every variable through complementary
/// pairs, derives `sat` from each satisfied DNF clause and `-sat` by
/// default. Each `Qj` mirrors the assignments of the first `n-j` blocks plus
/// `sat` (when `n-j` is odd) or `-sat` (when even); focusing on
/// `⟨Q1..Q(n-1)⟩` then realizes the quantifier alternation, and the formula
/// is valid iff `Q0:sat` holds bravely (∃-first) or cautiously (∀-first; the
/// mirror parities are swapped) in the focused answer sets.
pub fn compile_qbf(q: &Qbf) -> QbfCompilation {
    let n = q.blocks().len();
    let name = |j: usize| ComponentName::new(format!("Q{j}")).expect("valid component name");
    let sat = Atom::new("sat").expect("valid atom");
    let q0 = name(0);
    let at = |c: &ComponentName, l: Literal| SituatedLiteral::new(c.clone(), l);

    let mut q0_rules = Vec::new();
    for v in q.variables() {
        let x = Literal::pos(v.clone());
        q0_rules.push(Rule::new([at(&q0, x.clone())], [], [at(&q0, x.negated())]));
        q0_rules.push(Rule::new([at(&q0, x.negated())], [], [at(&q0, x)]));
    }
    for clause in q.matrix() {
        q0_rules.push(Rule::new(
            [at(&q0, Literal::pos(sat.clone()))],
            clause.iter().map(|l| at(&q0, l.clone())),
            [],
        ));
    }
    q0_rules.push(Rule::new(
        [at(&q0, Literal::neg(sat.clone()))],
        [],
        [at(&q0, Literal::pos(sat.clone()))],
    ));

    let mut components = vec![ComponentProgram::new(q0.clone(), q0_rules)];
    for j in 1..n {
        let qj = name(j);
        let mut rules = Vec::new();
        for block in &q.blocks()[..n - j] {
            for v in &block.variables {
                for lit in [Literal::pos(v.clone()), Literal::neg(v.clone())] {
                    rules.push(Rule::new([at(&qj, lit.clone())], [at(&q0, lit)], []));
                }
            }
        }
        // parity of the remaining alternation decides which outcome this
        // component saturates on; ∀-first formulas swap it
        let odd = (n - j) % 2 == 1;
        let mirror_sat = odd == q.starts_existential();
        let lit = if mirror_sat {
            Literal::pos(sat.clone())
        } else {
            Literal::neg(sat.clone())
        };
        rules.push(Rule::new([at(&qj, lit.clone())], [at(&q0, lit)], []));
        components.push(ComponentProgram::new(qj, rules));
    }

    QbfCompilation {
        program: CommunicatingProgram::new(components),
        focus: FocusSequence((1..n).map(name).collect()),
        mode: if q.starts_existential() {
            QueryMode::Brave
        } else {
            QueryMode::Cautious
        },
        literal: at(&q0, Literal::pos(sat)),
    }
}
