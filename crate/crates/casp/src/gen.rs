//! Deterministic random instance generators for randomized testing. The
//! same seed always produces the same program or formula.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use std::collections::BTreeSet;

use crate::model::{
    Atom, CommunicatingProgram, ComponentName, ComponentProgram, Literal, ProgramClass, Rule,
    SituatedLiteral,
};
use crate::qbf::{Qbf, QbfBlock, Quantifier};

/// Shape limits for [`random_program`]. All counts are inclusive maxima.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub max_components: usize,
    pub max_atoms: usize,
    pub max_rules: usize,
    pub max_body: usize,
    /// Strongest rule features to emit: `Simple` forbids naf, `Normal`
    /// allows it, `Disjunctive` also allows two-literal heads.
    pub class: ProgramClass,
    /// Cap on the number of distinct non-local literals used in positive
    /// bodies, which bounds the guess machinery of downstream flattening.
    pub max_foreign: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_components: 3,
            max_atoms: 4,
            max_rules: 7,
            max_body: 2,
            class: ProgramClass::Normal,
            max_foreign: 2,
        }
    }
}

/// Generates a structurally valid communicating program: all heads are
/// local, every referenced component is declared, and rule features respect
/// the configured class.
pub fn random_program(seed: u64, cfg: &GenConfig) -> CommunicatingProgram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_comps = rng.gen_range(1..=cfg.max_components.max(1));
    let comps: Vec<ComponentName> = (1..=n_comps)
        .map(|i| ComponentName::new(format!("C{i}")).unwrap())
        .collect();
    let n_atoms = rng.gen_range(1..=cfg.max_atoms.max(1));
    let atoms: Vec<Atom> = (1..=n_atoms)
        .map(|i| Atom::new(format!("x{i}")).unwrap())
        .collect();

    let random_literal = |rng: &mut ChaCha8Rng| {
        let atom = atoms.choose(rng).unwrap().clone();
        // classical negation stays rare so programs are usually consistent
        if rng.gen_bool(0.15) {
            Literal::neg(atom)
        } else {
            Literal::pos(atom)
        }
    };

    // the pool of non-local references positive bodies may draw from
    let foreign_pool: Vec<SituatedLiteral> = {
        let mut pool = BTreeSet::new();
        for _ in 0..cfg.max_foreign {
            let c = comps.choose(&mut rng).unwrap().clone();
            pool.insert(SituatedLiteral::new(c, random_literal(&mut rng)));
        }
        pool.into_iter().collect()
    };

    let n_rules = rng.gen_range(0..=cfg.max_rules);
    let mut per_comp: Vec<Vec<Rule>> = vec![Vec::new(); n_comps];
    for _ in 0..n_rules {
        let owner = rng.gen_range(0..n_comps);
        let at_owner = |l: Literal| SituatedLiteral::new(comps[owner].clone(), l);
        let mut head = vec![at_owner(random_literal(&mut rng))];
        if cfg.class == ProgramClass::Disjunctive && rng.gen_bool(0.3) {
            head.push(at_owner(random_literal(&mut rng)));
        }
        let mut body_pos = Vec::new();
        let mut body_neg = Vec::new();
        for _ in 0..rng.gen_range(0..=cfg.max_body) {
            let naf = cfg.class != ProgramClass::Simple && rng.gen_bool(0.5);
            if naf {
                // naf literals may point anywhere
                let c = comps.choose(&mut rng).unwrap().clone();
                body_neg.push(SituatedLiteral::new(c, random_literal(&mut rng)));
            } else if !foreign_pool.is_empty() && rng.gen_bool(0.3) {
                body_pos.push(foreign_pool.choose(&mut rng).unwrap().clone());
            } else {
                body_pos.push(at_owner(random_literal(&mut rng)));
            }
        }
        per_comp[owner].push(Rule::new(head, body_pos, body_neg));
    }

    CommunicatingProgram::new(
        comps
            .into_iter()
            .zip(per_comp)
            .map(|(name, rules)| ComponentProgram::new(name, rules)),
    )
}

/// Shape limits for [`random_qbf`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QbfGenConfig {
    pub max_blocks: usize,
    pub max_vars: usize,
    pub max_clauses: usize,
    pub max_clause_len: usize,
}

impl Default for QbfGenConfig {
    fn default() -> Self {
        QbfGenConfig {
            max_blocks: 3,
            max_vars: 5,
            max_clauses: 4,
            max_clause_len: 3,
        }
    }
}

/// Generates a valid alternating prenex-DNF QBF: every block binds at least
/// one variable and every matrix variable is bound.
pub fn random_qbf(seed: u64, cfg: &QbfGenConfig) -> Qbf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_blocks = rng.gen_range(1..=cfg.max_blocks.max(1));
    let n_vars = rng.gen_range(n_blocks..=cfg.max_vars.max(n_blocks));
    let vars: Vec<Atom> = (1..=n_vars)
        .map(|i| Atom::new(format!("v{i}")).unwrap())
        .collect();

    // deal one variable to each block, then the rest at random
    let mut owner: Vec<usize> = (0..n_vars)
        .map(|i| {
            if i < n_blocks {
                i
            } else {
                rng.gen_range(0..n_blocks)
            }
        })
        .collect();
    owner.shuffle(&mut rng);
    let first = if rng.gen_bool(0.5) {
        Quantifier::Exists
    } else {
        Quantifier::Forall
    };
    let mut quantifier = first;
    let blocks: Vec<QbfBlock> = (0..n_blocks)
        .map(|b| {
            let block = QbfBlock {
                quantifier,
                variables: vars
                    .iter()
                    .zip(&owner)
                    .filter(|(_, o)| **o == b)
                    .map(|(v, _)| v.clone())
                    .collect(),
            };
            quantifier = quantifier.flipped();
            block
        })
        .collect();

    let matrix: Vec<BTreeSet<Literal>> = (0..rng.gen_range(1..=cfg.max_clauses.max(1)))
        .map(|_| {
            (0..rng.gen_range(1..=cfg.max_clause_len.max(1)))
                .map(|_| {
                    let atom = vars.choose(&mut rng).unwrap().clone();
                    if rng.gen_bool(0.5) {
                        Literal::pos(atom)
                    } else {
                        Literal::neg(atom)
                    }
                })
                .collect()
        })
        .collect();

    Qbf::new(blocks, matrix).expect("generator emits structurally valid formulas")
}
