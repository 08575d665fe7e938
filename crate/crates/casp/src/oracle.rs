//! Brute-force baselines used to cross-check the engine and the program
//! transformations. Nothing here shares solving logic with the engine: the
//! answer-set check below re-derives the reduct/fixpoint/minimal-model
//! machinery from scratch over plain bitmasks, and the QBF evaluator walks
//! assignments recursively.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::engine::ClassicalProgram;
use crate::model::{Atom, Literal};
use crate::qbf::{Qbf, QbfBlock, Quantifier};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance has {size} items, exceeding the oracle bound of {bound}")]
    BoundExceeded { size: usize, bound: usize },
}

/// Variable-count cap for [`qbf_eval`].
pub const QBF_EVAL_BOUND: usize = 20;

struct MaskRule {
    pos: u64,
    neg: u64,
    head: u64,
    /// A positive body literal never derivable (outside the head alphabet):
    /// the rule can never fire.
    dead: bool,
}

/// Exhaustively computes all answer sets of a classical program by checking
/// every consistent subset of its head literals (answer sets contain only
/// head literals, so the restriction is complete). `bound` caps the number
/// of distinct head literals.
pub fn classical_answer_sets(
    p: &ClassicalProgram,
    bound: usize,
) -> Result<Vec<BTreeSet<Literal>>, OracleError> {
    let heads: Vec<Literal> = p.head_literals().into_iter().collect();
    let n = heads.len();
    if n > bound.min(63) {
        return Err(OracleError::BoundExceeded {
            size: n,
            bound: bound.min(63),
        });
    }
    let index: BTreeMap<&Literal, usize> = heads.iter().enumerate().map(|(k, l)| (l, k)).collect();
    let rules: Vec<MaskRule> = p
        .rules
        .iter()
        .map(|r| {
            let mut m = MaskRule {
                pos: 0,
                neg: 0,
                head: 0,
                dead: false,
            };
            for l in &r.body_pos {
                match index.get(l) {
                    Some(&k) => m.pos |= 1 << k,
                    None => m.dead = true,
                }
            }
            for l in &r.body_neg {
                if let Some(&k) = index.get(l) {
                    m.neg |= 1 << k;
                }
            }
            for l in &r.head {
                m.head |= 1 << index[l];
            }
            m
        })
        .collect();
    let disjunctive = p.rules.iter().any(|r| r.head.len() > 1);
    // masks pairing each positive literal with its classical negation
    let clash_pairs: Vec<u64> = heads
        .iter()
        .enumerate()
        .filter(|(_, l)| l.positive)
        .filter_map(|(k, l)| index.get(&l.negated()).map(|&j| 1 << k | 1 << j))
        .collect();

    let mut out = Vec::new();
    for mask in 0u64..1 << n {
        if clash_pairs.iter().any(|&pair| pair & !mask == 0) {
            continue;
        }
        // the reduct keeps the rules whose naf body misses the candidate
        let active: Vec<&MaskRule> = rules
            .iter()
            .filter(|r| !r.dead && r.neg & mask == 0)
            .collect();
        let stable = if disjunctive {
            is_minimal_model_mask(&active, mask)
        } else {
            fixpoint_mask(&active) == mask
        };
        if stable {
            out.push(
                heads
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, l)| l.clone())
                    .collect(),
            );
        }
    }
    Ok(out)
}

fn fixpoint_mask(rules: &[&MaskRule]) -> u64 {
    let mut derived = 0u64;
    loop {
        let before = derived;
        for r in rules {
            if r.pos & derived == r.pos {
                derived |= r.head;
            }
        }
        if derived == before {
            return derived;
        }
    }
}

fn is_model_mask(rules: &[&MaskRule], mask: u64) -> bool {
    rules
        .iter()
        .all(|r| r.pos & mask != r.pos || r.head & mask != 0)
}

fn is_minimal_model_mask(rules: &[&MaskRule], mask: u64) -> bool {
    if !is_model_mask(rules, mask) {
        return false;
    }
    // walk every proper submask of the candidate
    let mut sub = mask;
    loop {
        sub = sub.wrapping_sub(1) & mask;
        if sub == mask {
            return true;
        }
        if is_model_mask(rules, sub) {
            return false;
        }
        if sub == 0 {
            // 0 has been checked; wrapping further would revisit masks
            return true;
        }
    }
}

/// Whether a DNF matrix holds under a complete assignment.
pub fn dnf_holds(matrix: &[BTreeSet<Literal>], assignment: &BTreeMap<Atom, bool>) -> bool {
    matrix.iter().any(|clause| {
        clause
            .iter()
            .all(|l| assignment.get(&l.atom) == Some(&l.positive))
    })
}

/// Evaluates a quantifier prefix against an arbitrary matrix predicate:
/// existential blocks disjoin over the assignments of their variables,
/// universal blocks conjoin.
pub fn eval_with(blocks: &[QbfBlock], matrix: &impl Fn(&BTreeMap<Atom, bool>) -> bool) -> bool {
    fn go(
        blocks: &[QbfBlock],
        assignment: &mut BTreeMap<Atom, bool>,
        matrix: &impl Fn(&BTreeMap<Atom, bool>) -> bool,
    ) -> bool {
        let Some((block, rest)) = blocks.split_first() else {
            return matrix(assignment);
        };
        let vars: Vec<Atom> = block.variables.iter().cloned().collect();
        let outcomes = (0u64..1 << vars.len()).map(|bits| {
            for (k, v) in vars.iter().enumerate() {
                assignment.insert(v.clone(), bits >> k & 1 == 1);
            }
            go(rest, assignment, matrix)
        });
        let result = match block.quantifier {
            Quantifier::Exists => outcomes.into_iter().any(|b| b),
            Quantifier::Forall => outcomes.into_iter().all(|b| b),
        };
        for v in &vars {
            assignment.remove(v);
        }
        result
    }
    go(blocks, &mut BTreeMap::new(), matrix)
}

/// Decides validity of a prenex-DNF QBF by recursive assignment
/// enumeration.
pub fn qbf_eval(q: &Qbf) -> Result<bool, OracleError> {
    let size = q.variables().len();
    if size > QBF_EVAL_BOUND {
        return Err(OracleError::BoundExceeded {
            size,
            bound: QBF_EVAL_BOUND,
        });
    }
    Ok(eval_with(q.blocks(), &|a| dnf_holds(q.matrix(), a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::ClassicalRule;
    use crate::parser::parse_qbf;

    fn atom(s: &str) -> Atom {
        Atom::new(s).unwrap()
    }

    fn lit(s: &str) -> Literal {
        match s.strip_prefix('-') {
            Some(rest) => Literal::neg(atom(rest)),
            None => Literal::pos(atom(s)),
        }
    }

    fn set(lits: &[&str]) -> BTreeSet<Literal> {
        lits.iter().map(|s| lit(s)).collect()
    }

    #[test]
    fn even_naf_loop() {
        let p = ClassicalProgram::new([
            ClassicalRule::new([lit("a")], [], [lit("b")]),
            ClassicalRule::new([lit("b")], [], [lit("a")]),
        ]);
        assert_eq!(
            classical_answer_sets(&p, 16).unwrap(),
            vec![set(&["a"]), set(&["b"])]
        );
    }

    #[test]
    fn odd_naf_loop_has_none() {
        let p = ClassicalProgram::new([ClassicalRule::new([lit("a")], [], [lit("a")])]);
        assert!(classical_answer_sets(&p, 16).unwrap().is_empty());
    }

    #[test]
    fn single_fact() {
        let p = ClassicalProgram::new([ClassicalRule::new([lit("a")], [], [])]);
        assert_eq!(classical_answer_sets(&p, 16).unwrap(), vec![set(&["a"])]);
    }

    #[test]
    fn disjunctive_minimality() {
        // a ; b.  a :- b.  — {b} is not minimal-stable: reduct admits {a}
        let p = ClassicalProgram::new([
            ClassicalRule::new([lit("a"), lit("b")], [], []),
            ClassicalRule::new([lit("a")], [lit("b")], []),
        ]);
        assert_eq!(classical_answer_sets(&p, 16).unwrap(), vec![set(&["a"])]);
    }

    #[test]
    fn classical_negation_clash_skipped() {
        let p = ClassicalProgram::new([
            ClassicalRule::new([lit("a")], [], []),
            ClassicalRule::new([lit("-a")], [], []),
        ]);
        assert!(classical_answer_sets(&p, 16).unwrap().is_empty());
    }

    #[test]
    fn bound_is_enforced() {
        let p = ClassicalProgram::new([ClassicalRule::new([lit("a"), lit("b")], [], [])]);
        assert!(matches!(
            classical_answer_sets(&p, 1),
            Err(OracleError::BoundExceeded { size: 2, bound: 1 })
        ));
    }

    #[test]
    fn qbf_eval_basics() {
        assert!(qbf_eval(&parse_qbf("exists x : (x) | (-x)").unwrap()).unwrap());
        assert!(!qbf_eval(&parse_qbf("forall x : (x)").unwrap()).unwrap());
        assert!(qbf_eval(
            &parse_qbf("exists x forall y exists z : (x & y) | (-x & y & z) | (-x & -y & -z)")
                .unwrap()
        )
        .unwrap());
        assert!(!qbf_eval(&parse_qbf("forall x exists y : (x & y)").unwrap()).unwrap());
    }

    #[test]
    fn qbf_self_duality() {
        for text in [
            "exists x forall y : (x & y) | (-x & -y)",
            "forall x exists y : (x & y) | (-x & -y)",
            "exists x : (x)",
            "forall a exists b forall c : (a & b) | (-c)",
        ] {
            let q = parse_qbf(text).unwrap();
            let flipped: Vec<QbfBlock> = q
                .blocks()
                .iter()
                .map(|b| QbfBlock {
                    quantifier: b.quantifier.flipped(),
                    variables: b.variables.clone(),
                })
                .collect();
            let dual = eval_with(&flipped, &|a| !dnf_holds(q.matrix(), a));
            assert_eq!(dual, !qbf_eval(&q).unwrap(), "duality broken for {text}");
        }
    }
}
