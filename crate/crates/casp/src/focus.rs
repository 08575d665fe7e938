//! Multi-focused answer sets: successive ⊆-minimization of the answer-set
//! pool on a sequence of components. The first component in the sequence is
//! minimized first, giving it the highest priority.

use crate::engine::{
    communicating_fixpoint, enumerate_answer_sets, EngineError, EngineOptions, QueryMode,
};
use crate::model::{CommunicatingProgram, FocusSequence, Interpretation, SituatedLiteral};

fn check_focus(p: &CommunicatingProgram, f: &FocusSequence) -> Result<(), EngineError> {
    for name in f.names() {
        if p.component(name).is_none() {
            return Err(EngineError::UnknownComponent(name.clone()));
        }
    }
    Ok(())
}

/// All `f`-focused answer sets, in canonical order: starting from the full
/// pool, each component of `f` in turn keeps only the pool elements whose
/// projection on it is not a proper superset of another element's. An empty
/// sequence returns the full pool.
pub fn focused_answer_sets(
    p: &CommunicatingProgram,
    f: &FocusSequence,
    opts: &EngineOptions,
) -> Result<Vec<Interpretation>, EngineError> {
    check_focus(p, f)?;
    let mut pool = enumerate_answer_sets(p, opts)?;
    for q in f.names() {
        let projections: Vec<_> = pool.iter().map(|m| m.project(q)).collect();
        let keep: Vec<bool> = projections
            .iter()
            .map(|mine| {
                !projections
                    .iter()
                    .any(|other| other != mine && other.is_subset(mine))
            })
            .collect();
        let mut it = keep.iter();
        pool.retain(|_| *it.next().unwrap());
    }
    Ok(pool)
}

/// The least fixpoint of a simple program, which is focused for *every*
/// sequence: it is the global ⊆-minimum of the pool, so its projections are
/// minimal at each step. Polynomial, no enumeration.
pub fn focused_fixpoint_simple(
    p: &CommunicatingProgram,
    f: &FocusSequence,
) -> Result<Interpretation, EngineError> {
    check_focus(p, f)?;
    communicating_fixpoint(p)
}

/// Boolean queries over the focused pool.
pub fn focused_query(
    p: &CommunicatingProgram,
    f: &FocusSequence,
    mode: QueryMode,
    literal: Option<&SituatedLiteral>,
    opts: &EngineOptions,
) -> Result<bool, EngineError> {
    let pool = focused_answer_sets(p, f, opts)?;
    match mode {
        QueryMode::Exists => Ok(!pool.is_empty()),
        QueryMode::Brave => {
            let l = literal.ok_or(EngineError::MissingQueryLiteral)?;
            Ok(pool.iter().any(|i| i.contains(l)))
        }
        QueryMode::Cautious => {
            let l = literal.ok_or(EngineError::MissingQueryLiteral)?;
            Ok(pool.iter().all(|i| i.contains(l)))
        }
    }
}
