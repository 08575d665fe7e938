//! Prenex quantified boolean formulas over a DNF matrix.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::model::{Atom, Literal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn flipped(self) -> Self {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantifier::Exists => "exists",
            Quantifier::Forall => "forall",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QbfBlock {
    pub quantifier: Quantifier,
    pub variables: BTreeSet<Atom>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QbfError {
    #[error("quantifiers must strictly alternate")]
    NonAlternating,
    #[error("variable `{0}` is bound more than once")]
    DoublyBound(Atom),
    #[error("matrix variable `{0}` is not bound by any block")]
    Unbound(Atom),
    #[error("quantifier block must bind at least one variable")]
    EmptyBlock,
    #[error("clause must contain at least one literal")]
    EmptyClause,
}

/// A prenex QBF with strictly alternating quantifier blocks and a matrix in
/// disjunctive normal form: a list of conjunctive clauses, read as their
/// disjunction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Qbf {
    blocks: Vec<QbfBlock>,
    matrix: Vec<BTreeSet<Literal>>,
}

impl Qbf {
    pub fn new(blocks: Vec<QbfBlock>, matrix: Vec<BTreeSet<Literal>>) -> Result<Self, QbfError> {
        let mut bound: BTreeSet<Atom> = BTreeSet::new();
        for (i, block) in blocks.iter().enumerate() {
            if block.variables.is_empty() {
                return Err(QbfError::EmptyBlock);
            }
            if i > 0 && block.quantifier == blocks[i - 1].quantifier {
                return Err(QbfError::NonAlternating);
            }
            for v in &block.variables {
                if !bound.insert(v.clone()) {
                    return Err(QbfError::DoublyBound(v.clone()));
                }
            }
        }
        for clause in &matrix {
            if clause.is_empty() {
                return Err(QbfError::EmptyClause);
            }
            for lit in clause {
                if !bound.contains(&lit.atom) {
                    return Err(QbfError::Unbound(lit.atom.clone()));
                }
            }
        }
        Ok(Qbf { blocks, matrix })
    }

    pub fn blocks(&self) -> &[QbfBlock] {
        &self.blocks
    }

    pub fn matrix(&self) -> &[BTreeSet<Literal>] {
        &self.matrix
    }

    pub fn variables(&self) -> BTreeSet<Atom> {
        self.blocks
            .iter()
            .flat_map(|b| b.variables.iter().cloned())
            .collect()
    }

    /// Whether the outermost quantifier is existential. Formulas with no
    /// blocks cannot be constructed through the parser; a blockless formula
    /// defaults to the existential reading.
    pub fn starts_existential(&self) -> bool {
        self.blocks
            .first()
            .map(|b| b.quantifier == Quantifier::Exists)
            .unwrap_or(true)
    }
}

impl fmt::Display for Qbf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in &self.blocks {
            write!(f, "{}", block.quantifier)?;
            for v in &block.variables {
                write!(f, " {v}")?;
            }
            write!(f, " ")?;
        }
        write!(f, ":")?;
        for (i, clause) in self.matrix.iter().enumerate() {
            write!(f, "{}(", if i == 0 { " " } else { " | " })?;
            for (j, lit) in clause.iter().enumerate() {
                if j > 0 {
                    write!(f, " & ")?;
                }
                write!(f, "{lit}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}
