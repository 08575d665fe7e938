//! Communicating answer set programming: networks of ASP components that
//! reference each other's literals.
//!
//! The crate provides:
//!
//! - [`model`]: atoms, situated literals, rules, component programs,
//!   interpretations, and focus sequences;
//! - [`parser`]: the textual program and QBF formats plus the canonical
//!   renderer;
//! - [`engine`]: exact answer-set checking and bounded enumeration, built on
//!   the communicating reduct;
//! - [`focus`]: multi-focused answer sets (successive per-component
//!   minimization);
//! - [`transforms`]: negation-as-failure elimination, flattening to a
//!   single classical program, and QBF compilation;
//! - [`oracle`]: independent brute-force baselines for testing;
//! - [`gen`]: seeded random instance generators.

pub mod engine;
pub mod focus;
pub mod gen;
pub mod model;
pub mod oracle;
pub mod parser;
pub mod qbf;
pub mod transforms;

pub use engine::{enumerate_answer_sets, is_answer_set, EngineError, EngineOptions, QueryMode};
pub use focus::{focused_answer_sets, focused_query};
pub use model::{
    Atom, CommunicatingProgram, ComponentName, FocusSequence, Interpretation, Literal,
    ProgramClass, SituatedLiteral,
};
pub use parser::{parse_program, parse_qbf, render_program, ParseError};
pub use qbf::Qbf;
pub use transforms::{compile_qbf, simulate_naf, to_normal};
