//! Domain types for communicating programs: atoms, (situated) literals,
//! rules, component programs, interpretations, and focus sequences.
//!
//! All types are immutable after construction and ordered, so sets and
//! enumeration output come out in one canonical order everywhere.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Prefix reserved for atoms introduced by desugaring and transformations.
pub const RESERVED_PREFIX: &str = "__";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("invalid atom name `{0}`: expected [a-z][A-Za-z0-9_]*")]
    InvalidAtomName(String),
    #[error("invalid component name `{0}`: expected [A-Z][A-Za-z0-9_]*")]
    InvalidComponentName(String),
    #[error("inconsistent interpretation: contains both {0} and its classical negation")]
    InconsistentInterpretation(SituatedLiteral),
}

fn is_ident_tail(s: &str) -> bool {
    s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A propositional atom. Identifiers are `[a-z][A-Za-z0-9_]*`; atoms carrying
/// the reserved `__` prefix can only be produced by desugaring/transformations
/// (the strict parser rejects them in user input).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(String);

impl Atom {
    pub fn new(name: impl Into<String>) -> Result<Self, ModelError> {
        let name = name.into();
        let body = name.strip_prefix(RESERVED_PREFIX).unwrap_or(&name);
        let ok = body.chars().next().is_some_and(|c| c.is_ascii_lowercase()) && is_ident_tail(body);
        if ok {
            Ok(Atom(name))
        } else {
            Err(ModelError::InvalidAtomName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_reserved(&self) -> bool {
        self.0.starts_with(RESERVED_PREFIX)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The name of a component program. Uppercase-first, which keeps component
/// qualifiers lexically distinct from atoms in the surface syntax.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentName(String);

impl ComponentName {
    pub fn new(name: impl Into<String>) -> Result<Self, ModelError> {
        let name = name.into();
        let ok =
            name.chars().next().is_some_and(|c| c.is_ascii_uppercase()) && is_ident_tail(&name);
        if ok {
            Ok(ComponentName(name))
        } else {
            Err(ModelError::InvalidComponentName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ComponentName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An atom or its classical negation. Negation is involutive.
///
/// Ordering puts `-a` before `a` for the same atom; all canonical output
/// orders derive from this.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal {
            atom,
            positive: true,
        }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal {
            atom,
            positive: false,
        }
    }

    pub fn negated(&self) -> Self {
        Literal {
            atom: self.atom.clone(),
            positive: !self.positive,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("-")?;
        }
        self.atom.fmt(f)
    }
}

/// A literal asked of a particular component program: the `Q:l` of the
/// communicating setting.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SituatedLiteral {
    pub component: ComponentName,
    pub literal: Literal,
}

impl SituatedLiteral {
    pub fn new(component: ComponentName, literal: Literal) -> Self {
        SituatedLiteral { component, literal }
    }

    /// Whether this literal is local to component `name`.
    pub fn is_local_to(&self, name: &ComponentName) -> bool {
        &self.component == name
    }

    pub fn negated(&self) -> Self {
        SituatedLiteral {
            component: self.component.clone(),
            literal: self.literal.negated(),
        }
    }
}

impl fmt::Display for SituatedLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.component, self.literal)
    }
}

/// A situated literal, optionally under negation-as-failure.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtendedSituatedLiteral {
    pub inner: SituatedLiteral,
    pub naf: bool,
}

/// A raw rule as produced by the parser, before constraint desugaring.
/// The head may be empty (a constraint); `Rule` forbids that.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleDraft {
    pub head: Vec<SituatedLiteral>,
    pub body: Vec<ExtendedSituatedLiteral>,
}

/// A situated disjunctive rule `γ :- α, not(β)` with a nonempty head whose
/// literals all live in one component.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub head: BTreeSet<SituatedLiteral>,
    pub body_pos: BTreeSet<SituatedLiteral>,
    pub body_neg: BTreeSet<SituatedLiteral>,
}

impl Rule {
    pub fn new(
        head: impl IntoIterator<Item = SituatedLiteral>,
        body_pos: impl IntoIterator<Item = SituatedLiteral>,
        body_neg: impl IntoIterator<Item = SituatedLiteral>,
    ) -> Self {
        Rule {
            head: head.into_iter().collect(),
            body_pos: body_pos.into_iter().collect(),
            body_neg: body_neg.into_iter().collect(),
        }
    }

    /// The component all head literals belong to, if the head is nonempty
    /// and local.
    pub fn head_component(&self) -> Option<&ComponentName> {
        let mut comps = self.head.iter().map(|l| &l.component);
        let first = comps.next()?;
        comps.all(|c| c == first).then_some(first)
    }

    fn literals(&self) -> impl Iterator<Item = &SituatedLiteral> {
        self.head
            .iter()
            .chain(self.body_pos.iter())
            .chain(self.body_neg.iter())
    }
}

/// simple ⊂ normal ⊂ disjunctive; `CommunicatingProgram` stores the weakest
/// class consistent with its rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProgramClass {
    Simple,
    Normal,
    Disjunctive,
}

impl fmt::Display for ProgramClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProgramClass::Simple => "simple",
            ProgramClass::Normal => "normal",
            ProgramClass::Disjunctive => "disjunctive",
        })
    }
}

/// One named component: a finite set of rules whose heads are local to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentProgram {
    pub name: ComponentName,
    rules: Vec<Rule>,
}

impl ComponentProgram {
    /// Deduplicates and canonically sorts the rules; rule order carries no
    /// semantics.
    pub fn new(name: ComponentName, rules: impl IntoIterator<Item = Rule>) -> Self {
        let set: BTreeSet<Rule> = rules.into_iter().collect();
        ComponentProgram {
            name,
            rules: set.into_iter().collect(),
        }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }
}

/// A structural problem found by [`CommunicatingProgram::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub component: Option<ComponentName>,
    pub rule_index: Option<usize>,
    pub reason: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = &self.component {
            write!(f, "component {c}")?;
            if let Some(i) = self.rule_index {
                write!(f, ", rule {i}")?;
            }
            write!(f, ": ")?;
        }
        f.write_str(&self.reason)
    }
}

/// A finite network of component programs linked by situated literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunicatingProgram {
    components: Vec<ComponentProgram>,
    class: ProgramClass,
}

impl CommunicatingProgram {
    /// Builds a program from components, sorting them by name and inferring
    /// the weakest class consistent with the rules. Later duplicates of a
    /// component name are merged into the first.
    pub fn new(components: impl IntoIterator<Item = ComponentProgram>) -> Self {
        let mut by_name: BTreeMap<ComponentName, Vec<Rule>> = BTreeMap::new();
        for c in components {
            by_name
                .entry(c.name.clone())
                .or_default()
                .extend(c.rules.iter().cloned());
        }
        let components: Vec<ComponentProgram> = by_name
            .into_iter()
            .map(|(name, rules)| ComponentProgram::new(name, rules))
            .collect();
        let class = infer_class(components.iter().flat_map(|c| c.rules.iter()));
        CommunicatingProgram { components, class }
    }

    pub fn class(&self) -> ProgramClass {
        self.class
    }

    pub fn components(&self) -> &[ComponentProgram] {
        &self.components
    }

    pub fn component(&self, name: &ComponentName) -> Option<&ComponentProgram> {
        self.components
            .binary_search_by(|c| c.name.cmp(name))
            .ok()
            .map(|i| &self.components[i])
    }

    pub fn component_names(&self) -> impl Iterator<Item = &ComponentName> {
        self.components.iter().map(|c| &c.name)
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.components.iter().flat_map(|c| c.rules.iter())
    }

    pub fn is_empty(&self) -> bool {
        self.components.iter().all(|c| c.rules.is_empty())
    }

    /// Every atom occurring anywhere in the program, in any position.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.rules()
            .flat_map(|r| r.literals())
            .map(|sl| sl.literal.atom.clone())
            .collect()
    }

    /// The communicating Herbrand base: the cross product of all component
    /// names with all atoms occurring anywhere in the network. Positive
    /// situated atoms only; callers derive `¬HB` as needed.
    pub fn herbrand_base(&self) -> BTreeSet<SituatedLiteral> {
        let atoms = self.atoms();
        self.components
            .iter()
            .flat_map(|c| {
                atoms
                    .iter()
                    .map(move |a| SituatedLiteral::new(c.name.clone(), Literal::pos(a.clone())))
            })
            .collect()
    }

    /// Checks all structural invariants; an empty result means the program
    /// is well-formed. Violations are data, not failures.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let names: BTreeSet<&ComponentName> = self.component_names().collect();
        for comp in &self.components {
            for (i, rule) in comp.rules.iter().enumerate() {
                let at = |reason: String| Violation {
                    component: Some(comp.name.clone()),
                    rule_index: Some(i),
                    reason,
                };
                if rule.head.is_empty() {
                    out.push(at("empty head (constraints must be desugared)".into()));
                } else if rule.head_component() != Some(&comp.name) {
                    out.push(at(format!(
                        "locality violation: head literals must all belong to {}",
                        comp.name
                    )));
                }
                for sl in rule.literals() {
                    if !names.contains(&sl.component) {
                        out.push(at(format!(
                            "reference to undeclared component {}",
                            sl.component
                        )));
                    }
                }
                match self.class {
                    ProgramClass::Simple => {
                        if rule.head.len() > 1 {
                            out.push(at(
                                "class violation: disjunctive head in simple program".into()
                            ));
                        }
                        if !rule.body_neg.is_empty() {
                            out.push(at("class violation: naf body in simple program".into()));
                        }
                    }
                    ProgramClass::Normal => {
                        if rule.head.len() > 1 {
                            out.push(at(
                                "class violation: disjunctive head in normal program".into()
                            ));
                        }
                    }
                    ProgramClass::Disjunctive => {}
                }
            }
        }
        out
    }
}

fn infer_class<'a>(rules: impl Iterator<Item = &'a Rule>) -> ProgramClass {
    let mut class = ProgramClass::Simple;
    for r in rules {
        if r.head.len() > 1 {
            return ProgramClass::Disjunctive;
        }
        if !r.body_neg.is_empty() {
            class = ProgramClass::Normal;
        }
    }
    class
}

/// A consistent set of situated literals over the communicating Herbrand
/// base of some program.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Interpretation {
    literals: BTreeSet<SituatedLiteral>,
}

impl Interpretation {
    pub fn new(literals: impl IntoIterator<Item = SituatedLiteral>) -> Result<Self, ModelError> {
        let literals: BTreeSet<SituatedLiteral> = literals.into_iter().collect();
        for sl in &literals {
            if sl.literal.positive && literals.contains(&sl.negated()) {
                return Err(ModelError::InconsistentInterpretation(sl.clone()));
            }
        }
        Ok(Interpretation { literals })
    }

    pub fn empty() -> Self {
        Interpretation::default()
    }

    pub fn literals(&self) -> &BTreeSet<SituatedLiteral> {
        &self.literals
    }

    pub fn contains(&self, sl: &SituatedLiteral) -> bool {
        self.literals.contains(sl)
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn is_subset(&self, other: &Interpretation) -> bool {
        self.literals.is_subset(&other.literals)
    }

    /// The projection on component `q`: `{ l | q:l ∈ I }`. Unknown components
    /// simply project to the empty set.
    pub fn project(&self, q: &ComponentName) -> BTreeSet<Literal> {
        self.literals
            .iter()
            .filter(|sl| sl.is_local_to(q))
            .map(|sl| sl.literal.clone())
            .collect()
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

/// An ordered list of component names to successively minimize on.
/// Duplicates are permitted; an empty sequence means "no focusing".
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FocusSequence(pub Vec<ComponentName>);

impl FocusSequence {
    pub fn names(&self) -> &[ComponentName] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
