//! Text formats for communicating programs (`.casp`) and prenex-DNF QBFs
//! (`.qbf`), plus the canonical renderer.
//!
//! Program grammar:
//!
//! ```text
//! program := component+
//! component := "program" NAME "{" stmt* "}"
//! stmt := rule | constraint
//! rule := heads [":-" body] "."
//! constraint := ":-" body "."
//! heads := slit (";" slit)*
//! body := belem ("," belem)*
//! belem := ["not"] slit
//! slit := [NAME ":"] ["-"] IDENT
//! ```
//!
//! Component names are uppercase-first, atoms lowercase-first; `%` starts a
//! comment. An unqualified literal inside component `Q` denotes `Q:literal`.
//! Constraints are desugared on load, so the in-memory model never holds an
//! empty head.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::model::{
    Atom, CommunicatingProgram, ComponentName, ComponentProgram, ExtendedSituatedLiteral, Literal,
    Rule, RuleDraft, SituatedLiteral, RESERVED_PREFIX,
};
use crate::qbf::{Qbf, QbfBlock, QbfError, Quantifier};
use crate::transforms::desugar_constraints;

/// 1-based location of a token inside the input text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {}, column {}: {message}", span.line, span.column)]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
}

impl ParseError {
    fn new(message: impl Into<String>, span: SourceSpan) -> Self {
        ParseError {
            message: message.into(),
            span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String), // identifier or keyword; classified by the parser
    LBrace,
    RBrace,
    LParen,
    RParen,
    Dot,
    Comma,
    Semi,
    Colon,
    Dash,
    Amp,
    Pipe,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Dash => f.write_str("`-`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Pipe => f.write_str("`|`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let span = SourceSpan {
            line,
            column: col,
            length: 1,
        };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '{' | '}' | '(' | ')' | '.' | ',' | ';' | ':' | '-' | '&' | '|' => {
                chars.next();
                col += 1;
                out.push((
                    match c {
                        '{' => Tok::LBrace,
                        '}' => Tok::RBrace,
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        '.' => Tok::Dot,
                        ',' => Tok::Comma,
                        ';' => Tok::Semi,
                        ':' => Tok::Colon,
                        '-' => Tok::Dash,
                        '&' => Tok::Amp,
                        _ => Tok::Pipe,
                    },
                    span,
                ));
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        word.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let span = SourceSpan {
                    length: word.len(),
                    ..span
                };
                out.push((Tok::Word(word), span));
            }
            other => {
                return Err(ParseError::new(
                    format!("unexpected character `{other}`"),
                    span,
                ));
            }
        }
    }
    out.push((
        Tok::Eof,
        SourceSpan {
            line,
            column: col,
            length: 0,
        },
    ));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    allow_reserved: bool,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<SourceSpan, ParseError> {
        if self.peek() == &tok {
            Ok(self.bump().1)
        } else {
            Err(ParseError::new(
                format!("expected {tok}, found {}", self.peek()),
                self.span(),
            ))
        }
    }

    fn word(&mut self, what: &str) -> Result<(String, SourceSpan), ParseError> {
        match self.bump() {
            (Tok::Word(w), s) => Ok((w, s)),
            (other, s) => Err(ParseError::new(
                format!("expected {what}, found {other}"),
                s,
            )),
        }
    }

    fn atom(&mut self) -> Result<(Atom, SourceSpan), ParseError> {
        let (w, s) = self.word("an atom")?;
        if w == "not" || w == "program" {
            return Err(ParseError::new(
                format!("`{w}` is a keyword, not an atom"),
                s,
            ));
        }
        if !self.allow_reserved && w.starts_with(RESERVED_PREFIX) {
            return Err(ParseError::new(
                format!("`{w}` uses the reserved `{RESERVED_PREFIX}` prefix"),
                s,
            ));
        }
        let atom = Atom::new(w).map_err(|e| ParseError::new(e.to_string(), s))?;
        Ok((atom, s))
    }

    fn component_name(&mut self) -> Result<(ComponentName, SourceSpan), ParseError> {
        let (w, s) = self.word("a component name")?;
        if !self.allow_reserved && w.contains(RESERVED_PREFIX) {
            return Err(ParseError::new(
                format!("`{w}` uses the reserved `{RESERVED_PREFIX}` marker"),
                s,
            ));
        }
        let name = ComponentName::new(w).map_err(|e| ParseError::new(e.to_string(), s))?;
        Ok((name, s))
    }

    fn at_component_name(&self) -> bool {
        matches!(self.peek(), Tok::Word(w) if w.chars().next().is_some_and(|c| c.is_ascii_uppercase()))
    }

    /// slit := [NAME ":"] ["-"] IDENT, defaulting to the enclosing component.
    fn situated(
        &mut self,
        current: &ComponentName,
    ) -> Result<(SituatedLiteral, SourceSpan), ParseError> {
        let (component, start) = if self.at_component_name() {
            let (name, s) = self.component_name()?;
            self.expect(Tok::Colon)?;
            (name, Some(s))
        } else {
            (current.clone(), None)
        };
        let negative = if self.peek() == &Tok::Dash {
            self.bump();
            true
        } else {
            false
        };
        let (atom, aspan) = self.atom()?;
        let span = start.unwrap_or(aspan);
        let lit = if negative {
            Literal::neg(atom)
        } else {
            Literal::pos(atom)
        };
        Ok((SituatedLiteral::new(component, lit), span))
    }

    fn body(
        &mut self,
        current: &ComponentName,
    ) -> Result<Vec<(ExtendedSituatedLiteral, SourceSpan)>, ParseError> {
        let mut out = Vec::new();
        loop {
            let naf = if self.peek() == &Tok::Word("not".into()) {
                self.bump();
                true
            } else {
                false
            };
            let (inner, span) = self.situated(current)?;
            out.push((ExtendedSituatedLiteral { inner, naf }, span));
            if self.peek() == &Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        Ok(out)
    }
}

type SpannedDraft = (RuleDraft, Vec<SourceSpan>);

fn parse_program_opts(
    text: &str,
    allow_reserved: bool,
) -> Result<CommunicatingProgram, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        allow_reserved,
    };
    let mut sections: Vec<(ComponentName, Vec<SpannedDraft>)> = Vec::new();
    loop {
        match p.peek() {
            Tok::Eof => break,
            Tok::Word(w) if w == "program" => {
                p.bump();
            }
            _ => {
                return Err(ParseError::new(
                    format!("expected `program`, found {}", p.peek()),
                    p.span(),
                ))
            }
        }
        let (name, nspan) = p.component_name()?;
        if sections.iter().any(|(n, _)| n == &name) {
            return Err(ParseError::new(
                format!("duplicate component name `{name}`"),
                nspan,
            ));
        }
        p.expect(Tok::LBrace)?;
        let mut drafts: Vec<SpannedDraft> = Vec::new();
        while p.peek() != &Tok::RBrace {
            drafts.push(parse_stmt(&mut p, &name)?);
        }
        p.expect(Tok::RBrace)?;
        sections.push((name, drafts));
    }
    if sections.is_empty() {
        return Err(ParseError::new("input contains no components", p.span()));
    }

    let declared: BTreeSet<ComponentName> = sections.iter().map(|(n, _)| n.clone()).collect();
    for (_, drafts) in &sections {
        for (draft, spans) in drafts {
            let lits = draft.head.iter().chain(draft.body.iter().map(|e| &e.inner));
            for (lit, span) in lits.zip(spans) {
                if !declared.contains(&lit.component) {
                    return Err(ParseError::new(
                        format!("reference to undeclared component `{}`", lit.component),
                        *span,
                    ));
                }
            }
        }
    }

    let components = sections.into_iter().map(|(name, drafts)| {
        let drafts: Vec<RuleDraft> = drafts.into_iter().map(|(d, _)| d).collect();
        let rules = desugar_constraints(&name, drafts).into_iter().map(|d| {
            let body_pos = d.body.iter().filter(|e| !e.naf).map(|e| e.inner.clone());
            let body_neg = d.body.iter().filter(|e| e.naf).map(|e| e.inner.clone());
            Rule::new(d.head, body_pos, body_neg)
        });
        ComponentProgram::new(name, rules)
    });
    Ok(CommunicatingProgram::new(components))
}

fn parse_stmt(p: &mut Parser, current: &ComponentName) -> Result<SpannedDraft, ParseError> {
    let mut head = Vec::new();
    let mut spans = Vec::new();
    // A leading `:` can only start the `:-` of a constraint.
    if p.peek() != &Tok::Colon {
        loop {
            let (lit, span) = p.situated(current)?;
            head.push(lit);
            spans.push(span);
            if p.peek() == &Tok::Semi {
                p.bump();
            } else {
                break;
            }
        }
    }
    let mut body = Vec::new();
    if p.peek() == &Tok::Colon {
        p.bump();
        p.expect(Tok::Dash)?;
        for (elem, span) in p.body(current)? {
            body.push(elem);
            spans.push(span);
        }
    } else if head.is_empty() {
        return Err(ParseError::new(
            format!("expected a rule or constraint, found {}", p.peek()),
            p.span(),
        ));
    }
    p.expect(Tok::Dot)?;
    Ok((RuleDraft { head, body }, spans))
}

/// Parses a communicating program, rejecting reserved (`__`) identifiers.
pub fn parse_program(text: &str) -> Result<CommunicatingProgram, ParseError> {
    parse_program_opts(text, false)
}

/// Like [`parse_program`] but accepting reserved identifiers, so that
/// transformed programs round-trip through [`render_program`].
pub fn parse_program_relaxed(text: &str) -> Result<CommunicatingProgram, ParseError> {
    parse_program_opts(text, true)
}

/// Parses a standalone situated literal of the form `Q:l` or `Q:-l`
/// (used for query flags).
pub fn parse_situated_literal(text: &str) -> Result<SituatedLiteral, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        allow_reserved: true,
    };
    if !p.at_component_name() {
        return Err(ParseError::new(
            "expected a qualified literal `Q:l`",
            p.span(),
        ));
    }
    let dummy = ComponentName::new("Q").unwrap();
    let (lit, _) = p.situated(&dummy)?;
    p.expect(Tok::Eof)?;
    Ok(lit)
}

/// Renders a program in canonical form: components sorted by name, rules in
/// canonical order, local literals unqualified. The output re-parses (via
/// [`parse_program_relaxed`]) to a program equal to the input.
pub fn render_program(p: &CommunicatingProgram) -> String {
    let mut out = String::new();
    for (i, comp) in p.components().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("program {} {{\n", comp.name));
        for rule in comp.rules() {
            out.push_str("  ");
            let heads: Vec<String> = rule
                .head
                .iter()
                .map(|l| render_slit(l, &comp.name))
                .collect();
            out.push_str(&heads.join(" ; "));
            if !rule.body_pos.is_empty() || !rule.body_neg.is_empty() {
                out.push_str(" :- ");
                let body: Vec<String> = rule
                    .body_pos
                    .iter()
                    .map(|l| render_slit(l, &comp.name))
                    .chain(
                        rule.body_neg
                            .iter()
                            .map(|l| format!("not {}", render_slit(l, &comp.name))),
                    )
                    .collect();
                out.push_str(&body.join(", "));
            }
            out.push_str(".\n");
        }
        out.push_str("}\n");
    }
    out
}

fn render_slit(sl: &SituatedLiteral, current: &ComponentName) -> String {
    if sl.is_local_to(current) {
        sl.literal.to_string()
    } else {
        sl.to_string()
    }
}

/// Parses a prenex-DNF QBF:
///
/// ```text
/// qbf := (("exists" | "forall") VAR+)+ ":" clause ("|" clause)*
/// clause := "(" lit ("&" lit)* ")"
/// lit := ["-"] VAR
/// ```
pub fn parse_qbf(text: &str) -> Result<Qbf, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        allow_reserved: false,
    };
    let mut blocks: Vec<QbfBlock> = Vec::new();
    let mut seen: BTreeSet<Atom> = BTreeSet::new();
    loop {
        let quantifier = match p.peek() {
            Tok::Word(w) if w == "exists" => Quantifier::Exists,
            Tok::Word(w) if w == "forall" => Quantifier::Forall,
            _ if blocks.is_empty() => {
                return Err(ParseError::new(
                    format!("expected `exists` or `forall`, found {}", p.peek()),
                    p.span(),
                ))
            }
            _ => break,
        };
        let qspan = p.bump().1;
        if let Some(prev) = blocks.last() {
            if prev.quantifier == quantifier {
                return Err(ParseError::new(
                    "quantifiers must strictly alternate",
                    qspan,
                ));
            }
        }
        let mut variables = BTreeSet::new();
        while matches!(p.peek(), Tok::Word(w) if w != "exists" && w != "forall") {
            let (var, vspan) = qbf_variable(&mut p)?;
            if !seen.insert(var.clone()) {
                return Err(ParseError::new(
                    format!("variable `{var}` is bound more than once"),
                    vspan,
                ));
            }
            variables.insert(var);
        }
        if variables.is_empty() {
            return Err(ParseError::new(
                "quantifier block binds no variables",
                p.span(),
            ));
        }
        blocks.push(QbfBlock {
            quantifier,
            variables,
        });
    }
    p.expect(Tok::Colon)?;
    let mut matrix = Vec::new();
    loop {
        p.expect(Tok::LParen)?;
        let mut clause = BTreeSet::new();
        loop {
            let negative = if p.peek() == &Tok::Dash {
                p.bump();
                true
            } else {
                false
            };
            let (var, vspan) = qbf_variable(&mut p)?;
            if !seen.contains(&var) {
                return Err(ParseError::new(
                    format!("variable `{var}` is not bound by any block"),
                    vspan,
                ));
            }
            clause.insert(if negative {
                Literal::neg(var)
            } else {
                Literal::pos(var)
            });
            if p.peek() == &Tok::Amp {
                p.bump();
            } else {
                break;
            }
        }
        p.expect(Tok::RParen)?;
        matrix.push(clause);
        if p.peek() == &Tok::Pipe {
            p.bump();
        } else {
            break;
        }
    }
    p.expect(Tok::Eof)?;
    Qbf::new(blocks, matrix).map_err(|e: QbfError| {
        ParseError::new(
            e.to_string(),
            SourceSpan {
                line: 1,
                column: 1,
                length: 0,
            },
        )
    })
}

fn qbf_variable(p: &mut Parser) -> Result<(Atom, SourceSpan), ParseError> {
    let (atom, span) = p.atom()?;
    // `sat` would collide with the satisfaction atom of the QBF compilation.
    if atom.as_str() == "sat" {
        return Err(ParseError::new("`sat` is a reserved variable name", span));
    }
    Ok((atom, span))
}
