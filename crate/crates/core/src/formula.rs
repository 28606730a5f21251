//! Syntax of the strict-implication language: formulas, templates, parsing and printing.
//!
//! Negation has no constructor of its own: `~x` parses to `x -> #f`. The box is
//! kept as a constructor only so that parsed input can be printed back as written;
//! [`normalize`] replaces it by `#t ~> x`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Bot,
    Top,
    Atom(Arc<str>),
    /// Metavariable, only meaningful inside scheme templates.
    Meta(Arc<str>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
    Strictif(Arc<Formula>, Arc<Formula>),
    Box(Arc<Formula>),
}

/// A formula that may contain metavariables.
pub type Template = Formula;

pub type Binding = BTreeMap<String, Formula>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("unexpected character {ch:?} at position {pos}")]
    BadChar { pos: usize, ch: char },
    #[error("expected {expected} at position {pos}, found {found}")]
    Unexpected {
        pos: usize,
        expected: &'static str,
        found: String,
    },
    #[error("chained `~>` at position {pos} needs explicit parentheses")]
    ChainedStrict { pos: usize },
    #[error("`/\\` and `\\/` mixed without parentheses at position {pos}")]
    MixedConnectives { pos: usize },
    #[error("metavariable ?{name} at position {pos} is not allowed in an object formula")]
    Metavariable { pos: usize, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("metavariable ?{0} is unbound")]
    Unbound(String),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    pub fn meta(name: &str) -> Formula {
        Formula::Meta(Arc::from(name))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Arc::new(a), Arc::new(b))
    }

    pub fn strict(a: Formula, b: Formula) -> Formula {
        Formula::Strictif(Arc::new(a), Arc::new(b))
    }

    /// `□a` in normalized form, i.e. `⊤ ⤳ a`.
    pub fn boxed(a: Formula) -> Formula {
        Formula::strict(Formula::Top, a)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::Bot)
    }

    /// Right-nested implication `hyps[0] -> (hyps[1] -> ... -> goal)`.
    pub fn imps(hyps: &[Formula], goal: Formula) -> Formula {
        hyps.iter()
            .rev()
            .fold(goal, |acc, h| Formula::imp(h.clone(), acc))
    }

    /// Left-nested conjunction; `⊤` when empty.
    pub fn conj(parts: &[Formula]) -> Formula {
        let mut it = parts.iter().cloned();
        match it.next() {
            None => Formula::Top,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Left-nested disjunction; `⊥` when empty.
    pub fn disj(parts: &[Formula]) -> Formula {
        let mut it = parts.iter().cloned();
        match it.next() {
            None => Formula::Bot,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Imp(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn is_modal(&self) -> bool {
        match self {
            Formula::Strictif(..) | Formula::Box(_) => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.is_modal() || b.is_modal()
            }
            _ => false,
        }
    }

    pub fn has_meta(&self) -> bool {
        match self {
            Formula::Meta(_) => true,
            Formula::Box(a) => a.has_meta(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Imp(a, b)
            | Formula::Strictif(a, b) => a.has_meta() || b.has_meta(),
            _ => false,
        }
    }

    /// Number of constructor nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Bot | Formula::Top | Formula::Atom(_) | Formula::Meta(_) => 1,
            Formula::Box(a) => 1 + a.size(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Imp(a, b)
            | Formula::Strictif(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Bot | Formula::Top | Formula::Atom(_) | Formula::Meta(_) => 0,
            Formula::Box(a) => 1 + a.depth(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Imp(a, b)
            | Formula::Strictif(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

/// Replaces every `□x` by `⊤ ⤳ x`.
pub fn normalize(f: &Formula) -> Formula {
    fn go(f: &Arc<Formula>) -> Arc<Formula> {
        if is_normal(f) {
            return f.clone();
        }
        Arc::new(normalize(f))
    }
    match f {
        Formula::Box(a) => Formula::Strictif(Arc::new(Formula::Top), go(a)),
        Formula::And(a, b) => Formula::And(go(a), go(b)),
        Formula::Or(a, b) => Formula::Or(go(a), go(b)),
        Formula::Imp(a, b) => Formula::Imp(go(a), go(b)),
        Formula::Strictif(a, b) => Formula::Strictif(go(a), go(b)),
        other => other.clone(),
    }
}

pub fn is_normal(f: &Formula) -> bool {
    match f {
        Formula::Box(_) => false,
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::Imp(a, b)
        | Formula::Strictif(a, b) => is_normal(a) && is_normal(b),
        _ => true,
    }
}

/// Simultaneous replacement of metavariables.
pub fn substitute(template: &Template, binding: &Binding) -> Result<Formula, SubstError> {
    Ok(match template {
        Formula::Meta(name) => binding
            .get(&**name)
            .cloned()
            .ok_or_else(|| SubstError::Unbound(name.to_string()))?,
        Formula::Box(a) => Formula::Box(Arc::new(substitute(a, binding)?)),
        Formula::And(a, b) => Formula::and(substitute(a, binding)?, substitute(b, binding)?),
        Formula::Or(a, b) => Formula::or(substitute(a, binding)?, substitute(b, binding)?),
        Formula::Imp(a, b) => Formula::imp(substitute(a, binding)?, substitute(b, binding)?),
        Formula::Strictif(a, b) => {
            Formula::strict(substitute(a, binding)?, substitute(b, binding)?)
        }
        other => other.clone(),
    })
}

pub fn atoms(f: &Formula) -> BTreeSet<String> {
    fn go(f: &Formula, out: &mut BTreeSet<String>) {
        match f {
            Formula::Atom(n) => {
                out.insert(n.to_string());
            }
            Formula::Box(a) => go(a, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Imp(a, b)
            | Formula::Strictif(a, b) => {
                go(a, out);
                go(b, out);
            }
            _ => {}
        }
    }
    let mut out = BTreeSet::new();
    go(f, &mut out);
    out
}

pub fn metavars(f: &Formula) -> BTreeSet<String> {
    fn go(f: &Formula, out: &mut BTreeSet<String>) {
        match f {
            Formula::Meta(n) => {
                out.insert(n.to_string());
            }
            Formula::Box(a) => go(a, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Imp(a, b)
            | Formula::Strictif(a, b) => {
                go(a, out);
                go(b, out);
            }
            _ => {}
        }
    }
    let mut out = BTreeSet::new();
    go(f, &mut out);
    out
}

pub fn subformulas(f: &Formula) -> BTreeSet<Formula> {
    fn go(f: &Formula, out: &mut BTreeSet<Formula>) {
        if !out.insert(f.clone()) {
            return;
        }
        match f {
            Formula::Box(a) => go(a, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Imp(a, b)
            | Formula::Strictif(a, b) => {
                go(a, out);
                go(b, out);
            }
            _ => {}
        }
    }
    let mut out = BTreeSet::new();
    go(f, &mut out);
    out
}

/// Membership in `σ ::= ⊤ | ⊥ | ⊤⤳φ | σ∨σ`.
pub fn is_modal_sigma(f: &Formula) -> bool {
    match f {
        Formula::Top | Formula::Bot | Formula::Box(_) => true,
        Formula::Strictif(a, _) => **a == Formula::Top,
        Formula::Or(a, b) => is_modal_sigma(a) && is_modal_sigma(b),
        _ => false,
    }
}

/// The `(χ)(·)` translation: identity on σ-formulas, pushed through `∧`, and `χ → φ` otherwise.
pub fn chi_translate(chi: &Formula, f: &Formula) -> Formula {
    if is_modal_sigma(f) {
        return f.clone();
    }
    match f {
        Formula::And(a, b) => Formula::and(chi_translate(chi, a), chi_translate(chi, b)),
        _ => Formula::imp(chi.clone(), f.clone()),
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Bot,
    Top,
    Not,
    Box,
    And,
    Or,
    Imp,
    Strict,
    LParen,
    RParen,
    Ident(String),
    Meta(String),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Bot => f.write_str("`#f`"),
            Tok::Top => f.write_str("`#t`"),
            Tok::Not => f.write_str("`~`"),
            Tok::Box => f.write_str("`[]`"),
            Tok::And => f.write_str("`/\\`"),
            Tok::Or => f.write_str("`\\/`"),
            Tok::Imp => f.write_str("`->`"),
            Tok::Strict => f.write_str("`~>`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Ident(s) => write!(f, "atom `{s}`"),
            Tok::Meta(s) => write!(f, "metavariable `?{s}`"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let two = |s: &[u8]| bytes[i..].starts_with(s);
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let (tok, len) = if two(b"#f") {
            (Tok::Bot, 2)
        } else if two(b"#t") {
            (Tok::Top, 2)
        } else if two(b"~>") {
            (Tok::Strict, 2)
        } else if c == b'~' {
            (Tok::Not, 1)
        } else if two(b"[]") {
            (Tok::Box, 2)
        } else if two(b"/\\") {
            (Tok::And, 2)
        } else if two(b"\\/") {
            (Tok::Or, 2)
        } else if two(b"->") {
            (Tok::Imp, 2)
        } else if c == b'(' {
            (Tok::LParen, 1)
        } else if c == b')' {
            (Tok::RParen, 1)
        } else if c.is_ascii_alphabetic() || (c == b'?' && i + 1 < bytes.len() && bytes[i + 1].is_ascii_alphabetic()) {
            let start = if c == b'?' { i + 1 } else { i };
            let mut j = start + 1;
            while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                j += 1;
            }
            let name = text[start..j].to_string();
            let tok = if c == b'?' { Tok::Meta(name) } else { Tok::Ident(name) };
            (tok, j - i)
        } else {
            let ch = text[i..].chars().next().unwrap_or('?');
            return Err(ParseError::BadChar { pos: i, ch });
        };
        out.push((i, tok));
        i += len;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    allow_meta: bool,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn found(&self) -> String {
        self.peek()
            .map(|t| t.to_string())
            .unwrap_or_else(|| "end of input".to_string())
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.junction()?;
        if self.peek() == Some(&Tok::Imp) {
            self.pos += 1;
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn junction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.strict()?;
        let mut op: Option<Tok> = None;
        while let Some(t @ (Tok::And | Tok::Or)) = self.peek().cloned() {
            if op.as_ref().is_some_and(|o| *o != t) {
                return Err(ParseError::MixedConnectives { pos: self.offset() });
            }
            self.pos += 1;
            let rhs = self.strict()?;
            acc = if t == Tok::And {
                Formula::and(acc, rhs)
            } else {
                Formula::or(acc, rhs)
            };
            op = Some(t);
        }
        Ok(acc)
    }

    fn strict(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if self.peek() == Some(&Tok::Strict) {
            self.pos += 1;
            let rhs = self.unary()?;
            if self.peek() == Some(&Tok::Strict) {
                return Err(ParseError::ChainedStrict { pos: self.offset() });
            }
            return Ok(Formula::strict(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let at = self.offset();
        let Some(tok) = self.peek().cloned() else {
            return Err(ParseError::Unexpected {
                pos: at,
                expected: "a formula",
                found: self.found(),
            });
        };
        self.pos += 1;
        match tok {
            Tok::Bot => Ok(Formula::Bot),
            Tok::Top => Ok(Formula::Top),
            Tok::Ident(name) => Ok(Formula::atom(&name)),
            Tok::Meta(name) => {
                if self.allow_meta {
                    Ok(Formula::meta(&name))
                } else {
                    Err(ParseError::Metavariable { pos: at, name })
                }
            }
            Tok::Not => Ok(Formula::not(self.unary()?)),
            Tok::Box => Ok(Formula::Box(Arc::new(self.unary()?))),
            Tok::LParen => {
                let inner = self.imp()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(ParseError::Unexpected {
                        pos: self.offset(),
                        expected: "`)`",
                        found: self.found(),
                    });
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => {
                self.pos -= 1;
                Err(ParseError::Unexpected {
                    pos: at,
                    expected: "a formula",
                    found: self.found(),
                })
            }
        }
    }
}

fn parse_with(text: &str, allow_meta: bool) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        allow_meta,
    };
    let f = p.imp()?;
    if p.pos < p.toks.len() {
        return Err(ParseError::Unexpected {
            pos: p.offset(),
            expected: "end of input",
            found: p.found(),
        });
    }
    Ok(f)
}

/// Parses an object formula. The box is kept as written; see [`normalize`].
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    parse_with(text, false)
}

/// Parses a scheme template, where `?name` denotes a metavariable.
pub fn parse_template(text: &str) -> Result<Template, ParseError> {
    parse_with(text, true)
}

// ---------------------------------------------------------------------------
// Printing

// Binding levels: 1 `->`, 2 `/\` `\/`, 3 `~>`, 4 unary and atoms.
fn level(f: &Formula) -> u8 {
    match f {
        Formula::Imp(_, b) if **b == Formula::Bot => 4,
        Formula::Imp(..) => 1,
        Formula::And(..) | Formula::Or(..) => 2,
        Formula::Strictif(a, _) if **a == Formula::Top => 4,
        Formula::Strictif(..) => 3,
        _ => 4,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if level(f) < min {
        out.write_str("(")?;
        write_formula(f, out)?;
        out.write_str(")")
    } else {
        write_formula(f, out)
    }
}

fn write_formula(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f {
        Formula::Bot => out.write_str("#f"),
        Formula::Top => out.write_str("#t"),
        Formula::Atom(n) => out.write_str(n),
        Formula::Meta(n) => write!(out, "?{n}"),
        Formula::Imp(a, b) if **b == Formula::Bot => {
            out.write_str("~")?;
            write_at(a, 4, out)
        }
        Formula::Strictif(a, b) if **a == Formula::Top => {
            out.write_str("[]")?;
            write_at(b, 4, out)
        }
        Formula::Box(a) => {
            out.write_str("[]")?;
            write_at(a, 4, out)
        }
        Formula::Imp(a, b) => {
            write_at(a, 2, out)?;
            out.write_str(" -> ")?;
            write_at(b, 1, out)
        }
        Formula::Strictif(a, b) => {
            write_at(a, 4, out)?;
            out.write_str(" ~> ")?;
            write_at(b, 4, out)
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            let is_and = matches!(f, Formula::And(..));
            let same = matches!(
                (is_and, &**a),
                (true, Formula::And(..)) | (false, Formula::Or(..))
            );
            if same {
                write_formula(a, out)?;
            } else {
                write_at(a, 3, out)?;
            }
            out.write_str(if is_and { " /\\ " } else { " \\/ " })?;
            write_at(b, 3, out)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn a(s: &str) -> Formula {
        Formula::atom(s)
    }

    #[test]
    fn unary_binds_tightest() {
        let expected = Formula::imp(
            Formula::Box(Arc::new(a("p"))),
            Formula::strict(a("q"), a("r")),
        );
        assert_eq!(p("[]p -> q ~> r"), expected);
    }

    #[test]
    fn strict_binds_tighter_than_disjunction() {
        let expected = Formula::or(
            Formula::strict(a("p"), a("q")),
            Formula::strict(a("r"), a("s")),
        );
        assert_eq!(p("p ~> q \\/ r ~> s"), expected);
    }

    #[test]
    fn implication_is_right_associative() {
        assert_eq!(
            p("p -> q -> r"),
            Formula::imp(a("p"), Formula::imp(a("q"), a("r")))
        );
    }

    #[test]
    fn negation_is_implication_to_bottom() {
        assert_eq!(p("~p"), Formula::imp(a("p"), Formula::Bot));
        assert_eq!(p("~~p"), Formula::not(Formula::not(a("p"))));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(parse(""), Err(ParseError::Empty));
        assert_eq!(parse("   "), Err(ParseError::Empty));
        assert!(matches!(parse("p ~> q ~> r"), Err(ParseError::ChainedStrict { .. })));
        assert!(matches!(parse("p /\\ q \\/ r"), Err(ParseError::MixedConnectives { .. })));
        assert!(matches!(parse("p & q"), Err(ParseError::BadChar { pos: 2, ch: '&' })));
        assert!(matches!(parse("(p -> q"), Err(ParseError::Unexpected { .. })));
        assert!(matches!(parse("p q"), Err(ParseError::Unexpected { pos: 2, .. })));
        assert!(matches!(parse("?phi"), Err(ParseError::Metavariable { .. })));
    }

    #[test]
    fn templates_accept_metavariables() {
        let t = parse_template("?phi ~> ?psi").unwrap();
        assert_eq!(t, Formula::strict(Formula::meta("phi"), Formula::meta("psi")));
        assert!(t.has_meta());
    }

    #[test]
    fn print_round_trips() {
        for s in [
            "p -> p",
            "(p -> q) -> r",
            "p /\\ (q /\\ r)",
            "(p \\/ q) /\\ r",
            "~(p ~> q)",
            "[](p -> q) ~> []p",
            "(p ~> q) ~> r",
            "#t ~> #f",
            "~~p \\/ ~p",
            "p /\\ q /\\ r",
        ] {
            let f = normalize(&p(s));
            let printed = f.to_string();
            assert_eq!(normalize(&p(&printed)), f, "{s} printed as {printed}");
        }
        assert_eq!(p("p /\\ q /\\ r").to_string(), "p /\\ q /\\ r");
        assert_eq!(p("p -> #f").to_string(), "~p");
        assert_eq!(p("#t ~> p").to_string(), "[]p");
    }

    #[test]
    fn normalize_replaces_box() {
        assert_eq!(normalize(&p("[]p")), Formula::strict(Formula::Top, a("p")));
        assert!(is_normal(&normalize(&p("[][]p -> []q"))));
        let f = p("p ~> q");
        assert_eq!(normalize(&f), f);
    }

    #[test]
    fn substitution_examples() {
        let tr = parse_template("?phi ~> ?psi -> ?psi ~> ?chi -> ?phi ~> ?chi").unwrap();
        let b: Binding = [("phi", "p"), ("psi", "p"), ("chi", "p")]
            .into_iter()
            .map(|(k, v)| (k.to_string(), p(v)))
            .collect();
        assert_eq!(
            substitute(&tr, &b).unwrap(),
            p("(p ~> p) -> (p ~> p) -> (p ~> p)")
        );

        let kp = parse_template("?phi ~> ?psi -> (?phi /\\ ?chi) ~> (?psi /\\ ?chi)").unwrap();
        let b: Binding = [("phi", "[]#f"), ("psi", "p"), ("chi", "q")]
            .into_iter()
            .map(|(k, v)| (k.to_string(), p(v)))
            .collect();
        let expected = Formula::imp(
            Formula::strict(Formula::Box(Arc::new(Formula::Bot)), a("p")),
            Formula::strict(
                Formula::and(Formula::Box(Arc::new(Formula::Bot)), a("q")),
                Formula::and(a("p"), a("q")),
            ),
        );
        assert_eq!(substitute(&kp, &b).unwrap(), expected);

        let s = parse_template("(?phi -> ?psi) -> ?phi ~> ?psi").unwrap();
        let b: Binding = [("phi", "#t"), ("psi", "p")]
            .into_iter()
            .map(|(k, v)| (k.to_string(), p(v)))
            .collect();
        assert_eq!(substitute(&s, &b).unwrap(), p("(#t -> p) -> #t ~> p"));

        let err = substitute(&s, &Binding::new()).unwrap_err();
        assert_eq!(err, SubstError::Unbound("phi".into()));
    }

    #[test]
    fn atoms_and_subformulas() {
        let set: BTreeSet<String> = ["p", "q"].iter().map(|s| s.to_string()).collect();
        assert_eq!(atoms(&p("p ~> (q -> p)")), set);
        assert!(atoms(&normalize(&p("[]#f"))).is_empty());
        assert_eq!(subformulas(&p("(p ~> q) -> p")).len(), 4);
    }

    #[test]
    fn sigma_grammar() {
        assert!(is_modal_sigma(&normalize(&p("#t ~> p \\/ #f"))));
        assert!(is_modal_sigma(&p("[]q \\/ #t")));
        assert!(!is_modal_sigma(&p("p")));
        assert!(!is_modal_sigma(&p("p ~> q")));
        assert!(!is_modal_sigma(&p("[]q /\\ #t")));
        assert!(!is_modal_sigma(&p("~[]q")));
    }

    #[test]
    fn chi_translation_clauses() {
        let chi = p("p -> q");
        let sigma = p("[]q \\/ #t");
        assert_eq!(chi_translate(&chi, &sigma), sigma);
        assert_eq!(chi_translate(&chi, &a("r")), Formula::imp(chi.clone(), a("r")));
        assert_eq!(
            chi_translate(&chi, &p("r /\\ s")),
            Formula::and(chi_translate(&chi, &a("r")), chi_translate(&chi, &a("s")))
        );
        assert_eq!(
            chi_translate(&chi, &p("r /\\ []s")),
            Formula::and(Formula::imp(chi.clone(), a("r")), p("[]s"))
        );
    }

    #[test]
    fn folds() {
        assert_eq!(Formula::conj(&[]), Formula::Top);
        assert_eq!(Formula::disj(&[]), Formula::Bot);
        assert_eq!(
            Formula::conj(&[a("p"), a("q"), a("r")]),
            Formula::and(Formula::and(a("p"), a("q")), a("r"))
        );
        assert_eq!(
            Formula::imps(&[a("p"), a("q")], a("r")),
            p("p -> q -> r")
        );
    }
}
