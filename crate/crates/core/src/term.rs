//! Boolean terms over a declared variable universe.
//!
//! Terms are interpreted in the free Boolean algebra over the universe: the
//! denotation of a term is the set of valuations that satisfy it, stored as a
//! bit mask over all `2^n` valuations. Order and equality between terms are
//! decided on these masks.

use std::fmt;
use std::sync::Arc;

use smallvec::{smallvec, SmallVec};
use thiserror::Error;

/// Default cap on the number of declared variables.
pub const DEFAULT_VARIABLE_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("variable universe is empty")]
    EmptyUniverse,
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("universe has {size} variables, cap is {cap}")]
    UniverseTooLarge { size: usize, cap: usize },
    #[error("`{0}` is not a valid variable name")]
    InvalidVariableName(String),
    #[error("undeclared variable `{name}` at offset {offset}")]
    UndeclaredVariable { name: String, offset: usize },
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("semantic forms come from different universes ({left} vs {right} variables)")]
    UniverseMismatch { left: usize, right: usize },
}

/// The ordered, duplicate-free list of variables every term is built over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableUniverse {
    names: Vec<String>,
}

impl VariableUniverse {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, TermError> {
        Self::with_cap(names, DEFAULT_VARIABLE_CAP)
    }

    pub fn with_cap<S: AsRef<str>>(names: &[S], cap: usize) -> Result<Self, TermError> {
        if names.is_empty() {
            return Err(TermError::EmptyUniverse);
        }
        // Masks are indexed by u32 valuations and sized 2^n bits.
        let cap = cap.min(24);
        if names.len() > cap {
            return Err(TermError::UniverseTooLarge {
                size: names.len(),
                cap,
            });
        }
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for name in names {
            let name = name.as_ref();
            if !is_identifier(name) || is_reserved(name) {
                return Err(TermError::InvalidVariableName(name.to_string()));
            }
            if out.iter().any(|n| n == name) {
                return Err(TermError::DuplicateVariable(name.to_string()));
            }
            out.push(name.to_string());
        }
        Ok(VariableUniverse { names: out })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Number of valuations, `2^n`.
    pub fn valuation_count(&self) -> usize {
        1usize << self.names.len()
    }

    pub fn valuations(&self) -> impl Iterator<Item = Valuation> {
        (0..self.valuation_count() as u32).map(Valuation)
    }

    pub fn parse(&self, text: &str) -> Result<Term, TermError> {
        parse_term(text, self)
    }

    pub fn form(&self, term: &Term) -> SemanticForm {
        semantic_form(term, self)
    }

    /// Renders a valuation as the total conjunction of literals, e.g. `g & ~t`.
    pub fn render_valuation(&self, v: Valuation) -> String {
        self.names
            .iter()
            .enumerate()
            .map(|(i, n)| {
                if v.value(i) {
                    n.clone()
                } else {
                    format!("~{n}")
                }
            })
            .collect::<Vec<_>>()
            .join(" & ")
    }

    /// Reads a total conjunction of literals back into the valuation it names.
    /// Every variable must occur exactly once.
    pub fn parse_valuation(&self, text: &str) -> Result<Valuation, TermError> {
        let term = self.parse(text)?;
        let mut assigned: Vec<Option<bool>> = vec![None; self.len()];
        fn walk(
            t: &Term,
            u: &VariableUniverse,
            assigned: &mut [Option<bool>],
        ) -> Result<(), String> {
            let (name, value) = match t {
                Term::And(l, r) => {
                    walk(l, u, assigned)?;
                    return walk(r, u, assigned);
                }
                Term::Var(n) => (n, true),
                Term::Not(inner) => match &**inner {
                    Term::Var(n) => (n, false),
                    _ => return Err(format!("`{t}` is not a literal")),
                },
                other => return Err(format!("`{other}` is not a literal")),
            };
            let idx = u.index_of(name).ok_or_else(|| format!("unknown `{name}`"))?;
            if assigned[idx].is_some() {
                return Err(format!("`{name}` assigned twice"));
            }
            assigned[idx] = Some(value);
            Ok(())
        }
        walk(&term, self, &mut assigned).map_err(|message| TermError::Parse {
            offset: 0,
            message: format!("`{text}` does not name a valuation: {message}"),
        })?;
        let mut index = 0u32;
        for (i, value) in assigned.iter().enumerate() {
            match value {
                Some(true) => index |= 1 << i,
                Some(false) => {}
                None => {
                    return Err(TermError::Parse {
                        offset: 0,
                        message: format!(
                            "`{text}` does not name a valuation: `{}` unassigned",
                            self.names[i]
                        ),
                    })
                }
            }
        }
        Ok(Valuation(index))
    }
}

/// Abstract syntax of a Boolean term. `->` is parser sugar and never appears here.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Top,
    Bot,
    Not(Box<Term>),
    And(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(t: Term) -> Term {
        Term::Not(Box::new(t))
    }

    pub fn and(l: Term, r: Term) -> Term {
        Term::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Term, r: Term) -> Term {
        Term::Or(Box::new(l), Box::new(r))
    }

    /// Truth value under a valuation. Variables missing from the universe are false.
    pub fn evaluate(&self, universe: &VariableUniverse, v: Valuation) -> bool {
        match self {
            Term::Var(n) => universe.index_of(n).map(|i| v.value(i)).unwrap_or(false),
            Term::Top => true,
            Term::Bot => false,
            Term::Not(t) => !t.evaluate(universe, v),
            Term::And(l, r) => l.evaluate(universe, v) && r.evaluate(universe, v),
            Term::Or(l, r) => l.evaluate(universe, v) || r.evaluate(universe, v),
        }
    }

    pub fn variables(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Var(n) => {
                if !out.contains(&n.as_str()) {
                    out.push(n)
                }
            }
            Term::Top | Term::Bot => {}
            Term::Not(t) => t.collect_vars(out),
            Term::And(l, r) | Term::Or(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::Or(..) => 1,
            Term::And(..) => 2,
            Term::Not(_) => 3,
            Term::Var(_) | Term::Top | Term::Bot => 4,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_term(self))
    }
}

/// Renders with the fewest parentheses that still parse back to the same tree.
pub fn render_term(t: &Term) -> String {
    let mut out = String::new();
    render_into(t, &mut out);
    out
}

fn render_into(t: &Term, out: &mut String) {
    match t {
        Term::Var(n) => out.push_str(n),
        Term::Top => out.push('1'),
        Term::Bot => out.push('0'),
        Term::Not(inner) => {
            out.push('~');
            render_child(inner, inner.precedence() < 3, out);
        }
        Term::And(l, r) => {
            render_child(l, l.precedence() < 2, out);
            out.push_str(" & ");
            render_child(r, r.precedence() <= 2, out);
        }
        Term::Or(l, r) => {
            render_child(l, l.precedence() < 1, out);
            out.push_str(" | ");
            render_child(r, r.precedence() <= 1, out);
        }
    }
}

fn render_child(t: &Term, paren: bool, out: &mut String) {
    if paren {
        out.push('(');
        render_into(t, out);
        out.push(')');
    } else {
        render_into(t, out);
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if is_ident_start(c)) && chars.all(is_ident_char)
}

fn is_reserved(s: &str) -> bool {
    matches!(s, "TRUE" | "FALSE")
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, TermError> {
    let mut toks = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        let tok = match c {
            '~' | '!' | '¬' => {
                it.next();
                Tok::Not
            }
            '&' | '∧' => {
                it.next();
                Tok::And
            }
            '|' | '∨' => {
                it.next();
                Tok::Or
            }
            '(' => {
                it.next();
                Tok::LParen
            }
            ')' => {
                it.next();
                Tok::RParen
            }
            '-' => {
                it.next();
                match it.next() {
                    Some((_, '>')) => Tok::Implies,
                    _ => {
                        return Err(TermError::Parse {
                            offset: pos,
                            message: "expected `->`".into(),
                        })
                    }
                }
            }
            '1' | '0' => {
                it.next();
                if c == '1' {
                    Tok::True
                } else {
                    Tok::False
                }
            }
            c if is_ident_start(c) => {
                let mut name = String::new();
                while let Some(&(_, c)) = it.peek() {
                    if is_ident_char(c) {
                        name.push(c);
                        it.next();
                    } else {
                        break;
                    }
                }
                match name.as_str() {
                    "TRUE" => Tok::True,
                    "FALSE" => Tok::False,
                    _ => Tok::Ident(name),
                }
            }
            other => {
                return Err(TermError::Parse {
                    offset: pos,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        toks.push((pos, tok));
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    universe: &'a VariableUniverse,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn error(&self, message: impl Into<String>) -> TermError {
        TermError::Parse {
            offset: self.offset(),
            message: message.into(),
        }
    }

    fn implication(&mut self) -> Result<Term, TermError> {
        let mut lhs = self.disjunction()?;
        while self.peek() == Some(&Tok::Implies) {
            self.pos += 1;
            let rhs = self.disjunction()?;
            lhs = Term::or(Term::not(lhs), rhs);
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Term, TermError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            let rhs = self.conjunction()?;
            lhs = Term::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Term, TermError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Term::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Term, TermError> {
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Term::not(self.unary()?))
            }
            Some(Tok::True) => {
                self.pos += 1;
                Ok(Term::Top)
            }
            Some(Tok::False) => {
                self.pos += 1;
                Ok(Term::Bot)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.universe.index_of(&name).is_none() {
                    return Err(TermError::UndeclaredVariable { name, offset });
                }
                Ok(Term::Var(name))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.implication()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => Err(self.error("expected a term")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parses the concrete syntax `~` > `&` > `|` > `->` (binaries left-associative).
pub fn parse_term(text: &str, universe: &VariableUniverse) -> Result<Term, TermError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        universe,
    };
    if p.peek().is_none() {
        return Err(p.error("empty formula"));
    }
    let t = p.implication()?;
    if p.peek().is_some() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(t)
}

/// A valuation, encoded as the integer whose bit `i` is the value of variable `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation(pub u32);

impl Valuation {
    pub fn value(self, var: usize) -> bool {
        (self.0 >> var) & 1 == 1
    }
}

/// Denotation of a term: the set of satisfying valuations as a bit mask.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SemanticForm {
    vars: u8,
    bits: SmallVec<[u64; 1]>,
}

impl fmt::Debug for SemanticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SemanticForm({}v:", self.vars)?;
        for w in self.bits.iter().rev() {
            write!(f, "{w:x}")?;
        }
        write!(f, ")")
    }
}

fn words_for(vars: usize) -> usize {
    (1usize << vars).div_ceil(64)
}

fn tail_mask(vars: usize) -> u64 {
    let total = 1usize << vars;
    if total.is_multiple_of(64) {
        u64::MAX
    } else {
        (1u64 << (total % 64)) - 1
    }
}

impl SemanticForm {
    pub fn bottom(vars: usize) -> Self {
        SemanticForm {
            vars: vars as u8,
            bits: smallvec![0; words_for(vars)],
        }
    }

    pub fn top(vars: usize) -> Self {
        let mut f = Self::bottom(vars);
        for w in f.bits.iter_mut() {
            *w = u64::MAX;
        }
        f.normalize();
        f
    }

    pub fn variable(vars: usize, index: usize) -> Self {
        let mut f = Self::bottom(vars);
        for v in 0..(1u32 << vars) {
            if Valuation(v).value(index) {
                f.insert(Valuation(v));
            }
        }
        f
    }

    /// The atom of the free algebra satisfied by exactly one valuation.
    pub fn singleton(vars: usize, v: Valuation) -> Self {
        let mut f = Self::bottom(vars);
        f.insert(v);
        f
    }

    fn normalize(&mut self) {
        let mask = tail_mask(self.vars as usize);
        if let Some(last) = self.bits.last_mut() {
            *last &= mask;
        }
    }

    fn insert(&mut self, v: Valuation) {
        let i = v.0 as usize;
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn vars(&self) -> usize {
        self.vars as usize
    }

    /// Raw mask words; bit `v` of the mask is valuation `v`.
    pub fn words(&self) -> &[u64] {
        &self.bits
    }

    pub fn contains(&self, v: Valuation) -> bool {
        let i = v.0 as usize;
        (self.bits[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn is_bottom(&self) -> bool {
        self.bits.iter().all(|w| *w == 0)
    }

    pub fn is_top(&self) -> bool {
        *self == Self::top(self.vars())
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn meet(&self, other: &Self) -> Self {
        debug_assert_eq!(self.vars, other.vars);
        SemanticForm {
            vars: self.vars,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn join(&self, other: &Self) -> Self {
        debug_assert_eq!(self.vars, other.vars);
        SemanticForm {
            vars: self.vars,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn complement(&self) -> Self {
        let mut f = SemanticForm {
            vars: self.vars,
            bits: self.bits.iter().map(|a| !a).collect(),
        };
        f.normalize();
        f
    }

    /// `self ⊆ other`, without the universe check.
    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn valuations(&self) -> impl Iterator<Item = Valuation> + '_ {
        (0..(1u32 << self.vars)).map(Valuation).filter(|v| self.contains(*v))
    }
}

pub fn semantic_form(t: &Term, universe: &VariableUniverse) -> SemanticForm {
    let n = universe.len();
    match t {
        Term::Var(name) => match universe.index_of(name) {
            Some(i) => SemanticForm::variable(n, i),
            None => SemanticForm::bottom(n),
        },
        Term::Top => SemanticForm::top(n),
        Term::Bot => SemanticForm::bottom(n),
        Term::Not(inner) => semantic_form(inner, universe).complement(),
        Term::And(l, r) => semantic_form(l, universe).meet(&semantic_form(r, universe)),
        Term::Or(l, r) => semantic_form(l, universe).join(&semantic_form(r, universe)),
    }
}

fn same_universe(a: &SemanticForm, b: &SemanticForm) -> Result<(), TermError> {
    if a.vars != b.vars {
        return Err(TermError::UniverseMismatch {
            left: a.vars(),
            right: b.vars(),
        });
    }
    Ok(())
}

/// `a ≤ b` in the free algebra: every valuation satisfying `a` satisfies `b`.
pub fn leq(a: &SemanticForm, b: &SemanticForm) -> Result<bool, TermError> {
    same_universe(a, b)?;
    Ok(a.is_subset(b))
}

pub fn equiv(a: &SemanticForm, b: &SemanticForm) -> Result<bool, TermError> {
    same_universe(a, b)?;
    Ok(a == b)
}

/// Atoms of the free algebra below `a`; these are exactly its satisfying valuations.
pub fn atoms_below(a: &SemanticForm) -> Vec<Valuation> {
    a.valuations().collect()
}

/// A term paired with its denotation. Equality and hashing look only at the
/// denotation, so equivalent terms are the same element.
#[derive(Clone)]
pub struct Formula {
    term: Arc<Term>,
    form: SemanticForm,
}

impl Formula {
    pub fn new(term: Term, universe: &VariableUniverse) -> Self {
        let form = semantic_form(&term, universe);
        Formula {
            term: Arc::new(term),
            form,
        }
    }

    pub fn from_parts(term: Term, form: SemanticForm) -> Self {
        Formula {
            term: Arc::new(term),
            form,
        }
    }

    pub fn term(&self) -> &Term {
        &self.term
    }

    pub fn form(&self) -> &SemanticForm {
        &self.form
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        self.form == other.form
    }
}

impl Eq for Formula {}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Formula {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.form.cmp(&other.form)
    }
}

impl std::hash::Hash for Formula {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.form.hash(state)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", self.term)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.term, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gt() -> VariableUniverse {
        VariableUniverse::new(&["g", "t"]).unwrap()
    }

    #[test]
    fn parses_precedence() {
        let u = gt();
        let t = u.parse("~g & (t | 1)").unwrap();
        assert_eq!(
            t,
            Term::and(Term::not(Term::var("g")), Term::or(Term::var("t"), Term::Top))
        );
        assert_eq!(
            u.parse("g -> t").unwrap(),
            Term::or(Term::not(Term::var("g")), Term::var("t"))
        );
        assert_eq!(
            u.parse("g | t & g").unwrap(),
            Term::or(Term::var("g"), Term::and(Term::var("t"), Term::var("g")))
        );
        assert_eq!(u.parse("TRUE").unwrap(), Term::Top);
        assert_eq!(u.parse("FALSE").unwrap(), Term::Bot);
    }

    #[test]
    fn binaries_are_left_associative() {
        let u = gt();
        assert_eq!(
            u.parse("g & t & g").unwrap(),
            Term::and(Term::and(Term::var("g"), Term::var("t")), Term::var("g"))
        );
        // (g -> t) -> g
        assert_eq!(
            u.parse("g -> t -> g").unwrap(),
            Term::or(
                Term::not(Term::or(Term::not(Term::var("g")), Term::var("t"))),
                Term::var("g")
            )
        );
    }

    #[test]
    fn reports_parse_errors() {
        let u = gt();
        assert_eq!(
            u.parse("g &"),
            Err(TermError::Parse {
                offset: 3,
                message: "unexpected end of input".into()
            })
        );
        assert!(matches!(
            u.parse("g & x"),
            Err(TermError::UndeclaredVariable { ref name, offset: 4 }) if name == "x"
        ));
        assert!(matches!(u.parse("(g"), Err(TermError::Parse { offset: 2, .. })));
        assert!(matches!(u.parse("g t"), Err(TermError::Parse { offset: 2, .. })));
        assert!(matches!(u.parse(""), Err(TermError::Parse { offset: 0, .. })));
        assert!(matches!(u.parse("g - t"), Err(TermError::Parse { offset: 2, .. })));
    }

    #[test]
    fn renders_minimal_parentheses() {
        let g = Term::var("g");
        let t = Term::var("t");
        let s = Term::var("s");
        assert_eq!(render_term(&Term::and(Term::not(g.clone()), t.clone())), "~g & t");
        assert_eq!(render_term(&Term::Top), "1");
        assert_eq!(
            render_term(&Term::or(g.clone(), Term::and(t.clone(), s.clone()))),
            "g | t & s"
        );
        assert_eq!(
            render_term(&Term::and(g.clone(), Term::or(t.clone(), s.clone()))),
            "g & (t | s)"
        );
        assert_eq!(
            render_term(&Term::and(g.clone(), Term::and(t.clone(), s.clone()))),
            "g & (t & s)"
        );
        assert_eq!(render_term(&Term::not(Term::and(g, t))), "~(g & t)");
    }

    #[test]
    fn universe_validation() {
        assert_eq!(
            VariableUniverse::new::<&str>(&[]),
            Err(TermError::EmptyUniverse)
        );
        assert_eq!(
            VariableUniverse::new(&["g", "g"]),
            Err(TermError::DuplicateVariable("g".into()))
        );
        assert!(matches!(
            VariableUniverse::with_cap(&["a", "b", "c"], 2),
            Err(TermError::UniverseTooLarge { size: 3, cap: 2 })
        ));
        assert!(VariableUniverse::new(&["TRUE"]).is_err());
        assert!(VariableUniverse::new(&["1x"]).is_err());
    }

    #[test]
    fn semantic_forms() {
        let u = gt();
        let bot = u.form(&Term::Bot);
        assert!(bot.is_bottom());
        assert_eq!(atoms_below(&bot), vec![]);
        let g = u.form(&Term::var("g"));
        assert_eq!(g.count(), 2);
        assert!(g.valuations().all(|v| v.value(0)));
        assert!(u.form(&u.parse("g & ~g").unwrap()).is_bottom());
        assert_eq!(atoms_below(&u.form(&Term::Top)).len(), 4);

        let single = VariableUniverse::new(&["g"]).unwrap();
        assert_eq!(atoms_below(&single.form(&Term::Top)).len(), 2);
    }

    #[test]
    fn order_and_equality() {
        let u = gt();
        let f = |s: &str| u.form(&u.parse(s).unwrap());
        assert!(leq(&f("g & t"), &f("g")).unwrap());
        assert!(!leq(&f("g"), &f("t")).unwrap());
        for s in ["g", "t", "1", "0", "g | ~t"] {
            assert!(leq(&f("0"), &f(s)).unwrap());
        }
        assert!(equiv(&f("~(g & t)"), &f("~g | ~t")).unwrap());
        assert!(equiv(&f("g"), &f("g | 0")).unwrap());
        assert!(!equiv(&f("g"), &f("t")).unwrap());

        let other = VariableUniverse::new(&["a", "b", "c"]).unwrap();
        assert!(matches!(
            leq(&f("g"), &other.form(&Term::Top)),
            Err(TermError::UniverseMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn valuation_names() {
        let u = gt();
        let v = u.parse_valuation("~g & t").unwrap();
        assert!(!v.value(0) && v.value(1));
        assert_eq!(u.render_valuation(v), "~g & t");
        assert!(u.parse_valuation("g").is_err());
        assert!(u.parse_valuation("g & g").is_err());
        assert!(u.parse_valuation("g | t").is_err());
    }

    #[test]
    fn large_universe_forms() {
        let names: Vec<String> = (0..8).map(|i| format!("x{i}")).collect();
        let u = VariableUniverse::new(&names).unwrap();
        let t = u.form(&Term::Top);
        assert_eq!(t.count(), 256);
        assert!(t.is_top());
        let x7 = u.form(&Term::var("x7"));
        assert_eq!(x7.count(), 128);
        assert_eq!(x7.complement().meet(&x7), SemanticForm::bottom(8));
    }
}
