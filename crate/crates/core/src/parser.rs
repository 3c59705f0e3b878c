//! Line-oriented textual syntax for knowledge bases and queries.
//!
//! ```text
//! # comments run to the end of the line
//! crole age feature crisp [0,200]
//! predicate Young : [0,200] = lshoulder(10,30)
//! define Minor := Person and some age.leq18
//! include Student <: Person
//! assert (tom : Minor) >= 4/5
//! assert ((tom,ann) : likes) >= 0.5
//! same tom thomas
//! ```
//!
//! Declarations (`role`, `crole`, `predicate`, `modifier`) are read in a
//! first pass, so they may appear anywhere in the file. The builtin
//! predicates `leq<k>`, `geq<k>` and `eq<k>` are declared on first use over
//! the value range of the concrete role they are used with, the modifier
//! `very` defaults to a piecewise-linear stand-in for `x^2`, and `m(p)` in
//! predicate position denotes the composed predicate `m ∘ p`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::kb::{
    build_kb, Assertion, AxiomKind, Concept, FuzzyAssertion, IndividualAxiom, KbError, KbParts, KnowledgeBase,
    PredicateRef, RoleDecl, TBoxAxiom,
};
use crate::membership::{
    builtin_very, default_epsilon, make_crisp, make_shape, Comparator, PiecewiseLinearFn, Shape,
};
use crate::rational::{fmt_short, one, parse_rat, zero, Rat};
use crate::reasoner::Axiom;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Failure to turn text into a knowledge base.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("invalid knowledge base: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<KbError>),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Ramp width of crisp predicates; by default 1/1000 of the
    /// predicate's domain width.
    pub epsilon: Option<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(Rat),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(r) => write!(f, "number {}", fmt_short(r)),
            Tok::Sym(s) => write!(f, "`{s}`"),
        }
    }
}

const SYMBOLS: [&str; 12] = [":=", "<:", ">=", "<=", "(", ")", ",", ":", ".", "[", "]", "="];

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(text: &str, line: usize, first_column: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |col: usize, message: String| ParseError {
        line,
        column: col + first_column,
        message,
    };
    'outer: while i < chars.len() {
        let c = chars[i];
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start + first_column));
            continue;
        }
        let negative_number = c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit());
        if c.is_ascii_digit() || negative_number {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < chars.len() && (chars[i] == '.' || chars[i] == '/') && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let s: String = chars[start..i].iter().collect();
            let r = parse_rat(&s).map_err(|_| err(start, format!("malformed number `{s}`")))?;
            out.push((Tok::Num(r), start + first_column));
            continue;
        }
        for sym in SYMBOLS {
            let n = sym.len();
            if i + n <= chars.len() && chars[i..i + n].iter().copied().eq(sym.chars()) {
                out.push((Tok::Sym(sym), i + first_column));
                i += n;
                continue 'outer;
            }
        }
        return Err(err(i, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

const KEYWORDS: [&str; 7] = ["top", "bot", "and", "or", "not", "all", "some"];

struct Cursor<'t> {
    toks: &'t [(Tok, usize)],
    pos: usize,
    line: usize,
    end_column: usize,
}

impl<'t> Cursor<'t> {
    fn new(toks: &'t [(Tok, usize)], line: usize, end_column: usize) -> Self {
        Cursor {
            toks,
            pos: 0,
            line,
            end_column,
        }
    }

    fn peek(&self) -> Option<&'t Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |(_, c)| *c)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column(),
            message: message.into(),
        }
    }

    fn expected(&self, what: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(format!("expected {what}, found {t}")),
            None => self.error(format!("expected {what}, found end of line")),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(t)) if *t == s)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(t)) if t == w)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.is_word(w) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.expected(&format!("`{s}`")))
        }
    }

    /// A user name (not a keyword).
    fn name(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.expected(what)),
        }
    }

    fn number(&mut self) -> Result<Rat, ParseError> {
        match self.peek() {
            Some(Tok::Num(r)) => {
                self.pos += 1;
                Ok(r.clone())
            }
            _ => Err(self.expected("a number")),
        }
    }

    fn end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.error(format!("unexpected {t} after the end of the statement"))),
        }
    }
}

/// Declarations and axioms collected from a text, plus what is needed to
/// keep parsing queries against it.
#[derive(Debug, Clone, Default)]
pub struct Document {
    parts: KbParts,
    options: ParseOptions,
    roles: BTreeMap<String, usize>,
    predicates: BTreeMap<String, usize>,
    modifiers: BTreeMap<String, usize>,
}

impl Document {
    pub fn new(options: ParseOptions) -> Self {
        Document {
            options,
            ..Default::default()
        }
    }

    pub fn parts(&self) -> &KbParts {
        &self.parts
    }

    /// Validates the collected parts.
    pub fn build(&self) -> Result<KnowledgeBase, Vec<KbError>> {
        build_kb(self.parts.clone())
    }

    fn epsilon(&self, lo: &Rat, hi: &Rat) -> Rat {
        self.options.epsilon.clone().unwrap_or_else(|| default_epsilon(lo, hi))
    }

    fn declare_role(&mut self, r: RoleDecl) {
        self.roles.insert(r.name.clone(), self.parts.roles.len());
        self.parts.roles.push(r);
    }

    fn declare_predicate(&mut self, name: String, f: PiecewiseLinearFn) {
        self.predicates.insert(name.clone(), self.parts.predicates.len());
        self.parts.predicates.push((name, f));
    }

    fn declare_modifier(&mut self, name: String, f: PiecewiseLinearFn) {
        self.modifiers.insert(name.clone(), self.parts.modifiers.len());
        self.parts.modifiers.push((name, f));
    }

    fn role(&self, name: &str) -> Option<&RoleDecl> {
        self.roles.get(name).map(|&i| &self.parts.roles[i])
    }

    fn predicate_fn(&self, name: &str) -> Option<&PiecewiseLinearFn> {
        self.predicates.get(name).map(|&i| &self.parts.predicates[i].1)
    }

    fn modifier_fn(&self, name: &str) -> Option<&PiecewiseLinearFn> {
        self.modifiers.get(name).map(|&i| &self.parts.modifiers[i].1)
    }

    /// Declares the builtin modifier `very` unless the user defined one.
    fn ensure_modifier(&mut self, name: &str) {
        if name == "very" && !self.modifiers.contains_key(name) {
            self.declare_modifier(name.to_string(), builtin_very());
        }
    }

    /// Parses all statements of a KB text.
    pub fn parse(text: &str, options: ParseOptions) -> Result<Self, ParseError> {
        let mut doc = Document::new(options);
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let toks = lex(raw, i + 1, 1)?;
            if !toks.is_empty() {
                lines.push((i + 1, raw.chars().count() + 1, toks));
            }
        }
        // Declarations first, so that every statement can see them.
        for (line, end, toks) in &lines {
            let mut c = Cursor::new(toks, *line, *end);
            if let Some(Tok::Ident(kw)) = c.peek() {
                match kw.as_str() {
                    "role" | "crole" => doc.role_decl(&mut c)?,
                    "predicate" => doc.predicate_decl(&mut c)?,
                    "modifier" => doc.modifier_decl(&mut c)?,
                    _ => {}
                }
            }
        }
        for (line, end, toks) in &lines {
            let mut c = Cursor::new(toks, *line, *end);
            let kw = match c.peek() {
                Some(Tok::Ident(kw)) => kw.clone(),
                _ => return Err(c.expected("a statement keyword")),
            };
            match kw.as_str() {
                "role" | "crole" | "predicate" | "modifier" => {}
                "define" | "include" => doc.tbox_axiom(&mut c)?,
                "assert" => doc.assertion(&mut c)?,
                "same" | "diff" => doc.individual_axiom(&mut c)?,
                other => return Err(c.error(format!("unknown statement `{other}`"))),
            }
        }
        Ok(doc)
    }

    fn role_decl(&mut self, c: &mut Cursor<'_>) -> Result<(), ParseError> {
        let concrete = c.is_word("crole");
        c.pos += 1;
        let column = c.column();
        let name = c.name("a role name")?;
        let mut r = if concrete {
            RoleDecl::concrete_role(name.clone())
        } else {
            RoleDecl::abstract_role(name.clone())
        };
        loop {
            if c.eat_word("feature") {
                r.feature = true;
            } else if c.eat_word("crisp") {
                r.crisp = true;
            } else if concrete && c.is_sym("[") {
                let (lo, hi) = interval(c)?;
                r.domain = Some((lo, hi));
            } else {
                break;
            }
        }
        c.end()?;
        if self.roles.contains_key(&name) {
            return Err(ParseError {
                line: c.line,
                column,
                message: format!("role `{name}` is declared twice"),
            });
        }
        self.declare_role(r);
        Ok(())
    }

    fn predicate_decl(&mut self, c: &mut Cursor<'_>) -> Result<(), ParseError> {
        c.pos += 1;
        let column = c.column();
        let name = c.name("a predicate name")?;
        c.sym(":")?;
        let (lo, hi) = interval(c)?;
        c.sym("=")?;
        let f = self.function_def(c, &lo, &hi)?;
        c.end()?;
        if self.predicates.contains_key(&name) {
            return Err(ParseError {
                line: c.line,
                column,
                message: format!("predicate `{name}` is declared twice"),
            });
        }
        self.declare_predicate(name, f);
        Ok(())
    }

    fn modifier_decl(&mut self, c: &mut Cursor<'_>) -> Result<(), ParseError> {
        c.pos += 1;
        let column = c.column();
        let name = c.name("a modifier name")?;
        c.sym("=")?;
        let f = self.function_def(c, &zero(), &one())?;
        c.end()?;
        if self.modifiers.contains_key(&name) {
            return Err(ParseError {
                line: c.line,
                column,
                message: format!("modifier `{name}` is declared twice"),
            });
        }
        self.declare_modifier(name, f);
        Ok(())
    }

    fn function_def(&self, c: &mut Cursor<'_>, lo: &Rat, hi: &Rat) -> Result<PiecewiseLinearFn, ParseError> {
        let column = c.column();
        let kind = c.name("a function shape")?;
        let line = c.line;
        let wrap = |e: crate::membership::MembershipError| ParseError {
            line,
            column,
            message: e.to_string(),
        };
        let f = match kind.as_str() {
            "pwl" => {
                let mut pts = Vec::new();
                while c.eat_sym("(") {
                    let x = c.number()?;
                    c.sym(",")?;
                    let y = c.number()?;
                    c.sym(")")?;
                    pts.push((x, y));
                }
                if pts.len() < 2 {
                    return Err(c.expected("at least two points `(x,y)`"));
                }
                let f = PiecewiseLinearFn::from_points(&pts).map_err(wrap)?;
                let (a, b) = f.domain();
                if a != lo || b != hi {
                    return Err(ParseError {
                        line: c.line,
                        column,
                        message: format!(
                            "points span [{},{}] but the declared domain is [{},{}]",
                            fmt_short(a),
                            fmt_short(b),
                            fmt_short(lo),
                            fmt_short(hi)
                        ),
                    });
                }
                f
            }
            "crisp" => {
                c.sym("(")?;
                let cmp = if c.eat_sym("<=") {
                    Comparator::Le
                } else if c.eat_sym(">=") {
                    Comparator::Ge
                } else if c.eat_sym("=") {
                    Comparator::Eq
                } else {
                    return Err(c.expected("`<=`, `>=` or `=`"));
                };
                let k = c.number()?;
                let eps = if c.eat_sym(",") {
                    c.number()?
                } else {
                    self.epsilon(lo, hi)
                };
                c.sym(")")?;
                make_crisp(cmp, &k, &eps, lo, hi).map_err(wrap)?
            }
            "trapezoid" | "triangle" | "lshoulder" | "rshoulder" => {
                c.sym("(")?;
                let mut args = vec![c.number()?];
                while c.eat_sym(",") {
                    args.push(c.number()?);
                }
                c.sym(")")?;
                let arity = match kind.as_str() {
                    "trapezoid" => 4,
                    "triangle" => 3,
                    _ => 2,
                };
                if args.len() != arity {
                    return Err(ParseError {
                        line: c.line,
                        column,
                        message: format!("`{kind}` takes {arity} parameters, found {}", args.len()),
                    });
                }
                let shape = match kind.as_str() {
                    "trapezoid" => Shape::Trapezoid(&args[0], &args[1], &args[2], &args[3]),
                    "triangle" => Shape::Triangle(&args[0], &args[1], &args[2]),
                    "lshoulder" => Shape::LeftShoulder(&args[0], &args[1]),
                    _ => Shape::RightShoulder(&args[0], &args[1]),
                };
                make_shape(shape, lo, hi).map_err(wrap)?
            }
            other => {
                return Err(ParseError {
                    line: c.line,
                    column,
                    message: format!("unknown function shape `{other}`"),
                })
            }
        };
        Ok(f)
    }

    fn tbox_axiom(&mut self, c: &mut Cursor<'_>) -> Result<(), ParseError> {
        let definition = c.is_word("define");
        c.pos += 1;
        let lhs = c.name("a concept name")?;
        c.sym(if definition { ":=" } else { "<:" })?;
        let rhs = self.concept(c)?;
        c.end()?;
        self.parts.tbox.push(TBoxAxiom {
            lhs,
            rhs,
            kind: if definition {
                AxiomKind::Definition
            } else {
                AxiomKind::Inclusion
            },
        });
        Ok(())
    }

    fn assertion(&mut self, c: &mut Cursor<'_>) -> Result<(), ParseError> {
        c.pos += 1;
        c.sym("(")?;
        let assertion = self.assertion_body(c)?;
        c.sym(")")?;
        let bound = if c.eat_sym(">=") { Some(c.number()?) } else { None };
        c.end()?;
        self.parts.abox.push(FuzzyAssertion { assertion, bound });
        Ok(())
    }

    /// `a : C` or `(a,b) : R`.
    fn assertion_body(&mut self, c: &mut Cursor<'_>) -> Result<Assertion, ParseError> {
        if c.eat_sym("(") {
            let from = c.name("an individual name")?;
            c.sym(",")?;
            let to = c.name("an individual name")?;
            c.sym(")")?;
            c.sym(":")?;
            let role = c.name("a role name")?;
            Ok(Assertion::Role { from, to, role })
        } else {
            let individual = c.name("an individual name")?;
            c.sym(":")?;
            let concept = self.concept(c)?;
            Ok(Assertion::Concept { individual, concept })
        }
    }

    fn individual_axiom(&mut self, c: &mut Cursor<'_>) -> Result<(), ParseError> {
        let same = c.is_word("same");
        c.pos += 1;
        let a = c.name("an individual name")?;
        let b = c.name("an individual name")?;
        c.end()?;
        self.parts.individual_axioms.push(if same {
            IndividualAxiom::Same(a, b)
        } else {
            IndividualAxiom::Diff(a, b)
        });
        Ok(())
    }

    fn concept(&mut self, c: &mut Cursor<'_>) -> Result<Concept, ParseError> {
        let mut left = self.conjunction(c)?;
        while c.eat_word("or") {
            let right = self.conjunction(c)?;
            left = Concept::or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self, c: &mut Cursor<'_>) -> Result<Concept, ParseError> {
        let mut left = self.unary(c)?;
        while c.eat_word("and") {
            let right = self.unary(c)?;
            left = Concept::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self, c: &mut Cursor<'_>) -> Result<Concept, ParseError> {
        if c.eat_sym("(") {
            let inner = self.concept(c)?;
            c.sym(")")?;
            return Ok(inner);
        }
        if c.eat_word("top") {
            return Ok(Concept::Top);
        }
        if c.eat_word("bot") {
            return Ok(Concept::Bottom);
        }
        if c.eat_word("not") {
            return Ok(Concept::not(self.unary(c)?));
        }
        let universal = c.is_word("all");
        if universal || c.is_word("some") {
            c.pos += 1;
            let role = c.name("a role name")?;
            c.sym(".")?;
            if self.role(&role).is_some_and(|r| r.concrete) {
                let pred = self.predicate_ref(c, &role)?;
                return Ok(if universal {
                    Concept::forall_data(role, pred)
                } else {
                    Concept::exists_data(role, pred)
                });
            }
            let filler = self.unary(c)?;
            return Ok(if universal {
                Concept::forall(role, filler)
            } else {
                Concept::exists(role, filler)
            });
        }
        let name = c.name("a concept")?;
        if c.eat_sym("(") {
            let inner = self.concept(c)?;
            c.sym(")")?;
            self.ensure_modifier(&name);
            return Ok(Concept::modified(name, inner));
        }
        Ok(Concept::Atomic(name))
    }

    /// `p`, `not p`, a builtin comparison or a composition `m(p)`.
    fn predicate_ref(&mut self, c: &mut Cursor<'_>, role: &str) -> Result<PredicateRef, ParseError> {
        let negated = c.eat_word("not");
        let name = self.predicate_name(c, role)?;
        let p = PredicateRef::new(name);
        Ok(if negated { p.negate() } else { p })
    }

    fn predicate_name(&mut self, c: &mut Cursor<'_>, role: &str) -> Result<String, ParseError> {
        let column = c.column();
        let name = c.name("a predicate name")?;
        let line = c.line;
        let at = |message: String| ParseError {
            line,
            column,
            message,
        };
        if c.eat_sym("(") {
            let inner = self.predicate_name(c, role)?;
            c.sym(")")?;
            self.ensure_modifier(&name);
            let composed = format!("{name}({inner})");
            if !self.predicates.contains_key(&composed) {
                let (Some(m), Some(p)) = (self.modifier_fn(&name), self.predicate_fn(&inner)) else {
                    // Left for validation to report as undeclared.
                    return Ok(composed);
                };
                let f = p.then(m).map_err(|e| at(e.to_string()))?;
                self.declare_predicate(composed.clone(), f);
            }
            return Ok(composed);
        }
        if !self.predicates.contains_key(&name) {
            if let Some((cmp, k)) = builtin_comparison(&name) {
                let Some((lo, hi)) = self.role(role).and_then(|r| r.domain.clone()) else {
                    return Err(at(format!(
                        "builtin predicate `{name}` needs `{role}` to declare a value range, e.g. `crole {role} [0,100]`"
                    )));
                };
                let eps = self.epsilon(&lo, &hi);
                let f = make_crisp(cmp, &k, &eps, &lo, &hi).map_err(|e| at(format!("`{name}`: {e}")))?;
                self.declare_predicate(name.clone(), f);
            }
        }
        Ok(name)
    }

    /// Parses a concept against this document's declarations.
    pub fn parse_concept(&mut self, text: &str) -> Result<Concept, ParseError> {
        let toks = lex(text, 1, 1)?;
        let mut c = Cursor::new(&toks, 1, text.chars().count() + 1);
        let concept = self.concept(&mut c)?;
        c.end()?;
        Ok(concept)
    }

    /// `a : C` or `(a,b) : R`.
    pub fn parse_assertion(&mut self, text: &str) -> Result<Assertion, ParseError> {
        let toks = lex(text, 1, 1)?;
        let mut c = Cursor::new(&toks, 1, text.chars().count() + 1);
        let a = self.assertion_body(&mut c)?;
        c.end()?;
        Ok(a)
    }

    /// `A <: B` between concept names.
    pub fn parse_subsumption(&mut self, text: &str) -> Result<(String, String), ParseError> {
        let toks = lex(text, 1, 1)?;
        let mut c = Cursor::new(&toks, 1, text.chars().count() + 1);
        let a = c.name("a concept name")?;
        c.sym("<:")?;
        let b = c.name("a concept name")?;
        if c.peek().is_some() {
            return Err(c.error("subsumption queries relate two concept names; complex concepts are not supported"));
        }
        Ok((a, b))
    }

    /// Any of the three axiom forms.
    pub fn parse_axiom(&mut self, text: &str) -> Result<Axiom, ParseError> {
        let toks = lex(text, 1, 1)?;
        if toks.iter().any(|(t, _)| *t == Tok::Sym("<:")) {
            let (a, b) = self.parse_subsumption(text)?;
            Ok(Axiom::Subsumption(a, b))
        } else {
            Ok(Axiom::Assertion(self.parse_assertion(text)?))
        }
    }
}

fn interval(c: &mut Cursor<'_>) -> Result<(Rat, Rat), ParseError> {
    c.sym("[")?;
    let lo = c.number()?;
    c.sym(",")?;
    let hi = c.number()?;
    c.sym("]")?;
    Ok((lo, hi))
}

/// `leq18`, `geq350`, `eq243`.
fn builtin_comparison(name: &str) -> Option<(Comparator, Rat)> {
    let (cmp, digits) = if let Some(d) = name.strip_prefix("leq") {
        (Comparator::Le, d)
    } else if let Some(d) = name.strip_prefix("geq") {
        (Comparator::Ge, d)
    } else {
        let d = name.strip_prefix("eq")?;
        (Comparator::Eq, d)
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some((cmp, parse_rat(digits).ok()?))
}

/// Parses a KB text into unvalidated parts.
pub fn parse_document(text: &str, options: ParseOptions) -> Result<Document, ParseError> {
    Document::parse(text, options)
}

/// Parses and validates a KB text with default options.
pub fn parse_kb(text: &str) -> Result<KnowledgeBase, LoadError> {
    parse_kb_with(text, ParseOptions::default())
}

pub fn parse_kb_with(text: &str, options: ParseOptions) -> Result<KnowledgeBase, LoadError> {
    let doc = Document::parse(text, options)?;
    doc.build().map_err(LoadError::Invalid)
}

/// Renders a knowledge base in the textual syntax. Composed predicates
/// (`m(p)`) are not declared explicitly; they are rebuilt on parsing.
pub fn print_kb(kb: &KnowledgeBase) -> String {
    use std::fmt::Write as _;
    let parts = kb.parts();
    let mut out = String::new();
    for r in &parts.roles {
        out.push_str(if r.concrete { "crole " } else { "role " });
        out.push_str(&r.name);
        if r.feature {
            out.push_str(" feature");
        }
        if r.crisp {
            out.push_str(" crisp");
        }
        if let Some((lo, hi)) = &r.domain {
            let _ = write!(out, " [{},{}]", fmt_short(lo), fmt_short(hi));
        }
        out.push('\n');
    }
    for (name, f) in &parts.modifiers {
        let _ = writeln!(out, "modifier {name} = {f}");
    }
    for (name, f) in &parts.predicates {
        if name.contains('(') {
            continue;
        }
        let (lo, hi) = f.domain();
        let _ = write!(out, "predicate {name} : [{},{}] = ", fmt_short(lo), fmt_short(hi));
        match f.crisp() {
            Some(shape) => {
                let _ = writeln!(
                    out,
                    "crisp({}{}, {})",
                    shape.comparator.symbol(),
                    fmt_short(&shape.k),
                    fmt_short(&shape.epsilon)
                );
            }
            None => {
                let _ = writeln!(out, "{f}");
            }
        }
    }
    for ax in &parts.tbox {
        match ax.kind {
            AxiomKind::Definition => {
                let _ = writeln!(out, "define {} := {}", ax.lhs, ax.rhs);
            }
            AxiomKind::Inclusion => {
                let _ = writeln!(out, "include {} <: {}", ax.lhs, ax.rhs);
            }
        }
    }
    for fa in &parts.abox {
        let _ = write!(out, "assert ({})", fa.assertion);
        if let Some(n) = &fa.bound {
            let _ = write!(out, " >= {}", fmt_short(n));
        }
        out.push('\n');
    }
    for ax in &parts.individual_axioms {
        let _ = match ax {
            IndividualAxiom::Same(a, b) => writeln!(out, "same {a} {b}"),
            IndividualAxiom::Diff(a, b) => writeln!(out, "diff {a} {b}"),
        };
    }
    out
}
