//! Abstract syntax and validation of fuzzy ALC(D) knowledge bases.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::Signed;
use thiserror::Error;

use crate::membership::PiecewiseLinearFn;
use crate::rational::{fmt_short, one, Rat};

/// Reference to a concrete predicate, possibly negated (`¬d`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredicateRef {
    pub name: String,
    pub negated: bool,
}

impl PredicateRef {
    pub fn new(name: impl Into<String>) -> Self {
        PredicateRef {
            name: name.into(),
            negated: false,
        }
    }

    pub fn negate(&self) -> Self {
        PredicateRef {
            name: self.name.clone(),
            negated: !self.negated,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Concept {
    Top,
    Bottom,
    Atomic(String),
    And(Arc<Concept>, Arc<Concept>),
    Or(Arc<Concept>, Arc<Concept>),
    Not(Arc<Concept>),
    Forall(String, Arc<Concept>),
    Exists(String, Arc<Concept>),
    ForallData(String, PredicateRef),
    ExistsData(String, PredicateRef),
    Modified(String, Arc<Concept>),
}

impl Concept {
    pub fn atomic(name: impl Into<String>) -> Self {
        Concept::Atomic(name.into())
    }

    pub fn and(a: Concept, b: Concept) -> Self {
        Concept::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Concept, b: Concept) -> Self {
        Concept::Or(Arc::new(a), Arc::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Concept) -> Self {
        Concept::Not(Arc::new(c))
    }

    pub fn forall(role: impl Into<String>, c: Concept) -> Self {
        Concept::Forall(role.into(), Arc::new(c))
    }

    pub fn exists(role: impl Into<String>, c: Concept) -> Self {
        Concept::Exists(role.into(), Arc::new(c))
    }

    pub fn forall_data(role: impl Into<String>, p: PredicateRef) -> Self {
        Concept::ForallData(role.into(), p)
    }

    pub fn exists_data(role: impl Into<String>, p: PredicateRef) -> Self {
        Concept::ExistsData(role.into(), p)
    }

    pub fn modified(m: impl Into<String>, c: Concept) -> Self {
        Concept::Modified(m.into(), Arc::new(c))
    }

    /// Nesting depth of constructors (names and ⊤/⊥ have depth 0).
    pub fn depth(&self) -> usize {
        match self {
            Concept::Top | Concept::Bottom | Concept::Atomic(_) => 0,
            Concept::ForallData(..) | Concept::ExistsData(..) => 1,
            Concept::And(a, b) | Concept::Or(a, b) => 1 + a.depth().max(b.depth()),
            Concept::Not(c) | Concept::Forall(_, c) | Concept::Exists(_, c) | Concept::Modified(_, c) => {
                1 + c.depth()
            }
        }
    }

    /// Calls `f` on every subterm, outermost first.
    pub fn walk(&self, f: &mut dyn FnMut(&Concept)) {
        f(self);
        match self {
            Concept::And(a, b) | Concept::Or(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            Concept::Not(c) | Concept::Forall(_, c) | Concept::Exists(_, c) | Concept::Modified(_, c) => c.walk(f),
            _ => {}
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |c| {
            if let Concept::Atomic(a) = c {
                out.insert(a.clone());
            }
        });
        out
    }

    fn precedence(&self) -> u8 {
        match self {
            Concept::Or(..) => 1,
            Concept::And(..) => 2,
            _ => 3,
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, c: &Concept, min_prec: u8) -> fmt::Result {
    if c.precedence() < min_prec {
        write!(f, "({c})")
    } else {
        write!(f, "{c}")
    }
}

impl fmt::Display for PredicateRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "not {}", self.name)
        } else {
            write!(f, "{}", self.name)
        }
    }
}

/// Renders in the textual KB syntax (`A and some R.(B or C)`).
impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Top => write!(f, "top"),
            Concept::Bottom => write!(f, "bot"),
            Concept::Atomic(a) => write!(f, "{a}"),
            Concept::And(a, b) => {
                write_child(f, a, 2)?;
                write!(f, " and ")?;
                write_child(f, b, 3)
            }
            Concept::Or(a, b) => {
                write_child(f, a, 1)?;
                write!(f, " or ")?;
                write_child(f, b, 2)
            }
            Concept::Not(c) => {
                write!(f, "not ")?;
                write_child(f, c, 3)
            }
            Concept::Forall(r, c) => {
                write!(f, "all {r}.")?;
                write_child(f, c, 3)
            }
            Concept::Exists(r, c) => {
                write!(f, "some {r}.")?;
                write_child(f, c, 3)
            }
            Concept::ForallData(r, p) => write!(f, "all {r}.{p}"),
            Concept::ExistsData(r, p) => write!(f, "some {r}.{p}"),
            Concept::Modified(m, c) => write!(f, "{m}({c})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxiomKind {
    Inclusion,
    Definition,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TBoxAxiom {
    pub lhs: String,
    pub rhs: Concept,
    pub kind: AxiomKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Assertion {
    Concept { individual: String, concept: Concept },
    Role { from: String, to: String, role: String },
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Concept { individual, concept } => write!(f, "{individual} : {concept}"),
            Assertion::Role { from, to, role } => write!(f, "({from},{to}) : {role}"),
        }
    }
}

/// `⟨α, n⟩`; a missing bound marks an unweighted assertion (read as 1 by
/// ordinary queries, re-weighted by the alternate degree-bound modes).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FuzzyAssertion {
    pub assertion: Assertion,
    pub bound: Option<Rat>,
}

impl FuzzyAssertion {
    pub fn effective_bound(&self) -> Rat {
        self.bound.clone().unwrap_or_else(one)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IndividualAxiom {
    Same(String, String),
    Diff(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RoleDecl {
    pub name: String,
    pub concrete: bool,
    pub feature: bool,
    /// Role degrees are restricted to {0, 1}.
    pub crisp: bool,
    /// Value range of a concrete role's fillers.
    pub domain: Option<(Rat, Rat)>,
}

impl RoleDecl {
    pub fn abstract_role(name: impl Into<String>) -> Self {
        RoleDecl {
            name: name.into(),
            concrete: false,
            feature: false,
            crisp: false,
            domain: None,
        }
    }

    pub fn concrete_role(name: impl Into<String>) -> Self {
        RoleDecl {
            concrete: true,
            ..Self::abstract_role(name)
        }
    }

    pub fn with_feature(mut self) -> Self {
        self.feature = true;
        self
    }

    pub fn with_crisp(mut self) -> Self {
        self.crisp = true;
        self
    }

    pub fn with_domain(mut self, lo: Rat, hi: Rat) -> Self {
        self.domain = Some((lo, hi));
        self
    }
}

/// Unvalidated ingredients of a knowledge base, in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KbParts {
    pub roles: Vec<RoleDecl>,
    pub predicates: Vec<(String, PiecewiseLinearFn)>,
    pub modifiers: Vec<(String, PiecewiseLinearFn)>,
    pub tbox: Vec<TBoxAxiom>,
    pub abox: Vec<FuzzyAssertion>,
    pub individual_axioms: Vec<IndividualAxiom>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KbError {
    #[error("concept `{0}` appears on the left of more than one axiom")]
    DuplicateDefinition(String),
    #[error("`{0}` is declared more than once")]
    DuplicateDeclaration(String),
    #[error("undeclared {kind} `{name}`")]
    Undeclared { kind: &'static str, name: String },
    #[error("`{name}` is used as {used} but declared as {declared}")]
    WrongKind {
        name: String,
        used: &'static str,
        declared: &'static str,
    },
    #[error("name `{name}` is used both as {first} and as {second}")]
    NameClash {
        name: String,
        first: &'static str,
        second: &'static str,
    },
    #[error("modifier `{0}` must have domain [0,1]")]
    ModifierDomain(String),
    #[error("cyclic definitions: {}", .0.join(" -> "))]
    Cyclic(Vec<String>),
    #[error("degree {0} outside [0,1]")]
    DegreeOutOfRange(String),
    #[error("role `{0}` has an empty value range")]
    BadRoleDomain(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeBase {
    roles: BTreeMap<String, RoleDecl>,
    predicates: BTreeMap<String, PiecewiseLinearFn>,
    modifiers: BTreeMap<String, PiecewiseLinearFn>,
    tbox: Vec<TBoxAxiom>,
    abox: Vec<FuzzyAssertion>,
    individual_axioms: Vec<IndividualAxiom>,
    concept_names: BTreeSet<String>,
    individuals: Vec<String>,
    warnings: Vec<String>,
    parts: KbParts,
}

impl KnowledgeBase {
    pub fn empty() -> Self {
        build_kb(KbParts::default()).expect("empty KB is valid")
    }

    pub fn role(&self, name: &str) -> Option<&RoleDecl> {
        self.roles.get(name)
    }

    pub fn roles(&self) -> impl Iterator<Item = &RoleDecl> {
        self.roles.values()
    }

    pub fn predicate(&self, name: &str) -> Option<&PiecewiseLinearFn> {
        self.predicates.get(name)
    }

    pub fn predicates(&self) -> &BTreeMap<String, PiecewiseLinearFn> {
        &self.predicates
    }

    pub fn modifier(&self, name: &str) -> Option<&PiecewiseLinearFn> {
        self.modifiers.get(name)
    }

    pub fn modifiers(&self) -> &BTreeMap<String, PiecewiseLinearFn> {
        &self.modifiers
    }

    pub fn tbox(&self) -> &[TBoxAxiom] {
        &self.tbox
    }

    pub fn abox(&self) -> &[FuzzyAssertion] {
        &self.abox
    }

    pub fn individual_axioms(&self) -> &[IndividualAxiom] {
        &self.individual_axioms
    }

    pub fn concept_names(&self) -> &BTreeSet<String> {
        &self.concept_names
    }

    /// Abstract individuals in order of first mention.
    pub fn individuals(&self) -> &[String] {
        &self.individuals
    }

    pub fn has_individual(&self, name: &str) -> bool {
        self.individuals.iter().any(|i| i == name)
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// The parts this KB was built from (declaration order preserved).
    pub fn parts(&self) -> &KbParts {
        &self.parts
    }

    /// Range of the filler variable for concrete role `role`: its declared
    /// range, or else the hull of all predicate domains.
    pub fn concrete_range(&self, role: &str) -> (Rat, Rat) {
        if let Some((lo, hi)) = self.roles.get(role).and_then(|r| r.domain.clone()) {
            return (lo, hi);
        }
        self.predicate_hull().unwrap_or_else(|| (crate::rational::zero(), one()))
    }

    fn predicate_hull(&self) -> Option<(Rat, Rat)> {
        let mut it = self.predicates.values().map(|f| f.domain());
        let (lo, hi) = it.next()?;
        let (mut lo, mut hi) = (lo.clone(), hi.clone());
        for (l, h) in it {
            if *l < lo {
                lo = l.clone();
            }
            if *h > hi {
                hi = h.clone();
            }
        }
        Some((lo, hi))
    }

    /// Problems with a query concept: undeclared roles, predicates or
    /// modifiers, roles of the wrong kind, and concept names the knowledge
    /// base never mentions.
    pub fn check_concept(&self, c: &Concept) -> Vec<KbError> {
        let mut v = Validator {
            roles: &self.roles,
            predicates: &self.predicates,
            modifiers: &self.modifiers,
            concepts: BTreeSet::new(),
            errors: Vec::new(),
        };
        v.concept(c);
        let mut errors = v.errors;
        for name in v.concepts {
            if !self.concept_names.contains(&name) {
                errors.push(KbError::Undeclared { kind: CONCEPT, name });
            }
        }
        errors
    }

    /// Same knowledge base with a different assertional part.
    pub fn with_abox(&self, abox: Vec<FuzzyAssertion>) -> Result<Self, Vec<KbError>> {
        let mut parts = self.parts.clone();
        parts.abox = abox;
        build_kb(parts)
    }
}

const CONCEPT: &str = "concept";
const ABSTRACT_ROLE: &str = "abstract role";
const CONCRETE_ROLE: &str = "concrete role";
const INDIVIDUAL: &str = "individual";
const MODIFIER: &str = "modifier";
const PREDICATE: &str = "predicate";

struct Validator<'a> {
    roles: &'a BTreeMap<String, RoleDecl>,
    predicates: &'a BTreeMap<String, PiecewiseLinearFn>,
    modifiers: &'a BTreeMap<String, PiecewiseLinearFn>,
    concepts: BTreeSet<String>,
    errors: Vec<KbError>,
}

impl Validator<'_> {
    fn role(&mut self, name: &str, concrete: bool) {
        match self.roles.get(name) {
            None => self.errors.push(KbError::Undeclared {
                kind: if concrete { CONCRETE_ROLE } else { ABSTRACT_ROLE },
                name: name.to_string(),
            }),
            Some(r) if r.concrete != concrete => self.errors.push(KbError::WrongKind {
                name: name.to_string(),
                used: if concrete { CONCRETE_ROLE } else { ABSTRACT_ROLE },
                declared: if r.concrete { CONCRETE_ROLE } else { ABSTRACT_ROLE },
            }),
            _ => {}
        }
    }

    fn concept(&mut self, c: &Concept) {
        match c {
            Concept::Top | Concept::Bottom => {}
            Concept::Atomic(a) => {
                self.concepts.insert(a.clone());
            }
            Concept::And(a, b) | Concept::Or(a, b) => {
                self.concept(a);
                self.concept(b);
            }
            Concept::Not(c) => self.concept(c),
            Concept::Forall(r, c) | Concept::Exists(r, c) => {
                self.role(r, false);
                self.concept(c);
            }
            Concept::ForallData(r, p) | Concept::ExistsData(r, p) => {
                self.role(r, true);
                if !self.predicates.contains_key(&p.name) {
                    self.errors.push(KbError::Undeclared {
                        kind: PREDICATE,
                        name: p.name.clone(),
                    });
                }
            }
            Concept::Modified(m, c) => {
                if !self.modifiers.contains_key(m) {
                    self.errors.push(KbError::Undeclared {
                        kind: MODIFIER,
                        name: m.clone(),
                    });
                }
                self.concept(c);
            }
        }
    }
}

fn check_degree(n: &Rat, errors: &mut Vec<KbError>) {
    if n.is_negative() || *n > one() {
        errors.push(KbError::DegreeOutOfRange(fmt_short(n)));
    }
}

/// Validates `parts` into a knowledge base, or lists every problem found.
pub fn build_kb(parts: KbParts) -> Result<KnowledgeBase, Vec<KbError>> {
    let mut errors = Vec::new();
    let mut roles = BTreeMap::new();
    for r in &parts.roles {
        if let Some((lo, hi)) = &r.domain {
            if lo > hi {
                errors.push(KbError::BadRoleDomain(r.name.clone()));
            }
        }
        if roles.insert(r.name.clone(), r.clone()).is_some() {
            errors.push(KbError::DuplicateDeclaration(r.name.clone()));
        }
    }
    let mut predicates = BTreeMap::new();
    for (name, f) in &parts.predicates {
        if predicates.insert(name.clone(), f.clone()).is_some() {
            errors.push(KbError::DuplicateDeclaration(name.clone()));
        }
    }
    let mut modifiers = BTreeMap::new();
    for (name, f) in &parts.modifiers {
        if f.check_modifier_domain().is_err() {
            errors.push(KbError::ModifierDomain(name.clone()));
        }
        if modifiers.insert(name.clone(), f.clone()).is_some() {
            errors.push(KbError::DuplicateDeclaration(name.clone()));
        }
    }

    let mut v = Validator {
        roles: &roles,
        predicates: &predicates,
        modifiers: &modifiers,
        concepts: BTreeSet::new(),
        errors: Vec::new(),
    };
    let mut defined = BTreeSet::new();
    for ax in &parts.tbox {
        if !defined.insert(ax.lhs.clone()) {
            v.errors.push(KbError::DuplicateDefinition(ax.lhs.clone()));
        }
        v.concepts.insert(ax.lhs.clone());
        v.concept(&ax.rhs);
    }
    let mut individuals: Vec<String> = Vec::new();
    let mut note_ind = |name: &str| {
        if !individuals.iter().any(|i| i == name) {
            individuals.push(name.to_string());
        }
    };
    let mut warnings = Vec::new();
    for fa in &parts.abox {
        if let Some(n) = &fa.bound {
            check_degree(n, &mut v.errors);
        }
        match &fa.assertion {
            Assertion::Concept { individual, concept } => {
                note_ind(individual);
                v.concept(concept);
                if let Concept::Atomic(a) = concept {
                    if defined.contains(a) {
                        warnings.push(format!(
                            "concept `{a}` is both defined and asserted about ({individual}); expansion replaces it"
                        ));
                    }
                }
            }
            Assertion::Role { from, to, role } => {
                note_ind(from);
                note_ind(to);
                v.role(role, false);
            }
        }
    }
    for ax in &parts.individual_axioms {
        let (IndividualAxiom::Same(a, b) | IndividualAxiom::Diff(a, b)) = ax;
        note_ind(a);
        note_ind(b);
    }
    let concept_names = std::mem::take(&mut v.concepts);
    errors.append(&mut v.errors);

    // The name spaces must be pairwise disjoint.
    let mut seen: BTreeMap<&str, &'static str> = BTreeMap::new();
    let spaces: [(&'static str, Vec<&str>); 6] = [
        (CONCEPT, concept_names.iter().map(String::as_str).collect()),
        (
            ABSTRACT_ROLE,
            roles.values().filter(|r| !r.concrete).map(|r| r.name.as_str()).collect(),
        ),
        (
            CONCRETE_ROLE,
            roles.values().filter(|r| r.concrete).map(|r| r.name.as_str()).collect(),
        ),
        (INDIVIDUAL, individuals.iter().map(String::as_str).collect()),
        (MODIFIER, modifiers.keys().map(String::as_str).collect()),
        (PREDICATE, predicates.keys().map(String::as_str).collect()),
    ];
    for (kind, names) in &spaces {
        for n in names {
            if let Some(first) = seen.insert(n, kind) {
                if first != *kind {
                    errors.push(KbError::NameClash {
                        name: n.to_string(),
                        first,
                        second: kind,
                    });
                }
            }
        }
    }

    if let Some(cycle) = find_cycle(&parts.tbox) {
        errors.push(KbError::Cyclic(cycle));
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    Ok(KnowledgeBase {
        roles,
        predicates,
        modifiers,
        tbox: parts.tbox.clone(),
        abox: parts.abox.clone(),
        individual_axioms: parts.individual_axioms.clone(),
        concept_names,
        individuals,
        warnings,
        parts,
    })
}

/// A definitional cycle `A -> ... -> A` if one exists.
pub fn find_cycle(tbox: &[TBoxAxiom]) -> Option<Vec<String>> {
    let graph: BTreeMap<&str, BTreeSet<String>> = tbox.iter().map(|ax| (ax.lhs.as_str(), ax.rhs.atoms())).collect();
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    fn visit<'a>(
        node: &'a str,
        graph: &'a BTreeMap<&'a str, BTreeSet<String>>,
        marks: &mut BTreeMap<&'a str, Mark>,
        path: &mut Vec<&'a str>,
    ) -> Option<Vec<String>> {
        match marks.get(node) {
            Some(Mark::Done) => return None,
            Some(Mark::Active) => {
                let start = path.iter().position(|n| *n == node).unwrap_or(0);
                let mut cycle: Vec<String> = path[start..].iter().map(|s| s.to_string()).collect();
                cycle.push(node.to_string());
                return Some(cycle);
            }
            None => {}
        }
        marks.insert(node, Mark::Active);
        path.push(node);
        if let Some(succ) = graph.get(node) {
            for s in succ {
                if let Some((key, _)) = graph.get_key_value(s.as_str()) {
                    if let Some(c) = visit(key, graph, marks, path) {
                        return Some(c);
                    }
                }
            }
        }
        path.pop();
        marks.insert(node, Mark::Done);
        None
    }
    let mut marks = BTreeMap::new();
    for &node in graph.keys() {
        let mut path = Vec::new();
        if let Some(c) = visit(node, &graph, &mut marks, &mut path) {
            return Some(c);
        }
    }
    None
}

/// True iff the definitional dependency graph has no cycle.
pub fn check_acyclic(tbox: &[TBoxAxiom]) -> bool {
    find_cycle(tbox).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::membership::{make_crisp, Comparator};
    use crate::rational::{int, rat};

    fn def(lhs: &str, rhs: Concept) -> TBoxAxiom {
        TBoxAxiom {
            lhs: lhs.into(),
            rhs,
            kind: AxiomKind::Definition,
        }
    }

    #[test]
    fn empty_kb_is_valid() {
        let kb = KnowledgeBase::empty();
        assert!(kb.tbox().is_empty() && kb.abox().is_empty());
    }

    #[test]
    fn duplicate_definition_rejected() {
        let parts = KbParts {
            tbox: vec![def("A", Concept::atomic("B")), def("A", Concept::atomic("C"))],
            ..Default::default()
        };
        assert!(build_kb(parts).unwrap_err().contains(&KbError::DuplicateDefinition("A".into())));
    }

    #[test]
    fn minor_definition_is_valid() {
        let leq18 = make_crisp(Comparator::Le, &int(18), &rat(1, 10), &int(0), &int(150)).unwrap();
        let parts = KbParts {
            roles: vec![RoleDecl::concrete_role("age").with_feature()],
            predicates: vec![("leq18".into(), leq18)],
            tbox: vec![def(
                "Minor",
                Concept::and(Concept::atomic("Person"), Concept::exists_data("age", PredicateRef::new("leq18"))),
            )],
            ..Default::default()
        };
        let kb = build_kb(parts).unwrap();
        assert!(kb.concept_names().contains("Person"));
    }

    #[test]
    fn undeclared_and_wrong_kind() {
        let parts = KbParts {
            roles: vec![RoleDecl::concrete_role("age")],
            abox: vec![FuzzyAssertion {
                assertion: Assertion::Concept {
                    individual: "a".into(),
                    concept: Concept::and(
                        Concept::exists("age", Concept::Top),
                        Concept::exists_data("age", PredicateRef::new("nope")),
                    ),
                },
                bound: Some(rat(3, 2)),
            }],
            ..Default::default()
        };
        let errs = build_kb(parts).unwrap_err();
        assert!(errs.iter().any(|e| matches!(e, KbError::WrongKind { .. })));
        assert!(errs.iter().any(|e| matches!(e, KbError::Undeclared { kind: "predicate", .. })));
        assert!(errs.iter().any(|e| matches!(e, KbError::DegreeOutOfRange(_))));
    }

    #[test]
    fn modifier_domain_checked() {
        let f = crate::membership::PiecewiseLinearFn::constant(one(), int(0), int(2)).unwrap();
        let parts = KbParts {
            modifiers: vec![("m".into(), f)],
            ..Default::default()
        };
        assert_eq!(build_kb(parts).unwrap_err(), vec![KbError::ModifierDomain("m".into())]);
    }

    #[test]
    fn name_spaces_disjoint() {
        let parts = KbParts {
            roles: vec![RoleDecl::abstract_role("R")],
            abox: vec![FuzzyAssertion {
                assertion: Assertion::Concept {
                    individual: "a".into(),
                    concept: Concept::atomic("R"),
                },
                bound: None,
            }],
            ..Default::default()
        };
        assert!(matches!(build_kb(parts).unwrap_err()[0], KbError::NameClash { .. }));
    }

    #[test]
    fn acyclicity() {
        let a = Concept::atomic;
        assert!(check_acyclic(&[
            def("A", Concept::and(a("B"), a("C"))),
            def("B", Concept::exists("R", a("C")))
        ]));
        assert!(!check_acyclic(&[def("A", Concept::exists("R", a("A")))]));
        assert!(!check_acyclic(&[def("A", a("B")), def("B", a("A"))]));
        assert_eq!(find_cycle(&[def("A", a("B")), def("B", a("A"))]).unwrap(), vec!["A", "B", "A"]);
        let parts = KbParts {
            roles: vec![RoleDecl::abstract_role("R")],
            tbox: vec![def("A", Concept::exists("R", a("A")))],
            ..Default::default()
        };
        assert!(matches!(build_kb(parts).unwrap_err()[0], KbError::Cyclic(_)));
    }

    #[test]
    fn display_respects_precedence() {
        let a = Concept::atomic;
        let c = Concept::and(Concept::or(a("A"), a("B")), Concept::not(Concept::exists("R", a("C"))));
        assert_eq!(c.to_string(), "(A or B) and not some R.C");
        let c = Concept::and(a("A"), Concept::and(a("B"), a("C")));
        assert_eq!(c.to_string(), "A and (B and C)");
    }

    #[test]
    fn defined_and_asserted_is_a_warning() {
        let parts = KbParts {
            tbox: vec![def("A", Concept::atomic("B"))],
            abox: vec![FuzzyAssertion {
                assertion: Assertion::Concept {
                    individual: "a".into(),
                    concept: Concept::atomic("A"),
                },
                bound: Some(rat(1, 2)),
            }],
            ..Default::default()
        };
        let kb = build_kb(parts).unwrap();
        assert_eq!(kb.warnings().len(), 1);
    }
}
