//! Query answering: satisfiability, best degree bounds, graded subsumption
//! and entailment.
//!
//! Every degree query is reduced to a minimisation: the negated query is
//! added to the initial constraint set with the symbolic bound `1 - x`, the
//! set is saturated, and the smallest `x` keeping the resulting MIP feasible
//! is the answer.

use std::fmt;
use std::sync::OnceLock;

use num_traits::Signed;
use thiserror::Error;

use crate::kb::{Assertion, Concept, KbError, KnowledgeBase};
use crate::linear::{LinearExpr, VarId};
use crate::milp::{dump_problem, mip_minimize, MilpError, MipProblem};
use crate::par::{self, Execution};
use crate::preprocess::{expand, nnf_not, ExpandedKb};
use crate::rational::{fmt_short, max_rat, one, zero, Rat};
use crate::semantics::Semantics;
use crate::tableau::{init_constraint_set, ConstraintSet, TableauOptions};

/// Name of the fresh individual used by subsumption queries. It cannot be
/// written in the textual syntax, so it never collides with a user name.
pub const QUERY_INDIVIDUAL: &str = "#q";

/// How unweighted ABox assertions are read by [`Query::GlbAlternate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AltMode {
    /// Every assertion holds to degree 1.
    I,
    /// Every assertion holds to the queried degree `x` itself.
    II,
}

impl fmt::Display for AltMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AltMode::I => "i",
            AltMode::II => "ii",
        })
    }
}

/// The axiom of an entailment query.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Axiom {
    Assertion(Assertion),
    /// `A ⊑ B` between concept names.
    Subsumption(String, String),
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::Assertion(a) => write!(f, "{a}"),
            Axiom::Subsumption(a, b) => write!(f, "{a} <: {b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Query {
    Sat,
    GlbAssertion { individual: String, concept: Concept },
    GlbSubsumption { sub: String, sup: String },
    GlbRole { from: String, to: String, role: String },
    Entails { axiom: Axiom, degree: Rat },
    GlbAlternate { mode: AltMode, individual: String, concept: Concept },
}

impl Query {
    pub fn glb(axiom: Axiom) -> Self {
        match axiom {
            Axiom::Assertion(Assertion::Concept { individual, concept }) => Query::GlbAssertion { individual, concept },
            Axiom::Assertion(Assertion::Role { from, to, role }) => Query::GlbRole { from, to, role },
            Axiom::Subsumption(sub, sup) => Query::GlbSubsumption { sub, sup },
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Sat => f.write_str("sat"),
            Query::GlbAssertion { individual, concept } => write!(f, "glb {individual} : {concept}"),
            Query::GlbSubsumption { sub, sup } => write!(f, "glb {sub} <: {sup}"),
            Query::GlbRole { from, to, role } => write!(f, "glb ({from},{to}) : {role}"),
            Query::Entails { axiom, degree } => write!(f, "entails {axiom} >= {}", fmt_short(degree)),
            Query::GlbAlternate {
                mode,
                individual,
                concept,
            } => write!(f, "glb[{mode}] {individual} : {concept}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReasonerError {
    #[error("unknown individual `{0}`")]
    UnknownIndividual(String),
    #[error("unknown concept name `{0}`")]
    UnknownConcept(String),
    #[error("invalid query: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidQuery(Vec<KbError>),
    #[error("degree {0} outside [0,1]")]
    DegreeOutOfRange(String),
    #[error("alternate degree bounds need an unweighted ABox, but `{0}` carries a degree")]
    WeightedAbox(String),
    #[error("solver failure: {0}")]
    Solver(#[from] MilpError),
}

/// Effort spent on one query.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryStats {
    pub rule_applications: usize,
    pub merges: usize,
    pub variables: usize,
    pub binaries: usize,
    pub constraints: usize,
    pub nodes: usize,
    pub pivots: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Satisfiable(bool),
    Degree(Rat),
    Entailed { holds: bool, glb: Rat },
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryResult {
    pub answer: Answer,
    /// Whether the knowledge base itself is satisfiable; when it is not,
    /// every degree query answers 1.
    pub kb_satisfiable: bool,
    pub stats: QueryStats,
    /// Completion and MIP in text form, when requested.
    pub dump: Option<String>,
}

impl QueryResult {
    /// The degree for glb and entailment queries.
    pub fn degree(&self) -> Option<&Rat> {
        match &self.answer {
            Answer::Degree(d) | Answer::Entailed { glb: d, .. } => Some(d),
            Answer::Satisfiable(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ReasonerOptions {
    pub tableau: TableauOptions,
    /// Keep a text dump of the completion and MIP of each query.
    pub record_dump: bool,
}

/// A knowledge base prepared for querying under one semantics. Queries are
/// independent and may run concurrently.
#[derive(Debug)]
pub struct Reasoner {
    kb: KnowledgeBase,
    expanded: ExpandedKb,
    semantics: Semantics,
    options: ReasonerOptions,
    satisfiable: OnceLock<bool>,
}

struct Solved {
    value: Option<Rat>,
    stats: QueryStats,
    dump: Option<String>,
}

impl Reasoner {
    pub fn new(kb: KnowledgeBase, semantics: Semantics) -> Self {
        Self::with_options(kb, semantics, ReasonerOptions::default())
    }

    pub fn with_options(kb: KnowledgeBase, semantics: Semantics, options: ReasonerOptions) -> Self {
        let expanded = expand(&kb);
        Reasoner {
            kb,
            expanded,
            semantics,
            options,
            satisfiable: OnceLock::new(),
        }
    }

    pub fn kb(&self) -> &KnowledgeBase {
        &self.kb
    }

    pub fn expanded(&self) -> &ExpandedKb {
        &self.expanded
    }

    pub fn semantics(&self) -> Semantics {
        self.semantics
    }

    fn initial_set(&self) -> ConstraintSet<'_> {
        init_constraint_set(&self.kb, &self.expanded, self.semantics, self.options.tableau)
    }

    /// Saturates `s` and minimises `objective` (or just tests feasibility).
    fn solve(&self, mut s: ConstraintSet<'_>, objective: Option<VarId>) -> Result<Solved, ReasonerError> {
        s.saturate();
        let ts = s.stats();
        let mut stats = QueryStats {
            rule_applications: ts.rule_applications,
            merges: ts.merges,
            variables: s.pool().len(),
            binaries: s.pool().binaries(),
            constraints: s.constraints().len(),
            ..Default::default()
        };
        let problem: MipProblem = s.to_problem(objective);
        let dump = self
            .options
            .record_dump
            .then(|| format!("{}# mip\n{}", s.dump(), dump_problem(&problem)));
        if s.clash().is_some() {
            return Ok(Solved {
                value: None,
                stats,
                dump,
            });
        }
        let r = mip_minimize(&problem)?;
        stats.nodes = r.nodes;
        stats.pivots = r.pivots;
        Ok(Solved {
            value: r.value,
            stats,
            dump,
        })
    }

    fn check_satisfiable(&self) -> Result<Solved, ReasonerError> {
        self.solve(self.initial_set(), None)
    }

    /// Whether the knowledge base has a model (computed once).
    pub fn kb_satisfiable(&self) -> Result<bool, ReasonerError> {
        if let Some(&b) = self.satisfiable.get() {
            return Ok(b);
        }
        let b = self.check_satisfiable()?.value.is_some();
        Ok(*self.satisfiable.get_or_init(|| b))
    }

    fn check_individual(&self, name: &str) -> Result<(), ReasonerError> {
        if self.kb.has_individual(name) {
            Ok(())
        } else {
            Err(ReasonerError::UnknownIndividual(name.to_string()))
        }
    }

    fn check_query_concept(&self, c: &Concept) -> Result<(), ReasonerError> {
        let errors = self.kb.check_concept(c);
        if errors.is_empty() {
            Ok(())
        } else {
            Err(ReasonerError::InvalidQuery(errors))
        }
    }

    fn check_concept_name(&self, name: &str) -> Result<(), ReasonerError> {
        if self.kb.concept_names().contains(name) {
            Ok(())
        } else {
            Err(ReasonerError::UnknownConcept(name.to_string()))
        }
    }

    /// The answer for an unsatisfiable knowledge base.
    fn vacuous(&self) -> QueryResult {
        QueryResult {
            answer: Answer::Degree(one()),
            kb_satisfiable: false,
            stats: QueryStats::default(),
            dump: None,
        }
    }

    /// Minimal `x` such that `base ∪ {⟨ind : nnf(¬concept), 1 - x⟩}` is
    /// satisfiable; `base` already contains `x`.
    fn minimise_negated(
        &self,
        mut s: ConstraintSet<'_>,
        x: VarId,
        individual: &str,
        concept: &Concept,
    ) -> Result<QueryResult, ReasonerError> {
        let negated = nnf_not(&self.expanded.expand_concept(concept));
        let assertion = Assertion::Concept {
            individual: individual.to_string(),
            concept: negated,
        };
        s.add_assertion(&assertion, LinearExpr::var(x).complement());
        let solved = self.solve(s, Some(x))?;
        // No feasible x below 1 means the query holds to degree 1.
        let value = solved.value.unwrap_or_else(one);
        Ok(QueryResult {
            answer: Answer::Degree(value),
            kb_satisfiable: true,
            stats: solved.stats,
            dump: solved.dump,
        })
    }

    /// `glb(K, a : C)`.
    pub fn glb_assertion(&self, individual: &str, concept: &Concept) -> Result<QueryResult, ReasonerError> {
        self.check_individual(individual)?;
        self.check_query_concept(concept)?;
        if !self.kb_satisfiable()? {
            return Ok(self.vacuous());
        }
        let mut s = self.initial_set();
        let x = s.pool_mut().unit("query");
        self.minimise_negated(s, x, individual, concept)
    }

    /// `glb(K, A ⊑ B)` for concept names, via a fresh individual.
    pub fn glb_subsumption(&self, sub: &str, sup: &str) -> Result<QueryResult, ReasonerError> {
        self.check_concept_name(sub)?;
        self.check_concept_name(sup)?;
        if !self.kb_satisfiable()? {
            return Ok(self.vacuous());
        }
        let mut s = self.initial_set();
        let x = s.pool_mut().unit("query");
        s.named(QUERY_INDIVIDUAL);
        let concept = Concept::not(Concept::and(Concept::atomic(sub), Concept::not(Concept::atomic(sup))));
        self.minimise_negated(s, x, QUERY_INDIVIDUAL, &concept)
    }

    /// `glb(K, (a,b) : R)`: the largest degree asserted for the pair.
    pub fn glb_role(&self, from: &str, to: &str, role: &str) -> Result<QueryResult, ReasonerError> {
        if !self.kb_satisfiable()? {
            return Ok(self.vacuous());
        }
        let value = self
            .kb
            .abox()
            .iter()
            .filter(|fa| {
                matches!(&fa.assertion, Assertion::Role { from: f, to: t, role: r }
                    if f == from && t == to && r == role)
            })
            .fold(zero(), |acc, fa| max_rat(&acc, &fa.effective_bound()));
        Ok(QueryResult {
            answer: Answer::Degree(value),
            kb_satisfiable: true,
            stats: QueryStats::default(),
            dump: None,
        })
    }

    /// `K ⊨ ⟨axiom, n⟩`, i.e. `glb(K, axiom) >= n`.
    pub fn entails(&self, axiom: &Axiom, degree: &Rat) -> Result<QueryResult, ReasonerError> {
        if degree.is_negative() || *degree > one() {
            return Err(ReasonerError::DegreeOutOfRange(fmt_short(degree)));
        }
        let r = self.glb(axiom)?;
        let glb = r.degree().cloned().unwrap_or_else(zero);
        Ok(QueryResult {
            answer: Answer::Entailed {
                holds: glb >= *degree,
                glb,
            },
            ..r
        })
    }

    pub fn glb(&self, axiom: &Axiom) -> Result<QueryResult, ReasonerError> {
        match axiom {
            Axiom::Assertion(Assertion::Concept { individual, concept }) => self.glb_assertion(individual, concept),
            Axiom::Assertion(Assertion::Role { from, to, role }) => self.glb_role(from, to, role),
            Axiom::Subsumption(a, b) => self.glb_subsumption(a, b),
        }
    }

    /// Best degree bound for an unweighted ABox read in `mode`.
    pub fn glb_alternate(&self, mode: AltMode, individual: &str, concept: &Concept) -> Result<QueryResult, ReasonerError> {
        if let Some(fa) = self.kb.abox().iter().find(|fa| fa.bound.is_some()) {
            return Err(ReasonerError::WeightedAbox(fa.assertion.to_string()));
        }
        match mode {
            AltMode::I => self.glb_assertion(individual, concept),
            AltMode::II => {
                self.check_individual(individual)?;
                self.check_query_concept(concept)?;
                if !self.kb_satisfiable()? {
                    return Ok(self.vacuous());
                }
                let mut s = ConstraintSet::new(&self.kb, self.semantics, self.options.tableau);
                let x = s.pool_mut().unit("query");
                for name in self.kb.individuals() {
                    s.named(name);
                }
                for ax in self.expanded.individual_axioms() {
                    s.add_individual_axiom(ax);
                }
                for ea in self.expanded.abox() {
                    s.add_assertion(&ea.assertion, LinearExpr::var(x));
                }
                s.eliminate_forks();
                self.minimise_negated(s, x, individual, concept)
            }
        }
    }

    /// Satisfiability as a query result.
    pub fn sat(&self) -> Result<QueryResult, ReasonerError> {
        let solved = self.check_satisfiable()?;
        let b = solved.value.is_some();
        let _ = self.satisfiable.set(b);
        Ok(QueryResult {
            answer: Answer::Satisfiable(b),
            kb_satisfiable: b,
            stats: solved.stats,
            dump: solved.dump,
        })
    }

    pub fn run(&self, query: &Query) -> Result<QueryResult, ReasonerError> {
        match query {
            Query::Sat => self.sat(),
            Query::GlbAssertion { individual, concept } => self.glb_assertion(individual, concept),
            Query::GlbSubsumption { sub, sup } => self.glb_subsumption(sub, sup),
            Query::GlbRole { from, to, role } => self.glb_role(from, to, role),
            Query::Entails { axiom, degree } => self.entails(axiom, degree),
            Query::GlbAlternate {
                mode,
                individual,
                concept,
            } => self.glb_alternate(*mode, individual, concept),
        }
    }

    /// Answers independent queries, in parallel when available.
    pub fn run_batch(&self, queries: &[Query], execution: Execution) -> Vec<Result<QueryResult, ReasonerError>> {
        // Settle the shared satisfiability check once, up front.
        let _ = self.kb_satisfiable();
        par::map(queries, execution, |q| self.run(q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::{build_kb, FuzzyAssertion, KbParts, PredicateRef, RoleDecl, TBoxAxiom, AxiomKind};
    use crate::membership::{make_crisp, make_shape, Comparator, Shape};
    use crate::rational::{int, rat};

    fn ca(ind: &str, c: Concept, n: Option<Rat>) -> FuzzyAssertion {
        FuzzyAssertion {
            assertion: Assertion::Concept {
                individual: ind.into(),
                concept: c,
            },
            bound: n,
        }
    }

    fn a(n: &str) -> Concept {
        Concept::atomic(n)
    }

    fn minor_kb(crisp_age: bool) -> KnowledgeBase {
        let (lo, hi) = (int(0), int(200));
        let young = make_shape(Shape::LeftShoulder(&int(10), &int(30)), &int(0), &int(30))
            .unwrap()
            .extended_to(&lo, &hi);
        let leq18 = make_crisp(Comparator::Le, &int(18), &rat(1, 10), &lo, &hi).unwrap();
        let mut age = RoleDecl::concrete_role("age").with_feature().with_domain(lo, hi);
        if crisp_age {
            age = age.with_crisp();
        }
        build_kb(KbParts {
            roles: vec![age],
            predicates: vec![("young".into(), young), ("leq18".into(), leq18)],
            tbox: vec![
                TBoxAxiom {
                    lhs: "Minor".into(),
                    rhs: Concept::exists_data("age", PredicateRef::new("leq18")),
                    kind: AxiomKind::Definition,
                },
                TBoxAxiom {
                    lhs: "YoungPerson".into(),
                    rhs: Concept::exists_data("age", PredicateRef::new("young")),
                    kind: AxiomKind::Definition,
                },
            ],
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn minor_is_young_to_three_fifths() {
        // With fuzzy age degrees a half-true age filler defeats both sides.
        let fuzzy = Reasoner::new(minor_kb(false), Semantics::Zadeh);
        let q = fuzzy.glb_subsumption("Minor", "YoungPerson").unwrap();
        assert_eq!(q.answer, Answer::Degree(rat(1, 2)));
        let r = Reasoner::new(minor_kb(true), Semantics::Zadeh);
        let q = r.glb_subsumption("Minor", "YoungPerson").unwrap();
        assert_eq!(q.answer, Answer::Degree(rat(3, 5)));
        let e = r.entails(&Axiom::Subsumption("Minor".into(), "YoungPerson".into()), &rat(3, 5)).unwrap();
        assert!(matches!(e.answer, Answer::Entailed { holds: true, .. }));
        let e = r
            .entails(&Axiom::Subsumption("Minor".into(), "YoungPerson".into()), &rat(61, 100))
            .unwrap();
        assert!(matches!(e.answer, Answer::Entailed { holds: false, .. }));
    }

    #[test]
    fn reflexive_and_unrelated_subsumption() {
        let kb = build_kb(KbParts {
            abox: vec![ca("i", a("A"), Some(rat(1, 2))), ca("i", a("B"), Some(rat(1, 2)))],
            ..Default::default()
        })
        .unwrap();
        for sem in Semantics::ALL {
            let r = Reasoner::new(kb.clone(), sem);
            // Kleene-Dienes: inf max(1 - A, A) is only guaranteed to be 1/2.
            let reflexive = match sem {
                Semantics::Zadeh => rat(1, 2),
                Semantics::Lukasiewicz => one(),
            };
            assert_eq!(r.glb_subsumption("A", "A").unwrap().answer, Answer::Degree(reflexive), "{sem}");
            assert_eq!(r.glb_subsumption("A", "B").unwrap().answer, Answer::Degree(zero()), "{sem}");
            assert!(r.glb_subsumption("A", "Nope").is_err());
        }
    }

    #[test]
    fn role_glb_is_max_bound() {
        let role = |n| FuzzyAssertion {
            assertion: Assertion::Role {
                from: "a".into(),
                to: "b".into(),
                role: "R".into(),
            },
            bound: Some(n),
        };
        let kb = build_kb(KbParts {
            roles: vec![RoleDecl::abstract_role("R")],
            abox: vec![role(rat(3, 5)), role(rat(4, 5))],
            ..Default::default()
        })
        .unwrap();
        let r = Reasoner::new(kb, Semantics::Zadeh);
        assert_eq!(r.glb_role("a", "b", "R").unwrap().answer, Answer::Degree(rat(4, 5)));
        assert_eq!(r.glb_role("b", "a", "R").unwrap().answer, Answer::Degree(zero()));
    }

    #[test]
    fn unsatisfiable_kb_answers_one() {
        let kb = build_kb(KbParts {
            abox: vec![ca("a", Concept::Bottom, Some(rat(1, 2))), ca("a", a("A"), Some(zero()))],
            ..Default::default()
        })
        .unwrap();
        let r = Reasoner::new(kb, Semantics::Zadeh);
        assert!(!r.kb_satisfiable().unwrap());
        assert_eq!(r.sat().unwrap().answer, Answer::Satisfiable(false));
        assert_eq!(r.glb_assertion("a", &a("A")).unwrap().answer, Answer::Degree(one()));
    }

    #[test]
    fn alternate_modes() {
        let kb = build_kb(KbParts {
            abox: vec![ca("a", a("A"), None)],
            ..Default::default()
        })
        .unwrap();
        for sem in Semantics::ALL {
            let r = Reasoner::new(kb.clone(), sem);
            assert_eq!(r.glb_alternate(AltMode::I, "a", &a("A")).unwrap().answer, Answer::Degree(one()));
            assert_eq!(r.glb_alternate(AltMode::II, "a", &a("A")).unwrap().answer, Answer::Degree(zero()));
        }
        let weighted = build_kb(KbParts {
            abox: vec![ca("a", a("A"), Some(one()))],
            ..Default::default()
        })
        .unwrap();
        let r = Reasoner::new(weighted, Semantics::Zadeh);
        assert!(matches!(
            r.glb_alternate(AltMode::I, "a", &a("A")),
            Err(ReasonerError::WeightedAbox(_))
        ));
    }

    #[test]
    fn query_names_are_checked() {
        let kb = build_kb(KbParts {
            abox: vec![ca("a", a("A"), Some(one()))],
            ..Default::default()
        })
        .unwrap();
        let r = Reasoner::new(kb, Semantics::Zadeh);
        assert!(matches!(r.glb_assertion("zz", &a("A")), Err(ReasonerError::UnknownIndividual(_))));
        assert!(matches!(r.glb_assertion("a", &a("Q")), Err(ReasonerError::InvalidQuery(_))));
        assert!(matches!(
            r.entails(&Axiom::Assertion(Assertion::Concept { individual: "a".into(), concept: a("A") }), &rat(3, 2)),
            Err(ReasonerError::DegreeOutOfRange(_))
        ));
    }

    #[test]
    fn batch_matches_single_queries() {
        let r = Reasoner::new(minor_kb(true), Semantics::Zadeh);
        let qs = vec![
            Query::Sat,
            Query::GlbSubsumption {
                sub: "Minor".into(),
                sup: "YoungPerson".into(),
            },
            Query::GlbSubsumption {
                sub: "YoungPerson".into(),
                sup: "Minor".into(),
            },
        ];
        let par: Vec<_> = r.run_batch(&qs, Execution::Parallel).into_iter().map(|x| x.unwrap().answer).collect();
        let seq: Vec<_> = r.run_batch(&qs, Execution::Sequential).into_iter().map(|x| x.unwrap().answer).collect();
        assert_eq!(par, seq);
        assert_eq!(par[1], Answer::Degree(rat(3, 5)));
    }

    #[test]
    fn dump_is_recorded_on_request() {
        let opts = ReasonerOptions {
            record_dump: true,
            ..Default::default()
        };
        let r = Reasoner::with_options(minor_kb(false), Semantics::Zadeh, opts);
        let q = r.glb_subsumption("Minor", "YoungPerson").unwrap();
        let dump = q.dump.unwrap();
        assert!(dump.contains("#q"));
        assert!(dump.contains("# mip"));
        assert!(dump.contains("min 0"));
    }
}
