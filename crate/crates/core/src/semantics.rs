//! Connective families and evaluation over finite fuzzy interpretations.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::kb::{Assertion, AxiomKind, Concept, IndividualAxiom, KnowledgeBase, PredicateRef};
use crate::rational::{max_rat, min_rat, one, zero, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub enum Semantics {
    /// min, max, 1 - x, Kleene-Dienes implication.
    #[default]
    Zadeh,
    /// Lukasiewicz t-norm, t-conorm, negation and residuum.
    Lukasiewicz,
}

impl Semantics {
    pub const ALL: [Semantics; 2] = [Semantics::Zadeh, Semantics::Lukasiewicz];

    pub fn name(self) -> &'static str {
        match self {
            Semantics::Zadeh => "zadeh",
            Semantics::Lukasiewicz => "lukasiewicz",
        }
    }

    pub fn tnorm(self, a: &Rat, b: &Rat) -> Rat {
        match self {
            Semantics::Zadeh => min_rat(a, b),
            Semantics::Lukasiewicz => max_rat(&(a + b - one()), &zero()),
        }
    }

    pub fn tconorm(self, a: &Rat, b: &Rat) -> Rat {
        match self {
            Semantics::Zadeh => max_rat(a, b),
            Semantics::Lukasiewicz => min_rat(&(a + b), &one()),
        }
    }

    pub fn negation(self, a: &Rat) -> Rat {
        one() - a
    }

    pub fn implication(self, a: &Rat, b: &Rat) -> Rat {
        match self {
            Semantics::Zadeh => max_rat(&(one() - a), b),
            Semantics::Lukasiewicz => min_rat(&one(), &(one() - a + b)),
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Semantics {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zadeh" => Ok(Semantics::Zadeh),
            "luk" | "lukasiewicz" => Ok(Semantics::Lukasiewicz),
            other => Err(format!("unknown semantics `{other}` (expected zadeh or luk)")),
        }
    }
}

/// A finite fuzzy interpretation over elements `0..size`. Missing entries
/// have degree 0. Concrete roles map each element to finitely many
/// `(value, degree)` pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Interpretation {
    pub size: usize,
    pub concepts: BTreeMap<String, Vec<Rat>>,
    pub roles: BTreeMap<String, Vec<Vec<Rat>>>,
    pub concrete: BTreeMap<String, Vec<Vec<(Rat, Rat)>>>,
    pub individuals: BTreeMap<String, usize>,
}

impl Interpretation {
    pub fn new(size: usize) -> Self {
        Interpretation {
            size,
            ..Default::default()
        }
    }

    pub fn concept_degree(&self, name: &str, u: usize) -> Rat {
        self.concepts.get(name).map(|v| v[u].clone()).unwrap_or_else(zero)
    }

    pub fn role_degree(&self, name: &str, u: usize, v: usize) -> Rat {
        self.roles.get(name).map(|m| m[u][v].clone()).unwrap_or_else(zero)
    }

    fn predicate(&self, kb: &KnowledgeBase, p: &PredicateRef, value: &Rat) -> Rat {
        let f = kb.predicate(&p.name).expect("declared predicate");
        let d = f.eval_clamped(value);
        if p.negated {
            one() - d
        } else {
            d
        }
    }

    /// Degree of `c` at element `u`.
    pub fn eval(&self, kb: &KnowledgeBase, sem: Semantics, c: &Concept, u: usize) -> Rat {
        match c {
            Concept::Top => one(),
            Concept::Bottom => zero(),
            Concept::Atomic(a) => self.concept_degree(a, u),
            Concept::And(a, b) => sem.tnorm(&self.eval(kb, sem, a, u), &self.eval(kb, sem, b, u)),
            Concept::Or(a, b) => sem.tconorm(&self.eval(kb, sem, a, u), &self.eval(kb, sem, b, u)),
            Concept::Not(a) => sem.negation(&self.eval(kb, sem, a, u)),
            Concept::Exists(r, a) => (0..self.size)
                .map(|v| sem.tnorm(&self.role_degree(r, u, v), &self.eval(kb, sem, a, v)))
                .max()
                .unwrap_or_else(zero),
            Concept::Forall(r, a) => (0..self.size)
                .map(|v| sem.implication(&self.role_degree(r, u, v), &self.eval(kb, sem, a, v)))
                .min()
                .unwrap_or_else(one),
            Concept::ExistsData(t, p) => self
                .concrete
                .get(t)
                .map(|rows| {
                    rows[u]
                        .iter()
                        .map(|(val, deg)| sem.tnorm(deg, &self.predicate(kb, p, val)))
                        .max()
                        .unwrap_or_else(zero)
                })
                .unwrap_or_else(zero),
            Concept::ForallData(t, p) => self
                .concrete
                .get(t)
                .map(|rows| {
                    rows[u]
                        .iter()
                        .map(|(val, deg)| sem.implication(deg, &self.predicate(kb, p, val)))
                        .min()
                        .unwrap_or_else(one)
                })
                .unwrap_or_else(one),
            Concept::Modified(m, a) => {
                let f = kb.modifier(m).expect("declared modifier");
                f.eval_clamped(&self.eval(kb, sem, a, u))
            }
        }
    }

    /// Degree of an assertion; individuals must be mapped.
    pub fn eval_assertion(&self, kb: &KnowledgeBase, sem: Semantics, a: &Assertion) -> Rat {
        match a {
            Assertion::Concept { individual, concept } => self.eval(kb, sem, concept, self.individuals[individual]),
            Assertion::Role { from, to, role } => {
                self.role_degree(role, self.individuals[from], self.individuals[to])
            }
        }
    }

    /// Whether this interpretation satisfies every axiom of `kb`.
    pub fn is_model(&self, kb: &KnowledgeBase, sem: Semantics) -> bool {
        self.satisfies_tbox(kb, sem) && self.satisfies_abox(kb, sem, kb.abox().iter().map(|f| (&f.assertion, f.effective_bound())))
    }

    pub fn satisfies_tbox(&self, kb: &KnowledgeBase, sem: Semantics) -> bool {
        kb.tbox().iter().all(|ax| {
            (0..self.size).all(|u| {
                let lhs = self.concept_degree(&ax.lhs, u);
                let rhs = self.eval(kb, sem, &ax.rhs, u);
                match ax.kind {
                    AxiomKind::Definition => lhs == rhs,
                    AxiomKind::Inclusion => lhs <= rhs,
                }
            })
        })
    }

    /// Checks weighted assertions plus the (in)equality axioms of `kb`.
    pub fn satisfies_abox<'a>(
        &self,
        kb: &KnowledgeBase,
        sem: Semantics,
        assertions: impl IntoIterator<Item = (&'a Assertion, Rat)>,
    ) -> bool {
        let feature_ok = kb.roles().filter(|r| r.feature || r.crisp).all(|r| {
            if r.concrete {
                self.concrete.get(&r.name).is_none_or(|rows| {
                    rows.iter().all(|row| {
                        (!r.feature || row.iter().filter(|(_, d)| !d.is_zero()).count() <= 1)
                            && (!r.crisp || row.iter().all(|(_, d)| d.is_zero() || *d == one()))
                    })
                })
            } else {
                self.roles.get(&r.name).is_none_or(|m| {
                    m.iter().all(|row| {
                        (!r.feature || row.iter().filter(|d| !d.is_zero()).count() <= 1)
                            && (!r.crisp || row.iter().all(|d| d.is_zero() || *d == one()))
                    })
                })
            }
        });
        feature_ok
            && kb.individual_axioms().iter().all(|ax| match ax {
                IndividualAxiom::Same(a, b) => self.individuals[a] == self.individuals[b],
                IndividualAxiom::Diff(a, b) => self.individuals[a] != self.individuals[b],
            })
            && assertions
                .into_iter()
                .all(|(a, n)| self.eval_assertion(kb, sem, a) >= n)
    }
}
