//! TBox normalisation and expansion, and negation normal form.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::kb::{Assertion, AxiomKind, Concept, IndividualAxiom, KnowledgeBase, TBoxAxiom};
use crate::rational::Rat;

pub use crate::tableau::eliminate_forks;

/// Replaces each inclusion `A ⊑ C` by the definition `A = C ⊓ A*`, where
/// `A*` is a fresh name not in `taken` (more stars are added on collision).
/// Starred names cannot be written in the textual syntax, so they never
/// clash with user names and never appear in queries.
pub fn normalize_tbox(tbox: &[TBoxAxiom], taken: &BTreeSet<String>) -> Vec<TBoxAxiom> {
    let mut used: BTreeSet<String> = taken.clone();
    used.extend(tbox.iter().map(|a| a.lhs.clone()));
    tbox.iter()
        .map(|ax| match ax.kind {
            AxiomKind::Definition => ax.clone(),
            AxiomKind::Inclusion => {
                let mut fresh = format!("{}*", ax.lhs);
                while used.contains(&fresh) {
                    fresh.push('*');
                }
                used.insert(fresh.clone());
                TBoxAxiom {
                    lhs: ax.lhs.clone(),
                    rhs: Concept::and(ax.rhs.clone(), Concept::Atomic(fresh)),
                    kind: AxiomKind::Definition,
                }
            }
        })
        .collect()
}

/// Negation normal form: negation only in front of concept names,
/// modifier applications and (as a flag) predicate names.
pub fn nnf(c: &Concept) -> Concept {
    match c {
        Concept::Top | Concept::Bottom | Concept::Atomic(_) | Concept::ForallData(..) | Concept::ExistsData(..) => {
            c.clone()
        }
        Concept::And(a, b) => Concept::and(nnf(a), nnf(b)),
        Concept::Or(a, b) => Concept::or(nnf(a), nnf(b)),
        Concept::Forall(r, a) => Concept::forall(r.clone(), nnf(a)),
        Concept::Exists(r, a) => Concept::exists(r.clone(), nnf(a)),
        Concept::Modified(m, a) => Concept::modified(m.clone(), nnf(a)),
        Concept::Not(a) => nnf_not(a),
    }
}

/// `nnf(¬c)`.
pub fn nnf_not(c: &Concept) -> Concept {
    match c {
        Concept::Top => Concept::Bottom,
        Concept::Bottom => Concept::Top,
        Concept::Atomic(_) => Concept::Not(Arc::new(c.clone())),
        Concept::Not(a) => nnf(a),
        Concept::And(a, b) => Concept::or(nnf_not(a), nnf_not(b)),
        Concept::Or(a, b) => Concept::and(nnf_not(a), nnf_not(b)),
        Concept::Forall(r, a) => Concept::exists(r.clone(), nnf_not(a)),
        Concept::Exists(r, a) => Concept::forall(r.clone(), nnf_not(a)),
        Concept::ForallData(r, p) => Concept::exists_data(r.clone(), p.negate()),
        Concept::ExistsData(r, p) => Concept::forall_data(r.clone(), p.negate()),
        Concept::Modified(m, a) => Concept::not(Concept::modified(m.clone(), nnf(a))),
    }
}

/// An assertion after expansion and NNF.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpandedAssertion {
    pub assertion: Assertion,
    pub bound: Option<Rat>,
}

/// Definition-free, NNF view of a knowledge base.
#[derive(Debug, Clone)]
pub struct ExpandedKb {
    definitions: BTreeMap<String, Arc<Concept>>,
    abox: Vec<ExpandedAssertion>,
    individual_axioms: Vec<IndividualAxiom>,
}

impl ExpandedKb {
    /// Substitutes every defined name in `c` (not normalised to NNF).
    pub fn expand_concept(&self, c: &Concept) -> Concept {
        substitute(c, &self.definitions)
    }

    pub fn definition(&self, name: &str) -> Option<&Concept> {
        self.definitions.get(name).map(|c| c.as_ref())
    }

    pub fn abox(&self) -> &[ExpandedAssertion] {
        &self.abox
    }

    pub fn individual_axioms(&self) -> &[IndividualAxiom] {
        &self.individual_axioms
    }
}

fn substitute(c: &Concept, defs: &BTreeMap<String, Arc<Concept>>) -> Concept {
    match c {
        Concept::Atomic(a) => match defs.get(a) {
            Some(d) => d.as_ref().clone(),
            None => c.clone(),
        },
        Concept::Top | Concept::Bottom | Concept::ForallData(..) | Concept::ExistsData(..) => c.clone(),
        Concept::And(a, b) => Concept::and(substitute(a, defs), substitute(b, defs)),
        Concept::Or(a, b) => Concept::or(substitute(a, defs), substitute(b, defs)),
        Concept::Not(a) => Concept::not(substitute(a, defs)),
        Concept::Forall(r, a) => Concept::forall(r.clone(), substitute(a, defs)),
        Concept::Exists(r, a) => Concept::exists(r.clone(), substitute(a, defs)),
        Concept::Modified(m, a) => Concept::modified(m.clone(), substitute(a, defs)),
    }
}

/// Normalises and fully expands the TBox into the ABox, then puts every
/// concept into NNF. The TBox must be acyclic (guaranteed by `build_kb`).
pub fn expand(kb: &KnowledgeBase) -> ExpandedKb {
    let normalized = normalize_tbox(kb.tbox(), kb.concept_names());
    let raw: BTreeMap<&str, &Concept> = normalized.iter().map(|a| (a.lhs.as_str(), &a.rhs)).collect();
    let mut definitions: BTreeMap<String, Arc<Concept>> = BTreeMap::new();
    // Resolve in dependency order: a definition is expanded once all names
    // it mentions are.
    fn resolve(
        name: &str,
        raw: &BTreeMap<&str, &Concept>,
        done: &mut BTreeMap<String, Arc<Concept>>,
    ) {
        if done.contains_key(name) {
            return;
        }
        let body = raw[name];
        for dep in body.atoms() {
            if raw.contains_key(dep.as_str()) {
                resolve(&dep, raw, done);
            }
        }
        let expanded = substitute(body, done);
        done.insert(name.to_string(), Arc::new(expanded));
    }
    for name in raw.keys() {
        resolve(name, &raw, &mut definitions);
    }
    let abox = kb
        .abox()
        .iter()
        .map(|fa| ExpandedAssertion {
            assertion: match &fa.assertion {
                Assertion::Concept { individual, concept } => Assertion::Concept {
                    individual: individual.clone(),
                    concept: nnf(&substitute(concept, &definitions)),
                },
                r @ Assertion::Role { .. } => r.clone(),
            },
            bound: fa.bound.clone(),
        })
        .collect();
    ExpandedKb {
        definitions,
        abox,
        individual_axioms: kb.individual_axioms().to_vec(),
    }
}
