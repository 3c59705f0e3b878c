//! Single-branch completion calculus.
//!
//! A [`ConstraintSet`] holds fuzzy assertions whose bounds are linear
//! expressions, the linear constraints produced so far, and the individual
//! (in)equalities. [`ConstraintSet::saturate`] applies the completion rules
//! of the chosen semantics until none applies; disjunctive choices become
//! 0-1 control variables, so exactly one branch is ever built. The result is
//! handed to the MILP solver.

pub mod rules;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::{self, Write as _};

use num_traits::Signed;

use crate::kb::{Assertion, Concept, IndividualAxiom, KnowledgeBase, PredicateRef};
use crate::linear::{LinearConstraint, LinearExpr, VarId, VarKind};
use crate::membership::{encode_crisp_lower, encode_lower_graph, encode_upper_graph, GraphEncoding};
use crate::milp::MipProblem;
use crate::preprocess::{nnf, nnf_not, ExpandedKb};
use crate::rational::{fmt_short, Rat};
use crate::semantics::Semantics;

pub use rules::{Block, VarPool};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndId(pub u32);

impl IndId {
    fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Individual {
    pub name: String,
    pub concrete: bool,
    /// Filler value variable `x_c` of a concrete individual.
    pub value: Option<VarId>,
    pub generated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Fact {
    Concept { ind: IndId, concept: Concept },
    Role { from: IndId, to: IndId, role: String },
    Data { ind: IndId, pred: PredicateRef },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedAssertion {
    pub fact: Fact,
    pub bound: LinearExpr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Clash {
    /// `⟨a:⊥, n⟩` with a constant `n > 0`.
    Bottom { individual: String, bound: Rat },
    /// `a ≈ b` together with `a ≉ b`.
    Equality { a: String, b: String },
}

impl fmt::Display for Clash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clash::Bottom { individual, bound } => write!(f, "{individual} : bot >= {}", fmt_short(bound)),
            Clash::Equality { a, b } => write!(f, "{a} is both equal and distinct to {b}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableauOptions {
    /// Encode positive crisp predicate occurrences exactly (one control
    /// variable) instead of through their ε-ramp.
    pub exact_crisp: bool,
}

impl Default for TableauOptions {
    fn default() -> Self {
        TableauOptions { exact_crisp: true }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TableauStats {
    pub rule_applications: usize,
    pub merges: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum RuleKey {
    Unary(usize),
    /// A universal restriction (assertion index) against a role edge
    /// (its degree variable).
    Forall(usize, VarId),
}

/// The tableau state for one query.
#[derive(Debug, Clone)]
pub struct ConstraintSet<'k> {
    kb: &'k KnowledgeBase,
    semantics: Semantics,
    options: TableauOptions,
    pool: VarPool,
    individuals: Vec<Individual>,
    names: BTreeMap<String, IndId>,
    parent: Vec<IndId>,
    merged: Vec<(IndId, IndId)>,
    assertions: Vec<BoundedAssertion>,
    constraints: Vec<LinearConstraint>,
    distinct: BTreeSet<(IndId, IndId)>,
    atom_vars: BTreeMap<(IndId, String), VarId>,
    /// Degree of each role edge `(from, role, to)` between representatives.
    edge_vars: BTreeMap<(IndId, String, IndId), VarId>,
    applied: BTreeSet<RuleKey>,
    queue: VecDeque<usize>,
    clash: Option<Clash>,
    stats: TableauStats,
    fresh_abstract: usize,
    fresh_concrete: usize,
}

impl<'k> ConstraintSet<'k> {
    pub fn new(kb: &'k KnowledgeBase, semantics: Semantics, options: TableauOptions) -> Self {
        ConstraintSet {
            kb,
            semantics,
            options,
            pool: VarPool::new(),
            individuals: Vec::new(),
            names: BTreeMap::new(),
            parent: Vec::new(),
            merged: Vec::new(),
            assertions: Vec::new(),
            constraints: Vec::new(),
            distinct: BTreeSet::new(),
            atom_vars: BTreeMap::new(),
            edge_vars: BTreeMap::new(),
            applied: BTreeSet::new(),
            queue: VecDeque::new(),
            clash: None,
            stats: TableauStats::default(),
            fresh_abstract: 0,
            fresh_concrete: 0,
        }
    }

    pub fn semantics(&self) -> Semantics {
        self.semantics
    }

    pub fn pool(&self) -> &VarPool {
        &self.pool
    }

    pub fn pool_mut(&mut self) -> &mut VarPool {
        &mut self.pool
    }

    pub fn assertions(&self) -> &[BoundedAssertion] {
        &self.assertions
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn individuals(&self) -> &[Individual] {
        &self.individuals
    }

    pub fn clash(&self) -> Option<&Clash> {
        self.clash.as_ref()
    }

    pub fn stats(&self) -> TableauStats {
        self.stats
    }

    pub fn concrete_variable_count(&self) -> usize {
        self.individuals.iter().filter(|i| i.concrete).count()
    }

    /// Representative of `i` after equalities and fork merges.
    pub fn find(&self, mut i: IndId) -> IndId {
        while self.parent[i.index()] != i {
            i = self.parent[i.index()];
        }
        i
    }

    pub fn individual(&self, name: &str) -> Option<IndId> {
        self.names.get(name).copied()
    }

    fn new_individual(&mut self, name: String, concrete_role: Option<&str>, generated: bool) -> IndId {
        let id = IndId(self.individuals.len() as u32);
        let value = concrete_role.map(|role| {
            let (lo, hi) = self.kb.concrete_range(role);
            self.pool.bounded(lo, hi, format!("value {name}"))
        });
        self.names.insert(name.clone(), id);
        self.individuals.push(Individual {
            name,
            concrete: concrete_role.is_some(),
            value,
            generated,
        });
        self.parent.push(id);
        id
    }

    /// The named abstract individual, created on first use.
    pub fn named(&mut self, name: &str) -> IndId {
        match self.names.get(name) {
            Some(&i) => i,
            None => self.new_individual(name.to_string(), None, false),
        }
    }

    fn fresh_abstract(&mut self) -> IndId {
        self.fresh_abstract += 1;
        let name = format!("#b{}", self.fresh_abstract);
        self.new_individual(name, None, true)
    }

    fn fresh_concrete(&mut self, role: &str) -> IndId {
        self.fresh_concrete += 1;
        let name = format!("#c{}", self.fresh_concrete);
        self.new_individual(name, Some(role), true)
    }

    /// Adds `⟨fact, bound⟩` and schedules it.
    pub fn add(&mut self, fact: Fact, bound: LinearExpr) -> usize {
        self.assertions.push(BoundedAssertion { fact, bound });
        let id = self.assertions.len() - 1;
        self.queue.push_back(id);
        id
    }

    pub fn add_constraint(&mut self, c: LinearConstraint) {
        self.constraints.push(c);
    }

    /// Adds an ABox assertion with the given bound.
    pub fn add_assertion(&mut self, a: &Assertion, bound: LinearExpr) -> usize {
        match a {
            Assertion::Concept { individual, concept } => {
                let ind = self.named(individual);
                self.add(
                    Fact::Concept {
                        ind,
                        concept: concept.clone(),
                    },
                    bound,
                )
            }
            Assertion::Role { from, to, role } => {
                let from = self.named(from);
                let to = self.named(to);
                self.add(
                    Fact::Role {
                        from,
                        to,
                        role: role.clone(),
                    },
                    bound,
                )
            }
        }
    }

    pub fn add_individual_axiom(&mut self, ax: &IndividualAxiom) {
        match ax {
            IndividualAxiom::Same(a, b) => {
                let (a, b) = (self.named(a), self.named(b));
                self.unify(a, b);
            }
            IndividualAxiom::Diff(a, b) => {
                let (a, b) = (self.named(a), self.named(b));
                self.distinct.insert((a.min(b), a.max(b)));
                if self.find(a) == self.find(b) {
                    self.set_clash(a, b);
                }
            }
        }
    }

    fn set_clash(&mut self, a: IndId, b: IndId) {
        if self.clash.is_none() {
            self.clash = Some(Clash::Equality {
                a: self.individuals[a.index()].name.clone(),
                b: self.individuals[b.index()].name.clone(),
            });
        }
    }

    /// Identifies two individuals; the older one (smaller creation index)
    /// survives.
    fn unify(&mut self, a: IndId, b: IndId) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (keep, drop) = (ra.min(rb), ra.max(rb));
        let conflict = self
            .distinct
            .iter()
            .any(|&(p, q)| {
                let (p, q) = (self.find(p), self.find(q));
                (p == keep && q == drop) || (p == drop && q == keep)
            });
        if conflict {
            self.set_clash(keep, drop);
        }
        self.parent[drop.index()] = keep;
        self.merged.push((drop, keep));
        self.stats.merges += 1;
        // Atom variables of the dropped individual are tied to the survivor's.
        let moved: Vec<(String, VarId)> = self
            .atom_vars
            .iter()
            .filter(|((i, _), _)| *i == drop)
            .map(|((_, n), v)| (n.clone(), *v))
            .collect();
        for (name, v) in moved {
            self.atom_vars.remove(&(drop, name.clone()));
            match self.atom_vars.get(&(keep, name.clone())) {
                Some(&w) => self.constraints.push(LinearConstraint::eq(v, w)),
                None => {
                    self.atom_vars.insert((keep, name), v);
                }
            }
        }
        // Edges that now join the same representatives carry one degree.
        let moved: Vec<((IndId, String, IndId), VarId)> = self
            .edge_vars
            .iter()
            .filter(|((f, _, t), _)| *f == drop || *t == drop)
            .map(|(k, v)| (k.clone(), *v))
            .collect();
        for ((f, role, t), v) in moved {
            self.edge_vars.remove(&(f, role.clone(), t));
            let key = (self.find(f), role, self.find(t));
            match self.edge_vars.get(&key) {
                Some(&w) => self.constraints.push(LinearConstraint::eq(v, w)),
                None => {
                    self.edge_vars.insert(key, v);
                }
            }
        }
        if let (Some(v), Some(w)) = (
            self.individuals[drop.index()].value,
            self.individuals[keep.index()].value,
        ) {
            self.constraints.push(LinearConstraint::eq(v, w));
        }
        // Merges can enable new universal-restriction pairs.
        self.queue.extend(0..self.assertions.len());
    }

    fn is_trivial(bound: &LinearExpr) -> bool {
        bound.as_constant().is_some_and(|c| !c.is_positive())
    }

    /// Removes every fork of a feature: two role assertions with the same
    /// subject and feature but different fillers get their fillers merged,
    /// the newer into the older.
    pub fn eliminate_forks(&mut self) {
        loop {
            let mut first: BTreeMap<(IndId, &str), IndId> = BTreeMap::new();
            let mut fork = None;
            for a in &self.assertions {
                if let Fact::Role { from, to, role } = &a.fact {
                    if Self::is_trivial(&a.bound) || !self.kb.role(role).is_some_and(|r| r.feature) {
                        continue;
                    }
                    let (f, t) = (self.find(*from), self.find(*to));
                    match first.get(&(f, role.as_str())) {
                        Some(&other) if other != t => {
                            fork = Some((other, t));
                            break;
                        }
                        Some(_) => {}
                        None => {
                            first.insert((f, role.as_str()), t);
                        }
                    }
                }
            }
            match fork {
                Some((a, b)) => self.unify(a, b),
                None => return,
            }
        }
    }

    fn atom_var(&mut self, ind: IndId, name: &str) -> VarId {
        let rep = self.find(ind);
        if let Some(&v) = self.atom_vars.get(&(rep, name.to_string())) {
            return v;
        }
        let label = format!("{}:{name}", self.individuals[rep.index()].name);
        let v = self.pool.unit(label);
        self.atom_vars.insert((rep, name.to_string()), v);
        v
    }

    /// Degree variable of the edge `(from, role, to)`; crisp roles take
    /// 0-1 degrees.
    fn edge_var(&mut self, from: IndId, role: &str, to: IndId) -> VarId {
        let key = (self.find(from), role.to_string(), self.find(to));
        if let Some(&v) = self.edge_vars.get(&key) {
            return v;
        }
        let label = format!(
            "({},{}):{role}",
            self.individuals[key.0.index()].name,
            self.individuals[key.2.index()].name
        );
        let v = if self.kb.role(role).is_some_and(|r| r.crisp) {
            self.pool.binary(label)
        } else {
            self.pool.unit(label)
        };
        self.edge_vars.insert(key, v);
        v
    }

    fn splice(&mut self, block: Block) -> Vec<LinearExpr> {
        self.constraints.extend(block.constraints);
        block.outputs
    }

    fn splice_graph(&mut self, g: GraphEncoding) {
        self.constraints.extend(g.constraints);
    }

    /// Applies every rule to fixpoint (each instantiation at most once).
    pub fn saturate(&mut self) {
        self.eliminate_forks();
        while let Some(i) = self.queue.pop_front() {
            if self.clash.is_some() {
                break;
            }
            self.process(i);
        }
        self.queue.clear();
    }

    fn process(&mut self, i: usize) {
        let a = self.assertions[i].clone();
        if Self::is_trivial(&a.bound) {
            return;
        }
        match &a.fact {
            Fact::Concept { ind, concept } => {
                if self.applied.insert(RuleKey::Unary(i)) {
                    self.stats.rule_applications += 1;
                    self.concept_rule(*ind, concept, &a.bound);
                }
                if let Concept::Forall(role, _) | Concept::ForallData(role, _) = concept {
                    let subject = self.find(*ind);
                    let partners: Vec<usize> = (0..self.assertions.len())
                        .filter(|&j| match &self.assertions[j].fact {
                            Fact::Role { from, role: r, .. } => {
                                r == role && self.find(*from) == subject && !Self::is_trivial(&self.assertions[j].bound)
                            }
                            _ => false,
                        })
                        .collect();
                    for j in partners {
                        self.forall_rule(i, j);
                    }
                }
            }
            Fact::Role { from, role, to } => {
                if self.applied.insert(RuleKey::Unary(i)) {
                    let w = self.edge_var(*from, role, *to);
                    self.constraints.push(LinearConstraint::ge(w, a.bound.clone()));
                }
                let subject = self.find(*from);
                let partners: Vec<usize> = (0..self.assertions.len())
                    .filter(|&j| match &self.assertions[j].fact {
                        Fact::Concept {
                            ind,
                            concept: Concept::Forall(r, _) | Concept::ForallData(r, _),
                        } => r == role && self.find(*ind) == subject && !Self::is_trivial(&self.assertions[j].bound),
                        _ => false,
                    })
                    .collect();
                for j in partners {
                    self.forall_rule(j, i);
                }
            }
            Fact::Data { ind, pred } => {
                if self.applied.insert(RuleKey::Unary(i)) {
                    self.stats.rule_applications += 1;
                    self.data_rule(*ind, pred, &a.bound);
                }
            }
        }
    }

    fn concept_rule(&mut self, ind: IndId, concept: &Concept, l: &LinearExpr) {
        let sem = self.semantics;
        match concept {
            Concept::Top | Concept::Forall(..) | Concept::ForallData(..) => {}
            Concept::Bottom => match l.as_constant() {
                Some(n) => {
                    if n.is_positive() && self.clash.is_none() {
                        self.clash = Some(Clash::Bottom {
                            individual: self.individuals[self.find(ind).index()].name.clone(),
                            bound: n.clone(),
                        });
                    }
                }
                None => self.constraints.push(LinearConstraint::le(l.clone(), LinearExpr::zero())),
            },
            Concept::Atomic(name) => {
                let x = self.atom_var(ind, name);
                self.constraints.push(LinearConstraint::ge(x, l.clone()));
            }
            Concept::Not(inner) => match inner.as_ref() {
                Concept::Atomic(name) => {
                    let x = self.atom_var(ind, name);
                    self.constraints.push(LinearConstraint::le(x, l.complement()));
                }
                Concept::Modified(m, c) => self.negated_modifier_rule(ind, m, c, l),
                other => {
                    let c = nnf_not(other);
                    self.add(Fact::Concept { ind, concept: c }, l.clone());
                }
            },
            Concept::And(c, d) => {
                let (b1, b2) = match sem {
                    Semantics::Zadeh => (l.clone(), l.clone()),
                    Semantics::Lukasiewicz => {
                        let block = rules::luk_and(&mut self.pool, l);
                        let out = self.splice(block);
                        (out[0].clone(), out[1].clone())
                    }
                };
                self.add(Fact::Concept { ind, concept: c.as_ref().clone() }, b1);
                self.add(Fact::Concept { ind, concept: d.as_ref().clone() }, b2);
            }
            Concept::Or(c, d) => {
                let block = match sem {
                    Semantics::Zadeh => rules::zadeh_or(&mut self.pool, l),
                    Semantics::Lukasiewicz => rules::luk_or(&mut self.pool, l),
                };
                let out = self.splice(block);
                self.add(Fact::Concept { ind, concept: c.as_ref().clone() }, out[0].clone());
                self.add(Fact::Concept { ind, concept: d.as_ref().clone() }, out[1].clone());
            }
            Concept::Exists(role, c) => {
                let (role_l, filler_l) = self.exists_bounds(l);
                let b = self.fresh_abstract();
                self.add(
                    Fact::Role {
                        from: ind,
                        to: b,
                        role: role.clone(),
                    },
                    role_l,
                );
                self.add(
                    Fact::Concept {
                        ind: b,
                        concept: c.as_ref().clone(),
                    },
                    filler_l,
                );
                self.eliminate_forks();
            }
            Concept::ExistsData(role, p) => {
                let (role_l, filler_l) = self.exists_bounds(l);
                let c = self.fresh_concrete(role);
                self.add(
                    Fact::Role {
                        from: ind,
                        to: c,
                        role: role.clone(),
                    },
                    role_l,
                );
                self.add(Fact::Data { ind: c, pred: p.clone() }, filler_l);
                self.eliminate_forks();
            }
            Concept::Modified(m, c) => self.modifier_rule(ind, m, c, l),
        }
    }

    fn exists_bounds(&mut self, l: &LinearExpr) -> (LinearExpr, LinearExpr) {
        match self.semantics {
            Semantics::Zadeh => (l.clone(), l.clone()),
            Semantics::Lukasiewicz => {
                let block = rules::luk_exists(&mut self.pool, l);
                let out = self.splice(block);
                (out[0].clone(), out[1].clone())
            }
        }
    }

    /// Applies the universal restriction `i` along the edge of role
    /// assertion `j`, once per edge.
    fn forall_rule(&mut self, i: usize, j: usize) {
        let Fact::Role { from, to, role } = self.assertions[j].fact.clone() else {
            unreachable!("role assertion expected")
        };
        let w = self.edge_var(from, &role, to);
        if !self.applied.insert(RuleKey::Forall(i, w)) {
            return;
        }
        self.stats.rule_applications += 1;
        let (l1, concept) = match &self.assertions[i] {
            BoundedAssertion {
                fact: Fact::Concept { concept, .. },
                bound,
            } => (bound.clone(), concept.clone()),
            _ => unreachable!("universal restriction expected"),
        };
        let (l2, filler) = (LinearExpr::var(w), to);
        let block = match self.semantics {
            Semantics::Zadeh => rules::zadeh_forall(&mut self.pool, &l1, &l2),
            Semantics::Lukasiewicz => rules::luk_forall(&mut self.pool, &l1, &l2),
        };
        let x = self.splice(block).remove(0);
        let fact = match concept {
            Concept::Forall(_, c) => Fact::Concept {
                ind: filler,
                concept: c.as_ref().clone(),
            },
            Concept::ForallData(_, p) => Fact::Data { ind: filler, pred: p },
            _ => unreachable!(),
        };
        self.add(fact, x);
    }

    /// `⟨a : m(C), l⟩`: a fresh `z` with `m(z) >= l` and `C(a) >= z`
    /// (`C(a) = z` when `m` is not monotone).
    fn modifier_rule(&mut self, ind: IndId, m: &str, c: &Concept, l: &LinearExpr) {
        let f = self.kb.modifier(m).expect("validated modifier").clone();
        let z = self.pool.unit(format!("mod {m}"));
        let pool = &mut self.pool;
        let enc = encode_lower_graph(&f, &LinearExpr::var(z), l, &mut || pool.binary(format!("mod {m}.y")));
        self.splice_graph(enc);
        self.add(Fact::Concept { ind, concept: c.clone() }, LinearExpr::var(z));
        if !f.is_non_decreasing() {
            self.add(Fact::Concept { ind, concept: nnf_not(c) }, LinearExpr::var(z).complement());
        }
    }

    /// `⟨a : ¬m(C), l⟩`: a fresh `z` with `m(z) <= 1 - l` and `C(a) <= z`.
    fn negated_modifier_rule(&mut self, ind: IndId, m: &str, c: &Concept, l: &LinearExpr) {
        let f = self.kb.modifier(m).expect("validated modifier").clone();
        let z = self.pool.unit(format!("mod {m}"));
        let pool = &mut self.pool;
        let enc = encode_upper_graph(&f, &LinearExpr::var(z), &l.complement(), &mut || {
            pool.binary(format!("mod {m}.y"))
        });
        self.splice_graph(enc);
        self.add(Fact::Concept { ind, concept: nnf_not(c) }, LinearExpr::var(z).complement());
        if !f.is_non_decreasing() {
            self.add(Fact::Concept { ind, concept: nnf(c) }, LinearExpr::var(z));
        }
    }

    /// `⟨c : d, l⟩` splices the lower graph of `d` at `(x_c, l)`;
    /// `⟨c : ¬d, l⟩` the upper graph at `(x_c, 1 - l)`.
    fn data_rule(&mut self, ind: IndId, pred: &PredicateRef, l: &LinearExpr) {
        let rep = self.find(ind);
        let xc = self.individuals[rep.index()]
            .value
            .expect("concrete individual has a value variable");
        let (lo, hi) = match self.pool.kind(xc) {
            VarKind::Continuous { lo, hi } => (lo.clone(), hi.clone()),
            VarKind::Binary => unreachable!(),
        };
        let f = self.kb.predicate(&pred.name).expect("validated predicate").extended_to(&lo, &hi);
        let x = LinearExpr::var(xc);
        let label = format!("pred {}.y", pred.name);
        let pool = &mut self.pool;
        let mut fresh = || pool.binary(label.clone());
        let enc = if pred.negated {
            encode_upper_graph(&f, &x, &l.complement(), &mut fresh)
        } else if let (true, Some(shape)) = (self.options.exact_crisp, f.crisp()) {
            encode_crisp_lower(shape, &lo, &hi, &x, l, &mut fresh)
        } else {
            encode_lower_graph(&f, &x, l, &mut fresh)
        };
        self.splice_graph(enc);
    }

    /// The MIP over all constraints collected so far.
    pub fn to_problem(&self, objective: Option<VarId>) -> MipProblem {
        self.pool.to_problem(&self.constraints, objective)
    }

    fn fact_text(&self, f: &Fact) -> String {
        let name = |i: &IndId| self.individuals[i.index()].name.clone();
        match f {
            Fact::Concept { ind, concept } => format!("{} : {concept}", name(ind)),
            Fact::Role { from, to, role } => format!("({},{}) : {role}", name(from), name(to)),
            Fact::Data { ind, pred } => format!("{} : {pred}", name(ind)),
        }
    }

    /// Stable text rendering of the whole state.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "semantics {}", self.semantics);
        out.push_str("individuals\n");
        for ind in &self.individuals {
            let kind = if ind.concrete { "concrete" } else { "abstract" };
            match ind.value {
                Some(v) => {
                    let _ = writeln!(out, "  {} {kind} {v}", ind.name);
                }
                None => {
                    let _ = writeln!(out, "  {} {kind}", ind.name);
                }
            }
        }
        for (drop, keep) in &self.merged {
            let _ = writeln!(
                out,
                "  merge {} -> {}",
                self.individuals[drop.index()].name,
                self.individuals[keep.index()].name
            );
        }
        for (a, b) in &self.distinct {
            let _ = writeln!(
                out,
                "  distinct {} {}",
                self.individuals[a.index()].name,
                self.individuals[b.index()].name
            );
        }
        out.push_str("assertions\n");
        for (i, a) in self.assertions.iter().enumerate() {
            let _ = writeln!(out, "  [{i}] {} >= {}", self.fact_text(&a.fact), a.bound);
        }
        out.push_str("variables\n");
        for (v, k, label) in self.pool.iter() {
            match k {
                VarKind::Continuous { lo, hi } => {
                    let _ = writeln!(out, "  {v} [{}, {}] {label}", fmt_short(lo), fmt_short(hi));
                }
                VarKind::Binary => {
                    let _ = writeln!(out, "  {v} {{0,1}} {label}");
                }
            }
        }
        out.push_str("constraints\n");
        for c in &self.constraints {
            let _ = writeln!(out, "  {c}");
        }
        if let Some(c) = &self.clash {
            let _ = writeln!(out, "clash {c}");
        }
        out
    }
}

/// `S0`: the expanded ABox with its own bounds, (in)equalities applied and
/// forks removed.
pub fn init_constraint_set<'k>(
    kb: &'k KnowledgeBase,
    ekb: &ExpandedKb,
    semantics: Semantics,
    options: TableauOptions,
) -> ConstraintSet<'k> {
    let mut s = ConstraintSet::new(kb, semantics, options);
    for name in kb.individuals() {
        s.named(name);
    }
    for ax in ekb.individual_axioms() {
        s.add_individual_axiom(ax);
    }
    for fa in ekb.abox() {
        let bound = fa.bound.clone().unwrap_or_else(crate::rational::one);
        s.add_assertion(&fa.assertion, LinearExpr::constant(bound));
    }
    s.eliminate_forks();
    s
}

/// Fork elimination as a standalone step.
pub fn eliminate_forks(s: &mut ConstraintSet<'_>) {
    s.eliminate_forks();
}
