//! Shared helpers for the integration and acceptance tests: fixture paths,
//! a random generator of tiny knowledge bases and an exhaustive grid
//! oracle for their best degree bounds.

#![allow(dead_code)]

use std::path::PathBuf;

use fuzzy_alcd::kb::{build_kb, Assertion, Concept, FuzzyAssertion, KbParts, KnowledgeBase, RoleDecl};
use fuzzy_alcd::linear::{LinearConstraint, LinearExpr, Relation, VarId};
use fuzzy_alcd::milp::{lp_minimize_exact, LpResult, MipProblem};
use fuzzy_alcd::parser::parse_kb;
use fuzzy_alcd::rational::{int, rat, zero, Rat};
use fuzzy_alcd::semantics::{Interpretation, Semantics};
use num_traits::ToPrimitive;
use rand::Rng;

/// Path of a file in the crate's `examples/` directory.
pub fn example_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

pub fn load_example(name: &str) -> KnowledgeBase {
    let text = std::fs::read_to_string(example_path(name)).expect("fixture exists");
    parse_kb(&text).expect("fixture parses")
}

/// The nested concept whose completion needs at least `2^n + 1`
/// variables: every level asks for two `R`-successors with differently
/// constrained concrete values, and all successors repeat the next level.
pub fn nested_kb_text(n: usize) -> String {
    let mut lines = vec!["role R".to_string(), "crole T [0,100]".to_string()];
    for i in 1..=n {
        for j in 1..=2 {
            let a = (i * 10 + j * 3) % 90;
            lines.push(format!("predicate d{i}{j} : [0,100] = triangle({a},{},{})", a + 5, a + 10));
        }
    }
    fn level(i: usize, n: usize) -> String {
        let mut body = format!("some R.(some T.d{i}1) and some R.(some T.d{i}2)");
        if i < n {
            body.push_str(&format!(" and all R.({})", level(i + 1, n)));
        }
        body
    }
    lines.push(format!("define C1 := {}", level(1, n)));
    lines.push("assert (x : C1) >= 1".to_string());
    lines.join("\n") + "\n"
}

// ---------------------------------------------------------------------------
// Random tiny knowledge bases
// ---------------------------------------------------------------------------

pub const NAMES: [&str; 2] = ["A", "B"];
/// Every case uses the feature `S`; about half also use the plain role `R`.
pub const ROLES: [&str; 2] = ["S", "R"];
pub const FEATURE: &str = "S";
pub const INDIVIDUALS: [&str; 3] = ["a", "b", "c"];

/// Maximum size of the oracle's interpretation domain.
pub const MAX_DOMAIN: usize = 3;

/// A tiny knowledge base with one assertion query.
#[derive(Debug, Clone)]
pub struct TinyCase {
    pub kb: KnowledgeBase,
    pub roles: Vec<String>,
    pub individual: String,
    pub query: Concept,
    /// Number of elements the oracle searches over.
    pub domain: usize,
}

fn quarter<R: Rng>(rng: &mut R) -> Rat {
    rat(rng.gen_range(1..=4), 4)
}

/// A random concept of constructor depth at most `depth`, with negation
/// only in front of names.
pub fn random_concept<R: Rng>(rng: &mut R, depth: usize, roles: &[String]) -> Concept {
    let leaf = |rng: &mut R| {
        let a = Concept::atomic(NAMES[rng.gen_range(0..NAMES.len())]);
        match rng.gen_range(0..10) {
            0 => Concept::Top,
            1 => Concept::Bottom,
            2..=4 => Concept::not(a),
            _ => a,
        }
    };
    if depth == 0 || rng.gen_bool(0.3) {
        return leaf(rng);
    }
    let role = roles[rng.gen_range(0..roles.len())].clone();
    match rng.gen_range(0..4) {
        0 => Concept::and(random_concept(rng, depth - 1, roles), random_concept(rng, depth - 1, roles)),
        1 => Concept::or(random_concept(rng, depth - 1, roles), random_concept(rng, depth - 1, roles)),
        2 => Concept::exists(role, random_concept(rng, depth - 1, roles)),
        _ => Concept::forall(role, random_concept(rng, depth - 1, roles)),
    }
}

fn count(c: &Concept, pick: fn(&Concept) -> bool) -> usize {
    let mut n = 0;
    c.walk(&mut |d| {
        if pick(d) {
            n += 1;
        }
    });
    n
}

/// Draws a tiny case whose obvious witnesses fit into the oracle's domain:
/// every existential of the ABox and every universal of the query (which
/// the query negates) gets an element of its own.
pub fn random_case<R: Rng>(rng: &mut R) -> TinyCase {
    loop {
        let k = rng.gen_range(1..=3);
        let roles: Vec<String> = ROLES[..rng.gen_range(1..=2)].iter().map(|s| s.to_string()).collect();
        let inds = &INDIVIDUALS[..k];
        let mut abox = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            abox.push(FuzzyAssertion {
                assertion: Assertion::Concept {
                    individual: inds[rng.gen_range(0..k)].to_string(),
                    concept: random_concept(rng, 2, &roles),
                },
                bound: Some(quarter(rng)),
            });
        }
        for _ in 0..rng.gen_range(0..=2) {
            let (from, to) = (inds[rng.gen_range(0..k)].to_string(), inds[rng.gen_range(0..k)].to_string());
            let role = roles[rng.gen_range(0..roles.len())].clone();
            // Two feature successors of one individual would identify two
            // named individuals, which the oracle keeps apart.
            let forks = abox.iter().any(|f: &FuzzyAssertion| {
                matches!(&f.assertion, Assertion::Role { from: f2, to: t2, role: r2 } if *r2 == role && *f2 == from && *t2 != to)
            });
            if role == FEATURE && forks {
                continue;
            }
            abox.push(FuzzyAssertion {
                assertion: Assertion::Role { from, to, role },
                bound: Some(quarter(rng)),
            });
        }
        let query = random_concept(rng, 2, &roles);
        let witnesses: usize = abox
            .iter()
            .map(|f| match &f.assertion {
                Assertion::Concept { concept, .. } => count(concept, |c| matches!(c, Concept::Exists(..))),
                Assertion::Role { .. } => 0,
            })
            .sum::<usize>()
            + count(&query, |c| matches!(c, Concept::Forall(..)));
        if k + witnesses > MAX_DOMAIN {
            continue;
        }
        let parts = KbParts {
            roles: roles
                .iter()
                .map(|r| {
                    let decl = RoleDecl::abstract_role(r);
                    if r == FEATURE {
                        decl.with_feature()
                    } else {
                        decl
                    }
                })
                .collect(),
            abox,
            ..Default::default()
        };
        let Ok(kb) = build_kb(parts) else { continue };
        let individual = inds[rng.gen_range(0..k)].to_string();
        if !kb.has_individual(&individual) || !query.atoms().iter().all(|a| kb.concept_names().contains(a)) {
            continue;
        }
        // Unmentioned individuals still occupy their own element.
        let named = kb.individuals().len();
        return TinyCase {
            kb,
            roles,
            individual,
            query,
            domain: (named + witnesses).max(1),
        };
    }
}

// ---------------------------------------------------------------------------
// Exhaustive grid oracle
// ---------------------------------------------------------------------------

/// Degrees are multiples of `1/STEPS`.
pub const STEPS: i32 = 4;

fn tnorm(sem: Semantics, a: i32, b: i32) -> i32 {
    match sem {
        Semantics::Zadeh => a.min(b),
        Semantics::Lukasiewicz => (a + b - STEPS).max(0),
    }
}

fn tconorm(sem: Semantics, a: i32, b: i32) -> i32 {
    match sem {
        Semantics::Zadeh => a.max(b),
        Semantics::Lukasiewicz => (a + b).min(STEPS),
    }
}

fn implication(sem: Semantics, a: i32, b: i32) -> i32 {
    match sem {
        Semantics::Zadeh => (STEPS - a).max(b),
        Semantics::Lukasiewicz => (STEPS - a + b).min(STEPS),
    }
}

struct Search<'a> {
    sem: Semantics,
    n: usize,
    names: Vec<String>,
    roles: Vec<String>,
    /// Indices of the roles that are features.
    features: Vec<usize>,
    /// Current range of every variable, concept variables first, then
    /// role variables.
    values: Vec<(i32, i32)>,
    /// `(element, concept, bound)` and `(role var, bound)` requirements.
    concept_goals: Vec<(usize, &'a Concept, i32)>,
    role_goals: Vec<(usize, i32)>,
    query: &'a Concept,
    query_at: usize,
    best: Option<(i32, Vec<i32>)>,
}

impl<'a> Search<'a> {
    fn name_var(&self, name: &str, u: usize) -> usize {
        self.names.iter().position(|n| n == name).expect("known name") * self.n + u
    }

    fn role_var(&self, role: &str, u: usize, v: usize) -> usize {
        let r = self.roles.iter().position(|n| n == role).expect("known role");
        self.names.len() * self.n + (r * self.n + u) * self.n + v
    }

    fn range(&self, var: usize) -> (i32, i32) {
        self.values[var]
    }

    /// Interval of the degree of `c` at `u` over all completions of the
    /// current partial assignment (every connective is monotone or
    /// antitone in each argument).
    fn eval(&self, c: &Concept, u: usize) -> (i32, i32) {
        let sem = self.sem;
        match c {
            Concept::Top => (STEPS, STEPS),
            Concept::Bottom => (0, 0),
            Concept::Atomic(a) => self.range(self.name_var(a, u)),
            Concept::Not(d) => {
                let (lo, hi) = self.eval(d, u);
                (STEPS - hi, STEPS - lo)
            }
            Concept::And(a, b) => {
                let (x, y) = (self.eval(a, u), self.eval(b, u));
                (tnorm(sem, x.0, y.0), tnorm(sem, x.1, y.1))
            }
            Concept::Or(a, b) => {
                let (x, y) = (self.eval(a, u), self.eval(b, u));
                (tconorm(sem, x.0, y.0), tconorm(sem, x.1, y.1))
            }
            Concept::Exists(r, d) => (0..self.n).fold((0, 0), |acc, v| {
                let (rl, rh) = self.range(self.role_var(r, u, v));
                let (dl, dh) = self.eval(d, v);
                (acc.0.max(tnorm(sem, rl, dl)), acc.1.max(tnorm(sem, rh, dh)))
            }),
            Concept::Forall(r, d) => (0..self.n).fold((STEPS, STEPS), |acc, v| {
                let (rl, rh) = self.range(self.role_var(r, u, v));
                let (dl, dh) = self.eval(d, v);
                (acc.0.min(implication(sem, rh, dl)), acc.1.min(implication(sem, rl, dh)))
            }),
            other => panic!("the grid oracle does not handle {other}"),
        }
    }

    /// No element has two feature successors of positive degree in the
    /// smallest completion.
    fn functional(&self) -> bool {
        self.features.iter().all(|&r| {
            (0..self.n).all(|u| {
                (0..self.n)
                    .filter(|&v| self.values[self.names.len() * self.n + (r * self.n + u) * self.n + v].0 > 0)
                    .count()
                    <= 1
            })
        })
    }

    fn viable(&self) -> bool {
        self.functional()
            && self.concept_goals.iter().all(|(u, c, b)| self.eval(c, *u).1 >= *b)
            && self.role_goals.iter().all(|(var, b)| self.range(*var).1 >= *b)
            && self
                .best
                .as_ref()
                .is_none_or(|(best, _)| self.eval(self.query, self.query_at).0 < *best)
    }

    fn settled(&self) -> bool {
        self.concept_goals.iter().all(|(u, c, b)| self.eval(c, *u).0 >= *b)
            && self.role_goals.iter().all(|(var, b)| self.range(*var).0 >= *b)
    }

    /// First variable of `c` at `u`, in evaluation order, whose range is
    /// not yet a single value.
    fn open_var(&self, c: &Concept, u: usize) -> Option<usize> {
        let open = |var: usize| (self.values[var].0 < self.values[var].1).then_some(var);
        match c {
            Concept::Atomic(a) => open(self.name_var(a, u)),
            Concept::Not(d) => self.open_var(d, u),
            Concept::And(a, b) | Concept::Or(a, b) => self.open_var(a, u).or_else(|| self.open_var(b, u)),
            Concept::Exists(r, d) | Concept::Forall(r, d) => {
                (0..self.n).find_map(|v| open(self.role_var(r, u, v)).or_else(|| self.open_var(d, v)))
            }
            _ => None,
        }
    }

    /// The variable to branch on: one that an unmet requirement depends
    /// on, or else one the query depends on. Variables nothing depends on
    /// are never branched on.
    fn pick(&self) -> Option<usize> {
        self.concept_goals
            .iter()
            .filter(|(u, c, b)| self.eval(c, *u).0 < *b)
            .find_map(|(u, c, _)| self.open_var(c, *u))
            .or_else(|| self.open_var(self.query, self.query_at))
    }

    fn dfs(&mut self) {
        if !self.viable() {
            return;
        }
        // Once every requirement holds and the query degree is fixed for
        // all completions, any completion is a model with that degree.
        let (qlo, qhi) = self.eval(self.query, self.query_at);
        if qlo == qhi && self.settled() {
            self.best = Some((qlo, self.values.iter().map(|v| v.0).collect()));
            return;
        }
        let Some(var) = self.pick() else { return };
        let saved = self.values[var];
        for x in saved.0..=saved.1 {
            self.values[var] = (x, x);
            self.dfs();
            if matches!(self.best, Some((0, _))) {
                break;
            }
        }
        self.values[var] = saved;
    }
}

/// Smallest degree of `individual : query` over all models of `kb` whose
/// domain has `domain` elements and whose degrees are multiples of
/// `1/STEPS`, together with a model attaining it. Named individuals occupy
/// the first elements. `None` when no such model exists.
pub fn grid_glb(
    kb: &KnowledgeBase,
    sem: Semantics,
    roles: &[String],
    individual: &str,
    query: &Concept,
    domain: usize,
) -> Option<(Rat, Interpretation)> {
    let inds = kb.individuals();
    assert!(inds.len() <= domain, "every named individual needs its own element");
    let mut names: Vec<String> = kb.concept_names().iter().cloned().collect();
    for a in query.atoms() {
        if !names.contains(&a) {
            names.push(a);
        }
    }
    let index = |a: &str| inds.iter().position(|i| i == a).expect("named individual");
    let total = names.len() * domain + roles.len() * domain * domain;
    let mut search = Search {
        sem,
        n: domain,
        names,
        roles: roles.to_vec(),
        features: (0..roles.len())
            .filter(|&r| kb.role(&roles[r]).is_some_and(|d| d.feature))
            .collect(),
        values: vec![(0, STEPS); total],
        concept_goals: Vec::new(),
        role_goals: Vec::new(),
        query,
        query_at: index(individual),
        best: None,
    };
    let quarters = |r: &Rat| -> i32 {
        let q = r * rat(STEPS as i64, 1);
        assert!(q.is_integer(), "degree {r} is off the grid");
        q.to_integer().to_i32().expect("small")
    };
    for f in kb.abox() {
        let b = quarters(&f.effective_bound());
        match &f.assertion {
            Assertion::Concept { individual, concept } => search.concept_goals.push((index(individual), concept, b)),
            Assertion::Role { from, to, role } => {
                // A role requirement is a plain lower bound on its variable.
                let v = search.role_var(role, index(from), index(to));
                search.values[v].0 = search.values[v].0.max(b);
                search.role_goals.push((v, b));
            }
        }
    }
    search.dfs();
    let (value, values) = search.best?;
    let mut interp = Interpretation::new(domain);
    let deg = |x: i32| rat(x as i64, STEPS as i64);
    for (k, name) in search.names.iter().enumerate() {
        interp
            .concepts
            .insert(name.clone(), (0..domain).map(|u| deg(values[k * domain + u])).collect());
    }
    for (r, role) in search.roles.iter().enumerate() {
        let base = search.names.len() * domain + r * domain * domain;
        let m = (0..domain)
            .map(|u| (0..domain).map(|v| deg(values[base + u * domain + v])).collect())
            .collect();
        interp.roles.insert(role.clone(), m);
    }
    for (i, name) in inds.iter().enumerate() {
        interp.individuals.insert(name.clone(), i);
    }
    Some((deg(value), interp))
}

// ---------------------------------------------------------------------------
// Random mixed-integer programs
// ---------------------------------------------------------------------------

pub fn small_rat<R: Rng>(rng: &mut R, max: i64) -> Rat {
    rat(rng.gen_range(-max..=max), rng.gen_range(1..=8))
}

/// A random MIP with at most 6 binaries and 8 bounded continuous
/// variables whose objective variable `z` equals a random linear cost.
/// Nine in ten are built around a hidden feasible point.
pub fn random_mip<R: Rng>(rng: &mut R) -> (MipProblem, Vec<VarId>, VarId) {
    let mut p = MipProblem::new();
    let m = rng.gen_range(1..=6);
    let c = rng.gen_range(1..=8);
    let bins: Vec<VarId> = (0..m).map(|_| p.add_binary()).collect();
    let mut point: Vec<Rat> = bins.iter().map(|_| int(rng.gen_range(0..=1))).collect();
    let mut vars = bins.clone();
    for _ in 0..c {
        let a = small_rat(rng, 16);
        let b = &a + rat(rng.gen_range(0..=16), rng.gen_range(1..=8));
        point.push(&a + (&b - &a) * rat(rng.gen_range(0..=4), 4));
        vars.push(p.add_continuous(a, b));
    }
    let consistent = rng.gen_bool(0.9);
    for _ in 0..rng.gen_range(1..=6) {
        let mut lhs = LinearExpr::zero();
        let mut at = zero();
        for _ in 0..rng.gen_range(1..=4) {
            let k = rng.gen_range(0..vars.len());
            let coef = small_rat(rng, 8);
            at += &coef * &point[k];
            lhs.add_term(vars[k], coef);
        }
        let rel = [Relation::Le, Relation::Ge, Relation::Eq][rng.gen_range(0..3)];
        let slack = rat(rng.gen_range(0..=4), rng.gen_range(1..=8));
        let rhs = if !consistent {
            small_rat(rng, 8)
        } else {
            match rel {
                Relation::Le => &at + slack,
                Relation::Ge => &at - slack,
                Relation::Eq => at.clone(),
            }
        };
        p.add_constraint(LinearConstraint::new(lhs, rel, LinearExpr::constant(rhs)));
    }
    let mut cost = LinearExpr::zero();
    for v in &vars {
        cost.add_term(*v, small_rat(rng, 8));
    }
    let z = p.add_continuous(int(-10_000), int(10_000));
    p.add_constraint(LinearConstraint::eq(LinearExpr::var(z), cost));
    p.set_objective(Some(z));
    (p, bins, z)
}

/// Optimum of `p` by solving the LP of every 0/1 assignment of `bins`.
pub fn enumerate_mip(p: &MipProblem, bins: &[VarId]) -> Option<Rat> {
    let mut best: Option<Rat> = None;
    for mask in 0..(1u32 << bins.len()) {
        let mut q = p.clone();
        for (i, b) in bins.iter().enumerate() {
            q.fix(*b, int(((mask >> i) & 1) as i64));
        }
        if let LpResult::Optimal { value, .. } = lp_minimize_exact(&q).expect("well-formed") {
            if best.as_ref().is_none_or(|b| value < *b) {
                best = Some(value);
            }
        }
    }
    best
}
