//! Activity-based bound propagation and probing on 0-1 variables.
//!
//! Every row is kept in `Σ a_j x_j <= b` form. From the minimal activity of
//! a row each variable receives an implied bound; binaries round it to an
//! integer. Bounds may be open (strict): a strict objective cutoff `x < b`
//! travels through the rows as strict bounds, and a strict bound `y < 1` on
//! a binary fixes it to 0. Continuous bounds only move by at least a fixed
//! fraction of the variable's initial width (smaller improvements merely make
//! the current bound strict), so propagation cannot creep towards a limit
//! forever. Every bound is a consequence of the rows and the bounds it
//! started from, so propagation never removes a feasible point.

use crate::linear::Relation;

use super::q::Q;

/// Current bounds of every variable; `*_open` marks strict bounds.
#[derive(Debug, Clone)]
pub(crate) struct Domain {
    pub lo: Vec<Q>,
    pub hi: Vec<Q>,
    pub lo_open: Vec<bool>,
    pub hi_open: Vec<bool>,
}

impl Domain {
    /// Closed bounds `lo <= x <= hi`.
    pub fn new(lo: Vec<Q>, hi: Vec<Q>) -> Self {
        let n = lo.len();
        Domain {
            lo,
            hi,
            lo_open: vec![false; n],
            hi_open: vec![false; n],
        }
    }

    pub fn is_fixed(&self, j: usize) -> bool {
        self.lo[j] == self.hi[j]
    }

    pub fn fix(&mut self, j: usize, v: Q) {
        self.lo[j] = v.clone();
        self.hi[j] = v;
        self.lo_open[j] = false;
        self.hi_open[j] = false;
    }

    /// Imposes `x_j < b`; returns `false` when the domain becomes empty.
    pub fn cut_below(&mut self, j: usize, b: &Q) -> bool {
        if *b < self.hi[j] {
            self.hi[j] = b.clone();
            self.hi_open[j] = true;
        } else if *b == self.hi[j] {
            self.hi_open[j] = true;
        }
        self.nonempty(j)
    }

    fn nonempty(&self, j: usize) -> bool {
        self.lo[j] < self.hi[j] || (self.lo[j] == self.hi[j] && !self.lo_open[j] && !self.hi_open[j])
    }
}

#[derive(Debug, Clone)]
struct LeRow {
    coefs: Vec<(usize, Q)>,
    rhs: Q,
}

/// The rows of a problem together with a variable-to-row index.
#[derive(Debug, Clone)]
pub(crate) struct Propagator {
    rows: Vec<LeRow>,
    by_var: Vec<Vec<usize>>,
    binary: Vec<bool>,
    /// Smallest accepted movement of a continuous bound.
    step: Vec<Q>,
}

/// Granularity of continuous tightening, as a fraction of the initial width.
const STEP_FRACTION: i64 = 1024;
/// Row visits allowed per propagation call, per row of the problem.
const VISITS_PER_ROW: usize = 64;

/// Outcome of offering a new bound to a variable.
enum Tightened {
    Empty,
    Unchanged,
    Moved,
}

impl Propagator {
    /// `rows` are `(coefficients, relation, rhs)`; `dom` gives the initial
    /// widths used for the continuous step size.
    pub fn new<'a, I>(rows: I, binary: Vec<bool>, dom: &Domain) -> Self
    where
        I: IntoIterator<Item = (&'a [(usize, Q)], Relation, &'a Q)>,
    {
        let n = binary.len();
        let mut le = Vec::new();
        for (coefs, rel, rhs) in rows {
            let negated = || LeRow {
                coefs: coefs.iter().map(|(j, a)| (*j, a.neg())).collect(),
                rhs: rhs.neg(),
            };
            let plain = || LeRow {
                coefs: coefs.to_vec(),
                rhs: rhs.clone(),
            };
            match rel {
                Relation::Le => le.push(plain()),
                Relation::Ge => le.push(negated()),
                Relation::Eq => {
                    le.push(plain());
                    le.push(negated());
                }
            }
        }
        let mut by_var = vec![Vec::new(); n];
        for (i, r) in le.iter().enumerate() {
            for (j, _) in &r.coefs {
                by_var[*j].push(i);
            }
        }
        let step = (0..n)
            .map(|j| dom.hi[j].sub(&dom.lo[j]).div(&Q::Small(STEP_FRACTION, 1)))
            .collect();
        Propagator {
            rows: le,
            by_var,
            binary,
            step,
        }
    }

    pub fn var_count(&self) -> usize {
        self.binary.len()
    }

    pub fn is_binary(&self, j: usize) -> bool {
        self.binary[j]
    }

    /// Offers `x_j <= bound` (`<` when `open`) if `upper`, else
    /// `x_j >= bound` (`>` when `open`).
    fn tighten(&self, dom: &mut Domain, j: usize, bound: Q, open: bool, upper: bool) -> Tightened {
        let (bound, open) = if self.binary[j] {
            let r = match (upper, open) {
                (true, false) => bound.floor(),
                (true, true) => bound.ceil().sub(&Q::ONE),
                (false, false) => bound.ceil(),
                (false, true) => bound.floor().add(&Q::ONE),
            };
            (r, false)
        } else {
            (bound, open)
        };
        let (cur, cur_open, other) = if upper {
            (&dom.hi[j], dom.hi_open[j], &dom.lo[j])
        } else {
            (&dom.lo[j], dom.lo_open[j], &dom.hi[j])
        };
        let improves = if upper { bound < *cur } else { bound > *cur };
        if !improves {
            if bound == *cur && open && !cur_open {
                if upper {
                    dom.hi_open[j] = true;
                } else {
                    dom.lo_open[j] = true;
                }
                return if dom.nonempty(j) { Tightened::Moved } else { Tightened::Empty };
            }
            return Tightened::Unchanged;
        }
        let reaches_other = bound == *other;
        let big_enough = self.binary[j] || reaches_other || bound.sub(cur).abs() >= self.step[j];
        let crosses = if upper { bound < *other } else { bound > *other };
        if big_enough || crosses {
            if upper {
                dom.hi[j] = bound;
                dom.hi_open[j] = open;
            } else {
                dom.lo[j] = bound;
                dom.lo_open[j] = open;
            }
        } else if !cur_open {
            // A strictly tighter bound exists, so the current one is strict.
            if upper {
                dom.hi_open[j] = true;
            } else {
                dom.lo_open[j] = true;
            }
        } else {
            return Tightened::Unchanged;
        }
        if dom.nonempty(j) {
            Tightened::Moved
        } else {
            Tightened::Empty
        }
    }

    /// Propagates to a fixpoint (or until the work budget is spent).
    /// `seeds` are variables whose bounds changed; `None` starts from every
    /// row. Returns `false` when the domain is proven empty.
    pub fn propagate(&self, dom: &mut Domain, seeds: Option<&[usize]>) -> bool {
        let m = self.rows.len();
        let mut queued = vec![false; m];
        let mut queue = std::collections::VecDeque::new();
        match seeds {
            None => {
                queue.extend(0..m);
                queued.iter_mut().for_each(|q| *q = true);
            }
            Some(vars) => {
                for &j in vars {
                    if !dom.nonempty(j) {
                        return false;
                    }
                    for &i in &self.by_var[j] {
                        if !queued[i] {
                            queued[i] = true;
                            queue.push_back(i);
                        }
                    }
                }
            }
        }
        let mut budget = VISITS_PER_ROW * m.max(1) + 1000;
        while let Some(i) = queue.pop_front() {
            queued[i] = false;
            if budget == 0 {
                break;
            }
            budget -= 1;
            let row = &self.rows[i];
            // Minimal activity and how many of its terms sit at open bounds.
            let mut min_act = Q::ZERO;
            let mut open_terms = 0usize;
            for (j, a) in &row.coefs {
                if a.is_positive() {
                    min_act = min_act.add(&a.mul(&dom.lo[*j]));
                    open_terms += dom.lo_open[*j] as usize;
                } else {
                    min_act = min_act.add(&a.mul(&dom.hi[*j]));
                    open_terms += dom.hi_open[*j] as usize;
                }
            }
            let slack = row.rhs.sub(&min_act);
            if slack.is_negative() || (slack.is_zero() && open_terms > 0) {
                return false;
            }
            for (j, a) in &row.coefs {
                let j = *j;
                let width = dom.hi[j].sub(&dom.lo[j]);
                let own_open = if a.is_positive() { dom.lo_open[j] } else { dom.hi_open[j] };
                let open = open_terms > own_open as usize;
                let room = a.abs().mul(&width);
                if room < slack || (room == slack && (!open || if a.is_positive() { dom.hi_open[j] } else { dom.lo_open[j] })) {
                    continue;
                }
                let moved = if a.is_positive() {
                    let b = dom.lo[j].add(&slack.div(a));
                    self.tighten(dom, j, b, open, true)
                } else {
                    let b = dom.hi[j].add(&slack.div(a));
                    self.tighten(dom, j, b, open, false)
                };
                match moved {
                    Tightened::Empty => return false,
                    Tightened::Unchanged => {}
                    Tightened::Moved => {
                        for &k in &self.by_var[j] {
                            if k != i && !queued[k] {
                                queued[k] = true;
                                queue.push_back(k);
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Probes every unfixed binary: a value whose propagation fails is
    /// excluded, and when both values survive every variable keeps only the
    /// hull of the two propagated domains. Returns `false` on infeasibility.
    pub fn probe(&self, dom: &mut Domain, rounds: usize) -> bool {
        for _ in 0..rounds {
            let mut changed = false;
            for j in 0..self.var_count() {
                if !self.binary[j] || dom.is_fixed(j) {
                    continue;
                }
                let mut d0 = dom.clone();
                d0.fix(j, Q::ZERO);
                let f0 = self.propagate(&mut d0, Some(&[j]));
                let mut d1 = dom.clone();
                d1.fix(j, Q::ONE);
                let f1 = self.propagate(&mut d1, Some(&[j]));
                match (f0, f1) {
                    (false, false) => return false,
                    (false, true) => {
                        *dom = d1;
                        changed = true;
                    }
                    (true, false) => {
                        *dom = d0;
                        changed = true;
                    }
                    (true, true) => {
                        let mut touched = Vec::new();
                        for k in 0..self.var_count() {
                            let (lo, lo_open) = hull_lo(&d0, &d1, k);
                            if lo > dom.lo[k] || (lo == dom.lo[k] && lo_open && !dom.lo_open[k]) {
                                dom.lo[k] = lo;
                                dom.lo_open[k] = lo_open;
                                touched.push(k);
                            }
                            let (hi, hi_open) = hull_hi(&d0, &d1, k);
                            if hi < dom.hi[k] || (hi == dom.hi[k] && hi_open && !dom.hi_open[k]) {
                                dom.hi[k] = hi;
                                dom.hi_open[k] = hi_open;
                                touched.push(k);
                            }
                        }
                        if !touched.is_empty() {
                            changed = true;
                            if !self.propagate(dom, Some(&touched)) {
                                return false;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        true
    }
}

/// The weaker of two lower bounds.
fn hull_lo(a: &Domain, b: &Domain, k: usize) -> (Q, bool) {
    match a.lo[k].cmp(&b.lo[k]) {
        std::cmp::Ordering::Less => (a.lo[k].clone(), a.lo_open[k]),
        std::cmp::Ordering::Greater => (b.lo[k].clone(), b.lo_open[k]),
        std::cmp::Ordering::Equal => (a.lo[k].clone(), a.lo_open[k] && b.lo_open[k]),
    }
}

/// The weaker of two upper bounds.
fn hull_hi(a: &Domain, b: &Domain, k: usize) -> (Q, bool) {
    match a.hi[k].cmp(&b.hi[k]) {
        std::cmp::Ordering::Greater => (a.hi[k].clone(), a.hi_open[k]),
        std::cmp::Ordering::Less => (b.hi[k].clone(), b.hi_open[k]),
        std::cmp::Ordering::Equal => (a.hi[k].clone(), a.hi_open[k] && b.hi_open[k]),
    }
}
