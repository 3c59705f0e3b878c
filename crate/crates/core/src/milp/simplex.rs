//! Sparse bounded-variable simplex over exact rationals.
//!
//! Every column has a finite lower bound and an optional upper bound;
//! nonbasic columns sit at one of their bounds. Tableau rows are stored
//! sparsely together with their transformed right-hand sides, so the
//! values of the basic columns can be recomputed whenever bounds change.
//!
//! A cold solve runs the two-phase primal method: pricing picks the most
//! negative reduced cost and, after a run of degenerate steps, switches to
//! Bland's smallest-index rule until the objective moves again, so cycling
//! cannot occur. A bound flip replaces a pivot when the entering column
//! reaches its own opposite bound first.
//!
//! [`WarmLp`] keeps the final tableau and re-optimises after the bounds of
//! structural columns tighten: the old basis stays dual feasible once every
//! nonbasic column is put on the bound its reduced cost prefers, and the
//! dual simplex restores primal feasibility (with the same degenerate
//! fallback to smallest-index choices).

use crate::linear::Relation;

use super::q::Q;

#[derive(Debug, Clone)]
pub(crate) struct Row {
    pub coefs: Vec<(usize, Q)>,
    pub rel: Relation,
    pub rhs: Q,
}

#[derive(Debug, Clone)]
pub(crate) struct LpModel {
    pub lo: Vec<Q>,
    pub hi: Vec<Q>,
    pub rows: Vec<Row>,
    /// Minimised objective, one coefficient per structural variable.
    pub cost: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Infeasible,
    Optimal { value: Q, x: Vec<Q> },
}

/// Raised only when the bounded model somehow admits an unbounded ray.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Unbounded;

/// Degenerate pivots tolerated before switching to smallest-index rules.
const DEGENERATE_STREAK: usize = 50;

type SparseRow = Vec<(usize, Q)>;

fn entry(row: &SparseRow, col: usize) -> Option<&Q> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|k| &row[k].1)
}

/// `row - f * pivot`, dropping the entries that cancel.
fn eliminate(row: &SparseRow, f: &Q, pivot: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut a, mut b) = (0, 0);
    while a < row.len() || b < pivot.len() {
        let ca = row.get(a).map_or(usize::MAX, |e| e.0);
        let cb = pivot.get(b).map_or(usize::MAX, |e| e.0);
        if ca < cb {
            out.push(row[a].clone());
            a += 1;
        } else if cb < ca {
            out.push((cb, f.mul(&pivot[b].1).neg()));
            b += 1;
        } else {
            let v = row[a].1.sub_mul(f, &pivot[b].1);
            if !v.is_zero() {
                out.push((ca, v));
            }
            a += 1;
            b += 1;
        }
    }
    out
}

/// Rows `sum_j t_ij x_j = beta_i` in canonical form for `basis`.
#[derive(Debug, Clone)]
struct Tableau {
    rows: Vec<SparseRow>,
    beta: Vec<Q>,
    basis: Vec<usize>,
    basic_row: Vec<Option<usize>>,
    x: Vec<Q>,
    lo: Vec<Q>,
    /// `None` is an infinite upper bound.
    hi: Vec<Option<Q>>,
    /// Reduced costs for the objective last optimised.
    d: Vec<Q>,
    pivots: usize,
}

impl Tableau {
    fn set_reduced_costs(&mut self, cost: &[Q]) {
        let mut d = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, tij) in &self.rows[i] {
                d[*j] = d[*j].sub_mul(cb, tij);
            }
        }
        self.d = d;
    }

    fn can_increase(&self, j: usize) -> bool {
        match &self.hi[j] {
            Some(u) => self.x[j] < *u,
            None => true,
        }
    }

    fn can_decrease(&self, j: usize) -> bool {
        self.x[j] > self.lo[j]
    }

    fn improving(&self, j: usize) -> bool {
        let d = &self.d[j];
        self.basic_row[j].is_none()
            && ((d.is_negative() && self.can_increase(j)) || (d.is_positive() && self.can_decrease(j)))
    }

    /// Nonzero entries of column `q`.
    fn column(&self, q: usize) -> Vec<(usize, Q)> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(i, row)| entry(row, q).map(|t| (i, t.clone())))
            .collect()
    }

    /// Moves nonbasic `q` by `delta`, updating the basic columns.
    fn shift(&mut self, q: usize, delta: &Q, column: &[(usize, Q)]) {
        self.x[q] = self.x[q].add(delta);
        for (i, tiq) in column {
            let b = self.basis[*i];
            self.x[b] = self.x[b].sub_mul(tiq, delta);
        }
    }

    /// Recomputes the basic values from the nonbasic ones.
    fn recompute_basics(&mut self) {
        for i in 0..self.rows.len() {
            let b = self.basis[i];
            let mut v = self.beta[i].clone();
            for (j, t) in &self.rows[i] {
                if *j != b {
                    v = v.sub_mul(t, &self.x[*j]);
                }
            }
            self.x[b] = v;
        }
    }

    /// Primal iterations until the current reduced costs are optimal.
    fn primal(&mut self) -> Result<(), Unbounded> {
        let mut degenerate = 0usize;
        loop {
            let bland = degenerate >= DEGENERATE_STREAK;
            let mut entering: Option<usize> = None;
            for j in 0..self.d.len() {
                if !self.improving(j) {
                    continue;
                }
                if bland {
                    entering = Some(j);
                    break;
                }
                if entering.is_none_or(|k| self.d[j].abs() > self.d[k].abs()) {
                    entering = Some(j);
                }
            }
            let Some(q) = entering else {
                return Ok(());
            };
            let increasing = self.d[q].is_negative();

            // Ratio test. `rate` is the change of the basic variable per unit
            // of movement of the entering variable in its chosen direction.
            let column = self.column(q);
            let mut best: Option<(Q, usize)> = None;
            for (i, tiq) in &column {
                let rate = if increasing { tiq.neg() } else { tiq.clone() };
                let b = self.basis[*i];
                let limit = if rate.is_negative() {
                    self.x[b].sub(&self.lo[b]).div(&rate.neg())
                } else {
                    match &self.hi[b] {
                        Some(u) => u.sub(&self.x[b]).div(&rate),
                        None => continue,
                    }
                };
                if best
                    .as_ref()
                    .is_none_or(|(l, r)| limit < *l || (limit == *l && b < self.basis[*r]))
                {
                    best = Some((limit, *i));
                }
            }
            let flip = self.hi[q].as_ref().map(|u| u.sub(&self.lo[q]));
            let (step, leave_row) = match (best, flip) {
                (None, None) => return Err(Unbounded),
                (None, Some(u)) => (u, None),
                (Some((l, _)), Some(u)) if u <= l => (u, None),
                (Some((l, r)), _) => (l, Some(r)),
            };
            if step.is_zero() {
                degenerate += 1;
            } else {
                degenerate = 0;
                let delta = if increasing { step } else { step.neg() };
                self.shift(q, &delta, &column);
            }
            if let Some(r) = leave_row {
                self.pivot(r, q, &column);
            }
        }
    }

    /// Dual iterations from a dual feasible basis until the basic values
    /// respect their bounds. Returns `false` when the bounds are
    /// inconsistent with the rows.
    fn dual(&mut self) -> bool {
        let mut degenerate = 0usize;
        loop {
            let bland = degenerate >= DEGENERATE_STREAK;
            // Leaving row: largest violation, or smallest basic index.
            let mut leaving: Option<(usize, Q, bool)> = None;
            for (i, &b) in self.basis.iter().enumerate() {
                let (gap, below) = if self.x[b] < self.lo[b] {
                    (self.lo[b].sub(&self.x[b]), true)
                } else {
                    match &self.hi[b] {
                        Some(u) if self.x[b] > *u => (self.x[b].sub(u), false),
                        _ => continue,
                    }
                };
                let better = match &leaving {
                    None => true,
                    Some((r, g, _)) => {
                        if bland {
                            b < self.basis[*r]
                        } else {
                            gap > *g
                        }
                    }
                };
                if better {
                    leaving = Some((i, gap, below));
                }
            }
            let Some((r, _, below)) = leaving else {
                return true;
            };
            // x_b = beta_r - sum t_rj x_j must rise (below) or fall. A
            // nonbasic column may move only away from the bound it sits at,
            // which keeps its reduced cost dual feasible.
            let b = self.basis[r];
            let mut entering: Option<(Q, usize)> = None;
            for (j, t) in &self.rows[r] {
                let j = *j;
                if j == b {
                    continue;
                }
                let up = if below { t.is_negative() } else { t.is_positive() };
                let movable = if up { self.can_increase(j) } else { self.can_decrease(j) };
                if !movable {
                    continue;
                }
                let ratio = self.d[j].abs().div(&t.abs());
                if entering.as_ref().is_none_or(|(best, k)| ratio < *best || (ratio == *best && j < *k)) {
                    entering = Some((ratio, j));
                }
            }
            let Some((ratio, q)) = entering else {
                return false;
            };
            if ratio.is_zero() {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            let target = if below { self.lo[b].clone() } else { self.hi[b].clone().expect("finite") };
            let trq = entry(&self.rows[r], q).expect("entering entry").clone();
            let delta = self.x[b].sub(&target).div(&trq);
            let column = self.column(q);
            self.shift(q, &delta, &column);
            self.pivot(r, q, &column);
        }
    }

    /// Pivots `q` into the basis on row `r`; `column` lists the nonzero
    /// entries of column `q`.
    fn pivot(&mut self, r: usize, q: usize, column: &[(usize, Q)]) {
        self.pivots += 1;
        let leaving = self.basis[r];
        let piv = entry(&self.rows[r], q).expect("pivot entry").clone();
        if !piv.is_one() {
            for (_, v) in self.rows[r].iter_mut() {
                *v = v.div(&piv);
            }
            self.beta[r] = self.beta[r].div(&piv);
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        for (i, f) in column {
            if *i != r {
                self.rows[*i] = eliminate(&self.rows[*i], f, &pivot_row);
                self.beta[*i] = self.beta[*i].sub_mul(f, &self.beta[r]);
            }
        }
        if !self.d[q].is_zero() {
            let f = self.d[q].clone();
            for (j, v) in &pivot_row {
                self.d[*j] = self.d[*j].sub_mul(&f, v);
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = q;
        self.basic_row[q] = Some(r);
        self.basic_row[leaving] = None;
    }
}

/// An LP whose final tableau is kept for re-solving under tighter bounds.
#[derive(Debug, Clone)]
pub(crate) struct WarmLp {
    model: LpModel,
    /// Structural columns, then one slack per inequality, then artificials.
    tab: Tableau,
    cost: Vec<Q>,
    /// Whether `tab` holds a dual feasible basis for `cost`.
    dual_ready: bool,
}

impl WarmLp {
    /// Cold two-phase solve.
    pub fn solve(model: LpModel) -> Result<(WarmLp, LpOutcome), Unbounded> {
        let n = model.lo.len();
        let m = model.rows.len();
        let crossed = (0..n).any(|j| model.lo[j] > model.hi[j]);
        let slack_count = model.rows.iter().filter(|r| r.rel != Relation::Eq).count();

        // Rows with slacks; negated where the slack cannot start feasible.
        let mut rows: Vec<SparseRow> = Vec::with_capacity(m);
        let mut beta: Vec<Q> = Vec::with_capacity(m);
        let mut basic_slack: Vec<Option<usize>> = Vec::with_capacity(m);
        let mut next_slack = n;
        for row in &model.rows {
            let mut merged: std::collections::BTreeMap<usize, Q> = std::collections::BTreeMap::new();
            let mut residual = row.rhs.clone();
            for (j, a) in &row.coefs {
                let e = merged.entry(*j).or_insert(Q::ZERO);
                *e = e.add(a);
                residual = residual.sub_mul(a, &model.lo[*j]);
            }
            let mut line: SparseRow = merged.into_iter().filter(|(_, a)| !a.is_zero()).collect();
            let slack = match row.rel {
                Relation::Le => Some((next_slack, Q::ONE)),
                Relation::Ge => Some((next_slack, Q::ONE.neg())),
                Relation::Eq => None,
            };
            if let Some(s) = &slack {
                line.push(s.clone());
                next_slack += 1;
            }
            let mut b = row.rhs.clone();
            if residual.is_negative() {
                for (_, v) in line.iter_mut() {
                    *v = v.neg();
                }
                b = b.neg();
            }
            let usable = slack.and_then(|(s, _)| entry(&line, s).filter(|v| v.is_positive()).map(|_| s));
            basic_slack.push(usable);
            rows.push(line);
            beta.push(b);
        }

        let art_rows: Vec<usize> = (0..m).filter(|&i| basic_slack[i].is_none()).collect();
        let first_art = n + slack_count;
        let total = first_art + art_rows.len();
        let mut basis = vec![0usize; m];
        for (k, &i) in art_rows.iter().enumerate() {
            rows[i].push((first_art + k, Q::ONE));
            basis[i] = first_art + k;
        }
        for i in 0..m {
            if let Some(s) = basic_slack[i] {
                basis[i] = s;
            }
        }
        let mut lo = model.lo.clone();
        lo.resize(total, Q::ZERO);
        let mut hi: Vec<Option<Q>> = model.hi.iter().cloned().map(Some).collect();
        hi.resize(total, None);
        let mut basic_row = vec![None; total];
        for (i, &b) in basis.iter().enumerate() {
            basic_row[b] = Some(i);
        }
        let x = lo.clone();
        let mut tab = Tableau {
            rows,
            beta,
            basis,
            basic_row,
            x,
            lo,
            hi,
            d: Vec::new(),
            pivots: 0,
        };
        tab.recompute_basics();

        let mut cost = vec![Q::ZERO; total];
        cost[..n].clone_from_slice(&model.cost);
        let mut warm = WarmLp {
            model,
            tab,
            cost,
            dual_ready: false,
        };

        if crossed {
            return Ok((warm, LpOutcome::Infeasible));
        }
        if !art_rows.is_empty() {
            let mut phase1 = vec![Q::ZERO; total];
            for c in phase1.iter_mut().skip(first_art) {
                *c = Q::ONE;
            }
            warm.tab.set_reduced_costs(&phase1);
            warm.tab.primal()?;
            if (first_art..total).any(|j| warm.tab.x[j].is_positive()) {
                return Ok((warm, LpOutcome::Infeasible));
            }
            // Artificials are pinned to zero from now on; the nonbasic ones
            // can never move again, so their columns are dropped.
            let tab = &mut warm.tab;
            for j in first_art..total {
                tab.hi[j] = Some(Q::ZERO);
            }
            for row in tab.rows.iter_mut() {
                row.retain(|(j, _)| *j < first_art || tab.basic_row[*j].is_some());
            }
        }
        warm.tab.set_reduced_costs(&warm.cost);
        warm.tab.primal()?;
        warm.dual_ready = true;
        let outcome = warm.outcome();
        Ok((warm, outcome))
    }

    /// Re-solves with new bounds on the structural columns.
    pub fn resolve(&mut self, lo: &[Q], hi: &[Q]) -> Result<LpOutcome, Unbounded> {
        let n = self.model.lo.len();
        if (0..n).any(|j| lo[j] > hi[j]) {
            return Ok(LpOutcome::Infeasible);
        }
        let tab = &mut self.tab;
        let mut warm = self.dual_ready;
        for j in 0..tab.x.len() {
            if j < n {
                tab.lo[j] = lo[j].clone();
                tab.hi[j] = Some(hi[j].clone());
            }
            if tab.basic_row[j].is_some() {
                continue;
            }
            // Put every nonbasic column on the bound its reduced cost
            // prefers; ties keep the side it was on.
            let was_upper = tab.hi[j].is_some() && tab.x[j] > tab.lo[j];
            let d = &tab.d[j];
            tab.x[j] = if d.is_negative() || (d.is_zero() && was_upper) {
                match &tab.hi[j] {
                    Some(u) => u.clone(),
                    None => {
                        warm = false;
                        tab.lo[j].clone()
                    }
                }
            } else {
                tab.lo[j].clone()
            };
        }
        if !warm {
            let mut model = self.model.clone();
            model.lo = lo.to_vec();
            model.hi = hi.to_vec();
            let (fresh, outcome) = WarmLp::solve(model)?;
            let pivots = self.tab.pivots;
            *self = fresh;
            self.tab.pivots += pivots;
            return Ok(outcome);
        }
        tab.recompute_basics();
        if !tab.dual() {
            return Ok(LpOutcome::Infeasible);
        }
        Ok(self.outcome())
    }

    fn outcome(&self) -> LpOutcome {
        let n = self.model.lo.len();
        let x: Vec<Q> = self.tab.x[..n].to_vec();
        let value = x
            .iter()
            .zip(&self.model.cost)
            .filter(|(_, c)| !c.is_zero())
            .fold(Q::ZERO, |acc, (v, c)| acc.add(&v.mul(c)));
        LpOutcome::Optimal { value, x }
    }

    /// Pivots performed so far, across all solves.
    pub fn pivots(&self) -> usize {
        self.tab.pivots
    }
}

/// One-shot solve.
pub(crate) fn solve(model: &LpModel) -> Result<LpOutcome, Unbounded> {
    WarmLp::solve(model.clone()).map(|(_, outcome)| outcome)
}
