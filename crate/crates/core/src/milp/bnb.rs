//! Branch-and-bound driver.
//!
//! The root domain is tightened by bound propagation and probing on the
//! binaries. Rows that still constrain unfixed variables split into
//! independent components; only the component holding the objective
//! variable is optimised, the others just need a feasible point. Every node
//! propagates its branching decision before its exact LP relaxation is
//! solved. The relaxation of a component is built once, over the variables
//! and rows still live at its root, and every later node re-solves it from
//! the previous basis under the node's tighter bounds.

use super::propagate::{Domain, Propagator};
use super::q::Q;
use super::simplex::{LpModel, LpOutcome, Row, WarmLp};
use super::{MilpError, MipProblem, MipResult, MipStatus};
use crate::linear::Relation;
use crate::rational::Rat;

/// Probing passes over all binaries at the root.
const ROOT_PROBING_ROUNDS: usize = 3;
/// Probing passes at every branch-and-bound node.
const NODE_PROBING_ROUNDS: usize = 1;

type RowData = (Vec<(usize, Q)>, Relation, Q);

/// Minimal and maximal activity of a row over the domain.
fn activity(coefs: &[(usize, Q)], dom: &Domain) -> (Q, Q) {
    let mut lo = Q::ZERO;
    let mut hi = Q::ZERO;
    for (j, a) in coefs {
        let (at_lo, at_hi) = (a.mul(&dom.lo[*j]), a.mul(&dom.hi[*j]));
        if a.is_positive() {
            lo = lo.add(&at_lo);
            hi = hi.add(&at_hi);
        } else {
            lo = lo.add(&at_hi);
            hi = hi.add(&at_lo);
        }
    }
    (lo, hi)
}

/// Distance of a value from 1/2 (smaller is more fractional).
fn dist_from_half(v: &Q) -> Q {
    v.sub(&Q::Small(1, 2)).abs()
}

/// True when the row holds at every point of the domain.
fn implied(row: &RowData, dom: &Domain) -> bool {
    let (lo, hi) = activity(&row.0, dom);
    match row.1 {
        Relation::Le => hi <= row.2,
        Relation::Ge => lo >= row.2,
        Relation::Eq => lo == row.2 && hi == row.2,
    }
}

/// Groups the rows that are not implied by the bounds into components
/// connected through unfixed variables.
fn components(rows: &[RowData], dom: &Domain) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = dom.lo.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut live = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if implied(row, dom) {
            continue;
        }
        let mut free = row.0.iter().map(|(j, _)| *j).filter(|&j| !dom.is_fixed(j));
        let Some(first) = free.next() else {
            // Cannot happen after successful propagation; keep the row so
            // the relaxation reports the conflict.
            live.push((i, None));
            continue;
        };
        for j in free {
            let a = find(&mut parent, first);
            let b = find(&mut parent, j);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        live.push((i, Some(first)));
    }
    let mut by_root: std::collections::BTreeMap<usize, (Vec<usize>, Vec<usize>)> = Default::default();
    let mut orphans = Vec::new();
    for (i, first) in live {
        match first {
            Some(f) => {
                let r = find(&mut parent, f);
                by_root.entry(r).or_default().1.push(i);
            }
            None => orphans.push(i),
        }
    }
    for j in 0..n {
        if dom.is_fixed(j) {
            continue;
        }
        let r = find(&mut parent, j);
        if let Some(entry) = by_root.get_mut(&r) {
            entry.0.push(j);
        }
    }
    let mut out: Vec<_> = by_root.into_values().collect();
    if !orphans.is_empty() {
        out.push((Vec::new(), orphans));
    }
    out
}

/// Best objective value found and the assignment attaining it.
type Incumbent = (Q, Vec<(usize, Q)>);

struct Search<'a> {
    rows: &'a [RowData],
    prop: &'a Propagator,
    vars: Vec<usize>,
    row_ids: Vec<usize>,
    objective: Option<usize>,
    lp: Option<Relaxed>,
}

/// The component's relaxation: its columns, the objective value carried by
/// variables fixed at the root, and the reusable LP.
struct Relaxed {
    cols: Vec<usize>,
    offset: Q,
    lp: WarmLp,
}

enum Relaxation {
    Infeasible,
    Optimal { value: Q, point: Vec<(usize, Q)> },
}

impl Search<'_> {
    /// Exact LP relaxation at `dom`.
    fn relax(&mut self, dom: &Domain, pivots: &mut usize) -> Result<Relaxation, MilpError> {
        let Some(relaxed) = &mut self.lp else {
            return self.relax_root(dom, pivots);
        };
        let lo: Vec<Q> = relaxed.cols.iter().map(|&j| dom.lo[j].clone()).collect();
        let hi: Vec<Q> = relaxed.cols.iter().map(|&j| dom.hi[j].clone()).collect();
        let before = relaxed.lp.pivots();
        let outcome = relaxed.lp.resolve(&lo, &hi).map_err(|_| MilpError::Unbounded)?;
        *pivots += relaxed.lp.pivots() - before;
        Ok(match outcome {
            LpOutcome::Infeasible => Relaxation::Infeasible,
            LpOutcome::Optimal { value, x } => Relaxation::Optimal {
                value: value.add(&relaxed.offset),
                point: relaxed.cols.iter().copied().zip(x).collect(),
            },
        })
    }

    /// Builds the LP over the variables still unfixed at the component
    /// root and the rows not implied there, and solves it cold.
    fn relax_root(&mut self, dom: &Domain, pivots: &mut usize) -> Result<Relaxation, MilpError> {
        let cols: Vec<usize> = self.vars.iter().copied().filter(|&j| !dom.is_fixed(j)).collect();
        let mut local = std::collections::HashMap::with_capacity(cols.len());
        for (k, &j) in cols.iter().enumerate() {
            local.insert(j, k);
        }
        let mut lp_rows = Vec::new();
        for &i in &self.row_ids {
            let row = &self.rows[i];
            if implied(row, dom) {
                continue;
            }
            let mut rhs = row.2.clone();
            let mut coefs = Vec::new();
            for (j, a) in &row.0 {
                match local.get(j) {
                    Some(&k) => coefs.push((k, a.clone())),
                    None => rhs = rhs.sub_mul(a, &dom.lo[*j]),
                }
            }
            if coefs.is_empty() {
                let holds = match row.1 {
                    Relation::Le => !rhs.is_negative(),
                    Relation::Ge => !rhs.is_positive(),
                    Relation::Eq => rhs.is_zero(),
                };
                if !holds {
                    return Ok(Relaxation::Infeasible);
                }
                continue;
            }
            lp_rows.push(Row {
                coefs,
                rel: row.1,
                rhs,
            });
        }
        let mut cost = vec![Q::ZERO; cols.len()];
        let mut offset = Q::ZERO;
        if let Some(o) = self.objective {
            match local.get(&o) {
                Some(&k) => cost[k] = Q::ONE,
                None => offset = dom.lo[o].clone(),
            }
        }
        let model = LpModel {
            lo: cols.iter().map(|&j| dom.lo[j].clone()).collect(),
            hi: cols.iter().map(|&j| dom.hi[j].clone()).collect(),
            rows: lp_rows,
            cost,
        };
        let (lp, outcome) = WarmLp::solve(model).map_err(|_| MilpError::Unbounded)?;
        *pivots += lp.pivots();
        let result = match outcome {
            LpOutcome::Infeasible => Relaxation::Infeasible,
            LpOutcome::Optimal { value, x } => Relaxation::Optimal {
                value: value.add(&offset),
                point: cols.iter().copied().zip(x).collect(),
            },
        };
        self.lp = Some(Relaxed { cols, offset, lp });
        Ok(result)
    }

    /// Depth-first branch-and-bound. Returns the best point found (as
    /// values of the component variables), explored nodes and pivots.
    fn run(&mut self, root: Domain) -> Result<(Option<Incumbent>, usize, usize), MilpError> {
        let mut stack = vec![root];
        let mut best: Option<Incumbent> = None;
        let mut nodes = 0usize;
        let mut pivots = 0usize;
        while let Some(mut dom) = stack.pop() {
            nodes += 1;
            if let (Some(o), Some((b, _))) = (self.objective, &best) {
                // Only strictly better points are of interest.
                if !dom.cut_below(o, b) || !self.prop.propagate(&mut dom, Some(&[o])) {
                    continue;
                }
            }
            if nodes > 1 && !self.prop.probe(&mut dom, NODE_PROBING_ROUNDS) {
                continue;
            }
            let (value, point) = match self.relax(&dom, &mut pivots)? {
                Relaxation::Infeasible => continue,
                Relaxation::Optimal { value, point } => (value, point),
            };
            if let Some((b, _)) = &best {
                if value >= *b {
                    continue;
                }
            }
            let branch = point
                .iter()
                .filter(|(j, v)| self.prop.is_binary(*j) && !v.is_integer())
                .min_by(|(a, va), (b, vb)| dist_from_half(va).cmp(&dist_from_half(vb)).then(a.cmp(b)))
                .map(|(j, v)| (*j, v.clone()));
            match branch {
                None => {
                    let mut values: Vec<(usize, Q)> = self
                        .vars
                        .iter()
                        .filter(|&&j| dom.is_fixed(j))
                        .map(|&j| (j, dom.lo[j].clone()))
                        .collect();
                    values.extend(point);
                    best = Some((value, values));
                    if self.objective.is_none() {
                        break;
                    }
                }
                Some((k, v)) => {
                    let up_first = v >= Q::Small(1, 2);
                    let order = if up_first { [Q::ZERO, Q::ONE] } else { [Q::ONE, Q::ZERO] };
                    for val in order {
                        let mut child = dom.clone();
                        child.fix(k, val);
                        if self.prop.propagate(&mut child, Some(&[k])) {
                            stack.push(child);
                        }
                    }
                }
            }
        }
        Ok((best, nodes, pivots))
    }
}

/// Exact minimum of the objective variable (or any feasible point when the
/// problem has no objective).
pub fn mip_minimize(problem: &MipProblem) -> Result<MipResult, MilpError> {
    problem.validate()?;
    let rows: Vec<RowData> = problem
        .constraints
        .iter()
        .map(|c| {
            let (terms, rel, rhs) = c.normalized();
            let coefs = terms
                .terms()
                .filter(|(_, a)| !num_traits::Zero::is_zero(*a))
                .map(|(v, a)| (v.index(), Q::from_rat(a)))
                .collect();
            (coefs, rel, Q::from_rat(&rhs))
        })
        .collect();
    let (lo, hi): (Vec<Q>, Vec<Q>) = problem
        .vars
        .iter()
        .map(|k| {
            let (l, h) = k.bounds();
            (Q::from_rat(&l), Q::from_rat(&h))
        })
        .unzip();
    let binary: Vec<bool> = problem.vars.iter().map(|k| k.is_binary()).collect();
    let mut dom = Domain::new(lo, hi);
    let prop = Propagator::new(rows.iter().map(|r| (&r.0[..], r.1, &r.2)), binary, &dom);
    if !prop.propagate(&mut dom, None) || !prop.probe(&mut dom, ROOT_PROBING_ROUNDS) {
        return Ok(MipResult::infeasible(0, 0));
    }
    let objective = problem.objective.map(|v| v.index());
    let mut assignment: Vec<Rat> = dom.lo.iter().map(Q::to_rat).collect();
    let mut nodes = 0;
    let mut pivots = 0;
    for (vars, row_ids) in components(&rows, &dom) {
        let holds_obj = objective.is_some_and(|o| vars.contains(&o));
        let mut search = Search {
            rows: &rows,
            prop: &prop,
            vars,
            row_ids,
            objective: if holds_obj { objective } else { None },
            lp: None,
        };
        let (best, n, p) = search.run(dom.clone())?;
        nodes += n;
        pivots += p;
        match best {
            None => return Ok(MipResult::infeasible(nodes, pivots)),
            Some((_, values)) => {
                for (j, v) in values {
                    assignment[j] = v.to_rat();
                }
            }
        }
    }
    problem.certify(&assignment)?;
    let value = match objective {
        Some(o) => assignment[o].clone(),
        None => crate::rational::zero(),
    };
    Ok(MipResult {
        status: MipStatus::Optimal,
        value: Some(value),
        assignment,
        nodes,
        pivots,
    })
}

/// True iff some assignment satisfies every constraint.
pub fn mip_feasible(problem: &MipProblem) -> Result<bool, MilpError> {
    let mut p = problem.clone();
    p.set_objective(None);
    Ok(mip_minimize(&p)?.is_optimal())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::{LinearConstraint, LinearExpr};
    use crate::rational::{int, rat};

    #[test]
    fn binary_relieves_lower_bound() {
        let mut p = MipProblem::new();
        let x = p.add_continuous(int(0), int(1));
        let y = p.add_binary();
        p.add_constraint(LinearConstraint::ge(LinearExpr::var(x) + LinearExpr::var(y), int(1)));
        p.set_objective(Some(x));
        let r = mip_minimize(&p).unwrap();
        assert_eq!(r.value, Some(int(0)));
        assert_eq!(r.assignment[y.index()], int(1));
    }

    #[test]
    fn two_branches_take_smaller_optimum() {
        // y = 0 forces x = 1, y = 1 forces x >= 3/5.
        let mut p = MipProblem::new();
        let x = p.add_continuous(int(0), int(1));
        let y = p.add_binary();
        p.add_constraint(LinearConstraint::ge(x, LinearExpr::var(y).complement()));
        p.add_constraint(LinearConstraint::ge(x, LinearExpr::term(y, rat(3, 5))));
        p.set_objective(Some(x));
        assert_eq!(mip_minimize(&p).unwrap().value, Some(rat(3, 5)));
    }

    #[test]
    fn feasibility_examples() {
        assert!(mip_feasible(&MipProblem::new()).unwrap());
        let mut p = MipProblem::new();
        let y = p.add_binary();
        p.add_constraint(LinearConstraint::ge(y, rat(1, 2)));
        p.add_constraint(LinearConstraint::le(y, rat(1, 2)));
        assert!(!mip_feasible(&p).unwrap());
    }

    #[test]
    fn shoulder_membership_block_at_twenty_and_half() {
        // x1 <= 10 + 20y, x2 >= 1 - y, x1 >= 10y, x1 <= 30, x1 + 20 x2 >= 30y
        let mut p = MipProblem::new();
        let x1 = p.add_continuous(int(20), int(20));
        let x2 = p.add_continuous(rat(1, 2), rat(1, 2));
        let y = p.add_binary();
        let ly = LinearExpr::var(y);
        p.add_constraint(LinearConstraint::le(x1, LinearExpr::constant(int(10)) + ly.scale(&int(20))));
        p.add_constraint(LinearConstraint::ge(x2, ly.complement()));
        p.add_constraint(LinearConstraint::ge(x1, ly.scale(&int(10))));
        p.add_constraint(LinearConstraint::le(x1, int(30)));
        p.add_constraint(LinearConstraint::ge(
            LinearExpr::var(x1) + LinearExpr::term(x2, int(20)),
            ly.scale(&int(30)),
        ));
        assert!(mip_feasible(&p).unwrap());
    }

    #[test]
    fn independent_components_are_all_checked() {
        let mut p = MipProblem::new();
        let x = p.add_continuous(int(0), int(1));
        let a = p.add_continuous(int(0), int(1));
        let b = p.add_continuous(int(0), int(1));
        p.add_constraint(LinearConstraint::ge(x, rat(1, 4)));
        p.add_constraint(LinearConstraint::ge(LinearExpr::var(a) + LinearExpr::var(b), int(3)));
        p.set_objective(Some(x));
        assert_eq!(mip_minimize(&p).unwrap().status, MipStatus::Infeasible);
    }
}
