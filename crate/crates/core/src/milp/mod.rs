//! Exact-rational bounded mixed-integer linear programming.
//!
//! Problems have finitely bounded rational variables and 0-1 control
//! variables. [`mip_minimize`] runs branch-and-bound over the binaries with
//! exact simplex relaxations and certifies every optimum by re-substitution.

mod bnb;
mod dump;
mod propagate;
mod q;
pub(crate) mod simplex;

use thiserror::Error;

use crate::linear::{LinearConstraint, VarId, VarKind};
use crate::rational::Rat;

use q::Q;

pub use bnb::{mip_feasible, mip_minimize};
pub use dump::{dump_problem, parse_problem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MilpError {
    #[error("constraint references undeclared variable {0}")]
    UndeclaredVariable(VarId),
    #[error("variable {0} has empty bounds")]
    InvalidBounds(VarId),
    #[error("relaxation is unbounded; every variable should be bounded")]
    Unbounded,
    #[error("solution failed exact re-substitution: {0}")]
    Certification(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MipProblem {
    vars: Vec<VarKind>,
    constraints: Vec<LinearConstraint>,
    objective: Option<VarId>,
}

impl MipProblem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, kind: VarKind) -> VarId {
        self.vars.push(kind);
        VarId((self.vars.len() - 1) as u32)
    }

    pub fn add_continuous(&mut self, lo: Rat, hi: Rat) -> VarId {
        self.add_var(VarKind::Continuous { lo, hi })
    }

    pub fn add_binary(&mut self) -> VarId {
        self.add_var(VarKind::Binary)
    }

    pub fn add_constraint(&mut self, c: LinearConstraint) {
        self.constraints.push(c);
    }

    pub fn set_objective(&mut self, v: Option<VarId>) {
        self.objective = v;
    }

    pub fn objective(&self) -> Option<VarId> {
        self.objective
    }

    pub fn vars(&self) -> &[VarKind] {
        &self.vars
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn binary_count(&self) -> usize {
        self.vars.iter().filter(|k| k.is_binary()).count()
    }

    /// Replaces variable `v` by a continuous variable pinned to `value`.
    pub fn fix(&mut self, v: VarId, value: Rat) {
        self.vars[v.index()] = VarKind::Continuous {
            lo: value.clone(),
            hi: value,
        };
    }

    pub fn validate(&self) -> Result<(), MilpError> {
        for (i, k) in self.vars.iter().enumerate() {
            if let VarKind::Continuous { lo, hi } = k {
                if lo > hi {
                    return Err(MilpError::InvalidBounds(VarId(i as u32)));
                }
            }
        }
        let n = self.vars.len();
        let check = |v: VarId| {
            if v.index() >= n {
                Err(MilpError::UndeclaredVariable(v))
            } else {
                Ok(())
            }
        };
        for c in &self.constraints {
            for v in c.vars() {
                check(v)?;
            }
        }
        if let Some(v) = self.objective {
            check(v)?;
        }
        Ok(())
    }

    /// Exact check of bounds, integrality and every constraint.
    pub fn certify(&self, assignment: &[Rat]) -> Result<(), MilpError> {
        if assignment.len() != self.vars.len() {
            return Err(MilpError::Certification("assignment length".into()));
        }
        for (i, (k, x)) in self.vars.iter().zip(assignment).enumerate() {
            let ok = match k {
                VarKind::Continuous { lo, hi } => lo <= x && x <= hi,
                VarKind::Binary => x == &crate::rational::zero() || x == &crate::rational::one(),
            };
            if !ok {
                return Err(MilpError::Certification(format!("v{i} = {x} out of domain")));
            }
        }
        for c in &self.constraints {
            if !c.holds(assignment) {
                return Err(MilpError::Certification(format!("violated: {c}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MipStatus {
    Infeasible,
    Optimal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MipResult {
    pub status: MipStatus,
    /// Optimal objective value; zero for pure feasibility problems.
    pub value: Option<Rat>,
    pub assignment: Vec<Rat>,
    /// Branch-and-bound nodes explored across all components.
    pub nodes: usize,
    /// Simplex pivots spent across all nodes.
    pub pivots: usize,
}

impl MipResult {
    pub fn infeasible(nodes: usize, pivots: usize) -> Self {
        MipResult {
            status: MipStatus::Infeasible,
            value: None,
            assignment: Vec::new(),
            nodes,
            pivots,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == MipStatus::Optimal
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpResult {
    Infeasible,
    Optimal { value: Rat, assignment: Vec<Rat> },
}

/// Solves the LP relaxation (binaries relaxed to `[0,1]`) exactly.
pub fn lp_minimize_exact(problem: &MipProblem) -> Result<LpResult, MilpError> {
    problem.validate()?;
    let n = problem.vars.len();
    let (lo, hi): (Vec<Q>, Vec<Q>) = problem
        .vars
        .iter()
        .map(|k| {
            let (l, h) = k.bounds();
            (Q::from_rat(&l), Q::from_rat(&h))
        })
        .unzip();
    let rows = problem
        .constraints
        .iter()
        .map(|c| {
            let (terms, rel, rhs) = c.normalized();
            simplex::Row {
                coefs: terms.terms().map(|(v, a)| (v.index(), Q::from_rat(a))).collect(),
                rel,
                rhs: Q::from_rat(&rhs),
            }
        })
        .collect();
    let mut cost = vec![Q::ZERO; n];
    if let Some(v) = problem.objective {
        cost[v.index()] = Q::ONE;
    }
    let model = simplex::LpModel { lo, hi, rows, cost };
    match simplex::solve(&model).map_err(|_| MilpError::Unbounded)? {
        simplex::LpOutcome::Infeasible => Ok(LpResult::Infeasible),
        simplex::LpOutcome::Optimal { value, x } => Ok(LpResult::Optimal {
            value: value.to_rat(),
            assignment: x.iter().map(Q::to_rat).collect(),
        }),
    }
}
