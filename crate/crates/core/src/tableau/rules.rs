//! Linear constraint blocks generated by the completion rules.
//!
//! Each function allocates its fresh variables from a [`VarPool`] and
//! returns the constraints plus the bound expressions that the rule attaches
//! to its conclusions. Keeping the blocks separate from the saturation loop
//! lets them be checked in isolation against the connectives they encode.

use crate::linear::{LinearConstraint, LinearExpr, VarId, VarKind};
use crate::milp::MipProblem;
use crate::rational::{int, one, Rat};

/// Registry of MIP variables created during saturation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VarPool {
    vars: Vec<(VarKind, String)>,
}

impl VarPool {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self, kind: VarKind, label: impl Into<String>) -> VarId {
        self.vars.push((kind, label.into()));
        VarId((self.vars.len() - 1) as u32)
    }

    /// Rational variable in `[0,1]`.
    pub fn unit(&mut self, label: impl Into<String>) -> VarId {
        self.fresh(VarKind::unit(), label)
    }

    pub fn binary(&mut self, label: impl Into<String>) -> VarId {
        self.fresh(VarKind::Binary, label)
    }

    pub fn bounded(&mut self, lo: Rat, hi: Rat, label: impl Into<String>) -> VarId {
        self.fresh(VarKind::Continuous { lo, hi }, label)
    }

    pub fn kind(&self, v: VarId) -> &VarKind {
        &self.vars[v.index()].0
    }

    pub fn label(&self, v: VarId) -> &str {
        &self.vars[v.index()].1
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn binaries(&self) -> usize {
        self.vars.iter().filter(|(k, _)| k.is_binary()).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &VarKind, &str)> {
        self.vars
            .iter()
            .enumerate()
            .map(|(i, (k, l))| (VarId(i as u32), k, l.as_str()))
    }

    pub fn to_problem(&self, constraints: &[LinearConstraint], objective: Option<VarId>) -> MipProblem {
        let mut p = MipProblem::new();
        for (k, _) in &self.vars {
            p.add_var(k.clone());
        }
        for c in constraints {
            p.add_constraint(c.clone());
        }
        p.set_objective(objective);
        p
    }
}

/// Constraints plus the bounds for the rule's conclusions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub constraints: Vec<LinearConstraint>,
    pub outputs: Vec<LinearExpr>,
    pub controls: Vec<VarId>,
}

fn var(v: VarId) -> LinearExpr {
    LinearExpr::var(v)
}

/// Zadeh disjunction: `x1 + x2 = l, x1 <= y, x2 <= 1 - y`.
pub fn zadeh_or(pool: &mut VarPool, l: &LinearExpr) -> Block {
    let x1 = pool.unit("or.left");
    let x2 = pool.unit("or.right");
    let y = pool.binary("or.y");
    Block {
        constraints: vec![
            LinearConstraint::eq(var(x1) + var(x2), l.clone()),
            LinearConstraint::le(x1, y),
            LinearConstraint::le(x2, var(y).complement()),
        ],
        outputs: vec![var(x1), var(x2)],
        controls: vec![y],
    }
}

/// Zadeh universal restriction `⟨a:∀R.C, l1⟩`, `⟨(a,b):R, l2⟩`:
/// `x + y >= l1, x <= 1 - y, l1 + l2 <= 2 - y`; `x` bounds the filler.
pub fn zadeh_forall(pool: &mut VarPool, l1: &LinearExpr, l2: &LinearExpr) -> Block {
    let x = pool.unit("all.filler");
    let y = pool.binary("all.y");
    Block {
        constraints: vec![
            LinearConstraint::ge(var(x) + var(y), l1.clone()),
            LinearConstraint::le(x, var(y).complement()),
            LinearConstraint::le(l1.clone() + l2.clone(), LinearExpr::constant(int(2)) - var(y)),
        ],
        outputs: vec![var(x)],
        controls: vec![y],
    }
}

/// Lukasiewicz conjunction (and, with the role bound first, existential
/// restriction): `y <= 1 - l, x_i <= 1 - y, x1 + x2 = l + 1 - y`.
pub fn luk_and(pool: &mut VarPool, l: &LinearExpr) -> Block {
    let x1 = pool.unit("and.left");
    let x2 = pool.unit("and.right");
    let y = pool.binary("and.y");
    let not_y = var(y).complement();
    Block {
        constraints: vec![
            LinearConstraint::le(y, l.complement()),
            LinearConstraint::le(x1, not_y.clone()),
            LinearConstraint::le(x2, not_y.clone()),
            LinearConstraint::eq(var(x1) + var(x2), l.clone() + not_y),
        ],
        outputs: vec![var(x1), var(x2)],
        controls: vec![y],
    }
}

/// Lukasiewicz disjunction: `x1 + x2 = l`.
pub fn luk_or(pool: &mut VarPool, l: &LinearExpr) -> Block {
    let x1 = pool.unit("or.left");
    let x2 = pool.unit("or.right");
    Block {
        constraints: vec![LinearConstraint::eq(var(x1) + var(x2), l.clone())],
        outputs: vec![var(x1), var(x2)],
        controls: vec![],
    }
}

/// Lukasiewicz existential restriction; outputs `[role bound, filler bound]`.
pub fn luk_exists(pool: &mut VarPool, l: &LinearExpr) -> Block {
    luk_and(pool, l)
}

/// Lukasiewicz universal restriction: `x >= l1 + l2 - 1, x <= y,
/// l1 + l2 - 1 <= y, l1 + l2 >= y`.
pub fn luk_forall(pool: &mut VarPool, l1: &LinearExpr, l2: &LinearExpr) -> Block {
    let x = pool.unit("all.filler");
    let y = pool.binary("all.y");
    let sum = l1.clone() + l2.clone();
    let sum_m1 = sum.clone() - LinearExpr::constant(one());
    Block {
        constraints: vec![
            LinearConstraint::ge(x, sum_m1.clone()),
            LinearConstraint::le(x, y),
            LinearConstraint::le(sum_m1, y),
            LinearConstraint::ge(sum, y),
        ],
        outputs: vec![var(x)],
        controls: vec![y],
    }
}
