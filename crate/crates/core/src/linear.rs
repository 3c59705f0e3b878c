//! Linear expressions and constraints over rational and 0-1 variables.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{fmt_short, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarKind {
    /// Rational variable with finite bounds `lo <= v <= hi`.
    Continuous { lo: Rat, hi: Rat },
    /// 0-1 control variable.
    Binary,
}

impl VarKind {
    pub fn unit() -> Self {
        VarKind::Continuous {
            lo: Rat::zero(),
            hi: Rat::one(),
        }
    }

    pub fn is_binary(&self) -> bool {
        matches!(self, VarKind::Binary)
    }

    pub fn bounds(&self) -> (Rat, Rat) {
        match self {
            VarKind::Continuous { lo, hi } => (lo.clone(), hi.clone()),
            VarKind::Binary => (Rat::zero(), Rat::one()),
        }
    }
}

/// `sum(coef * var) + constant`, kept sparse with no zero coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LinearExpr {
    terms: BTreeMap<VarId, Rat>,
    constant: Rat,
}

impl LinearExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rat) -> Self {
        LinearExpr {
            terms: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn var(v: VarId) -> Self {
        Self::term(v, Rat::one())
    }

    pub fn term(v: VarId, coef: Rat) -> Self {
        let mut e = Self::zero();
        e.add_term(v, coef);
        e
    }

    /// `1 - self`.
    pub fn complement(&self) -> Self {
        LinearExpr::constant(Rat::one()) - self.clone()
    }

    pub fn add_term(&mut self, v: VarId, coef: Rat) {
        if coef.is_zero() {
            return;
        }
        let slot = self.terms.entry(v).or_insert_with(Rat::zero);
        *slot += coef;
        if slot.is_zero() {
            self.terms.remove(&v);
        }
    }

    pub fn add_constant(&mut self, c: &Rat) {
        self.constant += c;
    }

    pub fn terms(&self) -> impl Iterator<Item = (VarId, &Rat)> + '_ {
        self.terms.iter().map(|(v, c)| (*v, c))
    }

    pub fn coef(&self, v: VarId) -> Rat {
        self.terms.get(&v).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_part(&self) -> &Rat {
        &self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<&Rat> {
        self.is_constant().then_some(&self.constant)
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.terms.keys().copied()
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        LinearExpr {
            terms: self.terms.iter().map(|(v, c)| (*v, c * k)).collect(),
            constant: &self.constant * k,
        }
    }

    /// Evaluates with `value(v)` for each variable.
    pub fn eval_with(&self, mut value: impl FnMut(VarId) -> Rat) -> Rat {
        let mut acc = self.constant.clone();
        for (v, c) in &self.terms {
            acc += c * value(*v);
        }
        acc
    }

    pub fn eval(&self, assignment: &[Rat]) -> Rat {
        self.eval_with(|v| assignment[v.index()].clone())
    }

    /// Replaces every occurrence of `v` by `by`.
    pub fn substitute(&self, v: VarId, by: &LinearExpr) -> Self {
        match self.terms.get(&v) {
            None => self.clone(),
            Some(c) => {
                let mut out = self.clone();
                out.terms.remove(&v);
                out + by.scale(c)
            }
        }
    }
}

impl From<Rat> for LinearExpr {
    fn from(c: Rat) -> Self {
        LinearExpr::constant(c)
    }
}

impl From<VarId> for LinearExpr {
    fn from(v: VarId) -> Self {
        LinearExpr::var(v)
    }
}

impl Add for LinearExpr {
    type Output = LinearExpr;
    fn add(mut self, rhs: LinearExpr) -> LinearExpr {
        for (v, c) in rhs.terms {
            self.add_term(v, c);
        }
        self.constant += rhs.constant;
        self
    }
}

impl Sub for LinearExpr {
    type Output = LinearExpr;
    fn sub(self, rhs: LinearExpr) -> LinearExpr {
        self + (-rhs)
    }
}

impl Neg for LinearExpr {
    type Output = LinearExpr;
    fn neg(self) -> LinearExpr {
        LinearExpr {
            terms: self.terms.into_iter().map(|(v, c)| (v, -c)).collect(),
            constant: -self.constant,
        }
    }
}

impl Mul<&Rat> for LinearExpr {
    type Output = LinearExpr;
    fn mul(self, k: &Rat) -> LinearExpr {
        self.scale(k)
    }
}

impl fmt::Display for LinearExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.terms {
            let neg = *c < Rat::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if mag.is_one() {
                write!(f, "{v}")?;
            } else {
                write!(f, "{}*{v}", fmt_short(&mag))?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", fmt_short(&self.constant))?;
        } else if !self.constant.is_zero() {
            let neg = self.constant < Rat::zero();
            let mag = if neg {
                -self.constant.clone()
            } else {
                self.constant.clone()
            };
            write!(f, " {} {}", if neg { "-" } else { "+" }, fmt_short(&mag))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Ge => ">=",
            Relation::Le => "<=",
            Relation::Eq => "=",
        }
    }

    pub fn flipped(self) -> Relation {
        match self {
            Relation::Ge => Relation::Le,
            Relation::Le => Relation::Ge,
            Relation::Eq => Relation::Eq,
        }
    }

    pub fn holds(self, lhs: &Rat, rhs: &Rat) -> bool {
        match self {
            Relation::Ge => lhs >= rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearConstraint {
    pub lhs: LinearExpr,
    pub relation: Relation,
    pub rhs: LinearExpr,
}

impl LinearConstraint {
    pub fn new(lhs: impl Into<LinearExpr>, relation: Relation, rhs: impl Into<LinearExpr>) -> Self {
        LinearConstraint {
            lhs: lhs.into(),
            relation,
            rhs: rhs.into(),
        }
    }

    pub fn ge(lhs: impl Into<LinearExpr>, rhs: impl Into<LinearExpr>) -> Self {
        Self::new(lhs, Relation::Ge, rhs)
    }

    pub fn le(lhs: impl Into<LinearExpr>, rhs: impl Into<LinearExpr>) -> Self {
        Self::new(lhs, Relation::Le, rhs)
    }

    pub fn eq(lhs: impl Into<LinearExpr>, rhs: impl Into<LinearExpr>) -> Self {
        Self::new(lhs, Relation::Eq, rhs)
    }

    /// Moves everything to the left: returns `(terms, relation, rhs_constant)`
    /// with `terms.constant_part() == 0`.
    pub fn normalized(&self) -> (LinearExpr, Relation, Rat) {
        let mut diff = self.lhs.clone() - self.rhs.clone();
        let rhs = -diff.constant_part().clone();
        diff.constant = Rat::zero();
        (diff, self.relation, rhs)
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.lhs.vars().chain(self.rhs.vars())
    }

    pub fn holds_with(&self, mut value: impl FnMut(VarId) -> Rat) -> bool {
        let l = self.lhs.eval_with(&mut value);
        let r = self.rhs.eval_with(&mut value);
        self.relation.holds(&l, &r)
    }

    pub fn holds(&self, assignment: &[Rat]) -> bool {
        self.holds_with(|v| assignment[v.index()].clone())
    }

    pub fn substitute(&self, v: VarId, by: &LinearExpr) -> Self {
        LinearConstraint {
            lhs: self.lhs.substitute(v, by),
            relation: self.relation,
            rhs: self.rhs.substitute(v, by),
        }
    }
}

impl fmt::Display for LinearConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.relation.symbol(), self.rhs)
    }
}
