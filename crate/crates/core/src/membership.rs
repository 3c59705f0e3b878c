//! Piecewise-linear membership functions and their mixed-integer encodings.
//!
//! A [`PiecewiseLinearFn`] is a continuous function from a bounded rational
//! interval into `[0,1]`. Fuzzy concrete predicates and modifiers are both
//! represented this way. The encoders turn the graphs
//! `{(x,d) : f(x) >= d}` and `{(x,d) : f(x) <= d}` into linear constraints
//! over `x`, `d` and `n - 1` ordered 0-1 control variables for an `n`-piece
//! function.
//!
//! Piece `i` is selected when its selector `s_i = (1 - y_{i-1}) + y_i` is 0
//! (with `y_0 = 1`, `y_n = 0` and `y_1 >= y_2 >= ...`). Every piece
//! constraint `E >= 0` is written as `E >= E_min * s_i`, where `E_min` is the
//! minimum of `E` over the box `[k1,k2] x [0,1]`, so it is switched off
//! exactly when another piece is selected.

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::linear::{LinearConstraint, LinearExpr, VarId};
use crate::rational::{fmt_short, int, max_rat, min_rat, one, rat, zero, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MembershipError {
    #[error("empty domain [{0}, {1}]")]
    EmptyDomain(String, String),
    #[error("shape parameters must be ordered and inside the domain")]
    BadParameters,
    #[error("breakpoints must have increasing x values")]
    Unsorted,
    #[error("function jumps at x = {0}; only continuous functions are supported")]
    Discontinuous(String),
    #[error("value {0} outside [0,1]")]
    ValueOutOfRange(String),
    #[error("x = {0} outside the domain")]
    OutOfDomain(String),
    #[error("epsilon must be positive")]
    BadEpsilon,
    #[error("crisp ramp leaves the domain")]
    RampOutsideDomain,
    #[error("modifier functions must have domain [0,1]")]
    ModifierDomain,
}

/// `m * x + q` on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearPiece {
    pub lo: Rat,
    pub hi: Rat,
    pub slope: Rat,
    pub intercept: Rat,
}

impl LinearPiece {
    pub fn at(&self, x: &Rat) -> Rat {
        &self.slope * x + &self.intercept
    }

    fn min_on(&self, k1: &Rat, k2: &Rat) -> Rat {
        min_rat(&self.at(k1), &self.at(k2))
    }

    fn max_on(&self, k1: &Rat, k2: &Rat) -> Rat {
        max_rat(&self.at(k1), &self.at(k2))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparator {
    Le,
    Ge,
    Eq,
}

impl Comparator {
    pub fn holds(self, x: &Rat, k: &Rat) -> bool {
        match self {
            Comparator::Le => x <= k,
            Comparator::Ge => x >= k,
            Comparator::Eq => x == k,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Comparator::Le => "<=",
            Comparator::Ge => ">=",
            Comparator::Eq => "=",
        }
    }
}

/// The crisp set approximated by an ε-ramp function.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CrispShape {
    pub comparator: Comparator,
    pub k: Rat,
    pub epsilon: Rat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape<'a> {
    Trapezoid(&'a Rat, &'a Rat, &'a Rat, &'a Rat),
    Triangle(&'a Rat, &'a Rat, &'a Rat),
    LeftShoulder(&'a Rat, &'a Rat),
    RightShoulder(&'a Rat, &'a Rat),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiecewiseLinearFn {
    lo: Rat,
    hi: Rat,
    pieces: Vec<LinearPiece>,
    crisp: Option<CrispShape>,
}

impl PiecewiseLinearFn {
    /// Builds the function interpolating `points` (sorted by x). The first
    /// and last x give the domain. A vertical step is tolerated only at the
    /// very ends of the domain, where it is dropped.
    pub fn from_points(points: &[(Rat, Rat)]) -> Result<Self, MembershipError> {
        let mut pts: Vec<(Rat, Rat)> = Vec::with_capacity(points.len());
        for p in points {
            if pts.last() != Some(p) {
                pts.push(p.clone());
            }
        }
        if pts.len() >= 2 && pts[0].0 == pts[1].0 {
            pts.remove(0);
        }
        let n = pts.len();
        if n >= 2 && pts[n - 1].0 == pts[n - 2].0 {
            pts.pop();
        }
        if pts.len() < 2 {
            let (a, b) = points
                .first()
                .map(|p| (fmt_short(&p.0), fmt_short(&p.0)))
                .unwrap_or_default();
            return Err(MembershipError::EmptyDomain(a, b));
        }
        if let Some((_, y)) = pts.iter().find(|(_, y)| y.is_negative() || *y > one()) {
            return Err(MembershipError::ValueOutOfRange(fmt_short(y)));
        }
        let mut pieces: Vec<LinearPiece> = Vec::new();
        for w in pts.windows(2) {
            let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
            if x0 == x1 {
                return Err(MembershipError::Discontinuous(fmt_short(x0)));
            }
            if x0 > x1 {
                return Err(MembershipError::Unsorted);
            }
            let slope = (y1 - y0) / (x1 - x0);
            let intercept = y0 - &slope * x0;
            match pieces.last_mut() {
                Some(prev) if prev.slope == slope && prev.intercept == intercept => {
                    prev.hi = x1.clone();
                }
                _ => pieces.push(LinearPiece {
                    lo: x0.clone(),
                    hi: x1.clone(),
                    slope,
                    intercept,
                }),
            }
        }
        Ok(PiecewiseLinearFn {
            lo: pts[0].0.clone(),
            hi: pts[pts.len() - 1].0.clone(),
            pieces,
            crisp: None,
        })
    }

    pub fn constant(value: Rat, lo: Rat, hi: Rat) -> Result<Self, MembershipError> {
        Self::from_points(&[(lo, value.clone()), (hi, value)])
    }

    pub fn domain(&self) -> (&Rat, &Rat) {
        (&self.lo, &self.hi)
    }

    pub fn pieces(&self) -> &[LinearPiece] {
        &self.pieces
    }

    pub fn crisp(&self) -> Option<&CrispShape> {
        self.crisp.as_ref()
    }

    /// Breakpoints `(x, f(x))` including both domain ends.
    pub fn points(&self) -> Vec<(Rat, Rat)> {
        let mut out: Vec<(Rat, Rat)> = self.pieces.iter().map(|p| (p.lo.clone(), p.at(&p.lo))).collect();
        let last = self.pieces.last().expect("nonempty");
        out.push((last.hi.clone(), last.at(&last.hi)));
        out
    }

    pub fn eval(&self, x: &Rat) -> Result<Rat, MembershipError> {
        if *x < self.lo || *x > self.hi {
            return Err(MembershipError::OutOfDomain(fmt_short(x)));
        }
        let piece = self
            .pieces
            .iter()
            .find(|p| *x <= p.hi)
            .expect("x inside the domain");
        Ok(piece.at(x))
    }

    /// Value with constant extension beyond the domain ends.
    pub fn eval_clamped(&self, x: &Rat) -> Rat {
        let x = max_rat(&self.lo, &min_rat(x, &self.hi));
        self.eval(&x).expect("clamped into domain")
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.pieces.iter().all(|p| !p.slope.is_negative())
    }

    pub fn check_modifier_domain(&self) -> Result<(), MembershipError> {
        if self.lo == zero() && self.hi == one() {
            Ok(())
        } else {
            Err(MembershipError::ModifierDomain)
        }
    }

    /// Extends the domain to `[lo, hi]` by holding the end values constant.
    pub fn extended_to(&self, lo: &Rat, hi: &Rat) -> Self {
        let mut pts = Vec::new();
        if *lo < self.lo {
            pts.push((lo.clone(), self.eval_clamped(lo)));
        }
        pts.extend(self.points());
        if *hi > self.hi {
            pts.push((hi.clone(), self.eval_clamped(hi)));
        }
        let mut f = Self::from_points(&pts).expect("extension of a valid function");
        f.crisp = self.crisp.clone();
        f
    }

    /// `outer ∘ self`; `outer` must have domain `[0,1]`.
    pub fn then(&self, outer: &PiecewiseLinearFn) -> Result<Self, MembershipError> {
        outer.check_modifier_domain()?;
        let mut xs: Vec<Rat> = self.points().into_iter().map(|p| p.0).collect();
        let cuts: Vec<Rat> = outer.points().into_iter().map(|p| p.0).collect();
        for p in &self.pieces {
            if p.slope.is_zero() {
                continue;
            }
            for t in &cuts {
                let x = (t - &p.intercept) / &p.slope;
                if x > p.lo && x < p.hi {
                    xs.push(x);
                }
            }
        }
        xs.sort();
        xs.dedup();
        let pts: Vec<(Rat, Rat)> = xs
            .into_iter()
            .map(|x| {
                let y = outer.eval_clamped(&self.eval_clamped(&x));
                (x, y)
            })
            .collect();
        Self::from_points(&pts)
    }
}

impl fmt::Display for PiecewiseLinearFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pwl")?;
        for (x, y) in self.points() {
            write!(f, " ({},{})", fmt_short(&x), fmt_short(&y))?;
        }
        Ok(())
    }
}

fn inside(v: &Rat, lo: &Rat, hi: &Rat) -> bool {
    lo <= v && v <= hi
}

pub fn make_shape(shape: Shape<'_>, lo: &Rat, hi: &Rat) -> Result<PiecewiseLinearFn, MembershipError> {
    if lo >= hi {
        return Err(MembershipError::EmptyDomain(fmt_short(lo), fmt_short(hi)));
    }
    let (z, o) = (zero(), one());
    let params: Vec<&Rat> = match shape {
        Shape::Trapezoid(a, b, c, d) => vec![a, b, c, d],
        Shape::Triangle(a, b, c) => vec![a, b, c],
        Shape::LeftShoulder(a, b) | Shape::RightShoulder(a, b) => vec![a, b],
    };
    if params.windows(2).any(|w| w[0] > w[1]) || params.iter().any(|p| !inside(p, lo, hi)) {
        return Err(MembershipError::BadParameters);
    }
    let pts: Vec<(Rat, Rat)> = match shape {
        Shape::Trapezoid(a, b, c, d) => vec![
            (lo.clone(), z.clone()),
            (a.clone(), z.clone()),
            (b.clone(), o.clone()),
            (c.clone(), o),
            (d.clone(), z.clone()),
            (hi.clone(), z),
        ],
        Shape::Triangle(a, b, c) => return make_shape(Shape::Trapezoid(a, b, b, c), lo, hi),
        Shape::LeftShoulder(a, b) => vec![
            (lo.clone(), o.clone()),
            (a.clone(), o),
            (b.clone(), z.clone()),
            (hi.clone(), z),
        ],
        Shape::RightShoulder(a, b) => vec![
            (lo.clone(), z.clone()),
            (a.clone(), z),
            (b.clone(), o.clone()),
            (hi.clone(), o),
        ],
    };
    PiecewiseLinearFn::from_points(&pts)
}

/// ε-ramp approximation of a crisp comparison predicate.
pub fn make_crisp(
    comparator: Comparator,
    k: &Rat,
    epsilon: &Rat,
    lo: &Rat,
    hi: &Rat,
) -> Result<PiecewiseLinearFn, MembershipError> {
    if !epsilon.is_positive() {
        return Err(MembershipError::BadEpsilon);
    }
    if lo >= hi {
        return Err(MembershipError::EmptyDomain(fmt_short(lo), fmt_short(hi)));
    }
    let up = k + epsilon;
    let down = k - epsilon;
    let ramp_ok = match comparator {
        Comparator::Le => inside(k, lo, hi) && up <= *hi,
        Comparator::Ge => inside(k, lo, hi) && down >= *lo,
        Comparator::Eq => down >= *lo && up <= *hi,
    };
    if !ramp_ok {
        return Err(MembershipError::RampOutsideDomain);
    }
    let (z, o) = (zero(), one());
    let pts = match comparator {
        Comparator::Le => vec![(lo.clone(), o.clone()), (k.clone(), o), (up, z.clone()), (hi.clone(), z)],
        Comparator::Ge => vec![(lo.clone(), z.clone()), (down, z), (k.clone(), o.clone()), (hi.clone(), o)],
        Comparator::Eq => vec![
            (lo.clone(), z.clone()),
            (down, z.clone()),
            (k.clone(), o),
            (up, z.clone()),
            (hi.clone(), z),
        ],
    };
    let mut f = PiecewiseLinearFn::from_points(&pts)?;
    f.crisp = Some(CrispShape {
        comparator,
        k: k.clone(),
        epsilon: epsilon.clone(),
    });
    Ok(f)
}

/// Piecewise-linear stand-in for `x^2`: `2x/3` up to `3/4`, then `2x - 1`.
pub fn builtin_very() -> PiecewiseLinearFn {
    PiecewiseLinearFn::from_points(&[(zero(), zero()), (rat(3, 4), rat(1, 2)), (one(), one())])
        .expect("valid builtin")
}

/// Default crisp ramp width: 1/1000 of the domain width.
pub fn default_epsilon(lo: &Rat, hi: &Rat) -> Rat {
    (hi - lo) / int(1000)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphEncoding {
    pub constraints: Vec<LinearConstraint>,
    pub controls: Vec<VarId>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Lower,
    Upper,
}

fn encode(
    f: &PiecewiseLinearFn,
    x: &LinearExpr,
    d: &LinearExpr,
    fresh: &mut dyn FnMut() -> VarId,
    side: Side,
) -> GraphEncoding {
    let (k1, k2) = (&f.lo, &f.hi);
    let n = f.pieces.len();
    let controls: Vec<VarId> = (0..n.saturating_sub(1)).map(|_| fresh()).collect();
    let mut cs = vec![LinearConstraint::ge(x.clone(), k1.clone()), LinearConstraint::le(x.clone(), k2.clone())];
    for w in controls.windows(2) {
        cs.push(LinearConstraint::ge(w[0], w[1]));
    }
    // y_i as an expression, with the fixed ends y_0 = 1 and y_n = 0.
    let y = |i: usize| -> LinearExpr {
        if i == 0 {
            LinearExpr::constant(one())
        } else if i == n {
            LinearExpr::zero()
        } else {
            LinearExpr::var(controls[i - 1])
        }
    };
    for (idx, p) in f.pieces.iter().enumerate() {
        let i = idx + 1;
        let s = y(i - 1).complement() + y(i);
        if p.lo > *k1 {
            // x >= lo_i - (lo_i - k1) s_i
            cs.push(LinearConstraint::ge(
                x.clone(),
                LinearExpr::constant(p.lo.clone()) - s.scale(&(&p.lo - k1)),
            ));
        }
        if p.hi < *k2 {
            // x <= hi_i + (k2 - hi_i) s_i
            cs.push(LinearConstraint::le(
                x.clone(),
                LinearExpr::constant(p.hi.clone()) + s.scale(&(k2 - &p.hi)),
            ));
        }
        let fx = x.scale(&p.slope) + LinearExpr::constant(p.intercept.clone());
        let (e, e_min) = match side {
            // f_i(x) - d >= 0, minimum at d = 1
            Side::Lower => (fx - d.clone(), p.min_on(k1, k2) - one()),
            // d - f_i(x) >= 0, minimum at d = 0
            Side::Upper => (d.clone() - fx, -p.max_on(k1, k2)),
        };
        if e_min.is_negative() {
            cs.push(LinearConstraint::ge(e, s.scale(&e_min)));
        } else {
            cs.push(LinearConstraint::ge(e, LinearExpr::zero()));
        }
    }
    GraphEncoding {
        constraints: cs,
        controls,
    }
}

/// Constraints feasible exactly when `x` is in the domain and `f(x) >= d`.
pub fn encode_lower_graph(
    f: &PiecewiseLinearFn,
    x: &LinearExpr,
    d: &LinearExpr,
    fresh: &mut dyn FnMut() -> VarId,
) -> GraphEncoding {
    encode(f, x, d, fresh, Side::Lower)
}

/// Constraints feasible exactly when `x` is in the domain and `f(x) <= d`.
pub fn encode_upper_graph(
    f: &PiecewiseLinearFn,
    x: &LinearExpr,
    d: &LinearExpr,
    fresh: &mut dyn FnMut() -> VarId,
) -> GraphEncoding {
    encode(f, x, d, fresh, Side::Upper)
}

/// Exact encoding of `crisp(x) >= d` for the crisp set behind `shape`:
/// either `x` satisfies the comparison, or `d <= 0`. One control variable.
pub fn encode_crisp_lower(
    shape: &CrispShape,
    lo: &Rat,
    hi: &Rat,
    x: &LinearExpr,
    d: &LinearExpr,
    fresh: &mut dyn FnMut() -> VarId,
) -> GraphEncoding {
    let y = fresh();
    let ly = LinearExpr::var(y);
    let k = &shape.k;
    let mut cs = vec![
        LinearConstraint::ge(x.clone(), lo.clone()),
        LinearConstraint::le(x.clone(), hi.clone()),
        LinearConstraint::le(d.clone(), ly.complement()),
    ];
    if matches!(shape.comparator, Comparator::Le | Comparator::Eq) {
        cs.push(LinearConstraint::le(
            x.clone(),
            LinearExpr::constant(k.clone()) + ly.scale(&(hi - k)),
        ));
    }
    if matches!(shape.comparator, Comparator::Ge | Comparator::Eq) {
        cs.push(LinearConstraint::ge(
            x.clone(),
            LinearExpr::constant(k.clone()) - ly.scale(&(k - lo)),
        ));
    }
    GraphEncoding {
        constraints: cs,
        controls: vec![y],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::{LinearExpr, VarKind};
    use crate::milp::{mip_feasible, MipProblem};
    use crate::rational::parse_rat;

    fn r(s: &str) -> Rat {
        parse_rat(s).unwrap()
    }

    fn young(hi: &str) -> PiecewiseLinearFn {
        make_shape(Shape::LeftShoulder(&int(10), &int(30)), &int(0), &r(hi)).unwrap()
    }

    /// Builds the encoding of `f` at the point `(x, d)` and decides it.
    fn feasible_at(f: &PiecewiseLinearFn, x: &Rat, d: &Rat, upper: bool) -> bool {
        let mut p = MipProblem::new();
        let vx = p.add_var(VarKind::Continuous {
            lo: x.clone(),
            hi: x.clone(),
        });
        let vd = p.add_var(VarKind::Continuous {
            lo: d.clone(),
            hi: d.clone(),
        });
        let mut vars = Vec::new();
        let enc = {
            let mut fresh = || {
                let v = VarId((2 + vars.len()) as u32);
                vars.push(v);
                v
            };
            let (ex, ed) = (LinearExpr::var(vx), LinearExpr::var(vd));
            if upper {
                encode_upper_graph(f, &ex, &ed, &mut fresh)
            } else {
                encode_lower_graph(f, &ex, &ed, &mut fresh)
            }
        };
        for _ in &enc.controls {
            p.add_binary();
        }
        for c in enc.constraints {
            p.add_constraint(c);
        }
        mip_feasible(&p).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let y = young("200");
        assert_eq!(y.eval(&int(20)).unwrap(), rat(1, 2));
        assert_eq!(y.eval(&int(5)).unwrap(), one());
        let high = make_shape(Shape::RightShoulder(&int(80), &int(250)), &int(0), &int(400)).unwrap();
        assert_eq!(high.eval(&int(243)).unwrap(), rat(163, 170));
        assert!(high.eval(&int(401)).is_err());
    }

    #[test]
    fn shapes_agree_with_definitions() {
        let (lo, hi) = (int(0), int(10));
        let tri = make_shape(Shape::Triangle(&int(2), &int(4), &int(7)), &lo, &hi).unwrap();
        let trz = make_shape(Shape::Trapezoid(&int(2), &int(4), &int(4), &int(7)), &lo, &hi).unwrap();
        for i in 0..=100 {
            let x = rat(i, 10);
            assert_eq!(tri.eval(&x), trz.eval(&x));
        }
        let l = make_shape(Shape::LeftShoulder(&int(10), &int(30)), &int(0), &int(200)).unwrap();
        for i in 0..=200 {
            let x = int(i);
            let young = if i <= 10 {
                one()
            } else if i <= 30 {
                (int(30) - &x) / int(20)
            } else {
                zero()
            };
            assert_eq!(l.eval(&x).unwrap(), young);
        }
        let rs = make_shape(Shape::RightShoulder(&int(80), &int(250)), &int(0), &int(400)).unwrap();
        assert_eq!(rs.eval(&int(80)).unwrap(), zero());
        assert_eq!(rs.eval(&int(250)).unwrap(), one());
        assert_eq!(
            make_shape(Shape::Triangle(&int(4), &int(2), &int(7)), &lo, &hi),
            Err(MembershipError::BadParameters)
        );
    }

    #[test]
    fn crisp_ramps() {
        let le = make_crisp(Comparator::Le, &int(18), &rat(1, 10), &int(0), &int(150)).unwrap();
        assert_eq!(le.eval(&int(18)).unwrap(), one());
        assert_eq!(le.eval(&rat(181, 10)).unwrap(), zero());
        assert_eq!(le.eval(&rat(1801, 100)).unwrap(), rat(9, 10));
        let eps = rat(1, 10);
        assert_eq!(le.eval(&(int(18) + &eps / int(2))).unwrap(), rat(1, 2));
        let eq = make_crisp(Comparator::Eq, &int(243), &eps, &int(0), &int(400)).unwrap();
        assert_eq!(eq.eval(&int(243)).unwrap(), one());
        assert_eq!(eq.eval(&int(242)).unwrap(), zero());
        assert_eq!(
            make_crisp(Comparator::Le, &int(18), &zero(), &int(0), &int(150)),
            Err(MembershipError::BadEpsilon)
        );
        assert_eq!(
            make_crisp(Comparator::Le, &int(150), &eps, &int(0), &int(150)),
            Err(MembershipError::RampOutsideDomain)
        );
    }

    #[test]
    fn discontinuity_rejected_inside_domain() {
        let pts = [(int(0), one()), (int(5), one()), (int(5), zero()), (int(9), zero())];
        assert_eq!(
            PiecewiseLinearFn::from_points(&pts),
            Err(MembershipError::Discontinuous("5".into()))
        );
        // A step at the domain edge is harmless and dropped.
        let pts = [(int(0), zero()), (int(0), one()), (int(9), one())];
        assert_eq!(PiecewiseLinearFn::from_points(&pts).unwrap().eval(&int(0)).unwrap(), one());
    }

    #[test]
    fn continuity_at_breakpoints() {
        let f = make_shape(Shape::Trapezoid(&int(1), &int(3), &int(6), &int(8)), &int(0), &int(10)).unwrap();
        for w in f.pieces().windows(2) {
            assert_eq!(w[0].hi, w[1].lo);
            assert_eq!(w[0].at(&w[0].hi), w[1].at(&w[1].lo));
        }
    }

    #[test]
    fn control_variable_budget() {
        let mut count = 0u32;
        let mut fresh = || {
            count += 1;
            VarId(100 + count)
        };
        let (x, d) = (LinearExpr::var(VarId(0)), LinearExpr::var(VarId(1)));
        let trz = make_shape(Shape::Trapezoid(&int(1), &int(3), &int(6), &int(8)), &int(0), &int(10)).unwrap();
        assert_eq!(encode_lower_graph(&trz, &x, &d, &mut fresh).controls.len(), 4);
        assert_eq!(encode_lower_graph(&young("200"), &x, &d, &mut fresh).controls.len(), 2);
        let le = make_crisp(Comparator::Le, &int(18), &rat(1, 10), &int(0), &int(150)).unwrap();
        assert_eq!(encode_upper_graph(&le, &x, &d, &mut fresh).controls.len(), 2);
    }

    #[test]
    fn young_upper_graph_reproduces_reference_block() {
        let x = LinearExpr::var(VarId(0));
        let d = LinearExpr::var(VarId(1));
        let mut fresh = || VarId(2);
        let enc = encode_upper_graph(&young("30"), &x, &d, &mut fresh);
        let y = LinearExpr::var(VarId(2));
        let expect = [
            LinearConstraint::le(x.clone(), LinearExpr::constant(int(10)) + y.scale(&int(20))),
            LinearConstraint::le(x.clone(), int(30)),
        ];
        let render: Vec<String> = enc.constraints.iter().map(|c| c.to_string()).collect();
        for e in &expect {
            assert!(enc.constraints.contains(e), "missing {e} in {render:?}");
        }
        // The remaining three constraints are equivalent to d >= 1 - y,
        // x >= 10 y and x + 20 d >= 30 y; check them pointwise over all
        // (x, d, y) on a grid.
        for y in 0..=1 {
            for xi in 0..=30 {
                for di in 0..=20 {
                    let (xv, dv, yv) = (int(xi), rat(di, 20), int(y));
                    let val = |v: VarId| match v.0 {
                        0 => xv.clone(),
                        1 => dv.clone(),
                        _ => yv.clone(),
                    };
                    let ours = enc.constraints.iter().all(|c| c.holds_with(val));
                    let reference = xv <= int(10) + int(20) * &yv
                        && dv >= one() - &yv
                        && xv >= int(10) * &yv
                        && xv <= int(30)
                        && &xv + int(20) * &dv >= int(30) * &yv;
                    assert_eq!(ours, reference, "x={xv} d={dv} y={yv}");
                }
            }
        }
    }

    #[test]
    fn encoding_examples() {
        let c1 = PiecewiseLinearFn::constant(one(), zero(), one()).unwrap();
        let c0 = PiecewiseLinearFn::constant(zero(), zero(), one()).unwrap();
        for i in 0..=4 {
            let v = rat(i, 4);
            assert!(feasible_at(&c1, &v, &v, false));
            assert!(feasible_at(&c0, &v, &v, true));
        }
        let y = young("30");
        assert!(feasible_at(&y, &int(20), &rat(1, 4), false));
        assert!(!feasible_at(&y, &int(20), &rat(3, 4), false));
        assert!(feasible_at(&y, &int(20), &rat(1, 2), true));
        assert!(!feasible_at(&y, &int(5), &zero(), true));
    }

    #[test]
    fn modifier_composition() {
        let high = make_shape(Shape::RightShoulder(&int(80), &int(250)), &int(0), &int(400)).unwrap();
        let vh = high.then(&builtin_very()).unwrap();
        assert_eq!(vh.eval(&int(243)).unwrap(), rat(78, 85));
        assert_eq!(vh.eval(&int(170)).unwrap(), rat(6, 17));
        assert_eq!(vh.eval(&int(300)).unwrap(), one());
        assert!(vh.is_non_decreasing());
        assert!(!young("30").is_non_decreasing());
    }

    #[test]
    fn extension_holds_end_values() {
        let y = young("30").extended_to(&int(-5), &int(200));
        assert_eq!(y.domain(), (&int(-5), &int(200)));
        assert_eq!(y.eval(&int(-5)).unwrap(), one());
        assert_eq!(y.eval(&int(100)).unwrap(), zero());
    }
}
