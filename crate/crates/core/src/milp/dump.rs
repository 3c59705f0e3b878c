//! Line-oriented text form of a [`MipProblem`].
//!
//! ```text
//! var 0 cont 0/1 1/1
//! var 1 bin
//! con 1/1 0 -1/1 1 >= 0/1
//! min 0
//! ```
//!
//! Constraints are written normalised (all variables left, constant right).

use std::fmt::Write as _;

use super::{MilpError, MipProblem};
use crate::linear::{LinearConstraint, LinearExpr, Relation, VarId, VarKind};
use crate::rational::{fmt_ratio, parse_rat, Rat};

pub fn dump_problem(p: &MipProblem) -> String {
    let mut out = String::new();
    for (i, k) in p.vars().iter().enumerate() {
        match k {
            VarKind::Continuous { lo, hi } => {
                let _ = writeln!(out, "var {i} cont {} {}", fmt_ratio(lo), fmt_ratio(hi));
            }
            VarKind::Binary => {
                let _ = writeln!(out, "var {i} bin");
            }
        }
    }
    for c in p.constraints() {
        let (terms, rel, rhs) = c.normalized();
        out.push_str("con");
        for (v, a) in terms.terms() {
            let _ = write!(out, " {} {}", fmt_ratio(a), v.0);
        }
        let _ = writeln!(out, " {} {}", rel.symbol(), fmt_ratio(&rhs));
    }
    if let Some(v) = p.objective() {
        let _ = writeln!(out, "min {}", v.0);
    }
    out
}

pub fn parse_problem(text: &str) -> Result<MipProblem, MilpError> {
    let mut p = MipProblem::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let err = |message: &str| MilpError::Parse {
            line,
            message: message.to_string(),
        };
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let num = |t: &str| parse_rat(t).map_err(|e| err(&e.to_string()));
        let id = |t: &str| t.parse::<u32>().map(VarId).map_err(|_| err("bad variable id"));
        match toks.first().copied() {
            None => continue,
            Some(t) if t.starts_with('#') => continue,
            Some("var") => {
                let v = id(toks.get(1).ok_or_else(|| err("missing id"))?)?;
                if v.index() != p.vars().len() {
                    return Err(err("variables must be declared in order"));
                }
                match &toks[2..] {
                    ["bin"] => {
                        p.add_binary();
                    }
                    ["cont", lo, hi] => {
                        p.add_continuous(num(lo)?, num(hi)?);
                    }
                    _ => return Err(err("expected `bin` or `cont <lo> <hi>`")),
                }
            }
            Some("con") => {
                if toks.len() < 3 || !(toks.len() - 3).is_multiple_of(2) {
                    return Err(err("expected `con (<coef> <id>)* <op> <rhs>`"));
                }
                let mut lhs = LinearExpr::zero();
                for pair in toks[1..toks.len() - 2].chunks(2) {
                    lhs.add_term(id(pair[1])?, num(pair[0])?);
                }
                let rel = match toks[toks.len() - 2] {
                    ">=" => Relation::Ge,
                    "<=" => Relation::Le,
                    "=" => Relation::Eq,
                    _ => return Err(err("unknown relation")),
                };
                let rhs: Rat = num(toks[toks.len() - 1])?;
                p.add_constraint(LinearConstraint::new(lhs, rel, rhs));
            }
            Some("min") => {
                let v = id(toks.get(1).ok_or_else(|| err("missing id"))?)?;
                p.set_objective(Some(v));
            }
            Some(_) => return Err(err("unknown directive")),
        }
    }
    p.validate()?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn round_trip() {
        let mut p = MipProblem::new();
        let x = p.add_continuous(int(0), int(30));
        let y = p.add_binary();
        p.add_constraint(LinearConstraint::le(
            x,
            LinearExpr::constant(int(10)) + LinearExpr::term(y, int(20)),
        ));
        p.add_constraint(LinearConstraint::eq(LinearExpr::term(x, rat(1, 3)), rat(2, 7)));
        p.set_objective(Some(x));
        let text = dump_problem(&p);
        assert!(text.contains("con 1/1 0 -20/1 1 <= 10/1"), "{text}");
        let back = parse_problem(&text).unwrap();
        assert_eq!(dump_problem(&back), text);
    }

    #[test]
    fn parse_errors_carry_line() {
        let e = parse_problem("var 0 bin\ncon 1/1 0 >> 1/1\n").unwrap_err();
        assert!(matches!(e, MilpError::Parse { line: 2, .. }));
        assert!(parse_problem("var 0 bin\ncon 1/1 4 >= 0/1\n").is_err());
    }
}
