//! Pretty-printing. `Display` emits the textual grammar with only the
//! parentheses required to reparse to the identical AST.

use crate::ast::{Dir, Formula, Signature};
use std::fmt;

// Binding strength: implication 0, disjunction 1, conjunction 2, binary
// temporal 3, unary 4, atoms 5.
fn level(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => 0,
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        Formula::Until(..) | Formula::Release(..) | Formula::Since(..) | Formula::Trigger(..) => 3,
        Formula::Not(_)
        | Formula::Next(_)
        | Formula::WeakNext(_)
        | Formula::Prev(_)
        | Formula::WeakPrev(_)
        | Formula::Finally(_)
        | Formula::Globally(_)
        | Formula::Once(_)
        | Formula::Historically(_) => 4,
        _ => 5,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if level(f) < min {
        write!(out, "(")?;
        write_at(f, 0, out)?;
        return write!(out, ")");
    }
    match f {
        Formula::True => write!(out, "true"),
        Formula::False => write!(out, "false"),
        Formula::Bool(q) => write!(out, "{q}"),
        Formula::LocalEq { x, j, y } => write!(out, "eq({x}, {j}, {y})"),
        Formula::Oblig { dir, neq, x, y, nested } => {
            let head = match (dir, neq) {
                (Dir::Future, false) => "E+",
                (Dir::Future, true) => "D+",
                (Dir::Past, false) => "E-",
                (Dir::Past, true) => "D-",
            };
            write!(out, "{head}({x}, {y}; ")?;
            write_at(nested, 0, out)?;
            write!(out, ")")
        }
        Formula::Not(a) => {
            write!(out, "!")?;
            write_at(a, 4, out)
        }
        Formula::Next(a) => {
            write!(out, "X ")?;
            write_at(a, 4, out)
        }
        Formula::WeakNext(a) => {
            write!(out, "WX ")?;
            write_at(a, 4, out)
        }
        Formula::Prev(a) => {
            write!(out, "Y ")?;
            write_at(a, 4, out)
        }
        Formula::WeakPrev(a) => {
            write!(out, "WY ")?;
            write_at(a, 4, out)
        }
        Formula::Finally(a) => {
            write!(out, "F ")?;
            write_at(a, 4, out)
        }
        Formula::Globally(a) => {
            write!(out, "G ")?;
            write_at(a, 4, out)
        }
        Formula::Once(a) => {
            write!(out, "O ")?;
            write_at(a, 4, out)
        }
        Formula::Historically(a) => {
            write!(out, "H ")?;
            write_at(a, 4, out)
        }
        Formula::Until(a, b) | Formula::Release(a, b) | Formula::Since(a, b) | Formula::Trigger(a, b) => {
            let op = match f {
                Formula::Until(..) => "U",
                Formula::Release(..) => "R",
                Formula::Since(..) => "S",
                _ => "T",
            };
            write_at(a, 4, out)?;
            write!(out, " {op} ")?;
            write_at(b, 3, out)
        }
        Formula::And(a, b) => {
            write_at(a, 2, out)?;
            write!(out, " & ")?;
            write_at(b, 3, out)
        }
        Formula::Or(a, b) => {
            write_at(a, 1, out)?;
            write!(out, " | ")?;
            write_at(b, 2, out)
        }
        Formula::Implies(a, b) => {
            write_at(a, 1, out)?;
            write!(out, " -> ")?;
            write_at(b, 0, out)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, 0, out)
    }
}

/// Renders a complete formula file: declarations, then the formula line.
pub fn formula_file(sig: &Signature, f: &Formula) -> String {
    let mut out = String::new();
    let mut decl = |kw: &str, names: &std::collections::BTreeSet<String>| {
        if !names.is_empty() {
            let list: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            out.push_str(&format!("{kw} {};\n", list.join(", ")));
        }
    };
    decl("env bool", &sig.env_bools);
    decl("env data", &sig.env_datas);
    decl("sys bool", &sig.sys_bools);
    decl("sys data", &sig.sys_datas);
    out.push_str(&format!("formula: {f}\n"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::Formula as Fm;
    use crate::parser::{parse_expr_with, parse_formula};
    use crate::ast::{Owner, VarKind};

    fn sig_abc() -> Signature {
        let mut s = Signature::new();
        for n in ["a", "b", "c"] {
            s.declare(Owner::Env, VarKind::Bool, n).unwrap();
        }
        for n in ["x", "y"] {
            s.declare(Owner::Sys, VarKind::Data, n).unwrap();
        }
        s
    }

    fn roundtrip(f: &Fm) {
        let sig = sig_abc();
        let text = f.to_string();
        let back = parse_expr_with(&sig, &text).unwrap_or_else(|e| panic!("reparse of `{text}`: {e}"));
        assert_eq!(&back, f, "text was `{text}`");
    }

    #[test]
    fn parens_only_where_needed() {
        let f = Fm::boolv("a").and(Fm::boolv("b")).implies(Fm::boolv("c"));
        assert_eq!(f.to_string(), "a & b -> c");
        roundtrip(&f);
        let g = Fm::boolv("a").and(Fm::boolv("b").implies(Fm::boolv("c")));
        assert_eq!(g.to_string(), "a & (b -> c)");
        roundtrip(&g);
    }

    #[test]
    fn right_nested_or_keeps_parens() {
        let f = Fm::boolv("a").or(Fm::boolv("b").or(Fm::boolv("c")));
        assert_eq!(f.to_string(), "a | (b | c)");
        roundtrip(&f);
        let g = Fm::boolv("a").or(Fm::boolv("b")).or(Fm::boolv("c"));
        assert_eq!(g.to_string(), "a | b | c");
        roundtrip(&g);
    }

    #[test]
    fn until_left_operand_parenthesized() {
        let f = Fm::boolv("a").until(Fm::boolv("b")).until(Fm::boolv("c"));
        assert_eq!(f.to_string(), "(a U b) U c");
        roundtrip(&f);
    }

    #[test]
    fn obligations_and_eq_render() {
        let f = Fm::past_neq("x", "y", Fm::eq("x", -2, "y"));
        assert_eq!(f.to_string(), "D-(x, y; eq(x, -2, y))");
        roundtrip(&f);
    }

    #[test]
    fn file_roundtrip() {
        let sig = sig_abc();
        let f = Fm::boolv("a").implies(Fm::fut_eq("x", "y", Fm::True)).globally();
        let text = formula_file(&sig, &f);
        let (sig2, f2) = parse_formula(&text).unwrap();
        assert_eq!(sig2, sig);
        assert_eq!(f2, f);
    }
}
