//! Pretty-printing for programs and assertions.
//!
//! Output is single-line concrete syntax that reparses to a structurally
//! equal tree (for right-nested sequences, the only shape `;` can denote).

use core::fmt;

use crate::hoare::{AExpr, Assertion};
use crate::syntax::ast::{AnnCmd, BoolExpr, Cmd, Expr};

// Binding strength of expression nodes: atoms 2, +/- chains 1.
fn expr_prec(e: &Expr) -> u8 {
    match e {
        Expr::Var(_) | Expr::Const(_) => 2,
        Expr::Add(..) | Expr::Sub(..) => 1,
    }
}

fn fmt_expr(e: &Expr, min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = expr_prec(e);
    if prec < min_prec {
        write!(f, "(")?;
    }
    match e {
        Expr::Var(x) => write!(f, "{x}")?,
        Expr::Const(n) => write!(f, "{n}")?,
        Expr::Add(l, r) => {
            fmt_expr(l, 1, f)?;
            write!(f, " + ")?;
            fmt_expr(r, 2, f)?; // left-associative: parenthesize right chains
        }
        Expr::Sub(l, r) => {
            fmt_expr(l, 1, f)?;
            write!(f, " - ")?;
            fmt_expr(r, 2, f)?;
        }
    }
    if prec < min_prec {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_expr(self, 0, f)
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoolExpr::Eq(l, r) => write!(f, "{l} = {r}"),
            BoolExpr::Lt(l, r) => write!(f, "{l} < {r}"),
        }
    }
}

impl fmt::Display for Cmd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cmd::Skip => write!(f, "skip"),
            Cmd::Assign(x, e) => write!(f, "{x} := {e}"),
            Cmd::Seq(c1, c2) => write!(f, "{c1}; {c2}"),
            Cmd::If(b, c1, c2) => write!(f, "if {b} then {c1} else {c2} end"),
            Cmd::While(b, body) => write!(f, "while {b} do {body} done"),
        }
    }
}

impl fmt::Display for AnnCmd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnnCmd::Skip => write!(f, "skip"),
            AnnCmd::Assign(x, e) => write!(f, "{x} := {e}"),
            AnnCmd::Seq(c1, c2) => write!(f, "{c1}; {c2}"),
            AnnCmd::If(b, c1, c2) => write!(f, "if {b} then {c1} else {c2} end"),
            AnnCmd::While {
                cond,
                invariant,
                measure,
                body,
            } => {
                write!(f, "while {cond}")?;
                // `invariant { true }` is the annotation-free default; elide it
                // so plain programs print back plain.
                if *invariant != Assertion::True {
                    write!(f, " invariant {{ {invariant} }}")?;
                }
                if let Some(m) = measure {
                    write!(f, " measure {m}")?;
                }
                write!(f, " do {body} done")
            }
            AnnCmd::Assert(p) => write!(f, "assert {{ {p} }}"),
        }
    }
}

// Assertion terms: atoms 3, mul/div chains 2, +/- chains 1.
fn aexpr_prec(a: &AExpr) -> u8 {
    match a {
        AExpr::Var(_) | AExpr::Ghost(_) | AExpr::Const(_) => 3,
        AExpr::Mul(..) | AExpr::Div(..) => 2,
        AExpr::Add(..) | AExpr::Sub(..) => 1,
    }
}

fn fmt_aexpr(a: &AExpr, min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = aexpr_prec(a);
    if prec < min_prec {
        write!(f, "(")?;
    }
    match a {
        AExpr::Var(x) => write!(f, "{x}")?,
        AExpr::Ghost(g) => write!(f, "${g}")?,
        AExpr::Const(n) => write!(f, "{n}")?,
        AExpr::Add(l, r) => {
            fmt_aexpr(l, 1, f)?;
            write!(f, " + ")?;
            fmt_aexpr(r, 2, f)?;
        }
        AExpr::Sub(l, r) => {
            fmt_aexpr(l, 1, f)?;
            write!(f, " - ")?;
            fmt_aexpr(r, 2, f)?;
        }
        AExpr::Mul(l, r) => {
            fmt_aexpr(l, 2, f)?;
            write!(f, " * ")?;
            fmt_aexpr(r, 3, f)?;
        }
        AExpr::Div(l, r) => {
            fmt_aexpr(l, 2, f)?;
            write!(f, " / ")?;
            fmt_aexpr(r, 3, f)?;
        }
    }
    if prec < min_prec {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for AExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_aexpr(self, 0, f)
    }
}

// Assertion connectives: -> 1 (right-assoc), || 2, && 3, atoms 4.
fn assertion_prec(p: &Assertion) -> u8 {
    match p {
        Assertion::Implies(..) => 1,
        Assertion::Or(..) => 2,
        Assertion::And(..) => 3,
        _ => 4,
    }
}

fn fmt_assertion(p: &Assertion, min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = assertion_prec(p);
    if prec < min_prec {
        write!(f, "(")?;
    }
    match p {
        Assertion::True => write!(f, "true")?,
        Assertion::False => write!(f, "false")?,
        Assertion::Cmp(op, l, r) => write!(f, "{l} {} {r}", op.symbol())?,
        Assertion::And(l, r) => {
            fmt_assertion(l, 3, f)?;
            write!(f, " && ")?;
            fmt_assertion(r, 4, f)?;
        }
        Assertion::Or(l, r) => {
            fmt_assertion(l, 2, f)?;
            write!(f, " || ")?;
            fmt_assertion(r, 3, f)?;
        }
        Assertion::Implies(l, r) => {
            fmt_assertion(l, 2, f)?;
            write!(f, " -> ")?;
            fmt_assertion(r, 1, f)?; // right-associative
        }
        Assertion::Not(q) => match **q {
            Assertion::True | Assertion::False | Assertion::Not(_) => {
                write!(f, "!")?;
                fmt_assertion(q, 4, f)?;
            }
            _ => write!(f, "!({q})")?,
        },
        Assertion::BTrue(b) => write!(f, "{b}")?,
        Assertion::BFalse(b) => write!(f, "!({b})")?,
    }
    if prec < min_prec {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_assertion(self, 0, f)
    }
}
