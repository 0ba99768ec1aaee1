//! SMT-LIB2 export of verification conditions.
//!
//! One script per VC set: every variable and ghost is declared once as an
//! `Int`, then each VC is negated inside its own `push`/`pop` block followed
//! by `(check-sat)`. `unsat` for every block means all VCs are valid (under
//! the nonzero-divisor guards).

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use num_traits::Zero;

use crate::hoare::ast::{assertion_vars, AExpr, Assertion, CmpOp, Vc};
use crate::syntax::{BoolExpr, Expr, VarSet};

fn smt_int(n: &num_bigint::BigInt, out: &mut String) {
    if n < &num_bigint::BigInt::zero() {
        let _ = write!(out, "(- {})", -n);
    } else {
        let _ = write!(out, "{n}");
    }
}

fn smt_expr(e: &Expr, out: &mut String) {
    match e {
        Expr::Var(x) => {
            let _ = write!(out, "{x}");
        }
        Expr::Const(n) => smt_int(n, out),
        Expr::Add(l, r) => {
            out.push_str("(+ ");
            smt_expr(l, out);
            out.push(' ');
            smt_expr(r, out);
            out.push(')');
        }
        Expr::Sub(l, r) => {
            out.push_str("(- ");
            smt_expr(l, out);
            out.push(' ');
            smt_expr(r, out);
            out.push(')');
        }
    }
}

fn smt_aexpr(a: &AExpr, out: &mut String) {
    match a {
        AExpr::Var(x) => {
            let _ = write!(out, "{x}");
        }
        AExpr::Ghost(g) => {
            let _ = write!(out, "${g}");
        }
        AExpr::Const(n) => smt_int(n, out),
        AExpr::Add(l, r) => {
            out.push_str("(+ ");
            smt_aexpr(l, out);
            out.push(' ');
            smt_aexpr(r, out);
            out.push(')');
        }
        AExpr::Sub(l, r) => {
            out.push_str("(- ");
            smt_aexpr(l, out);
            out.push(' ');
            smt_aexpr(r, out);
            out.push(')');
        }
        AExpr::Mul(l, r) => {
            out.push_str("(* ");
            smt_aexpr(l, out);
            out.push(' ');
            smt_aexpr(r, out);
            out.push(')');
        }
        AExpr::Div(l, r) => {
            // SMT-LIB `div` is Euclidean; floor division is `div` for a
            // positive divisor and `(div (- a) (- b))` for a negative one.
            let mut num = String::new();
            smt_aexpr(l, &mut num);
            let mut den = String::new();
            smt_aexpr(r, &mut den);
            let _ = write!(
                out,
                "(ite (> {den} 0) (div {num} {den}) (div (- {num}) (- {den})))"
            );
        }
    }
}

fn smt_cmp(op: CmpOp, l: &AExpr, r: &AExpr, out: &mut String) {
    let head = match op {
        CmpOp::Eq => "(= ",
        CmpOp::Ne => "(distinct ",
        CmpOp::Lt => "(< ",
        CmpOp::Le => "(<= ",
        CmpOp::Gt => "(> ",
        CmpOp::Ge => "(>= ",
    };
    out.push_str(head);
    smt_aexpr(l, out);
    out.push(' ');
    smt_aexpr(r, out);
    out.push(')');
}

fn smt_bool(b: &BoolExpr, out: &mut String) {
    let (head, l, r) = match b {
        BoolExpr::Eq(l, r) => ("(= ", l, r),
        BoolExpr::Lt(l, r) => ("(< ", l, r),
    };
    out.push_str(head);
    smt_expr(l, out);
    out.push(' ');
    smt_expr(r, out);
    out.push(')');
}

fn smt_assertion(p: &Assertion, out: &mut String) {
    match p {
        Assertion::True => out.push_str("true"),
        Assertion::False => out.push_str("false"),
        Assertion::Cmp(op, l, r) => smt_cmp(*op, l, r, out),
        Assertion::And(l, r) => {
            out.push_str("(and ");
            smt_assertion(l, out);
            out.push(' ');
            smt_assertion(r, out);
            out.push(')');
        }
        Assertion::Or(l, r) => {
            out.push_str("(or ");
            smt_assertion(l, out);
            out.push(' ');
            smt_assertion(r, out);
            out.push(')');
        }
        Assertion::Implies(l, r) => {
            out.push_str("(=> ");
            smt_assertion(l, out);
            out.push(' ');
            smt_assertion(r, out);
            out.push(')');
        }
        Assertion::Not(q) => {
            out.push_str("(not ");
            smt_assertion(q, out);
            out.push(')');
        }
        Assertion::BTrue(b) => smt_bool(b, out),
        Assertion::BFalse(b) => {
            out.push_str("(not ");
            smt_bool(b, out);
            out.push(')');
        }
    }
}

// Emitted text of every divisor occurring in the assertion, deduplicated.
fn divisors(p: &Assertion, out: &mut Vec<String>) {
    fn in_aexpr(a: &AExpr, out: &mut Vec<String>) {
        match a {
            AExpr::Var(_) | AExpr::Ghost(_) | AExpr::Const(_) => {}
            AExpr::Add(l, r) | AExpr::Sub(l, r) | AExpr::Mul(l, r) => {
                in_aexpr(l, out);
                in_aexpr(r, out);
            }
            AExpr::Div(l, r) => {
                in_aexpr(l, out);
                in_aexpr(r, out);
                let mut text = String::new();
                smt_aexpr(r, &mut text);
                if !out.contains(&text) {
                    out.push(text);
                }
            }
        }
    }
    match p {
        Assertion::True | Assertion::False | Assertion::BTrue(_) | Assertion::BFalse(_) => {}
        Assertion::Cmp(_, l, r) => {
            in_aexpr(l, out);
            in_aexpr(r, out);
        }
        Assertion::And(l, r) | Assertion::Or(l, r) | Assertion::Implies(l, r) => {
            divisors(l, out);
            divisors(r, out);
        }
        Assertion::Not(q) => divisors(q, out),
    }
}

/// Renders a VC set as one SMT-LIB2 script.
pub fn export_smtlib(vcs: &[Vc]) -> String {
    let mut all_vars = VarSet::new();
    let mut all_ghosts: BTreeSet<String> = BTreeSet::new();
    for vc in vcs {
        let (vars, ghosts) = assertion_vars(&vc.formula);
        all_vars = all_vars.union(&vars);
        all_ghosts.extend(ghosts);
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        "; {} verification condition(s); unsat everywhere means all valid",
        vcs.len()
    );
    let _ = writeln!(out, "(set-logic ALL)");
    for x in all_vars.iter() {
        let _ = writeln!(out, "(declare-const {x} Int)");
    }
    for g in &all_ghosts {
        let _ = writeln!(out, "(declare-const ${g} Int)");
    }
    for (i, vc) in vcs.iter().enumerate() {
        let _ = writeln!(out, "(push 1)");
        let _ = writeln!(out, "; VC {}: {}", i + 1, vc.origin);
        let mut guards = Vec::new();
        divisors(&vc.formula, &mut guards);
        for d in &guards {
            let _ = writeln!(out, "(assert (distinct {d} 0))");
        }
        let mut formula = String::new();
        smt_assertion(&vc.formula, &mut formula);
        let _ = writeln!(out, "(assert (not {formula}))");
        let _ = writeln!(out, "(check-sat)");
        let _ = writeln!(out, "(pop 1)");
    }
    out
}
