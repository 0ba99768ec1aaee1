//! The deep-embedded assertion language housing preconditions,
//! postconditions, loop invariants, and verification conditions.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;

use crate::syntax::{BoolExpr, Expr, Ident, VarSet};

/// Arithmetic terms of the assertion language.
///
/// Program expressions embed injectively (`Var`/`Const`/`Add`/`Sub`);
/// assertions additionally get multiplication, division, and ghost
/// variables. Ghosts live in their own namespace (spelled `$name` in
/// concrete syntax), disjoint from program identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AExpr {
    Var(Ident),
    Ghost(String),
    Const(BigInt),
    Add(Box<AExpr>, Box<AExpr>),
    Sub(Box<AExpr>, Box<AExpr>),
    Mul(Box<AExpr>, Box<AExpr>),
    Div(Box<AExpr>, Box<AExpr>),
}

impl AExpr {
    pub fn constant(n: impl Into<BigInt>) -> AExpr {
        AExpr::Const(n.into())
    }

    pub fn add(l: AExpr, r: AExpr) -> AExpr {
        AExpr::Add(Box::new(l), Box::new(r))
    }

    pub fn sub(l: AExpr, r: AExpr) -> AExpr {
        AExpr::Sub(Box::new(l), Box::new(r))
    }

    pub fn mul(l: AExpr, r: AExpr) -> AExpr {
        AExpr::Mul(Box::new(l), Box::new(r))
    }

    pub fn div(l: AExpr, r: AExpr) -> AExpr {
        AExpr::Div(Box::new(l), Box::new(r))
    }
}

/// Comparison operators available in assertions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "<>",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// First-order assertions over program states.
///
/// `BTrue(b)` / `BFalse(b)` wrap a program condition and hold exactly when
/// it evaluates to true resp. false; they arise from the conditional and
/// loop cases of `wp`/`vcg`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Assertion {
    True,
    False,
    Cmp(CmpOp, AExpr, AExpr),
    And(Box<Assertion>, Box<Assertion>),
    Or(Box<Assertion>, Box<Assertion>),
    Implies(Box<Assertion>, Box<Assertion>),
    Not(Box<Assertion>),
    BTrue(BoolExpr),
    BFalse(BoolExpr),
}

impl Assertion {
    pub fn cmp(op: CmpOp, l: AExpr, r: AExpr) -> Assertion {
        Assertion::Cmp(op, l, r)
    }

    pub fn and(l: Assertion, r: Assertion) -> Assertion {
        Assertion::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Assertion, r: Assertion) -> Assertion {
        Assertion::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Assertion, r: Assertion) -> Assertion {
        Assertion::Implies(Box::new(l), Box::new(r))
    }

    pub fn not(p: Assertion) -> Assertion {
        Assertion::Not(Box::new(p))
    }
}

/// A verification condition tagged with the rule or location it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vc {
    pub formula: Assertion,
    pub origin: String,
}

impl Vc {
    pub fn new(formula: Assertion, origin: impl Into<String>) -> Vc {
        let origin = origin.into();
        debug_assert!(!origin.is_empty());
        Vc { formula, origin }
    }
}

impl fmt::Display for Vc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.origin, self.formula)
    }
}

/// Embeds a program expression into the assertion term language.
pub fn embed_expr(e: &Expr) -> AExpr {
    match e {
        Expr::Var(x) => AExpr::Var(x.clone()),
        Expr::Const(n) => AExpr::Const(n.clone()),
        Expr::Add(l, r) => AExpr::add(embed_expr(l), embed_expr(r)),
        Expr::Sub(l, r) => AExpr::sub(embed_expr(l), embed_expr(r)),
    }
}

/// Turns a program condition into the equivalent comparison assertion.
pub fn embed_bool(b: &BoolExpr) -> Assertion {
    match b {
        BoolExpr::Eq(l, r) => Assertion::Cmp(CmpOp::Eq, embed_expr(l), embed_expr(r)),
        BoolExpr::Lt(l, r) => Assertion::Cmp(CmpOp::Lt, embed_expr(l), embed_expr(r)),
    }
}

fn subst_expr(e: &Expr, x: &Ident, by: &Expr) -> Expr {
    match e {
        Expr::Var(y) if y == x => by.clone(),
        Expr::Var(_) | Expr::Const(_) => e.clone(),
        Expr::Add(l, r) => Expr::add(subst_expr(l, x, by), subst_expr(r, x, by)),
        Expr::Sub(l, r) => Expr::sub(subst_expr(l, x, by), subst_expr(r, x, by)),
    }
}

fn subst_bool(b: &BoolExpr, x: &Ident, by: &Expr) -> BoolExpr {
    match b {
        BoolExpr::Eq(l, r) => BoolExpr::Eq(subst_expr(l, x, by), subst_expr(r, x, by)),
        BoolExpr::Lt(l, r) => BoolExpr::Lt(subst_expr(l, x, by), subst_expr(r, x, by)),
    }
}

/// Substitutes a program expression for a variable inside an assertion term.
/// Ghosts are never touched.
pub fn subst_aexpr(a: &AExpr, x: &Ident, by: &Expr) -> AExpr {
    match a {
        AExpr::Var(y) if y == x => embed_expr(by),
        AExpr::Var(_) | AExpr::Ghost(_) | AExpr::Const(_) => a.clone(),
        AExpr::Add(l, r) => AExpr::add(subst_aexpr(l, x, by), subst_aexpr(r, x, by)),
        AExpr::Sub(l, r) => AExpr::sub(subst_aexpr(l, x, by), subst_aexpr(r, x, by)),
        AExpr::Mul(l, r) => AExpr::mul(subst_aexpr(l, x, by), subst_aexpr(r, x, by)),
        AExpr::Div(l, r) => AExpr::div(subst_aexpr(l, x, by), subst_aexpr(r, x, by)),
    }
}

/// Capture-free substitution `p[x <- by]`: replaces every occurrence of the
/// program variable `x`, including inside wrapped conditions.
pub fn subst(p: &Assertion, x: &Ident, by: &Expr) -> Assertion {
    match p {
        Assertion::True | Assertion::False => p.clone(),
        Assertion::Cmp(op, l, r) => {
            Assertion::Cmp(*op, subst_aexpr(l, x, by), subst_aexpr(r, x, by))
        }
        Assertion::And(l, r) => Assertion::and(subst(l, x, by), subst(r, x, by)),
        Assertion::Or(l, r) => Assertion::or(subst(l, x, by), subst(r, x, by)),
        Assertion::Implies(l, r) => Assertion::implies(subst(l, x, by), subst(r, x, by)),
        Assertion::Not(q) => Assertion::not(subst(q, x, by)),
        Assertion::BTrue(b) => Assertion::BTrue(subst_bool(b, x, by)),
        Assertion::BFalse(b) => Assertion::BFalse(subst_bool(b, x, by)),
    }
}

fn collect_aexpr(a: &AExpr, vars: &mut VarSet, ghosts: &mut BTreeSet<String>) {
    match a {
        AExpr::Var(x) => vars.insert(x.clone()),
        AExpr::Ghost(g) => {
            ghosts.insert(g.clone());
        }
        AExpr::Const(_) => {}
        AExpr::Add(l, r) | AExpr::Sub(l, r) | AExpr::Mul(l, r) | AExpr::Div(l, r) => {
            collect_aexpr(l, vars, ghosts);
            collect_aexpr(r, vars, ghosts);
        }
    }
}

fn collect_assertion(p: &Assertion, vars: &mut VarSet, ghosts: &mut BTreeSet<String>) {
    match p {
        Assertion::True | Assertion::False => {}
        Assertion::Cmp(_, l, r) => {
            collect_aexpr(l, vars, ghosts);
            collect_aexpr(r, vars, ghosts);
        }
        Assertion::And(l, r) | Assertion::Or(l, r) | Assertion::Implies(l, r) => {
            collect_assertion(l, vars, ghosts);
            collect_assertion(r, vars, ghosts);
        }
        Assertion::Not(q) => collect_assertion(q, vars, ghosts),
        Assertion::BTrue(b) | Assertion::BFalse(b) => {
            for x in crate::syntax::free_vars_bool(b) {
                vars.insert(x);
            }
        }
    }
}

/// Program variables and ghost names occurring in an assertion.
pub fn assertion_vars(p: &Assertion) -> (VarSet, BTreeSet<String>) {
    let mut vars = VarSet::new();
    let mut ghosts = BTreeSet::new();
    collect_assertion(p, &mut vars, &mut ghosts);
    (vars, ghosts)
}

/// Program variables and ghost names occurring in an assertion term.
pub fn aexpr_vars(a: &AExpr) -> (VarSet, BTreeSet<String>) {
    let mut vars = VarSet::new();
    let mut ghosts = BTreeSet::new();
    collect_aexpr(a, &mut vars, &mut ghosts);
    (vars, ghosts)
}
