//! Executable semantics of assertions.

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::hoare::ast::{AExpr, Assertion, CmpOp};
use crate::semantics::{eval_bool, EvalMode, State};

/// Ghost valuations: assertion evaluation needs a value for every ghost.
pub type GhostEnv = BTreeMap<String, BigInt>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AssertionError {
    UnboundGhost(String),
}

impl fmt::Display for AssertionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AssertionError::UnboundGhost(g) => write!(f, "unbound ghost variable ${g}"),
        }
    }
}

/// Evaluates an assertion term. `Ok(None)` means the evaluation touched a
/// division by zero.
///
/// Division is floor division; program variables use total (default-0)
/// lookup, i.e. assertions are interpreted over exact integer arithmetic.
pub fn eval_aexpr(
    a: &AExpr,
    s: &State,
    ghosts: &GhostEnv,
) -> Result<Option<BigInt>, AssertionError> {
    Ok(match a {
        AExpr::Var(x) => Some(s.get(x)),
        AExpr::Ghost(g) => Some(
            ghosts
                .get(g)
                .ok_or_else(|| AssertionError::UnboundGhost(g.clone()))?
                .clone(),
        ),
        AExpr::Const(n) => Some(n.clone()),
        AExpr::Add(l, r) => match (eval_aexpr(l, s, ghosts)?, eval_aexpr(r, s, ghosts)?) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        },
        AExpr::Sub(l, r) => match (eval_aexpr(l, s, ghosts)?, eval_aexpr(r, s, ghosts)?) {
            (Some(a), Some(b)) => Some(a - b),
            _ => None,
        },
        AExpr::Mul(l, r) => match (eval_aexpr(l, s, ghosts)?, eval_aexpr(r, s, ghosts)?) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        },
        AExpr::Div(l, r) => match (eval_aexpr(l, s, ghosts)?, eval_aexpr(r, s, ghosts)?) {
            (Some(a), Some(b)) if !b.is_zero() => Some(a.div_floor(&b)),
            _ => None,
        },
    })
}

fn compare(op: CmpOp, a: &BigInt, b: &BigInt) -> bool {
    match op {
        CmpOp::Eq => a == b,
        CmpOp::Ne => a != b,
        CmpOp::Lt => a < b,
        CmpOp::Le => a <= b,
        CmpOp::Gt => a > b,
        CmpOp::Ge => a >= b,
    }
}

/// First-order evaluation of an assertion in a state.
///
/// A comparison whose operands touch a zero divisor is false. Wrapped
/// conditions evaluate with the exact (math-mode) program semantics.
pub fn eval_assertion(
    p: &Assertion,
    s: &State,
    ghosts: &GhostEnv,
) -> Result<bool, AssertionError> {
    Ok(match p {
        Assertion::True => true,
        Assertion::False => false,
        Assertion::Cmp(op, l, r) => {
            match (eval_aexpr(l, s, ghosts)?, eval_aexpr(r, s, ghosts)?) {
                (Some(a), Some(b)) => compare(*op, &a, &b),
                _ => false,
            }
        }
        Assertion::And(l, r) => eval_assertion(l, s, ghosts)? && eval_assertion(r, s, ghosts)?,
        Assertion::Or(l, r) => eval_assertion(l, s, ghosts)? || eval_assertion(r, s, ghosts)?,
        Assertion::Implies(l, r) => {
            !eval_assertion(l, s, ghosts)? || eval_assertion(r, s, ghosts)?
        }
        Assertion::Not(q) => !eval_assertion(q, s, ghosts)?,
        Assertion::BTrue(b) => {
            eval_bool(s, b, EvalMode::Math).expect("math-mode evaluation is total")
        }
        Assertion::BFalse(b) => {
            !eval_bool(s, b, EvalMode::Math).expect("math-mode evaluation is total")
        }
    })
}
