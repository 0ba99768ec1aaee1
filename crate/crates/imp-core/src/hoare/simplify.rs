//! Logic-preserving cleanup of assertions: constant folding, `true`/`false`
//! absorption, double-negation removal.

use alloc::boxed::Box;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::hoare::ast::{AExpr, Assertion, CmpOp};
use crate::syntax::{BoolExpr, Expr};

// Three-valued constant analysis of assertion terms. `Undefined` marks a
// term that touches a division by a constant zero, whatever the variables.
enum ConstVal {
    Value(BigInt),
    Undefined,
    Unknown,
}

fn const_of(a: &AExpr) -> ConstVal {
    use ConstVal::*;
    let arith = |l: &AExpr, r: &AExpr, f: fn(BigInt, BigInt) -> BigInt| match (
        const_of(l),
        const_of(r),
    ) {
        (Undefined, _) | (_, Undefined) => Undefined,
        (Value(a), Value(b)) => Value(f(a, b)),
        _ => Unknown,
    };
    match a {
        AExpr::Var(_) | AExpr::Ghost(_) => Unknown,
        AExpr::Const(n) => Value(n.clone()),
        AExpr::Add(l, r) => arith(l, r, |a, b| a + b),
        AExpr::Sub(l, r) => arith(l, r, |a, b| a - b),
        AExpr::Mul(l, r) => arith(l, r, |a, b| a * b),
        AExpr::Div(l, r) => match (const_of(l), const_of(r)) {
            (Undefined, _) | (_, Undefined) => Undefined,
            (_, Value(b)) if b.is_zero() => Undefined,
            (Value(a), Value(b)) => Value(a.div_floor(&b)),
            _ => Unknown,
        },
    }
}

fn simp_aexpr(a: &AExpr) -> AExpr {
    if let ConstVal::Value(n) = const_of(a) {
        return AExpr::Const(n);
    }
    match a {
        AExpr::Var(_) | AExpr::Ghost(_) | AExpr::Const(_) => a.clone(),
        AExpr::Add(l, r) => AExpr::add(simp_aexpr(l), simp_aexpr(r)),
        AExpr::Sub(l, r) => AExpr::sub(simp_aexpr(l), simp_aexpr(r)),
        AExpr::Mul(l, r) => AExpr::mul(simp_aexpr(l), simp_aexpr(r)),
        AExpr::Div(l, r) => AExpr::div(simp_aexpr(l), simp_aexpr(r)),
    }
}

fn const_of_expr(e: &Expr) -> Option<BigInt> {
    match e {
        Expr::Var(_) => None,
        Expr::Const(n) => Some(n.clone()),
        Expr::Add(l, r) => Some(const_of_expr(l)? + const_of_expr(r)?),
        Expr::Sub(l, r) => Some(const_of_expr(l)? - const_of_expr(r)?),
    }
}

fn const_of_bool(b: &BoolExpr) -> Option<bool> {
    match b {
        BoolExpr::Eq(l, r) => Some(const_of_expr(l)? == const_of_expr(r)?),
        BoolExpr::Lt(l, r) => Some(const_of_expr(l)? < const_of_expr(r)?),
    }
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

fn lit(b: bool) -> Assertion {
    if b {
        Assertion::True
    } else {
        Assertion::False
    }
}

/// Simplifies an assertion to a logically equivalent one.
pub fn simplify(p: &Assertion) -> Assertion {
    match p {
        Assertion::True | Assertion::False => p.clone(),
        Assertion::Cmp(op, l, r) => match (const_of(l), const_of(r)) {
            (ConstVal::Value(a), ConstVal::Value(b)) => lit(compare(*op, &a, &b)),
            // a constant zero divisor falsifies the comparison outright
            (ConstVal::Undefined, _) | (_, ConstVal::Undefined) => Assertion::False,
            _ => Assertion::Cmp(*op, simp_aexpr(l), simp_aexpr(r)),
        },
        Assertion::And(l, r) => match (simplify(l), simplify(r)) {
            (Assertion::False, _) | (_, Assertion::False) => Assertion::False,
            (Assertion::True, q) | (q, Assertion::True) => q,
            (l, r) => Assertion::And(Box::new(l), Box::new(r)),
        },
        Assertion::Or(l, r) => match (simplify(l), simplify(r)) {
            (Assertion::True, _) | (_, Assertion::True) => Assertion::True,
            (Assertion::False, q) | (q, Assertion::False) => q,
            (l, r) => Assertion::Or(Box::new(l), Box::new(r)),
        },
        Assertion::Implies(l, r) => match (simplify(l), simplify(r)) {
            (_, Assertion::True) | (Assertion::False, _) => Assertion::True,
            (Assertion::True, q) => q,
            (l, r) => Assertion::Implies(Box::new(l), Box::new(r)),
        },
        Assertion::Not(q) => match simplify(q) {
            Assertion::True => Assertion::False,
            Assertion::False => Assertion::True,
            Assertion::Not(inner) => *inner,
            q => Assertion::Not(Box::new(q)),
        },
        Assertion::BTrue(b) => match const_of_bool(b) {
            Some(v) => lit(v),
            None => p.clone(),
        },
        Assertion::BFalse(b) => match const_of_bool(b) {
            Some(v) => lit(!v),
            None => p.clone(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_assertion;

    #[test]
    fn absorption() {
        let p = parse_assertion("x = 1").unwrap();
        assert_eq!(simplify(&Assertion::and(Assertion::True, p.clone())), p);
        assert_eq!(
            simplify(&Assertion::and(Assertion::False, p.clone())),
            Assertion::False
        );
        assert_eq!(
            simplify(&Assertion::implies(p.clone(), Assertion::True)),
            Assertion::True
        );
        assert_eq!(
            simplify(&Assertion::or(p.clone(), Assertion::False)),
            p
        );
    }

    #[test]
    fn constant_folding() {
        assert_eq!(
            simplify(&parse_assertion("1 + 1 = 2").unwrap()),
            Assertion::True
        );
        assert_eq!(
            simplify(&parse_assertion("2 * 3 < 5").unwrap()),
            Assertion::False
        );
        assert_eq!(
            simplify(&parse_assertion("x + (1 + 1) = 2").unwrap()),
            parse_assertion("x + 2 = 2").unwrap()
        );
    }

    #[test]
    fn double_negation() {
        let p = parse_assertion("x < 0").unwrap();
        assert_eq!(simplify(&Assertion::not(Assertion::not(p.clone()))), p);
    }

    #[test]
    fn constant_zero_divisor_folds_false() {
        assert_eq!(
            simplify(&parse_assertion("x + 1 / 0 = x").unwrap()),
            Assertion::False
        );
    }

    #[test]
    fn nonconstant_division_is_kept() {
        let p = parse_assertion("a / b = q").unwrap();
        assert_eq!(simplify(&p), p);
    }
}
