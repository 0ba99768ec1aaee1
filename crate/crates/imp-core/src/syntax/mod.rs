//! Abstract syntax, concrete syntax, and the purely structural operations
//! over IMP programs.

pub mod ast;
pub mod parser;
mod pretty;

pub use ast::{
    erase, free_vars_bool, free_vars_cmd, free_vars_expr, lift, AnnCmd, BoolExpr, Cmd, Expr,
    Ident, IdentError, VarSet, RESERVED_WORDS,
};
pub use parser::{parse_assertion, parse_file, parse_program, ParseError, SourceFile};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hoare::Assertion;

    fn id(s: &str) -> Ident {
        Ident::new(s).unwrap()
    }

    #[test]
    fn parse_skip() {
        assert_eq!(parse_program("skip").unwrap(), AnnCmd::Skip);
    }

    #[test]
    fn parse_euclid_shape() {
        let c = parse_program(
            "r := a; q := 0; while b < r+1 do r := r - b; q := q + 1 done",
        )
        .unwrap();
        let AnnCmd::Seq(first, rest) = &c else {
            panic!("expected seq, got {c:?}");
        };
        assert_eq!(**first, AnnCmd::Assign(id("r"), Expr::Var(id("a"))));
        let AnnCmd::Seq(second, loop_) = &**rest else {
            panic!("expected right-nested seq");
        };
        assert_eq!(**second, AnnCmd::Assign(id("q"), Expr::constant(0)));
        let AnnCmd::While {
            cond,
            invariant,
            measure,
            body,
        } = &**loop_
        else {
            panic!("expected while");
        };
        assert_eq!(
            *cond,
            BoolExpr::Lt(
                Expr::Var(id("b")),
                Expr::add(Expr::Var(id("r")), Expr::constant(1))
            )
        );
        assert_eq!(*invariant, Assertion::True);
        assert_eq!(*measure, None);
        assert!(matches!(**body, AnnCmd::Seq(..)));
    }

    #[test]
    fn parse_error_position() {
        let err = parse_program("x := ;").unwrap_err();
        assert_eq!((err.line, err.col), (1, 6));
        assert_eq!(err.found, "`;`");
        assert!(err.expected.contains(&"integer".to_string()));
        assert!(err.expected.contains(&"identifier".to_string()));
    }

    #[test]
    fn parse_error_multiline() {
        let err = parse_program("x := 1;\ny := @").unwrap_err();
        assert_eq!((err.line, err.col), (2, 6));
    }

    #[test]
    fn semicolon_is_right_associative() {
        let c = parse_program("skip; skip; x := 1").unwrap();
        assert_eq!(
            c,
            AnnCmd::seq(
                AnnCmd::Skip,
                AnnCmd::seq(AnnCmd::Skip, AnnCmd::Assign(id("x"), Expr::constant(1)))
            )
        );
    }

    #[test]
    fn plus_minus_left_associative_equal_precedence() {
        let c = parse_program("x := a - b + c").unwrap();
        let AnnCmd::Assign(_, e) = c else { panic!() };
        assert_eq!(
            e,
            Expr::add(
                Expr::sub(Expr::Var(id("a")), Expr::Var(id("b"))),
                Expr::Var(id("c"))
            )
        );
    }

    #[test]
    fn parens_and_negative_literals() {
        let c = parse_program("x := a - (b + -2)").unwrap();
        let AnnCmd::Assign(_, e) = c else { panic!() };
        assert_eq!(
            e,
            Expr::sub(
                Expr::Var(id("a")),
                Expr::add(Expr::Var(id("b")), Expr::constant(-2))
            )
        );
    }

    #[test]
    fn annotated_while_and_assert() {
        let c = parse_program(
            "while 0 < x invariant { x >= 0 && $v = $v } measure x do x := x - 1 done; \
             assert { true }",
        )
        .unwrap();
        let AnnCmd::Seq(w, a) = &c else { panic!() };
        assert!(matches!(
            &**w,
            AnnCmd::While {
                measure: Some(_),
                ..
            }
        ));
        assert_eq!(**a, AnnCmd::Assert(Assertion::True));
    }

    #[test]
    fn measure_rejects_ghosts() {
        let err = parse_program("while 0 < x measure $v do skip done").unwrap_err();
        assert_eq!(err.found, "ghost `$v`");
    }

    #[test]
    fn file_headers_are_contextual() {
        let f = parse_file("requires { a >= 0 } ensures { q = a / b } skip").unwrap();
        assert_ne!(f.pre, Assertion::True);
        assert_ne!(f.post, Assertion::True);
        assert_eq!(f.body, AnnCmd::Skip);

        // without braces, `requires` is an ordinary identifier
        let f = parse_file("requires := 1").unwrap();
        assert_eq!(f.pre, Assertion::True);
        assert_eq!(
            f.body,
            AnnCmd::Assign(id("requires"), Expr::constant(1))
        );
    }

    #[test]
    fn assertion_precedence() {
        use crate::hoare::{AExpr, CmpOp};
        let p = parse_assertion("a = 1 && b = 2 || c = 3 -> true").unwrap();
        // ((a=1 && b=2) || c=3) -> true
        let Assertion::Implies(l, r) = p else { panic!() };
        assert_eq!(*r, Assertion::True);
        let Assertion::Or(l, c3) = *l else { panic!() };
        assert!(matches!(*l, Assertion::And(..)));
        assert_eq!(
            *c3,
            Assertion::Cmp(CmpOp::Eq, AExpr::Var(id("c")), AExpr::constant(3))
        );
    }

    #[test]
    fn assertion_paren_disambiguation() {
        // parenthesized term
        parse_assertion("(a + b) < c").unwrap();
        // parenthesized assertion
        parse_assertion("(a < b || a = b) && c = 0").unwrap();
        // arrow is right-associative
        let p = parse_assertion("a = 0 -> b = 0 -> c = 0").unwrap();
        let Assertion::Implies(_, r) = p else { panic!() };
        assert!(matches!(*r, Assertion::Implies(..)));
    }

    #[test]
    fn pretty_print_examples() {
        assert_eq!(AnnCmd::Skip.to_string(), "skip");
        let src = "r := a; q := 0; while b < r + 1 do r := r - b; q := q + 1 done";
        assert_eq!(parse_program(src).unwrap().to_string(), src);

        let annotated =
            "while b < r + 1 invariant { r >= 0 && b > 0 && a = b * q + r } do skip done";
        assert_eq!(parse_program(annotated).unwrap().to_string(), annotated);
    }

    #[test]
    fn pretty_print_parenthesizes_right_subtraction() {
        let e = Expr::sub(
            Expr::Var(id("a")),
            Expr::sub(Expr::Var(id("b")), Expr::Var(id("c"))),
        );
        assert_eq!(e.to_string(), "a - (b - c)");
        let back = parse_program(&format!("x := {e}")).unwrap();
        let AnnCmd::Assign(_, e2) = back else { panic!() };
        assert_eq!(e2, e);
    }

    #[test]
    fn pretty_print_negative_constants_round_trip() {
        let c = Cmd::Assign(id("x"), Expr::constant(-7));
        let printed = lift(&c).to_string();
        assert_eq!(printed, "x := -7");
        assert_eq!(erase(&parse_program(&printed).unwrap()), c);
    }
}
