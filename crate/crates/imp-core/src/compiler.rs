//! Compilation of expressions, conditions, and commands to VM code.
//!
//! Branch offsets are computed from sub-code lengths at construction time
//! and never patched afterwards:
//!
//! ```text
//! comp(x)        = var(x)
//! comp(n)        = const(n)
//! comp(e1 + e2)  = comp(e1); comp(e2); add
//! comp(e1 - e2)  = comp(e1); comp(e2); sub
//!
//! comp(e1 = e2, d) = comp(e1); comp(e2); bne(d)    -- falls through if true
//! comp(e1 < e2, d) = comp(e1); comp(e2); bge(d)
//!
//! comp(skip)               = (nothing)
//! comp(x := e)             = comp(e); setvar(x)
//! comp(c1; c2)             = comp(c1); comp(c2)
//! comp(if b then c1        = comp(b, |C1|+1); C1; branch(|C2|); C2
//!      else c2)              where C1 = comp(c1), C2 = comp(c2)
//! comp(while b do c done)  = B; C; branch(-(|B|+|C|+1))
//!                              where C = comp(c), B = comp(b, |C|+1)
//!
//! compile(c) = comp(c); halt
//! ```

use crate::syntax::{BoolExpr, Cmd, Expr};
use crate::vm::{Code, Instr};

/// Code that evaluates `e` and pushes its value: straight-line, no
/// branches, store untouched.
pub fn compile_expr(e: &Expr) -> Code {
    let mut out = Code::default();
    emit_expr(e, &mut out.0);
    out
}

fn emit_expr(e: &Expr, out: &mut alloc::vec::Vec<Instr>) {
    match e {
        Expr::Var(x) => out.push(Instr::Var(x.clone())),
        Expr::Const(n) => out.push(Instr::Const(n.clone())),
        Expr::Add(l, r) => {
            emit_expr(l, out);
            emit_expr(r, out);
            out.push(Instr::Add);
        }
        Expr::Sub(l, r) => {
            emit_expr(l, out);
            emit_expr(r, out);
            out.push(Instr::Sub);
        }
    }
}

/// Code that falls through when `b` is true and branches `delta` past its
/// own end when `b` is false.
pub fn compile_bool(b: &BoolExpr, delta: i64) -> Code {
    let mut out = Code::default();
    let (l, r, branch) = match b {
        BoolExpr::Eq(l, r) => (l, r, Instr::Bne(delta)),
        BoolExpr::Lt(l, r) => (l, r, Instr::Bge(delta)),
    };
    emit_expr(l, &mut out.0);
    emit_expr(r, &mut out.0);
    out.0.push(branch);
    out
}

/// Code that performs the state updates of `c`, leaving the stack unchanged.
pub fn compile_cmd(c: &Cmd) -> Code {
    let mut out = Code::default();
    emit_cmd(c, &mut out.0);
    out
}

fn emit_cmd(c: &Cmd, out: &mut alloc::vec::Vec<Instr>) {
    match c {
        Cmd::Skip => {}
        Cmd::Assign(x, e) => {
            emit_expr(e, out);
            out.push(Instr::Setvar(x.clone()));
        }
        Cmd::Seq(c1, c2) => {
            emit_cmd(c1, out);
            emit_cmd(c2, out);
        }
        Cmd::If(b, c1, c2) => {
            let then_code = compile_cmd(c1);
            let else_code = compile_cmd(c2);
            out.extend(compile_bool(b, then_code.len() + 1).0);
            out.extend(then_code.0);
            out.push(Instr::Branch(else_code.len()));
            out.extend(else_code.0);
        }
        Cmd::While(b, body) => {
            let body_code = compile_cmd(body);
            let guard_code = compile_bool(b, body_code.len() + 1);
            let back = -(guard_code.len() + body_code.len() + 1);
            out.extend(guard_code.0);
            out.extend(body_code.0);
            out.push(Instr::Branch(back));
        }
    }
}

/// Whole-program compilation: `comp(c)` followed by a single `halt`.
pub fn compile_program(c: &Cmd) -> Code {
    let mut code = compile_cmd(c);
    code.0.push(Instr::Halt);
    code
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{EvalMode, State};
    use crate::syntax::{erase, parse_program, Ident};
    use crate::vm::{vm_run, MachineState, VmOutcome};
    use num_bigint::BigInt;

    fn id(s: &str) -> Ident {
        Ident::new(s).unwrap()
    }

    fn prog(src: &str) -> Cmd {
        erase(&parse_program(src).unwrap())
    }

    #[test]
    fn expression_code_is_postfix() {
        // x + 1 -> var x; const 1; add
        let e = Expr::add(Expr::Var(id("x")), Expr::constant(1));
        assert_eq!(
            compile_expr(&e).0,
            [Instr::Var(id("x")), Instr::Const(1.into()), Instr::Add]
        );
        assert_eq!(
            compile_expr(&Expr::constant(7)).0,
            [Instr::Const(7.into())]
        );
        // (a - b) + c
        let e = Expr::add(
            Expr::sub(Expr::Var(id("a")), Expr::Var(id("b"))),
            Expr::Var(id("c")),
        );
        assert_eq!(
            compile_expr(&e).0,
            [
                Instr::Var(id("a")),
                Instr::Var(id("b")),
                Instr::Sub,
                Instr::Var(id("c")),
                Instr::Add
            ]
        );
    }

    #[test]
    fn expression_code_has_no_branches_and_leaf_count_length() {
        let e = Expr::add(
            Expr::sub(Expr::Var(id("a")), Expr::constant(3)),
            Expr::Var(id("c")),
        );
        let code = compile_expr(&e);
        assert_eq!(code.len(), 5); // 3 leaves + 2 operators
        assert!(code.iter().all(|i| !matches!(
            i,
            Instr::Branch(_) | Instr::Bne(_) | Instr::Bge(_) | Instr::Halt
        )));
    }

    #[test]
    fn bool_code_picks_the_complementary_branch() {
        let b = BoolExpr::Lt(Expr::Var(id("x")), Expr::constant(5));
        assert_eq!(
            compile_bool(&b, 3).0,
            [Instr::Var(id("x")), Instr::Const(5.into()), Instr::Bge(3)]
        );
        let b = BoolExpr::Eq(Expr::Var(id("x")), Expr::Var(id("y")));
        assert_eq!(
            compile_bool(&b, 2).0,
            [Instr::Var(id("x")), Instr::Var(id("y")), Instr::Bne(2)]
        );
    }

    #[test]
    fn skip_compiles_to_nothing_and_program_to_lone_halt() {
        assert!(compile_cmd(&Cmd::Skip).is_empty());
        assert_eq!(compile_program(&Cmd::Skip).0, [Instr::Halt]);
    }

    #[test]
    fn assignment_compiles_to_expr_then_setvar() {
        let c = prog("x := x + 1");
        assert_eq!(
            compile_cmd(&c).0,
            [
                Instr::Var(id("x")),
                Instr::Const(1.into()),
                Instr::Add,
                Instr::Setvar(id("x"))
            ]
        );
    }

    #[test]
    fn while_layout_matches_the_scheme() {
        // while x < y do skip done -> var x; var y; bge 1; branch -4
        let c = prog("while x < y do skip done");
        assert_eq!(
            compile_cmd(&c).0,
            [
                Instr::Var(id("x")),
                Instr::Var(id("y")),
                Instr::Bge(1),
                Instr::Branch(-4)
            ]
        );
    }

    #[test]
    fn if_layout_matches_the_scheme() {
        // if x = y then x := 1 else x := 2 end
        let c = prog("if x = y then x := 1 else x := 2 end");
        assert_eq!(
            compile_cmd(&c).0,
            [
                Instr::Var(id("x")),
                Instr::Var(id("y")),
                Instr::Bne(3),
                Instr::Const(1.into()),
                Instr::Setvar(id("x")),
                Instr::Branch(2),
                Instr::Const(2.into()),
                Instr::Setvar(id("x")),
            ]
        );
    }

    #[test]
    fn halt_occurs_exactly_once_and_last() {
        for src in [
            "skip",
            "x := 1; y := x + 2",
            "while x < y do x := x + 1 done",
            "if x = 0 then skip else while 0 < x do x := x - 1 done end",
        ] {
            let code = compile_program(&prog(src));
            assert_eq!(code.0.last(), Some(&Instr::Halt));
            assert_eq!(
                code.iter().filter(|i| matches!(i, Instr::Halt)).count(),
                1
            );
        }
    }

    #[test]
    fn branch_targets_stay_in_range() {
        let code = compile_program(&prog(
            "if x = 0 then while 0 < y do y := y - 1 done else y := 0 end; \
             while y < x do y := y + 2 done",
        ));
        for (pos, instr) in code.iter().enumerate() {
            if let Instr::Branch(d) | Instr::Bne(d) | Instr::Bge(d) = instr {
                let target = pos as i64 + 1 + d;
                assert!(
                    (0..=code.len()).contains(&target),
                    "target {target} out of [0, {}]",
                    code.len()
                );
            }
        }
    }

    #[test]
    fn compiled_euclid_halts_with_quotient_and_remainder() {
        let c = prog("r := a; q := 0; while b < r+1 do r := r - b; q := q + 1 done");
        let code = compile_program(&c);
        let store = State::from_bindings([(id("a"), 13.into()), (id("b"), 5.into())]);
        match vm_run(&code, MachineState::new(store), 10_000, EvalMode::Math) {
            VmOutcome::Halted { store, .. } => {
                assert_eq!(store.get(&id("q")), BigInt::from(2));
                assert_eq!(store.get(&id("r")), BigInt::from(3));
            }
            other => panic!("unexpected: {other}"),
        }
    }
}
