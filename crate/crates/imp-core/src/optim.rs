//! Liveness analysis with bounded fixpoint iteration, dead-code
//! elimination, and the agreement relation that states its correctness.

use crate::semantics::State;
use crate::syntax::{free_vars_bool, free_vars_cmd, free_vars_expr, Cmd, VarSet};

/// Bounded ascending iteration: starting from the empty set, returns the
/// first `F^n(empty)` with `F(F^n(empty)) ⊆ F^n(empty)` for some `n <=
/// iterations`, and `default` when no post-fixpoint shows up in time.
///
/// For a monotone `F` with a pre-fixpoint default, the result `X` always
/// satisfies `F(X) ⊆ X`.
pub fn fixpoint<F>(f: F, default: &VarSet, iterations: u32) -> VarSet
where
    F: Fn(&VarSet) -> VarSet,
{
    let mut x = VarSet::new();
    for _ in 0..=iterations {
        let fx = f(&x);
        if fx.is_subset(&x) {
            return x;
        }
        x = fx;
    }
    default.clone()
}

/// Variables live "before" `c`, given the set `after` live "after" it:
///
/// ```text
/// live(skip, A)                 = A
/// live(x := e, A)               = (A \ {x}) ∪ FV(e)   if x ∈ A
///                               = A                   otherwise
/// live(c1; c2, A)               = live(c1, live(c2, A))
/// live(if b then c1 else c2, A) = FV(b) ∪ live(c1, A) ∪ live(c2, A)
/// live(while b do c done, A)    = fix(X -> A ∪ FV(b) ∪ live(c, X),
///                                     A ∪ FV(while b do c done))
/// ```
///
/// The loop fixpoint is bounded by `|FV(c) ∪ A| + 2` iterations; the
/// transformer is monotone over that finite universe, so the default is
/// unreachable for liveness itself.
pub fn live(c: &Cmd, after: &VarSet) -> VarSet {
    match c {
        Cmd::Skip => after.clone(),
        Cmd::Assign(x, e) => {
            if after.contains(x) {
                after.without(x).union(&free_vars_expr(e))
            } else {
                after.clone()
            }
        }
        Cmd::Seq(c1, c2) => live(c1, &live(c2, after)),
        Cmd::If(b, c1, c2) => free_vars_bool(b)
            .union(&live(c1, after))
            .union(&live(c2, after)),
        Cmd::While(b, body) => {
            let guard_vars = free_vars_bool(b);
            let default = after.union(&free_vars_cmd(c));
            let budget = (free_vars_cmd(c).union(after).len() + 2) as u32;
            fixpoint(
                |x| after.union(&guard_vars).union(&live(body, x)),
                &default,
                budget,
            )
        }
    }
}

/// Dead-code elimination: assignments to variables that are dead afterwards
/// become `skip`.
///
/// The loop body is transformed with respect to the loop's own live-in set
/// `live(while b do c done, A)`, which contains the guard variables and
/// everything the next iteration may read.
pub fn dce(c: &Cmd, after: &VarSet) -> Cmd {
    match c {
        Cmd::Skip => Cmd::Skip,
        Cmd::Assign(x, e) => {
            if after.contains(x) {
                Cmd::Assign(x.clone(), e.clone())
            } else {
                Cmd::Skip
            }
        }
        Cmd::Seq(c1, c2) => Cmd::seq(dce(c1, &live(c2, after)), dce(c2, after)),
        Cmd::If(b, c1, c2) => Cmd::if_then_else(b.clone(), dce(c1, after), dce(c2, after)),
        Cmd::While(b, body) => {
            let live_in = live(c, after);
            Cmd::while_do(b.clone(), dce(body, &live_in))
        }
    }
}

/// States agree on `on` when they assign equal values to every identifier
/// in it (unbound identifiers read each state's default).
pub fn agree(s1: &State, s2: &State, on: &VarSet) -> bool {
    on.iter().all(|x| s1.get(x) == s2.get(x))
}
