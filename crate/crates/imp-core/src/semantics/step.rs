//! Small-step reduction: one elementary computation at a time.

use alloc::format;
use alloc::vec::Vec;

use crate::semantics::{eval_bool, eval_expr, EvalMode, Outcome, State};
use crate::syntax::Cmd;

/// Performs one reduction of the configuration `(c, s)`.
///
/// Returns the unique successor when a rule applies and `None` when the
/// configuration is irreducible: `skip`, or (in strict mode) a redex whose
/// evaluation is undefined.
pub fn step(c: &Cmd, s: &State, mode: EvalMode) -> Option<(Cmd, State)> {
    match c {
        Cmd::Skip => None,
        Cmd::Assign(x, e) => {
            let v = eval_expr(s, e, mode)?;
            Some((Cmd::Skip, s.update(x.clone(), v)))
        }
        Cmd::Seq(c1, c2) => {
            if **c1 == Cmd::Skip {
                Some(((**c2).clone(), s.clone()))
            } else {
                let (c1_next, s_next) = step(c1, s, mode)?;
                Some((Cmd::seq(c1_next, (**c2).clone()), s_next))
            }
        }
        Cmd::If(b, c1, c2) => {
            let cond = eval_bool(s, b, mode)?;
            Some((if cond { (**c1).clone() } else { (**c2).clone() }, s.clone()))
        }
        Cmd::While(b, body) => {
            let cond = eval_bool(s, b, mode)?;
            if cond {
                Some((Cmd::seq((**body).clone(), c.clone()), s.clone()))
            } else {
                Some((Cmd::Skip, s.clone()))
            }
        }
    }
}

fn run(
    c: &Cmd,
    s: &State,
    fuel: u64,
    mode: EvalMode,
    mut trace: Option<&mut Vec<(Cmd, State)>>,
) -> Outcome {
    let mut cur = c.clone();
    let mut state = s.clone();
    if let Some(t) = trace.as_deref_mut() {
        t.push((cur.clone(), state.clone()));
    }
    let mut steps = 0u64;
    loop {
        if cur == Cmd::Skip {
            return Outcome::Terminated { state, steps };
        }
        if steps == fuel {
            return Outcome::OutOfFuel {
                residual: cur,
                state,
            };
        }
        match step(&cur, &state, mode) {
            Some((next_c, next_s)) => {
                cur = next_c;
                state = next_s;
                steps += 1;
                if let Some(t) = trace.as_deref_mut() {
                    t.push((cur.clone(), state.clone()));
                }
            }
            None => {
                return Outcome::GoesWrong {
                    reason: format!("irreducible non-skip configuration in {mode} mode"),
                    at: cur,
                }
            }
        }
    }
}

/// Iterates [`step`] at most `fuel` times.
pub fn run_small_step(c: &Cmd, s: &State, fuel: u64, mode: EvalMode) -> Outcome {
    run(c, s, fuel, mode, None)
}

/// Like [`run_small_step`], also returning every configuration visited
/// (the initial one included).
pub fn run_small_step_traced(
    c: &Cmd,
    s: &State,
    fuel: u64,
    mode: EvalMode,
) -> (Outcome, Vec<(Cmd, State)>) {
    let mut trace = Vec::new();
    let outcome = run(c, s, fuel, mode, Some(&mut trace));
    (outcome, trace)
}
