//! The fuel-bounded definitional interpreter and the joint classifier that
//! cross-checks it against the small-step engine.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::semantics::{eval_bool, eval_expr, run_small_step, EvalMode, Outcome, Res, State};
use crate::syntax::Cmd;

/// Runs `c` from `s` with recursion depth bounded by `fuel`.
///
/// Defining equations (`I` is this function, `|> ` the bind that
/// short-circuits on `Bottom`/`Wrong`):
///
/// ```text
/// I(0, c, s)                          = Bottom
/// I(n+1, skip, s)                     = Value(s)
/// I(n+1, x := e, s)                   = Value(s[x <- eval e s])
/// I(n+1, c1; c2, s)                   = I(n, c1, s) |> s' -> I(n, c2, s')
/// I(n+1, if b then c1 else c2, s)     = I(n, c1, s)            if eval b s
/// I(n+1, if b then c1 else c2, s)     = I(n, c2, s)            otherwise
/// I(n+1, while b do c done, s)        = Value(s)               if not (eval b s)
/// I(n+1, while b do c done, s)        = I(n, c, s) |> s' -> I(n, while b do c done, s')
/// ```
///
/// Strict-mode evaluation failure yields `Wrong`, which like `Bottom`
/// short-circuits the bind. The implementation is iterative (an explicit
/// stack of pending continuations, each recorded at the fuel the equations
/// assign it), so arbitrarily large fuel is safe; it computes exactly the
/// function defined by the equations above.
pub fn interp(fuel: u64, c: &Cmd, s: &State, mode: EvalMode) -> Res {
    // pending continuations: (fuel to resume at, command to run next)
    let mut pending: Vec<(u64, &Cmd)> = Vec::new();
    let mut fuel = fuel;
    let mut cur = c;
    let mut state = s.clone();
    loop {
        if fuel == 0 {
            return Res::Bottom;
        }
        match cur {
            Cmd::Skip => match pending.pop() {
                Some((m, k)) => {
                    fuel = m;
                    cur = k;
                }
                None => return Res::Value(state),
            },
            Cmd::Assign(x, e) => match eval_expr(&state, e, mode) {
                None => return Res::Wrong,
                Some(v) => {
                    state = state.update(x.clone(), v);
                    match pending.pop() {
                        Some((m, k)) => {
                            fuel = m;
                            cur = k;
                        }
                        None => return Res::Value(state),
                    }
                }
            },
            Cmd::Seq(c1, c2) => {
                pending.push((fuel - 1, c2));
                fuel -= 1;
                cur = c1;
            }
            Cmd::If(b, c1, c2) => match eval_bool(&state, b, mode) {
                None => return Res::Wrong,
                Some(cond) => {
                    fuel -= 1;
                    cur = if cond { c1 } else { c2 };
                }
            },
            Cmd::While(b, body) => match eval_bool(&state, b, mode) {
                None => return Res::Wrong,
                Some(false) => match pending.pop() {
                    Some((m, k)) => {
                        fuel = m;
                        cur = k;
                    }
                    None => return Res::Value(state),
                },
                Some(true) => {
                    pending.push((fuel - 1, cur));
                    fuel -= 1;
                    cur = body;
                }
            },
        }
    }
}

/// Hard cap on small-step fuel escalation inside [`classify`].
pub const SMALL_STEP_ESCALATION_CAP: u64 = 1_000_000;

/// Hard cap on interpreter fuel escalation inside [`classify`].
pub const INTERP_ESCALATION_CAP: u64 = 1 << 20;

/// The two engines disagreed; this firing is a toolchain bug detector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub interp_result: Res,
    pub small_step: Outcome,
    pub detail: String,
}

impl core::fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "engine discrepancy: interpreter said [{}], small-step said [{}] ({})",
            self.interp_result, self.small_step, self.detail
        )
    }
}

/// Runs both the interpreter and the small-step engine and reports a joint
/// outcome.
///
/// `Ok(Terminated)` is returned only when both engines terminate in the
/// same state; both exhausting their fuel is `Ok(OutOfFuel)`, both going
/// wrong is `Ok(GoesWrong)`. When exactly one engine runs out of fuel, the
/// lagging engine's fuel is doubled iteratively (the two fuels measure
/// different things) up to [`SMALL_STEP_ESCALATION_CAP`] resp.
/// [`INTERP_ESCALATION_CAP`]; a surviving disagreement is an
/// [`Discrepancy`] error.
pub fn classify(c: &Cmd, s: &State, fuel: u64, mode: EvalMode) -> Result<Outcome, Discrepancy> {
    let ri = interp(fuel, c, s, mode);
    let os = run_small_step(c, s, fuel, mode);

    let err = |interp_result: Res, small_step: Outcome, detail: String| {
        Err(Discrepancy {
            interp_result,
            small_step,
            detail,
        })
    };

    match (&ri, &os) {
        (Res::Value(si), Outcome::Terminated { state, .. }) => {
            if si == state {
                Ok(os)
            } else {
                err(ri.clone(), os.clone(), "final states differ".into())
            }
        }
        (Res::Bottom, Outcome::OutOfFuel { .. }) => Ok(os),
        (Res::Wrong, Outcome::GoesWrong { .. }) => Ok(os),

        // Small-step lags behind a definite interpreter result.
        (Res::Value(_) | Res::Wrong, Outcome::OutOfFuel { .. }) => {
            let mut f = fuel.max(1);
            loop {
                f = f.saturating_mul(2).min(SMALL_STEP_ESCALATION_CAP);
                let o2 = run_small_step(c, s, f, mode);
                match (&ri, &o2) {
                    (Res::Value(si), Outcome::Terminated { state, .. }) => {
                        return if si == state {
                            Ok(o2)
                        } else {
                            err(ri.clone(), o2.clone(), "final states differ".into())
                        };
                    }
                    (Res::Wrong, Outcome::GoesWrong { .. }) => return Ok(o2),
                    (_, Outcome::OutOfFuel { .. }) if f < SMALL_STEP_ESCALATION_CAP => {}
                    _ => {
                        return err(
                            ri.clone(),
                            o2.clone(),
                            format!("small-step escalated to fuel {f} without agreeing"),
                        );
                    }
                }
            }
        }

        // Interpreter lags behind a definite small-step outcome.
        (Res::Bottom, Outcome::Terminated { .. } | Outcome::GoesWrong { .. }) => {
            let mut f = fuel.max(1);
            loop {
                f = f.saturating_mul(2).min(INTERP_ESCALATION_CAP);
                let r2 = interp(f, c, s, mode);
                match (&r2, &os) {
                    (Res::Value(si), Outcome::Terminated { state, .. }) => {
                        return if si == state {
                            Ok(os)
                        } else {
                            err(r2.clone(), os.clone(), "final states differ".into())
                        };
                    }
                    (Res::Wrong, Outcome::GoesWrong { .. }) => return Ok(os),
                    (Res::Bottom, _) if f < INTERP_ESCALATION_CAP => {}
                    _ => {
                        return err(
                            r2.clone(),
                            os.clone(),
                            format!("interpreter escalated to fuel {f} without agreeing"),
                        );
                    }
                }
            }
        }

        // Both definite but inconsistent.
        (Res::Value(_), Outcome::GoesWrong { .. }) | (Res::Wrong, Outcome::Terminated { .. }) => {
            err(ri.clone(), os.clone(), "incompatible definite results".into())
        }
    }
}
