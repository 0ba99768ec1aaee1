//! Bounded counterexample search: exhaustive evaluation of verification
//! conditions over a box of integer valuations.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::hoare::ast::{assertion_vars, Vc};
use crate::hoare::eval::{eval_assertion, GhostEnv};
use crate::semantics::State;
use crate::syntax::Ident;

/// An assignment of box values to the variables and ghosts of one VC.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Valuation {
    pub vars: BTreeMap<Ident, BigInt>,
    pub ghosts: BTreeMap<String, BigInt>,
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (x, v) in &self.vars {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{x} = {v}")?;
        }
        for (g, v) in &self.ghosts {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "${g} = {v}")?;
        }
        if first {
            write!(f, "(empty valuation)")?;
        }
        Ok(())
    }
}

/// A falsified VC together with the falsifying valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub vc_index: usize,
    pub origin: String,
    pub valuation: Valuation,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "VC #{} ({}) falsified by {}",
            self.vc_index + 1,
            self.origin,
            self.valuation
        )
    }
}

/// The box would require more evaluations than the budget allows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetExceeded {
    pub vc_index: usize,
    pub origin: String,
    pub required: u128,
    pub budget: u64,
}

impl fmt::Display for BudgetExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "counterexample search budget exceeded on VC #{} ({}): {} valuations needed, budget {}",
            self.vc_index + 1,
            self.origin,
            self.required,
            self.budget
        )
    }
}

/// Default per-VC enumeration budget for [`find_counterexample`].
pub const DEFAULT_SEARCH_BUDGET: u64 = 2_000_000;

/// Exhaustively evaluates each VC over all integer valuations of its
/// variables and ghosts in `[-bound, bound]`, in lexicographic order
/// (variables sorted by name first, then ghosts).
///
/// Returns the first falsifying valuation, or `None` when every VC holds
/// everywhere **in the box** — which is not validity.
pub fn find_counterexample(
    vcs: &[Vc],
    bound: u64,
) -> Result<Option<Counterexample>, BudgetExceeded> {
    find_counterexample_with_budget(vcs, bound, DEFAULT_SEARCH_BUDGET)
}

/// [`find_counterexample`] with an explicit per-VC enumeration budget.
pub fn find_counterexample_with_budget(
    vcs: &[Vc],
    bound: u64,
    budget: u64,
) -> Result<Option<Counterexample>, BudgetExceeded> {
    for (vc_index, vc) in vcs.iter().enumerate() {
        let (vars, ghosts) = assertion_vars(&vc.formula);
        let vars: Vec<Ident> = vars.into_iter().collect();
        let ghosts: Vec<String> = ghosts.into_iter().collect();
        let k = vars.len() + ghosts.len();

        let width = 2u128 * bound as u128 + 1;
        let required = width.checked_pow(k as u32).unwrap_or(u128::MAX);
        if required > budget as u128 {
            return Err(BudgetExceeded {
                vc_index,
                origin: vc.origin.clone(),
                required,
                budget,
            });
        }

        let lo = -(bound as i64);
        let hi = bound as i64;
        let mut cursor: Vec<i64> = alloc::vec![lo; k];
        loop {
            let mut state = State::new();
            for (x, v) in vars.iter().zip(&cursor) {
                state.set(x.clone(), BigInt::from(*v));
            }
            let mut ghost_env = GhostEnv::new();
            for (g, v) in ghosts.iter().zip(&cursor[vars.len()..]) {
                ghost_env.insert(g.clone(), BigInt::from(*v));
            }
            let holds = eval_assertion(&vc.formula, &state, &ghost_env)
                .expect("all ghosts are bound by construction");
            if !holds {
                return Ok(Some(Counterexample {
                    vc_index,
                    origin: vc.origin.clone(),
                    valuation: Valuation {
                        vars: vars.iter().cloned().zip(cursor.iter().map(|v| BigInt::from(*v))).collect(),
                        ghosts: ghosts
                            .iter()
                            .cloned()
                            .zip(cursor[vars.len()..].iter().map(|v| BigInt::from(*v)))
                            .collect(),
                    },
                }));
            }
            // lexicographic successor: bump the last coordinate first
            let mut advanced = false;
            let mut i = k;
            while i > 0 {
                i -= 1;
                if cursor[i] < hi {
                    cursor[i] += 1;
                    for c in &mut cursor[i + 1..] {
                        *c = lo;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_assertion;

    fn vc(src: &str) -> Vc {
        Vc::new(parse_assertion(src).unwrap(), src)
    }

    #[test]
    fn valid_in_box() {
        // x >= 0 -> x + 1 > 0 has no counterexample in [-10, 10]
        let vcs = [vc("x >= 0 -> x + 1 > 0")];
        assert_eq!(find_counterexample(&vcs, 10), Ok(None));
    }

    #[test]
    fn first_counterexample_in_lexicographic_order() {
        // x >= 0 -> x - 1 >= 0 fails first at x = 0
        let vcs = [vc("x >= 0 -> x - 1 >= 0")];
        let cex = find_counterexample(&vcs, 10).unwrap().unwrap();
        assert_eq!(cex.vc_index, 0);
        assert_eq!(cex.valuation.vars[&Ident::new("x").unwrap()], 0.into());
    }

    #[test]
    fn ghosts_are_enumerated_too() {
        let vcs = [vc("$v < x")];
        let cex = find_counterexample(&vcs, 2).unwrap().unwrap();
        // first lexicographic falsifier: x = -2, $v = -2
        assert_eq!(cex.valuation.vars[&Ident::new("x").unwrap()], (-2).into());
        assert_eq!(cex.valuation.ghosts["v"], (-2).into());
    }

    #[test]
    fn closed_vc_is_checked_once() {
        assert_eq!(find_counterexample(&[vc("1 < 2")], 3), Ok(None));
        let cex = find_counterexample(&[vc("2 < 1")], 3).unwrap().unwrap();
        assert!(cex.valuation.vars.is_empty() && cex.valuation.ghosts.is_empty());
    }

    #[test]
    fn budget_error_is_explicit() {
        // six distinct variables at bound 10: 21^6 > 2,000,000
        let vcs = [vc("a + b + c + d + e + f = 0")];
        let err = find_counterexample(&vcs, 10).unwrap_err();
        assert_eq!(err.vc_index, 0);
        assert!(err.required > err.budget as u128);
    }

    #[test]
    fn bound_zero_is_the_all_zero_valuation() {
        let vcs = [vc("x = 0")];
        assert_eq!(find_counterexample(&vcs, 0), Ok(None));
        let cex = find_counterexample(&[vc("x <> 0")], 0).unwrap().unwrap();
        assert_eq!(cex.valuation.vars[&Ident::new("x").unwrap()], 0.into());
    }
}
