//! Execution semantics: states, expression evaluation in three modes, the
//! small-step reduction engine, and the fuel-bounded interpreter.

mod interp;
mod step;

pub use interp::{
    classify, interp, Discrepancy, INTERP_ESCALATION_CAP, SMALL_STEP_ESCALATION_CAP,
};
pub use step::{run_small_step, run_small_step_traced, step};

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::syntax::{BoolExpr, Cmd, Expr, Ident};

/// How expressions are evaluated.
///
/// `Math` is exact integer arithmetic. `Wrap32` pushes every value through
/// [`normalize32`], i.e. signed 32-bit wraparound arithmetic. `Strict`
/// treats unbound variables as undefined and propagates undefinedness
/// upward instead of defaulting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum EvalMode {
    Math,
    Wrap32,
    Strict,
}

impl fmt::Display for EvalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalMode::Math => "math",
            EvalMode::Wrap32 => "wrap32",
            EvalMode::Strict => "strict",
        })
    }
}

/// Reduces `n` modulo 2^32 into the interval [-2^31, 2^31).
pub fn normalize32(n: &BigInt) -> BigInt {
    let modulus: BigInt = BigInt::one() << 32u32;
    let half: BigInt = BigInt::one() << 31u32;
    let mut r = n.mod_floor(&modulus);
    if r >= half {
        r -= modulus;
    }
    r
}

/// A store mapping identifiers to integers.
///
/// Lookup is total in `Math`/`Wrap32` mode: unbound identifiers read the
/// default (0 unless configured otherwise). In `Strict` mode only explicit
/// bindings count and unbound lookups are undefined. Updates are
/// persistent: [`State::update`] returns a new state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    bindings: BTreeMap<Ident, BigInt>,
    default: BigInt,
}

impl Default for State {
    fn default() -> Self {
        State::new()
    }
}

impl State {
    /// The empty state with default 0.
    pub fn new() -> State {
        State {
            bindings: BTreeMap::new(),
            default: BigInt::zero(),
        }
    }

    pub fn with_default(default: BigInt) -> State {
        State {
            bindings: BTreeMap::new(),
            default,
        }
    }

    pub fn from_bindings<I>(bindings: I) -> State
    where
        I: IntoIterator<Item = (Ident, BigInt)>,
    {
        State {
            bindings: bindings.into_iter().collect(),
            default: BigInt::zero(),
        }
    }

    /// Total lookup: the binding for `x`, or the default.
    pub fn get(&self, x: &Ident) -> BigInt {
        self.bindings.get(x).unwrap_or(&self.default).clone()
    }

    /// Strict lookup: only explicit bindings.
    pub fn get_bound(&self, x: &Ident) -> Option<&BigInt> {
        self.bindings.get(x)
    }

    /// Persistent update: `update(s, x, v)` then `get(x)` yields `v`,
    /// all other lookups are unchanged.
    pub fn update(&self, x: Ident, v: BigInt) -> State {
        let mut next = self.clone();
        next.bindings.insert(x, v);
        next
    }

    /// In-place insert, for building initial states.
    pub fn set(&mut self, x: Ident, v: BigInt) {
        self.bindings.insert(x, v);
    }

    pub fn bindings(&self) -> &BTreeMap<Ident, BigInt> {
        &self.bindings
    }

    pub fn default_value(&self) -> &BigInt {
        &self.default
    }

    /// Extensional comparison under total lookup: equal defaults and equal
    /// values on every identifier bound in either state.
    pub fn same_valuation(&self, other: &State) -> bool {
        if self.default != other.default {
            return false;
        }
        self.bindings
            .keys()
            .chain(other.bindings.keys())
            .all(|x| self.get(x) == other.get(x))
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (x, v)) in self.bindings.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}={v}")?;
        }
        write!(f, "}}")
    }
}

fn wrap(mode: EvalMode, n: BigInt) -> BigInt {
    match mode {
        EvalMode::Wrap32 => normalize32(&n),
        _ => n,
    }
}

/// Evaluates an expression. `None` (undefined) can only arise in `Strict`
/// mode, from an unbound variable.
pub fn eval_expr(s: &State, e: &Expr, mode: EvalMode) -> Option<BigInt> {
    match e {
        Expr::Var(x) => match mode {
            EvalMode::Strict => s.get_bound(x).cloned(),
            EvalMode::Math => Some(s.get(x)),
            // Normalized so results stay in range for any store contents.
            EvalMode::Wrap32 => Some(normalize32(&s.get(x))),
        },
        Expr::Const(n) => Some(wrap(mode, n.clone())),
        Expr::Add(l, r) => {
            let a = eval_expr(s, l, mode)?;
            let b = eval_expr(s, r, mode)?;
            Some(wrap(mode, a + b))
        }
        Expr::Sub(l, r) => {
            let a = eval_expr(s, l, mode)?;
            let b = eval_expr(s, r, mode)?;
            Some(wrap(mode, a - b))
        }
    }
}

/// Evaluates a condition. `None` propagates from strict-mode undefinedness.
pub fn eval_bool(s: &State, b: &BoolExpr, mode: EvalMode) -> Option<bool> {
    match b {
        BoolExpr::Eq(l, r) => Some(eval_expr(s, l, mode)? == eval_expr(s, r, mode)?),
        BoolExpr::Lt(l, r) => Some(eval_expr(s, l, mode)? < eval_expr(s, r, mode)?),
    }
}

/// Result of the fuel-bounded interpreter.
///
/// `Bottom` means the recursion budget ran out. `Wrong` is the strict-mode
/// runtime error, kept distinct from `Bottom` so that fuel exhaustion and
/// going wrong cannot be confused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Res {
    Bottom,
    Value(State),
    Wrong,
}

impl Res {
    /// The approximation order: `Bottom` below everything, definite results
    /// only below themselves.
    pub fn le(&self, other: &Res) -> bool {
        match (self, other) {
            (Res::Bottom, _) => true,
            (Res::Value(a), Res::Value(b)) => a == b,
            (Res::Wrong, Res::Wrong) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Res {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Res::Bottom => write!(f, "bottom (out of fuel)"),
            Res::Value(s) => write!(f, "value {s}"),
            Res::Wrong => write!(f, "wrong"),
        }
    }
}

/// Observed behavior of a bounded run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// Reached `skip` after `steps` reductions.
    Terminated { state: State, steps: u64 },
    /// Irreducible configuration that is not `skip` (strict mode only).
    GoesWrong { reason: String, at: Cmd },
    /// Fuel ran out with a residual command.
    OutOfFuel { residual: Cmd, state: State },
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Terminated { state, steps } => {
                write!(f, "terminated in {steps} steps with {state}")
            }
            Outcome::GoesWrong { reason, at } => write!(f, "goes wrong ({reason}) at `{at}`"),
            Outcome::OutOfFuel { residual, state } => {
                write!(f, "out of fuel at `{residual}` with {state}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Ident;

    fn id(s: &str) -> Ident {
        Ident::new(s).unwrap()
    }

    #[test]
    fn eval_in_known_environment() {
        // {x = 12} |- x + 1 evaluates to 13
        let s = State::from_bindings([(id("x"), 12.into())]);
        let e = Expr::add(Expr::Var(id("x")), Expr::constant(1));
        assert_eq!(eval_expr(&s, &e, EvalMode::Math), Some(13.into()));
    }

    #[test]
    fn constants_ignore_state() {
        assert_eq!(
            eval_expr(&State::new(), &Expr::constant(5), EvalMode::Math),
            Some(5.into())
        );
    }

    #[test]
    fn unbound_reads_default() {
        let s = State::new();
        assert_eq!(eval_expr(&s, &Expr::Var(id("y")), EvalMode::Math), Some(0.into()));
        let s = State::with_default(7.into());
        assert_eq!(eval_expr(&s, &Expr::Var(id("y")), EvalMode::Math), Some(7.into()));
    }

    #[test]
    fn wrap32_overflow_wraps_to_min() {
        let max: BigInt = (BigInt::one() << 31u32) - 1;
        let s = State::from_bindings([(id("x"), max)]);
        let e = Expr::add(Expr::Var(id("x")), Expr::constant(1));
        let min: BigInt = -(BigInt::one() << 31u32);
        assert_eq!(eval_expr(&s, &e, EvalMode::Wrap32), Some(min));
    }

    #[test]
    fn normalize32_boundaries() {
        let two31: BigInt = BigInt::one() << 31u32;
        assert_eq!(normalize32(&two31), -two31.clone());
        assert_eq!(normalize32(&(&two31 - 1)), &two31 - 1);
        assert_eq!(normalize32(&-&two31), -two31.clone());
        assert_eq!(normalize32(&(-&two31 - 1)), &two31 - 1);
        assert_eq!(normalize32(&BigInt::zero()), BigInt::zero());
        assert_eq!(normalize32(&(BigInt::one() << 32u32)), BigInt::zero());
    }

    #[test]
    fn strict_mode_propagates_undefined() {
        let s = State::new(); // y unbound
        let e = Expr::add(Expr::Var(id("y")), Expr::constant(1));
        assert_eq!(eval_expr(&s, &e, EvalMode::Strict), None);

        let b = BoolExpr::Eq(Expr::Var(id("a")), Expr::Var(id("b")));
        let s = State::from_bindings([(id("a"), 1.into())]);
        assert_eq!(eval_bool(&s, &b, EvalMode::Strict), None);
    }

    #[test]
    fn eval_bool_examples() {
        let s = State::from_bindings([(id("a"), 1.into()), (id("b"), 1.into())]);
        let b = BoolExpr::Eq(Expr::Var(id("a")), Expr::Var(id("b")));
        assert_eq!(eval_bool(&s, &b, EvalMode::Math), Some(true));

        // {r=3, b=5}: b < r + 1 is 5 < 4, false
        let s = State::from_bindings([(id("r"), 3.into()), (id("b"), 5.into())]);
        let b = BoolExpr::Lt(
            Expr::Var(id("b")),
            Expr::add(Expr::Var(id("r")), Expr::constant(1)),
        );
        assert_eq!(eval_bool(&s, &b, EvalMode::Math), Some(false));
    }

    #[test]
    fn update_then_lookup() {
        let s = State::new();
        let s2 = s.update(id("x"), 5.into());
        assert_eq!(s2.get(&id("x")), BigInt::from(5));
        assert_eq!(s2.get(&id("y")), BigInt::zero());
        assert_eq!(s.get(&id("x")), BigInt::zero()); // original untouched
    }

    #[test]
    fn res_order() {
        let v = Res::Value(State::new());
        let v2 = Res::Value(State::from_bindings([(id("x"), 1.into())]));
        assert!(Res::Bottom.le(&v));
        assert!(Res::Bottom.le(&Res::Wrong));
        assert!(Res::Bottom.le(&Res::Bottom));
        assert!(v.le(&v));
        assert!(!v.le(&v2));
        assert!(!v.le(&Res::Bottom));
        assert!(Res::Wrong.le(&Res::Wrong));
        assert!(!Res::Wrong.le(&v));
    }
}
