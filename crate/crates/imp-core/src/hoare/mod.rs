//! Axiomatic semantics: assertions, substitution, weakest liberal
//! preconditions, verification-condition generation (partial correctness
//! and termination), VC discharge by bounded search, and SMT-LIB export.

pub mod ast;
mod eval;
mod search;
mod simplify;
mod smtlib;
mod wp;

pub use ast::{
    aexpr_vars, assertion_vars, embed_bool, embed_expr, subst, subst_aexpr, AExpr, Assertion,
    CmpOp, Vc,
};
pub use eval::{eval_aexpr, eval_assertion, AssertionError, GhostEnv};
pub use search::{
    find_counterexample, find_counterexample_with_budget, BudgetExceeded, Counterexample,
    Valuation, DEFAULT_SEARCH_BUDGET,
};
pub use simplify::simplify;
pub use smtlib::export_smtlib;
pub use wp::{termination_vcs, vcg, vcgen, wp};
