//! Weakest liberal preconditions and verification-condition generation.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::hoare::ast::{assertion_vars, subst, AExpr, Assertion, CmpOp, Vc};
use crate::syntax::AnnCmd;

/// Weakest liberal precondition of `c` for postcondition `q`:
///
/// ```text
/// wp(skip, Q)                      = Q
/// wp(x := e, Q)                    = Q[x <- e]
/// wp(c1; c2, Q)                    = wp(c1, wp(c2, Q))
/// wp(if b then c1 else c2, Q)      = (b true && wp(c1, Q)) || (b false && wp(c2, Q))
/// wp(while b invariant P do c, Q)  = P
/// wp(assert P, Q)                  = P
/// ```
pub fn wp(c: &AnnCmd, q: &Assertion) -> Assertion {
    match c {
        AnnCmd::Skip => q.clone(),
        AnnCmd::Assign(x, e) => subst(q, x, e),
        AnnCmd::Seq(c1, c2) => wp(c1, &wp(c2, q)),
        AnnCmd::If(b, c1, c2) => Assertion::or(
            Assertion::and(Assertion::BTrue(b.clone()), wp(c1, q)),
            Assertion::and(Assertion::BFalse(b.clone()), wp(c2, q)),
        ),
        AnnCmd::While { invariant, .. } => invariant.clone(),
        AnnCmd::Assert(p) => p.clone(),
    }
}

/// Side conditions under which the triple `{wp(c, Q)} c {Q}` holds,
/// flattened to one [`Vc`] per conjunct:
///
/// ```text
/// vcg(skip, Q) = vcg(x := e, Q)    = (nothing)
/// vcg(c1; c2, Q)                   = vcg(c1, wp(c2, Q)), vcg(c2, Q)
/// vcg(if b then c1 else c2, Q)     = vcg(c1, Q), vcg(c2, Q)
/// vcg(while b invariant P do c, Q) = vcg(c, P),
///                                    (b false && P -> Q),
///                                    (b true && P -> wp(c, P))
/// vcg(assert P, Q)                 = (P -> Q)
/// ```
pub fn vcg(c: &AnnCmd, q: &Assertion) -> Vec<Vc> {
    let mut out = Vec::new();
    vcg_into(c, q, &mut out);
    out
}

fn vcg_into(c: &AnnCmd, q: &Assertion, out: &mut Vec<Vc>) {
    match c {
        AnnCmd::Skip | AnnCmd::Assign(..) => {}
        AnnCmd::Seq(c1, c2) => {
            vcg_into(c1, &wp(c2, q), out);
            vcg_into(c2, q, out);
        }
        AnnCmd::If(_, c1, c2) => {
            vcg_into(c1, q, out);
            vcg_into(c2, q, out);
        }
        AnnCmd::While {
            cond,
            invariant,
            body,
            ..
        } => {
            vcg_into(body, invariant, out);
            out.push(Vc::new(
                Assertion::implies(
                    Assertion::and(Assertion::BFalse(cond.clone()), invariant.clone()),
                    q.clone(),
                ),
                format!("while {cond}: invariant implies postcondition on exit"),
            ));
            out.push(Vc::new(
                Assertion::implies(
                    Assertion::and(Assertion::BTrue(cond.clone()), invariant.clone()),
                    wp(body, invariant),
                ),
                format!("while {cond}: invariant preserved by the body"),
            ));
        }
        AnnCmd::Assert(p) => {
            out.push(Vc::new(
                Assertion::implies(p.clone(), q.clone()),
                format!("assert {{ {p} }}"),
            ));
        }
    }
}

/// All conditions for the triple `{P} c {Q}`:
/// `(P -> wp(c, Q))` followed by `vcg(c, Q)`.
pub fn vcgen(p: &Assertion, c: &AnnCmd, q: &Assertion) -> Vec<Vc> {
    let mut out = Vec::with_capacity(4);
    out.push(Vc::new(
        Assertion::implies(p.clone(), wp(c, q)),
        String::from("precondition establishes the weakest precondition"),
    ));
    vcg_into(c, q, &mut out);
    out
}

/// Termination conditions for every loop that carries a measure.
///
/// Each measured loop `while b invariant P measure e do c done` contributes,
/// with a fresh ghost `v`:
///
/// ```text
/// (b true && e = v && P) -> wp(c, 0 <= e && e < v && P)
/// ```
///
/// Loops without a measure contribute nothing (partial correctness only).
pub fn termination_vcs(c: &AnnCmd) -> Vec<Vc> {
    let mut used = BTreeSet::new();
    collect_ghosts(c, &mut used);
    let mut fresh = FreshGhosts { used, next: 0 };
    let mut out = Vec::new();
    walk(c, &mut fresh, &mut out);
    out
}

struct FreshGhosts {
    used: BTreeSet<String>,
    next: u32,
}

impl FreshGhosts {
    fn fresh(&mut self) -> String {
        loop {
            let candidate = if self.next == 0 {
                String::from("v")
            } else {
                format!("v{}", self.next)
            };
            self.next += 1;
            if !self.used.contains(&candidate) {
                self.used.insert(candidate.clone());
                return candidate;
            }
        }
    }
}

fn collect_ghosts(c: &AnnCmd, out: &mut BTreeSet<String>) {
    match c {
        AnnCmd::Skip | AnnCmd::Assign(..) => {}
        AnnCmd::Seq(c1, c2) | AnnCmd::If(_, c1, c2) => {
            collect_ghosts(c1, out);
            collect_ghosts(c2, out);
        }
        AnnCmd::While {
            invariant, body, ..
        } => {
            out.extend(assertion_vars(invariant).1);
            collect_ghosts(body, out);
        }
        AnnCmd::Assert(p) => out.extend(assertion_vars(p).1),
    }
}

fn walk(c: &AnnCmd, fresh: &mut FreshGhosts, out: &mut Vec<Vc>) {
    match c {
        AnnCmd::Skip | AnnCmd::Assign(..) | AnnCmd::Assert(_) => {}
        AnnCmd::Seq(c1, c2) | AnnCmd::If(_, c1, c2) => {
            walk(c1, fresh, out);
            walk(c2, fresh, out);
        }
        AnnCmd::While {
            cond,
            invariant,
            measure,
            body,
        } => {
            if let Some(measure) = measure {
                let v = AExpr::Ghost(fresh.fresh());
                let premise = Assertion::and(
                    Assertion::BTrue(cond.clone()),
                    Assertion::and(
                        Assertion::Cmp(CmpOp::Eq, measure.clone(), v.clone()),
                        invariant.clone(),
                    ),
                );
                let decreased = Assertion::and(
                    Assertion::Cmp(CmpOp::Le, AExpr::constant(0), measure.clone()),
                    Assertion::and(
                        Assertion::Cmp(CmpOp::Lt, measure.clone(), v),
                        invariant.clone(),
                    ),
                );
                out.push(Vc::new(
                    Assertion::implies(premise, wp(body, &decreased)),
                    format!("while {cond}: measure {measure} decreases and stays nonnegative"),
                ));
            }
            walk(body, fresh, out);
        }
    }
}
