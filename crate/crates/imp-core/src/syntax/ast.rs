//! Abstract syntax of IMP programs, plain and annotated.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;

use crate::hoare::{AExpr, Assertion};

/// Words that the grammar claims for itself; none of them is a valid [`Ident`].
pub const RESERVED_WORDS: &[&str] = &[
    "skip",
    "if",
    "then",
    "else",
    "end",
    "while",
    "do",
    "done",
    "invariant",
    "measure",
    "assert",
    "true",
    "false",
];

/// A program identifier: `[A-Za-z_][A-Za-z0-9_]*`, not a reserved word.
///
/// Two identifiers are equal iff their names are byte-equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Ident(String);

/// Rejection reason for [`Ident::new`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdentError {
    Empty,
    BadChar { at: usize, ch: char },
    Reserved(String),
}

impl fmt::Display for IdentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentError::Empty => write!(f, "identifier is empty"),
            IdentError::BadChar { at, ch } => {
                write!(f, "invalid character {ch:?} at byte {at} in identifier")
            }
            IdentError::Reserved(w) => write!(f, "{w:?} is a reserved word"),
        }
    }
}

impl Ident {
    pub fn new(name: &str) -> Result<Self, IdentError> {
        let mut chars = name.char_indices();
        match chars.next() {
            None => return Err(IdentError::Empty),
            Some((_, c)) if c.is_ascii_alphabetic() || c == '_' => {}
            Some((at, ch)) => return Err(IdentError::BadChar { at, ch }),
        }
        for (at, ch) in chars {
            if !(ch.is_ascii_alphanumeric() || ch == '_') {
                return Err(IdentError::BadChar { at, ch });
            }
        }
        if RESERVED_WORDS.contains(&name) {
            return Err(IdentError::Reserved(name.to_owned()));
        }
        Ok(Ident(name.to_owned()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl core::str::FromStr for Ident {
    type Err = IdentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ident::new(s)
    }
}

/// Arithmetic expressions: variables, integer constants, `+`, `-`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Var(Ident),
    Const(BigInt),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(x: Ident) -> Expr {
        Expr::Var(x)
    }

    pub fn constant(n: impl Into<BigInt>) -> Expr {
        Expr::Const(n.into())
    }

    pub fn add(l: Expr, r: Expr) -> Expr {
        Expr::Add(Box::new(l), Box::new(r))
    }

    pub fn sub(l: Expr, r: Expr) -> Expr {
        Expr::Sub(Box::new(l), Box::new(r))
    }
}

/// Boolean expressions (conditions): equality and strict less-than.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoolExpr {
    Eq(Expr, Expr),
    Lt(Expr, Expr),
}

/// Plain commands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cmd {
    Skip,
    Assign(Ident, Expr),
    Seq(Box<Cmd>, Box<Cmd>),
    If(BoolExpr, Box<Cmd>, Box<Cmd>),
    While(BoolExpr, Box<Cmd>),
}

impl Cmd {
    pub fn seq(c1: Cmd, c2: Cmd) -> Cmd {
        Cmd::Seq(Box::new(c1), Box::new(c2))
    }

    pub fn if_then_else(cond: BoolExpr, then: Cmd, els: Cmd) -> Cmd {
        Cmd::If(cond, Box::new(then), Box::new(els))
    }

    pub fn while_do(cond: BoolExpr, body: Cmd) -> Cmd {
        Cmd::While(cond, Box::new(body))
    }

    /// Number of AST nodes (commands, expressions, conditions).
    pub fn size(&self) -> usize {
        fn expr_size(e: &Expr) -> usize {
            match e {
                Expr::Var(_) | Expr::Const(_) => 1,
                Expr::Add(l, r) | Expr::Sub(l, r) => 1 + expr_size(l) + expr_size(r),
            }
        }
        fn bool_size(b: &BoolExpr) -> usize {
            let (BoolExpr::Eq(l, r) | BoolExpr::Lt(l, r)) = b;
            1 + expr_size(l) + expr_size(r)
        }
        match self {
            Cmd::Skip => 1,
            Cmd::Assign(_, e) => 1 + expr_size(e),
            Cmd::Seq(c1, c2) => 1 + c1.size() + c2.size(),
            Cmd::If(b, c1, c2) => 1 + bool_size(b) + c1.size() + c2.size(),
            Cmd::While(b, c) => 1 + bool_size(b) + c.size(),
        }
    }
}

/// Commands with verification annotations: loops carry an invariant and an
/// optional measure expression, and `assert { P }` is an extra statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnnCmd {
    Skip,
    Assign(Ident, Expr),
    Seq(Box<AnnCmd>, Box<AnnCmd>),
    If(BoolExpr, Box<AnnCmd>, Box<AnnCmd>),
    While {
        cond: BoolExpr,
        invariant: Assertion,
        measure: Option<AExpr>,
        body: Box<AnnCmd>,
    },
    Assert(Assertion),
}

impl AnnCmd {
    pub fn seq(c1: AnnCmd, c2: AnnCmd) -> AnnCmd {
        AnnCmd::Seq(Box::new(c1), Box::new(c2))
    }

    pub fn if_then_else(cond: BoolExpr, then: AnnCmd, els: AnnCmd) -> AnnCmd {
        AnnCmd::If(cond, Box::new(then), Box::new(els))
    }

    pub fn while_do(
        cond: BoolExpr,
        invariant: Assertion,
        measure: Option<AExpr>,
        body: AnnCmd,
    ) -> AnnCmd {
        AnnCmd::While {
            cond,
            invariant,
            measure,
            body: Box::new(body),
        }
    }
}

/// Strips annotations: invariants and measures disappear, `assert { P }`
/// becomes `skip`, everything else is preserved structurally.
pub fn erase(c: &AnnCmd) -> Cmd {
    match c {
        AnnCmd::Skip => Cmd::Skip,
        AnnCmd::Assign(x, e) => Cmd::Assign(x.clone(), e.clone()),
        AnnCmd::Seq(c1, c2) => Cmd::seq(erase(c1), erase(c2)),
        AnnCmd::If(b, c1, c2) => Cmd::if_then_else(b.clone(), erase(c1), erase(c2)),
        AnnCmd::While { cond, body, .. } => Cmd::while_do(cond.clone(), erase(body)),
        AnnCmd::Assert(_) => Cmd::Skip,
    }
}

/// Lifts a plain command into an annotated one: every loop gets invariant
/// `true` and no measure. `erase(lift(c)) == c`.
pub fn lift(c: &Cmd) -> AnnCmd {
    match c {
        Cmd::Skip => AnnCmd::Skip,
        Cmd::Assign(x, e) => AnnCmd::Assign(x.clone(), e.clone()),
        Cmd::Seq(c1, c2) => AnnCmd::seq(lift(c1), lift(c2)),
        Cmd::If(b, c1, c2) => AnnCmd::if_then_else(b.clone(), lift(c1), lift(c2)),
        Cmd::While(b, body) => AnnCmd::while_do(b.clone(), Assertion::True, None, lift(body)),
    }
}

/// A finite set of identifiers, iterated in name order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct VarSet(BTreeSet<Ident>);

impl VarSet {
    pub fn new() -> VarSet {
        VarSet(BTreeSet::new())
    }

    pub fn singleton(x: Ident) -> VarSet {
        let mut s = BTreeSet::new();
        s.insert(x);
        VarSet(s)
    }

    pub fn insert(&mut self, x: Ident) {
        self.0.insert(x);
    }

    pub fn remove(&mut self, x: &Ident) {
        self.0.remove(x);
    }

    pub fn contains(&self, x: &Ident) -> bool {
        self.0.contains(x)
    }

    pub fn union(&self, other: &VarSet) -> VarSet {
        VarSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn difference(&self, other: &VarSet) -> VarSet {
        VarSet(self.0.difference(&other.0).cloned().collect())
    }

    /// `self` minus one identifier.
    pub fn without(&self, x: &Ident) -> VarSet {
        let mut s = self.clone();
        s.remove(x);
        s
    }

    pub fn is_subset(&self, other: &VarSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Ident> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<Ident> for VarSet {
    fn from_iter<T: IntoIterator<Item = Ident>>(iter: T) -> Self {
        VarSet(iter.into_iter().collect())
    }
}

impl IntoIterator for VarSet {
    type Item = Ident;
    type IntoIter = alloc::collections::btree_set::IntoIter<Ident>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Identifiers occurring in an expression.
pub fn free_vars_expr(e: &Expr) -> VarSet {
    let mut out = VarSet::new();
    collect_expr(e, &mut out);
    out
}

/// Identifiers occurring in a condition.
pub fn free_vars_bool(b: &BoolExpr) -> VarSet {
    let mut out = VarSet::new();
    collect_bool(b, &mut out);
    out
}

/// Identifiers occurring anywhere in a command, read or assigned.
pub fn free_vars_cmd(c: &Cmd) -> VarSet {
    let mut out = VarSet::new();
    collect_cmd(c, &mut out);
    out
}

fn collect_expr(e: &Expr, out: &mut VarSet) {
    match e {
        Expr::Var(x) => out.insert(x.clone()),
        Expr::Const(_) => {}
        Expr::Add(l, r) | Expr::Sub(l, r) => {
            collect_expr(l, out);
            collect_expr(r, out);
        }
    }
}

fn collect_bool(b: &BoolExpr, out: &mut VarSet) {
    let (BoolExpr::Eq(l, r) | BoolExpr::Lt(l, r)) = b;
    collect_expr(l, out);
    collect_expr(r, out);
}

fn collect_cmd(c: &Cmd, out: &mut VarSet) {
    match c {
        Cmd::Skip => {}
        Cmd::Assign(x, e) => {
            out.insert(x.clone());
            collect_expr(e, out);
        }
        Cmd::Seq(c1, c2) => {
            collect_cmd(c1, out);
            collect_cmd(c2, out);
        }
        Cmd::If(b, c1, c2) => {
            collect_bool(b, out);
            collect_cmd(c1, out);
            collect_cmd(c2, out);
        }
        Cmd::While(b, body) => {
            collect_bool(b, out);
            collect_cmd(body, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hoare::Assertion;

    fn id(s: &str) -> Ident {
        Ident::new(s).unwrap()
    }

    #[test]
    fn ident_rules() {
        assert!(Ident::new("x").is_ok());
        assert!(Ident::new("_private0").is_ok());
        assert_eq!(Ident::new(""), Err(IdentError::Empty));
        assert!(matches!(Ident::new("0x"), Err(IdentError::BadChar { .. })));
        assert!(matches!(Ident::new("a-b"), Err(IdentError::BadChar { .. })));
        for w in RESERVED_WORDS {
            assert_eq!(Ident::new(w), Err(IdentError::Reserved((*w).into())));
        }
        // requires/ensures are contextual, not reserved
        assert!(Ident::new("requires").is_ok());
        assert!(Ident::new("ensures").is_ok());
    }

    #[test]
    fn erase_examples() {
        assert_eq!(erase(&AnnCmd::Assert(Assertion::False)), Cmd::Skip);

        let b = BoolExpr::Lt(Expr::var(id("x")), Expr::constant(3));
        let annotated = AnnCmd::while_do(
            b.clone(),
            Assertion::True,
            Some(crate::hoare::AExpr::Var(id("x"))),
            AnnCmd::Assert(Assertion::True),
        );
        assert_eq!(erase(&annotated), Cmd::while_do(b, Cmd::Skip));
    }

    #[test]
    fn erase_of_lifted_is_identity() {
        let c = Cmd::seq(
            Cmd::Assign(id("x"), Expr::constant(1)),
            Cmd::while_do(
                BoolExpr::Lt(Expr::var(id("x")), Expr::constant(5)),
                Cmd::Assign(id("x"), Expr::add(Expr::var(id("x")), Expr::constant(1))),
            ),
        );
        assert_eq!(erase(&lift(&c)), c);
    }

    #[test]
    fn free_vars_examples() {
        let e = Expr::add(Expr::var(id("x")), Expr::constant(1));
        assert_eq!(free_vars_expr(&e), VarSet::singleton(id("x")));
        assert_eq!(free_vars_expr(&Expr::constant(5)), VarSet::new());

        let b = BoolExpr::Lt(
            Expr::var(id("b")),
            Expr::add(Expr::var(id("r")), Expr::constant(1)),
        );
        let expected: VarSet = [id("b"), id("r")].into_iter().collect();
        assert_eq!(free_vars_bool(&b), expected);
    }

    #[test]
    fn free_vars_cmd_includes_targets() {
        let c = Cmd::Assign(id("x"), Expr::var(id("y")));
        let expected: VarSet = [id("x"), id("y")].into_iter().collect();
        assert_eq!(free_vars_cmd(&c), expected);
    }

    #[test]
    fn varset_laws() {
        let a: VarSet = [id("a"), id("b")].into_iter().collect();
        let b: VarSet = [id("b"), id("c")].into_iter().collect();
        let u = a.union(&b);
        assert_eq!(u.len(), 3);
        assert!(a.is_subset(&u) && b.is_subset(&u));
        assert_eq!(
            a.difference(&b),
            VarSet::singleton(id("a"))
        );
        let names: alloc::vec::Vec<&str> = u.iter().map(|x| x.as_str()).collect();
        assert_eq!(names, ["a", "b", "c"]); // sorted iteration
    }
}
