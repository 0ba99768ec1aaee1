//! Lexer and recursive-descent parser for `.imp` source.
//!
//! Grammar (whitespace and `//` comments insignificant):
//!
//! ```text
//! file      := ["requires" "{" assertion "}"] ["ensures" "{" assertion "}"] acmd
//! acmd      := item (";" item)*            -- ";" associates right as Seq
//! item      := "skip" | ident ":=" aexpr
//!            | "if" bexpr "then" acmd "else" acmd "end"
//!            | "while" bexpr ["invariant" "{" assertion "}"] ["measure" aterm-expr]
//!              "do" acmd "done"
//!            | "assert" "{" assertion "}"
//! bexpr     := aexpr ("=" | "<") aexpr
//! aexpr     := term (("+" | "-") term)*
//! term      := ident | integer | "-" integer | "(" aexpr ")"
//! assertion := disj ["->" assertion]       -- "->" associates right
//! disj      := conj ("||" conj)*
//! conj      := neg ("&&" neg)*
//! neg       := "!" neg | "true" | "false" | "(" assertion ")"
//!            | asum ("="|"<>"|"<"|"<="|">"|">=") asum
//! asum      := amul (("+" | "-") amul)*
//! amul      := aterm (("*" | "/") aterm)*
//! aterm     := ident | "$" ident | integer | "-" integer | "(" asum ")"
//! ```
//!
//! `requires` and `ensures` are contextual: they introduce header clauses
//! only at the very start of a file and remain ordinary identifiers
//! elsewhere. Measure expressions reuse the assertion term grammar but may
//! not mention ghosts.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::hoare::{AExpr, Assertion, CmpOp};
use crate::syntax::ast::{AnnCmd, BoolExpr, Expr, Ident};

/// A parsed `.imp` file: optional pre/postcondition headers plus the program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub pre: Assertion,
    pub post: Assertion,
    pub body: AnnCmd,
}

/// Syntax error with source position and the set of tokens that would have
/// been accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub found: String,
    pub expected: Vec<String>,
}

impl core::fmt::Display for ParseError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "syntax error at {}:{}: found {}, expected ",
            self.line, self.col, self.found
        )?;
        for (i, e) in self.expected.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Ghost(String),
    KwSkip,
    KwIf,
    KwThen,
    KwElse,
    KwEnd,
    KwWhile,
    KwDo,
    KwDone,
    KwInvariant,
    KwMeasure,
    KwAssert,
    KwTrue,
    KwFalse,
    Semi,
    Assign,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    LBrace,
    RBrace,
    AndAnd,
    OrOr,
    Bang,
    Arrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Ghost(g) => format!("ghost `${g}`"),
            Tok::KwSkip => "`skip`".into(),
            Tok::KwIf => "`if`".into(),
            Tok::KwThen => "`then`".into(),
            Tok::KwElse => "`else`".into(),
            Tok::KwEnd => "`end`".into(),
            Tok::KwWhile => "`while`".into(),
            Tok::KwDo => "`do`".into(),
            Tok::KwDone => "`done`".into(),
            Tok::KwInvariant => "`invariant`".into(),
            Tok::KwMeasure => "`measure`".into(),
            Tok::KwAssert => "`assert`".into(),
            Tok::KwTrue => "`true`".into(),
            Tok::KwFalse => "`false`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Assign => "`:=`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Ne => "`<>`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Ge => "`>=`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::AndAnd => "`&&`".into(),
            Tok::OrOr => "`||`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: u32,
    col: u32,
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "skip" => Tok::KwSkip,
        "if" => Tok::KwIf,
        "then" => Tok::KwThen,
        "else" => Tok::KwElse,
        "end" => Tok::KwEnd,
        "while" => Tok::KwWhile,
        "do" => Tok::KwDo,
        "done" => Tok::KwDone,
        "invariant" => Tok::KwInvariant,
        "measure" => Tok::KwMeasure,
        "assert" => Tok::KwAssert,
        "true" => Tok::KwTrue,
        "false" => Tok::KwFalse,
        _ => return None,
    })
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn error(&self, found: String, expected: &[&str]) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            found,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b'/') if self.src.get(self.pos + 1) == Some(&b'/') => {
                    while let Some(b) = self.peek() {
                        if b == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn word(&mut self) -> String {
        let start = self.pos;
        while let Some(b) = self.peek() {
            if b.is_ascii_alphanumeric() || b == b'_' {
                self.bump();
            } else {
                break;
            }
        }
        core::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii word")
            .to_string()
    }

    fn number(&mut self) -> BigInt {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.bump();
        }
        BigInt::parse_bytes(&self.src[start..self.pos], 10).expect("digits")
    }

    fn tokenize(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            let (line, col) = (self.line, self.col);
            let tok = match self.peek() {
                None => {
                    out.push(Spanned {
                        tok: Tok::Eof,
                        line,
                        col,
                    });
                    return Ok(out);
                }
                Some(b) if b.is_ascii_digit() => Tok::Int(self.number()),
                Some(b) if b.is_ascii_alphabetic() || b == b'_' => {
                    let w = self.word();
                    keyword(&w).unwrap_or(Tok::Ident(w))
                }
                Some(b'$') => {
                    self.bump();
                    match self.peek() {
                        Some(b) if b.is_ascii_alphabetic() || b == b'_' => Tok::Ghost(self.word()),
                        _ => return Err(self.error("`$`".into(), &["ghost name after `$`"])),
                    }
                }
                Some(b';') => {
                    self.bump();
                    Tok::Semi
                }
                Some(b':') => {
                    self.bump();
                    if self.peek() == Some(b'=') {
                        self.bump();
                        Tok::Assign
                    } else {
                        return Err(self.error("`:`".into(), &["`:=`"]));
                    }
                }
                Some(b'=') => {
                    self.bump();
                    Tok::Eq
                }
                Some(b'<') => {
                    self.bump();
                    match self.peek() {
                        Some(b'=') => {
                            self.bump();
                            Tok::Le
                        }
                        Some(b'>') => {
                            self.bump();
                            Tok::Ne
                        }
                        _ => Tok::Lt,
                    }
                }
                Some(b'>') => {
                    self.bump();
                    if self.peek() == Some(b'=') {
                        self.bump();
                        Tok::Ge
                    } else {
                        Tok::Gt
                    }
                }
                Some(b'+') => {
                    self.bump();
                    Tok::Plus
                }
                Some(b'-') => {
                    self.bump();
                    if self.peek() == Some(b'>') {
                        self.bump();
                        Tok::Arrow
                    } else {
                        Tok::Minus
                    }
                }
                Some(b'*') => {
                    self.bump();
                    Tok::Star
                }
                Some(b'/') => {
                    self.bump();
                    Tok::Slash
                }
                Some(b'(') => {
                    self.bump();
                    Tok::LParen
                }
                Some(b')') => {
                    self.bump();
                    Tok::RParen
                }
                Some(b'{') => {
                    self.bump();
                    Tok::LBrace
                }
                Some(b'}') => {
                    self.bump();
                    Tok::RBrace
                }
                Some(b'&') => {
                    self.bump();
                    if self.peek() == Some(b'&') {
                        self.bump();
                        Tok::AndAnd
                    } else {
                        return Err(self.error("`&`".into(), &["`&&`"]));
                    }
                }
                Some(b'|') => {
                    self.bump();
                    if self.peek() == Some(b'|') {
                        self.bump();
                        Tok::OrOr
                    } else {
                        return Err(self.error("`|`".into(), &["`||`"]));
                    }
                }
                Some(b'!') => {
                    self.bump();
                    Tok::Bang
                }
                Some(b) => {
                    return Err(self.error(
                        format!("character `{}`", b as char),
                        &["a token"],
                    ))
                }
            };
            out.push(Spanned { tok, line, col });
        }
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        let sp = &self.toks[self.pos];
        Err(ParseError {
            line: sp.line,
            col: sp.col,
            found: sp.tok.describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&[name])
        }
    }

    fn ident(&mut self) -> Result<Ident, ParseError> {
        match self.peek() {
            Tok::Ident(name) => {
                let name = name.clone();
                self.bump();
                Ok(Ident::new(&name).expect("lexer produced a valid identifier"))
            }
            _ => self.fail(&["identifier"]),
        }
    }

    // ---- programs ----------------------------------------------------

    fn acmd(&mut self) -> Result<AnnCmd, ParseError> {
        let mut items = alloc::vec![self.item()?];
        while *self.peek() == Tok::Semi {
            self.bump();
            items.push(self.item()?);
        }
        // `;` associates to the right
        let mut cmd = items.pop().expect("at least one item");
        while let Some(prev) = items.pop() {
            cmd = AnnCmd::seq(prev, cmd);
        }
        Ok(cmd)
    }

    fn item(&mut self) -> Result<AnnCmd, ParseError> {
        match self.peek() {
            Tok::KwSkip => {
                self.bump();
                Ok(AnnCmd::Skip)
            }
            Tok::Ident(_) => {
                let x = self.ident()?;
                self.expect(Tok::Assign, "`:=`")?;
                let e = self.expr()?;
                Ok(AnnCmd::Assign(x, e))
            }
            Tok::KwIf => {
                self.bump();
                let b = self.bexpr()?;
                self.expect(Tok::KwThen, "`then`")?;
                let c1 = self.acmd()?;
                self.expect(Tok::KwElse, "`else`")?;
                let c2 = self.acmd()?;
                self.expect(Tok::KwEnd, "`end`")?;
                Ok(AnnCmd::if_then_else(b, c1, c2))
            }
            Tok::KwWhile => {
                self.bump();
                let b = self.bexpr()?;
                let invariant = if *self.peek() == Tok::KwInvariant {
                    self.bump();
                    self.expect(Tok::LBrace, "`{`")?;
                    let p = self.assertion()?;
                    self.expect(Tok::RBrace, "`}`")?;
                    p
                } else {
                    Assertion::True
                };
                let measure = if *self.peek() == Tok::KwMeasure {
                    self.bump();
                    Some(self.asum(false)?)
                } else {
                    None
                };
                self.expect(Tok::KwDo, "`do`")?;
                let body = self.acmd()?;
                self.expect(Tok::KwDone, "`done`")?;
                Ok(AnnCmd::while_do(b, invariant, measure, body))
            }
            Tok::KwAssert => {
                self.bump();
                self.expect(Tok::LBrace, "`{`")?;
                let p = self.assertion()?;
                self.expect(Tok::RBrace, "`}`")?;
                Ok(AnnCmd::Assert(p))
            }
            _ => self.fail(&["`skip`", "identifier", "`if`", "`while`", "`assert`"]),
        }
    }

    fn bexpr(&mut self) -> Result<BoolExpr, ParseError> {
        let l = self.expr()?;
        match self.peek() {
            Tok::Eq => {
                self.bump();
                Ok(BoolExpr::Eq(l, self.expr()?))
            }
            Tok::Lt => {
                self.bump();
                Ok(BoolExpr::Lt(l, self.expr()?))
            }
            _ => self.fail(&["`=`", "`<`"]),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    e = Expr::add(e, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    e = Expr::sub(e, self.term()?);
                }
                _ => return Ok(e),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Ident(_) => Ok(Expr::Var(self.ident()?)),
            Tok::Int(n) => {
                let n = n.clone();
                self.bump();
                Ok(Expr::Const(n))
            }
            Tok::Minus => {
                self.bump();
                match self.peek() {
                    Tok::Int(n) => {
                        let n = -n.clone();
                        self.bump();
                        Ok(Expr::Const(n))
                    }
                    _ => self.fail(&["integer"]),
                }
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => self.fail(&["identifier", "integer", "`-`", "`(`"]),
        }
    }

    // ---- assertions ---------------------------------------------------

    fn assertion(&mut self) -> Result<Assertion, ParseError> {
        let l = self.disj()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let r = self.assertion()?; // right-associative
            Ok(Assertion::implies(l, r))
        } else {
            Ok(l)
        }
    }

    fn disj(&mut self) -> Result<Assertion, ParseError> {
        let mut p = self.conj()?;
        while *self.peek() == Tok::OrOr {
            self.bump();
            p = Assertion::or(p, self.conj()?);
        }
        Ok(p)
    }

    fn conj(&mut self) -> Result<Assertion, ParseError> {
        let mut p = self.neg()?;
        while *self.peek() == Tok::AndAnd {
            self.bump();
            p = Assertion::and(p, self.neg()?);
        }
        Ok(p)
    }

    fn neg(&mut self) -> Result<Assertion, ParseError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Assertion::not(self.neg()?))
            }
            Tok::KwTrue => {
                self.bump();
                Ok(Assertion::True)
            }
            Tok::KwFalse => {
                self.bump();
                Ok(Assertion::False)
            }
            Tok::LParen => {
                // `(` may open a parenthesized term (as in `(a + b) < c`) or a
                // parenthesized assertion; try the comparison reading first.
                let save = self.pos;
                match self.comparison() {
                    Ok(p) => Ok(p),
                    Err(_) => {
                        self.pos = save;
                        self.bump();
                        let p = self.assertion()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(p)
                    }
                }
            }
            Tok::Ident(_) | Tok::Ghost(_) | Tok::Int(_) | Tok::Minus => self.comparison(),
            _ => self.fail(&[
                "`!`",
                "`true`",
                "`false`",
                "`(`",
                "identifier",
                "ghost",
                "integer",
                "`-`",
            ]),
        }
    }

    fn comparison(&mut self) -> Result<Assertion, ParseError> {
        let l = self.asum(true)?;
        let op = match self.peek() {
            Tok::Eq => CmpOp::Eq,
            Tok::Ne => CmpOp::Ne,
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            _ => return self.fail(&["`=`", "`<>`", "`<`", "`<=`", "`>`", "`>=`"]),
        };
        self.bump();
        let r = self.asum(true)?;
        Ok(Assertion::Cmp(op, l, r))
    }

    fn asum(&mut self, ghosts: bool) -> Result<AExpr, ParseError> {
        let mut a = self.amul(ghosts)?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    a = AExpr::add(a, self.amul(ghosts)?);
                }
                Tok::Minus => {
                    self.bump();
                    a = AExpr::sub(a, self.amul(ghosts)?);
                }
                _ => return Ok(a),
            }
        }
    }

    fn amul(&mut self, ghosts: bool) -> Result<AExpr, ParseError> {
        let mut a = self.aterm(ghosts)?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    a = AExpr::mul(a, self.aterm(ghosts)?);
                }
                Tok::Slash => {
                    self.bump();
                    a = AExpr::div(a, self.aterm(ghosts)?);
                }
                _ => return Ok(a),
            }
        }
    }

    fn aterm(&mut self, ghosts: bool) -> Result<AExpr, ParseError> {
        match self.peek() {
            Tok::Ident(_) => Ok(AExpr::Var(self.ident()?)),
            Tok::Ghost(g) if ghosts => {
                let g = g.clone();
                self.bump();
                Ok(AExpr::Ghost(g))
            }
            Tok::Int(n) => {
                let n = n.clone();
                self.bump();
                Ok(AExpr::Const(n))
            }
            Tok::Minus => {
                self.bump();
                match self.peek() {
                    Tok::Int(n) => {
                        let n = -n.clone();
                        self.bump();
                        Ok(AExpr::Const(n))
                    }
                    _ => self.fail(&["integer"]),
                }
            }
            Tok::LParen => {
                self.bump();
                let a = self.asum(ghosts)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(a)
            }
            _ if ghosts => self.fail(&["identifier", "ghost", "integer", "`-`", "`(`"]),
            _ => self.fail(&["identifier", "integer", "`-`", "`(`"]),
        }
    }

    // ---- entry points ---------------------------------------------------

    fn header(&mut self, clause: &str) -> Result<Option<Assertion>, ParseError> {
        if matches!(self.peek(), Tok::Ident(w) if w == clause) && *self.peek2() == Tok::LBrace {
            self.bump();
            self.bump();
            let p = self.assertion()?;
            self.expect(Tok::RBrace, "`}`")?;
            Ok(Some(p))
        } else {
            Ok(None)
        }
    }

    fn file(&mut self) -> Result<SourceFile, ParseError> {
        let pre = self.header("requires")?.unwrap_or(Assertion::True);
        let post = self.header("ensures")?.unwrap_or(Assertion::True);
        let body = self.acmd()?;
        self.expect(Tok::Eof, "end of input")?;
        Ok(SourceFile { pre, post, body })
    }
}

fn parser(src: &str) -> Result<Parser, ParseError> {
    let toks = Lexer::new(src).tokenize()?;
    Ok(Parser { toks, pos: 0 })
}

/// Parses a program (no `requires`/`ensures` headers). Unannotated loops get
/// invariant `true` and no measure.
pub fn parse_program(src: &str) -> Result<AnnCmd, ParseError> {
    let mut p = parser(src)?;
    let body = p.acmd()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(body)
}

/// Parses a whole `.imp` file, including the optional pre/postcondition
/// headers (both default to `true`).
pub fn parse_file(src: &str) -> Result<SourceFile, ParseError> {
    parser(src)?.file()
}

/// Parses a standalone assertion.
pub fn parse_assertion(src: &str) -> Result<Assertion, ParseError> {
    let mut p = parser(src)?;
    let a = p.assertion()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(a)
}
