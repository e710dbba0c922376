//! A first-order linear quantum language with denotations in [`crate::qcat`].
//!
//! The fragment is deliberately small: base types `qubit`, `bit`, `unit`,
//! tensor and sum types, a fixed unitary gate set, preparation,
//! measurement and discarding. Every variable must be used exactly once
//! along every control path, and every well-typed program denotes a
//! completely positive trace-non-increasing family morphism (typically
//! trace-preserving). Higher-order functions and duplication are out of
//! scope; they do not denote at this level.
//!
//! # Grammar
//!
//! ```text
//! program  := { "input" IDENT ":" type ";" } term
//! type     := tensorty { "+" tensorty }            (left associative)
//! tensorty := atomty { "*" atomty }                (left associative)
//! atomty   := "qubit" | "bit" | "unit" | "(" type ")"
//! term     := "let" IDENT "=" term "in" term
//!           | "let" "(" IDENT "," IDENT ")" "=" term "in" term
//!           | "let" "(" ")" "=" term "in" term
//!           | "case" term "of" "{" "0" "->" term ";" "1" "->" term "}"
//!           | "case" term "of" "{" "inl" IDENT "->" term ";"
//!                                  "inr" IDENT "->" term "}"
//!           | "new_qubit" "(" ("0" | "1") ")"
//!           | GATE "(" term ")"                    (GATE in X Y Z H S T)
//!           | "CNOT" "(" term "," term ")"
//!           | "measure" "(" term ")"
//!           | "discard" "(" term ")"
//!           | "inl" "[" type "]" "(" term ")"      (annotation: right summand)
//!           | "inr" "[" type "]" "(" term ")"      (annotation: left summand)
//!           | "(" term "," term ")"
//!           | "(" ")"
//!           | "(" term ")"
//!           | IDENT
//! ```
//!
//! Line comments start with `--`. `bit` cases bind nothing because both
//! components are the unit type; `sum` cases bind one variable per arm.
//!
//! # Denotation
//!
//! `qubit` is the single two-dimensional space, `bit` the two-member
//! family of one-dimensional spaces, `unit` the monoidal unit. A context
//! denotes the tensor of its entries, so a program in context `Γ ⊢ t : τ`
//! denotes a family morphism `⟦Γ⟧ → ⟦τ⟧`. Gates act by conjugation,
//! `measure` is the trace-preserving pair of diagonal compressions,
//! `discard` the full trace, and `case` routes through the distributivity
//! isomorphism and a copairing.

use crate::cpm::{gates, unitary_channel, HObject, KrausSet, LinMap};
use crate::linalg::{c, ComplexMatrix};
use crate::qcat::{
    coproduct_many, copair_many, discard_morphism, distributivity_iso, tensor_mor,
    tensor_permutation, QMorphism, QObject,
};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// Source position, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QlcType {
    Qubit,
    Bit,
    Unit,
    Tensor(Box<QlcType>, Box<QlcType>),
    Sum(Box<QlcType>, Box<QlcType>),
}

impl fmt::Display for QlcType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QlcType::Qubit => write!(f, "qubit"),
            QlcType::Bit => write!(f, "bit"),
            QlcType::Unit => write!(f, "unit"),
            QlcType::Tensor(a, b) => write!(f, "({a} * {b})"),
            QlcType::Sum(a, b) => write!(f, "({a} + {b})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gate {
    X,
    Y,
    Z,
    H,
    S,
    T,
    Cnot,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub kind: TermKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TermKind {
    Var(String),
    Let { x: String, bound: Box<Term>, body: Box<Term> },
    LetPair { a: String, b: String, bound: Box<Term>, body: Box<Term> },
    LetUnit { bound: Box<Term>, body: Box<Term> },
    NewQubit(bool),
    Gate { gate: Gate, args: Vec<Term> },
    Measure(Box<Term>),
    Discard(Box<Term>),
    Pair(Box<Term>, Box<Term>),
    UnitVal,
    Inl { right: QlcType, arg: Box<Term> },
    Inr { left: QlcType, arg: Box<Term> },
    CaseBit { scrutinee: Box<Term>, zero: Box<Term>, one: Box<Term> },
    CaseSum {
        scrutinee: Box<Term>,
        left_var: String,
        left_body: Box<Term>,
        right_var: String,
        right_body: Box<Term>,
    },
}

/// Ordered typing context with unique variable names.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TypingContext {
    pub vars: Vec<(String, QlcType)>,
}

impl TypingContext {
    pub fn new(vars: Vec<(String, QlcType)>) -> Result<Self, TypeError> {
        let mut seen = BTreeSet::new();
        for (name, _) in &vars {
            if !seen.insert(name.clone()) {
                return Err(TypeError::DuplicatedUse {
                    var: name.clone(),
                    span: Span { line: 1, col: 1 },
                });
            }
        }
        Ok(TypingContext { vars })
    }

    pub fn empty() -> Self {
        TypingContext { vars: vec![] }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TypeError {
    #[error("unbound variable `{var}` at {span}")]
    Unbound { var: String, span: Span },
    #[error("variable `{var}` used more than once at {span}")]
    DuplicatedUse { var: String, span: Span },
    #[error("variable `{var}` is not used on every path through {span}")]
    UnusedVariable { var: String, span: Span },
    #[error("type mismatch at {span}: expected {expected}, found {found}")]
    TypeMismatch { expected: String, found: String, span: Span },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QlcError {
    #[error("parse error at {span}: {msg}")]
    Parse { msg: String, span: Span },
    #[error(transparent)]
    Type(#[from] TypeError),
}

// ---------------------------------------------------------------------
// lexer

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(usize),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Eq,
    Arrow,
    Star,
    Plus,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Span,
}

fn lex(src: &str) -> Result<Vec<Token>, QlcError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = src.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let span = Span { line, col };
        match ch {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                chars.next();
                col += 1;
            }
            '-' => {
                chars.next();
                col += 1;
                match chars.peek() {
                    Some('-') => {
                        for c in chars.by_ref() {
                            if c == '\n' {
                                line += 1;
                                col = 1;
                                break;
                            }
                        }
                    }
                    Some('>') => {
                        chars.next();
                        col += 1;
                        out.push(Token { tok: Tok::Arrow, span });
                    }
                    _ => {
                        return Err(QlcError::Parse {
                            msg: "expected `--` or `->` after `-`".into(),
                            span,
                        })
                    }
                }
            }
            '(' | ')' | '{' | '}' | '[' | ']' | ',' | ';' | ':' | '=' | '*' | '+' => {
                chars.next();
                col += 1;
                let tok = match ch {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    ':' => Tok::Colon,
                    '=' => Tok::Eq,
                    '*' => Tok::Star,
                    _ => Tok::Plus,
                };
                out.push(Token { tok, span });
            }
            d if d.is_ascii_digit() => {
                let mut n = 0usize;
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    n = n * 10 + d.to_digit(10).unwrap() as usize;
                    chars.next();
                    col += 1;
                }
                out.push(Token { tok: Tok::Num(n), span });
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let mut s = String::new();
                while let Some(&a) = chars.peek() {
                    if !(a.is_ascii_alphanumeric() || a == '_') {
                        break;
                    }
                    s.push(a);
                    chars.next();
                    col += 1;
                }
                out.push(Token { tok: Tok::Ident(s), span });
            }
            other => {
                return Err(QlcError::Parse { msg: format!("unexpected character `{other}`"), span })
            }
        }
    }
    out.push(Token { tok: Tok::Eof, span: Span { line, col } });
    Ok(out)
}

// ---------------------------------------------------------------------
// parser

const RESERVED: &[&str] = &[
    "let", "in", "case", "of", "input", "measure", "discard", "new_qubit", "inl", "inr", "qubit",
    "bit", "unit", "X", "Y", "Z", "H", "S", "T", "CNOT",
];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Span, QlcError> {
        let t = self.next();
        if t.tok == tok {
            Ok(t.span)
        } else {
            Err(QlcError::Parse { msg: format!("expected {what}"), span: t.span })
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Span), QlcError> {
        let t = self.next();
        match t.tok {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => Ok((s, t.span)),
            _ => Err(QlcError::Parse { msg: format!("expected {what}"), span: t.span }),
        }
    }

    fn at_ident(&self, name: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == name)
    }

    fn parse_type(&mut self) -> Result<QlcType, QlcError> {
        let mut t = self.parse_tensor_type()?;
        while self.peek().tok == Tok::Plus {
            self.next();
            let rhs = self.parse_tensor_type()?;
            t = QlcType::Sum(Box::new(t), Box::new(rhs));
        }
        Ok(t)
    }

    fn parse_tensor_type(&mut self) -> Result<QlcType, QlcError> {
        let mut t = self.parse_atom_type()?;
        while self.peek().tok == Tok::Star {
            self.next();
            let rhs = self.parse_atom_type()?;
            t = QlcType::Tensor(Box::new(t), Box::new(rhs));
        }
        Ok(t)
    }

    fn parse_atom_type(&mut self) -> Result<QlcType, QlcError> {
        let t = self.next();
        match t.tok {
            Tok::Ident(ref s) if s == "qubit" => Ok(QlcType::Qubit),
            Tok::Ident(ref s) if s == "bit" => Ok(QlcType::Bit),
            Tok::Ident(ref s) if s == "unit" => Ok(QlcType::Unit),
            Tok::LParen => {
                let inner = self.parse_type()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(QlcError::Parse { msg: "expected a type".into(), span: t.span }),
        }
    }

    fn parse_term(&mut self) -> Result<Term, QlcError> {
        let span = self.peek().span;
        if self.at_ident("let") {
            self.next();
            if self.peek().tok == Tok::LParen {
                self.next();
                if self.peek().tok == Tok::RParen {
                    self.next();
                    self.expect(Tok::Eq, "`=`")?;
                    let bound = self.parse_term()?;
                    self.expect_kw("in")?;
                    let body = self.parse_term()?;
                    return Ok(Term {
                        kind: TermKind::LetUnit { bound: Box::new(bound), body: Box::new(body) },
                        span,
                    });
                }
                let (a, _) = self.ident("a variable")?;
                self.expect(Tok::Comma, "`,`")?;
                let (b, _) = self.ident("a variable")?;
                self.expect(Tok::RParen, "`)`")?;
                self.expect(Tok::Eq, "`=`")?;
                let bound = self.parse_term()?;
                self.expect_kw("in")?;
                let body = self.parse_term()?;
                return Ok(Term {
                    kind: TermKind::LetPair {
                        a,
                        b,
                        bound: Box::new(bound),
                        body: Box::new(body),
                    },
                    span,
                });
            }
            let (x, _) = self.ident("a variable")?;
            self.expect(Tok::Eq, "`=`")?;
            let bound = self.parse_term()?;
            self.expect_kw("in")?;
            let body = self.parse_term()?;
            return Ok(Term {
                kind: TermKind::Let { x, bound: Box::new(bound), body: Box::new(body) },
                span,
            });
        }
        if self.at_ident("case") {
            self.next();
            let scrutinee = self.parse_term()?;
            self.expect_kw("of")?;
            self.expect(Tok::LBrace, "`{`")?;
            if self.at_ident("inl") {
                self.next();
                let (left_var, _) = self.ident("a variable")?;
                self.expect(Tok::Arrow, "`->`")?;
                let left_body = self.parse_term()?;
                self.expect(Tok::Semi, "`;`")?;
                self.expect_kw("inr")?;
                let (right_var, _) = self.ident("a variable")?;
                self.expect(Tok::Arrow, "`->`")?;
                let right_body = self.parse_term()?;
                self.expect(Tok::RBrace, "`}`")?;
                return Ok(Term {
                    kind: TermKind::CaseSum {
                        scrutinee: Box::new(scrutinee),
                        left_var,
                        left_body: Box::new(left_body),
                        right_var,
                        right_body: Box::new(right_body),
                    },
                    span,
                });
            }
            let t = self.next();
            if t.tok != Tok::Num(0) {
                return Err(QlcError::Parse {
                    msg: "expected `0` or `inl` after `{`".into(),
                    span: t.span,
                });
            }
            self.expect(Tok::Arrow, "`->`")?;
            let zero = self.parse_term()?;
            self.expect(Tok::Semi, "`;`")?;
            let t = self.next();
            if t.tok != Tok::Num(1) {
                return Err(QlcError::Parse { msg: "expected `1`".into(), span: t.span });
            }
            self.expect(Tok::Arrow, "`->`")?;
            let one = self.parse_term()?;
            self.expect(Tok::RBrace, "`}`")?;
            return Ok(Term {
                kind: TermKind::CaseBit {
                    scrutinee: Box::new(scrutinee),
                    zero: Box::new(zero),
                    one: Box::new(one),
                },
                span,
            });
        }
        self.parse_atom_term()
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), QlcError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) if s == kw => Ok(()),
            _ => Err(QlcError::Parse { msg: format!("expected `{kw}`"), span: t.span }),
        }
    }

    fn parse_atom_term(&mut self) -> Result<Term, QlcError> {
        let t = self.next();
        let span = t.span;
        match t.tok {
            Tok::LParen => {
                if self.peek().tok == Tok::RParen {
                    self.next();
                    return Ok(Term { kind: TermKind::UnitVal, span });
                }
                let first = self.parse_term()?;
                if self.peek().tok == Tok::Comma {
                    self.next();
                    let second = self.parse_term()?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(Term {
                        kind: TermKind::Pair(Box::new(first), Box::new(second)),
                        span,
                    });
                }
                self.expect(Tok::RParen, "`)`")?;
                Ok(first)
            }
            Tok::Ident(name) => match name.as_str() {
                "new_qubit" => {
                    self.expect(Tok::LParen, "`(`")?;
                    let bit = self.next();
                    let value = match bit.tok {
                        Tok::Num(0) => false,
                        Tok::Num(1) => true,
                        _ => {
                            return Err(QlcError::Parse {
                                msg: "expected `0` or `1`".into(),
                                span: bit.span,
                            })
                        }
                    };
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Term { kind: TermKind::NewQubit(value), span })
                }
                "measure" => {
                    self.expect(Tok::LParen, "`(`")?;
                    let arg = self.parse_term()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Term { kind: TermKind::Measure(Box::new(arg)), span })
                }
                "discard" => {
                    self.expect(Tok::LParen, "`(`")?;
                    let arg = self.parse_term()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Term { kind: TermKind::Discard(Box::new(arg)), span })
                }
                "inl" | "inr" => {
                    self.expect(Tok::LBracket, "`[`")?;
                    let other = self.parse_type()?;
                    self.expect(Tok::RBracket, "`]`")?;
                    self.expect(Tok::LParen, "`(`")?;
                    let arg = self.parse_term()?;
                    self.expect(Tok::RParen, "`)`")?;
                    let kind = if name == "inl" {
                        TermKind::Inl { right: other, arg: Box::new(arg) }
                    } else {
                        TermKind::Inr { left: other, arg: Box::new(arg) }
                    };
                    Ok(Term { kind, span })
                }
                "X" | "Y" | "Z" | "H" | "S" | "T" => {
                    let gate = match name.as_str() {
                        "X" => Gate::X,
                        "Y" => Gate::Y,
                        "Z" => Gate::Z,
                        "H" => Gate::H,
                        "S" => Gate::S,
                        _ => Gate::T,
                    };
                    self.expect(Tok::LParen, "`(`")?;
                    let arg = self.parse_term()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Term { kind: TermKind::Gate { gate, args: vec![arg] }, span })
                }
                "CNOT" => {
                    self.expect(Tok::LParen, "`(`")?;
                    let a = self.parse_term()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let b = self.parse_term()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Term { kind: TermKind::Gate { gate: Gate::Cnot, args: vec![a, b] }, span })
                }
                _ if !RESERVED.contains(&name.as_str()) => {
                    Ok(Term { kind: TermKind::Var(name), span })
                }
                _ => Err(QlcError::Parse { msg: format!("unexpected `{name}`"), span }),
            },
            _ => Err(QlcError::Parse { msg: "expected a term".into(), span }),
        }
    }
}

/// Parses a full program: optional `input` declarations, then one term.
pub fn parse_program(src: &str) -> Result<(TypingContext, Term), QlcError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let mut vars = Vec::new();
    while p.at_ident("input") {
        p.next();
        let (name, span) = p.ident("a variable")?;
        if vars.iter().any(|(n, _): &(String, QlcType)| *n == name) {
            return Err(QlcError::Parse { msg: format!("duplicate input `{name}`"), span });
        }
        p.expect(Tok::Colon, "`:`")?;
        let ty = p.parse_type()?;
        p.expect(Tok::Semi, "`;`")?;
        vars.push((name, ty));
    }
    let term = p.parse_term()?;
    let t = p.next();
    if t.tok != Tok::Eof {
        return Err(QlcError::Parse { msg: "trailing input after the program".into(), span: t.span });
    }
    Ok((TypingContext { vars }, term))
}

// ---------------------------------------------------------------------
// typechecker

type Usage = BTreeSet<String>;

fn merge_disjoint(t: &Term, a: Usage, b: Usage) -> Result<Usage, TypeError> {
    if let Some(v) = a.intersection(&b).next() {
        return Err(TypeError::DuplicatedUse { var: v.clone(), span: t.span });
    }
    Ok(a.into_iter().chain(b).collect())
}

fn expect_type(t: &Term, found: &QlcType, expected: &QlcType) -> Result<(), TypeError> {
    if found != expected {
        return Err(TypeError::TypeMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
            span: t.span,
        });
    }
    Ok(())
}

fn check(env: &BTreeMap<String, QlcType>, t: &Term) -> Result<(QlcType, Usage), TypeError> {
    match &t.kind {
        TermKind::Var(x) => match env.get(x) {
            Some(ty) => Ok((ty.clone(), BTreeSet::from([x.clone()]))),
            None => Err(TypeError::Unbound { var: x.clone(), span: t.span }),
        },
        TermKind::Let { x, bound, body } => {
            if env.contains_key(x) {
                return Err(TypeError::DuplicatedUse { var: x.clone(), span: t.span });
            }
            let (bty, used_b) = check(env, bound)?;
            let mut env2 = env.clone();
            env2.insert(x.clone(), bty);
            let (ty, mut used) = check(&env2, body)?;
            if !used.remove(x) {
                return Err(TypeError::UnusedVariable { var: x.clone(), span: t.span });
            }
            Ok((ty, merge_disjoint(t, used_b, used)?))
        }
        TermKind::LetPair { a, b, bound, body } => {
            if a == b || env.contains_key(a) || env.contains_key(b) {
                let dup = if a == b || env.contains_key(a) { a } else { b };
                return Err(TypeError::DuplicatedUse { var: dup.clone(), span: t.span });
            }
            let (bty, used_b) = check(env, bound)?;
            let QlcType::Tensor(aty, b2ty) = bty else {
                return Err(TypeError::TypeMismatch {
                    expected: "a tensor type".into(),
                    found: bty.to_string(),
                    span: bound.span,
                });
            };
            let mut env2 = env.clone();
            env2.insert(a.clone(), *aty);
            env2.insert(b.clone(), *b2ty);
            let (ty, mut used) = check(&env2, body)?;
            for v in [a, b] {
                if !used.remove(v) {
                    return Err(TypeError::UnusedVariable { var: v.clone(), span: t.span });
                }
            }
            Ok((ty, merge_disjoint(t, used_b, used)?))
        }
        TermKind::LetUnit { bound, body } => {
            let (bty, used_b) = check(env, bound)?;
            expect_type(bound, &bty, &QlcType::Unit)?;
            let (ty, used) = check(env, body)?;
            Ok((ty, merge_disjoint(t, used_b, used)?))
        }
        TermKind::NewQubit(_) => Ok((QlcType::Qubit, Usage::new())),
        TermKind::Gate { gate, args } => {
            let mut used = Usage::new();
            for arg in args {
                let (ty, u) = check(env, arg)?;
                expect_type(arg, &ty, &QlcType::Qubit)?;
                used = merge_disjoint(t, used, u)?;
            }
            let out = if *gate == Gate::Cnot {
                QlcType::Tensor(Box::new(QlcType::Qubit), Box::new(QlcType::Qubit))
            } else {
                QlcType::Qubit
            };
            Ok((out, used))
        }
        TermKind::Measure(arg) => {
            let (ty, used) = check(env, arg)?;
            expect_type(arg, &ty, &QlcType::Qubit)?;
            Ok((QlcType::Bit, used))
        }
        TermKind::Discard(arg) => {
            let (_, used) = check(env, arg)?;
            Ok((QlcType::Unit, used))
        }
        TermKind::Pair(a, b) => {
            let (aty, ua) = check(env, a)?;
            let (bty, ub) = check(env, b)?;
            Ok((
                QlcType::Tensor(Box::new(aty), Box::new(bty)),
                merge_disjoint(t, ua, ub)?,
            ))
        }
        TermKind::UnitVal => Ok((QlcType::Unit, Usage::new())),
        TermKind::Inl { right, arg } => {
            let (aty, used) = check(env, arg)?;
            Ok((QlcType::Sum(Box::new(aty), Box::new(right.clone())), used))
        }
        TermKind::Inr { left, arg } => {
            let (bty, used) = check(env, arg)?;
            Ok((QlcType::Sum(Box::new(left.clone()), Box::new(bty)), used))
        }
        TermKind::CaseBit { scrutinee, zero, one } => {
            let (sty, used_s) = check(env, scrutinee)?;
            expect_type(scrutinee, &sty, &QlcType::Bit)?;
            let (zty, used_z) = check(env, zero)?;
            let (oty, used_o) = check(env, one)?;
            expect_type(one, &oty, &zty)?;
            branch_usage(zero, one, &used_z, &used_o)?;
            Ok((zty, merge_disjoint(t, used_s, used_z)?))
        }
        TermKind::CaseSum { scrutinee, left_var, left_body, right_var, right_body } => {
            let (sty, used_s) = check(env, scrutinee)?;
            let QlcType::Sum(aty, bty) = sty else {
                return Err(TypeError::TypeMismatch {
                    expected: "a sum type".into(),
                    found: sty.to_string(),
                    span: scrutinee.span,
                });
            };
            for v in [left_var, right_var] {
                if env.contains_key(v) {
                    return Err(TypeError::DuplicatedUse { var: v.clone(), span: t.span });
                }
            }
            let mut env_l = env.clone();
            env_l.insert(left_var.clone(), *aty);
            let (lty, mut used_l) = check(&env_l, left_body)?;
            if !used_l.remove(left_var) {
                return Err(TypeError::UnusedVariable {
                    var: left_var.clone(),
                    span: left_body.span,
                });
            }
            let mut env_r = env.clone();
            env_r.insert(right_var.clone(), *bty);
            let (rty, mut used_r) = check(&env_r, right_body)?;
            if !used_r.remove(right_var) {
                return Err(TypeError::UnusedVariable {
                    var: right_var.clone(),
                    span: right_body.span,
                });
            }
            expect_type(right_body, &rty, &lty)?;
            branch_usage(left_body, right_body, &used_l, &used_r)?;
            Ok((lty, merge_disjoint(t, used_s, used_l)?))
        }
    }
}

/// Both arms of a case must consume the same outer variables.
fn branch_usage(left: &Term, right: &Term, ul: &Usage, ur: &Usage) -> Result<(), TypeError> {
    if let Some(v) = ul.difference(ur).next() {
        return Err(TypeError::UnusedVariable { var: v.clone(), span: right.span });
    }
    if let Some(v) = ur.difference(ul).next() {
        return Err(TypeError::UnusedVariable { var: v.clone(), span: left.span });
    }
    Ok(())
}

/// Typechecks a program under its context: the derived type comes back,
/// and every context variable must be consumed on every path.
pub fn typecheck(ctx: &TypingContext, t: &Term) -> Result<QlcType, TypeError> {
    let mut env = BTreeMap::new();
    for (name, ty) in &ctx.vars {
        if env.insert(name.clone(), ty.clone()).is_some() {
            return Err(TypeError::DuplicatedUse {
                var: name.clone(),
                span: Span { line: 1, col: 1 },
            });
        }
    }
    let (ty, used) = check(&env, t)?;
    for (name, _) in &ctx.vars {
        if !used.contains(name) {
            return Err(TypeError::UnusedVariable { var: name.clone(), span: t.span });
        }
    }
    Ok(ty)
}

// ---------------------------------------------------------------------
// denotation

/// `qubit` is one two-dimensional space, `bit` two one-dimensional ones,
/// `unit` the monoidal unit; tensor and sum are the family operations.
pub fn denote_type(t: &QlcType) -> QObject {
    match t {
        QlcType::Qubit => QObject::single(HObject::new("Q", 2).unwrap()),
        QlcType::Bit => QObject::new(vec![HObject::unit(), HObject::unit()]),
        QlcType::Unit => QObject::unit(),
        QlcType::Tensor(a, b) => denote_type(a).tensor(&denote_type(b)),
        QlcType::Sum(a, b) => denote_type(a).coproduct(&denote_type(b)),
    }
}

/// A context denotes the tensor of its entries, unit when empty.
pub fn denote_context(vars: &[(String, QlcType)]) -> QObject {
    vars.iter()
        .fold(QObject::unit(), |acc, (_, ty)| acc.tensor(&denote_type(ty)))
}

fn gate_unitary(gate: Gate) -> ComplexMatrix {
    match gate {
        Gate::X => gates::pauli_x(),
        Gate::Y => gates::pauli_y(),
        Gate::Z => gates::pauli_z(),
        Gate::H => gates::hadamard(),
        Gate::S => gates::phase_s(),
        Gate::T => gates::phase_t(),
        Gate::Cnot => gates::cnot(),
    }
}

fn single_entry(src: &QObject, dst: &QObject, map: LinMap) -> QMorphism {
    QMorphism::from_fn(src.clone(), dst.clone(), |_, _| map.clone())
}

fn qubit_object() -> QObject {
    denote_type(&QlcType::Qubit)
}

fn prepare(value: bool) -> QMorphism {
    let op = ComplexMatrix::new(
        2,
        1,
        vec![
            c(if value { 0.0 } else { 1.0 }, 0.0),
            c(if value { 1.0 } else { 0.0 }, 0.0),
        ],
    )
    .unwrap();
    let map = LinMap::from_kraus(&KrausSet::new(1, 2, vec![op]).unwrap());
    single_entry(&QObject::unit(), &qubit_object(), map)
}

fn measure_morphism() -> QMorphism {
    QMorphism::from_fn(qubit_object(), denote_type(&QlcType::Bit), |i, _| {
        let op = ComplexMatrix::new(
            1,
            2,
            vec![
                c(if i == 0 { 1.0 } else { 0.0 }, 0.0),
                c(if i == 1 { 1.0 } else { 0.0 }, 0.0),
            ],
        )
        .unwrap();
        LinMap::from_kraus(&KrausSet::new(2, 1, vec![op]).unwrap())
    })
}

/// Splits an ordered context: the variables in `taken` (kept in context
/// order) move to the right factor, everything else stays on the left.
/// The returned morphism is the structural permutation
/// `⟦Γ⟧ → ⟦rest⟧ ⊗ ⟦taken⟧`.
#[allow(clippy::type_complexity)]
fn split_context(
    gamma: &[(String, QlcType)],
    taken: &Usage,
) -> (QMorphism, Vec<(String, QlcType)>, Vec<(String, QlcType)>) {
    let objs: Vec<QObject> = gamma.iter().map(|(_, ty)| denote_type(ty)).collect();
    let mut rest = Vec::new();
    let mut right = Vec::new();
    let mut perm = vec![0usize; gamma.len()];
    let taken_count = gamma.iter().filter(|(n, _)| taken.contains(n)).count();
    let (mut rest_rank, mut taken_rank) = (0usize, 0usize);
    for (j, (name, ty)) in gamma.iter().enumerate() {
        if taken.contains(name) {
            perm[j] = gamma.len() - taken_count + taken_rank;
            taken_rank += 1;
            right.push((name.clone(), ty.clone()));
        } else {
            perm[j] = rest_rank;
            rest_rank += 1;
            rest.push((name.clone(), ty.clone()));
        }
    }
    (tensor_permutation(&objs, &perm), rest, right)
}

fn env_of(gamma: &[(String, QlcType)]) -> BTreeMap<String, QlcType> {
    gamma.iter().cloned().collect()
}

/// Splits `gamma`, denotes `sub` in the right factor, and returns the
/// composite `⟦Γ⟧ → ⟦rest⟧ ⊗ ⟦type of sub⟧` along with the leftover
/// context and the subterm's type.
fn route(
    gamma: &[(String, QlcType)],
    sub: &Term,
) -> (QMorphism, Vec<(String, QlcType)>, QlcType) {
    let (ty, used) = check(&env_of(gamma), sub).expect("denotation after typechecking");
    let (perm, rest, taken) = split_context(gamma, &used);
    let f = denote_checked(&taken, sub);
    let routed = QMorphism::compose(
        &tensor_mor(&QMorphism::identity(&denote_context(&rest)), &f),
        &perm,
    );
    (routed, rest, ty)
}

fn denote_checked(gamma: &[(String, QlcType)], t: &Term) -> QMorphism {
    match &t.kind {
        TermKind::Var(_) => QMorphism::identity(&denote_context(gamma)),
        TermKind::UnitVal => QMorphism::identity(&QObject::unit()),
        TermKind::NewQubit(value) => prepare(*value),
        TermKind::Let { x, bound, body } => {
            let (routed, rest, bty) = route(gamma, bound);
            let mut body_gamma = rest;
            body_gamma.push((x.clone(), bty));
            QMorphism::compose(&denote_checked(&body_gamma, body), &routed)
        }
        TermKind::LetPair { a, b, bound, body } => {
            let (routed, rest, bty) = route(gamma, bound);
            let QlcType::Tensor(aty, b2ty) = bty else { unreachable!("typechecked") };
            let mut body_gamma = rest;
            body_gamma.push((a.clone(), *aty));
            body_gamma.push((b.clone(), *b2ty));
            QMorphism::compose(&denote_checked(&body_gamma, body), &routed)
        }
        TermKind::LetUnit { bound, body } => {
            let (routed, rest, _) = route(gamma, bound);
            QMorphism::compose(&denote_checked(&rest, body), &routed)
        }
        TermKind::Gate { gate, args } => {
            let io = if *gate == Gate::Cnot {
                qubit_object().tensor(&qubit_object())
            } else {
                qubit_object()
            };
            let channel = single_entry(&io, &io, unitary_channel(&gate_unitary(*gate)));
            let input = if args.len() == 1 {
                denote_checked(gamma, &args[0])
            } else {
                denote_pair(gamma, &args[0], &args[1])
            };
            QMorphism::compose(&channel, &input)
        }
        TermKind::Measure(arg) => {
            QMorphism::compose(&measure_morphism(), &denote_checked(gamma, arg))
        }
        TermKind::Discard(arg) => {
            let (ty, _) = check(&env_of(gamma), arg).expect("denotation after typechecking");
            QMorphism::compose(
                &discard_morphism(&denote_type(&ty)),
                &denote_checked(gamma, arg),
            )
        }
        TermKind::Pair(a, b) => denote_pair(gamma, a, b),
        TermKind::Inl { right, arg } => {
            let (aty, _) = check(&env_of(gamma), arg).expect("denotation after typechecking");
            let (_, injs) = coproduct_many(&[denote_type(&aty), denote_type(right)]);
            QMorphism::compose(&injs[0], &denote_checked(gamma, arg))
        }
        TermKind::Inr { left, arg } => {
            let (bty, _) = check(&env_of(gamma), arg).expect("denotation after typechecking");
            let (_, injs) = coproduct_many(&[denote_type(left), denote_type(&bty)]);
            QMorphism::compose(&injs[1], &denote_checked(gamma, arg))
        }
        TermKind::CaseBit { scrutinee, zero, one } => denote_case(
            gamma,
            scrutinee,
            (None, zero),
            (None, one),
        ),
        TermKind::CaseSum { scrutinee, left_var, left_body, right_var, right_body } => {
            denote_case(
                gamma,
                scrutinee,
                (Some(left_var.clone()), left_body),
                (Some(right_var.clone()), right_body),
            )
        }
    }
}

fn denote_pair(gamma: &[(String, QlcType)], a: &Term, b: &Term) -> QMorphism {
    let env = env_of(gamma);
    let (_, used_b) = check(&env, b).expect("denotation after typechecking");
    let (perm, left, right) = split_context(gamma, &used_b);
    let fa = denote_checked(&left, a);
    let fb = denote_checked(&right, b);
    QMorphism::compose(&tensor_mor(&fa, &fb), &perm)
}

fn denote_case(
    gamma: &[(String, QlcType)],
    scrutinee: &Term,
    (left_var, left_body): (Option<String>, &Term),
    (right_var, right_body): (Option<String>, &Term),
) -> QMorphism {
    let env = env_of(gamma);
    let (sty, used) = check(&env, scrutinee).expect("denotation after typechecking");
    let (aty, bty) = match sty {
        QlcType::Bit => (QlcType::Unit, QlcType::Unit),
        QlcType::Sum(a, b) => (*a, *b),
        _ => unreachable!("typechecked"),
    };
    let (perm, rest, taken) = split_context(gamma, &used);
    let f = denote_checked(&taken, scrutinee);
    let rest_obj = denote_context(&rest);
    let mid = QMorphism::compose(&tensor_mor(&QMorphism::identity(&rest_obj), &f), &perm);
    let dist = distributivity_iso(&rest_obj, &denote_type(&aty), &denote_type(&bty)).fwd;
    let branch = |var: Option<String>, vty: &QlcType, body: &Term| {
        let mut branch_gamma = rest.clone();
        if let Some(v) = var {
            branch_gamma.push((v, vty.clone()));
        }
        denote_checked(&branch_gamma, body)
    };
    let g0 = branch(left_var, &aty, left_body);
    let g1 = branch(right_var, &bty, right_body);
    let dst = g0.dst().clone();
    let glued = copair_many(&[g0, g1], &dst);
    QMorphism::compose(&glued, &QMorphism::compose(&dist, &mid))
}

/// Denotes a typechecked program as a family morphism
/// `⟦context⟧ → ⟦type⟧`; total once typechecking succeeds.
pub fn denote(ctx: &TypingContext, t: &Term) -> Result<QMorphism, TypeError> {
    typecheck(ctx, t)?;
    Ok(denote_checked(&ctx.vars, t))
}

/// Parses, typechecks and denotes a source program in one step.
pub fn run_source(src: &str) -> Result<(TypingContext, QlcType, QMorphism), QlcError> {
    let (ctx, term) = parse_program(src)?;
    let ty = typecheck(&ctx, &term)?;
    let mor = denote_checked(&ctx.vars, &term);
    Ok((ctx, ty, mor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Tolerance;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const COIN: &str = include_str!("../../../programs/coin.qlc");
    const TELEPORT: &str = include_str!("../../../programs/teleport.qlc");

    fn parse_term(src: &str) -> Term {
        parse_program(src).unwrap().1
    }

    fn random_density(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
        let entries: Vec<crate::linalg::Complex> = (0..d * d)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let g = ComplexMatrix::new(d, d, entries).unwrap();
        let p = g.matmul(&g.adjoint());
        p.scale(c(1.0 / p.trace().re, 0.0))
    }

    #[test]
    fn denote_type_oracles() {
        assert_eq!(denote_type(&QlcType::Unit).dims(), vec![1]);
        assert_eq!(denote_type(&QlcType::Qubit).dims(), vec![2]);
        assert_eq!(denote_type(&QlcType::Bit).dims(), vec![1, 1]);
        let bit_qubit =
            QlcType::Tensor(Box::new(QlcType::Bit), Box::new(QlcType::Qubit));
        assert_eq!(denote_type(&bit_qubit).dims(), vec![2, 2]);
        let two_units = QlcType::Sum(Box::new(QlcType::Unit), Box::new(QlcType::Unit));
        assert_eq!(denote_type(&two_units), denote_type(&QlcType::Bit));
    }

    #[test]
    fn typecheck_examples() {
        let t = parse_term("let x = new_qubit(0) in measure(x)");
        assert_eq!(typecheck(&TypingContext::empty(), &t), Ok(QlcType::Bit));

        let t = parse_term("let x = new_qubit(0) in (x, x)");
        assert!(matches!(
            typecheck(&TypingContext::empty(), &t),
            Err(TypeError::DuplicatedUse { var, .. }) if var == "x"
        ));

        let t = parse_term(
            "case inl[bit]( () ) of { inl u -> let () = u in measure(new_qubit(0)) ; inr b -> b }",
        );
        assert_eq!(typecheck(&TypingContext::empty(), &t), Ok(QlcType::Bit));
    }

    #[test]
    fn linearity_violations_have_locations() {
        let t = parse_term("y");
        let err = typecheck(&TypingContext::empty(), &t).unwrap_err();
        assert_eq!(
            err,
            TypeError::Unbound { var: "y".into(), span: Span { line: 1, col: 1 } }
        );

        let (ctx, t) = parse_program("input q : qubit;\n()").unwrap();
        assert!(matches!(
            typecheck(&ctx, &t),
            Err(TypeError::UnusedVariable { var, .. }) if var == "q"
        ));

        // a variable consumed in one arm only
        let (ctx, t) = parse_program(
            "input q : qubit;\ncase measure(new_qubit(0)) of { 0 -> discard(q) ; 1 -> () }",
        )
        .unwrap();
        assert!(matches!(
            typecheck(&ctx, &t),
            Err(TypeError::UnusedVariable { var, .. }) if var == "q"
        ));

        let t = parse_term("measure(new_qubit(0))");
        let err = typecheck(&TypingContext::empty(), &parse_term("measure( () )")).unwrap_err();
        assert!(matches!(err, TypeError::TypeMismatch { .. }));
        assert_eq!(typecheck(&TypingContext::empty(), &t), Ok(QlcType::Bit));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_program("let x = in x").unwrap_err();
        let QlcError::Parse { span, .. } = err else { panic!("expected parse error") };
        assert_eq!((span.line, span.col), (1, 9));
        assert!(parse_program("case q of { 2 -> q ; 1 -> q }").is_err());
    }

    #[test]
    fn coin_denotes_the_fair_coin() {
        let (ctx, ty, mor) = run_source(COIN).unwrap();
        assert!(ctx.vars.is_empty());
        assert_eq!(ty, QlcType::Bit);
        assert_eq!(mor.src(), &QObject::unit());
        assert_eq!(mor.dst().dims(), vec![1, 1]);
        // both outcome weights are exactly 1/2
        for i in 0..2 {
            let choi = mor.entry(i, 0);
            assert!((choi.apply(&ComplexMatrix::identity(1)).trace().re - 0.5).abs() < 1e-12);
        }
        assert!(mor.is_q(&Tolerance::default()));
    }

    #[test]
    fn teleport_is_the_identity_channel() {
        let (ctx, ty, mor) = run_source(TELEPORT).unwrap();
        assert_eq!(ctx.vars.len(), 1);
        assert_eq!(ty, QlcType::Qubit);
        let identity = QMorphism::identity(&denote_type(&QlcType::Qubit));
        let dev = mor.max_deviation(&identity);
        assert!(dev <= 1e-9, "teleportation deviates from identity by {dev:.3e}");
    }

    #[test]
    fn discard_prepared_qubit_is_the_unique_map_to_unit() {
        let t = parse_term("discard(new_qubit(0))");
        let mor = denote(&TypingContext::empty(), &t).unwrap();
        assert!(mor.approx_eq(
            &QMorphism::identity(&QObject::unit()),
            &Tolerance::default()
        ));
    }

    #[test]
    fn denotations_are_channels() {
        let tol = Tolerance::default();
        let closed = [
            "measure(H(new_qubit(0)))",
            "discard(new_qubit(1))",
            "let (a, b) = CNOT(H(new_qubit(0)), new_qubit(0)) in (measure(a), measure(b))",
            "case measure(new_qubit(1)) of { 0 -> new_qubit(0) ; 1 -> X(new_qubit(0)) }",
            "let s = inl[qubit]( () ) in case s of { inl u -> let () = u in new_qubit(0) ; inr q -> q }",
        ];
        for src in closed {
            let (_, _, mor) = run_source(src).unwrap();
            assert!(mor.is_q(&tol), "not a channel family: {src}");
        }
        let (_, _, tele) = run_source(TELEPORT).unwrap();
        assert!(tele.is_q(&tol));
    }

    #[test]
    fn unitary_programs_are_pure_isometries() {
        let (ctx, _, mor) =
            run_source("input q : qubit;\nH(S(X(q)))").unwrap();
        assert_eq!(ctx.vars.len(), 1);
        let tol = Tolerance::default();
        assert!(mor.is_qprime(&tol));
        // a unitary denotation has a rank-one Choi matrix: tr(J²) = (tr J)²
        let j = mor.entry(0, 0).choi();
        let tr = j.trace();
        let tr_sq = j.matmul(j).trace();
        assert!((tr_sq.re - tr.re * tr.re).abs() < 1e-9);
    }

    #[test]
    fn outcome_weights_sum_to_input_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (_, _, tele) = run_source(TELEPORT).unwrap();
        let (_, _, bell) = run_source(
            "let (a, b) = CNOT(H(new_qubit(0)), new_qubit(0)) in (measure(a), measure(b))",
        )
        .unwrap();
        for mor in [&tele, &bell] {
            for _ in 0..10 {
                for j in 0..mor.src().len() {
                    let d = mor.src().parts[j].dim;
                    let rho = random_density(&mut rng, d);
                    let total: f64 = (0..mor.dst().len())
                        .map(|i| mor.entry(i, j).apply(&rho).trace().re)
                        .sum();
                    assert!((total - 1.0).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn let_sequencing_matches_channel_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let tol = Tolerance::default();
        let names = ["X", "Y", "Z", "H", "S", "T"];
        let gates = [Gate::X, Gate::Y, Gate::Z, Gate::H, Gate::S, Gate::T];
        for _ in 0..20 {
            let depth = rng.gen_range(1..6);
            let picks: Vec<usize> = (0..depth).map(|_| rng.gen_range(0..names.len())).collect();
            // let x1 = G1(q) in let x2 = G2(x1) in ... xn
            let mut src = String::from("input q : qubit;\n");
            let mut prev = "q".to_string();
            for (k, &p) in picks.iter().enumerate() {
                src.push_str(&format!("let x{k} = {}({prev}) in\n", names[p]));
                prev = format!("x{k}");
            }
            src.push_str(&prev);
            let (_, _, mor) = run_source(&src).unwrap();
            let mut u = ComplexMatrix::identity(2);
            for &p in &picks {
                u = gate_unitary(gates[p]).matmul(&u);
            }
            let expected = single_entry(&qubit_object(), &qubit_object(), unitary_channel(&u));
            assert!(
                mor.approx_eq(&expected, &tol),
                "sequenced program deviates by {:.3e}",
                mor.max_deviation(&expected)
            );
        }
    }

    #[test]
    fn context_splitting_is_order_insensitive() {
        // consume two inputs in both orders; the channels agree up to the
        // symmetry on the context
        let (ctx_ab, t_ab) = parse_program("input a : qubit;\ninput b : qubit;\n(a, b)").unwrap();
        let (ctx_ba, t_ba) = parse_program("input a : qubit;\ninput b : qubit;\n(b, a)").unwrap();
        let tol = Tolerance::default();
        let fwd = denote(&ctx_ab, &t_ab).unwrap();
        assert!(fwd.approx_eq(
            &QMorphism::identity(&denote_context(&ctx_ab.vars)),
            &tol
        ));
        let swapped = denote(&ctx_ba, &t_ba).unwrap();
        let sigma = crate::qcat::symmetry(
            &denote_type(&QlcType::Qubit),
            &denote_type(&QlcType::Qubit),
        );
        assert!(swapped.approx_eq(&sigma, &tol));
    }
}
