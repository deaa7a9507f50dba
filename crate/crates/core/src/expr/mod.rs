//! A small language for fuzzy pipelines such as
//! `DEFUZ(NOT A AND FUZ(3, 1))`, evaluated either on membership values or on
//! a simulated register.
//!
//! ```text
//! expr    := term ("OR" term)*
//! term    := factor ("AND" factor)*
//! factor  := "NOT" factor | primary
//! primary := IDENT | "(" expr ")" | "FUZ" "(" INT "," INT ")"
//!          | "DEFUZ" "(" expr ")"
//!          | "SUPERPOSE" "(" NUM "*" expr ("," NUM "*" expr)* ")"
//! ```

mod eval;
mod parser;

use std::fmt;

use thiserror::Error;

pub use eval::{eval_classical, eval_quantum, evaluate, ClassicalValue, Environment, Mode, QuantumValue, Value};
pub use parser::parse;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Expression node. Equality compares structure only, not positions.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Ident(String),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Fuz { index: usize, k: usize },
    Defuz(Box<Expr>),
    Superpose(Vec<(f64, Expr)>),
}

impl Expr {
    pub fn new(kind: ExprKind) -> Self {
        Expr { kind, pos: Pos::default() }
    }

    pub fn ident(name: &str) -> Self {
        Self::new(ExprKind::Ident(name.to_string()))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Self {
        Self::new(ExprKind::Not(Box::new(e)))
    }

    pub fn and(a: Expr, b: Expr) -> Self {
        Self::new(ExprKind::And(Box::new(a), Box::new(b)))
    }

    pub fn or(a: Expr, b: Expr) -> Self {
        Self::new(ExprKind::Or(Box::new(a), Box::new(b)))
    }

    pub fn fuz(index: usize, k: usize) -> Self {
        Self::new(ExprKind::Fuz { index, k })
    }

    pub fn defuz(e: Expr) -> Self {
        Self::new(ExprKind::Defuz(Box::new(e)))
    }

    pub fn superpose(terms: Vec<(f64, Expr)>) -> Self {
        Self::new(ExprKind::Superpose(terms))
    }

    pub fn depth(&self) -> usize {
        match &self.kind {
            ExprKind::Ident(_) | ExprKind::Fuz { .. } => 1,
            ExprKind::Not(e) | ExprKind::Defuz(e) => 1 + e.depth(),
            ExprKind::And(a, b) | ExprKind::Or(a, b) => 1 + a.depth().max(b.depth()),
            ExprKind::Superpose(terms) => 1 + terms.iter().map(|(_, e)| e.depth()).max().unwrap_or(0),
        }
    }
}

/// Fully parenthesized canonical text; parsing it yields an equal tree.
pub fn pretty_print(e: &Expr) -> String {
    e.to_string()
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Ident(name) => write!(f, "{name}"),
            ExprKind::Not(e) => write!(f, "(NOT {e})"),
            ExprKind::And(a, b) => write!(f, "({a} AND {b})"),
            ExprKind::Or(a, b) => write!(f, "({a} OR {b})"),
            ExprKind::Fuz { index, k } => write!(f, "FUZ({index}, {k})"),
            ExprKind::Defuz(e) => write!(f, "DEFUZ({e})"),
            ExprKind::Superpose(terms) => {
                write!(f, "SUPERPOSE(")?;
                for (i, (c, e)) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c} * {e}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("lexical error at {pos}: unexpected {found}")]
    Lexical { pos: Pos, found: String },

    #[error("syntax error at {pos}: expected {expected}, found {found}")]
    Syntax { pos: Pos, expected: String, found: String },

    #[error("unbound identifier {name} at {pos}")]
    Unbound { name: String, pos: Pos },

    #[error("FUZ index {index} at {pos} is outside the universe 1..={universe_size}")]
    FuzIndex { index: usize, universe_size: usize, pos: Pos },

    #[error("SUPERPOSE at {pos} is only available in quantum mode")]
    SuperposeInClassical { pos: Pos },

    #[error("SUPERPOSE term at {pos} must be an identifier or a FUZ leaf")]
    SuperposeOperand { pos: Pos },

    #[error("DEFUZ at {pos} must be the outermost operator")]
    NestedDefuz { pos: Pos },

    #[error("binding {name} has universe size {found}, expected {expected}")]
    Binding { name: String, expected: usize, found: usize },

    #[error(transparent)]
    Core(#[from] crate::error::Error),
}

impl ExprError {
    pub fn is_parse_error(&self) -> bool {
        matches!(self, ExprError::Lexical { .. } | ExprError::Syntax { .. })
    }
}
