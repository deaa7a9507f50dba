use std::iter::Peekable;
use std::str::Chars;

use super::{Expr, ExprError, ExprKind, Pos};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Not,
    And,
    Or,
    Fuz,
    Defuz,
    Superpose,
    LParen,
    RParen,
    Comma,
    Star,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Number(s) => format!("'{s}'"),
            Tok::Not => "'NOT'".into(),
            Tok::And => "'AND'".into(),
            Tok::Or => "'OR'".into(),
            Tok::Fuz => "'FUZ'".into(),
            Tok::Defuz => "'DEFUZ'".into(),
            Tok::Superpose => "'SUPERPOSE'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Star => "'*'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    chars: Peekable<Chars<'a>>,
    pos: Pos,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { chars: src.chars().peekable(), pos: Pos { line: 1, column: 1 } }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn take_while(&mut self, buf: &mut String, pred: impl Fn(char) -> bool) {
        while let Some(&c) = self.chars.peek() {
            if !pred(c) {
                break;
            }
            buf.push(c);
            self.bump();
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, Pos)>, ExprError> {
        let mut out = Vec::new();
        loop {
            while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
                self.bump();
            }
            let start = self.pos;
            let Some(&c) = self.chars.peek() else {
                out.push((Tok::Eof, start));
                return Ok(out);
            };
            let tok = match c {
                '(' | ')' | ',' | '*' => {
                    self.bump();
                    match c {
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        ',' => Tok::Comma,
                        _ => Tok::Star,
                    }
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut word = String::new();
                    self.take_while(&mut word, |c| c.is_ascii_alphanumeric() || c == '_');
                    match word.as_str() {
                        "NOT" => Tok::Not,
                        "AND" => Tok::And,
                        "OR" => Tok::Or,
                        "FUZ" => Tok::Fuz,
                        "DEFUZ" => Tok::Defuz,
                        "SUPERPOSE" => Tok::Superpose,
                        _ => Tok::Ident(word),
                    }
                }
                c if c.is_ascii_digit() || c == '-' || c == '.' => self.number(start)?,
                other => {
                    return Err(ExprError::Lexical { pos: start, found: format!("character '{other}'") });
                }
            };
            out.push((tok, start));
        }
    }

    fn number(&mut self, start: Pos) -> Result<Tok, ExprError> {
        let mut text = String::new();
        if self.chars.peek() == Some(&'-') {
            text.push('-');
            self.bump();
        }
        self.take_while(&mut text, |c| c.is_ascii_digit());
        if self.chars.peek() == Some(&'.') {
            text.push('.');
            self.bump();
            self.take_while(&mut text, |c| c.is_ascii_digit());
        }
        let digits = text.chars().filter(|c| c.is_ascii_digit()).count();
        let ends_cleanly = !text.ends_with('.') && !text.starts_with('.') && !text.starts_with("-.");
        if digits == 0 || !ends_cleanly {
            return Err(ExprError::Lexical { pos: start, found: format!("malformed number '{text}'") });
        }
        Ok(Tok::Number(text))
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn advance(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ExprError {
        ExprError::Syntax { pos: self.pos(), expected: expected.to_string(), found: self.peek().describe() }
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, ExprError> {
        if *self.peek() == tok {
            Ok(self.advance().1)
        } else {
            Err(self.error(&tok.describe()))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        while *self.peek() == Tok::Or {
            let (_, pos) = self.advance();
            let rhs = self.term()?;
            lhs = Expr { kind: ExprKind::Or(Box::new(lhs), Box::new(rhs)), pos };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::And {
            let (_, pos) = self.advance();
            let rhs = self.factor()?;
            lhs = Expr { kind: ExprKind::And(Box::new(lhs), Box::new(rhs)), pos };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        if *self.peek() == Tok::Not {
            let (_, pos) = self.advance();
            let inner = self.factor()?;
            return Ok(Expr { kind: ExprKind::Not(Box::new(inner)), pos });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.advance();
                Ok(Expr { kind: ExprKind::Ident(name), pos })
            }
            Tok::LParen => {
                self.advance();
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Fuz => {
                self.advance();
                self.expect(Tok::LParen)?;
                let index = self.integer()?;
                self.expect(Tok::Comma)?;
                let k = self.integer()?;
                self.expect(Tok::RParen)?;
                Ok(Expr { kind: ExprKind::Fuz { index, k }, pos })
            }
            Tok::Defuz => {
                self.advance();
                self.expect(Tok::LParen)?;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Expr { kind: ExprKind::Defuz(Box::new(inner)), pos })
            }
            Tok::Superpose => {
                self.advance();
                self.expect(Tok::LParen)?;
                let mut terms = vec![self.weighted_term()?];
                while *self.peek() == Tok::Comma {
                    self.advance();
                    terms.push(self.weighted_term()?);
                }
                self.expect(Tok::RParen)?;
                Ok(Expr { kind: ExprKind::Superpose(terms), pos })
            }
            _ => Err(self.error("an expression")),
        }
    }

    fn integer(&mut self) -> Result<usize, ExprError> {
        if let Tok::Number(text) = self.peek() {
            if let Ok(n) = text.parse::<usize>() {
                self.advance();
                return Ok(n);
            }
        }
        Err(self.error("a non-negative integer"))
    }

    fn weighted_term(&mut self) -> Result<(f64, Expr), ExprError> {
        let coeff = match self.peek() {
            Tok::Number(text) => text.parse::<f64>().map_err(|_| self.error("a number"))?,
            _ => return Err(self.error("a number")),
        };
        self.advance();
        self.expect(Tok::Star)?;
        Ok((coeff, self.expr()?))
    }
}

/// Parses expression text. Keywords are case-sensitive; `NOT` binds
/// tighter than `AND`, which binds tighter than `OR`; both binary
/// operators associate to the left.
pub fn parse(text: &str) -> Result<Expr, ExprError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("end of input"));
    }
    Ok(e)
}
