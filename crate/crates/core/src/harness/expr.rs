//! A tiny arithmetic expression grammar for custom target functions:
//! `+ - * / ^`, the functions `sin cos exp log abs`, and the variable `x`.
//!
//! Parsed by recursive descent with byte positions carried into errors.

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Ast {
    Number(f64),
    Variable,
    Unary(UnaryOp, Box<Ast>),
    Binary(BinaryOp, Box<Ast>, Box<Ast>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Exp,
    Log,
    Abs,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// A parsed, evaluable expression in one variable.
#[derive(Clone, Debug)]
pub struct Expression {
    root: Ast,
    source: String,
}

impl Expression {
    pub fn parse(text: &str) -> Result<Expression> {
        let mut parser = Parser {
            bytes: text.as_bytes(),
            pos: 0,
        };
        parser.skip_ws();
        let root = parser.expr()?;
        parser.skip_ws();
        if parser.pos < parser.bytes.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(Expression {
            root,
            source: text.to_string(),
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        eval_ast(&self.root, x)
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

fn eval_ast(ast: &Ast, x: f64) -> f64 {
    match ast {
        Ast::Number(v) => *v,
        Ast::Variable => x,
        Ast::Unary(op, inner) => {
            let v = eval_ast(inner, x);
            match op {
                UnaryOp::Neg => -v,
                UnaryOp::Sin => v.sin(),
                UnaryOp::Cos => v.cos(),
                UnaryOp::Exp => v.exp(),
                UnaryOp::Log => v.ln(),
                UnaryOp::Abs => v.abs(),
            }
        }
        Ast::Binary(op, lhs, rhs) => {
            let a = eval_ast(lhs, x);
            let b = eval_ast(rhs, x);
            match op {
                BinaryOp::Add => a + b,
                BinaryOp::Sub => a - b,
                BinaryOp::Mul => a * b,
                BinaryOp::Div => a / b,
                BinaryOp::Pow => a.powf(b),
            }
        }
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::ExpressionParse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn accept(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            if self.accept(b'+') {
                lhs = Ast::Binary(BinaryOp::Add, Box::new(lhs), Box::new(self.term()?));
            } else if self.accept(b'-') {
                lhs = Ast::Binary(BinaryOp::Sub, Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.factor()?;
        loop {
            if self.accept(b'*') {
                lhs = Ast::Binary(BinaryOp::Mul, Box::new(lhs), Box::new(self.factor()?));
            } else if self.accept(b'/') {
                lhs = Ast::Binary(BinaryOp::Div, Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    // Right-associative exponentiation binding tighter than unary minus on
    // the right: -x^2 parses as -(x^2).
    fn factor(&mut self) -> Result<Ast> {
        if self.accept(b'-') {
            return Ok(Ast::Unary(UnaryOp::Neg, Box::new(self.factor()?)));
        }
        let base = self.primary()?;
        if self.accept(b'^') {
            let exponent = self.factor()?;
            return Ok(Ast::Binary(BinaryOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Ast> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let inner = self.expr()?;
                if !self.accept(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.identifier(),
            Some(c) => Err(self.error(format!("unexpected character '{}'", c as char))),
            None => Err(self.error("unexpected end of expression")),
        }
    }

    fn number(&mut self) -> Result<Ast> {
        let start = self.pos;
        while self
            .peek()
            .map(|c| c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E')
            .unwrap_or(false)
        {
            // Signed exponents like 1e-3.
            if matches!(self.bytes[self.pos], b'e' | b'E')
                && matches!(self.bytes.get(self.pos + 1), Some(b'+') | Some(b'-'))
            {
                self.pos += 2;
            } else {
                self.pos += 1;
            }
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        let value: f64 = text.parse().map_err(|_| {
            let mut e = self.error(format!("invalid number '{text}'"));
            if let Error::ExpressionParse { position, .. } = &mut e {
                *position = start;
            }
            e
        })?;
        self.skip_ws();
        Ok(Ast::Number(value))
    }

    fn identifier(&mut self) -> Result<Ast> {
        let start = self.pos;
        while self
            .peek()
            .map(|c| c.is_ascii_alphanumeric() || c == b'_')
            .unwrap_or(false)
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        self.skip_ws();
        if name == "x" {
            return Ok(Ast::Variable);
        }
        let op = match name {
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            "exp" => UnaryOp::Exp,
            "log" => UnaryOp::Log,
            "abs" => UnaryOp::Abs,
            _ => {
                return Err(Error::ExpressionParse {
                    position: start,
                    message: format!("unknown identifier '{name}'"),
                })
            }
        };
        if !self.accept(b'(') {
            return Err(self.error(format!("expected '(' after '{name}'")));
        }
        let arg = self.expr()?;
        if !self.accept(b')') {
            return Err(self.error("expected ')'"));
        }
        Ok(Ast::Unary(op, Box::new(arg)))
    }
}
