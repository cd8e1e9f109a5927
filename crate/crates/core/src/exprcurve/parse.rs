//! Recursive-descent parser for curve expressions.
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = ("-" | "+") unary | power ;
//! power   = primary [ "^" unary ] ;          (* exponent must be constant *)
//! primary = number | ident | func "(" expr ")" | "(" expr ")" ;
//! func    = "sin" | "cos" | "tan" | "ln" | "exp" | "sqrt" ;
//! number  = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ] ;
//! ```
//!
//! Identifiers resolve to, in order: a declared variable, a user constant,
//! a built-in constant (`pi`, `sqrt2`, `e`).

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::expr::{BinaryOp, ExprTree, Node, UnaryOp};
use crate::error::ParseError;

/// Variables and named constants visible to an expression.
#[derive(Clone, Debug)]
pub struct ParseContext {
    pub variables: Vec<String>,
    pub constants: Vec<(String, f64)>,
}

impl ParseContext {
    /// One variable named `u`, no user constants.
    pub fn univariate() -> Self {
        Self::with_variables(&["u"])
    }

    pub fn with_variables(names: &[&str]) -> Self {
        ParseContext { variables: names.iter().map(|s| s.to_string()).collect(), constants: Vec::new() }
    }

    pub fn constant(mut self, name: &str, value: f64) -> Self {
        self.constants.push((name.to_string(), value));
        self
    }
}

impl Default for ParseContext {
    fn default() -> Self {
        Self::univariate()
    }
}

pub const BUILTIN_CONSTANTS: [(&str, f64); 3] =
    [("pi", core::f64::consts::PI), ("sqrt2", core::f64::consts::SQRT_2), ("e", core::f64::consts::E)];

/// Parses `text` as an expression in the single variable `u`.
pub fn parse_expr(text: &str) -> Result<ExprTree, ParseError> {
    parse_expr_with(text, &ParseContext::univariate())
}

pub fn parse_expr_with(text: &str, ctx: &ParseContext) -> Result<ExprTree, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0, ctx };
    let root = p.expr()?;
    match p.peek() {
        Tok::End => Ok(ExprTree::new(root, ctx.variables.clone())),
        _ => Err(p.unexpected(&["operator", "end of input"])),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: usize,
    text: String,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let s = &text[start..i];
            let value: f64 = s.parse().map_err(|_| ParseError::Syntax {
                pos: start,
                expected: vec!["number"],
                found: s.to_string(),
            })?;
            out.push(Token { tok: Tok::Num(value), pos: start, text: s.to_string() });
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let s = &text[start..i];
            out.push(Token { tok: Tok::Ident(s.to_string()), pos: start, text: s.to_string() });
        } else if b"+-*/^()".contains(&c) {
            i += 1;
            out.push(Token { tok: Tok::Sym(c as char), pos: start, text: (c as char).to_string() });
        } else {
            let ch = text[start..].chars().next().unwrap_or('?');
            return Err(ParseError::Syntax {
                pos: start,
                expected: vec!["number", "identifier", "operator", "(", ")"],
                found: ch.to_string(),
            });
        }
    }
    out.push(Token { tok: Tok::End, pos: text.len(), text: "end of input".to_string() });
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    ctx: &'a ParseContext,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn here(&self) -> usize {
        self.tokens[self.pos].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&'static str]) -> ParseError {
        let t = &self.tokens[self.pos];
        ParseError::Syntax { pos: t.pos, expected: expected.to_vec(), found: t.text.clone() }
    }

    fn expect(&mut self, c: char, name: &'static str) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[name]))
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('+') => BinaryOp::Add,
                Tok::Sym('-') => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('*') => BinaryOp::Mul,
                Tok::Sym('/') => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        match self.peek() {
            Tok::Sym('-') => {
                self.bump();
                Ok(Node::Unary(UnaryOp::Neg, Box::new(self.unary()?)))
            }
            Tok::Sym('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        let at = self.here();
        let exponent = self.unary()?;
        let tree = ExprTree::new(exponent, Vec::new());
        if !tree.is_constant() {
            return Err(ParseError::NonConstantExponent { pos: at });
        }
        let value: f64 = tree.eval(&[]).map_err(|_| ParseError::NonConstantExponent { pos: at })?;
        Ok(Node::Pow { base: Box::new(base), exponent: Box::new(tree.root), value })
    }

    fn primary(&mut self) -> Result<Node, ParseError> {
        if !matches!(self.peek(), Tok::Num(_) | Tok::Ident(_) | Tok::Sym('(')) {
            return Err(self.unexpected(&["number", "identifier", "(", "-"]));
        }
        let tok = self.bump();
        match tok.tok {
            Tok::Num(x) => Ok(Node::Num(x)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')', ")")?;
                Ok(e)
            }
            Tok::Ident(name) => self.identifier(name, tok.pos),
            _ => unreachable!("checked above"),
        }
    }

    fn identifier(&mut self, name: String, pos: usize) -> Result<Node, ParseError> {
        if let Some(op) = UnaryOp::from_name(&name) {
            self.expect('(', "(")?;
            let arg = self.expr()?;
            self.expect(')', ")")?;
            return Ok(Node::Unary(op, Box::new(arg)));
        }
        if let Some(i) = self.ctx.variables.iter().position(|v| *v == name) {
            return Ok(Node::Var(i));
        }
        let user = self.ctx.constants.iter().map(|(n, v)| (n.as_str(), *v));
        if let Some((_, value)) = user.chain(BUILTIN_CONSTANTS).find(|(n, _)| *n == name) {
            return Ok(Node::Const { name, value });
        }
        Err(ParseError::UnknownIdentifier { pos, name })
    }
}
