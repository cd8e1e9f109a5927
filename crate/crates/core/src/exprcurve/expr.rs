use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::jet::{Jet3, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Tan,
    Ln,
    Exp,
    Sqrt,
}

impl UnaryOp {
    pub(crate) fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            "tan" => UnaryOp::Tan,
            "ln" => UnaryOp::Ln,
            "exp" => UnaryOp::Exp,
            "sqrt" => UnaryOp::Sqrt,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Tan => "tan",
            UnaryOp::Ln => "ln",
            UnaryOp::Exp => "exp",
            UnaryOp::Sqrt => "sqrt",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinaryOp {
    fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    /// Index into the tree's variable list.
    Var(usize),
    Num(f64),
    Const {
        name: String,
        value: f64,
    },
    Unary(UnaryOp, Box<Node>),
    Binary(BinaryOp, Box<Node>, Box<Node>),
    /// Power with a variable-free exponent; `value` is the exponent, folded at parse time.
    Pow {
        base: Box<Node>,
        exponent: Box<Node>,
        value: f64,
    },
}

/// Parsed expression over a fixed, ordered list of variables.
///
/// Immutable once built; evaluation takes `&self` and is safe to share
/// across threads.
#[derive(Clone, Debug, PartialEq)]
pub struct ExprTree {
    pub(crate) root: Node,
    pub(crate) vars: Vec<String>,
}

/// Integer exponents up to this magnitude go through exact repeated multiplication.
const MAX_INT_EXPONENT: f64 = 64.0;

impl ExprTree {
    pub fn new(root: Node, vars: Vec<String>) -> Self {
        ExprTree { root, vars }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    /// True if the tree references none of its variables.
    pub fn is_constant(&self) -> bool {
        !self.root.uses_var()
    }

    /// Evaluates with `args[i]` bound to variable `i`.
    pub fn eval<S: Scalar>(&self, args: &[S]) -> Result<S> {
        if args.len() != self.vars.len() {
            return Err(Error::InvalidInput(alloc::format!(
                "expression takes {} variable(s), got {}",
                self.vars.len(),
                args.len()
            )));
        }
        eval_node(&self.root, args)
    }

    /// Evaluates a single-variable tree.
    pub fn eval1<S: Scalar>(&self, u: S) -> Result<S> {
        if self.vars.len() > 1 {
            return Err(Error::InvalidInput(alloc::format!(
                "expression has {} variables, expected one",
                self.vars.len()
            )));
        }
        if self.vars.is_empty() {
            eval_node(&self.root, &[])
        } else {
            eval_node(&self.root, &[u])
        }
    }
}

impl Node {
    fn uses_var(&self) -> bool {
        match self {
            Node::Var(_) => true,
            Node::Num(_) | Node::Const { .. } => false,
            Node::Unary(_, a) => a.uses_var(),
            Node::Binary(_, a, b) => a.uses_var() || b.uses_var(),
            Node::Pow { base, .. } => base.uses_var(),
        }
    }
}

fn checked<S: Scalar>(x: S, op: &'static str, at: f64) -> Result<S> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Domain { op, at })
    }
}

fn eval_node<S: Scalar>(node: &Node, args: &[S]) -> Result<S> {
    match node {
        Node::Var(i) => Ok(args[*i]),
        Node::Num(x) => Ok(S::from_f64(*x)),
        Node::Const { value, .. } => Ok(S::from_f64(*value)),
        Node::Unary(op, a) => {
            let a = eval_node(a, args)?;
            let x = a.re();
            let r = match op {
                UnaryOp::Neg => -a,
                UnaryOp::Sin => a.sin(),
                UnaryOp::Cos => a.cos(),
                UnaryOp::Tan => {
                    if libm::cos(x).abs() < 1e-12 {
                        return Err(Error::Domain { op: "tan", at: x });
                    }
                    a.tan()
                }
                UnaryOp::Ln => {
                    if !(x > 0.0) {
                        return Err(Error::Domain { op: "ln", at: x });
                    }
                    a.ln()
                }
                UnaryOp::Exp => a.exp(),
                UnaryOp::Sqrt => {
                    if x < 0.0 || (x == 0.0 && S::ORDER > 0) || x.is_nan() {
                        return Err(Error::Domain { op: "sqrt", at: x });
                    }
                    a.sqrt()
                }
            };
            checked(r, op.name(), x)
        }
        Node::Binary(op, a, b) => {
            let a = eval_node(a, args)?;
            let b = eval_node(b, args)?;
            let r = match op {
                BinaryOp::Add => a + b,
                BinaryOp::Sub => a - b,
                BinaryOp::Mul => a * b,
                BinaryOp::Div => {
                    if b.re() == 0.0 {
                        return Err(Error::Domain { op: "division", at: 0.0 });
                    }
                    a / b
                }
            };
            checked(r, "arithmetic", a.re())
        }
        Node::Pow { base, value, .. } => {
            let a = eval_node(base, args)?;
            let x = a.re();
            let p = *value;
            let r = if p == libm::trunc(p) && p.abs() <= MAX_INT_EXPONENT {
                if x == 0.0 && p < 0.0 {
                    return Err(Error::Domain { op: "power", at: x });
                }
                a.powi(p as i32)
            } else {
                if x < 0.0 || (x == 0.0 && (p < 0.0 || S::ORDER > 0)) || x.is_nan() {
                    return Err(Error::Domain { op: "power", at: x });
                }
                a.powf(p)
            };
            checked(r, "power", x)
        }
    }
}

/// Value and first three derivatives of a single-variable tree at `u`.
pub fn eval_jet3(tree: &ExprTree, u: f64) -> Result<Jet3> {
    tree.eval1(Jet3::variable(u))
}

/// Fully parenthesised infix form; re-parses to an identical tree.
impl fmt::Display for ExprTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(&self.root, &self.vars, f)
    }
}

fn write_node(node: &Node, vars: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match node {
        Node::Var(i) => f.write_str(&vars[*i]),
        Node::Num(x) => write!(f, "{x}"),
        Node::Const { name, .. } => f.write_str(name),
        Node::Unary(UnaryOp::Neg, a) => {
            f.write_str("(-")?;
            write_node(a, vars, f)?;
            f.write_str(")")
        }
        Node::Unary(op, a) => {
            write!(f, "{}(", op.name())?;
            write_node(a, vars, f)?;
            f.write_str(")")
        }
        Node::Binary(op, a, b) => {
            f.write_str("(")?;
            write_node(a, vars, f)?;
            write!(f, " {} ", op.symbol())?;
            write_node(b, vars, f)?;
            f.write_str(")")
        }
        Node::Pow { base, exponent, .. } => {
            f.write_str("(")?;
            write_node(base, vars, f)?;
            f.write_str("^(")?;
            write_node(exponent, vars, f)?;
            f.write_str("))")
        }
    }
}
