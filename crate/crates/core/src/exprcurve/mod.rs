//! Closed-form curve input: expression parsing, jet evaluation and the
//! finite-difference oracle.

mod curve;
mod expr;
mod fd;
mod parse;

pub use curve::{Curve, CurveDef, Interval};
pub use expr::{eval_jet3, BinaryOp, ExprTree, Node, UnaryOp};
pub use fd::{fd_derivs, fd_jet3, fd_jet3_with, FdConfig, FdValue};
pub use parse::{parse_expr, parse_expr_with, ParseContext, BUILTIN_CONSTANTS};
