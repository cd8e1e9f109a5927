use alloc::string::String;

use super::expr::ExprTree;
use super::parse::{parse_expr_with, ParseContext};
use crate::error::{Error, ParseError, Result};
use crate::jet::Scalar;
use crate::vec3::Vec3;

/// Closed parameter interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, u: f64) -> bool {
        u >= self.lo && u <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// `n` evenly spaced points including both ends (`n >= 2`).
    pub fn samples(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        let step = self.width() / (n.max(2) - 1) as f64;
        (0..n).map(move |i| if i + 1 == n { self.hi } else { self.lo + step * i as f64 })
    }
}

/// A space curve that can be evaluated at any [`Scalar`], so derivatives of
/// every order come from jet arithmetic.
pub trait Curve {
    fn domain(&self) -> Interval;
    fn point<S: Scalar>(&self, u: S) -> Result<Vec3<S>>;
}

impl<C: Curve> Curve for &C {
    fn domain(&self) -> Interval {
        (**self).domain()
    }

    fn point<S: Scalar>(&self, u: S) -> Result<Vec3<S>> {
        (**self).point(u)
    }
}

/// Curve given by three closed-form component expressions in one variable.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveDef {
    pub components: [ExprTree; 3],
    pub domain: Interval,
    pub label: String,
}

impl CurveDef {
    pub fn new(components: [ExprTree; 3], domain: Interval, label: impl Into<String>) -> Self {
        CurveDef { components, domain, label: label.into() }
    }

    /// Parses the three components with a shared single-variable context.
    pub fn parse(
        xyz: [&str; 3],
        domain: Interval,
        label: impl Into<String>,
        ctx: &ParseContext,
    ) -> Result<Self, ParseError> {
        if ctx.variables.len() != 1 {
            return Err(ParseError::UnknownIdentifier { pos: 0, name: "<curve variable>".into() });
        }
        Ok(CurveDef::new(
            [parse_expr_with(xyz[0], ctx)?, parse_expr_with(xyz[1], ctx)?, parse_expr_with(xyz[2], ctx)?],
            domain,
            label,
        ))
    }
}

impl Curve for CurveDef {
    fn domain(&self) -> Interval {
        self.domain
    }

    fn point<S: Scalar>(&self, u: S) -> Result<Vec3<S>> {
        if !self.domain.contains(u.re()) {
            return Err(Error::Domain { op: "curve parameter", at: u.re() });
        }
        Ok(Vec3::new(self.components[0].eval1(u)?, self.components[1].eval1(u)?, self.components[2].eval1(u)?))
    }
}
