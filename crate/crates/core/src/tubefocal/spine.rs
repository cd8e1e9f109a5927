//! Spines for Frenet-frame tubes: closed-form curves, and planar curves
//! recovered from a prescribed curvature function.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::quad::integrate;
use crate::error::{Error, Result};
use crate::exprcurve::{parse_expr_with, Curve, CurveDef, ExprTree, Interval, ParseContext};
use crate::jet::{compose_taylor, Jet, Scalar};
use crate::vec3::Vec3;

/// Number of Taylor coefficients kept at every node.
const TAYLOR: usize = 13;
/// Node spacing is refined to at most this so the local expansions stay accurate.
const MAX_SPACING: f64 = 0.02;
const QUAD_TOL: f64 = 1e-10;

type Series = Jet<TAYLOR, f64>;

/// Unit-speed plane curve with `θ' = κ`, `γ' = (cos θ, sin θ, 0)`,
/// normalised by `θ(anchor) = 0`, `γ(anchor) = 0`.
///
/// Node values come from adaptive quadrature; between nodes the curve is the
/// local Taylor expansion of the integrals, so it can be evaluated on jets.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegratedSpine {
    pub kappa: ExprTree,
    pub anchor: f64,
    pub domain: Interval,
    nodes: Vec<f64>,
    /// Taylor coefficients of `x`, `y` about each node.
    xs: Vec<[f64; TAYLOR]>,
    ys: Vec<[f64; TAYLOR]>,
}

fn theta_series(kappa: &ExprTree, at: f64, theta0: f64) -> Result<Series> {
    let k = kappa.eval1(Series::variable(at))?;
    let mut c = [0.0; TAYLOR];
    c[0] = theta0;
    for i in 1..TAYLOR {
        c[i] = k.coeff(i - 1) / i as f64;
    }
    Ok(Series::from_coeffs(c))
}

/// Integrates `(cos θ, sin θ)` termwise.
fn position_series(theta: &Series, origin: [f64; 2]) -> ([f64; TAYLOR], [f64; TAYLOR]) {
    let (s, c) = theta.sin_cos();
    let mut x = [0.0; TAYLOR];
    let mut y = [0.0; TAYLOR];
    x[0] = origin[0];
    y[0] = origin[1];
    for i in 1..TAYLOR {
        x[i] = c.coeff(i - 1) / i as f64;
        y[i] = s.coeff(i - 1) / i as f64;
    }
    (x, y)
}

fn horner(c: &[f64; TAYLOR], h: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * h + ck)
}

/// Re-expands a node series about a point at offset `h` from the node.
fn shift(c: &[f64; TAYLOR], h: f64) -> [f64; TAYLOR] {
    let x = Series::variable(h);
    let p = c.iter().rev().fold(Series::zero(), |acc, &ck| acc * x + Series::constant(ck));
    *p.coeffs()
}

/// Builds the spine whose Frenet curvature is `kappa` on `span`.
///
/// `n` is the minimum number of nodes; it is raised so that neighbouring
/// nodes are no further apart than 0.02.
pub fn spine_from_curvature(kappa: &ExprTree, anchor: f64, span: Interval, n: usize) -> Result<IntegratedSpine> {
    if n < 16 {
        return Err(Error::InvalidInput(format!("spine_from_curvature needs n >= 16, got {n}")));
    }
    if !(span.width() > 0.0) || !span.contains(anchor) {
        return Err(Error::InvalidInput(format!(
            "anchor {anchor} must lie in a non-empty span [{}, {}]",
            span.lo, span.hi
        )));
    }
    let count = n.max(libm::ceil(span.width() / MAX_SPACING) as usize + 1);
    let nodes: Vec<f64> = span.samples(count).collect();
    let mut theta = alloc::vec![0.0; count];
    let mut pos = alloc::vec![[0.0; 2]; count];

    let k = |u: f64| -> Result<[f64; 1]> {
        let v = kappa.eval1(u)?;
        if !v.is_finite() {
            return Err(Error::QuadratureFailure { a: u, b: u });
        }
        Ok([v])
    };
    // integral of (cos θ, sin θ) from `a` to `b`, with θ expanded about node `i`
    let arc = |i: usize, th: f64, a: f64, b: f64| -> Result<[f64; 2]> {
        let ts = theta_series(kappa, nodes[i], th)?;
        integrate(
            |s| {
                let t = horner(ts.coeffs(), s - nodes[i]);
                Ok([libm::cos(t), libm::sin(t)])
            },
            a,
            b,
            QUAD_TOL,
        )
    };

    let start = nodes
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - anchor).abs().total_cmp(&(b.1 - anchor).abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    theta[start] = integrate(k, anchor, nodes[start], QUAD_TOL)?[0];
    pos[start] = arc(start, theta[start], anchor, nodes[start])?;
    for i in start + 1..count {
        theta[i] = theta[i - 1] + integrate(k, nodes[i - 1], nodes[i], QUAD_TOL)?[0];
        let d = arc(i - 1, theta[i - 1], nodes[i - 1], nodes[i])?;
        pos[i] = [pos[i - 1][0] + d[0], pos[i - 1][1] + d[1]];
    }
    for i in (0..start).rev() {
        theta[i] = theta[i + 1] - integrate(k, nodes[i], nodes[i + 1], QUAD_TOL)?[0];
        let d = arc(i + 1, theta[i + 1], nodes[i + 1], nodes[i])?;
        pos[i] = [pos[i + 1][0] + d[0], pos[i + 1][1] + d[1]];
    }

    let mut xs = Vec::with_capacity(count);
    let mut ys = Vec::with_capacity(count);
    for i in 0..count {
        let (x, y) = position_series(&theta_series(kappa, nodes[i], theta[i])?, pos[i]);
        xs.push(x);
        ys.push(y);
    }
    Ok(IntegratedSpine { kappa: kappa.clone(), anchor, domain: span, nodes, xs, ys })
}

impl IntegratedSpine {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn nearest(&self, u: f64) -> usize {
        let step = self.domain.width() / (self.nodes.len() - 1) as f64;
        let i = libm::round((u - self.domain.lo) / step);
        (i.max(0.0) as usize).min(self.nodes.len() - 1)
    }
}

impl Curve for IntegratedSpine {
    fn domain(&self) -> Interval {
        self.domain
    }

    fn point<S: Scalar>(&self, u: S) -> Result<Vec3<S>> {
        let u0 = u.re();
        if !self.domain.contains(u0) {
            return Err(Error::Domain { op: "curve parameter", at: u0 });
        }
        let i = self.nearest(u0);
        let h = u0 - self.nodes[i];
        Ok(Vec3::new(compose_taylor(&shift(&self.xs[i], h), u), compose_taylor(&shift(&self.ys[i], h), u), S::zero()))
    }
}

/// Spine of a Frenet-frame tube.
#[derive(Clone, Debug, PartialEq)]
pub enum Spine {
    Analytic(CurveDef),
    Integrated(IntegratedSpine),
}

impl Curve for Spine {
    fn domain(&self) -> Interval {
        match self {
            Spine::Analytic(c) => c.domain,
            Spine::Integrated(s) => s.domain,
        }
    }

    fn point<S: Scalar>(&self, u: S) -> Result<Vec3<S>> {
        match self {
            Spine::Analytic(c) => c.point(u),
            Spine::Integrated(s) => s.point(u),
        }
    }
}

/// Constants of the two curvature families singled out by the theory:
/// constant-mean-curvature focal surfaces, `κ = ±√((u + c₁c)c)/(u + c₁c)`,
/// and focal surfaces with geodesic u-curves, `κ = -1/(c₁u + c₂)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpineFamilyParams {
    pub c: f64,
    pub c1: f64,
    pub c2: f64,
}

impl SpineFamilyParams {
    fn context(&self) -> ParseContext {
        ParseContext::univariate().constant("c", self.c).constant("c1", self.c1).constant("c2", self.c2)
    }

    /// Curvature giving a focal surface with `H* = c` (for the `+` branch and `c > 0`).
    pub fn cmc_curvature(&self, positive: bool) -> ExprTree {
        let text = if positive { "sqrt((u + c1*c)*c)/(u + c1*c)" } else { "-(sqrt((u + c1*c)*c)/(u + c1*c))" };
        parse_expr_with(text, &self.context()).expect("built-in expression")
    }

    /// Curvature whose focal u-curves are geodesics.
    pub fn geodesic_curvature(&self) -> ExprTree {
        parse_expr_with("-1/(c1*u + c2)", &self.context()).expect("built-in expression")
    }

    /// True if `(u + c₁c)c > 0` at `n` samples of `span`.
    pub fn cmc_defined_on(&self, span: Interval, n: usize) -> bool {
        span.samples(n.max(2)).all(|u| (u + self.c1 * self.c) * self.c > 0.0)
    }

    /// True if `c₁u + c₂` keeps one strict sign at `n` samples of `span`.
    pub fn geodesic_defined_on(&self, span: Interval, n: usize) -> bool {
        let s: Vec<f64> = span.samples(n.max(2)).map(|u| self.c1 * u + self.c2).collect();
        s.iter().all(|x| *x < 0.0) || s.iter().all(|x| *x > 0.0)
    }
}

/// Human-readable description used in reports.
pub fn spine_label(s: &Spine) -> String {
    match s {
        Spine::Analytic(c) => c.label.clone(),
        Spine::Integrated(i) => format!("integrated from curvature {}", i.kappa),
    }
}
