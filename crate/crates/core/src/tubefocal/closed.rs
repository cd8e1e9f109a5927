//! Closed-form tube and focal surfaces in terms of the moving frame.
//!
//! `kappa1`/`kappa2` in the returned summaries follow the theory's labelling
//! (`kappa1 = 1/r` on the tube), not the `H ± √(H²-K)` ordering of
//! [`curvatures`](crate::surfkit::curvatures).

use crate::error::{Error, Result};
use crate::framekit::{DarbouxApparatus, FrenetApparatus};
#[allow(unused_imports)]
use crate::jet::{Jet3, Scalar};
use crate::surfkit::{curvatures, CurvatureSummary, FundamentalForms, SurfaceJet};
use crate::tol::Tolerances;
use crate::vec3::Vec3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedForms {
    /// `normal` is the theory's normal, which may differ in sign from `X_u × X_v`.
    pub forms: FundamentalForms,
    pub curv: CurvatureSummary,
}

impl ClosedForms {
    fn new(e: f64, f: f64, g: f64, l: f64, m: f64, n: f64, normal: Vec3) -> Self {
        let forms = FundamentalForms { e, f, g, w2: e * g - f * f, l, m, n, normal };
        ClosedForms { forms, curv: curvatures(&forms) }
    }

    fn with_curvatures(mut self, k: f64, h: f64, kappa1: f64, kappa2: f64) -> Self {
        self.curv.k = k;
        self.curv.h = h;
        self.curv.kappa1 = kappa1;
        self.curv.kappa2 = kappa2;
        self
    }

    /// Flat focal sheet: `K* = 0`, principal curvatures `{2H*, 0}`.
    fn flat(self, h: f64) -> Self {
        self.with_curvatures(0.0, h, 2.0 * h, 0.0)
    }
}

// ---------------------------------------------------------------- Frenet

/// Position and partials of `X = γ + r(cos v N1 + sin v N2)` for a planar spine.
pub fn frenet_tube_jet(a: &FrenetApparatus, r: f64, v: f64) -> SurfaceJet {
    let (s, c) = libm::sincos(v);
    let (k, k1) = (a.kappa, a.kappa_jet.d1());
    let q = 1.0 - k * r * c;
    SurfaceJet {
        u: a.param,
        v,
        x: a.gamma + (a.n1.scale(c) + a.n2.scale(s)).scale(r),
        xu: a.t.scale(q),
        xv: a.n1.scale(-r * s) + a.n2.scale(r * c),
        xuu: a.t.scale(-k1 * r * c) + a.n1.scale(k * q),
        xuv: a.t.scale(k * r * s),
        xvv: (a.n1.scale(c) + a.n2.scale(s)).scale(-r),
    }
}

pub fn frenet_tube_forms(a: &FrenetApparatus, r: f64, v: f64, tol: &Tolerances) -> Result<ClosedForms> {
    let (s, c) = libm::sincos(v);
    let k = a.kappa;
    let q = 1.0 - k * r * c;
    let w = q.abs() * r;
    if !(w > tol.eps_reg) {
        return Err(Error::SingularPoint { u: a.param, v, w });
    }
    let normal = -(a.n1.scale(c) + a.n2.scale(s));
    let kappa2 = -k * c / q;
    Ok(ClosedForms::new(q * q, 0.0, r * r, -k * q * c, 0.0, r, normal).with_curvatures(
        -k * c / (r * q),
        (1.0 - 2.0 * k * r * c) / (2.0 * r * q),
        1.0 / r,
        kappa2,
    ))
}

/// `W* = |κ'| / (κ³ cos² v)`.
pub fn frenet_focal_w(a: &FrenetApparatus, v: f64) -> f64 {
    let c = libm::cos(v);
    a.kappa_jet.d1().abs() / (a.kappa.powi(3) * c * c)
}

fn frenet_focal_check(a: &FrenetApparatus, v: f64, tol: &Tolerances) -> Result<()> {
    if !(libm::cos(v).abs() > tol.eps_v) {
        return Err(Error::FocalPoleV { u: a.param, v });
    }
    let w = frenet_focal_w(a, v);
    if !(w > tol.eps_reg) {
        return Err(Error::FocalDegenerate { u: a.param, v, w });
    }
    Ok(())
}

/// Position and partials of `X* = γ + (1/(κ cos v))(cos v N1 + sin v N2)`.
pub fn frenet_focal_jet(a: &FrenetApparatus, v: f64, tol: &Tolerances) -> Result<SurfaceJet> {
    frenet_focal_check(a, v, tol)?;
    let (s, c) = libm::sincos(v);
    let t = s / c;
    let Jet3Parts { k, k1, k2 } = parts(&a.kappa_jet);
    let dir = a.n1 + a.n2.scale(t);
    let geo = (-k2 * k + 2.0 * k1 * k1) / (k * k * k);
    Ok(SurfaceJet {
        u: a.param,
        v,
        x: a.gamma + dir.scale(1.0 / k),
        xu: dir.scale(-k1 / (k * k)),
        xv: a.n2.scale(1.0 / (k * c * c)),
        xuu: a.t.scale(k1 / k) + dir.scale(geo),
        xuv: a.n2.scale(-k1 / (k * k) * (1.0 + t * t)),
        xvv: a.n2.scale(2.0 * s / (k * c * c * c)),
    })
}

pub fn frenet_focal_forms(a: &FrenetApparatus, v: f64, tol: &Tolerances) -> Result<ClosedForms> {
    frenet_focal_check(a, v, tol)?;
    let (s, c) = libm::sincos(v);
    let Jet3Parts { k, k1, .. } = parts(&a.kappa_jet);
    let e = k1 * k1 / (k.powi(4) * c * c);
    let f = -k1 * s / (k.powi(3) * c.powi(3));
    let g = 1.0 / (k * k * c.powi(4));
    Ok(ClosedForms::new(e, f, g, -k1 / k, 0.0, 0.0, -a.t).flat(-k.powi(3) / (2.0 * k1)))
}

struct Jet3Parts {
    k: f64,
    k1: f64,
    k2: f64,
}

fn parts(j: &Jet3) -> Jet3Parts {
    Jet3Parts { k: j.f(), k1: j.d1(), k2: j.d2() }
}

// ---------------------------------------------------------------- Darboux

/// `b(u, v) = k_g(u) cos v + k_n(u) sin v` with the partials the closed forms use.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BScalar {
    pub b: f64,
    pub b_u: f64,
    pub b_v: f64,
    pub b_uu: f64,
    pub b_uv: f64,
    pub b_vv: f64,
}

impl BScalar {
    pub fn new(a: &DarbouxApparatus, v: f64) -> Self {
        let (s, c) = libm::sincos(v);
        let (g, n) = (&a.kg_jet, &a.kn_jet);
        BScalar {
            b: g.f() * c + n.f() * s,
            b_u: g.d1() * c + n.d1() * s,
            b_v: -g.f() * s + n.f() * c,
            b_uu: g.d2() * c + n.d2() * s,
            b_uv: -g.d1() * s + n.d1() * c,
            b_vv: -g.f() * c - n.f() * s,
        }
    }

    /// `b_u - b_v τ_g`, the quantity whose zero set degenerates the focal sheet.
    pub fn focal_factor(&self, taug: f64) -> f64 {
        self.b_u - self.b_v * taug
    }
}

pub fn darboux_tube_jet(a: &DarbouxApparatus, r: f64, v: f64) -> SurfaceJet {
    let (s, c) = libm::sincos(v);
    let bs = BScalar::new(a, v);
    let (tg, tg1) = (a.taug, a.taug_jet.d1());
    let q = 1.0 - bs.b * r;
    SurfaceJet {
        u: a.param,
        v,
        x: a.gamma + (a.y.scale(c) + a.u.scale(s)).scale(r),
        xu: a.t.scale(q) + a.y.scale(-r * tg * s) + a.u.scale(r * tg * c),
        xv: a.y.scale(-r * s) + a.u.scale(r * c),
        xuu: a.t.scale(-bs.b_u * r - r * tg * bs.b_v)
            + a.y.scale(a.kg * q - r * tg1 * s - r * tg * tg * c)
            + a.u.scale(a.kn * q + r * tg1 * c - r * tg * tg * s),
        xuv: a.t.scale(-bs.b_v * r) + a.y.scale(-r * tg * c) + a.u.scale(-r * tg * s),
        xvv: (a.y.scale(c) + a.u.scale(s)).scale(-r),
    }
}

pub fn darboux_tube_forms(a: &DarbouxApparatus, r: f64, v: f64, tol: &Tolerances) -> Result<ClosedForms> {
    let (s, c) = libm::sincos(v);
    let b = BScalar::new(a, v).b;
    let tg = a.taug;
    let q = 1.0 - b * r;
    let w = q.abs() * r;
    if !(w > tol.eps_reg) {
        return Err(Error::SingularPoint { u: a.param, v, w });
    }
    let normal = -(a.y.scale(c) + a.u.scale(s));
    Ok(ClosedForms::new(q * q + r * r * tg * tg, r * r * tg, r * r, -q * b + r * tg * tg, r * tg, r, normal)
        .with_curvatures(b / (r * (b * r - 1.0)), (1.0 - 2.0 * b * r) / (2.0 * q * r), 1.0 / r, b / (b * r - 1.0)))
}

/// `W* = |b_u - b_v τ_g| / |b|³`.
pub fn darboux_focal_w(a: &DarbouxApparatus, v: f64) -> f64 {
    let bs = BScalar::new(a, v);
    bs.focal_factor(a.taug).abs() / bs.b.abs().powi(3)
}

fn darboux_focal_check(a: &DarbouxApparatus, v: f64, tol: &Tolerances) -> Result<BScalar> {
    let bs = BScalar::new(a, v);
    if !(bs.b.abs() > tol.eps_b) {
        return Err(Error::FocalPoleB { u: a.param, v, b: bs.b });
    }
    let w = bs.focal_factor(a.taug).abs() / bs.b.abs().powi(3);
    if !(w > tol.eps_reg) {
        return Err(Error::FocalDegenerate { u: a.param, v, w });
    }
    Ok(bs)
}

/// Position and partials of `X* = γ + (1/b)(cos v Y + sin v U)`.
pub fn darboux_focal_jet(a: &DarbouxApparatus, v: f64, tol: &Tolerances) -> Result<SurfaceJet> {
    let BScalar { b, b_u, b_v, b_uu, b_uv, b_vv } = darboux_focal_check(a, v, tol)?;
    let (s, c) = libm::sincos(v);
    let (tg, tg1) = (a.taug, a.taug_jet.d1());
    let (b2, b3, b4) = (b * b, b * b * b, b * b * b * b);
    let yu = |cy: f64, cu: f64| a.y.scale(cy) + a.u.scale(cu);
    Ok(SurfaceJet {
        u: a.param,
        v,
        x: a.gamma + yu(c, s).scale(1.0 / b),
        xu: yu(-b_u / b2 * c - tg * s / b, -b_u / b2 * s + tg * c / b),
        xv: yu(-b_v / b2 * c - s / b, -b_v / b2 * s + c / b),
        xuu: a.t.scale((b_u - b_v * tg) / b)
            + yu(
                (-b_uu * b2 * c + 2.0 * b * b_u * b_u * c + 2.0 * b_u * b2 * tg * s - b3 * tg * tg * c - b3 * tg1 * s)
                    / b4,
                (-b_uu * b2 * s + 2.0 * b * b_u * b_u * s - 2.0 * b_u * b2 * tg * c - b3 * tg * tg * s + b3 * tg1 * c)
                    / b4,
            ),
        xuv: yu(
            (-b_uv * b2 * c + 2.0 * b * b_u * b_v * c + b_u * b2 * s + b_v * b2 * tg * s - b3 * tg * c) / b4,
            (-b_uv * b2 * s + 2.0 * b * b_u * b_v * s - b_u * b2 * c - b_v * b2 * tg * c - b3 * tg * s) / b4,
        ),
        xvv: yu(
            (-b_vv * b2 * c + 2.0 * b * b_v * b_v * c + 2.0 * b_v * b2 * s - b3 * c) / b4,
            (-b_vv * b2 * s + 2.0 * b * b_v * b_v * s - 2.0 * b_v * b2 * c - b3 * s) / b4,
        ),
    })
}

pub fn darboux_focal_forms(a: &DarbouxApparatus, v: f64, tol: &Tolerances) -> Result<ClosedForms> {
    let bs = darboux_focal_check(a, v, tol)?;
    let BScalar { b, b_u, b_v, .. } = bs;
    let tg = a.taug;
    let b4 = b.powi(4);
    let d = bs.focal_factor(tg);
    Ok(ClosedForms::new(
        (b_u * b_u + b * b * tg * tg) / b4,
        (b_u * b_v + b * b * tg) / b4,
        (b_v * b_v + b * b) / b4,
        d / b,
        0.0,
        0.0,
        a.t,
    )
    .flat((b_v * b_v + b * b) * b / (2.0 * d)))
}
