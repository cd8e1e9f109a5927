//! Generic parametric-surface engine. Everything here works from the
//! partial derivatives alone, which makes it the reference against which
//! the closed forms of the tube and focal surfaces are checked.

use crate::error::{Error, Result};
use crate::exprcurve::{fd_derivs, FdConfig};
use crate::jet::{Jet, Scalar};
use crate::vec3::Vec3;

/// A map `(u, v) ↦ X(u, v)` evaluable at any [`Scalar`].
pub trait Surface {
    fn point<S: Scalar>(&self, u: S, v: S) -> Result<Vec3<S>>;
}

impl<T: Surface> Surface for &T {
    fn point<S: Scalar>(&self, u: S, v: S) -> Result<Vec3<S>> {
        (**self).point(u, v)
    }
}

/// Position and first and second partials at one `(u, v)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceJet {
    pub u: f64,
    pub v: f64,
    pub x: Vec3,
    pub xu: Vec3,
    pub xv: Vec3,
    pub xuu: Vec3,
    pub xuv: Vec3,
    pub xvv: Vec3,
}

type Bi = Jet<3, Jet<3, f64>>;

fn split(p: Vec3<Bi>, u: f64, v: f64) -> SurfaceJet {
    let at = |i: usize, j: usize| p.map(|c| c.derivative(i).derivative(j));
    SurfaceJet { u, v, x: at(0, 0), xu: at(1, 0), xv: at(0, 1), xuu: at(2, 0), xuv: at(1, 1), xvv: at(0, 2) }
}

/// Partials by nested jets: outer jet in `u`, inner in `v`.
pub fn surface_jet<F: Surface>(surface: &F, u: f64, v: f64) -> Result<SurfaceJet> {
    let uj = Bi::variable(Jet::constant(u));
    let vj = Bi::constant(Jet::variable(v));
    Ok(split(surface.point(uj, vj)?, u, v))
}

/// `‖X_uv - X_vu‖`, the second computed with the nesting order swapped.
pub fn mixed_partial_asymmetry<F: Surface>(surface: &F, u: f64, v: f64) -> Result<f64> {
    let uv = surface_jet(surface, u, v)?.xuv;
    let uj = Bi::constant(Jet::variable(u));
    let vj = Bi::variable(Jet::constant(v));
    let vu = surface.point(uj, vj)?.map(|c| c.derivative(1).derivative(1));
    Ok((uv - vu).norm())
}

/// Partials by central differences on the plain `f64` path.
pub fn surface_jet_fd<F: Surface>(surface: &F, u: f64, v: f64, cfg: &FdConfig) -> Result<SurfaceJet> {
    let du = fd_derivs(|s| surface.point(s, v), u, cfg)?;
    let dv = fd_derivs(|t| surface.point(u, t), v, cfg)?;
    let xuv = fd_derivs(|s| Ok(fd_derivs(|t| surface.point(s, t), v, cfg)?[1]), u, cfg)?[1];
    Ok(SurfaceJet { u, v, x: du[0], xu: du[1], xv: dv[1], xuu: du[2], xuv, xvv: dv[2] })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FundamentalForms {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    /// `EG - F²`.
    pub w2: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
    pub normal: Vec3,
}

impl FundamentalForms {
    pub fn w(&self) -> f64 {
        libm::sqrt(self.w2.max(0.0))
    }
}

/// Forms with `N = (X_u × X_v)/‖X_u × X_v‖`; singular iff `‖X_u × X_v‖ ≤ eps_reg`.
pub fn fundamental_forms(j: &SurfaceJet, eps_reg: f64) -> Result<FundamentalForms> {
    let c = j.xu.cross(&j.xv);
    let w = c.norm();
    if !(w > eps_reg) {
        return Err(Error::SingularPoint { u: j.u, v: j.v, w });
    }
    let normal = c.scale(1.0 / w);
    let (e, f, g) = (j.xu.dot(&j.xu), j.xu.dot(&j.xv), j.xv.dot(&j.xv));
    Ok(FundamentalForms {
        e,
        f,
        g,
        w2: e * g - f * f,
        l: j.xuu.dot(&normal),
        m: j.xuv.dot(&normal),
        n: j.xvv.dot(&normal),
        normal,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureSummary {
    pub k: f64,
    pub h: f64,
    /// `H + √(H² - K)`
    pub kappa1: f64,
    /// `H - √(H² - K)`
    pub kappa2: f64,
    /// Shape operator in the `(X_u, X_v)` basis, `I⁻¹ II`.
    pub shape: [[f64; 2]; 2],
}

/// Radicands down to this (relative) negative value are round-off at umbilics.
const UMBILIC_CLAMP: f64 = 1e-12;

pub fn curvatures(ff: &FundamentalForms) -> CurvatureSummary {
    let FundamentalForms { e, f, g, w2, l, m, n, .. } = *ff;
    let k = (l * n - m * m) / w2;
    let h = (e * n - 2.0 * f * m + g * l) / (2.0 * w2);
    let mut rad = h * h - k;
    if rad < 0.0 && rad >= -UMBILIC_CLAMP * (h * h).max(1.0) {
        rad = 0.0;
    }
    let s = libm::sqrt(rad);
    let shape = [[(g * l - f * m) / w2, (g * m - f * n) / w2], [(e * m - f * l) / w2, (e * n - f * m) / w2]];
    CurvatureSummary { k, h, kappa1: h + s, kappa2: h - s, shape }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamDirection {
    /// The curve `u ↦ X(u, v0)`.
    U,
    /// The curve `v ↦ X(u0, v)`.
    V,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointClassification {
    /// `⟨X_uu, N⟩` or `⟨X_vv, N⟩`; zero for an asymptotic direction.
    pub normal_component: f64,
    /// `‖X_uu × N‖` or `‖X_vv × N‖`; zero when the parameter curve is a geodesic.
    pub geodesic_residual: f64,
}

pub fn classify_point(j: &SurfaceJet, ff: &FundamentalForms, dir: ParamDirection) -> PointClassification {
    let second = match dir {
        ParamDirection::U => j.xuu,
        ParamDirection::V => j.xvv,
    };
    PointClassification { normal_component: second.dot(&ff.normal), geodesic_residual: second.cross(&ff.normal).norm() }
}
