use crate::error::{Error, Result};
use crate::exprcurve::{fd_derivs, Curve, FdConfig};
use crate::jet::{Jet, Jet3, Scalar};
use crate::tol::Tolerances;
use crate::vec3::{triple, Vec3};

/// Frenet frame and curvatures at one parameter value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrenetApparatus {
    pub param: f64,
    pub gamma: Vec3,
    pub t: Vec3,
    pub n1: Vec3,
    pub n2: Vec3,
    pub kappa: f64,
    pub tau: f64,
    /// `kappa`, `kappa'`, `kappa''`, `kappa'''`.
    pub kappa_jet: Jet3,
    pub tau_jet: Jet3,
}

/// Frenet quantities over an arbitrary scalar, so callers can take
/// derivatives of the frame itself by passing a jet for `u`.
#[derive(Clone, Copy, Debug)]
pub struct FrenetFields<S> {
    pub gamma: Vec3<S>,
    pub t: Vec3<S>,
    pub n1: Vec3<S>,
    pub n2: Vec3<S>,
    pub kappa: S,
    pub tau: S,
}

/// Frenet fields of a unit-speed curve; speed is not checked here.
pub fn frenet_fields<C: Curve, S: Scalar>(curve: &C, u: S, eps_kappa: f64) -> Result<FrenetFields<S>> {
    let g = curve.point(Jet::<4, S>::variable(u))?;
    let d = |k: usize| g.map(|c| c.derivative(k));
    let (g1, g2, g3) = (d(1), d(2), d(3));
    let kappa = g2.norm();
    if !(kappa.re() > eps_kappa) {
        return Err(Error::VanishingCurvature { u: u.re(), kappa: kappa.re() });
    }
    let n1 = g2 * kappa.recip();
    let n2 = g1.cross(&n1);
    let tau = triple(&g1, &g2, &g3) / (kappa * kappa);
    Ok(FrenetFields { gamma: d(0), t: g1, n1, n2, kappa, tau })
}

fn speed_error(u: f64, t: Vec3, tol: f64) -> Result<()> {
    let speed = t.norm();
    if (speed - 1.0).abs() > tol || !speed.is_finite() {
        return Err(Error::NotUnitSpeed { u, speed });
    }
    Ok(())
}

pub fn frenet_at<C: Curve>(curve: &C, u: f64, tol: &Tolerances) -> Result<FrenetApparatus> {
    let f = frenet_fields(curve, Jet3::variable(u), tol.eps_kappa)?;
    speed_error(u, f.t.re(), tol.unit_speed)?;
    Ok(FrenetApparatus {
        param: u,
        gamma: f.gamma.re(),
        t: f.t.re(),
        n1: f.n1.re(),
        n2: f.n2.re(),
        kappa: f.kappa.re(),
        tau: f.tau.re(),
        kappa_jet: f.kappa,
        tau_jet: f.tau,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitSpeedReport {
    pub max_dev: f64,
    /// Sample where `max_dev` was attained.
    pub worst_u: f64,
    pub ok: bool,
}

/// `max |‖γ'‖ - 1|` over `nsamples` evenly spaced points of the domain.
///
/// A sample where the curve cannot be evaluated counts as an infinite deviation.
pub fn check_unit_speed<C: Curve>(curve: &C, nsamples: usize, tol: f64) -> UnitSpeedReport {
    let mut max_dev = 0.0f64;
    let mut worst_u = curve.domain().lo;
    for u in curve.domain().samples(nsamples.max(2)) {
        let dev = match curve.point(Jet::<2, f64>::variable(u)) {
            Ok(g) => (g.map(|c| c.derivative(1)).norm() - 1.0).abs(),
            Err(_) => f64::INFINITY,
        };
        if !(dev <= max_dev) {
            max_dev = dev;
            worst_u = u;
        }
    }
    UnitSpeedReport { max_dev, worst_u, ok: max_dev <= tol }
}

/// Largest departure of `(a, b, c)` from a right-handed orthonormal triple.
pub fn frame_defect(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    [
        (a.norm() - 1.0).abs(),
        (b.norm() - 1.0).abs(),
        (c.norm() - 1.0).abs(),
        a.dot(b).abs(),
        a.dot(c).abs(),
        b.dot(c).abs(),
        (triple(a, b, c) - 1.0).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

fn rows(t: Vec3, n1: Vec3, n2: Vec3, dt: Vec3, dn1: Vec3, dn2: Vec3, k: f64, tau: f64) -> [f64; 3] {
    [(dt - n1.scale(k)).norm(), (dn1 + t.scale(k) - n2.scale(tau)).norm(), (dn2 + n1.scale(tau)).norm()]
}

/// Frenet-Serret residuals `‖T'-κN1‖, ‖N1'+κT-τN2‖, ‖N2'+τN1‖` with jet derivatives.
pub fn frenet_residuals<C: Curve>(curve: &C, u: f64, eps_kappa: f64) -> Result<[f64; 3]> {
    let f = frenet_fields(curve, Jet::<2, f64>::variable(u), eps_kappa)?;
    let d = |v: Vec3<Jet<2, f64>>| v.map(|c| c.derivative(1));
    Ok(rows(f.t.re(), f.n1.re(), f.n2.re(), d(f.t), d(f.n1), d(f.n2), f.kappa.re(), f.tau.re()))
}

/// Same residuals with the frame differentiated by finite differences.
pub fn frenet_residuals_fd<C: Curve>(curve: &C, u: f64, eps_kappa: f64, cfg: &FdConfig) -> Result<[f64; 3]> {
    let f = frenet_fields(curve, u, eps_kappa)?;
    let dt = fd_derivs(|x| Ok(frenet_fields(curve, x, eps_kappa)?.t), u, cfg)?[1];
    let dn1 = fd_derivs(|x| Ok(frenet_fields(curve, x, eps_kappa)?.n1), u, cfg)?[1];
    let dn2 = fd_derivs(|x| Ok(frenet_fields(curve, x, eps_kappa)?.n2), u, cfg)?[1];
    Ok(rows(f.t, f.n1, f.n2, dt, dn1, dn2, f.kappa, f.tau))
}
