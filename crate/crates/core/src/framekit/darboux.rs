use alloc::string::String;
use core::fmt;

use super::frenet::{frame_defect, frenet_fields, FrenetApparatus};
use crate::error::{Error, OdeRow, ParseError, Result};
use crate::exprcurve::{fd_derivs, parse_expr_with, Curve, CurveDef, ExprTree, FdConfig, Interval, ParseContext};
use crate::jet::{Jet, Jet3, Scalar};
use crate::tol::Tolerances;
use crate::vec3::Vec3;

/// How the surface normal `U` of a Darboux frame was oriented.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalConvention {
    /// `U = (∂sX × ∂tX) / ‖∂sX × ∂tX‖` on the host patch, `Y = U × T`.
    HostParametrization,
    /// `T`, `Y`, `U` taken as supplied.
    Supplied,
    /// `Y = cosθ N1 - sinθ N2`, `U = sinθ N1 + cosθ N2`.
    FrenetRotation,
}

impl fmt::Display for NormalConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormalConvention::HostParametrization => "U = (X_s x X_t)/|X_s x X_t|, Y = U x T",
            NormalConvention::Supplied => "T, Y, U as supplied",
            NormalConvention::FrenetRotation => "Y = cos(theta) N1 - sin(theta) N2, U = sin(theta) N1 + cos(theta) N2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DarbouxApparatus {
    pub param: f64,
    pub gamma: Vec3,
    pub t: Vec3,
    pub y: Vec3,
    pub u: Vec3,
    pub kg: f64,
    pub kn: f64,
    pub taug: f64,
    pub kg_jet: Jet3,
    pub kn_jet: Jet3,
    pub taug_jet: Jet3,
    pub convention: NormalConvention,
}

impl DarbouxApparatus {
    /// `√(k_g² + k_n²)`, the curvature of the space curve.
    pub fn kappa(&self) -> f64 {
        libm::hypot(self.kg, self.kn)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DarbouxFields<S> {
    pub gamma: Vec3<S>,
    pub t: Vec3<S>,
    pub y: Vec3<S>,
    pub u: Vec3<S>,
    pub kg: S,
    pub kn: S,
    pub taug: S,
}

/// Curve `u ↦ X_S(s(u), t(u))` on a bivariate host patch.
#[derive(Clone, Debug, PartialEq)]
pub struct HostSurfaceDef {
    /// Expressions in `s`, `t`.
    pub components: [ExprTree; 3],
    pub s_of_u: ExprTree,
    pub t_of_u: ExprTree,
    pub domain: Interval,
    pub label: String,
}

impl HostSurfaceDef {
    /// `xyz` are parsed over `(s, t)`, `st` over `u`; both contexts share `constants`.
    pub fn parse(
        xyz: [&str; 3],
        st: [&str; 2],
        domain: Interval,
        label: impl Into<String>,
        constants: &[(&str, f64)],
    ) -> Result<Self, ParseError> {
        let mut surf = ParseContext::with_variables(&["s", "t"]);
        let mut curve = ParseContext::univariate();
        for (name, value) in constants {
            surf = surf.constant(name, *value);
            curve = curve.constant(name, *value);
        }
        Ok(HostSurfaceDef {
            components: [
                parse_expr_with(xyz[0], &surf)?,
                parse_expr_with(xyz[1], &surf)?,
                parse_expr_with(xyz[2], &surf)?,
            ],
            s_of_u: parse_expr_with(st[0], &curve)?,
            t_of_u: parse_expr_with(st[1], &curve)?,
            domain,
            label: label.into(),
        })
    }

    pub fn surface_point<S: Scalar>(&self, s: S, t: S) -> Result<Vec3<S>> {
        let a = [s, t];
        Ok(Vec3::new(self.components[0].eval(&a)?, self.components[1].eval(&a)?, self.components[2].eval(&a)?))
    }

    fn fields<S: Scalar>(&self, u: S, eps_reg: f64) -> Result<DarbouxFields<S>> {
        type D<S> = Jet<2, Jet<4, S>>;
        let uj = Jet::<4, S>::variable(u);
        let s = self.s_of_u.eval1(uj)?;
        let t = self.t_of_u.eval1(uj)?;
        let g = self.surface_point(s, t)?;
        let xs = self.surface_point(D::<S>::variable(s), D::<S>::constant(t))?.map(|c| c.derivative(1));
        let xt = self.surface_point(D::<S>::constant(s), D::<S>::variable(t))?.map(|c| c.derivative(1));
        let n = xs.cross(&xt);
        let w = n.norm();
        if !(w.re() > eps_reg) {
            return Err(Error::DegenerateHost { u: u.re() });
        }
        let nu = n * w.recip();
        let un = nu.map(|c| c.value());
        let dun = nu.map(|c| c.derivative(1));
        let tv = g.map(|c| c.derivative(1));
        let dt = g.map(|c| c.derivative(2));
        let y = un.cross(&tv);
        let dy = dun.cross(&tv) + un.cross(&dt);
        Ok(DarbouxFields {
            gamma: g.map(|c| c.value()),
            t: tv,
            y,
            u: un,
            kg: dt.dot(&y),
            kn: dt.dot(&un),
            taug: dy.dot(&un),
        })
    }
}

/// Darboux frame and curvatures given directly as closed forms in `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectFrameDef {
    pub spine: CurveDef,
    pub t: [ExprTree; 3],
    pub y: [ExprTree; 3],
    pub u: [ExprTree; 3],
    pub kg: ExprTree,
    pub kn: ExprTree,
    pub taug: ExprTree,
}

fn eval3<S: Scalar>(e: &[ExprTree; 3], u: S) -> Result<Vec3<S>> {
    Ok(Vec3::new(e[0].eval1(u)?, e[1].eval1(u)?, e[2].eval1(u)?))
}

impl DirectFrameDef {
    fn fields<S: Scalar>(&self, u: S) -> Result<DarbouxFields<S>> {
        Ok(DarbouxFields {
            gamma: self.spine.point(u)?,
            t: eval3(&self.t, u)?,
            y: eval3(&self.y, u)?,
            u: eval3(&self.u, u)?,
            kg: self.kg.eval1(u)?,
            kn: self.kn.eval1(u)?,
            taug: self.taug.eval1(u)?,
        })
    }

    /// Orthonormality, tangency and ODE rows, worst first; errors on the first violated one.
    fn validate(&self, u: f64, tol: f64) -> Result<()> {
        let f = self.fields(Jet::<2, f64>::variable(u))?;
        let r = |v: Vec3<Jet<2, f64>>| v.re();
        let defect = frame_defect(&r(f.t), &r(f.y), &r(f.u));
        if !(defect <= tol) {
            return Err(Error::FrameInconsistent { u, row: OdeRow::Orthonormality, residual: defect });
        }
        let g1 = self.spine.point(Jet::<2, f64>::variable(u))?.map(|c| c.derivative(1));
        let dev = (g1 - r(f.t)).norm();
        if !(dev <= tol) {
            return Err(Error::FrameInconsistent { u, row: OdeRow::SpineTangent, residual: dev });
        }
        check_rows(u, ode_rows(&f), tol)
    }
}

fn check_rows(u: f64, rows: [f64; 3], tol: f64) -> Result<()> {
    let names = [OdeRow::Tangent, OdeRow::Second, OdeRow::Third];
    for (row, residual) in names.into_iter().zip(rows) {
        if !(residual <= tol) {
            return Err(Error::FrameInconsistent { u, row, residual });
        }
    }
    Ok(())
}

fn ode_rows(f: &DarbouxFields<Jet<2, f64>>) -> [f64; 3] {
    let d = |v: Vec3<Jet<2, f64>>| v.map(|c| c.derivative(1));
    let (t, y, u) = (f.t.re(), f.y.re(), f.u.re());
    rows(t, y, u, d(f.t), d(f.y), d(f.u), f.kg.re(), f.kn.re(), f.taug.re())
}

#[allow(clippy::too_many_arguments)]
fn rows(t: Vec3, y: Vec3, u: Vec3, dt: Vec3, dy: Vec3, du: Vec3, kg: f64, kn: f64, tg: f64) -> [f64; 3] {
    [
        (dt - y.scale(kg) - u.scale(kn)).norm(),
        (dy + t.scale(kg) - u.scale(tg)).norm(),
        (du + t.scale(kn) + y.scale(tg)).norm(),
    ]
}

/// A Frenet frame rotated about `T` by the angle `theta(u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RotatedFrenetDef {
    pub curve: CurveDef,
    pub theta: ExprTree,
}

impl RotatedFrenetDef {
    fn fields<S: Scalar>(&self, u: S, eps_kappa: f64) -> Result<DarbouxFields<S>> {
        let th = self.theta.eval1(Jet::<2, S>::variable(u))?;
        let f = frenet_fields(&self.curve, u, eps_kappa)?;
        let (s, c) = th.value().sin_cos();
        Ok(DarbouxFields {
            gamma: f.gamma,
            t: f.t,
            y: f.n1 * c - f.n2 * s,
            u: f.n1 * s + f.n2 * c,
            kg: f.kappa * c,
            kn: f.kappa * s,
            taug: f.tau - th.derivative(1),
        })
    }
}

/// Where a Darboux apparatus comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum DarbouxSource {
    Host(HostSurfaceDef),
    Direct(DirectFrameDef),
    Rotated(RotatedFrenetDef),
}

impl DarbouxSource {
    pub fn convention(&self) -> NormalConvention {
        match self {
            DarbouxSource::Host(_) => NormalConvention::HostParametrization,
            DarbouxSource::Direct(_) => NormalConvention::Supplied,
            DarbouxSource::Rotated(_) => NormalConvention::FrenetRotation,
        }
    }

    /// Unvalidated frame fields at any scalar.
    pub fn fields<S: Scalar>(&self, u: S, tol: &Tolerances) -> Result<DarbouxFields<S>> {
        if !self.domain().contains(u.re()) {
            return Err(Error::Domain { op: "curve parameter", at: u.re() });
        }
        match self {
            DarbouxSource::Host(h) => h.fields(u, tol.eps_reg),
            DarbouxSource::Direct(d) => d.fields(u),
            DarbouxSource::Rotated(r) => r.fields(u, tol.eps_kappa),
        }
    }

    /// Apparatus at `u`, with the unit-speed check and, for supplied frames,
    /// full validation against the Darboux equations.
    pub fn apparatus(&self, u: f64, tol: &Tolerances) -> Result<DarbouxApparatus> {
        if let DarbouxSource::Direct(d) = self {
            d.validate(u, tol.frame_residual)?;
        }
        let f = self.fields(Jet3::variable(u), tol)?;
        let t = f.t.re();
        let speed = t.norm();
        if !((speed - 1.0).abs() <= tol.unit_speed) {
            return Err(Error::NotUnitSpeed { u, speed });
        }
        Ok(DarbouxApparatus {
            param: u,
            gamma: f.gamma.re(),
            t,
            y: f.y.re(),
            u: f.u.re(),
            kg: f.kg.re(),
            kn: f.kn.re(),
            taug: f.taug.re(),
            kg_jet: f.kg,
            kn_jet: f.kn,
            taug_jet: f.taug,
            convention: self.convention(),
        })
    }
}

impl Curve for DarbouxSource {
    fn domain(&self) -> Interval {
        match self {
            DarbouxSource::Host(h) => h.domain,
            DarbouxSource::Direct(d) => d.spine.domain,
            DarbouxSource::Rotated(r) => r.curve.domain,
        }
    }

    fn point<S: Scalar>(&self, u: S) -> Result<Vec3<S>> {
        match self {
            DarbouxSource::Host(h) => h.surface_point(h.s_of_u.eval1(u)?, h.t_of_u.eval1(u)?),
            DarbouxSource::Direct(d) => d.spine.point(u),
            DarbouxSource::Rotated(r) => r.curve.point(u),
        }
    }
}

pub fn darboux_from_host(host: &HostSurfaceDef, u: f64, tol: &Tolerances) -> Result<DarbouxApparatus> {
    DarbouxSource::Host(host.clone()).apparatus(u, tol)
}

/// Packages a supplied frame after checking it; [`Error::FrameInconsistent`]
/// names the first violated row.
pub fn darboux_direct(def: &DirectFrameDef, u: f64, tol: &Tolerances) -> Result<DarbouxApparatus> {
    DarbouxSource::Direct(def.clone()).apparatus(u, tol)
}

/// Darboux ODE residuals `‖T'-k_gY-k_nU‖, ‖Y'+k_gT-τ_gU‖, ‖U'+k_nT+τ_gY‖`, jet derivatives.
pub fn darboux_residuals(src: &DarbouxSource, u: f64, tol: &Tolerances) -> Result<[f64; 3]> {
    Ok(ode_rows(&src.fields(Jet::<2, f64>::variable(u), tol)?))
}

/// Same residuals with the frame differentiated by finite differences.
pub fn darboux_residuals_fd(src: &DarbouxSource, u: f64, tol: &Tolerances, cfg: &FdConfig) -> Result<[f64; 3]> {
    let f = src.fields(u, tol)?;
    let dt = fd_derivs(|x| Ok(src.fields(x, tol)?.t), u, cfg)?[1];
    let dy = fd_derivs(|x| Ok(src.fields(x, tol)?.y), u, cfg)?[1];
    let du = fd_derivs(|x| Ok(src.fields(x, tol)?.u), u, cfg)?[1];
    Ok(rows(f.t, f.y, f.u, dt, dy, du, f.kg, f.kn, f.taug))
}

/// Rotates a Frenet apparatus by a constant-rate angle; `theta''` is taken as 0
/// in the derivative jets.
pub fn frenet_to_darboux(f: &FrenetApparatus, theta: f64, theta_prime: f64) -> DarbouxApparatus {
    frenet_to_darboux_jet(f, Jet3::new(theta, theta_prime, 0.0, 0.0))
}

/// Rotation by an angle known with its derivatives.
pub fn frenet_to_darboux_jet(f: &FrenetApparatus, theta: Jet3) -> DarbouxApparatus {
    let (s, c) = theta.f().sin_cos();
    let (sj, cj) = theta.sin_cos();
    DarbouxApparatus {
        param: f.param,
        gamma: f.gamma,
        t: f.t,
        y: f.n1.scale(c) - f.n2.scale(s),
        u: f.n1.scale(s) + f.n2.scale(c),
        kg: f.kappa * c,
        kn: f.kappa * s,
        taug: f.tau - theta.d1(),
        kg_jet: f.kappa_jet * cj,
        kn_jet: f.kappa_jet * sj,
        taug_jet: f.tau_jet - theta.differentiate(),
        convention: NormalConvention::FrenetRotation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framekit::frenet_at;

    fn helix() -> CurveDef {
        CurveDef::parse(
            ["cos(u/sqrt(2))", "sin(u/sqrt(2))", "u/sqrt(2)"],
            Interval::new(-10.0, 10.0),
            "helix",
            &ParseContext::univariate(),
        )
        .unwrap()
    }

    #[test]
    fn rotation_identity_and_quarter_turns() {
        let tol = Tolerances::default();
        let f = frenet_at(&helix(), 0.3, &tol).unwrap();
        let d = frenet_to_darboux(&f, 0.0, 0.0);
        assert_eq!((d.y, d.u, d.kg, d.kn, d.taug), (f.n1, f.n2, f.kappa, 0.0, f.tau));
        let d = frenet_to_darboux(&f, core::f64::consts::FRAC_PI_4, 0.0);
        let k = 1.0 / (2.0 * core::f64::consts::SQRT_2);
        assert!((d.kg - k).abs() < 1e-12 && (d.kn - k).abs() < 1e-12);
        assert!((d.taug - 0.5).abs() < 1e-12);
        assert!((d.kappa() - f.kappa).abs() < 1e-12);
        assert!(frame_defect(&d.t, &d.y, &d.u) < 1e-12);
        let d = frenet_to_darboux(&f, core::f64::consts::FRAC_PI_2, 0.0);
        assert!(d.kg.abs() < 1e-15 && (d.kn - f.kappa).abs() < 1e-15);
    }

    #[test]
    fn rotated_source_satisfies_the_darboux_equations() {
        let ctx = ParseContext::univariate();
        let src = DarbouxSource::Rotated(RotatedFrenetDef {
            curve: helix(),
            theta: parse_expr_with("0.3*u + sin(u)", &ctx).unwrap(),
        });
        let tol = Tolerances::default();
        let r = darboux_residuals(&src, 1.1, &tol).unwrap();
        assert!(r.iter().all(|x| *x < 1e-13), "{r:?}");
        let a = src.apparatus(1.1, &tol).unwrap();
        assert!((a.taug - (0.5 - 0.3 - libm::cos(1.1))).abs() < 1e-14);
    }
}
