use alloc::string::String;

use super::closed::{
    darboux_focal_forms, darboux_focal_jet, darboux_tube_forms, darboux_tube_jet, frenet_focal_forms, frenet_focal_jet,
    frenet_tube_forms, frenet_tube_jet, ClosedForms,
};
use super::spine::Spine;
use crate::error::{Error, Result};
use crate::exprcurve::{Curve, Interval};
use crate::framekit::{
    check_unit_speed, frenet_at, frenet_fields, DarbouxApparatus, DarbouxSource, FrenetApparatus, NormalConvention,
};
use crate::jet::Scalar;
use crate::surfkit::{Surface, SurfaceJet};
use crate::tol::Tolerances;
use crate::vec3::Vec3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameMode {
    Frenet,
    Darboux,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpineSource {
    Frenet(Spine),
    Darboux(DarbouxSource),
}

/// Number of domain samples used to validate a spine up front.
pub const VALIDATION_SAMPLES: usize = 64;

/// A tube of radius `r` about a spine, with the frame it is swept in.
#[derive(Clone, Debug, PartialEq)]
pub struct TubeSpec {
    pub source: SpineSource,
    pub r: f64,
    pub tol: Tolerances,
}

/// Moving frame at one parameter value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FrameAt {
    Frenet(FrenetApparatus),
    Darboux(DarbouxApparatus),
}

impl FrameAt {
    pub fn gamma(&self) -> Vec3 {
        match self {
            FrameAt::Frenet(a) => a.gamma,
            FrameAt::Darboux(a) => a.gamma,
        }
    }

    pub fn param(&self) -> f64 {
        match self {
            FrameAt::Frenet(a) => a.param,
            FrameAt::Darboux(a) => a.param,
        }
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidInput(alloc::format!("tube radius must be positive, got {r}")));
    }
    Ok(())
}

fn check_speed<C: Curve>(c: &C, tol: &Tolerances) -> Result<()> {
    let rep = check_unit_speed(c, VALIDATION_SAMPLES, tol.unit_speed);
    if !rep.ok {
        return Err(Error::NotUnitSpeed { u: rep.worst_u, speed: 1.0 + rep.max_dev });
    }
    Ok(())
}

/// Planarity at one point: `|γ₃| ≤ tol` and `|τ| ≤ tol`.
fn check_planar(a: &FrenetApparatus, tol: f64) -> Result<()> {
    let deviation = a.gamma.z.abs().max(a.tau.abs());
    if !(deviation <= tol) {
        return Err(Error::NotPlanar { u: a.param, deviation });
    }
    Ok(())
}

impl TubeSpec {
    /// Frenet-frame tube. The spine must be unit speed and lie in `z = 0`
    /// with zero torsion (checked at 64 samples).
    pub fn frenet(spine: Spine, r: f64, tol: Tolerances) -> Result<Self> {
        check_radius(r)?;
        check_speed(&spine, &tol)?;
        for u in spine.domain().samples(VALIDATION_SAMPLES) {
            let z = spine.point(u)?.z;
            if !(z.abs() <= tol.planar) {
                return Err(Error::NotPlanar { u, deviation: z.abs() });
            }
            match frenet_at(&spine, u, &tol) {
                Ok(a) => check_planar(&a, tol.planar)?,
                Err(Error::VanishingCurvature { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(TubeSpec { source: SpineSource::Frenet(spine), r, tol })
    }

    /// Darboux-frame tube. Supplied frames are validated at 64 samples.
    pub fn darboux(src: DarbouxSource, r: f64, tol: Tolerances) -> Result<Self> {
        check_radius(r)?;
        check_speed(&src, &tol)?;
        if let DarbouxSource::Direct(_) = src {
            for u in src.domain().samples(VALIDATION_SAMPLES) {
                src.apparatus(u, &tol)?;
            }
        }
        Ok(TubeSpec { source: SpineSource::Darboux(src), r, tol })
    }

    pub fn mode(&self) -> FrameMode {
        match self.source {
            SpineSource::Frenet(_) => FrameMode::Frenet,
            SpineSource::Darboux(_) => FrameMode::Darboux,
        }
    }

    pub fn domain(&self) -> Interval {
        match &self.source {
            SpineSource::Frenet(s) => s.domain(),
            SpineSource::Darboux(d) => d.domain(),
        }
    }

    /// Orientation convention of the Darboux normal, if any.
    pub fn convention(&self) -> Option<NormalConvention> {
        match &self.source {
            SpineSource::Frenet(_) => None,
            SpineSource::Darboux(d) => Some(d.convention()),
        }
    }

    pub fn describe(&self) -> String {
        match &self.source {
            SpineSource::Frenet(s) => super::spine::spine_label(s),
            SpineSource::Darboux(DarbouxSource::Host(h)) => h.label.clone(),
            SpineSource::Darboux(DarbouxSource::Direct(d)) => d.spine.label.clone(),
            SpineSource::Darboux(DarbouxSource::Rotated(r)) => r.curve.label.clone(),
        }
    }

    pub fn frame_at(&self, u: f64) -> Result<FrameAt> {
        match &self.source {
            SpineSource::Frenet(s) => {
                let a = frenet_at(s, u, &self.tol)?;
                check_planar(&a, self.tol.planar)?;
                Ok(FrameAt::Frenet(a))
            }
            SpineSource::Darboux(d) => Ok(FrameAt::Darboux(d.apparatus(u, &self.tol)?)),
        }
    }

    /// Closed-form tube point and partials.
    pub fn tube_jet(&self, frame: &FrameAt, v: f64) -> SurfaceJet {
        match frame {
            FrameAt::Frenet(a) => frenet_tube_jet(a, self.r, v),
            FrameAt::Darboux(a) => darboux_tube_jet(a, self.r, v),
        }
    }

    pub fn tube_forms(&self, frame: &FrameAt, v: f64) -> Result<ClosedForms> {
        match frame {
            FrameAt::Frenet(a) => frenet_tube_forms(a, self.r, v, &self.tol),
            FrameAt::Darboux(a) => darboux_tube_forms(a, self.r, v, &self.tol),
        }
    }

    pub fn focal_jet(&self, frame: &FrameAt, v: f64) -> Result<SurfaceJet> {
        match frame {
            FrameAt::Frenet(a) => frenet_focal_jet(a, v, &self.tol),
            FrameAt::Darboux(a) => darboux_focal_jet(a, v, &self.tol),
        }
    }

    pub fn focal_forms(&self, frame: &FrameAt, v: f64) -> Result<ClosedForms> {
        match frame {
            FrameAt::Frenet(a) => frenet_focal_forms(a, v, &self.tol),
            FrameAt::Darboux(a) => darboux_focal_forms(a, v, &self.tol),
        }
    }

    /// The tube as a plain map, differentiated only by jets or differences.
    pub fn tube_surface(&self) -> TubeSurface<'_> {
        TubeSurface(self)
    }

    pub fn focal_surface(&self) -> FocalSurface<'_> {
        FocalSurface(self)
    }
}

/// Frame vectors and the two curvatures entering the focal distance, at any scalar.
struct Sweep<S> {
    gamma: Vec3<S>,
    a: Vec3<S>,
    b: Vec3<S>,
    ka: S,
    kb: S,
}

fn sweep<S: Scalar>(spec: &TubeSpec, u: S) -> Result<Sweep<S>> {
    match &spec.source {
        SpineSource::Frenet(s) => {
            let f = frenet_fields(s, u, spec.tol.eps_kappa)?;
            Ok(Sweep { gamma: f.gamma, a: f.n1, b: f.n2, ka: f.kappa, kb: S::zero() })
        }
        SpineSource::Darboux(d) => {
            let f = d.fields(u, &spec.tol)?;
            Ok(Sweep { gamma: f.gamma, a: f.y, b: f.u, ka: f.kg, kb: f.kn })
        }
    }
}

/// `γ + r(cos v A + sin v B)` with `(A, B) = (N1, N2)` or `(Y, U)`.
#[derive(Clone, Copy, Debug)]
pub struct TubeSurface<'a>(pub &'a TubeSpec);

impl Surface for TubeSurface<'_> {
    fn point<S: Scalar>(&self, u: S, v: S) -> Result<Vec3<S>> {
        let w = sweep(self.0, u)?;
        let (s, c) = v.sin_cos();
        Ok(w.gamma + (w.a * c + w.b * s).scale(self.0.r))
    }
}

/// `γ + (cos v A + sin v B) / (k_A cos v + k_B sin v)`; for Frenet `k_A = κ`, `k_B = 0`.
#[derive(Clone, Copy, Debug)]
pub struct FocalSurface<'a>(pub &'a TubeSpec);

impl Surface for FocalSurface<'_> {
    fn point<S: Scalar>(&self, u: S, v: S) -> Result<Vec3<S>> {
        let w = sweep(self.0, u)?;
        let (s, c) = v.sin_cos();
        let b = w.ka * c + w.kb * s;
        if b.re() == 0.0 {
            return Err(Error::Domain { op: "focal distance", at: v.re() });
        }
        Ok(w.gamma + (w.a * c + w.b * s) * b.recip())
    }
}
