//! Tubes about a spine in the Frenet or Darboux frame, their focal sheets,
//! and the checks that tie the closed forms to the generic surface engine.

mod classify;
mod closed;
mod quad;
mod spec;
mod spine;
mod verify;

pub use classify::{classify_focal_curves, darboux_geodesic_conditions, ClassificationReport, SideConditions};
pub use closed::{
    darboux_focal_forms, darboux_focal_jet, darboux_focal_w, darboux_tube_forms, darboux_tube_jet, frenet_focal_forms,
    frenet_focal_jet, frenet_focal_w, frenet_tube_forms, frenet_tube_jet, BScalar, ClosedForms,
};
pub use quad::integrate;
pub use spec::{FocalSurface, FrameAt, FrameMode, SpineSource, TubeSpec, TubeSurface, VALIDATION_SAMPLES};
pub use spine::{spine_from_curvature, IntegratedSpine, Spine, SpineFamilyParams};
pub use verify::*;

use crate::error::Result;
use crate::framekit::{DarbouxSource, RotatedFrenetDef};
use crate::surfkit::SurfaceJet;
use crate::tol::Tolerances;

fn frenet_frame(spine: &Spine, u: f64, tol: &Tolerances) -> Result<FrameAt> {
    let spec = TubeSpec { source: SpineSource::Frenet(spine.clone()), r: 1.0, tol: *tol };
    spec.frame_at(u)
}

/// Closed-form Frenet tube point; requires a planar spine with `κ(u) > εκ`.
pub fn tube_point_frenet(spine: &Spine, r: f64, u: f64, v: f64, tol: &Tolerances) -> Result<SurfaceJet> {
    match frenet_frame(spine, u, tol)? {
        FrameAt::Frenet(a) => Ok(frenet_tube_jet(&a, r, v)),
        FrameAt::Darboux(_) => unreachable!(),
    }
}

pub fn tube_forms_frenet(spine: &Spine, r: f64, u: f64, v: f64, tol: &Tolerances) -> Result<ClosedForms> {
    match frenet_frame(spine, u, tol)? {
        FrameAt::Frenet(a) => frenet_tube_forms(&a, r, v, tol),
        FrameAt::Darboux(_) => unreachable!(),
    }
}

pub fn focal_point_frenet(spine: &Spine, u: f64, v: f64, tol: &Tolerances) -> Result<SurfaceJet> {
    match frenet_frame(spine, u, tol)? {
        FrameAt::Frenet(a) => frenet_focal_jet(&a, v, tol),
        FrameAt::Darboux(_) => unreachable!(),
    }
}

pub fn focal_forms_frenet(spine: &Spine, u: f64, v: f64, tol: &Tolerances) -> Result<ClosedForms> {
    match frenet_frame(spine, u, tol)? {
        FrameAt::Frenet(a) => frenet_focal_forms(&a, v, tol),
        FrameAt::Darboux(_) => unreachable!(),
    }
}

pub fn tube_point_darboux(src: &DarbouxSource, r: f64, u: f64, v: f64, tol: &Tolerances) -> Result<SurfaceJet> {
    Ok(darboux_tube_jet(&src.apparatus(u, tol)?, r, v))
}

pub fn tube_forms_darboux(src: &DarbouxSource, r: f64, u: f64, v: f64, tol: &Tolerances) -> Result<ClosedForms> {
    darboux_tube_forms(&src.apparatus(u, tol)?, r, v, tol)
}

pub fn focal_point_darboux(src: &DarbouxSource, u: f64, v: f64, tol: &Tolerances) -> Result<SurfaceJet> {
    darboux_focal_jet(&src.apparatus(u, tol)?, v, tol)
}

pub fn focal_forms_darboux(src: &DarbouxSource, u: f64, v: f64, tol: &Tolerances) -> Result<ClosedForms> {
    darboux_focal_forms(&src.apparatus(u, tol)?, v, tol)
}

/// The Darboux frame a planar spine carries as a curve on its own plane
/// (`θ ≡ 0`), for cross-checking the two branches.
pub fn planar_darboux_source(spine: &crate::exprcurve::CurveDef) -> DarbouxSource {
    DarbouxSource::Rotated(RotatedFrenetDef {
        curve: spine.clone(),
        theta: crate::exprcurve::parse_expr("0").expect("constant"),
    })
}
