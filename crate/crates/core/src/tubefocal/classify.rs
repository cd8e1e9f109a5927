use super::closed::BScalar;
use super::spec::{FrameAt, TubeSpec};
use crate::error::Result;
use crate::framekit::DarbouxApparatus;
#[allow(unused_imports)]
use crate::jet::Scalar;
use crate::surfkit::{classify_point, fundamental_forms, surface_jet, ParamDirection};

/// Closed-form side conditions for the parameter curves of the focal sheet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SideConditions {
    Frenet {
        /// `-κ''κ + 2κ'²`; zero iff the u-curves are geodesics.
        u_geodesic: f64,
        /// `‖X*_vv × N*‖ = 2|sin v| / (κ |cos v|³)`; zero iff `sin v = 0`.
        v_geodesic: f64,
    },
    Darboux {
        /// `-2τ_g(b_u τ_g' + b τ_g'') + 4b τ_g'² - 4b τ_g⁴`.
        combined: f64,
        /// `b(-b_uu b + 2b_u² - b²τ_g²)`, the `Y`-part of `X*_uu × N*`.
        y_part: f64,
        /// `b²(2b_u τ_g - b τ_g')`, the `U`-part.
        u_part: f64,
        /// `b(b_vv b - 2b_v² + b²)` and `b_v`: both must vanish for a geodesic
        /// v-curve, which forces `b = 0`.
        v_system: [f64; 2],
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassificationReport {
    /// `|⟨X*_uu, N*⟩|` from the generic engine.
    pub u_asymptotic: f64,
    /// `|⟨X*_vv, N*⟩|`, expected 0.
    pub v_asymptotic: f64,
    /// `‖X*_uu × N*‖`.
    pub u_geodesic: f64,
    /// `‖X*_vv × N*‖`.
    pub v_geodesic: f64,
    pub side: SideConditions,
}

/// The three u-geodesic residuals `[combined, y_part, u_part]` at `(u, v)`.
pub fn darboux_geodesic_conditions(a: &DarbouxApparatus, v: f64) -> [f64; 3] {
    let BScalar { b, b_u, b_uu, .. } = BScalar::new(a, v);
    let (t, t1, t2) = (a.taug_jet.f(), a.taug_jet.d1(), a.taug_jet.d2());
    [
        -2.0 * t * (b_u * t1 + b * t2) + 4.0 * b * t1 * t1 - 4.0 * b * t.powi(4),
        b * (-b_uu * b + 2.0 * b_u * b_u - b * b * t * t),
        b * b * (2.0 * b_u * t - b * t1),
    ]
}

pub(crate) fn side_conditions(frame: &FrameAt, v: f64) -> SideConditions {
    match frame {
        FrameAt::Frenet(a) => {
            let (k, k1, k2) = (a.kappa_jet.f(), a.kappa_jet.d1(), a.kappa_jet.d2());
            let c = libm::cos(v);
            SideConditions::Frenet {
                u_geodesic: -k2 * k + 2.0 * k1 * k1,
                v_geodesic: 2.0 * libm::sin(v).abs() / (k * (c * c * c).abs()),
            }
        }
        FrameAt::Darboux(a) => {
            let [combined, y_part, u_part] = darboux_geodesic_conditions(a, v);
            let bs = BScalar::new(a, v);
            SideConditions::Darboux {
                combined,
                y_part,
                u_part,
                v_system: [bs.b * (bs.b_vv * bs.b - 2.0 * bs.b_v * bs.b_v + bs.b * bs.b), bs.b_v],
            }
        }
    }
}

/// Asymptotic and geodesic residuals of the focal parameter curves at a regular point.
pub fn classify_focal_curves(spec: &TubeSpec, u: f64, v: f64) -> Result<ClassificationReport> {
    let frame = spec.frame_at(u)?;
    spec.focal_forms(&frame, v)?;
    let j = surface_jet(&spec.focal_surface(), u, v)?;
    let ff = fundamental_forms(&j, spec.tol.eps_reg)?;
    let cu = classify_point(&j, &ff, ParamDirection::U);
    let cv = classify_point(&j, &ff, ParamDirection::V);
    Ok(ClassificationReport {
        u_asymptotic: cu.normal_component.abs(),
        v_asymptotic: cv.normal_component.abs(),
        u_geodesic: cu.geodesic_residual,
        v_geodesic: cv.geodesic_residual,
        side: side_conditions(&frame, v),
    })
}
