#![allow(clippy::approx_constant)]

mod common;

use common::*;
use tubefocal_core::exprcurve::{Curve, Interval};
use tubefocal_core::framekit::*;
use tubefocal_core::{triple, Error, OdeRow, Tolerances, Vec3};

fn tol() -> Tolerances {
    Tolerances::default()
}

#[track_caller]
fn assert_right_handed(a: Vec3, b: Vec3, c: Vec3) {
    assert!(frame_defect(&a, &b, &c) <= 1e-9);
    assert_close(triple(&a, &b, &c), 1.0, 1e-9);
}

#[test]
fn helix_curvature_and_torsion() {
    let f = frenet_at(&helix(), 0.0, &tol()).unwrap();
    assert_close(f.kappa, 0.5, 1e-12);
    assert_close(f.tau, 0.5, 1e-12);
    assert_right_handed(f.t, f.n1, f.n2);
    let fd = frenet_residuals_fd(&helix(), 0.0, 1e-8, &tol().fd).unwrap();
    assert!(fd.iter().all(|r| *r <= 1e-6), "{fd:?}");
}

#[test]
fn spiral_curvature() {
    for u in [0.0, 0.5, 2.0] {
        let f = frenet_at(&spiral(), u, &tol()).unwrap();
        assert_close(f.kappa, 1.0 / (u + SQRT2), 1e-12);
        assert_close(f.tau, 0.0, 1e-12);
        assert_close(f.kappa_jet.d1(), -1.0 / (u + SQRT2).powi(2), 1e-12);
        assert_close(f.kappa_jet.d2(), 2.0 / (u + SQRT2).powi(3), 1e-12);
        assert_right_handed(f.t, f.n1, f.n2);
    }
    assert_close(frenet_at(&spiral(), 0.0, &tol()).unwrap().kappa, 0.70710678, 1e-8);
}

#[test]
fn circle_of_radius_two() {
    for u in [-3.0, 0.0, 1.0, 7.5] {
        let f = frenet_at(&circle(2.0), u, &tol()).unwrap();
        assert_close(f.kappa, 0.5, 1e-12);
        assert_close(f.tau, 0.0, 1e-12);
        assert!((f.n2 - Vec3::new(0.0, 0.0, 1.0)).norm() <= 1e-12);
    }
}

#[test]
fn planar_curves_have_constant_binormal() {
    let c = spiral();
    let n2 = frenet_at(&c, 0.1, &tol()).unwrap().n2;
    for u in Interval::new(0.0, 5.0).samples(20) {
        let f = frenet_at(&c, u, &tol()).unwrap();
        assert!((f.n2 - n2).norm() <= 1e-12);
        assert!(f.tau.abs() <= 1e-12);
    }
}

#[test]
fn frenet_errors() {
    let line = curve(["u", "0", "0"], -1.0, 1.0, "line");
    assert!(matches!(frenet_at(&line, 0.2, &tol()), Err(Error::VanishingCurvature { .. })));
    let fast = curve(["2*u", "u^2", "0"], -1.0, 1.0, "fast");
    assert!(matches!(frenet_at(&fast, 0.0, &tol()), Err(Error::NotUnitSpeed { .. })));
}

#[test]
fn unit_speed_reports() {
    let line = curve(["u", "0", "0"], -1.0, 1.0, "line");
    let r = check_unit_speed(&line, 50, 1e-6);
    assert!(r.ok && r.max_dev == 0.0);
    let r = check_unit_speed(&helix(), 200, 1e-6);
    assert!(r.ok && r.max_dev <= 1e-12, "{}", r.max_dev);
    let r = check_unit_speed(&curve(["2*u", "0", "0"], -1.0, 1.0, "fast"), 10, 1e-6);
    assert!(!r.ok);
    assert_close(r.max_dev, 1.0, 1e-15);
}

#[test]
fn frame_equations_hold_along_both_examples() {
    for u in Interval::new(0.5, 3.0).samples(200) {
        let j = frenet_residuals(&spiral(), u, 1e-8).unwrap();
        let f = frenet_residuals_fd(&spiral(), u, 1e-8, &tol().fd).unwrap();
        assert!(j.iter().all(|r| *r <= 1e-6) && f.iter().all(|r| *r <= 1e-4), "{u}: {j:?} {f:?}");
    }
    let src = example2_source();
    for u in Interval::new(0.0, 3.0).samples(200) {
        let j = darboux_residuals(&src, u, &tol()).unwrap();
        let f = darboux_residuals_fd(&src, u, &tol(), &tol().fd).unwrap();
        assert!(j.iter().all(|r| *r <= 1e-6) && f.iter().all(|r| *r <= 1e-4), "{u}: {j:?} {f:?}");
    }
}

fn sphere_latitude(phi: &str) -> HostSurfaceDef {
    HostSurfaceDef::parse(
        ["sin(s)*cos(t)", "sin(s)*sin(t)", "cos(s)"],
        ["phi", "u/sin(phi)"],
        Interval::new(-5.0, 5.0),
        "sphere",
        &[("phi", phi.parse::<f64>().unwrap())],
    )
    .unwrap()
}

#[test]
fn sphere_equator_is_a_geodesic() {
    let host = sphere_latitude(&core::f64::consts::FRAC_PI_2.to_string());
    for u in [0.0, 1.0, 2.5] {
        let a = darboux_from_host(&host, u, &tol()).unwrap();
        assert_close(a.kg, 0.0, 1e-12);
        assert_close(a.kn.abs(), 1.0, 1e-12);
        assert_close(a.taug, 0.0, 1e-12);
        assert_right_handed(a.t, a.y, a.u);
        assert!((a.y - a.u.cross(&a.t)).norm() <= 1e-12);
    }
}

#[test]
fn sphere_latitude_circle() {
    let phi = core::f64::consts::FRAC_PI_3;
    let host = sphere_latitude(&phi.to_string());
    let src = DarbouxSource::Host(host.clone());
    for u in [0.0, 0.8, 3.0] {
        let a = darboux_from_host(&host, u, &tol()).unwrap();
        assert_close(a.kg.abs(), 1.0 / phi.tan(), 1e-12);
        assert_close(a.kn.abs(), 1.0, 1e-12);
        assert_close(a.taug, 0.0, 1e-12);
        // the same curvatures must satisfy the frame equations under differencing
        let fd = darboux_residuals_fd(&src, u, &tol(), &tol().fd).unwrap();
        assert!(fd.iter().all(|r| *r <= 1e-6), "{fd:?}");
        assert_close(a.kappa(), 1.0 / phi.sin(), 1e-12);
    }
}

#[test]
fn helix_on_the_cylinder_is_a_geodesic() {
    let host = HostSurfaceDef::parse(
        ["cos(s)", "sin(s)", "t"],
        ["u/sqrt(2)", "u/sqrt(2)"],
        Interval::new(-5.0, 5.0),
        "cylinder",
        &[],
    )
    .unwrap();
    let a = darboux_from_host(&host, 0.4, &tol()).unwrap();
    assert_close(a.kg, 0.0, 1e-12);
    assert_close(a.kn.abs(), 0.5, 1e-12);
    assert_close(a.taug.abs(), 0.5, 1e-12);
    assert_eq!(a.convention, NormalConvention::HostParametrization);
}

#[test]
fn ruled_host_reproduces_the_rotated_helix_frame() {
    // X(s, t) = γ(s) + t·Y(s), with Y the frame of `helix_frame`
    let c = "cos(s/sqrt(2))";
    let s = "sin(s/sqrt(2))";
    let host = HostSurfaceDef::parse(
        [
            &format!("{c} + t*(-{c}-{s}/sqrt(2))/sqrt(2)"),
            &format!("{s} + t*(-{s}+{c}/sqrt(2))/sqrt(2)"),
            "s/sqrt(2) - t/2",
        ],
        ["u", "0"],
        Interval::new(-5.0, 5.0),
        "ruled",
        &[],
    )
    .unwrap();
    let k = 1.0 / (2.0 * SQRT2);
    for u in [0.0, 1.0, 2.0] {
        let a = darboux_from_host(&host, u, &tol()).unwrap();
        let b = darboux_direct(&helix_frame("1/(2*sqrt(2))", "1/(2*sqrt(2))", "1/2"), u, &tol()).unwrap();
        assert_close(a.kg.abs(), k, 1e-12);
        assert_close(a.kn.abs(), k, 1e-12);
        assert_close(a.taug.abs(), 0.5, 1e-12);
        assert!((a.u - b.u).norm() <= 1e-12 || (a.u + b.u).norm() <= 1e-12);
    }
}

#[test]
fn supplied_frame_is_validated() {
    let a = darboux_direct(&helix_frame("1/(2*sqrt(2))", "1/(2*sqrt(2))", "1/2"), 0.3, &tol()).unwrap();
    assert_close(a.kg, 1.0 / (2.0 * SQRT2), 1e-15);
    assert_eq!(a.convention, NormalConvention::Supplied);
    let r = darboux_residuals(&example2_source(), 0.3, &tol()).unwrap();
    assert!(r.iter().all(|x| *x <= 1e-9), "{r:?}");

    match darboux_direct(&helix_frame("1/sqrt(2)", "1/(2*sqrt(2))", "1/2"), 0.3, &tol()) {
        Err(Error::FrameInconsistent { row, .. }) => assert_eq!(row, OdeRow::Tangent),
        other => panic!("{other:?}"),
    }
    match darboux_direct(&helix_frame("1/(2*sqrt(2))", "1/(2*sqrt(2))", "1"), 0.3, &tol()) {
        Err(Error::FrameInconsistent { row, .. }) => assert_eq!(row, OdeRow::Second),
        other => panic!("{other:?}"),
    }

    let constant = DirectFrameDef {
        spine: curve(["u", "0", "0"], -1.0, 1.0, "line"),
        t: [expr("1"), expr("0"), expr("0")],
        y: [expr("0"), expr("1"), expr("0")],
        u: [expr("0"), expr("0"), expr("1")],
        kg: expr("0"),
        kn: expr("0"),
        taug: expr("0"),
    };
    let a = darboux_direct(&constant, 0.5, &tol()).unwrap();
    assert_eq!((a.kg, a.kn, a.taug), (0.0, 0.0, 0.0));
}

/// The helix frame with `Y` and `U` replaced by this
/// crate's `U` and `-Y`, which flips the sign of the normal curvature.
fn swapped_frame(kn: &str) -> DirectFrameDef {
    let c = "cos(u/sqrt(2))";
    let s = "sin(u/sqrt(2))";
    let mut f = helix_frame("1/(2*sqrt(2))", kn, "1/2");
    f.y = [expr(&format!("(-{c}+{s}/sqrt(2))/sqrt(2)")), expr(&format!("(-{s}-{c}/sqrt(2))/sqrt(2)")), expr("1/2")];
    f.u = [expr(&format!("({c}+{s}/sqrt(2))/sqrt(2)")), expr(&format!("({s}-{c}/sqrt(2))/sqrt(2)")), expr("1/2")];
    f
}

#[test]
fn swapped_helix_frame_needs_negative_normal_curvature() {
    assert!(matches!(
        darboux_direct(&swapped_frame("1/(2*sqrt(2))"), 0.7, &tol()),
        Err(Error::FrameInconsistent { row: OdeRow::Tangent, .. })
    ));
    let a = darboux_direct(&swapped_frame("-1/(2*sqrt(2))"), 0.7, &tol()).unwrap();
    assert_close(a.taug, 0.5, 1e-15);
    let fd =
        darboux_residuals_fd(&DarbouxSource::Direct(swapped_frame("-1/(2*sqrt(2))")), 0.7, &tol(), &tol().fd).unwrap();
    assert!(fd.iter().all(|r| *r <= 1e-9), "{fd:?}");
}

#[test]
fn rotation_from_frenet() {
    let f = frenet_at(&helix(), 0.0, &tol()).unwrap();
    let d = frenet_to_darboux(&f, 0.0, 0.0);
    assert_eq!((d.y, d.u), (f.n1, f.n2));
    assert_eq!((d.kg, d.kn, d.taug), (f.kappa, 0.0, f.tau));

    let q = core::f64::consts::FRAC_PI_4;
    let d = frenet_to_darboux(&f, q, 0.0);
    let k = 1.0 / (2.0 * SQRT2);
    assert_close(d.kg, k, 1e-12);
    assert_close(d.kn, k, 1e-12);
    assert_close(d.taug, 0.5, 1e-12);
    assert_close(d.kappa(), f.kappa, 1e-12);
    assert_right_handed(d.t, d.y, d.u);
    assert!((d.y - d.u.cross(&d.t)).norm() <= 1e-12);

    let d = frenet_to_darboux(&f, core::f64::consts::FRAC_PI_2, 0.3);
    assert_close(d.kg, 0.0, 1e-12);
    assert_close(d.kn, f.kappa, 1e-12);
    assert_close(d.taug, f.tau - 0.3, 1e-12);

    // the rotated helix frame is the supplied frame of the example
    let e = example2_source().apparatus(0.0, &tol()).unwrap();
    let d = frenet_to_darboux(&f, q, 0.0);
    assert!((d.y - e.y).norm() <= 1e-12 && (d.u - e.u).norm() <= 1e-12);
}

#[test]
fn rotated_source_matches_pointwise_rotation() {
    let src = DarbouxSource::Rotated(RotatedFrenetDef { curve: helix(), theta: expr("u/3") });
    for u in [0.0, 1.0, -2.0] {
        let a = src.apparatus(u, &tol()).unwrap();
        let f = frenet_at(&helix(), u, &tol()).unwrap();
        let b = frenet_to_darboux(&f, u / 3.0, 1.0 / 3.0);
        assert_close(a.kg, b.kg, 1e-12);
        assert_close(a.kn, b.kn, 1e-12);
        assert_close(a.taug, b.taug, 1e-12);
        let r = darboux_residuals(&src, u, &tol()).unwrap();
        assert!(r.iter().all(|x| *x <= 1e-12), "{r:?}");
    }
    assert!(src.point(0.0).is_ok());
}
