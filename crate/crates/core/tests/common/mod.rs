#![allow(dead_code)]

use tubefocal_core::exprcurve::{parse_expr, CurveDef, ExprTree, Interval};
use tubefocal_core::framekit::{DarbouxSource, DirectFrameDef};
use tubefocal_core::tubefocal::{GridSpec, Spine, TubeSpec};
use tubefocal_core::Tolerances;

pub const SQRT2: f64 = core::f64::consts::SQRT_2;

pub fn expr(s: &str) -> ExprTree {
    parse_expr(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn curve(xyz: [&str; 3], lo: f64, hi: f64, label: &str) -> CurveDef {
    CurveDef::new([expr(xyz[0]), expr(xyz[1]), expr(xyz[2])], Interval::new(lo, hi), label)
}

/// Logarithmic spiral with `κ = 1/(u + √2)`.
pub fn spiral() -> CurveDef {
    curve(["(u/sqrt(2)+1)*cos(ln(u/sqrt(2)+1))", "(u/sqrt(2)+1)*sin(ln(u/sqrt(2)+1))", "0"], -1.0, 10.0, "spiral")
}

pub fn helix() -> CurveDef {
    curve(["cos(u/sqrt(2))", "sin(u/sqrt(2))", "u/sqrt(2)"], -10.0, 10.0, "helix")
}

pub fn circle(radius: f64) -> CurveDef {
    let x = format!("{radius}*cos(u/{radius})");
    let y = format!("{radius}*sin(u/{radius})");
    curve([&x, &y, "0"], -20.0, 20.0, "circle")
}

/// Helix frame rotated by π/4 about `T`, with caller-chosen curvatures.
pub fn helix_frame(kg: &str, kn: &str, taug: &str) -> DirectFrameDef {
    let c = "cos(u/sqrt(2))";
    let s = "sin(u/sqrt(2))";
    let v = |a: String, b: String, z: &str| [expr(&a), expr(&b), expr(z)];
    DirectFrameDef {
        spine: helix(),
        t: v(format!("-{s}/sqrt(2)"), format!("{c}/sqrt(2)"), "1/sqrt(2)"),
        y: v(format!("(-{c}-{s}/sqrt(2))/sqrt(2)"), format!("(-{s}+{c}/sqrt(2))/sqrt(2)"), "-1/2"),
        u: v(format!("(-{c}+{s}/sqrt(2))/sqrt(2)"), format!("(-{s}-{c}/sqrt(2))/sqrt(2)"), "1/2"),
        kg: expr(kg),
        kn: expr(kn),
        taug: expr(taug),
    }
}

pub fn example2_source() -> DarbouxSource {
    DarbouxSource::Direct(helix_frame("1/(2*sqrt(2))", "1/(2*sqrt(2))", "1/2"))
}

pub fn example1_spec() -> TubeSpec {
    TubeSpec::frenet(Spine::Analytic(spiral()), SQRT2, Tolerances::default()).unwrap()
}

pub fn example2_spec() -> TubeSpec {
    TubeSpec::darboux(example2_source(), SQRT2, Tolerances::default()).unwrap()
}

pub fn grid(u: (f64, f64), n_u: usize, v: (f64, f64), n_v: usize) -> GridSpec {
    GridSpec::new(Interval::new(u.0, u.1), n_u, Interval::new(v.0, v.1), n_v).unwrap()
}

#[track_caller]
pub fn assert_close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

#[track_caller]
pub fn assert_rel(a: f64, b: f64, rel: f64) {
    let scale = a.abs().max(b.abs()).max(1.0);
    assert!((a - b).abs() <= rel * scale, "{a} vs {b} (rel {rel})");
}
