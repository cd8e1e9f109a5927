//! Acceptance suite: one line per criterion, exit status 1 if any fails.
//!
//! Run with `cargo test -p tubefocal --test acceptance`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};
use std::process::{Command, ExitCode};

use tubefocal::config::{bundled, parse_config, JobConfig, Which};
use tubefocal::report::{run_verify, VerifyOutcome};
use tubefocal::sample_surface;
use tubefocal_core::exprcurve::{CurveDef, Interval, ParseContext};
use tubefocal_core::framekit::{frenet_at, frenet_to_darboux};
use tubefocal_core::tubefocal::{GridSpec, MaskClass, Stat, Verdict};
use tubefocal_core::{Error, Tolerances};

const FLAT_JET: f64 = 1e-8;
const FLAT_FD: f64 = 1e-4;
const CLOSED_REL: f64 = 1e-6;
const ANCHOR_TOL: f64 = 1e-6;
const MIN_L_STAR: f64 = 1e-10;
const ASYMPTOTIC: f64 = 1e-8;
const U_GEODESIC: f64 = 1e-6;
const CONTROL_GEODESIC: f64 = 1e-3;
const CMC_MEAN: f64 = 1e-6;
const CMC_STD: f64 = 1e-6;
const PRINCIPAL_REL: f64 = 1e-8;
const SPINE_RECOVERY: f64 = 1e-9;
const FRAME_RESIDUAL: f64 = 1e-6;
const ROTATION: f64 = 1e-12;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn builtin(name: &str) -> JobConfig {
    parse_config(bundled(name).expect("bundled config"), &format!("builtin:{name}"), &[]).expect("bundled config loads")
}

fn at_most(s: &Stat, bound: f64) -> bool {
    s.count > 0 && s.nonfinite == 0 && s.max <= bound
}

fn above(s: &Stat, bound: f64) -> bool {
    s.count > 0 && s.nonfinite == 0 && s.min > bound
}

struct Run {
    label: &'static str,
    out: VerifyOutcome,
}

fn flatness(runs: &[Run]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in runs {
        let st = &r.out.theorems.stats;
        ok &= at_most(&st.k_star_jet, FLAT_JET) && at_most(&st.k_star_fd, FLAT_FD);
        parts.push(format!(
            "{}: max|K*| jet {:.2e}, fd {:.2e} ({} fd nodes)",
            r.label, st.k_star_jet.max, st.k_star_fd.max, st.k_star_fd.count
        ));
    }
    outcome(ok, parts.join("; "))
}

fn closed_forms(runs: &[Run]) -> Outcome {
    let mut ok = true;
    let mut worst = 0.0f64;
    for r in runs {
        let st = &r.out.theorems.stats;
        for sheet in [&st.tube, &st.focal] {
            ok &= sheet.regular > 0 && sheet.flips == 0;
            for s in &sheet.forms {
                ok &= at_most(s, CLOSED_REL);
                worst = worst.max(s.max);
            }
        }
    }
    outcome(ok, format!("worst relative deviation over E F G l m n K H, 4 sheets: {worst:.2e}"))
}

fn anchors(runs: &[Run]) -> Outcome {
    let expected = [("example1", "focal.H(sqrt2,0)", 1.0 / (4.0 * SQRT_2)), ("example2", "focal.H(0,0)", -0.25)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (label, name, value) in expected {
        let run = runs.iter().find(|r| r.label == label).expect("run");
        let Some(a) = run.out.anchors.iter().find(|a| a.anchor.name == name) else {
            ok = false;
            parts.push(format!("{label}: anchor {name} missing"));
            continue;
        };
        let hit = |x: Option<f64>| x.is_some_and(|x| (x - value).abs() <= ANCHOR_TOL);
        ok &= hit(a.closed) && hit(a.numeric) && (a.anchor.expected - value).abs() < 1e-15;
        parts.push(format!(
            "{label} H* closed {:.9}, generic {:.9}, expected {value:.9}",
            a.closed.unwrap_or(f64::NAN),
            a.numeric.unwrap_or(f64::NAN)
        ));
    }
    outcome(ok, parts.join("; "))
}

fn non_minimal(runs: &[Run]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in runs {
        let st = &r.out.theorems.stats;
        ok &= above(&st.h_star_numeric_abs, 0.0) && above(&st.l_star_abs, MIN_L_STAR);
        parts
            .push(format!("{}: inf|H*| {:.4e}, inf|l*| {:.4e}", r.label, st.h_star_numeric_abs.min, st.l_star_abs.min));
    }
    outcome(ok, parts.join("; "))
}

fn classification(runs: &[Run]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in runs {
        let st = &r.out.theorems.stats;
        ok &= at_most(&st.v_normal, ASYMPTOTIC) && above(&st.u_normal, MIN_L_STAR);
        parts.push(format!(
            "{}: max|<X*_vv,N*>| {:.2e}, min|<X*_uu,N*>| {:.4e}",
            r.label, st.v_normal.max, st.u_normal.min
        ));
    }
    outcome(ok, parts.join("; "))
}

const CONTROL_SPINE: &str = r#"
[job]
label = "control"
frame_mode = "frenet"
radius = 0.5

[spine]
kind = "curvature"
kappa = "1/(u^2 + 2)"
domain = [0.4, 3.1]
anchor = 0.4

[grid]
u = [0.5, 3.0]
n_u = 60
v = [-1.2, 1.2]
n_v = 60
"#;

fn geodesic_family(runs: &[Run]) -> Outcome {
    let ex1 = &runs[0].out.theorems.stats;
    let control = run_verify(&parse_config(CONTROL_SPINE, "control", &[]).expect("control config"));
    let cs = &control.theorems.stats;
    let ok = at_most(&ex1.u_geodesic, U_GEODESIC) && cs.u_geodesic.count > 0 && cs.u_geodesic.max > CONTROL_GEODESIC;
    outcome(
        ok,
        format!(
            "example1 max|X*_uu x N*| {:.2e}; control kappa=1/(u^2+2) max {:.4e}",
            ex1.u_geodesic.max, cs.u_geodesic.max
        ),
    )
}

const CMC_SPINE: &str = r#"
[job]
label = "cmc"
frame_mode = "frenet"
radius = 0.5

[spine]
kind = "curvature"
kappa = "u^(-1/2)"
domain = [0.9, 4.1]
anchor = 1.0

[grid]
u = [1.0, 4.0]
n_u = 60
v = [-1.2, 1.2]
n_v = 60
"#;

fn cmc_family() -> Outcome {
    let out = run_verify(&parse_config(CMC_SPINE, "cmc", &[]).expect("cmc config"));
    let h = &out.theorems.stats.h_star_numeric;
    let ok = h.count > 0 && h.nonfinite == 0 && (h.mean - 1.0).abs() <= CMC_MEAN && h.std() <= CMC_STD;
    outcome(ok, format!("generic H* over {} points: mean {:.12}, std {:.2e}", h.count, h.mean, h.std()))
}

fn principal_split(runs: &[Run]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in runs {
        let st = &r.out.theorems.stats;
        ok &= at_most(&st.principal, PRINCIPAL_REL) && at_most(&st.spine_recovery, SPINE_RECOVERY);
        parts
            .push(format!("{}: split {:.2e}, spine recovery {:.2e}", r.label, st.principal.max, st.spine_recovery.max));
    }
    outcome(ok, parts.join("; "))
}

const CIRCLE_SPINE: &str = r#"
[job]
label = "circle"
frame_mode = "frenet"
radius = 1.0

[spine]
kind = "analytic"
x = "2*cos(u/2)"
y = "2*sin(u/2)"
z = "0"
domain = [-1.0, 7.0]

[grid]
u = [0.0, 6.0]
n_u = 12
v = [-1.2, 1.2]
n_v = 12
"#;

fn degenerate_handling() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();

    let circle = parse_config(CIRCLE_SPINE, "circle", &[]).expect("circle config");
    let focal = sample_surface(&circle.spec, &circle.grid, Which::Focal);
    let circle_ok =
        focal.is_err() && run_verify(&circle).theorems.stats.focal.masked.get(MaskClass::FocalDegenerate) == 12 * 12;
    ok &= circle_ok;
    parts.push(format!("circle focal all FocalDegenerate: {circle_ok}"));

    // Example 2 on a v-range through both critical lines
    let ex2 = builtin("example2");
    let tol = ex2.spec.tol;
    let grid = GridSpec::new(Interval::new(0.0, 3.0), 7, Interval::new(-FRAC_PI_2, FRAC_PI_2), 81).unwrap();
    let mesh = sample_surface(&ex2.spec, &grid, Which::Focal).expect("example2 focal");
    let k = 1.0 / (2.0 * SQRT_2);
    let mut mismatches = 0;
    let (mut poles, mut flat) = (0, 0);
    for j in 0..grid.n_v {
        let v = grid.v_at(j);
        let (s, c) = v.sin_cos();
        let b = k * (c + s);
        let expect = if b.abs() <= tol.eps_b {
            Some(MaskClass::FocalPoleB)
        } else if (k * (c - s) * 0.5).abs() / b.abs().powi(3) <= tol.eps_reg {
            Some(MaskClass::FocalDegenerate)
        } else {
            None
        };
        for i in 0..grid.n_u {
            let got = mesh.masked.iter().find(|m| m.i == i && m.j == j).map(|m| m.class);
            if got != expect {
                mismatches += 1;
            }
            match got {
                Some(MaskClass::FocalPoleB) => poles += 1,
                Some(MaskClass::FocalDegenerate) => flat += 1,
                _ => {}
            }
        }
    }
    let mask_ok = mismatches == 0 && poles == grid.n_u && flat == grid.n_u && mesh.masked.len() == 2 * grid.n_u;
    ok &= mask_ok;
    parts.push(format!(
        "example2 focal: {poles} b-pole and {flat} W*-zero nodes at v=-pi/4, pi/4, {mismatches} mismatches"
    ));

    let ex1 = builtin("example1");
    let singular = ex1.spec.frame_at(0.0).and_then(|f| ex1.spec.tube_forms(&f, 0.0));
    let regular = ex1.spec.frame_at(0.0).and_then(|f| ex1.spec.tube_forms(&f, 0.1));
    let tube_ok = matches!(singular, Err(Error::SingularPoint { .. })) && regular.is_ok();
    ok &= tube_ok;
    parts.push(format!("example1 tube singular at (0,0): {tube_ok}"));
    outcome(ok, parts.join("; "))
}

fn frame_validity(runs: &[Run]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in runs {
        let t = &r.out.theorems;
        ok &= at_most(&t.frame_jet, FRAME_RESIDUAL) && t.frame_jet.count == 200;
        parts.push(format!("{}: max ODE residual {:.2e} over {} samples", r.label, t.frame_jet.max, t.frame_jet.count));
    }
    let helix = CurveDef::parse(
        ["cos(u/sqrt(2))", "sin(u/sqrt(2))", "u/sqrt(2)"],
        Interval::new(-10.0, 10.0),
        "helix",
        &ParseContext::univariate(),
    )
    .unwrap();
    let mut worst = 0.0f64;
    for u in Interval::new(0.0, 3.0).samples(7) {
        let f = frenet_at(&helix, u, &Tolerances::default()).unwrap();
        let d = frenet_to_darboux(&f, FRAC_PI_4, 0.0);
        let k = 1.0 / (2.0 * SQRT_2);
        worst = worst.max((d.kg - k).abs()).max((d.kn - k).abs()).max((d.taug - 0.5).abs());
    }
    ok &= worst <= ROTATION;
    parts.push(format!("theta=pi/4 rotation of the helix: max deviation {worst:.2e}"));
    outcome(ok, parts.join("; "))
}

fn reproduction() -> Outcome {
    let dir = tempfile::tempdir().expect("tempdir");
    let status = Command::new(env!("CARGO_BIN_EXE_tubefocal"))
        .args(["reproduce-examples", "--out"])
        .arg(dir.path())
        .output()
        .expect("run tubefocal");
    let mut ok = status.status.success();
    let mut meshes = 0;
    let mut failed = 0;
    for label in ["example1", "example2"] {
        for sheet in ["tube", "focal"] {
            let p = dir.path().join(format!("{label}_{sheet}.ply"));
            if p.metadata().is_ok_and(|m| m.len() > 0) {
                meshes += 1;
            }
        }
        let report = std::fs::read_to_string(dir.path().join(format!("{label}_report.json")));
        match report.ok().and_then(|t| serde_json::from_str::<serde_json::Value>(&t).ok()) {
            Some(j) => {
                let f = j["summary"]["failed"].as_u64().unwrap_or(u64::MAX);
                ok &= f == 0 && j["summary"]["ok"] == true && j["job"]["radius"].as_f64() == Some(SQRT_2);
                failed += f;
            }
            None => ok = false,
        }
    }
    ok &= meshes == 4;
    outcome(ok, format!("exit {:?}, {meshes} meshes, 2 reports with {failed} failed checks", status.status.code()))
}

fn main() -> ExitCode {
    let runs: Vec<Run> =
        ["example1", "example2"].into_iter().map(|label| Run { label, out: run_verify(&builtin(label)) }).collect();
    let any_failed_check = runs.iter().any(|r| r.out.checks().iter().any(|c| c.verdict == Verdict::Fail));

    let results: Vec<(&str, Outcome)> = vec![
        ("flatness of the focal sheets", flatness(&runs)),
        ("closed forms vs generic engine", closed_forms(&runs)),
        ("mean-curvature anchors", anchors(&runs)),
        ("focal sheets are not minimal", non_minimal(&runs)),
        ("parameter-curve classification", classification(&runs)),
        ("geodesic u-curve family", geodesic_family(&runs)),
        ("constant mean curvature family", cmc_family()),
        ("principal-curvature split", principal_split(&runs)),
        ("degenerate handling", degenerate_handling()),
        ("frame validity", frame_validity(&runs)),
        ("reproduce-examples end to end", reproduction()),
    ];
    let mut failures = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        println!("criterion {:>2} {}: {}  [{}]", i + 1, if o.pass { "PASS" } else { "FAIL" }, name, o.detail);
        failures += usize::from(!o.pass);
    }
    if any_failed_check {
        println!("note: the in-process example reports contain failed checks");
    }
    println!("{} of {} criteria pass", results.len() - failures, results.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
