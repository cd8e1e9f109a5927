//! The verification report: theorem checks, anchors and the JSON document.

use rayon::prelude::*;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use time::format_description::well_known::Rfc3339;
use time::OffsetDateTime;
use tubefocal_core::surfkit::{curvatures, fundamental_forms, surface_jet, CurvatureSummary, FundamentalForms};
use tubefocal_core::tubefocal::{
    verify_theorems_with, Check, FrameMode, MaskClass, MaskCounts, PatchSigns, Relation, SheetStats, Stat,
    TheoremReport, TubeSpec, Verdict, FORM_NAMES,
};
use tubefocal_core::Tolerances;

use crate::config::{Anchor, JobConfig, Quantity, Which};

pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Result of checking one anchor against both evaluation paths.
#[derive(Clone, Debug, PartialEq)]
pub struct AnchorResult {
    pub anchor: Anchor,
    pub closed: Option<f64>,
    pub numeric: Option<f64>,
    pub verdict: Verdict,
    pub note: String,
}

impl AnchorResult {
    /// Worst deviation of the two paths from the expected value.
    pub fn deviation(&self) -> f64 {
        match (self.closed, self.numeric) {
            (Some(a), Some(b)) => (a - self.anchor.expected).abs().max((b - self.anchor.expected).abs()),
            _ => f64::NAN,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOutcome {
    pub theorems: TheoremReport,
    pub anchors: Vec<AnchorResult>,
}

impl VerifyOutcome {
    /// All checks, anchors included (as `anchor.<name>`).
    pub fn checks(&self) -> Vec<Check> {
        let mut all = self.theorems.checks.clone();
        for a in &self.anchors {
            all.push(Check {
                name: format!("anchor.{}", a.anchor.name),
                observed: a.deviation(),
                relation: Relation::AtMost,
                bound: a.anchor.tolerance,
                verdict: a.verdict,
                at: Some([a.anchor.u, a.anchor.v]),
                note: a.note.clone(),
            });
        }
        all
    }

    pub fn passed(&self) -> bool {
        self.checks().iter().all(|c| c.verdict != Verdict::Fail)
    }
}

fn pick(q: Quantity, ff: &FundamentalForms, c: &CurvatureSummary, s: f64) -> f64 {
    let (hi, lo) = {
        let (a, b) = (s * c.kappa1, s * c.kappa2);
        (a.max(b), a.min(b))
    };
    match q {
        Quantity::E => ff.e,
        Quantity::F => ff.f,
        Quantity::G => ff.g,
        Quantity::L => s * ff.l,
        Quantity::M => s * ff.m,
        Quantity::N => s * ff.n,
        Quantity::K => c.k,
        Quantity::H => s * c.h,
        Quantity::Kappa1 => hi,
        Quantity::Kappa2 => lo,
    }
}

/// Evaluates an anchor by the closed forms and by the generic engine (in
/// the patch orientation given by `signs`).
pub fn evaluate_anchor(spec: &TubeSpec, signs: &PatchSigns, a: &Anchor) -> AnchorResult {
    let closed = spec.frame_at(a.u).and_then(|frame| match a.surface {
        Which::Tube => spec.tube_forms(&frame, a.v),
        Which::Focal => spec.focal_forms(&frame, a.v),
    });
    let closed = closed.map(|c| pick(a.quantity, &c.forms, &c.curv, 1.0));
    let (sign, jet) = match a.surface {
        Which::Tube => (signs.tube, surface_jet(&spec.tube_surface(), a.u, a.v)),
        Which::Focal => (signs.focal, surface_jet(&spec.focal_surface(), a.u, a.v)),
    };
    let numeric = jet
        .and_then(|j| fundamental_forms(&j, spec.tol.eps_reg))
        .map(|ff| pick(a.quantity, &ff, &curvatures(&ff), sign));

    let mut note = String::new();
    for (path, r) in [("closed form", &closed), ("generic engine", &numeric)] {
        if let Err(e) = r {
            if !note.is_empty() {
                note.push_str("; ");
            }
            note.push_str(&format!("{path}: {e}"));
        }
    }
    let closed = closed.ok();
    let numeric = numeric.ok();
    let within = |x: Option<f64>| x.is_some_and(|x| (x - a.expected).abs() <= a.tolerance);
    let verdict = if within(closed) && within(numeric) { Verdict::Pass } else { Verdict::Fail };
    AnchorResult { anchor: a.clone(), closed, numeric, verdict, note }
}

/// Runs the theorem checks with rows spread over the current rayon pool,
/// then the anchors.
pub fn run_verify(cfg: &JobConfig) -> VerifyOutcome {
    let theorems = verify_theorems_with(&cfg.spec, &cfg.grid, |n, row| (0..n).into_par_iter().map(row).collect());
    let anchors = cfg.anchors.iter().map(|a| evaluate_anchor(&cfg.spec, &theorems.signs, a)).collect();
    VerifyOutcome { theorems, anchors }
}

/// `SOURCE_DATE_EPOCH` if set and valid, otherwise the current UTC time.
pub fn timestamp() -> String {
    let t = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|s| OffsetDateTime::from_unix_timestamp(s).ok())
        .unwrap_or_else(OffsetDateTime::now_utc);
    t.format(&Rfc3339).unwrap_or_else(|_| "unknown".into())
}

/// A JSON object that keeps insertion order.
struct Ordered<V>(Vec<(String, V)>);

impl<V: Serialize> Serialize for Ordered<V> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

/// `NaN` and infinities become `null`.
fn num(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Serialize)]
struct StatJson {
    count: usize,
    nonfinite: usize,
    max: Option<f64>,
    max_at: Option<[f64; 2]>,
    min: Option<f64>,
    min_at: Option<[f64; 2]>,
    mean: Option<f64>,
    std: Option<f64>,
}

impl From<&Stat> for StatJson {
    fn from(s: &Stat) -> Self {
        let some = s.count > 0;
        StatJson {
            count: s.count,
            nonfinite: s.nonfinite,
            max: num(s.max),
            max_at: some.then_some(s.max_at),
            min: num(s.min),
            min_at: some.then_some(s.min_at),
            mean: if some { num(s.mean) } else { None },
            std: num(s.std()),
        }
    }
}

#[derive(Serialize)]
struct Tool {
    name: &'static str,
    version: &'static str,
}

#[derive(Serialize)]
struct ConfigInfo<'a> {
    origin: &'a str,
    sha256: &'a str,
    tolerance_overrides: Ordered<f64>,
}

#[derive(Serialize)]
struct GridJson {
    u: [f64; 2],
    n_u: usize,
    v: [f64; 2],
    n_v: usize,
}

#[derive(Serialize)]
struct Job<'a> {
    label: &'a str,
    frame_mode: &'static str,
    radius: f64,
    spine: &'a str,
    normal_convention: Option<String>,
    grid: GridJson,
}

#[derive(Serialize)]
struct Orientation {
    tube: f64,
    focal: f64,
}

#[derive(Serialize)]
struct CheckJson<'a> {
    name: &'a str,
    verdict: &'static str,
    observed: Option<f64>,
    relation: &'static str,
    bound: f64,
    at: Option<[f64; 2]>,
    note: &'a str,
}

#[derive(Serialize)]
struct AnchorJson<'a> {
    name: &'a str,
    surface: &'static str,
    quantity: &'static str,
    u: f64,
    v: f64,
    expected: f64,
    tolerance: f64,
    closed_form: Option<f64>,
    generic: Option<f64>,
    verdict: &'static str,
    note: &'a str,
}

#[derive(Serialize)]
struct Summary {
    checks: usize,
    passed: usize,
    failed: usize,
    skipped: usize,
    ok: bool,
}

#[derive(Serialize)]
struct Document<'a> {
    tool: Tool,
    config: ConfigInfo<'a>,
    generated_at: String,
    job: Job<'a>,
    tolerances: Ordered<f64>,
    orientation: Orientation,
    masks: Ordered<Ordered<usize>>,
    statistics: Ordered<StatJson>,
    anchors: Vec<AnchorJson<'a>>,
    checks: Vec<CheckJson<'a>>,
    summary: Summary,
}

fn masks(m: &MaskCounts) -> Ordered<usize> {
    Ordered(MaskClass::ALL.iter().map(|c| (c.name().to_string(), m.get(*c))).collect())
}

fn sheet_stats(prefix: &str, s: &SheetStats, out: &mut Vec<(String, StatJson)>) {
    for (k, name) in FORM_NAMES.iter().enumerate() {
        out.push((format!("{prefix}.closed_form.{name}"), (&s.forms[k]).into()));
    }
    out.push((format!("{prefix}.closed_form.partials"), (&s.partials).into()));
    out.push((format!("{prefix}.mixed_partials"), (&s.mixed_partials).into()));
}

fn tolerances(t: &Tolerances) -> Ordered<f64> {
    Ordered(Tolerances::KEYS.iter().map(|k| (k.to_string(), t.get(k).unwrap_or(f64::NAN))).collect())
}

/// Pretty JSON report. Key order is fixed; `generated_at` sits on a line of
/// its own so reports can be compared with that line removed.
pub fn report_json(cfg: &JobConfig, out: &VerifyOutcome, generated_at: &str) -> String {
    let t = &out.theorems;
    let st = &t.stats;
    let mut stats = Vec::new();
    sheet_stats("tube", &st.tube, &mut stats);
    for (name, s) in [("tube.principal_split", &st.principal), ("tube.spine_recovery", &st.spine_recovery)] {
        stats.push((name.to_string(), s.into()));
    }
    stats.push(("frame.residual_jet".into(), (&t.frame_jet).into()));
    stats.push(("frame.residual_fd".into(), (&t.frame_fd).into()));
    sheet_stats("focal", &st.focal, &mut stats);
    for (name, s) in [
        ("focal.K_star_jet", &st.k_star_jet),
        ("focal.K_star_fd", &st.k_star_fd),
        ("focal.H_star", &st.h_star),
        ("focal.H_star_generic", &st.h_star_numeric),
        ("focal.l_star_abs", &st.l_star_abs),
        ("focal.u_normal_component", &st.u_normal),
        ("focal.m_star", &st.uv_normal),
        ("focal.v_normal_component", &st.v_normal),
        ("focal.u_geodesic_residual", &st.u_geodesic),
        ("focal.v_geodesic_residual", &st.v_geodesic),
        ("focal.u_geodesic_condition", &st.u_geodesic_condition),
        ("focal.offset_identity", &st.focal_offset),
    ] {
        stats.push((name.to_string(), s.into()));
    }
    match t.mode {
        FrameMode::Frenet => stats.push(("focal.v_geodesic_closed_form".into(), (&st.v_geodesic_closed).into())),
        FrameMode::Darboux => {
            stats.push(("focal.u_geodesic_y_part".into(), (&st.u_geodesic_y_part).into()));
            stats.push(("focal.u_geodesic_u_part".into(), (&st.u_geodesic_u_part).into()));
        }
    }

    let checks = out.checks();
    let count = |v: Verdict| checks.iter().filter(|c| c.verdict == v).count();
    let summary = Summary {
        checks: checks.len(),
        passed: count(Verdict::Pass),
        failed: count(Verdict::Fail),
        skipped: count(Verdict::Skipped),
        ok: count(Verdict::Fail) == 0,
    };
    let g = &cfg.grid;
    let doc = Document {
        tool: Tool { name: TOOL_NAME, version: TOOL_VERSION },
        config: ConfigInfo {
            origin: &cfg.origin,
            sha256: &cfg.sha256,
            tolerance_overrides: Ordered(cfg.overrides.clone()),
        },
        generated_at: generated_at.to_string(),
        job: Job {
            label: &cfg.label,
            frame_mode: match t.mode {
                FrameMode::Frenet => "frenet",
                FrameMode::Darboux => "darboux",
            },
            radius: t.radius,
            spine: &t.spine,
            normal_convention: t.convention.map(|c| c.to_string()),
            grid: GridJson { u: [g.u.lo, g.u.hi], n_u: g.n_u, v: [g.v.lo, g.v.hi], n_v: g.n_v },
        },
        tolerances: tolerances(&cfg.spec.tol),
        orientation: Orientation { tube: t.signs.tube, focal: t.signs.focal },
        masks: Ordered(vec![("tube".into(), masks(&st.tube.masked)), ("focal".into(), masks(&st.focal.masked))]),
        statistics: Ordered(stats),
        anchors: out
            .anchors
            .iter()
            .map(|a| AnchorJson {
                name: &a.anchor.name,
                surface: a.anchor.surface.name(),
                quantity: a.anchor.quantity.name(),
                u: a.anchor.u,
                v: a.anchor.v,
                expected: a.anchor.expected,
                tolerance: a.anchor.tolerance,
                closed_form: a.closed.and_then(num),
                generic: a.numeric.and_then(num),
                verdict: a.verdict.as_str(),
                note: &a.note,
            })
            .collect(),
        checks: checks
            .iter()
            .map(|c| CheckJson {
                name: &c.name,
                verdict: c.verdict.as_str(),
                observed: num(c.observed),
                relation: c.relation.as_str(),
                bound: c.bound,
                at: c.at.filter(|p| p.iter().all(|x| x.is_finite())),
                note: &c.note,
            })
            .collect(),
        summary,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serialises");
    s.push('\n');
    s
}

/// One line per check, for the terminal.
pub fn summary_lines(out: &VerifyOutcome) -> Vec<String> {
    out.checks()
        .iter()
        .map(|c| {
            let mut line = format!(
                "{:<8} {:<40} {:>12.4e} {} {:.1e}",
                c.verdict.as_str().to_uppercase(),
                c.name,
                c.observed,
                c.relation.as_str(),
                c.bound
            );
            if !c.note.is_empty() {
                line.push_str(&format!("  ({})", c.note));
            }
            line
        })
        .collect()
}
