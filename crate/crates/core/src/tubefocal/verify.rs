//! Grid-wide verification of the closed forms and theorems against the
//! generic surface engine.
//!
//! Work is split by grid rows (fixed `u`). Every row yields an
//! [`Accumulator`]; accumulators are merged in row order, so the report does
//! not depend on how rows were scheduled.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::classify::{side_conditions, SideConditions};
use super::closed::ClosedForms;
use super::spec::{FrameAt, FrameMode, SpineSource, TubeSpec};
use crate::error::{Error, Result};
use crate::exprcurve::Interval;
use crate::framekit::{
    darboux_residuals, darboux_residuals_fd, frenet_residuals, frenet_residuals_fd, NormalConvention,
};
use crate::surfkit::{
    classify_point, curvatures, fundamental_forms, mixed_partial_asymmetry, surface_jet, surface_jet_fd,
    CurvatureSummary, FundamentalForms, ParamDirection, Surface, SurfaceJet,
};
use crate::tol::rel_dev;
use crate::vec3::Vec3;

/// Uniform `n_u × n_v` grid, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub u: Interval,
    pub n_u: usize,
    pub v: Interval,
    pub n_v: usize,
}

impl GridSpec {
    pub fn new(u: Interval, n_u: usize, v: Interval, n_v: usize) -> Result<Self> {
        if n_u < 2 || n_v < 2 {
            return Err(Error::InvalidInput(format!("grid needs at least 2x2 nodes, got {n_u}x{n_v}")));
        }
        if !(u.hi > u.lo) || !(v.hi > v.lo) {
            return Err(Error::InvalidInput("grid ranges must be non-empty".into()));
        }
        Ok(GridSpec { u, n_u, v, n_v })
    }

    pub fn u_at(&self, i: usize) -> f64 {
        node(self.u, self.n_u, i)
    }

    pub fn v_at(&self, j: usize) -> f64 {
        node(self.v, self.n_v, j)
    }
}

fn node(iv: Interval, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        iv.hi
    } else {
        iv.lo + (iv.hi - iv.lo) * (i as f64 / (n - 1) as f64)
    }
}

/// Why a grid node was left out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MaskClass {
    /// Closed-form `W ≤ εreg`.
    Singular,
    VanishingCurvature,
    FocalPoleV,
    FocalPoleB,
    FocalDegenerate,
    /// Closed form regular but the generic engine found `W ≤ εreg`.
    NumericSingular,
    /// Any other evaluation failure (domain errors and the like).
    Evaluation,
}

impl MaskClass {
    pub const ALL: [MaskClass; 7] = [
        MaskClass::Singular,
        MaskClass::VanishingCurvature,
        MaskClass::FocalPoleV,
        MaskClass::FocalPoleB,
        MaskClass::FocalDegenerate,
        MaskClass::NumericSingular,
        MaskClass::Evaluation,
    ];

    pub fn of(e: &Error) -> Self {
        match e {
            Error::SingularPoint { .. } => MaskClass::Singular,
            Error::VanishingCurvature { .. } => MaskClass::VanishingCurvature,
            Error::FocalPoleV { .. } => MaskClass::FocalPoleV,
            Error::FocalPoleB { .. } => MaskClass::FocalPoleB,
            Error::FocalDegenerate { .. } => MaskClass::FocalDegenerate,
            _ => MaskClass::Evaluation,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MaskClass::Singular => "singular",
            MaskClass::VanishingCurvature => "vanishing_curvature",
            MaskClass::FocalPoleV => "focal_pole_v",
            MaskClass::FocalPoleB => "focal_pole_b",
            MaskClass::FocalDegenerate => "focal_degenerate",
            MaskClass::NumericSingular => "numeric_singular",
            MaskClass::Evaluation => "evaluation",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MaskCounts([usize; 7]);

impl MaskCounts {
    pub fn add(&mut self, c: MaskClass) {
        self.0[c.index()] += 1;
    }

    pub fn get(&self, c: MaskClass) -> usize {
        self.0[c.index()]
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    fn merge(&mut self, o: &Self) {
        for (a, b) in self.0.iter_mut().zip(o.0) {
            *a += b;
        }
    }
}

/// Running extrema and moments of one scalar over the grid.
///
/// Ties keep the earlier sample, and the mean/variance update is the
/// pairwise (Chan) formula, so merging in a fixed order is reproducible.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stat {
    pub count: usize,
    pub nonfinite: usize,
    pub max: f64,
    pub max_at: [f64; 2],
    pub min: f64,
    pub min_at: [f64; 2],
    pub mean: f64,
    m2: f64,
}

impl Default for Stat {
    fn default() -> Self {
        Stat {
            count: 0,
            nonfinite: 0,
            max: f64::NEG_INFINITY,
            max_at: [f64::NAN; 2],
            min: f64::INFINITY,
            min_at: [f64::NAN; 2],
            mean: 0.0,
            m2: 0.0,
        }
    }
}

impl Stat {
    pub fn push(&mut self, x: f64, u: f64, v: f64) {
        if !x.is_finite() {
            self.nonfinite += 1;
            return;
        }
        if x > self.max {
            self.max = x;
            self.max_at = [u, v];
        }
        if x < self.min {
            self.min = x;
            self.min_at = [u, v];
        }
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, o: &Stat) {
        if o.max > self.max {
            self.max = o.max;
            self.max_at = o.max_at;
        }
        if o.min < self.min {
            self.min = o.min;
            self.min_at = o.min_at;
        }
        self.nonfinite += o.nonfinite;
        if o.count == 0 {
            return;
        }
        let n = self.count + o.count;
        let d = o.mean - self.mean;
        let w = o.count as f64 / n as f64;
        self.mean += d * w;
        self.m2 += o.m2 + d * d * self.count as f64 * w;
        self.count = n;
    }

    /// Population standard deviation.
    pub fn std(&self) -> f64 {
        if self.count == 0 {
            return f64::NAN;
        }
        libm::sqrt(self.m2 / self.count as f64)
    }
}

pub const FORM_NAMES: [&str; 8] = ["E", "F", "G", "l", "m", "n", "K", "H"];

/// Comparisons made on one surface (tube or focal sheet).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SheetStats {
    pub regular: usize,
    pub masked: MaskCounts,
    /// Relative deviation closed form vs jet path for `E F G l m n K H`.
    pub forms: [Stat; 8],
    /// Relative deviation of `X, X_u, ..., X_vv`.
    pub partials: Stat,
    pub mixed_partials: Stat,
    /// Points whose numeric normal disagrees with the patch orientation.
    pub flips: usize,
}

impl SheetStats {
    fn merge(&mut self, o: &Self) {
        self.regular += o.regular;
        self.masked.merge(&o.masked);
        for (a, b) in self.forms.iter_mut().zip(o.forms.iter()) {
            a.merge(b);
        }
        self.partials.merge(&o.partials);
        self.mixed_partials.merge(&o.mixed_partials);
        self.flips += o.flips;
    }
}

/// Everything gathered over a set of grid rows.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Accumulator {
    pub tube: SheetStats,
    pub focal: SheetStats,
    /// `{κ₁, κ₂}` numeric vs `{1/r, κ₂}` closed.
    pub principal: Stat,
    /// `‖X + r N - γ‖`.
    pub spine_recovery: Stat,
    /// `‖X* - (X + N/κ₂)‖ / max(1, ‖X*‖)`.
    pub focal_offset: Stat,
    pub k_star_jet: Stat,
    pub k_star_fd: Stat,
    /// Nodes where the difference stencil left the spine's domain.
    pub fd_skipped: usize,
    /// Closed-form `H*`.
    pub h_star: Stat,
    /// `H*` from the generic engine, in the theory's orientation.
    pub h_star_numeric: Stat,
    pub h_star_numeric_abs: Stat,
    /// Closed-form `|l*|`.
    pub l_star_abs: Stat,
    /// `|⟨X*_uu, N*⟩|`, `|⟨X*_uv, N*⟩|`, `|⟨X*_vv, N*⟩|` from the generic engine.
    pub u_normal: Stat,
    pub uv_normal: Stat,
    pub v_normal: Stat,
    pub u_geodesic: Stat,
    pub v_geodesic: Stat,
    /// Frenet: relative deviation of `‖X*_vv × N*‖` from `2|sin v|/(κ|cos v|³)`.
    pub v_geodesic_closed: Stat,
    /// `|-κ''κ + 2κ'²|` (Frenet) or the combined Darboux condition.
    pub u_geodesic_condition: Stat,
    pub u_geodesic_y_part: Stat,
    pub u_geodesic_u_part: Stat,
}

impl Accumulator {
    pub fn merge(&mut self, o: &Self) {
        self.tube.merge(&o.tube);
        self.focal.merge(&o.focal);
        for (a, b) in [
            (&mut self.principal, &o.principal),
            (&mut self.spine_recovery, &o.spine_recovery),
            (&mut self.focal_offset, &o.focal_offset),
            (&mut self.k_star_jet, &o.k_star_jet),
            (&mut self.k_star_fd, &o.k_star_fd),
            (&mut self.h_star, &o.h_star),
            (&mut self.h_star_numeric, &o.h_star_numeric),
            (&mut self.h_star_numeric_abs, &o.h_star_numeric_abs),
            (&mut self.l_star_abs, &o.l_star_abs),
            (&mut self.u_normal, &o.u_normal),
            (&mut self.uv_normal, &o.uv_normal),
            (&mut self.v_normal, &o.v_normal),
            (&mut self.u_geodesic, &o.u_geodesic),
            (&mut self.v_geodesic, &o.v_geodesic),
            (&mut self.v_geodesic_closed, &o.v_geodesic_closed),
            (&mut self.u_geodesic_condition, &o.u_geodesic_condition),
            (&mut self.u_geodesic_y_part, &o.u_geodesic_y_part),
            (&mut self.u_geodesic_u_part, &o.u_geodesic_u_part),
        ] {
            a.merge(b);
        }
        self.fd_skipped += o.fd_skipped;
    }
}

/// Orientation of the generic normal relative to the theory's normal,
/// fixed per patch at its first regular node (row-major order).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PatchSigns {
    pub tube: f64,
    pub focal: f64,
}

fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

fn numeric_forms<F: Surface>(s: &F, u: f64, v: f64, eps: f64) -> Result<(SurfaceJet, FundamentalForms)> {
    let j = surface_jet(s, u, v)?;
    let ff = match fundamental_forms(&j, eps) {
        Ok(ff) => ff,
        Err(_) => return Err(Error::InvalidInput(String::new())),
    };
    Ok((j, ff))
}

/// Scans the grid for the first regular node of each sheet.
pub fn patch_signs(spec: &TubeSpec, grid: &GridSpec) -> PatchSigns {
    let mut tube = None;
    let mut focal = None;
    let eps = spec.tol.eps_reg;
    'rows: for i in 0..grid.n_u {
        let u = grid.u_at(i);
        let Ok(frame) = spec.frame_at(u) else { continue };
        for j in 0..grid.n_v {
            let v = grid.v_at(j);
            if tube.is_none() {
                if let (Ok(c), Ok((_, n))) =
                    (spec.tube_forms(&frame, v), numeric_forms(&spec.tube_surface(), u, v, eps))
                {
                    tube = Some(sign(c.forms.normal.dot(&n.normal)));
                }
            }
            if focal.is_none() {
                if let (Ok(c), Ok((_, n))) =
                    (spec.focal_forms(&frame, v), numeric_forms(&spec.focal_surface(), u, v, eps))
                {
                    focal = Some(sign(c.forms.normal.dot(&n.normal)));
                }
            }
            if tube.is_some() && focal.is_some() {
                break 'rows;
            }
        }
    }
    PatchSigns { tube: tube.unwrap_or(1.0), focal: focal.unwrap_or(1.0) }
}

fn push_forms(
    stats: &mut [Stat; 8],
    c: &ClosedForms,
    nf: &FundamentalForms,
    nc: &CurvatureSummary,
    s: f64,
    floor: f64,
    u: f64,
    v: f64,
) {
    let cf = &c.forms;
    let pairs = [
        (cf.e, nf.e),
        (cf.f, nf.f),
        (cf.g, nf.g),
        (s * cf.l, nf.l),
        (s * cf.m, nf.m),
        (s * cf.n, nf.n),
        (c.curv.k, nc.k),
        (s * c.curv.h, nc.h),
    ];
    for (st, (a, b)) in stats.iter_mut().zip(pairs) {
        st.push(rel_dev(a, b, floor), u, v);
    }
}

fn vec_dev(a: Vec3, b: Vec3, floor: f64) -> f64 {
    let d = (a - b).norm();
    if d == 0.0 {
        return 0.0;
    }
    d / a.norm().max(b.norm()).max(floor)
}

fn partials_dev(c: &SurfaceJet, n: &SurfaceJet, floor: f64) -> f64 {
    [
        vec_dev(c.x, n.x, floor),
        vec_dev(c.xu, n.xu, floor),
        vec_dev(c.xv, n.xv, floor),
        vec_dev(c.xuu, n.xuu, floor),
        vec_dev(c.xuv, n.xuv, floor),
        vec_dev(c.xvv, n.xvv, floor),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// Best pairing of two unordered pairs, relative to `max(|a|, |b|, scale)`.
fn pair_dev(a: [f64; 2], b: [f64; 2], scale: f64) -> f64 {
    let d = |x: f64, y: f64| rel_dev(x, y, scale);
    let straight = d(a[0], b[0]).max(d(a[1], b[1]));
    let crossed = d(a[0], b[1]).max(d(a[1], b[0]));
    straight.min(crossed)
}

/// Evaluates one grid row.
pub fn verify_row(spec: &TubeSpec, grid: &GridSpec, signs: &PatchSigns, i: usize) -> Accumulator {
    let mut acc = Accumulator::default();
    let u = grid.u_at(i);
    let frame = match spec.frame_at(u) {
        Ok(f) => f,
        Err(e) => {
            let class = MaskClass::of(&e);
            for _ in 0..grid.n_v {
                acc.tube.masked.add(class);
                acc.focal.masked.add(class);
            }
            return acc;
        }
    };
    for j in 0..grid.n_v {
        verify_node(spec, &frame, signs, u, grid.v_at(j), &mut acc);
    }
    acc
}

fn verify_node(spec: &TubeSpec, frame: &FrameAt, signs: &PatchSigns, u: f64, v: f64, acc: &mut Accumulator) {
    let tol = &spec.tol;
    let floor = tol.closed_form_abs / tol.closed_form_rel;
    let r = spec.r;
    let tube_surface = spec.tube_surface();
    let focal_surface = spec.focal_surface();

    // tube
    let mut tube_numeric = None;
    let mut tube_closed = None;
    match spec.tube_forms(frame, v) {
        Err(e) => acc.tube.masked.add(MaskClass::of(&e)),
        Ok(c) => match numeric_forms(&tube_surface, u, v, tol.eps_reg) {
            Err(_) => acc.tube.masked.add(MaskClass::NumericSingular),
            Ok((nj, nf)) => {
                let s = signs.tube;
                let nc = curvatures(&nf);
                acc.tube.regular += 1;
                if sign(c.forms.normal.dot(&nf.normal)) != s {
                    acc.tube.flips += 1;
                }
                push_forms(&mut acc.tube.forms, &c, &nf, &nc, s, floor, u, v);
                acc.tube.partials.push(partials_dev(&spec.tube_jet(frame, v), &nj, floor), u, v);
                let asym = mixed_partial_asymmetry(&tube_surface, u, v).unwrap_or(f64::NAN);
                acc.tube.mixed_partials.push(asym, u, v);
                acc.principal.push(
                    pair_dev([s * nc.kappa1, s * nc.kappa2], [c.curv.kappa1, c.curv.kappa2], 1.0 / r),
                    u,
                    v,
                );
                let n_theory = nf.normal.scale(s);
                acc.spine_recovery.push((nj.x + n_theory.scale(r) - frame.gamma()).norm(), u, v);
                tube_numeric = Some((nj.x, n_theory));
                tube_closed = Some(c);
            }
        },
    }

    // focal sheet
    let c = match spec.focal_forms(frame, v) {
        Ok(c) => c,
        Err(e) => {
            acc.focal.masked.add(MaskClass::of(&e));
            return;
        }
    };
    let Ok((nj, nf)) = numeric_forms(&focal_surface, u, v, tol.eps_reg) else {
        acc.focal.masked.add(MaskClass::NumericSingular);
        return;
    };
    let s = signs.focal;
    let nc = curvatures(&nf);
    acc.focal.regular += 1;
    if sign(c.forms.normal.dot(&nf.normal)) != s {
        acc.focal.flips += 1;
    }
    push_forms(&mut acc.focal.forms, &c, &nf, &nc, s, floor, u, v);
    if let Ok(cj) = spec.focal_jet(frame, v) {
        acc.focal.partials.push(partials_dev(&cj, &nj, floor), u, v);
    }
    let asym = mixed_partial_asymmetry(&focal_surface, u, v).unwrap_or(f64::NAN);
    acc.focal.mixed_partials.push(asym, u, v);

    acc.k_star_jet.push(nc.k.abs(), u, v);
    match surface_jet_fd(&focal_surface, u, v, &tol.fd) {
        Ok(fj) => match fundamental_forms(&fj, tol.eps_reg) {
            Ok(ff) => acc.k_star_fd.push(curvatures(&ff).k.abs(), u, v),
            Err(_) => acc.k_star_fd.push(f64::NAN, u, v),
        },
        Err(_) => acc.fd_skipped += 1,
    }
    acc.h_star.push(c.curv.h, u, v);
    acc.h_star_numeric.push(s * nc.h, u, v);
    acc.h_star_numeric_abs.push(nc.h.abs(), u, v);
    acc.l_star_abs.push(c.forms.l.abs(), u, v);

    let cu = classify_point(&nj, &nf, ParamDirection::U);
    let cv = classify_point(&nj, &nf, ParamDirection::V);
    acc.u_normal.push(cu.normal_component.abs(), u, v);
    acc.uv_normal.push(nf.m.abs(), u, v);
    acc.v_normal.push(cv.normal_component.abs(), u, v);
    acc.u_geodesic.push(cu.geodesic_residual, u, v);
    acc.v_geodesic.push(cv.geodesic_residual, u, v);
    match side_conditions(frame, v) {
        SideConditions::Frenet { u_geodesic, v_geodesic } => {
            acc.u_geodesic_condition.push(u_geodesic.abs(), u, v);
            acc.v_geodesic_closed.push(rel_dev(v_geodesic, cv.geodesic_residual, floor), u, v);
        }
        SideConditions::Darboux { combined, y_part, u_part, .. } => {
            acc.u_geodesic_condition.push(combined.abs(), u, v);
            acc.u_geodesic_y_part.push(y_part.abs(), u, v);
            acc.u_geodesic_u_part.push(u_part.abs(), u, v);
        }
    }

    if let (Some((x, n_theory)), Some(tc)) = (tube_numeric, tube_closed) {
        if let Ok(xs) = focal_surface.point(u, v) {
            let predicted = x + n_theory.scale(1.0 / tc.curv.kappa2);
            acc.focal_offset.push((xs - predicted).norm() / xs.norm().max(1.0), u, v);
        }
    }
}

/// Frame ODE residuals at `n` samples of the grid's u-range (jet, finite differences).
pub fn frame_residuals(spec: &TubeSpec, grid: &GridSpec, n: usize) -> (Stat, Stat) {
    let mut jet = Stat::default();
    let mut fd = Stat::default();
    let tol = &spec.tol;
    for u in grid.u.samples(n.max(2)) {
        let (a, b) = match &spec.source {
            SpineSource::Frenet(s) => {
                (frenet_residuals(s, u, tol.eps_kappa), frenet_residuals_fd(s, u, tol.eps_kappa, &tol.fd))
            }
            SpineSource::Darboux(d) => (darboux_residuals(d, u, tol), darboux_residuals_fd(d, u, tol, &tol.fd)),
        };
        let worst = |r: Result<[f64; 3]>| r.map(|x| x[0].max(x[1]).max(x[2]));
        match worst(a) {
            Ok(x) => jet.push(x, u, 0.0),
            Err(Error::VanishingCurvature { .. }) => {}
            Err(_) => jet.push(f64::NAN, u, 0.0),
        }
        if let Ok(x) = worst(b) {
            fd.push(x, u, 0.0);
        }
    }
    (jet, fd)
}

pub const FRAME_SAMPLES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `observed <= bound`
    AtMost,
    /// `observed > bound`
    Above,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::Above => ">",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub relation: Relation,
    pub bound: f64,
    pub verdict: Verdict,
    /// Grid location of the observed extreme, when there is one.
    pub at: Option<[f64; 2]>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TheoremReport {
    pub mode: FrameMode,
    pub radius: f64,
    pub spine: String,
    pub convention: Option<NormalConvention>,
    pub grid: GridSpec,
    pub signs: PatchSigns,
    pub stats: Accumulator,
    pub frame_jet: Stat,
    pub frame_fd: Stat,
    pub checks: Vec<Check>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != Verdict::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Checks {
    list: Vec<Check>,
}

impl Checks {
    fn stat(&mut self, name: String, st: &Stat, rel: Relation, bound: f64, skip: Option<&str>) {
        let (observed, at) = match rel {
            Relation::AtMost => (st.max, st.max_at),
            Relation::Above => (st.min, st.min_at),
        };
        let mut note = String::new();
        let verdict = if let Some(why) = skip {
            note.push_str(why);
            Verdict::Skipped
        } else if st.nonfinite > 0 {
            note = format!("{} non-finite sample(s)", st.nonfinite);
            Verdict::Fail
        } else if st.count == 0 {
            note.push_str("no samples");
            Verdict::Fail
        } else {
            let ok = match rel {
                Relation::AtMost => observed <= bound,
                Relation::Above => observed > bound,
            };
            if ok {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        };
        let at = if st.count > 0 { Some(at) } else { None };
        self.list.push(Check { name, observed, relation: rel, bound, verdict, at, note });
    }

    fn count(&mut self, name: &str, observed: usize, rel: Relation, bound: f64, skip: Option<&str>) {
        let x = observed as f64;
        let verdict = match (skip, rel) {
            (Some(_), _) => Verdict::Skipped,
            (None, Relation::AtMost) if x <= bound => Verdict::Pass,
            (None, Relation::Above) if x > bound => Verdict::Pass,
            _ => Verdict::Fail,
        };
        self.list.push(Check {
            name: name.into(),
            observed: x,
            relation: rel,
            bound,
            verdict,
            at: None,
            note: skip.unwrap_or("").into(),
        });
    }
}

/// Turns merged statistics into named pass/fail checks.
pub fn build_report(
    spec: &TubeSpec,
    grid: &GridSpec,
    signs: PatchSigns,
    stats: Accumulator,
    frames: (Stat, Stat),
) -> TheoremReport {
    let tol = &spec.tol;
    let mut c = Checks { list: Vec::new() };
    use Relation::{Above, AtMost};

    c.count("tube.regular_points", stats.tube.regular, Above, 0.0, None);
    let tube_skip = (stats.tube.regular == 0).then_some("no regular tube points");
    for (k, name) in FORM_NAMES.iter().enumerate() {
        c.stat(format!("tube.closed_form.{name}"), &stats.tube.forms[k], AtMost, tol.closed_form_rel, tube_skip);
    }
    c.stat("tube.closed_form.partials".into(), &stats.tube.partials, AtMost, tol.closed_form_rel, tube_skip);
    c.stat("tube.mixed_partials".into(), &stats.tube.mixed_partials, AtMost, tol.mixed_partial, tube_skip);
    c.stat("tube.principal_split".into(), &stats.principal, AtMost, tol.principal_rel, tube_skip);
    c.stat("tube.spine_recovery".into(), &stats.spine_recovery, AtMost, tol.spine_recovery, tube_skip);
    c.count("tube.orientation_flips", stats.tube.flips, AtMost, 0.0, tube_skip);

    c.stat("frame.residual_jet".into(), &frames.0, AtMost, tol.frame_residual, None);
    c.stat("frame.residual_fd".into(), &frames.1, AtMost, tol.frame_residual_fd, None);

    let degenerate = stats.focal.regular == 0
        && stats.focal.masked.get(MaskClass::FocalDegenerate) > 0
        && stats.focal.masked.total() == stats.focal.masked.get(MaskClass::FocalDegenerate);
    let focal_skip = (stats.focal.regular == 0).then_some(if degenerate {
        "focal sheet degenerate: skipped"
    } else {
        "no regular focal points"
    });
    c.count(
        "focal.regular_points",
        stats.focal.regular,
        Above,
        0.0,
        degenerate.then_some("focal sheet degenerate: skipped"),
    );
    for (k, name) in FORM_NAMES.iter().enumerate() {
        c.stat(format!("focal.closed_form.{name}"), &stats.focal.forms[k], AtMost, tol.closed_form_rel, focal_skip);
    }
    c.stat("focal.closed_form.partials".into(), &stats.focal.partials, AtMost, tol.closed_form_rel, focal_skip);
    c.stat("focal.mixed_partials".into(), &stats.focal.mixed_partials, AtMost, tol.mixed_partial, focal_skip);
    c.stat("focal.flat_jet".into(), &stats.k_star_jet, AtMost, tol.flat_jet, focal_skip);
    c.stat("focal.flat_fd".into(), &stats.k_star_fd, AtMost, tol.flat_fd, focal_skip);
    c.stat("focal.not_minimal".into(), &stats.h_star_numeric_abs, Above, 0.0, focal_skip);
    c.stat("focal.u_curves_not_asymptotic".into(), &stats.l_star_abs, Above, tol.min_l_star, focal_skip);
    c.stat("focal.u_normal_component".into(), &stats.u_normal, Above, tol.min_l_star, focal_skip);
    c.stat("focal.v_curves_asymptotic".into(), &stats.v_normal, AtMost, tol.asymptotic, focal_skip);
    c.stat("focal.m_star".into(), &stats.uv_normal, AtMost, tol.asymptotic, focal_skip);
    match spec.mode() {
        FrameMode::Frenet => c.stat(
            "focal.v_geodesic_closed_form".into(),
            &stats.v_geodesic_closed,
            AtMost,
            tol.closed_form_rel,
            focal_skip,
        ),
        FrameMode::Darboux => c.stat("focal.v_curves_not_geodesic".into(), &stats.v_geodesic, Above, 0.0, focal_skip),
    }
    let offset_skip = focal_skip.or(tube_skip);
    c.stat("focal.offset_identity".into(), &stats.focal_offset, AtMost, tol.focal_offset, offset_skip);
    c.count("focal.orientation_flips", stats.focal.flips, AtMost, 0.0, focal_skip);

    TheoremReport {
        mode: spec.mode(),
        radius: spec.r,
        spine: spec.describe(),
        convention: spec.convention(),
        grid: *grid,
        signs,
        stats,
        frame_jet: frames.0,
        frame_fd: frames.1,
        checks: c.list,
    }
}

/// Runs every row through `run_rows` (which must return the row results in
/// row order) and assembles the report.
pub fn verify_theorems_with<R>(spec: &TubeSpec, grid: &GridSpec, run_rows: R) -> TheoremReport
where
    R: FnOnce(usize, &(dyn Fn(usize) -> Accumulator + Sync)) -> Vec<Accumulator>,
{
    let signs = patch_signs(spec, grid);
    let row = |i: usize| verify_row(spec, grid, &signs, i);
    let rows = run_rows(grid.n_u, &row);
    let mut stats = Accumulator::default();
    for r in &rows {
        stats.merge(r);
    }
    let frames = frame_residuals(spec, grid, FRAME_SAMPLES);
    build_report(spec, grid, signs, stats, frames)
}

/// Sequential [`verify_theorems_with`].
pub fn verify_theorems(spec: &TubeSpec, grid: &GridSpec) -> TheoremReport {
    verify_theorems_with(spec, grid, |n, row| (0..n).map(row).collect())
}
