//! Job configuration: a sectioned TOML file, validated eagerly.
//!
//! Every expression is parsed at load time and the tube specification is
//! built (and its spine validated) before anything is sampled, so a bad
//! file fails with the offending field path.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};
use thiserror::Error;
use tubefocal_core::exprcurve::{parse_expr_with, CurveDef, ExprTree, Interval, ParseContext};
use tubefocal_core::framekit::{DarbouxSource, DirectFrameDef, HostSurfaceDef, RotatedFrenetDef};
use tubefocal_core::tubefocal::{spine_from_curvature, FrameMode, GridSpec, Spine, TubeSpec};
use tubefocal_core::{ParseError, Tolerances};

pub const EXAMPLE1: &str = include_str!("../configs/example1.cfg");
pub const EXAMPLE2: &str = include_str!("../configs/example2.cfg");

/// Bundled configurations by name.
pub const BUNDLED: [(&str, &str); 2] = [("example1", EXAMPLE1), ("example2", EXAMPLE2)];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{path}: {source}")]
    Expression { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Spec { path: String, source: tubefocal_core::Error },
}

impl ConfigError {
    /// Dotted location of the offending field (`"grid.n_u"`, `"darboux.kg"`, ...).
    pub fn field_path(&self) -> Option<&str> {
        match self {
            ConfigError::Io { .. } => None,
            ConfigError::Parse { path, .. } | ConfigError::Expression { path, .. } | ConfigError::Spec { path, .. } => {
                Some(path)
            }
        }
    }
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Parse { path: path.into(), message: message.into() }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Number {
    Value(f64),
    Expr(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    job: RawJob,
    #[serde(default)]
    parameters: BTreeMap<String, f64>,
    spine: Option<RawSpine>,
    darboux: Option<RawDarboux>,
    grid: RawGrid,
    #[serde(default)]
    tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    anchors: Vec<RawAnchor>,
    #[serde(default)]
    outputs: RawOutputs,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJob {
    label: String,
    frame_mode: String,
    radius: Number,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpine {
    #[serde(default = "analytic")]
    kind: String,
    x: Option<String>,
    y: Option<String>,
    z: Option<String>,
    domain: [Number; 2],
    kappa: Option<String>,
    anchor: Option<Number>,
    nodes: Option<usize>,
}

fn analytic() -> String {
    "analytic".into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDarboux {
    source: String,
    t: Option<[String; 3]>,
    y: Option<[String; 3]>,
    u: Option<[String; 3]>,
    kg: Option<String>,
    kn: Option<String>,
    taug: Option<String>,
    surface: Option<[String; 3]>,
    curve: Option<[String; 2]>,
    domain: Option<[Number; 2]>,
    theta: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    u: [Number; 2],
    n_u: i64,
    v: [Number; 2],
    n_v: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAnchor {
    name: String,
    surface: String,
    quantity: String,
    u: Number,
    v: Number,
    expected: Number,
    tolerance: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutputs {
    format: Option<String>,
    tube_mesh: Option<String>,
    focal_mesh: Option<String>,
    fields_csv: Option<String>,
    report: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Which {
    Tube,
    Focal,
}

impl Which {
    pub fn name(self) -> &'static str {
        match self {
            Which::Tube => "tube",
            Which::Focal => "focal",
        }
    }
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    E,
    F,
    G,
    L,
    M,
    N,
    K,
    H,
    Kappa1,
    Kappa2,
}

impl Quantity {
    pub const ALL: [(&'static str, Quantity); 10] = [
        ("E", Quantity::E),
        ("F", Quantity::F),
        ("G", Quantity::G),
        ("l", Quantity::L),
        ("m", Quantity::M),
        ("n", Quantity::N),
        ("K", Quantity::K),
        ("H", Quantity::H),
        ("kappa1", Quantity::Kappa1),
        ("kappa2", Quantity::Kappa2),
    ];

    pub fn name(self) -> &'static str {
        Self::ALL.iter().find(|(_, q)| *q == self).map(|(n, _)| *n).unwrap_or("?")
    }

    /// True if the value changes sign with the surface normal.
    pub fn orientation_sensitive(self) -> bool {
        matches!(self, Quantity::L | Quantity::M | Quantity::N | Quantity::H | Quantity::Kappa1 | Quantity::Kappa2)
    }
}

/// A pointwise value the report checks against a known number.
#[derive(Clone, Debug, PartialEq)]
pub struct Anchor {
    pub name: String,
    pub surface: Which,
    pub quantity: Quantity,
    pub u: f64,
    pub v: f64,
    pub expected: f64,
    pub tolerance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Ply,
}

impl MeshFormat {
    pub fn extension(self) -> &'static str {
        match self {
            MeshFormat::Obj => "obj",
            MeshFormat::Ply => "ply",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "obj" => Some(MeshFormat::Obj),
            "ply" => Some(MeshFormat::Ply),
            _ => None,
        }
    }
}

/// Output file names, relative to the output directory. Mesh names get the
/// format's extension appended when they have none.
#[derive(Clone, Debug, PartialEq)]
pub struct Outputs {
    pub format: MeshFormat,
    pub tube_mesh: String,
    pub focal_mesh: String,
    pub fields_csv: String,
    pub report: String,
}

impl Outputs {
    pub fn mesh_file(&self, which: Which, format: MeshFormat) -> String {
        let stem = match which {
            Which::Tube => &self.tube_mesh,
            Which::Focal => &self.focal_mesh,
        };
        if Path::new(stem).extension().is_some() {
            stem.clone()
        } else {
            format!("{stem}.{}", format.extension())
        }
    }
}

#[derive(Clone, Debug)]
pub struct JobConfig {
    pub label: String,
    pub spec: TubeSpec,
    pub grid: GridSpec,
    pub anchors: Vec<Anchor>,
    pub outputs: Outputs,
    /// Where the text came from (a path or `builtin:<name>`).
    pub origin: String,
    /// SHA-256 of the configuration text, hex encoded.
    pub sha256: String,
    /// Tolerance overrides applied on top of the file, in order.
    pub overrides: Vec<(String, f64)>,
}

struct Ctx {
    constants: Vec<(String, f64)>,
}

impl Ctx {
    fn parse_ctx(&self, vars: &[&str]) -> ParseContext {
        let mut c = ParseContext::with_variables(vars);
        for (k, v) in &self.constants {
            c = c.constant(k, *v);
        }
        c
    }

    fn expr(&self, path: &str, text: &str, vars: &[&str]) -> Result<ExprTree, ConfigError> {
        parse_expr_with(text, &self.parse_ctx(vars))
            .map_err(|source| ConfigError::Expression { path: path.into(), source })
    }

    fn number(&self, path: &str, n: &Number) -> Result<f64, ConfigError> {
        let x = match n {
            Number::Value(x) => *x,
            Number::Expr(text) => self
                .expr(path, text, &[])?
                .eval(&[])
                .map_err(|source| ConfigError::Spec { path: path.into(), source })?,
        };
        if !x.is_finite() {
            return Err(invalid(path, "must be finite"));
        }
        Ok(x)
    }

    fn interval(&self, path: &str, r: &[Number; 2]) -> Result<Interval, ConfigError> {
        let lo = self.number(&format!("{path}[0]"), &r[0])?;
        let hi = self.number(&format!("{path}[1]"), &r[1])?;
        if !(hi > lo) {
            return Err(invalid(path, format!("empty range [{lo}, {hi}]")));
        }
        Ok(Interval::new(lo, hi))
    }

    fn triple(&self, path: &str, t: &[String; 3]) -> Result<[ExprTree; 3], ConfigError> {
        Ok([
            self.expr(&format!("{path}[0]"), &t[0], &["u"])?,
            self.expr(&format!("{path}[1]"), &t[1], &["u"])?,
            self.expr(&format!("{path}[2]"), &t[2], &["u"])?,
        ])
    }
}

fn required<'a, T>(path: &str, v: &'a Option<T>) -> Result<&'a T, ConfigError> {
    v.as_ref().ok_or_else(|| invalid(path, "missing field"))
}

fn analytic_curve(ctx: &Ctx, s: &RawSpine, label: &str) -> Result<CurveDef, ConfigError> {
    let comp = |name: &str, v: &Option<String>| -> Result<ExprTree, ConfigError> {
        let path = format!("spine.{name}");
        ctx.expr(&path, required(&path, v)?, &["u"])
    };
    Ok(CurveDef::new(
        [comp("x", &s.x)?, comp("y", &s.y)?, comp("z", &s.z)?],
        ctx.interval("spine.domain", &s.domain)?,
        label,
    ))
}

fn build_spine(ctx: &Ctx, s: &RawSpine, label: &str) -> Result<Spine, ConfigError> {
    match s.kind.as_str() {
        "analytic" => Ok(Spine::Analytic(analytic_curve(ctx, s, label)?)),
        "curvature" => {
            let kappa = ctx.expr("spine.kappa", required("spine.kappa", &s.kappa)?, &["u"])?;
            let span = ctx.interval("spine.domain", &s.domain)?;
            let anchor = match &s.anchor {
                Some(a) => ctx.number("spine.anchor", a)?,
                None => span.lo,
            };
            let nodes = s.nodes.unwrap_or(64);
            spine_from_curvature(&kappa, anchor, span, nodes)
                .map(Spine::Integrated)
                .map_err(|source| ConfigError::Spec { path: "spine".into(), source })
        }
        other => Err(invalid("spine.kind", format!("unknown kind {other:?} (expected \"analytic\" or \"curvature\")"))),
    }
}

fn build_darboux(ctx: &Ctx, raw: &RawConfig, label: &str) -> Result<DarbouxSource, ConfigError> {
    let d = required("darboux", &raw.darboux)?;
    match d.source.as_str() {
        "direct" => {
            let spine = required("spine", &raw.spine)?;
            if spine.kind != "analytic" {
                return Err(invalid("spine.kind", "a supplied Darboux frame needs an analytic spine"));
            }
            let scalar = |name: &str, v: &Option<String>| -> Result<ExprTree, ConfigError> {
                let path = format!("darboux.{name}");
                ctx.expr(&path, required(&path, v)?, &["u"])
            };
            Ok(DarbouxSource::Direct(DirectFrameDef {
                spine: analytic_curve(ctx, spine, label)?,
                t: ctx.triple("darboux.t", required("darboux.t", &d.t)?)?,
                y: ctx.triple("darboux.y", required("darboux.y", &d.y)?)?,
                u: ctx.triple("darboux.u", required("darboux.u", &d.u)?)?,
                kg: scalar("kg", &d.kg)?,
                kn: scalar("kn", &d.kn)?,
                taug: scalar("taug", &d.taug)?,
            }))
        }
        "host" => {
            let surf = required("darboux.surface", &d.surface)?;
            let curve = required("darboux.curve", &d.curve)?;
            let st = ["s", "t"];
            Ok(DarbouxSource::Host(HostSurfaceDef {
                components: [
                    ctx.expr("darboux.surface[0]", &surf[0], &st)?,
                    ctx.expr("darboux.surface[1]", &surf[1], &st)?,
                    ctx.expr("darboux.surface[2]", &surf[2], &st)?,
                ],
                s_of_u: ctx.expr("darboux.curve[0]", &curve[0], &["u"])?,
                t_of_u: ctx.expr("darboux.curve[1]", &curve[1], &["u"])?,
                domain: ctx.interval("darboux.domain", required("darboux.domain", &d.domain)?)?,
                label: label.into(),
            }))
        }
        "frenet" => {
            let spine = required("spine", &raw.spine)?;
            if spine.kind != "analytic" {
                return Err(invalid("spine.kind", "a rotated Frenet frame needs an analytic spine"));
            }
            let theta = d.theta.as_deref().unwrap_or("0");
            Ok(DarbouxSource::Rotated(RotatedFrenetDef {
                curve: analytic_curve(ctx, spine, label)?,
                theta: ctx.expr("darboux.theta", theta, &["u"])?,
            }))
        }
        other => Err(invalid(
            "darboux.source",
            format!("unknown source {other:?} (expected \"direct\", \"host\" or \"frenet\")"),
        )),
    }
}

fn grid_count(path: &str, n: i64) -> Result<usize, ConfigError> {
    if n < 2 {
        return Err(invalid(path, format!("needs at least 2 nodes, got {n}")));
    }
    usize::try_from(n).map_err(|_| invalid(path, "too large"))
}

/// Parses `--tol-override` style `key=value` text.
pub fn parse_override(text: &str) -> Result<(String, f64), ConfigError> {
    let (k, v) =
        text.split_once('=').ok_or_else(|| invalid("--tol-override", format!("expected key=value, got {text:?}")))?;
    let k = k.trim();
    let value: f64 = v
        .trim()
        .parse()
        .map_err(|_| invalid(format!("--tol-override.{k}"), format!("not a number: {:?}", v.trim())))?;
    Tolerances::default().set(k, value).map_err(|m| invalid(format!("--tol-override.{k}"), m))?;
    Ok((k.to_string(), value))
}

/// Parses and validates configuration text. `overrides` are applied after
/// the file's own `[tolerances]`.
pub fn parse_config(text: &str, origin: &str, overrides: &[(String, f64)]) -> Result<JobConfig, ConfigError> {
    let value: toml::Table = text.parse().map_err(|e: toml::de::Error| invalid("<file>", e.to_string().trim_end()))?;
    let raw: RawConfig = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        invalid(if path == "." { "<file>".into() } else { path }, e.into_inner().to_string())
    })?;

    let mut constants = Vec::new();
    for (k, v) in &raw.parameters {
        if !v.is_finite() {
            return Err(invalid(format!("parameters.{k}"), "must be finite"));
        }
        constants.push((k.clone(), *v));
    }
    let ctx = Ctx { constants };

    let mut tol = Tolerances::default();
    for (k, v) in &raw.tolerances {
        tol.set(k, *v).map_err(|m| invalid(format!("tolerances.{k}"), m))?;
    }
    for (k, v) in overrides {
        tol.set(k, *v).map_err(|m| invalid(format!("--tol-override.{k}"), m))?;
    }

    let label = raw.job.label.trim().to_string();
    if label.is_empty() || label.contains(['/', '\\']) {
        return Err(invalid("job.label", "must be a non-empty name without path separators"));
    }
    let r = ctx.number("job.radius", &raw.job.radius)?;
    if !(r > 0.0) {
        return Err(invalid("job.radius", format!("must be positive, got {r}")));
    }

    let u = ctx.interval("grid.u", &raw.grid.u)?;
    let v = ctx.interval("grid.v", &raw.grid.v)?;
    let n_u = grid_count("grid.n_u", raw.grid.n_u)?;
    let n_v = grid_count("grid.n_v", raw.grid.n_v)?;
    let grid = GridSpec::new(u, n_u, v, n_v).map_err(|source| ConfigError::Spec { path: "grid".into(), source })?;

    let spec = match raw.job.frame_mode.to_ascii_lowercase().as_str() {
        "frenet" => {
            if raw.darboux.is_some() {
                return Err(invalid("darboux", "only allowed with frame_mode = \"darboux\""));
            }
            let spine = build_spine(&ctx, required("spine", &raw.spine)?, &label)?;
            TubeSpec::frenet(spine, r, tol).map_err(|source| ConfigError::Spec { path: "spine".into(), source })?
        }
        "darboux" => {
            let src = build_darboux(&ctx, &raw, &label)?;
            TubeSpec::darboux(src, r, tol).map_err(|source| ConfigError::Spec { path: "darboux".into(), source })?
        }
        other => {
            return Err(invalid(
                "job.frame_mode",
                format!("unknown mode {other:?} (expected \"frenet\" or \"darboux\")"),
            ))
        }
    };

    let mut anchors = Vec::new();
    for (i, a) in raw.anchors.iter().enumerate() {
        let p = |f: &str| format!("anchors[{i}].{f}");
        let surface = match a.surface.as_str() {
            "tube" => Which::Tube,
            "focal" => Which::Focal,
            _ => return Err(invalid(p("surface"), "expected \"tube\" or \"focal\"")),
        };
        let quantity = Quantity::ALL
            .iter()
            .find(|(n, _)| *n == a.quantity)
            .map(|(_, q)| *q)
            .ok_or_else(|| invalid(p("quantity"), "expected one of E F G l m n K H kappa1 kappa2"))?;
        if !(a.tolerance >= 0.0) {
            return Err(invalid(p("tolerance"), "must be non-negative"));
        }
        anchors.push(Anchor {
            name: a.name.clone(),
            surface,
            quantity,
            u: ctx.number(&p("u"), &a.u)?,
            v: ctx.number(&p("v"), &a.v)?,
            expected: ctx.number(&p("expected"), &a.expected)?,
            tolerance: a.tolerance,
        });
    }

    let o = &raw.outputs;
    let format = match &o.format {
        None => MeshFormat::Ply,
        Some(f) => MeshFormat::parse(f).ok_or_else(|| invalid("outputs.format", "expected \"obj\" or \"ply\""))?,
    };
    let name = |v: &Option<String>, path: &str, default: String| -> Result<String, ConfigError> {
        let s = v.clone().unwrap_or(default);
        if s.is_empty() || s.contains(['/', '\\']) {
            return Err(invalid(path, "must be a plain file name"));
        }
        Ok(s)
    };
    let outputs = Outputs {
        format,
        tube_mesh: name(&o.tube_mesh, "outputs.tube_mesh", format!("{label}_tube"))?,
        focal_mesh: name(&o.focal_mesh, "outputs.focal_mesh", format!("{label}_focal"))?,
        fields_csv: name(&o.fields_csv, "outputs.fields_csv", format!("{label}_fields.csv"))?,
        report: name(&o.report, "outputs.report", format!("{label}_report.json"))?,
    };

    Ok(JobConfig {
        label,
        spec,
        grid,
        anchors,
        outputs,
        origin: origin.to_string(),
        sha256: hex::encode(Sha256::digest(text.as_bytes())),
        overrides: overrides.to_vec(),
    })
}

/// Reads a configuration from disk, or a bundled one given as `builtin:<name>`.
pub fn load_config(path: &Path, overrides: &[(String, f64)]) -> Result<JobConfig, ConfigError> {
    let s = path.to_string_lossy();
    if let Some(name) = s.strip_prefix("builtin:") {
        let text = bundled(name).ok_or_else(|| ConfigError::Io {
            path: path.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such bundled configuration"),
        })?;
        return parse_config(text, &s, overrides);
    }
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
    parse_config(&text, &s, overrides)
}

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

impl JobConfig {
    pub fn mode(&self) -> FrameMode {
        self.spec.mode()
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.spec.tol
    }
}
