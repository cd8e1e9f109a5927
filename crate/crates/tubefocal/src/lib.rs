//! Configuration, sampling, export and reporting on top of `tubefocal-core`.
//!
//! A job is one TOML file describing a spine, its frame, a tube radius and a
//! parameter grid. [`build`] writes the tube and focal meshes plus a field
//! table, [`verify`] writes the JSON verification report.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod export;
pub mod mesh;
pub mod report;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use tubefocal_core::exprcurve::{Curve, ExprTree, Interval};
use tubefocal_core::framekit::frenet_at;
use tubefocal_core::tubefocal::{spine_from_curvature, FrameAt};

pub use config::{load_config, parse_config, JobConfig, MeshFormat, Which};
pub use mesh::{sample_surface, GridMesh};
pub use report::{report_json, run_verify, VerifyOutcome};

/// Thread count from `TUBEFOCAL_THREADS`; unset or 0 means rayon's default.
pub fn thread_count() -> Result<usize> {
    match std::env::var("TUBEFOCAL_THREADS") {
        Err(_) => Ok(0),
        Ok(s) => s.trim().parse().with_context(|| format!("TUBEFOCAL_THREADS={s:?} is not a thread count")),
    }
}

pub fn thread_pool() -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(thread_count()?).build()?)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

/// Files written by [`build`], and any warnings raised along the way.
#[derive(Clone, Debug, Default)]
pub struct BuildOutput {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

/// Samples both sheets and writes the two meshes and the field table into
/// `out`. `format` overrides the configured mesh format.
pub fn build(cfg: &JobConfig, out: &Path, format: Option<MeshFormat>) -> Result<BuildOutput> {
    std::fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    let format = format.unwrap_or(cfg.outputs.format);
    let mut result = BuildOutput::default();
    let tube = sample_surface(&cfg.spec, &cfg.grid, Which::Tube)?;
    let focal = sample_surface(&cfg.spec, &cfg.grid, Which::Focal)?;
    for mesh in [&tube, &focal] {
        let path = out.join(cfg.outputs.mesh_file(mesh.which, format));
        let dropped =
            export::write_mesh(mesh, format, create(&path)?).with_context(|| format!("writing {}", path.display()))?;
        if dropped {
            result.warnings.push(format!(
                "{}: OBJ carries no vertex fields; dropped {}",
                path.display(),
                mesh.field_names.join(", ")
            ));
        }
        result.files.push(path);
    }
    let path = out.join(&cfg.outputs.fields_csv);
    export::write_fields_csv(&[&tube, &focal], create(&path)?)
        .with_context(|| format!("writing {}", path.display()))?;
    result.files.push(path);
    Ok(result)
}

/// Runs the verification and, if `out` is given, writes the report there.
pub fn verify(cfg: &JobConfig, out: Option<&Path>) -> Result<(VerifyOutcome, String, Option<PathBuf>)> {
    let outcome = run_verify(cfg);
    let json = report_json(cfg, &outcome, &report::timestamp());
    let path = match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
            let path = dir.join(&cfg.outputs.report);
            std::fs::write(&path, &json).with_context(|| format!("writing {}", path.display()))?;
            Some(path)
        }
        None => None,
    };
    Ok((outcome, json, path))
}

/// Builds and verifies both bundled examples into `out`.
pub fn reproduce_examples(
    out: &Path,
    format: Option<MeshFormat>,
    overrides: &[(String, f64)],
) -> Result<Vec<(JobConfig, BuildOutput, VerifyOutcome)>> {
    let mut all = Vec::new();
    for (name, text) in config::BUNDLED {
        let cfg = parse_config(text, &format!("builtin:{name}"), overrides)?;
        let mut built = build(&cfg, out, format)?;
        let (outcome, _, report) = verify(&cfg, Some(out))?;
        built.files.extend(report);
        all.push((cfg, built, outcome));
    }
    Ok(all)
}

/// Frame and curvature table along the spine at the grid's u-samples.
pub fn curve_info<W: Write>(cfg: &JobConfig, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let f = export::fmt_f64;
    let darboux = cfg.mode() == tubefocal_core::tubefocal::FrameMode::Darboux;
    let mut header = vec!["u", "x", "y", "z", "tx", "ty", "tz"];
    header.extend(if darboux {
        ["yx", "yy", "yz", "ux", "uy", "uz", "kg", "kn", "taug"]
    } else {
        ["n1x", "n1y", "n1z", "n2x", "n2y", "n2z", "kappa", "tau", "kappa_prime"]
    });
    header.push("status");
    out.write_record(&header)?;
    for i in 0..cfg.grid.n_u {
        let u = cfg.grid.u_at(i);
        let mut row = vec![f(u)];
        match cfg.spec.frame_at(u) {
            Ok(FrameAt::Frenet(a)) => {
                for v in [a.gamma, a.t, a.n1, a.n2] {
                    row.extend([f(v.x), f(v.y), f(v.z)]);
                }
                row.extend([f(a.kappa), f(a.tau), f(a.kappa_jet.d1()), "ok".into()]);
            }
            Ok(FrameAt::Darboux(a)) => {
                for v in [a.gamma, a.t, a.y, a.u] {
                    row.extend([f(v.x), f(v.y), f(v.z)]);
                }
                row.extend([f(a.kg), f(a.kn), f(a.taug), "ok".into()]);
            }
            Err(e) => {
                row.extend(vec![String::new(); header.len() - 2]);
                row.push(e.to_string());
            }
        }
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

/// Integrates the plane curve with curvature `kappa` and tabulates it.
pub fn spine_from_kappa<W: Write>(
    kappa: &str,
    anchor: f64,
    span: Interval,
    nodes: usize,
    samples: usize,
    w: W,
) -> Result<()> {
    let k: ExprTree = tubefocal_core::exprcurve::parse_expr(kappa).with_context(|| format!("kappa = {kappa:?}"))?;
    let spine = spine_from_curvature(&k, anchor, span, nodes)?;
    let tol = tubefocal_core::Tolerances::default();
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["u", "x", "y", "z", "kappa_target", "kappa_recovered"])?;
    let f = export::fmt_f64;
    for u in span.samples(samples.max(2)) {
        let p = spine.point(u)?;
        let target = k.eval1(u)?;
        let recovered = frenet_at(&spine, u, &tol).map(|a| f(a.kappa)).unwrap_or_default();
        out.write_record([f(u), f(p.x), f(p.y), f(p.z), f(target), recovered])?;
    }
    out.flush()?;
    Ok(())
}
