//! Mesh and field writers (OBJ, ASCII PLY, CSV) and a PLY reader.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::config::MeshFormat;
use crate::mesh::GridMesh;

/// Shortest text that parses back to the same `f64`; exponent form for
/// very large or small magnitudes.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:?}")
    }
}

/// Writes Wavefront OBJ. OBJ has no per-vertex scalars, so the fields are
/// dropped; the returned flag says whether that happened.
pub fn write_obj<W: Write>(mesh: &GridMesh, mut w: W) -> io::Result<bool> {
    writeln!(w, "# {} sheet: {} vertices, {} faces", mesh.which, mesh.vertices.len(), mesh.faces.len())?;
    for p in &mesh.vertices {
        writeln!(w, "v {} {} {}", fmt_f64(p[0]), fmt_f64(p[1]), fmt_f64(p[2]))?;
    }
    for f in &mesh.faces {
        writeln!(w, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1)?;
    }
    w.flush()?;
    Ok(!mesh.field_names.is_empty())
}

pub fn write_ply<W: Write>(mesh: &GridMesh, mut w: W) -> io::Result<()> {
    writeln!(w, "ply")?;
    writeln!(w, "format ascii 1.0")?;
    writeln!(w, "comment {} sheet", mesh.which)?;
    writeln!(w, "element vertex {}", mesh.vertices.len())?;
    for axis in ["x", "y", "z"] {
        writeln!(w, "property double {axis}")?;
    }
    for name in &mesh.field_names {
        writeln!(w, "property double {name}")?;
    }
    writeln!(w, "element face {}", mesh.faces.len())?;
    writeln!(w, "property list uchar int vertex_indices")?;
    writeln!(w, "end_header")?;
    for (p, row) in mesh.vertices.iter().zip(&mesh.fields) {
        let mut line = format!("{} {} {}", fmt_f64(p[0]), fmt_f64(p[1]), fmt_f64(p[2]));
        for x in row {
            line.push(' ');
            line.push_str(&fmt_f64(*x));
        }
        writeln!(w, "{line}")?;
    }
    for f in &mesh.faces {
        writeln!(w, "4 {} {} {} {}", f[0], f[1], f[2], f[3])?;
    }
    w.flush()
}

/// Writes `mesh` in `format`; returns true if fields were dropped.
pub fn write_mesh<W: Write>(mesh: &GridMesh, format: MeshFormat, w: W) -> io::Result<bool> {
    match format {
        MeshFormat::Obj => write_obj(mesh, w),
        MeshFormat::Ply => write_ply(mesh, w).map(|_| false),
    }
}

/// Per-node table for both sheets: one row per grid node and sheet,
/// masked nodes carry their class and empty values.
pub fn write_fields_csv<W: Write>(meshes: &[&GridMesh], w: W) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["surface", "i", "j", "u", "v", "status", "x", "y", "z", "W", "K", "H"])?;
    for mesh in meshes {
        let mut rows: Vec<(usize, usize, Vec<String>)> = Vec::new();
        for ((p, f), &(i, j)) in mesh.vertices.iter().zip(&mesh.fields).zip(&mesh.nodes) {
            let mut r = vec![mesh.which.to_string(), i.to_string(), j.to_string(), fmt_f64(f[0]), fmt_f64(f[1])];
            r.push("regular".into());
            r.extend(p.iter().map(|x| fmt_f64(*x)));
            r.extend(f[2..].iter().map(|x| fmt_f64(*x)));
            rows.push((i, j, r));
        }
        for m in &mesh.masked {
            let mut r = vec![
                mesh.which.to_string(),
                m.i.to_string(),
                m.j.to_string(),
                fmt_f64(m.u),
                fmt_f64(m.v),
                m.class.name().to_string(),
            ];
            r.extend(vec![String::new(); 6]);
            rows.push((m.i, m.j, r));
        }
        rows.sort_by_key(|(i, j, _)| (*i, *j));
        for (_, _, r) in rows {
            out.write_record(&r)?;
        }
    }
    out.flush()
}

#[derive(Debug, Error)]
pub enum PlyError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

/// Contents of an ASCII PLY file with double vertex properties and quad or
/// polygon faces.
#[derive(Clone, Debug, PartialEq)]
pub struct PlyData {
    /// Vertex property names, `x y z` first.
    pub properties: Vec<String>,
    pub vertices: Vec<Vec<f64>>,
    pub faces: Vec<Vec<usize>>,
}

pub fn read_ply<R: BufRead>(r: R) -> Result<PlyData, PlyError> {
    let bad = |line: usize, m: &str| PlyError::Format { line, message: m.into() };
    let mut lines = r.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = || -> Result<(usize, String), PlyError> {
        match lines.next() {
            Some((n, l)) => Ok((n, l?)),
            None => Err(bad(0, "unexpected end of file")),
        }
    };
    let (n, magic) = next()?;
    if magic.trim() != "ply" {
        return Err(bad(n, "missing ply magic"));
    }
    let mut properties = Vec::new();
    let (mut n_vert, mut n_face) = (0usize, 0usize);
    let mut section = "";
    loop {
        let (n, line) = next()?;
        let t: Vec<&str> = line.split_whitespace().collect();
        match t.as_slice() {
            ["format", "ascii", "1.0"] => {}
            ["format", ..] => return Err(bad(n, "only ascii 1.0 is supported")),
            ["comment", ..] | [] => {}
            ["element", "vertex", c] => {
                n_vert = c.parse().map_err(|_| bad(n, "bad vertex count"))?;
                section = "vertex";
            }
            ["element", "face", c] => {
                n_face = c.parse().map_err(|_| bad(n, "bad face count"))?;
                section = "face";
            }
            ["property", "list", ..] if section == "face" => {}
            ["property", _, name] if section == "vertex" => properties.push(name.to_string()),
            ["end_header"] => break,
            _ => return Err(bad(n, "unsupported header line")),
        }
    }
    let mut vertices = Vec::with_capacity(n_vert);
    for _ in 0..n_vert {
        let (n, line) = next()?;
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|s| s.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad(n, "bad vertex value"))?;
        if row.len() != properties.len() {
            return Err(bad(n, "wrong number of vertex values"));
        }
        vertices.push(row);
    }
    let mut faces = Vec::with_capacity(n_face);
    for _ in 0..n_face {
        let (n, line) = next()?;
        let row: Vec<usize> = line
            .split_whitespace()
            .map(|s| s.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad(n, "bad face index"))?;
        if row.is_empty() || row[0] + 1 != row.len() || row[1..].iter().any(|&k| k >= n_vert) {
            return Err(bad(n, "malformed face"));
        }
        faces.push(row[1..].to_vec());
    }
    Ok(PlyData { properties, vertices, faces })
}
