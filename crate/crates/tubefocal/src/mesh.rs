//! Sampling a sheet on the grid into a quad mesh with per-vertex fields.

use rayon::prelude::*;
use thiserror::Error;
use tubefocal_core::tubefocal::{BScalar, ClosedForms, FrameAt, GridSpec, MaskClass, TubeSpec};

use crate::config::Which;

/// Every node of the sheet was masked.
#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
#[error("the {which} sheet has no regular grid nodes ({masked} masked)")]
pub struct EmptyMesh {
    pub which: Which,
    pub masked: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaskedNode {
    pub i: usize,
    pub j: usize,
    pub u: f64,
    pub v: f64,
    pub class: MaskClass,
}

/// Unmasked grid nodes as vertices, quads between neighbouring nodes that
/// lie on the same regular branch.
#[derive(Clone, Debug, PartialEq)]
pub struct GridMesh {
    pub which: Which,
    pub n_u: usize,
    pub n_v: usize,
    pub vertices: Vec<[f64; 3]>,
    /// `(i, j)` grid index of each vertex.
    pub nodes: Vec<(usize, usize)>,
    pub field_names: Vec<&'static str>,
    /// One row per vertex, in `field_names` order.
    pub fields: Vec<Vec<f64>>,
    /// Vertex indices, counter-clockwise in `(v, u)`.
    pub faces: Vec<[usize; 4]>,
    pub masked: Vec<MaskedNode>,
}

impl GridMesh {
    pub fn field(&self, name: &str) -> Option<impl Iterator<Item = f64> + '_> {
        let k = self.field_names.iter().position(|n| *n == name)?;
        Some(self.fields.iter().map(move |row| row[k]))
    }
}

pub fn field_names(which: Which) -> Vec<&'static str> {
    match which {
        Which::Tube => vec!["u", "v", "W", "K", "H"],
        Which::Focal => vec!["u", "v", "W", "K_star", "H_star"],
    }
}

#[derive(Clone)]
struct Sample {
    point: [f64; 3],
    /// Faces never join nodes with different keys.
    branch: (bool, bool),
    values: [f64; 5],
}

type NodeResult = std::result::Result<Sample, MaskClass>;

fn denominator(frame: &FrameAt, v: f64) -> f64 {
    match frame {
        FrameAt::Frenet(a) => a.kappa * v.cos(),
        FrameAt::Darboux(a) => BScalar::new(a, v).b,
    }
}

fn sample_node(spec: &TubeSpec, frame: &FrameAt, which: Which, u: f64, v: f64) -> NodeResult {
    let (forms, jet): (ClosedForms, _) = match which {
        Which::Tube => (spec.tube_forms(frame, v).map_err(|e| MaskClass::of(&e))?, spec.tube_jet(frame, v)),
        Which::Focal => (
            spec.focal_forms(frame, v).map_err(|e| MaskClass::of(&e))?,
            spec.focal_jet(frame, v).map_err(|e| MaskClass::of(&e))?,
        ),
    };
    let x = jet.x;
    if !(x.x.is_finite() && x.y.is_finite() && x.z.is_finite()) {
        return Err(MaskClass::Evaluation);
    }
    let oriented = forms.forms.normal.dot(&jet.xu.cross(&jet.xv)) >= 0.0;
    let side = match which {
        Which::Tube => true,
        Which::Focal => denominator(frame, v) >= 0.0,
    };
    Ok(Sample {
        point: [x.x, x.y, x.z],
        branch: (oriented, side),
        values: [u, v, forms.forms.w(), forms.curv.k, forms.curv.h],
    })
}

fn sample_row(spec: &TubeSpec, grid: &GridSpec, which: Which, i: usize) -> Vec<NodeResult> {
    let u = grid.u_at(i);
    match spec.frame_at(u) {
        Ok(frame) => (0..grid.n_v).map(|j| sample_node(spec, &frame, which, u, grid.v_at(j))).collect(),
        Err(e) => vec![Err(MaskClass::of(&e)); grid.n_v],
    }
}

/// Samples the tube or focal sheet on `grid`. Rows are evaluated in
/// parallel on the current rayon pool; the result does not depend on the
/// number of threads.
pub fn sample_surface(spec: &TubeSpec, grid: &GridSpec, which: Which) -> Result<GridMesh, EmptyMesh> {
    let rows: Vec<Vec<NodeResult>> = (0..grid.n_u).into_par_iter().map(|i| sample_row(spec, grid, which, i)).collect();

    let mut index = vec![vec![None; grid.n_v]; grid.n_u];
    let mut mesh = GridMesh {
        which,
        n_u: grid.n_u,
        n_v: grid.n_v,
        vertices: Vec::new(),
        nodes: Vec::new(),
        field_names: field_names(which),
        fields: Vec::new(),
        faces: Vec::new(),
        masked: Vec::new(),
    };
    for (i, row) in rows.iter().enumerate() {
        for (j, node) in row.iter().enumerate() {
            match node {
                Ok(s) => {
                    index[i][j] = Some(mesh.vertices.len());
                    mesh.vertices.push(s.point);
                    mesh.nodes.push((i, j));
                    mesh.fields.push(s.values.to_vec());
                }
                Err(class) => mesh.masked.push(MaskedNode { i, j, u: grid.u_at(i), v: grid.v_at(j), class: *class }),
            }
        }
    }
    if mesh.vertices.is_empty() {
        return Err(EmptyMesh { which, masked: mesh.masked.len() });
    }

    let branch = |i: usize, j: usize| rows[i][j].as_ref().ok().map(|s| s.branch);
    for i in 0..grid.n_u - 1 {
        for j in 0..grid.n_v - 1 {
            let corners = [(i, j), (i, j + 1), (i + 1, j + 1), (i + 1, j)];
            let ids: Option<Vec<usize>> = corners.iter().map(|&(a, b)| index[a][b]).collect();
            let Some(ids) = ids else { continue };
            let b0 = branch(i, j);
            if corners.iter().all(|&(a, b)| branch(a, b) == b0) {
                mesh.faces.push([ids[0], ids[1], ids[2], ids[3]]);
            }
        }
    }
    Ok(mesh)
}
