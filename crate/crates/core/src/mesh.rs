//! Polygonal mesh model, JSON ingestion, validation and structured
//! generators for the benchmark geometries.
//!
//! The mesh file is a JSON object
//! `{ "nodes": [[r, z], ...], "elements": [[i0, i1, ...], ...] }` with
//! zero-based indices and counter-clockwise elements.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, VemError};
use crate::polygeom::{compute_geometry, point_on_segment, ElementGeometry, Polygon, Vec2};

/// Interior zig-zag offset of the concave split, relative to the cell width.
pub const CHEVRON_OFFSET: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
pub struct PolyMesh {
    pub nodes: Vec<Vec2>,
    pub elements: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshStats {
    /// Largest element diameter.
    pub h: f64,
    pub n_elements: usize,
    pub min_nv: usize,
    pub max_nv: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeshFile {
    nodes: Vec<[f64; 2]>,
    elements: Vec<Vec<usize>>,
}

impl PolyMesh {
    /// Builds and validates a mesh.
    pub fn new(nodes: Vec<Vec2>, elements: Vec<Vec<usize>>) -> Result<Self> {
        let mesh = Self { nodes, elements };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn polygon(&self, e: usize) -> Result<Polygon> {
        Polygon::new(self.elements[e].iter().map(|&i| self.nodes[i]).collect())
            .map_err(|err| err.at_element(e))
    }

    pub fn geometry(&self, e: usize) -> Result<(Polygon, ElementGeometry)> {
        let p = self.polygon(e)?;
        let g = compute_geometry(&p).map_err(|err| err.at_element(e))?;
        Ok((p, g))
    }

    pub fn bbox(&self) -> (Vec2, Vec2) {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for n in &self.nodes {
            lo = lo.inf(n);
            hi = hi.sup(n);
        }
        (lo, hi)
    }

    pub fn bbox_diagonal(&self) -> f64 {
        let (lo, hi) = self.bbox();
        (hi - lo).norm()
    }

    pub fn stats(&self) -> Result<MeshStats> {
        let mut h: f64 = 0.0;
        let mut min_nv = usize::MAX;
        let mut max_nv = 0;
        for e in 0..self.n_elements() {
            let (_, g) = self.geometry(e)?;
            h = h.max(g.diameter);
            min_nv = min_nv.min(self.elements[e].len());
            max_nv = max_nv.max(self.elements[e].len());
        }
        Ok(MeshStats {
            h,
            n_elements: self.n_elements(),
            min_nv,
            max_nv,
        })
    }

    /// Checks index ranges, element validity, duplicate nodes and edge
    /// conformity.
    pub fn validate(&self) -> Result<()> {
        if self.nodes.is_empty() || self.elements.is_empty() {
            return Err(VemError::Mesh("mesh has no nodes or no elements".into()));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if !n.x.is_finite() || !n.y.is_finite() {
                return Err(VemError::Mesh(format!("node {i} has non-finite coordinates")));
            }
        }
        for (e, conn) in self.elements.iter().enumerate() {
            if let Some(&bad) = conn.iter().find(|&&i| i >= self.nodes.len()) {
                return Err(VemError::Mesh(format!(
                    "element {e} references node {bad}, mesh has {} nodes",
                    self.nodes.len()
                )));
            }
            self.geometry(e).map_err(|err| VemError::Mesh(err.to_string()))?;
        }
        self.check_duplicate_nodes()?;
        self.check_conformity()
    }

    /// Additional requirements for axisymmetric analysis: `r >= 0` at every
    /// node and strictly positive centroid radius.
    pub fn validate_axisymmetric(&self) -> Result<()> {
        let tol = 1e-12 * self.bbox_diagonal();
        for (i, n) in self.nodes.iter().enumerate() {
            if n.x < -tol {
                return Err(VemError::Mesh(format!("node {i} has negative radius {}", n.x)));
            }
        }
        for e in 0..self.n_elements() {
            let (_, g) = self.geometry(e)?;
            if g.centroid.x <= 0.0 {
                return Err(VemError::Mesh(format!(
                    "element {e} centroid has r = {} <= 0",
                    g.centroid.x
                )));
            }
        }
        Ok(())
    }

    fn check_duplicate_nodes(&self) -> Result<()> {
        let tol = 1e-12 * self.bbox_diagonal();
        let mut order: Vec<usize> = (0..self.nodes.len()).collect();
        order.sort_by(|&a, &b| self.nodes[a].x.total_cmp(&self.nodes[b].x));
        for (k, &i) in order.iter().enumerate() {
            for &j in &order[k + 1..] {
                if self.nodes[j].x - self.nodes[i].x > tol {
                    break;
                }
                if (self.nodes[j] - self.nodes[i]).norm() <= tol {
                    return Err(VemError::Mesh(format!("nodes {i} and {j} are duplicates")));
                }
            }
        }
        Ok(())
    }

    fn check_conformity(&self) -> Result<()> {
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for (e, conn) in self.elements.iter().enumerate() {
            let n = conn.len();
            for k in 0..n {
                let key = (conn[k], conn[(k + 1) % n]);
                if let Some(other) = directed.insert(key, e) {
                    return Err(VemError::Mesh(format!(
                        "edge ({}, {}) appears with the same orientation in elements {other} and {e}",
                        key.0, key.1
                    )));
                }
            }
        }
        // A boundary edge that contains another boundary node is a hanging
        // node between two elements.
        let boundary = self.boundary_edges();
        let mut bnodes: Vec<usize> = boundary.iter().flat_map(|b| [b.nodes.0, b.nodes.1]).collect();
        bnodes.sort_unstable();
        bnodes.dedup();
        let tol = 1e-10 * self.bbox_diagonal();
        for b in &boundary {
            let (pa, pb) = (self.nodes[b.nodes.0], self.nodes[b.nodes.1]);
            let (lo, hi) = (pa.inf(&pb), pa.sup(&pb));
            for &i in &bnodes {
                if i == b.nodes.0 || i == b.nodes.1 {
                    continue;
                }
                let q = self.nodes[i];
                if q.x < lo.x - tol || q.x > hi.x + tol || q.y < lo.y - tol || q.y > hi.y + tol {
                    continue;
                }
                if point_on_segment(q, pa, pb, tol) {
                    return Err(VemError::Mesh(format!(
                        "non-conforming edge ({}, {}) of element {}: node {i} lies on it",
                        b.nodes.0, b.nodes.1, b.element
                    )));
                }
            }
        }
        Ok(())
    }

    /// Edges used by exactly one element, oriented as in that element.
    pub fn boundary_edges(&self) -> Vec<BoundaryEdge> {
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for conn in &self.elements {
            let n = conn.len();
            for k in 0..n {
                let (a, b) = (conn[k], conn[(k + 1) % n]);
                *count.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        let mut out = Vec::new();
        for (e, conn) in self.elements.iter().enumerate() {
            let n = conn.len();
            for k in 0..n {
                let (a, b) = (conn[k], conn[(k + 1) % n]);
                if count[&(a.min(b), a.max(b))] == 1 {
                    out.push(BoundaryEdge {
                        element: e,
                        nodes: (a, b),
                    });
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let file = MeshFile {
            nodes: self.nodes.iter().map(|n| [n.x, n.y]).collect(),
            elements: self.elements.clone(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MeshFile = serde_json::from_str(text)
            .map_err(|e| VemError::Mesh(format!("schema violation: {e}")))?;
        Self::new(
            file.nodes.iter().map(|c| Vec2::new(c[0], c[1])).collect(),
            file.elements,
        )
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub element: usize,
    pub nodes: (usize, usize),
}

pub fn load_mesh(path: impl AsRef<Path>) -> Result<PolyMesh> {
    let text = fs::read_to_string(path)?;
    PolyMesh::from_json(&text)
}

/// Structured grid on the unit parameter square, optionally with each cell
/// split into two concave hexagons by a zig-zag interior edge. Returns
/// parameter-space coordinates.
fn structured_param(nu: usize, nv: usize, concave: bool) -> (Vec<[f64; 2]>, Vec<Vec<usize>>) {
    let mut nodes: Vec<[f64; 2]> = Vec::new();
    let corner = |i: usize, j: usize| j * (nu + 1) + i;
    for j in 0..=nv {
        for i in 0..=nu {
            nodes.push([i as f64 / nu as f64, j as f64 / nv as f64]);
        }
    }
    let mut elements = Vec::new();
    if !concave {
        for j in 0..nv {
            for i in 0..nu {
                elements.push(vec![
                    corner(i, j),
                    corner(i + 1, j),
                    corner(i + 1, j + 1),
                    corner(i, j + 1),
                ]);
            }
        }
        return (nodes, elements);
    }

    // Midpoints of the constant-v edges, shared between vertically adjacent
    // cells.
    let mid_base = nodes.len();
    for j in 0..=nv {
        for i in 0..nu {
            nodes.push([(i as f64 + 0.5) / nu as f64, j as f64 / nv as f64]);
        }
    }
    let mid = |i: usize, j: usize| mid_base + j * nu + i;
    let du = 1.0 / nu as f64;
    let dv = 1.0 / nv as f64;
    for j in 0..nv {
        for i in 0..nu {
            let um = (i as f64 + 0.5) * du;
            let v0 = j as f64 * dv;
            let z1 = nodes.len();
            nodes.push([um + CHEVRON_OFFSET * du, v0 + dv / 3.0]);
            let z2 = nodes.len();
            nodes.push([um - CHEVRON_OFFSET * du, v0 + 2.0 * dv / 3.0]);
            elements.push(vec![corner(i, j), mid(i, j), z1, z2, mid(i, j + 1), corner(i, j + 1)]);
            elements.push(vec![mid(i, j), corner(i + 1, j), corner(i + 1, j + 1), mid(i, j + 1), z2, z1]);
        }
    }
    (nodes, elements)
}

fn check_counts(n1: usize, n2: usize) -> Result<()> {
    if n1 == 0 || n2 == 0 {
        return Err(VemError::InvalidInput("cell counts must be at least 1".into()));
    }
    Ok(())
}

/// Rectangle `[a, b] x [z0, z1]` in the r-z plane: the wall of a hollow
/// cylinder.
pub fn gen_annulus(a: f64, b: f64, z0: f64, z1: f64, n_r: usize, n_z: usize, concave: bool) -> Result<PolyMesh> {
    if !(0.0 < a && a < b) || !(z0 < z1) {
        return Err(VemError::InvalidInput(format!(
            "annulus bounds invalid: a={a}, b={b}, z0={z0}, z1={z1}"
        )));
    }
    check_counts(n_r, n_z)?;
    let (param, elements) = structured_param(n_r, n_z, concave);
    let nodes = param
        .iter()
        .map(|p| Vec2::new(a + (b - a) * p[0], z0 + (z1 - z0) * p[1]))
        .collect();
    PolyMesh::new(nodes, elements)
}

/// Quarter annulus `a <= rho <= b`, `0 <= theta <= pi/2` (theta from the
/// r-axis): the upper half of a hollow sphere's meridian section.
pub fn gen_half_disk_shell(a: f64, b: f64, n_r: usize, n_theta: usize, concave: bool) -> Result<PolyMesh> {
    if !(0.0 < a && a < b) {
        return Err(VemError::InvalidInput(format!("shell radii invalid: a={a}, b={b}")));
    }
    check_counts(n_r, n_theta)?;
    let (param, elements) = structured_param(n_r, n_theta, concave);
    let nodes = param
        .iter()
        .map(|p| {
            let rho = a + (b - a) * p[0];
            let th = FRAC_PI_2 * p[1];
            // Pin the axis and equator exactly.
            let (s, c) = if p[1] == 1.0 {
                (1.0, 0.0)
            } else if p[1] == 0.0 {
                (0.0, 1.0)
            } else {
                th.sin_cos()
            };
            Vec2::new(rho * c, rho * s)
        })
        .collect();
    PolyMesh::new(nodes, elements)
}

/// Plate cross-section `[0, r_o] x [0, t]`.
pub fn gen_plate(r_o: f64, t: f64, n_r: usize, n_t: usize, concave: bool) -> Result<PolyMesh> {
    if !(r_o > 0.0 && t > 0.0) {
        return Err(VemError::InvalidInput(format!("plate dimensions invalid: r_o={r_o}, t={t}")));
    }
    check_counts(n_r, n_t)?;
    let (param, elements) = structured_param(n_r, n_t, concave);
    let nodes = param.iter().map(|p| Vec2::new(r_o * p[0], t * p[1])).collect();
    PolyMesh::new(nodes, elements)
}
