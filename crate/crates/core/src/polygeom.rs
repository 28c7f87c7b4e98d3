//! Geometric kernels for simple polygons.
//!
//! Vertices are stored counter-clockwise. Edge `j` runs from vertex `j` to
//! vertex `j + 1` (cyclic) and carries an outward unit normal.

use nalgebra::Vector2;

use crate::error::{Result, VemError};

pub type Vec2 = Vector2<f64>;

/// Relative area threshold below which a polygon is treated as degenerate.
pub const DEGENERATE_AREA_REL: f64 = 1e-14;

/// A simple, counter-clockwise polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Vec2>,
}

impl Polygon {
    /// Validates vertex count, distinct consecutive vertices, simplicity and
    /// orientation.
    pub fn new(vertices: Vec<Vec2>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(VemError::DegenerateElement(format!(
                "polygon needs at least 3 vertices, got {n}"
            )));
        }
        if vertices.iter().any(|v| !v.x.is_finite() || !v.y.is_finite()) {
            return Err(VemError::InvalidInput("non-finite vertex coordinate".into()));
        }
        let scale = max_pairwise_distance(&vertices);
        for j in 0..n {
            let d = (vertices[(j + 1) % n] - vertices[j]).norm();
            if d <= 1e-12 * scale {
                return Err(VemError::DegenerateElement(format!(
                    "vertices {j} and {} coincide",
                    (j + 1) % n
                )));
            }
        }
        let area = signed_area(&vertices);
        if area.abs() <= DEGENERATE_AREA_REL * scale * scale {
            return Err(VemError::DegenerateElement(format!(
                "area {area:e} is zero to round-off"
            )));
        }
        if area < 0.0 {
            return Err(VemError::Orientation(area));
        }
        if let Some((i, j)) = first_self_intersection(&vertices) {
            return Err(VemError::DegenerateElement(format!(
                "edges {i} and {j} intersect"
            )));
        }
        Ok(Self { vertices })
    }

    pub fn from_coords(coords: &[[f64; 2]]) -> Result<Self> {
        Self::new(coords.iter().map(|c| Vec2::new(c[0], c[1])).collect())
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn translated(&self, shift: Vec2) -> Self {
        Self {
            vertices: self.vertices.iter().map(|v| v + shift).collect(),
        }
    }

    /// Even-odd point containment. Points exactly on an edge count as
    /// outside.
    pub fn contains(&self, p: Vec2) -> bool {
        let n = self.vertices.len();
        let mut inside = false;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            if point_on_segment(p, a, b, 1e-14 * (b - a).norm().max(1e-300)) {
                return false;
            }
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

/// Derived quantities of one polygonal element.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementGeometry {
    pub area: f64,
    pub centroid: Vec2,
    pub diameter: f64,
    pub edge_lengths: Vec<f64>,
    pub edge_normals: Vec<Vec2>,
}

impl ElementGeometry {
    pub fn n_vertices(&self) -> usize {
        self.edge_lengths.len()
    }

    pub fn perimeter(&self) -> f64 {
        self.edge_lengths.iter().sum()
    }
}

pub fn compute_geometry(poly: &Polygon) -> Result<ElementGeometry> {
    let v = poly.vertices();
    let n = v.len();
    let diameter = max_pairwise_distance(v);

    // Shoelace area and first moments.
    let mut a2 = 0.0;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for j in 0..n {
        let p = v[j];
        let q = v[(j + 1) % n];
        let cross = p.x * q.y - q.x * p.y;
        a2 += cross;
        cx += (p.x + q.x) * cross;
        cy += (p.y + q.y) * cross;
    }
    let area = 0.5 * a2;
    if area <= DEGENERATE_AREA_REL * diameter * diameter {
        return Err(VemError::DegenerateElement(format!("area {area:e}")));
    }
    let centroid = Vec2::new(cx / (6.0 * area), cy / (6.0 * area));

    let mut edge_lengths = Vec::with_capacity(n);
    let mut edge_normals = Vec::with_capacity(n);
    for j in 0..n {
        let d = v[(j + 1) % n] - v[j];
        let len = d.norm();
        edge_lengths.push(len);
        edge_normals.push(Vec2::new(d.y / len, -d.x / len));
    }

    Ok(ElementGeometry {
        area,
        centroid,
        diameter,
        edge_lengths,
        edge_normals,
    })
}

/// Scaled monomial coordinates `(xi, eta)` of `point` relative to the
/// element centroid and diameter.
pub fn scaled_monomials(geom: &ElementGeometry, point: Vec2) -> (f64, f64) {
    let d = (point - geom.centroid) / geom.diameter;
    (d.x, d.y)
}

pub fn signed_area(vertices: &[Vec2]) -> f64 {
    let n = vertices.len();
    let mut a2 = 0.0;
    for j in 0..n {
        let p = vertices[j];
        let q = vertices[(j + 1) % n];
        a2 += p.x * q.y - q.x * p.y;
    }
    0.5 * a2
}

fn max_pairwise_distance(vertices: &[Vec2]) -> f64 {
    let mut h: f64 = 0.0;
    for (i, p) in vertices.iter().enumerate() {
        for q in &vertices[i + 1..] {
            h = h.max((p - q).norm());
        }
    }
    h
}

fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

pub(crate) fn point_on_segment(p: Vec2, a: Vec2, b: Vec2, tol: f64) -> bool {
    let ab = b - a;
    let len = ab.norm();
    if len == 0.0 {
        return (p - a).norm() <= tol;
    }
    let dist = cross(ab, p - a).abs() / len;
    if dist > tol {
        return false;
    }
    let t = (p - a).dot(&ab) / (len * len);
    (-tol / len..=1.0 + tol / len).contains(&t)
}

fn segments_intersect(p1: Vec2, p2: Vec2, q1: Vec2, q2: Vec2) -> bool {
    let d1 = cross(q2 - q1, p1 - q1);
    let d2 = cross(q2 - q1, p2 - q1);
    let d3 = cross(p2 - p1, q1 - p1);
    let d4 = cross(p2 - p1, q2 - p1);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let tol = 1e-14 * ((p2 - p1).norm() + (q2 - q1).norm());
    point_on_segment(p1, q1, q2, tol)
        || point_on_segment(p2, q1, q2, tol)
        || point_on_segment(q1, p1, p2, tol)
        || point_on_segment(q2, p1, p2, tol)
}

/// Returns the first pair of non-adjacent edges that touch or cross.
fn first_self_intersection(v: &[Vec2]) -> Option<(usize, usize)> {
    let n = v.len();
    if n < 4 {
        return None;
    }
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]) {
                return Some((i, j));
            }
        }
    }
    None
}
