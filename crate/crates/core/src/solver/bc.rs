//! Geometric node selection, homogeneous constraints and external loads.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Result, VemError};
use crate::mesh::PolyMesh;
use crate::polygeom::Vec2;

/// Predicate tolerance relative to the mesh bounding-box diagonal.
pub const SELECT_TOL_REL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    R,
    Z,
}

impl Direction {
    pub fn offset(self) -> usize {
        match self {
            Direction::R => 0,
            Direction::Z => 1,
        }
    }
}

/// Geometric node predicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "select", rename_all = "snake_case", deny_unknown_fields)]
pub enum NodeSelector {
    /// Nodes with the given coordinate value.
    Coord { axis: Direction, value: f64 },
    /// Nodes at the minimum or maximum of a coordinate over the mesh.
    Min { axis: Direction },
    Max { axis: Direction },
    /// Nodes on the symmetry axis `r = 0`.
    Axis,
    /// Nodes at distance `value` from the origin.
    Radius { value: f64 },
    /// The node at a given point.
    Point { r: f64, z: f64 },
    /// Nodes satisfying all of the listed predicates.
    All { of: Vec<NodeSelector> },
}

impl NodeSelector {
    fn matches(&self, p: Vec2, lo: Vec2, hi: Vec2, tol: f64) -> bool {
        let coord = |d: Direction| match d {
            Direction::R => p.x,
            Direction::Z => p.y,
        };
        match self {
            NodeSelector::Coord { axis, value } => (coord(*axis) - value).abs() <= tol,
            NodeSelector::Min { axis } => {
                let m = if *axis == Direction::R { lo.x } else { lo.y };
                (coord(*axis) - m).abs() <= tol
            }
            NodeSelector::Max { axis } => {
                let m = if *axis == Direction::R { hi.x } else { hi.y };
                (coord(*axis) - m).abs() <= tol
            }
            NodeSelector::Axis => p.x.abs() <= tol,
            NodeSelector::Radius { value } => (p.norm() - value).abs() <= tol,
            NodeSelector::Point { r, z } => (p - Vec2::new(*r, *z)).norm() <= tol,
            NodeSelector::All { of } => of.iter().all(|s| s.matches(p, lo, hi, tol)),
        }
    }

    /// Selected node indices in ascending order. Errors when nothing
    /// matches.
    pub fn select(&self, mesh: &PolyMesh) -> Result<Vec<usize>> {
        let (lo, hi) = mesh.bbox();
        let tol = SELECT_TOL_REL * mesh.bbox_diagonal();
        let nodes: Vec<usize> = (0..mesh.n_nodes())
            .filter(|&i| self.matches(mesh.nodes[i], lo, hi, tol))
            .collect();
        if nodes.is_empty() {
            return Err(VemError::InvalidInput(format!("selector {self:?} matches no node")));
        }
        Ok(nodes)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Support {
    pub nodes: NodeSelector,
    pub fix: Vec<Direction>,
}

/// Map from global dofs (`2 * node + direction`) to free equation numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct DofMap {
    map: Vec<Option<usize>>,
    n_free: usize,
}

impl DofMap {
    pub fn new(n_nodes: usize, fixed: &BTreeSet<usize>) -> Self {
        let mut n_free = 0;
        let map = (0..2 * n_nodes)
            .map(|d| {
                if fixed.contains(&d) {
                    None
                } else {
                    n_free += 1;
                    Some(n_free - 1)
                }
            })
            .collect();
        Self { map, n_free }
    }

    pub fn from_supports(mesh: &PolyMesh, supports: &[Support]) -> Result<Self> {
        let mut fixed = BTreeSet::new();
        for s in supports {
            if s.fix.is_empty() {
                return Err(VemError::InvalidInput("support fixes no direction".into()));
            }
            for n in s.nodes.select(mesh)? {
                for d in &s.fix {
                    fixed.insert(2 * n + d.offset());
                }
            }
        }
        Ok(Self::new(mesh.n_nodes(), &fixed))
    }

    pub fn n_free(&self) -> usize {
        self.n_free
    }

    pub fn n_total(&self) -> usize {
        self.map.len()
    }

    pub fn free(&self, dof: usize) -> Option<usize> {
        self.map[dof]
    }

    pub fn is_fixed(&self, dof: usize) -> bool {
        self.map[dof].is_none()
    }

    /// Free-equation map of an element's local dofs.
    pub fn element_map(&self, conn: &[usize]) -> Vec<Option<usize>> {
        conn.iter().flat_map(|&n| [self.map[2 * n], self.map[2 * n + 1]]).collect()
    }

    pub fn restrict(&self, full: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.n_free);
        for (d, m) in self.map.iter().enumerate() {
            if let Some(i) = m {
                out[*i] = full[d];
            }
        }
        out
    }

    pub fn expand(&self, free: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.map.len(), self.map.iter().map(|m| m.map_or(0.0, |i| free[i])))
    }
}

/// External load with unit load factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Load {
    /// Pressure `p` on boundary edges whose end nodes are both selected,
    /// acting against the outward normal (positive = compressive).
    Pressure { on: NodeSelector, p: f64 },
    /// Nodal force, already integrated around the circumference.
    Point { at: NodeSelector, dir: Direction, value: f64 },
    /// Circumferential line load per unit length, `2 pi r w` at each node.
    Line { at: NodeSelector, dir: Direction, w: f64 },
}

/// Measure factor applied to loads: `2 pi r` (axisymmetric) or the
/// out-of-plane thickness (planar).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LoadMeasure {
    Axisymmetric,
    Planar { thickness: f64 },
}

impl LoadMeasure {
    fn weight(self, r: f64) -> f64 {
        match self {
            LoadMeasure::Axisymmetric => 2.0 * PI * r,
            LoadMeasure::Planar { thickness } => thickness,
        }
    }
}

/// Assembles the reference external force vector (length `2N`).
pub fn assemble_loads(mesh: &PolyMesh, loads: &[Load], measure: LoadMeasure) -> Result<DVector<f64>> {
    let mut f = DVector::zeros(2 * mesh.n_nodes());
    for load in loads {
        match load {
            Load::Pressure { on, p } => {
                let sel: BTreeSet<usize> = on.select(mesh)?.into_iter().collect();
                let mut hit = 0;
                for edge in mesh.boundary_edges() {
                    let (a, b) = edge.nodes;
                    if !(sel.contains(&a) && sel.contains(&b)) {
                        continue;
                    }
                    hit += 1;
                    let d = mesh.nodes[b] - mesh.nodes[a];
                    let len = d.norm();
                    let n_out = Vec2::new(d.y, -d.x) / len;
                    for node in [a, b] {
                        let w = measure.weight(mesh.nodes[node].x) * 0.5 * len * p;
                        f[2 * node] -= w * n_out.x;
                        f[2 * node + 1] -= w * n_out.y;
                    }
                }
                if hit == 0 {
                    return Err(VemError::InvalidInput(format!(
                        "pressure selector {on:?} matches no boundary edge"
                    )));
                }
            }
            Load::Point { at, dir, value } => {
                for n in at.select(mesh)? {
                    f[2 * n + dir.offset()] += value;
                }
            }
            Load::Line { at, dir, w } => {
                for n in at.select(mesh)? {
                    f[2 * n + dir.offset()] += measure.weight(mesh.nodes[n].x) * w;
                }
            }
        }
    }
    Ok(f)
}
