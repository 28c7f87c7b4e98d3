//! Mean value coordinates on simple (convex or concave) polygons.
//!
//! Angles are signed, so reflex configurations yield negative `alpha_i` and
//! possibly negative weights. Gradients use the weight-derivative form
//!
//! ```text
//! grad w_i = [c_{i-1}^perp / (1 + cos a_{i-1}) + c_i^perp / (1 + cos a_i)] / r_i + w_i e_i / r_i
//! grad phi_i = (grad w_i - phi_i * sum_j grad w_j) / sum_j w_j
//! ```
//!
//! which equals `(R_i - sum_j phi_j R_j) phi_i` but stays finite when a
//! weight vanishes.

use crate::error::{Result, VemError};
use crate::polygeom::{Polygon, Vec2};

/// Minimum distance to any vertex, relative to the polygon diameter.
pub const VERTEX_GUARD_REL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct MvcResult {
    pub values: Vec<f64>,
    pub gradients: Vec<Vec2>,
    /// Set when the evaluation point lies outside the polygon and the
    /// continuous extension was used.
    pub exterior: bool,
}

impl MvcResult {
    /// Interpolates nodal values with the shape functions.
    pub fn interpolate(&self, nodal: &[f64]) -> f64 {
        self.values.iter().zip(nodal).map(|(p, v)| p * v).sum()
    }
}

/// Shape functions at a point strictly inside `poly`.
pub fn mvc_shape(poly: &Polygon, x: Vec2) -> Result<MvcResult> {
    if !poly.contains(x) {
        return Err(VemError::OutOfDomain(format!(
            "({}, {}) is not strictly inside the polygon",
            x.x, x.y
        )));
    }
    evaluate(poly, x, false)
}

/// Like [`mvc_shape`], but evaluates the continuous extension of the
/// coordinates when `x` falls outside the polygon (this happens for the
/// centroid of strongly concave elements).
pub fn mvc_shape_extended(poly: &Polygon, x: Vec2) -> Result<MvcResult> {
    let exterior = !poly.contains(x);
    if exterior {
        log::warn!(
            "mean value coordinates evaluated outside the polygon at ({}, {})",
            x.x,
            x.y
        );
    }
    evaluate(poly, x, exterior)
}

fn evaluate(poly: &Polygon, x: Vec2, exterior: bool) -> Result<MvcResult> {
    let v = poly.vertices();
    let n = v.len();
    let h = diameter(v);

    let mut r = Vec::with_capacity(n);
    let mut e = Vec::with_capacity(n);
    for (i, vi) in v.iter().enumerate() {
        let s = vi - x;
        let ri = s.norm();
        if ri <= VERTEX_GUARD_REL * h {
            return Err(VemError::OutOfDomain(format!(
                "point coincides with vertex {i}"
            )));
        }
        r.push(ri);
        e.push(s / ri);
    }

    // alpha_i: signed angle subtended at x by edge (v_i, v_{i+1}).
    let mut alpha = Vec::with_capacity(n);
    for i in 0..n {
        let a = e[i];
        let b = e[(i + 1) % n];
        let ang = (a.x * b.y - a.y * b.x).atan2(a.dot(&b));
        if (std::f64::consts::PI - ang.abs()) <= 1e-12 {
            return Err(VemError::AngleDegenerate {
                index: i,
                angle: ang.abs(),
            });
        }
        alpha.push(ang);
    }
    let t: Vec<f64> = alpha.iter().map(|a| (0.5 * a).tan()).collect();

    let mut w = Vec::with_capacity(n);
    let mut grad_w = Vec::with_capacity(n);
    for i in 0..n {
        let im = (i + n - 1) % n;
        let wi = (t[im] + t[i]) / r[i];
        let c_prev = e[im] / r[im] - e[i] / r[i];
        let c_this = e[i] / r[i] - e[(i + 1) % n] / r[(i + 1) % n];
        let g = (perp(c_prev) / (1.0 + alpha[im].cos()) + perp(c_this) / (1.0 + alpha[i].cos()))
            / r[i]
            + e[i] * (wi / r[i]);
        w.push(wi);
        grad_w.push(g);
    }

    let w_sum: f64 = w.iter().sum();
    let w_scale: f64 = w.iter().map(|x| x.abs()).sum();
    if w_sum.abs() <= 1e-12 * w_scale {
        return Err(VemError::OutOfDomain(
            "mean value weights sum to zero".into(),
        ));
    }
    let grad_sum: Vec2 = grad_w.iter().sum();
    let values: Vec<f64> = w.iter().map(|wi| wi / w_sum).collect();
    let gradients = grad_w
        .iter()
        .zip(&values)
        .map(|(g, phi)| (g - grad_sum * *phi) / w_sum)
        .collect();

    Ok(MvcResult {
        values,
        gradients,
        exterior,
    })
}

fn perp(a: Vec2) -> Vec2 {
    Vec2::new(-a.y, a.x)
}

fn diameter(v: &[Vec2]) -> f64 {
    let mut h: f64 = 0.0;
    for (i, p) in v.iter().enumerate() {
        for q in &v[i + 1..] {
            h = h.max((p - q).norm());
        }
    }
    h
}
