#![allow(dead_code)]

use std::f64::consts::TAU;

use axivem::polygeom::{Polygon, Vec2};
use proptest::prelude::*;

/// Random star-shaped polygon (convex or concave), counter-clockwise, with
/// its star centre.
pub fn star_polygon() -> impl Strategy<Value = (Polygon, Vec2)> {
    (3usize..=9)
        .prop_flat_map(|n| {
            (
                // Angular gaps stay below pi so the centre is in the kernel.
                prop::collection::vec((0.0..if n == 3 { 0.45f64 } else { 0.8 }, 0.3..1.0f64), n),
                -5.0..5.0f64,
                -5.0..5.0f64,
                -2.0..1.0f64,
            )
        })
        .prop_map(|(verts, cx, cy, log_scale)| {
            let n = verts.len();
            let scale = 10f64.powf(log_scale);
            let c = Vec2::new(cx, cy);
            let pts: Vec<Vec2> = verts
                .iter()
                .enumerate()
                .map(|(i, &(jitter, r))| {
                    let th = TAU * (i as f64 + jitter) / n as f64;
                    c + Vec2::new(th.cos(), th.sin()) * (r * scale)
                })
                .collect();
            (Polygon::new(pts).expect("star polygon is valid"), c)
        })
}

/// Point strictly inside a star polygon: inside one fan triangle, away from
/// the boundary.
pub fn interior_point(poly: &Polygon, c: Vec2, edge: usize, s: f64, t: f64) -> Vec2 {
    let v = poly.vertices();
    let i = edge % v.len();
    let a = v[i] - c;
    let b = v[(i + 1) % v.len()] - c;
    c + (a * s + b * (1.0 - s)) * t
}

/// Random linear displacement field coefficients.
pub fn linear_field() -> impl Strategy<Value = [f64; 6]> {
    prop::array::uniform6(-1.0..1.0f64)
}
