//! Closed-form reference solutions for the pressure vessel and plate
//! benchmarks, error norms, nodal stress averaging and rate fitting.

use std::f64::consts::PI;

use nalgebra::{DVector, Vector4};

use crate::error::{Result, VemError};
use crate::mesh::PolyMesh;
use crate::mvc::mvc_shape_extended;
use crate::polygeom::Vec2;

/// Bisection tolerance on the plastic front radius.
pub const FRONT_TOL: f64 = 1e-10;

/// Stresses in `(rr, zz, rz, tt)` ordering plus radial displacement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialField {
    pub u_r: f64,
    pub sigma_r: f64,
    pub sigma_z: f64,
    pub sigma_rz: f64,
    pub sigma_t: f64,
}

fn check_vessel(p: f64, a: f64, b: f64, young: f64, nu: f64) -> Result<()> {
    if !(0.0 < a && a < b) || !(young > 0.0) || !(-1.0 < nu && nu < 0.5) || !p.is_finite() {
        return Err(VemError::InvalidInput(format!(
            "vessel parameters out of range: p={p}, a={a}, b={b}, E={young}, nu={nu}"
        )));
    }
    Ok(())
}

fn check_radius(r: f64, a: f64, b: f64) -> Result<()> {
    let tol = 1e-12 * b;
    if !(r >= a - tol && r <= b + tol) {
        return Err(VemError::OutOfDomain(format!("r = {r} outside [{a}, {b}]")));
    }
    Ok(())
}

/// Thick-walled cylinder under internal pressure, plane strain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LameCylinder {
    pub p: f64,
    pub a: f64,
    pub b: f64,
    pub young: f64,
    pub nu: f64,
}

impl LameCylinder {
    pub fn new(p: f64, a: f64, b: f64, young: f64, nu: f64) -> Result<Self> {
        check_vessel(p, a, b, young, nu)?;
        Ok(Self { p, a, b, young, nu })
    }

    pub fn at(&self, r: f64) -> Result<RadialField> {
        check_radius(r, self.a, self.b)?;
        let (p, a, b, nu) = (self.p, self.a, self.b, self.nu);
        let k = p * a * a / (b * b - a * a);
        Ok(RadialField {
            u_r: p * a * a * (1.0 + nu) * (b * b + r * r * (1.0 - 2.0 * nu)) / (r * self.young * (b * b - a * a)),
            sigma_r: k * (1.0 - b * b / (r * r)),
            sigma_z: 2.0 * nu * k,
            sigma_rz: 0.0,
            sigma_t: k * (1.0 + b * b / (r * r)),
        })
    }
}

/// Thick-walled sphere under internal pressure. `sigma_z` holds the
/// meridional normal stress, equal to the hoop stress.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LameSphere {
    pub p: f64,
    pub a: f64,
    pub b: f64,
    pub young: f64,
    pub nu: f64,
}

impl LameSphere {
    pub fn new(p: f64, a: f64, b: f64, young: f64, nu: f64) -> Result<Self> {
        check_vessel(p, a, b, young, nu)?;
        Ok(Self { p, a, b, young, nu })
    }

    pub fn at(&self, r: f64) -> Result<RadialField> {
        check_radius(r, self.a, self.b)?;
        let (p, a3, b3, nu) = (self.p, self.a.powi(3), self.b.powi(3), self.nu);
        let r3 = r.powi(3);
        let st = -p * a3 * (2.0 * r3 + b3) / (2.0 * r3 * (a3 - b3));
        Ok(RadialField {
            u_r: p * a3 / (self.young * r * r * (b3 - a3))
                * ((1.0 - nu) * (2.0 * r3 + b3) / 2.0 + nu * (b3 - r3)),
            sigma_r: p * a3 * (b3 - r3) / (r3 * (a3 - b3)),
            sigma_z: st,
            sigma_rz: 0.0,
            sigma_t: st,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlateSupport {
    Simple,
    Fixed,
}

/// Circular plate with a central point load, bending plus shear
/// deflection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlatePoint {
    pub load: f64,
    pub r_o: f64,
    pub t: f64,
    pub young: f64,
    pub nu: f64,
    pub support: PlateSupport,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateResponse {
    pub u_z: f64,
    pub m_r: f64,
    pub m_t: f64,
}

impl PlatePoint {
    pub fn new(load: f64, r_o: f64, t: f64, young: f64, nu: f64, support: PlateSupport) -> Result<Self> {
        if !(r_o > 0.0 && t > 0.0 && young > 0.0) || !(-1.0 < nu && nu < 0.5) {
            return Err(VemError::InvalidInput(format!(
                "plate parameters out of range: r_o={r_o}, t={t}, E={young}, nu={nu}"
            )));
        }
        Ok(Self { load, r_o, t, young, nu, support })
    }

    pub fn rigidity(&self) -> f64 {
        self.young * self.t.powi(3) / (12.0 * (1.0 - self.nu * self.nu))
    }

    /// Bending deflection, finite at the centre.
    pub fn bending_deflection(&self, r: f64) -> Result<f64> {
        if !(0.0..=self.r_o).contains(&r) {
            return Err(VemError::OutOfDomain(format!("r = {r} outside [0, {}]", self.r_o)));
        }
        let (p, ro, nu, d) = (self.load, self.r_o, self.nu, self.rigidity());
        let log_term = if r > 0.0 { r * r * (r / ro).ln() } else { 0.0 };
        Ok(match self.support {
            PlateSupport::Simple => {
                p / (16.0 * PI * d) * ((3.0 + nu) / (1.0 + nu) * (ro * ro - r * r) + 2.0 * log_term)
            }
            PlateSupport::Fixed => p * log_term / (8.0 * PI * d) + p * (ro * ro - r * r) / (16.0 * PI * d),
        })
    }

    /// Shear deflection, log-singular at the centre.
    pub fn shear_deflection(&self, r: f64) -> Result<f64> {
        if !(r > 0.0 && r <= self.r_o) {
            return Err(VemError::OutOfDomain(format!(
                "shear deflection is singular at r = 0; got r = {r}"
            )));
        }
        Ok(-self.load * self.t * self.t / (8.0 * PI * self.rigidity() * (1.0 - self.nu)) * (r / self.r_o).ln())
    }

    pub fn at(&self, r: f64) -> Result<PlateResponse> {
        let u_z = self.bending_deflection(r)? + self.shear_deflection(r)?;
        let (p, nu) = (self.load, self.nu);
        let l = (self.r_o / r).ln();
        let (m_r, m_t) = match self.support {
            PlateSupport::Simple => (
                p / (4.0 * PI) * (1.0 + nu) * l,
                p / (4.0 * PI) * ((1.0 + nu) * l + 1.0 - nu),
            ),
            PlateSupport::Fixed => (
                p / (4.0 * PI) * ((1.0 + nu) * l - 1.0),
                p / (4.0 * PI) * ((1.0 + nu) * l - nu),
            ),
        };
        Ok(PlateResponse { u_z, m_r, m_t })
    }
}

fn check_plastic(a: f64, b: f64, sigma_yield: f64) -> Result<()> {
    if !(0.0 < a && a < b) || !(sigma_yield > 0.0) {
        return Err(VemError::InvalidInput(format!(
            "plastic vessel parameters out of range: a={a}, b={b}, sigma_yield={sigma_yield}"
        )));
    }
    Ok(())
}

/// Root of the increasing function `f(c) = p` on `[a, b]` by bisection.
fn bisect_front(f: impl Fn(f64) -> f64, p: f64, a: f64, b: f64) -> Result<f64> {
    let (lo_p, hi_p) = (f(a), f(b));
    if !(p > lo_p && p <= hi_p) {
        return Err(VemError::PressureOutOfRange { p, lo: lo_p, hi: hi_p });
    }
    let (mut lo, mut hi) = (a, b);
    while hi - lo > FRONT_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Partially plastic plane strain cylinder (perfect plasticity).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HillCylinder {
    pub a: f64,
    pub b: f64,
    pub sigma_yield: f64,
}

impl HillCylinder {
    pub fn new(a: f64, b: f64, sigma_yield: f64) -> Result<Self> {
        check_plastic(a, b, sigma_yield)?;
        Ok(Self { a, b, sigma_yield })
    }

    fn k(&self) -> f64 {
        2.0 * self.sigma_yield / 3f64.sqrt()
    }

    /// Internal pressure that puts the front at `c`.
    pub fn pressure(&self, c: f64) -> f64 {
        self.k() * ((c / self.a).ln() + 0.5 * (1.0 - c * c / (self.b * self.b)))
    }

    pub fn front(&self, p: f64) -> Result<f64> {
        bisect_front(|c| self.pressure(c), p, self.a, self.b)
    }

    /// `(sigma_rr, sigma_tt)` at `r` for front `c`.
    pub fn stresses(&self, r: f64, c: f64) -> Result<(f64, f64)> {
        check_radius(r, self.a, self.b)?;
        check_radius(c, self.a, self.b)?;
        Ok(if r >= c { self.elastic_branch(r, c) } else { self.plastic_branch(r, c) })
    }

    pub fn elastic_branch(&self, r: f64, c: f64) -> (f64, f64) {
        let m = self.k() * c * c / (2.0 * self.b * self.b);
        let q = self.b * self.b / (r * r);
        (m * (1.0 - q), m * (1.0 + q))
    }

    pub fn plastic_branch(&self, r: f64, c: f64) -> (f64, f64) {
        let k = self.k();
        let l = (c / r).ln();
        let q = c * c / (2.0 * self.b * self.b);
        (k * (-0.5 - l + q), k * (0.5 - l + q))
    }
}

/// Partially plastic sphere (perfect plasticity).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HillSphere {
    pub a: f64,
    pub b: f64,
    pub sigma_yield: f64,
    pub young: f64,
    pub nu: f64,
}

impl HillSphere {
    pub fn new(a: f64, b: f64, sigma_yield: f64, young: f64, nu: f64) -> Result<Self> {
        check_plastic(a, b, sigma_yield)?;
        check_vessel(0.0, a, b, young, nu)?;
        Ok(Self { a, b, sigma_yield, young, nu })
    }

    pub fn pressure(&self, c: f64) -> f64 {
        2.0 * self.sigma_yield / 3.0 * (1.0 + 3.0 * (c / self.a).ln() - (c / self.b).powi(3))
    }

    pub fn front(&self, p: f64) -> Result<f64> {
        bisect_front(|c| self.pressure(c), p, self.a, self.b)
    }

    /// `(u_r, sigma_rr, sigma_tt)` at `r` for front `c`.
    pub fn fields(&self, r: f64, c: f64) -> Result<(f64, f64, f64)> {
        check_radius(r, self.a, self.b)?;
        check_radius(c, self.a, self.b)?;
        Ok(if r >= c { self.elastic_branch(r, c) } else { self.plastic_branch(r, c) })
    }

    pub fn elastic_branch(&self, r: f64, c: f64) -> (f64, f64, f64) {
        let (sy, e, nu) = (self.sigma_yield, self.young, self.nu);
        let m = 2.0 * c.powi(3) * sy / (3.0 * self.b.powi(3));
        let q = self.b.powi(3) / r.powi(3);
        (
            m / e * ((1.0 - 2.0 * nu) * r + (1.0 + nu) * self.b.powi(3) / (2.0 * r * r)),
            -m * (q - 1.0),
            m * (0.5 * q + 1.0),
        )
    }

    pub fn plastic_branch(&self, r: f64, c: f64) -> (f64, f64, f64) {
        let (sy, e, nu) = (self.sigma_yield, self.young, self.nu);
        let l = (c / r).ln();
        let cb = (c / self.b).powi(3);
        (
            r * sy / e * ((1.0 - nu) * (c / r).powi(3) - 2.0 / 3.0 * (1.0 - 2.0 * nu) * (1.0 + 3.0 * l - cb)),
            -2.0 * sy / 3.0 * (1.0 + 3.0 * l - cb),
            2.0 * sy / 3.0 * (0.5 - 3.0 * l + cb),
        )
    }
}

/// Theoretical limit pressure of the simply supported plate, tabulated for
/// `sigma_yield = 16, t = 1, r_o = 10`.
pub fn plate_limit_pressure(sigma_yield: f64, t: f64, r_o: f64) -> Result<f64> {
    if !(sigma_yield > 0.0 && t > 0.0 && r_o > 0.0) {
        return Err(VemError::InvalidInput("limit pressure inputs must be positive".into()));
    }
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * y;
    if close(sigma_yield, 16.0) && close(t, 1.0) && close(r_o, 10.0) {
        Ok(0.2609)
    } else {
        Err(VemError::NoTabulatedLimit { sigma_yield, thickness: t, radius: r_o })
    }
}

/// Absolute and relative L2 displacement error with a one-point centroid
/// rule over the cross-section. `u_h` holds nodal `(u_r, u_z)` pairs.
pub fn l2_error(mesh: &PolyMesh, u_h: &DVector<f64>, exact: impl Fn(Vec2) -> (f64, f64)) -> Result<(f64, f64)> {
    let mut err2 = 0.0;
    let mut ref2 = 0.0;
    for e in 0..mesh.n_elements() {
        let (poly, geom) = mesh.geometry(e)?;
        let shape = mvc_shape_extended(&poly, geom.centroid).map_err(|err| err.at_element(e))?;
        let conn = &mesh.elements[e];
        let uh_r = shape.interpolate(&conn.iter().map(|&n| u_h[2 * n]).collect::<Vec<_>>());
        let uh_z = shape.interpolate(&conn.iter().map(|&n| u_h[2 * n + 1]).collect::<Vec<_>>());
        let (ur, uz) = exact(geom.centroid);
        err2 += ((ur - uh_r).powi(2) + (uz - uh_z).powi(2)) * geom.area;
        ref2 += (ur * ur + uz * uz) * geom.area;
    }
    let abs = err2.sqrt();
    let rel = if ref2 > 0.0 { abs / ref2.sqrt() } else { f64::INFINITY };
    Ok((abs, rel))
}

/// Unweighted mean of the stresses of the elements sharing each node.
pub fn nodal_stress_average(mesh: &PolyMesh, element_stresses: &[Vector4<f64>]) -> Result<Vec<Vector4<f64>>> {
    if element_stresses.len() != mesh.n_elements() {
        return Err(VemError::InvalidInput(format!(
            "{} element stresses for {} elements",
            element_stresses.len(),
            mesh.n_elements()
        )));
    }
    let mut sum = vec![Vector4::zeros(); mesh.n_nodes()];
    let mut count = vec![0usize; mesh.n_nodes()];
    for (conn, s) in mesh.elements.iter().zip(element_stresses) {
        for &n in conn {
            sum[n] += s;
            count[n] += 1;
        }
    }
    Ok(sum
        .into_iter()
        .zip(count)
        .map(|(s, c)| if c > 0 { s / c as f64 } else { s })
        .collect())
}

/// Least-squares slope of `log(err)` against `log(h)`.
pub fn convergence_rate(pairs: &[(f64, f64)]) -> Result<f64> {
    if pairs.len() < 3 {
        return Err(VemError::InvalidInput(format!(
            "convergence rate needs at least 3 levels, got {}",
            pairs.len()
        )));
    }
    if pairs.windows(2).any(|w| !(w[1].0 < w[0].0)) {
        return Err(VemError::InvalidInput("mesh sizes must be strictly decreasing".into()));
    }
    if pairs.iter().any(|(h, e)| !(*h > 0.0 && *e > 0.0)) {
        return Err(VemError::InvalidInput("mesh sizes and errors must be positive".into()));
    }
    let n = pairs.len() as f64;
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Rotates a `(rr, zz, rz, tt)` stress at point `x` of the meridian plane
/// into spherical components `(rho-rho, phi-phi, rho-phi, theta-theta)`.
pub fn to_spherical(s: &Vector4<f64>, x: Vec2) -> Vector4<f64> {
    let n = x / x.norm();
    let t = Vec2::new(-n.y, n.x);
    let quad = |a: Vec2, b: Vec2| a.x * b.x * s[0] + a.y * b.y * s[1] + (a.x * b.y + a.y * b.x) * s[2];
    Vector4::new(quad(n, n), quad(t, t), quad(n, t), s[3])
}
