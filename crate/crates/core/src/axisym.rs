//! Axisymmetric virtual element.
//!
//! Coordinates are relabeled `r = x`, `z = y`. The in-plane strains come from
//! the VEM projection (`B2`); the hoop strain `u_r / R_E` uses mean value
//! coordinates evaluated at the element centroid (`Bt`). Strain ordering is
//! `(eps_r, eps_z, gamma_rz, eps_t)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix3, Matrix4, Vector4};

use crate::error::{Result, VemError};
use crate::j2::axi_elastic_c;
use crate::mvc::mvc_shape_extended;
use crate::polygeom::{ElementGeometry, Polygon};
use crate::vem::{build_projector, stabilization, ElementMatrices};

/// Minimum centroid radius relative to the element diameter.
pub const AXIS_GUARD_REL: f64 = 1e-10;

/// Axisymmetric modular matrices of an isotropic material.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiC {
    pub c: Matrix4<f64>,
    pub c_mu: Matrix4<f64>,
    pub young: f64,
    pub nu: f64,
    pub mu: f64,
    pub zeta: f64,
}

impl AxiC {
    pub fn new(young: f64, nu: f64) -> Result<Self> {
        if !(young > 0.0) || !(-1.0 < nu && nu < 0.5) {
            return Err(VemError::InvalidInput(format!(
                "elastic constants out of range: E={young}, nu={nu}"
            )));
        }
        let mu = young / (2.0 * (1.0 + nu));
        Ok(Self {
            c: axi_elastic_c(young, nu),
            c_mu: Matrix4::from_diagonal(&Vector4::new(2.0, 2.0, 1.0, 2.0)) * mu,
            young,
            nu,
            mu,
            zeta: young * (1.0 - nu) / ((1.0 + nu) * (1.0 - 2.0 * nu)),
        })
    }

    /// The in-plane 3x3 block, i.e. the plane strain modular matrix.
    pub fn in_plane(&self) -> Matrix3<f64> {
        self.c.fixed_view::<3, 3>(0, 0).into_owned()
    }
}

/// Strain-displacement operators of one axisymmetric element.
#[derive(Debug, Clone)]
pub struct AxiB {
    pub mats: ElementMatrices,
    pub bt: DMatrix<f64>,
    /// Stacked `[B2; Bt]`, 4 x 2nv.
    pub b: DMatrix<f64>,
    pub radius: f64,
    /// Element volume of revolution `2 pi R_E A_E`.
    pub volume: f64,
    /// True when the centroid fell outside a concave polygon.
    pub exterior_centroid: bool,
}

impl AxiB {
    pub fn strain(&self, d: &DVector<f64>) -> Vector4<f64> {
        let e = &self.b * d;
        Vector4::new(e[0], e[1], e[2], e[3])
    }

    /// `2 pi R_E A_E B^T C B`.
    pub fn consistency(&self, c: &Matrix4<f64>) -> DMatrix<f64> {
        let cd = DMatrix::from_column_slice(4, 4, c.as_slice());
        self.volume * self.b.transpose() * cd * &self.b
    }

    /// `(I - Pi)^T S (I - Pi)` with `S` the diagonal of the consistency
    /// matrix built from `c_stab`.
    pub fn stabilization(&self, c_stab: &Matrix4<f64>) -> DMatrix<f64> {
        let k = self.consistency(c_stab);
        let s: Vec<f64> = (0..k.nrows()).map(|i| k[(i, i)]).collect();
        stabilization(&self.mats, &s)
    }
}

pub fn build_axi_b(poly: &Polygon, geom: &ElementGeometry, in_plane: &Matrix3<f64>) -> Result<AxiB> {
    let radius = geom.centroid.x;
    if radius <= AXIS_GUARD_REL * geom.diameter {
        return Err(VemError::AxisContact(radius));
    }
    let mats = build_projector(poly, geom, in_plane)?;
    let shape = mvc_shape_extended(poly, geom.centroid)?;
    let nv = poly.n_vertices();
    let mut bt = DMatrix::zeros(1, 2 * nv);
    for (j, phi) in shape.values.iter().enumerate() {
        bt[(0, 2 * j)] = phi / radius;
    }
    let mut b = DMatrix::zeros(4, 2 * nv);
    b.rows_mut(0, 3).copy_from(&mats.b2);
    b.row_mut(3).copy_from(&bt.row(0));
    Ok(AxiB {
        mats,
        bt,
        b,
        radius,
        volume: 2.0 * PI * radius * geom.area,
        exterior_centroid: shape.exterior,
    })
}

/// Elastic element stiffness: consistency with `C`, stabilization from the
/// shear part `C_mu`.
pub fn axi_stiffness_elastic(axb: &AxiB, mat: &AxiC) -> DMatrix<f64> {
    axb.consistency(&mat.c) + axb.stabilization(&mat.c_mu)
}

/// Elasto-plastic element stiffness and its stabilization part, both built
/// from the consistent tangent `cep`.
pub fn axi_stiffness_plastic(axb: &AxiB, cep: &Matrix4<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    if cep.iter().any(|v| !v.is_finite()) {
        return Err(VemError::InvalidInput("non-finite tangent entries".into()));
    }
    let kc = axb.consistency(cep);
    let s: Vec<f64> = (0..kc.nrows()).map(|i| kc[(i, i)]).collect();
    let ks = stabilization(&axb.mats, &s);
    Ok((kc + &ks, ks))
}

/// `2 pi R_E A_E B^T sigma + k_s du`.
pub fn axi_internal_force(
    axb: &AxiB,
    stress: &Vector4<f64>,
    ks: &DMatrix<f64>,
    du: &DVector<f64>,
) -> DVector<f64> {
    let sv = DVector::from_column_slice(stress.as_slice());
    axb.b.transpose() * sv * axb.volume + ks * du
}

/// Nodal force of a circumferential line load `w_c` (force per unit
/// circumferential length) at radius `r_j`.
pub fn nodal_line_load(r_j: f64, w_c: f64) -> f64 {
    2.0 * PI * r_j * w_c
}

/// Nodal force of a pressure `p` acting on a surface strip of tributary
/// length `h` at radius `r_j`.
pub fn nodal_pressure_load(r_j: f64, h: f64, p: f64) -> f64 {
    2.0 * PI * r_j * h * p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygeom::compute_geometry;
    use approx::assert_abs_diff_eq;

    fn element(r0: f64, size: f64) -> (Polygon, ElementGeometry) {
        let p = Polygon::from_coords(&[
            [r0, 0.0],
            [r0 + size, 0.0],
            [r0 + 1.1 * size, 0.9 * size],
            [r0 + 0.4 * size, 1.2 * size],
            [r0 - 0.1 * size, 0.7 * size],
        ])
        .unwrap();
        let g = compute_geometry(&p).unwrap();
        (p, g)
    }

    fn nodal(poly: &Polygon, f: impl Fn(f64, f64) -> (f64, f64)) -> DVector<f64> {
        let v = poly.vertices();
        DVector::from_fn(2 * v.len(), |i, _| {
            let (ur, uz) = f(v[i / 2].x, v[i / 2].y);
            if i % 2 == 0 { ur } else { uz }
        })
    }

    #[test]
    fn axial_translation_is_strain_free() {
        let (p, g) = element(3.0, 1.0);
        let mat = AxiC::new(1000.0, 0.3).unwrap();
        let axb = build_axi_b(&p, &g, &mat.in_plane()).unwrap();
        let d = nodal(&p, |_, _| (0.0, 1.0));
        assert!(axb.strain(&d).amax() < 1e-13);
        assert!(axb.bt.iter().skip(1).step_by(2).all(|v| *v == 0.0));
    }

    #[test]
    fn uniform_radial_displacement_gives_hoop_strain() {
        let (p, g) = element(3.0, 1.0);
        let mat = AxiC::new(1000.0, 0.3).unwrap();
        let axb = build_axi_b(&p, &g, &mat.in_plane()).unwrap();
        let c = 0.01;
        let e = axb.strain(&nodal(&p, |_, _| (c, 0.0)));
        assert_abs_diff_eq!(e[0], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e[3], c / axb.radius, epsilon = 1e-14);
    }

    #[test]
    fn linear_radial_field_far_from_axis() {
        let p = Polygon::from_coords(&[[99.5, 0.0], [100.5, 0.0], [100.5, 1.0], [99.5, 1.0]]).unwrap();
        let g = compute_geometry(&p).unwrap();
        let mat = AxiC::new(1000.0, 0.3).unwrap();
        let axb = build_axi_b(&p, &g, &mat.in_plane()).unwrap();
        let e = axb.strain(&nodal(&p, |r, _| (0.001 * r, 0.0)));
        assert_abs_diff_eq!(e[0], 0.001, epsilon = 1e-12);
        assert_abs_diff_eq!(e[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e[2], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e[3], 0.001, epsilon = 1e-12);
    }

    #[test]
    fn centroid_on_axis_rejected() {
        let p = Polygon::from_coords(&[[-1.0, 0.0], [1.0, 0.0], [1.0, 1.0], [-1.0, 1.0]]).unwrap();
        let g = compute_geometry(&p).unwrap();
        let mat = AxiC::new(1000.0, 0.3).unwrap();
        assert!(matches!(
            build_axi_b(&p, &g, &mat.in_plane()),
            Err(VemError::AxisContact(_))
        ));
    }

    #[test]
    fn elastic_stiffness_spectrum() {
        let (p, g) = element(2.0, 1.0);
        let mat = AxiC::new(1000.0, 0.3).unwrap();
        let axb = build_axi_b(&p, &g, &mat.in_plane()).unwrap();
        let k = axi_stiffness_elastic(&axb, &mat);
        assert!((&k - k.transpose()).amax() < 1e-12 * k.amax());
        let eig = k.clone().symmetric_eigen();
        let kmax = eig.eigenvalues.amax();
        let zeros = eig.eigenvalues.iter().filter(|l| l.abs() < 1e-9 * kmax).count();
        // Axial translation, and the rotation about the axis point at the
        // centroid height: it leaves u_r = 0 at the centroid so the
        // one-point hoop strain cannot see it. Connectivity removes it in
        // a mesh.
        assert_eq!(zeros, 2);
        assert!(eig.eigenvalues.iter().all(|l| *l > -1e-9 * kmax));
        let uz = nodal(&p, |_, _| (0.0, 1.0));
        assert!((&k * &uz).amax() < 1e-9 * k.amax());
        let zc = g.centroid.y;
        let rot = nodal(&p, |r, z| (zc - z, r));
        assert!((&k * &rot).amax() < 1e-9 * k.amax() * rot.amax());
        let ur = nodal(&p, |_, _| (1.0, 0.0));
        assert!(ur.dot(&(&k * &ur)) > 0.0);
    }

    #[test]
    fn plastic_stiffness_with_elastic_tangent() {
        let (p, g) = element(2.0, 1.0);
        let mat = AxiC::new(1000.0, 0.3).unwrap();
        let axb = build_axi_b(&p, &g, &mat.in_plane()).unwrap();
        let (k, ks) = axi_stiffness_plastic(&axb, &mat.c).unwrap();
        let kc = axb.consistency(&mat.c);
        assert!((&k - &ks - kc).amax() < 1e-12 * k.amax());
        let eig = k.symmetric_eigen();
        assert!(eig.eigenvalues.iter().all(|l| *l > -1e-9 * eig.eigenvalues.amax()));
        let mut bad = mat.c;
        bad[(0, 0)] = f64::NAN;
        assert!(axi_stiffness_plastic(&axb, &bad).is_err());
    }

    #[test]
    fn internal_force_edge_cases() {
        let (p, g) = element(2.0, 1.0);
        let mat = AxiC::new(1000.0, 0.3).unwrap();
        let axb = build_axi_b(&p, &g, &mat.in_plane()).unwrap();
        let (_, ks) = axi_stiffness_plastic(&axb, &mat.c).unwrap();
        let zero = DVector::zeros(10);
        assert_eq!(axi_internal_force(&axb, &Vector4::zeros(), &ks, &zero), zero);
        let lin = nodal(&p, |r, z| (0.01 * r - 0.02 * z + 0.1, 0.03 * r + 0.002 * z));
        assert!((&ks * lin).amax() < 1e-10 * ks.amax());
    }

    #[test]
    fn load_formulas() {
        assert_eq!(nodal_line_load(0.0, 3.0), 0.0);
        assert_abs_diff_eq!(nodal_line_load(1.0, 1.0), 2.0 * PI);
        let p = 0.25;
        let w_c = p / (2.0 * PI * 10.0);
        assert_abs_diff_eq!(nodal_line_load(10.0, w_c), p, epsilon = 1e-15);
        assert_abs_diff_eq!(nodal_pressure_load(4.0, 0.5, 10.0), 2.0 * PI * 4.0 * 0.5 * 10.0);
    }
}
