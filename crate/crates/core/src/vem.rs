//! First-order (k = 1) virtual element projection machinery for one polygon.
//!
//! Degrees of freedom are ordered `[u_x^1, u_y^1, ..., u_x^nv, u_y^nv]`.
//! The polynomial basis uses scaled monomials `xi = (x - xc)/h`,
//! `eta = (y - yc)/h`:
//!
//! ```text
//! p1 = (1, 0)   p2 = (0, 1)   p3 = (-eta, xi)
//! p4 = (eta, xi)   p5 = (xi, 0)   p6 = (0, eta)
//! ```

use nalgebra::{DMatrix, Matrix2, Matrix3, Vector3};

use crate::error::{Result, VemError};
use crate::polygeom::{scaled_monomials, ElementGeometry, Polygon, Vec2};

/// Number of basis vectors for k = 1.
pub const N_K: usize = 6;

/// Condition number above which `G` is treated as singular.
pub const G_CONDITION_LIMIT: f64 = 1e12;

/// Stability scaling used for the 2D stabilization floor.
const ALPHA_0: f64 = 1.0;
const M_2D: f64 = 3.0;

/// Evaluates basis vector `alpha` (0-based) at scaled coordinates.
pub fn basis_vector(alpha: usize, xi: f64, eta: f64) -> Vec2 {
    match alpha {
        0 => Vec2::new(1.0, 0.0),
        1 => Vec2::new(0.0, 1.0),
        2 => Vec2::new(-eta, xi),
        3 => Vec2::new(eta, xi),
        4 => Vec2::new(xi, 0.0),
        5 => Vec2::new(0.0, eta),
        _ => panic!("basis index {alpha} out of range for k = 1"),
    }
}

/// Component of `p_alpha` at the vertex owning dof `dof`, along that dof.
pub fn dof_op(poly: &Polygon, geom: &ElementGeometry, alpha: usize, dof: usize) -> Result<f64> {
    let nv = poly.n_vertices();
    if dof >= 2 * nv {
        return Err(VemError::InvalidInput(format!(
            "dof {dof} out of range for {nv} vertices"
        )));
    }
    if alpha >= N_K {
        return Err(VemError::InvalidInput(format!("basis index {alpha} out of range")));
    }
    let (xi, eta) = scaled_monomials(geom, poly.vertices()[dof / 2]);
    Ok(basis_vector(alpha, xi, eta)[dof % 2])
}

pub fn build_d(poly: &Polygon, geom: &ElementGeometry) -> DMatrix<f64> {
    let nv = poly.n_vertices();
    let mut d = DMatrix::zeros(2 * nv, N_K);
    for (j, v) in poly.vertices().iter().enumerate() {
        let (xi, eta) = scaled_monomials(geom, *v);
        for alpha in 0..N_K {
            let p = basis_vector(alpha, xi, eta);
            d[(2 * j, alpha)] = p.x;
            d[(2 * j + 1, alpha)] = p.y;
        }
    }
    d
}

/// Engineering strains `(eps_x, eps_y, gamma_xy)` of the six basis vectors in
/// physical coordinates.
pub fn strain_of_basis(h: f64) -> DMatrix<f64> {
    let mut e = DMatrix::zeros(3, N_K);
    e[(2, 3)] = 2.0 / h;
    e[(0, 4)] = 1.0 / h;
    e[(1, 5)] = 1.0 / h;
    e
}

pub fn build_btilde(poly: &Polygon, geom: &ElementGeometry, c: &Matrix3<f64>) -> DMatrix<f64> {
    let nv = poly.n_vertices();
    let eps = strain_of_basis(geom.diameter);
    let mut bt = DMatrix::zeros(N_K, 2 * nv);
    // Half-length weighted normals shared by each vertex.
    let q: Vec<Vec2> = (0..nv)
        .map(|j| {
            let jm = (j + nv - 1) % nv;
            geom.edge_normals[jm] * (0.5 * geom.edge_lengths[jm])
                + geom.edge_normals[j] * (0.5 * geom.edge_lengths[j])
        })
        .collect();
    for alpha in 0..N_K {
        let e = Vector3::new(eps[(0, alpha)], eps[(1, alpha)], eps[(2, alpha)]);
        let s = c * e;
        let sm = Matrix2::new(s[0], s[2], s[2], s[1]);
        for (j, qj) in q.iter().enumerate() {
            let t = sm * qj;
            bt[(alpha, 2 * j)] = t.x;
            bt[(alpha, 2 * j + 1)] = t.y;
        }
    }
    bt
}

pub fn build_bbreve(poly: &Polygon, geom: &ElementGeometry) -> DMatrix<f64> {
    let nv = poly.n_vertices();
    let inv = 1.0 / nv as f64;
    let mut bb = DMatrix::zeros(3, 2 * nv);
    for (j, v) in poly.vertices().iter().enumerate() {
        let (xi, eta) = scaled_monomials(geom, *v);
        for alpha in 0..3 {
            let p = basis_vector(alpha, xi, eta);
            bb[(alpha, 2 * j)] = inv * p.x;
            bb[(alpha, 2 * j + 1)] = inv * p.y;
        }
    }
    bb
}

/// Projection matrices of one element.
#[derive(Debug, Clone)]
pub struct ElementMatrices {
    pub d: DMatrix<f64>,
    pub btilde: DMatrix<f64>,
    pub bbreve: DMatrix<f64>,
    pub bbar: DMatrix<f64>,
    pub g: DMatrix<f64>,
    pub pi_tilde: DMatrix<f64>,
    pub pi: DMatrix<f64>,
    /// Constant strain-displacement matrix, 3 x 2nv.
    pub b2: DMatrix<f64>,
}

impl ElementMatrices {
    /// `I - Pi`, the projection onto the non-polynomial remainder.
    pub fn complement(&self) -> DMatrix<f64> {
        let n = self.pi.nrows();
        DMatrix::identity(n, n) - &self.pi
    }
}

pub fn build_projector(
    poly: &Polygon,
    geom: &ElementGeometry,
    c: &Matrix3<f64>,
) -> Result<ElementMatrices> {
    let d = build_d(poly, geom);
    let btilde = build_btilde(poly, geom, c);
    let bbreve = build_bbreve(poly, geom);
    let mut bbar = btilde.clone();
    bbar.rows_mut(0, 3).copy_from(&bbreve);
    let g = &bbar * &d;

    let svd = g.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !cond.is_finite() || cond > G_CONDITION_LIMIT {
        return Err(VemError::DegenerateProjection(cond));
    }
    let g_lu = g.clone().lu();
    let pi_tilde = g_lu
        .solve(&bbar)
        .ok_or(VemError::DegenerateProjection(f64::INFINITY))?;
    let pi = &d * &pi_tilde;
    let b2 = strain_of_basis(geom.diameter) * &pi_tilde;
    Ok(ElementMatrices {
        d,
        btilde,
        bbreve,
        bbar,
        g,
        pi_tilde,
        pi,
        b2,
    })
}

/// `(I - Pi)^T S (I - Pi)` for a diagonal `S`.
pub fn stabilization(mats: &ElementMatrices, s_diag: &[f64]) -> DMatrix<f64> {
    let ip = mats.complement();
    let mut sip = ip.clone();
    for (i, s) in s_diag.iter().enumerate() {
        sip.row_mut(i).scale_mut(*s);
    }
    ip.transpose() * sip
}

/// Plane strain modular matrix.
pub fn plane_strain_c(young: f64, nu: f64) -> Matrix3<f64> {
    let f = young / ((1.0 + nu) * (1.0 - 2.0 * nu));
    Matrix3::new(
        f * (1.0 - nu),
        f * nu,
        0.0,
        f * nu,
        f * (1.0 - nu),
        0.0,
        0.0,
        0.0,
        f * (1.0 - 2.0 * nu) / 2.0,
    )
}

/// Plane stress modular matrix.
pub fn plane_stress_c(young: f64, nu: f64) -> Matrix3<f64> {
    let f = young / (1.0 - nu * nu);
    Matrix3::new(f, f * nu, 0.0, f * nu, f, 0.0, 0.0, 0.0, f * (1.0 - nu) / 2.0)
}

/// Element stiffness of a 2D element of thickness `thickness`:
/// consistency part plus stabilization with diagonal
/// `max(alpha_0 tr(C)/3, (k_c)_ii)`.
pub fn stiffness_2d(
    poly: &Polygon,
    geom: &ElementGeometry,
    c: &Matrix3<f64>,
    thickness: f64,
) -> Result<DMatrix<f64>> {
    let mats = build_projector(poly, geom, c)?;
    Ok(stiffness_2d_from(&mats, geom, c, thickness))
}

pub fn stiffness_2d_from(
    mats: &ElementMatrices,
    geom: &ElementGeometry,
    c: &Matrix3<f64>,
    thickness: f64,
) -> DMatrix<f64> {
    let cd = DMatrix::from_column_slice(3, 3, c.as_slice());
    let kc = (thickness * geom.area) * mats.b2.transpose() * cd * &mats.b2;
    let floor = ALPHA_0 * c.trace() / M_2D;
    let s: Vec<f64> = (0..kc.nrows()).map(|i| kc[(i, i)].max(floor)).collect();
    kc + stabilization(mats, &s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygeom::compute_geometry;
    use approx::assert_abs_diff_eq;

    fn square() -> (Polygon, ElementGeometry) {
        let p = Polygon::from_coords(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        let g = compute_geometry(&p).unwrap();
        (p, g)
    }

    fn pentagon() -> (Polygon, ElementGeometry) {
        let p = Polygon::from_coords(&[[0.0, 0.0], [2.0, 0.1], [2.4, 1.3], [1.1, 2.0], [-0.3, 1.1]])
            .unwrap();
        let g = compute_geometry(&p).unwrap();
        (p, g)
    }

    #[test]
    fn dof_operator_examples() {
        let (p, g) = square();
        for dof in 0..8 {
            let expect = if dof % 2 == 0 { 1.0 } else { 0.0 };
            assert_eq!(dof_op(&p, &g, 0, dof).unwrap(), expect);
        }
        // vertex (1,1) is vertex 2: x-dof is 4.
        let v = dof_op(&p, &g, 2, 4).unwrap();
        assert_abs_diff_eq!(v, -0.5 / 2f64.sqrt(), epsilon = 1e-15);
        assert!(dof_op(&p, &g, 0, 8).is_err());
    }

    #[test]
    fn d_matrix_rows_match_direct_evaluation() {
        let (p, g) = square();
        let d = build_d(&p, &g);
        let s = 1.0 / 2f64.sqrt();
        // Vertex (0,0): xi = eta = -0.5/sqrt(2).
        let xi = -0.5 * s;
        let eta = -0.5 * s;
        let row_x = [1.0, 0.0, -eta, eta, xi, 0.0];
        let row_y = [0.0, 1.0, xi, xi, 0.0, eta];
        for a in 0..N_K {
            assert_abs_diff_eq!(d[(0, a)], row_x[a], epsilon = 1e-15);
            assert_abs_diff_eq!(d[(1, a)], row_y[a], epsilon = 1e-15);
        }
        let (p, g) = pentagon();
        let d = build_d(&p, &g);
        let rank = d.svd(false, false).rank(1e-10);
        assert_eq!(rank, 6);
    }

    #[test]
    fn basis_strains() {
        let h = 2.5;
        let e = strain_of_basis(h);
        for a in 0..3 {
            assert!(e.column(a).iter().all(|v| *v == 0.0));
        }
        assert_abs_diff_eq!(e[(2, 3)], 2.0 / h);
        assert_abs_diff_eq!(e[(0, 4)], 1.0 / h);
        assert_abs_diff_eq!(e[(1, 5)], 1.0 / h);
    }

    #[test]
    fn btilde_matches_boundary_quadrature() {
        // Oracle: integrate (sigma(p_a) n) . phi_j along each edge with linear
        // edge shape functions and 2-point Gauss.
        let (p, g) = square();
        let c = plane_strain_c(1.0, 0.0);
        let bt = build_btilde(&p, &g, &c);
        let eps = strain_of_basis(g.diameter);
        let nv = 4;
        let gp = [0.5 - 0.5 / 3f64.sqrt(), 0.5 + 0.5 / 3f64.sqrt()];
        for a in 0..N_K {
            let s = c * Vector3::new(eps[(0, a)], eps[(1, a)], eps[(2, a)]);
            let sm = Matrix2::new(s[0], s[2], s[2], s[1]);
            let mut oracle = DMatrix::<f64>::zeros(1, 2 * nv);
            for e in 0..nv {
                let tr = sm * g.edge_normals[e];
                for &t in &gp {
                    let w = 0.5 * g.edge_lengths[e];
                    for (node, phi) in [(e, 1.0 - t), ((e + 1) % nv, t)] {
                        oracle[(0, 2 * node)] += w * phi * tr.x;
                        oracle[(0, 2 * node + 1)] += w * phi * tr.y;
                    }
                }
            }
            for k in 0..2 * nv {
                assert_abs_diff_eq!(bt[(a, k)], oracle[(0, k)], epsilon = 1e-14);
            }
        }
        let bt2 = build_btilde(&p, &g, &(c * 2.0));
        assert_abs_diff_eq!((bt2 - bt * 2.0).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn bbreve_rows() {
        let (p, g) = pentagon();
        let bb = build_bbreve(&p, &g);
        let nv = 5.0;
        for (j, v) in p.vertices().iter().enumerate() {
            let (xi, eta) = scaled_monomials(&g, *v);
            assert_abs_diff_eq!(bb[(0, 2 * j)], 1.0 / nv);
            assert_abs_diff_eq!(bb[(0, 2 * j + 1)], 0.0);
            assert_abs_diff_eq!(bb[(2, 2 * j)], -eta / nv, epsilon = 1e-15);
            assert_abs_diff_eq!(bb[(2, 2 * j + 1)], xi / nv, epsilon = 1e-15);
        }
        let tx = DMatrix::from_fn(10, 1, |i, _| if i % 2 == 0 { 1.0 } else { 0.0 });
        let r = &bb * tx;
        assert_abs_diff_eq!(r[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r[1], 0.0, epsilon = 1e-15);
        // The rotation row is the vertex average of -eta, zero when the vertex
        // average coincides with the centroid.
        let (sq, gs) = square();
        let r = build_bbreve(&sq, &gs) * DMatrix::from_fn(8, 1, |i, _| if i % 2 == 0 { 1.0 } else { 0.0 });
        assert_abs_diff_eq!(r[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r[2], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn projector_identities_and_patch_strain() {
        let (p, g) = pentagon();
        let c = plane_strain_c(200.0, 0.3);
        let m = build_projector(&p, &g, &c).unwrap();
        let id = &m.pi_tilde * &m.d;
        assert!((id - DMatrix::<f64>::identity(6, 6)).amax() < 1e-10);
        assert!((&m.pi * &m.pi - &m.pi).amax() < 1e-10);
        assert_eq!(m.bbar.rows(0, 3), m.bbreve);

        let u = |x: Vec2| Vec2::new(0.003 * x.x + 0.001 * x.y, -0.002 * x.x + 0.004 * x.y);
        let dvec = DMatrix::from_fn(10, 1, |i, _| u(p.vertices()[i / 2])[i % 2]);
        let eps = &m.b2 * &dvec;
        assert_abs_diff_eq!(eps[0], 0.003, epsilon = 1e-10);
        assert_abs_diff_eq!(eps[1], 0.004, epsilon = 1e-10);
        assert_abs_diff_eq!(eps[2], -0.001, epsilon = 1e-10);
        let rem = m.complement() * &dvec;
        assert!(rem.amax() < 1e-12);
    }

    #[test]
    fn degenerate_projection_is_loud() {
        let (p, g) = square();
        let c = Matrix3::zeros();
        assert!(matches!(
            build_projector(&p, &g, &c),
            Err(VemError::DegenerateProjection(_))
        ));
    }

    #[test]
    fn plane_strain_stiffness_kernel() {
        let (p, g) = pentagon();
        let c = plane_strain_c(1000.0, 0.25);
        let k = stiffness_2d(&p, &g, &c, 1.0).unwrap();
        assert!((&k - k.transpose()).amax() < 1e-12 * k.amax());
        let eig = k.clone().symmetric_eigen();
        let kmax = eig.eigenvalues.amax();
        let zeros = eig.eigenvalues.iter().filter(|l| l.abs() < 1e-9 * kmax).count();
        assert_eq!(zeros, 3);
        assert!(eig.eigenvalues.iter().all(|l| *l > -1e-9 * kmax));
        let verts = p.vertices().to_vec();
        let modes = [
            DMatrix::from_fn(10, 1, |i, _| if i % 2 == 0 { 1.0 } else { 0.0 }),
            DMatrix::from_fn(10, 1, |i, _| if i % 2 == 1 { 1.0 } else { 0.0 }),
            DMatrix::from_fn(10, 1, |i, _| {
                let v = verts[i / 2];
                if i % 2 == 0 { -v.y } else { v.x }
            }),
        ];
        for mode in &modes {
            assert!((&k * mode).amax() < 1e-9 * k.amax());
        }
    }

    #[test]
    fn single_square_patch_reproduces_constant_stress() {
        let (p, g) = square();
        let c = plane_strain_c(1000.0, 0.3);
        let m = build_projector(&p, &g, &c).unwrap();
        let k = stiffness_2d_from(&m, &g, &c, 1.0);
        let u = |x: Vec2| Vec2::new(0.002 * x.x - 0.001 * x.y, 0.0005 * x.x + 0.003 * x.y);
        let d = DMatrix::from_fn(8, 1, |i, _| u(p.vertices()[i / 2])[i % 2]);
        let eps = &m.b2 * &d;
        let sigma = c * Vector3::new(eps[0], eps[1], eps[2]);
        let exact = c * Vector3::new(0.002, 0.003, -0.0005);
        assert!((sigma - exact).amax() < 1e-10);
        // Nodal forces equal the boundary tractions of the constant stress.
        let f = &k * &d;
        let sm = Matrix2::new(exact[0], exact[2], exact[2], exact[1]);
        for j in 0..4 {
            let jm = (j + 3) % 4;
            let t = sm
                * (g.edge_normals[jm] * (0.5 * g.edge_lengths[jm])
                    + g.edge_normals[j] * (0.5 * g.edge_lengths[j]));
            assert_abs_diff_eq!(f[2 * j], t.x, epsilon = 1e-10);
            assert_abs_diff_eq!(f[2 * j + 1], t.y, epsilon = 1e-10);
        }
    }
}
