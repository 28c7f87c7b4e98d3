//! Small-strain J2 plasticity with linear isotropic hardening.
//!
//! The plastic state lives in full 3D tensor form. The interface uses the
//! axisymmetric 4-vector ordering `(rr, zz, rz, tt)` with engineering shear
//! strain `gamma_rz`.

use nalgebra::{Matrix3, Matrix4, Vector4};

use crate::error::{Result, VemError};

const SQRT_2_3: f64 = 0.816_496_580_927_726;

/// Elastic constants plus yield and hardening parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlasticParams {
    pub young: f64,
    pub nu: f64,
    pub sigma_yield: f64,
    /// Linear isotropic plastic modulus.
    pub hardening: f64,
}

impl PlasticParams {
    pub fn new(young: f64, nu: f64, sigma_yield: f64, hardening: f64) -> Result<Self> {
        if !(young > 0.0) || !(0.0..0.5).contains(&nu) || !(sigma_yield > 0.0) || !(hardening >= 0.0)
        {
            return Err(VemError::InvalidInput(format!(
                "plastic parameters out of range: E={young}, nu={nu}, sigma_y={sigma_yield}, E_h={hardening}"
            )));
        }
        Ok(Self {
            young,
            nu,
            sigma_yield,
            hardening,
        })
    }

    pub fn shear_modulus(&self) -> f64 {
        self.young / (2.0 * (1.0 + self.nu))
    }

    pub fn bulk_modulus(&self) -> f64 {
        self.young / (3.0 * (1.0 - 2.0 * self.nu))
    }

    pub fn lame_lambda(&self) -> f64 {
        self.young * self.nu / ((1.0 + self.nu) * (1.0 - 2.0 * self.nu))
    }

    /// Current flow stress for accumulated equivalent plastic strain `alpha`.
    pub fn flow_stress(&self, alpha: f64) -> f64 {
        self.sigma_yield + self.hardening * alpha
    }

    pub fn elastic_tangent(&self) -> Matrix4<f64> {
        axi_elastic_c(self.young, self.nu)
    }
}

/// Axisymmetric modular matrix, ordering `(eps_r, eps_z, gamma_rz, eps_t)`.
pub fn axi_elastic_c(young: f64, nu: f64) -> Matrix4<f64> {
    let zeta = young * (1.0 - nu) / ((1.0 + nu) * (1.0 - 2.0 * nu));
    let a = nu / (1.0 - nu);
    let g = (1.0 - 2.0 * nu) / (2.0 * (1.0 - nu));
    zeta * Matrix4::new(
        1.0, a, 0.0, a, //
        a, 1.0, 0.0, a, //
        0.0, 0.0, g, 0.0, //
        a, a, 0.0, 1.0,
    )
}

/// Per-element material state.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementState {
    pub plastic_strain: Matrix3<f64>,
    /// Equivalent plastic strain.
    pub alpha: f64,
    /// Stress `(rr, zz, rz, tt)`.
    pub stress: Vector4<f64>,
    /// Consistent tangent for the last update.
    pub tangent: Matrix4<f64>,
}

impl ElementState {
    pub fn virgin(params: &PlasticParams) -> Self {
        Self {
            plastic_strain: Matrix3::zeros(),
            alpha: 0.0,
            stress: Vector4::zeros(),
            tangent: params.elastic_tangent(),
        }
    }

    pub fn von_mises(&self) -> f64 {
        von_mises(&self.stress)
    }
}

/// Von Mises equivalent stress of a `(rr, zz, rz, tt)` stress vector.
pub fn von_mises(s: &Vector4<f64>) -> f64 {
    let (sr, sz, trz, st) = (s[0], s[1], s[2], s[3]);
    (0.5 * ((sr - sz).powi(2) + (sz - st).powi(2) + (st - sr).powi(2)) + 3.0 * trz * trz).sqrt()
}

// Tensor index 0 = r, 1 = z, 2 = theta.
fn strain_tensor(eps: &Vector4<f64>) -> Matrix3<f64> {
    let h = 0.5 * eps[2];
    Matrix3::new(eps[0], h, 0.0, h, eps[1], 0.0, 0.0, 0.0, eps[3])
}

fn stress_vector(s: &Matrix3<f64>) -> Vector4<f64> {
    Vector4::new(s[(0, 0)], s[(1, 1)], s[(0, 1)], s[(2, 2)])
}

fn deviator(t: &Matrix3<f64>) -> Matrix3<f64> {
    t - Matrix3::identity() * (t.trace() / 3.0)
}

/// Radial-return update from the committed state `old` to total strain `eps`.
pub fn radial_return(
    params: &PlasticParams,
    old: &ElementState,
    eps: &Vector4<f64>,
) -> Result<ElementState> {
    if eps.iter().any(|v| !v.is_finite()) {
        return Err(VemError::InvalidInput("non-finite strain".into()));
    }
    let mu = params.shear_modulus();
    let kappa = params.bulk_modulus();
    let h = params.hardening;

    let ee = strain_tensor(eps) - old.plastic_strain;
    let vol = ee.trace();
    let s_trial = deviator(&ee) * (2.0 * mu);
    let s_norm = s_trial.norm();
    let f = s_norm - SQRT_2_3 * params.flow_stress(old.alpha);

    if f <= 0.0 {
        let sigma = s_trial + Matrix3::identity() * (kappa * vol);
        return Ok(ElementState {
            plastic_strain: old.plastic_strain,
            alpha: old.alpha,
            stress: stress_vector(&sigma),
            tangent: params.elastic_tangent(),
        });
    }

    let dgamma = f / (2.0 * mu + 2.0 / 3.0 * h);
    let n = s_trial / s_norm;
    let s = s_trial - n * (2.0 * mu * dgamma);
    let sigma = s + Matrix3::identity() * (kappa * vol);

    let beta = 1.0 - 2.0 * mu * dgamma / s_norm;
    let gbar = 1.0 / (1.0 + h / (3.0 * mu)) - (1.0 - beta);
    let m = Vector4::new(1.0, 1.0, 0.0, 1.0);
    let idev = Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, 0.5, 1.0)) - m * m.transpose() / 3.0;
    let nv = stress_vector(&n);
    let tangent = m * m.transpose() * kappa + idev * (2.0 * mu * beta) - nv * nv.transpose() * (2.0 * mu * gbar);

    Ok(ElementState {
        plastic_strain: old.plastic_strain + n * dgamma,
        alpha: old.alpha + SQRT_2_3 * dgamma,
        stress: stress_vector(&sigma),
        tangent,
    })
}

/// Compares the stored tangent with a central finite-difference derivative
/// of the return map. Returns the largest deviation relative to the largest
/// tangent entry.
pub fn consistent_tangent_check(
    params: &PlasticParams,
    old: &ElementState,
    eps: &Vector4<f64>,
) -> Result<f64> {
    const STEP: f64 = 1e-7;
    let state = radial_return(params, old, eps)?;
    let mut fd = Matrix4::zeros();
    for k in 0..4 {
        let mut ep = *eps;
        let mut em = *eps;
        ep[k] += STEP;
        em[k] -= STEP;
        let sp = radial_return(params, old, &ep)?.stress;
        let sm = radial_return(params, old, &em)?.stress;
        fd.set_column(k, &((sp - sm) / (2.0 * STEP)));
    }
    Ok((fd - state.tangent).amax() / state.tangent.amax())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(h: f64) -> PlasticParams {
        PlasticParams::new(1000.0, 0.3, 10.0, h).unwrap()
    }

    #[test]
    fn elastic_branch_uses_modular_matrix() {
        let p = params(0.0);
        let eps = Vector4::new(1e-3, -2e-3, 5e-4, 1e-3);
        let st = radial_return(&p, &ElementState::virgin(&p), &eps).unwrap();
        let expect = axi_elastic_c(1000.0, 0.3) * eps;
        assert!((st.stress - expect).amax() < 1e-12);
        assert_eq!(st.tangent, axi_elastic_c(1000.0, 0.3));
        assert_eq!(st.alpha, 0.0);
    }

    #[test]
    fn modular_matrix_matches_lame_form() {
        let p = params(0.0);
        let (lam, mu) = (p.lame_lambda(), p.shear_modulus());
        let m = Vector4::new(1.0, 1.0, 0.0, 1.0);
        let c = m * m.transpose() * lam + Matrix4::from_diagonal(&Vector4::new(2.0, 2.0, 1.0, 2.0)) * mu;
        assert!((c - p.elastic_tangent()).amax() < 1e-10);
    }

    #[test]
    fn uniaxial_strain_saturates_at_yield() {
        // Elastic-perfectly-plastic under monotone uniaxial strain: the von
        // Mises stress first grows as 2 mu eps and then stays at sigma_y.
        let p = params(0.0);
        let mut st = ElementState::virgin(&p);
        let mu = p.shear_modulus();
        let eps_y = p.sigma_yield / (2.0 * mu);
        for k in 1..=40 {
            let e = 0.1 * eps_y * k as f64;
            st = radial_return(&p, &st, &Vector4::new(e, 0.0, 0.0, 0.0)).unwrap();
            let expected = (2.0 * mu * e).min(p.sigma_yield);
            assert_abs_diff_eq!(st.von_mises(), expected, epsilon = 1e-8 * p.sigma_yield);
        }
        assert!(st.alpha > 0.0);
        assert_abs_diff_eq!(st.plastic_strain.trace(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn unloading_is_elastic() {
        let p = params(0.0);
        let mut st = ElementState::virgin(&p);
        let e_load = 0.05;
        st = radial_return(&p, &st, &Vector4::new(e_load, 0.0, 0.0, 0.0)).unwrap();
        let s0 = st.stress;
        let de = -1e-4;
        let un = radial_return(&p, &st, &Vector4::new(e_load + de, 0.0, 0.0, 0.0)).unwrap();
        let c = axi_elastic_c(1000.0, 0.3);
        let slope = (un.stress - s0) / de;
        assert!((slope - c.column(0)).amax() < 1e-9 * c.amax());
        assert_eq!(un.alpha, st.alpha);
    }

    #[test]
    fn tangent_matches_finite_differences() {
        let p0 = params(0.0);
        let v = ElementState::virgin(&p0);
        let elastic = consistent_tangent_check(&p0, &v, &Vector4::new(1e-4, 0.0, 0.0, 1e-4)).unwrap();
        assert!(elastic < 1e-6, "{elastic}");
        let eps = Vector4::new(0.02, -0.004, 0.006, 0.011);
        let plastic = consistent_tangent_check(&p0, &v, &eps).unwrap();
        assert!(plastic < 1e-4, "{plastic}");
        let ph = params(100.0);
        let hard = consistent_tangent_check(&ph, &ElementState::virgin(&ph), &eps).unwrap();
        assert!(hard < 1e-4, "{hard}");
    }

    #[test]
    fn tangent_is_symmetric_and_tends_to_elastic() {
        let p = params(50.0);
        let v = ElementState::virgin(&p);
        let st = radial_return(&p, &v, &Vector4::new(0.03, -0.01, 0.02, 0.004)).unwrap();
        assert!((st.tangent - st.tangent.transpose()).amax() < 1e-10 * st.tangent.amax());
        // Scale a deviatoric direction so that f = 1e-8 sigma_y past yield.
        let dir = Vector4::new(1.0, -1.0, 0.0, 0.0);
        let mu = p.shear_modulus();
        let s_unit = deviator(&strain_tensor(&dir)).norm() * 2.0 * mu;
        let target = SQRT_2_3 * p.sigma_yield * (1.0 + 1e-8);
        let st = radial_return(&p, &v, &(dir * (target / s_unit))).unwrap();
        assert!(st.alpha > 0.0);
        // Limit is the continuum elasto-plastic tangent C - 2mu/(1 + H/3mu) n n^T,
        // continuous from the plastic side but not equal to C.
        let sdev = deviator(&strain_tensor(&dir));
        let nv = stress_vector(&(sdev / sdev.norm()));
        let continuum = p.elastic_tangent() - nv * nv.transpose() * (2.0 * mu / (1.0 + p.hardening / (3.0 * mu)));
        let dev = (st.tangent - continuum).amax() / p.elastic_tangent().amax();
        assert!(dev < 1e-6, "{dev}");
    }

    #[test]
    fn non_finite_strain_rejected() {
        let p = params(0.0);
        assert!(radial_return(&p, &ElementState::virgin(&p), &Vector4::new(f64::NAN, 0.0, 0.0, 0.0)).is_err());
        assert!(PlasticParams::new(1.0, 0.5, 1.0, 0.0).is_err());
    }
}
