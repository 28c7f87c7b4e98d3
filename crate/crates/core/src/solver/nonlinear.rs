//! Newton-Raphson equilibrium iterations with load control or spherical
//! arc-length path following, and J2 radial return at element level.
//!
//! The stabilization force carries history: on commit each element stores
//! `q_s += k_s du_step`, and during a step
//! `f_int = V B^T sigma + q_s + k_s du_step` with `k_s` frozen at the tangent
//! committed at the start of the step. This keeps the Newton tangent exact.

use nalgebra::{DMatrix, DVector};

use crate::axisym::{axi_stiffness_plastic, AxiB, AxiC};
use crate::error::{Result, VemError};
use crate::j2::{radial_return, ElementState, PlasticParams};
use crate::solver::model::{ElementOps, Formulation, Model, Solution};
use crate::solver::sparse::{Factorized, TripletMatrix};

/// How the stabilization force enters the internal force vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StabilizationHistory {
    /// Committed stabilization force plus `k_s du` of the current step.
    #[default]
    Accumulated,
    /// Only `k_s du` of the current step (no history across steps).
    StepIncrement,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathControl {
    /// Equal load-factor increments up to `target_lambda`.
    Load { steps: usize, target_lambda: f64 },
    /// Spherical arc length. The first step has load increment
    /// `initial_increment`; the run stops at `target_lambda`, at
    /// `max_steps`, or when the monitored displacement magnitude reaches
    /// `max_displacement`.
    ArcLength {
        initial_increment: f64,
        max_steps: usize,
        target_lambda: Option<f64>,
        max_displacement: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveControls {
    pub path: PathControl,
    /// Relative residual tolerance `|g| <= tol |lambda F|`.
    pub tol: f64,
    pub max_iter: usize,
    /// Load-term scaling of the arc-length constraint.
    pub psi: f64,
    /// Target Newton iterations for radius adaptation.
    pub target_iter: usize,
    /// Radius adaptation factor bounds.
    pub adapt_bounds: (f64, f64),
    /// Maximum successive halvings of a failing step.
    pub max_cuts: usize,
    /// Global dof monitored in the history.
    pub monitor: Option<usize>,
    pub stabilization: StabilizationHistory,
}

impl Default for SolveControls {
    fn default() -> Self {
        Self {
            path: PathControl::Load { steps: 1, target_lambda: 1.0 },
            tol: 1e-8,
            max_iter: 30,
            psi: 1.0,
            target_iter: 5,
            adapt_bounds: (0.25, 2.0),
            max_cuts: 12,
            monitor: None,
            stabilization: StabilizationHistory::Accumulated,
        }
    }
}

impl SolveControls {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(VemError::InvalidInput(m.to_string()));
        if !(self.tol > 0.0) {
            return bad("tolerance must be positive");
        }
        if self.max_iter == 0 {
            return bad("max_iter must be at least 1");
        }
        if !(self.psi >= 0.0) {
            return bad("psi must be non-negative");
        }
        let (lo, hi) = self.adapt_bounds;
        if !(0.0 < lo && lo <= 1.0 && hi >= 1.0) {
            return bad("adaptation bounds must satisfy 0 < lo <= 1 <= hi");
        }
        match self.path {
            PathControl::Load { steps, target_lambda } => {
                if steps == 0 || !target_lambda.is_finite() {
                    return bad("load control needs steps >= 1 and a finite target");
                }
            }
            PathControl::ArcLength {
                initial_increment,
                max_steps,
                ..
            } => {
                if max_steps == 0 || !(initial_increment > 0.0) {
                    return bad("arc length needs max_steps >= 1 and a positive initial increment");
                }
            }
        }
        Ok(())
    }
}

/// Constitutive behaviour of a nonlinear run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Material {
    /// Linear elastic; elastic stabilization.
    Elastic,
    /// J2 with linear isotropic hardening; tangent-based stabilization.
    Plastic(PlasticParams),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub lambda: f64,
    pub monitor: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct NonlinearResult {
    pub solution: Solution,
    pub history: Vec<StepRecord>,
    pub states: Vec<ElementState>,
}

/// Element-level history committed at the end of each step.
#[derive(Debug, Clone)]
struct Committed {
    u: DVector<f64>,
    lambda: f64,
    states: Vec<ElementState>,
    /// Accumulated stabilization force per element.
    qs: Vec<DVector<f64>>,
}

/// Trial evaluation at `u_committed + du`.
struct Trial {
    fint: DVector<f64>,
    tangent: TripletMatrix,
    states: Vec<ElementState>,
}

pub struct NonlinearSolver<'a> {
    model: &'a Model,
    material: Material,
    controls: SolveControls,
    axi: Vec<&'a AxiB>,
    axi_c: AxiC,
    /// Step-frozen stabilization matrices.
    ks: Vec<DMatrix<f64>>,
    /// Step-frozen consistency matrices built from the committed tangent
    /// (predictor only).
    k_pred: Vec<DMatrix<f64>>,
    elastic_k: Vec<DMatrix<f64>>,
}

impl<'a> NonlinearSolver<'a> {
    pub fn new(model: &'a Model, material: Material, controls: SolveControls) -> Result<Self> {
        controls.validate()?;
        if model.formulation != Formulation::Axisymmetric {
            return Err(VemError::InvalidInput("nonlinear analysis requires the axisymmetric formulation".into()));
        }
        let axi = model
            .elements
            .iter()
            .map(|e| match e {
                ElementOps::Axi(b) => b,
                ElementOps::Planar { .. } => unreachable!("planar element in axisymmetric model"),
            })
            .collect();
        if let Some(m) = controls.monitor {
            if m >= model.dofs.n_total() {
                return Err(VemError::InvalidInput(format!("monitored dof {m} out of range")));
            }
        }
        let axi_c = AxiC::new(model.material.young, model.material.nu)?;
        if let Material::Plastic(p) = material {
            if p.young != model.material.young || p.nu != model.material.nu {
                return Err(VemError::InvalidInput(
                    "plastic parameters disagree with the model's elastic constants".into(),
                ));
            }
        }
        let elastic_k = match material {
            Material::Elastic => (0..model.mesh.n_elements())
                .map(|e| model.element_stiffness(e))
                .collect::<Result<_>>()?,
            Material::Plastic(_) => Vec::new(),
        };
        Ok(Self {
            model,
            material,
            controls,
            axi,
            axi_c,
            ks: Vec::new(),
            k_pred: Vec::new(),
            elastic_k,
        })
    }

    fn params(&self) -> Option<&PlasticParams> {
        match &self.material {
            Material::Plastic(p) => Some(p),
            Material::Elastic => None,
        }
    }

    fn virgin(&self) -> Committed {
        let n = self.model.mesh.n_elements();
        let state = match self.params() {
            Some(p) => ElementState::virgin(p),
            None => ElementState {
                plastic_strain: Default::default(),
                alpha: 0.0,
                stress: Default::default(),
                tangent: self.axi_c.c,
            },
        };
        Committed {
            u: DVector::zeros(self.model.dofs.n_total()),
            lambda: 0.0,
            states: vec![state; n],
            qs: (0..n).map(|e| DVector::zeros(2 * self.model.mesh.elements[e].len())).collect(),
        }
    }

    /// Freezes stabilization and predictor matrices from the committed
    /// tangents.
    fn freeze(&mut self, committed: &Committed) -> Result<()> {
        if self.params().is_none() {
            return Ok(());
        }
        let mut ks = Vec::with_capacity(self.axi.len());
        let mut kp = Vec::with_capacity(self.axi.len());
        for (e, axb) in self.axi.iter().enumerate() {
            let (k, s) = axi_stiffness_plastic(axb, &committed.states[e].tangent).map_err(|err| err.at_element(e))?;
            ks.push(s);
            kp.push(k);
        }
        self.ks = ks;
        self.k_pred = kp;
        Ok(())
    }

    fn predictor_matrix(&self) -> Result<TripletMatrix> {
        match self.material {
            Material::Elastic => self.model.assemble(|e| Ok(self.elastic_k[e].clone())),
            Material::Plastic(_) => self.model.assemble(|e| Ok(self.k_pred[e].clone())),
        }
    }

    fn evaluate(&self, committed: &Committed, du: &DVector<f64>) -> Result<Trial> {
        let model = self.model;
        let n_el = model.mesh.n_elements();
        let u = &committed.u + du;
        let mut fint = DVector::zeros(model.dofs.n_total());
        let mut tangent = TripletMatrix::new(model.dofs.n_free());
        let mut states = Vec::with_capacity(n_el);
        for e in 0..n_el {
            let ue = model.gather(e, &u);
            match self.params() {
                None => {
                    let k = &self.elastic_k[e];
                    model.scatter_add(e, &(k * &ue), &mut fint);
                    tangent.add_element(&model.dofs.element_map(&model.mesh.elements[e]), k);
                    let eps = self.axi[e].strain(&ue);
                    states.push(ElementState {
                        stress: self.axi_c.c * eps,
                        ..committed.states[e].clone()
                    });
                }
                Some(p) => {
                    let axb = self.axi[e];
                    let eps = axb.strain(&ue);
                    let st = radial_return(p, &committed.states[e], &eps).map_err(|err| err.at_element(e))?;
                    let due = model.gather(e, du);
                    let ks = &self.ks[e];
                    let sv = DVector::from_column_slice(st.stress.as_slice());
                    let mut fe = axb.b.transpose() * sv * axb.volume + ks * &due;
                    if self.controls.stabilization == StabilizationHistory::Accumulated {
                        fe += &committed.qs[e];
                    }
                    model.scatter_add(e, &fe, &mut fint);
                    let ke = axb.consistency(&st.tangent) + ks;
                    tangent.add_element(&model.dofs.element_map(&model.mesh.elements[e]), &ke);
                    states.push(st);
                }
            }
        }
        Ok(Trial { fint, tangent, states })
    }

    fn commit(&self, committed: &mut Committed, du: &DVector<f64>, dlambda: f64, states: Vec<ElementState>) {
        if self.params().is_some() {
            for e in 0..self.axi.len() {
                let due = self.model.gather(e, du);
                committed.qs[e] += &self.ks[e] * due;
            }
        }
        committed.u += du;
        committed.lambda += dlambda;
        committed.states = states;
    }

    fn monitor(&self, u: &DVector<f64>) -> f64 {
        self.controls.monitor.map_or(0.0, |d| u[d])
    }

    fn converged(&self, g: &DVector<f64>, lambda: f64, fhat_norm: f64) -> bool {
        let scale = (lambda.abs() * fhat_norm).max(f64::MIN_POSITIVE);
        g.norm() <= self.controls.tol * scale
    }

    /// Newton iterations at fixed load factor from `committed` to
    /// `lambda`. Returns the increment, states and iteration count.
    fn load_step(&self, committed: &Committed, lambda: f64) -> Result<(DVector<f64>, Vec<ElementState>, usize)> {
        let dofs = &self.model.dofs;
        let fhat = dofs.restrict(&self.model.load);
        let fhat_norm = fhat.norm();
        let k0 = Factorized::new(self.predictor_matrix()?)?;
        let dlambda = lambda - committed.lambda;
        let mut du = dofs.expand(&(k0.solve(&fhat)? * dlambda));
        for it in 1..=self.controls.max_iter {
            let trial = self.evaluate(committed, &du)?;
            let g = dofs.restrict(&trial.fint) - &fhat * lambda;
            log::debug!("load step lambda={lambda:.6e} iter {it} |g|={:.3e}", g.norm());
            if self.converged(&g, lambda, fhat_norm) {
                return Ok((du, trial.states, it));
            }
            let delta = Factorized::new(trial.tangent)?.solve(&(-g))?;
            du += dofs.expand(&delta);
        }
        Err(VemError::NonConvergence {
            step: 0,
            reason: format!("residual above tolerance after {} iterations", self.controls.max_iter),
        })
    }

    /// Advances from the committed state to `lambda` with step halving on
    /// failure.
    fn advance_to(&mut self, c: &mut Committed, lambda: f64, step: usize) -> Result<usize> {
        let mut pending = vec![lambda];
        let mut cuts = 0;
        let mut iters = 0;
        while let Some(&target) = pending.last() {
            self.freeze(c)?;
            match self.load_step(c, target) {
                Ok((du, states, it)) => {
                    self.commit(c, &du, target - c.lambda, states);
                    pending.pop();
                    iters += it;
                }
                Err(err @ (VemError::NonConvergence { .. } | VemError::Singular(_))) => {
                    cuts += 1;
                    if cuts > self.controls.max_cuts {
                        return Err(VemError::NonConvergence {
                            step,
                            reason: format!("step cuts exhausted: {err}"),
                        });
                    }
                    pending.push(0.5 * (c.lambda + target));
                }
                Err(err) => return Err(err),
            }
        }
        Ok(iters)
    }

    fn finish(&self, c: Committed, history: Vec<StepRecord>) -> NonlinearResult {
        let strains = (0..self.axi.len())
            .map(|e| self.axi[e].strain(&self.model.gather(e, &c.u)))
            .collect();
        let stresses = c.states.iter().map(|s| s.stress).collect();
        let alpha = c.states.iter().map(|s| s.alpha).collect();
        NonlinearResult {
            solution: Solution {
                u: c.u,
                lambda: c.lambda,
                strains,
                stresses,
                alpha,
            },
            history,
            states: c.states,
        }
    }

    /// Internal force and tangent on the free dofs at displacement `du`
    /// from the unloaded state.
    pub fn probe(&mut self, du: &DVector<f64>) -> Result<(DVector<f64>, TripletMatrix)> {
        let c = self.virgin();
        self.freeze(&c)?;
        let trial = self.evaluate(&c, &self.model.dofs.expand(du))?;
        Ok((self.model.dofs.restrict(&trial.fint), trial.tangent))
    }

    /// Residual norms of the Newton iterations of a single load step from
    /// the unloaded state to `lambda`.
    pub fn newton_trace(&mut self, lambda: f64) -> Result<Vec<f64>> {
        let c = self.virgin();
        self.freeze(&c)?;
        let dofs = &self.model.dofs;
        let fhat = dofs.restrict(&self.model.load);
        let k0 = Factorized::new(self.predictor_matrix()?)?;
        let mut du = dofs.expand(&(k0.solve(&fhat)? * lambda));
        let mut trace = Vec::new();
        for _ in 0..self.controls.max_iter {
            let trial = self.evaluate(&c, &du)?;
            let g = dofs.restrict(&trial.fint) - &fhat * lambda;
            trace.push(g.norm());
            if self.converged(&g, lambda, fhat.norm()) {
                break;
            }
            du += dofs.expand(&Factorized::new(trial.tangent)?.solve(&(-g))?);
        }
        Ok(trace)
    }

    pub fn run(mut self) -> Result<NonlinearResult> {
        let mut c = self.virgin();
        let mut history = vec![StepRecord {
            step: 0,
            lambda: 0.0,
            monitor: 0.0,
            iterations: 0,
        }];
        match self.controls.path {
            PathControl::Load { steps, target_lambda } => {
                for s in 1..=steps {
                    let lambda = target_lambda * s as f64 / steps as f64;
                    let it = self.advance_to(&mut c, lambda, s)?;
                    history.push(StepRecord {
                        step: s,
                        lambda: c.lambda,
                        monitor: self.monitor(&c.u),
                        iterations: it,
                    });
                }
            }
            PathControl::ArcLength {
                initial_increment,
                max_steps,
                target_lambda,
                max_displacement,
            } => self.arc_length(&mut c, &mut history, initial_increment, max_steps, target_lambda, max_displacement)?,
        }
        Ok(self.finish(c, history))
    }

    #[allow(clippy::too_many_arguments)]
    fn arc_length(
        &mut self,
        c: &mut Committed,
        history: &mut Vec<StepRecord>,
        initial_increment: f64,
        max_steps: usize,
        target_lambda: Option<f64>,
        max_displacement: Option<f64>,
    ) -> Result<()> {
        let dofs = &self.model.dofs;
        let fhat = dofs.restrict(&self.model.load);
        let ff = self.controls.psi.powi(2) * fhat.norm_squared();
        let mut radius: Option<f64> = None;
        let mut prev: Option<(DVector<f64>, f64)> = None;

        for step in 1..=max_steps {
            self.freeze(c)?;
            let k0 = Factorized::new(self.predictor_matrix()?)?;
            let ut = k0.solve(&fhat)?;
            let dl = *radius.get_or_insert_with(|| initial_increment * (ut.norm_squared() + ff).sqrt());
            let mut dl = dl;
            let mut cuts = 0;
            let (du, dlambda, states, iters) = loop {
                match self.arc_step(c, &ut, dl, prev.as_ref(), &fhat, ff) {
                    Ok(r) => break r,
                    Err(VemError::NonConvergence { reason, .. }) | Err(VemError::Singular(reason)) => {
                        cuts += 1;
                        if cuts > self.controls.max_cuts {
                            return Err(VemError::NonConvergence {
                                step,
                                reason: format!("arc-length radius cuts exhausted: {reason}"),
                            });
                        }
                        log::info!("step {step}: {reason}; halving radius");
                        dl *= 0.5;
                    }
                    Err(e) => return Err(e),
                }
            };

            // Land exactly on the target load factor.
            if let Some(t) = target_lambda {
                if (c.lambda + dlambda - t) * (c.lambda - t) <= 0.0 && c.lambda + dlambda != t {
                    let it = self.advance_to(c, t, step)?;
                    history.push(StepRecord {
                        step,
                        lambda: c.lambda,
                        monitor: self.monitor(&c.u),
                        iterations: it,
                    });
                    return Ok(());
                }
            }

            let full_du = dofs.expand(&du);
            self.commit(c, &full_du, dlambda, states);
            history.push(StepRecord {
                step,
                lambda: c.lambda,
                monitor: self.monitor(&c.u),
                iterations: iters,
            });
            log::info!("arc-length step {step}: lambda={:.6e} iterations={iters}", c.lambda);
            prev = Some((du, dlambda));

            let (lo, hi) = self.controls.adapt_bounds;
            let factor = (self.controls.target_iter as f64 / iters.max(1) as f64).sqrt().clamp(lo, hi);
            radius = Some(dl * factor);

            if target_lambda.is_some_and(|t| c.lambda == t) {
                return Ok(());
            }
            if let Some(m) = max_displacement {
                if self.monitor(&c.u).abs() >= m {
                    return Ok(());
                }
            }
        }
        Ok(())
    }

    /// One arc-length step of radius `dl`. Returns the free-dof increment,
    /// load increment, trial states and iteration count.
    #[allow(clippy::too_many_arguments)]
    fn arc_step(
        &self,
        c: &Committed,
        ut: &DVector<f64>,
        dl: f64,
        prev: Option<&(DVector<f64>, f64)>,
        fhat: &DVector<f64>,
        ff: f64,
    ) -> Result<(DVector<f64>, f64, Vec<ElementState>, usize)> {
        let dofs = &self.model.dofs;
        let fhat_norm = fhat.norm();
        let sign = match prev {
            Some((du_prev, dlam_prev)) => {
                if du_prev.dot(ut) + ff * dlam_prev >= 0.0 {
                    1.0
                } else {
                    -1.0
                }
            }
            None => 1.0,
        };
        let mut dlambda = sign * dl / (ut.norm_squared() + ff).sqrt();
        let mut du = ut * dlambda;

        for it in 1..=self.controls.max_iter {
            let trial = self.evaluate(c, &dofs.expand(&du))?;
            let lambda = c.lambda + dlambda;
            let g = dofs.restrict(&trial.fint) - fhat * lambda;
            log::debug!("arc step lambda={lambda:.6e} iter {it} |g|={:.3e}", g.norm());
            if it > 1 && self.converged(&g, lambda, fhat_norm) {
                return Ok((du, dlambda, trial.states, it));
            }
            let kt = Factorized::new(trial.tangent)?;
            if !kt.is_positive_definite() {
                log::info!("tangent not positive definite at lambda={lambda:.6e}");
            }
            let dug = kt.solve(&(-&g))?;
            let dut = kt.solve(fhat)?;

            let base = &du + &dug;
            let a = dut.norm_squared() + ff;
            let b = 2.0 * dut.dot(&base) + 2.0 * ff * dlambda;
            let cc = base.norm_squared() + ff * dlambda * dlambda - dl * dl;
            let disc = b * b - 4.0 * a * cc;
            if disc < 0.0 {
                return Err(VemError::NonConvergence {
                    step: 0,
                    reason: "arc-length constraint has no real root".into(),
                });
            }
            let sq = disc.sqrt();
            // Numerically stable roots.
            let q = -0.5 * (b + b.signum() * sq);
            let r1 = if q != 0.0 { q / a } else { 0.0 };
            let r2 = if q != 0.0 { cc / q } else { 0.0 };
            let score = |dl_: f64| {
                let cand = &base + &dut * dl_;
                cand.dot(&du) + ff * (dlambda + dl_) * dlambda
            };
            let root = if score(r1) >= score(r2) { r1 } else { r2 };
            du = base + &dut * root;
            dlambda += root;
        }
        Err(VemError::NonConvergence {
            step: 0,
            reason: format!("residual above tolerance after {} iterations", self.controls.max_iter),
        })
    }
}

/// Elastic solve through the nonlinear driver: for checks against the
/// direct linear path.
pub fn solve_elastic_nonlinear(model: &Model, controls: SolveControls) -> Result<NonlinearResult> {
    NonlinearSolver::new(model, Material::Elastic, controls)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::gen_annulus;
    use crate::solver::bc::{Direction, Load, NodeSelector, Support};
    use crate::solver::model::Elastic;

    fn cylinder(p: f64, nu: f64) -> Model {
        let mesh = gen_annulus(4.0, 10.0, 0.0, 1.0, 12, 2, false).unwrap();
        Model::new(
            mesh,
            Formulation::Axisymmetric,
            Elastic::new(1000.0, nu).unwrap(),
            &[Support {
                nodes: NodeSelector::Min { axis: Direction::Z },
                fix: vec![Direction::Z],
            }, Support {
                nodes: NodeSelector::Max { axis: Direction::Z },
                fix: vec![Direction::Z],
            }],
            &[Load::Pressure {
                on: NodeSelector::Coord { axis: Direction::R, value: 4.0 },
                p,
            }],
        )
        .unwrap()
    }

    #[test]
    fn elastic_single_step_matches_linear() {
        let model = cylinder(10.0, 0.2);
        let lin = model.solve_linear().unwrap();
        let nl = solve_elastic_nonlinear(&model, SolveControls::default()).unwrap();
        assert!((nl.solution.u - &lin.u).norm() <= 1e-10 * lin.u.norm());
    }

    #[test]
    fn elastic_arc_length_reaches_target() {
        let model = cylinder(10.0, 0.3);
        let lin = model.solve_linear().unwrap();
        let controls = SolveControls {
            path: PathControl::ArcLength {
                initial_increment: 0.3,
                max_steps: 50,
                target_lambda: Some(1.0),
                max_displacement: None,
            },
            monitor: Some(0),
            ..Default::default()
        };
        let nl = solve_elastic_nonlinear(&model, controls).unwrap();
        assert_eq!(nl.solution.lambda, 1.0);
        assert!((nl.solution.u - &lin.u).norm() <= 1e-8 * lin.u.norm());
        // Linear response: monitor proportional to lambda along the path.
        for rec in &nl.history[1..] {
            assert!((rec.monitor - rec.lambda * lin.u[0]).abs() <= 1e-8 * lin.u[0].abs());
        }
    }

    #[test]
    fn plastic_below_yield_is_elastic() {
        let model = cylinder(1.0, 0.3);
        let p = PlasticParams::new(1000.0, 0.3, 10.0, 0.0).unwrap();
        let res = NonlinearSolver::new(&model, Material::Plastic(p), SolveControls::default())
            .unwrap()
            .run()
            .unwrap();
        assert!(res.states.iter().all(|s| s.alpha == 0.0));
        // Tangent-based stabilization differs from the elastic one, so
        // only closeness is expected.
        let lin = model.solve_linear().unwrap();
        assert!((res.solution.u - &lin.u).norm() <= 0.05 * lin.u.norm());
    }

    #[test]
    fn plastic_steps_converge_quickly() {
        let model = cylinder(9.0, 0.3);
        let p = PlasticParams::new(1000.0, 0.3, 10.0, 0.0).unwrap();
        let controls = SolveControls {
            path: PathControl::Load { steps: 6, target_lambda: 1.0 },
            ..Default::default()
        };
        let res = NonlinearSolver::new(&model, Material::Plastic(p), controls).unwrap().run().unwrap();
        assert!(res.states.iter().any(|s| s.alpha > 0.0));
        assert!(res.history.iter().all(|r| r.iterations <= 10), "{:?}", res.history);
    }

    #[test]
    fn bad_controls_rejected() {
        let model = cylinder(1.0, 0.3);
        let c = SolveControls { tol: 0.0, ..Default::default() };
        assert!(NonlinearSolver::new(&model, Material::Elastic, c).is_err());
        let c = SolveControls {
            path: PathControl::Load { steps: 0, target_lambda: 1.0 },
            ..Default::default()
        };
        assert!(NonlinearSolver::new(&model, Material::Elastic, c).is_err());
    }
}
