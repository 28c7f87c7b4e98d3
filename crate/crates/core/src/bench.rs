//! Benchmark problem builders and the pass/fail benchmark suite.

use std::fmt;
use std::time::{Duration, Instant};

use crate::error::{Result, VemError};
use crate::j2::PlasticParams;
use crate::mesh::{gen_annulus, gen_half_disk_shell, gen_plate, PolyMesh};
use crate::oracles::{
    nodal_stress_average, plate_limit_pressure, to_spherical, HillCylinder, HillSphere, LameCylinder, LameSphere,
    PlatePoint, PlateSupport,
};
use crate::polygeom::Vec2;
use crate::solver::{
    Direction, Elastic, Formulation, Load, Material, Model, NodeSelector, NonlinearResult, NonlinearSolver,
    PathControl, Solution, SolveControls, Support,
};

pub const VESSEL_A: f64 = 4.0;
pub const VESSEL_B: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchCase {
    LameCylinder,
    LameSphere,
    PlatePointSimple,
    PlatePointFixed,
    PlasticCylinder,
    PlasticSphere,
    PlatePressureLimit,
}

impl BenchCase {
    pub const ALL: [BenchCase; 7] = [
        BenchCase::LameCylinder,
        BenchCase::LameSphere,
        BenchCase::PlatePointSimple,
        BenchCase::PlatePointFixed,
        BenchCase::PlasticCylinder,
        BenchCase::PlasticSphere,
        BenchCase::PlatePressureLimit,
    ];

    pub fn id(self) -> &'static str {
        match self {
            BenchCase::LameCylinder => "lame_cylinder",
            BenchCase::LameSphere => "lame_sphere",
            BenchCase::PlatePointSimple => "plate_point_simple",
            BenchCase::PlatePointFixed => "plate_point_fixed",
            BenchCase::PlasticCylinder => "plastic_cylinder",
            BenchCase::PlasticSphere => "plastic_sphere",
            BenchCase::PlatePressureLimit => "plate_pressure_limit",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.id() == id)
            .ok_or_else(|| VemError::config("case", format!("unknown benchmark case `{id}`")))
    }
}

/// Mesh family used by the builders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshKind {
    Convex,
    Concave,
}

impl MeshKind {
    fn concave(self) -> bool {
        self == MeshKind::Concave
    }
}

/// Cylinder wall `[a, b] x [0, height]` with both faces restrained in z and
/// internal pressure `p`. The structured grid has `n_r x n_z` cells.
pub fn cylinder_model(p: f64, young: f64, nu: f64, n_r: usize, n_z: usize, height: f64, kind: MeshKind) -> Result<Model> {
    let mesh = gen_annulus(VESSEL_A, VESSEL_B, 0.0, height, n_r, n_z, kind.concave())?;
    Model::new(
        mesh,
        Formulation::Axisymmetric,
        Elastic::new(young, nu)?,
        &[
            Support {
                nodes: NodeSelector::Min { axis: Direction::Z },
                fix: vec![Direction::Z],
            },
            Support {
                nodes: NodeSelector::Max { axis: Direction::Z },
                fix: vec![Direction::Z],
            },
        ],
        &[Load::Pressure {
            on: NodeSelector::Coord { axis: Direction::R, value: VESSEL_A },
            p,
        }],
    )
}

/// Upper half of the sphere wall: z fixed on the equator, r fixed on the
/// axis, internal pressure `p`.
pub fn sphere_model(p: f64, young: f64, nu: f64, n_r: usize, n_theta: usize, kind: MeshKind) -> Result<Model> {
    let mesh = gen_half_disk_shell(VESSEL_A, VESSEL_B, n_r, n_theta, kind.concave())?;
    Model::new(
        mesh,
        Formulation::Axisymmetric,
        Elastic::new(young, nu)?,
        &[
            Support {
                nodes: NodeSelector::Coord { axis: Direction::Z, value: 0.0 },
                fix: vec![Direction::Z],
            },
            Support {
                nodes: NodeSelector::Axis,
                fix: vec![Direction::R],
            },
        ],
        &[Load::Pressure {
            on: NodeSelector::Radius { value: VESSEL_A },
            p,
        }],
    )
}

/// Plate supports: the axis is restrained radially; simple support holds
/// the bottom outer corner in z, fixed support clamps the whole rim.
pub fn plate_supports(support: PlateSupport, r_o: f64) -> Vec<Support> {
    let mut s = vec![Support {
        nodes: NodeSelector::Axis,
        fix: vec![Direction::R],
    }];
    match support {
        PlateSupport::Simple => s.push(Support {
            nodes: NodeSelector::Point { r: r_o, z: 0.0 },
            fix: vec![Direction::Z],
        }),
        PlateSupport::Fixed => s.push(Support {
            nodes: NodeSelector::Coord { axis: Direction::R, value: r_o },
            fix: vec![Direction::R, Direction::Z],
        }),
    }
    s
}

/// Plate `[0, r_o] x [0, t]` with a downward point load `load` at the top
/// axis node.
#[allow(clippy::too_many_arguments)]
pub fn plate_point_model(
    load: f64,
    r_o: f64,
    t: f64,
    young: f64,
    nu: f64,
    support: PlateSupport,
    n_r: usize,
    n_t: usize,
    kind: MeshKind,
) -> Result<Model> {
    let mesh = gen_plate(r_o, t, n_r, n_t, kind.concave())?;
    Model::new(
        mesh,
        Formulation::Axisymmetric,
        Elastic::new(young, nu)?,
        &plate_supports(support, r_o),
        &[Load::Point {
            at: NodeSelector::Point { r: 0.0, z: t },
            dir: Direction::Z,
            value: -load,
        }],
    )
}

/// Simply supported plate under unit downward pressure on the top face.
pub fn plate_pressure_model(r_o: f64, t: f64, young: f64, nu: f64, n_r: usize, n_t: usize) -> Result<Model> {
    let mesh = gen_plate(r_o, t, n_r, n_t, false)?;
    Model::new(
        mesh,
        Formulation::Axisymmetric,
        Elastic::new(young, nu)?,
        &plate_supports(PlateSupport::Simple, r_o),
        &[Load::Pressure {
            on: NodeSelector::Coord { axis: Direction::Z, value: t },
            p: 1.0,
        }],
    )
}

/// Node nearest to a point.
pub fn nearest_node(mesh: &PolyMesh, p: Vec2) -> usize {
    (0..mesh.n_nodes())
        .min_by(|&i, &j| (mesh.nodes[i] - p).norm().total_cmp(&(mesh.nodes[j] - p).norm()))
        .unwrap_or(0)
}

/// One checked quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `value <= limit`.
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            limit,
            pass: value <= limit,
        }
    }

    /// Passes when `|value - target| <= tol`; reports the deviation.
    pub fn near(name: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        let name = format!("{} = {value:.6} (target {target} +/- {tol})", name.into());
        Self::at_most(name, (value - target).abs(), tol)
    }
}

#[derive(Debug, Clone)]
pub struct CaseReport {
    pub case: BenchCase,
    pub n_elements: usize,
    pub checks: Vec<Check>,
    pub runtime: Duration,
}

impl CaseReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

impl fmt::Display for CaseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "[{}] {} ({} elements, {:.2} s)",
            if self.pass() { "PASS" } else { "FAIL" },
            self.case.id(),
            self.n_elements,
            self.runtime.as_secs_f64()
        )?;
        for c in &self.checks {
            writeln!(
                f,
                "    {} {}: {:.4e} (limit {:.4e})",
                if c.pass { "ok  " } else { "FAIL" },
                c.name,
                c.value,
                c.limit
            )?;
        }
        Ok(())
    }
}

/// Largest deviation of `(computed, exact)` pairs relative to the largest
/// exact magnitude.
pub fn profile_error(pairs: impl IntoIterator<Item = (f64, f64)>) -> f64 {
    let mut dev: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (computed, exact) in pairs {
        dev = dev.max((computed - exact).abs());
        scale = scale.max(exact.abs());
    }
    if scale > 0.0 { dev / scale } else { dev }
}

/// Nodal `(u_r, sigma_r, sigma_t)` relative profile errors of a Lamé
/// cylinder run, over nodes with `r` in `[a + margin, b - margin]`.
pub fn cylinder_profile_errors(model: &Model, sol: &Solution, exact: &LameCylinder, margin: f64) -> Result<[f64; 3]> {
    let avg = nodal_stress_average(&model.mesh, &sol.stresses)?;
    let mut rows = Vec::new();
    for (n, x) in model.mesh.nodes.iter().enumerate() {
        if x.x < exact.a + margin - 1e-9 || x.x > exact.b - margin + 1e-9 {
            continue;
        }
        let f = exact.at(x.x)?;
        rows.push([(sol.ur(n), f.u_r), (avg[n][0], f.sigma_r), (avg[n][3], f.sigma_t)]);
    }
    Ok(std::array::from_fn(|k| profile_error(rows.iter().map(|r| r[k]))))
}

/// Nodal `(u_rho, sigma_rho, sigma_t)` relative profile errors of a Lamé
/// sphere run, in spherical components.
pub fn sphere_profile_errors(model: &Model, sol: &Solution, exact: &LameSphere, margin: f64) -> Result<[f64; 3]> {
    let avg = nodal_stress_average(&model.mesh, &sol.stresses)?;
    let mut rows = Vec::new();
    for (n, x) in model.mesh.nodes.iter().enumerate() {
        let rho = x.norm();
        if rho < exact.a + margin - 1e-9 || rho > exact.b - margin + 1e-9 {
            continue;
        }
        let f = exact.at(rho)?;
        let e = x / rho;
        let u_rho = sol.ur(n) * e.x + sol.uz(n) * e.y;
        let s = to_spherical(&avg[n], *x);
        rows.push([(u_rho, f.u_r), (s[0], f.sigma_r), (s[3], f.sigma_t)]);
    }
    Ok(std::array::from_fn(|k| profile_error(rows.iter().map(|r| r[k]))))
}

/// Problem sizes for the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    /// Reduced meshes for quick runs.
    Desk,
    /// Element counts of the reference study.
    Full,
}

pub fn run_case(case: BenchCase, scale: Scale) -> Result<CaseReport> {
    let start = Instant::now();
    let (n_elements, checks) = match case {
        BenchCase::LameCylinder => lame_cylinder_case()?,
        BenchCase::LameSphere => lame_sphere_case()?,
        BenchCase::PlatePointSimple => plate_point_case(PlateSupport::Simple, scale)?,
        BenchCase::PlatePointFixed => plate_point_case(PlateSupport::Fixed, scale)?,
        BenchCase::PlasticCylinder => plastic_cylinder_case()?,
        BenchCase::PlasticSphere => plastic_sphere_case()?,
        BenchCase::PlatePressureLimit => plate_limit_case()?,
    };
    Ok(CaseReport {
        case,
        n_elements,
        checks,
        runtime: start.elapsed(),
    })
}

fn lame_cylinder_case() -> Result<(usize, Vec<Check>)> {
    let exact = LameCylinder::new(10.0, VESSEL_A, VESSEL_B, 1000.0, 0.2)?;
    let model = cylinder_model(10.0, 1000.0, 0.2, 30, 10, 2.0, MeshKind::Convex)?;
    let sol = model.solve_linear()?;
    let [eu, er, et] = cylinder_profile_errors(&model, &sol, &exact, 0.2)?;
    Ok((
        model.mesh.n_elements(),
        vec![
            Check::at_most("u_r profile relative error", eu, 0.02),
            Check::at_most("sigma_rr profile relative error", er, 0.02),
            Check::at_most("sigma_tt profile relative error", et, 0.02),
        ],
    ))
}

fn lame_sphere_case() -> Result<(usize, Vec<Check>)> {
    let exact = LameSphere::new(10.0, VESSEL_A, VESSEL_B, 1000.0, 0.2)?;
    let model = sphere_model(10.0, 1000.0, 0.2, 20, 50, MeshKind::Convex)?;
    let sol = model.solve_linear()?;
    let [eu, er, et] = sphere_profile_errors(&model, &sol, &exact, 0.2)?;
    Ok((
        model.mesh.n_elements(),
        vec![
            Check::at_most("u_rho profile relative error", eu, 0.02),
            Check::at_most("sigma_rhorho profile relative error", er, 0.02),
            Check::at_most("sigma_tt profile relative error", et, 0.02),
        ],
    ))
}

pub const PLATE_LOAD: f64 = 0.25;
pub const PLATE_RADIUS: f64 = 10.0;
pub const PLATE_THICKNESS: f64 = 0.25;

/// Normalized centre deflection of the point-loaded plate.
///
/// The computed deflection is the mean `u_z` of the axis nodes (through
/// the thickness). The reference is the bending deflection at the centre
/// plus the shear deflection evaluated at `r = t / 2`, where the shear
/// term's log singularity is cut off at the plate's half thickness.
pub fn plate_center_ratio(model: &Model, sol: &Solution, exact: &PlatePoint) -> Result<f64> {
    let axis = NodeSelector::Axis.select(&model.mesh)?;
    let uz = axis.iter().map(|&n| sol.uz(n)).sum::<f64>() / axis.len() as f64;
    let reference = exact.bending_deflection(0.0)? + exact.shear_deflection(0.5 * exact.t)?;
    Ok(-uz / reference)
}

pub fn plate_table_value(nu: f64, support: PlateSupport, kind: MeshKind) -> Option<f64> {
    let rows: [(f64, [f64; 4]); 5] = [
        (0.0, [0.9975, 0.9982, 0.9847, 0.9858]),
        (0.3, [0.9928, 0.9932, 0.9751, 0.9749]),
        (0.49, [0.9865, 0.9875, 0.9638, 0.9641]),
        (0.499, [0.9860, 0.9870, 0.9627, 0.9631]),
        (0.49999, [0.9863, 0.9872, 0.9624, 0.9624]),
    ];
    let col = match (support, kind) {
        (PlateSupport::Simple, MeshKind::Concave) => 0,
        (PlateSupport::Simple, MeshKind::Convex) => 1,
        (PlateSupport::Fixed, MeshKind::Concave) => 2,
        (PlateSupport::Fixed, MeshKind::Convex) => 3,
    };
    rows.iter().find(|(v, _)| (v - nu).abs() < 1e-12).map(|(_, r)| r[col])
}

/// `(n_r, n_t)` of the plate meshes: 9000 and 2250 cells.
pub fn plate_grid(scale: Scale) -> (usize, usize) {
    match scale {
        Scale::Full => (600, 15),
        Scale::Desk => (250, 9),
    }
}

fn plate_point_case(support: PlateSupport, scale: Scale) -> Result<(usize, Vec<Check>)> {
    let nu = match support {
        PlateSupport::Simple => 0.3,
        PlateSupport::Fixed => 0.49999,
    };
    let (n_r, n_t) = plate_grid(scale);
    let model = plate_point_model(
        PLATE_LOAD,
        PLATE_RADIUS,
        PLATE_THICKNESS,
        1000.0,
        nu,
        support,
        n_r,
        n_t,
        MeshKind::Convex,
    )?;
    let exact = PlatePoint::new(PLATE_LOAD, PLATE_RADIUS, PLATE_THICKNESS, 1000.0, nu, support)?;
    let sol = model.solve_linear()?;
    let ratio = plate_center_ratio(&model, &sol, &exact)?;
    let target = plate_table_value(nu, support, MeshKind::Convex).unwrap_or(1.0);
    let tol = match scale {
        Scale::Full => 0.02,
        Scale::Desk => 0.04,
    };
    Ok((
        model.mesh.n_elements(),
        vec![Check::near(format!("u_z/u_theory (nu = {nu})"), ratio, target, tol)],
    ))
}

/// Plastic front estimate: midpoint between the outermost yielded
/// centroid and the innermost elastic centroid beyond it, measured with
/// `radius` (cylinder: r, sphere: distance from the origin).
pub fn plastic_front(model: &Model, alpha: &[f64], radius: impl Fn(Vec2) -> f64) -> Result<Option<f64>> {
    let mut outer_yielded: Option<f64> = None;
    let mut cents = Vec::with_capacity(alpha.len());
    for (e, a) in alpha.iter().enumerate() {
        let (_, g) = model.mesh.geometry(e)?;
        let r = radius(g.centroid);
        cents.push(r);
        if *a > 0.0 {
            outer_yielded = Some(outer_yielded.map_or(r, |m: f64| m.max(r)));
        }
    }
    Ok(outer_yielded.map(|ry| {
        let inner_elastic = cents
            .iter()
            .zip(alpha)
            .filter(|(r, a)| **a == 0.0 && **r > ry)
            .map(|(r, _)| *r)
            .fold(f64::INFINITY, f64::min);
        if inner_elastic.is_finite() { 0.5 * (ry + inner_elastic) } else { ry }
    }))
}

pub const PLASTIC_YOUNG: f64 = 1000.0;
pub const PLASTIC_NU: f64 = 0.3;
pub const PLASTIC_YIELD: f64 = 10.0;

pub fn plastic_controls(steps: usize, monitor: usize) -> SolveControls {
    SolveControls {
        path: PathControl::Load { steps, target_lambda: 1.0 },
        monitor: Some(monitor),
        ..Default::default()
    }
}

/// Elasto-plastic cylinder of 250 elements loaded to `p`.
pub fn run_plastic_cylinder(p: f64, steps: usize) -> Result<(Model, NonlinearResult)> {
    // The field is axially uniform, so cells go to the radial direction.
    let model = cylinder_model(p, PLASTIC_YOUNG, PLASTIC_NU, 50, 5, 2.4, MeshKind::Convex)?;
    let params = PlasticParams::new(PLASTIC_YOUNG, PLASTIC_NU, PLASTIC_YIELD, 0.0)?;
    let monitor = 2 * nearest_node(&model.mesh, Vec2::new(VESSEL_A, 0.0));
    let res = NonlinearSolver::new(&model, Material::Plastic(params), plastic_controls(steps, monitor))?.run()?;
    Ok((model, res))
}

/// Elasto-plastic sphere of 1600 elements loaded to `p`.
pub fn run_plastic_sphere(p: f64, steps: usize) -> Result<(Model, NonlinearResult)> {
    let model = sphere_model(p, PLASTIC_YOUNG, PLASTIC_NU, 40, 40, MeshKind::Convex)?;
    let params = PlasticParams::new(PLASTIC_YOUNG, PLASTIC_NU, PLASTIC_YIELD, 0.0)?;
    let monitor = 2 * nearest_node(&model.mesh, Vec2::new(VESSEL_A, 0.0));
    let res = NonlinearSolver::new(&model, Material::Plastic(params), plastic_controls(steps, monitor))?.run()?;
    Ok((model, res))
}

pub const PLASTIC_CYLINDER_P: f64 = 9.29;
pub const PLASTIC_SPHERE_P: f64 = 15.66;

fn plastic_cylinder_case() -> Result<(usize, Vec<Check>)> {
    let (model, res) = run_plastic_cylinder(PLASTIC_CYLINDER_P, 20)?;
    let hill = HillCylinder::new(VESSEL_A, VESSEL_B, PLASTIC_YIELD)?;
    let c_exact = hill.front(PLASTIC_CYLINDER_P)?;
    let c = plastic_front(&model, &res.solution.alpha, |x| x.x)?.unwrap_or(VESSEL_A);
    let avg = nodal_stress_average(&model.mesh, &res.solution.stresses)?;
    let (mut rows_r, mut rows_t) = (Vec::new(), Vec::new());
    for (n, x) in model.mesh.nodes.iter().enumerate() {
        if (x.x - c_exact).abs() <= 0.3 {
            continue;
        }
        let (sr, st) = hill.stresses(x.x, c_exact)?;
        rows_r.push((avg[n][0], sr));
        rows_t.push((avg[n][3], st));
    }
    Ok((
        model.mesh.n_elements(),
        vec![
            Check::near("plastic front c", c, 6.86, 0.15),
            Check::at_most("sigma_rr relative error away from front", profile_error(rows_r), 0.03),
            Check::at_most("sigma_tt relative error away from front", profile_error(rows_t), 0.03),
        ],
    ))
}

fn plastic_sphere_case() -> Result<(usize, Vec<Check>)> {
    let (model, res) = run_plastic_sphere(PLASTIC_SPHERE_P, 20)?;
    let hill = HillSphere::new(VESSEL_A, VESSEL_B, PLASTIC_YIELD, PLASTIC_YOUNG, PLASTIC_NU)?;
    let c = plastic_front(&model, &res.solution.alpha, |x| x.norm())?.unwrap_or(VESSEL_A);
    let inner = nearest_node(&model.mesh, Vec2::new(VESSEL_A, 0.0));
    let (u_exact, _, _) = hill.fields(VESSEL_A, 7.047)?;
    let u = res.solution.ur(inner);
    Ok((
        model.mesh.n_elements(),
        vec![
            Check::near("plastic front c", c, 7.047, 0.1),
            Check::at_most("u_r(a) relative error", (u - u_exact).abs() / u_exact.abs(), 0.03),
        ],
    ))
}

pub const LIMIT_YOUNG: f64 = 1e4;
pub const LIMIT_NU: f64 = 0.24;
pub const LIMIT_YIELD: f64 = 16.0;
pub const LIMIT_RADIUS: f64 = 10.0;
pub const LIMIT_THICKNESS: f64 = 1.0;
/// Centre deflection at which the plateau is read, about five times the
/// elastic deflection at the limit pressure.
pub const LIMIT_DEFLECTION: f64 = 1.0;

/// Arc-length run of the simply supported plate under pressure, until the
/// centre deflection reaches `max_deflection`.
pub fn run_plate_limit(n_r: usize, n_t: usize, max_deflection: f64) -> Result<(Model, NonlinearResult)> {
    let model = plate_pressure_model(LIMIT_RADIUS, LIMIT_THICKNESS, LIMIT_YOUNG, LIMIT_NU, n_r, n_t)?;
    let params = PlasticParams::new(LIMIT_YOUNG, LIMIT_NU, LIMIT_YIELD, 0.0)?;
    let monitor = 2 * nearest_node(&model.mesh, Vec2::new(0.0, 0.0)) + 1;
    let controls = SolveControls {
        path: PathControl::ArcLength {
            initial_increment: 0.05,
            max_steps: 400,
            target_lambda: None,
            max_displacement: Some(max_deflection),
        },
        monitor: Some(monitor),
        ..Default::default()
    };
    let res = NonlinearSolver::new(&model, Material::Plastic(params), controls)?.run()?;
    Ok((model, res))
}

/// Largest load factor along the path.
pub fn plateau(res: &NonlinearResult) -> f64 {
    res.history.iter().map(|h| h.lambda).fold(f64::NEG_INFINITY, f64::max)
}

fn plate_limit_case() -> Result<(usize, Vec<Check>)> {
    let (model, res) = run_plate_limit(90, 10, LIMIT_DEFLECTION)?;
    let lim = plateau(&res);
    let theory = plate_limit_pressure(LIMIT_YIELD, LIMIT_THICKNESS, LIMIT_RADIUS)?;
    Ok((
        model.mesh.n_elements(),
        vec![
            Check::at_most("plateau vs 0.2594 (relative)", (lim - 0.2594).abs() / 0.2594, 0.02),
            Check::at_most("plateau vs theory (relative)", (lim - theory).abs() / theory, 0.025),
        ],
    ))
}
