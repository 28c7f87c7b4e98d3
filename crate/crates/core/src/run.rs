//! Config-driven analyses and their result files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::config::{Analysis, RunConfig};
use crate::error::{Result, VemError};
use crate::mesh::PolyMesh;
use crate::oracles::{convergence_rate, l2_error, nodal_stress_average};
use crate::solver::{Model, NonlinearSolver, Solution, StepRecord};

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub model: Model,
    pub solution: Solution,
    /// Load history of nonlinear runs.
    pub history: Option<Vec<StepRecord>>,
    /// Relative L2 displacement error against the configured reference.
    pub l2_error: Option<f64>,
}

pub fn build_model(cfg: &RunConfig) -> Result<Model> {
    let mesh = cfg.build_mesh()?;
    Model::new(mesh, cfg.formulation(), cfg.elastic()?, &cfg.supports, &cfg.loads)
}

pub fn execute(cfg: &RunConfig) -> Result<RunOutcome> {
    let model = build_model(cfg)?;
    let (solution, history) = match cfg.analysis {
        Analysis::PlasticAxisym => {
            let controls = cfg.controls(cfg.monitor_dof(&model.mesh)?)?;
            let res = NonlinearSolver::new(&model, cfg.nonlinear_material()?, controls)?.run()?;
            (res.solution, Some(res.history))
        }
        _ => (model.solve_linear()?, None),
    };
    let l2_error = match &cfg.exact {
        Some(exact) => {
            let field = exact.displacement_field(cfg.material.young, cfg.material.nu)?;
            Some(l2_error(&model.mesh, &solution.u, field)?.1)
        }
        None => None,
    };
    Ok(RunOutcome {
        model,
        solution,
        history,
        l2_error,
    })
}

fn num(out: &mut String, v: f64) {
    let _ = write!(out, ",{v:.16e}");
}

/// Nodal table: displacements and element-averaged stresses.
pub fn nodes_csv(mesh: &PolyMesh, sol: &Solution) -> Result<String> {
    let avg = nodal_stress_average(mesh, &sol.stresses)?;
    let mut out = String::from("node,r,z,u_r,u_z,sigma_rr,sigma_zz,tau_rz,sigma_tt\n");
    for (n, x) in mesh.nodes.iter().enumerate() {
        let _ = write!(out, "{n}");
        for v in [x.x, x.y, sol.ur(n), sol.uz(n)].into_iter().chain(avg[n].iter().copied()) {
            num(&mut out, v);
        }
        out.push('\n');
    }
    Ok(out)
}

/// Element table: centroid, strains, stresses and equivalent plastic strain.
pub fn elements_csv(mesh: &PolyMesh, sol: &Solution) -> Result<String> {
    let mut out = String::from(
        "element,r_c,z_c,eps_rr,eps_zz,gamma_rz,eps_tt,sigma_rr,sigma_zz,tau_rz,sigma_tt,alpha\n",
    );
    for e in 0..mesh.n_elements() {
        let (_, g) = mesh.geometry(e)?;
        let _ = write!(out, "{e}");
        let values = [g.centroid.x, g.centroid.y]
            .into_iter()
            .chain(sol.strains[e].iter().copied())
            .chain(sol.stresses[e].iter().copied())
            .chain([sol.alpha[e]]);
        for v in values {
            num(&mut out, v);
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn history_csv(history: &[StepRecord]) -> String {
    let mut out = String::from("step,lambda,monitor,iterations\n");
    for h in history {
        let _ = write!(out, "{}", h.step);
        num(&mut out, h.lambda);
        num(&mut out, h.monitor);
        let _ = writeln!(out, ",{}", h.iterations);
    }
    out
}

/// Legacy ASCII VTK file with polygon cells (type 7).
pub fn vtk(mesh: &PolyMesh, sol: &Solution) -> String {
    let mut out = String::from("# vtk DataFile Version 3.0\naxivem result\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(out, "POINTS {} double", mesh.n_nodes());
    for x in &mesh.nodes {
        let _ = writeln!(out, "{:.16e} {:.16e} 0", x.x, x.y);
    }
    let size: usize = mesh.elements.iter().map(|c| c.len() + 1).sum();
    let _ = writeln!(out, "CELLS {} {size}", mesh.n_elements());
    for conn in &mesh.elements {
        let _ = write!(out, "{}", conn.len());
        for n in conn {
            let _ = write!(out, " {n}");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "CELL_TYPES {}", mesh.n_elements());
    for _ in &mesh.elements {
        out.push_str("7\n");
    }
    let _ = writeln!(out, "POINT_DATA {}", mesh.n_nodes());
    out.push_str("VECTORS displacement double\n");
    for n in 0..mesh.n_nodes() {
        let _ = writeln!(out, "{:.16e} {:.16e} 0", sol.ur(n), sol.uz(n));
    }
    let _ = writeln!(out, "CELL_DATA {}", mesh.n_elements());
    for (k, name) in ["sigma_rr", "sigma_zz", "tau_rz", "sigma_tt"].iter().enumerate() {
        let _ = writeln!(out, "SCALARS {name} double 1\nLOOKUP_TABLE default");
        for s in &sol.stresses {
            let _ = writeln!(out, "{:.16e}", s[k]);
        }
    }
    out.push_str("SCALARS alpha double 1\nLOOKUP_TABLE default\n");
    for a in &sol.alpha {
        let _ = writeln!(out, "{a:.16e}");
    }
    out
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, text)?;
    Ok(path)
}

/// Writes `nodes.csv`, `elements.csv`, `history.csv` (nonlinear runs) and
/// optionally `result.vtk`. Returns the written paths.
pub fn write_outputs(outcome: &RunOutcome, dir: &Path, with_vtk: bool) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mesh = &outcome.model.mesh;
    let mut files = vec![
        write_file(dir, "nodes.csv", &nodes_csv(mesh, &outcome.solution)?)?,
        write_file(dir, "elements.csv", &elements_csv(mesh, &outcome.solution)?)?,
    ];
    if let Some(h) = &outcome.history {
        files.push(write_file(dir, "history.csv", &history_csv(h))?);
    }
    if with_vtk {
        files.push(write_file(dir, "result.vtk", &vtk(mesh, &outcome.solution))?);
    }
    Ok(files)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceLevel {
    pub level: usize,
    pub h: f64,
    pub n_elements: usize,
    pub l2_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub levels: Vec<ConvergenceLevel>,
    /// Least-squares slope of `log(error)` against `log(h)`.
    pub slope: f64,
}

impl ConvergenceReport {
    pub fn csv(&self) -> String {
        let mut out = String::from("level,h,n_elements,l2_error\n");
        for l in &self.levels {
            let _ = writeln!(out, "{},{:.16e},{},{:.16e}", l.level, l.h, l.n_elements, l.l2_error);
        }
        let _ = writeln!(out, "# slope {:.16e}", self.slope);
        out
    }
}

/// Repeats an elastic run on a generated mesh, doubling the cell counts at
/// every level, and fits the L2 convergence slope.
pub fn convergence_study(cfg: &RunConfig, levels: usize) -> Result<ConvergenceReport> {
    if levels < 3 {
        return Err(VemError::config("--convergence", format!("need at least 3 levels, got {levels}")));
    }
    let Some(base) = cfg.mesh.generate else {
        return Err(VemError::config("mesh.generate", "convergence study needs a generated mesh"));
    };
    if cfg.exact.is_none() {
        return Err(VemError::config("exact", "convergence study needs a closed-form reference"));
    }
    if cfg.analysis == Analysis::PlasticAxisym {
        return Err(VemError::config("analysis", "convergence study is elastic only"));
    }
    let mut rows = Vec::with_capacity(levels);
    for level in 0..levels {
        let mut c = cfg.clone();
        c.mesh.generate = Some(base.refined(1 << level));
        let outcome = execute(&c)?;
        let stats = outcome.model.mesh.stats()?;
        rows.push(ConvergenceLevel {
            level,
            h: stats.h,
            n_elements: stats.n_elements,
            l2_error: outcome.l2_error.unwrap_or(f64::NAN),
        });
        log::info!("level {level}: h = {:.4e}, error = {:.4e}", stats.h, rows[level].l2_error);
    }
    let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r.h, r.l2_error)).collect();
    let slope = convergence_rate(&pairs)?;
    Ok(ConvergenceReport { levels: rows, slope })
}
