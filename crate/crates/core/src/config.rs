//! Run configuration: TOML (or JSON) schema for custom analyses.
//!
//! ```toml
//! analysis = "elastic_axisym"
//!
//! [mesh.generate]
//! kind = "annulus"
//! a = 4.0
//! b = 10.0
//! z0 = 0.0
//! z1 = 1.0
//! n_r = 30
//! n_z = 10
//!
//! [material]
//! young = 1000.0
//! nu = 0.2
//!
//! [[supports]]
//! nodes = { select = "min", axis = "z" }
//! fix = ["z"]
//!
//! [[loads]]
//! type = "pressure"
//! on = { select = "coord", axis = "r", value = 4.0 }
//! p = 10.0
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Result, VemError};
use crate::j2::PlasticParams;
use crate::mesh::{gen_annulus, gen_half_disk_shell, gen_plate, load_mesh, PolyMesh};
use crate::oracles::{LameCylinder, LameSphere};
use crate::polygeom::Vec2;
use crate::solver::{
    Direction, Elastic, Formulation, Load, Material, NodeSelector, PathControl, SolveControls, StabilizationHistory,
    Support,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    #[serde(rename = "elastic_2d_plane_strain")]
    Elastic2dPlaneStrain,
    #[serde(rename = "elastic_2d_plane_stress")]
    Elastic2dPlaneStress,
    ElasticAxisym,
    PlasticAxisym,
}

impl Analysis {
    pub fn is_axisymmetric(self) -> bool {
        matches!(self, Analysis::ElasticAxisym | Analysis::PlasticAxisym)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub analysis: Analysis,
    pub mesh: MeshSource,
    pub material: MaterialConfig,
    #[serde(default)]
    pub supports: Vec<Support>,
    #[serde(default)]
    pub loads: Vec<Load>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub output: OutputConfig,
    /// Closed-form reference used for error reports and convergence studies.
    pub exact: Option<ExactSolution>,
}

/// Exactly one of `file` or `generate`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSource {
    pub file: Option<PathBuf>,
    pub generate: Option<MeshGenerator>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeshGenerator {
    /// Rectangle `[a, b] x [z0, z1]`.
    Annulus {
        a: f64,
        b: f64,
        z0: f64,
        z1: f64,
        n_r: usize,
        n_z: usize,
        #[serde(default)]
        concave: bool,
    },
    /// Quarter annulus `a <= rho <= b` of the meridian plane.
    HalfDiskShell {
        a: f64,
        b: f64,
        n_r: usize,
        n_theta: usize,
        #[serde(default)]
        concave: bool,
    },
    /// Plate section `[0, r_o] x [0, t]`.
    Plate {
        r_o: f64,
        t: f64,
        n_r: usize,
        n_t: usize,
        #[serde(default)]
        concave: bool,
    },
}

impl MeshGenerator {
    pub fn build(&self) -> Result<PolyMesh> {
        match *self {
            MeshGenerator::Annulus { a, b, z0, z1, n_r, n_z, concave } => gen_annulus(a, b, z0, z1, n_r, n_z, concave),
            MeshGenerator::HalfDiskShell { a, b, n_r, n_theta, concave } => {
                gen_half_disk_shell(a, b, n_r, n_theta, concave)
            }
            MeshGenerator::Plate { r_o, t, n_r, n_t, concave } => gen_plate(r_o, t, n_r, n_t, concave),
        }
    }

    /// Same generator with every cell count multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Self {
        let mut g = *self;
        match &mut g {
            MeshGenerator::Annulus { n_r, n_z, .. } => {
                *n_r *= factor;
                *n_z *= factor;
            }
            MeshGenerator::HalfDiskShell { n_r, n_theta, .. } => {
                *n_r *= factor;
                *n_theta *= factor;
            }
            MeshGenerator::Plate { n_r, n_t, .. } => {
                *n_r *= factor;
                *n_t *= factor;
            }
        }
        g
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub young: f64,
    pub nu: f64,
    pub sigma_yield: Option<f64>,
    #[serde(default)]
    pub hardening: f64,
    /// Out-of-plane thickness of planar analyses.
    #[serde(default = "one")]
    pub thickness: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlKind {
    #[default]
    Load,
    ArcLength,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilizationKind {
    #[default]
    Accumulated,
    StepIncrement,
}

/// Displacement component recorded in the load history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonitorConfig {
    pub at: NodeSelector,
    pub dir: Direction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default)]
    pub control: ControlKind,
    /// Load steps under load control.
    #[serde(default = "default_steps")]
    pub steps: usize,
    pub target_lambda: Option<f64>,
    #[serde(default = "default_increment")]
    pub initial_increment: f64,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
    pub max_displacement: Option<f64>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default)]
    pub stabilization: StabilizationKind,
    pub monitor: Option<MonitorConfig>,
}

fn default_steps() -> usize {
    10
}
fn default_increment() -> f64 {
    0.1
}
fn default_max_steps() -> usize {
    200
}
fn default_tol() -> f64 {
    1e-8
}
fn default_max_iter() -> usize {
    30
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            control: ControlKind::Load,
            steps: default_steps(),
            target_lambda: None,
            initial_increment: default_increment(),
            max_steps: default_max_steps(),
            max_displacement: None,
            tol: default_tol(),
            max_iter: default_max_iter(),
            stabilization: StabilizationKind::Accumulated,
            monitor: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_out")]
    pub dir: PathBuf,
    #[serde(default)]
    pub vtk: bool,
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: default_out(), vtk: false }
    }
}

/// Closed-form displacement fields under internal pressure `p`; elastic
/// constants come from the material block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExactSolution {
    LameCylinder { p: f64, a: f64, b: f64 },
    LameSphere { p: f64, a: f64, b: f64 },
}

pub type DisplacementField = Box<dyn Fn(Vec2) -> (f64, f64)>;

impl ExactSolution {
    /// Displacement `(u_r, u_z)` at a point of the meridian plane.
    pub fn displacement_field(&self, young: f64, nu: f64) -> Result<DisplacementField> {
        match *self {
            ExactSolution::LameCylinder { p, a, b } => {
                let lame = LameCylinder::new(p, a, b, young, nu)?;
                Ok(Box::new(move |x: Vec2| (lame.at(x.x).map(|f| f.u_r).unwrap_or(f64::NAN), 0.0)))
            }
            ExactSolution::LameSphere { p, a, b } => {
                let lame = LameSphere::new(p, a, b, young, nu)?;
                Ok(Box::new(move |x: Vec2| {
                    let rho = x.norm();
                    let u = lame.at(rho).map(|f| f.u_r).unwrap_or(f64::NAN);
                    (u * x.x / rho, u * x.y / rho)
                }))
            }
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let de = toml::Deserializer::parse(text).map_err(|e| toml_error(text, &e, None))?;
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            toml_error(text, e.inner(), Some(path))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let (path, inner) = (e.path().to_string(), e.inner());
            VemError::config(field_at(Some(path), format!("line {} column {}", inner.line(), inner.column())), inner.to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; `.json` files are parsed as JSON, anything else
    /// as TOML. Relative mesh paths resolve against the config directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| VemError::config(path.display().to_string(), format!("cannot read config: {e}")))?;
        let mut cfg = if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)?
        } else {
            Self::from_toml(&text)?
        };
        if let (Some(file), Some(dir)) = (cfg.mesh.file.as_mut(), path.parent()) {
            if file.is_relative() {
                *file = dir.join(&*file);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        match (&self.mesh.file, &self.mesh.generate) {
            (Some(_), Some(_)) => return Err(VemError::config("mesh", "give either `file` or `generate`, not both")),
            (None, None) => return Err(VemError::config("mesh", "missing mesh source (`file` or `generate`)")),
            _ => {}
        }
        let m = &self.material;
        if !(m.young > 0.0) {
            return Err(VemError::config("material.young", format!("must be positive, got {}", m.young)));
        }
        if !(-1.0 < m.nu && m.nu < 0.5) {
            return Err(VemError::config("material.nu", format!("must lie in (-1, 0.5), got {}", m.nu)));
        }
        if !(m.thickness > 0.0) {
            return Err(VemError::config("material.thickness", "must be positive"));
        }
        match (self.analysis, m.sigma_yield) {
            (Analysis::PlasticAxisym, None) => {
                return Err(VemError::config("material.sigma_yield", "required by plastic_axisym"));
            }
            (Analysis::PlasticAxisym, Some(sy)) if !(sy > 0.0) => {
                return Err(VemError::config("material.sigma_yield", "must be positive"));
            }
            (Analysis::PlasticAxisym, Some(_)) if !(m.hardening >= 0.0) => {
                return Err(VemError::config("material.hardening", "must be non-negative"));
            }
            _ => {}
        }
        if self.supports.is_empty() {
            return Err(VemError::config("supports", "at least one support is required"));
        }
        if self.loads.is_empty() {
            return Err(VemError::config("loads", "at least one load is required"));
        }
        if self.exact.is_some() && !self.analysis.is_axisymmetric() {
            return Err(VemError::config("exact", "closed-form references are axisymmetric"));
        }
        self.controls(None).map_err(|e| VemError::config("solver", e.to_string()))?;
        Ok(())
    }

    pub fn build_mesh(&self) -> Result<PolyMesh> {
        match (&self.mesh.file, &self.mesh.generate) {
            (Some(file), None) => {
                load_mesh(file).map_err(|e| VemError::config("mesh.file", format!("{}: {e}", file.display())))
            }
            (None, Some(g)) => g.build(),
            _ => Err(VemError::config("mesh", "exactly one mesh source is required")),
        }
    }

    pub fn formulation(&self) -> Formulation {
        let thickness = self.material.thickness;
        match self.analysis {
            Analysis::Elastic2dPlaneStrain => Formulation::PlaneStrain { thickness },
            Analysis::Elastic2dPlaneStress => Formulation::PlaneStress { thickness },
            Analysis::ElasticAxisym | Analysis::PlasticAxisym => Formulation::Axisymmetric,
        }
    }

    pub fn elastic(&self) -> Result<Elastic> {
        Elastic::new(self.material.young, self.material.nu)
    }

    pub fn nonlinear_material(&self) -> Result<Material> {
        let m = &self.material;
        match (self.analysis, m.sigma_yield) {
            (Analysis::PlasticAxisym, Some(sy)) => {
                Ok(Material::Plastic(PlasticParams::new(m.young, m.nu, sy, m.hardening)?))
            }
            (Analysis::PlasticAxisym, None) => Err(VemError::config("material.sigma_yield", "required by plastic_axisym")),
            _ => Ok(Material::Elastic),
        }
    }

    /// Solver controls; `monitor` is the resolved global dof, if any.
    pub fn controls(&self, monitor: Option<usize>) -> Result<SolveControls> {
        let s = &self.solver;
        let path = match s.control {
            ControlKind::Load => PathControl::Load {
                steps: s.steps,
                target_lambda: s.target_lambda.unwrap_or(1.0),
            },
            ControlKind::ArcLength => PathControl::ArcLength {
                initial_increment: s.initial_increment,
                max_steps: s.max_steps,
                target_lambda: s.target_lambda,
                max_displacement: s.max_displacement,
            },
        };
        let controls = SolveControls {
            path,
            tol: s.tol,
            max_iter: s.max_iter,
            monitor,
            stabilization: match s.stabilization {
                StabilizationKind::Accumulated => StabilizationHistory::Accumulated,
                StabilizationKind::StepIncrement => StabilizationHistory::StepIncrement,
            },
            ..Default::default()
        };
        controls.validate()?;
        Ok(controls)
    }

    /// Global dof of the monitored displacement: the first selected node.
    pub fn monitor_dof(&self, mesh: &PolyMesh) -> Result<Option<usize>> {
        let Some(m) = &self.solver.monitor else { return Ok(None) };
        let nodes = m
            .at
            .select(mesh)
            .map_err(|e| VemError::config("solver.monitor.at", e.to_string()))?;
        Ok(Some(2 * nodes[0] + m.dir.offset()))
    }
}

/// Human-readable `line:column` for a byte offset.
fn toml_error(text: &str, e: &toml::de::Error, path: Option<String>) -> VemError {
    let at = e.span().map(|s| locate(text, s.start)).unwrap_or_else(|| "<document>".into());
    VemError::config(field_at(path, at), e.message())
}

/// `path (position)`, or just the position at the document root.
fn field_at(path: Option<String>, at: String) -> String {
    match path {
        Some(p) if !p.is_empty() && p != "." => format!("{p} ({at})"),
        _ => at,
    }
}

fn locate(text: &str, offset: usize) -> String {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    format!("line {line} column {col}")
}

#[cfg(test)]
mod tests {
    use super::*;

    const CYLINDER: &str = r#"
analysis = "elastic_axisym"

[mesh.generate]
kind = "annulus"
a = 4.0
b = 10.0
z0 = 0.0
z1 = 1.0
n_r = 6
n_z = 2

[material]
young = 1000.0
nu = 0.2

[[supports]]
nodes = { select = "min", axis = "z" }
fix = ["z"]

[[supports]]
nodes = { select = "max", axis = "z" }
fix = ["z"]

[[loads]]
type = "pressure"
on = { select = "coord", axis = "r", value = 4.0 }
p = 10.0

[exact]
kind = "lame_cylinder"
p = 10.0
a = 4.0
b = 10.0
"#;

    #[test]
    fn parses_cylinder() {
        let cfg = RunConfig::from_toml(CYLINDER).unwrap();
        assert_eq!(cfg.analysis, Analysis::ElasticAxisym);
        assert_eq!(cfg.supports.len(), 2);
        assert_eq!(cfg.build_mesh().unwrap().n_elements(), 12);
        assert_eq!(cfg.output.dir, PathBuf::from("out"));
    }

    #[test]
    fn bad_analysis_names_field() {
        let text = CYLINDER.replace("elastic_axisym", "elastic_axi");
        let err = RunConfig::from_toml(&text).unwrap_err();
        assert!(matches!(err, VemError::Config { .. }), "{err}");
        assert!(err.to_string().contains("elastic_axi"), "{err}");
    }

    #[test]
    fn plastic_requires_yield() {
        let text = CYLINDER.replace("elastic_axisym", "plastic_axisym");
        let err = RunConfig::from_toml(&text).unwrap_err();
        assert!(err.to_string().contains("material.sigma_yield"), "{err}");
    }

    #[test]
    fn two_mesh_sources_rejected() {
        let text = CYLINDER.replace("[mesh.generate]", "[mesh]\nfile = \"m.json\"\n[mesh.generate]");
        let err = RunConfig::from_toml(&text).unwrap_err();
        assert!(err.to_string().contains("`mesh`"), "{err}");
    }

    #[test]
    fn json_round_trip() {
        let cfg = RunConfig::from_toml(CYLINDER).unwrap();
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_json(&json).unwrap(), cfg);
    }

    #[test]
    fn refined_generator() {
        let cfg = RunConfig::from_toml(CYLINDER).unwrap();
        let g = cfg.mesh.generate.unwrap().refined(2);
        assert_eq!(g.build().unwrap().n_elements(), 48);
    }
}
