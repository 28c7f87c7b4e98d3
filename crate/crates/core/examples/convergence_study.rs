//! L2 displacement convergence under uniform refinement for the cylinder
//! and the sphere, on convex and concave meshes.

use axivem::config::{Analysis, ExactSolution, MaterialConfig, MeshGenerator, MeshSource, RunConfig};
use axivem::run::convergence_study;
use axivem::solver::{Direction, Load, NodeSelector, Support};

fn config(generator: MeshGenerator, exact: ExactSolution, nu: f64) -> RunConfig {
    let sphere = matches!(exact, ExactSolution::LameSphere { .. });
    let mut supports = vec![Support {
        nodes: NodeSelector::Min { axis: Direction::Z },
        fix: vec![Direction::Z],
    }];
    if sphere {
        supports.push(Support { nodes: NodeSelector::Axis, fix: vec![Direction::R] });
    } else {
        supports.push(Support {
            nodes: NodeSelector::Max { axis: Direction::Z },
            fix: vec![Direction::Z],
        });
    }
    let on = if sphere {
        NodeSelector::Radius { value: 4.0 }
    } else {
        NodeSelector::Coord { axis: Direction::R, value: 4.0 }
    };
    RunConfig {
        analysis: Analysis::ElasticAxisym,
        mesh: MeshSource { file: None, generate: Some(generator) },
        material: MaterialConfig { young: 1000.0, nu, sigma_yield: None, hardening: 0.0, thickness: 1.0 },
        supports,
        loads: vec![Load::Pressure { on, p: 10.0 }],
        solver: Default::default(),
        output: Default::default(),
        exact: Some(exact),
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for concave in [false, true] {
        for nu in [0.2, 0.49999] {
            let cyl = config(
                MeshGenerator::Annulus { a: 4.0, b: 10.0, z0: 0.0, z1: 1.0, n_r: 3, n_z: 1, concave },
                ExactSolution::LameCylinder { p: 10.0, a: 4.0, b: 10.0 },
                nu,
            );
            let sph = config(
                MeshGenerator::HalfDiskShell { a: 4.0, b: 10.0, n_r: 2, n_theta: 4, concave },
                ExactSolution::LameSphere { p: 10.0, a: 4.0, b: 10.0 },
                nu,
            );
            for (name, cfg) in [("cylinder", cyl), ("sphere", sph)] {
                let report = convergence_study(&cfg, 5)?;
                let errors: Vec<String> = report.levels.iter().map(|l| format!("{:.2e}", l.l2_error)).collect();
                println!(
                    "{name:<8} concave {concave:<5} nu {nu:<7}: slope {:.3}  errors {}",
                    report.slope,
                    errors.join(" ")
                );
            }
        }
    }
    Ok(())
}
