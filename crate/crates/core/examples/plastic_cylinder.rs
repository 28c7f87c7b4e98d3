//! Elastic-perfectly plastic cylinder loaded past first yield. Compares
//! the plastic front and wall stresses with the Hill solution.

use axivem::bench::{plastic_front, run_plastic_cylinder, PLASTIC_CYLINDER_P, PLASTIC_YIELD, VESSEL_A, VESSEL_B};
use axivem::oracles::{nodal_stress_average, HillCylinder};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (model, res) = run_plastic_cylinder(PLASTIC_CYLINDER_P, 20)?;
    let hill = HillCylinder::new(VESSEL_A, VESSEL_B, PLASTIC_YIELD)?;
    let c_exact = hill.front(PLASTIC_CYLINDER_P)?;
    let c = plastic_front(&model, &res.solution.alpha, |x| x.x)?;
    println!("steps: {}, front {c:?} (Hill {c_exact:.4})", res.history.len());

    let avg = nodal_stress_average(&model.mesh, &res.solution.stresses)?;
    println!("{:>6} {:>11} {:>11} {:>11} {:>11}", "r", "sigma_rr", "Hill", "sigma_tt", "Hill");
    for (n, x) in model.mesh.nodes.iter().enumerate() {
        if x.y != 0.0 || n % 5 != 0 {
            continue;
        }
        let (sr, st) = hill.stresses(x.x, c_exact)?;
        println!("{:>6.2} {:>11.4} {sr:>11.4} {:>11.4} {st:>11.4}", x.x, avg[n][0], avg[n][3]);
    }
    Ok(())
}
