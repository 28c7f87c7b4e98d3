//! Thick cylinder under internal pressure against the Lamé solution.

use axivem::bench::{cylinder_model, cylinder_profile_errors, MeshKind};
use axivem::oracles::LameCylinder;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (p, young, nu) = (10.0, 1000.0, 0.2);
    let model = cylinder_model(p, young, nu, 30, 10, 1.0, MeshKind::Convex)?;
    let sol = model.solve_linear()?;
    let exact = LameCylinder::new(p, 4.0, 10.0, young, nu)?;

    println!("{:>8} {:>14} {:>14}", "r", "u_r", "exact");
    let mut bottom: Vec<usize> = (0..model.mesh.n_nodes()).filter(|&n| model.mesh.nodes[n].y == 0.0).collect();
    bottom.sort_by(|&a, &b| model.mesh.nodes[a].x.total_cmp(&model.mesh.nodes[b].x));
    for n in bottom.iter().step_by(5) {
        let r = model.mesh.nodes[*n].x;
        println!("{r:>8.3} {:>14.6e} {:>14.6e}", sol.ur(*n), exact.at(r)?.u_r);
    }
    let [eu, er, et] = cylinder_profile_errors(&model, &sol, &exact, 0.2)?;
    println!("profile errors: u_r {eu:.2e}, sigma_rr {er:.2e}, sigma_tt {et:.2e}");
    Ok(())
}
