//! Elastic-perfectly plastic sphere: pressure against inner-wall
//! displacement, with the Hill solution at each converged step.

use axivem::bench::{run_plastic_sphere, PLASTIC_NU, PLASTIC_SPHERE_P, PLASTIC_YIELD, PLASTIC_YOUNG, VESSEL_A, VESSEL_B};
use axivem::oracles::HillSphere;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (_, res) = run_plastic_sphere(PLASTIC_SPHERE_P, 20)?;
    let hill = HillSphere::new(VESSEL_A, VESSEL_B, PLASTIC_YIELD, PLASTIC_YOUNG, PLASTIC_NU)?;
    let first_yield = hill.pressure(VESSEL_A);
    println!("{:>8} {:>12} {:>12}", "p", "u_r(a)", "Hill");
    for h in &res.history {
        let p = h.lambda * PLASTIC_SPHERE_P;
        let exact = if p > first_yield {
            hill.fields(VESSEL_A, hill.front(p)?)?.0
        } else {
            // Elastic response scales with the pressure at first yield.
            hill.fields(VESSEL_A, VESSEL_A)?.0 * p / first_yield
        };
        println!("{p:>8.3} {:>12.6e} {exact:>12.6e}", h.monitor);
    }
    Ok(())
}
