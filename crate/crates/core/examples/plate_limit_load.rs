//! Simply supported plate under pressure, followed past yield with the
//! arc-length method until the load factor levels off.

use axivem::bench::{plateau, run_plate_limit, LIMIT_DEFLECTION, LIMIT_RADIUS, LIMIT_THICKNESS, LIMIT_YIELD};
use axivem::oracles::plate_limit_pressure;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (model, res) = run_plate_limit(90, 10, LIMIT_DEFLECTION)?;
    println!("{} elements", model.mesh.n_elements());
    println!("{:>5} {:>10} {:>12} {:>6}", "step", "p", "-u_z(0)", "iters");
    for h in &res.history {
        println!("{:>5} {:>10.5} {:>12.5} {:>6}", h.step, h.lambda, -h.monitor, h.iterations);
    }
    let theory = plate_limit_pressure(LIMIT_YIELD, LIMIT_THICKNESS, LIMIT_RADIUS)?;
    println!("plateau {:.5}, theoretical limit {theory}", plateau(&res));
    Ok(())
}
