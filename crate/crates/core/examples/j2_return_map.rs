//! Radial return along a monotone strain path, with the finite-difference
//! check of the consistent tangent at each step.

use axivem::j2::{consistent_tangent_check, radial_return, ElementState, PlasticParams};
use nalgebra::Vector4;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = PlasticParams::new(1000.0, 0.3, 10.0, 50.0)?;
    let direction = Vector4::new(1.0, -0.4, 0.6, 0.2);
    let mut state = ElementState::virgin(&params);
    println!("{:>10} {:>12} {:>12} {:>12}", "scale", "von Mises", "alpha", "tangent err");
    for k in 1..=10 {
        let eps = direction * (0.004 * k as f64);
        let err = consistent_tangent_check(&params, &state, &eps)?;
        state = radial_return(&params, &state, &eps)?;
        println!(
            "{:>10.4} {:>12.5} {:>12.5e} {err:>12.2e}",
            0.004 * k as f64,
            state.von_mises(),
            state.alpha
        );
    }
    Ok(())
}
