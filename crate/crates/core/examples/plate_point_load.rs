//! Circular plate with a centre point load, simply supported and clamped,
//! for several Poisson ratios. The centre deflection is normalized by the
//! bending plus shear deflection of plate theory.

use axivem::bench::{plate_center_ratio, plate_point_model, plate_table_value, MeshKind, PLATE_LOAD};
use axivem::oracles::{PlatePoint, PlateSupport};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (r_o, t, young) = (10.0, 0.25, 1000.0);
    println!("{:>8} {:>8} {:>10} {:>10}", "support", "nu", "ratio", "reference");
    for support in [PlateSupport::Simple, PlateSupport::Fixed] {
        for nu in [0.0, 0.3, 0.49999] {
            let model = plate_point_model(PLATE_LOAD, r_o, t, young, nu, support, 250, 9, MeshKind::Convex)?;
            let exact = PlatePoint::new(PLATE_LOAD, r_o, t, young, nu, support)?;
            let sol = model.solve_linear()?;
            let ratio = plate_center_ratio(&model, &sol, &exact)?;
            let reference = plate_table_value(nu, support, MeshKind::Convex).unwrap_or(f64::NAN);
            println!("{:>8} {nu:>8} {ratio:>10.4} {reference:>10.4}", format!("{support:?}"));
        }
    }
    Ok(())
}
