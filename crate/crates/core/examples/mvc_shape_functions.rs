//! Mean value coordinates on a concave hexagon: values, gradients and the
//! reproduction properties.

use axivem::mvc::mvc_shape;
use axivem::polygeom::{compute_geometry, Polygon, Vec2};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let poly = Polygon::from_coords(&[[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 0.4], [0.0, 1.0], [0.0, 0.5]])?;
    let geom = compute_geometry(&poly)?;
    println!("area {:.4}, centroid ({:.4}, {:.4})", geom.area, geom.centroid.x, geom.centroid.y);

    for x in [Vec2::new(0.5, 0.3), Vec2::new(1.5, 0.5), Vec2::new(1.0, 0.2)] {
        let s = mvc_shape(&poly, x)?;
        let sum: f64 = s.values.iter().sum();
        let rx: f64 = s.values.iter().zip(poly.vertices()).map(|(p, v)| p * v.x).sum();
        let grad_sum: Vec2 = s.gradients.iter().sum();
        println!("x = ({}, {})", x.x, x.y);
        println!("    values {:?}", s.values.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>());
        println!("    sum {sum:.15}, reproduced x {rx:.15}, gradient sum ({:.1e}, {:.1e})", grad_sum.x, grad_sum.y);
    }
    Ok(())
}
