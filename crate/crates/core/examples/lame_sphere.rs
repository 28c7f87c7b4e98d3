//! Thick sphere (upper quarter of the meridian section) under internal
//! pressure. Prints the profile errors over the whole wall and away from
//! the symmetry axis, where the one-point hoop strain is least accurate.

use axivem::bench::{profile_error, sphere_model, sphere_profile_errors, MeshKind};
use axivem::oracles::{nodal_stress_average, to_spherical, LameSphere};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (p, young, nu) = (10.0, 1000.0, 0.2);
    let exact = LameSphere::new(p, 4.0, 10.0, young, nu)?;
    for (n_r, n_theta) in [(20, 50), (40, 100)] {
        let model = sphere_model(p, young, nu, n_r, n_theta, MeshKind::Convex)?;
        let sol = model.solve_linear()?;
        let [eu, er, et] = sphere_profile_errors(&model, &sol, &exact, 0.2)?;
        println!(
            "{} elements: u_rho {eu:.2e}, sigma_rhorho {er:.2e}, sigma_tt {et:.2e}",
            model.mesh.n_elements()
        );

        let avg = nodal_stress_average(&model.mesh, &sol.stresses)?;
        let mut rows = Vec::new();
        for (n, x) in model.mesh.nodes.iter().enumerate() {
            let rho = x.norm();
            if x.x < 0.5 || !(4.2..=9.8).contains(&rho) {
                continue;
            }
            let s = to_spherical(&avg[n], *x);
            let f = exact.at(rho)?;
            rows.push([(s[0], f.sigma_r), (s[3], f.sigma_t)]);
        }
        println!(
            "    nodes with r >= 0.5: sigma_rhorho {:.2e}, sigma_tt {:.2e}",
            profile_error(rows.iter().map(|r| r[0])),
            profile_error(rows.iter().map(|r| r[1]))
        );
    }
    Ok(())
}
