//! Generates a concave mesh, writes and reloads the JSON mesh file, solves
//! a small problem and writes CSV and VTK results.

use axivem::config::RunConfig;
use axivem::mesh::{gen_annulus, load_mesh};
use axivem::run::{execute, write_outputs};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("axivem_mesh_io");
    std::fs::create_dir_all(&dir)?;
    let mesh = gen_annulus(4.0, 10.0, 0.0, 1.0, 12, 3, true)?;
    let path = dir.join("annulus.json");
    mesh.save(&path)?;
    let back = load_mesh(&path)?;
    let stats = back.stats()?;
    println!(
        "{}: {} nodes, {} elements with {}..{} vertices, h = {:.3}",
        path.display(),
        back.n_nodes(),
        stats.n_elements,
        stats.min_nv,
        stats.max_nv,
        stats.h
    );

    let cfg = RunConfig::from_toml(&format!(
        r#"
analysis = "elastic_axisym"
[mesh]
file = "{}"
[material]
young = 1000.0
nu = 0.3
[[supports]]
nodes = {{ select = "min", axis = "z" }}
fix = ["z"]
[[supports]]
nodes = {{ select = "max", axis = "z" }}
fix = ["z"]
[[loads]]
type = "pressure"
on = {{ select = "coord", axis = "r", value = 4.0 }}
p = 1.0
"#,
        path.display()
    ))?;
    let outcome = execute(&cfg)?;
    for f in write_outputs(&outcome, &dir, true)? {
        println!("wrote {}", f.display());
    }
    Ok(())
}
