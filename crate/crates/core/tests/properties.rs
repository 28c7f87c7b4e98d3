mod common;

use approx::assert_relative_eq;
use axivem::bench::{cylinder_model, MeshKind, PLASTIC_NU, PLASTIC_YIELD, PLASTIC_YOUNG};
use axivem::j2::{consistent_tangent_check, radial_return, von_mises, ElementState, PlasticParams};
use axivem::mesh::gen_annulus;
use axivem::mvc::mvc_shape;
use axivem::oracles::{HillCylinder, HillSphere, LameCylinder, LameSphere};
use axivem::polygeom::{compute_geometry, signed_area, Vec2};
use axivem::solver::{
    Direction, Elastic, Formulation, Material, Model, NodeSelector, NonlinearSolver, SolveControls, Support,
};
use axivem::vem::{build_projector, plane_strain_c, stiffness_2d};
use common::{interior_point, linear_field, star_polygon};
use nalgebra::{DMatrix, DVector, Vector4};
use proptest::prelude::*;

proptest! {
    #[test]
    fn mvc_partition_of_unity_and_linear_precision(
        (poly, c) in star_polygon(), edge in 0usize..9, s in 0.1..0.9f64, t in 0.1..0.85f64,
    ) {
        let x = interior_point(&poly, c, edge, s, t);
        let shape = mvc_shape(&poly, x).unwrap();
        let scale = compute_geometry(&poly).unwrap().diameter;
        let sum: f64 = shape.values.iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-12, "sum {sum}");
        let rx: Vec2 = shape.values.iter().zip(poly.vertices()).map(|(p, v)| v * *p).sum();
        prop_assert!((rx - x).norm() < 1e-11 * scale, "{rx:?} vs {x:?}");
        let gsum: Vec2 = shape.gradients.iter().sum();
        prop_assert!(gsum.norm() * scale < 1e-9, "gradient sum {gsum:?}");
    }

    #[test]
    fn mvc_gradient_matches_finite_differences(
        (poly, c) in star_polygon(), edge in 0usize..9, s in 0.2..0.8f64, t in 0.2..0.7f64,
    ) {
        let x = interior_point(&poly, c, edge, s, t);
        let h = 1e-6 * compute_geometry(&poly).unwrap().diameter;
        let shape = mvc_shape(&poly, x).unwrap();
        let at = |d: Vec2| mvc_shape(&poly, x + d).unwrap().values;
        let (px, mx) = (at(Vec2::new(h, 0.0)), at(Vec2::new(-h, 0.0)));
        let (py, my) = (at(Vec2::new(0.0, h)), at(Vec2::new(0.0, -h)));
        let gmax = shape.gradients.iter().map(|g| g.norm()).fold(0.0, f64::max);
        for i in 0..shape.values.len() {
            let fd = Vec2::new((px[i] - mx[i]) / (2.0 * h), (py[i] - my[i]) / (2.0 * h));
            prop_assert!((fd - shape.gradients[i]).norm() <= 1e-5 * gmax, "vertex {i}: {fd:?} vs {:?}", shape.gradients[i]);
        }
    }

    #[test]
    fn shoelace_matches_fan_area_and_normals_close((poly, c) in star_polygon()) {
        let g = compute_geometry(&poly).unwrap();
        let v = poly.vertices();
        let fan: f64 = (0..v.len()).map(|i| signed_area(&[c, v[i], v[(i + 1) % v.len()]])).sum();
        prop_assert!((g.area - fan).abs() <= 1e-12 * g.diameter * g.diameter);
        let closure: Vec2 = g.edge_normals.iter().zip(&g.edge_lengths).map(|(n, l)| n * *l).sum();
        prop_assert!(closure.norm() <= 1e-12 * g.perimeter());
    }

    #[test]
    fn stiffness_is_translation_invariant((poly, _c) in star_polygon(), dx in -50.0..50.0f64, dy in -50.0..50.0f64) {
        let c = plane_strain_c(100.0, 0.3);
        let g = compute_geometry(&poly).unwrap();
        let moved = poly.translated(Vec2::new(dx, dy));
        let gm = compute_geometry(&moved).unwrap();
        let k = stiffness_2d(&poly, &g, &c, 1.0).unwrap();
        let km = stiffness_2d(&moved, &gm, &c, 1.0).unwrap();
        prop_assert!((&k - &km).amax() <= 1e-8 * k.amax(), "{}", (&k - &km).amax() / k.amax());
    }

    #[test]
    fn j2_return_is_admissible_and_tangent_consistent(
        dir in prop::array::uniform4(-1.0..1.0f64),
        magnitude in 0.0..0.05f64,
        hardening in prop::sample::select(vec![0.0, 10.0, 200.0]),
        pre in 0.0..0.03f64,
    ) {
        let params = PlasticParams::new(1000.0, 0.3, 10.0, hardening).unwrap();
        let d = Vector4::from(dir);
        prop_assume!(d.norm() > 0.1);
        let d = d / d.norm();
        let old = radial_return(&params, &ElementState::virgin(&params), &old_strain(pre)).unwrap();
        let eps = old_strain(pre) + d * magnitude;

        // Keep away from the yield surface, where the return map has a kink.
        let elastic = PlasticParams::new(1000.0, 0.3, 1e30, 0.0).unwrap();
        let trial = radial_return(&elastic, &ElementState { alpha: 0.0, ..old.clone() }, &eps).unwrap();
        let ratio = von_mises(&trial.stress) / params.flow_stress(old.alpha);
        prop_assume!((ratio - 1.0).abs() > 0.02);

        let st = radial_return(&params, &old, &eps).unwrap();
        prop_assert!(von_mises(&st.stress) <= params.flow_stress(st.alpha) * (1.0 + 1e-10) + 1e-10);
        prop_assert!(st.alpha >= old.alpha);
        let err = consistent_tangent_check(&params, &old, &eps).unwrap();
        prop_assert!(err < 1e-4, "tangent error {err}");
    }

    #[test]
    fn hill_fronts_are_monotone(u1 in 0.01..0.99f64, u2 in 0.01..0.99f64) {
        prop_assume!((u1 - u2).abs() > 1e-6);
        let cyl = HillCylinder::new(4.0, 10.0, 10.0).unwrap();
        let sph = HillSphere::new(4.0, 10.0, 10.0, 1000.0, 0.3).unwrap();
        let (lo, hi) = (u1.min(u2), u1.max(u2));
        let p = |f: &dyn Fn(f64) -> f64, u: f64| f(4.0) + u * (f(10.0) - f(4.0));
        let pc = |c| cyl.pressure(c);
        let ps = |c| sph.pressure(c);
        prop_assert!(cyl.front(p(&pc, lo)).unwrap() < cyl.front(p(&pc, hi)).unwrap());
        prop_assert!(sph.front(p(&ps, lo)).unwrap() < sph.front(p(&ps, hi)).unwrap());
    }

    #[test]
    fn hill_branches_are_continuous(c in 4.0..10.0f64) {
        let cyl = HillCylinder::new(4.0, 10.0, 10.0).unwrap();
        let (e, p) = (cyl.elastic_branch(c, c), cyl.plastic_branch(c, c));
        prop_assert!((e.0 - p.0).abs() <= 1e-10 && (e.1 - p.1).abs() <= 1e-10);
        let sph = HillSphere::new(4.0, 10.0, 10.0, 1000.0, 0.3).unwrap();
        let (e, p) = (sph.elastic_branch(c, c), sph.plastic_branch(c, c));
        prop_assert!((e.0 - p.0).abs() <= 1e-10 && (e.1 - p.1).abs() <= 1e-10 && (e.2 - p.2).abs() <= 1e-10);
    }

    #[test]
    fn lame_fields_satisfy_radial_equilibrium(r in 4.01..9.99f64, nu in 0.0..0.4999f64) {
        let h = 1e-4;
        let cyl = LameCylinder::new(10.0, 4.0, 10.0, 1000.0, nu).unwrap();
        let d = (cyl.at(r + h).unwrap().sigma_r - cyl.at(r - h).unwrap().sigma_r) / (2.0 * h);
        let f = cyl.at(r).unwrap();
        prop_assert!((d + (f.sigma_r - f.sigma_t) / r).abs() < 1e-6);
        let sph = LameSphere::new(10.0, 4.0, 10.0, 1000.0, nu).unwrap();
        let d = (sph.at(r + h).unwrap().sigma_r - sph.at(r - h).unwrap().sigma_r) / (2.0 * h);
        let f = sph.at(r).unwrap();
        prop_assert!((d + 2.0 * (f.sigma_r - f.sigma_t) / r).abs() < 1e-6);
    }
}

fn old_strain(pre: f64) -> Vector4<f64> {
    Vector4::new(1.0, -0.5, 0.3, -0.5) * pre
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn projector_reproduces_basis_and_is_idempotent((poly, _c) in star_polygon()) {
        let g = compute_geometry(&poly).unwrap();
        let m = build_projector(&poly, &g, &plane_strain_c(1.0, 0.25)).unwrap();
        let id = &m.pi_tilde * &m.d;
        prop_assert!((id - DMatrix::<f64>::identity(6, 6)).amax() < 1e-9);
        let pp = &m.pi * &m.pi;
        prop_assert!((pp - &m.pi).amax() < 1e-9 * m.pi.amax().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn planar_patch_test(
        field in linear_field(),
        n_r in 1usize..6,
        n_z in 1usize..5,
        concave in any::<bool>(),
        stress in any::<bool>(),
        nu in 0.0..0.49f64,
    ) {
        let mesh = gen_annulus(1.0, 3.0, -1.0, 0.5, n_r, n_z, concave).unwrap();
        let formulation = if stress {
            Formulation::PlaneStress { thickness: 0.2 }
        } else {
            Formulation::PlaneStrain { thickness: 1.0 }
        };
        let model = Model::new(
            mesh,
            formulation,
            Elastic::new(500.0, nu).unwrap(),
            &[Support { nodes: NodeSelector::Min { axis: Direction::R }, fix: vec![Direction::R, Direction::Z] }],
            &[],
        )
        .unwrap();
        let err = model.patch_test(field).unwrap();
        prop_assert!(err <= 1e-8, "patch error {err}");
    }
}

fn plastic_cylinder_solver(model: &Model) -> NonlinearSolver<'_> {
    let params = PlasticParams::new(PLASTIC_YOUNG, PLASTIC_NU, PLASTIC_YIELD, 0.0).unwrap();
    NonlinearSolver::new(model, Material::Plastic(params), SolveControls::default()).unwrap()
}

#[test]
fn global_tangent_is_consistent() {
    let model = cylinder_model(9.29, PLASTIC_YOUNG, PLASTIC_NU, 12, 2, 1.0, MeshKind::Convex).unwrap();
    let u = model.dofs.restrict(&model.solve_linear().unwrap().u);
    let mut solver = plastic_cylinder_solver(&model);
    let (f0, k) = solver.probe(&u).unwrap();
    let dir = DVector::from_fn(u.len(), |i, _| ((i * 7919 % 13) as f64 - 6.0) / 6.0);
    let dir = &dir * (1e-2 * u.norm() / dir.norm());
    let mut errs = Vec::new();
    for k_half in 0..3 {
        let d = &dir / f64::from(1 << k_half);
        let (f1, _) = solver.probe(&(&u + &d)).unwrap();
        errs.push((f1 - &f0 - k.mul(&d)).norm());
    }
    // The Taylor remainder is second order in the perturbation.
    for w in errs.windows(2) {
        let rate = (w[0] / w[1]).log2();
        assert!(rate >= 1.8, "remainder rate {rate}: {errs:?}");
    }
}

#[test]
fn newton_converges_quadratically() {
    let model = cylinder_model(9.29, PLASTIC_YOUNG, PLASTIC_NU, 12, 2, 1.0, MeshKind::Convex).unwrap();
    let trace = plastic_cylinder_solver(&model).newton_trace(1.0).unwrap();
    assert!(trace.len() >= 3, "{trace:?}");
    let n = trace.len();
    let last = trace[n - 1] / trace[n - 2];
    assert!(last < 0.1, "last ratio {last}, trace {trace:?}");
    let f = model.dofs.restrict(&model.load).norm();
    assert!(trace[n - 1] <= 1e-8 * f);
}

#[test]
fn elastic_solution_equilibrates_internal_forces() {
    let model = cylinder_model(10.0, 1000.0, 0.2, 10, 2, 1.0, MeshKind::Concave).unwrap();
    let sol = model.solve_linear().unwrap();
    let fint = model.dofs.restrict(&model.elastic_internal_force(&sol.u).unwrap());
    let fext = model.dofs.restrict(&model.load);
    assert_relative_eq!((fint - &fext).norm() / fext.norm(), 0.0, epsilon = 1e-9);
}
