//! Discrete model: element operators, global assembly and the linear solve.

use nalgebra::{DMatrix, DVector, Matrix3, Vector4};

use crate::axisym::{axi_stiffness_elastic, build_axi_b, AxiB, AxiC};
use crate::error::{Result, VemError};
use crate::mesh::PolyMesh;
use crate::polygeom::ElementGeometry;
use crate::solver::bc::{assemble_loads, DofMap, Load, LoadMeasure, Support};
use crate::solver::sparse::{self, TripletMatrix};
use crate::vem::{build_projector, plane_strain_c, plane_stress_c, stiffness_2d_from, ElementMatrices};

/// Kinematic setting of the cross-section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Formulation {
    PlaneStrain { thickness: f64 },
    PlaneStress { thickness: f64 },
    Axisymmetric,
}

#[derive(Debug, Clone)]
pub enum ElementOps {
    Planar { mats: ElementMatrices, geom: ElementGeometry },
    Axi(AxiB),
}

impl ElementOps {
    /// 4 x 2nv strain operator in `(eps_r, eps_z, gamma_rz, eps_t)` order.
    /// For planar elements the last row is zero.
    pub fn b(&self) -> DMatrix<f64> {
        match self {
            ElementOps::Axi(axb) => axb.b.clone(),
            ElementOps::Planar { mats, .. } => {
                let mut b = DMatrix::zeros(4, mats.b2.ncols());
                b.rows_mut(0, 3).copy_from(&mats.b2);
                b
            }
        }
    }
}

/// Elastic constants shared by all elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Elastic {
    pub young: f64,
    pub nu: f64,
}

impl Elastic {
    pub fn new(young: f64, nu: f64) -> Result<Self> {
        AxiC::new(young, nu)?;
        Ok(Self { young, nu })
    }
}

/// Mesh, element operators, constraints and the reference load.
#[derive(Debug, Clone)]
pub struct Model {
    pub mesh: PolyMesh,
    pub formulation: Formulation,
    pub material: Elastic,
    pub dofs: DofMap,
    /// Reference external force (`lambda = 1`) on all `2N` dofs.
    pub load: DVector<f64>,
    pub elements: Vec<ElementOps>,
    supports: Vec<Support>,
}

/// Converged displacement field and element results.
#[derive(Debug, Clone)]
pub struct Solution {
    pub u: DVector<f64>,
    pub lambda: f64,
    pub strains: Vec<Vector4<f64>>,
    pub stresses: Vec<Vector4<f64>>,
    /// Equivalent plastic strain per element (zero for elastic runs).
    pub alpha: Vec<f64>,
}

impl Solution {
    pub fn ur(&self, node: usize) -> f64 {
        self.u[2 * node]
    }

    pub fn uz(&self, node: usize) -> f64 {
        self.u[2 * node + 1]
    }
}

impl Model {
    pub fn new(
        mesh: PolyMesh,
        formulation: Formulation,
        material: Elastic,
        supports: &[Support],
        loads: &[Load],
    ) -> Result<Self> {
        let measure = match formulation {
            Formulation::Axisymmetric => {
                mesh.validate_axisymmetric()?;
                LoadMeasure::Axisymmetric
            }
            Formulation::PlaneStrain { thickness } | Formulation::PlaneStress { thickness } => {
                if !(thickness > 0.0) {
                    return Err(VemError::InvalidInput(format!("thickness must be positive, got {thickness}")));
                }
                LoadMeasure::Planar { thickness }
            }
        };
        let c_in_plane = match formulation {
            Formulation::PlaneStress { .. } => plane_stress_c(material.young, material.nu),
            _ => plane_strain_c(material.young, material.nu),
        };
        let elements = (0..mesh.n_elements())
            .map(|e| build_element(&mesh, e, formulation, &c_in_plane).map_err(|err| err.at_element(e)))
            .collect::<Result<Vec<_>>>()?;
        let dofs = DofMap::from_supports(&mesh, supports)?;
        let load = assemble_loads(&mesh, loads, measure)?;
        let model = Self {
            mesh,
            formulation,
            material,
            dofs,
            load,
            elements,
            supports: supports.to_vec(),
        };
        model.check_rigid_modes()?;
        Ok(model)
    }

    pub fn supports(&self) -> &[Support] {
        &self.supports
    }

    /// Full dof indices of element `e`.
    pub fn element_dofs(&self, e: usize) -> Vec<usize> {
        self.mesh.elements[e].iter().flat_map(|&n| [2 * n, 2 * n + 1]).collect()
    }

    pub fn gather(&self, e: usize, full: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(
            2 * self.mesh.elements[e].len(),
            self.element_dofs(e).into_iter().map(|d| full[d]),
        )
    }

    pub fn scatter_add(&self, e: usize, local: &DVector<f64>, full: &mut DVector<f64>) {
        for (k, d) in self.element_dofs(e).into_iter().enumerate() {
            full[d] += local[k];
        }
    }

    /// Elastic stiffness of element `e`.
    pub fn element_stiffness(&self, e: usize) -> Result<DMatrix<f64>> {
        match (&self.elements[e], self.formulation) {
            (ElementOps::Axi(axb), _) => {
                let c = AxiC::new(self.material.young, self.material.nu)?;
                Ok(axi_stiffness_elastic(axb, &c))
            }
            (ElementOps::Planar { mats, geom }, Formulation::PlaneStress { thickness }) => Ok(
                stiffness_2d_from(mats, geom, &plane_stress_c(self.material.young, self.material.nu), thickness),
            ),
            (ElementOps::Planar { mats, geom }, Formulation::PlaneStrain { thickness }) => Ok(
                stiffness_2d_from(mats, geom, &plane_strain_c(self.material.young, self.material.nu), thickness),
            ),
            _ => unreachable!("planar element in axisymmetric model"),
        }
    }

    /// Assembles the free-dof matrix from per-element matrices.
    pub fn assemble<F>(&self, mut element_matrix: F) -> Result<TripletMatrix>
    where
        F: FnMut(usize) -> Result<DMatrix<f64>>,
    {
        let mut t = TripletMatrix::new(self.dofs.n_free());
        for e in 0..self.mesh.n_elements() {
            let ke = element_matrix(e).map_err(|err| err.at_element(e))?;
            t.add_element(&self.dofs.element_map(&self.mesh.elements[e]), &ke);
        }
        Ok(t)
    }

    pub fn assemble_elastic(&self) -> Result<TripletMatrix> {
        self.assemble(|e| self.element_stiffness(e))
    }

    /// Linear elastic strains and stresses for a displacement field.
    pub fn elastic_response(&self, u: &DVector<f64>) -> (Vec<Vector4<f64>>, Vec<Vector4<f64>>) {
        let c = self.stress_matrix();
        let strains: Vec<Vector4<f64>> = (0..self.mesh.n_elements())
            .map(|e| {
                let s = self.elements[e].b() * self.gather(e, u);
                Vector4::new(s[0], s[1], s[2], s[3])
            })
            .collect();
        let stresses = strains
            .iter()
            .map(|eps| {
                let mut s = c * eps;
                if let Formulation::PlaneStrain { .. } = self.formulation {
                    // Out-of-plane stress of plane strain.
                    s[3] = self.material.nu * (s[0] + s[1]);
                }
                s
            })
            .collect();
        (strains, stresses)
    }

    /// 4x4 stress-strain matrix matching the strain ordering.
    fn stress_matrix(&self) -> nalgebra::Matrix4<f64> {
        match self.formulation {
            Formulation::Axisymmetric => AxiC::new(self.material.young, self.material.nu)
                .map(|c| c.c)
                .unwrap_or_else(|_| nalgebra::Matrix4::zeros()),
            Formulation::PlaneStrain { .. } | Formulation::PlaneStress { .. } => {
                let c3: Matrix3<f64> = match self.formulation {
                    Formulation::PlaneStress { .. } => plane_stress_c(self.material.young, self.material.nu),
                    _ => plane_strain_c(self.material.young, self.material.nu),
                };
                let mut c = nalgebra::Matrix4::zeros();
                c.fixed_view_mut::<3, 3>(0, 0).copy_from(&c3);
                c
            }
        }
    }

    /// Fails when a rigid body motion leaves every constrained dof at zero.
    fn check_rigid_modes(&self) -> Result<()> {
        type Mode<'a> = Box<dyn Fn(usize) -> (f64, f64) + 'a>;
        let modes: Vec<(&str, Mode<'_>)> = match self.formulation {
            Formulation::Axisymmetric => vec![("axial translation", Box::new(|_| (0.0, 1.0)))],
            _ => vec![
                ("translation in r", Box::new(|_| (1.0, 0.0))),
                ("translation in z", Box::new(|_| (0.0, 1.0))),
                (
                    "in-plane rotation",
                    Box::new(|n| {
                        let p = self.mesh.nodes[n];
                        (-p.y, p.x)
                    }),
                ),
            ],
        };
        let fixed: Vec<usize> = (0..self.dofs.n_total()).filter(|&d| self.dofs.is_fixed(d)).collect();
        // Columns: restriction of each mode to the constrained dofs.
        let mut m = DMatrix::zeros(fixed.len().max(1), modes.len());
        for (k, (_, mode)) in modes.iter().enumerate() {
            for (row, &d) in fixed.iter().enumerate() {
                let (ur, uz) = mode(d / 2);
                m[(row, k)] = if d % 2 == 0 { ur } else { uz };
            }
        }
        let sv = m.clone().svd(false, false).singular_values;
        let smax = sv.max().max(1.0);
        if sv.iter().filter(|s| **s > 1e-10 * smax).count() < modes.len() {
            let free_mode = modes
                .iter()
                .find(|(_, f)| fixed.iter().all(|&d| {
                    let (ur, uz) = f(d / 2);
                    (if d % 2 == 0 { ur } else { uz }).abs() < 1e-12
                }))
                .map_or("a combination of rigid modes", |(name, _)| name);
            return Err(VemError::Singular(format!("rigid mode unconstrained ({free_mode})")));
        }
        Ok(())
    }

    /// Direct solve of `K u = F` with homogeneous constraints eliminated.
    pub fn solve_linear(&self) -> Result<Solution> {
        let k = self.assemble_elastic()?;
        let f = self.dofs.restrict(&self.load);
        let u = if f.norm() == 0.0 {
            DVector::zeros(self.dofs.n_total())
        } else {
            self.dofs.expand(&sparse::solve(k, &f)?)
        };
        let (strains, stresses) = self.elastic_response(&u);
        let n = strains.len();
        Ok(Solution {
            u,
            lambda: 1.0,
            strains,
            stresses,
            alpha: vec![0.0; n],
        })
    }

    /// `K u` on all dofs (constrained rows included): the nodal internal
    /// forces of a linear elastic field, whose constrained entries are the
    /// reactions.
    pub fn elastic_internal_force(&self, u: &DVector<f64>) -> Result<DVector<f64>> {
        let mut f = DVector::zeros(self.dofs.n_total());
        for e in 0..self.mesh.n_elements() {
            let ke = self.element_stiffness(e)?;
            self.scatter_add(e, &(ke * self.gather(e, u)), &mut f);
        }
        Ok(f)
    }

    /// Displacement patch test: boundary nodes take the linear field
    /// `u = (c[0] + c[1] r + c[2] z, c[3] + c[4] r + c[5] z)`, the interior
    /// is solved without loads. Returns the largest nodal deviation from the
    /// field. The model's own supports are ignored.
    pub fn patch_test(&self, c: [f64; 6]) -> Result<f64> {
        let field = |p: crate::polygeom::Vec2| [c[0] + c[1] * p.x + c[2] * p.y, c[3] + c[4] * p.x + c[5] * p.y];
        let n_nodes = self.mesh.n_nodes();
        let mut fixed = std::collections::BTreeSet::new();
        for edge in self.mesh.boundary_edges() {
            for n in [edge.nodes.0, edge.nodes.1] {
                fixed.insert(2 * n);
                fixed.insert(2 * n + 1);
            }
        }
        let dofs = DofMap::new(n_nodes, &fixed);
        let mut u_b = DVector::zeros(2 * n_nodes);
        for &d in &fixed {
            u_b[d] = field(self.mesh.nodes[d / 2])[d % 2];
        }
        let mut k = TripletMatrix::new(dofs.n_free());
        let mut rhs = DVector::zeros(dofs.n_free());
        for e in 0..self.mesh.n_elements() {
            let ke = self.element_stiffness(e).map_err(|err| err.at_element(e))?;
            let map = dofs.element_map(&self.mesh.elements[e]);
            k.add_element(&map, &ke);
            let fe = &ke * self.gather(e, &u_b);
            for (a, slot) in map.iter().enumerate() {
                if let Some(i) = slot {
                    rhs[*i] -= fe[a];
                }
            }
        }
        let u = if dofs.n_free() > 0 {
            &u_b + dofs.expand(&sparse::solve(k, &rhs)?)
        } else {
            u_b
        };
        Ok((0..2 * n_nodes)
            .map(|d| (u[d] - field(self.mesh.nodes[d / 2])[d % 2]).abs())
            .fold(0.0, f64::max))
    }
}

fn build_element(mesh: &PolyMesh, e: usize, formulation: Formulation, c: &Matrix3<f64>) -> Result<ElementOps> {
    let (poly, geom) = mesh.geometry(e)?;
    match formulation {
        Formulation::Axisymmetric => Ok(ElementOps::Axi(build_axi_b(&poly, &geom, c)?)),
        _ => Ok(ElementOps::Planar {
            mats: build_projector(&poly, &geom, c)?,
            geom,
        }),
    }
}
