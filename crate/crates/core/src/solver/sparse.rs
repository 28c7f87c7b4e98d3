//! Sparse symmetric assembly and direct factorization on top of faer.

use faer::prelude::*;
use faer::sparse::{SparseColMat, Triplet};
use faer::Side;
use nalgebra::{DMatrix, DVector};

use crate::error::{Result, VemError};

/// Normwise backward error accepted after a direct solve.
const SOLVE_BACKWARD_ERROR: f64 = 1e-10;
/// Residual relative to the right-hand side; catches inconsistent systems
/// whose huge solutions would otherwise hide behind a small backward error.
const SOLVE_RESIDUAL_REL: f64 = 1e-3;
/// Iterative refinement sweeps for ill-conditioned systems.
const REFINE_SWEEPS: usize = 3;

/// Triplet accumulator over the free dofs. Duplicate entries are summed on
/// conversion.
#[derive(Debug, Clone)]
pub struct TripletMatrix {
    n: usize,
    entries: Vec<Triplet<usize, usize, f64>>,
}

impl TripletMatrix {
    pub fn new(n: usize) -> Self {
        Self { n, entries: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Scatters an element matrix; `map[k]` is the free index of local dof
    /// `k`, or `None` for a constrained dof.
    pub fn add_element(&mut self, map: &[Option<usize>], ke: &DMatrix<f64>) {
        for (a, ra) in map.iter().enumerate() {
            let Some(i) = *ra else { continue };
            for (b, rb) in map.iter().enumerate() {
                let Some(j) = *rb else { continue };
                let v = ke[(a, b)];
                if v != 0.0 {
                    self.entries.push(Triplet::new(i, j, v));
                }
            }
        }
    }

    pub fn to_csc(&self) -> Result<SparseColMat<usize, f64>> {
        SparseColMat::try_new_from_triplets(self.n, self.n, &self.entries)
            .map_err(|e| VemError::InvalidInput(format!("sparse assembly failed: {e:?}")))
    }

    /// Dense copy, for small systems and tests.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for t in &self.entries {
            m[(t.row, t.col)] += t.val;
        }
        m
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let mut rows = vec![0.0; self.n];
        for t in &self.entries {
            rows[t.row] += t.val.abs();
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    /// Sparse matrix-vector product.
    pub fn mul(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut y = DVector::zeros(self.n);
        for t in &self.entries {
            y[t.row] += t.val * x[t.col];
        }
        y
    }
}

#[allow(clippy::large_enum_variant)]
enum Factor {
    Cholesky(faer::sparse::linalg::solvers::Llt<usize, f64>),
    Lu(faer::sparse::linalg::solvers::Lu<usize, f64>),
}

/// Factorized system matrix. Cholesky is tried first; indefinite matrices
/// (past a limit point) fall back to LU.
pub struct Factorized {
    matrix: TripletMatrix,
    factor: Factor,
}

impl Factorized {
    pub fn new(matrix: TripletMatrix) -> Result<Self> {
        let csc = matrix.to_csc()?;
        let factor = match csc.sp_cholesky(Side::Lower) {
            Ok(llt) => Factor::Cholesky(llt),
            Err(err) => {
                log::info!("Cholesky failed ({err:?}), matrix is not positive definite; using LU");
                let lu = csc
                    .sp_lu()
                    .map_err(|e| VemError::Singular(format!("LU factorization failed: {e:?}")))?;
                Factor::Lu(lu)
            }
        };
        Ok(Self { matrix, factor })
    }

    pub fn is_positive_definite(&self) -> bool {
        matches!(self.factor, Factor::Cholesky(_))
    }

    fn apply(&self, rhs: &DVector<f64>) -> Result<DVector<f64>> {
        let n = self.matrix.dim();
        let mut x = Mat::<f64>::from_fn(n, 1, |i, _| rhs[i]);
        match &self.factor {
            Factor::Cholesky(f) => f.solve_in_place(x.as_mut()),
            Factor::Lu(f) => f.solve_in_place(x.as_mut()),
        }
        let sol = DVector::from_fn(n, |i, _| x[(i, 0)]);
        if sol.iter().any(|v| !v.is_finite()) {
            return Err(VemError::Singular("direct solve produced non-finite values".into()));
        }
        Ok(sol)
    }

    pub fn solve(&self, rhs: &DVector<f64>) -> Result<DVector<f64>> {
        let scale = rhs.norm();
        let mut sol = self.apply(rhs)?;
        let mut r = rhs - self.matrix.mul(&sol);
        let mut res = r.norm();
        for _ in 0..REFINE_SWEEPS {
            if res <= f64::EPSILON * 1e2 * scale {
                break;
            }
            let trial = &sol + self.apply(&r)?;
            let r_trial = rhs - self.matrix.mul(&trial);
            let res_trial = r_trial.norm();
            if res_trial >= res {
                break;
            }
            sol = trial;
            r = r_trial;
            res = res_trial;
        }
        let backward = res / (self.matrix.norm_inf() * sol.amax() * (self.matrix.dim() as f64).sqrt() + scale);
        if scale > 0.0 && (backward > SOLVE_BACKWARD_ERROR || res > SOLVE_RESIDUAL_REL * scale) {
            return Err(VemError::Singular(format!(
                "direct solve residual {res:e} (backward error {backward:e}, rhs norm {scale:e})"
            )));
        }
        Ok(sol)
    }
}

/// One-shot factorize and solve.
pub fn solve(matrix: TripletMatrix, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    Factorized::new(matrix)?.solve(rhs)
}
