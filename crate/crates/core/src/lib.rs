//! First-order virtual element method for axisymmetric linear elastic and
//! J2 elastoplastic solids on convex and concave polygonal meshes.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod axisym;
pub mod bench;
pub mod config;
pub mod error;
pub mod j2;
pub mod mesh;
pub mod mvc;
pub mod oracles;
pub mod polygeom;
pub mod run;
pub mod solver;
pub mod vem;

pub use error::{Result, VemError};
