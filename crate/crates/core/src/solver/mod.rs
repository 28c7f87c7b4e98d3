//! Global assembly, constraints, linear and nonlinear solution.

pub mod bc;
pub mod model;
pub mod nonlinear;
pub mod sparse;

pub use bc::{assemble_loads, Direction, DofMap, Load, LoadMeasure, NodeSelector, Support};
pub use model::{Elastic, ElementOps, Formulation, Model, Solution};
pub use sparse::{Factorized, TripletMatrix};
pub use nonlinear::{
    Material, NonlinearResult, NonlinearSolver, PathControl, SolveControls, StabilizationHistory, StepRecord,
};
