//! Fifth-order Hermite WENO fast sweeping solvers for static Hamilton-Jacobi
//! equations `H(∇φ) = f(x, y)` on uniform 2D grids.
//!
//! The pipeline is: [`problems::make_problem`] builds a benchmark and its grid,
//! [`sweeper::solve`] runs the first-order initialisation followed by the
//! high-order Gauss-Seidel sweeps, and [`report`] measures and serialises the
//! results.

pub mod cli;
pub mod error;
pub mod grid;
pub mod hamiltonian;
pub mod problems;
pub mod reconstruction;
pub mod report;
pub mod sweeper;

pub use error::{HjError, Result};
pub use grid::{build_grid, Grid2D, PointCategory};
pub use problems::{make_problem, ProblemId, ProblemSpec};
pub use sweeper::{solve, Approach, SolutionField, SolverConfig, SweepReport};
