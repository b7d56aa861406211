//! Discrete nabla fractional calculus on finite grids, the Green's function
//! for the two-point boundary value problem
//!
//! ```text
//! -(nabla_a^nu u)(t) = h(t),  t in {a+2, ..., b},  1 < nu < 2,
//!  alpha u(a+1) - beta (nabla u)(a+1) = 0,
//!  gamma u(b)   + delta (nabla u)(b)  = 0,
//! ```
//!
//! its closed-form bounds, and the Lyapunov-type necessary condition
//! `sum |q| > 1/Omega` for the q-perturbed problem to admit a nontrivial
//! solution.
//!
//! Everything is cross-checked at desk scale against a dense linear system
//! assembled directly from the operator definitions; see the `solver`
//! module. The `cli` module wires the pieces into a scriptable binary.

pub mod calculus;
pub mod cli;
pub mod error;
pub mod green;
pub mod grid;
pub mod io;
pub mod lyapunov;
pub mod monomials;
pub mod signed;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use green::{BoundaryParams, GreenTable, Problem, SignReport};
pub use grid::{Grid, GridFunction};
pub use lyapunov::{LyapunovVerdict, Potential};
pub use monomials::{gamma_ratio, monomial, monomial_ratio, rising};
pub use signed::SignedLogMagnitude;
pub use solver::{BvpInstance, DenseSystem};
