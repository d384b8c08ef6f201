//! Dense linear algebra over finite fields.

mod echelon;
mod matrix;
mod section;

pub use echelon::{
    combine, nullspace, rref, solve_linear, spin, spin_vector, unit, LinearSolution, Subspace,
};
pub use matrix::Matrix;
pub use section::Section;
