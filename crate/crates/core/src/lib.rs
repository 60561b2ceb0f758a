//! Generalized induced matrix norms on small complex matrices: evaluation,
//! extraction of the underlying vector norms from a matrix norm, minimality
//! probes and property suites.

pub mod cli;
pub mod error;
pub mod extraction;
pub mod gind;
pub mod io;
pub mod linalg;
pub mod matrix_norms;
pub mod sphere_opt;
pub mod vector_norms;
pub mod verification;

pub use error::{LabError, Result};
pub use gind::{chain_compare, gind_eval, ChainReport, GIndPair};
pub use linalg::{hermitian_top_eig, mat_apply, EigResult, Matrix, RandomStream, Vector};
pub use matrix_norms::{AlgebraClass, MatrixNormSpec};
pub use sphere_opt::{ComputationResult, Exactness, OptBudget};
pub use vector_norms::{dominance_check, DominanceReport, VectorNormSpec};
