//! Exact computations for rack homology, cubical sets and group nerves.

pub mod chains;
pub mod coalgebra;
pub mod cubical;
pub mod error;
pub mod field;
pub mod glstable;
pub mod linalg;
pub mod nerves;
pub mod racks;
pub mod shuffles;
pub mod suite;

pub use error::{Error, Result};
pub use field::{FieldTag, Scalar};
pub use linalg::{column_space_analysis, solve_in_image, Matrix, PivotBasis, Reduction, SparseVec};
