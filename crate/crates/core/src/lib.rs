//! Exact computations for Nica-covariant semicrossed products of finite
//! classical systems `C(X)` over lattice-ordered abelian groups.
//!
//! Everything is exact: scalars are Gaussian rationals, ideals of `C(X)` are
//! zero sets, and subspaces are kept in reduced row echelon form.

pub mod crossed;
pub mod dfk;
pub mod dilation;
pub mod dynsys;
pub mod error;
pub mod gen;
pub mod lattice;
pub mod linalg;
pub mod par;
pub mod scalar;
pub mod search;
pub mod shilov;

pub use crossed::CrossedElement;
pub use dilation::DilationElement;
pub use dynsys::{ClassicalSystem, PointMap, SystemFile, ZeroSetIdeal};
pub use error::{Error, LatticeError, ParseError, Result, SystemError};
pub use lattice::{Grid, GroupPoint, OrderSpec};
pub use linalg::Subspace;
pub use par::Exec;
pub use scalar::{Scalar, ScalarFunction};
pub use shilov::ShilovSubspace;
