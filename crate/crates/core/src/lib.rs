//! Numerical checks for p-isometrisability of discrete groups.
//!
//! The crate computes `l^p` operator norms of complex matrices (Boyd lower
//! bounds, Riesz–Thorin upper bounds), enumerates Cayley balls of free
//! groups and the spectra of their Markov operators, builds averaged norms
//! that make representations of amenable groups isometric, and evaluates
//! Littlewood `T_1` norms by linear programming.

pub mod error;
pub mod exponents;
pub mod freegroup;
pub mod groups;
pub mod isometrize;
pub mod littlewood;
pub mod matrix;
pub mod pnorm;
pub mod simplex;
pub mod spectra;

pub use error::{Error, Result};
pub use exponents::{ellipse_contains, lens_contains, pytlik_witness, LensRegion, PExponent, PytlikEllipse, Witness};
pub use freegroup::{CayleyBall, GeneratorFamily, Word};
pub use matrix::{ComplexMatrix, C64};
pub use pnorm::NormEstimate;
pub use spectra::Spectrum;
pub use groups::FiniteGroup;
pub use isometrize::{AmenableRep, AveragedNorm, Window};
pub use littlewood::{Element, GroupIndexSet, Kernel, LittlewoodInstance, SupportedFunction, T1Result};
pub use simplex::{LinearProgram, LpStatus};
