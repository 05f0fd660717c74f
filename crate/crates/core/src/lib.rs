//! Zeros of regular Coulomb wave functions, Lommel-type orthogonal
//! polynomials and spectral zeta values, computed through the Jacobi
//! operators whose characteristic functions are the Coulomb functions.
//!
//! - [`seqkernel`]: the 𝔉 functional of a sequence.
//! - [`jacobi`]: Jacobi operators, characteristic functions, zeros.
//! - [`coulomb`]: Coulomb operators, `φ_L`, `F_L`, Bessel oracle.
//! - [`opoly`]: orthogonal polynomials, Lommel family, measures.
//! - [`zeta`]: spectral zeta values, Euler bounds, moments.

pub mod coulomb;
pub mod dd;
pub mod error;
pub mod gamma;
pub mod jacobi;
pub mod opoly;
pub mod seqkernel;
pub mod zeta;

pub use coulomb::{CoulombEval, CoulombParams, PhiEval};
pub use error::{Error, Result};
pub use jacobi::{DecayDescriptor, GValue, JacobiOperator, SpectrumResult, TailModel, TridiagonalMatrix, ZeroOptions};
pub use opoly::{DiscreteMeasure, IdentityReport, OrthogonalityReport, PolyCoeffs};
pub use seqkernel::ComplexSeqWindow;
pub use zeta::ZetaTable;
