//! Spectral analysis of two-level non-Hermitian Hamiltonians.
//!
//! This crate analyses 2x2 complex-symmetric Hamiltonians of the form
//!
//! ```text
//!         | e1 + (i/2) g1      w          |
//!   H  =  |                               |
//!         |      w          e2 + (i/2) g2 |
//! ```
//!
//! where `e1`, `e2` are level energies, `g1`, `g2` are level widths
//! (negative imaginary parts model decay), and `w` is a complex coupling.
//! It provides:
//!
//! * eigenvalues and biorthogonal eigenvectors with a deterministic
//!   sign convention ([`eigen`]),
//! * phase rigidity, normalization factors, and basis-mixing
//!   coefficients ([`eigen`]),
//! * diagnostics such as eigenvector residuals, the chiral alignment of
//!   the two states near a coalescence, and source-term magnitudes
//!   ([`diagnostics`]),
//! * location of exceptional points (eigenvalue coalescences) along
//!   one-parameter families, both in closed form and numerically,
//!   together with regime classification ([`ep`]),
//! * one-parameter sweeps with branch tracking and bundled presets
//!   ([`sweep`]),
//! * CSV / JSON / SVG emitters for sweep results ([`output`]),
//! * randomized self-validation of the algebraic invariants
//!   ([`validate`]).

pub mod config;
pub mod diagnostics;
pub mod eigen;
pub mod ep;
pub mod hamiltonian;
pub mod output;
pub mod sweep;
pub mod validate;

/// Complex double-precision scalar used throughout.
pub type C64 = num_complex::Complex64;

/// A two-component complex vector (eigenvector of a 2x2 system).
pub type CVec2 = [C64; 2];

pub use eigen::{solve, solve_split, EigenSolution};
pub use hamiltonian::TwoLevelHamiltonian;
