//! Scalar diagnostics built on top of the eigen-decomposition: the
//! magnitude of the nonlinear source-term bracket, the phase-alignment
//! distance that signals eigenvector coalescence, and eigenpair
//! residuals.

use crate::eigen::{
    conj_inner, conj_norm_sq, is_bilinear_normalized, EigenError, EigenSolution,
};
use crate::hamiltonian::TwoLevelHamiltonian;
use crate::{C64, CVec2};

/// The coupling block of the Hamiltonian viewed as the interaction
/// ("source term") matrix: zero diagonal, symmetric off-diagonal `w12`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceTermMatrix {
    /// Off-diagonal entry, equal to the Hamiltonian's coupling.
    pub w12: C64,
}

/// The per-point diagnostic scalars; all finite and nonnegative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    /// Source-term magnitude of state 1.
    pub nonlinear_mag1: f64,
    /// Source-term magnitude of state 2.
    pub nonlinear_mag2: f64,
    /// Phase-alignment distance between the two eigenvectors.
    pub ep_alignment: f64,
    /// Eigenpair residual of state 1.
    pub residual1: f64,
    /// Eigenpair residual of state 2.
    pub residual2: f64,
}

/// Extracts the interaction matrix of a Hamiltonian.
pub fn source_term_matrix(h: &TwoLevelHamiltonian) -> SourceTermMatrix {
    SourceTermMatrix { w12: h.omega }
}

fn bracket(phi: &CVec2, w12: C64) -> C64 {
    // <phi|W|phi> with zero-diagonal symmetric W. The symmetric sum is
    // formed before scaling by w12 so that states of the form
    // (real, imaginary) cancel it exactly, as they do in exact
    // arithmetic.
    let s = phi[0].conj() * phi[1] + phi[1].conj() * phi[0];
    w12 * s
}

pub(crate) fn nonlinear_magnitude_raw(phi: &CVec2, w12: C64, a_norm: f64) -> f64 {
    bracket(phi, w12).norm() * a_norm
}

/// Magnitude of the nonlinear source term of one state:
/// `N = |<phi|W|phi>| * a_norm`, where the bracket uses the conjugate
/// inner product and `a_norm` is the state's normalization factor
/// (its conjugate norm squared). Scales linearly in `|w12|` at fixed
/// `phi`, and vanishes for unmixed basis states.
pub fn nonlinear_magnitude(
    phi: &CVec2,
    w: &SourceTermMatrix,
    a_norm: f64,
) -> Result<f64, EigenError> {
    if !is_bilinear_normalized(phi) {
        return Err(EigenError::NotNormalized);
    }
    Ok(nonlinear_magnitude_raw(phi, w.w12, a_norm))
}

/// Phase-alignment distance between two eigenvectors: the minimum over
/// `s ∈ {+1, -1}` of `‖u1 - s·i·e^{i·φ*}·u2‖`, where `u1`, `u2` are
/// the unit-conjugate-norm versions of the inputs and `φ*` is the
/// globally optimal phase (closed form from the argument of `<u1|u2>`).
/// The value lies in `[0, √2]`; it is `0` exactly when the vectors are
/// proportional through a factor `±i·e^{iφ}`, the relation the
/// eigenvector pair approaches at a coalescence, and `√2` for
/// conjugate-orthogonal vectors.
///
/// The winning candidate is evaluated as a literal vector difference
/// (not through `√(2 - 2|g|)`), so proportional inputs give an exact
/// zero rather than a rounding residue.
pub fn ep_phase_alignment(phi1: &CVec2, phi2: &CVec2) -> Result<f64, EigenError> {
    let n1 = conj_norm_sq(phi1);
    let n2 = conj_norm_sq(phi2);
    if n1 == 0.0 || n2 == 0.0 {
        return Err(EigenError::ZeroVector);
    }
    let (s1, s2) = (n1.sqrt(), n2.sqrt());
    let u1 = [phi1[0] / s1, phi1[1] / s1];
    let u2 = [phi2[0] / s2, phi2[1] / s2];
    let g = conj_inner(&u1, &u2);
    if g.re == 0.0 && g.im == 0.0 {
        // Orthogonal inputs: every phase gives the same distance.
        return Ok(std::f64::consts::SQRT_2);
    }
    let i = C64::new(0.0, 1.0);
    let phase = (i * g).conj() / g.norm();
    let mut best = f64::INFINITY;
    for s in [1.0f64, -1.0] {
        let coeff = i * phase * s;
        let d = [u1[0] - coeff * u2[0], u1[1] - coeff * u2[1]];
        best = best.min(conj_norm_sq(&d).sqrt());
    }
    Ok(best)
}

/// Eigenpair residual `‖(H - eig)·phi‖` in the conjugate 2-norm.
pub fn residual(h: &TwoLevelHamiltonian, eig: C64, phi: &CVec2) -> f64 {
    let hv = h.apply(phi);
    let d = [hv[0] - eig * phi[0], hv[1] - eig * phi[1]];
    conj_norm_sq(&d).sqrt()
}

/// Assembles the full diagnostic record for a solved Hamiltonian.
///
/// At a coalescence the stored vectors are unit-normalized and the
/// normalization factors are capped, so the source-term magnitudes
/// inherit the cap; the bracket itself still vanishes exactly at an
/// exact coalescence, keeping the product finite (zero) there.
pub fn diagnostics_record(
    h: &TwoLevelHamiltonian,
    sol: &EigenSolution,
) -> DiagnosticsRecord {
    let w = source_term_matrix(h);
    DiagnosticsRecord {
        nonlinear_mag1: nonlinear_magnitude_raw(&sol.vec1, w.w12, sol.a1),
        nonlinear_mag2: nonlinear_magnitude_raw(&sol.vec2, w.w12, sol.a2),
        ep_alignment: ep_phase_alignment(&sol.vec1, &sol.vec2)
            .expect("solver eigenvectors are nonzero"),
        residual1: residual(h, sol.eig1, &sol.vec1),
        residual2: residual(h, sol.eig2, &sol.vec2),
    }
}
