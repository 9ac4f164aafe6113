//! Eigenvalues and biorthogonal eigenvectors of the two-level Hamiltonian,
//! with the per-state observables derived from them: normalization factor,
//! phase rigidity, mixing coefficients, and the cross-overlap of the pair.
//!
//! The matrix is complex symmetric, so left eigenvectors are the complex
//! conjugates of right eigenvectors and the natural normalization is the
//! *bilinear* product `phi.phi = 1` rather than the conjugate norm. At an
//! eigenvalue coalescence the bilinear self-product of the (single)
//! eigenvector vanishes and that normalization is impossible; such states
//! are flagged and reported with capped factors instead of infinities.

use crate::hamiltonian::TwoLevelHamiltonian;
use crate::{C64, CVec2};
use thiserror::Error;

/// Relative tolerance for self-orthogonality detection: a vector `v` is
/// treated as self-orthogonal (coalescence hallmark) when
/// `|v.v| < SELF_ORTHOGONALITY_TOL * (v'.v)`. Scale-free, so it catches
/// exact coalescences without false positives at double precision.
pub const SELF_ORTHOGONALITY_TOL: f64 = 1e-12;

/// Sentinel value reported for the normalization factor (and for the
/// quantities that diverge with it) when a state is self-orthogonal.
/// Finite on purpose: keeps CSV numeric and plots drawable, while the
/// `at_ep` flag carries the truth.
pub const NORMALIZATION_CAP: f64 = 1e12;

/// Errors from the eigenvector-level operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum EigenError {
    /// The operation requires a nonzero vector.
    #[error("zero vector")]
    ZeroVector,
    /// The operation requires a biorthogonally normalized vector
    /// (bilinear self-product equal to 1 within 1e-10).
    #[error("vector is not biorthogonally normalized")]
    NotNormalized,
}

/// Result of biorthogonal normalization of a single eigenvector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalized {
    /// The normalized vector: `phi.phi = 1` when `at_ep` is false,
    /// unit conjugate norm when `at_ep` is true.
    pub phi: CVec2,
    /// Normalization factor `A = phi'.phi >= 1`; [`NORMALIZATION_CAP`]
    /// when `at_ep` is true.
    pub a_norm: f64,
    /// True when the input was self-orthogonal and bilinear
    /// normalization is impossible.
    pub at_ep: bool,
}

/// Complete eigen-decomposition of one Hamiltonian.
///
/// State 1 is the `+z` branch and state 2 the `-z` branch of
/// `eig = mean +/- z`; continuity of labels along a parameter sweep is
/// the sweep module's job, applied on top via [`EigenSolution::swapped`].
///
/// When `at_ep` is true the two eigenvectors coalesce: `vec1`/`vec2`
/// hold the unit-norm representative (bilinear normalization being
/// impossible), `a1`/`a2` hold [`NORMALIZATION_CAP`], the mixing rows
/// hold that representative's components, and `cross_overlap` is the
/// conjugate inner product of the unit vectors (magnitude near 1).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution {
    /// Eigenvalue of state 1 (`mean + z`).
    pub eig1: C64,
    /// Eigenvalue of state 2 (`mean - z`).
    pub eig2: C64,
    /// Half-splitting `z = (eig1 - eig2) / 2`.
    pub z: C64,
    /// Normalized eigenvector of state 1.
    pub vec1: CVec2,
    /// Normalized eigenvector of state 2.
    pub vec2: CVec2,
    /// Normalization factor of state 1.
    pub a1: f64,
    /// Normalization factor of state 2.
    pub a2: f64,
    /// Phase rigidity of state 1.
    pub r1: f64,
    /// Phase rigidity of state 2.
    pub r2: f64,
    /// Mixing coefficients: `b[i][j]` is component `j` of state `i+1`'s
    /// eigenvector in the decoupled (diagonal) basis.
    pub b: [[C64; 2]; 2],
    /// Phases of the mixing coefficients, in `(-pi, pi]`, `0` for a
    /// vanishing coefficient.
    pub theta: [[f64; 2]; 2],
    /// Conjugate inner product `<vec1|vec2>`.
    pub cross_overlap: C64,
    /// True when the eigenvectors coalesce (self-orthogonality).
    pub at_ep: bool,
    /// True for the fully decoupled degenerate case `omega = 0` with
    /// equal diagonal entries, where every vector is an eigenvector and
    /// basis vectors are returned by convention.
    pub degenerate: bool,
}

impl EigenSolution {
    /// The same solution with the state labels exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            eig1: self.eig2,
            eig2: self.eig1,
            z: -self.z,
            vec1: self.vec2,
            vec2: self.vec1,
            a1: self.a2,
            a2: self.a1,
            r1: self.r2,
            r2: self.r1,
            b: [self.b[1], self.b[0]],
            theta: [self.theta[1], self.theta[0]],
            cross_overlap: self.cross_overlap.conj(),
            at_ep: self.at_ep,
            degenerate: self.degenerate,
        }
    }
}

/// Principal complex square root with deterministic edge handling.
///
/// Branch: `Re >= 0`, and for `Re = 0` the `+i` side is taken. Inputs on
/// the real or imaginary axis stay on their exact image axis (no polar
/// round trip), which the coalescence detection relies on. Both signed
/// zeros of the imaginary part select the `+i sqrt` result on the
/// negative real axis, so results never depend on the sign of a zero.
fn csqrt(q: C64) -> C64 {
    if q.im == 0.0 {
        return if q.re >= 0.0 {
            C64::new(q.re.sqrt(), 0.0)
        } else {
            C64::new(0.0, (-q.re).sqrt())
        };
    }
    if q.re == 0.0 {
        let t = (0.5 * q.im.abs()).sqrt();
        return if q.im > 0.0 {
            C64::new(t, t)
        } else {
            C64::new(t, -t)
        };
    }
    let r = q.re.hypot(q.im);
    let t = (0.5 * (r + q.re.abs())).sqrt();
    if q.re > 0.0 {
        C64::new(t, q.im / (2.0 * t))
    } else {
        C64::new(q.im.abs() / (2.0 * t), t.copysign(q.im))
    }
}

/// Half of the principal square root of `q`, with signed zeros
/// normalized first so the branch choice cannot depend on them. This
/// is the single splitting evaluation shared by the eigensolver and
/// the scenario-level coalescence forms.
pub(crate) fn half_principal_sqrt(mut q: C64) -> C64 {
    if q.re == 0.0 {
        q.re = 0.0;
    }
    if q.im == 0.0 {
        q.im = 0.0;
    }
    csqrt(q) * 0.5
}

/// Half-splitting `z = sqrt(delta^2 + 4 omega^2) / 2` (principal root)
/// for diagonal difference `delta` and coupling `omega`.
fn splitting(delta: C64, omega: C64) -> C64 {
    let w2 = omega * omega;
    half_principal_sqrt(delta * delta + w2 * 4.0)
}

fn bilinear_self(v: &CVec2) -> C64 {
    v[0] * v[0] + v[1] * v[1]
}

pub(crate) fn conj_norm_sq(v: &CVec2) -> f64 {
    v[0].norm_sqr() + v[1].norm_sqr()
}

pub(crate) fn conj_inner(x: &CVec2, y: &CVec2) -> C64 {
    x[0].conj() * y[0] + x[1].conj() * y[1]
}

fn rigidity_of(v: &CVec2) -> f64 {
    let n = conj_norm_sq(v);
    if n == 0.0 {
        return 1.0;
    }
    // Mathematically |v.v| <= v'.v; the clamp only absorbs sub-ulp
    // division excess so the reported value stays in [0, 1].
    (bilinear_self(v).norm() / n).min(1.0)
}

/// Flips the overall sign so the largest-magnitude component (ties:
/// the first) has argument in `(-pi/2, pi/2]`.
fn canonical_sign(phi: &mut CVec2) {
    let i = usize::from(phi[1].norm_sqr() > phi[0].norm_sqr());
    let c = phi[i];
    let keep = c.re > 0.0 || (c.re == 0.0 && c.im > 0.0);
    if !keep {
        phi[0] = -phi[0];
        phi[1] = -phi[1];
    }
}

fn normalize_raw(v: &CVec2) -> Normalized {
    let c = bilinear_self(v);
    let n = conj_norm_sq(v);
    if c.norm() < SELF_ORTHOGONALITY_TOL * n {
        let s = n.sqrt();
        let mut phi = [v[0] / s, v[1] / s];
        canonical_sign(&mut phi);
        Normalized {
            phi,
            a_norm: NORMALIZATION_CAP,
            at_ep: true,
        }
    } else {
        let root = csqrt(c);
        let mut phi = [v[0] / root, v[1] / root];
        canonical_sign(&mut phi);
        Normalized {
            phi,
            // Mathematically v'.v >= |v.v|; the clamp only absorbs
            // sub-ulp division excess.
            a_norm: (n / c.norm()).max(1.0),
            at_ep: false,
        }
    }
}

pub(crate) fn is_bilinear_normalized(phi: &CVec2) -> bool {
    (bilinear_self(phi) - C64::new(1.0, 0.0)).norm() <= 1e-10
}

fn theta_of(b: C64) -> f64 {
    if b.re == 0.0 && b.im == 0.0 {
        return 0.0;
    }
    let t = b.im.atan2(b.re);
    if t == -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        t
    }
}

fn mixing_of(phi: &CVec2) -> ([C64; 2], [f64; 2]) {
    (*phi, [theta_of(phi[0]), theta_of(phi[1])])
}

/// Both eigenvalues and the half-splitting, from the mean and difference
/// of the diagonal entries plus the coupling: `eig = mean +/- z` with
/// `z = sqrt(delta^2 + 4 omega^2) / 2` (principal root, `+z` first).
/// For `omega = 0` the splitting is taken as `z = delta / 2` directly,
/// so state 1 is the first diagonal entry.
pub fn eigenvalues_split(mean: C64, delta: C64, omega: C64) -> (C64, C64, C64) {
    let z = if omega.re == 0.0 && omega.im == 0.0 {
        delta * 0.5
    } else {
        splitting(delta, omega)
    };
    (mean + z, mean - z, z)
}

/// Both eigenvalues and the half-splitting of a Hamiltonian; see
/// [`eigenvalues_split`]. For `omega = 0` the diagonal entries are
/// returned exactly.
pub fn eigenvalues(h: &TwoLevelHamiltonian) -> (C64, C64, C64) {
    if h.omega.re == 0.0 && h.omega.im == 0.0 {
        let z = h.delta_eps() * 0.5;
        return (h.epsilon1(), h.epsilon2(), z);
    }
    eigenvalues_split(h.mean_eps(), h.delta_eps(), h.omega)
}

/// A raw (unnormalized) eigenvector of `h` for the eigenvalue `eig`,
/// chosen as the larger of the two candidate null-space constructions
/// `(omega, eig - eps1)` and `(eig - eps2, omega)` for stability; ties
/// pick the first. The boolean is the degenerate-decoupled flag: for
/// `omega = 0` with `eig` equal to both diagonal entries every vector
/// is an eigenvector, and the first basis vector is returned flagged.
pub fn raw_eigenvector(h: &TwoLevelHamiltonian, eig: C64) -> (CVec2, bool) {
    let ca = [h.omega, eig - h.epsilon1()];
    let cb = [eig - h.epsilon2(), h.omega];
    let na = conj_norm_sq(&ca);
    let nb = conj_norm_sq(&cb);
    if na == 0.0 && nb == 0.0 {
        return ([C64::new(1.0, 0.0), C64::new(0.0, 0.0)], true);
    }
    (if na >= nb { ca } else { cb }, false)
}

/// Biorthogonal normalization of a nonzero vector.
///
/// With `c = v.v` (bilinear self-product): when `|c|` is above the
/// self-orthogonality tolerance, returns `phi = v / sqrt(c)` (principal
/// root) so `phi.phi = 1`, together with `a_norm = phi'.phi >= 1`.
/// Otherwise flags the coalescence and returns the unit-conjugate-norm
/// vector with `a_norm` capped at [`NORMALIZATION_CAP`]. In both cases
/// the residual sign freedom is fixed so the largest-magnitude component
/// has argument in `(-pi/2, pi/2]`.
pub fn biorthogonal_normalize(v: &CVec2) -> Result<Normalized, EigenError> {
    if conj_norm_sq(v) == 0.0 {
        return Err(EigenError::ZeroVector);
    }
    Ok(normalize_raw(v))
}

/// Phase rigidity `r = |v1^2 + v2^2| / (|v1|^2 + |v2|^2)` of a nonzero
/// vector: scale-invariant, in `[0, 1]`, equal to `1/A` for a
/// biorthogonally normalized vector, `1` for real vectors and `0` at a
/// coalescence.
pub fn phase_rigidity(v: &CVec2) -> Result<f64, EigenError> {
    if conj_norm_sq(v) == 0.0 {
        return Err(EigenError::ZeroVector);
    }
    Ok(rigidity_of(v))
}

/// Conjugate inner product `<phi1|phi2>` of two biorthogonally
/// normalized vectors. For the two states of one Hamiltonian this is
/// purely imaginary and antisymmetric under exchange.
pub fn cross_overlap(phi1: &CVec2, phi2: &CVec2) -> Result<C64, EigenError> {
    if !is_bilinear_normalized(phi1) || !is_bilinear_normalized(phi2) {
        return Err(EigenError::NotNormalized);
    }
    Ok(conj_inner(phi1, phi2))
}

/// Mixing coefficients of a biorthogonally normalized eigenvector in
/// the decoupled (diagonal) basis — exactly its components, since the
/// decoupled basis states are the unit vectors — together with their
/// phases in `(-pi, pi]` (`0` for a vanishing coefficient).
pub fn mixing_coefficients(phi: &CVec2) -> Result<([C64; 2], [f64; 2]), EigenError> {
    if !is_bilinear_normalized(phi) {
        return Err(EigenError::NotNormalized);
    }
    Ok(mixing_of(phi))
}

fn pick_null_vector(omega: C64, z: C64, half_delta: C64) -> CVec2 {
    let ca = [omega, z - half_delta];
    let cb = [z + half_delta, omega];
    if conj_norm_sq(&ca) >= conj_norm_sq(&cb) {
        ca
    } else {
        cb
    }
}

fn diagonal_solution(eig1: C64, eig2: C64, z: C64) -> EigenSolution {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    EigenSolution {
        eig1,
        eig2,
        z,
        vec1: [one, zero],
        vec2: [zero, one],
        a1: 1.0,
        a2: 1.0,
        r1: 1.0,
        r2: 1.0,
        b: [[one, zero], [zero, one]],
        theta: [[0.0, 0.0], [0.0, 0.0]],
        cross_overlap: zero,
        at_ep: false,
        degenerate: eig1 == eig2,
    }
}

/// Full decomposition from split inputs, with the half-splitting `z`
/// supplied by the caller.
///
/// This is the entry point for callers that can evaluate the splitting
/// more accurately than [`eigenvalues_split`] does — along a parameter
/// family the discriminant often factors, and the factored form is
/// exact at parameter values where a factor vanishes. Everything else
/// matches [`solve_split`]. For `omega = 0` the supplied `z` is ignored
/// in favor of the decoupled convention `z = delta / 2`.
pub fn solve_split_with_z(mean: C64, delta: C64, omega: C64, z: C64) -> EigenSolution {
    if omega.re == 0.0 && omega.im == 0.0 {
        let zd = delta * 0.5;
        return diagonal_solution(mean + zd, mean - zd, zd);
    }
    let eig1 = mean + z;
    let eig2 = mean - z;
    let half = delta * 0.5;
    let v1 = pick_null_vector(omega, z, half);
    let v2 = pick_null_vector(omega, -z, half);
    let n1 = normalize_raw(&v1);
    let n2 = normalize_raw(&v2);
    let r1 = rigidity_of(&v1);
    let r2 = rigidity_of(&v2);
    let (b1, t1) = mixing_of(&n1.phi);
    let (b2, t2) = mixing_of(&n2.phi);
    EigenSolution {
        eig1,
        eig2,
        z,
        vec1: n1.phi,
        vec2: n2.phi,
        a1: n1.a_norm,
        a2: n2.a_norm,
        r1,
        r2,
        b: [b1, b2],
        theta: [t1, t2],
        cross_overlap: conj_inner(&n1.phi, &n2.phi),
        at_ep: n1.at_ep || n2.at_ep,
        degenerate: false,
    }
}

/// Full decomposition from the mean and difference of the diagonal
/// entries plus the coupling, computing the splitting internally.
pub fn solve_split(mean: C64, delta: C64, omega: C64) -> EigenSolution {
    let (_, _, z) = eigenvalues_split(mean, delta, omega);
    solve_split_with_z(mean, delta, omega, z)
}

/// Full decomposition of a Hamiltonian: eigenvalues (`+z` branch
/// first), biorthogonally normalized eigenvectors with the deterministic
/// sign convention, normalization factors, phase rigidities, mixing
/// coefficients, and the cross-overlap. Coalescence and degenerate
/// cases are flagged, never errors.
pub fn solve(h: &TwoLevelHamiltonian) -> EigenSolution {
    if h.omega.re == 0.0 && h.omega.im == 0.0 {
        let z = h.delta_eps() * 0.5;
        return diagonal_solution(h.epsilon1(), h.epsilon2(), z);
    }
    solve_split(h.mean_eps(), h.delta_eps(), h.omega)
}
