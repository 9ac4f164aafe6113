//! Parameter sweeps: linear-in-`a` scenario families (the six figure
//! presets plus user-defined ones), grid evaluation of the full
//! observable set, and stable state labeling along the sweep.

use crate::diagnostics;
use crate::eigen::{self, conj_inner, EigenSolution, NORMALIZATION_CAP};
use crate::ep::{self, RegimeKind};
use crate::hamiltonian::TwoLevelHamiltonian;
use crate::C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A real linear form `c0 + c1 * a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Linear {
    pub c0: f64,
    pub c1: f64,
}

impl Linear {
    pub const fn new(c0: f64, c1: f64) -> Self {
        Self { c0, c1 }
    }

    /// Evaluates the form. Deliberately a separate multiply and add —
    /// the factored coalescence conditions reproduce this exact
    /// rounding, so the evaluation must never be fused.
    pub fn eval(&self, a: f64) -> f64 {
        self.c0 + self.c1 * a
    }

    pub fn is_finite(&self) -> bool {
        self.c0.is_finite() && self.c1.is_finite()
    }

    /// Whether the form is the same at every `a`.
    pub fn is_constant(&self) -> bool {
        self.c1 == 0.0
    }
}

/// Errors in scenario construction or validation.
#[derive(Debug, Error, PartialEq)]
pub enum ScenarioError {
    #[error("unknown preset `{0}` (available: fig1l, fig1r, fig2l, fig2r, fig3l, fig3r)")]
    UnknownPreset(String),
    #[error("empty parameter range: a_min ({a_min}) must be strictly below a_max ({a_max})")]
    EmptyRange { a_min: f64, a_max: f64 },
    #[error("n_steps must be at least 2, got {0}")]
    TooFewSteps(usize),
    #[error("non-finite coefficient in `{0}`")]
    NonFinite(&'static str),
}

/// A one-parameter family of Hamiltonians: every diagonal coefficient
/// is linear in the sweep parameter `a`, and the coupling is
/// `omega0 + omega1 * a`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepScenario {
    pub name: String,
    pub e1: Linear,
    pub e2: Linear,
    pub gamma1: Linear,
    pub gamma2: Linear,
    pub omega0: C64,
    pub omega1: C64,
    pub a_min: f64,
    pub a_max: f64,
    pub n_steps: usize,
}

/// The six built-in scenario names.
pub const PRESET_NAMES: [&str; 6] = ["fig1l", "fig1r", "fig2l", "fig2r", "fig3l", "fig3r"];

/// Builds one of the six named scenarios. Each preset carries a default
/// window and 2001 grid steps; both are overridable by the caller.
pub fn preset(name: &str) -> Result<SweepScenario, ScenarioError> {
    let zero = C64::new(0.0, 0.0);
    let s = match name {
        // Crossing energies, equal widths, constant imaginary coupling:
        // two true coalescences with width bifurcation between them.
        "fig1l" => SweepScenario {
            name: name.to_string(),
            e1: Linear::new(1.0, -1.0),
            e2: Linear::new(0.0, 1.0),
            gamma1: Linear::new(-1.0, 0.0),
            gamma2: Linear::new(-1.0, 0.0),
            omega0: C64::new(0.0, 0.1),
            omega1: zero,
            a_min: 0.0,
            a_max: 1.0,
            n_steps: 2001,
        },
        // Same crossing energies with unequal widths and complex
        // coupling.
        "fig1r" => SweepScenario {
            name: name.to_string(),
            e1: Linear::new(1.0, -1.0),
            e2: Linear::new(0.0, 1.0),
            gamma1: Linear::new(-0.1, 0.0),
            gamma2: Linear::new(-0.2, 0.0),
            omega0: C64::new(0.025, 0.075),
            omega1: zero,
            a_min: 0.0,
            a_max: 1.0,
            n_steps: 2001,
        },
        // Equal energies, counter-sweeping widths, constant real
        // coupling: level repulsion between two true coalescences.
        "fig2l" => SweepScenario {
            name: name.to_string(),
            e1: Linear::new(0.5, 0.0),
            e2: Linear::new(0.5, 0.0),
            gamma1: Linear::new(0.0, -0.05),
            gamma2: Linear::new(0.0, 0.05),
            omega0: C64::new(0.05, 0.0),
            omega1: zero,
            a_min: -3.0,
            a_max: 3.0,
            n_steps: 2001,
        },
        // Slightly detuned energies and complex coupling.
        "fig2r" => SweepScenario {
            name: name.to_string(),
            e1: Linear::new(0.5, 0.0),
            e2: Linear::new(0.475, 0.0),
            gamma1: Linear::new(0.0, -0.05),
            gamma2: Linear::new(0.0, 0.05),
            omega0: C64::new(0.0375, 0.0125),
            omega1: zero,
            a_min: -3.0,
            a_max: 3.0,
            n_steps: 2001,
        },
        // Fixed detuned energies, equal widths, imaginary coupling
        // growing along the sweep.
        "fig3l" => SweepScenario {
            name: name.to_string(),
            e1: Linear::new(0.5, 0.0),
            e2: Linear::new(0.4, 0.0),
            gamma1: Linear::new(-0.05, 0.0),
            gamma2: Linear::new(-0.05, 0.0),
            omega0: zero,
            omega1: C64::new(0.0, 0.05),
            a_min: 0.0,
            a_max: 2.0,
            n_steps: 2001,
        },
        // Equal energies, fixed unequal widths, real coupling growing
        // along the sweep.
        "fig3r" => SweepScenario {
            name: name.to_string(),
            e1: Linear::new(0.5, 0.0),
            e2: Linear::new(0.5, 0.0),
            gamma1: Linear::new(-0.5, 0.0),
            gamma2: Linear::new(-0.4, 0.0),
            omega0: zero,
            omega1: C64::new(0.05, 0.0),
            a_min: 0.0,
            a_max: 2.0,
            n_steps: 2001,
        },
        other => return Err(ScenarioError::UnknownPreset(other.to_string())),
    };
    Ok(s)
}

impl SweepScenario {
    /// Checks the scenario invariants: finite coefficients, nonempty
    /// range, at least two grid steps.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let fields: [(&'static str, bool); 8] = [
            ("e1", self.e1.is_finite()),
            ("e2", self.e2.is_finite()),
            ("gamma1", self.gamma1.is_finite()),
            ("gamma2", self.gamma2.is_finite()),
            ("omega0", self.omega0.re.is_finite() && self.omega0.im.is_finite()),
            ("omega1", self.omega1.re.is_finite() && self.omega1.im.is_finite()),
            ("a_min", self.a_min.is_finite()),
            ("a_max", self.a_max.is_finite()),
        ];
        for (name, ok) in fields {
            if !ok {
                return Err(ScenarioError::NonFinite(name));
            }
        }
        if !(self.a_min < self.a_max) {
            return Err(ScenarioError::EmptyRange {
                a_min: self.a_min,
                a_max: self.a_max,
            });
        }
        if self.n_steps < 2 {
            return Err(ScenarioError::TooFewSteps(self.n_steps));
        }
        Ok(())
    }

    /// The coupling at `a`.
    pub fn omega(&self, a: f64) -> C64 {
        let (re, im) = self.omega_coeffs();
        C64::new(re.eval(a), im.eval(a))
    }

    /// The coupling's real and imaginary parts as linear forms.
    pub fn omega_coeffs(&self) -> (Linear, Linear) {
        (
            Linear::new(self.omega0.re, self.omega1.re),
            Linear::new(self.omega0.im, self.omega1.im),
        )
    }

    /// Coefficients of `e1(a) - e2(a)`, combined before evaluation.
    pub fn delta_e_coeffs(&self) -> Linear {
        Linear::new(self.e1.c0 - self.e2.c0, self.e1.c1 - self.e2.c1)
    }

    /// Coefficients of `gamma1(a) - gamma2(a)`, combined before
    /// evaluation.
    pub fn delta_gamma_coeffs(&self) -> Linear {
        Linear::new(self.gamma1.c0 - self.gamma2.c0, self.gamma1.c1 - self.gamma2.c1)
    }

    /// Complex diagonal difference `eps1(a) - eps2(a)`, evaluated from
    /// the combined difference coefficients. Combining first keeps the
    /// difference exact at coalescence parameters where the per-level
    /// evaluations would each round.
    pub fn delta_eps(&self, a: f64) -> C64 {
        C64::new(
            self.delta_e_coeffs().eval(a),
            0.5 * self.delta_gamma_coeffs().eval(a),
        )
    }

    /// The Hamiltonian at `a`.
    ///
    /// Panics if the evaluated entries are not finite, which a
    /// validated scenario only reaches through overflow at extreme
    /// magnitudes.
    pub fn hamiltonian(&self, a: f64) -> TwoLevelHamiltonian {
        TwoLevelHamiltonian::new(
            self.e1.eval(a),
            self.e2.eval(a),
            self.gamma1.eval(a),
            self.gamma2.eval(a),
            self.omega(a),
        )
        .expect("scenario evaluation produced a non-finite entry")
    }

    /// The uniform evaluation grid: `a_k = a_min + span * (k/(n-1))`,
    /// so the endpoints are hit exactly whenever `a_min + span`
    /// rounds back to `a_max` (always true for the presets).
    pub fn grid(&self) -> Vec<f64> {
        let n = self.n_steps;
        if n == 1 {
            return vec![self.a_min];
        }
        let span = self.a_max - self.a_min;
        let denom = (n - 1) as f64;
        (0..n)
            .map(|k| self.a_min + span * (k as f64 / denom))
            .collect()
    }

    /// The scenario with the two levels exchanged (level 1 takes level
    /// 2's coefficients and vice versa); the coupling is symmetric and
    /// stays put.
    pub fn levels_swapped(&self) -> Self {
        Self {
            name: self.name.clone(),
            e1: self.e2,
            e2: self.e1,
            gamma1: self.gamma2,
            gamma2: self.gamma1,
            ..self.clone()
        }
    }
}

/// One fully evaluated sweep point. State labels 1/2 are the tracked
/// branch labels (`+Z` first at the start of a sweep). Fields mirror
/// the CSV column dictionary; the JSON output uses these names.
///
/// At a flagged coalescence (`at_ep`), the bilinear-normalization
/// dependents are reported as sentinels: `a_norm*`, `abs_b*`, and
/// `absB12` carry the cap value 1e12, the mixing phases are 0, and the
/// source-term magnitudes are the capped products (exactly 0 at an
/// exact coalescence, where the bracket vanishes). `regime` is absent
/// where classification is undefined (at or numerically below the
/// coalescence tolerance).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub a: f64,
    /// Energy (real part of eigenvalue) of tracked state 1.
    #[serde(rename = "E1")]
    pub e1: f64,
    /// Half-width (imaginary part of eigenvalue) of tracked state 1.
    #[serde(rename = "G1_half")]
    pub g1_half: f64,
    #[serde(rename = "E2")]
    pub e2: f64,
    #[serde(rename = "G2_half")]
    pub g2_half: f64,
    pub r1: f64,
    pub r2: f64,
    pub one_minus_r1: f64,
    pub one_minus_r2: f64,
    pub a_norm1: f64,
    pub a_norm2: f64,
    pub abs_b11: f64,
    pub abs_b12: f64,
    pub abs_b21: f64,
    pub abs_b22: f64,
    pub theta11: f64,
    pub theta12: f64,
    pub theta21: f64,
    pub theta22: f64,
    /// |Z| — half the eigenvalue splitting.
    #[serde(rename = "absZ")]
    pub abs_z: f64,
    /// Re Z under the tracked labels: Z = (eig1 - eig2)/2.
    #[serde(rename = "reZ")]
    pub re_z: f64,
    #[serde(rename = "imZ")]
    pub im_z: f64,
    /// |<Phi1|Phi2>| of the biorthogonally normalized pair.
    #[serde(rename = "absB12")]
    pub abs_cross_overlap: f64,
    pub ep_alignment: f64,
    pub nl_mag1: f64,
    pub nl_mag2: f64,
    pub at_ep: bool,
    pub regime: Option<RegimeKind>,
}

/// Solves the scenario at one parameter value, feeding the splitting
/// from the scenario-level form (factored where the scenario allows),
/// so grid points that satisfy a factored coalescence condition
/// produce an exactly vanishing splitting.
pub(crate) fn solve_at(scenario: &SweepScenario, a: f64) -> EigenSolution {
    let h = scenario.hamiltonian(a);
    let z = ep::z_complex(scenario, a);
    eigen::solve_split_with_z(h.mean_eps(), scenario.delta_eps(a), scenario.omega(a), z)
}

fn record_from(scenario: &SweepScenario, a: f64, sol: &EigenSolution) -> SweepRecord {
    let h = scenario.hamiltonian(a);
    let diag = diagnostics::diagnostics_record(&h, sol);
    let regime = ep::regime_classify(scenario, a).ok().map(|label| label.kind);
    let cap = NORMALIZATION_CAP;
    let (abs_b, theta, abs_cross) = if sol.at_ep {
        ([[cap; 2]; 2], [[0.0; 2]; 2], cap)
    } else {
        (
            [
                [sol.b[0][0].norm(), sol.b[0][1].norm()],
                [sol.b[1][0].norm(), sol.b[1][1].norm()],
            ],
            sol.theta,
            sol.cross_overlap.norm(),
        )
    };
    SweepRecord {
        a,
        e1: sol.eig1.re,
        g1_half: sol.eig1.im,
        e2: sol.eig2.re,
        g2_half: sol.eig2.im,
        r1: sol.r1,
        r2: sol.r2,
        one_minus_r1: 1.0 - sol.r1,
        one_minus_r2: 1.0 - sol.r2,
        a_norm1: sol.a1,
        a_norm2: sol.a2,
        abs_b11: abs_b[0][0],
        abs_b12: abs_b[0][1],
        abs_b21: abs_b[1][0],
        abs_b22: abs_b[1][1],
        theta11: theta[0][0],
        theta12: theta[0][1],
        theta21: theta[1][0],
        theta22: theta[1][1],
        abs_z: sol.z.norm(),
        re_z: sol.z.re,
        im_z: sol.z.im,
        abs_cross_overlap: abs_cross,
        ep_alignment: diag.ep_alignment,
        nl_mag1: diag.nonlinear_mag1,
        nl_mag2: diag.nonlinear_mag2,
        at_ep: sol.at_ep,
        regime,
    }
}

/// Evaluates every observable at a single parameter value. Branch
/// labels are the provisional solver labels (`+Z` first); stable
/// labels across a grid come from [`run_sweep`].
pub fn evaluate_point(scenario: &SweepScenario, a: f64) -> SweepRecord {
    record_from(scenario, a, &solve_at(scenario, a))
}

/// Chooses the branch assignment of `cur` that continues the labels of
/// `prev`: the permutation minimizing the summed eigenvalue distance;
/// on a tie within 1e-14 the one maximizing the summed eigenvector
/// overlap; at flagged coalescence points the labels carry forward
/// unchanged (both assignments are degenerate there).
///
/// Returns the permutation as indices into `cur`'s states: `[0, 1]`
/// keeps the order, `[1, 0]` swaps.
pub fn track_branches(prev: &EigenSolution, cur: &EigenSolution) -> [usize; 2] {
    if cur.at_ep {
        return [0, 1];
    }
    let d_keep = (prev.eig1 - cur.eig1).norm() + (prev.eig2 - cur.eig2).norm();
    let d_swap = (prev.eig1 - cur.eig2).norm() + (prev.eig2 - cur.eig1).norm();
    if (d_keep - d_swap).abs() <= 1e-14 {
        let o_keep =
            conj_inner(&prev.vec1, &cur.vec1).norm() + conj_inner(&prev.vec2, &cur.vec2).norm();
        let o_swap =
            conj_inner(&prev.vec1, &cur.vec2).norm() + conj_inner(&prev.vec2, &cur.vec1).norm();
        if o_swap > o_keep {
            return [1, 0];
        }
        return [0, 1];
    }
    if d_swap < d_keep {
        [1, 0]
    } else {
        [0, 1]
    }
}

/// Runs the full sweep: evaluates every grid point and applies the
/// tracking rule pairwise in grid order so the state labels are
/// continuous. Deterministic: identical scenarios produce identical
/// record lists.
pub fn run_sweep(scenario: &SweepScenario) -> Vec<SweepRecord> {
    let grid = scenario.grid();
    let mut records = Vec::with_capacity(grid.len());
    let mut prev: Option<EigenSolution> = None;
    for &a in &grid {
        let sol = solve_at(scenario, a);
        let tracked = match &prev {
            None => sol,
            Some(p) => {
                if track_branches(p, &sol) == [1, 0] {
                    sol.swapped()
                } else {
                    sol
                }
            }
        };
        records.push(record_from(scenario, a, &tracked));
        prev = Some(tracked);
    }
    records
}
