//! Coalescence (exceptional-point) location along a sweep and regime
//! classification from the complex half-splitting Z(a).

use crate::eigen;
use crate::sweep::{Linear, SweepScenario};
use crate::C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Fraction of |Z| one component must exceed before the regime counts
/// as purely energy- or width-dominated.
pub const DOMINANCE_THRESHOLD: f64 = 0.999;

/// How a coalescence parameter was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpMethod {
    /// Root of the factored energy-detuning condition (equal width
    /// forms, purely imaginary coupling).
    AnalyticEnergyDetuning,
    /// Root of the factored width-detuning condition (equal energy
    /// forms, purely real coupling).
    AnalyticWidthDetuning,
    /// Golden-section minimum of |Z|.
    NumericMin,
}

/// Spectral regime of a sweep point, from the dominant part of Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeKind {
    /// Z essentially real: energies split, widths locked.
    LevelRepulsion,
    /// Z essentially imaginary: widths split, energies locked.
    WidthBifurcation,
    /// Neither component dominates.
    Mixed,
}

impl RegimeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeKind::LevelRepulsion => "level_repulsion",
            RegimeKind::WidthBifurcation => "width_bifurcation",
            RegimeKind::Mixed => "mixed",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "level_repulsion" => Some(RegimeKind::LevelRepulsion),
            "width_bifurcation" => Some(RegimeKind::WidthBifurcation),
            "mixed" => Some(RegimeKind::Mixed),
            _ => None,
        }
    }
}

/// Regime with its dominance ratio `max(|Re Z|, |Im Z|) / (|Re Z| +
/// |Im Z|)`, which runs from 1/2 (balanced) to 1 (pure).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeLabel {
    pub kind: RegimeKind,
    pub dominance: f64,
}

/// A located coalescence candidate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpReport {
    /// Parameter value of the candidate.
    pub a_star: f64,
    /// |Z| there; 0 for an exactly satisfied factored condition.
    pub z_mag: f64,
    pub method: EpMethod,
    /// Whether `z_mag` is below the bracket-scaled tolerance — a
    /// genuine coalescence rather than a mere avoided-crossing
    /// minimum.
    pub is_true_ep: bool,
    /// Regime just below `a_star`.
    pub regime_left: RegimeKind,
    /// Regime just above `a_star`.
    pub regime_right: RegimeKind,
}

#[derive(Debug, Error, PartialEq)]
pub enum EpError {
    #[error("empty or invalid bracket: ({lo}, {hi}) — need finite lo < hi")]
    EmptyBracket { lo: f64, hi: f64 },
    #[error(
        "splitting magnitude {z_mag:e} is below the classification tolerance {tol:e}: \
         the regime is undefined at a coalescence"
    )]
    AtEp { z_mag: f64, tol: f64 },
}

/// The scenario-level form of Q(a) = Z(a)^2 * 4 = delta(a)^2 +
/// 4 omega(a)^2, factored when the scenario structure allows an exact
/// factorization over the reals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum ZForm {
    /// Equal width forms and purely imaginary coupling w(a):
    /// Q = (de - 2w)(de + 2w), both factors real linear forms.
    FactoredEnergy { f_minus: Linear, f_plus: Linear },
    /// Equal energy forms and purely real coupling n(a):
    /// Q = -(dg - 4n)(dg + 4n)/4, both factors real linear forms.
    FactoredWidth { g_minus: Linear, g_plus: Linear },
    /// No exact factorization: evaluate delta^2 + 4 omega^2 directly.
    Direct {
        dd: Linear,
        dg: Linear,
        om_re: Linear,
        om_im: Linear,
    },
}

impl ZForm {
    pub(crate) fn of(scenario: &SweepScenario) -> Self {
        let dd = scenario.delta_e_coeffs();
        let dg = scenario.delta_gamma_coeffs();
        let (om_re, om_im) = scenario.omega_coeffs();
        // The factorizations demand the structural conditions exactly
        // (coefficient equality), not approximately: they are what
        // makes the factor roots exact coalescence parameters.
        if scenario.gamma1 == scenario.gamma2 && om_re.c0 == 0.0 && om_re.c1 == 0.0 {
            return ZForm::FactoredEnergy {
                f_minus: Linear::new(dd.c0 - 2.0 * om_im.c0, dd.c1 - 2.0 * om_im.c1),
                f_plus: Linear::new(dd.c0 + 2.0 * om_im.c0, dd.c1 + 2.0 * om_im.c1),
            };
        }
        if scenario.e1 == scenario.e2 && om_im.c0 == 0.0 && om_im.c1 == 0.0 {
            return ZForm::FactoredWidth {
                g_minus: Linear::new(dg.c0 - 4.0 * om_re.c0, dg.c1 - 4.0 * om_re.c1),
                g_plus: Linear::new(dg.c0 + 4.0 * om_re.c0, dg.c1 + 4.0 * om_re.c1),
            };
        }
        ZForm::Direct { dd, dg, om_re, om_im }
    }

    /// Q(a) = 4 Z(a)^2.
    pub(crate) fn q(&self, a: f64) -> C64 {
        match self {
            ZForm::FactoredEnergy { f_minus, f_plus } => {
                C64::new(f_minus.eval(a) * f_plus.eval(a), 0.0)
            }
            ZForm::FactoredWidth { g_minus, g_plus } => {
                // The -1/4 scaling is applied after the product; it is
                // a power of two, so an exact factor zero stays exact.
                C64::new(-0.25 * (g_minus.eval(a) * g_plus.eval(a)), 0.0)
            }
            ZForm::Direct { dd, dg, om_re, om_im } => {
                let delta = C64::new(dd.eval(a), 0.5 * dg.eval(a));
                let omega = C64::new(om_re.eval(a), om_im.eval(a));
                delta * delta + (omega * omega) * 4.0
            }
        }
    }

    pub(crate) fn method(&self) -> EpMethod {
        match self {
            ZForm::FactoredEnergy { .. } => EpMethod::AnalyticEnergyDetuning,
            ZForm::FactoredWidth { .. } => EpMethod::AnalyticWidthDetuning,
            ZForm::Direct { .. } => EpMethod::NumericMin,
        }
    }

    fn factors(&self) -> Option<[Linear; 2]> {
        match self {
            ZForm::FactoredEnergy { f_minus, f_plus } => Some([*f_minus, *f_plus]),
            ZForm::FactoredWidth { g_minus, g_plus } => Some([*g_minus, *g_plus]),
            ZForm::Direct { .. } => None,
        }
    }
}

/// The complex half-splitting Z(a) of the scenario, evaluated through
/// the scenario-level form so that exactly satisfied factored
/// coalescence conditions yield exactly zero.
pub fn z_complex(scenario: &SweepScenario, a: f64) -> C64 {
    eigen::half_principal_sqrt(ZForm::of(scenario).q(a))
}

/// |Z(a)|.
pub fn z_magnitude(scenario: &SweepScenario, a: f64) -> f64 {
    z_complex(scenario, a).norm()
}

/// Nudges a factor root by up to 3 ulps to the argmin of |factor|,
/// preferring the original and smaller displacements on ties.
fn polish_root(f: &Linear, r0: f64) -> f64 {
    let mut best = r0;
    let mut best_val = f.eval(r0).abs();
    let mut up = r0;
    let mut down = r0;
    for _ in 0..3 {
        up = up.next_up();
        down = down.next_down();
        for x in [up, down] {
            let v = f.eval(x).abs();
            if v < best_val {
                best = x;
                best_val = v;
            }
        }
    }
    best
}

/// Exact coalescence parameters from the factored conditions: the
/// roots of the linear factors, ulp-polished, sorted, deduplicated.
/// Empty when the scenario admits no factored form (or the factors
/// are constant). Not filtered to the sweep window.
pub fn analytic_ep_conditions(scenario: &SweepScenario) -> Vec<f64> {
    let mut roots = Vec::new();
    if let Some(factors) = ZForm::of(scenario).factors() {
        for f in factors {
            if f.c1 == 0.0 {
                continue;
            }
            roots.push(polish_root(&f, -(f.c0 / f.c1)));
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup();
    roots
}

/// Classifies the spectral regime at `a` from the components of Z.
/// Fails with [`EpError::AtEp`] when |Z| sits below the relative
/// tolerance `1e-8 * (1 + |Z|)`, where the direction of Z is noise.
pub fn regime_classify(scenario: &SweepScenario, a: f64) -> Result<RegimeLabel, EpError> {
    let z = z_complex(scenario, a);
    let z_mag = z.norm();
    let tol = 1e-8 * (1.0 + z_mag);
    if z_mag < tol {
        return Err(EpError::AtEp { z_mag, tol });
    }
    let re = z.re.abs();
    let im = z.im.abs();
    let kind = if re > DOMINANCE_THRESHOLD * z_mag {
        RegimeKind::LevelRepulsion
    } else if im > DOMINANCE_THRESHOLD * z_mag {
        RegimeKind::WidthBifurcation
    } else {
        RegimeKind::Mixed
    };
    Ok(RegimeLabel {
        kind,
        dominance: re.max(im) / (re + im),
    })
}

/// The regime just to one side of `a_star` (`side` = -1 or +1),
/// stepping outward by a relative offset and widening it when the
/// probe still sits inside the coalescence tolerance. Falls back to
/// [`RegimeKind::Mixed`] if no classifiable point is found.
fn regime_near(scenario: &SweepScenario, a_star: f64, side: f64) -> RegimeKind {
    let mut delta = 1e-4 * (1.0 + a_star.abs());
    for _ in 0..4 {
        match regime_classify(scenario, a_star + side * delta) {
            Ok(label) => return label.kind,
            Err(_) => delta *= 10.0,
        }
    }
    RegimeKind::Mixed
}

fn check_bracket(lo: f64, hi: f64) -> Result<(), EpError> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(EpError::EmptyBracket { lo, hi })
    }
}

/// Tolerance on |Z| below which a located minimum counts as a true
/// coalescence, scaled by the splitting magnitude at the original
/// bracket endpoints.
pub(crate) fn ep_z_tolerance(scenario: &SweepScenario, lo: f64, hi: f64) -> f64 {
    let scale =
        (1.0 + z_magnitude(scenario, lo)).max(1.0 + z_magnitude(scenario, hi));
    1e-8 * scale
}

fn report_at(
    scenario: &SweepScenario,
    a_star: f64,
    method: EpMethod,
    tol: f64,
) -> EpReport {
    let z_mag = z_magnitude(scenario, a_star);
    EpReport {
        a_star,
        z_mag,
        method,
        is_true_ep: z_mag < tol,
        regime_left: regime_near(scenario, a_star, -1.0),
        regime_right: regime_near(scenario, a_star, 1.0),
    }
}

/// Locates the minimum of |Z| inside `(lo, hi)` by golden-section
/// search on |Q| (assumed unimodal over the bracket), refined by a
/// terminal ulp scan so exactly attainable zeros are reached exactly.
/// The achieved minimum is reported whether or not it is a true
/// coalescence; see [`EpReport::is_true_ep`].
pub fn find_ep_numeric(
    scenario: &SweepScenario,
    bracket: (f64, f64),
) -> Result<EpReport, EpError> {
    let (lo0, hi0) = bracket;
    check_bracket(lo0, hi0)?;
    let form = ZForm::of(scenario);
    // |Q|/4 = |Z|^2: same minimizer as |Z|, no square roots inside
    // the loop.
    let obj = |a: f64| form.q(a).norm() * 0.25;
    let tol = ep_z_tolerance(scenario, lo0, hi0);

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (lo0, hi0);
    let mut x2 = hi - inv_phi * (hi - lo);
    let mut x3 = lo + inv_phi * (hi - lo);
    for _ in 0..300 {
        if !(lo < x2 && x2 < x3 && x3 < hi) {
            break;
        }
        if obj(x2) <= obj(x3) {
            hi = x3;
        } else {
            lo = x2;
        }
        let w = hi - lo;
        x2 = hi - inv_phi * w;
        x3 = lo + inv_phi * w;
    }

    let mut best = lo;
    let mut best_val = obj(lo);
    for cand in [0.5 * (lo + hi), hi, x2, x3] {
        let v = obj(cand);
        if v < best_val {
            best = cand;
            best_val = v;
        }
    }
    // The probes are irrational combinations of the endpoints and
    // never land on an exactly representable zero by themselves; a
    // short ulp walk closes that gap.
    let mut up = best;
    let mut down = best;
    for _ in 0..16 {
        up = up.next_up();
        down = down.next_down();
        for x in [up, down] {
            let v = obj(x);
            if v < best_val {
                best = x;
                best_val = v;
            }
        }
    }

    Ok(report_at(scenario, best, EpMethod::NumericMin, tol))
}

/// All coalescence candidates inside the closed bracket: the exact
/// factored-condition roots when the scenario admits them and at
/// least one lies inside, otherwise the single numeric minimum of
/// |Z| over the bracket.
pub fn locate_eps(
    scenario: &SweepScenario,
    bracket: (f64, f64),
) -> Result<Vec<EpReport>, EpError> {
    let (lo, hi) = bracket;
    check_bracket(lo, hi)?;
    let form = ZForm::of(scenario);
    let method = form.method();
    if method != EpMethod::NumericMin {
        let inside: Vec<f64> = analytic_ep_conditions(scenario)
            .into_iter()
            .filter(|r| lo <= *r && *r <= hi)
            .collect();
        if !inside.is_empty() {
            let tol = ep_z_tolerance(scenario, lo, hi);
            return Ok(inside
                .into_iter()
                .map(|a| report_at(scenario, a, method, tol))
                .collect());
        }
    }
    Ok(vec![find_ep_numeric(scenario, bracket)?])
}
