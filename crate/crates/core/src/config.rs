//! TOML scenario files: parsing with key-level error messages, and
//! emission such that `parse(emit(s)) == s`.

use crate::sweep::{Linear, ScenarioError, SweepScenario};
use crate::C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    /// Syntax or schema problem; the message cites the offending
    /// line/key.
    #[error("invalid scenario file: {0}")]
    Parse(#[from] toml::de::Error),
    /// Structurally valid file describing an unusable scenario.
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

/// On-disk schema. Linear forms are `[c0, c1]` for `c0 + c1 * a`;
/// the coupling is `[re0, im0, re1, im1]` for
/// `(re0 + i*im0) + (re1 + i*im1) * a`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    name: String,
    e1: [f64; 2],
    e2: [f64; 2],
    gamma1: [f64; 2],
    gamma2: [f64; 2],
    omega: [f64; 4],
    a_min: f64,
    a_max: f64,
    n_steps: usize,
}

/// Parses and validates a scenario from TOML text.
pub fn parse_config(text: &str) -> Result<SweepScenario, ConfigError> {
    let file: ScenarioFile = toml::from_str(text)?;
    let scenario = SweepScenario {
        name: file.name,
        e1: Linear::new(file.e1[0], file.e1[1]),
        e2: Linear::new(file.e2[0], file.e2[1]),
        gamma1: Linear::new(file.gamma1[0], file.gamma1[1]),
        gamma2: Linear::new(file.gamma2[0], file.gamma2[1]),
        omega0: C64::new(file.omega[0], file.omega[1]),
        omega1: C64::new(file.omega[2], file.omega[3]),
        a_min: file.a_min,
        a_max: file.a_max,
        n_steps: file.n_steps,
    };
    scenario.validate()?;
    Ok(scenario)
}

/// Renders a scenario as TOML. Floats are written with round-trip
/// precision, so parsing the result reproduces the scenario exactly.
pub fn emit_config(scenario: &SweepScenario) -> String {
    let file = ScenarioFile {
        name: scenario.name.clone(),
        e1: [scenario.e1.c0, scenario.e1.c1],
        e2: [scenario.e2.c0, scenario.e2.c1],
        gamma1: [scenario.gamma1.c0, scenario.gamma1.c1],
        gamma2: [scenario.gamma2.c0, scenario.gamma2.c1],
        omega: [
            scenario.omega0.re,
            scenario.omega0.im,
            scenario.omega1.re,
            scenario.omega1.im,
        ],
        a_min: scenario.a_min,
        a_max: scenario.a_max,
        n_steps: scenario.n_steps,
    };
    toml::to_string(&file).expect("scenario serializes to TOML")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::preset;

    const SAMPLE: &str = r#"
name = "custom"
e1 = [1.0, -1.0]
e2 = [0.0, 1.0]
gamma1 = [-1.0, 0.0]
gamma2 = [-1.0, 0.0]
omega = [0.0, 0.1, 0.0, 0.0]
a_min = 0.0
a_max = 1.0
n_steps = 2001
"#;

    #[test]
    fn sample_file_parses_to_the_expected_scenario() {
        let s = parse_config(SAMPLE).unwrap();
        let mut expected = preset("fig1l").unwrap();
        expected.name = "custom".to_string();
        assert_eq!(s, expected);
    }

    #[test]
    fn emit_then_parse_is_the_identity() {
        for name in crate::sweep::PRESET_NAMES {
            let s = preset(name).unwrap();
            let text = emit_config(&s);
            let back = parse_config(&text).unwrap();
            assert_eq!(back, s, "round trip for {name}:\n{text}");
        }
        // Also for awkward float values.
        let mut s = preset("fig1l").unwrap();
        s.e1 = Linear::new(0.1 + 0.2, -1.0 / 3.0);
        s.omega0 = C64::new(1.0e-17, 12345.678901234567);
        assert_eq!(parse_config(&emit_config(&s)).unwrap(), s);
    }

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let text = format!("{SAMPLE}\nbogus_key = 3\n");
        let err = parse_config(&text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bogus_key"), "message was: {msg}");
    }

    #[test]
    fn missing_keys_are_reported_by_name() {
        let text = SAMPLE.replace("omega = [0.0, 0.1, 0.0, 0.0]\n", "");
        let err = parse_config(&text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("omega"), "message was: {msg}");
    }

    #[test]
    fn syntax_errors_cite_the_line() {
        let err = parse_config("name = \"x\"\ne1 = [1.0,\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "message was: {msg}");
    }

    #[test]
    fn semantic_errors_pass_through_validation() {
        let text = SAMPLE.replace("a_max = 1.0", "a_max = -1.0");
        assert!(matches!(
            parse_config(&text).unwrap_err(),
            ConfigError::Scenario(ScenarioError::EmptyRange { .. })
        ));
        let text = SAMPLE.replace("n_steps = 2001", "n_steps = 1");
        assert!(matches!(
            parse_config(&text).unwrap_err(),
            ConfigError::Scenario(ScenarioError::TooFewSteps(1))
        ));
        let text = SAMPLE.replace("a_min = 0.0", "a_min = nan");
        assert!(matches!(
            parse_config(&text).unwrap_err(),
            ConfigError::Scenario(ScenarioError::NonFinite("a_min"))
        ));
    }
}
