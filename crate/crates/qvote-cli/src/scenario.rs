// Copyright 2026 The qvote Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! Scenario and apparatus file loading.
//!
//! Scenarios are TOML. The minimal file is one action token per voter:
//!
//! ```toml
//! actions = ["check:2", "check:1", "vote:1", "vote:0"]
//! ```
//!
//! with optional attack and mode sections:
//!
//! ```toml
//! [attack]
//! kind = "single-qubit"        # none | single-qubit | diagonal-phases | apparatus
//! qubit = 1                    # single-qubit only
//! # phases = [0.0, 3.141592653589793]   # diagonal-phases only
//! # file = "apparatus.json"             # apparatus only, relative to the scenario
//!
//! [mode]
//! kind = "monte-carlo"         # exact (default) | monte-carlo
//! shots = 10000
//! seed = 7
//! ```
//!
//! An apparatus file is a JSON d×d×D nested array of [re, im] pairs giving
//! the pointer state attached to each (π, π') transition.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::Deserialize;

use qvote_core::attack::{ApparatusSpec, AttackConfig};
use qvote_core::protocol::Event;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    /// Optional; must match the action count when given.
    n: Option<usize>,
    actions: Vec<String>,
    attack: Option<AttackSection>,
    mode: Option<ModeSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AttackSection {
    kind: String,
    qubit: Option<usize>,
    phases: Option<Vec<f64>>,
    file: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModeSection {
    kind: String,
    shots: Option<u64>,
    seed: Option<u64>,
}

/// How the round is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    MonteCarlo { shots: u64, seed: u64 },
}

/// A fully resolved scenario, ready to run.
#[derive(Debug)]
pub struct Scenario {
    pub event: Event,
    pub attack: AttackConfig,
    pub mode: Mode,
}

pub const DEFAULT_SHOTS: u64 = 10_000;
pub const DEFAULT_SEED: u64 = 1;

/// Loads and validates a scenario file; `--shots`/`--seed` overrides force
/// Monte-Carlo mode.
pub fn load_scenario(
    path: &Path,
    shots_override: Option<u64>,
    seed_override: Option<u64>,
) -> Result<Scenario> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read scenario file `{}`", path.display()))?;
    let file: ScenarioFile = toml::from_str(&text)
        .with_context(|| format!("cannot parse scenario file `{}`", path.display()))?;

    let event = Event::from_action_strs(file.actions.iter().map(|s| s.as_str()))
        .context("invalid `actions` list")?;
    if let Some(n) = file.n {
        if n != event.n() {
            bail!(
                "scenario declares n = {n} but lists {} actions",
                event.n()
            );
        }
    }

    let attack = match file.attack {
        None => AttackConfig::None,
        Some(section) => resolve_attack(&section, path, &event)?,
    };

    let mut mode = match file.mode {
        None => Mode::Exact,
        Some(section) => match section.kind.as_str() {
            "exact" => Mode::Exact,
            "monte-carlo" => Mode::MonteCarlo {
                shots: section.shots.unwrap_or(DEFAULT_SHOTS),
                seed: section.seed.unwrap_or(DEFAULT_SEED),
            },
            other => bail!("unknown mode kind `{other}` (expected `exact` or `monte-carlo`)"),
        },
    };
    if shots_override.is_some() || seed_override.is_some() {
        let (shots, seed) = match mode {
            Mode::MonteCarlo { shots, seed } => (shots, seed),
            Mode::Exact => (DEFAULT_SHOTS, DEFAULT_SEED),
        };
        mode = Mode::MonteCarlo {
            shots: shots_override.unwrap_or(shots),
            seed: seed_override.unwrap_or(seed),
        };
    }

    Ok(Scenario {
        event,
        attack,
        mode,
    })
}

fn resolve_attack(section: &AttackSection, scenario_path: &Path, event: &Event) -> Result<AttackConfig> {
    match section.kind.as_str() {
        "none" => Ok(AttackConfig::None),
        "single-qubit" => {
            let qubit = section
                .qubit
                .context("attack kind `single-qubit` needs a `qubit` field")?;
            Ok(AttackConfig::SingleQubit { qubit })
        }
        "diagonal-phases" => {
            let phases = section
                .phases
                .clone()
                .context("attack kind `diagonal-phases` needs a `phases` list")?;
            Ok(AttackConfig::DiagonalPhases { phases })
        }
        "apparatus" => {
            let file = section
                .file
                .as_ref()
                .context("attack kind `apparatus` needs a `file` field")?;
            let resolved = scenario_path
                .parent()
                .map(|dir| dir.join(file))
                .unwrap_or_else(|| file.clone());
            let spec = load_apparatus(&resolved, event.n(), event.expected_tally())?;
            Ok(AttackConfig::Apparatus { spec })
        }
        other => bail!(
            "unknown attack kind `{other}` (expected none, single-qubit, diagonal-phases or apparatus)"
        ),
    }
}

/// Parses the compact `--attack` argument of `qvote scan`; `apparatus:<file>`
/// loads pointer states from disk.
pub fn parse_attack_arg(text: &str, n: usize, s: usize) -> Result<AttackConfig> {
    if let Some(path) = text.strip_prefix("apparatus:") {
        let spec = load_apparatus(Path::new(path.trim()), n, s)?;
        return Ok(AttackConfig::Apparatus { spec });
    }
    Ok(AttackConfig::parse(text)?)
}

/// Reads a d×d×D nested JSON array of [re, im] pairs.
pub fn load_apparatus(path: &Path, n: usize, s: usize) -> Result<ApparatusSpec> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read apparatus file `{}`", path.display()))?;
    let raw: Vec<Vec<Vec<[f64; 2]>>> = serde_json::from_str(&text)
        .with_context(|| format!("cannot parse apparatus file `{}`", path.display()))?;
    let states: Vec<Vec<Vec<Complex64>>> = raw
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|entry| {
                    entry
                        .into_iter()
                        .map(|[re, im]| Complex64::new(re, im))
                        .collect()
                })
                .collect()
        })
        .collect();
    ApparatusSpec::from_pointer_states(n, s, &states).with_context(|| {
        format!(
            "apparatus file `{}` does not fit n = {n}, s = {s}",
            path.display()
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(contents: &str, suffix: &str) -> tempfile::NamedTempFile {
        let mut file = tempfile::Builder::new().suffix(suffix).tempfile().unwrap();
        file.write_all(contents.as_bytes()).unwrap();
        file
    }

    #[test]
    fn minimal_scenario_parses() {
        let file = write_temp("actions = [\"vote:1\", \"vote:0\"]\n", ".toml");
        let scenario = load_scenario(file.path(), None, None).unwrap();
        assert_eq!(scenario.event.n(), 2);
        assert!(matches!(scenario.attack, AttackConfig::None));
        assert_eq!(scenario.mode, Mode::Exact);
    }

    #[test]
    fn full_scenario_parses() {
        let file = write_temp(
            "n = 2\nactions = [\"check:2\", \"check:1\"]\n\n[attack]\nkind = \"single-qubit\"\nqubit = 1\n\n[mode]\nkind = \"monte-carlo\"\nshots = 500\nseed = 3\n",
            ".toml",
        );
        let scenario = load_scenario(file.path(), None, None).unwrap();
        assert!(matches!(
            scenario.attack,
            AttackConfig::SingleQubit { qubit: 1 }
        ));
        assert_eq!(
            scenario.mode,
            Mode::MonteCarlo {
                shots: 500,
                seed: 3
            }
        );
    }

    #[test]
    fn overrides_force_monte_carlo() {
        let file = write_temp("actions = [\"vote:0\"]\n", ".toml");
        let scenario = load_scenario(file.path(), Some(100), None).unwrap();
        assert_eq!(
            scenario.mode,
            Mode::MonteCarlo {
                shots: 100,
                seed: DEFAULT_SEED
            }
        );
    }

    #[test]
    fn mismatched_n_is_rejected() {
        let file = write_temp("n = 3\nactions = [\"vote:0\"]\n", ".toml");
        assert!(load_scenario(file.path(), None, None).is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let file = write_temp("actions = [\"vote:0\"]\nturnout = 1\n", ".toml");
        let err = load_scenario(file.path(), None, None).unwrap_err();
        assert!(format!("{err:#}").contains("turnout"));
    }

    #[test]
    fn apparatus_file_round_trip() {
        // Diagonal spec distinguishing the two weight-1 strings of 2 qubits.
        let json = "[[[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]], \
                     [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]]";
        let file = write_temp(json, ".json");
        let spec = load_apparatus(file.path(), 2, 1).unwrap();
        assert_eq!(spec.apparatus_dim(), 2);
        assert!(spec.validate_isometry().passed);
    }
}
