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

//! Serializable report documents shared by the CLI and the browser demo.
//!
//! Every report echoes the full resolved configuration so a result can be
//! audited and reproduced from the document alone.

use serde::Serialize;

use crate::attack::DetectionReport;
use crate::montecarlo::MonteCarloReport;
use crate::protocol::{BallotTestReport, Event, TallyOutcome};

/// Probabilities are printed with 12 significant digits, enough to tell an
/// exact value from a sampled frequency at a glance.
pub fn format_probability(p: f64) -> String {
    format!("{p:.11e}")
}

#[derive(Debug, Clone, Serialize)]
pub struct TallyLine {
    pub s: usize,
    pub probability: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PartyLine {
    pub party: String,
    pub failure_probability: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TallyFrequency {
    pub s: usize,
    pub count: u64,
    pub frequency: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PartyFrequency {
    pub party: String,
    pub failures: u64,
    pub frequency: f64,
}

/// Sampled-run section of a [`RunReport`].
#[derive(Debug, Clone, Serialize)]
pub struct MonteCarloSection {
    pub shots: u64,
    pub seed: u64,
    pub tally_frequencies: Vec<TallyFrequency>,
    pub failures: u64,
    pub failure_frequency: f64,
    pub per_party: Vec<PartyFrequency>,
}

impl MonteCarloSection {
    pub fn from_report(mc: &MonteCarloReport) -> Self {
        let shots = mc.shots as f64;
        Self {
            shots: mc.shots,
            seed: mc.seed,
            tally_frequencies: mc
                .tally_counts
                .iter()
                .map(|&(s, count)| TallyFrequency {
                    s,
                    count,
                    frequency: count as f64 / shots,
                })
                .collect(),
            failures: mc.failures,
            failure_frequency: mc.failure_frequency(),
            per_party: mc
                .per_party
                .iter()
                .map(|p| PartyFrequency {
                    party: p.party.to_string(),
                    failures: p.failures,
                    frequency: p.failures as f64 / shots,
                })
                .collect(),
        }
    }
}

/// Full result document of one scenario run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub n: usize,
    pub actions: Vec<String>,
    pub attack: String,
    pub expected_tally: usize,
    pub mode: String,
    /// Exact tally distribution of the collected ballots.
    pub tally: Vec<TallyLine>,
    /// Probability that every party passes the ballot test.
    pub pass_probability: f64,
    /// 1 - pass probability.
    pub detection_probability: f64,
    pub per_party: Vec<PartyLine>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<MonteCarloSection>,
}

impl RunReport {
    pub fn exact(
        event: &Event,
        attack: String,
        tally: &[TallyOutcome],
        test: &BallotTestReport,
    ) -> Self {
        Self {
            n: event.n(),
            actions: event.action_strings(),
            attack,
            expected_tally: event.expected_tally(),
            mode: "exact".into(),
            tally: tally
                .iter()
                .map(|o| TallyLine {
                    s: o.s,
                    probability: o.probability,
                })
                .collect(),
            pass_probability: test.pass_probability,
            detection_probability: (1.0 - test.pass_probability).clamp(0.0, 1.0),
            per_party: test
                .per_party
                .iter()
                .map(|p| PartyLine {
                    party: p.party.to_string(),
                    failure_probability: p.failure_probability,
                })
                .collect(),
            monte_carlo: None,
        }
    }

    pub fn with_monte_carlo(mut self, mc: &MonteCarloReport) -> Self {
        self.mode = "monte-carlo".into();
        self.monte_carlo = Some(MonteCarloSection::from_report(mc));
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    /// 1-based position in enumeration order.
    pub index: usize,
    pub event: String,
    pub detection_probability: f64,
}

/// Event-by-event detection table for one attack.
#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub n: usize,
    pub s: usize,
    pub attack: String,
    pub rows: Vec<ScanRow>,
    pub max_index: usize,
    pub max_event: String,
    pub max_probability: f64,
}

impl ScanReport {
    pub fn from_detection(n: usize, s: usize, attack: String, report: &DetectionReport) -> Self {
        Self {
            n,
            s,
            attack,
            rows: report
                .per_event
                .iter()
                .enumerate()
                .map(|(idx, d)| ScanRow {
                    index: idx + 1,
                    event: d.event.to_string(),
                    detection_probability: d.failure_probability,
                })
                .collect(),
            max_index: report.max_index + 1,
            max_event: report.max_event().to_string(),
            max_probability: report.max_probability,
        }
    }
}

/// Outcome of one verification suite run.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub parameters: String,
    pub checks: u64,
    pub failures: u64,
    pub passed: bool,
    pub details: Vec<String>,
}
