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

//! Seeded shot-by-shot sampling of protocol rounds.
//!
//! The exact machinery stays the reference; this wrapper draws individual
//! rounds from the same distributions so sampled frequencies can be compared
//! against exact probabilities. All randomness comes from a ChaCha stream
//! seeded explicitly, so a fixed seed reproduces the report bit for bit.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::attack::AttackChannel;
use crate::error::{Error, Result};
use crate::protocol::{encode_event, party_pass_weight, tally_pvm, Event, Party};
use crate::qstate::{apply_channel, Ensemble};
use crate::weights::position_mask;

/// Failure counts of one party across all shots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartyFailureCount {
    pub party: Party,
    pub failures: u64,
}

/// Sampled frequencies of a repeated round.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloReport {
    pub shots: u64,
    pub seed: u64,
    /// Observed tally outcomes, ascending in s.
    pub tally_counts: Vec<(usize, u64)>,
    /// Shots in which at least one party failed its test.
    pub failures: u64,
    pub per_party: Vec<PartyFailureCount>,
}

impl MonteCarloReport {
    pub fn failure_frequency(&self) -> f64 {
        self.failures as f64 / self.shots as f64
    }

    pub fn tally_frequency(&self, s: usize) -> f64 {
        self.tally_counts
            .iter()
            .find(|(t, _)| *t == s)
            .map(|(_, c)| *c as f64 / self.shots as f64)
            .unwrap_or(0.0)
    }
}

/// Samples `shots` rounds of `event`, optionally attacked after the tally.
pub fn sample_rounds(
    event: &Event,
    attack: Option<&AttackChannel>,
    shots: u64,
    seed: u64,
) -> Result<MonteCarloReport> {
    if shots == 0 {
        return Err(Error::NoShots);
    }
    let collected = encode_event(event);
    let tally = tally_pvm(&collected);
    let returned = match attack {
        Some(a) => {
            if a.n() != event.n() {
                return Err(Error::DimensionMismatch {
                    left: 1 << a.n(),
                    right: 1 << event.n(),
                });
            }
            apply_channel(&Ensemble::pure(collected.clone()), a.channel())?
        }
        None => Ensemble::pure(collected.clone()),
    };

    let parties = event.parties();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally_hits = vec![0u64; event.n() + 1];
    let mut failures = 0u64;
    let mut party_failures = vec![0u64; parties.len()];

    for _ in 0..shots {
        // Announced tally for this round.
        let mut draw: f64 = rng.random();
        let mut observed = tally.last().map(|o| o.s).unwrap_or(0);
        for outcome in &tally {
            if draw < outcome.probability {
                observed = outcome.s;
                break;
            }
            draw -= outcome.probability;
        }
        tally_hits[observed] += 1;

        // Which pure branch the voters receive back.
        let mut draw: f64 = rng.random();
        let mut pick = returned.branches().len() - 1;
        for (slot, branch) in returned.branches().iter().enumerate() {
            if draw < branch.probability {
                pick = slot;
                break;
            }
            draw -= branch.probability;
        }
        let mut amps: Vec<Complex64> = returned.branches()[pick].state.amplitudes().to_vec();

        // Each party measures its own ballots; the projectors act on
        // disjoint qubits, so sequential sampling reproduces the joint
        // distribution.
        let mut round_failed = false;
        for (slot, party) in parties.iter().enumerate() {
            let weight = party_pass_weight(event, party, &amps)?.clamp(0.0, 1.0);
            let passed = rng.random::<f64>() < weight;
            collapse(&mut amps, event, party, passed, weight)?;
            if !passed {
                round_failed = true;
                party_failures[slot] += 1;
            }
        }
        if round_failed {
            failures += 1;
        }
    }

    let tally_counts = tally_hits
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c > 0)
        .collect();
    let per_party = parties
        .into_iter()
        .zip(party_failures)
        .map(|(party, failures)| PartyFailureCount { party, failures })
        .collect();
    Ok(MonteCarloReport {
        shots,
        seed,
        tally_counts,
        failures,
        per_party,
    })
}

/// Collapses the working state onto the sampled branch of `party`'s test.
fn collapse(
    amps: &mut [Complex64],
    event: &Event,
    party: &Party,
    passed: bool,
    pass_weight: f64,
) -> Result<()> {
    let branch_weight = if passed { pass_weight } else { 1.0 - pass_weight };
    match *party {
        Party::Voter(i) => {
            let expected = match event.action(i)? {
                crate::protocol::VoterAction::Vote(b) => b,
                crate::protocol::VoterAction::Check { .. } => {
                    return Err(Error::InvalidMeasurement(format!(
                        "voter {i} is checking, not voting"
                    )))
                }
            };
            let keep = expected == passed;
            let mask = position_mask(i) as usize;
            for (idx, amp) in amps.iter_mut().enumerate() {
                if (idx & mask != 0) != keep {
                    *amp = Complex64::ZERO;
                }
            }
        }
        Party::Pair(i, j) => {
            let mi = position_mask(i) as usize;
            let mj = position_mask(j) as usize;
            for idx in 0..amps.len() {
                let bit_i = idx & mi != 0;
                let bit_j = idx & mj != 0;
                if bit_i == bit_j {
                    // Orthogonal to Psi+; survives only a failed test.
                    if passed {
                        amps[idx] = Complex64::ZERO;
                    }
                    continue;
                }
                if bit_i {
                    // The 1_i 0_j member is updated with its partner below.
                    continue;
                }
                let partner = idx ^ mi ^ mj;
                let average = (amps[idx] + amps[partner]) * 0.5;
                if passed {
                    amps[idx] = average;
                    amps[partner] = average;
                } else {
                    amps[idx] -= average;
                    amps[partner] -= average;
                }
            }
        }
    }
    if branch_weight > f64::MIN_POSITIVE {
        let scale = branch_weight.sqrt().recip();
        for amp in amps.iter_mut() {
            *amp *= scale;
        }
    }
    Ok(())
}
