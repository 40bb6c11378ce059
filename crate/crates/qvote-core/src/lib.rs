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

//! Exact simulator of an anonymous voting protocol with entangled
//! anonymity checks.
//!
//! `n` voters each hand a ballot qubit to a tallyman. A voting voter encodes
//! a bit in the computational basis; two voters who instead want to audit
//! the count prepare their pair of ballots in the Bell state |Psi+⟩. The
//! tallyman counts "yes" votes by projecting onto fixed Hamming-weight
//! subspaces — a measurement that reveals the sum but not its distribution
//! and leaves honest ballots untouched — then returns the qubits, and every
//! party re-checks its own ballots. Any attempt by a curious tallyman to
//! learn *who* voted which way disturbs some checking pair and shows up as a
//! nonzero ballot-test failure probability, which this crate computes
//! exactly.
//!
//! The crate stays deliberately desk-scale: states are dense amplitude
//! vectors capped at [`qstate::MAX_QUBITS`] qubits, mixed states are branch
//! lists, and every probability is exact up to f64 rounding. Randomness
//! exists only where it is asked for (apparatus sampling, Monte-Carlo mode)
//! and is always derived from an explicit seed.

pub mod attack;
pub mod error;
pub mod montecarlo;
pub mod protocol;
pub mod qstate;
pub mod report;
pub mod weights;

pub use attack::{
    apparatus_to_channel, detection_probability, max_detection, single_qubit_attack,
    theorem_check, ApparatusSpec, AttackChannel, AttackConfig, DetectionReport,
};
pub use error::{Error, Result};
pub use montecarlo::{sample_rounds, MonteCarloReport};
pub use protocol::{
    ballot_test, encode_event, enumerate_events, run_honest_round, tally_pvm, BallotTestReport,
    Event, Party, TallyOutcome, VoterAction,
};
pub use qstate::{
    apply_channel, basis_state, bell_state, measure_projectors, tensor, BellKind, Ensemble,
    KrausChannel, Operator, StateVector,
};
pub use weights::{apply_swaps, diff_sets, swap_pairing, SwapPairing, WeightClass};
