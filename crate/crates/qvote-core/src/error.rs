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

//! Error type shared by all simulator modules.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bit string `{string}` has length {got}, expected {expected}")]
    BitLength {
        string: String,
        expected: usize,
        got: usize,
    },

    #[error("bit string `{0}` contains characters other than '0' and '1'")]
    BitChar(String),

    #[error("bit string `{string}` has Hamming weight {got}, expected {expected}")]
    WeightMismatch {
        string: String,
        expected: usize,
        got: usize,
    },

    #[error("Hamming weight {s} outside 0..={n}")]
    WeightRange { s: usize, n: usize },

    #[error("qubit index {index} outside 1..={n}")]
    QubitIndex { index: usize, n: usize },

    #[error("rank {pi} outside 1..={d}")]
    RankRange { pi: usize, d: usize },

    #[error("qubit indices must differ, got {0} twice")]
    EqualQubits(usize),

    #[error("bit position {0} appears in more than one swap pair")]
    DuplicatePosition(usize),

    #[error("{what} supports at most {max}, got {got}")]
    ResourceLimit {
        what: &'static str,
        max: usize,
        got: usize,
    },

    #[error("amplitude vector has length {got}, expected {expected}")]
    AmplitudeLength { expected: usize, got: usize },

    #[error("state has squared norm {0}, expected 1")]
    NotNormalized(f64),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("operator matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),

    #[error("Kraus operators do not resolve the identity (max deviation {0:.3e})")]
    NotTracePreserving(f64),

    #[error("ensemble probabilities sum to {0}, expected 1")]
    UnbalancedEnsemble(f64),

    #[error("ensemble probability {0} outside [0, 1]")]
    BadProbability(f64),

    #[error("voter {0} declares partner {1}, but the partnership is not mutual")]
    AsymmetricPair(usize, usize),

    #[error("voter {0} cannot check with themselves")]
    SelfPair(usize),

    #[error("cannot parse voter action `{0}`; expected `vote:0`, `vote:1` or `check:<partner>`")]
    BadAction(String),

    #[error("apparatus states hold {got} amplitudes, expected d_s^2 * D = {expected}")]
    ApparatusShape { expected: usize, got: usize },

    #[error("apparatus dimension must be at least 1")]
    EmptyApparatus,

    #[error("apparatus states violate the isometry constraint (max deviation {0:.3e})")]
    NotIsometry(f64),

    #[error("{got} phases given, expected d_s = {expected}")]
    PhaseCount { expected: usize, got: usize },

    #[error("attack is confined to tally {attack}, but the event announces {event}")]
    TallyMismatch { attack: usize, event: usize },

    #[error("cannot parse attack `{0}`: {1}")]
    BadAttack(String, String),

    #[error("shot count must be at least 1")]
    NoShots,
}
