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

//! Curious-tallyman attacks and their exact detection probabilities.
//!
//! After announcing the tally s, a curious tallyman may couple the ballots
//! to a measuring apparatus. Restricted to the fixed-weight subspace the
//! ballots live in, the most general such measurement is parameterized by a
//! matrix of apparatus pointer states: basis string π maps to the
//! superposition over π' of |m(s,π')⟩ tagged with pointer state a_ππ'.
//! Tracing out the apparatus turns that isometry into a Kraus channel on the
//! ballot register. This module builds those channels, evaluates exact
//! ballot-test failure probabilities against any event, and verifies by
//! brute force that every non-trivial measurement is detectable.

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::protocol::{self, encode_event, enumerate_events, Event, VoterAction};
use crate::qstate::{apply_channel, Ensemble, KrausChannel, CHANNEL_TOL};
use crate::weights::{self, position_mask, WeightClass};

/// A detection probability above this counts as "detectable".
pub const DETECTION_THRESHOLD: f64 = 1e-9;

/// Specs this close to the trivial one are classified as "no measurement".
pub const IDENTITY_TOL: f64 = 1e-9;

/// Band inside which a probability is treated as exactly zero.
pub const EXACT_TOL: f64 = 1e-12;

/// The pointer-state matrix defining a tallyman measurement on the tally-s
/// subspace: entry (π, π') is the unnormalized apparatus state attached to
/// the transition |m(s,π)⟩ → |m(s,π')⟩. Unitarity of the joint
/// object–apparatus transformation is equivalent to the rows being
/// orthonormal as vectors over (π', apparatus) jointly.
#[derive(Debug, Clone)]
pub struct ApparatusSpec {
    n: usize,
    s: usize,
    apparatus_dim: usize,
    /// Flat (π, π', x) array, π and π' 0-based here.
    states: Vec<Complex64>,
}

impl ApparatusSpec {
    /// Builds a spec from a flat (π, π', x) amplitude array.
    pub fn new(n: usize, s: usize, apparatus_dim: usize, states: Vec<Complex64>) -> Result<Self> {
        let class = WeightClass::enumerate(n, s)?;
        let d = class.len();
        if apparatus_dim == 0 {
            return Err(Error::EmptyApparatus);
        }
        let expected = d * d * apparatus_dim;
        if states.len() != expected {
            return Err(Error::ApparatusShape {
                expected,
                got: states.len(),
            });
        }
        Ok(Self {
            n,
            s,
            apparatus_dim,
            states,
        })
    }

    /// Builds a spec from nested pointer states `states[π][π'][x]`.
    pub fn from_pointer_states(
        n: usize,
        s: usize,
        states: &[Vec<Vec<Complex64>>],
    ) -> Result<Self> {
        let class = WeightClass::enumerate(n, s)?;
        let d = class.len();
        let apparatus_dim = states
            .first()
            .and_then(|row| row.first())
            .map(|v| v.len())
            .unwrap_or(0);
        let expected = d * d * apparatus_dim.max(1);
        let mut flat = Vec::with_capacity(d * d * apparatus_dim);
        for row in states {
            for entry in row {
                if entry.len() != apparatus_dim {
                    return Err(Error::ApparatusShape {
                        expected,
                        got: entry.len(),
                    });
                }
                flat.extend_from_slice(entry);
            }
        }
        if states.len() != d || states.iter().any(|row| row.len() != d) {
            return Err(Error::ApparatusShape {
                expected,
                got: flat.len(),
            });
        }
        Self::new(n, s, apparatus_dim, flat)
    }

    /// The trivial spec: a_ππ' = δ_ππ' with a one-dimensional apparatus.
    pub fn identity(n: usize, s: usize) -> Result<Self> {
        let d = WeightClass::enumerate(n, s)?.len();
        let mut states = vec![Complex64::ZERO; d * d];
        for pi in 0..d {
            states[pi * d + pi] = Complex64::ONE;
        }
        Self::new(n, s, 1, states)
    }

    /// Diagonal spec a_ππ = e^{iθ_π}: a pure relative-phase unitary on the
    /// tally-s subspace, one phase per basis string.
    pub fn diagonal_phases(n: usize, s: usize, phases: &[f64]) -> Result<Self> {
        let d = WeightClass::enumerate(n, s)?.len();
        if phases.len() != d {
            return Err(Error::PhaseCount {
                expected: d,
                got: phases.len(),
            });
        }
        let mut states = vec![Complex64::ZERO; d * d];
        for (pi, &theta) in phases.iter().enumerate() {
            states[pi * d + pi] = Complex64::from_polar(1.0, theta);
        }
        Self::new(n, s, 1, states)
    }

    /// Haar-like random spec with the default apparatus dimension d_s:
    /// complex-Gaussian columns orthonormalized over (π', x) jointly.
    pub fn random<R: Rng + ?Sized>(n: usize, s: usize, rng: &mut R) -> Result<Self> {
        let d = WeightClass::enumerate(n, s)?.len();
        Self::random_with_dim(n, s, d, rng)
    }

    /// Haar-like random spec with an explicit apparatus dimension.
    pub fn random_with_dim<R: Rng + ?Sized>(
        n: usize,
        s: usize,
        apparatus_dim: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let d = WeightClass::enumerate(n, s)?.len();
        let rows = d * apparatus_dim;
        let mut columns: Vec<Vec<Complex64>> = (0..d)
            .map(|_| {
                (0..rows)
                    .map(|_| {
                        let re: f64 = StandardNormal.sample(rng);
                        let im: f64 = StandardNormal.sample(rng);
                        Complex64::new(re, im)
                    })
                    .collect()
            })
            .collect();
        orthonormalize(&mut columns);
        // Column π holds a_ππ' at row (π' * apparatus_dim + x).
        let mut states = vec![Complex64::ZERO; d * d * apparatus_dim];
        for (pi, column) in columns.iter().enumerate() {
            for pip in 0..d {
                for x in 0..apparatus_dim {
                    states[(pi * d + pip) * apparatus_dim + x] =
                        column[pip * apparatus_dim + x];
                }
            }
        }
        Self::new(n, s, apparatus_dim, states)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn apparatus_dim(&self) -> usize {
        self.apparatus_dim
    }

    /// Subspace dimension d_s.
    pub fn subspace_dim(&self) -> usize {
        weights::binomial(self.n, self.s)
    }

    /// Pointer state for the 1-based ranks (π, π').
    pub fn pointer_state(&self, pi: usize, pi_prime: usize) -> Result<&[Complex64]> {
        let d = self.subspace_dim();
        for rank in [pi, pi_prime] {
            if rank == 0 || rank > d {
                return Err(Error::RankRange { pi: rank, d });
            }
        }
        let start = ((pi - 1) * d + (pi_prime - 1)) * self.apparatus_dim;
        Ok(&self.states[start..start + self.apparatus_dim])
    }

    fn pointer(&self, pi: usize, pi_prime: usize) -> &[Complex64] {
        let start = (pi * self.subspace_dim() + pi_prime) * self.apparatus_dim;
        &self.states[start..start + self.apparatus_dim]
    }

    /// Checks the Gram condition Σ_π'' ⟨a_ππ''|a_π'π''⟩ = δ_ππ' implied by
    /// unitarity, reporting the largest absolute deviation.
    pub fn validate_isometry(&self) -> IsometryReport {
        let d = self.subspace_dim();
        let mut max_deviation = 0.0f64;
        for pi in 0..d {
            for pi_other in 0..d {
                let mut overlap = Complex64::ZERO;
                for pi_mid in 0..d {
                    let a = self.pointer(pi, pi_mid);
                    let b = self.pointer(pi_other, pi_mid);
                    overlap += a
                        .iter()
                        .zip(b)
                        .map(|(x, y)| x.conj() * y)
                        .sum::<Complex64>();
                }
                let expected = if pi == pi_other {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                };
                max_deviation = max_deviation.max((overlap - expected).norm());
            }
        }
        IsometryReport {
            passed: max_deviation <= CHANNEL_TOL,
            max_deviation,
        }
    }

    /// True when the spec describes no measurement at all: off-diagonal
    /// pointer states vanish and every diagonal state equals a_11. (A global
    /// phase on the whole family cancels in the comparison with a_11, so
    /// this criterion is insensitive to it.)
    pub fn is_identity_like(&self, tol: f64) -> bool {
        let d = self.subspace_dim();
        let reference = self.pointer(0, 0);
        for pi in 0..d {
            for pip in 0..d {
                let a = self.pointer(pi, pip);
                if pi != pip {
                    if a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() > tol {
                        return false;
                    }
                } else {
                    let dist = a
                        .iter()
                        .zip(reference)
                        .map(|(x, y)| (x - y).norm_sqr())
                        .sum::<f64>()
                        .sqrt();
                    if dist > tol {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Result of the isometry diagnostic.
#[derive(Debug, Clone, Copy)]
pub struct IsometryReport {
    pub passed: bool,
    pub max_deviation: f64,
}

/// Twice-through modified Gram–Schmidt; columns must be linearly
/// independent, which Gaussian draws are almost surely.
fn orthonormalize(columns: &mut [Vec<Complex64>]) {
    for c in 0..columns.len() {
        for _ in 0..2 {
            for b in 0..c {
                let overlap: Complex64 = columns[b]
                    .iter()
                    .zip(&columns[c])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let (prev, curr) = columns.split_at_mut(c);
                for (x, y) in prev[b].iter().zip(curr[0].iter_mut()) {
                    *y -= overlap * x;
                }
            }
            let norm = columns[c]
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>()
                .sqrt();
            for z in &mut columns[c] {
                *z /= norm;
            }
        }
    }
}

/// Which part of the register an attack channel acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelSupport {
    /// Confined to the subspace of tally `s`; identity elsewhere.
    Subspace(usize),
    /// Preserves every fixed-weight subspace (e.g. a single-qubit
    /// computational measurement), hence valid for any announced tally.
    AllWeights,
}

/// An attack as an operational channel on the full register.
#[derive(Debug, Clone)]
pub struct AttackChannel {
    n: usize,
    support: ChannelSupport,
    channel: KrausChannel,
}

impl AttackChannel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> ChannelSupport {
        self.support
    }

    pub fn channel(&self) -> &KrausChannel {
        &self.channel
    }

    /// The do-nothing attack.
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            support: ChannelSupport::AllWeights,
            channel: KrausChannel::identity(1 << n),
        }
    }

    fn compatible_tally(&self, s: usize) -> Result<()> {
        match self.support {
            ChannelSupport::Subspace(own) if own != s => Err(Error::TallyMismatch {
                attack: own,
                event: s,
            }),
            _ => Ok(()),
        }
    }
}

/// Converts a pointer-state spec into its Kraus channel: for each apparatus
/// component x, K_x = Σ_ππ' a_ππ'[x] |m(s,π')⟩⟨m(s,π)|; the first operator
/// additionally carries the identity on the complement of the subspace, so
/// the family is trace-preserving on the whole register.
pub fn apparatus_to_channel(spec: &ApparatusSpec) -> Result<AttackChannel> {
    let isometry = spec.validate_isometry();
    if !isometry.passed {
        return Err(Error::NotIsometry(isometry.max_deviation));
    }
    let class = WeightClass::enumerate(spec.n(), spec.s())?;
    let d = class.len();
    let dim = 1usize << spec.n();
    let mut kraus_ops = Vec::new();
    for x in 0..spec.apparatus_dim() {
        let mut k = Array2::<Complex64>::zeros((dim, dim));
        let mut nonzero = false;
        for pi in 0..d {
            for pip in 0..d {
                let amp = spec.pointer(pi, pip)[x];
                if amp != Complex64::ZERO {
                    let row = class.values()[pip] as usize;
                    let col = class.values()[pi] as usize;
                    k[(row, col)] = amp;
                    nonzero = true;
                }
            }
        }
        if x == 0 {
            for idx in 0..dim {
                if idx.count_ones() as usize != spec.s() {
                    k[(idx, idx)] = Complex64::ONE;
                }
            }
            nonzero = true;
        }
        if nonzero {
            kraus_ops.push(k);
        }
    }
    Ok(AttackChannel {
        n: spec.n(),
        support: ChannelSupport::Subspace(spec.s()),
        channel: KrausChannel::new(kraus_ops)?,
    })
}

/// The simplest attack: measure qubit `i` in the computational basis.
pub fn single_qubit_attack(i: usize, n: usize) -> Result<AttackChannel> {
    if n == 0 || n > crate::qstate::MAX_QUBITS {
        return Err(Error::ResourceLimit {
            what: "qubit count",
            max: crate::qstate::MAX_QUBITS,
            got: n,
        });
    }
    if i == 0 || i > n {
        return Err(Error::QubitIndex { index: i, n });
    }
    let dim = 1usize << n;
    let mask = position_mask(i) as usize;
    let mut k0 = Array2::<Complex64>::zeros((dim, dim));
    let mut k1 = Array2::<Complex64>::zeros((dim, dim));
    for idx in 0..dim {
        if idx & mask == 0 {
            k0[(idx, idx)] = Complex64::ONE;
        } else {
            k1[(idx, idx)] = Complex64::ONE;
        }
    }
    Ok(AttackChannel {
        n,
        support: ChannelSupport::AllWeights,
        channel: KrausChannel::new(vec![k0, k1])?,
    })
}

/// Exact probability that the ballot test fails after the attack: the event
/// is encoded honestly, tallied (which leaves it unchanged), pushed through
/// the attack channel, and tested by the voters.
pub fn detection_probability(event: &Event, attack: &AttackChannel) -> Result<f64> {
    if attack.n() != event.n() {
        return Err(Error::DimensionMismatch {
            left: 1 << attack.n(),
            right: 1 << event.n(),
        });
    }
    attack.compatible_tally(event.expected_tally())?;
    let collected = Ensemble::pure(encode_event(event));
    let returned = apply_channel(&collected, attack.channel())?;
    let report = protocol::ballot_test(event, &returned)?;
    Ok((1.0 - report.pass_probability).clamp(0.0, 1.0))
}

/// Detection probability of one enumerated event.
#[derive(Debug, Clone)]
pub struct EventDetection {
    pub event: Event,
    pub failure_probability: f64,
}

/// Detection probabilities across all events announcing a given tally.
#[derive(Debug, Clone)]
pub struct DetectionReport {
    pub per_event: Vec<EventDetection>,
    /// Index into `per_event` of the first maximal entry.
    pub max_index: usize,
    pub max_probability: f64,
}

impl DetectionReport {
    pub fn max_event(&self) -> &Event {
        &self.per_event[self.max_index].event
    }
}

/// Evaluates [`detection_probability`] over every event with tally `s` on
/// `n` voters; ties broken by enumeration order.
pub fn max_detection(attack: &AttackChannel, n: usize, s: usize) -> Result<DetectionReport> {
    let events = enumerate_events(n, Some(s))?;
    let mut per_event = Vec::with_capacity(events.len());
    let mut max_index = 0;
    let mut max_probability = f64::NEG_INFINITY;
    for event in events {
        let failure_probability = detection_probability(&event, attack)?;
        if failure_probability > max_probability {
            max_probability = failure_probability;
            max_index = per_event.len();
        }
        per_event.push(EventDetection {
            event,
            failure_probability,
        });
    }
    if per_event.is_empty() {
        return Err(Error::WeightRange { s, n });
    }
    Ok(DetectionReport {
        per_event,
        max_index,
        max_probability,
    })
}

/// Summary of a sampled detectability verification.
#[derive(Debug, Clone, Copy)]
pub struct TheoremCheck {
    pub n: usize,
    pub s: usize,
    pub trials: usize,
    /// Trials discarded as identity-like (no measurement).
    pub skipped: usize,
    /// Non-identity trials whose maximal detection stayed at zero.
    pub failures: usize,
    /// Smallest maximal detection among counted trials.
    pub min_detection: f64,
    /// Maximal detection of the trivial spec (must be numerically zero).
    pub identity_max: f64,
}

impl TheoremCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.identity_max < EXACT_TOL
    }
}

/// Samples `trials` Haar-like apparatus specs (seed + trial index each),
/// discards identity-like ones, and requires every remaining spec to be
/// detectable by some event; also confirms the trivial spec is not.
pub fn theorem_check(n: usize, s: usize, trials: usize, seed: u64) -> Result<TheoremCheck> {
    let identity_channel = apparatus_to_channel(&ApparatusSpec::identity(n, s)?)?;
    let identity_max = max_detection(&identity_channel, n, s)?.max_probability;
    let mut skipped = 0;
    let mut failures = 0;
    let mut min_detection = f64::INFINITY;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64));
        let spec = ApparatusSpec::random(n, s, &mut rng)?;
        if spec.is_identity_like(IDENTITY_TOL) {
            skipped += 1;
            continue;
        }
        let report = max_detection(&apparatus_to_channel(&spec)?, n, s)?;
        min_detection = min_detection.min(report.max_probability);
        if report.max_probability <= DETECTION_THRESHOLD {
            failures += 1;
        }
    }
    Ok(TheoremCheck {
        n,
        s,
        trials,
        skipped,
        failures,
        min_detection,
        identity_max,
    })
}

/// The event that exposes a nonzero off-diagonal pointer state a_ππ': all
/// voters vote, with the bit distribution m(s,π). The returned mixture then
/// contains a component on m(s,π'), which some voter's re-measurement
/// rejects.
pub fn off_diagonal_witness_event(n: usize, s: usize, pi: usize) -> Result<Event> {
    let class = WeightClass::enumerate(n, s)?;
    Event::all_voting(&class.string(pi)?)
}

/// The event that exposes two distinct diagonal pointer states a_ππ and
/// a_π'π': the positions where m(s,π) and m(s,π') differ check in pairs
/// (the swap pairing), everyone else votes the coinciding bit. The encoded
/// superposition contains both strings, so a relative pointer-state
/// difference corrupts some pair's Bell measurement.
pub fn diagonal_witness_event(n: usize, s: usize, pi: usize, pi_prime: usize) -> Result<Event> {
    let class = WeightClass::enumerate(n, s)?;
    let m = class.string(pi)?;
    let m_prime = class.string(pi_prime)?;
    let pairing = weights::swap_pairing(&m, &m_prime)?;
    let (_, value) = weights::parse_bits(&m)?;
    let mut actions: Vec<VoterAction> = (1..=n)
        .map(|pos| VoterAction::Vote(weights::bit_at(value, pos)))
        .collect();
    for &(a, b) in pairing.pairs() {
        actions[a - 1] = VoterAction::Check { partner: b };
        actions[b - 1] = VoterAction::Check { partner: a };
    }
    Event::new(actions)
}

/// An attack selection, as configured by a scenario or a UI.
#[derive(Debug, Clone)]
pub enum AttackConfig {
    None,
    SingleQubit { qubit: usize },
    DiagonalPhases { phases: Vec<f64> },
    Apparatus { spec: ApparatusSpec },
}

impl AttackConfig {
    /// Parses the compact textual forms `none`, `single-qubit:<i>` and
    /// `diagonal-phases:<θ1,θ2,...>`. Pointer-state matrices cannot be
    /// inlined; load them from a file and use [`AttackConfig::Apparatus`].
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::BadAttack(text.to_string(), msg.to_string());
        let trimmed = text.trim();
        if trimmed == "none" {
            return Ok(AttackConfig::None);
        }
        let (kind, arg) = trimmed
            .split_once(':')
            .ok_or_else(|| bad("expected `none`, `single-qubit:<i>` or `diagonal-phases:<...>`"))?;
        match kind.trim() {
            "single-qubit" => {
                let qubit = arg
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| bad("qubit index must be a positive integer"))?;
                Ok(AttackConfig::SingleQubit { qubit })
            }
            "diagonal-phases" => {
                let phases = arg
                    .split(',')
                    .map(|p| p.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<f64>, _>>()
                    .map_err(|_| bad("phases must be comma-separated numbers"))?;
                if phases.is_empty() {
                    return Err(bad("at least one phase is required"));
                }
                Ok(AttackConfig::DiagonalPhases { phases })
            }
            "apparatus" => Err(bad(
                "apparatus specs come from files; load one and build the config directly",
            )),
            _ => Err(bad("unknown attack kind")),
        }
    }

    /// Instantiates the configured channel for `n` voters announcing tally
    /// `s`; `None` means no attack.
    pub fn to_channel(&self, n: usize, s: usize) -> Result<Option<AttackChannel>> {
        match self {
            AttackConfig::None => Ok(None),
            AttackConfig::SingleQubit { qubit } => Ok(Some(single_qubit_attack(*qubit, n)?)),
            AttackConfig::DiagonalPhases { phases } => {
                let spec = ApparatusSpec::diagonal_phases(n, s, phases)?;
                Ok(Some(apparatus_to_channel(&spec)?))
            }
            AttackConfig::Apparatus { spec } => {
                if spec.n() != n {
                    return Err(Error::DimensionMismatch {
                        left: spec.n(),
                        right: n,
                    });
                }
                if spec.s() != s {
                    return Err(Error::TallyMismatch {
                        attack: spec.s(),
                        event: s,
                    });
                }
                Ok(Some(apparatus_to_channel(spec)?))
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            AttackConfig::None => "none".into(),
            AttackConfig::SingleQubit { qubit } => format!("single-qubit:{qubit}"),
            AttackConfig::DiagonalPhases { phases } => {
                let list: Vec<String> = phases.iter().map(|p| format!("{p}")).collect();
                format!("diagonal-phases:{}", list.join(","))
            }
            AttackConfig::Apparatus { spec } => format!(
                "apparatus (s={}, D={})",
                spec.s(),
                spec.apparatus_dim()
            ),
        }
    }
}
