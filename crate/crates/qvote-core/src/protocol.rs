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

//! The voting protocol as executable machinery.
//!
//! A round is described classically by an [`Event`]: every voter either casts
//! a bit or teams up with a partner to check anonymity. Voting voters encode
//! their bit in the computational basis; each checking pair prepares |Psi+⟩.
//! The tallyman counts "yes" votes with the projector family over
//! fixed-weight subspaces and returns the ballots; voters then verify their
//! own ballots (computational re-measurement for voters, Bell measurement
//! for checking pairs).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qstate::{Ensemble, Operator, StateVector, MAX_QUBITS, PRUNE_TOL};
use crate::weights::{self, position_mask};

/// Cap on exhaustive event enumeration.
pub const MAX_ENUM_VOTERS: usize = 8;

/// What a single voter does in a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VoterAction {
    /// Cast the bit (false = "no", true = "yes").
    Vote(bool),
    /// Check anonymity together with the 1-based partner index.
    Check { partner: usize },
}

impl FromStr for VoterAction {
    type Err = Error;

    /// Accepts `vote:0`, `vote:1` and `check:<partner>`.
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::BadAction(s.to_string());
        let (kind, arg) = s.split_once(':').ok_or_else(err)?;
        match kind.trim() {
            "vote" => match arg.trim() {
                "0" => Ok(VoterAction::Vote(false)),
                "1" => Ok(VoterAction::Vote(true)),
                _ => Err(err()),
            },
            "check" => {
                let partner = arg.trim().parse::<usize>().map_err(|_| err())?;
                Ok(VoterAction::Check { partner })
            }
            _ => Err(err()),
        }
    }
}

impl fmt::Display for VoterAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VoterAction::Vote(false) => write!(f, "vote:0"),
            VoterAction::Vote(true) => write!(f, "vote:1"),
            VoterAction::Check { partner } => write!(f, "check:{partner}"),
        }
    }
}

/// A complete classical description of one round: one action per voter,
/// with checking voters forming disjoint mutual pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    actions: Vec<VoterAction>,
}

impl Event {
    pub fn new(actions: Vec<VoterAction>) -> Result<Self> {
        let n = actions.len();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::ResourceLimit {
                what: "voter count",
                max: MAX_QUBITS,
                got: n,
            });
        }
        for (idx, action) in actions.iter().enumerate() {
            let voter = idx + 1;
            if let VoterAction::Check { partner } = *action {
                if partner == 0 || partner > n {
                    return Err(Error::QubitIndex { index: partner, n });
                }
                if partner == voter {
                    return Err(Error::SelfPair(voter));
                }
                match actions[partner - 1] {
                    VoterAction::Check { partner: back } if back == voter => {}
                    _ => return Err(Error::AsymmetricPair(voter, partner)),
                }
            }
        }
        Ok(Self { actions })
    }

    /// Parses one action token per voter.
    pub fn from_action_strs<'a, I>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let actions = tokens
            .into_iter()
            .map(VoterAction::from_str)
            .collect::<Result<Vec<_>>>()?;
        Self::new(actions)
    }

    /// Event in which every voter casts the bit at their position of `bits`.
    pub fn all_voting(bits: &str) -> Result<Self> {
        let (len, value) = weights::parse_bits(bits)?;
        let actions = (1..=len)
            .map(|pos| VoterAction::Vote(weights::bit_at(value, pos)))
            .collect();
        Self::new(actions)
    }

    pub fn n(&self) -> usize {
        self.actions.len()
    }

    pub fn actions(&self) -> &[VoterAction] {
        &self.actions
    }

    /// Action of the 1-based `voter`.
    pub fn action(&self, voter: usize) -> Result<VoterAction> {
        if voter == 0 || voter > self.n() {
            return Err(Error::QubitIndex {
                index: voter,
                n: self.n(),
            });
        }
        Ok(self.actions[voter - 1])
    }

    /// Checking pairs as (i, j) with i < j, ascending in i.
    pub fn check_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for (idx, action) in self.actions.iter().enumerate() {
            let voter = idx + 1;
            if let VoterAction::Check { partner } = *action {
                if voter < partner {
                    pairs.push((voter, partner));
                }
            }
        }
        pairs
    }

    /// Number of checking pairs, k.
    pub fn pair_count(&self) -> usize {
        self.check_pairs().len()
    }

    /// Number of "yes" votes, l.
    pub fn yes_votes(&self) -> usize {
        self.actions
            .iter()
            .filter(|a| matches!(a, VoterAction::Vote(true)))
            .count()
    }

    /// The tally an honest round announces: s = k + l.
    pub fn expected_tally(&self) -> usize {
        self.pair_count() + self.yes_votes()
    }

    /// Ballot-testing parties in ascending order: voting voters singly,
    /// checking pairs jointly.
    pub fn parties(&self) -> Vec<Party> {
        let mut parties = Vec::new();
        for (idx, action) in self.actions.iter().enumerate() {
            let voter = idx + 1;
            match *action {
                VoterAction::Vote(_) => parties.push(Party::Voter(voter)),
                VoterAction::Check { partner } if voter < partner => {
                    parties.push(Party::Pair(voter, partner));
                }
                VoterAction::Check { .. } => {}
            }
        }
        parties
    }

    /// Action tokens in voter order, e.g. `["check:2", "check:1", "vote:1"]`.
    pub fn action_strings(&self) -> Vec<String> {
        self.actions.iter().map(|a| a.to_string()).collect()
    }
}

impl fmt::Display for Event {
    /// Compact per-voter tokens: vote bits as `0`/`1`, checks as `c<partner>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for action in &self.actions {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            match action {
                VoterAction::Vote(false) => write!(f, "0")?,
                VoterAction::Vote(true) => write!(f, "1")?,
                VoterAction::Check { partner } => write!(f, "c{partner}")?,
            }
        }
        Ok(())
    }
}

/// A party performing its own ballot test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    Voter(usize),
    Pair(usize, usize),
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Party::Voter(i) => write!(f, "voter {i}"),
            Party::Pair(i, j) => write!(f, "pair ({i},{j})"),
        }
    }
}

/// The state of all ballots the tallyman collects: |b_i⟩ per voting voter,
/// |Psi+⟩ per checking pair. Equivalently, the even superposition of the 2^k
/// weight-(k+l) strings reachable by flipping each pair.
pub fn encode_event(event: &Event) -> StateVector {
    let n = event.n();
    let mut base: u64 = 0;
    for (idx, action) in event.actions().iter().enumerate() {
        if matches!(action, VoterAction::Vote(true)) {
            base |= position_mask(idx + 1);
        }
    }
    let pairs = event.check_pairs();
    let k = pairs.len();
    let mut terms = vec![base];
    for &(i, j) in &pairs {
        let mut split = Vec::with_capacity(terms.len() * 2);
        for t in terms {
            // |0_i 1_j⟩ and |1_i 0_j⟩ components of the pair.
            split.push(t | position_mask(j));
            split.push(t | position_mask(i));
        }
        terms = split;
    }
    let amp = Complex64::new(0.5f64.powi(k as i32).sqrt(), 0.0);
    let mut amplitudes = vec![Complex64::ZERO; 1 << n];
    for t in terms {
        amplitudes[t as usize] = amp;
    }
    StateVector::from_normalized(n, amplitudes)
}

/// One line of the tallyman's exact tally distribution.
#[derive(Debug, Clone)]
pub struct TallyOutcome {
    /// Announced number of "yes" votes.
    pub s: usize,
    pub probability: f64,
    pub post_state: StateVector,
}

/// Born distribution of the vote-count measurement: probability of each
/// tally s is the squared weight of the state inside the fixed-weight
/// subspace, and the post-state is the renormalized projection. Outcomes
/// below [`PRUNE_TOL`] are omitted; for an honest event state the single
/// outcome s = k + l appears with probability 1 and an unchanged state.
pub fn tally_pvm(state: &StateVector) -> Vec<TallyOutcome> {
    let n = state.n_qubits();
    let mut weights_by_s = vec![0.0f64; n + 1];
    for (idx, amp) in state.amplitudes().iter().enumerate() {
        weights_by_s[idx.count_ones() as usize] += amp.norm_sqr();
    }
    let mut outcomes = Vec::new();
    for (s, &probability) in weights_by_s.iter().enumerate() {
        if probability < PRUNE_TOL {
            continue;
        }
        let scale = probability.sqrt().recip();
        let amplitudes = state
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(idx, &amp)| {
                if idx.count_ones() as usize == s {
                    amp * scale
                } else {
                    Complex64::ZERO
                }
            })
            .collect();
        outcomes.push(TallyOutcome {
            s,
            probability,
            post_state: StateVector::from_normalized(n, amplitudes),
        });
    }
    outcomes
}

/// The projector onto the fixed-weight subspace for tally `s` (diagonal in
/// the computational basis).
pub fn weight_projector(n: usize, s: usize) -> Result<Operator> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::ResourceLimit {
            what: "qubit count",
            max: MAX_QUBITS,
            got: n,
        });
    }
    if s > n {
        return Err(Error::WeightRange { s, n });
    }
    let dim = 1usize << n;
    let mut entries = ndarray::Array2::<Complex64>::zeros((dim, dim));
    for idx in 0..dim {
        if idx.count_ones() as usize == s {
            entries[(idx, idx)] = Complex64::ONE;
        }
    }
    Operator::new(entries)
}

/// Outcome of [`pvm_algebra_check`].
#[derive(Debug, Clone, Copy)]
pub struct PvmAlgebra {
    pub completeness_deviation: f64,
    pub orthogonality_deviation: f64,
}

impl PvmAlgebra {
    pub fn passed(&self, tol: f64) -> bool {
        self.completeness_deviation <= tol && self.orthogonality_deviation <= tol
    }
}

/// Verifies that the tally projectors resolve the identity and are mutually
/// orthogonal idempotents, reporting the largest entrywise deviations.
pub fn pvm_algebra_check(n: usize) -> Result<PvmAlgebra> {
    let projectors: Vec<Operator> = (0..=n)
        .map(|s| weight_projector(n, s))
        .collect::<Result<_>>()?;
    let dim = 1usize << n;
    let mut sum = ndarray::Array2::<Complex64>::zeros((dim, dim));
    for p in &projectors {
        sum += p.entries();
    }
    let completeness_deviation = Operator::new(sum)?.max_abs_diff(&Operator::identity(dim));
    let mut orthogonality_deviation = 0.0f64;
    for (a, pa) in projectors.iter().enumerate() {
        for (b, pb) in projectors.iter().enumerate() {
            let product = pa.matmul(pb)?;
            let expected = if a == b { pa.clone() } else { Operator::new(ndarray::Array2::zeros((dim, dim)))? };
            orthogonality_deviation = orthogonality_deviation.max(product.max_abs_diff(&expected));
        }
    }
    Ok(PvmAlgebra {
        completeness_deviation,
        orthogonality_deviation,
    })
}

/// The rank-1 projector every ballot test must pass: |b_i⟩⟨b_i| per voting
/// voter and |Psi+⟩⟨Psi+| per checking pair — the outer product of the
/// honest event state with itself.
pub fn pass_projector(event: &Event) -> Operator {
    Operator::outer(&encode_event(event))
}

/// Per-party failure probability of the ballot test.
#[derive(Debug, Clone)]
pub struct PartyFailure {
    pub party: Party,
    pub failure_probability: f64,
}

/// Exact ballot-test statistics for a returned (possibly mixed) state.
#[derive(Debug, Clone)]
pub struct BallotTestReport {
    /// Probability that every party passes jointly.
    pub pass_probability: f64,
    /// Marginal failure probability of each party testing independently.
    pub per_party: Vec<PartyFailure>,
}

/// Runs the ballot test on `returned`. The joint pass probability is the
/// expectation of the rank-1 pass projector; per-party figures are the
/// marginal statistics of each voter's or pair's own measurement.
pub fn ballot_test(event: &Event, returned: &Ensemble) -> Result<BallotTestReport> {
    if returned.n_qubits() != event.n() {
        return Err(Error::DimensionMismatch {
            left: 1 << event.n(),
            right: 1 << returned.n_qubits(),
        });
    }
    let reference = encode_event(event);
    let mut pass_probability = 0.0;
    for branch in returned.branches() {
        pass_probability += branch.probability * reference.fidelity(&branch.state)?;
    }
    pass_probability = pass_probability.clamp(0.0, 1.0);

    let mut per_party = Vec::new();
    for party in event.parties() {
        let mut pass = 0.0;
        for branch in returned.branches() {
            pass +=
                branch.probability * party_pass_weight(event, &party, branch.state.amplitudes())?;
        }
        per_party.push(PartyFailure {
            party,
            failure_probability: (1.0 - pass).clamp(0.0, 1.0),
        });
    }
    Ok(BallotTestReport {
        pass_probability,
        per_party,
    })
}

/// Probability that `party`'s own measurement passes on the pure state.
pub(crate) fn party_pass_weight(event: &Event, party: &Party, amps: &[Complex64]) -> Result<f64> {
    match *party {
        Party::Voter(i) => {
            let expected = match event.action(i)? {
                VoterAction::Vote(b) => b,
                VoterAction::Check { .. } => {
                    return Err(Error::InvalidMeasurement(format!(
                        "voter {i} is checking, not voting"
                    )))
                }
            };
            let mask = position_mask(i) as usize;
            Ok(amps
                .iter()
                .enumerate()
                .filter(|(idx, _)| (idx & mask != 0) == expected)
                .map(|(_, a)| a.norm_sqr())
                .sum())
        }
        Party::Pair(i, j) => {
            let mi = position_mask(i) as usize;
            let mj = position_mask(j) as usize;
            let mut pass = 0.0;
            for idx in 0..amps.len() {
                // Walk each |0_i 1_j⟩ component once; partner has i and j
                // flipped. ⟨Psi+| picks (a01 + a10)/sqrt(2).
                if idx & mi != 0 || idx & mj == 0 {
                    continue;
                }
                let partner = idx ^ mi ^ mj;
                pass += (amps[idx] + amps[partner]).norm_sqr() / 2.0;
            }
            Ok(pass)
        }
    }
}

/// Executes an honest round: encode, tally, return, test. The tally is the
/// single outcome s = k + l and the test passes with certainty.
pub fn run_honest_round(event: &Event) -> Result<(TallyOutcome, BallotTestReport)> {
    let collected = encode_event(event);
    let outcomes = tally_pvm(&collected);
    let top = outcomes
        .into_iter()
        .max_by(|a, b| a.probability.total_cmp(&b.probability))
        .ok_or_else(|| Error::InvalidMeasurement("empty tally distribution".into()))?;
    let report = ballot_test(event, &Ensemble::pure(top.post_state.clone()))?;
    Ok((top, report))
}

/// Every event on `n` voters: all assignments of vote bits and all perfect
/// matchings of every even-sized checker subset, in a fixed deterministic
/// order. With `tally` given, only events announcing that tally are kept.
pub fn enumerate_events(n: usize, tally: Option<usize>) -> Result<Vec<Event>> {
    if n == 0 || n > MAX_ENUM_VOTERS {
        return Err(Error::ResourceLimit {
            what: "event enumeration voter count",
            max: MAX_ENUM_VOTERS,
            got: n,
        });
    }
    let mut events = Vec::new();
    for checker_mask in 0u32..(1 << n) {
        if checker_mask.count_ones() % 2 != 0 {
            continue;
        }
        let checkers: Vec<usize> = (1..=n)
            .filter(|&v| checker_mask & (1 << (v - 1)) != 0)
            .collect();
        let voters: Vec<usize> = (1..=n)
            .filter(|&v| checker_mask & (1 << (v - 1)) == 0)
            .collect();
        let k = checkers.len() / 2;
        for matching in perfect_matchings(&checkers) {
            for assignment in 0u32..(1 << voters.len()) {
                let l = assignment.count_ones() as usize;
                if let Some(target) = tally {
                    if k + l != target {
                        continue;
                    }
                }
                let mut actions = vec![VoterAction::Vote(false); n];
                for (pos, &voter) in voters.iter().enumerate() {
                    actions[voter - 1] = VoterAction::Vote(assignment & (1 << pos) != 0);
                }
                for &(a, b) in &matching {
                    actions[a - 1] = VoterAction::Check { partner: b };
                    actions[b - 1] = VoterAction::Check { partner: a };
                }
                events.push(Event::new(actions)?);
            }
        }
    }
    Ok(events)
}

/// All perfect matchings of `members`, each as pairs (i, j) with i < j
/// sorted ascending; the empty set has exactly one (empty) matching.
fn perfect_matchings(members: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if members.is_empty() {
        return vec![Vec::new()];
    }
    let first = members[0];
    let mut matchings = Vec::new();
    for &partner in &members[1..] {
        let rest: Vec<usize> = members[1..]
            .iter()
            .copied()
            .filter(|&m| m != partner)
            .collect();
        for mut sub in perfect_matchings(&rest) {
            sub.insert(0, (first, partner));
            matchings.push(sub);
        }
    }
    matchings
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::basis_state;

    const EPS: f64 = 1e-12;

    fn vote(b: bool) -> VoterAction {
        VoterAction::Vote(b)
    }

    fn check(partner: usize) -> VoterAction {
        VoterAction::Check { partner }
    }

    #[test]
    fn event_validation_catches_bad_pairs() {
        assert!(matches!(
            Event::new(vec![check(1)]),
            Err(Error::SelfPair(1))
        ));
        assert!(matches!(
            Event::new(vec![check(2), vote(false)]),
            Err(Error::AsymmetricPair(1, 2))
        ));
        assert!(matches!(
            Event::new(vec![check(3), vote(true), vote(false)]),
            Err(Error::AsymmetricPair(1, 3))
        ));
        assert!(matches!(
            Event::new(vec![check(5), vote(true)]),
            Err(Error::QubitIndex { .. })
        ));
    }

    #[test]
    fn derived_quantities() {
        let e = Event::new(vec![check(2), check(1), vote(true), vote(false)]).unwrap();
        assert_eq!(e.pair_count(), 1);
        assert_eq!(e.yes_votes(), 1);
        assert_eq!(e.expected_tally(), 2);
        assert_eq!(e.check_pairs(), [(1, 2)]);
        assert_eq!(e.to_string(), "c2 c1 1 0");
    }

    #[test]
    fn action_tokens_round_trip() {
        let e = Event::from_action_strs(["check:2", "check:1", "vote:1", "vote:0"]).unwrap();
        assert_eq!(e.action_strings(), ["check:2", "check:1", "vote:1", "vote:0"]);
        assert!(Event::from_action_strs(["vote:2"]).is_err());
        assert!(Event::from_action_strs(["observe:1"]).is_err());
    }

    #[test]
    fn encode_two_plain_votes() {
        // b = (1, 0): qubit 1 carries the 1.
        let e = Event::new(vec![vote(true), vote(false)]).unwrap();
        let state = encode_event(&e);
        let expected = basis_state(2, "01").unwrap();
        assert!((state.fidelity(&expected).unwrap() - 1.0).abs() < EPS);
    }

    #[test]
    fn encode_single_checking_pair() {
        let e = Event::new(vec![check(2), check(1)]).unwrap();
        let state = encode_event(&e);
        let psi = crate::qstate::bell_state(crate::qstate::BellKind::PsiPlus, 1, 2, 2).unwrap();
        assert!((state.fidelity(&psi).unwrap() - 1.0).abs() < EPS);
    }

    #[test]
    fn encode_mixed_event_spans_expected_strings() {
        // Pair (1,2) checks, voter 3 votes 1, voter 4 votes 0:
        // amplitude 1/sqrt(2) on 0101 and 0110, inside weight 2.
        let e = Event::new(vec![check(2), check(1), vote(true), vote(false)]).unwrap();
        let state = encode_event(&e);
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        for (idx, amp) in state.amplitudes().iter().enumerate() {
            let expected = match idx {
                0b0101 | 0b0110 => inv,
                _ => 0.0,
            };
            assert!((amp.re - expected).abs() < EPS && amp.im.abs() < EPS, "idx {idx}");
        }
    }

    #[test]
    fn encode_has_uniform_support_of_size_two_pow_k() {
        for n in 1..=6usize {
            for event in enumerate_events(n, None).unwrap() {
                let state = encode_event(&event);
                let k = event.pair_count();
                let s = event.expected_tally();
                let expected_amp = 0.5f64.powi(k as i32).sqrt();
                let support: Vec<usize> = state
                    .amplitudes()
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.norm() > EPS)
                    .map(|(idx, _)| idx)
                    .collect();
                assert_eq!(support.len(), 1 << k);
                for idx in support {
                    assert_eq!(idx.count_ones() as usize, s);
                    assert!((state.amplitude(idx).re - expected_amp).abs() < EPS);
                }
            }
        }
    }

    #[test]
    fn tally_of_basis_votes_is_deterministic() {
        let e = Event::new(vec![vote(true), vote(true), vote(true)]).unwrap();
        let outcomes = tally_pvm(&encode_event(&e));
        assert_eq!(outcomes.len(), 1);
        assert_eq!(outcomes[0].s, 3);
        assert!((outcomes[0].probability - 1.0).abs() < EPS);
    }

    #[test]
    fn tally_leaves_honest_event_state_unchanged() {
        let e = Event::new(vec![check(2), check(1), vote(true), vote(false)]).unwrap();
        let state = encode_event(&e);
        let outcomes = tally_pvm(&state);
        assert_eq!(outcomes.len(), 1);
        assert_eq!(outcomes[0].s, 2);
        assert!((outcomes[0].probability - 1.0).abs() < EPS);
        assert!((outcomes[0].post_state.fidelity(&state).unwrap() - 1.0).abs() < EPS);
    }

    #[test]
    fn tally_splits_superposition_across_weights() {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let state = StateVector::new(
            2,
            vec![
                Complex64::ZERO,
                Complex64::new(inv, 0.0),
                Complex64::ZERO,
                Complex64::new(inv, 0.0),
            ],
        )
        .unwrap();
        let outcomes = tally_pvm(&state);
        assert_eq!(outcomes.len(), 2);
        assert_eq!((outcomes[0].s, outcomes[1].s), (1, 2));
        for o in &outcomes {
            assert!((o.probability - 0.5).abs() < EPS);
        }
    }

    #[test]
    fn pass_projector_is_rank_one_idempotent() {
        let single = Event::new(vec![vote(false)]).unwrap();
        let p = pass_projector(&single);
        assert!(p.is_projector(1e-10));
        assert!((p.entries()[(0, 0)].re - 1.0).abs() < EPS);

        let pair = Event::new(vec![check(2), check(1)]).unwrap();
        let p = pass_projector(&pair);
        assert!(p.is_projector(1e-10));
        // Trace 1 = rank 1 for a projector.
        let trace: Complex64 = (0..4).map(|i| p.entries()[(i, i)]).sum();
        assert!((trace.re - 1.0).abs() < EPS);

        let mixed = Event::new(vec![vote(true), check(3), check(2)]).unwrap();
        let p = pass_projector(&mixed);
        assert!(p.is_projector(1e-10));
        let trace: Complex64 = (0..8).map(|i| p.entries()[(i, i)]).sum();
        assert!((trace.re - 1.0).abs() < EPS);
    }

    #[test]
    fn honest_round_passes_with_certainty() {
        let e = Event::new(vec![check(2), check(1)]).unwrap();
        let report = ballot_test(&e, &Ensemble::pure(encode_event(&e))).unwrap();
        assert!((report.pass_probability - 1.0).abs() < EPS);
        for p in &report.per_party {
            assert!(p.failure_probability < EPS);
        }
    }

    #[test]
    fn split_pair_fails_half_the_time() {
        let e = Event::new(vec![check(2), check(1)]).unwrap();
        let mixed = Ensemble::new(vec![
            crate::qstate::EnsembleBranch {
                probability: 0.5,
                state: basis_state(2, "01").unwrap(),
            },
            crate::qstate::EnsembleBranch {
                probability: 0.5,
                state: basis_state(2, "10").unwrap(),
            },
        ])
        .unwrap();
        let report = ballot_test(&e, &mixed).unwrap();
        assert!((report.pass_probability - 0.5).abs() < EPS);
        assert_eq!(report.per_party.len(), 1);
        assert!((report.per_party[0].failure_probability - 0.5).abs() < EPS);
    }

    #[test]
    fn orthogonal_ballot_always_fails() {
        let e = Event::new(vec![vote(false)]).unwrap();
        let flipped = Ensemble::pure(basis_state(1, "1").unwrap());
        let report = ballot_test(&e, &flipped).unwrap();
        assert!(report.pass_probability < EPS);
        assert!((report.per_party[0].failure_probability - 1.0).abs() < EPS);
    }

    #[test]
    fn run_honest_round_composes() {
        let e = Event::new(vec![vote(true), vote(true), vote(false)]).unwrap();
        let (tally, report) = run_honest_round(&e).unwrap();
        assert_eq!(tally.s, 2);
        assert!((tally.probability - 1.0).abs() < EPS);
        assert!((report.pass_probability - 1.0).abs() < EPS);

        let e = Event::new(vec![check(2), check(1), vote(true), vote(false)]).unwrap();
        let (tally, report) = run_honest_round(&e).unwrap();
        assert_eq!(tally.s, 2);
        assert!((report.pass_probability - 1.0).abs() < EPS);

        // Two checking pairs, nobody votes yes: s = k = 2, four-term state.
        let e = Event::new(vec![
            check(2),
            check(1),
            check(4),
            check(3),
            vote(false),
            vote(false),
        ])
        .unwrap();
        let (tally, report) = run_honest_round(&e).unwrap();
        assert_eq!(tally.s, 2);
        assert!((tally.probability - 1.0).abs() < EPS);
        assert!((report.pass_probability - 1.0).abs() < EPS);
    }

    // Oracle: number of events is sum over 2k of C(n,2k) (2k-1)!! 2^(n-2k).
    fn event_count_oracle(n: usize) -> usize {
        fn double_factorial_odd(m: usize) -> usize {
            // (2m-1)!! with the empty product equal to 1
            (0..m).map(|i| 2 * i + 1).product::<usize>().max(1)
        }
        (0..=n / 2)
            .map(|k| {
                crate::weights::binomial(n, 2 * k)
                    * double_factorial_odd(k)
                    * (1usize << (n - 2 * k))
            })
            .sum()
    }

    #[test]
    fn enumeration_counts_match_oracle() {
        let expected: Vec<usize> = (1..=6).map(event_count_oracle).collect();
        assert_eq!(expected, [2, 5, 14, 43, 142, 499]);
        for n in 1..=6usize {
            let events = enumerate_events(n, None).unwrap();
            assert_eq!(events.len(), event_count_oracle(n), "n={n}");
            // No duplicates under the canonical representation.
            let mut seen: std::collections::BTreeSet<String> =
                std::collections::BTreeSet::new();
            for e in &events {
                assert!(seen.insert(e.to_string()));
            }
        }
    }

    #[test]
    fn single_voter_events() {
        let events = enumerate_events(1, None).unwrap();
        assert_eq!(events.len(), 2);
        assert_eq!(events[0].actions(), [vote(false)]);
        assert_eq!(events[1].actions(), [vote(true)]);
    }

    #[test]
    fn tally_filter_keeps_matching_events() {
        let events = enumerate_events(2, Some(1)).unwrap();
        let descriptions: Vec<String> = events.iter().map(|e| e.to_string()).collect();
        assert_eq!(descriptions, ["1 0", "0 1", "c2 c1"]);
    }

    #[test]
    fn enumeration_rejects_oversized_n() {
        assert!(matches!(
            enumerate_events(9, None),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn pvm_algebra_is_exact_for_small_registers() {
        for n in 1..=4usize {
            let algebra = pvm_algebra_check(n).unwrap();
            assert!(algebra.passed(1e-10), "n={n}");
        }
    }
}
