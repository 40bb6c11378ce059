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

//! Exact dense pure states, operators and channels on small qubit registers.
//!
//! Everything here is a plain value: states are amplitude vectors over the
//! computational basis, operators are dense matrices, mixed states are kept
//! as lists of weighted pure branches instead of density matrices. All
//! operations are deterministic; there is no hidden randomness.
//!
//! Qubit `i` corresponds to bit position `i` of the basis-index string,
//! counted right to left from 1 (see [`crate::weights`]), so the basis index
//! of a product state is simply the binary value of its bit string.

use ndarray::{Array2, ArrayView1};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::weights::{self, position_mask};

/// Hard cap on register width; 2^12 amplitudes is still trivially dense.
pub const MAX_QUBITS: usize = 12;

/// Tolerance on state norms and probability sums.
pub const NORM_TOL: f64 = 1e-10;

/// Tolerance on channel completeness and measurement validity.
pub const CHANNEL_TOL: f64 = 1e-9;

/// Branches below this probability are dropped.
pub const PRUNE_TOL: f64 = 1e-12;

fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::ResourceLimit {
            what: "qubit count",
            max: MAX_QUBITS,
            got: n,
        });
    }
    Ok(())
}

fn norm_sqr(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

/// A normalized pure state of `n` qubits as 2^n complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Builds a state from raw amplitudes, rejecting unnormalized input.
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        let dim = 1usize << n_qubits;
        if amplitudes.len() != dim {
            return Err(Error::AmplitudeLength {
                expected: dim,
                got: amplitudes.len(),
            });
        }
        let norm = norm_sqr(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Internal constructor for amplitudes known to be normalized.
    pub(crate) fn from_normalized(n_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert!((norm_sqr(&amplitudes) - 1.0).abs() <= 1e-9);
        Self {
            n_qubits,
            amplitudes,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    /// Inner product ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Squared overlap |⟨self|other⟩|².
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }
}

/// Computational product state with qubit `i` in `|bits_i⟩`; the bit string
/// reads most significant position first, so its binary value is the basis
/// index carrying amplitude 1.
pub fn basis_state(n: usize, bits: &str) -> Result<StateVector> {
    check_qubit_count(n)?;
    let (len, value) = weights::parse_bits(bits)?;
    if len != n {
        return Err(Error::BitLength {
            string: bits.to_string(),
            expected: n,
            got: len,
        });
    }
    let mut amplitudes = vec![Complex64::ZERO; 1 << n];
    amplitudes[value as usize] = Complex64::ONE;
    Ok(StateVector::from_normalized(n, amplitudes))
}

/// The four maximally entangled two-qubit states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            BellKind::PhiPlus => "Phi+",
            BellKind::PhiMinus => "Phi-",
            BellKind::PsiPlus => "Psi+",
            BellKind::PsiMinus => "Psi-",
        }
    }
}

/// Bell state of qubits `i` and `j` inside an `n`-qubit register, all other
/// qubits padded with |0⟩.
pub fn bell_state(kind: BellKind, i: usize, j: usize, n: usize) -> Result<StateVector> {
    check_qubit_count(n)?;
    for q in [i, j] {
        if q == 0 || q > n {
            return Err(Error::QubitIndex { index: q, n });
        }
    }
    if i == j {
        return Err(Error::EqualQubits(i));
    }
    let hi = position_mask(i) as usize;
    let hj = position_mask(j) as usize;
    let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut amplitudes = vec![Complex64::ZERO; 1 << n];
    match kind {
        BellKind::PhiPlus => {
            amplitudes[0] = amp;
            amplitudes[hi | hj] = amp;
        }
        BellKind::PhiMinus => {
            amplitudes[0] = amp;
            amplitudes[hi | hj] = -amp;
        }
        BellKind::PsiPlus => {
            amplitudes[hj] = amp;
            amplitudes[hi] = amp;
        }
        BellKind::PsiMinus => {
            amplitudes[hj] = amp;
            amplitudes[hi] = -amp;
        }
    }
    Ok(StateVector::from_normalized(n, amplitudes))
}

/// Tensor product; `b`'s qubits take the lower bit positions of the result.
pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let n = a.n_qubits() + b.n_qubits();
    check_qubit_count(n)?;
    let mut amplitudes = vec![Complex64::ZERO; 1 << n];
    for (ia, &va) in a.amplitudes().iter().enumerate() {
        if va == Complex64::ZERO {
            continue;
        }
        for (ib, &vb) in b.amplitudes().iter().enumerate() {
            amplitudes[(ia << b.n_qubits()) | ib] = va * vb;
        }
    }
    Ok(StateVector::from_normalized(n, amplitudes))
}

/// A dense square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    entries: Array2<Complex64>,
}

impl Operator {
    pub fn new(entries: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        Ok(Self { entries })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: Array2::eye(dim),
        }
    }

    /// Rank-1 projector |ψ⟩⟨ψ|.
    pub fn outer(state: &StateVector) -> Self {
        let dim = state.dim();
        let mut entries = Array2::zeros((dim, dim));
        for (r, &vr) in state.amplitudes().iter().enumerate() {
            if vr == Complex64::ZERO {
                continue;
            }
            for (c, &vc) in state.amplitudes().iter().enumerate() {
                entries[(r, c)] = vr * vc.conj();
            }
        }
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.t().mapv(|z| z.conj()),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(Self {
            entries: self.entries.dot(&other.entries),
        })
    }

    /// Largest entrywise absolute difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Checks P² = P and P† = P.
    pub fn is_projector(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        match self.matmul(self) {
            Ok(squared) => squared.max_abs_diff(self) <= tol,
            Err(_) => false,
        }
    }

    /// ⟨ψ|A|ψ⟩.
    pub fn expectation(&self, state: &StateVector) -> Result<Complex64> {
        let applied = self.apply_raw(state.amplitudes())?;
        Ok(state
            .amplitudes()
            .iter()
            .zip(&applied)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub(crate) fn apply_raw(&self, amps: &[Complex64]) -> Result<Vec<Complex64>> {
        if amps.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: amps.len(),
            });
        }
        Ok(self.entries.dot(&ArrayView1::from(amps)).to_vec())
    }
}

/// Projectors |0⟩⟨0| and |1⟩⟨1| on qubit `i`, extended by identity.
pub fn computational_projectors(i: usize, n: usize) -> Result<Vec<Operator>> {
    check_qubit_count(n)?;
    if i == 0 || i > n {
        return Err(Error::QubitIndex { index: i, n });
    }
    let dim = 1usize << n;
    let mask = position_mask(i) as usize;
    let mut p0 = Array2::zeros((dim, dim));
    let mut p1 = Array2::zeros((dim, dim));
    for idx in 0..dim {
        if idx & mask == 0 {
            p0[(idx, idx)] = Complex64::ONE;
        } else {
            p1[(idx, idx)] = Complex64::ONE;
        }
    }
    Ok(vec![Operator { entries: p0 }, Operator { entries: p1 }])
}

/// The four Bell projectors on qubits `i`, `j`, extended by identity, in
/// [`BellKind::ALL`] order. They resolve the identity of the register.
pub fn bell_projectors(i: usize, j: usize, n: usize) -> Result<Vec<Operator>> {
    check_qubit_count(n)?;
    for q in [i, j] {
        if q == 0 || q > n {
            return Err(Error::QubitIndex { index: q, n });
        }
    }
    if i == j {
        return Err(Error::EqualQubits(i));
    }
    let dim = 1usize << n;
    let hi = position_mask(i) as usize;
    let hj = position_mask(j) as usize;
    let half = Complex64::new(0.5, 0.0);
    let mut projectors = Vec::with_capacity(4);
    for kind in BellKind::ALL {
        // Basis pair spanned by the Bell state at each configuration of the
        // remaining qubits, with the relative sign of the second component.
        let (lo_mask, hi_mask, sign) = match kind {
            BellKind::PhiPlus => (0, hi | hj, 1.0),
            BellKind::PhiMinus => (0, hi | hj, -1.0),
            BellKind::PsiPlus => (hj, hi, 1.0),
            BellKind::PsiMinus => (hj, hi, -1.0),
        };
        let mut entries = Array2::zeros((dim, dim));
        for rest in 0..dim {
            if rest & (hi | hj) != 0 {
                continue;
            }
            let x = rest | lo_mask;
            let y = rest | hi_mask;
            entries[(x, x)] = half;
            entries[(y, y)] = half;
            entries[(x, y)] = half * sign;
            entries[(y, x)] = half * sign;
        }
        projectors.push(Operator { entries });
    }
    Ok(projectors)
}

/// One branch of a projective measurement.
#[derive(Debug, Clone)]
pub struct MeasurementBranch {
    /// Position of the projector in the input list.
    pub outcome: usize,
    pub probability: f64,
    pub post_state: StateVector,
}

/// Born-rule measurement of `state` with an orthogonal, complete projector
/// family. Branches below [`PRUNE_TOL`] are omitted; post-states are the
/// renormalized projections.
pub fn measure_projectors(
    state: &StateVector,
    projectors: &[Operator],
) -> Result<Vec<MeasurementBranch>> {
    if projectors.is_empty() {
        return Err(Error::InvalidMeasurement("empty projector set".into()));
    }
    for p in projectors {
        if p.dim() != state.dim() {
            return Err(Error::DimensionMismatch {
                left: p.dim(),
                right: state.dim(),
            });
        }
        if !p.is_projector(CHANNEL_TOL) {
            return Err(Error::InvalidMeasurement(
                "set contains a non-projector".into(),
            ));
        }
    }
    for (a, pa) in projectors.iter().enumerate() {
        for pb in projectors.iter().skip(a + 1) {
            if pa.matmul(pb)?.max_abs_entry() > CHANNEL_TOL {
                return Err(Error::InvalidMeasurement(
                    "projectors are not mutually orthogonal".into(),
                ));
            }
        }
    }

    let mut branches = Vec::new();
    let mut total = 0.0;
    for (outcome, p) in projectors.iter().enumerate() {
        let projected = p.apply_raw(state.amplitudes())?;
        let probability = norm_sqr(&projected);
        total += probability;
        if probability >= PRUNE_TOL {
            let scale = probability.sqrt().recip();
            let amplitudes = projected.into_iter().map(|z| z * scale).collect();
            branches.push(MeasurementBranch {
                outcome,
                probability,
                post_state: StateVector::from_normalized(state.n_qubits(), amplitudes),
            });
        }
    }
    if (total - 1.0).abs() > CHANNEL_TOL {
        return Err(Error::InvalidMeasurement(format!(
            "projectors are incomplete on this state (total probability {total})"
        )));
    }
    Ok(branches)
}

/// A completely positive trace-preserving map given by Kraus matrices.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    kraus_ops: Vec<Array2<Complex64>>,
}

impl KrausChannel {
    /// Validates squareness, matching dimensions and Σ K†K = 1.
    pub fn new(kraus_ops: Vec<Array2<Complex64>>) -> Result<Self> {
        let first = kraus_ops
            .first()
            .ok_or_else(|| Error::InvalidMeasurement("empty Kraus list".into()))?;
        let (rows, cols) = first.dim();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        for k in &kraus_ops {
            if k.dim() != (rows, cols) {
                return Err(Error::DimensionMismatch {
                    left: rows,
                    right: k.nrows(),
                });
            }
        }
        let mut acc = Array2::<Complex64>::zeros((rows, rows));
        for k in &kraus_ops {
            let kd = k.t().mapv(|z| z.conj());
            acc += &kd.dot(k);
        }
        let mut deviation = 0.0f64;
        for r in 0..rows {
            for c in 0..rows {
                let expected = if r == c { Complex64::ONE } else { Complex64::ZERO };
                deviation = deviation.max((acc[(r, c)] - expected).norm());
            }
        }
        if deviation > CHANNEL_TOL {
            return Err(Error::NotTracePreserving(deviation));
        }
        Ok(Self { kraus_ops })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            kraus_ops: vec![Array2::eye(dim)],
        }
    }

    pub fn dim(&self) -> usize {
        self.kraus_ops[0].nrows()
    }

    pub fn kraus_ops(&self) -> &[Array2<Complex64>] {
        &self.kraus_ops
    }
}

/// One weighted pure branch of a mixed state.
#[derive(Debug, Clone)]
pub struct EnsembleBranch {
    pub probability: f64,
    pub state: StateVector,
}

/// A mixed state as a probability-weighted list of pure states.
#[derive(Debug, Clone)]
pub struct Ensemble {
    branches: Vec<EnsembleBranch>,
}

impl Ensemble {
    pub fn pure(state: StateVector) -> Self {
        Self {
            branches: vec![EnsembleBranch {
                probability: 1.0,
                state,
            }],
        }
    }

    /// Validates probabilities and uniform register width.
    pub fn new(branches: Vec<EnsembleBranch>) -> Result<Self> {
        let first = branches
            .first()
            .ok_or_else(|| Error::UnbalancedEnsemble(0.0))?;
        let n = first.state.n_qubits();
        let mut total = 0.0;
        for b in &branches {
            if b.state.n_qubits() != n {
                return Err(Error::DimensionMismatch {
                    left: 1 << n,
                    right: b.state.dim(),
                });
            }
            if !(0.0..=1.0 + NORM_TOL).contains(&b.probability) {
                return Err(Error::BadProbability(b.probability));
            }
            total += b.probability;
        }
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::UnbalancedEnsemble(total));
        }
        Ok(Self { branches })
    }

    pub fn branches(&self) -> &[EnsembleBranch] {
        &self.branches
    }

    pub fn n_qubits(&self) -> usize {
        self.branches[0].state.n_qubits()
    }

    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }
}

/// Pushes every branch of `input` through `channel`: branch (p, ψ) splits
/// into (p·‖Kψ‖², Kψ/‖Kψ‖) per Kraus operator, dropping branches below
/// [`PRUNE_TOL`]. The pruned mass stays within [`NORM_TOL`] of zero for any
/// trace-preserving channel at desk scale.
pub fn apply_channel(input: &Ensemble, channel: &KrausChannel) -> Result<Ensemble> {
    let dim = 1usize << input.n_qubits();
    if channel.dim() != dim {
        return Err(Error::DimensionMismatch {
            left: channel.dim(),
            right: dim,
        });
    }
    let mut branches = Vec::new();
    for branch in input.branches() {
        for k in channel.kraus_ops() {
            let mapped = k.dot(&ArrayView1::from(branch.state.amplitudes()));
            let weight = mapped.iter().map(|z| z.norm_sqr()).sum::<f64>();
            let probability = branch.probability * weight;
            if probability < PRUNE_TOL {
                continue;
            }
            let scale = weight.sqrt().recip();
            let amplitudes = mapped.into_iter().map(|z| z * scale).collect();
            branches.push(EnsembleBranch {
                probability,
                state: StateVector::from_normalized(input.n_qubits(), amplitudes),
            });
        }
    }
    Ensemble::new(branches)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_close(a: Complex64, b: Complex64) {
        assert!((a - b).norm() < EPS, "{a} vs {b}");
    }

    #[test]
    fn basis_state_single_qubit() {
        let s = basis_state(1, "0").unwrap();
        assert_close(s.amplitude(0), Complex64::ONE);
        assert_close(s.amplitude(1), Complex64::ZERO);
    }

    #[test]
    fn basis_state_uses_right_to_left_positions() {
        // |0>_5 |0>_4 |0>_3 |1>_2 |0>_1 sits at binary index 2.
        let s = basis_state(5, "00010").unwrap();
        for (idx, &amp) in s.amplitudes().iter().enumerate() {
            let expected = if idx == 2 { Complex64::ONE } else { Complex64::ZERO };
            assert_close(amp, expected);
        }
    }

    #[test]
    fn basis_state_binary_index() {
        let s = basis_state(2, "11").unwrap();
        assert_close(s.amplitude(3), Complex64::ONE);
    }

    #[test]
    fn basis_state_rejects_wrong_length() {
        assert!(matches!(
            basis_state(3, "0101"),
            Err(Error::BitLength { .. })
        ));
    }

    #[test]
    fn bell_pair_amplitudes() {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let psi = bell_state(BellKind::PsiPlus, 1, 2, 2).unwrap();
        assert_close(psi.amplitude(0), Complex64::ZERO);
        assert_close(psi.amplitude(1), c(inv, 0.0));
        assert_close(psi.amplitude(2), c(inv, 0.0));
        assert_close(psi.amplitude(3), Complex64::ZERO);

        let phi = bell_state(BellKind::PhiMinus, 1, 2, 2).unwrap();
        assert_close(phi.amplitude(0), c(inv, 0.0));
        assert_close(phi.amplitude(3), c(-inv, 0.0));
    }

    #[test]
    fn bell_pair_embedded_in_larger_register() {
        // Expanding |Psi+> on qubits 1 and 3 of a 3-qubit register by hand
        // puts 1/sqrt(2) on 001 and 100.
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let psi = bell_state(BellKind::PsiPlus, 1, 3, 3).unwrap();
        for (idx, &amp) in psi.amplitudes().iter().enumerate() {
            let expected = if idx == 1 || idx == 4 { c(inv, 0.0) } else { Complex64::ZERO };
            assert_close(amp, expected);
        }
    }

    #[test]
    fn bell_state_rejects_equal_qubits() {
        assert!(matches!(
            bell_state(BellKind::PhiPlus, 2, 2, 3),
            Err(Error::EqualQubits(2))
        ));
    }

    #[test]
    fn tensor_places_second_factor_low() {
        let one = basis_state(1, "1").unwrap();
        let zero = basis_state(1, "0").unwrap();
        let combined = tensor(&one, &zero).unwrap();
        assert_close(combined.amplitude(0b10), Complex64::ONE);

        // |0> ⊗ Psi+ keeps the pair in the low two positions.
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let psi = bell_state(BellKind::PsiPlus, 1, 2, 2).unwrap();
        let padded = tensor(&zero, &psi).unwrap();
        assert_close(padded.amplitude(1), c(inv, 0.0));
        assert_close(padded.amplitude(2), c(inv, 0.0));
    }

    #[test]
    fn tensor_of_two_bell_pairs() {
        // Expanding the product by hand gives amplitude 1/2 on
        // 0101, 0110, 1001, 1010.
        let psi = bell_state(BellKind::PsiPlus, 1, 2, 2).unwrap();
        let product = tensor(&psi, &psi).unwrap();
        for (idx, &amp) in product.amplitudes().iter().enumerate() {
            let expected = match idx {
                0b0101 | 0b0110 | 0b1001 | 0b1010 => c(0.5, 0.0),
                _ => Complex64::ZERO,
            };
            assert_close(amp, expected);
        }
    }

    #[test]
    fn bell_projectors_resolve_identity() {
        for n in 2..=4usize {
            let projectors = bell_projectors(1, n, n).unwrap();
            let mut sum = Array2::<Complex64>::zeros((1 << n, 1 << n));
            for p in &projectors {
                assert!(p.is_projector(1e-10));
                sum += p.entries();
            }
            let identity = Operator::identity(1 << n);
            let dev = Operator::new(sum).unwrap().max_abs_diff(&identity);
            assert!(dev < 1e-10, "n={n} deviation {dev}");
        }
    }

    #[test]
    fn measuring_bell_eigenstate_is_deterministic() {
        let psi = bell_state(BellKind::PsiPlus, 1, 2, 2).unwrap();
        let branches = measure_projectors(&psi, &bell_projectors(1, 2, 2).unwrap()).unwrap();
        assert_eq!(branches.len(), 1);
        assert_eq!(branches[0].outcome, 2); // Psi+ in BellKind::ALL order
        assert!((branches[0].probability - 1.0).abs() < EPS);
    }

    #[test]
    fn product_state_splits_evenly_in_bell_basis() {
        // |01⟩ measured in the Bell basis lands on Psi+ or Psi- with
        // probability 1/2 each.
        let s = basis_state(2, "01").unwrap();
        let branches = measure_projectors(&s, &bell_projectors(1, 2, 2).unwrap()).unwrap();
        let outcomes: Vec<usize> = branches.iter().map(|b| b.outcome).collect();
        assert_eq!(outcomes, [2, 3]);
        for b in &branches {
            assert!((b.probability - 0.5).abs() < EPS);
        }
    }

    #[test]
    fn computational_measurement_of_phi_plus() {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let phi = StateVector::new(2, vec![c(inv, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(inv, 0.0)])
            .unwrap();
        let branches =
            measure_projectors(&phi, &computational_projectors(1, 2).unwrap()).unwrap();
        assert_eq!(branches.len(), 2);
        for b in &branches {
            assert!((b.probability - 0.5).abs() < EPS);
        }
    }

    #[test]
    fn incomplete_projector_set_is_rejected() {
        let s = basis_state(2, "01").unwrap();
        let only_zero = vec![computational_projectors(1, 2).unwrap().remove(0)];
        assert!(matches!(
            measure_projectors(&s, &only_zero),
            Err(Error::InvalidMeasurement(_))
        ));
    }

    #[test]
    fn non_orthogonal_projectors_are_rejected() {
        let s = basis_state(1, "0").unwrap();
        let p = Operator::outer(&s);
        assert!(matches!(
            measure_projectors(&s, &[p.clone(), p]),
            Err(Error::InvalidMeasurement(_))
        ));
    }

    #[test]
    fn identity_channel_is_a_single_branch() {
        let psi = bell_state(BellKind::PsiPlus, 1, 2, 2).unwrap();
        let out = apply_channel(&Ensemble::pure(psi.clone()), &KrausChannel::identity(4)).unwrap();
        assert_eq!(out.branches().len(), 1);
        assert!((out.branches()[0].probability - 1.0).abs() < EPS);
        assert!((out.branches()[0].state.fidelity(&psi).unwrap() - 1.0).abs() < EPS);
    }

    #[test]
    fn dephasing_projectors_split_bell_pair() {
        // Measuring qubit 1 of Psi+ collapses to |01⟩ or |10⟩ evenly.
        let projectors = computational_projectors(1, 2).unwrap();
        let channel = KrausChannel::new(
            projectors.iter().map(|p| p.entries().clone()).collect(),
        )
        .unwrap();
        let psi = bell_state(BellKind::PsiPlus, 1, 2, 2).unwrap();
        let out = apply_channel(&Ensemble::pure(psi), &channel).unwrap();
        assert_eq!(out.branches().len(), 2);
        let expect_01 = basis_state(2, "01").unwrap();
        let expect_10 = basis_state(2, "10").unwrap();
        for b in out.branches() {
            assert!((b.probability - 0.5).abs() < EPS);
            let f01 = b.state.fidelity(&expect_01).unwrap();
            let f10 = b.state.fidelity(&expect_10).unwrap();
            assert!((f01 - 1.0).abs() < EPS || (f10 - 1.0).abs() < EPS);
        }
    }

    #[test]
    fn channel_eigenstate_stays_single_branch() {
        let projectors = computational_projectors(1, 2).unwrap();
        let channel = KrausChannel::new(
            projectors.iter().map(|p| p.entries().clone()).collect(),
        )
        .unwrap();
        let s = basis_state(2, "00").unwrap();
        let out = apply_channel(&Ensemble::pure(s.clone()), &channel).unwrap();
        assert_eq!(out.branches().len(), 1);
        assert!((out.branches()[0].state.fidelity(&s).unwrap() - 1.0).abs() < EPS);
    }

    #[test]
    fn incomplete_kraus_list_is_rejected() {
        let mut half = Array2::<Complex64>::eye(2);
        half.mapv_inplace(|z| z * 0.5);
        assert!(matches!(
            KrausChannel::new(vec![half]),
            Err(Error::NotTracePreserving(_))
        ));
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        let bad = StateVector::new(1, vec![c(1.0, 0.0), c(0.5, 0.0)]);
        assert!(matches!(bad, Err(Error::NotNormalized(_))));
    }

    #[test]
    fn oversized_register_is_rejected() {
        assert!(matches!(
            basis_state(13, &"0".repeat(13)),
            Err(Error::ResourceLimit { .. })
        ));
    }
}
