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

//! Fixed Hamming-weight bit strings and the swap pairing between them.
//!
//! Bit positions are numbered from right to left starting at 1, so position 1
//! is the least significant bit of the string's binary value. Every public
//! interface in this crate follows that convention; it is defined here and
//! nowhere else.

use crate::error::{Error, Result};

/// Longest bit string a [`WeightClass`] will enumerate.
pub const MAX_WEIGHT_BITS: usize = 24;

/// Largest string length accepted by [`lemma_check`].
pub const MAX_LEMMA_BITS: usize = 10;

/// Parses a string of `'0'`/`'1'` characters into `(length, value)`.
pub fn parse_bits(s: &str) -> Result<(usize, u64)> {
    let mut value = 0u64;
    let mut len = 0usize;
    for c in s.chars() {
        let bit = match c {
            '0' => 0,
            '1' => 1,
            _ => return Err(Error::BitChar(s.to_string())),
        };
        value = (value << 1) | bit;
        len += 1;
        if len > 64 {
            return Err(Error::ResourceLimit {
                what: "bit string length",
                max: 64,
                got: len,
            });
        }
    }
    Ok((len, value))
}

/// Renders `value` as a bit string of length `len`, most significant bit first.
pub fn format_bits(len: usize, value: u64) -> String {
    (0..len)
        .rev()
        .map(|p| if value >> p & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Mask selecting bit position `pos` (1-based, right to left).
pub fn position_mask(pos: usize) -> u64 {
    1 << (pos - 1)
}

/// Bit of `value` at position `pos` (1-based, right to left).
pub fn bit_at(value: u64, pos: usize) -> bool {
    value & position_mask(pos) != 0
}

/// Binomial coefficient C(n, s); `n` is expected to stay desk-scale.
pub fn binomial(n: usize, s: usize) -> usize {
    if s > n {
        return 0;
    }
    let s = s.min(n - s);
    let mut acc: u64 = 1;
    for i in 0..s {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc as usize
}

/// All `n`-bit strings of Hamming weight `s`, sorted by increasing binary
/// value. The 1-based rank of a string in this ordering is its index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightClass {
    n: usize,
    s: usize,
    values: Vec<u32>,
}

impl WeightClass {
    /// Enumerates the class for string length `n` and weight `s`.
    pub fn enumerate(n: usize, s: usize) -> Result<Self> {
        if n > MAX_WEIGHT_BITS {
            return Err(Error::ResourceLimit {
                what: "weight-class string length",
                max: MAX_WEIGHT_BITS,
                got: n,
            });
        }
        if s > n {
            return Err(Error::WeightRange { s, n });
        }
        let count = binomial(n, s);
        let mut values = Vec::with_capacity(count);
        if s == 0 {
            values.push(0);
        } else {
            // Gosper's hack walks same-weight values in increasing order.
            let mut v: u32 = (1 << s) - 1;
            let limit: u32 = 1 << n;
            while v < limit {
                values.push(v);
                let low = v & v.wrapping_neg();
                let ripple = v + low;
                v = ripple | ((v ^ ripple) >> (2 + low.trailing_zeros()));
            }
        }
        debug_assert_eq!(values.len(), count);
        Ok(Self { n, s, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Number of strings in the class, C(n, s).
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Binary values of the strings, ascending.
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Binary value of the string with 1-based rank `pi`.
    pub fn value(&self, pi: usize) -> Result<u32> {
        if pi == 0 || pi > self.len() {
            return Err(Error::RankRange {
                pi,
                d: self.len(),
            });
        }
        Ok(self.values[pi - 1])
    }

    /// The string with 1-based rank `pi`.
    pub fn string(&self, pi: usize) -> Result<String> {
        Ok(format_bits(self.n, self.value(pi)? as u64))
    }

    /// Iterates the strings in rank order.
    pub fn strings(&self) -> impl Iterator<Item = String> + '_ {
        self.values.iter().map(|&v| format_bits(self.n, v as u64))
    }

    /// 1-based rank of `string` within the class.
    pub fn index_of(&self, string: &str) -> Result<usize> {
        let (len, value) = parse_bits(string)?;
        if len != self.n {
            return Err(Error::BitLength {
                string: string.to_string(),
                expected: self.n,
                got: len,
            });
        }
        let weight = value.count_ones() as usize;
        if weight != self.s {
            return Err(Error::WeightMismatch {
                string: string.to_string(),
                expected: self.s,
                got: weight,
            });
        }
        self.index_of_value(value as u32)
    }

    /// 1-based rank of a raw binary value within the class.
    pub fn index_of_value(&self, value: u32) -> Result<usize> {
        self.values
            .binary_search(&value)
            .map(|i| i + 1)
            .map_err(|_| Error::WeightMismatch {
                string: format_bits(self.n, value as u64),
                expected: self.s,
                got: value.count_ones() as usize,
            })
    }
}

/// A set of disjoint position transpositions, 1-based positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapPairing {
    pairs: Vec<(usize, usize)>,
}

impl SwapPairing {
    /// Builds a pairing, rejecting any position used twice.
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for &(a, b) in &pairs {
            for p in [a, b] {
                if !seen.insert(p) {
                    return Err(Error::DuplicatePosition(p));
                }
            }
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

fn parse_equal_weight_pair(m: &str, m_prime: &str) -> Result<(usize, u64, u64)> {
    let (len_a, a) = parse_bits(m)?;
    let (len_b, b) = parse_bits(m_prime)?;
    if len_a != len_b {
        return Err(Error::BitLength {
            string: m_prime.to_string(),
            expected: len_a,
            got: len_b,
        });
    }
    if a.count_ones() != b.count_ones() {
        return Err(Error::WeightMismatch {
            string: m_prime.to_string(),
            expected: a.count_ones() as usize,
            got: b.count_ones() as usize,
        });
    }
    Ok((len_a, a, b))
}

/// Positions where the two equal-weight strings differ, split by the bit the
/// first string holds there: `w0` lists positions where `m` has 0 (and
/// `m_prime` has 1), `w1` the converse. Both come back ascending and have
/// equal length.
pub fn diff_sets(m: &str, m_prime: &str) -> Result<(Vec<usize>, Vec<usize>)> {
    let (len, a, b) = parse_equal_weight_pair(m, m_prime)?;
    let mut w0 = Vec::new();
    let mut w1 = Vec::new();
    for pos in 1..=len {
        let bit_a = bit_at(a, pos);
        if bit_a != bit_at(b, pos) {
            if bit_a {
                w1.push(pos);
            } else {
                w0.push(pos);
            }
        }
    }
    debug_assert_eq!(w0.len(), w1.len());
    Ok((w0, w1))
}

/// The transposition set turning `m` into `m_prime`: the k-th smallest
/// position of `w0` is paired with the k-th smallest position of `w1`.
pub fn swap_pairing(m: &str, m_prime: &str) -> Result<SwapPairing> {
    let (w0, w1) = diff_sets(m, m_prime)?;
    SwapPairing::new(w0.into_iter().zip(w1).collect())
}

/// Applies each transposition of `pairing` to `m`.
pub fn apply_swaps(m: &str, pairing: &SwapPairing) -> Result<String> {
    let (len, mut value) = parse_bits(m)?;
    for &(a, b) in pairing.pairs() {
        for pos in [a, b] {
            if pos == 0 || pos > len {
                return Err(Error::QubitIndex { index: pos, n: len });
            }
        }
        if bit_at(value, a) != bit_at(value, b) {
            value ^= position_mask(a) | position_mask(b);
        }
    }
    Ok(format_bits(len, value))
}

/// Outcome of [`lemma_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LemmaCheck {
    pub triples: u64,
    pub failures: u64,
}

impl LemmaCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Exhaustively verifies, for every length up to `max_n`, every weight and
/// every ordered pair of ranks, that the swap pairing maps the first string
/// of the pair onto the second.
pub fn lemma_check(max_n: usize) -> Result<LemmaCheck> {
    if max_n == 0 || max_n > MAX_LEMMA_BITS {
        return Err(Error::ResourceLimit {
            what: "lemma string length",
            max: MAX_LEMMA_BITS,
            got: max_n,
        });
    }
    let mut triples = 0u64;
    let mut failures = 0u64;
    for n in 1..=max_n {
        for s in 0..=n {
            let class = WeightClass::enumerate(n, s)?;
            let strings: Vec<String> = class.strings().collect();
            for from in &strings {
                for to in &strings {
                    triples += 1;
                    let pairing = swap_pairing(from, to)?;
                    if apply_swaps(from, &pairing)? != *to {
                        failures += 1;
                    }
                }
            }
        }
    }
    Ok(LemmaCheck { triples, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_one_class_matches_worked_example() {
        let class = WeightClass::enumerate(5, 1).unwrap();
        let strings: Vec<String> = class.strings().collect();
        assert_eq!(strings, ["00001", "00010", "00100", "01000", "10000"]);
        assert_eq!(class.string(2).unwrap(), "00010");
        assert_eq!(class.index_of("00010").unwrap(), 2);
    }

    #[test]
    fn zero_weight_class_is_single_string() {
        let class = WeightClass::enumerate(3, 0).unwrap();
        assert_eq!(class.len(), 1);
        assert_eq!(class.string(1).unwrap(), "000");
    }

    #[test]
    fn weight_two_class_of_four_bits() {
        // Oracle: filter 0..16 by popcount and sort.
        let expected: Vec<String> = (0u32..16)
            .filter(|v| v.count_ones() == 2)
            .map(|v| format_bits(4, v as u64))
            .collect();
        let class = WeightClass::enumerate(4, 2).unwrap();
        let strings: Vec<String> = class.strings().collect();
        assert_eq!(strings, expected);
        assert_eq!(
            strings,
            ["0011", "0101", "0110", "1001", "1010", "1100"]
        );
        assert_eq!(class.index_of("0011").unwrap(), 1);
        assert_eq!(class.index_of("1100").unwrap(), 6);
    }

    #[test]
    fn enumeration_matches_naive_filter_up_to_ten_bits() {
        for n in 1..=10usize {
            for s in 0..=n {
                let class = WeightClass::enumerate(n, s).unwrap();
                let naive: Vec<u32> = (0..1u32 << n).filter(|v| v.count_ones() as usize == s).collect();
                assert_eq!(class.values(), naive.as_slice(), "n={n} s={s}");
                assert_eq!(class.len(), binomial(n, s));
            }
        }
    }

    #[test]
    fn index_of_rejects_wrong_weight() {
        let class = WeightClass::enumerate(4, 2).unwrap();
        assert!(matches!(
            class.index_of("0001"),
            Err(Error::WeightMismatch { .. })
        ));
        assert!(matches!(
            class.index_of("00110"),
            Err(Error::BitLength { .. })
        ));
    }

    #[test]
    fn diff_sets_positions_are_right_to_left() {
        let (w0, w1) = diff_sets("0011", "0101").unwrap();
        assert_eq!(w0, [3]);
        assert_eq!(w1, [2]);

        let (w0, w1) = diff_sets("0011", "0011").unwrap();
        assert!(w0.is_empty() && w1.is_empty());

        let (w0, w1) = diff_sets("0011", "1100").unwrap();
        assert_eq!(w0, [3, 4]);
        assert_eq!(w1, [1, 2]);
    }

    #[test]
    fn swap_pairing_follows_increasing_order() {
        assert_eq!(swap_pairing("0011", "0101").unwrap().pairs(), [(3, 2)]);
        assert!(swap_pairing("0011", "0011").unwrap().is_empty());
        assert_eq!(
            swap_pairing("0011", "1100").unwrap().pairs(),
            [(3, 1), (4, 2)]
        );
    }

    #[test]
    fn apply_swaps_reaches_the_target_string() {
        let pairing = SwapPairing::new(vec![(3, 2)]).unwrap();
        assert_eq!(apply_swaps("0011", &pairing).unwrap(), "0101");
        let empty = SwapPairing::new(vec![]).unwrap();
        assert_eq!(apply_swaps("0011", &empty).unwrap(), "0011");
        let double = SwapPairing::new(vec![(3, 1), (4, 2)]).unwrap();
        assert_eq!(apply_swaps("0011", &double).unwrap(), "1100");
    }

    #[test]
    fn apply_swaps_rejects_out_of_range_positions() {
        let pairing = SwapPairing::new(vec![(5, 1)]).unwrap();
        assert!(matches!(
            apply_swaps("0011", &pairing),
            Err(Error::QubitIndex { .. })
        ));
    }

    #[test]
    fn pairing_rejects_reused_positions() {
        assert!(matches!(
            SwapPairing::new(vec![(1, 2), (2, 3)]),
            Err(Error::DuplicatePosition(2))
        ));
    }

    #[test]
    fn lemma_holds_exhaustively_to_eight_bits() {
        let report = lemma_check(8).unwrap();
        assert!(report.passed());
        // sum over n of C(2n, n)
        assert_eq!(report.triples, 17_576);
    }

    #[test]
    fn weight_is_conserved_by_swaps() {
        let class = WeightClass::enumerate(6, 3).unwrap();
        let strings: Vec<String> = class.strings().collect();
        for a in &strings {
            for b in &strings {
                let swapped = apply_swaps(a, &swap_pairing(a, b).unwrap()).unwrap();
                let (_, v) = parse_bits(&swapped).unwrap();
                assert_eq!(v.count_ones(), 3);
            }
        }
    }
}
