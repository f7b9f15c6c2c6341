//! Binary words and the statistics the code constructions key on.
//!
//! A [`Word`] packs its symbols into a `u128` with an explicit length. Symbol
//! `x_1` sits in the most significant used bit, so for words of equal length
//! numeric order of the packed value is lexicographic order of the string
//! `x_1 x_2 ... x_n` with `0 < 1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported word length.
pub const MAX_LEN: usize = 128;

/// Default refusal threshold for enumerating `U_n`.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 100_000_000;

/// A binary word of length `1..=MAX_LEN`.
///
/// Ordering is by length first, then lexicographic.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    len: u32,
    bits: u128,
}

#[inline]
fn low_mask(width: usize) -> u128 {
    if width >= 128 {
        u128::MAX
    } else {
        (1u128 << width) - 1
    }
}

impl Word {
    /// Builds a word from its packed value; `bits` must fit in `len` bits.
    pub fn new(len: usize, bits: u128) -> Result<Self> {
        if len == 0 || len > MAX_LEN {
            return Err(Error::InvalidLength(len));
        }
        if bits & !low_mask(len) != 0 {
            return Err(Error::Parameter(format!(
                "packed value {bits:#x} does not fit in {len} bits"
            )));
        }
        Ok(Self::from_raw(len, bits))
    }

    #[inline]
    pub(crate) fn from_raw(len: usize, bits: u128) -> Self {
        debug_assert!(len <= MAX_LEN && bits & !low_mask(len) == 0);
        Word {
            len: len as u32,
            bits,
        }
    }

    pub fn from_bits(symbols: &[u8]) -> Result<Self> {
        if symbols.is_empty() || symbols.len() > MAX_LEN {
            return Err(Error::InvalidLength(symbols.len()));
        }
        let mut bits = 0u128;
        for &s in symbols {
            if s > 1 {
                return Err(Error::InvalidSymbol(char::from(b'0' + s.min(9))));
            }
            bits = (bits << 1) | s as u128;
        }
        Ok(Self::from_raw(symbols.len(), bits))
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(len, 0)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Packed value; `x_1` is the most significant of the `len` low bits.
    #[inline]
    pub fn packed(&self) -> u128 {
        self.bits
    }

    /// Symbol `x_i`, 1-indexed.
    ///
    /// Panics if `i` is not in `1..=len`.
    #[inline]
    pub fn bit(&self, i: usize) -> u8 {
        assert!(i >= 1 && i <= self.len(), "index {i} out of 1..={}", self.len);
        self.at(i - 1)
    }

    #[inline]
    fn at(&self, pos: usize) -> u8 {
        ((self.bits >> (self.len() - 1 - pos)) & 1) as u8
    }

    pub fn symbols(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len()).map(move |p| self.at(p))
    }

    /// Removes the symbol at 0-based position `pos`.
    pub(crate) fn delete_at(&self, pos: usize) -> Word {
        let n = self.len();
        debug_assert!(n >= 2 && pos < n);
        let tail_width = n - 1 - pos;
        let head = self.bits.checked_shr(tail_width as u32 + 1).unwrap_or(0);
        let tail = self.bits & low_mask(tail_width);
        Word::from_raw(n - 1, (head << tail_width) | tail)
    }

    /// Inserts `symbol` so that it becomes the symbol at 0-based position `pos`.
    pub(crate) fn insert_at(&self, pos: usize, symbol: u8) -> Word {
        let n = self.len();
        debug_assert!(n < MAX_LEN && pos <= n);
        let tail_width = n - pos;
        let head = if tail_width >= 128 { 0 } else { self.bits >> tail_width };
        let tail = self.bits & low_mask(tail_width);
        let bits = (((head << 1) | symbol as u128) << tail_width) | tail;
        Word::from_raw(n + 1, bits)
    }

    /// Flips the symbol at 0-based position `pos`.
    pub(crate) fn flip_at(&self, pos: usize) -> Word {
        Word::from_raw(self.len(), self.bits ^ (1u128 << (self.len() - 1 - pos)))
    }

    /// Contiguous subword starting at 0-based `start`, as a 0/1 string.
    /// Empty ranges give an empty string.
    pub fn substring(&self, start: usize, len: usize) -> String {
        (start..start + len)
            .map(|p| if self.at(p) == 1 { '1' } else { '0' })
            .collect()
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn hamming_distance(&self, other: &Word) -> Result<usize> {
        if self.len != other.len {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        Ok((self.bits ^ other.bits).count_ones() as usize)
    }

    pub fn is_balanced(&self) -> bool {
        self.len.is_multiple_of(2) && 2 * self.weight() == self.len()
    }

    /// Number of maximal constant blocks.
    pub fn run_count(&self) -> usize {
        let n = self.len();
        if n <= 1 {
            return n;
        }
        // Each boundary between x_i and x_{i+1} with x_i != x_{i+1} opens a run.
        let boundaries = (self.bits ^ (self.bits >> 1)) & low_mask(n - 1);
        1 + boundaries.count_ones() as usize
    }

    /// Lengths of the runs, left to right.
    pub fn run_lengths(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.run_count());
        let mut current = 0usize;
        let mut prev = None;
        for s in self.symbols() {
            if Some(s) == prev {
                current += 1;
            } else {
                if prev.is_some() {
                    out.push(current);
                }
                prev = Some(s);
                current = 1;
            }
        }
        if current > 0 {
            out.push(current);
        }
        out
    }

    pub fn max_run_length(&self) -> usize {
        self.longest_periodic_stretch(1).max(1)
    }

    /// `Inv(x)`: pairs `i < j` with `x_i = 1` and `x_j = 0`.
    pub fn inversion_number(&self) -> usize {
        let mut ones_seen = 0usize;
        let mut inv = 0usize;
        for s in self.symbols() {
            if s == 1 {
                ones_seen += 1;
            } else {
                inv += ones_seen;
            }
        }
        inv
    }

    /// `Σ i·x_i` with 1-based indices.
    pub fn weighted_sum(&self) -> u64 {
        self.symbols()
            .enumerate()
            .map(|(p, s)| (p as u64 + 1) * s as u64)
            .sum()
    }

    /// Weight of the symbols at even 1-based positions `x_2, x_4, ...`.
    pub fn even_position_weight(&self) -> usize {
        (2..=self.len()).step_by(2).filter(|&i| self.bit(i) == 1).count()
    }

    /// Longest contiguous subword whose symbols satisfy `u_i = u_{i+shift}`
    /// throughout, counting only subwords longer than `shift`. Zero when no
    /// such subword exists.
    fn longest_periodic_stretch(&self, shift: usize) -> usize {
        let n = self.len();
        if shift >= n {
            return 0;
        }
        // Bit k (from the left, k < n - shift) set iff x_k == x_{k+shift}.
        let agree = !(self.bits ^ (self.bits >> shift)) & low_mask(n - shift);
        let mut best = 0usize;
        let mut v = agree;
        // Longest run of consecutive ones in `agree`.
        let mut run = 0usize;
        while v != 0 {
            v &= v << 1;
            run += 1;
        }
        if run > 0 {
            best = run + shift;
        }
        best
    }

    /// Longest contiguous subword whose period is at most `max_period`.
    /// Subwords of length `<= max_period` are admissible, so the result is at
    /// least `max_period`.
    pub fn longest_low_period_subword(&self, max_period: usize) -> Result<usize> {
        if max_period == 0 {
            return Err(Error::Parameter("period bound must be positive".into()));
        }
        if max_period >= self.len() {
            return Err(Error::PeriodTooLarge {
                period: max_period,
                len: self.len(),
            });
        }
        Ok((1..=max_period)
            .map(|p| self.longest_periodic_stretch(p))
            .max()
            .unwrap_or(0)
            .max(max_period))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.substring(0, self.len()))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s.len() > MAX_LEN {
            return Err(Error::InvalidLength(s.len()));
        }
        let mut bits = 0u128;
        for ch in s.chars() {
            let b = match ch {
                '0' => 0,
                '1' => 1,
                other => return Err(Error::InvalidSymbol(other)),
            };
            bits = (bits << 1) | b;
        }
        Ok(Word::from_raw(s.len(), bits))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact binomial coefficient, `None` on `u128` overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// `|U_n| = C(n, n/2)`.
pub fn balanced_count(n: usize) -> Option<u128> {
    binomial(n as u64, n as u64 / 2)
}

/// All words of a fixed length and weight, in lexicographic order.
#[derive(Debug, Clone)]
pub struct FixedWeightWords {
    len: usize,
    next: Option<u128>,
}

impl FixedWeightWords {
    pub fn new(len: usize, weight: usize) -> Result<Self> {
        if len == 0 || len > MAX_LEN {
            return Err(Error::InvalidLength(len));
        }
        if weight > len {
            return Err(Error::Parameter(format!(
                "weight {weight} exceeds length {len}"
            )));
        }
        Ok(FixedWeightWords {
            len,
            next: Some(low_mask(weight)),
        })
    }
}

impl Iterator for FixedWeightWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let v = self.next?;
        let word = Word::from_raw(self.len, v);
        // Gosper's hack: next larger integer with the same popcount.
        self.next = if v == 0 {
            None
        } else {
            let c = v & v.wrapping_neg();
            match v.checked_add(c) {
                Some(r) if r <= low_mask(self.len) && r != 0 => {
                    let succ = (((r ^ v) >> 2) / c) | r;
                    (succ <= low_mask(self.len)).then_some(succ)
                }
                _ => None,
            }
        };
        Some(word)
    }
}

/// Lexicographic stream over `U_n`.
#[derive(Debug, Clone)]
pub struct BalancedSpace {
    n: usize,
    inner: FixedWeightWords,
}

impl BalancedSpace {
    pub fn n(&self) -> usize {
        self.n
    }
}

impl Iterator for BalancedSpace {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        self.inner.next()
    }
}

pub(crate) fn check_even(n: usize) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::OddLength(n));
    }
    if n > MAX_LEN {
        return Err(Error::InvalidLength(n));
    }
    Ok(())
}

pub(crate) fn check_budget(n: usize, budget: u128) -> Result<()> {
    let required = balanced_count(n).unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(())
}

/// Enumerates `U_n` lexicographically under the default budget.
pub fn enumerate_balanced(n: usize) -> Result<BalancedSpace> {
    enumerate_balanced_with_budget(n, DEFAULT_ENUMERATION_BUDGET)
}

pub fn enumerate_balanced_with_budget(n: usize, budget: u128) -> Result<BalancedSpace> {
    check_even(n)?;
    check_budget(n, budget)?;
    Ok(BalancedSpace {
        n,
        inner: FixedWeightWords::new(n, n / 2)?,
    })
}

/// Materialized `U_n`, sorted.
pub fn balanced_words(n: usize, budget: u128) -> Result<Vec<Word>> {
    Ok(enumerate_balanced_with_budget(n, budget)?.collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn weight_examples() {
        assert_eq!(w("1010").weight(), 2);
        assert_eq!(Word::zeros(9).unwrap().weight(), 0);
        assert_eq!(w("1010110").weight(), 4);
    }

    #[test]
    fn distance_examples() {
        assert_eq!(w("1010").hamming_distance(&w("1010")).unwrap(), 0);
        assert_eq!(w("11101000").hamming_distance(&w("11010100")).unwrap(), 4);
        assert_eq!(w("111000").hamming_distance(&w("101100")).unwrap(), 2);
        assert_eq!(
            w("10").hamming_distance(&w("100")),
            Err(Error::LengthMismatch(2, 3))
        );
    }

    #[test]
    fn balanced_examples() {
        assert!(w("1010").is_balanced());
        assert!(!w("1110").is_balanced());
        assert!(w("10").is_balanced());
        assert!(!w("101").is_balanced());
    }

    #[test]
    fn run_count_examples() {
        assert_eq!(w("1010").run_count(), 4);
        assert_eq!(w("111000").run_count(), 2);
        // 11|0|1|00
        assert_eq!(w("110100").run_count(), 4);
        assert_eq!(w("110100").run_lengths(), vec![2, 1, 1, 2]);
        assert_eq!(w("0").run_count(), 1);
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(w("1010110").inversion_number(), 7);
        assert_eq!(w("000111").inversion_number(), 0);
        assert_eq!(w("111000").inversion_number(), 9);
    }

    #[test]
    fn low_period_examples() {
        assert_eq!(w("110100").longest_low_period_subword(1).unwrap(), 2);
        assert_eq!(w("101010").longest_low_period_subword(2).unwrap(), 6);
        assert_eq!(w("110010").longest_low_period_subword(1).unwrap(), 2);
        // 2-periodic stretch 0101 inside, constant stretch 000 is shorter.
        assert_eq!(w("0001010").longest_low_period_subword(2).unwrap(), 5);
        assert_eq!(w("1000").longest_low_period_subword(1).unwrap(), 3);
        // no two equal neighbours: only the trivial length-1 subwords
        assert_eq!(w("1010").longest_low_period_subword(1).unwrap(), 1);
        assert!(matches!(
            w("1010").longest_low_period_subword(4),
            Err(Error::PeriodTooLarge { .. })
        ));
    }

    #[test]
    fn enumerate_small() {
        let u2: Vec<String> = enumerate_balanced(2).unwrap().map(|x| x.to_string()).collect();
        assert_eq!(u2, vec!["01", "10"]);
        assert_eq!(enumerate_balanced(4).unwrap().count(), 6);
        let u6: Vec<Word> = enumerate_balanced(6).unwrap().collect();
        assert_eq!(u6.len(), 20);
        assert_eq!(u6[0], w("000111"));
        assert_eq!(*u6.last().unwrap(), w("111000"));
        assert!(u6.windows(2).all(|p| p[0] < p[1]));
        assert_eq!(enumerate_balanced(7).unwrap_err(), Error::OddLength(7));
    }

    #[test]
    fn enumeration_respects_budget() {
        assert!(matches!(
            enumerate_balanced_with_budget(20, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn enumerate_long_words() {
        // The top bit of a full-width word must survive Gosper's step.
        let all: Vec<Word> = FixedWeightWords::new(128, 127).unwrap().collect();
        assert_eq!(all.len(), 128);
        assert_eq!(all.last().unwrap().packed(), u128::MAX << 1);
        assert_eq!(FixedWeightWords::new(128, 128).unwrap().count(), 1);
        assert_eq!(FixedWeightWords::new(5, 0).unwrap().count(), 1);
    }

    #[test]
    fn edit_primitives() {
        let x = w("1010");
        assert_eq!(x.delete_at(0), w("010"));
        assert_eq!(x.delete_at(3), w("101"));
        assert_eq!(x.insert_at(0, 1), w("11010"));
        assert_eq!(x.insert_at(4, 1), w("10101"));
        assert_eq!(x.insert_at(2, 0), w("10010"));
        assert_eq!(x.flip_at(1), w("1110"));
        assert_eq!(x.bit(1), 1);
        assert_eq!(x.bit(4), 0);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("0011").to_string(), "0011");
        assert_eq!("01a".parse::<Word>(), Err(Error::InvalidSymbol('a')));
        assert!("".parse::<Word>().is_err());
        let long = "1".repeat(129);
        assert!(long.parse::<Word>().is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 4), Some(70));
        assert_eq!(binomial(4, 5), Some(0));
        assert_eq!(binomial(60, 30), Some(118264581564861424));
    }
}
