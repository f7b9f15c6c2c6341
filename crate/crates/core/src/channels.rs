//! The seven single-edit error balls and exact intersection sizes.
//!
//! Balls are materialized as sorted, deduplicated vectors so intersections are
//! a linear merge. Union channels hold members of mixed lengths; since
//! [`Word`] orders by length first, the merge never equates words of
//! different lengths.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::words::{Word, MAX_LEN};

/// Single-edit channel kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Channel {
    S,
    D,
    I,
    DI,
    SD,
    SI,
    #[serde(rename = "EDIT")]
    Edit,
}

impl Channel {
    pub const ALL: [Channel; 7] = [
        Channel::S,
        Channel::D,
        Channel::I,
        Channel::DI,
        Channel::SD,
        Channel::SI,
        Channel::Edit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Channel::S => "S",
            Channel::D => "D",
            Channel::I => "I",
            Channel::DI => "DI",
            Channel::SD => "SD",
            Channel::SI => "SI",
            Channel::Edit => "EDIT",
        }
    }

    pub fn has_substitution(self) -> bool {
        matches!(self, Channel::S | Channel::SD | Channel::SI | Channel::Edit)
    }

    pub fn has_deletion(self) -> bool {
        matches!(self, Channel::D | Channel::DI | Channel::SD | Channel::Edit)
    }

    pub fn has_insertion(self) -> bool {
        matches!(self, Channel::I | Channel::DI | Channel::SI | Channel::Edit)
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "S" => Ok(Channel::S),
            "D" => Ok(Channel::D),
            "I" => Ok(Channel::I),
            "DI" => Ok(Channel::DI),
            "SD" => Ok(Channel::SD),
            "SI" => Ok(Channel::SI),
            "EDIT" => Ok(Channel::Edit),
            _ => Err(Error::UnknownChannel(s.to_string())),
        }
    }
}

/// An error ball: every word reachable from `center` by at most one error of
/// the channel's kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub center: Word,
    pub channel: Channel,
    members: Vec<Word>,
}

impl Ball {
    /// Members in ascending (length, lexicographic) order.
    pub fn members(&self) -> &[Word] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.members.binary_search(w).is_ok()
    }

    pub fn into_members(self) -> Vec<Word> {
        self.members
    }
}

fn push_substitutions(x: &Word, out: &mut Vec<Word>) {
    out.push(*x);
    out.extend((0..x.len()).map(|p| x.flip_at(p)));
}

fn push_deletions(x: &Word, out: &mut Vec<Word>) {
    // Deleting anywhere inside a run gives the same word; take the first
    // position of each run.
    let mut prev = None;
    for (p, s) in x.symbols().enumerate() {
        if prev != Some(s) {
            out.push(x.delete_at(p));
            prev = Some(s);
        }
    }
}

fn push_insertions(x: &Word, out: &mut Vec<Word>) {
    for p in 0..=x.len() {
        out.push(x.insert_at(p, 0));
        out.push(x.insert_at(p, 1));
    }
}

/// Sorted, deduplicated members of the ball of `x`.
pub fn ball_members(ch: Channel, x: &Word) -> Result<Vec<Word>> {
    if ch.has_deletion() && x.len() < 2 {
        return Err(Error::EmptyCenter(x.len()));
    }
    if ch.has_insertion() && x.len() >= MAX_LEN {
        return Err(Error::InvalidLength(x.len() + 1));
    }
    let mut out = Vec::with_capacity(4 * x.len() + 3);
    if ch.has_substitution() {
        push_substitutions(x, &mut out);
    }
    if ch.has_deletion() {
        push_deletions(x, &mut out);
    }
    if ch.has_insertion() {
        push_insertions(x, &mut out);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn ball(ch: Channel, x: &Word) -> Result<Ball> {
    Ok(Ball {
        center: *x,
        channel: ch,
        members: ball_members(ch, x)?,
    })
}

/// Whether `shorter` is `longer` with exactly one symbol removed.
pub(crate) fn is_single_deletion_of(longer: &Word, shorter: &Word) -> bool {
    if longer.len() != shorter.len() + 1 {
        return false;
    }
    // Deleting at the first mismatch is enough: align `longer` minus its
    // last symbol with `shorter`, find the top differing bit, and compare the
    // tails below it.
    let (a, b) = (longer.packed(), shorter.packed());
    let diff = (a >> 1) ^ b;
    if diff == 0 {
        return true;
    }
    let hi = 127 - diff.leading_zeros();
    let mask = (1u128 << hi << 1).wrapping_sub(1);
    (a & mask) == (b & mask)
}

/// Membership test `w ∈ B(center)` without materializing the ball.
pub fn ball_contains(ch: Channel, center: &Word, w: &Word) -> bool {
    let (n, m) = (center.len(), w.len());
    if m == n {
        ch.has_substitution() && (center.packed() ^ w.packed()).count_ones() <= 1
    } else if m + 1 == n {
        ch.has_deletion() && is_single_deletion_of(center, w)
    } else if m == n + 1 {
        ch.has_insertion() && is_single_deletion_of(w, center)
    } else {
        false
    }
}

/// Size of the intersection of two sorted, deduplicated slices.
pub fn sorted_intersection_size(a: &[Word], b: &[Word]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// `|B(x) ∩ B(y)|` by explicit set intersection.
pub fn ball_intersection_size(ch: Channel, x: &Word, y: &Word) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    Ok(sorted_intersection_size(
        &ball_members(ch, x)?,
        &ball_members(ch, y)?,
    ))
}

/// Necessary condition for two equal-length words to share a single-deletion
/// descendant or a single-insertion ancestor: on the window between the first
/// and last differing positions, one word is the other shifted by one place.
pub fn shift_compatible(x: &Word, y: &Word) -> bool {
    debug_assert_eq!(x.len(), y.len());
    let n = x.len();
    let diff = x.packed() ^ y.packed();
    if diff == 0 {
        return true;
    }
    // Packed bit j holds symbol n-1-j; window in packed coordinates is [lo, hi].
    let hi = 127 - diff.leading_zeros() as usize;
    let lo = diff.trailing_zeros() as usize;
    debug_assert!(hi < n);
    let width = hi - lo + 1;
    let mask = if width >= 128 { u128::MAX } else { (1u128 << width) - 1 };
    let xw = (x.packed() >> lo) & mask;
    let yw = (y.packed() >> lo) & mask;
    let tail = mask >> 1;
    // x without its first window symbol equals y without its last, or vice versa.
    (xw & tail) == (yw >> 1) || (yw & tail) == (xw >> 1)
}

/// Pairs with Hamming distance at least 3 whose difference window is not a
/// one-place shift have disjoint balls under every single-edit channel.
#[inline]
pub fn provably_disjoint(x: &Word, y: &Word) -> bool {
    (x.packed() ^ y.packed()).count_ones() >= 3 && !shift_compatible(x, y)
}

/// Result of a read-coverage scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub channel: Channel,
    /// `ν(C; B)`: the largest pairwise ball intersection, 0 for codes with
    /// fewer than two words.
    pub nu: usize,
    /// Lexicographically smallest pair `(x, y)`, `x < y`, attaining `nu`.
    pub witness: Option<(Word, Word)>,
    pub code_size: usize,
    pub pairs_checked: u64,
    /// Pairs skipped by the structural filter.
    pub filtered: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverageOptions {
    pub exec: Exec,
    /// Skip pairs proven disjoint by [`provably_disjoint`]. Never changes `nu`.
    pub filter: bool,
}

impl Default for CoverageOptions {
    fn default() -> Self {
        CoverageOptions {
            exec: Exec::default(),
            filter: true,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct RowBest {
    nu: usize,
    partner: Option<usize>,
    checked: u64,
    filtered: u64,
}

/// `ν(C; B)` over the given words. Words are sorted internally, so the
/// witness does not depend on input order.
pub fn read_coverage(ch: Channel, words: &[Word]) -> Result<CoverageReport> {
    read_coverage_with(ch, words, CoverageOptions::default())
}

pub fn read_coverage_with(
    ch: Channel,
    words: &[Word],
    opts: CoverageOptions,
) -> Result<CoverageReport> {
    let mut sorted = words.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if let Some(first) = sorted.first() {
        if let Some(bad) = sorted.iter().find(|w| w.len() != first.len()) {
            return Err(Error::LengthMismatch(first.len(), bad.len()));
        }
    }
    let balls = opts
        .exec
        .map(&sorted, |w| ball_members(ch, w))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let rows = opts.exec.map_range(sorted.len(), |i| {
        let mut best = RowBest::default();
        for j in i + 1..sorted.len() {
            if opts.filter && provably_disjoint(&sorted[i], &sorted[j]) {
                best.filtered += 1;
                continue;
            }
            best.checked += 1;
            let size = sorted_intersection_size(&balls[i], &balls[j]);
            if size > best.nu || (best.partner.is_none() && size == best.nu) {
                best.nu = size;
                best.partner = Some(j);
            }
        }
        best
    });

    let mut report = CoverageReport {
        channel: ch,
        nu: 0,
        witness: None,
        code_size: sorted.len(),
        pairs_checked: 0,
        filtered: 0,
    };
    // Rows are visited in increasing i and each row keeps its smallest j, so
    // the first strict improvement is the lexicographically smallest witness.
    let mut best_row: Option<(usize, usize)> = None;
    let mut best_nu = 0;
    for (i, row) in rows.iter().enumerate() {
        report.pairs_checked += row.checked;
        report.filtered += row.filtered;
        if let Some(j) = row.partner {
            if best_row.is_none() || row.nu > best_nu {
                best_nu = row.nu;
                best_row = Some((i, j));
            }
        }
    }
    // Filtered pairs have intersection 0; they can still be the witness when
    // every pair is disjoint.
    if best_nu == 0 && sorted.len() >= 2 {
        best_row = Some((0, 1));
    }
    report.nu = best_nu;
    report.witness = best_row.map(|(i, j)| (sorted[i], sorted[j]));
    Ok(report)
}
