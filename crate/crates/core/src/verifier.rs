//! Reconstruction-code certification, decoding from distinct reads, and
//! extremal search on small instances.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channels::{
    ball_contains, ball_members, provably_disjoint, read_coverage_with, sorted_intersection_size,
    Channel, CoverageOptions, CoverageReport,
};
use crate::constructions::{Code, CodeMeta};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::words::{balanced_words, check_even, Word, DEFAULT_ENUMERATION_BUDGET};

/// Default vertex limit for [`exact_max_code`].
pub const DEFAULT_EXACT_VERTEX_BUDGET: usize = 1000;

/// Outcome of [`certify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certification {
    /// `ν(C; B) < N`
    pub certified: bool,
    #[serde(rename = "N")]
    pub reads: usize,
    pub report: CoverageReport,
}

/// Checks that `code` is an `(n, N; B)`-reconstruction code.
pub fn certify(code: &Code, ch: Channel, reads: usize) -> Result<Certification> {
    certify_with(code, ch, reads, CoverageOptions::default())
}

pub fn certify_with(
    code: &Code,
    ch: Channel,
    reads: usize,
    opts: CoverageOptions,
) -> Result<Certification> {
    if reads == 0 {
        return Err(Error::Parameter("N must be positive".into()));
    }
    let report = read_coverage_with(ch, code.words(), opts)?;
    Ok(Certification {
        certified: report.nu < reads,
        reads,
        report,
    })
}

/// Decoding failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("no reads given")]
    NoReads,
    #[error("duplicate read {0}")]
    DuplicateRead(Word),
    #[error("reads inconsistent with code")]
    Inconsistent,
    /// More than one codeword explains every read. With at least `N` reads
    /// from a certified code this cannot happen.
    #[error("ambiguous: {} candidates fit all reads", candidates.len())]
    Ambiguous {
        candidates: Vec<Word>,
        enough_reads: bool,
    },
}

/// Reconstructs codewords from sets of distinct noisy reads.
#[derive(Debug, Clone)]
pub struct Decoder<'a> {
    code: &'a Code,
    channel: Channel,
    members: HashSet<Word>,
}

impl<'a> Decoder<'a> {
    pub fn new(code: &'a Code, channel: Channel) -> Self {
        Decoder {
            code,
            channel,
            members: code.word_set(),
        }
    }

    pub fn channel(&self) -> Channel {
        self.channel
    }

    fn check_reads(reads: &[Word]) -> std::result::Result<(), DecodeError> {
        if reads.is_empty() {
            return Err(DecodeError::NoReads);
        }
        let mut seen = HashSet::with_capacity(reads.len());
        for r in reads {
            if !seen.insert(*r) {
                return Err(DecodeError::DuplicateRead(*r));
            }
        }
        Ok(())
    }

    fn conclude(
        candidates: Vec<Word>,
        reads: usize,
        n_reads: usize,
    ) -> std::result::Result<Word, DecodeError> {
        match candidates.as_slice() {
            [] => Err(DecodeError::Inconsistent),
            [x] => Ok(*x),
            _ => Err(DecodeError::Ambiguous {
                candidates,
                enough_reads: reads >= n_reads,
            }),
        }
    }

    fn explains_all(&self, x: &Word, reads: &[Word]) -> bool {
        reads.iter().all(|r| ball_contains(self.channel, x, r))
    }

    /// Words of length `n` whose ball could contain `read`.
    fn origins(&self, read: &Word) -> Vec<Word> {
        let n = self.code.n();
        let ch = self.channel;
        let inverse = if read.len() == n && ch.has_substitution() {
            Some(Channel::S)
        } else if read.len() + 1 == n && ch.has_deletion() {
            Some(Channel::I)
        } else if read.len() == n + 1 && ch.has_insertion() {
            Some(Channel::D)
        } else {
            None
        };
        inverse
            .and_then(|inv| ball_members(inv, read).ok())
            .unwrap_or_default()
    }

    /// Candidate generation from the first read, filtered by the code and the
    /// remaining reads. `n_reads` is the `N` the code was certified for.
    pub fn decode(&self, reads: &[Word], n_reads: usize) -> std::result::Result<Word, DecodeError> {
        Self::check_reads(reads)?;
        let mut candidates: Vec<Word> = self
            .origins(&reads[0])
            .into_iter()
            .filter(|x| self.members.contains(x) && self.explains_all(x, reads))
            .collect();
        candidates.sort_unstable();
        Self::conclude(candidates, reads.len(), n_reads)
    }

    /// Reference decoder: scans the whole code.
    pub fn decode_full_scan(
        &self,
        reads: &[Word],
        n_reads: usize,
    ) -> std::result::Result<Word, DecodeError> {
        Self::check_reads(reads)?;
        let candidates: Vec<Word> = self
            .code
            .words()
            .iter()
            .filter(|x| self.explains_all(x, reads))
            .copied()
            .collect();
        Self::conclude(candidates, reads.len(), n_reads)
    }
}

/// One-shot decode; see [`Decoder::decode`].
pub fn reconstruct(
    code: &Code,
    ch: Channel,
    reads: &[Word],
    n_reads: usize,
) -> std::result::Result<Word, DecodeError> {
    Decoder::new(code, ch).decode(reads, n_reads)
}

/// Fixed-width bitset over vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bitset {
    blocks: Vec<u64>,
}

impl Bitset {
    fn empty(len: usize) -> Self {
        Bitset {
            blocks: vec![0; len.div_ceil(64)],
        }
    }

    fn full(len: usize) -> Self {
        let mut b = Self::empty(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    fn insert(&mut self, i: usize) {
        self.blocks[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.blocks[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    fn count(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    fn first(&self) -> Option<usize> {
        self.blocks
            .iter()
            .enumerate()
            .find(|(_, &b)| b != 0)
            .map(|(k, &b)| k * 64 + b.trailing_zeros() as usize)
    }

    fn intersect(&self, other: &Bitset) -> Bitset {
        Bitset {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    fn subtract_in_place(&mut self, other: &Bitset) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= !b;
        }
    }
}

/// Pairs whose balls share at least `threshold` words. Independent sets are
/// exactly the `(n, threshold; B)`-reconstruction codes inside `vertices`.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    pub channel: Channel,
    pub threshold: usize,
    vertices: Vec<Word>,
    conflicts: Vec<Bitset>,
}

impl ConflictGraph {
    pub fn build(vertices: &[Word], ch: Channel, threshold: usize, exec: Exec) -> Result<Self> {
        if threshold == 0 {
            return Err(Error::Parameter("N must be positive".into()));
        }
        let mut vertices = vertices.to_vec();
        vertices.sort_unstable();
        vertices.dedup();
        let balls = exec
            .map(&vertices, |w| ball_members(ch, w))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let count = vertices.len();
        let conflicts = exec.map_range(count, |i| {
            let mut row = Bitset::empty(count);
            for j in 0..count {
                if i != j
                    && !provably_disjoint(&vertices[i], &vertices[j])
                    && sorted_intersection_size(&balls[i], &balls[j]) >= threshold
                {
                    row.insert(j);
                }
            }
            row
        });
        Ok(ConflictGraph {
            channel: ch,
            threshold,
            vertices,
            conflicts,
        })
    }

    pub fn vertices(&self) -> &[Word] {
        &self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.conflicts.iter().map(Bitset::count).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.conflicts[v].count()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.conflicts[a].contains(b)
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(k, &a)| set[k + 1..].iter().all(|&b| !self.has_edge(a, b)))
    }

    /// Maximum independent set by branch and bound: a maximum clique search
    /// in the compatibility graph with greedy colouring bounds. Vertex order
    /// is lexicographic and the search is single-threaded, so the returned
    /// optimum is deterministic.
    pub fn maximum_independent_set(&self) -> Vec<usize> {
        let count = self.vertices.len();
        let compatible: Vec<Bitset> = (0..count)
            .map(|v| {
                let mut row = Bitset::full(count);
                row.subtract_in_place(&self.conflicts[v]);
                row.remove(v);
                row
            })
            .collect();
        let mut search = CliqueSearch {
            adjacency: &compatible,
            best: Vec::new(),
            current: Vec::new(),
        };
        search.expand(Bitset::full(count));
        let mut best = search.best;
        best.sort_unstable();
        best
    }

    /// Lexicographic first-fit independent set.
    pub fn greedy_independent_set(&self) -> Vec<usize> {
        let mut blocked = Bitset::empty(self.vertices.len());
        let mut chosen = Vec::new();
        for v in 0..self.vertices.len() {
            if !blocked.contains(v) {
                chosen.push(v);
                for (k, block) in self.conflicts[v].blocks.iter().enumerate() {
                    blocked.blocks[k] |= block;
                }
            }
        }
        chosen
    }
}

struct CliqueSearch<'g> {
    adjacency: &'g [Bitset],
    best: Vec<usize>,
    current: Vec<usize>,
}

impl CliqueSearch<'_> {
    /// Greedy colouring of `candidates` into independent classes; returns the
    /// vertices in colour order with their colour numbers.
    fn colour(&self, candidates: &Bitset) -> (Vec<usize>, Vec<usize>) {
        let mut uncoloured = candidates.clone();
        let mut order = Vec::with_capacity(candidates.count());
        let mut colours = Vec::with_capacity(order.capacity());
        let mut colour = 0;
        while !uncoloured.is_empty() {
            colour += 1;
            let mut open = uncoloured.clone();
            while let Some(v) = open.first() {
                open.remove(v);
                open.subtract_in_place(&self.adjacency[v]);
                uncoloured.remove(v);
                order.push(v);
                colours.push(colour);
            }
        }
        (order, colours)
    }

    fn expand(&mut self, mut candidates: Bitset) {
        let (order, colours) = self.colour(&candidates);
        for k in (0..order.len()).rev() {
            if self.current.len() + colours[k] <= self.best.len() {
                return;
            }
            let v = order[k];
            self.current.push(v);
            let next = candidates.intersect(&self.adjacency[v]);
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            candidates.remove(v);
        }
    }
}

/// Maximum size of a code with `ν < N` and one optimal code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalResult {
    pub size: usize,
    pub code: Code,
    pub exact: bool,
    pub vertices: usize,
    pub conflict_edges: usize,
}

fn universe_words(n: usize, universe: Option<&Code>, budget: u128) -> Result<Vec<Word>> {
    check_even(n)?;
    match universe {
        Some(code) if code.n() != n => Err(Error::LengthMismatch(n, code.n())),
        Some(code) => Ok(code.words().to_vec()),
        None => balanced_words(n, budget),
    }
}

fn search_meta(kind: &str, n: usize, ch: Channel, reads: usize) -> CodeMeta {
    CodeMeta::new(
        kind,
        n,
        vec![
            ("channel".into(), ch.name().into()),
            ("N".into(), reads.to_string()),
        ],
    )
}

/// Exact maximum `(n, N; B)`-reconstruction code inside `universe`
/// (default `U_n`), refusing graphs above `vertex_budget` vertices.
pub fn exact_max_code(
    n: usize,
    ch: Channel,
    reads: usize,
    universe: Option<&Code>,
) -> Result<ExtremalResult> {
    exact_max_code_with(
        n,
        ch,
        reads,
        universe,
        DEFAULT_EXACT_VERTEX_BUDGET,
        DEFAULT_ENUMERATION_BUDGET,
        Exec::default(),
    )
}

pub fn exact_max_code_with(
    n: usize,
    ch: Channel,
    reads: usize,
    universe: Option<&Code>,
    vertex_budget: usize,
    enumeration_budget: u128,
    exec: Exec,
) -> Result<ExtremalResult> {
    let words = universe_words(n, universe, enumeration_budget)?;
    if words.len() > vertex_budget {
        return Err(Error::SearchBudgetExceeded {
            vertices: words.len(),
            budget: vertex_budget,
        });
    }
    let graph = ConflictGraph::build(&words, ch, reads, exec)?;
    let chosen = graph.maximum_independent_set();
    let code_words = chosen.iter().map(|&v| graph.vertices()[v]).collect();
    let code = Code::new(n, code_words, search_meta("exact", n, ch, reads))?;
    Ok(ExtremalResult {
        size: code.len(),
        code,
        exact: true,
        vertices: graph.vertices().len(),
        conflict_edges: graph.edge_count(),
    })
}

/// Lexicographic first-fit code: a maximal, not necessarily maximum,
/// `(n, N; B)`-reconstruction code in `U_n`.
pub fn greedy_code(n: usize, ch: Channel, reads: usize) -> Result<Code> {
    greedy_code_with(n, ch, reads, DEFAULT_ENUMERATION_BUDGET, Exec::default())
}

pub fn greedy_code_with(
    n: usize,
    ch: Channel,
    reads: usize,
    budget: u128,
    exec: Exec,
) -> Result<Code> {
    if reads == 0 {
        return Err(Error::Parameter("N must be positive".into()));
    }
    let words = universe_words(n, None, budget)?;
    let balls = exec
        .map(&words, |w| ball_members(ch, w))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..words.len() {
        let fits = chosen.iter().all(|&j| {
            provably_disjoint(&words[i], &words[j])
                || sorted_intersection_size(&balls[i], &balls[j]) < reads
        });
        if fits {
            chosen.push(i);
        }
    }
    Code::new(
        n,
        chosen.into_iter().map(|i| words[i]).collect(),
        search_meta("greedy", n, ch, reads),
    )
}

/// All `k`-subsets of `items`, in lexicographic index order.
pub fn subsets<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    if k > items.len() {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // Rightmost index that can still advance.
        let mut pos = k;
        while pos > 0 && idx[pos - 1] == pos - 1 + items.len() - k {
            pos -= 1;
        }
        if pos == 0 {
            return out;
        }
        idx[pos - 1] += 1;
        for q in pos..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// Distinct reads drawn from `B(x)`, for exhaustive decoder checks.
pub fn reads_of(ch: Channel, x: &Word) -> Result<BTreeSet<Word>> {
    Ok(ball_members(ch, x)?.into_iter().collect())
}
