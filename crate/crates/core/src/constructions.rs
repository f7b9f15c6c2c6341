//! Balanced code constructions, realized by filtering the enumeration of
//! `U_n`.
//!
//! | family   | members of `U_n`                                        |
//! |----------|---------------------------------------------------------|
//! | `bvt`    | `Σ i·x_i ≡ a (mod n+1)`                                 |
//! | `blt`    | `Σ i·x_i ≡ a (mod 2n)`                                  |
//! | `r2b`    | every subword of period `≤ l` has length `≤ m`          |
//! | `c2`     | `r2b(n,2,P)` and `Inv ≡ t (mod 1+⌊P/2⌋)`               |
//! | `d2`     | `r2b(n,1,P)` and `Inv ≡ t (mod 1+P)`                    |
//! | `e2`     | `r2b(n,2,P)` and `Inv ≡ t (mod 1+P)`                    |
//! | `parity` | `x_2 + x_4 + ... + x_n ≡ a (mod 2)`                     |
//! | `balanced` | all of `U_n`                                          |

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::words::{
    balanced_count, balanced_words, check_even, Word, DEFAULT_ENUMERATION_BUDGET,
};

/// Families with a residue parameter chosen by pigeonhole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Bvt,
    Blt,
    C2,
    D2,
    E2,
    Parity,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Bvt => "bvt",
            Family::Blt => "blt",
            Family::C2 => "c2",
            Family::D2 => "d2",
            Family::E2 => "e2",
            Family::Parity => "parity",
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bvt" => Ok(Family::Bvt),
            "blt" => Ok(Family::Blt),
            "c2" => Ok(Family::C2),
            "d2" => Ok(Family::D2),
            "e2" => Ok(Family::E2),
            "parity" => Ok(Family::Parity),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

/// `⌈log₂ n⌉` for `n >= 1`.
pub fn ceil_log2(n: usize) -> usize {
    assert!(n >= 1);
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

/// Period bound used by `c2` and `e2` when none is given:
/// `2⌈log₂n⌉ + 3`, capped at `n` so the periodicity set stays well defined.
pub fn default_period_bound_2(n: usize) -> usize {
    (2 * ceil_log2(n) + 3).min(n)
}

/// Period bound used by `d2` when none is given: `⌈log₂n⌉ + 1`, capped at `n`.
pub fn default_period_bound_1(n: usize) -> usize {
    (ceil_log2(n) + 1).min(n)
}

/// A fully parameterized construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Construction {
    Balanced { n: usize },
    Bvt { n: usize, a: usize },
    Blt { n: usize, a: usize },
    R2b { n: usize, l: usize, m: usize },
    C2 { n: usize, t: usize, p: usize },
    D2 { n: usize, t: usize, p: usize },
    E2 { n: usize, t: usize, p: usize },
    Parity { n: usize, a: usize },
}

impl Construction {
    pub fn n(&self) -> usize {
        match *self {
            Construction::Balanced { n }
            | Construction::Bvt { n, .. }
            | Construction::Blt { n, .. }
            | Construction::R2b { n, .. }
            | Construction::C2 { n, .. }
            | Construction::D2 { n, .. }
            | Construction::E2 { n, .. }
            | Construction::Parity { n, .. } => n,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Construction::Balanced { .. } => "balanced",
            Construction::Bvt { .. } => "bvt",
            Construction::Blt { .. } => "blt",
            Construction::R2b { .. } => "r2b",
            Construction::C2 { .. } => "c2",
            Construction::D2 { .. } => "d2",
            Construction::E2 { .. } => "e2",
            Construction::Parity { .. } => "parity",
        }
    }

    /// Parameters other than `n`, in header order.
    pub fn params(&self) -> Vec<(String, String)> {
        let kv = |k: &str, v: usize| (k.to_string(), v.to_string());
        match *self {
            Construction::Balanced { .. } => vec![],
            Construction::Bvt { a, .. } | Construction::Blt { a, .. } => vec![kv("a", a)],
            Construction::Parity { a, .. } => vec![kv("a", a)],
            Construction::R2b { l, m, .. } => vec![kv("l", l), kv("m", m)],
            Construction::C2 { t, p, .. }
            | Construction::D2 { t, p, .. }
            | Construction::E2 { t, p, .. } => vec![kv("t", t), kv("p", p)],
        }
    }

    /// Rebuilds a construction from a header's family and parameters.
    pub fn from_meta(meta: &CodeMeta) -> Result<Self> {
        let get = |key: &str| -> Result<usize> {
            let raw = meta
                .params
                .iter()
                .find(|(k, _)| k.eq_ignore_ascii_case(key))
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| Error::Parameter(format!("missing parameter {key}")))?;
            raw.parse()
                .map_err(|_| Error::Parameter(format!("parameter {key}={raw} is not an integer")))
        };
        let n = meta.n;
        Ok(match meta.family.as_str() {
            "balanced" => Construction::Balanced { n },
            "bvt" => Construction::Bvt { n, a: get("a")? },
            "blt" => Construction::Blt { n, a: get("a")? },
            "parity" => Construction::Parity { n, a: get("a")? },
            "r2b" => Construction::R2b {
                n,
                l: get("l")?,
                m: get("m")?,
            },
            "c2" => Construction::C2 {
                n,
                t: get("t")?,
                p: get("p")?,
            },
            "d2" => Construction::D2 {
                n,
                t: get("t")?,
                p: get("p")?,
            },
            "e2" => Construction::E2 {
                n,
                t: get("t")?,
                p: get("p")?,
            },
            other => return Err(Error::UnknownFamily(other.to_string())),
        })
    }

    fn validate(&self) -> Result<()> {
        check_even(self.n())?;
        let bad = |msg: String| Err(Error::Parameter(msg));
        match *self {
            Construction::Balanced { .. } => Ok(()),
            Construction::Bvt { n, a } if a > n => bad(format!("bvt residue {a} outside 0..={n}")),
            Construction::Blt { n, a } if a >= 2 * n => {
                bad(format!("blt residue {a} outside 0..{}", 2 * n))
            }
            Construction::Parity { a, .. } if a > 1 => bad(format!("parity residue {a} not in {{0,1}}")),
            Construction::R2b { n, l, m } => check_periodicity(n, l, m),
            Construction::C2 { n, t, p } => {
                check_periodicity(n, 2, p)?;
                let modulus = 1 + p / 2;
                if t >= modulus {
                    return bad(format!("c2 residue {t} outside 0..{modulus}"));
                }
                Ok(())
            }
            Construction::D2 { n, t, p } => {
                check_periodicity(n, 1, p)?;
                if t > p {
                    return bad(format!("d2 residue {t} outside 0..{}", p + 1));
                }
                Ok(())
            }
            Construction::E2 { n, t, p } => {
                check_periodicity(n, 2, p)?;
                if t > p {
                    return bad(format!("e2 residue {t} outside 0..{}", p + 1));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Membership test for a word already known to lie in `U_n`.
    pub fn admits(&self, x: &Word) -> bool {
        match *self {
            Construction::Balanced { .. } => true,
            Construction::Bvt { n, a } => x.weighted_sum() % (n as u64 + 1) == a as u64,
            Construction::Blt { n, a } => x.weighted_sum() % (2 * n as u64) == a as u64,
            Construction::Parity { a, .. } => x.even_position_weight() % 2 == a,
            Construction::R2b { l, m, .. } => in_periodicity_set(x, l, m),
            Construction::C2 { t, p, .. } => {
                in_periodicity_set(x, 2, p) && x.inversion_number() % (1 + p / 2) == t
            }
            Construction::D2 { t, p, .. } => {
                in_periodicity_set(x, 1, p) && x.inversion_number() % (1 + p) == t
            }
            Construction::E2 { t, p, .. } => {
                in_periodicity_set(x, 2, p) && x.inversion_number() % (1 + p) == t
            }
        }
    }

    pub fn build(&self) -> Result<Code> {
        self.build_with(DEFAULT_ENUMERATION_BUDGET, Exec::default())
    }

    pub fn build_with(&self, budget: u128, exec: Exec) -> Result<Code> {
        self.validate()?;
        let universe = balanced_words(self.n(), budget)?;
        let words = exec.filter(&universe, |x| self.admits(x));
        Ok(Code {
            n: self.n(),
            words,
            meta: CodeMeta::from(*self),
        })
    }
}

fn check_periodicity(n: usize, l: usize, m: usize) -> Result<()> {
    if !(1..=2).contains(&l) {
        return Err(Error::Parameter(format!("period bound l={l} must be 1 or 2")));
    }
    if !(l < m && m <= n) {
        return Err(Error::Parameter(format!(
            "need l < m <= n, got l={l}, m={m}, n={n}"
        )));
    }
    Ok(())
}

fn in_periodicity_set(x: &Word, l: usize, m: usize) -> bool {
    // l < m <= n is validated upstream, so l < n here.
    x.longest_low_period_subword(l).map(|len| len <= m).unwrap_or(false)
}

/// Family name and parameters, as written in a code file header.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeMeta {
    pub family: String,
    pub n: usize,
    pub params: Vec<(String, String)>,
}

impl CodeMeta {
    pub fn new(family: impl Into<String>, n: usize, params: Vec<(String, String)>) -> Self {
        CodeMeta {
            family: family.into(),
            n,
            params,
        }
    }

    pub fn custom(n: usize) -> Self {
        CodeMeta::new("custom", n, vec![])
    }

    /// `# family=<name> n=<n> params=<k=v,...>`
    pub fn header(&self) -> String {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!(
            "# family={} n={} params={}",
            self.family,
            self.n,
            params.join(",")
        )
    }

    fn parse_header(line: &str, line_no: usize) -> Result<Self> {
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let body = line
            .strip_prefix('#')
            .ok_or_else(|| err("header must start with '#'".into()))?;
        let (mut family, mut n, mut params) = (None, None, Vec::new());
        for field in body.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| err(format!("malformed header field {field:?}")))?;
            match key {
                "family" => family = Some(value.to_string()),
                "n" => {
                    n = Some(
                        value
                            .parse::<usize>()
                            .map_err(|_| err(format!("n={value} is not an integer")))?,
                    )
                }
                "params" => {
                    for kv in value.split(',').filter(|s| !s.is_empty()) {
                        let (k, v) = kv
                            .split_once('=')
                            .ok_or_else(|| err(format!("malformed parameter {kv:?}")))?;
                        params.push((k.to_string(), v.to_string()));
                    }
                }
                other => return Err(err(format!("unknown header field {other:?}"))),
            }
        }
        Ok(CodeMeta {
            family: family.ok_or_else(|| err("header lacks family=".into()))?,
            n: n.ok_or_else(|| err("header lacks n=".into()))?,
            params,
        })
    }
}

impl From<Construction> for CodeMeta {
    fn from(c: Construction) -> Self {
        CodeMeta::new(c.family_name(), c.n(), c.params())
    }
}

/// A set of distinct balanced words of one even length, sorted
/// lexicographically, plus the descriptor that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Code {
    n: usize,
    words: Vec<Word>,
    meta: CodeMeta,
}

impl Code {
    /// Validates and sorts `words`.
    pub fn new(n: usize, mut words: Vec<Word>, meta: CodeMeta) -> Result<Self> {
        check_even(n)?;
        if meta.n != n {
            return Err(Error::LengthMismatch(n, meta.n));
        }
        for w in &words {
            if w.len() != n {
                return Err(Error::LengthMismatch(n, w.len()));
            }
            if !w.is_balanced() {
                return Err(Error::Unbalanced(*w));
            }
        }
        words.sort_unstable();
        if let Some(dup) = words.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::DuplicateWord(dup[0]));
        }
        Ok(Code { n, words, meta })
    }

    /// All of `U_n`.
    pub fn balanced(n: usize, budget: u128) -> Result<Self> {
        Ok(Code {
            n,
            words: balanced_words(n, budget)?,
            meta: Construction::Balanced { n }.into(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn meta(&self) -> &CodeMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }

    pub fn word_set(&self) -> HashSet<Word> {
        self.words.iter().copied().collect()
    }

    /// Header line followed by one word per line.
    pub fn to_text(&self) -> String {
        let mut out = self.meta.header();
        out.push('\n');
        for w in &self.words {
            out.push_str(&w.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses a code file. The header is optional; without one the code is
    /// tagged `custom` and `n` is taken from the first word. Blank lines and
    /// further `#` comment lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut meta: Option<CodeMeta> = None;
        let mut words = Vec::new();
        let mut first_line = true;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('#') {
                if first_line {
                    meta = Some(CodeMeta::parse_header(line, line_no)?);
                }
                first_line = false;
                continue;
            }
            first_line = false;
            let word: Word = line.parse().map_err(|e: Error| Error::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
            if let Some(m) = &meta {
                if word.len() != m.n {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("word length {} differs from n={}", word.len(), m.n),
                    });
                }
            }
            if !word.is_balanced() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("word {word} is not balanced"),
                });
            }
            words.push(word);
        }
        let meta = match meta {
            Some(m) => m,
            None => CodeMeta::custom(words.first().ok_or(Error::EmptyCode)?.len()),
        };
        Code::new(meta.n, words, meta)
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn bvt(n: usize, a: usize) -> Result<Code> {
    Construction::Bvt { n, a }.build()
}

pub fn blt(n: usize, a: usize) -> Result<Code> {
    Construction::Blt { n, a }.build()
}

/// `R₂ᵇ(n, l, m)`.
pub fn periodicity_set(n: usize, l: usize, m: usize) -> Result<Code> {
    Construction::R2b { n, l, m }.build()
}

pub fn code_c2(n: usize, t: usize, p: usize) -> Result<Code> {
    Construction::C2 { n, t, p }.build()
}

pub fn code_d2(n: usize, t: usize, p: usize) -> Result<Code> {
    Construction::D2 { n, t, p }.build()
}

pub fn code_e2(n: usize, t: usize, p: usize) -> Result<Code> {
    Construction::E2 { n, t, p }.build()
}

pub fn code_parity(n: usize, a: usize) -> Result<Code> {
    Construction::Parity { n, a }.build()
}

impl Family {
    /// Number of residue classes.
    pub fn modulus(self, n: usize, p: usize) -> usize {
        match self {
            Family::Bvt => n + 1,
            Family::Blt => 2 * n,
            Family::C2 => 1 + p / 2,
            Family::D2 | Family::E2 => 1 + p,
            Family::Parity => 2,
        }
    }

    pub fn default_period_bound(self, n: usize) -> usize {
        match self {
            Family::C2 | Family::E2 => default_period_bound_2(n),
            Family::D2 => default_period_bound_1(n),
            _ => 0,
        }
    }

    pub fn construction(self, n: usize, residue: usize, p: usize) -> Construction {
        match self {
            Family::Bvt => Construction::Bvt { n, a: residue },
            Family::Blt => Construction::Blt { n, a: residue },
            Family::C2 => Construction::C2 { n, t: residue, p },
            Family::D2 => Construction::D2 { n, t: residue, p },
            Family::E2 => Construction::E2 { n, t: residue, p },
            Family::Parity => Construction::Parity { n, a: residue },
        }
    }

    /// Residue class of `x`, or `None` if `x` falls outside the family's
    /// periodicity set.
    fn residue_of(self, x: &Word, n: usize, p: usize) -> Option<usize> {
        let modulus = self.modulus(n, p);
        match self {
            Family::Bvt | Family::Blt => Some((x.weighted_sum() % modulus as u64) as usize),
            Family::Parity => Some(x.even_position_weight() % 2),
            Family::C2 | Family::E2 => {
                in_periodicity_set(x, 2, p).then(|| x.inversion_number() % modulus)
            }
            Family::D2 => in_periodicity_set(x, 1, p).then(|| x.inversion_number() % modulus),
        }
    }
}

/// Sizes of every residue class, indexed by residue.
pub fn residue_class_sizes(
    family: Family,
    n: usize,
    p: Option<usize>,
    budget: u128,
    exec: Exec,
) -> Result<Vec<usize>> {
    let p = p.unwrap_or_else(|| family.default_period_bound(n));
    // Validate parameters through a representative construction.
    family.construction(n, 0, p).validate()?;
    let universe = balanced_words(n, budget)?;
    let residues = exec.map(&universe, |x| family.residue_of(x, n, p));
    let mut sizes = vec![0usize; family.modulus(n, p)];
    for r in residues.into_iter().flatten() {
        sizes[r] += 1;
    }
    Ok(sizes)
}

/// Residue maximizing the code size, ties to the smallest residue, with the
/// built code. `p` defaults to the family's standard period bound.
pub fn best_residue(family: Family, n: usize, p: Option<usize>) -> Result<(usize, Code)> {
    best_residue_with(family, n, p, DEFAULT_ENUMERATION_BUDGET, Exec::default())
}

pub fn best_residue_with(
    family: Family,
    n: usize,
    p: Option<usize>,
    budget: u128,
    exec: Exec,
) -> Result<(usize, Code)> {
    let p = p.unwrap_or_else(|| family.default_period_bound(n));
    let sizes = residue_class_sizes(family, n, Some(p), budget, exec)?;
    let (best, _) = sizes
        .iter()
        .enumerate()
        .fold((0usize, 0usize), |(bi, bs), (i, &s)| if s > bs { (i, s) } else { (bi, bs) });
    let code = family.construction(n, best, p).build_with(budget, exec)?;
    Ok((best, code))
}

/// Redundancy of a code and its normalization against `U_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Redundancy {
    /// `n - log₂|C|`
    pub redundancy: f64,
    /// `(n - Δ) - log₂|C|`, zero for `U_n` itself.
    pub normalized: f64,
    /// `Δ = n - log₂ C(n, n/2)`
    pub delta: f64,
}

/// `log₂ C(n, n/2)` in floating point.
pub fn log2_balanced_count(n: usize) -> f64 {
    match balanced_count(n) {
        Some(c) => (c as f64).log2(),
        None => {
            // Beyond u128: sum of logs.
            (1..=n / 2)
                .map(|i| ((n / 2 + i) as f64).log2() - (i as f64).log2())
                .sum()
        }
    }
}

pub fn delta(n: usize) -> f64 {
    n as f64 - log2_balanced_count(n)
}

pub fn redundancy_of_size(n: usize, size: usize) -> Result<Redundancy> {
    if size == 0 {
        return Err(Error::EmptyCode);
    }
    let log_size = (size as f64).log2();
    let delta = delta(n);
    Ok(Redundancy {
        redundancy: n as f64 - log_size,
        normalized: (n as f64 - delta) - log_size,
        delta,
    })
}

pub fn redundancy(code: &Code) -> Result<Redundancy> {
    redundancy_of_size(code.n(), code.len())
}
