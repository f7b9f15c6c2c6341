//! Type-A and Type-B confusability and the intersection sizes they pin down.
//!
//! Both templates differ from their partner in the first and last core
//! symbol, so a valid decomposition `x = u c v`, `y = u c' v` always has `u`
//! equal to the maximal common prefix and `v` the maximal common suffix.
//! Detection therefore strips both affixes and pattern-matches the cores.

use std::collections::BTreeSet;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::words::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ConfusabilityKind {
    TypeA,
    TypeB,
}

impl fmt::Display for ConfusabilityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConfusabilityKind::TypeA => "TypeA",
            ConfusabilityKind::TypeB => "TypeB",
        })
    }
}

/// A canonical decomposition `x = u c v`, `y = u c' v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfusabilityWitness {
    pub kind: ConfusabilityKind,
    pub m: usize,
    pub prefix_len: usize,
    pub core_len: usize,
    x: Word,
    y: Word,
}

impl ConfusabilityWitness {
    pub fn x(&self) -> Word {
        self.x
    }

    pub fn y(&self) -> Word {
        self.y
    }

    pub fn suffix_len(&self) -> usize {
        self.x.len() - self.prefix_len - self.core_len
    }

    pub fn u(&self) -> String {
        self.x.substring(0, self.prefix_len)
    }

    pub fn c(&self) -> String {
        self.x.substring(self.prefix_len, self.core_len)
    }

    pub fn c_prime(&self) -> String {
        self.y.substring(self.prefix_len, self.core_len)
    }

    pub fn v(&self) -> String {
        self.x.substring(self.prefix_len + self.core_len, self.suffix_len())
    }

    /// `(u c v, u c' v)` rebuilt from the parts.
    pub fn recombine(&self) -> (String, String) {
        let (u, v) = (self.u(), self.v());
        (
            format!("{u}{}{v}", self.c()),
            format!("{u}{}{v}", self.c_prime()),
        )
    }
}

impl Serialize for ConfusabilityWitness {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("ConfusabilityWitness", 6)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("u", &self.u())?;
        st.serialize_field("c", &self.c())?;
        st.serialize_field("c_prime", &self.c_prime())?;
        st.serialize_field("v", &self.v())?;
        st.end()
    }
}

/// Common affix split of two distinct equal-length words: returns the
/// differing core as `(prefix_len, core_len, x_core, y_core)` with the cores
/// right-aligned in a `u128`.
fn split_core(x: &Word, y: &Word) -> Result<(usize, usize, u128, u128)> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let diff = x.packed() ^ y.packed();
    if diff == 0 {
        return Err(Error::IdenticalWords);
    }
    let n = x.len();
    let hi = 127 - diff.leading_zeros() as usize;
    let lo = diff.trailing_zeros() as usize;
    let core_len = hi - lo + 1;
    let prefix_len = n - 1 - hi;
    let mask = if core_len >= 128 {
        u128::MAX
    } else {
        (1u128 << core_len) - 1
    };
    Ok((
        prefix_len,
        core_len,
        (x.packed() >> lo) & mask,
        (y.packed() >> lo) & mask,
    ))
}

/// `(10)^m` packed right-aligned.
fn alternating_10(m: usize) -> u128 {
    (0..m).fold(0u128, |acc, _| (acc << 2) | 0b10)
}

fn ones(k: usize) -> u128 {
    if k >= 128 {
        u128::MAX
    } else {
        (1u128 << k) - 1
    }
}

/// Type-A: `{c, c'} = {(10)^m, (01)^m}`, `m >= 1`.
pub fn type_a_confusable(x: &Word, y: &Word) -> Result<Option<ConfusabilityWitness>> {
    let (prefix_len, core_len, cx, cy) = split_core(x, y)?;
    if core_len % 2 != 0 {
        return Ok(None);
    }
    let m = core_len / 2;
    let a = alternating_10(m);
    let b = a >> 1;
    let matches = (cx == a && cy == b) || (cx == b && cy == a);
    Ok(matches.then_some(ConfusabilityWitness {
        kind: ConfusabilityKind::TypeA,
        m,
        prefix_len,
        core_len,
        x: *x,
        y: *y,
    }))
}

/// Type-B: `{c, c'} = {0 1^m, 1^m 0}` or `{1 0^m, 0^m 1}`, reported for any
/// `m >= 1`. At `m = 1` this coincides with Type-A `m = 1`; callers that
/// follow the `m >= 2` convention filter on [`ConfusabilityWitness::m`] or use
/// [`type_b_confusable_strict`].
pub fn type_b_confusable(x: &Word, y: &Word) -> Result<Option<ConfusabilityWitness>> {
    let (prefix_len, core_len, cx, cy) = split_core(x, y)?;
    if core_len < 2 {
        return Ok(None);
    }
    let m = core_len - 1;
    let lead_zero = ones(m); // 0 1^m
    let trail_zero = ones(m) << 1; // 1^m 0
    let lead_one = 1u128 << m; // 1 0^m
    let trail_one = 1u128; // 0^m 1
    let pair = |p: u128, q: u128| (cx == p && cy == q) || (cx == q && cy == p);
    let matches = pair(lead_zero, trail_zero) || pair(lead_one, trail_one);
    Ok(matches.then_some(ConfusabilityWitness {
        kind: ConfusabilityKind::TypeB,
        m,
        prefix_len,
        core_len,
        x: *x,
        y: *y,
    }))
}

/// Type-B with the `m >= 2` restriction.
pub fn type_b_confusable_strict(x: &Word, y: &Word) -> Result<Option<ConfusabilityWitness>> {
    Ok(type_b_confusable(x, y)?.filter(|w| w.m >= 2))
}

/// Intersection sizes consistent with the structural characterization. A
/// singleton is an exact prediction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prediction(pub BTreeSet<usize>);

impl Prediction {
    fn exact(v: usize) -> Self {
        Prediction(BTreeSet::from([v]))
    }

    fn of(values: &[usize]) -> Self {
        Prediction(values.iter().copied().collect())
    }

    pub fn is_exact(&self) -> bool {
        self.0.len() == 1
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn values(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    fn shifted(&self, scale: usize, offset: usize) -> Self {
        Prediction(self.0.iter().map(|v| scale * v + offset).collect())
    }
}

/// Predicts `|B(x) ∩ B(y)|` for distinct balanced words from Hamming distance
/// and confusability alone.
///
/// Deletion and insertion intersections are equal and take the value 2 for
/// Type-A pairs, 1 for Type-B pairs at distance 2 (`m >= 2`), 0 for other
/// distance-2 pairs, and 0 or 1 otherwise. Substitution contributes 2 at
/// distance 2 and nothing beyond. The union channels add these up since their
/// parts live at different lengths.
pub fn predict_intersection(ch: Channel, x: &Word, y: &Word) -> Result<Prediction> {
    for w in [x, y] {
        if !w.is_balanced() {
            return Err(Error::Unbalanced(*w));
        }
    }
    let dist = x.hamming_distance(y)?;
    let type_a = type_a_confusable(x, y)?.is_some();
    let type_b = type_b_confusable_strict(x, y)?.is_some();
    let single = if type_a {
        Prediction::exact(2)
    } else if dist == 2 {
        Prediction::exact(usize::from(type_b))
    } else {
        Prediction::of(&[0, 1])
    };
    let subst = if dist == 2 { 2 } else { 0 };
    Ok(match ch {
        Channel::S => Prediction::exact(subst),
        Channel::D | Channel::I => single,
        Channel::DI => single.shifted(2, 0),
        Channel::SD | Channel::SI => single.shifted(1, subst),
        Channel::Edit => single.shifted(2, subst),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn type_a_examples() {
        let wit = type_a_confusable(&w("11101000"), &w("11010100"))
            .unwrap()
            .unwrap();
        assert_eq!(wit.kind, ConfusabilityKind::TypeA);
        assert_eq!((wit.m, wit.u(), wit.v()), (2, "11".into(), "00".into()));
        assert_eq!((wit.c(), wit.c_prime()), ("1010".into(), "0101".into()));
        assert_eq!(type_a_confusable(&w("1100"), &w("0011")).unwrap(), None);
        let wit = type_a_confusable(&w("10"), &w("01")).unwrap().unwrap();
        assert_eq!((wit.m, wit.u(), wit.v()), (1, String::new(), String::new()));
    }

    #[test]
    fn type_b_examples() {
        let wit = type_b_confusable(&w("111000"), &w("101100"))
            .unwrap()
            .unwrap();
        assert_eq!(wit.kind, ConfusabilityKind::TypeB);
        // |u| + |c| + |v| = 6 with |c| = 3 forces v = 00
        assert_eq!((wit.m, wit.u(), wit.v()), (2, "1".into(), "00".into()));
        assert_eq!((wit.c(), wit.c_prime()), ("110".into(), "011".into()));
        let wit = type_b_confusable(&w("10"), &w("01")).unwrap().unwrap();
        assert_eq!(wit.m, 1);
        assert_eq!(type_b_confusable_strict(&w("10"), &w("01")).unwrap(), None);
        // both words have weight 3; the cores 10/01 match only with m = 1
        let wit = type_b_confusable(&w("110010"), &w("110001")).unwrap().unwrap();
        assert_eq!((wit.m, wit.u(), wit.v()), (1, "1100".into(), String::new()));
        assert_eq!(
            type_b_confusable_strict(&w("110010"), &w("110001")).unwrap(),
            None
        );
    }

    #[test]
    fn identical_or_mismatched_words_are_rejected() {
        assert_eq!(
            type_a_confusable(&w("1010"), &w("1010")),
            Err(Error::IdenticalWords)
        );
        assert_eq!(
            type_b_confusable(&w("1010"), &w("1010")),
            Err(Error::IdenticalWords)
        );
        assert!(type_a_confusable(&w("10"), &w("1001")).is_err());
    }

    #[test]
    fn witness_recombines_and_serializes() {
        let wit = type_a_confusable(&w("11101000"), &w("11010100"))
            .unwrap()
            .unwrap();
        assert_eq!(
            wit.recombine(),
            ("11101000".to_string(), "11010100".to_string())
        );
        let json = serde_json::to_value(wit).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"kind":"TypeA","m":2,"u":"11","c":"1010","c_prime":"0101","v":"00"})
        );
    }

    #[test]
    fn prediction_examples() {
        // distance 4, not Type-A
        let p = predict_intersection(Channel::S, &w("11110000"), &w("00111100")).unwrap();
        assert_eq!(p, Prediction::exact(0));
        // Type-A with m = 1
        let p = predict_intersection(Channel::SD, &w("1100"), &w("1010")).unwrap();
        assert_eq!(p, Prediction::exact(4));
        // Type-B at distance 2
        let p = predict_intersection(Channel::Edit, &w("111000"), &w("101100")).unwrap();
        assert_eq!(p, Prediction::exact(4));
        assert!(matches!(
            predict_intersection(Channel::D, &w("1110"), &w("1101")),
            Err(Error::Unbalanced(_))
        ));
    }
}
