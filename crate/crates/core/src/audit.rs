//! Exhaustive audit of the intersection characterizations over `U_n`.
//!
//! Every distinct pair is run through the brute-force ball intersections of
//! all seven channels, and each clause is checked against the structural
//! predicates from [`crate::confusability`].

use serde::Serialize;

use crate::channels::{ball_members, sorted_intersection_size, Channel};
use crate::confusability::{
    predict_intersection, type_a_confusable, type_b_confusable, ConfusabilityKind,
};
use crate::error::Result;
use crate::exec::Exec;
use crate::words::{balanced_words, Word};

/// A clause of the characterization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    SubstitutionByDistance,
    DeletionEqualsInsertion,
    DeletionAtMostTwo,
    DeletionTwoIffTypeA,
    DeletionOneIffTypeB,
    DeletionInsertionValues,
    DeletionInsertionFourIffTypeA,
    SubstDeletionEqualsSubstInsertion,
    SubstDeletionDistanceTwo,
    SubstDeletionFar,
    EditValues,
    EditDistanceTwo,
    EditFar,
    TypeADistance,
    PredictionContainsOracle,
}

impl Clause {
    pub const ALL: [Clause; 15] = [
        Clause::SubstitutionByDistance,
        Clause::DeletionEqualsInsertion,
        Clause::DeletionAtMostTwo,
        Clause::DeletionTwoIffTypeA,
        Clause::DeletionOneIffTypeB,
        Clause::DeletionInsertionValues,
        Clause::DeletionInsertionFourIffTypeA,
        Clause::SubstDeletionEqualsSubstInsertion,
        Clause::SubstDeletionDistanceTwo,
        Clause::SubstDeletionFar,
        Clause::EditValues,
        Clause::EditDistanceTwo,
        Clause::EditFar,
        Clause::TypeADistance,
        Clause::PredictionContainsOracle,
    ];

    pub fn description(self) -> &'static str {
        match self {
            Clause::SubstitutionByDistance => "S: |∩| = 2 if d_H = 2, 0 if d_H >= 4",
            Clause::DeletionEqualsInsertion => "D/I: |D∩| = |I∩|",
            Clause::DeletionAtMostTwo => "D/I: |∩| <= 2",
            Clause::DeletionTwoIffTypeA => "D/I: |∩| = 2 iff Type-A",
            Clause::DeletionOneIffTypeB => "D/I: d_H = 2 => (|∩| = 1 iff Type-B, m >= 2)",
            Clause::DeletionInsertionValues => "DI: |∩| in {0,2,4}",
            Clause::DeletionInsertionFourIffTypeA => "DI: |∩| = 4 iff Type-A",
            Clause::SubstDeletionEqualsSubstInsertion => "SD/SI: |SD∩| = |SI∩|",
            Clause::SubstDeletionDistanceTwo => {
                "SD/SI: d_H = 2 => |∩| in {2,3,4}, 4 iff Type-A m=1, 3 iff Type-B"
            }
            Clause::SubstDeletionFar => "SD/SI: d_H >= 4 => |∩| <= 2, 2 iff Type-A m>=2",
            Clause::EditValues => "EDIT: |∩| in {0,2,4,6}",
            Clause::EditDistanceTwo => {
                "EDIT: d_H = 2 => |∩| in {2,4,6}, 6 iff Type-A m=1, 4 iff Type-B"
            }
            Clause::EditFar => "EDIT: d_H >= 4 => |∩| in {0,2,4}, 4 iff Type-A m>=2",
            Clause::TypeADistance => "Type-A with m => d_H = 2m",
            Clause::PredictionContainsOracle => "predicted sizes contain the oracle value",
        }
    }
}

/// Outcome of one clause over all pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClauseResult {
    pub clause: Clause,
    pub description: &'static str,
    /// Pairs the clause's premise applies to.
    pub checked: u64,
    pub violations: u64,
    /// First violating pair in lexicographic order.
    pub first_violation: Option<(Word, Word)>,
}

impl ClauseResult {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Full audit of `U_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub n: usize,
    pub pairs: u64,
    pub clauses: Vec<ClauseResult>,
    /// Pairs with `d_H >= 4`, not Type-A, and `|D∩| = 1`: the residual case
    /// the characterization leaves open.
    pub residual_deletion_one: u64,
    /// Pairs where clause `DeletionOneIffTypeB` would fail if Type-B also
    /// admitted `m = 1`.
    pub loose_type_b_conflicts: u64,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(ClauseResult::passed)
    }

    pub fn clause(&self, c: Clause) -> &ClauseResult {
        self.clauses
            .iter()
            .find(|r| r.clause == c)
            .expect("every clause is reported")
    }
}

#[derive(Debug, Clone, Default)]
struct Tally {
    checked: [u64; Clause::ALL.len()],
    violations: [u64; Clause::ALL.len()],
    first: [Option<(Word, Word)>; Clause::ALL.len()],
    pairs: u64,
    residual: u64,
    loose: u64,
}

impl Tally {
    fn record(&mut self, c: Clause, x: &Word, y: &Word, holds: bool) {
        let i = c as usize;
        self.checked[i] += 1;
        if !holds {
            self.violations[i] += 1;
            self.first[i].get_or_insert((*x, *y));
        }
    }

    /// Folds `later` (a later row block) into `self`.
    fn merge(&mut self, later: Tally) {
        for i in 0..Clause::ALL.len() {
            self.checked[i] += later.checked[i];
            self.violations[i] += later.violations[i];
            if self.first[i].is_none() {
                self.first[i] = later.first[i];
            }
        }
        self.pairs += later.pairs;
        self.residual += later.residual;
        self.loose += later.loose;
    }
}

type Balls = [Vec<Word>; 7];

fn balls_of(x: &Word) -> Result<Balls> {
    let mut out: Balls = Default::default();
    for (slot, ch) in out.iter_mut().zip(Channel::ALL) {
        *slot = ball_members(ch, x)?;
    }
    Ok(out)
}

fn check_pair(x: &Word, y: &Word, bx: &Balls, by: &Balls, t: &mut Tally) -> Result<()> {
    let size = |ch: Channel| {
        let i = ch as usize;
        sorted_intersection_size(&bx[i], &by[i])
    };
    let [s, d, i, di, sd, si, edit] = Channel::ALL.map(size);
    let dist = x.hamming_distance(y)?;
    let type_a = type_a_confusable(x, y)?;
    let type_b_any = type_b_confusable(x, y)?;
    let type_b = type_b_any.filter(|w| w.m >= 2).is_some();
    let a_m = type_a.map(|w| w.m);
    let is_a = a_m.is_some();
    use Clause::*;

    t.pairs += 1;
    t.record(
        SubstitutionByDistance,
        x,
        y,
        s == if dist == 2 { 2 } else { 0 },
    );
    t.record(DeletionEqualsInsertion, x, y, d == i);
    t.record(DeletionAtMostTwo, x, y, d <= 2 && i <= 2);
    t.record(DeletionTwoIffTypeA, x, y, (d == 2) == is_a && (i == 2) == is_a);
    if dist == 2 {
        t.record(DeletionOneIffTypeB, x, y, (d == 1) == type_b);
        if (d == 1) != type_b_any.is_some() {
            t.loose += 1;
        }
    }
    t.record(DeletionInsertionValues, x, y, matches!(di, 0 | 2 | 4));
    t.record(DeletionInsertionFourIffTypeA, x, y, (di == 4) == is_a);
    t.record(SubstDeletionEqualsSubstInsertion, x, y, sd == si);
    if dist == 2 {
        let ok = (2..=4).contains(&sd)
            && (sd == 4) == (a_m == Some(1))
            && (sd == 3) == type_b;
        t.record(SubstDeletionDistanceTwo, x, y, ok);
        let ok = matches!(edit, 2 | 4 | 6)
            && (edit == 6) == (a_m == Some(1))
            && (edit == 4) == type_b;
        t.record(EditDistanceTwo, x, y, ok);
    } else {
        let far_a = a_m.is_some_and(|m| m >= 2);
        t.record(SubstDeletionFar, x, y, sd <= 2 && (sd == 2) == far_a);
        t.record(
            EditFar,
            x,
            y,
            matches!(edit, 0 | 2 | 4) && (edit == 4) == far_a,
        );
        if !is_a && d == 1 {
            t.residual += 1;
        }
    }
    t.record(EditValues, x, y, matches!(edit, 0 | 2 | 4 | 6));
    if let Some(m) = a_m {
        t.record(TypeADistance, x, y, dist == 2 * m);
    }
    let oracle = [s, d, i, di, sd, si, edit];
    let mut predicted = true;
    for (ch, value) in Channel::ALL.into_iter().zip(oracle) {
        predicted &= predict_intersection(ch, x, y)?.contains(value);
    }
    t.record(PredictionContainsOracle, x, y, predicted);
    debug_assert!(type_a.is_none_or(|w| w.kind == ConfusabilityKind::TypeA));
    Ok(())
}

/// Runs every clause over all distinct pairs of `U_n`.
pub fn verify_propositions(n: usize, budget: u128, exec: Exec) -> Result<AuditReport> {
    let words = balanced_words(n, budget)?;
    let balls = exec
        .map(&words, balls_of)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let rows = exec.map_range(words.len(), |a| -> Result<Tally> {
        let mut t = Tally::default();
        for b in a + 1..words.len() {
            check_pair(&words[a], &words[b], &balls[a], &balls[b], &mut t)?;
        }
        Ok(t)
    });
    let mut total = Tally::default();
    for row in rows {
        total.merge(row?);
    }
    let clauses = Clause::ALL
        .iter()
        .enumerate()
        .map(|(k, &clause)| ClauseResult {
            clause,
            description: clause.description(),
            checked: total.checked[k],
            violations: total.violations[k],
            first_violation: total.first[k],
        })
        .collect();
    Ok(AuditReport {
        n,
        pairs: total.pairs,
        clauses,
        residual_deletion_one: total.residual,
        loose_type_b_conflicts: total.loose,
    })
}
