//! Closed-form bounds and the run-count machinery behind the deletion-code
//! upper bound, evaluated in exact big-integer and rational arithmetic.
//! Conversion to floating point happens only for display.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::channels::{ball_members, Channel};
use crate::error::{Error, Result};
use crate::words::{balanced_words, check_budget, check_even, FixedWeightWords, Word};

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binom(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn central_binomial(n: usize) -> BigUint {
    binom(n as i64, n as i64 / 2)
}

fn rational(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn rational_int(v: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Floating-point view of an exact rational.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
    })
}

fn check_min(n: usize, min: usize) -> Result<()> {
    check_even(n)?;
    if n < min {
        return Err(Error::Parameter(format!("n = {n} must be at least {min}")));
    }
    Ok(())
}

/// `2ⁿ/√(2n) <= C(n, n/2) <= 2ⁿ/√n`, with the comparisons done on squares.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralBinomialBounds {
    pub n: usize,
    pub exact: BigUint,
    pub lower: f64,
    pub upper: f64,
    pub brackets: bool,
    /// Neither inequality is tight.
    pub strict: bool,
}

pub fn central_binomial_bounds(n: usize) -> Result<CentralBinomialBounds> {
    check_even(n)?;
    let exact = central_binomial(n);
    let square = &exact * &exact;
    let four_n = BigUint::one() << (2 * n);
    let lower_sq = &square * BigUint::from(2 * n); // C² · 2n  vs 4ⁿ
    let upper_sq = &square * BigUint::from(n); // C² · n  vs 4ⁿ
    let two_n = 2f64.powi(n as i32);
    Ok(CentralBinomialBounds {
        n,
        brackets: lower_sq >= four_n && upper_sq <= four_n,
        strict: lower_sq > four_n && upper_sq < four_n,
        exact,
        lower: two_n / (2.0 * n as f64).sqrt(),
        upper: two_n / (n as f64).sqrt(),
    })
}

/// Bounds on the largest balanced code correcting one substitution:
/// `C(n,n/2)/n` and `C(n,n/2−1)/C(n/2,n/2−1)`.
pub fn as_bounds(n: usize) -> Result<(BigRational, BigRational)> {
    check_min(n, 4)?;
    let h = (n / 2) as i64;
    Ok((
        rational(central_binomial(n), BigUint::from(n)),
        rational(binom(n as i64, h - 1), binom(h, h - 1)),
    ))
}

/// Trivial deletion-code lower bound `C(n,n/2)/(n+1)`.
pub fn ad_lower_bound(n: usize) -> Result<BigRational> {
    check_even(n)?;
    Ok(rational(central_binomial(n), BigUint::from(n + 1)))
}

/// Deletion-code upper bound `2(C(n,n/2) − 2)/(n − 2)`.
pub fn ad_upper_bound(n: usize) -> Result<BigRational> {
    check_even(n)?;
    if n == 2 {
        return Err(Error::Parameter(
            "the deletion-code upper bound divides by n - 2".into(),
        ));
    }
    let c = BigInt::from(central_binomial(n));
    Ok(BigRational::new(
        (c - BigInt::from(2)) * BigInt::from(2),
        BigInt::from(n - 2),
    ))
}

/// The two word spaces whose run statistics enter the deletion bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    /// `U_n`
    Balanced,
    /// `V_{n−1}`: length `n − 1`, weight `n/2` or `n/2 − 1`.
    NearBalanced,
}

fn half_ceil(i: i64) -> i64 {
    (i + 1) / 2
}

fn half_floor(i: i64) -> i64 {
    i / 2
}

/// `C(n/2−1, ⌈i/2⌉−1) · C(n/2−1, ⌊i/2⌋−1)`
fn balanced_run_term(n: usize, i: i64) -> BigUint {
    let h = (n / 2) as i64;
    binom(h - 1, half_ceil(i) - 1) * binom(h - 1, half_floor(i) - 1)
}

/// Number of words with exactly `i` runs, from the closed-form count.
pub fn run_count_formula(n: usize, space: Space, i: usize) -> BigUint {
    let h = (n / 2) as i64;
    let i = i as i64;
    match space {
        Space::Balanced => balanced_run_term(n, i) * 2u32,
        Space::NearBalanced => {
            let a = binom(h - 1, half_ceil(i) - 1) * binom(h - 2, half_floor(i) - 1);
            let b = binom(h - 1, half_floor(i) - 1) * binom(h - 2, half_ceil(i) - 1);
            (a + b) * 2u32
        }
    }
}

fn space_len(n: usize, space: Space) -> usize {
    match space {
        Space::Balanced => n,
        Space::NearBalanced => n - 1,
    }
}

/// Run-count distribution by formula; zero counts are omitted.
pub fn run_distribution(n: usize, space: Space) -> Result<BTreeMap<usize, BigUint>> {
    check_min(n, 4)?;
    Ok((1..=space_len(n, space))
        .map(|i| (i, run_count_formula(n, space, i)))
        .filter(|(_, c)| !c.is_zero())
        .collect())
}

/// Every word of the space, lexicographically within each weight.
pub fn space_words(n: usize, space: Space, budget: u128) -> Result<Vec<Word>> {
    check_min(n, 4)?;
    check_budget(n, budget)?;
    Ok(match space {
        Space::Balanced => balanced_words(n, budget)?,
        Space::NearBalanced => FixedWeightWords::new(n - 1, n / 2 - 1)?
            .chain(FixedWeightWords::new(n - 1, n / 2)?)
            .collect(),
    })
}

/// Run-count histogram by enumeration.
pub fn run_histogram(n: usize, space: Space, budget: u128) -> Result<BTreeMap<usize, BigUint>> {
    let mut hist: BTreeMap<usize, BigUint> = BTreeMap::new();
    for w in space_words(n, space, budget)? {
        *hist.entry(w.run_count()).or_default() += 1u32;
    }
    Ok(hist)
}

/// `Σ_{x ∈ V_{n−1}} 1/r(x)`, the total weight of the fractional transversal
/// `w(x) = 1/r(x)`, computed by enumeration and by the run-count formula.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransversalWeight {
    pub n: usize,
    pub by_enumeration: BigRational,
    pub by_formula: BigRational,
    /// Relative disagreement at most `1e-9`.
    pub agree: bool,
}

impl TransversalWeight {
    pub fn value(&self) -> &BigRational {
        &self.by_formula
    }
}

fn relative_agreement(a: &BigRational, b: &BigRational) -> bool {
    let diff = (a - b).abs();
    diff * int(1_000_000_000) <= b.abs()
}

pub fn fractional_transversal_weight(n: usize, budget: u128) -> Result<TransversalWeight> {
    let by_enumeration = space_words(n, Space::NearBalanced, budget)?
        .iter()
        .fold(BigRational::zero(), |acc, x| {
            acc + BigRational::new(BigInt::one(), BigInt::from(x.run_count()))
        });
    let by_formula = transversal_weight_from_formula(n)?;
    Ok(TransversalWeight {
        n,
        agree: relative_agreement(&by_enumeration, &by_formula),
        by_enumeration,
        by_formula,
    })
}

/// `Σ_i count_V(i)/i` over the near-balanced run distribution.
pub fn transversal_weight_from_formula(n: usize) -> Result<BigRational> {
    Ok(run_distribution(n, Space::NearBalanced)?
        .into_iter()
        .fold(BigRational::zero(), |acc, (i, c)| {
            acc + rational(c, BigUint::from(i))
        }))
}

/// `4/(n−2) · Σ_{i=1}^{n−1} C(n/2−1,⌈i/2⌉−1) C(n/2−1,⌊i/2⌋−1) (n−i)/i`, the
/// rewritten form of the transversal weight.
pub fn transversal_weight_rewritten(n: usize) -> Result<BigRational> {
    check_min(n, 4)?;
    let (lhs, _) = inequality_sides(n);
    Ok(lhs * BigRational::new(BigInt::from(4), BigInt::from(n - 2)))
}

/// Checks `w(x) = 1/r(x)` is a fractional transversal of the deletion-ball
/// hypergraph: every `y ∈ U_n` has `Σ_{x ∈ B^D(y)} 1/r(x) >= 1`.
pub fn transversal_is_feasible(n: usize, budget: u128) -> Result<bool> {
    for y in space_words(n, Space::Balanced, budget)? {
        let total = ball_members(Channel::D, &y)?
            .iter()
            .fold(BigRational::zero(), |acc, x| {
                acc + BigRational::new(BigInt::one(), BigInt::from(x.run_count()))
            });
        if total < BigRational::one() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn inequality_sides(n: usize) -> (BigRational, BigRational) {
    let mut lhs = BigRational::zero();
    let mut rhs = BigRational::zero();
    for i in 1..n as i64 {
        let term = rational_int(balanced_run_term(n, i));
        lhs += &term * BigRational::new(BigInt::from(n as i64 - i), BigInt::from(i));
        rhs += term;
    }
    (lhs, rhs)
}

/// Both sides of the run-count inequality
/// `Σ T_i (n−i)/i <= Σ T_i` with `T_i = C(n/2−1,⌈i/2⌉−1) C(n/2−1,⌊i/2⌋−1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub n: usize,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub holds: bool,
}

pub fn estimate_inequality(n: usize) -> Result<InequalityCheck> {
    check_min(n, 4)?;
    let (lhs, rhs) = inequality_sides(n);
    Ok(InequalityCheck {
        n,
        holds: lhs <= rhs,
        lhs,
        rhs,
    })
}

pub fn estimate_inequality_holds(n: usize) -> Result<bool> {
    Ok(estimate_inequality(n)?.holds)
}

/// Lower bound on `|R₂ᵇ(n, l, m)|`; negative values are clamped to zero and
/// flagged as vacuous.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicityBound {
    pub n: usize,
    pub l: usize,
    pub m: usize,
    pub raw: BigRational,
    pub clamped: BigRational,
    pub vacuous: bool,
}

/// `C(n,n/2)(1 − n/2^m)` for `l = 1`, `C(n,n/2)(1 − n/2^⌈(m−1)/2⌉)` for `l = 2`.
pub fn r2b_lower_bound(n: usize, l: usize, m: usize) -> Result<PeriodicityBound> {
    check_even(n)?;
    if !(1..=2).contains(&l) || !(l < m && m <= n) {
        return Err(Error::Parameter(format!(
            "need l in {{1,2}} and l < m <= n, got l={l}, m={m}, n={n}"
        )));
    }
    let exponent = if l == 1 { m } else { (m - 1).div_ceil(2) };
    let factor = BigRational::one()
        - BigRational::new(BigInt::from(n), BigInt::one() << exponent);
    let raw = rational_int(central_binomial(n)) * factor;
    let vacuous = raw.is_negative();
    Ok(PeriodicityBound {
        n,
        l,
        m,
        clamped: if vacuous { BigRational::zero() } else { raw.clone() },
        raw,
        vacuous,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn central_binomial_examples() {
        let b = central_binomial_bounds(2).unwrap();
        assert_eq!(b.exact, BigUint::from(2u32));
        assert!((b.lower - 2.0).abs() < 1e-12 && (b.upper - 2.828_427_124_746).abs() < 1e-9);
        assert!(b.brackets && !b.strict);
        let b = central_binomial_bounds(8).unwrap();
        assert!((b.lower - 64.0).abs() < 1e-12);
        assert!((b.upper - 90.509_667_991_878).abs() < 1e-9);
        assert!(b.strict);
    }

    #[test]
    fn as_bounds_examples() {
        assert_eq!(as_bounds(8).unwrap(), (q(35, 4), q(14, 1)));
        assert_eq!(as_bounds(4).unwrap(), (q(3, 2), q(2, 1)));
        assert!(as_bounds(2).is_err());
    }

    #[test]
    fn ad_bound_examples() {
        assert_eq!(ad_upper_bound(8).unwrap(), q(68, 3));
        assert_eq!(ad_upper_bound(4).unwrap(), q(4, 1));
        assert!(ad_upper_bound(2).is_err());
        assert_eq!(ad_lower_bound(8).unwrap(), q(70, 9));
    }

    #[test]
    fn run_distribution_small_cases() {
        let u4 = run_distribution(4, Space::Balanced).unwrap();
        assert_eq!(u4.get(&2), Some(&BigUint::from(2u32)));
        assert_eq!(u4.get(&4), Some(&BigUint::from(2u32)));
        let total: BigUint = run_distribution(6, Space::Balanced).unwrap().values().sum();
        assert_eq!(total, BigUint::from(20u32));
        assert_eq!(
            run_distribution(4, Space::NearBalanced).unwrap(),
            run_histogram(4, Space::NearBalanced, 1000).unwrap()
        );
    }

    #[test]
    fn transversal_weight_n4() {
        // V_3 = {001, 010, 100, 011, 101, 110}: runs 2,3,2,2,3,2.
        let t = fractional_transversal_weight(4, 1000).unwrap();
        assert_eq!(t.by_enumeration, q(8, 3));
        assert!(t.agree);
        assert!(transversal_is_feasible(4, 1000).unwrap());
    }

    #[test]
    fn inequality_small_n() {
        let c = estimate_inequality(4).unwrap();
        assert!(c.holds);
        // i = 2 contributes 1·1, i = 3 contributes 1·(1/3)
        assert_eq!(c.lhs, q(4, 3));
        assert_eq!(c.rhs, q(2, 1));
        assert_eq!(transversal_weight_rewritten(4).unwrap(), q(8, 3));
    }

    #[test]
    fn r2b_bound_examples() {
        let b = r2b_lower_bound(6, 1, 2).unwrap();
        assert_eq!(b.raw, q(-10, 1));
        assert!(b.vacuous);
        assert_eq!(b.clamped, q(0, 1));
        let b = r2b_lower_bound(14, 1, 5).unwrap();
        assert!(b.raw >= rational(central_binomial(14), BigUint::from(2u32)));
        assert!(r2b_lower_bound(6, 2, 2).is_err());
        // l = 2 uses the exponent ⌈(m−1)/2⌉
        let b = r2b_lower_bound(12, 2, 11).unwrap();
        assert_eq!(b.raw, rational_int(central_binomial(12)) * q(20, 32));
    }
}
