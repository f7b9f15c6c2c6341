//! Per-`n` bound rows and redundancy tables for the reporting layer.
//!
//! Exact quantities stay rational until they are rendered. Rendering uses 12
//! significant digits; JSON additionally carries the exact numerator and
//! denominator.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::bounds::{
    ad_lower_bound, ad_upper_bound, as_bounds, central_binomial, central_binomial_bounds,
    r2b_lower_bound, transversal_weight_from_formula,
};
use crate::channels::Channel;
use crate::constructions::{
    best_residue_with, default_period_bound_1, default_period_bound_2, delta, redundancy,
    residue_class_sizes, Code, Construction, Family,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::verifier::{certify_with, exact_max_code_with, greedy_code_with};
use crate::channels::CoverageOptions;
use crate::words::{balanced_count, check_even};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Lays out `digits` (a `SIGNIFICANT_DIGITS`-long mantissa) with decimal
/// exponent `exp`.
fn layout(negative: bool, digits: &str, exp: i64) -> String {
    let sign = if negative { "-" } else { "" };
    let len = digits.len() as i64;
    if (0..21).contains(&exp) {
        let int_len = exp + 1;
        if int_len >= len {
            format!("{sign}{digits}{}", "0".repeat((int_len - len) as usize))
        } else {
            let (a, b) = digits.split_at(int_len as usize);
            format!("{sign}{a}.{b}")
        }
    } else if (-7..0).contains(&exp) {
        format!("{sign}0.{}{digits}", "0".repeat((-exp - 1) as usize))
    } else {
        let (a, b) = digits.split_at(1);
        format!("{sign}{a}.{b}e{exp}")
    }
}

/// Exact rational rendered with 12 significant digits, rounding half up.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let abs = r.abs();
    let ten = BigInt::from(10);
    let pow = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(num_traits::pow(ten.clone(), e as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-e) as usize))
        }
    };
    let mut exp = abs.numer().to_string().len() as i64 - abs.denom().to_string().len() as i64;
    while pow(exp) > abs {
        exp -= 1;
    }
    while pow(exp + 1) <= abs {
        exp += 1;
    }
    let shift = SIGNIFICANT_DIGITS as i64 - 1 - exp;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut scaled = (abs * pow(shift) + half).floor().to_integer();
    if scaled == num_traits::pow(ten.clone(), SIGNIFICANT_DIGITS) {
        scaled /= 10;
        exp += 1;
    }
    layout(r.is_negative(), &scaled.to_string(), exp)
}

/// Floating-point value rendered with 12 significant digits.
pub fn format_f64(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v.abs());
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    layout(v < 0.0, &mantissa.replace('.', ""), exp.parse().expect("exponent"))
}

fn rounded(s: &str) -> f64 {
    s.parse().unwrap_or(f64::NAN)
}

/// An exact rational with its 12-significant-digit rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct Exact(pub BigRational);

impl Exact {
    pub fn from_int(v: BigUint) -> Self {
        Exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn decimal(&self) -> String {
        format_rational(&self.0)
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Exact", 3)?;
        st.serialize_field("value", &rounded(&self.decimal()))?;
        st.serialize_field("num", &self.0.numer().to_string())?;
        st.serialize_field("den", &self.0.denom().to_string())?;
        st.end()
    }
}

/// An irrational quantity kept as `f64`, serialized at 12 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Approx(pub f64);

impl Approx {
    pub fn decimal(&self) -> String {
        format_f64(self.0)
    }
}

impl Serialize for Approx {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_f64(rounded(&self.decimal()))
    }
}

fn opt_exact(v: Option<&Exact>) -> String {
    v.map(Exact::decimal).unwrap_or_default()
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Lower bound and exact size of one periodicity-constrained set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicityRow {
    pub l: usize,
    pub m: usize,
    /// Unclamped bound; may be negative.
    pub bound: Exact,
    pub vacuous: bool,
    pub size: usize,
}

/// Exact extremal size for the requested channel and read count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalEntry {
    pub channel: Channel,
    #[serde(rename = "N")]
    pub reads: usize,
    pub size: usize,
}

/// Closed-form bounds for one `n`, with exact values where enumerable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsRow {
    pub n: usize,
    /// `C(n, n/2)`
    pub binomial: String,
    pub binom_lower: Approx,
    pub binom_upper: Approx,
    pub sandwich_strict: bool,
    pub delta: Approx,
    pub as_lower: Option<Exact>,
    pub as_upper: Option<Exact>,
    pub ad_lower: Exact,
    pub ad_upper: Option<Exact>,
    /// `max_a |BVT_a(n)|`
    pub bvt_max: usize,
    /// `Σ_{V_{n−1}} 1/r(x)`
    pub transversal_weight: Option<Exact>,
    pub r2b_l1: Option<PeriodicityRow>,
    pub r2b_l2: Option<PeriodicityRow>,
    pub extremal: Option<ExtremalEntry>,
}

/// Knobs for [`bounds_row`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundsOptions {
    /// Channel and `N` for the exact extremal column.
    pub target: Option<(Channel, usize)>,
    /// Largest `|U_n|` for which the exact extremal search runs.
    pub exact_vertex_limit: usize,
    pub budget: u128,
    pub exec: Exec,
}

impl Default for BoundsOptions {
    fn default() -> Self {
        BoundsOptions {
            target: None,
            exact_vertex_limit: 70,
            budget: crate::words::DEFAULT_ENUMERATION_BUDGET,
            exec: Exec::default(),
        }
    }
}

fn periodicity_row(n: usize, l: usize, m: usize, opts: &BoundsOptions) -> Result<Option<PeriodicityRow>> {
    if !(l < m && m <= n) {
        return Ok(None);
    }
    let bound = r2b_lower_bound(n, l, m)?;
    let size = Construction::R2b { n, l, m }
        .build_with(opts.budget, opts.exec)?
        .len();
    Ok(Some(PeriodicityRow {
        l,
        m,
        bound: Exact(bound.raw),
        vacuous: bound.vacuous,
        size,
    }))
}

pub fn bounds_row(n: usize, opts: &BoundsOptions) -> Result<BoundsRow> {
    check_even(n)?;
    let sandwich = central_binomial_bounds(n)?;
    let (as_lower, as_upper) = match as_bounds(n) {
        Ok((lo, hi)) => (Some(Exact(lo)), Some(Exact(hi))),
        Err(_) => (None, None),
    };
    let bvt_max = residue_class_sizes(Family::Bvt, n, None, opts.budget, opts.exec)?
        .into_iter()
        .max()
        .unwrap_or(0);
    let extremal = match opts.target {
        Some((ch, reads)) if balanced_count(n).is_some_and(|c| c <= opts.exact_vertex_limit as u128) => {
            let res = exact_max_code_with(
                n,
                ch,
                reads,
                None,
                opts.exact_vertex_limit,
                opts.budget,
                opts.exec,
            )?;
            Some(ExtremalEntry {
                channel: ch,
                reads,
                size: res.size,
            })
        }
        _ => None,
    };
    Ok(BoundsRow {
        n,
        binomial: central_binomial(n).to_string(),
        binom_lower: Approx(sandwich.lower),
        binom_upper: Approx(sandwich.upper),
        sandwich_strict: sandwich.strict,
        delta: Approx(delta(n)),
        as_lower,
        as_upper,
        ad_lower: Exact(ad_lower_bound(n)?),
        ad_upper: ad_upper_bound(n).ok().map(Exact),
        bvt_max,
        transversal_weight: transversal_weight_from_formula(n).ok().map(Exact),
        r2b_l1: periodicity_row(n, 1, default_period_bound_1(n), opts)?,
        r2b_l2: periodicity_row(n, 2, default_period_bound_2(n), opts)?,
        extremal,
    })
}

impl BoundsRow {
    pub const CSV_HEADER: [&'static str; 20] = [
        "n",
        "binomial",
        "binom_lower",
        "binom_upper",
        "sandwich_strict",
        "delta",
        "as_lower",
        "as_upper",
        "ad_lower",
        "ad_upper",
        "bvt_max",
        "transversal_weight",
        "r2b_l1_m",
        "r2b_l1_bound",
        "r2b_l1_size",
        "r2b_l2_m",
        "r2b_l2_bound",
        "r2b_l2_size",
        "channel_N",
        "exact_max",
    ];

    pub fn csv_record(&self) -> Vec<String> {
        let r2b = |row: &Option<PeriodicityRow>| match row {
            Some(r) => [r.m.to_string(), r.bound.decimal(), r.size.to_string()],
            None => Default::default(),
        };
        let [m1, b1, s1] = r2b(&self.r2b_l1);
        let [m2, b2, s2] = r2b(&self.r2b_l2);
        vec![
            self.n.to_string(),
            self.binomial.clone(),
            self.binom_lower.decimal(),
            self.binom_upper.decimal(),
            self.sandwich_strict.to_string(),
            self.delta.decimal(),
            opt_exact(self.as_lower.as_ref()),
            opt_exact(self.as_upper.as_ref()),
            self.ad_lower.decimal(),
            opt_exact(self.ad_upper.as_ref()),
            self.bvt_max.to_string(),
            opt_exact(self.transversal_weight.as_ref()),
            m1,
            b1,
            s1,
            m2,
            b2,
            s2,
            opt(self.extremal.as_ref().map(|e| format!("{}:{}", e.channel, e.reads))),
            opt(self.extremal.as_ref().map(|e| e.size)),
        ]
    }
}

pub fn bounds_table(ns: &[usize], opts: &BoundsOptions) -> Result<Vec<BoundsRow>> {
    ns.iter().map(|&n| bounds_row(n, opts)).collect()
}

/// The code a redundancy table uses for one `(channel, N)` regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// The whole of `U_n`; redundancy is exactly `Δ`.
    Balanced,
    /// A residue-class construction at its best residue.
    Family(Family),
    /// Lexicographic first-fit code.
    Greedy,
}

/// Leading term of the optimal redundancy in a regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LeadingTerm {
    /// `(3/2) log₂ n`
    ThreeHalvesLog,
    /// `(1/2) log₂ n + log₂ log₂ n`
    HalfLogPlusLogLog,
    /// `Δ + 1`
    DeltaPlusOne,
    /// `Δ`
    Delta,
}

impl LeadingTerm {
    pub fn value(self, n: usize) -> f64 {
        let l = (n as f64).log2();
        match self {
            LeadingTerm::ThreeHalvesLog => 1.5 * l,
            LeadingTerm::HalfLogPlusLogLog => 0.5 * l + l.log2(),
            LeadingTerm::DeltaPlusOne => delta(n) + 1.0,
            LeadingTerm::Delta => delta(n),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            LeadingTerm::ThreeHalvesLog => "1.5*log2(n)",
            LeadingTerm::HalfLogPlusLogLog => "0.5*log2(n)+log2(log2(n))",
            LeadingTerm::DeltaPlusOne => "delta+1",
            LeadingTerm::Delta => "delta",
        }
    }
}

/// Code choice and leading term for a channel and read count.
pub fn regime(ch: Channel, reads: usize) -> Result<(Regime, LeadingTerm)> {
    use Channel::*;
    use LeadingTerm::*;
    if reads == 0 {
        return Err(Error::Parameter("N must be positive".into()));
    }
    let fam = Regime::Family;
    Ok(match (ch, reads) {
        (S, 1..=2) => (Regime::Greedy, ThreeHalvesLog),
        (S, _) => (Regime::Balanced, Delta),
        (D | I, 1) => (fam(Family::Bvt), ThreeHalvesLog),
        (D | I, 2) => (fam(Family::C2), HalfLogPlusLogLog),
        (D | I, _) => (Regime::Balanced, Delta),
        (DI, 1..=2) => (fam(Family::Bvt), ThreeHalvesLog),
        (DI, 3..=4) => (fam(Family::C2), HalfLogPlusLogLog),
        (DI, _) => (Regime::Balanced, Delta),
        (SD | SI, 1..=2) => (fam(Family::Blt), ThreeHalvesLog),
        (SD | SI, 3) => (fam(Family::D2), HalfLogPlusLogLog),
        (SD | SI, 4) => (fam(Family::Parity), DeltaPlusOne),
        (SD | SI, _) => (Regime::Balanced, Delta),
        (Edit, 1..=2) => (fam(Family::Blt), ThreeHalvesLog),
        (Edit, 3..=4) => (fam(Family::E2), HalfLogPlusLogLog),
        (Edit, 5..=6) => (fam(Family::Parity), DeltaPlusOne),
        (Edit, _) => (Regime::Balanced, Delta),
    })
}

/// One line of a redundancy table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RedundancyRow {
    pub n: usize,
    pub channel: Channel,
    #[serde(rename = "N")]
    pub reads: usize,
    pub regime: Regime,
    pub code_family: String,
    pub code_params: String,
    pub code_size: usize,
    /// `ν(C; B) < N`, checked exhaustively.
    pub certified: bool,
    pub redundancy: Approx,
    pub normalized: Approx,
    pub delta: Approx,
    pub leading_term: LeadingTerm,
    pub leading_value: Approx,
    /// `redundancy − leading_value`
    pub offset: Approx,
}

impl RedundancyRow {
    pub const CSV_HEADER: [&'static str; 14] = [
        "n",
        "channel",
        "N",
        "code_family",
        "code_params",
        "code_size",
        "certified",
        "redundancy",
        "normalized",
        "delta",
        "leading_term",
        "leading_value",
        "offset",
        "regime",
    ];

    pub fn csv_record(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.channel.to_string(),
            self.reads.to_string(),
            self.code_family.clone(),
            self.code_params.clone(),
            self.code_size.to_string(),
            self.certified.to_string(),
            self.redundancy.decimal(),
            self.normalized.decimal(),
            self.delta.decimal(),
            self.leading_term.label().to_string(),
            self.leading_value.decimal(),
            self.offset.decimal(),
            match self.regime {
                Regime::Balanced => "balanced".into(),
                Regime::Family(f) => f.name().to_string(),
                Regime::Greedy => "greedy".into(),
            },
        ]
    }
}

/// Builds the regime's code for one `n`.
pub fn regime_code(n: usize, ch: Channel, reads: usize, budget: u128, exec: Exec) -> Result<Code> {
    Ok(match regime(ch, reads)?.0 {
        Regime::Balanced => Code::balanced(n, budget)?,
        Regime::Family(f) => best_residue_with(f, n, None, budget, exec)?.1,
        Regime::Greedy => greedy_code_with(n, ch, reads, budget, exec)?,
    })
}

pub fn redundancy_row(n: usize, ch: Channel, reads: usize, budget: u128, exec: Exec) -> Result<RedundancyRow> {
    let (regime, leading) = regime(ch, reads)?;
    let code = regime_code(n, ch, reads, budget, exec)?;
    let cert = certify_with(
        &code,
        ch,
        reads,
        CoverageOptions {
            exec,
            filter: true,
        },
    )?;
    let red = redundancy(&code)?;
    let lead = leading.value(n);
    let meta = code.meta();
    Ok(RedundancyRow {
        n,
        channel: ch,
        reads,
        regime,
        code_family: meta.family.clone(),
        code_params: meta
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";"),
        code_size: code.len(),
        certified: cert.certified,
        redundancy: Approx(red.redundancy),
        normalized: Approx(red.normalized),
        delta: Approx(red.delta),
        leading_term: leading,
        leading_value: Approx(lead),
        offset: Approx(red.redundancy - lead),
    })
}

pub fn redundancy_table(
    ch: Channel,
    ns: &[usize],
    reads: usize,
    budget: u128,
    exec: Exec,
) -> Result<Vec<RedundancyRow>> {
    ns.iter()
        .map(|&n| redundancy_row(n, ch, reads, budget, exec))
        .collect()
}

/// `max − min` of the offsets, the width of the window they stay in.
pub fn offset_spread(rows: &[RedundancyRow]) -> f64 {
    let (lo, hi) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
        (lo.min(r.offset.0), hi.max(r.offset.0))
    });
    if rows.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(format_rational(&q(35, 4)), "8.75000000000");
        assert_eq!(format_rational(&q(68, 3)), "22.6666666667");
        assert_eq!(format_rational(&q(-10, 1)), "-10.0000000000");
        assert_eq!(format_rational(&q(2, 3)), "0.666666666667");
        assert_eq!(format_rational(&q(3432, 1)), "3432.00000000");
        assert_eq!(format_rational(&q(0, 1)), "0");
        // 0.9999999999995 rounds up into the next decade
        assert_eq!(format_rational(&q(19_999_999_999_999, 20_000_000_000_000)), "1.00000000000");
        assert_eq!(format_rational(&q(1, 1_000_000_000)), "1.00000000000e-9");
    }

    #[test]
    fn float_formatting() {
        assert_eq!(format_f64(64.0), "64.0000000000");
        assert_eq!(format_f64(90.50966799187808), "90.5096679919");
        assert_eq!(format_f64(-0.5), "-0.500000000000");
    }

    #[test]
    fn exact_serializes_with_fraction() {
        let v = serde_json::to_value(Exact(q(68, 3))).unwrap();
        assert_eq!(v, serde_json::json!({"value": 22.6666666667, "num": "68", "den": "3"}));
    }

    #[test]
    fn bounds_row_n8() {
        let opts = BoundsOptions {
            target: Some((Channel::D, 1)),
            ..Default::default()
        };
        let row = bounds_row(8, &opts).unwrap();
        assert_eq!(row.binomial, "70");
        assert_eq!(row.as_lower, Some(Exact(q(35, 4))));
        assert_eq!(row.as_upper, Some(Exact(q(14, 1))));
        assert_eq!(row.ad_upper, Some(Exact(q(68, 3))));
        assert!(row.bvt_max >= 8);
        let ext = row.extremal.as_ref().unwrap();
        assert!(ext.size >= row.bvt_max && ext.size <= 22);
        assert_eq!(row.csv_record().len(), BoundsRow::CSV_HEADER.len());
    }

    #[test]
    fn bounds_row_small_n_has_blank_cells() {
        let row = bounds_row(2, &BoundsOptions::default()).unwrap();
        assert!(row.as_lower.is_none() && row.ad_upper.is_none());
        assert!(row.transversal_weight.is_none() && row.r2b_l2.is_none());
    }

    #[test]
    fn delta_regimes_report_delta() {
        for (ch, reads) in [(Channel::S, 3), (Channel::D, 3), (Channel::DI, 5), (Channel::Edit, 7)] {
            let row = redundancy_row(8, ch, reads, 1 << 20, Exec::Sequential).unwrap();
            assert_eq!(row.regime, Regime::Balanced);
            assert!(row.certified);
            assert_eq!(row.redundancy, row.delta);
            assert_eq!(row.normalized.0, 0.0);
        }
    }

    #[test]
    fn parity_regime_within_delta_plus_one() {
        let row = redundancy_row(8, Channel::Edit, 5, 1 << 20, Exec::Sequential).unwrap();
        assert!(row.certified);
        assert!(row.redundancy.0 <= row.delta.0 + 1.0 + 1e-12);
    }
}
