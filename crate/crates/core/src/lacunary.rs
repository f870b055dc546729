//! Lacunary point sets of finite order and the interval collections they
//! induce.
//!
//! All endpoints are dyadic rationals whose binary expansions span at most
//! 53 bits, so every value is exact in `f64` and comparisons decide set
//! membership without rounding.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};

/// Widest exponent span for which `2^k +- ... +- 2^l` stays exact.
pub const MAX_EXPONENT_SPAN: i32 = 52;
const MAX_ABS_EXPONENT: i32 = 1000;

/// Half-open interval `[a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyInterval {
    a: f64,
    b: f64,
}

impl FrequencyInterval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_finite() && b.is_finite() && a < b {
            Ok(Self { a, b })
        } else {
            Err(Error::EmptyInterval { a, b })
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x < self.b
    }

    pub fn contains_interval(&self, other: &FrequencyInterval) -> bool {
        self.a <= other.a && other.b <= self.b
    }

    pub fn intersects(&self, other: &FrequencyInterval) -> bool {
        self.a < other.b && other.a < self.b
    }

    /// Reflection `x -> -x` mapped back to half-open form: `[-b, -a)`.
    pub fn reflect(&self) -> FrequencyInterval {
        FrequencyInterval { a: -self.b, b: -self.a }
    }
}

/// Sorted, pairwise disjoint family of intervals.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalCollection {
    intervals: Vec<FrequencyInterval>,
}

impl IntervalCollection {
    /// Sorts by left endpoint and rejects overlaps.
    pub fn new(mut intervals: Vec<FrequencyInterval>) -> Result<Self> {
        intervals.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(Ordering::Equal));
        for (i, w) in intervals.windows(2).enumerate() {
            if w[0].b > w[1].a {
                return Err(Error::UnsortedPoints(i + 1));
            }
        }
        Ok(Self { intervals })
    }

    pub fn intervals(&self) -> &[FrequencyInterval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_contiguous(&self) -> bool {
        self.intervals.windows(2).all(|w| w[0].b == w[1].a)
    }

    /// Members lying entirely inside `band`.
    pub fn restrict(&self, band: &FrequencyInterval) -> IntervalCollection {
        IntervalCollection {
            intervals: self.intervals.iter().filter(|iv| band.contains_interval(iv)).copied().collect(),
        }
    }

    pub fn iter(&self) -> core::slice::Iter<'_, FrequencyInterval> {
        self.intervals.iter()
    }
}

impl<'a> IntoIterator for &'a IntervalCollection {
    type Item = &'a FrequencyInterval;
    type IntoIter = core::slice::Iter<'a, FrequencyInterval>;
    fn into_iter(self) -> Self::IntoIter {
        self.intervals.iter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignMode {
    Positive,
    Negative,
    Both,
}

impl SignMode {
    fn wants_pos(self) -> bool {
        matches!(self, SignMode::Positive | SignMode::Both)
    }

    fn wants_neg(self) -> bool {
        matches!(self, SignMode::Negative | SignMode::Both)
    }
}

/// Which lacunary set to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetKind {
    /// `{+-2^k}`.
    E1,
    /// Difference form `{+-(2^k - 2^l) : k > l}`.
    E2,
    /// Sum form `{+-(2^{k_1} + ... + 2^{k_N}) : k_1 > ... > k_N}`.
    Sum(u32),
}

impl SetKind {
    pub fn order(&self) -> u32 {
        match self {
            SetKind::E1 => 1,
            SetKind::E2 => 2,
            SetKind::Sum(n) => *n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LacunarySpec {
    pub kind: SetKind,
    pub k_min: i32,
    pub k_max: i32,
    pub l_min: i32,
    pub sign: SignMode,
}

impl LacunarySpec {
    pub fn validate(&self) -> Result<()> {
        if self.kind.order() == 0 {
            return Err(Error::OutOfRange("order must be at least 1".into()));
        }
        if self.k_max < self.k_min {
            return Err(Error::OutOfRange("k_max must be >= k_min".into()));
        }
        if self.kind != SetKind::E1 && self.l_min > self.k_min {
            return Err(Error::OutOfRange("l_min must be <= k_min".into()));
        }
        let lo = if self.kind == SetKind::E1 { self.k_min } else { self.l_min };
        if self.k_max > MAX_ABS_EXPONENT || lo < -MAX_ABS_EXPONENT || self.k_max - lo > MAX_EXPONENT_SPAN {
            return Err(Error::ExponentOverflow { lo, hi: self.k_max });
        }
        Ok(())
    }
}

#[inline]
pub fn pow2(e: i32) -> f64 {
    libm::exp2(e as f64)
}

fn sum_form(n: u32, k_min: i32, k_max: i32, l_min: i32, out: &mut Vec<f64>) {
    // choose k_1 in [k_min, k_max], then n - 1 strictly smaller exponents >= l_min
    fn rest(left: u32, below: i32, l_min: i32, acc: f64, out: &mut Vec<f64>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        let mut k = below - 1;
        while k >= l_min + left as i32 - 1 {
            rest(left - 1, k, l_min, acc + pow2(k), out);
            k -= 1;
        }
    }
    for k1 in k_min..=k_max {
        rest(n - 1, k1, l_min, pow2(k1), out);
    }
}

/// Sorted, deduplicated points of the set described by `spec`.
pub fn generate_points(spec: &LacunarySpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut pos = Vec::new();
    match spec.kind {
        SetKind::E1 | SetKind::Sum(1) => pos.extend((spec.k_min..=spec.k_max).map(pow2)),
        SetKind::E2 => {
            for k in spec.k_min..=spec.k_max {
                for l in spec.l_min..k {
                    pos.push(pow2(k) - pow2(l));
                }
            }
        }
        SetKind::Sum(n) => sum_form(n, spec.k_min, spec.k_max, spec.l_min, &mut pos),
    }
    let mut pts: Vec<f64> = Vec::with_capacity(2 * pos.len());
    if spec.sign.wants_neg() {
        pts.extend(pos.iter().map(|x| -x));
    }
    if spec.sign.wants_pos() {
        pts.extend(pos.iter().copied());
    }
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    pts.dedup();
    if pts.is_empty() {
        return Err(Error::EmptyResult);
    }
    Ok(pts)
}

/// Consecutive-pair intervals `[p_i, p_{i+1})`.
pub fn intervals_from_points(points: &[f64]) -> Result<IntervalCollection> {
    if points.len() < 2 {
        return Err(Error::TooFew { need: 2, got: points.len() });
    }
    if let Some(i) = points.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    if let Some(i) = points.windows(2).position(|w| !(w[0] < w[1])) {
        return Err(Error::UnsortedPoints(i + 1));
    }
    Ok(IntervalCollection {
        intervals: points.windows(2).map(|w| FrequencyInterval { a: w[0], b: w[1] }).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_str(&self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// An interval together with the `(k, l, sign)` that generated it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledInterval {
    pub k: i32,
    pub l: i32,
    pub sign: Sign,
    pub interval: FrequencyInterval,
}

/// `I+_{k,l} = [2^k - 2^l, 2^k - 2^{l-1})`.
pub fn i_plus(k: i32, l: i32) -> FrequencyInterval {
    FrequencyInterval { a: pow2(k) - pow2(l), b: pow2(k) - pow2(l - 1) }
}

/// `I-_{k,l} = [-2^k + 2^{l-1}, -2^k + 2^l)`.
pub fn i_minus(k: i32, l: i32) -> FrequencyInterval {
    FrequencyInterval { a: -pow2(k) + pow2(l - 1), b: -pow2(k) + pow2(l) }
}

/// All `I+-_{k,l}` with `k in [k_min, k_max]`, `l in [l_min, k-1]`, sorted by
/// left endpoint.
pub fn enumerate_ikl(k_min: i32, k_max: i32, l_min: i32, sign: SignMode) -> Result<Vec<LabeledInterval>> {
    if k_max < k_min || l_min > k_min - 1 {
        return Err(Error::EmptyResult);
    }
    if k_max > MAX_ABS_EXPONENT || l_min < -MAX_ABS_EXPONENT || k_max - (l_min - 1) > MAX_EXPONENT_SPAN {
        return Err(Error::ExponentOverflow { lo: l_min - 1, hi: k_max });
    }
    let mut out = Vec::new();
    for k in k_min..=k_max {
        for l in l_min..k {
            if sign.wants_pos() {
                out.push(LabeledInterval { k, l, sign: Sign::Plus, interval: i_plus(k, l) });
            }
            if sign.wants_neg() {
                out.push(LabeledInterval { k, l, sign: Sign::Minus, interval: i_minus(k, l) });
            }
        }
    }
    out.sort_by(|x, y| x.interval.a.partial_cmp(&y.interval.a).unwrap_or(Ordering::Equal));
    Ok(out)
}

pub fn collection_of(labeled: &[LabeledInterval]) -> Result<IntervalCollection> {
    IntervalCollection::new(labeled.iter().map(|li| li.interval).collect())
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PartitionReport {
    pub disjoint: bool,
    pub covering: bool,
    /// Maximal sub-intervals of the band not covered by any member.
    pub gaps: Vec<(f64, f64)>,
    /// Index pairs (after sorting) of overlapping members.
    pub overlaps: Vec<(usize, usize)>,
}

/// Checks disjointness of `intervals` and coverage of `band`.
pub fn verify_partition(intervals: &[FrequencyInterval], band: &FrequencyInterval) -> PartitionReport {
    let mut sorted: Vec<FrequencyInterval> = intervals.to_vec();
    sorted.sort_by(|x, y| {
        x.a.partial_cmp(&y.a).unwrap_or(Ordering::Equal).then(x.b.partial_cmp(&y.b).unwrap_or(Ordering::Equal))
    });
    let mut overlaps = Vec::new();
    let mut reach = f64::NEG_INFINITY;
    let mut reach_idx = 0usize;
    for (i, iv) in sorted.iter().enumerate() {
        if iv.a < reach {
            overlaps.push((reach_idx, i));
        }
        if iv.b > reach {
            reach = iv.b;
            reach_idx = i;
        }
    }
    let mut gaps = Vec::new();
    let mut cursor = band.a;
    for iv in &sorted {
        if iv.b <= cursor {
            continue;
        }
        if iv.a >= band.b {
            break;
        }
        if iv.a > cursor {
            gaps.push((cursor, iv.a));
        }
        cursor = cursor.max(iv.b);
        if cursor >= band.b {
            break;
        }
    }
    if cursor < band.b {
        gaps.push((cursor, band.b));
    }
    PartitionReport { disjoint: overlaps.is_empty(), covering: gaps.is_empty(), gaps, overlaps }
}
