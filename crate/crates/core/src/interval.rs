//! Canonical finite unions of open extended-real intervals.
//!
//! Endpoint membership is never queried: sets are only ever compared up to
//! null sets, so `(a, b)` and `[a, b]` are the same object here.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gauss::{self, canonical_sum, ExtReal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Interval {
    lo: ExtReal,
    hi: ExtReal,
}

impl Interval {
    /// `None` for empty or degenerate input (`lo ≥ hi`).
    pub fn new(lo: ExtReal, hi: ExtReal) -> Option<Self> {
        (lo < hi).then_some(Interval { lo, hi })
    }

    pub fn lo(&self) -> ExtReal {
        self.lo
    }

    pub fn hi(&self) -> ExtReal {
        self.hi
    }

    pub fn gauss_measure(&self) -> f64 {
        gauss::gauss_len(self.lo, self.hi)
    }

    pub fn lebesgue_measure(&self) -> f64 {
        gauss::lebesgue_len(self.lo, self.hi)
    }

    pub fn reflect(&self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }
}

/// Pairwise disjoint intervals, sorted, with strictly positive gaps.
#[derive(Clone, Debug, PartialEq, Eq, Default, PartialOrd, Ord)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub const EMPTY: IntervalSet = IntervalSet { intervals: Vec::new() };

    pub fn empty() -> Self {
        IntervalSet { intervals: Vec::new() }
    }

    pub fn real_line() -> Self {
        IntervalSet {
            intervals: vec![Interval { lo: ExtReal::NEG_INFINITY, hi: ExtReal::INFINITY }],
        }
    }

    /// `(t, ∞)`; empty for `t = +∞`, the whole line for `t = −∞`.
    pub fn upper_halfline(t: ExtReal) -> Self {
        Self::single(t, ExtReal::INFINITY)
    }

    /// `(−∞, t)`.
    pub fn lower_halfline(t: ExtReal) -> Self {
        Self::single(ExtReal::NEG_INFINITY, t)
    }

    pub fn single(lo: ExtReal, hi: ExtReal) -> Self {
        IntervalSet { intervals: Interval::new(lo, hi).into_iter().collect() }
    }

    /// Canonicalises arbitrary pairs: degenerate ones are dropped, overlapping
    /// or touching ones merged.
    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (ExtReal, ExtReal)>,
    {
        let mut intervals: Vec<Interval> =
            pairs.into_iter().filter_map(|(lo, hi)| Interval::new(lo, hi)).collect();
        intervals.sort();
        Self::coalesce(intervals)
    }

    /// Fallible convenience constructor from raw floats.
    pub fn from_f64_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let mut out = Vec::with_capacity(pairs.len());
        for &(lo, hi) in pairs {
            out.push((ExtReal::new(lo)?, ExtReal::new(hi)?));
        }
        Ok(Self::from_pairs(out))
    }

    fn coalesce(sorted: Vec<Interval>) -> Self {
        let mut merged: Vec<Interval> = Vec::with_capacity(sorted.len());
        for next in sorted {
            match merged.last_mut() {
                Some(last) if next.lo <= last.hi => {
                    if next.hi > last.hi {
                        last.hi = next.hi;
                    }
                }
                _ => merged.push(next),
            }
        }
        IntervalSet { intervals: merged }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_real_line(&self) -> bool {
        matches!(self.intervals.as_slice(),
            [only] if only.lo == ExtReal::NEG_INFINITY && only.hi == ExtReal::INFINITY)
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    /// `γ₁(S)`.
    pub fn gauss_measure(&self) -> f64 {
        let mut parts: Vec<f64> = self.intervals.iter().map(Interval::gauss_measure).collect();
        canonical_sum(&mut parts)
    }

    /// Lebesgue measure, possibly `+∞`.
    pub fn lebesgue_measure(&self) -> f64 {
        let mut parts: Vec<f64> = self.intervals.iter().map(Interval::lebesgue_measure).collect();
        canonical_sum(&mut parts)
    }

    /// Finite endpoints in increasing order, each tagged `−1` when the set lies
    /// above it (a lower endpoint) and `+1` when it lies below (an upper one):
    /// the sign of the outward vertical normal.
    pub fn finite_endpoints(&self) -> Vec<(ExtReal, i8)> {
        let mut out = Vec::with_capacity(2 * self.intervals.len());
        for iv in &self.intervals {
            if iv.lo.is_finite() {
                out.push((iv.lo, -1));
            }
            if iv.hi.is_finite() {
                out.push((iv.hi, 1));
            }
        }
        out
    }

    pub fn reflect(&self) -> Self {
        IntervalSet { intervals: self.intervals.iter().rev().map(Interval::reflect).collect() }
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        let mut cursor = ExtReal::NEG_INFINITY;
        for iv in &self.intervals {
            if let Some(gap) = Interval::new(cursor, iv.lo) {
                out.push(gap);
            }
            cursor = iv.hi;
        }
        if let Some(gap) = Interval::new(cursor, ExtReal::INFINITY) {
            out.push(gap);
        }
        IntervalSet { intervals: out }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut all: Vec<Interval> =
            self.intervals.iter().chain(other.intervals.iter()).copied().collect();
        all.sort();
        Self::coalesce(all)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = a[i].lo.max(b[j].lo);
            let hi = a[i].hi.min(b[j].hi);
            if let Some(iv) = Interval::new(lo, hi) {
                out.push(iv);
            }
            if a[i].hi < b[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::coalesce(out)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersection(&other.complement())
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.difference(other).union(&other.difference(self))
    }
}

impl Serialize for IntervalSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[ExtReal; 2]> = self.intervals.iter().map(|iv| [iv.lo, iv.hi]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[ExtReal; 2]>::deserialize(deserializer)?;
        Ok(IntervalSet::from_pairs(pairs.into_iter().map(|[lo, hi]| (lo, hi))))
    }
}

/// Gaussian barycenter `(1/γ₁(S)) ∫_S t dγ₁(t)`.
pub fn gaussian_barycenter(set: &IntervalSet) -> Result<ExtReal> {
    let mass = set.gauss_measure();
    if mass <= 0.0 {
        return Err(Error::Domain("barycenter of a γ₁-null set".into()));
    }
    let mut moments: Vec<f64> =
        set.intervals().iter().map(|iv| gauss::first_moment(iv.lo(), iv.hi())).collect();
    // Antisymmetric under reflection: sort by magnitude, sum with signs.
    moments.sort_by(|a, b| a.abs().total_cmp(&b.abs()).then(a.total_cmp(b)));
    let moment: f64 = moments.iter().sum();
    ExtReal::new(moment / mass)
}

/// `H¹_γ` of the vertical fiber `{z} × S`: `e^{−|z|²/2} γ₁(S)`.
pub fn fiber_measure(base_point: &[f64], set: &IntervalSet) -> f64 {
    let norm2: f64 = base_point.iter().map(|z| z * z).sum();
    (-0.5 * norm2).exp() * set.gauss_measure()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(v: f64) -> ExtReal {
        ExtReal::from_f64(v)
    }

    fn set(pairs: &[(f64, f64)]) -> IntervalSet {
        IntervalSet::from_f64_pairs(pairs).unwrap()
    }

    const INF: f64 = f64::INFINITY;

    #[test]
    fn canonicalisation_merges_touching_and_drops_degenerate() {
        let s = set(&[(2.0, 3.0), (0.0, 1.0), (1.0, 2.0), (5.0, 5.0), (4.0, 4.5), (4.2, 4.4)]);
        assert_eq!(s, set(&[(0.0, 3.0), (4.0, 4.5)]));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn symmetric_difference_examples() {
        assert_eq!(set(&[(0.0, INF)]).symmetric_difference(&set(&[(1.0, INF)])), set(&[(0.0, 1.0)]));
        let a = 0.5;
        let b = 2.0;
        let got = set(&[(a, INF)]).symmetric_difference(&set(&[(-INF, -b)]));
        assert_eq!(got, set(&[(-INF, -b), (a, INF)]));
        assert_eq!(set(&[(-INF, 0.0)]).complement(), set(&[(0.0, INF)]));
        assert!(IntervalSet::empty().complement().is_real_line());
    }

    #[test]
    fn gamma1_examples() {
        assert_eq!(IntervalSet::real_line().gauss_measure(), 1.0);
        assert_eq!(IntervalSet::empty().gauss_measure(), 0.0);
        let g = set(&[(-1.0, 1.0)]).gauss_measure();
        assert!((g - 0.682_689_492_137_085_9).abs() < 1e-15);
    }

    #[test]
    fn fiber_measure_examples() {
        assert_eq!(fiber_measure(&[0.0], &IntervalSet::real_line()), 1.0);
        assert_eq!(fiber_measure(&[0.0], &IntervalSet::empty()), 0.0);
        let m = fiber_measure(&[1.0], &IntervalSet::real_line());
        assert!((m - 0.606_530_659_712_633_4).abs() < 1e-15);
        let m2 = fiber_measure(&[0.6, 0.8], &IntervalSet::real_line());
        assert!((m2 - m).abs() < 1e-15);
    }

    #[test]
    fn barycenter_examples() {
        let b = gaussian_barycenter(&set(&[(1.0, INF)])).unwrap().value();
        // mpmath: e^{-1/2}/(√(2π) Φ(1))
        assert!((b - 1.525_135_276_160_981_2).abs() < 1e-13);
        let c = gaussian_barycenter(&set(&[(-2.5, 2.5)])).unwrap().value();
        assert_eq!(c, 0.0);
        let neg = gaussian_barycenter(&set(&[(-INF, -1.0)])).unwrap().value();
        assert_eq!(neg, -b);
        assert!(gaussian_barycenter(&IntervalSet::empty()).is_err());
    }

    #[test]
    fn reflection_is_an_involution() {
        let s = set(&[(-INF, -3.0), (-1.0, 0.25), (2.0, INF)]);
        assert_eq!(s.reflect().reflect(), s);
        assert_eq!(s.reflect().gauss_measure().to_bits(), s.gauss_measure().to_bits());
    }

    #[test]
    fn endpoints_carry_normal_signs() {
        let s = set(&[(-INF, -1.0), (0.0, 2.0)]);
        assert_eq!(s.finite_endpoints(), vec![(x(-1.0), 1), (x(0.0), -1), (x(2.0), 1)]);
    }

    #[test]
    fn json_roundtrip_uses_sentinels() {
        let s = set(&[(-INF, -1.0), (0.5, INF)]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"[["-inf",-1.0],[0.5,"inf"]]"#);
        let back: IntervalSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
