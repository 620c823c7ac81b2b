//! One-dimensional Gaussian primitives.
//!
//! `phi` is the standard Gaussian tail `Φ(t) = γ₁((t, ∞))`, `psi` its inverse.
//! Everything downstream (section measures, perimeters, symmetrals) is built on
//! these two functions and on [`gauss_len`], the `γ₁`-measure of an interval.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI};
use std::fmt;
use std::ops::Neg;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `ln √(2π)`.
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Past this point `erfc` has lost too much relative accuracy to be trusted for
/// logarithms, and the continued fraction for the Mills ratio converges fast.
const LOG_TAIL_SWITCH: f64 = 8.0;

/// A point of `ℝ ∪ {−∞, +∞}`. Never NaN; `-0.0` is stored as `0.0`, so the
/// derived `PartialOrd` agrees with `Ord`.
#[allow(clippy::derive_ord_xor_partial_ord)]
#[derive(Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct ExtReal(f64);

impl ExtReal {
    pub const INFINITY: ExtReal = ExtReal(f64::INFINITY);
    pub const NEG_INFINITY: ExtReal = ExtReal(f64::NEG_INFINITY);
    pub const ZERO: ExtReal = ExtReal(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() {
            return Err(Error::NotANumber);
        }
        Ok(ExtReal(value + 0.0))
    }

    /// Panics on NaN. For values produced by arithmetic known to be NaN-free.
    pub fn from_f64(value: f64) -> Self {
        Self::new(value).expect("NaN passed where an extended real was required")
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Eq for ExtReal {}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Neg for ExtReal {
    type Output = ExtReal;

    fn neg(self) -> ExtReal {
        ExtReal(0.0 - self.0)
    }
}

impl fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == f64::INFINITY {
            f.write_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            f.write_str("-inf")
        } else {
            fmt::Display::fmt(&self.0, f)
        }
    }
}

impl TryFrom<f64> for ExtReal {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        ExtReal::new(value)
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            serializer.serialize_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            serializer.serialize_str("-inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExtRealVisitor;

        impl Visitor<'_> for ExtRealVisitor {
            type Value = ExtReal;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or one of \"inf\", \"-inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<ExtReal, E> {
                ExtReal::new(v).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtReal, E> {
                Ok(ExtReal(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtReal, E> {
                Ok(ExtReal(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtReal, E> {
                match v {
                    "inf" | "+inf" => Ok(ExtReal::INFINITY),
                    "-inf" => Ok(ExtReal::NEG_INFINITY),
                    other => Err(E::custom(format!("unknown sentinel `{other}`"))),
                }
            }
        }

        deserializer.deserialize_any(ExtRealVisitor)
    }
}

/// Standard normal density `e^{−t²/2}/√(2π)`.
#[inline]
pub fn density(t: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    (-0.5 * t * t).exp() / (2.0 * PI).sqrt()
}

/// Gaussian weight `e^{−t²/2}` without the normalising constant; this is the
/// density of `H^k_γ` relative to `H^k_γ` of a plane through the origin.
#[inline]
pub fn weight(t: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    (-0.5 * t * t).exp()
}

/// Gaussian tail `Φ(t) = (2π)^{-1/2} ∫_t^∞ e^{−s²/2} ds`.
pub fn phi(t: ExtReal) -> f64 {
    tail(t.0)
}

#[inline]
pub(crate) fn tail(t: f64) -> f64 {
    if t == f64::INFINITY {
        0.0
    } else if t == f64::NEG_INFINITY {
        1.0
    } else {
        0.5 * libm::erfc(t * FRAC_1_SQRT_2)
    }
}

/// Mills ratio `Φ(t)/φ(t)` for `t ≥ 8` by backward evaluation of the continued
/// fraction `1/(t + 1/(t + 2/(t + 3/(t + …))))`.
fn mills_ratio(t: f64) -> f64 {
    let mut f = t;
    for k in (1..=64).rev() {
        f = t + k as f64 / f;
    }
    1.0 / f
}

/// `ln Φ(t)`, accurate far into the upper tail where `Φ` itself underflows.
pub fn ln_phi(t: ExtReal) -> f64 {
    let t = t.0;
    if t == f64::INFINITY {
        f64::NEG_INFINITY
    } else if t >= LOG_TAIL_SWITCH {
        -0.5 * t * t - LN_SQRT_2PI + mills_ratio(t).ln()
    } else if t < 0.0 {
        (-tail(-t)).ln_1p()
    } else {
        tail(t).ln()
    }
}

/// Inverse of [`phi`]: the unique `t` with `Φ(t) = p`. `Ψ(0) = +∞`, `Ψ(1) = −∞`.
pub fn psi(p: f64) -> Result<ExtReal> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(ExtReal(psi_unchecked(p)))
}

fn psi_unchecked(p: f64) -> f64 {
    if p == 0.0 {
        return f64::INFINITY;
    }
    if p == 1.0 {
        return f64::NEG_INFINITY;
    }
    if p == 0.5 {
        return 0.0;
    }
    if p > 0.5 {
        // 1 − p is exact for p ≥ 1/2.
        return -psi_upper(1.0 - p);
    }
    psi_upper(p)
}

/// Solves `ln Φ(t) = ln p` for `p ∈ (0, 1/2)`, so `t > 0`. Newton in log space
/// with a bisection fallback whenever the step leaves the bracket.
fn psi_upper(p: f64) -> f64 {
    let target = p.ln();
    let mut lo = 0.0_f64;
    let mut hi = 40.0_f64;
    // Leading-order tail inversion as a starting point.
    let mut t = (-2.0 * (p * 2.5).ln()).max(0.0).sqrt().clamp(lo, hi);
    for _ in 0..200 {
        let x = ExtReal(t);
        let g = ln_phi(x) - target;
        if g > 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        // d/dt ln Φ(t) = −φ(t)/Φ(t)
        let slope = -(density(t).ln() - ln_phi(x)).exp();
        let mut next = t - g / slope;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 4.0 * f64::EPSILON * t.abs().max(1.0) {
            return next;
        }
        t = next;
        if hi - lo <= 4.0 * f64::EPSILON * hi.max(1.0) {
            break;
        }
    }
    t
}

/// `γ₁((lo, hi))`, evaluated on whichever side keeps the tail arguments
/// non-negative. The result is identical for `(lo, hi)` and `(−hi, −lo)`.
pub fn gauss_len(lo: ExtReal, hi: ExtReal) -> f64 {
    if lo >= hi {
        return 0.0;
    }
    if -lo.0 > hi.0 {
        tail(-hi.0) - tail(-lo.0)
    } else {
        tail(lo.0) - tail(hi.0)
    }
}

/// Lebesgue length of `(lo, hi)`; `+∞` for unbounded intervals.
pub fn lebesgue_len(lo: ExtReal, hi: ExtReal) -> f64 {
    if lo >= hi {
        0.0
    } else {
        hi.0 - lo.0
    }
}

/// `∫_lo^hi t dγ₁(t) = (e^{−lo²/2} − e^{−hi²/2})/√(2π)`.
pub fn first_moment(lo: ExtReal, hi: ExtReal) -> f64 {
    if lo >= hi {
        return 0.0;
    }
    density(lo.0) - density(hi.0)
}

/// `ln 2`; re-exported for log-space gap arithmetic.
pub(crate) const LN_TWO: f64 = LN_2;

/// Sums after sorting, so that any permutation of the same values (e.g. the
/// intervals of a reflected section) gives a bit-identical total.
pub(crate) fn canonical_sum(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    values.iter().sum()
}

/// `log(Σ exp(xᵢ))` without overflow or underflow.
pub(crate) fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(v: f64) -> ExtReal {
        ExtReal::from_f64(v)
    }

    #[test]
    fn phi_fixed_points() {
        assert_eq!(phi(ExtReal::ZERO), 0.5);
        assert_eq!(phi(ExtReal::INFINITY), 0.0);
        assert_eq!(phi(ExtReal::NEG_INFINITY), 1.0);
    }

    #[test]
    fn phi_at_one_matches_high_precision_value() {
        // mpmath quadrature of the defining integral, 30 digits.
        let expected = 0.158_655_253_931_457_05;
        assert!((phi(x(1.0)) - expected).abs() / expected < 1e-14);
    }

    #[test]
    fn psi_edges() {
        assert_eq!(psi(0.5).unwrap(), ExtReal::ZERO);
        assert_eq!(psi(0.0).unwrap(), ExtReal::INFINITY);
        assert_eq!(psi(1.0).unwrap(), ExtReal::NEG_INFINITY);
        assert!(matches!(psi(1.5), Err(Error::ProbabilityOutOfRange(_))));
        assert!(matches!(psi(-0.1), Err(Error::ProbabilityOutOfRange(_))));
        assert!((psi(0.158_655_253_931_46).unwrap().value() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn psi_deep_tail() {
        // mpmath, root of ln Φ(t) = ln 1e-300: 37.0470962993611992…
        let t = psi(1e-300).unwrap().value();
        assert!((t - 37.047_096_299_361_199).abs() < 1e-9);
        let smallest = psi(f64::MIN_POSITIVE * f64::EPSILON).unwrap().value();
        assert!(smallest.is_finite() && smallest > 38.0);
    }

    #[test]
    fn ln_phi_tail_matches_direct_and_reference() {
        for t in [8.0, 9.5, 12.0, 20.0, 30.0] {
            let direct = phi(x(t)).ln();
            assert!((ln_phi(x(t)) - direct).abs() < 1e-12 * direct.abs(), "t = {t}");
        }
        // mpmath: Φ(128) = 5.66601658677601905…e-3561
        let reference = 5.666_016_586_776_019_f64.ln() - 3561.0 * 10f64.ln();
        assert!((ln_phi(x(128.0)) - reference).abs() < 1e-9);
        assert_eq!(ln_phi(ExtReal::NEG_INFINITY), 0.0);
    }

    #[test]
    fn ext_real_rejects_nan_and_normalises_zero() {
        assert_eq!(ExtReal::new(f64::NAN), Err(Error::NotANumber));
        let z = ExtReal::new(-0.0).unwrap();
        assert_eq!(z.value().to_bits(), 0.0f64.to_bits());
        assert_eq!((-ExtReal::ZERO).value().to_bits(), 0.0f64.to_bits());
        assert!(ExtReal::NEG_INFINITY < x(-1e308));
        assert!(x(1e308) < ExtReal::INFINITY);
    }

    #[test]
    fn ext_real_json_sentinels() {
        let v: Vec<ExtReal> = serde_json::from_str(r#"["-inf", 1.5, 2, "inf"]"#).unwrap();
        assert_eq!(v, vec![ExtReal::NEG_INFINITY, x(1.5), x(2.0), ExtReal::INFINITY]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["-inf",1.5,2.0,"inf"]"#);
        assert!(serde_json::from_str::<ExtReal>(r#""nan""#).is_err());
    }

    #[test]
    fn gauss_len_is_reflection_exact() {
        for (a, b) in [(-3.0, 1.0), (-1.0, 1.0), (0.5, 7.0), (-9.0, -8.0)] {
            let direct = gauss_len(x(a), x(b));
            let mirrored = gauss_len(x(-b), x(a).neg());
            assert_eq!(direct.to_bits(), mirrored.to_bits());
        }
        assert_eq!(gauss_len(ExtReal::NEG_INFINITY, ExtReal::INFINITY), 1.0);
        // Tail side keeps relative accuracy: γ₁((−∞, −16)) = Φ(16).
        let tiny = gauss_len(ExtReal::NEG_INFINITY, x(-16.0));
        assert!((tiny / 6.388_754_400_538_087e-58 - 1.0).abs() < 1e-12);
    }
}
