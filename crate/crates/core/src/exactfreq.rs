//! Exact band geometry for rational dilations.
//!
//! Every frequency endpoint is a [`Rational`] multiple of pi. Since `M^j` is rational,
//! all band edges `M^{-j}(q+m-1)/q` are exactly representable and the tiling of the
//! frequency axis can be checked without tolerances. Floating point only appears when
//! a kernel is evaluated.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Default bound on `|j|` for exact powers of the dilation.
pub const DEFAULT_SCALE_BOUND: u32 = 64;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `"num/den"`, denominator always written.
pub fn format_ratio(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"num/den"`, an integer, or a plain decimal such as `"-0.125"`.
pub fn parse_ratio(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // to_f64 only fails on overflow of the integer parts
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Serde adapter: a [`Rational`] as a `"num/den"` string.
pub mod ratio_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_ratio(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_ratio(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter: a list of `(lo, hi)` rational pairs as `[["n/d","n/d"], ...]`.
pub mod ratio_pairs {
    use super::*;

    pub fn serialize<S: Serializer>(
        v: &[(Rational, Rational)],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<[String; 2]> = v
            .iter()
            .map(|(a, b)| [format_ratio(a), format_ratio(b)])
            .collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<(Rational, Rational)>, D::Error> {
        let strs: Vec<[String; 2]> = Vec::deserialize(d)?;
        strs.iter()
            .map(|[a, b]| Ok((parse_ratio(a)?, parse_ratio(b)?)))
            .collect::<Result<_>>()
            .map_err(serde::de::Error::custom)
    }
}

/// Rational dilation `M = p/q` with `gcd(p, q) = 1` and `p > q >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dilation {
    p: u64,
    q: u64,
    scale_bound: u32,
}

impl Dilation {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q < 1 {
            return Err(Error::InvalidDilation {
                p,
                q,
                reason: "q must be at least 1",
            });
        }
        if p <= q {
            return Err(Error::InvalidDilation {
                p,
                q,
                reason: "p must exceed q",
            });
        }
        if p.gcd(&q) != 1 {
            return Err(Error::InvalidDilation {
                p,
                q,
                reason: "p and q must be coprime",
            });
        }
        Ok(Dilation {
            p,
            q,
            scale_bound: DEFAULT_SCALE_BOUND,
        })
    }

    /// Replaces the `|j|` guard used by every exact power computation.
    pub fn with_scale_bound(mut self, bound: u32) -> Self {
        self.scale_bound = bound;
        self
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn scale_bound(&self) -> u32 {
        self.scale_bound
    }

    /// Number of subbands per annulus, `p - q`.
    pub fn subbands(&self) -> u64 {
        self.p - self.q
    }

    /// Same `p/q`, ignoring the scale guard.
    pub fn same_ratio(&self, other: &Dilation) -> bool {
        self.p == other.p && self.q == other.q
    }

    pub fn ratio(&self) -> Rational {
        Rational::new(BigInt::from(self.p), BigInt::from(self.q))
    }

    pub fn ratio_f64(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    pub fn check_scale(&self, j: i64) -> Result<()> {
        if j.unsigned_abs() > u64::from(self.scale_bound) {
            Err(Error::ScaleOverflow {
                j,
                bound: self.scale_bound,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_subband(&self, m: i64) -> Result<()> {
        if m < 1 || m as u64 > self.subbands() {
            Err(Error::SubbandOutOfRange {
                m,
                max: self.subbands(),
            })
        } else {
            Ok(())
        }
    }

    /// Exact `M^j`.
    pub fn pow(&self, j: i64) -> Result<Rational> {
        self.check_scale(j)?;
        let e = j.unsigned_abs() as usize;
        let p = num_traits::pow(BigInt::from(self.p), e);
        let q = num_traits::pow(BigInt::from(self.q), e);
        Ok(if j >= 0 {
            Rational::new(p, q)
        } else {
            Rational::new(q, p)
        })
    }

    /// `M^j` rounded to `f64`.
    pub fn pow_f64(&self, j: i64) -> Result<f64> {
        Ok(to_f64(&self.pow(j)?))
    }
}

impl fmt::Display for Dilation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Index `(j, n, m)` of the atom `psi^m_{j,n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AtomIndex {
    pub j: i64,
    pub n: i64,
    pub m: i64,
}

impl AtomIndex {
    pub fn new(j: i64, n: i64, m: i64) -> Self {
        AtomIndex { j, n, m }
    }

    pub fn validate(&self, d: &Dilation) -> Result<()> {
        d.check_scale(self.j)?;
        d.check_subband(self.m)
    }
}

impl fmt::Display for AtomIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(j={}, n={}, m={})", self.j, self.n, self.m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Closure {
    LoClosedHiOpen,
    LoOpenHiClosed,
}

impl Closure {
    /// Convention used everywhere in this crate: intervals on the positive axis are
    /// `[lo, hi)`, intervals on the negative axis are `(lo, hi]`.
    pub fn for_side(lo: &Rational) -> Closure {
        if lo.is_negative() {
            Closure::LoOpenHiClosed
        } else {
            Closure::LoClosedHiOpen
        }
    }
}

/// Half-open interval with endpoints in units of pi.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiInterval {
    lo: Rational,
    hi: Rational,
    closure: Closure,
}

impl PiInterval {
    pub fn new(lo: Rational, hi: Rational, closure: Closure) -> Result<Self> {
        if lo >= hi {
            return Err(Error::domain(format!(
                "empty interval: lo={} >= hi={}",
                format_ratio(&lo),
                format_ratio(&hi)
            )));
        }
        Ok(PiInterval { lo, hi, closure })
    }

    /// Interval with the sign-side closure convention of [`Closure::for_side`].
    pub fn conventional(lo: Rational, hi: Rational) -> Result<Self> {
        let c = Closure::for_side(&lo);
        Self::new(lo, hi, c)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }

    pub fn len(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.hi + &self.lo) / int(2)
    }

    /// `(-hi, -lo]` for `[lo, hi)` and vice versa.
    pub fn mirror(&self) -> PiInterval {
        let closure = match self.closure {
            Closure::LoClosedHiOpen => Closure::LoOpenHiClosed,
            Closure::LoOpenHiClosed => Closure::LoClosedHiOpen,
        };
        PiInterval {
            lo: -&self.hi,
            hi: -&self.lo,
            closure,
        }
    }

    /// Exact membership of `x * pi`.
    pub fn contains(&self, x: &Rational) -> bool {
        match self.closure {
            Closure::LoClosedHiOpen => &self.lo <= x && x < &self.hi,
            Closure::LoOpenHiClosed => &self.lo < x && x <= &self.hi,
        }
    }

    /// Membership of a radian frequency, comparing against `f64` edges.
    pub fn contains_rad(&self, omega: f64) -> bool {
        let (lo, hi) = self.rad_edges();
        match self.closure {
            Closure::LoClosedHiOpen => lo <= omega && omega < hi,
            Closure::LoOpenHiClosed => lo < omega && omega <= hi,
        }
    }

    /// Edges in radians.
    pub fn rad_edges(&self) -> (f64, f64) {
        (
            to_f64(&self.lo) * std::f64::consts::PI,
            to_f64(&self.hi) * std::f64::consts::PI,
        )
    }

    /// Closed-hull containment `other ⊆ self`, ignoring the measure-zero endpoints.
    pub fn covers(&self, other: &PiInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Intersection with the sign-side closure convention, `None` if it has zero length.
    pub fn intersect(&self, other: &PiInterval) -> Option<PiInterval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        if lo < hi {
            Some(PiInterval {
                closure: Closure::for_side(&lo),
                lo,
                hi,
            })
        } else {
            None
        }
    }
}

impl fmt::Display for PiInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (l, r) = match self.closure {
            Closure::LoClosedHiOpen => ('[', ')'),
            Closure::LoOpenHiClosed => ('(', ']'),
        };
        write!(
            f,
            "{l}{}π, {}π{r}",
            format_ratio(&self.lo),
            format_ratio(&self.hi)
        )
    }
}

/// A positive band `[lo, hi)` and its mirror `(-hi, -lo]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SupportPair {
    pos: PiInterval,
    neg: PiInterval,
}

impl SupportPair {
    pub fn from_positive(lo: Rational, hi: Rational) -> Result<Self> {
        if !lo.is_positive() {
            return Err(Error::domain("support pair needs a strictly positive lower edge"));
        }
        let pos = PiInterval::new(lo, hi, Closure::LoClosedHiOpen)?;
        let neg = pos.mirror();
        Ok(SupportPair { pos, neg })
    }

    pub fn pos(&self) -> &PiInterval {
        &self.pos
    }

    pub fn neg(&self) -> &PiInterval {
        &self.neg
    }

    pub fn sides(&self) -> [&PiInterval; 2] {
        [&self.neg, &self.pos]
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.pos.contains(x) || self.neg.contains(x)
    }

    pub fn contains_rad(&self, omega: f64) -> bool {
        self.pos.contains_rad(omega) || self.neg.contains_rad(omega)
    }

    /// Total measure in units of pi (both sides).
    pub fn measure(&self) -> Rational {
        self.pos.len() * int(2)
    }
}

impl fmt::Display for SupportPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ∪ {}", self.neg, self.pos)
    }
}

/// Frequency support of `psi^m(M^j w)`: `M^{-j}(q+m-1)/q <= |w|/pi < M^{-j}(q+m)/q`.
pub fn support_of(d: &Dilation, j: i64, m: i64) -> Result<SupportPair> {
    d.check_subband(m)?;
    let scale = d.pow(-j)?;
    let q = int(d.q() as i64);
    let lo = &scale * int(d.q() as i64 + m - 1) / &q;
    let hi = &scale * int(d.q() as i64 + m) / &q;
    SupportPair::from_positive(lo, hi)
}

/// Annulus `M^{-j} <= |w|/pi < M^{-j+1}` holding all subbands of scale `j`.
pub fn annulus(d: &Dilation, j: i64) -> Result<SupportPair> {
    let lo = d.pow(-j)?;
    let hi = d.pow(-j + 1)?;
    SupportPair::from_positive(lo, hi)
}

/// Bandpass parameters of the subspace `W_j^m`. Frequencies are in units of pi,
/// the period in seconds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BandSpace {
    #[serde(skip)]
    pub dilation: Dilation,
    pub j: i64,
    pub m: i64,
    #[serde(with = "ratio_str")]
    pub f_low: Rational,
    #[serde(with = "ratio_str")]
    pub f_high: Rational,
    #[serde(with = "ratio_str")]
    pub bandwidth: Rational,
    #[serde(with = "ratio_str")]
    pub period: Rational,
    #[serde(with = "ratio_str")]
    pub sampling_freq: Rational,
}

impl BandSpace {
    /// `F_H / B`, an integer for every valid band.
    pub fn position(&self) -> Rational {
        &self.f_high / &self.bandwidth
    }

    pub fn period_f64(&self) -> f64 {
        to_f64(&self.period)
    }
}

pub fn band_space(d: &Dilation, j: i64, m: i64) -> Result<BandSpace> {
    let s = support_of(d, j, m)?;
    let f_low = s.pos().lo().clone();
    let f_high = s.pos().hi().clone();
    let bandwidth = &f_high - &f_low;
    let period = int(d.q() as i64) * d.pow(j)?;
    let sampling_freq = &bandwidth * int(2);
    Ok(BandSpace {
        dilation: *d,
        j,
        m,
        f_low,
        f_high,
        bandwidth,
        period,
        sampling_freq,
    })
}

/// Result of an exact tiling audit over a contiguous scale range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingReport {
    pub disjoint: bool,
    pub cover: bool,
    #[serde(with = "ratio_pairs")]
    pub gaps: Vec<(Rational, Rational)>,
    #[serde(with = "ratio_pairs")]
    pub overlaps: Vec<(Rational, Rational)>,
    /// Positive-side extent `[lo, hi)` of the union, when there are no gaps.
    #[serde(skip)]
    pub union: Option<(Rational, Rational)>,
    /// The annulus stack `[M^{-j_hi}, M^{-j_lo+1})` the union is compared against.
    #[serde(skip)]
    pub expected: Option<(Rational, Rational)>,
}

impl TilingReport {
    pub fn passed(&self) -> bool {
        self.disjoint && self.cover
    }
}

struct Sweep {
    gaps: Vec<(Rational, Rational)>,
    overlaps: Vec<(Rational, Rational)>,
    start: Rational,
    end: Rational,
}

// Intervals must share one closure type, so equal endpoints abut without gap or overlap.
fn sweep(mut ivs: Vec<PiInterval>) -> Sweep {
    ivs.sort_by(|a, b| a.lo.cmp(&b.lo).then_with(|| a.hi.cmp(&b.hi)));
    let start = ivs[0].lo.clone();
    let mut cursor = start.clone();
    let mut gaps = Vec::new();
    let mut overlaps = Vec::new();
    for iv in ivs {
        match iv.lo.cmp(&cursor) {
            Ordering::Greater => gaps.push((cursor.clone(), iv.lo.clone())),
            Ordering::Less => overlaps.push((iv.lo.clone(), (&iv.hi).min(&cursor).clone())),
            Ordering::Equal => {}
        }
        if iv.hi > cursor {
            cursor = iv.hi;
        }
    }
    Sweep {
        gaps,
        overlaps,
        start,
        end: cursor,
    }
}

/// Checks that the supports of all `(j, m)` with `j_lo <= j <= j_hi` are pairwise
/// disjoint and that their union is exactly `±[M^{-j_hi}, M^{-j_lo+1})`.
pub fn tiling_check(d: &Dilation, j_lo: i64, j_hi: i64) -> Result<TilingReport> {
    if j_lo > j_hi {
        return Err(Error::precondition(format!("empty scale range {j_lo}..={j_hi}")));
    }
    let mut pos = Vec::new();
    for j in j_lo..=j_hi {
        for m in 1..=d.subbands() as i64 {
            pos.push(support_of(d, j, m)?.pos().clone());
        }
    }
    let neg: Vec<PiInterval> = pos.iter().map(PiInterval::mirror).collect();
    let exp_lo = d.pow(-j_hi)?;
    let exp_hi = d.pow(-j_lo + 1)?;

    let p = sweep(pos);
    let n = sweep(neg);

    let mut gaps = n.gaps;
    gaps.extend(p.gaps);
    let mut overlaps = n.overlaps;
    overlaps.extend(p.overlaps);

    let extent_ok =
        p.start == exp_lo && p.end == exp_hi && n.start == -exp_hi.clone() && n.end == -exp_lo.clone();
    let cover = gaps.is_empty() && extent_ok;
    let union = gaps.is_empty().then(|| (p.start.clone(), p.end.clone()));
    Ok(TilingReport {
        disjoint: overlaps.is_empty(),
        cover,
        gaps,
        overlaps,
        union,
        expected: Some((exp_lo, exp_hi)),
    })
}

/// `true` when `x` is an integer.
pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d53() -> Dilation {
        Dilation::new(5, 3).unwrap()
    }

    fn pos(s: &SupportPair) -> (Rational, Rational) {
        (s.pos().lo().clone(), s.pos().hi().clone())
    }

    #[test]
    fn dilation_rejects_bad_pairs() {
        assert!(Dilation::new(4, 2).is_err());
        assert!(Dilation::new(3, 3).is_err());
        assert!(Dilation::new(2, 3).is_err());
        assert!(Dilation::new(2, 0).is_err());
        let d = Dilation::new(7, 4).unwrap();
        assert_eq!(d.subbands(), 3);
    }

    #[test]
    fn support_examples() {
        let d = d53();
        assert_eq!(pos(&support_of(&d, 0, 1).unwrap()), (int(1), rational(4, 3)));
        assert_eq!(
            pos(&support_of(&d, 1, 1).unwrap()),
            (rational(3, 5), rational(4, 5))
        );
        let d21 = Dilation::new(2, 1).unwrap();
        assert_eq!(pos(&support_of(&d21, 0, 1).unwrap()), (int(1), int(2)));
    }

    #[test]
    fn support_errors() {
        let d = d53();
        assert!(matches!(
            support_of(&d, 0, 0),
            Err(Error::SubbandOutOfRange { .. })
        ));
        assert!(matches!(
            support_of(&d, 0, 3),
            Err(Error::SubbandOutOfRange { .. })
        ));
        assert!(matches!(support_of(&d, 65, 1), Err(Error::ScaleOverflow { .. })));
        assert!(support_of(&d, 64, 1).is_ok());
        let tight = d.with_scale_bound(4);
        assert!(matches!(
            support_of(&tight, -5, 1),
            Err(Error::ScaleOverflow { .. })
        ));
    }

    #[test]
    fn negative_support_is_mirrored_and_lo_open() {
        let s = support_of(&d53(), 0, 1).unwrap();
        assert_eq!(s.neg().lo(), &rational(-4, 3));
        assert_eq!(s.neg().hi(), &int(-1));
        assert_eq!(s.neg().closure(), Closure::LoOpenHiClosed);
        assert!(s.contains(&int(1)));
        assert!(s.contains(&int(-1)));
        assert!(!s.contains(&rational(4, 3)));
        assert!(!s.contains(&rational(-4, 3)));
    }

    #[test]
    fn annulus_examples() {
        let d = d53();
        assert_eq!(pos(&annulus(&d, 0).unwrap()), (int(1), rational(5, 3)));
        assert_eq!(pos(&annulus(&d, -1).unwrap()), (rational(5, 3), rational(25, 9)));
        let d32 = Dilation::new(3, 2).unwrap();
        assert_eq!(pos(&annulus(&d32, 0).unwrap()), (int(1), rational(3, 2)));
    }

    #[test]
    fn tiling_examples() {
        let d = d53();
        let r = tiling_check(&d, 0, 0).unwrap();
        assert!(r.disjoint && r.cover);
        assert_eq!(r.union, Some((int(1), rational(5, 3))));

        let r = tiling_check(&d, -1, 1).unwrap();
        assert!(r.disjoint && r.cover);
        assert_eq!(r.union, Some((rational(3, 5), rational(25, 9))));

        let d21 = Dilation::new(2, 1).unwrap();
        let r = tiling_check(&d21, 0, 1).unwrap();
        assert!(r.passed());
        assert_eq!(r.union, Some((rational(1, 2), int(2))));

        assert!(tiling_check(&d, 1, 0).is_err());
    }

    #[test]
    fn sweep_detects_gaps_and_overlaps() {
        let iv = |a, b, c, e| PiInterval::conventional(rational(a, b), rational(c, e)).unwrap();
        let s = sweep(vec![iv(0, 1, 1, 1), iv(2, 1, 3, 1), iv(5, 2, 4, 1)]);
        assert_eq!(s.gaps, vec![(int(1), int(2))]);
        assert_eq!(s.overlaps, vec![(rational(5, 2), int(3))]);
        assert_eq!(s.end, int(4));
    }

    #[test]
    fn tiling_report_json_shape() {
        let r = tiling_check(&d53(), 0, 0).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"disjoint": true, "cover": true, "gaps": [], "overlaps": []})
        );
        let r2 = TilingReport {
            disjoint: false,
            cover: false,
            gaps: vec![(rational(1, 2), int(1))],
            overlaps: vec![],
            union: None,
            expected: None,
        };
        let s = serde_json::to_string(&r2).unwrap();
        assert!(s.contains(r#"["1/2","1/1"]"#), "{s}");
        let back: TilingReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back.gaps, r2.gaps);
    }

    #[test]
    fn band_space_examples() {
        let d = d53();
        let b = band_space(&d, 0, 1).unwrap();
        assert_eq!(b.f_low, int(1));
        assert_eq!(b.f_high, rational(4, 3));
        assert_eq!(b.bandwidth, rational(1, 3));
        assert_eq!(b.position(), int(4));
        assert_eq!(b.period, int(3));
        assert_eq!(b.sampling_freq, rational(2, 3));

        let b = band_space(&d, 1, 2).unwrap();
        assert_eq!(b.period, int(5));
        assert_eq!(b.position(), int(5));

        let b = band_space(&Dilation::new(2, 1).unwrap(), 0, 1).unwrap();
        assert_eq!(b.period, int(1));
        assert_eq!(b.position(), int(2));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_ratio("3/5").unwrap(), rational(3, 5));
        assert_eq!(parse_ratio("-6/4").unwrap(), rational(-3, 2));
        assert_eq!(parse_ratio("7").unwrap(), int(7));
        assert_eq!(parse_ratio("0.6").unwrap(), rational(3, 5));
        assert_eq!(parse_ratio("-1.25").unwrap(), rational(-5, 4));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("x").is_err());
        assert_eq!(format_ratio(&int(2)), "2/1");
        assert_eq!(format_ratio(&rational(-4, 6)), "-2/3");
    }

    #[test]
    fn intersect_follows_side_convention() {
        let a = PiInterval::conventional(rational(1, 2), rational(6, 5)).unwrap();
        let b = PiInterval::conventional(int(1), rational(4, 3)).unwrap();
        let c = a.intersect(&b).unwrap();
        assert_eq!((c.lo(), c.hi()), (&int(1), &rational(6, 5)));
        assert_eq!(c.closure(), Closure::LoClosedHiOpen);
        let far = PiInterval::conventional(int(2), int(3)).unwrap();
        assert!(a.intersect(&far).is_none());
    }
}
