//! Analysis and synthesis of spectrum-defined signals.
//!
//! Coefficients `c_{j,n,m} = <f, psi^m_{j,n}> = (1/2pi) int f^(w) conj(psi^^m_{j,n}(w)) dw`
//! are closed form: on each piece of `f^` intersected with a band the integrand is a
//! constant times `e^{i n q M^j w}`. The phase `n q M^j * mid` is reduced mod 2 (units
//! of pi) in exact arithmetic before it is rounded.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::io::{self, BufRead, Write};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::analytic_ip::{band_norm_sq, same_band_offdiag};
use crate::error::{Error, Result};
use crate::exactfreq::{annulus, int, support_of, to_f64, AtomIndex, Dilation, Rational};
use crate::exec::Exec;
use crate::kernels::{sinc, Flavor};
use crate::spectra::{BandTrigSpectrum, PiecewiseConstSpectrum};

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    dilation: Dilation,
    flavor: Flavor,
    entries: BTreeMap<AtomIndex, Complex64>,
}

impl CoefficientSet {
    pub fn new(dilation: Dilation, flavor: Flavor) -> Self {
        CoefficientSet {
            dilation,
            flavor,
            entries: BTreeMap::new(),
        }
    }

    pub fn dilation(&self) -> &Dilation {
        &self.dilation
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn insert(&mut self, idx: AtomIndex, c: Complex64) -> Result<()> {
        idx.validate(&self.dilation)?;
        self.entries.insert(idx, c);
        Ok(())
    }

    pub fn get(&self, idx: &AtomIndex) -> Option<Complex64> {
        self.entries.get(idx).copied()
    }

    /// Coefficient or zero.
    pub fn coeff(&self, idx: &AtomIndex) -> Complex64 {
        self.get(idx).unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AtomIndex, &Complex64)> {
        self.entries.iter()
    }

    pub fn energy(&self) -> f64 {
        self.entries.values().map(|c| c.norm_sqr()).sum()
    }

    /// Drops entries with `|c| < eps`. Never applied implicitly.
    pub fn pruned(&self, eps: f64) -> CoefficientSet {
        let entries = self
            .entries
            .iter()
            .filter(|(_, c)| c.norm() >= eps)
            .map(|(k, v)| (*k, *v))
            .collect();
        CoefficientSet {
            entries,
            ..self.clone()
        }
    }

    /// Largest `|a - b|` over the union of both index sets.
    pub fn max_abs_diff(&self, other: &CoefficientSet) -> f64 {
        let keys: BTreeSet<&AtomIndex> = self.entries.keys().chain(other.entries.keys()).collect();
        keys.into_iter()
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{COEFF_CSV_HEADER}")?;
        writeln!(w, "j,n,m,re,im")?;
        for (i, c) in &self.entries {
            writeln!(w, "{},{},{},{:.16e},{:.16e}", i.j, i.n, i.m, c.re, c.im)?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R, dilation: Dilation, flavor: Flavor) -> Result<CoefficientSet> {
        let mut out = CoefficientSet::new(dilation, flavor);
        let bad = |line: &str| Error::Parse(format!("bad coefficient row {line:?}"));
        for line in r.lines() {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line == "j,n,m,re,im" {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 5 {
                return Err(bad(line));
            }
            let int = |s: &str| s.trim().parse::<i64>().map_err(|_| bad(line));
            let real = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(line));
            out.insert(
                AtomIndex::new(int(f[0])?, int(f[1])?, int(f[2])?),
                Complex64::new(real(f[3])?, real(f[4])?),
            )?;
        }
        Ok(out)
    }
}

pub const COEFF_CSV_HEADER: &str = "# rlpw-coeffs v1";

// One piece of f^ restricted to one band, prepared for all n.
struct Segment {
    weight: Complex64,
    // q M^j * mid, in units of pi, as a reduced fraction
    phase_num: BigInt,
    phase_den: BigInt,
    // q M^j * len / 2 * pi, radians per unit n
    sinc_rate: f64,
}

impl Segment {
    fn term(&self, n: i64) -> Complex64 {
        let two_den = &self.phase_den * 2;
        let r = (BigInt::from(n) * &self.phase_num).mod_floor(&two_den);
        let phase = r.to_f64().unwrap_or(0.0) / self.phase_den.to_f64().unwrap_or(1.0) * PI;
        self.weight * Complex64::from_polar(sinc(n as f64 * self.sinc_rate), phase)
    }
}

fn band_segments(
    f: &PiecewiseConstSpectrum,
    d: &Dilation,
    j: i64,
    m: i64,
    flavor: Flavor,
) -> Result<Vec<Segment>> {
    let band = support_of(d, j, m)?;
    let scale = d.pow(j)?;
    let rate: Rational = int(d.q() as i64) * &scale;
    let atom_mag = to_f64(&scale).sqrt() * flavor.amplitude(d);
    let mut out = Vec::new();
    for p in f.pieces() {
        for side in band.sides() {
            if let Some(iv) = p.interval.intersect(side) {
                let len = iv.len();
                let phase = &rate * iv.mid();
                out.push(Segment {
                    weight: p.value * (atom_mag * to_f64(&len) / 2.0),
                    phase_num: phase.numer().clone(),
                    phase_den: phase.denom().clone(),
                    sinc_rate: to_f64(&(&rate * &len)) * PI / 2.0,
                });
            }
        }
    }
    Ok(out)
}

fn dedup_scales(j_set: &[i64]) -> Vec<i64> {
    let mut js = j_set.to_vec();
    js.sort_unstable();
    js.dedup();
    js
}

/// Checks that every piece of `f` lies in the union of the annuli of `j_set`.
pub fn check_support(f: &PiecewiseConstSpectrum, d: &Dilation, j_set: &[i64]) -> Result<()> {
    let annuli = dedup_scales(j_set)
        .into_iter()
        .map(|j| annulus(d, j))
        .collect::<Result<Vec<_>>>()?;
    let mut leaks = Vec::new();
    for p in f.pieces() {
        let covered: Rational = annuli
            .iter()
            .flat_map(|a| a.sides())
            .filter_map(|side| p.interval.intersect(side))
            .map(|iv| iv.len())
            .fold(Rational::zero(), |acc, l| acc + l);
        if covered != p.interval.len() {
            leaks.push(p.interval.to_string());
        }
    }
    if leaks.is_empty() {
        Ok(())
    } else {
        Err(Error::precondition(format!(
            "spectrum leaks outside the annuli of j in {j_set:?}: {}",
            leaks.join(", ")
        )))
    }
}

pub fn analyze(
    f: &PiecewiseConstSpectrum,
    d: &Dilation,
    j_set: &[i64],
    n_max: u64,
    flavor: Flavor,
) -> Result<CoefficientSet> {
    analyze_with(f, d, j_set, n_max, flavor, Exec::default())
}

/// Coefficients for every `(j, m)` band of `j_set` that `f` touches and every
/// `|n| <= n_max`. Bands `f` does not reach produce no entries.
pub fn analyze_with(
    f: &PiecewiseConstSpectrum,
    d: &Dilation,
    j_set: &[i64],
    n_max: u64,
    flavor: Flavor,
    exec: Exec,
) -> Result<CoefficientSet> {
    check_support(f, d, j_set)?;
    let n_max = n_max as i64;
    let mut bands = Vec::new();
    for j in dedup_scales(j_set) {
        for m in 1..=d.subbands() as i64 {
            let segs = band_segments(f, d, j, m, flavor)?;
            if !segs.is_empty() {
                bands.push(((j, m), segs));
            }
        }
    }
    let tasks: Vec<(usize, i64)> = (0..bands.len())
        .flat_map(|b| (-n_max..=n_max).map(move |n| (b, n)))
        .collect();
    let values = exec.map(&tasks, |&(b, n)| {
        bands[b].1.iter().map(|s| s.term(n)).sum::<Complex64>()
    });

    let mut out = CoefficientSet::new(*d, flavor);
    for (&(b, n), c) in tasks.iter().zip(values) {
        let (j, m) = bands[b].0;
        out.entries.insert(AtomIndex::new(j, n, m), c);
    }
    Ok(out)
}

/// The finite expansion `sum c psi^^m_{j,n}` as a band-wise trigonometric polynomial.
pub fn synthesize(c: &CoefficientSet) -> BandTrigSpectrum {
    let mut out = BandTrigSpectrum::new(c.dilation, c.flavor);
    for (&idx, &v) in &c.entries {
        out.push(idx, v)
            .expect("coefficient indices are validated on insert");
    }
    out
}

pub fn analyze_trig(f: &BandTrigSpectrum, n_max: u64) -> Result<CoefficientSet> {
    analyze_trig_with(f, n_max, Exec::default())
}

/// `<f, psi_{j,n}> = sum_k c_k <psi_{j,k}, psi_{j,n}>` with the closed-form same-band
/// inner products (terms with a different `(j, m)` vanish identically).
pub fn analyze_trig_with(f: &BandTrigSpectrum, n_max: u64, exec: Exec) -> Result<CoefficientSet> {
    let d = *f.dilation();
    let flavor = f.flavor();
    let n_max = n_max as i64;
    let mut out = CoefficientSet::new(d, flavor);
    for (&(j, m), terms) in f.bands() {
        if terms.is_empty() {
            continue;
        }
        let diag = to_f64(&band_norm_sq(&d, j, m, flavor)?);
        let ns: Vec<i64> = (-n_max..=n_max).collect();
        let values = exec.map(&ns, |&n| {
            terms
                .iter()
                .map(|&(k, c)| {
                    let ip = if k == n {
                        diag
                    } else {
                        same_band_offdiag(&d, m, flavor, k - n)
                    };
                    c * ip
                })
                .sum::<Complex64>()
        });
        for (n, v) in ns.into_iter().zip(values) {
            out.entries.insert(AtomIndex::new(j, n, m), v);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParsevalReport {
    #[serde(rename = "norm_sq")]
    pub norm_sq_f: f64,
    #[serde(rename = "partials")]
    pub partial_sums: Vec<(u64, f64)>,
    #[serde(rename = "deficit")]
    pub deficit_at_max_n: f64,
}

impl ParsevalReport {
    /// Partial sums nondecreasing and bounded by `||f||^2 + slack`.
    pub fn is_consistent(&self, slack: f64) -> bool {
        self.partial_sums.windows(2).all(|w| w[1].1 >= w[0].1)
            && self
                .partial_sums
                .iter()
                .all(|&(_, s)| s <= self.norm_sq_f + slack)
    }
}

pub fn parseval_partial(
    f: &PiecewiseConstSpectrum,
    d: &Dilation,
    j_set: &[i64],
    n_list: &[u64],
    flavor: Flavor,
) -> Result<ParsevalReport> {
    parseval_partial_with(f, d, j_set, n_list, flavor, Exec::default())
}

/// `sum_{|n| <= N, j in j_set, m} |c|^2` for each `N` (sorted, deduplicated).
pub fn parseval_partial_with(
    f: &PiecewiseConstSpectrum,
    d: &Dilation,
    j_set: &[i64],
    n_list: &[u64],
    flavor: Flavor,
    exec: Exec,
) -> Result<ParsevalReport> {
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let norm_sq_f = f.norm_sq();
    let Some(&n_top) = ns.last() else {
        return Ok(ParsevalReport {
            norm_sq_f,
            partial_sums: Vec::new(),
            deficit_at_max_n: norm_sq_f,
        });
    };
    let c = analyze_with(f, d, j_set, n_top, flavor, exec)?;
    let mut shell = vec![0.0f64; n_top as usize + 1];
    for (i, v) in c.iter() {
        shell[i.n.unsigned_abs() as usize] += v.norm_sqr();
    }
    let mut acc = 0.0;
    let mut cumulative = Vec::with_capacity(shell.len());
    for e in shell {
        acc += e;
        cumulative.push(acc);
    }
    let partial_sums: Vec<(u64, f64)> = ns.iter().map(|&n| (n, cumulative[n as usize])).collect();
    let top = partial_sums.last().map_or(0.0, |p| p.1);
    Ok(ParsevalReport {
        norm_sq_f,
        partial_sums,
        deficit_at_max_n: norm_sq_f - top,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfreq::rational;
    use approx::assert_abs_diff_eq;

    fn d53() -> Dilation {
        Dilation::new(5, 3).unwrap()
    }

    fn unit_band() -> PiecewiseConstSpectrum {
        PiecewiseConstSpectrum::one_sided(vec![(int(1), rational(4, 3), Complex64::new(1.0, 0.0))]).unwrap()
    }

    #[test]
    fn analyze_single_atom() {
        let d = d53();
        let f = PiecewiseConstSpectrum::atom(&d, 0, 1, Flavor::New).unwrap();
        let c = analyze(&f, &d, &[0], 8, Flavor::New).unwrap();
        for (i, v) in c.iter() {
            let want = if (i.j, i.n, i.m) == (0, 0, 1) { 1.0 } else { 0.0 };
            assert!((v - Complex64::new(want, 0.0)).norm() < 1e-12, "{i}: {v}");
        }
    }

    #[test]
    fn analyze_unit_band_closed_form() {
        let d = d53();
        let c = analyze(&unit_band(), &d, &[0], 9, Flavor::New).unwrap();
        let r3 = 3f64.sqrt();
        assert_abs_diff_eq!(c.coeff(&AtomIndex::new(0, 0, 1)).re, r3 / 6.0, epsilon = 1e-15);
        for n in 1..=9i64 {
            for s in [n, -n] {
                let v = c.coeff(&AtomIndex::new(0, s, 1)).norm();
                let want = if n % 2 == 0 {
                    0.0
                } else {
                    r3 / (3.0 * PI * n as f64)
                };
                assert_abs_diff_eq!(v, want, epsilon = 1e-15);
            }
        }
        // the m = 2 band is never reached
        assert!(c.get(&AtomIndex::new(0, 0, 2)).is_none());
    }

    #[test]
    fn analyze_zero_and_leaks() {
        let d = d53();
        assert!(analyze(&PiecewiseConstSpectrum::zero(), &d, &[0], 4, Flavor::New)
            .unwrap()
            .is_empty());
        let leaky = PiecewiseConstSpectrum::one_sided(vec![(
            rational(1, 2),
            rational(6, 5),
            Complex64::new(1.0, 0.0),
        )])
        .unwrap();
        let err = analyze(&leaky, &d, &[0], 4, Flavor::New).unwrap_err();
        assert!(
            matches!(err, Error::Precondition(ref s) if s.contains("[1/2π, 6/5π)")),
            "{err}"
        );
        // covered once the next scale is included
        assert!(analyze(&leaky, &d, &[0, 1, 2], 4, Flavor::New).is_ok());
    }

    #[test]
    fn synthesize_examples() {
        let d = d53();
        let mut c = CoefficientSet::new(d, Flavor::New);
        assert!(synthesize(&c).is_empty());
        c.insert(AtomIndex::new(0, 0, 1), Complex64::new(1.0, 0.0))
            .unwrap();
        c.insert(AtomIndex::new(0, 1, 1), Complex64::new(0.0, 1.0))
            .unwrap();
        let s = synthesize(&c);
        assert_eq!(s.bands().len(), 1);
        assert_eq!(s.bands()[&(0, 1)].len(), 2);
    }

    #[test]
    fn analyze_trig_recovers() {
        let d = d53();
        let mut c = CoefficientSet::new(d, Flavor::New);
        c.insert(AtomIndex::new(0, 3, 2), Complex64::new(2.0, -1.0))
            .unwrap();
        let back = analyze_trig(&synthesize(&c), 5).unwrap();
        assert_abs_diff_eq!(
            (back.coeff(&AtomIndex::new(0, 3, 2)) - Complex64::new(2.0, -1.0)).norm(),
            0.0,
            epsilon = 1e-10
        );
        assert!(back.max_abs_diff(&c) < 1e-10);
        let empty = CoefficientSet::new(d, Flavor::New);
        assert!(analyze_trig(&synthesize(&empty), 5).unwrap().is_empty());
    }

    #[test]
    fn auscher_round_trip_scales_by_one_over_q() {
        let d = d53();
        let mut c = CoefficientSet::new(d, Flavor::Auscher);
        c.insert(AtomIndex::new(1, -2, 1), Complex64::new(1.5, 0.5))
            .unwrap();
        let back = analyze_trig(&synthesize(&c), 3).unwrap();
        let v = back.coeff(&AtomIndex::new(1, -2, 1));
        assert_abs_diff_eq!((v - Complex64::new(0.5, 0.5 / 3.0)).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn parseval_unit_band() {
        let d = d53();
        let r = parseval_partial(&unit_band(), &d, &[0], &[4, 1, 0], Flavor::New).unwrap();
        assert_eq!(
            r.partial_sums.iter().map(|p| p.0).collect::<Vec<_>>(),
            vec![0, 1, 4]
        );
        assert_abs_diff_eq!(r.partial_sums[0].1, 1.0 / 12.0, epsilon = 1e-15);
        let at1 = 1.0 / 12.0 + 2.0 / (3.0 * PI * PI);
        assert_abs_diff_eq!(r.partial_sums[1].1, at1, epsilon = 1e-15);
        assert!((r.partial_sums[1].1 - 0.15088).abs() < 1e-5);
        assert!(r.is_consistent(1e-10));
        assert_abs_diff_eq!(r.norm_sq_f, 1.0 / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn parseval_atom_and_zero() {
        let d = d53();
        let f = PiecewiseConstSpectrum::atom(&d, 1, 2, Flavor::New).unwrap();
        let r = parseval_partial(&f, &d, &[1], &[0, 3], Flavor::New).unwrap();
        assert!(r.deficit_at_max_n.abs() < 1e-12);
        let z = parseval_partial(&PiecewiseConstSpectrum::zero(), &d, &[0], &[0, 5], Flavor::New).unwrap();
        assert!(z.partial_sums.iter().all(|p| p.1 == 0.0));
        assert_eq!(z.deficit_at_max_n, 0.0);
    }

    #[test]
    fn parseval_json_shape() {
        let r = parseval_partial(&unit_band(), &d53(), &[0], &[0, 2], Flavor::New).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert!(v["norm_sq"].is_f64());
        assert_eq!(v["partials"][1][0], 2);
        assert!(v["deficit"].is_f64());
    }

    #[test]
    fn coefficient_csv_round_trip() {
        let d = d53();
        let c = analyze(&unit_band(), &d, &[0], 3, Flavor::New).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let txt = String::from_utf8(buf.clone()).unwrap();
        assert!(txt.starts_with("# rlpw-coeffs v1\nj,n,m,re,im\n"));
        let back = CoefficientSet::read_csv(&buf[..], d, Flavor::New).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn pruning_is_explicit() {
        let d = d53();
        let c = analyze(&unit_band(), &d, &[0], 4, Flavor::New).unwrap();
        assert_eq!(c.len(), 9);
        // even n != 0 vanish
        assert_eq!(c.pruned(1e-15).len(), 5);
    }

    #[test]
    fn exec_modes_agree() {
        let d = Dilation::new(7, 4).unwrap();
        let f = crate::spectra::random_spectrum(3, &[-1, 0, 1], &d, 2).unwrap();
        let a = analyze_with(&f, &d, &[-1, 0, 1], 20, Flavor::New, Exec::Sequential).unwrap();
        let b = analyze_with(&f, &d, &[-1, 0, 1], 20, Flavor::New, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
