//! Test signals defined by compactly supported spectra.
//!
//! [`PiecewiseConstSpectrum`] holds constant complex values on exact rational intervals
//! (units of pi), which makes band membership decidable and gives closed forms for the
//! time signal and its energy. [`BandTrigSpectrum`] is the synthesis-side form: a finite
//! sum of atom spectra, i.e. a trigonometric polynomial per `(j, m)` band.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactfreq::{
    annulus, format_ratio, int, parse_ratio, support_of, to_f64, AtomIndex, Dilation, PiInterval, Rational,
    SupportPair,
};
use crate::kernels::{sinc, Atom, Flavor};

#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub interval: PiInterval,
    pub value: Complex64,
}

impl Piece {
    pub fn new(interval: PiInterval, value: Complex64) -> Self {
        Piece { interval, value }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PiecewiseConstSpectrum {
    pieces: Vec<Piece>,
    hermitian: bool,
}

impl PiecewiseConstSpectrum {
    /// Validates disjointness (exact; shared endpoints are allowed) and, if `hermitian`, that every piece
    /// has a mirrored partner carrying the conjugate value.
    pub fn new(mut pieces: Vec<Piece>, hermitian: bool) -> Result<Self> {
        pieces.sort_by(|a, b| a.interval.lo().cmp(b.interval.lo()));
        for w in pieces.windows(2) {
            let (a, b) = (&w[0].interval, &w[1].interval);
            if a.hi() > b.lo() {
                return Err(Error::domain(format!("spectrum pieces {a} and {b} overlap")));
            }
        }
        if pieces
            .iter()
            .any(|p| !(p.value.re.is_finite() && p.value.im.is_finite()))
        {
            return Err(Error::domain("spectrum values must be finite"));
        }
        if hermitian {
            for p in &pieces {
                let mirror = p.interval.mirror();
                let ok = pieces
                    .iter()
                    .any(|o| o.interval == mirror && o.value == p.value.conj());
                if !ok {
                    return Err(Error::domain(format!(
                        "hermitian spectrum lacks the conjugate partner of {}",
                        p.interval
                    )));
                }
            }
        }
        Ok(PiecewiseConstSpectrum { pieces, hermitian })
    }

    pub fn zero() -> Self {
        PiecewiseConstSpectrum {
            pieces: Vec::new(),
            hermitian: true,
        }
    }

    /// Pieces `[lo, hi)` on the positive axis only (a complex-valued signal).
    pub fn one_sided(pieces: Vec<(Rational, Rational, Complex64)>) -> Result<Self> {
        let pieces = pieces
            .into_iter()
            .map(|(lo, hi, v)| Ok(Piece::new(PiInterval::conventional(lo, hi)?, v)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(pieces, false)
    }

    /// Positive pieces plus their conjugate mirrors (a real-valued signal).
    pub fn hermitian_from_positive(pieces: Vec<(Rational, Rational, Complex64)>) -> Result<Self> {
        let mut out = Vec::with_capacity(2 * pieces.len());
        for (lo, hi, v) in pieces {
            if lo < int(0) {
                return Err(Error::domain("hermitian_from_positive needs lo >= 0"));
            }
            let iv = PiInterval::conventional(lo, hi)?;
            out.push(Piece::new(iv.mirror(), v.conj()));
            out.push(Piece::new(iv, v));
        }
        Self::new(out, true)
    }

    /// Spectrum of the translation-free atom `psi^m_{j,0}`: `M^{j/2} amp` on its band pair.
    pub fn atom(d: &Dilation, j: i64, m: i64, flavor: Flavor) -> Result<Self> {
        let s = support_of(d, j, m)?;
        let v = Complex64::new(d.pow_f64(j)?.sqrt() * flavor.amplitude(d), 0.0);
        Self::new(
            vec![Piece::new(s.neg().clone(), v), Piece::new(s.pos().clone(), v)],
            true,
        )
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// `(1/2pi) int |f^|^2 = sum |v|^2 * len / 2` with `len` in units of pi.
    pub fn norm_sq(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.value.norm_sqr() * to_f64(&p.interval.len()) / 2.0)
            .sum()
    }

    /// Value of `f^(w)` at `w = omega_over_pi * pi`, exact membership.
    pub fn value_at(&self, omega_over_pi: &Rational) -> Complex64 {
        self.pieces
            .iter()
            .find(|p| p.interval.contains(omega_over_pi))
            .map_or(Complex64::new(0.0, 0.0), |p| p.value)
    }

    pub fn evaluator(&self) -> TimeEvaluator {
        let terms = self
            .pieces
            .iter()
            .map(|p| {
                let len = to_f64(&p.interval.len()) * PI;
                let mid = to_f64(&p.interval.mid()) * PI;
                (p.value * (len / (2.0 * PI)), mid, len / 2.0)
            })
            .collect();
        TimeEvaluator { terms }
    }

    pub fn eval_time(&self, x: f64) -> Result<Complex64> {
        if !x.is_finite() {
            return Err(Error::domain(format!("x must be finite, got {x}")));
        }
        Ok(self.evaluator().eval(x))
    }

    /// Exact intersection with a band pair.
    pub fn restrict(&self, band: &SupportPair) -> PiecewiseConstSpectrum {
        let pieces = self
            .pieces
            .iter()
            .flat_map(|p| {
                band.sides()
                    .into_iter()
                    .filter_map(|side| p.interval.intersect(side))
                    .map(|iv| Piece::new(iv, p.value))
                    .collect::<Vec<_>>()
            })
            .collect();
        Self::new(pieces, self.hermitian).expect("restriction of a valid spectrum is valid")
    }

    pub fn scale(&self, alpha: Complex64) -> PiecewiseConstSpectrum {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece::new(p.interval.clone(), p.value * alpha))
            .collect();
        PiecewiseConstSpectrum {
            pieces,
            hermitian: self.hermitian && alpha.im == 0.0,
        }
    }

    /// Pointwise sum, refined at every breakpoint of either operand.
    pub fn add(&self, other: &PiecewiseConstSpectrum) -> Result<PiecewiseConstSpectrum> {
        let mut cuts: Vec<Rational> = self
            .pieces
            .iter()
            .chain(&other.pieces)
            .flat_map(|p| [p.interval.lo().clone(), p.interval.hi().clone()])
            .collect();
        cuts.sort();
        cuts.dedup();
        let mut pieces = Vec::new();
        for w in cuts.windows(2) {
            let iv = PiInterval::conventional(w[0].clone(), w[1].clone())?;
            let mid = iv.mid();
            let v = self.value_at(&mid) + other.value_at(&mid);
            let covered = self
                .pieces
                .iter()
                .chain(&other.pieces)
                .any(|p| p.interval.contains(&mid));
            if covered {
                pieces.push(Piece::new(iv, v));
            }
        }
        Self::new(pieces, self.hermitian && other.hermitian)
    }

    pub fn to_json(&self) -> SpectrumJson {
        SpectrumJson {
            pieces: self
                .pieces
                .iter()
                .map(|p| PieceJson {
                    lo: format_ratio(p.interval.lo()),
                    hi: format_ratio(p.interval.hi()),
                    re: p.value.re,
                    im: p.value.im,
                })
                .collect(),
            hermitian: self.hermitian,
        }
    }

    pub fn from_json(j: &SpectrumJson) -> Result<Self> {
        let pieces = j
            .pieces
            .iter()
            .map(|p| {
                let iv = PiInterval::conventional(parse_ratio(&p.lo)?, parse_ratio(&p.hi)?)?;
                Ok(Piece::new(iv, Complex64::new(p.re, p.im)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(pieces, j.hermitian)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: SpectrumJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&j)
    }
}

/// Precomputed `f64` form of a spectrum for repeated time evaluation.
///
/// Each piece contributes `v (len/2pi) e^{i mid x} sinc(len x / 2)`, which equals
/// `v (e^{i hi x} - e^{i lo x}) / (2 pi i x)` without the cancellation near `x = 0`.
#[derive(Debug, Clone)]
pub struct TimeEvaluator {
    terms: Vec<(Complex64, f64, f64)>,
}

impl TimeEvaluator {
    pub fn eval(&self, x: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|&(w, mid, half)| w * Complex64::from_polar(sinc(half * x), mid * x))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceJson {
    pub lo: String,
    pub hi: String,
    pub re: f64,
    pub im: f64,
}

/// Spectrum file schema; endpoints are `"num/den"` in units of pi.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub pieces: Vec<PieceJson>,
    pub hermitian: bool,
}

pub fn norm_sq(s: &PiecewiseConstSpectrum) -> f64 {
    s.norm_sq()
}

pub fn eval_time(s: &PiecewiseConstSpectrum, x: f64) -> Result<Complex64> {
    s.eval_time(x)
}

pub fn restrict(s: &PiecewiseConstSpectrum, band: &SupportPair) -> PiecewiseConstSpectrum {
    s.restrict(band)
}

/// Number of grid cells per annulus for [`random_spectrum`] endpoints, per unit of `q`.
pub const RANDOM_GRID_PER_Q: u64 = 64;

/// Deterministic hermitian test spectrum: `pieces_per_annulus` pieces inside each listed
/// annulus, endpoints on a grid of `64 q` equal cells of the annulus, values in the unit disk.
pub fn random_spectrum(
    seed: u64,
    annuli: &[i64],
    d: &Dilation,
    pieces_per_annulus: usize,
) -> Result<PiecewiseConstSpectrum> {
    if pieces_per_annulus == 0 {
        return Err(Error::precondition("pieces_per_annulus must be at least 1"));
    }
    let cells = RANDOM_GRID_PER_Q * d.q();
    if 2 * pieces_per_annulus as u64 > cells + 1 {
        return Err(Error::precondition(format!(
            "at most {} pieces fit in one annulus",
            cells.div_ceil(2)
        )));
    }
    let mut js = annuli.to_vec();
    js.sort_unstable();
    js.dedup();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos = Vec::new();
    for j in js {
        let a = annulus(d, j)?;
        let lo = a.pos().lo();
        let step = a.pos().len() / int(cells as i64);
        let mut ks = sample(&mut rng, cells as usize + 1, 2 * pieces_per_annulus).into_vec();
        ks.sort_unstable();
        for pair in ks.chunks(2) {
            let edge = |k: usize| lo + &step * int(k as i64);
            let r = rng.gen::<f64>().sqrt();
            let th = rng.gen_range(0.0..2.0 * PI);
            pos.push((edge(pair[0]), edge(pair[1]), Complex64::from_polar(r, th)));
        }
    }
    PiecewiseConstSpectrum::hermitian_from_positive(pos)
}

/// `f^(w) = sum_{(j,m)} sum_n c_n psi^^m_{j,n}(w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandTrigSpectrum {
    dilation: Dilation,
    flavor: Flavor,
    bands: BTreeMap<(i64, i64), Vec<(i64, Complex64)>>,
}

impl BandTrigSpectrum {
    pub fn new(dilation: Dilation, flavor: Flavor) -> Self {
        BandTrigSpectrum {
            dilation,
            flavor,
            bands: BTreeMap::new(),
        }
    }

    pub fn dilation(&self) -> &Dilation {
        &self.dilation
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// Terms keyed by `(j, m)`.
    pub fn bands(&self) -> &BTreeMap<(i64, i64), Vec<(i64, Complex64)>> {
        &self.bands
    }

    pub fn is_empty(&self) -> bool {
        self.bands.values().all(Vec::is_empty)
    }

    pub fn term_count(&self) -> usize {
        self.bands.values().map(Vec::len).sum()
    }

    pub fn push(&mut self, idx: AtomIndex, coeff: Complex64) -> Result<()> {
        idx.validate(&self.dilation)?;
        self.bands.entry((idx.j, idx.m)).or_default().push((idx.n, coeff));
        Ok(())
    }

    pub fn eval_freq(&self, omega: f64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&(j, m), terms) in &self.bands {
            for &(n, c) in terms {
                let a = Atom::new(self.dilation, AtomIndex::new(j, n, m), self.flavor)?;
                acc += c * a.freq(omega);
            }
        }
        Ok(acc)
    }
}
