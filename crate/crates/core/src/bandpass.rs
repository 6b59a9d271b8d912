//! Bandpass sampling of `W_j^m` signals and reconstruction from `T = q M^j` samples.
//!
//! For `f` with spectrum inside the `(j, m)` band pair,
//! `f(x) = sum_n f(nT) (T / sqrt(q)) M^{-j} psi^m(M^{-j}(x - nT))`
//! and, substituting `T = q M^j`, the same sum reads
//! `sum_n (f(nT) M^{j/2} sqrt(q)) psi^m_{j,n}(x)`.

use std::io::{self, Write};
use std::ops::RangeInclusive;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exactfreq::{band_space, int, support_of, to_f64, AtomIndex, Dilation};
use crate::exec::Exec;
use crate::kernels::{psi_time, Atom, Flavor};
use crate::spectra::PiecewiseConstSpectrum;

/// `true` iff every piece of `f` lies inside the `(j, m)` band pair (exact).
pub fn membership(f: &PiecewiseConstSpectrum, d: &Dilation, j: i64, m: i64) -> Result<bool> {
    let band = support_of(d, j, m)?;
    Ok(f.pieces()
        .iter()
        .all(|p| band.pos().covers(&p.interval) || band.neg().covers(&p.interval)))
}

/// The subband `m` at scale `j` that holds `f`, or an error naming what leaks.
pub fn owning_subband(f: &PiecewiseConstSpectrum, d: &Dilation, j: i64) -> Result<i64> {
    for m in 1..=d.subbands() as i64 {
        if membership(f, d, j, m)? {
            return Ok(m);
        }
    }
    let bands = (1..=d.subbands() as i64)
        .map(|m| support_of(d, j, m))
        .collect::<Result<Vec<_>>>()?;
    let leaked: Vec<String> = f
        .pieces()
        .iter()
        .filter(|p| {
            !bands
                .iter()
                .any(|b| b.pos().covers(&p.interval) || b.neg().covers(&p.interval))
        })
        .map(|p| p.interval.to_string())
        .collect();
    let msg = if leaked.is_empty() {
        format!("spectrum spans several subbands of scale j={j}")
    } else {
        format!(
            "spectrum leaks outside every subband of scale j={j}: {}",
            leaked.join(", ")
        )
    };
    Err(Error::precondition(msg))
}

/// `f(nT)` for `n` in the range, `T = q M^j`.
pub fn sample(
    f: &PiecewiseConstSpectrum,
    d: &Dilation,
    j: i64,
    n_range: RangeInclusive<i64>,
) -> Result<Vec<(i64, Complex64)>> {
    owning_subband(f, d, j)?;
    let period = int(d.q() as i64) * d.pow(j)?;
    let eval = f.evaluator();
    Ok(n_range
        .map(|n| (n, eval.eval(to_f64(&(&period * int(n))))))
        .collect())
}

/// Precomputed constants of the reconstruction sum for one `(j, m)`.
#[derive(Debug, Clone)]
pub struct Reconstructor {
    dilation: Dilation,
    j: i64,
    m: i64,
    period: f64,
    inv_scale: f64,
    gain: f64,
    atom_gain: f64,
}

impl Reconstructor {
    pub fn new(d: &Dilation, j: i64, m: i64) -> Result<Self> {
        let bs = band_space(d, j, m)?;
        let period = bs.period_f64();
        let inv_scale = d.pow_f64(-j)?;
        let sq = (d.q() as f64).sqrt();
        Ok(Reconstructor {
            dilation: *d,
            j,
            m,
            period,
            inv_scale,
            gain: period / sq * inv_scale,
            atom_gain: d.pow_f64(j)?.sqrt() * sq,
        })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// `f(nT) (T/sqrt(q)) M^{-j} psi^m(M^{-j}(x - nT))`.
    pub fn term_sampling(&self, n: i64, value: Complex64, x: f64) -> Complex64 {
        let arg = self.inv_scale * (x - n as f64 * self.period);
        let psi = psi_time(&self.dilation, self.m, arg).expect("validated subband, finite argument");
        value * (self.gain * psi)
    }

    /// `(f(nT) M^{j/2} sqrt(q)) psi^m_{j,n}(x)`.
    pub fn term_atomic(&self, n: i64, value: Complex64, x: f64) -> Complex64 {
        let atom = Atom::new(self.dilation, AtomIndex::new(self.j, n, self.m), Flavor::New)
            .expect("validated index");
        value * self.atom_gain * atom.time(x)
    }

    pub fn eval(&self, samples: &[(i64, Complex64)], x: f64) -> Complex64 {
        samples.iter().map(|&(n, v)| self.term_sampling(n, v, x)).sum()
    }

    pub fn eval_grid(&self, samples: &[(i64, Complex64)], grid: &[f64], exec: Exec) -> Vec<Complex64> {
        exec.map(grid, |&x| self.eval(samples, x))
    }
}

/// Sampling-series value at `x` from the given samples.
pub fn reconstruct(samples: &[(i64, Complex64)], d: &Dilation, j: i64, m: i64, x: f64) -> Result<Complex64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("x must be finite, got {x}")));
    }
    Ok(Reconstructor::new(d, j, m)?.eval(samples, x))
}

/// Largest `|sqrt(q) psi^m(kq) - delta(k)|` over `|k| <= n_max`, computed through the
/// `T`-grid samples of the atom `psi^m_{j,0}` scaled by `M^{j/2} sqrt(q)`.
pub fn atom_sample_deviation(d: &Dilation, j: i64, m: i64, n_max: u64) -> Result<f64> {
    let atom = Atom::new(*d, AtomIndex::new(j, 0, m), Flavor::New)?;
    let period = atom.period();
    let gain = d.pow_f64(j)?.sqrt() * (d.q() as f64).sqrt();
    let n = n_max as i64;
    Ok((-n..=n)
        .map(|k| {
            let x = to_f64(&(&period * int(k)));
            let want = if k == 0 { 1.0 } else { 0.0 };
            (atom.time(x) * gain - want).abs()
        })
        .fold(0.0, f64::max))
}

pub const ATOM_SAMPLE_TOL: f64 = 1e-12;

/// The sampling-series coefficients of an atom are a Kronecker delta (to 1e-12).
pub fn atom_sample_identity(d: &Dilation, j: i64, m: i64, n_max: u64) -> Result<bool> {
    Ok(atom_sample_deviation(d, j, m, n_max)? <= ATOM_SAMPLE_TOL)
}

/// Relative L2 error `||rec - f|| / ||f||` on `grid`.
pub fn relative_l2(rec: &[Complex64], reference: &[Complex64]) -> f64 {
    let num: f64 = rec.iter().zip(reference).map(|(a, b)| (a - b).norm_sqr()).sum();
    let den: f64 = reference.iter().map(|b| b.norm_sqr()).sum();
    if den == 0.0 {
        num.sqrt()
    } else {
        (num / den).sqrt()
    }
}

pub fn convergence_study(
    f: &PiecewiseConstSpectrum,
    d: &Dilation,
    j: i64,
    m: i64,
    n_max_list: &[u64],
    grid: &[f64],
) -> Result<Vec<(u64, f64)>> {
    convergence_study_with(f, d, j, m, n_max_list, grid, Exec::default())
}

/// Truncated reconstruction error for each `n_max` (ascending).
pub fn convergence_study_with(
    f: &PiecewiseConstSpectrum,
    d: &Dilation,
    j: i64,
    m: i64,
    n_max_list: &[u64],
    grid: &[f64],
    exec: Exec,
) -> Result<Vec<(u64, f64)>> {
    if !membership(f, d, j, m)? {
        owning_subband(f, d, j)?;
        return Err(Error::precondition(format!(
            "spectrum is not inside band (j={j}, m={m})"
        )));
    }
    if grid.is_empty() {
        return Ok(Vec::new());
    }
    let mut ns = n_max_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let Some(&top) = ns.last() else {
        return Ok(Vec::new());
    };
    let top = top as i64;
    let samples = sample(f, d, j, -top..=top)?;
    let rec = Reconstructor::new(d, j, m)?;
    let eval = f.evaluator();
    let reference = exec.map(grid, |&x| eval.eval(x));
    Ok(ns
        .into_iter()
        .map(|n| {
            let n = n as i64;
            let window = &samples[(top - n) as usize..=(top + n) as usize];
            (
                n as u64,
                relative_l2(&rec.eval_grid(window, grid, exec), &reference),
            )
        })
        .collect())
}

pub const BANDPASS_CSV_HEADER: &str = "# rlpw-bandpass v1";

pub fn write_convergence_csv<W: Write>(mut w: W, rows: &[(u64, f64)]) -> io::Result<()> {
    writeln!(w, "{BANDPASS_CSV_HEADER}")?;
    writeln!(w, "n_max,rel_l2_error")?;
    for (n, e) in rows {
        writeln!(w, "{n},{e:.16e}")?;
    }
    Ok(())
}
