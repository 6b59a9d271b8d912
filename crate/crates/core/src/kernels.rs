//! Pointwise evaluation of the wavelets in frequency and time.
//!
//! `psi^m` has the frequency mask `sqrt(q) * 1{(q+m-1)/q <= |w|/pi < (q+m)/q}` (new
//! flavor) and the time form
//! `psi^m(t) = sqrt(q) [sin((q+m) pi t / q) - sin((q+m-1) pi t / q)] / (pi t)`.
//! The Auscher flavor uses amplitude 1 on the same bands.

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactfreq::{int, support_of, AtomIndex, Dilation, Rational, SupportPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// Mask height `sqrt(q)`.
    New,
    /// Mask height `1`.
    Auscher,
}

impl Flavor {
    pub fn amplitude(self, d: &Dilation) -> f64 {
        match self {
            Flavor::New => (d.q() as f64).sqrt(),
            Flavor::Auscher => 1.0,
        }
    }

    /// Squared amplitude, exact.
    pub fn amplitude_sq(self, d: &Dilation) -> Rational {
        match self {
            Flavor::New => int(d.q() as i64),
            Flavor::Auscher => int(1),
        }
    }

    /// Factor applied to the new-flavor time kernel.
    fn time_factor(self, d: &Dilation) -> f64 {
        match self {
            Flavor::New => 1.0,
            Flavor::Auscher => 1.0 / (d.q() as f64).sqrt(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::New => "new",
            Flavor::Auscher => "auscher",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "new" => Ok(Flavor::New),
            "auscher" => Ok(Flavor::Auscher),
            other => Err(Error::Parse(format!("unknown flavor {other:?}"))),
        }
    }
}

/// `sin(x) / x`, with a short series near zero.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

fn finite(x: f64, what: &str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::domain(format!("{what} must be finite, got {x}")))
    }
}

/// `psi^m(w)` at a radian frequency.
pub fn mask_value(d: &Dilation, m: i64, flavor: Flavor, omega: f64) -> Result<f64> {
    scaled_mask_value(d, 0, m, flavor, omega)
}

/// `psi^m(M^j w)` at a radian frequency.
pub fn scaled_mask_value(d: &Dilation, j: i64, m: i64, flavor: Flavor, omega: f64) -> Result<f64> {
    let omega = finite(omega, "omega")?;
    let s = support_of(d, j, m)?;
    Ok(if s.contains_rad(omega) {
        flavor.amplitude(d)
    } else {
        0.0
    })
}

/// `psi^m(M^j w)` at `w = omega_over_pi * pi` given exactly, so that band edges
/// follow the closure convention without rounding.
pub fn scaled_mask_value_exact(
    d: &Dilation,
    j: i64,
    m: i64,
    flavor: Flavor,
    omega_over_pi: &Rational,
) -> Result<f64> {
    let s = support_of(d, j, m)?;
    Ok(if s.contains(omega_over_pi) {
        flavor.amplitude(d)
    } else {
        0.0
    })
}

// sin(A t) - sin(B t) = 2 cos((A+B) t/2) sin((A-B) t/2) with A - B = pi/q.
fn psi_unchecked(q: f64, m: f64, t: f64) -> f64 {
    let mid = (2.0 * q + 2.0 * m - 1.0) * PI / (2.0 * q);
    let half = PI / (2.0 * q);
    (mid * t).cos() * sinc(half * t) / q.sqrt()
}

/// New-flavor `psi^m(t)`; the value at `t = 0` is the limit `1/sqrt(q)`.
pub fn psi_time(d: &Dilation, m: i64, t: f64) -> Result<f64> {
    d.check_subband(m)?;
    let t = finite(t, "t")?;
    Ok(psi_unchecked(d.q() as f64, m as f64, t))
}

/// A single wavelet `psi^m_{j,n}` with its scale factors and band edges cached.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    dilation: Dilation,
    index: AtomIndex,
    flavor: Flavor,
    support: SupportPair,
    // M^j and M^{-j} rounded from the exact powers
    scale: f64,
    inv_scale: f64,
    // [lo, hi) of the positive band, radians
    band: (f64, f64),
}

impl Atom {
    pub fn new(dilation: Dilation, index: AtomIndex, flavor: Flavor) -> Result<Self> {
        index.validate(&dilation)?;
        let support = support_of(&dilation, index.j, index.m)?;
        let scale = dilation.pow_f64(index.j)?;
        let inv_scale = dilation.pow_f64(-index.j)?;
        let band = support.pos().rad_edges();
        Ok(Atom {
            dilation,
            index,
            flavor,
            support,
            scale,
            inv_scale,
            band,
        })
    }

    pub fn dilation(&self) -> &Dilation {
        &self.dilation
    }

    pub fn index(&self) -> AtomIndex {
        self.index
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn support(&self) -> &SupportPair {
        &self.support
    }

    /// `M^j` as `f64`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Positive band edges in radians.
    pub fn band(&self) -> (f64, f64) {
        self.band
    }

    /// Exact sampling period `q M^j` of the atom's subspace.
    pub fn period(&self) -> Rational {
        int(self.dilation.q() as i64) * self.dilation.pow(self.index.j).expect("validated scale")
    }

    fn in_band(&self, omega: f64) -> bool {
        let (lo, hi) = self.band;
        (lo <= omega && omega < hi) || (-hi < omega && omega <= -lo)
    }

    /// `M^{-j/2} psi^m(M^{-j} x - n q)`, flavor-scaled.
    pub fn time(&self, x: f64) -> f64 {
        let q = self.dilation.q() as f64;
        let arg = x * self.inv_scale - (self.index.n as f64) * q;
        self.inv_scale.sqrt()
            * psi_unchecked(q, self.index.m as f64, arg)
            * self.flavor.time_factor(&self.dilation)
    }

    /// `M^{j/2} psi^m(M^j w) e^{-i n q M^j w}`.
    pub fn freq(&self, omega: f64) -> Complex64 {
        if !self.in_band(omega) {
            return Complex64::new(0.0, 0.0);
        }
        let mag = self.scale.sqrt() * self.flavor.amplitude(&self.dilation);
        let phase = -(self.index.n as f64) * (self.dilation.q() as f64) * self.scale * omega;
        Complex64::from_polar(mag, phase)
    }
}

pub fn atom_time(a: &Atom, x: f64) -> Result<f64> {
    Ok(a.time(finite(x, "x")?))
}

pub fn atom_freq(a: &Atom, omega: f64) -> Result<Complex64> {
    Ok(a.freq(finite(omega, "omega")?))
}

/// Column layout of a sampled-kernel CSV.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelAxis {
    Time,
    OmegaOverPi,
}

pub const KERNEL_CSV_HEADER: &str = "# rlpw-kernel v1";

/// Writes `# rlpw-kernel v1`, the column line and one row per sample, 17 significant digits.
pub fn write_kernel_csv<W: Write>(mut w: W, axis: KernelAxis, rows: &[(f64, f64)]) -> io::Result<()> {
    writeln!(w, "{KERNEL_CSV_HEADER}")?;
    match axis {
        KernelAxis::Time => writeln!(w, "arg,value")?,
        KernelAxis::OmegaOverPi => writeln!(w, "omega_over_pi,value")?,
    }
    for (a, v) in rows {
        writeln!(w, "{a:.16e},{v:.16e}")?;
    }
    Ok(())
}

/// Samples `f` on the grid and returns `(arg, value)` rows.
pub fn sample_grid(grid: &[f64], f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    grid.iter().map(|&x| (x, f(x))).collect()
}
