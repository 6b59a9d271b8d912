//! Rational-dilation Littlewood-Paley wavelets.
//!
//! The family `psi^m_{j,n}(x) = M^{-j/2} psi^m(M^{-j} x - n q)` with `M = p/q`,
//! `1 <= m <= p - q`, in two amplitude flavors:
//!
//! * [`Flavor::New`]: mask height `sqrt(q)`, an orthonormal basis for every coprime `p > q`.
//! * [`Flavor::Auscher`]: mask height `1` on the same bands, with norm `1/q`; orthonormal
//!   only when `q = 1`.
//!
//! Band edges are exact rationals in units of pi ([`exactfreq`]), so tiling and band
//! membership are decided without floating point. Inner products are closed form
//! ([`analytic_ip`]) and every closed form has an independent quadrature oracle
//! ([`numcheck`]).
//!
//! Fourier convention: `f^(w) = int f(x) e^{-iwx} dx`, inverse and inner products carry `1/(2 pi)`.

pub mod analytic_ip;
pub mod bandpass;
pub mod error;
pub mod exactfreq;
pub mod exec;
pub mod kernels;
pub mod numcheck;
pub mod spectra;
pub mod transform;

pub use analytic_ip::{auscher_norm_sq, gram, inner_product, GramReport};
pub use error::{Error, Result};
pub use exactfreq::{
    annulus, band_space, support_of, tiling_check, AtomIndex, BandSpace, Closure, Dilation, PiInterval,
    Rational, SupportPair, TilingReport,
};
pub use exec::Exec;
pub use kernels::{Atom, Flavor};
pub use spectra::{BandTrigSpectrum, Piece, PiecewiseConstSpectrum};
pub use transform::{CoefficientSet, ParsevalReport};

pub use num_complex::Complex64;
