//! Brute-force oracles for the closed forms.
//!
//! These evaluate the defining integrals numerically from the pointwise kernels and
//! never call into [`crate::analytic_ip`] or [`crate::transform`].
//!
//! * [`quad_ip_freq`]: adaptive Gauss-Kronrod (7/15) of the Parseval integrand, with the
//!   domain split at every band edge so each panel is smooth.
//! * [`quad_ip_time`]: trapezoid rule of the time-domain product over `[-W, W]`. The
//!   `1/t` tails make this converge like `O(1/W)`; it is a convention check only.
//! * [`ift_mask`]: inverse transform of the frequency mask by quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactfreq::{support_of, to_f64, Dilation, Rational};
use crate::exec::Exec;
use crate::kernels::{mask_value, Atom, Flavor};

/// A numerical estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub evals: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kron += s * WGK[i];
        if i % 2 == 1 {
            gauss += s * WG[i / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

/// Adaptive GK15 over the panels `edges[i]..edges[i+1]`, bisecting the panel with the
/// largest error until the summed estimate is at most `abs_tol`.
pub fn integrate_panels(
    f: impl Fn(f64) -> Complex64,
    edges: &[(f64, f64)],
    abs_tol: f64,
    max_evals: usize,
) -> Result<Estimate<Complex64>> {
    let mut parts: Vec<(f64, f64, Complex64, f64)> = edges
        .iter()
        .map(|&(a, b)| {
            let (v, e) = gk15(&f, a, b);
            (a, b, v, e)
        })
        .collect();
    let mut evals = 15 * parts.len();
    loop {
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if err <= abs_tol || parts.is_empty() {
            let value = parts.iter().map(|p| p.2).sum();
            return Ok(Estimate {
                value,
                error: err,
                evals,
            });
        }
        if evals + 30 > max_evals {
            return Err(Error::Convergence {
                tol: abs_tol,
                estimate: err,
                evals,
            });
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .expect("nonempty");
        let (a, b, _, _) = parts.swap_remove(worst);
        let mid = 0.5 * (a + b);
        for (lo, hi) in [(a, mid), (mid, b)] {
            let (v, e) = gk15(&f, lo, hi);
            parts.push((lo, hi, v, e));
        }
        evals += 30;
    }
}

pub const DEFAULT_MAX_EVALS: usize = 400_000;

// Band edges of both atoms in exact arithmetic, then the panels covered by either.
fn union_panels(a: &Atom, b: &Atom) -> Vec<(f64, f64)> {
    let mut cuts: Vec<Rational> = [a.support(), b.support()]
        .iter()
        .flat_map(|s| s.sides())
        .flat_map(|iv| [iv.lo().clone(), iv.hi().clone()])
        .collect();
    cuts.sort();
    cuts.dedup();
    cuts.windows(2)
        .filter(|w| {
            let mid = (&w[0] + &w[1]) / Rational::from_integer(2.into());
            a.support().contains(&mid) || b.support().contains(&mid)
        })
        .map(|w| (to_f64(&w[0]) * PI, to_f64(&w[1]) * PI))
        .collect()
}

/// `(1/2pi) int a^(w) conj(b^(w)) dw` by adaptive quadrature. The target error is
/// `rel_tol * max(|result|, 1)`.
pub fn quad_ip_freq(a: &Atom, b: &Atom, rel_tol: f64) -> Result<Estimate<Complex64>> {
    if !a.dilation().same_ratio(b.dilation()) || a.flavor() != b.flavor() {
        return Err(Error::domain(
            "oracle needs atoms with a shared dilation and flavor",
        ));
    }
    if rel_tol.is_nan() || rel_tol <= 0.0 {
        return Err(Error::precondition("rel_tol must be positive"));
    }
    let panels = union_panels(a, b);
    let f = |w: f64| a.freq(w) * b.freq(w).conj() / (2.0 * PI);
    // one unrefined pass fixes the scale of the relative target
    let first = integrate_panels(f, &panels, f64::INFINITY, DEFAULT_MAX_EVALS)?;
    let tol = rel_tol * first.value.norm().max(1.0);
    integrate_panels(f, &panels, tol, DEFAULT_MAX_EVALS)
}

/// Trapezoid estimate of `int_{-W}^{W} a(x) b(x) dx`. The reported error is the tail
/// bound `2 sqrt(tail_a tail_b)` from the `|psi(t)| <= 2 sqrt(q) / (pi |t|)` envelope,
/// i.e. `O(1/W)`.
pub fn quad_ip_time(a: &Atom, b: &Atom, window: f64, step: f64) -> Result<Estimate<Complex64>> {
    quad_ip_time_with(a, b, window, step, Exec::default())
}

pub fn quad_ip_time_with(
    a: &Atom,
    b: &Atom,
    window: f64,
    step: f64,
    exec: Exec,
) -> Result<Estimate<Complex64>> {
    if !(window > 0.0 && window.is_finite()) {
        return Err(Error::precondition("window must be positive"));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::precondition("step must be positive"));
    }
    let n = (2.0 * window / step).ceil() as usize;
    let h = 2.0 * window / n as f64;
    const CHUNK: usize = 4096;
    let chunks = n.div_ceil(CHUNK);
    let partial = exec.map_range(chunks, |c| {
        let lo = c * CHUNK;
        let hi = ((c + 1) * CHUNK).min(n);
        let mut s = 0.0;
        for i in lo..hi {
            let x = -window + i as f64 * h;
            s += a.time(x) * b.time(x);
        }
        s
    });
    let ends = 0.5 * (a.time(-window) * b.time(-window) + a.time(window) * b.time(window));
    let interior: f64 = partial.iter().sum::<f64>() - a.time(-window) * b.time(-window);
    let value = h * (interior + ends);

    let tail = |at: &Atom| {
        let q = at.dilation().q() as f64;
        let shift = (at.index().n as f64 * q * at.scale()).abs();
        let gap = (window - shift).max(step);
        let amp = match at.flavor() {
            Flavor::New => 1.0,
            Flavor::Auscher => 1.0 / q,
        };
        amp * 2.0 * at.scale() * 4.0 * q / (PI * PI * gap)
    };
    let error = 2.0 * (tail(a) * tail(b)).sqrt();
    Ok(Estimate {
        value: Complex64::new(value, 0.0),
        error,
        evals: 2 * (n + 1),
    })
}

/// `(1/2pi) int psi^m(w) e^{iwt} dw` over the compact mask support by quadrature.
pub fn ift_mask(d: &Dilation, m: i64, flavor: Flavor, t: f64, rel_tol: f64) -> Result<Estimate<f64>> {
    if !t.is_finite() {
        return Err(Error::domain("t must be finite"));
    }
    if rel_tol.is_nan() || rel_tol <= 0.0 {
        return Err(Error::precondition("rel_tol must be positive"));
    }
    let s = support_of(d, 0, m)?;
    let panels: Vec<(f64, f64)> = s.sides().iter().map(|iv| iv.rad_edges()).collect();
    let f = |w: f64| {
        let v = mask_value(d, m, flavor, w).unwrap_or(0.0);
        Complex64::from_polar(v, w * t) / (2.0 * PI)
    };
    let est = integrate_panels(f, &panels, rel_tol, DEFAULT_MAX_EVALS)?;
    Ok(Estimate {
        value: est.value.re,
        error: est.error,
        evals: est.evals,
    })
}

/// One closed-form vs oracle comparison, serialized as
/// `{"op", "closed_form": [re, im], "oracle": [re, im], "oracle_err", "pass"}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub op: String,
    pub closed_form: [f64; 2],
    pub oracle: [f64; 2],
    pub oracle_err: f64,
    pub pass: bool,
}

impl OracleReport {
    pub fn compare(op: impl Into<String>, closed: Complex64, oracle: &Estimate<Complex64>, tol: f64) -> Self {
        OracleReport {
            op: op.into(),
            closed_form: [closed.re, closed.im],
            oracle: [oracle.value.re, oracle.value.im],
            oracle_err: oracle.error,
            pass: (closed - oracle.value).norm() <= tol,
        }
    }
}
