//! Closed-form inner products between atoms and Gram-matrix audits.
//!
//! All inner products are taken in the frequency domain, where each atom is a constant
//! times a complex exponential on a compact band pair:
//!
//! * different `(j, m)`: the band pairs are disjoint, the product is 0;
//! * same band, `n = k`: `amp^2 * M^j * |band|`, which is 1 for the new flavor and `1/q`
//!   for the Auscher flavor;
//! * same band, `n != k`: `amp^2 / (pi (n-k) q) * [sin((n-k)(q+m) pi) - sin((n-k)(q+m-1) pi)]`,
//!   zero analytically since both arguments are integer multiples of pi.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactfreq::{support_of, to_f64, AtomIndex, Dilation, Rational};
use crate::exec::Exec;
use crate::kernels::{Atom, Flavor};

/// `||psi^m_{j,n}||^2 = amp^2 * M^j * |positive band|` (in units where the `1/(2 pi)` and
/// the two mirrored bands cancel), exact.
pub fn band_norm_sq(d: &Dilation, j: i64, m: i64, flavor: Flavor) -> Result<Rational> {
    let s = support_of(d, j, m)?;
    Ok(flavor.amplitude_sq(d) * d.pow(j)? * s.pos().len())
}

/// Same-band inner product `<psi_{j,n}, psi_{j,k}>` for `n != k`, evaluated as written.
/// Independent of `j`: the `M^j` factors cancel and the sine arguments `Δ·band edge`
/// reduce to `(n-k)(q+m) pi` and `(n-k)(q+m-1) pi`.
pub fn same_band_offdiag(d: &Dilation, m: i64, flavor: Flavor, dn: i64) -> f64 {
    debug_assert!(dn != 0);
    let q = d.q() as i128;
    let amp_sq = match flavor {
        Flavor::New => d.q() as f64,
        Flavor::Auscher => 1.0,
    };
    let hi = (dn as i128 * (q + m as i128)) as f64 * PI;
    let lo = (dn as i128 * (q + m as i128 - 1)) as f64 * PI;
    amp_sq / (PI * dn as f64 * d.q() as f64) * (hi.sin() - lo.sin())
}

fn check_compatible(a: &Atom, b: &Atom) -> Result<()> {
    if !a.dilation().same_ratio(b.dilation()) {
        return Err(Error::domain(format!(
            "atoms use different dilations {} and {}",
            a.dilation(),
            b.dilation()
        )));
    }
    if a.flavor() != b.flavor() {
        return Err(Error::domain("cross-flavor inner products are not defined"));
    }
    Ok(())
}

/// `<a, b>` in closed form. The same-band `n != k` case returns the evaluated sine
/// expression (zero up to rounding).
pub fn inner_product(a: &Atom, b: &Atom) -> Result<Complex64> {
    inner_product_with(a, b, false)
}

/// As [`inner_product`]; with `assume_exact` the analytically-zero cases return exactly 0.
pub fn inner_product_with(a: &Atom, b: &Atom, assume_exact: bool) -> Result<Complex64> {
    check_compatible(a, b)?;
    let (ia, ib) = (a.index(), b.index());
    if ia.j != ib.j || ia.m != ib.m {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if ia.n == ib.n {
        let v = band_norm_sq(a.dilation(), ia.j, ia.m, a.flavor())?;
        return Ok(Complex64::new(to_f64(&v), 0.0));
    }
    if assume_exact {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let v = same_band_offdiag(a.dilation(), ia.m, a.flavor(), ia.n - ib.n);
    Ok(Complex64::new(v, 0.0))
}

/// `||psi^m_{j,n}||^2` for the Auscher flavor: exactly `1/q` for every index.
pub fn auscher_norm_sq_exact(d: &Dilation, idx: AtomIndex) -> Result<Rational> {
    idx.validate(d)?;
    band_norm_sq(d, idx.j, idx.m, Flavor::Auscher)
}

pub fn auscher_norm_sq(d: &Dilation, idx: AtomIndex) -> Result<f64> {
    auscher_norm_sq_exact(d, idx).map(|r| to_f64(&r))
}

/// Summary of a Gram-matrix audit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramReport {
    #[serde(skip)]
    pub indices: Vec<AtomIndex>,
    pub flavor: Flavor,
    pub expected_diag: f64,
    pub max_offdiag: f64,
    pub max_diag_dev: f64,
    pub pass: bool,
    #[serde(rename = "tol")]
    pub tolerance: f64,
    pub size: usize,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GramOptions {
    /// Overrides the flavor's natural diagonal (1 for new, `1/q` for Auscher).
    pub expected_diag: Option<f64>,
    pub exec: Exec,
}

/// All `(j, n, m)` in the ranges, ordered by `j`, then `m`, then `n`.
pub fn index_grid(
    d: &Dilation,
    j_range: RangeInclusive<i64>,
    n_range: RangeInclusive<i64>,
) -> Vec<AtomIndex> {
    let mut out = Vec::new();
    for j in j_range {
        for m in 1..=d.subbands() as i64 {
            for n in n_range.clone() {
                out.push(AtomIndex::new(j, n, m));
            }
        }
    }
    out
}

pub fn atoms_for(d: &Dilation, flavor: Flavor, indices: &[AtomIndex]) -> Result<Vec<Atom>> {
    indices.iter().map(|&i| Atom::new(*d, i, flavor)).collect()
}

/// Full Gram matrix, row-major.
pub fn gram_matrix(atoms: &[Atom], exec: Exec) -> Result<Vec<Vec<Complex64>>> {
    let rows = exec.map(atoms, |a| {
        atoms
            .iter()
            .map(|b| inner_product(a, b))
            .collect::<Result<Vec<_>>>()
    });
    rows.into_iter().collect()
}

pub fn gram(
    d: &Dilation,
    flavor: Flavor,
    j_range: RangeInclusive<i64>,
    n_range: RangeInclusive<i64>,
    tol: f64,
) -> Result<GramReport> {
    gram_with(d, flavor, j_range, n_range, tol, GramOptions::default())
}

pub fn gram_with(
    d: &Dilation,
    flavor: Flavor,
    j_range: RangeInclusive<i64>,
    n_range: RangeInclusive<i64>,
    tol: f64,
    opts: GramOptions,
) -> Result<GramReport> {
    if j_range.is_empty() || n_range.is_empty() {
        return Err(Error::precondition("gram needs nonempty j and n ranges"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::precondition("gram tolerance must be positive"));
    }
    let indices = index_grid(d, j_range, n_range);
    let atoms = atoms_for(d, flavor, &indices)?;
    let expected_diag = opts.expected_diag.unwrap_or(match flavor {
        Flavor::New => 1.0,
        Flavor::Auscher => 1.0 / d.q() as f64,
    });

    let row_stats = opts.exec.try_map(&atoms, |a| -> Result<(f64, f64)> {
        let mut off = 0.0f64;
        let mut diag = 0.0f64;
        for b in &atoms {
            let v = inner_product(a, b)?;
            if a.index() == b.index() {
                diag = (v - Complex64::new(expected_diag, 0.0)).norm();
            } else {
                off = off.max(v.norm());
            }
        }
        Ok((off, diag))
    })?;
    let max_offdiag = row_stats.iter().map(|r| r.0).fold(0.0, f64::max);
    let max_diag_dev = row_stats.iter().map(|r| r.1).fold(0.0, f64::max);

    Ok(GramReport {
        size: indices.len(),
        indices,
        flavor,
        expected_diag,
        max_offdiag,
        max_diag_dev,
        pass: max_offdiag <= tol && max_diag_dev <= tol,
        tolerance: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfreq::rational;
    use approx::assert_abs_diff_eq;

    fn atom(d: Dilation, j: i64, n: i64, m: i64, f: Flavor) -> Atom {
        Atom::new(d, AtomIndex::new(j, n, m), f).unwrap()
    }

    #[test]
    fn examples() {
        let d = Dilation::new(5, 3).unwrap();
        let a = atom(d, 0, 0, 1, Flavor::New);
        assert_abs_diff_eq!(inner_product(&a, &a).unwrap().re, 1.0, epsilon = 1e-15);
        let b = atom(d, 0, 1, 1, Flavor::New);
        assert!(inner_product(&a, &b).unwrap().norm() < 1e-15);
        let c = atom(d, 1, 0, 2, Flavor::New);
        assert_eq!(inner_product(&a, &c).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn assume_exact_short_circuits() {
        let d = Dilation::new(7, 4).unwrap();
        let a = atom(d, 2, 0, 3, Flavor::New);
        let b = atom(d, 2, 37, 3, Flavor::New);
        assert_eq!(
            inner_product_with(&a, &b, true).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        let evaluated = inner_product_with(&a, &b, false).unwrap();
        assert!(evaluated.norm() < 1e-14);
    }

    #[test]
    fn mismatches_are_rejected() {
        let d = Dilation::new(5, 3).unwrap();
        let e = Dilation::new(3, 2).unwrap();
        let a = atom(d, 0, 0, 1, Flavor::New);
        assert!(inner_product(&a, &atom(d, 0, 0, 1, Flavor::Auscher)).is_err());
        assert!(inner_product(&a, &atom(e, 0, 0, 1, Flavor::New)).is_err());
    }

    #[test]
    fn auscher_norm_is_one_over_q() {
        let cases = [
            ((5, 3), rational(1, 3)),
            ((3, 2), rational(1, 2)),
            ((2, 1), rational(1, 1)),
        ];
        for ((p, q), want) in cases {
            let d = Dilation::new(p, q).unwrap();
            for idx in [
                AtomIndex::new(0, 0, 1),
                AtomIndex::new(-3, 7, 1),
                AtomIndex::new(5, -2, 1),
            ] {
                assert_eq!(auscher_norm_sq_exact(&d, idx).unwrap(), want);
            }
        }
        let d = Dilation::new(5, 3).unwrap();
        assert!(auscher_norm_sq(&d, AtomIndex::new(0, 0, 9)).is_err());
    }

    #[test]
    fn gram_examples() {
        let d = Dilation::new(5, 3).unwrap();
        let r = gram(&d, Flavor::New, -1..=1, -3..=3, 1e-12).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.max_offdiag < 1e-12);
        assert_eq!(r.size, 3 * 7 * 2);

        let opts = GramOptions {
            expected_diag: Some(1.0),
            ..Default::default()
        };
        let r = gram_with(&d, Flavor::Auscher, -1..=1, -3..=3, 1e-12, opts).unwrap();
        assert!(!r.pass);
        assert_abs_diff_eq!(r.max_diag_dev, 2.0 / 3.0, epsilon = 1e-15);

        let r = gram(&d, Flavor::Auscher, -1..=1, -3..=3, 1e-12).unwrap();
        assert!(r.pass);
        assert_abs_diff_eq!(r.expected_diag, 1.0 / 3.0);

        let d21 = Dilation::new(2, 1).unwrap();
        let r = gram_with(&d21, Flavor::Auscher, -1..=1, -3..=3, 1e-12, opts).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn gram_preconditions() {
        let d = Dilation::new(5, 3).unwrap();
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 1..=0;
        assert!(gram(&d, Flavor::New, empty, 0..=0, 1e-12).is_err());
        assert!(gram(&d, Flavor::New, 0..=0, 0..=0, 0.0).is_err());
    }

    #[test]
    fn gram_json_shape() {
        let d = Dilation::new(3, 2).unwrap();
        let r = gram(&d, Flavor::New, 0..=0, 0..=1, 1e-10).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        let mut want = vec![
            "flavor",
            "expected_diag",
            "max_offdiag",
            "max_diag_dev",
            "pass",
            "tol",
            "size",
        ];
        want.sort();
        let mut got = keys.clone();
        got.sort();
        assert_eq!(got, want);
        assert_eq!(v["flavor"], "new");
        assert_eq!(v["size"], 2);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let d = Dilation::new(7, 4).unwrap();
        let atoms = atoms_for(&d, Flavor::New, &index_grid(&d, -1..=1, -2..=2)).unwrap();
        let a = gram_matrix(&atoms, Exec::Sequential).unwrap();
        let b = gram_matrix(&atoms, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
