use std::ops::RangeInclusive;

use rlpw_core::exactfreq::{parse_ratio, to_f64};
use rlpw_core::Rational;

use crate::Failure;

/// `a:b` with `a <= b`.
pub fn int_range(s: &str, what: &str) -> Result<RangeInclusive<i64>, Failure> {
    let bad = || Failure::Usage(format!("{what} must look like a:b, got {s:?}"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(Failure::Usage(format!("{what} is empty: {s}")));
    }
    Ok(a..=b)
}

/// Exact `lo:hi:step` grid, `lo + k step` for every `k` with the point `<= hi`.
pub fn exact_grid(s: &str) -> Result<Vec<Rational>, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Failure::Usage(format!(
            "grid must look like lo:hi:step, got {s:?}"
        )));
    }
    let p = |x: &str| parse_ratio(x.trim()).map_err(|e| Failure::Usage(format!("grid: {e}")));
    let (lo, hi, step) = (p(parts[0])?, p(parts[1])?, p(parts[2])?);
    if step <= Rational::from_integer(0.into()) {
        return Err(Failure::Usage("grid step must be positive".into()));
    }
    if hi < lo {
        return Err(Failure::Usage("grid upper end is below the lower end".into()));
    }
    let count = ((&hi - &lo) / &step).floor().to_integer();
    let count: usize = count
        .try_into()
        .ok()
        .filter(|&c: &usize| c < 10_000_000)
        .ok_or_else(|| Failure::Usage("grid has too many points".into()))?;
    Ok((0..=count)
        .map(|k| &lo + &step * Rational::from_integer(k.into()))
        .collect())
}

pub fn float_grid(s: &str) -> Result<Vec<f64>, Failure> {
    Ok(exact_grid(s)?.iter().map(to_f64).collect())
}
