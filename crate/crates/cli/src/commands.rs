use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use rlpw_core::analytic_ip::{auscher_norm_sq_exact, band_norm_sq, gram_with, inner_product, GramOptions};
use rlpw_core::bandpass::{convergence_study_with, write_convergence_csv};
use rlpw_core::exactfreq::{annulus, format_ratio, int, rational, support_of, tiling_check, to_f64};
use rlpw_core::kernels::{scaled_mask_value_exact, write_kernel_csv, KernelAxis};
use rlpw_core::numcheck::{quad_ip_freq, quad_ip_time_with, OracleReport};
use rlpw_core::transform::{analyze_trig_with, analyze_with, parseval_partial_with, synthesize};
use rlpw_core::{Atom, AtomIndex, CoefficientSet, Dilation, Exec, Flavor, PiecewiseConstSpectrum, Rational};

use crate::parse::{exact_grid, float_grid, int_range};
use crate::{
    AtomsArgs, AuscherArgs, BandpassArgs, DilationArgs, Domain, Failure, GramArgs, OracleArgs, OracleDomain,
    ParsevalArgs, RoundtripArgs, TilingArgs,
};

fn dilation(a: DilationArgs) -> Result<Dilation, Failure> {
    Ok(Dilation::new(a.p, a.q)?)
}

fn emit(out: &Option<PathBuf>, body: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, body)?,
        None => io::stdout().lock().write_all(body)?,
    }
    Ok(())
}

fn emit_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Result<(), Failure> {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    emit(out, s.as_bytes())
}

fn pi_str(r: &Rational) -> String {
    format!("{} π", format_ratio(r))
}

fn load_spectrum(path: &Path) -> Result<PiecewiseConstSpectrum, Failure> {
    let text = fs::read_to_string(path)?;
    Ok(PiecewiseConstSpectrum::from_json_str(&text)?)
}

pub fn atoms(a: AtomsArgs) -> Result<(), Failure> {
    let (p, q, m, domain, j, flavor) = match a.fig {
        Some(fig) => (5, 3, fig as i64, Domain::FreqScaled, 1, Flavor::New),
        None => {
            let (Some(p), Some(q), Some(m)) = (a.p, a.q, a.m) else {
                return Err(Failure::Usage(
                    "atoms needs --p, --q and --m (or --fig 1|2)".into(),
                ));
            };
            let domain = a.domain.unwrap_or(Domain::Time);
            if domain == Domain::Freq && a.j.is_some_and(|j| j != 0) {
                return Err(Failure::Usage(
                    "--j only applies to --domain time or freq-scaled".into(),
                ));
            }
            (
                p,
                q,
                m,
                domain,
                a.j.unwrap_or(0),
                a.flavor.map(Flavor::from).unwrap_or(Flavor::New),
            )
        }
    };
    let d = Dilation::new(p, q)?;
    d.check_subband(m)?;
    d.check_scale(j)?;

    let mut buf = Vec::new();
    match domain {
        Domain::Time => {
            let grid = float_grid(a.grid.as_deref().unwrap_or("-20:20:1/20"))?;
            let atom = Atom::new(d, AtomIndex::new(j, 0, m), flavor)?;
            let rows: Vec<(f64, f64)> = grid.iter().map(|&x| (x, atom.time(x))).collect();
            write_kernel_csv(&mut buf, KernelAxis::Time, &rows)?;
        }
        Domain::Freq | Domain::FreqScaled => {
            let grid = match &a.grid {
                Some(g) => exact_grid(g)?,
                None => {
                    let hi = annulus(&d, j)?.pos().hi() * rational(5, 4);
                    let step = &hi / int(600);
                    exact_grid(&format!(
                        "{}:{}:{}",
                        format_ratio(&-hi.clone()),
                        format_ratio(&hi),
                        format_ratio(&step)
                    ))?
                }
            };
            let band = support_of(&d, j, m)?;
            let (lo, hi) = (band.pos().lo(), band.pos().hi());
            eprintln!(
                "band (j={j}, m={m}): [{}, {}) = [{:.12}, {:.12}) rad, height {:.12}",
                pi_str(lo),
                pi_str(hi),
                to_f64(lo) * std::f64::consts::PI,
                to_f64(hi) * std::f64::consts::PI,
                flavor.amplitude(&d)
            );
            let rows = grid
                .iter()
                .map(|w| Ok((to_f64(w), scaled_mask_value_exact(&d, j, m, flavor, w)?)))
                .collect::<Result<Vec<_>, rlpw_core::Error>>()?;
            write_kernel_csv(&mut buf, KernelAxis::OmegaOverPi, &rows)?;
        }
    }
    emit(&a.out, &buf)
}

pub fn gram(a: GramArgs, exec: Exec) -> Result<(), Failure> {
    let d = dilation(a.dil)?;
    let js = int_range(&a.j_range, "--j-range")?;
    let ns = int_range(&a.n_range, "--n-range")?;
    let opts = GramOptions {
        expected_diag: a.expected_diag,
        exec,
    };
    let r = gram_with(&d, a.flavor.into(), js, ns, a.tol, opts)?;
    emit_json(&a.out, &r)?;
    if r.pass {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "gram: max off-diagonal {:.3e}, max diagonal deviation {:.3e}, tol {:.1e}",
            r.max_offdiag, r.max_diag_dev, r.tolerance
        )))
    }
}

pub fn auscher(a: AuscherArgs, exec: Exec) -> Result<(), Failure> {
    let d = dilation(a.dil)?;
    let js = int_range(&a.j_range, "--j-range")?;
    let ns = int_range(&a.n_range, "--n-range")?;
    let diag = auscher_norm_sq_exact(&d, AtomIndex::new(*js.start(), *ns.start(), 1))?;
    let opts = GramOptions {
        expected_diag: Some(1.0),
        exec,
    };
    let r = gram_with(&d, Flavor::Auscher, js, ns, a.tol, opts)?;
    println!("diag = {} ({})", format_ratio(&diag), to_f64(&diag));
    println!("expected 1, max off-diagonal {:.3e}", r.max_offdiag);
    println!("{}", if r.pass { "PASS" } else { "FAIL" });
    if a.out.is_some() {
        emit_json(&a.out, &r)?;
    }
    if r.pass {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "Auscher diagonal is {} for q = {}, not 1",
            format_ratio(&diag),
            d.q()
        )))
    }
}

pub fn tiling(a: TilingArgs) -> Result<(), Failure> {
    let d = dilation(a.dil)?;
    let js = int_range(&a.j_range, "--j-range")?;
    let r = tiling_check(&d, *js.start(), *js.end())?;
    emit_json(&a.out, &r)?;
    if let Some((lo, hi)) = &r.union {
        eprintln!("union of positive supports: [{}, {})", pi_str(lo), pi_str(hi));
    }
    if r.passed() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "tiling: {} gaps, {} overlaps",
            r.gaps.len(),
            r.overlaps.len()
        )))
    }
}

fn unit_band_example() -> PiecewiseConstSpectrum {
    PiecewiseConstSpectrum::one_sided(vec![(rational(1, 1), rational(4, 3), Complex64::new(1.0, 0.0))])
        .expect("valid spectrum")
}

pub fn parseval(a: ParsevalArgs, exec: Exec) -> Result<(), Failure> {
    let d = dilation(a.dil)?;
    let f = match &a.spectrum {
        Some(path) => load_spectrum(path)?,
        None => unit_band_example(),
    };
    let js: Vec<i64> = match (&a.j_range, &a.spectrum) {
        (Some(r), _) => int_range(r, "--j-range")?.collect(),
        (None, None) => vec![0],
        (None, Some(_)) => return Err(Failure::Usage("--spectrum needs an explicit --j-range".into())),
    };
    if a.n_list.is_empty() {
        return Err(Failure::Usage("--N-list is empty".into()));
    }
    let flavor: Flavor = a.flavor.into();
    let r = parseval_partial_with(&f, &d, &js, &a.n_list, flavor, exec)?;
    emit_json(&a.out, &r)?;
    if let Some(path) = &a.coeffs_out {
        let n_top = *a.n_list.iter().max().expect("nonempty");
        let mut c = analyze_with(&f, &d, &js, n_top, flavor, exec)?;
        if let Some(eps) = a.prune {
            c = c.pruned(eps);
        }
        let mut buf = Vec::new();
        c.write_csv(&mut buf)?;
        fs::write(path, buf)?;
    }
    let consistent = r.is_consistent(1e-12 * r.norm_sq_f.max(1.0));
    let close = r.deficit_at_max_n <= a.tol * r.norm_sq_f;
    if consistent && close {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "parseval: deficit {:.3e} of norm {:.6} (relative tol {}), monotone and bounded: {consistent}",
            r.deficit_at_max_n, r.norm_sq_f, a.tol
        )))
    }
}

#[derive(Serialize)]
struct RoundtripReport {
    sets: usize,
    max_atoms: usize,
    max_abs_error: f64,
    tol: f64,
    pass: bool,
}

pub fn roundtrip(a: RoundtripArgs, exec: Exec) -> Result<(), Failure> {
    let d = dilation(a.dil)?;
    let js = int_range(&a.j_range, "--j-range")?;
    let ns = int_range(&a.n_range, "--n-range")?;
    if a.max_atoms == 0 {
        return Err(Failure::Usage("--max-atoms must be at least 1".into()));
    }
    let n_max = ns.start().unsigned_abs().max(ns.end().unsigned_abs());
    let flavor: Flavor = a.flavor.into();
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut worst = 0.0f64;
    for _ in 0..a.sets {
        let mut c = CoefficientSet::new(d, flavor);
        for _ in 0..rng.gen_range(1..=a.max_atoms) {
            let idx = AtomIndex::new(
                rng.gen_range(js.clone()),
                rng.gen_range(ns.clone()),
                rng.gen_range(1..=d.subbands() as i64),
            );
            c.insert(
                idx,
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )?;
        }
        let back = analyze_trig_with(&synthesize(&c), n_max, exec)?;
        // analysis returns ||psi||^2 c, which is c / q for the Auscher flavor
        let gain = to_f64(&band_norm_sq(&d, 0, 1, flavor)?);
        let err = c
            .iter()
            .map(|(i, v)| (back.coeff(i) - v * gain).norm())
            .fold(0.0, f64::max);
        worst = worst.max(err);
    }
    let r = RoundtripReport {
        sets: a.sets,
        max_atoms: a.max_atoms,
        max_abs_error: worst,
        tol: a.tol,
        pass: worst < a.tol,
    };
    emit_json(&a.out, &r)?;
    if r.pass {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "roundtrip: max error {worst:.3e} >= {}",
            a.tol
        )))
    }
}

/// Two hermitian pieces covering 1/4 and 1/2 of band (j, m).
fn generic_band_spectrum(d: &Dilation, j: i64, m: i64) -> Result<PiecewiseConstSpectrum, Failure> {
    let band = support_of(d, j, m)?;
    let lo = band.pos().lo().clone();
    let w = band.pos().len() / int(16);
    let at = |k: i64| &lo + &w * int(k);
    Ok(PiecewiseConstSpectrum::hermitian_from_positive(vec![
        (at(1), at(5), Complex64::new(0.8, 0.3)),
        (at(7), at(15), Complex64::new(-0.4, 0.6)),
    ])?)
}

pub fn bandpass(a: BandpassArgs, exec: Exec) -> Result<(), Failure> {
    let d = dilation(a.dil)?;
    let f = match &a.spectrum {
        Some(path) => load_spectrum(path)?,
        None => generic_band_spectrum(&d, a.j, a.m)?,
    };
    let grid = match &a.grid {
        Some(g) => float_grid(g)?,
        None => {
            let t = to_f64(&(int(d.q() as i64) * d.pow(a.j)?));
            let half = 32.0 / 3.0 * t;
            (0..256)
                .map(|i| -half + 2.0 * half * (i as f64 + 0.5) / 256.0)
                .collect()
        }
    };
    if a.n_max.is_empty() || grid.is_empty() {
        return Err(Failure::Usage("--n-max and --grid must be nonempty".into()));
    }
    let rows = convergence_study_with(&f, &d, a.j, a.m, &a.n_max, &grid, exec)?;
    let mut buf = Vec::new();
    write_convergence_csv(&mut buf, &rows)?;
    emit(&a.out, &buf)?;
    let decreasing = rows.windows(2).all(|w| w[1].1 < w[0].1);
    let last = rows.last().map(|r| r.1).unwrap_or(f64::INFINITY);
    if decreasing && last < a.tol {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "bandpass: final relative error {last:.3e} (tol {}), strictly decreasing: {decreasing}",
            a.tol
        )))
    }
}

pub fn oracle(a: OracleArgs, exec: Exec) -> Result<(), Failure> {
    let d = dilation(a.dil)?;
    let js = int_range(&a.j_range, "--j-range")?;
    let ns = int_range(&a.n_range, "--n-range")?;
    let flavor: Flavor = a.flavor.into();
    let tol = a.tol.unwrap_or(match a.domain {
        OracleDomain::Freq => 1e-8,
        OracleDomain::Time => 5e-3,
    });
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut reports = Vec::with_capacity(a.pairs);
    for _ in 0..a.pairs {
        let pick = |rng: &mut ChaCha8Rng, band: Option<(i64, i64)>| {
            let (j, m) =
                band.unwrap_or_else(|| (rng.gen_range(js.clone()), rng.gen_range(1..=d.subbands() as i64)));
            Atom::new(d, AtomIndex::new(j, rng.gen_range(ns.clone()), m), flavor)
        };
        let x = pick(&mut rng, None)?;
        // most pairs share a band so the off-diagonal formula is exercised
        let same = rng.gen_bool(0.7).then_some((x.index().j, x.index().m));
        let y = pick(&mut rng, same)?;
        let closed = inner_product(&x, &y)?;
        let est = match a.domain {
            OracleDomain::Freq => quad_ip_freq(&x, &y, tol / 10.0)?,
            OracleDomain::Time => quad_ip_time_with(&x, &y, 2000.0, 0.01, exec)?,
        };
        let op = format!("<psi{}, psi{}>", x.index(), y.index());
        reports.push(OracleReport::compare(op, closed, &est, tol));
    }
    emit_json(&a.out, &reports)?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "oracle: {failed} of {} comparisons outside {tol:e}",
            reports.len()
        )))
    }
}
