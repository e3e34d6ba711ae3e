//! The four experiment runners behind the `kernel`, `means`, `interp` and
//! `maximal` subcommands. Cells are computed in parallel and collected in
//! their pre-assigned order, so reports do not depend on scheduling.

use std::f64::consts::PI;

use rayon::prelude::*;
use sphlab_core::fit::geometric_grid;
use sphlab_core::interp::{check_interpolation, default_t_grid, spectral_step, StepFunction};
use sphlab_core::kernels::{
    classify_regime, interior_bound, interior_bound_parts, is_interior, ZonalSeries,
};
use sphlab_core::maximal::{inequality_constants, n_grid, InequalityRow};
use sphlab_core::spectral::MAX_TABLE_DEGREE;
use sphlab_core::zonal::{
    apply_riesz_mean_coeffs, apply_riesz_mean_kernel, project_all, test_profiles, EvalPoint,
};
use sphlab_core::{
    envelope_slope, KernelSpec, Profile, SpectralTable, ZonalFunction, ZonalQuadrature,
};

use crate::config::{format_complex, Command, ConfigError, ExperimentConfig, GammaSpec};
use crate::report::{format_float, Report, Value};
use crate::Error;

/// Dual-path agreement required of `means`.
pub const MEANS_TOL: f64 = 1e-8;
/// Allowed trend slope of the interpolation ratio.
pub const INTERP_TREND_TOL: f64 = 0.05;
/// Allowed growth of the measured maximal constant when `δ` halves.
pub const BLOWUP_LIMIT: f64 = 2.5;

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn header(report: &mut Report, cfg: &ExperimentConfig) {
    report.stamp();
    report.meta("config", cfg.to_json());
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report, Error> {
    cfg.validate()?;
    match cfg.command {
        Command::Kernel => run_kernel(cfg),
        Command::Means => run_means(cfg),
        Command::Interp => run_interp(cfg),
        Command::Maximal => run_maximal(cfg),
    }
}

/// Degrees at which growth exponents are fitted within `[n_min, n_max]`:
/// quarter octaves from 32 (or lower for short runs).
pub fn fit_grid(n_min: usize, n_max: usize) -> Vec<usize> {
    let lo = if n_max >= 128 {
        32
    } else {
        (n_max / 16).max(1)
    };
    geometric_grid(lo.max(n_min), n_max, 4)
}

/// `Θ^α(γ, n)` (inclusive top) and `Ξ^α(γ, n)` for `n ∈ ns`.
pub fn kernel_pairs(
    table: &SpectralTable,
    alpha: f64,
    gamma: GammaSpec,
    ns: &[usize],
) -> Result<Vec<(f64, f64)>, Error> {
    match gamma {
        GammaSpec::Fixed(g) => {
            let top = ns.iter().copied().max().unwrap_or(1);
            let series = ZonalSeries::new(table, g, top)?;
            ns.par_iter()
                .map(|&n| Ok((series.riesz(alpha, n, true)?, series.cesaro(alpha, n)?)))
                .collect()
        }
        GammaSpec::PiMinusOverN(_) => ns
            .par_iter()
            .map(|&n| {
                let series = ZonalSeries::new(table, gamma.resolve(n), n)?;
                Ok((series.riesz(alpha, n, true)?, series.cesaro(alpha, n)?))
            })
            .collect(),
    }
}

pub fn run_kernel(cfg: &ExperimentConfig) -> Result<Report, Error> {
    let (dim, alpha) = (cfg.dim, cfg.alpha.0.re);
    // values past n_max feed only the envelope windows of the summary
    let top = (cfg.n_max + cfg.n_max.div_ceil(4)).min(MAX_TABLE_DEGREE);
    let table = SpectralTable::new(dim, top)?;
    let ns: Vec<usize> = (cfg.n_min..=top).collect();
    let fit_at = fit_grid(cfg.n_min, cfg.n_max);

    let mut report = Report::new(
        "kernel",
        &[
            "n",
            "gamma",
            "theta_alpha",
            "xi_alpha",
            "bound_part1",
            "bound_part2",
            "bound_part3",
            "regime",
        ],
    );
    header(&mut report, cfg);
    for &gs in &cfg.gammas {
        let values = kernel_pairs(&table, alpha, gs, &ns)?;
        for (&n, &(theta, xi)) in ns.iter().zip(&values).take_while(|(&n, _)| n <= cfg.n_max) {
            let gamma = gs.resolve(n);
            let parts = if is_interior(n, gamma) {
                Some(interior_bound_parts(dim, alpha, n, gamma)?)
            } else {
                None
            };
            let gamma0 = match gs {
                GammaSpec::Fixed(g) if g > 0.0 => Some(g),
                _ => None,
            };
            let part = |i: usize| Value::from(parts.map(|p| p[i]));
            report.push_row(vec![
                n.into(),
                gamma.into(),
                theta.into(),
                xi.into(),
                part(0),
                part(1),
                part(2),
                classify_regime(n, gamma, gamma0).primary().label().into(),
            ]);
        }

        let label = gs.to_string();
        let riesz: Vec<(f64, f64)> = ns
            .iter()
            .zip(&values)
            .map(|(&n, v)| (n as f64, v.0))
            .collect();
        let cesaro: Vec<(f64, f64)> = ns
            .iter()
            .zip(&values)
            .map(|(&n, v)| (n as f64, v.1))
            .collect();
        let slope = |seq: &[(f64, f64)]| {
            envelope_slope(seq, &fit_at)
                .map(|f| format_float(f.slope))
                .unwrap_or("n/a".into())
        };
        report.summarize(
            format!("riesz_envelope_slope[gamma={label}]"),
            slope(&riesz),
        );
        report.summarize(
            format!("cesaro_envelope_slope[gamma={label}]"),
            slope(&cesaro),
        );

        // |Θ| envelope over the interior bound, at interior fit points
        let ratios: Vec<(f64, f64)> =
            sphlab_core::envelope(&riesz, sphlab_core::fit::DEFAULT_WINDOW)?
                .into_iter()
                .filter(|(n, _)| fit_at.contains(&(*n as usize)))
                .filter_map(|(n, e)| {
                    let g = gs.resolve(n as usize);
                    interior_bound(dim, alpha, n as usize, g)
                        .ok()
                        .map(|b| (n, e / b))
                })
                .collect();
        let trend = sphlab_core::fit_loglog_slope(&ratios, f64::NEG_INFINITY, f64::INFINITY)
            .map(|f| format_float(f.slope))
            .unwrap_or("n/a".into());
        report.summarize(format!("bound_ratio_trend[gamma={label}]"), trend);
    }
    Ok(report)
}

/// Profiles named in the config, or the default library.
pub fn profiles(cfg: &ExperimentConfig) -> Result<Vec<ZonalFunction>, Error> {
    if cfg.profiles.is_empty() {
        return Ok(test_profiles(cfg.dim)?);
    }
    cfg.profiles
        .iter()
        .map(|p| Ok(ZonalFunction::new(cfg.dim, p.parse::<Profile>()?)?.with_label(p.clone())))
        .collect()
}

fn quadrature(cfg: &ExperimentConfig, f: &ZonalFunction) -> Result<ZonalQuadrature, Error> {
    Ok(match cfg.quad_nodes {
        Some(m) => f.quadrature_with(m)?,
        None => f.quadrature(cfg.n_max)?,
    })
}

/// `n_min`, doubling, capped by `n_max` (always included).
pub fn doubling_degrees(n_min: usize, n_max: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut n = n_min.max(1);
    while n < n_max {
        out.push(n);
        n *= 2;
    }
    out.push(n_max);
    out
}

pub fn run_means(cfg: &ExperimentConfig) -> Result<Report, Error> {
    let alpha = cfg.alpha.0.re;
    let fs = profiles(cfg)?;
    let table = SpectralTable::new(cfg.dim, cfg.n_max)?;
    let ns = doubling_degrees(cfg.n_min, cfg.n_max);
    let prepared: Vec<(ZonalQuadrature, sphlab_core::CoefficientVector)> = fs
        .par_iter()
        .map(|f| {
            let q = quadrature(cfg, f)?;
            let c = project_all(f, &table, cfg.n_max, &q)?;
            Ok((q, c))
        })
        .collect::<Result<_, Error>>()?;
    let cells: Vec<(usize, usize)> = (0..fs.len())
        .flat_map(|i| ns.iter().map(move |&n| (i, n)))
        .collect();
    let values: Vec<(f64, f64)> = cells
        .par_iter()
        .map(|&(i, n)| {
            let spec = KernelSpec::new(cfg.dim, alpha, n)?;
            let (q, c) = &prepared[i];
            let kernel = apply_riesz_mean_kernel(&fs[i], &spec, &table, q, EvalPoint::Pole)?;
            Ok((kernel, apply_riesz_mean_coeffs(c, &spec)?))
        })
        .collect::<Result<_, Error>>()?;

    let mut report = Report::new(
        "means",
        &[
            "profile",
            "n",
            "alpha",
            "value_kernel_path",
            "value_coeff_path",
            "abs_diff",
        ],
    );
    header(&mut report, cfg);
    let mut max_diff: f64 = 0.0;
    for (&(i, n), &(k, c)) in cells.iter().zip(&values) {
        let diff = (k - c).abs();
        max_diff = max_diff.max(diff);
        report.push_row(vec![
            fs[i].label().into(),
            n.into(),
            alpha.into(),
            k.into(),
            c.into(),
            diff.into(),
        ]);
    }
    report.summarize_float("max_abs_diff", max_diff);
    report.summarize_float("tolerance", MEANS_TOL);
    report.summarize("status", pass_fail(max_diff <= MEANS_TOL));
    Ok(report)
}

/// `t = 2, 4, …, 1024` for the single-jump fixture.
pub fn single_jump_grid() -> Vec<f64> {
    (1..=10).map(|i| 2f64.powi(i)).collect()
}

pub fn run_interp(cfg: &ExperimentConfig) -> Result<Report, Error> {
    let fixture = cfg
        .profiles
        .first()
        .map(String::as_str)
        .unwrap_or("spectral");
    let (f, grid) = match fixture {
        "single-jump" => (
            StepFunction::new(0.0, vec![(1.0, 1.0)])?,
            single_jump_grid(),
        ),
        _ => {
            let table = SpectralTable::new(cfg.dim, cfg.n_max)?;
            (spectral_step(&table), default_t_grid(cfg.dim, cfg.n_max))
        }
    };
    let w = check_interpolation(&f, cfg.zeta.0, cfg.alpha.0, &grid)?;
    let mut report = Report::new("interp", &["t", "lhs", "m0", "m1", "rhs0", "ratio"]);
    header(&mut report, cfg);
    for r in &w.rows {
        report.push_row(vec![
            r.t.into(),
            r.lhs.into(),
            r.m0.into(),
            r.m1.into(),
            r.rhs0.into(),
            r.ratio.into(),
        ]);
    }
    report.summarize("fixture", fixture);
    report.summarize("zeta", format_complex(w.zeta));
    report.summarize("alpha", format_complex(w.alpha));
    report.summarize_float("c_fit", w.c_fit);
    report.summarize_float("prefactor", w.prefactor);
    report.summarize(
        "trend_slope",
        w.trend_slope
            .map(format_float)
            .unwrap_or_else(|| "n/a".into()),
    );
    report.summarize("status", pass_fail(w.passes(INTERP_TREND_TOL)));
    Ok(report)
}

/// Degrees for the supremum over `n`: every degree from `n_min` to
/// `min(64, n_max)`, then dyadic up to `n_max`.
pub fn maximal_degrees(n_min: usize, n_max: usize) -> Vec<usize> {
    n_grid(64.min(n_max), n_max)
        .into_iter()
        .filter(|&n| n >= n_min)
        .collect()
}

/// Largest `c(δ/2)/c(δ)` over consecutive halvings in `rows` (ordered by the
/// `δ` list).
pub fn blowup_ratio(rows: &[InequalityRow]) -> Option<f64> {
    rows.windows(2)
        .filter(|w| (w[1].delta - w[0].delta / 2.0).abs() < 1e-12 * w[0].delta)
        .map(|w| w[1].c_measured / w[0].c_measured)
        .fold(None, |acc: Option<f64>, r| {
            Some(acc.map_or(r, |a| a.max(r)))
        })
}

pub fn run_maximal(cfg: &ExperimentConfig) -> Result<Report, Error> {
    let fs = profiles(cfg)?;
    if fs.is_empty() {
        return Err(ConfigError::Invalid {
            flag: "profile",
            value: String::new(),
            expected: "at least one profile".into(),
        }
        .into());
    }
    let degrees = maximal_degrees(cfg.n_min, cfg.n_max);
    let table = SpectralTable::new(cfg.dim, cfg.n_max)?;
    let rows: Vec<Vec<InequalityRow>> = fs
        .par_iter()
        .map(|f| {
            let q = quadrature(cfg, f)?;
            Ok(inequality_constants(f, &cfg.deltas, &degrees, &table, &q)?)
        })
        .collect::<Result<_, Error>>()?;

    let mut report = Report::new(
        "maximal",
        &[
            "profile",
            "delta",
            "e_star",
            "f_star_pole",
            "f_star_antipode",
            "c_measured",
        ],
    );
    header(&mut report, cfg);
    for (f, rs) in fs.iter().zip(&rows) {
        for r in rs {
            report.push_row(vec![
                f.label().into(),
                r.delta.into(),
                r.e_star.into(),
                r.f_star_pole.into(),
                r.f_star_antipode.into(),
                r.c_measured.into(),
            ]);
        }
    }
    for (j, &d) in cfg.deltas.iter().enumerate() {
        let max_c = rows.iter().map(|rs| rs[j].c_measured).fold(0.0, f64::max);
        report.summarize_float(format!("max_c[delta={d:?}]"), max_c);
    }
    let fitted = rows
        .iter()
        .flatten()
        .map(|r| r.delta * r.c_measured)
        .fold(0.0, f64::max);
    report.summarize_float("fitted_constant", fitted);
    let mut worst: Option<f64> = None;
    for (f, rs) in fs.iter().zip(&rows) {
        if let Some(b) = blowup_ratio(rs) {
            report.summarize_float(format!("blowup[{}]", f.label()), b);
            worst = Some(worst.map_or(b, |w: f64| w.max(b)));
        }
    }
    if let Some(w) = worst {
        report.summarize_float("max_blowup", w);
        report.summarize("status", pass_fail(w <= BLOWUP_LIMIT));
    }
    Ok(report)
}

/// Angle used by the symmetric γ grid of the interior trend checks.
pub fn interior_gamma_grid(count: usize) -> Vec<f64> {
    let (lo, hi) = (PI / 8.0, 7.0 * PI / 8.0);
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}
