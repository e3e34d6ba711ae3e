//! Acceptance suite: eleven numbered criteria, each reduced to a measured
//! quantity, a fixed threshold and a PASS/FAIL verdict.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use sphlab_core::fit::{default_slope_grid, geometric_grid};
use sphlab_core::geometry::{build_zonal_quadrature, default_node_count};
use sphlab_core::interp::{
    check_interpolation, default_t_grid, riesz_mean_step_with, spectral_step, StepFunction,
};
use sphlab_core::kernels::{interior_bound, riesz_kernel, ZonalSeries};
use sphlab_core::maximal::{
    critical_order, mass_function, maximal_function_refined, maximal_riesz_coeffs, mixed_grid,
    n_grid,
};
use sphlab_core::special::binomial;
use sphlab_core::zonal::{apply_riesz_mean_kernel, project_all, test_profiles, EvalPoint};
use sphlab_core::{
    envelope_slope, fit_loglog_slope, Complex64, KernelSpec, Profile, SpectralTable, ZonalFunction,
};

use crate::config::{Command, ExperimentConfig, GammaSpec, Order};
use crate::experiments::{self, interior_gamma_grid, single_jump_grid};
use crate::report::{format_float, without_timestamp, Report};
use crate::Error;

/// Builds the spectral table for `(N, k_max)`; swapped out for fault injection.
pub type TableSource =
    Arc<dyn Fn(usize, usize) -> sphlab_core::Result<SpectralTable> + Send + Sync>;

pub fn exact_tables() -> TableSource {
    Arc::new(SpectralTable::new)
}

/// Tables whose multiplicity `a_5` is off by one.
pub fn corrupted_tables() -> TableSource {
    Arc::new(|dim, k_max| {
        let good = SpectralTable::new(dim, k_max)?;
        let mut a = good.multiplicities().to_vec();
        if let Some(a5) = a.get_mut(5) {
            *a5 += 1;
        }
        SpectralTable::from_multiplicities(dim, a)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Group {
    Tables,
    Means,
    Kernel,
    Interp,
    Maximal,
    Determinism,
}

impl Group {
    pub const ALL: [Group; 6] = [
        Group::Tables,
        Group::Means,
        Group::Kernel,
        Group::Interp,
        Group::Maximal,
        Group::Determinism,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Group::Tables => "tables",
            Group::Means => "means",
            Group::Kernel => "kernel",
            Group::Interp => "interp",
            Group::Maximal => "maximal",
            Group::Determinism => "determinism",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Group {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Group::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Group::ALL.iter().map(Group::name).collect();
                format!(
                    "unknown group {s:?}; expected one of {} or a criterion number 1-11",
                    names.join(", ")
                )
            })
    }
}

/// Selection of criteria by group name or number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector {
    Group(Group),
    Id(u8),
}

impl FromStr for Selector {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.parse::<u8>() {
            Ok(id) if (1..=11).contains(&id) => Ok(Selector::Id(id)),
            Ok(id) => Err(format!("criterion {id} does not exist; expected 1-11")),
            Err(_) => s.parse().map(Selector::Group),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub group: Group,
    pub title: &'static str,
    pub passed: bool,
    pub measured: String,
    pub threshold: String,
    pub detail: String,
}

impl Outcome {
    /// `PASS [4] kernel: ... | measured ... | threshold ...`
    pub fn line(&self) -> String {
        format!(
            "{} [{}] {}: {} | measured {} | threshold {}{}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.group,
            self.title,
            self.measured,
            self.threshold,
            if self.detail.is_empty() {
                String::new()
            } else {
                format!(" | {}", self.detail)
            },
        )
    }
}

pub struct AcceptOptions {
    pub only: Vec<Selector>,
    pub tables: TableSource,
}

impl Default for AcceptOptions {
    fn default() -> Self {
        Self {
            only: Vec::new(),
            tables: exact_tables(),
        }
    }
}

struct Criterion {
    id: u8,
    group: Group,
    title: &'static str,
    run: fn(&TableSource) -> Result<Check, Error>,
}

/// Measured values and verdict of one criterion.
struct Check {
    passed: bool,
    measured: String,
    threshold: String,
    detail: String,
}

const CRITERIA: [Criterion; 11] = [
    Criterion {
        id: 1,
        group: Group::Tables,
        title: "multiplicity and eigenvalue tables",
        run: c1_tables,
    },
    Criterion {
        id: 2,
        group: Group::Means,
        title: "reproducing identity for band-limited data",
        run: c2_reproducing,
    },
    Criterion {
        id: 3,
        group: Group::Kernel,
        title: "partition normalization of the Riesz kernel",
        run: c3_partition,
    },
    Criterion {
        id: 4,
        group: Group::Kernel,
        title: "growth n^N of the diagonal kernel",
        run: c4_diagonal,
    },
    Criterion {
        id: 5,
        group: Group::Kernel,
        title: "interior growth and bound ratio trend",
        run: c5_interior,
    },
    Criterion {
        id: 6,
        group: Group::Kernel,
        title: "Cesaro growth and Riesz/Cesaro agreement",
        run: c6_cesaro,
    },
    Criterion {
        id: 7,
        group: Group::Interp,
        title: "interpolation of Riesz means",
        run: c7_interp,
    },
    Criterion {
        id: 8,
        group: Group::Interp,
        title: "step-function means equal diagonal kernel",
        run: c8_cross,
    },
    Criterion {
        id: 9,
        group: Group::Maximal,
        title: "maximal inequality constant",
        run: c9_maximal,
    },
    Criterion {
        id: 10,
        group: Group::Maximal,
        title: "mass bound F(t) <= C t^N f*",
        run: c10_mass,
    },
    Criterion {
        id: 11,
        group: Group::Determinism,
        title: "byte-identical reports",
        run: c11_determinism,
    },
];

fn selected(only: &[Selector], c: &Criterion) -> bool {
    only.is_empty()
        || only.iter().any(|s| match s {
            Selector::Group(g) => *g == c.group,
            Selector::Id(id) => *id == c.id,
        })
}

/// Runs the selected criteria in order. A criterion whose computation errors
/// is reported as failed with the error as its detail.
pub fn run_accept(opts: &AcceptOptions) -> Vec<Outcome> {
    CRITERIA
        .iter()
        .filter(|c| selected(&opts.only, c))
        .map(|c| {
            let (passed, measured, threshold, detail) = match (c.run)(&opts.tables) {
                Ok(k) => (k.passed, k.measured, k.threshold, k.detail),
                Err(e) => (false, "error".into(), "-".into(), e.to_string()),
            };
            Outcome {
                id: c.id,
                group: c.group,
                title: c.title,
                passed,
                measured,
                threshold,
                detail,
            }
        })
        .collect()
}

/// Combined report of an acceptance run.
pub fn accept_report(outcomes: &[Outcome], only: &[Selector]) -> Report {
    let mut r = Report::new(
        "accept",
        &[
            "criterion",
            "group",
            "title",
            "status",
            "measured",
            "threshold",
            "detail",
        ],
    );
    r.stamp();
    let sel: Vec<String> = only
        .iter()
        .map(|s| match s {
            Selector::Group(g) => g.to_string(),
            Selector::Id(id) => id.to_string(),
        })
        .collect();
    r.meta(
        "only",
        if sel.is_empty() {
            "all".to_string()
        } else {
            sel.join(",")
        },
    );
    for o in outcomes {
        r.push_row(vec![
            (o.id as usize).into(),
            o.group.name().into(),
            o.title.into(),
            (if o.passed { "PASS" } else { "FAIL" }).into(),
            o.measured.clone().into(),
            o.threshold.clone().into(),
            o.detail.clone().into(),
        ]);
    }
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id.to_string())
        .collect();
    r.summarize("passed", outcomes.len() - failed.len());
    r.summarize(
        "failed",
        if failed.is_empty() {
            "none".to_string()
        } else {
            failed.join(",")
        },
    );
    r.summarize("status", if failed.is_empty() { "PASS" } else { "FAIL" });
    r
}

fn f(x: f64) -> String {
    format!("{x:.4}")
}

fn seq_abs_max(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, |a, b| a.max(b.abs()))
}

fn c1_tables(tables: &TableSource) -> Result<Check, Error> {
    const K: usize = 1024;
    let mut mismatches = Vec::new();
    let mut slopes = Vec::new();
    let fit_at = geometric_grid(256, K, 4);
    for dim in 2..=8usize {
        let t = tables(dim, K)?;
        for k in 0..=K {
            let (n, kk) = (dim as u64, k as u64);
            let top = binomial(n + kk, kk).ok_or(sphlab_core::Error::Overflow("binomial"))?;
            let low = if k >= 2 {
                binomial(n + kk - 2, kk - 2).unwrap_or(0)
            } else {
                0
            };
            if t.multiplicities()[k] != top - low {
                mismatches.push(format!("N={dim} k={k}"));
            }
            if t.eigenvalue(k) != (k * (k + dim - 1)) as f64 {
                mismatches.push(format!("lambda N={dim} k={k}"));
            }
        }
        let pts: Vec<(f64, f64)> = fit_at
            .iter()
            .map(|&k| (k as f64, t.multiplicity(k)))
            .collect();
        slopes.push((dim, fit_loglog_slope(&pts, 0.0, f64::INFINITY)?.slope));
    }
    let worst = slopes
        .iter()
        .map(|&(d, s)| (s - (d as f64 - 1.0)).abs())
        .fold(0.0, f64::max);
    let mut detail = format!(
        "slopes {}",
        slopes
            .iter()
            .map(|(d, s)| format!("N={d}:{}", f(*s)))
            .collect::<Vec<_>>()
            .join(" ")
    );
    if !mismatches.is_empty() {
        detail = format!(
            "{} table mismatches (first {}); {detail}",
            mismatches.len(),
            mismatches[0]
        );
    }
    Ok(Check {
        passed: mismatches.is_empty() && worst <= 0.1,
        measured: format!(
            "mismatches={} max|slope-(N-1)|={}",
            mismatches.len(),
            f(worst)
        ),
        threshold: "0 mismatches, 0.1".into(),
        detail,
    })
}

/// Deterministic coefficient pattern for band-limited test data.
fn bandlimited_coeffs(m: usize) -> Vec<f64> {
    (0..=m)
        .map(|k| (1.3 * k as f64 + 0.4).cos() / (1.0 + k as f64))
        .collect()
}

fn c2_reproducing(tables: &TableSource) -> Result<Check, Error> {
    let cells: Vec<(usize, usize, usize)> = [2usize, 3]
        .iter()
        .flat_map(|&d| {
            (0..=16usize).flat_map(move |m| [m + 1, m + 2, 2 * m + 5].map(|n| (d, m, n)))
        })
        .collect();
    let errs: Vec<(usize, usize, usize, f64)> = cells
        .par_iter()
        .map(|&(dim, m, n)| {
            let table = tables(dim, n)?;
            let f = ZonalFunction::new(
                dim,
                Profile::BandLimited {
                    coeffs: bandlimited_coeffs(m),
                },
            )?;
            let q = f.quadrature(n)?;
            let spec = KernelSpec::new(dim, 0.0, n)?;
            let e = apply_riesz_mean_kernel(&f, &spec, &table, &q, EvalPoint::Pole)?;
            Ok((dim, m, n, (e - f.value(0.0)).abs()))
        })
        .collect::<Result<_, Error>>()?;
    let worst = errs
        .iter()
        .copied()
        .fold((0, 0, 0, 0.0), |a, b| if b.3 > a.3 { b } else { a });
    Ok(Check {
        passed: worst.3 <= 1e-8,
        measured: format!("max|E_n^0 f(pole) - f(pole)|={:.3e}", worst.3),
        threshold: "1e-8".into(),
        detail: format!(
            "worst at N={} m={} n={}; {} cells",
            worst.0,
            worst.1,
            worst.2,
            errs.len()
        ),
    })
}

fn c3_partition(tables: &TableSource) -> Result<Check, Error> {
    let cells: Vec<(usize, f64, usize)> = [2usize, 3, 4]
        .iter()
        .flat_map(|&d| {
            [0.0, 0.5, 1.0, 2.0]
                .into_iter()
                .flat_map(move |a| [1usize, 8, 64, 512].map(|n| (d, a, n)))
        })
        .collect();
    let errs: Vec<f64> = cells
        .par_iter()
        .map(|&(dim, alpha, n)| {
            let table = tables(dim, n)?;
            let one = ZonalFunction::new(dim, Profile::Constant(1.0))?;
            let q = build_zonal_quadrature(dim, default_node_count(n))?;
            let spec = KernelSpec::new(dim, alpha, n)?;
            Ok((apply_riesz_mean_kernel(&one, &spec, &table, &q, EvalPoint::Pole)? - 1.0).abs())
        })
        .collect::<Result<_, Error>>()?;
    let worst = seq_abs_max(errs.iter().copied());
    Ok(Check {
        passed: worst <= 1e-10,
        measured: format!("max|integral - 1|={worst:.3e}"),
        threshold: "1e-10".into(),
        detail: format!("{} cells", cells.len()),
    })
}

fn c4_diagonal(tables: &TableSource) -> Result<Check, Error> {
    let grid = default_slope_grid();
    let mut rows = Vec::new();
    for dim in [2usize, 3, 4] {
        let table = tables(dim, 512)?;
        let series = ZonalSeries::new(&table, 0.0, 512)?;
        let fit = |inclusive: bool| -> Result<f64, Error> {
            let pts = grid
                .iter()
                .map(|&n| Ok((n as f64, series.riesz(0.0, n, inclusive)?)))
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(fit_loglog_slope(&pts, 0.0, f64::INFINITY)?.slope)
        };
        rows.push((dim, fit(true)?, fit(false)?));
    }
    let worst = rows
        .iter()
        .map(|&(d, s, _)| (s - d as f64).abs())
        .fold(0.0, f64::max);
    Ok(Check {
        passed: worst <= 0.05,
        measured: rows
            .iter()
            .map(|(d, s, _)| format!("N={d}:{}", f(*s)))
            .collect::<Vec<_>>()
            .join(" "),
        threshold: "|slope-N| <= 0.05".into(),
        detail: format!(
            "inclusive top; strict-top slopes {}",
            rows.iter()
                .map(|(d, _, s)| format!("N={d}:{}", f(*s)))
                .collect::<Vec<_>>()
                .join(" ")
        ),
    })
}

/// `|Θ^α(γ, n)|` or `|Ξ^α(γ, n)|` for `n = 1..=640`, so that envelope windows at
/// the last fit point `512` are complete.
fn sequence(
    table: &SpectralTable,
    alpha: f64,
    gamma: f64,
    cesaro: bool,
) -> Result<Vec<(f64, f64)>, Error> {
    let ns: Vec<usize> = (1..=640).collect();
    let pairs = experiments::kernel_pairs(table, alpha, GammaSpec::Fixed(gamma), &ns)?;
    Ok(ns
        .iter()
        .zip(pairs)
        .map(|(&n, (r, c))| (n as f64, if cesaro { c } else { r }))
        .collect())
}

fn c5_interior(tables: &TableSource) -> Result<Check, Error> {
    let grid = default_slope_grid();
    let gammas = interior_gamma_grid(25);
    let mut slopes = Vec::new();
    let mut trends = Vec::new();
    for (dim, alpha) in [(2usize, 0.0), (2, 1.0), (3, 0.0), (3, 1.0)] {
        let table = tables(dim, 640)?;
        let s = envelope_slope(&sequence(&table, alpha, PI / 2.0, false)?, &grid)?.slope;
        slopes.push((dim, alpha, s, s - ((dim as f64 - 1.0) / 2.0 - alpha)));

        let series = gammas
            .iter()
            .map(|&g| ZonalSeries::new(&table, g, 512))
            .collect::<sphlab_core::Result<Vec<_>>>()?;
        let mut ratio = Vec::new();
        for &n in &grid {
            let mut worst: f64 = 0.0;
            for (s, &g) in series.iter().zip(&gammas) {
                worst =
                    worst.max(s.riesz(alpha, n, true)?.abs() / interior_bound(dim, alpha, n, g)?);
            }
            ratio.push((n as f64, worst));
        }
        trends.push((
            dim,
            alpha,
            fit_loglog_slope(&ratio, 0.0, f64::INFINITY)?.slope,
        ));
    }
    let worst_slope = slopes.iter().map(|s| s.3.abs()).fold(0.0, f64::max);
    let worst_trend = trends.iter().map(|t| t.2.abs()).fold(0.0, f64::max);
    Ok(Check {
        passed: worst_slope <= 0.15 && worst_trend <= 0.1,
        measured: format!(
            "max|slope-target|={} max|trend|={}",
            f(worst_slope),
            f(worst_trend)
        ),
        threshold: "0.15, 0.1".into(),
        detail: format!(
            "slopes {}; trends {}",
            slopes
                .iter()
                .map(|(d, a, s, _)| format!("N={d},a={a}:{}", f(*s)))
                .collect::<Vec<_>>()
                .join(" "),
            trends
                .iter()
                .map(|(d, a, t)| format!("N={d},a={a}:{}", f(*t)))
                .collect::<Vec<_>>()
                .join(" ")
        ),
    })
}

fn c6_cesaro(tables: &TableSource) -> Result<Check, Error> {
    let grid = default_slope_grid();
    let table2 = tables(2, 640)?;
    let mut growth = Vec::new();
    for alpha in [0.0, 1.0] {
        let s = envelope_slope(&sequence(&table2, alpha, 2.0, true)?, &grid)?.slope;
        growth.push((alpha, s, s <= 2.0 - 1.0 - alpha + 0.15));
    }
    let mut agree = Vec::new();
    for dim in [2usize, 3] {
        let table = tables(dim, 640)?;
        for alpha in [0.0, 1.0, 2.0] {
            let r = envelope_slope(&sequence(&table, alpha, PI / 2.0, false)?, &grid)?.slope;
            let c = envelope_slope(&sequence(&table, alpha, PI / 2.0, true)?, &grid)?.slope;
            agree.push((dim, alpha, r, c, (r - c).abs() <= 0.1));
        }
    }
    let passed = growth.iter().all(|g| g.2) && agree.iter().all(|a| a.4);
    let worst_gap = agree.iter().map(|a| (a.2 - a.3).abs()).fold(0.0, f64::max);
    Ok(Check {
        passed,
        measured: format!(
            "cesaro slopes at 2.0 (N=2) {}; max|riesz-cesaro|={}",
            growth
                .iter()
                .map(|(a, s, _)| format!("a={a}:{}", f(*s)))
                .collect::<Vec<_>>()
                .join(" "),
            f(worst_gap)
        ),
        threshold: "slope <= N-1-a+0.15, gap <= 0.1".into(),
        detail: agree
            .iter()
            .map(|(d, a, r, c, ok)| {
                format!(
                    "N={d},a={a}: riesz {} cesaro {}{}",
                    f(*r),
                    f(*c),
                    if *ok { "" } else { " (FAIL)" }
                )
            })
            .collect::<Vec<_>>()
            .join("; "),
    })
}

fn c7_interp(tables: &TableSource) -> Result<Check, Error> {
    let one = Complex64::new(1.0, 0.0);
    let jump = StepFunction::new(0.0, vec![(1.0, 1.0)])?;
    let mut c_err: f64 = 0.0;
    for a in [0.25, 0.5, 0.75] {
        let w = check_interpolation(&jump, one, Complex64::new(a, 0.0), &single_jump_grid())?;
        c_err = c_err.max((w.c_fit - 1.0).abs());
    }
    let table = tables(2, 512)?;
    let step = spectral_step(&table);
    let grid = default_t_grid(2, 512);
    let mut trends = Vec::new();
    for a in [0.25, 0.5, 0.75] {
        let w = check_interpolation(&step, one, Complex64::new(a, 0.0), &grid)?;
        trends.push((a, w.trend_slope.unwrap_or(f64::NAN)));
    }
    let smoke = check_interpolation(&step, one, Complex64::new(0.5, 1.0), &grid)?;
    let finite = smoke.c_fit.is_finite()
        && smoke.rows.iter().all(|r| {
            [r.lhs, r.m0, r.m1, r.rhs0, r.ratio]
                .iter()
                .all(|x| x.is_finite())
        });
    let worst_trend = trends.iter().map(|t| t.1.abs()).fold(0.0, f64::max);
    Ok(Check {
        passed: c_err <= 1e-10 && worst_trend <= 0.05 && finite,
        measured: format!(
            "|C_fit-1|={c_err:.3e} max|trend|={} complex finite={finite}",
            f(worst_trend)
        ),
        threshold: "1e-10, 0.05".into(),
        detail: format!(
            "trends {}; complex c_fit {}",
            trends
                .iter()
                .map(|(a, t)| format!("a={a}:{}", f(*t)))
                .collect::<Vec<_>>()
                .join(" "),
            format_float(smoke.c_fit)
        ),
    })
}

fn c8_cross(tables: &TableSource) -> Result<Check, Error> {
    let mut worst = (0.0, 0usize, 0.0, 0usize);
    for dim in [2usize, 3, 4] {
        let table = tables(dim, 256)?;
        let step = spectral_step(&table);
        for alpha in [0.0, 1.0, 2.0] {
            for n in 1..=256 {
                let spec = KernelSpec::new(dim, alpha, n)?.with_inclusive_top(false);
                let theta = riesz_kernel(&spec, &table, 0.0)?;
                let v = riesz_mean_step_with(
                    &step,
                    Complex64::new(alpha, 0.0),
                    table.eigenvalue(n),
                    false,
                )?;
                let rel = (v - theta).norm() / theta.abs();
                if rel > worst.0 {
                    worst = (rel, dim, alpha, n);
                }
            }
        }
    }
    Ok(Check {
        passed: worst.0 <= 1e-12,
        measured: format!("max relative difference={:.3e}", worst.0),
        threshold: "1e-12 (relative)".into(),
        detail: format!("worst at N={} a={} n={}", worst.1, worst.2, worst.3),
    })
}

const DELTAS: [f64; 4] = [1.0, 0.5, 0.25, 0.125];

/// Profile label with `c(δ)` on the base and doubled degree grids.
type ProfileConstants = (String, [f64; 4], [f64; 4]);

fn maximal_constants(dim: usize, tables: &TableSource) -> Result<Vec<ProfileConstants>, Error> {
    let base = n_grid(64, 512);
    let doubled = n_grid(128, 1024);
    let table = tables(dim, 1024)?;
    test_profiles(dim)?
        .par_iter()
        .map(|f| {
            let denom = maximal_function_refined(f, EvalPoint::Pole)?.value
                + maximal_function_refined(f, EvalPoint::Antipode)?.value;
            let q = f.quadrature(1024)?;
            let coeffs = project_all(f, &table, 1024, &q)?;
            let mut c = [[0.0; 4]; 2];
            for (slot, grid) in c.iter_mut().zip([&base, &doubled]) {
                for (j, d) in DELTAS.iter().enumerate() {
                    let alpha = critical_order(dim) + d;
                    slot[j] = maximal_riesz_coeffs(&coeffs, dim, alpha, grid, EvalPoint::Pole)?
                        .value
                        / denom;
                }
            }
            Ok((f.label().to_string(), c[0], c[1]))
        })
        .collect()
}

fn c9_maximal(tables: &TableSource) -> Result<Check, Error> {
    let mut passed = true;
    let mut measured = Vec::new();
    let mut detail = Vec::new();
    for dim in [2usize, 3] {
        let rows = maximal_constants(dim, tables)?;
        let fitted = |pick: fn(&ProfileConstants) -> &[f64; 4]| {
            rows.iter()
                .flat_map(|r| pick(r).iter().zip(DELTAS).map(|(c, d)| c * d))
                .fold(0.0, f64::max)
        };
        let c_base = fitted(|r| &r.1);
        let c_doubled = fitted(|r| &r.2);
        let change = (c_doubled - c_base).abs() / c_base;
        let mut blowup: f64 = 0.0;
        let mut blowup_at = String::new();
        for (label, cb, cd) in &rows {
            for c in [cb, cd] {
                for j in 0..3 {
                    let b = c[j + 1] / c[j];
                    if b > blowup {
                        blowup = b;
                        blowup_at = format!("{label} delta={}", DELTAS[j + 1]);
                    }
                }
            }
        }
        let ok = c_base.is_finite() && c_base > 0.0 && change <= 0.05 && blowup <= 2.5;
        passed &= ok;
        measured.push(format!(
            "N={dim}: C={} change={} blowup={}",
            f(c_base),
            f(change),
            f(blowup)
        ));
        detail.push(format!(
            "N={dim}: C(doubled)={} worst blow-up at {blowup_at}",
            f(c_doubled)
        ));
    }
    Ok(Check {
        passed,
        measured: measured.join("; "),
        threshold: "finite C, change <= 0.05, blow-up <= 2.5".into(),
        detail: detail.join("; "),
    })
}

fn c10_mass(_tables: &TableSource) -> Result<Check, Error> {
    let coarse = mixed_grid(12, 4);
    let fine = mixed_grid(13, 8);
    let mut worst = (0.0, String::new());
    let mut all_finite = true;
    for dim in [2usize, 3] {
        let fs = test_profiles(dim)?;
        let rows: Vec<(String, f64, f64)> = fs
            .par_iter()
            .map(|f| {
                let fs = maximal_function_refined(f, EvalPoint::Pole)?.value;
                let a = mass_function(f, EvalPoint::Pole, &coarse)?.ratio_sup(dim, fs)?;
                let b = mass_function(f, EvalPoint::Pole, &fine)?.ratio_sup(dim, fs)?;
                Ok((format!("N={dim} {}", f.label()), a, b))
            })
            .collect::<Result<_, Error>>()?;
        for (label, a, b) in rows {
            all_finite &= a.is_finite() && b.is_finite();
            let change = (b - a).abs() / a;
            if change > worst.0 || worst.1.is_empty() {
                worst = (change, label);
            }
        }
    }
    Ok(Check {
        passed: all_finite && worst.0 <= 0.02,
        measured: format!("max relative change={:.3e}", worst.0),
        threshold: "finite, 0.02".into(),
        detail: format!("worst {}", worst.1),
    })
}

/// Small configurations of every report-producing subcommand.
pub fn determinism_configs() -> Vec<ExperimentConfig> {
    let mut kernel = ExperimentConfig::new(Command::Kernel);
    kernel.dim = 3;
    kernel.alpha = Order::real(1.0);
    kernel.n_max = 256;
    kernel.gammas = vec![GammaSpec::Fixed(PI / 2.0), GammaSpec::PiMinusOverN(1.0)];
    let mut means = ExperimentConfig::new(Command::Means);
    means.n_max = 64;
    let mut interp = ExperimentConfig::new(Command::Interp);
    interp.n_max = 256;
    let mut maximal = ExperimentConfig::new(Command::Maximal);
    maximal.n_max = 64;
    maximal.profiles = vec!["cap:pi/8".into(), "antipodal-bump:0.3".into()];
    maximal.deltas = vec![1.0, 0.5];
    vec![kernel, means, interp, maximal]
}

fn render_all(cfgs: &[ExperimentConfig]) -> Result<Vec<String>, Error> {
    cfgs.iter()
        .map(|c| Ok(without_timestamp(&experiments::run(c)?.render()?)))
        .collect()
}

fn c11_determinism(_tables: &TableSource) -> Result<Check, Error> {
    let cfgs = determinism_configs();
    let first = render_all(&cfgs)?;
    let second = render_all(&cfgs)?;
    let serial_pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| Error::Runtime(e.to_string()))?;
    let serial = serial_pool.install(|| render_all(&cfgs))?;
    let mut differing = Vec::new();
    for (i, c) in cfgs.iter().enumerate() {
        if first[i] != second[i] || first[i] != serial[i] {
            differing.push(c.command.name());
        }
    }
    Ok(Check {
        passed: differing.is_empty(),
        measured: format!("{} of {} reports differ", differing.len(), cfgs.len()),
        threshold: "0".into(),
        detail: format!(
            "parallel x2 and single-thread runs of {}{}",
            cfgs.iter()
                .map(|c| c.command.name())
                .collect::<Vec<_>>()
                .join(","),
            if differing.is_empty() {
                String::new()
            } else {
                format!("; differing: {}", differing.join(","))
            }
        ),
    })
}
