//! Riesz means of step functions of complex order, and a numerical check of
//! the interpolation inequality between orders `0` and `ζ`:
//!
//! `|t^α f^α(t)| ≤ C (1+|α|)^{Re ζ+2} (|α|/Re α + |ζ−α|/Re(ζ−α))
//!                  · M_0(t)^{Re(ζ−α)/Re ζ} · M_1(t)^{Re α/Re ζ}`
//!
//! for `0 < Re α < Re ζ`, where `|f| ≤ M_0` and `|t^ζ f^ζ| ≤ M_1`.

use num_complex::Complex64;

use crate::error::{out_of_range, Error, Result};
use crate::fit::fit_loglog_slope;
use crate::special::NeumaierSum;
use crate::spectral::SpectralTable;

/// `f(t) = origin_mass + Σ_{s_j ≤ t} c_j` for `t > 0`, and `0` for `t ≤ 0`.
///
/// `origin_mass` is a jump at `0⁺`; the listed jumps sit at `s_j > 0`,
/// strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    origin_mass: f64,
    jumps: Vec<(f64, f64)>,
}

impl StepFunction {
    pub fn new(origin_mass: f64, jumps: Vec<(f64, f64)>) -> Result<Self> {
        if !origin_mass.is_finite() {
            return Err(Error::InvalidStep("origin mass must be finite".into()));
        }
        for (i, &(s, c)) in jumps.iter().enumerate() {
            if !(s > 0.0) || !s.is_finite() || !c.is_finite() {
                return Err(Error::InvalidStep(format!(
                    "jump {i} at s={s} with size {c}"
                )));
            }
            if i > 0 && !(jumps[i - 1].0 < s) {
                return Err(Error::InvalidStep(format!(
                    "jump locations not increasing at index {i}"
                )));
            }
        }
        Ok(Self { origin_mass, jumps })
    }

    pub fn origin_mass(&self) -> f64 {
        self.origin_mass
    }

    pub fn jumps(&self) -> &[(f64, f64)] {
        &self.jumps
    }

    /// Right-continuous value `f(t)`.
    pub fn value(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let end = self.jumps.partition_point(|&(s, _)| s <= t);
        let mut acc = NeumaierSum::default();
        acc.add(self.origin_mass);
        for &(_, c) in &self.jumps[..end] {
            acc.add(c);
        }
        acc.value()
    }

    /// The same function with every jump location multiplied by `scale`.
    pub fn scaled(&self, scale: f64) -> Result<Self> {
        Self::new(
            self.origin_mass,
            self.jumps.iter().map(|&(s, c)| (s * scale, c)).collect(),
        )
    }
}

/// `f^α(t) = ∫_0^t (1 − s/t)^α df(s)` with the inclusive top convention.
pub fn riesz_mean_step(f: &StepFunction, alpha: Complex64, t: f64) -> Result<Complex64> {
    riesz_mean_step_with(f, alpha, t, true)
}

/// `f^α(t)` with an explicit convention for a jump sitting exactly at `t`:
/// it contributes `c_j` when `α = 0` and `inclusive_top` is set, else nothing.
pub fn riesz_mean_step_with(
    f: &StepFunction,
    alpha: Complex64,
    t: f64,
    inclusive_top: bool,
) -> Result<Complex64> {
    if !(t > 0.0) {
        return out_of_range("t", t, "> 0");
    }
    if !(alpha.re > -1.0) {
        return out_of_range("Re alpha", alpha.re, "> -1");
    }
    let zero = alpha == Complex64::new(0.0, 0.0);
    let (mut re, mut im) = (NeumaierSum::default(), NeumaierSum::default());
    re.add(f.origin_mass);
    for &(s, c) in &f.jumps {
        if s > t {
            break;
        }
        let w = if s == t {
            if zero && inclusive_top {
                Complex64::new(1.0, 0.0)
            } else {
                continue;
            }
        } else if zero {
            Complex64::new(1.0, 0.0)
        } else {
            // base in (0, 1]: principal log is real
            (alpha * ((t - s) / t).ln()).exp()
        };
        re.add(c * w.re);
        im.add(c * w.im);
    }
    Ok(Complex64::new(re.value(), im.value()))
}

/// Counting-type function of the diagonal spectral function: mass `1/ω_N` at
/// `0⁺` and jumps `a_k/ω_N` at `λ_k`, `k = 1..=k_max`.
pub fn spectral_step(table: &SpectralTable) -> StepFunction {
    let area = table.area();
    StepFunction {
        origin_mass: table.multiplicity(0) / area,
        jumps: (1..=table.k_max())
            .map(|k| (table.eigenvalue(k), table.multiplicity(k) / area))
            .collect(),
    }
}

fn t_pow(t: f64, z: Complex64) -> Complex64 {
    (z * t.ln()).exp()
}

/// Running maxima `M_0(t_i) = max_{t ≤ t_i} |f(t)|` and
/// `M_1(t_i) = max_{t ≤ t_i} |t^ζ f^ζ(t)|`, sampled at the jump points and the
/// grid points.
pub fn running_majorants(
    f: &StepFunction,
    zeta: Complex64,
    t_grid: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    if t_grid.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, got: 0 });
    }
    if t_grid.windows(2).any(|w| !(w[0] < w[1])) || !(t_grid[0] > 0.0) {
        return out_of_range("t_grid", t_grid[0], "positive and strictly increasing");
    }
    let mut m0 = Vec::with_capacity(t_grid.len());
    let mut m1 = Vec::with_capacity(t_grid.len());
    let (mut run0, mut run1) = (0.0f64, 0.0f64);
    let mut next_jump = 0;
    for &t in t_grid {
        while next_jump < f.jumps.len() && f.jumps[next_jump].0 <= t {
            let s = f.jumps[next_jump].0;
            run0 = run0.max(f.value(s).abs());
            run1 = run1.max((t_pow(s, zeta) * riesz_mean_step(f, zeta, s)?).norm());
            next_jump += 1;
        }
        run0 = run0.max(f.origin_mass.abs()).max(f.value(t).abs());
        run1 = run1.max((t_pow(t, zeta) * riesz_mean_step(f, zeta, t)?).norm());
        m0.push(run0);
        m1.push(run1);
    }
    Ok((m0, m1))
}

/// One grid row of the interpolation check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolationRow {
    pub t: f64,
    pub lhs: f64,
    pub m0: f64,
    pub m1: f64,
    pub rhs0: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationWitness {
    pub zeta: Complex64,
    pub alpha: Complex64,
    pub rows: Vec<InterpolationRow>,
    /// Smallest constant making `lhs ≤ C · rhs0` hold on the grid.
    pub c_fit: f64,
    /// `(1+|α|)^{Re ζ+2} (|α|/Re α + |ζ−α|/Re(ζ−α))`.
    pub prefactor: f64,
    /// Log-log slope of `ratio` against `t`; `None` with fewer than four
    /// positive ratios.
    pub trend_slope: Option<f64>,
}

impl InterpolationWitness {
    /// Bounded on the grid: finite `c_fit` and a trend slope within `tol` of 0.
    pub fn passes(&self, tol: f64) -> bool {
        self.c_fit.is_finite() && self.trend_slope.map_or(true, |s| s.abs() <= tol)
    }
}

pub fn interpolation_prefactor(zeta: Complex64, alpha: Complex64) -> f64 {
    (1.0 + alpha.norm()).powf(zeta.re + 2.0)
        * (alpha.norm() / alpha.re + (zeta - alpha).norm() / (zeta - alpha).re)
}

/// Measures the interpolation constant of `f` between orders `0` and `ζ` at
/// intermediate order `α`.
pub fn check_interpolation(
    f: &StepFunction,
    zeta: Complex64,
    alpha: Complex64,
    t_grid: &[f64],
) -> Result<InterpolationWitness> {
    if !(zeta.re > 0.0) {
        return out_of_range("Re zeta", zeta.re, "> 0");
    }
    if !(alpha.re > 0.0 && alpha.re < zeta.re) {
        return out_of_range("Re alpha", alpha.re, "in (0, Re zeta)");
    }
    let (m0, m1) = running_majorants(f, zeta, t_grid)?;
    let e0 = (zeta - alpha).re / zeta.re;
    let e1 = alpha.re / zeta.re;
    let mut rows = Vec::with_capacity(t_grid.len());
    for (i, &t) in t_grid.iter().enumerate() {
        let lhs = (t_pow(t, alpha) * riesz_mean_step(f, alpha, t)?).norm();
        let rhs0 = m0[i].powf(e0) * m1[i].powf(e1);
        let ratio = if rhs0 > 0.0 {
            lhs / rhs0
        } else if lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        rows.push(InterpolationRow {
            t,
            lhs,
            m0: m0[i],
            m1: m1[i],
            rhs0,
            ratio,
        });
    }
    let c_fit = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let positive: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.ratio > 0.0 && r.ratio.is_finite())
        .map(|r| (r.t, r.ratio))
        .collect();
    let trend_slope = fit_loglog_slope(&positive, 0.0, f64::INFINITY)
        .ok()
        .map(|f| f.slope);
    Ok(InterpolationWitness {
        zeta,
        alpha,
        rows,
        c_fit,
        prefactor: interpolation_prefactor(zeta, alpha),
        trend_slope,
    })
}

/// `t = λ_n` for `n = 1, 2, 4, …, n_max` plus the midpoints between
/// consecutive entries.
pub fn default_t_grid(dim: usize, n_max: usize) -> Vec<f64> {
    let mut ns = Vec::new();
    let mut n = 1;
    while n <= n_max {
        ns.push(n);
        n *= 2;
    }
    let lam: Vec<f64> = ns
        .iter()
        .map(|&n| crate::spectral::eigenvalue(dim, n))
        .collect();
    let mut grid = Vec::with_capacity(2 * lam.len());
    for (i, &l) in lam.iter().enumerate() {
        grid.push(l);
        if let Some(&next) = lam.get(i + 1) {
            grid.push(0.5 * (l + next));
        }
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{riesz_kernel, KernelSpec};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn unit_jump() -> StepFunction {
        StepFunction::new(0.0, vec![(1.0, 1.0)]).unwrap()
    }

    #[test]
    fn step_validation() {
        assert!(StepFunction::new(0.0, vec![(0.0, 1.0)]).is_err());
        assert!(StepFunction::new(0.0, vec![(2.0, 1.0), (1.0, 1.0)]).is_err());
        assert!(StepFunction::new(f64::NAN, vec![]).is_err());
        let f = StepFunction::new(0.5, vec![(1.0, 1.0), (3.0, -2.0)]).unwrap();
        assert_eq!(f.value(-1.0), 0.0);
        assert_eq!(f.value(0.5), 0.5);
        assert_eq!(f.value(1.0), 1.5);
        assert_eq!(f.value(5.0), -0.5);
    }

    #[test]
    fn riesz_mean_examples() {
        let f = unit_jump();
        for a in [0.25, 1.0, 3.5] {
            let v = riesz_mean_step(&f, c(a), 2.0).unwrap();
            assert!((v.re - 0.5f64.powf(a)).abs() < 1e-15 && v.im == 0.0);
        }
        let g = StepFunction::new(0.25, vec![(1.0, 1.0), (2.0, 3.0), (4.0, 5.0)]).unwrap();
        // α = 0 reproduces f(t−) plus the top jump by convention
        assert_eq!(
            riesz_mean_step_with(&g, c(0.0), 2.0, true).unwrap().re,
            4.25
        );
        assert_eq!(
            riesz_mean_step_with(&g, c(0.0), 2.0, false).unwrap().re,
            1.25
        );
        assert_eq!(riesz_mean_step(&g, c(0.0), 3.0).unwrap().re, 4.25);
        assert_eq!(riesz_mean_step(&g, c(1.0), 2.0).unwrap().re, 0.25 + 0.5);
        assert!(riesz_mean_step(&g, c(1.0), 0.0).is_err());
        assert!(riesz_mean_step(&g, c(-1.0), 1.0).is_err());
    }

    #[test]
    fn spectral_step_examples() {
        let table = SpectralTable::new(2, 6).unwrap();
        let f = spectral_step(&table);
        let fp = 4.0 * PI;
        let want = [(2.0, 3.0 / fp), (6.0, 5.0 / fp), (12.0, 7.0 / fp)];
        for (got, want) in f.jumps().iter().zip(want) {
            assert_eq!(got.0, want.0);
            assert!((got.1 - want.1).abs() < 1e-16);
        }
        for t in [0.1, 1.0, 1.999] {
            assert!((f.value(t) - 1.0 / fp).abs() < 1e-16);
        }
        let spec = KernelSpec::new(2, 0.0, 5).unwrap();
        let theta = riesz_kernel(&spec, &table, 0.0).unwrap();
        assert!((f.value(table.eigenvalue(5)) - theta).abs() < 1e-13);
    }

    #[test]
    fn matches_diagonal_kernel_with_strict_top() {
        for dim in [2, 3, 4] {
            let table = SpectralTable::new(dim, 64).unwrap();
            let f = spectral_step(&table);
            for n in [1, 2, 7, 64] {
                for alpha in [0.0, 1.0, 2.0, 0.37] {
                    let spec = KernelSpec::new(dim, alpha, n)
                        .unwrap()
                        .with_inclusive_top(false);
                    let theta = riesz_kernel(&spec, &table, 0.0).unwrap();
                    let v = riesz_mean_step_with(&f, c(alpha), table.eigenvalue(n), false).unwrap();
                    assert!((v.re - theta).abs() <= 1e-12 * theta.abs());
                }
            }
        }
    }

    // t^m f^m(t) = m ∫_0^t (t − s)^{m−1} f(s) ds, integrated exactly on each
    // constant piece of f.
    fn iterated_average(f: &StepFunction, m: i32, t: f64) -> f64 {
        let mut edges = vec![0.0];
        edges.extend(f.jumps().iter().map(|j| j.0).filter(|&s| s < t));
        edges.push(t);
        let mut acc = 0.0;
        for w in edges.windows(2) {
            let value = f.value(0.5 * (w[0] + w[1]));
            acc += value * ((t - w[0]).powi(m) - (t - w[1]).powi(m));
        }
        acc / t.powi(m)
    }

    #[test]
    fn integer_orders_match_iterated_averages() {
        let f =
            StepFunction::new(0.3, vec![(0.5, 1.0), (1.5, -0.4), (2.0, 2.0), (7.0, 0.1)]).unwrap();
        for m in 1..=4 {
            for t in [0.2, 1.0, 1.9, 3.0, 10.0] {
                let got = riesz_mean_step(&f, c(m as f64), t).unwrap().re;
                let want = iterated_average(&f, m, t);
                assert!((got - want).abs() < 1e-12, "m={m} t={t}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn majorant_examples() {
        let f = StepFunction::new(0.0, vec![(1.0, 0.5), (2.0, 0.25), (3.0, 1.0)]).unwrap();
        let grid = [0.5, 1.5, 2.5, 4.0];
        let (m0, _) = running_majorants(&f, c(1.0), &grid).unwrap();
        for (t, m) in grid.iter().zip(&m0) {
            assert_eq!(*m, f.value(*t));
        }
        let grid: Vec<f64> = (1..=10).map(|i| 2f64.powi(i)).collect();
        let (m0, m1) = running_majorants(&unit_jump(), c(1.0), &grid).unwrap();
        for ((t, a), b) in grid.iter().zip(&m0).zip(&m1) {
            assert_eq!(*a, 1.0);
            assert!((b - (t - 1.0)).abs() < 1e-12);
        }
        assert!(running_majorants(&f, c(1.0), &[]).is_err());
        assert!(running_majorants(&f, c(1.0), &[2.0, 1.0]).is_err());
    }

    #[test]
    fn single_jump_constant_is_exactly_one() {
        let grid: Vec<f64> = (1..=10).map(|i| 2f64.powi(i)).collect();
        for a in [0.5, 0.9] {
            let w = check_interpolation(&unit_jump(), c(1.0), c(a), &grid).unwrap();
            assert!((w.c_fit - 1.0).abs() < 1e-10, "alpha={a}: {}", w.c_fit);
            assert!(w.passes(0.05));
        }
        let w = check_interpolation(&unit_jump(), c(1.0), Complex64::new(0.5, 1.0), &grid).unwrap();
        assert!(w.c_fit.is_finite() && w.rows.iter().all(|r| r.lhs.is_finite()));
        assert!(check_interpolation(&unit_jump(), c(1.0), c(1.0), &grid).is_err());
        assert!(check_interpolation(&unit_jump(), c(1.0), c(0.0), &grid).is_err());
    }

    #[test]
    fn prefactor_value() {
        let p = interpolation_prefactor(c(1.0), c(0.5));
        assert!((p - 1.5f64.powi(3) * 2.0).abs() < 1e-14);
    }

    #[test]
    fn t_grid_shape() {
        let g = default_t_grid(2, 8);
        assert_eq!(g, vec![2.0, 4.0, 6.0, 13.0, 20.0, 46.0, 72.0]);
    }

    proptest! {
        #[test]
        fn scaling_covariance(scale in 0.01f64..100.0, t in 0.1f64..20.0, a in 0.0f64..3.0) {
            let f = StepFunction::new(0.2, vec![(0.3, 1.0), (1.1, -0.5), (4.0, 2.0), (9.0, 0.7)]).unwrap();
            let g = f.scaled(scale).unwrap();
            let u = riesz_mean_step(&f, c(a), t).unwrap();
            let v = riesz_mean_step(&g, c(a), t * scale).unwrap();
            prop_assert!((u - v).norm() <= 1e-12 * (1.0 + u.norm()));
        }

        #[test]
        fn continuity_in_order(a in 0.05f64..3.0, im in -2.0f64..2.0, t in 0.5f64..20.0) {
            let f = StepFunction::new(0.2, vec![(0.3, 1.0), (1.1, -0.5), (4.0, 2.0), (9.0, 0.7)]).unwrap();
            let d = 1e-6;
            let alpha = Complex64::new(a, im);
            let u = riesz_mean_step(&f, alpha, t).unwrap();
            let v = riesz_mean_step(&f, alpha + d, t).unwrap();
            // |d/dα (1−s/t)^α| = |ln(1−s/t)| |(1−s/t)^α| ≤ |ln(1−s/t)|
            let bound: f64 = f.jumps().iter().filter(|j| j.0 < t)
                .map(|&(s, c)| c.abs() * ((t - s) / t).ln().abs()).sum();
            prop_assert!((u - v).norm() <= d * bound * 1.01 + 1e-14);
        }
    }
}
