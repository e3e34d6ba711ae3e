//! Riesz and Cesàro summation kernels of the Fourier–Laplace series, their
//! growth majorants and the regime classification of the geodesic distance.
//!
//! Both kernels are weighted sums of zonal harmonics,
//! `K(γ, n) = Σ_{k=0}^{n} w_k Z_k(γ)`, with
//!
//! * Riesz: `w_k = (1 − λ_k/λ_n)^α`,
//! * Cesàro: `w_k = A_{n−k}^α / A_n^α`.

use std::f64::consts::PI;

use crate::error::{out_of_range, Error, Result};
use crate::special::NeumaierSum;
use crate::spectral::{CesaroWeights, SpectralTable};

/// Identifies one summation kernel on `S^N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub dim: usize,
    pub alpha: f64,
    pub n: usize,
    /// At `α = 0` the top Riesz weight is `0⁰`. With `inclusive_top` it is 1
    /// (the classical partial sum through degree `n`); otherwise 0, matching
    /// the strict inequality `λ_k < λ_n`. Irrelevant for `α > 0`.
    pub inclusive_top: bool,
}

impl KernelSpec {
    pub fn new(dim: usize, alpha: f64, n: usize) -> Result<Self> {
        if dim < crate::geometry::MIN_DIM {
            return Err(Error::Dimension(dim, crate::geometry::MIN_DIM));
        }
        if n < 1 {
            return out_of_range("n", 0.0, ">= 1");
        }
        if !(alpha > -1.0) || !alpha.is_finite() {
            return out_of_range("alpha", alpha, "> -1");
        }
        Ok(Self {
            dim,
            alpha,
            n,
            inclusive_top: true,
        })
    }

    pub fn with_inclusive_top(mut self, inclusive: bool) -> Self {
        self.inclusive_top = inclusive;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n.max(1);
        self
    }

    /// `1 − λ_k/λ_n`, formed as a product of factors to avoid cancellation.
    pub fn riesz_base(&self, k: usize) -> f64 {
        riesz_base(self.dim, self.n, k)
    }

    /// Riesz weights `w_0..=w_n`.
    pub fn riesz_weights(&self) -> Result<Vec<f64>> {
        if self.alpha < 0.0 {
            return out_of_range("alpha", self.alpha, ">= 0 for Riesz kernels");
        }
        Ok((0..=self.n)
            .map(|k| riesz_weight(self.dim, self.alpha, self.n, k, self.inclusive_top))
            .collect())
    }

    fn check(&self, table: &SpectralTable) -> Result<()> {
        if table.dim() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, table.dim()));
        }
        table.check_degree(self.n)
    }
}

pub(crate) fn riesz_base(dim: usize, n: usize, k: usize) -> f64 {
    let (n, k, d) = (n as f64, k as f64, dim as f64 - 1.0);
    (n - k) * (n + k + d) / (n * (n + d))
}

pub(crate) fn riesz_weight(dim: usize, alpha: f64, n: usize, k: usize, inclusive_top: bool) -> f64 {
    if k < n {
        if alpha == 0.0 {
            1.0
        } else {
            riesz_base(dim, n, k).powf(alpha)
        }
    } else if k == n && alpha == 0.0 && inclusive_top {
        1.0
    } else {
        0.0
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0..=PI).contains(&gamma) {
        return out_of_range("gamma", gamma, "[0, pi]");
    }
    Ok(())
}

/// Zonal harmonics `Z_0(γ), …, Z_{n_max}(γ)` at one fixed distance, so that
/// kernels for many `(α, n)` can be formed in `O(n)` each.
#[derive(Debug, Clone)]
pub struct ZonalSeries {
    dim: usize,
    gamma: f64,
    values: Vec<f64>,
}

impl ZonalSeries {
    pub fn new(table: &SpectralTable, gamma: f64, n_max: usize) -> Result<Self> {
        check_gamma(gamma)?;
        let mut values = Vec::new();
        table.zonal_values_into(n_max, gamma, &mut values)?;
        Ok(Self {
            dim: table.dim(),
            gamma,
            values,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if n > self.n_max() {
            return Err(Error::DegreeOutOfTable {
                k: n,
                k_max: self.n_max(),
            });
        }
        Ok(())
    }

    /// `Θ^α(γ, n)`.
    pub fn riesz(&self, alpha: f64, n: usize, inclusive_top: bool) -> Result<f64> {
        self.check_n(n)?;
        if n == 0 {
            return out_of_range("n", 0.0, ">= 1");
        }
        if !(alpha >= 0.0) {
            return out_of_range("alpha", alpha, ">= 0 for Riesz kernels");
        }
        let mut acc = NeumaierSum::default();
        for (k, z) in self.values[..=n].iter().enumerate() {
            acc.add(riesz_weight(self.dim, alpha, n, k, inclusive_top) * z);
        }
        Ok(acc.value())
    }

    /// `Ξ^α(γ, n)`.
    pub fn cesaro(&self, alpha: f64, n: usize) -> Result<f64> {
        self.check_n(n)?;
        let w = CesaroWeights::new(alpha, n)?;
        Ok(self.weighted(w.weights()))
    }

    /// `Σ_k w_k Z_k(γ)` for an arbitrary weight vector.
    pub fn weighted(&self, weights: &[f64]) -> f64 {
        weights
            .iter()
            .zip(&self.values)
            .map(|(w, z)| w * z)
            .collect::<NeumaierSum>()
            .value()
    }
}

/// Riesz kernel `Θ^α(γ, n) = Σ_{k≤n} (1 − λ_k/λ_n)^α Z_k(γ)`.
pub fn riesz_kernel(spec: &KernelSpec, table: &SpectralTable, gamma: f64) -> Result<f64> {
    spec.check(table)?;
    ZonalSeries::new(table, gamma, spec.n)?.riesz(spec.alpha, spec.n, spec.inclusive_top)
}

/// Cesàro kernel `Ξ^α(γ, n) = Σ_{k≤n} (A_{n−k}^α / A_n^α) Z_k(γ)`.
pub fn cesaro_kernel(spec: &KernelSpec, table: &SpectralTable, gamma: f64) -> Result<f64> {
    spec.check(table)?;
    ZonalSeries::new(table, gamma, spec.n)?.cesaro(spec.alpha, spec.n)
}

/// Which summation method a kernel sequence uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Riesz,
    Cesaro,
}

/// `(n, K(γ, n))` for each `n` in `ns`.
pub fn kernel_sequence(
    table: &SpectralTable,
    family: Family,
    alpha: f64,
    gamma: f64,
    ns: &[usize],
) -> Result<Vec<(f64, f64)>> {
    let n_max = ns.iter().copied().max().unwrap_or(1);
    let series = ZonalSeries::new(table, gamma, n_max)?;
    ns.iter()
        .map(|&n| {
            let v = match family {
                Family::Riesz => series.riesz(alpha, n, true)?,
                Family::Cesaro => series.cesaro(alpha, n)?,
            };
            Ok((n as f64, v))
        })
        .collect()
}

// s^{(N−1)/2−α}/((sin γ)^{(N−1)/2}(sin γ/2)^{1+α})
//   + s^{(N−3)/2−α}/((sin γ)^{(N+1)/2}(sin γ/2)^{1+α})
//   + s^{−1}/(sin γ/2)^{1+N}
fn three_parts(dim: usize, alpha: f64, s: f64, gamma: f64) -> [f64; 3] {
    let nf = dim as f64;
    let (sg, sh) = (gamma.sin(), (gamma / 2.0).sin());
    let half = sh.powf(1.0 + alpha);
    [
        s.powf((nf - 1.0) / 2.0 - alpha) / (sg.powf((nf - 1.0) / 2.0) * half),
        s.powf((nf - 3.0) / 2.0 - alpha) / (sg.powf((nf + 1.0) / 2.0) * half),
        1.0 / (s * sh.powf(1.0 + nf)),
    ]
}

fn three_term(dim: usize, alpha: f64, s: f64, gamma: f64) -> f64 {
    three_parts(dim, alpha, s, gamma).iter().sum()
}

/// The three terms of [`interior_bound`] separately, for `γ ∈ (0, π)`.
pub fn interior_bound_parts(dim: usize, alpha: f64, n: usize, gamma: f64) -> Result<[f64; 3]> {
    if !(gamma > 0.0 && gamma < PI) {
        return out_of_range("gamma", gamma, "(0, pi)");
    }
    Ok(three_parts(dim, alpha, n as f64, gamma))
}

/// Lower edge `π/(2(n+1))` of the interior regime; the upper edge is its mirror.
pub fn interior_margin(n: usize) -> f64 {
    PI / (2.0 * (n as f64 + 1.0))
}

pub fn is_interior(n: usize, gamma: f64) -> bool {
    let m = interior_margin(n);
    gamma > m && gamma < PI - m
}

/// Interior-regime envelope of `Θ^α(γ, n)` without its `O(1)` constant.
pub fn interior_bound(dim: usize, alpha: f64, n: usize, gamma: f64) -> Result<f64> {
    if !is_interior(n, gamma) {
        return out_of_range("gamma", gamma, "inside (pi/(2(n+1)), pi - pi/(2(n+1)))");
    }
    Ok(three_term(dim, alpha, n as f64, gamma))
}

/// Global bound `n^N`, valid for every `γ`.
pub fn global_bound(dim: usize, n: usize) -> f64 {
    (n as f64).powi(dim as i32)
}

/// Bound `n^{N−α}` for `γ ≥ γ₀ > 0`.
pub fn separated_bound(dim: usize, alpha: f64, n: usize) -> f64 {
    (n as f64).powf(dim as f64 - alpha)
}

/// Cesàro bound `n^{N−1−α}` for `γ ≥ γ₀ > 0`.
pub fn cesaro_separated_bound(dim: usize, alpha: f64, n: usize) -> f64 {
    (n as f64).powf(dim as f64 - 1.0 - alpha)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorantParams {
    pub dim: usize,
    pub alpha: f64,
    pub gamma: f64,
    pub t: f64,
}

/// `M_α(t) = t^α · [interior envelope evaluated at scale t]`.
pub fn majorant_m(p: &MajorantParams) -> Result<f64> {
    if !(p.gamma > 0.0 && p.gamma < PI) {
        return out_of_range("gamma", p.gamma, "(0, pi)");
    }
    if !(p.t > 0.0) {
        return out_of_range("t", p.t, "> 0");
    }
    Ok(p.t.powf(p.alpha) * three_term(p.dim, p.alpha, p.t, p.gamma))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    Interior,
    Separated(f64),
    Global,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::Interior => "interior",
            Regime::Separated(_) => "separated",
            Regime::Global => "global",
        }
    }
}

/// Regimes whose bounds apply at `(n, γ)`. The global bound always applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regimes {
    pub interior: bool,
    pub separated: Option<f64>,
}

impl Regimes {
    pub fn contains(&self, r: Regime) -> bool {
        match r {
            Regime::Interior => self.interior,
            Regime::Separated(g0) => self.separated == Some(g0),
            Regime::Global => true,
        }
    }

    /// Sharpest applicable regime: interior, then separated, then global.
    pub fn primary(&self) -> Regime {
        if self.interior {
            Regime::Interior
        } else if let Some(g0) = self.separated {
            Regime::Separated(g0)
        } else {
            Regime::Global
        }
    }
}

pub fn classify_regime(n: usize, gamma: f64, gamma0: Option<f64>) -> Regimes {
    Regimes {
        interior: is_interior(n, gamma),
        separated: gamma0.filter(|&g0| g0 > 0.0 && gamma >= g0),
    }
}
