//! Eigenstructure of the Laplace–Beltrami operator on `S^N`.
//!
//! Degree-`k` spherical harmonics form an eigenspace of dimension `a_k` with
//! eigenvalue `λ_k = k(k+N−1)`. Its reproducing kernel `Z_k(x, y)` depends on
//! `γ(x, y)` only and is obtained from the Gegenbauer polynomial `C_k^ν`,
//! `ν = (N−1)/2`, through the addition theorem.

use crate::error::{out_of_range, Error, Result};
use crate::geometry::{area_unchecked, MIN_DIM};
use crate::special::{binomial, gamma, ln_gamma_ratio};

/// Largest dimension accepted by [`SpectralTable::new`].
pub const MAX_TABLE_DIM: usize = 8;
/// Largest degree accepted by [`SpectralTable::new`].
pub const MAX_TABLE_DEGREE: usize = 4096;

/// Dimension `a_k` of the degree-`k` eigenspace on `S^N`.
///
/// `a_0 = 1` and, for `k ≥ 1`, `a_k = C(N+k, k) − C(N+k−2, k−2)` (the second
/// term vanishing for `k = 1`, so `a_1 = N + 1`).
pub fn multiplicity(dim: usize, k: usize) -> Result<u128> {
    if dim < MIN_DIM {
        return Err(Error::Dimension(dim, MIN_DIM));
    }
    let (n, k) = (dim as u64, k as u64);
    if k == 0 {
        return Ok(1);
    }
    let top = binomial(n + k, n).ok_or(Error::Overflow("multiplicity"))?;
    let lower = if k >= 2 {
        binomial(n + k - 2, n).ok_or(Error::Overflow("multiplicity"))?
    } else {
        0
    };
    Ok(top - lower)
}

/// `λ_k = k(k + N − 1)`.
pub fn eigenvalue(dim: usize, k: usize) -> f64 {
    let k = k as f64;
    k * (k + dim as f64 - 1.0)
}

/// `A_m^α = Γ(α+m+1) / (Γ(α+1) m!)`, for `α > −1`.
pub fn cesaro_binomial(alpha: f64, m: usize) -> Result<f64> {
    if !(alpha > -1.0) {
        return out_of_range("alpha", alpha, "> -1");
    }
    if alpha == 0.0 {
        return Ok(1.0);
    }
    Ok(ln_cesaro_unscaled(alpha, m).exp() / gamma(alpha + 1.0))
}

// ln(Γ(α+m+1) / Γ(m+1)); the Γ(α+1) factor cancels in every weight ratio.
fn ln_cesaro_unscaled(alpha: f64, m: usize) -> f64 {
    ln_gamma_ratio(m as f64 + 1.0, alpha)
}

/// Cesàro weights `A_{n−k}^α / A_n^α`, `k = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CesaroWeights {
    alpha: f64,
    n: usize,
    weights: Vec<f64>,
}

impl CesaroWeights {
    pub fn new(alpha: f64, n: usize) -> Result<Self> {
        if !(alpha > -1.0) {
            return out_of_range("alpha", alpha, "> -1");
        }
        let top = ln_cesaro_unscaled(alpha, n);
        let weights = (0..=n)
            .map(|k| {
                if alpha == 0.0 {
                    1.0
                } else {
                    (ln_cesaro_unscaled(alpha, n - k) - top).exp()
                }
            })
            .collect();
        Ok(Self { alpha, n, weights })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Gegenbauer polynomial `C_k^ν(t)` by the upward three-term recurrence.
pub fn gegenbauer(nu: f64, k: usize, t: f64) -> Result<f64> {
    if !(nu > 0.0) {
        return out_of_range("nu", nu, "> 0");
    }
    if !(-1.0..=1.0).contains(&t) {
        return out_of_range("t", t, "[-1, 1]");
    }
    let (mut c0, mut c1) = (1.0, 2.0 * nu * t);
    if k == 0 {
        return Ok(c0);
    }
    for j in 2..=k {
        let j = j as f64;
        let c2 = (2.0 * t * (j + nu - 1.0) * c1 - (j + 2.0 * nu - 2.0) * c0) / j;
        c0 = c1;
        c1 = c2;
    }
    Ok(c1)
}

/// Fills `out` with `C_j^ν(t) / C_j^ν(1)` for `j = 0..=k_max`.
///
/// Uses the recurrence for the normalized polynomials,
/// `R_j = (2t(j+ν−1) R_{j−1} − (j−1) R_{j−2}) / (j+2ν−1)`, which keeps every
/// value in `[−1, 1]` and cannot overflow.
pub fn normalized_gegenbauer_into(nu: f64, k_max: usize, t: f64, out: &mut Vec<f64>) {
    out.clear();
    out.reserve(k_max + 1);
    out.push(1.0);
    if k_max == 0 {
        return;
    }
    out.push(t);
    let (mut r0, mut r1) = (1.0, t);
    for j in 2..=k_max {
        let jf = j as f64;
        let r2 = (2.0 * t * (jf + nu - 1.0) * r1 - (jf - 1.0) * r0) / (jf + 2.0 * nu - 1.0);
        out.push(r2);
        r0 = r1;
        r1 = r2;
    }
}

/// Eigenvalues, multiplicities and derived constants of `S^N` up to `k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralTable {
    dim: usize,
    k_max: usize,
    eigenvalues: Vec<f64>,
    multiplicities: Vec<u128>,
    mult_f64: Vec<f64>,
    nu: f64,
    area: f64,
}

impl SpectralTable {
    pub fn new(dim: usize, k_max: usize) -> Result<Self> {
        if dim < MIN_DIM {
            return Err(Error::Dimension(dim, MIN_DIM));
        }
        if dim > MAX_TABLE_DIM || k_max > MAX_TABLE_DEGREE {
            return Err(Error::TableTooLarge {
                n: dim,
                k_max,
                max_n: MAX_TABLE_DIM,
                max_k: MAX_TABLE_DEGREE,
            });
        }
        let multiplicities = (0..=k_max)
            .map(|k| multiplicity(dim, k))
            .collect::<Result<Vec<_>>>()?;
        Self::from_multiplicities(dim, multiplicities)
    }

    /// Builds a table from externally supplied multiplicities (for example a
    /// stored table). Only structural checks are made here: `a_0 = 1` and every
    /// `a_k > 0`. Exact agreement with [`multiplicity`] is not enforced.
    pub fn from_multiplicities(dim: usize, multiplicities: Vec<u128>) -> Result<Self> {
        if dim < MIN_DIM {
            return Err(Error::Dimension(dim, MIN_DIM));
        }
        if multiplicities.is_empty() {
            return Err(Error::TooFewPoints { needed: 1, got: 0 });
        }
        if multiplicities[0] != 1 {
            return out_of_range("a_0", multiplicities[0] as f64, "== 1");
        }
        if let Some(&bad) = multiplicities.iter().find(|&&a| a == 0) {
            return out_of_range("a_k", bad as f64, "> 0");
        }
        let k_max = multiplicities.len() - 1;
        Ok(Self {
            dim,
            k_max,
            eigenvalues: (0..=k_max).map(|k| eigenvalue(dim, k)).collect(),
            mult_f64: multiplicities.iter().map(|&a| a as f64).collect(),
            multiplicities,
            nu: (dim as f64 - 1.0) / 2.0,
            area: area_unchecked(dim),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Gegenbauer parameter `ν = (N−1)/2`.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `ω_N`.
    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvalue(&self, k: usize) -> f64 {
        self.eigenvalues[k]
    }

    pub fn multiplicities(&self) -> &[u128] {
        &self.multiplicities
    }

    pub fn multiplicity(&self, k: usize) -> f64 {
        self.mult_f64[k]
    }

    pub fn check_degree(&self, k: usize) -> Result<()> {
        if k > self.k_max {
            return Err(Error::DegreeOutOfTable {
                k,
                k_max: self.k_max,
            });
        }
        Ok(())
    }

    /// `Z_k(0) = a_k / ω_N`.
    pub fn zonal_at_pole(&self, k: usize) -> f64 {
        self.mult_f64[k] / self.area
    }

    /// Fills `out` with `Z_0(γ), …, Z_n(γ)`.
    pub fn zonal_values_into(&self, n: usize, gamma: f64, out: &mut Vec<f64>) -> Result<()> {
        self.check_degree(n)?;
        normalized_gegenbauer_into(self.nu, n, gamma.cos(), out);
        for (k, z) in out.iter_mut().enumerate() {
            *z *= self.mult_f64[k] / self.area;
        }
        Ok(())
    }
}

/// `Z_k(γ) = (a_k / ω_N) · C_k^ν(cos γ) / C_k^ν(1)`.
pub fn zonal_kernel(table: &SpectralTable, k: usize, gamma: f64) -> Result<f64> {
    table.check_degree(k)?;
    if !(0.0..=std::f64::consts::PI).contains(&gamma) {
        return out_of_range("gamma", gamma, "[0, pi]");
    }
    let mut r = Vec::new();
    normalized_gegenbauer_into(table.nu, k, gamma.cos(), &mut r);
    Ok(table.zonal_at_pole(k) * r[k])
}
