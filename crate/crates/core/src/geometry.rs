//! Points on S^N, geodesic distance and one-dimensional quadrature for zonal
//! integrands.
//!
//! A zonal integrand depends on `y ∈ S^N` only through `γ = γ(x, y)`, so
//! `∫_{S^N} h(γ(x,y)) dσ(y) = ω_{N−1} ∫_0^π h(γ) sin^{N−1}γ dγ`. Every rule in
//! this module stores nodes `γ_i` and weights that already carry the factor
//! `ω_{N−1} sin^{N−1}γ_i`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{out_of_range, Error, Result};
use crate::special::NeumaierSum;

/// Smallest supported sphere dimension.
pub const MIN_DIM: usize = 2;

/// A unit vector in `R^{N+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    coords: Vec<f64>,
}

impl SpherePoint {
    /// Normalizes `coords` onto the sphere. Needs at least three coordinates.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < MIN_DIM + 1 {
            return Err(Error::Dimension(coords.len().saturating_sub(1), MIN_DIM));
        }
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::DegeneratePoint);
        }
        Ok(Self {
            coords: coords.into_iter().map(|c| c / norm).collect(),
        })
    }

    /// The `i`-th standard basis vector of `R^{dim+1}`.
    pub fn basis(dim: usize, i: usize) -> Result<Self> {
        if i > dim {
            return out_of_range("basis index", i as f64, "0..=N");
        }
        let mut coords = vec![0.0; dim + 1];
        coords[i] = 1.0;
        Self::new(coords)
    }

    /// The default pole `e₁` used by zonal functions.
    pub fn north(dim: usize) -> Result<Self> {
        Self::basis(dim, 0)
    }

    /// Point at geodesic distance `gamma` from `e₁` along the `e₂` meridian.
    pub fn at_angle(dim: usize, gamma: f64) -> Result<Self> {
        let mut coords = vec![0.0; dim + 1];
        coords[0] = gamma.cos();
        if dim >= 1 {
            coords[1] = gamma.sin();
        }
        Self::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn antipode(&self) -> SpherePoint {
        SpherePoint {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

/// `γ(x, y) = arccos⟨x, y⟩` with the inner product clamped to `[−1, 1]`.
pub fn geodesic_distance(x: &SpherePoint, y: &SpherePoint) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch(x.dim(), y.dim()));
    }
    let dot: f64 = x.coords.iter().zip(&y.coords).map(|(a, b)| a * b).sum();
    Ok(dot.clamp(-1.0, 1.0).acos())
}

pub fn antipode(x: &SpherePoint) -> SpherePoint {
    x.antipode()
}

/// Surface area `ω_N = 2π^{(N+1)/2} / Γ((N+1)/2)` of `S^N`.
///
/// Computed through `ω_N = 2π ω_{N−2} / (N−1)` from `ω_0 = 2`, `ω_1 = 2π`.
pub fn sphere_area(dim: usize) -> Result<f64> {
    if dim < 1 {
        return Err(Error::Dimension(dim, 1));
    }
    Ok(area_unchecked(dim))
}

pub(crate) fn area_unchecked(dim: usize) -> f64 {
    let (mut n, mut w) = if dim % 2 == 0 {
        (0, 2.0)
    } else {
        (1, 2.0 * PI)
    };
    while n < dim {
        n += 2;
        w *= 2.0 * PI / (n - 1) as f64;
    }
    w
}

/// Node count that over-resolves every kernel of degree up to `n_max`.
pub fn default_node_count(n_max: usize) -> usize {
    4 * (n_max + 16)
}

type Rule = Arc<(Vec<f64>, Vec<f64>)>;

/// Gauss–Legendre rule on `[−1, 1]` with ascending nodes. Rules are cached
/// per size since experiments rebuild the same sizes many times.
pub fn gauss_legendre(m: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&m) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(compute_gauss_legendre(m));
    cache.lock().unwrap().insert(m, Arc::clone(&rule));
    rule
}

// Returns (P_m(x), P_m'(x)).
fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn compute_gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1);
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        if m % 2 == 1 && i == m / 2 {
            x = 0.0;
        } else {
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(m, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1e-3) {
                    break;
                }
            }
        }
        let (_, dp) = legendre_with_derivative(m, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // roots come out in descending order
        nodes[m - 1 - i] = x;
        weights[m - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    (nodes, weights)
}

/// Quadrature in the geodesic variable for zonal integrands on `S^N`.
#[derive(Debug, Clone)]
pub struct ZonalQuadrature {
    dim: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    nodes_per_panel: usize,
}

/// Full-sphere zonal rule with `node_count` nodes.
///
/// Even `N`: Gauss–Legendre in `u = cos γ` with the polynomial density
/// `(1−u²)^{(N−2)/2}` folded into the weights. Odd `N`: Gauss–Chebyshev in `u`
/// with `(1−u²)^{(N−1)/2}` folded in. Either way `g(cos γ)` is integrated
/// exactly for polynomial `g` of degree up to roughly `2·node_count − N`.
pub fn build_zonal_quadrature(dim: usize, node_count: usize) -> Result<ZonalQuadrature> {
    if dim < MIN_DIM {
        return Err(Error::Dimension(dim, MIN_DIM));
    }
    if node_count < 8 {
        return out_of_range("node_count", node_count as f64, ">= 8");
    }
    let scale = area_unchecked(dim - 1);
    let (nodes, weights) = if dim % 2 == 0 {
        let rule = gauss_legendre(node_count);
        let power = ((dim - 2) / 2) as i32;
        // ascending γ means descending u
        rule.0
            .iter()
            .zip(&rule.1)
            .rev()
            .map(|(&u, &w)| {
                (
                    u.clamp(-1.0, 1.0).acos(),
                    w * scale * (1.0 - u * u).powi(power),
                )
            })
            .unzip()
    } else {
        let m = node_count as f64;
        (1..=node_count)
            .map(|i| {
                let g = (2 * i - 1) as f64 * PI / (2.0 * m);
                (g, PI / m * scale * g.sin().powi(dim as i32 - 1))
            })
            .unzip()
    };
    Ok(ZonalQuadrature {
        dim,
        nodes,
        weights,
        nodes_per_panel: node_count,
    })
}

impl ZonalQuadrature {
    /// Composite rule: Gauss–Legendre in `γ` on each panel `[edges[i], edges[i+1]]`.
    pub fn on_panels(dim: usize, edges: &[f64], nodes_per_panel: usize) -> Result<Self> {
        if dim < MIN_DIM {
            return Err(Error::Dimension(dim, MIN_DIM));
        }
        if nodes_per_panel < 8 {
            return out_of_range("nodes_per_panel", nodes_per_panel as f64, ">= 8");
        }
        if edges.len() < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                got: edges.len(),
            });
        }
        for w in edges.windows(2) {
            if !(w[0] < w[1]) {
                return out_of_range("panel edge", w[1], "strictly increasing");
            }
        }
        if edges[0] < 0.0 || edges[edges.len() - 1] > PI {
            return out_of_range("panel edge", edges[0], "inside [0, pi]");
        }
        let scale = area_unchecked(dim - 1);
        let rule = gauss_legendre(nodes_per_panel);
        let mut nodes = Vec::with_capacity(nodes_per_panel * (edges.len() - 1));
        let mut weights = Vec::with_capacity(nodes.capacity());
        for w in edges.windows(2) {
            let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            for (&x, &wx) in rule.0.iter().zip(&rule.1) {
                let g = mid + half * x;
                nodes.push(g);
                weights.push(half * wx * scale * g.sin().powi(dim as i32 - 1));
            }
        }
        Ok(Self {
            dim,
            nodes,
            weights,
            nodes_per_panel,
        })
    }

    /// Full-sphere rule split at `breakpoints` (jump locations of a piecewise
    /// smooth profile). Without interior breakpoints this is
    /// [`build_zonal_quadrature`].
    pub fn split(dim: usize, breakpoints: &[f64], nodes_per_panel: usize) -> Result<Self> {
        let mut inner: Vec<f64> = breakpoints
            .iter()
            .copied()
            .filter(|&b| b > 0.0 && b < PI)
            .collect();
        if inner.is_empty() {
            return build_zonal_quadrature(dim, nodes_per_panel);
        }
        inner.sort_by(f64::total_cmp);
        inner.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        let mut edges = Vec::with_capacity(inner.len() + 2);
        edges.push(0.0);
        edges.extend(inner);
        edges.push(PI);
        Self::on_panels(dim, &edges, nodes_per_panel)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes_per_panel(&self) -> usize {
        self.nodes_per_panel
    }

    pub fn total_mass(&self) -> f64 {
        self.weights
            .iter()
            .copied()
            .collect::<NeumaierSum>()
            .value()
    }

    /// Errors unless the rule has at least `2·degree` nodes per panel.
    pub fn ensure_resolves(&self, degree: usize) -> Result<()> {
        if self.nodes_per_panel < 2 * degree {
            return Err(Error::Unresolved {
                nodes: self.nodes_per_panel,
                degree,
            });
        }
        Ok(())
    }

    /// `Σ weights_i · g(γ_i)`.
    pub fn integrate_zonal<F: Fn(f64) -> f64>(&self, g: F) -> Result<f64> {
        let mut acc = NeumaierSum::default();
        for (&gamma, &w) in self.nodes.iter().zip(&self.weights) {
            let value = g(gamma);
            if !value.is_finite() {
                return Err(Error::NonFinite { gamma, value });
            }
            acc.add(w * value);
        }
        Ok(acc.value())
    }
}

/// Free-function form of [`ZonalQuadrature::integrate_zonal`].
pub fn integrate_zonal<F: Fn(f64) -> f64>(q: &ZonalQuadrature, g: F) -> Result<f64> {
    q.integrate_zonal(g)
}
