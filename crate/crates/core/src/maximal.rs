//! Hardy–Littlewood maximal function of zonal data at the pole and antipode,
//! the maximal Riesz operator `E_*^α f = sup_n |E_n^α f|`, and the bound
//! terms `U_n`, `V_n` used to control it.
//!
//! Every supremum here is a maximum over a finite grid, hence a lower bound
//! of the true supremum.

use std::f64::consts::PI;

use crate::error::{out_of_range, Error, Result};
use crate::geometry::{area_unchecked, ZonalQuadrature};
use crate::kernels::KernelSpec;
use crate::special::NeumaierSum;
use crate::spectral::SpectralTable;
use crate::zonal::{
    apply_riesz_mean_coeffs, project_all, CoefficientVector, EvalPoint, ZonalFunction,
};

/// Nodes per panel for the radial integrals in this module.
pub const RADIAL_NODES: usize = 64;

/// Relative change on grid doubling below which a grid maximum is accepted.
pub const REFINE_TOL: f64 = 1e-4;

/// `ω_{N−1} ∫_a^b h(γ) sin^{N−1}γ dγ`, split at the given edges.
fn radial_integral<F: Fn(f64) -> f64>(
    dim: usize,
    a: f64,
    b: f64,
    edges: &[f64],
    h: F,
) -> Result<f64> {
    if !(a < b) {
        return Ok(0.0);
    }
    let mut e = vec![a];
    e.extend(edges.iter().copied().filter(|&x| x > a && x < b));
    e.push(b);
    e.sort_by(f64::total_cmp);
    e.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
    let q = ZonalQuadrature::on_panels(dim, &e, RADIAL_NODES)?;
    q.integrate_zonal(h)
}

/// Edges `a, 2a, 4a, …` up to `b`, grading panels toward a power-type
/// singularity at the origin.
fn graded_edges(a: f64, b: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut x = a;
    while x < b {
        out.push(x);
        x *= 2.0;
    }
    out
}

/// Panel edges for integrands built from `|g|`: the profile's jumps plus its
/// sign changes (kinks of `|g|`), located by a scan and bisection, together
/// with their mirrors so the same edges serve both evaluation points.
pub fn abs_breakpoints(f: &ZonalFunction) -> Vec<f64> {
    const SCAN: usize = 4096;
    let mut out = f.symmetric_breakpoints();
    let jumps = out.clone();
    let near_jump = |x: f64| jumps.iter().any(|&b| (x - b).abs() < 1e-12);
    let mut prev = (0.0, f.value(0.0));
    for i in 1..=SCAN {
        let x = PI * i as f64 / SCAN as f64;
        let v = f.value(x);
        if prev.1 * v < 0.0 {
            let (mut lo, mut hi) = (prev.0, x);
            let lo_sign = prev.1.signum();
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if f.value(mid).signum() == lo_sign {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let root = 0.5 * (lo + hi);
            // a sign flip across a jump is already an edge
            if !near_jump(root) && !jumps.iter().any(|&b| b > prev.0 && b <= x) {
                out.push(root);
                out.push(PI - root);
            }
        }
        prev = (x, v);
    }
    out.retain(|&b| b > 0.0 && b < PI);
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    out
}

/// `|B(x, r)| = ω_{N−1} ∫_0^r sin^{N−1}γ dγ`.
pub fn ball_volume(dim: usize, r: f64) -> Result<f64> {
    if !(r > 0.0 && r <= PI) {
        return out_of_range("r", r, "(0, pi]");
    }
    radial_integral(dim, 0.0, r, &[], |_| 1.0)
}

/// `(1/|B(x,r)|) ∫_{γ(x,y)<r} |f(y)| dσ(y)` for `x` the pole or antipode.
pub fn ball_average(f: &ZonalFunction, at: EvalPoint, r: f64) -> Result<f64> {
    if !(r > 0.0 && r <= PI) {
        return out_of_range("r", r, "(0, pi]");
    }
    ball_average_with(f, at, r, &abs_breakpoints(f))
}

fn ball_average_with(f: &ZonalFunction, at: EvalPoint, r: f64, edges: &[f64]) -> Result<f64> {
    let mass = radial_integral(f.dim(), 0.0, r, edges, |g| f.value_from(at, g).abs())?;
    let vol = radial_integral(f.dim(), 0.0, r, edges, |_| 1.0)?;
    Ok(mass / vol)
}

/// Grid maximum of a nonnegative quantity together with where it was attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMax {
    pub value: f64,
    pub argmax: f64,
    pub grid_len: usize,
    /// Whether the last refinement changed the value by less than [`REFINE_TOL`].
    pub converged: bool,
}

fn check_grid(name: &'static str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, got: 0 });
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return out_of_range(name, grid[0], "strictly increasing");
    }
    Ok(())
}

/// `max_{r ∈ r_grid}` of the ball average of `|f|` around `at`.
pub fn maximal_function(f: &ZonalFunction, at: EvalPoint, r_grid: &[f64]) -> Result<GridMax> {
    check_grid("r_grid", r_grid)?;
    if !(r_grid[0] > 0.0 && r_grid[r_grid.len() - 1] <= PI) {
        return out_of_range("r_grid", r_grid[0], "inside (0, pi]");
    }
    let edges = abs_breakpoints(f);
    let mut best = GridMax {
        value: f64::NEG_INFINITY,
        argmax: r_grid[0],
        grid_len: r_grid.len(),
        converged: false,
    };
    for &r in r_grid {
        let v = ball_average_with(f, at, r, &edges)?;
        if v > best.value {
            best.value = v;
            best.argmax = r;
        }
    }
    Ok(best)
}

/// Geometric radius grid `π·2^{−j/steps}`, `j = 0..=octaves·steps`, ascending.
pub fn radius_grid(octaves: usize, steps_per_octave: usize) -> Vec<f64> {
    let m = octaves * steps_per_octave;
    (0..=m)
        .rev()
        .map(|j| PI * 2f64.powf(-(j as f64) / steps_per_octave as f64))
        .collect()
}

/// [`radius_grid`] merged with `8·steps_per_octave` uniform steps on
/// `(0, π]`, resolving both small radii and radii near `π`.
pub fn mixed_grid(octaves: usize, steps_per_octave: usize) -> Vec<f64> {
    let m = 8 * steps_per_octave;
    let mut g = radius_grid(octaves, steps_per_octave);
    g.extend((1..=m).map(|i| PI * i as f64 / m as f64));
    g.sort_by(f64::total_cmp);
    g.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    g
}

/// `f^*(x)` on [`mixed_grid`]s, doubling the density and extending one octave
/// toward zero until the maximum moves by less than [`REFINE_TOL`] (relative),
/// or the density reaches 256 steps per octave.
pub fn maximal_function_refined(f: &ZonalFunction, at: EvalPoint) -> Result<GridMax> {
    let (mut octaves, mut steps) = (12, 4);
    let mut prev = maximal_function(f, at, &mixed_grid(octaves, steps))?;
    while steps < 256 {
        octaves += 1;
        steps *= 2;
        let mut next = maximal_function(f, at, &mixed_grid(octaves, steps))?;
        let change = (next.value - prev.value).abs();
        if change <= REFINE_TOL * next.value.abs().max(f64::MIN_POSITIVE) {
            next.converged = true;
            return Ok(next);
        }
        prev = next;
    }
    Ok(prev)
}

/// Degrees `2..=64` plus dyadic degrees up to 512.
pub fn default_n_grid() -> Vec<usize> {
    n_grid(64, 512)
}

/// Degrees `2..=dense` plus dyadic degrees above it up to `top`.
pub fn n_grid(dense: usize, top: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (2..=dense).collect();
    let mut n = dense.next_power_of_two();
    while n <= top {
        if n > dense {
            out.push(n);
        }
        n *= 2;
    }
    out
}

/// `max_{n ∈ n_grid} |E_n^α f(x)|` on the coefficient path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximalRiesz {
    pub value: f64,
    pub argmax_n: usize,
}

/// `E_*^α f` at the pole or antipode from precomputed pole amplitudes.
pub fn maximal_riesz_coeffs(
    coeffs: &CoefficientVector,
    dim: usize,
    alpha: f64,
    n_grid: &[usize],
    at: EvalPoint,
) -> Result<MaximalRiesz> {
    if !(alpha >= 0.0) {
        return out_of_range("alpha", alpha, ">= 0");
    }
    if n_grid.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, got: 0 });
    }
    let reflected;
    let c = match at {
        EvalPoint::Pole => coeffs,
        EvalPoint::Antipode => {
            reflected = coeffs.reflected();
            &reflected
        }
    };
    let mut best = MaximalRiesz {
        value: f64::NEG_INFINITY,
        argmax_n: n_grid[0],
    };
    for &n in n_grid {
        let spec = KernelSpec::new(dim, alpha, n)?;
        let v = apply_riesz_mean_coeffs(c, &spec)?.abs();
        if v > best.value {
            best = MaximalRiesz {
                value: v,
                argmax_n: n,
            };
        }
    }
    Ok(best)
}

/// `E_*^α f(x) ≈ max_{n ∈ n_grid} |E_n^α f(x)|`.
pub fn maximal_riesz(
    f: &ZonalFunction,
    alpha: f64,
    n_grid: &[usize],
    table: &SpectralTable,
    q: &ZonalQuadrature,
    at: EvalPoint,
) -> Result<MaximalRiesz> {
    let n_max = n_grid
        .iter()
        .copied()
        .max()
        .ok_or(Error::TooFewPoints { needed: 1, got: 0 })?;
    let coeffs = project_all(f, table, n_max, q)?;
    maximal_riesz_coeffs(&coeffs, f.dim(), alpha, n_grid, at)
}

/// Radii, degrees and order of one maximal-operator experiment.
#[derive(Debug, Clone)]
pub struct MaximalProfile {
    pub f: ZonalFunction,
    pub r_grid: Vec<f64>,
    pub n_grid: Vec<usize>,
    pub alpha: f64,
}

impl MaximalProfile {
    pub fn new(f: ZonalFunction, r_grid: Vec<f64>, n_grid: Vec<usize>, alpha: f64) -> Result<Self> {
        check_grid("r_grid", &r_grid)?;
        if !(r_grid[0] > 0.0 && r_grid[r_grid.len() - 1] <= PI) {
            return out_of_range("r_grid", r_grid[0], "inside (0, pi]");
        }
        if n_grid.is_empty() {
            return Err(Error::TooFewPoints { needed: 1, got: 0 });
        }
        if n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return out_of_range("n_grid", n_grid[0] as f64, "strictly increasing");
        }
        if !(alpha >= 0.0) {
            return out_of_range("alpha", alpha, ">= 0");
        }
        Ok(Self {
            f,
            r_grid,
            n_grid,
            alpha,
        })
    }

    pub fn f_star(&self, at: EvalPoint) -> Result<GridMax> {
        maximal_function(&self.f, at, &self.r_grid)
    }

    pub fn e_star(
        &self,
        table: &SpectralTable,
        q: &ZonalQuadrature,
        at: EvalPoint,
    ) -> Result<MaximalRiesz> {
        maximal_riesz(&self.f, self.alpha, &self.n_grid, table, q, at)
    }
}

/// One row of the maximal-inequality experiment at order `α = (N−1)/2 + δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityRow {
    pub delta: f64,
    pub alpha: f64,
    pub e_star: f64,
    pub f_star_pole: f64,
    pub f_star_antipode: f64,
    /// `E_*^α f(pole) / (f^*(pole) + f^*(antipode))`.
    pub c_measured: f64,
}

/// Critical order `(N−1)/2` of the maximal inequality.
pub fn critical_order(dim: usize) -> f64 {
    (dim as f64 - 1.0) / 2.0
}

/// Measured constant of `E_*^α f(pole) ≤ C (f^*(pole) + f^*(antipode))` for
/// each `δ`, with `f^*` refined to [`REFINE_TOL`].
pub fn inequality_constants(
    f: &ZonalFunction,
    deltas: &[f64],
    n_grid: &[usize],
    table: &SpectralTable,
    q: &ZonalQuadrature,
) -> Result<Vec<InequalityRow>> {
    if let Some(&d) = deltas.iter().find(|&&d| !(d > 0.0)) {
        return out_of_range("delta", d, "> 0");
    }
    let n_max = n_grid
        .iter()
        .copied()
        .max()
        .ok_or(Error::TooFewPoints { needed: 1, got: 0 })?;
    let f_pole = maximal_function_refined(f, EvalPoint::Pole)?.value;
    let f_anti = maximal_function_refined(f, EvalPoint::Antipode)?.value;
    let denom = f_pole + f_anti;
    if !(denom > 0.0) {
        return Err(Error::ZeroDenominator("f*(pole) + f*(antipode)"));
    }
    let coeffs = project_all(f, table, n_max, q)?;
    deltas
        .iter()
        .map(|&delta| {
            let alpha = critical_order(f.dim()) + delta;
            let e = maximal_riesz_coeffs(&coeffs, f.dim(), alpha, n_grid, EvalPoint::Pole)?;
            Ok(InequalityRow {
                delta,
                alpha,
                e_star: e.value,
                f_star_pole: f_pole,
                f_star_antipode: f_anti,
                c_measured: e.value / denom,
            })
        })
        .collect()
}

/// `F(t) = ∫_{γ(x,y)<t} |f(y)| dσ(y)` sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    points: Vec<(f64, f64)>,
}

impl MassFunction {
    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// `sup_t F(t) / (t^N · f_star)` over the grid.
    pub fn ratio_sup(&self, dim: usize, f_star: f64) -> Result<f64> {
        if !(f_star > 0.0) {
            return Err(Error::ZeroDenominator("f*"));
        }
        Ok(self
            .points
            .iter()
            .map(|&(t, m)| m / (t.powi(dim as i32) * f_star))
            .fold(0.0, f64::max))
    }
}

/// Cumulative mass `F` on `t_grid ⊂ (0, π]` around `at`.
pub fn mass_function(f: &ZonalFunction, at: EvalPoint, t_grid: &[f64]) -> Result<MassFunction> {
    check_grid("t_grid", t_grid)?;
    if !(t_grid[0] > 0.0 && t_grid[t_grid.len() - 1] <= PI) {
        return out_of_range("t_grid", t_grid[0], "inside (0, pi]");
    }
    let edges = abs_breakpoints(f);
    let mut acc = NeumaierSum::default();
    let mut lo = 0.0;
    let mut points = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        acc.add(radial_integral(f.dim(), lo, t, &edges, |g| {
            f.value_from(at, g).abs()
        })?);
        points.push((t, acc.value()));
        lo = t;
    }
    Ok(MassFunction { points })
}

/// `sup_t |B(x,t)| / t^N = ω_{N−1}/N`, attained as `t → 0`.
pub fn ball_constant(dim: usize) -> f64 {
    area_unchecked(dim - 1) / dim as f64
}

/// The four bound terms on one side of the sphere: the `n^N` near-cap term
/// and the three interior terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionTerms {
    pub cap: f64,
    pub first: f64,
    pub second: f64,
    pub third: f64,
}

impl RegionTerms {
    pub fn total(&self) -> f64 {
        self.cap + self.first + self.second + self.third
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.cap, self.first, self.second, self.third]
    }
}

/// `U_n` (terms near `x`) and `V_n` (terms near `x̄`) of the bound on
/// `|E_n^α f(x)|`, without the common constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionDecomposition {
    pub n: usize,
    pub alpha: f64,
    pub u: RegionTerms,
    pub v: RegionTerms,
    /// `|U_n(x̄) − V_n(x)| / V_n(x)`; vanishes up to quadrature error.
    pub mirror_gap: f64,
}

impl RegionDecomposition {
    pub fn total(&self) -> f64 {
        self.u.total() + self.v.total()
    }
}

fn exponents(dim: usize, alpha: f64) -> [(f64, f64); 3] {
    let nf = dim as f64;
    // (power of n, power of sin γ) for the three interior terms
    [
        ((nf - 1.0) / 2.0 - alpha, -(nf + 1.0) / 2.0 - alpha),
        ((nf - 3.0) / 2.0 - alpha, -(nf + 3.0) / 2.0 - alpha),
        (-1.0, -1.0 - nf),
    ]
}

fn u_terms(f: &ZonalFunction, at: EvalPoint, n: usize, alpha: f64) -> Result<RegionTerms> {
    let dim = f.dim();
    let nf = n as f64;
    let a = 1.0 / nf;
    let mut edges = abs_breakpoints(f);
    edges.extend(graded_edges(a, PI / 2.0));
    let g = |x: f64| f.value_from(at, x).abs();
    let cap = nf.powi(dim as i32) * radial_integral(dim, 0.0, a, &edges, g)?;
    let mut t = [0.0; 3];
    for (slot, (pn, ps)) in t.iter_mut().zip(exponents(dim, alpha)) {
        *slot =
            nf.powf(pn) * radial_integral(dim, a, PI / 2.0, &edges, |x| x.sin().powf(ps) * g(x))?;
    }
    Ok(RegionTerms {
        cap,
        first: t[0],
        second: t[1],
        third: t[2],
    })
}

fn v_terms(f: &ZonalFunction, at: EvalPoint, n: usize, alpha: f64) -> Result<RegionTerms> {
    let dim = f.dim();
    let nf = n as f64;
    let b = PI - 1.0 / nf;
    let mut edges = abs_breakpoints(f);
    edges.extend(graded_edges(1.0 / nf, PI / 2.0).into_iter().map(|e| PI - e));
    let g = |x: f64| f.value_from(at, x).abs();
    let cap = nf.powi(dim as i32) * radial_integral(dim, b, PI, &edges, g)?;
    let mut t = [0.0; 3];
    for (slot, (pn, ps)) in t.iter_mut().zip(exponents(dim, alpha)) {
        *slot =
            nf.powf(pn) * radial_integral(dim, PI / 2.0, b, &edges, |x| x.sin().powf(ps) * g(x))?;
    }
    Ok(RegionTerms {
        cap,
        first: t[0],
        second: t[1],
        third: t[2],
    })
}

fn other(at: EvalPoint) -> EvalPoint {
    match at {
        EvalPoint::Pole => EvalPoint::Antipode,
        EvalPoint::Antipode => EvalPoint::Pole,
    }
}

/// The eight bound terms of `|E_n^α f(x)|` over the four regions
/// `γ < 1/n`, `(1/n, π/2]`, `(π/2, π−1/n]`, `(π−1/n, π]`.
pub fn region_decomposition(
    f: &ZonalFunction,
    at: EvalPoint,
    n: usize,
    alpha: f64,
) -> Result<RegionDecomposition> {
    if n < 2 {
        return out_of_range("n", n as f64, ">= 2");
    }
    if !(alpha >= 0.0) {
        return out_of_range("alpha", alpha, ">= 0");
    }
    let u = u_terms(f, at, n, alpha)?;
    let v = v_terms(f, at, n, alpha)?;
    let u_mirror = u_terms(f, other(at), n, alpha)?.total();
    let scale = v.total().abs().max(f64::MIN_POSITIVE);
    Ok(RegionDecomposition {
        n,
        alpha,
        u,
        v,
        mirror_gap: if v.total() == 0.0 && u_mirror == 0.0 {
            0.0
        } else {
            (u_mirror - v.total()).abs() / scale
        },
    })
}

/// `U_n(x)` computed three ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ByPartsCheck {
    /// Sum of the four terms by direct quadrature.
    pub direct: f64,
    /// The same sum rewritten through `F(t)` and integrated by parts.
    pub by_parts: f64,
    /// `by_parts` with `F(t)` replaced by its majorant `C t^N f^*(x)` and the
    /// negative boundary terms dropped.
    pub majorized: f64,
    pub f_star: f64,
}

impl ByPartsCheck {
    pub fn relative_gap(&self) -> f64 {
        (self.by_parts - self.direct).abs() / self.direct.abs().max(f64::MIN_POSITIVE)
    }
}

/// Integration-by-parts form of `U_n(x)`: for each interior term
/// `c ∫_a^b sin^{−p}t F'(t) dt = c[sin^{−p}b F(b) − sin^{−p}a F(a)
/// + p ∫_a^b sin^{−p−1}t cos t F(t) dt]`.
pub fn by_parts_check(
    f: &ZonalFunction,
    at: EvalPoint,
    n: usize,
    alpha: f64,
    f_star: f64,
) -> Result<ByPartsCheck> {
    if n < 2 {
        return out_of_range("n", n as f64, ">= 2");
    }
    let dim = f.dim();
    let nf = n as f64;
    let (a, b) = (1.0 / nf, PI / 2.0);
    let direct = u_terms(f, at, n, alpha)?.total();

    // nodes of the outer integral over [a, b], graded toward a
    let edges: Vec<f64> = {
        let mut e = graded_edges(a, b);
        e.extend(abs_breakpoints(f).into_iter().filter(|&x| x > a && x < b));
        e.push(b);
        e.sort_by(f64::total_cmp);
        e.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
        e
    };
    let outer = ZonalQuadrature::on_panels(dim, &edges, RADIAL_NODES)?;
    let sin_weight = area_unchecked(dim - 1);
    // undo the sin^{N−1} density folded into the zonal rule: plain dt weights
    let dt: Vec<f64> = outer
        .nodes()
        .iter()
        .zip(outer.weights())
        .map(|(&t, &w)| w / (sin_weight * t.sin().powi(dim as i32 - 1)))
        .collect();
    let mut grid = vec![a];
    grid.extend(outer.nodes().iter().copied());
    grid.push(b);
    let mass = mass_function(f, at, &grid)?;
    let fa = mass.points[0].1;
    let fb = mass.points[grid.len() - 1].1;
    let f_nodes = &mass.points[1..grid.len() - 1];

    let c = ball_constant(dim);
    let mut by_parts = nf.powi(dim as i32) * fa;
    let mut majorized = nf.powi(dim as i32) * c * a.powi(dim as i32) * f_star;
    for (pn, ps) in exponents(dim, alpha) {
        let p = -ps;
        let coef = nf.powf(pn);
        let mut inner = NeumaierSum::default();
        let mut inner_major = NeumaierSum::default();
        for (&(t, ft), &w) in f_nodes.iter().zip(&dt) {
            let k = p * t.sin().powf(-p - 1.0) * t.cos() * w;
            inner.add(k * ft);
            inner_major.add(k * c * t.powi(dim as i32) * f_star);
        }
        by_parts += coef * (b.sin().powf(-p) * fb - a.sin().powf(-p) * fa + inner.value());
        majorized +=
            coef * (b.sin().powf(-p) * c * b.powi(dim as i32) * f_star + inner_major.value());
    }
    Ok(ByPartsCheck {
        direct,
        by_parts,
        majorized,
        f_star,
    })
}
