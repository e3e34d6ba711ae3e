//! Zonal test functions and the Riesz means `E_n^α f` evaluated at the pole
//! and its antipode.
//!
//! A zonal function is `f(y) = g(γ(pole, y))`. Its degree-`k` component is
//! `Y_k(f, x) = c_k Z_k(γ(pole, x)) / Z_k(0)` with `c_k = ∫ Z_k(γ) g(γ) dσ`,
//! so the means reduce to one-dimensional sums or integrals at the pole.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{
    default_node_count, geodesic_distance, SpherePoint, ZonalQuadrature, MIN_DIM,
};
use crate::kernels::KernelSpec;
use crate::special::NeumaierSum;
use crate::spectral::{normalized_gegenbauer_into, SpectralTable};

/// Where a zonal mean is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvalPoint {
    Pole,
    Antipode,
}

type ProfileFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Radial profile `g(γ)` on `[0, π]`.
#[derive(Clone)]
pub enum Profile {
    Constant(f64),
    /// `1[γ < r]`.
    Cap {
        radius: f64,
    },
    /// `exp(−γ²/2σ²)`.
    Bump {
        sigma: f64,
    },
    /// `exp(−(π−γ)²/2σ²)`.
    AntipodalBump {
        sigma: f64,
    },
    /// `Σ_k c_k Z_k(γ)/Z_k(0)`.
    BandLimited {
        coeffs: Vec<f64>,
    },
    /// `sign(π/2 − γ)`.
    Jump,
    /// `g(π − γ)`.
    Reflected(Box<Profile>),
    /// `Σ a_i g_i(γ)`.
    Combination(Vec<(f64, Profile)>),
    Custom {
        label: String,
        func: ProfileFn,
        breakpoints: Vec<f64>,
    },
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Profile({self})")
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Constant(c) if *c == 1.0 => write!(f, "constant"),
            Profile::Constant(c) => write!(f, "constant:{c}"),
            Profile::Cap { radius } => write!(f, "cap:{radius}"),
            Profile::Bump { sigma } => write!(f, "bump:{sigma}"),
            Profile::AntipodalBump { sigma } => write!(f, "antipodal-bump:{sigma}"),
            Profile::BandLimited { coeffs } => {
                let parts: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
                write!(f, "bandlimited:{}", parts.join(","))
            }
            Profile::Jump => write!(f, "jump"),
            Profile::Reflected(p) => write!(f, "reflected({p})"),
            Profile::Combination(terms) => {
                let parts: Vec<String> = terms.iter().map(|(a, p)| format!("{a}*{p}")).collect();
                write!(f, "{}", parts.join("+"))
            }
            Profile::Custom { label, .. } => write!(f, "{label}"),
        }
    }
}

/// Parses `pi`, `pi/k`, `a*pi/k` or a plain float.
pub fn parse_angle(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return Some(v);
    }
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim().parse::<f64>().ok()?),
        None => (s, 1.0),
    };
    let scale = match num {
        "pi" => 1.0,
        _ => num.strip_suffix("*pi")?.trim().parse::<f64>().ok()?,
    };
    Some(scale * PI / den)
}

impl FromStr for Profile {
    type Err = Error;

    /// `constant[:c]`, `cap:R`, `bump:S`, `antipodal-bump:S`,
    /// `bandlimited:c0,c1,...`, `jump`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let unknown = || Error::UnknownProfile(s.to_string());
        let positive = |a: Option<&str>| -> Result<f64> {
            let v = a.and_then(parse_angle).ok_or_else(unknown)?;
            if !(v > 0.0) || !v.is_finite() {
                return Err(unknown());
            }
            Ok(v)
        };
        match name {
            "constant" => match arg {
                None => Ok(Profile::Constant(1.0)),
                Some(a) => a.parse().map(Profile::Constant).map_err(|_| unknown()),
            },
            "cap" => {
                let radius = positive(arg)?;
                if radius > PI {
                    return Err(unknown());
                }
                Ok(Profile::Cap { radius })
            }
            "bump" => Ok(Profile::Bump {
                sigma: positive(arg)?,
            }),
            "antipodal-bump" => Ok(Profile::AntipodalBump {
                sigma: positive(arg)?,
            }),
            "bandlimited" => {
                let coeffs = arg
                    .ok_or_else(unknown)?
                    .split(',')
                    .map(|c| c.trim().parse::<f64>().map_err(|_| unknown()))
                    .collect::<Result<Vec<_>>>()?;
                if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(unknown());
                }
                Ok(Profile::BandLimited { coeffs })
            }
            "jump" if arg.is_none() => Ok(Profile::Jump),
            _ => Err(unknown()),
        }
    }
}

impl Profile {
    /// Single zonal harmonic of degree `k`, normalized to 1 at the pole.
    pub fn zonal_harmonic(k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        Profile::BandLimited { coeffs }
    }

    pub fn custom<F>(label: impl Into<String>, func: F, breakpoints: Vec<f64>) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Profile::Custom {
            label: label.into(),
            func: Arc::new(func),
            breakpoints,
        }
    }

    /// Value at distance `gamma`; `nu = (N−1)/2` is needed by band-limited profiles.
    pub fn eval(&self, nu: f64, gamma: f64) -> f64 {
        match self {
            Profile::Constant(c) => *c,
            Profile::Cap { radius } => {
                if gamma < *radius {
                    1.0
                } else {
                    0.0
                }
            }
            Profile::Bump { sigma } => (-gamma * gamma / (2.0 * sigma * sigma)).exp(),
            Profile::AntipodalBump { sigma } => {
                let d = PI - gamma;
                (-d * d / (2.0 * sigma * sigma)).exp()
            }
            Profile::BandLimited { coeffs } => {
                let mut r = Vec::with_capacity(coeffs.len());
                normalized_gegenbauer_into(nu, coeffs.len() - 1, gamma.cos(), &mut r);
                coeffs.iter().zip(&r).map(|(c, r)| c * r).sum()
            }
            Profile::Jump => {
                if gamma < PI / 2.0 {
                    1.0
                } else if gamma > PI / 2.0 {
                    -1.0
                } else {
                    0.0
                }
            }
            Profile::Reflected(p) => p.eval(nu, PI - gamma),
            Profile::Combination(terms) => terms.iter().map(|(a, p)| a * p.eval(nu, gamma)).sum(),
            Profile::Custom { func, .. } => func(gamma),
        }
    }

    /// Jump locations inside `(0, π)`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = match self {
            Profile::Cap { radius } if *radius < PI => vec![*radius],
            Profile::Jump => vec![PI / 2.0],
            Profile::Reflected(p) => p.breakpoints().into_iter().map(|b| PI - b).collect(),
            Profile::Combination(terms) => {
                terms.iter().flat_map(|(_, p)| p.breakpoints()).collect()
            }
            Profile::Custom { breakpoints, .. } => breakpoints.clone(),
            _ => Vec::new(),
        };
        out.retain(|&b| b > 0.0 && b < PI);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Highest degree present, for band-limited profiles.
    pub fn degree(&self) -> Option<usize> {
        match self {
            Profile::Constant(_) => Some(0),
            Profile::BandLimited { coeffs } => Some(coeffs.len() - 1),
            Profile::Reflected(p) => p.degree(),
            Profile::Combination(terms) => terms
                .iter()
                .map(|(_, p)| p.degree())
                .try_fold(0, |acc, d| d.map(|d| acc.max(d))),
            _ => None,
        }
    }
}

/// `f(y) = g(γ(pole, y))` on `S^N`.
#[derive(Debug, Clone)]
pub struct ZonalFunction {
    dim: usize,
    profile: Profile,
    pole: SpherePoint,
    label: String,
}

impl ZonalFunction {
    pub fn new(dim: usize, profile: Profile) -> Result<Self> {
        if dim < MIN_DIM {
            return Err(Error::Dimension(dim, MIN_DIM));
        }
        let label = profile.to_string();
        Ok(Self {
            dim,
            profile,
            pole: SpherePoint::north(dim)?,
            label,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_pole(mut self, pole: SpherePoint) -> Result<Self> {
        if pole.dim() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, pole.dim()));
        }
        self.pole = pole;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn pole(&self) -> &SpherePoint {
        &self.pole
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn nu(&self) -> f64 {
        (self.dim as f64 - 1.0) / 2.0
    }

    /// `g(γ)`.
    pub fn value(&self, gamma: f64) -> f64 {
        self.profile.eval(self.nu(), gamma)
    }

    /// Profile as seen from `at`: `g(γ)` at the pole, `g(π−γ)` at the antipode.
    pub fn value_from(&self, at: EvalPoint, gamma: f64) -> f64 {
        match at {
            EvalPoint::Pole => self.value(gamma),
            EvalPoint::Antipode => self.value(PI - gamma),
        }
    }

    /// `f(y)` for an arbitrary point.
    pub fn value_at(&self, y: &SpherePoint) -> Result<f64> {
        Ok(self.value(geodesic_distance(&self.pole, y)?))
    }

    /// The same function seen from the antipode: profile `g(π − γ)`.
    pub fn reflected(&self) -> ZonalFunction {
        ZonalFunction {
            dim: self.dim,
            profile: Profile::Reflected(Box::new(self.profile.clone())),
            pole: self.pole.antipode(),
            label: format!("reflected({})", self.label),
        }
    }

    /// `a·f + b·g` for two functions on the same sphere.
    pub fn combine(a: f64, f: &ZonalFunction, b: f64, g: &ZonalFunction) -> Result<ZonalFunction> {
        if f.dim != g.dim {
            return Err(Error::DimensionMismatch(f.dim, g.dim));
        }
        ZonalFunction::new(
            f.dim,
            Profile::Combination(vec![(a, f.profile.clone()), (b, g.profile.clone())]),
        )
    }

    /// Breakpoints of the profile together with their mirrors, so that one
    /// rule serves evaluation at both the pole and the antipode.
    pub fn symmetric_breakpoints(&self) -> Vec<f64> {
        let mut b = self.profile.breakpoints();
        let mirrored: Vec<f64> = b.iter().map(|x| PI - x).collect();
        b.extend(mirrored);
        b.sort_by(f64::total_cmp);
        b
    }

    /// Default rule resolving every kernel of degree up to `n_max` against this
    /// profile, split at its (mirrored) jumps.
    pub fn quadrature(&self, n_max: usize) -> Result<ZonalQuadrature> {
        self.quadrature_with(default_node_count(n_max))
    }

    pub fn quadrature_with(&self, nodes_per_panel: usize) -> Result<ZonalQuadrature> {
        ZonalQuadrature::split(self.dim, &self.symmetric_breakpoints(), nodes_per_panel)
    }
}

/// Pole amplitudes `c_k = Y_k(f, pole)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    coeffs: Vec<f64>,
}

impl CoefficientVector {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Amplitudes seen from the antipode: `Y_k(f, −pole) = (−1)^k c_k`.
    pub fn reflected(&self) -> CoefficientVector {
        CoefficientVector {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 0 { *c } else { -c })
                .collect(),
        }
    }
}

fn check_dims(f: &ZonalFunction, table: &SpectralTable, q: &ZonalQuadrature) -> Result<()> {
    if f.dim != table.dim() {
        return Err(Error::DimensionMismatch(f.dim, table.dim()));
    }
    if f.dim != q.dim() {
        return Err(Error::DimensionMismatch(f.dim, q.dim()));
    }
    Ok(())
}

/// `Y_k(f, pole) = ∫ Z_k(γ) g(γ) dσ`.
pub fn project(
    f: &ZonalFunction,
    table: &SpectralTable,
    k: usize,
    q: &ZonalQuadrature,
) -> Result<f64> {
    check_dims(f, table, q)?;
    table.check_degree(k)?;
    q.ensure_resolves(k)?;
    let mut z = Vec::new();
    let mut acc = NeumaierSum::default();
    for (&g, &w) in q.nodes().iter().zip(q.weights()) {
        table.zonal_values_into(k, g, &mut z)?;
        acc.add(w * z[k] * f.value(g));
    }
    Ok(acc.value())
}

/// All amplitudes `c_0..=c_{k_max}` in one sweep over the nodes.
pub fn project_all(
    f: &ZonalFunction,
    table: &SpectralTable,
    k_max: usize,
    q: &ZonalQuadrature,
) -> Result<CoefficientVector> {
    check_dims(f, table, q)?;
    table.check_degree(k_max)?;
    q.ensure_resolves(k_max)?;
    let mut sums = vec![NeumaierSum::default(); k_max + 1];
    let mut z = Vec::new();
    for (&g, &w) in q.nodes().iter().zip(q.weights()) {
        let wg = w * f.value(g);
        if wg == 0.0 {
            continue;
        }
        if !wg.is_finite() {
            return Err(Error::NonFinite {
                gamma: g,
                value: wg,
            });
        }
        table.zonal_values_into(k_max, g, &mut z)?;
        for (s, zk) in sums.iter_mut().zip(&z) {
            s.add(wg * zk);
        }
    }
    Ok(CoefficientVector::new(
        sums.iter().map(NeumaierSum::value).collect(),
    ))
}

/// `E_n^α f(x) = ∫ Θ^α(γ(x,y), n) f(y) dσ(y)` at `x ∈ {pole, antipode}` by
/// quadrature of the kernel against the profile.
pub fn apply_riesz_mean_kernel(
    f: &ZonalFunction,
    spec: &KernelSpec,
    table: &SpectralTable,
    q: &ZonalQuadrature,
    at: EvalPoint,
) -> Result<f64> {
    check_dims(f, table, q)?;
    if spec.dim != f.dim {
        return Err(Error::DimensionMismatch(spec.dim, f.dim));
    }
    table.check_degree(spec.n)?;
    q.ensure_resolves(spec.n)?;
    let weights = spec.riesz_weights()?;
    let mut z = Vec::new();
    let mut acc = NeumaierSum::default();
    for (&g, &w) in q.nodes().iter().zip(q.weights()) {
        let value = f.value_from(at, g);
        if value == 0.0 {
            continue;
        }
        table.zonal_values_into(spec.n, g, &mut z)?;
        let theta: f64 = weights
            .iter()
            .zip(&z)
            .map(|(a, b)| a * b)
            .collect::<NeumaierSum>()
            .value();
        acc.add(w * theta * value);
    }
    Ok(acc.value())
}

/// `E_n^α f(pole) = Σ_k w_k c_k` from pole amplitudes.
pub fn apply_riesz_mean_coeffs(coeffs: &CoefficientVector, spec: &KernelSpec) -> Result<f64> {
    if coeffs.coeffs.len() <= spec.n {
        return Err(Error::DegreeOutOfTable {
            k: spec.n,
            k_max: coeffs.coeffs.len().saturating_sub(1),
        });
    }
    let weights = spec.riesz_weights()?;
    Ok(weights
        .iter()
        .zip(&coeffs.coeffs)
        .map(|(w, c)| w * c)
        .collect::<NeumaierSum>()
        .value())
}

/// Profile library used by the experiments.
pub fn test_profiles(dim: usize) -> Result<Vec<ZonalFunction>> {
    let profiles = [
        Profile::Constant(1.0),
        Profile::Cap { radius: PI / 8.0 },
        Profile::Cap { radius: PI / 4.0 },
        Profile::Bump { sigma: 0.1 },
        Profile::Bump { sigma: 0.3 },
        Profile::AntipodalBump { sigma: 0.3 },
        Profile::BandLimited {
            coeffs: vec![1.0, 0.0, 2.0],
        },
        Profile::BandLimited {
            coeffs: vec![0.5, -1.0, 0.0, 1.0],
        },
        Profile::Jump,
    ];
    profiles
        .into_iter()
        .map(|p| ZonalFunction::new(dim, p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sphere_area;
    use crate::spectral::eigenvalue;

    fn setup(dim: usize, n: usize, p: Profile) -> (ZonalFunction, SpectralTable, ZonalQuadrature) {
        let f = ZonalFunction::new(dim, p).unwrap();
        let q = f.quadrature(n).unwrap();
        (f, SpectralTable::new(dim, n).unwrap(), q)
    }

    #[test]
    fn parse_profiles() {
        assert!(
            matches!("cap:0.785".parse::<Profile>(), Ok(Profile::Cap { radius }) if radius == 0.785)
        );
        assert!(
            matches!("cap:pi/4".parse::<Profile>(), Ok(Profile::Cap { radius }) if (radius - PI / 4.0).abs() < 1e-15)
        );
        assert!(
            matches!("bump:0.3".parse::<Profile>(), Ok(Profile::Bump { sigma }) if sigma == 0.3)
        );
        assert!(matches!(
            "antipodal-bump:0.3".parse::<Profile>(),
            Ok(Profile::AntipodalBump { .. })
        ));
        match "bandlimited:1,0,2".parse::<Profile>() {
            Ok(Profile::BandLimited { coeffs }) => assert_eq!(coeffs, vec![1.0, 0.0, 2.0]),
            other => panic!("{other:?}"),
        }
        assert!(matches!("jump".parse::<Profile>(), Ok(Profile::Jump)));
        for bad in [
            "cap",
            "cap:-1",
            "cap:4",
            "bump:x",
            "wobble:1",
            "bandlimited:",
            "jump:2",
        ] {
            assert!(bad.parse::<Profile>().is_err(), "{bad}");
        }
        for p in test_profiles(2).unwrap() {
            let again: Profile = p.label().parse().unwrap();
            assert_eq!(again.to_string(), p.label());
        }
        assert_eq!(parse_angle("2*pi/3"), Some(2.0 * PI / 3.0));
    }

    #[test]
    fn projections_of_constant() {
        let (f, table, q) = setup(2, 12, Profile::Constant(1.0));
        assert!((project(&f, &table, 0, &q).unwrap() - 1.0).abs() < 1e-13);
        for k in 1..=12 {
            assert!(project(&f, &table, k, &q).unwrap().abs() < 1e-13);
        }
    }

    #[test]
    fn projections_of_zonal_harmonic() {
        for dim in [2, 3, 4] {
            let (f, table, q) = setup(dim, 10, Profile::zonal_harmonic(3));
            let c = project_all(&f, &table, 10, &q).unwrap();
            for (k, ck) in c.coeffs().iter().enumerate() {
                let want = if k == 3 { 1.0 } else { 0.0 };
                assert!((ck - want).abs() < 1e-8, "N={dim} k={k}: {ck}");
                assert!((project(&f, &table, k, &q).unwrap() - ck).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn cos_gamma_is_degree_one() {
        let f = ZonalFunction::new(2, Profile::custom("cos", f64::cos, vec![])).unwrap();
        let table = SpectralTable::new(2, 4).unwrap();
        let q = f.quadrature(4).unwrap();
        let c = project_all(&f, &table, 4, &q).unwrap();
        assert!((c.coeffs()[1] - 1.0).abs() < 1e-13);
        assert!(c.coeffs()[0].abs() < 1e-13 && c.coeffs()[2].abs() < 1e-13);
    }

    #[test]
    fn unresolved_degree_is_an_error() {
        let f = ZonalFunction::new(2, Profile::Constant(1.0)).unwrap();
        let table = SpectralTable::new(2, 40).unwrap();
        let q = crate::geometry::build_zonal_quadrature(2, 16).unwrap();
        assert!(matches!(
            project(&f, &table, 9, &q),
            Err(Error::Unresolved { .. })
        ));
        let spec = KernelSpec::new(2, 1.0, 20).unwrap();
        assert!(apply_riesz_mean_kernel(&f, &spec, &table, &q, EvalPoint::Pole).is_err());
    }

    #[test]
    fn mean_examples() {
        for alpha in [0.0, 0.5, 2.0] {
            for n in [1, 5, 30] {
                let (f, table, q) = setup(3, n, Profile::Constant(1.0));
                let spec = KernelSpec::new(3, alpha, n).unwrap();
                let v = apply_riesz_mean_kernel(&f, &spec, &table, &q, EvalPoint::Pole).unwrap();
                assert!((v - 1.0).abs() < 1e-12);
            }
        }
        let (f, table, q) = setup(2, 2, Profile::zonal_harmonic(1));
        let spec = KernelSpec::new(2, 1.0, 2).unwrap();
        let v = apply_riesz_mean_kernel(&f, &spec, &table, &q, EvalPoint::Pole).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn reproduces_band_limited_functions() {
        let p = Profile::BandLimited {
            coeffs: vec![0.3, -1.0, 0.0, 2.0, 0.5],
        };
        for n in [4, 5, 12] {
            let (f, table, q) = setup(3, n, p.clone());
            let spec = KernelSpec::new(3, 0.0, n).unwrap();
            let v = apply_riesz_mean_kernel(&f, &spec, &table, &q, EvalPoint::Pole).unwrap();
            assert!((v - f.value(0.0)).abs() < 1e-8);
            let v = apply_riesz_mean_kernel(&f, &spec, &table, &q, EvalPoint::Antipode).unwrap();
            assert!((v - f.value(PI)).abs() < 1e-8);
        }
    }

    #[test]
    fn coefficient_path_examples() {
        let spec = KernelSpec::new(2, 1.0, 4).unwrap();
        assert_eq!(
            apply_riesz_mean_coeffs(&CoefficientVector::new(vec![0.0; 5]), &spec).unwrap(),
            0.0
        );
        let unit = CoefficientVector::new(vec![1.0, 0.0, 0.0, 0.0, 0.0]);
        for alpha in [0.0, 0.3, 2.0] {
            let spec = KernelSpec::new(2, alpha, 4).unwrap();
            assert_eq!(apply_riesz_mean_coeffs(&unit, &spec).unwrap(), 1.0);
        }
        let spec = KernelSpec::new(2, 1.0, 9).unwrap();
        assert!(apply_riesz_mean_coeffs(&unit, &spec).is_err());
    }

    #[test]
    fn kernel_and_coefficient_paths_agree_on_gaussian() {
        let f = ZonalFunction::new(
            2,
            Profile::custom("exp(-4g^2)", |g| (-4.0 * g * g).exp(), vec![]),
        )
        .unwrap();
        let table = SpectralTable::new(2, 64).unwrap();
        let q = f.quadrature(64).unwrap();
        let spec = KernelSpec::new(2, 1.0, 64).unwrap();
        let c = project_all(&f, &table, 64, &q).unwrap();
        let a = apply_riesz_mean_kernel(&f, &spec, &table, &q, EvalPoint::Pole).unwrap();
        let b = apply_riesz_mean_coeffs(&c, &spec).unwrap();
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        let a = apply_riesz_mean_kernel(&f, &spec, &table, &q, EvalPoint::Antipode).unwrap();
        let b = apply_riesz_mean_coeffs(&c.reflected(), &spec).unwrap();
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }

    #[test]
    fn contraction_on_single_harmonic() {
        for k in [1, 4, 9] {
            let (f, table, q) = setup(3, 20, Profile::zonal_harmonic(k));
            for alpha in [0.5, 1.0, 2.0] {
                let spec = KernelSpec::new(3, alpha, 20).unwrap();
                let v = apply_riesz_mean_kernel(&f, &spec, &table, &q, EvalPoint::Pole).unwrap();
                let want = (1.0 - eigenvalue(3, k) / eigenvalue(3, 20)).powf(alpha);
                assert!((v - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn linearity() {
        let table = SpectralTable::new(2, 32).unwrap();
        let f = ZonalFunction::new(2, Profile::Cap { radius: PI / 4.0 }).unwrap();
        let g = ZonalFunction::new(2, Profile::Bump { sigma: 0.3 }).unwrap();
        let h = ZonalFunction::combine(2.0, &f, -0.5, &g).unwrap();
        let q = h.quadrature(32).unwrap();
        let spec = KernelSpec::new(2, 0.7, 32).unwrap();
        let e = |z: &ZonalFunction| {
            apply_riesz_mean_kernel(z, &spec, &table, &q, EvalPoint::Pole).unwrap()
        };
        assert!((e(&h) - (2.0 * e(&f) - 0.5 * e(&g))).abs() < 1e-10);
    }

    #[test]
    fn profile_library_examples() {
        let lib = test_profiles(2).unwrap();
        let constant = &lib[0];
        let q = constant.quadrature(8).unwrap();
        assert!(
            (q.integrate_zonal(|g| constant.value(g)).unwrap() - sphere_area(2).unwrap()).abs()
                < 1e-12
        );
        let anti = lib
            .iter()
            .find(|f| matches!(f.profile(), Profile::AntipodalBump { .. }))
            .unwrap();
        assert_eq!(anti.value(PI), 1.0);
        let cap = ZonalFunction::new(2, Profile::Cap { radius: PI / 4.0 }).unwrap();
        let q = cap.quadrature(8).unwrap();
        let mass = q.integrate_zonal(|g| cap.value(g)).unwrap();
        assert!((mass - 2.0 * PI * (1.0 - (PI / 4.0).cos())).abs() < 1e-12);
    }

    #[test]
    fn reflected_function_lives_at_the_antipode() {
        let f = ZonalFunction::new(2, Profile::Cap { radius: 0.5 }).unwrap();
        let r = f.reflected();
        let y = SpherePoint::at_angle(2, 0.3).unwrap();
        assert_eq!(f.value_at(&y).unwrap(), 1.0);
        assert_eq!(r.value_at(&y).unwrap(), 1.0);
        assert_eq!(r.value(PI - 0.3), 1.0);
        assert_eq!(r.profile().breakpoints(), vec![PI - 0.5]);
    }
}
