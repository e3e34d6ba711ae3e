//! Experiment configuration: parsing of the literal forms accepted on the
//! command line, validation, and a lossless JSON form echoed into reports.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sphlab_core::spectral::{MAX_TABLE_DEGREE, MAX_TABLE_DIM};
use sphlab_core::zonal::parse_angle;
use sphlab_core::{Complex64, Profile};
use thiserror::Error;

/// Version of the configuration and report formats.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("--{flag}: {value:?} is invalid; expected {expected}")]
    Invalid {
        flag: &'static str,
        value: String,
        expected: String,
    },
    #[error("unsupported config format version {0} (this build reads version {FORMAT_VERSION})")]
    Version(u32),
    #[error("malformed config: {0}")]
    Malformed(String),
}

fn invalid(flag: &'static str, value: impl ToString, expected: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        flag,
        value: value.to_string(),
        expected: expected.into(),
    }
}

/// A geodesic distance, possibly depending on the degree `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GammaSpec {
    Fixed(f64),
    /// `π − c/n`.
    PiMinusOverN(f64),
}

impl GammaSpec {
    pub fn resolve(&self, n: usize) -> f64 {
        match *self {
            GammaSpec::Fixed(g) => g,
            GammaSpec::PiMinusOverN(c) => (PI - c / n as f64).max(0.0),
        }
    }
}

impl fmt::Display for GammaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // `{:?}` keeps the shortest representation that round-trips
            GammaSpec::Fixed(g) => write!(f, "{g:?}"),
            GammaSpec::PiMinusOverN(c) => write!(f, "pi-{c:?}/n"),
        }
    }
}

impl FromStr for GammaSpec {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || {
            invalid(
                "gamma",
                s,
                "a value in [0, pi] such as 1.2, pi/2, 3*pi/4, or pi-1/n",
            )
        };
        if let Some(rest) = t.strip_prefix("pi-") {
            if let Some(c) = rest.strip_suffix("/n") {
                let c: f64 = c.trim().parse().map_err(|_| bad())?;
                if !(c > 0.0) || !c.is_finite() {
                    return Err(bad());
                }
                return Ok(GammaSpec::PiMinusOverN(c));
            }
        }
        match parse_angle(t) {
            Some(g) if (0.0..=PI).contains(&g) => Ok(GammaSpec::Fixed(g)),
            Some(g) if g > PI && g - PI < 1e-12 => Ok(GammaSpec::Fixed(PI)),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for GammaSpec {
    type Error = ConfigError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<GammaSpec> for String {
    fn from(g: GammaSpec) -> String {
        g.to_string()
    }
}

/// Parses `1.5`, `0.5+1i`, `0.5-2i`, `2i`.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return None;
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse().ok().map(|re| Complex64::new(re, 0.0));
    };
    // split at the last sign that is not the leading one or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (body[..i].parse().ok()?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse().ok()?,
    };
    let z = Complex64::new(re, im);
    (z.re.is_finite() && z.im.is_finite()).then_some(z)
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:?}", z.re)
    } else if z.im < 0.0 {
        format!("{:?}{:?}i", z.re, z.im)
    } else {
        format!("{:?}+{:?}i", z.re, z.im)
    }
}

/// A complex order serialized in the command-line literal form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Order(pub Complex64);

impl Order {
    pub fn real(re: f64) -> Self {
        Order(Complex64::new(re, 0.0))
    }

    pub fn is_real(&self) -> bool {
        self.0.im == 0.0
    }
}

impl FromStr for Order {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_complex(s)
            .map(Order)
            .ok_or_else(|| invalid("alpha", s, "a real number or a complex literal like 0.5+1i"))
    }
}

impl TryFrom<String> for Order {
    type Error = ConfigError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Order> for String {
    fn from(o: Order) -> String {
        format_complex(o.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Kernel,
    Means,
    Interp,
    Maximal,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Kernel => "kernel",
            Command::Means => "means",
            Command::Interp => "interp",
            Command::Maximal => "maximal",
        }
    }
}

/// Interpolation fixtures selectable with `--profile` in `interp`.
pub const INTERP_FIXTURES: [&str; 2] = ["spectral", "single-jump"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub version: u32,
    pub command: Command,
    pub dim: usize,
    pub alpha: Order,
    /// Upper order `ζ` of the interpolation check.
    pub zeta: Order,
    pub n_min: usize,
    pub n_max: usize,
    pub gammas: Vec<GammaSpec>,
    pub profiles: Vec<String>,
    pub deltas: Vec<f64>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub quad_nodes: Option<usize>,
}

impl ExperimentConfig {
    /// Defaults for a subcommand.
    pub fn new(command: Command) -> Self {
        let (alpha, profiles, n_min) = match command {
            Command::Kernel => (0.0, Vec::new(), 1),
            Command::Means => (1.0, Vec::new(), 2),
            Command::Interp => (0.5, vec!["spectral".to_string()], 1),
            Command::Maximal => (0.0, Vec::new(), 2),
        };
        Self {
            version: FORMAT_VERSION,
            command,
            dim: 2,
            alpha: Order::real(alpha),
            zeta: Order::real(1.0),
            n_min,
            n_max: 512,
            gammas: vec![GammaSpec::Fixed(PI / 2.0)],
            profiles,
            deltas: vec![1.0, 0.5, 0.25, 0.125],
            out: None,
            seed: 0,
            quad_nodes: None,
        }
    }

    /// Checks every range before anything runs.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.version != FORMAT_VERSION {
            return Err(ConfigError::Version(self.version));
        }
        if !(2..=MAX_TABLE_DIM).contains(&self.dim) {
            return Err(invalid(
                "dim",
                self.dim,
                format!("an integer in [2, {MAX_TABLE_DIM}]"),
            ));
        }
        let top = if self.command == Command::Maximal {
            MAX_TABLE_DEGREE / 2
        } else {
            MAX_TABLE_DEGREE
        };
        if !(1..=top).contains(&self.n_max) {
            return Err(invalid(
                "n-max",
                self.n_max,
                format!("an integer in [1, {top}]"),
            ));
        }
        if !(1..=self.n_max).contains(&self.n_min) {
            return Err(invalid(
                "n-min",
                self.n_min,
                format!("an integer in [1, n-max={}]", self.n_max),
            ));
        }
        let a = self.alpha.0;
        match self.command {
            Command::Interp => {
                let z = self.zeta.0;
                if !(z.re > 0.0) {
                    return Err(invalid("zeta", format_complex(z), "Re zeta > 0"));
                }
                if !(a.re > 0.0 && a.re < z.re) {
                    return Err(invalid(
                        "alpha",
                        format_complex(a),
                        format!("0 < Re alpha < Re zeta = {}", z.re),
                    ));
                }
                if self.profiles.len() > 1 {
                    return Err(invalid(
                        "profile",
                        self.profiles.join(","),
                        "a single fixture for interp",
                    ));
                }
                for p in &self.profiles {
                    if !INTERP_FIXTURES.contains(&p.as_str()) {
                        return Err(invalid(
                            "profile",
                            p,
                            format!("one of {}", INTERP_FIXTURES.join(", ")),
                        ));
                    }
                }
            }
            _ => {
                if !self.alpha.is_real() || !(a.re >= 0.0) || !a.re.is_finite() {
                    return Err(invalid("alpha", format_complex(a), "a real number >= 0"));
                }
                for p in &self.profiles {
                    p.parse::<Profile>()
                        .map_err(|_| invalid("profile", p, "constant, cap:R, bump:S, antipodal-bump:S, bandlimited:C0,C1,..., or jump"))?;
                }
            }
        }
        if self.command == Command::Maximal {
            if self.n_min < 2 {
                return Err(invalid("n-min", self.n_min, "an integer >= 2 for maximal"));
            }
            if self.deltas.is_empty() {
                return Err(invalid(
                    "delta",
                    "",
                    "a nonempty comma-separated list of positive numbers",
                ));
            }
            if let Some(d) = self.deltas.iter().find(|&&d| !(d > 0.0) || !d.is_finite()) {
                return Err(invalid("delta", d, "positive numbers"));
            }
        }
        if self.command == Command::Kernel && self.gammas.is_empty() {
            return Err(invalid("gamma", "", "at least one value"));
        }
        if let Some(m) = self.quad_nodes {
            let need = 2 * self.n_max;
            if m < need.max(8) {
                return Err(invalid(
                    "quad-nodes",
                    m,
                    format!("an integer >= max(8, 2*n-max) = {}", need.max(8)),
                ));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, ConfigError> {
        let c: Self = serde_json::from_str(s).map_err(|e| ConfigError::Malformed(e.to_string()))?;
        if c.version != FORMAT_VERSION {
            return Err(ConfigError::Version(c.version));
        }
        Ok(c)
    }
}

/// Parses a comma-separated list with `parse` applied to each entry.
pub fn parse_list<T, E>(s: &str, parse: impl Fn(&str) -> Result<T, E>) -> Result<Vec<T>, E> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| parse(p.trim()))
        .collect()
}

/// Parses `--delta` lists; entries may be fractions like `1/8`.
pub fn parse_delta(s: &str) -> Result<f64, ConfigError> {
    let bad = || invalid("delta", s, "positive numbers such as 1,0.5,1/4");
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            a / b
        }
        None => s.trim().parse().map_err(|_| bad())?,
    };
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}
