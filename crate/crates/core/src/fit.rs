//! Growth-exponent measurement: windowed envelopes of oscillating sequences
//! and least-squares slopes in log-log coordinates.

use crate::error::{out_of_range, Error, Result};

/// Default envelope window ratio.
pub const DEFAULT_WINDOW: f64 = 0.25;

/// `env(n) = max{|v(m)| : n ≤ m ≤ n(1+η)}` for each sample `n`.
///
/// `values` must be sorted by `n`. Windows near the end of the data are
/// truncated to the samples that exist.
pub fn envelope(values: &[(f64, f64)], window: f64) -> Result<Vec<(f64, f64)>> {
    if values.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, got: 0 });
    }
    if !(window > 0.0) {
        return out_of_range("window", window, "> 0");
    }
    let mut out = Vec::with_capacity(values.len());
    for (i, &(n, _)) in values.iter().enumerate() {
        let hi = n * (1.0 + window);
        let env = values[i..]
            .iter()
            .take_while(|(m, _)| *m <= hi * (1.0 + 1e-12))
            .map(|(_, v)| v.abs())
            .fold(0.0, f64::max);
        out.push((n, env));
    }
    Ok(out)
}

/// Result of a log-log least-squares fit `log v ≈ slope · log n + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// RMS deviation of `log v` from the fitted line.
    pub residual: f64,
    pub points: usize,
}

/// Fits a line through `(log n, log v)` for the points with `n_min ≤ n ≤ n_max`.
pub fn fit_loglog_slope(points: &[(f64, f64)], n_min: f64, n_max: f64) -> Result<SlopeFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &(n, v) in points.iter().filter(|(n, _)| *n >= n_min && *n <= n_max) {
        if !(v > 0.0) {
            return Err(Error::NonPositive { n, value: v });
        }
        xs.push(n.ln());
        ys.push(v.ln());
    }
    if xs.len() < 4 {
        return Err(Error::TooFewPoints {
            needed: 4,
            got: xs.len(),
        });
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum();
    Ok(SlopeFit {
        slope,
        intercept,
        residual: (ss / m).sqrt(),
        points: xs.len(),
    })
}

/// Geometric grid `start · 2^{i/steps_per_octave}` rounded to integers,
/// deduplicated, up to and including `end`.
pub fn geometric_grid(start: usize, end: usize, steps_per_octave: usize) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    let mut i = 0;
    loop {
        let v = (start as f64 * 2f64.powf(i as f64 / steps_per_octave as f64)).round() as usize;
        if v > end {
            break;
        }
        if out.last() != Some(&v) {
            out.push(v);
        }
        i += 1;
    }
    out
}

/// Quarter-octave grid from 32 to 512 used for slope measurements.
pub fn default_slope_grid() -> Vec<usize> {
    geometric_grid(32, 512, 4)
}

/// Envelope of `values` (window [`DEFAULT_WINDOW`]) fitted at the sample
/// points listed in `fit_at`. `values` should extend a window beyond the last
/// fit point so that its envelope is not truncated.
pub fn envelope_slope(values: &[(f64, f64)], fit_at: &[usize]) -> Result<SlopeFit> {
    let env = envelope(values, DEFAULT_WINDOW)?;
    let picked: Vec<(f64, f64)> = env
        .into_iter()
        .filter(|(n, _)| fit_at.iter().any(|&m| m as f64 == *n))
        .collect();
    fit_loglog_slope(&picked, f64::NEG_INFINITY, f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_examples() {
        let c: Vec<_> = (1..20).map(|n| (n as f64, 3.5)).collect();
        assert!(envelope(&c, 0.25).unwrap().iter().all(|&(_, e)| e == 3.5));

        let v: Vec<_> = (1..200)
            .map(|n| (n as f64, (n as f64).sin() * n as f64))
            .collect();
        for ((_, e), (_, x)) in envelope(&v, 0.25).unwrap().iter().zip(&v) {
            assert!(*e >= x.abs());
        }

        let alt: Vec<_> = (1..40)
            .map(|n| {
                (
                    n as f64,
                    if n % 2 == 0 { 1.0 } else { -1.0 } * (n * n) as f64,
                )
            })
            .collect();
        let env = envelope(&alt, 0.25).unwrap();
        assert_eq!(env[7], (8.0, 100.0));

        assert!(envelope(&[], 0.25).is_err());
        assert!(envelope(&c, 0.0).is_err());
    }

    #[test]
    fn slope_examples() {
        let sq: Vec<_> = (1..=64).map(|n| (n as f64, (n * n) as f64)).collect();
        let f = fit_loglog_slope(&sq, 1.0, 64.0).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12 && f.residual < 1e-12);

        let p: Vec<_> = (2..=100)
            .map(|n| (n as f64, 5.0 * (n as f64).powf(1.5)))
            .collect();
        let f = fit_loglog_slope(&p, 2.0, 100.0).unwrap();
        assert!((f.slope - 1.5).abs() < 1e-12);
        assert!((f.intercept - 5f64.ln()).abs() < 1e-11);

        let wiggle: Vec<_> = (1..=2000)
            .map(|n| {
                let x = n as f64;
                (x, x * x * (1.0 + 0.01 * x.sin()))
            })
            .collect();
        let f = fit_loglog_slope(&wiggle, 10.0, 2000.0).unwrap();
        assert!((f.slope - 2.0).abs() < 0.01);
    }

    #[test]
    fn slope_errors() {
        let bad = [(1.0, 1.0), (2.0, -1.0), (3.0, 1.0), (4.0, 1.0)];
        assert!(matches!(
            fit_loglog_slope(&bad, 1.0, 4.0),
            Err(Error::NonPositive { .. })
        ));
        let few = [(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)];
        assert!(matches!(
            fit_loglog_slope(&few, 1.0, 4.0),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn envelope_slope_of_oscillation() {
        // the window must span several periods at n = 32 for the peaks to be caught
        let v: Vec<_> = (1..=640)
            .map(|n| {
                let x = n as f64;
                (x, x.sqrt() * (2.5 * x).cos())
            })
            .collect();
        let f = envelope_slope(&v, &default_slope_grid()).unwrap();
        assert_eq!(f.points, 17);
        assert!((f.slope - 0.5).abs() < 0.02, "{}", f.slope);
    }

    #[test]
    fn grids() {
        let g = default_slope_grid();
        assert_eq!(g.first(), Some(&32));
        assert_eq!(g.last(), Some(&512));
        assert!(g.contains(&45) && g.contains(&64));
        assert_eq!(g.len(), 17);
    }
}
