//! Small numerical building blocks shared by the spectral and kernel modules:
//! exact binomials, Gamma-function ratios and compensated summation.

pub use statrs::function::gamma::{gamma, ln_gamma};

/// Exact binomial coefficient `n choose k`, `None` on `u128` overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

// Stirling series tail: sum_k B_{2k} / (2k (2k - 1) z^{2k - 1}).
fn stirling_tail(z: f64) -> f64 {
    const C: [f64; 6] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
    ];
    let r = 1.0 / z;
    let r2 = r * r;
    let mut acc = 0.0;
    for c in C.iter().rev() {
        acc = acc * r2 + c;
    }
    acc * r
}

/// `ln Γ(x + a) − ln Γ(x)` for `x > 0`, `x + a > 0`.
///
/// Evaluated without forming either log-gamma value, so the relative accuracy
/// of the ratio stays near machine precision even when `x` is in the millions
/// (where a plain `ln_gamma` difference loses six or more digits).
pub fn ln_gamma_ratio(x: f64, a: f64) -> f64 {
    debug_assert!(x > 0.0 && x + a > 0.0);
    if a == 0.0 {
        return 0.0;
    }
    let threshold = 30.0_f64.max(3.0 * a.abs());
    let mut z = x;
    let mut shift = NeumaierSum::default();
    while z < threshold || z + a < threshold {
        shift.add((a / z).ln_1p());
        z += 1.0;
    }
    let asymptotic = (z + a - 0.5) * (a / z).ln_1p() + a * z.ln() - a
        + (stirling_tail(z + a) - stirling_tail(z));
    asymptotic - shift.value()
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of an iterator of floats.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<NeumaierSum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(4, 0), Some(1));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(4104, 8), Some(binomial(4104, 4096).unwrap()));
    }

    #[test]
    fn binomial_overflow_is_reported() {
        assert_eq!(binomial(400, 200), None);
    }

    #[test]
    fn gamma_ratio_matches_lgamma_for_moderate_arguments() {
        for &(x, a) in &[
            (1.0, 0.5),
            (3.0, 0.5),
            (0.3, 2.7),
            (10.5, -0.75),
            (2.0, 6.0),
        ] {
            let direct = ln_gamma(x + a) - ln_gamma(x);
            assert!((ln_gamma_ratio(x, a) - direct).abs() < 1e-13, "x={x} a={a}");
        }
    }

    #[test]
    fn gamma_ratio_half_integer_closed_form() {
        // Γ(m + 3/2) / Γ(m + 1) = (2m+2)! sqrt(pi) / (4^{m+1} (m+1)! m!)
        // ratio recursion: r_{m} = r_{m-1} * (m + 1/2) / m
        let mut r = statrs::function::gamma::gamma(1.5);
        for m in 1..2000u32 {
            let m = m as f64;
            r *= (m + 0.5) / m;
            let got = ln_gamma_ratio(m + 1.0, 0.5).exp();
            assert!(((got - r) / r).abs() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn gamma_ratio_is_accurate_for_huge_arguments() {
        // Γ(x+1)/Γ(x) = x exactly.
        let x = 1.0e6 + 0.25;
        assert!(((ln_gamma_ratio(x, 1.0).exp() - x) / x).abs() < 1e-14);
        // Γ(x+2)/Γ(x) = x (x+1).
        let want = (x * (x + 1.0)).ln();
        assert!((ln_gamma_ratio(x, 2.0) - want).abs() < 1e-13);
    }

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(xs), 2.0);
    }
}
