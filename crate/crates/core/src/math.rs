//! Log-domain arithmetic helpers.
//!
//! All mixture weights in this crate are of the form 1/F̄(c) and can exceed
//! the double-precision range by hundreds of orders of magnitude, so sums of
//! weights are carried exclusively as logarithms.

/// ln(e^a + e^b) without overflow.
#[inline]
pub fn log_sum_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    if a >= b {
        a + (b - a).exp().ln_1p()
    } else {
        b + (a - b).exp().ln_1p()
    }
}

/// ln(e^a − e^b) for a ≥ b; returns −∞ when the difference underflows.
#[inline]
pub fn log_diff_exp(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a;
    }
    if b >= a {
        return f64::NEG_INFINITY;
    }
    // -expm1(x) = 1 - e^x, accurate for x near 0.
    a + (-(b - a).exp_m1()).ln()
}

/// Cumulative ln Σ_{j≤k} e^{w_j} for a slice of log-weights, built by a
/// streaming two-term log-sum-exp.
pub fn log_cumsum_exp(log_weights: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(log_weights.len());
    let mut acc = f64::NEG_INFINITY;
    for &w in log_weights {
        acc = log_sum_exp(acc, w);
        out.push(acc);
    }
    out
}

/// Streaming mean and scaled second central moment (Welford).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanVar {
    pub count: u64,
    pub mean: f64,
    m2: f64,
}

impl MeanVar {
    pub fn new() -> Self {
        MeanVar { count: 0, mean: 0.0, m2: 0.0 }
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Chan's pairwise combination; deterministic for a fixed merge order.
    pub fn merge(self, other: MeanVar) -> MeanVar {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        let delta = other.mean - self.mean;
        MeanVar {
            count: self.count + other.count,
            mean: self.mean + delta * nb / n,
            m2: self.m2 + other.m2 + delta * delta * na * nb / n,
        }
    }

    /// Unbiased sample variance of the observations.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count as f64 - 1.0)
        }
    }

    /// Standard error of the sample mean.
    pub fn std_error(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

impl Default for MeanVar {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sum_exp_handles_extreme_magnitudes() {
        // ln(e^1234 + e^1232) = 1234 + ln(1 + e^-2)
        let expected = 1234.0 + (1.0 + (-2.0f64).exp()).ln();
        assert!((log_sum_exp(1234.0, 1232.0) - expected).abs() < 1e-12);
        assert!((log_sum_exp(1232.0, 1234.0) - expected).abs() < 1e-12);
        assert_eq!(log_sum_exp(f64::NEG_INFINITY, 3.0), 3.0);
        assert_eq!(
            log_sum_exp(f64::NEG_INFINITY, f64::NEG_INFINITY),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn log_diff_exp_near_cancellation() {
        // ln(e^0 - e^-1e-9) = ln(1 - exp(-1e-9)) ≈ ln(1e-9)
        let got = log_diff_exp(0.0, -1e-9);
        assert!((got - (1e-9f64).ln()).abs() < 1e-6);
        assert_eq!(log_diff_exp(5.0, 5.0), f64::NEG_INFINITY);
        assert_eq!(log_diff_exp(2.0, f64::NEG_INFINITY), 2.0);
    }

    #[test]
    fn cumulative_log_sum_matches_naive() {
        let w = [0.0, 1.0, -3.0, 700.0, 699.0];
        let cum = log_cumsum_exp(&w);
        for k in 0..w.len() {
            let naive: f64 = {
                let mx = w[..=k].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                mx + w[..=k].iter().map(|x| (x - mx).exp()).sum::<f64>().ln()
            };
            assert!((cum[k] - naive).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn welford_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 2654435761u64 % 1000) as f64).sin()).collect();
        let mut whole = MeanVar::new();
        for &x in &xs {
            whole.push(x);
        }
        let mut left = MeanVar::new();
        let mut right = MeanVar::new();
        for &x in &xs[..317] {
            left.push(x);
        }
        for &x in &xs[317..] {
            right.push(x);
        }
        let merged = left.merge(right);
        assert_eq!(merged.count, whole.count);
        assert!((merged.mean - whole.mean).abs() < 1e-13);
        assert!((merged.variance() - whole.variance()).abs() < 1e-13);
    }
}
