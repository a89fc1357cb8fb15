//! Geometric compound sums P(X_1 + ... + X_R > γ).
//!
//! The event splits into an exactly computable dominant term (some jump
//! exceeds γ) and a residual probability under a tilted measure in which
//! (R−1) ~ Geom(F̄(γ) + ρF(γ)) and the jumps follow the Weibull law truncated
//! to (0, γ):
//!
//!   P(S_R > γ) = F̄(γ)/(F̄(γ)+ρF(γ))
//!              + ρ(1−ρ)F(γ)²/(F̄(γ)+ρF(γ)) · P̃(S_R > γ).
//!
//! The residual is estimated semiparametrically: the transdimensional Gibbs
//! chain of [`crate::gibbs`] targets π̃(y, r) ∝ f_R(r)·Π f(y_j)·1{S_r > γ},
//! and the importance density over (r, y) is assembled from
//!
//! * an n-component truncated-geometric mixture for R with cutoffs r*(Y_k),
//! * per-index truncated-jump mixtures built from the chain states long
//!   enough to contribute (falling back to the prior where never observed),
//! * the exact conditional for the final jump, which forces S_r > γ.
//!
//! Counts are capped at the 1−1e−12 quantile of the tilted geometric; the
//! folded tail mass sits in the cap's pmf so the sampler and its density
//! agree exactly.

use std::time::Instant;

use rand::distr::Open01;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::distributions::JumpLaw;
use crate::error::{Error, Result};
use crate::estimators::{EstimateReport, Method};
use crate::exec::{run_replications, stream_rng, StreamDomain};
use crate::gibbs::{default_burn_in, min_exceeding_prefix, run_compound_chain, CompoundChain};
use crate::math::log_cumsum_exp;

/// Mass below which the geometric count is capped.
const COUNT_TAIL_EPS: f64 = 1e-12;

/// Compound geometric-sum model with its tilted-measure constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompoundModel {
    /// Weibull tail index of the jumps.
    pub alpha: f64,
    /// Geometric parameter of the original count, pmf ρ(1−ρ)^{r−1} on r ≥ 1.
    pub rho: f64,
    pub gamma: f64,
    /// Untilted jump law (Weibull α on (0, ∞)).
    pub base_law: JumpLaw,
    /// Tilted jump law: Weibull α truncated to (0, γ).
    pub jump_law: JumpLaw,
    /// Tilted geometric parameter F̄(γ) + ρF(γ); under the tilted measure
    /// (R−1) ~ Geom of this, so R lives on {2, 3, ...}.
    pub tilted_rho: f64,
    /// Count cap: the ⌈1−1e−12 quantile⌉ of the tilted count law.
    pub r_max: usize,
}

impl CompoundModel {
    pub fn new(alpha: f64, rho: f64, gamma: f64) -> Result<Self> {
        let base_law = JumpLaw::weibull(alpha)?;
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "geometric rho must lie in (0, 1], got {rho}"
            )));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "threshold gamma must be positive and finite, got {gamma}"
            )));
        }
        let jump_law = JumpLaw::truncated_weibull(alpha, gamma)?;
        let tail = base_law.tail(gamma);
        let tilted_rho = tail + rho * (1.0 - tail);
        let r_max = if tilted_rho >= 1.0 {
            2
        } else {
            let q = (COUNT_TAIL_EPS.ln() / (-tilted_rho).ln_1p()).ceil();
            2.max(1 + q as usize)
        };
        Ok(CompoundModel { alpha, rho, gamma, base_law, jump_law, tilted_rho, r_max })
    }

    /// F̄(γ)/(F̄(γ) + ρF(γ)): the exactly computable share of P(S_R > γ).
    pub fn dominant_term(&self) -> f64 {
        self.base_law.tail(self.gamma) / self.tilted_rho
    }

    /// ρ(1−ρ)F(γ)²/(F̄(γ) + ρF(γ)): multiplier of the residual probability.
    pub fn residual_coefficient(&self) -> f64 {
        let f = self.base_law.cdf(self.gamma);
        self.rho * (1.0 - self.rho) * f * f / self.tilted_rho
    }

    /// ln P̃(R = r) for the tilted count, r ≥ 2.
    pub fn count_log_pmf(&self, r: usize) -> f64 {
        if r < 2 {
            return f64::NEG_INFINITY;
        }
        if self.tilted_rho >= 1.0 {
            return if r == 2 { 0.0 } else { f64::NEG_INFINITY };
        }
        self.tilted_rho.ln() + (r as f64 - 2.0) * (-self.tilted_rho).ln_1p()
    }

    /// ln P̃(R ≥ r).
    pub fn count_log_tail_at_least(&self, r: usize) -> f64 {
        if r <= 2 {
            return 0.0;
        }
        if self.tilted_rho >= 1.0 {
            return f64::NEG_INFINITY;
        }
        (r as f64 - 2.0) * (-self.tilted_rho).ln_1p()
    }

    /// Draw the tilted count conditioned on R ≥ r_min, capped at r_max (the
    /// cap absorbs the truncated tail mass).
    pub fn sample_count_above(&self, r_min: usize, u: f64) -> usize {
        debug_assert!(r_min >= 2);
        if self.tilted_rho >= 1.0 {
            return r_min.min(self.r_max);
        }
        let shift = ((-u).ln_1p() / (-self.tilted_rho).ln_1p()).ceil().max(1.0);
        let r = (r_min - 1) as f64 + shift;
        (r as usize).min(self.r_max)
    }

    /// ln f̃(r, y): the tilted joint density of a count and its jumps.
    pub fn tilted_log_density(&self, jumps: &[f64]) -> f64 {
        let mut acc = self.count_log_pmf(jumps.len());
        for &y in jumps {
            acc += self.jump_law.ln_density(y);
        }
        acc
    }
}

/// Importance density over (r, y_1..y_r) assembled from a compound chain.
#[derive(Debug, Clone)]
pub struct CompoundIsDensity {
    model: CompoundModel,
    /// Sorted cutoffs r*(Y_k) with cumulative log weights 1/P̃(R ≥ r*).
    count_cutoffs: Vec<usize>,
    count_log_cum: Vec<f64>,
    ln_n: f64,
    /// Mixture for jump index j (0-based), built from states with more than
    /// j+1 jumps. Indices beyond the vector fall back to the prior.
    jump_mixtures: Vec<crate::mixture::MarginalMixture>,
    /// Single-component prior mixture used for never-observed indices.
    prior: crate::mixture::MarginalMixture,
}

impl CompoundIsDensity {
    pub fn build(chain: &CompoundChain) -> Result<Self> {
        let model = chain.model;
        if chain.states.is_empty() {
            return Err(Error::EmptyChain);
        }
        let mut cutoffs: Vec<usize> = chain
            .states
            .iter()
            .map(|y| min_exceeding_prefix(y, model.gamma))
            .collect();
        cutoffs.sort_unstable();
        let log_weights: Vec<f64> =
            cutoffs.iter().map(|&r| -model.count_log_tail_at_least(r)).collect();
        let count_log_cum = log_cumsum_exp(&log_weights);
        let ln_n = (cutoffs.len() as f64).ln();

        let max_len = chain.states.iter().map(Vec::len).max().expect("nonempty");
        let mut jump_mixtures = Vec::new();
        for j in 0..max_len.saturating_sub(1) {
            let thresholds: Vec<f64> = chain
                .states
                .iter()
                .filter(|y| y.len() > j + 1)
                .map(|y| {
                    let rest: f64 = y.iter().sum::<f64>() - y[j];
                    (model.gamma - rest).max(0.0)
                })
                .collect();
            jump_mixtures
                .push(crate::mixture::MarginalMixture::from_thresholds(model.jump_law, thresholds)?);
        }
        let prior = crate::mixture::MarginalMixture::from_thresholds(model.jump_law, vec![0.0])?;
        Ok(CompoundIsDensity {
            model,
            count_cutoffs: cutoffs,
            count_log_cum,
            ln_n,
            jump_mixtures,
            prior,
        })
    }

    fn jump_mixture(&self, j: usize) -> &crate::mixture::MarginalMixture {
        self.jump_mixtures.get(j).unwrap_or(&self.prior)
    }

    /// ln of the count mixture pmf at r (folded tail mass at the cap).
    pub fn count_log_pmf(&self, r: usize) -> f64 {
        let active = self.count_cutoffs.partition_point(|&c| c <= r);
        if active == 0 || r > self.model.r_max {
            return f64::NEG_INFINITY;
        }
        let base = if r == self.model.r_max {
            self.model.count_log_tail_at_least(r)
        } else {
            self.model.count_log_pmf(r)
        };
        base + self.count_log_cum[active - 1] - self.ln_n
    }

    /// Draw (r, y_1..y_r). Every returned vector satisfies S_r > γ.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let k = rng.random_range(0..self.count_cutoffs.len());
        let r = self.model.sample_count_above(self.count_cutoffs[k], rng.sample(Open01));
        let mut y = Vec::with_capacity(r);
        for j in 0..r - 1 {
            y.push(self.jump_mixture(j).sample(rng));
        }
        let c = self.model.gamma - y.iter().sum::<f64>();
        let u: f64 = rng.sample(Open01);
        y.push(self.model.jump_law.sample_truncated_above(c, u));
        y
    }

    /// ln ĝ(r, y).
    pub fn log_density(&self, jumps: &[f64]) -> f64 {
        let r = jumps.len();
        if r < 2 {
            return f64::NEG_INFINITY;
        }
        let mut acc = self.count_log_pmf(r);
        if acc == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        for (j, &yj) in jumps[..r - 1].iter().enumerate() {
            acc += self.jump_mixture(j).log_density(yj);
            if acc == f64::NEG_INFINITY {
                return f64::NEG_INFINITY;
            }
        }
        let c = (self.model.gamma - jumps[..r - 1].iter().sum::<f64>()).max(0.0);
        let last = jumps[r - 1];
        if last <= c {
            return f64::NEG_INFINITY;
        }
        acc + self.model.jump_law.ln_density(last) - self.model.jump_law.log_tail(c)
    }
}

/// Dominant + coefficient × residual-IS estimate of P(S_R > γ).
///
/// ρ = 1 collapses to the exact F̄(γ) with no simulation. Wall time includes
/// the chain and mixture construction.
pub fn compound_estimate(
    model: &CompoundModel,
    n: usize,
    burn_in: Option<usize>,
    m: u64,
    seed: u64,
) -> EstimateReport {
    let t0 = Instant::now();
    let dominant = model.dominant_term();
    let coefficient = model.residual_coefficient();
    if model.rho >= 1.0 || coefficient == 0.0 {
        return EstimateReport {
            method: Method::Compound,
            estimate: dominant,
            std_error: 0.0,
            rel_error: 0.0,
            m,
            wall_seconds: t0.elapsed().as_secs_f64(),
            seed,
        };
    }
    let burn_in = burn_in.unwrap_or_else(|| default_burn_in(n));
    let chain = run_compound_chain(model, n, burn_in, seed);
    let g = CompoundIsDensity::build(&chain).expect("chain is nonempty");
    let gamma = model.gamma;
    let stats = run_replications(m, |i| {
        let mut rng = stream_rng(seed, StreamDomain::Replication, i);
        let y = g.sample(&mut rng);
        if y.iter().sum::<f64>() <= gamma {
            return 0.0;
        }
        let log_g = g.log_density(&y);
        if log_g == f64::NEG_INFINITY {
            return 0.0;
        }
        (model.tilted_log_density(&y) - log_g).exp()
    });
    let estimate = dominant + coefficient * stats.mean;
    let std_error = coefficient * stats.std_error();
    let rel_error = if std_error == 0.0 { 0.0 } else { std_error / estimate };
    EstimateReport {
        method: Method::Compound,
        estimate,
        std_error,
        rel_error,
        m,
        wall_seconds: t0.elapsed().as_secs_f64(),
        seed,
    }
}
