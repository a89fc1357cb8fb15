//! The rare-event estimators and their statistics.
//!
//! Replications are embarrassingly parallel; each draws its RNG stream from
//! (seed, replication index), so reports are reproducible and invariant to
//! the worker count. Wall time for the semiparametric pipelines includes the
//! preliminary chain and mixture construction.

use std::time::Instant;

use rand::distr::Open01;
use rand::Rng;

use crate::compound::CompoundModel;
use crate::distributions::JumpLaw;
use crate::error::{Error, Result};
use crate::exec::{run_replications, stream_rng, StreamDomain};
use crate::gibbs::{default_burn_in, run_fixed_chain, run_tilted_chain, FixedChain};
use crate::math::MeanVar;
use crate::mixture::{ProductIsDensity, TiltedProductDensity};
use crate::model::{FixedSumModel, RareEventModel};

/// Estimation method tag carried by every report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Crude,
    AsmussenKroese,
    ParametricCe,
    SemiparametricIs,
    DominantTerm,
    Compound,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Crude => "crude",
            Method::AsmussenKroese => "ak",
            Method::ParametricCe => "param-ce",
            Method::SemiparametricIs => "semi-is",
            Method::DominantTerm => "semi-dom",
            Method::Compound => "compound",
        }
    }

    pub fn parse(s: &str) -> Result<Method> {
        Ok(match s {
            "crude" => Method::Crude,
            "ak" => Method::AsmussenKroese,
            "param-ce" => Method::ParametricCe,
            "semi-is" => Method::SemiparametricIs,
            "semi-dom" => Method::DominantTerm,
            "compound" => Method::Compound,
            other => {
                return Err(Error::Unsupported(format!(
                    "unknown method `{other}` (expected crude|ak|param-ce|semi-is|semi-dom|compound)"
                )))
            }
        })
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Point estimate with its sampling uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateReport {
    pub method: Method,
    pub estimate: f64,
    pub std_error: f64,
    /// std_error / estimate (0 when the standard error is 0).
    pub rel_error: f64,
    pub m: u64,
    pub wall_seconds: f64,
    pub seed: u64,
}

impl EstimateReport {
    fn from_stats(method: Method, stats: MeanVar, wall_seconds: f64, seed: u64) -> Self {
        Self::from_parts(method, stats.mean, stats.std_error(), stats.count, wall_seconds, seed)
    }

    fn from_parts(
        method: Method,
        estimate: f64,
        std_error: f64,
        m: u64,
        wall_seconds: f64,
        seed: u64,
    ) -> Self {
        let rel_error = if std_error == 0.0 { 0.0 } else { std_error / estimate };
        EstimateReport { method, estimate, std_error, rel_error, m, wall_seconds, seed }
    }

    /// Same numbers, different clock: used by pipelines whose wall time must
    /// include the preliminary chain and mixture construction.
    pub fn with_wall_seconds(mut self, wall_seconds: f64) -> Self {
        self.wall_seconds = wall_seconds;
        self
    }
}

/// Baseline/candidate pair with the relative-error ratio and the relative
/// time-variance product ratio²·(τ_baseline/τ_candidate).
#[derive(Debug, Clone, Copy)]
pub struct ComparisonReport {
    pub baseline: EstimateReport,
    pub candidate: EstimateReport,
    pub ratio: f64,
    pub rtvp: f64,
}

/// Compare a candidate estimator against a baseline.
pub fn compare(baseline: EstimateReport, candidate: EstimateReport) -> ComparisonReport {
    let ratio = baseline.rel_error / candidate.rel_error;
    let rtvp = ratio * ratio * (baseline.wall_seconds / candidate.wall_seconds);
    ComparisonReport { baseline, candidate, ratio, rtvp }
}

/// Crude Monte Carlo: mean of 1{S(X) > γ} over m i.i.d. draws from f, with
/// the binomial standard error.
pub fn crude_mc(model: &RareEventModel, m: u64, seed: u64) -> EstimateReport {
    let t0 = Instant::now();
    let stats = match model {
        RareEventModel::FixedSum(fixed) => run_replications(m, |i| {
            let mut rng = stream_rng(seed, StreamDomain::Replication, i);
            let mut sum = 0.0;
            for _ in 0..fixed.d {
                sum += fixed.law.sample(rng.sample(Open01));
            }
            if sum > fixed.gamma {
                1.0
            } else {
                0.0
            }
        }),
        RareEventModel::Compound(cm) => {
            let count_law = JumpLaw::geometric(cm.rho).expect("rho validated");
            run_replications(m, |i| {
                let mut rng = stream_rng(seed, StreamDomain::Replication, i);
                let r = count_law
                    .quantile(rng.sample(Open01))
                    .expect("open uniform is in (0,1)") as u64;
                let mut sum = 0.0;
                for _ in 0..r {
                    sum += cm.base_law.sample(rng.sample(Open01));
                    if sum > cm.gamma {
                        break;
                    }
                }
                if sum > cm.gamma {
                    1.0
                } else {
                    0.0
                }
            })
        }
    };
    // binomial standard error √(p̂(1−p̂)/m)
    let p = stats.mean;
    let se = (p * (1.0 - p) / m as f64).sqrt();
    EstimateReport::from_parts(Method::Crude, p, se, m, t0.elapsed().as_secs_f64(), seed)
}

/// Asmussen–Kroese conditional estimator:
/// mean over replications of d·F̄((γ − Σ_{j<d} X_j) ∨ max_{j<d} X_j).
pub fn ak_estimate(model: &FixedSumModel, m: u64, seed: u64) -> EstimateReport {
    let t0 = Instant::now();
    let d = model.d;
    let stats = run_replications(m, |i| {
        let mut rng = stream_rng(seed, StreamDomain::Replication, i);
        let mut sum = 0.0;
        let mut max = f64::NEG_INFINITY;
        for _ in 0..d - 1 {
            let x = model.law.sample(rng.sample(Open01));
            sum += x;
            max = max.max(x);
        }
        d as f64 * model.law.tail((model.gamma - sum).max(max))
    });
    EstimateReport::from_stats(Method::AsmussenKroese, stats, t0.elapsed().as_secs_f64(), seed)
}

/// Parametric cross-entropy estimator for the exponential case (Weibull α=1,
/// the one-parameter exponential family parametrized by the mean): tilt each
/// coordinate's mean to the chain's coordinate-wise sample mean, then run
/// importance sampling with likelihood ratio f(y; 1)/f(y; v̂).
pub fn parametric_ce_estimate(
    model: &FixedSumModel,
    chain: &FixedChain,
    m: u64,
    seed: u64,
) -> Result<EstimateReport> {
    match model.law {
        JumpLaw::Weibull { alpha } if alpha == 1.0 => {}
        other => {
            return Err(Error::Unsupported(format!(
                "parametric CE ships only for the exponential family (weibull alpha=1), got {}",
                other.to_kv()
            )))
        }
    }
    if chain.n == 0 {
        return Err(Error::EmptyChain);
    }
    let t0 = Instant::now();
    let means: Vec<f64> = (0..model.d).map(|i| chain.coordinate_mean(i)).collect();
    let gamma = model.gamma;
    let stats = run_replications(m, |i| {
        let mut rng = stream_rng(seed, StreamDomain::Replication, i);
        let mut sum = 0.0;
        let mut log_lr = 0.0;
        for &v in &means {
            let y = -v * (-rng.sample::<f64, _>(Open01)).ln_1p();
            sum += y;
            log_lr += v.ln() + y * (1.0 / v - 1.0);
        }
        if sum > gamma {
            log_lr.exp()
        } else {
            0.0
        }
    });
    Ok(EstimateReport::from_stats(
        Method::ParametricCe,
        stats,
        t0.elapsed().as_secs_f64(),
        seed,
    ))
}

/// Semiparametric importance sampling: draw from ĝ, average 1{S>γ}·f/ĝ.
/// With the exact last conditional the indicator holds by construction; it is
/// still evaluated so that floating-point boundary cases drop out cleanly.
pub fn semiparam_is_estimate(
    model: &FixedSumModel,
    g: &ProductIsDensity,
    m: u64,
    seed: u64,
) -> EstimateReport {
    let t0 = Instant::now();
    let stats = run_replications(m, |i| {
        let mut rng = stream_rng(seed, StreamDomain::Replication, i);
        let y = g.sample(&mut rng);
        if !model.event(&y) {
            return 0.0;
        }
        let log_g = g.log_density(&y).expect("sampled vector has the right dimension");
        if log_g == f64::NEG_INFINITY {
            return 0.0;
        }
        (model.ln_joint_density(&y) - log_g).exp()
    });
    EstimateReport::from_stats(Method::SemiparametricIs, stats, t0.elapsed().as_secs_f64(), seed)
}

/// Exactly computable share of the dominant-term decomposition:
/// 1 − F(γ)^d, evaluated as −expm1(d·ln F(γ)).
pub fn dominant_term(model: &FixedSumModel) -> f64 {
    let log_cdf = (-model.law.tail(model.gamma)).ln_1p();
    -(model.d as f64 * log_cdf).exp_m1()
}

/// Dominant-term estimator: 1 − F(γ)^d plus the importance-sampled residual
/// d·f(Y)/ĝ(Y)·1{S>γ, M_d<γ, Y_d = M_d} with Y drawn from the tilted ĝ. The
/// standard error covers the stochastic residual only; the dominant term is
/// exact, so the estimate never falls below it.
pub fn dominant_term_estimate(
    model: &FixedSumModel,
    g: &TiltedProductDensity,
    m: u64,
    seed: u64,
) -> EstimateReport {
    let t0 = Instant::now();
    let dom = dominant_term(model);
    let d = model.d;
    let ln_d = (d as f64).ln();
    let stats = run_replications(m, |i| {
        let mut rng = stream_rng(seed, StreamDomain::Replication, i);
        let Some(y) = g.sample(&mut rng) else {
            return 0.0;
        };
        let max = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !(model.event(&y) && max < model.gamma && y[d - 1] == max) {
            return 0.0;
        }
        let log_g = g.log_density(&y).expect("sampled vector has the right dimension");
        if log_g == f64::NEG_INFINITY {
            return 0.0;
        }
        (ln_d + model.ln_joint_density(&y) - log_g).exp()
    });
    let estimate = dom + stats.mean;
    let se = stats.std_error();
    EstimateReport::from_parts(
        Method::DominantTerm,
        estimate,
        se,
        m,
        t0.elapsed().as_secs_f64(),
        seed,
    )
}

/// Full semiparametric pipeline: chain, mixtures, then IS. The reported wall
/// time covers all three stages.
pub fn run_semiparametric(
    model: &FixedSumModel,
    n: usize,
    burn_in: Option<usize>,
    m: u64,
    seed: u64,
) -> Result<EstimateReport> {
    let t0 = Instant::now();
    let burn_in = burn_in.unwrap_or_else(|| default_burn_in(n));
    let chain = run_fixed_chain(model, n, burn_in, seed);
    let g = ProductIsDensity::build(&chain)?;
    let rep = semiparam_is_estimate(model, &g, m, seed);
    Ok(rep.with_wall_seconds(t0.elapsed().as_secs_f64()))
}

/// Full dominant-term pipeline. For d = 1 the residual event
/// {S > γ, M < γ} is empty and the estimator reduces to the exact F̄(γ).
pub fn run_dominant_term(
    model: &FixedSumModel,
    n: usize,
    burn_in: Option<usize>,
    m: u64,
    seed: u64,
) -> Result<EstimateReport> {
    let t0 = Instant::now();
    if model.d == 1 {
        let est = model.law.tail(model.gamma);
        return Ok(EstimateReport::from_parts(
            Method::DominantTerm,
            est,
            0.0,
            m,
            t0.elapsed().as_secs_f64(),
            seed,
        ));
    }
    if model.gamma <= model.law.support_min() {
        // F(γ) = 0: the maximum exceeds γ almost surely and the decomposition
        // collapses to its dominant term.
        return Ok(EstimateReport::from_parts(
            Method::DominantTerm,
            1.0,
            0.0,
            m,
            t0.elapsed().as_secs_f64(),
            seed,
        ));
    }
    let burn_in = burn_in.unwrap_or_else(|| default_burn_in(n));
    let chain = run_tilted_chain(model, n, burn_in, seed)?;
    let g = TiltedProductDensity::build(&chain)?;
    let rep = dominant_term_estimate(model, &g, m, seed);
    Ok(rep.with_wall_seconds(t0.elapsed().as_secs_f64()))
}

/// Full parametric-CE pipeline (exponential family only).
pub fn run_parametric_ce(
    model: &FixedSumModel,
    n: usize,
    burn_in: Option<usize>,
    m: u64,
    seed: u64,
) -> Result<EstimateReport> {
    let t0 = Instant::now();
    let burn_in = burn_in.unwrap_or_else(|| default_burn_in(n));
    let chain = run_fixed_chain(model, n, burn_in, seed);
    let rep = parametric_ce_estimate(model, &chain, m, seed)?;
    Ok(rep.with_wall_seconds(t0.elapsed().as_secs_f64()))
}

/// Run the compound estimator through the same report surface.
pub fn run_compound(
    model: &CompoundModel,
    n: usize,
    burn_in: Option<usize>,
    m: u64,
    seed: u64,
) -> EstimateReport {
    crate::compound::compound_estimate(model, n, burn_in, m, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for m in [
            Method::Crude,
            Method::AsmussenKroese,
            Method::ParametricCe,
            Method::SemiparametricIs,
            Method::DominantTerm,
            Method::Compound,
        ] {
            assert_eq!(Method::parse(m.name()).unwrap(), m);
        }
        assert!(Method::parse("bogus").is_err());
    }

    #[test]
    fn crude_mc_is_exact_when_gamma_tiny() {
        // gamma below any possible draw: every indicator is 1
        let model = RareEventModel::FixedSum(
            FixedSumModel::new(JumpLaw::pareto(1.0).unwrap(), 2, 0.5).unwrap(),
        );
        let rep = crude_mc(&model, 1000, 1);
        assert_eq!(rep.estimate, 1.0);
        assert_eq!(rep.std_error, 0.0);
        assert_eq!(rep.rel_error, 0.0);
    }

    #[test]
    fn ak_d1_is_deterministic() {
        let model = FixedSumModel::new(JumpLaw::weibull(0.5).unwrap(), 1, 9.0).unwrap();
        let rep = ak_estimate(&model, 100, 3);
        assert_eq!(rep.estimate, model.law.tail(9.0));
        assert_eq!(rep.std_error, 0.0);
    }

    #[test]
    fn parametric_ce_requires_exponential() {
        let model = FixedSumModel::new(JumpLaw::pareto(1.0).unwrap(), 2, 10.0).unwrap();
        let chain = run_fixed_chain(&model, 10, 0, 1);
        assert!(parametric_ce_estimate(&model, &chain, 10, 1).is_err());
    }

    #[test]
    fn parametric_ce_gamma_zeroish_gives_unit_estimate() {
        // gamma far below the bulk: the tilt stays near 1 and every draw hits
        let model = FixedSumModel::new(JumpLaw::weibull(1.0).unwrap(), 2, 1e-9).unwrap();
        let rep = run_parametric_ce(&model, 200, Some(10), 2000, 4).unwrap();
        assert!((rep.estimate - 1.0).abs() < 1e-3, "estimate {}", rep.estimate);
    }

    #[test]
    fn semiparam_d1_has_zero_variance() {
        let model = FixedSumModel::new(JumpLaw::weibull(1.0).unwrap(), 1, 5.0).unwrap();
        let rep = run_semiparametric(&model, 100, Some(10), 500, 2).unwrap();
        assert!((rep.estimate - (-5.0f64).exp()).abs() < 1e-15);
        assert_eq!(rep.rel_error, 0.0);
    }

    #[test]
    fn dominant_term_floor_and_trivial_cases() {
        let model = FixedSumModel::new(JumpLaw::pareto(1.0).unwrap(), 10, 10_010.0).unwrap();
        let dom = dominant_term(&model);
        // the naive 1−(1−γ⁻¹)^d reference carries ~1 ulp of cancellation
        let expect = 1.0 - (1.0 - 1.0 / 10_010.0f64).powi(10);
        assert!((dom - expect).abs() < 1e-15);

        let rep = run_dominant_term(&model, 200, Some(50), 2000, 5).unwrap();
        assert!(rep.estimate >= dom);

        // gamma at the support infimum: F(gamma) = 0, estimate exactly 1
        let low = FixedSumModel::new(JumpLaw::pareto(1.0).unwrap(), 4, 1.0).unwrap();
        let rep = run_dominant_term(&low, 10, Some(0), 10, 5).unwrap();
        assert_eq!(rep.estimate, 1.0);

        // d = 1: exact tail, no simulation
        let one = FixedSumModel::new(JumpLaw::weibull(0.5).unwrap(), 1, 25.0).unwrap();
        let rep = run_dominant_term(&one, 10, Some(0), 10, 5).unwrap();
        assert_eq!(rep.estimate, one.law.tail(25.0));
        assert_eq!(rep.std_error, 0.0);
    }

    #[test]
    fn comparison_definitions() {
        let base = EstimateReport {
            method: Method::AsmussenKroese,
            estimate: 1e-3,
            std_error: 2e-6,
            rel_error: 2e-3,
            m: 100,
            wall_seconds: 1.0,
            seed: 0,
        };
        let cand = EstimateReport {
            method: Method::DominantTerm,
            estimate: 1e-3,
            std_error: 1e-6,
            rel_error: 1e-3,
            m: 100,
            wall_seconds: 4.0,
            seed: 0,
        };
        let cmp = compare(base, cand);
        assert!((cmp.ratio - 2.0).abs() < 1e-12);
        assert!((cmp.rtvp - 1.0).abs() < 1e-12);
    }
}
