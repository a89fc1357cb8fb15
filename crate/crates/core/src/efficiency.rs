//! Numerical lab for the estimator's efficiency analysis: convolution-tail
//! oracles, the single-run second-moment ratio, the Laplace exponent φ, the
//! Pareto kernel recursions I_n/H_n with their derivative identity, and
//! light-tail relative-error trend checks.

use rand::distr::Open01;
use rand::Rng;

use crate::distributions::JumpLaw;
use crate::error::{Error, Result};
use crate::estimators::{run_semiparametric, EstimateReport};
use crate::exec::{run_replications, stream_rng, StreamDomain};
use crate::model::FixedSumModel;
use crate::quad::integrate;

/// How a d-fold convolution tail is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailMethod {
    /// Erlang closed form (Weibull α = 1, any d).
    ClosedFormGamma,
    /// Adaptive quadrature: direct for d ≤ 2, gridded recursion above.
    NumericConvolution,
    /// Empirical tail of simulated sums, with a reported binomial sigma.
    MonteCarlo { m: u64, seed: u64 },
}

#[derive(Debug, Clone)]
enum TailImpl {
    Exact1,
    ClosedFormGamma,
    Direct2,
    Gridded { grid: Vec<f64>, log_tails: Vec<f64> },
    MonteCarlo { sorted_sums: Vec<f64> },
}

/// F̄*ᵈ, the tail of the d-fold convolution of the jump law.
#[derive(Debug, Clone)]
pub struct ConvolutionTail {
    pub law: JumpLaw,
    pub d: usize,
    imp: TailImpl,
}

impl ConvolutionTail {
    pub fn build(law: JumpLaw, d: usize, x_max: f64, method: TailMethod) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("convolution order d must be >= 1".into()));
        }
        let imp = match method {
            _ if d == 1 => TailImpl::Exact1,
            TailMethod::ClosedFormGamma => {
                if law != (JumpLaw::Weibull { alpha: 1.0 }) {
                    return Err(Error::Unsupported(
                        "the Gamma closed form applies to weibull alpha=1 only".into(),
                    ));
                }
                TailImpl::ClosedFormGamma
            }
            TailMethod::NumericConvolution => {
                if d == 2 {
                    TailImpl::Direct2
                } else {
                    let (grid, log_tails) = build_gridded(law, d, x_max)?;
                    TailImpl::Gridded { grid, log_tails }
                }
            }
            TailMethod::MonteCarlo { m, seed } => {
                let mut sums = Vec::with_capacity(m as usize);
                let mut rng = stream_rng(seed, StreamDomain::Aux, 0xC0);
                for _ in 0..m {
                    let mut s = 0.0;
                    for _ in 0..d {
                        s += law.sample(rng.sample(Open01));
                    }
                    sums.push(s);
                }
                sums.sort_by(f64::total_cmp);
                TailImpl::MonteCarlo { sorted_sums: sums }
            }
        };
        Ok(ConvolutionTail { law, d, imp })
    }

    /// Pick a method: Erlang closed form where it applies, quadrature for
    /// small d, Monte Carlo beyond.
    pub fn auto(law: JumpLaw, d: usize, x_max: f64, mc_budget: u64, seed: u64) -> Result<Self> {
        if law == (JumpLaw::Weibull { alpha: 1.0 }) {
            return Self::build(law, d, x_max, TailMethod::ClosedFormGamma);
        }
        if d <= 4 {
            return Self::build(law, d, x_max, TailMethod::NumericConvolution);
        }
        Self::build(law, d, x_max, TailMethod::MonteCarlo { m: mc_budget, seed })
    }

    pub fn method_name(&self) -> &'static str {
        match self.imp {
            TailImpl::Exact1 => "exact",
            TailImpl::ClosedFormGamma => "closed-form-gamma",
            TailImpl::Direct2 | TailImpl::Gridded { .. } => "numeric-convolution",
            TailImpl::MonteCarlo { .. } => "monte-carlo",
        }
    }

    /// Binomial sigma of the Monte Carlo tail at x (None for exact methods).
    pub fn mc_sigma(&self, x: f64) -> Option<f64> {
        match &self.imp {
            TailImpl::MonteCarlo { sorted_sums } => {
                let p = self.tail(x);
                Some((p * (1.0 - p) / sorted_sums.len() as f64).sqrt())
            }
            _ => None,
        }
    }

    pub fn tail(&self, x: f64) -> f64 {
        if x <= self.d as f64 * self.law.support_min() {
            return 1.0;
        }
        match &self.imp {
            TailImpl::Exact1 => self.law.tail(x),
            TailImpl::ClosedFormGamma => statrs::function::gamma::gamma_ur(self.d as f64, x),
            TailImpl::Direct2 => twofold_tail(self.law, x),
            TailImpl::Gridded { grid, log_tails } => {
                interp_log_tail(grid, log_tails, x).exp()
            }
            TailImpl::MonteCarlo { sorted_sums } => {
                let above = sorted_sums.len() - sorted_sums.partition_point(|&s| s <= x);
                above as f64 / sorted_sums.len() as f64
            }
        }
    }

    pub fn log_tail(&self, x: f64) -> f64 {
        if x <= self.d as f64 * self.law.support_min() {
            return 0.0;
        }
        match &self.imp {
            TailImpl::Exact1 => self.law.log_tail(x),
            TailImpl::Gridded { grid, log_tails } => interp_log_tail(grid, log_tails, x),
            _ => self.tail(x).ln(),
        }
    }
}

/// P(X₁+X₂ > x) by the positive split on whether both halves exceed x/2:
/// 2∫_{inf}^{x/2} f(t) F̄(x−t) dt + F̄(x/2)². No cancellation anywhere.
fn twofold_tail(law: JumpLaw, x: f64) -> f64 {
    let inf = law.support_min();
    let half = 0.5 * x;
    let both = law.tail(half);
    let cross = if half > inf {
        integrate(|t| law.density(t) * law.tail(x - t), inf, half, 1e-9, 1e-300).value
    } else {
        0.0
    };
    (2.0 * cross + both * both).min(1.0)
}

/// Level-by-level grids for d ≥ 3: each level integrates the previous one.
fn build_gridded(law: JumpLaw, d: usize, x_max: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let inf = law.support_min();
    if !(x_max > d as f64 * inf) {
        return Err(Error::Domain(format!(
            "grid extent {x_max} does not clear the support minimum of the {d}-fold sum"
        )));
    }
    const POINTS: usize = 1025;
    let make_grid = |k: usize| -> Vec<f64> {
        let lo = k as f64 * inf;
        let span = x_max - lo;
        // log-spaced offsets so power-law tails interpolate near-linearly
        let mut g: Vec<f64> = (0..POINTS)
            .map(|j| {
                let t = j as f64 / (POINTS - 1) as f64;
                lo + span * 1e-9f64.powf(1.0 - t)
            })
            .collect();
        g[0] = lo;
        g[POINTS - 1] = x_max;
        g
    };

    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None; // level k-1 grid
    for k in 3..=d {
        let grid = make_grid(k);
        let eval_prev = |y: f64| -> f64 {
            if y <= (k - 1) as f64 * inf {
                return 1.0;
            }
            match &prev {
                None => twofold_tail(law, y),
                Some((g, lt)) => interp_log_tail(g, lt, y).exp(),
            }
        };
        let mut log_tails = Vec::with_capacity(grid.len());
        let mut running = 1.0f64;
        for &x in &grid {
            let t0 = x - (k - 1) as f64 * inf;
            let tail = if t0 <= inf {
                1.0
            } else {
                let cross = integrate(
                    |t| law.density(t) * eval_prev(x - t),
                    inf,
                    t0,
                    1e-8,
                    1e-300,
                )
                .value;
                (cross + law.tail(t0)).min(1.0)
            };
            // quadrature jitter must not break monotonicity
            running = running.min(tail);
            log_tails.push(running.ln());
        }
        prev = Some((grid, log_tails));
    }
    Ok(prev.expect("d >= 3 builds at least one level"))
}

fn interp_log_tail(grid: &[f64], log_tails: &[f64], x: f64) -> f64 {
    if x <= grid[0] {
        return log_tails[0];
    }
    let last = grid.len() - 1;
    if x >= grid[last] {
        return log_tails[last];
    }
    let j = grid.partition_point(|&g| g <= x);
    let (x0, x1) = (grid[j - 1], grid[j]);
    let (y0, y1) = (log_tails[j - 1], log_tails[j]);
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// Monte Carlo estimate of E Z²/ℓ² for the idealized estimator whose
/// importance density is the product of the true marginals:
///
///   E Z² = E_f [ 1{S>γ} Π_i F̄*ᵈ(γ)/F̄*^{(d−1)}(γ−X_i) ].
///
/// Draws come from f; the convolution tails are supplied by the caller and
/// fix the oracle mode. Returns (ratio, std error of the ratio).
pub fn second_moment_ratio(
    model: &FixedSumModel,
    tail_d: &ConvolutionTail,
    tail_dm1: &ConvolutionTail,
    m: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    if model.d == 1 {
        return Ok((1.0, 0.0));
    }
    if tail_d.d != model.d || tail_dm1.d != model.d - 1 {
        return Err(Error::DimensionMismatch { expected: model.d, got: tail_d.d });
    }
    if tail_d.law != model.law || tail_dm1.law != model.law {
        return Err(Error::Domain("convolution tails were built for a different law".into()));
    }
    let gamma = model.gamma;
    let log_ell = tail_d.log_tail(gamma);
    if log_ell == f64::NEG_INFINITY {
        return Err(Error::Domain(format!(
            "the {}-fold tail underflows at gamma = {gamma}",
            model.d
        )));
    }
    let d = model.d;
    let stats = run_replications(m, |i| {
        let mut rng = stream_rng(seed, StreamDomain::Replication, i);
        let mut x = Vec::with_capacity(d);
        for _ in 0..d {
            x.push(model.law.sample(rng.sample(Open01)));
        }
        if !model.event(&x) {
            return 0.0;
        }
        // value/ℓ² = exp((d−2)·ln ℓ − Σ ln F̄^{(d−1)}(γ−x_i))
        let mut log_v = (d as f64 - 2.0) * log_ell;
        for &xi in &x {
            log_v -= tail_dm1.log_tail(gamma - xi);
        }
        log_v.exp()
    });
    Ok((stats.mean, stats.std_error()))
}

/// Laplace exponent φ(u) = d − 2 + Σ (u_i^α − (1−u_i)^α) on
/// D̄ = {0 ≤ u_i ≤ 1, Σu_i ≥ 1}.
pub fn phi(u: &[f64], alpha: f64) -> Result<f64> {
    if u.is_empty() {
        return Err(Error::Domain("phi needs at least one coordinate".into()));
    }
    if u.iter().any(|&v| !(0.0..=1.0).contains(&v)) || u.iter().sum::<f64>() < 1.0 - 1e-12 {
        return Err(Error::Domain("phi argument is outside the closed domain D̄".into()));
    }
    let d = u.len() as f64;
    Ok(d - 2.0 + u.iter().map(|&v| v.powf(alpha) - (1.0 - v).powf(alpha)).sum::<f64>())
}

/// φ at the boundary minimizer u* = (1/d, ..., 1/d):
/// d − 2 + d^{1−α} − d^{1−α}(d−1)^α. Zero at d = 2, positive for d ≥ 3.
pub fn phi_star(d: usize, alpha: f64) -> f64 {
    let d = d as f64;
    d - 2.0 + d.powf(1.0 - alpha) - d.powf(1.0 - alpha) * (d - 1.0).powf(alpha)
}

/// Pareto kernel L(y) = (1−y)^α y^{−(α+1)} on (0, 1].
pub fn l_kernel(y: f64, alpha: f64) -> f64 {
    debug_assert!(y > 0.0 && y <= 1.0);
    (1.0 - y).powf(alpha) * y.powf(-(alpha + 1.0))
}

/// Largest recursion depth supported by the nested quadrature.
pub const MAX_KERNEL_DEPTH: usize = 4;

/// Nested integrals behind the Pareto second-moment bounds:
/// I_1(γ, ζ) = ∫_{ζ∨γ⁻¹}^1 L(y) dy and
/// I_n(γ, ζ) = ∫_{γ⁻¹}^{ζ−(n−2)γ⁻¹} L(y) I_{n−1}(γ, ζ−y) dy.
/// Empty ranges integrate to zero.
pub fn i_n(gamma: f64, zeta: f64, n: usize, alpha: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("recursion depth n must be >= 1".into()));
    }
    if n > MAX_KERNEL_DEPTH {
        return Err(Error::Unsupported(format!(
            "I_n is supported for n <= {MAX_KERNEL_DEPTH}; nested quadrature cost explodes beyond"
        )));
    }
    if !zeta.is_finite() || !(gamma > 1.0) {
        return Err(Error::Domain(format!(
            "I_n needs gamma > 1 and finite zeta (got gamma={gamma}, zeta={zeta})"
        )));
    }
    Ok(i_n_inner(gamma, zeta, n, alpha))
}

fn i_n_inner(gamma: f64, zeta: f64, n: usize, alpha: f64) -> f64 {
    let inv = 1.0 / gamma;
    if n == 1 {
        let lo = zeta.max(inv);
        if lo >= 1.0 {
            return 0.0;
        }
        return integrate(|y| l_kernel(y, alpha), lo, 1.0, 1e-9, 1e-300).value;
    }
    let hi = (zeta - (n as f64 - 2.0) * inv).min(1.0);
    if hi <= inv {
        return 0.0;
    }
    integrate(
        |y| l_kernel(y, alpha) * i_n_inner(gamma, zeta - y, n - 1, alpha),
        inv,
        hi,
        1e-8,
        1e-300,
    )
    .value
}

/// H_n(γ) = αⁿ γ^{−nα} I_n(γ, 1).
pub fn h_n(gamma: f64, n: usize, alpha: f64) -> Result<f64> {
    let i = i_n(gamma, 1.0, n, alpha)?;
    Ok(alpha.powi(n as i32) * gamma.powf(-(n as f64) * alpha) * i)
}

/// Relative residual of the derivative identity
/// ∂I_n/∂γ = n·L(γ⁻¹)·I_{n−1}(γ, ζ−γ⁻¹)·γ⁻², by central finite differences
/// at step h = γ·1e−5. Supported for n ∈ {2, 3}.
pub fn check_derivative_identity(gamma: f64, zeta: f64, n: usize, alpha: f64) -> Result<f64> {
    if !(2..=3).contains(&n) {
        return Err(Error::Unsupported(
            "the derivative identity check is implemented for n in {2, 3}".into(),
        ));
    }
    if zeta < n as f64 / gamma {
        return Err(Error::Domain(format!(
            "derivative identity needs zeta >= n/gamma (got zeta={zeta}, n/gamma={})",
            n as f64 / gamma
        )));
    }
    let h = gamma * 1e-5;
    let plus = i_n(gamma + h, zeta, n, alpha)?;
    let minus = i_n(gamma - h, zeta, n, alpha)?;
    let fd = (plus - minus) / (2.0 * h);
    let inv = 1.0 / gamma;
    let rhs = n as f64 * l_kernel(inv, alpha) * i_n(gamma, zeta - inv, n - 1, alpha)? / (gamma * gamma);
    Ok((fd - rhs).abs() / rhs.abs())
}

/// A (γ, value) curve with a flag for being eventually decreasing
/// (strictly, across the last three grid points).
#[derive(Debug, Clone)]
pub struct TrendCurve {
    pub points: Vec<(f64, f64)>,
    pub eventually_decreasing: bool,
}

/// Evaluates I_n(γ, 1)/(γ^{α(n−2)} ln γ) on the grid; the statement being
/// probed is that this ratio tends to zero, so the desk-scale check is that
/// it decreases across the last three grid points.
pub fn pareto_log_efficiency_trend(alpha: f64, n: usize, gammas: &[f64]) -> Result<TrendCurve> {
    let mut points = Vec::with_capacity(gammas.len());
    for &g in gammas {
        let value = i_n(g, 1.0, n, alpha)? / (g.powf(alpha * (n as f64 - 2.0)) * g.ln());
        points.push((g, value));
    }
    Ok(TrendCurve { eventually_decreasing: last_three_decreasing(&points), points })
}

fn last_three_decreasing(points: &[(f64, f64)]) -> bool {
    if points.len() < 3 {
        return false;
    }
    let tail = &points[points.len() - 3..];
    tail[0].1 > tail[1].1 && tail[1].1 > tail[2].1
}

/// One grid point of the light-tail trend run.
#[derive(Debug, Clone, Copy)]
pub struct LightTailPoint {
    pub gamma: f64,
    pub report: EstimateReport,
    /// rel_error · ℓ̂^{1/4}; the estimator is logarithmically efficient when
    /// the relative error grows slower than ℓ^{−ε/2} for every ε, probed here
    /// at ε = 1/2.
    pub normalized_rel_error: f64,
}

/// Full-pipeline relative-error trend for Weibull α ≥ 1.
#[derive(Debug, Clone)]
pub struct LightTailTrend {
    pub points: Vec<LightTailPoint>,
    /// normalized_rel_error nonincreasing across the last three grid points.
    pub trend_nonincreasing: bool,
}

pub fn lighttail_relative_error_trend(
    alpha: f64,
    d: usize,
    gammas: &[f64],
    n: usize,
    m: u64,
    seed: u64,
) -> Result<LightTailTrend> {
    if alpha < 1.0 {
        return Err(Error::Domain(format!(
            "the light-tail trend is defined for weibull alpha >= 1, got {alpha}"
        )));
    }
    let law = JumpLaw::weibull(alpha)?;
    let mut points = Vec::with_capacity(gammas.len());
    for &gamma in gammas {
        let model = FixedSumModel::new(law, d, gamma)?;
        let report = run_semiparametric(&model, n, None, m, seed)?;
        let normalized_rel_error = report.rel_error * report.estimate.powf(0.25);
        points.push(LightTailPoint { gamma, report, normalized_rel_error });
    }
    let trend_nonincreasing = if points.len() < 3 {
        false
    } else {
        let t = &points[points.len() - 3..];
        t[0].normalized_rel_error >= t[1].normalized_rel_error
            && t[1].normalized_rel_error >= t[2].normalized_rel_error
    };
    Ok(LightTailTrend { points, trend_nonincreasing })
}

/// Small discrete distribution on a 3×3 grid for the product-form optimality
/// check.
#[derive(Debug, Clone, Copy)]
pub struct DiscreteToy {
    pub probs: [[f64; 3]; 3],
}

impl DiscreteToy {
    /// Independent coordinates: rows (0.5, 0.3, 0.2) ⊗ cols (0.2, 0.2, 0.6).
    pub fn product_form() -> Self {
        let rows = [0.5, 0.3, 0.2];
        let cols = [0.2, 0.2, 0.6];
        let mut probs = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                probs[i][j] = rows[i] * cols[j];
            }
        }
        DiscreteToy { probs }
    }

    /// Perfect positive dependence on the diagonal.
    pub fn diagonal() -> Self {
        let mut probs = [[0.0; 3]; 3];
        for (i, row) in probs.iter_mut().enumerate() {
            row[i] = 1.0 / 3.0;
        }
        DiscreteToy { probs }
    }

    pub fn uniform() -> Self {
        DiscreteToy { probs: [[1.0 / 9.0; 3]; 3] }
    }

    pub fn row_marginal(&self) -> [f64; 3] {
        let mut r = [0.0; 3];
        for i in 0..3 {
            r[i] = self.probs[i].iter().sum();
        }
        r
    }

    pub fn col_marginal(&self) -> [f64; 3] {
        let mut c = [0.0; 3];
        for j in 0..3 {
            c[j] = self.probs.iter().map(|row| row[j]).sum();
        }
        c
    }

    /// KL(π ‖ q_rows ⊗ q_cols); terms with π = 0 contribute nothing.
    pub fn kl_to_product(&self, q_rows: &[f64; 3], q_cols: &[f64; 3]) -> f64 {
        let mut kl = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let p = self.probs[i][j];
                if p > 0.0 {
                    kl += p * (p.ln() - q_rows[i].ln() - q_cols[j].ln());
                }
            }
        }
        kl
    }
}

/// True iff the product of marginals attains the minimal KL(π‖q) over
/// `trials` random product distributions (within 1e-12).
pub fn ce_optimality_check(toy: &DiscreteToy, trials: usize, seed: u64) -> bool {
    let kl_marginals = toy.kl_to_product(&toy.row_marginal(), &toy.col_marginal());
    let mut rng = stream_rng(seed, StreamDomain::Aux, 0xCE);
    for _ in 0..trials {
        let mut draw = || {
            let mut v = [0.0f64; 3];
            let mut sum = 0.0;
            for x in v.iter_mut() {
                *x = -(rng.sample::<f64, _>(Open01)).ln();
                sum += *x;
            }
            for x in v.iter_mut() {
                *x /= sum;
            }
            v
        };
        let q_rows = draw();
        let q_cols = draw();
        if toy.kl_to_product(&q_rows, &q_cols) < kl_marginals - 1e-12 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_star_closed_values() {
        // any alpha at d = 2 gives exactly zero
        for a in [0.1, 0.25, 0.5, 0.75, 0.9] {
            assert_eq!(phi_star(2, a), 0.0);
        }
        // d = 10, alpha = 0.5: 8 + √10 − √90
        let expect = 8.0 + 10f64.sqrt() - 90f64.sqrt();
        assert!((phi_star(10, 0.5) - expect).abs() < 1e-12);
    }

    #[test]
    fn phi_domain_checks() {
        assert!(phi(&[0.2, 0.2], 0.5).is_err()); // sum < 1
        assert!(phi(&[1.5, 0.2], 0.5).is_err()); // coordinate > 1
        let v = phi(&[0.5, 0.5], 0.5).unwrap();
        assert!((v - phi_star(2, 0.5)).abs() < 1e-12);
    }

    #[test]
    fn l_kernel_midpoint() {
        // L(1/2) = (1/2)^α (1/2)^{−α−1} = 2 for every α
        for a in [0.3, 0.5, 1.0, 2.0] {
            assert!((l_kernel(0.5, a) - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn i1_closed_form_alpha_one() {
        // α = 1: ∫ L = ∫ (1−y)/y² dy = [−1/y − ln y], I₁(γ, 0.5) = 1/0.5 + ln 0.5 − 1
        let got = i_n(10.0, 0.5, 1, 1.0).unwrap();
        let expect = 1.0 / 0.5 + 0.5f64.ln() - 1.0;
        assert!((got - expect).abs() < 1e-9, "{got} vs {expect}");
        // empty range
        assert_eq!(i_n(10.0, 1.0, 1, 1.0).unwrap(), 0.0);
        // unsupported depth
        assert!(i_n(10.0, 1.0, 5, 1.0).is_err());
    }

    #[test]
    fn erlang_closed_form_tail() {
        let law = JumpLaw::weibull(1.0).unwrap();
        let t = ConvolutionTail::build(law, 3, 50.0, TailMethod::ClosedFormGamma).unwrap();
        // P(Gamma(3,1) > 2) = e^-2 (1 + 2 + 2)
        let expect = (-2.0f64).exp() * 5.0;
        assert!((t.tail(2.0) - expect).abs() < 1e-12);
        assert_eq!(t.tail(-1.0), 1.0);
    }

    #[test]
    fn second_moment_ratio_d1_is_exact() {
        let law = JumpLaw::pareto(1.0).unwrap();
        let model = FixedSumModel::new(law, 1, 10.0).unwrap();
        let t1 = ConvolutionTail::build(law, 1, 20.0, TailMethod::NumericConvolution).unwrap();
        let (r, se) = second_moment_ratio(&model, &t1, &t1, 100, 1).unwrap();
        assert_eq!((r, se), (1.0, 0.0));
    }

    #[test]
    fn ce_optimality_fixtures() {
        assert!(ce_optimality_check(&DiscreteToy::product_form(), 2000, 1));
        assert!(ce_optimality_check(&DiscreteToy::diagonal(), 2000, 2));
        assert!(ce_optimality_check(&DiscreteToy::uniform(), 2000, 3));
        // product-form toy: the marginals reproduce π exactly, KL = 0
        let toy = DiscreteToy::product_form();
        let kl = toy.kl_to_product(&toy.row_marginal(), &toy.col_marginal());
        assert!(kl.abs() < 1e-15);
    }
}
