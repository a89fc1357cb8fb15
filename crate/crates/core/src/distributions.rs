//! Univariate jump-distribution primitives.
//!
//! Four families are supported: Weibull with tail e^{−x^α}, Pareto on [1,∞)
//! with tail x^{−α}, Weibull truncated to (0, upper), and the geometric law on
//! {1, 2, ...} with pmf ρ(1−ρ)^{r−1}.
//!
//! Everything downstream consumes `log_tail` rather than `tail`: the mixture
//! weights 1/F̄(c) reach e^{γ^α} and overflow doubles long before the threshold
//! regimes of interest (γ up to 1e15), while −log F̄ stays tame. Inversion
//! formulas are written in terms of (1−u) so that no accuracy is lost as
//! u → 1.

use crate::error::{Error, Result};

/// A univariate jump distribution (family plus parameters).
///
/// Values are immutable and all operations are pure functions; uniform
/// variates are always passed in by the caller, so a law can be shared freely
/// across threads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JumpLaw {
    /// Density α x^{α−1} e^{−x^α} on (0, ∞).
    Weibull { alpha: f64 },
    /// Density α/x^{α+1} on [1, ∞).
    Pareto { alpha: f64 },
    /// Weibull(α) conditioned on (0, upper).
    TruncatedWeibull { alpha: f64, upper: f64 },
    /// pmf ρ(1−ρ)^{r−1} on r = 1, 2, ...
    Geometric { rho: f64 },
}

impl JumpLaw {
    pub fn weibull(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "weibull alpha must be positive and finite, got {alpha}"
            )));
        }
        Ok(JumpLaw::Weibull { alpha })
    }

    pub fn pareto(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "pareto alpha must be positive and finite, got {alpha}"
            )));
        }
        Ok(JumpLaw::Pareto { alpha })
    }

    pub fn truncated_weibull(alpha: f64, upper: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "truncated weibull alpha must be positive and finite, got {alpha}"
            )));
        }
        if !(upper > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "truncated weibull upper cutoff must be positive, got {upper}"
            )));
        }
        if upper.is_infinite() {
            return Ok(JumpLaw::Weibull { alpha });
        }
        Ok(JumpLaw::TruncatedWeibull { alpha, upper })
    }

    pub fn geometric(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "geometric rho must lie in (0, 1], got {rho}"
            )));
        }
        Ok(JumpLaw::Geometric { rho })
    }

    /// Infimum of the support (0 for Weibull variants, 1 for Pareto and
    /// geometric). Truncation points below it clamp to the infimum.
    pub fn support_min(&self) -> f64 {
        match self {
            JumpLaw::Weibull { .. } | JumpLaw::TruncatedWeibull { .. } => 0.0,
            JumpLaw::Pareto { .. } | JumpLaw::Geometric { .. } => 1.0,
        }
    }

    /// Supremum of the support (+∞ unless truncated).
    pub fn support_max(&self) -> f64 {
        match self {
            JumpLaw::TruncatedWeibull { upper, .. } => *upper,
            _ => f64::INFINITY,
        }
    }

    /// Density (or pmf) at `x`; zero outside the support.
    pub fn density(&self, x: f64) -> f64 {
        let ld = self.ln_density(x);
        if ld == f64::NEG_INFINITY {
            0.0
        } else {
            ld.exp()
        }
    }

    /// ln density at `x`; −∞ outside the support.
    pub fn ln_density(&self, x: f64) -> f64 {
        match *self {
            JumpLaw::Weibull { alpha } => {
                if x <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    alpha.ln() + (alpha - 1.0) * x.ln() - x.powf(alpha)
                }
            }
            JumpLaw::Pareto { alpha } => {
                if x < 1.0 {
                    f64::NEG_INFINITY
                } else {
                    alpha.ln() - (alpha + 1.0) * x.ln()
                }
            }
            JumpLaw::TruncatedWeibull { alpha, upper } => {
                if x <= 0.0 || x >= upper {
                    f64::NEG_INFINITY
                } else {
                    let whole = JumpLaw::Weibull { alpha };
                    whole.ln_density(x) - ln_weibull_cdf(alpha, upper)
                }
            }
            JumpLaw::Geometric { rho } => {
                if x < 1.0 || x.fract() != 0.0 {
                    f64::NEG_INFINITY
                } else if rho == 1.0 {
                    if x == 1.0 {
                        0.0
                    } else {
                        f64::NEG_INFINITY
                    }
                } else {
                    rho.ln() + (x - 1.0) * (-rho).ln_1p()
                }
            }
        }
    }

    /// P(X ≤ x).
    pub fn cdf(&self, x: f64) -> f64 {
        1.0 - self.tail(x)
    }

    /// P(X > x); equals 1 below the support infimum and is nonincreasing.
    pub fn tail(&self, x: f64) -> f64 {
        self.log_tail(x).exp()
    }

    /// ln P(X > x), exact in the log domain. Stays finite wherever the linear
    /// tail underflows (Weibull x up to 1e15 and beyond).
    pub fn log_tail(&self, x: f64) -> f64 {
        match *self {
            JumpLaw::Weibull { alpha } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -x.powf(alpha)
                }
            }
            JumpLaw::Pareto { alpha } => {
                if x <= 1.0 {
                    0.0
                } else {
                    -alpha * x.ln()
                }
            }
            JumpLaw::TruncatedWeibull { alpha, upper } => {
                if x <= 0.0 {
                    0.0
                } else if x >= upper {
                    f64::NEG_INFINITY
                } else {
                    // ln (e^{−x^α} − e^{−U^α}) − ln(1 − e^{−U^α}) with the
                    // difference factored so nothing underflows.
                    let xa = x.powf(alpha);
                    let ua = upper.powf(alpha);
                    -xa + (-(-(ua - xa)).exp_m1()).ln() - ln_weibull_cdf(alpha, upper)
                }
            }
            JumpLaw::Geometric { rho } => {
                let k = x.max(0.0).floor();
                if k == 0.0 {
                    0.0
                } else if rho == 1.0 {
                    f64::NEG_INFINITY
                } else {
                    k * (-rho).ln_1p()
                }
            }
        }
    }

    /// ln P(lo < X < hi) for the continuous families.
    pub fn log_interval_mass(&self, lo: f64, hi: f64) -> f64 {
        debug_assert!(
            !matches!(self, JumpLaw::Geometric { .. }),
            "interval mass is defined for continuous laws only"
        );
        let lo = lo.max(self.support_min());
        if !(lo < hi) {
            return f64::NEG_INFINITY;
        }
        crate::math::log_diff_exp(self.log_tail(lo), self.log_tail(hi))
    }

    /// F^{−1}(u) for u in (0, 1).
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!("quantile argument must be in (0,1), got {u}")));
        }
        Ok(match *self {
            JumpLaw::Weibull { alpha } => (-(-u).ln_1p()).powf(1.0 / alpha),
            JumpLaw::Pareto { alpha } => (1.0 - u).powf(-1.0 / alpha),
            JumpLaw::TruncatedWeibull { alpha, upper } => {
                // invert F_w(x)/F_w(upper) = u
                let w = -(-upper.powf(alpha)).exp_m1();
                (-(-u * w).ln_1p()).powf(1.0 / alpha)
            }
            JumpLaw::Geometric { rho } => {
                if rho == 1.0 {
                    1.0
                } else {
                    // smallest r with 1 − (1−ρ)^r ≥ u
                    let r = ((-u).ln_1p() / (-rho).ln_1p()).ceil();
                    r.max(1.0)
                }
            }
        })
    }

    /// Draw X conditioned on X > max(c, support infimum) by closed-form
    /// inversion; a deterministic function of (law, c, u) for u in (0, 1).
    /// The returned value is nudged strictly above the cutoff when inversion
    /// rounds onto it.
    pub fn sample_truncated_above(&self, c: f64, u: f64) -> f64 {
        debug_assert!(u > 0.0 && u < 1.0);
        match *self {
            JumpLaw::Weibull { alpha } => {
                let c_eff = c.max(0.0);
                let ca = c_eff.powf(alpha);
                (ca - (-u).ln_1p()).powf(1.0 / alpha).max(c_eff.next_up())
            }
            JumpLaw::Pareto { alpha } => {
                let c_eff = c.max(1.0);
                (c_eff * (1.0 - u).powf(-1.0 / alpha)).max(c_eff.next_up())
            }
            JumpLaw::TruncatedWeibull { alpha, upper } => {
                sample_weibull_interval(alpha, c.max(0.0), upper, u)
            }
            JumpLaw::Geometric { rho } => {
                let base = c.max(0.0).floor();
                let shift = JumpLaw::Geometric { rho }
                    .quantile(u)
                    .expect("u checked in (0,1)");
                base + shift
            }
        }
    }

    /// Draw X conditioned on lo < X < hi by inversion of the restricted cdf.
    /// The draw is clamped into the representable open interior; an interval
    /// that holds no interior double (a threshold collapse near γ in the
    /// extreme heavy-tail regimes) is a domain error.
    pub fn sample_truncated_interval(&self, lo: f64, hi: f64, u: f64) -> Result<f64> {
        debug_assert!(u > 0.0 && u < 1.0);
        let lo_eff = lo.max(self.support_min());
        let hi_eff = hi.min(self.support_max());
        if !(lo_eff < hi_eff) {
            return Err(Error::Domain(format!(
                "truncation interval ({lo}, {hi}) misses the support of {self:?}"
            )));
        }
        if let JumpLaw::Weibull { .. } | JumpLaw::Pareto { .. } | JumpLaw::TruncatedWeibull { .. } =
            self
        {
            if lo_eff.next_up() > hi_eff.next_down() {
                return Err(Error::Domain(format!(
                    "interval ({lo}, {hi}) holds no representable interior point"
                )));
            }
        }
        Ok(match *self {
            JumpLaw::Weibull { alpha } | JumpLaw::TruncatedWeibull { alpha, .. } => {
                sample_weibull_interval(alpha, lo_eff, hi_eff, u)
                    .clamp(lo_eff.next_up(), hi_eff.next_down())
            }
            JumpLaw::Pareto { alpha } => {
                let a = lo_eff.powf(-alpha);
                let b = if hi_eff.is_infinite() { 0.0 } else { hi_eff.powf(-alpha) };
                (a - u * (a - b))
                    .powf(-1.0 / alpha)
                    .clamp(lo_eff.next_up(), hi_eff.next_down())
            }
            JumpLaw::Geometric { rho } => {
                // support inside (lo, hi): {k_lo+1, ..., k_hi}
                let k_lo = lo_eff.max(0.0).floor();
                let k_hi = if hi_eff.is_infinite() {
                    f64::INFINITY
                } else if hi_eff.fract() == 0.0 {
                    hi_eff - 1.0
                } else {
                    hi_eff.floor()
                };
                if k_hi < k_lo + 1.0 {
                    return Err(Error::Domain(format!(
                        "no geometric support in ({lo}, {hi})"
                    )));
                }
                if rho == 1.0 {
                    1.0
                } else {
                    let lq = (-rho).ln_1p();
                    // invert q^{k_lo} − u(q^{k_lo} − q^{k_hi}) = q^r
                    let span = if k_hi.is_infinite() {
                        1.0
                    } else {
                        -((k_hi - k_lo) * lq).exp_m1()
                    };
                    let r = k_lo + ((-u * span).ln_1p() / lq).ceil();
                    r.clamp(k_lo + 1.0, k_hi)
                }
            }
        })
    }

    /// Plain draw from the law (inversion), for u in (0, 1).
    pub fn sample(&self, u: f64) -> f64 {
        self.sample_truncated_above(f64::NEG_INFINITY, u)
    }

    /// Flat key-value form, e.g. `family=weibull alpha=0.5`.
    pub fn to_kv(&self) -> String {
        match *self {
            JumpLaw::Weibull { alpha } => format!("family=weibull alpha={alpha}"),
            JumpLaw::Pareto { alpha } => format!("family=pareto alpha={alpha}"),
            JumpLaw::TruncatedWeibull { alpha, upper } => {
                format!("family=truncated-weibull alpha={alpha} upper={upper}")
            }
            JumpLaw::Geometric { rho } => format!("family=geometric rho={rho}"),
        }
    }

    /// Parse the key-value form produced by [`JumpLaw::to_kv`].
    pub fn from_kv(s: &str) -> Result<Self> {
        let mut family = None;
        let mut alpha = None;
        let mut rho = None;
        let mut upper = None;
        for token in s.split_whitespace() {
            let (key, value) = token.split_once('=').ok_or_else(|| {
                Error::Domain(format!("expected key=value token, got `{token}`"))
            })?;
            match key {
                "family" => family = Some(value.to_string()),
                "alpha" => alpha = Some(parse_num(key, value)?),
                "rho" => rho = Some(parse_num(key, value)?),
                "upper" => upper = Some(parse_num(key, value)?),
                other => {
                    return Err(Error::Domain(format!("unknown jump-law key `{other}`")));
                }
            }
        }
        let family = family.ok_or_else(|| Error::Domain("missing `family` key".into()))?;
        let need_alpha = || alpha.ok_or_else(|| Error::Domain("missing `alpha` key".into()));
        match family.as_str() {
            "weibull" => JumpLaw::weibull(need_alpha()?),
            "pareto" => JumpLaw::pareto(need_alpha()?),
            "truncated-weibull" => {
                let upper =
                    upper.ok_or_else(|| Error::Domain("missing `upper` key".into()))?;
                JumpLaw::truncated_weibull(need_alpha()?, upper)
            }
            "geometric" => {
                let rho = rho.ok_or_else(|| Error::Domain("missing `rho` key".into()))?;
                JumpLaw::geometric(rho)
            }
            other => Err(Error::Domain(format!("unknown family `{other}`"))),
        }
    }

    /// Short family name used in reports.
    pub fn family_name(&self) -> &'static str {
        match self {
            JumpLaw::Weibull { .. } => "weibull",
            JumpLaw::Pareto { .. } => "pareto",
            JumpLaw::TruncatedWeibull { .. } => "truncated-weibull",
            JumpLaw::Geometric { .. } => "geometric",
        }
    }
}

fn parse_num(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| Error::Domain(format!("value for `{key}` is not a number: `{value}`")))
}

/// ln F_w(x) = ln(1 − e^{−x^α}) for the untruncated Weibull.
fn ln_weibull_cdf(alpha: f64, x: f64) -> f64 {
    (-(-x.powf(alpha)).exp_m1()).ln()
}

/// Inversion on the Weibull cdf restricted to (lo, hi), carried out in the
/// exponent variable x^α so that cutoffs with e^{−hi^α} = 0 lose nothing.
/// Finite upper bounds clamp the draw below `hi`; an interval squeezed to
/// floating-point width comes back as its largest representable point and is
/// left to the caller's event checks.
fn sample_weibull_interval(alpha: f64, lo: f64, hi: f64, u: f64) -> f64 {
    let la = lo.powf(alpha);
    if hi.is_infinite() {
        return (la - (-u).ln_1p()).powf(1.0 / alpha).max(lo.next_up());
    }
    let ha = hi.powf(alpha);
    // P(X ≤ x | lo<X<hi) = (e^{−lo^α} − e^{−x^α})/(e^{−lo^α} − e^{−hi^α});
    // solve for x^α = lo^α − ln(1 − u(1 − e^{−(hi^α−lo^α)})).
    let span = -(-(ha - la)).exp_m1();
    let x = (la - (-u * span).ln_1p()).powf(1.0 / alpha);
    x.max(lo.next_up()).min(hi.next_down())
}
