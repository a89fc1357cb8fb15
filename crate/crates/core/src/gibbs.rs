//! Gibbs sampling from the zero-variance density π(x) ∝ f(x)·1{S(x) > γ}.
//!
//! Three kernels share the same systematic-scan skeleton:
//!
//! * the plain fixed-dimension kernel, where each coordinate's full
//!   conditional is the jump law truncated above c_i = (γ − Σ_{j≠i} x_j)⁺;
//! * the max-constrained kernel targeting π̃ ∝ f·1{S>γ, M_d<γ, x_d = M_d},
//!   used by the dominant-term estimator, where coordinates i < d are
//!   truncated to (c_i, x_d) and coordinate d to (max(c_d, max_{j<d} x_j), γ);
//! * the transdimensional compound kernel over (r, y_1..y_r), which rescans
//!   the jumps and then redraws r from f_R(r)·1{r ≥ r*(y)}.
//!
//! Chains are sequential objects; the returned samples are immutable and safe
//! to share across worker threads.

use rand::distr::Open01;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::compound::CompoundModel;
use crate::error::{Error, Result};
use crate::exec::chain_rng;
use crate::model::FixedSumModel;

/// Number of f-draws attempted before the initial state falls back to a
/// forced truncated redraw of the last coordinate.
const INIT_ATTEMPTS: usize = 1000;

/// Which invariant set the stored states satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainTarget {
    /// S(x) > γ.
    Plain,
    /// S(x) > γ, max x_i < γ, and the last coordinate is the maximum.
    MaxConstrained,
}

/// Post-burn-in states of a fixed-dimension chain, stored row-major.
#[derive(Debug, Clone)]
pub struct FixedChain {
    pub model: FixedSumModel,
    pub target: ChainTarget,
    pub n: usize,
    pub burn_in: usize,
    pub seed: u64,
    states: Vec<f64>,
}

impl FixedChain {
    #[inline]
    pub fn state(&self, k: usize) -> &[f64] {
        let d = self.model.d;
        &self.states[k * d..(k + 1) * d]
    }

    pub fn iter_states(&self) -> impl Iterator<Item = &[f64]> {
        self.states.chunks_exact(self.model.d)
    }

    /// Mean of coordinate `i` over the stored states.
    pub fn coordinate_mean(&self, i: usize) -> f64 {
        self.iter_states().map(|s| s[i]).sum::<f64>() / self.n as f64
    }
}

/// Post-burn-in states of the variable-length compound chain.
#[derive(Debug, Clone)]
pub struct CompoundChain {
    pub model: CompoundModel,
    pub n: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub states: Vec<Vec<f64>>,
}

/// Default burn-in: 10% of the requested sample, at least 100 sweeps.
pub fn default_burn_in(n: usize) -> usize {
    (n / 10).max(100)
}

#[inline]
fn open01(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(Open01)
}

/// Draw a state with S(x) > γ: rejection from f with a capped number of
/// attempts, then a forced truncated redraw of the last coordinate (the
/// stationary law does not depend on the start).
pub fn initial_fixed_state(model: &FixedSumModel, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let d = model.d;
    let mut x = vec![0.0; d];
    for _ in 0..INIT_ATTEMPTS {
        for xi in x.iter_mut() {
            *xi = model.law.sample(open01(rng));
        }
        if model.event(&x) {
            return x;
        }
    }
    let rest: f64 = x[..d - 1].iter().sum();
    let v = model.law.sample_truncated_above(model.gamma - rest, open01(rng));
    if rest + v > model.gamma {
        x[d - 1] = v;
    } else {
        // only reachable through floating-point collapse of the cutoff
        let cap = if model.law.support_max().is_finite() {
            model.law.support_max().next_down()
        } else {
            model.gamma
        };
        x.fill(cap);
    }
    debug_assert!(model.event(&x));
    x
}

/// One systematic scan of the plain kernel. The state keeps S(x) > γ after
/// every coordinate update; a draw that lands on the event boundary after
/// rounding leaves the coordinate unchanged.
pub fn fixed_sweep(model: &FixedSumModel, x: &mut [f64], rng: &mut ChaCha8Rng) {
    let gamma = model.gamma;
    for i in 0..model.d {
        let rest: f64 = x.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v).sum();
        let c = gamma - rest;
        let v = model.law.sample_truncated_above(c, open01(rng));
        if rest + v > gamma {
            x[i] = v;
        }
        debug_assert!(x.iter().sum::<f64>() > gamma);
    }
}

/// Run the plain chain: `burn_in` discarded sweeps, then one stored state per
/// sweep. Bit-reproducible for a fixed (model, n, burn_in, seed).
pub fn run_fixed_chain(model: &FixedSumModel, n: usize, burn_in: usize, seed: u64) -> FixedChain {
    assert!(n >= 1, "chain length must be positive");
    let mut rng = chain_rng(seed);
    let mut x = initial_fixed_state(model, &mut rng);
    for _ in 0..burn_in {
        fixed_sweep(model, &mut x, &mut rng);
    }
    let mut states = Vec::with_capacity(n * model.d);
    for _ in 0..n {
        fixed_sweep(model, &mut x, &mut rng);
        states.extend_from_slice(&x);
    }
    FixedChain { model: *model, target: ChainTarget::Plain, n, burn_in, seed, states }
}

fn initial_tilted_state(model: &FixedSumModel, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let d = model.d;
    let gamma = model.gamma;
    let law = model.law;
    let inf = law.support_min();
    let mut x = vec![0.0; d];
    for _ in 0..INIT_ATTEMPTS {
        for xi in x.iter_mut() {
            *xi = law
                .sample_truncated_interval(inf, gamma, open01(rng))
                .expect("(support_min, gamma) is nonempty");
        }
        if model.event(&x) {
            // move the maximum into the last slot
            let (arg_max, _) = x
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .expect("d >= 1");
            x.swap(arg_max, d - 1);
            return x;
        }
    }
    // All coordinates at the same interior point: S = d·v > γ, v < γ, ties
    // between x_d and the rest are resolved by the first sweep.
    let v = 0.75 * gamma + 0.25 * inf;
    debug_assert!(v > inf && v < gamma && (d as f64) * v > gamma);
    vec![v; d]
}

/// One scan of the max-constrained kernel (requires d ≥ 2). A conditional
/// interval squeezed below floating-point resolution leaves its coordinate
/// unchanged (the identity update on a measure-zero sliver).
pub fn tilted_sweep(model: &FixedSumModel, x: &mut [f64], rng: &mut ChaCha8Rng) {
    let d = model.d;
    let gamma = model.gamma;
    for i in 0..d - 1 {
        let rest: f64 = x.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v).sum();
        let c = gamma - rest;
        let u = open01(rng);
        if let Ok(v) = model.law.sample_truncated_interval(c, x[d - 1], u) {
            if rest + v > gamma {
                x[i] = v;
            }
        }
    }
    let rest: f64 = x[..d - 1].iter().sum();
    let c = gamma - rest;
    let max_rest = x[..d - 1].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let u = open01(rng);
    if let Ok(v) = model.law.sample_truncated_interval(c.max(max_rest), gamma, u) {
        if rest + v > gamma {
            x[d - 1] = v;
        }
    }
    debug_assert!(x.iter().sum::<f64>() > gamma);
    debug_assert!(x[..d - 1].iter().all(|&v| v <= x[d - 1]));
    debug_assert!(x[d - 1] < gamma);
}

/// Run the max-constrained chain used by the dominant-term estimator.
pub fn run_tilted_chain(
    model: &FixedSumModel,
    n: usize,
    burn_in: usize,
    seed: u64,
) -> Result<FixedChain> {
    if model.d < 2 {
        return Err(Error::Unsupported(
            "the max-constrained chain needs d >= 2 (d = 1 has an empty residual event)".into(),
        ));
    }
    if model.gamma <= model.law.support_min() {
        return Err(Error::Domain(format!(
            "gamma = {} is at or below the jump support; F(gamma) = 0",
            model.gamma
        )));
    }
    let mut rng = chain_rng(seed);
    let mut x = initial_tilted_state(model, &mut rng);
    for _ in 0..burn_in {
        tilted_sweep(model, &mut x, &mut rng);
    }
    let mut states = Vec::with_capacity(n * model.d);
    for _ in 0..n {
        tilted_sweep(model, &mut x, &mut rng);
        states.extend_from_slice(&x);
    }
    Ok(FixedChain {
        model: *model,
        target: ChainTarget::MaxConstrained,
        n,
        burn_in,
        seed,
        states,
    })
}

/// Minimal prefix length whose partial sum exceeds γ. The state invariant
/// (total > γ, every jump < γ) guarantees 2 ≤ r*(y) ≤ len(y).
pub fn min_exceeding_prefix(jumps: &[f64], gamma: f64) -> usize {
    let mut acc = 0.0;
    for (i, &y) in jumps.iter().enumerate() {
        acc += y;
        if acc > gamma {
            return i + 1;
        }
    }
    unreachable!("compound state must sum above gamma")
}

/// Draw a state of the compound chain: length from the tilted geometric, jumps
/// from the truncated prior, with a forced redraw of the last jump if the sum
/// fails to clear γ.
pub fn initial_compound_state(model: &CompoundModel, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut y: Vec<f64> = Vec::new();
    for _ in 0..INIT_ATTEMPTS {
        let r = model.sample_count_above(2, open01(rng));
        y.clear();
        for _ in 0..r {
            y.push(model.jump_law.sample(open01(rng)));
        }
        if y.iter().sum::<f64>() > model.gamma {
            return y;
        }
    }
    let r = y.len();
    let rest: f64 = y[..r - 1].iter().sum();
    let v = model.jump_law.sample_truncated_above(model.gamma - rest, open01(rng));
    if rest + v > model.gamma && v < model.gamma {
        y[r - 1] = v;
    } else {
        // prefix sum squeezed below floating-point resolution: park the last
        // two jumps just under gamma instead
        let near = model.gamma.next_down();
        y[r - 1] = near;
        y[r - 2] = near;
    }
    debug_assert!(y.iter().sum::<f64>() > model.gamma);
    y
}

/// One scan of the compound kernel: rescan every jump conditionally, then
/// redraw r from f_R(r)·1{r ≥ r*(y)}, appending fresh prior jumps when r
/// grows and discarding the excess when it shrinks.
pub fn compound_sweep(model: &CompoundModel, y: &mut Vec<f64>, rng: &mut ChaCha8Rng) {
    let gamma = model.gamma;
    let r = y.len();
    for i in 0..r {
        let rest: f64 = y.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v).sum();
        let c = gamma - rest;
        let v = model.jump_law.sample_truncated_above(c, open01(rng));
        if rest + v > gamma && v < gamma {
            y[i] = v;
        }
        debug_assert!(y.iter().sum::<f64>() > gamma);
    }
    let r_star = min_exceeding_prefix(y, gamma);
    let r_new = model.sample_count_above(r_star, open01(rng));
    if r_new < y.len() {
        y.truncate(r_new);
    } else {
        while y.len() < r_new {
            y.push(model.jump_law.sample(open01(rng)));
        }
    }
    debug_assert!(y.len() >= 2 && y.iter().sum::<f64>() > gamma);
    debug_assert!(y.iter().all(|&v| v > 0.0 && v < gamma));
}

/// Run the transdimensional compound chain.
pub fn run_compound_chain(
    model: &CompoundModel,
    n: usize,
    burn_in: usize,
    seed: u64,
) -> CompoundChain {
    assert!(n >= 1, "chain length must be positive");
    let mut rng = chain_rng(seed);
    let mut y = initial_compound_state(model, &mut rng);
    for _ in 0..burn_in {
        compound_sweep(model, &mut y, &mut rng);
    }
    let mut states = Vec::with_capacity(n);
    for _ in 0..n {
        compound_sweep(model, &mut y, &mut rng);
        states.push(y.clone());
    }
    CompoundChain { model: *model, n, burn_in, seed, states }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::JumpLaw;

    #[test]
    fn sweep_conditionals_match_hand_computation() {
        // d=2, gamma=10, state (6,6): the conditional cutoff for x1 is 4
        let model =
            FixedSumModel::new(JumpLaw::weibull(1.0).unwrap(), 2, 10.0).unwrap();
        let x = [6.0, 6.0];
        let rest: f64 = x[1];
        assert_eq!(model.gamma - rest, 4.0);

        // d=3, gamma=10, state (8,7,1): cutoff for x3 is negative -> unconstrained
        let rest = 8.0 + 7.0;
        assert!(model.gamma - rest < 0.0);
    }

    #[test]
    fn chain_bookkeeping_and_reproducibility() {
        let model =
            FixedSumModel::new(JumpLaw::weibull(1.0).unwrap(), 2, 0.1).unwrap();
        let a = run_fixed_chain(&model, 1000, 100, 7);
        assert_eq!(a.n, 1000);
        assert_eq!(a.iter_states().count(), 1000);
        let b = run_fixed_chain(&model, 1000, 100, 7);
        assert_eq!(a.state(123), b.state(123));
        assert_eq!(a.state(999), b.state(999));
        for s in a.iter_states() {
            assert!(model.event(s));
        }
    }

    #[test]
    fn initial_state_lands_in_event_even_for_deep_tails() {
        // gamma deep enough that rejection essentially never succeeds
        let model =
            FixedSumModel::new(JumpLaw::weibull(0.6).unwrap(), 10, 1e15).unwrap();
        let mut rng = chain_rng(3);
        let x = initial_fixed_state(&model, &mut rng);
        assert!(model.event(&x));

        let model1 =
            FixedSumModel::new(JumpLaw::weibull(1.0).unwrap(), 1, 5.0).unwrap();
        let x = initial_fixed_state(&model1, &mut rng);
        assert!(x[0] > 5.0);
    }

    #[test]
    fn tilted_chain_keeps_max_constraints() {
        let model =
            FixedSumModel::new(JumpLaw::pareto(1.0).unwrap(), 10, 10_010.0).unwrap();
        let chain = run_tilted_chain(&model, 500, 100, 11).unwrap();
        for s in chain.iter_states() {
            let sum: f64 = s.iter().sum();
            let max = s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert!(sum > model.gamma);
            assert!(max < model.gamma);
            assert_eq!(max, s[model.d - 1]);
        }
        assert!(run_tilted_chain(
            &FixedSumModel::new(JumpLaw::pareto(1.0).unwrap(), 1, 10.0).unwrap(),
            10,
            0,
            1
        )
        .is_err());
    }

    #[test]
    fn compound_chain_invariants_hold_across_states() {
        let model = CompoundModel::new(1.0, 0.5, 3.0).unwrap();
        let chain = run_compound_chain(&model, 10_000, 100, 5);
        for y in &chain.states {
            let sum: f64 = y.iter().sum();
            assert!(y.len() >= 2);
            assert!(sum > model.gamma);
            assert!(y.iter().all(|&v| v > 0.0 && v < model.gamma));
            assert!(min_exceeding_prefix(y, model.gamma) <= y.len());
            assert!(y.len() <= model.r_max);
        }
    }
}
