//! Adaptive Gauss–Kronrod quadrature over finite intervals.
//!
//! A 7-point Gauss / 15-point Kronrod pair drives interval bisection: the
//! interval with the largest error estimate is split until the summed error
//! drops below `max(abs_floor, rel_tol·|integral|)` or the subdivision budget
//! is exhausted.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Kronrod abscissae on [0, 1] (symmetric about 0).
const XGK: [f64; 8] = [
    0.991_455_371_120_813_0,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_17,
    0.207_784_955_007_898_47,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// 7-point Gauss weights for the abscissae at odd Kronrod indices.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> (f64, f64) {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (lo + hi);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let (fa, fb) = if x == 0.0 {
            let fc = f(mid);
            (fc, 0.0)
        } else {
            (f(mid - half * x), f(mid + half * x))
        };
        let fsum = if x == 0.0 { fa } else { fa + fb };
        kronrod += wk * fsum;
        // Gauss nodes sit at the odd Kronrod indices, center included (i = 7).
        if i % 2 == 1 {
            gauss += WG[i / 2] * fsum;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    (value, error)
}

/// Integrate `f` over `[lo, hi]` to relative tolerance `rel_tol`, with an
/// absolute floor below which further refinement stops.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    abs_floor: f64,
) -> QuadResult {
    if !(lo < hi) {
        return QuadResult { value: 0.0, abs_error: 0.0, converged: true };
    }
    const MAX_SEGMENTS: usize = 4000;
    let (v, e) = gauss_kronrod(&mut f, lo, hi);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { lo, hi, value: v, error: e });
    let mut total = v;
    let mut total_err = e;
    while heap.len() < MAX_SEGMENTS {
        let tol = abs_floor.max(rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        let worst = heap.pop().expect("heap nonempty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // interval at floating-point resolution; give up on it
            heap.push(Segment { error: 0.0, ..worst });
            continue;
        }
        let (v1, e1) = gauss_kronrod(&mut f, worst.lo, mid);
        let (v2, e2) = gauss_kronrod(&mut f, mid, worst.hi);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment { lo: worst.lo, hi: mid, value: v1, error: e1 });
        heap.push(Segment { lo: mid, hi: worst.hi, value: v2, error: e2 });
    }
    // Recompute the totals from the segments to shed accumulated cancellation.
    let mut value = 0.0;
    let mut abs_error = 0.0;
    for s in heap.iter() {
        value += s.value;
        abs_error += s.error;
    }
    let converged = abs_error <= abs_floor.max(rel_tol * value.abs()) * 1.0001 + f64::MIN_POSITIVE;
    QuadResult { value, abs_error, converged }
}

/// Convenience wrapper with the crate-wide defaults (1e-8 relative, 1e-300 floor).
pub fn integrate_default<F: FnMut(f64) -> f64>(f: F, lo: f64, hi: f64) -> QuadResult {
    integrate(f, lo, hi, 1e-8, 1e-300)
}
