//! Temporary theory-lab probe (deleted before finalizing).

use semicross::distributions::JumpLaw;
use semicross::efficiency::*;
use semicross::model::FixedSumModel;
use std::time::Instant;

#[test]
fn probe_theory() {
    let t0 = Instant::now();
    // pareto trend for criterion 6
    for (n, alpha) in [(2usize, 0.5f64), (2, 1.0), (3, 0.5), (3, 1.0)] {
        let curve = pareto_log_efficiency_trend(alpha, n, &[10.0, 100.0, 1000.0]).unwrap();
        println!(
            "pareto trend n={n} a={alpha}: {:?} decreasing={}",
            curve.points, curve.eventually_decreasing
        );
    }
    println!("trend time {:?}", t0.elapsed());

    // derivative identity residuals
    for (n, a, g) in [(2usize, 1.0f64, 10.0f64), (2, 0.5, 50.0), (3, 1.0, 20.0)] {
        let t = Instant::now();
        let r = check_derivative_identity(g, 1.0, n, a).unwrap();
        println!("deriv n={n} a={a} g={g}: residual={r:.3e} ({:?})", t.elapsed());
    }

    // I2 convergence sanity: halve tolerance effect appears via closed form
    let i2 = i_n(100.0, 1.0, 2, 1.0).unwrap();
    println!("I2(100,1,a=1) = {i2:.10}");

    // second moment: weibull a=1, d=2, gammas 10 and 20
    let law = JumpLaw::weibull(1.0).unwrap();
    let t2 = ConvolutionTail::build(law, 2, 50.0, TailMethod::ClosedFormGamma).unwrap();
    let t1 = ConvolutionTail::build(law, 1, 50.0, TailMethod::ClosedFormGamma).unwrap();
    for g in [10.0, 14.0] {
        let model = FixedSumModel::new(law, 2, g).unwrap();
        let t = Instant::now();
        let (r, se) = second_moment_ratio(&model, &t2, &t1, 4_000_000, 7).unwrap();
        println!("EZ2/l2 d=2 g={g}: {r:.4} +- {se:.4} ({:?})", t.elapsed());
    }

    // second moment: weibull a=0.5 d=3 across gammas (numeric convolution)
    let law5 = JumpLaw::weibull(0.5).unwrap();
    for g in [10.0, 20.0, 40.0] {
        let t = Instant::now();
        let t3 = ConvolutionTail::build(law5, 3, g * 1.2, TailMethod::NumericConvolution).unwrap();
        let t2n = ConvolutionTail::build(law5, 2, g * 1.2, TailMethod::NumericConvolution).unwrap();
        let model = FixedSumModel::new(law5, 3, g).unwrap();
        let (r, se) = second_moment_ratio(&model, &t3, &t2n, 100_000, 7).unwrap();
        println!("EZ2/l2 a=.5 d=3 g={g}: {r:.4} +- {se:.4} l={:.3e} ({:?})", t3.tail(g), t.elapsed());
    }

    // lighttail trend
    let t = Instant::now();
    let trend = lighttail_relative_error_trend(1.0, 5, &[10.0, 15.0, 20.0], 1000, 100_000, 3).unwrap();
    for p in &trend.points {
        println!(
            "light a=1 d=5 g={}: est={:.4e} rel={:.3e} norm={:.4e}",
            p.gamma, p.report.estimate, p.report.rel_error, p.normalized_rel_error
        );
    }
    println!("nonincreasing={} ({:?})", trend.trend_nonincreasing, t.elapsed());
    let trend = lighttail_relative_error_trend(1.5, 5, &[8.0, 12.0, 16.0], 1000, 100_000, 3).unwrap();
    for p in &trend.points {
        println!(
            "light a=1.5 d=5 g={}: est={:.4e} rel={:.3e} norm={:.4e}",
            p.gamma, p.report.estimate, p.report.rel_error, p.normalized_rel_error
        );
    }
    println!("nonincreasing={}", trend.trend_nonincreasing);

    // pareto 2-fold oracle example
    let p1 = JumpLaw::pareto(1.0).unwrap();
    let conv2 = ConvolutionTail::build(p1, 2, 20.0, TailMethod::NumericConvolution).unwrap();
    let expect = 0.2 + 2.0 * 9.0f64.ln() / 100.0;
    println!("pareto 2-fold at 10: {:.6} vs closed {:.6}", conv2.tail(10.0), expect);

    // MC fallback sanity
    let mc = ConvolutionTail::build(law5, 5, 50.0, TailMethod::MonteCarlo { m: 200_000, seed: 3 })
        .unwrap();
    println!("mc 5-fold tail(30)={:.4e} sigma={:.2e}", mc.tail(30.0), mc.mc_sigma(30.0).unwrap());
}
