//! Cross-operator identities on sampled data: semigroup composition, the
//! fractional Barrow rule, α → 1 limits, and agreement between the three
//! derivative discretizations.

mod common;

use common::sup_err;
use fracal::prelude::*;

fn order(a: f64) -> FracOrder<f64> {
    FracOrder::new(a).unwrap()
}

fn grid(p: i32) -> UniformGrid<f64> {
    UniformGrid::new(2f64.powi(-p), 1usize << p).unwrap()
}

#[test]
fn numeric_semigroup_error_shrinks_under_refinement() {
    let (a1, a2) = (0.6, 0.7);
    let mut errs = Vec::new();
    for p in [6, 7, 8] {
        let g = grid(p);
        let f = SampledFunction::from_fn(g, f64::sin).unwrap();
        let inner = frac_integral_num(&f, order(a2)).unwrap();
        let twice = frac_integral_num(&inner, order(a1)).unwrap();
        let once = frac_integral_num(&f, order(a1 + a2)).unwrap();
        errs.push(sup_err(twice.values(), once.values()));
    }
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    assert!(errs[2] < 1e-2);
}

#[test]
fn barrow_rule_integral_of_caputo_recovers_increment() {
    // I_α (d^α_C f) = f - f(0); node 0 of the derivative is patched with its
    // limit value 0 (regular f) before quadrature
    let mut errs = Vec::new();
    for p in [6, 7, 8, 9] {
        let g = grid(p);
        let f = SampledFunction::from_fn(g, |t| (2.0 * t).cos() + 1.0).unwrap();
        let alpha = order(0.6);
        let d = caputo_derivative_num(&f, alpha).unwrap().with_node0(0.0);
        let back = frac_integral_num(&d, alpha).unwrap();
        let want: Vec<f64> = g.times().map(|t| (2.0 * t).cos() + 1.0 - 2.0).collect();
        errs.push(sup_err(back.values(), &want));
    }
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    assert!(*errs.last().unwrap() < 5e-3, "{errs:?}");
}

#[test]
fn caputo_approaches_classical_derivative_as_alpha_tends_to_one() {
    // sup over interior nodes of |d^α_C f - centered difference| divided by
    // (τ + (1-α)) stays bounded, and the error itself shrinks with p
    let g = grid(8);
    let n_steps = g.n_steps();
    let f = SampledFunction::from_fn(g, f64::sin).unwrap();
    let tau = g.tau();
    let centered: Vec<f64> = (1..n_steps)
        .map(|n| (f.value(n + 1) - f.value(n - 1)) / (2.0 * tau))
        .collect();
    let mut prev = f64::INFINITY;
    for p in 4..=10 {
        let alpha = 1.0 - 2f64.powi(-p);
        let d = caputo_derivative_num(&f, order(alpha)).unwrap();
        // skip the first tenth: the operator difference carries a ln t
        // factor near the origin
        let err = (n_steps / 10..n_steps)
            .map(|n| (d.value(n) - centered[n - 1]).abs())
            .fold(0.0, f64::max);
        let budget = tau + (1.0 - alpha);
        assert!(err <= 3.0 * budget, "p={p}: err {err} vs budget {budget}");
        assert!(err <= prev * 1.01, "p={p}: err {err} grew from {prev}");
        prev = err;
    }
}

#[test]
fn three_derivative_routes_agree_on_smooth_data() {
    // RL numeric (Caputo + correction) and Grünwald-Letnikov both estimate
    // the same derivative of f(t) = 1 + t + sin(t)/2 at t = 1
    let alpha = order(0.4);
    let g = grid(10);
    let f = |t: f64| 1.0 + t + 0.5 * t.sin();
    let sampled = SampledFunction::from_fn(g, f).unwrap();
    let rl = rl_derivative_num(&sampled, alpha).unwrap();
    let gl = gl_derivative(f, 1.0, alpha, 1 << 14).unwrap();
    assert!(
        (rl.value(g.n_steps()) - gl).abs() < 1e-2,
        "{} vs {gl}",
        rl.value(g.n_steps())
    );
}

#[test]
fn integral_rules_converge_to_each_other() {
    // the two quadrature rules bracket the same limit on smooth data
    let alpha = order(0.7);
    let mut gaps = Vec::new();
    for p in [6, 8, 10] {
        let g = grid(p);
        let f = SampledFunction::from_fn(g, |t| (1.5 * t).cos()).unwrap();
        let lo = frac_integral_num(&f, alpha).unwrap();
        let hi = fracal::operators::frac_integral_num_rule(
            &f,
            alpha,
            fracal::operators::QuadRule::PiecewiseLinear,
        )
        .unwrap();
        gaps.push(sup_err(lo.values(), hi.values()));
    }
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
}
