//! Consistency of the closed-form linear solutions with the numeric
//! operators: defect of the homogeneous solution, and the I_{1-α} bridge
//! between the Riemann-Liouville and Caputo problems.

mod common;

use fracal::prelude::*;

fn order(a: f64) -> FracOrder<f64> {
    FracOrder::new(a).unwrap()
}

#[test]
fn caputo_defect_vanishes_under_refinement() {
    // insert u(t) = E_α(λ t^α) into the L1 discretization of d^α_C and
    // compare with λu; skip the first tenth of the nodes where the t^α kink
    // dominates
    let (alpha, lambda) = (0.5, -1.0);
    let mut sups = Vec::new();
    for p in [6, 8, 10] {
        let n = 1usize << p;
        let g = UniformGrid::new(2f64.powi(-p), n).unwrap();
        let prob = LinearProblem::homogeneous(DerivKind::Caputo, order(alpha), lambda, 1.0);
        let u = solve_caputo_homogeneous(&prob, &g).unwrap();
        let sampled = SampledFunction::new(g, u.scalar_values().to_vec()).unwrap();
        let d = caputo_derivative_num(&sampled, order(alpha)).unwrap();
        let sup = (n / 10..=n)
            .map(|k| (d.value(k) - lambda * u.value(k)).abs())
            .fold(0.0, f64::max);
        sups.push(sup);
    }
    assert!(sups[0] > sups[1] && sups[1] > sups[2], "{sups:?}");
    assert!(sups[2] < 5e-3, "{sups:?}");
}

#[test]
fn rl_to_caputo_bridge_via_fractional_integral() {
    // I_{1-α} applied to the RL homogeneous path reproduces v₀E_α(λt^α);
    // the path's t^(α-1) start is patched with its first finite sample
    let (alpha, lambda, v0) = (0.5, -1.0, 1.0);
    let mut sups = Vec::new();
    for p in [6, 8, 10] {
        let n = 1usize << p;
        let g = UniformGrid::new(2f64.powi(-p), n).unwrap();
        let prob =
            LinearProblem::homogeneous(DerivKind::RiemannLiouville, order(alpha), lambda, v0);
        let v = solve_rl_homogeneous(&prob, &g).unwrap();
        let patched = SampledFunction::new(g, v.scalar_values().to_vec())
            .unwrap()
            .with_node0(v.value(1));
        let bridged = frac_integral_num(&patched, order(1.0 - alpha)).unwrap();
        let target = LinearProblem::homogeneous(DerivKind::Caputo, order(alpha), lambda, v0);
        let u = solve_caputo_homogeneous(&target, &g).unwrap();
        let sup = (n / 10..=n)
            .map(|k| (bridged.value(k) - u.value(k)).abs())
            .fold(0.0, f64::max);
        sups.push(sup);
    }
    assert!(sups[0] > sups[1] && sups[1] > sups[2], "{sups:?}");
    assert!(sups[2] < 5e-2, "{sups:?}");
}

#[test]
fn forced_solution_defect_against_numeric_derivative() {
    // u solves d^α_C u = λu + f; check the L1 derivative of the produced
    // path against λu + f away from the kink
    let (alpha, lambda) = (0.6, -0.8);
    let n = 1usize << 9;
    let g = UniformGrid::new(2f64.powi(-9), n).unwrap();
    let prob = LinearProblem::forced(
        DerivKind::Caputo,
        order(alpha),
        lambda,
        0.5,
        Forcing::Func(Box::new(|t: f64| (2.0 * t).sin())),
    );
    let u = solve_caputo_forced(&prob, &g).unwrap();
    let sampled = SampledFunction::new(g, u.scalar_values().to_vec()).unwrap();
    let d = caputo_derivative_num(&sampled, order(alpha)).unwrap();
    let sup = (n / 10..=n)
        .map(|k| {
            let want = lambda * u.value(k) + (2.0 * g.t(k)).sin();
            (d.value(k) - want).abs()
        })
        .fold(0.0, f64::max);
    assert!(sup < 2e-2, "sup defect {sup}");
}
