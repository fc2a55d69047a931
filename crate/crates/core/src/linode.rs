//! Closed-form solutions of linear fractional initial value problems.
//!
//! For α ∈ (0,1] and constant λ the two scalar problems
//!
//! ```text
//! d^α_C u = λu + f,   u(0) = u₀                 (Caputo)
//! d^α_RL v = λv + f,  I_{1-α} v(0+) = v₀        (Riemann-Liouville)
//! ```
//!
//! are solved by variation of constants:
//!
//! ```text
//! u(t) = u₀ E_α(λt^α)     + ∫₀^t P_α(t-s; -λ) f(s) ds
//! v(t) = v₀ P_α(t; -λ)    + ∫₀^t P_α(t-s; -λ) f(s) ds
//! ```
//!
//! The homogeneous parts are evaluated exactly through the Mittag-Leffler
//! module; the convolution is product integration: the integrable
//! (t-s)^(α-1) factor is integrated exactly per cell while E_{α,α} is frozen
//! at the cell's right-endpoint distance, which keeps the rule exact for
//! λ = 0 and O(τ) otherwise. Paths produced here are the oracles the
//! numerical solvers are measured against.
//!
//! An RL path with v₀ ≠ 0 genuinely satisfies |v(0+)| = ∞; node 0 carries a
//! NaN sentinel and the metadata flags it.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::solver::{PathMeta, SolutionPath};
use crate::specialfn::{mittag_leffler, p_alpha, MLParams};
use crate::types::{DerivKind, FracOrder, SampledFunction, UniformGrid};

/// Forcing term f(t) of a linear problem.
pub enum Forcing<'f, T> {
    /// Grid samples; must live on the solve grid.
    Sampled(SampledFunction<T>),
    /// Arbitrary callable evaluated at the grid nodes.
    Func(Box<dyn Fn(T) -> T + 'f>),
}

impl<'f, T: Real> Forcing<'f, T> {
    fn sample(&self, grid: &UniformGrid<T>) -> Result<Vec<T>> {
        match self {
            Forcing::Sampled(s) => {
                if s.grid() != *grid {
                    return Err(Error::domain(
                        "forcing samples live on a different grid than the solve",
                    ));
                }
                Ok(s.values().to_vec())
            }
            Forcing::Func(f) => Ok(grid.times().map(f).collect()),
        }
    }
}

/// A linear fractional initial value problem with constant coefficient.
///
/// `datum` is u₀ for Caputo and the singular datum v₀ = I_{1-α} v(0+) for
/// Riemann-Liouville.
pub struct LinearProblem<'f, T> {
    pub kind: DerivKind,
    pub alpha: FracOrder<T>,
    pub lambda: T,
    pub datum: T,
    pub forcing: Option<Forcing<'f, T>>,
}

impl<'f, T: Real> LinearProblem<'f, T> {
    /// Homogeneous problem d^α x = λx with the kind-appropriate datum.
    pub fn homogeneous(kind: DerivKind, alpha: FracOrder<T>, lambda: T, datum: T) -> Self {
        LinearProblem {
            kind,
            alpha,
            lambda,
            datum,
            forcing: None,
        }
    }

    /// Forced problem d^α x = λx + f.
    pub fn forced(
        kind: DerivKind,
        alpha: FracOrder<T>,
        lambda: T,
        datum: T,
        forcing: Forcing<'f, T>,
    ) -> Self {
        LinearProblem {
            kind,
            alpha,
            lambda,
            datum,
            forcing: Some(forcing),
        }
    }
}

fn check_kind<T: Real>(p: &LinearProblem<'_, T>, want: DerivKind, who: &str) -> Result<()> {
    if p.kind != want {
        return Err(Error::domain(format!("{who} expects a {want} problem")));
    }
    Ok(())
}

/// E_α(λ t^α) for real λ, errors mapped straight through.
fn e_alpha<T: Real>(alpha: T, lambda: T, t: T) -> Result<T> {
    let p = MLParams::one_param(alpha)?;
    let z = Complex::new(lambda * t.powf(alpha), T::zero());
    Ok(mittag_leffler(p, z)?.re)
}

/// u(t_n) = u₀ E_α(λ t_n^α).
pub fn solve_caputo_homogeneous<T: Real>(
    p: &LinearProblem<'_, T>,
    grid: &UniformGrid<T>,
) -> Result<SolutionPath<T>> {
    check_kind(p, DerivKind::Caputo, "solve_caputo_homogeneous")?;
    if p.forcing.is_some() {
        return Err(Error::domain(
            "solve_caputo_homogeneous given a forced problem; use solve_caputo_forced",
        ));
    }
    let alpha = p.alpha.require_in(0.0, 1.0, "solve_caputo_homogeneous")?;
    let mut states = Vec::with_capacity(grid.node_count());
    states.push(p.datum);
    for n in 1..grid.node_count() {
        states.push(p.datum * e_alpha(alpha, p.lambda, grid.t(n))?);
    }
    Ok(SolutionPath::from_states(
        *grid,
        1,
        states,
        PathMeta {
            method: "caputo-analytic",
            alpha: alpha.to_f64().unwrap_or(f64::NAN),
            kind: p.kind,
            singular_node0: false,
            seed: None,
        },
    ))
}

/// v(t_n) = v₀ P_α(t_n; -λ) for n ≥ 1; node 0 is the NaN sentinel.
pub fn solve_rl_homogeneous<T: Real>(
    p: &LinearProblem<'_, T>,
    grid: &UniformGrid<T>,
) -> Result<SolutionPath<T>> {
    check_kind(p, DerivKind::RiemannLiouville, "solve_rl_homogeneous")?;
    if p.forcing.is_some() {
        return Err(Error::domain(
            "solve_rl_homogeneous given a forced problem; use solve_rl_forced",
        ));
    }
    let alpha = rl_alpha(p)?;
    let mut states = Vec::with_capacity(grid.node_count());
    states.push(T::nan());
    for n in 1..grid.node_count() {
        let kernel = p_alpha(
            grid.t(n),
            FracOrder::new(alpha)?,
            Complex::new(p.lambda, T::zero()),
        )?
        .re;
        states.push(p.datum * kernel);
    }
    Ok(SolutionPath::from_states(
        *grid,
        1,
        states,
        PathMeta {
            method: "rl-analytic",
            alpha: alpha.to_f64().unwrap_or(f64::NAN),
            kind: p.kind,
            singular_node0: true,
            seed: None,
        },
    ))
}

fn rl_alpha<T: Real>(p: &LinearProblem<'_, T>) -> Result<T> {
    let alpha = p.alpha.require_in(0.0, 1.0, "Riemann-Liouville solve")?;
    if alpha == T::one() {
        return Err(Error::domain(
            "the Riemann-Liouville closed form needs alpha in (0,1); \
             at alpha = 1 the datum is v(0) and the problem is the Caputo one",
        ));
    }
    Ok(alpha)
}

/// Product-integration of the convolution ∫₀^{t_n} P_α(t_n-s; -λ) f(s) ds:
/// f frozen at the cell's left endpoint, (t-s)^(α-1) integrated exactly,
/// E_{α,α} frozen at the right-endpoint distance. Returns the value at every
/// node (node 0 is 0).
fn convolution_term<T: Real>(
    alpha: T,
    lambda: T,
    fvals: &[T],
    grid: &UniformGrid<T>,
) -> Result<Vec<T>> {
    let n_nodes = grid.node_count();
    let kw = crate::operators::KernelWeights::new(FracOrder::new(alpha)?, grid);
    let mut out = vec![T::zero(); n_nodes];
    if lambda == T::zero() {
        // P_α collapses to K_α and the quadrature is the exact-weight I_α
        for n in 1..n_nodes {
            let mut acc = T::zero();
            for k in 0..n {
                acc = acc + fvals[k] * kw.w(n, k);
            }
            out[n] = acc;
        }
        return Ok(out);
    }
    // kw.w carries the K_α = (·)^(α-1)/Γ(α) cell integral, P_α has no 1/Γ(α),
    // so fold Γ(α) into the tabulated E_{α,α}(λ (jτ)^α) values (j = distance
    // from t_n to the cell's right endpoint).
    let params = MLParams::new(alpha, alpha)?;
    let g_alpha = crate::specialfn::gamma(alpha)?;
    let mut e_table = Vec::with_capacity(n_nodes - 1);
    for j in 0..n_nodes - 1 {
        let z = Complex::new(lambda * grid.t(j).powf(alpha), T::zero());
        e_table.push(g_alpha * mittag_leffler(params, z)?.re);
    }
    for n in 1..n_nodes {
        let mut acc = T::zero();
        for k in 0..n {
            acc = acc + fvals[k] * e_table[n - k - 1] * kw.w(n, k);
        }
        out[n] = acc;
    }
    Ok(out)
}

/// u(t_n) = u₀ E_α(λ t_n^α) + ∫₀^{t_n} P_α(t_n-s; -λ) f(s) ds.
pub fn solve_caputo_forced<T: Real>(
    p: &LinearProblem<'_, T>,
    grid: &UniformGrid<T>,
) -> Result<SolutionPath<T>> {
    check_kind(p, DerivKind::Caputo, "solve_caputo_forced")?;
    let alpha = p.alpha.require_in(0.0, 1.0, "solve_caputo_forced")?;
    let forcing = match &p.forcing {
        Some(f) => f,
        None => {
            return solve_caputo_homogeneous(
                &LinearProblem::homogeneous(p.kind, p.alpha, p.lambda, p.datum),
                grid,
            )
        }
    };
    let fvals = forcing.sample(grid)?;
    let conv = convolution_term(alpha, p.lambda, &fvals, grid)?;
    let mut states = Vec::with_capacity(grid.node_count());
    states.push(p.datum);
    for n in 1..grid.node_count() {
        states.push(p.datum * e_alpha(alpha, p.lambda, grid.t(n))? + conv[n]);
    }
    Ok(SolutionPath::from_states(
        *grid,
        1,
        states,
        PathMeta {
            method: "caputo-analytic",
            alpha: alpha.to_f64().unwrap_or(f64::NAN),
            kind: p.kind,
            singular_node0: false,
            seed: None,
        },
    ))
}

/// v(t_n) = v₀ P_α(t_n; -λ) + the same convolution term.
pub fn solve_rl_forced<T: Real>(
    p: &LinearProblem<'_, T>,
    grid: &UniformGrid<T>,
) -> Result<SolutionPath<T>> {
    check_kind(p, DerivKind::RiemannLiouville, "solve_rl_forced")?;
    let alpha = rl_alpha(p)?;
    let forcing = match &p.forcing {
        Some(f) => f,
        None => {
            return solve_rl_homogeneous(
                &LinearProblem::homogeneous(p.kind, p.alpha, p.lambda, p.datum),
                grid,
            )
        }
    };
    let fvals = forcing.sample(grid)?;
    let conv = convolution_term(alpha, p.lambda, &fvals, grid)?;
    let mut states = Vec::with_capacity(grid.node_count());
    states.push(T::nan());
    for n in 1..grid.node_count() {
        let kernel = p_alpha(
            grid.t(n),
            FracOrder::new(alpha)?,
            Complex::new(p.lambda, T::zero()),
        )?
        .re;
        states.push(p.datum * kernel + conv[n]);
    }
    Ok(SolutionPath::from_states(
        *grid,
        1,
        states,
        PathMeta {
            method: "rl-analytic",
            alpha: alpha.to_f64().unwrap_or(f64::NAN),
            kind: p.kind,
            singular_node0: true,
            seed: None,
        },
    ))
}
