//! Fractional integral and derivatives, closed-form and numeric.
//!
//! Closed form on monomials f_β(t) = c·t^β:
//!
//! ```text
//! I_α f_β   = c · Γ(β+1)/Γ(α+β+1) · t^(β+α)          (β > -1)
//! dRL f_β   = c · Γ(β+1)/Γ(β-α+1) · t^(β-α)          (β > -1)
//! dC  f_β   = same ratio for β > 0, zero for β = 0    (β ≥ 0)
//! ```
//!
//! Numerically, everything is product quadrature against the kernel
//! K_α(t) = t^(α-1)/Γ(α) on a uniform grid: the cell integrals
//!
//! ```text
//! w_{n,k} = ∫_{t_k}^{t_{k+1}} K_α(t_n - s) ds
//!         = τ^α ((n-k)^α - (n-1-k)^α) / Γ(α+1)
//! ```
//!
//! are exact, depend only on n-k, and are shared verbatim with the ODE
//! solvers and the rough-Heston drift convolution.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specialfn::{gamma, recip_gamma_or_zero};
use crate::types::{FracOrder, SampledFunction, UniformGrid};

/// A monomial c·t^β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial<T> {
    pub coefficient: T,
    pub exponent: T,
}

impl<T: Real> Monomial<T> {
    pub fn new(coefficient: T, exponent: T) -> Self {
        Monomial {
            coefficient,
            exponent,
        }
    }

    /// Evaluates c·t^β.
    pub fn eval(&self, t: T) -> T {
        if self.coefficient == T::zero() {
            return T::zero();
        }
        self.coefficient * t.powf(self.exponent)
    }

    /// The zero monomial (coefficient 0).
    pub fn zero(exponent: T) -> Self {
        Monomial {
            coefficient: T::zero(),
            exponent,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient == T::zero()
    }
}

/// Integrated-kernel quadrature weights w_{n,k} of order α on a uniform
/// grid.
///
/// The table is triangular (0 ≤ k < n ≤ n_steps) but Toeplitz: w_{n,k}
/// depends only on j = n-k, so a single difference array
/// c_j = j^α - (j-1)^α backs every row. Rows telescope exactly:
/// Σ_{k<n} w_{n,k} = t_n^α / Γ(α+1).
#[derive(Debug, Clone, PartialEq)]
pub struct KernelWeights<T> {
    alpha: T,
    grid: UniformGrid<T>,
    /// c_j = j^α - (j-1)^α for j = 1..=n_steps (index j-1).
    diffs: Vec<T>,
    /// τ^α / Γ(α+1).
    scale: T,
}

/// c_j = j^α - (j-1)^α computed as j^α·(-expm1(α·ln1p(-1/j))) so the
/// subtraction never cancels; exact 1 at j = 1 and for α = 1.
fn power_diff<T: Real>(j: usize, alpha: T) -> T {
    if j == 1 || alpha == T::one() {
        return T::one();
    }
    let jf = T::of_usize(j);
    jf.powf(alpha) * (-(alpha * (-jf.recip()).ln_1p()).exp_m1())
}

impl<T: Real> KernelWeights<T> {
    /// Builds the weight table for order α > 0 on `grid`.
    pub fn new(alpha: FracOrder<T>, grid: &UniformGrid<T>) -> Self {
        let a = alpha.value();
        let diffs = (1..=grid.n_steps()).map(|j| power_diff(j, a)).collect();
        let scale = if a == T::one() {
            grid.tau()
        } else {
            grid.tau().powf(a) / gamma(a + T::one()).expect("alpha+1 > 1 cannot be a pole")
        };
        KernelWeights {
            alpha: a,
            grid: *grid,
            diffs,
            scale,
        }
    }

    #[inline]
    pub fn alpha(&self) -> T {
        self.alpha
    }

    #[inline]
    pub fn grid(&self) -> UniformGrid<T> {
        self.grid
    }

    /// w_{n,k} for 0 ≤ k < n ≤ n_steps.
    #[inline]
    pub fn w(&self, n: usize, k: usize) -> T {
        debug_assert!(k < n && n <= self.grid.n_steps());
        self.scale * self.diffs[n - k - 1]
    }

    /// Row n as the iterator w_{n,0}, …, w_{n,n-1}.
    pub fn row(&self, n: usize) -> impl Iterator<Item = T> + '_ {
        debug_assert!(n >= 1 && n <= self.grid.n_steps());
        (0..n).map(move |k| self.w(n, k))
    }

    /// Closed-form row sum t_n^α / Γ(α+1).
    pub fn row_sum_closed(&self, n: usize) -> T {
        self.grid.t(n).powf(self.alpha) / gamma(self.alpha + T::one()).unwrap()
    }
}

/// Quadrature rule for [`frac_integral_num_rule`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadRule {
    /// Piecewise-constant left-endpoint sampling of f, kernel integrated
    /// exactly per cell. Exact on constants; shared with the explicit solver.
    PiecewiseConstant,
    /// Piecewise-linear (hat) interpolation of f, kernel integrated exactly
    /// per cell (product trapezoid).
    PiecewiseLinear,
}

/// I_α of a monomial: degree rises to β + α.
pub fn frac_integral_monomial<T: Real>(
    alpha: FracOrder<T>,
    m: &Monomial<T>,
) -> Result<Monomial<T>> {
    let a = alpha.value();
    let b = m.exponent;
    if b <= -T::one() {
        return Err(Error::domain(format!(
            "fractional integral of t^beta requires beta > -1, got {b}"
        )));
    }
    let c = m.coefficient * gamma(b + T::one())? / gamma(a + b + T::one())?;
    Ok(Monomial::new(c, b + a))
}

/// Riemann-Liouville derivative of a monomial: degree falls to β - α; the
/// result is the zero monomial when β - α + 1 lands on a Gamma pole (this
/// includes dRL t^(α-1) = 0).
pub fn rl_derivative_monomial<T: Real>(
    alpha: FracOrder<T>,
    m: &Monomial<T>,
) -> Result<Monomial<T>> {
    let a = alpha.value();
    let b = m.exponent;
    if b <= -T::one() {
        return Err(Error::domain(format!(
            "Riemann-Liouville derivative of t^beta requires beta > -1, got {b}"
        )));
    }
    let rg = recip_gamma_or_zero(b - a + T::one());
    let c = m.coefficient * gamma(b + T::one())? * rg;
    Ok(Monomial::new(c, b - a))
}

/// Caputo derivative of a monomial: annihilates constants, otherwise equals
/// the Riemann-Liouville ratio (the f(0)-corrections vanish for β > 0).
pub fn caputo_derivative_monomial<T: Real>(
    alpha: FracOrder<T>,
    m: &Monomial<T>,
) -> Result<Monomial<T>> {
    let b = m.exponent;
    if b < T::zero() {
        return Err(Error::domain(format!(
            "Caputo derivative of t^beta requires beta >= 0, got {b}"
        )));
    }
    if b == T::zero() {
        return Ok(Monomial::zero(-alpha.value()));
    }
    rl_derivative_monomial(alpha, m)
}

/// (I_α f)(t_n) by product quadrature with the rule of choice.
pub fn frac_integral_num_rule<T: Real>(
    f: &SampledFunction<T>,
    alpha: FracOrder<T>,
    rule: QuadRule,
) -> Result<SampledFunction<T>> {
    let grid = f.grid();
    let a = alpha.value();
    let vals = f.values();
    let n_nodes = grid.node_count();
    let mut out = vec![T::zero(); n_nodes];
    match rule {
        QuadRule::PiecewiseConstant => {
            let kw = KernelWeights::new(alpha, &grid);
            for n in 1..n_nodes {
                let mut acc = T::zero();
                for k in 0..n {
                    acc = acc + vals[k] * kw.w(n, k);
                }
                out[n] = acc;
            }
        }
        QuadRule::PiecewiseLinear => {
            let scale = grid.tau().powf(a) / gamma(a + T::of(2.0))?;
            let ap1 = a + T::one();
            // hat second differences, Toeplitz part
            let hat: Vec<T> = (1..n_nodes)
                .map(|j| {
                    let jf = T::of_usize(j);
                    (jf + T::one()).powf(ap1) + (jf - T::one()).powf(ap1)
                        - T::of(2.0) * jf.powf(ap1)
                })
                .collect();
            for n in 1..n_nodes {
                let nf = T::of_usize(n);
                // left-boundary hat is cut off at s = 0
                let w0 = (nf - T::one()).powf(ap1) - (nf - ap1) * nf.powf(a);
                let mut acc = vals[0] * w0 + vals[n];
                for k in 1..n {
                    acc = acc + vals[k] * hat[n - k - 1];
                }
                out[n] = acc * scale;
            }
        }
    }
    SampledFunction::new(grid, out)
}

/// (I_α f)(t_n) with the default piecewise-constant rule; node 0 is 0.
pub fn frac_integral_num<T: Real>(
    f: &SampledFunction<T>,
    alpha: FracOrder<T>,
) -> Result<SampledFunction<T>> {
    frac_integral_num_rule(f, alpha, QuadRule::PiecewiseConstant)
}

/// Caputo derivative of sampled data by the L1 scheme (piecewise-linear
/// interpolation of f, order-(1-α) kernel integrated exactly per cell):
///
/// ```text
/// (dC f)(t_n) ≈ Σ_{m=1}^{n} (f(t_m)-f(t_{m-1}))/τ · ∫_{t_{m-1}}^{t_m} K_{1-α}(t_n-s) ds.
/// ```
///
/// Node 0 carries the NaN sentinel (excluded from the scheme).
pub fn caputo_derivative_num<T: Real>(
    f: &SampledFunction<T>,
    alpha: FracOrder<T>,
) -> Result<SampledFunction<T>> {
    let a = alpha.require_in(0.0, 1.0, "caputo_derivative_num")?;
    if a == T::one() {
        return Err(Error::domain(
            "caputo_derivative_num requires alpha in (0,1)".to_string(),
        ));
    }
    let grid = f.grid();
    let vals = f.values();
    let comp = FracOrder::new(T::one() - a)?;
    let kw = KernelWeights::new(comp, &grid);
    let tau = grid.tau();
    let mut out = vec![T::nan(); grid.node_count()];
    // slopes of the linear interpolant on each cell
    let slopes: Vec<T> = (1..grid.node_count())
        .map(|m| (vals[m] - vals[m - 1]) / tau)
        .collect();
    for n in 1..grid.node_count() {
        let mut acc = T::zero();
        for m in 1..=n {
            acc = acc + slopes[m - 1] * kw.w(n, m - 1);
        }
        out[n] = acc;
    }
    SampledFunction::new(grid, out)
}

/// Riemann-Liouville derivative of sampled data via the Caputo scheme plus
/// the exact correction f(0)·t_n^(-α)/Γ(1-α). Node 0 carries the NaN
/// sentinel: the derivative is genuinely singular there when f(0) ≠ 0.
pub fn rl_derivative_num<T: Real>(
    f: &SampledFunction<T>,
    alpha: FracOrder<T>,
) -> Result<SampledFunction<T>> {
    let a = alpha.require_in(0.0, 1.0, "rl_derivative_num")?;
    if a == T::one() {
        return Err(Error::domain(
            "rl_derivative_num requires alpha in (0,1)".to_string(),
        ));
    }
    let caputo = caputo_derivative_num(f, alpha)?;
    let grid = f.grid();
    let f0 = f.value(0);
    let g1ma = gamma(T::one() - a)?;
    let mut out = caputo.values().to_vec();
    for n in 1..grid.node_count() {
        out[n] = out[n] + f0 * grid.t(n).powf(-a) / g1ma;
    }
    SampledFunction::new(grid, out)
}

/// Grünwald-Letnikov derivative of order α at time t > 0 with j subdivisions:
///
/// ```text
/// h^(-α) Σ_{k=0}^{j} (-1)^k C(α,k) f(t - k h),    h = t/j,
/// ```
///
/// with the weight recurrence g_0 = 1, g_k = g_{k-1}·(k-1-α)/k for
/// (-1)^k·binom(α,k).
pub fn gl_derivative<T: Real>(
    f: impl Fn(T) -> T,
    t: T,
    alpha: FracOrder<T>,
    j: usize,
) -> Result<T> {
    if !(t > T::zero()) || !t.is_finite() {
        return Err(Error::domain(format!(
            "Grünwald-Letnikov derivative requires t > 0, got {t}"
        )));
    }
    if j < 1 {
        return Err(Error::domain(
            "Grünwald-Letnikov derivative requires j >= 1".to_string(),
        ));
    }
    let a = alpha.value();
    let h = t / T::of_usize(j);
    let mut g = T::one();
    let mut acc = T::zero();
    for k in 0..=j {
        if k > 0 {
            let kf = T::of_usize(k);
            g = g * (kf - T::one() - a) / kf;
        }
        acc = acc + g * f(t - T::of_usize(k) * h);
    }
    Ok(acc * h.powf(-a))
}
