//! Shared domain types: fractional order, uniform grid, sampled functions.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Which fractional derivative an initial value problem is stated with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivKind {
    /// Caputo derivative; natural datum is `u(0)`.
    Caputo,
    /// Riemann-Liouville derivative; natural datum is `I_{1-α} v(0+)`.
    RiemannLiouville,
}

impl core::fmt::Display for DerivKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DerivKind::Caputo => write!(f, "caputo"),
            DerivKind::RiemannLiouville => write!(f, "riemann-liouville"),
        }
    }
}

/// A fractional order α with validity-range bookkeeping.
///
/// Construction only pins down α > 0 (the operator range); narrower ranges
/// (solvers need α ∈ (0,1], the rough-Heston kernel α ∈ (0.5,1]) are checked
/// at the point of use via [`FracOrder::require_in`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder<T>(T);

impl<T: Real> FracOrder<T> {
    /// A fractional order; must be finite and strictly positive.
    pub fn new(alpha: T) -> Result<Self> {
        if !alpha.is_finite() || alpha <= T::zero() {
            return Err(Error::domain(format!(
                "fractional order must be finite and > 0, got {alpha}"
            )));
        }
        Ok(FracOrder(alpha))
    }

    /// The raw order.
    #[inline]
    pub fn value(self) -> T {
        self.0
    }

    /// Checks α ∈ (lo, hi] (both bounds given as `f64` literals).
    pub fn require_in(self, lo: f64, hi: f64, who: &str) -> Result<T> {
        let a = self.0;
        if a <= T::of(lo) || a > T::of(hi) {
            return Err(Error::domain(format!(
                "{who} requires alpha in ({lo}, {hi}], got {a}"
            )));
        }
        Ok(a)
    }
}

/// The mesh t_k = k·τ for k = 0..=n_steps over [0, n_steps·τ].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid<T> {
    tau: T,
    n_steps: usize,
}

impl<T: Real> UniformGrid<T> {
    /// A uniform grid with step `tau > 0` and at least one step.
    pub fn new(tau: T, n_steps: usize) -> Result<Self> {
        if !tau.is_finite() || tau <= T::zero() {
            return Err(Error::DegenerateGrid(format!(
                "step must be finite and > 0, got {tau}"
            )));
        }
        if n_steps < 1 {
            return Err(Error::DegenerateGrid("need at least one step".into()));
        }
        Ok(UniformGrid { tau, n_steps })
    }

    /// Grid covering [0, horizon] with the given step; the number of steps is
    /// `round(horizon / tau)` and must reproduce the horizon within 1e-9
    /// relative.
    pub fn from_horizon(tau: T, horizon: T) -> Result<Self> {
        if !horizon.is_finite() || horizon <= T::zero() {
            return Err(Error::DegenerateGrid(format!(
                "horizon must be finite and > 0, got {horizon}"
            )));
        }
        let steps = (horizon / tau).round();
        let n = steps
            .to_f64()
            .filter(|s| *s >= 1.0 && *s < 1e12)
            .ok_or_else(|| Error::DegenerateGrid("horizon/tau out of range".into()))?
            as usize;
        let g = Self::new(tau, n)?;
        let rel = ((g.horizon() - horizon) / horizon).abs();
        if rel > T::of(1e-9) {
            return Err(Error::DegenerateGrid(format!(
                "horizon {horizon} is not an integer multiple of tau {tau}"
            )));
        }
        Ok(g)
    }

    /// The step τ.
    #[inline]
    pub fn tau(self) -> T {
        self.tau
    }

    /// Number of steps (nodes minus one).
    #[inline]
    pub fn n_steps(self) -> usize {
        self.n_steps
    }

    /// Number of nodes, `n_steps + 1`.
    #[inline]
    pub fn node_count(self) -> usize {
        self.n_steps + 1
    }

    /// Node t_k = k·τ.
    #[inline]
    pub fn t(self, k: usize) -> T {
        T::of_usize(k) * self.tau
    }

    /// Final time t_{n_steps}.
    #[inline]
    pub fn horizon(self) -> T {
        self.t(self.n_steps)
    }

    /// Iterator over the nodes t_0, …, t_{n_steps}.
    pub fn times(self) -> impl Iterator<Item = T> {
        (0..=self.n_steps).map(move |k| self.t(k))
    }
}

/// Samples of a function on a [`UniformGrid`].
///
/// Every entry must be finite except node 0, which is allowed to hold a NaN
/// sentinel: Riemann-Liouville derivatives of functions with `f(0) ≠ 0` are
/// genuinely singular at 0+, and operator outputs honor that rather than
/// inventing a value.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction<T> {
    grid: UniformGrid<T>,
    values: Vec<T>,
}

impl<T: Real> SampledFunction<T> {
    /// Wraps samples; the length must match the grid's node count.
    pub fn new(grid: UniformGrid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::domain(format!(
                "sample count {} does not match grid node count {}",
                values.len(),
                grid.node_count()
            )));
        }
        if let Some(k) = values.iter().skip(1).position(|v| !v.is_finite()) {
            return Err(Error::domain(format!(
                "sample at node {} is not finite",
                k + 1
            )));
        }
        if !values[0].is_finite() && !values[0].is_nan() {
            return Err(Error::domain("sample at node 0 is infinite"));
        }
        Ok(SampledFunction { grid, values })
    }

    /// Samples `f` at every grid node.
    pub fn from_fn(grid: UniformGrid<T>, f: impl Fn(T) -> T) -> Result<Self> {
        let values = grid.times().map(f).collect();
        Self::new(grid, values)
    }

    /// The grid the samples live on.
    #[inline]
    pub fn grid(&self) -> UniformGrid<T> {
        self.grid
    }

    /// All samples, node 0 first.
    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Sample at node `k`.
    #[inline]
    pub fn value(&self, k: usize) -> T {
        self.values[k]
    }

    /// Whether node 0 carries the NaN singularity sentinel.
    #[inline]
    pub fn node0_is_sentinel(&self) -> bool {
        self.values[0].is_nan()
    }

    /// A copy with node 0 replaced, e.g. to patch a sentinel before feeding
    /// the samples into a quadrature.
    pub fn with_node0(&self, v: T) -> Self {
        let mut values = self.values.clone();
        values[0] = v;
        SampledFunction {
            grid: self.grid,
            values,
        }
    }
}
