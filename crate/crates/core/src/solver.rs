//! Numerical solution of fractional initial value problems.
//!
//! Works on the integral (Volterra) formulation: with the kernel weights
//! w_{n,k} = ∫_{t_k}^{t_{k+1}} K_α(t-s) ds, the Caputo problem
//! d^α u = f(t, u), u(0) = U₀ becomes
//!
//! ```text
//! explicit Euler:  U_{n+1} = U₀ + Σ_{k=0}^{n} f(t_k,     U_k)     w_{n+1,k}
//! implicit Euler:  U_{n+1} = U₀ + Σ_{k=0}^{n} f(t_{k+1}, U_{k+1}) w_{n+1,k}
//! ```
//!
//! and the Riemann-Liouville problem replaces U₀ with the singular
//! K_α(t_{n+1})·v₀ (which is why there is no explicit method for it: the
//! first step has no finite left endpoint to sample). The Adams
//! predictor-corrector predicts with the explicit rule and corrects with
//! product-trapezoid weights, i.e. the exact kernel moments of the linear
//! hat interpolant.
//!
//! Every step needs the entire history (the memory property), so a solve
//! costs O(N²) right-hand-side weightings. At α = 1 all weights collapse to
//! τ and the classical forward/backward Euler methods come out bit for bit.

use crate::error::{Error, Result};
use crate::operators::KernelWeights;
use crate::scalar::Real;
use crate::specialfn::gamma;
use crate::types::{DerivKind, FracOrder, UniformGrid};

/// Divergence sentinel: any state component beyond this aborts the solve.
const OVERFLOW_SENTINEL: f64 = 1e150;

/// Per-step nonlinear solve parameters.
const STEP_RESIDUAL_TOL: f64 = 1e-12;
const STEP_MAX_ITERS: usize = 50;

/// A fractional initial value problem d^α u = f(t, u) on [0, horizon].
///
/// `datum` is `u(0)` for Caputo and the singular datum `I_{1-α} v(0+)` for
/// Riemann-Liouville. The right-hand side writes its value into the output
/// slice, so vector fields of any dimension d ≥ 1 work without allocation.
pub struct FracIVP<'f, T> {
    pub kind: DerivKind,
    pub alpha: FracOrder<T>,
    pub datum: Vec<T>,
    pub horizon: T,
    rhs: Box<dyn Fn(T, &[T], &mut [T]) + 'f>,
}

impl<'f, T: Real> FracIVP<'f, T> {
    pub fn new(
        kind: DerivKind,
        alpha: FracOrder<T>,
        datum: Vec<T>,
        horizon: T,
        rhs: impl Fn(T, &[T], &mut [T]) + 'f,
    ) -> Self {
        assert!(!datum.is_empty(), "state dimension must be at least 1");
        FracIVP {
            kind,
            alpha,
            datum,
            horizon,
            rhs: Box::new(rhs),
        }
    }

    /// Scalar problem from a plain `f(t, u) -> du` closure.
    pub fn scalar(
        kind: DerivKind,
        alpha: FracOrder<T>,
        datum: T,
        horizon: T,
        rhs: impl Fn(T, T) -> T + 'f,
    ) -> Self {
        Self::new(kind, alpha, vec![datum], horizon, move |t, u, out| {
            out[0] = rhs(t, u[0])
        })
    }

    /// State dimension d.
    pub fn dim(&self) -> usize {
        self.datum.len()
    }

    fn eval(&self, t: T, u: &[T], out: &mut [T], step: usize) -> Result<()> {
        (self.rhs)(t, u, out);
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::RhsEvaluation { step });
        }
        Ok(())
    }

    fn check_grid(&self, grid: &UniformGrid<T>) -> Result<()> {
        let rel = ((grid.horizon() - self.horizon) / self.horizon).abs();
        if rel > T::of(1e-9) {
            return Err(Error::domain(format!(
                "grid horizon {} does not span the problem horizon {}",
                grid.horizon(),
                self.horizon
            )));
        }
        Ok(())
    }
}

/// Grid-aligned solution samples plus bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPath<T> {
    grid: UniformGrid<T>,
    dim: usize,
    /// Node-major states, length node_count·dim.
    states: Vec<T>,
    pub meta: PathMeta,
}

/// How a [`SolutionPath`] was produced.
#[derive(Debug, Clone, PartialEq)]
pub struct PathMeta {
    pub method: &'static str,
    pub alpha: f64,
    pub kind: DerivKind,
    /// Node 0 holds a NaN sentinel (singular Riemann-Liouville start).
    pub singular_node0: bool,
    pub seed: Option<u64>,
}

impl<T: Real> SolutionPath<T> {
    pub(crate) fn from_states(
        grid: UniformGrid<T>,
        dim: usize,
        states: Vec<T>,
        meta: PathMeta,
    ) -> Self {
        debug_assert_eq!(states.len(), grid.node_count() * dim);
        SolutionPath {
            grid,
            dim,
            states,
            meta,
        }
    }

    #[inline]
    pub fn grid(&self) -> UniformGrid<T> {
        self.grid
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// State vector at node n.
    #[inline]
    pub fn state(&self, n: usize) -> &[T] {
        &self.states[n * self.dim..(n + 1) * self.dim]
    }

    /// Scalar value at node n (panics if d > 1).
    #[inline]
    pub fn value(&self, n: usize) -> T {
        assert_eq!(self.dim, 1, "value() is for scalar paths; use state()");
        self.states[n]
    }

    /// Scalar samples as a slice (d = 1 layout is node-major already).
    pub fn scalar_values(&self) -> &[T] {
        assert_eq!(self.dim, 1, "scalar_values() is for scalar paths");
        &self.states
    }
}

/// The integrated-kernel weight table shared by all methods (and by the
/// numeric operators and the rough-Heston drift, bit for bit).
pub fn kernel_weights<T: Real>(alpha: FracOrder<T>, grid: &UniformGrid<T>) -> KernelWeights<T> {
    KernelWeights::new(alpha, grid)
}

fn overflow_check<T: Real>(u: &[T], step: usize) -> Result<()> {
    if u.iter().any(|v| v.abs() > T::of(OVERFLOW_SENTINEL)) {
        return Err(Error::Overflow { step });
    }
    Ok(())
}

/// Solves the per-step implicit equation x = known + w·f(t, x).
///
/// Newton iteration with a forward-difference Jacobian, falling back to a
/// plain fixed-point sweep whenever the Newton step fails to reduce the
/// residual; `guess` seeds the iteration. Exposed so reference classical
/// methods can share the exact same arithmetic.
pub fn solve_implicit_step<T: Real>(
    rhs: impl Fn(T, &[T], &mut [T]),
    t: T,
    w: T,
    known: &[T],
    guess: &[T],
    step: usize,
) -> Result<Vec<T>> {
    let d = known.len();
    let tol = T::of(STEP_RESIDUAL_TOL);
    let mut x = guess.to_vec();
    let mut fx = vec![T::zero(); d];
    let mut residual = vec![T::zero(); d];
    let res_norm = |r: &[T]| r.iter().fold(T::zero(), |m, v| m.max(v.abs()));

    let eval_res = |x: &[T], fx: &mut [T], r: &mut [T]| {
        rhs(t, x, fx);
        for i in 0..d {
            r[i] = x[i] - w * fx[i] - known[i];
        }
    };

    eval_res(&x, &mut fx, &mut residual);
    let mut rnorm = res_norm(&residual);
    for _ in 0..STEP_MAX_ITERS {
        if !rnorm.is_finite() {
            return Err(Error::NonlinearSolveFailure { step });
        }
        if rnorm <= tol {
            return Ok(x);
        }
        // forward-difference Jacobian of R(x) = x - w f(t,x) - known
        let mut jac = vec![T::zero(); d * d];
        let mut xp = x.clone();
        let mut fp = vec![T::zero(); d];
        for j in 0..d {
            let h = T::epsilon().sqrt() * x[j].abs().max(T::one());
            xp[j] = x[j] + h;
            rhs(t, &xp, &mut fp);
            xp[j] = x[j];
            for i in 0..d {
                let didj = if i == j { T::one() } else { T::zero() };
                jac[i * d + j] = didj - w * (fp[i] - fx[i]) / h;
            }
        }
        let newton = solve_dense(&mut jac, &residual);
        let mut trial = x.clone();
        let accepted = if let Some(delta) = newton {
            for i in 0..d {
                trial[i] = x[i] - delta[i];
            }
            let mut ft = vec![T::zero(); d];
            let mut rt = vec![T::zero(); d];
            eval_res(&trial, &mut ft, &mut rt);
            let rn = res_norm(&rt);
            if rn.is_finite() && rn < rnorm {
                fx = ft;
                residual = rt;
                rnorm = rn;
                true
            } else {
                false
            }
        } else {
            false
        };
        if accepted {
            x = trial;
        } else {
            // fixed-point sweep x <- known + w f(t, x)
            for i in 0..d {
                x[i] = known[i] + w * fx[i];
            }
            eval_res(&x, &mut fx, &mut residual);
            rnorm = res_norm(&residual);
        }
    }
    if rnorm <= tol {
        Ok(x)
    } else {
        Err(Error::NonlinearSolveFailure { step })
    }
}

/// Gaussian elimination with partial pivoting; returns None on a singular
/// pivot. `a` is overwritten.
fn solve_dense<T: Real>(a: &mut [T], b: &[T]) -> Option<Vec<T>> {
    let d = b.len();
    let mut x = b.to_vec();
    for col in 0..d {
        let mut piv = col;
        for r in col + 1..d {
            if a[r * d + col].abs() > a[piv * d + col].abs() {
                piv = r;
            }
        }
        if a[piv * d + col].abs() < T::epsilon() * T::of(1e-3) {
            return None;
        }
        if piv != col {
            for c in 0..d {
                a.swap(col * d + c, piv * d + c);
            }
            x.swap(col, piv);
        }
        let inv = a[col * d + col].recip();
        for r in col + 1..d {
            let factor = a[r * d + col] * inv;
            if factor == T::zero() {
                continue;
            }
            for c in col..d {
                a[r * d + c] = a[r * d + c] - factor * a[col * d + c];
            }
            x[r] = x[r] - factor * x[col];
        }
    }
    for col in (0..d).rev() {
        let mut s = x[col];
        for c in col + 1..d {
            s = s - a[col * d + c] * x[c];
        }
        x[col] = s / a[col * d + col];
    }
    Some(x)
}

/// Explicit fractional Euler. Caputo problems only: the Riemann-Liouville
/// path starts at a singularity, so its first step admits no explicit
/// (left-endpoint) interpolant.
pub fn solve_explicit_euler<T: Real>(
    ivp: &FracIVP<'_, T>,
    grid: &UniformGrid<T>,
) -> Result<SolutionPath<T>> {
    if ivp.kind != DerivKind::Caputo {
        return Err(Error::ModelRestriction(
            "explicit Euler is unavailable for Riemann-Liouville problems; \
             the singular start forces the implicit interpolant at the first step"
                .to_string(),
        ));
    }
    let alpha = ivp.alpha.require_in(0.0, 1.0, "solve_explicit_euler")?;
    ivp.check_grid(grid)?;
    let d = ivp.dim();
    let n_nodes = grid.node_count();
    let kw = KernelWeights::new(FracOrder::new(alpha)?, grid);

    let mut states = Vec::with_capacity(n_nodes * d);
    states.extend_from_slice(&ivp.datum);
    let mut fhist = vec![T::zero(); n_nodes * d];
    let mut u = ivp.datum.clone();
    for n in 0..grid.n_steps() {
        {
            let slot = &mut fhist[n * d..(n + 1) * d];
            ivp.eval(grid.t(n), &u, slot, n)?;
        }
        for i in 0..d {
            let mut acc = ivp.datum[i];
            for k in 0..=n {
                acc = acc + kw.w(n + 1, k) * fhist[k * d + i];
            }
            u[i] = acc;
        }
        overflow_check(&u, n + 1)?;
        states.extend_from_slice(&u);
    }
    Ok(SolutionPath::from_states(
        *grid,
        d,
        states,
        PathMeta {
            method: "explicit-euler",
            alpha: alpha.to_f64().unwrap_or(f64::NAN),
            kind: ivp.kind,
            singular_node0: false,
            seed: None,
        },
    ))
}

/// Implicit fractional Euler for Caputo (α ∈ (0,1]) and Riemann-Liouville
/// (α ∈ (0,1)) problems. The RL path carries a NaN sentinel at node 0.
pub fn solve_implicit_euler<T: Real>(
    ivp: &FracIVP<'_, T>,
    grid: &UniformGrid<T>,
) -> Result<SolutionPath<T>> {
    let rl = ivp.kind == DerivKind::RiemannLiouville;
    let alpha = if rl {
        let a = ivp.alpha.require_in(0.0, 1.0, "solve_implicit_euler (RL)")?;
        if a == T::one() {
            return Err(Error::domain(
                "Riemann-Liouville solve requires alpha in (0,1); \
                 at alpha = 1 the problem is the classical one"
                    .to_string(),
            ));
        }
        a
    } else {
        ivp.alpha.require_in(0.0, 1.0, "solve_implicit_euler")?
    };
    ivp.check_grid(grid)?;
    let d = ivp.dim();
    let n_nodes = grid.node_count();
    let kw = KernelWeights::new(FracOrder::new(alpha)?, grid);
    let galpha = gamma(alpha)?;

    let mut states = Vec::with_capacity(n_nodes * d);
    if rl {
        states.extend(std::iter::repeat_n(T::nan(), d));
    } else {
        states.extend_from_slice(&ivp.datum);
    }
    // F_j = f(t_j, U_j) for j >= 1
    let mut fhist = vec![T::zero(); n_nodes * d];
    let mut u = ivp.datum.clone();
    for n in 0..grid.n_steps() {
        let t_next = grid.t(n + 1);
        let mut known = vec![T::zero(); d];
        for i in 0..d {
            let mut acc = if rl {
                // K_α(t_{n+1}) · v₀
                t_next.powf(alpha - T::one()) / galpha * ivp.datum[i]
            } else {
                ivp.datum[i]
            };
            for k in 0..n {
                acc = acc + kw.w(n + 1, k) * fhist[(k + 1) * d + i];
            }
            known[i] = acc;
        }
        let guess = if rl && n == 0 { known.clone() } else { u.clone() };
        u = solve_implicit_step(
            |t, x, out| (ivp.rhs)(t, x, out),
            t_next,
            kw.w(n + 1, n),
            &known,
            &guess,
            n + 1,
        )?;
        {
            let slot = &mut fhist[(n + 1) * d..(n + 2) * d];
            ivp.eval(t_next, &u, slot, n + 1)?;
        }
        overflow_check(&u, n + 1)?;
        states.extend_from_slice(&u);
    }
    Ok(SolutionPath::from_states(
        *grid,
        d,
        states,
        PathMeta {
            method: "implicit-euler",
            alpha: alpha.to_f64().unwrap_or(f64::NAN),
            kind: ivp.kind,
            singular_node0: rl,
            seed: None,
        },
    ))
}

/// Fractional Adams predictor-corrector (PECE). Caputo problems only.
///
/// Predictor: explicit Euler step. Corrector: product-trapezoid weights
/// a_{n+1,k} (exact kernel moments of the hat interpolant) with one
/// correction; the history then stores f at the corrected state.
pub fn solve_adams_pc<T: Real>(
    ivp: &FracIVP<'_, T>,
    grid: &UniformGrid<T>,
) -> Result<SolutionPath<T>> {
    if ivp.kind != DerivKind::Caputo {
        return Err(Error::ModelRestriction(
            "the Adams predictor-corrector is built on the Caputo integral form; \
             Riemann-Liouville problems use the implicit method"
                .to_string(),
        ));
    }
    let alpha = ivp.alpha.require_in(0.0, 1.0, "solve_adams_pc")?;
    ivp.check_grid(grid)?;
    let d = ivp.dim();
    let n_nodes = grid.node_count();
    let kw = KernelWeights::new(FracOrder::new(alpha)?, grid);
    let tau = grid.tau();
    let ap1 = alpha + T::one();
    // Γ(3) = 2 exactly so the α = 1 collapse stays bit-exact
    let corr_scale = if alpha == T::one() {
        tau / T::of(2.0)
    } else {
        tau.powf(alpha) / gamma(alpha + T::of(2.0))?
    };
    // Toeplitz part of the corrector weights: second differences of j^(α+1).
    let hat: Vec<T> = (1..n_nodes)
        .map(|j| {
            if alpha == T::one() {
                return T::of(2.0);
            }
            let jf = T::of_usize(j);
            (jf + T::one()).powf(ap1) + (jf - T::one()).powf(ap1) - T::of(2.0) * jf.powf(ap1)
        })
        .collect();

    let mut states = Vec::with_capacity(n_nodes * d);
    states.extend_from_slice(&ivp.datum);
    let mut fhist = vec![T::zero(); n_nodes * d];
    let mut u = ivp.datum.clone();
    let mut fpred = vec![T::zero(); d];
    for n in 0..grid.n_steps() {
        {
            let slot = &mut fhist[n * d..(n + 1) * d];
            ivp.eval(grid.t(n), &u, slot, n)?;
        }
        let t_next = grid.t(n + 1);
        // predict with the rectangle rule
        let mut pred = vec![T::zero(); d];
        for i in 0..d {
            let mut acc = ivp.datum[i];
            for k in 0..=n {
                acc = acc + kw.w(n + 1, k) * fhist[k * d + i];
            }
            pred[i] = acc;
        }
        ivp.eval(t_next, &pred, &mut fpred, n + 1)?;
        // correct with the trapezoid weights
        let nf = T::of_usize(n);
        let w0 = if alpha == T::one() {
            T::one()
        } else {
            nf.powf(ap1) - (nf - alpha) * (nf + T::one()).powf(alpha)
        };
        for i in 0..d {
            let mut acc = fhist[i] * w0;
            for k in 1..=n {
                acc = acc + fhist[k * d + i] * hat[n - k];
            }
            acc = acc + fpred[i];
            u[i] = ivp.datum[i] + corr_scale * acc;
        }
        overflow_check(&u, n + 1)?;
        states.extend_from_slice(&u);
    }
    Ok(SolutionPath::from_states(
        *grid,
        d,
        states,
        PathMeta {
            method: "adams-pc",
            alpha: alpha.to_f64().unwrap_or(f64::NAN),
            kind: ivp.kind,
            singular_node0: false,
            seed: None,
        },
    ))
}
