//! Seeded Monte Carlo: Black-Scholes asset, classical Heston variance, and
//! the rough-Heston fractional Volterra variance.
//!
//! The rough model replaces the classical mean-reversion integrals with
//! K_α-weighted ones,
//!
//! ```text
//! V_t = V₀ + ∫₀^t κ(θ-V_s) K_α(t-s) ds + ∫₀^t ξ√(V_s) K_α(t-s) dB_s,
//! ```
//!
//! discretized by an explicit Volterra-Euler scheme with full truncation
//! V⁺ = max(V, 0):
//!
//! ```text
//! V_{n+1} = V₀ + Σ_k κ(θ-V_k⁺) w_{n+1,k} + Σ_k ξ√(V_k⁺) b_{n+1,k} Z_k,
//! ```
//!
//! where the drift weights w are exactly the solver's kernel weights and the
//! noise weights are variance matched per cell by the Itô isometry:
//! b_{n+1,k}² = ∫_{t_k}^{t_{k+1}} K_α(t_{n+1}-s)² ds, in closed form with
//! exponent 2α-1 (hence the α > 1/2 requirement). The asset couples through
//! W = ρB + √(1-ρ²)B⊥ and S_{n+1} = S_n(1 + μτ + √(V_n⁺ τ)·ΔW_n).
//!
//! Determinism contract: path p draws from an independent ChaCha stream
//! (seed, p), partial statistics are reduced in fixed chunk order, so a
//! rerun with the same `McRun` is bit-identical regardless of thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::dd::Accum;
use crate::error::{Error, Result};
use crate::operators::KernelWeights;
use crate::scalar::Real;
use crate::specialfn::gamma;
use crate::types::{FracOrder, UniformGrid};

/// Paths per reduction chunk; fixed so the reduction order never depends on
/// the thread count.
const CHUNK: usize = 128;

/// Model parameters for the variance/asset pair.
///
/// The mean-reversion rate κ and the noise amplitude ξ are separate knobs;
/// setting ξ = κ reproduces the single-coefficient form of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoughHestonParams<T> {
    pub v0: T,
    pub kappa: T,
    pub theta: T,
    pub xi: T,
    pub alpha: T,
    pub rho: T,
    pub s0: T,
    pub mu: T,
}

impl<T: Real> RoughHestonParams<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(v0: T, kappa: T, theta: T, xi: T, alpha: T, rho: T, s0: T, mu: T) -> Result<Self> {
        if !(v0 >= T::zero()) {
            return Err(Error::domain(format!("v0 must be >= 0, got {v0}")));
        }
        if !(kappa > T::zero()) {
            return Err(Error::domain(format!("kappa must be > 0, got {kappa}")));
        }
        if !(theta >= T::zero()) {
            return Err(Error::domain(format!("theta must be >= 0, got {theta}")));
        }
        if !(xi >= T::zero()) {
            return Err(Error::domain(format!("xi must be >= 0, got {xi}")));
        }
        if !(alpha > T::of(0.5) && alpha <= T::one()) {
            return Err(Error::domain(format!(
                "alpha must lie in (0.5, 1] so the squared-kernel integral converges, got {alpha}"
            )));
        }
        if !(rho >= -T::one() && rho <= T::one()) {
            return Err(Error::domain(format!("rho must lie in [-1, 1], got {rho}")));
        }
        if !(s0 > T::zero()) {
            return Err(Error::domain(format!("s0 must be > 0, got {s0}")));
        }
        if !mu.is_finite() {
            return Err(Error::domain(format!("mu must be finite, got {mu}")));
        }
        Ok(RoughHestonParams {
            v0,
            kappa,
            theta,
            xi,
            alpha,
            rho,
            s0,
            mu,
        })
    }
}

/// One Monte Carlo run: parameters, grid, path count, seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McRun<T> {
    pub params: RoughHestonParams<T>,
    pub grid: UniformGrid<T>,
    pub n_paths: usize,
    pub seed: u64,
}

impl<T: Real> McRun<T> {
    pub fn new(
        params: RoughHestonParams<T>,
        grid: UniformGrid<T>,
        n_paths: usize,
        seed: u64,
    ) -> Result<Self> {
        if n_paths < 1 {
            return Err(Error::domain("n_paths must be >= 1"));
        }
        Ok(McRun {
            params,
            grid,
            n_paths,
            seed,
        })
    }
}

/// Per-node sample mean and standard deviation of one quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesStats<T> {
    pub mean: Vec<T>,
    pub sd: Vec<T>,
}

/// Per-node statistics of variance and asset paths.
#[derive(Debug, Clone, PartialEq)]
pub struct HestonStats<T> {
    pub grid: UniformGrid<T>,
    pub v: SeriesStats<T>,
    pub s: SeriesStats<T>,
    pub n_paths: usize,
    pub seed: u64,
    pub method: &'static str,
}

/// A retained simulated path (for dumping).
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample<T> {
    pub v: Vec<T>,
    pub s: Vec<T>,
}

/// Independent per-path generator: stream p of the seeded ChaCha cipher.
pub(crate) fn path_rng(seed: u64, path: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(path);
    rng
}

/// Shifted moment accumulator (around a fixed origin, compensated sums).
struct MomentAcc<T> {
    origin: T,
    sum: Vec<Accum<T>>,
    sum2: Vec<Accum<T>>,
}

impl<T: Real> MomentAcc<T> {
    fn new(origin: T, nodes: usize) -> Self {
        MomentAcc {
            origin,
            sum: (0..nodes).map(|_| Accum::zero()).collect(),
            sum2: (0..nodes).map(|_| Accum::zero()).collect(),
        }
    }

    #[inline]
    fn push(&mut self, node: usize, value: T) {
        let d = value - self.origin;
        self.sum[node].add(d);
        self.sum2[node].add(d * d);
    }

    fn merge_value_of(&mut self, other: &MomentAcc<T>) {
        for i in 0..self.sum.len() {
            self.sum[i].add(other.sum[i].value());
            self.sum2[i].add(other.sum2[i].value());
        }
    }

    fn finish(&self, n: usize) -> SeriesStats<T> {
        let nf = T::of_usize(n);
        let mut mean = Vec::with_capacity(self.sum.len());
        let mut sd = Vec::with_capacity(self.sum.len());
        for i in 0..self.sum.len() {
            let m = self.sum[i].value() / nf;
            mean.push(self.origin + m);
            let var = if n > 1 {
                ((self.sum2[i].value() - nf * m * m) / (nf - T::one())).max(T::zero())
            } else {
                T::zero()
            };
            sd.push(var.sqrt());
        }
        SeriesStats { mean, sd }
    }
}

struct Partial<T> {
    v: MomentAcc<T>,
    s: MomentAcc<T>,
    kept: Vec<(usize, PathSample<T>)>,
}

/// Runs `path_fn` over all paths in deterministic chunks, reducing moments
/// in chunk order.
fn run_paths<T: Real>(
    run: &McRun<T>,
    keep_paths: usize,
    path_fn: impl Fn(&mut ChaCha12Rng, &mut [T], &mut [T]) + Sync,
) -> (HestonStats<T>, Vec<PathSample<T>>)
where
    StandardNormal: Distribution<T>,
{
    let nodes = run.grid.node_count();
    let n_chunks = run.n_paths.div_ceil(CHUNK);
    let partials: Vec<Partial<T>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(run.n_paths);
            let mut part = Partial {
                v: MomentAcc::new(run.params.v0, nodes),
                s: MomentAcc::new(run.params.s0, nodes),
                kept: Vec::new(),
            };
            let mut v_path = vec![T::zero(); nodes];
            let mut s_path = vec![T::zero(); nodes];
            for p in lo..hi {
                let mut rng = path_rng(run.seed, p as u64);
                path_fn(&mut rng, &mut v_path, &mut s_path);
                for k in 0..nodes {
                    part.v.push(k, v_path[k]);
                    part.s.push(k, s_path[k]);
                }
                if p < keep_paths {
                    part.kept.push((
                        p,
                        PathSample {
                            v: v_path.clone(),
                            s: s_path.clone(),
                        },
                    ));
                }
            }
            part
        })
        .collect();

    let mut v_total = MomentAcc::new(run.params.v0, nodes);
    let mut s_total = MomentAcc::new(run.params.s0, nodes);
    let mut kept: Vec<(usize, PathSample<T>)> = Vec::new();
    for part in &partials {
        v_total.merge_value_of(&part.v);
        s_total.merge_value_of(&part.s);
    }
    for mut part in partials {
        kept.append(&mut part.kept);
    }
    kept.sort_by_key(|(p, _)| *p);
    let stats = HestonStats {
        grid: run.grid,
        v: v_total.finish(run.n_paths),
        s: s_total.finish(run.n_paths),
        n_paths: run.n_paths,
        seed: run.seed,
        method: "",
    };
    (stats, kept.into_iter().map(|(_, s)| s).collect())
}

/// Rough-Heston variance and asset statistics (see the module docs for the
/// scheme). Errors if α ≤ 1/2, where the squared-kernel integral diverges
/// (enforced at parameter construction).
pub fn simulate_rough_heston<T: Real>(run: &McRun<T>) -> Result<HestonStats<T>>
where
    StandardNormal: Distribution<T>,
{
    Ok(simulate_rough_heston_with_paths(run, 0)?.0)
}

/// Same as [`simulate_rough_heston`], also returning the first `keep_paths`
/// simulated paths.
pub fn simulate_rough_heston_with_paths<T: Real>(
    run: &McRun<T>,
    keep_paths: usize,
) -> Result<(HestonStats<T>, Vec<PathSample<T>>)>
where
    StandardNormal: Distribution<T>,
{
    let p = run.params;
    let grid = run.grid;
    let n = grid.n_steps();
    let tau = grid.tau();
    let alpha = FracOrder::new(p.alpha)?;
    let kw = KernelWeights::new(alpha, &grid);

    // b_{n+1,k} = bscale·√(j^(2α-1) - (j-1)^(2α-1)) with j = n+1-k
    let two_am1 = T::of(2.0) * p.alpha - T::one();
    let bscale = (tau.powf(two_am1) / two_am1).sqrt() / gamma(p.alpha)?;
    let b: Vec<T> = (1..=n)
        .map(|j| {
            let jf = T::of_usize(j);
            let prev = if j == 1 {
                T::zero()
            } else {
                (jf - T::one()).powf(two_am1)
            };
            bscale * (jf.powf(two_am1) - prev).sqrt()
        })
        .collect();

    let rho_c = (T::one() - p.rho * p.rho).max(T::zero()).sqrt();

    let (mut stats, kept) = run_paths(run, keep_paths, |rng, v_path, s_path| {
        let mut z = vec![T::zero(); n];
        let mut zp = vec![T::zero(); n];
        for k in 0..n {
            z[k] = StandardNormal.sample(rng);
            zp[k] = StandardNormal.sample(rng);
        }
        let mut drift = vec![T::zero(); n]; // κ(θ - V_k⁺)
        let mut noise = vec![T::zero(); n]; // ξ√(V_k⁺)·Z_k
        v_path[0] = p.v0;
        s_path[0] = p.s0;
        for k in 0..n {
            let vplus = v_path[k].max(T::zero());
            drift[k] = p.kappa * (p.theta - vplus);
            noise[k] = p.xi * vplus.sqrt() * z[k];
            let mut acc = p.v0;
            for j in 0..=k {
                acc = acc + drift[j] * kw.w(k + 1, j) + noise[j] * b[k - j];
            }
            v_path[k + 1] = acc;
            let dw = p.rho * z[k] + rho_c * zp[k];
            s_path[k + 1] =
                s_path[k] * (T::one() + p.mu * tau + (vplus * tau).sqrt() * dw);
        }
    });
    stats.method = "rough-heston";
    Ok((stats, kept))
}

/// Classical Heston by recursive full-truncation Euler-Maruyama; the α = 1
/// benchmark the rough scheme collapses to.
pub fn simulate_classical_heston<T: Real>(run: &McRun<T>) -> Result<HestonStats<T>>
where
    StandardNormal: Distribution<T>,
{
    let p = run.params;
    let grid = run.grid;
    let n = grid.n_steps();
    let tau = grid.tau();
    let rho_c = (T::one() - p.rho * p.rho).max(T::zero()).sqrt();

    let (mut stats, _) = run_paths(run, 0, |rng, v_path, s_path| {
        v_path[0] = p.v0;
        s_path[0] = p.s0;
        for k in 0..n {
            let vplus = v_path[k].max(T::zero());
            let z: T = StandardNormal.sample(rng);
            let zp: T = StandardNormal.sample(rng);
            v_path[k + 1] =
                v_path[k] + p.kappa * (p.theta - vplus) * tau + p.xi * (vplus * tau).sqrt() * z;
            let dw = p.rho * z + rho_c * zp;
            s_path[k + 1] = s_path[k] * (T::one() + p.mu * tau + (vplus * tau).sqrt() * dw);
        }
    });
    stats.method = "classical-heston";
    Ok(stats)
}

/// Geometric-Brownian asset with volatility frozen at √V₀:
/// S_{t+τ} = S_t (1 + μτ + σ√τ X_t). Variance statistics are not produced.
pub fn simulate_gbm<T: Real>(run: &McRun<T>) -> Result<HestonStats<T>>
where
    StandardNormal: Distribution<T>,
{
    let p = run.params;
    let grid = run.grid;
    let n = grid.n_steps();
    let tau = grid.tau();
    let sigma = p.v0.sqrt();
    let sqrt_tau = tau.sqrt();

    let (mut stats, _) = run_paths(run, 0, |rng, v_path, s_path| {
        v_path[0] = p.v0;
        s_path[0] = p.s0;
        for k in 0..n {
            let x: T = StandardNormal.sample(rng);
            v_path[k + 1] = p.v0;
            s_path[k + 1] = s_path[k] * (T::one() + p.mu * tau + sigma * sqrt_tau * x);
        }
    });
    stats.method = "gbm";
    Ok(stats)
}
