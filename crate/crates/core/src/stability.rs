//! Stability of linear fractional systems d^α u = A u.
//!
//! Eigenvector solutions have the form E_α(λt^α)w, so asymptotic stability
//! is a sector condition on the spectrum (Matignon): the system is stable
//! iff every eigenvalue λ of A satisfies |arg λ| > απ/2. For α < 1 the
//! sector is wider than the left half-plane, so fractional systems are
//! stable for some spectra a classical system cannot tolerate; for α > 1 it
//! is narrower.
//!
//! Eigenvalues come from a dense complex Hessenberg + Wilkinson-shifted QR
//! iteration, dimension capped at 8 (desk scale); 1×1 and 2×2 are closed
//! form. [`ml_decay_probe`] cross-checks a verdict empirically by watching
//! |E_α(λt^α)| decay or grow along a log-spaced grid.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specialfn::{mittag_leffler, MLParams};
use crate::types::FracOrder;

/// Stability verdict for one eigenvalue or a whole system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Stable,
    Unstable,
    Marginal,
}

impl core::fmt::Display for Verdict {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Verdict::Stable => write!(f, "stable"),
            Verdict::Unstable => write!(f, "unstable"),
            Verdict::Marginal => write!(f, "marginal"),
        }
    }
}

/// Half-width of the marginal band around the sector boundary.
const SECTOR_TOL: f64 = 1e-12;

/// Maximum system dimension for [`classify_system`].
pub const MAX_DIM: usize = 8;

/// The Matignon sector test for one eigenvalue, α ∈ (0, 2).
///
/// `Stable` if |arg λ| > απ/2 + tol, `Unstable` if |arg λ| < απ/2 - tol,
/// `Marginal` within the 1e-12 band (and for λ = 0). The argument is taken
/// in (-π, π].
pub fn matignon_check<T: Real>(alpha: FracOrder<T>, lambda: Complex<T>) -> Result<Verdict> {
    let a = alpha.require_in(0.0, 2.0, "matignon_check")?;
    if a >= T::of(2.0) {
        return Err(Error::domain("matignon_check requires alpha in (0,2)"));
    }
    if lambda.re == T::zero() && lambda.im == T::zero() {
        return Ok(Verdict::Marginal);
    }
    let mut arg = lambda.arg();
    // atan2 yields -π on the negative real axis approached from below;
    // normalize into (-π, π]
    if arg <= -T::of(core::f64::consts::PI) {
        arg = -arg;
    }
    let sector = a * T::of(core::f64::consts::FRAC_PI_2);
    let tol = T::of(SECTOR_TOL);
    let gap = arg.abs() - sector;
    Ok(if gap > tol {
        Verdict::Stable
    } else if gap < -tol {
        Verdict::Unstable
    } else {
        Verdict::Marginal
    })
}

/// A dense real square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Real> SquareMatrix<T> {
    pub fn new(dim: usize, data: Vec<T>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::domain(format!(
                "matrix data length {} does not match dimension {dim}",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("matrix entries must be finite"));
        }
        Ok(SquareMatrix { dim, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::domain("matrix rows must all have length dim"));
        }
        Self::new(dim, rows.iter().flatten().copied().collect())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> T {
        self.data[r * self.dim + c]
    }
}

/// Spectrum plus per-eigenvalue and aggregated verdicts.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport<T> {
    pub eigenvalues: Vec<Complex<T>>,
    pub verdicts: Vec<Verdict>,
    pub system: Verdict,
}

/// Computes the spectrum of `a` (d ≤ 8) and applies [`matignon_check`] to
/// every eigenvalue; the system verdict is the worst case (any Unstable ⇒
/// Unstable, else any Marginal ⇒ Marginal, else Stable).
pub fn classify_system<T: Real>(
    alpha: FracOrder<T>,
    a: &SquareMatrix<T>,
) -> Result<SpectrumReport<T>> {
    if a.dim() > MAX_DIM {
        return Err(Error::domain(format!(
            "classify_system caps the dimension at {MAX_DIM}, got {}",
            a.dim()
        )));
    }
    let eigenvalues = eigenvalues(a)?;
    let verdicts: Vec<Verdict> = eigenvalues
        .iter()
        .map(|l| matignon_check(alpha, *l))
        .collect::<Result<_>>()?;
    let system = if verdicts.iter().any(|v| *v == Verdict::Unstable) {
        Verdict::Unstable
    } else if verdicts.iter().any(|v| *v == Verdict::Marginal) {
        Verdict::Marginal
    } else {
        Verdict::Stable
    };
    Ok(SpectrumReport {
        eigenvalues,
        verdicts,
        system,
    })
}

/// Boolean stability mask sampled over a rectangle of the complex plane.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionMask<T> {
    pub res: Vec<T>,
    pub ims: Vec<T>,
    /// Row-major over (im, re): `mask[i * res.len() + r]`.
    pub mask: Vec<bool>,
}

/// Samples `matignon_check == Stable` on an (re × im) grid, for plotting
/// the stability regions.
pub fn stability_region_sample<T: Real>(
    alpha: FracOrder<T>,
    re_range: (T, T, usize),
    im_range: (T, T, usize),
) -> Result<RegionMask<T>> {
    let axis = |(lo, hi, n): (T, T, usize)| -> Result<Vec<T>> {
        if n < 2 || !(hi > lo) {
            return Err(Error::domain(
                "region axes need at least 2 samples and hi > lo",
            ));
        }
        let step = (hi - lo) / T::of_usize(n - 1);
        Ok((0..n).map(|i| lo + T::of_usize(i) * step).collect())
    };
    let res = axis(re_range)?;
    let ims = axis(im_range)?;
    let mut mask = Vec::with_capacity(res.len() * ims.len());
    for &im in &ims {
        for &re in &res {
            mask.push(matignon_check(alpha, Complex::new(re, im))? == Verdict::Stable);
        }
    }
    Ok(RegionMask { res, ims, mask })
}

/// Outcome of the empirical decay probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayProbe<T> {
    pub decays: bool,
    /// Largest time the probe actually reached before leaving the
    /// Mittag-Leffler evaluation region.
    pub achieved_t: T,
}

/// Watches |E_α(λ t^α)| on a log-spaced grid up to `t_max` and reports the
/// trend; truncates (reporting the achieved time) when λt^α leaves the
/// evaluation region. Cross-validates [`matignon_check`] empirically.
pub fn ml_decay_probe<T: Real>(
    alpha: FracOrder<T>,
    lambda: Complex<T>,
    t_max: T,
) -> Result<DecayProbe<T>> {
    let a = alpha.require_in(0.0, 2.0, "ml_decay_probe")?;
    if !(t_max > T::one()) {
        return Err(Error::domain("ml_decay_probe needs t_max > 1"));
    }
    let params = MLParams::one_param(a)?;
    let t0 = T::of(0.25);
    let n_pts = 48usize;
    let ratio = (t_max / t0).powf(T::of_usize(n_pts - 1).recip());
    let mut mags: Vec<T> = Vec::with_capacity(n_pts);
    let mut achieved = t0;
    let mut t = t0;
    for _ in 0..n_pts {
        let z = lambda * Complex::new(t.powf(a), T::zero());
        match mittag_leffler(params, z) {
            Ok(v) => {
                mags.push(v.norm());
                achieved = t;
            }
            Err(Error::EvaluationRegionExceeded { .. }) | Err(Error::NonConvergence { .. }) => {
                break
            }
            Err(e) => return Err(e),
        }
        t = t * ratio;
    }
    if mags.len() < 8 {
        return Err(Error::EvaluationRegionExceeded {
            z_abs: (lambda.norm() * achieved.powf(a)).to_f64().unwrap_or(f64::NAN),
        });
    }
    let head = median3(mags[0], mags[1], mags[2]);
    let k = mags.len();
    let tail = median3(mags[k - 3], mags[k - 2], mags[k - 1]);
    Ok(DecayProbe {
        decays: tail < head,
        achieved_t: achieved,
    })
}

fn median3<T: Real>(a: T, b: T, c: T) -> T {
    a.max(b).min(a.max(c)).min(b.max(c))
}

/// All eigenvalues of a real matrix.
///
/// Closed form for d ≤ 2; otherwise complex Householder-Hessenberg reduction
/// followed by Wilkinson-shifted QR with deflation.
pub fn eigenvalues<T: Real>(m: &SquareMatrix<T>) -> Result<Vec<Complex<T>>> {
    let d = m.dim();
    match d {
        1 => Ok(vec![Complex::new(m.at(0, 0), T::zero())]),
        2 => {
            let tr = m.at(0, 0) + m.at(1, 1);
            let det = m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
            let half = tr / T::of(2.0);
            let disc = half * half - det;
            if disc >= T::zero() {
                let r = disc.sqrt();
                Ok(vec![
                    Complex::new(half + r, T::zero()),
                    Complex::new(half - r, T::zero()),
                ])
            } else {
                let r = (-disc).sqrt();
                Ok(vec![Complex::new(half, r), Complex::new(half, -r)])
            }
        }
        _ => {
            let mut h: Vec<Complex<T>> = m
                .data
                .iter()
                .map(|v| Complex::new(*v, T::zero()))
                .collect();
            hessenberg(&mut h, d);
            qr_eigenvalues(&mut h, d)
        }
    }
}

/// In-place complex Householder reduction to upper Hessenberg form.
fn hessenberg<T: Real>(h: &mut [Complex<T>], d: usize) {
    let idx = |r: usize, c: usize| r * d + c;
    for col in 0..d.saturating_sub(2) {
        // norm of the sub-column below the subdiagonal
        let mut norm = T::zero();
        for r in col + 1..d {
            norm = norm + h[idx(r, col)].norm_sqr();
        }
        let norm = norm.sqrt();
        if norm <= T::epsilon() {
            continue;
        }
        let pivot = h[idx(col + 1, col)];
        // alpha = -e^{i·arg(pivot)}·norm
        let phase = if pivot.norm() == T::zero() {
            Complex::new(T::one(), T::zero())
        } else {
            pivot / Complex::new(pivot.norm(), T::zero())
        };
        let alpha = -phase * Complex::new(norm, T::zero());
        // v = x - alpha·e1, then H = I - 2 v v*/|v|²
        let mut v: Vec<Complex<T>> = (col + 1..d).map(|r| h[idx(r, col)]).collect();
        v[0] = v[0] - alpha;
        let vnorm2 = v.iter().fold(T::zero(), |s, z| s + z.norm_sqr());
        if vnorm2 <= T::epsilon() * T::epsilon() {
            continue;
        }
        let scale = T::of(2.0) / vnorm2;
        // left multiply rows col+1.. : H A
        for c in col..d {
            let mut dot = Complex::new(T::zero(), T::zero());
            for (i, r) in (col + 1..d).enumerate() {
                dot = dot + v[i].conj() * h[idx(r, c)];
            }
            let dot = dot * Complex::new(scale, T::zero());
            for (i, r) in (col + 1..d).enumerate() {
                h[idx(r, c)] = h[idx(r, c)] - v[i] * dot;
            }
        }
        // right multiply columns col+1.. : A H
        for r in 0..d {
            let mut dot = Complex::new(T::zero(), T::zero());
            for (i, c) in (col + 1..d).enumerate() {
                dot = dot + h[idx(r, c)] * v[i];
            }
            let dot = dot * Complex::new(scale, T::zero());
            for (i, c) in (col + 1..d).enumerate() {
                h[idx(r, c)] = h[idx(r, c)] - dot * v[i].conj();
            }
        }
    }
}

/// Shifted QR on an upper Hessenberg matrix via Givens rotations.
fn qr_eigenvalues<T: Real>(h: &mut [Complex<T>], d: usize) -> Result<Vec<Complex<T>>> {
    let idx = |r: usize, c: usize| r * d + c;
    let mut eigs = Vec::with_capacity(d);
    let mut hi = d - 1;
    let max_sweeps = 40 * d;
    let mut sweeps = 0usize;
    loop {
        // deflate converged subdiagonals
        loop {
            let mut split = None;
            for r in (1..=hi).rev() {
                let sub = h[idx(r, r - 1)].norm();
                let diag = h[idx(r - 1, r - 1)].norm() + h[idx(r, r)].norm();
                if sub <= T::epsilon() * diag.max(T::min_positive_value()) {
                    split = Some(r);
                    break;
                }
            }
            match split {
                Some(r) if r == hi => {
                    eigs.push(h[idx(hi, hi)]);
                    if hi == 1 {
                        eigs.push(h[idx(0, 0)]);
                        return Ok(eigs);
                    }
                    hi -= 1;
                }
                _ => break,
            }
        }
        if hi == 0 {
            eigs.push(h[idx(0, 0)]);
            return Ok(eigs);
        }
        sweeps += 1;
        if sweeps > max_sweeps {
            return Err(Error::EigenConvergenceFailure {
                iterations: max_sweeps,
            });
        }
        // Wilkinson shift from the trailing 2×2 block
        let a = h[idx(hi - 1, hi - 1)];
        let b = h[idx(hi - 1, hi)];
        let c = h[idx(hi, hi - 1)];
        let e = h[idx(hi, hi)];
        let tr2 = (a + e) * Complex::new(T::of(0.5), T::zero());
        let det = a * e - b * c;
        let disc = (tr2 * tr2 - det).sqrt();
        let r1 = tr2 + disc;
        let r2 = tr2 - disc;
        let shift = if (r1 - e).norm() < (r2 - e).norm() {
            r1
        } else {
            r2
        };
        for i in 0..=hi {
            h[idx(i, i)] = h[idx(i, i)] - shift;
        }
        // QR step: Givens rotations down the subdiagonal, then multiply back
        let mut rot: Vec<(T, Complex<T>)> = Vec::with_capacity(hi);
        for r in 0..hi {
            let x = h[idx(r, r)];
            let y = h[idx(r + 1, r)];
            let nrm = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (cs, sn) = if nrm == T::zero() {
                (T::one(), Complex::new(T::zero(), T::zero()))
            } else {
                let inv = nrm.recip();
                // cs real, sn complex so that [cs, sn; -sn*, cs]·[x; y] = [nrm·phase; 0]
                let phase = if x.norm() == T::zero() {
                    Complex::new(T::one(), T::zero())
                } else {
                    x / Complex::new(x.norm(), T::zero())
                };
                (
                    x.norm() * inv,
                    phase * y.conj() * Complex::new(inv, T::zero()),
                )
            };
            rot.push((cs, sn));
            for col in r..=hi {
                let u = h[idx(r, col)];
                let w = h[idx(r + 1, col)];
                h[idx(r, col)] = u * Complex::new(cs, T::zero()) + w * sn;
                h[idx(r + 1, col)] = -u * sn.conj() + w * Complex::new(cs, T::zero());
            }
        }
        for (r, (cs, sn)) in rot.iter().enumerate() {
            for row in 0..=(r + 1).min(hi) {
                let u = h[idx(row, r)];
                let w = h[idx(row, r + 1)];
                h[idx(row, r)] = u * Complex::new(*cs, T::zero()) + w * sn.conj();
                h[idx(row, r + 1)] = -u * *sn + w * Complex::new(*cs, T::zero());
            }
        }
        for i in 0..=hi {
            h[idx(i, i)] = h[idx(i, i)] + shift;
        }
    }
}
