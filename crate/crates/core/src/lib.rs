//! fracal: a numerical toolkit for fractional calculus.
//!
//! The crate evaluates the special functions of fractional calculus (Gamma,
//! Beta, Mittag-Leffler), applies fractional integrals and derivatives
//! (Riemann-Liouville, Caputo, Grünwald-Letnikov) in closed form on monomials
//! and numerically on sampled functions, solves linear and nonlinear
//! fractional initial value problems, classifies the stability of linear
//! fractional systems, and ships two worked applications: the tautochrone
//! inversion and rough-Heston variance simulation.
//!
//! Everything is generic over the floating-point scalar through the [`Real`]
//! trait (`f32` or `f64`); `f64` is the type the accuracy contracts are
//! stated for and the one the CLI uses.
//!
//! # Layout
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`specialfn`] | Γ, B, E_{α,β}, P_α |
//! | [`operators`] | I_α, d^α (RL, Caputo, GL), kernel weights |
//! | [`linode`] | closed-form solutions of linear fractional IVPs |
//! | [`solver`] | fractional Euler and Adams predictor-corrector |
//! | [`stability`] | Matignon sector test, spectra, stability regions |
//! | [`tautochrone`] | Abel inversion and the cycloid |
//! | [`roughheston`] | seeded Monte Carlo for GBM / Heston / rough Heston |
//!
//! # Quick start
//!
//! ```
//! use fracal::prelude::*;
//!
//! // E_{1,1}(1) is the exponential series.
//! let e = mittag_leffler(MLParams::new(1.0, 1.0).unwrap(), Complex::new(1.0, 0.0)).unwrap();
//! assert!((e.re - 1.0f64.exp()).abs() < 1e-12);
//!
//! // Solve the Caputo problem d^α u = -u, u(0) = 1 on [0, 1].
//! let grid = UniformGrid::new(2f64.powi(-8), 256).unwrap();
//! let ivp = FracIVP::scalar(DerivKind::Caputo, FracOrder::new(0.5).unwrap(), 1.0, 1.0,
//!     |_t, u| -u);
//! let path = solve_explicit_euler(&ivp, &grid).unwrap();
//! assert!(path.value(256) > 0.0 && path.value(256) < 1.0);
//! ```

pub mod error;
pub mod linode;
pub mod operators;
pub mod roughheston;
pub mod scalar;
pub mod solver;
pub mod specialfn;
pub mod stability;
pub mod tautochrone;
pub mod types;

mod dd;

pub use error::{Error, Result};
pub use scalar::Real;
pub use types::{DerivKind, FracOrder, SampledFunction, UniformGrid};

/// Convenient re-exports of the most used items.
pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::linode::{
        solve_caputo_forced, solve_caputo_homogeneous, solve_rl_forced, solve_rl_homogeneous,
        Forcing, LinearProblem,
    };
    pub use crate::operators::{
        caputo_derivative_monomial, caputo_derivative_num, frac_integral_monomial,
        frac_integral_num, gl_derivative, rl_derivative_monomial, rl_derivative_num,
        KernelWeights, Monomial,
    };
    pub use crate::roughheston::{
        simulate_classical_heston, simulate_gbm, simulate_rough_heston, McRun, RoughHestonParams,
    };
    pub use crate::scalar::Real;
    pub use crate::solver::{
        kernel_weights, solve_adams_pc, solve_explicit_euler, solve_implicit_euler, FracIVP,
        SolutionPath,
    };
    pub use crate::specialfn::{beta, gamma, mittag_leffler, p_alpha, MLParams};
    pub use crate::stability::{
        classify_system, matignon_check, ml_decay_probe, stability_region_sample, SquareMatrix,
        Verdict,
    };
    pub use crate::tautochrone::{abel_forward, curve_from_arclength, solve_abel, AbelProblem};
    pub use crate::types::{DerivKind, FracOrder, SampledFunction, UniformGrid};
    pub use num_complex::Complex;
}
