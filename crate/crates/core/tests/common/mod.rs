//! Shared test support: an independent extended-precision series oracle for
//! half-order Mittag-Leffler values, plus small helpers.
//!
//! The oracle never calls the library: terms of E_{1/2,β}(x) advance through
//! the exact recurrence Γ(q+1) = qΓ(q) (two interleaved chains seeded by
//! Γ(β) and Γ(β+1/2)), summed in double-double arithmetic.

#![allow(dead_code)]

/// Double-double value (hi + lo).
#[derive(Clone, Copy, Debug)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, other: Dd) -> Dd {
        // Knuth two-sum on the high words, fold everything else into lo
        let s = self.hi + other.hi;
        let bb = s - self.hi;
        let err = (self.hi - (s - bb)) + (other.hi - bb);
        let lo = err + self.lo + other.lo;
        let hi = s + lo;
        Dd {
            hi,
            lo: lo - (hi - s),
        }
    }

    pub fn mul_f64(self, x: f64) -> Dd {
        // two-product via FMA
        let p = self.hi * x;
        let e = self.hi.mul_add(x, -p);
        let lo = self.lo * x + e;
        let hi = p + lo;
        Dd {
            hi,
            lo: lo - (hi - p),
        }
    }

    pub fn div_f64(self, x: f64) -> Dd {
        let q1 = self.hi / x;
        // residual (self - q1*x) / x
        let r = -q1.mul_add(x, -self.hi) + self.lo;
        let q2 = r / x;
        let hi = q1 + q2;
        Dd {
            hi,
            lo: q2 - (hi - q1),
        }
    }
}

pub const SQRT_PI: f64 = 1.7724538509055159;

/// E_{1/2,β}(x) for β ∈ {1/2, 1} by 500-term double-double summation with
/// exact Γ recurrences (no Gamma evaluations at all).
pub fn ml_half_oracle(beta: f64, x: f64) -> f64 {
    // seeds: Γ(β) and Γ(β + 1/2)
    let (g_even, g_odd) = if beta == 1.0 {
        (1.0, 0.5 * SQRT_PI) // Γ(1), Γ(3/2)
    } else if beta == 0.5 {
        (SQRT_PI, 1.0) // Γ(1/2), Γ(1)
    } else {
        panic!("oracle seeds only cover beta in {{1/2, 1}}");
    };
    let mut sum = Dd::from(0.0);
    // even chain: t_0 = 1/Γ(β), t_{n+2} = t_n·x² / (n/2 + β)
    let mut t = Dd::from(1.0).div_f64(g_even);
    let mut n = 0.0f64;
    for _ in 0..250 {
        sum = sum.add(t);
        t = t.mul_f64(x).mul_f64(x).div_f64(0.5 * n + beta);
        n += 2.0;
    }
    // odd chain: t_1 = x/Γ(β + 1/2), same two-step recurrence
    let mut t = Dd::from(x).div_f64(g_odd);
    let mut n = 1.0f64;
    for _ in 0..250 {
        sum = sum.add(t);
        t = t.mul_f64(x).mul_f64(x).div_f64(0.5 * n + beta);
        n += 2.0;
    }
    sum.value()
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

pub fn sup_err(got: &[f64], want: &[f64]) -> f64 {
    got.iter()
        .zip(want)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}
