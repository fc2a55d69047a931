//! Minimal double-word accumulator for compensated series summation.
//!
//! Error-free transformations (Knuth's two-sum) over any IEEE float; used to
//! keep roundoff of long, partially cancelling series below the accuracy of
//! the terms themselves.

use crate::scalar::Real;

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Accum<T> {
    hi: T,
    lo: T,
}

impl<T: Real> Accum<T> {
    #[inline]
    pub fn zero() -> Self {
        Accum {
            hi: T::zero(),
            lo: T::zero(),
        }
    }

    /// Adds a term with an error-free two-sum, folding the residue into `lo`.
    #[inline]
    pub fn add(&mut self, x: T) {
        let s = self.hi + x;
        let bb = s - self.hi;
        let err = (self.hi - (s - bb)) + (x - bb);
        self.hi = s;
        self.lo = self.lo + err;
    }

    /// Collapses to a single float.
    #[inline]
    pub fn value(self) -> T {
        self.hi + self.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancellation_beyond_plain_summation() {
        // 1 + eps/2 added and removed many times: plain summation drifts,
        // the compensated one does not.
        let tiny = f64::EPSILON / 2.0;
        let mut acc = Accum::zero();
        acc.add(1.0);
        for _ in 0..1000 {
            acc.add(tiny);
        }
        acc.add(-1.0);
        let exact = 1000.0 * tiny;
        assert!((acc.value() - exact).abs() <= f64::EPSILON * exact);
    }
}
