//! Radial potentials with exact derivatives.

use crate::error::{Error, Result};

/// A radial potential `V(q)` that can report exact derivatives at a point.
pub trait PotentialModel: Send + Sync {
    /// `d^n V / dq^n` at `q`. `derivative(q, 0)` is the value itself.
    fn derivative(&self, q: f64, n: usize) -> Result<f64>;

    fn value(&self, q: f64) -> Result<f64> {
        self.derivative(q, 0)
    }

    /// `q^n V^(n)(q) / n!`, the Taylor coefficient of `V(q (1 + u))` in `u`.
    ///
    /// Implementations should override this when `V^(n)` and `n!` overflow
    /// separately but their ratio does not.
    fn scaled_taylor(&self, q: f64, n: usize) -> Result<f64> {
        let mut s = self.derivative(q, n)?;
        for i in 1..=n {
            s *= q / i as f64;
        }
        Ok(s)
    }

    /// Interval in which to look for the expansion point.
    fn search_interval(&self) -> (f64, f64) {
        (1e-3, 1e3)
    }
}

/// `V(q) = a q^2 + c / q`: oscillator confinement plus a repulsive Coulomb core.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridParams {
    pub a_osc: f64,
    pub c_coul: f64,
}

impl HybridParams {
    pub fn new(a_osc: f64, c_coul: f64) -> Self {
        Self { a_osc, c_coul }
    }

    /// Radius where `V'(q)` changes sign; the harmonic frequency diverges there.
    pub fn force_balance_radius(&self) -> f64 {
        if self.c_coul <= 0.0 || self.a_osc <= 0.0 {
            0.0
        } else {
            (self.c_coul / (2.0 * self.a_osc)).cbrt()
        }
    }

    /// `(2a)^(-1/4)`, the length scale of the pure oscillator with kinetic term `-1/2 d^2/dq^2`.
    pub fn oscillator_length(&self) -> f64 {
        (2.0 * self.a_osc).powf(-0.25)
    }
}

/// Closed-form `n`-th derivative of the hybrid potential.
pub fn hybrid_derivative(p: &HybridParams, q: f64, n: usize) -> Result<f64> {
    if q <= 0.0 || q.is_nan() {
        return Err(Error::NonPositiveRadius(q));
    }
    let (a, c) = (p.a_osc, p.c_coul);
    Ok(match n {
        0 => a * q * q + c / q,
        1 => 2.0 * a * q - c / (q * q),
        2 => 2.0 * a + 2.0 * c / (q * q * q),
        _ => {
            if c == 0.0 {
                return Ok(0.0);
            }
            let mut d = c / q;
            for i in 1..=n {
                d *= -(i as f64) / q;
            }
            d
        }
    })
}

impl PotentialModel for HybridParams {
    fn derivative(&self, q: f64, n: usize) -> Result<f64> {
        hybrid_derivative(self, q, n)
    }

    fn scaled_taylor(&self, q: f64, n: usize) -> Result<f64> {
        if q <= 0.0 || q.is_nan() {
            return Err(Error::NonPositiveRadius(q));
        }
        let (a, c) = (self.a_osc, self.c_coul);
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        Ok(match n {
            0 => a * q * q + c / q,
            1 => 2.0 * a * q * q - c / q,
            2 => a * q * q + c / q,
            _ => sign * c / q,
        })
    }

    fn search_interval(&self) -> (f64, f64) {
        let pole = self.force_balance_radius();
        let len = if self.a_osc > 0.0 {
            self.oscillator_length()
        } else {
            1.0
        };
        let lo = if pole > 0.0 {
            pole * (1.0 + 1e-9)
        } else {
            1e-4 * len
        };
        (lo, 1e3 * len.max(pole))
    }
}

/// `(m^2 - 1/4)/q^2 + V(q)`: the potential seen by a 2D radial function `sqrt(q) R(q)`.
pub fn effective_value(m: i64, p: &dyn PotentialModel, q: f64) -> Result<f64> {
    if q <= 0.0 || q.is_nan() {
        return Err(Error::NonPositiveRadius(q));
    }
    let m = m as f64;
    Ok((m * m - 0.25) / (q * q) + p.value(q)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn closed_forms() {
        let p = HybridParams::new(0.5, 2.0);
        assert_eq!(hybrid_derivative(&p, 1.0, 0).unwrap(), 2.5);
        assert_eq!(hybrid_derivative(&p, 1.0, 2).unwrap(), 5.0);
        let p = HybridParams::new(0.005, 1.0);
        assert!((hybrid_derivative(&p, 2.0, 3).unwrap() + 0.375).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_positive_radius() {
        let p = HybridParams::new(0.5, 2.0);
        assert_eq!(hybrid_derivative(&p, 0.0, 1), Err(Error::NonPositiveRadius(0.0)));
        assert!(effective_value(0, &p, -1.0).is_err());
    }

    #[test]
    fn effective_potential_core() {
        let free = HybridParams::new(0.0, 0.0);
        assert_eq!(effective_value(0, &free, 2.0).unwrap(), -1.0 / 16.0);
        assert_eq!(effective_value(1, &free, 1.0).unwrap(), 0.75);
        let p = HybridParams::new(0.5, 2.0);
        assert_eq!(effective_value(2, &p, 1.0).unwrap(), 6.25);
    }

    #[test]
    fn scaled_taylor_matches_default() {
        struct Plain(HybridParams);
        impl PotentialModel for Plain {
            fn derivative(&self, q: f64, n: usize) -> Result<f64> {
                self.0.derivative(q, n)
            }
        }
        let h = HybridParams::new(0.03, 0.7);
        for n in 0..12 {
            let a = h.scaled_taylor(2.3, n).unwrap();
            let b = Plain(h).scaled_taylor(2.3, n).unwrap();
            assert!((a - b).abs() <= 1e-13 * a.abs().max(1e-300), "n = {n}");
        }
    }

    proptest! {
        #[test]
        fn no_coulomb_means_no_high_derivatives(a in 0.0f64..10.0, q in 0.01f64..100.0, n in 3usize..40) {
            prop_assert_eq!(hybrid_derivative(&HybridParams::new(a, 0.0), q, n).unwrap(), 0.0);
        }

        #[test]
        fn derivatives_match_finite_differences(
            a in 0.001f64..1.0, c in 0.0f64..3.0, q in 0.5f64..50.0, n in 1usize..=6
        ) {
            let p = HybridParams::new(a, c);
            let h = 1e-4 * q;
            let fd = (hybrid_derivative(&p, q + h, n - 1).unwrap()
                - hybrid_derivative(&p, q - h, n - 1).unwrap()) / (2.0 * h);
            let exact = hybrid_derivative(&p, q, n).unwrap();
            let scale = exact.abs().max(hybrid_derivative(&p, q, n - 1).unwrap().abs() / q);
            prop_assert!((fd - exact).abs() <= 1e-6 * scale, "fd {} exact {}", fd, exact);
        }
    }
}
