use crate::error::{Error, Result};
use crate::potential::PotentialModel;

use super::{ShiftParams, StateIndex};

const SCAN_POINTS: usize = 600;
const MAX_POLISH_ITERATIONS: usize = 200;

/// Residual of the shift condition and its derivative at `q`, or `None`
/// where `V'(q) <= 0` or the harmonic frequency is imaginary.
fn residual(p: &dyn PotentialModel, s: StateIndex, q: f64) -> Result<Option<(f64, f64)>> {
    let d1 = p.derivative(q, 1)?;
    if d1 <= 0.0 {
        return Ok(None);
    }
    let d2 = p.derivative(q, 2)?;
    let d3 = p.derivative(q, 3)?;
    let omega_sq = 3.0 + q * d2 / d1;
    if omega_sq <= 0.0 {
        return Ok(None);
    }
    let omega = omega_sq.sqrt();
    let root = (q * q * q * d1).sqrt();
    let nodal = s.k as f64 + 0.5;
    let g = root - (s.l_d + 0.5 + nodal * omega);

    let d_root = (3.0 * q * q * d1 + q * q * q * d2) / (2.0 * root);
    let d_omega_sq = d2 / d1 + q * d3 / d1 - q * d2 * d2 / (d1 * d1);
    let dg = d_root - nodal * d_omega_sq / (2.0 * omega);
    Ok(Some((g, dg)))
}

/// Find the expansion point `q0` where `sqrt(q0^3 V'(q0)) = l_D + 1/2 + (k + 1/2) Omega(q0)`.
///
/// A log-spaced scan over the potential's search interval brackets the
/// smallest root; bisection-safeguarded Newton polishes it.
pub fn locate_q0(p: &dyn PotentialModel, s: StateIndex) -> Result<f64> {
    let (lo, hi) = p.search_interval();
    let ratio = (hi / lo).powf(1.0 / (SCAN_POINTS - 1) as f64);

    let mut any_valid = false;
    let mut prev: Option<(f64, f64)> = None;
    let mut bracket = None;
    let mut q = lo;
    for _ in 0..SCAN_POINTS {
        match residual(p, s, q)? {
            Some((g, _)) => {
                any_valid = true;
                if g == 0.0 {
                    return Ok(q);
                }
                if let Some((qp, gp)) = prev {
                    if gp < 0.0 && g > 0.0 {
                        bracket = Some((qp, q));
                        break;
                    }
                }
                prev = Some((q, g));
            }
            None => prev = None,
        }
        q *= ratio;
    }
    if !any_valid {
        let d1 = p.derivative(lo, 1)?;
        let d2 = p.derivative(lo, 2)?;
        return Err(Error::OmegaDomainError {
            q0: lo,
            omega_sq: 3.0 + lo * d2 / d1,
        });
    }
    let (mut a, mut b) = bracket.ok_or(Error::NoRootInDomain { lo, hi })?;

    let mut x = 0.5 * (a + b);
    for _ in 0..MAX_POLISH_ITERATIONS {
        let Some((g, dg)) = residual(p, s, x)? else {
            // only reachable if the bracket straddles an invalid pocket
            x = 0.5 * (a + b);
            continue;
        };
        let scale = 1.0 + s.l_d.abs() + (s.k as f64 + 0.5);
        if g.abs() <= 1e-14 * scale {
            return Ok(x);
        }
        if g < 0.0 {
            a = x;
        } else {
            b = x;
        }
        if b - a <= 4.0 * f64::EPSILON * b {
            return Ok(x);
        }
        let newton = x - g / dg;
        x = if dg.is_finite() && dg != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
    }
    Ok(x)
}

/// Harmonic frequency, shift, and expansion parameter at a given `q0`.
pub fn shift_params(p: &dyn PotentialModel, q0: f64, s: StateIndex) -> Result<ShiftParams> {
    let d1 = p.derivative(q0, 1)?;
    let d2 = p.derivative(q0, 2)?;
    let omega_sq = 3.0 + q0 * d2 / d1;
    if !(omega_sq > 0.0) {
        return Err(Error::OmegaDomainError { q0, omega_sq });
    }
    let omega = omega_sq.sqrt();
    let beta = -(0.5 + (s.k as f64 + 0.5) * omega);
    let lbar = s.l_d - beta;
    Ok(ShiftParams {
        q0,
        omega,
        beta,
        lbar,
        q_scale: lbar * lbar,
    })
}

/// `B_n` for `n = 0..=n_max` (index `n` holds `B_n`).
///
/// `B_n = (-1)^n (n+1)/2 + q0^(n+2) V^(n)(q0) / (n! Q)`; `B_0` is `q0^2 E^(-2)`.
pub fn b_coefficients(p: &dyn PotentialModel, sp: &ShiftParams, n_max: usize) -> Result<Vec<f64>> {
    let q2 = sp.q0 * sp.q0;
    (0..=n_max)
        .map(|n| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            Ok(sign * (n as f64 + 1.0) / 2.0 + p.scaled_taylor(sp.q0, n)? * q2 / sp.q_scale)
        })
        .collect()
}

/// `E^(-2) = 1/(2 q0^2) + V(q0)/Q`.
pub fn leading_energy(p: &dyn PotentialModel, sp: &ShiftParams) -> Result<f64> {
    Ok(0.5 / (sp.q0 * sp.q0) + p.value(sp.q0)? / sp.q_scale)
}

/// `E^(-1) = [(2 beta + 1)/2 + (k + 1/2) Omega] / q0^2`; zero by the choice of `beta`.
pub fn first_subleading_energy(sp: &ShiftParams, k: usize) -> f64 {
    ((2.0 * sp.beta + 1.0) / 2.0 + (k as f64 + 0.5) * sp.omega) / (sp.q0 * sp.q0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::HybridParams;

    #[test]
    fn pure_oscillator_root_is_closed_form() {
        for b in [0.2, 1.0, 3.0] {
            let p = HybridParams::new(b * b / 2.0, 0.0);
            for k in 0..3 {
                let s = StateIndex { k, l_d: 0.0 };
                let q0 = locate_q0(&p, s).unwrap();
                let expected = ((2.0 * k as f64 + 1.5) / b).sqrt();
                assert!((q0 - expected).abs() < 1e-12 * expected, "b={b} k={k}");
                let sp = shift_params(&p, q0, s).unwrap();
                assert_eq!(sp.omega, 2.0);
            }
        }
    }

    #[test]
    fn beta_for_ground_oscillator() {
        let p = HybridParams::new(0.5, 0.0);
        let sp = shift_params(&p, 1.3, StateIndex { k: 0, l_d: 0.0 }).unwrap();
        assert_eq!(sp.beta, -1.5);
        assert_eq!(sp.lbar, 1.5);
        assert_eq!(sp.q_scale, 2.25);
    }

    #[test]
    fn omega_at_double_force_balance() {
        // b = 1, c = 2: b^2 q0^3 = 4 gives Omega = sqrt(7)
        let p = HybridParams::new(0.5, 2.0);
        let q0 = 4f64.cbrt();
        let sp = shift_params(&p, q0, StateIndex { k: 0, l_d: 0.0 }).unwrap();
        assert!((sp.omega - 7f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn ion_ground_state_root() {
        // Oracle: plain bisection on the residual written out for the hybrid case.
        let (a, c) = (0.005, 1.0);
        let g = |q: f64| {
            let v1 = 2.0 * a * q - c / (q * q);
            let v2 = 2.0 * a + 2.0 * c / (q * q * q);
            (q * q * q * v1).sqrt() - (-0.5 + 0.5 + 0.5 * (3.0 + q * v2 / v1).sqrt())
        };
        let (mut lo, mut hi) = ((c / (2.0 * a)).cbrt() * 1.0001, 100.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) < 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        let q0 = locate_q0(&HybridParams::new(a, c), StateIndex::two_dim(0, 0)).unwrap();
        assert!((q0 - lo).abs() < 1e-10 * lo, "{q0} vs {lo}");
        // regression value
        assert!((q0 - 5.292_647_259).abs() < 1e-8, "{q0}");
    }

    #[test]
    fn root_satisfies_shift_invariants() {
        let p = HybridParams::new(1.0 / 32.0, 0.5);
        for (k, m) in [(0, 0), (1, 2), (3, 0), (0, 4)] {
            let s = StateIndex::two_dim(k, m);
            let q0 = locate_q0(&p, s).unwrap();
            let sp = shift_params(&p, q0, s).unwrap();
            let v1 = p.derivative(q0, 1).unwrap();
            let v2 = p.derivative(q0, 2).unwrap();
            assert!((sp.lbar - (q0.powi(3) * v1).sqrt()).abs() <= 1e-9 * sp.lbar);
            assert!((sp.omega.powi(2) - (3.0 + q0 * v2 / v1)).abs() <= 1e-12 * sp.omega.powi(2));
            let b = b_coefficients(&p, &sp, 4).unwrap();
            assert!(b[1].abs() <= 1e-9);
            assert!((2.0 * b[2] - sp.omega.powi(2)).abs() <= 1e-10 * sp.omega.powi(2));
            let e2 = leading_energy(&p, &sp).unwrap();
            assert!(first_subleading_energy(&sp, k).abs() <= 1e-10 * e2.abs());
        }
    }

    #[test]
    fn b3_matches_direct_formula() {
        let p = HybridParams::new(0.5, 2.0);
        let q0 = 1.7;
        let sp = shift_params(&p, q0, StateIndex { k: 0, l_d: 0.0 }).unwrap();
        let b = b_coefficients(&p, &sp, 3).unwrap();
        let v3 = -6.0 * 2.0 / q0.powi(4);
        let direct = -4.0 / 2.0 + v3 * q0.powi(5) / (6.0 * sp.q_scale);
        assert!((b[3] - direct).abs() < 1e-14);
    }

    #[test]
    fn leading_energy_substitution() {
        let p = HybridParams::new(0.5, 2.0);
        let sp = ShiftParams {
            q0: 1.0,
            omega: 2.0,
            beta: -1.5,
            lbar: 2.0,
            q_scale: 4.0,
        };
        assert_eq!(leading_energy(&p, &sp).unwrap(), 1.125);
    }
}
