use crate::error::{Error, Result};
use crate::series::{pade_eval, pade_fit};

use super::EnergyExpansion;

/// Relative size below which the whole correction series is treated as absent.
const NEGLIGIBLE_SERIES: f64 = 1e-12;

/// Number of trailing staircase members compared for convergence.
pub const STABILITY_WINDOW: usize = 5;

/// `lbar^2 E^(-2) + [m/n](1/lbar)` for the correction series.
pub fn resum(e: &EnergyExpansion, m: usize, n: usize) -> Result<f64> {
    let need = m + n + 1;
    if e.corrections.len() < need {
        return Err(Error::ShortSeries {
            need,
            have: e.corrections.len(),
        });
    }
    let t = 1.0 / e.lbar;
    let c = &e.corrections[..need];
    let leading = e.leading();
    let weight: f64 = c
        .iter()
        .enumerate()
        .map(|(i, x)| x.abs() * t.powi(i as i32))
        .sum();
    if weight <= NEGLIGIBLE_SERIES * leading.abs() {
        return Ok(leading + c.iter().rev().fold(0.0, |acc, &x| acc * t + x));
    }
    let p = pade_fit(c, m, n)?;
    Ok(leading + pade_eval(&p, t)?)
}

/// Pade degrees `(1,2), (2,2), (2,3), (3,3), ...` up to `available` coefficients.
pub fn staircase(available: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let (mut m, mut n) = (1, 2);
    while m + n < available {
        out.push((m, n));
        if m < n {
            m += 1;
        } else {
            n += 1;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct StaircaseMember {
    pub m: usize,
    pub n: usize,
    /// `None` when the fit was singular or the approximant has a pole at `1/lbar`.
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stability {
    pub members: Vec<StaircaseMember>,
    /// `max - min` over the last five members that produced a value.
    pub spread: f64,
}

impl Stability {
    pub fn converged(&self, tolerance: f64) -> bool {
        self.spread <= tolerance
    }
}

/// Evaluate the Pade staircase and the spread of its last five members.
pub fn pade_stability(e: &EnergyExpansion) -> Stability {
    let members: Vec<StaircaseMember> = staircase(e.corrections.len())
        .into_iter()
        .map(|(m, n)| StaircaseMember {
            m,
            n,
            value: resum(e, m, n).ok(),
        })
        .collect();
    let tail: Vec<f64> = members
        .iter()
        .rev()
        .filter_map(|mem| mem.value)
        .take(STABILITY_WINDOW)
        .collect();
    let spread = if tail.len() < STABILITY_WINDOW {
        f64::INFINITY
    } else {
        let max = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = tail.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    };
    Stability { members, spread }
}
