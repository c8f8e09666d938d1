//! Shifted large-`l` expansion of radial eigenvalues with Pade resummation.
//!
//! The radial equation `[-1/2 d^2/dq^2 + l_D(l_D+1)/(2q^2) + V(q)] psi = E psi`
//! is expanded in `1/lbar`, `lbar = l_D - beta`, about the minimum `q0` of the
//! leading classical energy. `beta` is chosen so the `lbar^1` term vanishes,
//! leaving `E = lbar^2 E^(-2) + E^(0) + E^(1)/lbar + ...`.

mod geometry;
mod hierarchy;
mod resum;
mod wavefunction;

pub use geometry::{b_coefficients, first_subleading_energy, leading_energy, locate_q0, shift_params};
pub use hierarchy::{
    solve_hierarchy, solve_hierarchy_with, v_series, HierarchySolution, HierarchyState, Precision,
    MAX_ORDER,
};
pub use resum::{pade_stability, resum, staircase, Stability, StaircaseMember};
pub use wavefunction::{wavefunction_eval, Wavefunction, DEFAULT_TRUST_RADIUS};

use crate::error::{Error, Result};
use crate::potential::PotentialModel;

/// Node count and effective angular momentum `l_D = l + (D - 3)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateIndex {
    pub k: usize,
    pub l_d: f64,
}

impl StateIndex {
    /// Planar state with azimuthal number `m`: `l_D = |m| - 1/2`.
    pub fn two_dim(k: usize, m: i64) -> Self {
        Self {
            k,
            l_d: m.unsigned_abs() as f64 - 0.5,
        }
    }
}

/// Geometry of the expansion for one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftParams {
    pub q0: f64,
    pub omega: f64,
    pub beta: f64,
    pub lbar: f64,
    /// Potential scale `Q`, equal to `lbar^2`.
    pub q_scale: f64,
}

/// Energy series `lbar^2 E^(-2) + sum_n E^(n) lbar^(-n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyExpansion {
    pub e_minus2: f64,
    /// `E^(-1)`; kept for diagnostics, zero up to rounding.
    pub e_minus1: f64,
    /// `E^(0)..E^(order)`.
    pub corrections: Vec<f64>,
    pub lbar: f64,
}

impl EnergyExpansion {
    pub fn leading(&self) -> f64 {
        self.lbar * self.lbar * self.e_minus2
    }

    pub fn order(&self) -> usize {
        self.corrections.len().saturating_sub(1)
    }

    /// Plain truncated sum of the series.
    pub fn partial_sum(&self) -> f64 {
        let t = 1.0 / self.lbar;
        self.leading()
            + self
                .corrections
                .iter()
                .rev()
                .fold(0.0, |acc, &c| acc * t + c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    /// Last correction `E^(order)` to build.
    pub order: usize,
    /// Numerator and denominator degree of the final approximant.
    pub pade: (usize, usize),
    pub precision: Precision,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            order: 19,
            pade: (9, 10),
            precision: Precision::Double,
        }
    }
}

/// Everything the engine knows about one solved state.
#[derive(Debug, Clone)]
pub struct Solution {
    pub state: StateIndex,
    pub shift: ShiftParams,
    pub b: Vec<f64>,
    pub expansion: EnergyExpansion,
    pub hierarchy: HierarchyState,
    /// Resummed eigenvalue.
    pub energy: f64,
    /// Approximant that produced `energy`; differs from the configured one
    /// only when that one failed and a lower staircase member was used.
    pub pade_used: (usize, usize),
    pub stability: Stability,
}

impl Solution {
    pub fn leading_fraction(&self) -> f64 {
        self.expansion.leading() / self.energy
    }
}

/// Build the energy series for one state without resumming it.
pub fn expand(
    p: &dyn PotentialModel,
    s: StateIndex,
    order: usize,
    precision: Precision,
) -> Result<(ShiftParams, Vec<f64>, EnergyExpansion, HierarchyState)> {
    let q0 = locate_q0(p, s)?;
    let sp = shift_params(p, q0, s)?;
    let j_max = 2 * order + 2;
    let b = b_coefficients(p, &sp, j_max + 2)?;
    let v = v_series(&b, sp.beta, j_max);
    let h = solve_hierarchy_with(&v, s.k, order, precision)?;
    let q2 = q0 * q0;
    let expansion = EnergyExpansion {
        e_minus2: leading_energy(p, &sp)?,
        e_minus1: h.energy_coefficients[0] / q2,
        corrections: h.scaled_corrections().iter().map(|e| e / q2).collect(),
        lbar: sp.lbar,
    };
    Ok((sp, b, expansion, h.state))
}

/// Full solve: expansion, resummation with staircase fallback, and stability.
pub fn solve(p: &dyn PotentialModel, s: StateIndex, cfg: &EngineConfig) -> Result<Solution> {
    let (shift, b, expansion, hierarchy) = expand(p, s, cfg.order, cfg.precision)?;
    let stability = pade_stability(&expansion);
    let (m, n) = cfg.pade;
    let (energy, pade_used) = match resum(&expansion, m, n) {
        Ok(e) => (e, cfg.pade),
        Err(err @ (Error::SingularPadeSystem { .. } | Error::PoleProximity { .. })) => stability
            .members
            .iter()
            .rev()
            .filter(|mem| mem.m + mem.n < m + n)
            .find_map(|mem| mem.value.map(|v| (v, (mem.m, mem.n))))
            .ok_or(err)?,
        Err(err) => return Err(err),
    };
    Ok(Solution {
        state: s,
        shift,
        b,
        expansion,
        hierarchy,
        energy,
        pade_used,
        stability,
    })
}
