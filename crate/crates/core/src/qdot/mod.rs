//! Parabolic quantum dots in a perpendicular field: the ion-electron system
//! and the two-electron system split into centre-of-mass and relative
//! motion. Energies are in effective Rydbergs.
//!
//! Each radial problem is handed to the engine in its half-scaled form
//! `-1/2 u'' + (m^2 - 1/4)/(2q^2) u + (a q^2 + c/q) u = eps u`:
//!
//! | system | `a`       | `c`  | energy            |
//! |--------|-----------|------|-------------------|
//! | ion    | `G^2/8`   | 1    | `2 eps + m gamma` |
//! | RM     | `G^2/32`  | 1/2  | `4 eps + m gamma` |

mod label;
mod scan;

pub use label::{spin_of, StateLabel, TwoElectronState};
pub use scan::{scan_spectrum, Crossing, Level, ScanAxis, ScanPoint, ScanResult, CROSSING_WIDTH, DEGENERACY_TOL};

use crate::error::{Error, Result};
use crate::potential::HybridParams;
use crate::pslet::{solve, EngineConfig, Solution, StateIndex};

/// Largest acceptable last-five Pade spread, in Ry*.
pub const SPREAD_THRESHOLD: f64 = 5e-5;

/// Field and confinement strengths; `Gamma` is always derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DotParams {
    pub gamma: f64,
    pub gamma_d: f64,
}

impl DotParams {
    pub fn new(gamma: f64, gamma_d: f64) -> Self {
        Self { gamma, gamma_d }
    }

    /// `Gamma = sqrt(gamma^2 + gamma_d^2)`.
    #[allow(non_snake_case)]
    pub fn Gamma(&self) -> f64 {
        self.gamma.hypot(self.gamma_d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialSystem {
    Ion,
    Relative,
}

impl RadialSystem {
    /// Hybrid coefficients of the half-scaled radial problem.
    pub fn potential(self, d: DotParams, coulomb: bool) -> HybridParams {
        let g2 = d.Gamma().powi(2);
        let (a, c) = match self {
            RadialSystem::Ion => (g2 / 8.0, 1.0),
            RadialSystem::Relative => (g2 / 32.0, 0.5),
        };
        HybridParams::new(a, if coulomb { c } else { 0.0 })
    }

    /// Factor between the engine eigenvalue and the physical energy.
    pub fn energy_scale(self) -> f64 {
        match self {
            RadialSystem::Ion => 2.0,
            RadialSystem::Relative => 4.0,
        }
    }
}

/// A physical radial energy with its convergence diagnostics.
#[derive(Debug, Clone)]
pub struct RadialEnergy {
    pub energy: f64,
    pub leading_fraction: f64,
    /// Last-five staircase spread, in Ry*.
    pub pade_spread: f64,
    pub solution: Solution,
}

impl RadialEnergy {
    pub fn converged(&self) -> bool {
        self.pade_spread <= SPREAD_THRESHOLD
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoElectronLevel {
    pub state: TwoElectronState,
    pub spin: u8,
    pub energy: f64,
    pub leading_fraction: f64,
    pub pade_spread: f64,
}

/// One evaluated point of a spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRecord {
    pub label: String,
    pub dot: DotParams,
    pub energy: f64,
    pub leading_fraction: f64,
    pub pade_spread: f64,
    pub converged: bool,
    pub oracle_delta: Option<f64>,
}

/// Engine settings plus the Coulomb switch shared by every evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DotSolver {
    pub engine: EngineConfig,
    pub coulomb: bool,
}

impl Default for DotSolver {
    fn default() -> Self {
        Self {
            engine: EngineConfig::default(),
            coulomb: true,
        }
    }
}

impl DotSolver {
    pub fn without_coulomb() -> Self {
        Self {
            coulomb: false,
            ..Self::default()
        }
    }

    pub fn radial(&self, sys: RadialSystem, d: DotParams, st: StateLabel) -> Result<RadialEnergy> {
        let tag = match sys {
            RadialSystem::Ion => "ion",
            RadialSystem::Relative => "rm",
        };
        let label = format!("{tag} {}", st.tuple());
        if !(d.gamma_d > 0.0) || !(d.gamma >= 0.0) {
            return Err(Error::InvalidDot {
                gamma: d.gamma,
                gamma_d: d.gamma_d,
            }
            .for_state(label));
        }
        let p = sys.potential(d, self.coulomb);
        let sol = solve(&p, StateIndex::two_dim(st.k, st.m), &self.engine)
            .map_err(|e| e.for_state(label))?;
        let scale = sys.energy_scale();
        Ok(RadialEnergy {
            energy: scale * sol.energy + st.m as f64 * d.gamma,
            leading_fraction: sol.leading_fraction(),
            pade_spread: scale * sol.stability.spread,
            solution: sol,
        })
    }

    pub fn ion(&self, d: DotParams, st: StateLabel) -> Result<RadialEnergy> {
        self.radial(RadialSystem::Ion, d, st)
    }

    pub fn rm(&self, d: DotParams, st: StateLabel) -> Result<RadialEnergy> {
        self.radial(RadialSystem::Relative, d, st)
    }

    /// `E_i(k,m)`.
    pub fn ion_energy(&self, d: DotParams, st: StateLabel) -> Result<f64> {
        Ok(self.ion(d, st)?.energy)
    }

    /// `E_ie = E_i - E_i0`.
    pub fn ion_interaction(&self, d: DotParams, st: StateLabel) -> Result<f64> {
        Ok(self.ion_energy(d, st)? - ion_free_energy(d, st))
    }

    /// Relative-motion energy `E(k,m)`.
    pub fn rm_energy(&self, d: DotParams, st: StateLabel) -> Result<f64> {
        Ok(self.rm(d, st)?.energy)
    }

    /// `E_ee = E(k,m) - E_0(k,m)`; depends on `Gamma` only.
    pub fn ee_interaction(&self, d: DotParams, st: StateLabel) -> Result<f64> {
        Ok(self.rm_energy(d, st)? - free_energy(d, st.k, st.m))
    }

    /// `E(k,m;K,M) = E(k,m) + E(K,M)`.
    pub fn total_energy(&self, d: DotParams, s: TwoElectronState) -> Result<TwoElectronLevel> {
        let rm = self.rm(d, s.rm)?;
        Ok(TwoElectronLevel {
            state: s,
            spin: s.spin(),
            energy: rm.energy + cm_energy(d, s.cm_k, s.cm_m),
            leading_fraction: rm.leading_fraction,
            pade_spread: rm.pade_spread,
        })
    }

    /// Levels sorted ascending by energy; each entry keeps its input index.
    pub fn level_order(
        &self,
        d: DotParams,
        levels: &[TwoElectronState],
    ) -> Result<Vec<(usize, TwoElectronLevel)>> {
        use rayon::prelude::*;
        let evaluated: Vec<TwoElectronLevel> = levels
            .par_iter()
            .map(|&s| self.total_energy(d, s))
            .collect::<Result<_>>()?;
        let mut out: Vec<(usize, TwoElectronLevel)> = evaluated.into_iter().enumerate().collect();
        out.sort_by(|(_, a), (_, b)| {
            a.energy
                .total_cmp(&b.energy)
                .then_with(|| a.state.sort_key().cmp(&b.state.sort_key()))
        });
        Ok(out)
    }
}

/// `(2k + |m| + 1) Gamma + m gamma`, shared by the free ion, the free
/// relative motion and the centre of mass.
pub fn free_energy(d: DotParams, k: usize, m: i64) -> f64 {
    (2.0 * k as f64 + m.unsigned_abs() as f64 + 1.0) * d.Gamma() + m as f64 * d.gamma
}

pub fn ion_free_energy(d: DotParams, st: StateLabel) -> f64 {
    free_energy(d, st.k, st.m)
}

pub fn cm_energy(d: DotParams, cm_k: usize, cm_m: i64) -> f64 {
    free_energy(d, cm_k, cm_m)
}

/// The s state `(k,0)` that `(k',m')` joins in the strong-field limit:
/// `2(k' - k) = -|m'| - m'`.
pub fn landau_cluster(kp: usize, mp: i64) -> Result<StateLabel> {
    let shift = mp.abs() + mp;
    if shift % 2 != 0 {
        return Err(Error::NonIntegralCluster { k: kp, m: mp });
    }
    Ok(StateLabel::new(kp + (shift / 2) as usize, 0))
}
