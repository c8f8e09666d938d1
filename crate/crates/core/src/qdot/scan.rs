use rayon::prelude::*;

use super::{DotParams, DotSolver, SpectrumRecord, StateLabel, TwoElectronState};
use crate::error::Result;

/// Crossing intervals are bisected down to this width.
pub const CROSSING_WIDTH: f64 = 1e-4;

/// Energy differences below this (relative) size count as degeneracies, so
/// round-off between exactly degenerate levels is not reported as crossings.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Which energy of which state a scan follows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Level {
    /// `E_i(k,m)`.
    Ion(StateLabel),
    /// `E_ee(k,m)`.
    Interaction(StateLabel),
    /// `E(k,m;K,M)`.
    TwoElectron(TwoElectronState),
}

impl Level {
    pub fn label(&self) -> String {
        match self {
            Level::Ion(s) | Level::Interaction(s) => s.tuple(),
            Level::TwoElectron(s) => s.to_string(),
        }
    }

    pub fn evaluate(&self, solver: &DotSolver, d: DotParams) -> Result<SpectrumRecord> {
        let (energy, leading_fraction, pade_spread) = match *self {
            Level::Ion(s) => {
                let r = solver.ion(d, s)?;
                (r.energy, r.leading_fraction, r.pade_spread)
            }
            Level::Interaction(s) => {
                let r = solver.rm(d, s)?;
                let e = r.energy - super::free_energy(d, s.k, s.m);
                (e, r.leading_fraction, r.pade_spread)
            }
            Level::TwoElectron(s) => {
                let l = solver.total_energy(d, s)?;
                (l.energy, l.leading_fraction, l.pade_spread)
            }
        };
        Ok(SpectrumRecord {
            label: self.label(),
            dot: d,
            energy,
            leading_fraction,
            pade_spread,
            converged: pade_spread <= super::SPREAD_THRESHOLD,
            oracle_delta: None,
        })
    }
}

/// The scanned variable: `gamma` at fixed `gamma_d`, or `Gamma` at zero field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanAxis {
    Gamma { gamma_d: f64 },
    BigGamma,
}

impl ScanAxis {
    pub fn dot(&self, x: f64) -> DotParams {
        match *self {
            ScanAxis::Gamma { gamma_d } => DotParams::new(x, gamma_d),
            ScanAxis::BigGamma => DotParams::new(0.0, x),
        }
    }
}

#[derive(Debug)]
pub struct ScanPoint {
    pub level: usize,
    pub x: f64,
    pub outcome: Result<SpectrumRecord>,
}

/// Levels `a < b` swap order somewhere in `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub a: usize,
    pub b: usize,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug)]
pub struct ScanResult {
    /// Level-major: all grid points of level 0, then level 1, ...
    pub points: Vec<ScanPoint>,
    pub crossings: Vec<Crossing>,
}

impl ScanResult {
    pub fn energy(&self, level: usize, i: usize, n_grid: usize) -> Option<f64> {
        self.points[level * n_grid + i].outcome.as_ref().ok().map(|r| r.energy)
    }
}

/// Evaluate every level on every grid point and locate sign changes of
/// every pairwise energy difference. Failed points are kept and skipped.
pub fn scan_spectrum(
    solver: &DotSolver,
    levels: &[Level],
    axis: ScanAxis,
    grid: &[f64],
) -> ScanResult {
    assert!(
        grid.windows(2).all(|w| w[0] < w[1]),
        "scan grid must be strictly increasing"
    );
    let n = grid.len();
    let points: Vec<ScanPoint> = (0..levels.len() * n)
        .into_par_iter()
        .map(|idx| {
            let (level, i) = (idx / n, idx % n);
            ScanPoint {
                level,
                x: grid[i],
                outcome: levels[level].evaluate(solver, axis.dot(grid[i])),
            }
        })
        .collect();
    let energy = |l: usize, i: usize| points[l * n + i].outcome.as_ref().ok().map(|r| r.energy);

    let mut brackets = Vec::new();
    for a in 0..levels.len() {
        for b in a + 1..levels.len() {
            for i in 0..n.saturating_sub(1) {
                let diff = |i: usize| {
                    energy(a, i).zip(energy(b, i)).and_then(|(x, y)| {
                        let scale = DEGENERACY_TOL * (1.0 + x.abs().max(y.abs()));
                        ((x - y).abs() > scale).then_some(x - y)
                    })
                };
                if let (Some(d0), Some(d1)) = (diff(i), diff(i + 1)) {
                    if d0 * d1 < 0.0 {
                        brackets.push((a, b, grid[i], grid[i + 1], d0));
                    }
                }
            }
        }
    }
    let crossings = brackets
        .into_par_iter()
        .map(|(a, b, lo, hi, d_lo)| {
            let (lo, hi) = refine(solver, levels[a], levels[b], axis, lo, hi, d_lo);
            Crossing { a, b, lo, hi }
        })
        .collect();
    ScanResult { points, crossings }
}

fn refine(
    solver: &DotSolver,
    a: Level,
    b: Level,
    axis: ScanAxis,
    mut lo: f64,
    mut hi: f64,
    d_lo: f64,
) -> (f64, f64) {
    while hi - lo > CROSSING_WIDTH {
        let mid = 0.5 * (lo + hi);
        let d = axis.dot(mid);
        let diff = match (a.evaluate(solver, d), b.evaluate(solver, d)) {
            (Ok(x), Ok(y)) => x.energy - y.energy,
            _ => break,
        };
        if diff == 0.0 {
            return (mid, mid);
        }
        if diff * d_lo > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}
