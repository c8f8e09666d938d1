//! Brute-force finite-difference check on the radial eigenvalues.
//!
//! Solves `-u'' + [(m^2 - 1/4)/q^2 + W(q)] u = eps u` in the full-scale
//! convention (twice the engine's half-scaled equation). Writing
//! `u = sqrt(q) R` turns the operator into the flux form
//! `-(1/q)(q R')' + m^2/q^2 R`, discretised on the cell-centred grid
//! `q_i = (i - 1/2) h`. The first node sits at `h/2` and the face at the
//! origin carries zero weight, so no boundary value is imposed there and the
//! scheme stays second order for every `m`. The symmetric tridiagonal matrix
//! is searched by Sturm bisection; two grids are combined by Richardson
//! extrapolation.

use crate::error::{Error, Result};
use crate::potential::{HybridParams, PotentialModel};
use crate::qdot::{DotParams, DotSolver, RadialSystem, StateLabel};

pub const MIN_POINTS: usize = 2000;

/// Relative gap between extrapolant and fine grid above which a solve fails.
pub const CONVERGENCE_TOL: f64 = 1e-4;

/// Relative eigenvector amplitude tolerated at the outer wall.
pub const TAIL_TOL: f64 = 1e-6;

pub struct RadialProblem<'a> {
    pub m: i64,
    /// Full-scale potential `W`.
    pub w: &'a dyn PotentialModel,
    pub length: f64,
    pub n_points: usize,
}

impl<'a> RadialProblem<'a> {
    /// Domain sized from the oscillator part of `w` for state `k`.
    ///
    /// `omega` is the frequency of `-u'' + a q^2 u`, i.e. `2 sqrt(a)`.
    pub fn auto(m: i64, k: usize, w: &'a dyn PotentialModel, omega: f64) -> Self {
        let n = (2 * k) as f64 + m.unsigned_abs() as f64 + 3.0;
        let length = (8.0 * (n / omega).sqrt()).max(20.0 / omega.max(1.0));
        let osc_len = omega.sqrt().recip();
        let n_points = ((200.0 * length / osc_len).ceil() as usize).max(MIN_POINTS);
        Self {
            m,
            w,
            length,
            n_points,
        }
    }

    /// The full-scale problem behind an engine radial system.
    pub fn for_system(sys: RadialSystem, d: DotParams, coulomb: bool) -> (HybridParams, f64) {
        let half = sys.potential(d, coulomb);
        let w = HybridParams::new(2.0 * half.a_osc, 2.0 * half.c_coul);
        (w, 2.0 * w.a_osc.sqrt())
    }
}

/// Symmetric tridiagonal matrix: `diag[i]`, `off[i]` couples `i` and `i+1`.
struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

fn discretise(p: &RadialProblem, n: usize) -> Result<(Tridiagonal, f64)> {
    let h = p.length / n as f64;
    let h2 = h * h;
    let m2 = (p.m * p.m) as f64;
    let q = |i: usize| (i as f64 + 0.5) * h;
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n {
        let qi = q(i);
        let face_in = i as f64 * h;
        let face_out = (i as f64 + 1.0) * h;
        diag.push((face_in + face_out) / (qi * h2) + m2 / (qi * qi) + p.w.value(qi)?);
        if i + 1 < n {
            off.push(-face_out / (h2 * (qi * q(i + 1)).sqrt()));
        }
    }
    Ok((Tridiagonal { diag, off }, h))
}

impl Tridiagonal {
    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.diag.len() {
            let b2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            d = self.diag[i] - x - if i == 0 { 0.0 } else { b2 / d };
            if d == 0.0 {
                d = -f64::EPSILON * (self.diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `(k+1)`-th smallest eigenvalue.
    fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let mut last = self.count_below(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let c = self.count_below(mid);
            if c > k {
                hi = mid;
            } else {
                debug_assert!(c >= last, "Sturm count must not decrease");
                last = c;
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Inverse iteration for the eigenvector at `lambda`.
    fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.diag.len();
        let shift = lambda + 1e-10 * lambda.abs().max(1.0);
        let mut v = vec![1.0; n];
        for _ in 0..3 {
            v = self.solve_shifted(shift, &v);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
        }
        v
    }

    /// `(T - s) x = r` by the Thomas algorithm.
    fn solve_shifted(&self, s: f64, r: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let tiny = 1e-300;
        let mut piv = self.diag[0] - s;
        if piv.abs() < tiny {
            piv = tiny;
        }
        c[0] = if n > 1 { self.off[0] / piv } else { 0.0 };
        d[0] = r[0] / piv;
        for i in 1..n {
            let mut piv = self.diag[i] - s - self.off[i - 1] * c[i - 1];
            if piv.abs() < tiny {
                piv = tiny;
            }
            c[i] = if i + 1 < n { self.off[i] / piv } else { 0.0 };
            d[i] = (r[i] - self.off[i - 1] * d[i - 1]) / piv;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        d
    }
}

/// Eigenvalue on a single grid of `n` cells.
pub fn fd_eigenvalue(p: &RadialProblem, k: usize, n: usize) -> Result<f64> {
    let (t, _) = discretise(p, n)?;
    Ok(t.eigenvalue(k))
}

/// Eigenvalue and eigenvector `u(q_i)` on a single grid; the vector is
/// normalised so that `sum u^2 h = 1` and positive near the origin.
pub fn fd_eigenpair(p: &RadialProblem, k: usize, n: usize) -> Result<(f64, Vec<f64>, Vec<f64>)> {
    let (t, h) = discretise(p, n)?;
    let lambda = t.eigenvalue(k);
    let mut v = t.eigenvector(lambda);
    let first = v.iter().copied().find(|x| x.abs() > 1e-8).unwrap_or(1.0);
    let norm = (v.iter().map(|x| x * x).sum::<f64>() * h).sqrt() * first.signum();
    v.iter_mut().for_each(|x| *x /= norm);
    let q = (0..n).map(|i| (i as f64 + 0.5) * h).collect();
    Ok((lambda, q, v))
}

/// Interior sign changes, ignoring the numerically flat tail.
pub fn node_count(u: &[f64]) -> usize {
    let peak = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut sign = 0.0;
    let mut nodes = 0;
    for &x in u {
        if x.abs() < 1e-6 * peak {
            continue;
        }
        let s = x.signum();
        if sign != 0.0 && s != sign {
            nodes += 1;
        }
        sign = s;
    }
    nodes
}

/// Richardson-extrapolated eigenvalue from `n_points` and `2 n_points` cells.
pub fn solve_radial_fd(p: &RadialProblem, k: usize) -> Result<f64> {
    let n = p.n_points.max(MIN_POINTS);
    let coarse = fd_eigenvalue(p, k, n)?;
    let (fine, _, u) = fd_eigenpair(p, k, 2 * n)?;
    let peak = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let amplitude = u.last().map_or(0.0, |x| x.abs()) / peak;
    if amplitude > TAIL_TOL {
        return Err(Error::DomainTooSmall { amplitude });
    }
    let extrapolated = (4.0 * fine - coarse) / 3.0;
    if (extrapolated - fine).abs() > CONVERGENCE_TOL * fine.abs() {
        return Err(Error::NotConverged { extrapolated, fine });
    }
    Ok(extrapolated)
}

/// Physical energy of one radial state from the oracle.
pub fn oracle_energy(sys: RadialSystem, d: DotParams, st: StateLabel, coulomb: bool) -> Result<f64> {
    let (w, omega) = RadialProblem::for_system(sys, d, coulomb);
    let p = RadialProblem::auto(st.m, st.k, &w, omega);
    let eps = solve_radial_fd(&p, st.k).map_err(|e| e.for_state(format!("oracle {}", st.tuple())))?;
    // full-scale eps is twice the engine eigenvalue
    Ok(0.5 * sys.energy_scale() * eps + st.m as f64 * d.gamma)
}

/// `|E_pslet - E_oracle|` in Ry*.
pub fn cross_check(solver: &DotSolver, st: StateLabel, d: DotParams, sys: RadialSystem) -> Result<f64> {
    let pslet = solver.radial(sys, d, st)?.energy;
    let oracle = oracle_energy(sys, d, st, solver.coulomb)?;
    Ok((pslet - oracle).abs())
}
