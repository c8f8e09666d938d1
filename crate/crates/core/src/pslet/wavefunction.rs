use super::{HierarchyState, ShiftParams};

/// Default `|x|` beyond which the truncated exponent is not trusted.
pub const DEFAULT_TRUST_RADIUS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction {
    /// Unnormalized `F(x) exp(U(x))` on the requested grid.
    pub values: Vec<f64>,
    /// Set when some grid point has `|x|` above the trust radius.
    pub outside_trust: bool,
}

/// Evaluate `psi(q) = F(x) exp(U(x))`, `x = lbar^(1/2) (q - q0) / q0`, keeping
/// half orders `0..=half_orders` of both series.
///
/// `U` is the exact antiderivative of the truncated `U'` series, fixed to
/// vanish at `x = 0`.
pub fn wavefunction_eval(
    h: &HierarchyState,
    sp: &ShiftParams,
    q_grid: &[f64],
    half_orders: usize,
    trust_radius: f64,
) -> Wavefunction {
    let eps = sp.lbar.powf(-0.5);
    let top = half_orders.min(h.w.len() - 1);
    let u: Vec<_> = h.w[..=top].iter().map(|w| w.antiderivative()).collect();
    let sqrt_lbar = sp.lbar.sqrt();

    let mut outside_trust = false;
    let values = q_grid
        .iter()
        .map(|&q| {
            let x = sqrt_lbar * (q - sp.q0) / sp.q0;
            if x.abs() > trust_radius {
                outside_trust = true;
            }
            let mut exponent = 0.0;
            let mut nodal = 0.0;
            let mut pow = 1.0;
            for j in 0..=top {
                exponent += pow * u[j].eval(x);
                nodal += pow * h.f[j].eval(x);
                pow *= eps;
            }
            nodal * exponent.exp()
        })
        .collect();
    Wavefunction {
        values,
        outside_trust,
    }
}
