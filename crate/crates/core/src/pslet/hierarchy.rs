//! Order-by-order solution of the Riccati form of the shifted radial equation.
//!
//! With `eps = lbar^(-1/2)` the logarithmic derivative and the nodal factor
//! are expanded as `U' = sum_j W_j(x) eps^j` and `F = sum_j F_j(x) eps^j`,
//! where `F_0 = x^k + ...` and `deg F_j < k` for `j >= 1`. At every `j` the
//! residual is a polynomial in `x`; its coefficients are cleared from the top
//! down, first fixing `W_j` (pivot `Omega`), then the energy coefficient
//! `e_j` at `x^k`, then `F_j` (pivots `Omega (p - k)`).
//!
//! `W_j` is odd for even `j` (the `U^(n)` of the literature, `n = j/2`) and
//! even for odd `j` (`G^(n)`, `n = (j-1)/2`).

use std::ops::{Add, Div, Mul, Neg, Sub};

use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::series::{CompensatedSum, Polynomial};

/// Highest energy correction index the engine will build.
pub const MAX_ORDER: usize = 40;

const PIVOT_FLOOR: f64 = 1e-12;

/// `v^(n)(x)` for `n = 0..=n_max` from `B_0..B_(n_max+2)`.
pub fn v_series(b: &[f64], beta: f64, n_max: usize) -> Vec<Polynomial> {
    assert!(
        b.len() >= n_max + 3,
        "need B_0..B_{} for v^({n_max})",
        n_max + 2
    );
    let cap = n_max + 2;
    let tb = 2.0 * beta + 1.0;
    let bb = beta * (beta + 1.0) / 2.0;
    (0..=n_max)
        .map(|n| {
            let mut v = Polynomial::zero(cap);
            v.add_to_coeff(n + 2, b[n + 2]);
            match n {
                0 => v.add_to_coeff(0, tb / 2.0),
                1 => v.add_to_coeff(1, -tb),
                _ => {
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    v.add_to_coeff(n, sign * tb * (n as f64 + 1.0) / 2.0);
                    v.add_to_coeff(n - 2, sign * bb * (n as f64 - 1.0));
                }
            }
            v
        })
        .collect()
}

/// Coefficient tables of the solved hierarchy.
#[derive(Debug, Clone, PartialEq)]
pub struct HierarchyState {
    pub k: usize,
    pub omega: f64,
    /// `W_j`, one polynomial per half order.
    pub w: Vec<Polynomial>,
    /// `F_j`, one polynomial per half order; `f[0]` is monic of degree `k`.
    pub f: Vec<Polynomial>,
    /// `d_table[n][m]`: coefficient of `x^(2m-1)` in `U^(n)`; `d_table[n][0] = 0`.
    pub d_table: Vec<Vec<f64>>,
    /// `c_table[n][m]`: coefficient of `x^(2m)` in `G^(n)`.
    pub c_table: Vec<Vec<f64>>,
    /// `a_table[j][p]`: coefficient of `x^p` (`p < k`) in `F_j`.
    pub a_table: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HierarchySolution {
    /// `e_j`: coefficient of `eps^j` on the energy side. `e_(2n+2) = q0^2 E^(n)`,
    /// `e_0 = q0^2 E^(-1)`, and odd entries vanish up to rounding.
    pub energy_coefficients: Vec<f64>,
    pub state: HierarchyState,
}

impl HierarchySolution {
    /// `q0^2 E^(n)` for `n = 0..=order`.
    pub fn scaled_corrections(&self) -> Vec<f64> {
        self.energy_coefficients
            .iter()
            .skip(2)
            .step_by(2)
            .copied()
            .collect()
    }
}

/// Working precision of the hierarchy recursion.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Precision {
    /// `f64` with compensated accumulation of every residual coefficient.
    #[default]
    Double,
    /// Double-double arithmetic throughout the recursion.
    DoubleDouble,
}

/// Arithmetic the recursion needs from its scalar type.
trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    type Acc: Copy;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;
    fn acc_zero() -> Self::Acc;
    fn acc_add(acc: &mut Self::Acc, x: Self);
    fn acc_value(acc: &Self::Acc) -> Self;
}

impl Scalar for f64 {
    type Acc = CompensatedSum;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn acc_zero() -> CompensatedSum {
        CompensatedSum::new()
    }
    fn acc_add(acc: &mut CompensatedSum, x: f64) {
        acc.add(x);
    }
    fn acc_value(acc: &CompensatedSum) -> f64 {
        acc.value()
    }
}

impl Scalar for TwoFloat {
    type Acc = TwoFloat;

    fn from_f64(x: f64) -> Self {
        TwoFloat::from(x)
    }
    fn to_f64(self) -> f64 {
        f64::from(self)
    }
    fn sqrt(self) -> Self {
        TwoFloat::sqrt(self)
    }
    fn acc_zero() -> TwoFloat {
        TwoFloat::from(0.0)
    }
    fn acc_add(acc: &mut TwoFloat, x: TwoFloat) {
        *acc += x;
    }
    fn acc_value(acc: &TwoFloat) -> TwoFloat {
        *acc
    }
}

type Poly<T> = Vec<T>;

fn derivative<T: Scalar>(p: &[T]) -> Poly<T> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * T::from_f64(i as f64))
        .collect()
}

fn to_polynomial<T: Scalar>(p: &[T], cap: usize) -> Polynomial {
    Polynomial::from_coeffs(p.iter().map(|c| c.to_f64()).collect(), cap)
}

/// Per-coefficient accumulator for assembling residuals.
struct Accumulator<T: Scalar>(Vec<T::Acc>);

impl<T: Scalar> Accumulator<T> {
    fn new(len: usize) -> Self {
        Self(vec![T::acc_zero(); len])
    }

    fn add(&mut self, i: usize, x: T) {
        T::acc_add(&mut self.0[i], x);
    }

    fn add_scaled(&mut self, p: &[T], s: T) {
        for (i, &c) in p.iter().enumerate() {
            if i < self.0.len() {
                self.add(i, s * c);
            }
        }
    }

    fn add_product(&mut self, a: &[T], b: &[T], s: T) {
        for (i, &x) in a.iter().enumerate() {
            let sx = s * x;
            for (j, &y) in b.iter().enumerate() {
                if i + j < self.0.len() {
                    self.add(i + j, sx * y);
                }
            }
        }
    }

    fn values(&self) -> Poly<T> {
        self.0.iter().map(T::acc_value).collect()
    }
}

/// Solve the hierarchy for node count `k` through the energy correction `E^(order)`.
///
/// `v` must hold `v^(0)..v^(2 order + 2)`; `Omega` is recovered from `v^(0) = B_2 x^2 + ...`.
pub fn solve_hierarchy(v: &[Polynomial], k: usize, order: usize) -> Result<HierarchySolution> {
    solve_hierarchy_with(v, k, order, Precision::Double)
}

pub fn solve_hierarchy_with(
    v: &[Polynomial],
    k: usize,
    order: usize,
    precision: Precision,
) -> Result<HierarchySolution> {
    match precision {
        Precision::Double => solve_generic::<f64>(v, k, order),
        Precision::DoubleDouble => solve_generic::<TwoFloat>(v, k, order),
    }
}

fn solve_generic<T: Scalar>(v: &[Polynomial], k: usize, order: usize) -> Result<HierarchySolution> {
    if order > MAX_ORDER {
        return Err(Error::OrderOverflow {
            requested: order,
            max: MAX_ORDER,
        });
    }
    let j_max = 2 * order + 2;
    if v.len() < j_max + 1 {
        return Err(Error::ShortSeries {
            need: j_max + 1,
            have: v.len(),
        });
    }
    let b2 = v[0].coeff(2);
    if !(2.0 * b2).is_finite() || (2.0 * b2).sqrt() < PIVOT_FLOOR {
        return Err(Error::ZeroPivot { order: 0 });
    }
    let c = T::from_f64;
    let omega = (c(2.0) * c(b2)).sqrt();
    let kf = c(k as f64);
    let cap = k + j_max + 4;
    let v: Vec<Poly<T>> = v
        .iter()
        .map(|p| p.coeffs().iter().map(|&x| c(x)).collect())
        .collect();

    // order 0: harmonic oscillator, F_0 the monic Hermite-type polynomial
    let w0 = vec![c(0.0), -omega];
    let mut f0 = vec![c(0.0); k + 1];
    f0[k] = c(1.0);
    for p in (0..k).rev() {
        if p + 2 <= k {
            f0[p] = c(((p + 2) * (p + 1)) as f64) * f0[p + 2]
                / (c(2.0) * omega * (c(p as f64) - kf));
        }
    }
    let f0_prime = derivative(&f0);
    let e0 = v[0].first().copied().unwrap_or(c(0.0)) + (kf + c(0.5)) * omega;

    let mut w: Vec<Poly<T>> = vec![w0];
    let mut f: Vec<Poly<T>> = vec![f0.clone()];
    let mut f_prime: Vec<Poly<T>> = vec![f0_prime.clone()];
    let mut s_terms: Vec<Poly<T>> = vec![vec![-kf * omega]];
    let mut energies = vec![e0];

    for j in 1..=j_max {
        // known part of the order-j residual
        let mut cross = Accumulator::<T>::new(cap + 1);
        for i in 1..j {
            cross.add_product(&w[i], &w[j - i], c(1.0));
        }
        let cross = cross.values();

        let mut acc = Accumulator::<T>::new(cap + 1);
        acc.add_product(&f0, &v[j], c(1.0));
        acc.add_product(&f0, &cross, c(-0.5));
        for i in 1..j {
            acc.add_product(&f[i], &s_terms[j - i], c(1.0));
            acc.add_product(&f_prime[i], &w[j - i], c(-1.0));
        }
        let mut res = acc.values();

        // W_j: clear x^(k+j+2) .. x^(k+1)
        let mut wj = vec![c(0.0); j + 2];
        for d in (0..=j + 1).rev() {
            let wd = -res[k + d + 1] / omega;
            wj[d] = wd;
            // res += wd * [F_0 (-1/2 d x^(d-1) + Omega x^(d+1)) - F_0' x^d]
            for (p, &a) in f0.iter().enumerate() {
                res[p + d + 1] = res[p + d + 1] + wd * omega * a;
                if d > 0 {
                    res[p + d - 1] = res[p + d - 1] - wd * c(0.5 * d as f64) * a;
                }
            }
            for (p, &a) in f0_prime.iter().enumerate() {
                res[p + d] = res[p + d] - wd * a;
            }
        }

        // energy from x^k
        let ej = res[k];
        for (p, &a) in f0.iter().enumerate() {
            res[p] = res[p] - ej * a;
        }

        // F_j: clear x^(k-1) .. x^0 with L x^p = Omega (p - k) x^p - p (p-1)/2 x^(p-2)
        let mut fj = vec![c(0.0); k];
        for p in (0..k).rev() {
            let pivot = omega * (c(p as f64) - kf);
            if pivot.to_f64().abs() < PIVOT_FLOOR {
                return Err(Error::ZeroPivot { order: j });
            }
            let fp = -res[p] / pivot;
            fj[p] = fp;
            res[p] = res[p] + fp * pivot;
            if p >= 2 {
                res[p - 2] = res[p - 2] - fp * c(0.5 * (p * (p - 1)) as f64);
            }
        }

        // S_j = -W_j'/2 - (1/2) sum_i W_i W_(j-i) + v_j - e_j
        let mut s_acc = Accumulator::<T>::new(cap + 1);
        s_acc.add_scaled(&derivative(&wj), c(-0.5));
        s_acc.add_scaled(&cross, c(-0.5));
        s_acc.add_product(&w[0], &wj, c(-1.0));
        s_acc.add_scaled(&v[j], c(1.0));
        s_acc.add(0, -ej);
        s_terms.push(s_acc.values());

        f_prime.push(derivative(&fj));
        w.push(wj);
        f.push(fj);
        energies.push(ej);
    }

    let w: Vec<Polynomial> = w.iter().map(|p| to_polynomial(p, cap)).collect();
    let f: Vec<Polynomial> = f.iter().map(|p| to_polynomial(p, cap)).collect();

    let d_table = (0..=j_max)
        .step_by(2)
        .map(|j| {
            let n = j / 2;
            (0..=n + 1)
                .map(|m| if m == 0 { 0.0 } else { w[j].coeff(2 * m - 1) })
                .collect()
        })
        .collect();
    let c_table = (1..=j_max)
        .step_by(2)
        .map(|j| {
            let n = (j - 1) / 2;
            (0..=n + 1).map(|m| w[j].coeff(2 * m)).collect()
        })
        .collect();
    let a_table = f
        .iter()
        .map(|fj| (0..k).map(|p| fj.coeff(p)).collect())
        .collect();

    Ok(HierarchySolution {
        energy_coefficients: energies.iter().map(|e| e.to_f64()).collect(),
        state: HierarchyState {
            k,
            omega: omega.to_f64(),
            w,
            f,
            d_table,
            c_table,
            a_table,
        },
    })
}
