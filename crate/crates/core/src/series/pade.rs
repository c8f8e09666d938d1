use crate::error::{Error, Result};

use super::sum::CompensatedSum;

/// Equilibrated 1-norm condition estimate above which a denominator system is rejected.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Relative size of `|den(t)|` below which evaluation reports a pole.
pub const POLE_THRESHOLD: f64 = 1e-8;

/// Rational approximant `num(t) / den(t)` with `den[0] == 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PadeApproximant {
    num: Vec<f64>,
    den: Vec<f64>,
}

impl PadeApproximant {
    pub fn num(&self) -> &[f64] {
        &self.num
    }

    pub fn den(&self) -> &[f64] {
        &self.den
    }

    /// Numerator degree.
    pub fn m(&self) -> usize {
        self.num.len() - 1
    }

    /// Denominator degree.
    pub fn n(&self) -> usize {
        self.den.len() - 1
    }

    /// Taylor coefficients of `num/den` through `t^order`.
    pub fn taylor(&self, order: usize) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::with_capacity(order + 1);
        for i in 0..=order {
            let mut acc = CompensatedSum::new();
            acc += self.num.get(i).copied().unwrap_or(0.0);
            for j in 1..=self.n().min(i) {
                acc += -self.den[j] * out[i - j];
            }
            out.push(acc.value());
        }
        out
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        pade_eval(self, t)
    }
}

/// Fit the `[m/n]` Pade approximant to `c[0..=m+n]`.
///
/// The denominator comes from the `n x n` Toeplitz system
/// `sum_j q_j c[i-j] = -c[i]`, `i = m+1..=m+n`, solved by LU with
/// partial pivoting.
pub fn pade_fit(c: &[f64], m: usize, n: usize) -> Result<PadeApproximant> {
    if c.len() != m + n + 1 {
        return Err(Error::ShortSeries {
            need: m + n + 1,
            have: c.len(),
        });
    }
    let coeff = |i: isize| if i < 0 { 0.0 } else { c[i as usize] };

    let mut den = vec![1.0; n + 1];
    if n > 0 {
        let mut a = vec![vec![0.0; n]; n];
        let mut rhs = vec![0.0; n];
        for r in 0..n {
            let i = (m + 1 + r) as isize;
            for j in 1..=n {
                a[r][j - 1] = coeff(i - j as isize);
            }
            rhs[r] = -coeff(i);
        }
        let q = solve_checked(a, rhs)?;
        den[1..].copy_from_slice(&q);
    }

    let num = (0..=m)
        .map(|i| {
            (0..=n.min(i))
                .map(|j| den[j] * c[i - j])
                .sum::<CompensatedSum>()
                .value()
        })
        .collect();

    Ok(PadeApproximant { num, den })
}

/// Horner evaluation of `num(t) / den(t)`.
pub fn pade_eval(p: &PadeApproximant, t: f64) -> Result<f64> {
    let horner = |c: &[f64]| c.iter().rev().fold(0.0, |acc, &x| acc * t + x);
    let den = horner(&p.den);
    let scale: f64 = p
        .den
        .iter()
        .enumerate()
        .map(|(j, q)| (q * t.powi(j as i32)).abs())
        .sum();
    if den.abs() < POLE_THRESHOLD * scale {
        return Err(Error::PoleProximity { t, value: den.abs() });
    }
    Ok(horner(&p.num) / den)
}

/// LU solve with partial pivoting on the equilibrated system; rejects
/// systems whose 1-norm condition estimate exceeds [`CONDITION_LIMIT`].
fn solve_checked(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();

    // row then column equilibration
    for r in 0..n {
        let s = a[r].iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if s == 0.0 {
            return Err(Error::SingularPadeSystem {
                condition: f64::INFINITY,
            });
        }
        a[r].iter_mut().for_each(|x| *x /= s);
        b[r] /= s;
    }
    let mut col_scale = vec![1.0; n];
    for (j, cs) in col_scale.iter_mut().enumerate() {
        let s = (0..n).fold(0.0f64, |m, r| m.max(a[r][j].abs()));
        if s == 0.0 {
            return Err(Error::SingularPadeSystem {
                condition: f64::INFINITY,
            });
        }
        (0..n).for_each(|r| a[r][j] /= s);
        *cs = s;
    }

    let norm_a = (0..n)
        .map(|j| (0..n).map(|r| a[r][j].abs()).sum::<f64>())
        .fold(0.0, f64::max);

    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col] == 0.0 {
            return Err(Error::SingularPadeSystem {
                condition: f64::INFINITY,
            });
        }
        a.swap(col, piv);
        perm.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            a[r][col] = f;
            for j in col + 1..n {
                a[r][j] -= f * a[col][j];
            }
        }
    }

    let lu_solve = |rhs: &[f64]| -> Vec<f64> {
        let mut y: Vec<f64> = perm.iter().map(|&p| rhs[p]).collect();
        for r in 0..n {
            for j in 0..r {
                y[r] -= a[r][j] * y[j];
            }
        }
        for r in (0..n).rev() {
            for j in r + 1..n {
                y[r] -= a[r][j] * y[j];
            }
            y[r] /= a[r][r];
        }
        y
    };

    let mut norm_inv = 0.0f64;
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = lu_solve(&e);
        norm_inv = norm_inv.max(col.iter().map(|x| x.abs()).sum());
    }
    let condition = norm_a * norm_inv;
    if !condition.is_finite() || condition > CONDITION_LIMIT {
        return Err(Error::SingularPadeSystem { condition });
    }

    let x = lu_solve(&b);
    Ok(x.iter().zip(&col_scale).map(|(x, s)| x / s).collect())
}
