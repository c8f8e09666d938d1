use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::sum::CompensatedSum;

/// Dense univariate polynomial truncated at a fixed maximum degree.
///
/// Coefficients are stored lowest degree first. Every operation keeps
/// `coeffs.len() <= cap + 1`; anything above `cap` is dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
    cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineOp {
    Add,
    Mul,
}

impl Polynomial {
    pub fn zero(cap: usize) -> Self {
        Self { coeffs: Vec::new(), cap }
    }

    pub fn constant(c: f64, cap: usize) -> Self {
        Self::from_coeffs(vec![c], cap)
    }

    /// `c * x^degree`, or zero when `degree > cap`.
    pub fn monomial(c: f64, degree: usize, cap: usize) -> Self {
        if degree > cap {
            return Self::zero(cap);
        }
        let mut coeffs = vec![0.0; degree + 1];
        coeffs[degree] = c;
        Self { coeffs, cap }
    }

    pub fn from_coeffs(mut coeffs: Vec<f64>, cap: usize) -> Self {
        coeffs.truncate(cap + 1);
        Self { coeffs, cap }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Coefficient of `x^i` (zero beyond the stored length).
    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    /// Index of the highest nonzero coefficient, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Add `c` to the coefficient of `x^i`; silently ignored above the cap.
    pub fn add_to_coeff(&mut self, i: usize, c: f64) {
        if i > self.cap {
            return;
        }
        if self.coeffs.len() <= i {
            self.coeffs.resize(i + 1, 0.0);
        }
        self.coeffs[i] += c;
    }

    pub fn with_cap(&self, cap: usize) -> Self {
        Self::from_coeffs(self.coeffs.clone(), cap)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            cap: self.cap,
        }
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| i as f64 * c)
            .collect();
        Self { coeffs, cap: self.cap }
    }

    /// Antiderivative vanishing at the origin. The cap grows by one.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0.0);
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| c / (i as f64 + 1.0)),
        );
        Self {
            coeffs,
            cap: self.cap + 1,
        }
    }

    /// `self + s * other`, truncated to `self.cap`.
    pub fn add_scaled(&mut self, other: &Polynomial, s: f64) {
        for (i, &c) in other.coeffs.iter().enumerate().take(self.cap + 1) {
            self.add_to_coeff(i, s * c);
        }
    }

    pub fn add_poly(&self, other: &Polynomial, cap: usize) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len()).min(cap + 1);
        let coeffs = (0..len).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Self { coeffs, cap }
    }

    /// Truncated product with compensated accumulation of each output coefficient.
    pub fn mul_poly(&self, other: &Polynomial, cap: usize) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero(cap);
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(cap + 1);
        let coeffs = (0..len)
            .map(|j| {
                let lo = j.saturating_sub(other.coeffs.len() - 1);
                let hi = j.min(self.coeffs.len() - 1);
                (lo..=hi)
                    .map(|i| self.coeffs[i] * other.coeffs[j - i])
                    .sum::<CompensatedSum>()
                    .value()
            })
            .collect();
        Self { coeffs, cap }
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// Truncated sum or product of two polynomials at degree `cap`.
pub fn poly_combine(a: &Polynomial, b: &Polynomial, op: CombineOp, cap: usize) -> Polynomial {
    match op {
        CombineOp::Add => a.add_poly(b, cap),
        CombineOp::Mul => a.mul_poly(b, cap),
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.add_poly(rhs, self.cap.min(rhs.cap))
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.add_poly(&-rhs, self.cap.min(rhs.cap))
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.mul_poly(rhs, self.cap.min(rhs.cap))
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}x")?,
                _ => write!(f, "{c}x^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
