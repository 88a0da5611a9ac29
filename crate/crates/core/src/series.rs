//! Truncated complex power series.
//!
//! A [`TruncatedSeries`] of order `N` stores the coefficients `c_0..=c_N` of
//! `c_0 + c_1 z + ... + c_N z^N`. Every operation truncates its result, so
//! the arithmetic is exact modulo `z^{N+1}` up to floating-point rounding.

use num_complex::Complex64;
use thiserror::Error;

/// Truncation order used when callers do not pick one.
pub const DEFAULT_ORDER: usize = 12;

/// Tolerance for the normalization checks `c_0 = 0`, `c_1 = 1`.
const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("series order must be at least 1, got {0}")]
    OrderTooSmall(usize),
    #[error("coefficient {index} is not finite")]
    NonFinite { index: usize },
    #[error("inner series has nonzero constant term {0}")]
    NonZeroConstant(Complex64),
    #[error("series is not normalized (expected c0 = 0, c1 = 1; got c0 = {c0}, c1 = {c1})")]
    NotNormalized { c0: Complex64, c1: Complex64 },
    #[error("division by a series with zero constant term")]
    ZeroDivisor,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    /// Builds a series from `c_0..=c_N`; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self, SeriesError> {
        if coeffs.len() < 2 {
            return Err(SeriesError::OrderTooSmall(coeffs.len().saturating_sub(1)));
        }
        if let Some(index) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(SeriesError::NonFinite { index });
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self, SeriesError> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Pads `coeffs` with zeros (or truncates it) to the given order.
    pub fn with_order(coeffs: &[Complex64], order: usize) -> Result<Self, SeriesError> {
        let mut v: Vec<Complex64> = coeffs.iter().take(order + 1).copied().collect();
        v.resize(order + 1, Complex64::new(0.0, 0.0));
        Self::new(v)
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Complex64::new(0.0, 0.0); order.max(1) + 1] }
    }

    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = value;
        s
    }

    /// The identity map `z`.
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[1] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of `z^n`; zero beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::with_order(&self.coeffs, order.max(1)).expect("truncation of a valid series")
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|&c| c * k).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self { coeffs: (0..=order).map(|n| self.coeffs[n] + other.coeffs[n]).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Cauchy product, truncated at the smaller of the two orders.
    pub fn multiply(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|n| (0..=n).map(|k| self.coeffs[k] * other.coeffs[n - k]).sum())
            .collect();
        Self { coeffs }
    }

    /// Quotient `self / other` by long division; needs `other(0) != 0`.
    pub fn divide(&self, other: &Self) -> Result<Self, SeriesError> {
        let d0 = other.coeffs[0];
        if d0.norm() == 0.0 {
            return Err(SeriesError::ZeroDivisor);
        }
        let order = self.order().min(other.order());
        let mut q = vec![Complex64::new(0.0, 0.0); order + 1];
        for n in 0..=order {
            let acc: Complex64 = (1..=n).map(|k| other.coeffs[k] * q[n - k]).sum();
            q[n] = (self.coeffs[n] - acc) / d0;
        }
        Self::new(q)
    }

    /// `self ∘ inner`, evaluated by Horner's scheme over truncated series.
    ///
    /// The result has the smaller of the two orders.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        if inner.coeffs[0] != Complex64::new(0.0, 0.0) {
            return Err(SeriesError::NonZeroConstant(inner.coeffs[0]));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = Self::constant(self.coeffs[order], order);
        for n in (0..order).rev() {
            acc = acc.multiply(&inner);
            acc.coeffs[0] += self.coeffs[n];
        }
        Ok(acc)
    }

    fn check_normalized(&self) -> Result<(), SeriesError> {
        let (c0, c1) = (self.coeffs[0], self.coeffs[1]);
        if c0.norm() > NORMALIZATION_TOL || (c1 - 1.0).norm() > NORMALIZATION_TOL {
            return Err(SeriesError::NotNormalized { c0, c1 });
        }
        Ok(())
    }

    /// Compositional inverse `g` with `f(g(w)) = w` through the truncation order.
    ///
    /// Solved order by order: with `g_2..g_{n-1}` fixed, the `w^n` coefficient
    /// of `f(g(w))` is `g_n` plus terms in lower coefficients only, because
    /// `f'(0) = 1`.
    pub fn revert(&self) -> Result<Self, SeriesError> {
        self.check_normalized()?;
        let order = self.order();
        let mut g = Self::identity(order);
        for n in 2..=order {
            let residual = self.compose(&g)?.coeffs[n];
            g.coeffs[n] = -residual;
        }
        Ok(g)
    }

    /// Series of `log(f(z)/z)`, of order `N - 1`.
    ///
    /// With `q = f/z` and `L = log q`, the coefficients follow from
    /// `q L' = q'` termwise, so no branch of the logarithm is ever chosen.
    pub fn log_ratio(&self) -> Result<Self, SeriesError> {
        self.check_normalized()?;
        let q = &self.coeffs[1..];
        let order = q.len() - 1;
        let mut log = vec![Complex64::new(0.0, 0.0); order + 1];
        for n in 1..=order {
            let acc: Complex64 = (1..n).map(|k| log[k] * q[n - k] * k as f64).sum();
            log[n] = q[n] - acc / n as f64;
        }
        // q_0 = 1, so the recursion never divides by it
        Self::with_order(&log, order.max(1))
    }

    /// `exp(self)`, requires a zero constant term.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0] != Complex64::new(0.0, 0.0) {
            return Err(SeriesError::NonZeroConstant(self.coeffs[0]));
        }
        let order = self.order();
        let mut e = vec![Complex64::new(0.0, 0.0); order + 1];
        e[0] = Complex64::new(1.0, 0.0);
        for n in 1..=order {
            let acc: Complex64 = (1..=n).map(|k| self.coeffs[k] * e[n - k] * k as f64).sum();
            e[n] = acc / n as f64;
        }
        Self::new(e)
    }

    /// Termwise derivative, of order `N - 1` (kept at least 1).
    pub fn derivative(&self) -> Self {
        let mut d: Vec<Complex64> =
            self.coeffs.iter().enumerate().skip(1).map(|(n, &c)| c * n as f64).collect();
        if d.len() < 2 {
            d.resize(2, Complex64::new(0.0, 0.0));
        }
        Self { coeffs: d }
    }

    /// Multiplies by `z`, raising the order by one.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `f(e^{iθ} z) e^{-iθ}`: the rotation `f_θ` with `a_n ↦ a_n e^{i(n-1)θ}`.
    pub fn rotate(&self, theta: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, &c)| c * Complex64::from_polar(1.0, (n as f64 - 1.0) * theta))
            .collect();
        Self { coeffs }
    }

    /// Largest coefficient-wise distance over the common orders.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}
