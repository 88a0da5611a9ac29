//! Coefficient functionals of a normalized `f(z) = z + a_2 z^2 + ...`.
//!
//! * inverse coefficients `A_n` of `f^{-1}(w) = w + A_2 w^2 + ...`
//! * logarithmic coefficients `γ_n`, with `log(f(z)/z) = 2 Σ γ_n z^n`
//! * logarithmic inverse coefficients `Γ_n`, the same for `f^{-1}`
//! * Hankel determinants, in particular `H_{2,1}(F_{f^{-1}}/2) = Γ_1 Γ_3 - Γ_2^2`
//!
//! The closed forms are cross-checked against the series pipeline
//! ([`TruncatedSeries::revert`] followed by [`TruncatedSeries::log_ratio`]).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::caratheodory::DiskParams;
use crate::classes::Class;
use crate::series::{SeriesError, TruncatedSeries};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FunctionalError {
    #[error("Hankel determinant H_{{{q},{n}}} needs index {needed}, sequence has {len}")]
    OutOfRange { q: usize, n: usize, needed: usize, len: usize },
    #[error("Hankel size and start index must be at least 1")]
    ZeroIndex,
    #[error("series of order {0} is too short; order 4 or more is required")]
    ShortSeries(usize),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// `(a_2, a_3, a_4)` of a normalized function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoeffTriple {
    #[serde(with = "crate::report::complex_serde")]
    pub a2: Complex64,
    #[serde(with = "crate::report::complex_serde")]
    pub a3: Complex64,
    #[serde(with = "crate::report::complex_serde")]
    pub a4: Complex64,
}

impl CoeffTriple {
    pub fn new(a2: Complex64, a3: Complex64, a4: Complex64) -> Self {
        Self { a2, a3, a4 }
    }

    pub fn real(a2: f64, a3: f64, a4: f64) -> Self {
        Self::new(a2.into(), a3.into(), a4.into())
    }

    pub fn from_series(f: &TruncatedSeries) -> Self {
        Self::new(f.coeff(2), f.coeff(3), f.coeff(4))
    }

    /// `z + a_2 z^2 + a_3 z^3 + a_4 z^4` padded to `order`.
    pub fn to_series(&self, order: usize) -> TruncatedSeries {
        let zero = Complex64::new(0.0, 0.0);
        TruncatedSeries::with_order(&[zero, Complex64::new(1.0, 0.0), self.a2, self.a3, self.a4], order)
            .expect("finite coefficients")
    }

    /// Coefficients of the rotation `e^{-iθ} f(e^{iθ} z)`.
    pub fn rotate(&self, theta: f64) -> Self {
        let e = |k: f64| Complex64::from_polar(1.0, k * theta);
        Self::new(self.a2 * e(1.0), self.a3 * e(2.0), self.a4 * e(3.0))
    }
}

/// `(γ_1, γ_2, γ_3)` or `(Γ_1, Γ_2, Γ_3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaTriple {
    #[serde(with = "crate::report::complex_serde")]
    pub g1: Complex64,
    #[serde(with = "crate::report::complex_serde")]
    pub g2: Complex64,
    #[serde(with = "crate::report::complex_serde")]
    pub g3: Complex64,
}

impl GammaTriple {
    pub fn as_array(&self) -> [Complex64; 3] {
        [self.g1, self.g2, self.g3]
    }

    /// `g_1 g_3 - g_2^2`.
    pub fn h21(&self) -> Complex64 {
        self.g1 * self.g3 - self.g2 * self.g2
    }
}

/// `(A_2, A_3, A_4) = (-a_2, -a_3 + 2a_2^2, -a_4 + 5a_2 a_3 - 5a_2^3)`.
pub fn inverse_coeffs(t: &CoeffTriple) -> CoeffTriple {
    let CoeffTriple { a2, a3, a4 } = *t;
    CoeffTriple::new(-a2, -a3 + 2.0 * a2 * a2, -a4 + 5.0 * a2 * a3 - 5.0 * a2 * a2 * a2)
}

pub fn log_coeffs(t: &CoeffTriple) -> GammaTriple {
    let CoeffTriple { a2, a3, a4 } = *t;
    GammaTriple {
        g1: a2 / 2.0,
        g2: (a3 - a2 * a2 / 2.0) / 2.0,
        g3: (a4 - a2 * a3 + a2 * a2 * a2 / 3.0) / 2.0,
    }
}

pub fn inv_log_coeffs(t: &CoeffTriple) -> GammaTriple {
    log_coeffs(&inverse_coeffs(t))
}

/// `H_{q,n}` of a sequence indexed from 1 (`seq[0]` is the first term).
pub fn hankel(seq: &[Complex64], q: usize, n: usize) -> Result<Complex64, FunctionalError> {
    if q == 0 || n == 0 {
        return Err(FunctionalError::ZeroIndex);
    }
    let needed = n + 2 * (q - 1);
    if needed > seq.len() {
        return Err(FunctionalError::OutOfRange { q, n, needed, len: seq.len() });
    }
    let entry = |i: usize, j: usize| seq[n - 1 + i + j];
    let det = match q {
        1 => entry(0, 0),
        2 => entry(0, 0) * entry(1, 1) - entry(0, 1) * entry(1, 0),
        3 => {
            entry(0, 0) * (entry(1, 1) * entry(2, 2) - entry(1, 2) * entry(2, 1))
                - entry(0, 1) * (entry(1, 0) * entry(2, 2) - entry(1, 2) * entry(2, 0))
                + entry(0, 2) * (entry(1, 0) * entry(2, 1) - entry(1, 1) * entry(2, 0))
        }
        _ => {
            let mut m: Vec<Vec<Complex64>> =
                (0..q).map(|i| (0..q).map(|j| entry(i, j)).collect()).collect();
            determinant(&mut m)
        }
    };
    Ok(det)
}

/// Gaussian elimination with partial pivoting; consumes the matrix.
fn determinant(m: &mut [Vec<Complex64>]) -> Complex64 {
    let size = m.len();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..size {
        let pivot = (col..size)
            .max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))
            .expect("non-empty range");
        if m[pivot][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..size {
            let factor = m[row][col] / m[col][col];
            for k in col..size {
                let v = m[col][k];
                m[row][k] -= factor * v;
            }
        }
    }
    det
}

/// `H_{2,1}(F_{f^{-1}}/2) = (13a_2^4 - 12a_2^2 a_3 - 12a_3^2 + 12a_2 a_4) / 48`.
pub fn h21_inv_log(t: &CoeffTriple) -> Complex64 {
    let CoeffTriple { a2, a3, a4 } = *t;
    let a2sq = a2 * a2;
    (13.0 * a2sq * a2sq - 12.0 * a2sq * a3 - 12.0 * a3 * a3 + 12.0 * a2 * a4) / 48.0
}

/// The same functional written in the inverse coefficients:
/// `(A_2 A_4 - A_3^2 + A_2^4 / 12) / 4`.
pub fn h21_from_inverse(inv: &CoeffTriple) -> Complex64 {
    let CoeffTriple { a2, a3, a4 } = *inv;
    let a2sq = a2 * a2;
    (a2 * a4 - a3 * a3 + a2sq * a2sq / 12.0) / 4.0
}

/// `Γ_1..Γ_3` through the series route: invert, take `log(g(w)/w)`, halve.
pub fn inv_log_coeffs_series(f: &TruncatedSeries) -> Result<GammaTriple, FunctionalError> {
    if f.order() < 4 {
        return Err(FunctionalError::ShortSeries(f.order()));
    }
    let log = f.revert()?.log_ratio()?;
    Ok(GammaTriple { g1: log.coeff(1) / 2.0, g2: log.coeff(2) / 2.0, g3: log.coeff(3) / 2.0 })
}

/// `γ_1..γ_3` through [`TruncatedSeries::log_ratio`].
pub fn log_coeffs_series(f: &TruncatedSeries) -> Result<GammaTriple, FunctionalError> {
    if f.order() < 4 {
        return Err(FunctionalError::ShortSeries(f.order()));
    }
    let log = f.log_ratio()?;
    Ok(GammaTriple { g1: log.coeff(1) / 2.0, g2: log.coeff(2) / 2.0, g3: log.coeff(3) / 2.0 })
}

/// `H_{2,1}(F_{f^{-1}}/2)` through the series route.
pub fn h21_inv_log_series(f: &TruncatedSeries) -> Result<Complex64, FunctionalError> {
    Ok(inv_log_coeffs_series(f)?.h21())
}

/// `H_{2,1}(F_{f^{-1}}/2)` of a class member written as `X + Y p_3`, where
/// `X` depends on `(p_1, p_2)` only and `Y ≥ 0`. Requires real `p_1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct P3Split {
    pub head: Complex64,
    pub p3_weight: f64,
}

impl P3Split {
    pub fn eval(&self, p3: Complex64) -> Complex64 {
        self.head + self.p3_weight * p3
    }

    /// `max_{|p_3| ≤ 1} |X + Y p_3| = |X| + Y`.
    pub fn max_modulus(&self) -> f64 {
        self.head.norm() + self.p3_weight
    }

    /// A unimodular `p_3` attaining [`Self::max_modulus`].
    pub fn maximizing_p3(&self) -> Complex64 {
        if self.head.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            self.head / self.head.norm()
        }
    }
}

/// Coefficients of the reduced objectives for real `p_1 = x`:
/// `α x^4 + β x^2 (1-x^2) p_2 + δ (1-x^2)(κ+x^2) p_2^2 + ε x (1-x^2)(1-|p_2|^2) p_3`.
struct ReducedForm {
    alpha: f64,
    beta: f64,
    delta: f64,
    kappa: f64,
    eps: f64,
}

fn reduced_form(class: Class) -> ReducedForm {
    match class {
        // convex: x^4/48 - (1/24) x^2 (1-x^2) p2 - (1/72)(1-x^2)(2+x^2) p2^2 + (1/24) x (1-x^2)(1-|p2|^2) p3
        Class::Convex => ReducedForm {
            alpha: 1.0 / 48.0,
            beta: -1.0 / 24.0,
            delta: -1.0 / 72.0,
            kappa: 2.0,
            eps: 1.0 / 24.0,
        },
        // starlike: (13/12) x^4 - (5/6) x^2 (1-x^2) p2 - (1/12)(1-x^2)(3+x^2) p2^2 + (1/3) x (1-x^2)(1-|p2|^2) p3
        Class::Starlike => ReducedForm {
            alpha: 13.0 / 12.0,
            beta: -5.0 / 6.0,
            delta: -1.0 / 12.0,
            kappa: 3.0,
            eps: 1.0 / 3.0,
        },
    }
}

/// The reduced objective at real `p_1`, split into `X + Y p_3`.
pub fn split_p3(class: Class, p1: f64, p2: Complex64) -> P3Split {
    let f = reduced_form(class);
    let x2 = p1 * p1;
    let m = 1.0 - x2;
    let head = f.alpha * x2 * x2 + f.beta * x2 * m * p2 + f.delta * m * (f.kappa + x2) * p2 * p2;
    P3Split { head, p3_weight: f.eps * p1 * m * (1.0 - p2.norm_sqr()) }
}

/// `H_{2,1}(F_{f^{-1}}/2)` for the member of `class` whose Carathéodory
/// function has parameters `p`.
///
/// The closed form holds for real `p_1 ≥ 0`. A general `p_1 = ρ e^{iφ}` is
/// the rotation by `φ` of the member with parameters
/// `(ρ, p_2 e^{-2iφ}, p_3 e^{-3iφ})`, whose functional is multiplied by `e^{4iφ}`.
pub fn reduced(class: Class, p: &DiskParams) -> Complex64 {
    let (rho, phi) = p.p1().to_polar();
    let p2 = p.p2() * Complex64::from_polar(1.0, -2.0 * phi);
    let p3 = p.p3() * Complex64::from_polar(1.0, -3.0 * phi);
    split_p3(class, rho, p2).eval(p3) * Complex64::from_polar(1.0, 4.0 * phi)
}

pub fn reduced_convex(p: &DiskParams) -> Complex64 {
    reduced(Class::Convex, p)
}

pub fn reduced_starlike(p: &DiskParams) -> Complex64 {
    reduced(Class::Starlike, p)
}
