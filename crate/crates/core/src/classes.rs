//! Convex and starlike functions generated from a Carathéodory function.
//!
//! A normalized `f` is starlike when `z f'(z) / f(z) = p(z)` and convex when
//! `1 + z f''(z) / f'(z) = p(z)` for some `p` with positive real part.
//! Matching coefficients gives
//!
//! ```text
//! starlike:  (n - 1) a_n     = sum_{m=1}^{n-1} c_m a_{n-m}
//! convex:    n (n - 1) a_n   = sum_{m=1}^{n-1} c_m (n - m) a_{n-m}
//! ```

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{SeriesError, TruncatedSeries};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassError {
    #[error("p(0) must be 1, got {0}")]
    NotNormalized(Complex64),
    #[error("p has order {have}, generating order {want} needs at least {need}")]
    ShortInput { have: usize, want: usize, need: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// The two classes with a sharp bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    Convex,
    Starlike,
}

impl Class {
    pub const ALL: [Class; 2] = [Class::Convex, Class::Starlike];

    /// Sharp bound on `|Γ_1 Γ_3 - Γ_2^2|` over the class.
    pub fn sharp_bound(self) -> f64 {
        match self {
            Class::Convex => 1.0 / 33.0,
            Class::Starlike => 13.0 / 12.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Class::Convex => "convex",
            Class::Starlike => "starlike",
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Class {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "convex" => Ok(Class::Convex),
            "starlike" => Ok(Class::Starlike),
            other => Err(format!("unknown class '{other}' (expected convex or starlike)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassTag {
    Convex,
    Starlike,
    Generic,
}

impl From<Class> for ClassTag {
    fn from(c: Class) -> Self {
        match c {
            Class::Convex => ClassTag::Convex,
            Class::Starlike => ClassTag::Starlike,
        }
    }
}

/// A normalized function `z + a_2 z^2 + ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchlichtFunction {
    series: TruncatedSeries,
    tag: ClassTag,
}

impl SchlichtFunction {
    /// Wraps a series with `a_0 = 0`, `a_1 = 1` as a generic function.
    pub fn generic(series: TruncatedSeries) -> Result<Self, SeriesError> {
        let (c0, c1) = (series.coeff(0), series.coeff(1));
        if c0.norm() > 1e-12 || (c1 - 1.0).norm() > 1e-12 {
            return Err(SeriesError::NotNormalized { c0, c1 });
        }
        Ok(Self { series, tag: ClassTag::Generic })
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn tag(&self) -> ClassTag {
        self.tag
    }

    /// `a_n`, zero beyond the order.
    pub fn a(&self, n: usize) -> Complex64 {
        self.series.coeff(n)
    }
}

fn check_p(p: &TruncatedSeries, order: usize) -> Result<(), ClassError> {
    let p0 = p.coeff(0);
    if (p0 - 1.0).norm() > 1e-12 {
        return Err(ClassError::NotNormalized(p0));
    }
    let need = order.saturating_sub(1);
    if p.order() < need {
        return Err(ClassError::ShortInput { have: p.order(), want: order, need });
    }
    Ok(())
}

pub fn starlike_from_p(p: &TruncatedSeries, order: usize) -> Result<SchlichtFunction, ClassError> {
    let order = order.max(1);
    check_p(p, order)?;
    let mut a = vec![Complex64::new(0.0, 0.0); order + 1];
    a[1] = Complex64::new(1.0, 0.0);
    for n in 2..=order {
        let acc: Complex64 = (1..n).map(|m| p.coeff(m) * a[n - m]).sum();
        a[n] = acc / (n - 1) as f64;
    }
    Ok(SchlichtFunction { series: TruncatedSeries::new(a)?, tag: ClassTag::Starlike })
}

pub fn convex_from_p(p: &TruncatedSeries, order: usize) -> Result<SchlichtFunction, ClassError> {
    let order = order.max(1);
    check_p(p, order)?;
    let mut a = vec![Complex64::new(0.0, 0.0); order + 1];
    a[1] = Complex64::new(1.0, 0.0);
    for n in 2..=order {
        let acc: Complex64 = (1..n).map(|m| p.coeff(m) * a[n - m] * (n - m) as f64).sum();
        a[n] = acc / (n * (n - 1)) as f64;
    }
    Ok(SchlichtFunction { series: TruncatedSeries::new(a)?, tag: ClassTag::Convex })
}

pub fn from_p(class: Class, p: &TruncatedSeries, order: usize) -> Result<SchlichtFunction, ClassError> {
    match class {
        Class::Convex => convex_from_p(p, order),
        Class::Starlike => starlike_from_p(p, order),
    }
}

/// Polar sample points for [`membership_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    pub radii: Vec<f64>,
    pub rays: usize,
}

impl Default for SampleGrid {
    fn default() -> Self {
        Self { radii: (1..=9).map(|k| k as f64 / 10.0).collect(), rays: 64 }
    }
}

/// Samples the analytic condition for `class` on the truncated series.
///
/// Truncation makes this approximate; values down to `-1e-6` are accepted.
pub fn membership_check(f: &SchlichtFunction, class: Class, grid: &SampleGrid) -> bool {
    let series = f.series();
    let d1 = series.derivative();
    let d2 = d1.derivative();
    grid.radii.iter().all(|&r| {
        (0..grid.rays).all(|k| {
            let z = Complex64::from_polar(r, k as f64 * std::f64::consts::TAU / grid.rays as f64);
            let value = match class {
                Class::Starlike => z * d1.eval(z) / series.eval(z),
                Class::Convex => 1.0 + z * d2.eval(z) / d1.eval(z),
            };
            value.re.is_finite() && value.re > -1e-6
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caratheodory::{boundary_p, coeffs_from_params, DiskParams};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn half_plane_p(order: usize) -> TruncatedSeries {
        boundary_p(&DiskParams::real(1.0, 0.0, 0.0).unwrap(), 1, order).unwrap()
    }

    #[test]
    fn starlike_examples() {
        let koebe = starlike_from_p(&half_plane_p(12), 12).unwrap();
        for n in 1..=12 {
            assert!((koebe.a(n) - n as f64).norm() < 1e-12);
        }
        assert_eq!(koebe.tag(), ClassTag::Starlike);

        let id = starlike_from_p(&TruncatedSeries::constant(c(1.0), 8), 8).unwrap();
        assert_eq!(id.series(), &TruncatedSeries::identity(8));

        // p = 1 + z gives f = z e^z: a_n = 1/(n-1)!
        let f = starlike_from_p(&TruncatedSeries::from_real(&[1.0, 1.0, 0.0, 0.0]).unwrap(), 4).unwrap();
        for (n, want) in [(2, 1.0), (3, 0.5), (4, 1.0 / 6.0)] {
            assert!((f.a(n) - want).norm() < 1e-15);
        }
    }

    #[test]
    fn convex_examples() {
        let f = convex_from_p(&half_plane_p(12), 12).unwrap();
        for n in 1..=12 {
            assert!((f.a(n) - 1.0).norm() < 1e-12);
        }

        let id = convex_from_p(&TruncatedSeries::constant(c(1.0), 6), 6).unwrap();
        assert_eq!(id.series(), &TruncatedSeries::identity(6));

        let s = (2.0f64 / 11.0).sqrt();
        let p = boundary_p(&DiskParams::real(s, 1.0, 0.0).unwrap(), 2, 12).unwrap();
        let f = convex_from_p(&p, 12).unwrap();
        let (c1, c2) = (2.0 * s, 2.0);
        assert!((f.a(2) - s).norm() < 1e-15);
        assert!((f.a(2).re - 0.42640).abs() < 1e-5);
        assert!((f.a(3) - (c2 + c1 * c1) / 6.0).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_p() {
        let p = TruncatedSeries::from_real(&[2.0, 1.0, 0.0]).unwrap();
        assert!(matches!(starlike_from_p(&p, 3), Err(ClassError::NotNormalized(_))));
        assert!(matches!(convex_from_p(&p, 3), Err(ClassError::NotNormalized(_))));
        let short = TruncatedSeries::from_real(&[1.0, 1.0, 0.0]).unwrap();
        assert!(matches!(convex_from_p(&short, 6), Err(ClassError::ShortInput { .. })));
    }

    fn random_params(rng: &mut ChaCha8Rng) -> DiskParams {
        let mut draw = || {
            Complex64::from_polar(rng.random::<f64>().sqrt(), rng.random_range(0.0..std::f64::consts::TAU))
        };
        DiskParams::new(draw(), draw(), draw()).unwrap()
    }

    #[test]
    fn recursions_match_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..500 {
            let k = coeffs_from_params(&random_params(&mut rng));
            let p = k.to_series(12);
            let (c1, c2, c3) = (k.c1, k.c2, k.c3);

            let f = convex_from_p(&p, 12).unwrap();
            assert!((f.a(2) - c1 / 2.0).norm() < 1e-12);
            assert!((f.a(3) - (c2 + c1 * c1) / 6.0).norm() < 1e-12);
            assert!((f.a(4) - (2.0 * c3 + 3.0 * c1 * c2 + c1 * c1 * c1) / 24.0).norm() < 1e-12);

            let g = starlike_from_p(&p, 12).unwrap();
            assert!((g.a(2) - c1).norm() < 1e-12);
            assert!((g.a(3) - (c2 + c1 * c1) / 2.0).norm() < 1e-12);
            assert!((g.a(4) - (2.0 * c3 + 3.0 * c1 * c2 + c1 * c1 * c1) / 6.0).norm() < 1e-12);

            // Alexander: f convex iff z f' starlike
            for n in 1..=12 {
                assert!((g.a(n) - f.a(n) * n as f64).norm() < 1e-12 * g.a(n).norm().max(1.0));
            }
        }
    }

    #[test]
    fn membership_examples() {
        let grid = SampleGrid::default();
        let koebe = starlike_from_p(&half_plane_p(200), 200).unwrap();
        assert!(membership_check(&koebe, Class::Starlike, &grid));
        let half_plane = convex_from_p(&half_plane_p(200), 200).unwrap();
        assert!(membership_check(&half_plane, Class::Convex, &grid));

        let bad = SchlichtFunction::generic(TruncatedSeries::from_real(&[0.0, 1.0, 2.0]).unwrap()).unwrap();
        assert!(!membership_check(&bad, Class::Convex, &grid));
    }
}
