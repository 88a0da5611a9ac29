//! Disk parametrization of the first three coefficients of a Carathéodory
//! function `p(z) = 1 + c_1 z + c_2 z^2 + c_3 z^3 + ...` with `Re p > 0`.
//!
//! For complex `p_1` the coefficients are
//!
//! ```text
//! c_1 = 2 p_1
//! c_2 = 2 p_1^2 + 2 (1 - |p_1|^2) p_2
//! c_3 = 2 p_1^3 + 4 (1 - |p_1|^2) p_1 p_2 - 2 (1 - |p_1|^2) conj(p_1) p_2^2
//!       + 2 (1 - |p_1|^2)(1 - |p_2|^2) p_3
//! ```
//!
//! which reduces to the familiar real form when `p_1 ∈ [0, 1]`. When one of
//! the parameters lies on the unit circle the function is unique and is one
//! of the three rational functions built by [`boundary_p`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{SeriesError, TruncatedSeries};

/// Slack allowed on `|p| ≤ 1` and on unimodularity tests.
pub const DISK_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("parameter p{index} = {value} lies outside the closed unit disk")]
    OutsideDisk { index: usize, value: Complex64 },
    #[error("parameter p{index} is not finite")]
    NonFinite { index: usize },
    #[error("level {level} reconstruction needs {requirement}")]
    LevelMismatch { level: u8, requirement: &'static str },
    #[error("reconstruction level must be 1, 2 or 3, got {0}")]
    BadLevel(u8),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Three parameters in the closed unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskParams {
    #[serde(with = "crate::report::complex_serde")]
    p1: Complex64,
    #[serde(with = "crate::report::complex_serde")]
    p2: Complex64,
    #[serde(with = "crate::report::complex_serde")]
    p3: Complex64,
}

impl DiskParams {
    pub fn new(p1: Complex64, p2: Complex64, p3: Complex64) -> Result<Self, ParamError> {
        for (i, p) in [p1, p2, p3].into_iter().enumerate() {
            if !(p.re.is_finite() && p.im.is_finite()) {
                return Err(ParamError::NonFinite { index: i + 1 });
            }
            if p.norm() > 1.0 + DISK_TOL {
                return Err(ParamError::OutsideDisk { index: i + 1, value: p });
            }
        }
        Ok(Self { p1, p2, p3 })
    }

    pub fn real(p1: f64, p2: f64, p3: f64) -> Result<Self, ParamError> {
        Self::new(p1.into(), p2.into(), p3.into())
    }

    pub fn p1(&self) -> Complex64 {
        self.p1
    }

    pub fn p2(&self) -> Complex64 {
        self.p2
    }

    pub fn p3(&self) -> Complex64 {
        self.p3
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaraCoeffs {
    #[serde(with = "crate::report::complex_serde")]
    pub c1: Complex64,
    #[serde(with = "crate::report::complex_serde")]
    pub c2: Complex64,
    #[serde(with = "crate::report::complex_serde")]
    pub c3: Complex64,
}

impl CaraCoeffs {
    /// `1 + c_1 z + c_2 z^2 + c_3 z^3` padded to `order`.
    pub fn to_series(&self, order: usize) -> TruncatedSeries {
        TruncatedSeries::with_order(&[Complex64::new(1.0, 0.0), self.c1, self.c2, self.c3], order)
            .expect("finite coefficients")
    }
}

pub fn coeffs_from_params(p: &DiskParams) -> CaraCoeffs {
    let DiskParams { p1, p2, p3 } = *p;
    let m1 = 1.0 - p1.norm_sqr();
    let m2 = 1.0 - p2.norm_sqr();
    CaraCoeffs {
        c1: 2.0 * p1,
        c2: 2.0 * p1 * p1 + 2.0 * m1 * p2,
        c3: 2.0 * p1 * p1 * p1 + 4.0 * m1 * p1 * p2 - 2.0 * m1 * p1.conj() * p2 * p2
            + 2.0 * m1 * m2 * p3,
    }
}

/// Parameters recovered from coefficients, with flags for the boundary cases
/// where the deeper parameters are not determined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamRecovery {
    pub params: DiskParams,
    /// `|p_1| = 1`: `p_2` and `p_3` were set to 0.
    pub p1_on_circle: bool,
    /// `|p_2| = 1`: `p_3` was set to 0.
    pub p2_on_circle: bool,
}

/// Inverts [`coeffs_from_params`].
///
/// Coefficient triples that do not come from any disk parameters produce a
/// parameter outside the disk, reported as [`ParamError::OutsideDisk`].
pub fn params_from_coeffs(c: &CaraCoeffs) -> Result<ParamRecovery, ParamError> {
    let zero = Complex64::new(0.0, 0.0);
    let p1 = c.c1 / 2.0;
    if (p1.norm() - 1.0).abs() <= DISK_TOL {
        return Ok(ParamRecovery {
            params: DiskParams::new(p1, zero, zero)?,
            p1_on_circle: true,
            p2_on_circle: false,
        });
    }
    let m1 = 1.0 - p1.norm_sqr();
    let p2 = (c.c2 - 2.0 * p1 * p1) / (2.0 * m1);
    if (p2.norm() - 1.0).abs() <= DISK_TOL {
        return Ok(ParamRecovery {
            params: DiskParams::new(p1, p2, zero)?,
            p1_on_circle: false,
            p2_on_circle: true,
        });
    }
    let m2 = 1.0 - p2.norm_sqr();
    let rest = c.c3 - 2.0 * p1 * p1 * p1 - 4.0 * m1 * p1 * p2 + 2.0 * m1 * p1.conj() * p2 * p2;
    let p3 = rest / (2.0 * m1 * m2);
    Ok(ParamRecovery {
        params: DiskParams::new(p1, p2, p3)?,
        p1_on_circle: false,
        p2_on_circle: false,
    })
}

fn on_circle(p: Complex64) -> bool {
    (p.norm() - 1.0).abs() <= DISK_TOL
}

fn inside(p: Complex64) -> bool {
    p.norm() < 1.0 - DISK_TOL
}

/// Taylor expansion to `order` of the unique Carathéodory function fixed by
/// the first `level` parameters when the last of them is unimodular.
pub fn boundary_p(p: &DiskParams, level: u8, order: usize) -> Result<TruncatedSeries, ParamError> {
    let one = Complex64::new(1.0, 0.0);
    let DiskParams { p1, p2, p3 } = *p;
    let (num, den) = match level {
        1 => {
            if !on_circle(p1) {
                return Err(ParamError::LevelMismatch { level, requirement: "|p1| = 1" });
            }
            (vec![one, p1], vec![one, -p1])
        }
        2 => {
            if !(inside(p1) && on_circle(p2)) {
                return Err(ParamError::LevelMismatch { level, requirement: "|p1| < 1 and |p2| = 1" });
            }
            let b = p1.conj() * p2;
            (vec![one, p1 + b, p2], vec![one, -(p1 - b), -p2])
        }
        3 => {
            if !(inside(p1) && inside(p2) && on_circle(p3)) {
                return Err(ParamError::LevelMismatch {
                    level,
                    requirement: "|p1| < 1, |p2| < 1 and |p3| = 1",
                });
            }
            let (q1, q2) = (p1.conj(), p2.conj());
            (
                vec![one, q2 * p3 + q1 * p2 + p1, q1 * p3 + p1 * q2 * p3 + p2, p3],
                vec![one, q2 * p3 + q1 * p2 - p1, q1 * p3 - p1 * q2 * p3 - p2, -p3],
            )
        }
        other => return Err(ParamError::BadLevel(other)),
    };
    let num = TruncatedSeries::with_order(&num, order)?;
    let den = TruncatedSeries::with_order(&den, order)?;
    Ok(num.divide(&den)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn random_in_disk(rng: &mut ChaCha8Rng, max_r: f64) -> Complex64 {
        Complex64::from_polar(max_r * rng.random::<f64>().sqrt(), rng.random_range(0.0..std::f64::consts::TAU))
    }

    #[test]
    fn validates_disk() {
        assert!(matches!(
            DiskParams::real(0.0, 1.5, 0.0),
            Err(ParamError::OutsideDisk { index: 2, .. })
        ));
        assert!(matches!(
            DiskParams::real(f64::INFINITY, 0.0, 0.0),
            Err(ParamError::NonFinite { index: 1 })
        ));
        assert!(DiskParams::new(Complex64::from_polar(1.0, 0.3), c(-1.0), c(0.0)).is_ok());
    }

    #[test]
    fn coefficient_examples() {
        let k = coeffs_from_params(&DiskParams::real(1.0, 0.3, -0.8).unwrap());
        assert_eq!((k.c1, k.c2, k.c3), (c(2.0), c(2.0), c(2.0)));
        let k = coeffs_from_params(&DiskParams::real(0.0, 1.0, 0.4).unwrap());
        assert_eq!((k.c1, k.c2, k.c3), (c(0.0), c(2.0), c(0.0)));
        // hand substitution: c3 = 1/4 + 3/4 - 3/16 + 9/16 = 11/8
        let k = coeffs_from_params(&DiskParams::real(0.5, 0.5, 0.5).unwrap());
        assert!(close(k.c1, c(1.0), 1e-15));
        assert!(close(k.c2, c(1.25), 1e-15));
        assert!(close(k.c3, c(11.0 / 8.0), 1e-15));
    }

    #[test]
    fn inverse_examples() {
        let r = params_from_coeffs(&CaraCoeffs { c1: c(2.0), c2: c(2.0), c3: c(2.0) }).unwrap();
        assert!(r.p1_on_circle && !r.p2_on_circle);
        assert_eq!(r.params, DiskParams::real(1.0, 0.0, 0.0).unwrap());

        let r = params_from_coeffs(&CaraCoeffs { c1: c(1.0), c2: c(1.25), c3: c(11.0 / 8.0) })
            .unwrap();
        assert!(!r.p1_on_circle && !r.p2_on_circle);
        for (got, want) in [(r.params.p1(), 0.5), (r.params.p2(), 0.5), (r.params.p3(), 0.5)] {
            assert!(close(got, c(want), 1e-14));
        }

        let r = params_from_coeffs(&CaraCoeffs { c1: c(0.0), c2: c(2.0), c3: c(0.0) }).unwrap();
        assert!(r.p2_on_circle && !r.p1_on_circle);
        assert_eq!(r.params, DiskParams::real(0.0, 1.0, 0.0).unwrap());
    }

    #[test]
    fn inverse_rejects_coefficients_outside_the_class() {
        let bad = CaraCoeffs { c1: c(0.0), c2: c(3.0), c3: c(0.0) };
        assert!(matches!(params_from_coeffs(&bad), Err(ParamError::OutsideDisk { index: 2, .. })));
    }

    #[test]
    fn round_trip_on_interior() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..500 {
            let p = DiskParams::new(
                random_in_disk(&mut rng, 0.99),
                random_in_disk(&mut rng, 0.99),
                random_in_disk(&mut rng, 1.0),
            )
            .unwrap();
            let coeffs = coeffs_from_params(&p);
            let back = coeffs_from_params(&params_from_coeffs(&coeffs).unwrap().params);
            assert!(close(back.c1, coeffs.c1, 1e-12));
            assert!(close(back.c2, coeffs.c2, 1e-12));
            assert!(close(back.c3, coeffs.c3, 1e-12));
        }
    }

    #[test]
    fn coefficient_bound_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let p = DiskParams::new(
                random_in_disk(&mut rng, 1.0),
                random_in_disk(&mut rng, 1.0),
                random_in_disk(&mut rng, 1.0),
            )
            .unwrap();
            let k = coeffs_from_params(&p);
            for cn in [k.c1, k.c2, k.c3] {
                assert!(cn.norm() <= 2.0 + 1e-12, "{p:?} -> {cn}");
            }
        }
    }

    #[test]
    fn boundary_examples() {
        let p = boundary_p(&DiskParams::real(1.0, 0.0, 0.0).unwrap(), 1, 6).unwrap();
        assert_eq!(p.coeffs(), &[c(1.0), c(2.0), c(2.0), c(2.0), c(2.0), c(2.0), c(2.0)]);

        let s = (2.0f64 / 11.0).sqrt();
        let p = boundary_p(&DiskParams::real(s, 1.0, 0.0).unwrap(), 2, 8).unwrap();
        let num = TruncatedSeries::with_order(&[c(1.0), c(2.0 * s), c(1.0)], 8).unwrap();
        let den = TruncatedSeries::with_order(&[c(1.0), c(0.0), c(-1.0)], 8).unwrap();
        assert!(p.max_abs_diff(&num.divide(&den).unwrap()) < 1e-15);

        let p = boundary_p(&DiskParams::real(0.0, 0.0, 1.0).unwrap(), 3, 9).unwrap();
        let want = [1.0, 0.0, 0.0, 2.0, 0.0, 0.0, 2.0, 0.0, 0.0, 2.0];
        for (n, w) in want.iter().enumerate() {
            assert!(close(p.coeff(n), c(*w), 1e-15));
        }
    }

    #[test]
    fn boundary_rejects_level_mismatch() {
        let p = DiskParams::real(0.5, 0.5, 1.0).unwrap();
        assert!(matches!(boundary_p(&p, 1, 5), Err(ParamError::LevelMismatch { level: 1, .. })));
        assert!(matches!(boundary_p(&p, 2, 5), Err(ParamError::LevelMismatch { level: 2, .. })));
        assert!(boundary_p(&p, 3, 5).is_ok());
        assert!(matches!(boundary_p(&p, 4, 5), Err(ParamError::BadLevel(4))));
    }

    fn random_boundary(rng: &mut ChaCha8Rng) -> (DiskParams, u8) {
        let level = rng.random_range(1..=3u8);
        let unit = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
        let a = random_in_disk(rng, 0.95);
        let b = random_in_disk(rng, 0.95);
        let p = match level {
            1 => DiskParams::new(unit, a, b),
            2 => DiskParams::new(a, unit, b),
            _ => DiskParams::new(a, b, unit),
        };
        (p.unwrap(), level)
    }

    #[test]
    fn boundary_functions_match_parametrization() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..300 {
            let (p, level) = random_boundary(&mut rng);
            let series = boundary_p(&p, level, 8).unwrap();
            let mut want = coeffs_from_params(&p);
            // deeper parameters do not enter once an earlier one is unimodular
            if level == 1 {
                want = coeffs_from_params(&DiskParams::new(p.p1(), c(0.0), c(0.0)).unwrap());
            } else if level == 2 {
                want = coeffs_from_params(&DiskParams::new(p.p1(), p.p2(), c(0.0)).unwrap());
            }
            assert!(close(series.coeff(1), want.c1, 1e-10));
            assert!(close(series.coeff(2), want.c2, 1e-10));
            assert!(close(series.coeff(3), want.c3, 1e-10));
        }
    }

    #[test]
    fn boundary_functions_have_positive_real_part() {
        // evaluate the rational function itself, not its truncation
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        for _ in 0..60 {
            let (p, level) = random_boundary(&mut rng);
            let series = boundary_p(&p, level, 200).unwrap();
            for ray in 0..64 {
                for r in [0.5, 0.9, 0.99] {
                    let z = Complex64::from_polar(r, ray as f64 * std::f64::consts::TAU / 64.0);
                    let value = rational_value(&p, level, z);
                    assert!(value.re > 0.0, "{p:?} level {level} at {z}: {value}");
                    if r <= 0.9 {
                        assert!(close(series.eval(z), value, 1e-6));
                    }
                }
            }
        }
    }

    fn rational_value(p: &DiskParams, level: u8, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let (p1, p2, p3) = (p.p1(), p.p2(), p.p3());
        match level {
            1 => (one + p1 * z) / (one - p1 * z),
            2 => {
                let b = p1.conj() * p2;
                (one + (p1 + b) * z + p2 * z * z) / (one - (p1 - b) * z - p2 * z * z)
            }
            _ => {
                let (q1, q2) = (p1.conj(), p2.conj());
                let z2 = z * z;
                let num = one + (q2 * p3 + q1 * p2 + p1) * z + (q1 * p3 + p1 * q2 * p3 + p2) * z2 + p3 * z2 * z;
                let den = one + (q2 * p3 + q1 * p2 - p1) * z + (q1 * p3 - p1 * q2 * p3 - p2) * z2 - p3 * z2 * z;
                num / den
            }
        }
    }
}
