//! `Y(A, B, C) = max_{|z| ≤ 1} (|A + Bz + Cz^2| + 1 - |z|^2)` for real `A, B, C`.
//!
//! [`y_closed`] evaluates the piecewise closed form; [`y_oracle`] maximizes
//! over a polar grid with local refinement and serves as its check.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YInput {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl YInput {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    /// `|A + Bz + Cz^2| + 1 - |z|^2`.
    pub fn objective(&self, z: Complex64) -> f64 {
        (self.a + z * (self.b + z * self.c)).norm() + 1.0 - z.norm_sqr()
    }
}

/// Which piece of the closed form produced the value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YBranch {
    /// `AC ≥ 0`, `|B| ≥ 2(1-|C|)`: `|A|+|B|+|C|`.
    SameSignBoundary,
    /// `AC ≥ 0`, `|B| < 2(1-|C|)`: `1+|A|+B^2/(4(1-|C|))`.
    SameSignInterior,
    /// `AC < 0`: `1-|A|+B^2/(4(1-|C|))`.
    OppositeSignInner,
    /// `AC < 0`: `1+|A|+B^2/(4(1+|C|))`.
    OppositeSignOuter,
    /// `AC < 0`, `|C|(|B|+4|A|) ≤ |AB|`: `|A|+|B|-|C|`.
    RealAxis,
    /// `AC < 0`, `|AB| ≤ |C|(|B|-4|A|)`: `-|A|+|B|+|C|`.
    Reflected,
    /// `AC < 0`, remaining case: `(|A|+|C|) sqrt(1 - B^2/(4AC))`.
    Radical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YValue {
    pub value: f64,
    pub branch: YBranch,
}

/// Closed-form `Y(A, B, C)`.
///
/// Guards are tested in order and the first match wins; all comparisons
/// are non-strict exactly where the piecewise definition is. Guards are
/// evaluated before any expression that would divide by `1 - |C|`.
pub fn y_closed(y: &YInput) -> YValue {
    let YInput { a, b, c } = *y;
    let (aa, ab, ac) = (a.abs(), b.abs(), c.abs());
    let b2 = b * b;
    let (value, branch) = if a * c >= 0.0 {
        if ab >= 2.0 * (1.0 - ac) {
            (aa + ab + ac, YBranch::SameSignBoundary)
        } else {
            (1.0 + aa + b2 / (4.0 * (1.0 - ac)), YBranch::SameSignInterior)
        }
    } else {
        // c != 0 here since a c < 0
        let threshold = -4.0 * a * c * (1.0 / (c * c) - 1.0);
        if threshold <= b2 && ab < 2.0 * (1.0 - ac) {
            (1.0 - aa + b2 / (4.0 * (1.0 - ac)), YBranch::OppositeSignInner)
        } else if b2 < (4.0 * (1.0 + ac) * (1.0 + ac)).min(threshold) {
            (1.0 + aa + b2 / (4.0 * (1.0 + ac)), YBranch::OppositeSignOuter)
        } else if ac * (ab + 4.0 * aa) <= aa * ab {
            // not |A|+|B|+|C|: that value is not
            // attainable for AC < 0, B != 0 and disagrees with the grid oracle
            (aa + ab - ac, YBranch::RealAxis)
        } else if aa * ab <= ac * (ab - 4.0 * aa) {
            (-aa + ab + ac, YBranch::Reflected)
        } else {
            ((aa + ac) * (1.0 - b2 / (4.0 * a * c)).sqrt(), YBranch::Radical)
        }
    };
    YValue { value, branch }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid resolution {radial}x{angular} is below the minimum {min_radial}x{min_angular}")]
    TooCoarse { radial: usize, angular: usize, min_radial: usize, min_angular: usize },
}

/// Polar grid for [`y_oracle`]: `radial` steps in `[0, 1]` and `angular`
/// steps in `[0, π]`, followed by `rounds` rounds of 10x zoom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleGrid {
    radial: usize,
    angular: usize,
    rounds: usize,
}

impl OracleGrid {
    pub const MIN_RADIAL: usize = 256;
    pub const MIN_ANGULAR: usize = 1024;

    pub fn new(radial: usize, angular: usize, rounds: usize) -> Result<Self, GridError> {
        if radial < Self::MIN_RADIAL || angular < Self::MIN_ANGULAR {
            return Err(GridError::TooCoarse {
                radial,
                angular,
                min_radial: Self::MIN_RADIAL,
                min_angular: Self::MIN_ANGULAR,
            });
        }
        Ok(Self { radial, angular, rounds })
    }

    pub fn radial(&self) -> usize {
        self.radial
    }

    pub fn angular(&self) -> usize {
        self.angular
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }
}

impl Default for OracleGrid {
    fn default() -> Self {
        Self { radial: Self::MIN_RADIAL, angular: Self::MIN_ANGULAR, rounds: 3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub radius: f64,
    pub angle: f64,
}

impl OracleResult {
    pub fn point(&self) -> Complex64 {
        Complex64::from_polar(self.radius, self.angle)
    }
}

/// Larger value wins; ties go to the smaller radius, then the smaller angle.
fn better(a: &OracleResult, b: &OracleResult) -> bool {
    match a.value.total_cmp(&b.value) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => (a.radius, a.angle) < (b.radius, b.angle),
    }
}

fn pick(a: OracleResult, b: OracleResult) -> OracleResult {
    if better(&b, &a) {
        b
    } else {
        a
    }
}

/// Number of grid candidates refined independently.
const STARTS: usize = 8;
/// Half-width, in points, of each local refinement grid.
const LOCAL_HALF: usize = 10;
/// Cap on re-centring moves per refinement round.
const MAX_MOVES: usize = 10_000;

/// Grid-search value of `Y(A, B, C)`.
///
/// Real coefficients make the objective symmetric under `z ↦ conj(z)`, so
/// only the upper half disk is sampled.
pub fn y_oracle(y: &YInput, grid: &OracleGrid) -> OracleResult {
    let dr = 1.0 / grid.radial as f64;
    let dt = PI / grid.angular as f64;
    let trig: Vec<(f64, f64, f64, f64)> = (0..=grid.angular)
        .map(|j| {
            let t = j as f64 * dt;
            (t.cos(), t.sin(), (2.0 * t).cos(), (2.0 * t).sin())
        })
        .collect();

    let width = grid.angular + 1;
    let values: Vec<f64> = (0..=grid.radial)
        .into_par_iter()
        .flat_map_iter(|i| {
            let r = i as f64 * dr;
            let r2 = r * r;
            trig.iter().map(move |&(c1, s1, c2, s2)| {
                let re = y.a + y.b * r * c1 + y.c * r2 * c2;
                let im = y.b * r * s1 + y.c * r2 * s2;
                re.hypot(im) + 1.0 - r2
            })
        })
        .collect();

    // discrete local maxima over the 8-neighbourhood seed the refinement
    let at = |i: usize, j: usize| OracleResult { value: values[i * width + j], radius: i as f64 * dr, angle: j as f64 * dt };
    let mut starts: Vec<OracleResult> = (0..=grid.radial)
        .into_par_iter()
        .flat_map_iter(|i| {
            (0..width).filter_map(move |j| {
                let here = at(i, j);
                let mut neighbours = (i.saturating_sub(1)..=(i + 1).min(grid.radial))
                    .flat_map(|ii| (j.saturating_sub(1)..=(j + 1).min(grid.angular)).map(move |jj| (ii, jj)))
                    .filter(|&(ii, jj)| (ii, jj) != (i, j));
                neighbours.all(|(ii, jj)| !better(&at(ii, jj), &here)).then_some(here)
            })
        })
        .collect();
    starts.sort_by(|a, b| if better(a, b) { Ordering::Less } else if better(b, a) { Ordering::Greater } else { Ordering::Equal });
    starts.truncate(STARTS);

    starts
        .into_par_iter()
        .map(|start| refine(y, start, dr, dt, grid.rounds))
        .reduce_with(pick)
        .expect("at least one start")
}

/// Hill-climbs on a local polar grid, re-centring until no neighbour is
/// better, then zooms in 10x. Re-centring lets the search travel along
/// narrow ridges that a single fixed window would cut off.
fn refine(y: &YInput, start: OracleResult, dr: f64, dt: f64, rounds: usize) -> OracleResult {
    let mut best = start;
    let (mut dr, mut dt) = (dr, dt);
    let half = LOCAL_HALF as isize;
    for _ in 0..rounds {
        let (sr, st) = (dr / LOCAL_HALF as f64, dt / LOCAL_HALF as f64);
        for _ in 0..MAX_MOVES {
            let centre = best;
            for i in -half..=half {
                let r = (centre.radius + i as f64 * sr).clamp(0.0, 1.0);
                for j in -half..=half {
                    let t = (centre.angle + j as f64 * st).clamp(0.0, PI);
                    let cand = OracleResult { value: y.objective(Complex64::from_polar(r, t)), radius: r, angle: t };
                    if better(&cand, &best) {
                        best = cand;
                    }
                }
            }
            if best == centre {
                break;
            }
        }
        dr /= 10.0;
        dt /= 10.0;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn closed_form_examples() {
        let v = y_closed(&YInput::new(0.0, 0.0, 0.0));
        assert_eq!(v.value, 1.0);
        let v = y_closed(&YInput::new(1.0, 2.0, 0.0));
        assert_eq!((v.value, v.branch), (3.0, YBranch::SameSignBoundary));

        let s = (2.0f64 / 11.0).sqrt();
        let v = y_closed(&YInput::new(s / 9.0, -s, -4.0 * s));
        assert_eq!(v.branch, YBranch::Reflected);
        assert!((v.value - 44.0 / 9.0 * s).abs() < 1e-14);
        assert!((v.value - 2.0847).abs() < 1e-4);
    }

    #[test]
    fn singular_denominator_never_evaluated() {
        for c in [1.0, -1.0] {
            for a in [-0.5, 0.0, 0.5] {
                for b in [-0.3, 0.0, 0.3] {
                    let v = y_closed(&YInput::new(a, b, c));
                    assert!(v.value.is_finite(), "({a},{b},{c}) -> {v:?}");
                }
            }
        }
    }

    #[test]
    fn oracle_matches_examples() {
        let grid = OracleGrid::default();
        let s = (2.0f64 / 11.0).sqrt();
        for y in [
            YInput::new(0.0, 0.0, 0.0),
            YInput::new(1.0, 2.0, 0.0),
            YInput::new(s / 9.0, -s, -4.0 * s),
            YInput::new(-1.0, 1.0, -1.0),
            YInput::new(1.0, -3.0, 2.0),
        ] {
            let o = y_oracle(&y, &grid);
            let c = y_closed(&y);
            assert!((o.value - c.value).abs() <= 1e-6, "{y:?}: oracle {o:?} closed {c:?}");
            assert!((y.objective(o.point()) - o.value).abs() < 1e-15);
        }
    }

    #[test]
    fn symmetries_and_lower_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..1000 {
            let (a, b, c) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let v = y_closed(&YInput::new(a, b, c)).value;
            assert!((v - y_closed(&YInput::new(-a, -b, -c)).value).abs() <= 1e-12);
            assert!((v - y_closed(&YInput::new(a, -b, c)).value).abs() <= 1e-12);
            assert!(v >= 1.0 && v >= a.abs() + 1.0 - 1e-12);
        }
    }

    #[test]
    fn grid_minimum_enforced() {
        assert!(matches!(OracleGrid::new(128, 1024, 3), Err(GridError::TooCoarse { .. })));
        assert!(OracleGrid::new(256, 2048, 3).is_ok());
    }

    #[test]
    fn oracle_follows_ridge_to_real_axis() {
        // maximum on the real axis near the origin, behind a narrow ridge
        for y in [
            YInput::new(-2.0098287344609744, -0.20552178589705106, 0.9427880346818398),
            YInput::new(-1.7180706433527635, 0.4993352482374651, 0.9620510353930842),
        ] {
            let o = y_oracle(&y, &OracleGrid::default());
            assert!((o.value - y_closed(&y).value).abs() <= 1e-9, "{y:?}: {o:?}");
        }
    }

    #[test]
    fn oracle_is_deterministic() {
        let y = YInput::new(0.4, -1.1, 0.9);
        let a = y_oracle(&y, &OracleGrid::default());
        let b = y_oracle(&y, &OracleGrid::default());
        assert_eq!(a, b);
    }
}
