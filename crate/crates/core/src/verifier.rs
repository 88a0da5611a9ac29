//! Numerical verification of the sharp bounds
//! `|H_{2,1}(F_{f^{-1}}/2)| ≤ 1/33` (convex) and `≤ 13/12` (starlike).
//!
//! The search runs over `p_1 ∈ [0, 1]` and `p_2` in the closed disk; `p_3`
//! enters linearly with a non-negative weight and is maximized out exactly
//! (see [`eliminate_p3`]). Rotating `f` rotates the functional by `e^{4iθ}`,
//! so a real non-negative `p_1` loses no generality.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::caratheodory::{boundary_p, coeffs_from_params, DiskParams, ParamError};
use crate::classes::{from_p, Class, ClassError};
use crate::functionals::{h21_inv_log, h21_inv_log_series, split_p3, CoeffTriple, FunctionalError};
use crate::report::complex_serde;
use crate::series::DEFAULT_ORDER;
use crate::ymax::{y_closed, YInput};

/// Slack allowed when the search maximum exceeds the sharp bound.
pub const MARGIN_TOL: f64 = 1e-7;
/// Slack allowed on sweep samples.
pub const SWEEP_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("{class} certification failed: computed {computed}, sharp value {sharp}, error {error:e} exceeds {tolerance:e}")]
    CertificationFailure { class: Class, computed: f64, sharp: f64, error: f64, tolerance: f64 },
    #[error("search grid {0} is invalid: every dimension needs at least 2 steps")]
    BadGrid(String),
    #[error("search grid {given} is below the minimum {minimum}")]
    GridTooCoarse { given: String, minimum: String },
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
}

/// `max_{|p_3| ≤ 1} |H|` for real `p_1 ∈ [0, 1]` and `|p_2| ≤ 1`.
pub fn eliminate_p3(p1: f64, p2: Complex64, class: Class) -> f64 {
    split_p3(class, p1, p2).max_modulus()
}

/// Search resolution: `p1_steps` intervals on `[0, 1]`, a polar grid of
/// `p2_radial × p2_angular` intervals on the upper half disk, then
/// `rounds` rounds of 10x local zoom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchGrid {
    pub p1_steps: usize,
    pub p2_radial: usize,
    pub p2_angular: usize,
    pub rounds: usize,
}

impl SearchGrid {
    pub const MINIMUM: SearchGrid = SearchGrid { p1_steps: 200, p2_radial: 128, p2_angular: 256, rounds: 3 };

    pub fn new(p1_steps: usize, p2_radial: usize, p2_angular: usize, rounds: usize) -> Result<Self, VerifyError> {
        let grid = Self { p1_steps, p2_radial, p2_angular, rounds };
        if p1_steps < 2 || p2_radial < 2 || p2_angular < 2 {
            return Err(VerifyError::BadGrid(grid.to_string()));
        }
        Ok(grid)
    }

    /// Like [`SearchGrid::new`] but also enforces [`SearchGrid::MINIMUM`].
    pub fn checked(p1_steps: usize, p2_radial: usize, p2_angular: usize, rounds: usize) -> Result<Self, VerifyError> {
        let grid = Self::new(p1_steps, p2_radial, p2_angular, rounds)?;
        let min = Self::MINIMUM;
        if p1_steps < min.p1_steps || p2_radial < min.p2_radial || p2_angular < min.p2_angular {
            return Err(VerifyError::GridTooCoarse { given: grid.to_string(), minimum: min.to_string() });
        }
        Ok(grid)
    }

    pub fn halved(&self) -> Self {
        Self {
            p1_steps: (self.p1_steps / 2).max(2),
            p2_radial: (self.p2_radial / 2).max(2),
            p2_angular: (self.p2_angular / 2).max(2),
            rounds: self.rounds,
        }
    }
}

impl Default for SearchGrid {
    fn default() -> Self {
        Self::MINIMUM
    }
}

impl std::fmt::Display for SearchGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}x{}", self.p1_steps, self.p2_radial, self.p2_angular)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    value: f64,
    p1: f64,
    radius: f64,
    angle: f64,
}

impl Candidate {
    fn at(class: Class, p1: f64, radius: f64, angle: f64) -> Self {
        let value = eliminate_p3(p1, Complex64::from_polar(radius, angle), class);
        Self { value, p1, radius, angle }
    }

    /// Larger value wins; ties go lexicographically to the smaller
    /// `(p_1, |p_2|, arg p_2)`.
    fn beats(&self, other: &Self) -> bool {
        match self.value.total_cmp(&other.value) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => (self.p1, self.radius, self.angle) < (other.p1, other.radius, other.angle),
        }
    }

    fn order(a: &Self, b: &Self) -> Ordering {
        if a.beats(b) {
            Ordering::Less
        } else if b.beats(a) {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    }

    fn pick(a: Self, b: Self) -> Self {
        if b.beats(&a) {
            b
        } else {
            a
        }
    }
}

/// One case of the proof, maximized numerically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub label: String,
    pub lower: f64,
    pub upper: f64,
    pub maximum: f64,
    pub location: f64,
    pub reference: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    pub class: Class,
    pub order: usize,
    pub rotation: f64,
    #[serde(with = "complex_serde::vec")]
    pub coefficients: Vec<Complex64>,
    /// `|H|` from the closed form in `a_2, a_3, a_4`.
    pub closed_form: f64,
    /// `|H|` from reversion and logarithm of the series.
    pub pipeline: f64,
    pub sharp_value: f64,
    pub error: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub bound_name: Class,
    pub search_max: f64,
    pub argmax: DiskParams,
    pub sharp_value: f64,
    pub margin: f64,
    pub grid: SearchGrid,
    pub seed: u64,
    pub evaluations: u64,
    /// Incumbent value after the grid pass and after each refinement round.
    pub refinement_trace: Vec<f64>,
    pub cases: Vec<CaseResult>,
    pub certification: Option<Certification>,
    pub runtime_ms: Option<u64>,
}

impl VerificationReport {
    pub fn margin_ok(&self) -> bool {
        self.margin >= -MARGIN_TOL
    }

    pub fn passed(&self) -> bool {
        self.margin_ok() && self.certification.is_some()
    }
}

/// Grid cells refined independently.
const STARTS: usize = 8;
/// Seeded random probes added to the refinement candidates.
const RANDOM_PROBES: usize = 4096;
/// Half-width, in points per dimension, of each local refinement grid.
const LOCAL_HALF: isize = 5;

pub fn global_search(class: Class, grid: &SearchGrid, seed: u64) -> VerificationReport {
    let started = Instant::now();
    let dp1 = 1.0 / grid.p1_steps as f64;
    let dr = 1.0 / grid.p2_radial as f64;
    let dt = PI / grid.p2_angular as f64;

    // best point of every p1 slab
    let slabs: Vec<Candidate> = (0..=grid.p1_steps)
        .into_par_iter()
        .map(|i| {
            let p1 = i as f64 * dp1;
            let mut best = Candidate::at(class, p1, 0.0, 0.0);
            for ir in 0..=grid.p2_radial {
                for it in 0..=grid.p2_angular {
                    let cand = Candidate::at(class, p1, ir as f64 * dr, it as f64 * dt);
                    if cand.beats(&best) {
                        best = cand;
                    }
                }
            }
            best
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probes: Vec<Candidate> = (0..RANDOM_PROBES)
        .map(|_| {
            let p1 = rng.random::<f64>();
            let radius = rng.random::<f64>().sqrt();
            let angle = rng.random_range(0.0..=PI);
            Candidate::at(class, p1, radius, angle)
        })
        .collect();

    let mut starts = slabs;
    starts.sort_by(Candidate::order);
    starts.truncate(STARTS);
    let mut probes = probes;
    probes.sort_by(Candidate::order);
    starts.extend(probes.into_iter().take(STARTS));

    let grid_best = starts.iter().copied().reduce(Candidate::pick).expect("non-empty");
    let mut trace = vec![grid_best.value];
    let (mut sp1, mut sr, mut st) = (dp1, dr, dt);
    let mut incumbents = starts;
    for _ in 0..grid.rounds {
        incumbents = incumbents
            .par_iter()
            .map(|c| refine_once(class, *c, sp1, sr, st))
            .collect();
        let best = incumbents.iter().copied().reduce(Candidate::pick).expect("non-empty");
        trace.push(best.value);
        sp1 /= 10.0;
        sr /= 10.0;
        st /= 10.0;
    }
    let best = incumbents.into_iter().reduce(Candidate::pick).expect("non-empty");
    let best = Candidate::pick(grid_best, best);

    let p2 = Complex64::from_polar(best.radius, best.angle);
    let p3 = split_p3(class, best.p1, p2).maximizing_p3();
    let argmax = DiskParams::new(best.p1.into(), p2, p3).expect("search stays in the disk");
    let evaluations = ((grid.p1_steps + 1) * (grid.p2_radial + 1) * (grid.p2_angular + 1)
        + RANDOM_PROBES
        + grid.rounds * 2 * STARTS * ((2 * LOCAL_HALF + 1) as usize).pow(3)) as u64;
    let sharp = class.sharp_bound();
    VerificationReport {
        bound_name: class,
        search_max: best.value,
        argmax,
        sharp_value: sharp,
        margin: sharp - best.value,
        grid: *grid,
        seed,
        evaluations,
        refinement_trace: trace,
        cases: Vec::new(),
        certification: None,
        runtime_ms: Some(started.elapsed().as_millis() as u64),
    }
}

/// One zoom round: a local grid spanning one coarse cell on each side.
fn refine_once(class: Class, centre: Candidate, cell_p1: f64, cell_r: f64, cell_t: f64) -> Candidate {
    let (hp, hr, ht) = (
        cell_p1 / LOCAL_HALF as f64,
        cell_r / LOCAL_HALF as f64,
        cell_t / LOCAL_HALF as f64,
    );
    let mut best = centre;
    for i in -LOCAL_HALF..=LOCAL_HALF {
        let p1 = (centre.p1 + i as f64 * hp).clamp(0.0, 1.0);
        for j in -LOCAL_HALF..=LOCAL_HALF {
            let radius = (centre.radius + j as f64 * hr).clamp(0.0, 1.0);
            for k in -LOCAL_HALF..=LOCAL_HALF {
                let angle = (centre.angle + k as f64 * ht).clamp(0.0, PI);
                let cand = Candidate::at(class, p1, radius, angle);
                if cand.beats(&best) {
                    best = cand;
                }
            }
        }
    }
    best
}

/// `p_1'`, the positive root of `9x^4 + 10x^2 - 4`.
pub fn convex_threshold() -> f64 {
    ((61.0f64).sqrt() - 5.0).sqrt() / 3.0
}

/// `p_1''`, the positive root of `96x^4 + 88x^2 - 15`.
pub fn starlike_threshold() -> f64 {
    0.5 * (((211.0f64).sqrt() - 11.0) / 6.0).sqrt()
}

pub fn case_threshold(class: Class) -> f64 {
    match class {
        Class::Convex => convex_threshold(),
        Class::Starlike => starlike_threshold(),
    }
}

/// Prefactor and `(A, B, C)` with
/// `max_{p_2, p_3} |H| = prefactor · Y(A, B, C)` for `p_1 ∈ (0, 1)`.
pub fn proof_abc(class: Class, p1: f64) -> (f64, YInput) {
    let m = 1.0 - p1 * p1;
    match class {
        Class::Convex => (
            p1 * m / 24.0,
            YInput::new(p1.powi(3) / (2.0 * m), -p1, -(2.0 + p1 * p1) / (3.0 * p1)),
        ),
        Class::Starlike => (
            p1 * m / 3.0,
            YInput::new(13.0 * p1.powi(3) / (4.0 * m), -2.5 * p1, -(3.0 + p1 * p1) / (4.0 * p1)),
        ),
    }
}

/// `prefactor · Y(A, B, C)` from [`proof_abc`].
pub fn proof_bound(class: Class, p1: f64) -> f64 {
    let (k, abc) = proof_abc(class, p1);
    k * y_closed(&abc).value
}

/// Closed-form case-3 bound on `(0, threshold]`, from the reflected
/// branch `-|A|+|B|+|C|`.
pub fn inner_case_bound(class: Class, x: f64) -> f64 {
    let x2 = x * x;
    match class {
        Class::Convex => (4.0 + 4.0 * x2 - 11.0 * x2 * x2) / 144.0,
        Class::Starlike => (3.0 + 8.0 * x2 - 24.0 * x2 * x2) / 12.0,
    }
}

/// Closed-form case-3 bound on `(threshold, 1)`, from the radical branch.
pub fn outer_case_bound(class: Class, x: f64) -> f64 {
    let x2 = x * x;
    match class {
        Class::Convex => (x2 * x2 - 2.0 * x2 + 4.0) / 144.0 * ((7.0 - x2) / (4.0 + 2.0 * x2)).sqrt(),
        Class::Starlike => {
            (12.0 * x2 * x2 - 2.0 * x2 + 3.0) / 6.0 * ((16.0 - 3.0 * x2) / (39.0 + 13.0 * x2)).sqrt()
        }
    }
}

const CASE_SAMPLES: usize = 100_000;

/// Maximizes `f` on `[lo, hi]`: dense sampling, then three rounds of 10x zoom.
fn maximize_1d(f: impl Fn(f64) -> f64 + Sync, lo: f64, hi: f64) -> (f64, f64) {
    let step = (hi - lo) / CASE_SAMPLES as f64;
    let pick = |a: (f64, f64), b: (f64, f64)| match b.1.total_cmp(&a.1) {
        Ordering::Greater => b,
        Ordering::Equal if b.0 < a.0 => b,
        _ => a,
    };
    let mut best = (0..=CASE_SAMPLES)
        .into_par_iter()
        .map(|i| {
            let x = if i == CASE_SAMPLES { hi } else { lo + i as f64 * step };
            (x, f(x))
        })
        .reduce_with(pick)
        .expect("non-empty");
    let mut width = step;
    for _ in 0..3 {
        let centre = best.0;
        for k in -10..=10 {
            let x = (centre + k as f64 * width / 10.0).clamp(lo, hi);
            best = pick(best, (x, f(x)));
        }
        width /= 10.0;
    }
    best
}

fn case(label: &str, lower: f64, upper: f64, reference: f64, f: impl Fn(f64) -> f64 + Sync) -> CaseResult {
    let (location, maximum) = maximize_1d(f, lower, upper);
    CaseResult {
        label: label.to_string(),
        lower,
        upper,
        maximum,
        location,
        reference,
        deviation: (maximum - reference).abs(),
    }
}

/// Replays the case split of the proof for `class`.
///
/// * `1`: `p_1 = 1`, maximized over `|p_2|`
/// * `2`: `p_1 = 0`, maximized over `|p_2|`
/// * `3d`: `p_1 ∈ (0, p_1']`, closed-form bound from the reflected branch
/// * `3e`: `p_1 ∈ (p_1', 1)`, closed-form bound from the radical branch
///
/// Open intervals are sampled on their closure. The last entry, `overall`,
/// is the maximum over the four cases.
pub fn case_analysis(class: Class) -> Vec<CaseResult> {
    let t = case_threshold(class);
    let (r1, r2, r3d, r3e) = match class {
        Class::Convex => (1.0 / 48.0, 1.0 / 36.0, 1.0 / 33.0, 0.0290035),
        Class::Starlike => (13.0 / 12.0, 0.25, 0.304775, 13.0 / 12.0),
    };
    let mut cases = vec![
        case("1", 0.0, 1.0, r1, |r| eliminate_p3(1.0, r.into(), class)),
        case("2", 0.0, 1.0, r2, |r| eliminate_p3(0.0, r.into(), class)),
        case("3d", 0.0, t, r3d, |x| inner_case_bound(class, x)),
        case("3e", t, 1.0, r3e, |x| outer_case_bound(class, x)),
    ];
    let top = cases
        .iter()
        .max_by(|a, b| a.maximum.total_cmp(&b.maximum))
        .expect("four cases")
        .clone();
    let sharp = class.sharp_bound();
    cases.push(CaseResult {
        label: "overall".to_string(),
        lower: 0.0,
        upper: 1.0,
        maximum: top.maximum,
        location: top.location,
        reference: sharp,
        deviation: (top.maximum - sharp).abs(),
    });
    cases
}

/// Parameters of the extremal Carathéodory function and its level.
fn extremal_params(class: Class) -> (DiskParams, u8) {
    match class {
        Class::Convex => {
            let s = (2.0f64 / 11.0).sqrt();
            (DiskParams::real(s, 1.0, 1.0).expect("in disk"), 2)
        }
        Class::Starlike => (DiskParams::real(1.0, 0.0, 0.0).expect("in disk"), 1),
    }
}

pub fn certification_tolerance(class: Class) -> f64 {
    match class {
        Class::Convex => 1e-9,
        Class::Starlike => 1e-12,
    }
}

/// Builds the extremal function, evaluates `|H|` through the series pipeline
/// and checks it against the sharp value.
pub fn certify_extremal(class: Class) -> Result<Certification, VerifyError> {
    certify_extremal_with(class, DEFAULT_ORDER, 0.0)
}

/// [`certify_extremal`] at a given truncation order, for the rotation
/// `e^{-iθ} f(e^{iθ} z)` of the extremal function.
pub fn certify_extremal_with(class: Class, order: usize, theta: f64) -> Result<Certification, VerifyError> {
    let (params, level) = extremal_params(class);
    let p = boundary_p(&params, level, order)?;
    let f = from_p(class, &p, order)?.series().rotate(theta);
    let pipeline = h21_inv_log_series(&f)?.norm();
    let closed_form = h21_inv_log(&CoeffTriple::from_series(&f)).norm();
    let sharp = class.sharp_bound();
    let tolerance = certification_tolerance(class);
    let error = (pipeline - sharp).abs().max((closed_form - sharp).abs());
    if error.is_nan() || error > tolerance {
        return Err(VerifyError::CertificationFailure { class, computed: pipeline, sharp, error, tolerance });
    }
    Ok(Certification {
        class,
        order,
        rotation: theta,
        coefficients: f.coeffs().to_vec(),
        closed_form,
        pipeline,
        sharp_value: sharp,
        error,
        tolerance,
    })
}

/// Full verification: search, case replay and certification.
pub fn verify(class: Class, grid: &SearchGrid, seed: u64) -> VerificationReport {
    let mut report = global_search(class, grid, seed);
    let started = Instant::now();
    report.cases = case_analysis(class);
    report.certification = certify_extremal(class).ok();
    report.runtime_ms = report.runtime_ms.map(|ms| ms + started.elapsed().as_millis() as u64);
    report
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub index: usize,
    #[serde(with = "complex_serde")]
    pub p1: Complex64,
    #[serde(with = "complex_serde")]
    pub p2: Complex64,
    #[serde(with = "complex_serde")]
    pub p3: Complex64,
    pub h_abs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub class: Class,
    pub seed: u64,
    pub records: Vec<SweepRecord>,
    pub max_abs: f64,
    /// Samples with `|H|` above the sharp bound plus [`SWEEP_TOL`].
    pub violations: usize,
}

/// `count` random class members, each with `|H_{2,1}(F_{f^{-1}}/2)|`.
pub fn sweep(class: Class, count: usize, seed: u64) -> SweepOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || Complex64::from_polar(rng.random::<f64>().sqrt(), rng.random_range(0.0..std::f64::consts::TAU));
    let records: Vec<SweepRecord> = (0..count.max(1))
        .map(|index| {
            let params = DiskParams::new(draw(), draw(), draw()).expect("sampled in the disk");
            let p = coeffs_from_params(&params).to_series(4);
            let f = from_p(class, &p, 4).expect("normalized p");
            let h_abs = h21_inv_log(&CoeffTriple::from_series(f.series())).norm();
            SweepRecord { index, p1: params.p1(), p2: params.p2(), p3: params.p3(), h_abs }
        })
        .collect();
    let limit = class.sharp_bound() + SWEEP_TOL;
    let violations = records.iter().filter(|r| r.h_abs > limit).count();
    let max_abs = records.iter().map(|r| r.h_abs).fold(0.0, f64::max);
    SweepOutcome { class, seed, records, max_abs, violations }
}
