//! Second Hankel determinant of the logarithmic inverse coefficients,
//! `H_{2,1}(F_{f^{-1}}/2) = Γ_1 Γ_3 - Γ_2^2`, for convex and starlike
//! functions.
//!
//! The crate provides truncated power-series arithmetic ([`series`]), the
//! disk parametrization of Carathéodory coefficients ([`caratheodory`]),
//! generation of convex and starlike functions ([`classes`]), the coefficient
//! functionals themselves ([`functionals`]), the `Y(A, B, C)` maximizer
//! ([`ymax`]) and a numerical verifier for the sharp bounds `1/33` and
//! `13/12` ([`verifier`]). [`report`] and [`cli`] turn results into JSON/CSV.

pub mod caratheodory;
pub mod classes;
pub mod cli;
pub mod functionals;
pub mod report;
pub mod series;
pub mod verifier;
pub mod ymax;

pub use caratheodory::{CaraCoeffs, DiskParams};
pub use classes::{Class, SchlichtFunction};
pub use functionals::{CoeffTriple, GammaTriple};
pub use series::TruncatedSeries;
pub use ymax::{YInput, YValue};
