//! Magnus expansions and Lie-group integrators for `Y' = A(t) Y`.
//!
//! The numeric core is generic over the scalar (`f64`, `f32`, and exact
//! [`Rational`] where arithmetic allows); the aliases below fix the common
//! choices.

pub mod autonomize;
pub mod error;
pub mod linalg;
pub mod magnus;
pub mod mat;
pub mod matfn;
pub mod method;
pub mod poly;
pub mod postlie;
pub mod prelie;
pub mod problem;
pub mod quadrature;
pub mod rational;
pub mod rkmk;
pub mod scalar;

pub use autonomize::{solve_augmented, AugmentedState};
pub use error::{Error, Result};
pub use linalg::{ad_pow, commutator, dexp, dexpinv, expm, logm, LieAlgebra};
pub use magnus::{magnus2_step, magnus4_step, magnus_term, reference_solve, Step, Trajectory};
pub use mat::Mat;
pub use matfn::MatFn;
pub use method::integrate_with;
pub use method::{integrate, Method, STANDARD_METHODS};
pub use poly::MatPoly;
pub use postlie::{geometric_magnus_check, theta_series, TField, TauSeries};
pub use rational::{bernoulli, Rational};
pub use rkmk::{cstage_step, rkmk_step, ButcherTableau, ContinuousCoeffs, RkmkOptions};
pub use scalar::{Real, Scalar};

pub type Mat64 = Mat<f64>;
pub type Mat32 = Mat<f32>;
pub type MatQ = Mat<Rational>;
pub type MatPolyQ = MatPoly<Rational>;
pub type MatFn64 = MatFn<f64>;
