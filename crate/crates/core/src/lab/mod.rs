//! Discrete harmonic-function laboratory on `[-1, 1]²`.

pub mod grid;
pub mod sample;
pub mod three_balls;
pub mod validate;

pub use grid::{solve_dirichlet, GridField, GridSpec};
pub use sample::{check_ball, Harmonic, LabSample, Point, Sample};
pub use three_balls::{check_three_balls, empirical_alpha, AlphaEstimate};
pub use validate::{validate_bound, FamilySpec, ValidationReport, ValidationRow, Verdict};
