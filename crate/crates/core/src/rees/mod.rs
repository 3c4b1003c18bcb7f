//! Defining equations of Rees algebras for almost linearly presented
//! height two perfect ideals in `k[x, y, z]`.
//!
//! The pipeline: validate the setting, bring `φ` into one of the three
//! shapes, pick the case, build the symmetric ideal and Jacobian duals,
//! compute the auxiliary ideals and assemble the defining ideal both by the
//! closed formulas and by saturation.

mod defining;
mod generator;
mod jdual;
mod kideals;
mod setting;
mod shape;

use thiserror::Error;

use crate::groebner::GroebnerError;
use crate::ideals::IdealsError;
use crate::pencil::PencilError;
use crate::ring::RingError;

pub use defining::{defining_ideal, verify_obs_colon, ColonCheck, DefiningIdeal, Method, Pipeline};
pub use generator::{generate, random_instance, Generated, GeneratorError, Target};
pub use jdual::{
    alpha_system, jacobian_dual, symmetric_equations, symmetric_ideal, AlphaSystem, Frame,
    JacobianDual,
};
pub use kideals::{
    build_n, ideal_j, ideal_k, ideal_kdoubleprime, ideal_kprime, phi_double_prime,
    symbolic_square_k, w0_in_i2, FormulaBranch, JIdeal, KData, KMethod, KResult,
    LastEquationCoeffs, NKind,
};
pub use setting::{validate_setting, Check, SettingReport};
pub use shape::{classify_case, normalize_shape, Case, CaseLabel, Normalized};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReesError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Ideals(#[from] IdealsError),
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error("matrix is not in one of the three normal shapes: {0}")]
    NotNormalized(String),
    #[error("normalization failed: {0}")]
    NormalizationFailed(String),
    #[error("l{column} has term {term} outside the frame {frame}")]
    FrameMismatch {
        column: usize,
        term: String,
        frame: String,
    },
    #[error("column {0} of the presentation matrix is zero")]
    ZeroColumn(usize),
    #[error("setting violated: {0}")]
    SettingViolation(String),
    #[error("operation needs {expected}, instance is {actual}")]
    WrongCase { expected: String, actual: String },
    #[error("unsupported subcase: {0}")]
    Unsupported(String),
    #[error("{what}: formula and oracle disagree, witness {witness}")]
    Mismatch { what: String, witness: String },
}
