//! Sharp bounds for the difference of moduli of the first two inverse
//! logarithmic coefficients over four classes of univalent functions.
//!
//! The crate layers truncated power series, the Caratheodory coefficient
//! body, the `Psi` functional with its closed-form maxima, the class
//! coefficient maps and extremal functions, and verification reports.

pub mod body;
pub mod caratheodory;
pub mod classes;
pub mod error;
pub mod functionals;
pub mod json;
pub mod maps;
pub mod psi;
pub mod quadrature;
pub mod render;
pub mod series;
pub mod verify;

pub use num_complex::Complex64;

pub use body::{BodyMaximum, BodySearch, ReducedPoint};
pub use caratheodory::{body_slack, rational_p, schwarz_from_p, CaratheodoryPoint};
pub use classes::{lune_membership, ClassId, Extremal, LuneCheck, LuneSampling};
pub use error::{Error, Result};
pub use functionals::{gamma_pair_closed, gamma_pair_series, inv_log_coeffs, inverse_coeffs, GammaPair};
pub use psi::{
    minus_branch, oracle_max, plus_branch, psi_bound, psi_minus_bound, psi_minus_value, psi_plus_bound,
    psi_plus_value, psi_value, MinusBranch, PlusBranch, PsiCoeffs, Sign,
};
pub use render::{render_image_domain, render_lune, ImageFigure, LuneFigure};
pub use series::{TruncatedSeries, DEFAULT_ORDER};
pub use verify::{
    search_class, verify_all, verify_theorem, ClassExtrema, Status, TheoremId, TheoremSpec, VerificationReport,
    VerifyOptions,
};
