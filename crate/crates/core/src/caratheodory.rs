//! Carathéodory functions and their first two coefficients.
//!
//! The attainable pairs `(c1, c2)` of `p(z) = 1 + c1 z + c2 z^2 + ...` with
//! `Re p > 0` form the two-coefficient body, parametrized here by two Schur
//! parameters in the closed unit disk:
//!
//! ```text
//! c1 = 2 zeta1,    c2 = 2 zeta1^2 + 2 (1 - |zeta1|^2) zeta2.
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

/// Slack allowed on `|zeta| <= 1` to absorb rounding in polar construction.
const DISK_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaratheodoryPoint {
    zeta1: Complex64,
    zeta2: Complex64,
}

impl CaratheodoryPoint {
    pub fn new(zeta1: Complex64, zeta2: Complex64) -> Result<Self> {
        for (name, value) in [("zeta1", zeta1), ("zeta2", zeta2)] {
            if value.norm().is_nan() || value.norm() > 1.0 + DISK_SLACK {
                return Err(Error::OutsideDisk { name, value });
            }
        }
        Ok(Self { zeta1, zeta2 })
    }

    /// Point in the rotation-reduced chart: `zeta1 = x` real in `[0, 1]`,
    /// `zeta2 = rho e^{i phi}`.
    pub fn from_reduced(x: f64, rho: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutsideDisk {
                name: "zeta1",
                value: Complex64::new(x, 0.0),
            });
        }
        Self::new(Complex64::new(x, 0.0), Complex64::from_polar(rho, phi))
    }

    pub fn zeta1(&self) -> Complex64 {
        self.zeta1
    }

    pub fn zeta2(&self) -> Complex64 {
        self.zeta2
    }

    pub fn to_coeffs(&self) -> (Complex64, Complex64) {
        coeffs_from_schur(self.zeta1, self.zeta2)
    }
}

#[inline]
pub(crate) fn coeffs_from_schur(zeta1: Complex64, zeta2: Complex64) -> (Complex64, Complex64) {
    let c1 = 2.0 * zeta1;
    let c2 = 2.0 * zeta1 * zeta1 + 2.0 * (1.0 - zeta1.norm_sqr()) * zeta2;
    (c1, c2)
}

/// Slack of the defining inequality `|c2 - c1^2/2| <= 2 - |c1|^2/2` of the
/// two-coefficient body; nonnegative exactly on the body.
pub fn body_slack(c1: Complex64, c2: Complex64) -> f64 {
    (2.0 - c1.norm_sqr() / 2.0) - (c2 - c1 * c1 / 2.0).norm()
}

/// `p(z) = (1 + 2 A z + z^2) / (1 - z^2)`, a convex combination of
/// `(1+z)/(1-z)` and `(1-z)/(1+z)`; `c1 = 2A`, `c2 = 2`.
pub fn rational_p(a: f64, order: usize) -> Result<TruncatedSeries> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::InvalidArgument(format!(
            "rational_p parameter A = {a} outside [0, 1]"
        )));
    }
    let numerator = TruncatedSeries::from_real(&[1.0, 2.0 * a, 1.0], order);
    numerator.mul(&TruncatedSeries::geometric(Complex64::new(1.0, 0.0), 2, order))
}

/// Closed-form value of [`rational_p`] at a point of the open disk.
pub fn rational_p_value(a: f64, z: Complex64) -> Complex64 {
    (1.0 + 2.0 * a * z + z * z) / (1.0 - z * z)
}

/// `(1 + z) / (1 - z)`.
pub fn p_one(order: usize) -> TruncatedSeries {
    rational_p(1.0, order).expect("A = 1 is admissible")
}

/// `(1 + z^2) / (1 - z^2)`.
pub fn p_two(order: usize) -> TruncatedSeries {
    rational_p(0.0, order).expect("A = 0 is admissible")
}

/// `w = (p - 1) / (p + 1)`, the Schwarz function attached to `p`.
pub fn schwarz_from_p(p: &TruncatedSeries) -> Result<TruncatedSeries> {
    let c0 = p.coeff(0);
    if (c0 - 1.0).norm() > 1e-12 {
        return Err(Error::ConstantTerm {
            op: "schwarz_from_p",
            expected: "1",
            found: c0,
        });
    }
    let one = Complex64::new(1.0, 0.0);
    let numerator = p.add_constant(-one);
    let denominator = p.add_constant(one);
    let w = numerator.mul(&denominator.reciprocal()?)?;
    let mut coeffs = w.into_coeffs();
    coeffs[0] = Complex64::new(0.0, 0.0);
    let order = coeffs.len() - 1;
    Ok(TruncatedSeries::new(coeffs, order))
}
