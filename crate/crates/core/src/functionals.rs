//! Inverse coefficients, logarithmic and inverse logarithmic coefficients.
//!
//! Two independent routes are provided for `Gamma_1`, `Gamma_2`: closed forms
//! in `(a2, a3)` and the full series pipeline `log(F(w)/w) / 2` with
//! `F = f^{-1}` obtained by reversion.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaPair {
    pub gamma1: Complex64,
    pub gamma2: Complex64,
}

impl GammaPair {
    /// `|Gamma_2| - |Gamma_1|`.
    pub fn moduli_diff(&self) -> f64 {
        moduli_diff(self)
    }
}

/// `(A2, A3)` of the inverse function: `A2 = -a2`, `A3 = 2 a2^2 - a3`.
pub fn inverse_coeffs(a2: Complex64, a3: Complex64) -> (Complex64, Complex64) {
    (-a2, 2.0 * a2 * a2 - a3)
}

pub fn inv_log_coeffs(a2: Complex64, a3: Complex64) -> GammaPair {
    GammaPair {
        gamma1: -0.5 * a2,
        gamma2: -0.5 * a3 + 0.75 * a2 * a2,
    }
}

pub fn moduli_diff(g: &GammaPair) -> f64 {
    g.gamma2.norm() - g.gamma1.norm()
}

fn check_normalized(f: &TruncatedSeries) -> Result<()> {
    let one = Complex64::new(1.0, 0.0);
    if f.order() < 2 || f.coeff(0) != Complex64::new(0.0, 0.0) || f.coeff(1) != one {
        return Err(Error::NotNormalized);
    }
    Ok(())
}

/// Half the coefficients of `log(g(z)/z)` for normalized `g`, indices `1..=n_max`.
fn half_log_quotient(g: &TruncatedSeries, n_max: usize) -> Result<Vec<Complex64>> {
    let quotient = g.div_z()?;
    if n_max > quotient.order() {
        return Err(Error::InvalidArgument(format!(
            "n_max = {n_max} must be below the truncation order {}",
            g.order()
        )));
    }
    let log = quotient.log()?;
    Ok((1..=n_max).map(|n| 0.5 * log.coeff(n)).collect())
}

/// `Gamma_1 ..= Gamma_{n_max}` from `log(f^{-1}(w)/w) = 2 sum Gamma_n w^n`.
pub fn inv_log_coeffs_series(f: &TruncatedSeries, n_max: usize) -> Result<Vec<Complex64>> {
    check_normalized(f)?;
    half_log_quotient(&f.revert()?, n_max)
}

/// `gamma_1 ..= gamma_{n_max}` from `log(f(z)/z) = 2 sum gamma_n z^n`.
pub fn log_coeffs_series(f: &TruncatedSeries, n_max: usize) -> Result<Vec<Complex64>> {
    check_normalized(f)?;
    half_log_quotient(f, n_max)
}

/// Series route for `(Gamma_1, Gamma_2)`.
pub fn gamma_pair_series(f: &TruncatedSeries) -> Result<GammaPair> {
    let g = inv_log_coeffs_series(f, 2)?;
    Ok(GammaPair {
        gamma1: g[0],
        gamma2: g[1],
    })
}

/// Closed-form route for `(Gamma_1, Gamma_2)` reading `a2`, `a3` off `f`.
pub fn gamma_pair_closed(f: &TruncatedSeries) -> Result<GammaPair> {
    check_normalized(f)?;
    Ok(inv_log_coeffs(f.coeff(2), f.coeff(3)))
}
