//! Pointwise evaluation of the extremal maps, either in closed form or by
//! quadrature of their integral representations along the ray `[0, z]`.

use std::cell::Cell;

use num_complex::Complex64;

use crate::classes::Extremal;
use crate::error::{Error, Result};
use crate::quadrature::integrate;

/// Absolute tolerance of the outer quadrature.
pub const QUADRATURE_TOL: f64 = 1e-10;
/// The inner exponent integral of the nested maps is resolved more tightly
/// so that its error does not dominate the outer one.
const INNER_TOL: f64 = 1e-13;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `q(w) = w + sqrt(1 + w^2)` with the principal root.
pub fn lune_q(w: Complex64) -> Complex64 {
    w + (ONE + w * w).sqrt()
}

/// Schwarz function of `(1 + 2Az + z^2)/(1 - z^2)`: `(Az + z^2)/(1 + Az)`.
pub fn rational_schwarz(a: f64, z: Complex64) -> Complex64 {
    (a * z + z * z) / (ONE + a * z)
}

/// `f1(z) = z / (1 - z^2)`.
pub fn f1(z: Complex64) -> Complex64 {
    z / (ONE - z * z)
}

/// `f2(z) = artanh z = z + z^3/3 + z^5/5 + ...`.
pub fn f2(z: Complex64) -> Complex64 {
    0.5 * ((ONE + z) / (ONE - z)).ln()
}

/// Closed form `sqrt(2) z exp((z^2 - 1 + sqrt(1 + z^4)) / 2) / sqrt(sqrt(1 + z^4) + 1)`.
pub fn f3_closed(z: Complex64) -> Complex64 {
    z * f5_derivative(z)
}

/// `f5'(z)`, which equals `f3(z) / z`.
pub fn f5_derivative(z: Complex64) -> Complex64 {
    let root = (ONE + z.powu(4)).sqrt();
    std::f64::consts::SQRT_2 * ((z * z - ONE + root) * 0.5).exp() / (root + ONE).sqrt()
}

/// `int_0^z (q(w(t)) - 1)/t dt` with `w = (At + t^2)/(1 + At)`, via `t = s z`.
pub fn lune_exponent(a: f64, z: Complex64, tol: f64) -> Option<Complex64> {
    integrate(
        |s| {
            if s == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            (lune_q(rational_schwarz(a, s * z)) - ONE) / s
        },
        0.0,
        1.0,
        tol,
    )
}

/// Starlike-lune map `z exp(int_0^z (q(w(t)) - 1)/t dt)`.
pub fn starlike_lune_quadrature(a: f64, z: Complex64) -> Option<Complex64> {
    Some(z * lune_exponent(a, z, INNER_TOL)?.exp())
}

/// Convex-lune map `int_0^z exp(int_0^s (q(w(t)) - 1)/t dt) ds`, nested.
pub fn convex_lune_quadrature(a: f64, z: Complex64) -> Option<Complex64> {
    let failed = Cell::new(false);
    let value = integrate(
        |tau| match lune_exponent(a, tau * z, INNER_TOL) {
            Some(e) => e.exp(),
            None => {
                failed.set(true);
                Complex64::new(f64::NAN, 0.0)
            }
        },
        0.0,
        1.0,
        QUADRATURE_TOL,
    );
    if failed.get() {
        return None;
    }
    Some(z * value?)
}

/// How [`evaluate`] computes a map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Closed,
    Quadrature,
}

/// The figure method: closed forms for `f1`, `f2`, `f3`, quadrature otherwise.
pub fn figure_method(map: &Extremal) -> Method {
    match map {
        Extremal::F1 | Extremal::F2 | Extremal::F3 => Method::Closed,
        _ => Method::Quadrature,
    }
}

/// Evaluates an extremal map at `z`. `theta` only labels errors.
pub fn evaluate(map: &Extremal, z: Complex64, method: Method, theta: f64) -> Result<Complex64> {
    let fail = || Error::QuadratureNonConvergence { theta };
    let value = match (map, method) {
        (Extremal::F1, _) => f1(z),
        (Extremal::F2, _) => f2(z),
        (Extremal::F3, Method::Closed) => f3_closed(z),
        (Extremal::F3, Method::Quadrature) => starlike_lune_quadrature(0.0, z).ok_or_else(fail)?,
        (Extremal::F4, _) => {
            starlike_lune_quadrature(map.p_parameter(), z).ok_or_else(fail)?
        }
        (Extremal::F5, Method::Closed) => {
            let v = integrate(|t| f5_derivative(t * z), 0.0, 1.0, QUADRATURE_TOL)
                .ok_or_else(fail)?;
            z * v
        }
        (Extremal::F5, Method::Quadrature) => convex_lune_quadrature(0.0, z).ok_or_else(fail)?,
        (Extremal::F6 { a }, _) => convex_lune_quadrature(*a, z).ok_or_else(fail)?,
    };
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::DegenerateEvaluation(z));
    }
    Ok(value)
}
