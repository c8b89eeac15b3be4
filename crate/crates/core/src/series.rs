//! Truncated formal power series over `Complex64`.
//!
//! A [`TruncatedSeries`] of order `N` stores the coefficients `c_0 ..= c_N`
//! and every operation is exact in degrees `0..=N`: cross terms that would
//! land above `N` are dropped, never approximated. Binary operations require
//! both operands to carry the same order.
//!
//! Quotients, logarithms, exponentials and square roots use the classical
//! `O(N^2)` linear recurrences obtained from differentiating the defining
//! identity; reversion uses Lagrange inversion.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation order used when callers have no reason to pick another one.
pub const DEFAULT_ORDER: usize = 12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TruncatedSeries")
            .field("order", &self.order())
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl TruncatedSeries {
    /// Builds a series of the given order. Missing coefficients are zero,
    /// surplus ones are truncated.
    pub fn new(mut coeffs: Vec<Complex64>, order: usize) -> Self {
        coeffs.resize(order + 1, ZERO);
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64], order: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(ONE, order)
    }

    /// `c * z^degree`, or zero when `degree > order`.
    pub fn monomial(c: Complex64, degree: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if degree <= order {
            s.coeffs[degree] = c;
        }
        s
    }

    /// The identity series `z`.
    pub fn identity(order: usize) -> Self {
        Self::monomial(ONE, 1, order)
    }

    /// Geometric series `1 / (1 - c z^step)`.
    pub fn geometric(c: Complex64, step: usize, order: usize) -> Self {
        assert!(step > 0, "geometric step must be positive");
        let mut s = Self::zero(order);
        let mut power = ONE;
        for k in (0..=order).step_by(step) {
            s.coeffs[k] = power;
            power *= c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of `z^n`; zero above the truncation order.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    /// Re-truncates (or zero-extends) to a new order. Extending does not
    /// recover lost information; the new top coefficients are plain zeros.
    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.clone(), order)
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| f(c)).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        self.map(|c| c * factor)
    }

    /// Adds a constant to `c_0`.
    pub fn add_constant(&self, c: Complex64) -> Self {
        let mut s = self.clone();
        s.coeffs[0] += c;
        s
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = vec![ZERO; n + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            for (j, &b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(Self { coeffs: out })
    }

    pub fn square(&self) -> Self {
        self.mul(self).expect("same order")
    }

    /// Multiplicative inverse. Requires `c_0 != 0`.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0 == ZERO {
            return Err(Error::ConstantTerm {
                op: "reciprocal",
                expected: "nonzero",
                found: c0,
            });
        }
        let inv0 = c0.inv();
        let n = self.order();
        let mut out = vec![ZERO; n + 1];
        out[0] = inv0;
        for k in 1..=n {
            let acc: Complex64 = (1..=k).map(|j| self.coeffs[j] * out[k - j]).sum();
            out[k] = -acc * inv0;
        }
        Ok(Self { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        self.mul(&other.reciprocal()?)
    }

    /// `outer(inner(z))` by Horner accumulation. Requires `inner` to have a
    /// zero constant term so that every degree-`<= N` contribution is finite.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_order(inner)?;
        if inner.coeffs[0] != ZERO {
            return Err(Error::ConstantTerm {
                op: "compose",
                expected: "0",
                found: inner.coeffs[0],
            });
        }
        let n = self.order();
        let mut acc = Self::constant(self.coeffs[n], n);
        for &c in self.coeffs[..n].iter().rev() {
            acc = acc.mul(inner)?.add_constant(c);
        }
        Ok(acc)
    }

    /// `exp(s)` for `s` with zero constant term, via `(exp s)' = s' exp s`.
    pub fn exp(&self) -> Result<Self> {
        if self.coeffs[0] != ZERO {
            return Err(Error::ConstantTerm {
                op: "exp",
                expected: "0",
                found: self.coeffs[0],
            });
        }
        let n = self.order();
        let mut out = vec![ZERO; n + 1];
        out[0] = ONE;
        for k in 1..=n {
            let acc: Complex64 = (1..=k)
                .map(|j| self.coeffs[j] * out[k - j] * j as f64)
                .sum();
            out[k] = acc / k as f64;
        }
        Ok(Self { coeffs: out })
    }

    /// `log(s)` for `s` with `c_0 = 1`, via `(log s)' = s' / s`.
    pub fn log(&self) -> Result<Self> {
        if self.coeffs[0] != ONE {
            return Err(Error::ConstantTerm {
                op: "log",
                expected: "1",
                found: self.coeffs[0],
            });
        }
        let n = self.order();
        let mut out = vec![ZERO; n + 1];
        for k in 1..=n {
            let acc: Complex64 = (1..k)
                .map(|j| out[j] * self.coeffs[k - j] * j as f64)
                .sum();
            out[k] = self.coeffs[k] - acc / k as f64;
        }
        Ok(Self { coeffs: out })
    }

    /// Square root on the branch with `t(0) = +1`. Requires `c_0 = 1`.
    pub fn sqrt(&self) -> Result<Self> {
        if self.coeffs[0] != ONE {
            return Err(Error::ConstantTerm {
                op: "sqrt",
                expected: "1",
                found: self.coeffs[0],
            });
        }
        let n = self.order();
        let mut out = vec![ZERO; n + 1];
        out[0] = ONE;
        for k in 1..=n {
            let acc: Complex64 = (1..k).map(|j| out[j] * out[k - j]).sum();
            out[k] = (self.coeffs[k] - acc) * 0.5;
        }
        Ok(Self { coeffs: out })
    }

    /// Compositional inverse of a normalized series `z + a_2 z^2 + ...`.
    ///
    /// Lagrange inversion: `[w^n] F = (1/n) [z^(n-1)] (z / s(z))^n`.
    pub fn revert(&self) -> Result<Self> {
        if self.coeffs[0] != ZERO || self.coeffs.get(1) != Some(&ONE) {
            return Err(Error::NotNormalized);
        }
        let n = self.order();
        let mut out = vec![ZERO; n + 1];
        out[1] = ONE;
        if n < 2 {
            return Ok(Self { coeffs: out });
        }
        // z / s(z), kept at order n - 1 which is all Lagrange needs.
        let quotient = self.div_z()?.reciprocal()?;
        let mut power = quotient.clone();
        for (k, slot) in out.iter_mut().enumerate().skip(2) {
            power = power.mul(&quotient)?;
            *slot = power.coeffs[k - 1] / k as f64;
        }
        Ok(Self { coeffs: out })
    }

    /// Termwise derivative. The result has order `N - 1`: the degree-`N`
    /// coefficient of `s'` would need `c_{N+1}`, which is unknown.
    pub fn derivative(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: (1..=n).map(|k| self.coeffs[k] * k as f64).collect(),
        }
    }

    /// `z s'(z)`, which stays exact at the full order `N`.
    pub fn z_derivative(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c * k as f64)
                .collect(),
        }
    }

    /// Antiderivative with zero constant term, kept at the same order. The
    /// coefficient that would sit at degree `N + 1` is discarded.
    pub fn integrate0(&self) -> Self {
        let n = self.order();
        let mut out = vec![ZERO; n + 1];
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            *slot = self.coeffs[k - 1] / k as f64;
        }
        Self { coeffs: out }
    }

    /// `s(z) / z` for `s` with zero constant term; the result has order `N - 1`.
    pub fn div_z(&self) -> Result<Self> {
        if self.coeffs[0] != ZERO {
            return Err(Error::ConstantTerm {
                op: "div_z",
                expected: "0",
                found: self.coeffs[0],
            });
        }
        if self.order() == 0 {
            return Err(Error::OrderTooSmall(0, 1));
        }
        Ok(Self {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// `z s(z)` at order `N + 1`, exact.
    pub fn mul_z(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ZERO);
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    /// `s(-z)`.
    pub fn reflect(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| if k % 2 == 1 { -c } else { c })
                .collect(),
        }
    }

    /// `s(lambda z)`.
    pub fn dilate(&self, lambda: Complex64) -> Self {
        let mut power = ONE;
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|&c| {
                    let v = c * power;
                    power *= lambda;
                    v
                })
                .collect(),
        }
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Largest coefficient-wise modulus difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_order(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}
