//! The functionals `Psi+(c1, c2) = |B2 c1^2 + B3 c2| - |B1 c1|` and
//! `Psi- = -Psi+`, their sharp maxima over the Carathéodory class in closed
//! form, and a brute-force oracle over the coefficient body.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::body::{BodyMaximum, BodySearch};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiCoeffs {
    b1: f64,
    b2: Complex64,
    b3: f64,
}

impl PsiCoeffs {
    pub fn new(b1: f64, b2: Complex64, b3: f64) -> Result<Self> {
        if !(b1.is_finite() && b1 > 0.0) {
            return Err(Error::InvalidPsiCoeffs(format!("B1 = {b1} must be positive")));
        }
        if !b2.re.is_finite() || !b2.im.is_finite() || !b3.is_finite() {
            return Err(Error::InvalidPsiCoeffs("B2 and B3 must be finite".into()));
        }
        Ok(Self { b1, b2, b3 })
    }

    pub fn real(b1: f64, b2: f64, b3: f64) -> Result<Self> {
        Self::new(b1, Complex64::new(b2, 0.0), b3)
    }

    pub fn b1(&self) -> f64 {
        self.b1
    }

    pub fn b2(&self) -> Complex64 {
        self.b2
    }

    pub fn b3(&self) -> f64 {
        self.b3
    }

    /// `|4 B2 + 2 B3|`, always recomputed.
    pub fn b4(&self) -> f64 {
        (4.0 * self.b2 + 2.0 * self.b3).norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Which case of the piecewise bound for `Psi+` applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PlusBranch {
    /// `|2B2 + B3| >= |B3| + B1`: bound `|4B2 + 2B3| - 2B1`.
    Boundary,
    /// Otherwise: bound `2|B3|`.
    Even,
}

/// Which case of the piecewise bound for `Psi-` applies, first match wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MinusBranch {
    /// `B1 >= B4 + 2|B3|`: bound `2B1 - B4`.
    Linear,
    /// `B1^2 <= 2|B3| (B4 + 2|B3|)`: bound `2B1 sqrt(2|B3| / (B4 + 2|B3|))`.
    Root,
    /// Otherwise: bound `2|B3| + B1^2 / (B4 + 2|B3|)`.
    Quadratic,
}

pub fn psi_plus_value(c1: Complex64, c2: Complex64, b: &PsiCoeffs) -> f64 {
    (b.b2 * c1 * c1 + b.b3 * c2).norm() - (b.b1 * c1).norm()
}

pub fn psi_minus_value(c1: Complex64, c2: Complex64, b: &PsiCoeffs) -> f64 {
    -psi_plus_value(c1, c2, b)
}

pub fn psi_value(sign: Sign, c1: Complex64, c2: Complex64, b: &PsiCoeffs) -> f64 {
    sign.factor() * psi_plus_value(c1, c2, b)
}

pub fn plus_branch(b: &PsiCoeffs) -> PlusBranch {
    if (2.0 * b.b2 + b.b3).norm() >= b.b3.abs() + b.b1 {
        PlusBranch::Boundary
    } else {
        PlusBranch::Even
    }
}

pub fn minus_branch(b: &PsiCoeffs) -> MinusBranch {
    let b3 = b.b3.abs();
    let denom = b.b4() + 2.0 * b3;
    if b.b1 >= denom {
        MinusBranch::Linear
    } else if b.b1 * b.b1 <= 2.0 * b3 * denom {
        MinusBranch::Root
    } else {
        MinusBranch::Quadratic
    }
}

/// Sharp upper bound of `Psi+` over the class.
pub fn psi_plus_bound(b: &PsiCoeffs) -> f64 {
    match plus_branch(b) {
        PlusBranch::Boundary => b.b4() - 2.0 * b.b1,
        PlusBranch::Even => 2.0 * b.b3.abs(),
    }
}

/// Sharp upper bound of `Psi-` over the class.
///
/// The second and third cases divide by `B4 + 2|B3|`; reaching them with a
/// zero denominator is reported as [`Error::DegenerateBound`]. With `B1 > 0`
/// this cannot happen since the first guard then holds.
pub fn psi_minus_bound(b: &PsiCoeffs) -> Result<f64> {
    let b3 = b.b3.abs();
    let b4 = b.b4();
    let denom = b4 + 2.0 * b3;
    let branch = minus_branch(b);
    if branch != MinusBranch::Linear && denom == 0.0 {
        return Err(Error::DegenerateBound);
    }
    Ok(match branch {
        MinusBranch::Linear => 2.0 * b.b1 - b4,
        MinusBranch::Root => 2.0 * b.b1 * (2.0 * b3 / denom).sqrt(),
        MinusBranch::Quadratic => 2.0 * b3 + b.b1 * b.b1 / denom,
    })
}

pub fn psi_bound(sign: Sign, b: &PsiCoeffs) -> Result<f64> {
    match sign {
        Sign::Plus => Ok(psi_plus_bound(b)),
        Sign::Minus => psi_minus_bound(b),
    }
}

/// Maximizes `Psi+` (or `Psi-`) over the coefficient body by brute force.
/// Shares nothing with the closed-form bounds beyond the functional itself.
pub fn oracle_max(b: &PsiCoeffs, sign: Sign, search: &BodySearch) -> Result<BodyMaximum> {
    let b = *b;
    search.maximize(move |c1, c2| psi_value(sign, c1, c2, &b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caratheodory::CaratheodoryPoint;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rejects_invalid_coeffs() {
        assert!(PsiCoeffs::real(0.0, 1.0, 1.0).is_err());
        assert!(PsiCoeffs::real(-1.0, 1.0, 1.0).is_err());
        assert!(PsiCoeffs::real(1.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn value_cases() {
        let b = PsiCoeffs::real(4.0, 3.0, -4.0).unwrap();
        assert_eq!(psi_plus_value(c(2.0), c(2.0), &b), -4.0);
        assert_eq!(psi_plus_value(c(0.0), c(2.0), &b), 8.0);
        assert_eq!(psi_plus_value(c(0.0), c(0.0), &b), 0.0);
        assert_eq!(psi_minus_value(c(2.0), c(2.0), &b), 4.0);
    }

    #[test]
    fn plus_bound_cases() {
        let b = PsiCoeffs::real(4.0, 3.0, -4.0).unwrap();
        assert_eq!(plus_branch(&b), PlusBranch::Even);
        assert_eq!(psi_plus_bound(&b), 8.0);

        let b = PsiCoeffs::real(24.0, 9.0, -16.0).unwrap();
        assert_eq!(psi_plus_bound(&b), 32.0);

        let b = PsiCoeffs::real(1.0, 10.0, 0.0).unwrap();
        assert_eq!(plus_branch(&b), PlusBranch::Boundary);
        assert_eq!(psi_plus_bound(&b), 38.0);
    }

    #[test]
    fn minus_bound_cases() {
        let b = PsiCoeffs::real(8.0, 5.0, -4.0).unwrap();
        assert_eq!(b.b4(), 12.0);
        assert_eq!(minus_branch(&b), MinusBranch::Root);
        let v = psi_minus_bound(&b).unwrap();
        assert!((v - 16.0 * (2.0f64 / 5.0).sqrt()).abs() < 1e-14);

        let b = PsiCoeffs::real(24.0, 7.0, -8.0).unwrap();
        assert_eq!(minus_branch(&b), MinusBranch::Quadratic);
        assert!((psi_minus_bound(&b).unwrap() - 256.0 / 7.0).abs() < 1e-13);

        let b = PsiCoeffs::real(100.0, 1.0, -1.0).unwrap();
        assert_eq!(b.b4(), 2.0);
        assert_eq!(minus_branch(&b), MinusBranch::Linear);
        assert_eq!(psi_minus_bound(&b).unwrap(), 198.0);
    }

    #[test]
    fn degenerate_coefficients_take_first_case() {
        let b = PsiCoeffs::real(3.0, 0.0, 0.0).unwrap();
        assert_eq!(minus_branch(&b), MinusBranch::Linear);
        assert_eq!(psi_minus_bound(&b).unwrap(), 6.0);
    }

    #[test]
    fn rotation_invariance() {
        let b = PsiCoeffs::new(3.3, Complex64::new(1.2, -2.5), 4.1).unwrap();
        let (c1, c2) = CaratheodoryPoint::new(Complex64::new(0.3, 0.4), Complex64::new(-0.5, 0.6))
            .unwrap()
            .to_coeffs();
        let base = psi_plus_value(c1, c2, &b);
        for theta in [0.3, 1.7, std::f64::consts::PI] {
            let r = Complex64::from_polar(1.0, theta);
            let rotated = psi_plus_value(r * c1, r * r * c2, &b);
            assert!((rotated - base).abs() < 1e-13);
        }
    }

    #[test]
    fn oracle_matches_class_parameter_sets() {
        let search = BodySearch::default();
        let b = PsiCoeffs::real(4.0, 3.0, -4.0).unwrap();
        let m = oracle_max(&b, Sign::Plus, &search).unwrap();
        assert!((m.value - 8.0).abs() < 1e-6);
        assert!(m.at.x < 1e-6);

        let b = PsiCoeffs::real(8.0, 5.0, -4.0).unwrap();
        let m = oracle_max(&b, Sign::Minus, &search).unwrap();
        assert!((m.value - 16.0 * 0.4f64.sqrt()).abs() < 1e-5);

        let b = PsiCoeffs::real(24.0, 7.0, -8.0).unwrap();
        let m = oracle_max(&b, Sign::Minus, &search).unwrap();
        assert!((m.value - 256.0 / 7.0).abs() < 1e-4);
        assert!((m.at.x - 6.0 / 7.0).abs() < 1e-5);
        assert!((m.c2 - c(2.0)).norm() < 1e-6);
    }
}
