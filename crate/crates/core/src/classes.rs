//! The four function classes, their coefficient maps from Carathéodory data,
//! full series solutions of the defining equations, the extremal functions
//! and a sampled lune-membership test.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::caratheodory::{p_two, rational_p, schwarz_from_p};
use crate::error::{Error, Result};
use crate::psi::PsiCoeffs;
use crate::series::TruncatedSeries;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassId {
    /// Starlike with respect to symmetric points: `2zf'/(f(z)-f(-z)) = p`.
    StarlikeSymmetric,
    /// Convex with respect to symmetric points: `2(zf')'/(f(z)-f(-z))' = p`.
    ConvexSymmetric,
    /// `zf'/f` subordinate to `q(z) = z + sqrt(1 + z^2)`.
    StarlikeLune,
    /// `1 + zf''/f'` subordinate to `q`.
    ConvexLune,
}

impl ClassId {
    pub const ALL: [ClassId; 4] = [
        ClassId::StarlikeSymmetric,
        ClassId::ConvexSymmetric,
        ClassId::StarlikeLune,
        ClassId::ConvexLune,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassId::StarlikeSymmetric => "starlike-symmetric",
            ClassId::ConvexSymmetric => "convex-symmetric",
            ClassId::StarlikeLune => "starlike-lune",
            ClassId::ConvexLune => "convex-lune",
        }
    }

    /// Prefactor of `Psi+` as `(numerator, denominator)`.
    pub fn scale_ratio(self) -> (u32, u32) {
        match self {
            ClassId::StarlikeSymmetric => (1, 16),
            ClassId::ConvexSymmetric => (1, 192),
            ClassId::StarlikeLune => (1, 32),
            ClassId::ConvexLune => (1, 192),
        }
    }

    pub fn scale(self) -> f64 {
        let (num, den) = self.scale_ratio();
        num as f64 / den as f64
    }

    /// `(B1, B2, B3)` with `|Gamma_2| - |Gamma_1| = scale * Psi+(c1, c2)`.
    pub fn psi_coeffs(self) -> PsiCoeffs {
        let (b1, b2, b3) = match self {
            ClassId::StarlikeSymmetric => (4.0, 3.0, -4.0),
            ClassId::ConvexSymmetric => (24.0, 9.0, -16.0),
            ClassId::StarlikeLune => (8.0, 5.0, -4.0),
            ClassId::ConvexLune => (24.0, 7.0, -8.0),
        };
        PsiCoeffs::real(b1, b2, b3).expect("class coefficients are valid")
    }

    pub fn is_convex(self) -> bool {
        matches!(self, ClassId::ConvexSymmetric | ClassId::ConvexLune)
    }

    /// `(a2, a3)` from the first two coefficients of `p`.
    pub fn coeffs_from_p(self, c1: Complex64, c2: Complex64) -> (Complex64, Complex64) {
        match self {
            ClassId::StarlikeSymmetric => (c1 / 2.0, c2 / 2.0),
            ClassId::ConvexSymmetric => (c1 / 4.0, c2 / 6.0),
            ClassId::StarlikeLune => (c1 / 2.0, c1 * c1 / 16.0 + c2 / 4.0),
            ClassId::ConvexLune => (c1 / 4.0, c1 * c1 / 48.0 + c2 / 12.0),
        }
    }

    /// The normalized `f` of order `order` whose defining quotient is `p`
    /// (symmetric-point classes) or `q(w)` with `w = (p-1)/(p+1)` (lune
    /// classes). `p` must carry at least order `order - 1`.
    pub fn series_from_p(self, p: &TruncatedSeries, order: usize) -> Result<TruncatedSeries> {
        if order < 3 {
            return Err(Error::OrderTooSmall(order, 3));
        }
        if p.order() + 1 < order {
            return Err(Error::InvalidArgument(format!(
                "p has order {} but order {} needs at least {}",
                p.order(),
                order,
                order - 1
            )));
        }
        let c0 = p.coeff(0);
        if (c0 - ONE).norm() > 1e-12 {
            return Err(Error::ConstantTerm {
                op: "series_from_p",
                expected: "1",
                found: c0,
            });
        }
        match self {
            ClassId::StarlikeSymmetric | ClassId::ConvexSymmetric => {
                Ok(symmetric_recurrence(self == ClassId::ConvexSymmetric, p, order))
            }
            ClassId::StarlikeLune | ClassId::ConvexLune => {
                let w = schwarz_from_p(&p.truncate(order))?;
                lune_from_schwarz(self == ClassId::ConvexLune, &w)
            }
        }
    }

    /// The quotient that the class definition constrains, recovered from `f`:
    /// `2zf'/(f(z)-f(-z))`, `2(zf')'/(f(z)-f(-z))'`, `zf'/f` or `1 + zf''/f'`.
    /// The result has order `N - 1`.
    pub fn defining_quotient(self, f: &TruncatedSeries) -> Result<TruncatedSeries> {
        if f.order() < 2 || f.coeff(0) != Complex64::new(0.0, 0.0) || f.coeff(1) != ONE {
            return Err(Error::NotNormalized);
        }
        let zf = f.z_derivative();
        match self {
            ClassId::StarlikeSymmetric => {
                let odd = f.sub(&f.reflect())?;
                zf.scale(2.0.into()).div_z()?.div(&odd.div_z()?)
            }
            ClassId::ConvexSymmetric => {
                let odd = f.sub(&f.reflect())?;
                zf.derivative().scale(2.0.into()).div(&odd.derivative())
            }
            ClassId::StarlikeLune => zf.div_z()?.div(&f.div_z()?),
            ClassId::ConvexLune => zf.z_derivative().div_z()?.div(&zf.div_z()?),
        }
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace(['_', ' '], "-");
        Ok(match key.as_str() {
            "starlike-symmetric" | "starlikesymmetric" | "ss" => ClassId::StarlikeSymmetric,
            "convex-symmetric" | "convexsymmetric" | "ks" => ClassId::ConvexSymmetric,
            "starlike-lune" | "starlikelune" | "sl" => ClassId::StarlikeLune,
            "convex-lune" | "convexlune" | "cl" => ClassId::ConvexLune,
            _ => return Err(Error::UnknownName(s.to_string())),
        })
    }
}

/// Matches powers of `z` in `2 (zf')^(k) = p (f(z) - f(-z))^(k)`, `k = 0, 1`.
///
/// Starlike: `(n - [n odd]) a_n = sum_{k odd < n} p_{n-k} a_k`.
/// Convex:   `(n^2 - [n odd] n) a_n = sum_{k odd < n} p_{n-k} k a_k`.
fn symmetric_recurrence(convex: bool, p: &TruncatedSeries, order: usize) -> TruncatedSeries {
    let mut a = vec![Complex64::new(0.0, 0.0); order + 1];
    a[1] = ONE;
    for n in 2..=order {
        let odd = (n % 2) as f64;
        let nf = n as f64;
        let rhs: Complex64 = (1..n)
            .step_by(2)
            .map(|k| {
                let weight = if convex { k as f64 } else { 1.0 };
                p.coeff(n - k) * a[k] * weight
            })
            .sum();
        let lhs = if convex { nf * nf - odd * nf } else { nf - odd };
        a[n] = rhs / lhs;
    }
    TruncatedSeries::new(a, order)
}

/// `q(w) = w + sqrt(1 + w^2)`, the series of the subordinating map applied to `w`.
pub fn lune_map(w: &TruncatedSeries) -> Result<TruncatedSeries> {
    w.add(&w.square().add_constant(ONE).sqrt()?)
}

/// Starlike: `f = z exp(int_0^z (q(w(t)) - 1)/t dt)`.
/// Convex:   `f = int_0^z exp(int_0^s (q(w(t)) - 1)/t dt) ds`.
fn lune_from_schwarz(convex: bool, w: &TruncatedSeries) -> Result<TruncatedSeries> {
    let order = w.order();
    let h = lune_map(w)?;
    let exponent = h.add_constant(-ONE).div_z()?.integrate0();
    let e = exponent.exp()?;
    Ok(if convex {
        e.truncate(order).integrate0()
    } else {
        e.mul_z()
    })
}

/// `A` of the attaining Carathéodory function for the lower bound of the
/// starlike-lune class, `2 / sqrt(10)`.
pub fn f4_parameter() -> f64 {
    2.0 / 10f64.sqrt()
}

/// `A` at which the brute-force search over the body attains the lower bound
/// of the convex-lune class: the maximizer has `c1 = 12/7`, `c2 = 2`.
pub const F6_ATTAINING_A: f64 = 6.0 / 7.0;

/// The constant printed for the convex-lune lower extremal; it does not
/// attain the bound and is kept to report the mismatch.
pub const F6_PRINTED_A: f64 = 4.0 / 7.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Extremal {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6 { a: f64 },
}

impl Extremal {
    pub const NAMES: [&'static str; 6] = ["f1", "f2", "f3", "f4", "f5", "f6"];

    /// `f6` with the attaining parameter.
    pub fn f6() -> Self {
        Extremal::F6 { a: F6_ATTAINING_A }
    }

    pub fn all() -> [Extremal; 6] {
        [
            Extremal::F1,
            Extremal::F2,
            Extremal::F3,
            Extremal::F4,
            Extremal::F5,
            Extremal::f6(),
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Extremal::F1 => "f1",
            Extremal::F2 => "f2",
            Extremal::F3 => "f3",
            Extremal::F4 => "f4",
            Extremal::F5 => "f5",
            Extremal::F6 { .. } => "f6",
        }
    }

    pub fn class(&self) -> ClassId {
        match self {
            Extremal::F1 => ClassId::StarlikeSymmetric,
            Extremal::F2 => ClassId::ConvexSymmetric,
            Extremal::F3 | Extremal::F4 => ClassId::StarlikeLune,
            Extremal::F5 | Extremal::F6 { .. } => ClassId::ConvexLune,
        }
    }

    /// `A` of the rational Carathéodory function `(1 + 2Az + z^2)/(1 - z^2)`
    /// this function is built from. `f1 = z/(1 - z^2)` is odd, so its quotient
    /// is the even `(1 + z^2)/(1 - z^2)` and it shares `A = 0` with `f2`, `f3`, `f5`.
    pub fn p_parameter(&self) -> f64 {
        match self {
            Extremal::F1 | Extremal::F2 | Extremal::F3 | Extremal::F5 => 0.0,
            Extremal::F4 => f4_parameter(),
            Extremal::F6 { a } => *a,
        }
    }

    pub fn caratheodory(&self, order: usize) -> Result<TruncatedSeries> {
        match self {
            Extremal::F1 | Extremal::F2 | Extremal::F3 | Extremal::F5 => Ok(p_two(order)),
            Extremal::F4 => rational_p(f4_parameter(), order),
            Extremal::F6 { a } => rational_p(*a, order),
        }
    }

    pub fn series(&self, order: usize) -> Result<TruncatedSeries> {
        self.class().series_from_p(&self.caratheodory(order)?, order)
    }
}

impl FromStr for Extremal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "f1" => Extremal::F1,
            "f2" => Extremal::F2,
            "f3" => Extremal::F3,
            "f4" => Extremal::F4,
            "f5" => Extremal::F5,
            "f6" => Extremal::f6(),
            _ => return Err(Error::UnknownName(s.to_string())),
        })
    }
}

/// Sampling parameters for [`lune_membership`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LuneSampling {
    pub radius: f64,
    pub samples: usize,
    pub tol: f64,
}

impl Default for LuneSampling {
    fn default() -> Self {
        Self {
            radius: 0.99,
            samples: 720,
            tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LuneCheck {
    pub inside: bool,
    /// Minimum of `2|v| - |v^2 - 1|` over the samples.
    pub worst_slack: f64,
    pub worst_z: Complex64,
    /// `|c_M| r^M M` for the top coefficient of the sampled quotient.
    pub truncation_estimate: f64,
}

/// Samples `v = zf'/f` (or `1 + zf''/f'` when `convex`) on `|z| = radius`
/// and checks `|v^2 - 1| <= 2|v|` up to `tol` plus a truncation estimate.
/// A necessary condition only.
pub fn lune_membership(f: &TruncatedSeries, convex: bool, sampling: &LuneSampling) -> Result<LuneCheck> {
    let LuneSampling { radius, samples, tol } = *sampling;
    if !(0.0..1.0).contains(&radius) {
        return Err(Error::InvalidArgument(format!("radius {radius} must lie in [0, 1)")));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let class = if convex { ClassId::ConvexLune } else { ClassId::StarlikeLune };
    let v = class.defining_quotient(f)?;
    // Denominator of the quotient, checked for vanishing at each sample.
    let denominator = if convex {
        f.z_derivative().div_z()?
    } else {
        f.div_z()?
    };

    let top = v.order();
    let truncation_estimate = v.coeff(top).norm() * radius.powi(top as i32) * top as f64;

    let evaluated: Vec<Result<(f64, Complex64)>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let z = Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / samples as f64);
            let d = denominator.eval(z);
            if d.norm() <= 1e-300 || !d.re.is_finite() || !d.im.is_finite() {
                return Err(Error::DegenerateEvaluation(z));
            }
            let value = v.eval(z);
            Ok((2.0 * value.norm() - (value * value - ONE).norm(), z))
        })
        .collect();

    let mut worst = (f64::INFINITY, Complex64::new(radius, 0.0));
    for item in evaluated {
        let (slack, z) = item?;
        if slack < worst.0 {
            worst = (slack, z);
        }
    }
    Ok(LuneCheck {
        inside: worst.0 >= -(tol + truncation_estimate),
        worst_slack: worst.0,
        worst_z: worst.1,
        truncation_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caratheodory::{p_one, CaratheodoryPoint};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn class_constants() {
        let b = ClassId::ConvexLune.psi_coeffs();
        assert_eq!((b.b1(), b.b2(), b.b3()), (24.0, c(7.0), -8.0));
        assert_eq!(ClassId::StarlikeLune.scale(), 1.0 / 32.0);
        for cls in ClassId::ALL {
            assert_eq!(cls.name().parse::<ClassId>().unwrap(), cls);
        }
        assert!("hyperbolic".parse::<ClassId>().is_err());
    }

    #[test]
    fn coeffs_from_p_cases() {
        assert_eq!(ClassId::StarlikeSymmetric.coeffs_from_p(c(2.0), c(2.0)), (c(1.0), c(1.0)));
        assert_eq!(ClassId::StarlikeLune.coeffs_from_p(c(0.0), c(2.0)), (c(0.0), c(0.5)));
        assert_eq!(ClassId::ConvexLune.coeffs_from_p(c(0.0), c(0.0)), (c(0.0), c(0.0)));
    }

    #[test]
    fn scaled_psi_matches_moduli_difference() {
        use crate::functionals::inv_log_coeffs;
        use crate::psi::psi_plus_value;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for cls in ClassId::ALL {
            for _ in 0..200 {
                let pt = CaratheodoryPoint::new(
                    Complex64::from_polar(rng.gen(), rng.gen_range(0.0..6.3)),
                    Complex64::from_polar(rng.gen(), rng.gen_range(0.0..6.3)),
                )
                .unwrap();
                let (c1, c2) = pt.to_coeffs();
                let (a2, a3) = cls.coeffs_from_p(c1, c2);
                let direct = inv_log_coeffs(a2, a3).moduli_diff();
                let via_psi = cls.scale() * psi_plus_value(c1, c2, &cls.psi_coeffs());
                assert!((direct - via_psi).abs() < 1e-13, "{cls}: {direct} vs {via_psi}");
            }
        }
    }

    #[test]
    fn series_from_p_examples() {
        let n = 12;
        let f1 = ClassId::StarlikeSymmetric.series_from_p(&p_two(n), n).unwrap();
        for k in 0..=n {
            let want = if k % 2 == 1 { 1.0 } else { 0.0 };
            assert!(close(f1.coeff(k), c(want), 1e-14), "f1 coeff {k}");
        }

        let f2 = ClassId::ConvexSymmetric.series_from_p(&p_two(n), n).unwrap();
        for k in 0..=n {
            let want = if k % 2 == 1 { 1.0 / k as f64 } else { 0.0 };
            assert!(close(f2.coeff(k), c(want), 1e-14), "f2 coeff {k}");
        }

        let f5 = ClassId::ConvexLune.series_from_p(&p_two(n), n).unwrap();
        assert!(close(f5.coeff(3), c(1.0 / 6.0), 1e-15));
        assert!(close(f5.coeff(5), c(1.0 / 20.0), 1e-15));
        assert!(close(f5.coeff(2), c(0.0), 1e-15));
    }

    #[test]
    fn series_from_p_rejects_bad_input() {
        let p = TruncatedSeries::from_real(&[2.0, 1.0], 8);
        assert!(ClassId::StarlikeLune.series_from_p(&p, 8).is_err());
        assert!(ClassId::StarlikeLune.series_from_p(&p_two(8), 2).is_err());
        assert!(ClassId::StarlikeLune.series_from_p(&p_two(4), 8).is_err());
    }

    #[test]
    fn series_agrees_with_coefficient_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 8;
        for _ in 0..100 {
            let pt = CaratheodoryPoint::new(
                Complex64::from_polar(rng.gen(), rng.gen_range(0.0..6.3)),
                Complex64::from_polar(rng.gen(), rng.gen_range(0.0..6.3)),
            )
            .unwrap();
            let (c1, c2) = pt.to_coeffs();
            // Higher coefficients are arbitrary; the first two fix (a2, a3).
            let mut coeffs = vec![c(1.0), c1, c2];
            for _ in 3..=n {
                coeffs.push(Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)));
            }
            let p = TruncatedSeries::new(coeffs, n);
            for cls in ClassId::ALL {
                let f = cls.series_from_p(&p, n).unwrap();
                let (a2, a3) = cls.coeffs_from_p(c1, c2);
                assert!(close(f.coeff(2), a2, 1e-10) && close(f.coeff(3), a3, 1e-10), "{cls}");
                // The defining quotient recovers p (symmetric) or q(w) (lune).
                let quotient = cls.defining_quotient(&f).unwrap();
                let expected = match cls {
                    ClassId::StarlikeSymmetric | ClassId::ConvexSymmetric => p.truncate(n - 1),
                    _ => lune_map(&schwarz_from_p(&p).unwrap()).unwrap().truncate(n - 1),
                };
                assert!(quotient.max_abs_diff(&expected).unwrap() < 1e-9, "{cls}");
            }
        }
    }

    #[test]
    fn even_p_gives_odd_starlike_symmetric() {
        let n = 11;
        let p = TruncatedSeries::from_real(&[1.0, 0.0, 1.3, 0.0, -0.4, 0.0, 0.9, 0.0, 0.2, 0.0, -1.0], n);
        let f = ClassId::StarlikeSymmetric.series_from_p(&p, n).unwrap();
        for k in (0..=n).step_by(2) {
            assert!(f.coeff(k).norm() < 1e-12);
        }
    }

    #[test]
    fn f1_quotient_is_even() {
        let n = 12;
        let f1 = Extremal::F1.series(n).unwrap();
        let q = ClassId::StarlikeSymmetric.defining_quotient(&f1).unwrap();
        assert!(q.max_abs_diff(&p_two(n - 1)).unwrap() < 1e-14);
        // (1 + z)/(1 - z) yields z/(1 - z) instead
        let g = ClassId::StarlikeSymmetric.series_from_p(&p_one(n), n).unwrap();
        assert!((0..=n).all(|k| close(g.coeff(k), c(if k == 0 { 0.0 } else { 1.0 }), 1e-14)));
    }

    #[test]
    fn extremal_examples() {
        let n = 12;
        let f1 = Extremal::F1.series(n).unwrap();
        assert_eq!((f1.coeff(2), f1.coeff(3)), (c(0.0), c(1.0)));
        let f3 = Extremal::F3.series(n).unwrap();
        assert!(close(f3.coeff(2), c(0.0), 1e-15) && close(f3.coeff(3), c(0.5), 1e-15));
        let f4 = Extremal::F4.series(n).unwrap();
        let a = f4_parameter();
        assert!(close(f4.coeff(2), c(a), 1e-15));
        assert!(close(f4.coeff(3), c(a * a / 4.0 + 0.5), 1e-15));
        assert!("f7".parse::<Extremal>().is_err());
    }

    #[test]
    fn lune_membership_cases() {
        let sampling = LuneSampling { radius: 0.9, samples: 360, tol: 1e-9 };
        let f3 = Extremal::F3.series(400).unwrap();
        assert!(lune_membership(&f3, false, &sampling).unwrap().inside);

        let id = TruncatedSeries::identity(20);
        let check = lune_membership(&id, false, &LuneSampling::default()).unwrap();
        assert!(check.inside);
        assert!((check.worst_slack - 2.0).abs() < 1e-15);

        let n = 2000;
        let koebe = TruncatedSeries::from_real(&(0..=n).map(|k| k as f64).collect::<Vec<_>>(), n);
        let check = lune_membership(&koebe, false, &LuneSampling::default()).unwrap();
        assert!(!check.inside);
        assert!(check.worst_slack < 0.0);
    }

    #[test]
    fn lune_extremals_pass_at_large_radius() {
        let sampling = LuneSampling { radius: 0.99, samples: 720, tol: 1e-6 };
        let n = 1600;
        let f3 = Extremal::F3.series(n).unwrap();
        let check = lune_membership(&f3, false, &sampling).unwrap();
        assert!(check.inside, "{check:?}");
        let f5 = Extremal::F5.series(n).unwrap();
        let check = lune_membership(&f5, true, &sampling).unwrap();
        assert!(check.inside, "{check:?}");
    }

    #[test]
    fn lune_membership_rejects_bad_radius() {
        let id = TruncatedSeries::identity(5);
        let sampling = LuneSampling { radius: 1.0, ..LuneSampling::default() };
        assert!(lune_membership(&id, false, &sampling).is_err());
    }
}
