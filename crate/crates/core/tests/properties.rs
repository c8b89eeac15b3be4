use invlog::caratheodory::{body_slack, schwarz_from_p};
use invlog::classes::lune_map;
use invlog::functionals::{gamma_pair_closed, gamma_pair_series, inv_log_coeffs};
use invlog::{psi_bound, CaratheodoryPoint, ClassId, Complex64, PsiCoeffs, Sign, TruncatedSeries};
use proptest::prelude::*;

const N: usize = 10;

fn complex(scale: f64) -> impl Strategy<Value = Complex64> {
    (-scale..scale, -scale..scale).prop_map(|(re, im)| Complex64::new(re, im))
}

fn disk() -> impl Strategy<Value = Complex64> {
    (0.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn body_point() -> impl Strategy<Value = CaratheodoryPoint> {
    (disk(), disk()).prop_map(|(a, b)| CaratheodoryPoint::new(a, b).unwrap())
}

fn normalized() -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(complex(0.5), N - 1).prop_map(|tail| {
        let mut coeffs = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        coeffs.extend(tail);
        TruncatedSeries::new(coeffs, N)
    })
}

fn class() -> impl Strategy<Value = ClassId> {
    prop::sample::select(ClassId::ALL.to_vec())
}

fn caratheodory_series(pt: &CaratheodoryPoint, order: usize) -> TruncatedSeries {
    // (1 + w)/(1 - w) with w = z (zeta1 + z zeta2)/(1 + conj(zeta1) z zeta2): a
    // Caratheodory function whose first two coefficients match the point
    let (z1, z2) = (pt.zeta1(), pt.zeta2());
    let num = TruncatedSeries::new(vec![Complex64::new(0.0, 0.0), z1, z2], order);
    let den = TruncatedSeries::new(vec![Complex64::new(1.0, 0.0), z1.conj() * z2], order);
    let w = num.div(&den).unwrap();
    let one = Complex64::new(1.0, 0.0);
    w.add_constant(one).div(&w.neg().add_constant(one)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reversion_roundtrip(f in normalized()) {
        let g = f.revert().unwrap();
        let id = TruncatedSeries::identity(N);
        prop_assert!(f.compose(&g).unwrap().max_abs_diff(&id).unwrap() < 1e-10);
        prop_assert!(g.revert().unwrap().max_abs_diff(&f).unwrap() < 1e-10);
    }

    #[test]
    fn exp_and_log_are_inverse(f in normalized()) {
        let s = f.div_z().unwrap().add_constant(Complex64::new(-1.0, 0.0)).mul_z();
        prop_assert!(s.exp().unwrap().log().unwrap().max_abs_diff(&s).unwrap() < 1e-10);
    }

    #[test]
    fn sqrt_squares_back(f in normalized()) {
        let u = f.div_z().unwrap();
        prop_assert!(u.sqrt().unwrap().square().max_abs_diff(&u).unwrap() < 1e-10);
    }

    #[test]
    fn rotation_keeps_moduli(f in normalized(), theta in 0.0..std::f64::consts::TAU) {
        // e^{-i theta} f(e^{i theta} z) rotates Gamma_n by e^{i n theta}
        let mut coeffs = f.dilate(Complex64::from_polar(1.0, theta)).scale(Complex64::from_polar(1.0, -theta)).into_coeffs();
        coeffs[1] = Complex64::new(1.0, 0.0);
        let rotated = TruncatedSeries::new(coeffs, N);
        let g = gamma_pair_series(&f).unwrap();
        let h = gamma_pair_series(&rotated).unwrap();
        prop_assert!((h.gamma1 - g.gamma1 * Complex64::from_polar(1.0, theta)).norm() < 1e-12);
        prop_assert!((h.gamma2 - g.gamma2 * Complex64::from_polar(1.0, 2.0 * theta)).norm() < 1e-12);
        prop_assert!((h.moduli_diff() - g.moduli_diff()).abs() < 1e-12);
    }

    #[test]
    fn closed_and_series_routes_agree(f in normalized()) {
        let a = gamma_pair_closed(&f).unwrap();
        let b = gamma_pair_series(&f).unwrap();
        prop_assert!((a.gamma1 - b.gamma1).norm() < 1e-10);
        prop_assert!((a.gamma2 - b.gamma2).norm() < 1e-10);
    }

    #[test]
    fn class_pipeline_matches_coefficient_map(cls in class(), pt in body_point()) {
        let p = caratheodory_series(&pt, 8);
        let (c1, c2) = pt.to_coeffs();
        prop_assert!((p.coeff(1) - c1).norm() < 1e-12 && (p.coeff(2) - c2).norm() < 1e-12);
        let f = cls.series_from_p(&p, 8).unwrap();
        let (a2, a3) = cls.coeffs_from_p(c1, c2);
        prop_assert!((f.coeff(2) - a2).norm() < 1e-10 && (f.coeff(3) - a3).norm() < 1e-10);
        let q = cls.defining_quotient(&f).unwrap();
        let target = match cls {
            ClassId::StarlikeSymmetric | ClassId::ConvexSymmetric => p.truncate(7),
            _ => lune_map(&schwarz_from_p(&p).unwrap()).unwrap().truncate(7),
        };
        prop_assert!(q.max_abs_diff(&target).unwrap() < 1e-9);
        let direct = inv_log_coeffs(a2, a3).moduli_diff();
        prop_assert!((gamma_pair_series(&f).unwrap().moduli_diff() - direct).abs() < 1e-10);
    }

    #[test]
    fn class_values_never_exceed_bounds(cls in class(), pt in body_point()) {
        let (c1, c2) = pt.to_coeffs();
        let (a2, a3) = cls.coeffs_from_p(c1, c2);
        let value = inv_log_coeffs(a2, a3).moduli_diff();
        let b = cls.psi_coeffs();
        let upper = cls.scale() * psi_bound(Sign::Plus, &b).unwrap();
        let lower = -cls.scale() * psi_bound(Sign::Minus, &b).unwrap();
        prop_assert!(value <= upper + 1e-12 && value >= lower - 1e-12);
    }

    #[test]
    fn psi_is_sound_everywhere(
        b1 in 0.01..30.0f64,
        b2 in complex(15.0),
        b3 in -20.0..20.0f64,
        pt in body_point(),
    ) {
        let b = PsiCoeffs::new(b1, b2, b3).unwrap();
        let (c1, c2) = pt.to_coeffs();
        for sign in [Sign::Plus, Sign::Minus] {
            let v = invlog::psi_value(sign, c1, c2, &b);
            let bound = psi_bound(sign, &b).unwrap();
            prop_assert!(v <= bound + 1e-9 * (1.0 + bound.abs()), "{:?}: {} > {}", sign, v, bound);
        }
    }

    #[test]
    fn body_points_satisfy_the_inequality(pt in body_point()) {
        let (c1, c2) = pt.to_coeffs();
        prop_assert!(body_slack(c1, c2) >= -1e-12);
    }
}
