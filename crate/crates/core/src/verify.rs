//! Per-theorem verification reports and the direct class search.
//!
//! Each bound is checked along three routes: the closed-form maximum of the
//! scaled `Psi` functional, the brute-force oracle over the coefficient body,
//! and an end-to-end search that composes the coefficient map, the inverse
//! logarithmic coefficients and the moduli difference without going through
//! `Psi` at all. Extremal functions are evaluated from their full series.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::body::{BodyMaximum, BodySearch, ReducedPoint};
use crate::caratheodory::{p_one, p_two, rational_p, schwarz_from_p, CaratheodoryPoint};
use crate::classes::{ClassId, Extremal, F6_ATTAINING_A, F6_PRINTED_A};
use crate::error::{Error, Result};
use crate::functionals::{gamma_pair_closed, gamma_pair_series, inv_log_coeffs};
use crate::maps::rational_schwarz;
use crate::psi::{minus_branch, oracle_max, plus_branch, psi_minus_bound, psi_plus_bound, psi_plus_value, MinusBranch, PlusBranch, PsiCoeffs, Sign};
use crate::series::{TruncatedSeries, DEFAULT_ORDER};

pub const CLOSED_FORM_TOL: f64 = 1e-6;
pub const ORACLE_TOL: f64 = 1e-4;
/// Oracle values may exceed the closed form by rounding only.
pub const SOUNDNESS_SLACK: f64 = 1e-9;
pub const DUAL_PATH_TOL: f64 = 1e-6;
pub const PIPELINE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TheoremId {
    #[serde(rename = "1.1")]
    T1_1,
    #[serde(rename = "1.2")]
    T1_2,
    #[serde(rename = "1.3")]
    T1_3,
    #[serde(rename = "1.4")]
    T1_4,
}

impl TheoremId {
    pub const ALL: [TheoremId; 4] = [TheoremId::T1_1, TheoremId::T1_2, TheoremId::T1_3, TheoremId::T1_4];

    pub fn label(self) -> &'static str {
        match self {
            TheoremId::T1_1 => "1.1",
            TheoremId::T1_2 => "1.2",
            TheoremId::T1_3 => "1.3",
            TheoremId::T1_4 => "1.4",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.label())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim_start_matches(['T', 't']);
        TheoremId::ALL
            .into_iter()
            .find(|t| t.label() == key)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// A claimed sharp bound together with the functions said to attain it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoremSpec {
    pub id: TheoremId,
    pub class: ClassId,
    pub claimed_upper: f64,
    pub claimed_lower: Option<f64>,
    pub extremal_upper: Extremal,
    pub extremal_lower: Option<Extremal>,
}

impl TheoremSpec {
    pub fn get(id: TheoremId) -> Self {
        match id {
            TheoremId::T1_1 => Self {
                id,
                class: ClassId::StarlikeSymmetric,
                claimed_upper: 0.5,
                claimed_lower: None,
                extremal_upper: Extremal::F1,
                extremal_lower: None,
            },
            TheoremId::T1_2 => Self {
                id,
                class: ClassId::ConvexSymmetric,
                claimed_upper: 1.0 / 6.0,
                claimed_lower: None,
                extremal_upper: Extremal::F2,
                extremal_lower: None,
            },
            TheoremId::T1_3 => Self {
                id,
                class: ClassId::StarlikeLune,
                claimed_upper: 0.25,
                claimed_lower: Some(-1.0 / 10f64.sqrt()),
                extremal_upper: Extremal::F3,
                extremal_lower: Some(Extremal::F4),
            },
            TheoremId::T1_4 => Self {
                id,
                class: ClassId::ConvexLune,
                claimed_upper: 1.0 / 12.0,
                claimed_lower: Some(-4.0 / 21.0),
                extremal_upper: Extremal::F5,
                extremal_lower: Some(Extremal::F6 { a: F6_ATTAINING_A }),
            },
        }
    }

    pub fn all() -> Vec<Self> {
        TheoremId::ALL.into_iter().map(Self::get).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    /// A mismatch with a printed value that has been independently resolved.
    KnownDiscrepancy,
    Fail,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::KnownDiscrepancy => "KNOWN",
            Status::Fail => "FAIL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub status: Status,
}

impl Check {
    fn near(name: impl Into<String>, observed: f64, expected: f64, tolerance: f64) -> Self {
        let status = if (observed - expected).abs() <= tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        Self { name: name.into(), observed, expected, tolerance, status }
    }

    /// `observed` must not exceed `bound` by more than `slack`.
    fn at_most(name: impl Into<String>, observed: f64, bound: f64, slack: f64) -> Self {
        let status = if observed <= bound + slack { Status::Pass } else { Status::Fail };
        Self { name: name.into(), observed, expected: bound, tolerance: slack, status }
    }

    /// A comparison against a printed value that is expected to fail.
    fn known(name: impl Into<String>, observed: f64, expected: f64, tolerance: f64) -> Self {
        let mut check = Self::near(name, observed, expected, tolerance);
        if check.status == Status::Fail {
            check.status = Status::KnownDiscrepancy;
        }
        check
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discrepancy {
    pub topic: String,
    pub printed: String,
    pub used: String,
    pub evidence: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extremum {
    pub value: f64,
    pub at: ReducedPoint,
    pub c1: Complex64,
    pub c2: Complex64,
}

impl Extremum {
    fn from_max(max: &BodyMaximum, factor: f64) -> Self {
        Self { value: factor * max.value, at: max.at, c1: max.c1, c2: max.c2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub theorem: TheoremId,
    pub class: ClassId,
    pub scale: String,
    pub psi: PsiCoeffs,
    pub b4: f64,
    pub plus_branch: PlusBranch,
    pub minus_branch: MinusBranch,
    pub claimed_upper: f64,
    pub claimed_lower: Option<f64>,
    pub closed_form_upper: f64,
    pub closed_form_lower: f64,
    pub oracle_upper: Extremum,
    pub oracle_lower: Extremum,
    pub search_upper: Extremum,
    pub search_lower: Extremum,
    pub extremal_values: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub discrepancies: Vec<Discrepancy>,
    pub notes: Vec<String>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub search: BodySearch,
    pub closed_form_tol: f64,
    pub oracle_tol: f64,
    pub order: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            search: BodySearch::default(),
            closed_form_tol: CLOSED_FORM_TOL,
            oracle_tol: ORACLE_TOL,
            order: DEFAULT_ORDER,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassExtrema {
    pub class: ClassId,
    pub min: Extremum,
    pub max: Extremum,
}

/// `|Gamma_2| - |Gamma_1|` straight from `(c1, c2)` through the coefficient map.
pub fn moduli_diff_from_p(class: ClassId, c1: Complex64, c2: Complex64) -> f64 {
    let (a2, a3) = class.coeffs_from_p(c1, c2);
    inv_log_coeffs(a2, a3).moduli_diff()
}

/// Empirical extrema of `|Gamma_2| - |Gamma_1|` over the coefficient body.
pub fn search_class(class: ClassId, search: &BodySearch) -> Result<ClassExtrema> {
    let max = search.maximize(|c1, c2| moduli_diff_from_p(class, c1, c2))?;
    let min = search.maximize(|c1, c2| -moduli_diff_from_p(class, c1, c2))?;
    Ok(ClassExtrema {
        class,
        min: Extremum::from_max(&min, -1.0),
        max: Extremum::from_max(&max, 1.0),
    })
}

/// `|Gamma_2| - |Gamma_1|` of an extremal map from its series.
pub fn extremal_value(map: &Extremal, order: usize) -> Result<f64> {
    Ok(gamma_pair_series(&map.series(order)?)?.moduli_diff())
}

/// Scale factors shown in print next to the one the derivation gives.
fn printed_alternative_scale(id: TheoremId) -> Option<(u32, u32)> {
    match id {
        TheoremId::T1_1 => Some((1, 48)),
        TheoremId::T1_2 | TheoremId::T1_4 => Some((1, 16)),
        TheoremId::T1_3 => None,
    }
}

pub fn verify_theorem(claim: &TheoremSpec, opts: &VerifyOptions) -> Result<VerificationReport> {
    let class = claim.class;
    let b = class.psi_coeffs();
    let scale = class.scale();
    let (num, den) = class.scale_ratio();
    let mut checks = Vec::new();
    let mut discrepancies = Vec::new();
    let mut notes = Vec::new();

    let closed_upper = scale * psi_plus_bound(&b);
    let closed_lower = -scale * psi_minus_bound(&b)?;

    let (plus, minus, search) = {
        let ((plus, minus), search) = rayon::join(
            || rayon::join(|| oracle_max(&b, Sign::Plus, &opts.search), || oracle_max(&b, Sign::Minus, &opts.search)),
            || search_class(class, &opts.search),
        );
        (plus?, minus?, search?)
    };
    let oracle_upper = Extremum::from_max(&plus, scale);
    let oracle_lower = Extremum::from_max(&minus, -scale);

    checks.push(Check::near("closed-form upper = claimed", closed_upper, claim.claimed_upper, opts.closed_form_tol));
    checks.push(Check::at_most("oracle upper <= closed form", oracle_upper.value, closed_upper, SOUNDNESS_SLACK));
    checks.push(Check::near("oracle upper reaches closed form", oracle_upper.value, closed_upper, opts.oracle_tol));
    checks.push(Check::at_most("oracle lower >= closed form", -oracle_lower.value, -closed_lower, SOUNDNESS_SLACK));
    checks.push(Check::near("oracle lower reaches closed form", oracle_lower.value, closed_lower, opts.oracle_tol));
    checks.push(Check::near("direct search max = closed-form upper", search.max.value, closed_upper, DUAL_PATH_TOL));
    checks.push(Check::near("direct search min = closed-form lower", search.min.value, closed_lower, DUAL_PATH_TOL));
    if let Some(claimed) = claim.claimed_lower {
        checks.push(Check::near("closed-form lower = claimed", closed_lower, claimed, opts.closed_form_tol));
    }

    let mut extremal_values = BTreeMap::new();
    let mut extremals = vec![(claim.extremal_upper, claim.claimed_upper)];
    if let (Some(map), Some(claimed)) = (claim.extremal_lower, claim.claimed_lower) {
        extremals.push((map, claimed));
    }
    for (map, claimed) in extremals {
        let f = map.series(opts.order)?;
        let series = gamma_pair_series(&f)?;
        let closed = gamma_pair_closed(&f)?;
        let value = series.moduli_diff();
        extremal_values.insert(map.name().to_string(), value);
        checks.push(Check::near(format!("{} attains {claimed:.6}", map.name()), value, claimed, opts.closed_form_tol));
        checks.push(Check::near(
            format!("{} Gamma_2 series = closed form", map.name()),
            (series.gamma2 - closed.gamma2).norm() + (series.gamma1 - closed.gamma1).norm(),
            0.0,
            PIPELINE_TOL,
        ));
    }

    if let Some((alt_num, alt_den)) = printed_alternative_scale(claim.id) {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ (den as u64));
        let (mut worst_used, mut worst_alt) = (0.0f64, 0.0f64);
        for _ in 0..64 {
            let pt = CaratheodoryPoint::new(
                Complex64::from_polar(rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU)),
                Complex64::from_polar(rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU)),
            )?;
            let (c1, c2) = pt.to_coeffs();
            let direct = moduli_diff_from_p(class, c1, c2);
            let psi = psi_plus_value(c1, c2, &b);
            worst_used = worst_used.max((direct - scale * psi).abs());
            worst_alt = worst_alt.max((direct - alt_num as f64 / alt_den as f64 * psi).abs());
        }
        checks.push(Check::near(format!("factor {num}/{den} reproduces the moduli difference"), worst_used, 0.0, 1e-12));
        checks.push(Check::known(format!("printed factor {alt_num}/{alt_den} reproduces the moduli difference"), worst_alt, 0.0, 1e-12));
        discrepancies.push(Discrepancy {
            topic: "Psi prefactor".into(),
            printed: format!("{num}/{den} and {alt_num}/{alt_den} in the same display"),
            used: format!("{num}/{den}"),
            evidence: format!(
                "max |direct - factor * Psi+| over 64 seeded body points: {worst_used:.3e} with {num}/{den}, {worst_alt:.3e} with {alt_num}/{alt_den}"
            ),
        });
    }

    match claim.id {
        TheoremId::T1_2 => {
            notes.push("extremal f2 is artanh z = z + z^3/3 + z^5/5 + ...; the printed closed form carries a stray factor".into());
            notes.push("the coefficient substitution uses a2 = c1/4, a3 = c2/6 of this class although the text points at the starlike map".into());
        }
        TheoremId::T1_3 => {
            let a = Extremal::F4.p_parameter();
            let order = opts.order;
            let w = schwarz_from_p(&rational_p(a, order)?)?;
            let expected = TruncatedSeries::from_real(&[0.0, a, 1.0], order)
                .div(&TruncatedSeries::from_real(&[1.0, a], order))?;
            let mismatch = w.max_abs_diff(&expected)?;
            checks.push(Check::near("w = (p-1)/(p+1) equals (Az+z^2)/(1+Az)", mismatch, 0.0, 1e-12));
            let printed_at = |z: f64| ((a * z + z * z) / (1.0 - z * z)).abs();
            checks.push(Check::known(
                "printed (Az+z^2)/(1-z^2) stays in the disk: excess of |w(0.9)| over 1",
                (printed_at(0.9) - 1.0).max(0.0),
                0.0,
                0.0,
            ));
            discrepancies.push(Discrepancy {
                topic: "Schwarz function of the lower extremal".into(),
                printed: "w(z) = (Az + z^2)/(1 - z^2)".into(),
                used: "w(z) = (Az + z^2)/(1 + Az), from w = (p - 1)/(p + 1)".into(),
                evidence: format!(
                    "printed form has |w(0.9)| = {:.6} > 1, so it is not a Schwarz function; the used form has |w(0.9)| = {:.6}",
                    printed_at(0.9),
                    rational_schwarz(a, Complex64::new(0.9, 0.0)).norm()
                ),
            });
        }
        TheoremId::T1_4 => {
            let printed = extremal_value(&Extremal::F6 { a: F6_PRINTED_A }, opts.order)?;
            extremal_values.insert("f6(A=4/7)".into(), printed);
            let claimed = claim.claimed_lower.expect("T1.4 has a lower bound");
            checks.push(Check::known("f6 with printed A = 4/7 attains the lower bound", printed, claimed, opts.closed_form_tol));
            checks.push(Check::near("oracle lower argmax c1 = 12/7", oracle_lower.c1.norm(), 12.0 / 7.0, opts.oracle_tol));
            checks.push(Check::near("oracle lower argmax c2 = 2", (oracle_lower.c2 - 2.0).norm(), 0.0, opts.oracle_tol));
            discrepancies.push(Discrepancy {
                topic: "constant of the lower extremal".into(),
                printed: format!("A = 4/7, giving |Gamma_2| - |Gamma_1| = {printed:.10}"),
                used: format!("A = 6/7 (c1 = 12/7, c2 = 2), giving {:.10}", extremal_values["f6"]),
                evidence: format!(
                    "oracle argmax of Psi- at c1 = {:.8}, c2 = {:.8}",
                    oracle_lower.c1.re, oracle_lower.c2.re
                ),
            });
        }
        TheoremId::T1_1 => {
            let n = opts.order;
            let f1 = Extremal::F1.series(n)?;
            let quotient = class.defining_quotient(&f1)?;
            let to_even = quotient.max_abs_diff(&p_two(n - 1))?;
            let to_printed = quotient.max_abs_diff(&p_one(n - 1))?;
            checks.push(Check::near("f1 quotient = (1+z^2)/(1-z^2)", to_even, 0.0, PIPELINE_TOL));
            checks.push(Check::known("f1 quotient = printed (1+z)/(1-z)", to_printed, 0.0, PIPELINE_TOL));
            let from_printed = class.series_from_p(&p_one(n), n)?;
            discrepancies.push(Discrepancy {
                topic: "symmetric-point quotient of f1".into(),
                printed: "2zf1'/(f1(z) - f1(-z)) = (1 + z)/(1 - z)".into(),
                used: "2zf1'/(f1(z) - f1(-z)) = (1 + z^2)/(1 - z^2), since f1 = z/(1 - z^2) is odd".into(),
                evidence: format!(
                    "max coefficient gap to (1+z)/(1-z) is {to_printed:.3e}; solving with (1+z)/(1-z) gives z/(1-z) with value {:.10}",
                    gamma_pair_series(&from_printed)?.moduli_diff()
                ),
            });
        }
    }

    let status = checks.iter().map(|c| c.status).max().unwrap_or(Status::Pass);
    Ok(VerificationReport {
        theorem: claim.id,
        class,
        scale: format!("{num}/{den}"),
        psi: b,
        b4: b.b4(),
        plus_branch: plus_branch(&b),
        minus_branch: minus_branch(&b),
        claimed_upper: claim.claimed_upper,
        claimed_lower: claim.claimed_lower,
        closed_form_upper: closed_upper,
        closed_form_lower: closed_lower,
        oracle_upper,
        oracle_lower,
        search_upper: search.max,
        search_lower: search.min,
        extremal_values,
        checks,
        discrepancies,
        notes,
        status,
    })
}

/// Verifies several theorems in parallel; reports come back ordered by id.
pub fn verify_all(ids: &[TheoremId], opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    let mut ids = ids.to_vec();
    ids.sort();
    ids.dedup();
    ids.par_iter()
        .map(|&id| verify_theorem(&TheoremSpec::get(id), opts))
        .collect()
}

/// Worst status across reports; with `strict`, known discrepancies fail.
pub fn overall_status(reports: &[VerificationReport], strict: bool) -> Status {
    let worst = reports.iter().map(|r| r.status).max().unwrap_or(Status::Pass);
    if strict && worst == Status::KnownDiscrepancy {
        Status::Fail
    } else {
        worst
    }
}

/// Process exit code for a status: 0 pass, 2 known discrepancies only, 1 failure.
pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Pass => 0,
        Status::KnownDiscrepancy => 2,
        Status::Fail => 1,
    }
}

#[derive(Serialize)]
struct ReportDocument<'a> {
    schema: u32,
    status: Status,
    reports: &'a [VerificationReport],
}

pub fn reports_to_json(reports: &[VerificationReport], strict: bool) -> String {
    crate::json::to_string(&ReportDocument {
        schema: crate::json::SCHEMA_VERSION,
        status: overall_status(reports, strict),
        reports,
    })
}

/// A normalized series from explicit `(a2, a3)`, handy for spot checks.
pub fn series_from_coeffs(a2: Complex64, a3: Complex64, order: usize) -> TruncatedSeries {
    TruncatedSeries::new(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), a2, a3], order)
}
