//! Runs the checks of a scenario on one shared set of sample points.

use liftlab_core::bundle::{
    nijenhuis, nijenhuis_compose, purity_residual, tachibana, verify_characterization,
    verify_theorem1, CrossSection,
};
use liftlab_core::connection_lift::{CurvatureTangency, SectionGeometry};
use liftlab_core::sample::{Residual, SampleSpec, DEFAULT_COUNT, DEFAULT_SEED, EXACT_TOL};
use liftlab_core::tensor::{ConnectionField, CovariantField, EndomorphismField};
use liftlab_core::EvalPoint;
use serde_json::{json, Map, Value};

use crate::report::{CheckResult, Engine, Report, Status};
use crate::scenario::{CheckId, Scenario};

/// Overrides taken from the command line and the environment.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub points: Option<usize>,
    pub tol: Option<f64>,
    /// Value of `LIFTLAB_SEED`, used when neither the flag nor the scenario
    /// sets a seed.
    pub env_seed: Option<u64>,
}

impl RunOptions {
    pub fn resolve_seed(&self, scenario: &Scenario) -> u64 {
        self.seed
            .or(scenario.seed)
            .or(self.env_seed)
            .unwrap_or(DEFAULT_SEED)
    }
}

/// Failure before any check runs.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("cannot draw sample points: {0}")]
    Sampling(liftlab_core::Error),
    #[error("{0}")]
    Options(String),
}

pub fn run_scenario(scenario: &Scenario, options: &RunOptions) -> Result<Report, RunError> {
    let seed = options.resolve_seed(scenario);
    let count = options.points.or(scenario.count).unwrap_or(DEFAULT_COUNT);
    if count == 0 {
        return Err(RunError::Options("point count must be positive".into()));
    }
    let tol = options.tol.or(scenario.tolerance).unwrap_or(EXACT_TOL);
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(RunError::Options(format!(
            "tolerance {tol} is not a non-negative number"
        )));
    }
    let spec = SampleSpec {
        seed,
        count,
        bbox: scenario.bbox.clone(),
    };
    let guards = scenario.guard_expressions();
    let points = spec.draw(&guards).map_err(RunError::Sampling)?;

    let checks: Vec<CheckResult> = scenario
        .checks
        .iter()
        .map(|&id| run_check(id, scenario, &points, tol))
        .collect();
    let passed = checks.iter().all(|c| c.status == Status::Pass);
    Ok(Report {
        scenario: scenario.name.clone(),
        n: scenario.n,
        q: scenario.q,
        engine: Engine {
            version: env!("CARGO_PKG_VERSION"),
            seed,
            points: count,
            bbox: scenario
                .bbox
                .bounds()
                .iter()
                .map(|&(lo, hi)| [lo, hi])
                .collect(),
        },
        checks,
        passed,
    })
}

/// What a check computes before it is turned into a [`CheckResult`].
struct Outcome {
    residual: Residual,
    /// Overrides `residual ≤ tol` when the check has its own pass rule.
    holds: Option<bool>,
    details: Map<String, Value>,
}

impl Outcome {
    fn plain(residual: Residual) -> Self {
        Self {
            residual,
            holds: None,
            details: Map::new(),
        }
    }
}

pub fn run_check(id: CheckId, scenario: &Scenario, points: &[EvalPoint], tol: f64) -> CheckResult {
    let outcome = match id {
        CheckId::Purity => purity(scenario, points),
        CheckId::TachibanaZero => tachibana_zero(scenario, points, tol),
        CheckId::NijenhuisZero => nijenhuis_zero(scenario, points),
        CheckId::Theorem1 => theorem1(scenario, points, tol),
        CheckId::Characterization => characterization(scenario, points, tol),
        CheckId::LiftConnectionZeros => lift_connection_zeros(scenario, points),
        CheckId::InducedEqualsBase => induced_equals_base(scenario, points),
        CheckId::GaussConsistency => gauss_consistency(scenario, points),
        CheckId::TotallyGeodesic => totally_geodesic(scenario, points),
        CheckId::CurvatureTangency => curvature_tangency(scenario, points, tol),
    };
    match outcome {
        Ok(o) if o.residual.value.is_finite() => {
            let holds = o.holds.unwrap_or_else(|| o.residual.within(tol));
            CheckResult {
                id: id.to_string(),
                status: if holds { Status::Pass } else { Status::Fail },
                residual: Some(o.residual.value),
                tolerance: tol,
                witness: o.residual.witness,
                error: None,
                details: o.details,
            }
        }
        Ok(o) => error_result(
            id,
            tol,
            format!("residual is not finite: {}", o.residual.value),
        ),
        Err(e) => error_result(id, tol, e.to_string()),
    }
}

fn error_result(id: CheckId, tol: f64, message: String) -> CheckResult {
    CheckResult {
        id: id.to_string(),
        status: Status::Error,
        residual: None,
        tolerance: tol,
        witness: None,
        error: Some(message),
        details: Map::new(),
    }
}

type CheckOutput = liftlab_core::Result<Outcome>;

// Presence is validated when the scenario is built.
fn phi(s: &Scenario) -> &EndomorphismField {
    s.phi.as_ref().expect("phi validated")
}

fn xi(s: &Scenario) -> &CovariantField {
    s.xi.as_ref().expect("xi validated")
}

fn gamma(s: &Scenario) -> &ConnectionField {
    s.gamma.as_ref().expect("gamma validated")
}

fn value(r: &Residual) -> Value {
    json!(r.value)
}

fn purity(s: &Scenario, points: &[EvalPoint]) -> CheckOutput {
    Ok(Outcome::plain(purity_residual(phi(s), xi(s), points)?))
}

fn tachibana_zero(s: &Scenario, points: &[EvalPoint], tol: f64) -> CheckOutput {
    Ok(Outcome::plain(
        tachibana(phi(s), xi(s), points, tol)?.max_abs(points)?,
    ))
}

fn nijenhuis_zero(s: &Scenario, points: &[EvalPoint]) -> CheckOutput {
    Ok(Outcome::plain(
        nijenhuis_compose(&nijenhuis(phi(s)), xi(s))?.max_abs(points)?,
    ))
}

fn theorem1(s: &Scenario, points: &[EvalPoint], tol: f64) -> CheckOutput {
    let report = verify_theorem1(phi(s), xi(s), points)?;
    let hypotheses = report.hypotheses_hold(tol);
    let mut details = Map::new();
    details.insert("hypotheses_hold".into(), json!(hypotheses));
    details.insert(
        "conclusion_holds".into(),
        json!(report.conclusion_holds(tol)),
    );
    details.insert("almost_complex".into(), value(&report.almost_complex));
    details.insert("purity".into(), value(&report.purity));
    details.insert("tachibana".into(), value(&report.tachibana));
    details.insert("nijenhuis_xi".into(), value(&report.nijenhuis_xi));
    details.insert("lift_square".into(), value(&report.lift_square));
    Ok(Outcome {
        residual: report.conclusion_residual(),
        holds: Some(report.passes(tol)),
        details,
    })
}

fn characterization(s: &Scenario, points: &[EvalPoint], tol: f64) -> CheckOutput {
    let v = s.v.as_ref().expect("v validated");
    let a = s.a.as_ref().expect("a validated");
    let report = verify_characterization(phi(s), xi(s), v, a, points, tol)?;
    let mut details = Map::new();
    details.insert("complete_lift".into(), value(&report.complete_lift));
    details.insert("vertical_lift".into(), value(&report.vertical_lift));
    Ok(Outcome {
        residual: report.max(),
        holds: None,
        details,
    })
}

/// At `(x, ξ(x))`: the source block vanishes on the zero section and is
/// linear in the fibre coordinate, every other block ignores the fibre
/// coordinate, and the lower pair is symmetric.
fn lift_connection_zeros(s: &Scenario, points: &[EvalPoint]) -> CheckOutput {
    let geometry = SectionGeometry::new(gamma(s).clone(), xi(s).clone())?;
    let lift = geometry.lift();
    let section = CrossSection::new(xi(s).clone());
    let (n, q) = (s.n, s.q);
    let total = n + n.pow(q as u32);

    let mut zero_section = Residual::new();
    let mut linearity = Residual::new();
    let mut fibre_free = Residual::new();
    let mut symmetry = Residual::new();
    for x in points {
        let at = section.point(x)?;
        let c = lift.at(&at)?;
        let c0 = lift.at(&at.scaled_fibre(0.0))?;
        let c2 = lift.at(&at.scaled_fibre(2.0))?;
        let (mut z, mut lin, mut free, mut sym) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for upper in 0..total {
            for m in 0..total {
                for k in 0..total {
                    let here = c.get(upper, m, k);
                    sym = sym.max((here - c.get(upper, k, m)).abs());
                    if upper >= n && m < n && k < n {
                        z = z.max(c0.get(upper, m, k).abs());
                        lin = lin.max((c2.get(upper, m, k) - 2.0 * here).abs());
                    } else {
                        free = free.max((c0.get(upper, m, k) - here).abs());
                    }
                }
            }
        }
        zero_section.observe(z, x);
        linearity.observe(lin, x);
        fibre_free.observe(free, x);
        symmetry.observe(sym, x);
    }
    let mut details = Map::new();
    details.insert("zero_section".into(), value(&zero_section));
    details.insert("linearity".into(), value(&linearity));
    details.insert("fibre_independence".into(), value(&fibre_free));
    details.insert("symmetry".into(), value(&symmetry));
    let mut residual = zero_section;
    residual.merge(&linearity);
    residual.merge(&fibre_free);
    residual.merge(&symmetry);
    Ok(Outcome {
        residual,
        holds: None,
        details,
    })
}

fn induced_equals_base(s: &Scenario, points: &[EvalPoint]) -> CheckOutput {
    let geometry = SectionGeometry::new(gamma(s).clone(), xi(s).clone())?;
    let mut residual = Residual::new();
    for x in points {
        let induced = geometry.induced_connection(x)?;
        let base = gamma(s).eval(x)?;
        residual.observe_all(induced.iter().zip(&base).map(|(a, b)| a - b), x);
    }
    Ok(Outcome::plain(residual))
}

fn gauss_consistency(s: &Scenario, points: &[EvalPoint]) -> CheckOutput {
    let geometry = SectionGeometry::new(gamma(s).clone(), xi(s).clone())?;
    let mut residual = Residual::new();
    for x in points {
        residual.observe(geometry.gauss_residual(x)?, x);
    }
    Ok(Outcome::plain(residual))
}

fn totally_geodesic(s: &Scenario, points: &[EvalPoint]) -> CheckOutput {
    let geometry = SectionGeometry::new(gamma(s).clone(), xi(s).clone())?;
    let h = geometry.gauss().max_abs(points)?;
    let mut details = Map::new();
    details.insert(
        "min_over_points".into(),
        json!(min_over_points(points, |x| {
            Ok(geometry
                .gauss()
                .eval(x)?
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs())))
        })?),
    );
    Ok(Outcome {
        residual: h,
        holds: None,
        details,
    })
}

fn min_over_points(
    points: &[EvalPoint],
    mut f: impl FnMut(&EvalPoint) -> liftlab_core::Result<f64>,
) -> liftlab_core::Result<f64> {
    let mut lowest = f64::INFINITY;
    for x in points {
        lowest = lowest.min(f(x)?);
    }
    Ok(lowest)
}

fn curvature_tangency(s: &Scenario, points: &[EvalPoint], tol: f64) -> CheckOutput {
    let report = CurvatureTangency::new(gamma(s), xi(s).clone())?.check(points, tol)?;
    let failing = report.per_point.iter().filter(|&&r| r > tol).count();
    let mut details = Map::new();
    details.insert("lhs_max".into(), json!(report.lhs_max));
    details.insert("rhs_max".into(), json!(report.rhs_max));
    details.insert("failing_points".into(), json!(failing));
    details.insert("per_point".into(), json!(report.per_point));
    Ok(Outcome {
        residual: report.verdict.residual,
        holds: Some(report.verdict.holds),
        details,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(text: &str) -> Scenario {
        Scenario::from_json_str(text).unwrap()
    }

    #[test]
    fn seed_precedence() {
        let with = scenario(
            r#"{"name": "t", "n": 2, "q": 1, "phi": "standard_complex_r2", "xi": {"1": "x1"}, "sample": {"seed": 7}, "checks": ["purity"]}"#,
        );
        let without = scenario(
            r#"{"name": "t", "n": 2, "q": 1, "phi": "standard_complex_r2", "xi": {"1": "x1"}, "checks": ["purity"]}"#,
        );
        let env = RunOptions {
            env_seed: Some(9),
            ..Default::default()
        };
        let flag = RunOptions {
            seed: Some(3),
            env_seed: Some(9),
            ..Default::default()
        };
        assert_eq!(flag.resolve_seed(&with), 3);
        assert_eq!(env.resolve_seed(&with), 7);
        assert_eq!(env.resolve_seed(&without), 9);
        assert_eq!(RunOptions::default().resolve_seed(&without), 42);
    }

    #[test]
    fn lift_zeros_hold_on_sphere() {
        let s = scenario(
            r#"{"name": "t", "n": 2, "q": 2, "gamma": "sphere_chart", "xi": {"1,1": "x1*x2", "2,1": "x2^2"},
                "sample": {"count": 6}, "checks": ["lift_connection_zeros"]}"#,
        );
        let report = run_scenario(&s, &RunOptions::default()).unwrap();
        let c = &report.checks[0];
        assert_eq!(c.status, Status::Pass, "{c:?}");
    }

    #[test]
    fn torsion_is_an_error_status() {
        let s = scenario(
            r#"{"name": "t", "n": 2, "q": 1, "gamma": {"1,1,2": "1"}, "xi": {"1": "x1"},
                "sample": {"count": 3}, "checks": ["induced_equals_base", "gauss_consistency"]}"#,
        );
        let report = run_scenario(&s, &RunOptions::default()).unwrap();
        assert!(!report.passed);
        for c in &report.checks {
            assert_eq!(c.status, Status::Error);
            assert!(c.error.as_deref().unwrap().contains("torsion"), "{c:?}");
        }
    }

    #[test]
    fn theorem1_vacuous_when_not_analytic() {
        let s = scenario(
            r#"{"name": "t", "n": 2, "q": 1, "phi": "standard_complex_r2", "xi": {"1": "x1^2"},
                "sample": {"count": 8}, "checks": ["tachibana_zero", "theorem1"]}"#,
        );
        let report = run_scenario(&s, &RunOptions::default()).unwrap();
        assert_eq!(report.checks[0].status, Status::Fail);
        assert!(report.checks[0].residual.unwrap() >= 1.0);
        assert_eq!(report.checks[1].status, Status::Pass);
        assert_eq!(report.checks[1].details["hypotheses_hold"], json!(false));
    }

    #[test]
    fn sampling_exhausted_is_a_run_error() {
        let s = scenario(
            r#"{"name": "t", "n": 2, "q": 1, "phi": "standard_complex_r2", "xi": {"1": "1/(x1 - x1)"},
                "checks": ["purity"]}"#,
        );
        assert!(matches!(
            run_scenario(&s, &RunOptions::default()),
            Err(RunError::Sampling(_))
        ));
    }
}
