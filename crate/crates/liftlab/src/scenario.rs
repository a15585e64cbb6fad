//! Scenario files: one JSON document naming the fields, the sampling setup
//! and the checks to run.
//!
//! Tensor fields are either a preset name or a sparse map from 1-based,
//! comma-joined index tuples to expressions; absent entries are `"0"`.
//!
//! ```json
//! {
//!   "name": "analytic covector",
//!   "n": 2, "q": 1,
//!   "phi": "standard_complex_r2",
//!   "xi": { "1": "x1", "2": "-x2" },
//!   "sample": { "seed": 42, "count": 64, "box": [0.2, 1.5] },
//!   "checks": ["purity", "tachibana_zero", "theorem1"]
//! }
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use liftlab_core::sample::{SampleBox, DEFAULT_BOX};
use liftlab_core::tensor::{
    check_sizes, rank_of, ConnectionField, CovariantField, EndomorphismField, VectorField,
};
use liftlab_core::{parse, ScalarExpr};
use serde::{Deserialize, Serialize};

use crate::presets;

/// Problems with a scenario file. All of them map to exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("field `{field}`, entry \"{key}\": {source}")]
    Expression {
        field: Field,
        key: String,
        source: liftlab_core::Error,
    },

    #[error("field `{field}`, entry \"{key}\": {message}")]
    BadIndex {
        field: Field,
        key: String,
        message: String,
    },

    #[error("field `{field}`: {message}")]
    BadField { field: Field, message: String },

    #[error("check `{check}` requires field `{field}`")]
    MissingField { check: CheckId, field: Field },

    #[error("{0}")]
    Invalid(String),
}

/// The tensor fields a scenario can carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Field {
    Phi,
    Xi,
    Gamma,
    V,
    A,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Phi => "phi",
            Field::Xi => "xi",
            Field::Gamma => "gamma",
            Field::V => "v",
            Field::A => "a",
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Check identifiers accepted in the `checks` list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckId {
    Purity,
    TachibanaZero,
    NijenhuisZero,
    Theorem1,
    Characterization,
    LiftConnectionZeros,
    InducedEqualsBase,
    GaussConsistency,
    TotallyGeodesic,
    CurvatureTangency,
}

impl CheckId {
    pub const ALL: [CheckId; 10] = [
        CheckId::Purity,
        CheckId::TachibanaZero,
        CheckId::NijenhuisZero,
        CheckId::Theorem1,
        CheckId::Characterization,
        CheckId::LiftConnectionZeros,
        CheckId::InducedEqualsBase,
        CheckId::GaussConsistency,
        CheckId::TotallyGeodesic,
        CheckId::CurvatureTangency,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::Purity => "purity",
            CheckId::TachibanaZero => "tachibana_zero",
            CheckId::NijenhuisZero => "nijenhuis_zero",
            CheckId::Theorem1 => "theorem1",
            CheckId::Characterization => "characterization",
            CheckId::LiftConnectionZeros => "lift_connection_zeros",
            CheckId::InducedEqualsBase => "induced_equals_base",
            CheckId::GaussConsistency => "gauss_consistency",
            CheckId::TotallyGeodesic => "totally_geodesic",
            CheckId::CurvatureTangency => "curvature_tangency",
        }
    }

    pub fn required_fields(self) -> &'static [Field] {
        match self {
            CheckId::Purity
            | CheckId::TachibanaZero
            | CheckId::NijenhuisZero
            | CheckId::Theorem1 => &[Field::Phi, Field::Xi],
            CheckId::Characterization => &[Field::Phi, Field::Xi, Field::V, Field::A],
            CheckId::LiftConnectionZeros
            | CheckId::InducedEqualsBase
            | CheckId::GaussConsistency
            | CheckId::TotallyGeodesic
            | CheckId::CurvatureTangency => &[Field::Gamma, Field::Xi],
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = CheckId::ALL.iter().map(|c| c.as_str()).collect();
                format!("unknown check `{s}` (known: {})", known.join(", "))
            })
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum FieldSpec {
    Preset(String),
    Components(BTreeMap<String, String>),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum BoxSpec {
    Uniform([f64; 2]),
    PerAxis(Vec<[f64; 2]>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSample {
    seed: Option<u64>,
    count: Option<usize>,
    #[serde(rename = "box")]
    bbox: Option<BoxSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    n: usize,
    q: usize,
    phi: Option<FieldSpec>,
    xi: Option<FieldSpec>,
    gamma: Option<FieldSpec>,
    v: Option<FieldSpec>,
    a: Option<FieldSpec>,
    #[serde(default)]
    sample: RawSample,
    checks: Vec<CheckId>,
    tolerance: Option<f64>,
}

/// A validated scenario with every field built.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub n: usize,
    pub q: usize,
    pub phi: Option<EndomorphismField>,
    pub xi: Option<CovariantField>,
    pub gamma: Option<ConnectionField>,
    pub v: Option<VectorField>,
    pub a: Option<CovariantField>,
    /// Seed from the file, if any.
    pub seed: Option<u64>,
    pub count: Option<usize>,
    pub bbox: SampleBox,
    pub checks: Vec<CheckId>,
    pub tolerance: Option<f64>,
}

impl Scenario {
    pub fn from_path(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Self, ScenarioError> {
        let raw: RawScenario = serde_json::from_str(text).map_err(|e| ScenarioError::Json {
            line: e.line(),
            column: e.column(),
            message: strip_position(&e.to_string()),
        })?;
        Self::build(raw)
    }

    fn build(raw: RawScenario) -> Result<Self, ScenarioError> {
        let (n, q) = (raw.n, raw.q);
        check_sizes(n, q).map_err(|e| ScenarioError::Invalid(e.to_string()))?;
        if raw.checks.is_empty() {
            return Err(ScenarioError::Invalid("`checks` is empty".into()));
        }
        let mut seen = Vec::new();
        for c in &raw.checks {
            if seen.contains(c) {
                return Err(ScenarioError::Invalid(format!(
                    "check `{c}` is listed twice"
                )));
            }
            seen.push(*c);
        }
        if let Some(tol) = raw.tolerance {
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(ScenarioError::Invalid(format!(
                    "tolerance {tol} is not a non-negative number"
                )));
            }
        }
        if raw.sample.count == Some(0) {
            return Err(ScenarioError::Invalid(
                "sample count must be positive".into(),
            ));
        }

        let phi = raw.phi.map(|s| build_phi(s, n)).transpose()?;
        let xi = raw
            .xi
            .map(|s| build_covariant(s, Field::Xi, n, q))
            .transpose()?;
        let gamma = raw.gamma.map(|s| build_gamma(s, n)).transpose()?;
        let v = raw.v.map(|s| build_vector(s, n)).transpose()?;
        let a = raw
            .a
            .map(|s| build_covariant(s, Field::A, n, q))
            .transpose()?;

        for check in &raw.checks {
            for field in check.required_fields() {
                let present = match field {
                    Field::Phi => phi.is_some(),
                    Field::Xi => xi.is_some(),
                    Field::Gamma => gamma.is_some(),
                    Field::V => v.is_some(),
                    Field::A => a.is_some(),
                };
                if !present {
                    return Err(ScenarioError::MissingField {
                        check: *check,
                        field: *field,
                    });
                }
            }
        }

        let bbox = match raw.sample.bbox {
            None => SampleBox::uniform(n, DEFAULT_BOX.0, DEFAULT_BOX.1),
            Some(BoxSpec::Uniform([lo, hi])) => SampleBox::uniform(n, lo, hi),
            Some(BoxSpec::PerAxis(axes)) => {
                if axes.len() != n {
                    return Err(ScenarioError::Invalid(format!(
                        "sample box has {} axes, expected {n}",
                        axes.len()
                    )));
                }
                SampleBox::new(axes.into_iter().map(|[lo, hi]| (lo, hi)).collect())
            }
        }
        .map_err(|e| ScenarioError::Invalid(e.to_string()))?;

        Ok(Self {
            name: raw.name,
            n,
            q,
            phi,
            xi,
            gamma,
            v,
            a,
            seed: raw.sample.seed,
            count: raw.sample.count,
            bbox,
            checks: raw.checks,
            tolerance: raw.tolerance,
        })
    }

    /// Every component of every field, for rejecting singular sample points.
    pub fn guard_expressions(&self) -> Vec<&ScalarExpr> {
        let mut out: Vec<&ScalarExpr> = Vec::new();
        if let Some(f) = &self.phi {
            out.extend(f.components());
        }
        if let Some(f) = &self.xi {
            out.extend(f.components());
        }
        if let Some(f) = &self.gamma {
            out.extend(f.components());
        }
        if let Some(f) = &self.v {
            out.extend(f.components());
        }
        if let Some(f) = &self.a {
            out.extend(f.components());
        }
        out
    }
}

/// serde_json appends " at line L column C"; the position is reported separately.
fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(at) => message[..at].to_string(),
        None => message.to_string(),
    }
}

fn parse_key(field: Field, key: &str, n: usize, arity: usize) -> Result<Vec<usize>, ScenarioError> {
    let bad = |message: String| ScenarioError::BadIndex {
        field,
        key: key.to_string(),
        message,
    };
    let idx: Vec<usize> = key
        .split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<usize>()
                .map_err(|_| bad(format!("`{part}` is not an index")))
                .and_then(|i| {
                    if (1..=n).contains(&i) {
                        Ok(i - 1)
                    } else {
                        Err(bad(format!("index {i} is outside 1..={n}")))
                    }
                })
        })
        .collect::<Result<_, _>>()?;
    if idx.len() != arity {
        return Err(bad(format!(
            "expected {arity} indices, found {}",
            idx.len()
        )));
    }
    Ok(idx)
}

/// Dense components in rank order from a sparse map.
fn sparse_components(
    field: Field,
    map: &BTreeMap<String, String>,
    n: usize,
    arity: usize,
) -> Result<Vec<ScalarExpr>, ScenarioError> {
    let mut out = vec![ScalarExpr::zero(); n.pow(arity as u32)];
    let mut filled = vec![false; out.len()];
    for (key, text) in map {
        let idx = parse_key(field, key, n, arity)?;
        let at = rank_of(&idx, n);
        if filled[at] {
            return Err(ScenarioError::BadIndex {
                field,
                key: key.clone(),
                message: "the same entry is given twice".into(),
            });
        }
        filled[at] = true;
        out[at] = parse(text, n).map_err(|source| ScenarioError::Expression {
            field,
            key: key.clone(),
            source,
        })?;
    }
    Ok(out)
}

fn unknown_preset(field: Field, name: &str) -> ScenarioError {
    ScenarioError::BadField {
        field,
        message: format!(
            "unknown preset `{name}` (presets for this field: {})",
            presets::names_for(field).join(", ")
        ),
    }
}

fn build_phi(spec: FieldSpec, n: usize) -> Result<EndomorphismField, ScenarioError> {
    match spec {
        FieldSpec::Preset(name) => presets::phi(&name, n)
            .ok_or_else(|| unknown_preset(Field::Phi, &name))?
            .map_err(|message| ScenarioError::BadField {
                field: Field::Phi,
                message,
            }),
        FieldSpec::Components(map) => {
            let comps = sparse_components(Field::Phi, &map, n, 2)?;
            EndomorphismField::new(n, comps).map_err(|e| ScenarioError::Invalid(e.to_string()))
        }
    }
}

fn build_covariant(
    spec: FieldSpec,
    field: Field,
    n: usize,
    q: usize,
) -> Result<CovariantField, ScenarioError> {
    match spec {
        FieldSpec::Preset(name) => presets::covariant(&name, n, q)
            .ok_or_else(|| unknown_preset(field, &name))?
            .map_err(|message| ScenarioError::BadField { field, message }),
        FieldSpec::Components(map) => {
            let comps = sparse_components(field, &map, n, q)?;
            CovariantField::new(n, q, comps).map_err(|e| ScenarioError::Invalid(e.to_string()))
        }
    }
}

fn build_gamma(spec: FieldSpec, n: usize) -> Result<ConnectionField, ScenarioError> {
    match spec {
        FieldSpec::Preset(name) => presets::gamma(&name, n)
            .ok_or_else(|| unknown_preset(Field::Gamma, &name))?
            .map_err(|message| ScenarioError::BadField {
                field: Field::Gamma,
                message,
            }),
        FieldSpec::Components(map) => {
            let comps = sparse_components(Field::Gamma, &map, n, 3)?;
            ConnectionField::new(n, comps).map_err(|e| ScenarioError::Invalid(e.to_string()))
        }
    }
}

fn build_vector(spec: FieldSpec, n: usize) -> Result<VectorField, ScenarioError> {
    match spec {
        FieldSpec::Preset(name) => Err(unknown_preset(Field::V, &name)),
        FieldSpec::Components(map) => {
            let comps = sparse_components(Field::V, &map, n, 1)?;
            VectorField::new(n, comps).map_err(|e| ScenarioError::Invalid(e.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> Result<Scenario, ScenarioError> {
        Scenario::from_json_str(text)
    }

    #[test]
    fn minimal_scenario() {
        let s = load(
            r#"{"name": "t", "n": 2, "q": 1, "phi": "standard_complex_r2",
                "xi": {"1": "x1", "2": "-x2"}, "checks": ["purity", "theorem1"]}"#,
        )
        .unwrap();
        assert_eq!(s.checks, vec![CheckId::Purity, CheckId::Theorem1]);
        assert_eq!(s.xi.unwrap().components()[1].to_string(), "-x2");
        assert_eq!(s.bbox.bounds(), &[(0.2, 1.5), (0.2, 1.5)]);
    }

    #[test]
    fn json_errors_carry_position() {
        let err = load("{\n  \"name\": \"t\",\n  \"n\": 2,,\n}").unwrap_err();
        match err {
            ScenarioError::Json { line, column, .. } => assert_eq!((line, column), (3, 10)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_check_is_a_json_error() {
        let err = load(r#"{"name": "t", "n": 2, "q": 1, "checks": ["purty"]}"#).unwrap_err();
        assert!(err.to_string().contains("unknown variant `purty`"), "{err}");
    }

    #[test]
    fn missing_field_names_the_check() {
        let err =
            load(r#"{"name": "t", "n": 2, "q": 1, "xi": {"1": "x1"}, "checks": ["theorem1"]}"#)
                .unwrap_err();
        assert_eq!(err.to_string(), "check `theorem1` requires field `phi`");
    }

    #[test]
    fn expression_errors_name_the_entry() {
        let err = load(
            r#"{"name": "t", "n": 2, "q": 2, "gamma": "flat", "xi": {"1,2": "x1 *"}, "checks": ["totally_geodesic"]}"#,
        )
        .unwrap_err();
        assert!(
            err.to_string()
                .starts_with("field `xi`, entry \"1,2\": syntax error at column"),
            "{err}"
        );
    }

    #[test]
    fn bad_indices() {
        let base = |xi: &str| {
            format!(
                r#"{{"name": "t", "n": 2, "q": 2, "gamma": "flat", "xi": {xi}, "checks": ["totally_geodesic"]}}"#
            )
        };
        assert!(load(&base(r#"{"1,3": "1"}"#))
            .unwrap_err()
            .to_string()
            .contains("outside 1..=2"));
        assert!(load(&base(r#"{"1": "1"}"#))
            .unwrap_err()
            .to_string()
            .contains("expected 2 indices"));
        assert!(load(&base(r#"{"1,2": "1", "1, 2": "2"}"#))
            .unwrap_err()
            .to_string()
            .contains("twice"));
    }

    #[test]
    fn preset_dimension_mismatch() {
        let err = load(r#"{"name": "t", "n": 3, "q": 1, "gamma": "sphere_chart", "xi": {"1": "x1"}, "checks": ["gauss_consistency"]}"#)
            .unwrap_err();
        assert!(err.to_string().starts_with("field `gamma`"), "{err}");
    }

    #[test]
    fn unsupported_sizes_rejected() {
        assert!(load(r#"{"name": "t", "n": 2, "q": 0, "checks": ["purity"]}"#).is_err());
        assert!(load(r#"{"name": "t", "n": 5, "q": 1, "checks": ["purity"]}"#).is_err());
    }
}
