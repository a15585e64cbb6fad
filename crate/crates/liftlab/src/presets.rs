//! Named fields usable in place of explicit components.

use liftlab_core::tensor::{ConnectionField, CovariantField, EndomorphismField};
use liftlab_core::ScalarExpr;

use crate::scenario::Field;

pub struct Preset {
    pub name: &'static str,
    pub fields: &'static [Field],
    pub summary: &'static str,
}

pub const PRESETS: [Preset; 3] = [
    Preset {
        name: "standard_complex_r2",
        fields: &[Field::Phi],
        summary: "n=2: φ^2_1 = 1, φ^1_2 = -1, other components 0",
    },
    Preset {
        name: "sphere_chart",
        fields: &[Field::Gamma, Field::Xi],
        summary: "n=2, (x1, x2) = (θ, φ) on the unit sphere: gamma is the Levi-Civita \
                  connection (Γ^1_22 = -sin x1 cos x1, Γ^2_12 = Γ^2_21 = cos x1 / sin x1); \
                  xi (q=2) is the metric diag(1, sin² x1)",
    },
    Preset {
        name: "flat",
        fields: &[Field::Gamma],
        summary: "any n: Γ = 0",
    },
];

pub fn names_for(field: Field) -> Vec<&'static str> {
    PRESETS
        .iter()
        .filter(|p| p.fields.contains(&field))
        .map(|p| p.name)
        .collect()
}

fn need(name: &str, n: usize, want: usize) -> Result<(), String> {
    if n == want {
        Ok(())
    } else {
        Err(format!(
            "preset `{name}` needs n = {want}, scenario has n = {n}"
        ))
    }
}

/// `None` when the name is unknown for this field.
pub fn phi(name: &str, n: usize) -> Option<Result<EndomorphismField, String>> {
    match name {
        "standard_complex_r2" => {
            Some(need(name, n, 2).map(|_| EndomorphismField::standard_complex_r2()))
        }
        _ => None,
    }
}

pub fn gamma(name: &str, n: usize) -> Option<Result<ConnectionField, String>> {
    match name {
        "sphere_chart" => Some(need(name, n, 2).map(|_| ConnectionField::sphere_chart())),
        "flat" => Some(Ok(ConnectionField::flat(n))),
        _ => None,
    }
}

pub fn covariant(name: &str, n: usize, q: usize) -> Option<Result<CovariantField, String>> {
    match name {
        "sphere_chart" => Some(need(name, n, 2).and_then(|_| {
            if q != 2 {
                return Err(format!(
                    "preset `{name}` is a metric and needs q = 2, scenario has q = {q}"
                ));
            }
            Ok(sphere_metric())
        })),
        _ => None,
    }
}

/// `dθ² + sin²θ dφ²`.
pub fn sphere_metric() -> CovariantField {
    let s = ScalarExpr::var(0).sin();
    CovariantField::from_fn(2, 2, |idx| match (idx[0], idx[1]) {
        (0, 0) => ScalarExpr::one(),
        (1, 1) => &s * &s,
        _ => ScalarExpr::zero(),
    })
}
