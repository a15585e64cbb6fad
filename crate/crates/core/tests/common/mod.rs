#![allow(dead_code)]

use liftlab_core::sample::SampleSpec;
use liftlab_core::tensor::{ConnectionField, CovariantField, EndomorphismField, VectorField};
use liftlab_core::{parse, EvalPoint, ScalarExpr};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn points(n: usize, count: usize) -> Vec<EvalPoint> {
    SampleSpec::standard(n).with_count(count).draw(&[]).unwrap()
}

pub fn expr(text: &str, n: usize) -> ScalarExpr {
    parse(text, n).unwrap()
}

pub fn cov(n: usize, q: usize, comps: &[&str]) -> CovariantField {
    CovariantField::new(n, q, comps.iter().map(|s| expr(s, n)).collect()).unwrap()
}

pub fn vector(n: usize, comps: &[&str]) -> VectorField {
    VectorField::new(n, comps.iter().map(|s| expr(s, n)).collect()).unwrap()
}

pub fn endo(n: usize, comps: &[&str]) -> EndomorphismField {
    EndomorphismField::new(n, comps.iter().map(|s| expr(s, n)).collect()).unwrap()
}

/// A polynomial of total degree at most 2 with a few random terms, built
/// as text so the parser is exercised too.
pub fn random_polynomial(rng: &mut ChaCha8Rng, n: usize) -> ScalarExpr {
    let terms = rng.random_range(1..=3);
    let mut text = String::new();
    for t in 0..terms {
        let c: f64 = rng.random_range(-1.0..1.0);
        if t > 0 {
            text.push_str(" + ");
        }
        text.push_str(&format!("({c:.3})"));
        for _ in 0..rng.random_range(0..=2) {
            let axis = rng.random_range(1..=n);
            text.push_str(&format!("*x{axis}"));
        }
    }
    expr(&text, n)
}

pub fn random_symmetric_connection(rng: &mut ChaCha8Rng, n: usize) -> ConnectionField {
    let mut table = vec![ScalarExpr::zero(); n * n * n];
    for h in 0..n {
        for j in 0..n {
            for i in j..n {
                let p = random_polynomial(rng, n);
                table[(h * n + j) * n + i] = p.clone();
                table[(h * n + i) * n + j] = p;
            }
        }
    }
    ConnectionField::new(n, table)
        .unwrap()
        .checked_symmetric(&points(n, 4), 0.0)
        .unwrap()
}

pub fn random_covariant(rng: &mut ChaCha8Rng, n: usize, q: usize) -> CovariantField {
    CovariantField::from_fn(n, q, |_| random_polynomial(rng, n))
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> VectorField {
    VectorField::from_fn(n, |_| random_polynomial(rng, n))
}

/// `A J A⁻¹` with `J` the standard structure on `R^4` and
/// `A = I + x3 E_{12}`; almost complex but not integrable.
pub fn twisted_structure_r4() -> EndomorphismField {
    let j0 = |i: usize, j: usize| match (i, j) {
        (1, 0) | (3, 2) => 1.0,
        (0, 1) | (2, 3) => -1.0,
        _ => 0.0,
    };
    let a = |i: usize, j: usize, sign: f64| {
        if i == j {
            ScalarExpr::one()
        } else if (i, j) == (0, 1) {
            ScalarExpr::constant(sign) * ScalarExpr::var(2)
        } else {
            ScalarExpr::zero()
        }
    };
    EndomorphismField::from_fn(4, |i, j| {
        ScalarExpr::sum(
            (0..4)
                .flat_map(|k| (0..4).map(move |l| (k, l)))
                .map(|(k, l)| a(i, k, 1.0) * ScalarExpr::constant(j0(k, l)) * a(l, j, -1.0)),
        )
    })
}

/// `A J A⁻¹` on the plane with `A = [[1, x1], [0, 1]]`: a non-constant
/// almost complex structure.
pub fn twisted_structure_r2() -> EndomorphismField {
    endo(2, &["x1", "-(1 + x1^2)", "1", "-x1"])
}

/// `α ⊗ β - (α∘φ) ⊗ (β∘φ)`, pure with respect to any almost complex `φ`.
pub fn pure_rank_two(
    phi: &EndomorphismField,
    alpha: &[ScalarExpr],
    beta: &[ScalarExpr],
) -> CovariantField {
    let n = phi.dim();
    let twist = |w: &[ScalarExpr], i: usize| ScalarExpr::sum((0..n).map(|m| phi.get(m, i) * &w[m]));
    CovariantField::from_fn(n, 2, |idx| {
        &alpha[idx[0]] * &beta[idx[1]] - twist(alpha, idx[0]) * twist(beta, idx[1])
    })
}

pub fn assert_close(a: &[f64], b: &[f64], tol: f64, what: &str) {
    assert_eq!(a.len(), b.len(), "{what}: length");
    for (k, (x, y)) in a.iter().zip(b).enumerate() {
        assert!((x - y).abs() <= tol, "{what}[{k}]: {x} vs {y}");
    }
}
