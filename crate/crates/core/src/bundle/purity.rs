//! Purity, the Tachibana operator and the Nijenhuis tensor.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::{EvalPoint, ScalarExpr};
use crate::sample::{Residual, Verdict};
use crate::tensor::{apply_endo_cov, with_slot, CovariantField, EndomorphismField, MixedField12};

/// `φ^r_{j_slot} ξ_{j1..r..jq}` with `r` in slot `slot` (zero-based).
pub fn slot_contraction(
    phi: &EndomorphismField,
    xi: &CovariantField,
    slot: usize,
) -> Result<CovariantField> {
    let n = xi.dim();
    if phi.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: phi.dim(),
        });
    }
    assert!(slot < xi.rank(), "slot {slot} out of range");
    Ok(CovariantField::from_fn(n, xi.rank(), |idx| {
        ScalarExpr::sum((0..n).map(|r| phi.get(r, idx[slot]) * xi.get(&with_slot(idx, slot, r))))
    }))
}

/// `⋆ξ`, the first-slot contraction. Purity makes the slot irrelevant.
pub fn star(phi: &EndomorphismField, xi: &CovariantField) -> Result<CovariantField> {
    apply_endo_cov(phi, xi)
}

/// Largest sampled disagreement between slot contractions of `φ` with `ξ`,
/// over every pair of slots. Vector and covector fields (`q = 1`) count as
/// pure, so the residual is zero for them.
pub fn purity_residual(
    phi: &EndomorphismField,
    xi: &CovariantField,
    points: &[EvalPoint],
) -> Result<Residual> {
    let q = xi.rank();
    let mut residual = Residual::new();
    if q == 1 {
        if let Some(p) = points.first() {
            residual.observe(0.0, p);
        }
        return Ok(residual);
    }
    let contractions: Vec<CovariantField> = (0..q)
        .map(|slot| slot_contraction(phi, xi, slot))
        .collect::<Result<_>>()?;
    for p in points {
        let values: Vec<Vec<f64>> = contractions
            .iter()
            .map(|c| c.eval(p))
            .collect::<Result<_>>()?;
        let mut worst = 0.0f64;
        for a in 0..q {
            for b in a + 1..q {
                for (x, y) in values[a].iter().zip(&values[b]) {
                    worst = worst.max((x - y).abs());
                }
            }
        }
        residual.observe(worst, p);
    }
    Ok(residual)
}

/// Tachibana operator without the purity precondition:
///
/// `(Φ_φ ξ)_{l k1..kq} = φ^m_l ∂_m ξ_{k1..kq} - ∂_l (⋆ξ)_{k1..kq}
///                      + Σ_a (∂_{k_a} φ^m_l) ξ_{k1..m..kq}`
///
/// The derivative index `l` comes first in the rank-`q+1` result.
pub fn tachibana_unchecked(phi: &EndomorphismField, xi: &CovariantField) -> Result<CovariantField> {
    let n = xi.dim();
    let star_xi = star(phi, xi)?;
    let dxi: Vec<CovariantField> = (0..n).map(|m| xi.partial(m)).collect();
    let dstar: Vec<CovariantField> = (0..n).map(|l| star_xi.partial(l)).collect();
    let dphi: Vec<EndomorphismField> = (0..n).map(|k| phi.partial(k)).collect();
    Ok(CovariantField::from_fn(n, xi.rank() + 1, |idx| {
        let (l, k) = (idx[0], &idx[1..]);
        let transport = ScalarExpr::sum((0..n).map(|m| phi.get(m, l) * dxi[m].get(k)));
        let slots = ScalarExpr::sum((0..k.len()).flat_map(|a| {
            let dphi = &dphi;
            (0..n).map(move |m| dphi[k[a]].get(m, l) * xi.get(&with_slot(k, a, m)))
        }));
        transport - dstar[l].get(k) + slots
    }))
}

/// Tachibana operator on tensors that are pure with respect to `φ`; purity
/// is checked on `points` against `tol`.
pub fn tachibana(
    phi: &EndomorphismField,
    xi: &CovariantField,
    points: &[EvalPoint],
    tol: f64,
) -> Result<CovariantField> {
    let purity = purity_residual(phi, xi, points)?;
    if !purity.within(tol) {
        return Err(Error::NotPure {
            residual: purity.value,
        });
    }
    tachibana_unchecked(phi, xi)
}

/// `ξ` is almost analytic when it is pure and `Φ_φ ξ = 0`.
pub fn is_almost_analytic(
    phi: &EndomorphismField,
    xi: &CovariantField,
    points: &[EvalPoint],
    tol: f64,
) -> Result<Verdict> {
    let residual = tachibana(phi, xi, points, tol)?.max_abs(points)?;
    Ok(Verdict::from_residual(residual, tol))
}

/// `N^l_{jk} = φ^m_j ∂_m φ^l_k - φ^m_k ∂_m φ^l_j - φ^l_m (∂_j φ^m_k - ∂_k φ^m_j)`,
/// the components of `N(∂_j, ∂_k)`.
pub fn nijenhuis(phi: &EndomorphismField) -> MixedField12 {
    let n = phi.dim();
    let dphi: Vec<EndomorphismField> = (0..n).map(|m| phi.partial(m)).collect();
    MixedField12::from_fn(n, |l, j, k| {
        ScalarExpr::sum((0..n).map(|m| {
            phi.get(m, j) * dphi[m].get(l, k)
                - phi.get(m, k) * dphi[m].get(l, j)
                - phi.get(l, m) * (dphi[j].get(m, k) - dphi[k].get(m, j))
        }))
    })
}

/// `(N ∘ ξ)_{j i1..iq} = N^m_{j i1} ξ_{m i2..iq}`.
pub fn nijenhuis_compose(nij: &MixedField12, xi: &CovariantField) -> Result<CovariantField> {
    let n = xi.dim();
    if nij.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: nij.dim(),
        });
    }
    Ok(CovariantField::from_fn(n, xi.rank() + 1, |idx| {
        let (j, rest) = (idx[0], &idx[1..]);
        ScalarExpr::sum((0..n).map(|m| nij.get(m, j, rest[0]) * xi.get(&with_slot(rest, 0, m))))
    }))
}
