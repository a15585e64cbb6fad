use alloc::vec::Vec;

use super::{
    with_slot, ConnectionField, CovariantField, CurvatureDerivativeField, CurvatureField,
    EndomorphismField, VectorField,
};
use crate::error::{Error, Result};
use crate::expr::ScalarExpr;

fn same_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `(L_V A)_{j1..jq} = V^m ∂_m A_{j1..jq} + Σ_λ A_{j1..m..jq} ∂_{j_λ} V^m`.
pub fn lie_derivative_cov(v: &VectorField, a: &CovariantField) -> Result<CovariantField> {
    let n = a.dim();
    same_dim(n, v.dim())?;
    let da: Vec<CovariantField> = (0..n).map(|m| a.partial(m)).collect();
    // dv[j][m] = ∂_j V^m
    let dv: Vec<Vec<ScalarExpr>> = (0..n)
        .map(|j| (0..n).map(|m| v.get(m).diff(j)).collect())
        .collect();
    Ok(CovariantField::from_fn(n, a.rank(), |idx| {
        let transport = ScalarExpr::sum((0..n).map(|m| v.get(m) * da[m].get(idx)));
        let slots = ScalarExpr::sum((0..idx.len()).flat_map(|slot| {
            let dv = &dv;
            (0..n).map(move |m| a.get(&with_slot(idx, slot, m)) * &dv[idx[slot]][m])
        }));
        transport + slots
    }))
}

/// `(L_V φ)^i_j = V^m ∂_m φ^i_j - φ^m_j ∂_m V^i + φ^i_m ∂_j V^m`.
pub fn lie_derivative_endo(v: &VectorField, phi: &EndomorphismField) -> Result<EndomorphismField> {
    let n = phi.dim();
    same_dim(n, v.dim())?;
    let dphi: Vec<EndomorphismField> = (0..n).map(|m| phi.partial(m)).collect();
    let dv: Vec<Vec<ScalarExpr>> = (0..n)
        .map(|j| (0..n).map(|m| v.get(m).diff(j)).collect())
        .collect();
    Ok(EndomorphismField::from_fn(n, |i, j| {
        ScalarExpr::sum((0..n).map(|m| {
            v.get(m) * dphi[m].get(i, j) - phi.get(m, j) * &dv[m][i] + phi.get(i, m) * &dv[j][m]
        }))
    }))
}

/// `(∇_i A)_{j1..jq} = ∂_i A_{j1..jq} - Σ_λ Γ^m_{i j_λ} A_{j1..m..jq}`.
///
/// The result has rank `q + 1` with the derivative index first.
pub fn covariant_derivative_cov(
    gamma: &ConnectionField,
    a: &CovariantField,
) -> Result<CovariantField> {
    let n = a.dim();
    same_dim(n, gamma.dim())?;
    let da: Vec<CovariantField> = (0..n).map(|i| a.partial(i)).collect();
    Ok(CovariantField::from_fn(n, a.rank() + 1, |idx| {
        let (i, rest) = (idx[0], &idx[1..]);
        let correction = ScalarExpr::sum((0..rest.len()).flat_map(|slot| {
            (0..n).map(move |m| gamma.get(m, i, rest[slot]) * a.get(&with_slot(rest, slot, m)))
        }));
        da[i].get(rest) - &correction
    }))
}

/// `R_{kji}^l = ∂_k Γ^l_{ji} - ∂_j Γ^l_{ki} + Γ^l_{km} Γ^m_{ji} - Γ^l_{jm} Γ^m_{ki}`.
///
/// With this convention `R(∂_k, ∂_j)∂_i = R_{kji}^l ∂_l` and, for a torsion-free
/// connection, `(∇_k∇_j - ∇_j∇_k) A_i = -R_{kji}^m A_m`.
pub fn curvature(gamma: &ConnectionField) -> CurvatureField {
    let n = gamma.dim();
    let dgamma: Vec<ConnectionField> = (0..n).map(|k| gamma.partial(k)).collect();
    CurvatureField::from_fn(n, |k, j, i, l| {
        let quadratic = ScalarExpr::sum((0..n).map(|m| {
            gamma.get(l, k, m) * gamma.get(m, j, i) - gamma.get(l, j, m) * gamma.get(m, k, i)
        }));
        dgamma[k].get(l, j, i) - dgamma[j].get(l, k, i) + quadratic
    })
}

/// `(∇_k R)_{hij}^l = ∂_k R_{hij}^l - Γ^m_{kh} R_{mij}^l - Γ^m_{ki} R_{hmj}^l
/// - Γ^m_{kj} R_{him}^l + Γ^l_{km} R_{hij}^m`.
pub fn covariant_derivative_curvature(
    gamma: &ConnectionField,
    r: &CurvatureField,
) -> Result<CurvatureDerivativeField> {
    let n = r.dim();
    same_dim(n, gamma.dim())?;
    let dr: Vec<CurvatureField> = (0..n).map(|k| r.partial(k)).collect();
    Ok(CurvatureDerivativeField::from_fn(n, |idx| {
        let (k, h, i, j, l) = (idx[0], idx[1], idx[2], idx[3], idx[4]);
        let connection_terms = ScalarExpr::sum((0..n).map(|m| {
            gamma.get(l, k, m) * r.get(h, i, j, m)
                - gamma.get(m, k, h) * r.get(m, i, j, l)
                - gamma.get(m, k, i) * r.get(h, m, j, l)
                - gamma.get(m, k, j) * r.get(h, i, m, l)
        }));
        dr[k].get(h, i, j, l) + connection_terms
    }))
}

/// `(φ(A))_{j1..jq} = φ^m_{j1} A_{m j2..jq}`: contraction on the first slot.
pub fn apply_endo_cov(phi: &EndomorphismField, a: &CovariantField) -> Result<CovariantField> {
    let n = a.dim();
    same_dim(n, phi.dim())?;
    Ok(CovariantField::from_fn(n, a.rank(), |idx| {
        ScalarExpr::sum((0..n).map(|m| phi.get(m, idx[0]) * a.get(&with_slot(idx, 0, m))))
    }))
}
