//! Text printed by `liftlab explain <check-id>`.

use crate::scenario::CheckId;

pub fn explain(id: CheckId) -> &'static str {
    match id {
        CheckId::Purity => {
            "purity (needs phi, xi)
  ξ is pure with respect to φ when contracting φ into any slot gives the same tensor:
    φ^m_{i_1} ξ_{m i_2 .. i_q} = φ^m_{i_λ} ξ_{i_1 .. m .. i_q}   for every slot λ.
  residual: max over points and slots of the difference. Always 0 for q = 1."
        }
        CheckId::TachibanaZero => {
            "tachibana_zero (needs phi, xi; xi must be pure)
  (Φ_φ ξ)_{l k_1..k_q} = φ^m_l ∂_m ξ_{k_1..k_q} - ∂_l (φ^m_{k_1} ξ_{m k_2..k_q})
                         + Σ_a (∂_{k_a} φ^m_l) ξ_{k_1..m..k_q}
  residual: max |Φ_φ ξ|. A pure ξ with Φ_φ ξ = 0 is almost analytic.
  An impure ξ is reported with status error."
        }
        CheckId::NijenhuisZero => {
            "nijenhuis_zero (needs phi, xi)
  N^l_{jk} = φ^m_j ∂_m φ^l_k - φ^m_k ∂_m φ^l_j - φ^l_m (∂_j φ^m_k - ∂_k φ^m_j)
  (N∘ξ)_{j k_1..k_q} = N^l_{j k_1} ξ_{l k_2..k_q}
  residual: max |N∘ξ|."
        }
        CheckId::Theorem1 => {
            "theorem1 (needs phi, xi)
  hypotheses: φ² = -I, ξ pure, Φ_φ ξ = 0
  conclusion: N∘ξ = 0 and the complete lift ^Cφ on the cross-section satisfies (^Cφ)² = -I.
  In the adapted frame ^Cφ = [[φ^k_l, 0], [-Φ_{l k̄}, φ^{r_1}_{k_1} δ^{r_2}_{k_2}..δ^{r_q}_{k_q}]],
  and the lower-left block of (^Cφ)² + I equals (N∘ξ)_{j k̄} once ξ is almost analytic.
  The check passes when the implication holds; details report every residual and
  whether the hypotheses held. residual: the conclusion residual."
        }
        CheckId::Characterization => {
            "characterization (needs phi, xi, v, a)
  The complete lift ^Cφ is determined by
    ^Cφ(^C V) = ^C(φV) + ^V((L_V φ)∘ξ)
    ^Cφ(^V A) = ^V(φ(A))
  for the vector field V (field v) and the covariant field A (field a).
  residual: max difference of both sides, evaluated along the cross-section."
        }
        CheckId::LiftConnectionZeros => {
            "lift_connection_zeros (needs gamma, xi)
  In the natural frame the complete lift ^CΓ has nonzero blocks only at
    ^CΓ^i_{ms} = Γ^i_{ms},  ^CΓ^ī_{ms̄},  ^CΓ^ī_{m̄s},  ^CΓ^ī_{ms};
  only ^CΓ^ī_{ms} depends on the fibre coordinate t, and it is linear in t.
  Checked at (x, ξ(x)): the source block vanishes at t = 0, doubles when t doubles,
  every other block is independent of t, and ^CΓ^I_{MS} = ^CΓ^I_{SM}."
        }
        CheckId::InducedEqualsBase => {
            "induced_equals_base (needs gamma, xi)
  Γ̃^h_{ji} = B^h_A (∂_j B^A_i + ^CΓ^A_{MS} B^M_j B^S_i), the tangential part of ∇̃_j B_i
  along the cross-section, must equal Γ^h_{ji}.
  residual: max |Γ̃ - Γ|."
        }
        CheckId::GaussConsistency => {
            "gauss_consistency (needs gamma, xi)
  ∂_j B^A_i + ^CΓ^A_{MS} B^M_j B^S_i - Γ^h_{ji} B^A_h = H_{ji h̄} C^A_{h̄}
  with H_{ji h̄} = ∇_j ∇_i ξ_h̄ + Σ_λ ξ_{h_1..l..h_q} R_{h_λ i j}^l.
  residual: max difference of both sides over all bundle components."
        }
        CheckId::TotallyGeodesic => {
            "totally_geodesic (needs gamma, xi)
  The cross-section is totally geodesic when H_{ji h̄} = 0, with
  H_{ji h̄} = ∇_j ∇_i ξ_h̄ + Σ_λ ξ_{h_1..l..h_q} R_{h_λ i j}^l.
  residual: max |H|. details.min_over_points is the smallest per-point max."
        }
        CheckId::CurvatureTangency => {
            "curvature_tangency (needs gamma, xi)
  The lifted curvature is tangent to the cross-section when, for all k, j, i, h̄,
    Σ_λ (∇_k R_{h_λ ij}^l - ∇_j R_{h_λ ik}^l) ξ_{..l..}
      = R_{kji}^l ∇_l ξ_h̄ + Σ_λ (R_{kj h_λ}^l ∇_i ξ_{..l..}
          - R_{h_λ ij}^l ∇_k ξ_{..l..} + R_{h_λ ik}^l ∇_j ξ_{..l..}).
  residual: max difference; details list the per-point residuals."
        }
    }
}
