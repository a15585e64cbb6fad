//! Cross-sections of the (0,q)-tensor bundle and lifts along them.
//!
//! A point of the bundle over the chart is `(x^k, t_{k1..kq})`, `n + n^q`
//! coordinates with the fibre part in rank order. Along the cross-section
//! `x ↦ (x, ξ(x))` the adapted frame is
//!
//! ```text
//! B_j = (δ^k_j ; ∂_j ξ_{k1..kq})      C_j̄ = (0 ; δ^{j1}_{k1}..δ^{jq}_{kq})
//! ```
//!
//! with closed-form inverse rows `B^h = (δ^h_i, 0)` and
//! `C^h̄ = (-∂_j ξ_{h1..hq}, δ..δ)`.

mod complex;
mod purity;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::EvalPoint;
use crate::matrix::Matrix;
use crate::tensor::{lie_derivative_cov, multi_indices, rank_of, CovariantField, VectorField};

pub use complex::{
    complete_lift_endo_on_section, verify_characterization, verify_theorem1, BundleEndomorphism,
    CharacterizationReport, LiftedStructure, Theorem1Report,
};
pub use purity::{
    is_almost_analytic, nijenhuis, nijenhuis_compose, purity_residual, slot_contraction, star,
    tachibana, tachibana_unchecked,
};

/// Which frame a [`BundleVector`]'s components refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameTag {
    /// `{∂_k, ∂_k̄}` induced by the bundle coordinates.
    Natural,
    /// The adapted `(B, C)` frame along a cross-section.
    Adapted,
}

/// `(x^k, t_{k1..kq})` with the fibre in rank order.
#[derive(Debug, Clone, PartialEq)]
pub struct BundlePoint {
    base: EvalPoint,
    fibre: Vec<f64>,
    q: usize,
}

impl BundlePoint {
    pub fn new(base: EvalPoint, q: usize, fibre: Vec<f64>) -> Result<Self> {
        let expected = base.dim().pow(q as u32);
        if fibre.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: fibre.len(),
            });
        }
        if fibre.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        Ok(Self { base, fibre, q })
    }

    pub fn base(&self) -> &EvalPoint {
        &self.base
    }

    pub fn fibre(&self) -> &[f64] {
        &self.fibre
    }

    pub fn rank(&self) -> usize {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// The same base point with the fibre scaled by `factor`.
    pub fn scaled_fibre(&self, factor: f64) -> Self {
        Self {
            base: self.base.clone(),
            fibre: self.fibre.iter().map(|t| t * factor).collect(),
            q: self.q,
        }
    }

    /// Fibre coordinate `t_{idx}`.
    pub fn t(&self, idx: &[usize]) -> f64 {
        self.fibre[rank_of(idx, self.dim())]
    }
}

/// Components of a tangent vector to the bundle, `n` horizontal and `n^q`
/// fibre entries, tagged with the frame they are expressed in.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleVector {
    pub frame: FrameTag,
    pub horizontal: Vec<f64>,
    pub fibre: Vec<f64>,
}

impl BundleVector {
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = self.horizontal.clone();
        v.extend_from_slice(&self.fibre);
        v
    }

    fn from_parts(frame: FrameTag, n: usize, all: Vec<f64>) -> Self {
        let fibre = all[n..].to_vec();
        let mut horizontal = all;
        horizontal.truncate(n);
        Self {
            frame,
            horizontal,
            fibre,
        }
    }

    /// Largest absolute component difference. Vectors in different frames
    /// are never compared.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.frame != other.frame {
            return Err(Error::FrameMismatch);
        }
        let a = self.to_vec();
        let b = other.to_vec();
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                found: b.len(),
            });
        }
        Ok(a.iter()
            .zip(&b)
            .fold(0.0, |m, (x, y)| f64::max(m, (x - y).abs())))
    }
}

/// The adapted `(B, C)` frame at one point of a cross-section.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedFrame {
    n: usize,
    /// `(n + n^q) × n`, columns `B_j`.
    pub b: Matrix,
    /// `(n + n^q) × n^q`, columns `C_j̄`.
    pub c: Matrix,
    /// `n × (n + n^q)`, rows `B^h_A`.
    pub b_inv: Matrix,
    /// `n^q × (n + n^q)`, rows `C^h̄_A`.
    pub c_inv: Matrix,
}

impl AdaptedFrame {
    /// `[B | C]`.
    pub fn frame_matrix(&self) -> Matrix {
        self.b.hstack(&self.c)
    }

    /// `[B^h ; C^h̄]`.
    pub fn inverse_matrix(&self) -> Matrix {
        self.b_inv.vstack(&self.c_inv)
    }

    /// Max entry of `[B | C]·[B^h ; C^h̄] - I`.
    pub fn product_residual(&self) -> f64 {
        let size = self.b.rows();
        self.frame_matrix()
            .mul(&self.inverse_matrix())
            .max_abs_diff(&Matrix::identity(size))
    }

    /// Re-expresses natural-frame components in the adapted frame.
    pub fn to_adapted(&self, v: &BundleVector) -> Result<BundleVector> {
        match v.frame {
            FrameTag::Adapted => Ok(v.clone()),
            FrameTag::Natural => Ok(BundleVector::from_parts(
                FrameTag::Adapted,
                self.n,
                self.inverse_matrix().mul_vec(&v.to_vec()),
            )),
        }
    }

    /// Re-expresses adapted-frame components in the natural frame.
    pub fn to_natural(&self, v: &BundleVector) -> Result<BundleVector> {
        match v.frame {
            FrameTag::Natural => Ok(v.clone()),
            FrameTag::Adapted => Ok(BundleVector::from_parts(
                FrameTag::Natural,
                self.n,
                self.frame_matrix().mul_vec(&v.to_vec()),
            )),
        }
    }
}

/// A cross-section `σ_ξ` with the first partials of `ξ` prepared.
#[derive(Debug, Clone)]
pub struct CrossSection {
    xi: CovariantField,
    dxi: Vec<CovariantField>,
}

impl CrossSection {
    pub fn new(xi: CovariantField) -> Self {
        let dxi = (0..xi.dim()).map(|j| xi.partial(j)).collect();
        Self { xi, dxi }
    }

    pub fn field(&self) -> &CovariantField {
        &self.xi
    }

    pub fn dim(&self) -> usize {
        self.xi.dim()
    }

    pub fn rank(&self) -> usize {
        self.xi.rank()
    }

    /// Fibre dimension `n^q`.
    pub fn fibre_dim(&self) -> usize {
        self.dim().pow(self.rank() as u32)
    }

    /// `σ_ξ(x) = (x, ξ(x))`.
    pub fn point(&self, x: &EvalPoint) -> Result<BundlePoint> {
        BundlePoint::new(x.clone(), self.rank(), self.xi.eval(x)?)
    }

    /// `∂_j ξ_{k̄}` at `x`, as an `n^q × n` matrix (row `k̄`, column `j`).
    pub fn jacobian(&self, x: &EvalPoint) -> Result<Matrix> {
        let cols: Vec<Vec<f64>> = self.dxi.iter().map(|d| d.eval(x)).collect::<Result<_>>()?;
        Ok(Matrix::from_fn(self.fibre_dim(), self.dim(), |k, j| {
            cols[j][k]
        }))
    }

    /// The adapted frame at `x` with its closed-form inverse.
    pub fn frame(&self, x: &EvalPoint) -> Result<AdaptedFrame> {
        let n = self.dim();
        let nq = self.fibre_dim();
        let jac = self.jacobian(x)?;
        let b = Matrix::from_fn(n + nq, n, |row, j| {
            if row < n {
                f64::from(u8::from(row == j))
            } else {
                jac[(row - n, j)]
            }
        });
        let c = Matrix::from_fn(n + nq, nq, |row, jbar| {
            f64::from(u8::from(row >= n && row - n == jbar))
        });
        let b_inv = Matrix::from_fn(n, n + nq, |h, col| f64::from(u8::from(col == h)));
        let c_inv = Matrix::from_fn(nq, n + nq, |hbar, col| {
            if col < n {
                -jac[(hbar, col)]
            } else {
                f64::from(u8::from(col - n == hbar))
            }
        });
        Ok(AdaptedFrame {
            n,
            b,
            c,
            b_inv,
            c_inv,
        })
    }

    /// `^C V` along the section in the adapted frame: `(V^j, -(L_V ξ)_{j1..jq})`.
    pub fn complete_lift_vector(&self, v: &VectorField, x: &EvalPoint) -> Result<BundleVector> {
        let lie = lie_derivative_cov(v, &self.xi)?;
        Ok(BundleVector {
            frame: FrameTag::Adapted,
            horizontal: v.eval(x)?,
            fibre: lie.eval(x)?.into_iter().map(|c| -c).collect(),
        })
    }
}

/// `σ_ξ(x) = (x, ξ(x))`.
pub fn cross_section_point(xi: &CovariantField, x: &EvalPoint) -> Result<BundlePoint> {
    BundlePoint::new(x.clone(), xi.rank(), xi.eval(x)?)
}

pub fn adapted_frame(xi: &CovariantField, x: &EvalPoint) -> Result<AdaptedFrame> {
    CrossSection::new(xi.clone()).frame(x)
}

/// `^V A` at a bundle point in the adapted frame: `(0, A_{j1..jq}(x))`.
pub fn vertical_lift(a: &CovariantField, at: &BundlePoint) -> Result<BundleVector> {
    let mut v = vertical_lift_natural(a, at)?;
    v.frame = FrameTag::Adapted;
    Ok(v)
}

/// `^V A` in the natural frame; the components coincide with the adapted ones.
pub fn vertical_lift_natural(a: &CovariantField, at: &BundlePoint) -> Result<BundleVector> {
    if a.rank() != at.rank() {
        return Err(Error::RankMismatch {
            expected: at.rank(),
            found: a.rank(),
        });
    }
    Ok(BundleVector {
        frame: FrameTag::Natural,
        horizontal: alloc::vec![0.0; at.dim()],
        fibre: a.eval(at.base())?,
    })
}

/// `^C V` in the natural frame at any bundle point:
/// `(V^j, -Σ_λ t_{j1..m..jq} ∂_{j_λ} V^m)`.
pub fn complete_lift_vector_natural(v: &VectorField, at: &BundlePoint) -> Result<BundleVector> {
    let n = at.dim();
    if v.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.dim(),
        });
    }
    let x = at.base();
    // dv[j][m] = ∂_j V^m
    let dv: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|m| v.get(m).diff(j).eval(x)).collect())
        .collect::<Result<_>>()?;
    let fibre = multi_indices(n, at.rank())
        .map(|idx| {
            let mut acc = 0.0;
            for (slot, &j) in idx.iter().enumerate() {
                let mut shifted = idx.clone();
                for m in 0..n {
                    shifted[slot] = m;
                    acc += at.t(&shifted) * dv[j][m];
                }
            }
            -acc
        })
        .collect();
    Ok(BundleVector {
        frame: FrameTag::Natural,
        horizontal: v.eval(x)?,
        fibre,
    })
}

/// `^C V` along `σ_ξ` in the adapted frame.
pub fn complete_lift_vector_on_section(
    v: &VectorField,
    xi: &CovariantField,
    x: &EvalPoint,
) -> Result<BundleVector> {
    CrossSection::new(xi.clone()).complete_lift_vector(v, x)
}
