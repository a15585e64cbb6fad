//! The complete lift of an endomorphism along a pure cross-section.
//!
//! In the adapted frame, with fibre indices in rank order,
//!
//! ```text
//! ^Cφ = | φ^k_l                  0                               |
//!       | -(Φ_φ ξ)_{l k1..kq}    φ^{r1}_{k1} δ^{r2}_{k2}..δ^{rq}_{kq} |
//! ```
//!
//! The lower-right block acts on the first fibre slot only.

use super::purity::{nijenhuis, nijenhuis_compose, purity_residual, tachibana_unchecked};
use super::{vertical_lift, BundleVector, CrossSection, FrameTag};
use crate::error::{Error, Result};
use crate::expr::EvalPoint;
use crate::matrix::Matrix;
use crate::sample::{Residual, EXACT_TOL};
use crate::tensor::{
    apply_endo_cov, lie_derivative_endo, multi_indices, unrank, CovariantField, EndomorphismField,
    VectorField,
};

/// An endomorphism of the bundle tangent space at one point, in the
/// adapted frame. The upper-right `n × n^q` block is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleEndomorphism {
    n: usize,
    matrix: Matrix,
}

impl BundleEndomorphism {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, v: &BundleVector) -> Result<BundleVector> {
        if v.frame != FrameTag::Adapted {
            return Err(Error::FrameMismatch);
        }
        let image = self.matrix.mul_vec(&v.to_vec());
        Ok(BundleVector {
            frame: FrameTag::Adapted,
            horizontal: image[..self.n].to_vec(),
            fibre: image[self.n..].to_vec(),
        })
    }

    pub fn square(&self) -> Matrix {
        self.matrix.mul(&self.matrix)
    }

    /// Max entry of `M² + I`.
    pub fn square_defect(&self) -> f64 {
        let mut sq = self.square();
        for i in 0..self.size() {
            sq[(i, i)] += 1.0;
        }
        sq.max_abs()
    }

    /// The `n^q × n` lower-left block of `M² + I` (the identity does not reach it).
    pub fn square_lower_left(&self) -> Matrix {
        let nq = self.size() - self.n;
        self.square().block(self.n, 0, nq, self.n)
    }

    pub fn upper_right_max(&self) -> f64 {
        let nq = self.size() - self.n;
        self.matrix.block(0, self.n, self.n, nq).max_abs()
    }
}

/// `^Cφ` along `σ_ξ`, with `Φ_φ ξ` prepared symbolically.
#[derive(Debug, Clone)]
pub struct LiftedStructure {
    phi: EndomorphismField,
    section: CrossSection,
    tachibana: CovariantField,
}

impl LiftedStructure {
    /// Checks purity of `ξ` on `points` before building the lift.
    pub fn new(
        phi: EndomorphismField,
        xi: CovariantField,
        points: &[EvalPoint],
        tol: f64,
    ) -> Result<Self> {
        let purity = purity_residual(&phi, &xi, points)?;
        if !purity.within(tol) {
            return Err(Error::NotPure {
                residual: purity.value,
            });
        }
        Self::new_unchecked(phi, xi)
    }

    /// Builds the block matrix without checking purity; used to exhibit the
    /// failure of the almost-complex property on non-analytic sections.
    pub fn new_unchecked(phi: EndomorphismField, xi: CovariantField) -> Result<Self> {
        if phi.dim() != xi.dim() {
            return Err(Error::DimensionMismatch {
                expected: xi.dim(),
                found: phi.dim(),
            });
        }
        let tachibana = tachibana_unchecked(&phi, &xi)?;
        Ok(Self {
            phi,
            section: CrossSection::new(xi),
            tachibana,
        })
    }

    pub fn section(&self) -> &CrossSection {
        &self.section
    }

    pub fn tachibana(&self) -> &CovariantField {
        &self.tachibana
    }

    pub fn at(&self, x: &EvalPoint) -> Result<BundleEndomorphism> {
        let n = self.section.dim();
        let q = self.section.rank();
        let nq = self.section.fibre_dim();
        let phi = self.phi.eval(x)?;
        let tach = self.tachibana.eval(x)?;
        let mut m = Matrix::zeros(n + nq, n + nq);
        for k in 0..n {
            for l in 0..n {
                m[(k, l)] = phi[k * n + l];
            }
        }
        for (kbar, k) in multi_indices(n, q).enumerate() {
            for l in 0..n {
                m[(n + kbar, l)] = -tach[l * nq + kbar];
            }
            for rbar in 0..nq {
                let r = unrank(rbar, n, q);
                if r[1..] == k[1..] {
                    m[(n + kbar, n + rbar)] = phi[r[0] * n + k[0]];
                }
            }
        }
        Ok(BundleEndomorphism { n, matrix: m })
    }
}

/// `^Cφ` at `σ_ξ(x)`; purity is checked at `x`.
pub fn complete_lift_endo_on_section(
    phi: &EndomorphismField,
    xi: &CovariantField,
    x: &EvalPoint,
) -> Result<BundleEndomorphism> {
    LiftedStructure::new(phi.clone(), xi.clone(), core::slice::from_ref(x), EXACT_TOL)?.at(x)
}

/// Residuals of the two identities that determine `^Cφ`:
///
/// * `^Cφ(^C V) = ^C(φV) + ^V((L_V φ) ∘ ξ)`
/// * `^Cφ(^V A) = ^V(φ(A))`
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterizationReport {
    pub complete_lift: Residual,
    pub vertical_lift: Residual,
}

impl CharacterizationReport {
    pub fn max(&self) -> Residual {
        let mut r = self.complete_lift.clone();
        r.merge(&self.vertical_lift);
        r
    }
}

/// Applies the block matrix to lifted vectors and compares against the
/// right-hand sides assembled from base-manifold operators.
pub fn verify_characterization(
    phi: &EndomorphismField,
    xi: &CovariantField,
    v: &VectorField,
    a: &CovariantField,
    points: &[EvalPoint],
    tol: f64,
) -> Result<CharacterizationReport> {
    let n = xi.dim();
    for found in [phi.dim(), v.dim(), a.dim()] {
        if found != n {
            return Err(Error::DimensionMismatch { expected: n, found });
        }
    }
    if a.rank() != xi.rank() {
        return Err(Error::RankMismatch {
            expected: xi.rank(),
            found: a.rank(),
        });
    }
    let lifted = LiftedStructure::new(phi.clone(), xi.clone(), points, tol)?;
    let section = lifted.section();
    let phi_v = v.apply(phi);
    let lie_phi = lie_derivative_endo(v, phi)?;
    let correction = apply_endo_cov(&lie_phi, xi)?;
    let phi_a = apply_endo_cov(phi, a)?;

    let mut complete = Residual::new();
    let mut vertical = Residual::new();
    for x in points {
        let m = lifted.at(x)?;
        let at = section.point(x)?;

        let lhs = m.apply(&section.complete_lift_vector(v, x)?)?;
        let mut rhs = section.complete_lift_vector(&phi_v, x)?;
        for (f, c) in rhs.fibre.iter_mut().zip(correction.eval(x)?) {
            *f += c;
        }
        complete.observe(lhs.max_abs_diff(&rhs)?, x);

        let lhs = m.apply(&vertical_lift(a, &at)?)?;
        let rhs = vertical_lift(&phi_a, &at)?;
        vertical.observe(lhs.max_abs_diff(&rhs)?, x);
    }
    Ok(CharacterizationReport {
        complete_lift: complete,
        vertical_lift: vertical,
    })
}

/// Everything needed to judge the almost-complex lift on one section.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Report {
    /// `|φ² + I|`
    pub almost_complex: Residual,
    /// Disagreement between slot contractions.
    pub purity: Residual,
    /// `|Φ_φ ξ|`
    pub tachibana: Residual,
    /// `|N_φ ∘ ξ|`
    pub nijenhuis_xi: Residual,
    /// `|(^Cφ)² + I|`
    pub lift_square: Residual,
}

impl Theorem1Report {
    /// `φ` is almost complex and `ξ` is almost analytic.
    pub fn hypotheses_hold(&self, tol: f64) -> bool {
        self.almost_complex.within(tol) && self.purity.within(tol) && self.tachibana.within(tol)
    }

    /// `N_φ ∘ ξ = 0` and `(^Cφ)² = -I`.
    pub fn conclusion_holds(&self, tol: f64) -> bool {
        self.nijenhuis_xi.within(tol) && self.lift_square.within(tol)
    }

    /// The implication hypotheses ⇒ conclusion.
    pub fn passes(&self, tol: f64) -> bool {
        !self.hypotheses_hold(tol) || self.conclusion_holds(tol)
    }

    /// The conclusion residuals combined.
    pub fn conclusion_residual(&self) -> Residual {
        let mut r = self.nijenhuis_xi.clone();
        r.merge(&self.lift_square);
        r
    }
}

/// Evaluates every hypothesis and conclusion of the almost-complex lift
/// on `points`. Hypothesis failures are reported, not raised.
pub fn verify_theorem1(
    phi: &EndomorphismField,
    xi: &CovariantField,
    points: &[EvalPoint],
) -> Result<Theorem1Report> {
    let almost_complex = phi.almost_complex_residual(points)?;
    let purity = purity_residual(phi, xi, points)?;
    let lifted = LiftedStructure::new_unchecked(phi.clone(), xi.clone())?;
    let tachibana = lifted.tachibana().max_abs(points)?;
    let nijenhuis_xi = nijenhuis_compose(&nijenhuis(phi), xi)?.max_abs(points)?;
    let mut lift_square = Residual::new();
    for x in points {
        lift_square.observe(lifted.at(x)?.square_defect(), x);
    }
    Ok(Theorem1Report {
        almost_complex,
        purity,
        tachibana,
        nijenhuis_xi,
        lift_square,
    })
}
