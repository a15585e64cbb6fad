//! The complete lift of a torsion-free connection to the (0,q)-tensor
//! bundle, the connection it induces on a cross-section, the Gauss tensor
//! of the section and the curvature tangency condition.
//!
//! Bundle-level objects are assembled numerically at each point from
//! symbolic base data (`Γ`, `∂Γ`, `R`, `∇R`, derivatives of `ξ`).
//!
//! In the natural frame the only nonzero blocks of `^CΓ` are
//!
//! ```text
//! ^CΓ^i_{ms}  = Γ^i_{ms}
//! ^CΓ^ī_{ms̄}  = -Σ_c Γ^{s_c}_{m i_c} Π_{d≠c} δ^{s_d}_{i_d}
//! ^CΓ^ī_{m̄s}  = -Σ_c Γ^{m_c}_{s i_c} Π_{d≠c} δ^{m_d}_{i_d}
//! ^CΓ^ī_{ms}  =  Σ_c (-∂_m Γ^a_{s i_c} + Γ^r_{m i_c} Γ^a_{sr} + Γ^r_{ms} Γ^a_{r i_c}) t_{i1..a..iq}
//!              + Σ_{b≠c} Γ^l_{m i_c} Γ^r_{s i_b} t_{i1..r..l..iq}      (r in slot b, l in slot c)
//!              + Σ_d R_{i_d s m}^l t_{i1..l..iq}                       (l in slot d)
//! ```

use alloc::vec;
use alloc::vec::Vec;

use crate::bundle::{BundlePoint, CrossSection};
use crate::error::{Error, Result};
use crate::expr::{EvalPoint, ScalarExpr};
use crate::sample::{Residual, Verdict, EXACT_TOL};
use crate::tensor::{
    covariant_derivative_cov, covariant_derivative_curvature, curvature, multi_indices, rank_of,
    with_slot, ConnectionField, CovariantField, CurvatureDerivativeField, CurvatureField,
};

/// How the quadratic double sum of `^CΓ^ī_{ms}` is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DoubleSum {
    /// Ordered pairs `b ≠ c`, each product paired with its own placement of
    /// `r` and `l`. This is the reading the Gauss equation requires.
    #[default]
    Symmetrized,
    /// `½ Σ_{b≠c} (Γ^l_{m i_c} Γ^r_{s i_b} + Γ^l_{m i_b} Γ^r_{s i_c}) t_{..r@b..l@c..}`,
    /// both products sharing one placement. Kept for convention tests.
    SharedPlacement,
}

/// Knobs for alternative readings of the lifted coefficients. The defaults
/// are the ones consistent with the Gauss equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftOptions {
    /// Multiplies the curvature term of `^CΓ^ī_{ms}`.
    pub curvature_sign: f64,
    pub double_sum: DoubleSum,
}

impl Default for LiftOptions {
    fn default() -> Self {
        Self {
            curvature_sign: 1.0,
            double_sum: DoubleSum::Symmetrized,
        }
    }
}

/// Numeric values of `Γ`, `∂Γ` and `R` at one base point.
struct BaseValues {
    n: usize,
    gamma: Vec<f64>,
    dgamma: Vec<Vec<f64>>,
    r: Vec<f64>,
}

impl BaseValues {
    fn g(&self, h: usize, j: usize, i: usize) -> f64 {
        self.gamma[(h * self.n + j) * self.n + i]
    }

    fn dg(&self, m: usize, h: usize, j: usize, i: usize) -> f64 {
        self.dgamma[m][(h * self.n + j) * self.n + i]
    }

    fn r(&self, k: usize, j: usize, i: usize, l: usize) -> f64 {
        let n = self.n;
        self.r[((k * n + j) * n + i) * n + l]
    }
}

/// `^CΓ` at one bundle point, in the natural frame. Only the four blocks
/// that can be nonzero are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedConnectionCoeffs {
    n: usize,
    q: usize,
    nq: usize,
    /// `Γ^i_{ms}` at `[(i·n + m)·n + s]`.
    base: Vec<f64>,
    /// `^CΓ^ī_{ms̄}` at `[(ī·n + m)·n^q + s̄]`.
    mixed: Vec<f64>,
    /// `^CΓ^ī_{m̄s}` at `[(ī·n^q + m̄)·n + s]`.
    mixed_rev: Vec<f64>,
    /// `^CΓ^ī_{ms}` at `[(ī·n + m)·n + s]`.
    source: Vec<f64>,
}

impl LiftedConnectionCoeffs {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.q
    }

    /// `n + n^q`.
    pub fn total_dim(&self) -> usize {
        self.n + self.nq
    }

    pub fn base(&self, i: usize, m: usize, s: usize) -> f64 {
        self.base[(i * self.n + m) * self.n + s]
    }

    pub fn mixed(&self, ibar: usize, m: usize, sbar: usize) -> f64 {
        self.mixed[(ibar * self.n + m) * self.nq + sbar]
    }

    pub fn mixed_rev(&self, ibar: usize, mbar: usize, s: usize) -> f64 {
        self.mixed_rev[(ibar * self.nq + mbar) * self.n + s]
    }

    pub fn source(&self, ibar: usize, m: usize, s: usize) -> f64 {
        self.source[(ibar * self.n + m) * self.n + s]
    }

    /// `^CΓ^I_{MS}` with bundle indices in `0..n + n^q`; indices `≥ n` are
    /// fibre indices in rank order. Structural zeros are returned as `0.0`.
    pub fn get(&self, upper: usize, m: usize, s: usize) -> f64 {
        let n = self.n;
        match (upper < n, m < n, s < n) {
            (true, true, true) => self.base(upper, m, s),
            (true, _, _) => 0.0,
            (false, true, true) => self.source(upper - n, m, s),
            (false, true, false) => self.mixed(upper - n, m, s - n),
            (false, false, true) => self.mixed_rev(upper - n, m - n, s),
            (false, false, false) => 0.0,
        }
    }

    /// Max of `|^CΓ^ī_{ms} - ^CΓ^ī_{sm}|`.
    pub fn source_asymmetry(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for ibar in 0..self.nq {
            for m in 0..n {
                for s in 0..n {
                    worst = worst.max((self.source(ibar, m, s) - self.source(ibar, s, m)).abs());
                }
            }
        }
        worst
    }
}

/// `^CΓ` prepared from symbolic `Γ`, `∂Γ` and `R`, ready to be evaluated at
/// bundle points.
#[derive(Debug, Clone)]
pub struct ConnectionLift {
    gamma: ConnectionField,
    dgamma: Vec<ConnectionField>,
    curvature: CurvatureField,
    options: LiftOptions,
}

impl ConnectionLift {
    pub fn new(gamma: ConnectionField) -> Self {
        Self::with_options(gamma, LiftOptions::default())
    }

    pub fn with_options(gamma: ConnectionField, options: LiftOptions) -> Self {
        let dgamma = (0..gamma.dim()).map(|m| gamma.partial(m)).collect();
        let curvature = curvature(&gamma);
        Self {
            gamma,
            dgamma,
            curvature,
            options,
        }
    }

    pub fn connection(&self) -> &ConnectionField {
        &self.gamma
    }

    pub fn curvature(&self) -> &CurvatureField {
        &self.curvature
    }

    pub fn options(&self) -> LiftOptions {
        self.options
    }

    fn base_values(&self, x: &EvalPoint) -> Result<BaseValues> {
        if x.dim() != self.gamma.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.gamma.dim(),
                found: x.dim(),
            });
        }
        let values = BaseValues {
            n: self.gamma.dim(),
            gamma: self.gamma.eval(x)?,
            dgamma: self
                .dgamma
                .iter()
                .map(|d| d.eval(x))
                .collect::<Result<_>>()?,
            r: self.curvature.eval(x)?,
        };
        let n = values.n;
        let mut torsion = 0.0f64;
        for h in 0..n {
            for j in 0..n {
                for i in 0..n {
                    torsion = torsion.max((values.g(h, j, i) - values.g(h, i, j)).abs());
                }
            }
        }
        if torsion > EXACT_TOL {
            return Err(Error::Torsion { residual: torsion });
        }
        Ok(values)
    }

    /// All blocks of `^CΓ` at `(x, t)`. Rejects `Γ` with torsion at `x`.
    pub fn at(&self, point: &BundlePoint) -> Result<LiftedConnectionCoeffs> {
        let v = self.base_values(point.base())?;
        let n = v.n;
        let q = point.rank();
        let nq = n.pow(q as u32);
        let t = |idx: &[usize]| point.fibre()[rank_of(idx, n)];

        let mut base = vec![0.0; n * n * n];
        for i in 0..n {
            for m in 0..n {
                for s in 0..n {
                    base[(i * n + m) * n + s] = v.g(i, m, s);
                }
            }
        }

        // -Σ_c Γ^{u_c}_{m i_c} with the remaining slots of u and i equal
        let lowered = |ibar: &[usize], m: usize, u: &[usize]| -> f64 {
            (0..q)
                .filter(|&c| (0..q).all(|d| d == c || u[d] == ibar[d]))
                .map(|c| -v.g(u[c], m, ibar[c]))
                .sum()
        };
        let mut mixed = vec![0.0; nq * n * nq];
        let mut mixed_rev = vec![0.0; nq * nq * n];
        let mut source = vec![0.0; nq * n * n];
        for (ibar, i) in multi_indices(n, q).enumerate() {
            for (ubar, u) in multi_indices(n, q).enumerate() {
                for m in 0..n {
                    let value = lowered(&i, m, &u);
                    mixed[(ibar * n + m) * nq + ubar] = value;
                    mixed_rev[(ibar * nq + ubar) * n + m] = value;
                }
            }
            for m in 0..n {
                for s in 0..n {
                    source[(ibar * n + m) * n + s] = self.source_entry(&v, &i, m, s, &t);
                }
            }
        }
        Ok(LiftedConnectionCoeffs {
            n,
            q,
            nq,
            base,
            mixed,
            mixed_rev,
            source,
        })
    }

    fn source_entry(
        &self,
        v: &BaseValues,
        i: &[usize],
        m: usize,
        s: usize,
        t: &impl Fn(&[usize]) -> f64,
    ) -> f64 {
        let n = v.n;
        let q = i.len();
        let mut total = 0.0;
        for c in 0..q {
            for a in 0..n {
                let mut coef = -v.dg(m, a, s, i[c]);
                for r in 0..n {
                    coef += v.g(r, m, i[c]) * v.g(a, s, r) + v.g(r, m, s) * v.g(a, r, i[c]);
                }
                total += coef * t(&with_slot(i, c, a));
            }
        }
        for b in 0..q {
            for c in (0..q).filter(|&c| c != b) {
                for l in 0..n {
                    for r in 0..n {
                        let placed = t(&with_slot(&with_slot(i, b, r), c, l));
                        total += match self.options.double_sum {
                            DoubleSum::Symmetrized => v.g(l, m, i[c]) * v.g(r, s, i[b]) * placed,
                            DoubleSum::SharedPlacement => {
                                0.5 * (v.g(l, m, i[c]) * v.g(r, s, i[b])
                                    + v.g(l, m, i[b]) * v.g(r, s, i[c]))
                                    * placed
                            }
                        };
                    }
                }
            }
        }
        let mut curv = 0.0;
        for d in 0..q {
            for l in 0..n {
                curv += t(&with_slot(i, d, l)) * v.r(i[d], s, m, l);
            }
        }
        total + self.options.curvature_sign * curv
    }
}

/// `^CΓ` at `(x, t)` with the default reading.
pub fn complete_lift_connection(
    gamma: &ConnectionField,
    at: &BundlePoint,
) -> Result<LiftedConnectionCoeffs> {
    ConnectionLift::new(gamma.clone()).at(at)
}

/// `H_{ji h̄} = ∇_j ∇_i ξ_{h1..hq} + Σ_λ ξ_{h1..l..hq} R_{h_λ i j}^l`.
#[derive(Debug, Clone)]
pub struct GaussTensor {
    q: usize,
    h: CovariantField,
}

impl GaussTensor {
    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn rank(&self) -> usize {
        self.q
    }

    /// The components as a rank `q + 2` field indexed `(j, i, h1, .., hq)`.
    pub fn field(&self) -> &CovariantField {
        &self.h
    }

    pub fn get(&self, j: usize, i: usize, h: &[usize]) -> &ScalarExpr {
        let mut idx = Vec::with_capacity(h.len() + 2);
        idx.push(j);
        idx.push(i);
        idx.extend_from_slice(h);
        self.h.get(&idx)
    }

    pub fn eval(&self, x: &EvalPoint) -> Result<Vec<f64>> {
        self.h.eval(x)
    }

    pub fn max_abs(&self, points: &[EvalPoint]) -> Result<Residual> {
        self.h.max_abs(points)
    }

    /// Sampled max of `|H_{ji h̄} - H_{ij h̄}|`.
    pub fn asymmetry(&self, points: &[EvalPoint]) -> Result<Residual> {
        let n = self.dim();
        let nq = n.pow(self.q as u32);
        let mut r = Residual::new();
        for p in points {
            let v = self.eval(p)?;
            let mut worst = 0.0f64;
            for j in 0..n {
                for i in 0..n {
                    for h in 0..nq {
                        let a = v[(j * n + i) * nq + h];
                        let b = v[(i * n + j) * nq + h];
                        worst = worst.max((a - b).abs());
                    }
                }
            }
            r.observe(worst, p);
        }
        Ok(r)
    }
}

fn curvature_contraction(
    xi: &CovariantField,
    r: &CurvatureField,
    h: &[usize],
    i: usize,
    j: usize,
) -> ScalarExpr {
    let n = xi.dim();
    ScalarExpr::sum((0..h.len()).flat_map(|lambda| {
        (0..n).map(move |l| xi.get(&with_slot(h, lambda, l)) * r.get(h[lambda], i, j, l))
    }))
}

/// The Gauss tensor of `σ_ξ` for the symmetric connection `Γ`.
pub fn gauss_second_fundamental(
    gamma: &ConnectionField,
    xi: &CovariantField,
) -> Result<GaussTensor> {
    let r = curvature(gamma);
    gauss_with_curvature(gamma, xi, &r)
}

fn gauss_with_curvature(
    gamma: &ConnectionField,
    xi: &CovariantField,
    r: &CurvatureField,
) -> Result<GaussTensor> {
    let second = covariant_derivative_cov(gamma, &covariant_derivative_cov(gamma, xi)?)?;
    let q = xi.rank();
    let h = CovariantField::from_fn(xi.dim(), q + 2, |idx| {
        let (j, i, hs) = (idx[0], idx[1], &idx[2..]);
        second.get(idx) + curvature_contraction(xi, r, hs, i, j)
    });
    Ok(GaussTensor { q, h })
}

/// Everything about `σ_ξ` and `^CΓ` needed at sample points, prepared once.
#[derive(Debug, Clone)]
pub struct SectionGeometry {
    lift: ConnectionLift,
    section: CrossSection,
    /// `∂_j ∂_i ξ` at `[j·n + i]`.
    second_partials: Vec<CovariantField>,
    gauss: GaussTensor,
}

impl SectionGeometry {
    pub fn new(gamma: ConnectionField, xi: CovariantField) -> Result<Self> {
        Self::with_options(gamma, xi, LiftOptions::default())
    }

    pub fn with_options(
        gamma: ConnectionField,
        xi: CovariantField,
        options: LiftOptions,
    ) -> Result<Self> {
        let n = xi.dim();
        if gamma.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: gamma.dim(),
            });
        }
        let lift = ConnectionLift::with_options(gamma, options);
        let gauss = gauss_with_curvature(lift.connection(), &xi, lift.curvature())?;
        let first: Vec<CovariantField> = (0..n).map(|i| xi.partial(i)).collect();
        let second_partials = (0..n)
            .flat_map(|j| first.iter().map(move |d| d.partial(j)))
            .collect();
        Ok(Self {
            lift,
            section: CrossSection::new(xi),
            second_partials,
            gauss,
        })
    }

    pub fn lift(&self) -> &ConnectionLift {
        &self.lift
    }

    pub fn gauss(&self) -> &GaussTensor {
        &self.gauss
    }

    /// `^CΓ` at `σ_ξ(x)`.
    pub fn coeffs(&self, x: &EvalPoint) -> Result<LiftedConnectionCoeffs> {
        self.lift.at(&self.section.point(x)?)
    }

    /// `∂_j B^A_i + ^CΓ^A_{CB} B^C_j B^B_i` at `x`, indexed `[(A·n + j)·n + i]`.
    fn frame_derivative(&self, x: &EvalPoint) -> Result<(Vec<f64>, crate::bundle::AdaptedFrame)> {
        let n = self.section.dim();
        let nq = self.section.fibre_dim();
        let size = n + nq;
        let coeffs = self.coeffs(x)?;
        let frame = self.section.frame(x)?;
        let second: Vec<Vec<f64>> = self
            .second_partials
            .iter()
            .map(|f| f.eval(x))
            .collect::<Result<_>>()?;
        let b = &frame.b;
        let mut out = vec![0.0; size * n * n];
        for a in 0..size {
            for j in 0..n {
                for i in 0..n {
                    let mut value = if a >= n {
                        second[j * n + i][a - n]
                    } else {
                        0.0
                    };
                    for c in 0..size {
                        let bcj = b[(c, j)];
                        if bcj == 0.0 {
                            continue;
                        }
                        for bb in 0..size {
                            value += coeffs.get(a, c, bb) * bcj * b[(bb, i)];
                        }
                    }
                    out[(a * n + j) * n + i] = value;
                }
            }
        }
        Ok((out, frame))
    }

    /// `Γ̃^h_{ji} = (∂_j B^A_i + ^CΓ^A_{CB} B^C_j B^B_i) B^h_A` at `x`, laid out
    /// like [`ConnectionField::eval`].
    pub fn induced_connection(&self, x: &EvalPoint) -> Result<Vec<f64>> {
        let n = self.section.dim();
        let size = n + self.section.fibre_dim();
        let (d, frame) = self.frame_derivative(x)?;
        let mut out = vec![0.0; n * n * n];
        for h in 0..n {
            for j in 0..n {
                for i in 0..n {
                    out[(h * n + j) * n + i] = (0..size)
                        .map(|a| d[(a * n + j) * n + i] * frame.b_inv[(h, a)])
                        .sum();
                }
            }
        }
        Ok(out)
    }

    /// Max over `A, j, i` of `|D^A_{ji} - H_{ji h̄} C^A_h̄|` at `x`, where
    /// `D^A_{ji} = ∂_j B^A_i + ^CΓ^A_{CB} B^C_j B^B_i - Γ^h_{ji} B^A_h`.
    pub fn gauss_residual(&self, x: &EvalPoint) -> Result<f64> {
        let n = self.section.dim();
        let nq = self.section.fibre_dim();
        let size = n + nq;
        let (d, frame) = self.frame_derivative(x)?;
        let gamma = self.lift.connection().eval(x)?;
        let h = self.gauss.eval(x)?;
        let mut worst = 0.0f64;
        for a in 0..size {
            for j in 0..n {
                for i in 0..n {
                    let tangential: f64 = (0..n)
                        .map(|k| gamma[(k * n + j) * n + i] * frame.b[(a, k)])
                        .sum();
                    let normal: f64 = (0..nq)
                        .map(|hbar| h[(j * n + i) * nq + hbar] * frame.c[(a, hbar)])
                        .sum();
                    let lhs = d[(a * n + j) * n + i] - tangential;
                    worst = worst.max((lhs - normal).abs());
                }
            }
        }
        Ok(worst)
    }
}

/// `Γ̃` induced on `σ_ξ` at `x`, laid out like [`ConnectionField::eval`].
pub fn induced_connection(
    gamma: &ConnectionField,
    xi: &CovariantField,
    x: &EvalPoint,
) -> Result<Vec<f64>> {
    SectionGeometry::new(gamma.clone(), xi.clone())?.induced_connection(x)
}

/// Residual of the Gauss equation at `x`; it vanishes when the lifted
/// coefficients and the Gauss tensor use the same curvature convention.
pub fn gauss_consistency_check(
    gamma: &ConnectionField,
    xi: &CovariantField,
    x: &EvalPoint,
) -> Result<f64> {
    SectionGeometry::new(gamma.clone(), xi.clone())?.gauss_residual(x)
}

/// `σ_ξ` is totally geodesic when the Gauss tensor vanishes.
pub fn is_totally_geodesic(
    gamma: &ConnectionField,
    xi: &CovariantField,
    points: &[EvalPoint],
    tol: f64,
) -> Result<Verdict> {
    let residual = gauss_second_fundamental(gamma, xi)?.max_abs(points)?;
    Ok(Verdict::from_residual(residual, tol))
}

/// Both sides of the curvature tangency condition, prepared symbolically.
#[derive(Debug, Clone)]
pub struct CurvatureTangency {
    n: usize,
    q: usize,
    xi: CovariantField,
    nabla_xi: CovariantField,
    r: CurvatureField,
    nabla_r: CurvatureDerivativeField,
}

/// Per-point and global outcome of the tangency check.
#[derive(Debug, Clone, PartialEq)]
pub struct TangencyReport {
    pub verdict: Verdict,
    /// Max `|LHS - RHS|` at each point, in input order.
    pub per_point: Vec<f64>,
    /// Largest `|LHS|` and `|RHS|` seen.
    pub lhs_max: f64,
    pub rhs_max: f64,
}

impl CurvatureTangency {
    pub fn new(gamma: &ConnectionField, xi: CovariantField) -> Result<Self> {
        let r = curvature(gamma);
        let nabla_r = covariant_derivative_curvature(gamma, &r)?;
        let nabla_xi = covariant_derivative_cov(gamma, &xi)?;
        Ok(Self {
            n: xi.dim(),
            q: xi.rank(),
            xi,
            nabla_xi,
            r,
            nabla_r,
        })
    }

    /// `(LHS, RHS)` at `x`, each indexed `[((k·n + j)·n + i)·n^q + h̄]`:
    ///
    /// ```text
    /// LHS = Σ_λ (∇_k R_{h_λ ij}^l - ∇_j R_{h_λ ik}^l) ξ_{..l..}
    /// RHS = R_{kji}^l ∇_l ξ_h̄ + Σ_λ R_{kjh_λ}^l ∇_i ξ_{..l..}
    ///     - Σ_λ R_{h_λ ij}^l ∇_k ξ_{..l..} + Σ_λ R_{h_λ ik}^l ∇_j ξ_{..l..}
    /// ```
    pub fn sides(&self, x: &EvalPoint) -> Result<(Vec<f64>, Vec<f64>)> {
        let (n, q) = (self.n, self.q);
        let nq = n.pow(q as u32);
        let xi = self.xi.eval(x)?;
        let dxi = self.nabla_xi.eval(x)?;
        let r = self.r.eval(x)?;
        let dr = self.nabla_r.eval(x)?;
        let r_at = |k: usize, j: usize, i: usize, l: usize| r[((k * n + j) * n + i) * n + l];
        let dr_at = |k: usize, h: usize, i: usize, j: usize, l: usize| {
            dr[(((k * n + h) * n + i) * n + j) * n + l]
        };
        let xi_at = |idx: &[usize]| xi[rank_of(idx, n)];
        let dxi_at = |d: usize, idx: &[usize]| dxi[d * nq + rank_of(idx, n)];

        let mut lhs = vec![0.0; n * n * n * nq];
        let mut rhs = vec![0.0; n * n * n * nq];
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    for (hbar, h) in multi_indices(n, q).enumerate() {
                        let mut left = 0.0;
                        let mut right = 0.0;
                        for l in 0..n {
                            right += r_at(k, j, i, l) * dxi_at(l, &h);
                            for lambda in 0..q {
                                let hl = with_slot(&h, lambda, l);
                                let hlam = h[lambda];
                                left += (dr_at(k, hlam, i, j, l) - dr_at(j, hlam, i, k, l))
                                    * xi_at(&hl);
                                right += r_at(k, j, hlam, l) * dxi_at(i, &hl)
                                    - r_at(hlam, i, j, l) * dxi_at(k, &hl)
                                    + r_at(hlam, i, k, l) * dxi_at(j, &hl);
                            }
                        }
                        let at = ((k * n + j) * n + i) * nq + hbar;
                        lhs[at] = left;
                        rhs[at] = right;
                    }
                }
            }
        }
        Ok((lhs, rhs))
    }

    pub fn check(&self, points: &[EvalPoint], tol: f64) -> Result<TangencyReport> {
        let mut residual = Residual::new();
        let mut per_point = Vec::with_capacity(points.len());
        let (mut lhs_max, mut rhs_max) = (0.0f64, 0.0f64);
        for p in points {
            let (lhs, rhs) = self.sides(p)?;
            let worst = lhs
                .iter()
                .zip(&rhs)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            lhs_max = lhs.iter().fold(lhs_max, |m, v| m.max(v.abs()));
            rhs_max = rhs.iter().fold(rhs_max, |m, v| m.max(v.abs()));
            residual.observe(worst, p);
            per_point.push(worst);
        }
        Ok(TangencyReport {
            verdict: Verdict::from_residual(residual, tol),
            per_point,
            lhs_max,
            rhs_max,
        })
    }
}

/// Decides the curvature tangency condition on `points`.
pub fn curvature_tangency_residual(
    gamma: &ConnectionField,
    xi: &CovariantField,
    points: &[EvalPoint],
    tol: f64,
) -> Result<TangencyReport> {
    CurvatureTangency::new(gamma, xi.clone())?.check(points, tol)
}
