//! Component fields on a chart and the classical operators acting on them.
//!
//! Every field stores its components as a flat, row-major array of
//! [`ScalarExpr`] indexed by a tuple of zero-based indices in `0..n`.

mod index;
mod ops;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::{EvalPoint, ScalarExpr};
use crate::sample::Residual;

pub(crate) use index::with_slot;
pub use index::{multi_indices, rank_of, unrank, MultiIndex};
pub use ops::{
    apply_endo_cov, covariant_derivative_cov, covariant_derivative_curvature, curvature,
    lie_derivative_cov, lie_derivative_endo,
};

/// Largest supported base dimension.
pub const MAX_DIM: usize = 4;
/// Largest supported bundle rank `q`.
pub const MAX_RANK: usize = 3;

/// Checks `1 <= n <= 4` and `1 <= q <= 3`.
pub fn check_sizes(n: usize, q: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&n) && (1..=MAX_RANK).contains(&q) {
        Ok(())
    } else {
        Err(Error::UnsupportedSize { n, q })
    }
}

/// Row-major array of expressions with `arity` indices, each in `0..n`.
#[derive(Debug, Clone, PartialEq)]
struct Components {
    n: usize,
    arity: usize,
    exprs: Vec<ScalarExpr>,
}

impl Components {
    fn new(n: usize, arity: usize, exprs: Vec<ScalarExpr>) -> Result<Self> {
        let expected = n.pow(arity as u32);
        if exprs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: exprs.len(),
            });
        }
        for e in &exprs {
            if let Some(axis) = e.max_axis() {
                if axis >= n {
                    return Err(Error::VariableOutOfRange {
                        index: axis + 1,
                        dim: n,
                    });
                }
            }
        }
        Ok(Self { n, arity, exprs })
    }

    fn from_fn(n: usize, arity: usize, mut f: impl FnMut(&[usize]) -> ScalarExpr) -> Self {
        let exprs = multi_indices(n, arity).map(|idx| f(&idx)).collect();
        Self { n, arity, exprs }
    }

    fn get(&self, idx: &[usize]) -> &ScalarExpr {
        debug_assert_eq!(idx.len(), self.arity);
        &self.exprs[rank_of(idx, self.n)]
    }

    fn eval(&self, point: &EvalPoint) -> Result<Vec<f64>> {
        if point.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: point.dim(),
            });
        }
        self.exprs.iter().map(|e| e.eval(point)).collect()
    }

    fn map(&self, f: impl FnMut(&ScalarExpr) -> ScalarExpr) -> Self {
        Self {
            n: self.n,
            arity: self.arity,
            exprs: self.exprs.iter().map(f).collect(),
        }
    }
}

macro_rules! field_common {
    ($ty:ident) => {
        impl $ty {
            /// Base dimension `n`.
            pub fn dim(&self) -> usize {
                self.c.n
            }

            /// All components in row-major order.
            pub fn components(&self) -> &[ScalarExpr] {
                &self.c.exprs
            }

            /// All components evaluated at `point`, row-major.
            pub fn eval(&self, point: &EvalPoint) -> Result<Vec<f64>> {
                self.c.eval(point)
            }

            /// Largest absolute component over `points`.
            pub fn max_abs(&self, points: &[EvalPoint]) -> Result<Residual> {
                let mut r = Residual::new();
                for p in points {
                    r.observe_all(self.eval(p)?, p);
                }
                Ok(r)
            }

            /// Largest absolute componentwise difference over `points`.
            pub fn max_abs_diff(&self, other: &Self, points: &[EvalPoint]) -> Result<Residual> {
                if self.c.exprs.len() != other.c.exprs.len() {
                    return Err(Error::DimensionMismatch {
                        expected: self.c.exprs.len(),
                        found: other.c.exprs.len(),
                    });
                }
                let mut r = Residual::new();
                for p in points {
                    let a = self.eval(p)?;
                    let b = other.eval(p)?;
                    r.observe_all(a.iter().zip(&b).map(|(x, y)| x - y), p);
                }
                Ok(r)
            }
        }
    };
}

/// A (0,q)-tensor field `A_{j1..jq}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovariantField {
    c: Components,
}

field_common!(CovariantField);

impl CovariantField {
    /// Components in rank order (see [`rank_of`]). `q` must be at least 1.
    pub fn new(n: usize, q: usize, exprs: Vec<ScalarExpr>) -> Result<Self> {
        if q == 0 {
            return Err(Error::UnsupportedSize { n, q });
        }
        Ok(Self {
            c: Components::new(n, q, exprs)?,
        })
    }

    pub fn from_fn(n: usize, q: usize, f: impl FnMut(&[usize]) -> ScalarExpr) -> Self {
        assert!(q > 0, "covariant fields need q >= 1");
        Self {
            c: Components::from_fn(n, q, f),
        }
    }

    pub fn zero(n: usize, q: usize) -> Self {
        Self::from_fn(n, q, |_| ScalarExpr::zero())
    }

    pub fn rank(&self) -> usize {
        self.c.arity
    }

    pub fn get(&self, idx: &[usize]) -> &ScalarExpr {
        self.c.get(idx)
    }

    /// Componentwise `∂_axis`.
    pub fn partial(&self, axis: usize) -> Self {
        Self {
            c: self.c.map(|e| e.diff(axis)),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.dim(), self.rank()), (other.dim(), other.rank()));
        Self::from_fn(self.dim(), self.rank(), |idx| {
            self.get(idx) + other.get(idx)
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        let k = ScalarExpr::constant(factor);
        Self {
            c: self.c.map(|e| e * &k),
        }
    }
}

/// A vector field `V^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    c: Components,
}

field_common!(VectorField);

impl VectorField {
    pub fn new(n: usize, exprs: Vec<ScalarExpr>) -> Result<Self> {
        Ok(Self {
            c: Components::new(n, 1, exprs)?,
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize) -> ScalarExpr) -> Self {
        Self {
            c: Components::from_fn(n, 1, |idx| f(idx[0])),
        }
    }

    pub fn get(&self, i: usize) -> &ScalarExpr {
        &self.c.exprs[i]
    }

    /// `φ(V)^i = φ^i_j V^j`.
    pub fn apply(&self, phi: &EndomorphismField) -> Self {
        let n = self.dim();
        Self::from_fn(n, |i| {
            ScalarExpr::sum((0..n).map(|j| phi.get(i, j) * self.get(j)))
        })
    }
}

/// A (1,1)-tensor field; `get(i, j)` is `φ^i_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct EndomorphismField {
    c: Components,
}

field_common!(EndomorphismField);

impl EndomorphismField {
    /// Row-major components: entry `i * n + j` is `φ^i_j`.
    pub fn new(n: usize, exprs: Vec<ScalarExpr>) -> Result<Self> {
        Ok(Self {
            c: Components::new(n, 2, exprs)?,
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> ScalarExpr) -> Self {
        Self {
            c: Components::from_fn(n, 2, |idx| f(idx[0], idx[1])),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| {
            ScalarExpr::constant(if i == j { 1.0 } else { 0.0 })
        })
    }

    /// The standard complex structure on the plane: `φ^2_1 = 1`, `φ^1_2 = -1`.
    pub fn standard_complex_r2() -> Self {
        Self::from_fn(2, |i, j| match (i, j) {
            (1, 0) => ScalarExpr::one(),
            (0, 1) => ScalarExpr::constant(-1.0),
            _ => ScalarExpr::zero(),
        })
    }

    pub fn get(&self, i: usize, j: usize) -> &ScalarExpr {
        &self.c.exprs[i * self.c.n + j]
    }

    /// `(self ∘ other)^i_j = self^i_m other^m_j`.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.dim();
        Self::from_fn(n, |i, j| {
            ScalarExpr::sum((0..n).map(|m| self.get(i, m) * other.get(m, j)))
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.dim(), |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn partial(&self, axis: usize) -> Self {
        Self {
            c: self.c.map(|e| e.diff(axis)),
        }
    }

    /// Sampled max of `|φ² + I|`.
    pub fn almost_complex_residual(&self, points: &[EvalPoint]) -> Result<Residual> {
        self.compose(self)
            .add(&Self::identity(self.dim()))
            .max_abs(points)
    }
}

/// Christoffel symbols; `get(h, j, i)` is `Γ^h_{ji}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionField {
    c: Components,
    symmetric: bool,
}

field_common!(ConnectionField);

impl ConnectionField {
    /// Row-major components: entry `(h * n + j) * n + i` is `Γ^h_{ji}`.
    /// The symmetric flag starts unset; see [`ConnectionField::checked_symmetric`].
    pub fn new(n: usize, exprs: Vec<ScalarExpr>) -> Result<Self> {
        Ok(Self {
            c: Components::new(n, 3, exprs)?,
            symmetric: false,
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> ScalarExpr) -> Self {
        Self {
            c: Components::from_fn(n, 3, |idx| f(idx[0], idx[1], idx[2])),
            symmetric: false,
        }
    }

    /// The flat connection `Γ = 0`.
    pub fn flat(n: usize) -> Self {
        Self {
            c: Components::from_fn(n, 3, |_| ScalarExpr::zero()),
            symmetric: true,
        }
    }

    /// Levi-Civita connection of the round metric `dθ² + sin²θ dφ²` in the
    /// chart `(x1, x2) = (θ, φ)`.
    pub fn sphere_chart() -> Self {
        let x1 = ScalarExpr::var(0);
        let sin = x1.sin();
        let cos = x1.cos();
        let cot = &cos / &sin;
        let g122 = -(&sin * &cos);
        Self {
            c: Components::from_fn(2, 3, |idx| match (idx[0], idx[1], idx[2]) {
                (0, 1, 1) => g122.clone(),
                (1, 0, 1) | (1, 1, 0) => cot.clone(),
                _ => ScalarExpr::zero(),
            }),
            symmetric: true,
        }
    }

    /// `½(Γ^h_{ji} + Γ^h_{ij})`, flagged symmetric.
    pub fn symmetrized(&self) -> Self {
        let half = ScalarExpr::constant(0.5);
        let n = self.dim();
        let mut out = Self::from_fn(n, |h, j, i| {
            &half * &(self.get(h, j, i) + self.get(h, i, j))
        });
        out.symmetric = true;
        out
    }

    pub fn get(&self, h: usize, j: usize, i: usize) -> &ScalarExpr {
        self.c.get(&[h, j, i])
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Sampled max of `|Γ^h_{ji} - Γ^h_{ij}|`.
    pub fn torsion_residual(&self, points: &[EvalPoint]) -> Result<Residual> {
        let n = self.dim();
        let mut r = Residual::new();
        for p in points {
            let v = self.eval(p)?;
            let at = |h: usize, j: usize, i: usize| v[(h * n + j) * n + i];
            let mut worst = 0.0f64;
            for h in 0..n {
                for j in 0..n {
                    for i in 0..n {
                        worst = worst.max((at(h, j, i) - at(h, i, j)).abs());
                    }
                }
            }
            r.observe(worst, p);
        }
        Ok(r)
    }

    /// Sets the symmetric flag after checking `Γ^h_{ji} = Γ^h_{ij}` on `points`.
    pub fn checked_symmetric(mut self, points: &[EvalPoint], tol: f64) -> Result<Self> {
        let r = self.torsion_residual(points)?;
        if !r.within(tol) {
            return Err(Error::Torsion { residual: r.value });
        }
        self.symmetric = true;
        Ok(self)
    }

    pub(crate) fn partial(&self, axis: usize) -> Self {
        Self {
            c: self.c.map(|e| e.diff(axis)),
            symmetric: self.symmetric,
        }
    }
}

/// Curvature components; `get(k, j, i, l)` is `R_{kji}^l`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureField {
    c: Components,
}

field_common!(CurvatureField);

impl CurvatureField {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize, usize) -> ScalarExpr) -> Self {
        Self {
            c: Components::from_fn(n, 4, |idx| f(idx[0], idx[1], idx[2], idx[3])),
        }
    }

    pub fn get(&self, k: usize, j: usize, i: usize, l: usize) -> &ScalarExpr {
        self.c.get(&[k, j, i, l])
    }

    pub(crate) fn partial(&self, axis: usize) -> Self {
        Self {
            c: self.c.map(|e| e.diff(axis)),
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            c: self.c.map(|e| -e),
        }
    }
}

/// Covariant derivative of the curvature; `get(k, h, i, j, l)` is `(∇_k R)_{hij}^l`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureDerivativeField {
    c: Components,
}

field_common!(CurvatureDerivativeField);

impl CurvatureDerivativeField {
    pub(crate) fn from_fn(n: usize, f: impl FnMut(&[usize]) -> ScalarExpr) -> Self {
        Self {
            c: Components::from_fn(n, 5, f),
        }
    }

    pub fn get(&self, k: usize, h: usize, i: usize, j: usize, l: usize) -> &ScalarExpr {
        self.c.get(&[k, h, i, j, l])
    }
}

/// A (1,2)-field; `get(l, j, k)` is `T^l_{jk}`. Holds the Nijenhuis tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedField12 {
    c: Components,
}

field_common!(MixedField12);

impl MixedField12 {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> ScalarExpr) -> Self {
        Self {
            c: Components::from_fn(n, 3, |idx| f(idx[0], idx[1], idx[2])),
        }
    }

    pub fn get(&self, l: usize, j: usize, k: usize) -> &ScalarExpr {
        self.c.get(&[l, j, k])
    }
}
