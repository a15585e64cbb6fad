//! Scalar expressions over chart coordinates.
//!
//! A [`ScalarExpr`] is an immutable, reference-counted expression tree built
//! from constants, coordinate variables, the four arithmetic operators,
//! negation, integer powers and `sin`/`cos`/`exp`. Trees are cheap to clone
//! and may be shared across threads.
//!
//! Axes are zero-based in the Rust API: `ScalarExpr::var(0)` is the
//! coordinate written `x1` in the text grammar.
//!
//! The smart constructors (and the arithmetic operator impls) fold constants
//! and drop neutral elements. This is best-effort only. Two expressions are
//! considered equal when they evaluate equal on sampled points, never by
//! comparing trees.

mod parse;

use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops;

use crate::error::{Error, Result};

pub use parse::parse;

/// One node of an expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    /// Zero-based coordinate axis.
    Var(usize),
    Add(ScalarExpr, ScalarExpr),
    Sub(ScalarExpr, ScalarExpr),
    Mul(ScalarExpr, ScalarExpr),
    Div(ScalarExpr, ScalarExpr),
    Neg(ScalarExpr),
    Pow(ScalarExpr, i32),
    Sin(ScalarExpr),
    Cos(ScalarExpr),
    Exp(ScalarExpr),
}

/// A closed-form smooth function of the chart coordinates.
#[derive(Clone, PartialEq)]
pub struct ScalarExpr(Arc<Node>);

/// A point of the chart, `x^1 .. x^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalPoint(Vec<f64>);

impl EvalPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        Ok(Self(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    /// Copy of this point with `delta` added along `axis`.
    pub fn shifted(&self, axis: usize, delta: f64) -> Result<Self> {
        let mut coords = self.0.clone();
        coords[axis] += delta;
        Self::new(coords)
    }
}

impl From<&EvalPoint> for Vec<f64> {
    fn from(p: &EvalPoint) -> Self {
        p.0.clone()
    }
}

impl ScalarExpr {
    fn wrap(node: Node) -> Self {
        Self(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn constant(value: f64) -> Self {
        Self::wrap(Node::Const(value))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    /// The coordinate function along zero-based `axis`.
    pub fn var(axis: usize) -> Self {
        Self::wrap(Node::Var(axis))
    }

    pub fn as_constant(&self) -> Option<f64> {
        match *self.0 {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_constant() == Some(0.0)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        match (self.as_constant(), rhs.as_constant()) {
            (Some(a), Some(b)) => Self::constant(a + b),
            (Some(a), _) if a == 0.0 => rhs.clone(),
            (_, Some(b)) if b == 0.0 => self.clone(),
            _ => Self::wrap(Node::Add(self.clone(), rhs.clone())),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        match (self.as_constant(), rhs.as_constant()) {
            (Some(a), Some(b)) => Self::constant(a - b),
            (Some(a), _) if a == 0.0 => rhs.neg(),
            (_, Some(b)) if b == 0.0 => self.clone(),
            _ => Self::wrap(Node::Sub(self.clone(), rhs.clone())),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        match (self.as_constant(), rhs.as_constant()) {
            (Some(a), Some(b)) => Self::constant(a * b),
            (Some(a), _) if a == 0.0 => Self::zero(),
            (_, Some(b)) if b == 0.0 => Self::zero(),
            (Some(a), _) if a == 1.0 => rhs.clone(),
            (_, Some(b)) if b == 1.0 => self.clone(),
            (Some(a), _) if a == -1.0 => rhs.neg(),
            (_, Some(b)) if b == -1.0 => self.neg(),
            _ => Self::wrap(Node::Mul(self.clone(), rhs.clone())),
        }
    }

    pub fn div(&self, rhs: &Self) -> Self {
        match (self.as_constant(), rhs.as_constant()) {
            (Some(a), Some(b)) if b != 0.0 => Self::constant(a / b),
            (Some(a), _) if a == 0.0 => Self::zero(),
            (_, Some(b)) if b == 1.0 => self.clone(),
            _ => Self::wrap(Node::Div(self.clone(), rhs.clone())),
        }
    }

    pub fn neg(&self) -> Self {
        match &*self.0 {
            Node::Const(c) => Self::constant(-c),
            Node::Neg(inner) => inner.clone(),
            _ => Self::wrap(Node::Neg(self.clone())),
        }
    }

    pub fn powi(&self, exponent: i32) -> Self {
        match exponent {
            0 => Self::one(),
            1 => self.clone(),
            _ => match self.as_constant() {
                Some(c) if c != 0.0 || exponent > 0 => Self::constant(powi(c, exponent)),
                _ => Self::wrap(Node::Pow(self.clone(), exponent)),
            },
        }
    }

    pub fn sin(&self) -> Self {
        match self.as_constant() {
            Some(c) => Self::constant(libm::sin(c)),
            None => Self::wrap(Node::Sin(self.clone())),
        }
    }

    pub fn cos(&self) -> Self {
        match self.as_constant() {
            Some(c) => Self::constant(libm::cos(c)),
            None => Self::wrap(Node::Cos(self.clone())),
        }
    }

    pub fn exp(&self) -> Self {
        match self.as_constant() {
            Some(c) => Self::constant(libm::exp(c)),
            None => Self::wrap(Node::Exp(self.clone())),
        }
    }

    /// Sum of an iterator of expressions, folding as it goes.
    pub fn sum<I: IntoIterator<Item = ScalarExpr>>(terms: I) -> Self {
        terms
            .into_iter()
            .fold(Self::zero(), |acc, term| acc.add(&term))
    }

    /// Largest zero-based axis referenced, if any variable occurs.
    pub fn max_axis(&self) -> Option<usize> {
        match &*self.0 {
            Node::Const(_) => None,
            Node::Var(a) => Some(*a),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                match (a.max_axis(), b.max_axis()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, None) => x,
                    (None, y) => y,
                }
            }
            Node::Neg(a) | Node::Pow(a, _) | Node::Sin(a) | Node::Cos(a) | Node::Exp(a) => {
                a.max_axis()
            }
        }
    }

    /// Evaluates at a chart point. Any non-finite intermediate value is
    /// reported as [`Error::Singular`] naming the first subtree that produced it.
    pub fn eval(&self, point: &EvalPoint) -> Result<f64> {
        self.eval_coords(point.coords())
    }

    /// Same as [`ScalarExpr::eval`] on a raw coordinate slice.
    pub fn eval_coords(&self, x: &[f64]) -> Result<f64> {
        let value = match &*self.0 {
            Node::Const(c) => *c,
            Node::Var(a) => {
                return x.get(*a).copied().ok_or(Error::VariableOutOfRange {
                    index: a + 1,
                    dim: x.len(),
                })
            }
            Node::Add(a, b) => a.eval_coords(x)? + b.eval_coords(x)?,
            Node::Sub(a, b) => a.eval_coords(x)? - b.eval_coords(x)?,
            Node::Mul(a, b) => a.eval_coords(x)? * b.eval_coords(x)?,
            Node::Div(a, b) => a.eval_coords(x)? / b.eval_coords(x)?,
            Node::Neg(a) => -a.eval_coords(x)?,
            Node::Pow(a, k) => powi(a.eval_coords(x)?, *k),
            Node::Sin(a) => libm::sin(a.eval_coords(x)?),
            Node::Cos(a) => libm::cos(a.eval_coords(x)?),
            Node::Exp(a) => libm::exp(a.eval_coords(x)?),
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::Singular {
                subtree: self.to_string(),
                value,
            })
        }
    }

    /// Exact symbolic partial derivative along zero-based `axis`.
    pub fn diff(&self, axis: usize) -> Self {
        match &*self.0 {
            Node::Const(_) => Self::zero(),
            Node::Var(a) => {
                if *a == axis {
                    Self::one()
                } else {
                    Self::zero()
                }
            }
            Node::Add(a, b) => a.diff(axis).add(&b.diff(axis)),
            Node::Sub(a, b) => a.diff(axis).sub(&b.diff(axis)),
            Node::Mul(a, b) => a.diff(axis).mul(b).add(&a.mul(&b.diff(axis))),
            Node::Div(a, b) => {
                let da = a.diff(axis);
                let db = b.diff(axis);
                if db.is_zero() {
                    da.div(b)
                } else {
                    da.mul(b).sub(&a.mul(&db)).div(&b.powi(2))
                }
            }
            Node::Neg(a) => a.diff(axis).neg(),
            Node::Pow(a, k) => {
                let da = a.diff(axis);
                if da.is_zero() {
                    return Self::zero();
                }
                Self::constant(f64::from(*k)).mul(&a.powi(k - 1)).mul(&da)
            }
            Node::Sin(a) => a.cos().mul(&a.diff(axis)),
            Node::Cos(a) => a.sin().neg().mul(&a.diff(axis)),
            Node::Exp(a) => self.mul(&a.diff(axis)),
        }
    }

    fn precedence(&self) -> u8 {
        match &*self.0 {
            Node::Add(..) | Node::Sub(..) => 1,
            Node::Mul(..) | Node::Div(..) => 2,
            Node::Neg(_) => 3,
            Node::Const(c) if c.is_sign_negative() => 3,
            Node::Pow(..) => 4,
            _ => 5,
        }
    }
}

/// Central difference `(e(p + h e_axis) - e(p - h e_axis)) / 2h`.
pub fn numeric_partial(e: &ScalarExpr, p: &EvalPoint, axis: usize, h: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidStep);
    }
    if axis >= p.dim() {
        return Err(Error::VariableOutOfRange {
            index: axis + 1,
            dim: p.dim(),
        });
    }
    let forward = e.eval(&p.shifted(axis, h)?)?;
    let backward = e.eval(&p.shifted(axis, -h)?)?;
    Ok((forward - backward) / (2.0 * h))
}

/// Integer power by repeated squaring; deterministic and `no_std`.
pub(crate) fn powi(base: f64, exponent: i32) -> f64 {
    let mut result = 1.0;
    let mut b = base;
    let mut e = exponent.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            result *= b;
        }
        b *= b;
        e >>= 1;
    }
    if exponent < 0 {
        1.0 / result
    } else {
        result
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(f: &mut fmt::Formatter<'_>, e: &ScalarExpr, parens: bool) -> fmt::Result {
            if parens {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        let prec = self.precedence();
        match &*self.0 {
            Node::Const(c) => write!(f, "{c}"),
            Node::Var(a) => write!(f, "x{}", a + 1),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                let op = match &*self.0 {
                    Node::Add(..) => " + ",
                    Node::Sub(..) => " - ",
                    Node::Mul(..) => "*",
                    _ => "/",
                };
                operand(f, a, a.precedence() < prec)?;
                f.write_str(op)?;
                let rhs_prec = b.precedence();
                // a unary minus binds looser than * but the grammar accepts it
                // as a right operand, so `a*-b` needs no parentheses
                operand(f, b, rhs_prec <= prec && rhs_prec != 3)
            }
            Node::Neg(a) => {
                f.write_str("-")?;
                operand(f, a, a.precedence() < 3)
            }
            Node::Pow(a, k) => {
                operand(f, a, a.precedence() < 5)?;
                write!(f, "^{k}")
            }
            Node::Sin(a) => write!(f, "sin({a})"),
            Node::Cos(a) => write!(f, "cos({a})"),
            Node::Exp(a) => write!(f, "exp({a})"),
        }
    }
}

impl fmt::Debug for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarExpr({self})")
    }
}

impl From<f64> for ScalarExpr {
    fn from(value: f64) -> Self {
        Self::constant(value)
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident) => {
        impl ops::$trait<&ScalarExpr> for &ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: &ScalarExpr) -> ScalarExpr {
                ScalarExpr::$method(self, rhs)
            }
        }
        impl ops::$trait<ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: ScalarExpr) -> ScalarExpr {
                ScalarExpr::$method(&self, &rhs)
            }
        }
        impl ops::$trait<&ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: &ScalarExpr) -> ScalarExpr {
                ScalarExpr::$method(&self, rhs)
            }
        }
        impl ops::$trait<ScalarExpr> for &ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: ScalarExpr) -> ScalarExpr {
                ScalarExpr::$method(self, &rhs)
            }
        }
    };
}

binary_op!(Add, add);
binary_op!(Sub, sub);
binary_op!(Mul, mul);
binary_op!(Div, div);

impl ops::Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        ScalarExpr::neg(self)
    }
}

impl ops::Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        ScalarExpr::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn pt(c: &[f64]) -> EvalPoint {
        EvalPoint::new(c.to_vec()).unwrap()
    }

    fn p(s: &str, n: usize) -> ScalarExpr {
        parse(s, n).unwrap()
    }

    #[test]
    fn constant_zero_evaluates_to_zero() {
        assert_eq!(ScalarExpr::zero().eval(&pt(&[0.3, 0.7])).unwrap(), 0.0);
    }

    #[test]
    fn sin_at_origin() {
        assert_eq!(p("sin(x1)", 1).eval(&pt(&[0.0])).unwrap(), 0.0);
    }

    #[test]
    fn pole_is_singular() {
        let err = p("x1/x2", 2).eval(&pt(&[1.0, 0.0])).unwrap_err();
        match err {
            Error::Singular { subtree, value } => {
                assert_eq!(subtree, "x1/x2");
                assert!(value.is_infinite());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn singular_reports_innermost_subtree() {
        let err = p("sin(1/x1) + x2", 2).eval(&pt(&[0.0, 1.0])).unwrap_err();
        assert!(matches!(err, Error::Singular { ref subtree, .. } if subtree == "1/x1"));
    }

    #[test]
    fn eval_rejects_short_point() {
        let err = p("x2", 2).eval(&pt(&[1.0])).unwrap_err();
        assert_eq!(err, Error::VariableOutOfRange { index: 2, dim: 1 });
    }

    #[test]
    fn power_rule() {
        let d = p("x1^2", 1).diff(0);
        assert_eq!(d.to_string(), "2*x1");
    }

    #[test]
    fn independent_variable_derivative_folds_to_zero() {
        assert!(p("sin(x2)", 2).diff(0).is_zero());
    }

    #[test]
    fn product_rule() {
        let d = p("x1*x2", 2).diff(1);
        assert_eq!(d.eval(&pt(&[3.0, 5.0])).unwrap(), 3.0);
    }

    #[test]
    fn quotient_rule() {
        let d = p("x1/x2", 2).diff(1);
        // d/dx2 (x1/x2) = -x1/x2^2
        assert!((d.eval(&pt(&[3.0, 2.0])).unwrap() + 0.75).abs() < 1e-15);
    }

    #[test]
    fn negative_power_derivative() {
        let d = p("x1^-2", 1).diff(0);
        assert!((d.eval(&pt(&[2.0])).unwrap() + 0.25).abs() < 1e-15);
    }

    #[test]
    fn chain_rules() {
        let x = pt(&[0.4, 1.1]);
        let e = p("exp(x1*x2) + cos(x2^2)", 2);
        let d = e.diff(1).eval(&x).unwrap();
        let expected = 0.4 * libm::exp(0.44) - 2.0 * 1.1 * libm::sin(1.21);
        assert!((d - expected).abs() < 1e-14);
    }

    #[test]
    fn numeric_partial_quadratic() {
        let v = numeric_partial(&p("x1^2", 1), &pt(&[1.0]), 0, 1e-5).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
    }

    #[test]
    fn numeric_partial_exp() {
        let v = numeric_partial(&p("exp(x1)", 1), &pt(&[0.0]), 0, 1e-5).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn numeric_partial_of_constant_is_zero() {
        let v = numeric_partial(&ScalarExpr::constant(3.5), &pt(&[0.2, 0.1]), 1, 1e-5).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn numeric_partial_rejects_bad_step() {
        let e = p("x1", 1);
        assert_eq!(
            numeric_partial(&e, &pt(&[0.0]), 0, 0.0),
            Err(Error::InvalidStep)
        );
        assert_eq!(
            numeric_partial(&e, &pt(&[0.0]), 0, -1.0),
            Err(Error::InvalidStep)
        );
    }

    #[test]
    fn numeric_partial_reports_singular_stencil() {
        let e = p("1/x1", 1);
        assert!(matches!(
            numeric_partial(&e, &pt(&[1e-6]), 0, 1e-6),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn eval_point_rejects_nan() {
        assert_eq!(
            EvalPoint::new(vec![0.0, f64::NAN]),
            Err(Error::NonFiniteCoordinate)
        );
    }

    #[test]
    fn folding_drops_neutral_elements() {
        let x = ScalarExpr::var(0);
        assert_eq!((&x * &ScalarExpr::one()).to_string(), "x1");
        assert_eq!((&x + &ScalarExpr::zero()).to_string(), "x1");
        assert!((&x * &ScalarExpr::zero()).is_zero());
        assert_eq!(x.powi(0).as_constant(), Some(1.0));
        assert_eq!((-(-x.clone())).to_string(), "x1");
    }

    #[test]
    fn powi_matches_repeated_product() {
        assert_eq!(powi(1.5, 3), 1.5 * 1.5 * 1.5);
        assert_eq!(powi(2.0, -2), 0.25);
        assert_eq!(powi(0.7, 0), 1.0);
    }

    #[test]
    fn max_axis_reports_highest_variable() {
        assert_eq!(p("x1 + sin(x3)", 3).max_axis(), Some(2));
        assert_eq!(p("2.5", 3).max_axis(), None);
    }
}
