//! Finite-dimensional C*-algebras `M_{n1}(C) + ... + M_{nk}(C)`.
//!
//! Every finite-dimensional C*-algebra is a direct sum of full matrix
//! algebras, so an element is a tuple of square complex blocks. The ring
//! operations act block by block, the involution is the blockwise conjugate
//! transpose and the C*-norm is the largest singular value over all blocks.

pub mod dense;
pub mod sample;

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub use dense::CMatrix;

/// Block sizes `(n1, ..., nk)` of a block-diagonal algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Shape {
    dims: Vec<usize>,
}

impl Shape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidShape(dims));
        }
        Ok(Self { dims })
    }

    /// The algebra of complex numbers, shape `(1)`.
    pub fn complex() -> Self {
        Self { dims: vec![1] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn block_count(&self) -> usize {
        self.dims.len()
    }

    /// Sum of the block sizes: length of a block-diagonal's diagonal.
    pub fn order(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Complex dimension of the algebra, `sum n_i^2`.
    pub fn complex_dim(&self) -> usize {
        self.dims.iter().map(|n| n * n).sum()
    }

    /// True when every block is `1 x 1`, i.e. the algebra is commutative.
    pub fn is_commutative(&self) -> bool {
        self.dims.iter().all(|&n| n == 1)
    }

    fn check_same(&self, other: &Shape) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                left: self.dims.clone(),
                right: other.dims.clone(),
            })
        }
    }
}

impl<'de> Deserialize<'de> for Shape {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Shape::new(Vec::deserialize(d)?).map_err(D::Error::custom)
    }
}

/// Binary ring operation selector for [`compose`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

/// An element of the block-diagonal algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct Element<T> {
    shape: Shape,
    blocks: Vec<CMatrix<T>>,
}

impl<T: Real> Element<T> {
    pub fn from_blocks(shape: Shape, blocks: Vec<CMatrix<T>>) -> Result<Self> {
        if blocks.len() != shape.block_count() {
            return Err(Error::MalformedElement(format!(
                "{} blocks for shape {:?}",
                blocks.len(),
                shape.dims()
            )));
        }
        for (i, (b, &n)) in blocks.iter().zip(shape.dims()).enumerate() {
            if b.nrows() != n || b.ncols() != n {
                return Err(Error::MalformedElement(format!(
                    "block {i} is {}x{}, expected {n}x{n}",
                    b.nrows(),
                    b.ncols()
                )));
            }
            if !b.is_finite() {
                return Err(Error::MalformedElement(format!("block {i} has non-finite entries")));
            }
        }
        Ok(Self { shape, blocks })
    }

    fn from_fn_blocks(shape: &Shape, f: impl Fn(usize, usize) -> CMatrix<T>) -> Self {
        Self {
            blocks: shape.dims().iter().enumerate().map(|(k, &n)| f(k, n)).collect(),
            shape: shape.clone(),
        }
    }

    pub fn zero(shape: &Shape) -> Self {
        Self::from_fn_blocks(shape, |_, n| CMatrix::zeros(n, n))
    }

    pub fn one(shape: &Shape) -> Self {
        Self::from_fn_blocks(shape, |_, n| CMatrix::identity(n))
    }

    /// `c * 1`.
    pub fn scalar(shape: &Shape, c: Complex<T>) -> Self {
        Self::from_fn_blocks(shape, |_, n| CMatrix::identity(n).scale(c))
    }

    pub fn real_scalar(shape: &Shape, v: T) -> Self {
        Self::scalar(shape, Complex::new(v, T::zero()))
    }

    /// Block-diagonal element whose diagonal, read across all blocks, is `diag`.
    pub fn from_diagonal(shape: &Shape, diag: &[T]) -> Result<Self> {
        if diag.len() != shape.order() {
            return Err(Error::MalformedElement(format!(
                "diagonal of length {} for shape {:?}",
                diag.len(),
                shape.dims()
            )));
        }
        let mut offset = 0;
        let mut blocks = Vec::with_capacity(shape.block_count());
        for &n in shape.dims() {
            let entries: Vec<_> = diag[offset..offset + n]
                .iter()
                .map(|&v| Complex::new(v, T::zero()))
                .collect();
            blocks.push(CMatrix::diagonal(&entries));
            offset += n;
        }
        Self::from_blocks(shape.clone(), blocks)
    }

    /// Matrix unit `E_{row,col}` inside block `block`.
    pub fn matrix_unit(shape: &Shape, block: usize, row: usize, col: usize) -> Self {
        let mut e = Self::zero(shape);
        e.blocks[block][(row, col)] = Complex::one();
        e
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn blocks(&self) -> &[CMatrix<T>] {
        &self.blocks
    }

    fn map_blocks(&self, f: impl Fn(&CMatrix<T>) -> CMatrix<T>) -> Self {
        Self {
            shape: self.shape.clone(),
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    fn zip_blocks(&self, other: &Self, f: impl Fn(&CMatrix<T>, &CMatrix<T>) -> CMatrix<T>) -> Result<Self> {
        self.shape.check_same(&other.shape)?;
        Ok(Self {
            shape: self.shape.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn compose(&self, op: RingOp, other: &Self) -> Result<Self> {
        match op {
            RingOp::Add => self.zip_blocks(other, CMatrix::add),
            RingOp::Sub => self.zip_blocks(other, CMatrix::sub),
            RingOp::Mul => self.zip_blocks(other, CMatrix::matmul),
        }
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        self.map_blocks(|b| b.scale(c))
    }

    pub fn scale_real(&self, v: T) -> Self {
        self.scale(Complex::new(v, T::zero()))
    }

    pub fn adjoint(&self) -> Self {
        self.map_blocks(CMatrix::adjoint)
    }

    /// Every entry compares equal to zero (signed zeros included).
    pub fn is_exact_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.as_slice().iter().all(|z| z.is_zero()))
    }

    /// Blockwise inverse. Fails when some block's smallest singular value is
    /// at most `SINGULAR_RTOL` times its norm.
    pub fn invert(&self) -> Result<Self> {
        self.invert_named("element")
    }

    fn invert_named(&self, what: &'static str) -> Result<Self> {
        let rtol = T::lit(T::SINGULAR_RTOL);
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (k, b) in self.blocks.iter().enumerate() {
            let sigma = dense::singular_values(b);
            let (top, bottom) = (sigma[0], *sigma.last().expect("non-empty block"));
            let singular = || Error::NearSingular {
                what,
                block: k,
                sigma_min: bottom.to_f64_lossy(),
            };
            if bottom <= rtol * top {
                return Err(singular());
            }
            blocks.push(dense::inverse(b).ok_or_else(singular)?);
        }
        Ok(self.map_blocks_from(blocks))
    }

    fn map_blocks_from(&self, blocks: Vec<CMatrix<T>>) -> Self {
        Self {
            shape: self.shape.clone(),
            blocks,
        }
    }

    /// `|x - x*|` in the C*-norm.
    pub fn self_adjoint_deviation(&self) -> T {
        (self - &self.adjoint()).cstar_norm()
    }

    /// Smallest and largest eigenvalue over all blocks of a self-adjoint element.
    pub fn spectrum_bounds(&self) -> Result<(T, T)> {
        let deviation = self.self_adjoint_deviation();
        if deviation > T::lit(T::SELF_ADJOINT_RTOL) * (T::one() + self.cstar_norm()) {
            return Err(Error::NotSelfAdjoint {
                deviation: deviation.to_f64_lossy(),
            });
        }
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for b in &self.blocks {
            let eig = dense::hermitian_eigenvalues(b);
            lo = lo.min(eig[0]);
            hi = hi.max(eig[eig.len() - 1]);
        }
        Ok((lo, hi))
    }

    /// C*-norm: largest singular value over all blocks.
    pub fn cstar_norm(&self) -> T {
        self.blocks
            .iter()
            .map(dense::spectral_norm)
            .fold(T::zero(), T::max)
    }
}

/// Blockwise `x op y`.
pub fn compose<T: Real>(op: RingOp, x: &Element<T>, y: &Element<T>) -> Result<Element<T>> {
    x.compose(op, y)
}

/// Scale-free discrepancy `|lhs - rhs| / (1 + |lhs| + |rhs|)`.
pub fn residual<T: Real>(lhs: &Element<T>, rhs: &Element<T>) -> T {
    (lhs - rhs).cstar_norm() / (T::one() + lhs.cstar_norm() + rhs.cstar_norm())
}

// Operator impls panic on shape mismatch; `compose` is the checked entry point.
macro_rules! binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl<T: Real> $trait<&Element<T>> for &Element<T> {
            type Output = Element<T>;

            fn $method(self, rhs: &Element<T>) -> Element<T> {
                self.compose($op, rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl<T: Real> $trait<Element<T>> for Element<T> {
            type Output = Element<T>;

            fn $method(self, rhs: Element<T>) -> Element<T> {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, RingOp::Add);
binop!(Sub, sub, RingOp::Sub);
binop!(Mul, mul, RingOp::Mul);

impl<T: Real> Neg for &Element<T> {
    type Output = Element<T>;

    fn neg(self) -> Element<T> {
        self.map_blocks(CMatrix::neg)
    }
}

impl<T: Real> Neg for Element<T> {
    type Output = Element<T>;

    fn neg(self) -> Element<T> {
        -&self
    }
}

/// A fixed algebra element `a` with `a` and `1 - a` invertible, carrying
/// both inverses.
#[derive(Clone, Debug, PartialEq)]
pub struct Coeff<T> {
    value: Element<T>,
    inv: Element<T>,
    one_minus: Element<T>,
    co_inv: Element<T>,
    strict_order: bool,
}

impl<T: Real> Coeff<T> {
    pub fn value(&self) -> &Element<T> {
        &self.value
    }

    /// `a^{-1}`
    pub fn inv(&self) -> &Element<T> {
        &self.inv
    }

    /// `1 - a`
    pub fn one_minus(&self) -> &Element<T> {
        &self.one_minus
    }

    /// `(1 - a)^{-1}`
    pub fn co_inv(&self) -> &Element<T> {
        &self.co_inv
    }

    /// Whether `0 < a < 1` was certified at validation time.
    pub fn is_strict_order(&self) -> bool {
        self.strict_order
    }

    pub fn shape(&self) -> &Shape {
        self.value.shape()
    }

    /// `Some(p)` when `a = p * 1` for a real `p` (to rounding).
    pub fn as_real_scalar(&self) -> Option<T> {
        let shape = self.shape();
        let p = self.value.blocks()[0][(0, 0)].re;
        let diff = (&self.value - &Element::real_scalar(shape, p)).cstar_norm();
        (diff <= T::epsilon() * T::lit(16.0) * (T::one() + p.abs())).then_some(p)
    }
}

/// Checks that `a` and `1 - a` are invertible and, in strict mode, that
/// `a` is self-adjoint with spectrum inside `(0, 1)`.
pub fn validate_coefficient<T: Real>(x: &Element<T>, require_strict_order: bool) -> Result<Coeff<T>> {
    let inv = x.invert_named("a")?;
    let one_minus = &Element::one(x.shape()) - x;
    let co_inv = one_minus.invert_named("1 - a")?;
    if require_strict_order {
        let (min_eig, max_eig) = x.spectrum_bounds()?;
        if !(min_eig > T::zero() && max_eig < T::one()) {
            return Err(Error::OrderViolation {
                min_eig: min_eig.to_f64_lossy(),
                max_eig: max_eig.to_f64_lossy(),
            });
        }
    }
    Ok(Coeff {
        value: x.clone(),
        inv,
        one_minus,
        co_inv,
        strict_order: require_strict_order,
    })
}

#[derive(Serialize, Deserialize)]
struct ElementWire<T> {
    shape: Vec<usize>,
    blocks: Vec<Vec<Vec<[T; 2]>>>,
}

impl<T: Real> Serialize for Element<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementWire {
            shape: self.shape.dims().to_vec(),
            blocks: self
                .blocks
                .iter()
                .map(|b| b.rows().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for Element<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = ElementWire::<T>::deserialize(d)?;
        let shape = Shape::new(wire.shape).map_err(D::Error::custom)?;
        let blocks = wire
            .blocks
            .into_iter()
            .map(|rows| {
                CMatrix::from_rows(
                    rows.into_iter()
                        .map(|row| row.into_iter().map(|[re, im]| Complex::new(re, im)).collect())
                        .collect(),
                )
                .ok_or_else(|| D::Error::custom("ragged block rows"))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Element::from_blocks(shape, blocks).map_err(D::Error::custom)
    }
}
