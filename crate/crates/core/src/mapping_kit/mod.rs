//! Evaluable mappings between modules and constructors for the families
//! the verifiers quantify over.
//!
//! A [`Map`] is an expression tree over a handful of node kinds. Module
//! linear maps use right coefficients, `T(x)_j = sum_i x_i C[i][j]`, which
//! commute with the left action and are therefore `a`-additive for every
//! `a`. Left-coefficient maps `T(x)_j = sum_i C[i][j] x_i` are complex
//! linear but not module linear; they are used only to build additive pairs.

mod kernel;
mod pairs;

use serde::de::Error as _;
use serde::{Deserialize, Serialize, Serializer};

use crate::cstar_algebra::Element;
use crate::error::{Error, Result};
use crate::hilbert_module::{inner_product, ModuleSpace, Vector};
use crate::scalar::Real;

pub use kernel::{solve_abiadditive_kernel, Kernel, KernelMap};
pub use pairs::{
    check_unitary_equivalence, coefficient_shift_pair, interleave_pair, morphism_shift_pair, restricted_isometry_pair,
    validate_pair, Pair, PairSpec,
};
pub(crate) use pairs::pair_tol;

/// One node of a mapping expression tree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "T: Real", deny_unknown_fields)]
pub enum Node<T> {
    /// `x -> (sum_i x_i C[i][j])_j`
    Linear { coeffs: Vec<Vec<Element<T>>> },
    /// `x -> (sum_i C[i][j] x_i)_j`
    LeftMul { coeffs: Vec<Vec<Element<T>>> },
    /// `x -> 2 scale <x, x> g`, the diagonal of [`QuadForm`].
    QuadDiag { g: Vector<T>, scale: T },
    Constant { value: Vector<T> },
    Sum { children: Vec<Node<T>> },
    /// `delta` inside the open ball of the given radius around `site`, zero outside.
    Perturb { site: Vector<T>, delta: Vector<T>, radius: T },
}

impl<T: Real> Node<T> {
    fn check(&self, domain: &ModuleSpace, codomain: &ModuleSpace) -> Result<()> {
        match self {
            Node::Linear { coeffs } | Node::LeftMul { coeffs } => {
                if coeffs.len() != domain.rank() || coeffs.iter().any(|row| row.len() != codomain.rank()) {
                    return Err(Error::DomainError(format!(
                        "coefficient matrix must be {} x {}",
                        domain.rank(),
                        codomain.rank()
                    )));
                }
                for c in coeffs.iter().flatten() {
                    if c.shape() != domain.algebra() {
                        return Err(Error::ShapeMismatch {
                            left: domain.algebra().dims().to_vec(),
                            right: c.shape().dims().to_vec(),
                        });
                    }
                }
                Ok(())
            }
            Node::QuadDiag { g, scale } => {
                if !scale.is_finite() {
                    return Err(Error::DomainError("quadratic scale must be finite".into()));
                }
                g.space().check_same(codomain)
            }
            Node::Constant { value } => value.space().check_same(codomain),
            Node::Sum { children } => children.iter().try_for_each(|c| c.check(domain, codomain)),
            Node::Perturb { site, delta, radius } => {
                if !(*radius > T::zero()) {
                    return Err(Error::DomainError("perturbation radius must be positive".into()));
                }
                site.space().check_same(domain)?;
                delta.space().check_same(codomain)
            }
        }
    }

    fn eval(&self, x: &Vector<T>, codomain: &ModuleSpace) -> Vector<T> {
        match self {
            Node::Linear { coeffs } => {
                let coords = (0..codomain.rank())
                    .map(|j| {
                        let mut acc = Element::zero(codomain.algebra());
                        for (xi, row) in x.coords().iter().zip(coeffs) {
                            acc = &acc + &(xi * &row[j]);
                        }
                        acc
                    })
                    .collect();
                Vector::new(coords).expect("checked spaces")
            }
            Node::LeftMul { coeffs } => {
                let coords = (0..codomain.rank())
                    .map(|j| {
                        let mut acc = Element::zero(codomain.algebra());
                        for (xi, row) in x.coords().iter().zip(coeffs) {
                            acc = &acc + &(&row[j] * xi);
                        }
                        acc
                    })
                    .collect();
                Vector::new(coords).expect("checked spaces")
            }
            Node::QuadDiag { g, scale } => QuadForm::new(g.clone(), *scale).apply(x, x),
            Node::Constant { value } => value.clone(),
            Node::Sum { children } => children
                .iter()
                .fold(Vector::zero(codomain), |acc, c| &acc + &c.eval(x, codomain)),
            Node::Perturb { site, delta, radius } => {
                if (x - site).norm() < *radius {
                    delta.clone()
                } else {
                    Vector::zero(codomain)
                }
            }
        }
    }
}

/// A mapping `domain -> codomain` given by a checked expression tree.
#[derive(Clone, Debug, PartialEq)]
pub struct Map<T> {
    domain: ModuleSpace,
    codomain: ModuleSpace,
    node: Node<T>,
}

impl<T: Real> Map<T> {
    pub fn new(domain: ModuleSpace, codomain: ModuleSpace, node: Node<T>) -> Result<Self> {
        if domain.algebra() != codomain.algebra() {
            return Err(Error::ShapeMismatch {
                left: domain.algebra().dims().to_vec(),
                right: codomain.algebra().dims().to_vec(),
            });
        }
        node.check(&domain, &codomain)?;
        Ok(Self { domain, codomain, node })
    }

    pub fn domain(&self) -> &ModuleSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &ModuleSpace {
        &self.codomain
    }

    pub fn node(&self) -> &Node<T> {
        &self.node
    }

    pub fn try_eval(&self, x: &Vector<T>) -> Result<Vector<T>> {
        x.space().check_same(&self.domain)?;
        Ok(self.node.eval(x, &self.codomain))
    }

    /// Evaluates at `x`; panics if `x` is not in the domain.
    pub fn eval(&self, x: &Vector<T>) -> Vector<T> {
        self.try_eval(x).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Coefficient matrix of a top-level linear or left-multiplication node.
    pub(crate) fn linear_coeffs(&self) -> Option<&[Vec<Element<T>>]> {
        match &self.node {
            Node::Linear { coeffs } | Node::LeftMul { coeffs } => Some(coeffs),
            _ => None,
        }
    }
}

impl<T: Real> Serialize for Map<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.node.serialize(s)
    }
}

/// A mapping together with the spaces it is read against, for deserialization.
pub fn map_from_json<T: Real>(
    value: serde_json::Value,
    domain: &ModuleSpace,
    codomain: &ModuleSpace,
) -> std::result::Result<Map<T>, serde_json::Error> {
    let node: Node<T> = serde_json::from_value(value)?;
    Map::new(domain.clone(), codomain.clone(), node).map_err(serde_json::Error::custom)
}

fn zero_matrix<T: Real>(domain: &ModuleSpace, codomain: &ModuleSpace) -> Vec<Vec<Element<T>>> {
    vec![vec![Element::zero(domain.algebra()); codomain.rank()]; domain.rank()]
}

/// Module-linear map with right coefficients `C` (`m x m'`).
pub fn linear_map<T: Real>(coeffs: Vec<Vec<Element<T>>>) -> Result<Map<T>> {
    let (domain, codomain) = coefficient_spaces(&coeffs)?;
    Map::new(domain, codomain, Node::Linear { coeffs })
}

/// Complex-linear map with left coefficients `C` (`m x m'`).
pub fn left_mul_map<T: Real>(coeffs: Vec<Vec<Element<T>>>) -> Result<Map<T>> {
    let (domain, codomain) = coefficient_spaces(&coeffs)?;
    Map::new(domain, codomain, Node::LeftMul { coeffs })
}

fn coefficient_spaces<T: Real>(coeffs: &[Vec<Element<T>>]) -> Result<(ModuleSpace, ModuleSpace)> {
    let first = coeffs
        .first()
        .and_then(|row| row.first())
        .ok_or_else(|| Error::DomainError("coefficient matrix must be non-empty".into()))?;
    let algebra = first.shape().clone();
    Ok((
        ModuleSpace::new(algebra.clone(), coeffs.len())?,
        ModuleSpace::new(algebra, coeffs[0].len())?,
    ))
}

/// The zero map `domain -> codomain`.
pub fn zero_linear_map<T: Real>(domain: &ModuleSpace, codomain: &ModuleSpace) -> Result<Map<T>> {
    Map::new(
        domain.clone(),
        codomain.clone(),
        Node::Linear {
            coeffs: zero_matrix(domain, codomain),
        },
    )
}

/// Identity on a module, as a linear map.
pub fn identity_map<T: Real>(space: &ModuleSpace) -> Map<T> {
    let mut coeffs = zero_matrix(space, space);
    for (i, row) in coeffs.iter_mut().enumerate() {
        row[i] = Element::one(space.algebra());
    }
    Map::new(space.clone(), space.clone(), Node::Linear { coeffs }).expect("identity conforms")
}

/// Constant map `x -> c`.
pub fn constant_map<T: Real>(domain: &ModuleSpace, value: Vector<T>) -> Result<Map<T>> {
    let codomain = value.space().clone();
    Map::new(domain.clone(), codomain, Node::Constant { value })
}

/// The symmetric form `B(x, y) = scale (<x, y> + <y, x>) g`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadForm<T> {
    g: Vector<T>,
    scale: T,
}

impl<T: Real> QuadForm<T> {
    pub fn new(g: Vector<T>, scale: T) -> Self {
        Self { g, scale }
    }

    pub fn target(&self) -> &Vector<T> {
        &self.g
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    /// Panics if `x`, `y` live in different spaces or their algebra differs from `g`'s.
    pub fn apply(&self, x: &Vector<T>, y: &Vector<T>) -> Vector<T> {
        let xy = inner_product(x, y).unwrap_or_else(|e| panic!("{e}"));
        let yx = inner_product(y, x).unwrap_or_else(|e| panic!("{e}"));
        let k = (&xy + &yx).scale_real(self.scale);
        &k * &self.g
    }
}

/// The form `B` and its diagonal `x -> B(x, x)` on `domain`.
pub fn quad_form<T: Real>(g: Vector<T>, scale: T, domain: &ModuleSpace) -> Result<(QuadForm<T>, Map<T>)> {
    let codomain = g.space().clone();
    let diag = Map::new(
        domain.clone(),
        codomain,
        Node::QuadDiag {
            g: g.clone(),
            scale,
        },
    )?;
    Ok((QuadForm::new(g, scale), diag))
}

/// `f(x) = A(x) + Bdiag(x) + c`.
pub fn compose_jensen<T: Real>(additive: &Map<T>, bdiag: Option<&Map<T>>, c: Vector<T>) -> Result<Map<T>> {
    c.space().check_same(additive.codomain())?;
    let mut children = vec![additive.node.clone()];
    if let Some(b) = bdiag {
        b.domain().check_same(additive.domain())?;
        b.codomain().check_same(additive.codomain())?;
        children.push(b.node.clone());
    }
    children.push(Node::Constant { value: c });
    Map::new(
        additive.domain().clone(),
        additive.codomain().clone(),
        Node::Sum { children },
    )
}

/// `g(x) = f(x) + delta` when `|x - site| < radius`, `f(x)` otherwise.
pub fn perturb<T: Real>(f: &Map<T>, site: Vector<T>, delta: Vector<T>, radius: T) -> Result<Map<T>> {
    Map::new(
        f.domain().clone(),
        f.codomain().clone(),
        Node::Sum {
            children: vec![f.node.clone(), Node::Perturb { site, delta, radius }],
        },
    )
}
