//! The free inner product module `E = A^m` over a block-diagonal algebra.
//!
//! Conventions: the algebra acts on the left coordinatewise and the inner
//! product is `<x, y> = sum_i x_i y_i*`, so that
//! `<b x, y> = b <x, y>` and `<x, b y> = <x, y> b*`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cstar_algebra::{sample, Element, RingOp, Shape};
use crate::error::{Error, Result};
use crate::mapping_kit::Pair;
use crate::scalar::Real;

/// Default tolerance for [`is_orthogonal`].
pub const ORTHOGONALITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleSpace {
    algebra: Shape,
    rank: usize,
}

impl ModuleSpace {
    pub fn new(algebra: Shape, rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::DomainError("module rank must be at least 1".into()));
        }
        Ok(Self { algebra, rank })
    }

    pub fn algebra(&self) -> &Shape {
        &self.algebra
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Complex dimension `m * sum n_i^2`.
    pub fn complex_dim(&self) -> usize {
        self.rank * self.algebra.complex_dim()
    }

    pub(crate) fn check_same(&self, other: &ModuleSpace) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl fmt::Display for ModuleSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{:?}^{}", self.algebra.dims(), self.rank)
    }
}

/// A vector `x = (x_1, ..., x_m)` of the module.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<T> {
    space: ModuleSpace,
    coords: Vec<Element<T>>,
}

impl<T: Real> Vector<T> {
    pub fn new(coords: Vec<Element<T>>) -> Result<Self> {
        let first = coords
            .first()
            .ok_or_else(|| Error::DomainError("module vector needs at least one coordinate".into()))?;
        let algebra = first.shape().clone();
        if let Some(bad) = coords.iter().find(|c| c.shape() != &algebra) {
            return Err(Error::ShapeMismatch {
                left: algebra.dims().to_vec(),
                right: bad.shape().dims().to_vec(),
            });
        }
        let space = ModuleSpace::new(algebra, coords.len())?;
        Ok(Self { space, coords })
    }

    pub fn zero(space: &ModuleSpace) -> Self {
        Self {
            space: space.clone(),
            coords: vec![Element::zero(space.algebra()); space.rank()],
        }
    }

    /// `e_i`: the unit in coordinate `i`, zero elsewhere.
    pub fn unit(space: &ModuleSpace, i: usize) -> Self {
        let mut v = Self::zero(space);
        v.coords[i] = Element::one(space.algebra());
        v
    }

    /// Places `value` in coordinate `i`, zero elsewhere.
    pub fn single(space: &ModuleSpace, i: usize, value: Element<T>) -> Self {
        let mut v = Self::zero(space);
        v.coords[i] = value;
        v
    }

    pub fn space(&self) -> &ModuleSpace {
        &self.space
    }

    pub fn coords(&self) -> &[Element<T>] {
        &self.coords
    }

    fn zip(&self, other: &Self, op: RingOp) -> Result<Self> {
        self.space.check_same(&other.space)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.compose(op, b))
            .collect::<Result<_>>()?;
        Ok(Self {
            space: self.space.clone(),
            coords,
        })
    }

    /// Multiplies every coordinate by a real number.
    pub fn scale_real(&self, v: T) -> Self {
        Self {
            space: self.space.clone(),
            coords: self.coords.iter().map(|c| c.scale_real(v)).collect(),
        }
    }

    /// Module norm `|<x, x>|^{1/2}`.
    pub fn norm(&self) -> T {
        inner_product(self, self)
            .expect("same space")
            .cstar_norm()
            .sqrt()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coords.iter().all(Element::is_exact_zero)
    }
}

/// `<x, y> = sum_i x_i y_i*`.
pub fn inner_product<T: Real>(x: &Vector<T>, y: &Vector<T>) -> Result<Element<T>> {
    x.space.check_same(&y.space)?;
    let mut acc = Element::zero(x.space.algebra());
    for (a, b) in x.coords.iter().zip(&y.coords) {
        acc = &acc + &(a * &b.adjoint());
    }
    Ok(acc)
}

/// Left action `(b x)_i = b x_i`.
pub fn act<T: Real>(b: &Element<T>, x: &Vector<T>) -> Result<Vector<T>> {
    let coords = x
        .coords
        .iter()
        .map(|c| b.compose(RingOp::Mul, c))
        .collect::<Result<_>>()?;
    Ok(Vector {
        space: x.space.clone(),
        coords,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VecOp {
    Add,
    Sub,
    Neg,
}

/// Coordinatewise group operations; `Neg` ignores `y`, the others require it.
pub fn vec_combine<T: Real>(op: VecOp, x: &Vector<T>, y: Option<&Vector<T>>) -> Result<Vector<T>> {
    let need = || Error::DomainError("binary vector operation needs a second operand".into());
    match op {
        VecOp::Neg => Ok(-x),
        VecOp::Add => x.zip(y.ok_or_else(need)?, RingOp::Add),
        VecOp::Sub => x.zip(y.ok_or_else(need)?, RingOp::Sub),
    }
}

/// `|<x, y>| <= tol (1 + |x| |y|)`.
pub fn is_orthogonal<T: Real>(x: &Vector<T>, y: &Vector<T>, tol: T) -> Result<bool> {
    Ok(orthogonality_defect(x, y)? <= tol)
}

/// `|<x, y>| / (1 + |x| |y|)`: zero exactly when the inner product vanishes.
pub fn orthogonality_defect<T: Real>(x: &Vector<T>, y: &Vector<T>) -> Result<T> {
    let ip = inner_product(x, y)?;
    Ok(ip.cstar_norm() / (T::one() + x.norm() * y.norm()))
}

/// Scale-free discrepancy `|lhs - rhs| / (1 + |lhs| + |rhs|)` in the module norm.
pub fn residual<T: Real>(lhs: &Vector<T>, rhs: &Vector<T>) -> T {
    (lhs - rhs).norm() / (T::one() + lhs.norm() + rhs.norm())
}

macro_rules! vec_binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl<T: Real> $trait<&Vector<T>> for &Vector<T> {
            type Output = Vector<T>;

            fn $method(self, rhs: &Vector<T>) -> Vector<T> {
                self.zip(rhs, $op).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl<T: Real> $trait<Vector<T>> for Vector<T> {
            type Output = Vector<T>;

            fn $method(self, rhs: Vector<T>) -> Vector<T> {
                (&self).$method(&rhs)
            }
        }
    };
}

vec_binop!(Add, add, RingOp::Add);
vec_binop!(Sub, sub, RingOp::Sub);

impl<T: Real> Neg for &Vector<T> {
    type Output = Vector<T>;

    fn neg(self) -> Vector<T> {
        Vector {
            space: self.space.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl<T: Real> Neg for Vector<T> {
    type Output = Vector<T>;

    fn neg(self) -> Vector<T> {
        -&self
    }
}

/// Left action as an operator; panics when the algebras differ.
impl<T: Real> Mul<&Vector<T>> for &Element<T> {
    type Output = Vector<T>;

    fn mul(self, rhs: &Vector<T>) -> Vector<T> {
        act(self, rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct VectorWire<T> {
    rank: usize,
    coords: Vec<Element<T>>,
}

impl<T: Real> Serialize for Vector<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VectorWire {
            rank: self.space.rank(),
            coords: self.coords.clone(),
        }
        .serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for Vector<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = VectorWire::<T>::deserialize(d)?;
        if wire.rank != wire.coords.len() {
            return Err(D::Error::custom(format!(
                "rank {} but {} coordinates",
                wire.rank,
                wire.coords.len()
            )));
        }
        Vector::new(wire.coords).map_err(D::Error::custom)
    }
}

/// A basis of the module as a complex vector space: every matrix unit and
/// its `i` multiple, in every block of every coordinate.
pub fn complex_basis<T: Real>(space: &ModuleSpace) -> Vec<Vector<T>> {
    let shape = space.algebra();
    let i_unit = num_complex::Complex::new(T::zero(), T::one());
    let mut out = Vec::with_capacity(2 * space.complex_dim());
    for coord in 0..space.rank() {
        for (block, &n) in shape.dims().iter().enumerate() {
            for r in 0..n {
                for c in 0..n {
                    let e = Element::matrix_unit(shape, block, r, c);
                    out.push(Vector::single(space, coord, e.scale(i_unit)));
                    out.push(Vector::single(space, coord, e));
                }
            }
        }
    }
    out
}

/// Mixes a campaign seed with a sample index so every sample has its own
/// reproducible stream, independent of evaluation order.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    splitmix(seed ^ splitmix(index))
}

pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(sub_seed(seed, index))
}

/// Vector with i.i.d. complex standard normal entries, a pure function of `seed`.
pub fn sample_vector<T: Real>(space: &ModuleSpace, seed: u64) -> Vector<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_vector(space, &mut rng)
}

pub fn random_vector<T: Real, R: rand::Rng + ?Sized>(space: &ModuleSpace, rng: &mut R) -> Vector<T> {
    Vector {
        space: space.clone(),
        coords: (0..space.rank())
            .map(|_| sample::random_element(space.algebra(), rng))
            .collect(),
    }
}

/// How exactly-orthogonal pairs are produced.
#[derive(Clone, Debug)]
pub enum OrthoSampler<T> {
    /// Random `x` supported on `left`, random `y` supported on `right`.
    DisjointSupport { left: Vec<usize>, right: Vec<usize> },
    /// `(a^{-1} phi(z), (1 - a)^{-1} psi(w))` for random `z, w`.
    PairImage(Box<Pair<T>>),
    /// A fixed list, cycled through by sample index.
    Explicit(Vec<(Vector<T>, Vector<T>)>),
}

impl<T: Real> OrthoSampler<T> {
    /// Splits the coordinates into a first half and the rest.
    pub fn halves(space: &ModuleSpace) -> Self {
        let cut = space.rank().div_ceil(2);
        OrthoSampler::DisjointSupport {
            left: (0..cut).collect(),
            right: (cut..space.rank()).collect(),
        }
    }

    /// Checks the mode against the space it will sample from.
    pub fn validate(&self, space: &ModuleSpace) -> Result<()> {
        match self {
            OrthoSampler::DisjointSupport { left, right } => {
                let mut seen = vec![false; space.rank()];
                for &i in left.iter().chain(right) {
                    if i >= space.rank() {
                        return Err(Error::InvalidMode(format!("coordinate {i} out of range for {space}")));
                    }
                    if std::mem::replace(&mut seen[i], true) {
                        return Err(Error::InvalidMode(format!("coordinate {i} listed twice")));
                    }
                }
                if seen.iter().any(|s| !s) {
                    return Err(Error::InvalidMode("split does not cover every coordinate".into()));
                }
                Ok(())
            }
            OrthoSampler::PairImage(pair) => {
                if !pair.is_validated() {
                    return Err(Error::InvalidMode("pair_image needs a validated pair".into()));
                }
                pair.phi().codomain().check_same(space).map_err(|e| Error::InvalidMode(e.to_string()))
            }
            OrthoSampler::Explicit(pairs) => {
                if pairs.is_empty() {
                    return Err(Error::InvalidMode("explicit mode needs at least one pair".into()));
                }
                for (x, y) in pairs {
                    x.space().check_same(space).map_err(|e| Error::InvalidMode(e.to_string()))?;
                    y.space().check_same(space).map_err(|e| Error::InvalidMode(e.to_string()))?;
                }
                Ok(())
            }
        }
    }
}

/// The `index`-th orthogonal pair of the stream determined by `(mode, seed)`.
pub fn sample_orthogonal_pair<T: Real>(
    mode: &OrthoSampler<T>,
    space: &ModuleSpace,
    seed: u64,
    index: u64,
) -> Result<(Vector<T>, Vector<T>)> {
    mode.validate(space)?;
    let mut rng = rng_for(seed, index);
    match mode {
        OrthoSampler::DisjointSupport { left, right } => {
            let mut x = Vector::zero(space);
            let mut y = Vector::zero(space);
            for &i in left {
                x.coords[i] = sample::random_element(space.algebra(), &mut rng);
            }
            for &i in right {
                y.coords[i] = sample::random_element(space.algebra(), &mut rng);
            }
            Ok((x, y))
        }
        OrthoSampler::PairImage(pair) => {
            let domain = pair.phi().domain();
            let z = random_vector(domain, &mut rng);
            let w = random_vector(domain, &mut rng);
            let a = pair.coefficient();
            Ok((a.inv() * &pair.phi().eval(&z), a.co_inv() * &pair.psi().eval(&w)))
        }
        OrthoSampler::Explicit(pairs) => Ok(pairs[(index % pairs.len() as u64) as usize].clone()),
    }
}

/// Serialized form of [`OrthoSampler`]; pairs are referenced by id.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", bound = "T: Real")]
pub enum OrthoSamplerSpec<T> {
    DisjointSupport {
        left_coords: Vec<usize>,
        right_coords: Vec<usize>,
    },
    PairImage {
        pair_id: String,
    },
    Explicit {
        pairs: Vec<(Vector<T>, Vector<T>)>,
    },
}

impl<T: Real> OrthoSamplerSpec<T> {
    /// Resolves pair references through `lookup`.
    pub fn resolve(self, lookup: impl Fn(&str) -> Option<Pair<T>>) -> Result<OrthoSampler<T>> {
        Ok(match self {
            OrthoSamplerSpec::DisjointSupport {
                left_coords,
                right_coords,
            } => OrthoSampler::DisjointSupport {
                left: left_coords,
                right: right_coords,
            },
            OrthoSamplerSpec::PairImage { pair_id } => OrthoSampler::PairImage(Box::new(
                lookup(&pair_id).ok_or_else(|| Error::InvalidMode(format!("unknown pair id `{pair_id}`")))?,
            )),
            OrthoSamplerSpec::Explicit { pairs } => OrthoSampler::Explicit(pairs),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cstar_algebra::validate_coefficient;
    use crate::mapping_kit::interleave_pair;

    fn space(dims: &[usize], rank: usize) -> ModuleSpace {
        ModuleSpace::new(Shape::new(dims.to_vec()).unwrap(), rank).unwrap()
    }

    fn scalars(vals: &[f64]) -> Vector<f64> {
        Vector::new(vals.iter().map(|&v| Element::real_scalar(&Shape::complex(), v)).collect()).unwrap()
    }

    /// Loop-by-loop oracle for the inner product, written against raw block entries.
    fn inner_product_oracle(x: &Vector<f64>, y: &Vector<f64>) -> Vec<Vec<num_complex::Complex<f64>>> {
        let shape = x.space().algebra().clone();
        let mut out = Vec::new();
        for (k, &n) in shape.dims().iter().enumerate() {
            let mut block = vec![num_complex::Complex::new(0.0, 0.0); n * n];
            for i in 0..x.space().rank() {
                let xb = &x.coords()[i].blocks()[k];
                let yb = &y.coords()[i].blocks()[k];
                for r in 0..n {
                    for c in 0..n {
                        let mut entry = num_complex::Complex::new(0.0, 0.0);
                        for t in 0..n {
                            entry += xb[(r, t)] * yb[(c, t)].conj();
                        }
                        block[r * n + c] += entry;
                    }
                }
            }
            out.push(block);
        }
        out
    }

    #[test]
    fn unit_vectors() {
        let s = space(&[2], 2);
        let e1 = Vector::<f64>::unit(&s, 0);
        let e2 = Vector::<f64>::unit(&s, 1);
        assert_eq!(inner_product(&e1, &e1).unwrap(), Element::one(s.algebra()));
        assert!(inner_product(&e1, &e2).unwrap().is_exact_zero());
        assert!(is_orthogonal(&e1, &e2, ORTHOGONALITY_TOL).unwrap());
        assert!(!is_orthogonal(&e1, &e1, ORTHOGONALITY_TOL).unwrap());
    }

    #[test]
    fn inner_product_matches_loop_oracle() {
        let s = space(&[2, 1], 2);
        for seed in 0..10 {
            let x = sample_vector::<f64>(&s, seed);
            let y = sample_vector::<f64>(&s, seed + 100);
            let ip = inner_product(&x, &y).unwrap();
            let oracle = inner_product_oracle(&x, &y);
            for (b, ob) in ip.blocks().iter().zip(&oracle) {
                assert_eq!(b.as_slice(), &ob[..]);
            }
        }
    }

    #[test]
    fn inner_product_space_mismatch() {
        let x = Vector::<f64>::unit(&space(&[1], 2), 0);
        let y = Vector::<f64>::unit(&space(&[1], 3), 0);
        assert!(matches!(inner_product(&x, &y), Err(Error::SpaceMismatch { .. })));
    }

    #[test]
    fn action_examples() {
        let s = space(&[2], 3);
        let x = sample_vector::<f64>(&s, 4);
        assert_eq!(act(&Element::one(s.algebra()), &x).unwrap(), x);

        let a = validate_coefficient(&Element::from_diagonal(s.algebra(), &[1.0 / 3.0, 0.5]).unwrap(), true)
            .unwrap();
        let back = act(a.value(), &act(a.inv(), &x).unwrap()).unwrap();
        assert!(residual(&back, &x) < 1e-9);

        let half = Element::real_scalar(&Shape::complex(), 0.5);
        assert_eq!(act(&half, &scalars(&[4.0, 6.0])).unwrap(), scalars(&[2.0, 3.0]));
    }

    #[test]
    fn action_shape_mismatch() {
        let x = Vector::<f64>::unit(&space(&[2], 1), 0);
        let b = Element::one(&Shape::complex());
        assert!(matches!(act(&b, &x), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn combine_examples() {
        let s = space(&[1, 2], 2);
        let x = sample_vector::<f64>(&s, 9);
        let neg = vec_combine(VecOp::Neg, &x, None).unwrap();
        assert!(vec_combine(VecOp::Add, &x, Some(&neg)).unwrap().is_exact_zero());
        assert_eq!(vec_combine(VecOp::Sub, &x, Some(&Vector::zero(&s))).unwrap(), x);
        assert_eq!(
            vec_combine(VecOp::Add, &scalars(&[1.0, 2.0]), Some(&scalars(&[3.0, 4.0]))).unwrap(),
            scalars(&[4.0, 6.0])
        );
        assert!(vec_combine(VecOp::Add, &x, None).is_err());
        let other = Vector::<f64>::unit(&space(&[1, 2], 3), 0);
        assert!(matches!(
            vec_combine(VecOp::Add, &x, Some(&other)),
            Err(Error::SpaceMismatch { .. })
        ));
    }

    #[test]
    fn sampling_is_deterministic() {
        let s = space(&[2], 2);
        assert_eq!(sample_vector::<f64>(&s, 5), sample_vector::<f64>(&s, 5));
        assert_ne!(sample_vector::<f64>(&s, 5), sample_vector::<f64>(&s, 6));
    }

    #[test]
    fn complex_normal_second_moment() {
        // E|z|^2 = 2 for a complex standard normal
        let s = space(&[1], 1);
        let n = 10_000;
        let mean: f64 = (0..n)
            .map(|i| {
                let x = sample_vector::<f64>(&s, sub_seed(77, i));
                x.norm().powi(2)
            })
            .sum::<f64>()
            / n as f64;
        assert!((mean - 2.0).abs() < 0.2, "mean {mean}");
    }

    #[test]
    fn disjoint_support_pairs_are_exactly_orthogonal() {
        let s = space(&[2, 1], 3);
        let mode = OrthoSampler::DisjointSupport {
            left: vec![0, 2],
            right: vec![1],
        };
        for i in 0..20 {
            let (x, y) = sample_orthogonal_pair::<f64>(&mode, &s, 1, i).unwrap();
            assert!(inner_product(&x, &y).unwrap().is_exact_zero());
            assert!(x.coords()[1].is_exact_zero());
            assert!(y.coords()[0].is_exact_zero() && y.coords()[2].is_exact_zero());
            assert_eq!(orthogonality_defect(&x, &y).unwrap(), 0.0);
        }
    }

    #[test]
    fn disjoint_support_must_partition() {
        let s = space(&[1], 2);
        let overlapping = OrthoSampler::<f64>::DisjointSupport {
            left: vec![0, 1],
            right: vec![1],
        };
        assert!(matches!(
            sample_orthogonal_pair(&overlapping, &s, 0, 0),
            Err(Error::InvalidMode(_))
        ));
        let missing = OrthoSampler::<f64>::DisjointSupport {
            left: vec![0],
            right: vec![],
        };
        assert!(matches!(sample_orthogonal_pair(&missing, &s, 0, 0), Err(Error::InvalidMode(_))));
    }

    #[test]
    fn pair_image_with_interleaving_pair_is_exactly_orthogonal() {
        let pair = interleave_pair::<f64>(0.3, 6).unwrap();
        let s = pair.phi().codomain().clone();
        let mode = OrthoSampler::PairImage(Box::new(pair));
        for i in 0..10 {
            let (x, y) = sample_orthogonal_pair(&mode, &s, 8, i).unwrap();
            assert!(inner_product(&x, &y).unwrap().is_exact_zero());
            // even / odd supports
            for (k, c) in x.coords().iter().enumerate() {
                if k % 2 == 1 {
                    assert!(c.is_exact_zero());
                }
            }
        }
    }

    #[test]
    fn explicit_mode_is_verbatim() {
        let s = space(&[1], 2);
        let pair = (Vector::<f64>::unit(&s, 0), Vector::unit(&s, 1));
        let mode = OrthoSampler::Explicit(vec![pair.clone()]);
        assert_eq!(sample_orthogonal_pair(&mode, &s, 3, 0).unwrap(), pair);
        assert_eq!(sample_orthogonal_pair(&mode, &s, 3, 7).unwrap(), pair);
    }

    #[test]
    fn vector_json_layout() {
        let v = scalars(&[1.0, -2.0]);
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["rank"], 2);
        assert_eq!(json["coords"][1]["blocks"][0][0][0][0], -2.0);
        assert_eq!(serde_json::from_value::<Vector<f64>>(json).unwrap(), v);
        let bad = serde_json::json!({"rank": 3, "coords": [{"shape": [1], "blocks": [[[[1.0, 0.0]]]]}]});
        assert!(serde_json::from_value::<Vector<f64>>(bad).is_err());
    }

    #[test]
    fn sampler_spec_json_tags() {
        let spec: OrthoSamplerSpec<f64> =
            serde_json::from_str(r#"{"mode":"disjoint_support","left_coords":[0],"right_coords":[1]}"#).unwrap();
        assert!(matches!(spec, OrthoSamplerSpec::DisjointSupport { .. }));
        let spec: OrthoSamplerSpec<f64> = serde_json::from_str(r#"{"mode":"pair_image","pair_id":"l2"}"#).unwrap();
        assert!(spec.resolve(|_| None).is_err());
    }
}
