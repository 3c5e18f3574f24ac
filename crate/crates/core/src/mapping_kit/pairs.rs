//! Pairs `(phi, psi)` of linear maps `F -> E` with `<phi(z), psi(w)> = 0`
//! and `a <phi(z), phi(w)> a* = (1 - a) <psi(z), psi(w)> (1 - a)*`.

use serde::{Deserialize, Serialize};

use super::{left_mul_map, linear_map, Map, Node};
use crate::cstar_algebra::{residual as elem_residual, validate_coefficient, Coeff, Element, Shape};
use crate::error::{Error, PairCondition, Result};
use crate::hilbert_module::{complex_basis, inner_product, ModuleSpace};
use crate::scalar::Real;

/// Threshold for the pair conditions at the working precision.
pub(crate) fn pair_tol<T: Real>() -> f64 {
    (1e3 * T::epsilon().to_f64_lossy()).max(1e-10)
}

#[derive(Clone, Debug)]
pub struct Pair<T> {
    phi: Map<T>,
    psi: Map<T>,
    coefficient: Coeff<T>,
    validated: bool,
    orthogonality_residual: f64,
    balance_residual: f64,
}

impl<T: Real> Pair<T> {
    pub fn phi(&self) -> &Map<T> {
        &self.phi
    }

    pub fn psi(&self) -> &Map<T> {
        &self.psi
    }

    pub fn coefficient(&self) -> &Coeff<T> {
        &self.coefficient
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    /// The source module `F`.
    pub fn source(&self) -> &ModuleSpace {
        self.phi.domain()
    }

    /// The target module `E`.
    pub fn target(&self) -> &ModuleSpace {
        self.phi.codomain()
    }

    /// Largest `|<phi(z), psi(w)>| / (1 + |phi(z)| |psi(w)|)` over basis pairs.
    pub fn orthogonality_residual(&self) -> f64 {
        self.orthogonality_residual
    }

    /// Largest balance-condition residual over basis pairs.
    pub fn balance_residual(&self) -> f64 {
        self.balance_residual
    }

    /// Wraps two maps without checking anything. The result is marked
    /// unvalidated and checkers that need the pair hypotheses reject it.
    pub fn unchecked(phi: Map<T>, psi: Map<T>, coefficient: Coeff<T>) -> Self {
        Self {
            phi,
            psi,
            coefficient,
            validated: false,
            orthogonality_residual: f64::NAN,
            balance_residual: f64::NAN,
        }
    }

    /// Marks an unchecked pair as validated. Meant for negative tests of the
    /// downstream checkers.
    pub fn assume_validated(mut self) -> Self {
        self.validated = true;
        self
    }
}

/// Checks both pair conditions on every pair of complex basis vectors of
/// `F`; the conditions are sesquilinear in `(z, w)`, so this is exhaustive.
pub fn validate_pair<T: Real>(phi: Map<T>, psi: Map<T>, a: Coeff<T>) -> Result<Pair<T>> {
    for (name, m) in [("phi", &phi), ("psi", &psi)] {
        if m.linear_coeffs().is_none() {
            return Err(Error::NotLinear(format!("{name} must be a linear or left_mul node")));
        }
    }
    phi.domain().check_same(psi.domain())?;
    phi.codomain().check_same(psi.codomain())?;
    if a.shape() != phi.domain().algebra() {
        return Err(Error::ShapeMismatch {
            left: phi.domain().algebra().dims().to_vec(),
            right: a.shape().dims().to_vec(),
        });
    }
    let tol = pair_tol::<T>();
    let basis = complex_basis::<T>(phi.domain());
    let phis: Vec<_> = basis.iter().map(|z| phi.eval(z)).collect();
    let psis: Vec<_> = basis.iter().map(|z| psi.eval(z)).collect();
    let (av, ac) = (a.value(), a.one_minus());
    let mut orth_max = 0.0f64;
    let mut bal_max = 0.0f64;
    for (zi, (pz, qz)) in phis.iter().zip(&psis).enumerate() {
        for (wi, (pw, qw)) in phis.iter().zip(&psis).enumerate() {
            let ip = inner_product(pz, qw)?;
            let orth = (ip.cstar_norm() / (T::one() + pz.norm() * qw.norm())).to_f64_lossy();
            if !(orth <= tol) {
                return Err(Error::PairConditionViolated {
                    condition: PairCondition::Orthogonality,
                    z: zi,
                    w: wi,
                    residual: orth,
                });
            }
            let lhs = &(av * &inner_product(pz, pw)?) * &av.adjoint();
            let rhs = &(ac * &inner_product(qz, qw)?) * &ac.adjoint();
            let bal = elem_residual(&lhs, &rhs).to_f64_lossy();
            if !(bal <= tol) {
                return Err(Error::PairConditionViolated {
                    condition: PairCondition::Balance,
                    z: zi,
                    w: wi,
                    residual: bal,
                });
            }
            orth_max = orth_max.max(orth);
            bal_max = bal_max.max(bal);
        }
    }
    Ok(Pair {
        phi,
        psi,
        coefficient: a,
        validated: true,
        orthogonality_residual: orth_max,
        balance_residual: bal_max,
    })
}

fn diagonal_placement<T: Real>(
    shape: &Shape,
    rows: usize,
    cols: usize,
    entries: impl IntoIterator<Item = (usize, usize, Element<T>)>,
) -> Vec<Vec<Element<T>>> {
    let mut c = vec![vec![Element::zero(shape); cols]; rows];
    for (i, j, e) in entries {
        c[i][j] = e;
    }
    c
}

/// The interleaving pair on `F = C^{n/2}`, `E = C^n` with `a = (1 - p) 1`:
/// `phi` writes `z_k / (1 - p)` into even slots, `psi` writes `z_k / p`
/// into odd slots.
pub fn interleave_pair<T: Real>(p: T, n: usize) -> Result<Pair<T>> {
    if !(p > T::zero() && p < T::one()) {
        return Err(Error::DomainError(format!("p = {p} is not in (0, 1)")));
    }
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::DomainError(format!("truncation length {n} must be even and at least 2")));
    }
    let shape = Shape::complex();
    let half = n / 2;
    let phi_c = diagonal_placement(
        &shape,
        half,
        n,
        (0..half).map(|k| (k, 2 * k, Element::real_scalar(&shape, T::one() / (T::one() - p)))),
    );
    let psi_c = diagonal_placement(
        &shape,
        half,
        n,
        (0..half).map(|k| (k, 2 * k + 1, Element::real_scalar(&shape, T::one() / p))),
    );
    let a = validate_coefficient(&Element::real_scalar(&shape, T::one() - p), true)?;
    validate_pair(linear_map(phi_c)?, linear_map(psi_c)?, a)
}

/// `F = A^m` inside `E = A^{2m}` as the first `m` coordinates, `psi` the
/// inclusion, `phi` the shift onto the last `m` coordinates, `a = 1/2`.
pub fn morphism_shift_pair<T: Real>(shape: &Shape, m: usize) -> Result<Pair<T>> {
    if m == 0 {
        return Err(Error::DomainError("rank must be at least 1".into()));
    }
    let one = Element::one(shape);
    let phi_c = diagonal_placement(shape, m, 2 * m, (0..m).map(|i| (i, m + i, one.clone())));
    let psi_c = diagonal_placement(shape, m, 2 * m, (0..m).map(|i| (i, i, one.clone())));
    let a = validate_coefficient(&Element::real_scalar(shape, T::lit(0.5)), true)?;
    validate_pair(linear_map(phi_c)?, linear_map(psi_c)?, a)
}

/// A pair for an arbitrary coefficient: `phi(z) = (a^{-1} z, 0)` and
/// `psi(z) = (0, (1 - a)^{-1} z)` from `A^m` into `A^{target_rank}`, with
/// any coordinates past `2m` left at zero. Both maps are complex linear with
/// left coefficients.
pub fn coefficient_shift_pair<T: Real>(a: &Coeff<T>, m: usize, target_rank: usize) -> Result<Pair<T>> {
    if m == 0 || target_rank < 2 * m {
        return Err(Error::DomainError(format!(
            "need 1 <= m and 2m <= target rank, got m = {m}, target rank {target_rank}"
        )));
    }
    let shape = a.shape();
    let phi_c = diagonal_placement(shape, m, target_rank, (0..m).map(|i| (i, i, a.inv().clone())));
    let psi_c = diagonal_placement(shape, m, target_rank, (0..m).map(|i| (i, m + i, a.co_inv().clone())));
    validate_pair(left_mul_map(phi_c)?, left_mul_map(psi_c)?, a.clone())
}

/// Given an isometry `u` of `E = A^n` (right coefficients) and coordinates
/// spanning a submodule `F`, builds the pair `(u|_F, inclusion)` with
/// `a = 1/2`. Validation succeeds exactly when `u` maps `F` into `F^perp`.
pub fn restricted_isometry_pair<T: Real>(u: &[Vec<Element<T>>], coords: &[usize]) -> Result<Pair<T>> {
    let full = linear_map(u.to_vec())?;
    let e = full.domain().clone();
    if full.codomain() != &e {
        return Err(Error::DomainError("isometry must map the module to itself".into()));
    }
    if coords.is_empty() || coords.iter().any(|&c| c >= e.rank()) {
        return Err(Error::DomainError("submodule coordinates out of range".into()));
    }
    let shape = e.algebra();
    let inclusion = diagonal_placement(
        shape,
        coords.len(),
        e.rank(),
        coords.iter().enumerate().map(|(k, &c)| (k, c, Element::one(shape))),
    );
    let restricted: Vec<Vec<Element<T>>> = coords.iter().map(|&c| u[c].clone()).collect();
    let a = validate_coefficient(&Element::real_scalar(shape, T::lit(0.5)), true)?;
    validate_pair(linear_map(restricted)?, linear_map(inclusion)?, a)
}

/// Whether the right-coefficient map `u: from -> to` is unitary, i.e.
/// `u* u = id_from` and `u u* = id_to`. The adjoint has coefficients
/// `D[j][i] = C[i][j]*`, read off from `<u x, y> = <x, u* y>`.
pub fn check_unitary_equivalence<T: Real>(u: &[Vec<Element<T>>], from: &ModuleSpace, to: &ModuleSpace) -> Result<bool> {
    Map::new(from.clone(), to.clone(), Node::Linear { coeffs: u.to_vec() })?;
    let (m, n) = (from.rank(), to.rank());
    let shape = from.algebra();
    let d: Vec<Vec<Element<T>>> = (0..n).map(|j| (0..m).map(|i| u[i][j].adjoint()).collect()).collect();
    let product = |x: &[Vec<Element<T>>], y: &[Vec<Element<T>>], rows: usize, inner: usize, cols: usize| {
        (0..rows)
            .map(|i| {
                (0..cols)
                    .map(|k| {
                        (0..inner).fold(Element::zero(shape), |acc, j| &acc + &(&x[i][j] * &y[j][k]))
                    })
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    };
    let is_identity = |p: &[Vec<Element<T>>]| {
        p.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(k, e)| {
                let target = if i == k { Element::one(shape) } else { Element::zero(shape) };
                elem_residual(e, &target) <= T::lit(1e-9)
            })
        })
    };
    // (u* u)(x) = x C D and (u u*)(y) = y D C
    Ok(is_identity(&product(u, &d, m, n, m)) && is_identity(&product(&d, u, n, m, n)))
}

/// Serialized pair `{"phi": Node, "psi": Node, "a": Element}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "T: Real", deny_unknown_fields)]
pub struct PairSpec<T> {
    pub phi: Node<T>,
    pub psi: Node<T>,
    pub a: Element<T>,
}

impl<T: Real> PairSpec<T> {
    pub fn from_pair(pair: &Pair<T>) -> Self {
        Self {
            phi: pair.phi.node().clone(),
            psi: pair.psi.node().clone(),
            a: pair.coefficient.value().clone(),
        }
    }

    /// Builds and validates the pair `F -> E`.
    pub fn build(self, source: &ModuleSpace, target: &ModuleSpace, strict_order: bool) -> Result<Pair<T>> {
        let phi = Map::new(source.clone(), target.clone(), self.phi)?;
        let psi = Map::new(source.clone(), target.clone(), self.psi)?;
        let a = validate_coefficient(&self.a, strict_order)?;
        validate_pair(phi, psi, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping_kit::identity_map;
    use crate::hilbert_module::{act, sample_vector, Vector};

    fn c(v: f64) -> Element<f64> {
        Element::real_scalar(&Shape::complex(), v)
    }

    #[test]
    fn interleave_pair_values() {
        let pair = interleave_pair::<f64>(0.5, 4).unwrap();
        let e1 = Vector::unit(pair.source(), 0);
        let pe = pair.phi().eval(&e1);
        assert_eq!(inner_product(&pe, &pe).unwrap(), c(4.0));
        let a = pair.coefficient().value();
        let lhs = &(a * &inner_product(&pe, &pe).unwrap()) * &a.adjoint();
        assert_eq!(lhs, c(1.0));
        assert!(inner_product(&pe, &pair.psi().eval(&e1)).unwrap().is_exact_zero());
    }

    #[test]
    fn interleave_pair_third() {
        // (2/3)^2 (3/2)^2 = 1 = (1/3)^2 3^2
        let pair = interleave_pair::<f64>(1.0 / 3.0, 2).unwrap();
        let e1 = Vector::unit(pair.source(), 0);
        let (pe, qe) = (pair.phi().eval(&e1), pair.psi().eval(&e1));
        let a = pair.coefficient();
        let lhs = &(a.value() * &inner_product(&pe, &pe).unwrap()) * a.value();
        let rhs = &(a.one_minus() * &inner_product(&qe, &qe).unwrap()) * a.one_minus();
        assert!((lhs.blocks()[0][(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((rhs.blocks()[0][(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn interleave_pair_grid() {
        for p in [0.1, 0.25, 0.5, 0.75, 0.9] {
            for n in [2, 4, 8, 16] {
                let pair = interleave_pair::<f64>(p, n).unwrap();
                assert!(pair.orthogonality_residual() == 0.0);
                assert!(pair.balance_residual() <= 1e-12, "p={p} n={n}");
            }
        }
    }

    #[test]
    fn interleave_pair_domain() {
        assert!(matches!(interleave_pair::<f64>(0.0, 4), Err(Error::DomainError(_))));
        assert!(matches!(interleave_pair::<f64>(1.0, 4), Err(Error::DomainError(_))));
        assert!(matches!(interleave_pair::<f64>(0.5, 3), Err(Error::DomainError(_))));
    }

    #[test]
    fn identity_pair_fails_orthogonality() {
        let s = ModuleSpace::new(Shape::complex(), 2).unwrap();
        let a = validate_coefficient(&c(0.5), true).unwrap();
        assert!(matches!(
            validate_pair(identity_map(&s), identity_map(&s), a),
            Err(Error::PairConditionViolated {
                condition: PairCondition::Orthogonality,
                ..
            })
        ));
    }

    #[test]
    fn morphism_shift_is_a_morphism() {
        let shape = Shape::new(vec![2, 1]).unwrap();
        let pair = morphism_shift_pair::<f64>(&shape, 2).unwrap();
        let e1 = Vector::unit(pair.source(), 0);
        let shifted = pair.phi().eval(&e1);
        assert_eq!(shifted, Vector::unit(pair.target(), 2));
        assert!(inner_product(&shifted, &pair.psi().eval(&e1)).unwrap().is_exact_zero());
        for z in complex_basis::<f64>(pair.source()) {
            for w in complex_basis::<f64>(pair.source()) {
                let lhs = inner_product(&pair.phi().eval(&z), &pair.phi().eval(&w)).unwrap();
                assert_eq!(lhs, inner_product(&z, &w).unwrap());
            }
        }
    }

    #[test]
    fn morphism_shift_rank_one() {
        let pair = morphism_shift_pair::<f64>(&Shape::complex(), 1).unwrap();
        let e1 = Vector::unit(pair.source(), 0);
        let img = pair.phi().eval(&e1);
        assert_eq!(img, Vector::unit(pair.target(), 1));
        assert!(inner_product(&img, &Vector::unit(pair.target(), 0)).unwrap().is_exact_zero());
    }

    #[test]
    fn coefficient_shift_pair_for_noncommutative_coefficient() {
        let shape = Shape::new(vec![2]).unwrap();
        let x = Element::from_blocks(
            shape.clone(),
            vec![crate::cstar_algebra::CMatrix::from_real_rows(&[&[0.3, 0.1], &[0.1, 0.6]]).unwrap()],
        )
        .unwrap();
        let a = validate_coefficient(&x, true).unwrap();
        let pair = coefficient_shift_pair(&a, 1, 3).unwrap();
        assert!(pair.is_validated());
        assert!(pair.balance_residual() <= 1e-12);
    }

    #[test]
    fn module_basis_is_not_enough_for_balance() {
        // phi(z) = z a^{-1} passes on unit vectors but not on a full complex basis
        let shape = Shape::new(vec![2]).unwrap();
        let x = Element::from_diagonal(&shape, &[0.25, 0.6]).unwrap();
        let a = validate_coefficient(&x, true).unwrap();
        let phi = linear_map(diagonal_placement(&shape, 1, 2, [(0, 0, a.inv().clone())])).unwrap();
        let psi = linear_map(diagonal_placement(&shape, 1, 2, [(0, 1, a.co_inv().clone())])).unwrap();
        let e = Vector::unit(phi.domain(), 0);
        let (pe, qe) = (phi.eval(&e), psi.eval(&e));
        let lhs = &(a.value() * &inner_product(&pe, &pe).unwrap()) * a.value();
        let rhs = &(a.one_minus() * &inner_product(&qe, &qe).unwrap()) * a.one_minus();
        assert!(elem_residual(&lhs, &rhs) < 1e-12);
        assert!(matches!(
            validate_pair(phi, psi, a),
            Err(Error::PairConditionViolated {
                condition: PairCondition::Balance,
                ..
            })
        ));
    }

    #[test]
    fn linear_maps_commute_with_action() {
        let shape = Shape::new(vec![2, 1]).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(2);
        let coeffs: Vec<Vec<Element<f64>>> = (0..2)
            .map(|_| (0..3).map(|_| crate::cstar_algebra::sample::random_element(&shape, &mut rng)).collect())
            .collect();
        let t = linear_map(coeffs).unwrap();
        let b = crate::cstar_algebra::sample::random_element::<f64, _>(&shape, &mut rng);
        let x = sample_vector(t.domain(), 3);
        let lhs = t.eval(&act(&b, &x).unwrap());
        let rhs = act(&b, &t.eval(&x)).unwrap();
        assert!(crate::hilbert_module::residual(&lhs, &rhs) <= 1e-12);
    }

    #[test]
    fn unitary_equivalence_examples() {
        let shape = Shape::new(vec![2]).unwrap();
        let s = ModuleSpace::new(shape.clone(), 2).unwrap();
        let (one, zero) = (Element::<f64>::one(&shape), Element::zero(&shape));
        let id = vec![vec![one.clone(), zero.clone()], vec![zero.clone(), one.clone()]];
        let swap = vec![vec![zero.clone(), one.clone()], vec![one.clone(), zero.clone()]];
        let twice = vec![vec![one.scale_real(2.0), zero.clone()], vec![zero, one.scale_real(2.0)]];
        assert!(check_unitary_equivalence(&id, &s, &s).unwrap());
        assert!(check_unitary_equivalence(&swap, &s, &s).unwrap());
        assert!(!check_unitary_equivalence(&twice, &s, &s).unwrap());
        let small = ModuleSpace::new(shape, 1).unwrap();
        assert!(check_unitary_equivalence(&id, &small, &s).is_err());
    }

    #[test]
    fn restricted_swap_is_a_pair() {
        let shape = Shape::complex();
        let (one, zero) = (Element::<f64>::one(&shape), Element::zero(&shape));
        let swap = vec![vec![zero.clone(), one.clone()], vec![one.clone(), zero.clone()]];
        let pair = restricted_isometry_pair(&swap, &[0]).unwrap();
        assert!(pair.is_validated());
        let id = vec![vec![one.clone(), zero.clone()], vec![zero, one]];
        assert!(restricted_isometry_pair(&id, &[0]).is_err());
    }

    #[test]
    fn pair_spec_round_trip() {
        let pair = interleave_pair::<f64>(0.25, 4).unwrap();
        let json = serde_json::to_value(PairSpec::from_pair(&pair)).unwrap();
        assert_eq!(json["phi"]["kind"], "linear");
        let spec: PairSpec<f64> = serde_json::from_value(json).unwrap();
        let rebuilt = spec.build(pair.source(), pair.target(), true).unwrap();
        assert_eq!(rebuilt.phi(), pair.phi());
    }
}
