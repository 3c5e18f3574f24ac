//! Search for `a`-biadditive forms `B(x, y) = Psi(<x, y> + <y, x>)`.
//!
//! `Psi` is a real-linear map from the self-adjoint part of the algebra into
//! one coordinate of the target module. `B(a x, a x) = a B(x, x)` for all
//! `x` becomes `Psi(a b a*) = a Psi(b)` for self-adjoint `b`, and likewise
//! for `1 - a`. Both constraints are stacked into one real linear system on
//! the values `Psi(b_k)` over a basis `b_k`, and the nullspace is read off
//! a Jacobi SVD.

use num_complex::Complex;

use crate::cstar_algebra::{dense, residual as elem_residual, Coeff, Element, Shape};
use crate::error::{Error, Result};
use crate::hilbert_module::{inner_product, ModuleSpace, Vector};
use crate::scalar::Real;

/// Real basis of the self-adjoint part: per block `E_jj`, then for `j < l`
/// the pair `E_jl + E_lj`, `i (E_jl - E_lj)`.
fn self_adjoint_basis<T: Real>(shape: &Shape) -> Vec<Element<T>> {
    let i_unit = Complex::new(T::zero(), T::one());
    let mut out = Vec::with_capacity(shape.complex_dim());
    for (k, &n) in shape.dims().iter().enumerate() {
        for j in 0..n {
            out.push(Element::matrix_unit(shape, k, j, j));
            for l in (j + 1)..n {
                let (ejl, elj) = (Element::matrix_unit(shape, k, j, l), Element::matrix_unit(shape, k, l, j));
                out.push(&ejl + &elj);
                out.push((&ejl - &elj).scale(i_unit));
            }
        }
    }
    out
}

/// Coordinates of the Hermitian part of `h` in [`self_adjoint_basis`].
fn self_adjoint_coords<T: Real>(h: &Element<T>) -> Vec<T> {
    let half = T::lit(0.5);
    let mut out = Vec::with_capacity(h.shape().complex_dim());
    for b in h.blocks() {
        let n = b.nrows();
        for j in 0..n {
            out.push(b[(j, j)].re);
            for l in (j + 1)..n {
                // Hermitian part of the (j, l) entry
                let z = (b[(j, l)] + b[(l, j)].conj()).scale(half);
                out.push(z.re);
                out.push(z.im);
            }
        }
    }
    out
}

/// Real and imaginary parts of every entry, block by block.
fn real_coords<T: Real>(x: &Element<T>) -> Vec<T> {
    x.blocks()
        .iter()
        .flat_map(|b| b.as_slice().iter().flat_map(|z| [z.re, z.im]))
        .collect()
}

/// Real basis of the algebra matching [`real_coords`].
fn real_basis<T: Real>(shape: &Shape) -> Vec<Element<T>> {
    let i_unit = Complex::new(T::zero(), T::one());
    let mut out = Vec::with_capacity(2 * shape.complex_dim());
    for (k, &n) in shape.dims().iter().enumerate() {
        for r in 0..n {
            for c in 0..n {
                let e = Element::matrix_unit(shape, k, r, c);
                let ie = e.scale(i_unit);
                out.push(e);
                out.push(ie);
            }
        }
    }
    out
}

/// One nullspace member: `Psi` into a single coordinate of the target.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelMap<T> {
    target: ModuleSpace,
    coord: usize,
    images: Vec<Element<T>>,
}

impl<T: Real> KernelMap<T> {
    pub fn target(&self) -> &ModuleSpace {
        &self.target
    }

    /// The target coordinate `Psi` writes into.
    pub fn coord(&self) -> usize {
        self.coord
    }

    /// `Psi(b_k)` for the self-adjoint basis `b_k`.
    pub fn images(&self) -> &[Element<T>] {
        &self.images
    }

    /// `Psi` applied to the Hermitian part of `b`.
    pub fn apply(&self, b: &Element<T>) -> Vector<T> {
        let shape = self.target.algebra();
        let value = self_adjoint_coords(b)
            .into_iter()
            .zip(&self.images)
            .fold(Element::zero(shape), |acc, (t, img)| &acc + &img.scale_real(t));
        Vector::single(&self.target, self.coord, value)
    }

    /// `B(x, y) = Psi(<x, y> + <y, x>)`.
    pub fn bilinear(&self, x: &Vector<T>, y: &Vector<T>) -> Result<Vector<T>> {
        let s = &inner_product(x, y)? + &inner_product(y, x)?;
        Ok(self.apply(&s))
    }

    /// Worst residual of `Psi(c b c*) = c Psi(b)` over `c` in `{a, 1 - a}`.
    pub fn constraint_residual(&self, a: &Coeff<T>, b: &Element<T>) -> T {
        [a.value(), a.one_minus()]
            .into_iter()
            .map(|c| {
                let lhs = self.apply(&(&(c * b) * &c.adjoint()));
                let rhs = c * &self.apply(b);
                elem_residual(&lhs.coords()[self.coord], &rhs.coords()[self.coord])
            })
            .fold(T::zero(), T::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Kernel<T> {
    basis: Vec<KernelMap<T>>,
    per_coordinate: usize,
}

impl<T: Real> Kernel<T> {
    pub fn basis(&self) -> &[KernelMap<T>] {
        &self.basis
    }

    /// Real dimension of the solution space into the whole target.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Real dimension for a single target coordinate.
    pub fn per_coordinate(&self) -> usize {
        self.per_coordinate
    }
}

/// Nullspace of the stacked intertwining constraints for `a` and `1 - a`.
pub fn solve_abiadditive_kernel<T: Real>(a: &Coeff<T>, target: &ModuleSpace) -> Result<Kernel<T>> {
    let shape = a.shape();
    if shape != target.algebra() {
        return Err(Error::ShapeMismatch {
            left: shape.dims().to_vec(),
            right: target.algebra().dims().to_vec(),
        });
    }
    let sa = self_adjoint_basis::<T>(shape);
    let re = real_basis::<T>(shape);
    let (d, r) = (sa.len(), re.len());
    let cols = d * r;
    let mut rows: Vec<T> = Vec::new();
    let mut n_rows = 0;
    for c in [a.value(), a.one_minus()] {
        // (c y) in real coordinates, as a matrix acting on y's coordinates
        let act: Vec<Vec<T>> = re.iter().map(|e| real_coords(&(c * e))).collect();
        for (l, b) in sa.iter().enumerate() {
            let alpha = self_adjoint_coords(&(&(c * b) * &c.adjoint()));
            for comp in 0..r {
                let mut row = vec![T::zero(); cols];
                for (k, &al) in alpha.iter().enumerate() {
                    row[k * r + comp] = row[k * r + comp] + al;
                }
                for (cp, column) in act.iter().enumerate() {
                    row[l * r + cp] = row[l * r + cp] - column[comp];
                }
                rows.extend(row);
                n_rows += 1;
            }
        }
    }
    let (sigma, v) = dense::jacobi_svd(&rows, n_rows, cols);
    let top = sigma.iter().copied().fold(T::zero(), T::max);
    let cutoff = T::lit((1e3 * T::epsilon().to_f64_lossy()).max(1e-9)) * top;
    let null: Vec<&Vec<T>> = sigma
        .iter()
        .zip(&v)
        .filter(|(s, _)| **s <= cutoff)
        .map(|(_, col)| col)
        .collect();
    let mut basis = Vec::with_capacity(null.len() * target.rank());
    for coord in 0..target.rank() {
        for col in &null {
            let images = (0..d)
                .map(|k| {
                    re.iter()
                        .enumerate()
                        .fold(Element::zero(shape), |acc, (cp, e)| &acc + &e.scale_real(col[k * r + cp]))
                })
                .collect();
            basis.push(KernelMap {
                target: target.clone(),
                coord,
                images,
            });
        }
    }
    Ok(Kernel {
        basis,
        per_coordinate: null.len(),
    })
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::cstar_algebra::{sample, validate_coefficient};

    fn space(dims: &[usize], rank: usize) -> ModuleSpace {
        ModuleSpace::new(Shape::new(dims.to_vec()).unwrap(), rank).unwrap()
    }

    #[test]
    fn coordinates_round_trip() {
        let shape = Shape::new(vec![3, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = sample::random_self_adjoint::<f64, _>(&shape, &mut rng);
        let coords = self_adjoint_coords(&h);
        let rebuilt = self_adjoint_basis::<f64>(&shape)
            .iter()
            .zip(&coords)
            .fold(Element::zero(&shape), |acc, (b, &t)| &acc + &b.scale_real(t));
        assert!(elem_residual(&rebuilt, &h) < 1e-15);
        let x = sample::random_element::<f64, _>(&shape, &mut rng);
        let rebuilt = real_basis::<f64>(&shape)
            .iter()
            .zip(real_coords(&x))
            .fold(Element::zero(&shape), |acc, (b, t)| &acc + &b.scale_real(t));
        assert!(elem_residual(&rebuilt, &x) < 1e-15);
    }

    #[test]
    fn scalar_coefficient_has_trivial_kernel() {
        for p in [0.1, 1.0 / 3.0, 0.5, 0.9] {
            let a = validate_coefficient(&Element::real_scalar(&Shape::complex(), p), true).unwrap();
            let k = solve_abiadditive_kernel(&a, &space(&[1], 2)).unwrap();
            assert_eq!(k.dimension(), 0, "p = {p}");
        }
    }

    #[test]
    fn distinct_block_scalars_have_trivial_kernel() {
        let shape = Shape::new(vec![1, 1]).unwrap();
        let a = validate_coefficient(&Element::from_diagonal(&shape, &[1.0 / 3.0, 0.5]).unwrap(), true).unwrap();
        assert_eq!(solve_abiadditive_kernel(&a, &space(&[1, 1], 1)).unwrap().dimension(), 0);
    }

    #[test]
    fn eigenvalue_resonance_gives_nontrivial_kernel() {
        // a = diag(2, 2/3, 4/3): a E a* = (4/3) E for E in span{E12 + E21, i(E12 - E21)},
        // and 4/3 is an eigenvalue of a with the matching (1 - a) eigenvalue -1/3
        let shape = Shape::new(vec![3]).unwrap();
        let a = validate_coefficient(&Element::from_diagonal(&shape, &[2.0, 2.0 / 3.0, 4.0 / 3.0]).unwrap(), false)
            .unwrap();
        let k = solve_abiadditive_kernel(&a, &space(&[3], 2)).unwrap();
        assert_eq!(k.per_coordinate(), 12);
        assert_eq!(k.dimension(), 24);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for m in k.basis() {
            for _ in 0..5 {
                let b = sample::random_self_adjoint::<f64, _>(&shape, &mut rng);
                assert!(m.constraint_residual(&a, &b) <= 1e-8);
            }
        }
    }
}
