//! Random algebra elements for property campaigns.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{CMatrix, Element, Shape};
use crate::scalar::Real;

/// Complex standard normal: real and imaginary parts i.i.d. `N(0, 1)`.
pub fn complex_normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

/// Element with i.i.d. complex standard normal entries in every block.
pub fn random_element<T: Real, R: Rng + ?Sized>(shape: &Shape, rng: &mut R) -> Element<T> {
    let blocks = shape
        .dims()
        .iter()
        .map(|&n| CMatrix::from_fn(n, n, |_, _| complex_normal(rng)))
        .collect();
    Element::from_blocks(shape.clone(), blocks).expect("sampled blocks conform")
}

/// Random self-adjoint element `(g + g*) / 2`.
pub fn random_self_adjoint<T: Real, R: Rng + ?Sized>(shape: &Shape, rng: &mut R) -> Element<T> {
    let g = random_element::<T, R>(shape, rng);
    (&g + &g.adjoint()).scale_real(T::lit(0.5))
}

/// Unitary from Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix<T> {
    loop {
        let mut cols: Vec<Vec<Complex<T>>> = (0..n)
            .map(|_| (0..n).map(|_| complex_normal(rng)).collect())
            .collect();
        let mut degenerate = false;
        for j in 0..n {
            for k in 0..j {
                let proj: Complex<T> = (0..n).fold(Complex::zero(), |acc, i| acc + cols[k][i].conj() * cols[j][i]);
                for i in 0..n {
                    let v = cols[k][i];
                    cols[j][i] = cols[j][i] - proj * v;
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
            if norm <= T::lit(1e-6) {
                degenerate = true;
                break;
            }
            for z in &mut cols[j] {
                *z = *z / Complex::new(norm, T::zero());
            }
        }
        if !degenerate {
            return CMatrix::from_fn(n, n, |i, j| cols[j][i]);
        }
    }
}

/// Self-adjoint `a = U diag(lambda) U*` per block with every eigenvalue drawn
/// uniformly from `[lo, hi]`. With `0 < lo <= hi < 1` the result satisfies
/// `0 < a < 1`.
pub fn random_order_interior<T: Real, R: Rng + ?Sized>(shape: &Shape, lo: f64, hi: f64, rng: &mut R) -> Element<T> {
    let blocks = shape
        .dims()
        .iter()
        .map(|&n| {
            let u = random_unitary::<T, R>(n, rng);
            let diag: Vec<_> = (0..n)
                .map(|_| Complex::new(T::lit(rng.random_range(lo..=hi)), T::zero()))
                .collect();
            let d = CMatrix::diagonal(&diag);
            let a = u.matmul(&d).matmul(&u.adjoint());
            // exact Hermitian symmetry
            CMatrix::from_fn(n, n, |i, j| {
                (a[(i, j)] + a[(j, i)].conj()) / Complex::new(T::lit(2.0), T::zero())
            })
        })
        .collect();
    Element::from_blocks(shape.clone(), blocks).expect("sampled blocks conform")
}
