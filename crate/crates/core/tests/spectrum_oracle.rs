//! `spectrum_bounds` against eigenvalues recovered from the characteristic
//! polynomial: Faddeev-LeVerrier coefficients, then root isolation between
//! the critical points of each derivative and bisection.

use cstar_jensen::cstar_algebra::{sample, CMatrix, Shape};
use cstar_jensen::hilbert_module::rng_for;
use num_complex::Complex64;

/// Coefficients `c_0..=c_n` of `det(t I - h)`.
fn char_poly(h: &CMatrix<f64>) -> Vec<f64> {
    let n = h.nrows();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut m = vec![Complex64::new(0.0, 0.0); n * n];
    for k in 1..=n {
        // M_k = H M_{k-1} + c_{n-k+1} I
        let mut next = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for t in 0..n {
                    s += h[(i, t)] * m[t * n + j];
                }
                next[i * n + j] = s;
            }
            next[i * n + i] += c[n - k + 1];
        }
        m = next;
        let mut trace = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for t in 0..n {
                trace += h[(i, t)] * m[t * n + i];
            }
        }
        c[n - k] = -trace.re / k as f64;
    }
    c
}

fn eval(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * t + ck)
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, &ck)| k as f64 * ck).collect()
}

fn bisect(c: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let (mut flo, fhi) = (eval(c, lo), eval(c, hi));
    if flo == 0.0 {
        return lo;
    }
    if fhi == 0.0 || flo.signum() == fhi.signum() {
        // touching root at a critical point
        return if flo.abs() < fhi.abs() { lo } else { hi };
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = eval(c, mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All roots of a real-rooted polynomial inside `[-bound, bound]`, ascending.
fn real_roots(c: &[f64], bound: f64) -> Vec<f64> {
    let degree = c.len() - 1;
    if degree == 0 {
        return Vec::new();
    }
    let mut marks = vec![-bound];
    marks.extend(real_roots(&derivative(c), bound));
    marks.push(bound);
    marks.windows(2).map(|w| bisect(c, w[0], w[1])).collect()
}

fn oracle_bounds(blocks: &[CMatrix<f64>]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for b in blocks {
        let frob = b.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let roots = real_roots(&char_poly(b), frob + 1.0);
        lo = lo.min(roots[0]);
        hi = hi.max(roots[roots.len() - 1]);
    }
    (lo, hi)
}

#[test]
fn spectrum_bounds_match_characteristic_polynomial() {
    let shapes: [&[usize]; 6] = [&[1], &[2], &[3], &[4], &[2, 1], &[4, 3, 1]];
    for (k, dims) in shapes.iter().enumerate() {
        let shape = Shape::new(dims.to_vec()).unwrap();
        for index in 0..50 {
            let h = sample::random_self_adjoint::<f64, _>(&shape, &mut rng_for(k as u64, index));
            let (lo, hi) = h.spectrum_bounds().unwrap();
            let (olo, ohi) = oracle_bounds(h.blocks());
            assert!((lo - olo).abs() <= 1e-9, "{dims:?} #{index}: min {lo} vs {olo}");
            assert!((hi - ohi).abs() <= 1e-9, "{dims:?} #{index}: max {hi} vs {ohi}");
        }
    }
}

#[test]
fn oracle_recovers_known_spectrum() {
    // [[2, 1], [1, 2]] has eigenvalues 1 and 3
    let m = CMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
    let roots = real_roots(&char_poly(&m), 10.0);
    assert!((roots[0] - 1.0).abs() < 1e-12 && (roots[1] - 3.0).abs() < 1e-12);
}
