//! `f(x) = A(x) + B(x, x) + f(0)` on `K = phi(F) + psi(F)`.

use serde_json::json;

use super::checks::{check_additivity_on_k, check_on_pair, f64_of, sample_in_k, vj};
use super::{extract_a, extract_b, FormEval, IdentityResidual, MapEval, Tracker};
use crate::cstar_algebra::{residual as elem_residual, Coeff};
use crate::error::{Error, Result};
use crate::hilbert_module::{random_vector, residual, rng_for, Vector};
use crate::mapping_kit::Pair;
use crate::scalar::Real;

/// The odd part `A`, the polar form `B`, `f(0)`, and the sampled evidence
/// for the properties `A` and `B` are expected to have on `K`.
pub struct Decomposed<T> {
    pub additive: Box<dyn MapEval<T>>,
    pub form: Box<dyn FormEval<T>>,
    pub f0: Vector<T>,
    pub property_report: Vec<IdentityResidual>,
}

impl<T> std::fmt::Debug for Decomposed<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Decomposed")
            .field("property_report", &self.property_report)
            .finish_non_exhaustive()
    }
}

/// Builds `A` and `B` from `f` and samples `K` to check reconstruction,
/// additivity and `a`-additivity of `A`, and symmetry, biadditivity,
/// `a`-biadditivity and orthogonality preservation of `B`. Failed
/// properties are reported, not raised.
pub fn decompose<T: Real, F: MapEval<T> + Clone + 'static>(
    f: &F,
    a: &Coeff<T>,
    pair: &Pair<T>,
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<Decomposed<T>> {
    check_on_pair(f, pair)?;
    let pa = pair.coefficient().value();
    if a.shape() != pa.shape() || f64_of(elem_residual(a.value(), pa)) > 1e-12 {
        return Err(Error::DomainError("coefficient differs from the pair's coefficient".into()));
    }
    let big_a = extract_a(f.clone());
    let big_b = extract_b(f.clone());
    let f0 = f.eval(&Vector::zero(f.domain()));
    let (av, ac) = (a.value(), a.one_minus());
    let two = T::lit(2.0);
    let k = |i: u64| sample_in_k(pair, seed, i);

    let mut report = Vec::new();

    let mut t = Tracker::new("thm2.7-reconstruct", tol);
    for i in 0..n as u64 {
        let x = k(i);
        let rebuilt = &(&big_a.eval(&x) + &big_b.eval(&x, &x)) + &f0;
        t.record(f64_of(residual(&f.eval(&x), &rebuilt)), || json!({ "x": vj(&x) }));
    }
    report.push(t.finish());

    report.push(check_additivity_on_k(&big_a, pair, n, tol, seed ^ 0xA0)?);

    let mut t = Tracker::new("thm2.7-A-a-additive", tol);
    for i in 0..n as u64 {
        let x = k(n as u64 + i);
        let r = residual(&big_a.eval(&(av * &x)), &(av * &big_a.eval(&x)));
        t.record(f64_of(r), || json!({ "x": vj(&x) }));
    }
    report.push(t.finish());

    let mut sym = Tracker::new("thm2.7-B-symmetric", tol);
    let mut bi = Tracker::new("thm2.7-B-biadditive", tol);
    for i in 0..n as u64 {
        let base = 2 * n as u64 + 3 * i;
        let (x, y, z) = (k(base), k(base + 1), k(base + 2));
        sym.record(f64_of(residual(&big_b.eval(&x, &y), &big_b.eval(&y, &x))), || {
            json!({ "x": vj(&x), "y": vj(&y) })
        });
        let z2 = z.scale_real(two);
        let bxz = big_b.eval(&x, &z);
        let byz = big_b.eval(&y, &z);
        let bxy = big_b.eval(&x, &y);
        let xy = &x + &y;
        let rs = [
            residual(&big_b.eval(&xy, &z2), &(&bxz + &byz).scale_real(two)),
            residual(&big_b.eval(&x, &z2), &bxz.scale_real(two)),
            residual(&big_b.eval(&xy, &z), &(&bxz + &byz)),
            residual(&big_b.eval(&x, &(&y + &z)), &(&bxy + &bxz)),
        ];
        bi.record_many(&rs.map(f64_of), || json!({ "x": vj(&x), "y": vj(&y), "z": vj(&z) }));
    }
    report.push(sym.finish());
    report.push(bi.finish());

    let mut t = Tracker::new("thm2.7-B-a-biadditive", tol);
    for i in 0..n as u64 {
        let x = k(5 * n as u64 + i);
        let bxx = big_b.eval(&x, &x);
        let (ax, cx) = (av * &x, ac * &x);
        let rs = [
            residual(&big_b.eval(&ax, &ax), &(av * &bxx)),
            residual(&big_b.eval(&cx, &cx), &(ac * &bxx)),
        ];
        t.record_many(&rs.map(f64_of), || json!({ "x": vj(&x) }));
    }
    report.push(t.finish());

    let mut t = Tracker::new("thm2.7-B-orth-preserving", tol);
    for i in 0..n as u64 {
        let mut rng = rng_for(seed ^ 0x0B, i);
        let z = random_vector(pair.source(), &mut rng);
        let w = random_vector(pair.source(), &mut rng);
        let (x, y) = (pair.phi().eval(&z), pair.psi().eval(&w));
        let bxy = big_b.eval(&x, &y);
        let r = bxy.norm() / (T::one() + bxy.norm());
        t.record(f64_of(r), || json!({ "x": vj(&x), "y": vj(&y) }));
    }
    report.push(t.finish());

    Ok(Decomposed {
        additive: Box::new(big_a),
        form: Box::new(big_b),
        f0,
        property_report: report,
    })
}

/// Two decompositions of `f` agree: `A1 = A2` and `B1(x, x) = B2(x, x)` on
/// random points of the domain (the first one is `0`), and both store `f(0)`.
pub fn uniqueness_check<T: Real, F: MapEval<T> + ?Sized>(
    f: &F,
    d1: &Decomposed<T>,
    d2: &Decomposed<T>,
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<IdentityResidual> {
    for d in [d1, d2] {
        d.additive.domain().check_same(f.domain())?;
        d.form.domain().check_same(f.domain())?;
    }
    let f0 = f.eval(&Vector::zero(f.domain()));
    let base = [residual(&d1.f0, &f0), residual(&d2.f0, &f0)].map(f64_of);
    let mut t = Tracker::new("thm2.7-unique", tol);
    for i in 0..n.max(1) as u64 {
        let x = if i == 0 {
            Vector::zero(f.domain())
        } else {
            random_vector(f.domain(), &mut rng_for(seed, i))
        };
        let ra = residual(&d1.additive.eval(&x), &d2.additive.eval(&x));
        let rb = residual(&d1.form.eval(&x, &x), &d2.form.eval(&x, &x));
        t.record_many(&[f64_of(ra), f64_of(rb), base[0], base[1]], || json!({ "x": vj(&x) }));
    }
    Ok(t.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cstar_algebra::{validate_coefficient, Element, Shape};
    use crate::hilbert_module::sample_vector;
    use crate::mapping_kit::{
        coefficient_shift_pair, compose_jensen, constant_map, interleave_pair, linear_map, quad_form, Map,
    };

    fn random_affine(space: &crate::hilbert_module::ModuleSpace, seed: u64) -> Map<f64> {
        let mut rng = rng_for(seed, 0);
        let coeffs = (0..space.rank())
            .map(|_| {
                (0..space.rank())
                    .map(|_| crate::cstar_algebra::sample::random_element(space.algebra(), &mut rng))
                    .collect()
            })
            .collect();
        compose_jensen(&linear_map(coeffs).unwrap(), None, random_vector(space, &mut rng)).unwrap()
    }

    #[test]
    fn constant_decomposes_trivially() {
        let pair = interleave_pair::<f64>(0.5, 4).unwrap();
        let c = sample_vector(pair.target(), 4);
        let f = constant_map(pair.target(), c.clone()).unwrap();
        let d = decompose(&f, pair.coefficient(), &pair, 20, 1e-9, 0).unwrap();
        assert_eq!(d.f0, c);
        let x = sample_vector(pair.target(), 5);
        assert!(d.additive.eval(&x).is_exact_zero());
        assert!(d.form.eval(&x, &x).is_exact_zero());
        assert!(d.property_report.iter().all(|r| r.pass && r.max_residual == 0.0));
        assert_eq!(d.property_report.len(), 7);
    }

    #[test]
    fn affine_round_trip() {
        let pair = interleave_pair::<f64>(0.5, 8).unwrap();
        let f = random_affine(pair.target(), 3);
        let d = decompose(&f, pair.coefficient(), &pair, 50, 1e-9, 1).unwrap();
        assert!(d.property_report.iter().all(|r| r.pass), "{:?}", d.property_report);
        let x = sample_in_k(&pair, 9, 0);
        assert!(d.form.eval(&x, &x).norm() <= 1e-9);
    }

    #[test]
    fn affine_round_trip_noncommutative() {
        let shape = Shape::new(vec![2, 1]).unwrap();
        let mut rng = rng_for(4, 4);
        let a = validate_coefficient(
            &crate::cstar_algebra::sample::random_order_interior(&shape, 0.1, 0.9, &mut rng),
            true,
        )
        .unwrap();
        let pair = coefficient_shift_pair(&a, 1, 3).unwrap();
        let f = random_affine(pair.target(), 8);
        let d = decompose(&f, &a, &pair, 50, 1e-9, 2).unwrap();
        assert!(d.property_report.iter().all(|r| r.pass), "{:?}", d.property_report);
    }

    #[test]
    fn quadratic_content_fails_a_biadditivity() {
        let pair = interleave_pair::<f64>(0.25, 4).unwrap();
        let e = pair.target();
        let (_, diag) = quad_form(sample_vector(e, 2), 1.0, e).unwrap();
        let f = compose_jensen(&crate::mapping_kit::identity_map(e), Some(&diag), sample_vector(e, 3)).unwrap();
        let d = decompose(&f, pair.coefficient(), &pair, 30, 1e-9, 0).unwrap();
        let by_id = |id: &str| d.property_report.iter().find(|r| r.id == id).unwrap();
        assert!(by_id("thm2.7-B-a-biadditive").max_residual > 1e-3);
        assert!(by_id("thm2.7-B-symmetric").pass);
        assert!(by_id("thm2.7-reconstruct").pass);
    }

    #[test]
    fn uniqueness_examples() {
        let pair = interleave_pair::<f64>(0.5, 4).unwrap();
        let f = random_affine(pair.target(), 6);
        let d1 = decompose(&f, pair.coefficient(), &pair, 10, 1e-9, 1).unwrap();
        let d2 = decompose(&f, pair.coefficient(), &pair, 10, 1e-9, 2).unwrap();
        let r = uniqueness_check(&f, &d1, &d2, 20, 1e-10, 0).unwrap();
        assert!(r.pass && r.max_residual == 0.0);

        // A shifted by a constant: A(0) != 0
        let bad = Decomposed {
            additive: Box::new(PlusConst {
                inner: d2.additive,
                c: sample_vector(pair.target(), 11),
            }),
            ..d2
        };
        let r = uniqueness_check(&f, &d1, &bad, 20, 1e-10, 0).unwrap();
        assert!(!r.pass);
        assert!(r.worst_input["x"]["coords"][0]["blocks"][0][0][0][0] == 0.0);
    }

    /// `x -> A(x) + c`
    struct PlusConst<T> {
        inner: Box<dyn MapEval<T>>,
        c: Vector<T>,
    }

    impl MapEval<f64> for PlusConst<f64> {
        fn domain(&self) -> &crate::hilbert_module::ModuleSpace {
            self.inner.domain()
        }

        fn codomain(&self) -> &crate::hilbert_module::ModuleSpace {
            self.inner.codomain()
        }

        fn eval(&self, x: &Vector<f64>) -> Vector<f64> {
            &self.inner.eval(x) + &self.c
        }
    }

    #[test]
    fn unvalidated_pair_is_rejected() {
        let pair = interleave_pair::<f64>(0.5, 4).unwrap();
        let raw = Pair::unchecked(pair.phi().clone(), pair.psi().clone(), pair.coefficient().clone());
        let f = random_affine(pair.target(), 6);
        assert!(matches!(
            decompose(&f, pair.coefficient(), &raw, 5, 1e-9, 0),
            Err(Error::PairNotValidated)
        ));
        let other = validate_coefficient(&Element::real_scalar(&Shape::complex(), 0.3), true).unwrap();
        assert!(decompose(&f, &other, &pair, 5, 1e-9, 0).is_err());
    }
}
