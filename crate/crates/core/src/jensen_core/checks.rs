//! One checker per identity. All of them are pure given their inputs and
//! seed: sample `i` is drawn from its own stream `rng_for(seed, i)`.

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::{extract_a, extract_b, FormEval, IdentityResidual, MapEval, Tracker};
use crate::cstar_algebra::{residual as elem_residual, Coeff, Element};
use crate::error::{Error, PairCondition, Result};
use crate::hilbert_module::{
    complex_basis, inner_product, random_vector, residual, rng_for, sample_orthogonal_pair, ModuleSpace,
    OrthoSampler, Vector, ORTHOGONALITY_TOL,
};
use crate::mapping_kit::Pair;
use crate::scalar::Real;

pub(crate) fn vj<T: Real>(v: &Vector<T>) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

pub(crate) fn f64_of<T: Real>(v: T) -> f64 {
    v.to_f64_lossy()
}

pub(crate) fn require_validated<T: Real>(pair: &Pair<T>) -> Result<()> {
    if pair.is_validated() {
        Ok(())
    } else {
        Err(Error::PairNotValidated)
    }
}

fn check_coefficient<T: Real>(a: &Coeff<T>, space: &ModuleSpace) -> Result<()> {
    if a.shape() == space.algebra() {
        Ok(())
    } else {
        Err(Error::ShapeMismatch {
            left: a.shape().dims().to_vec(),
            right: space.algebra().dims().to_vec(),
        })
    }
}

/// `f` must act on the target of the pair.
pub(crate) fn check_on_pair<T: Real, F: MapEval<T> + ?Sized>(f: &F, pair: &Pair<T>) -> Result<()> {
    require_validated(pair)?;
    f.domain().check_same(pair.target())
}

/// `phi(z) + psi(w)` for random `z, w`: the `index`-th sample of `K`.
pub fn sample_in_k<T: Real>(pair: &Pair<T>, seed: u64, index: u64) -> Vector<T> {
    let mut rng = rng_for(seed, index);
    let z = random_vector(pair.source(), &mut rng);
    let w = random_vector(pair.source(), &mut rng);
    &pair.phi().eval(&z) + &pair.psi().eval(&w)
}

/// The `index`-th pair of random vectors in `space`.
pub(crate) fn sample_two<T: Real>(space: &ModuleSpace, seed: u64, index: u64) -> (Vector<T>, Vector<T>) {
    let mut rng = rng_for(seed, index);
    let x = random_vector(space, &mut rng);
    let y = random_vector(space, &mut rng);
    (x, y)
}

/// `f(a x + (1 - a) y) = a f(x) + (1 - a) f(y)` over `n` orthogonal pairs.
pub fn check_orthogonal_jensen<T: Real, F: MapEval<T> + ?Sized>(
    f: &F,
    a: &Coeff<T>,
    sampler: &OrthoSampler<T>,
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<IdentityResidual> {
    check_coefficient(a, f.domain())?;
    sampler
        .validate(f.domain())
        .map_err(|e| Error::InvalidSampler(e.to_string()))?;
    let (av, ac) = (a.value(), a.one_minus());
    let mut t = Tracker::new("eq-1.1", tol);
    for i in 0..n as u64 {
        let (x, y) = sample_orthogonal_pair(sampler, f.domain(), seed, i)?;
        let defect = f64_of(crate::hilbert_module::orthogonality_defect(&x, &y)?);
        if defect > ORTHOGONALITY_TOL {
            return Err(Error::InvalidSampler(format!(
                "sample {i} is not orthogonal (defect {defect:e})"
            )));
        }
        let lhs = f.eval(&(&(av * &x) + &(ac * &y)));
        let rhs = &(av * &f.eval(&x)) + &(ac * &f.eval(&y));
        t.record(f64_of(residual(&lhs, &rhs)), || json!({ "x": vj(&x), "y": vj(&y) }));
    }
    Ok(t.finish())
}

/// The six consequences of the Jensen equation with one argument at `0`:
///
/// * (i) `a f(a^{-1} x) + (1 - a) f(0) = f(x)`
/// * (ii) `a f(0) + (1 - a) f((1 - a)^{-1} x) = f(x)`
/// * (iii) `f(a^{-1} x) + a^{-1} (1 - a) f(0) = a^{-1} f(x)`
/// * (iv) `(1 - a)^{-1} a f(0) + f((1 - a)^{-1} x) = (1 - a)^{-1} f(x)`
/// * (v) `(1 - a)^{-1} a f(x) + f(0) = (1 - a)^{-1} f(a x)`
/// * (vi) `f(0) + a^{-1} (1 - a) f(x) = a^{-1} f((1 - a) x)`
///
/// Algebra coefficients act on values through the left module action.
pub fn lemma21_suite<T: Real, F: MapEval<T> + ?Sized>(
    f: &F,
    a: &Coeff<T>,
    xs: &[Vector<T>],
    tol: f64,
) -> Result<Vec<IdentityResidual>> {
    check_coefficient(a, f.domain())?;
    for x in xs {
        x.space().check_same(f.domain())?;
    }
    let (av, ai, ac, ci) = (a.value(), a.inv(), a.one_minus(), a.co_inv());
    let ai_ac: Element<T> = ai * ac;
    let ci_av: Element<T> = ci * av;
    let f0 = f.eval(&Vector::zero(f.domain()));
    let ids = [
        "lemma2.1-i",
        "lemma2.1-ii",
        "lemma2.1-iii",
        "lemma2.1-iv",
        "lemma2.1-v",
        "lemma2.1-vi",
    ];
    let mut trackers: Vec<Tracker> = ids.iter().map(|id| Tracker::new(id, tol)).collect();
    for x in xs {
        let fx = f.eval(x);
        let f_ai_x = f.eval(&(ai * x));
        let f_ci_x = f.eval(&(ci * x));
        let sides = [
            (&(av * &f_ai_x) + &(ac * &f0), fx.clone()),
            (&(av * &f0) + &(ac * &f_ci_x), fx.clone()),
            (&f_ai_x + &(&ai_ac * &f0), ai * &fx),
            (&(&ci_av * &f0) + &f_ci_x, ci * &fx),
            (&(&ci_av * &fx) + &f0, ci * &f.eval(&(av * x))),
            (&f0 + &(&ai_ac * &fx), ai * &f.eval(&(ac * x))),
        ];
        for (t, (lhs, rhs)) in trackers.iter_mut().zip(&sides) {
            t.record(f64_of(residual(lhs, rhs)), || json!({ "x": vj(x) }));
        }
    }
    Ok(trackers.into_iter().map(Tracker::finish).collect())
}

/// The expanded identity for `a f(phi(x) + phi(y)) + (1 - a) f(psi(x) - psi(y))`
/// at each `(x, y)` in the source of the pair.
pub fn lemma22_check<T: Real, F: MapEval<T> + ?Sized>(
    f: &F,
    pair: &Pair<T>,
    samples: &[(Vector<T>, Vector<T>)],
    tol: f64,
) -> Result<IdentityResidual> {
    check_on_pair(f, pair)?;
    let a = pair.coefficient();
    let (av, ai, ac, ci) = (a.value(), a.inv(), a.one_minus(), a.co_inv());
    let ai_ac: Element<T> = ai * ac;
    let ac_ai: Element<T> = ac * ai;
    let ci_av: Element<T> = ci * av;
    let (phi, psi) = (pair.phi(), pair.psi());
    let f0 = f.eval(&Vector::zero(f.domain()));
    let mut t = Tracker::new("lemma2.2", tol);
    for (x, y) in samples {
        x.space().check_same(pair.source())?;
        y.space().check_same(pair.source())?;
        let (px, py, qx, qy) = (phi.eval(x), phi.eval(y), psi.eval(x), psi.eval(y));
        let lhs = &(av * &f.eval(&(&px + &py))) + &(ac * &f.eval(&(&qx - &qy)));
        let left = &(&f.eval(&px) + &(&ai_ac * &f.eval(&qx))) - &(&ac_ai * &f0);
        let right = &(&(&ci_av * &f.eval(&py)) - &(&ci_av * &f0)) + &f.eval(&psi.eval(&-y));
        let rhs = &(av * &left) + &(ac * &right);
        t.record(f64_of(residual(&lhs, &rhs)), || json!({ "x": vj(x), "y": vj(y) }));
    }
    Ok(t.finish())
}

/// `|<u, v>| / (1 + |u| |v|)` with `u = phi(x) + a^{-1} (1 - a) psi(x)` and
/// `v = (1 - a)^{-1} a phi(y) - psi(y)`.
pub fn orthogonality_identity_check<T: Real>(
    pair: &Pair<T>,
    samples: &[(Vector<T>, Vector<T>)],
    tol: f64,
) -> Result<IdentityResidual> {
    require_validated(pair)?;
    let a = pair.coefficient();
    let ai_ac: Element<T> = a.inv() * a.one_minus();
    let ci_av: Element<T> = a.co_inv() * a.value();
    let mut t = Tracker::new("lemma2.2-orth", tol);
    for (x, y) in samples {
        x.space().check_same(pair.source())?;
        y.space().check_same(pair.source())?;
        let u = &pair.phi().eval(x) + &(&ai_ac * &pair.psi().eval(x));
        let v = &(&ci_av * &pair.phi().eval(y)) - &pair.psi().eval(y);
        let ip = inner_product(&u, &v)?;
        let r = ip.cstar_norm() / (T::one() + u.norm() * v.norm());
        t.record(f64_of(r), || json!({ "x": vj(x), "y": vj(y) }));
    }
    Ok(t.finish())
}

/// `g(z1 + z2) = g(z1) + g(z2)` for `z1, z2` sampled from `K`.
pub fn check_additivity_on_k<T: Real, G: MapEval<T> + ?Sized>(
    g: &G,
    pair: &Pair<T>,
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<IdentityResidual> {
    check_on_pair(g, pair)?;
    let mut t = Tracker::new("prop2.3-additive", tol);
    for i in 0..n as u64 {
        let z1 = sample_in_k(pair, seed, 2 * i);
        let z2 = sample_in_k(pair, seed, 2 * i + 1);
        let lhs = g.eval(&(&z1 + &z2));
        let rhs = &g.eval(&z1) + &g.eval(&z2);
        t.record(f64_of(residual(&lhs, &rhs)), || json!({ "z1": vj(&z1), "z2": vj(&z2) }));
    }
    Ok(t.finish())
}

/// The quadratic equation `g(x + y) + g(x - y) = 2 g(x) + 2 g(y)` on `K`.
/// When `g` is even with `g(0) = 0` on the samples, also
/// `a g(2 phi(x)) = (1 - a) g(2 psi(x))` and `a g(phi(x)) = (1 - a) g(psi(x))`.
pub fn check_quadratic_on_k<T: Real, G: MapEval<T> + ?Sized>(
    g: &G,
    pair: &Pair<T>,
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<Vec<IdentityResidual>> {
    check_on_pair(g, pair)?;
    let two = T::lit(2.0);
    let mut quad = Tracker::new("prop2.5-quadratic", tol);
    let g0 = g.eval(&Vector::zero(g.domain()));
    let mut even = f64_of(g0.norm()) <= tol;
    for i in 0..n as u64 {
        let x = sample_in_k(pair, seed, 2 * i);
        let y = sample_in_k(pair, seed, 2 * i + 1);
        let lhs = &g.eval(&(&x + &y)) + &g.eval(&(&x - &y));
        let gx = g.eval(&x);
        let rhs = &gx.scale_real(two) + &g.eval(&y).scale_real(two);
        quad.record(f64_of(residual(&lhs, &rhs)), || json!({ "x": vj(&x), "y": vj(&y) }));
        even = even && f64_of(residual(&g.eval(&-&x), &gx)) <= tol;
    }
    let mut out = vec![quad.finish()];
    if even {
        let a = pair.coefficient();
        let (av, ac) = (a.value(), a.one_minus());
        let mut id211 = Tracker::new("prop2.5-id211", tol);
        let mut id212 = Tracker::new("prop2.5-id212", tol);
        for i in 0..n as u64 {
            let (x, _) = sample_two::<T>(pair.source(), seed ^ 0x5eed, i);
            let (px, qx) = (pair.phi().eval(&x), pair.psi().eval(&x));
            let l1 = av * &g.eval(&px.scale_real(two));
            let r1 = ac * &g.eval(&qx.scale_real(two));
            id211.record(f64_of(residual(&l1, &r1)), || json!({ "x": vj(&x) }));
            let l2 = av * &g.eval(&px);
            let r2 = ac * &g.eval(&qx);
            id212.record(f64_of(residual(&l2, &r2)), || json!({ "x": vj(&x) }));
        }
        out.push(id211.finish());
        out.push(id212.finish());
    }
    Ok(out)
}

/// For a rational `p` and a pair with `<phi(z), psi(w)> = 0` and
/// `(1 - p)^2 <phi(z), phi(w)> = p^2 <psi(z), psi(w)>`: checks that the
/// polar form `B(x, x)` vanishes on `K` and that `f(x) = A(x) + f(0)` there.
/// The reported residual is the larger of `|B(x, x)|` and the
/// reconstruction residual.
pub fn p_jensen_affine_check<T: Real, F: MapEval<T> + ?Sized>(
    f: &F,
    p: Ratio<i64>,
    pair: &Pair<T>,
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<IdentityResidual> {
    let pf = p
        .to_f64()
        .filter(|v| *v > 0.0 && *v < 1.0)
        .ok_or_else(|| Error::DomainError(format!("p = {p} is not in (0, 1)")))?;
    f.domain().check_same(pair.target())?;
    let pt = T::lit(pf);
    let (wp, wq) = ((T::one() - pt) * (T::one() - pt), pt * pt);
    let check_tol = crate::mapping_kit::pair_tol::<T>();
    let basis = complex_basis::<T>(pair.source());
    let phis: Vec<_> = basis.iter().map(|z| pair.phi().eval(z)).collect();
    let psis: Vec<_> = basis.iter().map(|z| pair.psi().eval(z)).collect();
    for (zi, (pz, qz)) in phis.iter().zip(&psis).enumerate() {
        for (wi, (pw, qw)) in phis.iter().zip(&psis).enumerate() {
            let orth = f64_of(inner_product(pz, qw)?.cstar_norm() / (T::one() + pz.norm() * qw.norm()));
            if !(orth <= check_tol) {
                return Err(Error::PairConditionViolated {
                    condition: PairCondition::Orthogonality,
                    z: zi,
                    w: wi,
                    residual: orth,
                });
            }
            let lhs = inner_product(pz, pw)?.scale_real(wp);
            let rhs = inner_product(qz, qw)?.scale_real(wq);
            let bal = f64_of(elem_residual(&lhs, &rhs));
            if !(bal <= check_tol) {
                return Err(Error::PairConditionViolated {
                    condition: PairCondition::ScalarBalance,
                    z: zi,
                    w: wi,
                    residual: bal,
                });
            }
        }
    }
    let a_part = extract_a(f);
    let b_part = extract_b(f);
    let f0 = f.eval(&Vector::zero(f.domain()));
    let mut t = Tracker::new("cor2.9-B-vanishes", tol);
    for i in 0..n as u64 {
        let x = sample_in_k(pair, seed, i);
        let bxx = f64_of(b_part.eval(&x, &x).norm());
        let recon = f64_of(residual(&f.eval(&x), &(&a_part.eval(&x) + &f0)));
        t.record_many(&[bxx, recon], || json!({ "x": vj(&x) }));
    }
    Ok(t.finish())
}
