//! Sample-based verifiers for the Jensen-type identities and the
//! odd/even decomposition `f(x) = A(x) + B(x, x) + f(0)`.

mod checks;
mod decompose;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::hilbert_module::{ModuleSpace, Vector};
use crate::mapping_kit::{Map, QuadForm};
use crate::scalar::Real;

pub use checks::{
    check_additivity_on_k, check_orthogonal_jensen, check_quadratic_on_k, lemma21_suite, lemma22_check,
    orthogonality_identity_check, p_jensen_affine_check, sample_in_k,
};
pub use decompose::{decompose, uniqueness_check, Decomposed};

/// Every identity id the verifiers can report, in catalogue order.
pub const IDENTITY_IDS: [&str; 21] = [
    "eq-1.1",
    "lemma2.1-i",
    "lemma2.1-ii",
    "lemma2.1-iii",
    "lemma2.1-iv",
    "lemma2.1-v",
    "lemma2.1-vi",
    "lemma2.2",
    "lemma2.2-orth",
    "prop2.3-additive",
    "prop2.5-quadratic",
    "prop2.5-id211",
    "prop2.5-id212",
    "thm2.7-reconstruct",
    "thm2.7-A-a-additive",
    "thm2.7-B-symmetric",
    "thm2.7-B-biadditive",
    "thm2.7-B-a-biadditive",
    "thm2.7-B-orth-preserving",
    "thm2.7-unique",
    "cor2.9-B-vanishes",
];

pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_TOL: f64 = 1e-9;

/// Outcome of one identity over a batch of samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub id: String,
    pub samples: usize,
    /// Non-finite values serialize as `null` and never pass.
    #[serde(serialize_with = "finite_or_null", deserialize_with = "null_as_nan")]
    pub max_residual: f64,
    pub worst_input: serde_json::Value,
    pub pass: bool,
}

fn finite_or_null<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

fn null_as_nan<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

impl IdentityResidual {
    /// A failed entry recording an error instead of a residual.
    pub fn error(id: &str, message: impl Into<String>) -> Self {
        Self {
            id: id.to_string(),
            samples: 0,
            max_residual: f64::NAN,
            worst_input: serde_json::json!({ "error": message.into() }),
            pass: false,
        }
    }
}

/// Running maximum of residuals; NaN is sticky and counts as a failure.
pub(crate) struct Tracker {
    id: &'static str,
    tol: f64,
    samples: usize,
    max: f64,
    worst: serde_json::Value,
}

impl Tracker {
    pub(crate) fn new(id: &'static str, tol: f64) -> Self {
        Self {
            id,
            tol,
            samples: 0,
            max: 0.0,
            worst: serde_json::Value::Null,
        }
    }

    pub(crate) fn record(&mut self, residual: f64, input: impl FnOnce() -> serde_json::Value) {
        self.samples += 1;
        if self.max.is_nan() {
            return;
        }
        if residual.is_nan() || residual > self.max || self.worst.is_null() {
            self.max = if residual.is_nan() { f64::NAN } else { residual.max(self.max) };
            self.worst = input();
        }
    }

    /// Records the worse of several residuals for one sample.
    pub(crate) fn record_many(&mut self, residuals: &[f64], input: impl FnOnce() -> serde_json::Value) {
        let worst = residuals
            .iter()
            .copied()
            .fold(0.0f64, |m, r| if r.is_nan() || m.is_nan() { f64::NAN } else { m.max(r) });
        self.record(worst, input);
    }

    pub(crate) fn finish(self) -> IdentityResidual {
        IdentityResidual {
            id: self.id.to_string(),
            samples: self.samples,
            max_residual: self.max,
            worst_input: self.worst,
            pass: self.max <= self.tol,
        }
    }
}

/// A mapping that can be evaluated pointwise.
pub trait MapEval<T>: Send + Sync {
    fn domain(&self) -> &ModuleSpace;
    fn codomain(&self) -> &ModuleSpace;
    /// Panics if `x` is outside the domain.
    fn eval(&self, x: &Vector<T>) -> Vector<T>;
}

/// A two-argument form that can be evaluated pointwise.
pub trait FormEval<T>: Send + Sync {
    fn domain(&self) -> &ModuleSpace;
    fn codomain(&self) -> &ModuleSpace;
    fn eval(&self, x: &Vector<T>, y: &Vector<T>) -> Vector<T>;
}

impl<T: Real> MapEval<T> for Map<T> {
    fn domain(&self) -> &ModuleSpace {
        Map::domain(self)
    }

    fn codomain(&self) -> &ModuleSpace {
        Map::codomain(self)
    }

    fn eval(&self, x: &Vector<T>) -> Vector<T> {
        Map::eval(self, x)
    }
}

impl<T, M: MapEval<T> + ?Sized> MapEval<T> for &M {
    fn domain(&self) -> &ModuleSpace {
        (**self).domain()
    }

    fn codomain(&self) -> &ModuleSpace {
        (**self).codomain()
    }

    fn eval(&self, x: &Vector<T>) -> Vector<T> {
        (**self).eval(x)
    }
}

impl<T, M: MapEval<T> + ?Sized> MapEval<T> for Box<M> {
    fn domain(&self) -> &ModuleSpace {
        (**self).domain()
    }

    fn codomain(&self) -> &ModuleSpace {
        (**self).codomain()
    }

    fn eval(&self, x: &Vector<T>) -> Vector<T> {
        (**self).eval(x)
    }
}

impl<T, F: FormEval<T> + ?Sized> FormEval<T> for Box<F> {
    fn domain(&self) -> &ModuleSpace {
        (**self).domain()
    }

    fn codomain(&self) -> &ModuleSpace {
        (**self).codomain()
    }

    fn eval(&self, x: &Vector<T>, y: &Vector<T>) -> Vector<T> {
        (**self).eval(x, y)
    }
}

/// A [`QuadForm`] read on a given domain.
#[derive(Clone, Debug)]
pub struct BoundForm<T> {
    pub form: QuadForm<T>,
    pub domain: ModuleSpace,
}

impl<T: Real> FormEval<T> for BoundForm<T> {
    fn domain(&self) -> &ModuleSpace {
        &self.domain
    }

    fn codomain(&self) -> &ModuleSpace {
        self.form.target().space()
    }

    fn eval(&self, x: &Vector<T>, y: &Vector<T>) -> Vector<T> {
        self.form.apply(x, y)
    }
}

/// `f_o(x) = (f(x) - f(-x)) / 2`.
#[derive(Clone, Debug)]
pub struct OddPart<F>(pub F);

/// `f_e(x) = (f(x) + f(-x)) / 2`.
#[derive(Clone, Debug)]
pub struct EvenPart<F>(pub F);

/// `f_e(x) - f(0)`: the even part shifted to vanish at the origin.
#[derive(Clone, Debug)]
pub struct CenteredEvenPart<F>(pub F);

/// `B(x, y) = (f(x + y) + f(-x - y) - f(x - y) - f(-x + y)) / 8`.
#[derive(Clone, Debug)]
pub struct PolarForm<F>(pub F);

macro_rules! delegate_spaces {
    () => {
        fn domain(&self) -> &ModuleSpace {
            self.0.domain()
        }

        fn codomain(&self) -> &ModuleSpace {
            self.0.codomain()
        }
    };
}

impl<T: Real, F: MapEval<T>> MapEval<T> for OddPart<F> {
    delegate_spaces!();

    fn eval(&self, x: &Vector<T>) -> Vector<T> {
        (&self.0.eval(x) - &self.0.eval(&-x)).scale_real(T::lit(0.5))
    }
}

impl<T: Real, F: MapEval<T>> MapEval<T> for EvenPart<F> {
    delegate_spaces!();

    fn eval(&self, x: &Vector<T>) -> Vector<T> {
        (&self.0.eval(x) + &self.0.eval(&-x)).scale_real(T::lit(0.5))
    }
}

impl<T: Real, F: MapEval<T>> MapEval<T> for CenteredEvenPart<F> {
    delegate_spaces!();

    fn eval(&self, x: &Vector<T>) -> Vector<T> {
        let even = (&self.0.eval(x) + &self.0.eval(&-x)).scale_real(T::lit(0.5));
        &even - &self.0.eval(&Vector::zero(self.0.domain()))
    }
}

impl<T: Real, F: MapEval<T>> FormEval<T> for PolarForm<F> {
    delegate_spaces!();

    fn eval(&self, x: &Vector<T>, y: &Vector<T>) -> Vector<T> {
        let f = &self.0;
        let (nx, ny) = (-x, -y);
        // each group is a commutative sum of terms that trade places under
        // x <-> y, so the result is bitwise symmetric
        let plus = &f.eval(&(x + y)) + &f.eval(&(&nx + &ny));
        let minus = &f.eval(&(x - y)) + &f.eval(&(y - x));
        (&plus - &minus).scale_real(T::lit(0.125))
    }
}

/// `(f_o, f_e)`.
pub fn odd_even_split<F: Clone>(f: F) -> (OddPart<F>, EvenPart<F>) {
    (OddPart(f.clone()), EvenPart(f))
}

/// `A(x) = (f(x) - f(-x)) / 2`.
pub fn extract_a<F>(f: F) -> OddPart<F> {
    OddPart(f)
}

/// `B(x, y) = (f(x + y) + f(-x - y) - f(x - y) - f(-x + y)) / 8`.
pub fn extract_b<F>(f: F) -> PolarForm<F> {
    PolarForm(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cstar_algebra::{Element, Shape};
    use crate::hilbert_module::{inner_product, residual, sample_vector};
    use crate::mapping_kit::{compose_jensen, constant_map, linear_map, quad_form};

    fn c(v: f64) -> Element<f64> {
        Element::real_scalar(&Shape::complex(), v)
    }

    fn line(v: f64) -> Vector<f64> {
        Vector::new(vec![c(v)]).unwrap()
    }

    fn affine_3x_5() -> Map<f64> {
        compose_jensen(&linear_map(vec![vec![c(3.0)]]).unwrap(), None, line(5.0)).unwrap()
    }

    #[test]
    fn affine_scalar_split() {
        let f = affine_3x_5();
        assert_eq!(f.eval(&line(0.0)), line(5.0));
        let (odd, even) = odd_even_split(&f);
        assert_eq!(odd.eval(&line(2.0)), line(6.0));
        assert_eq!(even.eval(&line(2.0)), line(5.0));
        assert_eq!(extract_a(&f).eval(&line(-1.5)), line(-4.5));
    }

    #[test]
    fn constant_split() {
        let s = ModuleSpace::new(Shape::new(vec![2]).unwrap(), 2).unwrap();
        let cval = sample_vector::<f64>(&s, 1);
        let f = constant_map(&s, cval.clone()).unwrap();
        let x = sample_vector::<f64>(&s, 2);
        let (odd, even) = odd_even_split(&f);
        assert!(odd.eval(&x).is_exact_zero());
        assert_eq!(even.eval(&x), cval);
        assert!(extract_b(&f).eval(&x, &x).is_exact_zero());
    }

    #[test]
    fn split_symmetries_are_exact() {
        let s = ModuleSpace::new(Shape::new(vec![2, 1]).unwrap(), 2).unwrap();
        let g = sample_vector::<f64>(&s, 3);
        let (_, diag) = quad_form(g, 0.7, &s).unwrap();
        let f = compose_jensen(&crate::mapping_kit::identity_map(&s), Some(&diag), sample_vector(&s, 4)).unwrap();
        let (odd, even) = odd_even_split(&f);
        let x = sample_vector::<f64>(&s, 5);
        assert_eq!(odd.eval(&-&x), -odd.eval(&x));
        assert_eq!(even.eval(&-&x), even.eval(&x));
        let sum = &odd.eval(&x) + &even.eval(&x);
        assert!(residual(&sum, &f.eval(&x)) <= 1e-15);
    }

    #[test]
    fn polar_form_is_bitwise_symmetric_and_vanishes_at_zero() {
        let s = ModuleSpace::new(Shape::new(vec![2]).unwrap(), 3).unwrap();
        let g = sample_vector::<f64>(&s, 6);
        let (_, diag) = quad_form(g, 1.3, &s).unwrap();
        let b = extract_b(diag);
        for seed in 0..10 {
            let x = sample_vector::<f64>(&s, seed);
            let y = sample_vector::<f64>(&s, seed + 50);
            assert_eq!(b.eval(&x, &y), b.eval(&y, &x));
            assert!(b.eval(&x, &Vector::zero(&s)).is_exact_zero());
        }
    }

    /// Expanding the polarization formula by hand for the diagonal
    /// `Q(x) = 2s <x, x> g` gives `B(x, y) = s (<x, y> + <y, x>) g`.
    #[test]
    fn polar_form_recovers_quadratic_kernel() {
        let s = ModuleSpace::new(Shape::new(vec![2, 1]).unwrap(), 2).unwrap();
        let g = sample_vector::<f64>(&s, 7);
        let scale = 0.5;
        let (form, diag) = quad_form(g.clone(), scale, &s).unwrap();
        let b = extract_b(diag);
        for seed in 0..10 {
            let x = sample_vector::<f64>(&s, seed);
            let y = sample_vector::<f64>(&s, seed + 20);
            let k = (&inner_product(&x, &y).unwrap() + &inner_product(&y, &x).unwrap()).scale_real(scale);
            let oracle = &k * &g;
            assert!(residual(&b.eval(&x, &y), &oracle) <= 1e-9);
            assert!(residual(&form.apply(&x, &y), &oracle) <= 1e-12);
        }
    }

    #[test]
    fn identity_residual_json() {
        let mut t = Tracker::new("eq-1.1", 1e-9);
        t.record(1e-12, || serde_json::json!({"x": 1}));
        t.record(f64::NAN, || serde_json::json!({"x": 2}));
        t.record(0.5, || serde_json::json!({"x": 3}));
        let r = t.finish();
        assert!(!r.pass);
        assert_eq!(r.samples, 3);
        let json = serde_json::to_value(&r).unwrap();
        assert!(json["max_residual"].is_null());
        assert_eq!(json["worst_input"]["x"], 2);
        let back: IdentityResidual = serde_json::from_value(json).unwrap();
        assert!(back.max_residual.is_nan());
    }
}
