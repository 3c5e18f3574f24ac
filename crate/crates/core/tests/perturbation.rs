use cstar_jensen::cstar_algebra::{sample, validate_coefficient, Element, Shape};
use cstar_jensen::hilbert_module::{random_vector, rng_for, ModuleSpace, OrthoSampler, Vector};
use cstar_jensen::jensen_core::{check_orthogonal_jensen, lemma21_suite};
use cstar_jensen::mapping_kit::{compose_jensen, linear_map, perturb, Map};

fn affine(space: &ModuleSpace, seed: u64) -> Map<f64> {
    let mut rng = rng_for(seed, 0);
    let coeffs = (0..space.rank())
        .map(|_| (0..space.rank()).map(|_| sample::random_element(space.algebra(), &mut rng)).collect())
        .collect();
    let c = random_vector(space, &mut rng);
    compose_jensen(&linear_map(coeffs).unwrap(), None, c).unwrap()
}

#[test]
fn residual_grows_with_bump_magnitude() {
    let shape = Shape::new(vec![2, 1]).unwrap();
    let space = ModuleSpace::new(shape.clone(), 2).unwrap();
    let a = validate_coefficient(&sample::random_order_interior(&shape, 0.2, 0.8, &mut rng_for(7, 0)), true).unwrap();
    let f = affine(&space, 11);
    let mut rng = rng_for(7, 1);
    // a x + (1 - a) 0 lands on the bump, x and 0 stay outside it
    let x = random_vector::<f64, _>(&space, &mut rng);
    let site = a.value() * &x;
    let direction = random_vector::<f64, _>(&space, &mut rng);
    let sampler = OrthoSampler::Explicit(vec![(x.clone(), Vector::zero(&space))]);

    let mut previous = (0.0, 0.0);
    for magnitude in [0.0, 1e-6, 1e-4, 1e-2, 0.1, 1.0, 10.0, 100.0] {
        let g = perturb(&f, site.clone(), direction.scale_real(magnitude), 1e-3).unwrap();
        let jensen = check_orthogonal_jensen(&g, &a, &sampler, 4, 1e-9, 3).unwrap().max_residual;
        let suite = lemma21_suite(&g, &a, std::slice::from_ref(&site), 1e-9).unwrap();
        let lemma = suite.iter().map(|r| r.max_residual).fold(0.0, f64::max);
        assert!(jensen >= previous.0, "magnitude {magnitude}: {jensen} < {}", previous.0);
        assert!(lemma >= previous.1, "magnitude {magnitude}: {lemma} < {}", previous.1);
        previous = (jensen, lemma);
    }
    assert!(previous.0 >= 1e-3 && previous.1 >= 1e-3);
}

#[test]
fn bump_misses_everything_outside_its_radius() {
    let space = ModuleSpace::new(Shape::complex(), 2).unwrap();
    let f = affine(&space, 2);
    let far = Vector::single(&space, 0, Element::real_scalar(&Shape::complex(), 1e6));
    let g = perturb(&f, far, Vector::unit(&space, 1), 0.5).unwrap();
    for index in 0..20 {
        let x = random_vector::<f64, _>(&space, &mut rng_for(5, index));
        assert_eq!(g.eval(&x), f.eval(&x));
    }
}
