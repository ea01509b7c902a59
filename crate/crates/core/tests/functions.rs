use std::f64::consts::PI;

use herglotz::cutplane::{ComponentSignature, CutPlanePoint, I};
use herglotz::functions::{
    catalogue, herglotz_imag_lower_bound_probe, CatalogueId, CauchyFunction, Evaluable,
    HerglotzFunction, HerglotzTriple,
};
use herglotz::measures::{nevanlinna_residual, Density, Measure, QuadratureConfig};
use herglotz::sampling;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pt(z: &[Complex64]) -> CutPlanePoint {
    CutPlanePoint::new(z.to_vec()).unwrap()
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn triple(measure: Measure) -> HerglotzTriple {
    HerglotzTriple {
        a: 0.0,
        b: vec![0.0; measure.dim()],
        measure,
    }
}

#[test]
fn catalogue_f2_is_the_cauchy_function_of_the_diagonal_measure() {
    let g = CauchyFunction::new(Measure::diagonal(), cfg()).unwrap();
    let f2 = catalogue(CatalogueId::F2);
    for sig in ComponentSignature::all(2).unwrap() {
        for z in sampling::random_points(&sig, 10, 11) {
            let d = (g.value(&z).unwrap() - f2.value(&z).unwrap()).norm();
            assert!(d < 1e-7, "{z}: {d}");
        }
    }
}

#[test]
fn catalogue_f4_is_f2_plus_five_lebesgue() {
    let h5 =
        HerglotzFunction::new(triple(Measure::LebesgueScaled { dim: 2, c: 5.0 }), cfg()).unwrap();
    let f2 = catalogue(CatalogueId::F2);
    let f4 = catalogue(CatalogueId::F4);
    for sig in ComponentSignature::all(2).unwrap() {
        for z in sampling::random_points(&sig, 5, 12) {
            let sum = f2.value(&z).unwrap() + h5.value(&z).unwrap();
            let d = (sum - f4.value(&z).unwrap()).norm();
            assert!(d < 1e-8, "{z}: {d}");
        }
    }
}

#[test]
fn f4_alternative_measure_agrees_on_upper_and_differs_on_mixed() {
    let alt = HerglotzFunction::new(triple(Measure::f4_alternative()), cfg()).unwrap();
    let f4 = catalogue(CatalogueId::F4);
    let upper = ComponentSignature::all(2).unwrap()[0].clone();
    for z in sampling::random_points(&upper, 20, 13) {
        let d = (alt.value(&z).unwrap() - f4.value(&z).unwrap()).norm();
        assert!(d < 1e-7, "{z}: {d}");
    }
    // On C- x C+ the alternative is -5i + 1/(i - z1), independent of z2.
    for z in [
        pt(&[c(0.0, -1.0), c(0.0, 1.0)]),
        pt(&[c(0.0, -0.1), c(0.0, 0.1)]),
        pt(&[c(1.0, -1.0), c(2.0, 1.0)]),
    ] {
        let want = -I * 5.0 + (I - z.coords()[0]).inv();
        let d = (alt.value(&z).unwrap() - want).norm();
        assert!(d < 1e-7, "{z}: {d}");
    }
    let same = pt(&[c(0.0, -1.0), c(0.0, 1.0)]);
    let gap = (alt.value(&same).unwrap() - f4.value(&same).unwrap()).norm();
    assert!(gap < 1e-7, "{gap}");
    let witness = pt(&[c(0.0, -0.1), c(0.0, 0.1)]);
    let gap = (alt.value(&witness).unwrap() - f4.value(&witness).unwrap()).norm();
    assert!(gap > 1.0, "{gap}");
}

#[test]
fn nevanlinna_measures_give_nonnegative_imaginary_part() {
    let measures = [
        Measure::lebesgue(2),
        Measure::f4_alternative(),
        Measure::ProductDensity {
            factors: vec![Density::CauchyWeight, Density::Constant { c: 1.0 }],
        },
    ];
    for mu in measures {
        let h = HerglotzFunction::new(triple(mu), cfg()).unwrap();
        let b = herglotz_imag_lower_bound_probe(&h, 20, sampling::DEFAULT_SEED).unwrap();
        assert!(b.min >= -1e-9, "{b:?}");
    }
}

#[test]
fn nevanlinna_residual_examples() {
    let z = pt(&[c(0.0, 1.0), c(0.0, 2.0)]);
    let r = nevanlinna_residual(&Measure::lebesgue(2), &z, &cfg()).unwrap();
    assert!(r.value.norm() < 1e-8);

    let off = pt(&[c(0.5, 0.5), c(-1.0, 2.0)]);
    let r = nevanlinna_residual(&Measure::diagonal(), &off, &cfg()).unwrap();
    assert!(r.value.norm() > 0.01, "{r:?}");
    let r = nevanlinna_residual(&Measure::f4_alternative(), &off, &cfg()).unwrap();
    assert!(r.value.norm() < 1e-8, "{r:?}");
}

#[test]
fn growth_of_builtin_measures() {
    let g = CauchyFunction::new(Measure::f4_alternative(), cfg()).unwrap();
    assert!((g.growth() - 5.5 * PI * PI).abs() < 1e-7);
    let g = CauchyFunction::new(Measure::f4_defining(), cfg()).unwrap();
    assert!((g.growth() - 5.5 * PI * PI).abs() < 1e-7);
}
