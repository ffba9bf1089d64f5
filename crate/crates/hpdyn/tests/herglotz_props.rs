//! Representation-level invariants of the Herglotz evaluation: the Julia
//! lemma, the coefficient identities, additivity, and the angular derivative
//! along the imaginary axis.

use hpdyn::*;
use num_complex::Complex64;

fn cfg() -> Config {
    Config::default()
}

fn grid_5x5() -> Vec<UpperHalfPoint> {
    let mut g = Vec::new();
    for &x in &[-2.0, -0.5, 0.0, 0.5, 2.0] {
        for &y in &[0.2, 0.5, 1.0, 2.0, 5.0] {
            g.push(UpperHalfPoint::new(x, y).unwrap());
        }
    }
    g
}

fn sample_triplets() -> Vec<HerglotzTriplet> {
    let d = |f, s| DensityComponent::new(f, s).unwrap();
    vec![
        HerglotzTriplet::affine(2.0, 1.0).unwrap(),
        HerglotzTriplet::new(1.0, 0.0, FiniteMeasure::from_atoms(&[(0.0, 1.0)]).unwrap()).unwrap(),
        HerglotzTriplet::new(
            2.0,
            -1.0,
            FiniteMeasure::new(
                vec![Atom {
                    location: 1.5,
                    mass: 0.5,
                }],
                vec![d(DensityFamily::Gaussian, 1.0)],
            )
            .unwrap(),
        )
        .unwrap(),
        HerglotzTriplet::new(
            1.5,
            0.5,
            FiniteMeasure::new(
                vec![],
                vec![
                    d(DensityFamily::Cauchy, 0.5),
                    d(DensityFamily::CompactUniform { a: -1.0, b: 2.0 }, 1.0),
                ],
            )
            .unwrap(),
        )
        .unwrap(),
        HerglotzTriplet::new(
            2.0,
            0.0,
            FiniteMeasure::new(
                vec![],
                vec![d(DensityFamily::LogTail { side: Side::Both }, 1.0)],
            )
            .unwrap(),
        )
        .unwrap(),
        HerglotzTriplet::new(
            1.0,
            1.0,
            FiniteMeasure::new(vec![], vec![d(DensityFamily::OneSidedQuadratic, 1.0)]).unwrap(),
        )
        .unwrap(),
    ]
}

#[test]
fn julia_lemma_on_the_grid() {
    // Im f(z) >= alpha Im z: z -> f(z) - alpha z is a self-map of H.
    for f in sample_triplets() {
        for z in grid_5x5() {
            let w = f.evaluate(&z, &cfg()).unwrap();
            assert!(
                w.im() >= f.alpha() * z.im() - 1e-9 * (1.0 + w.im()),
                "Julia violated at {z} for alpha {}",
                f.alpha()
            );
        }
    }
}

#[test]
fn coefficients_are_recovered_at_i() {
    // The kernel at z = i equals i for every t: Re f(i) = beta and
    // Im f(i) = alpha + mu(R).
    for f in sample_triplets() {
        let w = f.evaluate(&UpperHalfPoint::i(), &cfg()).unwrap();
        assert!((w.re() - f.beta()).abs() < 1e-9, "beta mismatch: {w}");
        assert!(
            (w.im() - f.alpha() - f.mu().total_mass()).abs() < 1e-9,
            "mass mismatch: {w}"
        );
    }
}

#[test]
fn angular_derivative_along_the_axis() {
    // f(iy)/(iy) -> alpha as y grows. The approach rate is governed by the
    // tail of mu: within 1e-4 at y = 1e6 for every family except the
    // logarithmic tail, whose excess decays like 1/log y and only admits a
    // monotone-decline check at this scale.
    for f in sample_triplets() {
        let heavy = f
            .mu()
            .densities()
            .iter()
            .any(|d| matches!(d.family(), DensityFamily::LogTail { .. }));
        let q_at = |y: f64| {
            let w = f
                .evaluate(&UpperHalfPoint::new(0.0, y).unwrap(), &cfg())
                .unwrap();
            w.as_complex() / Complex64::new(0.0, y)
        };
        let q = q_at(1e6);
        if heavy {
            let q3 = q_at(1e3);
            assert!(
                (q - f.alpha()).norm() < (q3 - f.alpha()).norm()
                    && (q - f.alpha()).norm() < 0.1,
                "heavy tail: f(iy)/(iy) must approach alpha from {q3} to {q}"
            );
        } else {
            assert!(
                (q - f.alpha()).norm() < 1e-4 * f.alpha().max(1.0),
                "f(iy)/(iy) = {q} vs alpha = {}",
                f.alpha()
            );
        }
    }
}

#[test]
fn atom_only_maps_match_the_rational_formula() {
    let f = HerglotzTriplet::new(
        1.5,
        -0.5,
        FiniteMeasure::from_atoms(&[(-1.0, 0.25), (2.0, 1.0)]).unwrap(),
    )
    .unwrap();
    for z in grid_5x5() {
        let zc = z.as_complex();
        let expect = 1.5 * zc - 0.5
            + 0.25 * (1.0 - zc) / (Complex64::new(-1.0, 0.0) - zc)
            + 1.0 * (1.0 + 2.0 * zc) / (Complex64::new(2.0, 0.0) - zc);
        let got = f.evaluate(&z, &cfg()).unwrap().as_complex();
        assert!((got - expect).norm() < 1e-12 * (1.0 + expect.norm()));
    }
}

#[test]
fn integral_part_is_additive_in_mu() {
    let d = |f, s| DensityComponent::new(f, s).unwrap();
    let mu1 = FiniteMeasure::new(
        vec![Atom {
            location: 0.5,
            mass: 0.3,
        }],
        vec![d(DensityFamily::Gaussian, 0.7)],
    )
    .unwrap();
    let mu2 = FiniteMeasure::new(
        vec![],
        vec![d(DensityFamily::CompactUniform { a: 0.0, b: 1.0 }, 0.4)],
    )
    .unwrap();
    let combined = FiniteMeasure::new(
        mu1.atoms().to_vec(),
        mu1.densities()
            .iter()
            .chain(mu2.densities())
            .cloned()
            .collect(),
    )
    .unwrap();
    let f1 = HerglotzTriplet::new(1.0, 0.0, mu1).unwrap();
    let f2 = HerglotzTriplet::new(1.0, 0.0, mu2).unwrap();
    let f12 = HerglotzTriplet::new(1.0, 0.0, combined).unwrap();
    let quad = quadrature::QuadConfig::default();
    for z in grid_5x5() {
        let zc = z.as_complex();
        let sum = f1.integral_term(zc, &quad).unwrap() + f2.integral_term(zc, &quad).unwrap();
        let joint = f12.integral_term(zc, &quad).unwrap();
        assert!((sum - joint).norm() < 1e-10 * (1.0 + joint.norm()));
    }
}

#[test]
fn reference_quadrature_of_the_cauchy_identity() {
    // 50-digit reference value of the Cauchy kernel integral is exactly i.
    let f = HerglotzTriplet::new(
        0.0,
        0.0,
        FiniteMeasure::new(
            vec![],
            vec![DensityComponent::new(DensityFamily::Cauchy, 1.0).unwrap()],
        )
        .unwrap(),
    )
    .unwrap();
    let w = f
        .evaluate(&UpperHalfPoint::new(2.0, 3.0).unwrap(), &cfg())
        .unwrap();
    assert!((w.re()).abs() < 1e-10);
    assert!((w.im() - 1.0).abs() < 1e-10);
}
