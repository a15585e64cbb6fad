mod common;

use common::*;
use liftlab_core::bundle::*;
use liftlab_core::sample::EXACT_TOL;
use liftlab_core::tensor::*;
use liftlab_core::ScalarExpr;

#[test]
fn frame_times_inverse_is_identity() {
    let mut rng = rng(5);
    for n in 1..=3 {
        for q in 1..=3 {
            let section = CrossSection::new(random_covariant(&mut rng, n, q));
            for p in points(n, 8) {
                let frame = section.frame(&p).unwrap();
                assert!(frame.product_residual() <= 1e-12);
                let reverse = frame.inverse_matrix().mul(&frame.frame_matrix());
                let size = n + n.pow(q as u32);
                assert!(
                    reverse.max_abs_diff(&liftlab_core::matrix::Matrix::identity(size)) <= 1e-12
                );
            }
        }
    }
}

#[test]
fn natural_and_adapted_lifts_agree_on_the_section() {
    let mut rng = rng(9);
    for n in 1..=3 {
        for q in 1..=2 {
            let xi = random_covariant(&mut rng, n, q);
            let v = random_vector(&mut rng, n);
            let a = random_covariant(&mut rng, n, q);
            let section = CrossSection::new(xi);
            for p in points(n, 8) {
                let at = section.point(&p).unwrap();
                let frame = section.frame(&p).unwrap();
                let natural = complete_lift_vector_natural(&v, &at).unwrap();
                let adapted = section.complete_lift_vector(&v, &p).unwrap();
                let converted = frame.to_adapted(&natural).unwrap();
                assert!(converted.max_abs_diff(&adapted).unwrap() <= 1e-10);
                let back = frame.to_natural(&adapted).unwrap();
                assert!(back.max_abs_diff(&natural).unwrap() <= 1e-10);

                let vn = vertical_lift_natural(&a, &at).unwrap();
                let va = vertical_lift(&a, &at).unwrap();
                assert!(frame.to_adapted(&vn).unwrap().max_abs_diff(&va).unwrap() <= 1e-12);
            }
        }
    }
}

#[test]
fn mixing_frames_is_an_error() {
    let xi = cov(2, 1, &["x1", "x2"]);
    let p = &points(2, 1)[0];
    let section = CrossSection::new(xi);
    let adapted = section
        .complete_lift_vector(&vector(2, &["1", "0"]), p)
        .unwrap();
    let natural =
        complete_lift_vector_natural(&vector(2, &["1", "0"]), &section.point(p).unwrap()).unwrap();
    assert_eq!(
        adapted.max_abs_diff(&natural),
        Err(liftlab_core::Error::FrameMismatch)
    );
}

#[test]
fn purity_is_slot_symmetric() {
    let phi = twisted_structure_r2();
    let pts = points(2, 8);
    let a = [expr("x1", 2), expr("x2^2", 2)];
    let b = [expr("sin(x2)", 2), expr("1", 2)];
    let pure = pure_rank_two(&phi, &a, &b);
    assert!(purity_residual(&phi, &pure, &pts).unwrap().within(1e-12));
    let generic = cov(2, 3, &["x1", "x2", "1", "0", "x1*x2", "2", "0", "x2"]);
    let s0 = slot_contraction(&phi, &generic, 0).unwrap();
    let s2 = slot_contraction(&phi, &generic, 2).unwrap();
    let forward = s0.max_abs_diff(&s2, &pts).unwrap();
    let backward = s2.max_abs_diff(&s0, &pts).unwrap();
    assert_eq!(forward, backward);
    assert!(purity_residual(&phi, &generic, &pts).unwrap().value >= forward.value);
}

#[test]
fn characterization_with_varying_data() {
    let pts = points(2, 16);
    let structures = [
        EndomorphismField::standard_complex_r2(),
        twisted_structure_r2(),
    ];
    for phi in &structures {
        let v = vector(2, &["x1*x2", "sin(x1)"]);
        let a1 = cov(2, 1, &["x2", "x1*x2"]);
        let r1 = verify_characterization(
            phi,
            &cov(2, 1, &["x1^2", "exp(x2)"]),
            &v,
            &a1,
            &pts,
            EXACT_TOL,
        )
        .unwrap();
        assert!(r1.max().value <= 1e-9, "{r1:?}");

        let xi = pure_rank_two(
            phi,
            &[expr("x1", 2), expr("x2^2", 2)],
            &[expr("cos(x1)", 2), expr("x1*x2", 2)],
        );
        let a2 = cov(2, 2, &["x1", "x2", "x2^2", "-x1"]);
        let r2 = verify_characterization(phi, &xi, &v, &a2, &pts, 1e-12).unwrap();
        assert!(r2.max().value <= 1e-9, "{r2:?}");
    }
}

#[test]
fn characterization_requires_purity() {
    let err = verify_characterization(
        &EndomorphismField::standard_complex_r2(),
        &cov(2, 2, &["1", "0", "0", "1"]),
        &vector(2, &["1", "0"]),
        &cov(2, 2, &["0", "0", "0", "0"]),
        &points(2, 4),
        EXACT_TOL,
    )
    .unwrap_err();
    assert!(matches!(err, liftlab_core::Error::NotPure { .. }));
}

#[test]
fn analytic_rank_two_sections_give_complex_lifts() {
    // Re(f(z) dz⊗dz) = [[a, b], [b, -a]] with a = Re f, b = -Im f
    let phi = EndomorphismField::standard_complex_r2();
    let pts = points(2, 64);
    let cases = [
        ["x1", "-x2", "-x2", "-x1"],
        ["x1^2 - x2^2", "-2*x1*x2", "-2*x1*x2", "x2^2 - x1^2"],
        [
            "exp(x1)*cos(x2)",
            "-exp(x1)*sin(x2)",
            "-exp(x1)*sin(x2)",
            "-exp(x1)*cos(x2)",
        ],
    ];
    for comps in cases {
        let xi = cov(2, 2, &comps);
        let report = verify_theorem1(&phi, &xi, &pts).unwrap();
        assert!(report.hypotheses_hold(1e-12), "{comps:?}: {report:?}");
        assert!(report.conclusion_holds(1e-9));
        assert!(report.passes(1e-9));
    }
    // the conjugate choice is pure but not analytic
    let xi = cov(2, 2, &["x1^2 - x2^2", "2*x1*x2", "2*x1*x2", "x2^2 - x1^2"]);
    let report = verify_theorem1(&phi, &xi, &pts).unwrap();
    assert!(report.purity.within(1e-12));
    assert!(!report.tachibana.within(1e-3));
}

#[test]
fn rank_three_analytic_section() {
    // ξ = Re(dz⊗dz⊗dz) is pure and analytic for the standard structure
    let phi = EndomorphismField::standard_complex_r2();
    let n = 2;
    let xi = CovariantField::from_fn(n, 3, |idx| {
        // Re(i^k) where k counts the slots equal to 2
        let k = idx.iter().filter(|&&i| i == 1).count();
        ScalarExpr::constant([1.0, 0.0, -1.0, 0.0][k % 4])
    });
    let pts = points(n, 16);
    let report = verify_theorem1(&phi, &xi, &pts).unwrap();
    assert!(report.hypotheses_hold(1e-12), "{report:?}");
    assert!(report.conclusion_holds(1e-12));
    let m = complete_lift_endo_on_section(&phi, &xi, &pts[0]).unwrap();
    assert_eq!(m.size(), 10);
    assert_eq!(m.upper_right_max(), 0.0);
}

#[test]
fn lift_square_defect_is_nijenhuis_composition() {
    let phi = twisted_structure_r4();
    let xi = cov(4, 1, &["x1", "x2^2", "1", "x4*x3"]);
    let nx = nijenhuis_compose(&nijenhuis(&phi), &xi).unwrap();
    let lifted = LiftedStructure::new_unchecked(phi, xi).unwrap();
    let mut largest = 0.0f64;
    for p in points(4, 8) {
        let block = lifted.at(&p).unwrap().square_lower_left();
        let nv = nx.eval(&p).unwrap();
        for k in 0..4 {
            for j in 0..4 {
                assert!((block[(k, j)] - nv[j * 4 + k]).abs() <= 1e-12);
                largest = largest.max(nv[j * 4 + k].abs());
            }
        }
    }
    assert!(largest > 0.1);
}

#[test]
fn plane_structures_always_square_to_minus_one() {
    // every almost complex structure on the plane is integrable, so the lift
    // squares to -I along every pure section, analytic or not
    let pts = points(2, 16);
    for phi in [
        EndomorphismField::standard_complex_r2(),
        twisted_structure_r2(),
    ] {
        for xi in [
            cov(2, 1, &["x1^2", "0"]),
            cov(2, 1, &["sin(x1*x2)", "x2^3"]),
        ] {
            let report = verify_theorem1(&phi, &xi, &pts).unwrap();
            assert!(report.nijenhuis_xi.within(1e-12));
            assert!(report.lift_square.within(1e-9), "{report:?}");
        }
    }
}
