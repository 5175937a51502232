use magnus_core::autonomize::solve_augmented_named;
use magnus_core::magnus::{magnus_partial_sum_exact, magnus_term, reference_solve};
use magnus_core::mat::relative_difference;
use magnus_core::postlie::{theta_graded_blocks, theta_series, TField};
use magnus_core::prelie::{eval_poly_prelie, prelie_magnus};
use magnus_core::problem::ProblemFile;
use magnus_core::rkmk::{cstage_step, rkmk_step, ButcherTableau, ContinuousCoeffs, RkmkOptions};
use magnus_core::{integrate, Mat, MatFn, MatPoly, Rational, STANDARD_METHODS};
use num_traits::Zero;

const PROBLEM: &str = r#"{
  "dim": 3,
  "poly": [
    [[0, 1, 0], [-1, 0, 2], [0, -2, 1]],
    [[1, 0, -1], [0, 2, 0], [1, 0, -1]],
    [["-0.5", 1, 1], [1, 0, 0], [-1, 1, [1, 3]]]
  ]
}"#;

fn problem() -> MatPoly<Rational> {
    ProblemFile::parse(PROBLEM).unwrap()
}

#[test]
fn every_method_converges_to_the_reference() {
    let a = MatFn::<f64>::from_poly(problem());
    let y0 = Mat::identity(3);
    let reference = reference_solve(&a, 0.0, 1.0, &y0, 1e-12).unwrap();
    for name in STANDARD_METHODS {
        let coarse = relative_difference(integrate(name, &a, 0.0, 1.0, 20, &y0).unwrap().final_state(), &reference);
        let fine = relative_difference(integrate(name, &a, 0.0, 1.0, 40, &y0).unwrap().final_state(), &reference);
        assert!(fine < coarse / 3.5, "{name}: {coarse:e} -> {fine:e}");
        assert!(fine < 1e-3);
    }
}

#[test]
fn quadrature_terms_match_exact_terms() {
    let exact = problem();
    let a = MatFn::<f64>::from_poly(exact.clone());
    for k in 1..=3 {
        let q = magnus_term(&a, k, 0.7).unwrap();
        let e = magnus_partial_sum_exact(&exact, k)
            .unwrap()
            .checked_sub(&magnus_partial_sum_exact(&exact, k - 1).unwrap())
            .unwrap()
            .to_scalar::<f64>()
            .eval(&0.7);
        assert!(relative_difference(&q, &e) < 1e-13, "term {k}");
    }
}

#[test]
fn post_lie_series_graded_parts_are_pre_lie_images() {
    // Degree-j part of theta at t = 0 is the integral of the image of the
    // grade-j pre-Lie Magnus term, through j = 4.
    let a = MatPoly::new(problem().coeffs()[..2].to_vec()).unwrap();
    let order = 8;
    let graded = theta_graded_blocks(&TField::from_problem(a.clone()), order).unwrap();
    let omega = prelie_magnus(4).unwrap();
    for (j, block) in graded.iter().enumerate().take(5).skip(1) {
        let image = eval_poly_prelie(&omega.grade(j), &a).antiderivative();
        assert_eq!(block.truncate(order), image.truncate(order), "degree {j}");
    }
    assert!(graded[0].is_zero());
}

#[test]
fn theta_block_evaluates_near_the_logarithm() {
    let a = problem();
    let theta = theta_series(&TField::from_problem(a.clone()), 10).unwrap();
    let tau = 0.1;
    let block = theta.block_at(&Rational::zero()).to_scalar::<f64>().eval(&tau);
    let field = MatFn::<f64>::from_poly(a);
    let y = reference_solve(&field, 0.0, tau, &Mat::identity(3), 1e-12).unwrap();
    let log = magnus_core::logm(&y).unwrap();
    assert!(relative_difference(&block, &log) < 1e-9);
}

#[test]
fn atomic_continuous_stages_match_tableau_steps() {
    let a = MatFn::<f64>::from_poly(problem());
    let y0 = Mat::identity(3);
    for tab in [ButcherTableau::heun(), ButcherTableau::gl2()] {
        let co = ContinuousCoeffs::from_tableau(&tab).unwrap();
        let opts = RkmkOptions::new(2, 3);
        let step = cstage_step(&co, &opts, &a, 0.2, 0.1, &y0).unwrap();
        let (exponent, y1) = rkmk_step(&tab, &opts, &a, 0.2, 0.1, &y0).unwrap();
        assert!(relative_difference(&step.v, &exponent) < 1e-14, "{}", tab.name());
        assert!(relative_difference(&step.y1, &y1) < 1e-14);
    }
}

#[test]
fn autonomized_solve_from_a_problem_file() {
    let a = MatFn::<f64>::from_poly(problem());
    let y0 = Mat::identity(3);
    for name in STANDARD_METHODS {
        let aug = solve_augmented_named(name, &a, -0.5, 0.5, 10, &y0).unwrap();
        let direct = integrate(name, &a, -0.5, 0.5, 10, &y0).unwrap();
        assert!(relative_difference(&aug.state.y, direct.final_state()) < 1e-12);
        assert!((aug.state.t - 0.5).abs() < 1e-15);
    }
}
