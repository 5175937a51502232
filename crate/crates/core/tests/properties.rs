use magnus_core::linalg::{commutator, dexp, dexpinv, expm, logm};
use magnus_core::postlie::{adjoint_axiom_check, jacobi_bracket, postlie_axiom_check, TField};
use magnus_core::prelie::{prelie_defect, RootedTree, TreeSeries};
use magnus_core::problem::ProblemFile;
use magnus_core::rational::{int, ratio};
use magnus_core::{LieAlgebra, Mat, MatPoly, Rational};
use proptest::prelude::*;

fn mat_f64(dim: usize) -> impl Strategy<Value = Mat<f64>> {
    prop::collection::vec(-1.0..1.0f64, dim * dim).prop_map(move |v| Mat::from_vec(dim, v).unwrap())
}

fn mat_int(dim: usize, bound: i64) -> impl Strategy<Value = Mat<Rational>> {
    prop::collection::vec(-bound..=bound, dim * dim)
        .prop_map(move |v| Mat::from_vec(dim, v.into_iter().map(int).collect()).unwrap())
}

fn strictly_upper(dim: usize) -> impl Strategy<Value = Mat<Rational>> {
    mat_int(dim, 4).prop_map(move |m| Mat::from_fn(dim, |i, j| if j > i { m[(i, j)].clone() } else { int(0) }))
}

fn poly_int(dim: usize, max_degree: usize) -> impl Strategy<Value = MatPoly<Rational>> {
    prop::collection::vec(mat_int(dim, 3), 1..=max_degree + 1).prop_map(|c| MatPoly::new(c).unwrap())
}

fn tfield(dim: usize) -> impl Strategy<Value = TField> {
    (poly_int(dim, 2), -3i64..=3).prop_map(|(p, h)| TField::new(p, int(h)))
}

fn close(a: &Mat<f64>, b: &Mat<f64>, tol: f64) -> bool {
    (a - b).max_abs() <= tol
}

proptest! {
    #[test]
    fn commutator_is_bilinear_and_satisfies_jacobi(
        x in mat_f64(3), y in mat_f64(3), z in mat_f64(3), c in -2.0..2.0f64
    ) {
        let left = commutator(&(&x + &y.scale(&c)), &z).unwrap();
        let right = &commutator(&x, &z).unwrap() + &commutator(&y, &z).unwrap().scale(&c);
        prop_assert!(close(&left, &right, 1e-13));
        let jac = &(&x.bracket(&y.bracket(&z)) + &y.bracket(&z.bracket(&x))) + &z.bracket(&x.bracket(&y));
        prop_assert!(jac.max_abs() < 1e-13);
        prop_assert!((&x.bracket(&y) + &y.bracket(&x)).is_zero());
    }

    #[test]
    fn exponential_group_properties(x in mat_f64(3), s in 0.1..3.0f64) {
        let x = x.scale(&s);
        let e = expm(&x).unwrap();
        let inv = expm(&x.scale(&-1.0)).unwrap();
        prop_assert!(close(&(&e * &inv), &Mat::identity(3), 1e-12 * e.max_abs().max(1.0) * inv.max_abs().max(1.0)));
        let det = e.determinant();
        let expected = x.trace().exp();
        prop_assert!((det - expected).abs() <= 1e-12 * expected.max(1.0));
    }

    #[test]
    fn logarithm_inverts_small_exponentials(x in mat_f64(3)) {
        let x = x.scale(&0.1);
        let back = logm(&expm(&x).unwrap()).unwrap();
        let err = (&back - &x).max_abs();
        prop_assert!(err <= 1e-13, "error {err:e}");
    }

    #[test]
    fn dexp_inverts_dexpinv_exactly_on_nilpotent_pairs(u in strictly_upper(4), v in strictly_upper(4)) {
        // ad_u^3 kills strictly upper triangular 4x4 matrices.
        prop_assert_eq!(dexp(&u, &dexpinv(&u, &v, 3).unwrap(), 3).unwrap(), v.clone());
        prop_assert_eq!(dexpinv(&u, &dexp(&u, &v, 3).unwrap(), 3).unwrap(), v);
    }

    #[test]
    fn derivative_undoes_antiderivative(p in poly_int(2, 4)) {
        prop_assert_eq!(p.antiderivative().derivative(), p.clone());
        let c = p.antiderivative().eval(&int(0));
        prop_assert!(c.is_zero());
    }

    #[test]
    fn problem_files_round_trip(p in poly_int(3, 3), den in 1i64..7) {
        let p = p.scale(&ratio(1, den));
        let json = ProblemFile::from_poly(&p).to_json();
        prop_assert_eq!(ProblemFile::parse(&json).unwrap(), p);
    }

    #[test]
    fn tfield_json_round_trips(f in tfield(2)) {
        prop_assert_eq!(TField::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn post_lie_structures_hold_exactly(x in tfield(2), y in tfield(2), z in tfield(2)) {
        let (r1, r2) = postlie_axiom_check(&x, &y, &z).unwrap();
        prop_assert!(r1.is_zero() && r2.is_zero());
        let (s1, s2) = adjoint_axiom_check(&x, &y, &z).unwrap();
        prop_assert!(s1.is_zero() && s2.is_zero());
        prop_assert!(jacobi_bracket(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn grafting_is_pre_lie_on_random_series(
        cx in prop::collection::vec(-3i64..=3, 4),
        cy in prop::collection::vec(-3i64..=3, 4),
        cz in prop::collection::vec(-3i64..=3, 4),
    ) {
        let trees: Vec<RootedTree> = (1..=3).flat_map(RootedTree::enumerate).collect();
        let series = |c: &[i64]| {
            let mut s = TreeSeries::zero();
            for (t, &k) in trees.iter().zip(c) {
                s.add_term(t.clone(), int(k));
            }
            s
        };
        let defect = prelie_defect(&series(&cx), &series(&cy), &series(&cz));
        prop_assert!(defect.is_zero());
    }
}
