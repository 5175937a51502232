use super::*;
use crate::prelie::magmatic::MagmaticSum;

fn all_trees_up_to(n: usize) -> Vec<RootedTree> {
    (1..=n).flat_map(RootedTree::enumerate).collect()
}

#[test]
fn pre_lie_identity_exhaustive_to_five_nodes() {
    let trees = all_trees_up_to(3);
    let mut checked = 0;
    for x in &trees {
        for y in &trees {
            for z in &trees {
                if x.nodes() + y.nodes() + z.nodes() > 5 {
                    continue;
                }
                let (sx, sy, sz) = (TreeSeries::tree(x.clone()), TreeSeries::tree(y.clone()), TreeSeries::tree(z.clone()));
                assert!(prelie_defect(&sx, &sy, &sz).is_zero(), "{x} {y} {z}");
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn grafting_is_not_associative() {
    let x = TreeSeries::generator();
    assert!(!associator(&x, &x, &x).is_zero());
}

#[test]
fn magnus_and_inverse_compose_to_the_generator() {
    for n in 1..=6 {
        let omega = prelie_magnus(n).unwrap();
        let w = prelie_inverse(n).unwrap();
        assert_eq!(substitute(&omega, &w), TreeSeries::generator(), "grade {n}");
        assert_eq!(substitute(&w, &omega), TreeSeries::generator(), "grade {n}");
    }
}

#[test]
fn substitution_identities() {
    let omega = prelie_magnus(5).unwrap();
    let x = TreeSeries::generator();
    assert_eq!(substitute(&omega, &x), omega);
    assert_eq!(substitute(&x, &omega), omega);
    // Doubling the generator scales grade k by 2^k.
    let two = x.scale(&crate::rational::int(2));
    let doubled = substitute_truncated(&omega, &two, 5);
    for k in 1..=5 {
        assert_eq!(doubled.grade(k), omega.grade(k).scale(&crate::rational::int(1 << k)));
    }
}

#[test]
fn fourth_magnus_term_is_the_negated_two_term_form() {
    // With B_1 = -1/2 and the product int_0^t [U(s), V(t)] ds, the grade-4
    // part is -(1/6 ((x↷x)↷x)↷x + 1/12 x↷((x↷x)↷x)); the unsigned form
    // belongs to the opposite product sign.
    let omega = prelie_magnus(4).unwrap();
    let two_term = MagmaticSum::omega4().expand();
    assert_ne!(two_term, omega.grade(4));
    assert_eq!(two_term.scale(&crate::rational::int(-1)), omega.grade(4));
}

#[test]
fn morphism_into_free_algebra_is_identity() {
    let mut phi = Morphism::new(TreeSeries::generator());
    for t in all_trees_up_to(6) {
        assert_eq!(phi.tree(&t), TreeSeries::tree(t.clone()));
    }
}

/// Strictly upper-triangular 5x5 data: brackets of five elements vanish, so
/// the exponent is exactly `Omega_1 + .. + Omega_4` and the logarithm of the
/// unipotent solution is a finite series.
fn unipotent_problem() -> crate::poly::MatPoly<crate::rational::Rational> {
    use crate::mat::Mat;
    use crate::rational::int;
    let entries: [[i64; 10]; 3] = [
        [1, -2, 0, 2, 1, -1, 2, 0, 1, -2],
        [-1, 0, 2, 1, -2, 1, 0, 2, -1, 1],
        [2, 1, -1, 0, 1, 2, -2, 1, 0, -1],
    ];
    let coeffs = entries
        .iter()
        .map(|e| {
            let mut k = 0;
            let mut m = Mat::zeros(5);
            for i in 0..5 {
                for j in i + 1..5 {
                    m[(i, j)] = int(e[k]) / int(4);
                    k += 1;
                }
            }
            m
        })
        .collect();
    crate::poly::MatPoly::new(coeffs).unwrap()
}

#[test]
fn fourth_grade_matches_the_matrix_logarithm() {
    use crate::mat::Mat;
    let p = unipotent_problem();
    let a = crate::matfn::MatFn::<f64>::from_poly(p.clone());
    let t = 1.0;
    let y = crate::magnus::reference_solve(&a, 0.0, t, &Mat::identity(5), 1e-11).unwrap();
    let n = &y - &Mat::identity(5);
    let mut log = Mat::zeros(5);
    let mut power = n.clone();
    for k in 1..5 {
        let c = if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
        log = &log + &power.scale(&c);
        power = &power * &n;
    }
    let first_three = crate::magnus::magnus_partial_sum_exact(&p, 3).unwrap().to_scalar::<f64>().eval(&t);
    let omega4 = eval_poly_prelie(&prelie_magnus(4).unwrap().grade(4), &p)
        .antiderivative()
        .to_scalar::<f64>()
        .eval(&t);
    assert!(omega4.max_abs() > 1e-6);
    assert!((&(&log - &first_three) - &omega4).max_abs() < 1e-12);
}
