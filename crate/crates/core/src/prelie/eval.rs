//! Tree series mapped to matrix-valued functions of time, with the product
//! `(U ↷ V)(t) = int_0^t [U(s), V(t)] ds` and `•` sent to `A`.
//!
//! The image of the pre-Lie Magnus series is the derivative `Omega'(t)`;
//! [`integrate_matrix_prelie`] returns its integral `Omega(t)`.

use std::sync::Arc;

use super::{Morphism, PreLieAlgebra, TreeSeries};
use crate::error::{Error, Result};
use crate::linalg::LieAlgebra;
use crate::mat::Mat;
use crate::matfn::MatFn;
use crate::poly::MatPoly;
use crate::quadrature::{barycentric_weights, chebyshev_lobatto, lagrange_basis, Quadrature};
use crate::rational::Rational;
use crate::scalar::Real;

/// Interpolation nodes on `[0, t]`. Exact for polynomial integrands up to
/// degree `GRID_NODES - 1`, which covers grade 5 trees over quadratic `A`.
pub const GRID_NODES: usize = 24;

#[derive(Debug)]
struct Grid<T> {
    /// `integration[i][j] = int_0^{x_i} l_j(s) ds`.
    integration: Vec<Vec<T>>,
}

impl<T: Real> Grid<T> {
    fn new(nodes01: &[T], t: T) -> Self {
        let m = nodes01.len();
        let bary = barycentric_weights(nodes01);
        let gauss = Quadrature::<T>::gauss_legendre(m);
        // Build on [0, 1] and scale by t: int_0^{t x} l_j(s/t) ds = t int_0^x l_j.
        let integration = nodes01
            .iter()
            .map(|&xi| {
                let sub = gauss.on_interval(T::zero(), xi);
                let mut row = vec![T::zero(); m];
                for (&s, &w) in sub.nodes.iter().zip(&sub.weights) {
                    for (r, l) in row.iter_mut().zip(lagrange_basis(nodes01, &bary, s)) {
                        *r = *r + w * l;
                    }
                }
                row.into_iter().map(|v| v * t).collect()
            })
            .collect();
        Grid { integration }
    }

    fn integrate(&self, values: &[Mat<T>]) -> Vec<Mat<T>> {
        self.integration
            .iter()
            .map(|row| {
                row.iter()
                    .zip(values)
                    .fold(values[0].zero_like(), |acc, (&w, v)| acc.plus(&v.scale(&w)))
            })
            .collect()
    }
}

/// A matrix function sampled on the shared grid.
#[derive(Clone, Debug)]
struct GridFn<T> {
    grid: Arc<Grid<T>>,
    values: Vec<Mat<T>>,
}

impl<T: Real> PreLieAlgebra for GridFn<T> {
    fn zero_like(&self) -> Self {
        GridFn {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v.zero_like()).collect(),
        }
    }

    fn sum(&self, other: &Self) -> Self {
        GridFn {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    fn scaled(&self, c: &Rational) -> Self {
        let c = T::from_rational(c);
        GridFn {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v.scale(&c)).collect(),
        }
    }

    fn product(&self, other: &Self) -> Self {
        let integral = self.grid.integrate(&self.values);
        GridFn {
            grid: self.grid.clone(),
            values: integral.iter().zip(&other.values).map(|(u, v)| u.bracket(v)).collect(),
        }
    }
}

fn image_on_grid<T: Real>(s: &TreeSeries, a: &MatFn<T>, t: T) -> Result<(Arc<Grid<T>>, Vec<Mat<T>>)> {
    let nodes01 = chebyshev_lobatto::<T>(GRID_NODES);
    let grid = Arc::new(Grid::new(&nodes01, t));
    let generator = GridFn {
        grid: grid.clone(),
        values: nodes01.iter().map(|&x| a.eval(x * t)).collect(),
    };
    Ok((grid, Morphism::new(generator).series(s).values))
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if !t.is_finite() || t < T::zero() {
        return Err(Error::InvalidArgument(format!("evaluation time must be >= 0, got {t:e}")));
    }
    Ok(())
}

/// Image of `s` at time `t` under the morphism `• -> A`.
pub fn eval_matrix_prelie<T: Real>(s: &TreeSeries, a: &MatFn<T>, t: T) -> Result<Mat<T>> {
    check_time(t)?;
    if t.is_zero() {
        // Every product is an integral over [0, 0].
        let leaf = s.coeff(&super::RootedTree::leaf());
        return Ok(a.eval(t).scale(&T::from_rational(&leaf)));
    }
    let (_, values) = image_on_grid(s, a, t)?;
    Ok(values.last().expect("grid is nonempty").clone())
}

/// `int_0^t` of the image of `s`.
pub fn integrate_matrix_prelie<T: Real>(s: &TreeSeries, a: &MatFn<T>, t: T) -> Result<Mat<T>> {
    check_time(t)?;
    if t.is_zero() {
        return Ok(Mat::zeros(a.dim()));
    }
    let (grid, values) = image_on_grid(s, a, t)?;
    Ok(grid.integrate(&values).pop().expect("grid is nonempty"))
}

/// Exact polynomial version of the same product:
/// `U ↷ V = [int_0^t U, V]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyPreLie(pub MatPoly<Rational>);

impl PreLieAlgebra for PolyPreLie {
    fn zero_like(&self) -> Self {
        PolyPreLie(MatPoly::zero(self.0.dim()))
    }

    fn sum(&self, other: &Self) -> Self {
        PolyPreLie(self.0.plus(&other.0))
    }

    fn scaled(&self, c: &Rational) -> Self {
        PolyPreLie(self.0.scale(c))
    }

    fn product(&self, other: &Self) -> Self {
        PolyPreLie(self.0.antiderivative().bracket(&other.0))
    }
}

/// Exact image of `s` for polynomial `A`.
pub fn eval_poly_prelie(s: &TreeSeries, a: &MatPoly<Rational>) -> MatPoly<Rational> {
    Morphism::new(PolyPreLie(a.clone())).series(s).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magnus::{magnus_partial_sum_exact, magnus_term};
    use crate::mat::relative_difference;
    use crate::prelie::prelie_magnus;
    use crate::rational::int;

    fn qmat(rows: &[&[i64]]) -> Mat<Rational> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    fn linear() -> MatPoly<Rational> {
        let a = qmat(&[&[1, 2], &[0, -1]]);
        let b = qmat(&[&[0, 1], &[3, 0]]);
        MatPoly::new(vec![a, b]).unwrap()
    }

    #[test]
    fn generator_maps_to_a() {
        let p = linear();
        let a = MatFn::<f64>::from_poly(p.clone());
        let x = TreeSeries::generator();
        assert!(relative_difference(&eval_matrix_prelie(&x, &a, 0.7).unwrap(), &a.eval(0.7)) < 1e-15);
        assert_eq!(eval_poly_prelie(&x, &p), p);
        assert!(eval_matrix_prelie(&x, &a, -1.0).is_err());
    }

    #[test]
    fn magnus_through_grade_two_matches_quadrature() {
        let p = linear();
        let a = MatFn::<f64>::from_poly(p.clone());
        let s = prelie_magnus(2).unwrap();
        let t = 0.9;
        let got = integrate_matrix_prelie(&s, &a, t).unwrap();
        let want = &magnus_term(&a, 1, t).unwrap() + &magnus_term(&a, 2, t).unwrap();
        assert!(relative_difference(&got, &want) < 1e-13);
        let exact = magnus_partial_sum_exact(&p, 2).unwrap();
        assert_eq!(eval_poly_prelie(&s, &p).antiderivative(), exact);
    }

    #[test]
    fn commuting_family_kills_nontrivial_trees() {
        let d = qmat(&[&[1, 0], &[0, 2]]);
        let p = MatPoly::new(vec![d.clone(), d.scale(&int(3))]).unwrap();
        let a = MatFn::<f64>::from_poly(p.clone());
        let s = prelie_magnus(5).unwrap();
        let got = eval_matrix_prelie(&s.sub(&TreeSeries::generator()), &a, 0.8).unwrap();
        assert!(got.max_abs() < 1e-14);
        assert!(eval_poly_prelie(&s.grade(3), &p).is_zero());
    }

    #[test]
    fn zero_time() {
        let a = MatFn::<f64>::from_poly(linear());
        let s: TreeSeries = "2 [] + [[]]".parse().unwrap();
        assert_eq!(eval_matrix_prelie(&s, &a, 0.0).unwrap(), a.eval(0.0).scale(&2.0));
        assert!(integrate_matrix_prelie(&s, &a, 0.0).unwrap().is_zero());
    }
}
