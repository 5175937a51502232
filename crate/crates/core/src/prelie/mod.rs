//! The free pre-Lie algebra on one generator and its evaluation morphisms.
//!
//! Trees are combined by grafting: `s ↷ t` attaches the root of each tree of
//! `s` to every node of each tree of `t`. The pre-Lie Magnus expansion, its
//! compositional inverse, and the expansion of magmatic expressions are all
//! computed with exact rational coefficients; floating point only enters in
//! [`eval`] when a series is mapped to matrix-valued functions.

pub mod eval;
pub mod magmatic;
pub mod series;
pub mod tree;
pub mod vector_field;

use std::collections::HashMap;

use num_traits::One;

use crate::rational::Rational;

pub use eval::{eval_matrix_prelie, eval_poly_prelie, integrate_matrix_prelie, PolyPreLie};
pub use magmatic::{expand_magmatic, MagmaticExpr, MagmaticSum};
pub use series::{prelie_inverse, prelie_magnus, TreeSeries, SERIES_CAP};
pub use tree::RootedTree;
pub use vector_field::{euler_modified_field_defect, eval_vector_field_prelie, flow_series, MPoly, VectorField};

/// A vector space with a (left) pre-Lie product `a.product(b) = a ↷ b`.
pub trait PreLieAlgebra: Clone {
    fn zero_like(&self) -> Self;
    fn sum(&self, other: &Self) -> Self;
    fn scaled(&self, c: &Rational) -> Self;
    fn product(&self, other: &Self) -> Self;
}

/// The unique pre-Lie morphism out of the free algebra sending `•` to a
/// chosen element. Tree images are memoized.
///
/// A tree `B+(t_1, .., t_k)` is rebuilt from smaller pieces through
/// `t_k ↷ B+(t_1, .., t_{k-1}) = B+(t_1, .., t_k) + sum_i B+(.., t_k ↷ t_i, ..)`,
/// where every tree on the right has fewer root children.
pub struct Morphism<A> {
    generator: A,
    memo: HashMap<RootedTree, A>,
}

impl<A: PreLieAlgebra> Morphism<A> {
    pub fn new(generator: A) -> Self {
        Morphism {
            generator,
            memo: HashMap::new(),
        }
    }

    pub fn tree(&mut self, t: &RootedTree) -> A {
        if let Some(v) = self.memo.get(t) {
            return v.clone();
        }
        let children = t.children();
        let value = match children.split_last() {
            None => self.generator.clone(),
            Some((last, rest)) => {
                let rest = rest.to_vec();
                let mut v = self.tree(last).product(&self.tree(&RootedTree::join(rest.clone())));
                let minus = -Rational::one();
                for i in 0..rest.len() {
                    for grafted in last.graft_onto(&rest[i]) {
                        let mut kids = rest.clone();
                        kids[i] = grafted;
                        v = v.sum(&self.tree(&RootedTree::join(kids)).scaled(&minus));
                    }
                }
                v
            }
        };
        self.memo.insert(t.clone(), value.clone());
        value
    }

    pub fn series(&mut self, s: &TreeSeries) -> A {
        let mut acc = self.generator.zero_like();
        for (t, c) in s.terms() {
            acc = acc.sum(&self.tree(t).scaled(c));
        }
        acc
    }
}

/// Free pre-Lie algebra with products truncated above a grade.
#[derive(Clone, Debug, PartialEq)]
pub struct Truncated {
    pub series: TreeSeries,
    pub max_grade: usize,
}

impl PreLieAlgebra for Truncated {
    fn zero_like(&self) -> Self {
        Truncated {
            series: TreeSeries::zero(),
            max_grade: self.max_grade,
        }
    }

    fn sum(&self, other: &Self) -> Self {
        Truncated {
            series: self.series.add(&other.series),
            max_grade: self.max_grade,
        }
    }

    fn scaled(&self, c: &Rational) -> Self {
        Truncated {
            series: self.series.scale(c),
            max_grade: self.max_grade,
        }
    }

    fn product(&self, other: &Self) -> Self {
        Truncated {
            series: self.series.graft_truncated(&other.series, self.max_grade),
            max_grade: self.max_grade,
        }
    }
}

impl PreLieAlgebra for TreeSeries {
    fn zero_like(&self) -> Self {
        TreeSeries::zero()
    }

    fn sum(&self, other: &Self) -> Self {
        self.add(other)
    }

    fn scaled(&self, c: &Rational) -> Self {
        self.scale(c)
    }

    fn product(&self, other: &Self) -> Self {
        self.graft(other)
    }
}

/// Replace the generator of `outer` by `inner`, keeping grades up to
/// `max_grade`. `inner` must have no constant part, which always holds for a
/// tree series.
pub fn substitute_truncated(outer: &TreeSeries, inner: &TreeSeries, max_grade: usize) -> TreeSeries {
    let mut phi = Morphism::new(Truncated {
        series: inner.truncate(max_grade),
        max_grade,
    });
    phi.series(outer).series.truncate(max_grade)
}

/// Substitution truncated at the larger of the two input grades, beyond
/// which truncated inputs give incomplete results.
pub fn substitute(outer: &TreeSeries, inner: &TreeSeries) -> TreeSeries {
    substitute_truncated(outer, inner, outer.max_grade().max(inner.max_grade()))
}

/// `(x ↷ y) ↷ z - x ↷ (y ↷ z)`.
pub fn associator<A: PreLieAlgebra>(x: &A, y: &A, z: &A) -> A {
    let minus = -Rational::one();
    x.product(y).product(z).sum(&x.product(&y.product(z)).scaled(&minus))
}

/// `a(x, y, z) - a(y, x, z)`, zero in any left pre-Lie algebra.
pub fn prelie_defect<A: PreLieAlgebra>(x: &A, y: &A, z: &A) -> A {
    let minus = -Rational::one();
    associator(x, y, z).sum(&associator(y, x, z).scaled(&minus))
}

#[cfg(test)]
mod tests;
