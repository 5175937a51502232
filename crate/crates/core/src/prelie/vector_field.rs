//! Polynomial vector fields with exact coefficients, the pre-Lie product
//! `(f ↷ g)^i = sum_j f^j d_j g^i`, and a power-series flow oracle.
//!
//! Polynomials may carry parameter variables after the state variables
//! (a step size, a flow time); derivatives act on state variables only.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{prelie_magnus, Morphism, PreLieAlgebra, TreeSeries};
use crate::error::{check_dims, Error, Result};
use crate::rational::{int, Rational};

/// Multivariate polynomial: exponent vector -> coefficient.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    pub fn monomial(c: Rational, exponents: Vec<u32>) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponents: &[u32]) -> Rational {
        self.terms.get(exponents).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_truncated(other, None)
    }

    /// Product dropping monomials whose degree in `var` exceeds `max`.
    pub fn mul_truncated(&self, other: &Self, limit: Option<(usize, u32)>) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if limit.is_some_and(|(v, max)| e[v] > max) {
                    continue;
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn partial(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut d = e.clone();
                d[var] -= 1;
                out.add_term(d, c * int(e[var] as i64));
            }
        }
        out
    }

    /// `int_0^{x_var}`.
    pub fn integrate(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut d = e.clone();
            d[var] += 1;
            let k = int(d[var] as i64);
            out.add_term(d, c / k);
        }
        out
    }

    /// Same polynomial over more variables (new ones appended, exponent 0).
    pub fn extend(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars, "cannot drop variables");
        MPoly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e.resize(nvars, 0);
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Sets `x_var = value` and removes that variable.
    pub fn eval_var(&self, var: usize, value: &Rational) -> Self {
        let mut out = Self::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            let mut d = e.clone();
            let k = d.remove(var);
            out.add_term(d, c * num_traits::pow(value.clone(), k as usize));
        }
        out
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Replaces the first `subs.len()` variables by `subs` (polynomials in
    /// `self.nvars()` variables), keeping the rest, and truncating in `limit`.
    pub fn compose(&self, subs: &[MPoly], limit: Option<(usize, u32)>) -> Self {
        let n = self.nvars;
        let mut powers: Vec<Vec<MPoly>> = subs.iter().map(|s| vec![MPoly::constant(n, Rational::one()), s.clone()]).collect();
        let mut out = Self::zero(n);
        for (e, c) in &self.terms {
            let mut rest = vec![0; n];
            rest[subs.len()..].copy_from_slice(&e[subs.len()..]);
            if limit.is_some_and(|(v, max)| v >= subs.len() && rest[v] > max) {
                continue;
            }
            let mut term = MPoly::monomial(c.clone(), rest);
            for (j, &k) in e[..subs.len()].iter().enumerate() {
                while powers[j].len() <= k as usize {
                    let next = powers[j].last().unwrap().mul_truncated(&subs[j], limit);
                    powers[j].push(next);
                }
                term = term.mul_truncated(&powers[j][k as usize], limit);
            }
            out = out.add(&term);
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}")?;
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{v}")?,
                    _ => write!(f, "*x{v}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `sum_i f^i(x) d_i` on the first `dim` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    components: Vec<MPoly>,
}

impl VectorField {
    pub fn new(components: Vec<MPoly>) -> Result<Self> {
        let dim = components.len();
        if dim == 0 {
            return Err(Error::InvalidArgument("vector field needs a component".into()));
        }
        let nvars = components[0].nvars();
        if nvars < dim || components.iter().any(|c| c.nvars() != nvars) {
            return Err(Error::InvalidArgument(
                "components must share a variable count of at least the dimension".into(),
            ));
        }
        Ok(VectorField { components })
    }

    /// `x -> M x` for a rational matrix given by rows.
    pub fn linear(rows: &[Vec<Rational>]) -> Result<Self> {
        let n = rows.len();
        let comps = rows
            .iter()
            .map(|row| {
                check_dims(row.len(), n)?;
                Ok(row
                    .iter()
                    .enumerate()
                    .fold(MPoly::zero(n), |acc, (j, c)| acc.add(&MPoly::var(n, j).scale(c))))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(comps)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn nvars(&self) -> usize {
        self.components[0].nvars()
    }

    pub fn components(&self) -> &[MPoly] {
        &self.components
    }

    pub fn extend(&self, nvars: usize) -> Self {
        VectorField {
            components: self.components.iter().map(|c| c.extend(nvars)).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&MPoly) -> MPoly) -> Self {
        VectorField {
            components: self.components.iter().map(f).collect(),
        }
    }

    /// The identity map `x -> x` as components.
    pub fn identity_map(dim: usize, nvars: usize) -> Vec<MPoly> {
        (0..dim).map(|i| MPoly::var(nvars, i)).collect()
    }
}

impl PreLieAlgebra for VectorField {
    fn zero_like(&self) -> Self {
        self.map(|c| MPoly::zero(c.nvars()))
    }

    fn sum(&self, other: &Self) -> Self {
        VectorField {
            components: self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect(),
        }
    }

    fn scaled(&self, c: &Rational) -> Self {
        self.map(|p| p.scale(c))
    }

    fn product(&self, other: &Self) -> Self {
        other.map(|g| {
            self.components
                .iter()
                .enumerate()
                .fold(MPoly::zero(g.nvars()), |acc, (j, fj)| acc.add(&fj.mul(&g.partial(j))))
        })
    }
}

/// Image of `s` under `• -> f` with the vector-field product.
pub fn eval_vector_field_prelie(s: &TreeSeries, f: &VectorField) -> VectorField {
    Morphism::new(f.clone()).series(s)
}

/// Exact flow of `y' = F(y)` as a power series: Picard iteration on
/// `y(tau) = y + int_0^tau F(y(s)) ds`.
///
/// A new flow-time variable is appended after the field's variables. Terms
/// are truncated at degree `order` in variable `truncate_in` (an index into
/// the extended variable list); each iteration must raise that degree, which
/// holds when it is the flow time or a parameter every term of `F` carries.
pub fn flow_series(field: &VectorField, truncate_in: usize, order: u32) -> Vec<MPoly> {
    let n = field.dim();
    let nv = field.nvars() + 1;
    let tau = nv - 1;
    let f = field.extend(nv);
    let limit = Some((truncate_in, order));
    let start = VectorField::identity_map(n, nv);
    let mut y = start.clone();
    for _ in 0..=order {
        y = start
            .iter()
            .zip(f.components())
            .map(|(y0, fi)| y0.add(&fi.compose(&y, limit).integrate(tau)))
            .map(|p| truncate(&p, truncate_in, order))
            .collect();
    }
    y
}

/// `flow_1(Omega(h f)) - (y + h f)` through `h^order`, one entry per
/// component. All entries vanish when the modified field of the explicit
/// Euler method is the pre-Lie Magnus series of `f`.
pub fn euler_modified_field_defect(field: &VectorField, order: u32) -> Result<Vec<MPoly>> {
    let n = field.nvars();
    let h = n;
    let hf = field.extend(n + 1).map(|p| p.mul(&MPoly::var(n + 1, h)));
    let modified = eval_vector_field_prelie(&prelie_magnus(order as usize)?, &hf);
    let flow = flow_series(&modified, h, order);
    Ok(flow
        .iter()
        .enumerate()
        .map(|(i, fl)| {
            let at_one = truncate(&fl.eval_var(n + 1, &int(1)), h, order);
            at_one.sub(&MPoly::var(n + 1, i).add(&hf.components()[i]))
        })
        .collect())
}

fn truncate(p: &MPoly, var: usize, max: u32) -> MPoly {
    let mut out = MPoly::zero(p.nvars());
    for (e, c) in p.terms() {
        if e[var] <= max {
            out.add_term(e.clone(), c.clone());
        }
    }
    out
}
