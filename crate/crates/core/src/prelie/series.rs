//! Finite rational combinations of rooted trees: the free pre-Lie algebra on
//! one generator, with grafting as product.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use super::tree::RootedTree;
use crate::error::{Error, Result};
use crate::rational::{bernoulli_table, factorial, parse_rational, Rational};

#[derive(Clone, Default, PartialEq, Eq)]
pub struct TreeSeries {
    terms: BTreeMap<RootedTree, Rational>,
}

impl TreeSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The generator `•`.
    pub fn generator() -> Self {
        Self::tree(RootedTree::leaf())
    }

    pub fn tree(t: RootedTree) -> Self {
        Self::term(Rational::one(), t)
    }

    pub fn term(c: Rational, t: RootedTree) -> Self {
        let mut s = Self::zero();
        s.add_term(t, c);
        s
    }

    pub fn add_term(&mut self, t: RootedTree, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, t: &RootedTree) -> Rational {
        self.terms.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RootedTree, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest node count present (0 for the zero series).
    pub fn max_grade(&self) -> usize {
        self.terms.keys().map(RootedTree::nodes).max().unwrap_or(0)
    }

    /// Part of the series with exactly `k` nodes.
    pub fn grade(&self, k: usize) -> Self {
        self.filter(|t| t.nodes() == k)
    }

    /// Part with at most `k` nodes.
    pub fn truncate(&self, k: usize) -> Self {
        self.filter(|t| t.nodes() <= k)
    }

    fn filter(&self, keep: impl Fn(&RootedTree) -> bool) -> Self {
        TreeSeries {
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| keep(t))
                .map(|(t, c)| (t.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        TreeSeries {
            terms: self.terms.iter().map(|(t, v)| (t.clone(), v * c)).collect(),
        }
    }

    /// Grafting `self ↷ other`, bilinear.
    pub fn graft(&self, other: &Self) -> Self {
        self.graft_truncated(other, usize::MAX)
    }

    /// Grafting, dropping trees with more than `max_grade` nodes.
    pub fn graft_truncated(&self, other: &Self, max_grade: usize) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a.nodes() + b.nodes() > max_grade {
                    continue;
                }
                let c = ca * cb;
                for t in a.graft_onto(b) {
                    out.add_term(t, c.clone());
                }
            }
        }
        out
    }
}

/// Default cap on the grade of the generated series.
pub const SERIES_CAP: usize = 8;

fn check_cap(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("series grade must be positive".into()));
    }
    if n > SERIES_CAP {
        return Err(Error::OverCap {
            what: "series grade",
            value: n,
            cap: SERIES_CAP,
        });
    }
    Ok(())
}

/// The pre-Lie Magnus expansion, the solution of
/// `Ω = sum_n B_n/n! (Ω↷)^n(•)`, through grade `n`.
///
/// The grade-`k` part of the right-hand side only involves grades below `k`
/// of `Ω`, so each grade is computed once.
pub fn prelie_magnus(n: usize) -> Result<TreeSeries> {
    check_cap(n)?;
    let bern = bernoulli_table(n);
    let x = TreeSeries::generator();
    let mut omega = x.clone();
    for k in 2..=n {
        let mut rhs = TreeSeries::zero();
        let mut term = x.clone();
        for (m, b) in bern.iter().enumerate().take(k) {
            if m > 0 {
                term = omega.graft_truncated(&term, k);
            }
            if !b.is_zero() {
                rhs = rhs.add(&term.scale(&(b / Rational::from_integer(factorial(m)))));
            }
        }
        omega = omega.add(&rhs.grade(k));
    }
    Ok(omega)
}

/// The compositional inverse `W = sum_n 1/(n+1)! (•↷)^n(•)` through grade `n`.
pub fn prelie_inverse(n: usize) -> Result<TreeSeries> {
    check_cap(n)?;
    let x = TreeSeries::generator();
    let mut out = TreeSeries::zero();
    let mut term = x.clone();
    for m in 0..n {
        if m > 0 {
            term = x.graft(&term);
        }
        out = out.add(&term.scale(&Rational::new(1.into(), factorial(m + 1))));
    }
    Ok(out)
}

impl fmt::Display for TreeSeries {
    /// Terms by increasing grade: `1 [] + -1/2 [[]]`; zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut sorted: Vec<_> = self.terms.iter().collect();
        sorted.sort_by(|a, b| a.0.nodes().cmp(&b.0.nodes()).then(a.0.cmp(b.0)));
        for (i, (t, c)) in sorted.into_iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c} {t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TreeSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for TreeSeries {
    type Err = Error;

    /// Inverse of `Display`; a missing coefficient means 1, and `- c [..]`
    /// is accepted for a negative term.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut out = Self::zero();
        let mut rest = s;
        let mut sign = Rational::one();
        while !rest.is_empty() {
            let open = rest
                .find('[')
                .ok_or_else(|| Error::Parse(format!("expected a tree in `{rest}`")))?;
            let coeff_text = rest[..open].trim();
            let coeff = if coeff_text.is_empty() {
                Rational::one()
            } else if coeff_text == "-" {
                -Rational::one()
            } else {
                parse_rational(coeff_text)?
            };
            let mut depth = 0usize;
            let mut end = open;
            for (i, ch) in rest[open..].char_indices() {
                match ch {
                    '[' => depth += 1,
                    ']' => {
                        depth -= 1;
                        if depth == 0 {
                            end = open + i + 1;
                            break;
                        }
                    }
                    c if c.is_whitespace() => {}
                    other => return Err(Error::Parse(format!("unexpected `{other}` in tree"))),
                }
            }
            if depth != 0 {
                return Err(Error::Parse("unbalanced brackets".into()));
            }
            let tree: RootedTree = rest[open..end].parse()?;
            out.add_term(tree, &sign * coeff);
            rest = rest[end..].trim_start();
            if rest.is_empty() {
                break;
            }
            sign = match rest.as_bytes()[0] {
                b'+' => Rational::one(),
                b'-' => -Rational::one(),
                _ => return Err(Error::Parse(format!("expected `+` or `-` before `{rest}`"))),
            };
            rest = rest[1..].trim_start();
            if rest.is_empty() {
                return Err(Error::Parse("dangling sign at end of series".into()));
            }
        }
        Ok(out)
    }
}

/// Largest absolute coefficient.
pub fn max_coefficient(s: &TreeSeries) -> Rational {
    s.terms().map(|(_, c)| c.abs()).max().unwrap_or_else(Rational::zero)
}
