//! Binary expressions in one generator and the product `↷`, expanded into
//! the tree basis.
//!
//! Text form: `x` (or `A`) is the generator, `↷` (or `>`) the product,
//! parentheses group, and an unparenthesized chain associates to the right,
//! so `x ↷ x ↷ x` is `x ↷ (x ↷ x)`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};

use super::series::TreeSeries;
use super::PreLieAlgebra;
use crate::error::{Error, Result};
use crate::rational::{parse_rational, ratio, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum MagmaticExpr {
    X,
    Product(Box<MagmaticExpr>, Box<MagmaticExpr>),
}

impl MagmaticExpr {
    pub fn product(a: MagmaticExpr, b: MagmaticExpr) -> Self {
        MagmaticExpr::Product(Box::new(a), Box::new(b))
    }

    /// Number of generator occurrences.
    pub fn degree(&self) -> usize {
        match self {
            MagmaticExpr::X => 1,
            MagmaticExpr::Product(a, b) => a.degree() + b.degree(),
        }
    }

    /// Evaluates in any pre-Lie algebra with the generator sent to `x`.
    pub fn eval<A: PreLieAlgebra>(&self, x: &A) -> A {
        match self {
            MagmaticExpr::X => x.clone(),
            MagmaticExpr::Product(a, b) => a.eval(x).product(&b.eval(x)),
        }
    }
}

impl fmt::Display for MagmaticExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MagmaticExpr::X => f.write_str("x"),
            MagmaticExpr::Product(a, b) => {
                match **a {
                    MagmaticExpr::X => write!(f, "x")?,
                    _ => write!(f, "({a})")?,
                }
                write!(f, "↷{b}")
            }
        }
    }
}

impl fmt::Debug for MagmaticExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MagmaticExpr> {
        let left = self.atom()?;
        match self.peek() {
            Some('↷') | Some('>') => {
                self.pos += 1;
                Ok(MagmaticExpr::product(left, self.expr()?))
            }
            _ => Ok(left),
        }
    }

    fn atom(&mut self) -> Result<MagmaticExpr> {
        match self.peek() {
            Some('x') | Some('A') => {
                self.pos += 1;
                Ok(MagmaticExpr::X)
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(Error::Parse(format!("missing `)` in `{}`", self.src)));
                }
                self.pos += 1;
                Ok(inner)
            }
            other => Err(Error::Parse(format!(
                "unexpected {} in `{}`",
                other.map_or("end of input".to_string(), |c| format!("`{c}`")),
                self.src
            ))),
        }
    }
}

impl FromStr for MagmaticExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            chars: s.chars().collect(),
            pos: 0,
            src: s,
        };
        let e = p.expr()?;
        if p.peek().is_some() {
            return Err(Error::Parse(format!("trailing input in `{s}`")));
        }
        Ok(e)
    }
}

/// A rational linear combination of magmatic expressions.
#[derive(Clone, Debug, PartialEq)]
pub struct MagmaticSum(pub Vec<(Rational, MagmaticExpr)>);

impl MagmaticSum {
    pub fn eval<A: PreLieAlgebra>(&self, x: &A) -> A {
        self.0
            .iter()
            .fold(x.zero_like(), |acc, (c, e)| acc.sum(&e.eval(x).scaled(c)))
    }

    pub fn expand(&self) -> TreeSeries {
        self.eval(&TreeSeries::generator())
    }

    /// The two-term fourth Magnus term
    /// `1/6 ((x↷x)↷x)↷x + 1/12 x↷((x↷x)↷x)`.
    pub fn omega4() -> Self {
        let x = || MagmaticExpr::X;
        let xx = MagmaticExpr::product(x(), x());
        let xx_x = MagmaticExpr::product(xx, x());
        MagmaticSum(vec![
            (ratio(1, 6), MagmaticExpr::product(xx_x.clone(), x())),
            (ratio(1, 12), MagmaticExpr::product(x(), xx_x)),
        ])
    }
}

impl fmt::Display for MagmaticSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (c, e)) in self.0.iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                (_, false) => f.write_str(" + ")?,
                (_, true) => f.write_str(" - ")?,
            }
            let c = c.abs();
            if c.is_one() {
                write!(f, "{e}")?;
            } else {
                write!(f, "{c} {e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for MagmaticSum {
    type Err = Error;

    /// Terms `c expr` joined by `+` or `-` at parenthesis depth zero; a
    /// missing coefficient means 1.
    fn from_str(s: &str) -> Result<Self> {
        let mut pieces = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        let mut sign = Rational::one();
        for (i, ch) in s.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' | '-' if depth == 0 && !s[start..i].trim().is_empty() && !ends_with_slash(&s[start..i]) => {
                    pieces.push((sign.clone(), &s[start..i]));
                    sign = if ch == '-' { -Rational::one() } else { Rational::one() };
                    start = i + ch.len_utf8();
                }
                _ => {}
            }
        }
        pieces.push((sign, &s[start..]));
        let mut out = Vec::new();
        for (sign, text) in pieces {
            let text = text.trim();
            let split = text.find(['x', 'A', '(']).unwrap_or(text.len());
            let coeff_text = text[..split].trim();
            let coeff = if coeff_text.is_empty() {
                Rational::one()
            } else if coeff_text == "-" {
                -Rational::one()
            } else {
                parse_rational(coeff_text)?
            };
            out.push((sign * coeff, text[split..].parse()?));
        }
        Ok(MagmaticSum(out))
    }
}

fn ends_with_slash(s: &str) -> bool {
    s.trim_end().ends_with('/')
}

/// Expansion of a single expression in the tree basis.
pub fn expand_magmatic(e: &MagmaticExpr) -> TreeSeries {
    e.eval(&TreeSeries::generator())
}
