//! Butcher tableaux with exact coefficients in `Q(sqrt(d))`.
//!
//! The two-stage Gauss-Legendre tableau has entries `1/4 -+ sqrt(3)/6`, so
//! plain rationals are not enough. Every coefficient is stored as
//! `rational + surd * sqrt(radicand)` with one radicand per tableau, which
//! keeps the row-sum condition `c_i = sum_j a_ij` an exact check.

use std::ops::Add;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, ratio, Rational, RationalEntry};
use crate::scalar::Real;

/// `rational + surd * sqrt(radicand)`; the radicand lives on the tableau.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coeff {
    pub rational: Rational,
    pub surd: Rational,
}

impl Coeff {
    pub fn rational(q: Rational) -> Self {
        Coeff {
            rational: q,
            surd: Rational::zero(),
        }
    }

    pub fn new(rational: Rational, surd: Rational) -> Self {
        Coeff { rational, surd }
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }

    pub fn to_real<T: Real>(&self, radicand: u64) -> T {
        let r = self.rational.to_f64().unwrap_or(f64::NAN);
        let s = self.surd.to_f64().unwrap_or(f64::NAN);
        T::from_f64_lossy(r + s * (radicand as f64).sqrt())
    }
}

impl Add for &Coeff {
    type Output = Coeff;

    fn add(self, rhs: Self) -> Coeff {
        Coeff {
            rational: &self.rational + &rhs.rational,
            surd: &self.surd + &rhs.surd,
        }
    }
}

impl std::fmt::Display for Coeff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.rational.is_zero(), self.surd.is_zero()) {
            (_, true) => write!(f, "{}", self.rational),
            (true, false) => write!(f, "{}*sqrt(d)", self.surd),
            (false, false) => {
                let sign = if self.surd.is_negative() { '-' } else { '+' };
                write!(f, "{} {} {}*sqrt(d)", self.rational, sign, self.surd.abs())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ButcherTableau {
    name: String,
    radicand: u64,
    a: Vec<Vec<Coeff>>,
    b: Vec<Coeff>,
    c: Vec<Coeff>,
}

/// Registered tableau names.
pub const TABLEAU_NAMES: [&str; 3] = ["euler", "heun", "gl2"];

impl ButcherTableau {
    /// Validates shapes, the radicand, and `c_i = sum_j a_ij` (exactly).
    pub fn new(
        name: impl Into<String>,
        radicand: u64,
        a: Vec<Vec<Coeff>>,
        b: Vec<Coeff>,
        c: Vec<Coeff>,
    ) -> Result<Self> {
        let s = b.len();
        if s == 0 {
            return Err(Error::InvalidTableau("no stages".into()));
        }
        if c.len() != s || a.len() != s || a.iter().any(|row| row.len() != s) {
            return Err(Error::InvalidTableau(format!("expected {s} stages in a, b and c")));
        }
        let uses_surd = a.iter().flatten().chain(&b).chain(&c).any(|x| !x.surd.is_zero());
        if uses_surd {
            let root = (radicand as f64).sqrt().round() as u64;
            if radicand < 2 || root * root == radicand {
                return Err(Error::InvalidTableau(format!(
                    "surd coefficients need a non-square radicand, got {radicand}"
                )));
            }
        }
        for (i, row) in a.iter().enumerate() {
            let sum = row.iter().fold(Coeff::zero(), |acc, x| &acc + x);
            if sum != c[i] {
                return Err(Error::InvalidTableau(format!(
                    "row {i}: c_i = {} but sum_j a_ij = {}",
                    c[i], sum
                )));
            }
        }
        Ok(ButcherTableau {
            name: name.into(),
            radicand,
            a,
            b,
            c,
        })
    }

    pub fn euler() -> Self {
        let q = |n, d| Coeff::rational(ratio(n, d));
        Self::new("euler", 1, vec![vec![q(0, 1)]], vec![q(1, 1)], vec![q(0, 1)])
            .expect("valid tableau")
    }

    pub fn heun() -> Self {
        let q = |n, d| Coeff::rational(ratio(n, d));
        Self::new(
            "heun",
            1,
            vec![vec![q(0, 1), q(0, 1)], vec![q(1, 1), q(0, 1)]],
            vec![q(1, 2), q(1, 2)],
            vec![q(0, 1), q(1, 1)],
        )
        .expect("valid tableau")
    }

    /// Two-stage Gauss-Legendre, `omega = sqrt(3)/6`.
    pub fn gl2() -> Self {
        let omega = ratio(1, 6);
        let quarter = ratio(1, 4);
        let half = ratio(1, 2);
        Self::new(
            "gl2",
            3,
            vec![
                vec![Coeff::rational(quarter.clone()), Coeff::new(quarter.clone(), -omega.clone())],
                vec![Coeff::new(quarter.clone(), omega.clone()), Coeff::rational(quarter)],
            ],
            vec![Coeff::rational(half.clone()), Coeff::rational(half.clone())],
            vec![Coeff::new(half.clone(), -omega.clone()), Coeff::new(half, omega)],
        )
        .expect("valid tableau")
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "euler" => Ok(Self::euler()),
            "heun" => Ok(Self::heun()),
            "gl2" => Ok(Self::gl2()),
            other => Err(Error::UnknownMethod(other.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn a(&self) -> &[Vec<Coeff>] {
        &self.a
    }

    pub fn b(&self) -> &[Coeff] {
        &self.b
    }

    pub fn c(&self) -> &[Coeff] {
        &self.c
    }

    /// Strictly lower triangular `a`.
    pub fn is_explicit(&self) -> bool {
        self.a
            .iter()
            .enumerate()
            .all(|(i, row)| row[i..].iter().all(Coeff::is_zero))
    }

    /// Coefficients converted to the working scalar: `(a, b, c)`.
    pub fn to_real<T: Real>(&self) -> (Vec<Vec<T>>, Vec<T>, Vec<T>) {
        let d = self.radicand;
        (
            self.a.iter().map(|r| r.iter().map(|x| x.to_real(d)).collect()).collect(),
            self.b.iter().map(|x| x.to_real(d)).collect(),
            self.c.iter().map(|x| x.to_real(d)).collect(),
        )
    }

    pub fn from_json(name: impl Into<String>, json: &str) -> Result<Self> {
        let file: TableauFile = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_tableau(name)
    }

    pub fn to_json(&self) -> String {
        let conv = |x: &Coeff| {
            if x.surd.is_zero() {
                CoeffEntry::Plain(RationalEntry::from_rational(&x.rational))
            } else {
                CoeffEntry::Surd {
                    q: RationalEntry::from_rational(&x.rational),
                    s: RationalEntry::from_rational(&x.surd),
                }
            }
        };
        let file = TableauFile {
            radicand: (self.radicand > 1).then_some(self.radicand),
            a: self.a.iter().map(|r| r.iter().map(conv).collect()).collect(),
            b: self.b.iter().map(conv).collect(),
            c: self.c.iter().map(conv).collect(),
        };
        serde_json::to_string(&file).expect("tableau serializes")
    }
}

/// JSON tableau: `{"a": [[...]], "b": [...], "c": [...]}` with rational
/// entries, optionally `{"q": .., "s": ..}` surd entries plus `"radicand"`.
#[derive(Debug, Serialize, Deserialize)]
struct TableauFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radicand: Option<u64>,
    a: Vec<Vec<CoeffEntry>>,
    b: Vec<CoeffEntry>,
    c: Vec<CoeffEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffEntry {
    Surd { q: RationalEntry, s: RationalEntry },
    Plain(RationalEntry),
}

impl CoeffEntry {
    fn to_coeff(&self) -> Result<Coeff> {
        match self {
            CoeffEntry::Plain(e) => Ok(Coeff::rational(e.to_rational()?)),
            CoeffEntry::Surd { q, s } => Ok(Coeff::new(q.to_rational()?, s.to_rational()?)),
        }
    }
}

impl TableauFile {
    fn into_tableau(self, name: impl Into<String>) -> Result<ButcherTableau> {
        let conv = |v: &[CoeffEntry]| v.iter().map(CoeffEntry::to_coeff).collect::<Result<Vec<_>>>();
        let a = self.a.iter().map(|r| conv(r)).collect::<Result<Vec<_>>>()?;
        ButcherTableau::new(name, self.radicand.unwrap_or(1), a, conv(&self.b)?, conv(&self.c)?)
    }
}

/// Sum of the `b` weights, exact.
pub fn weight_sum(tab: &ButcherTableau) -> Coeff {
    tab.b.iter().fold(Coeff::zero(), |acc, x| &acc + x)
}

/// `true` when the weights sum to exactly one.
pub fn is_consistent(tab: &ButcherTableau) -> bool {
    weight_sum(tab) == Coeff::rational(int(1))
}
