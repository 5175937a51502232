use magnus_core::prelie::{
    euler_modified_field_defect, prelie_inverse, prelie_magnus, substitute, MPoly, MagmaticSum, TreeSeries, VectorField,
    SERIES_CAP,
};
use magnus_core::rational::{bernoulli_table, factorial, int};
use magnus_core::Rational;
use num_traits::One;
use serde::Serialize;

use crate::output::emit;
use crate::{CliError, CliResult, OutputArgs, SeriesCheck, Verdict};

#[derive(Debug, Serialize)]
pub struct Row {
    pub series: &'static str,
    pub grade: usize,
    pub tree: String,
    pub coefficient: String,
}

fn rows(name: &'static str, s: &TreeSeries) -> Vec<Row> {
    s.terms()
        .map(|(t, c)| Row {
            series: name,
            grade: t.nodes(),
            tree: t.to_string(),
            coefficient: c.to_string(),
        })
        .collect()
}

/// `sum_n B_n/n! (s ↷)^n (•)` through `order`, iterated directly.
fn magnus_right_side(s: &TreeSeries, order: usize) -> TreeSeries {
    let bern = bernoulli_table(order);
    let mut acc = TreeSeries::zero();
    let mut power = TreeSeries::generator();
    for (n, b) in bern.iter().enumerate().take(order) {
        acc = acc.add(&power.scale(&(b / Rational::from_integer(factorial(n)))));
        power = s.graft_truncated(&power, order);
    }
    acc.truncate(order)
}

/// `f(x, y) = (y, -x + x^2 y)`.
fn sample_field() -> VectorField {
    let x = MPoly::var(2, 0);
    let y = MPoly::var(2, 1);
    VectorField::new(vec![y.clone(), x.scale(&int(-1)).add(&x.mul(&x).mul(&y))]).expect("two components")
}

pub fn run(check: SeriesCheck, order: usize, out: &OutputArgs) -> CliResult<Verdict> {
    if order == 0 || order > SERIES_CAP {
        return Err(CliError::Config(format!("order must be in 1..={SERIES_CAP}")));
    }
    let bullet = TreeSeries::generator();
    let (records, verdict) = match check {
        SeriesCheck::Omega => {
            let omega = prelie_magnus(order)?;
            println!("{omega}");
            let pass = magnus_right_side(&omega, order) == omega;
            (rows("omega", &omega), Verdict {
                pass,
                summary: format!("fixed point holds through grade {order}: {pass}"),
            })
        }
        SeriesCheck::Inverse => {
            let omega = prelie_magnus(order)?;
            let inverse = prelie_inverse(order)?;
            println!("{inverse}");
            let left = substitute(&omega, &inverse) == bullet;
            let right = substitute(&inverse, &omega) == bullet;
            (rows("inverse", &inverse), Verdict {
                pass: left && right,
                summary: format!("omega(W) = •: {left}, W(omega) = •: {right}"),
            })
        }
        SeriesCheck::Omega4 => {
            let grade4 = prelie_magnus(order.max(4))?.grade(4);
            let formula = MagmaticSum::omega4();
            let expanded = formula.expand();
            println!("{formula} = {expanded}");
            println!("grade 4 = {grade4}");
            let pass = grade4 == expanded;
            let negated = grade4 == expanded.scale(&-Rational::one());
            let mut records = rows("grade4", &grade4);
            records.extend(rows("two-term", &expanded));
            (records, Verdict {
                pass,
                summary: format!("grade 4 equals the two-term form: {pass}; equals its negative: {negated}"),
            })
        }
        SeriesCheck::EulerBackward => {
            let omega = prelie_magnus(order)?;
            println!("{omega}");
            let defect = euler_modified_field_defect(&sample_field(), order as u32)?;
            let pass = defect.iter().all(MPoly::is_zero);
            (rows("omega", &omega), Verdict {
                pass,
                summary: format!("time-one flow of omega(h f) equals y + h f through h^{order}: {pass}"),
            })
        }
    };
    if out.out.is_some() {
        emit(&records, out)?;
    }
    Ok(verdict)
}
