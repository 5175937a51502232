use magnus_core::postlie::{
    adjoint_axiom_check, connection_ladder, geometric_magnus_check, postlie_axiom_check, TField, THETA_CAP,
};
use magnus_core::rational::{int, max_abs};
use magnus_core::{Mat, MatPoly, Rational};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::output::emit;
use crate::{CliError, CliResult, PostlieArgs, PostlieCheck, Verdict};

const MAX_DIM: usize = 6;
const MAX_DEGREE: usize = 8;
const MAX_COUNT: usize = 100_000;
const MAX_LADDER: usize = 12;

#[derive(Debug, Serialize)]
pub struct Row {
    pub case: usize,
    /// Largest absolute coefficient of each residual, exact.
    pub residual_1: String,
    pub residual_2: String,
    pub pass: bool,
}

fn random_poly(rng: &mut ChaCha8Rng, dim: usize, degree: usize) -> MatPoly<Rational> {
    let coeffs = (0..=degree)
        .map(|_| Mat::from_fn(dim, |_, _| int(rng.gen_range(-3..=3))))
        .collect();
    MatPoly::new(coeffs).expect("nonempty")
}

fn random_field(rng: &mut ChaCha8Rng, dim: usize, degree: usize) -> TField {
    TField::new(random_poly(rng, dim, degree), int(rng.gen_range(-3..=3)))
}

fn validate(args: &PostlieArgs) -> CliResult<()> {
    let bad = |what: &str, cap: usize| CliError::Config(format!("{what} must be in 1..={cap}"));
    if args.dim == 0 || args.dim > MAX_DIM {
        return Err(bad("dim", MAX_DIM));
    }
    if args.degree > MAX_DEGREE {
        return Err(CliError::Config(format!("degree must be at most {MAX_DEGREE}")));
    }
    match args.check {
        PostlieCheck::Axioms | PostlieCheck::Adjoint if args.count == 0 || args.count > MAX_COUNT => {
            Err(bad("count", MAX_COUNT))
        }
        PostlieCheck::Beauty if args.order > MAX_LADDER => Err(bad("order", MAX_LADDER)),
        PostlieCheck::GeometricMagnus if args.order == 0 || args.order > THETA_CAP => Err(bad("order", THETA_CAP)),
        _ => Ok(()),
    }
}

pub fn run(args: &PostlieArgs) -> CliResult<Verdict> {
    validate(args)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut rows = Vec::new();
    match args.check {
        PostlieCheck::Axioms | PostlieCheck::Adjoint => {
            for case in 0..args.count {
                let x = random_field(&mut rng, args.dim, args.degree);
                let y = random_field(&mut rng, args.dim, args.degree);
                let z = random_field(&mut rng, args.dim, args.degree);
                let (r1, r2) = if args.check == PostlieCheck::Axioms {
                    postlie_axiom_check(&x, &y, &z)?
                } else {
                    adjoint_axiom_check(&x, &y, &z)?
                };
                rows.push(Row {
                    case,
                    residual_1: r1.max_abs().to_string(),
                    residual_2: r2.max_abs().to_string(),
                    pass: r1.is_zero() && r2.is_zero(),
                });
            }
        }
        PostlieCheck::Beauty => {
            let a = TField::from_problem(random_poly(&mut rng, args.dim, args.degree));
            for n in 0..=args.order {
                let ladder = connection_ladder(&a, n)?;
                let diff = ladder.p.checked_sub(&a.p.nth_derivative(n))?;
                let residual = max_abs(diff.coeffs().iter().flat_map(|m| m.entries()));
                rows.push(Row {
                    case: n,
                    pass: residual.is_zero(),
                    residual_1: residual.to_string(),
                    residual_2: "0".into(),
                });
            }
        }
        PostlieCheck::GeometricMagnus => {
            let a = TField::from_problem(random_poly(&mut rng, args.dim, args.degree));
            let report = geometric_magnus_check(&a, args.order)?;
            for (k, r) in report.theta_vs_omega.iter().enumerate() {
                let order = k + 1;
                // Beyond the exact range the third-order sum is incomplete.
                let exact = order <= report.exact_through;
                rows.push(Row {
                    case: order,
                    residual_1: r.to_string(),
                    residual_2: report
                        .theta_dot_vs_omega_dot
                        .get(k)
                        .map(|d| d.to_string())
                        .unwrap_or_default(),
                    pass: !exact || r.is_zero(),
                });
            }
            let graded_ok = report.graded.iter().all(Zero::is_zero) && report.speed_is_tau;
            emit(&rows, &args.output)?;
            let pass = rows.iter().all(|r| r.pass) && graded_ok;
            return Ok(Verdict {
                pass,
                summary: format!(
                    "orders 1..={} agree exactly, graded terms agree: {graded_ok}",
                    report.exact_through
                ),
            });
        }
    }
    emit(&rows, &args.output)?;
    let failed = rows.iter().filter(|r| !r.pass).count();
    Ok(Verdict {
        pass: failed == 0,
        summary: format!("{} cases, {failed} with nonzero residuals", rows.len()),
    })
}
