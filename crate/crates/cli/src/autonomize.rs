use magnus_core::autonomize::solve_augmented;
use magnus_core::mat::relative_difference;
use magnus_core::method::integrate_with;
use magnus_core::Mat;
use serde::Serialize;

use crate::output::emit;
use crate::{CliResult, OutputArgs, RunConfig, Verdict};

/// Augmented and direct solves may differ by at most this much.
pub const TOLERANCE: f64 = 1e-12;

#[derive(Debug, Serialize)]
pub struct Row {
    pub method: String,
    pub nsteps: usize,
    pub discrepancy: f64,
    pub t_final: f64,
    /// Every step's `aff(1)` exponent was exactly `h e_0`.
    pub time_steps_exact: bool,
}

pub fn run(cfg: &RunConfig, out: &OutputArgs) -> CliResult<Verdict> {
    let y0 = Mat::identity(cfg.problem.dim());
    let mut rows = Vec::new();
    for (name, method) in &cfg.methods {
        for &n in &cfg.steps {
            let h = (cfg.t_end - cfg.t0) / n as f64;
            let aug = solve_augmented(method, &cfg.field, cfg.t0, cfg.t_end, n, &y0)?;
            let direct = integrate_with(method, &cfg.field, cfg.t0, cfg.t_end, n, &y0)?;
            rows.push(Row {
                method: name.clone(),
                nsteps: n,
                discrepancy: relative_difference(&aug.state.y, direct.final_state()),
                t_final: aug.state.t,
                time_steps_exact: aug.aff_exponents.iter().all(|&(p, q)| p == 0.0 && q == h),
            });
        }
    }
    emit(&rows, out)?;
    let worst = rows.iter().map(|r| r.discrepancy).fold(0.0, f64::max);
    let time_ok = rows
        .iter()
        .all(|r| r.time_steps_exact && (r.t_final - cfg.t_end).abs() <= 1e-14 * cfg.t_end.abs().max(1.0));
    Ok(Verdict {
        pass: worst <= TOLERANCE && time_ok,
        summary: format!("max discrepancy {worst:.3e}, time block exact: {time_ok}"),
    })
}
