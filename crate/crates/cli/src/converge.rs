use magnus_core::magnus::reference_solve;
use magnus_core::mat::relative_difference;
use magnus_core::method::integrate_with;
use magnus_core::Mat;
use serde::Serialize;

use crate::output::emit;
use crate::{CliResult, OutputArgs, RunConfig, Verdict};

#[derive(Debug, Serialize)]
pub struct Row {
    pub method: String,
    pub nsteps: usize,
    pub h: f64,
    pub error: f64,
    /// Slope of log(error) over log(h) against the previous row; empty on
    /// the first row of each method.
    pub slope: Option<f64>,
}

pub fn rows(cfg: &RunConfig) -> CliResult<Vec<Row>> {
    let y0 = Mat::identity(cfg.problem.dim());
    let reference = reference_solve(&cfg.field, cfg.t0, cfg.t_end, &y0, cfg.tol)?;
    let mut rows = Vec::new();
    for (name, method) in &cfg.methods {
        let mut prev: Option<(f64, f64)> = None;
        for &n in &cfg.steps {
            let traj = integrate_with(method, &cfg.field, cfg.t0, cfg.t_end, n, &y0)?;
            let error = relative_difference(traj.final_state(), &reference);
            let h = (cfg.t_end - cfg.t0) / n as f64;
            let slope = prev
                .filter(|&(_, e)| e > 0.0 && error > 0.0)
                .map(|(ph, pe)| (error / pe).ln() / (h / ph).ln());
            rows.push(Row {
                method: name.clone(),
                nsteps: n,
                h,
                error,
                slope,
            });
            prev = Some((h, error));
        }
    }
    Ok(rows)
}

pub fn run(cfg: &RunConfig, out: &OutputArgs) -> CliResult<Verdict> {
    let rows = rows(cfg)?;
    emit(&rows, out)?;
    Ok(Verdict {
        pass: true,
        summary: format!("{} rows", rows.len()),
    })
}
