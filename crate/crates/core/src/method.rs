//! Named one-step methods and the uniform-step driver.

use std::fmt;

use crate::error::{check_dims, Error, Result};
use crate::magnus::{magnus2_step, magnus4_step, Trajectory};
use crate::mat::Mat;
use crate::matfn::MatFn;
use crate::rkmk::{rkmk_step, ButcherTableau, RkmkOptions};
use crate::scalar::Real;

/// The methods compared throughout: the two Magnus integrators and their
/// RKMK counterparts.
pub const STANDARD_METHODS: [&str; 4] = ["magnus2", "magnus4", "rkmk-heun", "rkmk-gl2"];

#[derive(Clone, Debug, PartialEq)]
pub enum Method {
    Magnus2,
    Magnus4,
    Rkmk { tableau: ButcherTableau, options: RkmkOptions },
}

impl Method {
    /// `magnus2`, `magnus4`, or `rkmk-<tableau>` with default options.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "magnus2" => Ok(Method::Magnus2),
            "magnus4" => Ok(Method::Magnus4),
            other => match other.strip_prefix("rkmk-") {
                Some(tab) => Ok(Method::Rkmk {
                    tableau: ButcherTableau::by_name(tab).map_err(|_| Error::UnknownMethod(name.to_string()))?,
                    options: RkmkOptions::default(),
                }),
                None => Err(Error::UnknownMethod(name.to_string())),
            },
        }
    }

    pub fn rkmk(tableau: ButcherTableau, options: RkmkOptions) -> Self {
        Method::Rkmk { tableau, options }
    }

    /// Abscissae `c_i` at which the method samples `A`.
    pub fn nodes<T: Real>(&self) -> Vec<T> {
        match self {
            Method::Magnus2 => vec![T::zero(), T::one()],
            Method::Magnus4 => crate::magnus::gauss2_nodes::<T>().to_vec(),
            Method::Rkmk { tableau, .. } => tableau.to_real::<T>().2,
        }
    }

    /// One step: `(exponent, Y1)`.
    pub fn step<T: Real>(&self, a: &MatFn<T>, t0: T, h: T, y0: &Mat<T>) -> Result<(Mat<T>, Mat<T>)> {
        match self {
            Method::Magnus2 | Method::Magnus4 => {
                check_dims(a.dim(), y0.dim())?;
                let step = if *self == Method::Magnus2 {
                    magnus2_step(a, t0, h)?
                } else {
                    magnus4_step(a, t0, h)?
                };
                let y1 = &step.update * y0;
                Ok((step.exponent, y1))
            }
            Method::Rkmk { tableau, options } => rkmk_step(tableau, options, a, t0, h, y0),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Magnus2 => f.write_str("magnus2"),
            Method::Magnus4 => f.write_str("magnus4"),
            Method::Rkmk { tableau, .. } => write!(f, "rkmk-{}", tableau.name()),
        }
    }
}

/// Uniform steps `h = (t_end - t0) / nsteps`; times are `t0 + k h`.
pub fn integrate_with<T: Real>(
    method: &Method,
    a: &MatFn<T>,
    t0: T,
    t_end: T,
    nsteps: usize,
    y0: &Mat<T>,
) -> Result<Trajectory<T>> {
    if nsteps == 0 {
        return Err(Error::InvalidArgument("nsteps must be positive".into()));
    }
    if !(t_end > t0) {
        return Err(Error::InvalidArgument("integration needs t_end > t0".into()));
    }
    check_dims(a.dim(), y0.dim())?;
    let h = (t_end - t0) / T::from_f64_lossy(nsteps as f64);
    let mut times = Vec::with_capacity(nsteps + 1);
    let mut states = Vec::with_capacity(nsteps + 1);
    times.push(t0);
    states.push(y0.clone());
    for k in 0..nsteps {
        let t = t0 + h * T::from_f64_lossy(k as f64);
        let (_, y1) = method.step(a, t, h, &states[k])?;
        if !y1.is_finite() {
            return Err(Error::NonFinite);
        }
        let next = if k + 1 == nsteps {
            t_end
        } else {
            t0 + h * T::from_f64_lossy((k + 1) as f64)
        };
        times.push(next);
        states.push(y1);
    }
    Ok(Trajectory { times, states })
}

pub fn integrate<T: Real>(method: &str, a: &MatFn<T>, t0: T, t_end: T, nsteps: usize, y0: &Mat<T>) -> Result<Trajectory<T>> {
    integrate_with(&Method::by_name(method)?, a, t0, t_end, nsteps, y0)
}

/// Least-squares slope of `log(error)` against `log(h)`.
pub fn fit_slope(hs: &[f64], errors: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = hs
        .iter()
        .zip(errors)
        .filter(|(h, e)| **h > 0.0 && **e > 0.0)
        .map(|(h, e)| (h.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::expm;
    use crate::magnus::reference_solve;
    use crate::mat::relative_difference;
    use crate::poly::MatPoly;
    use crate::rational::int;

    fn problem() -> MatFn<f64> {
        let q = |rows: [[i64; 3]; 3]| Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap();
        let a = q([[0, 1, 0], [-1, 0, 2], [1, 1, 0]]);
        let b = q([[1, 0, 0], [0, -1, 1], [0, 2, 0]]);
        MatFn::from_poly(MatPoly::new(vec![a, b]).unwrap())
    }

    #[test]
    fn registry_names() {
        for name in STANDARD_METHODS {
            assert_eq!(Method::by_name(name).unwrap().to_string(), name);
        }
        assert!(Method::by_name("rkmk-euler").is_ok());
        assert_eq!(Method::by_name("rk4"), Err(Error::UnknownMethod("rk4".into())));
        assert_eq!(Method::by_name("rkmk-rk4"), Err(Error::UnknownMethod("rkmk-rk4".into())));
    }

    #[test]
    fn constant_field_is_exact_for_every_method() {
        let c = Mat::from_rows(vec![vec![0.0, 1.0], vec![-1.0, 0.2]]).unwrap();
        let a = MatFn::constant(c.clone());
        let y0 = Mat::identity(2);
        let exact = expm(&c.scale(&1.5)).unwrap();
        for name in STANDARD_METHODS.iter().chain(&["rkmk-euler"]) {
            let traj = integrate(name, &a, 0.0, 1.5, 7, &y0).unwrap();
            assert_eq!(traj.len(), 8);
            assert_eq!(traj.final_time(), 1.5);
            assert!(relative_difference(traj.final_state(), &exact) < 1e-12, "{name}");
        }
    }

    #[test]
    fn single_step_trajectory() {
        let traj = integrate("magnus2", &problem(), 0.0, 0.5, 1, &Mat::identity(3)).unwrap();
        assert_eq!(traj.times, vec![0.0, 0.5]);
        assert_eq!(traj.states[0], Mat::identity(3));
        assert!(integrate("magnus2", &problem(), 0.5, 0.5, 1, &Mat::identity(3)).is_err());
        assert!(integrate("magnus2", &problem(), 0.0, 0.5, 0, &Mat::identity(3)).is_err());
        assert!(integrate("magnus2", &problem(), 0.0, 0.5, 1, &Mat::identity(2)).is_err());
    }

    #[test]
    fn magnus2_error_quarters_when_steps_double() {
        let a = problem();
        let y0 = Mat::identity(3);
        let reference = reference_solve(&a, 0.0, 1.0, &y0, 1e-12).unwrap();
        let err = |n| (integrate("magnus2", &a, 0.0, 1.0, n, &y0).unwrap().final_state() - &reference).max_abs();
        let ratio = err(20) / err(40);
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn slope_fit() {
        let hs = [0.1, 0.05, 0.025];
        let errors: Vec<f64> = hs.iter().map(|h: &f64| 3.0 * h.powi(4)).collect();
        assert!((fit_slope(&hs, &errors).unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(fit_slope(&[0.1], &[1.0]), None);
    }
}
