//! Fixed-step classical Runge–Kutta integration of terminal-value problems.
//!
//! Every reserve in the crate solves `V'(t) = F(t, V(t))` with `V(n-)` given,
//! marching backward from the terminal time. The step is fixed so that all
//! reserves share one grid; a step that ends on a rate breakpoint evaluates
//! its end stages as one-sided limits from inside the step.

use crate::contract::{step_count, ReserveGrid, TimePoint};
use crate::error::{Error, Result};

/// Default grid spacing: one hundredth of a month.
pub const DEFAULT_STEP: f64 = 1.0 / 1200.0;

/// A terminal-value problem on `[start_time, terminal_time]`.
#[derive(Debug, Clone)]
pub struct BackwardProblem<F> {
    pub rhs: F,
    pub terminal_time: f64,
    pub terminal_value: f64,
    pub start_time: f64,
    pub step: f64,
}

/// Same as [`BackwardProblem`] for a two-component state.
#[derive(Debug, Clone)]
pub struct PairProblem<F> {
    pub rhs: F,
    pub terminal_time: f64,
    pub terminal_value: [f64; 2],
    pub start_time: f64,
    pub step: f64,
}

fn check_interval(start: f64, end: f64, step: f64) -> Result<usize> {
    if !(start < end) {
        return Err(Error::config(format!(
            "start time {start} must precede terminal time {end}"
        )));
    }
    step_count(start, end, step)
}

fn node_time(start: f64, end: f64, step: f64, n: usize, i: usize) -> f64 {
    if i == n {
        end
    } else {
        start + i as f64 * step
    }
}

fn march<const N: usize, F>(
    rhs: &F,
    start: f64,
    end: f64,
    step: f64,
    terminal: [f64; N],
) -> Result<Vec<[f64; N]>>
where
    F: Fn(TimePoint, &[f64; N]) -> [f64; N],
{
    let n = check_interval(start, end, step)?;
    let mut out = vec![[0.0; N]; n + 1];
    out[n] = terminal;

    let eval = |at: TimePoint, v: &[f64; N]| -> Result<[f64; N]> {
        let d = rhs(at, v);
        if let Some(k) = d.iter().position(|x| !x.is_finite()) {
            return Err(Error::numerical(
                at.t,
                format!("right-hand side component {k} is {} at state {:?}", d[k], v),
            ));
        }
        Ok(d)
    };
    let shift = |v: &[f64; N], k: &[f64; N], h: f64| -> [f64; N] {
        let mut w = *v;
        for j in 0..N {
            w[j] = v[j] - h * k[j];
        }
        w
    };

    let mut v = terminal;
    for i in (0..n).rev() {
        let hi = node_time(start, end, step, n, i + 1);
        let lo = node_time(start, end, step, n, i);
        let h = hi - lo;
        let mid = TimePoint::at(hi - 0.5 * h);

        let k1 = eval(TimePoint::left_of(hi), &v)?;
        let k2 = eval(mid, &shift(&v, &k1, 0.5 * h))?;
        let k3 = eval(mid, &shift(&v, &k2, 0.5 * h))?;
        let k4 = eval(TimePoint::at(lo), &shift(&v, &k3, h))?;
        for j in 0..N {
            v[j] -= h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        if let Some(j) = v.iter().position(|x| !x.is_finite()) {
            return Err(Error::numerical(
                lo,
                format!("state component {j} became {}", v[j]),
            ));
        }
        out[i] = v;
    }
    Ok(out)
}

/// Integrates a scalar problem backward with classical RK4.
///
/// The returned grid starts at `start_time`; its last node holds the
/// terminal value.
pub fn solve_backward<F>(problem: &BackwardProblem<F>) -> Result<ReserveGrid>
where
    F: Fn(TimePoint, f64) -> f64,
{
    let rhs = |at: TimePoint, v: &[f64; 1]| [(problem.rhs)(at, v[0])];
    let states = march(
        &rhs,
        problem.start_time,
        problem.terminal_time,
        problem.step,
        [problem.terminal_value],
    )?;
    ReserveGrid::new(
        problem.start_time,
        problem.step,
        states.into_iter().map(|s| s[0]).collect(),
    )
}

/// Integrates a coupled pair backward; the right-hand side sees both components.
pub fn solve_backward_pair<F>(problem: &PairProblem<F>) -> Result<(ReserveGrid, ReserveGrid)>
where
    F: Fn(TimePoint, &[f64; 2]) -> [f64; 2],
{
    let states = march(
        &problem.rhs,
        problem.start_time,
        problem.terminal_time,
        problem.step,
        problem.terminal_value,
    )?;
    let (a, b): (Vec<f64>, Vec<f64>) = states.into_iter().map(|s| (s[0], s[1])).unzip();
    Ok((
        ReserveGrid::new(problem.start_time, problem.step, a)?,
        ReserveGrid::new(problem.start_time, problem.step, b)?,
    ))
}
