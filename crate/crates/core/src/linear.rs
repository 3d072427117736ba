//! Linear Thiele equations: the surrender value `G`, the market reserve `V`
//! without surrender, and the reserve `V_ν` under a given surrender intensity.

use crate::contract::{step_count, Basis, PaymentPlan, ReserveGrid, TimePoint};
use crate::error::{Error, Result};
use crate::ode::{solve_backward, BackwardProblem};

/// `r(t)v + π(t) − μ(t)(b_ad(t) − v)`, the part of Thiele's equation shared
/// by every reserve of an active policy.
pub(crate) fn thiele_base(plan: &PaymentPlan, basis: &Basis, at: TimePoint, v: f64) -> f64 {
    basis.rate.rate(at) * v + plan.premium(at)
        - basis.mortality.intensity(at.t) * (plan.death(at) - v)
}

pub(crate) fn solve_on_plan<F>(plan: &PaymentPlan, step: f64, rhs: F) -> Result<ReserveGrid>
where
    F: Fn(TimePoint, f64) -> f64,
{
    plan.validate()?;
    solve_backward(&BackwardProblem {
        rhs,
        terminal_time: plan.horizon,
        terminal_value: plan.terminal_benefit,
        start_time: 0.0,
        step,
    })
}

/// Checks that `grid` is the solver grid on `[0, horizon]` at `step`.
pub(crate) fn ensure_plan_grid(
    grid: &ReserveGrid,
    plan: &PaymentPlan,
    step: f64,
    what: &str,
) -> Result<()> {
    let n = step_count(0.0, plan.horizon, step)?;
    let expected = ReserveGrid {
        t0: 0.0,
        step,
        values: vec![0.0; n + 1],
    };
    grid.ensure_aligned(&expected, what)
}

/// Technical reserve on the technical basis; it is paid out on surrender.
/// The terminal node holds the left limit `G(n-) = b_a(n)`.
pub fn surrender_value(plan: &PaymentPlan, technical: &Basis, step: f64) -> Result<ReserveGrid> {
    solve_on_plan(plan, step, |at, v| thiele_base(plan, technical, at, v))
}

/// Market reserve with no surrender.
pub fn reserve_no_surrender(plan: &PaymentPlan, market: &Basis, step: f64) -> Result<ReserveGrid> {
    solve_on_plan(plan, step, |at, v| thiele_base(plan, market, at, v))
}

/// Market reserve when the policyholder surrenders with the deterministic
/// intensity `nu` and receives the surrender value `G`. Between nodes `G` is
/// interpolated linearly.
pub fn reserve_with_intensity<N>(
    plan: &PaymentPlan,
    market: &Basis,
    surrender: &ReserveGrid,
    nu: N,
    step: f64,
) -> Result<ReserveGrid>
where
    N: Fn(f64) -> f64,
{
    ensure_plan_grid(surrender, plan, step, "surrender value")?;
    for i in 0..surrender.len() {
        for t in [surrender.time(i), surrender.time(i) - 0.5 * step] {
            if t >= 0.0 && !(nu(t) >= 0.0) {
                return Err(Error::domain(format!(
                    "surrender intensity {} at t = {t} is negative",
                    nu(t)
                )));
            }
        }
    }
    solve_on_plan(plan, step, |at, v| {
        thiele_base(plan, market, at, v) - nu(at.t) * (surrender.interpolate(at.t) - v)
    })
}
