//! Conversion into a free (paid-up) policy.
//!
//! An active policy may surrender (`ν_as`) or convert to a free policy
//! (`ν_af`); a free policy may surrender (`ν_fs`). Converting at time `u`
//! stops premiums and scales benefits and surrender value by `f(u)`. When
//! `ν_fs` does not depend on `u`, the free-policy reserve factorizes as
//! `V_f(t, u) = f(u) · V_f*(t)` with a single reference reserve `V_f*`.

use rayon::prelude::*;

use crate::behaviour::max_abs_diff;
use crate::contract::{step_count, Basis, FreePolicyPlan, PaymentPlan, ReserveGrid, TimePoint};
use crate::error::{Error, Result};
use crate::linear::{ensure_plan_grid, solve_on_plan, thiele_base};
use crate::ode::{solve_backward, solve_backward_pair, BackwardProblem, PairProblem};

/// Reference free-policy reserve `V_f*` for a `u`-independent intensity
/// `nu_fs`. No premiums are paid in the free-policy state.
pub fn free_policy_reference<N>(
    plan: &PaymentPlan,
    market: &Basis,
    free_surrender: &ReserveGrid,
    nu_fs: N,
    step: f64,
) -> Result<ReserveGrid>
where
    N: Fn(f64) -> f64,
{
    ensure_plan_grid(free_surrender, plan, step, "free-policy surrender value")?;
    let free = plan.without_premium();
    solve_on_plan(&free, step, |at, v| {
        thiele_base(&free, market, at, v) - nu_fs(at.t) * (free_surrender.interpolate(at.t) - v)
    })
}

fn active_rhs(
    fp: &FreePolicyPlan,
    market: &Basis,
    surrender: &ReserveGrid,
    at: TimePoint,
    va: f64,
    converted: f64,
) -> f64 {
    let gain_as = surrender.interpolate(at.t) - va;
    let gain_af = converted - va;
    thiele_base(&fp.base_plan, market, at, va)
        - fp.intensity_as.evaluate(at.t, gain_as) * gain_as
        - fp.intensity_af.evaluate(at.t, gain_af) * gain_af
}

/// Active-state reserve `V_a` with reserve-dependent surrender and
/// conversion, using `V_f(t, t) = f(t) · V_f*(t)` from the given reference.
pub fn active_reserve_with_free_policy(
    fp: &FreePolicyPlan,
    market: &Basis,
    surrender: &ReserveGrid,
    vf_reference: &ReserveGrid,
    step: f64,
) -> Result<ReserveGrid> {
    fp.validate(step)?;
    let plan = &fp.base_plan;
    ensure_plan_grid(surrender, plan, step, "surrender value")?;
    ensure_plan_grid(vf_reference, plan, step, "free-policy reference reserve")?;
    solve_on_plan(plan, step, |at, va| {
        let converted = fp.scaling.at(at.t) * vf_reference.interpolate(at.t);
        active_rhs(fp, market, surrender, at, va, converted)
    })
}

/// Solves `V_a` and `V_f*` together as one coupled system. Here `ν_fs` is
/// `intensity_fs` evaluated on the reference gain `G_f(t) − V_f*(t)`, which
/// does not depend on the conversion time.
pub fn solve_active_and_reference(
    fp: &FreePolicyPlan,
    market: &Basis,
    surrender: &ReserveGrid,
    free_surrender: &ReserveGrid,
    step: f64,
) -> Result<(ReserveGrid, ReserveGrid)> {
    fp.validate(step)?;
    let plan = &fp.base_plan;
    ensure_plan_grid(surrender, plan, step, "surrender value")?;
    ensure_plan_grid(free_surrender, plan, step, "free-policy surrender value")?;
    let free = plan.without_premium();
    solve_backward_pair(&PairProblem {
        rhs: |at: TimePoint, s: &[f64; 2]| {
            let [va, vf] = *s;
            let gain_fs = free_surrender.interpolate(at.t) - vf;
            let dvf = thiele_base(&free, market, at, vf)
                - fp.intensity_fs.evaluate(at.t, gain_fs) * gain_fs;
            let dva = active_rhs(fp, market, surrender, at, va, fp.scaling.at(at.t) * vf);
            [dva, dvf]
        },
        terminal_time: plan.horizon,
        terminal_value: [plan.terminal_benefit, plan.terminal_benefit],
        start_time: 0.0,
        step,
    })
}

/// Largest gap between `V_a` and the linear active reserve re-solved with
/// both behavioural intensities frozen at their realized node values.
pub fn active_consistency_check(
    fp: &FreePolicyPlan,
    market: &Basis,
    surrender: &ReserveGrid,
    vf_reference: &ReserveGrid,
    active: &ReserveGrid,
    step: f64,
) -> Result<f64> {
    let plan = &fp.base_plan;
    ensure_plan_grid(active, plan, step, "active reserve")?;
    let converted = |t: f64| fp.scaling.at(t) * vf_reference.interpolate(t);
    let nu_as = active.map(|t, va| fp.intensity_as.evaluate(t, surrender.interpolate(t) - va));
    let nu_af = active.map(|t, va| fp.intensity_af.evaluate(t, converted(t) - va));
    let linear = solve_on_plan(plan, step, |at, va| {
        thiele_base(plan, market, at, va)
            - nu_as.interpolate(at.t) * (surrender.interpolate(at.t) - va)
            - nu_af.interpolate(at.t) * (converted(at.t) - va)
    })?;
    Ok(max_abs_diff(active, &linear))
}

/// Free-policy reserves `V_f(t, u)` for every conversion node `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreePolicySurface {
    /// Conversion times, every `stride`-th node of the solver grid.
    pub conversion_times: Vec<f64>,
    /// Column `k` holds `V_f(·, conversion_times[k])` on `[u_k, n]`.
    pub columns: Vec<ReserveGrid>,
}

/// General free-policy reserves: one backward solve per conversion time,
/// with `intensity_fs` evaluated on the conversion-specific gain
/// `f(u)·G_f(t) − V_f(t, u)`.
pub fn free_policy_surface(
    fp: &FreePolicyPlan,
    market: &Basis,
    free_surrender: &ReserveGrid,
    step: f64,
    stride: usize,
) -> Result<FreePolicySurface> {
    fp.validate(step)?;
    let plan = fp.base_plan.without_premium();
    ensure_plan_grid(free_surrender, &plan, step, "free-policy surrender value")?;
    let n = step_count(0.0, plan.horizon, step)?;
    if stride == 0 || n % stride != 0 {
        return Err(Error::config(format!(
            "conversion stride {stride} does not divide the {n}-step grid"
        )));
    }

    let nodes: Vec<usize> = (0..=n).step_by(stride).collect();
    let columns = nodes
        .par_iter()
        .map(|&i| {
            let u = free_surrender.time(i);
            let f = fp.scaling.at(u);
            if i == n {
                return ReserveGrid::new(u, step, vec![f * plan.terminal_benefit]);
            }
            solve_backward(&BackwardProblem {
                rhs: |at: TimePoint, v: f64| {
                    let gain = f * free_surrender.interpolate(at.t) - v;
                    market.rate.rate(at) * v
                        - market.mortality.intensity(at.t) * (f * plan.death(at) - v)
                        - fp.intensity_fs.evaluate(at.t, gain) * gain
                },
                terminal_time: plan.horizon,
                terminal_value: f * plan.terminal_benefit,
                start_time: u,
                step,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(FreePolicySurface {
        conversion_times: nodes.iter().map(|&i| free_surrender.time(i)).collect(),
        columns,
    })
}
