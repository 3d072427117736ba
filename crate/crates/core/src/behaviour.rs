//! Reserve-dependent surrender.
//!
//! The surrender intensity `h(t, U(t))` depends on the policyholder's gain
//! `G(t) − U(t)`, which makes Thiele's equation nonlinear. The ODE is
//! integrated directly; the solved reserve then induces a deterministic
//! intensity `ν(t) = h(t, U(t))`, and re-solving the linear equation with
//! that frozen intensity must reproduce `U`.

use std::cell::Cell;

use crate::contract::{Basis, IntensityModel, PaymentPlan, ReserveGrid};
use crate::error::{Error, Result};
use crate::linear::{ensure_plan_grid, reserve_with_intensity, solve_on_plan, thiele_base};

#[derive(Debug, Clone, PartialEq)]
pub struct BehaviouralSolution {
    pub reserve: ReserveGrid,
    /// `h(t_i, U(t_i))` at every node.
    pub realized_intensity: ReserveGrid,
    pub model: IntensityModel,
}

/// Solves `U' = rU + π − μ(b_ad − U) − h(t, U)(G − U)`, `U(n-) = b_a(n)`.
pub fn solve_reserve_dependent(
    plan: &PaymentPlan,
    market: &Basis,
    surrender: &ReserveGrid,
    model: IntensityModel,
    step: f64,
) -> Result<BehaviouralSolution> {
    model.validate()?;
    ensure_plan_grid(surrender, plan, step, "surrender value")?;

    let bad_gain: Cell<Option<(f64, f64)>> = Cell::new(None);
    let reserve = solve_on_plan(plan, step, |at, u| {
        let gain = surrender.interpolate(at.t) - u;
        let nu = model.evaluate(at.t, gain);
        if (!gain.is_finite() || !nu.is_finite()) && bad_gain.get().is_none() {
            bad_gain.set(Some((at.t, gain)));
        }
        thiele_base(plan, market, at, u) - nu * gain
    })
    .map_err(|e| match (e, bad_gain.get()) {
        (Error::Numerical { .. }, Some((t, gain))) => {
            Error::numerical(t, format!("surrender intensity overflow at gain {gain}"))
        }
        (e, _) => e,
    })?;

    let realized_intensity = reserve.map(|t, u| {
        let i = reserve.node_index(t).expect("node time");
        model.evaluate(t, surrender.values[i] - u)
    });
    Ok(BehaviouralSolution {
        reserve,
        realized_intensity,
        model,
    })
}

/// Largest node-wise gap between the nonlinear reserve and the linear
/// reserve re-solved with the realized intensity frozen.
pub fn consistency_check(
    solution: &BehaviouralSolution,
    plan: &PaymentPlan,
    market: &Basis,
    surrender: &ReserveGrid,
    step: f64,
) -> Result<f64> {
    let nu = &solution.realized_intensity;
    let linear = reserve_with_intensity(plan, market, surrender, |t| nu.interpolate(t), step)?;
    solution
        .reserve
        .ensure_aligned(&linear, "behavioural reserve")?;
    Ok(max_abs_diff(&solution.reserve, &linear))
}

pub(crate) fn max_abs_diff(a: &ReserveGrid, b: &ReserveGrid) -> f64 {
    a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
