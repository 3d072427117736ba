//! Penalty-method convergence: behavioural reserves approach the worst case
//! as the rationality parameter grows.
//!
//! Convergence needs the intensity to vanish on losses and blow up on gains:
//!
//! - vanishing on losses: `sup_{y ≤ x} h_θ(y) → 0` for every `x < 0`,
//! - exploding on gains: `inf_{y ≥ x} h_θ(y) → ∞` for every `x > 0`.
//!
//! All families here are non-decreasing in the gain, so the supremum over
//! `y ≤ x` is `h_θ(x)` and the infimum over `y ≥ x` is `h_θ(x)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::behaviour::solve_reserve_dependent;
use crate::contract::{Basis, IntensityModel, PaymentPlan, ReserveGrid};
use crate::error::{Error, Result};
use crate::linear::reserve_no_surrender;
use crate::worst_case::worst_case_reserve;

/// Gain levels (money) at which the envelope conditions are probed.
pub const PROBE_GAINS: [f64; 3] = [1e3, 1e4, 1e5];

/// How `ψ` moves along an exponential sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiSchedule {
    Fixed(f64),
    /// `ψ_θ = e^{−√θ}`.
    DecayExpSqrt,
    /// One `ψ` per swept `θ`, in order.
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SweepFamily {
    Indicator,
    Exponential { psi: PsiSchedule },
}

impl SweepFamily {
    /// The intensity model for the `index`-th swept `theta`.
    pub fn model(&self, theta: f64, index: usize) -> Result<IntensityModel> {
        let model = match self {
            SweepFamily::Indicator => IntensityModel::Indicator { theta },
            SweepFamily::Exponential { psi } => {
                let psi = match psi {
                    PsiSchedule::Fixed(p) => *p,
                    PsiSchedule::DecayExpSqrt => (-theta.sqrt()).exp(),
                    PsiSchedule::Explicit(list) => *list.get(index).ok_or_else(|| {
                        Error::config(format!("no ψ given for sweep entry {index}"))
                    })?,
                };
                IntensityModel::Exponential { psi, theta }
            }
        };
        model.validate()?;
        Ok(model)
    }
}

/// Envelope values at one `θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub theta: f64,
    /// `(ε, sup_{y ≤ −ε} h_θ(y))` for each probe gain.
    pub loss_envelope: Vec<(f64, f64)>,
    /// `(ε, inf_{y ≥ ε} h_θ(y))` for each probe gain.
    pub gain_envelope: Vec<(f64, f64)>,
}

pub fn condition_check(model: &IntensityModel, theta: f64) -> ConditionReport {
    ConditionReport {
        theta,
        loss_envelope: PROBE_GAINS
            .iter()
            .map(|&e| (e, model.evaluate(0.0, -e)))
            .collect(),
        gain_envelope: PROBE_GAINS
            .iter()
            .map(|&e| (e, model.evaluate(0.0, e)))
            .collect(),
    }
}

/// Whether a sweep moves the envelopes in the directions convergence requires.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConditions {
    pub reports: Vec<ConditionReport>,
    /// Loss envelope non-increasing along the sweep and heading to zero.
    pub vanishing_on_losses: bool,
    /// Gain envelope non-decreasing along the sweep and growing.
    pub exploding_on_gains: bool,
}

pub fn sweep_conditions(family: &SweepFamily, thetas: &[f64]) -> Result<SweepConditions> {
    let reports = thetas
        .iter()
        .enumerate()
        .map(|(k, &theta)| Ok(condition_check(&family.model(theta, k)?, theta)))
        .collect::<Result<Vec<_>>>()?;
    let column = |pick: fn(&ConditionReport) -> &Vec<(f64, f64)>, j: usize| -> Vec<f64> {
        reports.iter().map(|r| pick(r)[j].1).collect()
    };
    let mut vanishing = true;
    let mut exploding = true;
    for j in 0..PROBE_GAINS.len() {
        let loss = column(|r| &r.loss_envelope, j);
        let gain = column(|r| &r.gain_envelope, j);
        let (first, last) = (loss[0], loss[loss.len() - 1]);
        vanishing &= loss.windows(2).all(|w| w[1] <= w[0]) && (last < first || last == 0.0);
        let (first, last) = (gain[0], gain[gain.len() - 1]);
        exploding &= gain.windows(2).all(|w| w[1] >= w[0]) && last > first;
    }
    Ok(SweepConditions {
        reports,
        vanishing_on_losses: vanishing,
        exploding_on_gains: exploding,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    /// `max_t (W(t) − V_θ(t))` over all nodes before the horizon.
    pub sup_error: f64,
    /// `W(0) − V_θ(0)`.
    pub error_at_0: f64,
}

/// Solves `V_θ` for each `θ` and measures its distance to the worst case.
pub fn theta_sweep(
    plan: &PaymentPlan,
    market: &Basis,
    surrender: &ReserveGrid,
    family: &SweepFamily,
    thetas: &[f64],
    step: f64,
) -> Result<Vec<SweepRow>> {
    if thetas.len() < 3 {
        return Err(Error::config(format!(
            "a sweep needs at least 3 values of θ, got {}",
            thetas.len()
        )));
    }
    if thetas.iter().any(|t| !(t.is_finite() && *t >= 0.0))
        || thetas.windows(2).any(|w| !(w[1] > w[0]))
    {
        return Err(Error::config(
            "θ values must be finite, non-negative and strictly ascending",
        ));
    }
    let conditions = sweep_conditions(family, thetas)?;
    if !conditions.vanishing_on_losses {
        return Err(Error::config(
            "sweep violates the loss condition: sup of h_θ over losses does not decrease to 0",
        ));
    }
    if !conditions.exploding_on_gains {
        return Err(Error::config(
            "sweep violates the gain condition: inf of h_θ over gains does not grow without bound",
        ));
    }

    let baseline = reserve_no_surrender(plan, market, step)?;
    let worst = worst_case_reserve(market, surrender, &baseline)?.worst_reserve;
    let models = thetas
        .iter()
        .enumerate()
        .map(|(k, &theta)| family.model(theta, k))
        .collect::<Result<Vec<_>>>()?;

    models
        .par_iter()
        .zip(thetas.par_iter())
        .map(|(model, &theta)| {
            let reserve = solve_reserve_dependent(plan, market, surrender, *model, step)?.reserve;
            Ok(sweep_row(theta, &worst, &reserve))
        })
        .collect()
}

pub fn sweep_row(theta: f64, worst: &ReserveGrid, reserve: &ReserveGrid) -> SweepRow {
    let n = worst.len() - 1;
    let sup_error = (0..n.max(1))
        .map(|i| worst.values[i] - reserve.values[i])
        .fold(f64::NEG_INFINITY, f64::max);
    SweepRow {
        theta,
        sup_error,
        error_at_0: worst.values[0] - reserve.values[0],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicator_envelopes() {
        let r = condition_check(&IntensityModel::Indicator { theta: 2.5 }, 2.5);
        assert!(r.loss_envelope.iter().all(|&(_, h)| h == 0.0));
        assert!(r.gain_envelope.iter().all(|&(_, h)| h == 2.5));
    }

    #[test]
    fn exponential_envelopes_are_closed_form() {
        let (psi, theta) = (0.05, 3e-6);
        let r = condition_check(&IntensityModel::Exponential { psi, theta }, theta);
        for (&(e, lo), &(_, hi)) in r.loss_envelope.iter().zip(&r.gain_envelope) {
            assert!((lo - psi * (-theta * e).exp()).abs() < 1e-15);
            assert!((hi - psi * (theta * e).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn sweep_directions() {
        let thetas = [1e-6, 3e-6, 1e-5, 3e-5];
        for family in [
            SweepFamily::Indicator,
            SweepFamily::Exponential {
                psi: PsiSchedule::Fixed(0.05),
            },
            SweepFamily::Exponential {
                psi: PsiSchedule::DecayExpSqrt,
            },
        ] {
            let c = sweep_conditions(&family, &thetas).unwrap();
            assert!(c.vanishing_on_losses && c.exploding_on_gains, "{family:?}");
        }
        let growing = SweepFamily::Exponential {
            psi: PsiSchedule::Explicit(vec![0.05, 0.5, 5.0, 50.0]),
        };
        let c = sweep_conditions(&growing, &thetas).unwrap();
        assert!(!c.vanishing_on_losses);
    }

    #[test]
    fn decaying_psi_along_large_thetas() {
        let thetas = [1e-4, 4e-4, 9e-4, 1.6e-3];
        let family = SweepFamily::Exponential {
            psi: PsiSchedule::DecayExpSqrt,
        };
        let c = sweep_conditions(&family, &thetas).unwrap();
        for (r, &theta) in c.reports.iter().zip(&thetas) {
            let psi = (-f64::sqrt(theta)).exp();
            assert_eq!(r.loss_envelope[0].1, psi * (-theta * 1e3).exp());
        }
        assert!(c.vanishing_on_losses && c.exploding_on_gains);
    }
}
