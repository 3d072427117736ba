//! Worst-case reserve over all surrender strategies.
//!
//! Surrendering at a deterministic time `u` adds the discounted gain
//! `e^{-∫_t^u (r+μ)} (G(u) − V(u))` to the no-surrender reserve `V(t)`, so
//! the worst case is `W = V + M` with `M(t)` the largest such gain over
//! `u ∈ [t, n]`. On the grid `M` is a Snell envelope:
//!
//! ```text
//! M(t_N) = 0
//! M(t_i) = max(G(t_i) − V(t_i), d_i · M(t_{i+1})),   d_i = e^{-∫_{t_i}^{t_{i+1}} (r+μ)}
//! ```
//!
//! The candidate `u = n` contributes zero gain whatever the stored `G(n-)`.

use rayon::prelude::*;

use crate::contract::{Basis, ReserveGrid};
use crate::error::Result;

/// Relative tolerance under which immediate surrender and continuation count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct WorstCaseSolution {
    /// `W(t_i)`.
    pub worst_reserve: ReserveGrid,
    /// Latest optimal surrender time `u*(t_i)`.
    pub latest_optimal: ReserveGrid,
    /// Largest discounted gain `M(t_i) = W(t_i) − V(t_i)`.
    pub gain_envelope: ReserveGrid,
}

const GAUSS3_NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
const GAUSS3_WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

/// Three-point Gauss–Legendre rule on `[a, b]`.
pub(crate) fn gauss3(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    GAUSS3_NODES
        .iter()
        .zip(GAUSS3_WEIGHTS)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// One-step discount factors `d_i` on the grid of `grid`.
pub(crate) fn step_discounts(basis: &Basis, grid: &ReserveGrid) -> Result<Vec<f64>> {
    (0..grid.len().saturating_sub(1))
        .map(|i| {
            let (a, b) = (grid.time(i), grid.time(i + 1));
            let rate = basis.rate.integrate(a, b)?;
            let mortality = gauss3(a, b, |t| basis.mortality.intensity(t));
            Ok((-(rate + mortality)).exp())
        })
        .collect()
}

fn gains(surrender: &ReserveGrid, baseline: &ReserveGrid) -> Vec<f64> {
    let last = surrender.len() - 1;
    (0..surrender.len())
        .map(|i| {
            if i == last {
                0.0
            } else {
                surrender.values[i] - baseline.values[i]
            }
        })
        .collect()
}

fn assemble(baseline: &ReserveGrid, envelope: Vec<f64>, latest: Vec<f64>) -> WorstCaseSolution {
    let with = |values: Vec<f64>| ReserveGrid {
        t0: baseline.t0,
        step: baseline.step,
        values,
    };
    let worst = baseline
        .values
        .iter()
        .zip(&envelope)
        .map(|(v, m)| v + m)
        .collect();
    WorstCaseSolution {
        worst_reserve: with(worst),
        latest_optimal: with(latest),
        gain_envelope: with(envelope),
    }
}

/// Snell-envelope recursion for `W` and `u*`.
///
/// `baseline` must be the no-surrender market reserve on the same grid as
/// `surrender`.
pub fn worst_case_reserve(
    market: &Basis,
    surrender: &ReserveGrid,
    baseline: &ReserveGrid,
) -> Result<WorstCaseSolution> {
    baseline.ensure_aligned(surrender, "worst case baseline")?;
    let discounts = step_discounts(market, baseline)?;
    let gain = gains(surrender, baseline);
    let n = baseline.len() - 1;

    let mut envelope = vec![0.0; n + 1];
    let mut latest = vec![0.0; n + 1];
    latest[n] = baseline.time(n);
    for i in (0..n).rev() {
        let now = gain[i];
        let later = discounts[i] * envelope[i + 1];
        let tol = TIE_TOLERANCE * now.abs().max(later.abs());
        if now > later + tol {
            envelope[i] = now;
            latest[i] = baseline.time(i);
        } else {
            envelope[i] = now.max(later);
            latest[i] = latest[i + 1];
        }
    }
    Ok(assemble(baseline, envelope, latest))
}

/// Exhaustive search over every grid candidate `u ≥ t`; `O(N²)`.
pub fn brute_force_worst_case(
    market: &Basis,
    surrender: &ReserveGrid,
    baseline: &ReserveGrid,
) -> Result<WorstCaseSolution> {
    baseline.ensure_aligned(surrender, "worst case baseline")?;
    let discounts = step_discounts(market, baseline)?;
    let gain = gains(surrender, baseline);
    let n = baseline.len() - 1;

    let (envelope, latest): (Vec<f64>, Vec<f64>) = (0..=n)
        .into_par_iter()
        .map(|i| {
            let mut best = f64::NEG_INFINITY;
            let mut best_at = n;
            let mut discount = 1.0;
            for j in i..=n {
                let candidate = discount * gain[j];
                let tol = TIE_TOLERANCE * candidate.abs().max(best.abs());
                if candidate >= best - tol {
                    best = best.max(candidate);
                    best_at = j;
                }
                if j < n {
                    discount *= discounts[j];
                }
            }
            (best, baseline.time(best_at))
        })
        .unzip();
    Ok(assemble(baseline, envelope, latest))
}
