//! Monte Carlo valuation of a single contract under a given surrender strategy.
//!
//! Death and surrender times are sampled exactly by thinning: on each
//! interval of length `time_step` candidate events arrive at a constant
//! majorant rate and are accepted with probability `(μ + ν)/λ̄`. Payments
//! are discounted with the exact piecewise-constant rate integral.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use crate::contract::{Basis, PaymentPlan, ReserveGrid, TimePoint};
use crate::error::{Error, Result};
use crate::linear::ensure_plan_grid;
use crate::worst_case::gauss3;

const BATCH: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub paths: u64,
    pub seed: u64,
    /// Length of the thinning intervals (years).
    pub time_step: f64,
}

impl SimulationConfig {
    pub fn new(paths: u64, seed: u64) -> Self {
        SimulationConfig {
            paths,
            seed,
            time_step: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.paths == 0 {
            return Err(Error::config("at least one path is required"));
        }
        if !(self.time_step > 0.0) || !self.time_step.is_finite() {
            return Err(Error::config(format!(
                "time step must be positive, got {}",
                self.time_step
            )));
        }
        Ok(())
    }
}

/// How the simulated policyholder surrenders.
#[derive(Debug, Clone, Copy)]
pub enum Strategy<'a> {
    /// Surrender with the deterministic intensity held on the grid,
    /// linearly interpolated between nodes.
    Intensity(&'a ReserveGrid),
    /// Surrender at the given time if still alive; stopping at the horizon
    /// means never surrendering.
    StopAt(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub estimate: f64,
    pub standard_error: f64,
    pub paths: u64,
}

impl Estimate {
    /// `(estimate − value) / standard_error`; zero when both agree exactly.
    pub fn z_score(&self, value: f64) -> f64 {
        let diff = self.estimate - value;
        if diff == 0.0 {
            0.0
        } else {
            diff / self.standard_error
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let (na, nb) = (self.n as f64, other.n as f64);
        Moments {
            n,
            mean: if delta == 0.0 {
                self.mean
            } else {
                self.mean + delta * nb / n as f64
            },
            m2: self.m2 + other.m2 + delta * delta * na * nb / n as f64,
        }
    }
}

struct Interval {
    start: f64,
    end: f64,
    majorant: f64,
}

struct Valuation<'a> {
    plan: &'a PaymentPlan,
    market: &'a Basis,
    surrender: &'a ReserveGrid,
    nu: Option<&'a ReserveGrid>,
    stop: f64,
    /// `∫_0^{t_i} π(s) e^{-R(s)} ds` at the grid nodes.
    premium_pv: Vec<f64>,
    intervals: Vec<Interval>,
}

impl<'a> Valuation<'a> {
    fn discount(&self, t: f64) -> f64 {
        (-self.market.rate.integrate(0.0, t).unwrap_or(f64::INFINITY)).exp()
    }

    fn premiums_until(&self, t: f64) -> f64 {
        let grid = self.surrender;
        let i = (((t - grid.t0) / grid.step).floor().max(0.0) as usize).min(grid.len() - 1);
        let a = grid.time(i);
        if t <= a {
            return self.premium_pv[i];
        }
        let base = self.market.rate.integrate(0.0, a).unwrap_or(0.0);
        let plan = self.plan;
        let market = self.market;
        self.premium_pv[i]
            + gauss3(a, t, |s| {
                let at = TimePoint::left_of(s);
                plan.premium(at) * (-(base + market.rate.integrate(a, s).unwrap_or(0.0))).exp()
            })
    }

    fn hazards(&self, t: f64) -> (f64, f64) {
        let mu = self.market.mortality.intensity(t);
        let nu = self.nu.map_or(0.0, |g| g.interpolate(t));
        (mu, nu)
    }

    fn path(&self, rng: &mut ChaCha8Rng) -> f64 {
        for iv in &self.intervals {
            if iv.majorant <= 0.0 {
                continue;
            }
            let mut t = iv.start;
            loop {
                let wait: f64 = rng.sample(Exp1);
                t += wait / iv.majorant;
                if t >= iv.end {
                    break;
                }
                let (mu, nu) = self.hazards(t);
                let accept: f64 = rng.random();
                if accept * iv.majorant < mu + nu {
                    let which: f64 = rng.random();
                    let payment = if which * (mu + nu) < mu {
                        self.plan.death(t)
                    } else {
                        self.surrender.interpolate(t)
                    };
                    return payment * self.discount(t) - self.premiums_until(t);
                }
            }
        }
        let end = self.stop;
        let payment = if end < self.plan.horizon {
            self.surrender.interpolate(end)
        } else {
            self.plan.terminal_benefit
        };
        payment * self.discount(end) - self.premiums_until(end)
    }
}

/// Estimates the reserve at time 0 of the contract under `strategy`,
/// paying the surrender value on surrender.
pub fn simulate_reserve(
    plan: &PaymentPlan,
    market: &Basis,
    surrender: &ReserveGrid,
    strategy: Strategy<'_>,
    config: &SimulationConfig,
) -> Result<Estimate> {
    config.validate()?;
    plan.validate()?;
    let step = surrender.step;
    ensure_plan_grid(surrender, plan, step, "surrender value")?;

    let (nu, stop) = match strategy {
        Strategy::Intensity(nu) => {
            nu.ensure_aligned(surrender, "surrender intensity")?;
            if let Some(i) = nu.values.iter().position(|v| *v < 0.0) {
                return Err(Error::domain(format!(
                    "negative surrender intensity at t = {}",
                    nu.time(i)
                )));
            }
            (Some(nu), plan.horizon)
        }
        Strategy::StopAt(u) => {
            if !(0.0..=plan.horizon).contains(&u) {
                return Err(Error::domain(format!(
                    "stopping time {u} outside [0, {}]",
                    plan.horizon
                )));
            }
            (None, u)
        }
    };

    let mut premium_pv = vec![0.0; surrender.len()];
    for i in 1..surrender.len() {
        let (a, b) = (surrender.time(i - 1), surrender.time(i));
        let base = market.rate.integrate(0.0, a)?;
        premium_pv[i] = premium_pv[i - 1]
            + gauss3(a, b, |s| {
                plan.premium(TimePoint::left_of(s))
                    * (-(base + market.rate.integrate(a, s).unwrap_or(0.0))).exp()
            });
    }

    let mut intervals = Vec::new();
    let mut start = 0.0;
    while start < stop {
        let end = (start + config.time_step).min(stop);
        let mut majorant: f64 = 0.0;
        let mut probe = |t: f64| {
            let mu = market.mortality.intensity(t);
            let nu = nu.map_or(0.0, |g| g.interpolate(t));
            majorant = majorant.max(mu + nu);
        };
        probe(start);
        probe(end);
        let first = ((start - surrender.t0) / step).ceil().max(0.0) as usize;
        for i in first..surrender.len() {
            let t = surrender.time(i);
            if t > end {
                break;
            }
            probe(t);
        }
        intervals.push(Interval {
            start,
            end,
            majorant: majorant * (1.0 + 1e-12),
        });
        start = end;
    }

    let valuation = Valuation {
        plan,
        market,
        surrender,
        nu,
        stop,
        premium_pv,
        intervals,
    };

    let batches = config.paths.div_ceil(BATCH);
    let moments = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(b);
            let count = BATCH.min(config.paths - b * BATCH);
            let mut m = Moments::default();
            for _ in 0..count {
                m.push(valuation.path(&mut rng));
            }
            m
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Moments::default(), Moments::merge);

    let variance = if moments.n > 1 {
        (moments.m2 / (moments.n - 1) as f64).max(0.0)
    } else {
        0.0
    };
    Ok(Estimate {
        estimate: moments.mean,
        standard_error: (variance / moments.n as f64).sqrt(),
        paths: moments.n,
    })
}
