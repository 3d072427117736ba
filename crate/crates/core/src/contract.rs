//! Contract, curve and behaviour data shared by every solver.
//!
//! Piecewise-constant curves are right-continuous: segment `i` covers
//! `[breakpoints[i], breakpoints[i + 1])` and the last segment extends past
//! the horizon. Solvers that integrate across a breakpoint ask for one-sided
//! limits through [`TimePoint`], so a step that ends on a breakpoint sees
//! the rate of the segment it actually lies in.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Times closer than this to a breakpoint are treated as lying on it.
pub const BREAKPOINT_TOLERANCE: f64 = 1e-9;

/// Upper bound on any evaluated surrender intensity (per year).
pub const INTENSITY_CAP: f64 = 1e6;

/// A time at which a right-hand side is evaluated, together with the side
/// from which it is approached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimePoint {
    pub t: f64,
    /// `true` for the left limit `f(t-)`.
    pub left: bool,
}

impl TimePoint {
    pub fn at(t: f64) -> Self {
        TimePoint { t, left: false }
    }

    pub fn left_of(t: f64) -> Self {
        TimePoint { t, left: true }
    }
}

impl From<f64> for TimePoint {
    fn from(t: f64) -> Self {
        TimePoint::at(t)
    }
}

/// A right-continuous step function of time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StepRepr", into = "StepRepr")]
pub struct PiecewiseConstant {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum StepRepr {
    Constant(f64),
    Steps {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
}

impl TryFrom<StepRepr> for PiecewiseConstant {
    type Error = Error;

    fn try_from(repr: StepRepr) -> Result<Self> {
        match repr {
            StepRepr::Constant(v) => PiecewiseConstant::constant(v),
            StepRepr::Steps {
                breakpoints,
                values,
            } => PiecewiseConstant::new(breakpoints, values),
        }
    }
}

impl From<PiecewiseConstant> for StepRepr {
    fn from(p: PiecewiseConstant) -> Self {
        if p.values.len() == 1 {
            StepRepr::Constant(p.values[0])
        } else {
            StepRepr::Steps {
                breakpoints: p.breakpoints,
                values: p.values,
            }
        }
    }
}

impl PiecewiseConstant {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(Error::domain(format!(
                "need one value per segment, got {} breakpoints and {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints[0] != 0.0 {
            return Err(Error::domain("first segment must start at t = 0"));
        }
        if breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("breakpoints must be strictly ascending"));
        }
        if let Some(v) = values.iter().chain(&breakpoints).find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("non-finite entry {v}")));
        }
        Ok(PiecewiseConstant {
            breakpoints,
            values,
        })
    }

    pub fn constant(value: f64) -> Result<Self> {
        PiecewiseConstant::new(vec![0.0], vec![value])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn segment(&self, at: TimePoint) -> usize {
        let count = if at.left {
            self.breakpoints
                .iter()
                .take_while(|&&b| b < at.t - BREAKPOINT_TOLERANCE)
                .count()
        } else {
            self.breakpoints
                .iter()
                .take_while(|&&b| b <= at.t + BREAKPOINT_TOLERANCE)
                .count()
        };
        count.max(1) - 1
    }

    pub fn value(&self, at: impl Into<TimePoint>) -> f64 {
        self.values[self.segment(at.into())]
    }

    /// Exact integral over `[a, b]` as a sum of segment length times value.
    pub fn integrate(&self, a: f64, b: f64) -> f64 {
        let mut total = 0.0;
        for (i, &v) in self.values.iter().enumerate() {
            let lo = self.breakpoints[i].max(a);
            let hi = self
                .breakpoints
                .get(i + 1)
                .copied()
                .unwrap_or(f64::INFINITY)
                .min(b);
            if hi > lo {
                total += (hi - lo) * v;
            }
        }
        total
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Deterministic, piecewise-constant interest intensity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RateRepr", into = "RateRepr")]
pub struct RateCurve(PiecewiseConstant);

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RateRepr {
    Flat(f64),
    Segments {
        breakpoints: Vec<f64>,
        rates: Vec<f64>,
    },
}

impl TryFrom<RateRepr> for RateCurve {
    type Error = Error;

    fn try_from(repr: RateRepr) -> Result<Self> {
        match repr {
            RateRepr::Flat(r) => RateCurve::flat(r),
            RateRepr::Segments { breakpoints, rates } => RateCurve::new(breakpoints, rates),
        }
    }
}

impl From<RateCurve> for RateRepr {
    fn from(c: RateCurve) -> Self {
        let PiecewiseConstant {
            breakpoints,
            values,
        } = c.0;
        if values.len() == 1 {
            RateRepr::Flat(values[0])
        } else {
            RateRepr::Segments {
                breakpoints,
                rates: values,
            }
        }
    }
}

impl RateCurve {
    pub fn new(breakpoints: Vec<f64>, rates: Vec<f64>) -> Result<Self> {
        PiecewiseConstant::new(breakpoints, rates).map(RateCurve)
    }

    pub fn flat(rate: f64) -> Result<Self> {
        PiecewiseConstant::constant(rate).map(RateCurve)
    }

    pub fn breakpoints(&self) -> &[f64] {
        self.0.breakpoints()
    }

    pub fn rates(&self) -> &[f64] {
        self.0.values()
    }

    pub fn rate(&self, at: impl Into<TimePoint>) -> f64 {
        self.0.value(at)
    }

    /// `∫_a^b r(x) dx`, exact.
    pub fn integrate(&self, a: f64, b: f64) -> Result<f64> {
        if !a.is_finite() || !b.is_finite() || a < 0.0 {
            return Err(Error::domain(format!("interval [{a}, {b}] outside [0, ∞)")));
        }
        if b < a {
            return Err(Error::domain(format!("reversed interval [{a}, {b}]")));
        }
        Ok(self.0.integrate(a, b))
    }
}

/// `∫_a^b r(x) dx` for a piecewise-constant rate curve, with no quadrature error.
pub fn integrate_rate(curve: &RateCurve, a: f64, b: f64) -> Result<f64> {
    curve.integrate(a, b)
}

/// Makeham-form death intensity `base + 10^(log_scale + log_slope·(t + age_offset))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MortalityCurve {
    pub base: f64,
    pub log_scale: f64,
    pub log_slope: f64,
    pub age_offset: f64,
}

impl MortalityCurve {
    pub fn intensity(&self, t: f64) -> f64 {
        self.base + 10f64.powf(self.log_scale + self.log_slope * (t + self.age_offset))
    }

    /// Checks `μ ≥ 0` on `[0, horizon]`; the exponential term is monotone,
    /// so the endpoints decide.
    pub fn validate_on(&self, horizon: f64) -> Result<()> {
        let fields = [self.base, self.log_scale, self.log_slope, self.age_offset];
        if fields.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("mortality parameters must be finite"));
        }
        let lo = self.intensity(0.0).min(self.intensity(horizon));
        if !(lo >= 0.0) {
            return Err(Error::domain(format!("negative death intensity {lo}")));
        }
        Ok(())
    }
}

/// Danish G82 female death intensity for a policyholder aged 35 at time 0.
pub fn g82_female() -> MortalityCurve {
    MortalityCurve {
        base: 0.0005,
        log_scale: 5.728 - 10.0,
        log_slope: 0.038,
        age_offset: 35.0,
    }
}

/// An interest and mortality basis, market or technical.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    pub rate: RateCurve,
    pub mortality: MortalityCurve,
}

impl Basis {
    pub fn new(rate: RateCurve, mortality: MortalityCurve) -> Self {
        Basis { rate, mortality }
    }
}

/// Surrender intensity as a function of the policyholder's gain `G − V`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum IntensityModel {
    Zero,
    Constant { level: f64 },
    Exponential { psi: f64, theta: f64 },
    Indicator { theta: f64 },
}

impl IntensityModel {
    /// Intensity at time `t` given the gain from surrendering.
    ///
    /// The exponential family is capped at [`INTENSITY_CAP`]. The indicator
    /// switches on for strictly positive gain only.
    pub fn evaluate(&self, _t: f64, gain: f64) -> f64 {
        match *self {
            IntensityModel::Zero => 0.0,
            IntensityModel::Constant { level } => level,
            IntensityModel::Exponential { psi, theta } => {
                (psi * (theta * gain).exp()).min(INTENSITY_CAP)
            }
            IntensityModel::Indicator { theta } => {
                if gain > 0.0 {
                    theta
                } else {
                    0.0
                }
            }
        }
    }

    /// Whether the intensity depends on the gain at all.
    pub fn is_reserve_dependent(&self) -> bool {
        matches!(
            self,
            IntensityModel::Exponential { .. } | IntensityModel::Indicator { .. }
        )
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            IntensityModel::Zero => true,
            IntensityModel::Constant { level } => level.is_finite() && level >= 0.0,
            IntensityModel::Exponential { psi, theta } => {
                psi.is_finite() && psi >= 0.0 && theta.is_finite() && theta >= 0.0
            }
            IntensityModel::Indicator { theta } => theta.is_finite() && theta >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "invalid intensity parameters {self:?}"
            )))
        }
    }
}

/// Payments of a single contract on `[0, horizon]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaymentPlan {
    pub premium_intensity: PiecewiseConstant,
    pub death_benefit: PiecewiseConstant,
    pub terminal_benefit: f64,
    pub horizon: f64,
}

impl PaymentPlan {
    pub fn new(
        premium_intensity: PiecewiseConstant,
        death_benefit: PiecewiseConstant,
        terminal_benefit: f64,
        horizon: f64,
    ) -> Result<Self> {
        let plan = PaymentPlan {
            premium_intensity,
            death_benefit,
            terminal_benefit,
            horizon,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn constant(
        premium: f64,
        death_benefit: f64,
        terminal_benefit: f64,
        horizon: f64,
    ) -> Result<Self> {
        PaymentPlan::new(
            PiecewiseConstant::constant(premium)?,
            PiecewiseConstant::constant(death_benefit)?,
            terminal_benefit,
            horizon,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(Error::domain(format!(
                "horizon must be positive, got {}",
                self.horizon
            )));
        }
        if !self.terminal_benefit.is_finite() {
            return Err(Error::domain("terminal benefit must be finite"));
        }
        Ok(())
    }

    /// The same plan with premiums switched off, as after conversion to a free policy.
    pub fn without_premium(&self) -> PaymentPlan {
        PaymentPlan {
            premium_intensity: PiecewiseConstant::constant(0.0).expect("zero is a valid constant"),
            ..self.clone()
        }
    }

    pub fn premium(&self, at: impl Into<TimePoint>) -> f64 {
        self.premium_intensity.value(at)
    }

    pub fn death(&self, at: impl Into<TimePoint>) -> f64 {
        self.death_benefit.value(at)
    }
}

/// A reserve (or any function of time) sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ReserveGrid {
    pub t0: f64,
    pub step: f64,
    pub values: Vec<f64>,
}

impl ReserveGrid {
    pub fn new(t0: f64, step: f64, values: Vec<f64>) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::domain(format!(
                "grid step must be positive, got {step}"
            )));
        }
        if values.is_empty() {
            return Err(Error::domain("grid needs at least one node"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::numerical(
                t0 + i as f64 * step,
                "non-finite grid value",
            ));
        }
        Ok(ReserveGrid { t0, step, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Node time, snapped to nine decimals when that moves it by a
    /// negligible fraction of the step (`36000 · (1/1200)` is exactly 30).
    pub fn time(&self, i: usize) -> f64 {
        let raw = self.t0 + i as f64 * self.step;
        let snapped = (raw * 1e9).round() / 1e9;
        if (snapped - raw).abs() <= 1e-6 * self.step {
            snapped
        } else {
            raw
        }
    }

    pub fn end(&self) -> f64 {
        self.time(self.values.len() - 1)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |i| self.time(i))
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Linear interpolation between nodes, clamped to the grid ends.
    pub fn interpolate(&self, t: f64) -> f64 {
        let x = (t - self.t0) / self.step;
        if x <= 0.0 {
            return self.values[0];
        }
        let i = x.floor() as usize;
        if i + 1 >= self.values.len() {
            return self.last();
        }
        let w = x - i as f64;
        if w == 0.0 {
            self.values[i]
        } else {
            self.values[i] + w * (self.values[i + 1] - self.values[i])
        }
    }

    /// Index of the node at time `t`, if `t` is a node within tolerance.
    pub fn node_index(&self, t: f64) -> Option<usize> {
        let x = (t - self.t0) / self.step;
        let i = x.round();
        if (x - i).abs() < 1e-6 && i >= 0.0 && (i as usize) < self.values.len() {
            Some(i as usize)
        } else {
            None
        }
    }

    pub fn is_aligned_with(&self, other: &ReserveGrid) -> bool {
        self.values.len() == other.values.len()
            && (self.t0 - other.t0).abs() <= BREAKPOINT_TOLERANCE
            && (self.step - other.step).abs() <= 1e-15 * self.step.max(other.step)
    }

    pub fn ensure_aligned(&self, other: &ReserveGrid, what: &str) -> Result<()> {
        if self.is_aligned_with(other) {
            Ok(())
        } else {
            Err(Error::config(format!(
                "{what}: grid [{}, {}] step {} ({} nodes) does not match [{}, {}] step {} ({} nodes)",
                self.t0,
                self.end(),
                self.step,
                self.len(),
                other.t0,
                other.end(),
                other.step,
                other.len()
            )))
        }
    }

    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> ReserveGrid {
        ReserveGrid {
            t0: self.t0,
            step: self.step,
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(i, &v)| f(self.time(i), v))
                .collect(),
        }
    }
}

/// Number of steps of size `step` in `[start, end]`, if it is an integer
/// within tolerance.
pub fn step_count(start: f64, end: f64, step: f64) -> Result<usize> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::config(format!("step must be positive, got {step}")));
    }
    if !(end >= start) {
        return Err(Error::config(format!(
            "interval [{start}, {end}] is reversed"
        )));
    }
    let x = (end - start) / step;
    let n = x.round();
    if (x - n).abs() > 1e-9 * n.max(1.0) {
        return Err(Error::config(format!(
            "[{start}, {end}] is not a whole number of steps of {step} ({x} steps)"
        )));
    }
    Ok(n as usize)
}

/// Time-dependent scaling of payments after conversion to a free policy.
#[derive(Clone)]
pub struct Scaling(Arc<dyn Fn(f64) -> f64 + Send + Sync>);

impl Scaling {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Scaling(Arc::new(f))
    }

    pub fn constant(c: f64) -> Self {
        Scaling::new(move |_| c)
    }

    pub fn at(&self, u: f64) -> f64 {
        (self.0)(u)
    }
}

impl fmt::Debug for Scaling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Scaling(..)")
    }
}

/// A contract that may convert into a free (paid-up) policy.
#[derive(Debug, Clone)]
pub struct FreePolicyPlan {
    pub base_plan: PaymentPlan,
    pub scaling: Scaling,
    pub intensity_as: IntensityModel,
    pub intensity_af: IntensityModel,
    pub intensity_fs: IntensityModel,
}

impl FreePolicyPlan {
    /// Checks `f(u) ∈ (0, 1]` on the nodes of a grid over `[0, horizon]`.
    pub fn validate(&self, step: f64) -> Result<()> {
        self.base_plan.validate()?;
        for m in [self.intensity_as, self.intensity_af, self.intensity_fs] {
            m.validate()?;
        }
        let n = step_count(0.0, self.base_plan.horizon, step)?;
        for i in 0..=n {
            let u = if i == n {
                self.base_plan.horizon
            } else {
                i as f64 * step
            };
            let f = self.scaling.at(u);
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::domain(format!(
                    "scaling f({u}) = {f} outside (0, 1]"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example3() -> RateCurve {
        RateCurve::new(vec![0.0, 20.0], vec![0.10, 0.04]).unwrap()
    }

    #[test]
    fn g82_matches_closed_form() {
        let mu = g82_female();
        let at0 = 0.0005 + 10f64.powf(-4.272 + 0.038 * 35.0);
        let at30 = 0.0005 + 10f64.powf(-4.272 + 0.038 * 65.0);
        assert!((mu.intensity(0.0) - at0).abs() <= 1e-18);
        assert!((mu.intensity(0.0) - (0.0005 + 10f64.powf(-2.942))).abs() < 1e-15);
        assert!((mu.intensity(30.0) - at30).abs() <= 1e-17);
        let samples: Vec<f64> = (0..=300).map(|i| mu.intensity(i as f64 * 0.1)).collect();
        assert!(samples.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rate_integrals() {
        let flat = RateCurve::flat(0.05).unwrap();
        assert!((integrate_rate(&flat, 0.0, 10.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((integrate_rate(&example3(), 15.0, 25.0).unwrap() - 0.7).abs() < 1e-14);
        assert_eq!(integrate_rate(&flat, 7.0, 7.0).unwrap(), 0.0);
        assert!(matches!(
            integrate_rate(&flat, 3.0, 2.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            integrate_rate(&flat, -1.0, 2.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            integrate_rate(&flat, 0.0, f64::NAN),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn one_sided_limits_at_breakpoints() {
        let r = example3();
        assert_eq!(r.rate(10.0), 0.10);
        assert_eq!(r.rate(20.0), 0.04);
        assert_eq!(r.rate(TimePoint::left_of(20.0)), 0.10);
        // node times computed as i·step land a hair off the breakpoint
        let t = 24_000.0 * (1.0 / 1200.0);
        assert_eq!(r.rate(TimePoint::left_of(t)), 0.10);
        assert_eq!(r.rate(TimePoint::at(t)), 0.04);
        assert_eq!(r.rate(TimePoint::left_of(0.0)), 0.10);
    }

    #[test]
    fn curve_construction_errors() {
        assert!(RateCurve::new(vec![1.0], vec![0.1]).is_err());
        assert!(RateCurve::new(vec![0.0, 5.0, 5.0], vec![0.1, 0.2, 0.3]).is_err());
        assert!(RateCurve::new(vec![0.0, 5.0], vec![0.1]).is_err());
        assert!(RateCurve::new(vec![0.0], vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn intensity_families() {
        let t = 3.0;
        assert_eq!(IntensityModel::Zero.evaluate(t, 1e6), 0.0);
        assert_eq!(
            IntensityModel::Constant { level: 0.05 }.evaluate(t, -4.0),
            0.05
        );
        let exp = IntensityModel::Exponential {
            psi: 0.05,
            theta: 3e-6,
        };
        assert!((exp.evaluate(t, 1e5) - 0.05 * 0.3f64.exp()).abs() < 1e-15);
        assert_eq!(exp.evaluate(t, 1e12), INTENSITY_CAP);
        let ind = IntensityModel::Indicator { theta: 5.0 };
        assert_eq!(ind.evaluate(t, 0.0), 0.0);
        assert_eq!(ind.evaluate(t, 1e-9), 5.0);
        assert_eq!(ind.evaluate(t, -1.0), 0.0);
    }

    #[test]
    fn intensity_serde_shape() {
        let m: IntensityModel =
            serde_json::from_str(r#"{"family":"exponential","psi":0.05,"theta":3e-6}"#).unwrap();
        assert_eq!(
            m,
            IntensityModel::Exponential {
                psi: 0.05,
                theta: 3e-6
            }
        );
        let z: IntensityModel = serde_json::from_str(r#"{"family":"zero"}"#).unwrap();
        assert_eq!(z, IntensityModel::Zero);
    }

    #[test]
    fn grid_helpers() {
        let g = ReserveGrid::new(0.0, 0.5, vec![0.0, 1.0, 4.0]).unwrap();
        assert_eq!(g.end(), 1.0);
        assert_eq!(g.interpolate(0.25), 0.5);
        assert_eq!(g.interpolate(0.75), 2.5);
        assert_eq!(g.interpolate(2.0), 4.0);
        assert_eq!(g.node_index(0.5), Some(1));
        assert_eq!(g.node_index(0.3), None);
        assert!(ReserveGrid::new(0.0, 0.0, vec![1.0]).is_err());
        assert!(ReserveGrid::new(0.0, 1.0, vec![f64::NAN]).is_err());
        assert_eq!(step_count(0.0, 30.0, 1.0 / 1200.0).unwrap(), 36_000);
        assert!(step_count(0.0, 1.0, 0.3).is_err());
        let fine = ReserveGrid::new(0.0, 1.0 / 1200.0, vec![0.0; 36_001]).unwrap();
        assert_eq!(fine.end(), 30.0);
        assert_eq!(fine.time(24_000), 20.0);
        let tiny = ReserveGrid::new(0.0, 1e-12, vec![0.0; 4]).unwrap();
        assert_eq!(tiny.time(3), 3e-12);
    }

    #[test]
    fn plan_validation() {
        assert!(PaymentPlan::constant(7000.0, 1e6, 2e6, 0.0).is_err());
        assert!(PaymentPlan::constant(7000.0, 1e6, 2e6, 30.0).is_ok());
        let fp = FreePolicyPlan {
            base_plan: PaymentPlan::constant(7000.0, 1e6, 2e6, 1.0).unwrap(),
            scaling: Scaling::new(|u| 1.0 - u),
            intensity_as: IntensityModel::Zero,
            intensity_af: IntensityModel::Zero,
            intensity_fs: IntensityModel::Zero,
        };
        // f(1) = 0 leaves (0, 1]
        assert!(fp.validate(0.25).is_err());
    }
}
