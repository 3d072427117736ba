#![allow(dead_code)]

use surrender_core::scenario::builtin;
use surrender_core::{reserve_no_surrender, surrender_value, Basis, PaymentPlan, ReserveGrid};

pub const B_A: f64 = 2_000_000.0;

pub struct Setup {
    pub plan: PaymentPlan,
    pub technical: Basis,
    pub market: Basis,
    pub step: f64,
    pub g: ReserveGrid,
    pub v: ReserveGrid,
}

pub fn setup(k: usize, step: f64) -> Setup {
    let spec = builtin(&format!("example{k}")).unwrap();
    let technical = spec.technical_basis();
    let market = spec.market_basis();
    let g = surrender_value(&spec.plan, &technical, step).unwrap();
    let v = reserve_no_surrender(&spec.plan, &market, step).unwrap();
    Setup {
        plan: spec.plan,
        technical,
        market,
        step,
        g,
        v,
    }
}

/// Nodes before the horizon.
pub fn inner(grid: &ReserveGrid) -> std::ops::Range<usize> {
    0..grid.len() - 1
}
