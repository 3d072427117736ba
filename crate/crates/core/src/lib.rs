//! Valuation of life-insurance contracts with reserve-dependent surrender
//! and free-policy behaviour.
//!
//! All reserves are solved backward on one uniform grid with classical RK4
//! ([`ode`]). The linear Thiele equations give the surrender value `G` and
//! the market reserves `V`, `V_ν` ([`linear`]); a gain-dependent surrender
//! intensity turns the equation nonlinear ([`behaviour`]). The worst case
//! over all surrender strategies is a Snell envelope on the same grid
//! ([`worst_case`]), and [`convergence`] measures how behavioural reserves
//! approach it as policyholders grow more rational. [`monte_carlo`]
//! revalues any strategy by path simulation, and [`scenario`] drives the
//! whole pipeline from JSON scenario files.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod behaviour;
pub mod contract;
pub mod convergence;
pub mod error;
pub mod free_policy;
pub mod linear;
pub mod monte_carlo;
pub mod ode;
pub mod scenario;
pub mod worst_case;

pub use behaviour::{consistency_check, solve_reserve_dependent, BehaviouralSolution};
pub use contract::{
    g82_female, integrate_rate, Basis, FreePolicyPlan, IntensityModel, MortalityCurve, PaymentPlan,
    PiecewiseConstant, RateCurve, ReserveGrid, Scaling, TimePoint,
};
pub use error::{Error, Result};
pub use linear::{reserve_no_surrender, reserve_with_intensity, surrender_value};
pub use ode::{solve_backward, solve_backward_pair, BackwardProblem, PairProblem, DEFAULT_STEP};
pub use worst_case::{brute_force_worst_case, worst_case_reserve, WorstCaseSolution};
