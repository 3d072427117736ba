mod common;

use common::{inner, setup, B_A};
use surrender_core::{
    consistency_check, reserve_with_intensity, solve_reserve_dependent, surrender_value,
    worst_case_reserve, IntensityModel, DEFAULT_STEP,
};

/// Backward explicit Euler for the technical reserve, written out from the
/// closed-form mortality, Richardson-extrapolated over `h` and `h/2`.
fn euler_oracle(h: f64) -> f64 {
    let run = |h: f64| {
        let n = (30.0 / h).round() as usize;
        let mut g = 2_000_000.0;
        for i in (1..=n).rev() {
            let t = i as f64 * h;
            let mu = 0.0005 + 10f64.powf(5.728 - 10.0 + 0.038 * (t + 35.0));
            let dg = 0.05 * g + 7_000.0 - mu * (1_000_000.0 - g);
            g -= h * dg;
        }
        g
    };
    2.0 * run(h / 2.0) - run(h)
}

#[test]
fn surrender_value_matches_euler_oracle() {
    let s = setup(1, DEFAULT_STEP);
    let oracle = euler_oracle(1e-5);
    let rel = ((s.g.first() - oracle) / oracle).abs();
    assert!(
        rel < 1e-6,
        "G(0) = {}, oracle {oracle}, rel {rel:e}",
        s.g.first()
    );
    assert_eq!(s.g.last(), 2_000_000.0);
}

#[test]
fn reserves_self_converge_under_step_halving() {
    let coarse = setup(3, 1.0 / 120.0);
    let fine = setup(3, 1.0 / 240.0);
    for (a, b) in [(&coarse.g, &fine.g), (&coarse.v, &fine.v)] {
        for i in 0..a.len() {
            let j = fine.g.node_index(a.time(i)).unwrap();
            assert!(((a.values[i] - b.values[j]) / b.values[j]).abs() < 1e-9);
        }
    }
}

#[test]
fn market_reserve_orderings() {
    let ex1 = setup(1, DEFAULT_STEP);
    assert!(inner(&ex1.v).all(|i| ex1.v.values[i] < ex1.g.values[i]));
    let ex2 = setup(2, DEFAULT_STEP);
    assert!(inner(&ex2.v).all(|i| ex2.v.values[i] > ex2.g.values[i]));
}

#[test]
fn constant_surrender_sits_between_g_and_v() {
    for k in [1, 2] {
        let s = setup(k, DEFAULT_STEP);
        let vc = reserve_with_intensity(&s.plan, &s.market, &s.g, |_| 0.05, s.step).unwrap();
        for i in inner(&vc) {
            let (lo, hi) = (
                s.g.values[i].min(s.v.values[i]),
                s.g.values[i].max(s.v.values[i]),
            );
            assert!(
                lo <= vc.values[i] && vc.values[i] <= hi,
                "example {k}, node {i}"
            );
        }
        assert_eq!(vc.last(), B_A);
    }
}

#[test]
fn raising_constant_intensity_moves_toward_g() {
    let ex1 = setup(1, DEFAULT_STEP);
    let lo = reserve_with_intensity(&ex1.plan, &ex1.market, &ex1.g, |_| 0.02, ex1.step).unwrap();
    let hi = reserve_with_intensity(&ex1.plan, &ex1.market, &ex1.g, |_| 0.05, ex1.step).unwrap();
    assert!(inner(&lo).all(|i| hi.values[i] > lo.values[i]));
    let ex2 = setup(2, DEFAULT_STEP);
    let lo = reserve_with_intensity(&ex2.plan, &ex2.market, &ex2.g, |_| 0.02, ex2.step).unwrap();
    let hi = reserve_with_intensity(&ex2.plan, &ex2.market, &ex2.g, |_| 0.05, ex2.step).unwrap();
    assert!(inner(&lo).all(|i| hi.values[i] < lo.values[i]));
}

#[test]
fn exponential_model_a_exceeds_constant_on_example1() {
    let s = setup(1, DEFAULT_STEP);
    let a = IntensityModel::Exponential {
        psi: 0.05,
        theta: 3e-6,
    };
    let ua = solve_reserve_dependent(&s.plan, &s.market, &s.g, a, s.step).unwrap();
    let uc = solve_reserve_dependent(
        &s.plan,
        &s.market,
        &s.g,
        IntensityModel::Constant { level: 0.05 },
        s.step,
    )
    .unwrap();
    assert!(inner(&ua.reserve).all(|i| ua.reserve.values[i] >= uc.reserve.values[i]));
}

#[test]
fn rationality_moves_reserve_monotonically() {
    let ex2 = setup(2, DEFAULT_STEP);
    let mut prev = None;
    for theta in [1e-6, 3e-6, 1e-5] {
        let model = IntensityModel::Exponential { psi: 0.05, theta };
        let u = solve_reserve_dependent(&ex2.plan, &ex2.market, &ex2.g, model, ex2.step)
            .unwrap()
            .reserve;
        if let Some(p) = &prev {
            let p: &surrender_core::ReserveGrid = p;
            assert!(inner(&u).all(|i| u.values[i] >= p.values[i] && u.values[i] <= ex2.v.values[i]));
        }
        prev = Some(u);
    }
    let ex1 = setup(1, DEFAULT_STEP);
    let mut prev: Option<surrender_core::ReserveGrid> = None;
    for theta in [0.05, 0.5, 5.0] {
        let model = IntensityModel::Indicator { theta };
        let u = solve_reserve_dependent(&ex1.plan, &ex1.market, &ex1.g, model, ex1.step)
            .unwrap()
            .reserve;
        if let Some(p) = &prev {
            assert!(inner(&u).all(|i| u.values[i] >= p.values[i] && u.values[i] <= ex1.g.values[i]));
        }
        prev = Some(u);
    }
}

#[test]
fn behavioural_reserves_are_bounded_by_envelope_and_worst_case() {
    let models = [
        IntensityModel::Exponential {
            psi: 0.05,
            theta: 3e-6,
        },
        IntensityModel::Indicator { theta: 0.05 },
        IntensityModel::Constant { level: 0.05 },
        IntensityModel::Zero,
        IntensityModel::Indicator { theta: 5.0 },
    ];
    for k in 1..=4 {
        let s = setup(k, DEFAULT_STEP);
        let w = worst_case_reserve(&s.market, &s.g, &s.v)
            .unwrap()
            .worst_reserve;
        // Pointwise only when the gain keeps its sign; otherwise the floor
        // is the smallest envelope value on the grid.
        let one_signed = k <= 2;
        let floor = (0..s.g.len())
            .map(|i| s.g.values[i].min(s.v.values[i]))
            .fold(f64::INFINITY, f64::min);
        for model in models {
            let sol = solve_reserve_dependent(&s.plan, &s.market, &s.g, model, s.step).unwrap();
            assert!(sol.realized_intensity.values.iter().all(|&x| x >= 0.0));
            assert_eq!(sol.reserve.last(), B_A);
            for i in 0..sol.reserve.len() {
                let u = sol.reserve.values[i];
                let lo = if one_signed {
                    s.g.values[i].min(s.v.values[i])
                } else {
                    floor
                };
                assert!(
                    u >= lo - 1e-6 * B_A,
                    "example {k} {model:?} node {i} below envelope"
                );
                assert!(
                    u <= w.values[i] + 1e-6 * B_A,
                    "example {k} {model:?} node {i} above W"
                );
            }
        }
    }
}

#[test]
fn consistency_tolerances_per_family() {
    let s = setup(2, DEFAULT_STEP);
    let a = IntensityModel::Exponential {
        psi: 0.05,
        theta: 3e-6,
    };
    let sol = solve_reserve_dependent(&s.plan, &s.market, &s.g, a, s.step).unwrap();
    assert!(consistency_check(&sol, &s.plan, &s.market, &s.g, s.step).unwrap() < 1e-6 * B_A);

    let s = setup(3, DEFAULT_STEP);
    let e = IntensityModel::Indicator { theta: 5.0 };
    let sol = solve_reserve_dependent(&s.plan, &s.market, &s.g, e, s.step).unwrap();
    assert!(consistency_check(&sol, &s.plan, &s.market, &s.g, s.step).unwrap() < 1e-4 * B_A);
}

#[test]
fn identical_bases_give_identical_reserves() {
    let s = setup(1, DEFAULT_STEP);
    let v = surrender_core::reserve_no_surrender(&s.plan, &s.technical, s.step).unwrap();
    let g = surrender_value(&s.plan, &s.technical, s.step).unwrap();
    assert!(inner(&g).all(|i| (g.values[i] - v.values[i]).abs() <= 1e-12 * B_A));
}
