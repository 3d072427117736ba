mod common;

use common::{inner, setup, B_A};
use surrender_core::{worst_case_reserve, DEFAULT_STEP};

#[test]
fn example1_surrenders_immediately() {
    let s = setup(1, DEFAULT_STEP);
    let wc = worst_case_reserve(&s.market, &s.g, &s.v).unwrap();
    for i in inner(&s.g) {
        assert!(((wc.worst_reserve.values[i] - s.g.values[i]) / s.g.values[i]).abs() < 1e-6);
        assert_eq!(wc.latest_optimal.values[i], s.g.time(i));
    }
}

#[test]
fn example2_never_surrenders() {
    let s = setup(2, DEFAULT_STEP);
    let wc = worst_case_reserve(&s.market, &s.g, &s.v).unwrap();
    assert_eq!(wc.worst_reserve.values, s.v.values);
    assert!(wc.latest_optimal.values.iter().all(|&u| u == 30.0));
}

#[test]
fn example4_plans_surrender_at_20() {
    let s = setup(4, DEFAULT_STEP);
    let wc = worst_case_reserve(&s.market, &s.g, &s.v).unwrap();
    let i = s.g.node_index(10.0).unwrap();
    assert_eq!(wc.latest_optimal.values[i], 20.0);
    assert!(wc.worst_reserve.values[i] > s.g.values[i].max(s.v.values[i]));
}

#[test]
fn envelope_invariants_on_every_example() {
    for k in 1..=4 {
        let s = setup(k, DEFAULT_STEP);
        let wc = worst_case_reserve(&s.market, &s.g, &s.v).unwrap();
        let (w, u, m) = (&wc.worst_reserve, &wc.latest_optimal, &wc.gain_envelope);
        let n = w.len() - 1;
        assert_eq!(u.values[n], 30.0);
        assert_eq!(m.values[n], 0.0);
        for i in 0..=n {
            assert!(m.values[i] >= 0.0);
            assert_eq!(w.values[i], s.v.values[i] + m.values[i]);
            assert!(u.values[i] >= w.time(i) && u.values[i] <= 30.0);
        }
        for i in inner(w) {
            assert!(w.values[i] >= s.v.values[i] - 1e-9 * B_A);
            assert!(w.values[i] >= s.g.values[i] - 1e-9 * B_A);
        }
    }
}

/// Per-step survival-discount factor from the closed-form mortality,
/// integrated with composite Simpson on 8 panels.
fn discount(r: f64, a: f64, b: f64) -> f64 {
    let mu = |t: f64| 0.0005 + 10f64.powf(5.728 - 10.0 + 0.038 * (t + 35.0));
    let panels = 8;
    let h = (b - a) / panels as f64;
    let mut sum = mu(a) + mu(b);
    for j in 1..panels {
        sum += mu(a + j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 };
    }
    (-(r * (b - a) + sum * h / 3.0)).exp()
}

#[test]
fn time_consistency_of_the_gain_envelope() {
    let s = setup(4, DEFAULT_STEP);
    let wc = worst_case_reserve(&s.market, &s.g, &s.v).unwrap();
    let m = &wc.gain_envelope;
    for i in inner(m) {
        let (a, b) = (m.time(i), m.time(i + 1));
        let r = s.market.rate.rate(a);
        let continuation = discount(r, a, b) * m.values[i + 1];
        assert!(m.values[i] >= continuation - 1e-9 * B_A, "node {i}");
        if wc.latest_optimal.values[i] > a {
            assert!((m.values[i] - continuation).abs() <= 1e-9 * B_A, "node {i}");
        } else {
            assert_eq!(m.values[i], s.g.values[i] - s.v.values[i]);
        }
    }
}
