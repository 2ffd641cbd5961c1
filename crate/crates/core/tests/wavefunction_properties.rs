mod common;

use pdmwell::spectrum::energy_levels;
use pdmwell::wavefunction::build;
use pdmwell::{Parity, WellConfig};
use proptest::prelude::*;

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

fn well() -> impl Strategy<Value = WellConfig> {
    (
        log_uniform(0.1, 10.0),
        log_uniform(0.1, 10.0),
        log_uniform(0.5, 5.0),
        prop_oneof![Just(0.0), 0.0..5.0f64],
        log_uniform(0.2, 5.0),
    )
        .prop_map(|(m1, m2, v1, dv, a)| WellConfig::new(m1, m2, v1, v1 + dv, a).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn states_are_normalized_matched_and_have_n_minus_one_nodes(c in well()) {
        let s = energy_levels(&c).unwrap();
        for st in &s.states {
            let check = common::check_state(&c, st).unwrap();
            prop_assert!(check.passes(), "{} n={}: {:?}", c, st.n, check);
        }
    }

    #[test]
    fn distinct_states_are_orthogonal_under_mass_weight(c in well()) {
        let s = energy_levels(&c).unwrap();
        let wfs: Vec<_> = s.states.iter().map(|st| build(&c, st).unwrap()).collect();
        for (i, p) in wfs.iter().enumerate() {
            for q in &wfs[i + 1..] {
                let overlap = common::weighted_overlap(p, q);
                prop_assert!(overlap.abs() <= 1e-6, "{} <{}|{}> = {}", c, p.state().n, q.state().n, overlap);
            }
        }
    }

    #[test]
    fn symmetric_states_have_definite_parity(
        m1 in log_uniform(0.1, 10.0),
        m2 in log_uniform(0.1, 10.0),
        v in log_uniform(0.5, 5.0),
        a in log_uniform(0.2, 5.0),
    ) {
        let c = WellConfig::symmetric(m1, m2, v, a).unwrap();
        for st in &energy_levels(&c).unwrap().states {
            let wf = build(&c, st).unwrap();
            let sign = match st.parity {
                Parity::Even => 1.0,
                Parity::Odd => -1.0,
                Parity::None => return Err(TestCaseError::fail("missing parity")),
            };
            let reach = a + 5.0 / wf.slowest_decay();
            for i in 0..200 {
                let x = reach * i as f64 / 199.0;
                let d = wf.evaluate(x) - sign * wf.evaluate(-x);
                prop_assert!(d.abs() <= 1e-12, "{} n={} x={} diff {}", c, st.n, x, d);
            }
        }
    }
}

#[test]
fn even_ground_state_peaks_at_origin() {
    let c = WellConfig::symmetric(1.0, 1.0, 2.0, 1.0).unwrap();
    let st = &energy_levels(&c).unwrap().states[0];
    let wf = build(&c, st).unwrap();
    assert!((wf.evaluate(0.0) - st.amp_c).abs() < 1e-15);
    for i in 1..50 {
        assert!(wf.evaluate(0.05 * i as f64) < wf.evaluate(0.0));
    }
}

#[test]
fn psi_jumps_by_mass_ratio_at_junctions() {
    let c = WellConfig::new(1.0, 2.0, 1.0, 2.0, 1.0).unwrap();
    let wf = build(&c, &energy_levels(&c).unwrap().states[0]).unwrap();
    let a = c.a();
    let eps = 1e-12;
    let ratio = (c.m2() / c.m1()).sqrt();
    for x in [-a, a] {
        let inside = wf.evaluate(x);
        let outside = wf.evaluate(x + x.signum() * eps);
        assert!((inside / outside - ratio).abs() < 1e-9);
        assert!((wf.evaluate_phi(x) - wf.evaluate_phi(x + x.signum() * eps)).abs() < 1e-10);
    }
}
