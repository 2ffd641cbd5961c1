use pdmwell::oracle::{
    cross_validate, eigen_fd, shoot_spectrum, validation_margin, Grid, OracleError, DEFAULT_POINTS,
};
use pdmwell::spectrum::{critical_inside_mass, critical_width, energy_levels};
use pdmwell::WellConfig;

fn cfg(m1: f64, m2: f64, v1: f64, v2: f64, a: f64) -> WellConfig {
    WellConfig::new(m1, m2, v1, v2, a).unwrap()
}

fn validation_grid(c: &WellConfig, points: usize) -> Grid {
    let slowest = energy_levels(c)
        .unwrap()
        .states
        .iter()
        .map(|s| s.k1.min(s.k3))
        .reduce(f64::min);
    Grid::with_margin(c, validation_margin(c, slowest), points).unwrap()
}

#[test]
fn reference_wells_pass_cross_validation() {
    let report = cross_validate(&cfg(1.0, 2.0, 1.0, 2.0, 1.0), 1e-3).unwrap();
    assert_eq!(report.levels.len(), 1);
    let report = cross_validate(&cfg(1.0, 5.0, 2.0, 2.0, 1.0), 1e-3).unwrap();
    assert_eq!(report.levels.len(), 3);
    assert!(report.max_delta() < 1e-5);
}

#[test]
fn unreachable_tolerance_reports_mismatch() {
    match cross_validate(&cfg(1.0, 2.0, 1.0, 2.0, 1.0), 1e-15) {
        Err(OracleError::ValidationMismatch(report)) => {
            assert!(report.counts_agree());
            assert!(report.max_delta() > 1e-15);
        }
        other => panic!("expected mismatch, got {other:?}"),
    }
}

#[test]
fn oracles_see_levels_appear_at_critical_values() {
    let (m1, m2, v1, v2) = (1.0, 2.0, 1.0, 2.0);
    for n in 1..=3 {
        let a = critical_width(m1, m2, v1, v2, n).unwrap();
        let below = cfg(m1, m2, v1, v2, a - 1e-3);
        let above = cfg(m1, m2, v1, v2, a + 1e-3);
        let counts: Vec<(usize, usize)> = [below, above]
            .iter()
            .map(|c| {
                let grid = validation_grid(c, DEFAULT_POINTS);
                (
                    eigen_fd(c, &grid).energies.len(),
                    shoot_spectrum(c, &grid).energies.len(),
                )
            })
            .collect();
        assert_eq!(counts[0], (n - 1, n - 1), "a = {a} - 1e-3");
        assert_eq!(counts[1], (n, n), "a = {a} + 1e-3");
    }
    for n in 1..=3 {
        let m2 = critical_inside_mass(10.0, 1.0, 2.0, 1.0, n).unwrap();
        for (delta, expected) in [(-1e-3, n - 1), (1e-3, n)] {
            let c = cfg(10.0, m2 + delta, 1.0, 2.0, 1.0);
            let grid = validation_grid(&c, DEFAULT_POINTS);
            assert_eq!(
                eigen_fd(&c, &grid).energies.len(),
                expected,
                "m2 = {m2} {delta:+}"
            );
            assert_eq!(
                shoot_spectrum(&c, &grid).energies.len(),
                expected,
                "m2 = {m2} {delta:+}"
            );
        }
    }
}

#[test]
fn finite_differences_and_shooting_agree() {
    let wells = [
        cfg(1.0, 2.0, 1.0, 2.0, 1.0),
        cfg(1.0, 5.0, 2.0, 2.0, 1.0),
        cfg(10.0, 0.5, 1.0, 3.0, 2.0),
        cfg(0.2, 3.0, 4.0, 6.0, 0.8),
        cfg(1.0, 1.0, 1.0, 1.0, 3.0),
    ];
    for c in &wells {
        let grid = validation_grid(c, DEFAULT_POINTS);
        let fd = eigen_fd(c, &grid);
        let sh = shoot_spectrum(c, &grid);
        assert_eq!(fd.energies.len(), sh.energies.len(), "{c}");
        for (f, s) in fd.energies.iter().zip(&sh.energies) {
            assert!((f - s).abs() <= 1e-5, "{c}: fd {f} vs shooting {s}");
        }
    }
}

#[test]
fn finite_differences_converge_at_second_order() {
    for c in [
        cfg(1.0, 2.0, 1.0, 2.0, 1.0),
        cfg(10.0, 0.5, 1.0, 3.0, 2.0),
        cfg(0.5, 4.0, 2.0, 2.0, 1.0),
    ] {
        let exact = energy_levels(&c).unwrap().energies();
        let errors: Vec<f64> = [2000, 4000]
            .iter()
            .map(|&n| {
                let grid = validation_grid(&c, n);
                (eigen_fd(&c, &grid).energies[0] - exact[0]).abs()
            })
            .collect();
        let ratio = errors[0] / errors[1];
        assert!(
            (3.5..4.5).contains(&ratio),
            "{c}: ratio {ratio} from {errors:?}"
        );
    }
}
