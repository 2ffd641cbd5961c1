//! Helpers shared by the integration tests and the acceptance suite.
#![allow(dead_code)]

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use pdmwell::wavefunction::{self, PiecewiseWavefunction};
use pdmwell::{BoundState, WellConfig};

pub const DECAY_LENGTHS: f64 = 40.0;
const ORDER: usize = 20;
const OUTSIDE_PANELS: usize = 64;

/// Composite Gauss-Legendre integral of `f` over `[lo, hi]` with `panels` equal panels.
pub fn composite(lo: f64, hi: f64, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
    let rule = GaussLegendre::new(NonZeroUsize::new(ORDER).unwrap());
    let width = (hi - lo) / panels as f64;
    (0..panels)
        .map(|i| {
            let a = lo + i as f64 * width;
            rule.integrate(a, a + width, &f)
        })
        .sum()
}

/// `∫ f` over `[-(a+L), a+L]`, `L = 40 / min(k_left, k_right)`, split at `±a`.
/// Each outside region gets its own panels over 40 decay lengths of its side.
pub fn integrate_well(
    config: &WellConfig,
    k_left: f64,
    k_right: f64,
    oscillations: usize,
    f: impl Fn(f64) -> f64,
) -> f64 {
    let a = config.a();
    let span = DECAY_LENGTHS / k_left.min(k_right);
    let outside = |k: f64, sign: f64| {
        let near = (DECAY_LENGTHS / k).min(span);
        let g = |t: f64| f(sign * t);
        let mut total = composite(a, a + near, OUTSIDE_PANELS, g);
        if near < span {
            total += composite(a + near, a + span, OUTSIDE_PANELS, g);
        }
        total
    };
    outside(k_left, -1.0) + composite(-a, a, 16 + 8 * oscillations, &f) + outside(k_right, 1.0)
}

pub fn quadrature_norm(wf: &PiecewiseWavefunction) -> f64 {
    let st = wf.state();
    integrate_well(wf.config(), st.k1, st.k3, st.n, |x| {
        let v = wf.evaluate(x);
        v * v
    })
}

/// `∫ φ_m φ_n m dx`.
pub fn weighted_overlap(p: &PiecewiseWavefunction, q: &PiecewiseWavefunction) -> f64 {
    let config = p.config();
    let (s, t) = (p.state(), q.state());
    integrate_well(config, s.k1.min(t.k1), s.k3.min(t.k3), s.n.max(t.n), |x| {
        p.evaluate_phi(x) * q.evaluate_phi(x) * config.mass_at(x)
    })
}

/// Largest violation among the per-state checks: matching residual,
/// quadrature norm, node count and current density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateCheck {
    pub matching: f64,
    pub norm_error: f64,
    pub nodes_ok: bool,
    pub current: f64,
}

impl StateCheck {
    pub fn passes(&self) -> bool {
        self.matching < 1e-9 && self.norm_error <= 1e-8 && self.nodes_ok && self.current < 1e-12
    }
}

pub fn check_state(config: &WellConfig, state: &BoundState) -> Result<StateCheck, String> {
    let wf =
        wavefunction::build(config, state).map_err(|e| format!("{config} n={}: {e}", state.n))?;
    let a = config.a();
    let reach = a + 5.0 / wf.slowest_decay();
    let current = (0..100)
        .map(|i| {
            wf.current_density(-reach + 2.0 * reach * i as f64 / 99.0)
                .abs()
        })
        .fold(0.0, f64::max);
    Ok(StateCheck {
        matching: wf.matching_residual().max(),
        norm_error: (quadrature_norm(&wf) - 1.0).abs(),
        nodes_ok: wf.interior_nodes(10_000) == state.n - 1,
        current,
    })
}
