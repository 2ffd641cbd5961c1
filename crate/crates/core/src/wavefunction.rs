//! Closed-form bound-state wavefunctions.
//!
//! With `φ = ψ / sqrt(m)`, the junction conditions at `x = ±a` are continuity of
//! `φ` and `φ'`. Outside the well `ψ = A e^{k1 x}` (left) and `B e^{-k3 x}`
//! (right); inside `ψ = C sin(k2 x + θ)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::model::{BoundState, Parity, WellConfig};

/// Largest junction residual accepted by [`build`].
pub const MATCHING_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WavefunctionError {
    #[error(
        "junction residual {residual:e} exceeds {MATCHING_TOLERANCE:e}; state is not converged"
    )]
    MatchingResidualTooLarge { residual: f64 },
    #[error("energy {energy} is not inside (0, V1)")]
    NotBound { energy: f64 },
}

/// Reduces an angle into `[0, π)`.
fn reduce_phase(theta: f64) -> f64 {
    let r = theta.rem_euclid(PI);
    if r >= PI {
        0.0
    } else {
        r
    }
}

/// Phase fixed by the left junction: `cot(θ − k2 a) = k1 / k2`.
pub fn phase_from_left_junction(a: f64, k1: f64, k2: f64) -> f64 {
    reduce_phase(k2 * a + k2.atan2(k1))
}

/// Values of ψ just outside the well, `ψ(−a⁻)` and `ψ(a⁺)`, for `C = 1`.
fn edge_values(config: &WellConfig, k2: f64, theta: f64) -> (f64, f64) {
    let ratio = (config.m1() / config.m2()).sqrt();
    let a = config.a();
    (
        ratio * (theta - k2 * a).sin(),
        ratio * (theta + k2 * a).sin(),
    )
}

/// `∫ψ²` for `C = 1`, from the per-region antiderivatives.
fn norm_integral(config: &WellConfig, k1: f64, k2: f64, k3: f64, theta: f64) -> f64 {
    let a = config.a();
    let (left, right) = edge_values(config, k2, theta);
    let inside = if k2 > 0.0 {
        a - (2.0 * theta).cos() * (2.0 * k2 * a).sin() / (2.0 * k2)
    } else {
        2.0 * a * theta.sin().powi(2)
    };
    left * left / (2.0 * k1) + right * right / (2.0 * k3) + inside
}

/// Physical amplitudes `(A, B, C)` normalized to `∫ψ² = 1`, `C > 0`.
pub fn normalized_amplitudes(
    config: &WellConfig,
    k1: f64,
    k2: f64,
    k3: f64,
    theta: f64,
) -> (f64, f64, f64) {
    let a = config.a();
    let c = norm_integral(config, k1, k2, k3, theta).sqrt().recip();
    let (left, right) = edge_values(config, k2, theta);
    (c * left * (k1 * a).exp(), c * right * (k3 * a).exp(), c)
}

/// Continuity defects of `φ` and `φ'` at `x = −a` and `x = +a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchingResidual {
    pub left_value: f64,
    pub left_derivative: f64,
    pub right_value: f64,
    pub right_derivative: f64,
}

impl MatchingResidual {
    pub fn max(&self) -> f64 {
        self.left_value
            .max(self.left_derivative)
            .max(self.right_value)
            .max(self.right_derivative)
    }
}

/// A normalized eigenfunction, evaluable anywhere on the real line.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseWavefunction {
    config: WellConfig,
    state: BoundState,
    norm: f64,
    // ψ(−a⁻) and ψ(a⁺); used instead of A, B so that evaluation never forms
    // e^{k a} explicitly
    left_edge: f64,
    right_edge: f64,
}

/// Builds the normalized wavefunction of `state`.
///
/// Only `n`, `energy` and `parity` of the input are used; wavenumbers, phase
/// and amplitudes are recomputed from the junction equations and the result
/// is rejected if the right-hand junction does not close.
pub fn build(
    config: &WellConfig,
    state: &BoundState,
) -> Result<PiecewiseWavefunction, WavefunctionError> {
    let energy = state.energy;
    if !(energy > 0.0 && energy < config.v1()) {
        return Err(WavefunctionError::NotBound { energy });
    }
    let (k1, k2, k3) = config.wavenumbers(energy);
    let mut theta = phase_from_left_junction(config.a(), k1, k2);
    let snap = match state.parity {
        Parity::Even => Some(PI / 2.0),
        Parity::Odd => Some(if theta > PI / 2.0 { PI } else { 0.0 }),
        Parity::None => None,
    };
    if let Some(target) = snap {
        if (theta - target).abs() < 1e-6 {
            theta = reduce_phase(target);
        }
    }

    let norm = norm_integral(config, k1, k2, k3, theta).sqrt().recip();
    let (left, right) = edge_values(config, k2, theta);
    let a = config.a();
    let rebuilt = BoundState {
        n: state.n,
        energy,
        k1,
        k2,
        k3,
        theta,
        amp_a: norm * left * (k1 * a).exp(),
        amp_b: norm * right * (k3 * a).exp(),
        amp_c: norm,
        parity: state.parity,
    };
    let wf = PiecewiseWavefunction {
        config: *config,
        state: rebuilt,
        norm,
        left_edge: norm * left,
        right_edge: norm * right,
    };
    let residual = wf.matching_residual().max();
    if !(residual <= MATCHING_TOLERANCE) {
        return Err(WavefunctionError::MatchingResidualTooLarge { residual });
    }
    Ok(wf)
}

impl PiecewiseWavefunction {
    pub fn config(&self) -> &WellConfig {
        &self.config
    }

    pub fn state(&self) -> &BoundState {
        &self.state
    }

    /// Factor applied to the `C = 1` solution to reach unit norm.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// `ψ(x)`. At exactly `x = ±a` the inside closed form is used.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.value_and_derivative(x).0
    }

    /// `ψ'(x)`, inside closed form at `x = ±a`.
    pub fn derivative(&self, x: f64) -> f64 {
        self.value_and_derivative(x).1
    }

    /// `φ(x) = ψ(x) / sqrt(m(x))`, continuous everywhere.
    pub fn evaluate_phi(&self, x: f64) -> f64 {
        self.evaluate(x) / self.config.mass_at(x).sqrt()
    }

    fn value_and_derivative(&self, x: f64) -> (f64, f64) {
        let a = self.config.a();
        let s = &self.state;
        if x < -a {
            let v = self.left_edge * (s.k1 * (x + a)).exp();
            (v, s.k1 * v)
        } else if x > a {
            let v = self.right_edge * (-s.k3 * (x - a)).exp();
            (v, -s.k3 * v)
        } else {
            let phase = s.k2 * x + s.theta;
            (s.amp_c * phase.sin(), s.amp_c * s.k2 * phase.cos())
        }
    }

    /// `|Δφ|` and `|Δφ'|` across both junctions, from the closed forms.
    pub fn matching_residual(&self) -> MatchingResidual {
        let s = &self.state;
        let a = self.config.a();
        let out = self.config.m1().sqrt();
        let inside = self.config.m2().sqrt();

        let phi_out_left = self.left_edge / out;
        let dphi_out_left = s.k1 * self.left_edge / out;
        let phi_in_left = s.amp_c * (s.theta - s.k2 * a).sin() / inside;
        let dphi_in_left = s.amp_c * s.k2 * (s.theta - s.k2 * a).cos() / inside;

        let phi_out_right = self.right_edge / out;
        let dphi_out_right = -s.k3 * self.right_edge / out;
        let phi_in_right = s.amp_c * (s.theta + s.k2 * a).sin() / inside;
        let dphi_in_right = s.amp_c * s.k2 * (s.theta + s.k2 * a).cos() / inside;

        MatchingResidual {
            left_value: (phi_out_left - phi_in_left).abs(),
            left_derivative: (dphi_out_left - dphi_in_left).abs(),
            right_value: (phi_out_right - phi_in_right).abs(),
            right_derivative: (dphi_out_right - dphi_in_right).abs(),
        }
    }

    /// Probability current at `x`; zero for these real eigenfunctions.
    pub fn current_density(&self, x: f64) -> f64 {
        let (v, d) = self.value_and_derivative(x);
        current_density(
            Complex64::new(v, 0.0),
            Complex64::new(d, 0.0),
            self.config.mass_at(x),
        )
    }

    /// Sign changes of ψ strictly inside the well, over `samples` points.
    pub fn interior_nodes(&self, samples: usize) -> usize {
        let a = self.config.a();
        let step = 2.0 * a / (samples + 1) as f64;
        let values: Vec<f64> = (1..=samples)
            .map(|i| self.evaluate(-a + i as f64 * step))
            .filter(|v| *v != 0.0)
            .collect();
        values.windows(2).filter(|w| w[0] * w[1] < 0.0).count()
    }

    /// `(x, ψ, φ)` rows on a uniform mesh of `points` nodes over `[x_min, x_max]`.
    pub fn tabulate(&self, x_min: f64, x_max: f64, points: usize) -> Vec<(f64, f64, f64)> {
        let points = points.max(2);
        let step = (x_max - x_min) / (points - 1) as f64;
        (0..points)
            .map(|i| {
                let x = if i + 1 == points {
                    x_max
                } else {
                    x_min + i as f64 * step
                };
                (x, self.evaluate(x), self.evaluate_phi(x))
            })
            .collect()
    }

    /// Smallest decay constant outside the well.
    pub fn slowest_decay(&self) -> f64 {
        self.state.k1.min(self.state.k3)
    }
}

/// `j = −i (ψ* ψ'/m − ψ'* ψ/m) = 2 Im(ψ* ψ') / m` in ħ² = 2 units.
pub fn current_density(psi: Complex64, dpsi: Complex64, mass: f64) -> f64 {
    let j = Complex64::new(0.0, -1.0) * (psi.conj() * dpsi - dpsi.conj() * psi) / mass;
    j.re
}
