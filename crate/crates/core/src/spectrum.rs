//! Bound-state energies from the transcendental matching equation.
//!
//! On branch `n` the energy equation for the inside wavenumber `k2` reads
//!
//! ```text
//! 2 k2 a = n π − asin(k2 / sqrt(m1 V2 − k2²(m1/m2 − 1)))
//!              − asin(k2 / sqrt(m1 V1 − k2²(m1/m2 − 1)))
//! ```
//!
//! with both inverse sines on `[0, π/2]`. Written as `residual = lhs − rhs` it is
//! strictly increasing in `k2`, starts at `−nπ` for `k2 → 0` and reaches its
//! maximum at the threshold `k2 = sqrt(m2 V1)` (i.e. `E = V1`). Every branch
//! therefore holds at most one root, found by plain bisection.

use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

use crate::model::{BoundState, ModelError, Parity, WellConfig};
use crate::wavefunction;

/// Absolute bisection tolerance on `k2`.
pub const K2_TOLERANCE: f64 = 1e-12;
/// Bisection also stops no later than this many ulps of `sqrt(m2 V1)`.
pub const K2_RELATIVE_TOLERANCE: f64 = 4.0 * f64::EPSILON;
pub const MAX_BISECTION_ITERATIONS: usize = 200;
/// Relative inset of the bracket endpoints from `0` and `sqrt(m2 V1)`.
pub const BRACKET_INSET: f64 = 1e-13;
/// Inverse-sine arguments this far above 1 are treated as rounding and clamped.
pub const ASIN_CLAMP: f64 = 1e-14;

const MASS_BRACKET_LOW: f64 = 1e-8;
const MASS_BRACKET_CAP: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("inverse-sine argument {argument} out of range at k2 = {k2}")]
    Domain { k2: f64, argument: f64 },
    #[error("no sign change found for branch {n} below {cap}")]
    BracketFailure { n: usize, cap: f64 },
    #[error("branch index must be >= 1")]
    InvalidBranch,
    #[error("well is not symmetric (V1 != V2)")]
    NotSymmetric,
    #[error("well does not have constant mass (m1 != m2)")]
    NotConstantMass,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Bracket of a single branch root, with `f_lo < 0 < f_hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    pub n: usize,
    pub k_lo: f64,
    pub k_hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl RootBracket {
    /// Evaluates `f` at both ends; `None` unless the residual changes sign upward.
    pub fn new<F>(n: usize, k_lo: f64, k_hi: f64, mut f: F) -> Result<Option<Self>, SpectrumError>
    where
        F: FnMut(f64) -> Result<f64, SpectrumError>,
    {
        let f_lo = f(k_lo)?;
        let f_hi = f(k_hi)?;
        Ok((f_lo < 0.0 && f_hi > 0.0).then_some(Self {
            n,
            k_lo,
            k_hi,
            f_lo,
            f_hi,
        }))
    }

    /// Bisects the bracket down to `tol` in `k`.
    pub fn bisect<F>(mut self, tol: f64, mut f: F) -> Result<f64, SpectrumError>
    where
        F: FnMut(f64) -> Result<f64, SpectrumError>,
    {
        for _ in 0..MAX_BISECTION_ITERATIONS {
            if self.k_hi - self.k_lo <= tol {
                break;
            }
            let mid = 0.5 * (self.k_lo + self.k_hi);
            if mid <= self.k_lo || mid >= self.k_hi {
                break;
            }
            let f_mid = f(mid)?;
            if f_mid == 0.0 {
                return Ok(mid);
            }
            if f_mid < 0.0 {
                self.k_lo = mid;
                self.f_lo = f_mid;
            } else {
                self.k_hi = mid;
                self.f_hi = f_mid;
            }
        }
        Ok(0.5 * (self.k_lo + self.k_hi))
    }
}

/// Bound states of one well, ordered by energy.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub config: WellConfig,
    pub states: Vec<BoundState>,
    /// Count from the closed-form counting inequality.
    pub predicted_count: usize,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.energy).collect()
    }
}

fn checked_asin(argument: f64, k2: f64) -> Result<f64, SpectrumError> {
    if !(argument >= 0.0) || argument > 1.0 + ASIN_CLAMP {
        return Err(SpectrumError::Domain { k2, argument });
    }
    Ok(argument.min(1.0).asin())
}

/// `k2 / sqrt(m1 V − k2²(m1/m2 − 1))`, the inverse-sine argument for barrier `v`.
fn barrier_argument(k2: f64, v: f64, config: &WellConfig) -> Result<f64, SpectrumError> {
    let radicand = config.m1() * v - k2 * k2 * (config.m1() / config.m2() - 1.0);
    if !(radicand > 0.0) {
        return Err(SpectrumError::Domain {
            k2,
            argument: f64::INFINITY,
        });
    }
    Ok(k2 / radicand.sqrt())
}

fn check_k2(k2: f64, n: usize) -> Result<(), SpectrumError> {
    if n == 0 {
        return Err(SpectrumError::InvalidBranch);
    }
    if !(k2 >= 0.0) {
        return Err(SpectrumError::Domain { k2, argument: k2 });
    }
    Ok(())
}

/// Residual of the general energy equation on branch `n`.
pub fn residual_asymmetric(k2: f64, n: usize, config: &WellConfig) -> Result<f64, SpectrumError> {
    check_k2(k2, n)?;
    let right = checked_asin(barrier_argument(k2, config.v2(), config)?, k2)?;
    let left = checked_asin(barrier_argument(k2, config.v1(), config)?, k2)?;
    Ok(2.0 * k2 * config.a() - n as f64 * PI + right + left)
}

/// Residual of the symmetric-well energy equation
/// `2 k2 a = nπ − 2 asin(k2 / sqrt(k2² + m1 (V − E)))`, `E = k2²/m2`.
pub fn residual_symmetric(k2: f64, n: usize, config: &WellConfig) -> Result<f64, SpectrumError> {
    check_k2(k2, n)?;
    if !config.is_symmetric() {
        return Err(SpectrumError::NotSymmetric);
    }
    let energy = k2 * k2 / config.m2();
    let outside = config.m1() * (config.v1() - energy);
    let radicand = k2 * k2 + outside;
    if !(radicand > 0.0) {
        return Err(SpectrumError::Domain {
            k2,
            argument: f64::INFINITY,
        });
    }
    let s = checked_asin(k2 / radicand.sqrt(), k2)?;
    Ok(2.0 * k2 * config.a() - n as f64 * PI + 2.0 * s)
}

/// Residual of the textbook constant-mass equation
/// `2 k2 a = nπ − asin(k2/sqrt(m V2)) − asin(k2/sqrt(m V1))`.
pub fn residual_constant_mass(
    k2: f64,
    n: usize,
    config: &WellConfig,
) -> Result<f64, SpectrumError> {
    check_k2(k2, n)?;
    if !config.is_constant_mass() {
        return Err(SpectrumError::NotConstantMass);
    }
    let m = config.m2();
    let right = checked_asin(k2 / (m * config.v2()).sqrt(), k2)?;
    let left = checked_asin(k2 / (m * config.v1()).sqrt(), k2)?;
    Ok(2.0 * k2 * config.a() - n as f64 * PI + right + left)
}

/// Half-width form for the symmetric constant-mass well,
/// `k2 a = nπ/2 − asin(k2/sqrt(m V))`.
pub fn residual_constant_mass_symmetric(
    k2: f64,
    n: usize,
    config: &WellConfig,
) -> Result<f64, SpectrumError> {
    check_k2(k2, n)?;
    if !config.is_constant_mass() {
        return Err(SpectrumError::NotConstantMass);
    }
    if !config.is_symmetric() {
        return Err(SpectrumError::NotSymmetric);
    }
    let s = checked_asin(k2 / (config.m2() * config.v1()).sqrt(), k2)?;
    Ok(k2 * config.a() - n as f64 * FRAC_PI_2 + s)
}

/// Residual of the equation that produced `state`.
pub fn state_residual(config: &WellConfig, state: &BoundState) -> Result<f64, SpectrumError> {
    if config.is_symmetric() {
        residual_symmetric(state.k2, state.n, config)
    } else {
        residual_asymmetric(state.k2, state.n, config)
    }
}

/// `f(m1) = asin(sqrt(m2 V1) / sqrt(m2 V1 + m1 ΔV))`.
///
/// A first bound state exists at half-width `a` iff
/// `f(m1) > π/2 − 2a sqrt(m2 V1)`. As `m1` runs from 0 to ∞, `f` drops from
/// `π/2` to 0, so the outside mass can remove at most one level.
pub fn first_bound_threshold(m1: f64, m2: f64, v1: f64, v2: f64) -> f64 {
    let inside = m2 * v1;
    (inside.sqrt() / (inside + m1 * (v2 - v1)).sqrt())
        .min(1.0)
        .asin()
}

pub fn has_bound_state(config: &WellConfig) -> bool {
    count_bound_states_asymmetric(config) >= 1
}

/// Largest `n` (possibly 0) for which `lhs > rhs(n)`, where `rhs` grows by π per step.
fn count_by_inequality(lhs: f64, rhs: impl Fn(usize) -> f64) -> usize {
    let mut n = 0;
    while lhs > rhs(n + 1) {
        n += 1;
    }
    n
}

/// Number of bound states from
/// `2a sqrt(m2 V1) > (n − 1/2)π − asin(sqrt(m2 V1)/sqrt(m2 V1 + m1 ΔV))`.
pub fn count_bound_states_asymmetric(config: &WellConfig) -> usize {
    let f = first_bound_threshold(config.m1(), config.m2(), config.v1(), config.v2());
    let lhs = 2.0 * config.a() * config.k2_max();
    count_by_inequality(lhs, |n| (n as f64 - 0.5) * PI - f)
}

/// Number of bound states of a symmetric well, `2a sqrt(m2 V) > (n − 1)π`.
/// Independent of `m1` and never below 1.
pub fn count_bound_states_symmetric(config: &WellConfig) -> Result<usize, SpectrumError> {
    if !config.is_symmetric() {
        return Err(SpectrumError::NotSymmetric);
    }
    let lhs = 2.0 * config.a() * config.k2_max();
    Ok(count_by_inequality(lhs, |n| (n as f64 - 1.0) * PI))
}

/// Constant-mass counting rule, `2a sqrt(m V1) > (n − 1/2)π − asin(sqrt(V1/V2))`.
pub fn count_bound_states_constant_mass(config: &WellConfig) -> Result<usize, SpectrumError> {
    if !config.is_constant_mass() {
        return Err(SpectrumError::NotConstantMass);
    }
    let s = (config.v1() / config.v2()).sqrt().min(1.0).asin();
    let lhs = 2.0 * config.a() * (config.m2() * config.v1()).sqrt();
    Ok(count_by_inequality(lhs, |n| (n as f64 - 0.5) * PI - s))
}

/// Half-width at which the `n`-th bound state appears. `a` is ignored apart
/// from validation of the remaining parameters.
pub fn critical_width(m1: f64, m2: f64, v1: f64, v2: f64, n: usize) -> Result<f64, SpectrumError> {
    if n == 0 {
        return Err(SpectrumError::InvalidBranch);
    }
    WellConfig::new(m1, m2, v1, v2, 1.0)?;
    let f = first_bound_threshold(m1, m2, v1, v2);
    Ok(((n as f64 - 0.5) * PI - f) / (2.0 * (m2 * v1).sqrt()))
}

/// Inside mass at which the `n`-th bound state appears, solved by bisection.
pub fn critical_inside_mass(
    m1: f64,
    v1: f64,
    v2: f64,
    a: f64,
    n: usize,
) -> Result<f64, SpectrumError> {
    if n == 0 {
        return Err(SpectrumError::InvalidBranch);
    }
    WellConfig::new(m1, 1.0, v1, v2, a)?;
    if v1 == v2 {
        return critical_mass_symmetric(v1, a, n);
    }
    let excess = |m2: f64| {
        2.0 * a * (m2 * v1).sqrt() - (n as f64 - 0.5) * PI + first_bound_threshold(m1, m2, v1, v2)
    };

    let mut lo = MASS_BRACKET_LOW;
    while excess(lo) >= 0.0 {
        lo *= 0.5;
        if lo < f64::MIN_POSITIVE {
            return Err(SpectrumError::BracketFailure { n, cap: lo });
        }
    }
    let mut hi = 1.0_f64.max(2.0 * lo);
    while excess(hi) <= 0.0 {
        hi *= 2.0;
        if hi > MASS_BRACKET_CAP {
            return Err(SpectrumError::BracketFailure {
                n,
                cap: MASS_BRACKET_CAP,
            });
        }
    }
    for _ in 0..MAX_BISECTION_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-15 * hi {
            break;
        }
        if excess(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `m2 = (n−1)² π² / (4 a² V)`, the closed-form critical inside mass of a
/// symmetric well. The first level exists for every `m2 > 0`, hence 0 for `n = 1`.
pub fn critical_mass_symmetric(v: f64, a: f64, n: usize) -> Result<f64, SpectrumError> {
    if n == 0 {
        return Err(SpectrumError::InvalidBranch);
    }
    WellConfig::symmetric(1.0, 1.0, v, a)?;
    let j = (n - 1) as f64;
    Ok(j * j * PI * PI / (4.0 * a * a * v))
}

/// Root of `residual` on branch `n` inside `(0, sqrt(m2 V1))`.
///
/// The caller has already established (through the counting rule) that the
/// branch holds a root. If that root sits within the top inset the state is
/// reported at the inset, just below threshold.
fn solve_branch<F>(config: &WellConfig, n: usize, residual: F) -> Result<f64, SpectrumError>
where
    F: Fn(f64, usize, &WellConfig) -> Result<f64, SpectrumError>,
{
    let k_max = config.k2_max();
    let eps = BRACKET_INSET * k_max;
    let f = |k: f64| residual(k, n, config);
    match RootBracket::new(n, eps, k_max - eps, f)? {
        Some(bracket) => bracket.bisect(K2_TOLERANCE.min(K2_RELATIVE_TOLERANCE * k_max), f),
        None => {
            let f_hi = f(k_max - eps)?;
            if f_hi <= 0.0 {
                Ok(k_max - eps)
            } else {
                Err(SpectrumError::BracketFailure { n, cap: k_max })
            }
        }
    }
}

fn bound_state(config: &WellConfig, n: usize, k2: f64, parity: Parity) -> BoundState {
    let energy = k2 * k2 / config.m2();
    let (k1, _, k3) = config.wavenumbers(energy);
    let theta = match parity {
        Parity::Even => FRAC_PI_2,
        Parity::Odd => 0.0,
        Parity::None => wavefunction::phase_from_left_junction(config.a(), k1, k2),
    };
    let (amp_a, amp_b, amp_c) = wavefunction::normalized_amplitudes(config, k1, k2, k3, theta);
    BoundState {
        n,
        energy,
        k1,
        k2,
        k3,
        theta,
        amp_a,
        amp_b,
        amp_c,
        parity,
    }
}

fn symmetric_parity(n: usize) -> Parity {
    if n % 2 == 1 {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// Bound states of a general well. Symmetric wells are handed to
/// [`energy_levels_symmetric`] so their states carry parity tags.
pub fn energy_levels_asymmetric(config: &WellConfig) -> Result<Spectrum, SpectrumError> {
    if config.is_symmetric() {
        return energy_levels_symmetric(config);
    }
    energy_levels_general(config)
}

/// Bound states from the general (two-barrier) equation, without the symmetric
/// dispatch. States carry no parity tag even when `V1 = V2`.
pub fn energy_levels_general(config: &WellConfig) -> Result<Spectrum, SpectrumError> {
    let count = count_bound_states_asymmetric(config);
    let states = (1..=count)
        .map(|n| {
            let k2 = solve_branch(config, n, residual_asymmetric)?;
            Ok(bound_state(config, n, k2, Parity::None))
        })
        .collect::<Result<Vec<_>, SpectrumError>>()?;
    Ok(Spectrum {
        config: *config,
        states,
        predicted_count: count,
    })
}

/// Bound states of a symmetric well. Odd `n` gives even states (`θ = π/2`),
/// even `n` odd states (`θ = 0`).
pub fn energy_levels_symmetric(config: &WellConfig) -> Result<Spectrum, SpectrumError> {
    let count = count_bound_states_symmetric(config)?;
    let states = (1..=count)
        .map(|n| {
            let k2 = solve_branch(config, n, residual_symmetric)?;
            Ok(bound_state(config, n, k2, symmetric_parity(n)))
        })
        .collect::<Result<Vec<_>, SpectrumError>>()?;
    Ok(Spectrum {
        config: *config,
        states,
        predicted_count: count,
    })
}

/// Bound states of a well with `m1 = m2`, from the textbook equations.
pub fn energy_levels_constant_mass(config: &WellConfig) -> Result<Spectrum, SpectrumError> {
    let count = count_bound_states_constant_mass(config)?;
    let symmetric = config.is_symmetric();
    let states = (1..=count)
        .map(|n| {
            if symmetric {
                let k2 = solve_branch(config, n, residual_constant_mass_symmetric)?;
                Ok(bound_state(config, n, k2, symmetric_parity(n)))
            } else {
                let k2 = solve_branch(config, n, residual_constant_mass)?;
                Ok(bound_state(config, n, k2, Parity::None))
            }
        })
        .collect::<Result<Vec<_>, SpectrumError>>()?;
    Ok(Spectrum {
        config: *config,
        states,
        predicted_count: count,
    })
}

/// Entry point used by the CLI and the oracle: picks the general solver.
pub fn energy_levels(config: &WellConfig) -> Result<Spectrum, SpectrumError> {
    energy_levels_asymmetric(config)
}
