//! Brute-force eigensolvers for `−φ'' + m(x) V(x) φ = E m(x) φ`.
//!
//! These never touch the transcendental equation and serve as independent
//! checks of [`crate::spectrum`]. Two methods are provided:
//!
//! - a three-point finite-difference discretization solved as the generalized
//!   symmetric-definite pencil `(K + P) φ = E W φ` by Sturm-count bisection,
//! - a shooting method integrating from both truncated boundaries with RK4.
//!
//! Both run on the same [`Grid`]: uniform across the well, `sinh`-graded
//! outside it, with `x = −a`, `0` and `a` on nodes.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::WellConfig;
use crate::spectrum::{self, SpectrumError};

/// Decay lengths kept on each side of the well.
pub const DECAY_LENGTHS: f64 = 40.0;
pub const MIN_POINTS: usize = 2000;
pub const DEFAULT_POINTS: usize = 16_000;
const ENERGY_TOLERANCE: f64 = 1e-13;
const RENORMALIZE_ABOVE: f64 = 1e100;
// outside scale of the sinh mapping, in units of the reference decay length
const GRADING_SCALE: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("grid needs at least {MIN_POINTS} points, got {0}")]
    TooFewPoints(usize),
    #[error("margin must be positive and finite, got {0}")]
    InvalidMargin(f64),
    #[error("doubling the grid moved an eigenvalue by {shift:e} (> {tolerance:e})")]
    GridTooCoarse { shift: f64, tolerance: f64 },
    #[error("trial energy {0} is not inside (0, V1)")]
    EnergyOutOfRange(f64),
    #[error("oracle and transcendental spectra disagree")]
    ValidationMismatch(Box<ValidationReport>),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

/// Truncated mesh for the oracle solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
    /// Spacing inside the well.
    pub h: f64,
    margin: f64,
    nodes: Vec<f64>,
    origin: usize,
}

impl Grid {
    /// Default truncation: 40 decay lengths of the slower outside decay at `E = V1/2`.
    pub fn default_margin(config: &WellConfig) -> f64 {
        let (k1, _, k3) = config.wavenumbers(0.5 * config.v1());
        DECAY_LENGTHS / k1.min(k3)
    }

    pub fn new(config: &WellConfig, n_points: usize) -> Result<Self, OracleError> {
        Self::with_margin(config, Self::default_margin(config), n_points)
    }

    /// Grid reaching `margin` beyond each junction with about `n_points` nodes.
    pub fn with_margin(
        config: &WellConfig,
        margin: f64,
        n_points: usize,
    ) -> Result<Self, OracleError> {
        if n_points < MIN_POINTS {
            return Err(OracleError::TooFewPoints(n_points));
        }
        if !(margin > 0.0 && margin.is_finite()) {
            return Err(OracleError::InvalidMargin(margin));
        }
        let a = config.a();
        let (k1, _, k3) = config.wavenumbers(0.5 * config.v1());
        // x = a + λ sinh(t): spacing λ dt at the junction, growing geometrically
        let lambda = (GRADING_SCALE / k1.min(k3)).min(margin);
        let t_end = (margin / lambda).asinh();
        let intervals = (n_points - 1) as f64;
        let h_target = (2.0 * a + 2.0 * lambda * t_end) / intervals;

        let half_inside = ((a / h_target).round() as usize).max(1);
        let h = a / half_inside as f64;
        let outside = ((lambda * t_end / h).round() as usize).max(1);
        let dt = t_end / outside as f64;

        let mut nodes = Vec::with_capacity(2 * (half_inside + outside) + 1);
        for j in (1..=outside).rev() {
            nodes.push(-a - lambda * (j as f64 * dt).sinh());
        }
        for i in 0..=2 * half_inside {
            nodes.push(-a + i as f64 * h);
        }
        // pin the junctions and the centre exactly
        nodes[outside] = -a;
        nodes[outside + half_inside] = 0.0;
        nodes[outside + 2 * half_inside] = a;
        for j in 1..=outside {
            nodes.push(a + lambda * (j as f64 * dt).sinh());
        }

        Ok(Self {
            x_min: nodes[0],
            x_max: *nodes.last().expect("grid is non-empty"),
            n_points: nodes.len(),
            h,
            margin,
            nodes,
            origin: outside + half_inside,
        })
    }

    /// Same margin, twice the points.
    pub fn refined(&self, config: &WellConfig) -> Result<Self, OracleError> {
        Self::with_margin(config, self.margin, 2 * self.n_points)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// Index of the node at `x = 0`.
    pub fn origin_index(&self) -> usize {
        self.origin
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    FiniteDifference,
    Shooting,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpectrum {
    /// Strictly increasing, all below `V1`.
    pub energies: Vec<f64>,
    pub grid: Grid,
    pub method: OracleMethod,
}

/// Region coefficients `(m, m V)` on the interval `[x_i, x_{i+1}]`.
fn interval_coefficients(config: &WellConfig, left: f64, right: f64) -> (f64, f64) {
    let mid = 0.5 * (left + right);
    let m = config.mass_at(mid);
    (m, m * config.potential_at(mid))
}

/// Tridiagonal pencil over the interior nodes (Dirichlet at both ends).
struct Pencil {
    /// diagonal of K + P
    stiffness: Vec<f64>,
    /// off-diagonal of K
    coupling: Vec<f64>,
    /// diagonal of W
    weight: Vec<f64>,
}

impl Pencil {
    fn assemble(config: &WellConfig, grid: &Grid) -> Self {
        let x = grid.nodes();
        let n = x.len();
        let spans: Vec<(f64, f64, f64)> = x
            .windows(2)
            .map(|w| {
                let (m, mv) = interval_coefficients(config, w[0], w[1]);
                (w[1] - w[0], m, mv)
            })
            .collect();

        let mut stiffness = Vec::with_capacity(n - 2);
        let mut weight = Vec::with_capacity(n - 2);
        let mut coupling = Vec::with_capacity(n - 3);
        for i in 1..n - 1 {
            let (hl, ml, mvl) = spans[i - 1];
            let (hr, mr, mvr) = spans[i];
            // lumped dual-cell integrals of m and m V; at a junction node they mix both sides
            stiffness.push(1.0 / hl + 1.0 / hr + 0.5 * (hl * mvl + hr * mvr));
            weight.push(0.5 * (hl * ml + hr * mr));
            if i < n - 2 {
                coupling.push(-1.0 / hr);
            }
        }
        Self {
            stiffness,
            coupling,
            weight,
        }
    }

    /// Eigenvalues below `energy`, from the inertia of `K + P − E W`.
    fn count_below(&self, energy: f64) -> usize {
        let mut count = 0;
        let mut pivot = 1.0;
        for i in 0..self.stiffness.len() {
            let diag = self.stiffness[i] - energy * self.weight[i];
            pivot = if i == 0 {
                diag
            } else {
                let c = self.coupling[i - 1];
                let prev = if pivot == 0.0 { f64::EPSILON } else { pivot };
                diag - c * c / prev
            };
            if pivot < 0.0 {
                count += 1;
            }
        }
        count
    }
}

/// Finds the `index`-th (0-based) eigenvalue in `(lo, hi)` given a monotone count.
fn bisect_count(mut lo: f64, mut hi: f64, index: usize, count: impl Fn(f64) -> usize) -> f64 {
    while hi - lo > ENERGY_TOLERANCE * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count(mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All finite-difference eigenvalues below `V1`.
pub fn eigen_fd(config: &WellConfig, grid: &Grid) -> OracleSpectrum {
    let pencil = Pencil::assemble(config, grid);
    let v1 = config.v1();
    let levels = pencil.count_below(v1);
    let energies = (0..levels)
        .map(|j| bisect_count(0.0, v1, j, |e| pencil.count_below(e)))
        .collect();
    OracleSpectrum {
        energies,
        grid: grid.clone(),
        method: OracleMethod::FiniteDifference,
    }
}

/// The `index`-th (0-based) finite-difference eigenvalue, if it lies below `V1`.
pub fn fd_level(config: &WellConfig, grid: &Grid, index: usize) -> Option<f64> {
    let pencil = Pencil::assemble(config, grid);
    let v1 = config.v1();
    (pencil.count_below(v1) > index)
        .then(|| bisect_count(0.0, v1, index, |e| pencil.count_below(e)))
}

/// [`eigen_fd`] plus a refinement check: the grid is doubled and any level
/// moving by more than `tolerance` (or a changed count) is an error.
pub fn eigen_fd_checked(
    config: &WellConfig,
    grid: &Grid,
    tolerance: f64,
) -> Result<OracleSpectrum, OracleError> {
    let coarse = eigen_fd(config, grid);
    let fine = eigen_fd(config, &grid.refined(config)?);
    if coarse.energies.len() != fine.energies.len() {
        return Err(OracleError::GridTooCoarse {
            shift: f64::INFINITY,
            tolerance,
        });
    }
    let shift = coarse
        .energies
        .iter()
        .zip(&fine.energies)
        .map(|(c, f)| (c - f).abs())
        .fold(0.0, f64::max);
    if shift > tolerance {
        return Err(OracleError::GridTooCoarse { shift, tolerance });
    }
    Ok(coarse)
}

/// State `(φ, φ')` advanced by RK4 across successive grid nodes.
struct Integrator<'a> {
    config: &'a WellConfig,
    energy: f64,
}

impl Integrator<'_> {
    fn step(&self, from: f64, to: f64, state: (f64, f64)) -> (f64, f64) {
        let (m, mv) = interval_coefficients(self.config, from, to);
        let q = mv - m * self.energy;
        let h = to - from;
        let f = |(p, dp): (f64, f64)| (dp, q * p);
        let k1 = f(state);
        let k2 = f((state.0 + 0.5 * h * k1.0, state.1 + 0.5 * h * k1.1));
        let k3 = f((state.0 + 0.5 * h * k2.0, state.1 + 0.5 * h * k2.1));
        let k4 = f((state.0 + h * k3.0, state.1 + h * k3.1));
        (
            state.0 + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            state.1 + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        )
    }

    /// Integrates along `path`, returning the final state and the number of
    /// sign changes of φ seen on the way.
    fn run<'p>(
        &self,
        mut path: impl Iterator<Item = &'p f64>,
        start: (f64, f64),
    ) -> ((f64, f64), usize) {
        let mut state = start;
        let mut nodes = 0;
        let Some(&first) = path.next() else {
            return (state, 0);
        };
        let mut x = first;
        let mut last_sign = state.0.signum();
        for &next in path {
            state = self.step(x, next, state);
            x = next;
            let size = state.0.abs() + state.1.abs();
            if size > RENORMALIZE_ABOVE {
                state = (state.0 / size, state.1 / size);
            }
            if state.0 != 0.0 {
                let sign = state.0.signum();
                if sign != last_sign {
                    nodes += 1;
                    last_sign = sign;
                }
            }
        }
        (state, nodes)
    }

    fn left_start(&self) -> (f64, f64) {
        let (k1, _, _) = self.config.wavenumbers(self.energy);
        (1.0, k1)
    }

    fn right_start(&self) -> (f64, f64) {
        let (_, _, k3) = self.config.wavenumbers(self.energy);
        (1.0, -k3)
    }
}

/// Normalized Wronskian mismatch `(φ_L' φ_R − φ_L φ_R') / (|y_L| |y_R|)` at `x = 0`.
///
/// `φ_L` starts as `e^{k1 x}` at `x_min`, `φ_R` as `e^{−k3 x}` at `x_max`.
/// Bound-state energies are the roots; the value lies in `[−1, 1]`.
pub fn shoot(config: &WellConfig, grid: &Grid, energy: f64) -> Result<f64, OracleError> {
    if !(energy > 0.0 && energy < config.v1()) {
        return Err(OracleError::EnergyOutOfRange(energy));
    }
    Ok(wronskian(config, grid, energy))
}

fn wronskian(config: &WellConfig, grid: &Grid, energy: f64) -> f64 {
    let integ = Integrator { config, energy };
    let nodes = grid.nodes();
    let origin = grid.origin_index();
    let (left, _) = integ.run(nodes[..=origin].iter(), integ.left_start());
    let (right, _) = integ.run(nodes[origin..].iter().rev(), integ.right_start());
    let w = left.1 * right.0 - left.0 * right.1;
    w / (left.0.hypot(left.1) * right.0.hypot(right.1))
}

/// Levels below `energy`.
///
/// With `N_L`, `N_R` the zeros met by the left and right solutions on their way
/// to `x = 0`, the count is `N_L + N_R`, plus one when the left log-derivative
/// at 0 lies below the right one. It steps up exactly at the roots of [`shoot`].
fn shooting_count(config: &WellConfig, grid: &Grid, energy: f64) -> usize {
    let integ = Integrator { config, energy };
    let nodes = grid.nodes();
    let origin = grid.origin_index();
    let (left, n_left) = integ.run(nodes[..=origin].iter(), integ.left_start());
    let (right, n_right) = integ.run(nodes[origin..].iter().rev(), integ.right_start());
    let w = left.1 * right.0 - left.0 * right.1;
    let crossed = w * left.0 * right.0 < 0.0;
    n_left + n_right + usize::from(crossed)
}

/// All shooting eigenvalues below `V1`.
///
/// Each level is isolated by bisecting the oscillation count, then refined on
/// the sign change of the Wronskian mismatch.
pub fn shoot_spectrum(config: &WellConfig, grid: &Grid) -> OracleSpectrum {
    let v1 = config.v1();
    let levels = shooting_count(config, grid, v1);
    let mut energies = Vec::with_capacity(levels);
    let mut floor = 0.0;
    for j in 0..levels {
        let (mut lo, mut hi) = (floor, v1);
        // count(lo) <= j < count(hi)
        let coarse = 1e-3 * v1;
        while hi - lo > coarse {
            let mid = 0.5 * (lo + hi);
            if shooting_count(config, grid, mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let w_lo = wronskian(config, grid, lo.max(f64::MIN_POSITIVE));
        let w_hi = wronskian(config, grid, hi);
        let energy = if w_lo * w_hi < 0.0 {
            let mut w_lo = w_lo;
            while hi - lo > ENERGY_TOLERANCE * hi.max(1.0) {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let w = wronskian(config, grid, mid);
                if w == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (w < 0.0) == (w_lo < 0.0) {
                    lo = mid;
                    w_lo = w;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        } else {
            bisect_count(lo, hi, j, |e| shooting_count(config, grid, e))
        };
        energies.push(energy);
        floor = energy;
    }
    OracleSpectrum {
        energies,
        grid: grid.clone(),
        method: OracleMethod::Shooting,
    }
}

/// One row of a cross-validation report; `None` where a method found no such level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelComparison {
    pub n: usize,
    pub transcendental: Option<f64>,
    pub finite_difference: Option<f64>,
    pub shooting: Option<f64>,
}

impl LevelComparison {
    /// Largest deviation of either oracle from the transcendental energy
    /// (infinite if any method is missing the level).
    pub fn max_delta(&self) -> f64 {
        match (self.transcendental, self.finite_difference, self.shooting) {
            (Some(t), Some(f), Some(s)) => (t - f).abs().max((t - s).abs()),
            _ => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub config: WellConfig,
    pub tolerance: f64,
    pub levels: Vec<LevelComparison>,
    pub transcendental_count: usize,
    pub fd_count: usize,
    pub shooting_count: usize,
}

impl ValidationReport {
    pub fn counts_agree(&self) -> bool {
        self.transcendental_count == self.fd_count && self.fd_count == self.shooting_count
    }

    pub fn max_delta(&self) -> f64 {
        self.levels
            .iter()
            .map(LevelComparison::max_delta)
            .fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.counts_agree() && self.max_delta() <= self.tolerance
    }
}

/// Truncation margin for cross-validation: the default, widened so that every
/// transcendental state keeps 40 decay lengths.
pub fn validation_margin(config: &WellConfig, slowest_decay: Option<f64>) -> f64 {
    let default = Grid::default_margin(config);
    match slowest_decay {
        Some(k) if k > 0.0 => default.max(DECAY_LENGTHS / k).min(1e6),
        _ => default,
    }
}

pub fn cross_validate(
    config: &WellConfig,
    tolerance: f64,
) -> Result<ValidationReport, OracleError> {
    cross_validate_with(config, tolerance, DEFAULT_POINTS)
}

/// Runs the transcendental solver and both oracles on a grid of `n_points`.
pub fn cross_validate_with(
    config: &WellConfig,
    tolerance: f64,
    n_points: usize,
) -> Result<ValidationReport, OracleError> {
    let spectrum = spectrum::energy_levels(config)?;
    let slowest = spectrum
        .states
        .iter()
        .map(|s| s.k1.min(s.k3))
        .reduce(f64::min);
    let grid = Grid::with_margin(config, validation_margin(config, slowest), n_points)?;
    let fd = eigen_fd(config, &grid);
    let shot = shoot_spectrum(config, &grid);

    let transcendental = spectrum.energies();
    let rows = transcendental
        .len()
        .max(fd.energies.len())
        .max(shot.energies.len());
    let levels = (0..rows)
        .map(|i| LevelComparison {
            n: i + 1,
            transcendental: transcendental.get(i).copied(),
            finite_difference: fd.energies.get(i).copied(),
            shooting: shot.energies.get(i).copied(),
        })
        .collect();
    let report = ValidationReport {
        config: *config,
        tolerance,
        levels,
        transcendental_count: transcendental.len(),
        fd_count: fd.energies.len(),
        shooting_count: shot.energies.len(),
    };
    if report.passed() {
        Ok(report)
    } else {
        Err(OracleError::ValidationMismatch(Box::new(report)))
    }
}

/// Parameter ranges of randomized verification. Masses, `V1` and `a` are drawn
/// log-uniformly, `ΔV` uniformly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomRanges {
    pub mass: (f64, f64),
    pub v1: (f64, f64),
    pub delta_v: (f64, f64),
    pub a: (f64, f64),
}

impl Default for RandomRanges {
    fn default() -> Self {
        Self {
            mass: (0.1, 10.0),
            v1: (0.5, 5.0),
            delta_v: (0.0, 5.0),
            a: (0.2, 5.0),
        }
    }
}

/// `count` reproducible configs drawn from `ranges` with a ChaCha8 stream.
pub fn random_configs(seed: u64, count: usize, ranges: &RandomRanges) -> Vec<WellConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log_uniform = |(lo, hi): (f64, f64)| -> f64 {
        let u: f64 = rng.random_range(lo.ln()..hi.ln());
        u.exp()
    };
    let mut draws = Vec::with_capacity(count);
    for _ in 0..count {
        let m1 = log_uniform(ranges.mass);
        let m2 = log_uniform(ranges.mass);
        let v1 = log_uniform(ranges.v1);
        let a = log_uniform(ranges.a);
        draws.push((m1, m2, v1, a));
    }
    let (dv_lo, dv_hi) = ranges.delta_v;
    draws
        .into_iter()
        .map(|(m1, m2, v1, a)| {
            let dv = rng.random_range(dv_lo..dv_hi);
            WellConfig::new(m1, m2, v1, v1 + dv, a).expect("ranges produce valid configs")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg(m1: f64, m2: f64, v1: f64, v2: f64, a: f64) -> WellConfig {
        WellConfig::new(m1, m2, v1, v2, a).unwrap()
    }

    #[test]
    fn grid_places_junctions_on_nodes() {
        let c = cfg(1.0, 2.0, 1.0, 2.0, 1.3);
        let g = Grid::new(&c, 4000).unwrap();
        let nodes = g.nodes();
        assert!(nodes.windows(2).all(|w| w[1] > w[0]));
        assert!(nodes.contains(&-1.3) && nodes.contains(&1.3));
        assert_eq!(nodes[g.origin_index()], 0.0);
        assert_abs_diff_eq!(g.x_min, -1.3 - Grid::default_margin(&c), epsilon = 1e-9);
        assert_abs_diff_eq!(g.x_max, 1.3 + Grid::default_margin(&c), epsilon = 1e-9);
        assert!((g.n_points as f64 - 4000.0).abs() < 10.0);
        // spacing is continuous across the junction
        let i = nodes.iter().position(|&x| x == 1.3).unwrap();
        let ratio = (nodes[i + 1] - nodes[i]) / (nodes[i] - nodes[i - 1]);
        assert!((ratio - 1.0).abs() < 1e-2, "{ratio}");
    }

    #[test]
    fn grid_rejects_small_sizes() {
        let c = cfg(1.0, 2.0, 1.0, 2.0, 1.0);
        assert_eq!(
            Grid::new(&c, 100).unwrap_err(),
            OracleError::TooFewPoints(100)
        );
        assert!(Grid::with_margin(&c, -1.0, 4000).is_err());
    }

    #[test]
    fn sturm_count_on_uniform_chain() {
        // m = 1, V = 0 everywhere with unit spacing: eigenvalues 2 − 2cos(jπ/(N+1))
        let c = cfg(1.0, 1.0, 1.0, 1.0, 1.0);
        let g = Grid::new(&c, 2000).unwrap();
        let pencil = Pencil::assemble(&c, &g);
        assert_eq!(pencil.count_below(0.0), 0);
        assert!(pencil.count_below(1e9) == pencil.stiffness.len());
    }

    #[test]
    fn fd_symmetric_constant_mass() {
        let c = cfg(1.0, 1.0, 2.0, 2.0, 1.0);
        let g = Grid::new(&c, 4000).unwrap();
        let s = eigen_fd(&c, &g);
        assert_eq!(s.energies.len(), 1);
        assert!((s.energies[0] - 0.792).abs() < 1e-3);
        assert_eq!(s.method, OracleMethod::FiniteDifference);
    }

    #[test]
    fn fd_infinite_well_limit() {
        // barrier penetration 1/k = 1e-4 shifts the level by ~0.02%
        let c = cfg(1.0, 1.0, 1e8, 1e8, 1.0);
        let g = Grid::new(&c, 20_000).unwrap();
        let lowest = fd_level(&c, &g, 0).unwrap();
        let exact = std::f64::consts::PI.powi(2) / 4.0;
        assert!((lowest - exact).abs() / exact < 1e-3, "{lowest}");
    }

    #[test]
    fn fd_asymmetric_step_mass() {
        let c = cfg(1.0, 2.0, 1.0, 2.0, 1.0);
        let g = Grid::new(&c, 4000).unwrap();
        let s = eigen_fd(&c, &g);
        assert_eq!(s.energies.len(), 1);
        assert!((s.energies[0] - 0.370_630_9).abs() < 1e-3);
    }

    #[test]
    fn fd_refinement_check() {
        let c = cfg(1.0, 2.0, 1.0, 2.0, 1.0);
        let g = Grid::new(&c, 4000).unwrap();
        assert!(eigen_fd_checked(&c, &g, 1e-4).is_ok());
        assert!(matches!(
            eigen_fd_checked(&c, &g, 1e-12),
            Err(OracleError::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn fd_is_second_order() {
        let c = cfg(1.0, 2.0, 1.0, 2.0, 1.0);
        let exact = 0.370_630_901_533_714;
        let e = |n: usize| eigen_fd(&c, &Grid::new(&c, n).unwrap()).energies[0];
        let err1 = (e(2000) - exact).abs();
        let err2 = (e(4000) - exact).abs();
        let ratio = err1 / err2;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn shooting_brackets_symmetric_levels() {
        let c = cfg(1.0, 5.0, 2.0, 2.0, 1.0);
        let g = Grid::new(&c, 16_000).unwrap();
        let levels = [0.182_276_523_08, 0.843_215_092_40, 1.996_729_208_26];
        for e in levels {
            assert!(shoot(&c, &g, e).unwrap().abs() < 1e-6);
        }
        let mid1 = shoot(&c, &g, 0.5 * (levels[0] + levels[1])).unwrap();
        let mid2 = shoot(&c, &g, 0.5 * (levels[1] + levels[2])).unwrap();
        assert!(mid1 * mid2 < 0.0);
        // no further sign change between the top level and the barrier
        let top = shoot(&c, &g, 1.999_9).unwrap();
        let above = shoot(&c, &g, 0.5 * (levels[2] + 2.0)).unwrap();
        assert!(top * above > 0.0);
        assert!(matches!(
            shoot(&c, &g, 2.5),
            Err(OracleError::EnergyOutOfRange(_))
        ));
    }

    #[test]
    fn shooting_spectrum_matches_fd() {
        // top level sits at E = 1.9967, decay length 17.5
        let c = cfg(1.0, 5.0, 2.0, 2.0, 1.0);
        let g = Grid::with_margin(&c, validation_margin(&c, Some(0.057)), 16_000).unwrap();
        let fd = eigen_fd(&c, &g);
        let sh = shoot_spectrum(&c, &g);
        assert_eq!(fd.energies.len(), 3);
        assert_eq!(sh.energies.len(), 3);
        for (f, s) in fd.energies.iter().zip(&sh.energies) {
            assert!((f - s).abs() < 1e-5, "{f} {s}");
        }
    }

    #[test]
    fn cross_validation_passes() {
        let report = cross_validate(&cfg(1.0, 2.0, 1.0, 2.0, 1.0), 1e-3).unwrap();
        assert_eq!(report.levels.len(), 1);
        let report = cross_validate(&cfg(1.0, 5.0, 2.0, 2.0, 1.0), 1e-3).unwrap();
        assert_eq!(report.levels.len(), 3);
        assert!(report.passed());
    }

    #[test]
    fn cross_validation_reports_mismatch() {
        match cross_validate(&cfg(1.0, 2.0, 1.0, 2.0, 1.0), 1e-15) {
            Err(OracleError::ValidationMismatch(report)) => {
                assert!(report.counts_agree());
                assert!(report.max_delta() > 1e-15);
            }
            other => panic!("expected mismatch, got {other:?}"),
        }
    }

    #[test]
    fn random_configs_are_reproducible() {
        let r = RandomRanges::default();
        let a = random_configs(42, 50, &r);
        assert_eq!(a, random_configs(42, 50, &r));
        assert_ne!(a, random_configs(43, 50, &r));
        for c in &a {
            assert!((0.1..=10.0).contains(&c.m1()) && (0.1..=10.0).contains(&c.m2()));
            assert!((0.5..=5.0).contains(&c.v1()));
            assert!((0.0..=5.0).contains(&c.delta_v()));
            assert!((0.2..=5.0).contains(&c.a()));
        }
    }
}
