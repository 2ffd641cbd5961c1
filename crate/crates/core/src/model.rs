//! Domain types shared by the solvers.
//!
//! Units are fixed to ħ² = 2, so every wavenumber obeys `k² = m · (energy
//! difference)` with no extra constants. The well occupies `|x| < a` with mass
//! `m2` and zero potential inside; outside the mass is `m1` and the potential
//! is `V1` on the left and `V2` on the right.

use std::fmt;
use std::str::FromStr;

use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("barrier order violated: V2 ({v2}) must be >= V1 ({v1})")]
    BarrierOrder { v1: f64, v2: f64 },
    #[error("parameter `{name}` is not finite")]
    NonFinite { name: &'static str },
    #[error("config line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("config is missing key `{0}`")]
    MissingKey(&'static str),
}

impl ModelError {
    /// Name of the config key the error refers to, if any.
    pub fn key(&self) -> Option<&'static str> {
        match self {
            ModelError::NonPositiveParameter { name, .. } | ModelError::NonFinite { name } => {
                Some(name)
            }
            ModelError::BarrierOrder { .. } => Some("V2"),
            ModelError::MissingKey(k) => Some(k),
            ModelError::Parse { .. } => None,
        }
    }
}

/// Fixed unit system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units;

impl Units {
    pub const HBAR_SQUARED: f64 = 2.0;
}

/// Physical parameters of a step-mass square well.
///
/// Only obtainable through [`WellConfig::new`], which enforces
/// `m1, m2, a, V1 > 0` and `V2 >= V1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellConfig {
    m1: f64,
    m2: f64,
    v1: f64,
    v2: f64,
    a: f64,
}

impl WellConfig {
    pub fn new(m1: f64, m2: f64, v1: f64, v2: f64, a: f64) -> Result<Self, ModelError> {
        let fields = [("m1", m1), ("m2", m2), ("V1", v1), ("V2", v2), ("a", a)];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(ModelError::NonFinite { name });
            }
        }
        for (name, value) in [("m1", m1), ("m2", m2), ("V1", v1), ("a", a)] {
            if value <= 0.0 {
                return Err(ModelError::NonPositiveParameter { name, value });
            }
        }
        if v2 < v1 {
            return Err(ModelError::BarrierOrder { v1, v2 });
        }
        Ok(Self { m1, m2, v1, v2, a })
    }

    /// Symmetric well with barrier height `v` on both sides.
    pub fn symmetric(m1: f64, m2: f64, v: f64, a: f64) -> Result<Self, ModelError> {
        Self::new(m1, m2, v, v, a)
    }

    /// Re-runs validation on an existing config.
    pub fn validate(&self) -> Result<Self, ModelError> {
        Self::new(self.m1, self.m2, self.v1, self.v2, self.a)
    }

    pub fn m1(&self) -> f64 {
        self.m1
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }

    pub fn v1(&self) -> f64 {
        self.v1
    }

    pub fn v2(&self) -> f64 {
        self.v2
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `V2 - V1`, never negative.
    pub fn delta_v(&self) -> f64 {
        self.v2 - self.v1
    }

    pub fn is_symmetric(&self) -> bool {
        self.v1 == self.v2
    }

    pub fn is_constant_mass(&self) -> bool {
        self.m1 == self.m2
    }

    /// Largest inside wavenumber a bound state can have, `sqrt(m2 V1)`.
    pub fn k2_max(&self) -> f64 {
        (self.m2 * self.v1).sqrt()
    }

    /// Mass at position `x`. At exactly `x = ±a` the inside value is returned.
    pub fn mass_at(&self, x: f64) -> f64 {
        if x.abs() <= self.a {
            self.m2
        } else {
            self.m1
        }
    }

    /// Potential at position `x`. At exactly `x = ±a` the inside value is returned.
    pub fn potential_at(&self, x: f64) -> f64 {
        if x < -self.a {
            self.v1
        } else if x > self.a {
            self.v2
        } else {
            0.0
        }
    }

    /// Inside wavenumber and the two outside decay constants for energy `e`.
    pub fn wavenumbers(&self, e: f64) -> (f64, f64, f64) {
        let k1 = (self.m1 * (self.v1 - e)).max(0.0).sqrt();
        let k2 = (self.m2 * e).max(0.0).sqrt();
        let k3 = (self.m1 * (self.v2 - e)).max(0.0).sqrt();
        (k1, k2, k3)
    }

    pub fn with_a(&self, a: f64) -> Result<Self, ModelError> {
        Self::new(self.m1, self.m2, self.v1, self.v2, a)
    }

    pub fn with_m1(&self, m1: f64) -> Result<Self, ModelError> {
        Self::new(m1, self.m2, self.v1, self.v2, self.a)
    }

    pub fn with_m2(&self, m2: f64) -> Result<Self, ModelError> {
        Self::new(self.m1, m2, self.v1, self.v2, self.a)
    }

    pub fn with_v1(&self, v1: f64) -> Result<Self, ModelError> {
        Self::new(self.m1, self.m2, v1, self.v2, self.a)
    }

    pub fn with_v2(&self, v2: f64) -> Result<Self, ModelError> {
        Self::new(self.m1, self.m2, self.v1, v2, self.a)
    }
}

impl fmt::Display for WellConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "m1={} m2={} V1={} V2={} a={}",
            self.m1, self.m2, self.v1, self.v2, self.a
        )
    }
}

/// Raw, unvalidated parameter set as read from a config file or flags.
#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub m1: Option<f64>,
    pub m2: Option<f64>,
    #[serde(rename = "V1")]
    pub v1: Option<f64>,
    #[serde(rename = "V2")]
    pub v2: Option<f64>,
    pub a: Option<f64>,
}

impl RawConfig {
    /// Fills every field of `self` that is unset from `other`.
    pub fn or(self, other: RawConfig) -> RawConfig {
        RawConfig {
            m1: self.m1.or(other.m1),
            m2: self.m2.or(other.m2),
            v1: self.v1.or(other.v1),
            v2: self.v2.or(other.v2),
            a: self.a.or(other.a),
        }
    }

    pub fn validate(&self) -> Result<WellConfig, ModelError> {
        let m1 = self.m1.ok_or(ModelError::MissingKey("m1"))?;
        let m2 = self.m2.ok_or(ModelError::MissingKey("m2"))?;
        let v1 = self.v1.ok_or(ModelError::MissingKey("V1"))?;
        let v2 = self.v2.ok_or(ModelError::MissingKey("V2"))?;
        let a = self.a.ok_or(ModelError::MissingKey("a"))?;
        WellConfig::new(m1, m2, v1, v2, a)
    }
}

impl From<WellConfig> for RawConfig {
    fn from(c: WellConfig) -> Self {
        RawConfig {
            m1: Some(c.m1),
            m2: Some(c.m2),
            v1: Some(c.v1),
            v2: Some(c.v2),
            a: Some(c.a),
        }
    }
}

/// Parses the flat `key = value` config format (a TOML subset).
///
/// Keys are `m1`, `m2`, `V1`, `V2` and `a`; `#` starts a comment. Unknown or
/// repeated keys are errors. Missing keys are left unset so that command-line
/// flags can supply them.
impl FromStr for RawConfig {
    type Err = ModelError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        toml::from_str(text).map_err(|e: toml::de::Error| {
            let line = e
                .span()
                .map_or(1, |span| text[..span.start].matches('\n').count() + 1);
            ModelError::Parse {
                line,
                message: e.message().to_string(),
            }
        })
    }
}

/// Exponents of the symmetrized kinetic operator
/// `T = (m^α p m^β p m^γ + m^γ p m^β p m^α) / 4`.
///
/// Only the default ordering `α = γ = -1/2, β = 0` is used by the solvers; it
/// is the unique choice that removes the `m''/m` and `m'^2/m^2` terms from the
/// equation for `φ = ψ / sqrt(m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KineticOrdering {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl Default for KineticOrdering {
    fn default() -> Self {
        Self {
            alpha: -0.5,
            beta: 0.0,
            gamma: -0.5,
        }
    }
}

impl KineticOrdering {
    /// Returns `None` unless `alpha + beta + gamma = -1`.
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Option<Self> {
        ((alpha + beta + gamma + 1.0).abs() < 1e-12).then_some(Self { alpha, beta, gamma })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `η = α(γ+2) + γ(α+2)`, the coefficient of `−m'^2/(2m^2)` in the
    /// expanded equation for ψ.
    pub fn eta(&self) -> f64 {
        self.alpha * (self.gamma + 2.0) + self.gamma * (self.alpha + 2.0)
    }

    /// `ν = α + γ`
    pub fn nu(&self) -> f64 {
        self.alpha + self.gamma
    }

    /// Coefficient of `m''/(2m)` in the equation for `φ`.
    pub fn second_derivative_coefficient(&self) -> f64 {
        1.0 + self.nu()
    }

    /// Coefficient of `m'^2/m^2` in the equation for `φ`.
    pub fn squared_gradient_coefficient(&self) -> f64 {
        0.75 + 0.5 * self.eta()
    }

    /// True when both singular terms vanish at a mass step.
    pub fn removes_step_singularities(&self) -> bool {
        self.second_derivative_coefficient() == 0.0 && self.squared_gradient_coefficient() == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
    /// Asymmetric well, no parity.
    None,
}

impl Parity {
    pub fn token(&self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::None => "-",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// One bound state of a well.
///
/// The wavefunction is `A e^{k1 x}` for `x < -a`, `C sin(k2 x + θ)` inside and
/// `B e^{-k3 x}` for `x > a`. Amplitudes are normalized so that `∫ψ² = 1` with
/// `C > 0`; `theta` lies in `[0, π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub n: usize,
    pub energy: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub theta: f64,
    pub amp_a: f64,
    pub amp_b: f64,
    pub amp_c: f64,
    pub parity: Parity,
}
