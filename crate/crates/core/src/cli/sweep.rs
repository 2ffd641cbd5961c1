//! Parameter sweeps: spectrum as a function of one well parameter.

use std::fmt;
use std::str::FromStr;
use std::time::SystemTime;

use rayon::prelude::*;
use thiserror::Error;

use super::output::{sig12, CsvTable};
use super::svg::{LinePlot, Series};
use crate::model::{ModelError, RawConfig, WellConfig};
use crate::spectrum::{self, SpectrumError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("sweep range must satisfy start < stop, got {start} .. {stop}")]
    InvalidRange { start: f64, stop: f64 },
    #[error("sweep needs at least 2 steps, got {0}")]
    TooFewSteps(usize),
    #[error("invalid well at {parameter} = {value}: {source}")]
    Model {
        parameter: SweepParameter,
        value: f64,
        source: ModelError,
    },
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

impl SweepError {
    pub fn key(&self) -> Option<&'static str> {
        match self {
            SweepError::Model { source, .. } => source.key(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParameter {
    A,
    M1,
    M2,
    V1,
    V2,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::A => "a",
            SweepParameter::M1 => "m1",
            SweepParameter::M2 => "m2",
            SweepParameter::V1 => "V1",
            SweepParameter::V2 => "V2",
        }
    }

    fn apply(&self, raw: RawConfig, value: f64, constant_mass: bool) -> RawConfig {
        let mut raw = raw;
        match self {
            SweepParameter::A => raw.a = Some(value),
            SweepParameter::V1 => raw.v1 = Some(value),
            SweepParameter::V2 => raw.v2 = Some(value),
            SweepParameter::M1 | SweepParameter::M2 if constant_mass => {
                raw.m1 = Some(value);
                raw.m2 = Some(value);
            }
            SweepParameter::M1 => raw.m1 = Some(value),
            SweepParameter::M2 => raw.m2 = Some(value),
        }
        if constant_mass && !matches!(self, SweepParameter::M1 | SweepParameter::M2) {
            raw.m1 = raw.m2;
        }
        raw
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParameter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a" => Ok(SweepParameter::A),
            "m1" => Ok(SweepParameter::M1),
            "m2" => Ok(SweepParameter::M2),
            "V1" => Ok(SweepParameter::V1),
            "V2" => Ok(SweepParameter::V2),
            other => Err(format!(
                "unknown sweep parameter `{other}` (expected a, m1, m2, V1, V2)"
            )),
        }
    }
}

/// One parameter varied over `steps` evenly spaced values, the rest held fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub fixed: RawConfig,
    /// Ties `m1` to `m2` at every point (the constant-mass reference curves).
    pub constant_mass: bool,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        let span = self.stop - self.start;
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.stop
                } else {
                    self.start + span * i as f64 / last as f64
                }
            })
            .collect()
    }

    /// Validated well at every sweep point.
    pub fn configs(&self) -> Result<Vec<WellConfig>, SweepError> {
        if !(self.start < self.stop) {
            return Err(SweepError::InvalidRange {
                start: self.start,
                stop: self.stop,
            });
        }
        if self.steps < 2 {
            return Err(SweepError::TooFewSteps(self.steps));
        }
        self.values()
            .into_iter()
            .map(|value| {
                self.parameter
                    .apply(self.fixed, value, self.constant_mass)
                    .validate()
                    .map_err(|source| SweepError::Model {
                        parameter: self.parameter,
                        value,
                        source,
                    })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub count: usize,
    pub energies: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepMetadata {
    pub fixed: RawConfig,
    pub generated_at: SystemTime,
    pub version: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
    pub metadata: SweepMetadata,
}

/// Solves every sweep point in parallel; rows stay in parameter order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, SweepError> {
    let configs = spec.configs()?;
    let values = spec.values();
    let rows = configs
        .par_iter()
        .zip(values.par_iter())
        .map(|(config, &value)| {
            let s = spectrum::energy_levels(config)?;
            Ok(SweepRow {
                value,
                count: s.predicted_count,
                energies: s.energies(),
            })
        })
        .collect::<Result<Vec<_>, SweepError>>()?;
    Ok(SweepResult {
        spec: spec.clone(),
        rows,
        metadata: SweepMetadata {
            fixed: spec.fixed,
            generated_at: SystemTime::now(),
            version: env!("CARGO_PKG_VERSION"),
        },
    })
}

impl SweepResult {
    /// Long-format CSV, one line per (parameter value, level).
    pub fn to_csv(&self) -> CsvTable {
        let mut table = CsvTable::new(&["param", "n", "E"]);
        for row in &self.rows {
            for (i, e) in row.energies.iter().enumerate() {
                table.push_row([sig12(row.value), (i + 1).to_string(), sig12(*e)]);
            }
        }
        table
    }

    /// First sampled parameter value at which level `n` exists, for each `n`.
    pub fn appearance_points(&self) -> Vec<f64> {
        let mut points = Vec::new();
        for row in &self.rows {
            while points.len() < row.count {
                points.push(row.value);
            }
        }
        points
    }

    pub fn max_count(&self) -> usize {
        self.rows.iter().map(|r| r.count).max().unwrap_or(0)
    }

    /// Level curves as polylines, broken wherever a level is absent.
    pub fn series(&self, label: &str, dashed: bool) -> Vec<Series> {
        (0..self.max_count())
            .map(|level| {
                let mut segments: Vec<Vec<(f64, f64)>> = Vec::new();
                let mut current = Vec::new();
                for row in &self.rows {
                    match row.energies.get(level) {
                        Some(&e) => current.push((row.value, e)),
                        None if !current.is_empty() => segments.push(std::mem::take(&mut current)),
                        None => {}
                    }
                }
                if !current.is_empty() {
                    segments.push(current);
                }
                Series {
                    label: format!("{label} n={}", level + 1),
                    dashed,
                    segments,
                }
            })
            .collect()
    }

    pub fn to_plot(&self) -> LinePlot {
        LinePlot {
            title: format!("Bound-state energies vs {}", self.spec.parameter),
            x_label: self.spec.parameter.name().to_string(),
            y_label: "E".to_string(),
            series: self.series("", false),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn template() -> RawConfig {
        RawConfig {
            m1: Some(1.0),
            m2: Some(2.0),
            v1: Some(1.0),
            v2: Some(2.0),
            a: None,
        }
    }

    #[test]
    fn values_are_inclusive() {
        let spec = SweepSpec {
            parameter: SweepParameter::A,
            start: 0.0,
            stop: 1.0,
            steps: 5,
            fixed: template(),
            constant_mass: false,
        };
        assert_eq!(spec.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn rejects_bad_specs() {
        let mut spec = SweepSpec {
            parameter: SweepParameter::A,
            start: 1.0,
            stop: 0.5,
            steps: 5,
            fixed: template(),
            constant_mass: false,
        };
        assert!(matches!(
            spec.configs(),
            Err(SweepError::InvalidRange { .. })
        ));
        spec.stop = 2.0;
        spec.steps = 1;
        assert_eq!(spec.configs().unwrap_err(), SweepError::TooFewSteps(1));
        spec.steps = 3;
        spec.parameter = SweepParameter::V1;
        spec.fixed.a = Some(1.0);
        spec.start = 1.0;
        spec.stop = 3.0;
        let err = spec.configs().unwrap_err();
        assert_eq!(err.key(), Some("V2"));
    }

    #[test]
    fn width_sweep_finds_new_levels() {
        let spec = SweepSpec {
            parameter: SweepParameter::A,
            start: 0.05,
            stop: 2.5,
            steps: 50,
            fixed: template(),
            constant_mass: false,
        };
        let result = run_sweep(&spec).unwrap();
        assert_eq!(result.rows.len(), 50);
        let points = result.appearance_points();
        assert_eq!(points.len(), 3);
        assert!(points[0] > 0.2176 && points[0] - 0.2176 < 0.05);
        assert!(points[1] > 1.3283 && points[1] - 1.3283 < 0.05);
        let csv = result.to_csv();
        assert!(csv.into_string().starts_with("param,n,E\n"));
        let series = result.series("m2=2", false);
        assert_eq!(series.len(), 3);
        assert_eq!(series[2].segments.len(), 1);
    }

    #[test]
    fn constant_mass_ties_masses() {
        let spec = SweepSpec {
            parameter: SweepParameter::M2,
            start: 0.5,
            stop: 2.0,
            steps: 4,
            fixed: RawConfig {
                m1: None,
                m2: None,
                v1: Some(2.0),
                v2: Some(2.0),
                a: Some(1.0),
            },
            constant_mass: true,
        };
        for c in spec.configs().unwrap() {
            assert!(c.is_constant_mass());
        }
    }
}
