//! Experiment selection and parameter resolution.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Experiment {
    GupSurface,
    SpinPrecession,
    TwoSpinEntropy,
    ThreeSpin,
    FreePacket,
    Oscillator,
    TransformsVerify,
    TheoremA1,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::GupSurface,
        Experiment::SpinPrecession,
        Experiment::TwoSpinEntropy,
        Experiment::ThreeSpin,
        Experiment::FreePacket,
        Experiment::Oscillator,
        Experiment::TransformsVerify,
        Experiment::TheoremA1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::GupSurface => "gup-surface",
            Experiment::SpinPrecession => "spin-precession",
            Experiment::TwoSpinEntropy => "two-spin-entropy",
            Experiment::ThreeSpin => "three-spin",
            Experiment::FreePacket => "free-packet",
            Experiment::Oscillator => "oscillator",
            Experiment::TransformsVerify => "transforms-verify",
            Experiment::TheoremA1 => "theorem-a1",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Experiment::GupSurface => "time-frequency uncertainty bound and its saturation",
            Experiment::SpinPrecession => "Larmor frequency of a single spin against omega0",
            Experiment::TwoSpinEntropy => "entanglement entropy of two coupled spins",
            Experiment::ThreeSpin => "entanglement induced between three free spins",
            Experiment::FreePacket => "free Gaussian packet: density, velocity and spread",
            Experiment::Oscillator => "coherent state of the harmonic oscillator",
            Experiment::TransformsVerify => {
                "frequency, continuous-time and lattice representations"
            }
            Experiment::TheoremA1 => "function transfer between commuting operators",
        }
    }

    /// Default parameters, in the order they are printed.
    pub fn defaults(self) -> Vec<(&'static str, f64)> {
        match self {
            Experiment::GupSurface => vec![
                ("kappa", 1.0),
                ("delta_omega_min", 0.05),
                ("delta_omega_max", 5.0),
                ("delta_omega_points", 200.0),
                ("mean_omega_max", 2.0),
                ("mean_omega_points", 5.0),
                ("ml_states", 9.0),
                ("random_states", 20.0),
                ("grid_points", 4096.0),
            ],
            Experiment::SpinPrecession => vec![
                ("kappa", 1.0),
                ("hbar", 1.0),
                ("omega0_min", 1e-2),
                ("omega0_max", 1e9),
                ("points", 221.0),
                ("samples", 64.0),
            ],
            Experiment::TwoSpinEntropy => vec![
                ("kappa", 0.01),
                ("hbar", 1.0),
                ("theta", PI / 4.0),
                ("lambda", 10.0),
                ("omega0", 1.0),
                ("k_b", 1.0),
                ("tau_max", 3.0),
                ("points", 1000.0),
            ],
            Experiment::ThreeSpin => vec![
                ("kappa", 0.1),
                ("hbar", 1.0),
                ("omega0", 2.0),
                ("theta_1", 0.5),
                ("theta_2", 1.9),
                ("theta_3", 1.2),
                ("phi_1", 0.1),
                ("phi_2", -0.7),
                ("phi_3", 2.0),
                ("k_b", 1.0),
                ("points", 200.0),
            ],
            Experiment::FreePacket => vec![
                ("hbar", 1.0),
                ("p0", 3.0),
                ("delta_p", std::f64::consts::FRAC_1_SQRT_2),
                ("grid_points", 4096.0),
                ("density_mass", 1.0),
                ("density_kappa", 0.005),
                ("density_tau_step", 2.0),
                ("density_snapshots", 4.0),
                ("x_min", -10.0),
                ("x_max", 30.0),
                ("x_points", 801.0),
                ("dynamics_mass", 2.0),
                ("dynamics_kappa", 0.1),
                ("tau_max", 10.0),
                ("tau_points", 11.0),
                ("p0_max", 40.0),
                ("p0_points", 161.0),
            ],
            Experiment::Oscillator => vec![
                ("kappa", 0.01),
                ("hbar", 1.0),
                ("mass", 1.0),
                ("omega", 2.0 * PI / 3.0),
                ("x0", 1.0),
                ("p0", 0.0),
                ("n_max", 60.0),
                ("x_min", -4.0),
                ("x_max", 4.0),
                ("x_points", 321.0),
                ("tau_step", 0.5),
                ("snapshots", 8.0),
                ("coherence_tau_max", 3.0),
                ("coherence_points", 13.0),
            ],
            Experiment::TransformsVerify => vec![
                ("kappa", 0.05),
                ("lambda", 0.3),
                ("states", 10.0),
                ("n_max", 64.0),
                ("off_lattice_points", 10.0),
                ("hamiltonian_dim", 4.0),
                ("lattice_steps", 5.0),
            ],
            Experiment::TheoremA1 => vec![("trials", 50.0), ("dim", 6.0)],
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                CliError::Usage(format!("unknown experiment `{s}` (see `mintime-qm list`)"))
            })
    }
}

/// Resolved numeric parameters of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    values: BTreeMap<String, f64>,
}

impl Params {
    pub fn defaults(experiment: Experiment) -> Self {
        Self {
            values: experiment
                .defaults()
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        }
    }

    pub fn set(&mut self, key: &str, value: f64) -> Result<(), CliError> {
        match self.values.get_mut(key) {
            Some(slot) => {
                if !value.is_finite() {
                    return Err(CliError::Usage(format!("parameter `{key}` must be finite")));
                }
                *slot = value;
                Ok(())
            }
            None => Err(CliError::Usage(format!("unknown parameter `{key}`"))),
        }
    }

    pub fn get(&self, key: &str) -> f64 {
        self.values[key]
    }

    /// A parameter that must be a non-negative integer of at least `min`.
    pub fn count(&self, key: &str, min: usize) -> Result<usize, CliError> {
        let v = self.get(key);
        if v.fract() != 0.0 || v < min as f64 || v > 1e9 {
            return Err(CliError::Usage(format!(
                "parameter `{key}` = {v} must be an integer >= {min}"
            )));
        }
        Ok(v as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.values.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn as_map(&self) -> &BTreeMap<String, f64> {
        &self.values
    }
}

/// Everything needed to run one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub params: Params,
    pub output_dir: PathBuf,
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 20240917;

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            params: Params::defaults(experiment),
            output_dir: PathBuf::from("out"),
            seed: DEFAULT_SEED,
        }
    }

    /// Applies a flat TOML table of numbers.
    pub fn apply_toml(&mut self, text: &str) -> Result<(), CliError> {
        let table: toml::Table =
            toml::from_str(text).map_err(|e| CliError::Usage(format!("config file: {e}")))?;
        for (key, value) in table {
            let v = match value {
                toml::Value::Float(f) => f,
                toml::Value::Integer(i) => i as f64,
                other => {
                    return Err(CliError::Usage(format!(
                        "config key `{key}` must be a number, found {}",
                        other.type_str()
                    )))
                }
            };
            self.params.set(&key, v)?;
        }
        Ok(())
    }

    pub fn apply_toml_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        self.apply_toml(&text)
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), CliError> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected key=value, got `{assignment}`")))?;
        let v: f64 = value.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "parameter `{}`: `{value}` is not a number",
                key.trim()
            ))
        })?;
        self.params.set(key.trim(), v)
    }
}

/// Defaults of every experiment as TOML sections.
pub fn defaults_toml() -> String {
    let mut out = String::new();
    for e in Experiment::ALL {
        out.push_str(&format!("[{}]\n", e.name()));
        for (k, v) in e.defaults() {
            out.push_str(&format!("{k} = {v:?}\n"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for e in Experiment::ALL {
            assert_eq!(e.name().parse::<Experiment>().unwrap(), e);
        }
        assert!(matches!(
            "nope".parse::<Experiment>(),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn unknown_keys_are_named() {
        let mut c = ExperimentConfig::new(Experiment::Oscillator);
        let err = c.apply_override("kapa=0.1").unwrap_err();
        assert!(err.to_string().contains("kapa"));
        let err = c.apply_toml("omgea = 2.0").unwrap_err();
        assert!(err.to_string().contains("omgea"));
    }

    #[test]
    fn overrides_follow_file() {
        let mut c = ExperimentConfig::new(Experiment::Oscillator);
        c.apply_toml("kappa = 0.02\nn_max = 80").unwrap();
        c.apply_override("kappa=0.03").unwrap();
        assert_eq!(c.params.get("kappa"), 0.03);
        assert_eq!(c.params.count("n_max", 1).unwrap(), 80);
    }

    #[test]
    fn rejects_bad_values() {
        let mut c = ExperimentConfig::new(Experiment::TheoremA1);
        assert!(c.apply_override("trials").is_err());
        assert!(c.apply_override("trials=abc").is_err());
        assert!(c.apply_override("trials=inf").is_err());
        assert!(c.apply_toml("trials = \"ten\"").is_err());
        c.apply_override("trials=2.5").unwrap();
        assert!(c.params.count("trials", 1).is_err());
    }

    #[test]
    fn defaults_parse_back() {
        let text = defaults_toml();
        let parsed: toml::Table = toml::from_str(&text).unwrap();
        for e in Experiment::ALL {
            let section = parsed[e.name()].as_table().unwrap();
            let mut c = ExperimentConfig::new(e);
            let body = toml::to_string(section).unwrap();
            c.apply_toml(&body).unwrap();
            assert_eq!(c.params, Params::defaults(e));
        }
    }
}
