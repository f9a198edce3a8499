use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown parameter `{0}`")]
    Unknown(String),
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: String, reason: String },
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: expected `key = value`")]
    Syntax { path: String, line: usize },
}

fn invalid(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        reason: reason.into(),
    }
}

/// Every settable parameter with its help text.
pub const KEYS: &[(&str, &str)] = &[
    ("model", "decay | dephasing_thermal | dephasing_engineered (sweep)"),
    ("observable", "pm (σ⁺σ⁻) | zz (σ_zσ_z) (sweep)"),
    ("state", "initial qubit state: excited | ground | plus"),
    ("leg", "map used between insertions: restart | ratio"),
    ("amplitude", "decay amplitude source: closed | volterra"),
    ("omega0", "qubit frequency ω₀"),
    ("lambda", "bath width or cutoff λ"),
    ("delta", "detuning Δ of the Lorentzian peak"),
    ("beta", "inverse temperature β of the Ohmic bath"),
    ("omega_bar", "mean photon frequency ω̄"),
    ("delta_max", "maximal half-separation δ_max of the two peaks"),
    ("sigma", "width σ of each peak"),
    ("delta_n", "birefringence Δn"),
    ("gamma0", "single coupling value (sets the γ₀ grid to one point)"),
    ("gamma0_min", "γ₀ grid start"),
    ("gamma0_max", "γ₀ grid end"),
    ("gamma0_count", "γ₀ grid points"),
    ("t1", "first insertion time of fig1"),
    ("t_min", "first-time grid start (sweep)"),
    ("t_max", "first-time grid end (sweep)"),
    ("t_count", "first-time grid points (sweep)"),
    ("tau_min", "delay grid start"),
    ("tau_max", "delay grid end"),
    ("tau_count", "delay grid points"),
    ("dt", "Volterra step"),
    ("measure_t_max", "horizon of the BLP and RHP integrals (default π/(2σΔn))"),
    ("measure_dt", "time step of the BLP and RHP grids"),
    ("eps_step", "step of the intermediate maps in the RHP rate"),
    ("oracle_n", "bath modes of the decay oracle"),
    ("quad_abs_tol", "absolute quadrature tolerance"),
    ("quad_rel_tol", "relative quadrature tolerance"),
    ("run_id", "label echoed in the metadata"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Fig1,
    Fig2,
    Sweep,
    Check,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Fig1 => "fig1",
            Command::Fig2 => "fig2",
            Command::Sweep => "sweep",
            Command::Check => "check",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let span = self.max - self.min;
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| if k + 1 == self.count { self.max } else { self.min + span * k as f64 / last })
            .collect()
    }
}

/// Resolved parameters of one run. Unset keys take the command's defaults.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    values: BTreeMap<&'static str, String>,
}

fn canonical(key: &str) -> Option<&'static str> {
    let k = key.replace('-', "_");
    KEYS.iter().map(|(name, _)| *name).find(|name| *name == k)
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            values: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let key = canonical(key).ok_or_else(|| ConfigError::Unknown(key.to_string()))?;
        if key == "gamma0" {
            for k in ["gamma0_min", "gamma0_max"] {
                self.values.insert(k, value.trim().to_string());
            }
            self.values.insert("gamma0_count", "1".to_string());
        } else {
            self.values.insert(key, value.trim().to_string());
        }
        Ok(())
    }

    /// Reads `key = value` lines; blank lines and `#` comments are skipped.
    pub fn load_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let shown = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: shown.clone(),
            source,
        })?;
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax {
                path: shown.clone(),
                line: n + 1,
            })?;
            self.set(k.trim(), v)?;
        }
        Ok(())
    }

    fn raw(&self, key: &'static str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn default_of(&self, key: &'static str) -> Option<String> {
        let model = self.model().ok();
        let s = match (key, self.command) {
            ("model", Command::Fig2) => "dephasing_engineered",
            ("model", _) => "decay",
            ("observable", _) => "pm",
            ("state", _) => match model {
                Some("decay") | None => "excited",
                _ => "plus",
            },
            ("leg", _) => "restart",
            ("amplitude", _) => "closed",
            ("omega0", _) => "20",
            ("lambda", _) => match model {
                Some("dephasing_thermal") => "1",
                _ => "1.1",
            },
            ("delta", _) => "0.2",
            ("beta", _) => "10",
            ("omega_bar", _) => "1",
            ("delta_max", _) => "0.5",
            ("sigma", _) => "0.1",
            ("delta_n", _) => "1",
            ("gamma0_min", _) => "0",
            ("gamma0_max", _) => "1",
            ("gamma0_count", Command::Sweep | Command::Check) => "5",
            ("gamma0_count", _) => "101",
            ("t1", _) => "0.1",
            ("t_min", _) => "0",
            ("t_max", _) => "10",
            ("t_count", _) => "11",
            ("tau_min", _) => "0",
            ("tau_max", Command::Fig1) => "4",
            ("tau_max", _) => "10",
            ("tau_count", Command::Fig1) => "101",
            ("tau_count", _) => "11",
            ("dt", _) => "0.001",
            ("measure_t_max", _) => {
                let (sigma, dn) = (self.f64("sigma").ok()?, self.f64("delta_n").ok()?);
                return Some(format!("{}", PI / (2.0 * sigma * dn.abs())));
            }
            ("measure_dt", _) => "0.05",
            ("eps_step", _) => "0.001",
            ("oracle_n", _) => "512",
            ("quad_abs_tol", _) => "1e-10",
            ("quad_rel_tol", _) => "1e-9",
            _ => return None,
        };
        Some(s.to_string())
    }

    fn get(&self, key: &'static str) -> Option<String> {
        self.raw(key).map(str::to_string).or_else(|| self.default_of(key))
    }

    pub fn text(&self, key: &'static str) -> Result<String, ConfigError> {
        self.get(key).ok_or_else(|| invalid(key, "missing"))
    }

    pub fn f64(&self, key: &'static str) -> Result<f64, ConfigError> {
        let s = self.text(key)?;
        let v: f64 = s.parse().map_err(|_| invalid(key, format!("`{s}` is not a number")))?;
        if !v.is_finite() {
            return Err(invalid(key, "must be finite"));
        }
        Ok(v)
    }

    pub fn usize(&self, key: &'static str) -> Result<usize, ConfigError> {
        let s = self.text(key)?;
        s.parse().map_err(|_| invalid(key, format!("`{s}` is not a nonnegative integer")))
    }

    pub fn positive(&self, key: &'static str) -> Result<f64, ConfigError> {
        let v = self.f64(key)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(invalid(key, "must be > 0"))
        }
    }

    pub fn choice(&self, key: &'static str, allowed: &[&'static str]) -> Result<&'static str, ConfigError> {
        let s = self.text(key)?;
        allowed
            .iter()
            .find(|a| **a == s)
            .copied()
            .ok_or_else(|| invalid(key, format!("`{s}` is not one of {}", allowed.join(", "))))
    }

    pub fn model(&self) -> Result<&'static str, ConfigError> {
        let s = self.raw("model").unwrap_or(match self.command {
            Command::Fig2 => "dephasing_engineered",
            _ => "decay",
        });
        ["decay", "dephasing_thermal", "dephasing_engineered"]
            .into_iter()
            .find(|a| *a == s)
            .ok_or_else(|| invalid("model", format!("`{s}` is not one of decay, dephasing_thermal, dephasing_engineered")))
    }

    pub fn grid(&self, prefix: &'static str) -> Result<Grid, ConfigError> {
        let (kmin, kmax, kcount) = match prefix {
            "gamma0" => ("gamma0_min", "gamma0_max", "gamma0_count"),
            "t" => ("t_min", "t_max", "t_count"),
            "tau" => ("tau_min", "tau_max", "tau_count"),
            _ => unreachable!("no grid named {prefix}"),
        };
        let g = Grid {
            min: self.f64(kmin)?,
            max: self.f64(kmax)?,
            count: self.usize(kcount)?,
        };
        if g.count == 0 {
            return Err(invalid(kcount, "must be ≥ 1"));
        }
        if g.max < g.min {
            return Err(invalid(kmax, format!("must be ≥ {kmin}")));
        }
        Ok(g)
    }

    pub fn run_id(&self) -> Option<&str> {
        self.raw("run_id")
    }

    /// Resolved `key = value` pairs for the keys listed, in order.
    pub fn echo(&self, keys: &[&'static str]) -> Vec<(String, String)> {
        let mut out = vec![("command".to_string(), self.command.name().to_string())];
        for &k in keys {
            if let Some(v) = self.get(k) {
                out.push((k.to_string(), v));
            }
        }
        out
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_exact() {
        let g = Grid { min: 0.0, max: 1.0, count: 101 };
        let v = g.values();
        assert_eq!(v.len(), 101);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[100], 1.0);
        assert_eq!(Grid { min: 0.3, max: 0.3, count: 1 }.values(), vec![0.3]);
    }

    #[test]
    fn dashes_and_underscores_agree() {
        let mut c = RunConfig::new(Command::Fig1);
        c.set("gamma0-count", "7").unwrap();
        assert_eq!(c.usize("gamma0_count").unwrap(), 7);
        assert!(matches!(c.set("nope", "1"), Err(ConfigError::Unknown(_))));
    }

    #[test]
    fn single_gamma0() {
        let mut c = RunConfig::new(Command::Fig1);
        c.set("gamma0", "0.25").unwrap();
        let g = c.grid("gamma0").unwrap();
        assert_eq!(g.values(), vec![0.25]);
    }

    #[test]
    fn model_dependent_defaults() {
        let mut c = RunConfig::new(Command::Sweep);
        assert_eq!(c.f64("lambda").unwrap(), 1.1);
        c.set("model", "dephasing_thermal").unwrap();
        assert_eq!(c.f64("lambda").unwrap(), 1.0);
        assert_eq!(c.text("state").unwrap(), "plus");
        let f = RunConfig::new(Command::Fig2);
        assert!((f.f64("measure_t_max").unwrap() - 5.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn bad_values_name_the_field() {
        let mut c = RunConfig::new(Command::Fig1);
        c.set("tau_count", "x").unwrap();
        let e = c.grid("tau").unwrap_err().to_string();
        assert!(e.contains("tau_count"), "{e}");
        c.set("tau_count", "0").unwrap();
        assert!(c.grid("tau").is_err());
    }
}
