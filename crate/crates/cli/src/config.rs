//! Scan configuration: CLI flags merged over an optional key=value config
//! file. Every config key mirrors a long flag name; flags win on conflict.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use crate::config_error;

/// Which molecular system a command addresses.
#[derive(Debug, Clone, PartialEq)]
pub enum System {
    /// Hydrogen chain with 2, 4 or 6 atoms; bond flags give the spacing.
    HChain(usize),
    /// Integrals from FCIDUMP files (`--fcidump` or `--manifest`).
    Fcidump,
}

impl System {
    pub fn parse(s: &str) -> Result<System> {
        match s.to_ascii_lowercase().as_str() {
            "h2" => Ok(System::HChain(2)),
            "h4" => Ok(System::HChain(4)),
            "h6" => Ok(System::HChain(6)),
            "fcidump" => Ok(System::Fcidump),
            other => config_error(format!(
                "unknown system {other:?}; expected h2, h4, h6 or fcidump"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnsatzChoice {
    Qccsd,
    Uccsd,
    Both,
}

impl AnsatzChoice {
    pub fn parse(s: &str) -> Result<AnsatzChoice> {
        match s.to_ascii_lowercase().as_str() {
            "qccsd" => Ok(AnsatzChoice::Qccsd),
            "uccsd" => Ok(AnsatzChoice::Uccsd),
            "both" => Ok(AnsatzChoice::Both),
            other => config_error(format!(
                "unknown ansatz {other:?}; expected qccsd, uccsd or both"
            )),
        }
    }

    pub fn runs_qccsd(self) -> bool {
        matches!(self, AnsatzChoice::Qccsd | AnsatzChoice::Both)
    }

    pub fn runs_uccsd(self) -> bool {
        matches!(self, AnsatzChoice::Uccsd | AnsatzChoice::Both)
    }
}

/// Initial-parameter override.
#[derive(Debug, Clone, PartialEq)]
pub enum SeedParams {
    /// All-zero start (the Hartree-Fock point); the default.
    Zeros,
    /// One value broadcast to every parameter.
    Broadcast(f64),
    /// Explicit vector, length-checked against the parameter count.
    Explicit(Vec<f64>),
    /// Warm start each scan point from the previous point's optimum.
    Previous,
}

impl SeedParams {
    pub fn parse(s: &str) -> Result<SeedParams> {
        if s.eq_ignore_ascii_case("prev") {
            return Ok(SeedParams::Previous);
        }
        let values: std::result::Result<Vec<f64>, _> =
            s.split(',').map(|p| p.trim().parse::<f64>()).collect();
        match values {
            Ok(v) if v.len() == 1 => Ok(SeedParams::Broadcast(v[0])),
            Ok(v) if !v.is_empty() => Ok(SeedParams::Explicit(v)),
            _ => config_error(format!(
                "bad --seed-params value {s:?}; expected a number, a comma list, or `prev`"
            )),
        }
    }
}

/// Fully resolved scan configuration.
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub system: System,
    pub bond_start: f64,
    pub bond_stop: f64,
    pub bond_step: f64,
    pub ansatz: AnsatzChoice,
    pub frozen: usize,
    pub removed: usize,
    pub fcidump: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
    pub out_csv: Option<PathBuf>,
    pub out_svg: Option<PathBuf>,
    pub max_iters: usize,
    pub ftol: f64,
    pub jobs: usize,
    pub seed_params: SeedParams,
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        match self.system {
            System::HChain(_) => {
                if self.bond_step <= 0.0 {
                    return config_error("--bond-step must be positive");
                }
                if self.bond_start > self.bond_stop {
                    return config_error("--bond-start must not exceed --bond-stop");
                }
                if self.bond_start <= 0.0 {
                    return config_error("--bond-start must be positive");
                }
            }
            System::Fcidump => {
                if self.fcidump.is_none() && self.manifest.is_none() {
                    return config_error(
                        "system fcidump needs --fcidump FILE or --manifest FILE",
                    );
                }
                if self.fcidump.is_some() && self.manifest.is_some() {
                    return config_error("--fcidump and --manifest are mutually exclusive");
                }
            }
        }
        if self.jobs == 0 {
            return config_error("--jobs must be at least 1");
        }
        if self.jobs > 1 && self.seed_params == SeedParams::Previous {
            return config_error("--seed-params prev is sequential; use --jobs 1");
        }
        if self.ftol <= 0.0 {
            return config_error("--ftol must be positive");
        }
        Ok(())
    }

    /// Bond lengths of the scan grid, inclusive of the endpoint within half
    /// a step; `start == stop` yields exactly one point.
    pub fn bond_grid(&self) -> Vec<f64> {
        let mut grid = Vec::new();
        let mut k = 0usize;
        loop {
            let bond = self.bond_start + self.bond_step * k as f64;
            if bond > self.bond_stop + 0.5 * self.bond_step {
                break;
            }
            if bond <= self.bond_stop + 1e-12 {
                grid.push(bond);
            }
            k += 1;
            if k > 1_000_000 {
                break;
            }
        }
        if grid.is_empty() {
            grid.push(self.bond_start);
        }
        grid
    }
}

/// `key=value` pairs with optional `[section]` headers and `#` comments;
/// sections are organizational only, keys are flat and mirror long flags.
pub fn parse_config_file(path: &Path) -> Result<HashMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') && line.ends_with(']') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return config_error(format!(
                "{}:{}: expected key=value, got {line:?}",
                path.display(),
                lineno + 1
            ));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}
