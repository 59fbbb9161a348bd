//! Bond-length scans: grid construction, optional parallel evaluation,
//! ordered report emission.

use std::path::Path;

use anyhow::{Context, Result};

use crate::config::{ScanConfig, SeedParams, System};
use crate::point::{evaluate_point, PointOptions, PointOutcome, PointSource, PointSpec};
use crate::{config_error, report};

/// Expand a scan configuration into its point list.
pub fn scan_points(config: &ScanConfig) -> Result<Vec<PointSpec>> {
    match &config.system {
        System::HChain(n_atoms) => Ok(config
            .bond_grid()
            .into_iter()
            .map(|bond| PointSpec {
                bond_length: bond,
                source: PointSource::Chain {
                    n_atoms: *n_atoms,
                    spacing: bond,
                },
            })
            .collect()),
        System::Fcidump => {
            if let Some(path) = &config.fcidump {
                return Ok(vec![PointSpec {
                    bond_length: 0.0,
                    source: PointSource::Fcidump(path.clone()),
                }]);
            }
            let manifest = config.manifest.as_ref().expect("validated");
            parse_manifest(manifest)
        }
    }
}

/// Manifest format: one `bond_length,path` line per point; `#` comments
/// and blank lines allowed. Paths are relative to the manifest's directory.
pub fn parse_manifest(path: &Path) -> Result<Vec<PointSpec>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read manifest {}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut specs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some((bond, file)) = line.split_once(',') else {
            return config_error(format!(
                "{}:{}: expected `bond_length,path`",
                path.display(),
                lineno + 1
            ));
        };
        let bond: f64 = match bond.trim().parse() {
            Ok(v) => v,
            Err(_) => {
                return config_error(format!(
                    "{}:{}: bad bond length {bond:?}",
                    path.display(),
                    lineno + 1
                ))
            }
        };
        let file = file.trim();
        let resolved = if Path::new(file).is_absolute() {
            file.into()
        } else {
            base.join(file)
        };
        specs.push(PointSpec {
            bond_length: bond,
            source: PointSource::Fcidump(resolved),
        });
    }
    if specs.is_empty() {
        return config_error(format!("manifest {} lists no points", path.display()));
    }
    Ok(specs)
}

/// Evaluate every point and return outcomes in grid order.
pub fn run_scan(config: &ScanConfig) -> Result<Vec<PointOutcome>> {
    config.validate()?;
    let specs = scan_points(config)?;
    let options = PointOptions {
        ansatz: config.ansatz,
        frozen: config.frozen,
        removed: config.removed,
        max_iters: config.max_iters,
        ftol: config.ftol,
    };

    let outcomes: Vec<PointOutcome> = if config.seed_params == SeedParams::Previous {
        // warm starts chain sequentially through the grid
        let mut previous_q = None;
        let mut previous_u = None;
        let mut out = Vec::with_capacity(specs.len());
        for spec in &specs {
            let warm = previous_q.as_ref().or(previous_u.as_ref());
            let outcome = evaluate_point(spec, &options, &config.seed_params, warm);
            previous_q = outcome
                .qccsd_result
                .as_ref()
                .map(|r| r.parameters.clone());
            previous_u = outcome
                .uccsd_result
                .as_ref()
                .map(|r| r.parameters.clone());
            out.push(outcome);
        }
        out
    } else if config.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .context("cannot build worker pool")?;
        pool.install(|| {
            use rayon::prelude::*;
            specs
                .par_iter()
                .map(|spec| evaluate_point(spec, &options, &config.seed_params, None))
                .collect()
        })
    } else {
        specs
            .iter()
            .map(|spec| evaluate_point(spec, &options, &config.seed_params, None))
            .collect()
    };

    Ok(outcomes)
}

/// Write the CSV (and optional SVG) products of a finished scan.
pub fn write_reports(config: &ScanConfig, outcomes: &[PointOutcome]) -> Result<()> {
    let csv = report::csv_report(outcomes);
    match &config.out_csv {
        Some(path) => std::fs::write(path, &csv)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{csv}"),
    }
    if let Some(path) = &config.out_svg {
        std::fs::write(path, report::error_plot_svg(outcomes))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}
