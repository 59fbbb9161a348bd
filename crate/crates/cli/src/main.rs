//! `qccsd` — batch front door for the exchange-gate VQE engine.
//!
//! Exit codes: 0 success, 1 configuration error, 2 runtime failure.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use qccsd_cli::config::{
    parse_config_file, AnsatzChoice, ScanConfig, SeedParams, System,
};
use qccsd_cli::point::{
    evaluate_point, gate_counts, prepare_point, PointOptions, PointSource, PointSpec,
};
use qccsd_cli::scan::{run_scan, write_reports};
use qccsd_cli::{config_error, report, ConfigError};

#[derive(Parser)]
#[command(
    name = "qccsd",
    about = "Variational ground-state energies of small molecules with \
             exchange-gate (QCCSD) and Trotterized UCCSD ansatz circuits",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct SystemArgs {
    /// Molecular system: h2, h4, h6, or fcidump
    #[arg(long)]
    system: Option<String>,
    /// Bond length / chain spacing in Angstrom (scan start)
    #[arg(long)]
    bond_start: Option<f64>,
    /// Scan end, Angstrom
    #[arg(long)]
    bond_stop: Option<f64>,
    /// Scan step, Angstrom
    #[arg(long)]
    bond_step: Option<f64>,
    /// FCIDUMP file (system fcidump)
    #[arg(long)]
    fcidump: Option<PathBuf>,
    /// Manifest of `bond_length,path` FCIDUMP lines (system fcidump scans)
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Spatial orbitals frozen (doubly occupied) from the bottom
    #[arg(long)]
    frozen: Option<usize>,
    /// Spatial orbitals removed (kept empty) from the top
    #[arg(long)]
    removed: Option<usize>,
}

#[derive(Args, Clone, Default)]
struct VqeArgs {
    /// Ansatz: qccsd, uccsd, or both
    #[arg(long)]
    ansatz: Option<String>,
    /// Accepted-iteration cap
    #[arg(long)]
    max_iters: Option<usize>,
    /// Energy convergence threshold, Hartree
    #[arg(long)]
    ftol: Option<f64>,
    /// Initial parameters: a number (broadcast), comma list, or `prev`
    #[arg(long)]
    seed_params: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Single-point energies for one geometry or FCIDUMP
    Run {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        vqe: VqeArgs,
        /// Write the qubit Hamiltonian as text
        #[arg(long)]
        dump_hamiltonian: Option<PathBuf>,
        /// Write the optimized QCCSD statevector
        #[arg(long)]
        dump_state: Option<PathBuf>,
        /// Write the single-row CSV here instead of stdout
        #[arg(long)]
        out_csv: Option<PathBuf>,
        /// Write the VQE convergence trace CSV here
        #[arg(long)]
        trace_csv: Option<PathBuf>,
    },
    /// Bond-length scan with CSV (and optional SVG) output
    Scan {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        vqe: VqeArgs,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out_csv: Option<PathBuf>,
        /// Render a semilog error plot here
        #[arg(long)]
        out_svg: Option<PathBuf>,
        /// Concurrent scan points
        #[arg(long)]
        jobs: Option<usize>,
        /// key=value config file; command-line flags win on conflict
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Sector exact diagonalization only
    Exact {
        #[command(flatten)]
        system: SystemArgs,
        /// Write the qubit Hamiltonian as text
        #[arg(long)]
        dump_hamiltonian: Option<PathBuf>,
    },
    /// Parameter and gate-count audit
    Counts {
        #[command(flatten)]
        system: SystemArgs,
    },
    /// Build an FCIDUMP from a hydrogen XYZ geometry
    #[command(name = "gen-fcidump")]
    GenFcidump {
        /// Input XYZ file (hydrogen atoms only)
        xyz: PathBuf,
        /// Output FCIDUMP path
        output: PathBuf,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap handles --help/--version as "errors" with success status
            if err.use_stderr() {
                let _ = err.print();
                std::process::exit(1);
            }
            let _ = err.print();
            std::process::exit(0);
        }
    };
    if let Err(err) = dispatch(cli) {
        eprintln!("error: {err:#}");
        let code = if err.downcast_ref::<ConfigError>().is_some() {
            1
        } else {
            2
        };
        std::process::exit(code);
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            system,
            vqe,
            dump_hamiltonian,
            dump_state,
            out_csv,
            trace_csv,
        } => cmd_run(system, vqe, dump_hamiltonian, dump_state, out_csv, trace_csv),
        Command::Scan {
            system,
            vqe,
            out_csv,
            out_svg,
            jobs,
            config,
        } => cmd_scan(system, vqe, out_csv, out_svg, jobs, config),
        Command::Exact {
            system,
            dump_hamiltonian,
        } => cmd_exact(system, dump_hamiltonian),
        Command::Counts { system } => cmd_counts(system),
        Command::GenFcidump { xyz, output } => cmd_gen_fcidump(&xyz, &output),
    }
}

/// Resolve the single point a non-scan command addresses.
fn single_point(system: &SystemArgs) -> Result<PointSpec> {
    let name = system.system.as_deref().unwrap_or("h2");
    match System::parse(name)? {
        System::HChain(n_atoms) => {
            let bond = system.bond_start.unwrap_or(0.735);
            if bond <= 0.0 {
                return config_error("--bond-start must be positive");
            }
            Ok(PointSpec {
                bond_length: bond,
                source: PointSource::Chain {
                    n_atoms,
                    spacing: bond,
                },
            })
        }
        System::Fcidump => {
            let Some(path) = &system.fcidump else {
                return config_error("system fcidump needs --fcidump FILE");
            };
            Ok(PointSpec {
                bond_length: system.bond_start.unwrap_or(0.0),
                source: PointSource::Fcidump(path.clone()),
            })
        }
    }
}

fn point_options(system: &SystemArgs, vqe: &VqeArgs) -> Result<(PointOptions, SeedParams)> {
    let ansatz = match &vqe.ansatz {
        Some(s) => AnsatzChoice::parse(s)?,
        None => AnsatzChoice::Qccsd,
    };
    let seed = match &vqe.seed_params {
        Some(s) => SeedParams::parse(s)?,
        None => SeedParams::Zeros,
    };
    Ok((
        PointOptions {
            ansatz,
            frozen: system.frozen.unwrap_or(0),
            removed: system.removed.unwrap_or(0),
            max_iters: vqe.max_iters.unwrap_or(500),
            ftol: vqe.ftol.unwrap_or(1e-6),
        },
        seed,
    ))
}

fn cmd_run(
    system: SystemArgs,
    vqe: VqeArgs,
    dump_hamiltonian: Option<PathBuf>,
    dump_state: Option<PathBuf>,
    out_csv: Option<PathBuf>,
    trace_csv: Option<PathBuf>,
) -> Result<()> {
    let spec = single_point(&system)?;
    let (options, seed) = point_options(&system, &vqe)?;

    if let Some(path) = &dump_hamiltonian {
        let prepared = prepare_point(&spec.source, options.frozen, options.removed)?;
        std::fs::write(path, prepared.hamiltonian.to_text())
            .with_context(|| format!("cannot write {}", path.display()))?;
    }

    let outcome = evaluate_point(&spec, &options, &seed, None);
    if let Some(detail) = &outcome.detail {
        anyhow::bail!("point failed ({}): {detail}", outcome.status_label());
    }

    println!(
        "system {} | bond {:.4} A | {} parameters",
        system.system.as_deref().unwrap_or("h2"),
        outcome.bond_length,
        outcome.params.unwrap_or(0),
    );
    if let Some(e) = outcome.e_hf {
        println!("e_hf     = {e:.12} Ha");
    }
    if let Some(e) = outcome.e_fci {
        println!("e_fci    = {e:.12} Ha");
    }
    if let (Some(e), Some(f)) = (outcome.e_qccsd, outcome.e_fci) {
        println!(
            "e_qccsd  = {e:.12} Ha | err {:.3e} | iters {} | converged {}",
            (e - f).abs(),
            outcome.iters_q.unwrap_or(0),
            outcome.converged_q.unwrap_or(false)
        );
    }
    if let (Some(e), Some(f)) = (outcome.e_uccsd, outcome.e_fci) {
        println!(
            "e_uccsd  = {e:.12} Ha | err {:.3e} | iters {} | converged {}",
            (e - f).abs(),
            outcome.iters_u.unwrap_or(0),
            outcome.converged_u.unwrap_or(false)
        );
    }
    if let Some(overlap) = outcome.overlap_hf {
        println!("overlap_hf = {overlap:.6}");
    }
    println!("status = {}", outcome.status_label());

    if let Some(path) = &out_csv {
        let csv = report::csv_report(std::slice::from_ref(&outcome));
        std::fs::write(path, csv).with_context(|| format!("cannot write {}", path.display()))?;
    }
    if let Some(path) = &trace_csv {
        let result = outcome
            .qccsd_result
            .as_ref()
            .or(outcome.uccsd_result.as_ref());
        if let Some(result) = result {
            std::fs::write(path, qccsd_core::vqe::trace_to_csv(result))
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
    }
    if let Some(path) = &dump_state {
        let result = outcome
            .qccsd_result
            .as_ref()
            .or(outcome.uccsd_result.as_ref());
        if let Some(result) = result {
            let prepared = prepare_point(&spec.source, options.frozen, options.removed)?;
            let kind = if outcome.qccsd_result.is_some() {
                qccsd_core::vqe::AnsatzKind::Qccsd
            } else {
                qccsd_core::vqe::AnsatzKind::UccsdTrotter1
            };
            let problem = qccsd_core::vqe::VqeProblem::new(
                prepared.hamiltonian.clone(),
                prepared.reference,
                prepared.excitations.clone(),
                kind,
            )?;
            let psi = problem.prepare_state(&result.parameters)?;
            std::fs::write(path, psi.dump_nonzero(1e-12))
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
    }
    Ok(())
}

fn cmd_scan(
    system: SystemArgs,
    vqe: VqeArgs,
    out_csv: Option<PathBuf>,
    out_svg: Option<PathBuf>,
    jobs: Option<usize>,
    config_path: Option<PathBuf>,
) -> Result<()> {
    let file = match &config_path {
        Some(path) => parse_config_file(path)?,
        None => Default::default(),
    };
    // flags win over config-file keys, which win over defaults
    let from_file = |key: &str| file.get(key).cloned();
    let parse_f64 = |key: &str| -> Result<Option<f64>> {
        from_file(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| anyhow::Error::new(ConfigError(format!("config key {key}: bad number {v:?}"))))
            })
            .transpose()
    };
    let parse_usize = |key: &str| -> Result<Option<usize>> {
        from_file(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| anyhow::Error::new(ConfigError(format!("config key {key}: bad count {v:?}"))))
            })
            .transpose()
    };

    let system_name = system
        .system
        .clone()
        .or_else(|| from_file("system"))
        .unwrap_or_else(|| "h2".to_string());
    let parsed_system = System::parse(&system_name)?;

    let ansatz = match vqe.ansatz.clone().or_else(|| from_file("ansatz")) {
        Some(s) => AnsatzChoice::parse(&s)?,
        None => AnsatzChoice::Both,
    };
    let seed_params = match vqe.seed_params.clone().or_else(|| from_file("seed-params")) {
        Some(s) => SeedParams::parse(&s)?,
        None => SeedParams::Zeros,
    };

    let config = ScanConfig {
        system: parsed_system,
        bond_start: system
            .bond_start
            .or(parse_f64("bond-start")?)
            .unwrap_or(0.5),
        bond_stop: system
            .bond_stop
            .or(parse_f64("bond-stop")?)
            .unwrap_or(2.5),
        bond_step: system
            .bond_step
            .or(parse_f64("bond-step")?)
            .unwrap_or(0.25),
        ansatz,
        frozen: system.frozen.or(parse_usize("frozen")?).unwrap_or(0),
        removed: system.removed.or(parse_usize("removed")?).unwrap_or(0),
        fcidump: system
            .fcidump
            .clone()
            .or_else(|| from_file("fcidump").map(PathBuf::from)),
        manifest: system
            .manifest
            .clone()
            .or_else(|| from_file("manifest").map(PathBuf::from)),
        out_csv: out_csv.or_else(|| from_file("out-csv").map(PathBuf::from)),
        out_svg: out_svg.or_else(|| from_file("out-svg").map(PathBuf::from)),
        max_iters: vqe
            .max_iters
            .or(parse_usize("max-iters")?)
            .unwrap_or(500),
        ftol: vqe.ftol.or(parse_f64("ftol")?).unwrap_or(1e-6),
        jobs: jobs.or(parse_usize("jobs")?).unwrap_or(1),
        seed_params,
    };

    let outcomes = run_scan(&config)?;
    write_reports(&config, &outcomes)?;

    for outcome in &outcomes {
        if let Some(detail) = &outcome.detail {
            eprintln!(
                "point {:.4}: {} ({detail})",
                outcome.bond_length,
                outcome.status_label()
            );
        }
    }
    Ok(())
}

fn cmd_exact(system: SystemArgs, dump_hamiltonian: Option<PathBuf>) -> Result<()> {
    let spec = single_point(&system)?;
    let prepared = prepare_point(
        &spec.source,
        system.frozen.unwrap_or(0),
        system.removed.unwrap_or(0),
    )?;
    if let Some(path) = &dump_hamiltonian {
        std::fs::write(path, prepared.hamiltonian.to_text())
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    println!("energy_hartree,overlap_hf");
    println!("{:.12e},{:.6}", prepared.e_fci, prepared.overlap_hf);
    Ok(())
}

fn cmd_counts(system: SystemArgs) -> Result<()> {
    let spec = single_point(&system)?;
    let (params, exchange, elementary) = gate_counts(
        &spec.source,
        system.frozen.unwrap_or(0),
        system.removed.unwrap_or(0),
    )?;
    println!("params,exchange_gates,elementary_gates");
    println!("{params},{exchange},{elementary}");
    Ok(())
}

fn cmd_gen_fcidump(xyz: &PathBuf, output: &PathBuf) -> Result<()> {
    let text = std::fs::read_to_string(xyz)
        .with_context(|| format!("cannot read {}", xyz.display()))?;
    let geometry = qccsd_core::integrals::Geometry::from_xyz(&text)?;
    let mi = qccsd_core::integrals::hydrogen_mo_integrals(&geometry)?;
    let mut file = std::fs::File::create(output)
        .with_context(|| format!("cannot create {}", output.display()))?;
    qccsd_core::integrals::write_fcidump(&mi, &mut file)?;
    println!(
        "wrote {} (NORB={}, NELEC={}, MS2={})",
        output.display(),
        mi.n_spatial,
        mi.n_electrons(),
        mi.n_alpha as i64 - mi.n_beta as i64
    );
    Ok(())
}
