//! Batch experiment runner. Each invocation executes one experiment from a
//! config file plus flag overrides and writes a JSON report.

use clap::{Args, Parser, Subcommand};
use flagqec::experiment::{
    run_experiment, validate_report, ExperimentConfig, ExperimentKind, LayoutChoice,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "flagqec",
    version,
    about = "Flag-based fault-tolerance benchmarking for the [[5,1,3]] code"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// TOML or JSON experiment configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Builtin device name (melbourne, vigo) or device JSON path.
    #[arg(long)]
    device: Option<String>,
    /// Initial layout: A, B, C, or a comma-separated physical qubit list.
    #[arg(long)]
    layout: Option<String>,
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replicas: Option<usize>,
    /// Enable the device noise model.
    #[arg(long)]
    noise: bool,
    /// Apply calibration-matrix readout mitigation.
    #[arg(long)]
    mitigate: bool,
    /// Use exact infinite-shot distributions instead of sampling.
    #[arg(long)]
    exact: bool,
    /// Report output path (defaults to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for internal parallelism.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// State-preparation experiments: prep, prep-plus-idles, prep-plus-stabilizer.
    Simulate {
        /// prep | prep-plus-idles | prep-plus-stabilizer
        #[arg(long, default_value = "prep")]
        experiment: String,
        /// Idle cycles for prep-plus-idles.
        #[arg(long)]
        idle_cycles: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Route a circuit file onto a device coupling map.
    Route {
        #[arg(long)]
        circuit: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Conditional state tomography of a circuit file.
    Tomo {
        #[arg(long)]
        circuit: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Stabilizer experiment plus depolarizing-channel fit.
    Fit {
        /// Fault-qubit pair, e.g. "0,4" (first and last data qubit).
        #[arg(long)]
        fault_qubits: Option<String>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Correction-protocol runs: ideal or hardware flow.
    Protocol {
        /// ideal | hardware
        #[arg(long, default_value = "hardware")]
        mode: String,
        /// Main stabilizer generator index (0..3).
        #[arg(long)]
        main_generator: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Compare two report files numerically.
    ReportDiff { a: PathBuf, b: PathBuf },
}

fn load_config(kind: ExperimentKind, common: &CommonOpts) -> Result<ExperimentConfig, String> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config '{}': {e}", path.display()))?;
            let parsed: ExperimentConfig = if path.extension().map(|e| e == "json").unwrap_or(false)
            {
                serde_json::from_str(&text).map_err(|e| format!("config: {e}"))?
            } else {
                toml::from_str(&text).map_err(|e| format!("config: {e}"))?
            };
            parsed
        }
        None => ExperimentConfig::new(kind),
    };
    cfg.experiment = kind;
    if let Some(d) = &common.device {
        cfg.device = Some(d.clone());
    }
    if let Some(l) = &common.layout {
        cfg.layout = Some(parse_layout(l)?);
    }
    if let Some(s) = common.shots {
        cfg.shots = s;
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(r) = common.replicas {
        cfg.replicas = r;
    }
    if common.noise {
        cfg.noise.enabled = true;
    }
    if common.mitigate {
        cfg.mitigation = true;
    }
    if common.exact {
        cfg.exact = true;
    }
    if let Some(o) = &common.out {
        cfg.out = Some(o.clone());
    }
    if let Some(w) = common.workers {
        cfg.workers = Some(w);
    }
    Ok(cfg)
}

fn parse_layout(text: &str) -> Result<LayoutChoice, String> {
    if text.contains(',') {
        let list: Result<Vec<usize>, _> = text.split(',').map(|t| t.trim().parse()).collect();
        Ok(LayoutChoice::Explicit(
            list.map_err(|e| format!("layout list: {e}"))?,
        ))
    } else {
        Ok(LayoutChoice::Named(text.to_string()))
    }
}

fn emit(report: &flagqec::experiment::Report) -> Result<(), String> {
    let json = report.to_json();
    let value: serde_json::Value = serde_json::from_str(&json).expect("report is valid JSON");
    if let Err(errors) = validate_report(&value) {
        return Err(format!(
            "internal error: report fails its schema: {}",
            errors.join("; ")
        ));
    }
    if report.config.out.is_none() {
        println!("{json}");
    } else {
        eprintln!(
            "report written to {}",
            report.config.out.as_ref().unwrap().display()
        );
    }
    Ok(())
}

fn run() -> Result<(), (i32, String)> {
    let cli = Cli::parse();
    let config_err = |m: String| (2, m);
    match cli.command {
        Command::Simulate {
            experiment,
            idle_cycles,
            common,
        } => {
            let kind = match experiment.as_str() {
                "prep" => ExperimentKind::Prep,
                "prep-plus-idles" => ExperimentKind::PrepPlusIdles,
                "prep-plus-stabilizer" => ExperimentKind::PrepPlusStabilizer,
                other => {
                    return Err(config_err(format!("unknown simulate experiment '{other}'")))
                }
            };
            let mut cfg = load_config(kind, &common).map_err(config_err)?;
            if let Some(c) = idle_cycles {
                cfg.idle_cycles = c;
            }
            let report = run_experiment(&cfg).map_err(|e| (e.exit_code(), e.to_string()))?;
            emit(&report).map_err(config_err)
        }
        Command::Route { circuit, common } => {
            let mut cfg = load_config(ExperimentKind::Route, &common).map_err(config_err)?;
            cfg.circuit = Some(circuit);
            let report = run_experiment(&cfg).map_err(|e| (e.exit_code(), e.to_string()))?;
            emit(&report).map_err(config_err)
        }
        Command::Tomo { circuit, common } => {
            let mut cfg = load_config(ExperimentKind::Tomo, &common).map_err(config_err)?;
            cfg.circuit = Some(circuit);
            let report = run_experiment(&cfg).map_err(|e| (e.exit_code(), e.to_string()))?;
            emit(&report).map_err(config_err)
        }
        Command::Fit {
            fault_qubits,
            common,
        } => {
            let mut cfg = load_config(ExperimentKind::Fit, &common).map_err(config_err)?;
            if let Some(fq) = fault_qubits {
                let parts: Vec<&str> = fq.split(',').collect();
                if parts.len() != 2 {
                    return Err(config_err("fault-qubits expects two indices, e.g. 0,4".into()));
                }
                let a: usize = parts[0].trim().parse().map_err(|e| config_err(format!("fault-qubits: {e}")))?;
                let b: usize = parts[1].trim().parse().map_err(|e| config_err(format!("fault-qubits: {e}")))?;
                cfg.fault_qubits = (a, b);
            }
            let report = run_experiment(&cfg).map_err(|e| (e.exit_code(), e.to_string()))?;
            emit(&report).map_err(config_err)
        }
        Command::Protocol {
            mode,
            main_generator,
            common,
        } => {
            let kind = match mode.as_str() {
                "ideal" => ExperimentKind::IdealProtocol,
                "hardware" => ExperimentKind::HardwareProtocol,
                other => return Err(config_err(format!("unknown protocol mode '{other}'"))),
            };
            let mut cfg = load_config(kind, &common).map_err(config_err)?;
            if main_generator.is_some() {
                cfg.main_generator = main_generator;
            }
            let report = run_experiment(&cfg).map_err(|e| (e.exit_code(), e.to_string()))?;
            emit(&report).map_err(config_err)
        }
        Command::ReportDiff { a, b } => {
            let load = |p: &PathBuf| -> Result<serde_json::Value, (i32, String)> {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| (2, format!("cannot read '{}': {e}", p.display())))?;
                serde_json::from_str(&text).map_err(|e| (2, format!("{}: {e}", p.display())))
            };
            let va = load(&a)?;
            let vb = load(&b)?;
            let diff = diff_values(&va, &vb).map_err(|e| (2, e))?;
            println!("{diff}");
            Ok(())
        }
    }
}

/// report-diff over raw JSON values (reports loaded from disk).
fn diff_values(a: &serde_json::Value, b: &serde_json::Value) -> Result<String, String> {
    let kind = |v: &serde_json::Value| -> Result<String, String> {
        v.get("experiment")
            .and_then(|e| e.as_str())
            .map(String::from)
            .ok_or_else(|| "report lacks an 'experiment' field".to_string())
    };
    let (ka, kb) = (kind(a)?, kind(b)?);
    let family = |k: &str| match k {
        "prep" | "prep-plus-idles" | "prep-plus-stabilizer" | "tomo" | "fit" => "simulate",
        "ideal-protocol" | "hardware-protocol" => "protocol",
        _ => "route",
    };
    if family(&ka) != family(&kb) {
        return Err(format!("cannot diff experiment kinds '{ka}' and '{kb}'"));
    }
    let get = |v: &serde_json::Value, path: &[&str]| -> Option<f64> {
        let mut cur = v;
        for p in path {
            cur = cur.get(p)?;
        }
        cur.as_f64()
    };
    let mut out = String::new();
    out.push_str(&format!(
        "{:<26} {:>14} {:>14} {:>14}\n",
        "metric", ka, kb, "delta"
    ));
    for (name, path) in [
        ("runtime_us", vec!["runtime_us"]),
        ("cnot_depth", vec!["cnot_depth"]),
        ("accepted_fraction", vec!["accepted_fraction"]),
        ("fidelity_mean", vec!["fidelity", "mean"]),
        ("fidelity_std", vec!["fidelity", "std"]),
        ("fidelity_unmitigated", vec!["fidelity_unmitigated", "mean"]),
        ("fit_p_opt", vec!["fit", "p_opt"]),
        ("fit_per_pauli_rate", vec!["fit", "per_pauli_error_rate"]),
        ("logical_fidelity", vec!["protocol", "logical_fidelity"]),
        ("swap_count", vec!["route", "swap_count"]),
    ] {
        if let (Some(x), Some(y)) = (get(a, &path), get(b, &path)) {
            out.push_str(&format!(
                "{:<26} {:>14.6} {:>14.6} {:>+14.6}\n",
                name,
                x,
                y,
                y - x
            ));
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code as u8)
        }
    }
}
