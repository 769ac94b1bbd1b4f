//! Batch experiment runner: builds circuits, routes them, simulates,
//! reconstructs, and emits machine-readable JSON reports.

use crate::channel_fit::{fit_p, FitResult};
use crate::circuit::{cnot_depth, estimate_runtime, gate_counts, Circuit};
use crate::code513::{self, PrepVariant};
use crate::device::DeviceModel;
use crate::flag::{self, ProtocolOptions};
use crate::noise::{noise_from_device, NoiseModel, NoiseOptions};
use crate::quantum::{fidelity, fidelity_to_pure, DensityMatrix};
use crate::tomography::{
    build_calibration, collect, mitigate, reconstruct, tomo_settings, CalibrationSource,
    CollectMode, Condition,
};
use crate::transpile::{self, builtin_device, fixtures, route, CouplingGraph};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl ExperimentError {
    /// Process exit code: 2 for configuration, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config(_) => 2,
            ExperimentError::Numerical(_) => 3,
        }
    }
}

fn num_err<E: std::fmt::Display>(e: E) -> ExperimentError {
    ExperimentError::Numerical(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Prep,
    PrepPlusIdles,
    PrepPlusStabilizer,
    IdealProtocol,
    HardwareProtocol,
    Tomo,
    Fit,
    Route,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::Prep => "prep",
            ExperimentKind::PrepPlusIdles => "prep-plus-idles",
            ExperimentKind::PrepPlusStabilizer => "prep-plus-stabilizer",
            ExperimentKind::IdealProtocol => "ideal-protocol",
            ExperimentKind::HardwareProtocol => "hardware-protocol",
            ExperimentKind::Tomo => "tomo",
            ExperimentKind::Fit => "fit",
            ExperimentKind::Route => "route",
        }
    }

    fn family(&self) -> &'static str {
        match self {
            ExperimentKind::Prep
            | ExperimentKind::PrepPlusIdles
            | ExperimentKind::PrepPlusStabilizer
            | ExperimentKind::Tomo
            | ExperimentKind::Fit => "simulate",
            ExperimentKind::IdealProtocol | ExperimentKind::HardwareProtocol => "protocol",
            ExperimentKind::Route => "route",
        }
    }
}

/// Named initial layouts used by the shipped experiments.
pub const LAYOUT_A: [usize; 5] = [1, 2, 3, 11, 12];
pub const LAYOUT_B: [usize; 5] = [11, 12, 13, 1, 2];
pub const LAYOUT_C: [usize; 7] = [11, 12, 13, 1, 2, 3, 4];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LayoutChoice {
    Named(String),
    Explicit(Vec<usize>),
}

fn default_shots() -> usize {
    8192
}
fn default_replicas() -> usize {
    3
}
fn default_idle_cycles() -> usize {
    106
}
fn default_fault_qubits() -> (usize, usize) {
    (0, 4)
}
fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseToggles {
    #[serde(default)]
    pub enabled: bool,
    #[serde(default = "default_true")]
    pub gate_errors: bool,
    #[serde(default = "default_true")]
    pub idle_decoherence: bool,
    #[serde(default = "default_true")]
    pub readout_errors: bool,
}

impl Default for NoiseToggles {
    fn default() -> Self {
        NoiseToggles {
            enabled: false,
            gate_errors: true,
            idle_decoherence: true,
            readout_errors: true,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Builtin device name ("melbourne", "vigo") or a JSON file path.
    #[serde(default)]
    pub device: Option<String>,
    #[serde(default)]
    pub layout: Option<LayoutChoice>,
    #[serde(default = "default_shots")]
    pub shots: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_replicas")]
    pub replicas: usize,
    #[serde(default)]
    pub noise: NoiseToggles,
    #[serde(default)]
    pub mitigation: bool,
    /// Use exact infinite-shot distributions instead of sampling.
    #[serde(default)]
    pub exact: bool,
    #[serde(default = "default_idle_cycles")]
    pub idle_cycles: usize,
    #[serde(default = "default_fault_qubits")]
    pub fault_qubits: (usize, usize),
    /// Input circuit file for tomo/route experiments.
    #[serde(default)]
    pub circuit: Option<PathBuf>,
    #[serde(default)]
    pub main_generator: Option<usize>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        ExperimentConfig {
            experiment: kind,
            device: None,
            layout: None,
            shots: default_shots(),
            seed: 0,
            replicas: default_replicas(),
            noise: NoiseToggles::default(),
            mitigation: false,
            exact: false,
            idle_cycles: default_idle_cycles(),
            fault_qubits: default_fault_qubits(),
            circuit: None,
            main_generator: None,
            out: None,
            workers: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FidelityStats {
    pub mean: f64,
    pub std: f64,
    pub replicas: Vec<f64>,
}

impl FidelityStats {
    fn from_replicas(replicas: Vec<f64>) -> Self {
        let n = replicas.len() as f64;
        let mean = replicas.iter().sum::<f64>() / n;
        let var = if replicas.len() > 1 {
            replicas.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        FidelityStats {
            mean,
            std: var.sqrt(),
            replicas,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProtocolSummary {
    pub shots: usize,
    pub rejected_count: usize,
    pub f0_count: usize,
    pub f1_count: usize,
    pub accepted_fraction: f64,
    pub logical_fidelity: f64,
    pub uncorrected_fidelity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conditioned_fidelity: Option<f64>,
    pub record_counts: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RouteSummary {
    pub initial_layout: Vec<usize>,
    pub final_permutation: Vec<usize>,
    pub swap_count: usize,
    pub routed_qasm: String,
}

/// Machine-readable experiment report. Field values are deterministic in
/// (config, seed); no timestamps are embedded.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub experiment: String,
    pub toolkit_version: String,
    pub config: ExperimentConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub device_name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub device_sha256: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_us: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cnot_depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate_counts: Option<BTreeMap<String, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accepted_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<FidelityStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity_unmitigated: Option<FidelityStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub protocol: Option<ProtocolSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route: Option<RouteSummary>,
}

impl Report {
    fn new(cfg: &ExperimentConfig) -> Self {
        Report {
            experiment: cfg.experiment.as_str().to_string(),
            toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
            config: cfg.clone(),
            device_name: None,
            device_sha256: None,
            runtime_us: None,
            cnot_depth: None,
            gate_counts: None,
            accepted_fraction: None,
            fidelity: None,
            fidelity_unmitigated: None,
            fit: None,
            protocol: None,
            route: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct ResolvedDevice {
    model: DeviceModel,
    sha256: String,
}

fn resolve_device(cfg: &ExperimentConfig) -> Result<ResolvedDevice, ExperimentError> {
    let spec = cfg.device.as_deref().unwrap_or("melbourne");
    let text = match builtin_device(spec) {
        Some(t) => t.to_string(),
        None => std::fs::read_to_string(spec).map_err(|e| {
            ExperimentError::Config(format!("cannot read device file '{spec}': {e}"))
        })?,
    };
    let model = DeviceModel::from_json_str(&text)
        .map_err(|e| ExperimentError::Config(format!("device '{spec}': {e}")))?;
    let sha256 = hex_digest(text.as_bytes());
    Ok(ResolvedDevice { model, sha256 })
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn build_noise(cfg: &ExperimentConfig, device: &DeviceModel) -> Option<NoiseModel> {
    if !cfg.noise.enabled {
        return None;
    }
    let options = NoiseOptions {
        gate_errors: cfg.noise.gate_errors,
        idle_decoherence: cfg.noise.idle_decoherence,
        readout_errors: cfg.noise.readout_errors,
    };
    Some(noise_from_device(device, options))
}

/// The prepared circuit (over physical wires) plus the physical wires
/// holding the five logical qubits, in logical order.
struct PreparedExperiment {
    circuit: Circuit,
    data_qubits: Vec<usize>,
    condition: Condition,
}

/// The same experiment compacted onto its active wires so dense simulation
/// stays under the register cap; `active[i]` is the physical qubit behind
/// local wire `i`.
struct CompactExperiment {
    circuit: Circuit,
    data_qubits: Vec<usize>,
    condition: Condition,
    active: Vec<usize>,
}

fn compact_experiment(prepared: &PreparedExperiment) -> CompactExperiment {
    let mut active: Vec<usize> = Vec::new();
    for instr in &prepared.circuit.instructions {
        for q in instr.qubits() {
            if !active.contains(&q) {
                active.push(q);
            }
        }
    }
    for &q in prepared.data_qubits.iter().chain(&prepared.condition.qubits) {
        if !active.contains(&q) {
            active.push(q);
        }
    }
    active.sort_unstable();
    let mut map = vec![usize::MAX; prepared.circuit.num_qubits];
    for (i, &q) in active.iter().enumerate() {
        map[q] = i;
    }
    let mut circuit = prepared.circuit.mapped_qubits(&map, active.len());
    circuit.initial_layout = None;
    CompactExperiment {
        circuit,
        data_qubits: prepared.data_qubits.iter().map(|&q| map[q]).collect(),
        condition: Condition {
            qubits: prepared.condition.qubits.iter().map(|&q| map[q]).collect(),
            required: prepared.condition.required.clone(),
        },
        active,
    }
}

fn prep_circuit_for(
    cfg: &ExperimentConfig,
    device: &DeviceModel,
) -> Result<PreparedExperiment, ExperimentError> {
    let fx = fixtures();
    let choice = match (&cfg.layout, device.name.as_str()) {
        (None, "vigo") | (Some(LayoutChoice::Named(_)), "vigo") => {
            let f = &fx["vigo-prep"];
            return Ok(PreparedExperiment {
                circuit: f.routed.circuit.clone(),
                data_qubits: f.routed.final_permutation.clone(),
                condition: Condition::none(),
            });
        }
        (Some(LayoutChoice::Named(name)), _) => name.clone(),
        (None, _) => "A".to_string(),
        (Some(LayoutChoice::Explicit(list)), _) => {
            // generic path: route the ideal circuit onto the explicit layout
            let prep = code513::prep_minus_logical(PrepVariant::IdealDepth3);
            let graph = CouplingGraph::from_device(device);
            let routed = route(&transpile::lower_to_native(&prep.circuit), &graph, list)
                .map_err(|e| ExperimentError::Config(e.to_string()))?;
            return Ok(PreparedExperiment {
                data_qubits: routed.final_permutation.clone(),
                circuit: routed.circuit,
                condition: Condition::none(),
            });
        }
    };
    let fixture = match choice.as_str() {
        "A" => &fx["melbourne-prep-depth4"],
        "B" => &fx["melbourne-prep-depth6"],
        other => {
            return Err(ExperimentError::Config(format!(
                "unknown layout name '{other}' (expected A, B, or an explicit list)"
            )))
        }
    };
    Ok(PreparedExperiment {
        circuit: fixture.routed.circuit.clone(),
        data_qubits: fixture.routed.final_permutation.clone(),
        condition: Condition::none(),
    })
}

fn stabilizer_experiment(cfg: &ExperimentConfig) -> Result<PreparedExperiment, ExperimentError> {
    if let Some(LayoutChoice::Named(n)) = &cfg.layout {
        if n != "C" {
            return Err(ExperimentError::Config(format!(
                "the stabilizer experiment ships for layout C only, got '{n}'"
            )));
        }
    }
    let fx = fixtures();
    let f = &fx["melbourne-stab-ZXIXZ"];
    let final_perm = &f.routed.final_permutation;
    Ok(PreparedExperiment {
        circuit: f.routed.circuit.clone(),
        data_qubits: final_perm[..5].to_vec(),
        condition: Condition {
            qubits: vec![final_perm[5], final_perm[6]],
            required: vec![0, 0],
        },
    })
}

/// Tomography pipeline over a prepared circuit: collect, optionally
/// mitigate, reconstruct, and compare against logical |->.
fn tomo_pipeline(
    cfg: &ExperimentConfig,
    device: &DeviceModel,
    compact: &CompactExperiment,
    replica_seed: u64,
) -> Result<(f64, Option<f64>, f64), ExperimentError> {
    let noise = build_noise(cfg, device).map(|n| n.restricted_to(&compact.active));
    let settings = tomo_settings(5);
    let mode = if cfg.exact {
        CollectMode::Exact
    } else {
        CollectMode::Shots {
            shots_per_setting: cfg.shots,
        }
    };
    let ds = collect(
        &compact.circuit,
        &compact.data_qubits,
        &compact.condition,
        &settings,
        mode,
        noise.as_ref(),
        replica_seed,
    )
    .map_err(num_err)?;
    let accepted = (0..settings.len())
        .map(|si| ds.accepted_fraction(si))
        .sum::<f64>()
        / settings.len() as f64;
    let target = code513::logical_minus_state();
    let mut unmitigated = None;
    let rho = if cfg.mitigation {
        let raw = reconstruct(&ds).map_err(num_err)?;
        unmitigated = Some(fidelity_to_pure(&target, &raw).map_err(num_err)?);
        // calibration over the measured physical qubits, in joint-bit order
        let physical: Vec<usize> = ds
            .measured_qubits()
            .iter()
            .map(|&lq| compact.active[lq])
            .collect();
        let cal = build_calibration(CalibrationSource::Exact {
            device,
            qubits: physical,
        });
        let fixed = mitigate(&ds, &cal).map_err(num_err)?;
        reconstruct(&fixed).map_err(num_err)?
    } else {
        reconstruct(&ds).map_err(num_err)?
    };
    let f = fidelity_to_pure(&target, &rho).map_err(num_err)?;
    Ok((f, unmitigated, accepted))
}

fn reconstruct_for_fit(
    cfg: &ExperimentConfig,
    device: &DeviceModel,
    compact: &CompactExperiment,
) -> Result<DensityMatrix, ExperimentError> {
    let noise = build_noise(cfg, device).map(|n| n.restricted_to(&compact.active));
    let settings = tomo_settings(5);
    let mode = if cfg.exact {
        CollectMode::Exact
    } else {
        CollectMode::Shots {
            shots_per_setting: cfg.shots,
        }
    };
    let ds = collect(
        &compact.circuit,
        &compact.data_qubits,
        &compact.condition,
        &settings,
        mode,
        noise.as_ref(),
        cfg.seed,
    )
    .map_err(num_err)?;
    let ds = if cfg.mitigation {
        let physical: Vec<usize> = ds
            .measured_qubits()
            .iter()
            .map(|&lq| compact.active[lq])
            .collect();
        let cal = build_calibration(CalibrationSource::Exact {
            device,
            qubits: physical,
        });
        mitigate(&ds, &cal).map_err(num_err)?
    } else {
        ds
    };
    reconstruct(&ds).map_err(num_err)
}

fn append_idle_cycles(circuit: &mut Circuit, wire: usize, cycles: usize) {
    for _ in 0..cycles {
        circuit.id(wire);
        circuit.barrier(&[wire]);
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report, ExperimentError> {
    if let Some(workers) = cfg.workers {
        // best effort; the pool can only be installed once per process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
    }
    if cfg.replicas == 0 {
        return Err(ExperimentError::Config("replicas must be positive".into()));
    }
    let mut report = Report::new(cfg);
    match cfg.experiment {
        ExperimentKind::Prep | ExperimentKind::PrepPlusIdles => {
            let dev = resolve_device(cfg)?;
            let mut prepared = prep_circuit_for(cfg, &dev.model)?;
            if cfg.experiment == ExperimentKind::PrepPlusIdles {
                let wire = prepared.circuit.initial_layout.as_ref().map(|l| l[0]).ok_or_else(
                    || ExperimentError::Config("prep circuit lacks a layout annotation".into()),
                )?;
                append_idle_cycles(&mut prepared.circuit, wire, cfg.idle_cycles);
            }
            fill_static_metrics(&mut report, &prepared.circuit, &dev)?;
            let compact = compact_experiment(&prepared);
            let mut fids = Vec::new();
            let mut unmit = Vec::new();
            let mut accepted = 0.0;
            for r in 0..cfg.replicas {
                let (f, u, a) = tomo_pipeline(cfg, &dev.model, &compact, cfg.seed + r as u64)?;
                fids.push(f);
                if let Some(u) = u {
                    unmit.push(u);
                }
                accepted = a;
            }
            report.accepted_fraction = Some(accepted);
            report.fidelity = Some(FidelityStats::from_replicas(fids));
            if !unmit.is_empty() {
                report.fidelity_unmitigated = Some(FidelityStats::from_replicas(unmit));
            }
        }
        ExperimentKind::PrepPlusStabilizer | ExperimentKind::Fit => {
            let dev = resolve_device(cfg)?;
            let prepared = stabilizer_experiment(cfg)?;
            fill_static_metrics(&mut report, &prepared.circuit, &dev)?;
            let compact = compact_experiment(&prepared);
            let mut fids = Vec::new();
            let mut unmit = Vec::new();
            let mut accepted = 0.0;
            for r in 0..cfg.replicas {
                let (f, u, a) = tomo_pipeline(cfg, &dev.model, &compact, cfg.seed + r as u64)?;
                fids.push(f);
                if let Some(u) = u {
                    unmit.push(u);
                }
                accepted = a;
            }
            report.accepted_fraction = Some(accepted);
            report.fidelity = Some(FidelityStats::from_replicas(fids));
            if !unmit.is_empty() {
                report.fidelity_unmitigated = Some(FidelityStats::from_replicas(unmit));
            }
            if cfg.experiment == ExperimentKind::Fit {
                let rho = reconstruct_for_fit(cfg, &dev.model, &compact)?;
                let ideal = code513::logical_minus_state().to_density();
                let fit = fit_p(&rho, &ideal, cfg.fault_qubits).map_err(num_err)?;
                report.fit = Some(fit);
            }
        }
        ExperimentKind::IdealProtocol | ExperimentKind::HardwareProtocol => {
            // protocol circuits use canonical wiring (data 0-4, ancillas
            // above); device noise applies by wire index, not by a routed
            // layout
            let dev = resolve_device(cfg)?;
            let noise = build_noise(cfg, &dev.model);
            let hardware = cfg.experiment == ExperimentKind::HardwareProtocol;
            let mut options = if hardware {
                ProtocolOptions::hardware()
            } else {
                ProtocolOptions::ideal()
            };
            if let Some(g) = cfg.main_generator {
                if g >= 4 {
                    return Err(ExperimentError::Config(format!(
                        "main_generator must be 0..3, got {g}"
                    )));
                }
                options.main_generator = g;
            }
            let mut fids = Vec::new();
            let mut last = None;
            for r in 0..cfg.replicas {
                let result = if hardware {
                    flag::run_hardware_protocol(
                        noise.as_ref(),
                        cfg.shots,
                        cfg.seed + r as u64,
                        &options,
                    )
                } else {
                    flag::run_ideal_protocol(
                        noise.as_ref(),
                        cfg.shots,
                        cfg.seed + r as u64,
                        &options,
                    )
                }
                .map_err(num_err)?;
                fids.push(result.logical_fidelity);
                last = Some(result);
            }
            let result = last.expect("at least one replica");
            report.accepted_fraction = Some(result.accepted_fraction);
            report.fidelity = Some(FidelityStats::from_replicas(fids));
            report.protocol = Some(ProtocolSummary {
                shots: result.shots,
                rejected_count: result.rejected_count,
                f0_count: result.f0_count,
                f1_count: result.f1_count,
                accepted_fraction: result.accepted_fraction,
                logical_fidelity: result.logical_fidelity,
                uncorrected_fidelity: result.uncorrected_fidelity,
                conditioned_fidelity: result.conditioned_fidelity,
                record_counts: result
                    .per_record
                    .iter()
                    .map(|(k, v)| (k.clone(), v.count))
                    .collect(),
            });
        }
        ExperimentKind::Tomo => {
            let dev = resolve_device(cfg)?;
            let path = cfg.circuit.as_ref().ok_or_else(|| {
                ExperimentError::Config("tomo requires a --circuit input".into())
            })?;
            let text = std::fs::read_to_string(path).map_err(|e| {
                ExperimentError::Config(format!("cannot read '{}': {e}", path.display()))
            })?;
            let circuit = crate::qasm::parse(&text)
                .map_err(|e| ExperimentError::Config(e.to_string()))?;
            if circuit.num_qubits == 0 || circuit.num_qubits > 5 {
                return Err(ExperimentError::Config(
                    "tomo supports 1 to 5 qubits".into(),
                ));
            }
            fill_static_metrics(&mut report, &circuit, &dev)?;
            let data: Vec<usize> = (0..circuit.num_qubits).collect();
            let settings = tomo_settings(circuit.num_qubits);
            let noise = build_noise(cfg, &dev.model);
            let mode = if cfg.exact {
                CollectMode::Exact
            } else {
                CollectMode::Shots {
                    shots_per_setting: cfg.shots,
                }
            };
            // reference: exact noiseless reconstruction of the same circuit
            let reference_ds = collect(
                &circuit,
                &data,
                &Condition::none(),
                &settings,
                CollectMode::Exact,
                None,
                0,
            )
            .map_err(num_err)?;
            let reference = reconstruct(&reference_ds).map_err(num_err)?;
            let mut fids = Vec::new();
            for r in 0..cfg.replicas {
                let ds = collect(
                    &circuit,
                    &data,
                    &Condition::none(),
                    &settings,
                    mode,
                    noise.as_ref(),
                    cfg.seed + r as u64,
                )
                .map_err(num_err)?;
                let ds = if cfg.mitigation {
                    let cal = build_calibration(CalibrationSource::Exact {
                        device: &dev.model,
                        qubits: ds.measured_qubits(),
                    });
                    mitigate(&ds, &cal).map_err(num_err)?
                } else {
                    ds
                };
                let rho = reconstruct(&ds).map_err(num_err)?;
                fids.push(fidelity(&rho, &reference).map_err(num_err)?);
            }
            report.fidelity = Some(FidelityStats::from_replicas(fids));
        }
        ExperimentKind::Route => {
            let dev = resolve_device(cfg)?;
            let path = cfg.circuit.as_ref().ok_or_else(|| {
                ExperimentError::Config("route requires a --circuit input".into())
            })?;
            let text = std::fs::read_to_string(path).map_err(|e| {
                ExperimentError::Config(format!("cannot read '{}': {e}", path.display()))
            })?;
            let circuit = crate::qasm::parse(&text)
                .map_err(|e| ExperimentError::Config(e.to_string()))?;
            let layout = match &cfg.layout {
                Some(LayoutChoice::Explicit(l)) => l.clone(),
                Some(LayoutChoice::Named(n)) => match (n.as_str(), circuit.num_qubits) {
                    ("A", 5) => LAYOUT_A.to_vec(),
                    ("B", 5) => LAYOUT_B.to_vec(),
                    ("C", 7) => LAYOUT_C.to_vec(),
                    _ => {
                        return Err(ExperimentError::Config(format!(
                            "layout '{n}' does not fit a {}-qubit circuit",
                            circuit.num_qubits
                        )))
                    }
                },
                None => (0..circuit.num_qubits).collect(),
            };
            let graph = CouplingGraph::from_device(&dev.model);
            let routed = route(&circuit, &graph, &layout)
                .map_err(|e| ExperimentError::Config(e.to_string()))?;
            fill_static_metrics(&mut report, &routed.circuit, &dev)?;
            report.route = Some(RouteSummary {
                initial_layout: routed.initial_layout.clone(),
                final_permutation: routed.final_permutation.clone(),
                swap_count: routed.swap_count,
                routed_qasm: crate::qasm::serialize(&routed.circuit),
            });
        }
    }
    if let Some(out) = &cfg.out {
        std::fs::write(out, report.to_json()).map_err(|e| {
            ExperimentError::Config(format!("cannot write report to '{}': {e}", out.display()))
        })?;
    }
    Ok(report)
}

fn fill_static_metrics(
    report: &mut Report,
    circuit: &Circuit,
    dev: &ResolvedDevice,
) -> Result<(), ExperimentError> {
    report.device_name = Some(dev.model.name.clone());
    report.device_sha256 = Some(dev.sha256.clone());
    report.cnot_depth = Some(cnot_depth(circuit));
    report.gate_counts = Some(gate_counts(circuit));
    report.runtime_us = Some(estimate_runtime(circuit, &dev.model).map_err(num_err)?);
    Ok(())
}

/// Side-by-side numeric comparison of two reports of the same family.
pub fn report_diff(a: &Report, b: &Report) -> Result<String, ExperimentError> {
    let (ka, kb) = (a.config.experiment, b.config.experiment);
    if ka.family() != kb.family() {
        return Err(ExperimentError::Config(format!(
            "cannot diff experiment kinds '{}' and '{}'",
            ka.as_str(),
            kb.as_str()
        )));
    }
    let mut out = String::new();
    out.push_str(&format!(
        "{:<26} {:>14} {:>14} {:>14}\n",
        "metric",
        ka.as_str(),
        kb.as_str(),
        "delta"
    ));
    let mut row = |name: &str, va: Option<f64>, vb: Option<f64>| {
        if let (Some(x), Some(y)) = (va, vb) {
            out.push_str(&format!(
                "{:<26} {:>14.6} {:>14.6} {:>+14.6}\n",
                name,
                x,
                y,
                y - x
            ));
        }
    };
    row("runtime_us", a.runtime_us, b.runtime_us);
    row(
        "cnot_depth",
        a.cnot_depth.map(|v| v as f64),
        b.cnot_depth.map(|v| v as f64),
    );
    row("accepted_fraction", a.accepted_fraction, b.accepted_fraction);
    row(
        "fidelity_mean",
        a.fidelity.as_ref().map(|f| f.mean),
        b.fidelity.as_ref().map(|f| f.mean),
    );
    row(
        "fidelity_std",
        a.fidelity.as_ref().map(|f| f.std),
        b.fidelity.as_ref().map(|f| f.std),
    );
    row(
        "fidelity_unmitigated",
        a.fidelity_unmitigated.as_ref().map(|f| f.mean),
        b.fidelity_unmitigated.as_ref().map(|f| f.mean),
    );
    row(
        "fit_p_opt",
        a.fit.as_ref().map(|f| f.p_opt),
        b.fit.as_ref().map(|f| f.p_opt),
    );
    row(
        "logical_fidelity",
        a.protocol.as_ref().map(|p| p.logical_fidelity),
        b.protocol.as_ref().map(|p| p.logical_fidelity),
    );
    Ok(out)
}

/// Validate a report JSON value against the shipped schema (a subset of
/// JSON Schema: type/required/properties/items).
pub fn validate_report(value: &serde_json::Value) -> Result<(), Vec<String>> {
    let schema: serde_json::Value =
        serde_json::from_str(report_schema()).expect("shipped schema parses");
    let mut errors = Vec::new();
    validate_value(value, &schema, "$", &mut errors);
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

/// The shipped JSON schema for reports.
pub fn report_schema() -> &'static str {
    include_str!("../../../schemas/report.json")
}

fn validate_value(
    value: &serde_json::Value,
    schema: &serde_json::Value,
    path: &str,
    errors: &mut Vec<String>,
) {
    use serde_json::Value;
    if let Some(types) = schema.get("type") {
        let type_names: Vec<String> = match types {
            Value::String(s) => vec![s.clone()],
            Value::Array(a) => a
                .iter()
                .filter_map(|v| v.as_str().map(String::from))
                .collect(),
            _ => vec![],
        };
        let actual = match value {
            Value::Null => "null",
            Value::Bool(_) => "boolean",
            Value::Number(n) => {
                if n.is_i64() || n.is_u64() {
                    "integer"
                } else {
                    "number"
                }
            }
            Value::String(_) => "string",
            Value::Array(_) => "array",
            Value::Object(_) => "object",
        };
        let matches = type_names.iter().any(|t| {
            t == actual || (t == "number" && actual == "integer")
        });
        if !type_names.is_empty() && !matches {
            errors.push(format!("{path}: expected {type_names:?}, got {actual}"));
            return;
        }
    }
    if let (Some(required), Some(obj)) = (
        schema.get("required").and_then(|r| r.as_array()),
        value.as_object(),
    ) {
        for key in required.iter().filter_map(|k| k.as_str()) {
            if !obj.contains_key(key) {
                errors.push(format!("{path}: missing required field '{key}'"));
            }
        }
    }
    if let (Some(props), Some(obj)) = (
        schema.get("properties").and_then(|p| p.as_object()),
        value.as_object(),
    ) {
        for (key, sub) in props {
            if let Some(v) = obj.get(key) {
                validate_value(v, sub, &format!("{path}.{key}"), errors);
            }
        }
    }
    if let (Some(items), Some(arr)) = (schema.get("items"), value.as_array()) {
        for (i, v) in arr.iter().enumerate() {
            validate_value(v, items, &format!("{path}[{i}]"), errors);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_cfg(kind: ExperimentKind) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(kind);
        cfg.exact = true;
        cfg.replicas = 1;
        cfg
    }

    #[test]
    fn noiseless_prep_reports_unit_fidelity() {
        let report = run_experiment(&quick_cfg(ExperimentKind::Prep)).unwrap();
        let f = report.fidelity.unwrap();
        assert!((f.mean - 1.0).abs() < 1e-6, "fidelity {}", f.mean);
        assert!(report.runtime_us.unwrap() > 0.0);
        assert_eq!(report.cnot_depth, Some(4));
    }

    #[test]
    fn reports_are_deterministic_and_schema_valid() {
        let mut cfg = quick_cfg(ExperimentKind::Prep);
        cfg.exact = false;
        cfg.shots = 64;
        let a = run_experiment(&cfg).unwrap().to_json();
        let b = run_experiment(&cfg).unwrap().to_json();
        assert_eq!(a, b);
        let value: serde_json::Value = serde_json::from_str(&a).unwrap();
        validate_report(&value).unwrap();
    }

    #[test]
    fn report_diff_same_family() {
        let a = run_experiment(&quick_cfg(ExperimentKind::Prep)).unwrap();
        let d = report_diff(&a, &a).unwrap();
        assert!(d.contains("fidelity_mean"));
        assert!(d.contains("+0.000000"));
        let proto = {
            let mut cfg = ExperimentConfig::new(ExperimentKind::HardwareProtocol);
            cfg.shots = 4;
            cfg.replicas = 1;
            run_experiment(&cfg).unwrap()
        };
        assert!(report_diff(&a, &proto).is_err());
    }

    #[test]
    fn unknown_layout_is_config_error() {
        let mut cfg = quick_cfg(ExperimentKind::Prep);
        cfg.layout = Some(LayoutChoice::Named("Q".into()));
        let err = run_experiment(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
