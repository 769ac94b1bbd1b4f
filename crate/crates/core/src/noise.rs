//! Noise models: per-gate depolarizing channels, T1/T2 idle decoherence, and
//! classical readout flips.

use crate::device::DeviceModel;
use crate::quantum::{KrausChannel, PauliLetter, QuantumError};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::BTreeMap;

type C = Complex64;

/// Uniform depolarizing channel with no-error probability `p`.
///
/// Arity 1: Kraus weights sqrt(p) on I and sqrt((1-p)/3) on X, Y, Z.
/// Arity 2: sqrt(p) on II and sqrt((1-p)/15) on the 15 non-identity pairs.
pub fn depolarizing_channel(p: f64, arity: usize) -> Result<KrausChannel, QuantumError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(QuantumError::InvalidState(format!(
            "depolarizing probability {p} outside [0, 1]"
        )));
    }
    assert!(arity == 1 || arity == 2, "depolarizing arity must be 1 or 2");
    let letters = [
        PauliLetter::I,
        PauliLetter::X,
        PauliLetter::Y,
        PauliLetter::Z,
    ];
    let mut ops = Vec::new();
    if arity == 1 {
        let err_w = ((1.0 - p) / 3.0).sqrt();
        for l in letters {
            let w = if l == PauliLetter::I { p.sqrt() } else { err_w };
            if w > 0.0 {
                ops.push(l.matrix() * C::new(w, 0.0));
            }
        }
    } else {
        let err_w = ((1.0 - p) / 15.0).sqrt();
        for a in letters {
            for b in letters {
                let is_id = a == PauliLetter::I && b == PauliLetter::I;
                let w = if is_id { p.sqrt() } else { err_w };
                if w > 0.0 {
                    ops.push(a.matrix().kronecker(&b.matrix()) * C::new(w, 0.0));
                }
            }
        }
    }
    KrausChannel::new(ops)
}

/// Combined amplitude and phase damping over an idle window.
///
/// gamma = 1 - exp(-t/T1) and the extra pure-dephasing factor is chosen so
/// that coherences decay by exactly exp(-t/T2). Requires T2 <= 2*T1.
pub fn idle_damping_channel(
    duration_us: f64,
    t1_us: f64,
    t2_us: f64,
) -> Result<KrausChannel, QuantumError> {
    if t1_us <= 0.0 || t2_us <= 0.0 {
        return Err(QuantumError::InvalidState(
            "T1 and T2 must be positive".into(),
        ));
    }
    if t2_us > 2.0 * t1_us + 1e-12 {
        return Err(QuantumError::InvalidState(format!(
            "T2 = {t2_us} exceeds 2*T1 = {}",
            2.0 * t1_us
        )));
    }
    let t = duration_us.max(0.0);
    let gamma = 1.0 - (-t / t1_us).exp();
    // residual dephasing beyond the amplitude-damping contribution
    let lambda = 1.0 - (-2.0 * t * (1.0 / t2_us - 0.5 / t1_us)).exp();
    let lam = lambda.clamp(0.0, 1.0);
    let mut k0 = DMatrix::zeros(2, 2);
    k0[(0, 0)] = C::new(1.0, 0.0);
    k0[(1, 1)] = C::new(((1.0 - gamma) * (1.0 - lam)).sqrt(), 0.0);
    let mut k1 = DMatrix::zeros(2, 2);
    k1[(0, 1)] = C::new(gamma.sqrt(), 0.0);
    let mut k2 = DMatrix::zeros(2, 2);
    k2[(1, 1)] = C::new(((1.0 - gamma) * lam).sqrt(), 0.0);
    KrausChannel::new(vec![k0, k1, k2])
}

/// Which contributions a device-derived noise model includes.
#[derive(Debug, Clone, Copy)]
pub struct NoiseOptions {
    pub gate_errors: bool,
    pub idle_decoherence: bool,
    pub readout_errors: bool,
}

impl Default for NoiseOptions {
    fn default() -> Self {
        NoiseOptions {
            gate_errors: true,
            idle_decoherence: true,
            readout_errors: true,
        }
    }
}

impl NoiseOptions {
    pub fn measurement_only() -> Self {
        NoiseOptions {
            gate_errors: false,
            idle_decoherence: false,
            readout_errors: true,
        }
    }

    pub fn gates_only() -> Self {
        NoiseOptions {
            gate_errors: true,
            idle_decoherence: false,
            readout_errors: false,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct GateErrorSpec {
    pub default_p_err: f64,
    pub per_qubit: BTreeMap<usize, f64>,
    pub per_edge: BTreeMap<(usize, usize), f64>,
    pub arity: usize,
}

/// Simulation noise model: depolarizing channels after gates, idle damping
/// from (duration, T1, T2), and classical readout flips at measurement.
#[derive(Debug, Clone, Default)]
pub struct NoiseModel {
    pub(crate) gate_errors: BTreeMap<String, GateErrorSpec>,
    /// Per-qubit (T1, T2); present only when idle decoherence is modelled.
    pub(crate) idle: Option<Vec<(f64, f64)>>,
    /// Gate durations used to schedule idle windows.
    pub(crate) durations: BTreeMap<String, (f64, BTreeMap<usize, f64>)>,
    /// Per-qubit (p(read 1 | 0), p(read 0 | 1)).
    pub(crate) readout: Option<Vec<(f64, f64)>>,
}

impl NoiseModel {
    pub fn new() -> Self {
        NoiseModel::default()
    }

    pub fn is_trivial(&self) -> bool {
        self.gate_errors.is_empty() && self.idle.is_none() && self.readout.is_none()
    }

    pub fn has_idle(&self) -> bool {
        self.idle.is_some()
    }

    pub fn has_readout(&self) -> bool {
        self.readout.is_some()
    }

    /// Uniform depolarizing error rate after every `gate_name` gate.
    pub fn with_gate_depolarizing(mut self, gate_name: &str, error_rate: f64) -> Self {
        let arity = if gate_name == "cx" || gate_name == "cz" || gate_name == "swap" {
            2
        } else {
            1
        };
        self.gate_errors.insert(
            gate_name.to_string(),
            GateErrorSpec {
                default_p_err: error_rate,
                per_qubit: BTreeMap::new(),
                per_edge: BTreeMap::new(),
                arity,
            },
        );
        self
    }

    /// Readout flip probabilities, one `(p1_given_0, p0_given_1)` per qubit.
    pub fn with_readout(mut self, flips: Vec<(f64, f64)>) -> Self {
        self.readout = Some(flips);
        self
    }

    /// Symmetric readout flip on a single qubit of an `n`-qubit register.
    pub fn with_readout_on(mut self, num_qubits: usize, qubit: usize, eps: f64) -> Self {
        let mut flips = vec![(0.0, 0.0); num_qubits];
        flips[qubit] = (eps, eps);
        self.readout = Some(flips);
        self
    }

    pub fn readout_flips(&self, qubit: usize) -> (f64, f64) {
        match &self.readout {
            Some(v) if qubit < v.len() => v[qubit],
            _ => (0.0, 0.0),
        }
    }

    /// Channel applied after a gate, if any.
    pub fn gate_channel(&self, name: &str, qubits: &[usize]) -> Option<KrausChannel> {
        let spec = self.gate_errors.get(name)?;
        let p_err = if qubits.len() == 2 {
            let key = (
                qubits[0].min(qubits[1]),
                qubits[0].max(qubits[1]),
            );
            spec.per_edge
                .get(&key)
                .copied()
                .unwrap_or(spec.default_p_err)
        } else {
            spec.per_qubit
                .get(&qubits[0])
                .copied()
                .unwrap_or(spec.default_p_err)
        };
        if p_err <= 0.0 {
            return None;
        }
        Some(
            depolarizing_channel(1.0 - p_err, spec.arity)
                .expect("validated error rate"),
        )
    }

    /// Idle channel for `qubit` over `duration_us`, when idle noise is on.
    pub fn idle_channel(&self, qubit: usize, duration_us: f64) -> Option<KrausChannel> {
        let idle = self.idle.as_ref()?;
        let (t1, t2) = *idle.get(qubit)?;
        if duration_us <= 0.0 {
            return None;
        }
        Some(idle_damping_channel(duration_us, t1, t2).expect("validated T1/T2"))
    }

    /// Re-index per-qubit data onto a compacted register: local wire `i`
    /// takes the properties of physical qubit `active[i]`.
    pub fn restricted_to(&self, active: &[usize]) -> NoiseModel {
        let position = |q: usize| active.iter().position(|&a| a == q);
        let mut gate_errors = BTreeMap::new();
        for (name, spec) in &self.gate_errors {
            let mut per_qubit = BTreeMap::new();
            for (&q, &e) in &spec.per_qubit {
                if let Some(local) = position(q) {
                    per_qubit.insert(local, e);
                }
            }
            let mut per_edge = BTreeMap::new();
            for (&(a, b), &e) in &spec.per_edge {
                if let (Some(la), Some(lb)) = (position(a), position(b)) {
                    per_edge.insert((la.min(lb), la.max(lb)), e);
                }
            }
            gate_errors.insert(
                name.clone(),
                GateErrorSpec {
                    default_p_err: spec.default_p_err,
                    per_qubit,
                    per_edge,
                    arity: spec.arity,
                },
            );
        }
        let idle = self
            .idle
            .as_ref()
            .map(|v| active.iter().map(|&q| v[q]).collect());
        let mut durations = BTreeMap::new();
        for (name, (mean, per_qubit)) in &self.durations {
            let mut local = BTreeMap::new();
            for (&q, &d) in per_qubit {
                if let Some(lq) = position(q) {
                    local.insert(lq, d);
                }
            }
            durations.insert(name.clone(), (*mean, local));
        }
        let readout = self
            .readout
            .as_ref()
            .map(|v| active.iter().map(|&q| v[q]).collect());
        NoiseModel {
            gate_errors,
            idle,
            durations,
            readout,
        }
    }

    pub(crate) fn duration_of(&self, name: &str, qubits: &[usize]) -> Option<f64> {
        let (mean, per_qubit) = self.durations.get(name)?;
        if qubits.len() == 1 {
            if let Some(d) = per_qubit.get(&qubits[0]) {
                return Some(*d);
            }
        }
        Some(*mean)
    }
}

impl crate::circuit::DurationSource for NoiseModel {
    fn gate_duration(&self, name: &str, qubits: &[usize]) -> Option<f64> {
        self.duration_of(name, qubits)
    }
}

/// Build a simulation noise model from a device description.
pub fn noise_from_device(device: &DeviceModel, options: NoiseOptions) -> NoiseModel {
    let mut model = NoiseModel::new();
    if options.gate_errors {
        for (name, spec) in &device.gates {
            // id-gate errors are environmental; idle decoherence models them
            if name == "id" || name == "barrier" {
                continue;
            }
            let arity = if name == "cx" || name == "cz" || name == "swap" {
                2
            } else {
                1
            };
            let mut per_qubit = BTreeMap::new();
            for (k, o) in &spec.per_qubit {
                if let (Ok(q), Some(e)) = (k.parse::<usize>(), o.error) {
                    per_qubit.insert(q, e);
                }
            }
            let mut per_edge = BTreeMap::new();
            for (k, o) in &spec.per_edge {
                if let Some((a, b)) = k.split_once('-') {
                    if let (Ok(a), Ok(b), Some(e)) =
                        (a.parse::<usize>(), b.parse::<usize>(), o.error)
                    {
                        per_edge.insert((a.min(b), a.max(b)), e);
                    }
                }
            }
            if spec.error > 0.0 || !per_qubit.is_empty() || !per_edge.is_empty() {
                model.gate_errors.insert(
                    name.clone(),
                    GateErrorSpec {
                        default_p_err: spec.error,
                        per_qubit,
                        per_edge,
                        arity,
                    },
                );
            }
        }
    }
    if options.idle_decoherence {
        model.idle = Some(device.qubits.iter().map(|q| (q.t1_us, q.t2_us)).collect());
        for (name, spec) in &device.gates {
            let mut per_qubit = BTreeMap::new();
            for (k, o) in &spec.per_qubit {
                if let (Ok(q), Some(d)) = (k.parse::<usize>(), o.duration_us) {
                    per_qubit.insert(q, d);
                }
            }
            model
                .durations
                .insert(name.clone(), (spec.duration_us, per_qubit));
        }
    }
    if options.readout_errors {
        model.readout = Some(
            device
                .qubits
                .iter()
                .map(|q| (q.readout_p1_given_0, q.readout_p0_given_1))
                .collect(),
        );
    }
    model
}
