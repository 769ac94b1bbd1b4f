//! Device descriptions: coupling graph, gate durations and error rates,
//! readout flip probabilities, and T1/T2 times.
//!
//! Normative JSON schema (versioned by this module):
//! ```json
//! {
//!   "name": "...", "num_qubits": N,
//!   "edges": [[a, b], ...],
//!   "gates": {
//!     "id":  {"duration_us": f, "error": f, "per_qubit": {"3": {"duration_us": f, "error": f}}},
//!     "cx":  {"duration_us": f, "error": f, "per_edge": {"1-13": {"error": f}}},
//!     ...
//!   },
//!   "qubits": [{"t1_us": f, "t2_us": f, "readout_p1_given_0": f, "readout_p0_given_1": f}, ...]
//! }
//! ```

use crate::circuit::DurationSource;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DeviceError {
    #[error("cannot read device file: {0}")]
    Io(#[from] std::io::Error),
    #[error("device file is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("device schema violations:\n{}", .0.join("\n"))]
    Schema(Vec<String>),
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct GateOverride {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_us: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GateSpec {
    pub duration_us: f64,
    #[serde(default)]
    pub error: f64,
    /// Keyed by qubit index rendered as a string.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub per_qubit: BTreeMap<String, GateOverride>,
    /// Keyed by "a-b" with a < b.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub per_edge: BTreeMap<String, GateOverride>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QubitSpec {
    pub t1_us: f64,
    pub t2_us: f64,
    pub readout_p1_given_0: f64,
    pub readout_p0_given_1: f64,
}

/// Validated device model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeviceModel {
    pub name: String,
    pub num_qubits: usize,
    pub edges: Vec<(usize, usize)>,
    pub gates: BTreeMap<String, GateSpec>,
    pub qubits: Vec<QubitSpec>,
}

impl DeviceModel {
    pub fn from_json_str(text: &str) -> Result<Self, DeviceError> {
        let model: DeviceModel = serde_json::from_str(text)?;
        model.validate()?;
        Ok(model)
    }

    pub fn load(path: &Path) -> Result<Self, DeviceError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    fn validate(&self) -> Result<(), DeviceError> {
        let mut errs = Vec::new();
        let rate_ok = |v: f64| (0.0..=1.0).contains(&v);
        if self.qubits.len() != self.num_qubits {
            errs.push(format!(
                "qubits: expected {} entries, got {}",
                self.num_qubits,
                self.qubits.len()
            ));
        }
        for (i, (a, b)) in self.edges.iter().enumerate() {
            if *a >= self.num_qubits || *b >= self.num_qubits {
                errs.push(format!("edges[{i}]: ({a},{b}) references an invalid qubit"));
            }
            if a == b {
                errs.push(format!("edges[{i}]: self-loop ({a},{b})"));
            }
        }
        for (name, g) in &self.gates {
            if g.duration_us < 0.0 {
                errs.push(format!("gates.{name}.duration_us: negative"));
            }
            if !rate_ok(g.error) {
                errs.push(format!("gates.{name}.error: {} outside [0, 1]", g.error));
            }
            for (key, o) in &g.per_qubit {
                if key.parse::<usize>().map(|q| q >= self.num_qubits) != Ok(false) {
                    errs.push(format!("gates.{name}.per_qubit.{key}: invalid qubit"));
                }
                if let Some(e) = o.error {
                    if !rate_ok(e) {
                        errs.push(format!(
                            "gates.{name}.per_qubit.{key}.error: {e} outside [0, 1]"
                        ));
                    }
                }
                if let Some(d) = o.duration_us {
                    if d < 0.0 {
                        errs.push(format!("gates.{name}.per_qubit.{key}.duration_us: negative"));
                    }
                }
            }
            for (key, o) in &g.per_edge {
                let ok = key
                    .split_once('-')
                    .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
                    .map(|(a, b)| a < self.num_qubits && b < self.num_qubits)
                    .unwrap_or(false);
                if !ok {
                    errs.push(format!("gates.{name}.per_edge.{key}: invalid edge key"));
                }
                if let Some(e) = o.error {
                    if !rate_ok(e) {
                        errs.push(format!(
                            "gates.{name}.per_edge.{key}.error: {e} outside [0, 1]"
                        ));
                    }
                }
            }
        }
        for (i, q) in self.qubits.iter().enumerate() {
            if q.t1_us <= 0.0 {
                errs.push(format!("qubits[{i}].t1_us: must be positive"));
            }
            if q.t2_us <= 0.0 {
                errs.push(format!("qubits[{i}].t2_us: must be positive"));
            }
            if q.t2_us > 2.0 * q.t1_us + 1e-12 {
                errs.push(format!(
                    "qubits[{i}].t2_us: {} exceeds 2*t1_us = {}",
                    q.t2_us,
                    2.0 * q.t1_us
                ));
            }
            if !rate_ok(q.readout_p1_given_0) {
                errs.push(format!(
                    "qubits[{i}].readout_p1_given_0: {} outside [0, 1]",
                    q.readout_p1_given_0
                ));
            }
            if !rate_ok(q.readout_p0_given_1) {
                errs.push(format!(
                    "qubits[{i}].readout_p0_given_1: {} outside [0, 1]",
                    q.readout_p0_given_1
                ));
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(DeviceError::Schema(errs))
        }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges
            .iter()
            .any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b))
    }

    fn edge_key(a: usize, b: usize) -> String {
        format!("{}-{}", a.min(b), a.max(b))
    }

    /// Error rate for `name` on `qubits`, honouring overrides.
    pub fn gate_error(&self, name: &str, qubits: &[usize]) -> Option<f64> {
        let g = self.gates.get(name)?;
        if qubits.len() == 2 {
            let key = Self::edge_key(qubits[0], qubits[1]);
            if let Some(o) = g.per_edge.get(&key) {
                if let Some(e) = o.error {
                    return Some(e);
                }
            }
        } else if qubits.len() == 1 {
            if let Some(o) = g.per_qubit.get(&qubits[0].to_string()) {
                if let Some(e) = o.error {
                    return Some(e);
                }
            }
        }
        Some(g.error)
    }

    /// Mean duration of a gate ignoring overrides (reporting convenience).
    pub fn mean_duration(&self, name: &str) -> Option<f64> {
        self.gates.get(name).map(|g| g.duration_us)
    }
}

impl DurationSource for DeviceModel {
    fn gate_duration(&self, name: &str, qubits: &[usize]) -> Option<f64> {
        let g = self.gates.get(name)?;
        if qubits.len() == 2 {
            let key = Self::edge_key(qubits[0], qubits[1]);
            if let Some(o) = g.per_edge.get(&key) {
                if let Some(d) = o.duration_us {
                    return Some(d);
                }
            }
        } else if qubits.len() == 1 {
            if let Some(o) = g.per_qubit.get(&qubits[0].to_string()) {
                if let Some(d) = o.duration_us {
                    return Some(d);
                }
            }
        }
        Some(g.duration_us)
    }
}

/// Column-stochastic readout confusion matrix over an ordered qubit list.
/// Columns are indexed by prepared basis state, rows by observed bitstring.
#[derive(Debug, Clone)]
pub struct CalibrationMatrix {
    mat: DMatrix<f64>,
    num_bits: usize,
}

impl CalibrationMatrix {
    pub fn new(mat: DMatrix<f64>) -> Result<Self, DeviceError> {
        let dim = mat.nrows();
        let mut errs = Vec::new();
        if dim != mat.ncols() || !dim.is_power_of_two() {
            errs.push(format!(
                "calibration matrix must be square 2^m, got {}x{}",
                dim,
                mat.ncols()
            ));
        }
        for j in 0..mat.ncols() {
            let sum: f64 = (0..dim).map(|i| mat[(i, j)]).sum();
            if (sum - 1.0).abs() > 1e-9 {
                errs.push(format!("column {j} sums to {sum}, expected 1"));
            }
            for i in 0..dim {
                if !(-1e-12..=1.0 + 1e-12).contains(&mat[(i, j)]) {
                    errs.push(format!("entry ({i},{j}) = {} outside [0, 1]", mat[(i, j)]));
                }
            }
        }
        if !errs.is_empty() {
            return Err(DeviceError::Schema(errs));
        }
        let num_bits = dim.trailing_zeros() as usize;
        Ok(CalibrationMatrix { mat, num_bits })
    }

    pub fn identity(num_bits: usize) -> Self {
        let dim = 1usize << num_bits;
        CalibrationMatrix {
            mat: DMatrix::identity(dim, dim),
            num_bits,
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn num_bits(&self) -> usize {
        self.num_bits
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Ratio of largest to smallest singular value.
    pub fn condition_number(&self) -> f64 {
        let sv = self.mat.clone().singular_values();
        let max = sv.max();
        let min = sv.min();
        if min <= 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }
}

/// Tensor product of per-qubit 2x2 confusion matrices
/// `[[1-e0, e1], [e0, 1-e1]]` in the given qubit order (first qubit = most
/// significant bit of the observed index).
pub fn readout_confusion(device: &DeviceModel, qubits: &[usize]) -> CalibrationMatrix {
    let mut mat = DMatrix::from_element(1, 1, 1.0);
    for &q in qubits {
        let spec = &device.qubits[q];
        let e0 = spec.readout_p1_given_0;
        let e1 = spec.readout_p0_given_1;
        let single = DMatrix::from_row_slice(2, 2, &[1.0 - e0, e1, e0, 1.0 - e1]);
        mat = mat.kronecker(&single);
    }
    let num_bits = qubits.len();
    CalibrationMatrix { mat, num_bits }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_json(extra: &str) -> String {
        format!(
            r#"{{
              "name": "toy", "num_qubits": 2,
              "edges": [[0, 1]],
              "gates": {{ "cx": {{"duration_us": 1.0, "error": {extra}}} }},
              "qubits": [
                {{"t1_us": 50, "t2_us": 60, "readout_p1_given_0": 0.02, "readout_p0_given_1": 0.05}},
                {{"t1_us": 50, "t2_us": 60, "readout_p1_given_0": 0.0, "readout_p0_given_1": 0.0}}
              ]
            }}"#
        )
    }

    #[test]
    fn loads_and_validates() {
        let d = DeviceModel::from_json_str(&minimal_json("0.04")).unwrap();
        assert!(d.has_edge(1, 0));
        assert_eq!(d.gate_error("cx", &[0, 1]), Some(0.04));
    }

    #[test]
    fn out_of_range_rate_names_the_field() {
        let err = DeviceModel::from_json_str(&minimal_json("1.5")).unwrap_err();
        let text = err.to_string();
        assert!(text.contains("gates.cx.error"), "got: {text}");
    }

    #[test]
    fn confusion_matrix_definition() {
        let d = DeviceModel::from_json_str(&minimal_json("0.04")).unwrap();
        let cal = readout_confusion(&d, &[0]);
        let m = cal.matrix();
        assert!((m[(0, 0)] - 0.98).abs() < 1e-12);
        assert!((m[(1, 0)] - 0.02).abs() < 1e-12);
        assert!((m[(0, 1)] - 0.05).abs() < 1e-12);
        assert!((m[(1, 1)] - 0.95).abs() < 1e-12);

        let zero = readout_confusion(&d, &[1]);
        assert!((zero.matrix() - DMatrix::identity(2, 2)).abs().max() < 1e-12);

        let two = readout_confusion(&d, &[0, 1]);
        for j in 0..4 {
            let col: f64 = (0..4).map(|i| two.matrix()[(i, j)]).sum();
            assert!((col - 1.0).abs() < 1e-12);
        }
    }
}
