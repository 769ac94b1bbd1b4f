//! Conditional state tomography: measurement-setting generation, count
//! collection, linear-inversion reconstruction with PSD projection, and
//! calibration-matrix readout mitigation.

use crate::circuit::{
    simulate_density, simulate_trajectory, Circuit, CircuitError, Instruction, MeasureBasis,
};
use crate::device::{readout_confusion, CalibrationMatrix, DeviceModel};
use crate::noise::NoiseModel;
use crate::quantum::{pauli_ket_action, DensityMatrix, PauliLetter, PauliString};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TomographyError {
    #[error("condition qubits overlap the tomographed data qubits")]
    ConditionOverlapsData,
    #[error("dataset must contain all 3^n settings in canonical order")]
    MissingSettings,
    #[error("setting {0} has zero accepted shots")]
    ZeroAccepted(usize),
    #[error("calibration matrix covers {cal} bits but the dataset measures {measured}")]
    CalibrationMismatch { cal: usize, measured: usize },
    #[error("calibration matrix is numerically singular (condition number {0:.3e})")]
    SingularCalibration(f64),
    #[error("condition qubit {0} is measured more than once in the base circuit")]
    AmbiguousConditionMeasure(usize),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Quantum(#[from] crate::quantum::QuantumError),
}

/// Per-data-qubit measurement bases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisSetting(pub Vec<MeasureBasis>);

impl BasisSetting {
    pub fn label(&self) -> String {
        self.0
            .iter()
            .map(|b| match b {
                MeasureBasis::X => 'X',
                MeasureBasis::Y => 'Y',
                MeasureBasis::Z => 'Z',
            })
            .collect()
    }
}

/// All 3^n settings in lexicographic X < Y < Z order.
pub fn tomo_settings(n: usize) -> Vec<BasisSetting> {
    assert!(n >= 1, "tomography needs at least one qubit");
    let order = [MeasureBasis::X, MeasureBasis::Y, MeasureBasis::Z];
    let total = 3usize.pow(n as u32);
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut letters = vec![MeasureBasis::X; n];
        let mut c = code;
        for i in (0..n).rev() {
            letters[i] = order[c % 3];
            c /= 3;
        }
        out.push(BasisSetting(letters));
    }
    out
}

/// Ancilla-outcome post-selection rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub qubits: Vec<usize>,
    pub required: Vec<u8>,
}

impl Condition {
    pub fn none() -> Self {
        Condition {
            qubits: vec![],
            required: vec![],
        }
    }
}

/// How counts are gathered.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CollectMode {
    /// Infinite-shot probabilities from the exact simulator.
    Exact,
    /// Sampled counts.
    Shots { shots_per_setting: usize },
}

/// Conditioned measurement counts per basis setting.
///
/// Joint bitstrings run data bits first (in `data_qubits` order) followed by
/// the condition bits (in `condition.qubits` order).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TomographyDataset {
    pub num_data: usize,
    pub data_qubits: Vec<usize>,
    pub condition: Condition,
    pub settings: Vec<BasisSetting>,
    pub joint_counts: Vec<BTreeMap<String, f64>>,
    pub accepted: Vec<f64>,
    pub total: Vec<f64>,
}

impl TomographyDataset {
    /// Qubits behind the joint bitstring, in order.
    pub fn measured_qubits(&self) -> Vec<usize> {
        let mut v = self.data_qubits.clone();
        v.extend(&self.condition.qubits);
        v
    }

    /// Data-bit counts of shots passing the ancilla condition.
    pub fn conditioned_counts(&self, setting: usize) -> BTreeMap<String, f64> {
        let n = self.num_data;
        let mut out = BTreeMap::new();
        for (key, count) in &self.joint_counts[setting] {
            let (data, cond) = key.split_at(n);
            let passes = cond
                .chars()
                .zip(&self.condition.required)
                .all(|(c, r)| (c == '1') as u8 == *r);
            if passes && *count > 0.0 {
                *out.entry(data.to_string()).or_insert(0.0) += count;
            }
        }
        out
    }

    pub fn accepted_fraction(&self, setting: usize) -> f64 {
        if self.total[setting] <= 0.0 {
            0.0
        } else {
            self.accepted[setting] / self.total[setting]
        }
    }
}

/// Append basis rotations and measurements for one setting; condition
/// qubits keep their existing terminal measurements (or get Z measurements
/// appended when the base circuit has none).
fn setting_circuit(
    base: &Circuit,
    data_qubits: &[usize],
    condition: &Condition,
    setting: &BasisSetting,
) -> Result<(Circuit, Vec<usize>, Vec<usize>), TomographyError> {
    let mut c = base.clone();
    // locate or create condition measurements
    let mut cond_clbits = Vec::with_capacity(condition.qubits.len());
    for &q in &condition.qubits {
        let found: Vec<usize> = base
            .instructions
            .iter()
            .filter_map(|i| match i {
                Instruction::Measure { qubit, clbit, .. } if *qubit == q => Some(*clbit),
                _ => None,
            })
            .collect();
        match found.len() {
            0 => {
                let clbit = c.num_clbits;
                c.num_clbits += 1;
                c.measure(q, clbit);
                cond_clbits.push(clbit);
            }
            1 => cond_clbits.push(found[0]),
            _ => return Err(TomographyError::AmbiguousConditionMeasure(q)),
        }
    }
    // append rotated data measurements
    let mut data_clbits = Vec::with_capacity(data_qubits.len());
    let base_clbits = c.num_clbits;
    c.num_clbits += data_qubits.len();
    for (i, (&q, basis)) in data_qubits.iter().zip(&setting.0).enumerate() {
        c.measure_in(q, base_clbits + i, *basis);
        data_clbits.push(base_clbits + i);
    }
    Ok((c, data_clbits, cond_clbits))
}

/// Run the tomography experiment: per setting, append basis-change
/// measurements, simulate, and record jointly-measured counts.
pub fn collect(
    base: &Circuit,
    data_qubits: &[usize],
    condition: &Condition,
    settings: &[BasisSetting],
    mode: CollectMode,
    noise: Option<&NoiseModel>,
    seed: u64,
) -> Result<TomographyDataset, TomographyError> {
    if condition.qubits.iter().any(|q| data_qubits.contains(q)) {
        return Err(TomographyError::ConditionOverlapsData);
    }
    let mut joint_counts = Vec::with_capacity(settings.len());
    let mut accepted = Vec::with_capacity(settings.len());
    let mut total = Vec::with_capacity(settings.len());
    for (si, setting) in settings.iter().enumerate() {
        let (c, data_clbits, cond_clbits) =
            setting_circuit(base, data_qubits, condition, setting)?;
        let dist = match mode {
            CollectMode::Exact => simulate_density(&c, noise)?.distribution,
            CollectMode::Shots { shots_per_setting } => {
                let setting_seed = crate::circuit::sim_internals::mix_seed(seed, si as u64);
                simulate_trajectory(&c, noise, shots_per_setting, setting_seed)?.distribution
            }
        };
        let mut counts: BTreeMap<String, f64> = BTreeMap::new();
        let mut acc = 0.0;
        let mut tot = 0.0;
        for (bits, weight) in dist {
            let chars: Vec<char> = bits.chars().collect();
            let mut key = String::with_capacity(data_clbits.len() + cond_clbits.len());
            for &cb in &data_clbits {
                key.push(chars[cb]);
            }
            for &cb in &cond_clbits {
                key.push(chars[cb]);
            }
            let passes = cond_clbits
                .iter()
                .zip(&condition.required)
                .all(|(&cb, r)| (chars[cb] == '1') as u8 == *r);
            tot += weight;
            if passes {
                acc += weight;
            }
            *counts.entry(key).or_insert(0.0) += weight;
        }
        joint_counts.push(counts);
        accepted.push(acc);
        total.push(tot);
    }
    Ok(TomographyDataset {
        num_data: data_qubits.len(),
        data_qubits: data_qubits.to_vec(),
        condition: condition.clone(),
        settings: settings.to_vec(),
        joint_counts,
        accepted,
        total,
    })
}

/// Linear inversion over Pauli expectation estimates followed by projection
/// to the nearest unit-trace PSD matrix.
pub fn reconstruct(ds: &TomographyDataset) -> Result<DensityMatrix, TomographyError> {
    let n = ds.num_data;
    let canonical = tomo_settings(n);
    if ds.settings != canonical {
        return Err(TomographyError::MissingSettings);
    }
    for (si, _) in ds.settings.iter().enumerate() {
        if ds.accepted[si] <= 0.0 {
            return Err(TomographyError::ZeroAccepted(si));
        }
    }
    let num_paulis = 4usize.pow(n as u32);
    let mut sums = vec![0.0f64; num_paulis];
    let mut norms = vec![0.0f64; num_paulis];
    for (si, setting) in ds.settings.iter().enumerate() {
        let counts = ds.conditioned_counts(si);
        // per-qubit letter codes of this setting (X=1, Y=2, Z=3)
        let letter_code: Vec<usize> = setting
            .0
            .iter()
            .map(|b| match b {
                MeasureBasis::X => 1,
                MeasureBasis::Y => 2,
                MeasureBasis::Z => 3,
            })
            .collect();
        for (bits, count) in counts {
            let b: Vec<u8> = bits.bytes().map(|ch| (ch == b'1') as u8).collect();
            // accumulate every Pauli compatible with this setting
            for mask in 0..(1usize << n) {
                let mut pidx = 0usize;
                let mut parity = 0u8;
                for q in 0..n {
                    pidx *= 4;
                    if (mask >> (n - 1 - q)) & 1 == 1 {
                        pidx += letter_code[q];
                        parity ^= b[q];
                    }
                }
                let sign = if parity == 1 { -1.0 } else { 1.0 };
                sums[pidx] += sign * count;
                norms[pidx] += count;
            }
        }
    }
    let dim = 1usize << n;
    let mut mat: DMatrix<num_complex::Complex64> = DMatrix::zeros(dim, dim);
    let letters = [
        PauliLetter::I,
        PauliLetter::X,
        PauliLetter::Y,
        PauliLetter::Z,
    ];
    for pidx in 0..num_paulis {
        if norms[pidx] <= 0.0 {
            continue;
        }
        let expectation = sums[pidx] / norms[pidx];
        if expectation == 0.0 {
            continue;
        }
        let mut ls = vec![PauliLetter::I; n];
        let mut c = pidx;
        for q in (0..n).rev() {
            ls[q] = letters[c % 4];
            c /= 4;
        }
        let p = PauliString::new(ls, 1);
        let scale = expectation / dim as f64;
        for j in 0..dim {
            let (i, amp) = pauli_ket_action(&p, j);
            mat[(i, j)] += amp * num_complex::Complex64::new(scale, 0.0);
        }
    }
    // exact Hermitian symmetrisation before the eigenvalue projection
    let mat = (mat.clone() + mat.adjoint()) * num_complex::Complex64::new(0.5, 0.0);
    let raw = DensityMatrix::from_raw(n, mat);
    Ok(raw.project_to_physical())
}

/// Where calibration columns come from.
pub enum CalibrationSource<'a> {
    /// The analytic tensor-product confusion matrix.
    Exact {
        device: &'a DeviceModel,
        qubits: Vec<usize>,
    },
    /// Finite-shot estimation: prepare each basis state, sample readout.
    Sampled {
        device: &'a DeviceModel,
        qubits: Vec<usize>,
        shots: usize,
        seed: u64,
    },
}

/// Build a measurement calibration matrix by preparing each basis state.
pub fn build_calibration(source: CalibrationSource<'_>) -> CalibrationMatrix {
    match source {
        CalibrationSource::Exact { device, qubits } => readout_confusion(device, &qubits),
        CalibrationSource::Sampled {
            device,
            qubits,
            shots,
            seed,
        } => {
            let m = qubits.len();
            let dim = 1usize << m;
            let mut mat = DMatrix::zeros(dim, dim);
            for col in 0..dim {
                let mut rng = ChaCha8Rng::seed_from_u64(
                    crate::circuit::sim_internals::mix_seed(seed, col as u64),
                );
                for _ in 0..shots {
                    let mut observed = 0usize;
                    for (pos, &q) in qubits.iter().enumerate() {
                        let spec = &device.qubits[q];
                        let true_bit = (col >> (m - 1 - pos)) & 1;
                        let flip = if true_bit == 0 {
                            spec.readout_p1_given_0
                        } else {
                            spec.readout_p0_given_1
                        };
                        let bit = if flip > 0.0 && rng.gen::<f64>() < flip {
                            1 - true_bit
                        } else {
                            true_bit
                        };
                        observed |= bit << (m - 1 - pos);
                    }
                    mat[(observed, col)] += 1.0;
                }
            }
            mat /= shots as f64;
            CalibrationMatrix::new(mat).expect("sampled columns are stochastic")
        }
    }
}

/// Nonnegative least squares via the Lawson-Hanson active-set method.
fn nnls(c: &DMatrix<f64>, y: &DVector<f64>) -> DVector<f64> {
    let n = c.ncols();
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let tol = 1e-12 * c.amax().max(1.0) * y.amax().max(1.0);
    for _outer in 0..(4 * n) {
        let residual = y - c * &x;
        let w = c.transpose() * residual;
        let mut best: Option<(usize, f64)> = None;
        for j in 0..n {
            if !passive[j] && w[j] > tol {
                if best.map(|(_, bw)| w[j] > bw).unwrap_or(true) {
                    best = Some((j, w[j]));
                }
            }
        }
        let Some((j, _)) = best else { break };
        passive[j] = true;
        loop {
            // least squares restricted to the passive set
            let cols: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            let sub = DMatrix::from_fn(c.nrows(), cols.len(), |r, k| c[(r, cols[k])]);
            let svd = sub.svd(true, true);
            let z_sub = svd.solve(y, 1e-12).expect("SVD solve");
            if z_sub.iter().all(|&v| v > 0.0) {
                x.fill(0.0);
                for (k, &i) in cols.iter().enumerate() {
                    x[i] = z_sub[k];
                }
                break;
            }
            // step toward z until the first passive variable hits zero
            let mut alpha = f64::INFINITY;
            for (k, &i) in cols.iter().enumerate() {
                if z_sub[k] <= 0.0 {
                    let a = x[i] / (x[i] - z_sub[k]);
                    if a < alpha {
                        alpha = a;
                    }
                }
            }
            for (k, &i) in cols.iter().enumerate() {
                x[i] += alpha * (z_sub[k] - x[i]);
                if x[i] <= tol.max(1e-14) {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
        }
    }
    x
}

/// Invert readout errors per setting by constrained nonnegative least
/// squares over the joint (data + ancilla) counts, then re-apply the
/// ancilla condition.
pub fn mitigate(
    ds: &TomographyDataset,
    cal: &CalibrationMatrix,
) -> Result<TomographyDataset, TomographyError> {
    let m = ds.num_data + ds.condition.qubits.len();
    if cal.num_bits() != m {
        return Err(TomographyError::CalibrationMismatch {
            cal: cal.num_bits(),
            measured: m,
        });
    }
    let cond = cal.condition_number();
    if cond > 1e8 {
        return Err(TomographyError::SingularCalibration(cond));
    }
    let dim = 1usize << m;
    let cmat = cal.matrix();
    let mut out = ds.clone();
    for si in 0..ds.settings.len() {
        let mut y = DVector::zeros(dim);
        for (bits, count) in &ds.joint_counts[si] {
            let idx = bits
                .bytes()
                .fold(0usize, |acc, b| (acc << 1) | (b == b'1') as usize);
            y[idx] += count;
        }
        let observed_total: f64 = y.iter().sum();
        let mut x = nnls(cmat, &y);
        let solved_total: f64 = x.iter().sum();
        if solved_total > 0.0 {
            x *= observed_total / solved_total;
        }
        let mut counts = BTreeMap::new();
        let mut acc = 0.0;
        for idx in 0..dim {
            if x[idx] <= 0.0 {
                continue;
            }
            let bits: String = (0..m)
                .map(|b| {
                    if (idx >> (m - 1 - b)) & 1 == 1 {
                        '1'
                    } else {
                        '0'
                    }
                })
                .collect();
            let cond_part = &bits[ds.num_data..];
            let passes = cond_part
                .chars()
                .zip(&ds.condition.required)
                .all(|(c, r)| (c == '1') as u8 == *r);
            if passes {
                acc += x[idx];
            }
            counts.insert(bits, x[idx]);
        }
        out.joint_counts[si] = counts;
        out.accepted[si] = acc;
        out.total[si] = observed_total;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{fidelity_to_pure, trace_distance, StateVector};

    #[test]
    fn settings_enumeration() {
        let s1 = tomo_settings(1);
        assert_eq!(s1.len(), 3);
        assert_eq!(s1[0].label(), "X");
        assert_eq!(s1[2].label(), "Z");
        assert_eq!(tomo_settings(2).len(), 9);
        assert_eq!(tomo_settings(5).len(), 243);
        assert_eq!(tomo_settings(2)[0].label(), "XX");
        assert_eq!(tomo_settings(2)[8].label(), "ZZ");
    }

    #[test]
    fn exact_reconstruction_of_zero_state() {
        let c = Circuit::new(1, 0);
        let ds = collect(
            &c,
            &[0],
            &Condition::none(),
            &tomo_settings(1),
            CollectMode::Exact,
            None,
            0,
        )
        .unwrap();
        let rho = reconstruct(&ds).unwrap();
        let zero = StateVector::basis(1, 0).unwrap();
        assert!((fidelity_to_pure(&zero, &rho).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn exact_reconstruction_of_bell_pair() {
        let mut c = Circuit::new(2, 0);
        c.h(0).cx(0, 1);
        let ds = collect(
            &c,
            &[0, 1],
            &Condition::none(),
            &tomo_settings(2),
            CollectMode::Exact,
            None,
            0,
        )
        .unwrap();
        let rho = reconstruct(&ds).unwrap();
        let r = simulate_density(&c, None).unwrap().final_density.unwrap();
        assert!(trace_distance(&rho, &r).unwrap() < 1e-10);
    }

    #[test]
    fn conditioning_keeps_matching_shots_only() {
        // entangle ancilla, condition on ancilla = 1
        let mut c = Circuit::new(2, 0);
        c.h(1).cx(1, 0);
        let cond = Condition {
            qubits: vec![1],
            required: vec![1],
        };
        let ds = collect(
            &c,
            &[0],
            &cond,
            &tomo_settings(1),
            CollectMode::Exact,
            None,
            0,
        )
        .unwrap();
        for si in 0..3 {
            assert!((ds.accepted_fraction(si) - 0.5).abs() < 1e-10);
        }
        let rho = reconstruct(&ds).unwrap();
        let one = StateVector::basis(1, 1).unwrap();
        assert!((fidelity_to_pure(&one, &rho).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn accepted_fraction_under_ancilla_readout_noise() {
        let mut c = Circuit::new(3, 0);
        c.h(0);
        let cond = Condition {
            qubits: vec![1, 2],
            required: vec![0, 0],
        };
        let mut flips = vec![(0.0, 0.0); 3];
        flips[1] = (0.05, 0.05);
        flips[2] = (0.05, 0.05);
        let noise = NoiseModel::new().with_readout(flips);
        let ds = collect(
            &c,
            &[0],
            &cond,
            &tomo_settings(1),
            CollectMode::Exact,
            Some(&noise),
            0,
        )
        .unwrap();
        for si in 0..3 {
            assert!((ds.accepted_fraction(si) - 0.95f64.powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_calibration_is_identity_on_datasets() {
        let mut c = Circuit::new(1, 0);
        c.h(0);
        let ds = collect(
            &c,
            &[0],
            &Condition::none(),
            &tomo_settings(1),
            CollectMode::Shots {
                shots_per_setting: 512,
            },
            None,
            5,
        )
        .unwrap();
        let cal = CalibrationMatrix::identity(1);
        let out = mitigate(&ds, &cal).unwrap();
        for si in 0..3 {
            assert_eq!(ds.joint_counts[si], out.joint_counts[si]);
            assert_eq!(ds.accepted[si], out.accepted[si]);
        }
    }

    #[test]
    fn mitigation_inverts_forward_confusion() {
        // push a known distribution through a confusion matrix, then recover
        let dev_json = r#"{
          "name": "t", "num_qubits": 2, "edges": [[0,1]],
          "gates": {"cx": {"duration_us": 1.0, "error": 0.0}},
          "qubits": [
            {"t1_us": 50, "t2_us": 60, "readout_p1_given_0": 0.06, "readout_p0_given_1": 0.03},
            {"t1_us": 50, "t2_us": 60, "readout_p1_given_0": 0.04, "readout_p0_given_1": 0.05}
          ]
        }"#;
        let dev = DeviceModel::from_json_str(dev_json).unwrap();
        let noise = NoiseModel::new()
            .with_readout(vec![(0.06, 0.03), (0.04, 0.05)]);
        let mut c = Circuit::new(2, 0);
        c.h(0).cx(0, 1);
        let shots = 8192;
        let ds = collect(
            &c,
            &[0, 1],
            &Condition::none(),
            &tomo_settings(2),
            CollectMode::Shots {
                shots_per_setting: shots,
            },
            Some(&noise),
            7,
        )
        .unwrap();
        let cal = build_calibration(CalibrationSource::Exact {
            device: &dev,
            qubits: vec![0, 1],
        });
        let fixed = mitigate(&ds, &cal).unwrap();
        // compare against a noiseless collection in total variation
        let clean = collect(
            &c,
            &[0, 1],
            &Condition::none(),
            &tomo_settings(2),
            CollectMode::Exact,
            None,
            0,
        )
        .unwrap();
        for si in 0..9 {
            let total: f64 = fixed.joint_counts[si].values().sum();
            let mut tv = 0.0;
            for key in ["00", "01", "10", "11"] {
                let a = fixed.joint_counts[si].get(key).copied().unwrap_or(0.0) / total;
                let b = clean.joint_counts[si].get(key).copied().unwrap_or(0.0);
                tv += (a - b).abs();
            }
            assert!(tv / 2.0 < 0.02, "setting {si}: tv {tv}");
        }
    }

    #[test]
    fn singular_calibration_rejected() {
        let mat = DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        let cal = CalibrationMatrix::new(mat).unwrap();
        let mut c = Circuit::new(1, 0);
        c.h(0);
        let ds = collect(
            &c,
            &[0],
            &Condition::none(),
            &tomo_settings(1),
            CollectMode::Exact,
            None,
            0,
        )
        .unwrap();
        assert!(matches!(
            mitigate(&ds, &cal),
            Err(TomographyError::SingularCalibration(_))
        ));
    }

    #[test]
    fn sampled_calibration_matches_exact() {
        let dev_json = r#"{
          "name": "t", "num_qubits": 1, "edges": [],
          "gates": {},
          "qubits": [{"t1_us": 50, "t2_us": 60, "readout_p1_given_0": 0.08, "readout_p0_given_1": 0.02}]
        }"#;
        let dev = DeviceModel::from_json_str(dev_json).unwrap();
        let exact = build_calibration(CalibrationSource::Exact {
            device: &dev,
            qubits: vec![0],
        });
        let sampled = build_calibration(CalibrationSource::Sampled {
            device: &dev,
            qubits: vec![0],
            shots: 8192,
            seed: 3,
        });
        let diff = (exact.matrix() - sampled.matrix()).abs().max();
        assert!(diff < 0.02, "diff {diff}");
    }

    #[test]
    fn reconstruct_rejects_incomplete_settings() {
        let c = Circuit::new(1, 0);
        let mut ds = collect(
            &c,
            &[0],
            &Condition::none(),
            &tomo_settings(1),
            CollectMode::Exact,
            None,
            0,
        )
        .unwrap();
        ds.settings.pop();
        ds.joint_counts.pop();
        ds.accepted.pop();
        ds.total.pop();
        assert!(matches!(
            reconstruct(&ds),
            Err(TomographyError::MissingSettings)
        ));
    }
}
