//! Post-selected depolarizing model of the fault qubits and the
//! spectral-norm fit of its no-error probability.

use crate::noise::depolarizing_channel;
use crate::quantum::{spectral_norm, DensityMatrix, QuantumError};
use serde::Serialize;

/// Per-Pauli error rate (1 - p) / 3 of a depolarizing channel with no-error
/// probability p.
pub fn per_pauli_error_rate(p: f64) -> f64 {
    (1.0 - p) / 3.0
}

/// Apply the single-qubit depolarizing channel with no-error probability `p`
/// independently to both fault qubits of a 5-qubit state.
pub fn eq1_channel(
    rho_ideal: &DensityMatrix,
    p: f64,
    fault_qubits: (usize, usize),
) -> Result<DensityMatrix, QuantumError> {
    if rho_ideal.num_qubits() != 5 {
        return Err(QuantumError::DimensionMismatch(format!(
            "expected a 5-qubit state, got {} qubits",
            rho_ideal.num_qubits()
        )));
    }
    if fault_qubits.0 == fault_qubits.1 {
        return Err(QuantumError::RepeatedTarget(fault_qubits.0));
    }
    let ch = depolarizing_channel(p, 1)?;
    let out = rho_ideal.apply_kraus(&ch, &[fault_qubits.0])?;
    out.apply_kraus(&ch, &[fault_qubits.1])
}

/// Outcome of the spectral-norm fit.
#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    pub p_opt: f64,
    /// Spectral norm of the residual at `p_opt`.
    pub residual: f64,
    /// (1 - p_opt) / 3.
    pub per_pauli_error_rate: f64,
    pub fault_qubits: (usize, usize),
    /// Coarse-grid (p, residual) samples for plotting.
    pub scan: Vec<(f64, f64)>,
}

const GRID_STEP: f64 = 1e-3;
const REFINE_TOL: f64 = 1e-5;

/// Find the no-error probability whose Eq.-channel image of `rho_ideal` is
/// closest in spectral norm to `rho_recon`: a [0, 1] grid scan at 1e-3
/// resolution followed by golden-section refinement to 1e-5. Deterministic.
pub fn fit_p(
    rho_recon: &DensityMatrix,
    rho_ideal: &DensityMatrix,
    fault_qubits: (usize, usize),
) -> Result<FitResult, QuantumError> {
    if rho_recon.num_qubits() != 5 || rho_ideal.num_qubits() != 5 {
        return Err(QuantumError::DimensionMismatch(
            "fit expects 5-qubit states".into(),
        ));
    }
    let objective = |p: f64| -> Result<f64, QuantumError> {
        let model = eq1_channel(rho_ideal, p, fault_qubits)?;
        Ok(spectral_norm(&(rho_recon.matrix() - model.matrix())))
    };

    let steps = (1.0 / GRID_STEP).round() as usize;
    let mut scan = Vec::with_capacity(steps + 1);
    let mut best = (0.0f64, f64::INFINITY);
    let consider = |p: f64, r: f64, best: &mut (f64, f64)| {
        if r < best.1 {
            *best = (p, r);
        }
    };
    for k in 0..=steps {
        let p = (k as f64) * GRID_STEP;
        let r = objective(p)?;
        scan.push((p, r));
        consider(p, r, &mut best);
    }
    // golden-section refinement around the grid minimum; the reported
    // optimum is the best point actually evaluated
    let mut lo = (best.0 - GRID_STEP).max(0.0);
    let mut hi = (best.0 + GRID_STEP).min(1.0);
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - phi * (hi - lo);
    let mut d = lo + phi * (hi - lo);
    let mut fc = objective(c)?;
    let mut fd = objective(d)?;
    consider(c, fc, &mut best);
    consider(d, fd, &mut best);
    while hi - lo > REFINE_TOL {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = objective(c)?;
            consider(c, fc, &mut best);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = objective(d)?;
            consider(d, fd, &mut best);
        }
    }
    let mid = 0.5 * (lo + hi);
    let fmid = objective(mid)?;
    consider(mid, fmid, &mut best);
    let (p_opt, residual) = best;
    Ok(FitResult {
        p_opt,
        residual,
        per_pauli_error_rate: per_pauli_error_rate(p_opt),
        fault_qubits,
        scan,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code513::logical_minus_state;
    use crate::noise::depolarizing_channel;

    fn minus_density() -> DensityMatrix {
        logical_minus_state().to_density()
    }

    #[test]
    fn rate_arithmetic() {
        assert_eq!(per_pauli_error_rate(1.0), 0.0);
        assert!((per_pauli_error_rate(0.64258) - 0.11914).abs() < 5e-4);
        assert!((per_pauli_error_rate(0.25) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn p_one_is_identity() {
        let rho = minus_density();
        let out = eq1_channel(&rho, 1.0, (1, 4)).unwrap();
        let diff = (out.matrix() - rho.matrix())
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }

    #[test]
    fn matches_composed_kraus_applications() {
        let rho = minus_density();
        let p = 0.37;
        let via_eq1 = eq1_channel(&rho, p, (0, 4)).unwrap();
        let ch = depolarizing_channel(p, 1).unwrap();
        let via_kraus = rho
            .apply_kraus(&ch, &[0])
            .unwrap()
            .apply_kraus(&ch, &[4])
            .unwrap();
        let diff = (via_eq1.matrix() - via_kraus.matrix())
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }

    #[test]
    fn trace_and_positivity_preserved() {
        let rho = minus_density();
        for p in [0.0, 0.2, 0.64258, 0.9] {
            let out = eq1_channel(&rho, p, (1, 4)).unwrap();
            assert!((out.trace().re - 1.0).abs() < 1e-10);
            assert!(out.min_eigenvalue() > -1e-10);
        }
        assert!(eq1_channel(&rho, 1.4, (1, 4)).is_err());
        assert!(eq1_channel(&rho, 0.5, (2, 2)).is_err());
    }

    #[test]
    fn fit_identity_recovers_p_one() {
        let rho = minus_density();
        let fit = fit_p(&rho, &rho, (0, 4)).unwrap();
        assert!((fit.p_opt - 1.0).abs() < 1e-4, "p_opt {}", fit.p_opt);
        assert!(fit.residual <= 1e-10);
    }

    #[test]
    fn fit_round_trips_planted_probabilities() {
        let rho = minus_density();
        for p_star in [0.1, 0.3, 0.5, 0.64258, 0.9, 1.0] {
            let damaged = eq1_channel(&rho, p_star, (0, 4)).unwrap();
            let fit = fit_p(&damaged, &rho, (0, 4)).unwrap();
            assert!(
                (fit.p_opt - p_star).abs() < 1e-3,
                "planted {p_star}, recovered {}",
                fit.p_opt
            );
        }
    }

    #[test]
    fn scan_has_single_local_minimum_on_round_trip() {
        let rho = minus_density();
        let damaged = eq1_channel(&rho, 0.64258, (1, 4)).unwrap();
        let fit = fit_p(&damaged, &rho, (1, 4)).unwrap();
        // count strict local minima on the scan grid
        let r: Vec<f64> = fit.scan.iter().map(|(_, v)| *v).collect();
        let mut minima = 0;
        for i in 1..r.len() - 1 {
            if r[i] < r[i - 1] - 1e-12 && r[i] < r[i + 1] - 1e-12 {
                minima += 1;
            }
        }
        assert!(minima <= 1, "found {minima} interior minima");
        // residual at p_opt beats p_opt +/- 0.05
        let obj = |p: f64| {
            let model = eq1_channel(&rho, p, (1, 4)).unwrap();
            spectral_norm(&(damaged.matrix() - model.matrix()))
        };
        assert!(fit.residual <= obj((fit.p_opt - 0.05).max(0.0)) + 1e-12);
        assert!(fit.residual <= obj((fit.p_opt + 0.05).min(1.0)) + 1e-12);
    }
}
