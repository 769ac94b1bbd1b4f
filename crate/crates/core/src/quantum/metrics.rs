//! Fidelity, trace distance and spectral norm.

use super::{DensityMatrix, QuantumError, Result, StateVector};
use nalgebra::DMatrix;
use num_complex::Complex64;

type C = Complex64;

/// Hermitian square root via eigendecomposition. Eigenvalues below a
/// relative noise floor are treated as exact zeros so that solver noise of
/// order 1e-16 cannot leak sqrt(1e-16)-sized terms into the trace.
fn sqrt_psd(m: &DMatrix<C>) -> DMatrix<C> {
    let sym = nalgebra::SymmetricEigen::new(m.clone());
    let dim = m.nrows();
    let max_lam = sym.eigenvalues.iter().copied().fold(0.0, f64::max);
    let floor = max_lam * 1e-12;
    let mut out = DMatrix::zeros(dim, dim);
    for (idx, lam) in sym.eigenvalues.iter().enumerate() {
        if *lam <= floor {
            continue;
        }
        let l = lam.sqrt();
        let col = sym.eigenvectors.column(idx);
        for i in 0..dim {
            for j in 0..dim {
                out[(i, j)] += C::new(l, 0.0) * col[i] * col[j].conj();
            }
        }
    }
    out
}

/// Uhlmann fidelity F(a, b) = (Tr sqrt(sqrt(a) b sqrt(a)))^2, clamped to [0, 1].
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(QuantumError::DimensionMismatch(format!(
            "fidelity of {}x{} vs {}x{}",
            a.dim(),
            a.dim(),
            b.dim(),
            b.dim()
        )));
    }
    let sa = sqrt_psd(a.matrix());
    let inner = &sa * b.matrix() * &sa;
    let s = sqrt_psd(&inner);
    let f = s.trace().re.powi(2);
    Ok(f.clamp(0.0, 1.0))
}

/// <psi| rho |psi> — the fidelity against a pure reference.
pub fn fidelity_to_pure(psi: &StateVector, rho: &DensityMatrix) -> Result<f64> {
    if psi.dim() != rho.dim() {
        return Err(QuantumError::DimensionMismatch(format!(
            "pure state dim {} vs density dim {}",
            psi.dim(),
            rho.dim()
        )));
    }
    let amps = psi.amplitudes();
    let mut acc = C::new(0.0, 0.0);
    for i in 0..psi.dim() {
        for j in 0..psi.dim() {
            acc += amps[i].conj() * rho.matrix()[(i, j)] * amps[j];
        }
    }
    Ok(acc.re.clamp(0.0, 1.0))
}

/// Half the trace norm of a - b.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(QuantumError::DimensionMismatch(
            "trace distance of unequal dimensions".into(),
        ));
    }
    let diff = a.matrix() - b.matrix();
    let sym = nalgebra::SymmetricEigen::new(diff);
    Ok(0.5 * sym.eigenvalues.iter().map(|v| v.abs()).sum::<f64>())
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<C>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::gates;

    #[test]
    fn fidelity_basics() {
        let zero = StateVector::basis(1, 0).unwrap().to_density();
        let plus = StateVector::zero(1)
            .unwrap()
            .apply_unitary(&gates::hadamard(), &[0])
            .unwrap()
            .to_density();
        assert!((fidelity(&zero, &zero).unwrap() - 1.0).abs() < 1e-12);
        assert!((fidelity(&zero, &plus).unwrap() - 0.5).abs() < 1e-12);
        // symmetry
        let f1 = fidelity(&zero, &plus).unwrap();
        let f2 = fidelity(&plus, &zero).unwrap();
        assert!((f1 - f2).abs() < 1e-12);
        assert!(fidelity(
            &zero,
            &StateVector::zero(2).unwrap().to_density()
        )
        .is_err());
    }

    #[test]
    fn pure_fidelity_equals_overlap_squared() {
        let mut s1 = StateVector::zero(2).unwrap();
        s1 = s1.apply_unitary(&gates::hadamard(), &[0]).unwrap();
        let s2 = StateVector::basis(2, 0).unwrap();
        let overlap = s1.inner(&s2).norm_sqr();
        let f = fidelity(&s1.to_density(), &s2.to_density()).unwrap();
        assert!((f - overlap).abs() < 1e-12);
        let fp = fidelity_to_pure(&s2, &s1.to_density()).unwrap();
        assert!((fp - overlap).abs() < 1e-12);
    }

    #[test]
    fn spectral_norm_values() {
        assert!((spectral_norm(&gates::pauli_x()) - 1.0).abs() < 1e-12);
        let mut d = DMatrix::zeros(2, 2);
        d[(0, 0)] = C::new(0.7 - 0.5, 0.0);
        d[(1, 1)] = C::new(0.3 - 0.5, 0.0);
        assert!((spectral_norm(&d) - 0.2).abs() < 1e-12);
        let z: DMatrix<C> = DMatrix::zeros(3, 3);
        assert!(spectral_norm(&z) < 1e-15);
    }

    #[test]
    fn spectral_norm_submultiplicative() {
        let a = gates::u3(0.7, 0.2, 1.1) * C::new(1.3, 0.0);
        let b = gates::u3(2.1, -0.4, 0.3) * C::new(0.8, 0.0);
        let ab = &a * &b;
        assert!(spectral_norm(&ab) <= spectral_norm(&a) * spectral_norm(&b) + 1e-12);
    }
}
