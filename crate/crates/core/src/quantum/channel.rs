//! Kraus-operator channels.

use super::{QuantumError, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

type C = Complex64;

/// A completely positive trace-preserving map given by Kraus operators of a
/// common dimension 2^arity.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    operators: Vec<DMatrix<C>>,
    arity: usize,
}

impl KrausChannel {
    /// Validate completeness (sum K^dagger K = I within 1e-10) and build.
    pub fn new(operators: Vec<DMatrix<C>>) -> Result<Self> {
        if operators.is_empty() {
            return Err(QuantumError::IncompleteKraus(1.0));
        }
        let dim = operators[0].nrows();
        if !dim.is_power_of_two() || operators.iter().any(|k| k.nrows() != dim || k.ncols() != dim)
        {
            return Err(QuantumError::DimensionMismatch(
                "Kraus operators must be square with a common power-of-two dimension".into(),
            ));
        }
        let arity = dim.trailing_zeros() as usize;
        let mut sum: DMatrix<C> = DMatrix::zeros(dim, dim);
        for k in &operators {
            sum += k.adjoint() * k;
        }
        let dev = (&sum - DMatrix::<C>::identity(dim, dim))
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        if dev > 1e-10 {
            return Err(QuantumError::IncompleteKraus(dev));
        }
        Ok(KrausChannel { operators, arity })
    }

    pub fn identity(arity: usize) -> Self {
        let dim = 1usize << arity;
        KrausChannel {
            operators: vec![DMatrix::identity(dim, dim)],
            arity,
        }
    }

    pub fn operators(&self) -> &[DMatrix<C>] {
        &self.operators
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Reset-to-|0> channel on one qubit.
    pub fn reset() -> Self {
        let mut k0 = DMatrix::zeros(2, 2);
        k0[(0, 0)] = C::new(1.0, 0.0);
        let mut k1 = DMatrix::zeros(2, 2);
        k1[(0, 1)] = C::new(1.0, 0.0);
        KrausChannel {
            operators: vec![k0, k1],
            arity: 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::gates;

    #[test]
    fn completeness_validation() {
        let x = gates::pauli_x();
        // a lone sqrt(1/2) X is not complete
        let bad = KrausChannel::new(vec![x.clone() * C::new(0.5f64.sqrt(), 0.0)]);
        assert!(bad.is_err());
        let ok = KrausChannel::new(vec![
            gates::identity(2) * C::new(0.5f64.sqrt(), 0.0),
            x * C::new(0.5f64.sqrt(), 0.0),
        ]);
        assert!(ok.is_ok());
    }

    #[test]
    fn reset_channel_sends_everything_to_zero() {
        let one = crate::quantum::StateVector::basis(1, 1).unwrap().to_density();
        let out = one.apply_kraus(&KrausChannel::reset(), &[0]).unwrap();
        assert!((out.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
    }
}
