//! Dense matrices for the supported gate set.
//!
//! Single-qubit parametrised gates follow the OpenQASM 2 u-gate conventions:
//! `u3(theta, phi, lambda)` with `u2(phi, lambda) = u3(pi/2, phi, lambda)`
//! and `u1(lambda) = diag(1, e^{i lambda})`.

use nalgebra::DMatrix;
use num_complex::Complex64;

type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn identity(dim: usize) -> DMatrix<C> {
    DMatrix::identity(dim, dim)
}

pub fn pauli_x() -> DMatrix<C> {
    DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn pauli_y() -> DMatrix<C> {
    DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}

pub fn pauli_z() -> DMatrix<C> {
    DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

pub fn hadamard() -> DMatrix<C> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_row_slice(2, 2, &[c(s, 0.), c(s, 0.), c(s, 0.), c(-s, 0.)])
}

pub fn s_gate() -> DMatrix<C> {
    DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 1.)])
}

pub fn sdg_gate() -> DMatrix<C> {
    DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., -1.)])
}

pub fn u1(lambda: f64) -> DMatrix<C> {
    let mut m = DMatrix::zeros(2, 2);
    m[(0, 0)] = c(1., 0.);
    m[(1, 1)] = C::from_polar(1., lambda);
    m
}

pub fn u3(theta: f64, phi: f64, lambda: f64) -> DMatrix<C> {
    let (ct, st) = ((theta / 2.).cos(), (theta / 2.).sin());
    let mut m = DMatrix::zeros(2, 2);
    m[(0, 0)] = c(ct, 0.);
    m[(0, 1)] = -C::from_polar(1., lambda) * st;
    m[(1, 0)] = C::from_polar(1., phi) * st;
    m[(1, 1)] = C::from_polar(1., phi + lambda) * ct;
    m
}

pub fn u2(phi: f64, lambda: f64) -> DMatrix<C> {
    u3(std::f64::consts::FRAC_PI_2, phi, lambda)
}

/// CNOT with the first qubit argument as control.
pub fn cx() -> DMatrix<C> {
    let mut m = DMatrix::zeros(4, 4);
    m[(0, 0)] = c(1., 0.);
    m[(1, 1)] = c(1., 0.);
    m[(2, 3)] = c(1., 0.);
    m[(3, 2)] = c(1., 0.);
    m
}

pub fn cz() -> DMatrix<C> {
    let mut m = identity(4);
    m[(3, 3)] = c(-1., 0.);
    m
}

pub fn swap() -> DMatrix<C> {
    let mut m = DMatrix::zeros(4, 4);
    m[(0, 0)] = c(1., 0.);
    m[(1, 2)] = c(1., 0.);
    m[(2, 1)] = c(1., 0.);
    m[(3, 3)] = c(1., 0.);
    m
}

/// Largest absolute deviation of `u u^dagger` from the identity.
pub fn unitarity_deviation(u: &DMatrix<C>) -> f64 {
    let prod = u * u.adjoint();
    let id = identity(u.nrows());
    (prod - id).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u_gate_relations() {
        let h = hadamard();
        let u2m = u2(0.0, std::f64::consts::PI);
        assert!((&h - &u2m).iter().map(|v| v.norm()).fold(0.0, f64::max) < 1e-12);
        let z = pauli_z();
        let u1m = u1(std::f64::consts::PI);
        assert!((&z - &u1m).iter().map(|v| v.norm()).fold(0.0, f64::max) < 1e-12);
    }

    #[test]
    fn all_supported_gates_unitary() {
        for m in [
            pauli_x(),
            pauli_y(),
            pauli_z(),
            hadamard(),
            s_gate(),
            sdg_gate(),
            u1(0.37),
            u2(0.1, -1.2),
            u3(2.2, 0.4, -0.9),
            cx(),
            cz(),
            swap(),
        ] {
            assert!(unitarity_deviation(&m) < 1e-12);
        }
    }
}
