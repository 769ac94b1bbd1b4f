//! State vectors and density matrices with validated invariants.

use super::{bit_shift, gates, KrausChannel, PauliLetter, PauliString, QuantumError, Result};
use crate::QUBIT_CAP;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

type C = Complex64;

pub(crate) const NORM_TOL: f64 = 1e-10;
pub(crate) const PSD_TOL: f64 = -1e-8;

/// Measurement basis for a single qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
pub enum MeasureBasis {
    X,
    Y,
    Z,
}

impl MeasureBasis {
    /// Rotation `V` with `V B V^dagger = Z`; `None` for the Z basis.
    pub fn rotation(self) -> Option<DMatrix<C>> {
        match self {
            MeasureBasis::Z => None,
            MeasureBasis::X => Some(gates::hadamard()),
            MeasureBasis::Y => Some(gates::hadamard() * gates::sdg_gate()),
        }
    }
}

fn check_targets(targets: &[usize], num_qubits: usize) -> Result<()> {
    for (i, &t) in targets.iter().enumerate() {
        if t >= num_qubits {
            return Err(QuantumError::QubitOutOfRange {
                index: t,
                num_qubits,
            });
        }
        if targets[..i].contains(&t) {
            return Err(QuantumError::RepeatedTarget(t));
        }
    }
    Ok(())
}

fn check_cap(num_qubits: usize) -> Result<()> {
    if num_qubits > QUBIT_CAP {
        return Err(QuantumError::ResourceLimit {
            requested: num_qubits,
            cap: QUBIT_CAP,
        });
    }
    Ok(())
}

/// Apply a 2^k x 2^k matrix to `targets` (in order) of an `n`-qubit amplitude
/// vector, in place. Qubit 0 is the most significant index bit.
pub fn apply_matrix_to_vec(amps: &mut [C], mat: &DMatrix<C>, targets: &[usize], n: usize) {
    let k = targets.len();
    debug_assert_eq!(mat.nrows(), 1 << k);
    let shifts: Vec<usize> = targets.iter().map(|&q| bit_shift(q, n)).collect();
    let target_mask: usize = shifts.iter().map(|&s| 1usize << s).sum();
    let dim = 1usize << n;
    let mut gathered = vec![C::new(0.0, 0.0); 1 << k];
    let mut base = 0usize;
    loop {
        // `base` iterates over indices whose target bits are all zero.
        for s_in in 0..(1 << k) {
            let mut idx = base;
            for (t, &sh) in shifts.iter().enumerate() {
                if (s_in >> (k - 1 - t)) & 1 == 1 {
                    idx |= 1 << sh;
                }
            }
            gathered[s_in] = amps[idx];
        }
        for s_out in 0..(1 << k) {
            let mut idx = base;
            for (t, &sh) in shifts.iter().enumerate() {
                if (s_out >> (k - 1 - t)) & 1 == 1 {
                    idx |= 1 << sh;
                }
            }
            let mut acc = C::new(0.0, 0.0);
            for (s_in, g) in gathered.iter().enumerate() {
                let m = mat[(s_out, s_in)];
                if m != C::new(0.0, 0.0) {
                    acc += m * g;
                }
            }
            amps[idx] = acc;
        }
        // advance `base` to the next index with zeroed target bits
        let mut next = (base | target_mask) + 1;
        next &= !target_mask;
        if next >= dim {
            break;
        }
        base = next;
    }
}

/// Embed a k-qubit unitary acting on `targets` into the full 2^n space.
pub fn embed_unitary(mat: &DMatrix<C>, targets: &[usize], n: usize) -> DMatrix<C> {
    let dim = 1usize << n;
    let mut out = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut v = vec![C::new(0.0, 0.0); dim];
        v[col] = C::new(1.0, 0.0);
        apply_matrix_to_vec(&mut v, mat, targets, n);
        for (row, val) in v.iter().enumerate() {
            out[(row, col)] = *val;
        }
    }
    out
}

/// Action of a Pauli string on basis ket `j`: returns `(i, amp)` with
/// `P |j> = amp |i>`.
pub fn pauli_ket_action(p: &PauliString, j: usize) -> (usize, C) {
    let n = p.num_qubits();
    let mut i = j;
    let mut amp = C::new(p.sign() as f64, 0.0);
    for (q, &l) in p.letters().iter().enumerate() {
        let sh = bit_shift(q, n);
        let bit = (j >> sh) & 1;
        match l {
            PauliLetter::I => {}
            PauliLetter::X => i ^= 1 << sh,
            PauliLetter::Z => {
                if bit == 1 {
                    amp = -amp;
                }
            }
            PauliLetter::Y => {
                i ^= 1 << sh;
                amp *= if bit == 0 {
                    C::new(0.0, 1.0)
                } else {
                    C::new(0.0, -1.0)
                };
            }
        }
    }
    (i, amp)
}

/// Pure quantum state over `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<C>,
}

impl StateVector {
    /// |0...0> on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        check_cap(num_qubits)?;
        let mut amps = vec![C::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = C::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amps })
    }

    /// Basis state |b> where bit `q` of the label is qubit `q`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_cap(num_qubits)?;
        let mut amps = vec![C::new(0.0, 0.0); 1 << num_qubits];
        amps[index] = C::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amps })
    }

    pub fn from_amplitudes(num_qubits: usize, amps: Vec<C>) -> Result<Self> {
        check_cap(num_qubits)?;
        if amps.len() != 1 << num_qubits {
            return Err(QuantumError::DimensionMismatch(format!(
                "expected 2^{num_qubits} amplitudes, got {}",
                amps.len()
            )));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(QuantumError::InvalidState(format!(
                "norm^2 = {norm}, not 1 within {NORM_TOL:e}"
            )));
        }
        Ok(StateVector { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &StateVector) -> C {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Apply a unitary on `targets`, returning the new state.
    pub fn apply_unitary(&self, u: &DMatrix<C>, targets: &[usize]) -> Result<StateVector> {
        check_targets(targets, self.num_qubits)?;
        let dev = gates::unitarity_deviation(u);
        if dev > NORM_TOL {
            return Err(QuantumError::NotUnitary(dev));
        }
        Ok(self.apply_unchecked(u, targets))
    }

    /// Apply without the unitarity check (trusted internal gates).
    pub(crate) fn apply_unchecked(&self, u: &DMatrix<C>, targets: &[usize]) -> StateVector {
        let mut amps = self.amps.clone();
        apply_matrix_to_vec(&mut amps, u, targets, self.num_qubits);
        StateVector {
            num_qubits: self.num_qubits,
            amps,
        }
    }

    pub(crate) fn apply_in_place(&mut self, u: &DMatrix<C>, targets: &[usize]) {
        apply_matrix_to_vec(&mut self.amps, u, targets, self.num_qubits);
    }

    pub fn apply_pauli(&self, p: &PauliString) -> StateVector {
        assert_eq!(p.num_qubits(), self.num_qubits);
        let mut amps = vec![C::new(0.0, 0.0); self.amps.len()];
        for (j, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() > 0.0 {
                let (i, f) = pauli_ket_action(p, j);
                amps[i] += f * a;
            }
        }
        StateVector {
            num_qubits: self.num_qubits,
            amps,
        }
    }

    /// Tensor product `self (x) other`; `self` holds the lower qubit indices.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.num_qubits + other.num_qubits;
        check_cap(n)?;
        let mut amps = vec![C::new(0.0, 0.0); 1 << n];
        for (i, a) in self.amps.iter().enumerate() {
            if *a == C::new(0.0, 0.0) {
                continue;
            }
            for (j, b) in other.amps.iter().enumerate() {
                amps[(i << other.num_qubits) | j] = a * b;
            }
        }
        Ok(StateVector {
            num_qubits: n,
            amps,
        })
    }

    /// Probability of outcome 1 when measuring `qubit` in `basis`.
    pub fn outcome_probability(&self, qubit: usize, basis: MeasureBasis) -> f64 {
        let rotated = match basis.rotation() {
            Some(v) => self.apply_unchecked(&v, &[qubit]),
            None => self.clone(),
        };
        let sh = bit_shift(qubit, self.num_qubits);
        rotated
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i >> sh) & 1 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Both measurement branches `(outcome, probability, post-state)`,
    /// zero-probability branches dropped.
    pub fn measure_exact(
        &self,
        qubit: usize,
        basis: MeasureBasis,
    ) -> Result<Vec<(u8, f64, StateVector)>> {
        check_targets(&[qubit], self.num_qubits)?;
        let rotated = match basis.rotation() {
            Some(v) => self.apply_unchecked(&v, &[qubit]),
            None => self.clone(),
        };
        let sh = bit_shift(qubit, self.num_qubits);
        let mut out = Vec::new();
        for outcome in 0u8..2 {
            let mut amps = rotated.amps.clone();
            let mut p = 0.0;
            for (i, a) in amps.iter_mut().enumerate() {
                if ((i >> sh) & 1) as u8 == outcome {
                    p += a.norm_sqr();
                } else {
                    *a = C::new(0.0, 0.0);
                }
            }
            if p < 1e-12 {
                continue;
            }
            let scale = C::new(1.0 / p.sqrt(), 0.0);
            for a in amps.iter_mut() {
                *a *= scale;
            }
            let mut post = StateVector {
                num_qubits: self.num_qubits,
                amps,
            };
            if let Some(v) = basis.rotation() {
                post.apply_in_place(&v.adjoint(), &[qubit]);
            }
            out.push((outcome, p, post));
        }
        Ok(out)
    }

    /// Sample one measurement outcome using `rng`.
    pub fn measure_sample<R: Rng>(
        &self,
        qubit: usize,
        basis: MeasureBasis,
        rng: &mut R,
    ) -> Result<(u8, f64, StateVector)> {
        let branches = self.measure_exact(qubit, basis)?;
        if branches.len() == 1 {
            let (o, p, s) = branches.into_iter().next().unwrap();
            return Ok((o, p, s));
        }
        let p1 = branches.iter().find(|(o, _, _)| *o == 1).map(|(_, p, _)| *p);
        let u: f64 = rng.gen();
        let pick = if u < p1.unwrap_or(0.0) { 1 } else { 0 };
        Ok(branches.into_iter().find(|(o, _, _)| *o == pick).unwrap())
    }

    pub fn to_density(&self) -> DensityMatrix {
        let dim = self.amps.len();
        let mut mat = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                mat[(i, j)] = self.amps[i] * self.amps[j].conj();
            }
        }
        DensityMatrix {
            num_qubits: self.num_qubits,
            mat,
        }
    }
}

/// Mixed quantum state; Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    mat: DMatrix<C>,
}

impl DensityMatrix {
    pub fn from_pure(psi: &StateVector) -> Self {
        psi.to_density()
    }

    pub fn zero(num_qubits: usize) -> Result<Self> {
        Ok(StateVector::zero(num_qubits)?.to_density())
    }

    /// Maximally mixed state I / 2^n.
    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        check_cap(num_qubits)?;
        let dim = 1usize << num_qubits;
        let mat = DMatrix::from_diagonal_element(dim, dim, C::new(1.0 / dim as f64, 0.0));
        Ok(DensityMatrix { num_qubits, mat })
    }

    /// Validate Hermiticity, unit trace and positivity, then construct.
    /// Eigenvalues down to -1e-8 are accepted and clipped to zero.
    pub fn try_new(num_qubits: usize, mat: DMatrix<C>) -> Result<Self> {
        check_cap(num_qubits)?;
        let dim = 1usize << num_qubits;
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(QuantumError::DimensionMismatch(format!(
                "expected {dim}x{dim} matrix, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let herm_dev = (&mat - mat.adjoint())
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        if herm_dev > NORM_TOL {
            return Err(QuantumError::InvalidState(format!(
                "not Hermitian (deviation {herm_dev:.3e})"
            )));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(QuantumError::InvalidState(format!(
                "trace {tr} is not 1"
            )));
        }
        let dm = DensityMatrix { num_qubits, mat };
        let min_eig = dm.min_eigenvalue();
        if min_eig < PSD_TOL {
            return Err(QuantumError::InvalidState(format!(
                "minimum eigenvalue {min_eig:.3e} below tolerance"
            )));
        }
        Ok(dm)
    }

    pub(crate) fn from_raw(num_qubits: usize, mat: DMatrix<C>) -> Self {
        DensityMatrix { num_qubits, mat }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C> {
        &self.mat
    }

    pub fn trace(&self) -> C {
        self.mat.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let sym = nalgebra::SymmetricEigen::new(self.mat.clone());
        let mut v: Vec<f64> = sym.eigenvalues.iter().copied().collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn apply_unitary(&self, u: &DMatrix<C>, targets: &[usize]) -> Result<DensityMatrix> {
        check_targets(targets, self.num_qubits)?;
        let dev = gates::unitarity_deviation(u);
        if dev > NORM_TOL {
            return Err(QuantumError::NotUnitary(dev));
        }
        Ok(self.apply_unchecked(u, targets))
    }

    pub(crate) fn apply_unchecked(&self, u: &DMatrix<C>, targets: &[usize]) -> DensityMatrix {
        let mut out = self.clone();
        out.apply_in_place(u, targets);
        out
    }

    pub(crate) fn apply_in_place(&mut self, u: &DMatrix<C>, targets: &[usize]) {
        let n = self.num_qubits;
        let dim = self.mat.nrows();
        // rho <- U rho : apply U to each column
        for col in 0..dim {
            let mut v: Vec<C> = (0..dim).map(|r| self.mat[(r, col)]).collect();
            apply_matrix_to_vec(&mut v, u, targets, n);
            for (r, val) in v.iter().enumerate() {
                self.mat[(r, col)] = *val;
            }
        }
        // rho <- rho U^dagger : apply conj(U) to each row
        let uc = u.map(|v| v.conj());
        for row in 0..dim {
            let mut v: Vec<C> = (0..dim).map(|c| self.mat[(row, c)]).collect();
            apply_matrix_to_vec(&mut v, &uc, targets, n);
            for (c, val) in v.iter().enumerate() {
                self.mat[(row, c)] = *val;
            }
        }
    }

    /// Apply a Kraus channel on `targets`.
    pub fn apply_kraus(&self, ch: &KrausChannel, targets: &[usize]) -> Result<DensityMatrix> {
        check_targets(targets, self.num_qubits)?;
        if ch.arity() != targets.len() {
            return Err(QuantumError::DimensionMismatch(format!(
                "channel arity {} vs {} targets",
                ch.arity(),
                targets.len()
            )));
        }
        let dim = self.mat.nrows();
        let mut acc: DMatrix<C> = DMatrix::zeros(dim, dim);
        for k in ch.operators() {
            let mut term = self.clone();
            // K rho K^dagger via the same column/row passes
            for col in 0..dim {
                let mut v: Vec<C> = (0..dim).map(|r| term.mat[(r, col)]).collect();
                apply_matrix_to_vec(&mut v, k, targets, self.num_qubits);
                for (r, val) in v.iter().enumerate() {
                    term.mat[(r, col)] = *val;
                }
            }
            let kc = k.map(|v| v.conj());
            for row in 0..dim {
                let mut v: Vec<C> = (0..dim).map(|c| term.mat[(row, c)]).collect();
                apply_matrix_to_vec(&mut v, &kc, targets, self.num_qubits);
                for (c, val) in v.iter().enumerate() {
                    term.mat[(row, c)] = *val;
                }
            }
            acc += &term.mat;
        }
        Ok(DensityMatrix {
            num_qubits: self.num_qubits,
            mat: acc,
        })
    }

    pub fn apply_pauli(&self, p: &PauliString) -> DensityMatrix {
        let u = p.matrix();
        self.apply_unchecked(&u, &(0..self.num_qubits).collect::<Vec<_>>())
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let n = self.num_qubits + other.num_qubits;
        check_cap(n)?;
        Ok(DensityMatrix {
            num_qubits: n,
            mat: self.mat.kronecker(&other.mat),
        })
    }

    /// Trace out all qubits not in `keep`; result qubit order follows `keep`
    /// order ascending by original index.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(QuantumError::EmptyKeepSet);
        }
        check_targets(keep, self.num_qubits)?;
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        let n = self.num_qubits;
        let k = keep_sorted.len();
        let trace_qubits: Vec<usize> = (0..n).filter(|q| !keep_sorted.contains(q)).collect();
        let t = trace_qubits.len();
        let keep_shifts: Vec<usize> = keep_sorted.iter().map(|&q| bit_shift(q, n)).collect();
        let tr_shifts: Vec<usize> = trace_qubits.iter().map(|&q| bit_shift(q, n)).collect();
        let dim_out = 1usize << k;
        let mut out = DMatrix::zeros(dim_out, dim_out);
        for i_out in 0..dim_out {
            for j_out in 0..dim_out {
                let mut acc = C::new(0.0, 0.0);
                for e in 0..(1usize << t) {
                    let mut i_full = 0usize;
                    let mut j_full = 0usize;
                    for (b, &sh) in keep_shifts.iter().enumerate() {
                        if (i_out >> (k - 1 - b)) & 1 == 1 {
                            i_full |= 1 << sh;
                        }
                        if (j_out >> (k - 1 - b)) & 1 == 1 {
                            j_full |= 1 << sh;
                        }
                    }
                    for (b, &sh) in tr_shifts.iter().enumerate() {
                        if (e >> (t - 1 - b)) & 1 == 1 {
                            i_full |= 1 << sh;
                            j_full |= 1 << sh;
                        }
                    }
                    acc += self.mat[(i_full, j_full)];
                }
                out[(i_out, j_out)] = acc;
            }
        }
        Ok(DensityMatrix {
            num_qubits: k,
            mat: out,
        })
    }

    /// Expectation value Tr(rho P) of a Pauli string.
    pub fn expectation(&self, p: &PauliString) -> f64 {
        assert_eq!(p.num_qubits(), self.num_qubits);
        let dim = self.mat.nrows();
        let mut acc = C::new(0.0, 0.0);
        for j in 0..dim {
            let (i, amp) = pauli_ket_action(p, j);
            acc += self.mat[(j, i)] * amp;
        }
        acc.re
    }

    /// Outcome probabilities and post-states for a projective measurement.
    pub fn measure_exact(
        &self,
        qubit: usize,
        basis: MeasureBasis,
    ) -> Result<Vec<(u8, f64, DensityMatrix)>> {
        check_targets(&[qubit], self.num_qubits)?;
        let rotated = match basis.rotation() {
            Some(v) => self.apply_unchecked(&v, &[qubit]),
            None => self.clone(),
        };
        let sh = bit_shift(qubit, self.num_qubits);
        let dim = self.mat.nrows();
        let mut out = Vec::new();
        for outcome in 0u8..2 {
            let mut mat = rotated.mat.clone();
            let mut p = 0.0;
            for i in 0..dim {
                for j in 0..dim {
                    let keep_i = ((i >> sh) & 1) as u8 == outcome;
                    let keep_j = ((j >> sh) & 1) as u8 == outcome;
                    if keep_i && keep_j {
                        if i == j {
                            p += mat[(i, j)].re;
                        }
                    } else {
                        mat[(i, j)] = C::new(0.0, 0.0);
                    }
                }
            }
            if p < 1e-12 {
                continue;
            }
            mat /= C::new(p, 0.0);
            let mut post = DensityMatrix {
                num_qubits: self.num_qubits,
                mat,
            };
            if let Some(v) = basis.rotation() {
                post = post.apply_unchecked(&v.adjoint(), &[qubit]);
            }
            out.push((outcome, p, post));
        }
        Ok(out)
    }

    /// Diagonal probabilities in the computational basis.
    pub fn diagonal_probabilities(&self) -> Vec<f64> {
        (0..self.mat.nrows()).map(|i| self.mat[(i, i)].re).collect()
    }

    /// Project to the nearest (Frobenius) unit-trace PSD matrix by clipping
    /// eigenvalues onto the probability simplex.
    pub fn project_to_physical(&self) -> DensityMatrix {
        let sym = nalgebra::SymmetricEigen::new(self.mat.clone());
        let mut pairs: Vec<(f64, usize)> = sym
            .eigenvalues
            .iter()
            .copied()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect();
        pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let vals: Vec<f64> = pairs.iter().map(|(v, _)| *v).collect();
        // project eigenvalue vector onto the simplex {x >= 0, sum x = 1}
        let mut cum = 0.0;
        let mut rho_idx = 0;
        for (i, &v) in vals.iter().enumerate() {
            cum += v;
            let theta = (cum - 1.0) / (i + 1) as f64;
            if v - theta > 0.0 {
                rho_idx = i;
            }
        }
        let cum_rho: f64 = vals[..=rho_idx].iter().sum();
        let theta = (cum_rho - 1.0) / (rho_idx + 1) as f64;
        let dim = self.mat.nrows();
        let mut mat = DMatrix::zeros(dim, dim);
        for (v, idx) in &pairs {
            let lam = (v - theta).max(0.0);
            if lam == 0.0 {
                continue;
            }
            let col = sym.eigenvectors.column(*idx);
            for i in 0..dim {
                for j in 0..dim {
                    mat[(i, j)] += C::new(lam, 0.0) * col[i] * col[j].conj();
                }
            }
        }
        // exact Hermitian symmetrisation to kill rounding asymmetry
        let mat = (mat.clone() + mat.adjoint()) * C::new(0.5, 0.0);
        DensityMatrix {
            num_qubits: self.num_qubits,
            mat,
        }
    }
}

impl Serialize for DensityMatrix {
    /// Nested arrays of `(re, im)` pairs, row major.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let dim = self.mat.nrows();
        let mut rows = serializer.serialize_seq(Some(dim))?;
        for i in 0..dim {
            let row: Vec<(f64, f64)> = (0..dim)
                .map(|j| (self.mat[(i, j)].re, self.mat[(i, j)].im))
                .collect();
            rows.serialize_element(&row)?;
        }
        rows.end()
    }
}
