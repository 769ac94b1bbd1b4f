//! n-qubit Pauli operators with a real sign.

use super::{gates, QuantumError, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    pub fn from_char(ch: char) -> Option<Self> {
        match ch.to_ascii_uppercase() {
            'I' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }

    pub fn matrix(self) -> DMatrix<Complex64> {
        match self {
            PauliLetter::I => gates::identity(2),
            PauliLetter::X => gates::pauli_x(),
            PauliLetter::Y => gates::pauli_y(),
            PauliLetter::Z => gates::pauli_z(),
        }
    }

    /// True when the two letters are distinct non-identity Paulis.
    pub fn anticommutes(self, other: PauliLetter) -> bool {
        self != PauliLetter::I && other != PauliLetter::I && self != other
    }

    /// Letter product ignoring phase.
    pub fn mul_unsigned(self, other: PauliLetter) -> PauliLetter {
        use PauliLetter::*;
        match (self, other) {
            (I, o) => o,
            (s, I) => s,
            (a, b) if a == b => I,
            (X, Y) | (Y, X) => Z,
            (X, Z) | (Z, X) => Y,
            (Y, Z) | (Z, Y) => X,
            _ => unreachable!(),
        }
    }
}

/// A Pauli operator on `num_qubits()` qubits with sign +1 or -1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    letters: Vec<PauliLetter>,
    sign: i8,
}

impl PauliString {
    pub fn new(letters: Vec<PauliLetter>, sign: i8) -> Self {
        assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
        PauliString { letters, sign }
    }

    pub fn identity(num_qubits: usize) -> Self {
        PauliString::new(vec![PauliLetter::I; num_qubits], 1)
    }

    /// Weight-1 Pauli `letter` on `qubit`.
    pub fn single(num_qubits: usize, qubit: usize, letter: PauliLetter) -> Self {
        let mut letters = vec![PauliLetter::I; num_qubits];
        letters[qubit] = letter;
        PauliString::new(letters, 1)
    }

    /// Parse strings like "XZZXI" or "-XZZXI".
    pub fn parse(text: &str) -> Result<Self> {
        let (sign, body) = match text.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, text.strip_prefix('+').unwrap_or(text)),
        };
        let letters = body
            .chars()
            .map(|ch| {
                PauliLetter::from_char(ch).ok_or_else(|| {
                    QuantumError::InvalidState(format!("invalid Pauli letter '{ch}'"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString::new(letters, sign))
    }

    pub fn num_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.letters
    }

    pub fn letter(&self, qubit: usize) -> PauliLetter {
        self.letters[qubit]
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Count of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&l| l != PauliLetter::I).count()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    /// Qubits carrying a non-identity letter.
    pub fn support(&self) -> Vec<usize> {
        (0..self.letters.len())
            .filter(|&q| self.letters[q] != PauliLetter::I)
            .collect()
    }

    /// Symplectic product: 1 when the operators anticommute.
    pub fn anticommutes_with(&self, other: &PauliString) -> bool {
        assert_eq!(self.num_qubits(), other.num_qubits());
        self.letters
            .iter()
            .zip(&other.letters)
            .filter(|(a, b)| a.anticommutes(**b))
            .count()
            % 2
            == 1
    }

    /// Letter-wise product with the phase discarded (sign fixed to +1).
    pub fn mul_unsigned(&self, other: &PauliString) -> PauliString {
        assert_eq!(self.num_qubits(), other.num_qubits());
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(a, b)| a.mul_unsigned(*b))
            .collect();
        PauliString::new(letters, 1)
    }

    /// Dense matrix representation (including the sign).
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let mut out = DMatrix::from_element(1, 1, Complex64::new(self.sign as f64, 0.0));
        for l in &self.letters {
            out = out.kronecker(&l.matrix());
        }
        out
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        for l in &self.letters {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}
