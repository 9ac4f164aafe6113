//! The two-level non-Hermitian Hamiltonian and its elementary properties.

use crate::{C64, CVec2};
use thiserror::Error;

/// Error raised when constructing a Hamiltonian from non-finite entries.
#[derive(Debug, Error, PartialEq)]
#[error("non-finite Hamiltonian entry: {field} = {value}")]
pub struct NonFiniteEntry {
    /// Which constructor argument was non-finite.
    pub field: &'static str,
    /// The offending value, formatted for the message.
    pub value: f64,
}

/// A 2x2 complex-symmetric Hamiltonian
///
/// ```text
///   | e1 + (i/2) g1       omega      |
///   |    omega        e2 + (i/2) g2 |
/// ```
///
/// `e1`, `e2` are the level energies, `g1`, `g2` the level widths
/// (decaying levels have negative `g`), and `omega` couples the levels.
/// The matrix is symmetric, not Hermitian: `omega` appears unconjugated
/// in both off-diagonal slots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelHamiltonian {
    /// Energy of the first level.
    pub e1: f64,
    /// Energy of the second level.
    pub e2: f64,
    /// Width parameter of the first level.
    pub gamma1: f64,
    /// Width parameter of the second level.
    pub gamma2: f64,
    /// Complex coupling between the levels.
    pub omega: C64,
}

impl TwoLevelHamiltonian {
    /// Builds a Hamiltonian, rejecting any non-finite parameter.
    pub fn new(
        e1: f64,
        e2: f64,
        gamma1: f64,
        gamma2: f64,
        omega: C64,
    ) -> Result<Self, NonFiniteEntry> {
        let checks: [(&'static str, f64); 6] = [
            ("e1", e1),
            ("e2", e2),
            ("gamma1", gamma1),
            ("gamma2", gamma2),
            ("omega.re", omega.re),
            ("omega.im", omega.im),
        ];
        for (field, value) in checks {
            if !value.is_finite() {
                return Err(NonFiniteEntry { field, value });
            }
        }
        Ok(Self {
            e1,
            e2,
            gamma1,
            gamma2,
            omega,
        })
    }

    /// First diagonal entry, `e1 + (i/2) g1`.
    pub fn epsilon1(&self) -> C64 {
        C64::new(self.e1, 0.5 * self.gamma1)
    }

    /// Second diagonal entry, `e2 + (i/2) g2`.
    pub fn epsilon2(&self) -> C64 {
        C64::new(self.e2, 0.5 * self.gamma2)
    }

    /// Mean of the diagonal entries, `(eps1 + eps2) / 2`.
    pub fn mean_eps(&self) -> C64 {
        C64::new(0.5 * (self.e1 + self.e2), 0.25 * (self.gamma1 + self.gamma2))
    }

    /// Difference of the diagonal entries, `eps1 - eps2`.
    pub fn delta_eps(&self) -> C64 {
        C64::new(self.e1 - self.e2, 0.5 * (self.gamma1 - self.gamma2))
    }

    /// Matrix trace, `eps1 + eps2`.
    pub fn trace(&self) -> C64 {
        self.epsilon1() + self.epsilon2()
    }

    /// Matrix determinant, `eps1 * eps2 - omega^2`.
    pub fn det(&self) -> C64 {
        self.epsilon1() * self.epsilon2() - self.omega * self.omega
    }

    /// Applies the matrix to a vector.
    pub fn apply(&self, v: &CVec2) -> CVec2 {
        [
            self.epsilon1() * v[0] + self.omega * v[1],
            self.omega * v[0] + self.epsilon2() * v[1],
        ]
    }

    /// Max-row-sum norm (infinity norm) of the matrix.
    pub fn norm(&self) -> f64 {
        let w = self.omega.norm();
        let r1 = self.epsilon1().norm() + w;
        let r2 = w + self.epsilon2().norm();
        r1.max(r2)
    }
}
