//! Inhomogeneous XX chains and their single-particle matrices.
//!
//! A chain of `N` spins carries a magnetic field `h_j` on every site and an
//! exchange coupling `α_j` on every bond `(j, j+1)`. After the Jordan-Wigner
//! mapping the Hamiltonian becomes `Σ W_nm η†_n η_m` with `W` the symmetric
//! tridiagonal matrix built by [`ChainSpec::w_matrix`].
//!
//! Units: `ħ = k_B = 1` everywhere.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChainError {
    #[error("chain needs at least 2 sites, got {0}")]
    TooFewSites(usize),
    #[error("expected {expected} couplings for {sites} sites, got {got}")]
    DimensionMismatch {
        sites: usize,
        expected: usize,
        got: usize,
    },
    #[error("bath rate gamma must be positive and finite, got {0}")]
    InvalidGamma(f64),
    #[error("non-finite {what} at index {index}: {value}")]
    NonFinite {
        what: &'static str,
        index: usize,
        value: f64,
    },
    #[error("junction chains split at N/2 and need an even site count, got {0}")]
    OddJunction(usize),
}

/// Validated parameters of an XX chain coupled to two baths.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    fields: Vec<f64>,
    couplings: Vec<f64>,
    gamma: f64,
}

impl ChainSpec {
    /// Build a chain from explicit per-site fields and per-bond couplings.
    pub fn custom(fields: Vec<f64>, couplings: Vec<f64>, gamma: f64) -> Result<Self, ChainError> {
        let n = fields.len();
        if n < 2 {
            return Err(ChainError::TooFewSites(n));
        }
        if couplings.len() != n - 1 {
            return Err(ChainError::DimensionMismatch {
                sites: n,
                expected: n - 1,
                got: couplings.len(),
            });
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(ChainError::InvalidGamma(gamma));
        }
        check_finite("field", &fields)?;
        check_finite("coupling", &couplings)?;
        Ok(Self {
            fields,
            couplings,
            gamma,
        })
    }

    /// Uniform chain whose two edge fields are shifted by `∓α`.
    ///
    /// Fields are `[h−α, h, …, h, h+α]` and every coupling equals `α`. This is
    /// the one inhomogeneous chain with a closed-form spectrum, see
    /// [`crate::spectral::analytic_spectrum`].
    pub fn boundary_perturbed(n: usize, h: f64, alpha: f64, gamma: f64) -> Result<Self, ChainError> {
        if n < 2 {
            return Err(ChainError::TooFewSites(n));
        }
        let mut fields = vec![h; n];
        fields[0] = h - alpha;
        fields[n - 1] = h + alpha;
        Self::custom(fields, vec![alpha; n - 1], gamma)
    }

    /// Two halves with different fields: `h1` on sites `1..=N/2`, `h2` after.
    pub fn field_junction(
        n: usize,
        h1: f64,
        h2: f64,
        alpha: f64,
        gamma: f64,
    ) -> Result<Self, ChainError> {
        let half = junction_half(n)?;
        let fields = (0..n).map(|i| if i < half { h1 } else { h2 }).collect();
        Self::custom(fields, vec![alpha; n - 1], gamma)
    }

    /// Two halves with different couplings and a uniform field.
    ///
    /// Bonds `1..=N/2` take `alpha1` (the middle bond belongs to the left
    /// segment), bonds `N/2+1..=N−1` take `alpha2`.
    pub fn coupling_junction(
        n: usize,
        alpha1: f64,
        alpha2: f64,
        h: f64,
        gamma: f64,
    ) -> Result<Self, ChainError> {
        let half = junction_half(n)?;
        let couplings = (0..n - 1)
            .map(|b| if b < half { alpha1 } else { alpha2 })
            .collect();
        Self::custom(vec![h; n], couplings, gamma)
    }

    /// Linearly graded chain: `h_i = h_base + i·h_slope` for sites `i = 1..=N`
    /// and `α_i = α_base + i·α_slope` for bonds `i = 1..=N−1`.
    pub fn graded(
        n: usize,
        h_base: f64,
        h_slope: f64,
        alpha_base: f64,
        alpha_slope: f64,
        gamma: f64,
    ) -> Result<Self, ChainError> {
        if n < 2 {
            return Err(ChainError::TooFewSites(n));
        }
        let fields = (1..=n).map(|i| h_base + i as f64 * h_slope).collect();
        let couplings = (1..n)
            .map(|i| alpha_base + i as f64 * alpha_slope)
            .collect();
        Self::custom(fields, couplings, gamma)
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    /// Always false: a valid chain has at least two sites.
    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Mirror the chain left to right.
    pub fn reflect(&self) -> Self {
        let mut fields = self.fields.clone();
        let mut couplings = self.couplings.clone();
        fields.reverse();
        couplings.reverse();
        Self {
            fields,
            couplings,
            gamma: self.gamma,
        }
    }

    /// True when the chain equals its own mirror image.
    pub fn is_reflection_symmetric(&self) -> bool {
        *self == self.reflect()
    }

    pub fn w_matrix(&self) -> WMatrix {
        WMatrix {
            diagonal: self.fields.clone(),
            off_diagonal: self.couplings.clone(),
        }
    }
}

fn check_finite(what: &'static str, values: &[f64]) -> Result<(), ChainError> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(ChainError::NonFinite {
            what,
            index,
            value: values[index],
        }),
        None => Ok(()),
    }
}

fn junction_half(n: usize) -> Result<usize, ChainError> {
    if n < 2 {
        return Err(ChainError::TooFewSites(n));
    }
    if !n.is_multiple_of(2) {
        return Err(ChainError::OddJunction(n));
    }
    Ok(n / 2)
}

/// Symmetric tridiagonal single-particle matrix `W`.
///
/// Stored as its diagonal and first off-diagonal, so symmetry holds by
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct WMatrix {
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
}

impl WMatrix {
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        match row.abs_diff(col) {
            0 => self.diagonal[row],
            1 => self.off_diagonal[row.min(col)],
            _ => 0.0,
        }
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let n = self.dim();
        nalgebra::DMatrix::from_fn(n, n, |i, j| self.get(i, j))
    }
}

impl fmt::Display for WMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "tridiag(diag={:?}, off={:?})",
            self.diagonal, self.off_diagonal
        )
    }
}
