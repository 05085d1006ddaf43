//! Single-particle spectrum of the chain and the bath-coupling weights.
//!
//! Diagonalizing `W = S·diag(ε)·Sᵀ` gives the fermionic normal modes. Each
//! mode `k` talks to the left bath through `g_{L,k} = S[1][k]²` and to the
//! right bath through `g_{R,k} = S[N][k]²`. Since `S` is orthogonal, both
//! weight lists are nonnegative and sum to one.

mod ql;

use std::f64::consts::PI;
use std::ops::Deref;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::chain::{ChainSpec, WMatrix};

pub use ql::MAX_SWEEPS;

/// Relative gap below which two eigenvalues are reported as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("QL iteration did not converge for eigenvalue {index} after {MAX_SWEEPS} sweeps; matrix {matrix}")]
    NoConvergence { index: usize, matrix: WMatrix },
    #[error("analytic spectrum needs N >= 2, got {0}")]
    TooFewSites(usize),
    #[error("split-spectrum condition is defined for even N only, got {0}")]
    OddSites(usize),
    #[error("split-spectrum condition needs h > 0 and alpha >= 0, got h={h}, alpha={alpha}")]
    InvalidSplitParameters { h: f64, alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralWarning {
    /// `|ε_lower − ε_upper| < 1e−9·max(1, |ε|)`. The global dissipator is
    /// derived assuming distinct transition frequencies, so results for this
    /// pair rest on an approximation that is no longer controlled.
    NearDegenerate { lower: usize, upper: usize, gap: f64 },
}

/// Mode energies with their boundary weights: everything the transport
/// formulas consume.
#[derive(Debug, Clone, PartialEq)]
pub struct Modes {
    pub eps: Vec<f64>,
    pub g_left: Vec<f64>,
    pub g_right: Vec<f64>,
    pub warnings: Vec<SpectralWarning>,
}

impl Modes {
    pub fn len(&self) -> usize {
        self.eps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps.is_empty()
    }

    pub fn is_degenerate(&self) -> bool {
        !self.warnings.is_empty()
    }

    /// Modes that touch neither bath (`g_L = g_R = 0`); their occupation is
    /// not fixed by the dynamics.
    pub fn decoupled(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&k| self.g_left[k] == 0.0 && self.g_right[k] == 0.0)
            .collect()
    }

    /// Same modes with left and right roles exchanged.
    pub fn mirrored(&self) -> Modes {
        Modes {
            eps: self.eps.clone(),
            g_left: self.g_right.clone(),
            g_right: self.g_left.clone(),
            warnings: self.warnings.clone(),
        }
    }
}

/// Full diagonalization: [`Modes`] plus the orthogonal matrix `S` whose
/// column `k` is the eigenvector of `eps[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    modes: Modes,
    pub vectors: DMatrix<f64>,
}

impl Deref for SpectralData {
    type Target = Modes;

    fn deref(&self) -> &Modes {
        &self.modes
    }
}

impl SpectralData {
    pub fn modes(&self) -> &Modes {
        &self.modes
    }

    pub fn into_modes(self) -> Modes {
        self.modes
    }

    /// Copy with modes reordered by ascending energy.
    pub fn sorted(&self) -> SpectralData {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.eps[a].total_cmp(&self.eps[b]));
        let pick = |v: &[f64]| order.iter().map(|&k| v[k]).collect::<Vec<_>>();
        let eps = pick(&self.eps);
        SpectralData {
            modes: Modes {
                warnings: degeneracy_warnings(&eps),
                g_left: pick(&self.g_left),
                g_right: pick(&self.g_right),
                eps,
            },
            vectors: DMatrix::from_fn(self.vectors.nrows(), order.len(), |r, c| {
                self.vectors[(r, order[c])]
            }),
        }
    }
}

/// Numerically diagonalize the chain's `W` matrix.
///
/// Eigenvalues come out ascending. Near-degenerate neighbours are listed in
/// `warnings`; the computation still proceeds.
pub fn diagonalize(chain: &ChainSpec) -> Result<SpectralData, SpectralError> {
    let w = chain.w_matrix();
    let n = w.dim();
    let mut vectors = DMatrix::identity(n, n);
    let eps = solve(&w, &mut vectors)?;
    let g_left = vectors.row(0).iter().map(|s| s * s).collect();
    let g_right = vectors.row(n - 1).iter().map(|s| s * s).collect();
    Ok(SpectralData {
        modes: Modes {
            warnings: degeneracy_warnings(&eps),
            eps,
            g_left,
            g_right,
        },
        vectors,
    })
}

/// Energies and boundary weights only.
///
/// Tracks just the first and last rows of `S` during the QL sweeps, so the
/// cost is `O(N²)` instead of `O(N³)`. Bitwise identical to the weights from
/// [`diagonalize`].
pub fn boundary_modes(chain: &ChainSpec) -> Result<Modes, SpectralError> {
    let w = chain.w_matrix();
    let n = w.dim();
    let mut rows = DMatrix::zeros(2, n);
    rows[(0, 0)] = 1.0;
    rows[(1, n - 1)] = 1.0;
    let eps = solve(&w, &mut rows)?;
    Ok(Modes {
        warnings: degeneracy_warnings(&eps),
        g_left: rows.row(0).iter().map(|s| s * s).collect(),
        g_right: rows.row(1).iter().map(|s| s * s).collect(),
        eps,
    })
}

fn solve(w: &WMatrix, rows: &mut DMatrix<f64>) -> Result<Vec<f64>, SpectralError> {
    ql::eigen_tridiagonal(&w.diagonal, &w.off_diagonal, rows).map_err(|e| {
        SpectralError::NoConvergence {
            index: e.index,
            matrix: w.clone(),
        }
    })
}

/// Flag neighbouring eigenvalues (in ascending order) closer than
/// [`DEGENERACY_TOLERANCE`]`·max(1, |ε|)`. Indices refer to the input order.
pub fn degeneracy_warnings(eps: &[f64]) -> Vec<SpectralWarning> {
    let mut order: Vec<usize> = (0..eps.len()).collect();
    order.sort_by(|&a, &b| eps[a].total_cmp(&eps[b]));
    order
        .windows(2)
        .filter_map(|pair| {
            let (a, b) = (pair[0], pair[1]);
            let gap = eps[b] - eps[a];
            let scale = eps[a].abs().max(eps[b].abs()).max(1.0);
            (gap < DEGENERACY_TOLERANCE * scale).then_some(SpectralWarning::NearDegenerate {
                lower: a,
                upper: b,
                gap,
            })
        })
        .collect()
}

/// Closed-form spectrum of the boundary-perturbed chain
/// (fields `[h−α, h, …, h, h+α]`, couplings `α`).
///
/// Modes keep the natural index `k = 1..=N`:
///
/// * `ε_k = h + 2α·cos((2k−1)π/2N)` (descending in `k` for `α > 0`),
/// * `S[j][k] = √(2/N)·sin((2j−1)(2k−1)π/4N)`,
/// * `g_{L,k} = (2/N)·sin²((2k−1)π/4N)`, `g_{R,k} = (2/N)·cos²((2k−1)π/4N)`.
///
/// Call [`SpectralData::sorted`] for ascending order.
pub fn analytic_spectrum(n: usize, h: f64, alpha: f64) -> Result<SpectralData, SpectralError> {
    if n < 2 {
        return Err(SpectralError::TooFewSites(n));
    }
    let nf = n as f64;
    let angle = |k: usize| (2 * k + 1) as f64 * PI / (4.0 * nf);
    let eps: Vec<f64> = (0..n)
        .map(|k| h + 2.0 * alpha * (2.0 * angle(k)).cos())
        .collect();
    let g_left = (0..n).map(|k| 2.0 / nf * angle(k).sin().powi(2)).collect();
    let g_right = (0..n).map(|k| 2.0 / nf * angle(k).cos().powi(2)).collect();
    let norm = (2.0 / nf).sqrt();
    let vectors = DMatrix::from_fn(n, n, |j, k| {
        norm * ((2 * j + 1) as f64 * (2 * k + 1) as f64 * PI / (4.0 * nf)).sin()
    });
    Ok(SpectralData {
        modes: Modes {
            warnings: degeneracy_warnings(&eps),
            eps,
            g_left,
            g_right,
        },
        vectors,
    })
}

/// Whether the boundary-perturbed spectrum splits into `N/2` positive and
/// `N/2` negative energies: `α > (h/2)·|sec((N+1)π/2N)|`.
pub fn split_spectrum_condition(n: usize, h: f64, alpha: f64) -> Result<bool, SpectralError> {
    if n < 2 {
        return Err(SpectralError::TooFewSites(n));
    }
    if !n.is_multiple_of(2) {
        return Err(SpectralError::OddSites(n));
    }
    if !(h > 0.0 && alpha >= 0.0 && h.is_finite() && alpha.is_finite()) {
        return Err(SpectralError::InvalidSplitParameters { h, alpha });
    }
    let sec = 1.0 / ((n as f64 + 1.0) * PI / (2.0 * n as f64)).cos();
    Ok(alpha > 0.5 * h * sec.abs())
}
