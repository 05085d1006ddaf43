//! Relaxation of mode occupations and coherences toward the steady state.
//!
//! Under the global dissipator the occupations obey the decoupled linear
//! equations `dn_k/dt = −r_k (n_k − n_k^ss)` with `r_k = γ(g_L χ_L + g_R χ_R)`,
//! so the exact solution is a single exponential per mode.

use thiserror::Error;

use crate::bath::BathPair;
use crate::spectral::Modes;
use crate::transport::{steady_occupations, weight};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("expected {expected} initial occupations, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("initial occupation {value} of mode {mode} is outside [0, 1]")]
    OccupationOutOfRange { mode: usize, value: f64 },
    #[error("coherence decay needs two distinct modes, got k = k' = {0}")]
    SameMode(usize),
    #[error("mode index {index} out of range for {len} modes")]
    ModeOutOfRange { index: usize, len: usize },
}

/// Occupations of every mode sampled at a list of times.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTrajectory {
    pub times: Vec<f64>,
    /// `occupations[i][k]` is `n_k(times[i])`.
    pub occupations: Vec<Vec<f64>>,
    /// Relaxation rate of each mode; infinite when a bath at `T = ∞` or a
    /// zero-energy mode makes `χ` diverge.
    pub rates: Vec<f64>,
}

/// `γ(g_L χ_L + g_R χ_R)` for every mode.
pub fn relaxation_rates(modes: &Modes, baths: BathPair, gamma: f64) -> Vec<f64> {
    (0..modes.len())
        .map(|k| {
            let eps = modes.eps[k];
            let total = weight(modes.g_left[k], eps, baths.left)
                + weight(modes.g_right[k], eps, baths.right);
            gamma * total
        })
        .collect()
}

fn check_initial(modes: &Modes, n0: &[f64]) -> Result<(), DynamicsError> {
    if n0.len() != modes.len() {
        return Err(DynamicsError::LengthMismatch {
            expected: modes.len(),
            got: n0.len(),
        });
    }
    match n0.iter().position(|n| !(0.0..=1.0).contains(n)) {
        Some(mode) => Err(DynamicsError::OccupationOutOfRange {
            mode,
            value: n0[mode],
        }),
        None => Ok(()),
    }
}

fn relax(n0: f64, steady: Option<f64>, rate: f64, t: f64) -> f64 {
    match steady {
        // mode decoupled from both baths: frozen
        None => n0,
        Some(_) if t == 0.0 => n0,
        Some(ss) if rate.is_infinite() => ss,
        Some(ss) => ss + (n0 - ss) * (-rate * t).exp(),
    }
}

/// Occupations at time `t` starting from `n0`.
pub fn relax_occupations(
    modes: &Modes,
    baths: BathPair,
    n0: &[f64],
    t: f64,
    gamma: f64,
) -> Result<Vec<f64>, DynamicsError> {
    if t.is_nan() || t < 0.0 {
        return Err(DynamicsError::NegativeTime(t));
    }
    check_initial(modes, n0)?;
    let steady = steady_occupations(modes, baths);
    let rates = relaxation_rates(modes, baths, gamma);
    Ok((0..modes.len())
        .map(|k| relax(n0[k], steady[k], rates[k], t))
        .collect())
}

pub fn trajectory(
    modes: &Modes,
    baths: BathPair,
    n0: &[f64],
    times: &[f64],
    gamma: f64,
) -> Result<ModeTrajectory, DynamicsError> {
    if let Some(&t) = times.iter().find(|t| t.is_nan() || **t < 0.0) {
        return Err(DynamicsError::NegativeTime(t));
    }
    check_initial(modes, n0)?;
    let steady = steady_occupations(modes, baths);
    let rates = relaxation_rates(modes, baths, gamma);
    let occupations = times
        .iter()
        .map(|&t| {
            (0..modes.len())
                .map(|k| relax(n0[k], steady[k], rates[k], t))
                .collect()
        })
        .collect();
    Ok(ModeTrajectory {
        times: times.to_vec(),
        occupations,
        rates,
    })
}

/// Decay rate of the coherence `⟨ñ†_k ñ_k'⟩`, the mean of the two
/// occupation relaxation rates.
pub fn offdiagonal_decay_rate(
    modes: &Modes,
    baths: BathPair,
    k: usize,
    k_prime: usize,
    gamma: f64,
) -> Result<f64, DynamicsError> {
    let len = modes.len();
    for index in [k, k_prime] {
        if index >= len {
            return Err(DynamicsError::ModeOutOfRange { index, len });
        }
    }
    if k == k_prime {
        return Err(DynamicsError::SameMode(k));
    }
    let a = |m: usize| {
        weight(modes.g_left[m], modes.eps[m], baths.left)
            + weight(modes.g_right[m], modes.eps[m], baths.right)
    };
    Ok(0.5 * gamma * (a(k) + a(k_prime)))
}
