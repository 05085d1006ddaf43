//! Steady-state occupations, particle and heat currents, and rectification.
//!
//! In the steady state each normal mode `k` is a two-terminal channel. With
//! `w_i = g_{i,k}·χ_{i,k}` the mode occupation is the weighted mean
//! `(w_L f_L + w_R f_R)/(w_L + w_R)` and the particle flow it carries from
//! the left bath is `γ·w_L w_R/(w_L + w_R)·(f_L − f_R)`. The heat current
//! weights every channel by its energy `ε_k`. Both currents are reported at
//! the left contact: positive means flow out of the left bath.

use std::f64::consts::PI;

use thiserror::Error;

use crate::bath::{self, BathError, BathPair, Temperature};
use crate::chain::ChainSpec;
use crate::spectral::{self, Modes, SpectralError};

/// Below this `|ε|/T` for both baths a mode is treated by its zero-energy
/// series; the direct formula would multiply two diverging `χ` by a
/// vanishing occupation difference.
pub const ZERO_MODE_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransportError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Bath(#[from] BathError),
    #[error("{case:?} regime requires {requirement}; got N={n}, h={h}, alpha={alpha}")]
    CasePrecondition {
        case: SpectrumCase,
        requirement: &'static str,
        n: usize,
        h: f64,
        alpha: f64,
    },
}

/// Occupations and currents of the steady state.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportResult {
    /// `⟨ñ†_k ñ_k⟩` per mode; `None` for modes coupled to neither bath.
    pub occupations: Vec<Option<f64>>,
    pub particle_current: f64,
    pub energy_current: f64,
}

/// Contribution of one normal mode to the currents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCurrent {
    pub particle: f64,
    pub energy: f64,
}

/// Heat current under forward and reversed bias.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectificationResult {
    pub j_fwd: f64,
    pub j_rev: f64,
    /// `(J + J_r)/min(J, |J_r|)`; `None` when the denominator vanishes.
    pub r: Option<f64>,
    /// The chain's spectrum had near-degenerate modes.
    pub degenerate: bool,
    /// Number of modes coupled to neither bath.
    pub decoupled: usize,
}

impl RectificationResult {
    /// Forward and reversed currents flow the same way, which ordinary
    /// diode behaviour never produces.
    pub fn same_sign(&self) -> bool {
        self.j_fwd * self.j_rev > 0.0
    }
}

/// Coefficients of the small-gradient expansion
/// `J_N = γ·δT·J1 + γ·δT²·J2 + O(δT³)` at `T_L = T + δT/2`, `T_R = T − δT/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearResponse {
    pub j1: f64,
    /// Even part of the particle current; vanishes for mirror-symmetric
    /// chains and is the leading rectifying term otherwise.
    pub j2: f64,
}

/// Sign structure of the boundary-perturbed spectrum in the extreme-bias
/// limit `T_L = ∞`, `T_R = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumCase {
    /// `h > 2α > 0`: every mode energy is positive.
    PositiveSpectrum,
    /// `h < 0`, `|h| > 2α > 0`: every mode energy is negative.
    NegativeSpectrum,
    /// Even `N` and `α` above the split threshold: half the energies are
    /// positive, half negative.
    SplitSpectrum,
}

/// How [`limit_current_sums`] assigns a sign to each mode energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignRule {
    /// Take every `ε_k` as positive.
    Positive,
    /// Take every `ε_k` as negative.
    Negative,
    /// Upper half of the spectrum positive, lower half negative.
    Split,
    /// Use the actual sign of each `ε_k`.
    Resolved,
}

/// Effective coupling of a mode to bath `i`. Zero weights stay zero even
/// when `χ` diverges.
pub(crate) fn weight(g: f64, eps: f64, t: Temperature) -> f64 {
    if g == 0.0 {
        0.0
    } else {
        g * bath::chi(eps, t)
    }
}

/// Particle flow of one mode out of the left bath, per unit `γ`.
fn channel_flow(eps: f64, g_left: f64, g_right: f64, baths: BathPair) -> f64 {
    let BathPair { left, right } = baths;
    if g_left == 0.0 || g_right == 0.0 || eps == 0.0 || left == right {
        return 0.0;
    }
    let x_left = reduced(eps, left);
    let x_right = reduced(eps, right);
    if x_left.max(x_right) < ZERO_MODE_THRESHOLD {
        // χ_i ≈ 2T_i/|ε| and f_L − f_R ≈ (ε/4)(1/T_R − 1/T_L)
        let num = g_left * g_right * (x_right - x_left);
        let den = g_left * x_right + g_right * x_left;
        return 0.5 * eps.signum() * num / den;
    }
    let w_left = weight(g_left, eps, left);
    let w_right = weight(g_right, eps, right);
    let series = if w_left.is_infinite() {
        w_right
    } else if w_right.is_infinite() {
        w_left
    } else {
        w_left * w_right / (w_left + w_right)
    };
    series * bath::fermi_difference(eps, left, right)
}

/// `|ε|/T` with the two limits: `0` for `T = ∞`, `∞` for `T = 0`.
fn reduced(eps: f64, t: Temperature) -> f64 {
    if t.is_infinite() {
        0.0
    } else if t.is_zero() {
        f64::INFINITY
    } else {
        eps.abs() / t.value()
    }
}

/// Steady-state occupation of every mode.
pub fn steady_occupations(modes: &Modes, baths: BathPair) -> Vec<Option<f64>> {
    (0..modes.len())
        .map(|k| {
            let eps = modes.eps[k];
            let f_left = bath::fermi(eps, baths.left);
            let f_right = bath::fermi(eps, baths.right);
            let w_left = weight(modes.g_left[k], eps, baths.left);
            let w_right = weight(modes.g_right[k], eps, baths.right);
            match (w_left.is_infinite(), w_right.is_infinite()) {
                // only reachable when both occupations are 1/2
                (true, true) => Some(0.5 * (f_left + f_right)),
                (true, false) => Some(f_left),
                (false, true) => Some(f_right),
                _ if w_left + w_right == 0.0 => None,
                _ => Some((w_left * f_left + w_right * f_right) / (w_left + w_right)),
            }
        })
        .collect()
}

/// Per-mode particle and energy flows out of the left bath.
pub fn mode_currents(modes: &Modes, baths: BathPair, gamma: f64) -> Vec<ModeCurrent> {
    (0..modes.len())
        .map(|k| {
            let eps = modes.eps[k];
            let flow = channel_flow(eps, modes.g_left[k], modes.g_right[k], baths);
            ModeCurrent {
                particle: gamma * flow,
                energy: gamma * (eps * flow),
            }
        })
        .collect()
}

/// Particle (magnetization) current `J_N`.
pub fn particle_current(modes: &Modes, baths: BathPair, gamma: f64) -> f64 {
    let sum: f64 = (0..modes.len())
        .map(|k| channel_flow(modes.eps[k], modes.g_left[k], modes.g_right[k], baths))
        .sum();
    gamma * sum
}

/// Energy current `J_E`; with a time-independent Hamiltonian this is the heat
/// current leaving the left bath.
pub fn energy_current(modes: &Modes, baths: BathPair, gamma: f64) -> f64 {
    let sum: f64 = (0..modes.len())
        .map(|k| {
            let eps = modes.eps[k];
            eps * channel_flow(eps, modes.g_left[k], modes.g_right[k], baths)
        })
        .sum();
    gamma * sum
}

pub fn transport(modes: &Modes, baths: BathPair, gamma: f64) -> TransportResult {
    TransportResult {
        occupations: steady_occupations(modes, baths),
        particle_current: particle_current(modes, baths, gamma),
        energy_current: energy_current(modes, baths, gamma),
    }
}

/// Small-gradient coefficients of the particle current around temperature `t`.
pub fn linear_response(modes: &Modes, t: f64) -> Result<LinearResponse, TransportError> {
    if !(t.is_finite() && t > 0.0) {
        return Err(BathError::NotFinitePositive(t).into());
    }
    let mut j1 = 0.0;
    let mut j2 = 0.0;
    for k in 0..modes.len() {
        let (eps, gl, gr) = (modes.eps[k], modes.g_left[k], modes.g_right[k]);
        let total = gl + gr;
        if total == 0.0 {
            continue;
        }
        j1 += gl * gr / total * bath::chi_times_dfdt(eps, t)?;
        if eps != 0.0 {
            let csch = 1.0 / (eps / t).sinh();
            let kernel = eps * eps.abs() / (4.0 * t.powi(4)) * csch * csch;
            j2 += gl * gr * (gr - gl) / (total * total) * kernel;
        }
    }
    Ok(LinearResponse { j1, j2 })
}

/// `(J + J_r)/min(J, |J_r|)`, or `None` if the denominator is zero.
pub fn rectification_factor(j_fwd: f64, j_rev: f64) -> Option<f64> {
    let den = j_fwd.min(j_rev.abs());
    (den != 0.0 && den.is_finite()).then(|| (j_fwd + j_rev) / den)
}

/// Forward and reversed heat currents of a chain and its rectification
/// factor. Reversing the bias swaps the bath temperatures; the chain stays.
pub fn rectify(chain: &ChainSpec, baths: BathPair) -> Result<RectificationResult, TransportError> {
    let modes = spectral::boundary_modes(chain)?;
    Ok(rectify_modes(&modes, baths, chain.gamma()))
}

pub fn rectify_modes(modes: &Modes, baths: BathPair, gamma: f64) -> RectificationResult {
    let j_fwd = energy_current(modes, baths, gamma);
    let j_rev = energy_current(modes, baths.swapped(), gamma);
    RectificationResult {
        j_fwd,
        j_rev,
        r: rectification_factor(j_fwd, j_rev),
        degenerate: modes.is_degenerate(),
        decoupled: modes.decoupled().len(),
    }
}

/// Closed-form `(J, J_r)` of the boundary-perturbed chain at `T_L = ∞`,
/// `T_R = 0`.
pub fn asymptotic_currents(
    n: usize,
    h: f64,
    alpha: f64,
    gamma: f64,
    case: SpectrumCase,
) -> Result<(f64, f64), TransportError> {
    let fail = |requirement| TransportError::CasePrecondition {
        case,
        requirement,
        n,
        h,
        alpha,
    };
    match case {
        SpectrumCase::PositiveSpectrum => {
            if !(h > 0.0 && alpha > 0.0 && h > 2.0 * alpha) {
                return Err(fail("h > 2*alpha > 0"));
            }
            Ok((0.5 * gamma * (h + alpha), -0.5 * gamma * (h - alpha)))
        }
        SpectrumCase::NegativeSpectrum => {
            if !(h < 0.0 && alpha > 0.0 && h.abs() > 2.0 * alpha) {
                return Err(fail("h < 0 and |h| > 2*alpha > 0"));
            }
            Ok((0.5 * gamma * (h.abs() - alpha), -0.5 * gamma * (h.abs() + alpha)))
        }
        SpectrumCase::SplitSpectrum => {
            let split = spectral::split_spectrum_condition(n, h, alpha)
                .map_err(|_| fail("even N, h > 0, alpha >= 0"))?;
            if !split {
                return Err(fail("alpha > (h/2)|sec((N+1)pi/2N)|"));
            }
            let prefactor = split_prefactor(n, gamma);
            Ok((prefactor * (alpha + 0.5 * h), -prefactor * (alpha - 0.5 * h)))
        }
    }
}

/// `(γ/N)·csc(π/2N)`, which tends to `2γ/π` as `N → ∞`.
pub fn split_prefactor(n: usize, gamma: f64) -> f64 {
    gamma / (n as f64 * (PI / (2.0 * n as f64)).sin())
}

/// Extreme-bias currents `(J, J_r)` summed mode by mode:
/// `J = (γ/2)·Σ s_k ε_k g_{R,k}` and `J_r = −(γ/2)·Σ s_k ε_k g_{L,k}`, with the
/// sign `s_k` chosen by `rule`.
///
/// With [`SignRule::Resolved`] the result equals
/// [`energy_current`] at `(∞, 0)` and `(0, ∞)` exactly.
pub fn limit_current_sums(modes: &Modes, gamma: f64, rule: SignRule) -> (f64, f64) {
    let n = modes.len();
    let upper_half: Vec<bool> = match rule {
        SignRule::Split => {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| modes.eps[b].total_cmp(&modes.eps[a]));
            let mut upper = vec![false; n];
            for &k in &order[..n / 2] {
                upper[k] = true;
            }
            upper
        }
        _ => Vec::new(),
    };
    let signed = |k: usize| {
        let eps = modes.eps[k];
        match rule {
            SignRule::Positive => eps,
            SignRule::Negative => -eps,
            SignRule::Split if upper_half[k] => eps,
            SignRule::Split => -eps,
            SignRule::Resolved => eps.abs(),
        }
    };
    let forward: f64 = (0..n).map(|k| signed(k) * (modes.g_right[k] * 0.5)).sum();
    let reverse: f64 = (0..n).map(|k| -(signed(k) * (modes.g_left[k] * 0.5))).sum();
    (gamma * forward, gamma * reverse)
}
