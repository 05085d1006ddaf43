//! Random cross-checks of the mode formulas against the dense oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    build_dense_model, fluxes_from_density, ops, steady_state_density, steady_state_with,
    DissipatorKind, OracleError,
};
use crate::bath::BathPair;
use crate::chain::ChainSpec;
use crate::spectral::diagonalize;
use crate::transport;

/// Two transition frequencies closer than this make a draw ambiguous.
pub const MIN_FREQUENCY_GAP: f64 = 1e-6;
pub const RELATIVE_TOLERANCE: f64 = 1e-8;
/// Values at or below this size are compared absolutely, against
/// [`ABSOLUTE_TOLERANCE`].
pub const SMALL_VALUE: f64 = 1e-8;
pub const ABSOLUTE_TOLERANCE: f64 = 1e-12;
pub const PARITY_TOLERANCE: f64 = 1e-10;
pub const BALANCE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyCheck {
    pub name: &'static str,
    /// Worst error seen: relative for large values, absolute for small ones
    /// and for the matrix checks.
    pub max_error: f64,
    pub tolerance: f64,
    pub failures: usize,
    pub samples: usize,
}

impl VerifyCheck {
    fn new(name: &'static str, tolerance: f64) -> Self {
        VerifyCheck {
            name,
            max_error: 0.0,
            tolerance,
            failures: 0,
            samples: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Record `actual` against the reference `expected`.
    fn compare(&mut self, actual: f64, expected: f64) {
        let diff = (actual - expected).abs();
        let (error, ok) = if expected.abs() <= SMALL_VALUE {
            (diff, diff <= ABSOLUTE_TOLERANCE)
        } else {
            let rel = diff / expected.abs();
            (rel, rel <= self.tolerance)
        };
        self.record(error, ok);
    }

    fn bound(&mut self, error: f64) {
        self.record(error, error <= self.tolerance);
    }

    fn record(&mut self, error: f64, ok: bool) {
        self.samples += 1;
        self.max_error = self.max_error.max(error);
        if !ok {
            self.failures += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub draws: usize,
    pub checks: Vec<VerifyCheck>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(VerifyCheck::passed)
    }
}

/// Random chain and finite baths with well separated `{±ε_k}`.
pub fn random_draw(rng: &mut ChaCha8Rng, sites: usize) -> (ChainSpec, BathPair) {
    loop {
        let fields = (0..sites).map(|_| rng.random_range(-3.0..3.0)).collect();
        let couplings = (0..sites - 1).map(|_| rng.random_range(0.3..2.0)).collect();
        let gamma = rng.random_range(0.2..2.0);
        let chain = ChainSpec::custom(fields, couplings, gamma).expect("valid draw");
        let baths = BathPair::from_values(rng.random_range(0.2..20.0), rng.random_range(0.2..20.0))
            .expect("finite temperatures");
        let eps = match diagonalize(&chain) {
            Ok(s) => s.eps.clone(),
            Err(_) => continue,
        };
        let mut freqs: Vec<f64> = eps.iter().flat_map(|&e| [e, -e]).collect();
        freqs.sort_by(f64::total_cmp);
        if freqs.windows(2).all(|w| w[1] - w[0] >= MIN_FREQUENCY_GAP) {
            return (chain, baths);
        }
    }
}

/// Compare steady occupations, particle current and heat current from the
/// mode formulas with the dense Liouvillian, `draws` times per chain length.
pub fn run_equivalence_suite(seed: u64, sizes: &[usize], draws: usize) -> Result<VerifyReport, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut occupations = VerifyCheck::new("steady occupations", RELATIVE_TOLERANCE);
    let mut particle = VerifyCheck::new("particle current J_N", RELATIVE_TOLERANCE);
    let mut energy = VerifyCheck::new("energy current J_E", RELATIVE_TOLERANCE);
    let mut parity = VerifyCheck::new("parity string irrelevance", PARITY_TOLERANCE);
    let mut balance = VerifyCheck::new("flux balance L+R", BALANCE_TOLERANCE);

    for &sites in sizes {
        for _ in 0..draws {
            let (chain, baths) = random_draw(&mut rng, sites);
            let gamma = chain.gamma();
            let modes = diagonalize(&chain).expect("accepted draws diagonalize");
            let model = build_dense_model(&chain)?;

            let rho = steady_state_density(&model, baths, gamma)?;
            let fluxes = fluxes_from_density(&model, baths, &rho, gamma)?;
            let predicted = transport::transport(&modes, baths, gamma);

            for (k, n) in model.mode_occupations(&rho).into_iter().enumerate() {
                occupations.compare(predicted.occupations[k].unwrap_or(f64::NAN), n);
            }
            particle.compare(predicted.particle_current, fluxes.particle_left);
            energy.compare(predicted.energy_current, fluxes.heat_left);
            balance.bound((fluxes.heat_left + fluxes.heat_right).abs());
            balance.bound((fluxes.particle_left + fluxes.particle_right).abs());

            let with = steady_state_with(&model, baths, gamma, DissipatorKind::Fermionic { parity: true })?;
            let without = steady_state_with(&model, baths, gamma, DissipatorKind::Fermionic { parity: false })?;
            parity.bound(ops::max_abs(&(&with - &without)));
        }
    }

    Ok(VerifyReport {
        seed,
        draws: draws * sizes.len(),
        checks: vec![occupations, particle, energy, parity, balance],
    })
}
