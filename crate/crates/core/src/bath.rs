//! Thermal occupations and rate functions of the two bosonic baths.
//!
//! Temperatures `0` and `∞` are first-class values: every function here
//! branches on them and returns the exact limit instead of evaluating an
//! exponential at an extreme argument.

use std::f64::consts::LN_2;
use std::fmt;

use thiserror::Error;

/// Beyond this `|ε/T|` the finite-temperature formulas are replaced by their
/// zero-temperature values.
pub const SATURATION: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum BathError {
    #[error("temperature must be >= 0 (0 and +inf are the exact limits), got {0}")]
    InvalidTemperature(f64),
    #[error("a finite positive temperature is required, got {0}")]
    NotFinitePositive(f64),
    #[error("the bath rate is undefined at zero transition frequency")]
    ZeroFrequency,
    #[error("bath rate gamma must be positive and finite, got {0}")]
    InvalidGamma(f64),
}

/// Bath temperature in units with `k_B = 1`.
///
/// Holds either a finite positive value or one of the two exact limits
/// [`Temperature::ZERO`] and [`Temperature::INFINITE`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Temperature(f64);

impl Temperature {
    pub const ZERO: Temperature = Temperature(0.0);
    pub const INFINITE: Temperature = Temperature(f64::INFINITY);

    /// `0.0` maps to [`Temperature::ZERO`], `+∞` to [`Temperature::INFINITE`].
    pub fn new(value: f64) -> Result<Self, BathError> {
        if value.is_nan() || value < 0.0 {
            return Err(BathError::InvalidTemperature(value));
        }
        Ok(Temperature(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_finite(self) -> bool {
        !self.is_zero() && !self.is_infinite()
    }

    /// `ε/T` with `0` at infinite and `±∞` at zero temperature (`0` if `ε = 0`).
    fn reduced(self, eps: f64) -> f64 {
        if eps == 0.0 || self.is_infinite() {
            0.0
        } else if self.is_zero() {
            f64::INFINITY.copysign(eps)
        } else {
            eps / self.0
        }
    }
}

impl fmt::Display for Temperature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Temperatures of the left and right baths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathPair {
    pub left: Temperature,
    pub right: Temperature,
}

impl BathPair {
    pub fn new(left: Temperature, right: Temperature) -> Self {
        Self { left, right }
    }

    /// Build from raw values; `0.0` and `f64::INFINITY` select the exact limits.
    pub fn from_values(left: f64, right: f64) -> Result<Self, BathError> {
        Ok(Self::new(Temperature::new(left)?, Temperature::new(right)?))
    }

    /// The reversed bias: temperatures exchanged, chain untouched.
    pub fn swapped(self) -> Self {
        Self {
            left: self.right,
            right: self.left,
        }
    }
}

/// Bose-Einstein occupation `1/(e^{ω/T} − 1)` for `ω > 0`.
pub fn bose(omega: f64, t: Temperature) -> f64 {
    debug_assert!(omega > 0.0);
    if t.is_infinite() {
        f64::INFINITY
    } else if t.is_zero() || omega / t.0 > SATURATION {
        0.0
    } else {
        1.0 / (omega / t.0).exp_m1()
    }
}

/// Fermi-Dirac occupation `1/(e^{ε/T} + 1)`.
pub fn fermi(eps: f64, t: Temperature) -> f64 {
    let x = t.reduced(eps);
    if x > SATURATION {
        0.0
    } else if x < -SATURATION {
        1.0
    } else if x >= 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// `f(ε, T_L) − f(ε, T_R)` without cancellation.
///
/// Uses `f(a) − f(b) = sinh((b−a)/2) / (2·cosh(a/2)·cosh(b/2))` with
/// `a = ε/T_L`, `b = ε/T_R`, and `(b−a)` formed from `T_L − T_R` directly, so
/// nearly equal temperatures keep full relative accuracy.
pub fn fermi_difference(eps: f64, left: Temperature, right: Temperature) -> f64 {
    if left == right || eps == 0.0 {
        return 0.0;
    }
    if left.is_zero() || right.is_zero() {
        return fermi(eps, left) - fermi(eps, right);
    }
    let a = left.reduced(eps);
    let b = right.reduced(eps);
    let half_gap = match (left.is_infinite(), right.is_infinite()) {
        (true, _) => 0.5 * b,
        (_, true) => -0.5 * a,
        _ => 0.5 * eps * ((left.0 - right.0) / (left.0 * right.0)),
    };
    if half_gap == 0.0 {
        return 0.0;
    }
    let big = 0.5 * a.abs().max(b.abs()).max(2.0 * half_gap.abs());
    if big < 300.0 {
        half_gap.sinh() / (2.0 * (0.5 * a).cosh() * (0.5 * b).cosh())
    } else {
        let d = half_gap.abs();
        let ln_sinh = d + (-(-2.0 * d).exp_m1()).ln() - LN_2;
        let ln_cosh = |y: f64| y.abs() + (-2.0 * y.abs()).exp().ln_1p() - LN_2;
        let ln = ln_sinh - ln_cosh(0.5 * a) - ln_cosh(0.5 * b) - LN_2;
        ln.exp().copysign(half_gap)
    }
}

/// `χ = coth(|ε|/2T) = 2n(|ε|) + 1`.
///
/// Infinite when `ε = 0` or `T = ∞`; exactly `1` at `T = 0` with `ε ≠ 0`.
pub fn chi(eps: f64, t: Temperature) -> f64 {
    if eps == 0.0 || t.is_infinite() {
        return f64::INFINITY;
    }
    let x = t.reduced(eps).abs();
    if x > SATURATION {
        1.0
    } else {
        1.0 + 2.0 / x.exp_m1()
    }
}

/// Fourier transform of the bath correlation for a flat spectral density:
/// `γ(1 + n(ω))` for `ω > 0`, `γ·n(−ω)` for `ω < 0`.
pub fn gamma_rate(omega: f64, t: Temperature, gamma: f64) -> Result<f64, BathError> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(BathError::InvalidGamma(gamma));
    }
    if omega == 0.0 || omega.is_nan() {
        return Err(BathError::ZeroFrequency);
    }
    Ok(if omega > 0.0 {
        gamma * (1.0 + bose(omega, t))
    } else {
        gamma * bose(-omega, t)
    })
}

/// `χ·∂f/∂T = (ε/2T²)·csch(|ε|/T)`, the first-order linear-response kernel.
///
/// The sign follows `ε`: warming a bath drains negative-energy modes. At
/// `ε = 0` the one-sided limits are `±1/(2T)`; the function returns their
/// midpoint `0`.
pub fn chi_times_dfdt(eps: f64, t: f64) -> Result<f64, BathError> {
    if !(t.is_finite() && t > 0.0) {
        return Err(BathError::NotFinitePositive(t));
    }
    if eps == 0.0 {
        return Ok(0.0);
    }
    let x = eps.abs() / t;
    Ok(eps / (2.0 * t * t) / x.sinh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn temp(v: f64) -> Temperature {
        Temperature::new(v).unwrap()
    }

    #[test]
    fn temperature_validation() {
        assert!(temp(0.0).is_zero());
        assert!(temp(f64::INFINITY).is_infinite());
        assert!(temp(2.0).is_finite());
        assert!(Temperature::new(-1.0).is_err());
        assert!(Temperature::new(f64::NAN).is_err());
    }

    #[test]
    fn fermi_examples() {
        assert_eq!(fermi(3.0, Temperature::INFINITE), 0.5);
        assert_eq!(fermi(-1e9, Temperature::INFINITE), 0.5);
        assert_abs_diff_eq!(fermi(1.0, temp(1.0)), 0.2689414213699951, epsilon = 1e-15);
        assert_eq!(fermi(2.0, Temperature::ZERO), 0.0);
        assert_eq!(fermi(-2.0, Temperature::ZERO), 1.0);
        assert_eq!(fermi(0.0, Temperature::ZERO), 0.5);
        assert_eq!(fermi(1e6, temp(1.0)), 0.0);
        assert_eq!(fermi(-1e6, temp(1.0)), 1.0);
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(2.0, Temperature::ZERO), 1.0);
        assert_eq!(chi(-2.0, Temperature::ZERO), 1.0);
        assert_abs_diff_eq!(chi(2.0, temp(1.0)), 1.3130352854993315, epsilon = 1e-14);
        assert_eq!(chi(2.0, Temperature::INFINITE), f64::INFINITY);
        assert_eq!(chi(0.0, temp(1.0)), f64::INFINITY);
    }

    #[test]
    fn gamma_rate_examples() {
        assert_eq!(gamma_rate(1.0, Temperature::ZERO, 2.0).unwrap(), 2.0);
        assert_eq!(gamma_rate(-1.0, Temperature::ZERO, 2.0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            gamma_rate(1.0, temp(1.0), 1.0).unwrap(),
            1.5819767068693265,
            epsilon = 1e-14
        );
        assert_eq!(gamma_rate(0.0, temp(1.0), 1.0), Err(BathError::ZeroFrequency));
        assert_eq!(gamma_rate(1.0, temp(1.0), 0.0), Err(BathError::InvalidGamma(0.0)));
    }

    #[test]
    fn chi_times_dfdt_examples() {
        assert_eq!(chi_times_dfdt(0.0, 1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(chi_times_dfdt(1.0, 1.0).unwrap(), 0.4254590641196608, epsilon = 1e-15);
        assert_abs_diff_eq!(chi_times_dfdt(-1.0, 1.0).unwrap(), -0.4254590641196608, epsilon = 1e-15);
        assert!(chi_times_dfdt(1.0, 0.0).is_err());
        assert!(chi_times_dfdt(1.0, -2.0).is_err());
        // one-sided limits approach ±1/(2T)
        assert_relative_eq!(chi_times_dfdt(1e-9, 2.0).unwrap(), 0.25, max_relative = 1e-12);
        assert_relative_eq!(chi_times_dfdt(-1e-9, 2.0).unwrap(), -0.25, max_relative = 1e-12);
    }

    /// Central-difference oracle for `χ·∂f/∂T`.
    fn chi_dfdt_fd(eps: f64, t: f64) -> f64 {
        let d = 1e-4 * t;
        // difference the small tail f(|ε|) and use f(−ε) = 1 − f(ε)
        let a = eps.abs();
        let df = (fermi(a, temp(t + d)) - fermi(a, temp(t - d))) / (2.0 * d);
        chi(eps, temp(t)) * df * eps.signum()
    }

    #[test]
    fn chi_times_dfdt_matches_finite_differences_on_grid() {
        for i in 0..=40 {
            let eps = -10.0 + 0.5 * i as f64;
            if eps == 0.0 {
                continue;
            }
            for t in [0.1, 0.3, 1.0, 2.5, 7.0, 20.0, 100.0] {
                let exact = chi_times_dfdt(eps, t).unwrap();
                let fd = chi_dfdt_fd(eps, t);
                // both underflow far in the tail
                if exact.abs() < 1e-250 {
                    assert!(fd.abs() < 1e-200);
                    continue;
                }
                assert_relative_eq!(exact, fd, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn fermi_difference_limits() {
        let inf = Temperature::INFINITE;
        let zero = Temperature::ZERO;
        assert_eq!(fermi_difference(2.0, inf, zero), 0.5);
        assert_eq!(fermi_difference(-2.0, inf, zero), -0.5);
        assert_eq!(fermi_difference(2.0, zero, inf), -0.5);
        assert_eq!(fermi_difference(2.0, temp(3.0), temp(3.0)), 0.0);
        assert_eq!(fermi_difference(0.0, temp(3.0), temp(1.0)), 0.0);
        assert_relative_eq!(
            fermi_difference(1.0, inf, temp(2.0)),
            0.5 - fermi(1.0, temp(2.0)),
            max_relative = 1e-14
        );
        // far tail: both occupations round to zero, the difference does not
        let d = fermi_difference(2000.0, temp(3.0), temp(2.0));
        let expected = (-2000.0f64 / 3.0).exp() * (1.0 - (-2000.0f64 / 6.0).exp());
        assert_relative_eq!(d, expected, max_relative = 1e-10);
    }

    #[test]
    fn fermi_difference_keeps_precision_for_close_temperatures() {
        // f(ε,T+d) − f(ε,T−d) ≈ 2d·∂f/∂T for small d
        let (eps, t, d) = (1.3, 2.0, 1e-7);
        let diff = fermi_difference(eps, temp(t + d), temp(t - d));
        let dfdt = chi_times_dfdt(eps, t).unwrap() / chi(eps, temp(t));
        assert_relative_eq!(diff, 2.0 * d * dfdt, max_relative = 1e-8);
    }

    proptest! {
        #[test]
        fn fermi_particle_hole(eps in -50.0..50.0f64, t in 0.01..100.0f64) {
            let t = temp(t);
            prop_assert!((fermi(-eps, t) - (1.0 - fermi(eps, t))).abs() < 1e-15);
        }

        #[test]
        fn fermi_decreasing_and_bounded(e1 in -20.0..20.0f64, de in 1e-3..5.0f64, t in 0.5..50.0f64) {
            let t = temp(t);
            let (a, b) = (fermi(e1, t), fermi(e1 + de, t));
            prop_assert!(a > b);
            prop_assert!(a > 0.0 && a < 1.0);
        }

        #[test]
        fn chi_is_twice_bose_plus_one(eps in -30.0..30.0f64, t in 0.1..100.0f64) {
            prop_assume!(eps.abs() > 1e-6);
            let t = temp(t);
            let c = chi(eps, t);
            prop_assert!(c >= 1.0);
            prop_assert!((c - (2.0 * bose(eps.abs(), t) + 1.0)).abs() <= 1e-12 * c);
        }

        #[test]
        fn detailed_balance(omega in 0.01..30.0f64, t in 0.1..100.0f64, gamma in 0.1..3.0f64) {
            let tt = temp(t);
            let up = gamma_rate(omega, tt, gamma).unwrap();
            let down = gamma_rate(-omega, tt, gamma).unwrap();
            prop_assert!((up / down / (omega / t).exp() - 1.0).abs() < 1e-10);
            prop_assert!((up - down - gamma).abs() < 1e-10 * up);
        }

        #[test]
        fn fermi_difference_matches_plain_subtraction(eps in -20.0..20.0f64, tl in 0.1..50.0f64, tr in 0.1..50.0f64) {
            let plain = fermi(eps, temp(tl)) - fermi(eps, temp(tr));
            let stable = fermi_difference(eps, temp(tl), temp(tr));
            prop_assert!((plain - stable).abs() < 1e-14);
        }
    }
}
