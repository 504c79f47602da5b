//! Closed-chain error-probability analysis.
//!
//! The difference of composite gains R between the true and a competing
//! antenna is approximated as Gaussian (central limit over the L elements),
//! which makes γ = R² noncentral chi-square with one degree of freedom. Writing
//! the CPEP in Craig's form and averaging through the MGF of γ leaves a single
//! finite integral over ϑ ∈ (0, π/2), evaluated either by Gauss-Chebyshev
//! quadrature or by adaptive Gauss-Kronrod as a reference.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::channel::SI_POWER_FACTOR;
use crate::error::{Error, Result};
use crate::link::label_distance;
use crate::params::SystemParams;
use crate::quadrature::{integrate_adaptive, QuadratureRule};
use crate::stats::q_function;

/// Mean and variance of the composite detection statistic R.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub mu_r: f64,
    pub sigma2_r: f64,
}

/// μ_R = Lπ/4 and σ_R² = L(32 − π²)/16.
pub fn moments_r(elements: usize) -> Result<MomentSet> {
    if elements < 1 {
        return Err(Error::InvalidParams("L must be ≥ 1".into()));
    }
    let l = elements as f64;
    Ok(MomentSet {
        mu_r: l * PI / 4.0,
        sigma2_r: l * (32.0 - PI * PI) / 16.0,
    })
}

/// Interference-plus-noise power ς = Ω_I + κ²L(1 − π²/16) + 1/ρ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveNoise {
    pub varsigma: f64,
}

impl EffectiveNoise {
    /// The ρ → ∞ floor Ω_I + κ²L(1 − π²/16).
    pub fn floor(params: &SystemParams) -> f64 {
        params.omega_i + params.kappa * params.kappa * params.elements as f64 * SI_POWER_FACTOR
    }
}

pub fn effective_noise(params: &SystemParams) -> EffectiveNoise {
    EffectiveNoise {
        varsigma: EffectiveNoise::floor(params) + 1.0 / params.rho_linear(),
    }
}

/// Conditional PEP Q(√(|G_n − G_n̂|² / (2(Ω_I + |Σf|² + 1/ρ)))).
pub fn cpep(gain_diff_sq: f64, interference_power: f64, omega_i: f64, rho: f64) -> f64 {
    let denom = 2.0 * (omega_i + interference_power + 1.0 / rho);
    q_function((gain_diff_sq / denom).sqrt())
}

/// M_γ(−1/(4ς sin²ϑ)) for γ = R², R ~ N(μ_R, σ_R²).
///
/// Equals √(2ς s / (2ς s + σ_R²)) · exp(−μ_R² / (4ς s + 2σ_R²)) with s = sin²ϑ.
pub fn upep_integrand(theta: f64, moments: &MomentSet, varsigma: f64) -> f64 {
    if varsigma.is_infinite() {
        return 1.0;
    }
    let s = theta.sin().powi(2);
    let a = 2.0 * varsigma * s;
    let spread = if moments.sigma2_r > 0.0 {
        (a / (a + moments.sigma2_r)).sqrt()
    } else {
        1.0
    };
    let mu2 = moments.mu_r * moments.mu_r;
    if mu2 == 0.0 {
        return spread;
    }
    spread * (-mu2 / (2.0 * (a + moments.sigma2_r))).exp()
}

/// (1/π)∫₀^{π/2} M_γ(−1/(4ς sin²ϑ)) dϑ by adaptive Gauss-Kronrod.
///
/// Refines until the error estimate is below `tolerance` relative to the
/// value; since the UPEP never exceeds 1/2, the absolute error is then also
/// below `tolerance`.
pub fn upep_reference(moments: &MomentSet, varsigma: f64, tolerance: f64) -> Result<f64> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::InvalidParams("tolerance must be > 0".into()));
    }
    let (value, _) = integrate_adaptive(
        |t| upep_integrand(t, moments, varsigma),
        0.0,
        FRAC_PI_2,
        tolerance,
        4096,
    )?;
    Ok(value / PI)
}

pub fn chebyshev_rule(order: usize) -> Result<QuadratureRule> {
    QuadratureRule::chebyshev(order)
}

/// Gauss-Chebyshev UPEP with ϑ = (π/4)φ + π/4:
/// (π/(4G)) Σ_g √(1 − φ_g²) M_γ(−1/(4ς sin²ϑ_g)).
pub fn upep_gcq_with(rule: &QuadratureRule, moments: &MomentSet, varsigma: f64) -> f64 {
    // weights π/G times the 1/4 from dϑ = (π/4)dφ and the outer 1/π
    0.25 * rule.integrate(|phi| upep_integrand(FRAC_PI_4 * phi + FRAC_PI_4, moments, varsigma))
}

pub fn upep_gcq(moments: &MomentSet, varsigma: f64, order: usize) -> Result<f64> {
    Ok(upep_gcq_with(&chebyshev_rule(order)?, moments, varsigma))
}

/// UPEP in the ρ → ∞ limit, where ς settles at Ω_I + κ²L(1 − π²/16).
pub fn upep_asymptotic(params: &SystemParams, order: usize) -> Result<f64> {
    let floor = EffectiveNoise::floor(params);
    if floor <= 0.0 {
        return Err(Error::NoInterferenceFloor);
    }
    upep_gcq(&moments_r(params.elements)?, floor, order)
}

/// Σ over ordered pairs n ≠ n̂ of the Hamming distance between natural-binary labels.
pub fn total_label_distance(tx_antennas: usize) -> u64 {
    (0..tx_antennas)
        .flat_map(|a| (0..tx_antennas).map(move |b| label_distance(a, b) as u64))
        .sum()
}

/// Union bound (1/(n_t log₂ n_t)) Σ_{n≠n̂} P̄ N(n → n̂) with a pair-independent UPEP.
///
/// Exact for n_t = 2.
pub fn abep_union_bound(upep: f64, tx_antennas: usize) -> Result<f64> {
    if tx_antennas < 2 || !tx_antennas.is_power_of_two() {
        return Err(Error::InvalidParams(format!(
            "n_t must be a power of two ≥ 2 (got {tx_antennas})"
        )));
    }
    let bits = tx_antennas.trailing_zeros() as f64;
    Ok(upep * total_label_distance(tx_antennas) as f64 / (tx_antennas as f64 * bits))
}

/// Analytic ABEP at the params' SNR using the params' quadrature order.
pub fn abep(params: &SystemParams) -> Result<f64> {
    let m = moments_r(params.elements)?;
    let u = upep_gcq(&m, effective_noise(params).varsigma, params.gcq_order)?;
    abep_union_bound(u, params.tx_antennas)
}

/// Asymptotic (ρ → ∞) ABEP.
pub fn abep_asymptotic(params: &SystemParams) -> Result<f64> {
    abep_union_bound(upep_asymptotic(params, params.gcq_order)?, params.tx_antennas)
}

/// ABEP using the adaptive reference integral instead of the quadrature rule.
pub fn abep_reference(params: &SystemParams, tolerance: f64) -> Result<f64> {
    let m = moments_r(params.elements)?;
    let u = upep_reference(&m, effective_noise(params).varsigma, tolerance)?;
    abep_union_bound(u, params.tx_antennas)
}
