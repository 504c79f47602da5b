//! Scenario configuration shared by the simulator and the analysis.
//!
//! Transmit power and noise power are never carried separately; only their
//! ratio (the receive SNR) enters any computation. Every RIS element reflects
//! with unit amplitude.

use crate::error::{Error, Result};

/// All knobs of one RIS-assisted full-duplex SSK scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// Reflecting elements per direction (half of the 2L-element surface).
    pub elements: usize,
    /// Candidate transmit antennas per user. Must be a power of two, at least 2.
    pub tx_antennas: usize,
    /// SIC capability level kappa in [0, 1].
    pub kappa: f64,
    /// Loop-interference power (linear).
    pub omega_i: f64,
    /// Receive SNR in dB.
    pub snr_db: f64,
    /// Monte Carlo channel realizations per SNR point.
    pub trials: u64,
    /// Root RNG seed.
    pub seed: u64,
    /// Gauss-Chebyshev node count.
    pub gcq_order: usize,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            elements: 100,
            tx_antennas: 2,
            kappa: 0.1,
            omega_i: 0.1,
            snr_db: 20.0,
            trials: 10_000_000,
            seed: 1,
            gcq_order: 5,
        }
    }
}

impl SystemParams {
    /// Checks every invariant and hands the parameters back untouched.
    pub fn validate(self) -> Result<Self> {
        if self.elements < 1 {
            return Err(Error::InvalidParams("L must be ≥ 1".into()));
        }
        if self.tx_antennas < 2 {
            return Err(Error::InvalidParams(format!(
                "n_t must be ≥ 2 (got {})",
                self.tx_antennas
            )));
        }
        if !self.tx_antennas.is_power_of_two() {
            return Err(Error::InvalidParams(format!(
                "n_t must be a power of two (got {})",
                self.tx_antennas
            )));
        }
        if !(0.0..=1.0).contains(&self.kappa) {
            return Err(Error::InvalidParams(format!(
                "kappa must lie in [0, 1] (got {})",
                self.kappa
            )));
        }
        if !(self.omega_i >= 0.0 && self.omega_i.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "omega_i must be a finite value ≥ 0 (got {})",
                self.omega_i
            )));
        }
        if !self.snr_db.is_finite() {
            return Err(Error::InvalidParams(format!(
                "snr_db must be finite (got {})",
                self.snr_db
            )));
        }
        if self.trials < 1 {
            return Err(Error::InvalidParams("trials must be ≥ 1".into()));
        }
        if self.gcq_order < 1 {
            return Err(Error::InvalidParams("gcq_order must be ≥ 1".into()));
        }
        Ok(self)
    }

    /// Linear receive SNR, 10^(snr_db/10).
    pub fn rho_linear(&self) -> f64 {
        db_to_linear(self.snr_db)
    }

    /// Bits carried per channel use, log2(n_t).
    pub fn bits_per_symbol(&self) -> u32 {
        self.tx_antennas.trailing_zeros()
    }

    pub fn with_snr_db(&self, snr_db: f64) -> Self {
        Self {
            snr_db,
            ..self.clone()
        }
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fig_params() -> SystemParams {
        SystemParams {
            elements: 100,
            tx_antennas: 2,
            kappa: 0.1,
            omega_i: 0.1,
            snr_db: 20.0,
            ..SystemParams::default()
        }
    }

    #[test]
    fn accepts_figure_settings() {
        let p = fig_params();
        assert_eq!(p.clone().validate().unwrap(), p);
    }

    #[test]
    fn rejects_zero_elements() {
        let err = SystemParams {
            elements: 0,
            ..fig_params()
        }
        .validate()
        .unwrap_err();
        assert!(err.to_string().contains("L must be ≥ 1"), "{err}");
    }

    #[test]
    fn rejects_non_power_of_two_antennas() {
        let err = SystemParams {
            tx_antennas: 3,
            ..fig_params()
        }
        .validate()
        .unwrap_err();
        assert!(err.to_string().contains("n_t must be a power of two"), "{err}");
    }

    #[test]
    fn rejects_out_of_range_knobs() {
        for p in [
            SystemParams { tx_antennas: 1, ..fig_params() },
            SystemParams { kappa: 1.5, ..fig_params() },
            SystemParams { kappa: -0.1, ..fig_params() },
            SystemParams { omega_i: -1.0, ..fig_params() },
            SystemParams { omega_i: f64::NAN, ..fig_params() },
            SystemParams { snr_db: f64::INFINITY, ..fig_params() },
            SystemParams { trials: 0, ..fig_params() },
            SystemParams { gcq_order: 0, ..fig_params() },
        ] {
            assert!(p.clone().validate().is_err(), "{p:?}");
        }
    }

    #[test]
    fn rho_from_db() {
        for (db, lin) in [(0.0, 1.0), (10.0, 10.0), (20.0, 100.0)] {
            let p = fig_params().with_snr_db(db);
            assert!((p.rho_linear() - lin).abs() < 1e-12 * lin);
        }
    }

    #[test]
    fn bits_per_symbol_is_log2() {
        for (nt, bits) in [(2, 1), (4, 2), (8, 3), (64, 6)] {
            let p = SystemParams { tx_antennas: nt, ..fig_params() };
            assert_eq!(p.bits_per_symbol(), bits);
        }
    }

    proptest! {
        #[test]
        fn rho_strictly_increasing(a in -100.0f64..100.0, d in 1e-6f64..50.0) {
            let p = fig_params();
            prop_assert!(p.with_snr_db(a).rho_linear() < p.with_snr_db(a + d).rho_linear());
            prop_assert!(p.with_snr_db(a).rho_linear() > 0.0);
        }

        #[test]
        fn validate_is_idempotent(
            l in 0usize..300,
            nt in 0usize..20,
            kappa in -0.5f64..1.5,
            omega in -0.5f64..2.0,
        ) {
            let p = SystemParams { elements: l, tx_antennas: nt, kappa, omega_i: omega, ..fig_params() };
            match p.clone().validate() {
                Ok(v) => prop_assert_eq!(v.clone().validate().unwrap(), v),
                Err(e) => prop_assert_eq!(p.validate().unwrap_err(), e),
            }
        }
    }
}
