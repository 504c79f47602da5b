//! Monte Carlo BER estimation over SNR sweeps.
//!
//! Trials are cut into fixed-size chunks. Chunk `c` of sweep point `p` always
//! draws from the counter-derived stream `(seed, p, c)` and chunk error counts
//! are summed as integers, so results do not depend on scheduling or on the
//! number of worker threads.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::link::SlotRunner;
use crate::params::SystemParams;
use crate::rng::sim_stream;
use crate::stats::{wilson_interval, Z_95};

/// Trials per RNG chunk.
pub const CHUNK_TRIALS: u64 = 4096;

/// Empirical BER at one SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub snr_db: f64,
    pub ber: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
    pub bit_errors_total: u64,
    pub bits_total: u64,
}

impl SweepPoint {
    fn from_counts(snr_db: f64, trials: u64, bits_per_trial: u64, bit_errors: u64) -> Self {
        let bits_total = trials * bits_per_trial;
        let (ci_low, ci_high) = wilson_interval(bit_errors, bits_total, Z_95);
        Self {
            snr_db,
            ber: bit_errors as f64 / bits_total as f64,
            ci_low,
            ci_high,
            trials,
            bit_errors_total: bit_errors,
            bits_total,
        }
    }
}

pub type SweepResult = Vec<SweepPoint>;

/// Monte Carlo driver; `workers = None` uses rayon's global pool.
#[derive(Debug, Clone, Default)]
pub struct MonteCarlo {
    pub workers: Option<usize>,
}

impl MonteCarlo {
    pub fn with_workers(workers: usize) -> Self {
        Self {
            workers: Some(workers),
        }
    }

    fn install<T: Send>(&self, job: impl FnOnce() -> T + Send) -> T {
        match self.workers {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .expect("thread pool")
                .install(job),
            None => job(),
        }
    }

    /// Bit errors over `trials` slots of sweep point `point`.
    fn count_errors(params: &SystemParams, point: u32) -> Result<u64> {
        let chunks = params.trials.div_ceil(CHUNK_TRIALS);
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = sim_stream(params.seed, point, c as u32);
                let mut runner = SlotRunner::new(params);
                let n = CHUNK_TRIALS.min(params.trials - c * CHUNK_TRIALS);
                let mut errors = 0u64;
                for _ in 0..n {
                    let tx = rng.random_range(0..params.tx_antennas);
                    errors += runner.run(&mut rng, tx)?.bit_errors as u64;
                }
                Ok(errors)
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))
    }

    fn point(params: &SystemParams, point: u32) -> Result<SweepPoint> {
        let errors = Self::count_errors(params, point)?;
        Ok(SweepPoint::from_counts(
            params.snr_db,
            params.trials,
            params.bits_per_symbol() as u64,
            errors,
        ))
    }

    /// BER at `params.snr_db`, drawn from the streams of sweep point 0.
    pub fn estimate_ber(&self, params: &SystemParams) -> Result<SweepPoint> {
        let params = params.clone().validate()?;
        self.install(|| Self::point(&params, 0))
    }

    /// One point per grid value; point `i` uses the streams of index `i`.
    pub fn run_sweep(&self, params: &SystemParams, snr_grid: &[f64]) -> Result<SweepResult> {
        if snr_grid.is_empty() {
            return Err(Error::EmptyGrid);
        }
        let points = snr_grid
            .iter()
            .map(|snr| params.with_snr_db(*snr).validate())
            .collect::<Result<Vec<_>>>()?;
        self.install(|| {
            points
                .par_iter()
                .enumerate()
                .map(|(i, p)| Self::point(p, i as u32))
                .collect()
        })
    }
}

pub fn estimate_ber(params: &SystemParams) -> Result<SweepPoint> {
    MonteCarlo::default().estimate_ber(params)
}

pub fn run_sweep(params: &SystemParams, snr_grid: &[f64]) -> Result<SweepResult> {
    MonteCarlo::default().run_sweep(params, snr_grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(l: usize, nt: usize, kappa: f64, omega: f64, trials: u64) -> SystemParams {
        SystemParams {
            elements: l,
            tx_antennas: nt,
            kappa,
            omega_i: omega,
            trials,
            seed: 42,
            ..SystemParams::default()
        }
    }

    #[test]
    fn error_free_at_high_snr() {
        let p = SystemParams {
            snr_db: 60.0,
            ..params(100, 2, 0.0, 0.0, 10_000)
        };
        let pt = estimate_ber(&p).unwrap();
        assert_eq!(pt.ber, 0.0);
        assert_eq!(pt.bit_errors_total, 0);
        assert_eq!(pt.ci_low, 0.0);
        assert!(pt.ci_high > 0.0 && pt.ci_high < 1e-3);
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(estimate_ber(&params(16, 2, 0.0, 0.0, 0)).is_err());
    }

    #[test]
    fn empty_grid_rejected() {
        assert_eq!(run_sweep(&params(16, 2, 0.0, 0.0, 10), &[]), Err(Error::EmptyGrid));
    }

    #[test]
    fn point_bookkeeping() {
        let p = params(8, 4, 0.2, 0.1, 10_001);
        for pt in run_sweep(&p, &[-10.0, 0.0]).unwrap() {
            assert_eq!(pt.bits_total, 2 * 10_001);
            assert_eq!(pt.trials, 10_001);
            assert_eq!(pt.ber, pt.bit_errors_total as f64 / pt.bits_total as f64);
            assert!(pt.ci_low <= pt.ber && pt.ber <= pt.ci_high);
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let p = params(16, 4, 0.1, 0.1, 30_000);
        let grid = [0.0, 10.0, 20.0];
        let one = MonteCarlo::with_workers(1).run_sweep(&p, &grid).unwrap();
        let eight = MonteCarlo::with_workers(8).run_sweep(&p, &grid).unwrap();
        assert_eq!(one, eight);
    }

    #[test]
    fn sweep_point_zero_is_estimate() {
        let p = params(16, 2, 0.1, 0.1, 9000);
        let sweep = run_sweep(&p, &[-5.0, 3.0]).unwrap();
        assert_eq!(estimate_ber(&p.with_snr_db(-5.0)).unwrap(), sweep[0]);
    }

    #[test]
    fn ber_falls_with_snr_without_interference() {
        for seed in [1, 2, 3] {
            let p = SystemParams {
                seed,
                ..params(16, 2, 0.0, 0.0, 20_000)
            };
            let sweep = run_sweep(&p, &[-20.0, -15.0, -10.0, -5.0]).unwrap();
            for w in sweep.windows(2) {
                assert!(w[1].ber <= w[0].ber || w[1].ci_low <= w[0].ci_high, "{sweep:?}");
            }
        }
    }

    #[test]
    fn ber_falls_with_more_elements() {
        let mut prev = f64::INFINITY;
        for l in [36, 64, 100, 196, 256] {
            let p = SystemParams {
                snr_db: -30.0,
                ..params(l, 2, 0.1, 0.1, 20_000)
            };
            let pt = estimate_ber(&p).unwrap();
            assert!(pt.ber <= prev, "L={l}: {} > {prev}", pt.ber);
            prev = pt.ber;
        }
    }
}
