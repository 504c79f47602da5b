//! Brute-force sampling of the ingredients behind the composite-statistic
//! moments: the phase-difference density, the two-antenna composite amplitude
//! and the aggregate R itself.
//!
//! Samples are split into batches, each with its own PCG stream. Batch means
//! and variances are pooled in batch order, and the spread of the batch
//! variances gives the standard error of the pooled variance.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::channel::complex_gaussian;
use crate::error::{Error, Result};
use crate::rng::{oracle_stream, OracleRng};

const BATCHES: usize = 100;
const MIN_SAMPLES: usize = 10_000;

/// Sample mean and variance with their standard errors.
///
/// For complex-valued samples `mean` is the real part of the sample mean and
/// `variance` is E|x − x̄|².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub mean: f64,
    pub variance: f64,
    pub samples: usize,
    /// Standard error of `mean`.
    pub std_error: f64,
    /// Standard error of `variance`, from the spread of batch variances.
    pub variance_std_error: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Batch {
    n: usize,
    mean: Complex64,
    var: f64,
}

impl Batch {
    fn from_samples(xs: &[Complex64]) -> Self {
        let n = xs.len();
        let mean = xs.iter().sum::<Complex64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).norm_sqr()).sum::<f64>() / n as f64;
        Self { n, mean, var }
    }
}

/// Pooled estimate plus the imaginary part of the mean.
fn pool(batches: &[Batch]) -> (OracleEstimate, f64) {
    let n: usize = batches.iter().map(|b| b.n).sum();
    let nf = n as f64;
    let mean = batches.iter().map(|b| b.mean * b.n as f64).sum::<Complex64>() / nf;
    let variance = batches
        .iter()
        .map(|b| b.n as f64 * (b.var + (b.mean - mean).norm_sqr()))
        .sum::<f64>()
        / nf;
    let k = batches.len() as f64;
    let var_mean = batches.iter().map(|b| b.var).sum::<f64>() / k;
    let var_spread = if batches.len() > 1 {
        batches.iter().map(|b| (b.var - var_mean).powi(2)).sum::<f64>() / (k - 1.0)
    } else {
        0.0
    };
    (
        OracleEstimate {
            mean: mean.re,
            variance,
            samples: n,
            std_error: (variance / nf).sqrt(),
            variance_std_error: (var_spread / k).sqrt(),
        },
        mean.im,
    )
}

fn batch_sizes(samples: usize) -> Vec<usize> {
    let batches = BATCHES.min(samples);
    let base = samples / batches;
    let extra = samples % batches;
    (0..batches).map(|b| base + usize::from(b < extra)).collect()
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidParams(format!(
            "oracles need at least {MIN_SAMPLES} samples (got {samples})"
        )));
    }
    Ok(())
}

/// Runs `draw` `samples` times over batched streams; one pooled estimate per
/// output slot.
fn sample_batched<const K: usize, F>(samples: usize, seed: u64, draw: F) -> [(OracleEstimate, f64); K]
where
    F: Fn(&mut OracleRng) -> [Complex64; K] + Sync,
{
    let per_batch: Vec<[Batch; K]> = batch_sizes(samples)
        .into_par_iter()
        .enumerate()
        .map(|(b, size)| {
            let mut rng = oracle_stream(seed, b as u64);
            let mut cols: [Vec<Complex64>; K] = std::array::from_fn(|_| Vec::with_capacity(size));
            for _ in 0..size {
                for (col, v) in cols.iter_mut().zip(draw(&mut rng)) {
                    col.push(v);
                }
            }
            std::array::from_fn(|k| Batch::from_samples(&cols[k]))
        })
        .collect();
    std::array::from_fn(|k| pool(&per_batch.iter().map(|b| b[k]).collect::<Vec<_>>()))
}

/// Triangular density of z = x − y for x, y independent uniform on [−π, π].
pub fn phase_diff_density(z: f64) -> f64 {
    if z.abs() >= TAU {
        0.0
    } else {
        (TAU - z.abs()) / (4.0 * PI * PI)
    }
}

/// CDF of the triangular phase-difference density.
pub fn phase_diff_cdf(z: f64) -> f64 {
    if z <= -TAU {
        0.0
    } else if z <= 0.0 {
        (TAU + z).powi(2) / (8.0 * PI * PI)
    } else if z < TAU {
        1.0 - (TAU - z).powi(2) / (8.0 * PI * PI)
    } else {
        1.0
    }
}

/// Equal-width histogram of z over [−2π, 2π].
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub counts: Vec<u64>,
    pub total: u64,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn bin_width(&self) -> f64 {
        2.0 * TAU / self.bins() as f64
    }

    pub fn bin_edges(&self, bin: usize) -> (f64, f64) {
        let w = self.bin_width();
        (-TAU + bin as f64 * w, -TAU + (bin + 1) as f64 * w)
    }

    /// Empirical density of a bin (count / (total · width)).
    pub fn density(&self, bin: usize) -> f64 {
        self.counts[bin] as f64 / (self.total as f64 * self.bin_width())
    }

    /// Pearson statistic against the triangular density, with its degrees of freedom.
    pub fn chi_square(&self) -> (f64, usize) {
        let n = self.total as f64;
        let stat = (0..self.bins())
            .map(|b| {
                let (lo, hi) = self.bin_edges(b);
                let expected = n * (phase_diff_cdf(hi) - phase_diff_cdf(lo));
                (self.counts[b] as f64 - expected).powi(2) / expected
            })
            .sum();
        (stat, self.bins() - 1)
    }
}

/// Result of sampling the phase difference.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDiffOracle {
    pub histogram: Histogram,
    pub cos: OracleEstimate,
    pub sin: OracleEstimate,
    pub cos_sq: OracleEstimate,
    pub sin_sq: OracleEstimate,
}

/// Samples z = x − y, x, y ~ U[−π, π], into a `bins`-bin histogram plus
/// moment estimates of cos z, sin z, cos²z and sin²z.
pub fn sample_phase_diff_density(samples: usize, bins: usize, seed: u64) -> Result<PhaseDiffOracle> {
    check_samples(samples)?;
    if bins < 2 {
        return Err(Error::InvalidParams("histogram needs at least 2 bins".into()));
    }
    let draw_z = |rng: &mut OracleRng| rng.random_range(-PI..PI) - rng.random_range(-PI..PI);
    let [cos, sin, cos_sq, sin_sq] = sample_batched(samples, seed, |rng| {
        let z = draw_z(rng);
        let (s, c) = z.sin_cos();
        [c, s, c * c, s * s].map(|v| Complex64::new(v, 0.0))
    })
    .map(|(e, _)| e);

    // the histogram replays the same streams
    let width = 2.0 * TAU / bins as f64;
    let counts = batch_sizes(samples)
        .into_par_iter()
        .enumerate()
        .map(|(b, size)| {
            let mut rng = oracle_stream(seed, b as u64);
            let mut counts = vec![0u64; bins];
            for _ in 0..size {
                let z = draw_z(&mut rng);
                let bin = (((z + TAU) / width) as usize).min(bins - 1);
                counts[bin] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; bins],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(PhaseDiffOracle {
        histogram: Histogram {
            counts,
            total: samples as u64,
        },
        cos,
        sin,
        cos_sq,
        sin_sq,
    })
}

/// α₁ − α₂ e^{jz}.
pub fn alpha_composite(alpha1: f64, alpha2: f64, z: f64) -> Complex64 {
    alpha1 - alpha2 * Complex64::from_polar(1.0, z)
}

/// Composite amplitude estimate and the imaginary part of its sample mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeOracle {
    pub estimate: OracleEstimate,
    pub mean_imag: f64,
}

/// Samples α = α₁ − α₂ e^{jz}: α₁, α₂ Rayleigh magnitudes of unit-variance
/// complex Gaussians, z the difference of their phases.
pub fn sample_alpha_composite(samples: usize, seed: u64) -> Result<CompositeOracle> {
    check_samples(samples)?;
    let [(estimate, mean_imag)] = sample_batched(samples, seed, |rng| {
        let h1 = complex_gaussian(rng, 1.0);
        let h2 = complex_gaussian(rng, 1.0);
        [alpha_composite(h1.norm(), h2.norm(), h2.arg() - h1.arg())]
    });
    Ok(CompositeOracle {
        estimate,
        mean_imag,
    })
}

/// Samples R = Σ_l β_l (α_{l,1} − α_{l,2} e^{jz_l}) directly from complex
/// Gaussian link draws, i.e. the gain difference between the aligned antenna
/// and a competitor.
pub fn sample_r_moments(elements: usize, samples: usize, seed: u64) -> Result<CompositeOracle> {
    if elements < 1 {
        return Err(Error::InvalidParams("L must be ≥ 1".into()));
    }
    check_samples(samples)?;
    let [(estimate, mean_imag)] = sample_batched(samples, seed, |rng| {
        let mut r = Complex64::default();
        for _ in 0..elements {
            let h1 = complex_gaussian(rng, 1.0);
            let h2 = complex_gaussian(rng, 1.0);
            let beta = complex_gaussian(rng, 1.0).norm();
            let a1 = h1.norm();
            // co-phasing rotor for antenna 1 applied to antenna 2's link
            let rotated = if a1 > 0.0 { h2 * h1.conj() / a1 } else { h2 };
            r += beta * (a1 - rotated);
        }
        [r]
    });
    Ok(CompositeOracle {
        estimate,
        mean_imag,
    })
}
