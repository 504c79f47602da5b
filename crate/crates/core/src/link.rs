//! Received-sample synthesis and ML detection of the active antenna.

use num_complex::Complex64;
use rand::Rng;

use crate::channel::ChannelRealization;
use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Outcome of one transmission slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotResult {
    pub tx_index: usize,
    pub rx_index: usize,
    pub bit_errors: u32,
}

/// Hamming distance between the natural-binary labels of two antenna indices.
pub fn label_distance(a: usize, b: usize) -> u32 {
    (a ^ b).count_ones()
}

/// y = Σ_l g_l e^{jφ_l} h_{l,tx} + h_I + Σ_l f_l + w/√P_s.
///
/// The phases must already be aligned to `tx_index`.
pub fn synthesize_rx(ch: &ChannelRealization, tx_index: usize) -> Result<Complex64> {
    if ch.aligned_to() != Some(tx_index) {
        return Err(Error::PhasesNotAligned);
    }
    Ok(ch.composite_gain(tx_index)? + ch.h_i() + ch.si_sum() + ch.noise())
}

/// Index of the smallest metric; ties go to the lowest index.
pub fn argmin_metric(metrics: &[f64]) -> usize {
    let mut best = 0;
    for (k, m) in metrics.iter().enumerate().skip(1) {
        if *m < metrics[best] {
            best = k;
        }
    }
    best
}

/// ML decision argmin_k |y − G_k|² over every candidate antenna.
pub fn ml_detect(y: Complex64, ch: &ChannelRealization) -> Result<usize> {
    if ch.aligned_to().is_none() {
        return Err(Error::PhasesNotAligned);
    }
    let mut best = 0;
    let mut best_metric = f64::INFINITY;
    for k in 0..ch.tx_antennas() {
        let m = (y - ch.composite_gain_unchecked(k)).norm_sqr();
        if m < best_metric {
            best_metric = m;
            best = k;
        }
    }
    Ok(best)
}

/// Reusable slot pipeline: draw, align, synthesize, detect.
#[derive(Debug, Clone)]
pub struct SlotRunner {
    params: SystemParams,
    channel: ChannelRealization,
}

impl SlotRunner {
    /// `params` must already be validated.
    pub fn new(params: &SystemParams) -> Self {
        Self {
            params: params.clone(),
            channel: ChannelRealization::zeroed(params),
        }
    }

    pub fn channel(&self) -> &ChannelRealization {
        &self.channel
    }

    pub fn run<R: Rng + ?Sized>(&mut self, rng: &mut R, tx_index: usize) -> Result<SlotResult> {
        self.channel.redraw(&self.params, rng);
        self.channel.align_phases(tx_index)?;
        let y = synthesize_rx(&self.channel, tx_index)?;
        let rx_index = ml_detect(y, &self.channel)?;
        Ok(SlotResult {
            tx_index,
            rx_index,
            bit_errors: label_distance(tx_index, rx_index),
        })
    }
}

/// One full slot with a fresh channel draw from `rng`.
pub fn run_slot<R: Rng + ?Sized>(
    params: &SystemParams,
    rng: &mut R,
    tx_index: usize,
) -> Result<SlotResult> {
    let params = params.clone().validate()?;
    let mut ch = ChannelRealization::draw(&params, rng);
    ch.align_phases(tx_index)?;
    let y = synthesize_rx(&ch, tx_index)?;
    let rx_index = ml_detect(y, &ch)?;
    Ok(SlotResult {
        tx_index,
        rx_index,
        bit_errors: label_distance(tx_index, rx_index),
    })
}
