//! Fading channels, interference terms and RIS phase alignment for one slot.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::params::SystemParams;

/// 1 − π²/16: variance of a unit-power Rayleigh magnitude product around its
/// mean, the per-element residual-SI power before scaling by κ².
pub const SI_POWER_FACTOR: f64 = 1.0 - PI * PI / 16.0;

/// Per-element residual self-interference variance κ²(1 − π²/16).
pub fn si_element_variance(kappa: f64) -> f64 {
    kappa * kappa * SI_POWER_FACTOR
}

/// Zero-mean circularly-symmetric complex Gaussian with the given variance.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let scale = (0.5 * variance).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * scale, im * scale)
}

/// One draw of every random quantity in a transmission slot.
///
/// `h` is stored row-major, `L` rows of `n_t` entries. The RIS reflection is
/// kept as unit rotors e^{jφ_l}; [`ChannelRealization::phases`] recovers the
/// angles.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    elements: usize,
    tx_antennas: usize,
    h: Vec<Complex64>,
    g: Vec<Complex64>,
    h_i: Complex64,
    f: Vec<Complex64>,
    noise: Complex64,
    reflection: Vec<Complex64>,
    aligned_to: Option<usize>,
}

impl ChannelRealization {
    /// Builds a realization from explicit values, phases unset.
    ///
    /// `h` is row-major with `g.len()` rows. Panics if the shapes disagree.
    pub fn from_parts(
        tx_antennas: usize,
        h: Vec<Complex64>,
        g: Vec<Complex64>,
        h_i: Complex64,
        f: Vec<Complex64>,
        noise: Complex64,
    ) -> Self {
        let elements = g.len();
        assert_eq!(h.len(), elements * tx_antennas, "h must be L x n_t");
        assert_eq!(f.len(), elements, "f must have L entries");
        Self {
            elements,
            tx_antennas,
            h,
            g,
            h_i,
            f,
            noise,
            reflection: vec![Complex64::new(1.0, 0.0); elements],
            aligned_to: None,
        }
    }

    /// All-zero realization shaped for `params`.
    pub fn zeroed(params: &SystemParams) -> Self {
        Self::from_parts(
            params.tx_antennas,
            vec![Complex64::default(); params.elements * params.tx_antennas],
            vec![Complex64::default(); params.elements],
            Complex64::default(),
            vec![Complex64::default(); params.elements],
            Complex64::default(),
        )
    }

    /// Draws all links for `params`; phases are left unset.
    pub fn draw<R: Rng + ?Sized>(params: &SystemParams, rng: &mut R) -> Self {
        let mut ch = Self::zeroed(params);
        ch.redraw(params, rng);
        ch
    }

    /// Redraws in place, reusing the buffers. Shapes must match `params`.
    ///
    /// Draw order: h (row-major), g, f, h_I, noise. Zero-variance terms are
    /// set to exactly zero without consuming randomness.
    pub fn redraw<R: Rng + ?Sized>(&mut self, params: &SystemParams, rng: &mut R) {
        debug_assert_eq!(self.elements, params.elements);
        debug_assert_eq!(self.tx_antennas, params.tx_antennas);
        for v in self.h.iter_mut().chain(self.g.iter_mut()) {
            *v = complex_gaussian(rng, 1.0);
        }
        let si_var = si_element_variance(params.kappa);
        for v in self.f.iter_mut() {
            *v = if si_var > 0.0 {
                complex_gaussian(rng, si_var)
            } else {
                Complex64::default()
            };
        }
        self.h_i = if params.omega_i > 0.0 {
            complex_gaussian(rng, params.omega_i)
        } else {
            Complex64::default()
        };
        self.noise = complex_gaussian(rng, 1.0 / params.rho_linear());
        self.aligned_to = None;
    }

    pub fn elements(&self) -> usize {
        self.elements
    }

    pub fn tx_antennas(&self) -> usize {
        self.tx_antennas
    }

    /// Link from transmit antenna `antenna` to RIS element `element`.
    pub fn h(&self, element: usize, antenna: usize) -> Complex64 {
        self.h[element * self.tx_antennas + antenna]
    }

    pub fn g(&self) -> &[Complex64] {
        &self.g
    }

    pub fn h_i(&self) -> Complex64 {
        self.h_i
    }

    pub fn f(&self) -> &[Complex64] {
        &self.f
    }

    pub fn noise(&self) -> Complex64 {
        self.noise
    }

    /// Σ_l f_l, the aggregate residual self-interference.
    pub fn si_sum(&self) -> Complex64 {
        self.f.iter().sum()
    }

    /// Antenna the phases are currently aligned to.
    pub fn aligned_to(&self) -> Option<usize> {
        self.aligned_to
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index < self.tx_antennas {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index,
                antennas: self.tx_antennas,
            })
        }
    }

    /// Sets φ_l = θ_{l,k} + ψ_l so the cascade through every element arrives
    /// co-phased for antenna `active`.
    pub fn align_phases(&mut self, active: usize) -> Result<()> {
        self.check_index(active)?;
        for (l, rot) in self.reflection.iter_mut().enumerate() {
            let cascade = self.h[l * self.tx_antennas + active] * self.g[l];
            let mag = cascade.norm();
            // e^{jφ} = conj(h g) / |h g|
            *rot = if mag > 0.0 {
                cascade.conj() / mag
            } else {
                Complex64::new(1.0, 0.0)
            };
        }
        self.aligned_to = Some(active);
        Ok(())
    }

    /// RIS phases φ_l in [0, 2π), once aligned.
    pub fn phases(&self) -> Option<Vec<f64>> {
        self.aligned_to?;
        Some(
            self.reflection
                .iter()
                .map(|r| r.arg().rem_euclid(TAU))
                .collect(),
        )
    }

    /// Σ_l g_l e^{jφ_l} h_{l,candidate} under the current phases.
    pub fn composite_gain(&self, candidate: usize) -> Result<Complex64> {
        self.check_index(candidate)?;
        if self.aligned_to.is_none() {
            return Err(Error::PhasesNotAligned);
        }
        Ok(self.composite_gain_unchecked(candidate))
    }

    pub(crate) fn composite_gain_unchecked(&self, candidate: usize) -> Complex64 {
        let n = self.tx_antennas;
        self.g
            .iter()
            .zip(&self.reflection)
            .enumerate()
            .map(|(l, (g, rot))| g * rot * self.h[l * n + candidate])
            .sum()
    }

    /// Σ_l α_{l,k} β_l, the magnitude sum the alignment achieves for antenna k.
    pub fn magnitude_sum(&self, antenna: usize) -> f64 {
        let n = self.tx_antennas;
        self.g
            .iter()
            .enumerate()
            .map(|(l, g)| g.norm() * self.h[l * n + antenna].norm())
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::sim_stream;
    use approx::assert_relative_eq;

    fn params(l: usize, nt: usize, kappa: f64, omega: f64, snr_db: f64) -> SystemParams {
        SystemParams {
            elements: l,
            tx_antennas: nt,
            kappa,
            omega_i: omega,
            snr_db,
            ..SystemParams::default()
        }
    }

    #[test]
    fn single_element_alignment() {
        let h = Complex64::from_polar(1.0, -PI / 3.0);
        let g = Complex64::from_polar(1.0, -PI / 6.0);
        let mut ch = ChannelRealization::from_parts(
            2,
            vec![h, Complex64::new(0.0, 1.0)],
            vec![g],
            Complex64::default(),
            vec![Complex64::default()],
            Complex64::default(),
        );
        ch.align_phases(0).unwrap();
        assert_relative_eq!(ch.phases().unwrap()[0], PI / 2.0, epsilon = 1e-12);
        let gain = ch.composite_gain(0).unwrap();
        assert_relative_eq!(gain.re, 1.0, epsilon = 1e-12);
        assert!(gain.im.abs() < 1e-15);
    }

    #[test]
    fn single_element_other_candidate_is_phase_difference() {
        // α = β = 1, θ_0 = 0.4, θ_1 = 1.7: gain at antenna 1 is e^{j(θ_0 − θ_1)}
        let (t0, t1) = (0.4, 1.7);
        let mut ch = ChannelRealization::from_parts(
            2,
            vec![Complex64::from_polar(1.0, -t0), Complex64::from_polar(1.0, -t1)],
            vec![Complex64::from_polar(1.0, -0.9)],
            Complex64::default(),
            vec![Complex64::default()],
            Complex64::default(),
        );
        ch.align_phases(0).unwrap();
        let gain = ch.composite_gain(1).unwrap();
        let expect = Complex64::from_polar(1.0, t0 - t1);
        assert_relative_eq!(gain.re, expect.re, epsilon = 1e-12);
        assert_relative_eq!(gain.im, expect.im, epsilon = 1e-12);
    }

    #[test]
    fn aligned_gain_is_real_magnitude_sum() {
        let p = params(64, 4, 0.1, 0.1, 10.0);
        let mut rng = sim_stream(11, 0, 0);
        for _ in 0..50 {
            let mut ch = ChannelRealization::draw(&p, &mut rng);
            for k in 0..4 {
                ch.align_phases(k).unwrap();
                let gain = ch.composite_gain(k).unwrap();
                let sum = ch.magnitude_sum(k);
                assert!(gain.im.abs() <= 1e-12 * sum);
                assert_relative_eq!(gain.re, sum, max_relative = 1e-12);
                let phases = ch.phases().unwrap();
                assert!(phases.iter().all(|p| (0.0..TAU).contains(p)));
                // non-active candidates follow Σ α_{l,k'} β_l e^{j(θ_{l,k} − θ_{l,k'})}
                let other = (k + 1) % 4;
                let expect: Complex64 = (0..64)
                    .map(|l| {
                        let theta_k = -ch.h(l, k).arg();
                        let theta_o = -ch.h(l, other).arg();
                        ch.g()[l].norm()
                            * ch.h(l, other).norm()
                            * Complex64::from_polar(1.0, theta_k - theta_o)
                    })
                    .sum();
                let got = ch.composite_gain(other).unwrap();
                assert!((got - expect).norm() < 1e-10 * sum);
            }
        }
    }

    #[test]
    fn index_errors() {
        let p = params(4, 2, 0.0, 0.0, 10.0);
        let mut ch = ChannelRealization::draw(&p, &mut sim_stream(1, 0, 0));
        assert_eq!(ch.composite_gain(0), Err(Error::PhasesNotAligned));
        assert_eq!(
            ch.align_phases(2),
            Err(Error::IndexOutOfRange { index: 2, antennas: 2 })
        );
        ch.align_phases(1).unwrap();
        assert!(ch.composite_gain(5).is_err());
    }

    #[test]
    fn zero_kappa_means_zero_si() {
        let p = params(32, 2, 0.0, 0.0, 0.0);
        let ch = ChannelRealization::draw(&p, &mut sim_stream(5, 0, 0));
        assert!(ch.f().iter().all(|v| *v == Complex64::default()));
        assert_eq!(ch.h_i(), Complex64::default());
    }

    #[test]
    fn draws_are_deterministic() {
        let p = params(16, 4, 0.2, 0.3, 5.0);
        let a = ChannelRealization::draw(&p, &mut sim_stream(9, 3, 4));
        let b = ChannelRealization::draw(&p, &mut sim_stream(9, 3, 4));
        let c = ChannelRealization::draw(&p, &mut sim_stream(9, 3, 5));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn global_phase_rotation_is_absorbed() {
        let p = params(16, 2, 0.0, 0.0, 10.0);
        let mut ch = ChannelRealization::draw(&p, &mut sim_stream(2, 0, 0));
        ch.align_phases(0).unwrap();
        let before = ch.composite_gain(0).unwrap();
        let rot = Complex64::from_polar(1.0, 1.234);
        let h: Vec<Complex64> = (0..16)
            .flat_map(|l| [ch.h(l, 0) * rot, ch.h(l, 1)])
            .collect();
        let mut rotated = ChannelRealization::from_parts(
            2,
            h,
            ch.g().to_vec(),
            ch.h_i(),
            ch.f().to_vec(),
            ch.noise(),
        );
        rotated.align_phases(0).unwrap();
        let after = rotated.composite_gain(0).unwrap();
        assert_relative_eq!(before.re, after.re, max_relative = 1e-12);
        assert!(after.im.abs() < 1e-12 * after.re);
    }

    // Statistical checks at 10⁶ draws.

    #[test]
    fn rayleigh_magnitude_moments() {
        let p = params(1, 2, 0.0, 0.0, 0.0);
        let mut rng = sim_stream(21, 0, 0);
        let n = 1_000_000;
        let mut ch = ChannelRealization::draw(&p, &mut rng);
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            ch.redraw(&p, &mut rng);
            let a = ch.h(0, 0).norm();
            s += a;
            s2 += a * a;
        }
        let mean = s / n as f64;
        let var = s2 / n as f64 - mean * mean;
        assert_relative_eq!(mean, PI.sqrt() / 2.0, max_relative = 3e-3);
        assert_relative_eq!(var, (4.0 - PI) / 4.0, max_relative = 1e-2);
    }

    #[test]
    fn aggregate_si_power() {
        let (l, kappa) = (8, 0.5);
        let p = params(l, 2, kappa, 0.0, 0.0);
        let mut rng = sim_stream(22, 0, 0);
        let n = 1_000_000;
        let mut ch = ChannelRealization::draw(&p, &mut rng);
        let mut acc = 0.0;
        for _ in 0..n {
            ch.redraw(&p, &mut rng);
            acc += ch.si_sum().norm_sqr();
        }
        let expect = kappa * kappa * l as f64 * SI_POWER_FACTOR;
        assert_relative_eq!(acc / n as f64, expect, max_relative = 1e-2);
    }

    #[test]
    fn aligned_gain_mean_at_l100() {
        let p = params(100, 2, 0.0, 0.0, 0.0);
        let mut rng = sim_stream(23, 0, 0);
        let n = 20_000;
        let mut ch = ChannelRealization::draw(&p, &mut rng);
        let mut acc = 0.0;
        for _ in 0..n {
            ch.redraw(&p, &mut rng);
            ch.align_phases(0).unwrap();
            acc += ch.composite_gain(0).unwrap().re;
        }
        // standard error ≈ 0.083 here, well inside the 1% band
        assert_relative_eq!(acc / n as f64, 100.0 * PI / 4.0, max_relative = 1e-2);
    }
}
