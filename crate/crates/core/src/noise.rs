//! Stochastic imperfections, sampled per trial: thermal initial motion,
//! quasi-static dephasing of the atomic and comb-driven superpositions,
//! preparation and leakage errors, and fluorescence-detection parameters.

use crate::hilbert::{BasisLabel, MolLevel, StateVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

/// Tunable imperfections. All fields are optional in the config file and
/// default to the values in `Default`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseConfig {
    /// Mean thermal occupation of the shared motional mode after cooling.
    pub nbar_m: f64,
    /// Ramsey coherence time of the atomic qubit, microseconds.
    pub atom_coherence_time_us: f64,
    /// Coherence time of the comb-driven rotational superposition, microseconds.
    pub comb_coherence_time_us: f64,
    /// Probability the initial molecular state is not |-3/2>.
    pub prep_error: f64,
    /// Probability per molecular pulse of leaving the qubit manifold.
    pub leak_per_pulse: f64,
    /// Background per-trial leakage probability (collisions, blackbody).
    pub leak_per_trial: f64,
    /// Mean photon counts in a detection window for a bright (S) atom.
    pub detect_bright_mean: f64,
    /// Mean photon counts for a dark (D) atom.
    pub detect_dark_mean: f64,
    /// Counts at or above this threshold report S.
    pub detect_threshold: u32,
    /// Master seed; every trial derives its own stream from it.
    pub rng_seed: u64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            nbar_m: 0.05,
            atom_coherence_time_us: 1000.0,
            comb_coherence_time_us: 3000.0,
            prep_error: 0.0,
            leak_per_pulse: 0.0,
            leak_per_trial: 0.0,
            detect_bright_mean: 20.0,
            detect_dark_mean: 0.4,
            detect_threshold: 6,
            rng_seed: 0,
        }
    }
}

impl NoiseConfig {
    /// No imperfections at all: ground-state motion, infinite coherence, and
    /// a detection model whose misclassification probability underflows to
    /// zero (bright mean 10^4 against a dark mean of exactly 0).
    pub fn ideal() -> Self {
        NoiseConfig {
            nbar_m: 0.0,
            atom_coherence_time_us: f64::INFINITY,
            comb_coherence_time_us: f64::INFINITY,
            prep_error: 0.0,
            leak_per_pulse: 0.0,
            leak_per_trial: 0.0,
            detect_bright_mean: 1.0e4,
            detect_dark_mean: 0.0,
            detect_threshold: 6,
            rng_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), NoiseError> {
        let probs = [
            ("prep_error", self.prep_error),
            ("leak_per_pulse", self.leak_per_pulse),
            ("leak_per_trial", self.leak_per_trial),
        ];
        for (name, p) in probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(NoiseError::Probability { field: name, value: p });
            }
        }
        if !(self.nbar_m >= 0.0) || !self.nbar_m.is_finite() {
            return Err(NoiseError::NonNegative { field: "nbar_m", value: self.nbar_m });
        }
        for (name, t) in [
            ("atom_coherence_time_us", self.atom_coherence_time_us),
            ("comb_coherence_time_us", self.comb_coherence_time_us),
        ] {
            if !(t > 0.0) {
                return Err(NoiseError::CoherenceTime { field: name, value: t });
            }
        }
        for (name, m) in [
            ("detect_bright_mean", self.detect_bright_mean),
            ("detect_dark_mean", self.detect_dark_mean),
        ] {
            if !(m >= 0.0) || !m.is_finite() {
                return Err(NoiseError::NonNegative { field: name, value: m });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum NoiseError {
    #[error("{field} must be a probability in [0,1], got {value}")]
    Probability { field: &'static str, value: f64 },
    #[error("{field} must be positive, got {value}")]
    CoherenceTime { field: &'static str, value: f64 },
    #[error("{field} must be finite and non-negative, got {value}")]
    NonNegative { field: &'static str, value: f64 },
}

/// The noise realization of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialNoise {
    pub initial_n: usize,
    pub atom_phase_error: f64,
    pub comb_phase_error: f64,
    /// Pulse indices at which a leak fired.
    pub leak_events: Vec<usize>,
}

impl TrialNoise {
    /// Sample the per-trial realization. The window arguments are the
    /// elapsed times over which each superposition dephases (zero when the
    /// protocol never opens that superposition).
    pub fn sample<R: Rng + ?Sized>(
        cfg: &NoiseConfig,
        n_max: usize,
        atom_window_us: f64,
        comb_window_us: f64,
        rng: &mut R,
    ) -> Self {
        TrialNoise {
            initial_n: sample_initial_motion(cfg, n_max, rng),
            atom_phase_error: sample_phase_error(cfg.atom_coherence_time_us, atom_window_us, rng),
            comb_phase_error: sample_phase_error(cfg.comb_coherence_time_us, comb_window_us, rng),
            leak_events: Vec::new(),
        }
    }
}

/// Thermal occupation probabilities p(n) = nbar^n/(nbar+1)^(n+1), truncated
/// at n_max and renormalized.
pub fn thermal_pmf(nbar: f64, n_max: usize) -> Vec<f64> {
    assert!(nbar >= 0.0 && n_max > 0);
    if nbar == 0.0 {
        let mut p = vec![0.0; n_max];
        p[0] = 1.0;
        return p;
    }
    let r = nbar / (nbar + 1.0);
    let mut p: Vec<f64> = (0..n_max).map(|n| r.powi(n as i32)).collect();
    let total: f64 = p.iter().sum();
    for v in &mut p {
        *v /= total;
    }
    p
}

/// Draw an initial Fock number from the truncated thermal distribution.
pub fn sample_initial_motion<R: Rng + ?Sized>(
    cfg: &NoiseConfig,
    n_max: usize,
    rng: &mut R,
) -> usize {
    let pmf = thermal_pmf(cfg.nbar_m, n_max);
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (n, p) in pmf.iter().enumerate() {
        acc += p;
        if u < acc {
            return n;
        }
    }
    n_max - 1
}

/// Quasi-static phase kick accumulated over `elapsed_us`: Gaussian with
/// sigma = sqrt(2 * elapsed / T2), so that E[cos(phase)] = exp(-elapsed/T2).
pub fn sample_phase_error<R: Rng + ?Sized>(
    coherence_time_us: f64,
    elapsed_us: f64,
    rng: &mut R,
) -> f64 {
    assert!(coherence_time_us > 0.0 && elapsed_us >= 0.0);
    let sigma = (2.0 * elapsed_us / coherence_time_us).sqrt();
    if sigma == 0.0 {
        return 0.0;
    }
    Normal::new(0.0, sigma).expect("sigma is finite and non-negative").sample(rng)
}

/// Multiply every amplitude whose label matches the predicate by e^{i phase}.
/// Norm is preserved exactly; populations are untouched.
pub fn apply_dephasing<F>(state: &StateVector, branch: F, phase: f64) -> StateVector
where
    F: Fn(&BasisLabel) -> bool,
{
    let mut out = state.clone();
    let factor = Complex64::from_polar(1.0, phase);
    for idx in 0..out.dim() {
        let label = out.label_of(idx);
        if branch(&label) {
            out.amps_mut()[idx] *= factor;
        }
    }
    out
}

/// A leak ejects the molecule from the qubit manifold: the environment
/// effectively measures which molecular level scattered, so the state
/// collapses onto one molecular branch (Born-weighted) and is flagged
/// leaked. Subsequent pulses no longer address it.
pub fn leak_collapse<R: Rng + ?Sized>(state: &mut StateVector, rng: &mut R) {
    if state.is_leaked() {
        return;
    }
    let weights: Vec<(MolLevel, f64)> = crate::hilbert::COHERENT_MOL_LEVELS
        .iter()
        .map(|&m| (m, state.population(|l| l.mol == m)))
        .collect();
    let total: f64 = weights.iter().map(|(_, w)| w).sum();
    let mut u: f64 = rng.random::<f64>() * total;
    let mut chosen = weights[weights.len() - 1].0;
    for &(m, w) in &weights {
        if u < w {
            chosen = m;
            break;
        }
        u -= w;
    }
    state
        .project(|l| l.mol == chosen)
        .expect("chosen branch has nonzero population");
    state.mark_leaked();
}

/// Bernoulli draw for a leak channel.
pub fn leak_fires<R: Rng + ?Sized>(probability: f64, rng: &mut R) -> bool {
    probability > 0.0 && rng.random::<f64>() < probability
}

/// Independent random-number streams, one per (domain, index), all derived
/// from the master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RngDomain {
    /// Heralded-preparation attempts of one block.
    Herald(u64),
    /// Everything inside one trial.
    Trial(u64),
    /// Post-trial manifold verification of one trial.
    Verify(u64),
    /// Bootstrap resampling.
    Bootstrap(u64),
}

impl RngDomain {
    fn parts(self) -> (u64, u64) {
        match self {
            RngDomain::Herald(i) => (1, i),
            RngDomain::Trial(i) => (2, i),
            RngDomain::Verify(i) => (3, i),
            RngDomain::Bootstrap(i) => (4, i),
        }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Splitting rule: a splitmix64 walk seeded from the master seed absorbs the
/// domain tag and index, then expands to the 32-byte ChaCha8 key. Trials are
/// therefore order-independent and parallelizable with reproducible output.
pub fn rng_for(seed: u64, domain: RngDomain) -> ChaCha8Rng {
    let (tag, index) = domain.parts();
    let mut state = seed;
    let _ = splitmix64(&mut state);
    state ^= tag;
    let _ = splitmix64(&mut state);
    state ^= index;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}
