//! The experiment's named pulse sequences: heralded molecular preparation,
//! quantum-logic state detection, entangled-state creation for both qubits,
//! analysis pulses, and the per-trial driver that strings them together
//! with noise channels.

use crate::hilbert::{AtomLevel, MolLevel, StateVector};
use crate::measure::{detect_atom, MolOutcome, QubitKind};
use crate::noise::{
    apply_dephasing, leak_collapse, leak_fires, sample_initial_motion, sample_phase_error,
    NoiseConfig,
};
use crate::pulse::{apply_pulse, PulseError, PulseSpec, Transition};
use rand::Rng;
use std::f64::consts::PI;

/// Wall-clock pulse durations in microseconds. They parameterize dephasing
/// windows only; the unitaries are instantaneous. The atomic sideband and
/// the molecular Raman pi/2 values are measured; the rest are plausible
/// stand-ins consistent with carrier pulses being faster than sidebands.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseTimings {
    pub atom_carrier_pi2_us: f64,
    pub atom_sideband_pi_us: f64,
    pub mol_sideband_pi2_us: f64,
    pub mol_sideband_pi_us: f64,
    pub mol_carrier_pi_us: f64,
    pub mol_carrier_pi2_us: f64,
    pub comb_pi_us: f64,
    pub comb_pi2_us: f64,
}

impl Default for PulseTimings {
    fn default() -> Self {
        PulseTimings {
            atom_carrier_pi2_us: 5.0,
            atom_sideband_pi_us: 45.0,
            mol_sideband_pi2_us: 762.5,
            mol_sideband_pi_us: 925.0,
            mol_carrier_pi_us: 650.0,
            mol_carrier_pi2_us: 625.0,
            comb_pi_us: 250.0,
            comb_pi2_us: 125.0,
        }
    }
}

impl PulseTimings {
    fn atom_sb_pi(&self, phi: f64) -> PulseSpec {
        PulseSpec::new(Transition::AtomSideband, PI, phi, self.atom_sideband_pi_us)
    }

    fn atom_sb_swap_pi(&self) -> PulseSpec {
        PulseSpec::new(Transition::AtomSidebandSwapped, PI, 0.0, self.atom_sideband_pi_us)
    }

    fn mol_sb_pi(&self) -> PulseSpec {
        PulseSpec::new(Transition::MolRamanSideband, PI, 0.0, self.mol_sideband_pi_us)
    }

    fn mol_sb_swap_pi(&self) -> PulseSpec {
        PulseSpec::new(Transition::MolRamanSidebandSwapped, PI, 0.0, self.mol_sideband_pi_us)
    }

    fn mol_sb_pi2(&self) -> PulseSpec {
        PulseSpec::new(Transition::MolRamanSideband, PI / 2.0, 0.0, self.mol_sideband_pi2_us)
    }

    /// Elapsed time over which the atomic D-branch superposition dephases:
    /// from the sideband pulse that creates it (inclusive) to the atomic
    /// analysis pulse (exclusive). Identical for both qubits.
    pub fn atom_window_us(&self) -> f64 {
        self.atom_sideband_pi_us
    }

    /// Elapsed time over which the comb-driven rotational superposition
    /// dephases: from the comb creation pulse (inclusive) to the comb
    /// analysis pulse (exclusive).
    pub fn comb_window_us(&self) -> f64 {
        self.comb_pi_us
            + self.mol_carrier_pi_us
            + self.atom_sideband_pi_us
            + self.atom_carrier_pi2_us
            + self.atom_sideband_pi_us
    }
}

/// Apply one pulse, letting the per-pulse leak channel fire first on
/// molecular drives.
fn pulse_with_leak<R: Rng + ?Sized>(
    state: &StateVector,
    pulse: &PulseSpec,
    cfg: &NoiseConfig,
    rng: &mut R,
) -> Result<StateVector, PulseError> {
    let mut s = state.clone();
    if pulse.transition.is_molecular() && leak_fires(cfg.leak_per_pulse, rng) {
        leak_collapse(&mut s, rng);
    }
    apply_pulse(&s, pulse)
}

/// Re-preparation of the atom and the motion between sequence stages:
/// both are measured out (Born collapse), the atom is pumped to |D>, and
/// the motion is recooled to a fresh thermal sample. The molecule keeps its
/// amplitudes, including coherences between molecular levels.
pub fn reset_atom_motion<R: Rng + ?Sized>(
    state: &StateVector,
    cfg: &NoiseConfig,
    rng: &mut R,
) -> StateVector {
    let n_max = state.n_max();
    let mut collapsed = state.clone();

    let pick = |weights: Vec<f64>, rng: &mut R| -> usize {
        let total: f64 = weights.iter().sum();
        let mut u = rng.random::<f64>() * total;
        for (i, w) in weights.iter().enumerate() {
            if u < *w {
                return i;
            }
            u -= w;
        }
        weights.len() - 1
    };

    let n_weights: Vec<f64> = (0..n_max).map(|n| collapsed.population(|l| l.n == n)).collect();
    let n_c = pick(n_weights, rng);
    collapsed.project(|l| l.n == n_c).expect("sampled motional branch is occupied");

    let p_s = collapsed.population(|l| l.atom == AtomLevel::S);
    let a_c = if rng.random::<f64>() < p_s { AtomLevel::S } else { AtomLevel::D };
    collapsed.project(|l| l.atom == a_c).expect("sampled atomic branch is occupied");

    let n_new = sample_initial_motion(cfg, n_max, rng);
    let mut out = StateVector::basis(AtomLevel::D, MolLevel::Minus32, 0, n_max)
        .expect("canonical basis state exists");
    for amp in out.amps_mut() {
        *amp = num_complex::Complex64::ZERO;
    }
    for &mol in &crate::hilbert::COHERENT_MOL_LEVELS {
        let src = collapsed.index(a_c, mol, n_c).expect("coherent label");
        let dst = out.index(AtomLevel::D, mol, n_new).expect("coherent label");
        out.amps_mut()[dst] = collapsed.amps()[src];
    }
    if collapsed.is_leaked() {
        out.mark_leaked();
    }
    out
}

/// QLS probe for |-3/2>: reset, molecular sideband pi (|-3/2>|0> ->
/// |-5/2>|1>), atomic sideband pi (|D>|1> -> |S>|0>), fluorescence. Returns
/// true iff the reported outcome is S, which noiselessly means the molecule
/// WAS in |-3/2>; it then sits in |-5/2>|0>.
pub fn qls_detect_minus32<R: Rng + ?Sized>(
    state: &StateVector,
    cfg: &NoiseConfig,
    t: &PulseTimings,
    rng: &mut R,
) -> Result<(bool, StateVector), PulseError> {
    let mut s = reset_atom_motion(state, cfg, rng);
    s = pulse_with_leak(&s, &t.mol_sb_pi(), cfg, rng)?;
    s = apply_pulse(&s, &t.atom_sb_swap_pi())?;
    let (reported, _, collapsed) = detect_atom(&s, cfg, rng);
    Ok((reported == AtomLevel::S, collapsed))
}

/// QLS probe for |-5/2>: the mirror sequence driving the swapped molecular
/// sideband (|-5/2>|0> -> |-3/2>|1>). Returns true iff the molecule was in
/// |-5/2>; the probe itself then restores it to |-3/2>|0>.
pub fn qls_detect_minus52<R: Rng + ?Sized>(
    state: &StateVector,
    cfg: &NoiseConfig,
    t: &PulseTimings,
    rng: &mut R,
) -> Result<(bool, StateVector), PulseError> {
    let mut s = reset_atom_motion(state, cfg, rng);
    s = pulse_with_leak(&s, &t.mol_sb_swap_pi(), cfg, rng)?;
    s = apply_pulse(&s, &t.atom_sb_swap_pi())?;
    let (reported, _, collapsed) = detect_atom(&s, cfg, rng);
    Ok((reported == AtomLevel::S, collapsed))
}

/// One run of the |-5/2>-preparing sequence. From a reset motion it pumps
/// any |-3/2> population into |-5/2>|0> exactly (the molecular pulse acts
/// before anything excites the motion, so only the calibrated Fock pair is
/// driven) and leaves |-5/2> population untouched.
fn prep_minus52_stage<R: Rng + ?Sized>(
    state: &StateVector,
    cfg: &NoiseConfig,
    t: &PulseTimings,
    rng: &mut R,
) -> Result<StateVector, PulseError> {
    let (_, s) = qls_detect_minus32(state, cfg, t, rng)?;
    Ok(s)
}

/// One run of the |-3/2>-preparing sequence: reset, atomic sideband pi
/// (|D>|0> -> |S>|1>), molecular sideband pi (|-5/2>|1> -> |-3/2>|0>),
/// atomic sideband pi (|S>|1> -> |D>|0>), fluorescence. Detecting S heralds
/// the molecule in |-3/2>|0> with the atom left bright.
fn prep_minus32_stage<R: Rng + ?Sized>(
    state: &StateVector,
    cfg: &NoiseConfig,
    t: &PulseTimings,
    rng: &mut R,
) -> Result<(bool, StateVector), PulseError> {
    let mut s = reset_atom_motion(state, cfg, rng);
    s = apply_pulse(&s, &t.atom_sb_pi(0.0))?;
    s = pulse_with_leak(&s, &t.mol_sb_pi(), cfg, rng)?;
    s = apply_pulse(&s, &t.atom_sb_pi(0.0))?;
    let (reported, _, collapsed) = detect_atom(&s, cfg, rng);
    Ok((reported == AtomLevel::S, collapsed))
}

/// Classical prior over the molecular state entering a preparation block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MolPrior {
    pub p_minus32: f64,
    pub p_minus52: f64,
    pub p_leaked: f64,
}

impl Default for MolPrior {
    fn default() -> Self {
        MolPrior { p_minus32: 1.0, p_minus52: 0.0, p_leaked: 0.0 }
    }
}

impl MolPrior {
    pub fn validate(&self) -> Result<(), String> {
        for (name, p) in [
            ("prior_minus32", self.p_minus32),
            ("prior_minus52", self.p_minus52),
            ("prior_leaked", self.p_leaked),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(format!("{name} must be in [0,1], got {p}"));
            }
        }
        let total = self.p_minus32 + self.p_minus52 + self.p_leaked;
        if (total - 1.0).abs() > 1e-9 {
            return Err(format!("prior probabilities must sum to 1, got {total}"));
        }
        Ok(())
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (MolLevel, bool) {
        let u: f64 = rng.random();
        if u < self.p_minus32 {
            (MolLevel::Minus32, false)
        } else if u < self.p_minus32 + self.p_minus52 {
            (MolLevel::Minus52, false)
        } else {
            // Leaked enters as a flagged state; the label slot is arbitrary.
            (MolLevel::Minus32, true)
        }
    }
}

/// Heralded-preparation knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeraldSpec {
    /// Cap on preparation attempt-pairs before aborting the block.
    pub max_attempt_pairs: u32,
    /// Number of consecutive successful attempt-pairs required.
    pub confidence: u32,
    pub prior: MolPrior,
}

impl Default for HeraldSpec {
    fn default() -> Self {
        HeraldSpec { max_attempt_pairs: 100, confidence: 1, prior: MolPrior::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeraldOutcome {
    pub success: bool,
    /// Attempt-pairs consumed (equals max_attempt_pairs on abort).
    pub attempt_pairs: u32,
    pub state: StateVector,
}

/// Heralded preparation of |-3/2>. Each attempt-pair alternates the
/// |-5/2>-preparing sequence with the |-3/2>-preparing sequence; running
/// them in this order makes the S herald of the second stage sound, because
/// the first stage has already pumped any |-3/2> population (whose motional
/// excitation would otherwise drive the miscalibrated |-3/2>|1> <->
/// |-5/2>|2> pair) into |-5/2>|0>. Success requires `confidence`
/// consecutive heralds; the post-success state is |S>|-3/2>|0> exactly in
/// the noiseless model.
pub fn herald_prepare<R: Rng + ?Sized>(
    spec: &HeraldSpec,
    cfg: &NoiseConfig,
    t: &PulseTimings,
    n_max: usize,
    rng: &mut R,
) -> Result<HeraldOutcome, PulseError> {
    let (mol0, leaked) = spec.prior.sample(rng);
    let n0 = sample_initial_motion(cfg, n_max, rng);
    let mut state = StateVector::basis(AtomLevel::D, mol0, n0, n_max)
        .expect("validated n_max");
    if leaked {
        state.mark_leaked();
    }

    let mut streak = 0u32;
    for pair in 1..=spec.max_attempt_pairs {
        state = prep_minus52_stage(&state, cfg, t, rng)?;
        let (heralded, next) = prep_minus32_stage(&state, cfg, t, rng)?;
        state = next;
        if heralded {
            streak += 1;
            if streak >= spec.confidence {
                return Ok(HeraldOutcome { success: true, attempt_pairs: pair, state });
            }
        } else {
            streak = 0;
        }
    }
    Ok(HeraldOutcome { success: false, attempt_pairs: spec.max_attempt_pairs, state })
}

/// Creation pulses: Psi_0 -> Psi_I (molecular Raman sideband pi/2).
pub fn psi_i_pulse(t: &PulseTimings) -> PulseSpec {
    t.mol_sb_pi2()
}

/// Psi_0 -> Psi_I with the per-pulse leak channel armed.
pub fn create_psi_i<R: Rng + ?Sized>(
    state: &StateVector,
    cfg: &NoiseConfig,
    t: &PulseTimings,
    rng: &mut R,
) -> Result<StateVector, PulseError> {
    pulse_with_leak(state, &psi_i_pulse(t), cfg, rng)
}

/// Psi_0 -> psi_L: molecular Raman sideband pi/2, then atomic sideband pi
/// that factors the motion out.
pub fn create_psi_l<R: Rng + ?Sized>(
    state: &StateVector,
    cfg: &NoiseConfig,
    t: &PulseTimings,
    rng: &mut R,
) -> Result<StateVector, PulseError> {
    let s = pulse_with_leak(state, &t.mol_sb_pi2(), cfg, rng)?;
    apply_pulse(&s, &t.atom_sb_pi(0.0))
}

/// Psi_I -> psi_H: comb carrier pi (|2> -> |0>), molecular carrier pi
/// (|-5/2> -> |2>), then the same atomic sideband pi.
pub fn create_psi_h<R: Rng + ?Sized>(
    state: &StateVector,
    cfg: &NoiseConfig,
    t: &PulseTimings,
    rng: &mut R,
) -> Result<StateVector, PulseError> {
    let s = pulse_with_leak(
        state,
        &PulseSpec::new(Transition::CombCarrier, PI, 0.0, t.comb_pi_us),
        cfg,
        rng,
    )?;
    let s = pulse_with_leak(
        &s,
        &PulseSpec::new(Transition::MolRamanCarrier, PI, 0.0, t.mol_carrier_pi_us),
        cfg,
        rng,
    )?;
    apply_pulse(&s, &t.atom_sb_pi(0.0))
}

/// Hide direction for `hide_unhide`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HideDirection {
    Hide,
    Unhide,
}

/// Park the atomic |D> population in |S>|1> around the comb pulse (hide) and
/// bring it back (unhide). The unhide pulse is the same sideband with phase
/// advanced by pi, which inverts the hide exactly.
pub fn hide_unhide(
    state: &StateVector,
    direction: HideDirection,
    t: &PulseTimings,
) -> Result<StateVector, PulseError> {
    let phi = match direction {
        HideDirection::Hide => 0.0,
        HideDirection::Unhide => PI,
    };
    apply_pulse(state, &t.atom_sb_pi(phi))
}

/// Analysis pulses mapping coherence into the measured populations.
/// Low: atomic carrier pi/2 at phi_a, molecular Raman carrier pi/2 at
/// -phi_a (scanned with equal and opposite steps).
/// High: atomic carrier pi/2 at phi_a, then the comb pi/2 at +phi_a
/// bracketed by hide/unhide (equal steps).
pub fn analysis_pulses<R: Rng + ?Sized>(
    state: &StateVector,
    kind: QubitKind,
    phi_a: f64,
    cfg: &NoiseConfig,
    t: &PulseTimings,
    rng: &mut R,
) -> Result<StateVector, PulseError> {
    let atomic =
        PulseSpec::new(Transition::AtomCarrier, PI / 2.0, phi_a, t.atom_carrier_pi2_us);
    match kind {
        QubitKind::Low => {
            let s = apply_pulse(state, &atomic)?;
            pulse_with_leak(
                &s,
                &PulseSpec::new(Transition::MolRamanCarrier, PI / 2.0, -phi_a, t.mol_carrier_pi2_us),
                cfg,
                rng,
            )
        }
        QubitKind::High => {
            let s = apply_pulse(state, &atomic)?;
            let s = hide_unhide(&s, HideDirection::Hide, t)?;
            let s = pulse_with_leak(
                &s,
                &PulseSpec::new(Transition::CombCarrier, PI / 2.0, phi_a, t.comb_pi2_us),
                cfg,
                rng,
            )?;
            hide_unhide(&s, HideDirection::Unhide, t)
        }
    }
}

/// Sequential molecular state detection by quantum logic, after the atom has
/// been measured. Tests |-3/2> first; the second probe depends on the qubit:
/// |-5/2> for the low pair, or the comb-mapped |0> route for the high pair
/// (a comb carrier pi maps |0> to |-3/2>, whose presence is then probed).
pub fn detect_molecule_after_atom<R: Rng + ?Sized>(
    state: &StateVector,
    kind: QubitKind,
    cfg: &NoiseConfig,
    t: &PulseTimings,
    rng: &mut R,
) -> Result<(MolOutcome, StateVector), PulseError> {
    let (was_32, s) = qls_detect_minus32(state, cfg, t, rng)?;
    if was_32 {
        return Ok((MolOutcome::Minus32, s));
    }
    match kind {
        QubitKind::Low => {
            let (was_52, s) = qls_detect_minus52(&s, cfg, t, rng)?;
            Ok(if was_52 { (MolOutcome::Minus52, s) } else { (MolOutcome::Other, s) })
        }
        QubitKind::High => {
            let mapped = pulse_with_leak(
                &s,
                &PulseSpec::new(Transition::CombCarrier, PI, 0.0, t.comb_pi_us),
                cfg,
                rng,
            )?;
            let (was_zero, s) = qls_detect_minus32(&mapped, cfg, t, rng)?;
            Ok(if was_zero { (MolOutcome::Zero, s) } else { (MolOutcome::Other, s) })
        }
    }
}

/// Post-trial manifold verification: probe |-3/2>, then |-5/2>. Either hit
/// means the molecule is still in the qubit manifold, and the probes leave
/// it restored to |-3/2> (a positive |-3/2> probe parks it in |-5/2>, so it
/// is pumped back by the |-3/2>-preparing stage). Returns false on loss.
pub fn verify_and_restore<R: Rng + ?Sized>(
    state: &StateVector,
    cfg: &NoiseConfig,
    t: &PulseTimings,
    rng: &mut R,
) -> Result<(bool, StateVector), PulseError> {
    let (was_32, s) = qls_detect_minus32(state, cfg, t, rng)?;
    if was_32 {
        let (_, restored) = prep_minus32_stage(&s, cfg, t, rng)?;
        return Ok((true, restored));
    }
    let (was_52, s) = qls_detect_minus52(&s, cfg, t, rng)?;
    Ok((was_52, s))
}

/// What a single trial runs after heralded preparation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrialKind<'a> {
    Parity { kind: QubitKind, phi_a: f64 },
    Population { kind: QubitKind },
    Custom { pulses: &'a [PulseSpec] },
}

impl TrialKind<'_> {
    /// Which detection route classifies the molecule afterwards.
    pub fn detection_route(&self) -> QubitKind {
        match self {
            TrialKind::Parity { kind, .. } | TrialKind::Population { kind } => *kind,
            TrialKind::Custom { .. } => QubitKind::Low,
        }
    }
}

/// Everything a completed trial reports.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub atom: AtomLevel,
    pub photon_counts: u32,
    pub mol: MolOutcome,
    pub final_state: StateVector,
}

/// Run one trial from the canonical post-herald state |S>|-3/2>|n_thermal>
/// (with a prep_error chance of starting in |-5/2> instead): creation
/// pulses, dephasing kicks, optional analysis pulses, then atomic and
/// molecular detection. The caller supplies this trial's derived RNG stream;
/// identical streams reproduce the trial bit for bit.
pub fn run_trial<R: Rng + ?Sized>(
    kind: TrialKind,
    cfg: &NoiseConfig,
    t: &PulseTimings,
    n_max: usize,
    rng: &mut R,
) -> Result<TrialOutcome, PulseError> {
    let mol0 = if leak_fires(cfg.prep_error, rng) { MolLevel::Minus52 } else { MolLevel::Minus32 };
    let n0 = sample_initial_motion(cfg, n_max, rng);
    let mut state = StateVector::basis(AtomLevel::S, mol0, n0, n_max).expect("validated n_max");
    if leak_fires(cfg.leak_per_trial, rng) {
        leak_collapse(&mut state, rng);
    }

    state = match kind {
        TrialKind::Parity { kind: qubit, phi_a } => {
            let (atom_window, comb_window) = match qubit {
                QubitKind::Low => (t.atom_window_us(), 0.0),
                QubitKind::High => (t.atom_window_us(), t.comb_window_us()),
            };
            let atom_kick = sample_phase_error(cfg.atom_coherence_time_us, atom_window, rng);
            let comb_kick = sample_phase_error(cfg.comb_coherence_time_us, comb_window, rng);

            let created = match qubit {
                QubitKind::Low => create_psi_l(&state, cfg, t, rng)?,
                QubitKind::High => {
                    let psi_i = create_psi_i(&state, cfg, t, rng)?;
                    create_psi_h(&psi_i, cfg, t, rng)?
                }
            };
            let kicked = apply_dephasing(&created, |l| l.atom == AtomLevel::D, atom_kick);
            let kicked = apply_dephasing(&kicked, |l| l.mol == MolLevel::Zero, comb_kick);
            analysis_pulses(&kicked, qubit, phi_a, cfg, t, rng)?
        }
        TrialKind::Population { kind: qubit } => match qubit {
            QubitKind::Low => create_psi_l(&state, cfg, t, rng)?,
            QubitKind::High => {
                let psi_i = create_psi_i(&state, cfg, t, rng)?;
                create_psi_h(&psi_i, cfg, t, rng)?
            }
        },
        TrialKind::Custom { pulses } => {
            let mut s = state;
            for p in pulses {
                s = pulse_with_leak(&s, p, cfg, rng)?;
            }
            s
        }
    };

    let (atom, photon_counts, collapsed) = detect_atom(&state, cfg, rng);
    let (mol, final_state) =
        detect_molecule_after_atom(&collapsed, kind.detection_route(), cfg, t, rng)?;
    Ok(TrialOutcome { atom, photon_counts, mol, final_state })
}

/// The canonical noiseless entangled target states, written out from the
/// pulse conventions; tests compare protocol outputs against them.
pub fn ideal_psi_l(n_max: usize) -> StateVector {
    let mut s = StateVector::basis(AtomLevel::S, MolLevel::Minus32, 0, n_max).unwrap();
    let d = StateVector::basis(AtomLevel::D, MolLevel::Minus52, 0, n_max).unwrap();
    let inv = 1.0 / 2f64.sqrt();
    for i in 0..s.dim() {
        let v = (s.amps()[i] - d.amps()[i]) * inv;
        s.amps_mut()[i] = v;
    }
    s
}

pub fn ideal_psi_h(n_max: usize) -> StateVector {
    let mut s = StateVector::basis(AtomLevel::S, MolLevel::Zero, 0, n_max).unwrap();
    let d = StateVector::basis(AtomLevel::D, MolLevel::Minus32, 0, n_max).unwrap();
    let factor = num_complex::Complex64::new(0.0, -1.0) / 2f64.sqrt();
    for i in 0..s.dim() {
        let v = (s.amps()[i] - d.amps()[i]) * factor;
        s.amps_mut()[i] = v;
    }
    s
}

pub fn ideal_psi_i(n_max: usize) -> StateVector {
    let mut s = StateVector::basis(AtomLevel::S, MolLevel::Minus32, 0, n_max).unwrap();
    let b = StateVector::basis(AtomLevel::S, MolLevel::Minus52, 1, n_max).unwrap();
    let inv = 1.0 / 2f64.sqrt();
    let minus_i = num_complex::Complex64::new(0.0, -1.0);
    for i in 0..s.dim() {
        let v = (s.amps()[i] + minus_i * b.amps()[i]) * inv;
        s.amps_mut()[i] = v;
    }
    s
}
