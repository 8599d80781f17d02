//! Coherent drive pulses. Every drive couples an ordered level pair
//! (lower, upper); carriers preserve the motional number, sidebands couple
//! |lower>|n+1> <-> |upper>|n> with a sqrt(n+1) Rabi scaling.

use crate::hilbert::{AtomLevel, HilbertError, MolLevel, StateVector};
use num_complex::Complex64;
use thiserror::Error;

/// Population allowed on the truncation boundary before a sideband refuses
/// to act (it would push amplitude past n_max).
pub const TRUNCATION_TOL: f64 = 1e-6;

/// Which drive a pulse addresses. Sideband variants come in two orderings;
/// the `swapped` forms exchange the (lower, upper) roles, which turns the
/// add-quantum coupling of one level into the add-quantum coupling of the
/// other (the usual red/blue distinction).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transition {
    /// |S> <-> |D> at fixed n.
    AtomCarrier,
    /// |S>|n+1> <-> |D>|n>.
    AtomSideband,
    /// |D>|n+1> <-> |S>|n>.
    AtomSidebandSwapped,
    /// |-5/2> <-> |-3/2> at fixed n (two-photon optical Raman drive).
    MolRamanCarrier,
    /// |-5/2>|n+1> <-> |-3/2>|n>.
    MolRamanSideband,
    /// |-3/2>|n+1> <-> |-5/2>|n>.
    MolRamanSidebandSwapped,
    /// |0> <-> |-3/2> at fixed n (frequency-comb Raman drive bridging the
    /// rotational splitting).
    CombCarrier,
}

impl Transition {
    pub fn is_sideband(self) -> bool {
        matches!(
            self,
            Transition::AtomSideband
                | Transition::AtomSidebandSwapped
                | Transition::MolRamanSideband
                | Transition::MolRamanSidebandSwapped
        )
    }

    /// True for drives that address the molecule and can therefore eject it
    /// from the qubit manifold via off-resonant scattering.
    pub fn is_molecular(self) -> bool {
        matches!(
            self,
            Transition::MolRamanCarrier
                | Transition::MolRamanSideband
                | Transition::MolRamanSidebandSwapped
                | Transition::CombCarrier
        )
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Transition::AtomCarrier => "atom_carrier",
            Transition::AtomSideband => "atom_bsb",
            Transition::AtomSidebandSwapped => "atom_bsb_swap",
            Transition::MolRamanCarrier => "mol_raman_carrier",
            Transition::MolRamanSideband => "mol_raman_bsb",
            Transition::MolRamanSidebandSwapped => "mol_raman_bsb_swap",
            Transition::CombCarrier => "comb_carrier",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Some(match word {
            "atom_carrier" => Transition::AtomCarrier,
            "atom_bsb" => Transition::AtomSideband,
            "atom_bsb_swap" => Transition::AtomSidebandSwapped,
            "mol_raman_carrier" => Transition::MolRamanCarrier,
            "mol_raman_bsb" => Transition::MolRamanSideband,
            "mol_raman_bsb_swap" => Transition::MolRamanSidebandSwapped,
            "comb_carrier" => Transition::CombCarrier,
            _ => return None,
        })
    }
}

/// Either side of a coupled pair.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Side {
    Atom(AtomLevel),
    Mol(MolLevel),
}

/// One pulse: drive, rotation angle on the calibration pair, drive phase,
/// and wall-clock duration (used only by dephasing bookkeeping).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    pub transition: Transition,
    /// Rotation angle in radians, as calibrated on the `calibration_n` pair.
    pub theta: f64,
    /// Drive phase in radians.
    pub phi: f64,
    /// Fock pair on which `theta` is exact; other pairs scale by
    /// sqrt(n+1)/sqrt(calibration_n+1).
    pub calibration_n: usize,
    pub duration_us: f64,
}

impl PulseSpec {
    pub fn new(transition: Transition, theta: f64, phi: f64, duration_us: f64) -> Self {
        PulseSpec { transition, theta, phi, calibration_n: 0, duration_us }
    }

    /// Textual form `selector theta/pi phi_rad duration_us [calibration_n]`.
    pub fn format(&self) -> String {
        if self.calibration_n == 0 {
            format!(
                "{} {} {} {}",
                self.transition.keyword(),
                self.theta / std::f64::consts::PI,
                self.phi,
                self.duration_us
            )
        } else {
            format!(
                "{} {} {} {} {}",
                self.transition.keyword(),
                self.theta / std::f64::consts::PI,
                self.phi,
                self.duration_us,
                self.calibration_n
            )
        }
    }

    /// Parse the `format` serialization.
    pub fn parse(text: &str) -> Result<Self, PulseParseError> {
        let fields: Vec<&str> = text.split_whitespace().collect();
        if !(4..=5).contains(&fields.len()) {
            return Err(PulseParseError::FieldCount { got: fields.len() });
        }
        let transition = Transition::from_keyword(fields[0])
            .ok_or_else(|| PulseParseError::Selector { got: fields[0].to_string() })?;
        let theta_pi: f64 = parse_finite(fields[1], "theta")?;
        let phi: f64 = parse_finite(fields[2], "phi")?;
        let duration_us: f64 = parse_finite(fields[3], "duration_us")?;
        if duration_us < 0.0 {
            return Err(PulseParseError::Value { field: "duration_us", got: fields[3].to_string() });
        }
        let calibration_n = if fields.len() == 5 {
            fields[4]
                .parse::<usize>()
                .map_err(|_| PulseParseError::Value { field: "calibration_n", got: fields[4].to_string() })?
        } else {
            0
        };
        let theta = theta_pi * std::f64::consts::PI;
        if !theta.is_finite() {
            return Err(PulseParseError::Value { field: "theta", got: fields[1].to_string() });
        }
        Ok(PulseSpec { transition, theta, phi, calibration_n, duration_us })
    }
}

fn parse_finite(text: &str, field: &'static str) -> Result<f64, PulseParseError> {
    let v: f64 = text
        .parse()
        .map_err(|_| PulseParseError::Value { field, got: text.to_string() })?;
    if !v.is_finite() {
        return Err(PulseParseError::Value { field, got: text.to_string() });
    }
    Ok(v)
}

#[derive(Debug, Error, PartialEq)]
pub enum PulseParseError {
    #[error("expected 4 or 5 whitespace-separated fields, got {got}")]
    FieldCount { got: usize },
    #[error("unknown transition selector `{got}`")]
    Selector { got: String },
    #[error("invalid value for {field}: `{got}`")]
    Value { field: &'static str, got: String },
}

#[derive(Debug, Error, PartialEq)]
pub enum PulseError {
    #[error("sideband would push {population:.3e} of the population past the motional truncation")]
    TruncationOverflow { population: f64 },
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

/// The ordered (lower, upper) pair a transition couples.
fn level_pair(t: Transition) -> (Side, Side) {
    match t {
        Transition::AtomCarrier | Transition::AtomSideband => {
            (Side::Atom(AtomLevel::S), Side::Atom(AtomLevel::D))
        }
        Transition::AtomSidebandSwapped => (Side::Atom(AtomLevel::D), Side::Atom(AtomLevel::S)),
        Transition::MolRamanCarrier | Transition::MolRamanSideband => {
            (Side::Mol(MolLevel::Minus52), Side::Mol(MolLevel::Minus32))
        }
        Transition::MolRamanSidebandSwapped => {
            (Side::Mol(MolLevel::Minus32), Side::Mol(MolLevel::Minus52))
        }
        Transition::CombCarrier => (Side::Mol(MolLevel::Zero), Side::Mol(MolLevel::Minus32)),
    }
}

/// Indices of |lower>, |upper> for one spectator configuration at motional
/// numbers (n_lower, n_upper).
fn pair_indices(
    state: &StateVector,
    pair: (Side, Side),
    spectator_atom: AtomLevel,
    spectator_mol: MolLevel,
    n_lower: usize,
    n_upper: usize,
) -> Result<(usize, usize), HilbertError> {
    let resolve = |side: Side, n: usize| -> Result<usize, HilbertError> {
        match side {
            Side::Atom(a) => state.index(a, spectator_mol, n),
            Side::Mol(m) => state.index(spectator_atom, m, n),
        }
    };
    Ok((resolve(pair.0, n_lower)?, resolve(pair.1, n_upper)?))
}

/// Rotate the (lower, upper) amplitude pair:
/// |a> -> cos(t/2)|a> - i e^{i phi} sin(t/2)|b>
/// |b> -> -i e^{-i phi} sin(t/2)|a> + cos(t/2)|b>
fn rotate(amps: &mut [Complex64], ia: usize, ib: usize, theta_n: f64, phi: f64) {
    let c = Complex64::new((theta_n / 2.0).cos(), 0.0);
    let s = (theta_n / 2.0).sin();
    let minus_i = Complex64::new(0.0, -1.0);
    let t_ab = minus_i * Complex64::from_polar(s, -phi); // onto |a> from |b>
    let t_ba = minus_i * Complex64::from_polar(s, phi); // onto |b> from |a>
    let a = amps[ia];
    let b = amps[ib];
    amps[ia] = c * a + t_ab * b;
    amps[ib] = t_ba * a + c * b;
}

/// Apply one pulse. Leaked states pass through untouched (recorded as a
/// warning): coherent drives cannot address a molecule outside the manifold.
pub fn apply_pulse(state: &StateVector, pulse: &PulseSpec) -> Result<StateVector, PulseError> {
    if state.is_leaked() {
        log::warn!("pulse {} skipped: molecule is leaked", pulse.transition.keyword());
        return Ok(state.clone());
    }
    let mut out = state.clone();
    let pair = level_pair(pulse.transition);
    let n_max = state.n_max();

    // Spectator loops: atom pulses run over all molecular levels and vice
    // versa. The unused spectator of each arm is fixed by `pair`.
    let spectators: Vec<(AtomLevel, MolLevel)> = match pair.0 {
        Side::Atom(_) => crate::hilbert::COHERENT_MOL_LEVELS
            .iter()
            .map(|&m| (AtomLevel::S, m))
            .collect(),
        Side::Mol(_) => vec![(AtomLevel::S, MolLevel::Minus32), (AtomLevel::D, MolLevel::Minus32)],
    };

    if pulse.transition.is_sideband() {
        let scale_ref = ((pulse.calibration_n + 1) as f64).sqrt();
        for &(sa, sm) in &spectators {
            // Stranded top state |upper, n_max-1> has its partner outside the
            // truncation; refuse if it is meaningfully occupied.
            let (_, top) = pair_indices(&out, pair, sa, sm, 0, n_max - 1)?;
            let top_pop = out.amps()[top].norm_sqr();
            if top_pop > TRUNCATION_TOL {
                return Err(PulseError::TruncationOverflow { population: top_pop });
            }
            for n in 0..n_max - 1 {
                let theta_n = pulse.theta * ((n + 1) as f64).sqrt() / scale_ref;
                let (ia, ib) = pair_indices(&out, pair, sa, sm, n + 1, n)?;
                rotate(out.amps_mut(), ia, ib, theta_n, pulse.phi);
            }
        }
    } else {
        for &(sa, sm) in &spectators {
            for n in 0..n_max {
                let (ia, ib) = pair_indices(&out, pair, sa, sm, n, n)?;
                rotate(out.amps_mut(), ia, ib, pulse.theta, pulse.phi);
            }
        }
    }
    Ok(out)
}

/// Apply pulses left to right.
pub fn apply_sequence(state: &StateVector, pulses: &[PulseSpec]) -> Result<StateVector, PulseError> {
    let mut s = state.clone();
    for p in pulses {
        s = apply_pulse(&s, p)?;
    }
    Ok(s)
}
