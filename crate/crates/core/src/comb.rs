//! Frequency arithmetic for the comb-driven rotational transition: the
//! two-tooth Raman frequency, recovery of the tooth-number difference from
//! knob shifts, the two-photon lineshape, and scan-center fitting.

use rand::Rng;

/// Acceptable distance from an integer when recovering the tooth-number
/// difference from a ratio of frequency shifts.
pub const TOOTH_RATIO_TOL: f64 = 0.1;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CombError {
    #[error("repetition-rate shift must be nonzero")]
    ZeroDeltaFrep,
    #[error("shift ratio {ratio} is {residual} away from the nearest integer {nearest}")]
    AmbiguousRatio { ratio: f64, nearest: i64, residual: f64 },
    #[error("recovered tooth-number difference {got} is not a positive integer")]
    InvalidToothNumber { got: i64 },
    #[error("scan needs at least {need} points, got {got}")]
    ScanTooShort { need: usize, got: usize },
}

/// Which sideband of the comb pair drives the transition: the Raman
/// frequency is n * f_rep + sign * 2 * f_aom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AomSign {
    Plus,
    Minus,
}

impl AomSign {
    pub fn token(self) -> &'static str {
        match self {
            AomSign::Plus => "+",
            AomSign::Minus => "-",
        }
    }

    pub fn from_token(s: &str) -> Option<AomSign> {
        match s {
            "+" | "plus" => Some(AomSign::Plus),
            "-" | "minus" => Some(AomSign::Minus),
            _ => None,
        }
    }
}

/// Comb drive settings, all in integer hertz.
#[derive(Debug, Clone, PartialEq)]
pub struct CombParams {
    pub frep_hz: u64,
    pub faom_hz: u64,
    pub n: u64,
    pub sign: AomSign,
    pub brot_hz: u64,
}

/// The two-photon difference frequency bridged by comb teeth n apart, with
/// both beams shifted by the AOM: |n * f_rep + sign * 2 * f_aom|. Computed
/// in 128-bit integers, so it is exact for any physical setting.
pub fn raman_frequency_hz(n: u64, frep_hz: u64, faom_hz: u64, sign: AomSign) -> u64 {
    let teeth = n as i128 * frep_hz as i128;
    let aom = 2 * faom_hz as i128;
    let total = match sign {
        AomSign::Plus => teeth + aom,
        AomSign::Minus => teeth - aom,
    };
    total.unsigned_abs() as u64
}

impl CombParams {
    pub fn raman_frequency_hz(&self) -> u64 {
        raman_frequency_hz(self.n, self.frep_hz, self.faom_hz, self.sign)
    }
}

/// Recover the tooth-number difference from the knob shifts that keep the
/// transition resonant: moving the AOM by delta_faom compensates a
/// repetition-rate move of delta_frep when n = 2 * delta_faom / delta_frep.
/// The ratio must sit within `TOOTH_RATIO_TOL` of a positive integer.
pub fn recover_tooth_number(delta_faom_hz: u64, delta_frep_hz: u64) -> Result<u64, CombError> {
    if delta_frep_hz == 0 {
        return Err(CombError::ZeroDeltaFrep);
    }
    let ratio = 2.0 * delta_faom_hz as f64 / delta_frep_hz as f64;
    let nearest = ratio.round();
    let residual = (ratio - nearest).abs();
    if residual > TOOTH_RATIO_TOL {
        return Err(CombError::AmbiguousRatio { ratio, nearest: nearest as i64, residual });
    }
    if nearest < 1.0 {
        return Err(CombError::InvalidToothNumber { got: nearest as i64 });
    }
    Ok(nearest as u64)
}

/// Two-photon Rabi lineshape: transfer probability after driving for
/// `duration_s` at angular Rabi frequency `omega` and angular detuning
/// 2 pi (f_drive - f_center).
pub fn transfer_probability(
    f_drive_hz: f64,
    f_center_hz: f64,
    omega_rad_per_s: f64,
    duration_s: f64,
) -> f64 {
    let delta = 2.0 * std::f64::consts::PI * (f_drive_hz - f_center_hz);
    let omega2 = omega_rad_per_s * omega_rad_per_s;
    let gen2 = omega2 + delta * delta;
    if gen2 == 0.0 {
        return 0.0;
    }
    (omega2 / gen2) * (0.5 * gen2.sqrt() * duration_s).sin().powi(2)
}

/// Angular Rabi frequency that makes `duration_s` a resonant pi pulse.
pub fn pi_pulse_omega(duration_s: f64) -> f64 {
    std::f64::consts::PI / duration_s
}

/// One simulated point of a resonance scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub f_drive_hz: f64,
    /// Observed transfer fraction.
    pub p_hat: f64,
    pub shots: u32,
}

/// Simulate a frequency scan with binomial counting noise at each point.
pub fn simulate_scan<R: Rng + ?Sized>(
    f_center_hz: f64,
    omega_rad_per_s: f64,
    duration_s: f64,
    frequencies_hz: &[f64],
    shots: u32,
    rng: &mut R,
) -> Vec<ScanPoint> {
    frequencies_hz
        .iter()
        .map(|&f| {
            let p = transfer_probability(f, f_center_hz, omega_rad_per_s, duration_s);
            let hits = (0..shots).filter(|_| rng.random::<f64>() < p).count();
            ScanPoint { f_drive_hz: f, p_hat: hits as f64 / shots as f64, shots }
        })
        .collect()
}

/// Fit the scan center by least squares against the lineshape: a coarse
/// sweep over the scanned range brackets the main lobe, then a ternary
/// search converges inside it.
pub fn fit_scan_center(
    points: &[ScanPoint],
    omega_rad_per_s: f64,
    duration_s: f64,
) -> Result<f64, CombError> {
    if points.len() < 3 {
        return Err(CombError::ScanTooShort { need: 3, got: points.len() });
    }
    let sse = |center: f64| {
        points
            .iter()
            .map(|p| {
                let r = p.p_hat - transfer_probability(p.f_drive_hz, center, omega_rad_per_s, duration_s);
                r * r
            })
            .sum::<f64>()
    };
    let lo_f = points.iter().map(|p| p.f_drive_hz).fold(f64::INFINITY, f64::min);
    let hi_f = points.iter().map(|p| p.f_drive_hz).fold(f64::NEG_INFINITY, f64::max);
    let coarse = 400;
    let step = (hi_f - lo_f) / coarse as f64;
    let mut best = (f64::INFINITY, lo_f);
    for i in 0..=coarse {
        let c = lo_f + step * i as f64;
        let s = sse(c);
        if s < best.0 {
            best = (s, c);
        }
    }
    let (mut lo, mut hi) = (best.1 - step, best.1 + step);
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if sse(m1) < sse(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Sanity check of the bridged frequency against the rotational constant:
/// the ground-to-second-excited rotational splitting is 6 B_rot to leading
/// order, and the drive should sit within `tolerance` (fractional) of it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationalCheck {
    pub expected_hz: u64,
    /// Fractional deviation |f - 6 B| / (6 B).
    pub deviation: f64,
    pub consistent: bool,
}

pub fn check_rotational_consistency(
    f_raman_hz: u64,
    brot_hz: u64,
    tolerance: f64,
) -> RotationalCheck {
    let expected = 6 * brot_hz as i128;
    let deviation = (f_raman_hz as i128 - expected).unsigned_abs() as f64 / expected as f64;
    RotationalCheck {
        expected_hz: expected as u64,
        deviation,
        consistent: deviation <= tolerance,
    }
}
