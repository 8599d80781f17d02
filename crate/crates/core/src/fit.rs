//! Weighted least-squares fringe fitting, the fidelity estimate built from
//! populations plus fitted contrast, and bootstrap uncertainties.

use crate::measure::{parity_sigma, FringePoint, QubitKind, StatsError, TrialRecord};
use crate::noise::{rng_for, RngDomain};
use rand::Rng;
use std::f64::consts::PI;

/// Below this fitted contrast the fringe phase is meaningless; it is pinned
/// to 0 with infinite uncertainty instead of dividing by ~0.
pub const CONTRAST_FLOOR: f64 = 1e-12;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum FitError {
    #[error("need at least 2 fringe points, got {got}")]
    TooFewPoints { got: usize },
    #[error("point at phi_a={phi_a} has non-positive sigma {sigma}")]
    BadSigma { phi_a: f64, sigma: f64 },
    #[error("degenerate design: the phases do not constrain both quadratures")]
    DegenerateDesign,
    #[error("need at least 100 bootstrap resamples, got {got}")]
    TooFewResamples { got: usize },
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Result of fitting parity points to contrast * cos(2 phi_a + phi0).
#[derive(Debug, Clone, PartialEq)]
pub struct FringeFit {
    pub contrast: f64,
    /// Fringe phase in (-pi, pi].
    pub phi0: f64,
    pub sigma_contrast: f64,
    pub sigma_phi0: f64,
    /// Fitted quadrature amplitudes: parity = cos_amp cos(2 phi_a) +
    /// sin_amp sin(2 phi_a).
    pub cos_amp: f64,
    pub sin_amp: f64,
    /// Covariance of (cos_amp, sin_amp).
    pub covariance: [[f64; 2]; 2],
    pub chi2: f64,
    pub dof: usize,
}

/// Weighted least squares on the two quadratures of the parity fringe.
/// The model is linear in (cos_amp, sin_amp), so the solution and its
/// covariance are closed-form; contrast and phase errors follow by error
/// propagation through the polar transform.
pub fn fit_fringe(points: &[FringePoint]) -> Result<FringeFit, FitError> {
    if points.len() < 2 {
        return Err(FitError::TooFewPoints { got: points.len() });
    }
    for p in points {
        if !(p.sigma > 0.0) {
            return Err(FitError::BadSigma { phi_a: p.phi_a, sigma: p.sigma });
        }
    }

    // Normal equations for X = [cos 2phi, sin 2phi], W = diag(1/sigma^2).
    let (mut scc, mut scs, mut sss) = (0.0, 0.0, 0.0);
    let (mut syc, mut sys) = (0.0, 0.0);
    for p in points {
        let w = 1.0 / (p.sigma * p.sigma);
        let c = (2.0 * p.phi_a).cos();
        let s = (2.0 * p.phi_a).sin();
        scc += w * c * c;
        scs += w * c * s;
        sss += w * s * s;
        syc += w * p.parity * c;
        sys += w * p.parity * s;
    }
    let det = scc * sss - scs * scs;
    if det.abs() <= 1e-12 * (scc * sss).max(scs * scs).max(1.0) {
        return Err(FitError::DegenerateDesign);
    }
    let cos_amp = (sss * syc - scs * sys) / det;
    let sin_amp = (scc * sys - scs * syc) / det;
    let covariance = [[sss / det, -scs / det], [-scs / det, scc / det]];

    let mut chi2 = 0.0;
    for p in points {
        let model = cos_amp * (2.0 * p.phi_a).cos() + sin_amp * (2.0 * p.phi_a).sin();
        let r = (p.parity - model) / p.sigma;
        chi2 += r * r;
    }
    let dof = points.len().saturating_sub(2);

    let contrast = cos_amp.hypot(sin_amp);
    let (phi0, sigma_contrast, sigma_phi0) = if contrast < CONTRAST_FLOOR {
        (0.0, covariance[0][0].max(covariance[1][1]).sqrt(), f64::INFINITY)
    } else {
        let mut phi0 = (-sin_amp).atan2(cos_amp);
        if phi0 <= -PI {
            phi0 = PI;
        }
        // Jacobians of (contrast, phi0) wrt (cos_amp, sin_amp).
        let jc = [cos_amp / contrast, sin_amp / contrast];
        let jp = [sin_amp / (contrast * contrast), -cos_amp / (contrast * contrast)];
        let var = |j: [f64; 2]| {
            j[0] * j[0] * covariance[0][0]
                + 2.0 * j[0] * j[1] * covariance[0][1]
                + j[1] * j[1] * covariance[1][1]
        };
        (phi0, var(jc).sqrt(), var(jp).sqrt())
    };

    Ok(FringeFit {
        contrast,
        phi0,
        sigma_contrast,
        sigma_phi0,
        cos_amp,
        sin_amp,
        covariance,
        chi2,
        dof,
    })
}

/// Entanglement fidelity from the two target-state populations and the
/// fitted parity contrast, with independent errors added in quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityReport {
    pub fidelity: f64,
    pub sigma: f64,
    /// Point estimate clears the separable bound 1/2.
    pub entangled: bool,
    /// Clears the bound by two standard errors.
    pub entangled_strict: bool,
}

pub fn fidelity_report(
    pop_first: f64,
    pop_second: f64,
    contrast: f64,
    sigma_pop_first: f64,
    sigma_pop_second: f64,
    sigma_contrast: f64,
) -> FidelityReport {
    let fidelity = 0.5 * (pop_first + pop_second + contrast);
    let sigma = 0.5
        * (sigma_pop_first * sigma_pop_first
            + sigma_pop_second * sigma_pop_second
            + sigma_contrast * sigma_contrast)
            .sqrt();
    FidelityReport {
        fidelity,
        sigma,
        entangled: fidelity > 0.5,
        entangled_strict: fidelity - 2.0 * sigma > 0.5,
    }
}

/// Bootstrap standard errors of the fitted contrast and phase: records are
/// resampled with replacement within each phase group, refit, and the spread
/// across resamples reported.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapEstimate {
    pub sigma_contrast: f64,
    pub sigma_phi0: f64,
    pub resamples: usize,
}

pub fn bootstrap_uncertainty(
    records: &[TrialRecord],
    kind: QubitKind,
    resamples: usize,
    seed: u64,
) -> Result<BootstrapEstimate, FitError> {
    if resamples < 100 {
        return Err(FitError::TooFewResamples { got: resamples });
    }

    // Group per-trial parity signs by exact phase, as the direct fit does.
    let mut groups: Vec<(f64, Vec<f64>)> = Vec::new();
    for r in records {
        if !r.valid {
            continue;
        }
        let Some(phi) = r.phi_a_rad else { continue };
        let sign = kind.parity_sign(r.atom_outcome, r.mol_outcome);
        match groups.iter_mut().find(|(p, _)| p.to_bits() == phi.to_bits()) {
            Some((_, v)) => v.push(sign),
            None => groups.push((phi, vec![sign])),
        }
    }
    if groups.is_empty() {
        return Err(StatsError::Empty.into());
    }
    groups.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (phi, v) in &groups {
        if v.len() < 2 {
            return Err(StatsError::TooFewTrials { phi_a: *phi }.into());
        }
    }

    let reference = fit_fringe(
        &groups
            .iter()
            .map(|(phi, v)| FringePoint {
                phi_a: *phi,
                parity: v.iter().sum::<f64>() / v.len() as f64,
                sigma: parity_sigma(v),
                n_trials: v.len() as u64,
            })
            .collect::<Vec<_>>(),
    )?;

    let mut contrasts = Vec::with_capacity(resamples);
    let mut phase_deltas = Vec::with_capacity(resamples);
    let mut resample = Vec::new();
    for b in 0..resamples {
        let mut rng = rng_for(seed, RngDomain::Bootstrap(b as u64));
        let mut points = Vec::with_capacity(groups.len());
        for (phi, v) in &groups {
            resample.clear();
            for _ in 0..v.len() {
                resample.push(v[rng.random_range(0..v.len())]);
            }
            points.push(FringePoint {
                phi_a: *phi,
                parity: resample.iter().sum::<f64>() / resample.len() as f64,
                sigma: parity_sigma(&resample),
                n_trials: resample.len() as u64,
            });
        }
        let fit = fit_fringe(&points)?;
        contrasts.push(fit.contrast);
        phase_deltas.push(wrap_to_pi(fit.phi0 - reference.phi0));
    }

    Ok(BootstrapEstimate {
        sigma_contrast: sample_std(&contrasts),
        sigma_phi0: sample_std(&phase_deltas),
        resamples,
    })
}

/// Wrap an angle difference into (-pi, pi].
pub fn wrap_to_pi(x: f64) -> f64 {
    x - 2.0 * PI * (x / (2.0 * PI)).round()
}

fn sample_std(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
}
