//! Projective atom detection with a photon-count fluorescence model, trial
//! records, and population/parity statistics over the two entangled-qubit
//! subspaces.

use crate::hilbert::{AtomLevel, MolLevel, StateVector};
use crate::noise::NoiseConfig;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use std::io::{self, BufRead, Write};
use thiserror::Error;

/// Classical molecular detection outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MolOutcome {
    Minus32,
    Minus52,
    Zero,
    Other,
}

impl MolOutcome {
    pub fn token(self) -> &'static str {
        match self {
            MolOutcome::Minus32 => "-3/2",
            MolOutcome::Minus52 => "-5/2",
            MolOutcome::Zero => "0",
            MolOutcome::Other => "other",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        Some(match token {
            "-3/2" => MolOutcome::Minus32,
            "-5/2" => MolOutcome::Minus52,
            "0" => MolOutcome::Zero,
            "other" => MolOutcome::Other,
            _ => return None,
        })
    }
}

/// Which entangled qubit pair an analysis or a fit refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitKind {
    /// Zeeman pair {-3/2, -5/2} (13.4 kHz splitting).
    Low,
    /// Rotational pair {J=0, J=2 stretch} (855 GHz splitting).
    High,
}

impl QubitKind {
    pub fn token(self) -> &'static str {
        match self {
            QubitKind::Low => "low",
            QubitKind::High => "high",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        Some(match token {
            "low" => QubitKind::Low,
            "high" => QubitKind::High,
            _ => return None,
        })
    }

    /// The four (atom, mol) outcome combinations of this qubit's subspace,
    /// ordered [(S,m1), (S,m2), (D,m1), (D,m2)].
    pub fn combos(self) -> [(AtomLevel, MolOutcome); 4] {
        let (m1, m2) = match self {
            QubitKind::Low => (MolOutcome::Minus32, MolOutcome::Minus52),
            QubitKind::High => (MolOutcome::Zero, MolOutcome::Minus32),
        };
        [
            (AtomLevel::S, m1),
            (AtomLevel::S, m2),
            (AtomLevel::D, m1),
            (AtomLevel::D, m2),
        ]
    }

    /// Parity signs matching `combos`: the correlated pair carries +1.
    /// Low pairs the opposite-energy states, high pairs the same-energy
    /// states, which flips the sign pattern between the two.
    pub fn parity_signs(self) -> [f64; 4] {
        match self {
            QubitKind::Low => [-1.0, 1.0, 1.0, -1.0],
            QubitKind::High => [1.0, -1.0, -1.0, 1.0],
        }
    }

    /// Per-trial parity contribution of one recorded outcome; 0 when the
    /// outcome falls outside the 4-state subspace.
    pub fn parity_sign(self, atom: AtomLevel, mol: MolOutcome) -> f64 {
        let combos = self.combos();
        let signs = self.parity_signs();
        for i in 0..4 {
            if combos[i] == (atom, mol) {
                return signs[i];
            }
        }
        0.0
    }
}

/// Fluorescence detection of the atom: Born-rule collapse onto S or D, then
/// a Poisson photon count whose threshold comparison gives the REPORTED
/// outcome. The collapse follows the true level, so a misclassified record
/// carries counts inconsistent with the physical state, as in the lab.
pub fn detect_atom<R: Rng + ?Sized>(
    state: &StateVector,
    cfg: &NoiseConfig,
    rng: &mut R,
) -> (AtomLevel, u32, StateVector) {
    let p_s = state.population(|l| l.atom == AtomLevel::S);
    let true_level = if rng.random::<f64>() < p_s { AtomLevel::S } else { AtomLevel::D };
    let mut collapsed = state.clone();
    collapsed
        .project(|l| l.atom == true_level)
        .expect("Born-selected branch has nonzero population");
    let mean = match true_level {
        AtomLevel::S => cfg.detect_bright_mean,
        AtomLevel::D => cfg.detect_dark_mean,
    };
    let counts = if mean > 0.0 {
        Poisson::new(mean).expect("validated mean").sample(rng) as u32
    } else {
        0
    };
    let reported = if counts >= cfg.detect_threshold { AtomLevel::S } else { AtomLevel::D };
    (reported, counts, collapsed)
}

/// One completed experiment trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial_id: u64,
    pub protocol: String,
    /// Absent for population runs (no analysis pulses).
    pub phi_a_rad: Option<f64>,
    pub atom_outcome: AtomLevel,
    pub mol_outcome: MolOutcome,
    pub photon_counts: u32,
    /// Herald attempt-pairs consumed by this trial's preparation block.
    pub herald_attempts: u32,
    /// Invalid records are excluded from fringe fits.
    pub valid: bool,
}

pub const RECORDS_HEADER: &str =
    "trial_id,protocol,phi_a_rad,atom_outcome,mol_outcome,photon_counts,herald_attempts,valid";

impl TrialRecord {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.trial_id,
            self.protocol,
            self.phi_a_rad.map(|p| p.to_string()).unwrap_or_default(),
            self.atom_outcome.token(),
            self.mol_outcome.token(),
            self.photon_counts,
            self.herald_attempts,
            self.valid
        )
    }

    pub fn parse_csv_row(line: &str) -> Result<Self, RecordParseError> {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(RecordParseError::FieldCount { got: fields.len() });
        }
        let trial_id = fields[0]
            .parse::<u64>()
            .map_err(|_| RecordParseError::Field { field: "trial_id", got: fields[0].into() })?;
        let protocol = fields[1].to_string();
        if protocol.is_empty() {
            return Err(RecordParseError::Field { field: "protocol", got: protocol });
        }
        let phi_a_rad = if fields[2].is_empty() {
            None
        } else {
            let v = fields[2]
                .parse::<f64>()
                .map_err(|_| RecordParseError::Field { field: "phi_a_rad", got: fields[2].into() })?;
            if !v.is_finite() {
                return Err(RecordParseError::Field { field: "phi_a_rad", got: fields[2].into() });
            }
            Some(v)
        };
        let atom_outcome = match fields[3] {
            "S" => AtomLevel::S,
            "D" => AtomLevel::D,
            other => {
                return Err(RecordParseError::Field { field: "atom_outcome", got: other.into() })
            }
        };
        let mol_outcome = MolOutcome::from_token(fields[4])
            .ok_or_else(|| RecordParseError::Field { field: "mol_outcome", got: fields[4].into() })?;
        let photon_counts = fields[5]
            .parse::<u32>()
            .map_err(|_| RecordParseError::Field { field: "photon_counts", got: fields[5].into() })?;
        let herald_attempts = fields[6]
            .parse::<u32>()
            .map_err(|_| RecordParseError::Field { field: "herald_attempts", got: fields[6].into() })?;
        let valid = match fields[7] {
            "true" => true,
            "false" => false,
            other => return Err(RecordParseError::Field { field: "valid", got: other.into() }),
        };
        Ok(TrialRecord {
            trial_id,
            protocol,
            phi_a_rad,
            atom_outcome,
            mol_outcome,
            photon_counts,
            herald_attempts,
            valid,
        })
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum RecordParseError {
    #[error("expected 8 comma-separated fields, got {got}")]
    FieldCount { got: usize },
    #[error("invalid value for {field}: `{got}`")]
    Field { field: &'static str, got: String },
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<RecordParseError>,
    },
    #[error("missing header line `{RECORDS_HEADER}`")]
    MissingHeader,
}

/// Write the records CSV, header first.
pub fn write_records<W: Write>(out: &mut W, records: &[TrialRecord]) -> io::Result<()> {
    writeln!(out, "{RECORDS_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.to_csv_row())?;
    }
    Ok(())
}

/// Parse a records CSV (header required).
pub fn read_records<R: BufRead>(input: R) -> Result<Vec<TrialRecord>, RecordParseError> {
    let mut records = Vec::new();
    let mut saw_header = false;
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|_| RecordParseError::MissingHeader)?;
        let line = line.trim_end_matches('\r');
        if i == 0 {
            if line != RECORDS_HEADER {
                return Err(RecordParseError::MissingHeader);
            }
            saw_header = true;
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let rec = TrialRecord::parse_csv_row(line).map_err(|e| RecordParseError::AtLine {
            line: i + 1,
            source: Box::new(e),
        })?;
        records.push(rec);
    }
    if !saw_header {
        return Err(RecordParseError::MissingHeader);
    }
    Ok(records)
}

/// Population estimate over one qubit's 4-state subspace. Probabilities are
/// normalized over ALL valid trials, not post-selected, so the four P plus
/// the `other` fraction sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationEstimate {
    pub kind: QubitKind,
    pub counts: [u64; 4],
    pub probs: [f64; 4],
    /// Binomial standard errors sqrt(p(1-p)/N).
    pub errors: [f64; 4],
    pub other_count: u64,
    pub n_trials: u64,
}

impl PopulationEstimate {
    /// Signed population sum with this qubit's parity signs.
    pub fn parity(&self) -> f64 {
        let signs = self.kind.parity_signs();
        (0..4).map(|i| signs[i] * self.probs[i]).sum()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("no valid trials to aggregate")]
    Empty,
    #[error("phi_a group at {phi_a} has fewer than 2 trials")]
    TooFewTrials { phi_a: f64 },
}

/// Aggregate valid records into subspace populations.
pub fn estimate_populations(
    records: &[TrialRecord],
    kind: QubitKind,
) -> Result<PopulationEstimate, StatsError> {
    let combos = kind.combos();
    let mut counts = [0u64; 4];
    let mut other = 0u64;
    let mut n = 0u64;
    for r in records.iter().filter(|r| r.valid) {
        n += 1;
        match combos.iter().position(|&c| c == (r.atom_outcome, r.mol_outcome)) {
            Some(i) => counts[i] += 1,
            None => other += 1,
        }
    }
    if n == 0 {
        return Err(StatsError::Empty);
    }
    let mut probs = [0.0; 4];
    let mut errors = [0.0; 4];
    for i in 0..4 {
        let p = counts[i] as f64 / n as f64;
        probs[i] = p;
        errors[i] = (p * (1.0 - p) / n as f64).sqrt();
    }
    Ok(PopulationEstimate { kind, counts, probs, errors, other_count: other, n_trials: n })
}

/// One parity point of a fringe scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringePoint {
    pub phi_a: f64,
    pub parity: f64,
    pub sigma: f64,
    pub n_trials: u64,
}

/// Standard error of the mean of per-trial parity contributions, floored by
/// the Wilson-interval error so extreme points (all identical outcomes)
/// never get zero sigma.
pub(crate) fn parity_sigma(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    let sem = (var / n).sqrt();
    let p_hat = (mean + 1.0) / 2.0;
    let wilson = 2.0 * (p_hat * (1.0 - p_hat) / n + 1.0 / (4.0 * n * n)).sqrt() / (1.0 + 1.0 / n);
    sem.max(wilson)
}

/// Group valid records by phi_a and compute parity points. Records without
/// phi_a are skipped; groups need at least 2 trials.
pub fn fringe_points(
    records: &[TrialRecord],
    kind: QubitKind,
) -> Result<Vec<FringePoint>, StatsError> {
    let mut groups: Vec<(f64, Vec<f64>)> = Vec::new();
    for r in records.iter().filter(|r| r.valid) {
        let Some(phi) = r.phi_a_rad else { continue };
        let sign = kind.parity_sign(r.atom_outcome, r.mol_outcome);
        match groups.iter_mut().find(|(p, _)| *p == phi) {
            Some((_, vals)) => vals.push(sign),
            None => groups.push((phi, vec![sign])),
        }
    }
    if groups.is_empty() {
        return Err(StatsError::Empty);
    }
    groups.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut points = Vec::with_capacity(groups.len());
    for (phi, vals) in groups {
        if vals.len() < 2 {
            return Err(StatsError::TooFewTrials { phi_a: phi });
        }
        let n = vals.len() as u64;
        let parity = vals.iter().sum::<f64>() / n as f64;
        points.push(FringePoint { phi_a: phi, parity, sigma: parity_sigma(&vals), n_trials: n });
    }
    Ok(points)
}

/// Exact subspace populations of a state vector (motional trace), ordered as
/// `kind.combos()`. This is what detection converges to by the Born rule.
pub fn subspace_populations(state: &StateVector, kind: QubitKind) -> [f64; 4] {
    let to_level = |m: MolOutcome| -> MolLevel {
        match m {
            MolOutcome::Minus32 => MolLevel::Minus32,
            MolOutcome::Minus52 => MolLevel::Minus52,
            MolOutcome::Zero => MolLevel::Zero,
            MolOutcome::Other => unreachable!("combos never contain Other"),
        }
    };
    let combos = kind.combos();
    let mut probs = [0.0; 4];
    for i in 0..4 {
        let (atom, mol) = (combos[i].0, to_level(combos[i].1));
        probs[i] = state.population(|l| l.atom == atom && l.mol == mol);
    }
    probs
}

/// Exact parity of a state vector for one qubit kind.
pub fn state_parity(state: &StateVector, kind: QubitKind) -> f64 {
    let probs = subspace_populations(state, kind);
    let signs = kind.parity_signs();
    (0..4).map(|i| signs[i] * probs[i]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{AtomLevel, MolLevel, StateVector};
    use crate::noise::{rng_for, NoiseConfig, RngDomain};

    const N_MAX: usize = 8;

    fn record(atom: AtomLevel, mol: MolOutcome, phi: Option<f64>) -> TrialRecord {
        TrialRecord {
            trial_id: 0,
            protocol: "parity_scan_L".into(),
            phi_a_rad: phi,
            atom_outcome: atom,
            mol_outcome: mol,
            photon_counts: if atom == AtomLevel::S { 20 } else { 0 },
            herald_attempts: 1,
            valid: true,
        }
    }

    fn ideal_psi_l() -> StateVector {
        let mut s = StateVector::basis(AtomLevel::S, MolLevel::Minus32, 0, N_MAX).unwrap();
        let d = StateVector::basis(AtomLevel::D, MolLevel::Minus52, 0, N_MAX).unwrap();
        let inv = 1.0 / 2f64.sqrt();
        for i in 0..s.dim() {
            let v = (s.amps()[i] - d.amps()[i]) * inv;
            s.amps_mut()[i] = v;
        }
        s
    }

    #[test]
    fn bright_state_is_detected_as_s_with_high_counts() {
        let s = StateVector::basis(AtomLevel::S, MolLevel::Minus32, 0, N_MAX).unwrap();
        let cfg = NoiseConfig::ideal();
        let mut rng = rng_for(1, RngDomain::Trial(0));
        for _ in 0..200 {
            let (reported, counts, collapsed) = detect_atom(&s, &cfg, &mut rng);
            assert_eq!(reported, AtomLevel::S);
            assert!(counts >= cfg.detect_threshold);
            assert_eq!(collapsed, s, "pure state collapses to itself");
        }
    }

    #[test]
    fn dark_state_yields_zero_counts_under_ideal_config() {
        let d = StateVector::basis(AtomLevel::D, MolLevel::Minus52, 0, N_MAX).unwrap();
        let cfg = NoiseConfig::ideal();
        let mut rng = rng_for(2, RngDomain::Trial(0));
        for _ in 0..200 {
            let (reported, counts, _) = detect_atom(&d, &cfg, &mut rng);
            assert_eq!(reported, AtomLevel::D);
            assert_eq!(counts, 0, "dark mean 0 draws no photons");
        }
    }

    #[test]
    fn dark_state_with_realistic_counts_stays_below_threshold() {
        let d = StateVector::basis(AtomLevel::D, MolLevel::Minus52, 0, N_MAX).unwrap();
        let cfg = NoiseConfig::default();
        let mut rng = rng_for(3, RngDomain::Trial(0));
        // P(Poisson(0.4) >= 6) = 4.04e-6; 2000 draws at this seed stay clean.
        for _ in 0..2000 {
            let (reported, _, _) = detect_atom(&d, &cfg, &mut rng);
            assert_eq!(reported, AtomLevel::D);
        }
    }

    #[test]
    fn equal_superposition_splits_detection_evenly() {
        let a = StateVector::basis(AtomLevel::S, MolLevel::Minus32, 0, N_MAX).unwrap();
        let b = StateVector::basis(AtomLevel::D, MolLevel::Minus32, 0, N_MAX).unwrap();
        let mut sup = a.clone();
        for i in 0..sup.dim() {
            sup.amps_mut()[i] = (a.amps()[i] + b.amps()[i]) / 2f64.sqrt();
        }
        let cfg = NoiseConfig::ideal();
        let mut rng = rng_for(4, RngDomain::Trial(0));
        let shots = 40_000;
        let mut s_count = 0;
        for _ in 0..shots {
            let (reported, _, collapsed) = detect_atom(&sup, &cfg, &mut rng);
            if reported == AtomLevel::S {
                s_count += 1;
                assert!((collapsed.population(|l| l.atom == AtomLevel::S) - 1.0).abs() < 1e-12);
            }
        }
        let frac = s_count as f64 / shots as f64;
        let bound = 4.0 * 0.5 / (shots as f64).sqrt();
        assert!((frac - 0.5).abs() < bound, "Born split {frac} vs 0.5 +- {bound}");
    }

    #[test]
    fn ideal_psi_l_without_analysis_has_parity_minus_one() {
        // Populations (0, 0, 0.5, 0.5) on (S,-3/2),(S,-5/2),(D,-3/2),(D,-5/2)
        // ordering give the odd-parity extreme.
        let psi = ideal_psi_l();
        let pops = subspace_populations(&psi, QubitKind::Low);
        assert!((pops[0] - 0.5).abs() < 1e-12);
        assert!((pops[3] - 0.5).abs() < 1e-12);
        assert!((state_parity(&psi, QubitKind::Low) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_populations_have_zero_parity() {
        let records: Vec<TrialRecord> = QubitKind::Low
            .combos()
            .iter()
            .map(|&(a, m)| record(a, m, None))
            .collect();
        let est = estimate_populations(&records, QubitKind::Low).unwrap();
        assert_eq!(est.n_trials, 4);
        assert!((est.parity()).abs() < 1e-12);
        let total: f64 = est.probs.iter().sum::<f64>() + est.other_count as f64 / 4.0;
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn other_outcomes_dilute_but_are_not_post_selected() {
        let mut records = vec![
            record(AtomLevel::S, MolOutcome::Minus32, None),
            record(AtomLevel::D, MolOutcome::Minus52, None),
        ];
        records.push(record(AtomLevel::S, MolOutcome::Other, None));
        records.push(record(AtomLevel::D, MolOutcome::Other, None));
        let est = estimate_populations(&records, QubitKind::Low).unwrap();
        assert_eq!(est.n_trials, 4);
        assert_eq!(est.other_count, 2);
        assert!((est.probs[0] - 0.25).abs() < 1e-12, "normalized over all trials");
    }

    #[test]
    fn invalid_records_are_excluded() {
        let mut bad = record(AtomLevel::S, MolOutcome::Minus32, Some(0.0));
        bad.valid = false;
        let good = record(AtomLevel::D, MolOutcome::Minus32, Some(0.0));
        let est = estimate_populations(&[bad, good.clone(), good], QubitKind::Low).unwrap();
        assert_eq!(est.n_trials, 2);
        assert_eq!(est.counts, [0, 0, 2, 0]);
    }

    #[test]
    fn fringe_points_group_and_floor_sigma() {
        let mut records = Vec::new();
        for _ in 0..10 {
            records.push(record(AtomLevel::S, MolOutcome::Minus52, Some(0.5)));
        }
        for _ in 0..20 {
            records.push(record(AtomLevel::S, MolOutcome::Minus32, Some(1.5)));
            records.push(record(AtomLevel::S, MolOutcome::Minus52, Some(1.5)));
        }
        let points = fringe_points(&records, QubitKind::Low).unwrap();
        assert_eq!(points.len(), 2);
        assert_eq!(points[0].phi_a, 0.5);
        assert!((points[0].parity - 1.0).abs() < 1e-12, "all +1 outcomes");
        let wilson_floor = 1.0 / 11.0; // 2*sqrt(1/(4*100))/(1.1) = 1/11 at p=1, n=10
        assert!((points[0].sigma - wilson_floor).abs() < 1e-12, "zero-variance point gets Wilson floor");
        assert!((points[1].parity).abs() < 1e-12);
        assert!(points[1].sigma > 0.0 && points[1].sigma < 0.2);
    }

    #[test]
    fn fringe_rejects_single_trial_groups() {
        let records = vec![
            record(AtomLevel::S, MolOutcome::Minus32, Some(0.0)),
            record(AtomLevel::S, MolOutcome::Minus32, Some(0.0)),
            record(AtomLevel::S, MolOutcome::Minus32, Some(1.0)),
        ];
        assert!(matches!(
            fringe_points(&records, QubitKind::Low),
            Err(StatsError::TooFewTrials { .. })
        ));
    }

    #[test]
    fn csv_roundtrip_preserves_records_exactly() {
        let records = vec![
            record(AtomLevel::S, MolOutcome::Minus32, Some(std::f64::consts::PI / 6.0)),
            record(AtomLevel::D, MolOutcome::Other, None),
        ];
        let mut buf = Vec::new();
        write_records(&mut buf, &records).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(RECORDS_HEADER));
        assert!(text.contains(",-3/2,"), "mol token serialized");
        let back = read_records(buf.as_slice()).unwrap();
        assert_eq!(back, records, "round-trip must be lossless, including phi_a bits");
    }

    #[test]
    fn csv_parse_reports_line_and_field() {
        let text = format!("{RECORDS_HEADER}\n0,parity_scan_L,0.5,S,-3/2,20,1,true\n1,parity_scan_L,xx,S,-3/2,20,1,true\n");
        let err = read_records(text.as_bytes()).unwrap_err();
        match err {
            RecordParseError::AtLine { line, source } => {
                assert_eq!(line, 3);
                assert!(matches!(*source, RecordParseError::Field { field: "phi_a_rad", .. }));
            }
            other => panic!("expected AtLine, got {other:?}"),
        }

        assert!(matches!(
            read_records("not,a,header\n".as_bytes()),
            Err(RecordParseError::MissingHeader)
        ));
        assert!(matches!(
            TrialRecord::parse_csv_row("1,2,3"),
            Err(RecordParseError::FieldCount { got: 3 })
        ));
    }

    #[test]
    fn parity_sign_classifies_both_qubits() {
        assert_eq!(QubitKind::Low.parity_sign(AtomLevel::S, MolOutcome::Minus52), 1.0);
        assert_eq!(QubitKind::Low.parity_sign(AtomLevel::S, MolOutcome::Minus32), -1.0);
        assert_eq!(QubitKind::Low.parity_sign(AtomLevel::S, MolOutcome::Zero), 0.0);
        assert_eq!(QubitKind::High.parity_sign(AtomLevel::S, MolOutcome::Zero), 1.0);
        assert_eq!(QubitKind::High.parity_sign(AtomLevel::D, MolOutcome::Minus32), 1.0);
        assert_eq!(QubitKind::High.parity_sign(AtomLevel::D, MolOutcome::Zero), -1.0);
        assert_eq!(QubitKind::High.parity_sign(AtomLevel::S, MolOutcome::Minus52), 0.0);
    }
}
