//! Campaign orchestration: heralded preparation blocks, per-block analysis
//! phases, manifold verification between trials, trial budgets, and the
//! deterministic worker pool that executes trials speculatively while the
//! bookkeeping stays sequential.

use crate::config::{Protocol, RunConfig};
use crate::hilbert::StateVector;
use crate::measure::{
    estimate_populations, PopulationEstimate, QubitKind, StatsError, TrialRecord,
};
use crate::noise::{rng_for, RngDomain};
use crate::protocols::{
    create_psi_h, create_psi_i, create_psi_l, herald_prepare, run_trial, verify_and_restore,
    PulseTimings, TrialKind,
};
use crate::pulse::PulseError;
use rand::Rng;

/// A campaign aborts once this many preparation blocks in a row fail to
/// herald; it protects configs whose prior makes heralding hopeless.
pub const MAX_CONSECUTIVE_ABORTED_HERALDS: u64 = 1000;

#[derive(Debug, thiserror::Error)]
pub enum CampaignError {
    #[error(transparent)]
    Pulse(#[from] PulseError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("protocol {got} is not a {expected} run")]
    ProtocolMismatch { expected: &'static str, got: String },
}

/// Why the campaign stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    TargetsMet,
    BudgetExhausted,
    HeraldStarvation,
}

impl Termination {
    pub fn token(self) -> &'static str {
        match self {
            Termination::TargetsMet => "targets met",
            Termination::BudgetExhausted => "budget exhausted",
            Termination::HeraldStarvation => "herald starvation",
        }
    }
}

/// Progress of one analysis-phase slot (or the single slot of protocols
/// without a phase scan).
#[derive(Debug, Clone, PartialEq)]
pub struct SlotProgress {
    pub phi_a: Option<f64>,
    pub target: u64,
    pub achieved: u64,
}

/// Bookkeeping totals; every count reconciles against the records.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignSummary {
    pub protocol: Protocol,
    pub termination: Termination,
    pub budget: u64,
    pub blocks: u64,
    pub blocks_aborted: u64,
    pub herald_attempt_pairs: u64,
    pub manifold_breaks: u64,
    pub trials_valid: u64,
    pub trials_invalid: u64,
    pub slots: Vec<SlotProgress>,
    /// Single-shot runs only: whether the herald demanded by the protocol
    /// succeeded, so the dumped state is trustworthy.
    pub single_shot_valid: Option<bool>,
}

impl CampaignSummary {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("protocol: {}\n", self.protocol.token()));
        out.push_str(&format!("termination: {}\n", self.termination.token()));
        out.push_str(&format!("budget: {}\n", self.budget));
        out.push_str(&format!("blocks: {}\n", self.blocks));
        out.push_str(&format!("blocks_aborted: {}\n", self.blocks_aborted));
        out.push_str(&format!("herald_attempt_pairs: {}\n", self.herald_attempt_pairs));
        out.push_str(&format!("manifold_breaks: {}\n", self.manifold_breaks));
        out.push_str(&format!("trials_valid: {}\n", self.trials_valid));
        out.push_str(&format!("trials_invalid: {}\n", self.trials_invalid));
        for s in &self.slots {
            match s.phi_a {
                Some(phi) => out.push_str(&format!(
                    "slot phi_a={} target={} achieved={}\n",
                    phi, s.target, s.achieved
                )),
                None => out.push_str(&format!(
                    "slot target={} achieved={}\n",
                    s.target, s.achieved
                )),
            }
        }
        if let Some(v) = self.single_shot_valid {
            out.push_str(&format!("single_shot_valid: {v}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignOutcome {
    pub records: Vec<TrialRecord>,
    pub summary: CampaignSummary,
    /// Final state of single-shot creation runs, for dumping.
    pub final_state: Option<StateVector>,
}

fn trial_kind<'a>(cfg: &'a RunConfig, phi_a: Option<f64>) -> TrialKind<'a> {
    match cfg.protocol {
        Protocol::ParityScanL => {
            TrialKind::Parity { kind: QubitKind::Low, phi_a: phi_a.expect("parity slot has a phase") }
        }
        Protocol::ParityScanH => {
            TrialKind::Parity { kind: QubitKind::High, phi_a: phi_a.expect("parity slot has a phase") }
        }
        Protocol::PopulationL => TrialKind::Population { kind: QubitKind::Low },
        Protocol::PopulationH => TrialKind::Population { kind: QubitKind::High },
        Protocol::Custom => TrialKind::Custom { pulses: &cfg.pulses },
        // The preparation diagnostic is a pulse-free trial: herald, then the
        // full dual detection chain.
        Protocol::Prepare => TrialKind::Custom { pulses: &[] },
        Protocol::PsiL | Protocol::PsiH => {
            unreachable!("single-shot protocols do not run trial blocks")
        }
    }
}

/// One trial plus its post-trial manifold verification, a pure function of
/// the row index given the run configuration.
fn run_job(
    row_id: u64,
    phi_a: Option<f64>,
    cfg: &RunConfig,
    timings: &PulseTimings,
) -> Result<(TrialRecord, bool), PulseError> {
    let seed = cfg.noise.rng_seed;
    let mut trial_rng = rng_for(seed, RngDomain::Trial(row_id));
    let out = run_trial(trial_kind(cfg, phi_a), &cfg.noise, timings, cfg.n_max, &mut trial_rng)?;
    let mut verify_rng = rng_for(seed, RngDomain::Verify(row_id));
    let (still_in_manifold, _) =
        verify_and_restore(&out.final_state, &cfg.noise, timings, &mut verify_rng)?;
    let record = TrialRecord {
        trial_id: row_id,
        protocol: cfg.protocol.token().to_string(),
        phi_a_rad: phi_a,
        atom_outcome: out.atom,
        mol_outcome: out.mol,
        photon_counts: out.photon_counts,
        herald_attempts: 0,
        valid: true,
    };
    Ok((record, still_in_manifold))
}

/// Execute a planned chunk of jobs, splitting across `workers` threads.
/// Results come back in row order regardless of worker count, so the
/// campaign output is byte-identical for any parallelism.
fn execute_jobs(
    ids: &[u64],
    phi_a: Option<f64>,
    cfg: &RunConfig,
    timings: &PulseTimings,
    workers: usize,
) -> Result<Vec<(TrialRecord, bool)>, PulseError> {
    if workers <= 1 || ids.len() <= 1 {
        return ids.iter().map(|&id| run_job(id, phi_a, cfg, timings)).collect();
    }
    let per = ids.len().div_ceil(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = ids
            .chunks(per)
            .map(|chunk| {
                scope.spawn(move || {
                    chunk
                        .iter()
                        .map(|&id| run_job(id, phi_a, cfg, timings))
                        .collect::<Result<Vec<_>, _>>()
                })
            })
            .collect();
        let mut all = Vec::with_capacity(ids.len());
        for h in handles {
            all.extend(h.join().expect("worker thread panicked")?);
        }
        Ok(all)
    })
}

/// Row documenting a preparation block that exhausted its attempt budget
/// without heralding; excluded from all analysis.
fn aborted_herald_record(row_id: u64, phi_a: Option<f64>, cfg: &RunConfig) -> TrialRecord {
    TrialRecord {
        trial_id: row_id,
        protocol: cfg.protocol.token().to_string(),
        phi_a_rad: phi_a,
        atom_outcome: crate::hilbert::AtomLevel::D,
        mol_outcome: crate::measure::MolOutcome::Other,
        photon_counts: 0,
        herald_attempts: cfg.herald.max_attempt_pairs,
        valid: false,
    }
}

/// Run the configured protocol to completion. The loop mirrors a sequential
/// experiment: each block draws an analysis phase uniformly from the
/// configured list (redrawing filled slots), heralds the molecular state,
/// then repeats trials at that phase with manifold verification in between;
/// a verification failure breaks the block and the next herald redraws.
pub fn run_campaign(
    cfg: &RunConfig,
    timings: &PulseTimings,
    workers: usize,
) -> Result<CampaignOutcome, CampaignError> {
    if matches!(cfg.protocol, Protocol::PsiL | Protocol::PsiH) {
        return run_single_shot(cfg, timings);
    }

    let slot_phases: Vec<Option<f64>> = if cfg.protocol.is_parity_scan() {
        cfg.phi_a.iter().map(|&p| Some(p)).collect()
    } else {
        vec![None]
    };
    let targets = &cfg.targets;
    let budget = cfg.effective_budget();
    let chunk_cap = (workers.max(1) * 8).max(16) as u64;

    let mut fills = vec![0u64; slot_phases.len()];
    let mut records: Vec<TrialRecord> = Vec::new();
    let mut blocks = 0u64;
    let mut blocks_aborted = 0u64;
    let mut consecutive_aborts = 0u64;
    let mut herald_attempt_pairs = 0u64;
    let mut manifold_breaks = 0u64;
    let mut block_idx = 0u64;

    let termination = 'outer: loop {
        if fills.iter().zip(targets).all(|(f, t)| f >= t) {
            break Termination::TargetsMet;
        }
        if records.len() as u64 >= budget {
            break Termination::BudgetExhausted;
        }
        if consecutive_aborts >= MAX_CONSECUTIVE_ABORTED_HERALDS {
            break Termination::HeraldStarvation;
        }

        let mut herald_rng = rng_for(cfg.noise.rng_seed, RngDomain::Herald(block_idx));
        block_idx += 1;
        blocks += 1;
        let slot = if slot_phases.len() == 1 {
            0
        } else {
            loop {
                let k = herald_rng.random_range(0..slot_phases.len());
                if fills[k] < targets[k] {
                    break k;
                }
            }
        };
        let phi_a = slot_phases[slot];

        let herald =
            herald_prepare(&cfg.herald, &cfg.noise, timings, cfg.n_max, &mut herald_rng)?;
        herald_attempt_pairs += herald.attempt_pairs as u64;
        if !herald.success {
            blocks_aborted += 1;
            consecutive_aborts += 1;
            records.push(aborted_herald_record(records.len() as u64, phi_a, cfg));
            continue;
        }
        consecutive_aborts = 0;
        let mut block_pairs = Some(herald.attempt_pairs);

        loop {
            let remaining = targets[slot] - fills[slot];
            let budget_left = budget.saturating_sub(records.len() as u64);
            if remaining == 0 {
                break;
            }
            if budget_left == 0 {
                break 'outer Termination::BudgetExhausted;
            }
            let n_jobs = remaining.min(budget_left).min(chunk_cap);
            let first = records.len() as u64;
            let ids: Vec<u64> = (first..first + n_jobs).collect();
            let results = execute_jobs(&ids, phi_a, cfg, timings, workers)?;

            let mut broke = false;
            for (mut record, still_in_manifold) in results {
                record.herald_attempts = block_pairs.take().unwrap_or(0);
                records.push(record);
                fills[slot] += 1;
                if !still_in_manifold {
                    manifold_breaks += 1;
                    broke = true;
                    break;
                }
            }
            if broke {
                break;
            }
        }
    };

    let trials_valid = records.iter().filter(|r| r.valid).count() as u64;
    let trials_invalid = records.len() as u64 - trials_valid;
    let summary = CampaignSummary {
        protocol: cfg.protocol,
        termination,
        budget,
        blocks,
        blocks_aborted,
        herald_attempt_pairs,
        manifold_breaks,
        trials_valid,
        trials_invalid,
        slots: slot_phases
            .iter()
            .zip(targets)
            .zip(&fills)
            .map(|((phi_a, &target), &achieved)| SlotProgress { phi_a: *phi_a, target, achieved })
            .collect(),
        single_shot_valid: None,
    };
    Ok(CampaignOutcome { records, summary, final_state: None })
}

/// Single-shot creation run: herald once, apply the creation pulses, and
/// return the final state for dumping. No detection, no records.
fn run_single_shot(
    cfg: &RunConfig,
    timings: &PulseTimings,
) -> Result<CampaignOutcome, CampaignError> {
    let mut herald_rng = rng_for(cfg.noise.rng_seed, RngDomain::Herald(0));
    let herald = herald_prepare(&cfg.herald, &cfg.noise, timings, cfg.n_max, &mut herald_rng)?;

    let mut trial_rng = rng_for(cfg.noise.rng_seed, RngDomain::Trial(0));
    let state = match cfg.protocol {
        Protocol::PsiL => create_psi_l(&herald.state, &cfg.noise, timings, &mut trial_rng)?,
        Protocol::PsiH => {
            let psi_i = create_psi_i(&herald.state, &cfg.noise, timings, &mut trial_rng)?;
            create_psi_h(&psi_i, &cfg.noise, timings, &mut trial_rng)?
        }
        _ => unreachable!("only single-shot protocols reach here"),
    };

    let summary = CampaignSummary {
        protocol: cfg.protocol,
        termination: Termination::TargetsMet,
        budget: cfg.effective_budget(),
        blocks: 1,
        blocks_aborted: u64::from(!herald.success),
        herald_attempt_pairs: herald.attempt_pairs as u64,
        manifold_breaks: 0,
        trials_valid: 0,
        trials_invalid: 0,
        slots: vec![SlotProgress { phi_a: None, target: 1, achieved: u64::from(herald.success) }],
        single_shot_valid: Some(herald.success),
    };
    Ok(CampaignOutcome { records: Vec::new(), summary, final_state: Some(state) })
}

/// Population run: execute the campaign and fold its records into the
/// four-state estimate.
pub fn run_population(
    cfg: &RunConfig,
    timings: &PulseTimings,
    workers: usize,
) -> Result<(CampaignOutcome, PopulationEstimate), CampaignError> {
    let kind = match cfg.protocol {
        Protocol::PopulationL => QubitKind::Low,
        Protocol::PopulationH => QubitKind::High,
        other => {
            return Err(CampaignError::ProtocolMismatch {
                expected: "population",
                got: other.token().to_string(),
            })
        }
    };
    let outcome = run_campaign(cfg, timings, workers)?;
    let estimate = estimate_populations(&outcome.records, kind)?;
    Ok((outcome, estimate))
}

/// Write the campaign artifacts under `dir`: `records.csv` always,
/// `summary.txt` always, `state.txt` for single-shot runs.
pub fn write_outputs(outcome: &CampaignOutcome, dir: &std::path::Path) -> std::io::Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    let records_path = dir.join("records.csv");
    let mut file = std::io::BufWriter::new(std::fs::File::create(&records_path)?);
    crate::measure::write_records(&mut file, &outcome.records)?;
    std::io::Write::flush(&mut file)?;
    written.push(records_path);

    let summary_path = dir.join("summary.txt");
    std::fs::write(&summary_path, outcome.summary.render())?;
    written.push(summary_path);

    if let Some(state) = &outcome.final_state {
        let state_path = dir.join("state.txt");
        std::fs::write(&state_path, state.dump())?;
        written.push(state_path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use crate::hilbert::AtomLevel;
    use crate::measure::MolOutcome;
    use crate::protocols::ideal_psi_l;

    fn ideal_noise_block() -> &'static str {
        "[noise]\nnbar_m = 0\natom_coherence_time_us = inf\ncomb_coherence_time_us = inf\n\
         detect_bright_mean = 10000\ndetect_dark_mean = 0\n"
    }

    fn parity_cfg(targets: &str, extra_noise: &str) -> RunConfig {
        let text = format!(
            "[experiment]\nprotocol = parity_scan_L\nphi_a = 0.0, 0.5, 1.0, 1.5\ntargets = {targets}\n{}{extra_noise}",
            ideal_noise_block()
        );
        parse_config(&text).unwrap()
    }

    #[test]
    fn zero_leakage_campaign_fills_every_slot_with_one_block_each() {
        let cfg = parity_cfg("25", "rng_seed = 11\n");
        let out = run_campaign(&cfg, &PulseTimings::default(), 1).unwrap();
        assert_eq!(out.summary.termination, Termination::TargetsMet);
        assert_eq!(out.records.len(), 100);
        assert!(out.records.iter().all(|r| r.valid));
        assert_eq!(out.summary.blocks, 4, "one herald per phase block");
        assert_eq!(out.summary.manifold_breaks, 0);
        assert_eq!(out.summary.trials_valid, 100);
        assert_eq!(out.summary.trials_invalid, 0);
        for s in &out.summary.slots {
            assert_eq!(s.achieved, s.target);
        }
        for (i, r) in out.records.iter().enumerate() {
            assert_eq!(r.trial_id, i as u64, "trial ids are dense and ordered");
        }
        let column_pairs: u64 = out.records.iter().map(|r| r.herald_attempts as u64).sum();
        assert_eq!(column_pairs, out.summary.herald_attempt_pairs, "attempt accounting reconciles");
    }

    #[test]
    fn campaigns_are_deterministic_and_worker_count_invariant() {
        let cfg = parity_cfg("15", "rng_seed = 21\nleak_per_trial = 0.03\n");
        let a = run_campaign(&cfg, &PulseTimings::default(), 1).unwrap();
        let b = run_campaign(&cfg, &PulseTimings::default(), 1).unwrap();
        assert_eq!(a.records, b.records, "same seed, same records");
        assert_eq!(a.summary, b.summary);

        let c = run_campaign(&cfg, &PulseTimings::default(), 4).unwrap();
        assert_eq!(a.records, c.records, "worker count must not change results");
        assert_eq!(a.summary.render(), c.summary.render());

        let mut other = cfg.clone();
        other.noise.rng_seed = 22;
        let d = run_campaign(&other, &PulseTimings::default(), 1).unwrap();
        assert!(a.records != d.records, "different seed, different campaign");
    }

    #[test]
    fn manifold_loss_produces_geometric_run_lengths() {
        let text = format!(
            "[experiment]\nprotocol = population_L\ntargets = 2000\n{}rng_seed = 31\nleak_per_trial = 0.05\n",
            ideal_noise_block()
        );
        let cfg = parse_config(&text).unwrap();
        let out = run_campaign(&cfg, &PulseTimings::default(), 4).unwrap();
        assert_eq!(out.summary.termination, Termination::TargetsMet);
        assert_eq!(out.summary.trials_valid, 2000, "leaked trials still count");

        // Run lengths between breaks: every block except possibly the last
        // ends in a manifold break, so trials/blocks estimates the geometric
        // mean 1/p = 20.
        let blocks = out.summary.blocks as f64;
        let mean_run = out.summary.trials_valid as f64 / blocks;
        assert!(
            (mean_run - 20.0).abs() < 4.0,
            "mean run length {mean_run} should be near 1/leak = 20 over {blocks} blocks"
        );
        assert!(out.summary.manifold_breaks >= 60, "plenty of breaks at this leak rate");

        // Geometric signature: standard deviation comparable to the mean.
        // A record with nonzero herald_attempts opens a block, so the gap
        // since the previous opener is the prior block's run length. The
        // final block may have ended by filling the target, so it is skipped.
        let mut runs = Vec::new();
        let mut current = 0u64;
        for r in &out.records {
            if r.herald_attempts > 0 && current > 0 {
                runs.push(current as f64);
                current = 0;
            }
            current += 1;
        }
        let n = runs.len() as f64;
        let mean = runs.iter().sum::<f64>() / n;
        let std =
            (runs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt();
        assert!(
            (std / mean - 1.0).abs() < 0.35,
            "geometric law has std close to mean, got mean {mean} std {std}"
        );
    }

    #[test]
    fn hopeless_heralds_starve_or_exhaust_the_budget() {
        let base = format!(
            "[experiment]\nprotocol = population_L\ntargets = 5\nherald_max_attempt_pairs = 2\n\
             prior_minus32 = 0\nprior_minus52 = 0\nprior_leaked = 1\n{}rng_seed = 41\n",
            ideal_noise_block()
        );
        // Auto budget = 50 aborted rows, well under the starvation guard.
        let cfg = parse_config(&base).unwrap();
        let out = run_campaign(&cfg, &PulseTimings::default(), 1).unwrap();
        assert_eq!(out.summary.termination, Termination::BudgetExhausted);
        assert_eq!(out.records.len(), 50, "aborted blocks consume the budget");
        assert!(out.records.iter().all(|r| !r.valid));
        assert_eq!(out.summary.trials_invalid, 50);
        assert_eq!(out.summary.blocks_aborted, 50);
        assert_eq!(out.summary.herald_attempt_pairs, 100, "2 pairs per aborted block");

        let text = base.replace("targets = 5", "targets = 5000");
        let cfg = parse_config(&text).unwrap();
        let out = run_campaign(&cfg, &PulseTimings::default(), 1).unwrap();
        assert_eq!(out.summary.termination, Termination::HeraldStarvation);
        assert_eq!(out.records.len() as u64, MAX_CONSECUTIVE_ABORTED_HERALDS);
    }

    #[test]
    fn budget_cuts_a_campaign_short_with_partial_records() {
        let text = format!(
            "[experiment]\nprotocol = parity_scan_L\nphi_a = 0.0, 1.0\ntargets = 30\nbudget = 17\n{}rng_seed = 51\n",
            ideal_noise_block()
        );
        let cfg = parse_config(&text).unwrap();
        let out = run_campaign(&cfg, &PulseTimings::default(), 3).unwrap();
        assert_eq!(out.summary.termination, Termination::BudgetExhausted);
        assert_eq!(out.records.len(), 17);
        let achieved: u64 = out.summary.slots.iter().map(|s| s.achieved).sum();
        assert_eq!(achieved, 17, "partial fills are reported");
    }

    #[test]
    fn prepare_protocol_reads_back_the_heralded_state() {
        let text = format!(
            "[experiment]\nprotocol = prepare\ntargets = 40\n{}rng_seed = 61\n",
            ideal_noise_block()
        );
        let cfg = parse_config(&text).unwrap();
        let out = run_campaign(&cfg, &PulseTimings::default(), 2).unwrap();
        assert_eq!(out.records.len(), 40);
        for r in &out.records {
            assert_eq!(r.atom_outcome, AtomLevel::S, "herald leaves the atom bright");
            assert_eq!(r.mol_outcome, MolOutcome::Minus32);
            assert!(r.valid);
            assert!(r.phi_a_rad.is_none());
        }
    }

    #[test]
    fn population_campaign_splits_the_ideal_state_evenly() {
        let text = format!(
            "[experiment]\nprotocol = population_L\ntargets = 400\n{}rng_seed = 71\n",
            ideal_noise_block()
        );
        let cfg = parse_config(&text).unwrap();
        let (out, est) = run_population(&cfg, &PulseTimings::default(), 4).unwrap();
        assert_eq!(out.summary.trials_valid, 400);
        assert_eq!(est.n_trials, 400);
        // Slots 0 and 3 are (S,-3/2) and (D,-5/2).
        let bound = 4.0 * 0.5 / (400f64).sqrt();
        assert!((est.probs[0] - 0.5).abs() < bound, "P(S,-3/2) = {}", est.probs[0]);
        assert!((est.probs[3] - 0.5).abs() < bound, "P(D,-5/2) = {}", est.probs[3]);
        assert_eq!(est.probs[1], 0.0);
        assert_eq!(est.probs[2], 0.0);
        assert_eq!(est.other_count, 0);
    }

    #[test]
    fn population_runner_rejects_other_protocols() {
        let cfg = parity_cfg("5", "");
        let err = run_population(&cfg, &PulseTimings::default(), 1).unwrap_err();
        assert!(matches!(err, CampaignError::ProtocolMismatch { .. }));
    }

    #[test]
    fn custom_protocol_runs_the_supplied_pulses() {
        // The pulse list reproduces the low-qubit creation sequence, so the
        // measured pairs match a population run.
        let text = format!(
            "[experiment]\nprotocol = custom\ntargets = 200\n\
             pulses = mol_raman_bsb 0.5 0 762.5; atom_bsb 1 0 45\n{}rng_seed = 81\n",
            ideal_noise_block()
        );
        let cfg = parse_config(&text).unwrap();
        let out = run_campaign(&cfg, &PulseTimings::default(), 2).unwrap();
        for r in &out.records {
            let pair = (r.atom_outcome, r.mol_outcome);
            assert!(
                pair == (AtomLevel::S, MolOutcome::Minus32)
                    || pair == (AtomLevel::D, MolOutcome::Minus52),
                "unexpected outcome {pair:?}"
            );
        }
    }

    #[test]
    fn single_shot_psi_l_dumps_the_ideal_state() {
        let text = format!("[experiment]\nprotocol = psi_L\n{}rng_seed = 91\n", ideal_noise_block());
        let cfg = parse_config(&text).unwrap();
        let out = run_campaign(&cfg, &PulseTimings::default(), 1).unwrap();
        assert!(out.records.is_empty());
        assert_eq!(out.summary.single_shot_valid, Some(true));
        let state = out.final_state.unwrap();
        let ov = state.inner_product(&ideal_psi_l(cfg.n_max)).unwrap().norm();
        assert!((ov - 1.0).abs() < 1e-9, "dumped state overlaps the target, got {ov}");
    }

    #[test]
    fn single_shot_with_hopeless_prior_is_flagged_invalid() {
        let text = format!(
            "[experiment]\nprotocol = psi_H\nherald_max_attempt_pairs = 3\n\
             prior_minus32 = 0\nprior_minus52 = 0\nprior_leaked = 1\n{}rng_seed = 92\n",
            ideal_noise_block()
        );
        let cfg = parse_config(&text).unwrap();
        let out = run_campaign(&cfg, &PulseTimings::default(), 1).unwrap();
        assert_eq!(out.summary.single_shot_valid, Some(false));
        assert!(out.final_state.unwrap().is_leaked());
    }

    #[test]
    fn outputs_write_a_complete_tree() {
        let dir = tempfile::tempdir().unwrap();
        let text = format!("[experiment]\nprotocol = psi_L\n{}rng_seed = 93\n", ideal_noise_block());
        let cfg = parse_config(&text).unwrap();
        let out = run_campaign(&cfg, &PulseTimings::default(), 1).unwrap();
        let written = write_outputs(&out, dir.path()).unwrap();
        assert_eq!(written.len(), 3, "records, summary, and state files");
        let csv = std::fs::read_to_string(dir.path().join("records.csv")).unwrap();
        assert_eq!(csv.lines().count(), 1, "header-only records for single-shot runs");
        let state = std::fs::read_to_string(dir.path().join("state.txt")).unwrap();
        assert!(state.contains("S,-3/2,0,"), "dump lists the first branch: {state}");
        let summary = std::fs::read_to_string(dir.path().join("summary.txt")).unwrap();
        assert!(summary.contains("single_shot_valid: true"));
    }

    #[test]
    fn parity_campaign_fringe_matches_the_ideal_model() {
        let text = format!(
            "[experiment]\nprotocol = parity_scan_L\n\
             phi_a = 0.0, 0.5235987755982988, 1.0471975511965976, 1.5707963267948966, \
             2.0943951023931953, 2.6179938779914944\ntargets = 120\n{}rng_seed = 101\n",
            ideal_noise_block()
        );
        let cfg = parse_config(&text).unwrap();
        let out = run_campaign(&cfg, &PulseTimings::default(), 4).unwrap();
        let points = crate::measure::fringe_points(&out.records, QubitKind::Low).unwrap();
        let fit = crate::fit::fit_fringe(&points).unwrap();
        assert!(fit.contrast > 0.85, "noiseless fringe has near-unit contrast, got {}", fit.contrast);
        assert!(
            crate::fit::wrap_to_pi(fit.phi0 - std::f64::consts::PI).abs() < 0.15,
            "low-qubit fringe sits near phase pi, got {}",
            fit.phi0
        );
    }
}
