//! Command-line front end: simulate campaigns, fit fringes, check comb
//! arithmetic, and build fidelity reports from record files.

use clap::{Parser, Subcommand, ValueEnum};
use entsim_core::campaign::{run_campaign, write_outputs, CampaignError, Termination};
use entsim_core::comb::{
    check_rotational_consistency, raman_frequency_hz, recover_tooth_number, AomSign,
};
use entsim_core::config::parse_config;
use entsim_core::fit::{bootstrap_uncertainty, fidelity_report, fit_fringe};
use entsim_core::measure::{estimate_populations, fringe_points, read_records, QubitKind, TrialRecord};
use entsim_core::protocols::PulseTimings;
use entsim_core::pulse::PulseError;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_CONFIG: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_NUMERIC: u8 = 4;
const EXIT_INTERNAL: u8 = 1;

#[derive(Parser)]
#[command(name = "entsim", version, about = "Trapped atom-molecule entanglement simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum QubitArg {
    Low,
    High,
}

impl From<QubitArg> for QubitKind {
    fn from(q: QubitArg) -> QubitKind {
        match q {
            QubitArg::Low => QubitKind::Low,
            QubitArg::High => QubitKind::High,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured protocol and write records and reports.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides rng_seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Fit the parity fringe in a records file.
    Fit {
        #[arg(long)]
        records: PathBuf,
        #[arg(long, value_enum)]
        qubit: QubitArg,
        /// Bootstrap resamples for the quoted uncertainties.
        #[arg(long, default_value_t = 1000)]
        resamples: usize,
        /// Seed for the bootstrap resampler.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the comb frequency arithmetic for a drive setting.
    Comb {
        #[arg(long)]
        frep_hz: u64,
        #[arg(long)]
        faom_hz: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        delta_faom_hz: u64,
        #[arg(long)]
        delta_frep_hz: u64,
        #[arg(long)]
        brot_hz: u64,
        /// Which AOM sideband the drive uses: `+` or `-`.
        #[arg(long, default_value = "-")]
        sign: String,
        /// Fractional tolerance for the rotational-constant check.
        #[arg(long, default_value_t = 0.01)]
        tolerance: f64,
    },
    /// Combine population and parity records into a fidelity report.
    Report {
        #[arg(long)]
        records: PathBuf,
        #[arg(long, default_value_t = 1000)]
        resamples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Die quietly on a closed pipe (`entsim ... | head`) instead of panicking.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    env_logger::init();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Simulate { config, out, seed, workers } => simulate(&config, &out, seed, workers),
        Command::Fit { records, qubit, resamples, seed } => {
            fit(&records, qubit.into(), resamples, seed)
        }
        Command::Comb { frep_hz, faom_hz, n, delta_faom_hz, delta_frep_hz, brot_hz, sign, tolerance } => {
            comb(frep_hz, faom_hz, n, delta_faom_hz, delta_frep_hz, brot_hz, &sign, tolerance)
        }
        Command::Report { records, resamples, seed } => report(&records, resamples, seed),
    };
    ExitCode::from(code)
}

fn fail(code: u8, message: impl std::fmt::Display) -> u8 {
    eprintln!("error: {message}");
    code
}

fn campaign_error_code(err: &CampaignError) -> u8 {
    match err {
        CampaignError::Pulse(PulseError::TruncationOverflow { .. }) => EXIT_NUMERIC,
        _ => EXIT_INTERNAL,
    }
}

fn simulate(config: &Path, out: &Path, seed: Option<u64>, workers: usize) -> u8 {
    let text = match std::fs::read_to_string(config) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_CONFIG, format!("{}: {e}", config.display())),
    };
    let mut cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_CONFIG, format!("{}: {e}", config.display())),
    };
    if let Some(seed) = seed {
        cfg.noise.rng_seed = seed;
    }

    let timings = PulseTimings::default();
    let outcome = match run_campaign(&cfg, &timings, workers.max(1)) {
        Ok(o) => o,
        Err(e) => return fail(campaign_error_code(&e), e),
    };
    let written = match write_outputs(&outcome, out) {
        Ok(w) => w,
        Err(e) => return fail(EXIT_INTERNAL, format!("writing outputs: {e}")),
    };
    print!("{}", outcome.summary.render());
    for path in written {
        println!("wrote {}", path.display());
    }
    match outcome.summary.termination {
        Termination::TargetsMet => EXIT_OK,
        Termination::BudgetExhausted | Termination::HeraldStarvation => {
            eprintln!("warning: campaign stopped early ({})", outcome.summary.termination.token());
            EXIT_BUDGET
        }
    }
}

fn load_records(path: &Path) -> Result<Vec<TrialRecord>, String> {
    let file = std::fs::File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    read_records(std::io::BufReader::new(file)).map_err(|e| format!("{}: {e}", path.display()))
}

fn fit(records_path: &Path, kind: QubitKind, resamples: usize, seed: u64) -> u8 {
    let records = match load_records(records_path) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    let points = match fringe_points(&records, kind) {
        Ok(p) => p,
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    let fit = match fit_fringe(&points) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    println!("points: {}", points.len());
    for p in &points {
        println!(
            "point phi_a={} parity={} sigma={} n={}",
            p.phi_a, p.parity, p.sigma, p.n_trials
        );
    }
    println!("contrast: {}", fit.contrast);
    println!("sigma_contrast: {}", fit.sigma_contrast);
    println!("phi0: {}", fit.phi0);
    println!("sigma_phi0: {}", fit.sigma_phi0);
    println!("chi2: {}", fit.chi2);
    println!("dof: {}", fit.dof);
    match bootstrap_uncertainty(&records, kind, resamples, seed) {
        Ok(boot) => {
            println!("bootstrap_resamples: {}", boot.resamples);
            println!("bootstrap_sigma_contrast: {}", boot.sigma_contrast);
            println!("bootstrap_sigma_phi0: {}", boot.sigma_phi0);
            EXIT_OK
        }
        Err(e) => fail(EXIT_CONFIG, format!("bootstrap: {e}")),
    }
}

fn comb(
    frep_hz: u64,
    faom_hz: u64,
    n: u64,
    delta_faom_hz: u64,
    delta_frep_hz: u64,
    brot_hz: u64,
    sign: &str,
    tolerance: f64,
) -> u8 {
    let Some(sign) = AomSign::from_token(sign) else {
        return fail(EXIT_CONFIG, format!("sign must be `+` or `-`, got `{sign}`"));
    };
    let f_raman = raman_frequency_hz(n, frep_hz, faom_hz, sign);
    println!("raman_frequency_hz: {f_raman}");
    let recovered = match recover_tooth_number(delta_faom_hz, delta_frep_hz) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    println!("recovered_n: {recovered}");
    println!("n_matches: {}", recovered == n);
    let check = check_rotational_consistency(f_raman, brot_hz, tolerance);
    println!("rotational_expected_hz: {}", check.expected_hz);
    println!("rotational_deviation: {}", check.deviation);
    println!("rotational_consistent: {}", check.consistent);
    EXIT_OK
}

fn report(records_path: &Path, resamples: usize, seed: u64) -> u8 {
    let records = match load_records(records_path) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_CONFIG, e),
    };

    let mut reported = false;
    for (kind, pop_name, scan_name) in [
        (QubitKind::Low, "population_L", "parity_scan_L"),
        (QubitKind::High, "population_H", "parity_scan_H"),
    ] {
        let pops: Vec<TrialRecord> =
            records.iter().filter(|r| r.protocol == pop_name).cloned().collect();
        let scans: Vec<TrialRecord> =
            records.iter().filter(|r| r.protocol == scan_name).cloned().collect();
        if pops.is_empty() && scans.is_empty() {
            continue;
        }
        println!("qubit: {}", kind.token());

        let mut target_pops = None;
        if !pops.is_empty() {
            match estimate_populations(&pops, kind) {
                Ok(est) => {
                    let combos = kind.combos();
                    for (i, (atom, mol)) in combos.iter().enumerate() {
                        println!(
                            "population {}|{}: {} +- {}",
                            atom.token(),
                            mol.token(),
                            est.probs[i],
                            est.errors[i]
                        );
                    }
                    println!("population other_count: {}", est.other_count);
                    println!("population trials: {}", est.n_trials);
                    // The target state occupies the first and last combos.
                    target_pops = Some((est.probs[0], est.errors[0], est.probs[3], est.errors[3]));
                }
                Err(e) => return fail(EXIT_CONFIG, format!("populations: {e}")),
            }
        }

        let mut contrast = None;
        if !scans.is_empty() {
            let points = match fringe_points(&scans, kind) {
                Ok(p) => p,
                Err(e) => return fail(EXIT_CONFIG, format!("fringe: {e}")),
            };
            let fit = match fit_fringe(&points) {
                Ok(f) => f,
                Err(e) => return fail(EXIT_CONFIG, format!("fringe: {e}")),
            };
            let boot = match bootstrap_uncertainty(&scans, kind, resamples, seed) {
                Ok(b) => b,
                Err(e) => return fail(EXIT_CONFIG, format!("bootstrap: {e}")),
            };
            println!("contrast: {} +- {}", fit.contrast, boot.sigma_contrast);
            println!("phi0: {} +- {}", fit.phi0, boot.sigma_phi0);
            contrast = Some((fit.contrast, boot.sigma_contrast));
        }

        match (target_pops, contrast) {
            (Some((p1, s1, p2, s2)), Some((c, sc))) => {
                let rep = fidelity_report(p1, p2, c, s1, s2, sc);
                println!("fidelity: {} +- {}", rep.fidelity, rep.sigma);
                println!("entangled: {}", rep.entangled);
                println!("entangled_strict: {}", rep.entangled_strict);
            }
            (None, _) => println!("fidelity: unavailable (no population records)"),
            (_, None) => println!("fidelity: unavailable (no parity-scan records)"),
        }
        reported = true;
    }

    if reported {
        EXIT_OK
    } else {
        fail(EXIT_CONFIG, "no population or parity-scan records found")
    }
}
