//! Command-line front end.
//!
//! Four subcommands: `analyze` (score a state file), `demo` (build a named
//! construction and explain what it shows), `verify` (run the implication
//! bench), `compose` (one-time-pad experiment). Exit codes are a stable
//! contract: 0 success/pass, 2 secrecy-verdict failure, 64 usage or parse
//! error. Sampling commands require an explicit `--seed`; nothing is seeded
//! from the clock.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::compose::{run_otp_exact, run_otp_montecarlo, OtpEstimate, OtpExperiment};
use crate::criteria::{build_report, trace_distance_to_ideal, SecrecyReport};
use crate::error::{Error, Result};
use crate::harness::{
    check_hy_implies_uc, check_hy_not_necessary, check_td_implies_uc, check_td_not_implies_hy,
    ImplicationName, ImplicationResult,
};
use crate::jsonfmt::{format_f64, to_json_string};
use crate::states::{flip_zero_key, spike_key, CqState};
use crate::tolerance;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT_FAILURE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Default secrecy target: asymptotically meaningful, far below any
/// desk-scale `2^-l`. Commands warn when it is out of reach for the given
/// key length.
pub const DEFAULT_EPSILON: f64 = 1e-20;

/// Canonical parameters for `verify all`.
pub const VERIFY_TD_EPSILON: f64 = 1.0;
pub const VERIFY_HY_EPSILON: f64 = 0.01;
pub const VERIFY_SEPARATION_L: usize = 10;
pub const VERIFY_SEPARATION_EPSILON: f64 = 0.001;
pub const VERIFY_NECESSITY_L: usize = 8;
pub const VERIFY_NECESSITY_EPSILON: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct CommonOpts {
    /// Secrecy target epsilon in (0, 1).
    #[arg(long = "eps", default_value_t = DEFAULT_EPSILON)]
    eps: f64,

    /// Solver tolerance in (0, 1e-2).
    #[arg(long, default_value_t = tolerance::SOLVER_GAP)]
    tol: f64,

    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,

    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(
    name = "keysecrecy",
    version,
    about = "Secrecy criteria for keys: trace distance, guessing probability, distinguishing advantage"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score a state file against both secrecy criteria.
    Analyze {
        /// JSON state file (states schema).
        state_file: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Build a named construction and report what it demonstrates.
    Demo {
        /// Which construction to build.
        #[arg(value_enum)]
        name: DemoName,
        /// Key length.
        #[arg(long = "l")]
        l: usize,
        /// Spike excess above uniform (spike only).
        #[arg(long)]
        delta: Option<f64>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run implication checks.
    Verify {
        /// Check name (TD_implies_UC, HY_implies_UC, TD_not_implies_HY,
        /// HY_not_necessary) or "all".
        check: String,
        /// Number of sampled states for the sampling checks.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Seed for the sampling checks (required by them).
        #[arg(long)]
        seed: Option<u64>,
        /// Key length for the constructive checks.
        #[arg(long = "l")]
        l: Option<usize>,
        /// Per-check epsilon; defaults depend on the check.
        #[arg(long = "eps")]
        eps: Option<f64>,
        #[arg(long, default_value_t = tolerance::SOLVER_GAP)]
        tol: f64,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One-time-pad composition experiment on a trivial-side state file.
    Compose {
        /// JSON state file (states schema, trivial side information).
        state_file: PathBuf,
        /// Expected key length (cross-checked against the file when given).
        #[arg(long = "l")]
        l: Option<usize>,
        /// Monte-Carlo trials (0 disables the estimate).
        #[arg(long, default_value_t = 0)]
        trials: usize,
        /// Seed for the Monte-Carlo estimate (required when trials > 0).
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DemoName {
    /// Ideal key rerouted from the all-zero to the all-one string.
    FlipZero,
    /// One outcome inflated by delta above uniform.
    Spike,
}

/// Parse and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Analyze { state_file, common } => cmd_analyze(&state_file, &common),
        Command::Demo {
            name,
            l,
            delta,
            common,
        } => cmd_demo(name, l, delta, &common),
        Command::Verify {
            check,
            samples,
            seed,
            l,
            eps,
            tol,
            format,
            out,
        } => cmd_verify(&check, samples, seed, l, eps, tol, format, out.as_deref()),
        Command::Compose {
            state_file,
            l,
            trials,
            seed,
            common,
        } => cmd_compose(&state_file, l, trials, seed, &common),
    }
}

fn validate_common(common: &CommonOpts) -> Result<()> {
    if !(common.eps > 0.0 && common.eps < 1.0) {
        return Err(Error::ParameterOutOfRange {
            name: "eps",
            value: common.eps,
            range: "(0, 1)".into(),
        });
    }
    if !(common.tol > 0.0 && common.tol < 1e-2) {
        return Err(Error::ParameterOutOfRange {
            name: "tol",
            value: common.tol,
            range: "(0, 1e-2)".into(),
        });
    }
    Ok(())
}

fn load_state(path: &std::path::Path) -> Result<CqState> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidState(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(Error::Json)
}

fn scale_note(l: usize, eps: f64) {
    let uniform = 0.5f64.powi(l as i32);
    if uniform > eps {
        eprintln!(
            "note: epsilon target {:e} is below this key length's resolution; \
             at l = {l} the meaningful comparisons use epsilon near 2^-l = {:e}",
            eps, uniform
        );
    }
}

fn emit(text: &str, out: Option<&std::path::Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text.as_bytes())?,
        None => println!("{text}"),
    }
    Ok(())
}

fn render_report(report: &SecrecyReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => Ok(to_json_string(report)?),
        OutputFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "l              : {}", report.l);
            let _ = writeln!(s, "td             : {}", format_f64(report.td));
            let _ = writeln!(s, "p_guess        : {}", format_f64(report.p_guess));
            let _ = writeln!(s, "p_guess_lower  : {}", format_f64(report.p_guess_lower));
            let _ = writeln!(s, "p_guess_upper  : {}", format_f64(report.p_guess_upper));
            let _ = writeln!(s, "hy_rel_error   : {}", format_f64(report.hy_rel_error));
            let _ = writeln!(s, "uc_advantage   : {}", format_f64(report.uc_advantage));
            let _ = writeln!(s, "max_key_prob   : {}", format_f64(report.max_key_prob));
            let _ = writeln!(s, "avg_excess_prob: {}", format_f64(report.avg_excess_prob));
            let _ = writeln!(s, "epsilon_target : {}", format_f64(report.epsilon_target));
            let _ = writeln!(s, "verdict_td     : {}", report.verdict_td);
            let _ = write!(s, "verdict_hy     : {}", report.verdict_hy);
            Ok(s)
        }
    }
}

fn cmd_analyze(path: &std::path::Path, common: &CommonOpts) -> Result<i32> {
    validate_common(common)?;
    let state = load_state(path)?;
    scale_note(state.key_len(), common.eps);
    let report = build_report(&state, common.eps, common.tol)?;
    emit(
        &render_report(&report, common.format)?,
        common.out.as_deref(),
    )?;
    Ok(if report.verdict_td {
        EXIT_OK
    } else {
        EXIT_VERDICT_FAILURE
    })
}

fn cmd_demo(name: DemoName, l: usize, delta: Option<f64>, common: &CommonOpts) -> Result<i32> {
    validate_common(common)?;
    let (state, explanation) = match name {
        DemoName::FlipZero => {
            let state = flip_zero_key(l)?;
            let uniform = 0.5f64.powi(l as i32);
            let text = format!(
                "flip-zero at l = {l}: rerouting the all-zero outcome to all-one moves \
                 the key a trace distance of 2^-l = {uniform:e} from ideal, so it is \
                 UC-secret at any epsilon >= {uniform:e}. Yet the best guess (the all-one \
                 string) succeeds with probability 2*2^-l, twice the ideal value, so the \
                 relative guessing error is 1.0 at every key length. A UC-secret key need \
                 not satisfy the guessing-probability criterion."
            );
            (state, text)
        }
        DemoName::Spike => {
            let delta = delta.ok_or(Error::ParameterOutOfRange {
                name: "delta",
                value: f64::NAN,
                range: "required for the spike demo".into(),
            })?;
            let state = spike_key(l, delta)?;
            let scale = 2.0f64.powi(l as i32);
            let text = format!(
                "spike at l = {l}, delta = {delta}: one outcome inflated by delta puts the \
                 key at trace distance exactly {delta} from ideal, so the trace-distance \
                 criterion holds at epsilon = {delta}. The same spike raises the best guess \
                 to 2^-l + delta, a relative guessing error of delta*2^l = {}: the \
                 trace-distance criterion does not imply the guessing-probability one.",
                delta * scale
            );
            (state, text)
        }
    };
    scale_note(l, common.eps);
    let report = build_report(&state, common.eps, common.tol)?;
    let rendered = render_report(&report, common.format)?;
    match common.format {
        OutputFormat::Text => {
            let combined = format!("{rendered}\n\n{explanation}");
            emit(&combined, common.out.as_deref())?;
        }
        OutputFormat::Json => {
            emit(&rendered, common.out.as_deref())?;
            eprintln!("{explanation}");
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct VerifyReport {
    checks: Vec<ImplicationResult>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    check: &str,
    samples: usize,
    seed: Option<u64>,
    l: Option<usize>,
    eps: Option<f64>,
    tol: f64,
    format: OutputFormat,
    out: Option<&std::path::Path>,
) -> Result<i32> {
    if !(tol > 0.0 && tol < 1e-2) {
        return Err(Error::ParameterOutOfRange {
            name: "tol",
            value: tol,
            range: "(0, 1e-2)".into(),
        });
    }
    let need_seed = || {
        seed.ok_or(Error::UnsupportedConfiguration(
            "--seed is required for sampling checks (no wall-clock seeding)".into(),
        ))
    };
    let checks: Vec<ImplicationResult> = if check == "all" {
        let seed = need_seed()?;
        vec![
            check_td_implies_uc(samples, seed, VERIFY_TD_EPSILON)?,
            check_hy_implies_uc(samples, seed, VERIFY_HY_EPSILON)?,
            check_td_not_implies_hy(VERIFY_SEPARATION_L, VERIFY_SEPARATION_EPSILON)?,
            check_hy_not_necessary(VERIFY_NECESSITY_L, VERIFY_NECESSITY_EPSILON)?,
        ]
    } else {
        let name = ImplicationName::parse(check).ok_or_else(|| {
            Error::UnsupportedConfiguration(format!(
                "unknown check {check:?}; expected one of TD_implies_UC, HY_implies_UC, \
                 TD_not_implies_HY, HY_not_necessary, all"
            ))
        })?;
        let result = match name {
            ImplicationName::TdImpliesUc => {
                check_td_implies_uc(samples, need_seed()?, eps.unwrap_or(VERIFY_TD_EPSILON))?
            }
            ImplicationName::HyImpliesUc => {
                check_hy_implies_uc(samples, need_seed()?, eps.unwrap_or(VERIFY_HY_EPSILON))?
            }
            ImplicationName::TdNotImpliesHy => check_td_not_implies_hy(
                l.unwrap_or(VERIFY_SEPARATION_L),
                eps.unwrap_or(VERIFY_SEPARATION_EPSILON),
            )?,
            ImplicationName::HyNotNecessary => check_hy_not_necessary(
                l.unwrap_or(VERIFY_NECESSITY_L),
                eps.unwrap_or(VERIFY_NECESSITY_EPSILON),
            )?,
        };
        vec![result]
    };

    let all_passed = checks.iter().all(|c| c.passed);
    let rendered = match format {
        OutputFormat::Json => to_json_string(&VerifyReport { checks })?,
        OutputFormat::Text => {
            let mut s = String::new();
            for c in &checks {
                let _ = writeln!(
                    s,
                    "{}: {} ({} instances, {} violations, eps = {})",
                    c.name.as_str(),
                    if c.passed { "PASS" } else { "FAIL" },
                    c.instances_tested,
                    c.violations.len(),
                    format_f64(c.epsilon),
                );
                if let Some(w) = &c.witness {
                    let _ = writeln!(
                        s,
                        "  witness {}: td = {}, uc_advantage = {}, p_guess = {}, hy_rel_error = {}",
                        w.descriptor,
                        format_f64(w.td),
                        format_f64(w.uc_advantage),
                        format_f64(w.p_guess),
                        format_f64(w.hy_rel_error),
                    );
                }
                if let Some(q) = &c.quantum_findings {
                    let _ = writeln!(
                        s,
                        "  quantum side (recorded, not asserted): {} instances, \
                         max uc/eps ratio {}, {} above threshold",
                        q.instances,
                        format_f64(q.max_uc_to_eps_ratio),
                        q.violations_observed,
                    );
                }
                for v in &c.violations {
                    let _ = writeln!(
                        s,
                        "  violation {} {}: observed {} > bound {}",
                        v.descriptor,
                        v.quantity,
                        format_f64(v.observed),
                        format_f64(v.bound),
                    );
                }
            }
            s.truncate(s.trim_end().len());
            s
        }
    };
    emit(&rendered, out)?;
    Ok(if all_passed {
        EXIT_OK
    } else {
        EXIT_VERDICT_FAILURE
    })
}

#[derive(Serialize)]
struct CompositionReport {
    l: usize,
    p_real: f64,
    p_ideal: f64,
    inflation: f64,
    trace_distance: f64,
    bound_satisfied: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    montecarlo: Option<OtpEstimate>,
}

#[derive(Serialize)]
struct CompositionEnvelope {
    composition: CompositionReport,
}

fn cmd_compose(
    path: &std::path::Path,
    l: Option<usize>,
    trials: usize,
    seed: Option<u64>,
    common: &CommonOpts,
) -> Result<i32> {
    validate_common(common)?;
    let state = load_state(path)?;
    if let Some(expected) = l {
        if expected != state.key_len() {
            return Err(Error::UnsupportedConfiguration(format!(
                "--l {expected} does not match the file's key length {}",
                state.key_len()
            )));
        }
    }
    scale_note(state.key_len(), common.eps);
    let td = trace_distance_to_ideal(&state)?;
    let exp = OtpExperiment::uniform_messages(state)?;
    let out = run_otp_exact(&exp)?;
    let montecarlo = if trials > 0 {
        let seed = seed.ok_or(Error::UnsupportedConfiguration(
            "--seed is required when --trials > 0 (no wall-clock seeding)".into(),
        ))?;
        Some(run_otp_montecarlo(&exp, trials, seed)?)
    } else {
        None
    };
    let report = CompositionReport {
        l: exp.key_len(),
        p_real: out.p_real,
        p_ideal: out.p_ideal,
        inflation: out.inflation,
        trace_distance: td,
        bound_satisfied: out.inflation <= td + tolerance::COMPOSITION,
        montecarlo,
    };
    let rendered = match common.format {
        OutputFormat::Json => to_json_string(&CompositionEnvelope {
            composition: report,
        })?,
        OutputFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "l              : {}", report.l);
            let _ = writeln!(s, "p_real         : {}", format_f64(report.p_real));
            let _ = writeln!(s, "p_ideal        : {}", format_f64(report.p_ideal));
            let _ = writeln!(s, "inflation      : {}", format_f64(report.inflation));
            let _ = writeln!(s, "trace_distance : {}", format_f64(report.trace_distance));
            let _ = write!(s, "bound_satisfied: {}", report.bound_satisfied);
            if let Some(mc) = &report.montecarlo {
                let _ = write!(
                    s,
                    "\np_real_hat     : {}\nstderr         : {}\ntrials         : {}",
                    format_f64(mc.p_real_hat),
                    format_f64(mc.stderr),
                    mc.trials
                );
            }
            s
        }
    };
    emit(&rendered, common.out.as_deref())?;
    Ok(EXIT_OK)
}
