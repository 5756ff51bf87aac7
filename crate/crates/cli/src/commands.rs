//! Argument parsing and command execution.
//!
//! [`run_command`] is the whole CLI as a function: it takes an argument
//! vector and returns the exit code, the structured report, and the exact
//! byte streams destined for stdout and stderr. The binary is a thin wrapper
//! around it, and tests drive it directly.
//!
//! Exit codes: `0` success (and `--help`/`--version`), `1` validation or I/O
//! failure, `2` command-line usage error.

use crate::report::{percent_string, OutputFormat, Report, Row, Section, Unit};
use crate::scenario::{parse_scenario, parse_study_design, NamedLedger, Scenario, ScenarioTask};
use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use inbits::{
    dpi_check, estimate_f1_f2_rate, evaluate_task, ingest_trials, median_response_time_s,
    negative_threshold, reassign_steps, study_cost_benefit, ActionAlphabet, AggregationMode,
    AlphabetKind, EpsilonPolicy, InputDeviceSpec, ProbabilityDistribution, StochasticMatrix,
    StudyDesign,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

/// Everything one invocation produces.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    /// `0` success, `1` validation or I/O failure, `2` usage error.
    pub exit_code: i32,
    /// The structured report, when the command succeeded.
    pub report: Option<Report>,
    /// Bytes for stdout (rendered report, or help/version text).
    pub rendered: String,
    /// Bytes for stderr (errors and warnings).
    pub diagnostics: String,
}

#[derive(Parser)]
#[command(
    name = "inbits",
    version,
    about = "Information-flow analysis of user interfaces: device capacities, \
             action alphabets, cost-benefit of interaction tasks, and study data."
)]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Zero-replacement mass used when divergences meet zero probabilities;
    /// overrides any value set in the input file.
    #[arg(long, global = true, value_name = "MASS")]
    epsilon: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Input-device capacity reports.
    Device {
        #[command(subcommand)]
        cmd: DeviceCmd,
    },
    /// Interaction-task evaluation.
    Task {
        #[command(subcommand)]
        cmd: TaskCmd,
    },
    /// Knowledge-ledger throughput estimates.
    Ledger {
        #[command(subcommand)]
        cmd: LedgerCmd,
    },
    /// Decision-study analysis.
    Study {
        #[command(subcommand)]
        cmd: StudyCmd,
    },
    /// Information-flow sanity demonstrations.
    Dpi {
        #[command(subcommand)]
        cmd: DpiCmd,
    },
}

#[derive(Subcommand)]
enum DeviceCmd {
    /// Report a device's instantaneous capacity and bandwidth.
    Cap {
        /// Scenario file declaring the device.
        file: PathBuf,
        /// Name of the device to report on.
        #[arg(long)]
        device: String,
    },
}

#[derive(Subcommand)]
enum TaskCmd {
    /// Evaluate a task's capacity, compression, distortion, cost, and
    /// cost-benefit ratio.
    Eval {
        /// Scenario file declaring the task.
        file: PathBuf,
        /// Name of the task to evaluate.
        #[arg(long)]
        task: String,
        /// Also evaluate the task with the step counts of two letters
        /// exchanged.
        #[arg(long, value_name = "A,B")]
        swap: Option<String>,
    },
    /// Find the smallest mistake mass that drives a task's benefit negative.
    Threshold {
        /// Scenario file declaring the task.
        file: PathBuf,
        /// Name of the task to probe.
        #[arg(long)]
        task: String,
        /// Letter the mistaken mass leaves.
        #[arg(long)]
        from: String,
        /// Letter the mistaken mass lands on.
        #[arg(long)]
        to: String,
    },
}

#[derive(Subcommand)]
enum LedgerCmd {
    /// Estimate the communication rate implied by a ledger and a task.
    Rate {
        /// Scenario file declaring the ledger and the task.
        file: PathBuf,
        /// Name of the knowledge ledger.
        #[arg(long)]
        ledger: String,
        /// Name of the task whose action alphabet closes the exchange.
        #[arg(long)]
        task: String,
        /// Observed task duration in seconds.
        #[arg(long)]
        seconds: f64,
    },
}

#[derive(Subcommand)]
enum StudyCmd {
    /// Analyze trial responses against a study design.
    Analyze {
        /// Study design document (JSON).
        design: PathBuf,
        /// Trial responses (CSV).
        responses: PathBuf,
        /// Override the design's aggregation mode.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    /// Each participant answers consistently; the answer stage is a softened
    /// point distribution at the modal decision.
    Consistent,
    /// Responses are pooled; the answer stage is the raw response
    /// frequencies.
    Aggregate,
}

#[derive(Subcommand)]
enum DpiCmd {
    /// Push random sources through random channel chains and confirm that
    /// processing never increases information about the source.
    Demo {
        /// RNG seed; fixed default so repeated runs agree byte-for-byte.
        #[arg(long, default_value_t = 17)]
        seed: u64,
        /// Fixed alphabet sizes for the three stages (default: random 2-6).
        #[arg(long, value_name = "N1,N2,N3")]
        sizes: Option<String>,
        /// Number of random chains to draw.
        #[arg(long, default_value_t = 1000)]
        trials: u32,
    },
}

/// Parse an argument vector and execute it. Never panics on bad input; the
/// outcome (including help text and usage errors) is in the returned value.
pub fn run_command<I, T>(argv: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let text = err.render().to_string();
            return match err.kind() {
                clap::error::ErrorKind::DisplayHelp
                | clap::error::ErrorKind::DisplayVersion => CommandOutput {
                    exit_code: 0,
                    report: None,
                    rendered: text,
                    diagnostics: String::new(),
                },
                _ => CommandOutput {
                    exit_code: 2,
                    report: None,
                    rendered: String::new(),
                    diagnostics: text,
                },
            };
        }
    };
    let format = cli.format;
    match dispatch(cli) {
        Ok(report) => CommandOutput {
            exit_code: 0,
            rendered: report.render(format),
            report: Some(report),
            diagnostics: String::new(),
        },
        Err(err) => CommandOutput {
            exit_code: 1,
            report: None,
            rendered: String::new(),
            diagnostics: format!("error: {err:#}\n"),
        },
    }
}

fn dispatch(cli: Cli) -> Result<Report> {
    match cli.command {
        Command::Device {
            cmd: DeviceCmd::Cap { file, device },
        } => device_cap(&file, &device),
        Command::Task {
            cmd: TaskCmd::Eval { file, task, swap },
        } => task_eval(&file, &task, swap.as_deref(), cli.epsilon),
        Command::Task {
            cmd:
                TaskCmd::Threshold {
                    file,
                    task,
                    from,
                    to,
                },
        } => task_threshold(&file, &task, &from, &to, cli.epsilon),
        Command::Ledger {
            cmd:
                LedgerCmd::Rate {
                    file,
                    ledger,
                    task,
                    seconds,
                },
        } => ledger_rate(&file, &ledger, &task, seconds),
        Command::Study {
            cmd:
                StudyCmd::Analyze {
                    design,
                    responses,
                    mode,
                },
        } => study_analyze(&design, &responses, mode, cli.epsilon),
        Command::Dpi {
            cmd:
                DpiCmd::Demo {
                    seed,
                    sizes,
                    trials,
                },
        } => dpi_demo(seed, sizes.as_deref(), trials),
    }
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    parse_scenario(&text).with_context(|| format!("{}", path.display()))
}

/// Flag value beats the file-level value, which beats the built-in default.
fn epsilon_policy(flag: Option<f64>, file: Option<f64>) -> Result<EpsilonPolicy> {
    match flag.or(file) {
        Some(e) => Ok(EpsilonPolicy::new(e)?),
        None => Ok(EpsilonPolicy::default()),
    }
}

fn kind_name(kind: AlphabetKind) -> &'static str {
    match kind {
        AlphabetKind::Radio => "radio",
        AlphabetKind::Checkbox => "checkbox",
        AlphabetKind::Freehand => "freehand",
        AlphabetKind::Gesture => "gesture",
        AlphabetKind::Composite => "composite",
        AlphabetKind::Custom => "custom",
    }
}

/// For checkbox alphabets: spell out the convention that capacity counts the
/// k box decisions, not the 2^k selection patterns, and quantify the
/// alternative reading.
fn checkbox_note(alphabet: &ActionAlphabet, du: Option<f64>) -> Option<String> {
    if alphabet.kind() != AlphabetKind::Checkbox {
        return None;
    }
    let boxes = alphabet.codeword_bits()?;
    let patterns = alphabet.len();
    let capacity = alphabet.capacity();
    let mut note = format!(
        "capacity counts the {boxes} independent box decisions \
         ({capacity:.3} bits); treating each of the {patterns} selection \
         patterns as one bit each would claim {patterns} bits"
    );
    if let (Some(du), true) = (du, capacity > 0.0) {
        let alternative = du * patterns as f64 / capacity;
        note.push_str(&format!(
            " and device utilization {} instead of {}",
            percent_string(alternative),
            percent_string(du)
        ));
    }
    note.push('.');
    Some(note)
}

// ---------------------------------------------------------------------------
// device cap
// ---------------------------------------------------------------------------

fn device_cap(file: &Path, device_name: &str) -> Result<Report> {
    let scenario = load_scenario(file)?;
    let device = scenario.device(device_name)?;

    let mut section = Section::new(format!("device: {}", device.name()));
    section.push(Row::text("variables", describe_variables(device)));
    section.push(Row::text(
        "sampling rate",
        format!("{} Hz", device.sampling_rate_hz()),
    ));
    section.push(Row::number(
        "instantaneous capacity",
        device.instantaneous_capacity(),
        Unit::Bits,
    ));
    section.push(Row::number("bandwidth", device.bandwidth(), Unit::BitsPerSecond));

    let mut report = Report::new();
    report.push(section);
    Ok(report)
}

fn describe_variables(device: &InputDeviceSpec) -> String {
    device
        .variables()
        .iter()
        .map(|v| format!("{}:{}", v.name(), v.cardinality()))
        .collect::<Vec<_>>()
        .join(" ")
}

// ---------------------------------------------------------------------------
// task eval / task threshold
// ---------------------------------------------------------------------------

fn task_eval(
    file: &Path,
    task_name: &str,
    swap: Option<&str>,
    epsilon_flag: Option<f64>,
) -> Result<Report> {
    let scenario = load_scenario(file)?;
    let policy = epsilon_policy(epsilon_flag, scenario.epsilon)?;
    let task = scenario.task(task_name)?;

    let mut report = Report::new();

    // Baseline: the task as declared, before any mistake model applies.
    let baseline = evaluate_task(
        &task.alphabet,
        &task.cost,
        None,
        task.device.as_ref(),
        task.task_seconds,
        &policy,
    )?;
    let mut section = Section::new(format!("task: {}", task.name));
    section.push(Row::text(
        "alphabet",
        format!(
            "{} letters ({})",
            task.alphabet.len(),
            kind_name(task.alphabet.kind())
        ),
    ));
    push_evaluation_rows(&mut section, &baseline, true);
    if let Some(note) = checkbox_note(&task.alphabet, baseline.du) {
        section.push(Row::text("note", note));
    }
    report.push(section);

    // The task's own mistake model, when it declares one.
    if let Some(mistake) = &task.mistake {
        let degraded = evaluate_task(
            &task.alphabet,
            &task.cost,
            Some(mistake),
            task.device.as_ref(),
            task.task_seconds,
            &policy,
        )?;
        let mut section = Section::new(format!("task: {} (with mistake)", task.name));
        section.push(Row::text(
            "mistake",
            format!(
                "mass {} leaves \"{}\" for \"{}\", costing {} s extra per unit mass",
                mistake.mass(),
                mistake.from_label(),
                mistake.to_label(),
                mistake.extra_cost_seconds()
            ),
        ));
        push_evaluation_rows(&mut section, &degraded, false);
        report.push(section);
    }

    // Optional what-if: exchange the step counts of two letters.
    if let Some(pair) = swap {
        let (a, b) = parse_swap(pair)?;
        let permutation = swap_permutation(task.alphabet.distribution(), &a, &b)?;
        let swapped = reassign_steps(&task.alphabet, &task.cost, &permutation)?;
        let mut section =
            Section::new(format!("task: {} (steps swapped: {a} <-> {b})", task.name));
        push_evaluation_rows(&mut section, &swapped, false);
        report.push(section);
    }

    Ok(report)
}

fn push_evaluation_rows(
    section: &mut Section,
    eval: &inbits::TaskEvaluation,
    include_capacity: bool,
) {
    if include_capacity {
        section.push(Row::number("action capacity", eval.action_capacity, Unit::Bits));
        section.push(Row::number(
            "alphabet compression",
            eval.alphabet_compression,
            Unit::Bits,
        ));
    }
    section.push(Row::number(
        "potential distortion",
        eval.potential_distortion,
        Unit::Bits,
    ));
    section.push(Row::number(
        "expected cost",
        eval.expected_cost_seconds,
        Unit::Seconds,
    ));
    section.push(Row::number("cost-benefit", eval.cost_benefit, Unit::BitsPerSecond));
    if let Some(du) = eval.du {
        section.push(Row::number("device utilization", du, Unit::Ratio));
        section.push(Row::text("device utilization percent", percent_string(du)));
    }
}

fn parse_swap(pair: &str) -> Result<(String, String)> {
    let parts: Vec<&str> = pair.split(',').collect();
    match parts.as_slice() {
        [a, b] if !a.is_empty() && !b.is_empty() && a != b => {
            Ok((a.to_string(), b.to_string()))
        }
        _ => bail!("--swap wants two distinct letters as \"A,B\", got {pair:?}"),
    }
}

/// Identity permutation with `a` and `b` exchanged.
fn swap_permutation(
    d: &ProbabilityDistribution,
    a: &str,
    b: &str,
) -> Result<BTreeMap<String, String>> {
    for label in [a, b] {
        if d.probability(label).is_none() {
            bail!("--swap: letter {label:?} is not in the task alphabet");
        }
    }
    let mut permutation = BTreeMap::new();
    for label in d.labels() {
        let target = if label == a {
            b
        } else if label == b {
            a
        } else {
            label
        };
        permutation.insert(label.to_string(), target.to_string());
    }
    Ok(permutation)
}

fn task_threshold(
    file: &Path,
    task_name: &str,
    from: &str,
    to: &str,
    epsilon_flag: Option<f64>,
) -> Result<Report> {
    let scenario = load_scenario(file)?;
    let policy = epsilon_policy(epsilon_flag, scenario.epsilon)?;
    let task = scenario.task(task_name)?;
    let d = task.alphabet.distribution();
    let threshold = negative_threshold(d, from, to, &policy)?;

    let mut section = Section::new(format!("task: {} (negative-benefit threshold)", task.name));
    section.push(Row::text("shift", format!("\"{from}\" -> \"{to}\"")));
    section.push(Row::number(
        "source letter probability",
        d.probability(from).expect("validated above"),
        Unit::Ratio,
    ));
    match threshold {
        Some(mass) => section.push(Row::number("threshold mass", mass, Unit::Ratio)),
        None => section.push(Row::text(
            "threshold mass",
            "none: the benefit stays non-negative for every feasible shift",
        )),
    }

    let mut report = Report::new();
    report.push(section);
    Ok(report)
}

// ---------------------------------------------------------------------------
// ledger rate
// ---------------------------------------------------------------------------

fn ledger_rate(file: &Path, ledger_name: &str, task_name: &str, seconds: f64) -> Result<Report> {
    let scenario = load_scenario(file)?;
    let NamedLedger { name, ledger } = scenario.ledger(ledger_name)?;
    let task: &ScenarioTask = scenario.task(task_name)?;
    let rate = estimate_f1_f2_rate(ledger, &task.alphabet, seconds)?;

    let mut section = Section::new(format!("ledger: {name} (task: {})", task.name));
    for entry in ledger.entries() {
        section.push(Row::number(
            format!("entry: {} ({})", entry.name(), entry.category().as_str()),
            entry.bits(),
            Unit::Bits,
        ));
    }
    section.push(Row::number("ledger total", ledger.total_bits(), Unit::Bits));
    section.push(Row::number(
        "action entropy (f2 compression)",
        rate.f2_compression,
        Unit::Bits,
    ));
    match rate.f1_compression {
        Some(f1) => {
            section.push(Row::number("upstream share (f1 compression)", f1, Unit::Bits));
            if f1 < 0.0 {
                section.push(Row::text(
                    "warning",
                    "the ledger claims fewer bits than the action itself \
                     carries; the upstream share is negative",
                ));
            }
        }
        None => section.push(Row::text(
            "upstream share (f1 compression)",
            "n/a: empty ledger, the action entropy stands alone",
        )),
    }
    section.push(Row::number("total benefit", rate.total_benefit, Unit::Bits));
    section.push(Row::number("task duration", seconds, Unit::Seconds));
    section.push(Row::number("rate", rate.rate, Unit::BitsPerSecond));

    let mut report = Report::new();
    report.push(section);
    Ok(report)
}

// ---------------------------------------------------------------------------
// study analyze
// ---------------------------------------------------------------------------

fn study_analyze(
    design_path: &Path,
    responses_path: &Path,
    mode: Option<ModeArg>,
    epsilon_flag: Option<f64>,
) -> Result<Report> {
    let design_text = fs::read_to_string(design_path)
        .with_context(|| format!("cannot read {}", design_path.display()))?;
    let mode_override = mode.map(|m| match m {
        ModeArg::Consistent => AggregationMode::ConsistentIndividual,
        ModeArg::Aggregate => AggregationMode::RandomTeamOrSingleParticipant,
    });
    let (name, design) = parse_study_design(&design_text, epsilon_flag, mode_override)
        .with_context(|| format!("{}", design_path.display()))?;

    let csv_file = fs::File::open(responses_path)
        .with_context(|| format!("cannot read {}", responses_path.display()))?;
    let records = ingest_trials(csv_file)
        .with_context(|| format!("{}", responses_path.display()))?;

    let result = study_cost_benefit(&design, &records)?;
    let median = median_response_time_s(&records)
        .expect("records are non-empty after ingestion");

    let mut section = Section::new(match &name {
        Some(n) => format!("study: {n}"),
        None => "study".to_string(),
    });
    section.push(Row::text(
        "aggregation mode",
        match design.aggregation_mode() {
            AggregationMode::ConsistentIndividual => "consistent_individual",
            AggregationMode::RandomTeamOrSingleParticipant => {
                "random_team_or_single_participant"
            }
        },
    ));
    let participants: BTreeSet<&str> =
        records.iter().map(|r| r.participant_id()).collect();
    section.push(Row::text(
        "trials",
        format!("{} from {} participants", records.len(), participants.len()),
    ));
    section.push(Row::number(
        "question stage entropy",
        f64::from(design.total_bits()),
        Unit::Bits,
    ));
    section.push(Row::number(
        "decision stage entropy",
        decision_stage_entropy(&design)?,
        Unit::Bits,
    ));
    section.push(Row::number(
        "alphabet compression",
        result.alphabet_compression,
        Unit::Bits,
    ));
    section.push(Row::number(
        "potential distortion",
        result.potential_distortion,
        Unit::Bits,
    ));
    section.push(Row::number("benefit", result.benefit, Unit::Bits));
    section.push(Row::number(
        "mean response time",
        result.mean_response_time_s,
        Unit::Seconds,
    ));
    section.push(Row::number("median response time", median, Unit::Seconds));
    section.push(Row::number("cost-benefit", result.cost_benefit, Unit::BitsPerSecond));
    for (submodel, accuracy) in &result.per_submodel_accuracy {
        section.push(Row::number(
            format!("accuracy: {submodel}"),
            *accuracy,
            Unit::Ratio,
        ));
    }
    if let Some(bound) = design.stimulus_entropy_upper_bound() {
        section.push(Row::number("stimulus entropy upper bound", bound, Unit::Bits));
    }

    let mut report = Report::new();
    report.push(section);
    Ok(report)
}

/// Entropy of a softened point distribution over the design's answer
/// alphabet; depends only on the alphabet size and the zero-replacement
/// mass, not on which letter is the decision.
fn decision_stage_entropy(design: &StudyDesign) -> Result<f64> {
    let softened = ProbabilityDistribution::one_hot(design.labels(), design.ground_truth())?
        .epsilon_adjusted(design.epsilon())?;
    Ok(softened.entropy())
}

// ---------------------------------------------------------------------------
// dpi demo
// ---------------------------------------------------------------------------

fn dpi_demo(seed: u64, sizes: Option<&str>, trials: u32) -> Result<Report> {
    if trials == 0 {
        bail!("--trials must be at least 1");
    }
    let fixed_sizes = sizes.map(parse_sizes).transpose()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut holds = 0u32;
    let mut min_slack = f64::INFINITY;
    for _ in 0..trials {
        let (n1, n2, n3) = match fixed_sizes {
            Some(s) => s,
            None => (
                rng.random_range(2..=6),
                rng.random_range(2..=6),
                rng.random_range(2..=6),
            ),
        };
        let source = random_distribution(&mut rng, n1);
        let first = random_channel(&mut rng, n1, n2);
        let second = random_channel(&mut rng, n2, n3);
        let check = dpi_check(&source, &first, &second)?;
        if check.holds {
            holds += 1;
        }
        min_slack = min_slack.min(check.i12 - check.i13);
    }

    let mut section = Section::new("data processing check");
    section.push(Row::text("seed", seed.to_string()));
    section.push(Row::text(
        "stage sizes",
        match fixed_sizes {
            Some((a, b, c)) => format!("{a},{b},{c}"),
            None => "random in 2..=6".to_string(),
        },
    ));
    section.push(Row::text("chains held", format!("{holds}/{trials}")));
    section.push(Row::number(
        "minimum information slack",
        min_slack,
        Unit::Bits,
    ));

    let mut report = Report::new();
    report.push(section);
    Ok(report)
}

fn parse_sizes(text: &str) -> Result<(usize, usize, usize)> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        bail!("--sizes wants three comma-separated integers, got {text:?}");
    }
    let mut sizes = [0usize; 3];
    for (slot, part) in sizes.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<usize>()
            .with_context(|| format!("--sizes: {part:?} is not an integer"))?;
        if !(2..=64).contains(slot) {
            bail!("--sizes: each stage needs between 2 and 64 letters, got {slot}");
        }
    }
    Ok((sizes[0], sizes[1], sizes[2]))
}

fn random_distribution(rng: &mut ChaCha8Rng, n: usize) -> ProbabilityDistribution {
    // A tiny floor keeps every weight positive, so the sum can never vanish.
    let weights: Vec<f64> = (0..n).map(|_| 1e-3 + rng.random::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    ProbabilityDistribution::new(
        weights
            .iter()
            .enumerate()
            .map(|(i, w)| (format!("s{i}"), w / total))
            .collect(),
    )
    .expect("positive normalized weights form a valid distribution")
}

fn random_channel(rng: &mut ChaCha8Rng, n_in: usize, n_out: usize) -> StochasticMatrix {
    let rows: Vec<Vec<f64>> = (0..n_in)
        .map(|_| {
            let weights: Vec<f64> = (0..n_out).map(|_| 1e-3 + rng.random::<f64>()).collect();
            let total: f64 = weights.iter().sum();
            weights.iter().map(|w| w / total).collect()
        })
        .collect();
    StochasticMatrix::new(rows).expect("normalized rows form a valid stochastic matrix")
}
