//! Scenario and study-design file parsing.
//!
//! Scenario files are JSON documents with `"schema_version": 1` and four
//! optional top-level lists: `devices`, `tasks`, `ledgers`, and `studies`.
//! Parsing resolves cross-references (a task naming a device) and converts
//! every entry into the corresponding library type, so commands only ever
//! see validated values. Error messages carry a JSON-path-style location
//! (`tasks[1].device`) pointing at the offending entry.
//!
//! A study design may also live in a standalone JSON document with the same
//! shape as one `studies` entry; `parse_study_design` handles that case.

use anyhow::{anyhow, bail, Context, Result};
use inbits::{
    checkbox_alphabet, concat_submodels, gesture_alphabet, radio_alphabet, ActionAlphabet,
    AggregationMode, CostModel, DeviceVariable, EpsilonPolicy, InputDeviceSpec, KnowledgeCategory,
    KnowledgeLedger, LedgerEntry, MistakeModel, StudyDesign, SubModelSpec,
};
use serde::Deserialize;
use std::collections::{BTreeMap, HashSet};

/// Version accepted in the `schema_version` field.
pub const SCHEMA_VERSION: u32 = 1;

// ---------------------------------------------------------------------------
// Raw deserialization layer (mirrors the JSON shape exactly)
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    schema_version: u32,
    #[serde(default)]
    devices: Vec<RawDevice>,
    #[serde(default)]
    tasks: Vec<RawTask>,
    #[serde(default)]
    ledgers: Vec<RawLedger>,
    #[serde(default)]
    studies: Vec<RawStudy>,
    /// File-level default for the zero-replacement mass used by divergence
    /// computations; the `--epsilon` flag takes precedence over it.
    #[serde(default)]
    epsilon: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDevice {
    name: String,
    sampling_rate_hz: f64,
    variables: Vec<RawVariable>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVariable {
    name: String,
    cardinality: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTask {
    name: String,
    alphabet: RawAlphabet,
    cost: RawCost,
    #[serde(default)]
    mistake: Option<RawMistake>,
    #[serde(default)]
    device: Option<String>,
    #[serde(default)]
    task_seconds: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum RawAlphabet {
    /// Mutually exclusive options; probabilities must be listed per option.
    Radio { options: Vec<RawLetter> },
    /// Independent tick boxes; optional per-box tick probabilities
    /// (default one half each).
    Checkbox {
        boxes: u32,
        #[serde(default)]
        per_box_probs: Option<Vec<f64>>,
    },
    /// A palette of elementary strokes, optionally closed under
    /// two-stroke composition.
    Gesture {
        elementary: u32,
        #[serde(default)]
        composite: bool,
    },
    /// Explicit letters, optionally with binary codewords.
    Custom {
        letters: Vec<RawLetter>,
        #[serde(default)]
        codewords: Option<Vec<String>>,
    },
    /// Cross product of independently chosen sub-alphabets.
    Composite { parts: Vec<RawAlphabet> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLetter {
    label: String,
    probability: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCost {
    #[serde(default)]
    steps: Option<BTreeMap<String, u32>>,
    #[serde(default)]
    uniform_steps: Option<u32>,
    unit_step_seconds: f64,
    #[serde(default)]
    fixed_overhead_seconds: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMistake {
    from: String,
    to: String,
    mass: f64,
    #[serde(default)]
    extra_cost_seconds: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLedger {
    name: String,
    entries: Vec<RawLedgerEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLedgerEntry {
    name: String,
    category: String,
    bits: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStudy {
    /// Tolerated in standalone study documents for symmetry with scenarios.
    #[serde(default)]
    schema_version: Option<u32>,
    #[serde(default)]
    name: Option<String>,
    submodels: Vec<RawSubModel>,
    #[serde(default)]
    epsilon: Option<f64>,
    ground_truth: String,
    #[serde(default)]
    aggregation_mode: Option<String>,
    #[serde(default)]
    stimulus_space_size: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSubModel {
    name: String,
    bits: u32,
}

// ---------------------------------------------------------------------------
// Resolved scenario
// ---------------------------------------------------------------------------

/// A fully validated scenario: every entry converted to library types and
/// every cross-reference resolved.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub devices: Vec<InputDeviceSpec>,
    pub tasks: Vec<ScenarioTask>,
    pub ledgers: Vec<NamedLedger>,
    pub studies: Vec<NamedStudy>,
    /// File-level default zero-replacement mass, if the file set one.
    pub epsilon: Option<f64>,
}

/// A task entry with its alphabet, cost model, and optional mistake model,
/// device reference (resolved), and completion-time budget.
#[derive(Debug, Clone)]
pub struct ScenarioTask {
    pub name: String,
    pub alphabet: ActionAlphabet,
    pub cost: CostModel,
    pub mistake: Option<MistakeModel>,
    pub device: Option<InputDeviceSpec>,
    pub task_seconds: Option<f64>,
}

/// A named collection of already-communicated knowledge.
#[derive(Debug, Clone)]
pub struct NamedLedger {
    pub name: String,
    pub ledger: KnowledgeLedger,
}

/// A named study design.
#[derive(Debug, Clone)]
pub struct NamedStudy {
    pub name: String,
    pub design: StudyDesign,
}

impl Scenario {
    pub fn device(&self, name: &str) -> Result<&InputDeviceSpec> {
        self.devices
            .iter()
            .find(|d| d.name() == name)
            .ok_or_else(|| {
                anyhow!(
                    "unknown device \"{name}\"; available: {}",
                    available(self.devices.iter().map(|d| d.name()))
                )
            })
    }

    pub fn task(&self, name: &str) -> Result<&ScenarioTask> {
        self.tasks
            .iter()
            .find(|t| t.name == name)
            .ok_or_else(|| {
                anyhow!(
                    "unknown task \"{name}\"; available: {}",
                    available(self.tasks.iter().map(|t| t.name.as_str()))
                )
            })
    }

    pub fn ledger(&self, name: &str) -> Result<&NamedLedger> {
        self.ledgers
            .iter()
            .find(|l| l.name == name)
            .ok_or_else(|| {
                anyhow!(
                    "unknown ledger \"{name}\"; available: {}",
                    available(self.ledgers.iter().map(|l| l.name.as_str()))
                )
            })
    }
}

fn available<'a>(names: impl Iterator<Item = &'a str>) -> String {
    let joined: Vec<&str> = names.collect();
    if joined.is_empty() {
        "(none)".to_string()
    } else {
        joined.join(", ")
    }
}

// ---------------------------------------------------------------------------
// Parsing entry points
// ---------------------------------------------------------------------------

/// Parse and validate a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let raw = deserialize_json::<RawScenario>(text)?;
    if raw.schema_version != SCHEMA_VERSION {
        bail!(
            "schema_version: expected {SCHEMA_VERSION}, found {}",
            raw.schema_version
        );
    }
    if let Some(eps) = raw.epsilon {
        // Surface a bad file-level value immediately rather than at first use.
        EpsilonPolicy::new(eps).map_err(|e| anyhow!("epsilon: {e}"))?;
    }

    let mut devices = Vec::new();
    let mut seen = HashSet::new();
    for (i, d) in raw.devices.iter().enumerate() {
        if !seen.insert(d.name.clone()) {
            bail!("devices[{i}]: duplicate device name \"{}\"", d.name);
        }
        devices.push(convert_device(d).with_context(|| format!("devices[{i}] (\"{}\")", d.name))?);
    }

    let mut tasks: Vec<ScenarioTask> = Vec::new();
    let mut seen = HashSet::new();
    for (i, t) in raw.tasks.iter().enumerate() {
        if !seen.insert(t.name.clone()) {
            bail!("tasks[{i}]: duplicate task name \"{}\"", t.name);
        }
        let device = match &t.device {
            Some(name) => Some(
                devices
                    .iter()
                    .find(|d| d.name() == name.as_str())
                    .cloned()
                    .ok_or_else(|| {
                        anyhow!(
                            "tasks[{i}].device: unknown device \"{name}\"; available: {}",
                            available(devices.iter().map(|d| d.name()))
                        )
                    })?,
            ),
            None => None,
        };
        let task = convert_task(t, device)
            .with_context(|| format!("tasks[{i}] (\"{}\")", t.name))?;
        tasks.push(task);
    }

    let mut ledgers = Vec::new();
    let mut seen = HashSet::new();
    for (i, l) in raw.ledgers.iter().enumerate() {
        if !seen.insert(l.name.clone()) {
            bail!("ledgers[{i}]: duplicate ledger name \"{}\"", l.name);
        }
        ledgers.push(convert_ledger(l).with_context(|| format!("ledgers[{i}] (\"{}\")", l.name))?);
    }

    let mut studies = Vec::new();
    let mut seen = HashSet::new();
    for (i, s) in raw.studies.iter().enumerate() {
        let name = s
            .name
            .clone()
            .ok_or_else(|| anyhow!("studies[{i}].name: required inside a scenario"))?;
        if !seen.insert(name.clone()) {
            bail!("studies[{i}]: duplicate study name \"{name}\"");
        }
        let design = convert_study(s, None, None)
            .with_context(|| format!("studies[{i}] (\"{name}\")"))?;
        studies.push(NamedStudy { name, design });
    }

    Ok(Scenario {
        devices,
        tasks,
        ledgers,
        studies,
        epsilon: raw.epsilon,
    })
}

/// Parse a standalone study-design document. `epsilon_override` and
/// `mode_override` (both from the command line) take precedence over the
/// document's own fields, which in turn take precedence over the defaults.
pub fn parse_study_design(
    text: &str,
    epsilon_override: Option<f64>,
    mode_override: Option<AggregationMode>,
) -> Result<(Option<String>, StudyDesign)> {
    let raw = deserialize_json::<RawStudy>(text)?;
    if let Some(v) = raw.schema_version {
        if v != SCHEMA_VERSION {
            bail!("schema_version: expected {SCHEMA_VERSION}, found {v}");
        }
    }
    let design = convert_study(&raw, epsilon_override, mode_override)?;
    Ok((raw.name.clone(), design))
}

/// Deserialize with location-annotated errors (`tasks[0].alphabet.kind: …`).
fn deserialize_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|err| {
        let path = err.path().to_string();
        if path == "." {
            anyhow!("{}", err.inner())
        } else {
            anyhow!("{path}: {}", err.inner())
        }
    })
}

// ---------------------------------------------------------------------------
// Conversions into library types
// ---------------------------------------------------------------------------

fn convert_device(raw: &RawDevice) -> Result<InputDeviceSpec> {
    let variables = raw
        .variables
        .iter()
        .map(|v| DeviceVariable::new(&v.name, v.cardinality))
        .collect::<inbits::Result<Vec<_>>>()?;
    Ok(InputDeviceSpec::new(
        &raw.name,
        variables,
        raw.sampling_rate_hz,
    )?)
}

fn convert_alphabet(raw: &RawAlphabet) -> Result<ActionAlphabet> {
    match raw {
        RawAlphabet::Radio { options } => {
            let letters: Vec<(String, f64)> = options
                .iter()
                .map(|o| (o.label.clone(), o.probability))
                .collect();
            Ok(radio_alphabet(letters)?)
        }
        RawAlphabet::Checkbox {
            boxes,
            per_box_probs,
        } => Ok(checkbox_alphabet(*boxes, per_box_probs.as_deref())?),
        RawAlphabet::Gesture {
            elementary,
            composite,
        } => Ok(gesture_alphabet(*elementary, *composite)?),
        RawAlphabet::Custom { letters, codewords } => {
            let letters: Vec<(String, f64)> = letters
                .iter()
                .map(|o| (o.label.clone(), o.probability))
                .collect();
            Ok(ActionAlphabet::custom(letters, codewords.clone())?)
        }
        RawAlphabet::Composite { parts } => {
            let converted = parts
                .iter()
                .map(convert_alphabet)
                .collect::<Result<Vec<_>>>()?;
            Ok(concat_submodels(&converted)?)
        }
    }
}

fn convert_task(raw: &RawTask, device: Option<InputDeviceSpec>) -> Result<ScenarioTask> {
    let alphabet = convert_alphabet(&raw.alphabet).context("alphabet")?;
    let cost = match (&raw.cost.steps, raw.cost.uniform_steps) {
        (Some(_), Some(_)) => {
            bail!("cost: give either per-letter steps or uniform_steps, not both")
        }
        (None, None) => bail!("cost: one of steps or uniform_steps is required"),
        (Some(steps), None) => CostModel::new(
            steps.clone(),
            raw.cost.unit_step_seconds,
            raw.cost.fixed_overhead_seconds,
        )
        .context("cost")?,
        (None, Some(n)) => CostModel::uniform(
            alphabet.distribution().labels().map(String::from),
            n,
            raw.cost.unit_step_seconds,
            raw.cost.fixed_overhead_seconds,
        )
        .context("cost")?,
    };
    // Catch label mismatches at parse time instead of at evaluation time.
    cost.expected_seconds(alphabet.distribution())
        .context("cost")?;
    let mistake = match &raw.mistake {
        Some(m) => {
            let model = MistakeModel::new(&m.from, &m.to, m.mass, m.extra_cost_seconds)
                .context("mistake")?;
            for label in [&m.from, &m.to] {
                if alphabet.distribution().probability(label).is_none() {
                    bail!("mistake: label \"{label}\" is not in the task alphabet");
                }
            }
            Some(model)
        }
        None => None,
    };
    if let Some(t) = raw.task_seconds {
        if !(t.is_finite() && t > 0.0) {
            bail!("task_seconds: must be a finite positive number of seconds");
        }
    }
    Ok(ScenarioTask {
        name: raw.name.clone(),
        alphabet,
        cost,
        mistake,
        device,
        task_seconds: raw.task_seconds,
    })
}

fn convert_ledger(raw: &RawLedger) -> Result<NamedLedger> {
    let mut entries = Vec::new();
    for (i, e) in raw.entries.iter().enumerate() {
        let category: KnowledgeCategory = e
            .category
            .parse()
            .map_err(|err| anyhow!("entries[{i}].category: {err}"))?;
        let entry = LedgerEntry::new(&e.name, category, e.bits)
            .with_context(|| format!("entries[{i}]"))?;
        entries.push(entry);
    }
    Ok(NamedLedger {
        name: raw.name.clone(),
        ledger: KnowledgeLedger::new(entries),
    })
}

fn convert_study(
    raw: &RawStudy,
    epsilon_override: Option<f64>,
    mode_override: Option<AggregationMode>,
) -> Result<StudyDesign> {
    let submodels = raw
        .submodels
        .iter()
        .map(|s| SubModelSpec::new(&s.name, s.bits))
        .collect::<inbits::Result<Vec<_>>>()?;
    let epsilon = match epsilon_override.or(raw.epsilon) {
        Some(e) => EpsilonPolicy::new(e).map_err(|err| anyhow!("epsilon: {err}"))?,
        None => EpsilonPolicy::default(),
    };
    let file_mode = match raw.aggregation_mode.as_deref() {
        None => AggregationMode::ConsistentIndividual,
        Some("consistent_individual") => AggregationMode::ConsistentIndividual,
        Some("random_team_or_single_participant") => {
            AggregationMode::RandomTeamOrSingleParticipant
        }
        Some(other) => bail!(
            "aggregation_mode: unknown mode \"{other}\"; expected \
             consistent_individual or random_team_or_single_participant"
        ),
    };
    Ok(StudyDesign::new(
        submodels,
        epsilon,
        &raw.ground_truth,
        mode_override.unwrap_or(file_mode),
        raw.stimulus_space_size,
    )?)
}
